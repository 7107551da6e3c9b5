//! Quadratic étale algebras F[X]/(X^2 - m) (odd characteristic, or Q) and
//! F[X]/(X^2 + X + a) (characteristic 2).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::factor::{factorize, FactorBound};
use super::hilbert::{splitting, Place, Splitting};
use super::{Elem, Field, Rational};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleQuadratic {
    pub base: Field,
    /// m in odd characteristic / over Q, the Arf datum a in characteristic 2.
    pub datum: Elem,
    pub split: bool,
}

/// Squarefree integer representing the square class of a nonzero rational.
pub fn squarefree_class(r: &Rational) -> Result<BigInt> {
    if r.is_zero() {
        return Err(invalid!("zero has no square class"));
    }
    let n = r.numer() * r.denom();
    let mut out = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    for (p, e) in factorize(&n, FactorBound::default())? {
        if e % 2 == 1 {
            out *= BigInt::from(p);
        }
    }
    Ok(out)
}

pub fn quad_ext_info(base: &Field, datum: Elem) -> Result<EtaleQuadratic> {
    if !base.contains(&datum) {
        return Err(Error::FieldMismatch("datum is not in the base field".into()));
    }
    let split = if base.is_char_two() {
        // a in {x^2 + x}
        !base.quadratic_roots(&base.one(), &datum).is_empty()
    } else {
        if datum.is_zero() {
            return Err(invalid!("m = 0 does not define a separable quadratic algebra"));
        }
        base.is_square(&datum)
    };
    Ok(EtaleQuadratic { base: base.clone(), datum, split })
}

impl EtaleQuadratic {
    /// The split algebra F x F, presented with m = 1 (or a = 0).
    pub fn split_over(base: &Field) -> Self {
        let datum = if base.is_char_two() { base.zero() } else { base.one() };
        EtaleQuadratic { base: base.clone(), datum, split: true }
    }

    /// Relation X^2 = t X + n of the generator.
    pub fn min_poly(&self) -> (Elem, Elem) {
        if self.base.is_char_two() {
            (self.base.one(), self.datum.clone())
        } else {
            (self.base.zero(), self.datum.clone())
        }
    }

    /// Trace of the generator X, i.e. the t in X + iota(X) = t.
    pub fn generator_trace(&self) -> Elem {
        self.min_poly().0
    }

    /// Behaviour of a place of Q in this extension.
    pub fn splitting_at(&self, v: Place) -> Result<Splitting> {
        match &self.datum {
            Elem::Q(m) => splitting(m, v),
            Elem::F(_) => Err(Error::Unsupported("place splitting is defined over Q only".into())),
        }
    }

    /// Isomorphism of quadratic étale algebras: equal square classes (or
    /// Artin-Schreier classes in characteristic 2).
    pub fn is_isomorphic(&self, other: &EtaleQuadratic) -> bool {
        if self.base != other.base {
            return false;
        }
        if self.split || other.split {
            return self.split == other.split;
        }
        if self.base.is_char_two() {
            let sum = &self.datum + &other.datum;
            !self.base.quadratic_roots(&self.base.one(), &sum).is_empty()
        } else {
            let ratio = &self.datum * &other.datum.inv().expect("nonzero datum");
            self.base.is_square(&ratio)
        }
    }

    /// Squarefree integer m' with Q(sqrt m) = Q(sqrt m'); 1 when split.
    pub fn rational_class(&self) -> Result<BigInt> {
        match &self.datum {
            Elem::Q(m) => squarefree_class(m),
            Elem::F(_) => Err(Error::Unsupported("square class over Q only".into())),
        }
    }

    pub fn describe(&self) -> alloc::string::String {
        if self.split {
            alloc::format!("{}x{}", self.base, self.base)
        } else if self.base.is_char_two() {
            alloc::format!("{}[X]/(X^2+X+{})", self.base, self.datum)
        } else {
            alloc::format!("{}(sqrt {})", self.base, self.datum)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn split_flags() {
        let q = Field::rationals();
        assert!(quad_ext_info(&q, q.from_i64(1)).unwrap().split);
        assert!(quad_ext_info(&q, q.from_i64(0)).is_err());
        let gi = quad_ext_info(&q, q.from_i64(-1)).unwrap();
        assert!(!gi.split);
        assert_eq!(gi.splitting_at(Place::Prime(5)).unwrap(), Splitting::Split);
        assert_eq!(gi.splitting_at(Place::Prime(3)).unwrap(), Splitting::Inert);
        let f2 = Field::prime_field(2).unwrap();
        // exhaustive: x^2 + x + 1 has no root in GF(2)
        assert!(!quad_ext_info(&f2, f2.one()).unwrap().split);
        assert!(quad_ext_info(&f2, f2.zero()).unwrap().split);
    }

    #[test]
    fn isomorphism_by_square_class() {
        let q = Field::rationals();
        let a = quad_ext_info(&q, q.from_i64(-1)).unwrap();
        let b = quad_ext_info(&q, q.from_i64(-4)).unwrap();
        let c = quad_ext_info(&q, q.from_i64(2)).unwrap();
        assert!(a.is_isomorphic(&b));
        assert!(!a.is_isomorphic(&c));
        assert_eq!(squarefree_class(&rat(-12, 5)).unwrap(), BigInt::from(-15));
    }
}

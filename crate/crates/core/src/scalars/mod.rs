//! Exact base fields: the rationals and desk-scale finite fields.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand_core::RngCore;

use crate::error::{invalid, Error, Result};

pub mod factor;
pub mod gf;
pub mod hilbert;
pub mod quadext;

pub use gf::GfCtx;
pub use hilbert::{hilbert_symbol, Place, Splitting};
pub use quadext::{quad_ext_info, EtaleQuadratic};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A base field.
#[derive(Clone, Debug)]
pub enum Field {
    Rationals,
    Finite(Arc<GfCtx>),
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Field::Rationals, Field::Rationals) => true,
            (Field::Finite(a), Field::Finite(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}
impl Eq for Field {}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Finite(c) if c.degree() == 1 => write!(f, "GF({})", c.characteristic()),
            Field::Finite(c) => write!(f, "GF({}^{})", c.characteristic(), c.degree()),
        }
    }
}

/// A field element. Rationals are kept in lowest terms with positive
/// denominator; finite-field elements are reduced table indices.
#[derive(Clone, Debug)]
pub enum Elem {
    Q(Rational),
    F(Gf),
}

#[derive(Clone, Debug)]
pub struct Gf {
    ctx: Arc<GfCtx>,
    v: u32,
}

impl Gf {
    pub fn index(&self) -> u32 {
        self.v
    }
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Elem::Q(a), Elem::Q(b)) => a == b,
            (Elem::F(a), Elem::F(b)) => a.v == b.v && (Arc::ptr_eq(&a.ctx, &b.ctx) || a.ctx == b.ctx),
            _ => false,
        }
    }
}
impl Eq for Elem {}

impl Field {
    pub fn rationals() -> Self {
        Field::Rationals
    }

    /// GF(p^k) with an automatically chosen defining polynomial.
    pub fn finite(p: u32, k: u32) -> Result<Self> {
        Ok(Field::Finite(Arc::new(GfCtx::new(p, k)?)))
    }

    pub fn prime_field(p: u32) -> Result<Self> {
        Self::finite(p, 1)
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Finite(c) => c.characteristic(),
        }
    }

    pub fn is_char_two(&self) -> bool {
        self.characteristic() == 2
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Finite(c) => Some(c.order() as u64),
        }
    }

    pub fn zero(&self) -> Elem {
        self.from_i64(0)
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match self {
            Field::Rationals => Elem::Q(Rational::from_integer(BigInt::from(n))),
            Field::Finite(c) => Elem::F(Gf { ctx: c.clone(), v: c.from_int(n) }),
        }
    }

    /// n/d, failing when d vanishes in the field.
    pub fn from_ratio(&self, n: i64, d: i64) -> Result<Elem> {
        let den = self.from_i64(d);
        let inv = den.inv().ok_or_else(|| invalid!("denominator {d} vanishes in {self}"))?;
        Ok(&self.from_i64(n) * &inv)
    }

    pub fn from_rational(&self, r: &Rational) -> Result<Elem> {
        match self {
            Field::Rationals => Ok(Elem::Q(r.clone())),
            Field::Finite(c) => {
                let p = BigInt::from(c.characteristic());
                let n = (r.numer() % &p + &p) % &p;
                let d = (r.denom() % &p + &p) % &p;
                let n = self.from_i64(i64::try_from(n).unwrap());
                let d = self.from_i64(i64::try_from(d).unwrap());
                let inv = d.inv().ok_or_else(|| invalid!("denominator of {r} vanishes in {self}"))?;
                Ok(&n * &inv)
            }
        }
    }

    /// Element with the given table index (finite fields only).
    pub fn from_index(&self, v: u32) -> Result<Elem> {
        match self {
            Field::Finite(c) if v < c.order() => Ok(Elem::F(Gf { ctx: c.clone(), v })),
            _ => Err(invalid!("index {v} is not an element of {self}")),
        }
    }

    /// All elements, for finite fields.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        match self {
            Field::Rationals => None,
            Field::Finite(c) => {
                Some((0..c.order()).map(|v| Elem::F(Gf { ctx: c.clone(), v })).collect())
            }
        }
    }

    pub fn contains(&self, e: &Elem) -> bool {
        match (self, e) {
            (Field::Rationals, Elem::Q(_)) => true,
            (Field::Finite(c), Elem::F(g)) => Arc::ptr_eq(c, &g.ctx) || **c == *g.ctx,
            _ => false,
        }
    }

    /// Square test. Over Q this is exact (integer square roots of numerator
    /// and denominator); over GF(q) it is Euler's criterion.
    pub fn is_square(&self, x: &Elem) -> bool {
        self.sqrt(x).is_some()
    }

    pub fn sqrt(&self, x: &Elem) -> Option<Elem> {
        match x {
            Elem::Q(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                    Some(Elem::Q(Rational::new(n, d)))
                } else {
                    None
                }
            }
            Elem::F(g) => g.ctx.sqrt(g.v).map(|v| Elem::F(Gf { ctx: g.ctx.clone(), v })),
        }
    }

    /// Roots of X^2 + bX + c in the field.
    pub fn quadratic_roots(&self, b: &Elem, c: &Elem) -> Vec<Elem> {
        if self.characteristic() != 2 {
            let disc = b * b - &self.from_i64(4) * c;
            let half = self.from_ratio(1, 2).expect("odd characteristic");
            match self.sqrt(&disc) {
                Some(s) if s.is_zero() => alloc::vec![&(-b) * &half],
                Some(s) => alloc::vec![&(&(-b) + &s) * &half, &(&(-b) - &s) * &half],
                None => Vec::new(),
            }
        } else {
            self.elements()
                .expect("char 2 fields here are finite")
                .into_iter()
                .filter(|x| (&(x * x) + &(b * x) + c.clone()).is_zero())
                .collect()
        }
    }

    /// Random element; over Q an integer of absolute value at most `height`.
    pub fn random(&self, rng: &mut dyn RngCore, height: u32) -> Elem {
        match self {
            Field::Rationals => {
                let span = 2 * height as u64 + 1;
                let v = (rng.next_u64() % span) as i64 - height as i64;
                self.from_i64(v)
            }
            Field::Finite(c) => {
                Elem::F(Gf { ctx: c.clone(), v: (rng.next_u64() % c.order() as u64) as u32 })
            }
        }
    }

    /// Parses "n", "n/d" (rationals, or residues in a finite field) or, for
    /// GF(p^k) with k > 1, "#i" for the element of table index i.
    pub fn parse(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        if let Some(idx) = s.strip_prefix('#') {
            let v: u32 = idx.parse().map_err(|_| invalid!("bad element index {s:?}"))?;
            return self.from_index(v);
        }
        let r = parse_rational(s)?;
        self.from_rational(&r)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| invalid!("bad rational literal {s:?}"))?;
    let d: BigInt = d.parse().map_err(|_| invalid!("bad rational literal {s:?}"))?;
    if d.is_zero() {
        return Err(invalid!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(n, d))
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Q(r) => r.is_zero(),
            Elem::F(g) => g.v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Elem::Q(r) => r.is_one(),
            Elem::F(g) => g.v == 1,
        }
    }

    pub fn inv(&self) -> Option<Elem> {
        match self {
            Elem::Q(r) if r.is_zero() => None,
            Elem::Q(r) => Some(Elem::Q(r.recip())),
            Elem::F(g) => g.ctx.inv(g.v).map(|v| Elem::F(Gf { ctx: g.ctx.clone(), v })),
        }
    }

    pub fn pow(&self, mut e: u64) -> Elem {
        let mut base = self.clone();
        let mut acc = self.field_one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn field_one(&self) -> Elem {
        match self {
            Elem::Q(_) => Elem::Q(Rational::one()),
            Elem::F(g) => Elem::F(Gf { ctx: g.ctx.clone(), v: 1 }),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Elem::Q(_) => Field::Rationals,
            Elem::F(g) => Field::Finite(g.ctx.clone()),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Elem::Q(r) => Some(r),
            Elem::F(_) => None,
        }
    }

    pub fn to_rational(&self) -> Result<Rational> {
        self.as_rational()
            .cloned()
            .ok_or_else(|| Error::Unsupported("rational value required".to_string()))
    }

    /// Serialized form: "num/den" (den omitted when 1) or a finite-field
    /// residue / "#index".
    pub fn to_literal(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Q(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Elem::Q(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Elem::F(g) if g.ctx.degree() == 1 => write!(f, "{}", g.v),
            Elem::F(g) => write!(f, "#{}", g.v),
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between elements of different fields")
}

impl<'a> Add<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn add(self, rhs: &'a Elem) -> Elem {
        match (self, rhs) {
            (Elem::Q(a), Elem::Q(b)) => Elem::Q(a + b),
            (Elem::F(a), Elem::F(b)) => Elem::F(Gf { ctx: a.ctx.clone(), v: a.ctx.add(a.v, b.v) }),
            _ => mismatch(),
        }
    }
}

impl<'a> Sub<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn sub(self, rhs: &'a Elem) -> Elem {
        match (self, rhs) {
            (Elem::Q(a), Elem::Q(b)) => Elem::Q(a - b),
            (Elem::F(a), Elem::F(b)) => {
                Elem::F(Gf { ctx: a.ctx.clone(), v: a.ctx.add(a.v, a.ctx.neg(b.v)) })
            }
            _ => mismatch(),
        }
    }
}

impl<'a> Mul<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn mul(self, rhs: &'a Elem) -> Elem {
        match (self, rhs) {
            (Elem::Q(a), Elem::Q(b)) => Elem::Q(a * b),
            (Elem::F(a), Elem::F(b)) => Elem::F(Gf { ctx: a.ctx.clone(), v: a.ctx.mul(a.v, b.v) }),
            _ => mismatch(),
        }
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        match self {
            Elem::Q(a) => Elem::Q(-a),
            Elem::F(a) => Elem::F(Gf { ctx: a.ctx.clone(), v: a.ctx.neg(a.v) }),
        }
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: &'a Elem) -> Elem {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Elem> for &'a Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                self.$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

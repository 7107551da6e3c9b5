//! 2-torsion Brauer classes over Q, over quadratic extensions of Q (as
//! restrictions of Q-classes), over Q x Q, and over finite fields.
//!
//! A class over Q is determined by the set of places where its local
//! invariant is -1. Index 2 classes are quaternion algebras, so the index is
//! 1 or 2 and the metric d takes values in {0, 1}.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{invalid, Error, Result};
use crate::scalars::factor::FactorBound;
use crate::scalars::hilbert::{hilbert_symbol, relevant_places, Place, Splitting};
use crate::scalars::quadext::EtaleQuadratic;
use crate::scalars::{Field, Rational};

/// A quaternion symbol (a, b) with nonzero rational entries.
pub type Symbol = (Rational, Rational);

/// Where a class lives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassBase {
    Rationals,
    /// Any finite field; every class is trivial.
    Finite(Field),
    /// A quadratic étale algebra over Q; split means Q x Q.
    Quadratic(EtaleQuadratic),
}

impl ClassBase {
    pub fn of_field(f: &Field) -> Self {
        match f {
            Field::Rationals => ClassBase::Rationals,
            other => ClassBase::Finite(other.clone()),
        }
    }

    pub fn is_split_pair(&self) -> bool {
        matches!(self, ClassBase::Quadratic(e) if e.split)
    }

    fn matches(&self, other: &ClassBase) -> bool {
        match (self, other) {
            (ClassBase::Quadratic(a), ClassBase::Quadratic(b)) => a.is_isomorphic(b),
            (a, b) => a == b,
        }
    }
}

impl fmt::Display for ClassBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassBase::Rationals => write!(f, "Q"),
            ClassBase::Finite(k) => write!(f, "{k}"),
            ClassBase::Quadratic(e) => write!(f, "{}", e.describe()),
        }
    }
}

/// A 2-torsion Brauer class given by quaternion symbols over Q.
///
/// Over a quadratic field S the class is the restriction of the product of
/// `parts[0]`. Over Q x Q there are two components, `parts[0]` and
/// `parts[1]`. Over Q there is exactly one part.
#[derive(Clone, Debug)]
pub struct BrauerClass2 {
    base: ClassBase,
    parts: Vec<Vec<Symbol>>,
}

/// Local invariants: the places where the invariant is -1.
///
/// Over a quadratic field the places are the Q-places that split in S, each
/// standing for both places of S above it.
pub type Support = BTreeSet<Place>;

impl BrauerClass2 {
    pub fn trivial(base: ClassBase) -> Self {
        let parts = if base.is_split_pair() { alloc::vec![Vec::new(), Vec::new()] } else { alloc::vec![Vec::new()] };
        BrauerClass2 { base, parts }
    }

    pub fn over_q(symbols: Vec<Symbol>) -> Result<Self> {
        check_symbols(&symbols)?;
        Ok(BrauerClass2 { base: ClassBase::Rationals, parts: alloc::vec![symbols] })
    }

    pub fn symbol(a: Rational, b: Rational) -> Result<Self> {
        Self::over_q(alloc::vec![(a, b)])
    }

    pub fn from_ints(symbols: &[(i64, i64)]) -> Result<Self> {
        Self::over_q(symbols.iter().map(|(a, b)| (int(*a), int(*b))).collect())
    }

    /// Class over a base field, accepting any symbols; over finite fields
    /// the symbols are dropped since the class is trivial.
    pub fn over_field(field: &Field, symbols: Vec<Symbol>) -> Result<Self> {
        match field {
            Field::Rationals => Self::over_q(symbols),
            f => Ok(Self::trivial(ClassBase::Finite(f.clone()))),
        }
    }

    /// Class over Q x Q with the given components.
    pub fn split_pair(plus: Vec<Symbol>, minus: Vec<Symbol>) -> Result<Self> {
        check_symbols(&plus)?;
        check_symbols(&minus)?;
        Ok(BrauerClass2 { base: ClassBase::Quadratic(EtaleQuadratic::split_over(&Field::Rationals)), parts: alloc::vec![plus, minus] })
    }

    pub fn base(&self) -> &ClassBase {
        &self.base
    }

    pub fn parts(&self) -> &[Vec<Symbol>] {
        &self.parts
    }

    /// Symbols of a class over Q (or of its single component).
    pub fn symbols(&self) -> &[Symbol] {
        &self.parts[0]
    }

    /// For a class over Q x Q, the two components as classes over Q.
    pub fn components(&self) -> Option<(BrauerClass2, BrauerClass2)> {
        if !self.base.is_split_pair() {
            return None;
        }
        let mk = |s: &Vec<Symbol>| BrauerClass2 { base: ClassBase::Rationals, parts: alloc::vec![s.clone()] };
        Some((mk(&self.parts[0]), mk(&self.parts[1])))
    }

    /// Local invariants. For Q x Q use [`Self::components`].
    pub fn local_invariants(&self) -> Result<Support> {
        match &self.base {
            ClassBase::Finite(_) => Ok(Support::new()),
            ClassBase::Rationals => rational_support(&self.parts[0]),
            ClassBase::Quadratic(s) if s.split => Err(Error::Unsupported(
                "a class over Q x Q has one invariant map per component".into(),
            )),
            ClassBase::Quadratic(s) => {
                let sup = rational_support(&self.parts[0])?;
                let mut out = Support::new();
                for v in sup {
                    // local degree 2 kills a 2-torsion invariant
                    if s.splitting_at(v)? == Splitting::Split {
                        out.insert(v);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Invariant maps of every component (one for fields, two for Q x Q).
    pub fn component_invariants(&self) -> Result<Vec<Support>> {
        match self.components() {
            Some((a, b)) => Ok(alloc::vec![a.local_invariants()?, b.local_invariants()?]),
            None => Ok(alloc::vec![self.local_invariants()?]),
        }
    }

    pub fn is_trivial(&self) -> Result<bool> {
        Ok(self.component_invariants()?.iter().all(BTreeSet::is_empty))
    }

    pub fn equals(&self, other: &BrauerClass2) -> Result<bool> {
        self.same_base(other)?;
        Ok(self.component_invariants()? == other.component_invariants()?)
    }

    fn same_base(&self, other: &BrauerClass2) -> Result<()> {
        if self.base.matches(&other.base) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(alloc::format!("classes over {} and {}", self.base, other.base)))
        }
    }

    pub fn product(&self, other: &BrauerClass2) -> Result<BrauerClass2> {
        self.same_base(other)?;
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Ok(BrauerClass2 { base: self.base.clone(), parts })
    }

    /// The opposite class. Quaternion algebras are isomorphic to their
    /// opposites through the canonical involution, so this is the class itself.
    pub fn opposite(&self) -> BrauerClass2 {
        self.clone()
    }

    /// The class with scalars twisted by the nontrivial automorphism of the
    /// base. Restricted classes are fixed; over Q x Q the components swap.
    pub fn conjugate(&self) -> BrauerClass2 {
        let mut c = self.clone();
        if self.base.is_split_pair() {
            c.parts.swap(0, 1);
        }
        c
    }

    /// Restriction of a class over Q (or a finite field) to a quadratic
    /// étale algebra S.
    pub fn restrict(&self, s: &EtaleQuadratic) -> Result<BrauerClass2> {
        match &self.base {
            ClassBase::Finite(_) => Ok(BrauerClass2::trivial(ClassBase::Finite(s.base.clone()))),
            ClassBase::Rationals => {
                if s.base != Field::Rationals {
                    return Err(Error::FieldMismatch("extension is not over Q".into()));
                }
                let base = ClassBase::Quadratic(s.clone());
                let parts = if s.split {
                    alloc::vec![self.parts[0].clone(), self.parts[0].clone()]
                } else {
                    alloc::vec![self.parts[0].clone()]
                };
                Ok(BrauerClass2 { base, parts })
            }
            ClassBase::Quadratic(_) => Err(invalid!("class is already over a quadratic extension")),
        }
    }

    /// Index: 1 or 2 (lcm over components for Q x Q).
    pub fn index(&self) -> Result<u32> {
        Ok(if self.is_trivial()? { 1 } else { 2 })
    }

    pub fn log2_index(&self) -> Result<u32> {
        Ok(if self.is_trivial()? { 0 } else { 1 })
    }

    pub fn describe(&self) -> String {
        let sym = |s: &Vec<Symbol>| {
            let v: Vec<String> = s.iter().map(|(a, b)| alloc::format!("({a},{b})")).collect();
            if v.is_empty() { String::from("1") } else { v.join("") }
        };
        match self.parts.len() {
            1 => alloc::format!("{} over {}", sym(&self.parts[0]), self.base),
            _ => alloc::format!("[{}] x [{}] over {}", sym(&self.parts[0]), sym(&self.parts[1]), self.base),
        }
    }
}

/// d(c1, c2) = log2 ind(c1 (x) c2^op).
pub fn metric(c1: &BrauerClass2, c2: &BrauerClass2) -> Result<u32> {
    c1.product(&c2.opposite())?.log2_index()
}

/// Restriction together with the norm-triviality flag. Corestriction after
/// restriction is squaring, which kills 2-torsion, so the flag is always set.
pub fn restrict_and_norm(c: &BrauerClass2, s: &EtaleQuadratic) -> Result<(BrauerClass2, bool)> {
    Ok((c.restrict(s)?, true))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn check_symbols(symbols: &[Symbol]) -> Result<()> {
    for (a, b) in symbols {
        if a == &Rational::from_integer(BigInt::from(0)) || b == &Rational::from_integer(BigInt::from(0)) {
            return Err(invalid!("quaternion symbol with a zero entry"));
        }
    }
    Ok(())
}

fn rational_support(symbols: &[Symbol]) -> Result<Support> {
    let entries: Vec<Rational> = symbols.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    let mut out = Support::new();
    for v in relevant_places(&entries, FactorBound::default())? {
        let mut s = 1;
        for (a, b) in symbols {
            s *= hilbert_symbol(a, b, v)?;
        }
        if s == -1 {
            out.insert(v);
        }
    }
    Ok(out)
}

/// Support of the quaternion algebra (a, b) over Q.
pub fn symbol_support(a: &Rational, b: &Rational) -> Result<Support> {
    rational_support(&[(a.clone(), b.clone())])
}

/// Finds integers (a, b) with the quaternion algebra (a, b) having exactly
/// the given ramification. `budget` bounds |a| and |b|.
pub fn find_symbol(target: &Support, budget: i64) -> Result<(i64, i64)> {
    if target.len() % 2 == 1 {
        return Err(invalid!("odd number of ramified places"));
    }
    if target.is_empty() {
        return Ok((1, 1));
    }
    // a must be a non-square at every ramified place; start from the
    // product of the finite ramified primes.
    let finite: BigInt = target
        .iter()
        .filter_map(|v| match v {
            Place::Prime(p) => Some(BigInt::from(*p)),
            Place::Infinite => None,
        })
        .product();
    let seed = finite.to_i64().unwrap_or(1).max(1);
    let mut cands: Vec<i64> = Vec::new();
    for s in [seed, -seed] {
        cands.push(s);
    }
    for n in 1..=budget {
        cands.push(-n);
        cands.push(n);
    }
    for a in &cands {
        if *a == 0 || a.abs() > budget.max(seed) {
            continue;
        }
        for b in &cands {
            if *b == 0 || b.abs() > budget.max(seed) {
                continue;
            }
            if symbol_support(&int(*a), &int(*b))? == *target {
                return Ok((*a, *b));
            }
        }
    }
    Err(Error::SearchExhausted(alloc::format!("no symbol with |a|,|b| <= {budget} has the requested ramification")))
}

/// Symbol (a, b) over Q whose restriction to Q(sqrt m) has the given
/// support (a set of Q-places that split in Q(sqrt m)). Any Q-class whose
/// ramification agrees at split places and is otherwise placed at non-split
/// places works; the search looks for one directly.
pub fn find_symbol_over(s: &EtaleQuadratic, target: &Support, budget: i64) -> Result<(i64, i64)> {
    if s.split {
        return find_symbol(target, budget);
    }
    for v in target {
        if s.splitting_at(*v)? != Splitting::Split {
            return Err(invalid!("place {v} does not split in {}", s.describe()));
        }
    }
    if target.is_empty() {
        return Ok((1, 1));
    }
    for bound in [budget / 4, budget] {
        for a in -bound..=bound {
            for b in -bound..=bound {
                if a == 0 || b == 0 {
                    continue;
                }
                let cls = BrauerClass2::from_ints(&[(a, b)])?.restrict(s)?;
                if cls.local_invariants()? == *target {
                    return Ok((a, b));
                }
            }
        }
    }
    Err(Error::SearchExhausted(alloc::format!("no symbol with |a|,|b| <= {budget} restricts as requested")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::quadext::quad_ext_info;

    fn hamilton() -> BrauerClass2 {
        BrauerClass2::from_ints(&[(-1, -1)]).unwrap()
    }

    #[test]
    fn hamilton_ramification() {
        let sup = hamilton().local_invariants().unwrap();
        assert_eq!(sup.into_iter().collect::<Vec<_>>(), alloc::vec![Place::Infinite, Place::Prime(2)]);
        assert!(hamilton().product(&hamilton()).unwrap().is_trivial().unwrap());
    }

    #[test]
    fn restriction_to_gaussian_field_splits() {
        let q = Field::rationals();
        let s = quad_ext_info(&q, q.from_i64(-1)).unwrap();
        let (r, norm) = restrict_and_norm(&hamilton(), &s).unwrap();
        assert!(r.is_trivial().unwrap());
        assert!(norm);
    }

    #[test]
    fn restriction_to_sqrt2_keeps_nothing_at_5() {
        let q = Field::rationals();
        let s = quad_ext_info(&q, q.from_i64(2)).unwrap();
        let c = BrauerClass2::from_ints(&[(2, 5)]).unwrap();
        let full = c.local_invariants().unwrap();
        assert!(full.contains(&Place::Prime(5)));
        let r = c.restrict(&s).unwrap().local_invariants().unwrap();
        assert!(!r.contains(&Place::Prime(5)));
    }

    #[test]
    fn metric_values() {
        let t = BrauerClass2::trivial(ClassBase::Rationals);
        assert_eq!(metric(&hamilton(), &t).unwrap(), 1);
        assert_eq!(metric(&hamilton(), &hamilton()).unwrap(), 0);
        let f3 = Field::prime_field(3).unwrap();
        let a = BrauerClass2::over_field(&f3, alloc::vec![(int(-1), int(-1))]).unwrap();
        let b = BrauerClass2::trivial(ClassBase::Finite(f3));
        assert_eq!(metric(&a, &b).unwrap(), 0);
    }

    #[test]
    fn split_pair_index_is_lcm() {
        let c = BrauerClass2::split_pair(alloc::vec![(int(-1), int(-1))], Vec::new()).unwrap();
        assert_eq!(c.index().unwrap(), 2);
        let (p, m) = c.components().unwrap();
        assert!(!p.is_trivial().unwrap());
        assert!(m.is_trivial().unwrap());
        assert!(c.conjugate().components().unwrap().0.is_trivial().unwrap());
    }

    #[test]
    fn symbol_search_hits_target() {
        let sup = hamilton().local_invariants().unwrap();
        let (a, b) = find_symbol(&sup, 20).unwrap();
        assert_eq!(symbol_support(&int(a), &int(b)).unwrap(), sup);
        let sup35: Support = [Place::Prime(3), Place::Prime(5)].into_iter().collect();
        let (a, b) = find_symbol(&sup35, 20).unwrap();
        assert_eq!(symbol_support(&int(a), &int(b)).unwrap(), sup35);
    }
}

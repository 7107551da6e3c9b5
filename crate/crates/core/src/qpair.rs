//! Quadratic pairs (A, sigma, f).

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{
    involution_attach, involution_type, kron, matrix_algebra_over_field, quaternion_conjugation, tensor,
    AlgebraWithInvolution, InvolutionKind, InvolutionType, StructureAlgebra,
};
use crate::error::{invalid, Error, Result};
use crate::linalg::{add, dot, Echelon, Matrix, Vector};
use crate::quadform::QuadraticSpace;
use crate::scalars::{Elem, Field};

#[derive(Clone, Debug)]
pub struct QuadraticPair {
    pub awi: AlgebraWithInvolution,
    /// Values of f on the Sym basis of `awi`.
    pub f: Vector,
    pub ell: Vector,
    pub degree: usize,
}

/// A quadratic pair, or (characteristic 2 only) an odd-dimensional
/// semiregular quadratic space standing in for a pair of odd degree.
#[derive(Clone, Debug)]
pub enum ExtendedQuadraticPair {
    Pair(QuadraticPair),
    OddSpace(QuadraticSpace),
}

impl ExtendedQuadraticPair {
    pub fn degree(&self) -> usize {
        match self {
            ExtendedQuadraticPair::Pair(p) => p.degree,
            ExtendedQuadraticPair::OddSpace(q) => q.dim(),
        }
    }

    pub fn odd_space(q: QuadraticSpace) -> Result<Self> {
        use crate::quadform::{regularity_classify, Regularity};
        if !q.field().is_char_two() || q.dim() % 2 == 0 {
            return Err(invalid!("odd-space entries need characteristic 2 and odd dimension"));
        }
        if regularity_classify(&q).class != Regularity::Semiregular {
            return Err(invalid!("odd-dimensional space must be semiregular"));
        }
        Ok(ExtendedQuadraticPair::OddSpace(q))
    }
}

/// Coordinates of a symmetric element in the Sym basis.
pub fn sym_coords(awi: &AlgebraWithInvolution, s: &[Elem]) -> Option<Vector> {
    let m = Matrix::from_cols(awi.field(), awi.algebra.dim(), &awi.sym).ok()?;
    m.solve(s).ok().flatten()
}

impl QuadraticPair {
    pub fn field(&self) -> &Field {
        self.awi.field()
    }

    pub fn algebra(&self) -> &StructureAlgebra {
        &self.awi.algebra
    }

    /// f(s) for s in Sym; errors when s is not symmetric.
    pub fn f_eval(&self, s: &[Elem]) -> Result<Elem> {
        let c = sym_coords(&self.awi, s).ok_or_else(|| invalid!("element is not symmetric"))?;
        Ok(dot(self.field(), &c, &self.f))
    }
}

fn degree_of(a: &StructureAlgebra) -> Result<usize> {
    a.degree().ok_or_else(|| invalid!("algebra has no declared degree"))
}

fn check_type(awi: &AlgebraWithInvolution) -> Result<()> {
    let t = involution_type(awi)?;
    let want = if awi.field().is_char_two() { InvolutionType::Symplectic } else { InvolutionType::Orthogonal };
    if t != want {
        return Err(Error::NotInvolution(alloc::format!(
            "quadratic pairs need {} involutions here, got {}",
            want.name(),
            t.name()
        )));
    }
    Ok(())
}

/// (End V, sigma_q, f_q) for a regular form q.
pub fn pair_from_form(q: &QuadraticSpace) -> Result<QuadraticPair> {
    let f = q.field().clone();
    let n = q.dim();
    if f.is_char_two() && n % 2 == 1 {
        return Err(invalid!("characteristic 2 odd dimension has no quadratic pair; use an odd-space entry"));
    }
    if n == 0 {
        return Err(invalid!("zero-dimensional form"));
    }
    let b = q.polar_matrix();
    let binv = b.inverse().ok_or_else(|| invalid!("singular form: polar matrix is not invertible"))?;
    let a = Arc::new(matrix_algebra_over_field(&f, n));
    let d = n * n;
    let flat = |m: &Matrix| -> Vector { (0..d).map(|i| m.get(i / n, i % n).clone()).collect() };
    let mut sigma = Matrix::zeros(&f, d, d);
    for r in 0..n {
        for s in 0..n {
            let mut e = Matrix::zeros(&f, n, n);
            e.set(s, r, f.one());
            let img = flat(&binv.mul(&e)?.mul(&b)?);
            for (i, v) in img.into_iter().enumerate() {
                sigma.set(i, r * n + s, v);
            }
        }
    }
    let awi = involution_attach(a, sigma, Some(InvolutionKind::First))?;
    check_type(&awi)?;
    // phi(e_r (x) e_s) = E_rs B
    let phi = |r: usize, s: usize| -> Vector {
        let mut m = Matrix::zeros(&f, n, n);
        for t in 0..n {
            m.set(r, t, b.get(s, t).clone());
        }
        flat(&m)
    };
    let mut span = Vec::new();
    let mut vals = Vec::new();
    for r in 0..n {
        span.push(phi(r, r));
        vals.push(q.coeff(r, r).clone());
        for s in r + 1..n {
            span.push(add(&phi(r, s), &phi(s, r)));
            vals.push(b.get(r, s).clone());
        }
    }
    let m = Matrix::from_cols(&f, d, &span)?;
    if m.rank() != span.len() || span.len() != awi.sym.len() {
        return Err(Error::Certification("phi_q(v (x) v) do not form a basis of Sym".into()));
    }
    let mut fvals = Vec::with_capacity(awi.sym.len());
    for s in &awi.sym {
        let c = m.solve(s)?.ok_or_else(|| Error::Certification("Sym basis outside span of phi_q(v (x) v)".into()))?;
        fvals.push(dot(&f, &c, &vals));
    }
    let ell = ell_element(&awi, &fvals)?;
    let p = QuadraticPair { awi, f: fvals, ell, degree: n };
    pair_validate(&p).into_result()?;
    Ok(p)
}

/// Solves Trd(l s_i) = f(s_i), l + sigma(l) = 1.
pub fn ell_element(awi: &AlgebraWithInvolution, f: &[Elem]) -> Result<Vector> {
    let a = &awi.algebra;
    let field = awi.field().clone();
    let d = a.dim();
    let mut rows: Vec<Vector> = Vec::new();
    let mut rhs: Vec<Elem> = Vec::new();
    for (s, fv) in awi.sym.iter().zip(f) {
        let row: Result<Vector> = (0..d).map(|k| a.reduced_trace(&a.mul(&a.basis(k), s))).collect();
        rows.push(row?);
        rhs.push(fv.clone());
    }
    let plus = Matrix::identity(&field, d).add(&awi.sigma);
    for (r, u) in (0..d).zip(a.one()) {
        rows.push(plus.row(r).to_vec());
        rhs.push(u);
    }
    let m = Matrix::from_rows(&field, rows)?;
    let sol = m.solve(&rhs)?.ok_or_else(|| invalid!("f violates f(x + sigma(x)) = Trd(x)"))?;
    if m.kernel().len() != awi.alt.len() {
        return Err(Error::Certification("solution set of l is not an Alt coset".into()));
    }
    Ok(sol)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairVerdict {
    Certificate,
    Violation { detail: String },
}

impl PairVerdict {
    pub fn ok(&self) -> bool {
        *self == PairVerdict::Certificate
    }

    pub fn into_result(self) -> Result<()> {
        match self {
            PairVerdict::Certificate => Ok(()),
            PairVerdict::Violation { detail } => Err(Error::Certification(detail)),
        }
    }
}

pub fn pair_validate(p: &QuadraticPair) -> PairVerdict {
    let a = p.algebra();
    let field = p.field();
    let bad = |detail: String| PairVerdict::Violation { detail };
    if p.f.len() != p.awi.sym.len() {
        return bad("f has the wrong length".into());
    }
    if p.awi.kind != InvolutionKind::First {
        return bad("involution is not of the first kind".into());
    }
    if let Err(e) = check_type(&p.awi) {
        return bad(alloc::format!("{e}"));
    }
    for x in 0..a.dim() {
        let bx = a.basis(x);
        let s = add(&bx, &p.awi.apply(&bx));
        let (lhs, rhs) = match (p.f_eval(&s), a.reduced_trace(&bx)) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e), _) | (_, Err(e)) => return bad(alloc::format!("{e}")),
        };
        if lhs != rhs {
            return bad(alloc::format!("f(x + sigma(x)) != Trd(x) at basis element {}", a.labels()[x]));
        }
    }
    if add(&p.ell, &p.awi.apply(&p.ell)) != a.one() {
        return bad("l + sigma(l) != 1".into());
    }
    for (i, s) in p.awi.sym.iter().enumerate() {
        match a.reduced_trace(&a.mul(&p.ell, s)) {
            Ok(t) if t == p.f[i] => {}
            _ => return bad(alloc::format!("Trd(l s) != f(s) at Sym basis vector {i}")),
        }
    }
    let _ = field;
    PairVerdict::Certificate
}

/// The pair on Q1 (x) Q2 with sigma = gamma1 (x) gamma2. Outside characteristic
/// 2, f = Trd/2. In characteristic 2, l runs over coset representatives
/// modulo Alt until the Clifford algebra has split center.
pub fn pair_on_quaternion_tensor(q1: &StructureAlgebra, q2: &StructureAlgebra) -> Result<QuadraticPair> {
    if q1.field() != q2.field() {
        return Err(Error::FieldMismatch("quaternion algebras over different fields".into()));
    }
    if q1.dim() != 4 || q2.dim() != 4 || q1.degree() != Some(2) || q2.degree() != Some(2) {
        return Err(invalid!("expected quaternion algebras"));
    }
    let f = q1.field().clone();
    let a = Arc::new(tensor(q1, q2)?);
    let g = quaternion_conjugation(&f);
    let sigma = kron(&g, &g);
    let awi = involution_attach(a.clone(), sigma, Some(InvolutionKind::First))?;
    check_type(&awi)?;
    let deg = degree_of(&a)?;
    if !f.is_char_two() {
        let half = f.from_ratio(1, 2)?;
        let fv: Result<Vec<Elem>> = awi.sym.iter().map(|s| Ok(a.reduced_trace(s)? * &half)).collect();
        let ell = a.scalar(&half);
        let p = QuadraticPair { awi, f: fv?, ell, degree: deg };
        pair_validate(&p).into_result()?;
        return Ok(p);
    }
    let d = a.dim();
    let plus = Matrix::identity(&f, d).add(&awi.sigma);
    let ell0 = plus.solve(&a.one())?.ok_or_else(|| Error::Certification("no l with l + sigma(l) = 1".into()))?;
    // complement of Alt inside Skew
    let mut ech = Echelon::new(&f, d);
    for v in &awi.alt {
        ech.insert(v);
    }
    let mut comp = Vec::new();
    for v in &awi.skew {
        if ech.insert(v) {
            comp.push(v.clone());
        }
    }
    let elems = f.elements().ok_or_else(|| Error::Unsupported("characteristic 2 requires a finite field".into()))?;
    let q = elems.len();
    let total = q.checked_pow(comp.len() as u32).unwrap_or(usize::MAX);
    if total > 4096 {
        return Err(Error::InputTooLarge(alloc::format!("l search space has {total} points")));
    }
    for idx in 0..total {
        let mut ell = ell0.clone();
        let mut t = idx;
        for c in &comp {
            crate::linalg::axpy(&mut ell, &elems[t % q], c);
            t /= q;
        }
        let fv: Result<Vec<Elem>> = awi.sym.iter().map(|s| a.reduced_trace(&a.mul(&ell, s))).collect();
        let p = QuadraticPair { awi: awi.clone(), f: fv?, ell, degree: deg };
        if !pair_validate(&p).ok() {
            continue;
        }
        let c = crate::clifford::clifford_of_pair(&p)?;
        if c.carrier.dim() == 8 && c.structure.center.idempotent.is_some() {
            return Ok(p);
        }
    }
    Err(Error::SearchExhausted("no l gives a split center".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quaternion;

    #[test]
    fn split_pair_rational() {
        let f = Field::rationals();
        let q = QuadraticSpace::diag_i64(&f, &[1, -1]).unwrap();
        let p = pair_from_form(&q).unwrap();
        assert!(pair_validate(&p).ok());
        // f(phi(e1 (x) e1)) = q(e1) = 1; phi(e1 (x) e1) = E11 B = 2 E11
        let a = p.algebra();
        let e11 = a.scalar(&f.from_i64(2));
        let mut x = a.zero();
        x[0] = e11[0].clone();
        assert_eq!(p.f_eval(&x).unwrap(), f.one());
        // l = 1/2 lies in the solution coset
        let half = a.scalar(&f.from_ratio(1, 2).unwrap());
        let mut p2 = p.clone();
        p2.ell = half;
        assert!(pair_validate(&p2).ok());
    }

    #[test]
    fn perturbed_f_is_caught() {
        let f = Field::rationals();
        let q = QuadraticSpace::diag_i64(&f, &[1, 1]).unwrap();
        let mut p = pair_from_form(&q).unwrap();
        p.f[0] = &p.f[0] + &f.one();
        assert!(!pair_validate(&p).ok());
    }

    #[test]
    fn gf2_hyperbolic_pair() {
        let f = Field::prime_field(2).unwrap();
        let q = QuadraticSpace::from_matrix(&Matrix::from_i64(&f, &[&[0, 1], &[0, 0]])).unwrap();
        let p = pair_from_form(&q).unwrap();
        assert!(p.awi.in_alt(&p.algebra().one()));
        // l + (x - sigma(x)) is still valid
        let a = p.algebra();
        let x = a.basis(1);
        let alt = crate::linalg::sub(&x, &p.awi.apply(&x));
        let mut p2 = p.clone();
        p2.ell = add(&p.ell, &alt);
        assert!(pair_validate(&p2).ok());
        assert!(pair_from_form(&QuadraticSpace::diag_i64(&f, &[1]).unwrap()).is_err());
    }

    #[test]
    fn quaternion_tensor_pair_rational() {
        let f = Field::rationals();
        let q1 = quaternion(&f, &f.from_i64(-1), &f.from_i64(-1)).unwrap();
        let q2 = quaternion(&f, &f.from_i64(2), &f.from_i64(5)).unwrap();
        let p = pair_on_quaternion_tensor(&q1, &q2).unwrap();
        assert_eq!(p.algebra().dim(), 16);
        assert_eq!(p.awi.sym.len(), 10);
        assert_eq!(p.f_eval(&p.algebra().one()).unwrap(), f.from_i64(2));
    }
}

//! Hermitian compositions h(phi(x, y), phi(x, y')) = q(x) h(y, y') over an
//! algebra with involution.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{LinearMap, StructureAlgebra};
use crate::clifford::CliffordAlgebra;
use crate::compose::witness::CompositionWitness;
use crate::error::{invalid, Result};
use crate::linalg::{add, axpy, scale, zero_vec, Matrix, Vector};
use crate::mcd::PairSpec;
use crate::quadform::{represents_one, QuadraticSpace, Representation};
use crate::scalars::Elem;

/// E = A^rank with h(y, y') = sum_{s,t} inv(y_s) h_st y'_t, and phi(x, -)
/// acting by the matrix sum_l x_l phi[l] over A.
#[derive(Clone, Debug)]
pub struct HermitianComposition {
    pub ring: Arc<StructureAlgebra>,
    pub ring_involution: LinearMap,
    pub rank: usize,
    /// rank x rank entries, row major.
    pub h: Vec<Vector>,
    /// One rank x rank matrix over A per basis vector of V.
    pub phi: Vec<Vec<Vector>>,
    /// The vector with q(z) = 1 used to build phi, when there is one.
    pub z: Option<Vector>,
    /// +1 for hermitian, -1 for skew-hermitian.
    pub epsilon: i8,
}

/// An element of E.
pub type ModuleElem = Vec<Vector>;

impl HermitianComposition {
    fn a(&self) -> &StructureAlgebra {
        &self.ring
    }

    pub fn module_dim(&self) -> usize {
        self.rank * self.ring.dim()
    }

    /// The F-basis of E, ordered by component then by basis of A.
    pub fn module_basis(&self) -> Vec<ModuleElem> {
        let a = self.a();
        let mut out = Vec::new();
        for s in 0..self.rank {
            for i in 0..a.dim() {
                let mut y: ModuleElem = (0..self.rank).map(|_| a.zero()).collect();
                y[s] = a.basis(i);
                out.push(y);
            }
        }
        out
    }

    /// Generators of E as an A-module.
    pub fn module_generators(&self) -> Vec<ModuleElem> {
        let a = self.a();
        (0..self.rank)
            .map(|s| {
                let mut y: ModuleElem = (0..self.rank).map(|_| a.zero()).collect();
                y[s] = a.one();
                y
            })
            .collect()
    }

    pub fn eval_h(&self, y: &ModuleElem, y2: &ModuleElem) -> Vector {
        let a = self.a();
        let mut acc = a.zero();
        for s in 0..self.rank {
            let ys = self.ring_involution.apply(&y[s]);
            if ys.iter().all(|c| c.is_zero()) {
                continue;
            }
            for t in 0..self.rank {
                let hst = &self.h[s * self.rank + t];
                let term = a.mul(&a.mul(&ys, hst), &y2[t]);
                acc = add(&acc, &term);
            }
        }
        acc
    }

    pub fn apply_phi(&self, x: &[Elem], y: &ModuleElem) -> ModuleElem {
        let a = self.a();
        let f = a.field().clone();
        let r = self.rank;
        let mut m: Vec<Vector> = (0..r * r).map(|_| zero_vec(&f, a.dim())).collect();
        for (l, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, entry) in self.phi[l].iter().enumerate() {
                axpy(&mut m[k], c, entry);
            }
        }
        (0..r)
            .map(|s| {
                let mut acc = a.zero();
                for t in 0..r {
                    acc = add(&acc, &a.mul(&m[s * r + t], &y[t]));
                }
                acc
            })
            .collect()
    }
}

/// Outcome of [`verify_hermitian_identity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HermitianVerdict {
    Certificate { checks: usize, epsilon_checked: bool },
    Counterexample { x: Vector, y1: usize, y2: usize, detail: String },
}

impl HermitianVerdict {
    pub fn ok(&self) -> bool {
        matches!(self, HermitianVerdict::Certificate { .. })
    }
}

/// Sample vectors x: the basis vectors and all pairwise sums. The identity
/// is quadratic in x, so these determine it.
pub fn sample_vectors(q: &QuadraticSpace) -> Vec<Vector> {
    let f = q.field();
    let n = q.dim();
    let mut out = Vec::new();
    for i in 0..n {
        out.push(crate::linalg::unit_vec(f, n, i));
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = zero_vec(f, n);
            v[i] = f.one();
            v[j] = f.one();
            out.push(v);
        }
    }
    out
}

/// Largest module dimension for which y and y' both run over an F-basis.
const FULL_PAIR_DIM: usize = 16;

/// Checks h(phi(x,y), phi(x,y')) = q(x) h(y,y') for x in [`sample_vectors`]
/// and (y, y') over F-basis pairs, plus inv(h(y,y')) = eps h(y',y). For
/// large E the first slot runs over module generators only, which suffices
/// because both sides are semilinear in y.
pub fn verify_hermitian_identity(hc: &HermitianComposition, q: &QuadraticSpace) -> HermitianVerdict {
    let a = hc.a();
    let f = a.field().clone();
    if hc.phi.len() != q.dim() {
        return HermitianVerdict::Counterexample {
            x: Vec::new(),
            y1: 0,
            y2: 0,
            detail: format!("phi has {} matrices for a {}-dimensional form", hc.phi.len(), q.dim()),
        };
    }
    let basis = hc.module_basis();
    let firsts = if hc.module_dim() <= FULL_PAIR_DIM { basis.clone() } else { hc.module_generators() };
    let eps = f.from_i64(hc.epsilon as i64);
    let mut checks = 0;
    for (i, y) in firsts.iter().enumerate() {
        for (j, y2) in basis.iter().enumerate() {
            let lhs = hc.ring_involution.apply(&hc.eval_h(y, y2));
            let rhs = scale(&hc.eval_h(y2, y), &eps);
            if lhs != rhs {
                return HermitianVerdict::Counterexample {
                    x: Vec::new(),
                    y1: i,
                    y2: j,
                    detail: format!("h is not {}-hermitian", hc.epsilon),
                };
            }
        }
    }
    for x in sample_vectors(q) {
        let qx = match q.eval(&x) {
            Ok(v) => v,
            Err(e) => return HermitianVerdict::Counterexample { x, y1: 0, y2: 0, detail: format!("{e}") },
        };
        let imgs: Vec<ModuleElem> = basis.iter().map(|y| hc.apply_phi(&x, y)).collect();
        for (i, y) in firsts.iter().enumerate() {
            let py = hc.apply_phi(&x, y);
            for (j, y2) in basis.iter().enumerate() {
                let lhs = hc.eval_h(&py, &imgs[j]);
                let rhs = scale(&hc.eval_h(y, y2), &qx);
                checks += 1;
                if lhs != rhs {
                    return HermitianVerdict::Counterexample {
                        x,
                        y1: i,
                        y2: j,
                        detail: "h(phi(x,y), phi(x,y')) != q(x) h(y,y')".into(),
                    };
                }
            }
        }
    }
    HermitianVerdict::Certificate { checks, epsilon_checked: true }
}

/// Coordinates of z x in C0(q) for vectors z, x in V.
pub fn even_product(c0: &CliffordAlgebra, q: &QuadraticSpace, z: &[Elem], x: &[Elem]) -> Result<Vector> {
    let f = q.field().clone();
    let n = q.dim();
    let mut v = zero_vec(&f, c0.dim());
    let one = c0.monomial_index(0).ok_or_else(|| invalid!("C0 is not given on monomials"))?;
    for i in 0..n {
        for j in 0..n {
            let c = &z[i] * &x[j];
            if c.is_zero() {
                continue;
            }
            if i == j {
                v[one] = &v[one] + &(&c * &q.value_at_basis(i));
            } else if i < j {
                let k = c0.monomial_index((1 << i) | (1 << j)).ok_or_else(|| invalid!("missing monomial"))?;
                v[k] = &v[k] + &c;
            } else {
                // e_i e_j = b(e_i, e_j) - e_j e_i
                let k = c0.monomial_index((1 << i) | (1 << j)).ok_or_else(|| invalid!("missing monomial"))?;
                v[one] = &v[one] + &(&c * &q.polar_coeff(j, i));
                v[k] = &v[k] - &c;
            }
        }
    }
    Ok(v)
}

/// Search bound passed to [`represents_one`] when no z is supplied.
pub const REPRESENT_BOUND: u32 = 6;

/// Turns a composition witness for a form into a hermitian composition:
/// E = B as a left B-module over itself, h(x, y) = tau(x) y and
/// phi(x, y) = alpha(z x) y, where q(z) = 1.
pub fn hermitian_from_hom(w: &CompositionWitness, z: Option<&[Elem]>) -> Result<HermitianComposition> {
    let q = match &w.spec {
        PairSpec::Form(q) => q,
        _ => return Err(invalid!("a hermitian composition needs a pair given by a quadratic form")),
    };
    let z = match represents_one(q, z, REPRESENT_BOUND)? {
        Representation::Found(z) => z,
        Representation::NotFound => return Err(invalid!("no vector with q(z) = 1 found; pass one explicitly")),
    };
    let b = w.target.clone();
    let n = q.dim();
    let f = q.field().clone();
    let mut phi = Vec::with_capacity(n);
    for l in 0..n {
        let el = crate::linalg::unit_vec(&f, n, l);
        let zx = even_product(&w.source, q, &z, &el)?;
        phi.push(alloc::vec![w.hom.mul_vec(&zx)?]);
    }
    Ok(HermitianComposition {
        ring: b.clone(),
        ring_involution: w.tau.clone(),
        rank: 1,
        h: alloc::vec![b.one()],
        phi,
        z: Some(z),
        epsilon: 1,
    })
}

/// Builds the homomorphism A -> B determined by images of generators, by
/// spanning A with words in the generators. Fails if the words do not span
/// A or the assignment is inconsistent.
pub fn hom_from_generators(a: &StructureAlgebra, gens: &[Vector], images: &[Vector], b: &StructureAlgebra) -> Result<Matrix> {
    let f = a.field().clone();
    let mut ech = crate::linalg::Echelon::new(&f, a.dim());
    let mut pairs: Vec<(Vector, Vector)> = Vec::new();
    let mut frontier = alloc::vec![(a.one(), b.one())];
    ech.insert(&a.one());
    pairs.push((a.one(), b.one()));
    while !frontier.is_empty() && ech.rank() < a.dim() {
        let mut next = Vec::new();
        for (wa, wb) in &frontier {
            for (g, gi) in gens.iter().zip(images) {
                let na = a.mul(wa, g);
                if ech.insert(&na) {
                    let nb = b.mul(wb, gi);
                    pairs.push((na.clone(), nb.clone()));
                    next.push((na, nb));
                }
            }
        }
        frontier = next;
    }
    if ech.rank() < a.dim() {
        return Err(invalid!("generators span only {} of {} dimensions", ech.rank(), a.dim()));
    }
    let src = Matrix::from_cols(&f, a.dim(), &pairs.iter().map(|p| p.0.clone()).collect::<Vec<_>>())?;
    let dst = Matrix::from_cols(&f, b.dim(), &pairs.iter().map(|p| p.1.clone()).collect::<Vec<_>>())?;
    let inv = src.inverse().ok_or_else(|| invalid!("word basis is singular"))?;
    let m = dst.mul(&inv)?;
    let v = crate::algebra::hom_verify(&m, a, b, None);
    if !v.ok() {
        return Err(invalid!("generator images do not define a homomorphism: {v:?}"));
    }
    Ok(m)
}

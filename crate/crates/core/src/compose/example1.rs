//! The explicit composition of <1,-a,-b,-1,1> with Q + Q, Q = (a, b).

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{hom_verify, matrix_algebra, quaternion, quaternion_conjugation, HomVerdict, LinearMap, StructureAlgebra};
use crate::clifford::clifford_even;
use crate::compose::hermitian::{hom_from_generators, verify_hermitian_identity, HermitianComposition, HermitianVerdict};
use crate::error::{invalid, Result};
use crate::linalg::{scale, zero_vec, Matrix, Vector};
use crate::quadform::QuadraticSpace;
use crate::scalars::{Elem, Field};

#[derive(Clone, Debug)]
pub struct Example1Bundle {
    pub a: Elem,
    pub b: Elem,
    pub form: QuadraticSpace,
    /// Images of z e_1, ..., z e_4 in M2(Q), basis index (r*2+s)*4 + k.
    pub generator_images: Vec<Vector>,
    /// Relations that failed, empty when all hold.
    pub relation_failures: Vec<String>,
    pub iso: HomVerdict,
    pub iso_rank: usize,
    pub alpha: Matrix,
    /// The involution on M2(Q).
    pub tau: Matrix,
    pub h1: HermitianComposition,
    pub h2: HermitianComposition,
    pub verdict1: HermitianVerdict,
    pub verdict2: HermitianVerdict,
}

impl Example1Bundle {
    pub fn relations_ok(&self) -> bool {
        self.relation_failures.is_empty()
    }

    pub fn iso_ok(&self) -> bool {
        self.iso.ok() && self.iso_rank == 16
    }

    pub fn verified(&self) -> bool {
        self.relations_ok() && self.iso_ok() && self.verdict1.ok() && self.verdict2.ok()
    }
}

/// A 2x2 matrix over Q as a vector of M2(Q).
fn mat2(f: &Field, entries: [&Vector; 4]) -> Vector {
    let mut v = zero_vec(f, 16);
    for (rs, e) in entries.iter().enumerate() {
        for k in 0..4 {
            v[rs * 4 + k] = e[k].clone();
        }
    }
    v
}

fn quat(f: &Field, c: [i64; 4]) -> Vector {
    c.iter().map(|x| f.from_i64(*x)).collect()
}

/// The involution of Q fixing i and j and negating ij.
pub fn tilde_involution(f: &Field) -> Matrix {
    let mut m = Matrix::identity(f, 4);
    m.set(3, 3, f.from_i64(-1));
    m
}

/// (m_rs) -> [[~m22, -~m12], [-~m21, ~m11]] on M2(Q).
pub fn example_involution(f: &Field) -> Matrix {
    let t = tilde_involution(f);
    let mut m = Matrix::zeros(f, 16, 16);
    // (target entry, source entry, sign)
    for (dst, src, sign) in [(0usize, 3usize, 1i64), (1, 1, -1), (2, 2, -1), (3, 0, 1)] {
        for k in 0..4 {
            for l in 0..4 {
                let c = t.get(k, l);
                if !c.is_zero() {
                    m.set(dst * 4 + k, src * 4 + l, c * &f.from_i64(sign));
                }
            }
        }
    }
    m
}

fn as_matrix_over_q(v: &Vector) -> Vec<Vector> {
    (0..4).map(|rs| v[rs * 4..rs * 4 + 4].to_vec()).collect()
}

/// Builds and certifies every piece of the example for the symbol (a, b).
pub fn example1_reproduce(f: &Field, a: &Elem, b: &Elem) -> Result<Example1Bundle> {
    if f.is_char_two() {
        return Err(invalid!("the example needs characteristic other than 2"));
    }
    if a.is_zero() || b.is_zero() {
        return Err(invalid!("a and b must be nonzero"));
    }
    let form = QuadraticSpace::diag(f, &[f.one(), -a, -b, f.from_i64(-1), f.one()])?;
    let c0 = clifford_even(&form)?;
    let q = quaternion(f, a, b)?;
    let m2 = Arc::new(matrix_algebra(&q, 2)?);

    let one = quat(f, [1, 0, 0, 0]);
    let zero = quat(f, [0, 0, 0, 0]);
    let i = quat(f, [0, 1, 0, 0]);
    let j = quat(f, [0, 0, 1, 0]);
    let ni = quat(f, [0, -1, 0, 0]);
    let nj = quat(f, [0, 0, -1, 0]);
    let neg = quat(f, [-1, 0, 0, 0]);
    let images = vec![
        mat2(f, [&i, &zero, &zero, &ni]),
        mat2(f, [&j, &zero, &zero, &nj]),
        mat2(f, [&zero, &one, &one, &zero]),
        mat2(f, [&zero, &one, &neg, &zero]),
    ];

    // relations of <a, b, 1, -1>
    let squares = [a.clone(), b.clone(), f.one(), f.from_i64(-1)];
    let mut failures = Vec::new();
    for l in 0..4 {
        if m2.mul(&images[l], &images[l]) != m2.scalar(&squares[l]) {
            failures.push(format!("g{}^2 != {}", l + 1, squares[l]));
        }
        for m in l + 1..4 {
            let s = crate::linalg::add(&m2.mul(&images[l], &images[m]), &m2.mul(&images[m], &images[l]));
            if s.iter().any(|c| !c.is_zero()) {
                failures.push(format!("g{} g{} + g{} g{} != 0", l + 1, m + 1, m + 1, l + 1));
            }
        }
    }

    // z = e_1 (the first basis vector); C0 is generated by z e_l
    let gens: Vec<Vector> = c0.generators[..4].to_vec();
    let tau = example_involution(f);
    let (alpha, iso) = match hom_from_generators(&c0.carrier, &gens, &images, &m2) {
        Ok(alpha) => {
            let v = hom_verify(&alpha, &c0.carrier, &m2, Some((&c0.involution.sigma, &tau)));
            (alpha, v)
        }
        Err(e) => (Matrix::zeros(f, 16, c0.dim()), HomVerdict::Counterexample { detail: format!("{e}") }),
    };
    let iso_rank = alpha.rank();

    let q_arc = Arc::new(q);
    let z = crate::linalg::unit_vec(f, 5, 0);
    let mut phi = Vec::with_capacity(5);
    for l in 0..5 {
        let el = crate::linalg::unit_vec(f, 5, l);
        let zx = crate::compose::hermitian::even_product(&c0, &form, &z, &el)?;
        phi.push(as_matrix_over_q(&alpha.mul_vec(&zx)?));
    }
    let k = quat(f, [0, 0, 0, 1]);
    let nk = quat(f, [0, 0, 0, -1]);
    let h1 = HermitianComposition {
        ring: q_arc.clone(),
        ring_involution: LinearMap::Dense(tilde_involution(f)),
        rank: 2,
        h: vec![zero.clone(), one.clone(), neg.clone(), zero.clone()],
        phi: phi.clone(),
        z: Some(z.clone()),
        epsilon: -1,
    };
    let h2 = HermitianComposition {
        ring: q_arc,
        ring_involution: LinearMap::Dense(quaternion_conjugation(f)),
        rank: 2,
        h: vec![zero.clone(), k, nk, zero],
        phi,
        z: Some(z),
        epsilon: 1,
    };
    let verdict1 = verify_hermitian_identity(&h1, &form);
    let verdict2 = verify_hermitian_identity(&h2, &form);
    Ok(Example1Bundle {
        a: a.clone(),
        b: b.clone(),
        form,
        generator_images: images,
        relation_failures: failures,
        iso,
        iso_rank,
        alpha,
        tau,
        h1,
        h2,
        verdict1,
        verdict2,
    })
}

/// Helper for callers that want the image of x in M2(Q) as four quaternions.
pub fn phi_matrix(hc: &HermitianComposition, x: &[Elem]) -> Vec<Vector> {
    let a: &StructureAlgebra = &hc.ring;
    let mut m: Vec<Vector> = (0..hc.rank * hc.rank).map(|_| a.zero()).collect();
    for (l, c) in x.iter().enumerate() {
        for (e, entry) in hc.phi[l].iter().enumerate() {
            m[e] = crate::linalg::add(&m[e], &scale(entry, c));
        }
    }
    m
}

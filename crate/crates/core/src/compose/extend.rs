//! Extending an involution from a subalgebra: sigma' = Int(u) sigma0.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    involution_attach, involution_type, kron, quaternion, quaternion_conjugation, tensor, twisted_involution,
    InvolutionType, StructureAlgebra,
};
use crate::error::{invalid, Error, Result};
use crate::linalg::{axpy, zero_vec, Matrix, Vector};
use crate::scalars::Field;

/// Default number of random draws when looking for an invertible u.
pub const DEFAULT_RETRY_BUDGET: usize = 64;

#[derive(Clone, Debug)]
pub struct Extension {
    /// The algebra carrying the extension (A, or A (x) M2(F) when stabilized).
    pub algebra: Arc<StructureAlgebra>,
    pub sigma: Matrix,
    pub u: Vector,
    /// sigma0(u) = epsilon u.
    pub epsilon: i8,
    pub ty: InvolutionType,
    pub stabilized: bool,
}

/// M2(F) as the split quaternion algebra, so its unit is the first basis vector.
pub fn split_quaternion(f: &Field) -> Result<StructureAlgebra> {
    let a = if f.is_char_two() { f.zero() } else { f.one() };
    quaternion(f, &a, &f.one())
}

/// u with u sigma0(b) = tau(b) u on the generators and sigma0(u) = eps u.
fn solution_space(a: &StructureAlgebra, sigma0: &Matrix, gens: &[Vector], tau_images: &[Vector], eps: i8) -> Result<Vec<Vector>> {
    let f = a.field().clone();
    let d = a.dim();
    let mut rows: Vec<Vector> = Vec::new();
    for (b, tb) in gens.iter().zip(tau_images) {
        let sb = sigma0.mul_vec(b)?;
        let m = a.right_matrix(&sb).sub(&a.left_matrix(tb));
        rows.extend(m.row_vecs());
    }
    let e = Matrix::identity(&f, d).scale(&f.from_i64(eps as i64));
    rows.extend(sigma0.sub(&e).row_vecs());
    Ok(Matrix::from_rows(&f, rows)?.kernel())
}

fn find_invertible(a: &StructureAlgebra, space: &[Vector], rng: &mut ChaCha8Rng, budget: usize) -> Option<Vector> {
    for v in space {
        if a.is_invertible(v) {
            return Some(v.clone());
        }
    }
    if space.len() < 2 {
        return None;
    }
    let f = a.field().clone();
    for _ in 0..budget {
        let mut u = zero_vec(&f, a.dim());
        for v in space {
            axpy(&mut u, &f.random(rng, 3), v);
        }
        if a.is_invertible(&u) {
            return Some(u);
        }
    }
    None
}

/// Every extension Int(u) sigma0 of tau, one per sign eps that admits an invertible u.
pub fn extension_candidates(
    a: &Arc<StructureAlgebra>,
    sigma0: &Matrix,
    gens: &[Vector],
    tau_images: &[Vector],
    seed: u64,
    budget: usize,
) -> Result<Vec<Extension>> {
    if gens.len() != tau_images.len() {
        return Err(invalid!("one tau image per generator"));
    }
    if a.dim() > 256 {
        return Err(Error::InputTooLarge(format!("involution extension on a {}-dimensional algebra", a.dim())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signs: &[i8] = if a.field().is_char_two() { &[1] } else { &[1, -1] };
    let mut out = Vec::new();
    for &eps in signs {
        let space = solution_space(a, sigma0, gens, tau_images, eps)?;
        let Some(u) = find_invertible(a, &space, &mut rng, budget) else { continue };
        let sigma = twisted_involution(a, sigma0, &u)?;
        let awi = involution_attach(a.clone(), sigma.clone(), None)?;
        let ty = involution_type(&awi)?;
        out.push(Extension { algebra: a.clone(), sigma, u, epsilon: eps, ty, stabilized: false });
    }
    Ok(out)
}

/// An involution on A extending tau (given on generators of a subalgebra) of
/// the wanted type if possible, passing to A (x) M2(F) when neither sign gives it.
pub fn extend_involution(
    a: &Arc<StructureAlgebra>,
    sigma0: &Matrix,
    gens: &[Vector],
    tau_images: &[Vector],
    want: Option<InvolutionType>,
    seed: u64,
) -> Result<Extension> {
    let cands = extension_candidates(a, sigma0, gens, tau_images, seed, DEFAULT_RETRY_BUDGET)?;
    if cands.is_empty() {
        return Err(Error::SearchExhausted("no invertible u found in the solution space".into()));
    }
    let Some(t) = want else { return Ok(cands.into_iter().next().unwrap()) };
    if let Some(c) = cands.iter().find(|c| c.ty == t) {
        return Ok(c.clone());
    }
    let f = a.field().clone();
    let m = split_quaternion(&f)?;
    let big = Arc::new(tensor(a, &m)?);
    let lift = |v: &Vector| -> Vector {
        let mut w = zero_vec(&f, big.dim());
        for (i, c) in v.iter().enumerate() {
            w[i * 4] = c.clone();
        }
        w
    };
    let gens2: Vec<Vector> = gens.iter().map(lift).collect();
    let tau2: Vec<Vector> = tau_images.iter().map(lift).collect();
    for inv in [quaternion_conjugation(&f), orthogonal_on_split(&f)?] {
        let s0 = kron(sigma0, &inv);
        let cands = extension_candidates(&big, &s0, &gens2, &tau2, seed, DEFAULT_RETRY_BUDGET)?;
        if let Some(c) = cands.into_iter().find(|c| c.ty == t) {
            return Ok(Extension { stabilized: true, ..c });
        }
    }
    Err(Error::SearchExhausted(format!("no extension of type {} even after stabilizing", t.name())))
}

/// An orthogonal involution on the split quaternion algebra: Int(j) gamma.
pub fn orthogonal_on_split(f: &Field) -> Result<Matrix> {
    let m = split_quaternion(f)?;
    twisted_involution(&m, &quaternion_conjugation(f), &m.basis(2))
}

/// Involutions Int(u) gamma on a quaternion algebra for u in {1, i, j, ij}.
pub fn quaternion_involutions(q: &Arc<StructureAlgebra>) -> Result<Vec<(Matrix, InvolutionType)>> {
    let f = q.field().clone();
    let gamma = quaternion_conjugation(&f);
    let mut out: Vec<(Matrix, InvolutionType)> = Vec::new();
    for k in 0..4 {
        let u = q.basis(k);
        let gu = gamma.mul_vec(&u)?;
        let neg: Vector = u.iter().map(|x| -x.clone()).collect();
        if gu != u && gu != neg {
            continue;
        }
        let Ok(s) = twisted_involution(q, &gamma, &u) else { continue };
        let ty = involution_type(&involution_attach(q.clone(), s.clone(), None)?)?;
        if !out.iter().any(|(_, t)| *t == ty) {
            out.push((s, ty));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{matrix_algebra_over_field, transpose_involution};

    #[test]
    fn transpose_extends_itself() {
        let f = Field::rationals();
        let a = Arc::new(matrix_algebra_over_field(&f, 2));
        let t = transpose_involution(&f, 2);
        let gens: Vec<Vector> = (0..4).map(|i| a.basis(i)).collect();
        let imgs: Vec<Vector> = gens.iter().map(|g| t.mul_vec(g).unwrap()).collect();
        let e = extend_involution(&a, &t, &gens, &imgs, Some(InvolutionType::Orthogonal), 1).unwrap();
        assert_eq!(e.sigma, t);
        assert!(!e.stabilized);
    }

    #[test]
    fn quaternion_tensor_both_types() {
        let f = Field::rationals();
        let q1 = quaternion(&f, &f.from_i64(-1), &f.from_i64(-1)).unwrap();
        let q2 = quaternion(&f, &f.from_i64(2), &f.from_i64(5)).unwrap();
        let a = Arc::new(tensor(&q1, &q2).unwrap());
        let g = quaternion_conjugation(&f);
        let s0 = kron(&g, &g);
        // B = Q1 (x) 1 with gamma_1
        let gens: Vec<Vector> = (0..4).map(|i| a.basis(i * 4)).collect();
        let imgs: Vec<Vector> = gens.iter().map(|v| s0.mul_vec(v).unwrap()).collect();
        let cands = extension_candidates(&a, &s0, &gens, &imgs, 7, DEFAULT_RETRY_BUDGET).unwrap();
        let mut types: Vec<InvolutionType> = cands.iter().map(|c| c.ty).collect();
        types.sort_by_key(|t| t.sign());
        assert_eq!(types, [InvolutionType::Symplectic, InvolutionType::Orthogonal]);
    }

    #[test]
    fn swap_on_diagonal_extends_to_either_type() {
        // B = F x F diagonal in M2(F), tau = swap
        for (f, want) in [
            (Field::rationals(), &[InvolutionType::Orthogonal, InvolutionType::Symplectic][..]),
            (Field::prime_field(2).unwrap(), &[InvolutionType::Symplectic][..]),
        ] {
            let a = Arc::new(matrix_algebra_over_field(&f, 2));
            let t = transpose_involution(&f, 2);
            let (e11, e22) = (a.basis(0), a.basis(3));
            let gens = [e11.clone(), e22.clone()];
            let cands = extension_candidates(&a, &t, &gens, &[e22.clone(), e11.clone()], 3, 8).unwrap();
            let mut types: Vec<InvolutionType> = cands.iter().map(|c| c.ty).collect();
            types.sort_by_key(|t| -t.sign());
            assert_eq!(types, want, "{f}");
            let s = extend_involution(&a, &t, &gens, &[e22, e11], Some(InvolutionType::Symplectic), 3).unwrap();
            assert_eq!(s.ty, InvolutionType::Symplectic);
        }
    }

    #[test]
    fn quaternion_involution_types() {
        for f in [Field::rationals(), Field::prime_field(2).unwrap(), Field::prime_field(3).unwrap()] {
            let q = Arc::new(split_quaternion(&f).unwrap());
            let invs = quaternion_involutions(&q).unwrap();
            assert_eq!(invs.len(), 2, "{f}");
        }
    }
}

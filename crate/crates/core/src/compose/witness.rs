//! Composition witnesses: B built as a tensor product of explicit factors.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{
    etale, etale_conjugation, hom_verify_maps, image_basis, involution_attach, involution_type, quaternion, tensor,
    HomVerdict, InvolutionType, LinearMap, StructureAlgebra,
};
use crate::brauer::{find_symbol, BrauerClass2, ClassBase};
use crate::clifford::{clifford_even, clifford_full, clifford_of_pair, corner, quaternion_class, CliffordAlgebra, CliffordBasis};
use crate::compose::extend::{extension_candidates, quaternion_involutions, split_quaternion, DEFAULT_RETRY_BUDGET};
use crate::error::{invalid, Error, Result};
use crate::linalg::{zero_vec, Coordinates, Matrix, Vector};
use crate::mcd::{
    admissible_degree, d_restricted, invariant_profile, mcd, Admissibility, CliffordData, CompositionType, InvariantProfile,
    McdResult, McdStatus, PairSpec, Parity,
};
use crate::qpair::pair_on_quaternion_tensor;
use crate::quadform::{clifford_class_general, CliffordClass};
use crate::scalars::quadext::EtaleQuadratic;
use crate::scalars::{Elem, Field};

/// Search bound for quaternion symbols realizing a class.
const SYMBOL_BUDGET: i64 = 200;
/// Scalars x tried when rescaling the form for C(V, x q).
const SCALE_BUDGET: i64 = 60;

/// How a tensor factor of B is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorRecipe {
    /// C(P) itself.
    Source,
    /// e C(P) for a central idempotent e.
    Corner(Vector),
    /// The full Clifford algebra C(V, x q) of the underlying form.
    Full(Elem),
    Etale(EtaleQuadratic),
    Quaternion(Elem, Elem),
}

impl FactorRecipe {
    pub fn describe(&self) -> String {
        match self {
            FactorRecipe::Source => "C(P)".into(),
            FactorRecipe::Corner(_) => "e C(P)".into(),
            FactorRecipe::Full(x) => format!("C(V, {x} q)"),
            FactorRecipe::Etale(e) => e.describe(),
            FactorRecipe::Quaternion(a, b) => format!("({a},{b})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WitnessFactor {
    pub recipe: FactorRecipe,
    pub algebra: Arc<StructureAlgebra>,
    pub involution: Matrix,
    pub ty: InvolutionType,
    /// Degree over the factor's center.
    pub degree: u64,
}

#[derive(Clone, Debug)]
pub struct CompositionWitness {
    pub spec: PairSpec,
    pub source: CliffordAlgebra,
    pub factors: Vec<WitnessFactor>,
    pub target: Arc<StructureAlgebra>,
    pub tau: LinearMap,
    pub tau_type: InvolutionType,
    pub hom: Matrix,
    pub ty: CompositionType,
    pub degree: u64,
    pub class: BrauerClass2,
    pub mcd: McdResult,
    pub admissibility: Admissibility,
    pub certificate: HomVerdict,
    pub injective: bool,
    pub trace: Vec<String>,
    pub seed: u64,
}

/// C(P) with its canonical involution.
pub fn source_clifford(spec: &PairSpec) -> Result<CliffordAlgebra> {
    match spec {
        PairSpec::Form(q) => clifford_even(q),
        PairSpec::QuaternionTensor { field, q1, q2 } => {
            let a1 = quaternion(field, &q1.0, &q1.1)?;
            let a2 = quaternion(field, &q2.0, &q2.1)?;
            clifford_of_pair(&pair_on_quaternion_tensor(&a1, &a2)?)
        }
    }
}

fn form_of(spec: &PairSpec) -> Result<&crate::quadform::QuadraticSpace> {
    match spec {
        PairSpec::Form(q) => Ok(q),
        _ => Err(invalid!("the full Clifford algebra needs a pair on a trivial algebra")),
    }
}

fn full_class(spec: &PairSpec, x: &Elem) -> Result<BrauerClass2> {
    let q = form_of(spec)?.scaled(x);
    Ok(match clifford_class_general(&q)? {
        CliffordClass::OverCenter { full, .. } => full,
        CliffordClass::Central(c) => c,
    })
}

fn isqrt(n: usize) -> u64 {
    let mut r = 0u64;
    while ((r + 1) * (r + 1)) as usize <= n {
        r += 1;
    }
    r
}

fn corner_coords(a: &StructureAlgebra, e: &[Elem]) -> Result<Coordinates> {
    Coordinates::new(a.field(), a.dim(), &image_basis(&a.left_matrix(e)))
}

/// The factor algebra a recipe describes.
pub fn build_factor(spec: &PairSpec, src: &CliffordAlgebra, recipe: &FactorRecipe) -> Result<Arc<StructureAlgebra>> {
    let f = src.field().clone();
    Ok(Arc::new(match recipe {
        FactorRecipe::Source => return Ok(src.carrier.clone()),
        FactorRecipe::Corner(e) => corner(&src.carrier, e)?,
        FactorRecipe::Full(x) => return Ok(clifford_full(&form_of(spec)?.scaled(x))?.carrier),
        FactorRecipe::Etale(s) => {
            if s.base != f {
                return Err(Error::FieldMismatch("S is not over the base field".into()));
            }
            etale(s)
        }
        FactorRecipe::Quaternion(a, b) => quaternion(&f, a, b)?,
    }))
}

/// Matrix of C(P) -> base factor.
fn base_map(spec: &PairSpec, src: &CliffordAlgebra, recipe: &FactorRecipe, base: &StructureAlgebra) -> Result<Matrix> {
    let f = src.field().clone();
    let d = src.dim();
    let cols: Vec<Vector> = match recipe {
        FactorRecipe::Source => (0..d).map(|i| src.carrier.basis(i)).collect(),
        FactorRecipe::Corner(e) => {
            let coords = corner_coords(&src.carrier, e)?;
            (0..d)
                .map(|i| coords.coords(&src.carrier.mul(e, &src.carrier.basis(i))).ok_or_else(|| invalid!("idempotent is not central")))
                .collect::<Result<_>>()?
        }
        FactorRecipe::Full(x) => {
            let CliffordBasis::Monomials(masks) = &src.basis else {
                return Err(invalid!("the full Clifford algebra needs a pair on a trivial algebra"));
            };
            let full = clifford_full(&form_of(spec)?.scaled(x))?;
            let xinv = x.inv().ok_or_else(|| invalid!("scale must be nonzero"))?;
            masks
                .iter()
                .map(|m| {
                    let k = full.monomial_index(*m).ok_or_else(|| invalid!("monomial missing"))?;
                    let mut v = zero_vec(&f, full.dim());
                    v[k] = xinv.pow((m.count_ones() / 2) as u64);
                    Ok(v)
                })
                .collect::<Result<_>>()?
        }
        _ => return Err(invalid!("{} cannot be the first factor", recipe.describe())),
    };
    Matrix::from_cols(&f, base.dim(), &cols)
}

fn lift(f: &Field, v: &[Elem], rest: usize) -> Vector {
    let mut w = zero_vec(f, v.len() * rest);
    for (i, c) in v.iter().enumerate() {
        w[i * rest] = c.clone();
    }
    w
}

fn combine(types: &[InvolutionType], char_two: bool) -> InvolutionType {
    if types.contains(&InvolutionType::Unitary) {
        return InvolutionType::Unitary;
    }
    let symp = types.iter().filter(|t| **t == InvolutionType::Symplectic).count();
    if char_two {
        if symp == 0 {
            InvolutionType::Orthogonal
        } else {
            InvolutionType::Symplectic
        }
    } else if symp % 2 == 0 {
        InvolutionType::Orthogonal
    } else {
        InvolutionType::Symplectic
    }
}

fn factor_type(alg: &Arc<StructureAlgebra>, inv: &Matrix) -> Result<InvolutionType> {
    involution_type(&involution_attach(alg.clone(), inv.clone(), None)?)
}

/// Brauer class over F of a factor (for the base: the class it carries over its center).
fn factor_class(spec: &PairSpec, p: &InvariantProfile, recipe: &FactorRecipe, alg: &StructureAlgebra) -> Result<Option<BrauerClass2>> {
    let triv = BrauerClass2::trivial(ClassBase::of_field(&p.field));
    Ok(match recipe {
        FactorRecipe::Source => Some(match &p.clifford {
            CliffordData::Central(c) => c.clone(),
            CliffordData::FieldCenter { class, .. } => class.clone(),
            CliffordData::SplitCenter { plus, minus } => {
                if !plus.equals(minus)? {
                    return Err(Error::Unsupported("C(P) with split center and distinct factor classes".into()));
                }
                plus.clone()
            }
        }),
        FactorRecipe::Corner(_) => Some(if alg.dim() == 4 && !p.field.is_char_two() {
            quaternion_class(alg)?
        } else if p.field.order().is_some() {
            triv
        } else {
            match &p.clifford {
                CliffordData::SplitCenter { plus, minus } if plus.equals(minus)? => plus.clone(),
                _ => return Err(Error::Unsupported("class of this corner".into())),
            }
        }),
        FactorRecipe::Full(x) => Some(full_class(spec, x)?),
        FactorRecipe::Quaternion(a, b) => Some(match &p.field {
            Field::Rationals => BrauerClass2::symbol(a.to_rational()?, b.to_rational()?)?,
            _ => triv,
        }),
        FactorRecipe::Etale(_) => None,
    })
}

/// Center of B when the composition is unitary: S, or the center of C(P)
/// when B contains no separate S factor.
fn unitary_center(p: &InvariantProfile, recipes: &[FactorRecipe]) -> Option<EtaleQuadratic> {
    for r in recipes {
        if let FactorRecipe::Etale(s) = r {
            return Some(s.clone());
        }
    }
    match &p.clifford {
        CliffordData::FieldCenter { center, .. } => Some(center.clone()),
        CliffordData::SplitCenter { .. } => Some(EtaleQuadratic::split_over(&p.field)),
        CliffordData::Central(_) => None,
    }
}

#[derive(Clone, Debug)]
pub struct WitnessCheck {
    pub target: Arc<StructureAlgebra>,
    pub factors: Vec<WitnessFactor>,
    pub tau: LinearMap,
    pub tau_type: InvolutionType,
    pub degree: u64,
    pub class: BrauerClass2,
    pub certificate: HomVerdict,
    pub admissibility: Admissibility,
    pub injective: bool,
}

impl WitnessCheck {
    pub fn ok(&self) -> bool {
        self.certificate.ok() && self.admissibility.admissible
    }
}

/// Rebuilds B from the recipes and re-checks a composition: the involutions,
/// the homomorphism with tau f = f sigma, the type, the class and the degree form.
pub fn recheck(
    spec: &PairSpec,
    src: &CliffordAlgebra,
    recipes: &[FactorRecipe],
    involutions: &[Matrix],
    hom: &Matrix,
    ty: &CompositionType,
) -> Result<WitnessCheck> {
    if recipes.is_empty() || recipes.len() != involutions.len() {
        return Err(invalid!("one involution per factor"));
    }
    let p = invariant_profile(spec)?;
    let f = p.field.clone();
    let mut factors = Vec::new();
    let mut class = BrauerClass2::trivial(ClassBase::of_field(&f));
    for (k, (r, inv)) in recipes.iter().zip(involutions).enumerate() {
        if k > 0 && matches!(r, FactorRecipe::Source | FactorRecipe::Corner(_) | FactorRecipe::Full(_)) {
            return Err(invalid!("{} must be the first factor", r.describe()));
        }
        let alg = build_factor(spec, src, r)?;
        let t = factor_type(&alg, inv)?;
        let degree = match r {
            FactorRecipe::Etale(_) => 1,
            FactorRecipe::Source => src.structure.degree as u64,
            FactorRecipe::Corner(_) => isqrt(alg.dim()),
            FactorRecipe::Full(_) => 1u64 << (p.degree / 2),
            FactorRecipe::Quaternion(..) => 2,
        };
        if let Some(c) = factor_class(spec, &p, r, &alg)? {
            class = class.product(&c)?;
        }
        factors.push(WitnessFactor { recipe: r.clone(), algebra: alg, involution: inv.clone(), ty: t, degree });
    }
    let char_two = f.is_char_two();
    let tau_type = combine(&factors.iter().map(|x| x.ty).collect::<Vec<_>>(), char_two);
    let mut target = factors[0].algebra.as_ref().clone();
    for x in &factors[1..] {
        target = tensor(&target, &x.algebra)?;
    }
    let target = Arc::new(target);
    let tau = if factors.len() == 1 {
        LinearMap::Dense(factors[0].involution.clone())
    } else {
        LinearMap::Kron(factors.iter().map(|x| x.involution.clone()).collect())
    };
    if target.dim() <= 64 {
        let direct = factor_type(&target, &tau.to_dense())?;
        if direct != tau_type {
            return Err(Error::Certification(format!("tau is {} but the factors give {}", direct.name(), tau_type.name())));
        }
    }
    let degree: u64 = factors.iter().map(|x| x.degree).product();
    let sigma = LinearMap::Dense(src.involution.sigma.clone());
    let certificate = hom_verify_maps(hom, &src.carrier, &target, Some((&sigma, &tau)));
    let injective = hom.rank() == src.dim();
    let (want_type, class) = match ty {
        CompositionType::FirstKind { c, t } => {
            if !class.equals(c)? {
                return Err(Error::Certification(format!("[B] = {} differs from c = {}", class.describe(), c.describe())));
            }
            (*t, class)
        }
        CompositionType::Unitary { s, c } => {
            let z = unitary_center(&p, recipes).ok_or_else(|| invalid!("B has no quadratic center"))?;
            if !z.is_isomorphic(s) {
                return Err(Error::Certification(format!("center {} of B is not S = {}", z.describe(), s.describe())));
            }
            let over_s = class.restrict(s)?;
            if !over_s.equals(c)? {
                return Err(Error::Certification(format!("[B] = {} differs from c' = {}", over_s.describe(), c.describe())));
            }
            (InvolutionType::Unitary, over_s)
        }
    };
    if tau_type != want_type {
        return Err(Error::Certification(format!("tau is {}, expected {}", tau_type.name(), want_type.name())));
    }
    let admissibility = admissible_degree(&p, ty, degree, Some(injective))?;
    Ok(WitnessCheck { target, factors, tau, tau_type, degree, class, certificate, admissibility, injective })
}

/// Class of the G factor making [B] right, or None if no G is needed.
fn needed_g(p: &InvariantProfile, ty: &CompositionType, base_class: &BrauerClass2, over: Option<&EtaleQuadratic>) -> Result<Option<(Elem, Elem)>> {
    if p.field.order().is_some() {
        return Ok(None);
    }
    let target = match ty {
        CompositionType::FirstKind { c, .. } => c.clone(),
        CompositionType::Unitary { c, .. } => q_rep(c)?,
    };
    let need = target.product(base_class)?;
    let exts: Vec<&EtaleQuadratic> = over.into_iter().collect();
    if d_restricted(&need, &BrauerClass2::trivial(ClassBase::Rationals), &exts)? == 0 {
        return Ok(None);
    }
    let (a, b) = find_symbol(&need.local_invariants()?, SYMBOL_BUDGET)?;
    Ok(Some((p.field.from_i64(a), p.field.from_i64(b))))
}

fn q_rep(c: &BrauerClass2) -> Result<BrauerClass2> {
    match c.base() {
        ClassBase::Quadratic(_) => match c.components() {
            Some((a, _)) => Ok(a),
            None => BrauerClass2::over_q(c.symbols().to_vec()),
        },
        _ => Ok(c.clone()),
    }
}

struct Choice {
    recipe: FactorRecipe,
    alg: Arc<StructureAlgebra>,
    invs: Vec<(Matrix, InvolutionType)>,
}

/// Base choices for C(P) -> base, with every involution on the base extending sigma.
fn base_options(spec: &PairSpec, src: &CliffordAlgebra, recipe: FactorRecipe, seed: u64) -> Result<(Choice, Matrix)> {
    let alg = build_factor(spec, src, &recipe)?;
    let m = base_map(spec, src, &recipe, &alg)?;
    let sigma = &src.involution.sigma;
    let invs = match &recipe {
        FactorRecipe::Source => vec![(sigma.clone(), involution_type(&src.involution)?)],
        FactorRecipe::Corner(e) => {
            let coords = corner_coords(&src.carrier, e)?;
            let mut cols = Vec::new();
            for b in coords.basis() {
                let sb = sigma.mul_vec(b)?;
                cols.push(coords.coords(&sb).ok_or_else(|| invalid!("sigma does not preserve the corner"))?);
            }
            let inv = Matrix::from_cols(src.field(), alg.dim(), &cols)?;
            let t = factor_type(&alg, &inv)?;
            vec![(inv, t)]
        }
        FactorRecipe::Full(_) => {
            let full_sigma = clifford_full(&form_of(spec)?.scaled(match &recipe {
                FactorRecipe::Full(x) => x,
                _ => unreachable!(),
            }))?
            .involution
            .sigma;
            let gens: Vec<Vector> = src.generators.iter().map(|g| m.mul_vec(g)).collect::<Result<_>>()?;
            let imgs: Vec<Vector> =
                src.generators.iter().map(|g| m.mul_vec(&sigma.mul_vec(g)?)).collect::<Result<_>>()?;
            extension_candidates(&alg, &full_sigma, &gens, &imgs, seed, DEFAULT_RETRY_BUDGET)?
                .into_iter()
                .map(|e| (e.sigma, e.ty))
                .collect()
        }
        _ => unreachable!(),
    };
    Ok((Choice { recipe, alg, invs }, m))
}

fn search(opts: &[Choice], want: InvolutionType, char_two: bool) -> Option<Vec<usize>> {
    let mut idx = vec![0usize; opts.len()];
    loop {
        let types: Vec<InvolutionType> = opts.iter().zip(&idx).map(|(o, i)| o.invs[*i].1).collect();
        if combine(&types, char_two) == want {
            return Some(idx);
        }
        let mut k = 0;
        loop {
            if k == opts.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < opts[k].invs.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn quaternion_option(f: &Field, a: &Elem, b: &Elem) -> Result<Choice> {
    let alg = Arc::new(quaternion(f, a, b)?);
    let invs = quaternion_involutions(&alg)?;
    Ok(Choice { recipe: FactorRecipe::Quaternion(a.clone(), b.clone()), alg, invs })
}

fn split_option(f: &Field) -> Result<Choice> {
    let alg = Arc::new(split_quaternion(f)?);
    let a = if f.is_char_two() { f.zero() } else { f.one() };
    let invs = quaternion_involutions(&alg)?;
    Ok(Choice { recipe: FactorRecipe::Quaternion(a, f.one()), alg, invs })
}

fn scale_candidates(f: &Field) -> Vec<Elem> {
    if f.order().is_some() {
        return vec![f.one()];
    }
    let mut out = vec![f.one()];
    for x in 1..=SCALE_BUDGET {
        if x > 1 {
            out.push(f.from_i64(x));
        }
        out.push(f.from_i64(-x));
    }
    out
}

/// Picks the scale x whose C(V, x q) leaves the least class to realize.
fn best_scale(spec: &PairSpec, p: &InvariantProfile, ty: &CompositionType) -> Result<Elem> {
    let mut best: Option<(u32, Elem)> = None;
    for x in scale_candidates(&p.field) {
        let cls = full_class(spec, &x)?;
        let cost = match ty {
            CompositionType::FirstKind { c, .. } => d_restricted(c, &cls, &[])?,
            CompositionType::Unitary { s, c } => d_restricted(&q_rep(c)?, &cls, &[s])?,
        };
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, x));
        }
        if cost == 0 {
            break;
        }
    }
    Ok(best.unwrap().1)
}

/// Base factors to try, in order.
fn base_plan(spec: &PairSpec, p: &InvariantProfile, ty: &CompositionType, src: &CliffordAlgebra) -> Result<Vec<FactorRecipe>> {
    let idem = src.structure.center.idempotent.clone();
    let corners = || -> Result<Vec<FactorRecipe>> {
        let e = idem.clone().ok_or_else(|| Error::Certification("split center without idempotent".into()))?;
        let one = src.carrier.one();
        let e2: Vector = one.iter().zip(&e).map(|(a, b)| a - b).collect();
        Ok(vec![FactorRecipe::Corner(e), FactorRecipe::Corner(e2)])
    };
    let full = || -> Result<Vec<FactorRecipe>> { Ok(vec![FactorRecipe::Full(best_scale(spec, p, ty)?)]) };
    match (ty, p.parity, &p.clifford) {
        (_, Parity::Odd, _) => Ok(vec![FactorRecipe::Source]),
        (_, Parity::ZeroMod4, CliffordData::SplitCenter { .. }) => corners(),
        (_, Parity::ZeroMod4, CliffordData::FieldCenter { .. }) => full(),
        (CompositionType::FirstKind { .. }, Parity::TwoMod4, _) => full(),
        (CompositionType::Unitary { s, .. }, Parity::TwoMod4, data) => {
            let same = match data {
                CliffordData::FieldCenter { center, .. } => center.is_isomorphic(s),
                _ => s.split,
            };
            if same {
                Ok(vec![FactorRecipe::Source])
            } else {
                full()
            }
        }
        _ => Err(Error::Certification("profile is inconsistent with its degree".into())),
    }
}

/// A composition of P of the given type whose degree realizes the mcd.
pub fn construct_composition(spec: &PairSpec, ty: &CompositionType, seed: u64) -> Result<CompositionWitness> {
    let p = invariant_profile(spec)?;
    let route = mcd(&p, ty)?;
    let mut trace = vec![format!("{}: {}", route.case, route.status.label())];
    if route.status == McdStatus::NotCoveredByPaper && route.log2.is_none() {
        return Err(Error::NotCovered(route.case.clone()));
    }
    if let CompositionType::FirstKind { t, .. } = ty {
        if p.field.is_char_two() && *t == InvolutionType::Orthogonal && p.canonical_type != InvolutionType::Orthogonal {
            // every extension of a symplectic or unitary involution is symplectic
            return Err(Error::Unsupported(format!(
                "no orthogonal involution extends the {} canonical involution in characteristic 2",
                p.canonical_type.name()
            )));
        }
    }
    let src = source_clifford(spec)?;
    let f = p.field.clone();
    let char_two = f.is_char_two();
    let want = match ty {
        CompositionType::FirstKind { t, .. } => *t,
        CompositionType::Unitary { .. } => InvolutionType::Unitary,
    };
    let mut best: Option<CompositionWitness> = None;
    for recipe in base_plan(spec, &p, ty, &src)? {
        let (base, m) = base_options(spec, &src, recipe, seed)?;
        if base.invs.is_empty() {
            continue;
        }
        let base_class = factor_class(spec, &p, &base.recipe, &base.alg)?.unwrap();
        let mut opts = vec![base];
        let s_needed = match ty {
            CompositionType::Unitary { s, .. } => {
                let in_base = matches!(opts[0].recipe, FactorRecipe::Source) && p.parity == Parity::TwoMod4;
                if !in_base {
                    let alg = Arc::new(etale(s));
                    opts.push(Choice { recipe: FactorRecipe::Etale(s.clone()), alg, invs: vec![(etale_conjugation(s), InvolutionType::Unitary)] });
                }
                Some(s)
            }
            _ => None,
        };
        if let Some((a, b)) = needed_g(&p, ty, &base_class, s_needed)? {
            opts.push(quaternion_option(&f, &a, &b)?);
        }
        let mut pick = search(&opts, want, char_two);
        if pick.is_none() {
            opts.push(split_option(&f)?);
            pick = search(&opts, want, char_two);
            if pick.is_some() {
                trace.push("stabilized with M2(F) to reach the type".into());
            }
        }
        let Some(pick) = pick else { continue };
        let recipes: Vec<FactorRecipe> = opts.iter().map(|o| o.recipe.clone()).collect();
        let invs: Vec<Matrix> = opts.iter().zip(&pick).map(|(o, i)| o.invs[*i].0.clone()).collect();
        let rest: usize = opts[1..].iter().map(|o| o.alg.dim()).product();
        let cols: Vec<Vector> = m.col_vecs().iter().map(|c| lift(&f, c, rest)).collect();
        let hom = Matrix::from_cols(&f, m.rows() * rest, &cols)?;
        let chk = recheck(spec, &src, &recipes, &invs, &hom, ty)?;
        if !chk.certificate.ok() {
            return Err(Error::Certification(format!("homomorphism check failed: {:?}", chk.certificate)));
        }
        if best.as_ref().is_some_and(|b| b.degree <= chk.degree) {
            continue;
        }
        let mut tr = trace.clone();
        tr.push(format!("B = {}", recipes.iter().map(|r| r.describe()).collect::<Vec<_>>().join(" (x) ")));
        best = Some(CompositionWitness {
            spec: spec.clone(),
            source: src.clone(),
            factors: chk.factors,
            target: chk.target,
            tau: chk.tau,
            tau_type: chk.tau_type,
            hom,
            ty: ty.clone(),
            degree: chk.degree,
            class: chk.class,
            mcd: route.clone(),
            admissibility: chk.admissibility,
            certificate: chk.certificate,
            injective: chk.injective,
            trace: tr,
            seed,
        });
    }
    let w = best.ok_or_else(|| Error::SearchExhausted("no factor choice reaches the requested type".into()))?;
    if !w.admissibility.admissible {
        return Err(Error::Certification(format!("degree {} fails {}", w.degree, w.admissibility.case)));
    }
    if p.parity == Parity::TwoMod4 && !w.injective {
        return Err(Error::Certification("composition of a 4k+2 pair is not injective".into()));
    }
    let e = w.mcd.log2.unwrap_or(0);
    let ok = match w.mcd.status {
        McdStatus::Exact | McdStatus::NotCoveredByPaper => w.degree == 1u64 << e,
        _ => w.degree % (1u64 << e) == 0,
    };
    if !ok {
        return Err(Error::Certification(format!("witness degree {} does not match 2^{e} ({})", w.degree, w.mcd.status.label())));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::QuadraticSpace;
    use crate::scalars::quadext::quad_ext_info;

    fn form(f: &Field, e: &[i64]) -> PairSpec {
        PairSpec::Form(QuadraticSpace::diag_i64(f, e).unwrap())
    }

    fn first(c: BrauerClass2, t: InvolutionType) -> CompositionType {
        CompositionType::first_kind(c, t).unwrap()
    }

    #[test]
    fn example_one_degrees() {
        let f = Field::rationals();
        let spec = form(&f, &[1, 1, 1, -1, 1]);
        let h = BrauerClass2::from_ints(&[(-1, -1)]).unwrap();
        let w = construct_composition(&spec, &first(h.clone(), InvolutionType::Symplectic), 1).unwrap();
        assert_eq!(w.degree, 4);
        let w = construct_composition(&spec, &first(h, InvolutionType::Orthogonal), 1).unwrap();
        assert_eq!(w.degree, 8);
    }

    #[test]
    fn gf3_ternary() {
        let f = Field::prime_field(3).unwrap();
        let triv = BrauerClass2::trivial(ClassBase::of_field(&f));
        let w = construct_composition(&form(&f, &[1, 1, 1]), &first(triv, InvolutionType::Symplectic), 1).unwrap();
        assert_eq!(w.degree, 2);
    }

    #[test]
    fn unitary_six() {
        let f = Field::rationals();
        let s = quad_ext_info(&f, f.from_i64(-1)).unwrap();
        let c = BrauerClass2::trivial(ClassBase::Rationals).restrict(&s).unwrap();
        let ty = CompositionType::unitary(s, c).unwrap();
        let w = construct_composition(&form(&f, &[1, 1, 1, 1, 1, 1]), &ty, 1).unwrap();
        assert_eq!(w.degree, 4);
        assert!(w.injective);
    }

    #[test]
    fn quaternion_tensor_symplectic() {
        let f = Field::rationals();
        let spec = PairSpec::QuaternionTensor {
            field: f.clone(),
            q1: (f.from_i64(-1), f.from_i64(-1)),
            q2: (f.from_i64(2), f.from_i64(5)),
        };
        let triv = BrauerClass2::trivial(ClassBase::Rationals);
        let w = construct_composition(&spec, &first(triv, InvolutionType::Symplectic), 1).unwrap();
        assert_eq!(w.degree, 4);
    }
}

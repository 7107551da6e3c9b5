//! Minimal composition degrees, lower bounds and degree admissibility.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::InvolutionType;
use crate::brauer::{metric, BrauerClass2, ClassBase};
use crate::clifford::expected_involution_type;
use crate::error::{invalid, Error, Result};
use crate::quadform::{center_invariant, clifford_class_general, regularity_classify, QuadraticSpace, Regularity};
use crate::scalars::hilbert::Splitting;
use crate::scalars::quadext::EtaleQuadratic;
use crate::scalars::{Elem, Field};

/// n = 2k+1, 4k or 4k+2; `k` is the k of that decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    ZeroMod4,
    TwoMod4,
}

impl Parity {
    pub fn of(n: usize) -> (Parity, usize) {
        if n % 2 == 1 {
            (Parity::Odd, (n - 1) / 2)
        } else if n % 4 == 0 {
            (Parity::ZeroMod4, n / 4)
        } else {
            (Parity::TwoMod4, (n - 2) / 4)
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Odd => "2k+1",
            Parity::ZeroMod4 => "4k",
            Parity::TwoMod4 => "4k+2",
        }
    }
}

/// Brauer data of C(P).
#[derive(Clone, Debug)]
pub enum CliffordData {
    /// Odd degree: C is central simple over F.
    Central(BrauerClass2),
    /// Split center: C = C+ x C-.
    SplitCenter { plus: BrauerClass2, minus: BrauerClass2 },
    /// Field center Z; C is the restriction of `class` (over F) to Z.
    FieldCenter { center: EtaleQuadratic, class: BrauerClass2 },
}

#[derive(Clone, Debug)]
pub struct InvariantProfile {
    pub field: Field,
    pub degree: usize,
    pub parity: Parity,
    pub k: usize,
    pub clifford: CliffordData,
    pub canonical_type: InvolutionType,
    /// [A], when known.
    pub algebra_class: Option<BrauerClass2>,
}

impl InvariantProfile {
    pub fn center(&self) -> Option<&EtaleQuadratic> {
        match &self.clifford {
            CliffordData::FieldCenter { center, .. } => Some(center),
            _ => None,
        }
    }

    pub fn center_split(&self) -> bool {
        matches!(self.clifford, CliffordData::SplitCenter { .. })
    }

    /// Degree of C(P) over its center.
    pub fn clifford_degree_log2(&self) -> usize {
        if self.degree % 2 == 1 {
            self.degree / 2
        } else {
            self.degree / 2 - 1
        }
    }

    pub fn describe_center(&self) -> String {
        match &self.clifford {
            CliffordData::Central(_) => format!("{}", self.field),
            CliffordData::SplitCenter { .. } => format!("{0}x{0}", self.field),
            CliffordData::FieldCenter { center, .. } => center.describe(),
        }
    }
}

/// The pairs the profile can be computed for.
#[derive(Clone, Debug)]
pub enum PairSpec {
    /// (End V, sigma_q, f_q), or the odd semiregular space itself in characteristic 2.
    Form(QuadraticSpace),
    /// The canonical pair on Q1 (x) Q2 with Q_i given by their symbols.
    QuaternionTensor { field: Field, q1: (Elem, Elem), q2: (Elem, Elem) },
}

fn class_of_symbol(field: &Field, a: &Elem, b: &Elem) -> Result<BrauerClass2> {
    match field {
        Field::Rationals => BrauerClass2::symbol(a.to_rational()?, b.to_rational()?),
        f => Ok(BrauerClass2::trivial(ClassBase::Finite(f.clone()))),
    }
}

pub fn invariant_profile(spec: &PairSpec) -> Result<InvariantProfile> {
    match spec {
        PairSpec::Form(q) => profile_of_form(q),
        PairSpec::QuaternionTensor { field, q1, q2 } => {
            let plus = class_of_symbol(field, &q1.0, &q1.1)?;
            let minus = class_of_symbol(field, &q2.0, &q2.1)?;
            let a = plus.product(&minus)?;
            Ok(InvariantProfile {
                field: field.clone(),
                degree: 4,
                parity: Parity::ZeroMod4,
                k: 1,
                clifford: CliffordData::SplitCenter { plus, minus },
                canonical_type: expected_involution_type(4, field.is_char_two()),
                algebra_class: Some(a),
            })
        }
    }
}

fn profile_of_form(q: &QuadraticSpace) -> Result<InvariantProfile> {
    let f = q.field().clone();
    let n = q.dim();
    if n < 2 {
        return Err(invalid!("pairs of degree n > 1 only"));
    }
    let reg = regularity_classify(q).class;
    match reg {
        Regularity::Regular => {}
        Regularity::Semiregular if f.is_char_two() && n % 2 == 1 => {}
        _ => return Err(invalid!("form is singular")),
    }
    let (parity, k) = Parity::of(n);
    let cls = clifford_class_general(q)?;
    let clifford = if n % 2 == 1 {
        CliffordData::Central(cls.even_class()?)
    } else {
        let center = center_invariant(q)?;
        let full = match cls {
            crate::quadform::CliffordClass::OverCenter { full, .. } => full,
            crate::quadform::CliffordClass::Central(c) => c,
        };
        if center.split {
            // C0 is the centralizer of Z in C(q); both factors have the class of C(q)
            CliffordData::SplitCenter { plus: full.clone(), minus: full }
        } else {
            CliffordData::FieldCenter { center, class: full }
        }
    };
    Ok(InvariantProfile {
        field: f.clone(),
        degree: n,
        parity,
        k,
        clifford,
        canonical_type: expected_involution_type(n, f.is_char_two()),
        algebra_class: Some(BrauerClass2::trivial(ClassBase::of_field(&f))),
    })
}

/// Type of a composition: (c, t) of the first kind, or (S, c') unitary.
#[derive(Clone, Debug)]
pub enum CompositionType {
    FirstKind { c: BrauerClass2, t: InvolutionType },
    Unitary { s: EtaleQuadratic, c: BrauerClass2 },
}

impl CompositionType {
    pub fn first_kind(c: BrauerClass2, t: InvolutionType) -> Result<Self> {
        if t == InvolutionType::Unitary {
            return Err(invalid!("first-kind type must be orthogonal or symplectic"));
        }
        if matches!(c.base(), ClassBase::Quadratic(_)) {
            return Err(invalid!("first-kind target class must live over the base field"));
        }
        // classes given by symbols are 2-torsion
        Ok(CompositionType::FirstKind { c, t })
    }

    /// c' must be a class over S with trivial norm.
    pub fn unitary(s: EtaleQuadratic, c: BrauerClass2) -> Result<Self> {
        match c.base() {
            ClassBase::Quadratic(e) if e.is_isomorphic(&s) => {}
            ClassBase::Finite(_) if s.base.order().is_some() => {}
            _ => return Err(invalid!("target class does not live over S")),
        }
        norm_representative(&c)?;
        Ok(CompositionType::Unitary { s, c })
    }
}

/// A class over F whose restriction to S is c'. Fails when N(c') != 1.
fn norm_representative(c: &BrauerClass2) -> Result<BrauerClass2> {
    match c.base() {
        ClassBase::Finite(f) => Ok(BrauerClass2::trivial(ClassBase::Finite(f.clone()))),
        ClassBase::Rationals => Ok(c.clone()),
        ClassBase::Quadratic(_) => {
            if let Some((a, b)) = c.components() {
                if !a.equals(&b)? {
                    return Err(invalid!("N(c') != 1: the components of c' differ"));
                }
                Ok(a)
            } else {
                BrauerClass2::over_q(c.symbols().to_vec())
            }
        }
    }
}

/// log2 of the index of c1 c2 after restricting to the tensor product of the
/// given quadratic étale algebras (over F when the list is empty).
pub fn d_restricted(c1: &BrauerClass2, c2: &BrauerClass2, exts: &[&EtaleQuadratic]) -> Result<u32> {
    if matches!(c1.base(), ClassBase::Finite(_)) || matches!(c2.base(), ClassBase::Finite(_)) {
        return Ok(0);
    }
    let support = c1.product(c2)?.local_invariants()?;
    for v in support {
        let mut all_split = true;
        for e in exts {
            if !e.split && e.splitting_at(v)? != Splitting::Split {
                all_split = false;
                break;
            }
        }
        if all_split {
            return Ok(1);
        }
    }
    Ok(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McdStatus {
    Exact,
    MultipleOnly,
    LowerBoundOnly,
    NotCoveredByPaper,
}

impl McdStatus {
    pub fn label(self) -> &'static str {
        match self {
            McdStatus::Exact => "exact",
            McdStatus::MultipleOnly => "multiple-only",
            McdStatus::LowerBoundOnly => "lower-bound-only",
            McdStatus::NotCoveredByPaper => "not-covered-by-paper",
        }
    }
}

#[derive(Clone, Debug)]
pub struct McdResult {
    pub status: McdStatus,
    /// Exponent e of the value 2^e; None when no value is available.
    pub log2: Option<u32>,
    pub case: String,
    /// Whether every composition of this type has degree a multiple of 2^e.
    pub divisibility: bool,
    pub note: Option<String>,
}

impl McdResult {
    fn new(status: McdStatus, log2: u32, case: &str, divisibility: bool) -> Self {
        McdResult { status, log2: Some(log2), case: case.into(), divisibility, note: None }
    }

    pub fn value(&self) -> Option<u64> {
        self.log2.map(|e| 1u64 << e)
    }
}

fn epsilon(p: &InvariantProfile, t: InvolutionType) -> u32 {
    u32::from(p.canonical_type != t)
}

fn check_field(p: &InvariantProfile, c: &BrauerClass2) -> Result<()> {
    let ok = match (c.base(), &p.field) {
        (ClassBase::Rationals, Field::Rationals) => true,
        (ClassBase::Finite(f), g) => f == g,
        (ClassBase::Quadratic(e), g) => &e.base == g,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::FieldMismatch("target class and pair live over different fields".into()))
    }
}

/// mcd(P, c, t) for involutions of the first kind.
pub fn mcd_first_kind(p: &InvariantProfile, c: &BrauerClass2, t: InvolutionType) -> Result<McdResult> {
    if t == InvolutionType::Unitary {
        return Err(invalid!("use mcd_unitary for unitary involutions"));
    }
    check_field(p, c)?;
    let k = p.k as u32;
    let eps = epsilon(p, t);
    Ok(match (&p.parity, &p.clifford) {
        (Parity::Odd, CliffordData::Central(cc)) => {
            let d = d_restricted(c, cc, &[])?;
            let delta = u32::from(d == 0 && eps == 1);
            McdResult::new(McdStatus::Exact, k + d + delta, "first kind, n odd", true)
        }
        (Parity::ZeroMod4, CliffordData::FieldCenter { center, class }) => {
            let d = d_restricted(c, class, &[center])?;
            let delta = u32::from(d == 0 && eps == 1);
            McdResult::new(McdStatus::MultipleOnly, 2 * k + d + delta, "first kind, n = 4k, Z a field", true)
        }
        (Parity::ZeroMod4, CliffordData::SplitCenter { plus, minus }) => {
            let dp = metric(c, plus)?;
            let dm = metric(c, minus)?;
            let delta = u32::from((dp == 0 || dm == 0) && eps == 1);
            McdResult::new(McdStatus::Exact, 2 * k - 1 + dp.min(dm) + delta, "first kind, n = 4k, Z split", false)
        }
        (Parity::TwoMod4, CliffordData::FieldCenter { center, class }) => {
            let d = d_restricted(c, class, &[center])?;
            McdResult::new(McdStatus::Exact, 2 * k + 1 + d, "first kind, n = 4k+2", true)
        }
        (Parity::TwoMod4, CliffordData::SplitCenter { plus, minus }) => {
            let d = metric(c, plus)?.max(metric(c, minus)?);
            McdResult::new(McdStatus::Exact, 2 * k + 1 + d, "first kind, n = 4k+2", false)
        }
        _ => return Err(Error::Certification("profile is inconsistent with its degree".into())),
    })
}

/// mcd(P, c', 0) for unitary involutions with center S.
pub fn mcd_unitary(p: &InvariantProfile, s: &EtaleQuadratic, c: &BrauerClass2) -> Result<McdResult> {
    check_field(p, c)?;
    if s.base != p.field {
        return Err(Error::FieldMismatch("S is not over the base field".into()));
    }
    CompositionType::unitary(s.clone(), c.clone())?;
    let c0 = norm_representative(c)?;
    let k = p.k as u32;
    Ok(match (&p.parity, &p.clifford) {
        (Parity::Odd, CliffordData::Central(cc)) => {
            let d = d_restricted(&c0, cc, &[s])?;
            McdResult::new(McdStatus::Exact, k + d, "unitary, n odd", true)
        }
        (Parity::ZeroMod4, CliffordData::SplitCenter { plus, minus }) => {
            let dp = d_restricted(&c0, plus, &[s])?;
            let dm = d_restricted(&c0, minus, &[s])?;
            McdResult::new(McdStatus::Exact, 2 * k - 1 + dp.min(dm), "unitary, n = 4k, Z split", false)
        }
        (Parity::ZeroMod4, CliffordData::FieldCenter { center, class }) => {
            if center.is_isomorphic(s) {
                let mut r = McdResult {
                    status: McdStatus::NotCoveredByPaper,
                    log2: None,
                    case: "unitary, n = 4k, Z = S a field (excluded)".into(),
                    divisibility: false,
                    note: None,
                };
                if p.algebra_class.as_ref().map_or(Ok(false), |a| a.is_trivial())? {
                    // trivial algebra: C0 sits in C(V, q), giving degree 2^{2k + d(C0, c')}
                    let d = d_restricted(&c0, class, &[s])?;
                    r.log2 = Some(2 * k + d);
                    r.note = Some(format!(
                        "trivial algebra: a composition of degree 2^{} exists through the full Clifford algebra and is minimal",
                        2 * k + d
                    ));
                }
                r
            } else {
                let d = d_restricted(&c0, class, &[center, s])?;
                McdResult::new(McdStatus::MultipleOnly, 2 * k + d, "unitary, n = 4k, Z a field not isomorphic to S", true)
            }
        }
        (Parity::TwoMod4, data) => {
            let z_split = matches!(data, CliffordData::SplitCenter { .. });
            match data {
                CliffordData::FieldCenter { center, class } if center.is_isomorphic(s) => {
                    let cz = class.restrict(s)?;
                    let d = metric(c, &cz)?.min(metric(c, &cz.opposite())?);
                    McdResult::new(McdStatus::Exact, 2 * k + d, "unitary, n = 4k+2, Z = S", false)
                }
                CliffordData::SplitCenter { plus, minus } if s.split => {
                    let cz = split_class(&p.field, plus, minus)?;
                    let d = metric(c, &cz)?.min(metric(c, &cz.opposite())?);
                    McdResult::new(McdStatus::Exact, 2 * k + d, "unitary, n = 4k+2, Z = S", false)
                }
                CliffordData::FieldCenter { center, class } => {
                    let d = d_restricted(&c0, class, &[center, s])?;
                    McdResult::new(
                        McdStatus::MultipleOnly,
                        2 * k + 1 + d,
                        "unitary, n = 4k+2, Z a field not isomorphic to S",
                        true,
                    )
                }
                _ => {
                    debug_assert!(z_split && !s.split);
                    McdResult {
                        status: McdStatus::NotCoveredByPaper,
                        log2: None,
                        case: "unitary, n = 4k+2, Z split and S a field (excluded)".into(),
                        divisibility: false,
                        note: None,
                    }
                }
            }
        }
        _ => return Err(Error::Certification("profile is inconsistent with its degree".into())),
    })
}

fn split_class(f: &Field, plus: &BrauerClass2, minus: &BrauerClass2) -> Result<BrauerClass2> {
    match f {
        Field::Rationals => BrauerClass2::split_pair(plus.symbols().to_vec(), minus.symbols().to_vec()),
        g => Ok(BrauerClass2::trivial(ClassBase::Finite(g.clone()))),
    }
}

pub fn mcd(p: &InvariantProfile, ty: &CompositionType) -> Result<McdResult> {
    match ty {
        CompositionType::FirstKind { c, t } => mcd_first_kind(p, c, *t),
        CompositionType::Unitary { s, c } => mcd_unitary(p, s, c),
    }
}

#[derive(Clone, Debug)]
pub struct LowerBound {
    pub log2: u32,
    /// Whether a composition of the given type reaches the bound.
    pub attained: bool,
    pub condition: String,
}

/// Structure-independent bound on deg B and whether the type attains it.
pub fn lower_bound(p: &InvariantProfile, ty: &CompositionType) -> Result<LowerBound> {
    let k = p.k as u32;
    let lb = |log2, attained, condition: &str| LowerBound { log2, attained, condition: condition.into() };
    Ok(match ty {
        CompositionType::Unitary { s, c } => {
            let c0 = norm_representative(c)?;
            match &p.clifford {
                CliffordData::Central(cc) => lb(k, d_restricted(&c0, cc, &[s])? == 0, "[C (x) S] = c'"),
                CliffordData::SplitCenter { plus, minus } if p.parity == Parity::ZeroMod4 => {
                    let hit = d_restricted(&c0, plus, &[s])? == 0 || d_restricted(&c0, minus, &[s])? == 0;
                    lb(2 * k - 1, hit, "Z split and [C+ (x) S] = c' or [C- (x) S] = c'")
                }
                CliffordData::FieldCenter { .. } if p.parity == Parity::ZeroMod4 => {
                    lb(2 * k - 1, false, "Z split and [C+ (x) S] = c' or [C- (x) S] = c'")
                }
                CliffordData::FieldCenter { center, class } => {
                    let hit = center.is_isomorphic(s) && d_restricted(&c0, class, &[s])? == 0;
                    lb(2 * k, hit, "Z = S and [C] = c'")
                }
                CliffordData::SplitCenter { plus, minus } => {
                    let hit = s.split && {
                        let cz = split_class(&p.field, plus, minus)?;
                        metric(c, &cz)? == 0
                    };
                    lb(2 * k, hit, "Z = S and [C] = c'")
                }
            }
        }
        CompositionType::FirstKind { c, t } => {
            let eps = epsilon(p, *t);
            match &p.clifford {
                CliffordData::Central(cc) => {
                    if eps == 0 {
                        lb(k, d_restricted(c, cc, &[])? == 0, "[C] = c")
                    } else {
                        // c [C] always has index at most 2
                        lb(k + 1, true, "[C (x) Q] = c for a quaternion algebra Q")
                    }
                }
                CliffordData::SplitCenter { plus, minus } if p.parity == Parity::ZeroMod4 => {
                    if eps == 0 {
                        let hit = metric(c, plus)? == 0 || metric(c, minus)? == 0;
                        lb(2 * k - 1, hit, "Z split and [C+] = c or [C-] = c")
                    } else {
                        lb(2 * k, true, "[C+ (x) Q] = c or [C- (x) Q] = c for a quaternion algebra Q")
                    }
                }
                CliffordData::FieldCenter { .. } if p.parity == Parity::ZeroMod4 => {
                    let cond = if eps == 0 {
                        "Z split and [C+] = c or [C-] = c"
                    } else {
                        "[C+ (x) Q] = c or [C- (x) Q] = c for a quaternion algebra Q"
                    };
                    lb(2 * k - 1 + eps, false, cond)
                }
                CliffordData::FieldCenter { center, class } => {
                    lb(2 * k + 1, d_restricted(c, class, &[center])? == 0, "[C] = [D (x) Z]")
                }
                CliffordData::SplitCenter { plus, minus } => {
                    let d = metric(c, plus)?.max(metric(c, minus)?);
                    lb(2 * k + 1, d == 0, "[C] = [D (x) Z]")
                }
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    pub case: String,
    pub detail: String,
}

/// Whether deg B of the given type can carry a homomorphism C(P) -> B, by the
/// arithmetic forms of the degree constraint for the center configuration.
/// `injective` is the known injectivity of the map, if any.
pub fn admissible_degree(
    p: &InvariantProfile,
    ty: &CompositionType,
    degree: u64,
    injective: Option<bool>,
) -> Result<Admissibility> {
    let dc = 1u64 << p.clifford_degree_log2();
    let multiple_of = |base: u64, case: &str| Admissibility {
        admissible: degree > 0 && degree % base == 0,
        case: case.into(),
        detail: format!("deg B must be a positive multiple of {base}"),
    };
    let two_terms = |a: u32, b: u32, both: bool, case: &str| {
        let step = dc << a.min(b);
        let least = if both { dc * ((1u64 << a) + (1u64 << b)) } else { step };
        Admissibility {
            admissible: degree > 0 && degree % step == 0 && degree >= least,
            case: case.into(),
            detail: format!("deg B = {dc} (n1 2^{a} + n2 2^{b}) with {}", if both { "n1, n2 >= 1" } else { "n1 + n2 >= 1" }),
        }
    };
    let (s, c0): (Option<&EtaleQuadratic>, BrauerClass2) = match ty {
        CompositionType::FirstKind { c, .. } => (None, c.clone()),
        CompositionType::Unitary { s, c } => (Some(s), norm_representative(c)?),
    };
    let exts: Vec<&EtaleQuadratic> = s.into_iter().collect();
    Ok(match &p.clifford {
        CliffordData::Central(cc) => {
            let d = d_restricted(&c0, cc, &exts)?;
            multiple_of(dc << d, "central Clifford algebra")
        }
        CliffordData::SplitCenter { plus, minus } => {
            let dp = d_restricted(&c0, plus, &exts)?;
            let dm = d_restricted(&c0, minus, &exts)?;
            match s {
                Some(s) if s.split => {
                    // B = B+ x B-, both components carry the class of c0
                    two_terms(dp, dm, false, "split center, split S")
                }
                _ => {
                    let both = injective == Some(true) && s.is_none();
                    two_terms(dp, dm, both, "split center")
                }
            }
        }
        CliffordData::FieldCenter { center, class } => match s {
            Some(s) if center.is_isomorphic(s) => {
                let d = d_restricted(&c0, class, &[s])?;
                two_terms(d, d, false, "center isomorphic to S")
            }
            _ => {
                let mut e = exts.clone();
                e.push(center);
                let d = d_restricted(&c0, class, &e)?;
                multiple_of(dc << (d + 1), "field center")
            }
        },
    })
}

/// Minimal degree of a central simple algebra of class b receiving C.
pub fn dbound_min_degree(deg_c: u64, c: &BrauerClass2, b: &BrauerClass2) -> Result<u64> {
    Ok(deg_c << metric(b, c)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::quadext::quad_ext_info;

    fn q() -> Field {
        Field::rationals()
    }

    fn form(entries: &[i64]) -> InvariantProfile {
        invariant_profile(&PairSpec::Form(QuadraticSpace::diag_i64(&q(), entries).unwrap())).unwrap()
    }

    fn triv() -> BrauerClass2 {
        BrauerClass2::trivial(ClassBase::Rationals)
    }

    #[test]
    fn example_one_profile_and_mcd() {
        // a = b = -1: <1, 1, 1, -1, 1>
        let p = form(&[1, 1, 1, -1, 1]);
        let CliffordData::Central(c) = &p.clifford else { panic!() };
        assert!(c.equals(&BrauerClass2::from_ints(&[(-1, -1)]).unwrap()).unwrap());
        assert_eq!(p.canonical_type, InvolutionType::Symplectic);
        let h = BrauerClass2::from_ints(&[(-1, -1)]).unwrap();
        assert_eq!(mcd_first_kind(&p, &h, InvolutionType::Symplectic).unwrap().value(), Some(4));
        assert_eq!(mcd_first_kind(&p, &h, InvolutionType::Orthogonal).unwrap().value(), Some(8));
        let ty = CompositionType::first_kind(h.clone(), InvolutionType::Symplectic).unwrap();
        let lb = lower_bound(&p, &ty).unwrap();
        assert_eq!((lb.log2, lb.attained), (2, true));
        assert!(admissible_degree(&p, &ty, 4, None).unwrap().admissible);
        assert!(!admissible_degree(&p, &ty, 6, None).unwrap().admissible);
    }

    #[test]
    fn quaternion_tensor_mcd() {
        let f = q();
        let spec = PairSpec::QuaternionTensor {
            field: f.clone(),
            q1: (f.from_i64(-1), f.from_i64(-1)),
            q2: (f.from_i64(2), f.from_i64(5)),
        };
        let p = invariant_profile(&spec).unwrap();
        assert_eq!(p.canonical_type, InvolutionType::Symplectic);
        let r = mcd_first_kind(&p, &triv(), InvolutionType::Symplectic).unwrap();
        assert_eq!(r.value(), Some(4));
    }

    #[test]
    fn unitary_examples() {
        let f = q();
        let gi = quad_ext_info(&f, f.from_i64(-1)).unwrap();
        let p = form(&[1, 1, 1]);
        let c = triv().restrict(&gi).unwrap();
        assert_eq!(mcd_unitary(&p, &gi, &c).unwrap().value(), Some(2));
        let p6 = form(&[1, 1, 1, 1, 1, 1]);
        assert_eq!(p6.canonical_type, InvolutionType::Unitary);
        assert!(p6.center().unwrap().is_isomorphic(&gi));
        let r = mcd_unitary(&p6, &gi, &c).unwrap();
        assert_eq!((r.status, r.value()), (McdStatus::Exact, Some(4)));
        // <1,1,1,-2> has signed discriminant -2 -> Z = Q(sqrt -2); S = Z is excluded
        let p4 = form(&[1, 1, 1, -2]);
        let s2 = quad_ext_info(&f, f.from_i64(-2)).unwrap();
        assert!(p4.center().unwrap().is_isomorphic(&s2));
        let r = mcd_unitary(&p4, &s2, &triv().restrict(&s2).unwrap()).unwrap();
        assert_eq!(r.status, McdStatus::NotCoveredByPaper);
        assert!(r.log2.is_some());
    }

    #[test]
    fn field_center_first_kind_bound_not_attained() {
        let p4 = form(&[1, 1, 1, -2]);
        let ty = CompositionType::first_kind(triv(), InvolutionType::Symplectic).unwrap();
        let lb = lower_bound(&p4, &ty).unwrap();
        assert_eq!(lb.log2, 1);
        assert!(!lb.attained);
    }

    #[test]
    fn finite_fields_reduce_to_powers_of_two() {
        let g = Field::prime_field(3).unwrap();
        for n in 2..=7usize {
            let entries: Vec<i64> = (0..n as i64).map(|i| 1 + (i % 2)).collect();
            let p = invariant_profile(&PairSpec::Form(QuadraticSpace::diag_i64(&g, &entries).unwrap())).unwrap();
            let c = BrauerClass2::trivial(ClassBase::Finite(g.clone()));
            let r = mcd_first_kind(&p, &c, InvolutionType::Orthogonal).unwrap();
            let (_, k) = Parity::of(n);
            let e = r.log2.unwrap() as usize;
            match p.parity {
                Parity::Odd => assert!(e == k || e == k + 1),
                Parity::ZeroMod4 => assert!(e == 2 * k - 1 || e == 2 * k || e == 2 * k + 1),
                Parity::TwoMod4 => assert_eq!(e, 2 * k + 1),
            }
        }
    }

    #[test]
    fn profile_matches_clifford_of_pair() {
        use crate::clifford::{clifford_of_pair, clifford_structure};
        use crate::qpair::pair_from_form;
        for entries in [[1, 1, 1, 1], [1, 2, 3, 6], [1, -1, 5, -5]] {
            let qf = QuadraticSpace::diag_i64(&q(), &entries).unwrap();
            let p = invariant_profile(&PairSpec::Form(qf.clone())).unwrap();
            let CliffordData::SplitCenter { plus, minus } = &p.clifford else { panic!("{entries:?}") };
            let c = clifford_of_pair(&pair_from_form(&qf).unwrap()).unwrap();
            let r = clifford_structure(&c, 4).unwrap();
            assert!(r.split);
            let (c1, c2) = r.factor_classes.unwrap();
            assert!(c1.equals(plus).unwrap() && c2.equals(minus).unwrap(), "{entries:?}");
            assert_eq!(r.involution_type, p.canonical_type);
        }
    }
}

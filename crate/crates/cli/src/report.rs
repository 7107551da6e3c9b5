//! JSON views of engine results. Field elements are written as strings.

use cliffcomp_core::algebra::{HomVerdict, InvolutionType};
use cliffcomp_core::brauer::{BrauerClass2, ClassBase};
use cliffcomp_core::linalg::Matrix;
use cliffcomp_core::mcd::{Admissibility, CliffordData, CompositionType, InvariantProfile, LowerBound, McdResult};
use cliffcomp_core::{Elem, Field, Result};
use serde_json::{json, Value};

pub fn elems(v: &[Elem]) -> Vec<String> {
    v.iter().map(|e| e.to_literal()).collect()
}

/// Rows of a matrix.
pub fn matrix(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| elems(m.row(r))).collect()
}

pub fn parse_matrix(f: &Field, rows: &[Vec<String>]) -> Result<Matrix> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|x| f.parse(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(f, rows)
}

pub fn involution_type(t: InvolutionType) -> &'static str {
    t.name()
}

fn symbols(part: &[(cliffcomp_core::Rational, cliffcomp_core::Rational)]) -> Value {
    Value::Array(part.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect())
}

pub fn class(c: &BrauerClass2) -> Value {
    let mut out = json!({
        "base": c.base().to_string(),
        "parts": c.parts().iter().map(|p| symbols(p)).collect::<Vec<_>>(),
    });
    if let Ok(t) = c.is_trivial() {
        out["trivial"] = json!(t);
    }
    match c.base() {
        ClassBase::Rationals => {
            if let Ok(s) = c.local_invariants() {
                out["ramified"] = json!(s.iter().map(|p| p.to_string()).collect::<Vec<_>>());
            }
        }
        ClassBase::Quadratic(_) => {
            if let Ok(parts) = c.component_invariants() {
                out["ramified"] = json!(parts
                    .iter()
                    .map(|s| s.iter().map(|p| p.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>());
            }
        }
        ClassBase::Finite(_) => {}
    }
    if let Ok(i) = c.index() {
        out["index"] = json!(i);
    }
    out
}

pub fn profile(p: &InvariantProfile) -> Value {
    let clifford = match &p.clifford {
        CliffordData::Central(c) => json!({"kind": "central", "class": class(c)}),
        CliffordData::SplitCenter { plus, minus } => {
            json!({"kind": "split-center", "plus": class(plus), "minus": class(minus)})
        }
        CliffordData::FieldCenter { center, class: c } => json!({
            "kind": "field-center",
            "center": center.describe(),
            "center_datum": center.datum.to_literal(),
            "class": class(c),
        }),
    };
    json!({
        "field": p.field.to_string(),
        "degree": p.degree,
        "parity": p.parity.label(),
        "k": p.k,
        "center": p.describe_center(),
        "center_split": p.center_split(),
        "clifford_degree": 1u64 << p.clifford_degree_log2(),
        "clifford": clifford,
        "canonical_type": involution_type(p.canonical_type),
        "algebra_class": p.algebra_class.as_ref().map(class),
    })
}

pub fn composition_type(t: &CompositionType) -> Value {
    match t {
        CompositionType::FirstKind { c, t } => json!({"kind": involution_type(*t), "class": class(c)}),
        CompositionType::Unitary { s, c } => json!({"kind": "unitary", "s": s.describe(), "class": class(c)}),
    }
}

pub fn mcd(r: &McdResult) -> Value {
    json!({
        "status": r.status.label(),
        "log2": r.log2,
        "value": r.value(),
        "case": r.case,
        "divisibility": r.divisibility,
        "note": r.note,
    })
}

pub fn lower_bound(b: &LowerBound) -> Value {
    json!({
        "log2": b.log2,
        "value": 1u64 << b.log2,
        "attained": b.attained,
        "condition": b.condition,
    })
}

pub fn admissibility(a: &Admissibility) -> Value {
    json!({"admissible": a.admissible, "case": a.case, "detail": a.detail})
}

pub fn hom_verdict(v: &HomVerdict) -> Value {
    match v {
        HomVerdict::Certificate { pairs_checked } => json!({"verified": true, "pairs_checked": pairs_checked}),
        HomVerdict::Counterexample { detail } => json!({"verified": false, "counterexample": detail}),
    }
}

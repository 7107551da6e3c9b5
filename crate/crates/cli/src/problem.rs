//! Parsing of problem descriptions: field, object, composition type.

use cliffcomp_core::algebra::InvolutionType;
use cliffcomp_core::brauer::{BrauerClass2, ClassBase, Symbol};
use cliffcomp_core::linalg::Matrix;
use cliffcomp_core::mcd::{CompositionType, PairSpec};
use cliffcomp_core::quadform::QuadraticSpace;
use cliffcomp_core::scalars::{parse_rational, quad_ext_info, EtaleQuadratic};
use cliffcomp_core::{Elem, Error, Field, Result};
use serde::{Deserialize, Serialize};

/// "Q", "GF(p)" or "GF(p^k)".
pub fn parse_field(s: &str) -> Result<Field> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("qq") {
        return Ok(Field::rationals());
    }
    let inner = t
        .strip_prefix("GF(")
        .or_else(|| t.strip_prefix("gf("))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| bad(format!("unknown field {s:?}; use Q, GF(p) or GF(p^k)")))?;
    let (p, k) = match inner.split_once('^') {
        Some((p, k)) => (p.trim(), k.trim()),
        None => (inner.trim(), "1"),
    };
    let p: u32 = p.parse().map_err(|_| bad(format!("bad characteristic in {s:?}")))?;
    let k: u32 = k.parse().map_err(|_| bad(format!("bad degree in {s:?}")))?;
    Field::finite(p, k)
}

pub fn bad(msg: String) -> Error {
    Error::Invalid(msg)
}

/// The object a command runs on. Entries are field literals as strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectSpec {
    /// Diagonal form <a1, ..., an>.
    Diag(Vec<String>),
    /// Form given by an upper-triangular coefficient matrix; covers odd
    /// semiregular spaces in characteristic 2.
    Upper(Vec<Vec<String>>),
    /// Canonical pair on Q1 (x) Q2, Q_i = (a_i, b_i).
    QuaternionPair([[String; 2]; 2]),
}

impl ObjectSpec {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| bad(format!("--object: {e}")))
    }

    pub fn to_pair(&self, f: &Field) -> Result<PairSpec> {
        Ok(match self {
            ObjectSpec::Diag(d) => {
                let entries = d.iter().map(|x| f.parse(x)).collect::<Result<Vec<_>>>()?;
                PairSpec::Form(QuadraticSpace::diag(f, &entries)?)
            }
            ObjectSpec::Upper(rows) => {
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|x| f.parse(x)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                PairSpec::Form(QuadraticSpace::from_matrix(&Matrix::from_rows(f, rows)?)?)
            }
            ObjectSpec::QuaternionPair([q1, q2]) => PairSpec::QuaternionTensor {
                field: f.clone(),
                q1: (f.parse(&q1[0])?, f.parse(&q1[1])?),
                q2: (f.parse(&q2[0])?, f.parse(&q2[1])?),
            },
        })
    }
}

/// A 2-torsion class: a list of symbols over Q, or two lists for a class
/// over Q x Q.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassSpec {
    Symbols(Vec<[String; 2]>),
    Split { plus: Vec<[String; 2]>, minus: Vec<[String; 2]> },
}

impl Default for ClassSpec {
    fn default() -> Self {
        ClassSpec::Symbols(Vec::new())
    }
}

fn symbols(list: &[[String; 2]]) -> Result<Vec<Symbol>> {
    list.iter().map(|[a, b]| Ok((parse_rational(a)?, parse_rational(b)?))).collect()
}

impl ClassSpec {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| bad(format!("--class: {e}")))
    }

    /// The class over F.
    pub fn over_field(&self, f: &Field) -> Result<BrauerClass2> {
        match self {
            ClassSpec::Symbols(list) => match f {
                Field::Rationals => BrauerClass2::over_q(symbols(list)?),
                _ => Ok(BrauerClass2::trivial(ClassBase::of_field(f))),
            },
            ClassSpec::Split { .. } => Err(bad("a split class needs a unitary type with split S".into())),
        }
    }

    /// The class over S: restriction of the symbols, or two components when
    /// S is split.
    pub fn over_extension(&self, f: &Field, s: &EtaleQuadratic) -> Result<BrauerClass2> {
        match self {
            ClassSpec::Symbols(_) => self.over_field(f)?.restrict(s),
            ClassSpec::Split { plus, minus } => {
                if !s.split || *f != Field::Rationals {
                    return Err(bad("plus/minus components need S = Q x Q".into()));
                }
                BrauerClass2::split_pair(symbols(plus)?, symbols(minus)?)
            }
        }
    }
}

/// Requested composition type as given on the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeSpec {
    /// orthogonal, symplectic or unitary.
    pub kind: String,
    #[serde(default)]
    pub class: ClassSpec,
    /// Datum of S for unitary types.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
}

pub fn parse_involution_type(s: &str) -> Result<InvolutionType> {
    match s.trim().to_ascii_lowercase().as_str() {
        "orthogonal" | "o" => Ok(InvolutionType::Orthogonal),
        "symplectic" | "s" | "sp" => Ok(InvolutionType::Symplectic),
        "unitary" | "u" => Ok(InvolutionType::Unitary),
        other => Err(bad(format!("unknown type {other:?}; use orthogonal, symplectic or unitary"))),
    }
}

pub fn parse_extension(f: &Field, datum: &str) -> Result<EtaleQuadratic> {
    let m: Elem = f.parse(datum)?;
    quad_ext_info(f, m)
}

impl TypeSpec {
    pub fn to_type(&self, f: &Field) -> Result<CompositionType> {
        match parse_involution_type(&self.kind)? {
            InvolutionType::Unitary => {
                let datum = self.s.as_ref().ok_or_else(|| bad("unitary type needs --s".into()))?;
                let s = parse_extension(f, datum)?;
                let c = self.class.over_extension(f, &s)?;
                CompositionType::unitary(s, c)
            }
            t => {
                if self.s.is_some() {
                    return Err(bad("--s only applies to unitary types".into()));
                }
                CompositionType::first_kind(self.class.over_field(f)?, t)
            }
        }
    }
}

/// Everything a command needs to rebuild the problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub field: String,
    pub object: ObjectSpec,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub ty: Option<TypeSpec>,
}

impl ProblemSpec {
    pub fn field(&self) -> Result<Field> {
        parse_field(&self.field)
    }

    pub fn pair(&self) -> Result<PairSpec> {
        self.object.to_pair(&self.field()?)
    }

    pub fn composition_type(&self) -> Result<CompositionType> {
        let ty = self.ty.as_ref().ok_or_else(|| bad("this command needs --type".into()))?;
        ty.to_type(&self.field()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_parse() {
        assert_eq!(parse_field("Q").unwrap(), Field::rationals());
        assert_eq!(parse_field("GF(3)").unwrap().order(), Some(3));
        assert_eq!(parse_field("GF(2^2)").unwrap().order(), Some(4));
        assert!(parse_field("R").is_err());
        assert!(parse_field("GF(6)").is_err());
    }

    #[test]
    fn objects_parse() {
        let o = ObjectSpec::parse(r#"{"diag":["1","1","-1","1","-1"]}"#).unwrap();
        assert!(matches!(o.to_pair(&Field::rationals()).unwrap(), PairSpec::Form(q) if q.dim() == 5));
        let o = ObjectSpec::parse(r#"{"quaternion_pair":[["-1","-1"],["2","5"]]}"#).unwrap();
        assert!(matches!(o.to_pair(&Field::rationals()).unwrap(), PairSpec::QuaternionTensor { .. }));
        assert!(ObjectSpec::parse(r#"{"cube":[]}"#).is_err());
    }

    #[test]
    fn classes_parse() {
        let c = ClassSpec::parse(r#"[["-1","-1"]]"#).unwrap();
        assert!(!c.over_field(&Field::rationals()).unwrap().is_trivial().unwrap());
        let c = ClassSpec::parse(r#"{"plus":[["-1","-1"]],"minus":[]}"#).unwrap();
        let s = parse_extension(&Field::rationals(), "1").unwrap();
        assert!(c.over_extension(&Field::rationals(), &s).is_ok());
    }
}

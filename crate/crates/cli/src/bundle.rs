//! Serialized composition witnesses and their re-verification.

use cliffcomp_core::compose::{recheck, source_clifford, CompositionWitness, FactorRecipe, WitnessCheck};
use cliffcomp_core::mcd::{invariant_profile, mcd, McdStatus};
use cliffcomp_core::scalars::quad_ext_info;
use cliffcomp_core::{Field, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::problem::{bad, ProblemSpec};
use crate::report;

pub const FORMAT: &str = "cliffcomp-witness/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeJson {
    Source,
    Corner(Vec<String>),
    Full(String),
    /// Datum of the quadratic étale algebra.
    Etale(String),
    Quaternion([String; 2]),
}

impl RecipeJson {
    pub fn from_recipe(r: &FactorRecipe) -> Self {
        match r {
            FactorRecipe::Source => RecipeJson::Source,
            FactorRecipe::Corner(e) => RecipeJson::Corner(report::elems(e)),
            FactorRecipe::Full(x) => RecipeJson::Full(x.to_literal()),
            FactorRecipe::Etale(e) => RecipeJson::Etale(e.datum.to_literal()),
            FactorRecipe::Quaternion(a, b) => RecipeJson::Quaternion([a.to_literal(), b.to_literal()]),
        }
    }

    pub fn to_recipe(&self, f: &Field) -> Result<FactorRecipe> {
        Ok(match self {
            RecipeJson::Source => FactorRecipe::Source,
            RecipeJson::Corner(e) => FactorRecipe::Corner(e.iter().map(|x| f.parse(x)).collect::<Result<Vec<_>>>()?),
            RecipeJson::Full(x) => FactorRecipe::Full(f.parse(x)?),
            RecipeJson::Etale(m) => FactorRecipe::Etale(quad_ext_info(f, f.parse(m)?)?),
            RecipeJson::Quaternion([a, b]) => FactorRecipe::Quaternion(f.parse(a)?, f.parse(b)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorJson {
    pub recipe: RecipeJson,
    pub description: String,
    pub dim: usize,
    #[serde(rename = "type")]
    pub ty: String,
    /// Involution on the factor, columns are images of basis vectors.
    pub involution: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessBundle {
    pub format: String,
    pub problem: ProblemSpec,
    pub seed: u64,
    pub degree: u64,
    pub target_dim: usize,
    pub involution_type: String,
    pub injective: bool,
    pub factors: Vec<FactorJson>,
    /// Matrix of C(P) -> B, one column per basis element of C(P).
    pub hom: Vec<Vec<String>>,
    pub mcd: Value,
    pub admissibility: Value,
    pub certificate: Value,
    pub class: Value,
    pub trace: Vec<String>,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermitian: Option<Value>,
}

impl WitnessBundle {
    pub fn new(problem: ProblemSpec, w: &CompositionWitness) -> Self {
        let factors = w
            .factors
            .iter()
            .map(|f| FactorJson {
                recipe: RecipeJson::from_recipe(&f.recipe),
                description: f.recipe.describe(),
                dim: f.algebra.dim(),
                ty: f.ty.name().into(),
                involution: report::matrix(&f.involution),
            })
            .collect();
        WitnessBundle {
            format: FORMAT.into(),
            problem,
            seed: w.seed,
            degree: w.degree,
            target_dim: w.target.dim(),
            involution_type: w.tau_type.name().into(),
            injective: w.injective,
            factors,
            hom: report::matrix(&w.hom),
            mcd: report::mcd(&w.mcd),
            admissibility: report::admissibility(&w.admissibility),
            certificate: report::hom_verdict(&w.certificate),
            class: report::class(&w.class),
            trace: w.trace.clone(),
            verified: w.certificate.ok() && w.admissibility.admissible,
            hermitian: None,
        }
    }
}

/// Outcome of re-checking a bundle.
#[derive(Clone, Debug)]
pub struct Reverification {
    pub check: WitnessCheck,
    pub degree_matches: bool,
    pub mcd_consistent: bool,
}

impl Reverification {
    pub fn ok(&self) -> bool {
        self.check.ok() && self.degree_matches && self.mcd_consistent
    }
}

/// Rebuilds every factor from its recipe and re-runs the homomorphism,
/// involution, class, type and degree checks.
pub fn reverify(b: &WitnessBundle) -> Result<Reverification> {
    if b.format != FORMAT {
        return Err(bad(format!("unknown witness format {:?}", b.format)));
    }
    let f = b.problem.field()?;
    let spec = b.problem.pair()?;
    let ty = b.problem.composition_type()?;
    let src = source_clifford(&spec)?;
    let recipes = b.factors.iter().map(|x| x.recipe.to_recipe(&f)).collect::<Result<Vec<_>>>()?;
    let invs = b.factors.iter().map(|x| report::parse_matrix(&f, &x.involution)).collect::<Result<Vec<_>>>()?;
    let hom = report::parse_matrix(&f, &b.hom)?;
    let check = recheck(&spec, &src, &recipes, &invs, &hom, &ty)?;
    let m = mcd(&invariant_profile(&spec)?, &ty)?;
    let mcd_consistent = match (m.status, m.value()) {
        (McdStatus::Exact, Some(v)) => check.degree == v,
        (_, Some(v)) if m.divisibility => check.degree % v == 0,
        _ => true,
    };
    Ok(Reverification { degree_matches: check.degree == b.degree, mcd_consistent, check })
}

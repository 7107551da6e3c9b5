//! Subcommands and their exit codes.

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use cliffcomp_core::clifford::{clifford_even, clifford_of_pair_with_cap, clifford_structure};
use cliffcomp_core::compose::hermitian::REPRESENT_BOUND;
use cliffcomp_core::compose::{construct_composition, example1_reproduce, hermitian_from_hom, verify_hermitian_identity, HermitianVerdict};
use cliffcomp_core::mcd::{invariant_profile, lower_bound, mcd, McdStatus, PairSpec};
use cliffcomp_core::qpair::pair_on_quaternion_tensor;
use cliffcomp_core::quadform::{represents_one, Representation};
use cliffcomp_core::Error;
use serde_json::{json, Value};

use crate::bundle::{reverify, WitnessBundle};
use crate::problem::{parse_field, ClassSpec, ObjectSpec, ProblemSpec, TypeSpec};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_COVERED: i32 = 3;
pub const EXIT_CERTIFICATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "cliffcomp", version, about = "Clifford algebras of quadratic pairs and minimal compositions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    /// Q, GF(p) or GF(p^k).
    #[arg(long, default_value = "Q")]
    pub field: String,
    /// JSON object: {"diag": [...]}, {"upper": [[...]]} or {"quaternion_pair": [[a1,b1],[a2,b2]]}.
    #[arg(long)]
    pub object: String,
}

#[derive(Args, Debug, Clone)]
pub struct TypeArgs {
    /// orthogonal, symplectic or unitary.
    #[arg(long = "type")]
    pub kind: String,
    /// JSON class: [["a","b"], ...] or {"plus": [...], "minus": [...]}. Trivial when omitted.
    #[arg(long)]
    pub class: Option<String>,
    /// Datum m of S = F[X]/(X^2 - m) (X^2 + X + m in characteristic 2).
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariant profile of the pair and the structure of its Clifford algebra.
    Invariants {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Truncation degree cap for the Clifford algebra of a quaternion pair.
        #[arg(long, default_value_t = 4)]
        truncation_cap: usize,
    },
    /// Minimal composition degree.
    Mcd {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        ty: TypeArgs,
    },
    /// Lower bound on composition degrees and whether it is attained.
    Bound {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        ty: TypeArgs,
    },
    /// Construct and certify a composition of minimal degree.
    Compose {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also build and verify the hermitian composition.
        #[arg(long)]
        hermitian: bool,
        /// Search bound for a vector z with q(z) = 1.
        #[arg(long, default_value_t = REPRESENT_BOUND)]
        bound: u32,
    },
    /// Re-check a witness bundle written by `compose`.
    Verify {
        /// Path of the bundle, or - for standard input.
        #[arg(long, default_value = "-")]
        witness: String,
    },
    /// The explicit composition over M2((a, b)).
    Example1 {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Randomized consistency checks of the engine.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per check.
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

/// What a run produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Option<Value>,
    pub stderr: Option<Value>,
}

impl Outcome {
    fn ok(v: Value) -> Self {
        Outcome { code: EXIT_OK, stdout: Some(v), stderr: None }
    }

    fn with_code(code: i32, v: Value, msg: &str) -> Self {
        let stderr = (code != EXIT_OK).then(|| json!({"error": error_kind(code), "message": msg, "exit_code": code}));
        Outcome { code, stdout: Some(v), stderr }
    }
}

fn error_kind(code: i32) -> &'static str {
    match code {
        EXIT_INVALID => "invalid-input",
        EXIT_NOT_COVERED => "not-covered-by-paper",
        _ => "certification-failure",
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotCovered(_) => EXIT_NOT_COVERED,
        Error::Certification(_) | Error::Saturation(_) | Error::SearchExhausted(_) | Error::Axiom(_) => EXIT_CERTIFICATION,
        _ => EXIT_INVALID,
    }
}

fn failure(e: &Error) -> Outcome {
    let code = exit_code(e);
    Outcome { code, stdout: None, stderr: Some(json!({"error": error_kind(code), "message": e.to_string(), "exit_code": code})) }
}

fn problem(p: &ProblemArgs, ty: Option<&TypeArgs>) -> cliffcomp_core::Result<ProblemSpec> {
    let ty = match ty {
        Some(t) => Some(TypeSpec {
            kind: t.kind.clone(),
            class: match &t.class {
                Some(c) => ClassSpec::parse(c)?,
                None => ClassSpec::default(),
            },
            s: t.s.clone(),
        }),
        None => None,
    };
    let spec = ProblemSpec { field: p.field.clone(), object: ObjectSpec::parse(&p.object)?, ty };
    // fail early on bad input
    spec.pair()?;
    if spec.ty.is_some() {
        spec.composition_type()?;
    }
    Ok(spec)
}

/// Parses argv (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: EXIT_OK, stdout: Some(Value::String(e.to_string())), stderr: None };
            }
            return Outcome {
                code: EXIT_INVALID,
                stdout: None,
                stderr: Some(json!({"error": "invalid-input", "message": e.to_string(), "exit_code": EXIT_INVALID})),
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => failure(&e),
    }
}

fn dispatch(cmd: &Command) -> cliffcomp_core::Result<Outcome> {
    match cmd {
        Command::Invariants { problem: p, truncation_cap } => invariants(&problem(p, None)?, *truncation_cap),
        Command::Mcd { problem: p, ty } => mcd_cmd(&problem(p, Some(ty))?),
        Command::Bound { problem: p, ty } => bound_cmd(&problem(p, Some(ty))?),
        Command::Compose { problem: p, ty, seed, hermitian, bound } => {
            compose_cmd(problem(p, Some(ty))?, *seed, *hermitian, *bound)
        }
        Command::Verify { witness } => verify_cmd(witness),
        Command::Example1 { a, b, field } => example1_cmd(field, a, b),
        Command::Selftest { seed, cases } => Ok(crate::selftest::run(*seed, *cases)),
    }
}

fn invariants(spec: &ProblemSpec, cap: usize) -> cliffcomp_core::Result<Outcome> {
    let pair = spec.pair()?;
    let prof = invariant_profile(&pair)?;
    let (c, n) = match &pair {
        PairSpec::Form(q) => (clifford_even(q)?, q.dim()),
        PairSpec::QuaternionTensor { field, q1, q2 } => {
            let a1 = cliffcomp_core::algebra::quaternion(field, &q1.0, &q1.1)?;
            let a2 = cliffcomp_core::algebra::quaternion(field, &q2.0, &q2.1)?;
            (clifford_of_pair_with_cap(&pair_on_quaternion_tensor(&a1, &a2)?, cap)?, 4)
        }
    };
    let rep = clifford_structure(&c, n)?;
    let structure = json!({
        "dim": c.dim(),
        "center_split": rep.split,
        "center": rep.center.as_ref().map(|e| e.describe()),
        "degree": rep.degree,
        "involution_type": rep.involution_type.name(),
        "factor_classes": rep.factor_classes.as_ref().map(|(p, m)| json!([report::class(p), report::class(m)])),
    });
    Ok(Outcome::ok(json!({"problem": spec, "profile": report::profile(&prof), "structure": structure})))
}

fn mcd_cmd(spec: &ProblemSpec) -> cliffcomp_core::Result<Outcome> {
    let prof = invariant_profile(&spec.pair()?)?;
    let ty = spec.composition_type()?;
    let r = mcd(&prof, &ty)?;
    let out = json!({
        "problem": spec,
        "profile": report::profile(&prof),
        "type": report::composition_type(&ty),
        "mcd": report::mcd(&r),
        "status": r.status.label(),
        "log2": r.log2,
    });
    if r.status == McdStatus::NotCoveredByPaper {
        return Ok(Outcome::with_code(EXIT_NOT_COVERED, out, &r.case));
    }
    Ok(Outcome::ok(out))
}

fn bound_cmd(spec: &ProblemSpec) -> cliffcomp_core::Result<Outcome> {
    let prof = invariant_profile(&spec.pair()?)?;
    let ty = spec.composition_type()?;
    let lb = lower_bound(&prof, &ty)?;
    let r = mcd(&prof, &ty)?;
    let equality = r.log2.map(|e| e == lb.log2);
    Ok(Outcome::ok(json!({
        "problem": spec,
        "type": report::composition_type(&ty),
        "lower_bound": report::lower_bound(&lb),
        "mcd": report::mcd(&r),
        "equality": equality,
    })))
}

fn compose_cmd(spec: ProblemSpec, seed: u64, hermitian: bool, bound: u32) -> cliffcomp_core::Result<Outcome> {
    let pair = spec.pair()?;
    let ty = spec.composition_type()?;
    let w = construct_composition(&pair, &ty, seed)?;
    let mut bundle = WitnessBundle::new(spec, &w);
    let mut ok = bundle.verified;
    if hermitian {
        let h = match &pair {
            PairSpec::Form(q) => match represents_one(q, None, bound)? {
                Representation::Found(z) => {
                    let hc = hermitian_from_hom(&w, Some(&z))?;
                    let v = verify_hermitian_identity(&hc, q);
                    ok &= v.ok();
                    hermitian_json(&v, Some(report::elems(&z)))
                }
                Representation::NotFound => json!({"verified": false, "reason": "no z with q(z) = 1 within the search bound"}),
            },
            PairSpec::QuaternionTensor { .. } => json!({"verified": false, "reason": "the pair is not split"}),
        };
        bundle.hermitian = Some(h);
    }
    let v = serde_json::to_value(&bundle).expect("bundle serializes");
    if !ok {
        return Ok(Outcome::with_code(EXIT_CERTIFICATION, v, "witness failed verification"));
    }
    Ok(Outcome::ok(v))
}

pub fn hermitian_json(v: &HermitianVerdict, z: Option<Vec<String>>) -> Value {
    match v {
        HermitianVerdict::Certificate { checks, epsilon_checked } => {
            json!({"verified": true, "checks": checks, "epsilon_checked": epsilon_checked, "z": z})
        }
        HermitianVerdict::Counterexample { x, y1, y2, detail } => json!({
            "verified": false,
            "counterexample": {"x": report::elems(x), "y1": y1, "y2": y2, "detail": detail},
            "z": z,
        }),
    }
}

fn verify_cmd(path: &str) -> cliffcomp_core::Result<Outcome> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Invalid(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("reading {path}: {e}")))?
    };
    let bundle: WitnessBundle = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("witness: {e}")))?;
    let r = reverify(&bundle)?;
    let out = json!({
        "verified": r.ok(),
        "degree": r.check.degree,
        "degree_matches": r.degree_matches,
        "mcd_consistent": r.mcd_consistent,
        "involution_type": r.check.tau_type.name(),
        "certificate": report::hom_verdict(&r.check.certificate),
        "admissibility": report::admissibility(&r.check.admissibility),
        "class": report::class(&r.check.class),
        "injective": r.check.injective,
    });
    if !r.ok() {
        return Ok(Outcome::with_code(EXIT_CERTIFICATION, out, "witness failed re-verification"));
    }
    Ok(Outcome::ok(out))
}

fn example1_cmd(field: &str, a: &str, b: &str) -> cliffcomp_core::Result<Outcome> {
    let f = parse_field(field)?;
    let (a, b) = (f.parse(a)?, f.parse(b)?);
    let e = example1_reproduce(&f, &a, &b)?;
    let quat_matrix = |v: &Vec<cliffcomp_core::Elem>| -> Vec<Vec<String>> { v.chunks(4).map(report::elems).collect() };
    let out = json!({
        "field": f.to_string(),
        "a": a.to_literal(),
        "b": b.to_literal(),
        "form": report::elems(&e.form.diagonal().unwrap_or_default()),
        "generator_images": e.generator_images.iter().map(quat_matrix).collect::<Vec<_>>(),
        "relations": {"verified": e.relations_ok(), "failures": e.relation_failures},
        "isomorphism": {"verified": e.iso_ok(), "rank": e.iso_rank, "certificate": report::hom_verdict(&e.iso)},
        "phi": e.h1.phi.iter().map(|m| m.iter().map(|q| report::elems(q)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "h1": {"epsilon": e.h1.epsilon, "involution": "tilde", "result": hermitian_json(&e.verdict1, None), "verified": e.verdict1.ok()},
        "h2": {"epsilon": e.h2.epsilon, "involution": "bar", "result": hermitian_json(&e.verdict2, None), "verified": e.verdict2.ok()},
        "verified": e.verified(),
    });
    if !e.verified() {
        return Ok(Outcome::with_code(EXIT_CERTIFICATION, out, "example certificates failed"));
    }
    Ok(Outcome::ok(out))
}

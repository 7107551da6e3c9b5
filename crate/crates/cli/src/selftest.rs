//! Randomized consistency checks runnable from the command line.

use cliffcomp_core::algebra::InvolutionType;
use cliffcomp_core::brauer::{metric, BrauerClass2};
use cliffcomp_core::clifford::{clifford_even, clifford_structure, expected_involution_type};
use cliffcomp_core::compose::{construct_composition, example1_reproduce};
use cliffcomp_core::mcd::{invariant_profile, mcd, CompositionType, McdStatus, PairSpec};
use cliffcomp_core::quadform::{center_invariant, is_nondegenerate, QuadraticSpace};
use cliffcomp_core::scalars::factor::FactorBound;
use cliffcomp_core::scalars::hilbert::{hilbert_symbol, relevant_places};
use cliffcomp_core::{Field, Rational, Result};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde_json::{json, Value};

use crate::commands::{Outcome, EXIT_CERTIFICATION, EXIT_OK};

fn nonzero(rng: &mut ChaCha8Rng, max: u64) -> i64 {
    loop {
        let v = (rng.next_u64() % (2 * max + 1)) as i64 - max as i64;
        if v != 0 {
            return v;
        }
    }
}

fn random_class(rng: &mut ChaCha8Rng) -> Result<BrauerClass2> {
    let n = 1 + (rng.next_u64() % 2) as usize;
    let syms: Vec<(i64, i64)> = (0..n).map(|_| (nonzero(rng, 30), nonzero(rng, 30))).collect();
    BrauerClass2::from_ints(&syms)
}

fn metric_axioms(rng: &mut ChaCha8Rng, cases: usize) -> Result<Option<String>> {
    for _ in 0..cases {
        let (a, b, c) = (random_class(rng)?, random_class(rng)?, random_class(rng)?);
        if metric(&a, &a)? != 0 {
            return Ok(Some(format!("d(A, A) != 0 for {}", a.describe())));
        }
        if metric(&a, &b)? != metric(&b, &a)? {
            return Ok(Some("d is not symmetric".into()));
        }
        if metric(&a, &c)? > metric(&a, &b)? + metric(&b, &c)? {
            return Ok(Some("triangle inequality fails".into()));
        }
        if metric(&a.product(&b)?, &a.product(&c)?)? != metric(&b, &c)? {
            return Ok(Some("d is not translation invariant".into()));
        }
    }
    Ok(None)
}

fn product_formula(rng: &mut ChaCha8Rng, cases: usize) -> Result<Option<String>> {
    for _ in 0..cases {
        let a = Rational::from_integer(nonzero(rng, 200).into());
        let b = Rational::from_integer(nonzero(rng, 200).into());
        let mut prod = 1i8;
        for v in relevant_places(&[a.clone(), b.clone()], FactorBound::default())? {
            prod *= hilbert_symbol(&a, &b, v)?;
        }
        if prod != 1 {
            return Ok(Some(format!("product of Hilbert symbols ({a}, {b}) is -1")));
        }
    }
    Ok(None)
}

fn clifford_table(rng: &mut ChaCha8Rng, cases: usize) -> Result<Option<String>> {
    let fields = [Field::rationals(), Field::prime_field(3)?, Field::prime_field(5)?];
    for i in 0..cases {
        let f = &fields[i % fields.len()];
        let n = 2 + (rng.next_u64() % 4) as usize;
        let entries: Vec<i64> = (0..n).map(|_| nonzero(rng, 7)).collect();
        let Ok(q) = QuadraticSpace::diag_i64(f, &entries) else { continue };
        if !is_nondegenerate(&q) {
            continue;
        }
        let c = clifford_even(&q)?;
        if c.dim() != 1 << (n - 1) {
            return Ok(Some(format!("dim C0 of {entries:?} over {f} is {}", c.dim())));
        }
        let rep = clifford_structure(&c, n)?;
        if n % 2 == 0 && rep.split != center_invariant(&q)?.split {
            return Ok(Some(format!("center split flag disagrees for {entries:?} over {f}")));
        }
        if rep.involution_type != expected_involution_type(n, false) {
            return Ok(Some(format!("involution type disagrees for {entries:?} over {f}")));
        }
    }
    Ok(None)
}

fn witnesses(rng: &mut ChaCha8Rng, cases: usize) -> Result<Option<String>> {
    let f = Field::rationals();
    for _ in 0..cases.min(6) {
        let n = 2 + (rng.next_u64() % 3) as usize;
        let entries: Vec<i64> = (0..n).map(|_| nonzero(rng, 5)).collect();
        let q = QuadraticSpace::diag_i64(&f, &entries)?;
        let spec = PairSpec::Form(q);
        let p = invariant_profile(&spec)?;
        let t = if rng.next_u64() % 2 == 0 { InvolutionType::Orthogonal } else { InvolutionType::Symplectic };
        let c = random_class(rng)?;
        let ty = CompositionType::first_kind(c, t)?;
        let m = mcd(&p, &ty)?;
        let w = construct_composition(&spec, &ty, rng.next_u64())?;
        if !w.certificate.ok() || !w.admissibility.admissible {
            return Ok(Some(format!("witness for {entries:?} failed its certificate")));
        }
        if m.status == McdStatus::Exact && Some(w.degree) != m.value() {
            return Ok(Some(format!("witness degree {} != mcd {:?} for {entries:?}", w.degree, m.value())));
        }
    }
    Ok(None)
}

fn example(_: &mut ChaCha8Rng, _: usize) -> Result<Option<String>> {
    let f = Field::rationals();
    let e = example1_reproduce(&f, &f.from_i64(-1), &f.from_i64(-1))?;
    Ok((!e.verified()).then(|| "Example bundle failed".into()))
}

type Check = fn(&mut ChaCha8Rng, usize) -> Result<Option<String>>;

pub fn run(seed: u64, cases: usize) -> Outcome {
    let checks: [(&str, Check); 5] = [
        ("metric-axioms", metric_axioms),
        ("hilbert-product-formula", product_formula),
        ("clifford-structure-table", clifford_table),
        ("mcd-witness-agreement", witnesses),
        ("example-composition", example),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results: Vec<Value> = Vec::new();
    let mut all = true;
    for (name, check) in checks {
        let (passed, detail) = match check(&mut rng, cases) {
            Ok(None) => (true, None),
            Ok(Some(d)) => (false, Some(d)),
            Err(e) => (false, Some(e.to_string())),
        };
        all &= passed;
        results.push(json!({"name": name, "passed": passed, "detail": detail}));
    }
    let out = json!({"seed": seed, "cases": cases, "checks": results, "passed": all});
    if all {
        Outcome { code: EXIT_OK, stdout: Some(out), stderr: None }
    } else {
        let err = json!({"error": "certification-failure", "message": "selftest failed", "exit_code": EXIT_CERTIFICATION});
        Outcome { code: EXIT_CERTIFICATION, stdout: Some(out), stderr: Some(err) }
    }
}

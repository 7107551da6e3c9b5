use cliffcomp_core::algebra::{involution_type, InvolutionType};
use cliffcomp_core::brauer::{metric, BrauerClass2};
use cliffcomp_core::clifford::{clifford_even, expected_involution_type};
use cliffcomp_core::compose::{construct_composition, hermitian_from_hom, recheck, verify_hermitian_identity, FactorRecipe};
use cliffcomp_core::linalg::Matrix;
use cliffcomp_core::mcd::{invariant_profile, lower_bound, mcd, CompositionType, McdStatus, PairSpec};
use cliffcomp_core::quadform::{represents_one, QuadraticSpace, Representation};
use cliffcomp_core::scalars::factor::FactorBound;
use cliffcomp_core::scalars::hilbert::{hilbert_symbol, relevant_places};
use cliffcomp_core::{Elem, Field, Rational};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

fn nz(max: i64) -> impl Strategy<Value = i64> {
    (-max..=max).prop_filter("nonzero", |v| *v != 0)
}

fn symbols(max_len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((nz(40), nz(40)), 1..=max_len)
}

fn class(s: &[(i64, i64)]) -> BrauerClass2 {
    BrauerClass2::from_ints(s).unwrap()
}

fn form(entries: &[i64]) -> QuadraticSpace {
    QuadraticSpace::diag_i64(&Field::rationals(), entries).unwrap()
}

proptest! {
    #[test]
    fn hilbert_product_formula(a in nz(500), b in nz(500)) {
        let (ra, rb) = (Rational::from_integer(a.into()), Rational::from_integer(b.into()));
        let mut prod = 1i8;
        for v in relevant_places(&[ra.clone(), rb.clone()], FactorBound::default()).unwrap() {
            prod *= hilbert_symbol(&ra, &rb, v).unwrap();
        }
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn hilbert_symbol_is_symmetric_and_bimultiplicative(a in nz(60), b in nz(60), c in nz(60)) {
        let r = |n: i64| Rational::from_integer(n.into());
        for v in relevant_places(&[r(a), r(b), r(c)], FactorBound::default()).unwrap() {
            let h = |x: i64, y: i64| hilbert_symbol(&r(x), &r(y), v).unwrap();
            prop_assert_eq!(h(a, b), h(b, a));
            prop_assert_eq!(h(a * c, b), h(a, b) * h(c, b));
            prop_assert_eq!(h(a, -a), 1);
        }
    }

    #[test]
    fn metric_axioms(x in symbols(3), y in symbols(3), z in symbols(3)) {
        let (x, y, z) = (class(&x), class(&y), class(&z));
        prop_assert_eq!(metric(&x, &x).unwrap(), 0);
        prop_assert_eq!(metric(&x, &y).unwrap(), metric(&y, &x).unwrap());
        prop_assert!(metric(&x, &z).unwrap() <= metric(&x, &y).unwrap() + metric(&y, &z).unwrap());
        let shifted = metric(&x.product(&y).unwrap(), &x.product(&z).unwrap()).unwrap();
        prop_assert_eq!(shifted, metric(&y, &z).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn finite_field_axioms(pk in prop::sample::select(vec![(2u32, 1u32), (2, 3), (3, 2), (5, 1), (7, 2), (2, 4)]), seed in any::<u64>()) {
        let f = Field::finite(pk.0, pk.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = f.order().unwrap();
        prop_assert_eq!(q, (pk.0 as u64).pow(pk.1));
        let (a, b, c) = (f.random(&mut rng, 0), f.random(&mut rng, 0), f.random(&mut rng, 0));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &(-&a), f.zero());
        prop_assert_eq!(a.pow(q), a.clone());
        match a.inv() {
            Some(i) => prop_assert_eq!(&a * &i, f.one()),
            None => prop_assert!(a.is_zero()),
        }
        let p_times: Elem = (0..pk.0).fold(f.zero(), |acc, _| &acc + &a);
        prop_assert!(p_times.is_zero());
    }

    #[test]
    fn even_clifford_dimension_and_type(entries in prop::collection::vec(nz(12), 1..=6)) {
        let q = form(&entries);
        let c = clifford_even(&q).unwrap();
        let n = entries.len();
        prop_assert_eq!(c.dim(), 1 << (n - 1));
        prop_assert_eq!(involution_type(&c.involution).unwrap(), expected_involution_type(n, false));
    }

    #[test]
    fn lower_bound_never_exceeds_mcd(
        entries in prop::collection::vec(nz(12), 2..=6),
        c in symbols(2),
        symplectic in any::<bool>(),
    ) {
        let spec = PairSpec::Form(form(&entries));
        let p = invariant_profile(&spec).unwrap();
        let t = if symplectic { InvolutionType::Symplectic } else { InvolutionType::Orthogonal };
        let ty = CompositionType::first_kind(class(&c), t).unwrap();
        let m = mcd(&p, &ty).unwrap();
        let lb = lower_bound(&p, &ty).unwrap();
        let e = m.log2.unwrap();
        prop_assert!(lb.log2 <= e);
        if m.status == McdStatus::Exact {
            prop_assert_eq!(lb.attained, lb.log2 == e);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn witnesses_recheck_and_match_mcd(
        entries in prop::collection::vec(nz(6), 2..=5),
        c in symbols(1),
        symplectic in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let spec = PairSpec::Form(form(&entries));
        let t = if symplectic { InvolutionType::Symplectic } else { InvolutionType::Orthogonal };
        let ty = CompositionType::first_kind(class(&c), t).unwrap();
        let m = mcd(&invariant_profile(&spec).unwrap(), &ty).unwrap();
        let w = construct_composition(&spec, &ty, seed).unwrap();
        let v = m.value().unwrap();
        if m.status == McdStatus::Exact {
            prop_assert_eq!(w.degree, v);
        } else {
            prop_assert_eq!(w.degree % v, 0);
        }
        if entries.len() % 4 == 2 {
            prop_assert!(w.injective);
        }
        let recipes: Vec<FactorRecipe> = w.factors.iter().map(|f| f.recipe.clone()).collect();
        let invs: Vec<Matrix> = w.factors.iter().map(|f| f.involution.clone()).collect();
        let check = recheck(&spec, &w.source, &recipes, &invs, &w.hom, &ty).unwrap();
        prop_assert!(check.ok());
        prop_assert_eq!(check.tau_type, w.tau_type);
    }

    #[test]
    fn hermitian_identity_for_split_witnesses(
        entries in prop::collection::vec(nz(5), 2..=4),
        symplectic in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let mut entries = entries;
        entries[0] = 1;
        let q = form(&entries);
        let spec = PairSpec::Form(q.clone());
        let t = if symplectic { InvolutionType::Symplectic } else { InvolutionType::Orthogonal };
        let ty = CompositionType::first_kind(class(&[(1, 1)]), t).unwrap();
        let w = construct_composition(&spec, &ty, seed).unwrap();
        let z = match represents_one(&q, None, 4).unwrap() {
            Representation::Found(z) => z,
            Representation::NotFound => unreachable!("q(e1) = 1"),
        };
        prop_assert_eq!(q.eval(&z).unwrap(), Field::rationals().one());
        let hc = hermitian_from_hom(&w, Some(&z)).unwrap();
        prop_assert!(verify_hermitian_identity(&hc, &q).ok());
    }
}

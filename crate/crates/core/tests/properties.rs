//! Property suites over randomly generated configurations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use valcone_core::audit::{
    classification_checks, dual_cone_checks, invariant_checks, lattice_checks, oracle_checks,
    self_intersection_checks, structure_checks, CheckResult,
};
use valcone_core::classify::classify_at_infinity;
use valcone_core::config::Configuration;
use valcone_core::gen::ConfigGenerator;
use valcone_core::invariants::{maximal_contact_values, volume_inverse};
use valcone_core::lattice::pair;
use valcone_core::oracle::{realize_model, Poly, Vars};
use valcone_core::{Curve, Lattice, PicClass};

fn config(seed: u64, nonspecial: bool) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ConfigGenerator::default();
    if nonspecial {
        g.sample_nonspecial(&mut rng)
    } else {
        g.sample(&mut rng)
    }
}

fn any_config() -> impl Strategy<Value = Configuration> {
    (any::<u64>(), any::<bool>()).prop_map(|(s, ns)| config(s, ns))
}

fn all_pass(results: Vec<CheckResult>, cfg: &Configuration) -> Result<(), TestCaseError> {
    for r in results {
        prop_assert!(r.passed, "{}: {} on {}", r.name, r.detail, cfg.to_json());
    }
    Ok(())
}

fn class(n: usize) -> impl Strategy<Value = PicClass> {
    (-20i64..20, -20i64..20, prop::collection::vec(-20i64..20, n)).prop_map(move |(f, m, e)| {
        let mut c = PicClass::zero(n);
        c.f = f.into();
        c.m = m.into();
        c.e = e.into_iter().map(BigInt::from).collect();
        c
    })
}

fn local_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..4, 0u32..4), -5i64..=5), 1..5).prop_map(|terms| {
        Poly::from_terms(
            Vars::UV,
            terms
                .into_iter()
                .map(|(e, c)| (e, BigRational::from_integer(c.into()))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn proximity_equalities_hold_at_every_level(cfg in any_config()) {
        for k in 1..=cfg.n() {
            let m = cfg.multiplicity_vector(k);
            prop_assert!(m[k - 1].is_one());
            for i in 1..k {
                let sum: BigInt = cfg
                    .proximates(i)
                    .into_iter()
                    .filter(|&j| j <= k)
                    .map(|j| m[j - 1].clone())
                    .sum();
                prop_assert_eq!(&m[i - 1], &sum);
            }
            prop_assert!(m[k..].iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn dual_graph_is_a_tree(cfg in any_config()) {
        let g = cfg.dual_graph();
        prop_assert_eq!(g.edges.len(), cfg.n() - 1);
        prop_assert!(g.is_tree());
    }

    #[test]
    fn json_round_trip(cfg in any_config()) {
        let back = Configuration::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn structure_and_invariants(cfg in any_config()) {
        all_pass(structure_checks(&cfg), &cfg)?;
        all_pass(invariant_checks(&cfg), &cfg)?;
    }

    #[test]
    fn mcv_sequence_shape(cfg in any_config()) {
        let mcv = maximal_contact_values(&cfg).unwrap();
        prop_assert_eq!(&mcv.beta_top, &volume_inverse(&cfg));
        prop_assert_eq!(&mcv.beta[0], &cfg.multiplicity_vector(cfg.n())[0]);
        let vals = mcv.values();
        if cfg.n() == 1 {
            prop_assert_eq!(vals, vec![BigInt::one(), BigInt::one()]);
        } else {
            prop_assert!(vals.windows(2).all(|w| w[0] < w[1]), "{:?}", vals);
        }
    }

    #[test]
    fn pairing_is_symmetric_and_bilinear(
        (x, y, z) in (1usize..8).prop_flat_map(|n| (class(n), class(n), class(n))),
        delta in 0i64..5,
        k in -5i64..5,
    ) {
        let d = BigInt::from(delta);
        prop_assert_eq!(pair(&d, &x, &y).unwrap(), pair(&d, &y, &x).unwrap());
        let lhs = pair(&d, &x.scaled(&k.into()).add(&z), &y).unwrap();
        let rhs = BigInt::from(k) * pair(&d, &x, &y).unwrap() + pair(&d, &z, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sq: BigInt = BigInt::from(2) * &x.f * &x.m + &d * &x.m * &x.m
            - x.e.iter().map(|e| e * e).sum::<BigInt>();
        prop_assert_eq!(pair(&d, &x, &x).unwrap(), sq);
    }

    #[test]
    fn distinguished_curve_classes(cfg in any_config()) {
        let lat = Lattice::new(&cfg);
        let inc = cfg.incidences();
        let delta = cfg.delta_int();
        let f1 = lat.strict_transform(Curve::F1).unwrap();
        let m0 = lat.strict_transform(Curve::M0).unwrap();
        let n = cfg.n();
        prop_assert_eq!(lat.square(&f1), -BigInt::from(inc.f1));
        prop_assert_eq!(lat.square(&m0), -&delta - BigInt::from(inc.m0));
        let fm = lat.dot(&f1, &m0);
        prop_assert!(fm.is_zero() || fm.is_one());
        prop_assert!(lat.dot(&PicClass::f_star(n), &m0).is_one());
        prop_assert!(lat.dot(&PicClass::m_star(n), &m0).is_zero());
        if inc.m1 > 0 {
            let m1 = lat.strict_transform(Curve::M1).unwrap();
            let sq = lat.square(&m1);
            prop_assert_eq!(&sq, &(&delta - BigInt::from(inc.m1)));
            prop_assert!(sq.is_negative());
        }
        all_pass(lattice_checks(&cfg), &cfg)?;
    }

    #[test]
    fn exceptional_pairings_match_dual_graph(cfg in any_config()) {
        let lat = Lattice::new(&cfg);
        let n = cfg.n();
        let e: Vec<PicClass> = (1..=n).map(|i| lat.strict_transform(Curve::E(i)).unwrap()).collect();
        let g = cfg.dual_graph();
        for i in 0..n {
            let mut degree = BigInt::zero();
            for j in 0..n {
                if i != j {
                    let p = lat.dot(&e[i], &e[j]);
                    prop_assert!(p.is_zero() || p.is_one());
                    degree += p;
                }
            }
            prop_assert_eq!(degree, BigInt::from(g.degree(i + 1)));
        }
    }

    #[test]
    fn dual_cone_identities(cfg in any_config()) {
        all_pass(dual_cone_checks(&cfg), &cfg)?;
    }

    #[test]
    fn classification_consistency(cfg in any_config()) {
        all_pass(classification_checks(&cfg), &cfg)?;
        prop_assert_eq!(classify_at_infinity(&cfg), classify_at_infinity(&cfg));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The sign statements that hold in full: closed forms, first values,
    /// theta squares, the whole Delta family and the dominance statement.
    #[test]
    fn self_intersection_statements(cfg in any_config()) {
        let held = [
            "closed_forms",
            "lambda_first_sign",
            "lambda_first_value",
            "lambda_satellite_strict",
            "lambda_back_propagation",
            "lambda_effective_coordinates",
            "theta_squares",
            "first_nonspecial_values",
            "delta_first_sign",
            "delta_satellite_strict",
            "delta_back_propagation",
            "delta_zero_predecessor_shape",
            "gamma_first_sign",
            "upsilon_first_sign",
            "delta_dominates",
        ];
        for r in self_intersection_checks(&cfg) {
            if held.contains(&r.name.as_str()) {
                prop_assert!(r.passed, "{}: {} on {}", r.name, r.detail, cfg.to_json());
            }
            if r.name == "lambda_zero_predecessor_shape" && !r.passed {
                prop_assert!(r.detail.starts_with("lambda_1^2 = 0 and lambda_2^2"), "{}", r.detail);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_cross_checks(cfg in any_config(), seed in any::<u64>()) {
        all_pass(oracle_checks(&cfg, seed), &cfg)?;
    }

    #[test]
    fn local_value_is_a_valuation(
        cfg in any_config(),
        seed in 0u64..1000,
        h1 in local_poly(),
        h2 in local_poly(),
    ) {
        prop_assume!(!h1.is_zero() && !h2.is_zero());
        let model = realize_model(&cfg, seed).unwrap();
        let (v1, v2) = (model.local_value(&h1), model.local_value(&h2));
        prop_assert_eq!(model.local_value(&h1.mul(&h2)), &v1 + &v2);
        let s = h1.add(&h2);
        if !s.is_zero() {
            prop_assert!(model.local_value(&s) >= v1.min(v2));
        }
    }

    #[test]
    fn realization_is_deterministic(cfg in any_config(), seed in any::<u64>()) {
        let a = realize_model(&cfg, seed).unwrap();
        let b = realize_model(&cfg, seed).unwrap();
        prop_assert_eq!(a.steps(), b.steps());
    }
}

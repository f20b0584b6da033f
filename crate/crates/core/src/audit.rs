//! Self-consistency checks over one configuration, grouped by subject.
//!
//! Every check is exact. A failing check carries a short description of the
//! first counterexample found.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{classify_at_infinity, nef_pairing_table, sub_valuation_reports, Status};
use crate::cones::{
    closed_form_self_intersection, dual_cone_generators, dual_cone_labels, generator_class,
    primal_labels, Generator,
};
use crate::config::Configuration;
use crate::error::Result;
use crate::invariants::{
    abc_values, configuration_from_mcv, maximal_contact_values, volume_inverse, RequestedIncidences,
};
use crate::lattice::{coordinates_in_basis, m1_expression, Curve, Lattice, PicClass};
use crate::oracle::model::{realize_model, ChartCase};
use crate::oracle::poly::Vars;
use crate::oracle::witness::{random_poly, sample_check};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Accumulates the outcome of one named check.
struct Check {
    name: &'static str,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            failure: None,
        }
    }

    fn require(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn fail_on_err<T>(&mut self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.require(false, || e.to_string());
                None
            }
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name.to_string(),
            passed: self.failure.is_none(),
            detail: self.failure.unwrap_or_default(),
        }
    }
}

/// Random polynomials drawn per sampled oracle check.
const SAMPLES: usize = 12;

fn is_free(cfg: &Configuration, i: usize) -> bool {
    !cfg.is_satellite(i)
}

/// Proximity, multiplicity and dual-graph structure.
pub fn structure_checks(cfg: &Configuration) -> Vec<CheckResult> {
    let n = cfg.n();
    let mut out = Vec::new();

    let mut c = Check::new("proximity_matrix_shape");
    let pm = cfg.proximity_matrix();
    for i in 2..=n {
        let neg: Vec<usize> = (1..i).filter(|&j| pm.get(i, j) == -1).collect();
        c.require((1..=2).contains(&neg.len()), || {
            format!("row {i} has {} entries -1", neg.len())
        });
    }
    for j in 1..=n {
        let rows: Vec<usize> = (1..=n).filter(|&i| pm.get(i, j) == -1).collect();
        if let (Some(first), Some(last)) = (rows.first(), rows.last()) {
            c.require(last - first + 1 == rows.len(), || {
                format!("column {j} is not a consecutive run")
            });
        }
    }
    out.push(c.finish());

    let mut c = Check::new("proximity_equalities");
    for i in 1..=n {
        let m = cfg.multiplicity_vector(i);
        c.require(m[i - 1].is_one(), || format!("m_{i}(phi_{i}) != 1"));
        for j in 1..i {
            let s: BigInt = ((j + 1)..=i)
                .filter(|&s| cfg.proximate(s, j))
                .map(|s| m[s - 1].clone())
                .sum();
            c.require(s == m[j - 1], || {
                format!("phi_{i}: m_{j} = {} but proximate sum {s}", m[j - 1])
            });
        }
    }
    out.push(c.finish());

    let mut c = Check::new("dual_graph_tree");
    let g = cfg.dual_graph();
    c.require(g.is_tree(), || "dual graph is not a tree".into());
    let lat = Lattice::new(cfg);
    let es: Vec<PicClass> = (1..=n)
        .map(|i| lat.strict_transform(Curve::E(i)).expect("E_i"))
        .collect();
    for i in 1..=n {
        let mut deg = BigInt::zero();
        for j in 1..=n {
            if i != j {
                let p = lat.dot(&es[i - 1], &es[j - 1]);
                c.require(p.is_zero() || p.is_one(), || format!("E_{i} . E_{j} = {p}"));
                deg += p;
            }
        }
        c.require(deg == BigInt::from(g.degree(i)), || {
            format!("degree mismatch at E_{i}")
        });
    }
    out.push(c.finish());
    out
}

/// Pairing identities of the distinguished curves.
pub fn lattice_checks(cfg: &Configuration) -> Vec<CheckResult> {
    let n = cfg.n();
    let lat = Lattice::new(cfg);
    let inc = cfg.incidences();
    let d = cfg.delta_int();
    let big = |x: usize| BigInt::from(x);
    let mut c = Check::new("distinguished_curves");
    let f1 = lat.strict_transform(Curve::F1).expect("F1");
    let m0 = lat.strict_transform(Curve::M0).expect("M0");
    let fm = lat.dot(&f1, &m0);
    c.require(fm.is_zero() || fm.is_one(), || format!("F1~ . M0~ = {fm}"));
    c.require(lat.square(&f1) == -big(inc.f1), || "F1~^2 != -f1".into());
    c.require(lat.square(&m0) == -&d - big(inc.m0), || {
        "M0~^2 != -delta - m0".into()
    });
    c.require(lat.dot(&PicClass::f_star(n), &m0).is_one(), || {
        "F* . M0~ != 1".into()
    });
    c.require(lat.dot(&PicClass::m_star(n), &m0).is_zero(), || {
        "M* . M0~ != 0".into()
    });
    if !cfg.is_special() {
        let m1 = lat.strict_transform(Curve::M1).expect("M1");
        c.require(lat.square(&m1) == &d - big(inc.m1), || {
            "M1~^2 != delta - m1".into()
        });
        c.require(lat.square(&m1).is_negative(), || "M1~^2 >= 0".into());
    }
    vec![c.finish()]
}

/// Maximal contact values, volume, and the reconstruction round trip.
pub fn invariant_checks(cfg: &Configuration) -> Vec<CheckResult> {
    let mut c = Check::new("maximal_contact_values");
    let n = cfg.n();
    if let Some(mcv) = c.fail_on_err(maximal_contact_values(cfg)) {
        let vol = volume_inverse(cfg);
        c.require(mcv.beta_top == vol, || "beta_top != sum of squares".into());
        c.require(mcv.beta[0] == cfg.multiplicity_vector(n)[0], || {
            "beta_0 != m_1".into()
        });
        c.require(vol >= BigInt::from(n), || "volume inverse below n".into());
        let all_free = (1..=n).all(|i| is_free(cfg, i));
        c.require((vol == BigInt::from(n)) == all_free, || {
            "vol = n iff all free fails".into()
        });
        if n >= 2 && cfg.is_satellite(n) {
            let e = mcv.gcd_chain();
            let g = mcv.g();
            c.require(mcv.beta_top == &e[g - 1] * &mcv.beta[g], || {
                "p_n satellite but beta_top != e_(g-1) beta_g".to_string()
            });
        }
        let inc = cfg.incidences();
        let req = RequestedIncidences {
            f1: inc.f1 as i64,
            m0: inc.m0 as i64,
            m1: Some(inc.m1 as i64),
        };
        if let Some(back) = c.fail_on_err(configuration_from_mcv(
            cfg.delta() as i64,
            cfg.point_kind(),
            &mcv,
            req,
        )) {
            c.require(back.proximity_matrix() == cfg.proximity_matrix(), || {
                "round trip changes the proximity matrix".into()
            });
        }
    }
    let mut z = Check::new("noether_values");
    let v = abc_values(cfg, n);
    let inc = cfg.incidences();
    z.require(v.a.is_zero() == (inc.m0 == 0), || {
        "a = 0 iff m0 = 0 fails".into()
    });
    z.require(v.c.is_zero() == (inc.m1 == 0), || {
        "c = 0 iff m1 = 0 fails".into()
    });
    z.require(v.b.is_positive(), || "b < 1".into());
    vec![c.finish(), z.finish()]
}

/// Dual-basis identities (special) and orthogonality counts (non-special).
pub fn dual_cone_checks(cfg: &Configuration) -> Vec<CheckResult> {
    let n = cfg.n();
    let lat = Lattice::new(cfg);
    let mut out = Vec::new();

    let mut c = Check::new("dual_cone_nonnegative");
    c.fail_on_err(dual_cone_generators(cfg));
    out.push(c.finish());

    let primal: Vec<(Generator, PicClass)> = primal_labels(cfg)
        .into_iter()
        .map(|g| (g, generator_class(cfg, g).expect("primal class")))
        .collect();
    if cfg.is_special() {
        let mut c = Check::new("dual_basis_identities");
        let fs = PicClass::f_star(n);
        let ms = PicClass::m_star(n);
        for (g, p) in &primal {
            let expect_f = i64::from(*g == Generator::M0);
            let expect_m = i64::from(*g == Generator::F1);
            c.require(lat.dot(&fs, p) == BigInt::from(expect_f), || {
                format!("F* . {g}")
            });
            c.require(lat.dot(&ms, p) == BigInt::from(expect_m), || {
                format!("M* . {g}")
            });
        }
        for i in 1..=n {
            let l = generator_class(cfg, Generator::Lambda(i)).expect("Lambda");
            for (g, p) in &primal {
                let want = i64::from(*g == Generator::E(i));
                let got = lat.dot(&l, p);
                c.require(got == BigInt::from(want), || {
                    format!("Lambda_{i} . {g} = {got}, expected {want}")
                });
            }
        }
        out.push(c.finish());
    } else {
        let mut c = Check::new("dual_generators_orthogonality");
        for g in dual_cone_labels(cfg) {
            let class = generator_class(cfg, g).expect("dual class");
            let vals: Vec<BigInt> = primal.iter().map(|(_, p)| lat.dot(&class, p)).collect();
            let zeros = vals.iter().filter(|v| v.is_zero()).count();
            c.require(zeros > n, || {
                format!("{g} is orthogonal to only {zeros} primal classes")
            });
            c.require(vals.iter().all(|v| !v.is_negative()), || {
                format!("{g} pairs negatively")
            });
        }
        out.push(c.finish());

        let mut c = Check::new("m1_expression_structure");
        c.fail_on_err(m1_expression(cfg));
        out.push(c.finish());
    }
    out
}

/// Self-intersection closed forms and the sign-propagation properties.
pub fn self_intersection_checks(cfg: &Configuration) -> Vec<CheckResult> {
    let n = cfg.n();
    let delta = cfg.delta() as usize;
    let mut out = Vec::new();

    let mut closed = Check::new("closed_forms");
    let squares = |closed: &mut Check,
                   make: &dyn Fn(usize) -> Generator,
                   lo: usize,
                   hi: usize|
     -> Vec<Option<BigInt>> {
        let mut v = vec![None; n + 1];
        for (i, slot) in v.iter_mut().enumerate().take(hi + 1).skip(lo) {
            *slot = closed.fail_on_err(closed_form_self_intersection(cfg, make(i)));
        }
        v
    };

    if cfg.is_special() {
        let sq = squares(&mut closed, &|i| Generator::Lambda(i), 1, n);
        out.push(closed.finish());
        out.extend(propagation_checks(cfg, "lambda", &sq, 1, true));
        let mut c = Check::new("lambda_first_value");
        if let Some(l1) = &sq[1] {
            let d = BigInt::from(delta);
            let expect = if delta == 0 || cfg.incidences().m0 >= 1 {
                &d + 1
            } else {
                &d - 1
            };
            c.require(*l1 == expect, || {
                format!("Lambda_1^2 = {l1}, expected {expect}")
            });
        }
        out.push(c.finish());
        out.push(effectivity_check(cfg));
    } else {
        let theta = squares(&mut closed, &|i| Generator::Theta(i), 1, delta);
        let mut c = Check::new("theta_squares");
        for (i, t) in theta.iter().enumerate().take(delta + 1).skip(1) {
            if let Some(t) = t {
                let want = BigInt::from(delta as i64 - i as i64);
                c.require(*t == want, || format!("Theta_{i}^2 = {t}, expected {want}"));
            }
        }
        let ds = squares(&mut closed, &|i| Generator::Delta(i), delta + 1, n);
        let gs = squares(&mut closed, &|i| Generator::Gamma(i), delta + 1, n);
        let us: Vec<Vec<Option<BigInt>>> = (1..delta)
            .map(|k| squares(&mut closed, &|i| Generator::Upsilon(i, k), delta + 1, n))
            .collect();
        out.push(closed.finish());
        out.push(c.finish());

        let mut c = Check::new("first_nonspecial_values");
        let d1 = BigInt::from(delta + 1);
        let dd = BigInt::from(delta);
        if let Some(x) = &ds[delta + 1] {
            c.require(x.is_one(), || format!("Delta_(delta+1)^2 = {x}"));
        }
        if let Some(x) = &gs[delta + 1] {
            c.require(*x == &dd * &d1, || format!("Gamma_(delta+1)^2 = {x}"));
        }
        for (k0, u) in us.iter().enumerate() {
            let k = k0 + 1;
            if let Some(x) = &u[delta + 1] {
                let want = BigInt::from((delta - k) * (delta + 1 - k));
                c.require(*x == want, || {
                    format!("Upsilon_(delta+1)_{k}^2 = {x}, expected {want}")
                });
            }
        }
        out.push(c.finish());

        out.extend(propagation_checks(cfg, "delta", &ds, delta + 1, false));
        out.extend(propagation_checks(cfg, "gamma", &gs, delta + 1, false));
        let mut merged: Option<Vec<CheckResult>> = None;
        for u in &us {
            let r = propagation_checks(cfg, "upsilon", u, delta + 1, false);
            merged = Some(match merged {
                None => r,
                Some(prev) => prev
                    .into_iter()
                    .zip(r)
                    .map(|(a, b)| if a.passed { b } else { a })
                    .collect(),
            });
        }
        out.extend(merged.unwrap_or_default());

        let mut c = Check::new("delta_dominates");
        for i in delta + 1..=n {
            let Some(dsq) = &ds[i] else { continue };
            if dsq.is_negative() {
                continue;
            }
            c.require(gs[i].as_ref().is_none_or(|g| !g.is_negative()), || {
                format!("Gamma_{i}^2 < 0 <= Delta_{i}^2")
            });
            for (k0, u) in us.iter().enumerate() {
                c.require(u[i].as_ref().is_none_or(|x| !x.is_negative()), || {
                    format!("Upsilon_{i}_{}^2 < 0 <= Delta_{i}^2", k0 + 1)
                });
            }
        }
        out.push(c.finish());
    }
    out
}

/// The three sign-propagation statements for one family of squares indexed
/// `first..=n`. With `first_nonneg` the first square must be nonnegative;
/// otherwise it must be positive.
fn propagation_checks(
    cfg: &Configuration,
    family: &str,
    sq: &[Option<BigInt>],
    first: usize,
    first_nonneg: bool,
) -> Vec<CheckResult> {
    let n = cfg.n();
    let names: [&'static str; 4] = match family {
        "lambda" => [
            "lambda_first_sign",
            "lambda_satellite_strict",
            "lambda_back_propagation",
            "lambda_zero_predecessor_shape",
        ],
        "delta" => [
            "delta_first_sign",
            "delta_satellite_strict",
            "delta_back_propagation",
            "delta_zero_predecessor_shape",
        ],
        "gamma" => [
            "gamma_first_sign",
            "gamma_satellite_strict",
            "gamma_back_propagation",
            "gamma_zero_predecessor_shape",
        ],
        _ => [
            "upsilon_first_sign",
            "upsilon_satellite_strict",
            "upsilon_back_propagation",
            "upsilon_zero_predecessor_shape",
        ],
    };
    let mut first_sign = Check::new(names[0]);
    let mut strict = Check::new(names[1]);
    let mut back = Check::new(names[2]);
    let mut shape = Check::new(names[3]);
    if let Some(Some(x)) = sq.get(first) {
        let ok = if first_nonneg {
            !x.is_negative()
        } else {
            x.is_positive()
        };
        first_sign.require(ok, || format!("{family}_{first}^2 = {x}"));
    }
    for i in first + 1..=n {
        let (Some(cur), Some(prev)) = (&sq[i], &sq[i - 1]) else {
            continue;
        };
        if cur.is_negative() {
            continue;
        }
        if cfg.is_satellite(i) {
            strict.require(cur.is_positive(), || {
                format!("{family}_{i}^2 = 0 with p_{i} satellite")
            });
        }
        back.require(!prev.is_negative(), || {
            format!("{family}_{i}^2 = {cur} but {family}_{}^2 = {prev}", i - 1)
        });
        if prev.is_zero() {
            shape.require(cfg.is_satellite(i) && is_free(cfg, i - 1), || {
                format!(
                    "{family}_{}^2 = 0 and {family}_{i}^2 = {cur}, but p_{i} is {} and p_{} is {}",
                    i - 1,
                    if cfg.is_satellite(i) {
                        "satellite"
                    } else {
                        "free"
                    },
                    i - 1,
                    if is_free(cfg, i - 1) {
                        "free"
                    } else {
                        "satellite"
                    },
                )
            });
        }
    }
    vec![
        first_sign.finish(),
        strict.finish(),
        back.finish(),
        shape.finish(),
    ]
}

/// Coordinates of `Lambda_i` in the strict-transform basis are the pairings
/// with `M*`, `F*` and the `Lambda_j`, and are nonnegative under the criterion.
fn effectivity_check(cfg: &Configuration) -> CheckResult {
    let n = cfg.n();
    let lat = Lattice::new(cfg);
    let basis = lat.strict_basis();
    let mut c = Check::new("lambda_effective_coordinates");
    let lambdas: Vec<PicClass> = (1..=n)
        .map(|i| generator_class(cfg, Generator::Lambda(i)).expect("Lambda"))
        .collect();
    let criterion = crate::cones::criterion_margin(cfg) >= BigInt::zero();
    for (i0, l) in lambdas.iter().enumerate() {
        let Some(coords) = c.fail_on_err(coordinates_in_basis(l, &basis)) else {
            continue;
        };
        let mut want = vec![
            lat.dot(l, &PicClass::m_star(n)),
            lat.dot(l, &PicClass::f_star(n)),
        ];
        want.extend(lambdas.iter().map(|lj| lat.dot(l, lj)));
        let want: Vec<BigRational> = want.into_iter().map(BigRational::from_integer).collect();
        c.require(coords == want, || {
            format!("Lambda_{} coordinates differ from its pairings", i0 + 1)
        });
        if criterion {
            c.require(coords.iter().all(|x| !x.is_negative()), || {
                format!(
                    "Lambda_{} has a negative coordinate although the criterion holds",
                    i0 + 1
                )
            });
        }
    }
    c.finish()
}

/// Classification report consistency.
pub fn classification_checks(cfg: &Configuration) -> Vec<CheckResult> {
    let mut c = Check::new("classification_report");
    let r = classify_at_infinity(cfg);
    let expected = match r.lhs.cmp(&r.vol_inverse) {
        std::cmp::Ordering::Greater => Status::Negative,
        std::cmp::Ordering::Equal => Status::BoundaryNonPositive,
        std::cmp::Ordering::Less => Status::NotNonPositive,
    };
    c.require(r.status == expected, || {
        "status does not match lhs vs volume".into()
    });
    match &r.nef_divisor {
        Some(d) => {
            let sq = Lattice::new(cfg).square(d);
            c.require(sq == &r.lhs - &r.vol_inverse, || {
                "nef divisor square != lhs - vol".into()
            });
        }
        None => c.require(r.status == Status::NotNonPositive, || {
            "missing nef divisor".into()
        }),
    }
    c.require(
        r.ne_generators.is_some() == (r.status != Status::NotNonPositive),
        || "ne generators present iff non-positive fails".into(),
    );
    let mut nef = Check::new("nef_pairings");
    if r.status != Status::NotNonPositive {
        nef.fail_on_err(nef_pairing_table(cfg));
    }
    let mut mono = Check::new("truncation_monotone");
    if r.status != Status::NotNonPositive {
        for (i0, sub) in sub_valuation_reports(cfg).iter().enumerate() {
            if sub.kind == r.kind {
                mono.require(sub.status != Status::NotNonPositive, || {
                    format!("nu_{} fails the criterion although nu_n passes", i0 + 1)
                });
            }
        }
    }
    vec![c.finish(), nef.finish(), mono.finish()]
}

/// Cross-checks between an explicit model and the lattice computations.
pub fn oracle_checks(cfg: &Configuration, seed: u64) -> Vec<CheckResult> {
    let mut c = Check::new("model_realized");
    let Some(model) = c.fail_on_err(realize_model(cfg, seed)) else {
        return vec![c.finish()];
    };
    let mut out = vec![c.finish()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut c = Check::new("axis_values");
    let (got, want) = (model.axis_values(), model.expected_axis_values());
    c.require(got == want, || {
        format!("model {got:?}, invariants {want:?}")
    });
    out.push(c.finish());

    let mut c = Check::new("local_value_valuation_laws");
    for _ in 0..SAMPLES {
        let h1 = random_poly(&mut rng, Vars::UV, (3, 3));
        let h2 = random_poly(&mut rng, Vars::UV, (3, 3));
        let (v1, v2) = (model.local_value(&h1), model.local_value(&h2));
        let prod = model.local_value(&h1.mul(&h2));
        c.require(prod == &v1 + &v2, || {
            format!("nu({h1} * {h2}) = {prod} != {v1} + {v2}")
        });
        let sum = h1.add(&h2);
        if !sum.is_zero() {
            let vs = model.local_value(&sum);
            c.require(vs >= v1.clone().min(v2.clone()), || {
                format!("nu({h1} + {h2}) = {vs} below min({v1}, {v2})")
            });
        }
    }
    out.push(c.finish());

    let mut c = Check::new("lattice_agreement");
    let label = if cfg.is_special() {
        Generator::Lambda(cfg.n())
    } else {
        Generator::Delta(cfg.n())
    };
    if let Some(divisor) = c.fail_on_err(generator_class(cfg, label)) {
        let lat = Lattice::new(cfg);
        let delta = cfg.delta_int();
        for _ in 0..SAMPLES {
            let f = random_poly(&mut rng, Vars::XY, (3, 3));
            let (h, a, b) = model.clear_denominators(&f);
            let (d1, d2) = match model.chart_case() {
                ChartCase::SS => (&a - &delta * &b, b),
                ChartCase::SG => {
                    let d2 = BigInt::from(f.degree_in(false).unwrap_or(0));
                    (&a - &delta * &d2, d2)
                }
                ChartCase::NS => (a, b),
            };
            let mult = model
                .multiplicity_profile(&h)
                .into_iter()
                .map(BigInt::from)
                .collect();
            let class = lat.strict_transform(Curve::Custom { d1, d2, mult });
            if let Some(class) = c.fail_on_err(class) {
                let lhs = -model.infinity_value(&f);
                let rhs = lat.dot(&divisor, &class);
                c.require(lhs == rhs, || {
                    format!("f = {f}: -nu(f) = {lhs}, pairing {rhs}")
                });
            }
        }
    }
    out.push(c.finish());

    let mut c = Check::new("sampled_sign");
    let report = sample_check(&model, SAMPLES, (3, 3), seed);
    c.require(report.counterexamples.is_empty(), || {
        let hit = &report.counterexamples[0];
        format!(
            "nu({}) = {} contradicts {:?}",
            hit.f, hit.value, report.predicted
        )
    });
    out.push(c.finish());
    out
}

/// Every structural, lattice, invariant, cone and classification check.
pub fn exact_checks(cfg: &Configuration) -> Vec<CheckResult> {
    let mut out = structure_checks(cfg);
    out.extend(lattice_checks(cfg));
    out.extend(invariant_checks(cfg));
    out.extend(dual_cone_checks(cfg));
    out.extend(self_intersection_checks(cfg));
    out.extend(classification_checks(cfg));
    out
}

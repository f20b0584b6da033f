//! Independent recomputation of fixture quantities with plain `i64` arithmetic,
//! straight from the definitions, compared against the library.

use num_bigint::BigInt;
use num_rational::BigRational;

use valcone_core::classify::{
    classify_at_infinity, nef_pairing_table, sub_valuation_reports, Status,
};
use valcone_core::cones::{
    closed_form_self_intersection, curve_cone_generators, dual_cone_generators, Generator,
};
use valcone_core::config::{validate_configuration, ConfigFile, Configuration, FileKind};
use valcone_core::invariants::{
    abc_values, configuration_from_mcv, maximal_contact_values, McvSequence, RequestedIncidences,
};
use valcone_core::lattice::{coordinates_in_basis, Curve, Lattice, PicClass};
use valcone_core::oracle::{realize_model, Poly, Vars};
use valcone_core::{fixtures, Code, PointKind};

#[derive(Clone, Debug, PartialEq)]
struct Class {
    f: i64,
    m: i64,
    e: Vec<i64>,
}

fn pair(delta: i64, x: &Class, y: &Class) -> i64 {
    x.f * y.m + x.m * y.f + delta * x.m * y.m
        - x.e.iter().zip(&y.e).map(|(a, b)| a * b).sum::<i64>()
}

fn to_pic(c: &Class) -> PicClass {
    let mut p = PicClass::zero(c.e.len());
    p.f = c.f.into();
    p.m = c.m.into();
    p.e = c.e.iter().map(|&v| BigInt::from(v)).collect();
    p
}

struct Brute {
    delta: i64,
    n: usize,
    /// `prox[i]` lists the points `p_i` is proximate to (0-based).
    prox: Vec<Vec<usize>>,
    f1: usize,
    m0: usize,
    m1: usize,
}

impl Brute {
    fn new(cfg: &Configuration) -> Self {
        let n = cfg.n();
        let prox = (1..=n)
            .map(|i| {
                let mut v = Vec::new();
                if i > 1 {
                    v.push(i - 2);
                }
                if let Some(j) = cfg.satellite_of(i) {
                    v.push(j - 1);
                }
                v
            })
            .collect();
        let inc = cfg.incidences();
        Brute {
            delta: cfg.delta() as i64,
            n,
            prox,
            f1: inc.f1,
            m0: inc.m0,
            m1: inc.m1,
        }
    }

    /// Multiplicities of the curvette of `E_k` (1-based), zero after `p_k`.
    fn mult(&self, k: usize) -> Vec<i64> {
        let mut m = vec![0i64; self.n];
        m[k - 1] = 1;
        for i in (0..k - 1).rev() {
            m[i] = (i + 1..k)
                .filter(|&j| self.prox[j].contains(&i))
                .map(|j| m[j])
                .sum();
        }
        m
    }

    fn prefix(&self, k: usize, last: usize) -> i64 {
        self.mult(k).iter().take(last).sum()
    }

    fn vol(&self, k: usize) -> i64 {
        self.mult(k).iter().map(|x| x * x).sum()
    }

    fn special(&self, cfg: &Configuration) -> bool {
        self.delta == 0
            || cfg.point_kind() == PointKind::Special
            || self.f1 >= 2
            || (1..=self.delta as usize + 1).any(|i| i > self.n || self.prox[i - 1].len() == 2)
    }

    fn lhs(&self, k: usize, special: bool) -> i64 {
        let (a, b, c) = (
            self.prefix(k, self.m0),
            self.prefix(k, self.f1),
            self.prefix(k, self.m1),
        );
        if special {
            2 * a * b + self.delta * b * b
        } else {
            2 * c * b - self.delta * b * b
        }
    }

    fn e_tilde(&self, i: usize) -> Class {
        let mut e = vec![0; self.n];
        e[i] = 1;
        for (ej, prox) in e.iter_mut().zip(&self.prox) {
            if prox.contains(&i) {
                *ej = -1;
            }
        }
        Class { f: 0, m: 0, e }
    }

    fn lambda(&self, k: usize) -> Class {
        let m = self.mult(k);
        Class {
            f: self.prefix(k, self.m0),
            m: self.prefix(k, self.f1),
            e: m.iter().map(|x| -x).collect(),
        }
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<usize, String> {
    if got == want {
        Ok(1)
    } else {
        Err(format!("{what}: library {got:?}, brute force {want:?}"))
    }
}

fn bi(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Compare every quantity the library reports for `cfg` with the brute force.
pub fn check_fixture(cfg: &Configuration) -> Result<usize, String> {
    let b = Brute::new(cfg);
    let n = b.n;
    let mut count = 0;
    let m: Vec<BigInt> = b.mult(n).into_iter().map(bi).collect();
    count += eq("multiplicities", cfg.multiplicity_vector(n), m)?;
    let v = abc_values(cfg, n);
    count += eq("a", v.a, bi(b.prefix(n, b.m0)))?;
    count += eq("b", v.b, bi(b.prefix(n, b.f1)))?;
    count += eq("c", v.c, bi(b.prefix(n, b.m1)))?;
    count += eq("vol", v.vol_inverse, bi(b.vol(n)))?;

    let special = b.special(cfg);
    count += eq("special", cfg.is_special(), special)?;
    let report = classify_at_infinity(cfg);
    count += eq("lhs", report.lhs.clone(), bi(b.lhs(n, special)))?;

    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if pair(b.delta, &b.e_tilde(i), &b.e_tilde(j)) == 1 {
                edges.push((i + 1, j + 1));
            }
        }
    }
    let mut lib_edges = cfg.dual_graph().edges;
    lib_edges.sort();
    count += eq("dual graph", lib_edges, edges)?;

    let lat = Lattice::new(cfg);
    for i in 0..n {
        let lib = lat
            .strict_transform(Curve::E(i + 1))
            .map_err(|e| e.to_string())?;
        count += eq("E~", lib, to_pic(&b.e_tilde(i)))?;
    }
    if special {
        for k in 1..=n {
            let l = b.lambda(k);
            let sq = closed_form_self_intersection(cfg, Generator::Lambda(k))
                .map_err(|e| e.to_string())?;
            count += eq("Lambda^2", sq, bi(pair(b.delta, &l, &l)))?;
        }
    }
    for (k, r) in sub_valuation_reports(cfg).iter().enumerate() {
        let t = cfg.truncate(k + 1);
        let bt = Brute::new(&t);
        let sp = bt.special(&t);
        count += eq("truncated lhs", r.lhs.clone(), bi(bt.lhs(k + 1, sp)))?;
        count += eq("truncated vol", r.vol_inverse.clone(), bi(bt.vol(k + 1)))?;
    }

    let model = realize_model(cfg, 0).map_err(|e| e.to_string())?;
    let (nu_u, nu_v) = model.axis_values();
    count += eq("nu(u)", nu_u, bi(b.prefix(n, b.f1)))?;
    let v_last = if cfg.delta() == 0 || cfg.point_kind() == PointKind::Special {
        b.m0
    } else if special {
        1
    } else {
        b.m1
    };
    count += eq("nu(v)", nu_v, bi(b.prefix(n, v_last)))?;
    Ok(count)
}

fn pic(f: i64, m: i64, e: &[i64]) -> PicClass {
    to_pic(&Class {
        f,
        m,
        e: e.to_vec(),
    })
}

fn poly(s: &str, vars: Vars) -> Poly {
    Poly::parse(s, vars).expect("literal parses")
}

/// The individually listed fixture values, each frozen after the brute force
/// above agreed with it.
pub fn named_examples() -> Result<usize, String> {
    let mut count = 0;
    let err = |e: valcone_core::Error| e.to_string();

    // T1
    let t1 = fixtures::t1();
    count += eq("T1 n", t1.n(), 1)?;
    count += eq(
        "T1 proximity",
        t1.proximity_matrix().rows().to_vec(),
        vec![vec![1i8]],
    )?;
    let v = abc_values(&t1, 1);
    count += eq(
        "T1 abc",
        (v.a, v.b, v.c, v.vol_inverse),
        (bi(1), bi(1), bi(0), bi(1)),
    )?;
    let lat = Lattice::new(&t1);
    let l1 = pic(1, 1, &[-1]);
    count += eq("T1 Lambda_1^2", lat.square(&l1), bi(2))?;
    let m0 = lat.strict_transform(Curve::M0).map_err(err)?;
    count += eq("T1 M0~", m0.clone(), pic(-1, 1, &[-1]))?;
    let f1 = lat.strict_transform(Curve::F1).map_err(err)?;
    count += eq("T1 M0~.F1~", lat.dot(&m0, &f1), bi(0))?;
    count += eq(
        "T1 dual cone",
        dual_cone_generators(&t1).map_err(err)?.len(),
        3,
    )?;
    let cone = curve_cone_generators(&t1).map_err(err)?;
    count += eq(
        "T1 cone labels",
        cone.labels(),
        vec![Generator::F1, Generator::M0, Generator::E(1)],
    )?;
    let nef: Vec<BigInt> = nef_pairing_table(&t1)
        .map_err(err)?
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    count += eq("T1 nef pairings", nef, vec![bi(0), bi(0), bi(1)])?;
    count += eq("T1 dual graph", t1.dual_graph().edges, vec![])?;
    let model = realize_model(&t1, 1).map_err(err)?;
    count += eq(
        "T1 nu(y)",
        model.infinity_value(&poly("y", Vars::XY)),
        bi(-2),
    )?;
    count += eq(
        "T1 nu(7/3)",
        model.infinity_value(&poly("7/3", Vars::XY)),
        bi(0),
    )?;

    // CUSP
    let cusp = fixtures::cusp();
    count += eq(
        "CUSP proximity",
        cusp.proximity_matrix().rows().to_vec(),
        vec![vec![1i8, 0, 0], vec![-1, 1, 0], vec![-1, -1, 1]],
    )?;
    count += eq(
        "CUSP m",
        cusp.multiplicity_vector(3),
        vec![bi(2), bi(1), bi(1)],
    )?;
    let mut edges = cusp.dual_graph().edges;
    edges.sort();
    count += eq("CUSP dual graph", edges, vec![(1, 3), (2, 3)])?;
    let v = abc_values(&cusp, 3);
    count += eq(
        "CUSP abc",
        (v.a, v.b, v.c, v.vol_inverse),
        (bi(2), bi(2), bi(0), bi(6)),
    )?;
    let mcv = maximal_contact_values(&cusp).map_err(err)?;
    count += eq("CUSP mcv", mcv.values(), vec![bi(2), bi(3), bi(6)])?;
    let back = configuration_from_mcv(
        1,
        PointKind::Special,
        &McvSequence::parse("2,3,6").map_err(err)?,
        RequestedIncidences {
            f1: 1,
            m0: 1,
            m1: None,
        },
    )
    .map_err(err)?;
    count += eq("CUSP from mcv", back, cusp.clone())?;
    let lat = Lattice::new(&cusp);
    count += eq(
        "CUSP E1~",
        lat.strict_transform(Curve::E(1)).map_err(err)?,
        pic(0, 0, &[1, -1, -1]),
    )?;
    let l3 = pic(2, 2, &[-2, -1, -1]);
    count += eq("CUSP Lambda_3^2", lat.square(&l3), bi(6))?;
    count += eq(
        "CUSP dual cone",
        dual_cone_generators(&cusp).map_err(err)?.labels(),
        vec![
            Generator::FStar,
            Generator::MStar,
            Generator::Lambda(1),
            Generator::Lambda(2),
            Generator::Lambda(3),
        ],
    )?;
    let nef: Vec<BigInt> = nef_pairing_table(&cusp)
        .map_err(err)?
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    count += eq(
        "CUSP nef pairings",
        nef,
        vec![bi(0), bi(0), bi(0), bi(0), bi(1)],
    )?;
    let subs: Vec<Status> = sub_valuation_reports(&cusp)
        .into_iter()
        .map(|r| r.status)
        .collect();
    count += eq("CUSP truncations", subs, vec![Status::Negative; 3])?;
    let smooth_violation = validate_configuration(&ConfigFile::new(
        1,
        Some(FileKind::Special),
        3,
        &[(3, 1)],
        1,
        3,
        None,
    ));
    count += eq(
        "CUSP with m0=3",
        smooth_violation.map_err(|e| e.has(Code::Smooth)).err(),
        Some(true),
    )?;
    // Hand resolution of (v - t u)^2 - u^3: multiplicity 2 at p1; after
    // v = u (y + t) the strict transform is y^2 - x (multiplicity 1); p3 is
    // E2 meet E1~, reached by x = x' y', giving x' - y' up to units (1).
    let model = realize_model(&cusp, 4).map_err(err)?;
    let t = model.parameter(2).ok_or("p2 has a parameter")?.clone();
    let h = poly("v", Vars::UV)
        .sub(&poly("u", Vars::UV).scaled(&t))
        .pow(2)
        .sub(&poly("u^3", Vars::UV));
    count += eq(
        "CUSP cusp profile",
        model.multiplicity_profile(&h),
        vec![2, 1, 1],
    )?;
    count += eq("CUSP cusp value", model.local_value(&h), bi(6))?;
    count += eq(
        "CUSP line value",
        model.local_value(&poly("3*u - 5*v", Vars::UV)),
        bi(2),
    )?;
    let tangent = poly("v", Vars::UV).sub(&poly("u", Vars::UV).scaled(&t));
    count += eq("CUSP tangent value", model.local_value(&tangent), bi(3))?;

    // FREE2
    let free2 = fixtures::free2();
    let r = classify_at_infinity(&free2);
    count += eq(
        "FREE2 report",
        (r.lhs, r.vol_inverse, r.status),
        (bi(3), bi(2), Status::Negative),
    )?;
    let lat = Lattice::new(&free2);
    let m1 = lat.strict_transform(Curve::M1).map_err(err)?;
    let coords = coordinates_in_basis(&m1, &lat.strict_basis()).map_err(err)?;
    let want: Vec<BigRational> = [1, 1, 0, -1]
        .iter()
        .map(|&x| BigRational::from_integer(bi(x)))
        .collect();
    count += eq("FREE2 M1~ coordinates", coords, want)?;
    // F1~ + M0~ - E2~ rebuilt by hand: (F* - E1*) + (M* - F*) - E2* = M* - E1* - E2*.
    count += eq("FREE2 M1~ class", m1, pic(0, 1, &[-1, -1]))?;

    // FIB5
    let fib5 = fixtures::fib5();
    let r = classify_at_infinity(&fib5);
    count += eq(
        "FIB5 report",
        (r.lhs, r.vol_inverse, r.status),
        (bi(4), bi(5), Status::NotNonPositive),
    )?;
    let lat = Lattice::new(&fib5);
    count += eq(
        "FIB5 Lambda_1^2",
        lat.square(&pic(0, 1, &[-1, 0, 0, 0, 0])),
        bi(0),
    )?;
    count += eq(
        "FIB5 cone",
        curve_cone_generators(&fib5)
            .map(|_| ())
            .map_err(|e| e.has(Code::NotNpi))
            .err(),
        Some(true),
    )?;
    let subs: Vec<Status> = sub_valuation_reports(&fib5)
        .into_iter()
        .map(|r| r.status)
        .collect();
    count += eq("FIB5 nu_5", subs[4], Status::NotNonPositive)?;
    count += eq(
        "FIB5 nu_2 non-positive",
        subs[1] != Status::NotNonPositive,
        true,
    )?;
    Ok(count)
}

//! Explicit rational realization of a configuration and exact valuations.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::poly::{Coeff, Poly, Vars, Q};
use crate::config::{Configuration, PointKind};
use crate::error::{Code, Error, Result};
use crate::invariants::abc_values;

/// Free-point parameters are drawn from `[-PARAM_RANGE, PARAM_RANGE] \ {0}`.
const PARAM_RANGE: i64 = 9;
const MAX_RETRIES: usize = 32;

/// Which affine chart at infinity the coordinates `(x, y)` live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ChartCase {
    /// `p` special or `delta = 0`: `x = 1/u`, `y = 1/(u^delta v)`.
    SS,
    /// Special valuation at a general point: `x = 1/u`, `y = v/u^delta`.
    SG,
    /// Non-special valuation: `x = 1/u`, `y = u^delta/v`.
    NS,
}

impl ChartCase {
    pub fn of(cfg: &Configuration) -> Self {
        if cfg.delta() == 0 || cfg.point_kind() == PointKind::Special {
            ChartCase::SS
        } else if cfg.is_special() {
            ChartCase::SG
        } else {
            ChartCase::NS
        }
    }

    /// Exponents `(e_u, e_v)` with `y = u^e_u v^e_v`.
    fn y_exponents(self, delta: i64) -> (i64, i64) {
        match self {
            ChartCase::SS => (-delta, -1),
            ChartCase::SG => (-delta, 1),
            ChartCase::NS => (delta, -1),
        }
    }
}

/// How `p_{i+1}` is reached from `p_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// `(x, y) -> (x, x y)`, then translate `y -> y + t`.
    Chart1(Q),
    /// `(x, y) -> (x y, y)`, then swap the coordinates.
    Chart2,
}

/// Why a step was chosen; recorded for serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Satellite,
    OnUGerm,
    OnVGerm,
    Free,
}

/// Strict transform of `p` (multiplicity `m` at the origin) through `step`.
pub(crate) fn blow_up<C: Coeff>(p: &Poly<C>, step: &Step, m: u32) -> Poly<C> {
    match step {
        Step::Chart1(t) => p
            .map_exponents(|a, b| (a + b, b))
            .div_first_power(m)
            .shift_second(t),
        Step::Chart2 => p.map_exponents(|a, b| (a + b, a)).div_first_power(m),
    }
}

#[derive(Debug, Clone)]
pub struct LocalModel {
    cfg: Configuration,
    chart_case: ChartCase,
    seed: Option<u64>,
    steps: Vec<Step>,
    placements: Vec<Placement>,
}

#[derive(Serialize)]
struct StepJson {
    point: usize,
    chart: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<String>,
    placement: Placement,
}

#[derive(Serialize)]
struct ModelJson {
    chart_case: ChartCase,
    delta: u32,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    steps: Vec<StepJson>,
}

impl Serialize for LocalModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let steps = self
            .steps
            .iter()
            .zip(&self.placements)
            .enumerate()
            .map(|(k, (step, placement))| {
                let (chart, t) = match step {
                    Step::Chart1(t) => (1, Some(t.to_string())),
                    Step::Chart2 => (2, None),
                };
                StepJson {
                    point: k + 2,
                    chart,
                    t,
                    placement: *placement,
                }
            })
            .collect();
        ModelJson {
            chart_case: self.chart_case,
            delta: self.cfg.delta(),
            n: self.cfg.n(),
            seed: self.seed,
            steps,
        }
        .serialize(s)
    }
}

/// The tangent slope `t` of a smooth germ through the origin, `None` when the
/// germ is tangent to `x = 0` or singular/absent there.
fn tangent_slope(g: &Poly) -> Option<Option<Q>> {
    if g.order() != Some(1) {
        return None;
    }
    let cx = g.coeff((1, 0)).cloned().unwrap_or_else(Q::zero);
    match g.coeff((0, 1)) {
        Some(cy) => Some(Some(-cx / cy)),
        None => Some(None),
    }
}

/// Source of free-point parameters.
enum Params<'a> {
    Seeded(Box<ChaCha8Rng>),
    Explicit(std::slice::Iter<'a, Q>),
}

impl LocalModel {
    pub fn config(&self) -> &Configuration {
        &self.cfg
    }

    pub fn chart_case(&self) -> ChartCase {
        self.chart_case
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// The parameter `t_i` of a free point `p_i` (`i >= 2`).
    pub fn parameter(&self, i: usize) -> Option<&Q> {
        match self.steps.get(i.checked_sub(2)?) {
            Some(Step::Chart1(t)) => Some(t),
            _ => None,
        }
    }

    /// Last index on the `v`-germ for this chart case.
    pub fn v_germ_last(&self) -> usize {
        v_germ_last(&self.cfg, self.chart_case)
    }

    pub fn u_germ() -> Poly {
        Poly::monomial(Vars::UV, 1, 0)
    }

    pub fn v_germ() -> Poly {
        Poly::monomial(Vars::UV, 0, 1)
    }

    /// Multiplicities of the successive strict transforms of `h` at `p_1..p_n`.
    pub fn multiplicity_profile(&self, h: &Poly) -> Vec<u32> {
        let n = self.cfg.n();
        let mut out = vec![0; n];
        let mut cur = h.clone();
        for (i, slot) in out.iter_mut().enumerate() {
            let Some(m) = cur.order() else { break };
            if m == 0 {
                break;
            }
            *slot = m;
            if i + 1 < n {
                cur = blow_up(&cur, &self.steps[i], m);
            }
        }
        out
    }

    /// `nu(h) = sum_j m_j(phi_n) mult_{p_j}(h)`.
    pub fn local_value(&self, h: &Poly) -> BigInt {
        let m = self.cfg.multiplicity_vector(self.cfg.n());
        self.multiplicity_profile(h)
            .iter()
            .zip(&m)
            .map(|(&r, mj)| mj * BigInt::from(r))
            .sum()
    }

    /// Move `f(x, y)` into the local chart: `f = h_f / (u^A v^B)`.
    pub fn clear_denominators(&self, f: &Poly) -> (Poly, BigInt, BigInt) {
        let (eu, ev) = self.chart_case.y_exponents(i64::from(self.cfg.delta()));
        let laurent: Vec<((i64, i64), Q)> = f
            .terms()
            .map(|(&(a, b), c)| {
                let (a, b) = (i64::from(a), i64::from(b));
                ((-a + b * eu, b * ev), c.clone())
            })
            .collect();
        let min_u = laurent.iter().map(|((i, _), _)| *i).min().unwrap_or(0);
        let min_v = laurent.iter().map(|((_, j), _)| *j).min().unwrap_or(0);
        let shift_v = min_v.min(0);
        let h = Poly::from_terms(
            Vars::UV,
            laurent
                .into_iter()
                .map(|((i, j), c)| (((i - min_u) as u32, (j - shift_v) as u32), c)),
        );
        (h, BigInt::from(-min_u), BigInt::from(-shift_v))
    }

    /// Exact `nu(f)` for a polynomial in the chart at infinity.
    pub fn infinity_value(&self, f: &Poly) -> BigInt {
        if f.is_zero() || f.is_constant() {
            return BigInt::zero();
        }
        let (h, a, b) = self.clear_denominators(f);
        self.local_value(&h)
            - a * self.local_value(&Self::u_germ())
            - b * self.local_value(&Self::v_germ())
    }

    /// `(nu(u), nu(v))` as computed on the model.
    pub fn axis_values(&self) -> (BigInt, BigInt) {
        (
            self.local_value(&Self::u_germ()),
            self.local_value(&Self::v_germ()),
        )
    }

    /// The same pair predicted from the configuration's Noether values.
    pub fn expected_axis_values(&self) -> (BigInt, BigInt) {
        let v = abc_values(&self.cfg, self.cfg.n());
        let m = self.cfg.multiplicity_vector(self.cfg.n());
        let second = match self.chart_case {
            ChartCase::SS => v.a,
            ChartCase::SG => m[0].clone(),
            ChartCase::NS => v.c,
        };
        (v.b, second)
    }

    fn self_check(&self) -> Result<()> {
        let n = self.cfg.n();
        let expect = |last: usize| -> Vec<u32> { (1..=n).map(|i| u32::from(i <= last)).collect() };
        let u = self.multiplicity_profile(&Self::u_germ());
        let v = self.multiplicity_profile(&Self::v_germ());
        let eu = expect(self.cfg.incidences().f1);
        let ev = expect(self.v_germ_last());
        if u != eu || v != ev {
            return Err(Error::new(
                Code::Realize,
                format!("axis germ profiles u {u:?}, v {v:?} differ from {eu:?}, {ev:?}"),
            ));
        }
        Ok(())
    }
}

fn v_germ_last(cfg: &Configuration, case: ChartCase) -> usize {
    let inc = cfg.incidences();
    match case {
        ChartCase::SS => inc.m0,
        ChartCase::SG => 1,
        ChartCase::NS => inc.m1,
    }
}

fn build(cfg: &Configuration, seed: Option<u64>, mut params: Params<'_>) -> Result<LocalModel> {
    let n = cfg.n();
    let case = ChartCase::of(cfg);
    let u_last = cfg.incidences().f1;
    let v_last = v_germ_last(cfg, case);
    let mut germs = [
        (LocalModel::u_germ(), u_last, Placement::OnUGerm),
        (LocalModel::v_germ(), v_last, Placement::OnVGerm),
    ];
    let mut steps = Vec::with_capacity(n.saturating_sub(1));
    let mut placements = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let next = i + 1;
        let (step, placement) = if let Some(j) = cfg.satellite_of(next) {
            if j + 1 == i {
                (Step::Chart2, Placement::Satellite)
            } else {
                (Step::Chart1(Q::zero()), Placement::Satellite)
            }
        } else if let Some((g, _, pl)) = germs.iter().find(|(_, last, _)| next <= *last) {
            let step = match tangent_slope(g) {
                Some(Some(t)) => Step::Chart1(t),
                Some(None) if i == 1 => Step::Chart2,
                _ => {
                    return Err(Error::new(
                        Code::Realize,
                        format!("germ cannot be followed to p{next}"),
                    ))
                }
            };
            (step, *pl)
        } else {
            let forbidden: Vec<Q> = germs
                .iter()
                .filter_map(|(g, _, _)| tangent_slope(g).flatten())
                .collect();
            let t = match &mut params {
                Params::Seeded(rng) => {
                    let mut found = None;
                    for _ in 0..MAX_RETRIES {
                        let mut k = rng.random_range(1..=PARAM_RANGE);
                        if rng.random_bool(0.5) {
                            k = -k;
                        }
                        let t = Q::from_integer(k.into());
                        if !forbidden.contains(&t) {
                            found = Some(t);
                            break;
                        }
                    }
                    found.ok_or_else(|| {
                        Error::new(
                            Code::Realize,
                            format!("no admissible parameter for p{next}"),
                        )
                    })?
                }
                Params::Explicit(it) => {
                    let t = it.next().cloned().ok_or_else(|| {
                        Error::new(Code::Realize, format!("missing parameter for p{next}"))
                    })?;
                    if t.is_zero() || forbidden.contains(&t) {
                        return Err(Error::new(
                            Code::Realize,
                            format!("parameter {t} puts p{next} on an undeclared curve"),
                        ));
                    }
                    t
                }
            };
            (Step::Chart1(t), Placement::Free)
        };
        for (g, _, _) in germs.iter_mut() {
            if let Some(m) = g.order().filter(|&m| m > 0) {
                *g = blow_up(g, &step, m);
            }
        }
        steps.push(step);
        placements.push(placement);
    }
    if let Params::Explicit(mut it) = params {
        if it.next().is_some() {
            return Err(Error::new(
                Code::Realize,
                "more parameters than free points",
            ));
        }
    }
    let model = LocalModel {
        cfg: cfg.clone(),
        chart_case: case,
        seed,
        steps,
        placements,
    };
    model.self_check()?;
    Ok(model)
}

/// Realize `cfg` with free-point parameters drawn from `seed`.
pub fn realize_model(cfg: &Configuration, seed: u64) -> Result<LocalModel> {
    build(
        cfg,
        Some(seed),
        Params::Seeded(Box::new(ChaCha8Rng::seed_from_u64(seed))),
    )
}

/// Realize `cfg` with the given parameters for the unconstrained free points,
/// in increasing point order.
pub fn realize_model_with(cfg: &Configuration, params: &[Q]) -> Result<LocalModel> {
    build(cfg, None, Params::Explicit(params.iter()))
}

impl Step {
    pub fn is_chart2(&self) -> bool {
        matches!(self, Step::Chart2)
    }

    pub fn parameter(&self) -> Option<&Q> {
        match self {
            Step::Chart1(t) => Some(t),
            Step::Chart2 => None,
        }
    }
}

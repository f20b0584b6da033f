//! Searching for functions that refute non-positivity or negativity at infinity.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::interp::{condition_count, interpolate_coefficients, MonomialBasis};
use super::model::LocalModel;
use super::poly::{Poly, Vars, Q};
use crate::classify::{classify_at_infinity, Status};

/// Random two-term combinations tried per candidate bidegree.
const COMBINATIONS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMode {
    /// `nu(f) > 0`: the valuation is not non-positive at infinity.
    Positive,
    /// Nonconstant `f` with `nu(f) = 0`: the valuation is not negative.
    Zero,
}

impl WitnessMode {
    fn accepts(self, value: &BigInt) -> bool {
        match self {
            WitnessMode::Positive => value.is_positive(),
            WitnessMode::Zero => value.is_zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub f: Poly,
    #[serde(with = "crate::num::big")]
    pub value: BigInt,
    pub multiple: u32,
    pub bidegree: (u32, u32),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Found(Witness),
    NotFound {
        max_multiple: u32,
        max_bidegree: (u32, u32),
        candidates: usize,
    },
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            WitnessOutcome::Found(w) => Some(w),
            WitnessOutcome::NotFound { .. } => None,
        }
    }
}

/// Bidegrees `(a, b) <= max` ordered by `a + b`, then by `a`.
fn bidegrees(max: (u32, u32)) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = (0..=max.0)
        .flat_map(|a| (0..=max.1).map(move |b| (a, b)))
        .collect();
    out.sort_by_key(|&(a, b)| (a + b, a));
    out
}

fn small_nonzero<R: Rng>(rng: &mut R) -> Q {
    let k: i64 = rng.random_range(1..=5);
    Q::from_integer(if rng.random_bool(0.5) { k } else { -k }.into())
}

pub fn witness_search(
    model: &LocalModel,
    mode: WitnessMode,
    max_multiple: u32,
    max_bidegree: (u32, u32),
) -> WitnessOutcome {
    let cfg = model.config();
    let delta = cfg.delta();
    let m: Vec<u32> = cfg
        .multiplicity_vector(cfg.n())
        .iter()
        .map(|x| u32::try_from(x).expect("multiplicities fit in u32"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed().unwrap_or(0));
    let mut candidates = 0;
    for t in 1..=max_multiple {
        let r: Vec<u32> = m.iter().map(|x| x * t).collect();
        let conditions = condition_count(&r);
        for (a, b) in bidegrees(max_bidegree) {
            if MonomialBasis::expected_len(delta, a, b) <= conditions {
                continue;
            }
            let basis = MonomialBasis::new(model.chart_case(), delta, a, b);
            let Ok(kernel) = interpolate_coefficients(model, &basis, &r) else {
                continue;
            };
            let mut trials: Vec<Vec<Q>> = kernel.clone();
            if kernel.len() >= 2 {
                for _ in 0..COMBINATIONS {
                    let i = rng.random_range(0..kernel.len());
                    let j = rng.random_range(0..kernel.len());
                    if i == j {
                        continue;
                    }
                    let (ci, cj) = (small_nonzero(&mut rng), small_nonzero(&mut rng));
                    trials.push(
                        kernel[i]
                            .iter()
                            .zip(&kernel[j])
                            .map(|(x, y)| x * &ci + y * &cj)
                            .collect(),
                    );
                }
            }
            for c in trials {
                let f = basis.combine(&c).primitive();
                if f.is_zero() || f.is_constant() {
                    continue;
                }
                candidates += 1;
                let value = model.infinity_value(&f);
                if mode.accepts(&value) {
                    return WitnessOutcome::Found(Witness {
                        f,
                        value,
                        multiple: t,
                        bidegree: (a, b),
                    });
                }
            }
        }
    }
    WitnessOutcome::NotFound {
        max_multiple,
        max_bidegree,
        candidates,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleHit {
    pub f: Poly,
    #[serde(with = "crate::num::big")]
    pub value: BigInt,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub count: usize,
    pub predicted: Status,
    pub max: SampleHit,
    /// Samples whose value contradicts the predicted sign.
    pub counterexamples: Vec<SampleHit>,
}

/// Random nonconstant polynomial with exponents bounded by `max`.
pub(crate) fn random_poly<R: Rng>(rng: &mut R, vars: Vars, max: (u32, u32)) -> Poly {
    loop {
        let terms = rng.random_range(1..=4);
        let mut f = Poly::zero(vars);
        for _ in 0..terms {
            let e = (rng.random_range(0..=max.0), rng.random_range(0..=max.1));
            f.add_term(e, &small_nonzero(rng));
        }
        if !f.is_constant() {
            return f;
        }
    }
}

/// Evaluate `nu` on `count` nonconstant polynomials: first the pure powers of
/// `x` and `y`, then random ones.
pub fn sample_check(
    model: &LocalModel,
    count: usize,
    max_bidegree: (u32, u32),
    seed: u64,
) -> SampleReport {
    let predicted = classify_at_infinity(model.config()).status;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let powers = (1..=max_bidegree.0)
        .map(|k| Poly::monomial(Vars::XY, k, 0))
        .chain((1..=max_bidegree.1).map(|k| Poly::monomial(Vars::XY, 0, k)));
    let samples: Vec<Poly> = powers
        .chain(std::iter::repeat_with(|| {
            random_poly(&mut rng, Vars::XY, max_bidegree)
        }))
        .take(count)
        .collect();
    let mut max: Option<SampleHit> = None;
    let mut counterexamples = Vec::new();
    for f in samples {
        let value = model.infinity_value(&f);
        let bad = match predicted {
            Status::Negative => !value.is_negative(),
            Status::BoundaryNonPositive => value.is_positive(),
            Status::NotNonPositive => false,
        };
        let hit = SampleHit { f, value };
        if bad {
            counterexamples.push(hit.clone());
        }
        if max.as_ref().is_none_or(|m| hit.value > m.value) {
            max = Some(hit);
        }
    }
    SampleReport {
        count,
        predicted,
        max: max.unwrap_or(SampleHit {
            f: Poly::zero(Vars::XY),
            value: BigInt::zero(),
        }),
        counterexamples,
    }
}

//! Noether intersection values, the inverse volume, and maximal contact values.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::config::{validate_configuration, ConfigFile, Configuration, FileKind, PointKind};
use crate::error::{Code, Error, Result};

/// Intersection multiplicity at `p` of the curvette `phi_i` with a smooth germ
/// whose strict transform passes through exactly `p_1, ..., p_last`.
pub fn noether_value(cfg: &Configuration, i: usize, last: usize) -> BigInt {
    let m = cfg.multiplicity_vector(i);
    m.iter().take(last.min(i)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoetherValues {
    #[serde(with = "crate::num::big")]
    pub a: BigInt,
    #[serde(with = "crate::num::big")]
    pub b: BigInt,
    #[serde(with = "crate::num::big")]
    pub c: BigInt,
    #[serde(with = "crate::num::big")]
    pub vol_inverse: BigInt,
}

/// `(a_i, b_i, c_i)` and the inverse volume of the sub-valuation `nu_i`.
pub fn abc_values(cfg: &Configuration, i: usize) -> NoetherValues {
    let inc = cfg.incidences();
    let m = cfg.multiplicity_vector(i);
    let head = |last: usize| -> BigInt { m.iter().take(last.min(i)).sum() };
    NoetherValues {
        a: head(inc.m0),
        b: head(inc.f1),
        c: head(inc.m1),
        vol_inverse: m.iter().map(|x| x * x).sum(),
    }
}

pub fn volume_inverse(cfg: &Configuration) -> BigInt {
    cfg.multiplicity_vector(cfg.n()).iter().map(|x| x * x).sum()
}

/// Maximal contact values `beta_0, ..., beta_g` followed by `beta_{g+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McvSequence {
    #[serde(with = "crate::num::big_vec")]
    pub beta: Vec<BigInt>,
    #[serde(with = "crate::num::big")]
    pub beta_top: BigInt,
}

impl McvSequence {
    /// Build from a flat list `beta_0, ..., beta_g, beta_{g+1}`.
    pub fn from_values(values: Vec<BigInt>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::new(
                Code::McvInvalid,
                "need at least beta_0 and the final value",
            ));
        }
        let mut beta = values;
        let beta_top = beta.pop().expect("non-empty");
        Ok(McvSequence { beta, beta_top })
    }

    /// Parse a comma-separated list such as `15,51,262,786`.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::new(Code::Parse, format!("not an integer: {:?}", s.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(values)
    }

    pub fn values(&self) -> Vec<BigInt> {
        let mut v = self.beta.clone();
        v.push(self.beta_top.clone());
        v
    }

    pub fn g(&self) -> usize {
        self.beta.len() - 1
    }

    /// `e_0 = beta_0`, `e_j = gcd(e_{j-1}, beta_j)`.
    pub fn gcd_chain(&self) -> Vec<BigInt> {
        let mut e = vec![self.beta[0].clone()];
        for b in &self.beta[1..] {
            let next = e.last().expect("non-empty").gcd(b);
            e.push(next);
        }
        e
    }

    /// `n_j = e_{j-1} / e_j` for `j = 1..=g`.
    pub fn quotients(&self) -> Vec<BigInt> {
        let e = self.gcd_chain();
        e.windows(2).map(|w| &w[0] / &w[1]).collect()
    }

    /// Admissibility conditions that do not need the block expansion.
    fn check_shape(&self) -> std::result::Result<(), String> {
        if self.beta.iter().any(|b| !b.is_positive()) || !self.beta_top.is_positive() {
            return Err("values must be positive".into());
        }
        if self.beta.windows(2).any(|w| w[1] <= w[0]) {
            return Err("values must be strictly increasing".into());
        }
        let e = self.gcd_chain();
        if e.windows(2).any(|w| w[1] == w[0]) {
            return Err(format!("gcd chain {e:?} is not strictly decreasing"));
        }
        if !e.last().expect("non-empty").is_one() {
            return Err(format!("gcd chain {e:?} does not end in 1"));
        }
        let n = self.quotients();
        for j in 1..self.g() {
            if self.beta[j + 1] <= &n[j - 1] * &self.beta[j] {
                return Err(format!(
                    "beta_{} = {} is not greater than n_{j} * beta_{j} = {}",
                    j + 1,
                    self.beta[j + 1],
                    &n[j - 1] * &self.beta[j]
                ));
            }
        }
        Ok(())
    }

    /// Multiplicities of the curvette through the satellite blocks, excluding
    /// trailing free points, by the Euclidean algorithm on characteristic exponents.
    fn block_expansion(&self) -> Vec<BigInt> {
        let e = self.gcd_chain();
        let n = self.quotients();
        let mut char_exp = vec![
            BigInt::zero(),
            self.beta.get(1).cloned().unwrap_or_default(),
        ];
        for q in 1..self.g() {
            let next = &self.beta[q + 1] - &n[q - 1] * &self.beta[q] + &char_exp[q];
            char_exp.push(next);
        }
        let mut out = Vec::new();
        for q in 1..=self.g() {
            let mut a = &char_exp[q] - &char_exp[q - 1];
            let mut b = e[q - 1].clone();
            while !b.is_zero() {
                let (quot, rem) = a.div_rem(&b);
                let reps = quot.to_usize_capped();
                out.extend(std::iter::repeat_n(b.clone(), reps));
                a = b;
                b = rem;
            }
        }
        out
    }
}

trait Capped {
    fn to_usize_capped(&self) -> usize;
}

impl Capped for BigInt {
    fn to_usize_capped(&self) -> usize {
        use num_traits::ToPrimitive;
        self.to_usize().unwrap_or(usize::MAX)
    }
}

/// Maximal contact values of the valuation defined by `cfg`.
pub fn maximal_contact_values(cfg: &Configuration) -> Result<McvSequence> {
    let n = cfg.n();
    let m = cfg.multiplicity_vector(n);
    let mut beta = vec![m[0].clone()];
    let mut i = 2;
    while i <= n {
        if cfg.is_satellite(i) && !cfg.is_satellite(i - 1) {
            let l = i - 1;
            let ml = cfg.multiplicity_vector(l);
            beta.push(m.iter().zip(&ml).map(|(x, y)| x * y).sum());
        }
        i += 1;
    }
    let seq = McvSequence {
        beta,
        beta_top: m.iter().map(|x| x * x).sum(),
    };
    seq.check_shape().map_err(|msg| {
        Error::new(
            Code::Mcv,
            format!("inconsistent maximal contact values: {msg}"),
        )
    })?;
    Ok(seq)
}

/// Requested incidences for [`configuration_from_mcv`]; `m1 = None` takes the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RequestedIncidences {
    pub f1: i64,
    pub m0: i64,
    pub m1: Option<i64>,
}

/// Rebuild the configuration whose valuation has the given maximal contact values.
pub fn configuration_from_mcv(
    delta: i64,
    point_kind: PointKind,
    mcv: &McvSequence,
    incidences: RequestedIncidences,
) -> Result<Configuration> {
    let invalid = |msg: String| Error::new(Code::McvInvalid, msg);
    mcv.check_shape().map_err(invalid)?;
    let mut mult = mcv.block_expansion();
    if mult.is_empty() {
        mult.push(BigInt::one());
    }
    let sum_sq: BigInt = mult.iter().map(|x| x * x).sum();
    if mcv.beta_top < sum_sq {
        return Err(invalid(format!(
            "final value {} is below the block sum of squares {sum_sq}",
            mcv.beta_top
        )));
    }
    let trailing = (&mcv.beta_top - &sum_sq).to_usize_capped();
    if trailing > 1_000_000 {
        return Err(invalid(format!("{trailing} trailing points is too many")));
    }
    mult.extend(std::iter::repeat_n(BigInt::one(), trailing));

    let n = mult.len();
    let mut sat: Vec<Option<usize>> = vec![None; n + 1];
    for j in 1..n {
        let mut sum = BigInt::zero();
        let mut k = j + 1;
        while k <= n && sum < mult[j - 1] {
            sum += &mult[k - 1];
            if k >= j + 2 {
                if sat[k].is_some() {
                    return Err(invalid(format!(
                        "p{k} would be proximate to two earlier points"
                    )));
                }
                sat[k] = Some(j);
            }
            k += 1;
        }
        if sum != mult[j - 1] {
            return Err(invalid(format!(
                "no consecutive proximity solution at p{j}"
            )));
        }
    }
    let satellites: Vec<(usize, usize)> = (1..=n).filter_map(|k| sat[k].map(|j| (k, j))).collect();
    let kind = match point_kind {
        PointKind::Special => Some(FileKind::Special),
        PointKind::General => Some(FileKind::General),
        PointKind::None => None,
    };
    let raw = ConfigFile::new(
        delta,
        kind,
        n,
        &satellites,
        incidences.f1,
        incidences.m0,
        incidences.m1,
    );
    let cfg = validate_configuration(&raw)?;
    let back = maximal_contact_values(&cfg).map_err(|e| invalid(e.to_string()))?;
    if &back != mcv || cfg.multiplicity_vector(n) != mult {
        return Err(invalid(format!(
            "round trip gives {:?}",
            back.values()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        )));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn noether_values_of_fixtures() {
        let ex = fixtures::ex12();
        assert_eq!(noether_value(&ex, 12, 3), BigInt::from(45));
        assert_eq!(noether_value(&ex, 12, 1), BigInt::from(15));
        assert_eq!(noether_value(&ex, 12, 0), BigInt::zero());
        let v = abc_values(&ex, 12);
        assert_eq!(
            (v.a, v.b, v.c, v.vol_inverse),
            (0.into(), 15.into(), 45.into(), 786.into())
        );
        let v = abc_values(&fixtures::cusp(), 3);
        assert_eq!(
            (v.a, v.b, v.c, v.vol_inverse),
            (2.into(), 2.into(), 0.into(), 6.into())
        );
        let v = abc_values(&fixtures::t1(), 1);
        assert_eq!(
            (v.a, v.b, v.c, v.vol_inverse),
            (1.into(), 1.into(), 0.into(), 1.into())
        );
    }

    #[test]
    fn mcv_of_fixtures() {
        assert_eq!(
            maximal_contact_values(&fixtures::ex12()).unwrap().values(),
            ints(&[15, 51, 262, 786])
        );
        assert_eq!(
            maximal_contact_values(&fixtures::cusp()).unwrap().values(),
            ints(&[2, 3, 6])
        );
        assert_eq!(
            maximal_contact_values(&fixtures::fib4()).unwrap().values(),
            ints(&[1, 4])
        );
        assert_eq!(volume_inverse(&fixtures::ex12()), BigInt::from(786));
    }

    #[test]
    fn from_mcv_rebuilds_ex12() {
        let mcv = McvSequence::parse("15,51,262,786").unwrap();
        let req = RequestedIncidences {
            f1: 1,
            m0: 0,
            m1: Some(3),
        };
        let cfg = configuration_from_mcv(2, PointKind::General, &mcv, req).unwrap();
        assert_eq!(cfg, fixtures::ex12());
        assert_eq!(
            cfg.multiplicity_vector(12),
            ints(&[15, 15, 15, 6, 6, 3, 3, 3, 3, 1, 1, 1])
        );
    }

    #[test]
    fn from_mcv_rebuilds_cusp() {
        let mcv = McvSequence::parse("2, 3, 6").unwrap();
        let req = RequestedIncidences {
            f1: 1,
            m0: 1,
            m1: None,
        };
        let cfg = configuration_from_mcv(1, PointKind::Special, &mcv, req).unwrap();
        assert_eq!(cfg, fixtures::cusp());
    }

    #[test]
    fn from_mcv_long_tail() {
        let mcv = McvSequence::parse("3,11,122").unwrap();
        let req = RequestedIncidences {
            f1: 1,
            m0: 1,
            m1: None,
        };
        let cfg = configuration_from_mcv(1, PointKind::Special, &mcv, req).unwrap();
        let m = cfg.multiplicity_vector(cfg.n());
        assert_eq!(&m[..6], &ints(&[3, 3, 3, 2, 1, 1])[..]);
        assert_eq!(cfg.n(), 6 + 89);
        assert_eq!(volume_inverse(&cfg), BigInt::from(122));
    }

    #[test]
    fn inadmissible_sequences() {
        let req = RequestedIncidences {
            f1: 1,
            m0: 1,
            m1: None,
        };
        for text in ["4,6", "2,4,8", "3,2,10", "2,3,5", "6,9,11,100", "4,6,13,10"] {
            let mcv = McvSequence::parse(text).unwrap();
            let err = configuration_from_mcv(1, PointKind::Special, &mcv, req).unwrap_err();
            assert!(err.has(Code::McvInvalid), "{text}: {err}");
        }
        assert!(McvSequence::parse("3,x").unwrap_err().has(Code::Parse));
        assert!(McvSequence::parse("3").unwrap_err().has(Code::McvInvalid));
    }

    #[test]
    fn incompatible_incidences() {
        let mcv = McvSequence::parse("2,3,6").unwrap();
        let req = RequestedIncidences {
            f1: 1,
            m0: 3,
            m1: None,
        };
        let err = configuration_from_mcv(1, PointKind::Special, &mcv, req).unwrap_err();
        assert!(err.has(Code::Smooth) || err.has(Code::Incidence), "{err}");
    }

    #[test]
    fn random_round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let g = crate::gen::ConfigGenerator::default();
        for _ in 0..500 {
            let cfg = g.sample(&mut rng);
            let mcv = maximal_contact_values(&cfg).unwrap();
            assert_eq!(mcv.beta_top, volume_inverse(&cfg));
            let inc = cfg.incidences();
            let req = RequestedIncidences {
                f1: inc.f1 as i64,
                m0: inc.m0 as i64,
                m1: Some(inc.m1 as i64),
            };
            let back = configuration_from_mcv(cfg.delta() as i64, cfg.point_kind(), &mcv, req)
                .unwrap_or_else(|e| panic!("{}: {e}", cfg.to_json()));
            assert_eq!(back.proximity_matrix(), cfg.proximity_matrix());
        }
    }
}

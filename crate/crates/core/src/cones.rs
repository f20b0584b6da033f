//! Generator divisors of the dual cones `S_1^v(Z)`, `S_2^v(Z)` and of the
//! cone of curves in the non-positive case.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::config::Configuration;
use crate::error::{Code, Error, Result};
use crate::invariants::abc_values;
use crate::lattice::{Curve, Lattice, PicClass};

/// Names of the divisors that appear in generator sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    FStar,
    MStar,
    Lambda(usize),
    Theta(usize),
    Delta(usize),
    Gamma(usize),
    Upsilon(usize, usize),
    F1,
    M0,
    M1,
    E(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::FStar => write!(f, "F*"),
            Generator::MStar => write!(f, "M*"),
            Generator::Lambda(i) => write!(f, "Lambda_{i}"),
            Generator::Theta(i) => write!(f, "Theta_{i}"),
            Generator::Delta(i) => write!(f, "Delta_{i}"),
            Generator::Gamma(i) => write!(f, "Gamma_{i}"),
            Generator::Upsilon(i, k) => write!(f, "Upsilon_{i}_{k}"),
            Generator::F1 => write!(f, "F1~"),
            Generator::M0 => write!(f, "M0~"),
            Generator::M1 => write!(f, "M1~"),
            Generator::E(i) => write!(f, "E_{i}"),
        }
    }
}

impl Generator {
    pub fn parse(label: &str) -> Option<Generator> {
        let idx = |s: &str| s.parse::<usize>().ok();
        match label {
            "F*" => return Some(Generator::FStar),
            "M*" => return Some(Generator::MStar),
            "F1~" => return Some(Generator::F1),
            "M0~" => return Some(Generator::M0),
            "M1~" => return Some(Generator::M1),
            _ => {}
        }
        let (name, rest) = label.split_once('_')?;
        match name {
            "Lambda" => idx(rest).map(Generator::Lambda),
            "Theta" => idx(rest).map(Generator::Theta),
            "Delta" => idx(rest).map(Generator::Delta),
            "Gamma" => idx(rest).map(Generator::Gamma),
            "E" => idx(rest).map(Generator::E),
            "Upsilon" => {
                let (i, k) = rest.split_once('_')?;
                Some(Generator::Upsilon(idx(i)?, idx(k)?))
            }
            _ => None,
        }
    }
}

fn special_only(cfg: &Configuration, what: &str) -> Result<()> {
    if cfg.is_special() {
        Ok(())
    } else {
        Err(Error::new(
            Code::NotApplicable,
            format!("{what} is defined for special valuations only"),
        ))
    }
}

fn nonspecial_only(cfg: &Configuration, what: &str) -> Result<()> {
    if cfg.is_special() {
        Err(Error::new(
            Code::NotApplicable,
            format!("{what} is defined for non-special valuations only"),
        ))
    } else {
        Ok(())
    }
}

fn check_range(what: &str, i: usize, lo: usize, hi: usize) -> Result<()> {
    if i < lo || i > hi {
        return Err(Error::new(
            Code::Range,
            format!("{what} needs index in [{lo}, {hi}], got {i}"),
        ));
    }
    Ok(())
}

/// `f F* + m M* - sum_j scale * mult_{p_j}(phi_i) E_j*`.
fn curvette_class(cfg: &Configuration, i: usize, f: BigInt, m: BigInt, scale: &BigInt) -> PicClass {
    let mult: Vec<BigInt> = cfg
        .multiplicity_vector(i)
        .iter()
        .map(|x| x * scale)
        .collect();
    PicClass::from_degrees(cfg.n(), f, m, &mult)
}

pub fn lambda_class(cfg: &Configuration, i: usize) -> Result<PicClass> {
    special_only(cfg, "Lambda")?;
    check_range("Lambda", i, 1, cfg.n())?;
    let v = abc_values(cfg, i);
    Ok(curvette_class(cfg, i, v.a, v.b, &BigInt::from(1)))
}

pub fn theta_class(cfg: &Configuration, i: usize) -> Result<PicClass> {
    nonspecial_only(cfg, "Theta")?;
    check_range("Theta", i, 1, cfg.delta() as usize)?;
    let v = abc_values(cfg, i);
    Ok(curvette_class(
        cfg,
        i,
        BigInt::zero(),
        v.b,
        &BigInt::from(1),
    ))
}

pub fn delta_class(cfg: &Configuration, i: usize) -> Result<PicClass> {
    nonspecial_only(cfg, "Delta")?;
    check_range("Delta", i, cfg.delta() as usize + 1, cfg.n())?;
    let v = abc_values(cfg, i);
    let f = &v.c - cfg.delta_int() * &v.b;
    Ok(curvette_class(cfg, i, f, v.b, &BigInt::from(1)))
}

pub fn gamma_class(cfg: &Configuration, i: usize) -> Result<PicClass> {
    nonspecial_only(cfg, "Gamma")?;
    check_range("Gamma", i, cfg.delta() as usize + 1, cfg.n())?;
    let v = abc_values(cfg, i);
    Ok(curvette_class(
        cfg,
        i,
        BigInt::zero(),
        v.c,
        &cfg.delta_int(),
    ))
}

pub fn upsilon_class(cfg: &Configuration, i: usize, k: usize) -> Result<PicClass> {
    nonspecial_only(cfg, "Upsilon")?;
    let delta = cfg.delta() as usize;
    check_range("Upsilon", i, delta + 1, cfg.n())?;
    if delta < 2 {
        return Err(Error::new(Code::Range, "Upsilon needs delta >= 2"));
    }
    check_range("Upsilon", k, 1, delta - 1)?;
    let v = abc_values(cfg, i);
    let mult = cfg.multiplicity_vector(i);
    let head = &v.c - BigInt::from(k) * &v.b;
    let m1 = cfg.incidences().m1;
    let alt: BigInt = mult[k..m1.min(i)].iter().sum();
    if alt != head {
        return Err(Error::new(
            Code::Closed,
            format!("Upsilon_{i}_{k}: c - k b = {head} but the tail sum is {alt}"),
        ));
    }
    let tail = BigInt::from(delta - k);
    let mut coeffs: Vec<BigInt> = vec![head.clone(); k];
    coeffs.extend(mult[k..].iter().map(|x| x * &tail));
    Ok(PicClass::from_degrees(
        cfg.n(),
        BigInt::zero(),
        head,
        &coeffs,
    ))
}

pub fn generator_class(cfg: &Configuration, g: Generator) -> Result<PicClass> {
    let n = cfg.n();
    let lat = Lattice::new(cfg);
    match g {
        Generator::FStar => Ok(PicClass::f_star(n)),
        Generator::MStar => Ok(PicClass::m_star(n)),
        Generator::Lambda(i) => lambda_class(cfg, i),
        Generator::Theta(i) => theta_class(cfg, i),
        Generator::Delta(i) => delta_class(cfg, i),
        Generator::Gamma(i) => gamma_class(cfg, i),
        Generator::Upsilon(i, k) => upsilon_class(cfg, i, k),
        Generator::F1 => lat.strict_transform(Curve::F1),
        Generator::M0 => lat.strict_transform(Curve::M0),
        Generator::M1 => lat.strict_transform(Curve::M1),
        Generator::E(i) => lat.strict_transform(Curve::E(i)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorSetKind {
    DualConeSpecial,
    DualConeNonspecial,
    CurveConeSpecial,
    CurveConeNonspecial,
}

/// A labelled class; serializes as `{"label", "f", "m", "e"}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledClass {
    pub label: Generator,
    pub class: PicClass,
}

impl Serialize for LabelledClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Big<'a>(#[serde(with = "crate::num::big")] &'a BigInt);
        #[derive(Serialize)]
        struct BigVec<'a>(#[serde(with = "crate::num::big_vec")] &'a [BigInt]);
        let mut st = s.serialize_struct("LabelledClass", 4)?;
        st.serialize_field("e", &BigVec(&self.class.e))?;
        st.serialize_field("f", &Big(&self.class.f))?;
        st.serialize_field("label", &self.label.to_string())?;
        st.serialize_field("m", &Big(&self.class.m))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    pub kind: GeneratorSetKind,
    pub classes: Vec<LabelledClass>,
}

impl GeneratorSet {
    fn build(cfg: &Configuration, kind: GeneratorSetKind, labels: Vec<Generator>) -> Result<Self> {
        let classes = labels
            .into_iter()
            .map(|g| {
                Ok(LabelledClass {
                    label: g,
                    class: generator_class(cfg, g)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorSet { kind, classes })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn labels(&self) -> Vec<Generator> {
        self.classes.iter().map(|c| c.label).collect()
    }

    pub fn get(&self, g: Generator) -> Option<&PicClass> {
        self.classes.iter().find(|c| c.label == g).map(|c| &c.class)
    }
}

/// Labels of the dual-cone generators, in emission order.
pub fn dual_cone_labels(cfg: &Configuration) -> Vec<Generator> {
    let n = cfg.n();
    let delta = cfg.delta() as usize;
    let mut out = vec![Generator::FStar, Generator::MStar];
    if cfg.is_special() {
        out.extend((1..=n).map(Generator::Lambda));
    } else {
        out.extend((1..=delta).map(Generator::Theta));
        out.extend((delta + 1..=n).map(Generator::Delta));
        out.extend((delta + 1..=n).map(Generator::Gamma));
        for i in delta + 1..=n {
            out.extend((1..delta).map(|k| Generator::Upsilon(i, k)));
        }
    }
    out
}

/// The primal set `S_1(Z)` (special) or `S_2(Z)` (non-special).
pub fn primal_labels(cfg: &Configuration) -> Vec<Generator> {
    let mut out = vec![Generator::F1, Generator::M0];
    if !cfg.is_special() {
        out.push(Generator::M1);
    }
    out.extend((1..=cfg.n()).map(Generator::E));
    out
}

/// Generators of the dual cone, each verified nonnegative on the primal set.
pub fn dual_cone_generators(cfg: &Configuration) -> Result<GeneratorSet> {
    let kind = if cfg.is_special() {
        GeneratorSetKind::DualConeSpecial
    } else {
        GeneratorSetKind::DualConeNonspecial
    };
    let set = GeneratorSet::build(cfg, kind, dual_cone_labels(cfg))?;
    let primal = GeneratorSet::build(cfg, kind, primal_labels(cfg))?;
    let lat = Lattice::new(cfg);
    for g in &set.classes {
        for p in &primal.classes {
            let v = lat.pair(&g.class, &p.class)?;
            if v.is_negative() {
                return Err(Error::new(
                    Code::Dual,
                    format!("{} . {} = {v} < 0", g.label, p.label),
                ));
            }
        }
    }
    Ok(set)
}

/// `lhs - vol^{-1}` of the criterion: `Lambda_n^2` (special) or `Delta_n^2` (non-special).
pub(crate) fn criterion_margin(cfg: &Configuration) -> BigInt {
    let v = abc_values(cfg, cfg.n());
    let d = cfg.delta_int();
    let lhs = if cfg.is_special() {
        BigInt::from(2) * &v.a * &v.b + &d * &v.b * &v.b
    } else {
        BigInt::from(2) * &v.c * &v.b - &d * &v.b * &v.b
    };
    lhs - v.vol_inverse
}

/// Generators of the cone of curves when the valuation is non-positive at infinity.
pub fn curve_cone_generators(cfg: &Configuration) -> Result<GeneratorSet> {
    let margin = criterion_margin(cfg);
    if margin.is_negative() {
        return Err(Error::new(
            Code::NotNpi,
            format!("criterion fails by {}; no generator list is known", -margin),
        ));
    }
    let kind = if cfg.is_special() {
        GeneratorSetKind::CurveConeSpecial
    } else {
        GeneratorSetKind::CurveConeNonspecial
    };
    GeneratorSet::build(cfg, kind, primal_labels(cfg))
}

/// Self-intersection of a generator from its closed form, cross-checked
/// against the lattice pairing.
pub fn closed_form_self_intersection(cfg: &Configuration, g: Generator) -> Result<BigInt> {
    let delta = cfg.delta_int();
    let sq = |x: &BigInt| x * x;
    let two = BigInt::from(2);
    let value = match g {
        Generator::Lambda(i) => {
            special_only(cfg, "Lambda")?;
            check_range("Lambda", i, 1, cfg.n())?;
            let v = abc_values(cfg, i);
            &two * &v.a * &v.b + &delta * sq(&v.b) - &v.vol_inverse
        }
        Generator::Theta(i) => {
            theta_class(cfg, i)?;
            let v = abc_values(cfg, i);
            &delta * sq(&v.b) - &v.vol_inverse
        }
        Generator::Delta(i) => {
            delta_class(cfg, i)?;
            let v = abc_values(cfg, i);
            &two * &v.b * &v.c - &delta * sq(&v.b) - &v.vol_inverse
        }
        Generator::Gamma(i) => {
            gamma_class(cfg, i)?;
            let v = abc_values(cfg, i);
            &delta * sq(&v.c) - sq(&delta) * &v.vol_inverse
        }
        Generator::Upsilon(i, k) => {
            upsilon_class(cfg, i, k)?;
            let v = abc_values(cfg, i);
            let k = BigInt::from(k);
            let dk = &delta - &k;
            &dk * (sq(&v.c) - &k * (&two * &v.c * &v.b - &delta * sq(&v.b)) - &dk * &v.vol_inverse)
        }
        other => {
            return Err(Error::new(
                Code::NotApplicable,
                format!("no closed form for {other}"),
            ));
        }
    };
    let class = generator_class(cfg, g)?;
    let direct = Lattice::new(cfg).square(&class);
    if direct != value {
        return Err(Error::new(
            Code::Closed,
            format!("{g}: closed form {value} but pairing {direct}"),
        ));
    }
    Ok(value)
}

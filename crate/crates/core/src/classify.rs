//! Special / non-special decision and the sign of the valuation at infinity.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::cones::{curve_cone_generators, generator_class, Generator, LabelledClass};
use crate::config::{Configuration, PointKind};
use crate::error::{Code, Error, Result};
use crate::invariants::abc_values;
use crate::lattice::{Lattice, PicClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Special,
    NonSpecial,
}

/// Which clause decided the kind of the valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    DeltaZero,
    SpecialPoint,
    P2OnFiber,
    ShortFreeChain,
    NonSpecial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    NotNonPositive,
    Negative,
    BoundaryNonPositive,
}

/// Decide speciality from the configuration alone.
pub fn is_special(cfg: &Configuration) -> (bool, Reason) {
    let delta = cfg.delta() as usize;
    let reason = if delta == 0 {
        Reason::DeltaZero
    } else if cfg.point_kind() == PointKind::Special {
        Reason::SpecialPoint
    } else if cfg.incidences().f1 >= 2 {
        Reason::P2OnFiber
    } else if cfg.leading_free() < delta + 1 {
        Reason::ShortFreeChain
    } else {
        Reason::NonSpecial
    };
    (reason != Reason::NonSpecial, reason)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub kind: Kind,
    pub reason: Reason,
    #[serde(with = "crate::num::big")]
    pub lhs: BigInt,
    #[serde(with = "crate::num::big")]
    pub vol_inverse: BigInt,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nef_divisor: Option<PicClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ne_generators: Option<Vec<LabelledClass>>,
}

fn nef_label(cfg: &Configuration) -> Generator {
    if cfg.is_special() {
        Generator::Lambda(cfg.n())
    } else {
        Generator::Delta(cfg.n())
    }
}

pub fn classify_at_infinity(cfg: &Configuration) -> ClassificationReport {
    let (special, reason) = is_special(cfg);
    debug_assert_eq!(special, cfg.is_special());
    let v = abc_values(cfg, cfg.n());
    let d = cfg.delta_int();
    let two = BigInt::from(2);
    let lhs = if special {
        &two * &v.a * &v.b + &d * &v.b * &v.b
    } else {
        &two * &v.c * &v.b - &d * &v.b * &v.b
    };
    let status = match lhs.cmp(&v.vol_inverse) {
        std::cmp::Ordering::Greater => Status::Negative,
        std::cmp::Ordering::Equal => Status::BoundaryNonPositive,
        std::cmp::Ordering::Less => Status::NotNonPositive,
    };
    let (nef_divisor, ne_generators) = if status == Status::NotNonPositive {
        (None, None)
    } else {
        let nef = generator_class(cfg, nef_label(cfg)).expect("label matches kind");
        let ne = curve_cone_generators(cfg).expect("criterion holds");
        (Some(nef), Some(ne.classes))
    };
    ClassificationReport {
        kind: if special {
            Kind::Special
        } else {
            Kind::NonSpecial
        },
        reason,
        lhs,
        vol_inverse: v.vol_inverse,
        status,
        nef_divisor,
        ne_generators,
    }
}

/// Pairings of the nef divisor with each generator of the cone of curves.
pub fn nef_pairing_table(cfg: &Configuration) -> Result<Vec<(Generator, BigInt)>> {
    let ne = curve_cone_generators(cfg).map_err(|e| match e {
        Error::Failed { message, .. } => Error::new(Code::NotApplicable, message),
        other => other,
    })?;
    let nef = generator_class(cfg, nef_label(cfg))?;
    let lat = Lattice::new(cfg);
    let table: Vec<(Generator, BigInt)> = ne
        .classes
        .iter()
        .map(|c| (c.label, lat.dot(&nef, &c.class)))
        .collect();
    if let Some((g, v)) = table.iter().find(|(_, v)| v.is_negative()) {
        return Err(Error::new(
            Code::Nef,
            format!("{} . {g} = {v} < 0", nef_label(cfg)),
        ));
    }
    Ok(table)
}

/// Reports for the valuations `nu_i` defined by `E_i`, `i = 1..=n`.
pub fn sub_valuation_reports(cfg: &Configuration) -> Vec<ClassificationReport> {
    (1..=cfg.n())
        .map(|i| classify_at_infinity(&cfg.truncate(i)))
        .collect()
}

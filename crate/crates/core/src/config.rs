//! Configurations of infinitely near points on a Hirzebruch surface.
//!
//! A configuration is the ordered chain `p_1, ..., p_n` blown up to define the
//! valuation, each `p_{i+1}` lying on the exceptional divisor `E_i`. Proximity
//! is encoded purely combinatorially: `p_i` is always proximate to `p_{i-1}`
//! and, when satellite, to one earlier point `satellite_of(i)`. The fiber `F_1`,
//! the special section `M_0` and (for non-special valuations) the section `M_1`
//! are recorded by the index of the last point their strict transform passes.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Code, Error, Result, Violation};
use crate::lattice::{Curve, Lattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Special,
    General,
    None,
}

/// Index of the last configuration point on each distinguished curve (0 = none).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CurveIncidences {
    pub f1: usize,
    pub m0: usize,
    pub m1: usize,
}

/// Raw, unvalidated configuration as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub delta: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_kind: Option<FileKind>,
    pub points: Vec<PointEntry>,
    #[serde(default)]
    pub incidences: FileIncidences,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileKind {
    Special,
    General,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub satellite_of: Option<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileIncidences {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m0: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m1: Option<i64>,
}

impl ConfigFile {
    /// Convenience constructor; `satellites` lists `(i, j)` pairs meaning
    /// `satellite_of(i) = j`, 1-based.
    pub fn new(
        delta: i64,
        kind: Option<FileKind>,
        n: usize,
        satellites: &[(usize, usize)],
        f1: i64,
        m0: i64,
        m1: Option<i64>,
    ) -> Self {
        let mut points = vec![PointEntry::default(); n];
        for &(i, j) in satellites {
            points[i - 1].satellite_of = Some(j as i64);
        }
        ConfigFile {
            delta,
            point_kind: kind,
            points,
            incidences: FileIncidences {
                f1: Some(f1),
                m0: Some(m0),
                m1,
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::new(Code::Parse, e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// A validated configuration. Indices are 1-based in every public method.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    delta: u32,
    point_kind: PointKind,
    satellite_of: Vec<Option<usize>>,
    incidences: CurveIncidences,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointType {
    Free,
    Satellite,
}

/// Lower-triangular proximity matrix: 1 on the diagonal, -1 where `p_i -> p_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityMatrix {
    rows: Vec<Vec<i8>>,
}

impl ProximityMatrix {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.rows[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }
}

/// Dual graph of the exceptional divisors; vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn is_tree(&self) -> bool {
        if self.edges.len() + 1 != self.n {
            return false;
        }
        // union-find
        let mut parent: Vec<usize> = (0..=self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph dual {\n");
        for v in 1..=self.n {
            let _ = writeln!(s, "  {v} [label=\"E{v}\"];");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  {a} -- {b};");
        }
        s.push_str("}\n");
        s
    }
}

impl Configuration {
    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn delta_int(&self) -> BigInt {
        BigInt::from(self.delta)
    }

    pub fn point_kind(&self) -> PointKind {
        self.point_kind
    }

    pub fn n(&self) -> usize {
        self.satellite_of.len()
    }

    /// Whether the valuation is special (no section `M_1` is attached).
    pub fn is_special(&self) -> bool {
        self.incidences.m1 == 0
    }

    pub fn incidences(&self) -> CurveIncidences {
        self.incidences
    }

    pub fn satellite_of(&self, i: usize) -> Option<usize> {
        self.satellite_of[i - 1]
    }

    pub fn point_type(&self, i: usize) -> PointType {
        match self.satellite_of(i) {
            Some(_) => PointType::Satellite,
            None => PointType::Free,
        }
    }

    pub fn is_satellite(&self, i: usize) -> bool {
        self.point_type(i) == PointType::Satellite
    }

    /// Whether `p_i -> p_j`.
    pub fn proximate(&self, i: usize, j: usize) -> bool {
        i >= 2 && j < i && (j + 1 == i || self.satellite_of(i) == Some(j))
    }

    /// Points `p_j` with `p_i -> p_j`, ascending.
    pub fn targets(&self, i: usize) -> Vec<usize> {
        let mut t = Vec::with_capacity(2);
        if let Some(j) = self.satellite_of(i) {
            t.push(j);
        }
        if i >= 2 {
            t.push(i - 1);
        }
        t
    }

    /// Points proximate to `p_j`, ascending.
    pub fn proximates(&self, j: usize) -> Vec<usize> {
        ((j + 1)..=self.n())
            .filter(|&s| self.proximate(s, j))
            .collect()
    }

    /// Largest `j` such that `p_1, ..., p_j` are all free.
    pub fn leading_free(&self) -> usize {
        (2..=self.n())
            .find(|&i| self.is_satellite(i))
            .map_or(self.n(), |i| i - 1)
    }

    pub fn proximity_matrix(&self) -> ProximityMatrix {
        let n = self.n();
        let rows = (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| {
                        if i == j {
                            1
                        } else if self.proximate(i, j) {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        ProximityMatrix { rows }
    }

    /// Multiplicities `mult_{p_j}(phi_i)`, `j = 1..=i`, of a curvette at `E_i`,
    /// by back-substitution of the proximity equalities.
    pub fn multiplicity_vector(&self, i: usize) -> Vec<BigInt> {
        assert!(i >= 1 && i <= self.n(), "index {i} out of range");
        let mut m = vec![BigInt::zero(); i];
        m[i - 1] = BigInt::one();
        for j in (1..i).rev() {
            let mut s = BigInt::zero();
            for q in (j + 1)..=i {
                if self.proximate(q, j) {
                    s += &m[q - 1];
                }
            }
            m[j - 1] = s;
        }
        m
    }

    pub fn dual_graph(&self) -> DualGraph {
        let lat = Lattice::new(self);
        let classes: Vec<_> = (1..=self.n())
            .map(|i| {
                lat.strict_transform(Curve::E(i))
                    .expect("E_i always applies")
            })
            .collect();
        let mut edges = Vec::new();
        for i in 1..=self.n() {
            for j in (i + 1)..=self.n() {
                let p = lat
                    .pair(&classes[i - 1], &classes[j - 1])
                    .expect("same rank");
                if p.is_one() {
                    edges.push((i, j));
                }
            }
        }
        DualGraph { n: self.n(), edges }
    }

    /// The configuration of the sub-valuation defined by `E_i`.
    pub fn truncate(&self, i: usize) -> Configuration {
        assert!(i >= 1 && i <= self.n());
        let inc = self.incidences;
        let m1 = if inc.m1 >= 1 && i > self.delta as usize {
            inc.m1.min(i)
        } else {
            0
        };
        Configuration {
            delta: self.delta,
            point_kind: self.point_kind,
            satellite_of: self.satellite_of[..i].to_vec(),
            incidences: CurveIncidences {
                f1: inc.f1.min(i),
                m0: inc.m0.min(i),
                m1,
            },
        }
    }

    /// Whether the non-speciality conditions hold (general point, `p_2` off the
    /// fiber, and `p_1, ..., p_{delta+1}` free).
    pub(crate) fn nonspecial_shape(
        delta: u32,
        kind: PointKind,
        f1: usize,
        lead_free: usize,
    ) -> bool {
        delta >= 1 && kind == PointKind::General && f1 == 1 && lead_free > delta as usize
    }

    pub fn to_file(&self) -> ConfigFile {
        let kind = match self.point_kind {
            PointKind::Special => Some(FileKind::Special),
            PointKind::General => Some(FileKind::General),
            PointKind::None => None,
        };
        let points = self
            .satellite_of
            .iter()
            .map(|s| PointEntry {
                satellite_of: s.map(|j| j as i64),
            })
            .collect();
        ConfigFile {
            delta: self.delta as i64,
            point_kind: kind,
            points,
            incidences: FileIncidences {
                f1: Some(self.incidences.f1 as i64),
                m0: Some(self.incidences.m0 as i64),
                m1: Some(self.incidences.m1 as i64),
            },
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn from_json(text: &str) -> Result<Configuration> {
        validate_configuration(&ConfigFile::from_json(text)?)
    }
}

/// Check every configuration rule, collecting all violations.
pub fn validate_configuration(raw: &ConfigFile) -> Result<Configuration> {
    let mut v = Vec::new();
    let n = raw.points.len();
    if n == 0 {
        v.push(Violation::new(
            Code::Range,
            "at least one point is required",
        ));
        return Err(Error::Invalid(v));
    }
    if raw.delta < 0 {
        v.push(Violation::new(
            Code::Range,
            format!("delta = {} is negative", raw.delta),
        ));
        return Err(Error::Invalid(v));
    }
    let delta = match u32::try_from(raw.delta) {
        Ok(d) => d,
        Err(_) => {
            v.push(Violation::new(Code::Range, "delta too large"));
            return Err(Error::Invalid(v));
        }
    };
    let kind = match (delta, raw.point_kind) {
        (0, None) => PointKind::None,
        (0, Some(_)) => {
            v.push(Violation::new(
                Code::Range,
                "point_kind must be omitted when delta = 0",
            ));
            PointKind::None
        }
        (_, None) => {
            v.push(Violation::new(
                Code::Range,
                "point_kind is required when delta >= 1",
            ));
            PointKind::General
        }
        (_, Some(FileKind::Special)) => PointKind::Special,
        (_, Some(FileKind::General)) => PointKind::General,
    };

    // proximity
    let mut sats: Vec<Option<usize>> = vec![None; n];
    for (idx, p) in raw.points.iter().enumerate() {
        let i = idx + 1;
        let Some(j) = p.satellite_of else { continue };
        if i == 1 {
            v.push(Violation::new(Code::Prox, "p1 cannot be satellite"));
            continue;
        }
        if j < 1 || j as usize + 1 >= i {
            v.push(Violation::new(
                Code::Prox,
                format!("satellite_of({i}) = {j} must satisfy 1 <= j < {}", i - 1),
            ));
            continue;
        }
        let j = j as usize;
        // p_{i-1} must be proximate to p_j
        let ok = j + 2 == i || sats[i - 2] == Some(j);
        if !ok {
            v.push(Violation::new(
                Code::Prox,
                format!(
                    "satellite_of({i}) = {j} but p{} is not proximate to p{j}",
                    i - 1
                ),
            ));
            continue;
        }
        sats[idx] = Some(j);
    }
    let lead_free = (2..=n)
        .find(|&i| sats[i - 1].is_some())
        .map_or(n, |i| i - 1);

    let mut index = |name: &str, val: Option<i64>, default: i64, lo: usize| -> usize {
        let x = val.unwrap_or(default);
        if x < lo as i64 || x > n as i64 {
            v.push(Violation::new(
                Code::Range,
                format!("{name} = {x} outside [{lo}, {n}]"),
            ));
            return lo;
        }
        x as usize
    };
    let f1 = index("f1", raw.incidences.f1, 1, 1);
    let m0 = index("m0", raw.incidences.m0, 0, 0);
    let mut m1 = index("m1", raw.incidences.m1, 0, 0);

    let nonspecial = Configuration::nonspecial_shape(delta, kind, f1, lead_free);
    match raw.incidences.m1 {
        None if nonspecial => m1 = delta as usize + 1,
        _ => {}
    }
    if m1 >= 1 {
        if !nonspecial {
            v.push(Violation::new(
                Code::Incidence,
                "m1 declared but the valuation is special",
            ));
        } else if m1 <= delta as usize {
            v.push(Violation::new(
                Code::Range,
                format!("m1 = {m1} must be 0 or at least delta + 1 = {}", delta + 1),
            ));
        }
    } else if nonspecial {
        v.push(Violation::new(
            Code::Incidence,
            "non-speciality conditions hold but m1 = 0",
        ));
    }

    let needs_m0 = delta == 0 || kind == PointKind::Special;
    if needs_m0 && m0 == 0 {
        v.push(Violation::new(
            Code::Incidence,
            "M0 passes through p but m0 = 0",
        ));
    }
    if !needs_m0 && m0 != 0 {
        v.push(Violation::new(
            Code::Incidence,
            "m0 declared but p is a general point",
        ));
    }

    for (name, idx) in [("F1", f1), ("M0", m0), ("M1", m1)] {
        if idx > lead_free {
            v.push(Violation::new(
                Code::Smooth,
                format!(
                    "{name} passes through p{idx} but p{} is satellite",
                    lead_free + 1
                ),
            ));
        }
    }

    let deep = [f1, m0, m1].iter().filter(|&&x| x > 1).count();
    if deep > 1 {
        v.push(Violation::new(
            Code::Incidence,
            "F1, M0 and M1 are pairwise transversal at p; at most one may pass through p2",
        ));
    }

    if !v.is_empty() {
        return Err(Error::Invalid(v));
    }
    Ok(Configuration {
        delta,
        point_kind: kind,
        satellite_of: sats,
        incidences: CurveIncidences { f1, m0, m1 },
    })
}

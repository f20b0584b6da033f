//! Linear systems of curves of fixed bidegree through the configuration.

use num_traits::Zero;

use super::model::{blow_up, ChartCase, LocalModel};
use super::poly::{Coeff, Poly, Vars, Q};
use crate::error::{Code, Error, Result};
use crate::linalg::nullspace;

/// A coefficient that is a linear form in the unknown coefficients of a basis.
#[derive(Debug, Clone, PartialEq)]
struct LinForm(Vec<Q>);

impl Coeff for LinForm {
    fn vanishes(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    fn scaled(&self, k: &Q) -> Self {
        LinForm(self.0.iter().map(|a| a * k).collect())
    }
}

/// The sections of bidegree `(a, b)` written in both charts.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialBasis {
    pub delta: u32,
    pub bidegree: (u32, u32),
    /// Exponents `(i, j)` of `u^i v^j` in the local chart.
    pub local: Vec<(u32, u32)>,
    /// The same sections as polynomials in `(x, y)`.
    pub chart: Vec<Poly>,
}

impl MonomialBasis {
    pub fn new(case: ChartCase, delta: u32, a: u32, b: u32) -> Self {
        let mut local = Vec::new();
        let mut chart = Vec::new();
        for j in 0..=b {
            let top = match case {
                ChartCase::SS => a + delta * j,
                ChartCase::SG | ChartCase::NS => a + delta * (b - j),
            };
            for i in 0..=top {
                local.push((i, j));
                let ydeg = match case {
                    ChartCase::SS | ChartCase::NS => b - j,
                    ChartCase::SG => j,
                };
                chart.push(Poly::monomial(Vars::XY, top - i, ydeg));
            }
        }
        MonomialBasis {
            delta,
            bidegree: (a, b),
            local,
            chart,
        }
    }

    pub fn expected_len(delta: u32, a: u32, b: u32) -> u64 {
        let (d, a, b) = (u64::from(delta), u64::from(a), u64::from(b));
        (a + 1) * (b + 1) + d * b * (b + 1) / 2
    }

    pub fn len(&self) -> usize {
        self.local.len()
    }

    pub fn is_empty(&self) -> bool {
        self.local.is_empty()
    }

    /// `sum_k c_k chart_k`.
    pub fn combine(&self, coeffs: &[Q]) -> Poly {
        let mut out = Poly::zero(Vars::XY);
        for (c, p) in coeffs.iter().zip(&self.chart) {
            if !c.is_zero() {
                out = out.add(&p.scaled(c));
            }
        }
        out
    }

    /// `sum_k c_k u^i_k v^j_k`, the same section in the local chart.
    pub fn combine_local(&self, coeffs: &[Q]) -> Poly {
        Poly::from_terms(
            Vars::UV,
            coeffs.iter().zip(&self.local).map(|(c, &e)| (e, c.clone())),
        )
    }
}

/// Number of conditions imposed by multiplicities `r`.
pub fn condition_count(r: &[u32]) -> u64 {
    r.iter()
        .map(|&k| u64::from(k) * (u64::from(k) + 1) / 2)
        .sum()
}

/// Coefficient vectors (in `basis`) of the sections whose virtual transforms
/// pass through `p_k` with multiplicity at least `r_k`.
pub fn interpolate_coefficients(
    model: &LocalModel,
    basis: &MonomialBasis,
    r: &[u32],
) -> Result<Vec<Vec<Q>>> {
    let n = model.config().n();
    if r.len() > n {
        return Err(Error::new(Code::Dim, "more multiplicities than points"));
    }
    let size = basis.len();
    let mut cur: Poly<LinForm> = Poly::from_terms(
        Vars::UV,
        basis.local.iter().enumerate().map(|(k, &e)| {
            let mut v = vec![Q::zero(); size];
            v[k] = Q::from_integer(1.into());
            (e, LinForm(v))
        }),
    );
    let last = r.iter().rposition(|&k| k > 0).map_or(0, |p| p + 1);
    let mut rows = Vec::new();
    for (k, &rk) in r.iter().enumerate().take(last) {
        let mut high = Poly::zero(Vars::UV);
        for (&(i, j), c) in cur.terms() {
            if i + j < rk {
                rows.push(c.0.clone());
            } else {
                high.add_term((i, j), c);
            }
        }
        if k + 1 < last {
            cur = blow_up(&high, &model.steps()[k], rk);
        }
    }
    Ok(nullspace(&rows, size))
}

/// Basis of the chart polynomials of bidegree `(a, b)` whose profile dominates `r`.
pub fn interpolate(model: &LocalModel, bidegree: (u32, u32), r: &[u32]) -> Result<Vec<Poly>> {
    let basis = MonomialBasis::new(
        model.chart_case(),
        model.config().delta(),
        bidegree.0,
        bidegree.1,
    );
    let kernel = interpolate_coefficients(model, &basis, r)?;
    if kernel.is_empty() {
        return Err(Error::new(
            Code::Empty,
            format!("no section of bidegree {bidegree:?} with multiplicities {r:?}"),
        ));
    }
    Ok(kernel
        .iter()
        .map(|c| basis.combine(c).primitive())
        .collect())
}

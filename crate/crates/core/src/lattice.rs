//! The Picard lattice of the blown-up surface in the basis
//! `(F*, M*, E_1*, ..., E_n*)`.
//!
//! The pairing is `F*^2 = 0`, `F*.M* = 1`, `M*^2 = delta`, `E_i*.E_j* = -[i = j]`,
//! with `F*` and `M*` orthogonal to every `E_i*`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::Configuration;
use crate::error::{Code, Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PicClass {
    #[serde(with = "crate::num::big")]
    pub f: BigInt,
    #[serde(with = "crate::num::big")]
    pub m: BigInt,
    #[serde(with = "crate::num::big_vec")]
    pub e: Vec<BigInt>,
}

impl PicClass {
    pub fn zero(n: usize) -> Self {
        PicClass {
            f: BigInt::zero(),
            m: BigInt::zero(),
            e: vec![BigInt::zero(); n],
        }
    }

    pub fn f_star(n: usize) -> Self {
        PicClass {
            f: BigInt::one(),
            ..Self::zero(n)
        }
    }

    pub fn m_star(n: usize) -> Self {
        PicClass {
            m: BigInt::one(),
            ..Self::zero(n)
        }
    }

    pub fn e_star(n: usize, i: usize) -> Self {
        let mut c = Self::zero(n);
        c.e[i - 1] = BigInt::one();
        c
    }

    /// `f F* + m M* - sum_j mult_j E_j*`, padding `mult` with zeros to length `n`.
    pub fn from_degrees(n: usize, f: BigInt, m: BigInt, mult: &[BigInt]) -> Self {
        let mut e = vec![BigInt::zero(); n];
        for (slot, r) in e.iter_mut().zip(mult) {
            *slot = -r;
        }
        PicClass { f, m, e }
    }

    pub fn n(&self) -> usize {
        self.e.len()
    }

    pub fn coords(&self) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.e.len() + 2);
        v.push(self.f.clone());
        v.push(self.m.clone());
        v.extend(self.e.iter().cloned());
        v
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        PicClass {
            f: &self.f * k,
            m: &self.m * k,
            e: self.e.iter().map(|x| x * k).collect(),
        }
    }

    pub fn add(&self, other: &PicClass) -> Self {
        PicClass {
            f: &self.f + &other.f,
            m: &self.m + &other.m,
            e: self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &PicClass) -> Self {
        self.add(&other.scaled(&BigInt::from(-1)))
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(BigInt, String)> =
            vec![(self.f.clone(), "F*".into()), (self.m.clone(), "M*".into())];
        for (i, c) in self.e.iter().enumerate() {
            terms.push((c.clone(), format!("E{}*", i + 1)));
        }
        let mut first = true;
        for (c, name) in terms.into_iter().filter(|(c, _)| !c.is_zero()) {
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(out, "-")?;
                }
            } else {
                write!(out, " {sign} ")?;
            }
            if abs.is_one() {
                write!(out, "{name}")?;
            } else {
                write!(out, "{abs}{name}")?;
            }
            first = false;
        }
        if first {
            write!(out, "0")?;
        }
        Ok(())
    }
}

/// Intersection pairing for a given `delta`.
pub fn pair(delta: &BigInt, x: &PicClass, y: &PicClass) -> Result<BigInt> {
    if x.e.len() != y.e.len() {
        return Err(Error::new(
            Code::Dim,
            format!("classes of rank {} and {}", x.e.len() + 2, y.e.len() + 2),
        ));
    }
    let mut s = &x.f * &y.m + &x.m * &y.f + delta * &x.m * &y.m;
    for (a, b) in x.e.iter().zip(&y.e) {
        s -= a * b;
    }
    Ok(s)
}

/// Curves whose strict transform class can be requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Curve {
    F1,
    M0,
    M1,
    E(usize),
    /// A curve of bidegree `(d1, d2)` with multiplicities `mult` at `p_1, p_2, ...`.
    Custom {
        d1: BigInt,
        d2: BigInt,
        mult: Vec<BigInt>,
    },
}

/// The lattice of a particular configuration.
#[derive(Debug, Clone)]
pub struct Lattice<'a> {
    cfg: &'a Configuration,
    delta: BigInt,
}

impl<'a> Lattice<'a> {
    pub fn new(cfg: &'a Configuration) -> Self {
        Lattice {
            cfg,
            delta: cfg.delta_int(),
        }
    }

    pub fn n(&self) -> usize {
        self.cfg.n()
    }

    pub fn pair(&self, x: &PicClass, y: &PicClass) -> Result<BigInt> {
        if x.n() != self.n() || y.n() != self.n() {
            return Err(Error::new(
                Code::Dim,
                "class rank does not match configuration",
            ));
        }
        pair(&self.delta, x, y)
    }

    /// Pairing of two classes already known to have this lattice's rank.
    pub fn dot(&self, x: &PicClass, y: &PicClass) -> BigInt {
        self.pair(x, y)
            .expect("class rank matches the configuration")
    }

    pub fn square(&self, x: &PicClass) -> BigInt {
        self.dot(x, x)
    }

    fn chain(&self, f: BigInt, m: BigInt, last: usize) -> PicClass {
        let n = self.n();
        let mut c = PicClass::zero(n);
        c.f = f;
        c.m = m;
        for j in 0..last {
            c.e[j] = BigInt::from(-1);
        }
        c
    }

    pub fn strict_transform(&self, curve: Curve) -> Result<PicClass> {
        let n = self.n();
        let inc = self.cfg.incidences();
        match curve {
            Curve::F1 => Ok(self.chain(BigInt::one(), BigInt::zero(), inc.f1)),
            Curve::M0 => Ok(self.chain(-self.delta.clone(), BigInt::one(), inc.m0)),
            Curve::M1 => {
                if inc.m1 == 0 {
                    return Err(Error::new(
                        Code::NotApplicable,
                        "M1 is only defined for non-special valuations",
                    ));
                }
                Ok(self.chain(BigInt::zero(), BigInt::one(), inc.m1))
            }
            Curve::E(i) => {
                if i < 1 || i > n {
                    return Err(Error::new(Code::Range, format!("E{i} with n = {n}")));
                }
                let mut c = PicClass::e_star(n, i);
                for s in self.cfg.proximates(i) {
                    c.e[s - 1] = BigInt::from(-1);
                }
                Ok(c)
            }
            Curve::Custom { d1, d2, mult } => {
                if mult.len() > n {
                    return Err(Error::new(Code::Dim, "more multiplicities than points"));
                }
                Ok(PicClass::from_degrees(n, d1, d2, &mult))
            }
        }
    }

    /// `S_1(Z)`: `F1~, M0~, E_1, ..., E_n`.
    pub fn primal_special(&self) -> Vec<(String, PicClass)> {
        let mut v = vec![
            ("F1~".to_string(), self.strict_transform(Curve::F1).unwrap()),
            ("M0~".to_string(), self.strict_transform(Curve::M0).unwrap()),
        ];
        for i in 1..=self.n() {
            v.push((
                format!("E_{i}"),
                self.strict_transform(Curve::E(i)).unwrap(),
            ));
        }
        v
    }

    /// `S_2(Z)`: `F1~, M0~, M1~, E_1, ..., E_n`.
    pub fn primal_nonspecial(&self) -> Result<Vec<(String, PicClass)>> {
        let mut v = self.primal_special();
        v.insert(2, ("M1~".to_string(), self.strict_transform(Curve::M1)?));
        Ok(v)
    }

    /// The basis `{F1~, M0~, E_1, ..., E_n}` of `Pic_Q(Z)`.
    pub fn strict_basis(&self) -> Vec<PicClass> {
        self.primal_special().into_iter().map(|(_, c)| c).collect()
    }
}

/// Exact coordinates of `x` in the given basis of `n + 2` classes.
pub fn coordinates_in_basis(x: &PicClass, basis: &[PicClass]) -> Result<Vec<BigRational>> {
    let dim = x.n() + 2;
    if basis.len() != dim || basis.iter().any(|b| b.n() != x.n()) {
        return Err(Error::new(
            Code::Dim,
            format!("basis must have {dim} classes of matching rank"),
        ));
    }
    let cols: Vec<Vec<BigInt>> = basis.iter().map(PicClass::coords).collect();
    let a: Vec<Vec<BigRational>> = (0..dim)
        .map(|r| {
            cols.iter()
                .map(|c| BigRational::from_integer(c[r].clone()))
                .collect()
        })
        .collect();
    let b: Vec<BigRational> = x
        .coords()
        .into_iter()
        .map(BigRational::from_integer)
        .collect();
    linalg::solve(&a, &b).ok_or_else(|| Error::new(Code::Singular, "basis is not invertible"))
}

/// Coefficients of `M1~` in the basis `{F1~, M0~, E_1, ..., E_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct M1Expression {
    #[serde(with = "crate::num::big")]
    pub d01: BigInt,
    #[serde(with = "crate::num::big")]
    pub d02: BigInt,
    #[serde(with = "crate::num::big_vec")]
    pub d: Vec<BigInt>,
}

pub fn m1_expression(cfg: &Configuration) -> Result<M1Expression> {
    let lat = Lattice::new(cfg);
    let m1 = lat.strict_transform(Curve::M1)?;
    let coords = coordinates_in_basis(&m1, &lat.strict_basis())?;
    let mut ints = Vec::with_capacity(coords.len());
    for c in &coords {
        if !c.is_integer() {
            return Err(Error::new(
                Code::Lemma41,
                format!("non-integral coefficient {c}"),
            ));
        }
        ints.push(c.to_integer());
    }
    let delta = cfg.delta() as usize;
    let expr = M1Expression {
        d01: ints[0].clone(),
        d02: ints[1].clone(),
        d: ints[2..].to_vec(),
    };
    let dint = cfg.delta_int();
    let mut bad = Vec::new();
    if expr.d01 != dint {
        bad.push(format!("d01 = {} != delta", expr.d01));
    }
    if !expr.d02.is_one() {
        bad.push(format!("d02 = {} != 1", expr.d02));
    }
    for (k, dk) in expr.d.iter().enumerate().map(|(k, d)| (k + 1, d)) {
        if k <= delta {
            if *dk != BigInt::from(delta as i64 - k as i64) {
                bad.push(format!("d{k} = {dk} != delta - {k}"));
            }
        } else if *dk > BigInt::from(-1) {
            bad.push(format!("d{k} = {dk} > -1"));
        }
    }
    if !bad.is_empty() {
        return Err(Error::new(Code::Lemma41, bad.join(", ")));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn i(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(i(v))
    }

    #[test]
    fn basic_pairings() {
        let d = i(3);
        let f = PicClass::f_star(2);
        let m = PicClass::m_star(2);
        assert_eq!(pair(&d, &f, &m).unwrap(), i(1));
        let m0 = m.sub(&f.scaled(&d));
        assert_eq!(pair(&d, &m0, &m0).unwrap(), i(-3));
        let e1 = PicClass::e_star(2, 1);
        assert_eq!(pair(&d, &e1, &e1).unwrap(), i(-1));
        assert!(pair(&d, &e1, &PicClass::e_star(3, 1))
            .unwrap_err()
            .has(Code::Dim));
    }

    #[test]
    fn strict_transforms_of_fixtures() {
        let ex = fixtures::ex12();
        let lat = Lattice::new(&ex);
        let m1 = lat.strict_transform(Curve::M1).unwrap();
        assert_eq!(m1.to_string(), "M* - E1* - E2* - E3*");
        assert_eq!(lat.square(&m1), i(-1));

        let cusp = fixtures::cusp();
        let lat = Lattice::new(&cusp);
        assert_eq!(
            lat.strict_transform(Curve::E(1)).unwrap().to_string(),
            "E1* - E2* - E3*"
        );
        assert!(lat
            .strict_transform(Curve::M1)
            .unwrap_err()
            .has(Code::NotApplicable));

        let t1 = fixtures::t1();
        let lat = Lattice::new(&t1);
        let m0 = lat.strict_transform(Curve::M0).unwrap();
        assert_eq!(m0.to_string(), "-F* + M* - E1*");
        let f1 = lat.strict_transform(Curve::F1).unwrap();
        assert_eq!(lat.pair(&m0, &f1).unwrap(), i(0));
    }

    #[test]
    fn m0_sign_convention() {
        for cfg in fixtures::all() {
            let lat = Lattice::new(&cfg);
            let m0 = lat.strict_transform(Curve::M0).unwrap();
            assert_eq!(lat.pair(&PicClass::f_star(cfg.n()), &m0).unwrap(), i(1));
            assert_eq!(lat.pair(&PicClass::m_star(cfg.n()), &m0).unwrap(), i(0));
        }
    }

    #[test]
    fn coordinates() {
        let free2 = fixtures::free2();
        let lat = Lattice::new(&free2);
        let m1 = lat.strict_transform(Curve::M1).unwrap();
        let c = coordinates_in_basis(&m1, &lat.strict_basis()).unwrap();
        assert_eq!(c, vec![q(1), q(1), q(0), q(-1)]);
        let en = lat.strict_transform(Curve::E(2)).unwrap();
        let c = coordinates_in_basis(&en, &lat.strict_basis()).unwrap();
        assert_eq!(c, vec![q(0), q(0), q(0), q(1)]);
        let f = PicClass::f_star(2);
        let std_basis = vec![
            PicClass::f_star(2),
            PicClass::m_star(2),
            PicClass::e_star(2, 1),
            PicClass::e_star(2, 2),
        ];
        assert_eq!(
            coordinates_in_basis(&f, &std_basis).unwrap(),
            vec![q(1), q(0), q(0), q(0)]
        );
        let singular = vec![
            f.clone(),
            f.clone(),
            PicClass::e_star(2, 1),
            PicClass::e_star(2, 2),
        ];
        assert!(coordinates_in_basis(&f, &singular)
            .unwrap_err()
            .has(Code::Singular));
    }

    #[test]
    fn m1_expressions() {
        let e = m1_expression(&fixtures::free2()).unwrap();
        assert_eq!((e.d01, e.d02, e.d), (i(1), i(1), vec![i(0), i(-1)]));
        let e = m1_expression(&fixtures::ex12()).unwrap();
        assert_eq!((e.d01.clone(), e.d02.clone()), (i(2), i(1)));
        assert_eq!(&e.d[..2], &[i(1), i(0)]);
        assert!(e.d[2..].iter().all(|d| *d <= i(-1)));
        assert!(m1_expression(&fixtures::cusp())
            .unwrap_err()
            .has(Code::NotApplicable));
    }

    #[test]
    fn display_zero() {
        assert_eq!(PicClass::zero(1).to_string(), "0");
    }
}

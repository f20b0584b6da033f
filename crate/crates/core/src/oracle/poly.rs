//! Sparse bivariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Code, Error, Result};

pub type Q = BigRational;

/// Which pair of variables a polynomial is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Vars {
    /// Affine coordinates of the chart at infinity.
    XY,
    /// Local coordinates at `p`.
    UV,
}

impl Vars {
    pub fn names(self) -> (&'static str, &'static str) {
        match self {
            Vars::XY => ("x", "y"),
            Vars::UV => ("u", "v"),
        }
    }
}

/// Coefficient ring operations needed by strict-transform bookkeeping.
pub trait Coeff: Clone + PartialEq {
    fn vanishes(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn scaled(&self, k: &Q) -> Self;
}

impl Coeff for Q {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }

    fn scaled(&self, k: &Q) -> Self {
        self * k
    }
}

/// A polynomial `sum c_{ij} s^i t^j`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<C: Coeff = Q> {
    pub vars: Vars,
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero(vars: Vars) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(vars: Vars, terms: impl IntoIterator<Item = ((u32, u32), C)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn add_term(&mut self, e: (u32, u32), c: &C) {
        if c.vanishes() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                slot.add_assign(c);
                if slot.vanishes() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: (u32, u32)) -> Option<&C> {
        self.terms.get(&e)
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn degree_in(&self, first: bool) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| if first { i } else { j })
            .max()
    }

    pub fn scaled(&self, k: &Q) -> Self {
        Self::from_terms(self.vars, self.terms.iter().map(|(e, c)| (*e, c.scaled(k))))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(&-Q::one()))
    }

    /// Replace every exponent pair through `f`.
    pub fn map_exponents(&self, f: impl Fn(u32, u32) -> (u32, u32)) -> Self {
        let mut out = Self::zero(self.vars);
        for (&(i, j), c) in &self.terms {
            out.add_term(f(i, j), c);
        }
        out
    }

    /// Divide by `s^k`; every term must be divisible.
    pub fn div_first_power(&self, k: u32) -> Self {
        self.map_exponents(|i, j| {
            debug_assert!(i >= k, "term not divisible by s^{k}");
            (i - k, j)
        })
    }

    /// Substitute `t -> t + a` in the second variable.
    pub fn shift_second(&self, a: &Q) -> Self {
        if Zero::is_zero(a) {
            return self.clone();
        }
        let mut out = Self::zero(self.vars);
        for (&(i, j), c) in &self.terms {
            let mut binom = BigInt::one();
            let mut apow = Q::one();
            // c s^i (t + a)^j = sum_k C(j,k) a^(j-k) c s^i t^k
            let mut pieces = Vec::with_capacity(j as usize + 1);
            for k in (0..=j).rev() {
                pieces.push((k, Q::from_integer(binom.clone()) * &apow));
                binom = binom * BigInt::from(k) / BigInt::from(j - k + 1);
                apow *= a;
            }
            for (k, w) in pieces {
                out.add_term((i, k), &c.scaled(&w));
            }
        }
        out
    }
}

impl Poly<Q> {
    pub fn constant(vars: Vars, c: Q) -> Self {
        Self::from_terms(vars, [((0, 0), c)])
    }

    pub fn monomial(vars: Vars, i: u32, j: u32) -> Self {
        Self::from_terms(vars, [((i, j), Q::one())])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.vars);
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &other.terms {
                out.add_term((i + k, j + l), &(c * d));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.vars, Q::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Restriction to the first variable being zero: coefficients of `t^j`.
    pub fn on_second_axis(&self) -> Vec<Q> {
        let deg = self
            .terms
            .keys()
            .filter(|(i, _)| *i == 0)
            .map(|(_, j)| *j as usize)
            .max();
        let Some(deg) = deg else { return Vec::new() };
        let mut v = vec![Q::zero(); deg + 1];
        for (&(i, j), c) in &self.terms {
            if i == 0 {
                v[j as usize] = c.clone();
            }
        }
        v
    }

    pub fn with_vars(&self, vars: Vars) -> Self {
        Poly {
            vars,
            terms: self.terms.clone(),
        }
    }

    /// Scale to coprime integer coefficients with a positive leading term.
    pub fn primitive(&self) -> Self {
        use num_integer::Integer;
        let Some((_, lead)) = self.terms.iter().next_back() else {
            return self.clone();
        };
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut k = Q::new(den, BigInt::one()) / Q::from_integer(num);
        if lead.is_negative() {
            k = -k;
        }
        self.scaled(&k)
    }

    pub fn parse(text: &str, vars: Vars) -> Result<Self> {
        Parser::new(text, vars).parse()
    }
}

impl fmt::Display for Poly<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let (s, t) = self.vars.names();
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !abs.is_one() || (i == 0 && j == 0) {
                factors.push(abs.to_string());
            }
            for (name, e) in [(s, i), (t, j)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for Poly<Q> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Recursive-descent parser for `+ - * ^`, parentheses and rational literals.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vars,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, vars: Vars) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            vars,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::new(Code::Parse, format!("{msg} at position {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Poly<Q>> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly<Q>> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' {
                acc.add(&rhs)
            } else {
                acc.sub(&rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly<Q>> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = acc.mul(&rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly<Q>> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.scaled(&-Q::one()))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly<Q>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a non-negative integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Poly<Q>> {
        let (s, t) = self.vars.names();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = Q::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    value /= Q::from_integer(den);
                }
                Ok(Poly::constant(self.vars, value))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = (c as char).to_string();
                self.pos += 1;
                if self
                    .src
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric())
                {
                    return Err(self.err("unknown identifier"));
                }
                if name == s {
                    Ok(Poly::monomial(self.vars, 1, 0))
                } else if name == t {
                    Ok(Poly::monomial(self.vars, 0, 1))
                } else {
                    Err(self.err(&format!("variable '{name}' is not one of {s}, {t}")))
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

//! Truncated Laurent series over `F_p` in one variable `t`.
//!
//! A series knows its coefficients exactly for every exponent below `prec`;
//! everything below `start` is known to vanish. Exact (polynomial) series
//! carry [`EXACT`] as their precision.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::char_p::{lucas_binom, Prime};
use crate::error::{Error, Result};
use crate::series::tseries::TSeries;

/// Precision marker for series known exactly.
pub const EXACT: i64 = 1 << 60;

/// Relative precision used when inverting an exact non-monomial series.
pub const DEFAULT_REL_PREC: i64 = 64;

fn norm(prec: i64) -> i64 {
    if prec >= EXACT / 2 {
        EXACT
    } else {
        prec
    }
}

fn shift_prec(prec: i64, by: i64) -> i64 {
    if prec == EXACT {
        EXACT
    } else {
        norm(prec.saturating_add(by))
    }
}

#[derive(Debug, Clone)]
pub struct LaurentSeries {
    p: Prime,
    coeffs: BTreeMap<i64, u32>,
    start: i64,
    prec: i64,
}

/// Structural equality: same coefficients and precision. The lower bound
/// `start` is bookkeeping and is ignored.
impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.prec == other.prec && self.coeffs == other.coeffs
    }
}

impl Eq for LaurentSeries {}

/// Outcome of a windowwise comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub equal: bool,
    /// Compared exponent range `[lo, hi)`; `hi` is `None` when both sides
    /// are exact.
    pub lo: i64,
    pub hi: Option<i64>,
    /// Lowest exponent where the two sides differ.
    pub first_mismatch: Option<i64>,
}

impl LaurentSeries {
    /// The zero series known on `[start, prec)`.
    pub fn zero_window(p: Prime, start: i64, prec: i64) -> Self {
        LaurentSeries { p, coeffs: BTreeMap::new(), start: start.min(prec), prec: norm(prec) }
    }

    pub fn zero(p: Prime) -> Self {
        LaurentSeries::zero_window(p, 0, EXACT)
    }

    pub fn one(p: Prime) -> Self {
        LaurentSeries::monomial(p, 1, 0)
    }

    pub fn monomial(p: Prime, c: u32, e: i64) -> Self {
        LaurentSeries::exact(p, [(e, c)])
    }

    /// An exact Laurent polynomial.
    pub fn exact<I: IntoIterator<Item = (i64, u32)>>(p: Prime, terms: I) -> Self {
        let mut s = LaurentSeries::zero_window(p, 0, EXACT);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s.start = s.coeffs.keys().next().copied().unwrap_or(0).min(0);
        s
    }

    /// Terms on an explicit window; terms at or beyond `prec` are dropped and
    /// `start` is lowered to cover every supplied term.
    pub fn from_terms<I: IntoIterator<Item = (i64, u32)>>(
        p: Prime,
        terms: I,
        start: i64,
        prec: i64,
    ) -> Self {
        let mut s = LaurentSeries::zero_window(p, start, prec);
        for (e, c) in terms {
            if e < s.prec {
                s.add_term(e, c);
            }
        }
        if let Some(&lo) = s.coeffs.keys().next() {
            s.start = s.start.min(lo);
        }
        s
    }

    fn add_term(&mut self, e: i64, c: u32) {
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert(0);
        *entry = self.p.add(*entry, c);
        if *entry == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    pub fn window(&self) -> (i64, i64) {
        (self.start, self.prec)
    }

    pub fn coeff(&self, e: i64) -> u32 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Exponent below which the series is known to vanish.
    fn effective_valuation(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    /// Narrow the window to `[start, prec)` (never widening it).
    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        let mut s = self.clone();
        s.coeffs.retain(|&e, _| e < prec);
        s.prec = norm(prec);
        s.start = s.start.min(s.prec);
        s
    }

    pub fn with_start(mut self, start: i64) -> Self {
        let lo = self.valuation().unwrap_or(start);
        self.start = start.min(lo);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut s = LaurentSeries::zero_window(self.p, self.start.min(other.start), prec);
        for (e, c) in self.terms().chain(other.terms()) {
            if e < prec {
                s.add_term(e, c);
            }
        }
        s
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.values_mut() {
            *c = self.p.neg(*c);
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Self {
        let c = c % self.p.get();
        let mut s = self.clone();
        if c == 0 {
            s.coeffs.clear();
            return s;
        }
        for v in s.coeffs.values_mut() {
            *v = self.p.mul(*v, c);
        }
        s
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            p: self.p,
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
            start: self.start + k,
            prec: shift_prec(self.prec, k),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = norm(
            shift_prec(other.prec, self.effective_valuation())
                .min(shift_prec(self.prec, other.effective_valuation())),
        );
        let mut acc: BTreeMap<i64, u64> = BTreeMap::new();
        let p = self.p.get() as u64;
        for (&ea, &ca) in &self.coeffs {
            for (&eb, &cb) in &other.coeffs {
                let e = ea + eb;
                if e >= prec {
                    break;
                }
                let slot = acc.entry(e).or_insert(0);
                *slot = (*slot + ca as u64 * cb as u64) % p;
            }
        }
        LaurentSeries {
            p: self.p,
            coeffs: acc.into_iter().filter(|&(_, c)| c != 0).map(|(e, c)| (e, c as u32)).collect(),
            start: (self.start + other.start).min(prec),
            prec,
        }
    }

    /// Multiplicative inverse. Exact monomials invert exactly; other exact
    /// series are inverted to [`DEFAULT_REL_PREC`] relative precision.
    pub fn inv(&self) -> Result<Self> {
        let rel = if self.is_exact() { DEFAULT_REL_PREC } else { self.prec - self.valuation().unwrap_or(self.prec) };
        self.inv_to(rel)
    }

    /// Inverse with the given relative precision (capped by the input's own).
    pub fn inv_to(&self, rel: i64) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::NotInvertible(format!("{self} has no known nonzero term")))?;
        let lead = self.coeff(v);
        let lead_inv = self.p.inv(lead).expect("stored coefficients are nonzero");
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(LaurentSeries::monomial(self.p, lead_inv, -v));
        }
        let rel = if self.is_exact() { rel } else { rel.min(self.prec - v) };
        if rel <= 0 {
            return Err(Error::Precision(format!("cannot invert {self}: no relative precision")));
        }
        let n = rel as usize;
        let mut x = vec![0u32; n];
        for (e, c) in self.terms() {
            let k = (e - v) as usize;
            if k < n {
                x[k] = c;
            }
        }
        let p = self.p;
        let mut y = vec![0u32; n];
        y[0] = lead_inv;
        for k in 1..n {
            let mut acc = 0u32;
            for j in 1..=k {
                if x[j] != 0 && y[k - j] != 0 {
                    acc = p.add(acc, p.mul(x[j], y[k - j]));
                }
            }
            y[k] = p.neg(p.mul(acc, lead_inv));
        }
        Ok(LaurentSeries::from_terms(
            p,
            y.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c)),
            -v,
            -v + rel,
        ))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = LaurentSeries::one(self.p);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// `theta^{(n)}` for the standard derivation `theta(t) = t + T`, applied
    /// termwise.
    pub fn theta_n(&self, n: u64) -> Self {
        let mut s = LaurentSeries::zero_window(
            self.p,
            self.start - n as i64,
            shift_prec(self.prec, -(n as i64)),
        );
        for (e, c) in self.terms() {
            s.add_term(e - n as i64, self.p.mul(c, lucas_binom(self.p, e, n)));
        }
        s
    }

    /// `theta(x)` truncated at T-order `order`.
    pub fn theta(&self, order: u64) -> Result<TSeries<LaurentSeries>> {
        let mut out = TSeries::new(1, order);
        for n in 0..=order {
            let d = self.theta_n(n);
            if !d.is_exact() && d.prec <= d.start && !self.is_zero() {
                return Err(Error::Precision(format!(
                    "theta^({n}) leaves an empty window for {self}"
                )));
            }
            out.set_uni(n, d);
        }
        Ok(out)
    }

    /// Exponents multiplied by `p^ell` (coefficients are fixed by Frobenius
    /// on the prime field).
    pub fn frobenius_power(&self, ell: u32) -> Self {
        let q = self.p.power(ell);
        LaurentSeries {
            p: self.p,
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e * q, c)).collect(),
            start: self.start.saturating_mul(q),
            prec: if self.is_exact() { EXACT } else { norm(self.prec.saturating_mul(q)) },
        }
    }

    /// The `p^ell`-th root: exponents divided by `p^ell`.
    pub fn p_power_root(&self, ell: u32) -> Result<Self> {
        let q = self.p.power(ell);
        if let Some((&e, _)) = self.coeffs.iter().find(|(&e, _)| e.rem_euclid(q) != 0) {
            return Err(Error::NotPPower { ell, exponent: e, modulus: q });
        }
        Ok(LaurentSeries {
            p: self.p,
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e / q, c)).collect(),
            start: self.start.div_euclid(q),
            prec: if self.is_exact() { EXACT } else { norm(ceil_div(self.prec, q)) },
        })
    }

    /// Windowwise comparison on `[min start, min prec)`.
    pub fn compare(&self, other: &Self) -> Result<Comparison> {
        let lo = self.start.min(other.start);
        let hi = self.prec.min(other.prec);
        if hi <= lo {
            return Err(Error::Incomparable { lo, hi });
        }
        let diff = self.sub(other);
        let first_mismatch = diff.valuation();
        Ok(Comparison {
            equal: first_mismatch.is_none(),
            lo,
            hi: if hi == EXACT { None } else { Some(hi) },
            first_mismatch,
        })
    }

    /// Evaluate a Laurent polynomial at `t = 0`; errors on a pole.
    pub fn constant_term(&self) -> u32 {
        self.coeff(0)
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// `c * lucas_binom(a, n) * t^(a - n)`.
pub fn theta_term(p: Prime, c: u32, a: i64, n: u64) -> LaurentSeries {
    LaurentSeries::monomial(p, p.mul(c, lucas_binom(p, a, n)), a - n as i64)
}

/// Windowwise equality of two series.
pub fn series_equal(x: &LaurentSeries, y: &LaurentSeries) -> Result<Comparison> {
    x.compare(y)
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (e, c)) in self.terms().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "{c}*t^{e}")?;
            }
        }
        if !self.is_exact() {
            write!(f, " + O(t^{})", self.prec)?;
        }
        Ok(())
    }
}

/// JSON form `{"terms": [[e, c], ...], "window": [v, prec]}`; the window is
/// omitted for exact series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub terms: Vec<(i64, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
}

impl LaurentSeries {
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            terms: self.terms().collect(),
            window: if self.is_exact() { None } else { Some((self.start, self.prec)) },
        }
    }

    pub fn from_json(p: Prime, j: &SeriesJson) -> Self {
        match j.window {
            Some((v, prec)) => LaurentSeries::from_terms(p, j.terms.iter().copied(), v, prec),
            None => LaurentSeries::exact(p, j.terms.iter().copied()),
        }
    }
}

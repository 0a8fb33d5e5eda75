//! Exact Laurent polynomials in several generators over `F_p`.

use std::collections::BTreeMap;
use std::fmt;

use crate::char_p::Prime;
use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::series::laurent::LaurentSeries;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly {
    p: Prime,
    nvars: usize,
    terms: BTreeMap<Vec<i64>, u32>,
}

impl Poly {
    pub fn zero(p: Prime, nvars: usize) -> Self {
        Poly { p, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(p: Prime, nvars: usize, c: u32) -> Self {
        Poly::monomial(p, c, vec![0; nvars])
    }

    pub fn monomial(p: Prime, c: u32, exps: Vec<i64>) -> Self {
        let nvars = exps.len();
        let mut s = Poly::zero(p, nvars);
        s.add_term(exps, c);
        s
    }

    pub fn var(p: Prime, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(p, 1, e)
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i64>, u32)>>(p: Prime, nvars: usize, terms: I) -> Self {
        let mut s = Poly::zero(p, nvars);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn add_term(&mut self, exps: Vec<i64>, c: u32) {
        debug_assert_eq!(exps.len(), self.nvars);
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(exps).or_insert(0);
        *slot = self.p.add(*slot, c);
        if *slot == 0 {
            let key: Vec<Vec<i64>> =
                self.terms.iter().filter(|(_, &v)| v == 0).map(|(k, _)| k.clone()).collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, u32)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[i64]) -> u32 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant coefficient when the polynomial lies in `K`.
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (e, &c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then_some(c)
            }
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (e, c) in other.terms() {
            s.add_term(e.clone(), c);
        }
        s
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = self.p.neg(*c);
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Self {
        let c = c % self.p.get();
        if c == 0 {
            return Poly::zero(self.p, self.nvars);
        }
        let mut s = self.clone();
        for v in s.terms.values_mut() {
            *v = self.p.mul(*v, c);
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
        let p = self.p.get() as u64;
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let slot = acc.entry(e).or_insert(0);
                *slot = (*slot + ca as u64 * cb as u64) % p;
            }
        }
        Poly {
            p: self.p,
            nvars: self.nvars,
            terms: acc.into_iter().filter(|&(_, c)| c != 0).map(|(e, c)| (e, c as u32)).collect(),
        }
    }

    /// Multiply by the monomial `x^exps`.
    pub fn shift(&self, exps: &[i64]) -> Self {
        Poly {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), c))
                .collect(),
        }
    }

    /// Inverse; only monomials are units.
    pub fn inv(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::NotInvertible(format!("{self} is not a monomial")));
        }
        let (e, &c) = self.terms.iter().next().unwrap();
        Ok(Poly::monomial(self.p, self.p.inv(c).unwrap(), e.iter().map(|x| -x).collect()))
    }

    /// Total degree in the listed variables, over the support.
    pub fn max_degree_in(&self, vars: &[usize]) -> Option<i64> {
        self.terms.keys().map(|e| vars.iter().map(|&i| e[i]).sum()).max()
    }

    /// Substitute a series realization for every generator.
    pub fn evaluate(&self, values: &[LaurentSeries]) -> Result<LaurentSeries> {
        if values.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "{} realizations for {} generators",
                values.len(),
                self.nvars
            )));
        }
        let mut acc = LaurentSeries::zero(self.p);
        let mut cache: BTreeMap<(usize, i64), LaurentSeries> = BTreeMap::new();
        for (e, c) in self.terms() {
            let mut term = LaurentSeries::monomial(self.p, c, 0);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = match cache.get(&(i, k)) {
                    Some(s) => s.clone(),
                    None => {
                        let s = values[i].pow(k)?;
                        cache.insert((i, k), s.clone());
                        s
                    }
                };
                term = term.mul(&pw);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let mut s = format!("{c}");
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    s.push_str(&format!("*{name}^{k}"));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

/// Arithmetic on [`Poly`] with a fixed number of generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyRing {
    pub p: Prime,
    pub nvars: usize,
}

impl Ring for PolyRing {
    type Elem = Poly;

    fn prime(&self) -> Prime {
        self.p
    }
    fn zero(&self) -> Poly {
        Poly::zero(self.p, self.nvars)
    }
    fn one(&self) -> Poly {
        Poly::constant(self.p, self.nvars, 1)
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }
    fn neg(&self, a: &Poly) -> Poly {
        a.neg()
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b)
    }
    fn scale(&self, c: u32, a: &Poly) -> Poly {
        a.scale(c)
    }
    fn inv(&self, a: &Poly) -> Result<Poly> {
        a.inv()
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn show(&self, a: &Poly) -> String {
        a.to_string()
    }
}

/// Arithmetic on truncated Laurent series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesRing {
    pub p: Prime,
}

impl Ring for SeriesRing {
    type Elem = LaurentSeries;

    fn prime(&self) -> Prime {
        self.p
    }
    fn zero(&self) -> LaurentSeries {
        LaurentSeries::zero(self.p)
    }
    fn one(&self) -> LaurentSeries {
        LaurentSeries::one(self.p)
    }
    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.add(b)
    }
    fn neg(&self, a: &LaurentSeries) -> LaurentSeries {
        a.neg()
    }
    fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.mul(b)
    }
    fn scale(&self, c: u32, a: &LaurentSeries) -> LaurentSeries {
        a.scale(c)
    }
    fn inv(&self, a: &LaurentSeries) -> Result<LaurentSeries> {
        a.inv()
    }
    fn is_zero(&self, a: &LaurentSeries) -> bool {
        a.is_zero()
    }
    fn show(&self, a: &LaurentSeries) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_evaluation() {
        let p = Prime::new(3).unwrap();
        let x = Poly::var(p, 2, 0);
        let y = Poly::var(p, 2, 1);
        let s = x.add(&y);
        let cube = s.mul(&s).mul(&s);
        // (x + y)^3 = x^3 + y^3 in characteristic 3
        assert_eq!(cube, Poly::from_terms(p, 2, [(vec![3, 0], 1), (vec![0, 3], 1)]));
        let vals = [LaurentSeries::monomial(p, 1, 1), LaurentSeries::monomial(p, 2, -1)];
        let v = s.evaluate(&vals).unwrap();
        assert_eq!(v, LaurentSeries::exact(p, [(1, 1), (-1, 2)]));
        assert!(x.add(&y).inv().is_err());
        assert_eq!(x.inv().unwrap().mul(&x), Poly::constant(p, 2, 1));
    }
}

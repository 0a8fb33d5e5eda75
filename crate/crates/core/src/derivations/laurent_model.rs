//! `K((t))` with the standard derivation `theta(t) = t + T`, or the trivial one.

use std::collections::BTreeMap;

use crate::char_p::{MultiIndex, Prime};
use crate::error::{Error, Result};
use crate::ring::{IdRing, Ring};
use crate::series::laurent::LaurentSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LaurentModel {
    p: Prime,
    trivial: bool,
}

impl LaurentModel {
    pub fn standard(p: Prime) -> Self {
        LaurentModel { p, trivial: false }
    }

    /// `theta(x) = x`: every element is a constant.
    pub fn trivial(p: Prime) -> Self {
        LaurentModel { p, trivial: true }
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    pub fn t(&self) -> LaurentSeries {
        LaurentSeries::monomial(self.p, 1, 1)
    }
}

impl Ring for LaurentModel {
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

impl IdRing for LaurentModel {
    fn nvars(&self) -> usize {
        1
    }

    fn theta(&self, x: &LaurentSeries, k: &MultiIndex) -> Result<LaurentSeries> {
        if k.len() != 1 {
            return Err(Error::LengthMismatch(k.len(), 1));
        }
        let n = k.0[0];
        if n == 0 {
            return Ok(x.clone());
        }
        if self.trivial {
            return Ok(LaurentSeries::zero(self.p));
        }
        Ok(x.theta_n(n))
    }

    fn coords(&self, x: &LaurentSeries) -> Result<BTreeMap<Vec<i64>, u32>> {
        Ok(x.terms().map(|(e, c)| (vec![e], c)).collect())
    }

    fn generators(&self) -> Vec<LaurentSeries> {
        vec![self.t()]
    }

    fn samples(&self) -> Vec<LaurentSeries> {
        let p = self.p;
        let mut out: Vec<LaurentSeries> =
            (-4..=8).map(|a| LaurentSeries::monomial(p, 1, a)).collect();
        out.push(LaurentSeries::exact(p, [(0, 1), (1, 1), (3, 1)]));
        out.push(LaurentSeries::exact(p, [(-1, 1), (2, p.neg(1))]));
        out
    }
}

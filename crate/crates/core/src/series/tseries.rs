//! Power series in `T_1..T_m` over a ring, truncated at total degree `order`.

use std::collections::BTreeMap;

use crate::char_p::MultiIndex;
use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq)]
pub struct TSeries<C> {
    m: usize,
    order: u64,
    coeffs: BTreeMap<MultiIndex, C>,
}

impl<C: Clone> TSeries<C> {
    pub fn new(m: usize, order: u64) -> Self {
        TSeries { m, order, coeffs: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn set(&mut self, k: MultiIndex, c: C) {
        debug_assert_eq!(k.len(), self.m);
        if k.total() <= self.order {
            self.coeffs.insert(k, c);
        }
    }

    pub fn get(&self, k: &MultiIndex) -> Option<&C> {
        self.coeffs.get(k)
    }

    pub fn set_uni(&mut self, n: u64, c: C) {
        self.set(MultiIndex::uni(n), c)
    }

    pub fn get_uni(&self, n: u64) -> Option<&C> {
        self.coeffs.get(&MultiIndex::uni(n))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.coeffs.iter()
    }

    pub fn map<D: Clone, F: FnMut(&C) -> D>(&self, mut f: F) -> TSeries<D> {
        TSeries {
            m: self.m,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), f(c))).collect(),
        }
    }

    pub fn try_map<D: Clone, F: FnMut(&C) -> Result<D>>(&self, mut f: F) -> Result<TSeries<D>> {
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            coeffs.insert(k.clone(), f(c)?);
        }
        Ok(TSeries { m: self.m, order: self.order, coeffs })
    }

    pub fn truncate(&self, order: u64) -> Self {
        TSeries {
            m: self.m,
            order: order.min(self.order),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| k.total() <= order)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }
}

impl<C: Clone> TSeries<C> {
    /// Coefficient at `k`, or the ring's zero.
    pub fn coeff<R: Ring<Elem = C>>(&self, ring: &R, k: &MultiIndex) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn constant<R: Ring<Elem = C>>(ring: &R, m: usize, order: u64, c: C) -> Self {
        let _ = ring;
        let mut s = TSeries::new(m, order);
        s.set(MultiIndex::zero(m), c);
        s
    }

    pub fn add<R: Ring<Elem = C>>(&self, ring: &R, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = TSeries::new(self.m, order);
        for k in MultiIndex::up_to_total(self.m, order) {
            match (self.coeffs.get(&k), other.coeffs.get(&k)) {
                (Some(a), Some(b)) => out.set(k, ring.add(a, b)),
                (Some(a), None) => out.set(k, a.clone()),
                (None, Some(b)) => out.set(k, b.clone()),
                (None, None) => {}
            }
        }
        out
    }

    pub fn mul<R: Ring<Elem = C>>(&self, ring: &R, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut acc: BTreeMap<MultiIndex, C> = BTreeMap::new();
        for (ka, a) in &self.coeffs {
            for (kb, b) in &other.coeffs {
                let k = ka.add(kb);
                if k.total() > order {
                    continue;
                }
                let term = ring.mul(a, b);
                match acc.get_mut(&k) {
                    Some(slot) => *slot = ring.add(slot, &term),
                    None => {
                        acc.insert(k, term);
                    }
                }
            }
        }
        TSeries { m: self.m, order, coeffs: acc }
    }

    /// Inverse in `R[[T]]`; requires an invertible constant term.
    pub fn inverse<R: Ring<Elem = C>>(&self, ring: &R) -> Result<Self> {
        let zero = MultiIndex::zero(self.m);
        let c0 = self
            .coeffs
            .get(&zero)
            .ok_or_else(|| Error::NotInvertible("T-series with zero constant term".into()))?;
        let c0_inv = ring.inv(c0)?;
        let mut out: TSeries<C> = TSeries::new(self.m, self.order);
        out.set(zero.clone(), c0_inv.clone());
        for k in MultiIndex::up_to_total(self.m, self.order).into_iter().skip(1) {
            // sum_{i + j = k, i != 0} a_i b_j = -a_0 b_k
            let mut acc = ring.zero();
            for (i, j) in k.splittings() {
                if i.is_zero() {
                    continue;
                }
                if let (Some(a), Some(b)) = (self.coeffs.get(&i), out.coeffs.get(&j)) {
                    acc = ring.add(&acc, &ring.mul(a, b));
                }
            }
            let bk = ring.neg(&ring.mul(&c0_inv, &acc));
            out.set(k, bk);
        }
        Ok(out)
    }

    pub fn pow<R: Ring<Elem = C>>(&self, ring: &R, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse(ring)? } else { self.clone() };
        let mut acc = TSeries::constant(ring, self.m, self.order, ring.one());
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ring, &b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(ring, &b);
            }
        }
        Ok(acc)
    }
}

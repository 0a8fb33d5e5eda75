//! Ring and iterative-derivation interfaces shared by every model.

use std::collections::BTreeMap;
use std::fmt;

use crate::char_p::{MultiIndex, Prime};
use crate::error::Result;

/// Commutative ring operations over a prime field `K = F_p`.
pub trait Ring {
    type Elem: Clone + fmt::Debug;

    fn prime(&self) -> Prime;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: u32, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Zero test on whatever is known of `a` (its precision window for
    /// truncated realizations).
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn show(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    fn constant(&self, c: u32) -> Self::Elem {
        self.scale(c, &self.one())
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// An m-variate iterative derivation `theta: R -> R[[T_1..T_m]]`, presented
/// through its coefficient maps `theta^{(k)}`.
pub trait IdRing: Ring {
    /// Number of derivation variables `m`.
    fn nvars(&self) -> usize;

    /// `theta^{(k)}(x)`.
    fn theta(&self, x: &Self::Elem, k: &MultiIndex) -> Result<Self::Elem>;

    /// K-linear coordinates of `x` (monomial or exponent keyed), used by the
    /// kernel and span computations.
    fn coords(&self, x: &Self::Elem) -> Result<BTreeMap<Vec<i64>, u32>>;

    /// The ring generators as elements.
    fn generators(&self) -> Vec<Self::Elem>;

    /// A finite spanning set of test elements for axiom sweeps.
    fn samples(&self) -> Vec<Self::Elem>;

    /// Largest total order for which `theta` is defined, if bounded.
    fn max_order(&self) -> Option<u64> {
        None
    }

    /// Univariate shorthand for `theta^{(n)}` on `m = 1` models.
    fn theta_n(&self, x: &Self::Elem, n: u64) -> Result<Self::Elem> {
        self.theta(x, &MultiIndex::uni(n))
    }
}

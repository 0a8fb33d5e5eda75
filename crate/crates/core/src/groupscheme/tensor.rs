//! `E (x)_F E` and `E (x)_F E (x)_F E` in the fixed basis `g^I`, `I < q`.
//!
//! A tensor is a map from one residue vector per leg to an F-coefficient;
//! the coefficient is carried on the first leg.

use std::collections::BTreeMap;
use std::fmt;

use crate::char_p::Prime;
use crate::error::{Error, Result};
use crate::linalg;
use crate::ring::{IdRing, Ring};
use crate::series::poly::Poly;
use crate::towers::Bracket;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    legs: usize,
    terms: BTreeMap<Vec<Vec<i64>>, Poly>,
}

impl Tensor {
    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Vec<i64>>, &Poly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[Vec<i64>]) -> Option<&Poly> {
        self.terms.get(key)
    }

    fn push(&mut self, key: Vec<Vec<i64>>, c: Poly) {
        let next = match self.terms.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !next.is_zero() {
            self.terms.insert(key, next);
        }
    }
}

/// Tensor powers of a bracket extension over its base field.
#[derive(Debug, Clone)]
pub struct TensorSpace {
    ext: Bracket,
}

impl TensorSpace {
    pub fn new(ext: Bracket) -> Self {
        TensorSpace { ext }
    }

    pub fn ext(&self) -> &Bracket {
        &self.ext
    }

    pub fn prime(&self) -> Prime {
        self.ext.prime()
    }

    fn nvars(&self) -> usize {
        self.ext.rank() + 1
    }

    pub fn zero(&self, legs: usize) -> Tensor {
        Tensor { legs, terms: BTreeMap::new() }
    }

    pub fn one(&self, legs: usize) -> Tensor {
        let m = &self.ext.model;
        self.pure(&vec![m.one(); legs])
    }

    /// `x_1 (x) x_2 (x) ...`, normalized.
    pub fn pure(&self, factors: &[Poly]) -> Tensor {
        let mut out = self.zero(factors.len());
        let parts: Vec<BTreeMap<Vec<i64>, Poly>> = factors.iter().map(|x| self.ext.split(x)).collect();
        let mut acc: Vec<(Vec<Vec<i64>>, Poly)> = vec![(Vec::new(), self.ext.model.one())];
        for part in &parts {
            let mut next = Vec::new();
            for (key, c) in &acc {
                for (r, f) in part {
                    let mut k = key.clone();
                    k.push(r.clone());
                    next.push((k, c.mul(f)));
                }
            }
            acc = next;
        }
        for (k, c) in acc {
            out.push(k, c);
        }
        out
    }

    /// `g^I (x) g^J (x) ...` from residue vectors.
    pub fn basis_tensor(&self, key: &[Vec<i64>]) -> Tensor {
        let factors: Vec<Poly> = key.iter().map(|r| self.ext.residue_monomial(r)).collect();
        self.pure(&factors)
    }

    pub fn add(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let mut out = a.clone();
        for (k, c) in &b.terms {
            out.push(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self, a: &Tensor) -> Tensor {
        Tensor { legs: a.legs, terms: a.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, a: &Tensor, b: &Tensor) -> Tensor {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: u32, a: &Tensor) -> Tensor {
        let mut out = self.zero(a.legs);
        for (k, x) in &a.terms {
            out.push(k.clone(), x.scale(c));
        }
        out
    }

    /// Multiply by an element of `F` (on the first leg).
    pub fn scale_base(&self, f: &Poly, a: &Tensor) -> Result<Tensor> {
        if !self.ext.in_base(f) {
            return Err(Error::NotInBasis(format!("{} is not in the base field", self.ext.model.display(f))));
        }
        let mut out = self.zero(a.legs);
        for (k, x) in &a.terms {
            out.push(k.clone(), x.mul(f));
        }
        Ok(out)
    }

    /// The legs of one basis term, coefficient on the first.
    fn term_factors(&self, key: &[Vec<i64>], c: &Poly) -> Vec<Poly> {
        key.iter()
            .enumerate()
            .map(|(i, r)| {
                let g = self.ext.residue_monomial(r);
                if i == 0 {
                    c.mul(&g)
                } else {
                    g
                }
            })
            .collect()
    }

    pub fn mul(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let mut out = self.zero(a.legs);
        for (ka, ca) in &a.terms {
            let fa = self.term_factors(ka, ca);
            for (kb, cb) in &b.terms {
                let fb = self.term_factors(kb, cb);
                let prod: Vec<Poly> = fa.iter().zip(&fb).map(|(x, y)| x.mul(y)).collect();
                out = self.add(&out, &self.pure(&prod));
            }
        }
        out
    }

    pub fn pow(&self, a: &Tensor, e: u64) -> Tensor {
        let mut acc = self.one(a.legs);
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// `theta^(n)(x_1 (x) .. (x) x_d) = sum_{a_1+..+a_d=n} theta^(a_1)(x_1) (x) ..`.
    pub fn theta(&self, x: &Tensor, n: u64) -> Result<Tensor> {
        let model = &self.ext.model;
        let mut out = self.zero(x.legs);
        for (key, c) in &x.terms {
            let factors = self.term_factors(key, c);
            let mut derived: Vec<Vec<Poly>> = Vec::with_capacity(factors.len());
            for f in &factors {
                derived.push((0..=n).map(|a| model.theta_n(f, a)).collect::<Result<_>>()?);
            }
            for parts in compositions(n, x.legs) {
                let legs: Vec<Poly> = parts.iter().zip(&derived).map(|(&a, d)| d[a as usize].clone()).collect();
                if legs.iter().any(Poly::is_zero) {
                    continue;
                }
                out = self.add(&out, &self.pure(&legs));
            }
        }
        Ok(out)
    }

    /// `[theta^(0)(x), .., theta^(order)(x)]`, sharing the leg derivatives.
    pub fn theta_upto(&self, x: &Tensor, order: u64) -> Result<Vec<Tensor>> {
        let model = &self.ext.model;
        let mut out = vec![self.zero(x.legs); order as usize + 1];
        for (key, c) in &x.terms {
            let factors = self.term_factors(key, c);
            let mut derived: Vec<Vec<Poly>> = Vec::with_capacity(factors.len());
            for f in &factors {
                derived.push((0..=order).map(|a| model.theta_n(f, a)).collect::<Result<_>>()?);
            }
            for (n, slot) in out.iter_mut().enumerate() {
                for parts in compositions(n as u64, x.legs) {
                    let legs: Vec<Poly> = parts.iter().zip(&derived).map(|(&a, d)| d[a as usize].clone()).collect();
                    if legs.iter().any(Poly::is_zero) {
                        continue;
                    }
                    *slot = self.add(slot, &self.pure(&legs));
                }
            }
        }
        Ok(out)
    }

    /// `theta^(n)(x) = 0` for `1 <= n <= order`; returns the first failing `n`.
    pub fn first_nonconstant_order(&self, x: &Tensor, order: u64) -> Result<Option<u64>> {
        for n in 1..=order {
            if !self.theta(x, n)?.is_zero() {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// `a (x) b -> a (x) 1 (x) b`.
    pub fn middle_insertion(&self, x: &Tensor) -> Result<Tensor> {
        if x.legs != 2 {
            return Err(Error::Dimension(format!("middle insertion needs 2 legs, got {}", x.legs)));
        }
        let zero = vec![0i64; self.ext.rank()];
        let mut out = self.zero(3);
        for (k, c) in &x.terms {
            out.push(vec![k[0].clone(), zero.clone(), k[1].clone()], c.clone());
        }
        Ok(out)
    }

    /// `(a (x) b) * (a' (x) b') = a (x) b a' (x) b'`.
    pub fn pairing(&self, x: &Tensor, y: &Tensor) -> Result<Tensor> {
        if x.legs != 2 || y.legs != 2 {
            return Err(Error::Dimension("pairing needs two 2-leg tensors".into()));
        }
        let mut out = self.zero(3);
        for (kx, cx) in &x.terms {
            let fx = self.term_factors(kx, cx);
            for (ky, cy) in &y.terms {
                let fy = self.term_factors(ky, cy);
                out = self.add(&out, &self.pure(&[fx[0].clone(), fx[1].mul(&fy[0]), fy[1].clone()]));
            }
        }
        Ok(out)
    }

    /// `a (x) b -> a b`.
    pub fn counit(&self, x: &Tensor) -> Poly {
        let mut acc = Poly::zero(self.prime(), self.nvars());
        for (k, c) in &x.terms {
            let prod = self.term_factors(k, c).into_iter().fold(self.ext.model.one(), |a, b| a.mul(&b));
            acc = acc.add(&prod);
        }
        acc
    }

    /// K-coordinates: residues of every leg followed by the coefficient's
    /// exponent vector.
    pub fn coords(&self, x: &Tensor) -> BTreeMap<Vec<i64>, u32> {
        let mut out = BTreeMap::new();
        for (k, c) in &x.terms {
            for (e, v) in c.terms() {
                let mut key: Vec<i64> = k.iter().flatten().copied().collect();
                key.extend_from_slice(e);
                out.insert(key, v);
            }
        }
        out
    }

    pub fn combine(&self, coeffs: &[u32], xs: &[Tensor], legs: usize) -> Tensor {
        let mut out = self.zero(legs);
        for (&c, x) in coeffs.iter().zip(xs) {
            if c != 0 {
                out = self.add(&out, &self.scale(c, x));
            }
        }
        out
    }

    pub fn display(&self, x: &Tensor) -> String {
        if x.terms.is_empty() {
            return "0".into();
        }
        let m = &self.ext.model;
        x.terms
            .iter()
            .map(|(k, c)| {
                let legs: Vec<String> = k.iter().map(|r| m.display(&self.ext.residue_monomial(r))).collect();
                format!("({})*[{}]", m.display(c), legs.join(" # "))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `t^k b_I (x) b_J` for `k` in `tdeg` and all basis pairs.
    pub fn pair_ansatz(&self, tdeg: std::ops::RangeInclusive<i64>) -> Vec<Tensor> {
        let p = self.prime();
        let basis = self.ext.basis_residues();
        let mut out = Vec::new();
        for k in tdeg {
            let mut e = vec![0i64; self.nvars()];
            e[0] = k;
            let tk = Poly::monomial(p, 1, e);
            for i in &basis {
                for j in &basis {
                    let b = self.basis_tensor(&[i.clone(), j.clone()]);
                    out.push(self.mul(&self.pure(&[tk.clone(), self.ext.model.one()]), &b));
                }
            }
        }
        out
    }
}

/// All `(a_1..a_d)` with sum `n`.
fn compositions(n: u64, d: usize) -> Vec<Vec<u64>> {
    if d == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if d == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for a in 0..=n {
        for mut rest in compositions(n - a, d - 1) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// Constants found inside a finite ansatz with an order bound. Completeness
/// outside the ansatz is not claimed.
#[derive(Debug, Clone)]
pub struct Constants {
    pub basis: Vec<Tensor>,
    pub ansatz_dim: usize,
    pub order_bound: u64,
}

impl Constants {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn constants_search(space: &TensorSpace, ansatz: &[Tensor], order: u64) -> Result<Constants> {
    let p = space.prime();
    if let Some(cap) = space.ext().model.max_order() {
        if order > cap {
            return Err(Error::DepthExceeded { requested: order as usize, depth: cap as usize });
        }
    }
    let derived: Vec<Vec<Tensor>> = ansatz.iter().map(|x| space.theta_upto(x, order)).collect::<Result<_>>()?;
    let mut kernel = linalg::identity_basis(ansatz.len());
    for n in 1..=order as usize {
        if kernel.is_empty() {
            break;
        }
        let images: Vec<BTreeMap<Vec<i64>, u32>> = derived.iter().map(|d| space.coords(&d[n])).collect();
        kernel = linalg::refine_kernel(p, &kernel, &images);
    }
    let mut rows = kernel;
    let piv = linalg::rref(p, &mut rows);
    rows.truncate(piv.len());
    let legs = ansatz.first().map_or(2, Tensor::legs);
    let basis = rows.iter().map(|c| space.combine(c, ansatz, legs)).collect();
    Ok(Constants { basis, ansatz_dim: ansatz.len(), order_bound: order })
}

/// Outcome of `middle_insertion(z) == z * 1 + 1 * z`.
#[derive(Debug, Clone)]
pub struct Primitivity {
    pub primitive: bool,
    /// `middle_insertion(z) - (z * 1 + 1 * z)`.
    pub discrepancy: Tensor,
}

pub fn check_primitive(space: &TensorSpace, z: &Tensor, order: u64) -> Result<Primitivity> {
    if let Some(n) = space.first_nonconstant_order(z, order)? {
        return Err(Error::NotConstant(format!("theta^({n}) does not vanish on {}", space.display(z))));
    }
    let one = space.one(2);
    let lhs = space.middle_insertion(z)?;
    let rhs = space.add(&space.pairing(z, &one)?, &space.pairing(&one, z)?);
    let discrepancy = space.sub(&lhs, &rhs);
    Ok(Primitivity { primitive: discrepancy.is_zero(), discrepancy })
}

impl fmt::Display for Constants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} constants in an ansatz of dimension {} up to order {}", self.basis.len(), self.ansatz_dim, self.order_bound)
    }
}

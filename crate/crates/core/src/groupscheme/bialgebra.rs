//! Finite bialgebras over `F_p` given by structure constants.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::char_p::{lucas_binom, Prime};
use crate::error::{Error, Result};
use crate::linalg;

/// Sparse vector: `(basis index, coefficient)`.
pub type Sparse = Vec<(usize, u32)>;

/// Algebra on `c_0..c_{r-1}` with comultiplication, counit and an optional
/// antipode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BialgebraData {
    pub p: Prime,
    pub names: Vec<String>,
    /// Coordinates of the unit.
    pub unit: Sparse,
    /// `mult[i][j]` = coordinates of `c_i c_j`.
    pub mult: Vec<Vec<Sparse>>,
    /// `delta[i]` = `(a, b, c)` terms of `Delta(c_i) = sum c * c_a (x) c_b`.
    pub delta: Vec<Vec<(usize, usize, u32)>>,
    pub counit: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antipode: Option<Vec<Sparse>>,
}

type Vector = BTreeMap<usize, u32>;
type Tensor2 = BTreeMap<(usize, usize), u32>;
type Tensor3 = BTreeMap<(usize, usize, usize), u32>;

fn push<K: Ord>(p: Prime, m: &mut BTreeMap<K, u32>, k: K, c: u32) {
    let v = m.entry(k).or_insert(0);
    *v = p.add(*v, c);
}

fn clean<K: Ord + Clone>(m: BTreeMap<K, u32>) -> BTreeMap<K, u32> {
    m.into_iter().filter(|(_, v)| *v != 0).collect()
}

fn to_vector(s: &Sparse) -> Vector {
    let mut v = Vector::new();
    for &(i, c) in s {
        *v.entry(i).or_insert(0) += c;
    }
    v
}

impl BialgebraData {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    fn check_shape(&self) -> Result<()> {
        let r = self.dim();
        let bad = self.mult.len() != r
            || self.mult.iter().any(|row| row.len() != r)
            || self.delta.len() != r
            || self.counit.len() != r
            || self.antipode.as_ref().is_some_and(|s| s.len() != r)
            || self.unit.iter().any(|&(i, _)| i >= r)
            || self.mult.iter().flatten().flatten().any(|&(i, _)| i >= r)
            || self.delta.iter().flatten().any(|&(a, b, _)| a >= r || b >= r);
        if bad {
            return Err(Error::Dimension(format!("structure constants do not match dimension {r}")));
        }
        Ok(())
    }

    pub fn mul(&self, a: &Vector, b: &Vector) -> Vector {
        let p = self.p;
        let mut out = Vector::new();
        for (&i, &x) in a {
            for (&j, &y) in b {
                let xy = p.mul(x, y);
                for &(k, c) in &self.mult[i][j] {
                    push(p, &mut out, k, p.mul(xy, c));
                }
            }
        }
        clean(out)
    }

    pub fn pow(&self, a: &Vector, e: u64) -> Vector {
        let mut acc = to_vector(&self.unit);
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        [(i, 1)].into_iter().collect()
    }

    pub fn delta_of(&self, a: &Vector) -> Tensor2 {
        let p = self.p;
        let mut out = Tensor2::new();
        for (&i, &x) in a {
            for &(l, r, c) in &self.delta[i] {
                push(p, &mut out, (l, r), p.mul(x, c));
            }
        }
        clean(out)
    }

    pub fn counit_of(&self, a: &Vector) -> u32 {
        a.iter().fold(0, |acc, (&i, &x)| self.p.add(acc, self.p.mul(x, self.counit[i])))
    }

    fn mul2(&self, a: &Tensor2, b: &Tensor2) -> Tensor2 {
        let p = self.p;
        let mut out = Tensor2::new();
        for (&(a1, a2), &x) in a {
            for (&(b1, b2), &y) in b {
                let xy = p.mul(x, y);
                for &(k1, c1) in &self.mult[a1][b1] {
                    for &(k2, c2) in &self.mult[a2][b2] {
                        push(p, &mut out, (k1, k2), p.mul(xy, p.mul(c1, c2)));
                    }
                }
            }
        }
        clean(out)
    }

    fn antipode_of(&self, a: &Vector) -> Option<Vector> {
        let s = self.antipode.as_ref()?;
        let p = self.p;
        let mut out = Vector::new();
        for (&i, &x) in a {
            for &(k, c) in &s[i] {
                push(p, &mut out, k, p.mul(x, c));
            }
        }
        Some(clean(out))
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BialgebraReport {
    pub associative: bool,
    pub unital: bool,
    pub delta_multiplicative: bool,
    pub delta_unital: bool,
    pub counit_multiplicative: bool,
    pub counit_unital: bool,
    pub coassociative: bool,
    pub counit_laws: bool,
    /// `None` when no antipode was supplied.
    pub antipode: Option<bool>,
    pub failures: Vec<String>,
}

impl BialgebraReport {
    pub fn passed(&self) -> bool {
        self.associative
            && self.unital
            && self.delta_multiplicative
            && self.delta_unital
            && self.counit_multiplicative
            && self.counit_unital
            && self.coassociative
            && self.counit_laws
            && self.antipode != Some(false)
    }
}

pub fn check_bialgebra(data: &BialgebraData) -> Result<BialgebraReport> {
    data.check_shape()?;
    let p = data.p;
    let r = data.dim();
    let basis: Vec<Vector> = (0..r).map(|i| data.basis_vector(i)).collect();
    let unit = clean(to_vector(&data.unit));
    let mut rep = BialgebraReport { associative: true, unital: true, ..Default::default() };
    let fail = |rep: &mut BialgebraReport, s: String| {
        if rep.failures.len() < 16 {
            rep.failures.push(s);
        }
    };

    for i in 0..r {
        if data.mul(&unit, &basis[i]) != basis[i] || data.mul(&basis[i], &unit) != basis[i] {
            rep.unital = false;
            fail(&mut rep, format!("unit law at {}", data.names[i]));
        }
        for j in 0..r {
            let ij = data.mul(&basis[i], &basis[j]);
            for k in 0..r {
                if data.mul(&ij, &basis[k]) != data.mul(&basis[i], &data.mul(&basis[j], &basis[k])) {
                    if rep.associative {
                        fail(&mut rep, format!("associativity at ({}, {}, {})", data.names[i], data.names[j], data.names[k]));
                    }
                    rep.associative = false;
                }
            }
        }
    }

    let deltas: Vec<Tensor2> = basis.iter().map(|b| data.delta_of(b)).collect();
    let unit2: Tensor2 = clean(
        unit.iter().flat_map(|(&i, &x)| unit.iter().map(move |(&j, &y)| ((i, j), p.mul(x, y)))).collect(),
    );
    rep.delta_unital = data.delta_of(&unit) == unit2;
    if !rep.delta_unital {
        fail(&mut rep, "Delta(1) != 1 (x) 1".into());
    }
    rep.counit_unital = data.counit_of(&unit) == 1;
    if !rep.counit_unital {
        fail(&mut rep, "counit(1) != 1".into());
    }
    rep.delta_multiplicative = true;
    rep.counit_multiplicative = true;
    for i in 0..r {
        for j in 0..r {
            let ij = data.mul(&basis[i], &basis[j]);
            if data.delta_of(&ij) != data.mul2(&deltas[i], &deltas[j]) {
                if rep.delta_multiplicative {
                    fail(&mut rep, format!("Delta not multiplicative at ({}, {})", data.names[i], data.names[j]));
                }
                rep.delta_multiplicative = false;
            }
            if data.counit_of(&ij) != p.mul(data.counit[i], data.counit[j]) {
                if rep.counit_multiplicative {
                    fail(&mut rep, format!("counit not multiplicative at ({}, {})", data.names[i], data.names[j]));
                }
                rep.counit_multiplicative = false;
            }
        }
    }

    rep.coassociative = true;
    rep.counit_laws = true;
    for i in 0..r {
        let d = &deltas[i];
        let mut left = Tensor3::new();
        let mut right = Tensor3::new();
        let mut eps_left = Vector::new();
        let mut eps_right = Vector::new();
        for (&(a, b), &c) in d {
            for (&(a1, a2), &x) in &deltas[a] {
                push(p, &mut left, (a1, a2, b), p.mul(c, x));
            }
            for (&(b1, b2), &x) in &deltas[b] {
                push(p, &mut right, (a, b1, b2), p.mul(c, x));
            }
            push(p, &mut eps_left, b, p.mul(c, data.counit[a]));
            push(p, &mut eps_right, a, p.mul(c, data.counit[b]));
        }
        if clean(left) != clean(right) {
            if rep.coassociative {
                fail(&mut rep, format!("coassociativity at {}", data.names[i]));
            }
            rep.coassociative = false;
        }
        if clean(eps_left) != basis[i] || clean(eps_right) != basis[i] {
            if rep.counit_laws {
                fail(&mut rep, format!("counit law at {}", data.names[i]));
            }
            rep.counit_laws = false;
        }
    }

    if data.antipode.is_some() {
        let mut ok = true;
        for i in 0..r {
            let mut l = Vector::new();
            let mut rr = Vector::new();
            for (&(a, b), &c) in &deltas[i] {
                let sa = data.antipode_of(&basis[a]).unwrap();
                let sb = data.antipode_of(&basis[b]).unwrap();
                for (k, v) in data.mul(&sa, &basis[b]) {
                    push(p, &mut l, k, p.mul(c, v));
                }
                for (k, v) in data.mul(&basis[a], &sb) {
                    push(p, &mut rr, k, p.mul(c, v));
                }
            }
            let want: Vector = clean(unit.iter().map(|(&k, &v)| (k, p.mul(v, data.counit[i]))).collect());
            if clean(l) != want || clean(rr) != want {
                ok = false;
                fail(&mut rep, format!("antipode law at {}", data.names[i]));
                break;
            }
        }
        rep.antipode = Some(ok);
    }
    Ok(rep)
}

/// Minimal `h` with `x^{p^h} = 0` on a basis of the augmentation ideal.
pub fn height(data: &BialgebraData) -> Result<u32> {
    data.check_shape()?;
    let p = data.p;
    let r = data.dim();
    let aug = linalg::nullspace(p, std::slice::from_ref(&data.counit), r);
    let mut h = 0;
    for v in aug {
        let x: Vector = clean(v.into_iter().enumerate().collect());
        let mut y = x.clone();
        let mut e = 0u32;
        while !y.is_empty() {
            if (p.get() as u64).pow(e) > r as u64 + 1 {
                return Err(Error::NotInfinitesimal(format!("augmentation element {x:?} is not nilpotent")));
            }
            y = data.pow(&y, p.get() as u64);
            e += 1;
        }
        h = h.max(e);
    }
    Ok(h)
}

/// Exponent vectors `e` with `0 <= e_i < q`, in lexicographic order.
pub fn exponent_box(n: usize, q: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u64>| {
                (0..q).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

/// `K[z_1..z_n] / (z_i^{p^l})` with every `z_i` primitive and `S(z) = -z`:
/// the coordinate ring of `(alpha_{p^l})^n`.
pub fn alpha_frobenius_kernel(p: Prime, ell: u32, n: usize) -> BialgebraData {
    let q = p.power(ell) as u64;
    let mons = exponent_box(n, q);
    let index: BTreeMap<Vec<u64>, usize> = mons.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let names = mons
        .iter()
        .map(|e| {
            let parts: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let z = if n == 1 { "z".to_string() } else { format!("z{}", i + 1) };
                    if x == 1 { z } else { format!("{z}^{x}") }
                })
                .collect();
            if parts.is_empty() { "1".into() } else { parts.join("*") }
        })
        .collect();
    let mult = mons
        .iter()
        .map(|a| {
            mons.iter()
                .map(|b| {
                    let s: Vec<u64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    index.get(&s).map(|&k| vec![(k, 1)]).unwrap_or_default()
                })
                .collect()
        })
        .collect();
    let delta = mons
        .iter()
        .map(|e| {
            let mut terms = Vec::new();
            for a in mons.iter().filter(|a| a.iter().zip(e).all(|(x, y)| x <= y)) {
                let c = a.iter().zip(e).fold(1u32, |acc, (&x, &y)| p.mul(acc, lucas_binom(p, y as i64, x)));
                if c != 0 {
                    let b: Vec<u64> = e.iter().zip(a).map(|(y, x)| y - x).collect();
                    terms.push((index[a], index[&b], c));
                }
            }
            terms
        })
        .collect();
    let counit = mons.iter().map(|e| u32::from(e.iter().all(|&x| x == 0))).collect();
    let antipode = mons
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let deg: u64 = e.iter().sum();
            vec![(i, if deg.is_multiple_of(2) { 1 } else { p.neg(1) })]
        })
        .collect();
    BialgebraData { p, names, unit: vec![(0, 1)], mult, delta, counit, antipode: Some(antipode) }
}

/// The group algebra `K[Z/2]` on `{1, g}`, `g` grouplike.
pub fn group_algebra_z2(p: Prime) -> BialgebraData {
    BialgebraData {
        p,
        names: vec!["1".into(), "g".into()],
        unit: vec![(0, 1)],
        mult: vec![vec![vec![(0, 1)], vec![(1, 1)]], vec![vec![(1, 1)], vec![(0, 1)]]],
        delta: vec![vec![(0, 0, 1)], vec![(1, 1, 1)]],
        counit: vec![1, 1],
        antipode: Some(vec![vec![(0, 1)], vec![(1, 1)]]),
    }
}

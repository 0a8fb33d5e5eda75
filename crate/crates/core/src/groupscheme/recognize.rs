//! The constants `z_i = w_i (x) 1 - 1 (x) w_i` of a power-sum bracket and
//! the Frobenius-kernel bialgebra they span.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::towers::{Bracket, Family};

use super::bialgebra::{alpha_frobenius_kernel, check_bialgebra, exponent_box, height, BialgebraData, BialgebraReport};
use super::tensor::{check_primitive, Tensor, TensorSpace};

#[derive(Debug, Clone, Serialize)]
pub struct Recognition {
    pub p: u32,
    pub ell: u32,
    pub streams: usize,
    pub order: u64,
    /// Per generator: `theta^(n)(z_i) = 0` for `1 <= n <= order`.
    pub constant: Vec<bool>,
    pub primitive: Vec<bool>,
    /// Per generator: `z_i^q = 0` and `z_i^{q/p} != 0`.
    pub nilpotent: Vec<bool>,
    pub dimension: usize,
    pub independent: bool,
    pub extension_degree: usize,
    /// Counit of every monomial `z^e` is `delta_{e,0}`.
    pub counit_matches: bool,
    /// `Delta` solved from the triple tensors; `None` above the size limit,
    /// where it follows from primitivity.
    pub delta_matches: Option<bool>,
    pub bialgebra: BialgebraReport,
    pub height: u32,
    pub exponent: u32,
    #[serde(skip)]
    pub data: BialgebraData,
}

impl Recognition {
    pub fn passed(&self) -> bool {
        self.constant.iter().all(|&b| b)
            && self.primitive.iter().all(|&b| b)
            && self.nilpotent.iter().all(|&b| b)
            && self.independent
            && self.dimension == self.extension_degree
            && self.counit_matches
            && self.delta_matches != Some(false)
            && self.bialgebra.passed()
            && self.height == self.ell
            && self.exponent == self.ell
    }
}

fn monomial(space: &TensorSpace, z: &[Tensor], e: &[u64]) -> Tensor {
    let mut acc = space.one(2);
    for (zi, &k) in z.iter().zip(e) {
        acc = space.mul(&acc, &space.pow(zi, k));
    }
    acc
}

/// Run the recognition for `F_[l] / F` with power-sum streams. The
/// comultiplication is solved directly when the algebra has at most
/// `solve_limit` basis elements.
pub fn recognize_power_sums(ext: &Bracket, order: u64, solve_limit: usize) -> Result<Recognition> {
    if !matches!(ext.family, Family::PowerSums(_)) {
        return Err(Error::Config("recognition needs power-sum streams".into()));
    }
    let p = ext.prime();
    let n = ext.rank();
    let q = ext.q as u64;
    let space = TensorSpace::new(ext.clone());
    let m = &ext.model;
    let z: Vec<Tensor> = (0..n)
        .map(|i| space.sub(&space.pure(&[ext.generator(i), m_one(m)]), &space.pure(&[m_one(m), ext.generator(i)])))
        .collect();

    let mut constant = Vec::new();
    let mut primitive = Vec::new();
    let mut nilpotent = Vec::new();
    for zi in &z {
        let c = space.first_nonconstant_order(zi, order)?.is_none();
        constant.push(c);
        primitive.push(c && check_primitive(&space, zi, order)?.primitive);
        let low = space.pow(zi, q / p.get() as u64);
        nilpotent.push(!low.is_zero() && space.pow(&low, p.get() as u64).is_zero());
    }

    let exps = exponent_box(n, q);
    let mons: Vec<Tensor> = exps.iter().map(|e| monomial(&space, &z, e)).collect();
    let coords: Vec<BTreeMap<Vec<i64>, u32>> = mons.iter().map(|x| space.coords(x)).collect();
    let independent = linalg::sparse_rank(p, &coords) == mons.len();
    let counit_matches = mons.iter().zip(&exps).all(|(x, e)| {
        let c = space.counit(x);
        let want = u32::from(e.iter().all(|&v| v == 0));
        c.as_constant() == Some(want) || (want == 0 && c.is_zero())
    });

    let data = alpha_frobenius_kernel(p, ext.ell, n);
    let delta_matches = if mons.len() <= solve_limit {
        Some(solve_delta(&space, &mons)? == normalized_delta(&data))
    } else {
        None
    };
    let bialgebra = check_bialgebra(&data)?;
    Ok(Recognition {
        p: p.get(),
        ell: ext.ell,
        streams: n,
        order,
        constant,
        primitive,
        nilpotent,
        dimension: mons.len(),
        independent,
        extension_degree: ext.degree(),
        counit_matches,
        delta_matches,
        bialgebra,
        height: height(&data)?,
        exponent: ext.exponent()?,
        data,
    })
}

fn m_one(m: &crate::derivations::PolyModel) -> crate::series::poly::Poly {
    use crate::ring::Ring;
    m.one()
}

fn normalized_delta(data: &BialgebraData) -> Vec<BTreeMap<(usize, usize), u32>> {
    data.delta
        .iter()
        .map(|terms| terms.iter().filter(|t| t.2 != 0).map(|&(a, b, c)| ((a, b), c)).collect())
        .collect()
}

/// `middle_insertion(m_e) = sum c_{ab} m_a * m_b`, solved for every `e`.
fn solve_delta(space: &TensorSpace, mons: &[Tensor]) -> Result<Vec<BTreeMap<(usize, usize), u32>>> {
    let p = space.prime();
    let r = mons.len();
    let mut pairs = Vec::with_capacity(r * r);
    let mut columns = Vec::with_capacity(r * r);
    for a in 0..r {
        for b in 0..r {
            pairs.push((a, b));
            columns.push(space.coords(&space.pairing(&mons[a], &mons[b])?));
        }
    }
    let mut out = Vec::with_capacity(r);
    for x in mons {
        let target = space.coords(&space.middle_insertion(x)?);
        let mut all = columns.clone();
        all.push(target);
        let dense = linalg::columns_to_dense(&all);
        let (mat, rhs): (Vec<Vec<u32>>, Vec<u32>) =
            dense.into_iter().map(|mut row| { let b = row.pop().unwrap(); (row, b) }).unzip();
        let sol = linalg::solve(p, &mat, &rhs)
            .ok_or_else(|| Error::Inconclusive("a comultiplication is not in the span of pairings".into()))?;
        out.push(pairs.iter().zip(sol).filter(|(_, c)| *c != 0).map(|(&k, c)| (k, c)).collect());
    }
    Ok(out)
}

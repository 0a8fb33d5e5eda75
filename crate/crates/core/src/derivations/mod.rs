//! Iterative derivation models and the checks that run on them.

pub mod adjunction;
pub mod laurent_model;
pub mod poly_model;

use std::collections::BTreeMap;

use serde::Serialize;

pub use adjunction::{adjoin_solution, AdjElem, AdjunctionModel};
pub use laurent_model::LaurentModel;
pub use poly_model::{ModelJson, PolyModel, Rule};

use crate::char_p::{base_p_digits, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg;
use crate::ring::{IdRing, Ring};
use crate::series::poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    /// `theta^(0) = id`
    Identity,
    /// `theta^(i) o theta^(j) = binom(i+j, i) theta^(i+j)`
    Iteration,
    /// `theta^(k)(xy) = sum theta^(i)(x) theta^(j)(y)`
    Leibniz,
    Additivity,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomViolation {
    pub law: Law,
    pub element: String,
    pub i: MultiIndex,
    pub j: MultiIndex,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub order: u64,
    pub checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Sweep the axioms over the model's sample elements: identity, iteration for
/// all `|i|, |j| <= order` (bounded by the model's own order), additivity and
/// the Leibniz rule on sample pairs.
pub fn verify_axioms<R: IdRing>(ring: &R, order: u64) -> Result<AxiomReport> {
    let m = ring.nvars();
    let cap = ring.max_order().unwrap_or(u64::MAX);
    if order > cap {
        return Err(Error::DepthExceeded { requested: order as usize, depth: cap as usize });
    }
    let p = ring.prime();
    let samples = ring.samples();
    let indices = MultiIndex::up_to_total(m, order);
    let zero = MultiIndex::zero(m);
    let mut report = AxiomReport { order, checked: 0, violations: Vec::new() };
    // theta^(k)(x) for every sample and every |k| <= min(2 order, cap)
    let full = MultiIndex::up_to_total(m, (2 * order).min(cap));
    let mut table: Vec<BTreeMap<MultiIndex, R::Elem>> = Vec::with_capacity(samples.len());
    for x in &samples {
        let mut row = BTreeMap::new();
        for k in &full {
            row.insert(k.clone(), ring.theta(x, k)?);
        }
        table.push(row);
    }
    for (x, row) in samples.iter().zip(&table) {
        report.checked += 1;
        if !ring.equal(&row[&zero], x) {
            report.violations.push(AxiomViolation {
                law: Law::Identity,
                element: ring.show(x),
                i: zero.clone(),
                j: zero.clone(),
            });
        }
        for i in &indices {
            for j in &indices {
                let ij = i.add(j);
                if ij.total() > cap {
                    continue;
                }
                report.checked += 1;
                let lhs = ring.theta(&row[j], i)?;
                let rhs = ring.scale(crate::char_p::multi_binom(p, i, j)?, &row[&ij]);
                if !ring.equal(&lhs, &rhs) {
                    report.violations.push(AxiomViolation {
                        law: Law::Iteration,
                        element: ring.show(x),
                        i: i.clone(),
                        j: j.clone(),
                    });
                }
            }
        }
    }
    let pair_count = samples.len().min(8);
    for a in 0..pair_count {
        for b in a..pair_count {
            let (x, y) = (&samples[a], &samples[b]);
            let xy = ring.mul(x, y);
            let x_plus_y = ring.add(x, y);
            for k in &indices {
                report.checked += 2;
                let lhs = ring.theta(&xy, k)?;
                let mut rhs = ring.zero();
                for (i, j) in k.splittings() {
                    rhs = ring.add(&rhs, &ring.mul(&table[a][&i], &table[b][&j]));
                }
                let label = format!("({}) * ({})", ring.show(x), ring.show(y));
                if !ring.equal(&lhs, &rhs) {
                    report.violations.push(AxiomViolation {
                        law: Law::Leibniz,
                        element: label.clone(),
                        i: k.clone(),
                        j: zero.clone(),
                    });
                }
                let lhs = ring.theta(&x_plus_y, k)?;
                let rhs = ring.add(&table[a][k], &table[b][k]);
                if !ring.equal(&lhs, &rhs) {
                    report.violations.push(AxiomViolation {
                        law: Law::Additivity,
                        element: label,
                        i: k.clone(),
                        j: zero.clone(),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// `theta^(n) = prod_j (theta^(p^j))^{n_j} / n_j!` over the base-p digits of
/// `n`, with the p-power maps supplied by the caller.
pub fn compose_from_p_powers<R, F>(ring: &R, x: &R::Elem, n: u64, p_power: F) -> Result<R::Elem>
where
    R: IdRing,
    F: Fn(&R::Elem, u32) -> Result<R::Elem>,
{
    let p = ring.prime();
    let mut y = x.clone();
    for (j, &d) in base_p_digits(p, n).iter().enumerate() {
        for _ in 0..d {
            y = p_power(&y, j as u32)?;
        }
        let f = p.factorial(d);
        y = ring.scale(p.inv(f).expect("digit factorials are units"), &y);
    }
    Ok(y)
}

/// [`compose_from_p_powers`] using the model's own `theta^(p^j)` along the
/// single variable; errors with `MissingRule` past the model's order.
pub fn compose_from_model<R: IdRing>(ring: &R, x: &R::Elem, n: u64) -> Result<R::Elem> {
    let p = ring.prime();
    let cap = ring.max_order().unwrap_or(u64::MAX);
    compose_from_p_powers(ring, x, n, |y, j| {
        let q = p.power(j) as u64;
        if q > cap {
            return Err(Error::MissingRule(format!("theta^({q}) is beyond order {cap}")));
        }
        ring.theta_n(y, q)
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutationFailure {
    pub element: String,
    pub var_a: usize,
    pub k: u64,
    pub var_b: usize,
    pub l: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundtripReport {
    pub order: u64,
    pub commutation_failures: Vec<CommutationFailure>,
    pub iteration: AxiomReport,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.commutation_failures.is_empty() && self.iteration.passed()
    }
}

/// Check that the univariate components commute and that the assembled
/// m-variate derivation is iterative.
pub fn univariate_multivariate_roundtrip(model: &PolyModel, order: u64) -> Result<RoundtripReport> {
    let m = model.nvars();
    let mut failures = Vec::new();
    let mut elements = model.generators();
    elements.extend(model.samples());
    for x in &elements {
        for a in 0..m {
            for b in a + 1..m {
                for k in 1..=order {
                    for l in 1..=order.saturating_sub(k).max(1) {
                        if k + l > model.order() {
                            continue;
                        }
                        let ab = model.theta_var(&model.theta_var(x, b, l)?, a, k)?;
                        let ba = model.theta_var(&model.theta_var(x, a, k)?, b, l)?;
                        if ab != ba {
                            failures.push(CommutationFailure {
                                element: model.display(x),
                                var_a: a + 1,
                                k,
                                var_b: b + 1,
                                l,
                            });
                        }
                    }
                }
            }
        }
    }
    let iteration = verify_axioms(model, order.min(model.order() / 2))?;
    Ok(RoundtripReport { order, commutation_failures: failures, iteration })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nondegeneracy<E> {
    /// `witnesses[j]` lies in the kernels of `theta_i^(1)`, `i < j`, and is
    /// moved by `theta_j^(1)`; scaled to image 1 when the image is constant.
    Nondegenerate(Vec<E>),
    /// `theta_j^(1)` vanishes on every generator (1-based `j`).
    Degenerate(usize),
    /// No witness inside the ansatz for `theta_j^(1)`.
    Inconclusive(usize),
}

impl<E> Nondegeneracy<E> {
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, Nondegeneracy::Nondegenerate(_))
    }
}

/// Non-degeneracy in the kernel-chain form: `theta_j^(1)` is nontrivial on
/// the common kernel of `theta_1^(1) .. theta_{j-1}^(1)`, searched inside the
/// ansatz.
pub fn check_nondegenerate<R: IdRing>(ring: &R, ansatz: &[R::Elem]) -> Result<Nondegeneracy<R::Elem>> {
    let m = ring.nvars();
    let p = ring.prime();
    let mut images: Vec<Vec<BTreeMap<Vec<i64>, u32>>> = Vec::with_capacity(m);
    for j in 0..m {
        let unit = MultiIndex::unit(m, j, 1);
        images.push(
            ansatz
                .iter()
                .map(|x| ring.theta(x, &unit).and_then(|y| ring.coords(&y)))
                .collect::<Result<_>>()?,
        );
    }
    let mut kernel = linalg::identity_basis(ansatz.len());
    let mut witnesses = Vec::with_capacity(m);
    for j in 0..m {
        let unit = MultiIndex::unit(m, j, 1);
        let mut found: Option<R::Elem> = None;
        for b in &kernel {
            let img = linalg::combine(p, b, &images[j]);
            if img.is_empty() {
                continue;
            }
            let x = combine_elems(ring, b, ansatz);
            let is_const = img.len() == 1 && img.keys().next().unwrap().iter().all(|&e| e == 0);
            if is_const {
                let c = *img.values().next().unwrap();
                found = Some(ring.scale(p.inv(c).unwrap(), &x));
                break;
            }
            if found.is_none() {
                found = Some(x);
            }
        }
        match found {
            Some(x) => witnesses.push(x),
            None => {
                let gens_killed = ring
                    .generators()
                    .iter()
                    .map(|g| ring.theta(g, &unit).map(|y| ring.is_zero(&y)))
                    .collect::<Result<Vec<bool>>>()?;
                return Ok(if gens_killed.iter().all(|&z| z) {
                    Nondegeneracy::Degenerate(j + 1)
                } else {
                    Nondegeneracy::Inconclusive(j + 1)
                });
            }
        }
        kernel = linalg::refine_kernel(p, &kernel, &images[j]);
    }
    Ok(Nondegeneracy::Nondegenerate(witnesses))
}

fn combine_elems<R: IdRing>(ring: &R, coeffs: &[u32], elems: &[R::Elem]) -> R::Elem {
    let mut acc = ring.zero();
    for (&c, x) in coeffs.iter().zip(elems) {
        if c != 0 {
            acc = ring.add(&acc, &ring.scale(c, x));
        }
    }
    acc
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffFinite {
    pub dim: usize,
    /// `dims[b]`: dimension of the span of `theta^(k)(x)` with `|k| <= b`.
    pub dims: Vec<usize>,
    /// Multi-indices whose derivatives form a basis of the span.
    pub basis: Vec<MultiIndex>,
}

/// Dimension over the fraction field of the base generators of the span of
/// all `theta^(k)(x)`, `|k| <= bound`. Inconclusive while the dimension still
/// grows in the upper half of the range.
pub fn differentially_finite_dim(
    model: &PolyModel,
    x: &Poly,
    bound: u64,
    base_gens: &[usize],
) -> Result<DiffFinite> {
    let m = model.nvars();
    let n = model.ngens();
    let split = |y: &Poly| -> BTreeMap<Vec<i64>, Poly> {
        let mut out: BTreeMap<Vec<i64>, Poly> = BTreeMap::new();
        for (e, c) in y.terms() {
            let key: Vec<i64> = (0..n).filter(|g| !base_gens.contains(g)).map(|g| e[g]).collect();
            let coeff: Vec<i64> = (0..n).map(|g| if base_gens.contains(&g) { e[g] } else { 0 }).collect();
            let slot = out.entry(key).or_insert_with(|| Poly::zero(model.prime(), n));
            *slot = slot.add(&Poly::monomial(model.prime(), c, coeff));
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    let mut vectors: Vec<BTreeMap<Vec<i64>, Poly>> = Vec::new();
    let mut basis = Vec::new();
    let mut dims = Vec::with_capacity(bound as usize + 1);
    for b in 0..=bound {
        for k in MultiIndex::up_to_total(m, b).into_iter().filter(|k| k.total() == b) {
            let v = split(&model.theta(x, &k)?);
            if v.is_empty() {
                continue;
            }
            vectors.push(v);
            if linalg::poly_rank(&vectors) == vectors.len() {
                basis.push(k);
            } else {
                vectors.pop();
            }
        }
        dims.push(vectors.len());
    }
    let dim = *dims.last().unwrap();
    if dims[(bound / 2) as usize] != dim {
        return Err(Error::Inconclusive(format!("dimension still growing at bound {bound}: {dims:?}")));
    }
    Ok(DiffFinite { dim, dims, basis })
}

//! Kernel levels `F_l` and the purely inseparable extensions `F_[l]` of the
//! shipped field families.
//!
//! A bracket extension is presented as `E = K(t)[g_1..g_n]` with generator 0
//! equal to `t`, over `F = K(t)[g_1^q..g_n^q]`, `q = p^l`. The `g_i` are
//! taken algebraically independent over `K(t)`; this is a property of the
//! digit streams that a finite prefix cannot certify.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::char_p::{lucas_binom, MultiIndex, PAdicDigits, Prime};
use crate::derivations::{PolyModel, Rule};
use crate::error::{Error, Result};
use crate::linalg;
use crate::ring::{IdRing, Ring};
use crate::series::laurent::{Comparison, LaurentSeries};
use crate::series::poly::Poly;

/// Which field the bracket is built over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `F = K(t)`.
    RationalFunctions,
    /// `F = K(t, r)`, `r = sum_{k>=1} t^{alpha_k}`.
    Lacunary(PAdicDigits),
    /// `F = K(t, s_1..s_n)`, `s_i = sum_k a_{i,k} t^{p^k}`.
    PowerSums(Vec<PAdicDigits>),
}

#[derive(Debug, Clone)]
pub struct Bracket {
    pub family: Family,
    pub ell: u32,
    pub q: i64,
    /// Generators `t, g_1..g_n` with the induced derivation.
    pub model: PolyModel,
    /// Series realizations of `g_1..g_n`.
    pub series: Vec<LaurentSeries>,
    /// Shifted digit streams behind the generators.
    pub streams: Vec<PAdicDigits>,
}

/// `alpha_k` for `k >= 1`, the exponents of the lacunary series.
pub fn lacunary_series(alpha: &PAdicDigits) -> Result<LaurentSeries> {
    let d = alpha.depth();
    if d == 0 {
        return Err(Error::Precision("empty digit stream".into()));
    }
    let p = alpha.prime();
    let prec = alpha.truncation(d)?;
    let mut terms = Vec::with_capacity(d);
    for k in 1..d {
        terms.push((alpha.truncation(k)?, 1));
    }
    Ok(LaurentSeries::from_terms(p, terms, 0, prec))
}

/// `sum_k a_k t^{p^k}` known modulo `t^{p^D}`.
pub fn power_sum_series(a: &PAdicDigits) -> Result<LaurentSeries> {
    let p = a.prime();
    let d = a.depth();
    let terms: Vec<(i64, u32)> = (0..d).map(|k| (p.power(k as u32), a.digits()[k])).collect();
    Ok(LaurentSeries::from_terms(p, terms, 0, p.power(d as u32)))
}

/// Smallest `J` with `p^J > n`.
pub fn cover_exponent(p: Prime, n: u64) -> usize {
    let mut j = 0;
    while (p.power(j as u32) as u64) <= n {
        j += 1;
    }
    j
}

impl Bracket {
    pub fn build(p: Prime, family: &Family, ell: u32, order: u64) -> Result<Bracket> {
        match family {
            Family::RationalFunctions => Bracket::rational(p, ell, order),
            Family::Lacunary(alpha) => Bracket::lacunary(alpha, ell, order),
            Family::PowerSums(streams) => Bracket::power_sums(streams, ell, order),
        }
    }

    fn rational(p: Prime, ell: u32, order: u64) -> Result<Bracket> {
        Ok(Bracket {
            family: Family::RationalFunctions,
            ell,
            q: p.power(ell),
            model: PolyModel::standard(p, 1, order),
            series: Vec::new(),
            streams: Vec::new(),
        })
    }

    /// `rho = r_[l] = sum_{k>=1} t^{beta_k}` with `beta = (alpha - alpha_l) / p^l`,
    /// and `theta^(n)(rho) = binom(beta_J, n) t^-n rho
    ///   + sum_{k<J} (binom(beta_k, n) - binom(beta_J, n)) t^{beta_k - n}`
    /// for `p^J > n`.
    fn lacunary(alpha: &PAdicDigits, ell: u32, order: u64) -> Result<Bracket> {
        let p = alpha.prime();
        let beta = alpha.digit_shift(ell as usize)?;
        let need = cover_exponent(p, order);
        if need > beta.depth() {
            return Err(Error::DepthExceeded { requested: need + ell as usize, depth: alpha.depth() });
        }
        let mut coeffs = vec![Poly::var(p, 2, 1)];
        for n in 1..=order {
            let j = cover_exponent(p, n);
            let bj = beta.truncation(j)?;
            let lead = lucas_binom(p, bj, n);
            let mut c = Poly::monomial(p, lead, vec![-(n as i64), 1]);
            for k in 1..j {
                let bk = beta.truncation(k)?;
                let diff = p.sub(lucas_binom(p, bk, n), lead);
                c.add_term(vec![bk - n as i64, 0], diff);
            }
            coeffs.push(c);
        }
        let rules = vec![vec![Rule::Standard, Rule::Custom(coeffs)]];
        let series = lacunary_series(&beta)?;
        let model = PolyModel::new(p, vec!["t".into(), "rho".into()], rules, order)?
            .with_realization(vec![LaurentSeries::monomial(p, 1, 1), series.clone()])?;
        Ok(Bracket {
            family: Family::Lacunary(alpha.clone()),
            ell,
            q: p.power(ell),
            model,
            series: vec![series],
            streams: vec![beta],
        })
    }

    /// `w_i = s_{i,[l]} = sum_k a_{i,k+l} t^{p^k}`, with
    /// `theta^(p^j)(w_i) = a_{i,j+l}` and `theta^(n)(w_i) = 0` otherwise.
    fn power_sums(streams: &[PAdicDigits], ell: u32, order: u64) -> Result<Bracket> {
        let p = streams.first().ok_or_else(|| Error::Config("no digit streams".into()))?.prime();
        let n = streams.len();
        let need = cover_exponent(p, order);
        let mut names = vec!["t".to_string()];
        let mut rules = vec![Rule::Standard];
        let mut series = Vec::with_capacity(n);
        let mut shifted = Vec::with_capacity(n);
        for (i, a) in streams.iter().enumerate() {
            let b = a.digit_shift(ell as usize)?;
            if need > b.depth() {
                return Err(Error::DepthExceeded { requested: need + ell as usize, depth: a.depth() });
            }
            let mut coeffs = vec![Poly::zero(p, n + 1); order as usize + 1];
            coeffs[0] = Poly::var(p, n + 1, i + 1);
            for j in 0..need {
                let pj = p.power(j as u32) as usize;
                if pj <= order as usize {
                    coeffs[pj] = Poly::constant(p, n + 1, b.digits()[j]);
                }
            }
            names.push(if n == 1 { "w".to_string() } else { format!("w{}", i + 1) });
            rules.push(Rule::Custom(coeffs));
            series.push(power_sum_series(&b)?);
            shifted.push(b);
        }
        let mut real = vec![LaurentSeries::monomial(p, 1, 1)];
        real.extend(series.iter().cloned());
        let model = PolyModel::new(p, names, vec![rules], order)?.with_realization(real)?;
        Ok(Bracket {
            family: Family::PowerSums(streams.to_vec()),
            ell,
            q: p.power(ell),
            model,
            series,
            streams: shifted,
        })
    }

    pub fn prime(&self) -> Prime {
        self.model.prime()
    }

    /// Number of adjoined generators.
    pub fn rank(&self) -> usize {
        self.series.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == 0 || self.ell == 0
    }

    pub fn generator(&self, i: usize) -> Poly {
        self.model.gen(i + 1)
    }

    /// The F-basis `g^I`, `0 <= I_i < q`, as residue vectors.
    pub fn basis_residues(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..self.q).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out
    }

    pub fn basis(&self) -> Vec<Poly> {
        self.basis_residues().into_iter().map(|r| self.residue_monomial(&r)).collect()
    }

    /// `[E : F]`.
    pub fn degree(&self) -> usize {
        (self.q as usize).pow(self.rank() as u32)
    }

    pub fn residue_monomial(&self, r: &[i64]) -> Poly {
        let mut e = vec![0i64];
        e.extend_from_slice(r);
        Poly::monomial(self.prime(), 1, e)
    }

    /// Decompose into F-coefficients of the basis monomials, keyed by residue.
    pub fn split(&self, x: &Poly) -> BTreeMap<Vec<i64>, Poly> {
        let mut out: BTreeMap<Vec<i64>, Poly> = BTreeMap::new();
        for (e, c) in x.terms() {
            let res: Vec<i64> = e[1..].iter().map(|v| v.rem_euclid(self.q)).collect();
            let mut f = e.clone();
            for (fi, r) in f[1..].iter_mut().zip(&res) {
                *fi -= r;
            }
            let slot = out.entry(res).or_insert_with(|| Poly::zero(self.prime(), e.len()));
            *slot = slot.add(&Poly::monomial(self.prime(), c, f));
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Coordinates in [`Bracket::basis`] order.
    pub fn coords(&self, x: &Poly) -> Vec<Poly> {
        let parts = self.split(x);
        let zero = Poly::zero(self.prime(), self.rank() + 1);
        self.basis_residues().iter().map(|r| parts.get(r).cloned().unwrap_or_else(|| zero.clone())).collect()
    }

    /// Membership in `F`: only the residue-zero coordinate survives.
    pub fn in_base(&self, x: &Poly) -> bool {
        self.split(x).keys().all(|r| r.iter().all(|&v| v == 0))
    }

    /// The generator `r` (or `s_i`) of `F` as an element of `E`.
    pub fn base_generators(&self) -> Result<Vec<Poly>> {
        let p = self.prime();
        let n = self.rank();
        let q = self.q;
        match &self.family {
            Family::RationalFunctions => Ok(Vec::new()),
            Family::Lacunary(alpha) => {
                // r = t^{alpha_l} rho^q + sum_{k=1}^{l} t^{alpha_k}
                let mut r = Poly::monomial(p, 1, vec![alpha.truncation(self.ell as usize)?, q]);
                for k in 1..=self.ell as usize {
                    r.add_term(vec![alpha.truncation(k)?, 0], 1);
                }
                Ok(vec![r])
            }
            Family::PowerSums(streams) => streams
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    // s_i = w_i^q + sum_{k<l} a_{i,k} t^{p^k}
                    let mut e = vec![0i64; n + 1];
                    e[i + 1] = q;
                    let mut s = Poly::monomial(p, 1, e);
                    for k in 0..self.ell as usize {
                        let mut e = vec![0i64; n + 1];
                        e[0] = p.power(k as u32);
                        s.add_term(e, a.digit(k)?);
                    }
                    Ok(s)
                })
                .collect(),
        }
    }

    /// Series of the base generators, computed directly from the streams.
    pub fn base_series(&self) -> Result<Vec<LaurentSeries>> {
        match &self.family {
            Family::RationalFunctions => Ok(Vec::new()),
            Family::Lacunary(alpha) => Ok(vec![lacunary_series(alpha)?]),
            Family::PowerSums(streams) => streams.iter().map(power_sum_series).collect(),
        }
    }

    /// Generator series via the root formula: `p_power_root` of the
    /// normalized base generator.
    pub fn generator_by_root(&self, i: usize) -> Result<LaurentSeries> {
        let p = self.prime();
        let ell = self.ell as usize;
        match &self.family {
            Family::RationalFunctions => Err(Error::Config("K(t) has no bracket generators".into())),
            Family::Lacunary(alpha) => {
                let r = lacunary_series(alpha)?;
                let mut head = Vec::new();
                for k in 1..=ell {
                    head.push((alpha.truncation(k)?, 1));
                }
                let x = r.sub(&LaurentSeries::exact(p, head)).shift(-alpha.truncation(ell)?);
                x.p_power_root(self.ell)
            }
            Family::PowerSums(streams) => {
                let s = power_sum_series(&streams[i])?;
                let head: Vec<(i64, u32)> =
                    (0..ell).map(|k| Ok((p.power(k as u32), streams[i].digit(k)?))).collect::<Result<_>>()?;
                s.sub(&LaurentSeries::exact(p, head)).p_power_root(self.ell)
            }
        }
    }

    /// Minimal `e` with `g^{p^e}` in `F` for every generator.
    pub fn exponent(&self) -> Result<u32> {
        let p = self.prime();
        let mut e = 0u32;
        'outer: loop {
            for i in 0..self.rank() {
                let pe = p.power(e);
                if !self.in_base(&Poly::monomial(p, 1, {
                    let mut v = vec![0i64; self.rank() + 1];
                    v[i + 1] = pe;
                    v
                })) {
                    e += 1;
                    if e > 62 {
                        return Err(Error::Inconclusive("membership never reached".into()));
                    }
                    continue 'outer;
                }
            }
            return Ok(e);
        }
    }
}

/// `theta^(n)(g)` computed by the root formula, termwise on the series, and
/// through the symbolic rule, compared windowwise.
#[derive(Debug, Clone, Serialize)]
pub struct BracketTheta {
    pub generator: usize,
    pub n: u64,
    pub root_vs_termwise: Comparison,
    pub symbolic_vs_termwise: Comparison,
}

impl BracketTheta {
    pub fn agrees(&self) -> bool {
        self.root_vs_termwise.equal && self.symbolic_vs_termwise.equal
    }
}

pub fn theta_on_bracket(ext: &Bracket, i: usize, n: u64) -> Result<BracketTheta> {
    let g = &ext.series[i];
    let q = ext.q as u64;
    let root = g.frobenius_power(ext.ell).theta_n(n * q).p_power_root(ext.ell)?;
    let termwise = g.theta_n(n);
    let symbolic = ext.model.realize(&ext.model.theta_n(&ext.generator(i), n)?)?;
    Ok(BracketTheta {
        generator: i,
        n,
        root_vs_termwise: root.compare(&termwise)?,
        symbolic_vs_termwise: symbolic.compare(&termwise)?,
    })
}

/// A basis of `F_l` inside a finite ansatz.
#[derive(Debug, Clone)]
pub struct TowerLevel<E> {
    pub ell: u32,
    pub basis: Vec<E>,
}

/// Common kernel of `theta^(j)`, `j` in `J_l`, inside the span of `ansatz`.
/// The result is relative to the ansatz.
pub fn kernel_subspace<R: IdRing>(ring: &R, ell: u32, ansatz: &[R::Elem]) -> Result<TowerLevel<R::Elem>> {
    let p = ring.prime();
    let mut kernel = linalg::identity_basis(ansatz.len());
    for j in MultiIndex::j_set(ring.nvars(), p, ell) {
        let images: Vec<BTreeMap<Vec<i64>, u32>> = ansatz
            .iter()
            .map(|x| ring.theta(x, &j).and_then(|y| ring.coords(&y)))
            .collect::<Result<_>>()?;
        kernel = linalg::refine_kernel(p, &kernel, &images);
        if kernel.is_empty() {
            break;
        }
    }
    // reduced echelon form gives a canonical basis
    let mut rows = kernel;
    let piv = linalg::rref(p, &mut rows);
    rows.truncate(piv.len());
    let basis = rows
        .iter()
        .map(|c| {
            let mut acc = ring.zero();
            for (&ci, x) in c.iter().zip(ansatz) {
                if ci != 0 {
                    acc = ring.add(&acc, &ring.scale(ci, x));
                }
            }
            acc
        })
        .collect();
    Ok(TowerLevel { ell, basis })
}

/// Monomials `t_1^{e_1} .. t_m^{e_m}` with `0 <= e_i <= deg`.
pub fn monomial_ansatz(p: Prime, m: usize, deg: i64) -> Vec<Poly> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (0..=deg).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|e| Poly::monomial(p, 1, e)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelDegree {
    pub ell: u32,
    pub degree: usize,
    pub basis: Vec<String>,
    pub kernel_dims: (usize, usize),
    pub independent: bool,
    pub spans: bool,
    /// `theta_i^(p^{l-1})(t_j^{p^{l-1}}) = delta_ij`.
    pub unit_witnesses: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerDegreeReport {
    pub p: u32,
    pub m: usize,
    pub ansatz_deg: i64,
    pub levels: Vec<LevelDegree>,
}

impl TowerDegreeReport {
    pub fn passed(&self) -> bool {
        let expected = (self.p as usize).pow(self.m as u32);
        self.levels.iter().all(|l| l.independent && l.spans && l.unit_witnesses && l.degree == expected)
    }
}

/// `[F_{l-1} : F_l] = p^m` on `K[t_1..t_m]`: the monomials
/// `t^{e p^{l-1}}`, `0 <= e_i < p`, are independent over `F_l` and span
/// `F_{l-1}`, all inside the monomial ansatz.
pub fn verify_tower_degrees(p: Prime, m: usize, ell_max: u32, ansatz_deg: i64) -> Result<TowerDegreeReport> {
    let q_max = p.power(ell_max) as u64;
    let order = m as u64 * (q_max - 1);
    let model = PolyModel::standard(p, m, order.max(1));
    let ansatz = monomial_ansatz(p, m, ansatz_deg);
    if ansatz_deg < p.power(ell_max) {
        return Err(Error::Inconclusive(format!(
            "ansatz degree {ansatz_deg} is below p^{ell_max}; no level-{ell_max} element fits"
        )));
    }
    let mut levels = Vec::new();
    let mut upper = kernel_subspace(&model, 0, &ansatz)?;
    for ell in 1..=ell_max {
        let lower = kernel_subspace(&model, ell, &ansatz)?;
        let step = p.power(ell - 1);
        let claimed: Vec<Poly> = monomial_ansatz(p, m, p.get() as i64 - 1)
            .into_iter()
            .map(|b| Poly::from_terms(p, m, b.terms().map(|(e, c)| (e.iter().map(|x| x * step).collect(), c))))
            .collect();
        let fits = |x: &Poly| x.terms().all(|(e, _)| e.iter().all(|&v| (0..=ansatz_deg).contains(&v)));
        let products: Vec<BTreeMap<Vec<i64>, u32>> = claimed
            .iter()
            .flat_map(|b| lower.basis.iter().map(move |f| b.mul(f)))
            .filter(fits)
            .map(|x| model.coords(&x))
            .collect::<Result<_>>()?;
        let independent = linalg::sparse_rank(p, &products) == products.len();
        let mut with_upper = products.clone();
        for x in &upper.basis {
            with_upper.push(model.coords(x)?);
        }
        let spans = linalg::sparse_rank(p, &with_upper) == products.len();
        let mut unit_witnesses = true;
        for i in 0..m {
            for j in 0..m {
                let x = Poly::from_terms(p, m, [((0..m).map(|g| if g == j { step } else { 0 }).collect(), 1)]);
                let y = model.theta(&x, &MultiIndex::unit(m, i, step as u64))?;
                let want = if i == j { model.one() } else { model.zero() };
                unit_witnesses &= y == want;
            }
        }
        levels.push(LevelDegree {
            ell,
            degree: claimed.len(),
            basis: claimed.iter().map(|b| model.display(b)).collect(),
            kernel_dims: (upper.basis.len(), lower.basis.len()),
            independent,
            spans,
            unit_witnesses,
        });
        upper = lower;
    }
    Ok(TowerDegreeReport { p: p.get(), m, ansatz_deg, levels })
}

/// `(F_[a])_[b]` against `F_[a+b]`: the generator series agree windowwise
/// and the induced rules coincide.
#[derive(Debug, Clone, Serialize)]
pub struct CompositionCheck {
    pub generator_comparisons: Vec<Comparison>,
    pub rules_agree: bool,
}

impl CompositionCheck {
    pub fn passed(&self) -> bool {
        self.rules_agree && self.generator_comparisons.iter().all(|c| c.equal)
    }
}

pub fn check_composition(p: Prime, family: &Family, a: u32, b: u32, order: u64) -> Result<CompositionCheck> {
    let first = Bracket::build(p, family, a, order)?;
    let shifted = match family {
        Family::RationalFunctions => Family::RationalFunctions,
        Family::Lacunary(_) => Family::Lacunary(first.streams[0].clone()),
        Family::PowerSums(_) => Family::PowerSums(first.streams.clone()),
    };
    let nested = Bracket::build(p, &shifted, b, order)?;
    let direct = Bracket::build(p, family, a + b, order)?;
    let mut comparisons = Vec::new();
    for (x, y) in nested.series.iter().zip(&direct.series) {
        comparisons.push(x.compare(y)?);
    }
    let rules_agree = nested.model.rules() == direct.model.rules() && nested.rank() == direct.rank();
    Ok(CompositionCheck { generator_comparisons: comparisons, rules_agree })
}

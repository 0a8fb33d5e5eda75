//! Iterative differential equations `theta(y) = A y` with
//! `A = sum_k A_k T^k`, over any iterative-derivation model.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::char_p::{multi_binom, MultiIndex, Prime};
use crate::derivations::{LaurentModel, PolyModel};
use crate::error::{Error, Result};
use crate::ring::{IdRing, Ring};
use crate::series::laurent::LaurentSeries;
use crate::series::parse::{parse_poly, parse_series};
use crate::series::tseries::TSeries;

/// Square matrix over a ring's elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<E> {
    rows: Vec<Vec<E>>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == rows.len()));
        Matrix { rows }
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Matrix::from_rows(
            (0..n).map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect()).collect(),
        )
    }

    pub fn zero<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Matrix::from_rows(vec![vec![ring.zero(); n]; n])
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<E>] {
        &self.rows
    }

    pub fn map<F: Clone, G: FnMut(&E) -> F>(&self, mut f: G) -> Matrix<F> {
        Matrix { rows: self.rows.iter().map(|r| r.iter().map(&mut f).collect()).collect() }
    }

    pub fn try_map<F: Clone, G: FnMut(&E) -> Result<F>>(&self, mut f: G) -> Result<Matrix<F>> {
        let mut rows = Vec::with_capacity(self.n());
        for r in &self.rows {
            rows.push(r.iter().map(&mut f).collect::<Result<Vec<F>>>()?);
        }
        Ok(Matrix { rows })
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, o: &Self) -> Self {
        Matrix {
            rows: self
                .rows
                .iter()
                .zip(&o.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect())
                .collect(),
        }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, o: &Self) -> Self {
        self.add(ring, &o.map(|x| ring.neg(x)))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: u32) -> Self {
        self.map(|x| ring.scale(c, x))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, o: &Self) -> Self {
        let n = self.n();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = ring.zero();
                for k in 0..n {
                    acc = ring.add(&acc, &ring.mul(&self.rows[i][k], &o.rows[k][j]));
                }
                row.push(acc);
            }
            rows.push(row);
        }
        Matrix { rows }
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.rows.iter().flatten().all(|x| ring.is_zero(x))
    }

    /// First entry (0-based) where the two matrices differ.
    pub fn first_difference<R: Ring<Elem = E>>(&self, ring: &R, o: &Self) -> Option<(usize, usize)> {
        for i in 0..self.n() {
            for j in 0..self.n() {
                if !ring.equal(&self.rows[i][j], &o.rows[i][j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        Matrix {
            rows: self
                .rows
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip_row)
                .map(|(_, r)| {
                    r.iter().enumerate().filter(|&(j, _)| j != skip_col).map(|(_, x)| x.clone()).collect()
                })
                .collect(),
        }
    }

    /// Cofactor expansion; the matrices here are small.
    pub fn det<R: Ring<Elem = E>>(&self, ring: &R) -> E {
        match self.n() {
            0 => ring.one(),
            1 => self.rows[0][0].clone(),
            2 => ring.sub(
                &ring.mul(&self.rows[0][0], &self.rows[1][1]),
                &ring.mul(&self.rows[0][1], &self.rows[1][0]),
            ),
            n => {
                let mut acc = ring.zero();
                for j in 0..n {
                    let term = ring.mul(&self.rows[0][j], &self.minor(0, j).det(ring));
                    acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
                }
                acc
            }
        }
    }

    /// Inverse through the adjugate.
    pub fn inverse<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Self> {
        let n = self.n();
        let d_inv = ring.inv(&self.det(ring))?;
        if n == 1 {
            return Ok(Matrix { rows: vec![vec![d_inv]] });
        }
        let mut rows = vec![vec![ring.zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let c = self.minor(j, i).det(ring);
                let c = if (i + j) % 2 == 0 { c } else { ring.neg(&c) };
                *slot = ring.mul(&c, &d_inv);
            }
        }
        Ok(Matrix { rows })
    }

    /// Entrywise `theta^(k)`.
    pub fn theta<R: IdRing<Elem = E>>(&self, ring: &R, k: &MultiIndex) -> Result<Self> {
        self.try_map(|x| ring.theta(x, k))
    }

    pub fn show<R: Ring<Elem = E>>(&self, ring: &R) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| r.iter().map(|x| ring.show(x)).collect()).collect()
    }
}

/// Power series in `T` over a base ring, viewed as a ring (used for
/// `det A(T)` and its inverse).
pub struct TRing<'a, R> {
    pub base: &'a R,
    pub m: usize,
    pub order: u64,
}

impl<R: Ring> Ring for TRing<'_, R> {
    type Elem = TSeries<R::Elem>;

    fn prime(&self) -> Prime {
        self.base.prime()
    }
    fn zero(&self) -> Self::Elem {
        TSeries::new(self.m, self.order)
    }
    fn one(&self) -> Self::Elem {
        TSeries::constant(self.base, self.m, self.order, self.base.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(self.base, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.map(|x| self.base.neg(x))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(self.base, b)
    }
    fn scale(&self, c: u32, a: &Self::Elem) -> Self::Elem {
        a.map(|x| self.base.scale(c, x))
    }
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        a.inverse(self.base)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|(_, x)| self.base.is_zero(x))
    }
    fn show(&self, a: &Self::Elem) -> String {
        a.iter().map(|(k, x)| format!("[{k}] {}", self.base.show(x))).collect::<Vec<_>>().join(" + ")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ide<E> {
    n: usize,
    m: usize,
    order: u64,
    coeffs: BTreeMap<MultiIndex, Matrix<E>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdeViolation {
    pub k: MultiIndex,
    pub l: MultiIndex,
    /// 1-based entry of the first mismatch.
    pub entry: (usize, usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct IdeReport {
    pub order: u64,
    pub identity_at_zero: bool,
    pub checked: usize,
    pub violations: Vec<IdeViolation>,
}

impl IdeReport {
    pub fn passed(&self) -> bool {
        self.identity_at_zero && self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionMismatch {
    pub k: MultiIndex,
    pub entry: (usize, usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct FundamentalReport {
    pub order: u64,
    pub mismatches: Vec<SolutionMismatch>,
    /// Orders where `theta(det(Y)^-1) = det(A)^-1 det(Y)^-1` fails.
    pub determinant_law: Vec<MultiIndex>,
}

impl FundamentalReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.determinant_law.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DescentReport {
    pub ell: u32,
    /// Orders `k` not divisible by `p^ell` with `A_k != 0`.
    pub misplaced: Vec<MultiIndex>,
    /// `(k, j)` with `theta^(j)(A_k) != 0` for `j` in `J_ell`.
    pub outside_level: Vec<(MultiIndex, MultiIndex)>,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.misplaced.is_empty() && self.outside_level.is_empty()
    }
}

impl<E: Clone + std::fmt::Debug> Ide<E> {
    /// The trivial equation `A = 1`.
    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize, m: usize, order: u64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(MultiIndex::zero(m), Matrix::identity(ring, n));
        Ide { n, m, order, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn set(&mut self, k: MultiIndex, a: Matrix<E>) {
        if k.total() <= self.order {
            self.coeffs.insert(k, a);
        }
    }

    pub fn get(&self, k: &MultiIndex) -> Option<&Matrix<E>> {
        self.coeffs.get(k)
    }

    /// `A_k`, zero when absent.
    pub fn coeff<R: Ring<Elem = E>>(&self, ring: &R, k: &MultiIndex) -> Matrix<E> {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Matrix::zero(ring, self.n))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Matrix<E>)> {
        self.coeffs.iter()
    }

    /// Build `A_n` for all `n <= order` from the p-power coefficients
    /// `A_{p^j}` of a univariate equation, via
    /// `A_{d p^J} = d^-1 sum_{i+j=p^J} theta^(i)(A_{(d-1)p^J}) A_j` and
    /// `A_{d p^J + n'} = sum_{i+j=n'} theta^(i)(A_{d p^J}) A_j`.
    pub fn from_p_powers<R: IdRing<Elem = E>>(
        ring: &R,
        n: usize,
        order: u64,
        p_power: &BTreeMap<u32, Matrix<E>>,
    ) -> Result<Self> {
        let p = ring.prime();
        let mut ide = Ide::identity(ring, n, 1, order);
        for target in 1..=order {
            let digits = crate::char_p::base_p_digits(p, target);
            let top = digits.len() - 1;
            let q = p.power(top as u32) as u64;
            let d = digits[top];
            let rest = target - d * q;
            let lead = d * q;
            if rest == 0 {
                if d == 1 {
                    let a = p_power.get(&(top as u32)).ok_or_else(|| {
                        Error::MissingRule(format!("A_({q}) not supplied"))
                    })?;
                    ide.set(MultiIndex::uni(q), a.clone());
                    continue;
                }
                let prev = ide.coeff(ring, &MultiIndex::uni((d - 1) * q));
                let mut acc = Matrix::zero(ring, n);
                for i in 0..=q {
                    let th = prev.theta(ring, &MultiIndex::uni(i))?;
                    acc = acc.add(ring, &th.mul(ring, &ide.coeff(ring, &MultiIndex::uni(q - i))));
                }
                let inv = p.inv((d % p.get() as u64) as u32).expect("digit below p");
                ide.set(MultiIndex::uni(lead), acc.scale(ring, inv));
            } else {
                let head = ide.coeff(ring, &MultiIndex::uni(lead));
                let mut acc = Matrix::zero(ring, n);
                for i in 0..=rest {
                    let th = head.theta(ring, &MultiIndex::uni(i))?;
                    acc = acc.add(ring, &th.mul(ring, &ide.coeff(ring, &MultiIndex::uni(rest - i))));
                }
                ide.set(MultiIndex::uni(target), acc);
            }
        }
        Ok(ide)
    }

    /// Check `A_0 = 1` and
    /// `binom(k+l, l) A_{k+l} = sum_{i+j=l} theta^(i)(A_k) A_j`
    /// for `|k|, |l| <= order` with `|k+l|` within the equation's order.
    pub fn validate<R: IdRing<Elem = E>>(&self, ring: &R, order: u64) -> Result<IdeReport> {
        let p = ring.prime();
        let zero = MultiIndex::zero(self.m);
        let identity_at_zero =
            self.coeff(ring, &zero).first_difference(ring, &Matrix::identity(ring, self.n)).is_none();
        let indices = MultiIndex::up_to_total(self.m, order.min(self.order));
        let mut thetas: BTreeMap<(MultiIndex, MultiIndex), Matrix<E>> = BTreeMap::new();
        let mut report = IdeReport { order, identity_at_zero, checked: 0, violations: Vec::new() };
        for k in &indices {
            let ak = self.coeff(ring, k);
            for l in &indices {
                let kl = k.add(l);
                if kl.total() > self.order {
                    continue;
                }
                report.checked += 1;
                let lhs = self.coeff(ring, &kl).scale(ring, multi_binom(p, k, l)?);
                let mut rhs = Matrix::zero(ring, self.n);
                for (i, j) in l.splittings() {
                    let key = (k.clone(), i.clone());
                    if !thetas.contains_key(&key) {
                        thetas.insert(key.clone(), ak.theta(ring, &i)?);
                    }
                    rhs = rhs.add(ring, &thetas[&key].mul(ring, &self.coeff(ring, &j)));
                }
                if let Some((a, b)) = lhs.first_difference(ring, &rhs) {
                    report.violations.push(IdeViolation { k: k.clone(), l: l.clone(), entry: (a + 1, b + 1) });
                }
            }
        }
        Ok(report)
    }

    /// `theta^(k)(Y) = A_k Y` for `|k| <= order`, and the determinant law
    /// `theta(det(Y)^-1) = det(A)^-1 det(Y)^-1`.
    pub fn is_fundamental<R: IdRing<Elem = E>>(
        &self,
        ring: &R,
        y: &Matrix<E>,
        order: u64,
    ) -> Result<FundamentalReport> {
        let order = order.min(self.order);
        let det = y.det(ring);
        let det_inv = ring.inv(&det)?;
        let mut report = FundamentalReport { order, mismatches: Vec::new(), determinant_law: Vec::new() };
        let indices = MultiIndex::up_to_total(self.m, order);
        for k in &indices {
            let lhs = y.theta(ring, k)?;
            let rhs = self.coeff(ring, k).mul(ring, y);
            if let Some((a, b)) = lhs.first_difference(ring, &rhs) {
                report.mismatches.push(SolutionMismatch { k: k.clone(), entry: (a + 1, b + 1) });
            }
        }
        let tr = TRing { base: ring, m: self.m, order };
        let mut entries: Vec<Vec<TSeries<E>>> = vec![vec![tr.zero(); self.n]; self.n];
        for k in &indices {
            let a = self.coeff(ring, k);
            for (i, row) in entries.iter_mut().enumerate() {
                for (j, slot) in row.iter_mut().enumerate() {
                    slot.set(k.clone(), a.get(i, j).clone());
                }
            }
        }
        let det_a = Matrix::from_rows(entries).det(&tr);
        let det_a_inv = tr.inv(&det_a)?;
        for k in &indices {
            let lhs = ring.theta(&det_inv, k)?;
            let rhs = ring.mul(&det_a_inv.coeff(ring, k), &det_inv);
            if !ring.equal(&lhs, &rhs) {
                report.determinant_law.push(k.clone());
            }
        }
        Ok(report)
    }

    /// `A~ = theta(D)^-1 A D`, i.e. `A~_n = sum_{i+j=n} theta^(i)(D^-1) A_j D`.
    pub fn gauge_transform<R: IdRing<Elem = E>>(&self, ring: &R, d: &Matrix<E>) -> Result<Self> {
        let d_inv = d.inverse(ring)?;
        let mut out = Ide::identity(ring, self.n, self.m, self.order);
        for k in MultiIndex::up_to_total(self.m, self.order) {
            let mut acc = Matrix::zero(ring, self.n);
            for (i, j) in k.splittings() {
                let aj = self.coeff(ring, &j);
                if aj.is_zero(ring) {
                    continue;
                }
                acc = acc.add(ring, &d_inv.theta(ring, &i)?.mul(ring, &aj).mul(ring, d));
            }
            if !acc.is_zero(ring) || k.is_zero() {
                out.set(k, acc);
            }
        }
        Ok(out)
    }

    /// Descent to level `ell`: `A_k = 0` unless `p^ell | k`, and every entry
    /// is killed by `theta^(j)`, `j` in `J_ell`.
    pub fn check_descent<R: IdRing<Elem = E>>(&self, ring: &R, ell: u32) -> Result<DescentReport> {
        let p = ring.prime();
        let q = p.power(ell) as u64;
        let js = MultiIndex::j_set(self.m, p, ell);
        if let (Some(cap), Some(top)) = (ring.max_order(), js.iter().map(MultiIndex::total).max()) {
            if top > cap {
                return Err(Error::DepthExceeded { requested: top as usize, depth: cap as usize });
            }
        }
        let mut report = DescentReport { ell, misplaced: Vec::new(), outside_level: Vec::new() };
        for (k, a) in &self.coeffs {
            if a.is_zero(ring) {
                continue;
            }
            if !k.divisible_by(q) {
                report.misplaced.push(k.clone());
            }
            for j in &js {
                if !a.theta(ring, j)?.is_zero(ring) {
                    report.outside_level.push((k.clone(), j.clone()));
                    break;
                }
            }
        }
        Ok(report)
    }
}

/// Coefficient matrices from a basis: `theta^(k)(e_i) = sum_j (A_k)_{ij} e_j`.
/// `coords` returns the coordinates of an element in the basis.
pub fn ide_from_basis<R, F>(ring: &R, basis: &[R::Elem], order: u64, coords: F) -> Result<Ide<R::Elem>>
where
    R: IdRing,
    F: Fn(&R::Elem) -> Result<Vec<R::Elem>>,
{
    let n = basis.len();
    let m = ring.nvars();
    let mut ide = Ide::identity(ring, n, m, order);
    for k in MultiIndex::up_to_total(m, order).into_iter().filter(|k| !k.is_zero()) {
        let mut rows = Vec::with_capacity(n);
        for e in basis {
            let c = coords(&ring.theta(e, &k)?)?;
            if c.len() != n {
                return Err(Error::NotInBasis(format!("expected {n} coordinates, got {}", c.len())));
            }
            rows.push(c);
        }
        let a = Matrix::from_rows(rows);
        if !a.is_zero(ring) {
            ide.set(k, a);
        }
    }
    Ok(ide)
}

/// Solve a t-regular univariate equation over `K((t))` by specialization:
/// `Y(t) = A(T)|_{t=0, T=t} Y0`, known modulo `t^(order+1)`.
pub fn solve_at_origin(
    model: &LaurentModel,
    ide: &Ide<LaurentSeries>,
    y0: &Matrix<u32>,
    order: u64,
) -> Result<Matrix<LaurentSeries>> {
    if ide.nvars() != 1 {
        return Err(Error::Dimension("solve_at_origin needs one derivation variable".into()));
    }
    let p = model.prime();
    let order = order.min(ide.order());
    let n = ide.n();
    let mut at_zero: Vec<Vec<Vec<(i64, u32)>>> = vec![vec![Vec::new(); n]; n];
    for k in 0..=order {
        let a = ide.coeff(model, &MultiIndex::uni(k));
        for i in 0..n {
            for j in 0..n {
                let x = a.get(i, j);
                if let Some(v) = x.valuation() {
                    if v < 0 {
                        return Err(Error::PoleAtOrigin(format!(
                            "A_{k} entry ({}, {}) has order {v} at t = 0; shift or supply a solution",
                            i + 1,
                            j + 1
                        )));
                    }
                }
                if x.start() > 0 || x.prec() <= 0 {
                    return Err(Error::Precision(format!("A_{k} is not known at t = 0")));
                }
                let c = x.coeff(0);
                if c != 0 {
                    at_zero[i][j].push((k as i64, c));
                }
            }
        }
    }
    let spec = Matrix::from_rows(
        at_zero
            .into_iter()
            .map(|r| r.into_iter().map(|ts| LaurentSeries::from_terms(p, ts, 0, order as i64 + 1)).collect())
            .collect(),
    );
    let y0 = y0.map(|&c| LaurentSeries::monomial(p, c % p.get(), 0));
    Ok(spec.mul(model, &y0))
}

/// IDE file: `{"p":2, "m":1, "n":2, "order":8, "coeffs":[{"k":[1],
/// "matrix":[["1*t^-1","0"],["0","0"]]}]}`. Entries are series literals for
/// `m = 1` and Laurent polynomials in `t1..tm` otherwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdeJson {
    pub p: Prime,
    pub m: usize,
    pub n: usize,
    pub order: u64,
    pub coeffs: Vec<IdeCoeffJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdeCoeffJson {
    pub k: Vec<u64>,
    pub matrix: Vec<Vec<String>>,
}

impl IdeJson {
    fn check_shape(&self) -> Result<()> {
        for c in &self.coeffs {
            if c.k.len() != self.m {
                return Err(Error::LengthMismatch(c.k.len(), self.m));
            }
            if c.matrix.len() != self.n || c.matrix.iter().any(|r| r.len() != self.n) {
                return Err(Error::Dimension(format!("coefficient at {:?} is not {}x{}", c.k, self.n, self.n)));
            }
        }
        Ok(())
    }

    pub fn build_series(&self) -> Result<(LaurentModel, Ide<LaurentSeries>)> {
        self.check_shape()?;
        if self.m != 1 {
            return Err(Error::Config("series entries need m = 1".into()));
        }
        let model = LaurentModel::standard(self.p);
        let mut ide = Ide::identity(&model, self.n, 1, self.order);
        for c in &self.coeffs {
            let rows = c
                .matrix
                .iter()
                .map(|r| r.iter().map(|s| parse_series(self.p, s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            ide.set(MultiIndex(c.k.clone()), Matrix::from_rows(rows));
        }
        Ok((model, ide))
    }

    pub fn build_poly(&self) -> Result<(PolyModel, Ide<crate::series::poly::Poly>)> {
        self.check_shape()?;
        let model = PolyModel::standard(self.p, self.m, self.order.max(1) * 2);
        let names: Vec<&str> = model.names().iter().map(String::as_str).collect();
        let mut ide = Ide::identity(&model, self.n, self.m, self.order);
        for c in &self.coeffs {
            let rows = c
                .matrix
                .iter()
                .map(|r| r.iter().map(|s| parse_poly(self.p, &names, s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            ide.set(MultiIndex(c.k.clone()), Matrix::from_rows(rows));
        }
        Ok((model, ide))
    }

    /// Parse and validate to `order`.
    pub fn check(&self, order: u64) -> Result<IdeReport> {
        if self.m == 1 {
            let (model, ide) = self.build_series()?;
            ide.validate(&model, order)
        } else {
            let (model, ide) = self.build_poly()?;
            ide.validate(&model, order)
        }
    }
}

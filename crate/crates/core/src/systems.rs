//! Matrix equations attached to the shipped field families.

use std::collections::BTreeMap;

use crate::char_p::{lucas_binom, MultiIndex, PAdicDigits};
use crate::derivations::{AdjElem, AdjunctionModel};
use crate::error::{Error, Result};
use crate::ide::{ide_from_basis, Ide, Matrix};
use crate::ring::Ring;
use crate::series::laurent::LaurentSeries;
use crate::series::poly::Poly;
use crate::series::tseries::TSeries;
use crate::towers::{cover_exponent, lacunary_series, Bracket, Family};

/// `K((t))[s, s^-1]` with `theta^(n)(s) = binom(alpha, n) t^-n s`.
pub fn exponent_solution(alpha: &PAdicDigits, order: u64) -> Result<AdjunctionModel> {
    let p = alpha.prime();
    let need = cover_exponent(p, order);
    if need > alpha.depth() {
        return Err(Error::DepthExceeded { requested: need, depth: alpha.depth() });
    }
    let mut a = TSeries::new(1, order);
    for n in 0..=order {
        let aj = alpha.truncation(cover_exponent(p, n))?;
        a.set_uni(n, LaurentSeries::monomial(p, lucas_binom(p, aj, n), -(n as i64)));
    }
    AdjunctionModel::new_unchecked(p, a)
}

/// The 2x2 system solved by `[[s, r], [0, 1]]`.
#[derive(Debug, Clone)]
pub struct LacunarySystem {
    pub model: AdjunctionModel,
    pub ide: Ide<AdjElem>,
    pub solution: Matrix<AdjElem>,
    pub r: LaurentSeries,
}

/// `A_{p^j} = [[b t^{-p^j}, -b sum_{k<=j} t^{alpha_k - p^j}], [0, 0]]`,
/// `b = binom(alpha_{j+1}, p^j)`, extended to all orders.
pub fn lacunary_p_power(alpha: &PAdicDigits, j: u32) -> Result<[[LaurentSeries; 2]; 2]> {
    let p = alpha.prime();
    let pj = p.power(j);
    let b = lucas_binom(p, alpha.truncation(j as usize + 1)?, pj as u64);
    let mut tail = Vec::new();
    for k in 1..=j as usize {
        tail.push((alpha.truncation(k)? - pj, p.neg(b)));
    }
    let z = LaurentSeries::zero(p);
    Ok([[LaurentSeries::monomial(p, b, -pj), LaurentSeries::exact(p, tail)], [z.clone(), z]])
}

pub fn lacunary_system(alpha: &PAdicDigits, order: u64) -> Result<LacunarySystem> {
    let p = alpha.prime();
    let model = exponent_solution(alpha, order)?;
    let mut powers = BTreeMap::new();
    let mut j = 0u32;
    while p.power(j) as u64 <= order {
        let a = lacunary_p_power(alpha, j)?;
        powers.insert(j, Matrix::from_rows(a.map(|row| row.map(AdjElem::base).to_vec()).to_vec()));
        j += 1;
    }
    let ide = Ide::from_p_powers(&model, 2, order, &powers)?;
    let r = lacunary_series(alpha)?;
    let solution = Matrix::from_rows(vec![
        vec![model.y(), AdjElem::base(r.clone())],
        vec![model.zero(), model.one()],
    ]);
    Ok(LacunarySystem { model, ide, solution, r })
}

/// `K(t, r)` over `K(t)` with basis `(1, r)`: the equation read off from
/// `theta^(k)(r)`, and its fundamental matrix `[[1, 0], [r, s]]`.
#[derive(Debug, Clone)]
pub struct LacunaryBasisSystem {
    pub field: Bracket,
    pub ide: Ide<Poly>,
    pub solution_model: AdjunctionModel,
    pub realized: Ide<AdjElem>,
    pub solution: Matrix<AdjElem>,
}

pub fn lacunary_basis_system(alpha: &PAdicDigits, order: u64) -> Result<LacunaryBasisSystem> {
    let p = alpha.prime();
    let field = Bracket::build(p, &Family::Lacunary(alpha.clone()), 0, order)?;
    let model = &field.model;
    let basis = vec![model.one(), field.generator(0)];
    let ide = ide_from_basis(model, &basis, order, |x| {
        if x.terms().any(|(e, _)| !(0..=1).contains(&e[1])) {
            return Err(Error::NotInBasis(format!("{} is not K(t)-linear in r", model.display(x))));
        }
        let mut cs = vec![Poly::zero(p, 2), Poly::zero(p, 2)];
        for (e, c) in x.terms() {
            cs[e[1] as usize].add_term(vec![e[0], 0], c);
        }
        Ok(cs)
    })?;
    let solution_model = exponent_solution(alpha, order)?;
    let mut realized = Ide::identity(&solution_model, 2, 1, order);
    for (k, a) in ide.iter() {
        let m = a.try_map(|x| model.realize(x).map(AdjElem::base))?;
        realized.set(k.clone(), m);
    }
    let r = field.series[0].clone();
    let solution = Matrix::from_rows(vec![
        vec![solution_model.one(), solution_model.zero()],
        vec![AdjElem::base(r), solution_model.y()],
    ]);
    Ok(LacunaryBasisSystem { field, ide, solution_model, realized, solution })
}

/// The equation of `F_[l] / F` for power-sum streams in the monomial basis
/// `w^I`, `I < q`.
pub fn power_sum_basis_ide(ext: &Bracket, order: u64) -> Result<Ide<Poly>> {
    let basis = ext.basis();
    ide_from_basis(&ext.model, &basis, order, |x| Ok(ext.coords(x)))
}

/// `M(x)_{ij} = binom(i, j) x^{i-j}` for `i, j < q`; `M(x + y) = M(x) M(y)`.
pub fn shift_matrix(ext: &Bracket, x: &Poly) -> Matrix<Poly> {
    let p = ext.prime();
    let m = &ext.model;
    let q = ext.q as u64;
    let rows = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| {
                    if j > i {
                        m.zero()
                    } else {
                        m.pow(x, i - j).scale(lucas_binom(p, i as i64, j))
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows)
}

fn single_stream(ext: &Bracket) -> Result<()> {
    match ext.family {
        Family::PowerSums(_) if ext.rank() == 1 => Ok(()),
        _ => Err(Error::Config("needs a single power-sum stream".into())),
    }
}

/// `M(w)`, a fundamental matrix of [`power_sum_basis_ide`] for one stream.
pub fn power_sum_solution(ext: &Bracket) -> Result<Matrix<Poly>> {
    single_stream(ext)?;
    Ok(shift_matrix(ext, &ext.generator(0)))
}

/// `D = M(c)`, `c = sum_{k<l} b_k t^{p^k}`: `D^-1 M(w) = M(w - c)` and
/// `w - c` is a `p^l`-th power, so the gauged equation lives over `F_l`.
pub fn power_sum_descent_gauge(ext: &Bracket) -> Result<Matrix<Poly>> {
    single_stream(ext)?;
    let p = ext.prime();
    let b = &ext.streams[0];
    let mut c = Poly::zero(p, 2);
    for k in 0..ext.ell as usize {
        c.add_term(vec![p.power(k as u32), 0], b.digit(k)?);
    }
    Ok(shift_matrix(ext, &c))
}

/// Coefficient `A_k` for univariate `k`, as a convenience.
pub fn coeff_at<E: Clone + std::fmt::Debug, R: Ring<Elem = E>>(ring: &R, ide: &Ide<E>, k: u64) -> Matrix<E> {
    ide.coeff(ring, &MultiIndex::uni(k))
}

use std::collections::BTreeMap;

use idgal::derivations::LaurentModel;
use idgal::ide::{solve_at_origin, Ide, IdeJson, Matrix};
use idgal::ring::Ring;
use idgal::series::LaurentSeries;
use idgal::systems::{
    lacunary_basis_system, lacunary_p_power, lacunary_system, power_sum_basis_ide,
    power_sum_descent_gauge, power_sum_solution,
};
use idgal::towers::{Bracket, Family};
use idgal::{Error, MultiIndex, PAdicDigits, Prime};

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn uni(k: u64) -> MultiIndex {
    MultiIndex::uni(k)
}

fn one_by_one(model: &LaurentModel, order: u64, coeffs: &[(u64, LaurentSeries)]) -> Ide<LaurentSeries> {
    let mut ide = Ide::identity(model, 1, 1, order);
    for (k, c) in coeffs {
        ide.set(uni(*k), Matrix::from_rows(vec![vec![c.clone()]]));
    }
    ide
}

fn scalar(x: LaurentSeries) -> Matrix<LaurentSeries> {
    Matrix::from_rows(vec![vec![x]])
}

#[test]
fn trivial_equation() {
    let p = prime(2);
    let model = LaurentModel::standard(p);
    let ide: Ide<LaurentSeries> = Ide::identity(&model, 2, 1, 8);
    assert!(ide.validate(&model, 8).unwrap().passed());
    let y = Matrix::identity(&model, 2);
    assert!(ide.is_fundamental(&model, &y, 8).unwrap().passed());
    let ones = Matrix::from_rows(vec![vec![1u32, 0], vec![0, 1]]);
    let solved = solve_at_origin(&model, &ide, &ones, 8).unwrap();
    assert!(solved.first_difference(&model, &y).is_none());
    for ell in 0..4 {
        assert!(ide.check_descent(&model, ell).unwrap().passed());
    }
    let same = ide.gauge_transform(&model, &Matrix::identity(&model, 2)).unwrap();
    assert!(same.validate(&model, 8).unwrap().passed());
}

#[test]
fn t_over_t_equation() {
    // a(T) = (t + T) / t, solved by y = t
    let p = prime(2);
    let model = LaurentModel::standard(p);
    let ide = one_by_one(&model, 8, &[(1, LaurentSeries::monomial(p, 1, -1))]);
    assert!(ide.validate(&model, 8).unwrap().passed());
    let y = scalar(model.t());
    assert!(ide.is_fundamental(&model, &y, 8).unwrap().passed());

    let bad = one_by_one(&model, 8, &[(1, LaurentSeries::exact(p, [(-1, 1), (0, 1)]))]);
    let report = bad.validate(&model, 8).unwrap();
    assert!(report.violations.iter().any(|v| v.k == uni(1) && v.l == uni(1)), "{report:?}");
    assert!(!bad.is_fundamental(&model, &y, 8).unwrap().passed());

    // D = t turns it into the trivial equation
    let gauged = ide.gauge_transform(&model, &scalar(model.t())).unwrap();
    for k in 1..=8 {
        assert!(gauged.coeff(&model, &uni(k)).is_zero(&model), "k={k}");
    }
    assert!(gauged.validate(&model, 8).unwrap().passed());
    assert!(gauged.is_fundamental(&model, &scalar(model.one()), 8).unwrap().passed());

    let y0 = Matrix::from_rows(vec![vec![1u32]]);
    assert!(matches!(solve_at_origin(&model, &ide, &y0, 8), Err(Error::PoleAtOrigin(_))));
}

#[test]
fn regular_equation_solved_at_origin() {
    // a(T) = (1 + t + T) / (1 + t), solved by 1 + t
    for p in [2u64, 3, 5] {
        let p = prime(p);
        let model = LaurentModel::standard(p);
        let a1 = LaurentSeries::exact(p, [(0, 1), (1, 1)]).inv().unwrap();
        let ide = one_by_one(&model, 8, &[(1, a1)]);
        assert!(ide.validate(&model, 8).unwrap().passed());
        let y0 = Matrix::from_rows(vec![vec![1u32]]);
        let y = solve_at_origin(&model, &ide, &y0, 8).unwrap();
        let want = LaurentSeries::exact(p, [(0, 1), (1, 1)]);
        assert!(y.get(0, 0).compare(&want).unwrap().equal);
        assert!(ide.is_fundamental(&model, &y, 8).unwrap().passed());
    }
}

#[test]
fn descent_of_a_square_equation() {
    let p = prime(2);
    let model = LaurentModel::standard(p);
    let ide = one_by_one(&model, 4, &[(2, LaurentSeries::monomial(p, 1, -2))]);
    assert!(ide.check_descent(&model, 1).unwrap().passed());
    let extra = one_by_one(&model, 4, &[(1, LaurentSeries::monomial(p, 1, 0)), (2, LaurentSeries::monomial(p, 1, -2))]);
    let report = extra.check_descent(&model, 1).unwrap();
    assert_eq!(report.misplaced, vec![uni(1)]);
    // t^-1 is not in F_1
    let off = one_by_one(&model, 4, &[(2, LaurentSeries::monomial(p, 1, -1))]);
    assert!(!off.check_descent(&model, 1).unwrap().outside_level.is_empty());
}

fn lacunary_digits() -> PAdicDigits {
    PAdicDigits::parse(prime(2), "1,1,0,1,1,0,1,1").unwrap()
}

#[test]
fn lacunary_matrix_system() {
    let alpha = lacunary_digits();
    let sys = lacunary_system(&alpha, 8).unwrap();
    let report = sys.ide.validate(&sys.model, 8).unwrap();
    assert!(report.passed(), "{report:?}");
    let fund = sys.ide.is_fundamental(&sys.model, &sys.solution, 8).unwrap();
    assert!(fund.passed(), "{fund:?}");

    // r + t in place of r
    let mut rows = sys.solution.rows().to_vec();
    rows[0][1] = sys.model.add(&rows[0][1], &idgal::derivations::AdjElem::base(LaurentSeries::monomial(alpha.prime(), 1, 1)));
    let bad = Matrix::from_rows(rows);
    let fund = sys.ide.is_fundamental(&sys.model, &bad, 8).unwrap();
    assert!(!fund.mismatches.is_empty());
    assert!(fund.mismatches.iter().all(|m| m.entry == (1, 2)));
}

#[test]
fn lacunary_system_has_a_pole_at_origin() {
    let alpha = lacunary_digits();
    let p = alpha.prime();
    let model = LaurentModel::standard(p);
    let mut powers = BTreeMap::new();
    for j in 0..4 {
        let a = lacunary_p_power(&alpha, j).unwrap();
        powers.insert(j, Matrix::from_rows(a.iter().map(|r| r.to_vec()).collect()));
    }
    let ide = Ide::from_p_powers(&model, 2, 8, &powers).unwrap();
    assert!(ide.validate(&model, 8).unwrap().passed());
    let y0 = Matrix::from_rows(vec![vec![1u32, 0], vec![0, 1]]);
    assert!(matches!(solve_at_origin(&model, &ide, &y0, 8), Err(Error::PoleAtOrigin(_))));
}

#[test]
fn lacunary_basis_equation() {
    let alpha = lacunary_digits();
    let sys = lacunary_basis_system(&alpha, 8).unwrap();
    let m = &sys.field.model;
    assert!(sys.ide.validate(m, 8).unwrap().passed());
    let fund = sys.realized.is_fundamental(&sys.solution_model, &sys.solution, 8).unwrap();
    assert!(fund.passed(), "{fund:?}");
    // the r-row of A_{2^j} is b t^{-2^j} (r - sum_{k<=j} t^{alpha_k})
    for j in 0..3u32 {
        let a = sys.ide.coeff(m, &uni(1 << j));
        let b = idgal::lucas_binom(alpha.prime(), alpha.truncation(j as usize + 1).unwrap(), 1 << j);
        let mut c0 = idgal::series::Poly::zero(alpha.prime(), 2);
        for k in 1..=j as usize {
            c0.add_term(vec![alpha.truncation(k).unwrap() - (1 << j), 0], alpha.prime().neg(b));
        }
        assert_eq!(a.get(1, 0), &c0, "j={j}");
        assert_eq!(a.get(1, 1), &idgal::series::Poly::monomial(alpha.prime(), b, vec![-(1 << j), 0]), "j={j}");
        assert!(a.get(0, 0).is_zero() && a.get(0, 1).is_zero());
    }
}

#[test]
fn power_sum_basis_equation() {
    // digits (1,0,1), l = 1: A_1 = 0, A_2 = [[0,0],[1,0]], A_3 = 0
    let p = prime(2);
    let a = PAdicDigits::parse(p, "1,0,1").unwrap();
    let ext = Bracket::build(p, &Family::PowerSums(vec![a]), 1, 3).unwrap();
    let m = &ext.model;
    let ide = power_sum_basis_ide(&ext, 3).unwrap();
    assert!(ide.coeff(m, &uni(1)).is_zero(m));
    let a2 = ide.coeff(m, &uni(2));
    assert_eq!(a2.rows(), &[vec![m.zero(), m.zero()], vec![m.one(), m.zero()]][..]);
    assert!(ide.coeff(m, &uni(3)).is_zero(m));
    assert!(ide.validate(m, 3).unwrap().passed());
    assert!(ide.is_fundamental(m, &power_sum_solution(&ext).unwrap(), 3).unwrap().passed());
    // a longer request runs out of digits
    let a = PAdicDigits::parse(p, "1,0,1").unwrap();
    assert!(matches!(Bracket::build(p, &Family::PowerSums(vec![a]), 1, 4), Err(Error::DepthExceeded { .. })));
}

#[test]
fn power_sum_descent() {
    for (p, digits, ell, order) in [(2u64, "1,1,0,1,1,0", 1u32, 8u64), (2, "1,1,1,0,1,1", 2, 8), (3, "2,1,2,1", 1, 8)] {
        let p = prime(p);
        let a = PAdicDigits::parse(p, digits).unwrap();
        let ext = Bracket::build(p, &Family::PowerSums(vec![a]), ell, order).unwrap();
        let m = &ext.model;
        let ide = power_sum_basis_ide(&ext, order).unwrap();
        assert!(ide.validate(m, order).unwrap().passed());
        let y = power_sum_solution(&ext).unwrap();
        assert!(ide.is_fundamental(m, &y, order).unwrap().passed());
        assert!(!ide.check_descent(m, ell).unwrap().passed());
        let d = power_sum_descent_gauge(&ext).unwrap();
        let gauged = ide.gauge_transform(m, &d).unwrap();
        assert!(gauged.validate(m, order).unwrap().passed());
        let report = gauged.check_descent(m, ell).unwrap();
        assert!(report.passed(), "p={p} l={ell}: {report:?}");
        let y2 = d.inverse(m).unwrap().mul(m, &y);
        assert!(gauged.is_fundamental(m, &y2, order).unwrap().passed());
    }
}

#[test]
fn json_round_trip_and_check() {
    let text = r#"{"p":2,"m":1,"n":1,"order":8,"coeffs":[{"k":[1],"matrix":[["1*t^-1"]]}]}"#;
    let ide: IdeJson = serde_json::from_str(text).unwrap();
    assert!(ide.check(8).unwrap().passed());
    let bad = r#"{"p":2,"m":1,"n":1,"order":8,"coeffs":[{"k":[1],"matrix":[["1*t^-1 + 1"]]}]}"#;
    let ide: IdeJson = serde_json::from_str(bad).unwrap();
    let report = ide.check(8).unwrap();
    assert_eq!((report.violations[0].k.clone(), report.violations[0].l.clone()), (uni(1), uni(1)));
    let two = r#"{"p":3,"m":2,"n":1,"order":4,"coeffs":[{"k":[1,0],"matrix":[["t1^-1"]]},{"k":[0,1],"matrix":[["t2^-1"]]},{"k":[1,1],"matrix":[["t1^-1*t2^-1"]]}]}"#;
    let ide: IdeJson = serde_json::from_str(two).unwrap();
    assert!(ide.check(4).unwrap().passed());
}

use idgal::derivations::{verify_axioms, PolyModel};
use idgal::ring::{IdRing, Ring};
use idgal::series::Poly;
use idgal::towers::{
    check_composition, kernel_subspace, monomial_ansatz, theta_on_bracket, verify_tower_degrees,
    Bracket, Family,
};
use idgal::{Error, PAdicDigits, Prime};

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn digits(p: Prime, s: &str) -> PAdicDigits {
    PAdicDigits::parse(p, s).unwrap()
}

#[test]
fn rational_function_levels_are_pth_powers() {
    for p in [2u64, 3] {
        let p = prime(p);
        let model = PolyModel::standard(p, 1, 26);
        let ansatz = monomial_ansatz(p, 1, 20);
        for ell in 1..=2u32 {
            let level = kernel_subspace(&model, ell, &ansatz).unwrap();
            let q = p.power(ell);
            let want: Vec<Poly> = (0..=20).filter(|e| e % q == 0).map(|e| Poly::monomial(p, 1, vec![e])).collect();
            assert_eq!(level.basis.len(), want.len());
            for x in &level.basis {
                // every kernel element is a q-th power of an element of K[t]
                let root = model.realize(x).unwrap().p_power_root(ell).unwrap();
                assert!(root.terms().all(|(e, _)| e >= 0));
            }
        }
        let ext = Bracket::build(p, &Family::RationalFunctions, 2, 8).unwrap();
        assert!(ext.is_trivial());
        assert_eq!(ext.degree(), 1);
        assert_eq!(ext.exponent().unwrap(), 0);
    }
}

#[test]
fn tower_degrees_in_one_and_two_variables() {
    for (p, m, ell, deg) in [(2u64, 1usize, 3u32, 12i64), (3, 1, 2, 12), (2, 2, 2, 6), (3, 2, 1, 5)] {
        let report = verify_tower_degrees(prime(p), m, ell, deg).unwrap();
        assert!(report.passed(), "p={p} m={m}: {report:?}");
        assert_eq!(report.levels.len(), ell as usize);
    }
    assert!(matches!(verify_tower_degrees(prime(2), 1, 3, 5), Err(Error::Inconclusive(_))));
}

fn lacunary() -> (Prime, PAdicDigits) {
    let p = prime(2);
    (p, digits(p, "1,1,1,0,1,0,0,1,1,0,1,1"))
}

#[test]
fn lacunary_bracket_generator_three_ways() {
    let (p, alpha) = lacunary();
    for ell in 1..=3u32 {
        let ext = Bracket::build(p, &Family::Lacunary(alpha.clone()), ell, 8).unwrap();
        let by_root = ext.generator_by_root(0).unwrap();
        let cmp = by_root.compare(&ext.series[0]).unwrap();
        assert!(cmp.equal, "ell={ell}: {cmp:?}");
        assert!(cmp.hi.unwrap() - cmp.lo > 8, "window too small: {cmp:?}");
        for n in 0..=8 {
            let th = theta_on_bracket(&ext, 0, n).unwrap();
            assert!(th.agrees(), "ell={ell} n={n}: {th:?}");
        }
        assert_eq!(ext.exponent().unwrap(), ell);
        assert_eq!(ext.degree(), p.power(ell) as usize);
    }
}

#[test]
fn lacunary_bracket_restricts_to_base() {
    let (p, alpha) = lacunary();
    let ext = Bracket::build(p, &Family::Lacunary(alpha.clone()), 2, 8).unwrap();
    let r = &ext.base_generators().unwrap()[0];
    assert!(ext.in_base(r));
    assert!(!ext.in_base(&ext.generator(0)));
    let r_series = &ext.base_series().unwrap()[0];
    assert!(ext.model.realize(r).unwrap().compare(r_series).unwrap().equal);
    for n in 0..=8 {
        let symbolic = ext.model.realize(&ext.model.theta_n(r, n).unwrap()).unwrap();
        assert!(symbolic.compare(&r_series.theta_n(n)).unwrap().equal, "n={n}");
    }
    assert!(verify_axioms(&ext.model, 4).unwrap().passed());
}

#[test]
fn lacunary_bracket_needs_digits() {
    let p = prime(2);
    let short = digits(p, "1,1,0,1");
    assert!(matches!(
        Bracket::build(p, &Family::Lacunary(short), 2, 8),
        Err(Error::DepthExceeded { .. })
    ));
}

fn power_sums() -> (Prime, Vec<PAdicDigits>) {
    let p = prime(2);
    (p, vec![digits(p, "1,0,1,1,0,1,1,1"), digits(p, "0,1,1,0,1,0,1,1")])
}

#[test]
fn power_sum_bracket_generators() {
    let (p, streams) = power_sums();
    for ell in 1..=2u32 {
        let ext = Bracket::build(p, &Family::PowerSums(streams.clone()), ell, 8).unwrap();
        assert_eq!(ext.rank(), 2);
        assert_eq!(ext.degree(), (p.power(ell) * p.power(ell)) as usize);
        for i in 0..2 {
            assert!(ext.generator_by_root(i).unwrap().compare(&ext.series[i]).unwrap().equal);
            for n in 0..=8 {
                assert!(theta_on_bracket(&ext, i, n).unwrap().agrees(), "ell={ell} i={i} n={n}");
            }
        }
        let bases = ext.base_generators().unwrap();
        let series = ext.base_series().unwrap();
        for (s, want) in bases.iter().zip(&series) {
            assert!(ext.in_base(s));
            assert!(ext.model.realize(s).unwrap().compare(want).unwrap().equal);
        }
        assert!(verify_axioms(&ext.model, 4).unwrap().passed());
    }
}

#[test]
fn power_sum_first_order_rule() {
    // theta^(1)(w) = a_{l}, theta^(2)(w) = a_{l+1}, theta^(3)(w) = 0
    let p = prime(2);
    let a = digits(p, "1,0,1,1,0,1");
    let ext = Bracket::build(p, &Family::PowerSums(vec![a]), 1, 4).unwrap();
    let w = ext.generator(0);
    let m = &ext.model;
    assert_eq!(m.theta_n(&w, 1).unwrap(), m.zero());
    assert_eq!(m.theta_n(&w, 2).unwrap(), m.one());
    assert_eq!(m.theta_n(&w, 3).unwrap(), m.zero());
    assert_eq!(m.theta_n(&w, 4).unwrap(), m.one());
}

#[test]
fn basis_coordinates_reassemble() {
    let (p, streams) = power_sums();
    let ext = Bracket::build(p, &Family::PowerSums(streams), 1, 4).unwrap();
    let x = ext.model.poly("t^3*w1^3*w2 + w2^2 + t^-1*w1").unwrap();
    let coords = ext.coords(&x);
    let mut back = ext.model.zero();
    for (c, b) in coords.iter().zip(ext.basis()) {
        back = back.add(&c.mul(&b));
    }
    assert_eq!(back, x);
}

#[test]
fn composition_and_stability() {
    let (p, alpha) = lacunary();
    for (a, b) in [(1u32, 1u32), (1, 2), (2, 1)] {
        let c = check_composition(p, &Family::Lacunary(alpha.clone()), a, b, 4).unwrap();
        assert!(c.passed(), "a={a} b={b}: {c:?}");
    }
    let (p, streams) = power_sums();
    let c = check_composition(p, &Family::PowerSums(streams), 1, 1, 4).unwrap();
    assert!(c.passed());
    // stability: bracket of K(t) stays trivial at every level
    for ell in 0..4 {
        assert!(Bracket::build(p, &Family::RationalFunctions, ell, 4).unwrap().is_trivial());
    }
}

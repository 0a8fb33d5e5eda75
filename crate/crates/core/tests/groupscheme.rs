use std::time::Instant;

use idgal::groupscheme::{
    alpha_frobenius_kernel, check_bialgebra, check_primitive, constants_search, group_algebra_z2, height,
    recognize_power_sums, BialgebraData, TensorSpace,
};
use idgal::ring::Ring;
use idgal::towers::{Bracket, Family};
use idgal::{Error, PAdicDigits, Prime};

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn power_sum_space(p: Prime, streams: &[&str], ell: u32, order: u64) -> TensorSpace {
    let streams = streams.iter().map(|s| PAdicDigits::parse(p, s).unwrap()).collect();
    TensorSpace::new(Bracket::build(p, &Family::PowerSums(streams), ell, order).unwrap())
}

#[test]
fn tensor_theta_examples() {
    // a = (1,1,0,1,1,0,1), l = 1: w has theta^(1)(w) = a_1 = 1
    let p = prime(2);
    let space = power_sum_space(p, &["1,1,0,1,1,0,1"], 1, 8);
    let m = &space.ext().model;
    let w = space.ext().generator(0);
    let one = m.one();
    let unit = space.one(2);
    for n in 1..=8 {
        assert!(space.theta(&unit, n).unwrap().is_zero());
    }
    let z = space.sub(&space.pure(&[w.clone(), one.clone()]), &space.pure(&[one.clone(), w.clone()]));
    assert!(space.theta(&z, 1).unwrap().is_zero());
    let ww = space.pure(&[w.clone(), w.clone()]);
    let want = space.add(&space.pure(&[one.clone(), w.clone()]), &space.pure(&[w.clone(), one.clone()]));
    assert_eq!(space.theta(&ww, 1).unwrap(), want);

    // middle insertion and pairings
    let one3 = space.one(3);
    assert_eq!(space.middle_insertion(&unit).unwrap(), one3);
    let w1 = space.pure(&[w.clone(), one.clone()]);
    assert_eq!(space.middle_insertion(&w1).unwrap(), space.pure(&[w.clone(), one.clone(), one.clone()]));
    assert_eq!(
        space.middle_insertion(&z).unwrap(),
        space.sub(&space.pure(&[w.clone(), one.clone(), one.clone()]), &space.pure(&[one.clone(), one.clone(), w.clone()]))
    );
    assert_eq!(space.pairing(&unit, &unit).unwrap(), one3);
    assert_eq!(
        space.pairing(&z, &unit).unwrap(),
        space.sub(&space.pure(&[w.clone(), one.clone(), one.clone()]), &space.pure(&[one.clone(), w.clone(), one.clone()]))
    );
    assert_eq!(
        space.pairing(&unit, &z).unwrap(),
        space.sub(&space.pure(&[one.clone(), w.clone(), one.clone()]), &space.pure(&[one.clone(), one.clone(), w.clone()]))
    );

    // counit: 1, 0, and w^2 = s - a_0 t in F
    assert_eq!(space.counit(&unit), one);
    assert!(space.counit(&z).is_zero());
    let w2 = space.counit(&ww);
    assert!(space.ext().in_base(&w2));
    let s = &space.ext().base_generators().unwrap()[0];
    assert_eq!(w2, s.sub(&m.poly("t").unwrap()));
}

#[test]
fn primitivity() {
    let p = prime(2);
    let space = power_sum_space(p, &["1,1,0,1,1,0,1"], 1, 8);
    let m = &space.ext().model;
    let w = space.ext().generator(0);
    let z = space.sub(&space.pure(&[w.clone(), m.one()]), &space.pure(&[m.one(), w.clone()]));
    assert!(check_primitive(&space, &z, 8).unwrap().primitive);
    let unit = space.one(2);
    let r = check_primitive(&space, &unit, 8).unwrap();
    assert!(!r.primitive);
    assert!(!r.discrepancy.is_zero());
    // z^3 at level 2: Delta(z^3) has the cross terms z^2 (x) z + z (x) z^2
    let space2 = power_sum_space(p, &["1,1,0,1,1,0,1"], 2, 8);
    let m2 = &space2.ext().model;
    let w = space2.ext().generator(0);
    let z = space2.sub(&space2.pure(&[w.clone(), m2.one()]), &space2.pure(&[m2.one(), w.clone()]));
    assert!(check_primitive(&space2, &space2.mul(&z, &z), 8).unwrap().primitive);
    let z3 = space2.pow(&z, 3);
    assert!(!z3.is_zero());
    assert!(!check_primitive(&space2, &z3, 8).unwrap().primitive);
    // a non-constant input is an error
    let w1 = space2.pure(&[w, m2.one()]);
    assert!(matches!(check_primitive(&space2, &w1, 8), Err(Error::NotConstant(_))));
}

#[test]
fn constants_of_a_power_sum_bracket() {
    let p = prime(2);
    let space = power_sum_space(p, &["1,0,1,1,0,1"], 1, 8);
    let ansatz = space.pair_ansatz(0..=0);
    let found = constants_search(&space, &ansatz, 8).unwrap();
    assert_eq!(found.dimension(), 2);
    let m = &space.ext().model;
    let w = space.ext().generator(0);
    let z = space.sub(&space.pure(&[w.clone(), m.one()]), &space.pure(&[m.one(), w]));
    assert!(found.basis.contains(&space.one(2)));
    assert!(found.basis.contains(&z) || found.basis.contains(&space.neg(&z)));
    for x in &found.basis {
        assert!(space.first_nonconstant_order(x, 8).unwrap().is_none());
    }
}

#[test]
fn constants_of_a_trivial_extension() {
    let p = prime(3);
    let space = TensorSpace::new(Bracket::build(p, &Family::RationalFunctions, 1, 8).unwrap());
    let found = constants_search(&space, &space.pair_ansatz(-3..=3), 8).unwrap();
    assert_eq!(found.dimension(), 1);
    assert_eq!(found.basis[0], space.one(2));
}

#[test]
fn constants_of_a_lacunary_bracket() {
    let p = prime(2);
    let alpha = PAdicDigits::parse(p, "1,1,1,0,1,0,0,1").unwrap();
    let space = TensorSpace::new(Bracket::build(p, &Family::Lacunary(alpha), 1, 16).unwrap());
    let found = constants_search(&space, &space.pair_ansatz(-6..=6), 16).unwrap();
    assert_eq!(found.ansatz_dim, 52);
    assert_eq!(found.dimension(), 1);
}

#[test]
fn bialgebra_examples() {
    for p in [2u64, 3, 5] {
        let p = prime(p);
        let a = alpha_frobenius_kernel(p, 1, 1);
        assert_eq!(a.dim(), p.get() as usize);
        assert!(check_bialgebra(&a).unwrap().passed());
        assert_eq!(height(&a).unwrap(), 1);
    }
    // Delta(z) = z (x) z breaks the counit law
    let p = prime(2);
    let mut bad = alpha_frobenius_kernel(p, 1, 1);
    bad.delta[1] = vec![(1, 1, 1)];
    bad.antipode = None;
    let r = check_bialgebra(&bad).unwrap();
    assert!(!r.counit_laws);
    assert!(!r.passed());

    let g = group_algebra_z2(prime(3));
    assert!(check_bialgebra(&g).unwrap().passed());
    assert!(matches!(height(&g), Err(Error::NotInfinitesimal(_))));

    let trivial = alpha_frobenius_kernel(prime(2), 0, 1);
    assert_eq!(trivial.dim(), 1);
    assert_eq!(height(&trivial).unwrap(), 0);
    assert_eq!(alpha_frobenius_kernel(prime(2), 2, 1).dim(), 4);
    assert_eq!(height(&alpha_frobenius_kernel(prime(2), 2, 1)).unwrap(), 2);
}

#[test]
fn frobenius_kernel_heights() {
    for p in [2u64, 3] {
        for ell in 1..=3u32 {
            for n in 1..=2usize {
                if p == 3 && ell == 3 && n == 2 {
                    continue;
                }
                let data = alpha_frobenius_kernel(prime(p), ell, n);
                assert_eq!(data.dim(), (p as usize).pow(ell * n as u32));
                assert_eq!(height(&data).unwrap(), ell, "p={p} l={ell} n={n}");
                if data.dim() <= 81 {
                    assert!(check_bialgebra(&data).unwrap().passed(), "p={p} l={ell} n={n}");
                }
            }
        }
    }
}

#[test]
fn bialgebra_json_round_trip() {
    let a = alpha_frobenius_kernel(prime(3), 1, 2);
    let text = serde_json::to_string(&a).unwrap();
    let back: BialgebraData = serde_json::from_str(&text).unwrap();
    assert_eq!(a, back);
}

#[test]
fn recognition_small_cases() {
    let start = Instant::now();
    for (p, streams, ell) in [
        (2u64, vec!["1,0,1,1,0,1"], 1u32),
        (2, vec!["1,0,1,1,0,1", "0,1,1,0,1,1"], 1),
        (2, vec!["1,1,0,1,1,0,1"], 2),
        (3, vec!["2,1,0,2,1"], 1),
    ] {
        let p = prime(p);
        let streams: Vec<PAdicDigits> = streams.iter().map(|s| PAdicDigits::parse(p, s).unwrap()).collect();
        let ext = Bracket::build(p, &Family::PowerSums(streams), ell, 8).unwrap();
        let rec = recognize_power_sums(&ext, 8, 16).unwrap();
        assert!(rec.passed(), "{rec:?}");
        assert_eq!(rec.delta_matches, Some(true));
        assert_eq!(rec.height, ell);
        assert_eq!(rec.exponent, ell);
    }
    eprintln!("recognition: {:?}", start.elapsed());
}

use std::time::Instant;

use idgal::pipelines::{default_suite, lacunary_derivative_checks, parse_suite, run_config, run_suite, ExampleConfig};
use idgal::report::Status;
use idgal::{PAdicDigits, Prime};

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

#[test]
fn default_suite_passes() {
    let start = Instant::now();
    let report = run_suite(&default_suite()).unwrap();
    for pipe in &report.pipelines {
        for a in pipe.failures() {
            eprintln!("{} :: {:?}", pipe.name, a);
        }
    }
    assert!(report.passed());
    eprintln!("suite: {:?}", start.elapsed());
}

#[test]
fn corrupted_digit_is_caught_with_its_exponent() {
    let p = prime(2);
    let good = PAdicDigits::parse(p, "1,1,0,1,1,0,1,1,0,1").unwrap();
    // flip the fourth digit in the formula only
    let bad = PAdicDigits::parse(p, "1,1,0,0,1,0,1,1,0,1").unwrap();
    assert!(lacunary_derivative_checks(&good, &good, (-16, 64), 3).unwrap().iter().all(|a| a.passed()));
    let checks = lacunary_derivative_checks(&good, &bad, (-16, 64), 3).unwrap();
    let failed: Vec<_> = checks.iter().filter(|a| a.status == Status::Fail).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|a| a.witness.is_some()), "{failed:?}");
}

#[test]
fn seeded_runs_are_deterministic() {
    let mut cfg = ExampleConfig::new(2, prime(3)).with_random(2, 1);
    cfg.seed = Some(7);
    cfg.ell_max = 1;
    let a = run_config(&cfg).unwrap();
    let b = run_config(&cfg).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    for s in cfg.random_streams(5) {
        assert!(s.depth() >= cfg.required_depth());
        assert_ne!(s.digit(s.depth() - 1).unwrap(), 0);
    }
}

#[test]
fn short_streams_report_precision() {
    let mut cfg = ExampleConfig::new(3, prime(2)).with_streams(["1,0,1"]);
    cfg.ell_max = 1;
    let report = run_config(&cfg).unwrap();
    assert!(report[0].assertions.iter().any(|a| a.status == Status::Precision));
}

#[test]
fn suite_files() {
    let cfgs = parse_suite(r#"{"configs":[{"which":1,"p":2,"ell_max":1}]}"#).unwrap();
    assert_eq!(cfgs.len(), 1);
    assert!(run_suite(&cfgs).unwrap().passed());
    assert!(parse_suite(r#"[{"which":4,"p":2}]"#).is_ok());
    assert!(run_suite(&parse_suite(r#"[{"which":4,"p":2}]"#).unwrap()).is_err());
    assert!(parse_suite(r#"[{"which":1,"p":4}]"#).is_err());
    assert!(parse_suite(r#"[{"which":1,"p":2,"bogus":0}]"#).is_err());
}

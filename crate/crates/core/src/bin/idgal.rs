use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use idgal::derivations::{verify_axioms, AxiomReport, LaurentModel, ModelJson, PolyModel};
use idgal::groupscheme::{check_bialgebra, constants_search, height, recognize_power_sums, BialgebraData, TensorSpace};
use idgal::ide::IdeJson;
use idgal::pipelines::{parse_suite, run_suite, ExampleConfig};
use idgal::report::SuiteReport;
use idgal::towers::{verify_tower_degrees, Bracket, Family};
use idgal::{Error, PAdicDigits, Prime, Result};

#[derive(Parser)]
#[command(name = "idgal", version, about = "Iterative differential algebra over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterative differential equations.
    Ide {
        #[command(subcommand)]
        action: FileAction,
    },
    /// Derivation models.
    Model {
        #[command(subcommand)]
        action: FileAction,
    },
    /// Bialgebras given by structure constants.
    Bialgebra {
        #[command(subcommand)]
        action: FileAction,
    },
    /// Degrees of the tower over K(t1..tm).
    Tower {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        ell: u32,
        #[arg(long = "ansatz-deg")]
        ansatz_deg: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Constants of the tensor square of a bracket.
    Constants {
        #[arg(long, default_value_t = 3)]
        example: u8,
        #[arg(long)]
        p: u64,
        /// Digit streams, `;`-separated.
        #[arg(long)]
        streams: String,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long, default_value_t = 8)]
        order: u64,
        /// `t`-degree bound of the coefficient ansatz.
        #[arg(long, default_value_t = 0)]
        tdeg: i64,
        #[arg(long)]
        json: bool,
    },
    /// Lacunary series checks.
    Example2 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        digits: String,
        #[arg(long, default_value_t = 64)]
        prec: i64,
        #[arg(long = "j-max", default_value_t = 3)]
        j_max: u32,
        #[arg(long, default_value_t = 2)]
        ell: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Power-sum checks and group-scheme recognition.
    Example3 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        streams: String,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long, default_value_t = 16)]
        order: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Axiom sweep on the standard models.
    VerifyAxioms {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 16)]
        order: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run a suite file.
    Suite {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum FileAction {
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        order: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    json: bool,
    /// Seed for randomized streams (else IDGAL_SEED).
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn prime(p: u64) -> Result<Prime> {
    Prime::new(p)
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        print!("{}", text());
    }
}

fn emit_suite(report: &SuiteReport, json: bool) -> bool {
    if json {
        println!("{}", report.to_json());
    } else {
        println!("{report}");
    }
    report.passed()
}

fn axioms_text(name: &str, r: &AxiomReport) -> String {
    let mut s = format!(
        "{name}: {} ({} checks to order {})\n",
        if r.passed() { "pass" } else { "FAIL" },
        r.checked,
        r.order
    );
    for v in r.violations.iter().take(10) {
        s += &format!("  {:?} on {} at i={:?} j={:?}\n", v.law, v.element, v.i.0, v.j.0);
    }
    s
}

fn streams(p: Prime, text: &str) -> Result<Vec<PAdicDigits>> {
    text.split(';').map(|s| PAdicDigits::parse(p, s.trim())).collect()
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Ide { action: FileAction::Check { file, order, json } } => {
            let ide: IdeJson = parse_json(&file)?;
            let order = order.unwrap_or(ide.order);
            let report = ide.check(order)?;
            emit(json, &report, || {
                let mut s = format!("ide {}: {}\n", file.display(), if report.passed() { "pass" } else { "FAIL" });
                for v in &report.violations {
                    s += &format!("  compatibility fails at k={:?} l={:?}\n", v.k.0, v.l.0);
                }
                s
            });
            Ok(report.passed())
        }
        Command::Model { action: FileAction::Check { file, order, json } } => {
            let spec: ModelJson = parse_json(&file)?;
            let model = spec.build()?;
            let report = verify_axioms(&model, order.unwrap_or(spec.order))?;
            emit(json, &report, || axioms_text(&file.display().to_string(), &report));
            Ok(report.passed())
        }
        Command::Bialgebra { action: FileAction::Check { file, json, .. } } => {
            let data: BialgebraData = parse_json(&file)?;
            let report = check_bialgebra(&data)?;
            let h = height(&data).ok();
            emit(json, &json!({ "report": report, "height": h }), || {
                let mut s = format!("bialgebra of dimension {}: {}\n", data.dim(), if report.passed() { "pass" } else { "FAIL" });
                for f in &report.failures {
                    s += &format!("  {f}\n");
                }
                match h {
                    Some(h) => s += &format!("height {h}\n"),
                    None => s += "not infinitesimal\n",
                }
                s
            });
            Ok(report.passed())
        }
        Command::Tower { p, m, ell, ansatz_deg, json } => {
            let p = prime(p)?;
            let deg = ansatz_deg.unwrap_or(p.power(ell));
            let report = verify_tower_degrees(p, m, ell, deg)?;
            emit(json, &report, || {
                let mut s = String::new();
                for l in &report.levels {
                    s += &format!(
                        "level {} over level {}: degree {}, basis {}\n",
                        l.ell,
                        l.ell - 1,
                        l.degree,
                        l.basis.join(", ")
                    );
                }
                s
            });
            Ok(report.passed())
        }
        Command::Constants { example, p, streams: text, ell, order, tdeg, json } => {
            let p = prime(p)?;
            let digits = streams(p, &text)?;
            let family = match example {
                2 if digits.len() == 1 => Family::Lacunary(digits[0].clone()),
                3 => Family::PowerSums(digits),
                _ => return Err(Error::Config("constants needs --example 3, or --example 2 with one stream".into())),
            };
            let ext = Bracket::build(p, &family, ell, order)?;
            let space = TensorSpace::new(ext.clone());
            let found = constants_search(&space, &space.pair_ansatz(-tdeg..=tdeg), order)?;
            let basis: Vec<String> = found.basis.iter().map(|x| space.display(x)).collect();
            let (expected, data) = if example == 3 {
                let rec = recognize_power_sums(&ext, order, 16)?;
                (ext.degree(), Some(rec.data))
            } else {
                (1, None)
            };
            let ok = found.dimension() == expected;
            let out = json!({
                "dimension": found.dimension(),
                "expected": expected,
                "ansatz_dim": found.ansatz_dim,
                "order": order,
                "basis": basis,
                "bialgebra": data,
            });
            emit(json, &out, || {
                let mut s = format!(
                    "constants to order {order}: dimension {} (expected {expected}) in an ansatz of {}\n",
                    found.dimension(),
                    found.ansatz_dim
                );
                for b in &basis {
                    s += &format!("  {b}\n");
                }
                s
            });
            Ok(ok)
        }
        Command::Example2 { p, digits, prec, j_max, ell, out } => {
            let mut cfg = ExampleConfig::new(2, prime(p)?).with_streams([digits]);
            cfg.window = (-16, prec);
            cfg.j_max = j_max;
            cfg.ell_max = ell;
            cfg.seed = out.seed;
            Ok(emit_suite(&run_suite(&[cfg])?, out.json))
        }
        Command::Example3 { p, streams: text, ell, order, out } => {
            let mut cfg = ExampleConfig::new(3, prime(p)?);
            cfg.streams = text.split(';').map(|s| s.trim().to_string()).collect();
            cfg.ell_max = ell;
            cfg.order = order;
            cfg.seed = out.seed;
            // one run with all streams
            let digits = streams(cfg.p, &text)?;
            let report = SuiteReport {
                pipelines: vec![idgal::pipelines::gen_example3(&cfg, &digits)?],
            };
            Ok(emit_suite(&report, out.json))
        }
        Command::VerifyAxioms { p, order, json } => {
            let p = prime(p)?;
            let series = verify_axioms(&LaurentModel::standard(p), order)?;
            let two = verify_axioms(&PolyModel::standard(p, 2, order), order.min(6))?;
            let ok = series.passed() && two.passed();
            emit(json, &json!({ "laurent": series, "poly2": two }), || {
                axioms_text("K((t))", &series) + &axioms_text("K[t1,t2]", &two)
            });
            Ok(ok)
        }
        Command::Suite { config, out } => {
            let mut configs = parse_suite(&read(&config)?)?;
            if out.seed.is_some() {
                for c in &mut configs {
                    c.seed = c.seed.or(out.seed);
                }
            }
            Ok(emit_suite(&run_suite(&configs)?, out.json))
        }
    }
}

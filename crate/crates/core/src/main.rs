use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bidouble::codes::{code_of_classes, image_dimension, isotropy_bound_holds, CodeFixture, ENUMERATION_CAP};
use bidouble::geometry::{class_to_system, h0_class, remove_fixed_part, PointConfiguration};
use bidouble::scenarios::{run_custom, run_scenario, ScenarioError, ScenarioReport, SCENARIOS};
use bidouble::DivisorClass;

#[derive(Parser)]
#[command(name = "bidouble", version, about = "Exact checks for bidouble covers of blown-up planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for the general point and for sampled weights.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads for `verify all`.
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named scenario, or `all`.
    Verify { scenario: String },
    /// Run the cover pipeline on a JSON cover description.
    Custom { file: PathBuf },
    /// h^0 of d*l - sum m_i e_i on the quadrilateral configuration.
    H0 {
        #[arg(long)]
        degree: i64,
        /// Multiplicities, comma or space separated.
        #[arg(long, allow_hyphen_values = true)]
        mults: String,
        /// Add P7 = P2P4 ∩ P5P6.
        #[arg(long)]
        with_p7: bool,
        /// Add a general point drawn from --seed.
        #[arg(long)]
        general_point: bool,
    },
    /// Code of the disjoint nodal classes in a fixture.
    Code {
        #[arg(long)]
        fixture: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Verify { scenario } => verify(&cli, scenario),
        Command::Custom { file } => match run_custom(file, cli.seed) {
            Ok(report) => emit_reports(&cli, &[report]),
            Err(e) => fail(e),
        },
        Command::H0 {
            degree,
            mults,
            with_p7,
            general_point,
        } => h0(&cli, *degree, mults, *with_p7, *general_point),
        Command::Code { fixture } => code(&cli, fixture),
    };
    ExitCode::from(code)
}

fn fail(e: ScenarioError) -> u8 {
    eprintln!("error: {e}");
    e.exit_code() as u8
}

fn input_error(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    2
}

fn verify(cli: &Cli, scenario: &str) -> u8 {
    let names: Vec<&str> = if scenario == "all" {
        SCENARIOS.to_vec()
    } else {
        vec![scenario]
    };
    let jobs = cli.jobs.max(1).min(names.len());
    let chunks: Vec<Vec<(usize, &str)>> = (0..jobs)
        .map(|j| names.iter().copied().enumerate().skip(j).step_by(jobs).collect())
        .collect();
    let mut results: Vec<(usize, Result<ScenarioReport, ScenarioError>)> = std::thread::scope(|s| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                s.spawn(move || {
                    chunk
                        .into_iter()
                        .map(|(i, n)| (i, run_scenario(n, cli.seed)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("scenario thread panicked"))
            .collect()
    });
    // merge in scenario order, independent of scheduling
    results.sort_by_key(|(i, _)| *i);
    let mut reports = Vec::new();
    for (_, r) in results {
        match r {
            Ok(r) => reports.push(r),
            Err(e) => return fail(e),
        }
    }
    emit_reports(cli, &reports)
}

fn emit_reports(cli: &Cli, reports: &[ScenarioReport]) -> u8 {
    match cli.format {
        Format::Json => {
            let value = if reports.len() == 1 {
                serde_json::to_value(&reports[0])
            } else {
                serde_json::to_value(reports)
            };
            out(&serde_json::to_string_pretty(&value.expect("plain data")).expect("plain data"));
        }
        Format::Text => {
            let text: String = reports.iter().map(ScenarioReport::to_text).collect();
            out(text.trim_end());
        }
    }
    if reports.iter().all(ScenarioReport::all_pass) {
        0
    } else {
        1
    }
}

fn emit_value(cli: &Cli, value: &Value) {
    match cli.format {
        Format::Json => out(&serde_json::to_string_pretty(value).expect("plain data")),
        Format::Text => {
            if let Value::Object(map) = value {
                let lines: Vec<String> = map.iter().map(|(k, v)| format!("{k}: {v}")).collect();
                out(&lines.join("\n"));
            }
        }
    }
}

/// Writes one block to stdout; a closed pipe is not an error.
fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{text}");
}

fn parse_mults(s: &str) -> Result<Vec<i64>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|e| format!("bad multiplicity {t:?}: {e}")))
        .collect()
}

fn h0(cli: &Cli, degree: i64, mults: &str, with_p7: bool, general_point: bool) -> u8 {
    let mults = match parse_mults(mults) {
        Ok(m) => m,
        Err(e) => return input_error(e),
    };
    let cfg = PointConfiguration::standard_quadrilateral(with_p7, general_point.then_some(cli.seed));
    if mults.len() > cfg.len() {
        return input_error(format!(
            "{} multiplicities given, the configuration has {} points",
            mults.len(),
            cfg.len()
        ));
    }
    let class = cfg.lattice().class(degree, &mults);
    let h0 = match h0_class(&cfg, &class) {
        Ok(h) => h,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let fixed = remove_fixed_part(&cfg, &class).map(|(_, f)| f).unwrap_or_default();
    let expected = class_to_system(&cfg, &class).ok().map(|s| s.expected_dimension());
    let points: Vec<String> = (1..=cfg.len()).map(|i| cfg.label(i).to_string()).collect();
    emit_value(
        cli,
        &json!({
            "class": class.to_string(),
            "points": points,
            "h0": h0,
            "expected_dimension": expected,
            "fixed_part": fixed,
        }),
    );
    0
}

fn code(cli: &Cli, path: &PathBuf) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return input_error(format!("cannot read {}: {e}", path.display())),
    };
    let fixture: CodeFixture = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(e) => return input_error(format!("cannot parse code fixture: {e}")),
    };
    let classes: Vec<DivisorClass> = match fixture.classes() {
        Ok(c) => c.to_vec(),
        Err(e) => return input_error(e),
    };
    let code = match code_of_classes(&classes) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let isotropy = isotropy_bound_holds(&classes).expect("classes already checked");
    let weights = if code.dimension() <= ENUMERATION_CAP {
        json!({ "exact": code.weights().expect("below cap") })
    } else {
        json!({ "sampled": code.sampled_weights(1 << 12, cli.seed) })
    };
    let doubly_even = code.is_doubly_even().ok();
    emit_value(
        cli,
        &json!({
            "code": code,
            "weights": weights,
            "doubly_even": doubly_even,
            "image_dimension": image_dimension(&classes),
            "isotropy": isotropy,
        }),
    );
    if isotropy.holds {
        0
    } else {
        1
    }
}

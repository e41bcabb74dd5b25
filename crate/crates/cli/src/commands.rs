use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mrpower_core::generators::{named_examples, ExampleChannel};
use mrpower_core::io::ChannelFile;
use mrpower_core::powers::{
    conversion_channel, conversion_ent_lower_bound_capped, measurement_cohering_power,
    state_cohering_power, CONVERSION_GAP_TOL,
};
use mrpower_core::verify::{run_suite, Suite, SuiteConfig, VerificationReport, CSV_HEADER};
use mrpower_core::{Error, QuantumChannel};
use serde_json::json;

use crate::output::sig12;
use crate::{Format, What};

pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INVALID: u8 = 3;
pub const EXIT_INCONSISTENT: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self::usage(format!("{}: {e}", path.display()))
    }
}

fn load_channel(path: &Path) -> Result<QuantumChannel, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let file = ChannelFile::from_json(&text)
        .map_err(|e| Failure::usage(format!("{}: cannot parse channel file: {e}", path.display())))?;
    let ch: QuantumChannel = file
        .to_channel()
        .map_err(|e| Failure::invalid(format!("invalid channel: {e}")))?;
    if !ch.is_square() {
        return Err(Failure::invalid(format!(
            "invalid channel: must be square, got dim_in = {} and dim_out = {}",
            ch.dim_in(),
            ch.dim_out()
        )));
    }
    Ok(ch)
}

fn invalid(e: Error) -> Failure {
    Failure::invalid(e.to_string())
}

pub fn power(path: &Path, what: What) -> Result<(), Failure> {
    let ch = load_channel(path)?;
    let mut out = serde_json::Map::new();
    if matches!(what, What::C | What::Both) {
        out.insert("c".into(), sig12(measurement_cohering_power(&ch).map_err(invalid)?));
    }
    if matches!(what, What::Cg | What::Both) {
        out.insert("cg".into(), sig12(state_cohering_power(&ch).map_err(invalid)?));
    }
    println!("{}", serde_json::Value::Object(out));
    Ok(())
}

pub fn convert(path: &Path, out: &Path, cap: usize) -> Result<(), Failure> {
    let ch = load_channel(path)?;
    let cert = conversion_ent_lower_bound_capped(&ch, cap).map_err(invalid)?;
    let conv = conversion_channel(&ch).map_err(invalid)?;
    fs::write(out, ChannelFile::from_channel(&conv).to_json()).map_err(|e| Failure::io(out, e))?;
    let report = json!({
        "cohering_power": sig12(cert.cohering_power),
        "avg_ere_lower_bound": sig12(cert.avg_ere_lower_bound),
        "gap": cert.gap,
    });
    println!("{report}");
    if cert.gap > CONVERSION_GAP_TOL {
        return Err(Failure {
            code: EXIT_INCONSISTENT,
            message: format!("certificate gap {:e} exceeds {CONVERSION_GAP_TOL:e}", cert.gap),
        });
    }
    Ok(())
}

pub struct VerifyArgs {
    pub suite: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub grid_steps: usize,
}

pub fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let cfg = SuiteConfig {
        dim: args.dim,
        trials: args.trials,
        seed: args.seed,
        tol: args.tol,
        oracle_grid_steps: args.grid_steps,
    };
    if let Some(t) = args.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure::usage(format!("--tol must be a nonnegative number, got {t}")));
        }
    }
    if args.trials == 0 {
        return Err(Failure::usage("--trials must be positive"));
    }
    if args.grid_steps < 100 {
        return Err(Failure::usage("--grid-steps must be at least 100"));
    }

    let reports: Vec<VerificationReport> = if args.suite == "all" {
        let mut reports = Vec::new();
        for suite in Suite::ALL {
            if let Err(e) = suite.check_dim(cfg.dim) {
                println!("SKIP {:<20} {e}", suite.name());
                continue;
            }
            let r = run_suite(suite, &cfg).map_err(|e| Failure::usage(e.to_string()))?;
            println!("{}", r.summary_line());
            reports.push(r);
        }
        reports
    } else {
        let suite: Suite = args.suite.parse().map_err(|e: Error| Failure::usage(e.to_string()))?;
        let r = run_suite(suite, &cfg).map_err(|e| Failure::usage(e.to_string()))?;
        println!("{}", r.summary_line());
        vec![r]
    };

    if let Some(path) = &args.out {
        let body = match args.format {
            Format::Json if args.suite == "all" => serde_json::to_string_pretty(&reports),
            Format::Json => serde_json::to_string_pretty(&reports[0]),
            Format::Csv => Ok(std::iter::once(CSV_HEADER.to_string())
                .chain(reports.iter().flat_map(|r| r.csv_rows()))
                .collect::<Vec<_>>()
                .join("\n")),
        }
        .expect("reports serialize");
        let mut f = fs::File::create(path).map_err(|e| Failure::io(path, e))?;
        writeln!(f, "{body}").map_err(|e| Failure::io(path, e))?;
    }

    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_FAILED,
            message: String::new(),
        })
    }
}

pub fn example(name: &str, out: Option<&Path>) -> Result<(), Failure> {
    let key = ExampleChannel::from_name(name).ok_or_else(|| {
        let known: Vec<_> = ExampleChannel::ALL.iter().map(|e| e.name()).collect();
        Failure::usage(format!("unknown example '{name}' (known: {})", known.join(", ")))
    })?;
    let text = ChannelFile::from_channel(&named_examples::<f64>()[&key]).to_json();
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

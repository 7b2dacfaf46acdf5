//! `qangle`: JSON in, JSON out front end for the library.
//!
//! Exit status 0 on success, 1 on domain errors and 2 on schema or usage
//! errors. Errors are printed as `{"error": code, "detail": text}`.

mod verbs;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qangle::suites::{Suite, SuiteParams};
use serde_json::Value;
use verbs::{Failure, Globals};

#[derive(Parser)]
#[command(name = "qangle", version, about = "Quantum-angle geometry on complex projective space")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Overrides the verb's main tolerance (oracle confirmation, wigner-check).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Read the payload from this file instead of standard input.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Quantum angle between two lines: {"u", "v"}.
    Angle,
    /// Canonical form of a pair or collinear triple: {"lines"}.
    Canonical,
    /// Alpha-set of two lines or a collinear triple: {"alpha" | "a", "lines"}.
    Alphaset,
    /// Double-alpha-set of a collinear triple: {"alpha" | "a", "lines"}.
    DoubleAlphaset,
    /// Members of A_theta at angle alpha from a line:
    /// {"alpha" | "a", "family", "theta", "c1", "c2", "c3"}.
    Cardinality,
    /// High-symmetry verdict for a circle:
    /// {"alpha" | "a", "circle", "dim", "empirical"?: {"triples", "alpha_samples"}}.
    ClassifyCircle,
    /// Explicit non-symmetry witness in C^3: {"alpha" | "a", "c", "d", "t"?}.
    Witness,
    /// Numeric alpha-set members from a seeded cloud:
    /// {"alpha" | "a", "generators", "cloud"?}.
    Oracle,
    /// Haar-random (anti)unitary: {"dim", "antiunitary"?}.
    WignerGenerate,
    /// Symmetry from probe images: {"dim", "images"}.
    WignerFit,
    /// Angle preservation of a Wigner or exotic map:
    /// {"map", "alpha" | "a", "pairs"?, "probe_angle"?}.
    WignerCheck,
    /// Common lines of two circles in one plane: {"e1", "e2", "f1", "f2", "c0"}.
    Intersect,
    /// Intermediate basis for two circles: {"e1", "e2", "f1", "f2", "alpha" | "a"?}.
    Bridge,
    /// Runs a named verification suite; takes no payload.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Shape,
    CollinAlpha,
    Circle4,
    Circle3,
    InfiniteElement,
    CircleChar,
    Basic,
    Section5,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Shape => Suite::Shape,
            SuiteArg::CollinAlpha => Suite::CollinAlpha,
            SuiteArg::Circle4 => Suite::Circle4,
            SuiteArg::Circle3 => Suite::Circle3,
            SuiteArg::InfiniteElement => Suite::InfiniteElement,
            SuiteArg::CircleChar => Suite::CircleChar,
            SuiteArg::Basic => Suite::Basic,
            SuiteArg::Section5 => Suite::Section5,
        }
    }
}

#[derive(clap::Args)]
struct VerifyArgs {
    suite: SuiteArg,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    draws: Option<usize>,
    /// Number of lines in the discovery cloud.
    #[arg(long)]
    cloud: Option<usize>,
}

fn read_payload(path: Option<&PathBuf>) -> Result<Value, Failure> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| Failure::Schema(format!("{}: {e}", p.display())))?;
        }
        None => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Schema(format!("stdin: {e}")))?;
        }
    }
    serde_json::from_str(&text).map_err(|e| Failure::Schema(format!("invalid JSON: {e}")))
}

fn dispatch(cli: &Cli) -> Result<Value, Failure> {
    let g = Globals { seed: cli.seed, tol: cli.tol };
    if let Verb::Verify(v) = &cli.verb {
        let params = SuiteParams {
            a: v.a,
            c: v.c,
            d: v.d,
            dim: v.dim,
            draws: v.draws,
            cloud: v.cloud,
            seed: cli.seed,
        };
        return verbs::verify(v.suite.into(), &params);
    }
    let p = read_payload(cli.input.as_ref())?;
    match cli.verb {
        Verb::Angle => verbs::angle(p),
        Verb::Canonical => verbs::canonical(p),
        Verb::Alphaset => verbs::alphaset(p),
        Verb::DoubleAlphaset => verbs::double_alphaset(p),
        Verb::Cardinality => verbs::cardinality(p),
        Verb::ClassifyCircle => verbs::classify(p, g),
        Verb::Witness => verbs::witness(p),
        Verb::Oracle => verbs::oracle(p, g),
        Verb::WignerGenerate => verbs::wigner_generate(p, g),
        Verb::WignerFit => verbs::wigner_fit(p),
        Verb::WignerCheck => verbs::wigner_check(p, g),
        Verb::Intersect => verbs::intersect(p),
        Verb::Bridge => verbs::bridge(p),
        Verb::Verify(_) => unreachable!("handled above"),
    }
}

fn write_result(cli: &Cli, v: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("values serialise");
    text.push('\n');
    match &cli.out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let t0 = Instant::now();
    let result = dispatch(&cli);
    eprintln!("runtime: {:.3}s", t0.elapsed().as_secs_f64());
    match result {
        Ok(v) => match write_result(&cli, &v) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                println!("{}", serde_json::json!({"error": "IoError", "detail": e.to_string()}));
                ExitCode::from(1)
            }
        },
        Err(f) => {
            println!("{}", f.to_json());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}

//! `dlab`: characteristic tables, verification checks, word manipulation and
//! Jacobians on Danielewski surfaces from the command line.

use clap::{Args, Parser, Subcommand, ValueEnum};
use dlab_core::autos::{conjugate_normal_form, word_apply, word_reduce, Word, INPUT_TOL};
use dlab_core::checks::{registry, run_check, CheckReport};
use dlab_core::diff::DEFAULT_REL_STEP;
use dlab_core::nevanlinna::{characteristic, jacobian_xz, to_csv, RSchedule};
use dlab_core::parse::{format_complex, parse_complex_list};
use dlab_core::poly::ComplexPoly;
use dlab_core::surface::{Danielewski, SurfacePoint};
use dlab_core::surface_expr::parse_expression;
use serde_json::{json, Map, Value};
use std::process::ExitCode;

const DEFAULT_POLY: &str = "-1,0,0,0,1";

#[derive(Parser)]
#[command(name = "dlab", version, about = "Numerical experiments on Danielewski surfaces xy = p(z)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the characteristic of an expression over a geometric r grid
    Tchar(TcharArgs),
    /// Run one named check or the whole registry
    Check(CheckArgs),
    /// Apply, reduce or normalize a word read from a JSON file
    Word {
        #[command(subcommand)]
        action: WordAction,
    },
    /// Chart Jacobian of a word at a point
    Jacobian(PointArgs),
}

#[derive(Args)]
struct TcharArgs {
    /// Ascending coefficients of p, comma separated
    #[arg(long, default_value = DEFAULT_POLY, allow_hyphen_values = true)]
    poly: String,
    /// Expression in x, y, z
    #[arg(long, allow_hyphen_values = true)]
    expr: String,
    #[arg(long, default_value_t = 10.0)]
    r_start: f64,
    #[arg(long, default_value_t = 10.0)]
    factor: f64,
    #[arg(long, default_value_t = 4)]
    steps: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    name: Option<String>,
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    r_start: Option<f64>,
    #[arg(long)]
    factor: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Subcommand)]
enum WordAction {
    /// Image of a point
    Apply(PointArgs),
    /// Reduced form: alternating overshears, possibly followed by one involution
    Reduce(FileArgs),
    /// Conjugate to the alternating shape, with the conjugating word
    Normalform(FileArgs),
}

#[derive(Args)]
struct FileArgs {
    #[arg(long)]
    file: std::path::PathBuf,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    file: std::path::PathBuf,
    #[arg(long, default_value = DEFAULT_POLY, allow_hyphen_values = true)]
    poly: String,
    /// Point on the surface as "x,y,z"
    #[arg(long, allow_hyphen_values = true)]
    point: String,
}

enum Failure {
    Usage(String),
    ChecksFailed,
}

impl From<dlab_core::Error> for Failure {
    fn from(e: dlab_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn surface(poly: &str) -> Result<Danielewski, Failure> {
    Ok(Danielewski::new(poly.parse::<ComplexPoly>()?)?)
}

fn read_word(path: &std::path::Path) -> Result<Word, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(Word::from_json(&text)?)
}

fn read_point(s: &Danielewski, text: &str) -> Result<SurfacePoint, Failure> {
    let c = parse_complex_list(text)?;
    let [x, y, z] = c[..] else {
        return Err(Failure::Usage(format!("a point needs 3 coordinates, got {}", c.len())));
    };
    let p = SurfacePoint::new(x, y, z);
    if !s.contains(&p, INPUT_TOL) {
        return Err(Failure::Usage(format!("point is off the surface (defect {:e})", s.defect(&p))));
    }
    Ok(p)
}

fn point_json(p: &SurfacePoint) -> Value {
    json!({"x": format_complex(p.x), "y": format_complex(p.y), "z": format_complex(p.z)})
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn tchar(a: TcharArgs) -> Result<(), Failure> {
    let s = surface(&a.poly)?;
    let f = parse_expression(&a.expr)?;
    let schedule = RSchedule::new(a.r_start, a.factor, a.steps)?;
    let estimates = schedule
        .radii()
        .into_iter()
        .map(|r| characteristic(&s, &f, r, a.samples, a.seed))
        .collect::<Result<Vec<_>, _>>()?;
    match a.format {
        Format::Csv => print!("{}", to_csv(&estimates)),
        Format::Json => print_json(&serde_json::to_value(&estimates).expect("json")),
    }
    Ok(())
}

fn check(a: CheckArgs) -> Result<(), Failure> {
    let mut config = Map::new();
    if let Some(p) = a.poly {
        config.insert("poly".into(), p.into());
    }
    if let Some(n) = a.samples {
        config.insert("samples".into(), n.into());
    }
    if let Some(r) = a.r_start {
        config.insert("r_start".into(), r.into());
    }
    if let Some(f) = a.factor {
        config.insert("factor".into(), f.into());
    }
    if let Some(k) = a.steps {
        config.insert("steps".into(), k.into());
    }
    let names: Vec<String> = match a.name {
        Some(n) => vec![n],
        None => registry().into_iter().map(String::from).collect(),
    };
    let reports = names
        .iter()
        .map(|n| run_check(n, &config, a.seed))
        .collect::<Result<Vec<CheckReport>, _>>()?;
    let all_pass = reports.iter().all(|r| r.pass);
    let out = if a.all {
        serde_json::to_value(&reports)
    } else {
        serde_json::to_value(&reports[0])
    };
    print_json(&out.expect("json"));
    if all_pass {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}

fn word(action: WordAction) -> Result<(), Failure> {
    match action {
        WordAction::Apply(a) => {
            let s = surface(&a.poly)?;
            let w = read_word(&a.file)?;
            let p = read_point(&s, &a.point)?;
            print_json(&point_json(&word_apply(&s, &w, &p)?));
        }
        WordAction::Reduce(a) => {
            let w = read_word(&a.file)?;
            print_json(&word_reduce(&w).to_word().to_json_value());
        }
        WordAction::Normalform(a) => {
            let nf = conjugate_normal_form(&read_word(&a.file)?);
            print_json(&json!({
                "shape": nf.shape,
                "normal": nf.normal.to_json_value(),
                "conjugator": nf.conjugator.to_json_value(),
            }));
        }
    }
    Ok(())
}

fn jacobian(a: PointArgs) -> Result<(), Failure> {
    let s = surface(&a.poly)?;
    let w = read_word(&a.file)?;
    let p = read_point(&s, &a.point)?;
    let j = jacobian_xz(&s, &w, &p, DEFAULT_REL_STEP)?;
    print_json(&json!({"jacobian": format_complex(j), "abs": j.norm()}));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::Tchar(a) => tchar(a),
        Command::Check(a) => check(a),
        Command::Word { action } => word(action),
        Command::Jacobian(a) => jacobian(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

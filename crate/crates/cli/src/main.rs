//! `frob`: decide Frobenius type, classify small-norm continued fractions
//! and compute sail invariants from the command line.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use frob_core::census::{census_visit, CensusReport, DEFAULT_CENSUS_CAP};
use frob_core::commutant::{CommutantBasis, CommutantSummary};
use frob_core::forms::{q2, q3, FactorTable};
use frob_core::frobenius::{classification_report, decide_thm2, decide_thm3, hunt, ClassifyConfig, FrobeniusVerdict};
use frob_core::parallel::{Workers, WORKERS_ENV};
use frob_core::repro::{repro_all, ReproConfig};
use frob_core::sail::{analyze_sail, cross_check, svg};
use frob_core::solver::{decide, Solvability, SolverConfig, Target};
use frob_core::{Error, IntMatrix};

#[derive(Parser)]
#[command(name = "frob", version, about = "Frobenius-type integer matrices and two-dimensional continued fractions")]
struct Cli {
    /// Worker threads; results never depend on it.
    #[arg(long, global = true, env = WORKERS_ENV, default_value_t = 1)]
    workers: usize,
    /// Seed for sampled property checks; never changes a decision.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct Caps {
    /// Box half-width for witness search (quadratic forms).
    #[arg(long = "box", default_value_t = SolverConfig::default().quad_box)]
    quad_box: u32,
    /// Box half-width per variable for the factors of a product form.
    #[arg(long, default_value_t = SolverConfig::default().product_box)]
    product_box: u32,
    /// Largest modulus scanned for obstructions.
    #[arg(long, default_value_t = SolverConfig::default().modulus_cap)]
    modcap: u32,
}

impl Caps {
    fn solver(self) -> SolverConfig {
        SolverConfig { quad_box: self.quad_box, product_box: self.product_box, modulus_cap: self.modcap }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorChoice {
    Mn,
    Xyz,
    Product,
}

#[derive(Subcommand)]
enum Command {
    /// Count M(k,Z) and H(k,Z) members of a given norm.
    Census {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        norm: u32,
        /// Report every norm from 0 up to --norm.
        #[arg(long)]
        through: bool,
        #[arg(long, default_value_t = DEFAULT_CENSUS_CAP)]
        cap: u32,
        #[arg(long, value_enum, default_value = "csv")]
        emit: Emit,
    },
    /// Basis of the commutant lattice.
    Commutant {
        #[arg(long)]
        matrix: String,
    },
    /// Coefficient tables of the decision forms.
    Forms {
        #[arg(long)]
        matrix: String,
        #[arg(long, value_enum, default_value = "product")]
        factor: FactorChoice,
    },
    /// Decide whether the decision form takes the value ±1.
    Solve {
        #[arg(long)]
        matrix: String,
        #[command(flatten)]
        caps: Caps,
    },
    /// Frobenius-type verdict with its certificate.
    Frobenius {
        #[arg(long)]
        matrix: String,
        #[command(flatten)]
        caps: Caps,
    },
    /// Classify every hyperbolic 3×3 matrix of a norm.
    Classify {
        #[arg(long)]
        norm: u32,
        /// Largest first-row entry tried for conjugators.
        #[arg(long, default_value_t = ClassifyConfig::default().conjugator_cap)]
        conjugator_bound: u32,
        /// Per-matrix assignments as JSONL.
        #[arg(long)]
        jsonl: Option<PathBuf>,
        /// Skip comparing labels against sail invariants.
        #[arg(long)]
        no_sail_check: bool,
        #[arg(long, default_value_t = DEFAULT_CENSUS_CAP)]
        cap: u32,
        #[command(flatten)]
        caps: Caps,
    },
    /// Sail through (0,0,1) and its torus invariants.
    Sail {
        #[arg(long)]
        matrix: String,
        /// Starting radius; doubled up to the cap until the torus closes.
        #[arg(long)]
        radius: Option<i64>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Look for matrices not certified as Frobenius type.
    Hunt {
        #[arg(long)]
        max_norm: u32,
        #[arg(long, default_value_t = DEFAULT_CENSUS_CAP)]
        cap: u32,
        #[command(flatten)]
        caps: Caps,
    },
    /// Re-run every published claim.
    Repro {
        #[arg(long)]
        json: Option<PathBuf>,
        /// Leave timings out so runs compare byte for byte.
        #[arg(long)]
        no_timings: bool,
        #[command(flatten)]
        caps: Caps,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::IntegralityViolated(_) => 2,
            Error::IncreaseRadius(_) | Error::UnitsNotFound(_) => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn parse(text: &str) -> Result<IntMatrix, Failure> {
    Ok(text.parse::<IntMatrix>()?)
}

/// A reader that hangs up early is not an error.
fn quiet_pipe(r: io::Result<()>) -> Result<(), Failure> {
    match r {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit(text: &str) -> Result<(), Failure> {
    quiet_pipe(io::stdout().lock().write_all(text.as_bytes()))
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 2, message: e.to_string() })?;
    emit(&format!("{text}\n"))
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })
}

fn run(cli: Cli) -> Outcome {
    let workers = Workers::new(cli.workers)?;
    match cli.command {
        Command::Census { dim, norm, through, cap, emit } => {
            let norms: Vec<u32> = if through { (0..=norm).collect() } else { vec![norm] };
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            let mut rows: Vec<CensusReport> = Vec::new();
            for n in norms {
                let report = match emit {
                    Emit::Csv => census_visit(dim, n, cap, &workers, |_, _| {})?,
                    Emit::Jsonl => {
                        let mut failed = None;
                        let r = census_visit(dim, n, cap, &workers, |m, class| {
                            let line = json!({ "matrix": m.to_string(), "norm": n, "class": class.tag() });
                            if let Err(e) = writeln!(out, "{line}") {
                                failed.get_or_insert(e);
                            }
                        })?;
                        if let Some(e) = failed {
                            return quiet_pipe(Err(e)).map(|_| 0);
                        }
                        r
                    }
                };
                rows.push(report);
            }
            if let Emit::Csv = emit {
                let mut text = format!("{}\n", CensusReport::csv_header());
                for r in &rows {
                    text.push_str(&r.csv_row());
                    text.push('\n');
                }
                quiet_pipe(out.write_all(text.as_bytes()))?;
            }
            quiet_pipe(out.flush())?;
            Ok(0)
        }
        Command::Commutant { matrix } => {
            let basis = CommutantBasis::of(&parse(&matrix)?)?;
            print_json(&CommutantSummary::from(&basis))?;
            Ok(0)
        }
        Command::Forms { matrix, factor } => {
            let m = parse(&matrix)?;
            if m.dim() == 2 {
                let f = q2(&m)?;
                print_json(&json!({
                    "matrix": m.to_string(),
                    "form": f.to_string(),
                    "coefficients": [f.p.to_string(), f.q.to_string(), f.r.to_string()],
                    "discriminant": f.discriminant().to_string(),
                }))?;
                return Ok(0);
            }
            let (basis, form) = q3(&m)?;
            let body = match factor {
                FactorChoice::Mn => json!({ "mn": FactorTable::mn(&form) }),
                FactorChoice::Xyz => json!({ "xyz": FactorTable::xyz(&form) }),
                FactorChoice::Product => {
                    let terms: Vec<_> = form
                        .product_terms()
                        .into_iter()
                        .map(|(e, c)| json!({ "exponents": e, "coefficient": c.to_string() }))
                        .collect();
                    json!({
                        "mn": FactorTable::mn(&form),
                        "xyz": FactorTable::xyz(&form),
                        "content": form.content().to_string(),
                        "variables": ["x", "y", "z", "m", "n"],
                        "product": terms,
                    })
                }
            };
            print_json(&json!({ "matrix": m.to_string(), "basis": CommutantSummary::from(&basis), "forms": body }))?;
            Ok(0)
        }
        Command::Solve { matrix, caps } => {
            let m = parse(&matrix)?;
            let config = caps.solver();
            let result = if m.dim() == 2 {
                decide(Target::Quadratic(&q2(&m)?), &config)
            } else {
                let (_, form) = q3(&m)?;
                decide(Target::Product(&form), &config)
            };
            print_json(&json!({ "matrix": m.to_string(), "result": result }))?;
            Ok(if matches!(result, Solvability::Unknown { .. }) { 3 } else { 0 })
        }
        Command::Frobenius { matrix, caps } => {
            let m = parse(&matrix)?;
            let verdict = match m.dim() {
                2 => decide_thm2(&m, &caps.solver())?,
                _ => decide_thm3(&m, &caps.solver())?,
            };
            print_json(&json!({ "matrix": m.to_string(), "verdict": verdict }))?;
            Ok(if matches!(verdict, FrobeniusVerdict::Undecided { .. }) { 3 } else { 0 })
        }
        Command::Classify { norm, conjugator_bound, jsonl, no_sail_check, cap, caps } => {
            let config = ClassifyConfig { conjugator_cap: conjugator_bound, solver: caps.solver() };
            let mut report = classification_report(norm, cap, &config, &workers)?;
            let mut code = 0;
            if !no_sail_check {
                let check = cross_check(&mut report, &workers)?;
                for m in &check.disagree {
                    eprintln!("sail invariants contradict the label of {m}");
                }
                for (m, e) in &check.failed {
                    eprintln!("sail invariants unavailable for {m}: {e}");
                }
                if !check.disagree.is_empty() {
                    code = 2;
                }
            }
            if let Some(path) = jsonl {
                let mut text = String::new();
                for a in &report.assignments {
                    text.push_str(&serde_json::to_string(a).map_err(|e| Failure { code: 2, message: e.to_string() })?);
                    text.push('\n');
                }
                write_file(&path, &text)?;
            }
            emit(&report.csv())?;
            if code == 0 && report.unresolved() > 0 {
                code = 3;
            }
            Ok(code)
        }
        Command::Sail { matrix, radius, svg: svg_path, json: json_path } => {
            let m = parse(&matrix)?;
            if radius.is_some_and(|r| r < 1) {
                return Err(Failure { code: 1, message: "radius must be at least 1".into() });
            }
            let analysis = analyze_sail(&m, radius)?;
            let doc = json!({
                "matrix": m.to_string(),
                "radius": analysis.sail.radius,
                "vertices": analysis.sail.vertices(),
                "faces": analysis.sail.faces,
                "units": analysis.units,
                "orbits": { "faces": analysis.torus.faces, "vertices": analysis.torus.vertices },
                "invariants": analysis.torus.invariant,
            });
            if let Some(path) = svg_path {
                write_file(&path, &svg::render(&analysis))?;
            }
            if let Some(path) = json_path {
                let text =
                    serde_json::to_string_pretty(&doc).map_err(|e| Failure { code: 2, message: e.to_string() })?;
                write_file(&path, &text)?;
            }
            print_json(
                &json!({ "matrix": m.to_string(), "radius": analysis.sail.radius, "invariants": analysis.torus.invariant }),
            )?;
            Ok(0)
        }
        Command::Hunt { max_norm, cap, caps } => {
            let report = hunt(max_norm, cap, &caps.solver(), &workers)?;
            print_json(&report)?;
            let undecided = report.findings.iter().any(|f| f.verdict.is_undecided());
            Ok(if undecided { 3 } else { 0 })
        }
        Command::Repro { json: json_path, no_timings, caps } => {
            let config = ReproConfig { solver: caps.solver(), seed: cli.seed, ..ReproConfig::default() };
            let report = repro_all(&config, &workers);
            emit(&report.render(!no_timings))?;
            if let Some(path) = json_path {
                let text =
                    serde_json::to_string_pretty(&report).map_err(|e| Failure { code: 2, message: e.to_string() })?;
                write_file(&path, &text)?;
            }
            Ok(report.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

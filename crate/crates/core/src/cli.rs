//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 usage or input error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::{
    parse_tensors, tensor_from_strings, tensor_to_json, write_csv, write_text, AnyInvariants,
    AnyTensor,
};
use crate::rotations::{rotate, IsotropyTolerance, Orthogonal3, ORTHOGONALITY_TOL};
use crate::scalar::{parse_rational, Backend};
use crate::tensor::COMPONENT_NAMES;
use crate::verify::{self, Suite, VerifyConfig};
use crate::witnesses::j6::solve_published;
use crate::witnesses::j8::{H_BRACKET, ROOT_TOL};
use crate::witnesses::{
    bisect_root, h_eval, verify_j6_separation, verify_j8_separation, SeparationSystem, AGREE_TOL,
    SEPARATION_FACTOR,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "harmonic4",
    version,
    about = "Isotropic invariants of 4th-order 3D harmonic tensors"
)]
pub struct Cli {
    /// Scalar backend for the whole run.
    #[arg(long, global = true, value_enum, default_value_t = Backend::Float)]
    pub backend: Backend,

    /// Seed for random tensors and rotations.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Rotations per tensor in the isotropy suite.
    #[arg(long, global = true, default_value_t = 1000)]
    pub trials: usize,

    /// Tolerance override. verify: witness agreement (default 1e-9, separation
    /// 1e3 times it) and isotropy (default 1e-8 for degree <= 6, 1e-7 above).
    /// solve: agreement (default 1e-9). rotate: orthogonality (default 1e-12).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TensorArgs {
    /// Tensor JSON file: {"components": [...]} or an array of such objects.
    #[arg(short, long)]
    pub input: Vec<PathBuf>,

    /// Inline components in D1111..D2223 order, repeated or comma separated.
    /// Takes precedence over --input.
    #[arg(
        short = 'c',
        long = "component",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub component: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveTarget {
    SmithBaoJ6,
    MixedJ6,
    J8Root,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print all ten invariants.
    Invariants(TensorArgs),
    /// Run verification suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Apply an orthogonal matrix to a tensor.
    Rotate {
        #[command(flatten)]
        tensor: TensorArgs,
        /// Nine entries, row-major, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        matrix: Vec<String>,
    },
    /// Re-solve a separation witness.
    Solve {
        #[arg(value_enum)]
        which: SolveTarget,
    },
}

/// What a command produced.
pub struct Outcome {
    pub body: String,
    pub success: bool,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            success: true,
            diagnostics: Vec::new(),
        }
    }
}

fn read_tensors(args: &TensorArgs, backend: Backend) -> Result<Vec<AnyTensor>> {
    if !args.component.is_empty() {
        return Ok(vec![tensor_from_strings(&args.component, backend)?]);
    }
    if args.input.is_empty() {
        return Err(Error::InvalidArgument(
            "no tensor given; use --input or -c".into(),
        ));
    }
    let mut out = Vec::new();
    for path in &args.input {
        let text = fs::read_to_string(path)?;
        out.extend(parse_tensors(&text, backend)?);
    }
    Ok(out)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn one_or_many(mut items: Vec<Value>) -> Value {
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        Value::Array(items)
    }
}

fn cmd_invariants(args: &TensorArgs, cli: &Cli) -> Result<Outcome> {
    let rows: Vec<AnyInvariants> = read_tensors(args, cli.backend)?
        .iter()
        .map(AnyInvariants::of)
        .collect();
    let body = match cli.format {
        Format::Json => pretty(&one_or_many(
            rows.iter().map(AnyInvariants::to_json).collect(),
        )),
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Text => {
            let mut buf = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                if i > 0 {
                    writeln!(buf)?;
                }
                write_text(&mut buf, row)?;
            }
            String::from_utf8(buf).expect("text is utf-8")
        }
    };
    Ok(Outcome::ok(body))
}

fn cmd_verify(suite: Suite, cli: &Cli) -> Result<Outcome> {
    let mut cfg = VerifyConfig {
        seed: cli.seed,
        trials: cli.trials,
        ..VerifyConfig::default()
    };
    if let Some(tol) = cli.tol {
        cfg.agree_tol = tol;
        cfg.isotropy_tol = IsotropyTolerance::uniform(tol);
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("--trials must be at least 1".into()));
    }
    let summary = verify::run(suite, &cfg);
    let body = match cli.format {
        Format::Json => pretty(&serde_json::to_value(&summary)?),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io_err = |e: csv::Error| Error::InvalidArgument(e.to_string());
            w.write_record(["suite", "check", "pass", "detail"])
                .map_err(io_err)?;
            for c in &summary.checks {
                w.write_record([
                    c.suite.name(),
                    &c.name,
                    if c.pass { "true" } else { "false" },
                    &c.detail,
                ])
                .map_err(io_err)?;
            }
            String::from_utf8(
                w.into_inner()
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?,
            )
            .expect("csv is utf-8")
        }
        Format::Text => {
            let mut s = String::new();
            for c in &summary.checks {
                let mark = if c.pass { "PASS" } else { "FAIL" };
                s.push_str(&format!(
                    "{mark} {:<12} {:<28} {}\n",
                    c.suite.name(),
                    c.name,
                    c.detail
                ));
            }
            s.push_str(&format!(
                "{} passed, {} failed\n",
                summary.passed, summary.failed
            ));
            s
        }
    };
    Ok(Outcome {
        body,
        success: summary.pass,
        diagnostics: summary
            .failures()
            .map(|c| format!("failed: {}/{}: {}", c.suite.name(), c.name, c.detail))
            .collect(),
    })
}

fn cmd_rotate(args: &TensorArgs, matrix: &[String], cli: &Cli) -> Result<Outcome> {
    if matrix.len() != 9 {
        return Err(Error::InvalidArgument(format!(
            "--matrix needs 9 entries, got {}",
            matrix.len()
        )));
    }
    let tol = cli.tol.unwrap_or(ORTHOGONALITY_TOL);
    let tensors = read_tensors(args, cli.backend)?;
    let rotated: Vec<AnyTensor> = match cli.backend {
        Backend::Exact => {
            let entries = matrix
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()?;
            let q = Orthogonal3::from_row_major(&entries, 0.0)?;
            tensors
                .iter()
                .map(|t| match t {
                    AnyTensor::Exact(d) => AnyTensor::Exact(rotate(d, &q)),
                    AnyTensor::Float(_) => unreachable!("backend fixed for the run"),
                })
                .collect()
        }
        Backend::Float => {
            let entries = matrix
                .iter()
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad matrix entry {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let q = Orthogonal3::from_row_major(&entries, tol)?;
            tensors
                .iter()
                .map(|t| AnyTensor::Float(rotate(&t.to_f64(), &q)))
                .collect()
        }
    };
    let body = match cli.format {
        Format::Json => pretty(&one_or_many(rotated.iter().map(tensor_to_json).collect())),
        Format::Csv | Format::Text => {
            let sep = if cli.format == Format::Csv { "," } else { " " };
            let mut s = format!("{}\n", COMPONENT_NAMES.join(sep));
            for t in &rotated {
                let comps = tensor_to_json(t)["components"]
                    .as_array()
                    .expect("components array")
                    .iter()
                    .map(|v| v.as_str().map_or_else(|| v.to_string(), String::from))
                    .collect::<Vec<_>>();
                s.push_str(&comps.join(sep));
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome::ok(body))
}

fn cmd_solve(which: SolveTarget, cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol.unwrap_or(AGREE_TOL);
    let (solve, report) = match which {
        SolveTarget::J8Root => {
            let (lo, hi) = H_BRACKET;
            let solve = bisect_root(h_eval, lo, hi, ROOT_TOL)?;
            let report = verify_j8_separation(tol, SEPARATION_FACTOR * tol)?;
            (solve, report)
        }
        SolveTarget::SmithBaoJ6 | SolveTarget::MixedJ6 => {
            let system = if which == SolveTarget::SmithBaoJ6 {
                SeparationSystem::SmithBao
            } else {
                SeparationSystem::Mixed
            };
            (solve_published(system), verify_j6_separation(system, tol))
        }
    };
    let success = solve.converged && report.pass;
    let mut diagnostics = Vec::new();
    if !success {
        diagnostics.push(format!(
            "not converged or not separating; residual trace: {:?}",
            solve.residual_history
        ));
    }
    let body = match cli.format {
        Format::Json => pretty(&json!({ "solve": solve, "report": report })),
        Format::Csv => {
            let mut s = String::from("index,value\n");
            for (i, x) in solve.solution.iter().enumerate() {
                s.push_str(&format!("{i},{x:?}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "solution {:?}\nresidual {:e} after {} iterations, converged {}\n",
                solve.solution, solve.residual_norm, solve.iterations, solve.converged
            );
            for c in &report.comparisons {
                s.push_str(&format!(
                    "{:<4} {:>22?} {:>22?} gap {:.3e} {:?}\n",
                    c.invariant.name(),
                    c.left,
                    c.right,
                    c.relative_gap,
                    c.role
                ));
            }
            for n in &report.notes {
                s.push_str(n);
                s.push('\n');
            }
            s.push_str(if report.pass { "PASS\n" } else { "FAIL\n" });
            s
        }
    };
    Ok(Outcome {
        body,
        success,
        diagnostics,
    })
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Invariants(args) => cmd_invariants(args, cli),
        Command::Verify { suite } => cmd_verify(*suite, cli),
        Command::Rotate { tensor, matrix } => cmd_rotate(tensor, matrix, cli),
        Command::Solve { which } => cmd_solve(*which, cli),
    }
}

/// Entry point used by the binary.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &outcome.body),
        None => io::stdout().lock().write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for d in &outcome.diagnostics {
        eprintln!("{d}");
    }
    if outcome.success {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("harmonic4").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn inline_components_win() {
        let cli = parse(&[
            "invariants",
            "-i",
            "/nonexistent.json",
            "-c",
            "1,0,0,0,0,0,0,0,0",
        ]);
        let out = execute(&cli).unwrap();
        assert!(out.body.contains("\"J4\": 32.0"), "{}", out.body);
    }

    #[test]
    fn negative_inline_components() {
        let cli = parse(&[
            "--backend",
            "exact",
            "invariants",
            "-c",
            "8,0,0,-4,0,5,5,3,0",
        ]);
        let out = execute(&cli).unwrap();
        assert!(out.body.contains("\"J3\": \"-6480/1\""), "{}", out.body);
    }

    #[test]
    fn reflection_flips_d1113() {
        let cli = parse(&[
            "rotate",
            "-c",
            "0,0,1,0,0,0,0,0,0",
            "--matrix",
            "1,0,0,0,1,0,0,0,-1",
        ]);
        let out = execute(&cli).unwrap();
        let v: Value = serde_json::from_str(&out.body).unwrap();
        assert_eq!(v["components"][2], -1.0);
    }

    #[test]
    fn non_orthogonal_matrix_is_an_input_error() {
        let cli = parse(&[
            "rotate",
            "-c",
            "1,0,0,0,0,0,0,0,0",
            "--matrix",
            "1,0,0,0,2,0,0,0,1",
        ]);
        assert!(matches!(execute(&cli), Err(Error::NotOrthogonal(_))));
    }

    #[test]
    fn missing_tensor_is_an_input_error() {
        assert!(execute(&parse(&["invariants"])).is_err());
    }
}

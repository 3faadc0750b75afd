use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stasheff::error::{Error, Result};
use stasheff_cli::checks::{Check, KoszulExpect, LiftExpect, ObstructionExpect, VectorArg};
use stasheff_cli::format::{emit_algebra, parse_field, AlgebraDesc, FieldDesc, Source};
use stasheff_cli::report::{plumbing_failure, Report, EXIT_ERROR};
use stasheff_cli::scenario::{run_scenario_text, RunOptions, Scenario};

#[derive(Parser)]
#[command(name = "stasheff", version, about = "Exact checks for A∞-algebras and their Maurer–Cartan functors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Builtin id such as `njac(2)`, or a path to a JSON description.
    algebra: String,
    /// `Q` or `F<p>`.
    #[arg(long)]
    field: Option<String>,
    /// Builtin base id such as `trunc(3)`, or a path to a JSON description.
    #[arg(long)]
    base: Option<String>,
    /// Weight truncation `N` of the bar constructions.
    #[arg(long, default_value_t = 3)]
    truncation: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record per-check wall-clock times (reports are then not reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum KoszulArg {
    Koszul,
    NotKoszul,
    Any,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObstructArg {
    Vanishes,
    Obstructed,
}

#[derive(Clone, Copy, ValueEnum)]
enum LiftArg {
    Lifts,
    Obstructed,
}

#[derive(Subcommand)]
enum Command {
    /// Stasheff identities, unit and augmentation.
    CheckAinf {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        arity: usize,
    },
    /// The truncated bar coalgebra and two-sided bar complex.
    Bar {
        #[command(flatten)]
        common: Common,
    },
    /// The dual DG algebra of the truncated bar coalgebra.
    Shat {
        #[command(flatten)]
        common: Common,
    },
    /// Koszulness certificate at the truncation order.
    Koszul {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "koszul")]
        expect: KoszulArg,
    },
    /// Maurer–Cartan residual of `--alpha`, or all solutions.
    Mc {
        #[command(flatten)]
        common: Common,
        /// `c*label + …` in the tensor basis, e.g. `1*x⊗t`.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Isomorphism classes of Maurer–Cartan elements.
    Pi0 {
        #[command(flatten)]
        common: Common,
    },
    /// The obstruction class along the top step of the tower.
    Obstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, value_enum)]
        expect: Option<ObstructArg>,
    },
    /// Order-by-order lifting of a layer-1 element.
    Lift {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum)]
        expect: Option<LiftArg>,
    },
    /// Algebra maps out of H⁰ of the dual against isomorphism classes.
    Prorep {
        #[command(flatten)]
        common: Common,
    },
    /// Homotopy transfer of a DG algebra to its cohomology.
    MinimalModel {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        arity: usize,
    },
    /// Invariance of groupoids under the transferred quasi-isomorphism.
    Invariance {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        arity: usize,
    },
    /// The seeded property suite.
    Properties {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        stasheff_arity: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Print the canonical description of a builtin.
    Emit {
        id: String,
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Run a scenario file.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn source(arg: &str) -> Result<Source> {
    if arg.ends_with(".json") {
        let text = read(Path::new(arg))?;
        let d: AlgebraDesc =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        Ok(Source::Inline(d))
    } else {
        Ok(Source::Builtin(arg.to_string()))
    }
}

fn scenario(name: &str, c: &Common, check: Check) -> Result<Scenario> {
    let field = c.field.as_deref().map(parse_field).transpose()?.map(FieldDesc::of);
    Ok(Scenario {
        name: name.to_string(),
        field,
        algebra: source(&c.algebra)?,
        base: c.base.as_deref().map(source).transpose()?,
        truncation: c.truncation,
        seed: c.seed,
        checks: vec![check],
    })
}

fn text(s: &Option<String>) -> Option<VectorArg> {
    s.clone().map(VectorArg::Text)
}

fn single(command: &Command) -> Option<(&'static str, &Common, Check)> {
    Some(match command {
        Command::CheckAinf { common, arity } => ("check-ainf", common, Check::Axioms { arity: Some(*arity) }),
        Command::Bar { common } => ("bar", common, Check::Bar { order: None }),
        Command::Shat { common } => ("shat", common, Check::Shat { order: None }),
        Command::Koszul { common, expect } => (
            "koszul",
            common,
            Check::Koszul {
                order: None,
                window: None,
                expect: Some(match expect {
                    KoszulArg::Koszul => KoszulExpect::Koszul,
                    KoszulArg::NotKoszul => KoszulExpect::NotKoszul,
                    KoszulArg::Any => KoszulExpect::Any,
                }),
            },
        ),
        Command::Mc { common, alpha } => (
            "mc",
            common,
            Check::Mc {
                alpha: text(alpha),
                expect_count: None,
            },
        ),
        Command::Pi0 { common } => ("pi0", common, Check::Pi0 { expect_count: None }),
        Command::Obstruct { common, alpha, expect } => (
            "obstruct",
            common,
            Check::Obstruct {
                alpha: text(alpha),
                expect: expect.map(|e| match e {
                    ObstructArg::Vanishes => ObstructionExpect::Vanishes,
                    ObstructArg::Obstructed => ObstructionExpect::Obstructed,
                }),
            },
        ),
        Command::Lift { common, alpha, expect } => (
            "lift",
            common,
            Check::Lift {
                alpha: VectorArg::Text(alpha.clone()),
                expect: expect.map(|e| match e {
                    LiftArg::Lifts => LiftExpect::Lifts,
                    LiftArg::Obstructed => LiftExpect::Obstructed,
                }),
            },
        ),
        Command::Prorep { common } => (
            "prorep",
            common,
            Check::Prorep {
                order: None,
                expect_count: None,
            },
        ),
        Command::MinimalModel { common, arity } => {
            ("minimal-model", common, Check::MinimalModel { arity: Some(*arity) })
        }
        Command::Invariance { common, arity } => ("invariance", common, Check::Invariance { arity: Some(*arity) }),
        Command::Properties {
            common,
            stasheff_arity,
            samples,
        } => (
            "properties",
            common,
            Check::Properties {
                order: None,
                stasheff_arity: *stasheff_arity,
                samples: *samples,
            },
        ),
        Command::Emit { .. } | Command::Run { .. } => return None,
    })
}

fn deliver(report: &Report, output: &Output) -> ExitCode {
    let json = report.to_json();
    match &output.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_ERROR as u8);
            }
            eprintln!(
                "{}: {} passed, {} failed, {} refused, {} errors",
                path.display(),
                report.summary.passed,
                report.summary.failed,
                report.summary.refused,
                report.summary.errors
            );
        }
        None => print!("{json}"),
    }
    ExitCode::from(report.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Emit { id, field } => match parse_field(field).and_then(|f| emit_algebra(f, id)) {
            Ok(json) => {
                print!("{json}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(EXIT_ERROR as u8)
            }
        },
        Command::Run { scenario, output } => {
            let report = match read(scenario) {
                Ok(text) => run_scenario_text(&text, RunOptions { timings: output.timings }),
                Err(e) => plumbing_failure(&scenario.display().to_string(), e.to_string()),
            };
            deliver(&report, output)
        }
        command => {
            let (name, common, check) = single(command).expect("single-check subcommand");
            let report = match scenario(name, common, check) {
                Ok(s) => s.run(RunOptions {
                    timings: common.output.timings,
                }),
                Err(e) => plumbing_failure(name, e.to_string()),
            };
            deliver(&report, &common.output)
        }
    }
}

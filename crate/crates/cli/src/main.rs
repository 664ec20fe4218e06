use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use forcelab::extension::{build_extension, ForcingFrame};
use forcelab::forcing::PosetSpec;
use forcelab::suite::{self, RunConfig, SuiteId};
use forcelab::{presets, Caps, Error, ForcingNotion, Formula, HSet, Model, NameContext};

#[derive(Parser)]
#[command(
    name = "forcelab",
    version,
    about = "Generic extensions of finite models, checked exhaustively"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and print a report.
    Verify {
        #[arg(long, default_value_t = 4)]
        rank: usize,
        /// A preset name or a JSON poset file.
        #[arg(long, default_value = "v-shape")]
        poset: String,
        /// Formula file, one formula per line; the built-in suite when absent.
        #[arg(long)]
        formulas: Option<PathBuf>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "renaming,recursion,names,fundamental,axioms"
        )]
        suites: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Record wall time per suite (the report is then no longer reproducible byte for byte).
        #[arg(long)]
        timings: bool,
    },
    /// Decide whether a condition forces a formula of some names.
    Forces {
        #[arg(long, default_value = "v-shape")]
        poset: String,
        #[arg(long, default_value_t = 4)]
        rank: usize,
        #[arg(long)]
        phi: String,
        /// JSON array of names (sets as nested arrays, naturals as numbers).
        #[arg(long)]
        names: Option<PathBuf>,
        /// The condition, as a JSON set label.
        #[arg(long)]
        p: String,
        #[arg(long)]
        trace: bool,
    },
    /// Build the extension by the generic filter above a minimal condition.
    Extension {
        #[arg(long, default_value = "v-shape")]
        poset: String,
        #[arg(long, default_value_t = 4)]
        rank: usize,
        #[arg(long)]
        minimal: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the V-stage of the given rank as JSON.
    GenModel {
        #[arg(long)]
        rank: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

fn caps() -> Result<Caps, Failure> {
    match std::env::var("FORCELAB_CAPS") {
        Ok(spec) => Ok(Caps::default().with_overrides(&spec)?),
        Err(_) => Ok(Caps::default()),
    }
}

fn check_rank(rank: usize, caps: &Caps) -> Result<(), Failure> {
    if rank > caps.max_stage {
        return Err(Failure::Config(
            Error::StageTooLarge {
                stage: rank,
                cap: caps.max_stage,
            }
            .to_string(),
        ));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn load_poset(arg: &str) -> Result<ForcingNotion, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let spec: PosetSpec = serde_json::from_str(&read(path)?)
            .map_err(|e| Failure::Config(format!("{arg}: {e}")))?;
        Ok(spec.build()?)
    } else {
        Ok(presets::by_name(arg)?)
    }
}

fn parse_set(text: &str) -> Result<HSet, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Config(format!("bad set `{text}`: {e}")))
}

fn condition(notion: &ForcingNotion, text: &str) -> Result<usize, Failure> {
    let x = parse_set(text)?;
    notion
        .index_of(&x)
        .ok_or_else(|| Failure::Config(format!("{text} is not a condition of the poset")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let caps = caps()?;
    match cli.command {
        Command::Verify {
            rank,
            poset,
            formulas,
            suites,
            seed,
            format,
            timings,
        } => {
            check_rank(rank, &caps)?;
            let notion = load_poset(&poset)?;
            let (label, formula_suite) = match &formulas {
                Some(path) => (
                    path.display().to_string(),
                    suite::parse_formula_file(&read(path)?)?,
                ),
                None => ("builtin".to_string(), suite::builtin_formulas()),
            };
            let suites = suites
                .iter()
                .map(|s| s.trim().parse::<SuiteId>())
                .collect::<Result<Vec<_>, _>>()?;
            let config = RunConfig {
                ground_rank: rank,
                poset,
                notion,
                formulas: label,
                formula_suite,
                suites,
                seed,
                caps,
            };
            let report = suite::run(&config, timings)?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("reports serialize")
                ),
                Format::Text => print!("{}", report.render_text()),
            }
            Ok(report.exit_code())
        }
        Command::Forces {
            poset,
            rank,
            phi,
            names,
            p,
            trace,
        } => {
            check_rank(rank, &caps)?;
            let notion = load_poset(&poset)?;
            let phi: Formula = forcelab::formula::parse(&phi)?;
            let names: Vec<HSet> = match names {
                Some(path) => serde_json::from_str(&read(&path)?)
                    .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?,
                None => Vec::new(),
            };
            let p = condition(&notion, &p)?;
            let frame = ForcingFrame::new(Model::v_stage(rank, &caps)?, notion, &caps)?;
            let verdict = frame.forces(p, &phi, &names)?;
            println!("{verdict}");
            if trace {
                let n = frame.notion();
                for row in frame.forces_trace(p, &phi, &names)? {
                    let members: Vec<String> = row
                        .filter
                        .iter()
                        .map(|&q| n.element(q).to_string())
                        .collect();
                    println!(
                        "G = {{{}}}  contains p: {}  satisfied: {}",
                        members.join(","),
                        row.contains_p,
                        row.satisfied
                    );
                }
            }
            Ok(0)
        }
        Command::Extension {
            poset,
            rank,
            minimal,
            out,
        } => {
            check_rank(rank, &caps)?;
            let notion = load_poset(&poset)?;
            let m = condition(&notion, &minimal)?;
            let filter = notion
                .generic_filters()
                .into_iter()
                .find(|g| g.certificate == forcelab::forcing::Certificate::MinimalUpset(m))
                .ok_or_else(|| Failure::from(Error::NotMinimal(minimal.clone())))?;
            let model = Model::v_stage(rank, &caps)?;
            let ctx = NameContext::new(model, notion.into(), filter);
            let ext = build_extension(ctx, &caps)?;
            let dump =
                serde_json::to_string_pretty(&ext.dump(Some(rank))).expect("dumps serialize");
            emit(out.as_deref(), &dump)?;
            Ok(0)
        }
        Command::GenModel { rank } => {
            check_rank(rank, &caps)?;
            let model = Model::v_stage(rank, &caps)?;
            println!(
                "{}",
                serde_json::to_string(model.universe()).expect("sets serialize")
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

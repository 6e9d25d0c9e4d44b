use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use firefight::harness::report::{json_line, table, BatchOutcome};
use firefight::harness::{
    parse_instance, ratio_batch, ratio_report, run_suite, serialize_instance, BatchSpec, HarnessError,
    InstanceFile, Suite,
};
use firefight::instances::{
    make_alge_tight, make_tadpole, random_cactus, random_sequence, random_tree, random_unicyclic,
    tadpole_adversary_run, InstanceError,
};
use firefight::online::{run_algorithm, AlgorithmKind};
use firefight::opt::{solve_opt, OptError, SolverConfig};
use firefight::Instance;

#[derive(Parser)]
#[command(name = "firefight", version, about = "Online firefighting experiments on trees and cacti")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    JsonLines,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Tree,
    Unicyclic,
    Cactus,
    Tadpole,
    AlgeTight,
}

#[derive(Subcommand)]
enum Command {
    /// Play one online strategy on an instance file.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        alg: AlgorithmKind,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Solve an instance file exactly.
    Opt {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Compare a strategy with the optimum on one file or a random batch.
    Ratio {
        #[arg(long, value_parser = parse_kind)]
        alg: AlgorithmKind,
        /// Instance file; without it a random batch is generated.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 14)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the json-lines records here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json-lines")]
        format: Format,
    },
    /// Play the adaptive tadpole adversary against a strategy.
    Adversary {
        #[arg(long, value_parser = parse_kind)]
        alg: AlgorithmKind,
        #[arg(long)]
        beta: usize,
        #[arg(long, value_enum, default_value = "json-lines")]
        format: Format,
    },
    /// Write a generated instance file.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Vertex count of random families.
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        alpha: usize,
        #[arg(long, default_value_t = 3)]
        beta: usize,
        /// Comma-separated firefighter counts; random when omitted.
        #[arg(long, value_delimiter = ',')]
        sequence: Option<Vec<usize>>,
        /// Random sequences use even counts only.
        #[arg(long)]
        even: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run property suites; counterexamples are written under --out.
    CheckLemmas {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "counterexamples")]
        out: PathBuf,
    },
}

fn parse_kind(s: &str) -> Result<AlgorithmKind, String> {
    s.parse()
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    PropertyFailure,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::PropertyFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    let budget = e.chain().any(|c| {
        matches!(
            c.downcast_ref::<HarnessError>(),
            Some(HarnessError::Opt(OptError::SearchBudgetExceeded { .. }))
        ) || matches!(c.downcast_ref::<OptError>(), Some(OptError::SearchBudgetExceeded { .. }))
            || matches!(
                c.downcast_ref::<InstanceError>(),
                Some(InstanceError::Opt(OptError::SearchBudgetExceeded { .. }))
            )
    });
    if budget {
        3
    } else {
        2
    }
}

fn load(path: &Path) -> Result<InstanceFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut file = parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?;
    if file.name.is_none() {
        file.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    }
    Ok(file)
}

fn execute(command: Command) -> Result<Status> {
    let config = SolverConfig::from_env();
    match command {
        Command::Run { instance, alg, format } => {
            let file = load(&instance)?;
            let report = run_algorithm(&file.instance, alg)?;
            match format {
                Format::JsonLines => {
                    let line = serde_json::json!({
                        "instance": file.name,
                        "kind": alg,
                        "profit": report.profit,
                        "trace": report.trace.entries,
                    });
                    println!("{line}");
                }
                Format::Table => {
                    println!("{} on {}: profit {}", alg, file.name.as_deref().unwrap_or("-"), report.profit);
                    println!("{:>5} {:>6} {:>7}  rule", "time", "round", "vertex");
                    for (e, d) in report.trace.entries.iter().zip(&report.decisions) {
                        println!("{:>5} {:>6} {:>7}  {:?}", e.time, e.round, e.vertex, d.rule);
                    }
                }
            }
            Ok(Status::Ok)
        }
        Command::Opt { instance, format } => {
            let file = load(&instance)?;
            let result = solve_opt(&file.instance, &config)?;
            match format {
                Format::JsonLines => {
                    let line = serde_json::json!({
                        "instance": file.name,
                        "value": result.value,
                        "schedule": result.schedule.entries,
                        "nodes_explored": result.nodes_explored,
                    });
                    println!("{line}");
                }
                Format::Table => {
                    println!("optimum {} ({} search nodes)", result.value, result.nodes_explored);
                    println!("{:>6} {:>7}", "round", "vertex");
                    for (round, v) in &result.schedule.entries {
                        println!("{round:>6} {v:>7}");
                    }
                }
            }
            Ok(Status::Ok)
        }
        Command::Ratio {
            alg,
            instance,
            trials,
            n_max,
            seed,
            out,
            format,
        } => {
            let outcome = match instance {
                Some(path) => {
                    let file = load(&path)?;
                    BatchOutcome {
                        reports: vec![ratio_report(&file, alg, &config)?],
                        skipped: Vec::new(),
                    }
                }
                None => ratio_batch(
                    &BatchSpec {
                        kind: alg,
                        trials,
                        n_max,
                        seed,
                    },
                    &config,
                )?,
            };
            let lines: String = outcome.reports.iter().map(|r| json_line(r) + "\n").collect();
            if let Some(path) = &out {
                fs::write(path, &lines).with_context(|| format!("writing {}", path.display()))?;
            }
            match format {
                Format::JsonLines => {
                    if out.is_none() {
                        print!("{lines}");
                    }
                    eprint!("{}", table(&outcome.reports));
                }
                Format::Table => print!("{}", table(&outcome.reports)),
            }
            eprintln!(
                "{} reports, {} skipped, max ratio {}",
                outcome.reports.len(),
                outcome.skipped.len(),
                outcome.max_ratio().map_or_else(|| "-".to_string(), |r| r.to_string())
            );
            Ok(if outcome.all_bounds_satisfied() {
                Status::Ok
            } else {
                Status::PropertyFailure
            })
        }
        Command::Adversary { alg, beta, format } => {
            let report = tadpole_adversary_run(alg, beta)?;
            match format {
                Format::JsonLines => println!("{}", serde_json::to_string(&report)?),
                Format::Table => println!(
                    "{} beta {} (n {}): {:?} sequence {:?}, alg {}, opt {}, ratio {}, bound {}/{} {}",
                    report.kind,
                    report.beta,
                    report.n,
                    report.case,
                    report.sequence,
                    report.alg_profit,
                    report.opt_profit,
                    report.ratio,
                    report.bound_num,
                    report.bound_den,
                    if report.bound_met { "met" } else { "NOT MET" }
                ),
            }
            Ok(if report.bound_met {
                Status::Ok
            } else {
                Status::PropertyFailure
            })
        }
        Command::Gen {
            family,
            n,
            alpha,
            beta,
            sequence,
            even,
            seed,
            out,
        } => {
            let file = generate(family, n, alpha, beta, sequence, even, seed)?;
            fs::write(&out, serialize_instance(&file)).with_context(|| format!("writing {}", out.display()))?;
            Ok(Status::Ok)
        }
        Command::CheckLemmas {
            suite,
            trials,
            seed,
            out,
        } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>()?]
            };
            let mut status = Status::Ok;
            for s in suites {
                let report = run_suite(s, trials, seed, &config)?;
                println!("{}", report.summary());
                if let Some(cx) = &report.first_counterexample {
                    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
                    let path = out.join(format!("{s}.counterexample"));
                    fs::write(&path, cx.to_text()).with_context(|| format!("writing {}", path.display()))?;
                    println!("  first counterexample (trial {}): {}", cx.trial, path.display());
                }
                if !report.passed() {
                    status = Status::PropertyFailure;
                }
            }
            std::io::stdout().flush()?;
            Ok(status)
        }
    }
}

fn generate(
    family: Family,
    n: usize,
    alpha: usize,
    beta: usize,
    sequence: Option<Vec<usize>>,
    even: bool,
    seed: u64,
) -> Result<InstanceFile> {
    let (name, graph) = match family {
        Family::AlgeTight => {
            let inst = make_alge_tight(beta)?;
            let inst = match sequence {
                Some(s) => inst.with_sequence(s),
                None => inst,
            };
            return Ok(InstanceFile::named(format!("alge-tight-{beta}"), inst));
        }
        Family::Tree => (format!("tree-{n}-{seed}"), random_tree(n, seed)?),
        Family::Unicyclic => (format!("unicyclic-{n}-{seed}"), random_unicyclic(n, n, true, seed)?),
        Family::Cactus => (format!("cactus-{n}-{seed}"), random_cactus(n, 0.5, n.max(3), seed)?),
        Family::Tadpole => (format!("tadpole-{alpha}-{beta}"), make_tadpole(alpha, beta)?),
    };
    let sequence = sequence.unwrap_or_else(|| random_sequence(4, graph.n() / 2, even, seed));
    Ok(InstanceFile::named(name, Instance::new(graph, sequence)))
}

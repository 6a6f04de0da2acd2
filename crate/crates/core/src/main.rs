use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use lucaswalk::report::{Payload, ReportEnvelope, WalkPayload};
use lucaswalk::sequences::DEFAULT_MAX_INDEX;
use lucaswalk::suites::{self, Suite, VerifyOptions};
use lucaswalk::walker::{self, SimulationOutcome};
use lucaswalk::{bounds, stepper, Error, SequenceParams, WalkConfig};

const EXIT_USAGE: u8 = 2;
const EXIT_MEMBERSHIP: u8 = 3;
const EXIT_CERTIFICATION: u8 = 4;
const EXIT_SUITE_FAILED: u8 = 1;

#[derive(Parser)]
#[command(name = "lucaswalk", version, about = "Digit-appending walks along Fibonacci and Lucas sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound quantities and the longest walk for one configuration.
    Analyze {
        #[command(flatten)]
        cfg: CfgArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// List step witnesses from one index or from every index up to the
    /// certificate threshold plus margin.
    Steps {
        #[command(flatten)]
        cfg: CfgArgs,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        from_index: Option<u64>,
        #[arg(long)]
        all: bool,
        #[arg(long, env = "LUCASWALK_MARGIN", default_value_t = walker::DEFAULT_SCAN_MARGIN)]
        margin: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Simulate a walk from a start value, or print the longest walk.
    Walk {
        #[command(flatten)]
        cfg: CfgArgs,
        #[arg(long, required_unless_present = "longest")]
        start_value: Option<String>,
        /// Comma-separated t:r blocks, e.g. 1:3,2:15
        #[arg(long, requires = "start_value", conflicts_with = "longest")]
        blocks: Option<String>,
        #[arg(long)]
        longest: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run invariant suites.
    Verify {
        /// identities, growth, differential, rigidity or all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 200)]
        max_m: u64,
        /// Defaults to --max-m.
        #[arg(long)]
        max_k: Option<u64>,
        /// Semicolon-separated P,Q pairs for the addition-formula suite.
        #[arg(long, allow_hyphen_values = true)]
        params_grid: Option<String>,
        /// Restrict differential and rigidity suites to one base (needs --digits).
        #[arg(long, requires = "digits")]
        base: Option<u64>,
        #[arg(long, requires = "base")]
        digits: Option<u32>,
        #[arg(long, default_value = "1,-1", allow_hyphen_values = true)]
        params: String,
        #[arg(long, env = "LUCASWALK_MAX_INDEX", default_value_t = DEFAULT_MAX_INDEX)]
        max_index: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Build and check a termination certificate.
    Certify {
        #[command(flatten)]
        cfg: CfgArgs,
        #[arg(long, env = "LUCASWALK_MARGIN", default_value_t = walker::DEFAULT_SCAN_MARGIN)]
        margin: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct CfgArgs {
    #[arg(long)]
    base: u64,
    #[arg(long)]
    digits: u32,
    /// Sequence parameters "P,Q"; Fibonacci is 1,-1.
    #[arg(long, default_value = "1,-1", allow_hyphen_values = true)]
    params: String,
    #[arg(long, env = "LUCASWALK_MAX_INDEX", default_value_t = DEFAULT_MAX_INDEX)]
    max_index: u64,
}

impl CfgArgs {
    fn config(&self) -> Result<WalkConfig, Failure> {
        build_config(&self.params, self.base, self.digits, self.max_index)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Certification(_) => EXIT_CERTIFICATION,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn build_config(params: &str, base: u64, digits: u32, max_index: u64) -> Result<WalkConfig, Failure> {
    let params: SequenceParams = params.parse()?;
    Ok(WalkConfig::new(params, base, digits)?.with_max_index(max_index))
}

fn emit(env: &ReportEnvelope, format: Format) -> Result<(), Failure> {
    let text = match format {
        Format::Json => env.to_json()?,
        Format::Csv => env.to_csv()?,
        Format::Table => env.to_table(),
    };
    print!("{text}");
    if !text.ends_with('\n') {
        println!();
    }
    Ok(())
}

fn parse_blocks(s: &str) -> Result<Vec<(u32, BigUint)>, Failure> {
    s.split(',')
        .filter(|b| !b.trim().is_empty())
        .map(|b| {
            let bad = || Failure::usage(format!("malformed block {b:?}, expected t:r"));
            let (t, r) = b.trim().split_once(':').ok_or_else(bad)?;
            let t = t.parse::<u32>().map_err(|_| bad())?;
            let r = BigUint::parse_bytes(r.as_bytes(), 10).ok_or_else(bad)?;
            Ok((t, r))
        })
        .collect()
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze { cfg, format } => {
            let cfg = cfg.config()?;
            let report = bounds::bound_report(&cfg)?;
            emit(&ReportEnvelope::new("analyze", Some(cfg), Payload::BoundReport(report)), format)?;
            Ok(0)
        }
        Command::Steps { cfg, from_index, all, margin, format } => {
            let cfg = cfg.config()?;
            let mut witnesses = Vec::new();
            if all {
                let graph = walker::build_step_graph(&cfg, margin)?;
                witnesses.extend(graph.witnesses().cloned());
            } else if let Some(m) = from_index {
                witnesses = stepper::enumerate_steps_from(&cfg, m)?;
            }
            witnesses.sort_by_key(|w| (w.m, w.t, w.k));
            emit(&ReportEnvelope::new("steps", Some(cfg), Payload::Witnesses(witnesses)), format)?;
            Ok(0)
        }
        Command::Walk { cfg, start_value, blocks, longest, format } => {
            let cfg = cfg.config()?;
            let outcome = if longest {
                let (_, walk) = walker::longest_walk(&cfg)?;
                SimulationOutcome::Completed { walk }
            } else {
                let raw = start_value.unwrap_or_default();
                let value = BigUint::parse_bytes(raw.as_bytes(), 10)
                    .ok_or_else(|| Failure::usage(format!("start value {raw:?} is not a nonnegative integer")))?;
                let seq = cfg.sequence();
                let Some(start) = seq.index_of_value(&value) else {
                    let near = seq.lower_bound(&value)?.map(|n| {
                        let above = seq.term(n).map(|v| v.to_string()).unwrap_or_default();
                        let below = n.checked_sub(1).and_then(|b| seq.term(b).ok()).map(|v| v.to_string());
                        format!("nearest members: {} and {above}", below.unwrap_or_else(|| "-".into()))
                    });
                    return Err(Failure {
                        code: EXIT_MEMBERSHIP,
                        message: format!(
                            "start value {value} is not a member of U({}); {}",
                            cfg.params,
                            near.unwrap_or_else(|| "beyond the index ceiling".into())
                        ),
                    });
                };
                let blocks = parse_blocks(blocks.as_deref().unwrap_or(""))?;
                walker::simulate_walk(&cfg, start, &blocks)?
            };
            let failed = matches!(outcome, SimulationOutcome::Failed { .. });
            if let SimulationOutcome::Failed { block, value, .. } = &outcome {
                eprintln!("block {block} produced {value}, which is not a member");
            }
            let payload = WalkPayload::new(&cfg, outcome)?;
            emit(&ReportEnvelope::new("walk", Some(cfg), Payload::Walk(payload)), format)?;
            Ok(if failed { EXIT_MEMBERSHIP } else { 0 })
        }
        Command::Verify { suite, max_m, max_k, params_grid, base, digits, params, max_index, format } => {
            let suite: Suite = suite.parse()?;
            let params_grid = match params_grid {
                Some(g) => g
                    .split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.parse::<SequenceParams>())
                    .collect::<Result<Vec<_>, _>>()?,
                None => suites::default_params_grid(),
            };
            let (config, cfgs) = match (base, digits) {
                (Some(b), Some(n)) => {
                    let cfg = build_config(&params, b, n, max_index)?;
                    (Some(cfg), vec![cfg])
                }
                _ => {
                    let mut grid = Vec::new();
                    for b in 2..=16 {
                        for n in 1..=2 {
                            grid.push(WalkConfig::fibonacci(b, n)?.with_max_index(max_index));
                        }
                    }
                    (None, grid)
                }
            };
            let opts = VerifyOptions { max_m, max_k: max_k.unwrap_or(max_m), params_grid, cfgs };
            let results = suites::run(suite, &opts)?;
            let all_passed = results.iter().all(|r| r.passed);
            emit(&ReportEnvelope::new("verify", config, Payload::Suites(results)), format)?;
            Ok(if all_passed { 0 } else { EXIT_SUITE_FAILED })
        }
        Command::Certify { cfg, margin, format } => {
            let cfg = cfg.config()?;
            if margin < 1 {
                return Err(Failure::usage("--margin must be at least 1"));
            }
            let cert = walker::certify_termination(&cfg, margin).map_err(|e| match e {
                Error::IndexLimit { .. } => Failure {
                    code: EXIT_CERTIFICATION,
                    message: format!("certification incomplete: {e}"),
                },
                other => other.into(),
            })?;
            emit(&ReportEnvelope::new("certify", Some(cfg), Payload::Certificate(cert)), format)?;
            Ok(0)
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

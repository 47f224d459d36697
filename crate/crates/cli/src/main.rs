use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand};
use molreward_cli::build::{bloom_build, mcq_gen, ref_build, run_simulation};
use molreward_cli::config::CONFIG_ENV;
use molreward_cli::{grade_stream, Engine, EngineConfig};
use molreward_grpo::SimConfig;
use molreward_mcq::SetConfig;
use molreward_rewards::BuildOptions;

/// Verifiable chemistry rewards: grading, artifact builders and tooling.
#[derive(Parser)]
#[command(name = "molreward", version)]
struct Cli {
    /// Engine config file (TOML).
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grade JSONL records; one result line per input line, in input order.
    Grade {
        /// Input JSONL (`-` for stdin).
        #[arg(short, long, default_value = "-")]
        input: PathBuf,
        /// Output JSONL (`-` for stdout).
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        /// Worker threads; overrides the config file (0 = all cores).
        #[arg(short = 'j', long)]
        parallelism: Option<usize>,
        /// Default `partial_credit` flag for records that omit it.
        #[arg(long)]
        partial_credit: Option<bool>,
        /// Default `quality_bonus` flag for records that omit it.
        #[arg(long)]
        quality_bonus: Option<bool>,
    },
    /// Build a Bloom filter of canonical SMILES (e.g. a purchasable catalog).
    BloomBuild {
        /// Newline-delimited SMILES.
        input: PathBuf,
        /// Design capacity.
        #[arg(short, long, default_value_t = 1_000_000)]
        n: u64,
        /// Target false-positive rate at capacity.
        #[arg(short, long, default_value_t = 0.001)]
        p: f64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Build the plausibility reference (ring systems and atom environments).
    RefBuild {
        /// Newline-delimited SMILES catalog.
        catalog: PathBuf,
        /// Output directory.
        #[arg(short, long)]
        out: PathBuf,
        /// Capacity of each reference filter.
        #[arg(long, default_value_t = BuildOptions::default().capacity)]
        capacity: u64,
        #[arg(long, default_value_t = BuildOptions::default().fp_rate)]
        fp_rate: f64,
    },
    /// Generate multiple-choice questions with a leakage-free split.
    McqGen {
        /// Property table (`smiles`, `property`, `value` columns).
        table: PathBuf,
        /// Generation settings (TOML); defaults when omitted.
        #[arg(long)]
        settings: Option<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
        /// Overrides the settings seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the curriculum simulation and write per-step metrics as CSV.
    Simulate {
        /// Simulation settings (TOML).
        settings: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Overrides the settings seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the settings curriculum fraction.
        #[arg(long)]
        eps_cur: Option<f64>,
    },
    /// Serve `POST /v1/grade` and `GET /healthz`.
    Serve {
        /// Overrides `server.bind`.
        #[arg(long)]
        bind: Option<String>,
        /// Overrides `server.max_in_flight`.
        #[arg(long)]
        max_in_flight: Option<usize>,
    },
}

fn read_toml<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Grade { input, output, parallelism, partial_credit, quality_bonus } => {
            let mut config = EngineConfig::resolve(cli.config.as_deref())?;
            if let Some(v) = partial_credit {
                config.flags.partial_credit = v;
            }
            if let Some(v) = quality_bonus {
                config.flags.quality_bonus = v;
            }
            let threads = parallelism.unwrap_or(config.grade.parallelism);
            let engine = Engine::from_config(config)?;
            let reader: Box<dyn std::io::BufRead> = if input.as_os_str() == "-" {
                Box::new(std::io::stdin().lock())
            } else {
                Box::new(BufReader::new(File::open(&input).with_context(|| format!("opening {}", input.display()))?))
            };
            let writer: Box<dyn std::io::Write> = if output.as_os_str() == "-" {
                Box::new(BufWriter::new(std::io::stdout().lock()))
            } else {
                Box::new(BufWriter::new(File::create(&output).with_context(|| format!("creating {}", output.display()))?))
            };
            let s = grade_stream(&engine, reader, writer, threads)?;
            eprintln!(
                "records={} graded={} record_faults={} config_faults={} unavailable={}",
                s.records, s.graded, s.record_faults, s.config_faults, s.unavailable
            );
            Ok(if s.config_faults > 0 { ExitCode::from(3) } else { ExitCode::SUCCESS })
        }
        Command::BloomBuild { input, n, p, out } => {
            let r = bloom_build(&input, n, p, &out)?;
            println!("parsed={} skipped={} inserted={}", r.parsed, r.skipped, r.inserted);
            if r.over_capacity() {
                tracing::warn!(inserted = r.inserted, capacity = r.capacity, "capacity exceeded; false-positive rate will be above target");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::RefBuild { catalog, out, capacity, fp_rate } => {
            let options = BuildOptions { capacity, fp_rate, source: catalog.display().to_string() };
            let m = ref_build(&catalog, &out, &options)?;
            println!(
                "parsed={} skipped={} rings={} fragments={} version={}",
                m.molecules_parsed,
                m.lines_skipped,
                m.distinct_rings,
                m.distinct_fragments,
                m.version_string()
            );
            for (name, f) in [("ring", &m.ring_filter), ("fragment", &m.fragment_filter)] {
                if f.inserted > f.capacity {
                    tracing::warn!(filter = name, inserted = f.inserted, capacity = f.capacity, "capacity exceeded");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::McqGen { table, settings, out, seed } => {
            let mut config: SetConfig = match settings {
                Some(p) => read_toml(&p)?,
                None => SetConfig::default(),
            };
            if let Some(s) = seed {
                config.seed = s;
            }
            let mcqs = mcq_gen(&table, &config, &out)?;
            let test = mcqs.iter().filter(|q| q.split.as_deref() == Some("test")).count();
            println!("questions={} train={} test={}", mcqs.len(), mcqs.len() - test, test);
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { settings, out, seed, eps_cur } => {
            let text = std::fs::read_to_string(&settings).with_context(|| format!("reading {}", settings.display()))?;
            let mut config = SimConfig::from_toml(&text)?;
            if let Some(s) = seed {
                config.seed = s;
            }
            if let Some(e) = eps_cur {
                config.eps_cur = e;
            }
            let rows = run_simulation(&config, &out)?;
            println!("steps={rows}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve { bind, max_in_flight } => {
            let mut config = EngineConfig::resolve(cli.config.as_deref())?;
            if let Some(b) = bind {
                config.server.bind = b;
            }
            if let Some(m) = max_in_flight {
                config.server.max_in_flight = m;
            }
            let engine = Arc::new(Engine::from_config(config)?);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(molreward_cli::server::serve(engine))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cda_core::dataio::write_idx;
use cda_core::evalkit::SdaeTrainer;
use cda_core::evalkit::{separate_representations, EvalError, Method};
use cda_core::gasearch::{evolve_seeded, write_trace_csv, FitnessContext, GaError};
use cda_core::harness::{median, parse_methods, HarnessError, RunRecord, Runner, ScenarioConfig};
use cda_core::mapping::{write_genomes, Genome};

#[derive(Parser)]
#[command(
    name = "cda",
    version,
    about = "Domain adaptation by aligning learned binary concepts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario config file (key = value with [sections]).
    #[arg(long)]
    config: PathBuf,
    /// Run a single seed instead of the configured list.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file or directory, depending on the command.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for cached autoencoder layers.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Stack depth (for depth-sweep: sweep 1..=N).
    #[arg(long)]
    depth: Option<usize>,
    /// Comma-separated methods: no_adapt,joint,separate,concat,subspace.
    #[arg(long)]
    methods: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    Source,
    Target,
    Joint,
}

#[derive(Subcommand)]
enum Command {
    /// Load, transform and split both domains; write IDX files and manifests.
    PrepareData(Common),
    /// Train one stacked autoencoder and save it.
    Train {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "source")]
        domain: Domain,
    },
    /// Search a mapping between separately trained networks; writes the
    /// best genome, the final population and the per-generation trace.
    Align(Common),
    /// Run the configured methods for one seed and print the reports.
    Evaluate(Common),
    /// Run every configured method for every seed.
    Scenario(Common),
    /// Joint and separate training across depths.
    DepthSweep(Common),
    /// Grouped comparison of all methods.
    Compare(Common),
}

fn load_config(c: &Common) -> Result<ScenarioConfig, HarnessError> {
    let mut cfg = ScenarioConfig::load(&c.config)?;
    if let Some(seed) = c.seed {
        cfg.seeds = vec![seed];
    }
    if let Some(depth) = c.depth {
        cfg.depth = depth;
    }
    if let Some(m) = &c.methods {
        cfg.methods = parse_methods(m)?;
    }
    if let Some(dir) = &c.cache_dir {
        cfg.cache_dir = Some(dir.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn io_err(path: &Path, e: std::io::Error) -> HarnessError {
    HarnessError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn out_dir(c: &Common, default: &str) -> Result<PathBuf, HarnessError> {
    let dir = c.out.clone().unwrap_or_else(|| PathBuf::from(default));
    std::fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    Ok(dir)
}

fn print_summary(record: &RunRecord) {
    let mut groups: BTreeMap<(String, usize), (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in &record.reports {
        let g = groups.entry((r.method.clone(), r.depth)).or_default();
        g.0.push(r.accuracy);
        if let Some(d) = r.adjustment_degree {
            g.1.push(d);
        }
    }
    println!(
        "{:<10} {:>5} {:>5} {:>12} {:>14}",
        "method", "depth", "runs", "median_acc", "median_adjust"
    );
    for ((method, depth), (acc, deg)) in &groups {
        let deg = median(deg).map_or("-".to_string(), |d| format!("{d:.1}"));
        println!(
            "{method:<10} {depth:>5} {:>5} {:>12.4} {deg:>14}",
            acc.len(),
            median(acc).unwrap_or(f64::NAN)
        );
    }
    for f in &record.failures {
        eprintln!(
            "FAILED {} seed={} depth={}: {}",
            f.method.name(),
            f.seed,
            f.depth,
            f.message
        );
    }
    eprintln!(
        "{} rows, {} failures, {:.1}s, cache {} hits / {} trained layers [{}]",
        record.reports.len(),
        record.failures.len(),
        record.elapsed_seconds,
        record.cache_hits,
        record.cache_misses,
        record.environment
    );
}

fn finish(record: RunRecord) -> Result<ExitCode, HarnessError> {
    print_summary(&record);
    Ok(if record.is_success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn prepare_data(c: &Common) -> Result<ExitCode, HarnessError> {
    let cfg = load_config(c)?;
    let dir = out_dir(c, "prepared")?;
    let runner = Runner::new(cfg.clone())?;
    for seed in &cfg.seeds {
        let data = runner.seed_data(*seed)?;
        let sub = dir.join(format!("seed{seed}"));
        std::fs::create_dir_all(&sub).map_err(|e| io_err(&sub, e))?;
        for (name, ds) in [
            ("source", &data.source),
            ("target_search", &data.target.search),
            ("target_report", &data.target.report),
        ] {
            write_idx(
                ds,
                &sub.join(format!("{name}-images.idx3-ubyte")),
                &sub.join(format!("{name}-labels.idx1-ubyte")),
            )?;
            ds.manifest().write(&sub.join(format!("{name}.manifest")))?;
            println!(
                "{}: {} samples, fingerprint {}",
                sub.join(name).display(),
                ds.len(),
                ds.fingerprint()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn first_seed(cfg: &ScenarioConfig) -> u64 {
    cfg.seeds[0]
}

fn train(c: &Common, domain: Domain) -> Result<ExitCode, HarnessError> {
    let cfg = load_config(c)?;
    let seed = first_seed(&cfg);
    let runner = Runner::new(cfg.clone())?;
    let data = runner.seed_data(seed)?;
    let ds = match domain {
        Domain::Source => data.source,
        Domain::Target => data.target.search,
        Domain::Joint => data.source.union(&data.target.search),
    };
    let trainer = cda_core::harness::CachedTrainer::new(cfg.stack_plan(seed), cfg.cache_dir.clone());
    let model = trainer.train(&ds, cfg.depth)?;
    let out = c.out.clone().unwrap_or_else(|| PathBuf::from("model.sdae"));
    model.save(&out).map_err(EvalError::from)?;
    println!("saved {:?} stack to {}", model.layer_sizes(), out.display());
    Ok(ExitCode::SUCCESS)
}

fn align(c: &Common) -> Result<ExitCode, HarnessError> {
    let cfg = load_config(c)?;
    let seed = first_seed(&cfg);
    let dir = out_dir(c, "align")?;
    let runner = Runner::new(cfg.clone())?;
    let data = runner.seed_data(seed)?;
    let trainer = cda_core::harness::CachedTrainer::new(cfg.stack_plan(seed), cfg.cache_dir.clone());
    let (s, ts, tr) = separate_representations(&data.source, &data.target, cfg.depth, &trainer)?;
    let ctx = FitnessContext::from_representations(&s, &ts, &tr, cfg.fitness).map_err(EvalError::from)?;
    let (p, q) = (ctx.p(), ctx.q());
    let pop_path = dir.join("population.txt");
    let result = evolve_seeded(
        &ctx,
        &cfg.ga_for(seed),
        &[Genome::identity(p, q)],
        |r| Genome::random(p, q, r),
        |_, pop, _| {
            let f = File::create(&pop_path)?;
            write_genomes(BufWriter::new(f), pop).map_err(|e| GaError::Io(std::io::Error::other(e.to_string())))
        },
    )
    .map_err(EvalError::from)?;
    let best_path = dir.join("best_genome.txt");
    write_genomes(
        BufWriter::new(File::create(&best_path).map_err(|e| io_err(&best_path, e))?),
        std::slice::from_ref(&result.best_genome),
    )
    .map_err(EvalError::from)?;
    let trace_path = dir.join("trace.csv");
    let mut w = BufWriter::new(File::create(&trace_path).map_err(|e| io_err(&trace_path, e))?);
    write_trace_csv(&mut w, &result).map_err(EvalError::from)?;
    w.flush()?;
    println!(
        "generations {}  search fitness {:.4}  report accuracy {:.4}  adjustment {}",
        result.generations_run,
        result.best_fitness,
        result.report_accuracy,
        result
            .generations
            .last()
            .and_then(|g| g.adjustment_degree_of_best)
            .map_or("-".into(), |d| format!("{d:.1}%"))
    );
    Ok(ExitCode::SUCCESS)
}

fn with_output(c: &Common, mut cfg: ScenarioConfig) -> ScenarioConfig {
    if let Some(out) = &c.out {
        cfg.output = Some(out.clone());
    }
    cfg
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::PrepareData(c) => prepare_data(&c),
        Command::Train { common, domain } => train(&common, domain),
        Command::Align(c) => align(&c),
        Command::Evaluate(c) => {
            let mut cfg = with_output(&c, load_config(&c)?);
            cfg.seeds.truncate(1);
            let record = Runner::new(cfg)?.run_scenario()?;
            for r in &record.reports {
                println!("{}", cda_core::harness::csv_row(r)?);
            }
            finish(record)
        }
        Command::Scenario(c) => finish(Runner::new(with_output(&c, load_config(&c)?))?.run_scenario()?),
        Command::DepthSweep(c) => {
            let cfg = with_output(&c, load_config(&c)?);
            let depths = match c.depth {
                Some(n) => (1..=n).collect(),
                None => cfg.depths.clone(),
            };
            finish(Runner::new(cfg)?.depth_sweep(&depths)?)
        }
        Command::Compare(c) => {
            let mut cfg = with_output(&c, load_config(&c)?);
            if c.methods.is_none() {
                cfg.methods = Method::ALL.to_vec();
            }
            finish(Runner::new(cfg)?.method_comparison()?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

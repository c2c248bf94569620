use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use rdm_core::harness::{
    fit_report, read_records, run_experiment, write_plot_data, ExperimentConfig, FitOptions,
};
use rdm_core::kasteleyn::{count_tilings_dp, count_tilings_product, ln_tilings_product};
use rdm_core::matching::{brute_force_matching, min_weight_perfect_matching_bipartite};
use rdm_core::{
    build_lattice, min_weight_perfect_matching, sample_weights, validate_lattice, HarnessError,
    LatticeKind,
};

#[derive(Parser)]
#[command(
    name = "rdm",
    version,
    about = "Random dimer model on periodic lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra settings, e.g. `--set sizes=8,16`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Average winding angles over winding loops only.
    #[arg(long)]
    winding_only: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sample instances and write records.
    Run(Common),
    /// Fit exponents from existing records.
    Fit(Common),
    /// Fit and write plot data files.
    PlotData(Common),
    /// Count domino tilings of an m x n rectangle.
    Count { m: usize, n: usize },
    /// Run the built-in oracle checks.
    Validate,
}

fn config(c: &Common) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &c.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    for kv in &c.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        cfg.set(k, v)?;
    }
    if let Some(s) = c.seed {
        cfg.master_seed = s;
    }
    if let Some(w) = c.workers {
        cfg.workers = w;
    }
    if let Some(o) = &c.out {
        cfg.output = o.clone();
    }
    if c.winding_only {
        cfg.winding_only = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn options(cfg: &ExperimentConfig) -> FitOptions {
    FitOptions {
        tail_window: cfg.tail_window,
        epsilon_cut: cfg.epsilon_cut,
        winding_only: cfg.winding_only,
        resamples: cfg.resamples,
        seed: cfg.master_seed,
    }
}

fn fit(cfg: &ExperimentConfig, plots: bool) -> Result<()> {
    let path = cfg.output.join(rdm_core::harness::run::RECORDS_FILE);
    let records = read_records(&path).with_context(|| format!("reading {}", path.display()))?;
    let report = fit_report(&records, &options(cfg))?;
    print!("{}", report.to_text());
    std::fs::write(cfg.output.join("report.txt"), report.to_text())?;
    std::fs::write(cfg.output.join("exponents.txt"), report.to_kv())?;
    if plots {
        let files = write_plot_data(&records, &report, &cfg.output.join("plots"))?;
        println!(
            "wrote {} plot files to {}",
            files.len(),
            cfg.output.join("plots").display()
        );
    }
    Ok(())
}

fn count(m: usize, n: usize) -> Result<()> {
    let product = count_tilings_product(m, n);
    println!(
        "product formula: {product:.6e} (ln {:.10})",
        ln_tilings_product(m, n)
    );
    match count_tilings_dp(m, n) {
        Ok(c) => println!("transfer matrix: {}", c.count),
        Err(e) => println!("transfer matrix: {e}"),
    }
    Ok(())
}

/// Small exact cross-checks; returns the number of failures.
fn validate() -> Result<usize> {
    let mut failures = 0;
    let mut check = |name: String, ok: bool| {
        println!("{} {name}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };
    for kind in LatticeKind::ALL {
        for l in [4, 8, 16] {
            let g = build_lattice(kind, l)?;
            let v = validate_lattice(&g);
            check(
                format!("lattice {kind} L={l}: {} violations", v.len()),
                v.is_empty(),
            );
        }
    }
    for kind in LatticeKind::ALL {
        let g = Arc::new(build_lattice(kind, 4)?);
        let mut agree = true;
        for seed in 0..10 {
            let inst = sample_weights(g.clone(), seed, 0);
            let fast = min_weight_perfect_matching(&inst, &[], None)?;
            let slow = brute_force_matching(&inst, &[])?;
            agree &= fast.edge_ids == slow.matching.edge_ids;
        }
        check(
            format!("blossom = brute force on {kind} L=4 (10 instances)"),
            agree,
        );
    }
    for kind in [LatticeKind::Q, LatticeKind::H] {
        let g = Arc::new(build_lattice(kind, 16)?);
        let mut agree = true;
        for seed in 0..5 {
            let inst = sample_weights(g.clone(), seed, 0);
            let fast = min_weight_perfect_matching(&inst, &[], None)?;
            let hung = min_weight_perfect_matching_bipartite(&inst)?;
            agree &= (fast.cost - hung.cost).abs() <= 1e-9 * fast.cost.abs().max(1.0);
        }
        check(
            format!("blossom = Hungarian on {kind} L=16 (5 instances)"),
            agree,
        );
    }
    for (m, n) in [(2, 2), (4, 4), (6, 6), (8, 8), (4, 7), (6, 9)] {
        let dp = count_tilings_dp(m, n)?;
        let exact: f64 = dp.count.to_string().parse()?;
        let product = count_tilings_product(m, n);
        let ok = ((product - exact) / exact.max(1.0)).abs() < 1e-9
            || (exact == 0.0 && product.abs() < 0.5);
        check(
            format!("tilings {m}x{n}: transfer matrix {exact} vs product {product:.3}"),
            ok,
        );
    }
    Ok(failures)
}

fn exit_for(err: &anyhow::Error) -> ExitCode {
    let usage = err.chain().any(|c| {
        matches!(
            c.downcast_ref::<HarnessError>(),
            Some(
                HarnessError::Config(_)
                    | HarnessError::ConfigFile { .. }
                    | HarnessError::ConfigMismatch { .. }
            )
        )
    });
    ExitCode::from(if usage { 2 } else { 1 })
}

fn records_exist(dir: &Path) -> bool {
    dir.join(rdm_core::harness::run::RECORDS_FILE).exists()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result: Result<ExitCode> = (|| match &cli.command {
        Command::Run(c) => {
            let cfg = config(c)?;
            let manifest = run_experiment(&cfg)?;
            println!("{}", manifest.to_text().trim_end());
            if manifest.has_failures() {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fit(c) | Command::PlotData(c) => {
            let cfg = config(c)?;
            if !records_exist(&cfg.output) {
                anyhow::bail!(
                    "no records in {}; run an experiment first",
                    cfg.output.display()
                );
            }
            fit(&cfg, matches!(cli.command, Command::PlotData(_)))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Count { m, n } => {
            count(*m, *n)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate => {
            let failures = validate()?;
            println!("{failures} failures");
            Ok(if failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_for(&e)
        }
    }
}

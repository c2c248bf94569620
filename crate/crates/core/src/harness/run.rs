//! Parallel, resumable experiment driver.
//!
//! Every `(kind, L, instance)` task is independent. Workers send finished
//! blocks of rows to a single writer that appends them to one shard file per
//! `(kind, L)`; the summary row that closes a block is written last, so a
//! block without it is an interrupted task and is discarded on resume. The
//! final record file is the sorted union of all shards, which makes it
//! independent of scheduling.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{mpsc, Arc};
use std::time::Instant;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::records::{read_records, write_records, Record, CSV_HEADER};
use crate::error::{HarnessError, InstanceError};
use crate::excitation::{epsilon_excite, max_weight_excite, random_link_excite, ExcitationMode};
use crate::instance::sample_weights;
use crate::lattice::{build_lattice, LatticeGraph, LatticeKind};
use crate::matching::min_weight_perfect_matching;
use crate::observables::{loop_stats, symmetric_difference};
use crate::rng::mix_seed;

pub const RECORDS_FILE: &str = "records.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";
pub const HASH_FILE: &str = "config.hash";
pub const SHARD_DIR: &str = "shards";
/// Tag of the auxiliary stream used to pick the random link.
pub const RANDOM_LINK_STREAM: u64 = 1;

/// Seed shared by all instances of one `(kind, L)` stratum; the instance
/// index is mixed in by the weight sampler.
pub fn stratum_seed(master_seed: u64, kind: LatticeKind, size: usize) -> u64 {
    mix_seed(&[master_seed, kind.tag(), size as u64])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumStatus {
    pub kind: LatticeKind,
    pub size: usize,
    pub completed: u64,
    pub failed: u64,
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub config_hash: String,
    pub version: String,
    pub strata: Vec<StratumStatus>,
    pub failures: Vec<(LatticeKind, usize, u64, String)>,
    pub wall_seconds: f64,
    pub records_path: PathBuf,
}

impl RunManifest {
    pub fn has_failures(&self) -> bool {
        !self.failures.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "config_hash={}\nversion={}\nwall_seconds={:.3}\n",
            self.config_hash, self.version, self.wall_seconds
        );
        for st in &self.strata {
            s.push_str(&format!(
                "stratum.{}.{}.completed={}\nstratum.{}.{}.failed={}\n",
                st.kind, st.size, st.completed, st.kind, st.size, st.failed
            ));
        }
        for (k, l, i, msg) in &self.failures {
            s.push_str(&format!("failure={k},{l},{i}: {msg}\n"));
        }
        s
    }
}

/// Rows for one instance: the configured excitation(s), loops and their
/// observables. The last row is the summary that marks completion.
pub fn run_instance(
    cfg: &ExperimentConfig,
    graph: &Arc<LatticeGraph>,
    index: u64,
) -> Result<Vec<Record>, InstanceError> {
    let kind = graph.kind();
    let size = graph.size();
    let inst = sample_weights(
        graph.clone(),
        stratum_seed(cfg.master_seed, kind, size),
        index,
    );
    let ground = min_weight_perfect_matching(&inst, &[], None)?;
    let base = Record {
        kind,
        size,
        instance: index,
        excitation: cfg.mode,
        epsilon: None,
        ground_cost: ground.cost,
        delta_e: 0.0,
        loop_index: None,
        s: 0,
        r2: None,
        theta2_gauged: None,
        theta2_raw: None,
        winding: None,
        overlap: None,
        distance: None,
    };
    let loop_rows = |excited: &crate::matching::Matching,
                     summary: Record|
     -> Result<Vec<Record>, InstanceError> {
        let loops = symmetric_difference(&ground, excited, graph)?;
        let mut rows = Vec::with_capacity(loops.len() + 1);
        let mut total = 0;
        for (i, l) in loops.iter().enumerate() {
            let st = loop_stats(l);
            total += st.length;
            rows.push(Record {
                loop_index: Some(i),
                s: st.length,
                r2: Some(st.r2),
                theta2_gauged: Some(st.theta2_gauged),
                theta2_raw: Some(st.theta2_raw),
                winding: Some(st.winding),
                overlap: None,
                distance: None,
                ..summary.clone()
            });
        }
        rows.push(Record {
            s: total,
            ..summary
        });
        Ok(rows)
    };

    match cfg.mode {
        ExcitationMode::Max | ExcitationMode::Random => {
            let res = if cfg.mode == ExcitationMode::Max {
                max_weight_excite(&inst, &ground)?
            } else {
                let mut rng = inst.auxiliary_stream(RANDOM_LINK_STREAM);
                random_link_excite(&inst, &ground, &mut rng)?
            };
            if !(res.delta_e > 0.0) {
                return Err(InstanceError::Invariant(format!(
                    "excitation energy {} is not positive",
                    res.delta_e
                )));
            }
            let rows = loop_rows(
                &res.excited,
                Record {
                    delta_e: res.delta_e,
                    ..base
                },
            )?;
            if rows.len() < 2 {
                return Err(InstanceError::Invariant(
                    "excitation produced no loop".into(),
                ));
            }
            Ok(rows)
        }
        ExcitationMode::Epsilon => {
            let mut rows = Vec::new();
            for &eps in &cfg.epsilons {
                let res = epsilon_excite(&inst, &ground, eps)?;
                if res.delta_e < 0.0 {
                    return Err(InstanceError::Invariant(format!(
                        "epsilon {eps}: energy change {} is negative",
                        res.delta_e
                    )));
                }
                rows.extend(loop_rows(
                    &res.excited,
                    Record {
                        epsilon: Some(eps),
                        delta_e: res.delta_e,
                        overlap: Some(res.overlap),
                        distance: Some(res.distance),
                        ..base.clone()
                    },
                )?);
            }
            Ok(rows)
        }
    }
}

fn shard_path(out: &Path, kind: LatticeKind, size: usize) -> PathBuf {
    out.join(SHARD_DIR).join(format!("{kind}_{size}.csv"))
}

/// Whether `r` is the row that closes an instance block.
fn is_marker(cfg: &ExperimentConfig, r: &Record) -> bool {
    r.is_summary()
        && match cfg.mode {
            ExcitationMode::Epsilon => r.epsilon == cfg.epsilons.last().copied(),
            _ => true,
        }
}

fn write_atomically(path: &Path, records: &[Record]) -> Result<(), HarnessError> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        write_records(&mut w, records)?;
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Keep the complete instance blocks of an existing shard and rewrite it
/// without any partial block. Returns the indices already done.
fn recover_shard(cfg: &ExperimentConfig, path: &Path) -> Result<BTreeSet<u64>, HarnessError> {
    if !path.exists() {
        let mut f = File::create(path)?;
        writeln!(f, "{CSV_HEADER}")?;
        return Ok(BTreeSet::new());
    }
    let records = read_records(path)?;
    let done: BTreeSet<u64> = records
        .iter()
        .filter(|r| is_marker(cfg, r) && r.instance < cfg.instances && r.excitation == cfg.mode)
        .map(|r| r.instance)
        .collect();
    let kept: Vec<Record> = records
        .into_iter()
        .filter(|r| done.contains(&r.instance))
        .collect();
    write_atomically(path, &kept)?;
    Ok(done)
}

type Outcome = (LatticeKind, usize, u64, Result<Vec<Record>, InstanceError>);

/// Run all missing instances of `cfg` and write the merged record file.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunManifest, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let out = cfg.output.clone();
    fs::create_dir_all(out.join(SHARD_DIR))?;

    let hash = cfg.hash();
    let hash_path = out.join(HASH_FILE);
    if hash_path.exists() {
        let found = fs::read_to_string(&hash_path)?.trim().to_string();
        if found != hash {
            return Err(HarnessError::ConfigMismatch {
                expected: hash,
                found,
            });
        }
    } else {
        fs::write(&hash_path, format!("{hash}\n"))?;
        fs::write(out.join("config.txt"), cfg.canonical())?;
    }

    let mut graphs: HashMap<(LatticeKind, usize), Arc<LatticeGraph>> = HashMap::new();
    let mut done: BTreeMap<(LatticeKind, usize), BTreeSet<u64>> = BTreeMap::new();
    let mut tasks = Vec::new();
    for &kind in &cfg.kinds {
        for &size in &cfg.sizes {
            let g = build_lattice(kind, size).map_err(|e| HarnessError::Config(e.to_string()))?;
            graphs.insert((kind, size), Arc::new(g));
            let finished = recover_shard(cfg, &shard_path(&out, kind, size))?;
            for i in 0..cfg.instances {
                if !finished.contains(&i) {
                    tasks.push((kind, size, i));
                }
            }
            done.insert((kind, size), finished);
        }
    }
    log::info!(
        "{} instances to run ({} already complete)",
        tasks.len(),
        done.values().map(|s| s.len()).sum::<usize>()
    );

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    let (tx, rx) = mpsc::sync_channel::<Outcome>(256);

    let writer_out = out.clone();
    let total = tasks.len();
    let writer = std::thread::spawn(
        move || -> Result<Vec<(LatticeKind, usize, u64, String)>, HarnessError> {
            let mut files: HashMap<(LatticeKind, usize), File> = HashMap::new();
            let mut failures = Vec::new();
            let mut seen = 0usize;
            for (kind, size, index, res) in rx {
                seen += 1;
                match res {
                    Ok(rows) => {
                        let f = match files.entry((kind, size)) {
                            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                            std::collections::hash_map::Entry::Vacant(e) => {
                                e.insert(OpenOptions::new().append(true).open(shard_path(
                                    &writer_out,
                                    kind,
                                    size,
                                ))?)
                            }
                        };
                        let mut block = String::new();
                        for r in &rows {
                            block.push_str(&r.to_csv());
                            block.push('\n');
                        }
                        f.write_all(block.as_bytes())?;
                    }
                    Err(e) => {
                        log::error!("{kind} L={size} instance {index}: {e}");
                        failures.push((kind, size, index, e.to_string()));
                    }
                }
                if seen.is_multiple_of(500) {
                    log::info!("{seen}/{total} instances finished");
                }
            }
            for f in files.values_mut() {
                f.flush()?;
            }
            Ok(failures)
        },
    );

    pool.install(|| {
        tasks
            .par_iter()
            .for_each_with(tx, |tx, &(kind, size, index)| {
                let g = &graphs[&(kind, size)];
                let res = run_instance(cfg, g, index);
                let _ = tx.send((kind, size, index, res));
            });
    });
    let failures = writer
        .join()
        .map_err(|_| HarnessError::Config("writer thread panicked".into()))??;

    let mut all = Vec::new();
    let mut strata = Vec::new();
    for &kind in &cfg.kinds {
        for &size in &cfg.sizes {
            let records = read_records(&shard_path(&out, kind, size))?;
            let completed = records.iter().filter(|r| is_marker(cfg, r)).count() as u64;
            let failed = failures
                .iter()
                .filter(|f| f.0 == kind && f.1 == size)
                .count() as u64;
            strata.push(StratumStatus {
                kind,
                size,
                completed,
                failed,
            });
            all.extend(records);
        }
    }
    all.sort_by(|a, b| a.order(b));
    let records_path = out.join(RECORDS_FILE);
    write_atomically(&records_path, &all)?;

    let manifest = RunManifest {
        config_hash: hash,
        version: env!("CARGO_PKG_VERSION").to_string(),
        strata,
        failures,
        wall_seconds: start.elapsed().as_secs_f64(),
        records_path,
    };
    fs::write(out.join(MANIFEST_FILE), manifest.to_text())?;
    Ok(manifest)
}

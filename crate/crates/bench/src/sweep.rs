//! Seeded parameter sweeps.
//!
//! Seed derivation: with `mix` the SplitMix64 finaliser,
//! `trial_seed = mix(mix(mix(master ^ n) ^ k) ^ trial)`. The first topology
//! of a trial uses `trial_seed`; redraw `r >= 1` (after a disconnected draw)
//! uses `mix(trial_seed + r)`. The CSV `seed` column holds the seed of the
//! topology actually used, so `random_topology(n, k, radius, side, seed)`
//! reproduces it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use mcbcast::{
    bts_schedule, build_broadcast_tree, build_layers, ets_schedule, random_topology, replay,
    LayeredDecomposition, Schedule, Topology,
};
use rayon::prelude::*;

use crate::config::{Algorithm, ExperimentConfig, ModelFlags};
use crate::BenchError;

pub const CSV_HEADER: [&str; 10] = [
    "seed", "n", "k", "radius", "side", "algo", "depth_l", "latency", "ratio", "retries",
];

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_seed(master: u64, n: usize, k: u32, trial: usize) -> u64 {
    mix(mix(mix(master ^ n as u64) ^ k as u64) ^ trial as u64)
}

fn redraw_seed(trial_seed: u64, retry: usize) -> u64 {
    if retry == 0 {
        trial_seed
    } else {
        mix(trial_seed.wrapping_add(retry as u64))
    }
}

/// One CSV data row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub seed: u64,
    pub n: usize,
    pub k: u32,
    pub radius: f64,
    pub side: f64,
    pub algo: Algorithm,
    pub label: String,
    pub depth: usize,
    pub latency: u32,
    pub retries: usize,
    pub trial: usize,
}

impl Row {
    pub fn ratio(&self) -> f64 {
        latency_ratio(self.latency, self.depth)
    }

    fn record(&self) -> [String; 10] {
        [
            self.seed.to_string(),
            self.n.to_string(),
            self.k.to_string(),
            self.radius.to_string(),
            self.side.to_string(),
            self.label.clone(),
            self.depth.to_string(),
            self.latency.to_string(),
            format!("{:.4}", self.ratio()),
            self.retries.to_string(),
        ]
    }
}

/// `latency / l`, taken as 1 for the trivial single-node broadcast.
pub fn latency_ratio(latency: u32, depth: usize) -> f64 {
    if depth == 0 {
        if latency == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        latency as f64 / depth as f64
    }
}

/// Per-`(n, k)` aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub n: usize,
    pub k: u32,
    pub trials: usize,
    pub mean_depth: f64,
    /// Mean latency per algorithm.
    pub mean_latency: BTreeMap<Algorithm, f64>,
    pub min_latency: BTreeMap<Algorithm, u32>,
    pub total_retries: usize,
}

impl CellSummary {
    pub fn mean(&self, algo: Algorithm) -> Option<f64> {
        self.mean_latency.get(&algo).copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by `(n, k, trial, algorithm)`.
    pub rows: Vec<Row>,
    pub cells: Vec<CellSummary>,
}

impl SweepResult {
    pub fn cell(&self, n: usize, k: u32) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.n == n && c.k == k)
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), BenchError> {
        let mut w = csv::Writer::from_path(path)?;
        self.write_records(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, BenchError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        self.write_records(&mut w)?;
        let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn write_records<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> Result<(), BenchError> {
        w.write_record(CSV_HEADER)?;
        for row in &self.rows {
            w.write_record(row.record())?;
        }
        Ok(())
    }

    /// Fixed-width table of the per-cell means.
    pub fn render_summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>6} {:>4} {:>6} {:>8} {:>9} {:>9} {:>8}",
            "n", "k", "trials", "mean_l", "mean_bts", "mean_ets", "retries"
        );
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.2}"));
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{:>6} {:>4} {:>6} {:>8.2} {:>9} {:>9} {:>8}",
                c.n,
                c.k,
                c.trials,
                c.mean_depth,
                fmt(c.mean(Algorithm::Bts)),
                fmt(c.mean(Algorithm::Ets)),
                c.total_retries
            );
        }
        out
    }
}

/// Runs one scheduler on a prepared instance.
pub fn schedule_with(
    t: &Topology,
    d: &LayeredDecomposition,
    algo: Algorithm,
    flags: ModelFlags,
) -> Result<Schedule, BenchError> {
    Ok(match algo {
        Algorithm::Bts => bts_schedule(t, d, flags.prune_empty)?,
        Algorithm::Ets => {
            let tree = build_broadcast_tree(t, d)?;
            ets_schedule(t, d, &tree, flags.interference, flags.prune_empty).schedule
        }
    })
}

/// Draws connected topologies until one sticks; returns it with its seed
/// and the number of rejected draws.
pub fn connected_topology(
    n: usize,
    k: u32,
    radius: f64,
    side: f64,
    seed: u64,
    max_retries: usize,
) -> Option<(Topology, u64, usize)> {
    (0..=max_retries).find_map(|retry| {
        let s = redraw_seed(seed, retry);
        let t = random_topology(n, k, radius, side, s).ok()?;
        build_layers(&t).is_connected().then_some((t, s, retry))
    })
}

fn run_trial(cfg: &ExperimentConfig, n: usize, k: u32, trial: usize) -> Result<Vec<Row>, BenchError> {
    let side = cfg.area.side(n);
    let base = trial_seed(cfg.master_seed, n, k, trial);
    let (t, seed, retries) = connected_topology(n, k, cfg.radius, side, base, cfg.max_retries)
        .ok_or(BenchError::Disconnected {
            n,
            k,
            trial,
            retries: cfg.max_retries,
        })?;
    let d = build_layers(&t);

    let mut rows = Vec::with_capacity(cfg.algorithms.len());
    for &algo in &cfg.algorithms {
        let schedule = schedule_with(&t, &d, algo, cfg.flags)?;
        if cfg.strict_verify {
            let report = replay(&t, &schedule, true);
            if !report.ok {
                return Err(BenchError::Verification {
                    algo: cfg.flags.label(algo),
                    n,
                    k,
                    seed,
                    detail: report.violations[0].to_string(),
                });
            }
        }
        rows.push(Row {
            seed,
            n,
            k,
            radius: cfg.radius,
            side,
            algo,
            label: cfg.flags.label(algo),
            depth: d.depth(),
            latency: schedule.horizon(),
            retries,
            trial,
        });
    }
    Ok(rows)
}

/// Runs every `(n, k, trial)` in parallel and aggregates per cell. Output is
/// independent of thread scheduling.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult, BenchError> {
    cfg.validate()?;
    let jobs: Vec<(usize, u32, usize)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| {
            cfg.k_values
                .iter()
                .flat_map(move |&k| (0..cfg.trials).map(move |trial| (n, k, trial)))
        })
        .collect();

    let results: Vec<Result<Vec<Row>, BenchError>> = jobs
        .par_iter()
        .map(|&(n, k, trial)| run_trial(cfg, n, k, trial))
        .collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    rows.sort_by_key(|r| (r.n, r.k, r.trial, r.algo));

    let mut cells = Vec::new();
    for &n in &cfg.n_values {
        for &k in &cfg.k_values {
            let cell_rows: Vec<&Row> = rows.iter().filter(|r| r.n == n && r.k == k).collect();
            if cell_rows.is_empty() {
                continue;
            }
            let first_algo = cfg.algorithms[0];
            let per_trial: Vec<&Row> = cell_rows.iter().copied().filter(|r| r.algo == first_algo).collect();
            let trials = per_trial.len();
            let mean_depth = per_trial.iter().map(|r| r.depth as f64).sum::<f64>() / trials as f64;
            let total_retries = per_trial.iter().map(|r| r.retries).sum();
            let mut mean_latency = BTreeMap::new();
            let mut min_latency = BTreeMap::new();
            for &algo in &cfg.algorithms {
                let lat: Vec<u32> = cell_rows
                    .iter()
                    .filter(|r| r.algo == algo)
                    .map(|r| r.latency)
                    .collect();
                mean_latency.insert(algo, lat.iter().map(|&v| v as f64).sum::<f64>() / lat.len() as f64);
                min_latency.insert(algo, lat.iter().copied().min().unwrap_or(0));
            }
            cells.push(CellSummary {
                n,
                k,
                trials,
                mean_depth,
                mean_latency,
                min_latency,
                total_retries,
            });
        }
    }
    Ok(SweepResult { rows, cells })
}

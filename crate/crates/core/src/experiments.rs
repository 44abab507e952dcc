//! Runtime and accuracy experiments on the synthetic families.
//!
//! Generated systems consist only of a top tier, so the games here are built
//! over all nodes and skip minimal-quorum enumeration.

use std::time::Instant;

use thiserror::Error;

use crate::game::CooperativeGame;
use crate::generators::{TopologyKind, TopologySpec};
use crate::power::{
    approx_power_indices, exact_power_indices, PowerError, DEFAULT_ENUMERATION_CAP,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExperimentError {
    #[error("repetition count must be at least 1")]
    NoRepetitions,
    #[error("topology size must be at least 1")]
    EmptyTopology,
    #[error("exact indices unavailable for {kind} with {nodes} nodes: {source}")]
    ExactUnavailable {
        kind: TopologyKind,
        nodes: usize,
        source: PowerError,
    },
    #[error("player {node} has exact index 0; percentage error undefined")]
    ZeroExactIndex { node: usize },
    #[error(transparent)]
    Power(#[from] PowerError),
}

/// Median of a non-empty sample; mean of the middle pair for even lengths.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

/// Mean over players of `|estimate - exact| / exact`, in percent.
pub fn mean_percentage_error(
    players: &[usize],
    exact: &[f64],
    estimate: &[f64],
) -> Result<f64, ExperimentError> {
    if players.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for &p in players {
        if exact[p] == 0.0 {
            return Err(ExperimentError::ZeroExactIndex { node: p });
        }
        total += (estimate[p] - exact[p]).abs() / exact[p].abs();
    }
    Ok(100.0 * total / players.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchMethod {
    Exact,
    Approximate { samples: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub kind: TopologyKind,
    pub nodes: usize,
    pub method: BenchMethod,
    pub reps: usize,
    /// `None` when the row was skipped because exact enumeration is capped.
    pub median_seconds: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub topologies: Vec<TopologySpec>,
    pub exact: bool,
    pub samples: Vec<u64>,
    pub reps: usize,
    pub cap: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            topologies: (3..=14).map(TopologySpec::symmetric).collect(),
            exact: true,
            samples: vec![1_000, 10_000, 100_000],
            reps: 10,
            cap: 20,
            seed: 0,
        }
    }
}

fn validate(topologies: &[TopologySpec], reps: usize) -> Result<(), ExperimentError> {
    if reps == 0 {
        return Err(ExperimentError::NoRepetitions);
    }
    if topologies.iter().any(|t| t.size == 0) {
        return Err(ExperimentError::EmptyTopology);
    }
    Ok(())
}

/// Median single-threaded wall-clock time of computing all power indices,
/// per topology and method. Topology construction is not timed.
pub fn run_runtime_bench(config: &BenchConfig) -> Result<BenchReport, ExperimentError> {
    validate(&config.topologies, config.reps)?;
    let mut report = BenchReport::default();
    for spec in &config.topologies {
        let fbas = spec.build();
        let game = CooperativeGame::over_all_nodes(&fbas);
        let nodes = fbas.len();

        if config.exact {
            let median_seconds = if nodes > config.cap {
                log::info!(
                    "{} n={nodes} exact: skipped (cap {})",
                    spec.kind,
                    config.cap
                );
                None
            } else {
                let mut times = Vec::with_capacity(config.reps);
                for _ in 0..config.reps {
                    let start = Instant::now();
                    exact_power_indices(&game, config.cap)?;
                    times.push(start.elapsed().as_secs_f64());
                }
                let m = median(&times);
                log::info!("{} n={nodes} exact: median {m:.6}s", spec.kind);
                Some(m)
            };
            report.rows.push(BenchRow {
                kind: spec.kind,
                nodes,
                method: BenchMethod::Exact,
                reps: config.reps,
                median_seconds,
            });
        }

        for &samples in &config.samples {
            let mut times = Vec::with_capacity(config.reps);
            for rep in 0..config.reps {
                let seed = config.seed.wrapping_add(rep as u64);
                let start = Instant::now();
                approx_power_indices(&game, samples, seed)?;
                times.push(start.elapsed().as_secs_f64());
            }
            let m = median(&times);
            log::info!("{} n={nodes} approx m={samples}: median {m:.6}s", spec.kind);
            report.rows.push(BenchRow {
                kind: spec.kind,
                nodes,
                method: BenchMethod::Approximate { samples },
                reps: config.reps,
                median_seconds: Some(m),
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyRow {
    pub kind: TopologyKind,
    pub nodes: usize,
    pub samples: u64,
    pub reps: usize,
    pub base_seed: u64,
    /// Mean of the per-run MPEs, in percent.
    pub mmpe_percent: f64,
    /// Per-run MPEs in run order; empty unless requested.
    pub mpe_percent: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AccuracyReport {
    pub rows: Vec<AccuracyRow>,
}

#[derive(Clone, Debug)]
pub struct AccuracyConfig {
    pub topologies: Vec<TopologySpec>,
    pub samples: Vec<u64>,
    pub reps: usize,
    pub cap: usize,
    pub base_seed: u64,
    pub keep_runs: bool,
}

impl Default for AccuracyConfig {
    fn default() -> Self {
        Self {
            topologies: (3..=20).map(TopologySpec::symmetric).collect(),
            samples: vec![1_000, 10_000, 100_000],
            reps: 20,
            cap: DEFAULT_ENUMERATION_CAP,
            base_seed: 0,
            keep_runs: false,
        }
    }
}

/// Compares sampled indices against exact ones. Run `j` of every cell uses
/// seed `base_seed + j`.
pub fn run_accuracy_study(config: &AccuracyConfig) -> Result<AccuracyReport, ExperimentError> {
    validate(&config.topologies, config.reps)?;
    let mut report = AccuracyReport::default();
    for spec in &config.topologies {
        let fbas = spec.build();
        let game = CooperativeGame::over_all_nodes(&fbas);
        let players = game.player_list();
        let exact = exact_power_indices(&game, config.cap)
            .map_err(|source| ExperimentError::ExactUnavailable {
                kind: spec.kind,
                nodes: fbas.len(),
                source,
            })?
            .values();

        for &samples in &config.samples {
            let mut runs = Vec::with_capacity(config.reps);
            for rep in 0..config.reps {
                let seed = config.base_seed.wrapping_add(rep as u64);
                let estimate = approx_power_indices(&game, samples, seed)?.values();
                runs.push(mean_percentage_error(&players, &exact, &estimate)?);
            }
            let mmpe_percent = runs.iter().sum::<f64>() / runs.len() as f64;
            log::info!(
                "{} n={} m={samples}: MMPE {mmpe_percent:.3}%",
                spec.kind,
                fbas.len()
            );
            report.rows.push(AccuracyRow {
                kind: spec.kind,
                nodes: fbas.len(),
                samples,
                reps: config.reps,
                base_seed: config.base_seed,
                mmpe_percent,
                mpe_percent: if config.keep_runs { runs } else { Vec::new() },
            });
        }
    }
    Ok(report)
}

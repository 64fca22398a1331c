//! Random directed Erdős–Rényi experiments.
//!
//! For each size `n`, adjacency matrices of directed `G(n, p)` graphs with
//! `p = 2·ln(n)/n` are sampled, graphs whose spectrum has two eigenvalues
//! within the gap threshold are thrown out and regenerated, and a greedy
//! solver with the PBH rank backend looks for a sparse controlling input.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::{deterministic_greedy_vector_with, randomized_greedy_vector_with};
use crate::linalg::{
    eigen_gap, left_eigensystem_with, pbh_controllability_rank, DenseMatrix, EigenOptions,
    RankEvaluator,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    #[default]
    Randomized,
    Deterministic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    #[default]
    Natural,
    Ten,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub trials_per_n: usize,
    /// Constant link probability; `None` means `2·log(n)/n`.
    pub edge_probability: Option<f64>,
    pub log_base: LogBase,
    pub self_loops: bool,
    pub eigen_gap_threshold: f64,
    pub seed: u64,
    pub solver: SolverKind,
    pub max_regenerations_per_trial: usize,
    pub orth_rel_tol: f64,
    /// Adds per-trial wall time to the report, which makes reports differ
    /// between runs.
    pub record_timings: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_values: vec![10, 20, 30, 40, 50],
            trials_per_n: 20,
            edge_probability: None,
            log_base: LogBase::Natural,
            self_loops: true,
            eigen_gap_threshold: 0.01,
            seed: 42,
            solver: SolverKind::Randomized,
            max_regenerations_per_trial: 1000,
            orth_rel_tol: 1e-8,
            record_timings: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.n_values.is_empty() {
            return bad("n_values is empty".into());
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n == 0) {
            return bad(format!("n must be positive, got {n}"));
        }
        if self.trials_per_n == 0 {
            return bad("trials_per_n must be positive".into());
        }
        if self.eigen_gap_threshold.is_nan() || self.eigen_gap_threshold <= 0.0 {
            return bad("eigen_gap_threshold must be positive".into());
        }
        if self.orth_rel_tol.is_nan() || self.orth_rel_tol <= 0.0 {
            return bad("orth_rel_tol must be positive".into());
        }
        if let Some(p) = self.edge_probability {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("edge probability {p} outside [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn edge_probability_for(&self, n: usize) -> f64 {
        if let Some(p) = self.edge_probability {
            return p;
        }
        let nf = n as f64;
        let log = match self.log_base {
            LogBase::Natural => nf.ln(),
            LogBase::Ten => nf.log10(),
        };
        (2.0 * log / nf).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial_index: usize,
    pub graph_seed: u64,
    pub regenerations_used: usize,
    pub accepted: bool,
    pub sparsity_found: usize,
    pub controllable: bool,
    /// Independent PBH recount of the returned input.
    pub verified_rank: usize,
    pub support: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub accepted: usize,
    pub rejected_trials: usize,
    pub controllable: usize,
    pub one_sparse: usize,
    pub at_most_two_sparse: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    /// `n → (sparsity → count)` over accepted trials.
    pub histogram: BTreeMap<usize, BTreeMap<usize, usize>>,
    pub summary: BTreeMap<usize, SizeSummary>,
    pub rejected_graph_count: usize,
}

impl ExperimentReport {
    pub fn accepted(&self) -> impl Iterator<Item = &TrialRecord> {
        self.records.iter().filter(|r| r.accepted)
    }

    /// Flat CSV of the trial records.
    pub fn records_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "n",
            "trial_index",
            "graph_seed",
            "regenerations_used",
            "accepted",
            "sparsity_found",
            "controllable",
            "verified_rank",
            "support",
            "wall_time_ms",
        ])
        .map_err(|e| Error::Internal(e.to_string()))?;
        for r in &self.records {
            let support = r
                .support
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            w.write_record([
                r.n.to_string(),
                r.trial_index.to_string(),
                r.graph_seed.to_string(),
                r.regenerations_used.to_string(),
                r.accepted.to_string(),
                r.sparsity_found.to_string(),
                r.controllable.to_string(),
                r.verified_rank.to_string(),
                support,
                r.wall_time_ms.map_or_else(String::new, |t| t.to_string()),
            ])
            .map_err(|e| Error::Internal(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }
}

/// Adjacency matrix of a directed `G(n, p)`: every ordered pair `(i, j)`
/// is a link independently with probability `p`. Self-loops `(i, i)` are
/// drawn too unless disabled.
pub fn sample_er_digraph(n: usize, p: f64, seed: u64) -> Result<DenseMatrix> {
    sample_er_digraph_with(n, p, seed, true)
}

pub fn sample_er_digraph_with(
    n: usize,
    p: f64,
    seed: u64,
    self_loops: bool,
) -> Result<DenseMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j && !self_loops {
                continue;
            }
            if rng.random_bool(p) {
                data[i * n + j] = 1.0;
            }
        }
    }
    DenseMatrix::new(n, n, data)
}

/// Accept iff every pair of eigenvalues is more than `threshold` apart.
pub fn eigen_gap_filter(a: &DenseMatrix, threshold: f64) -> Result<bool> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidInput("gap threshold must be positive".into()));
    }
    Ok(eigen_gap(a)? > threshold)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d1_49bb_133d_11eb);
    x ^ (x >> 31)
}

/// Seed for one stream of one trial, independent of execution order.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(seed), |h, &p| splitmix64(h ^ splitmix64(p)))
}

const GRAPH_STREAM: u64 = 1;
const SOLVER_STREAM: u64 = 2;

fn run_trial(cfg: &ExperimentConfig, n: usize, trial: usize) -> Result<(TrialRecord, usize)> {
    let start = Instant::now();
    let p = cfg.edge_probability_for(n);
    let eigen_opts = EigenOptions {
        gap_threshold: cfg.eigen_gap_threshold,
        ..EigenOptions::default()
    };
    let mut rejected = 0;
    for attempt in 0..=cfg.max_regenerations_per_trial {
        let graph_seed = derive_seed(
            cfg.seed,
            &[GRAPH_STREAM, n as u64, trial as u64, attempt as u64],
        );
        let a = sample_er_digraph_with(n, p, graph_seed, cfg.self_loops)?;
        let accepted = matches!(eigen_gap_filter(&a, cfg.eigen_gap_threshold), Ok(true));
        let eig = match accepted.then(|| left_eigensystem_with(&a, &eigen_opts)) {
            Some(Ok(eig)) if eig.has_distinct_eigenvalues() => eig,
            _ => {
                rejected += 1;
                continue;
            }
        };
        let eval = RankEvaluator::from_eigensystem(eig, cfg.orth_rel_tol)?;
        let solver_seed = derive_seed(
            cfg.seed,
            &[SOLVER_STREAM, n as u64, trial as u64, attempt as u64],
        );
        let res = match cfg.solver {
            SolverKind::Randomized => randomized_greedy_vector_with(&eval, solver_seed)?,
            SolverKind::Deterministic => deterministic_greedy_vector_with(&eval)?,
        };
        let b = DenseMatrix::column(&res.input_vector())?;
        let eig = eval
            .eigensystem()
            .expect("PBH evaluator keeps its eigensystem");
        let norm = b.data().iter().map(|x| x * x).sum::<f64>().sqrt();
        let verified_rank = if norm == 0.0 {
            0
        } else {
            pbh_controllability_rank(eig, &b, cfg.orth_rel_tol * norm)?
        };
        let record = TrialRecord {
            n,
            trial_index: trial,
            graph_seed,
            regenerations_used: attempt,
            accepted: true,
            sparsity_found: res.sparsity(),
            controllable: res.controllable && verified_rank == n,
            verified_rank,
            support: res.support,
            wall_time_ms: cfg
                .record_timings
                .then(|| start.elapsed().as_secs_f64() * 1e3),
        };
        return Ok((record, rejected));
    }
    let record = TrialRecord {
        n,
        trial_index: trial,
        graph_seed: derive_seed(
            cfg.seed,
            &[
                GRAPH_STREAM,
                n as u64,
                trial as u64,
                cfg.max_regenerations_per_trial as u64,
            ],
        ),
        regenerations_used: cfg.max_regenerations_per_trial,
        accepted: false,
        sparsity_found: 0,
        controllable: false,
        verified_rank: 0,
        support: Vec::new(),
        wall_time_ms: cfg
            .record_timings
            .then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    Ok((record, rejected))
}

/// Runs every `(n, trial)` pair. Trials run in parallel; each draws from
/// seeds derived from `(seed, n, trial, attempt)`, so the report does not
/// depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| (0..cfg.trials_per_n).map(move |t| (n, t)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(n, t)| run_trial(cfg, n, t))
        .collect::<Result<Vec<_>>>()?;

    let mut histogram: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    let mut summary: BTreeMap<usize, SizeSummary> = BTreeMap::new();
    let mut rejected_graph_count = 0;
    let mut records = Vec::with_capacity(results.len());
    for (rec, rejected) in results {
        rejected_graph_count += rejected;
        let s = summary.entry(rec.n).or_insert(SizeSummary {
            accepted: 0,
            rejected_trials: 0,
            controllable: 0,
            one_sparse: 0,
            at_most_two_sparse: 0,
        });
        if rec.accepted {
            *histogram
                .entry(rec.n)
                .or_default()
                .entry(rec.sparsity_found)
                .or_default() += 1;
            s.accepted += 1;
            if rec.controllable {
                s.controllable += 1;
                s.one_sparse += usize::from(rec.sparsity_found == 1);
                s.at_most_two_sparse += usize::from(rec.sparsity_found <= 2);
            }
        } else {
            s.rejected_trials += 1;
        }
        records.push(rec);
    }
    Ok(ExperimentReport {
        config: cfg.clone(),
        records,
        histogram,
        summary,
        rejected_graph_count,
    })
}

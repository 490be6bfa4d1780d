use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{gen, girth, GenModel, GenSpec};
use crate::error::{Error, Result};
use crate::extraction::PipelineConfig;
use crate::minor::find_small_minor;
use crate::rational::{self, Rational};
use crate::seed::splitmix64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub model: GenModel,
    /// Orders `2^min_exp ..= 2^max_exp`.
    pub min_exp: u32,
    pub max_exp: u32,
    /// Generator parameter. For `HighGirth`, 0 means `ceil(log2 n / 2)`.
    pub param: u64,
    pub base_c: u64,
    pub t: usize,
    pub epsilon: Rational,
    pub c_of_t: Rational,
    pub trials: usize,
    pub seed: u64,
    pub pipeline: PipelineConfig,
    /// Fill `elapsed_ms`; off by default so reports are reproducible.
    pub timings: bool,
    /// Fresh samples drawn when a graph falls below `c(t) + eps`.
    pub resample_limit: usize,
}

impl SweepConfig {
    pub fn new(model: GenModel, min_exp: u32, max_exp: u32, param: u64, t: usize) -> Self {
        SweepConfig {
            model,
            min_exp,
            max_exp,
            param,
            base_c: 3,
            t,
            epsilon: rational::int(1),
            c_of_t: crate::minor::default_c_of_t(t).unwrap_or_else(|| rational::int(1)),
            trials: 1,
            seed: 0,
            pipeline: PipelineConfig::default(),
            timings: false,
            resample_limit: 20,
        }
    }

    fn param_for(&self, n: usize) -> u64 {
        if self.model == GenModel::HighGirth && self.param == 0 {
            ((n as f64).log2() / 2.0).ceil().max(3.0) as u64
        } else {
            self.param
        }
    }
}

/// `seed XOR hash(n, trial)`, the same in serial and parallel runs.
pub fn trial_seed(seed: u64, n: usize, trial: usize) -> u64 {
    seed ^ splitmix64(splitmix64(n as u64) ^ trial as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub vertices: usize,
    pub edges: usize,
    pub density: String,
    pub resamples: usize,
    pub extraction_steps: usize,
    pub removals: usize,
    pub restrictions: usize,
    pub fallbacks: usize,
    pub outcome: String,
    pub h_order: usize,
    pub h_density: String,
    pub branch: String,
    pub regime: String,
    pub success: bool,
    pub order: Option<usize>,
    pub order_over_log2n: Option<String>,
    pub order_over_log2n_loglog2n: Option<String>,
    pub girth: Option<usize>,
    pub note: String,
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateRow {
    pub n: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: String,
    pub mean_order: Option<String>,
    pub max_order: Option<usize>,
    pub max_order_over_log2n: Option<String>,
    pub max_order_over_log2n_loglog2n: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub trials: Vec<TrialRow>,
    pub aggregates: Vec<AggregateRow>,
}

fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Invariant(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

impl SweepReport {
    pub fn trials_csv(&self) -> Result<String> {
        to_csv(&self.trials)
    }

    pub fn aggregates_csv(&self) -> Result<String> {
        to_csv(&self.aggregates)
    }
}

fn log_terms(n: usize) -> (f64, f64) {
    let l = (n as f64).log2();
    (l, l * l.log2())
}

fn empty_row(n: usize, trial: usize, seed: u64) -> TrialRow {
    TrialRow {
        n,
        trial,
        seed,
        vertices: n,
        edges: 0,
        density: String::new(),
        resamples: 0,
        extraction_steps: 0,
        removals: 0,
        restrictions: 0,
        fallbacks: 0,
        outcome: String::new(),
        h_order: 0,
        h_density: String::new(),
        branch: String::new(),
        regime: String::new(),
        success: false,
        order: None,
        order_over_log2n: None,
        order_over_log2n_loglog2n: None,
        girth: None,
        note: String::new(),
        elapsed_ms: None,
    }
}

fn run_trial(cfg: &SweepConfig, n: usize, trial: usize) -> TrialRow {
    let started = Instant::now();
    let sub = trial_seed(cfg.seed, n, trial);
    let mut row = empty_row(n, trial, sub);
    let required = &cfg.c_of_t + &cfg.epsilon;
    let mut graph = None;
    for attempt in 0..=cfg.resample_limit {
        let spec = GenSpec {
            model: cfg.model,
            n,
            param: cfg.param_for(n),
            base_c: cfg.base_c,
            seed: if attempt == 0 { sub } else { crate::seed::derive(sub, &[attempt as u64]) },
        };
        match gen(&spec) {
            Ok(g) => {
                row.resamples = attempt;
                let dense = g.average_degree().is_ok_and(|d| d.to_rational() >= required);
                graph = Some(g);
                if dense {
                    break;
                }
            }
            Err(e) => {
                row.note = e.to_string();
                return row;
            }
        }
    }
    let g = graph.expect("at least one sample");
    row.edges = g.edge_count();
    row.density = g.average_degree().map(|d| d.to_string()).unwrap_or_default();
    if cfg.model == GenModel::HighGirth {
        row.girth = girth(&g);
    }
    let mut pipeline = cfg.pipeline.clone();
    pipeline.rng_seed = sub;
    match find_small_minor(&g, cfg.t, &cfg.epsilon, &cfg.c_of_t, &pipeline) {
        Ok(report) => {
            let (removals, restrictions, fallbacks) = report.trace.case_counts();
            row.extraction_steps = report.extraction_steps;
            row.removals = removals;
            row.restrictions = restrictions;
            row.fallbacks = fallbacks;
            row.outcome = report.extraction_outcome.label().into();
            row.h_order = report.h_order;
            row.h_density = report.h_density.to_string();
            row.branch = report.branch.label().into();
            row.regime = report.regime.map(|r| r.label().to_string()).unwrap_or_default();
            row.success = report.success();
            if let Some(order) = report.order() {
                let (l, ll) = log_terms(n);
                row.order = Some(order);
                row.order_over_log2n = Some(fixed(order as f64 / l));
                row.order_over_log2n_loglog2n = Some(fixed(order as f64 / ll));
            }
            if let Some(f) = report.failure {
                row.note = f.reason;
            }
        }
        Err(e) => row.note = e.to_string(),
    }
    if cfg.timings {
        row.elapsed_ms = Some(started.elapsed().as_millis() as u64);
    }
    row
}

fn aggregate(n: usize, rows: &[TrialRow]) -> AggregateRow {
    let orders: Vec<usize> = rows.iter().filter_map(|r| r.order).collect();
    let (l, ll) = log_terms(n);
    let max = orders.iter().copied().max();
    AggregateRow {
        n,
        trials: rows.len(),
        successes: rows.iter().filter(|r| r.success).count(),
        success_rate: fixed(rows.iter().filter(|r| r.success).count() as f64 / rows.len().max(1) as f64),
        mean_order: (!orders.is_empty()).then(|| fixed(orders.iter().sum::<usize>() as f64 / orders.len() as f64)),
        max_order: max,
        max_order_over_log2n: max.map(|m| fixed(m as f64 / l)),
        max_order_over_log2n_loglog2n: max.map(|m| fixed(m as f64 / ll)),
    }
}

/// Runs every `(n, trial)` in parallel; rows come back in `(n, trial)`
/// order.
pub fn experiment_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.min_exp > cfg.max_exp || cfg.max_exp >= usize::BITS - 1 {
        return Err(Error::InvalidParameter("need min_exp <= max_exp < word size".into()));
    }
    if cfg.t < 3 || cfg.trials == 0 {
        return Err(Error::InvalidParameter("need t >= 3 and at least one trial".into()));
    }
    let jobs: Vec<(usize, usize)> = (cfg.min_exp..=cfg.max_exp)
        .flat_map(|e| (0..cfg.trials).map(move |tr| (1usize << e, tr)))
        .collect();
    let trials: Vec<TrialRow> = jobs.par_iter().map(|&(n, tr)| run_trial(cfg, n, tr)).collect();
    let aggregates = (cfg.min_exp..=cfg.max_exp)
        .map(|e| {
            let n = 1usize << e;
            let rows: Vec<TrialRow> = trials.iter().filter(|r| r.n == n).cloned().collect();
            aggregate(n, &rows)
        })
        .collect();
    Ok(SweepReport { trials, aggregates })
}

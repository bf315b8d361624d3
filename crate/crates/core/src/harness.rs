//! Seeded Monte-Carlo evaluation of how tight the lower bounds are.
//!
//! Each trial draws a random instance, computes the exact NPS minimum
//! sum-rate and the three lower bounds, and records `|bound − α*|`. The RNG
//! for a trial is seeded from `(master_seed, K, L, trial_index)` alone, so
//! results do not depend on scheduling or thread count.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{algorithm1_beta, lb_roua, lb_sprint, ExactConfig, RateError};
use crate::feasibility::{brute_force_min_sum_rate_nps, FeasibilityError, BRUTE_FORCE_MAX_CLIENTS};
use crate::instance::Instance;
use crate::rate::Rate;

/// Identifier of the trial RNG, recorded in CSV comment headers.
pub const GENERATOR_ID: &str = "chacha8-splitmix64";

/// Every trial index divisible by this is cross-checked against the
/// brute-force oracle (when `K` is small enough).
pub const CROSS_CHECK_EVERY: usize = 100;

pub const CSV_HEADER: &str =
    "K,L,trials,avg_err_roua,avg_err_sprint,avg_err_beta,max_err_beta,mean_alpha_star";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactMethod {
    PartitionEnumeration,
    BruteForce,
}

/// How trial instances are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// Each membership i.i.d. Bernoulli(1/2), uncovered packets handed to a
    /// uniformly random client.
    Bernoulli,
    /// Every client holds everything (test fixture).
    AllFull,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialConfig {
    pub k_values: Vec<usize>,
    pub l_values: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub exact_method: ExactMethod,
    /// Largest K the exact method may be asked to handle.
    pub max_exact_clients: usize,
    /// Worker threads; 0 uses the rayon default.
    pub threads: usize,
    pub generator: Generator,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            k_values: (3..=8).collect(),
            l_values: (6..=30).collect(),
            trials: 200,
            master_seed: 0,
            exact_method: ExactMethod::PartitionEnumeration,
            max_exact_clients: crate::bounds::DEFAULT_MAX_CLIENTS,
            threads: 0,
            generator: Generator::Bernoulli,
        }
    }
}

/// Aggregates for one `(K, L)` cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellResult {
    pub k: usize,
    pub l: usize,
    pub trials: usize,
    pub avg_err_roua: Rate,
    pub avg_err_sprint: Rate,
    pub avg_err_beta: Rate,
    pub max_err_beta: u64,
    pub mean_alpha_star: Rate,
}

/// Per-trial values, exposed for property checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub alpha_star: u64,
    pub lb_roua: u64,
    pub lb_sprint: u64,
    pub beta: u64,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cell K={k}, L={l}: {source}")]
    Guard {
        k: usize,
        l: usize,
        source: RateError,
    },
    #[error("cell K={k}, L={l}: brute-force oracle unavailable: {source}")]
    Oracle {
        k: usize,
        l: usize,
        source: FeasibilityError,
    },
    #[error("cell K={k}, L={l}, trial {trial}: lower bound exceeds alpha* ({detail})")]
    BoundViolation {
        k: usize,
        l: usize,
        trial: usize,
        detail: String,
    },
    #[error(
        "cell K={k}, L={l}, trial {trial}: partition enumeration gives {exact}, brute force gives {brute}"
    )]
    OracleMismatch {
        k: usize,
        l: usize,
        trial: usize,
        exact: u64,
        brute: u64,
    },
    #[error("could not build thread pool: {0}")]
    ThreadPool(String),
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of the RNG for one trial.
pub fn trial_seed(master_seed: u64, k: usize, l: usize, trial: usize) -> u64 {
    [k as u64, l as u64, trial as u64]
        .into_iter()
        .fold(splitmix64(master_seed), |h, v| splitmix64(h ^ v))
}

pub fn trial_rng(master_seed: u64, k: usize, l: usize, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master_seed, k, l, trial))
}

/// Draws has-sets with i.i.d. Bernoulli(1/2) memberships, then gives each
/// packet nobody holds to a uniformly random client.
pub fn random_instance<R: Rng + ?Sized>(k: usize, l: usize, rng: &mut R) -> Instance {
    assert!(k >= 2 && l >= 1, "need K >= 2 and L >= 1");
    let mut has: Vec<Vec<usize>> = vec![Vec::new(); k];
    for set in has.iter_mut() {
        for p in 0..l {
            if rng.gen_bool(0.5) {
                set.push(p);
            }
        }
    }
    for p in 0..l {
        if !has.iter().any(|s| s.contains(&p)) {
            let j = rng.gen_range(0..k);
            let pos = has[j].partition_point(|&q| q < p);
            has[j].insert(pos, p);
        }
    }
    Instance::new(l, &has).expect("repaired instance covers every packet")
}

fn draw(cfg: &TrialConfig, k: usize, l: usize, trial: usize) -> Instance {
    match cfg.generator {
        Generator::Bernoulli => random_instance(k, l, &mut trial_rng(cfg.master_seed, k, l, trial)),
        Generator::AllFull => Instance::all_full(k, l).expect("K >= 2, L >= 1"),
    }
}

/// Runs one trial: exact value, bounds, and the sandwich checks.
pub fn run_trial(
    cfg: &TrialConfig,
    k: usize,
    l: usize,
    trial: usize,
) -> Result<TrialOutcome, HarnessError> {
    let inst = draw(cfg, k, l, trial);
    let exact = ExactConfig {
        max_clients: cfg.max_exact_clients,
    };
    let oracle = |inst: &Instance| {
        brute_force_min_sum_rate_nps(inst, None)
            .map(|(a, _)| a)
            .map_err(|source| HarnessError::Oracle { k, l, source })
    };
    let alpha_star = match cfg.exact_method {
        ExactMethod::PartitionEnumeration => {
            let (a, _) = exact
                .min_sum_rate_nps(&inst)
                .map_err(|source| HarnessError::Guard { k, l, source })?;
            if k <= BRUTE_FORCE_MAX_CLIENTS && trial.is_multiple_of(CROSS_CHECK_EVERY) {
                let brute = oracle(&inst)?;
                if brute != a {
                    return Err(HarnessError::OracleMismatch {
                        k,
                        l,
                        trial,
                        exact: a,
                        brute,
                    });
                }
            }
            a
        }
        ExactMethod::BruteForce => oracle(&inst)?,
    };
    let outcome = TrialOutcome {
        alpha_star,
        lb_roua: lb_roua(&inst),
        lb_sprint: lb_sprint(&inst),
        beta: algorithm1_beta(&inst, false).0,
    };
    let violation = |detail: String| HarnessError::BoundViolation {
        k,
        l,
        trial,
        detail,
    };
    if outcome.beta > alpha_star {
        return Err(violation(format!("beta = {} > {alpha_star}", outcome.beta)));
    }
    if outcome.lb_sprint > outcome.beta {
        return Err(violation(format!(
            "lb_sprint = {} > beta = {}",
            outcome.lb_sprint, outcome.beta
        )));
    }
    if outcome.lb_roua > alpha_star {
        return Err(violation(format!(
            "lb_roua = {} > {alpha_star}",
            outcome.lb_roua
        )));
    }
    Ok(outcome)
}

fn validate(cfg: &TrialConfig) -> Result<(), HarnessError> {
    if cfg.trials == 0 {
        return Err(HarnessError::InvalidConfig(
            "trials must be at least 1".into(),
        ));
    }
    if let Some(k) = cfg.k_values.iter().find(|&&k| k < 2) {
        return Err(HarnessError::InvalidConfig(format!("K = {k} < 2")));
    }
    if cfg.l_values.contains(&0) {
        return Err(HarnessError::InvalidConfig("L = 0".into()));
    }
    let limit = match cfg.exact_method {
        ExactMethod::PartitionEnumeration => cfg.max_exact_clients,
        ExactMethod::BruteForce => BRUTE_FORCE_MAX_CLIENTS.min(cfg.max_exact_clients),
    };
    if let Some(&k) = cfg.k_values.iter().find(|&&k| k > limit) {
        let l = cfg.l_values.first().copied().unwrap_or(0);
        return Err(HarnessError::Guard {
            k,
            l,
            source: RateError::GuardExceeded { clients: k, limit },
        });
    }
    Ok(())
}

fn aggregate(k: usize, l: usize, outcomes: &[TrialOutcome]) -> CellResult {
    let n = outcomes.len() as i64;
    let mean =
        |f: &dyn Fn(&TrialOutcome) -> u64| Rate::new(outcomes.iter().map(f).sum::<u64>() as i64, n);
    CellResult {
        k,
        l,
        trials: outcomes.len(),
        avg_err_roua: mean(&|o| o.alpha_star - o.lb_roua),
        avg_err_sprint: mean(&|o| o.alpha_star - o.lb_sprint),
        avg_err_beta: mean(&|o| o.alpha_star - o.beta),
        max_err_beta: outcomes
            .iter()
            .map(|o| o.alpha_star - o.beta)
            .max()
            .unwrap_or(0),
        mean_alpha_star: mean(&|o| o.alpha_star),
    }
}

/// Per-trial outcomes of one cell, in trial order.
pub fn cell_outcomes(
    cfg: &TrialConfig,
    k: usize,
    l: usize,
) -> Result<Vec<TrialOutcome>, HarnessError> {
    let results: Vec<Result<TrialOutcome, HarnessError>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, k, l, t))
        .collect();
    results.into_iter().collect()
}

/// Runs every `(K, L)` cell of the grid; results are sorted by `(K, L)`.
pub fn run_trials(cfg: &TrialConfig) -> Result<Vec<CellResult>, HarnessError> {
    validate(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
    let mut cells: Vec<(usize, usize)> = cfg
        .k_values
        .iter()
        .flat_map(|&k| cfg.l_values.iter().map(move |&l| (k, l)))
        .collect();
    cells.sort_unstable();
    cells.dedup();
    pool.install(|| {
        cells
            .into_iter()
            .map(|(k, l)| cell_outcomes(cfg, k, l).map(|o| aggregate(k, l, &o)))
            .collect()
    })
}

/// A sink write failed after `position` bytes had been written.
#[derive(Debug, Error)]
#[error("write failed after {position} bytes: {source}")]
pub struct EmitError {
    pub position: usize,
    #[source]
    pub source: io::Error,
}

struct CountingWriter<'a, W: Write + ?Sized> {
    inner: &'a mut W,
    written: usize,
}

impl<W: Write + ?Sized> CountingWriter<'_, W> {
    fn line(&mut self, text: &str) -> Result<(), EmitError> {
        let bytes = format!("{text}\n");
        let mut rest = bytes.as_bytes();
        while !rest.is_empty() {
            match self.inner.write(rest) {
                Ok(0) => {
                    return Err(EmitError {
                        position: self.written,
                        source: io::Error::new(io::ErrorKind::WriteZero, "sink accepted 0 bytes"),
                    })
                }
                Ok(n) => {
                    self.written += n;
                    rest = &rest[n..];
                }
                Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
                Err(source) => {
                    return Err(EmitError {
                        position: self.written,
                        source,
                    })
                }
            }
        }
        Ok(())
    }
}

fn csv_row(c: &CellResult) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        c.k,
        c.l,
        c.trials,
        c.avg_err_roua.to_decimal(6),
        c.avg_err_sprint.to_decimal(6),
        c.avg_err_beta.to_decimal(6),
        c.max_err_beta,
        c.mean_alpha_star.to_decimal(6)
    )
}

fn emit(
    results: &[CellResult],
    comment: Option<&str>,
    sink: &mut (impl Write + ?Sized),
) -> Result<usize, EmitError> {
    let mut w = CountingWriter {
        inner: sink,
        written: 0,
    };
    if let Some(c) = comment {
        w.line(&format!("# {c}"))?;
    }
    w.line(CSV_HEADER)?;
    let mut sorted: Vec<&CellResult> = results.iter().collect();
    sorted.sort_by_key(|c| (c.k, c.l));
    for c in sorted {
        w.line(&csv_row(c))?;
    }
    w.inner.flush().map_err(|source| EmitError {
        position: w.written,
        source,
    })?;
    Ok(w.written)
}

/// Writes the results as CSV; returns the number of bytes written.
pub fn emit_results(
    results: &[CellResult],
    sink: &mut (impl Write + ?Sized),
) -> Result<usize, EmitError> {
    emit(results, None, sink)
}

/// As [`emit_results`], preceded by a `#` comment line recording the run
/// configuration and generator.
pub fn emit_results_with_config(
    results: &[CellResult],
    cfg: &TrialConfig,
    sink: &mut (impl Write + ?Sized),
) -> Result<usize, EmitError> {
    emit(results, Some(&config_comment(cfg)), sink)
}

fn config_comment(cfg: &TrialConfig) -> String {
    let list = |v: &[usize]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(";")
    };
    let method = match cfg.exact_method {
        ExactMethod::PartitionEnumeration => "partition-enumeration",
        ExactMethod::BruteForce => "brute-force",
    };
    format!(
        "seed={} generator={} k={} l={} trials={} exact={}",
        cfg.master_seed,
        GENERATOR_ID,
        list(&cfg.k_values),
        list(&cfg.l_values),
        cfg.trials,
        method
    )
}

//! Instance files and the command implementations behind the `cde` binary.
//!
//! Instance files are JSON: `{"num_packets": L, "has_sets": [[...], ...]}`
//! with 0-based packet indices, one list per client in client order.
//! Reports label clients from 1.

use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{algorithm1_beta, lb_roua, lb_sprint, ExactConfig, RateError};
use crate::feasibility::{alpha_feasible, enumerate_strategies, FeasibilityError, Mode};
use crate::harness::{emit_results_with_config, run_trials, HarnessError, TrialConfig};
use crate::instance::{Instance, Violation};
use crate::rate::{ParseRateError, Rate};

/// K above which the experiment command warns about enumeration cost.
pub const EXPERIMENT_WARN_CLIENTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub num_packets: usize,
    pub has_sets: Vec<Vec<usize>>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        InstanceFile {
            num_packets: inst.num_packets(),
            has_sets: inst.has_set_lists(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance, Violation> {
        Instance::new(self.num_packets, &self.has_sets)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("malformed instance file {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("invalid instance: {0}")]
    Validation(#[from] Violation),
    #[error("{0}")]
    Guard(String),
    #[error("bad alpha: {0}")]
    BadAlpha(String),
    #[error("{0}")]
    Failed(String),
    #[error("output error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// Stable exit codes: 2 parse, 3 validation, 4 guard, 5 bad alpha, 1 other.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse { .. } => 2,
            CliError::Validation(_) => 3,
            CliError::Guard(_) => 4,
            CliError::BadAlpha(_) => 5,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<RateError> for CliError {
    fn from(e: RateError) -> Self {
        CliError::Guard(e.to_string())
    }
}

impl From<FeasibilityError> for CliError {
    fn from(e: FeasibilityError) -> Self {
        match e {
            FeasibilityError::TooManyClients { .. }
            | FeasibilityError::CapTooLarge { .. }
            | FeasibilityError::Guard(_) => CliError::Guard(e.to_string()),
            FeasibilityError::NegativeAlpha(_) => CliError::BadAlpha(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<ParseRateError> for CliError {
    fn from(e: ParseRateError) -> Self {
        CliError::BadAlpha(e.to_string())
    }
}

pub fn parse_instance(text: &str, path: &str) -> Result<Instance, CliError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|source| CliError::Parse {
        path: path.to_string(),
        source,
    })?;
    Ok(file.to_instance()?)
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: shown.clone(),
        source,
    })?;
    parse_instance(&text, &shown)
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string(&InstanceFile::from_instance(inst)).expect("plain data serializes")
}

pub fn save_instance(inst: &Instance, path: &Path) -> io::Result<()> {
    fs::write(path, instance_to_json(inst) + "\n")
}

/// Parses `A..B` (inclusive) or a single value `A`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{s}` is not a range of the form A..B"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}

pub fn parse_alpha(s: &str) -> Result<Rate, CliError> {
    let a: Rate = s.parse()?;
    if a.numerator() < 0 {
        return Err(CliError::BadAlpha(format!("negative sum-rate `{s}`")));
    }
    Ok(a)
}

pub fn cmd_exact(path: &Path, mode: Mode, out: &mut dyn Write) -> Result<(), CliError> {
    let inst = load_instance(path)?;
    let exact = ExactConfig::default();
    match mode {
        Mode::Ps => {
            let (rate, witness) = exact.min_sum_rate_ps(&inst)?;
            writeln!(out, "alpha_star = {rate}")?;
            writeln!(out, "partition = {witness}")?;
        }
        Mode::Nps => {
            let (rate, witness) = exact.min_sum_rate_nps(&inst)?;
            writeln!(out, "alpha_star = {rate}")?;
            writeln!(out, "partition = {witness}")?;
        }
    }
    Ok(())
}

pub fn cmd_bounds(path: &Path, trace: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let inst = load_instance(path)?;
    let roua = lb_roua(&inst);
    let sprint = lb_sprint(&inst);
    let (beta, traces) = algorithm1_beta(&inst, trace);
    writeln!(out, "lb_roua = {roua}")?;
    writeln!(out, "lb_sprint = {sprint}")?;
    writeln!(out, "beta = {beta}")?;
    match ExactConfig::default().min_sum_rate_nps(&inst) {
        Ok((alpha, _)) => {
            writeln!(out, "alpha_star_nps = {alpha}")?;
            writeln!(out, "err_lb_roua = {}", alpha - roua)?;
            writeln!(out, "err_lb_sprint = {}", alpha - sprint)?;
            writeln!(out, "err_beta = {}", alpha - beta)?;
        }
        Err(e) => writeln!(out, "# alpha_star_nps omitted: {e}")?,
    }
    for t in traces.iter().flatten() {
        for (m, step) in t.steps.iter().enumerate() {
            writeln!(
                out,
                "chain start={} m={} selected={} W={} bound={}",
                t.start_client + 1,
                m + 2,
                step.selected + 1,
                step.chain,
                step.candidate
            )?;
        }
    }
    Ok(())
}

pub fn cmd_feasible(
    path: &Path,
    alpha: &str,
    mode: Mode,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let inst = load_instance(path)?;
    let alpha = parse_alpha(alpha)?;
    let v = alpha_feasible(&inst, alpha, mode)?;
    if v.feasible {
        writeln!(out, "feasible")?;
        if let Some(w) = &v.witness_strategy {
            writeln!(out, "witness = {w}")?;
        }
    } else {
        writeln!(out, "infeasible")?;
        if let Some(p) = &v.violated_partition {
            writeln!(out, "violated_partition = {p}")?;
        }
        if v.reason.is_some() {
            writeln!(out, "reason = non-integral")?;
        }
    }
    Ok(())
}

pub fn cmd_strategies(path: &Path, alpha: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let inst = load_instance(path)?;
    let alpha = parse_alpha(alpha)?;
    if !alpha.is_integer() {
        return Err(CliError::BadAlpha(format!(
            "strategy enumeration needs an integer sum-rate, got {alpha}"
        )));
    }
    for s in enumerate_strategies(&inst, alpha.numerator() as u64)? {
        writeln!(out, "{s}")?;
    }
    Ok(())
}

pub fn cmd_experiment(
    cfg: &TrialConfig,
    out_path: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    if let Some(k) = cfg
        .k_values
        .iter()
        .copied()
        .filter(|&k| k > EXPERIMENT_WARN_CLIENTS)
        .max()
    {
        writeln!(
            err,
            "warning: K = {k} needs Bell({k}) partitions per trial; expect a long run"
        )?;
    }
    let results = run_trials(cfg).map_err(|e| match e {
        HarnessError::Guard { .. } => CliError::Guard(e.to_string()),
        other => CliError::Failed(other.to_string()),
    })?;
    let mut bytes = Vec::new();
    emit_results_with_config(&results, cfg, &mut bytes)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    fs::write(out_path, &bytes)?;
    let worst = results.iter().map(|c| c.max_err_beta).max().unwrap_or(0);
    writeln!(out, "cells = {}", results.len())?;
    writeln!(out, "trials_per_cell = {}", cfg.trials)?;
    writeln!(out, "max_err_beta = {worst}")?;
    writeln!(out, "output = {}", out_path.display())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{"num_packets": 6, "has_sets": [[0,1,2,3,4],[0,1,5],[2,3,5]]}"#;

    #[test]
    fn parse_sample() {
        let inst = parse_instance(SAMPLE, "sample").unwrap();
        assert_eq!(inst.num_clients(), 3);
        assert_eq!(inst.num_packets(), 6);
        assert_eq!(parse_instance(&instance_to_json(&inst), "x").unwrap(), inst);
    }

    #[test]
    fn error_codes() {
        let e = parse_instance("{not json", "x").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = parse_instance(r#"{"num_packets": 2, "has_sets": [[0],[0]]}"#, "x").unwrap_err();
        assert_eq!(e.exit_code(), 3);
        let e = parse_instance(r#"{"num_packets": 2, "has_sets": [[0],[-1]]}"#, "x").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert_eq!(parse_alpha("x").unwrap_err().exit_code(), 5);
        assert_eq!(parse_alpha("-2").unwrap_err().exit_code(), 5);
        assert_eq!(parse_alpha("7/2").unwrap(), Rate::new(7, 2));
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..6").unwrap(), 3..=6);
        assert_eq!(parse_range("3..=6").unwrap(), 3..=6);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert!(parse_range("6..3").is_err());
        assert!(parse_range("a..b").is_err());
    }
}

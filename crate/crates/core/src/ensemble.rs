//! Randomized soundness ensembles.
//!
//! Every row draws a random POVM pair `(M, N)` and a random PVM pair
//! `(A, B)`, evaluates every bound method on them and certifies each bound
//! against a state search. Rows are independent and seeded from
//! `(seed, row index)`, so output does not depend on scheduling.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    maassen_uffink_bound, mixed_pvm_bound, single_povm_minentropy_bound, strengthened_pair_bound,
    strengthened_single_bound, uncorrected_from, BoundMethod,
};
use crate::error::{Error, Result};
use crate::measurement::{mixed_pvm_povm, random_pvm, random_rank1_povm};
use crate::optimize::{minimize_entropy_over_states, OptimizerConfig};
use crate::verify::MARGIN_TOL;

pub const CSV_HEADER_COMMENT: &str = "# naimark-bounds ensemble v1";

/// Strict improvement threshold of a strengthened bound over its baseline.
const IMPROVEMENT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub trials: usize,
    pub dims: Vec<usize>,
    /// Outcome-count range; `None` means `d` (lower) or `2d` (upper).
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            trials: 200,
            dims: vec![2, 3],
            k_min: None,
            k_max: None,
            seed: 0,
            optimizer: OptimizerConfig::default(),
        }
    }
}

impl EnsembleConfig {
    fn outcome_range(&self, d: usize) -> Result<(usize, usize)> {
        let lo = self.k_min.unwrap_or(d).max(d);
        let hi = self.k_max.unwrap_or(2 * d);
        if hi < lo {
            return Err(Error::InvalidConfig(format!("empty outcome range {lo}..={hi} for d = {d}")));
        }
        Ok((lo, hi))
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be positive".into()));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::InvalidConfig("dimensions must be positive".into()));
        }
        for &d in &self.dims {
            self.outcome_range(d)?;
        }
        self.optimizer.validate()
    }
}

/// One CSV row. The first nine columns are the stable core schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRow {
    pub seed: u64,
    pub d: usize,
    #[serde(rename = "K_M")]
    pub k_m: usize,
    #[serde(rename = "K_N")]
    pub k_n: usize,
    pub mu_bits: f64,
    pub strengthened_bits: f64,
    pub uncorrected_bits: f64,
    /// Minimum of `H(M) + H(N)` found by state search.
    pub min_entropy_bits: f64,
    /// Smallest margin over every method in the row.
    pub margin: f64,
    pub row: usize,
    pub strengthened_baseline_bits: f64,
    pub single_bits: f64,
    pub single_baseline_bits: f64,
    pub single_uncorrected_bits: f64,
    pub single_minentropy_bits: f64,
    pub min_single_entropy_bits: f64,
    pub mixed_bits: f64,
    pub min_mixed_entropy_bits: f64,
    pub converged: bool,
}

impl EnsembleRow {
    /// `(method, margin)` for every certified bound in the row.
    pub fn margins(&self) -> [(BoundMethod, f64); 5] {
        [
            (BoundMethod::Mu, self.min_entropy_bits - self.mu_bits),
            (BoundMethod::StrengthenedPair, self.min_entropy_bits - self.strengthened_bits),
            (BoundMethod::StrengthenedSingle, self.min_single_entropy_bits - self.single_bits),
            (BoundMethod::SingleMinentropy, self.min_single_entropy_bits - self.single_minentropy_bits),
            (BoundMethod::MixedPvm, self.min_mixed_entropy_bits - self.mixed_bits),
        ]
    }

    pub fn has_ancilla_pair(&self) -> bool {
        self.k_m.max(self.k_n) > self.d
    }

    pub fn has_ancilla_single(&self) -> bool {
        self.k_m > self.d
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MethodViolations {
    pub mu: usize,
    pub strengthened_pair: usize,
    pub strengthened_single: usize,
    pub single_minentropy: usize,
    pub mixed_pvm: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub trials: usize,
    pub seed: u64,
    pub min_margin: f64,
    pub violations: usize,
    pub violations_by_method: MethodViolations,
    /// Rows where a strengthened bound fell below its own `W = I` value.
    pub baseline_dominance_failures: usize,
    /// Rows with an ancilla where a strengthened bound beats its baseline.
    pub strict_improvements: usize,
    pub mean_pair_improvement_over_uncorrected_bits: f64,
    pub mean_single_improvement_over_uncorrected_bits: f64,
    pub unconverged_rows: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleOutput {
    pub rows: Vec<EnsembleRow>,
    pub summary: EnsembleSummary,
}

fn row_rng(seed: u64, row: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(row as u64);
    rng
}

pub fn run_row(cfg: &EnsembleConfig, row: usize) -> Result<EnsembleRow> {
    let mut rng = row_rng(cfg.seed, row);
    let d = cfg.dims[rng.random_range(0..cfg.dims.len())];
    let (lo, hi) = cfg.outcome_range(d)?;
    let k_m = rng.random_range(lo..=hi);
    let k_n = rng.random_range(lo..=hi);
    let row_seed: u64 = rng.random();
    let mut seeds = ChaCha8Rng::seed_from_u64(row_seed);

    let m = random_rank1_povm(d, k_m, seeds.random())?;
    let n = random_rank1_povm(d, k_n, seeds.random())?;
    let a = random_pvm(d, seeds.random())?;
    let b = random_pvm(d, seeds.random())?;
    let opt = OptimizerConfig {
        seed: seeds.random(),
        ..cfg.optimizer.clone()
    };

    let mu = maassen_uffink_bound(&m, &n)?;
    let pair = strengthened_pair_bound(&m, &n, &opt)?;
    let pair_old = uncorrected_from(&pair)?;
    let single = strengthened_single_bound(&m, &opt)?;
    let single_old = uncorrected_from(&single)?;
    let minent = single_povm_minentropy_bound(&m);
    let mixed = mixed_pvm_bound(&a, &b)?;
    let union = mixed_pvm_povm(&a, &b)?;

    let min_pair = minimize_entropy_over_states(&[&m, &n], &opt)?.best_value;
    let min_single = minimize_entropy_over_states(&[&m], &opt)?.best_value;
    let min_mixed = minimize_entropy_over_states(&[&union], &opt)?.best_value;

    let mut out = EnsembleRow {
        seed: row_seed,
        d,
        k_m,
        k_n,
        mu_bits: mu.value_bits,
        strengthened_bits: pair.value_bits,
        uncorrected_bits: pair_old.value_bits,
        min_entropy_bits: min_pair,
        margin: 0.0,
        row,
        strengthened_baseline_bits: pair.baseline_bits,
        single_bits: single.value_bits,
        single_baseline_bits: single.baseline_bits,
        single_uncorrected_bits: single_old.value_bits,
        single_minentropy_bits: minent.value_bits,
        min_single_entropy_bits: min_single,
        mixed_bits: mixed.value_bits,
        min_mixed_entropy_bits: min_mixed,
        converged: pair.converged && single.converged,
    };
    out.margin = out.margins().iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    Ok(out)
}

pub fn summarize(cfg: &EnsembleConfig, rows: &[EnsembleRow]) -> EnsembleSummary {
    let mut by_method = MethodViolations::default();
    for r in rows {
        for (method, margin) in r.margins() {
            if margin < -MARGIN_TOL {
                match method {
                    BoundMethod::Mu => by_method.mu += 1,
                    BoundMethod::StrengthenedPair => by_method.strengthened_pair += 1,
                    BoundMethod::StrengthenedSingle => by_method.strengthened_single += 1,
                    BoundMethod::SingleMinentropy => by_method.single_minentropy += 1,
                    BoundMethod::MixedPvm => by_method.mixed_pvm += 1,
                    _ => {}
                }
            }
        }
    }
    let violations = by_method.mu
        + by_method.strengthened_pair
        + by_method.strengthened_single
        + by_method.single_minentropy
        + by_method.mixed_pvm;
    let n = rows.len().max(1) as f64;
    EnsembleSummary {
        trials: rows.len(),
        seed: cfg.seed,
        min_margin: rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min),
        violations,
        violations_by_method: by_method,
        baseline_dominance_failures: rows
            .iter()
            .filter(|r| {
                r.strengthened_bits < r.strengthened_baseline_bits - IMPROVEMENT_TOL
                    || r.single_bits < r.single_baseline_bits - IMPROVEMENT_TOL
            })
            .count(),
        strict_improvements: rows
            .iter()
            .filter(|r| {
                (r.has_ancilla_pair() && r.strengthened_bits > r.strengthened_baseline_bits + IMPROVEMENT_TOL)
                    || (r.has_ancilla_single() && r.single_bits > r.single_baseline_bits + IMPROVEMENT_TOL)
            })
            .count(),
        mean_pair_improvement_over_uncorrected_bits: rows
            .iter()
            .map(|r| r.strengthened_bits - r.uncorrected_bits)
            .sum::<f64>()
            / n,
        mean_single_improvement_over_uncorrected_bits: rows
            .iter()
            .map(|r| r.single_bits - r.single_uncorrected_bits)
            .sum::<f64>()
            / n,
        unconverged_rows: rows.iter().filter(|r| !r.converged).count(),
    }
}

/// Runs every row (concurrently) and summarizes. Rows come back in index order.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleOutput> {
    cfg.validate()?;
    let rows = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_row(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(cfg, &rows);
    Ok(EnsembleOutput { rows, summary })
}

/// CSV with a leading version comment line.
pub fn write_csv<W: Write>(rows: &[EnsembleRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER_COMMENT}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()
}

pub fn to_csv_string(rows: &[EnsembleRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: usize, dims: Vec<usize>, k_max: Option<usize>) -> EnsembleConfig {
        EnsembleConfig {
            trials,
            dims,
            k_min: None,
            k_max,
            seed: 7,
            optimizer: OptimizerConfig {
                restarts: 6,
                ..OptimizerConfig::default()
            },
        }
    }

    #[test]
    fn pvm_rows_strengthened_equals_mu() {
        let out = run_ensemble(&small(1, vec![2], Some(2))).unwrap();
        let r = &out.rows[0];
        assert_eq!((r.k_m, r.k_n), (2, 2));
        assert!((r.strengthened_bits - r.mu_bits).abs() < 1e-12);
        assert_eq!(r.single_bits, 0.0);
    }

    #[test]
    fn csv_is_deterministic_and_versioned() {
        let cfg = small(4, vec![2, 3], None);
        let a = to_csv_string(&run_ensemble(&cfg).unwrap().rows);
        let b = to_csv_string(&run_ensemble(&cfg).unwrap().rows);
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER_COMMENT));
        assert!(lines.next().unwrap().starts_with("seed,d,K_M,K_N,mu_bits,strengthened_bits,uncorrected_bits,min_entropy_bits,margin"));
    }

    #[test]
    fn small_ensemble_is_sound() {
        let out = run_ensemble(&small(6, vec![2, 3], None)).unwrap();
        assert_eq!(out.summary.violations, 0);
        assert_eq!(out.summary.baseline_dominance_failures, 0);
        assert!(out.summary.min_margin >= -MARGIN_TOL);
        assert_eq!(out.rows.iter().map(|r| r.row).collect::<Vec<_>>(), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn config_validation() {
        assert!(small(0, vec![2], None).validate().is_err());
        assert!(small(1, vec![], None).validate().is_err());
        assert!(small(1, vec![3], Some(2)).validate().is_err());
    }
}

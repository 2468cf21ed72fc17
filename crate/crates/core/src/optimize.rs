//! Derivative-free multi-restart search used for the ancilla-unitary
//! maximization and for entropy minimization over pure states.
//!
//! Local search is a Hooke–Jeeves pattern search with one step size per
//! coordinate: try `±step`, keep an improvement and grow that step by 1.5,
//! otherwise halve it; after a productive sweep, jump along the last
//! displacement. Stop once every step is below `tol`. The min–max over overlap
//! moduli is attacked through an annealed log-sum-exp surrogate followed by
//! a polish on the exact max. Reported values are always exact.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, ComplexVector};
use crate::measurement::{entropy_on_raw, PureState, Rank1Povm};
use crate::naimark::{param_count, NaimarkExtension};

const INITIAL_STEP: f64 = 0.5;
/// Sweep budget of the exact-max refinement after annealing.
const POLISH_SWEEPS: usize = 200;
/// Starting step for stages that continue from an earlier stage's optimum.
const WARM_STEP: f64 = 0.05;
const SHRINK: f64 = 0.5;
const EXPAND: f64 = 1.5;
const MAX_STEP: f64 = PI;
const RANDOM_PROBES: usize = 16;
/// Surrogate stages stop at `max(tol, SMOOTH_STAGE_TOL / β)`: the surrogate's
/// own bias is of order `ln(K²)/β`, so resolving further is wasted work.
const SMOOTH_STAGE_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Maximum number of pattern-search sweeps per stage.
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    /// Increasing softmax inverse temperatures for the log-sum-exp surrogate.
    pub smoothing_schedule: Vec<f64>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 2000,
            tol: 1e-9,
            seed: 0,
            smoothing_schedule: vec![10.0, 50.0, 250.0, 1250.0],
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        if self.smoothing_schedule.iter().any(|&b| !(b > 0.0)) {
            return Err(Error::InvalidConfig("smoothing temperatures must be positive".into()));
        }
        if self.smoothing_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("smoothing schedule must be increasing".into()));
        }
        Ok(())
    }

    /// Independent RNG stream for one restart.
    fn restart_rng(&self, restart: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);
        rng
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best_value: f64,
    pub best_params: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
}

struct LocalResult {
    x: Vec<f64>,
    value: f64,
    evaluations: usize,
    converged: bool,
}

/// One exploratory sweep around `x` (in place), adapting per-coordinate steps.
fn explore(f: &mut impl FnMut(&[f64]) -> f64, x: &mut [f64], fx: &mut f64, steps: &mut [f64]) -> usize {
    let mut evaluations = 0;
    for i in 0..x.len() {
        let orig = x[i];
        let mut improved = false;
        for delta in [steps[i], -steps[i]] {
            x[i] = orig + delta;
            let trial = f(x);
            evaluations += 1;
            if trial < *fx {
                *fx = trial;
                improved = true;
                break;
            }
        }
        if improved {
            steps[i] = (steps[i] * EXPAND).min(MAX_STEP);
        } else {
            x[i] = orig;
            steps[i] *= SHRINK;
        }
    }
    evaluations
}

/// Hooke–Jeeves: exploratory sweeps, plus a pattern move along the last
/// displacement whenever a sweep improves.
fn pattern_search(
    f: &mut impl FnMut(&[f64]) -> f64,
    x: Vec<f64>,
    initial_step: f64,
    tol: f64,
    max_iters: usize,
) -> LocalResult {
    let mut base = x;
    let mut f_base = f(&base);
    let mut evaluations = 1;
    let mut steps = vec![initial_step; base.len()];
    let mut converged = base.is_empty();
    let mut sweeps = 0;
    while !converged && sweeps < max_iters {
        let mut x = base.clone();
        let mut fx = f_base;
        evaluations += explore(f, &mut x, &mut fx, &mut steps);
        sweeps += 1;
        while fx < f_base && sweeps < max_iters {
            let mut probe: Vec<f64> = x.iter().zip(&base).map(|(a, b)| 2.0 * a - b).collect();
            base = x;
            f_base = fx;
            let mut f_probe = f(&probe);
            evaluations += 1;
            evaluations += explore(f, &mut probe, &mut f_probe, &mut steps);
            sweeps += 1;
            if f_probe < f_base {
                x = probe;
                fx = f_probe;
            } else {
                break;
            }
        }
        converged = steps.iter().all(|&s| s < tol);
    }
    LocalResult {
        x: base,
        value: f_base,
        evaluations,
        converged,
    }
}

/// Min by value, ties broken by lower restart index.
fn merge(results: Vec<LocalResult>) -> OptResult {
    let evaluations = results.iter().map(|r| r.evaluations).sum();
    let best = results
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(_, r)| r)
        .expect("at least one restart");
    OptResult {
        best_value: best.value,
        best_params: best.x,
        evaluations,
        converged: best.converged,
    }
}

/// Row-major `exp(iH)` for the Hermitian `H` encoded by `params`; the
/// same map as [`hermitian_from_params`] followed by
/// [`crate::linalg::exp_i_hermitian`], computed by scaling and squaring a
/// Taylor polynomial — no eigensolver in the inner loop.
///
/// [`hermitian_from_params`]: crate::naimark::hermitian_from_params
fn unitary_from_params(m: usize, params: &[f64]) -> Option<Vec<Complex64>> {
    if params.len() != param_count(m) || params.iter().any(|p| !p.is_finite()) {
        return None;
    }
    // A = iH, scaled so that its max-row-sum norm is at most 1/2
    let mut a = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        a[i * m + i] = Complex64::new(0.0, params[i]);
    }
    let mut p = m;
    for i in 0..m {
        for j in i + 1..m {
            let z = Complex64::new(params[p], params[p + 1]);
            a[i * m + j] = Complex64::i() * z;
            a[j * m + i] = Complex64::i() * z.conj();
            p += 2;
        }
    }
    let norm = (0..m)
        .map(|i| a[i * m..(i + 1) * m].iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = 0.5f64.powi(squarings as i32);
    a.iter_mut().for_each(|z| *z *= scale);

    // Horner: I + A(I + A/2(I + A/3(...)))
    let mut w = identity(m);
    let mut tmp = vec![Complex64::new(0.0, 0.0); m * m];
    for k in (1..=TAYLOR_DEGREE).rev() {
        matmul_into(&a, &w, &mut tmp, m);
        let inv = 1.0 / k as f64;
        for (i, z) in tmp.iter().enumerate() {
            w[i] = *z * inv;
        }
        for i in 0..m {
            w[i * m + i] += 1.0;
        }
    }
    for _ in 0..squarings {
        matmul_into(&w, &w, &mut tmp, m);
        std::mem::swap(&mut w, &mut tmp);
    }
    Some(w)
}

/// Truncation error of the scaled series is below `0.5^13 / 13!`, under 1e-14.
const TAYLOR_DEGREE: usize = 12;

fn identity(m: usize) -> Vec<Complex64> {
    let mut w = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        w[i * m + i] = Complex64::new(1.0, 0.0);
    }
    w
}

fn matmul_into(a: &[Complex64], b: &[Complex64], out: &mut [Complex64], m: usize) {
    for i in 0..m {
        for j in 0..m {
            out[i * m + j] = (0..m).map(|k| a[i * m + k] * b[k * m + j]).sum();
        }
    }
}

/// Precomputed pieces of `⟨m̃_k|(I ⊕ W)|ñ_l⟩ = G_kl + ⟨m′_k|W|n′_l⟩`.
pub struct OverlapKernel {
    outcomes: usize,
    ancilla_dim: usize,
    system_gram: Vec<Complex64>,
    ancilla_m: Vec<Vec<Complex64>>,
    ancilla_n: Vec<Vec<Complex64>>,
}

impl OverlapKernel {
    pub fn new(ext_m: &NaimarkExtension, ext_n: &NaimarkExtension) -> Result<Self> {
        if ext_m.outcomes() != ext_n.outcomes() {
            return Err(Error::DimensionMismatch {
                expected: ext_m.outcomes(),
                found: ext_n.outcomes(),
            });
        }
        if ext_m.system_dim() != ext_n.system_dim() {
            return Err(Error::DimensionMismatch {
                expected: ext_m.system_dim(),
                found: ext_n.system_dim(),
            });
        }
        let k = ext_m.outcomes();
        let mut system_gram = Vec::with_capacity(k * k);
        for r in 0..k {
            for c in 0..k {
                system_gram.push(dot(ext_m.system_block(r), ext_n.system_block(c)));
            }
        }
        Ok(Self {
            outcomes: k,
            ancilla_dim: ext_m.ancilla_dim(),
            system_gram,
            ancilla_m: (0..k).map(|r| ext_m.ancilla_block(r).to_vec()).collect(),
            ancilla_n: (0..k).map(|c| ext_n.ancilla_block(c).to_vec()).collect(),
        })
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    /// Moduli of all overlap entries for the unitary with parameters `params`,
    /// row-major into `out`.
    pub fn moduli(&self, params: &[f64], out: &mut Vec<f64>) {
        out.clear();
        let m = self.ancilla_dim;
        if m == 0 {
            out.extend(self.system_gram.iter().map(|z| z.norm()));
            return;
        }
        let Some(w) = unitary_from_params(m, params) else {
            // unusable point: never preferred by the search
            out.resize(self.outcomes * self.outcomes, f64::INFINITY);
            return;
        };
        // W |n′_l⟩ for every l
        let rotated: Vec<Vec<Complex64>> = self
            .ancilla_n
            .iter()
            .map(|n| {
                (0..m)
                    .map(|a| w[a * m..(a + 1) * m].iter().zip(n).map(|(x, y)| x * y).sum())
                    .collect()
            })
            .collect();
        for r in 0..self.outcomes {
            for c in 0..self.outcomes {
                let z = self.system_gram[r * self.outcomes + c] + dot(&self.ancilla_m[r], &rotated[c]);
                out.push(z.norm());
            }
        }
    }

    /// Exact objective `max_kl |overlap_kl|` and its argmax.
    pub fn max_overlap(&self, params: &[f64]) -> (f64, (usize, usize)) {
        let mut buf = Vec::with_capacity(self.outcomes * self.outcomes);
        self.moduli(params, &mut buf);
        let (idx, v) = argmax(&buf);
        (v, (idx / self.outcomes, idx % self.outcomes))
    }
}

fn argmax(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
}

/// `(1/β) ln Σ exp(β a_i)`, shifted by the max for stability.
fn log_sum_exp(values: &[f64], beta: f64) -> f64 {
    let (_, max) = argmax(values);
    let s: f64 = values.iter().map(|&a| (beta * (a - max)).exp()).sum();
    max + s.ln() / beta
}

/// Minimizes `max_kl |⟨m̃_k|(I ⊕ exp(iH))|ñ_l⟩|` over Hermitian `H`.
///
/// Restart 0 starts from `H = 0`; every other restart starts from the best
/// of a handful of uniformly random parameter vectors.
pub fn minimize_max_overlap(ext_m: &NaimarkExtension, ext_n: &NaimarkExtension, cfg: &OptimizerConfig) -> Result<OptResult> {
    cfg.validate()?;
    let kernel = OverlapKernel::new(ext_m, ext_n)?;
    let m = kernel.ancilla_dim();
    if m == 0 {
        let (v, _) = kernel.max_overlap(&[]);
        return Ok(OptResult {
            best_value: v,
            best_params: Vec::new(),
            evaluations: 1,
            converged: true,
        });
    }
    let n_params = param_count(m);
    let results: Vec<LocalResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| overlap_restart(&kernel, n_params, cfg, r))
        .collect();
    Ok(merge(results))
}

fn overlap_restart(kernel: &OverlapKernel, n_params: usize, cfg: &OptimizerConfig, restart: usize) -> LocalResult {
    let mut buf = Vec::new();
    let mut evaluations = 0;
    let mut exact = |x: &[f64]| kernel.max_overlap(x).0;

    let (x0, f0) = if restart == 0 {
        let x = vec![0.0; n_params];
        let v = exact(&x);
        (x, v)
    } else {
        let mut rng = cfg.restart_rng(restart);
        let mut best: Option<(Vec<f64>, f64)> = None;
        for _ in 0..RANDOM_PROBES {
            let x: Vec<f64> = (0..n_params).map(|_| rng.random_range(-PI..PI)).collect();
            let v = exact(&x);
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some((x, v));
            }
        }
        best.expect("probes > 0")
    };
    evaluations += if restart == 0 { 1 } else { RANDOM_PROBES };

    let mut x = x0.clone();
    let mut step = INITIAL_STEP;
    let mut smooth_converged = true;
    for &beta in &cfg.smoothing_schedule {
        let mut smooth = |p: &[f64]| {
            kernel.moduli(p, &mut buf);
            log_sum_exp(&buf, beta)
        };
        let stage_tol = cfg.tol.max(SMOOTH_STAGE_TOL / beta);
        let stage = pattern_search(&mut smooth, x, step, stage_tol, cfg.max_iters);
        step = WARM_STEP;
        smooth_converged &= stage.converged;
        evaluations += stage.evaluations;
        x = stage.x;
    }
    let annealed = exact(&x);
    evaluations += 1;
    let (start, step) = if annealed <= f0 { (x, WARM_STEP) } else { (x0, INITIAL_STEP) };

    // Coordinate moves crawl along the kinks of the exact max, so this
    // refinement gets a fixed budget; convergence is judged on the surrogate.
    let mut polish = pattern_search(&mut exact, start, step, cfg.tol, cfg.max_iters.min(POLISH_SWEEPS));
    if !cfg.smoothing_schedule.is_empty() {
        polish.converged = smooth_converged;
    }
    if n_params == 1 {
        polish.x[0] = polish.x[0].rem_euclid(TAU);
        polish.value = exact(&polish.x);
    }
    polish.evaluations += evaluations;
    polish
}

/// Parameters `(re_0, im_0, re_1, im_1, ...)` of a state vector.
pub fn state_from_params(params: &[f64]) -> Result<PureState> {
    let v = ComplexVector::new(params.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())?;
    PureState::from_unnormalized(&v)
}

fn params_from_vector(v: &[Complex64]) -> Vec<f64> {
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().flat_map(|z| [z.re / n, z.im / n]).collect()
}

/// Minimizes `Σ_j H(M_j)(ψ)` over unit vectors `ψ`.
///
/// Starting points, one per restart: computational basis states, then the
/// normalized nonzero kets of each POVM, then Gaussian random vectors.
pub fn minimize_entropy_over_states(povms: &[&Rank1Povm], cfg: &OptimizerConfig) -> Result<OptResult> {
    cfg.validate()?;
    let first = povms.first().ok_or(Error::Empty("POVM list"))?;
    let d = first.dim();
    if let Some(bad) = povms.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.dim(),
        });
    }
    let mut structured: Vec<Vec<f64>> = (0..d)
        .map(|i| params_from_vector(ComplexVector::basis(d, i).entries()))
        .collect();
    for p in povms {
        for k in p.kets() {
            if k.norm() > 1e-8 {
                structured.push(params_from_vector(k.entries()));
            }
        }
    }

    let objective = |x: &[f64]| -> f64 {
        let psi: Vec<Complex64> = x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        if psi.iter().all(|z| z.norm_sqr() == 0.0) {
            return f64::INFINITY;
        }
        povms.iter().map(|p| entropy_on_raw(p, &psi)).sum()
    };

    let results: Vec<LocalResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let x0 = if r < structured.len() {
                structured[r].clone()
            } else {
                let mut rng = cfg.restart_rng(r);
                let v: Vec<Complex64> = (0..d)
                    .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect();
                params_from_vector(&v)
            };
            let mut f = objective;
            let mut res = pattern_search(&mut f, x0, INITIAL_STEP, cfg.tol, cfg.max_iters);
            let n: f64 = res.x.iter().map(|v| v * v).sum::<f64>().sqrt();
            res.x.iter_mut().for_each(|v| *v /= n);
            res.value = objective(&res.x);
            res.evaluations += 1;
            res
        })
        .collect();
    Ok(merge(results))
}

/// Exhaustive evaluation of `objective` at `θ_i = 2πi/points`.
pub fn grid_search_phase(objective: impl Fn(f64) -> f64, points: usize) -> Result<OptResult> {
    if points < 2 {
        return Err(Error::InvalidConfig("grid needs at least 2 points".into()));
    }
    let (best_theta, best_value) = (0..points)
        .map(|i| TAU * i as f64 / points as f64)
        .map(|t| (t, objective(t)))
        .fold((0.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(OptResult {
        best_value,
        best_params: vec![best_theta],
        evaluations: points,
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{mixed_pvm_povm, random_rank1_povm, Pvm};
    use crate::naimark::{dilate, overlap_matrix, AncillaUnitary};

    fn quick(seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            restarts: 8,
            ..OptimizerConfig::with_seed(seed)
        }
    }

    #[test]
    fn fast_unitary_matches_linalg_route() {
        for params in [
            vec![0.4, -1.2, 0.7, 0.3, -0.9, 1.5, 0.2, -0.6, 2.1],
            vec![9.0, -7.5, 3.1, 6.2, -8.8, 4.4, 0.0, -5.5, 7.7],
            vec![0.0; 9],
        ] {
            let fast = unitary_from_params(3, &params).unwrap();
            let slow = crate::naimark::AncillaUnitary::from_params(3, &params).unwrap();
            for (a, b) in fast.iter().zip(slow.matrix().entries()) {
                assert!((a - b).norm() < 1e-12, "{a} vs {b}");
            }
        }
        assert!(unitary_from_params(2, &[0.0; 9]).is_none());
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let mut c = OptimizerConfig::default();
        c.smoothing_schedule = vec![10.0, 5.0];
        assert!(c.validate().is_err());
        c = OptimizerConfig::default();
        c.restarts = 0;
        assert!(c.validate().is_err());
        c = OptimizerConfig::default();
        c.tol = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn no_ancilla_is_gram_max() {
        let ez = dilate(&Rank1Povm::pauli_z()).unwrap();
        let ex = dilate(&Rank1Povm::pauli_x()).unwrap();
        let r = minimize_max_overlap(&ez, &ex, &quick(0)).unwrap();
        assert!(r.best_params.is_empty());
        assert!(r.converged);
        assert!((r.best_value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    fn trine_objective(theta: f64) -> f64 {
        let ext = dilate(&Rank1Povm::trine()).unwrap();
        let o = overlap_matrix(&ext, &ext, &AncillaUnitary::phase(theta)).unwrap();
        o.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn trine_grid_oracle_matches_closed_form() {
        let g = grid_search_phase(trine_objective, 100_000).unwrap();
        // equalization |2 + e^{iθ}| = |1 − e^{iθ}| at cos θ = −1/2
        assert!((g.best_value - 1.0 / 3f64.sqrt()).abs() < 1e-4);
        assert!((g.best_params[0] - 2.0 * PI / 3.0).abs() < 1e-3);
    }

    #[test]
    fn trine_search_agrees_with_grid() {
        let ext = dilate(&Rank1Povm::trine()).unwrap();
        let r = minimize_max_overlap(&ext, &ext, &OptimizerConfig::default()).unwrap();
        let g = grid_search_phase(trine_objective, 100_000).unwrap();
        assert!((r.best_value - g.best_value).abs() <= 1e-4);
        assert!((r.best_value - 1.0 / 3f64.sqrt()).abs() < 1e-8, "{}", r.best_value);
        assert!((r.best_params[0].cos() + 0.5).abs() < 1e-6);
    }

    #[test]
    fn reported_value_is_exact_objective() {
        let a = dilate(&random_rank1_povm(2, 4, 1).unwrap()).unwrap();
        let b = dilate(&random_rank1_povm(2, 4, 2).unwrap()).unwrap();
        let r = minimize_max_overlap(&a, &b, &quick(5)).unwrap();
        let w = AncillaUnitary::from_params(2, &r.best_params).unwrap();
        let o = overlap_matrix(&a, &b, &w).unwrap();
        let exact = o.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((exact - r.best_value).abs() < 1e-12);
        let baseline = overlap_matrix(&a, &b, &AncillaUnitary::identity(2)).unwrap();
        let base = baseline.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(r.best_value <= base + 1e-12);
    }

    #[test]
    fn overlap_search_is_deterministic() {
        let a = dilate(&random_rank1_povm(2, 4, 11).unwrap()).unwrap();
        let b = dilate(&random_rank1_povm(2, 4, 12).unwrap()).unwrap();
        let r1 = minimize_max_overlap(&a, &b, &quick(3)).unwrap();
        let r2 = minimize_max_overlap(&a, &b, &quick(3)).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn more_restarts_never_hurt() {
        let a = dilate(&random_rank1_povm(2, 4, 31).unwrap()).unwrap();
        let b = dilate(&random_rank1_povm(2, 4, 32).unwrap()).unwrap();
        let mut prev = f64::INFINITY;
        for n in [1, 2, 4, 8] {
            let cfg = OptimizerConfig {
                restarts: n,
                ..OptimizerConfig::with_seed(9)
            };
            let v = minimize_max_overlap(&a, &b, &cfg).unwrap().best_value;
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn entropy_of_single_pvm_is_zero() {
        let z = Rank1Povm::pauli_z();
        let r = minimize_entropy_over_states(&[&z], &quick(0)).unwrap();
        assert!(r.best_value.abs() < 1e-12);
    }

    /// Brute-force Bloch-sphere grid for H(Z) + H(X).
    fn bloch_grid_min(f: impl Fn(&PureState) -> f64, n: usize) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..=n {
            let theta = PI * i as f64 / n as f64;
            for j in 0..n {
                let phi = TAU * j as f64 / n as f64;
                let v = ComplexVector::new(vec![
                    Complex64::new((theta / 2.0).cos(), 0.0),
                    Complex64::from_polar((theta / 2.0).sin(), phi),
                ])
                .unwrap();
                best = best.min(f(&PureState::new(v).unwrap()));
            }
        }
        best
    }

    #[test]
    fn mub_pair_entropy_minimum() {
        let z = Rank1Povm::pauli_z();
        let x = Rank1Povm::pauli_x();
        let r = minimize_entropy_over_states(&[&z, &x], &quick(0)).unwrap();
        let oracle = bloch_grid_min(
            |s| crate::measurement::entropy_of(&z, s).unwrap() + crate::measurement::entropy_of(&x, s).unwrap(),
            1000,
        );
        assert!((oracle - 1.0).abs() < 1e-9);
        assert!((r.best_value - 1.0).abs() < 1e-9);
        let s = state_from_params(&r.best_params).unwrap();
        assert!((s.ket().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_union_entropy_minimum() {
        let m = mixed_pvm_povm(&Pvm::pauli_z(), &Pvm::pauli_x()).unwrap();
        let r = minimize_entropy_over_states(&[&m], &quick(0)).unwrap();
        assert!((r.best_value - 1.5).abs() < 1e-9);
    }

    #[test]
    fn trine_entropy_minimum_is_one_bit() {
        let t = Rank1Povm::trine();
        let r = minimize_entropy_over_states(&[&t], &OptimizerConfig::default()).unwrap();
        let oracle = bloch_grid_min(|s| crate::measurement::entropy_of(&t, s).unwrap(), 1000);
        assert!((oracle - 1.0).abs() < 1e-4);
        assert!(r.best_value <= oracle + 1e-9);
        assert!(r.best_value >= 1.0 - 1e-9);
    }

    #[test]
    fn grid_examples() {
        let c = grid_search_phase(|_| 0.25, 10).unwrap();
        assert_eq!(c.best_value, 0.25);
        let g = grid_search_phase(|t| (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t)).norm(), 1000).unwrap();
        assert_eq!(g.best_params[0], 0.0);
        assert!(g.best_value.abs() < 1e-15);
        assert!(grid_search_phase(|t| t, 1).is_err());
    }

    #[test]
    fn lse_bounds_max() {
        let v = [0.1, 0.5, 0.3];
        let s = log_sum_exp(&v, 100.0);
        assert!(s >= 0.5 && s <= 0.5 + (3f64).ln() / 100.0);
    }
}

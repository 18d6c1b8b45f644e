//! Optimizers over gate-fabric angle lists.
//!
//! Every angle enters a gate through one `Rz` of its native decomposition, so
//! along the directions `phi0` and `phi1` any expectation value is exactly
//! `a + b cos(d) + c sin(d)`. [`Method::CoordinateSinusoidal`] exploits this by
//! jumping to the exact minimum of each such slice in turn. The same structure
//! makes shift rules exact for second derivatives too, which the Newton stage
//! uses once sweeps slow down in flat valleys.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::dmera::GateFabricParams;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    CoordinateSinusoidal,
    ParameterShiftGradient,
    SimultaneousPerturbation,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "coordinate" | "coordinate-sinusoidal" => Ok(Method::CoordinateSinusoidal),
            "parameter-shift" | "gradient" => Ok(Method::ParameterShiftGradient),
            "spsa" | "simultaneous-perturbation" => Ok(Method::SimultaneousPerturbation),
            other => Err(Error::InvalidParameter(format!("unknown optimizer `{other}`"))),
        }
    }
}

/// Gain schedule for simultaneous perturbation:
/// `a_k = a / (k + 1 + big_a)^alpha`, `c_k = c / (k + 1)^gamma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpsaGains {
    pub a: f64,
    pub c: f64,
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for SpsaGains {
    fn default() -> Self {
        Self { a: 0.3, c: 0.15, big_a: 10.0, alpha: 0.602, gamma: 0.101 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub method: Method,
    /// Sweeps (coordinate), steps (gradient) or iterations (perturbation) per restart.
    pub max_iterations: usize,
    /// Minimal best-loss improvement over `patience` iterations to keep going.
    pub convergence_tolerance: f64,
    pub patience: usize,
    pub restarts: usize,
    pub seed: u64,
    pub spsa: SpsaGains,
    /// Coordinate method only: switch to shift-rule Newton steps when sweeps
    /// stop making progress.
    pub newton_polish: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::CoordinateSinusoidal,
            max_iterations: 10_000,
            convergence_tolerance: 1e-12,
            patience: 25,
            restarts: 1,
            seed: 0,
            spsa: SpsaGains::default(),
            newton_polish: true,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.convergence_tolerance > 0.0) {
            return Err(Error::InvalidParameter("convergence tolerance must be positive".into()));
        }
        if self.restarts == 0 || self.max_iterations == 0 || self.patience == 0 {
            return Err(Error::InvalidParameter("restarts, iterations and patience must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationReport {
    pub loss: f64,
    /// Best loss per restart.
    pub restart_losses: Vec<f64>,
    /// Running best loss of the winning restart, one entry per iteration.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    /// False when some restart hit the iteration budget.
    pub converged: bool,
}

/// A loss over the angles of a fixed list of gates.
pub trait Objective {
    fn num_gates(&self) -> usize;

    fn loss(&self, angles: &[GateFabricParams]) -> f64;

    /// One pass of exact coordinate minimization over `phi0`, `phi1` of every
    /// gate, in order. Returns the new loss and the number of evaluations.
    /// Overriding implementations must give the same result faster.
    fn sinusoidal_sweep(&self, angles: &mut [GateFabricParams], current: f64) -> (f64, usize) {
        let mut evals = 0;
        let mut f0 = current;
        for k in 0..angles.len() {
            for dir in [PhiDirection::Phi0, PhiDirection::Phi1] {
                let base = angles[k];
                angles[k] = dir.shift(base, FRAC_PI_2);
                let fp = self.loss(angles);
                angles[k] = dir.shift(base, -FRAC_PI_2);
                let fm = self.loss(angles);
                evals += 2;
                let s = Sinusoid::fit(f0, fp, fm);
                angles[k] = dir.shift(base, s.argmin());
                f0 = s.min_value().min(f0);
            }
        }
        let f = self.loss(angles);
        (f, evals + 1)
    }

    /// Gradient and Hessian in `(phi0, phi1)` coordinates at `angles`, where
    /// the loss is `f0`. Exact, since the loss is a first harmonic in every
    /// coordinate separately. Overriding implementations must agree with this.
    fn curvature(&self, angles: &[GateFabricParams], f0: f64) -> Curvature {
        let n = 2 * angles.len();
        let mut c = Curvature::zeros(n);
        for i in 0..n {
            let fp = self.loss(&shifted(angles, &[(i, FRAC_PI_2)]));
            let fm = self.loss(&shifted(angles, &[(i, -FRAC_PI_2)]));
            c.grad[i] = 0.5 * (fp - fm);
            c.hess[i * n + i] = 0.5 * (fp + fm) - f0;
        }
        for i in 0..n {
            for j in i + 1..n {
                let f = |si: f64, sj: f64| self.loss(&shifted(angles, &[(i, si * FRAC_PI_2), (j, sj * FRAC_PI_2)]));
                let h = 0.25 * (f(1.0, 1.0) - f(1.0, -1.0) - f(-1.0, 1.0) + f(-1.0, -1.0));
                c.hess[i * n + j] = h;
                c.hess[j * n + i] = h;
            }
        }
        c.evaluations = 2 * n * n;
        c
    }
}

/// First and second derivatives of a loss in `(phi0, phi1)` coordinates.
/// Coordinate `2 k` is `phi0` of gate `k`, `2 k + 1` its `phi1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curvature {
    pub grad: Vec<f64>,
    /// Row-major `n x n`.
    pub hess: Vec<f64>,
    pub evaluations: usize,
}

impl Curvature {
    pub fn zeros(n: usize) -> Self {
        Self { grad: vec![0.0; n], hess: vec![0.0; n * n], evaluations: 0 }
    }

    /// Symmetric second-order shift rule from `f(s_i pi/2, s_j pi/2)` for
    /// `(s_i, s_j)` in `(+,+), (+,-), (-,+), (-,-)`.
    pub fn set_mixed(&mut self, i: usize, j: usize, f: [f64; 4]) {
        let n = self.grad.len();
        let h = 0.25 * (f[0] - f[1] - f[2] + f[3]);
        self.hess[i * n + j] = h;
        self.hess[j * n + i] = h;
    }

    /// Gradient and diagonal entry from `f(pi/2)` and `f(-pi/2)`.
    pub fn set_single(&mut self, i: usize, f0: f64, fp: f64, fm: f64) {
        let n = self.grad.len();
        self.grad[i] = 0.5 * (fp - fm);
        self.hess[i * n + i] = 0.5 * (fp + fm) - f0;
    }
}

/// A coordinate along which the loss is a pure first harmonic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiDirection {
    Phi0,
    Phi1,
}

impl PhiDirection {
    /// Direction of coordinate `i` in [`Curvature`] order.
    pub fn of_coordinate(i: usize) -> Self {
        if i % 2 == 0 {
            PhiDirection::Phi0
        } else {
            PhiDirection::Phi1
        }
    }

    /// Moves the chosen `phi` by `delta`, keeping the other fixed.
    pub fn shift(self, p: GateFabricParams, delta: f64) -> GateFabricParams {
        let (phi0, phi1) = p.phis();
        match self {
            PhiDirection::Phi0 => GateFabricParams::from_phis(phi0 + delta, phi1),
            PhiDirection::Phi1 => GateFabricParams::from_phis(phi0, phi1 + delta),
        }
    }
}

fn shifted(angles: &[GateFabricParams], moves: &[(usize, f64)]) -> Vec<GateFabricParams> {
    let mut out = angles.to_vec();
    for &(i, d) in moves {
        out[i / 2] = PhiDirection::of_coordinate(i).shift(out[i / 2], d);
    }
    out
}

/// `a + b cos(d) + c sin(d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sinusoid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Sinusoid {
    /// From values at `d = 0, pi/2, -pi/2`.
    pub fn fit(f0: f64, f_plus: f64, f_minus: f64) -> Self {
        let a = 0.5 * (f_plus + f_minus);
        Self { a, b: f0 - a, c: 0.5 * (f_plus - f_minus) }
    }

    pub fn eval(&self, d: f64) -> f64 {
        self.a + self.b * d.cos() + self.c * d.sin()
    }

    pub fn argmin(&self) -> f64 {
        (-self.c).atan2(-self.b)
    }

    pub fn min_value(&self) -> f64 {
        self.a - self.b.hypot(self.c)
    }
}

fn random_angles(rng: &mut ChaCha8Rng, n: usize) -> Vec<GateFabricParams> {
    (0..n).map(|_| GateFabricParams::new(rng.random_range(-PI..PI), rng.random_range(-PI..PI))).collect()
}

struct Run {
    angles: Vec<GateFabricParams>,
    loss: f64,
    history: Vec<f64>,
    evaluations: usize,
    converged: bool,
}

fn stalled(history: &[f64], cfg: &OptimizerConfig) -> bool {
    let n = history.len();
    n > cfg.patience && history[n - 1 - cfg.patience] - history[n - 1] < cfg.convergence_tolerance
}

/// Sweeps in a row with relative progress below [`SLOW_PROGRESS`] before a Newton
/// stage. After a stage at least `patience` sweeps pass before the next one.
const SLOW_WINDOW: usize = 10;
const SLOW_PROGRESS: f64 = 1e-6;
/// Newton stages are skipped above this many angles; the Hessian costs `2 n^2` evaluations.
const NEWTON_MAX_PARAMS: usize = 96;
const NEWTON_STEPS: usize = 30;

fn run_coordinate(obj: &dyn Objective, mut angles: Vec<GateFabricParams>, cfg: &OptimizerConfig) -> Run {
    let mut loss = obj.loss(&angles);
    let mut evaluations = 1;
    let mut history = vec![loss];
    let mut converged = false;
    let polish = cfg.newton_polish && 2 * angles.len() <= NEWTON_MAX_PARAMS;
    let mut last_polish = 0;
    while history.len() <= cfg.max_iterations {
        let mut trial = angles.clone();
        let (f, e) = obj.sinusoidal_sweep(&mut trial, loss);
        evaluations += e;
        if f <= loss {
            angles = trial;
            loss = f;
        }
        history.push(loss);
        if stalled(&history, cfg) {
            converged = true;
            break;
        }
        let n = history.len();
        if polish
            && n > last_polish + SLOW_WINDOW.max(cfg.patience)
            && history[n - 1 - SLOW_WINDOW] - loss < SLOW_PROGRESS * loss.abs().max(1.0)
        {
            let budget = cfg.max_iterations + 1 - n;
            evaluations += newton_stage(obj, &mut angles, &mut loss, &mut history, budget.min(NEWTON_STEPS));
            last_polish = history.len();
        }
    }
    Run { angles, loss, history, evaluations, converged }
}


/// Damped Newton steps on `|H|` (negative curvature is flipped so saddles are
/// left rather than approached). Appends one history entry per step and
/// returns the evaluations spent.
fn newton_stage(
    obj: &dyn Objective,
    angles: &mut Vec<GateFabricParams>,
    loss: &mut f64,
    history: &mut Vec<f64>,
    max_steps: usize,
) -> usize {
    let mut evaluations = 0;
    for _ in 0..max_steps {
        let c = obj.curvature(angles, *loss);
        evaluations += c.evaluations;
        let n = c.grad.len();
        let grad = DVector::from_vec(c.grad);
        let eig = SymmetricEigen::new(DMatrix::from_vec(n, n, c.hess));
        let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
        let proj = eig.eigenvectors.transpose() * &grad;
        let mut damping = 0.0;
        let mut accepted = None;
        for _ in 0..12 {
            let coeffs = DVector::from_iterator(
                proj.len(),
                proj.iter().zip(eig.eigenvalues.iter()).map(|(g, l)| -g / (l.abs().max(1e-14 * scale) + damping)),
            );
            let step = &eig.eigenvectors * coeffs;
            let moves: Vec<(usize, f64)> = step.iter().copied().enumerate().collect();
            let trial = shifted(angles, &moves);
            let f = obj.loss(&trial);
            evaluations += 1;
            if f < *loss {
                accepted = Some((trial, f));
                break;
            }
            damping = if damping == 0.0 { 1e-8 * scale } else { damping * 10.0 };
        }
        let Some((trial, f)) = accepted else { break };
        let gain = *loss - f;
        *angles = trial;
        *loss = f;
        history.push(f);
        if gain < 1e-14 * f.abs().max(1.0) {
            break;
        }
    }
    evaluations
}

/// Exact gradient in `theta` coordinates from four shifted evaluations per gate.
fn parameter_shift_gradient(obj: &dyn Objective, angles: &mut [GateFabricParams]) -> Vec<f64> {
    let mut grad = Vec::with_capacity(2 * angles.len());
    for k in 0..angles.len() {
        let base = angles[k];
        let mut dphi = [0.0; 2];
        for (slot, dir) in [PhiDirection::Phi0, PhiDirection::Phi1].into_iter().enumerate() {
            angles[k] = dir.shift(base, FRAC_PI_2);
            let fp = obj.loss(angles);
            angles[k] = dir.shift(base, -FRAC_PI_2);
            let fm = obj.loss(angles);
            dphi[slot] = 0.5 * (fp - fm);
        }
        angles[k] = base;
        // phi0 = t1 - t0, phi1 = t0 + t1
        grad.push(dphi[1] - dphi[0]);
        grad.push(dphi[0] + dphi[1]);
    }
    grad
}

fn run_gradient(obj: &dyn Objective, mut angles: Vec<GateFabricParams>, cfg: &OptimizerConfig) -> Run {
    let mut loss = obj.loss(&angles);
    let mut evaluations = 1;
    let mut history = vec![loss];
    let mut converged = false;
    let mut step = 0.1;
    for _ in 0..cfg.max_iterations {
        let grad = parameter_shift_gradient(obj, &mut angles);
        evaluations += 4 * angles.len();
        let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
        if gnorm2 == 0.0 {
            history.push(loss);
            converged = true;
            break;
        }
        // backtracking until the Armijo condition holds
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<GateFabricParams> = angles
                .iter()
                .enumerate()
                .map(|(k, p)| GateFabricParams::new(p.theta0 - step * grad[2 * k], p.theta1 - step * grad[2 * k + 1]))
                .collect();
            let f = obj.loss(&trial);
            evaluations += 1;
            if f <= loss - 1e-4 * step * gnorm2 {
                angles = trial;
                loss = f;
                accepted = true;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        history.push(loss);
        if !accepted || stalled(&history, cfg) {
            converged = true;
            break;
        }
    }
    Run { angles, loss, history, evaluations, converged }
}

fn run_spsa(
    obj: &dyn Objective,
    mut angles: Vec<GateFabricParams>,
    cfg: &OptimizerConfig,
    rng: &mut ChaCha8Rng,
) -> Run {
    let g = cfg.spsa;
    let mut best = angles.clone();
    let mut best_loss = obj.loss(&angles);
    let mut evaluations = 1;
    let mut history = vec![best_loss];
    let mut converged = false;
    for k in 0..cfg.max_iterations {
        let ak = g.a / (k as f64 + 1.0 + g.big_a).powf(g.alpha);
        let ck = g.c / (k as f64 + 1.0).powf(g.gamma);
        let delta: Vec<[f64; 2]> = (0..angles.len())
            .map(|_| [if rng.random::<bool>() { 1.0 } else { -1.0 }, if rng.random::<bool>() { 1.0 } else { -1.0 }])
            .collect();
        let moved = |sign: f64| -> Vec<GateFabricParams> {
            angles
                .iter()
                .zip(&delta)
                .map(|(p, d)| GateFabricParams::new(p.theta0 + sign * ck * d[0], p.theta1 + sign * ck * d[1]))
                .collect()
        };
        let diff = obj.loss(&moved(1.0)) - obj.loss(&moved(-1.0));
        for (p, d) in angles.iter_mut().zip(&delta) {
            // 1 / d_i == d_i for Rademacher entries
            p.theta0 -= ak * diff / (2.0 * ck) * d[0];
            p.theta1 -= ak * diff / (2.0 * ck) * d[1];
        }
        let f = obj.loss(&angles);
        evaluations += 3;
        if f < best_loss {
            best_loss = f;
            best = angles.clone();
        }
        history.push(best_loss);
        if stalled(&history, cfg) {
            converged = true;
            break;
        }
    }
    Run { angles: best, loss: best_loss, history, evaluations, converged }
}

/// Best angles across restarts. Restart 0 starts from `initial` when given;
/// every other start is uniform in `[-pi, pi)` from the configured seed.
pub fn optimize_angles(
    obj: &dyn Objective,
    cfg: &OptimizerConfig,
    initial: Option<&[GateFabricParams]>,
) -> Result<(Vec<GateFabricParams>, OptimizationReport)> {
    cfg.validate()?;
    let n = obj.num_gates();
    if let Some(init) = initial {
        if init.len() != n {
            return Err(Error::AngleCount { expected: n, got: init.len() });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<Run> = None;
    let mut restart_losses = Vec::with_capacity(cfg.restarts);
    let mut iterations = 0;
    let mut evaluations = 0;
    let mut converged = true;
    for r in 0..cfg.restarts {
        let start = match (r, initial) {
            (0, Some(init)) => init.to_vec(),
            _ => random_angles(&mut rng, n),
        };
        let run = match cfg.method {
            Method::CoordinateSinusoidal => run_coordinate(obj, start, cfg),
            Method::ParameterShiftGradient => run_gradient(obj, start, cfg),
            Method::SimultaneousPerturbation => run_spsa(obj, start, cfg, &mut rng),
        };
        iterations += run.history.len() - 1;
        evaluations += run.evaluations;
        converged &= run.converged;
        restart_losses.push(run.loss);
        if best.as_ref().is_none_or(|b| run.loss < b.loss) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    let report = OptimizationReport {
        loss: best.loss,
        restart_losses,
        history: best.history,
        iterations,
        evaluations,
        converged,
    };
    Ok((best.angles, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `sum_k w_k (1 - cos(phi1_k - target_k)) + 0.3 (1 - cos(phi0_k))`
    struct Harmonic {
        targets: Vec<f64>,
    }

    impl Objective for Harmonic {
        fn num_gates(&self) -> usize {
            self.targets.len()
        }

        fn loss(&self, angles: &[GateFabricParams]) -> f64 {
            angles
                .iter()
                .zip(&self.targets)
                .map(|(p, t)| {
                    let (phi0, phi1) = p.phis();
                    (1.0 - (phi1 - t).cos()) + 0.3 * (1.0 - phi0.cos())
                })
                .sum()
        }
    }

    #[test]
    fn sinusoid_minimum_matches_grid_search() {
        for &(a, b, c) in &[(0.2, 1.0, -0.5), (0.0, -0.3, 0.9), (1.0, 0.0, -2.0)] {
            let s = Sinusoid::fit(a + b, a + c, a - c);
            assert!((s.a - a).abs() < 1e-15 && (s.b - b).abs() < 1e-15 && (s.c - c).abs() < 1e-15);
            let grid = (0..200_000)
                .map(|i| -PI + 2.0 * PI * i as f64 / 200_000.0)
                .min_by(|x, y| s.eval(*x).total_cmp(&s.eval(*y)))
                .unwrap();
            let want = (-c).atan2(-b);
            assert!((s.argmin() - want).abs() < 1e-15);
            assert!((s.eval(grid) - s.eval(want)).abs() < 1e-9);
            assert!((s.min_value() - s.eval(want)).abs() < 1e-12);
        }
    }

    #[test]
    fn every_method_finds_the_minimum() {
        let obj = Harmonic { targets: vec![0.4, -1.0, 2.5] };
        for method in [Method::CoordinateSinusoidal, Method::ParameterShiftGradient] {
            let cfg = OptimizerConfig { method, restarts: 2, seed: 5, ..Default::default() };
            let (_, rep) = optimize_angles(&obj, &cfg, None).unwrap();
            assert!(rep.loss < 1e-9, "{method:?} {}", rep.loss);
            assert!(rep.history.windows(2).all(|w| w[1] <= w[0]));
        }
        let cfg = OptimizerConfig {
            method: Method::SimultaneousPerturbation,
            max_iterations: 3000,
            patience: 3000,
            seed: 5,
            ..Default::default()
        };
        let (_, rep) = optimize_angles(&obj, &cfg, None).unwrap();
        assert!(rep.loss < 1e-2, "{}", rep.loss);
    }

    #[test]
    fn shift_rule_curvature_matches_finite_differences() {
        let obj = Harmonic { targets: vec![0.4, -1.0] };
        let x: Vec<GateFabricParams> = vec![GateFabricParams::new(0.2, -0.5), GateFabricParams::new(1.1, 0.3)];
        let f0 = obj.loss(&x);
        let c = obj.curvature(&x, f0);
        let h = 1e-4;
        let n = 4;
        for i in 0..n {
            let fd = (obj.loss(&shifted(&x, &[(i, h)])) - obj.loss(&shifted(&x, &[(i, -h)]))) / (2.0 * h);
            assert!((c.grad[i] - fd).abs() < 1e-7);
            for j in 0..n {
                let f = |a: f64, b: f64| obj.loss(&shifted(&x, &[(i, a), (j, b)]));
                let fd = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
                assert!((c.hess[i * n + j] - fd).abs() < 1e-5, "{i} {j}");
            }
        }
    }

    #[test]
    fn stationary_start_stays_put() {
        let obj = Harmonic { targets: vec![0.4] };
        let start = [GateFabricParams::from_phis(0.0, 0.4)];
        let cfg = OptimizerConfig::default();
        let (angles, rep) = optimize_angles(&obj, &cfg, Some(&start)).unwrap();
        assert!((angles[0].theta0 - start[0].theta0).abs() < 1e-12);
        assert!((angles[0].theta1 - start[0].theta1).abs() < 1e-12);
        assert!(rep.converged);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let obj = Harmonic { targets: vec![0.1, 0.2] };
        let cfg = OptimizerConfig { restarts: 10, seed: 99, ..Default::default() };
        assert_eq!(optimize_angles(&obj, &cfg, None).unwrap(), optimize_angles(&obj, &cfg, None).unwrap());
    }

    #[test]
    fn config_validation() {
        let obj = Harmonic { targets: vec![0.0] };
        let bad = OptimizerConfig { restarts: 0, ..Default::default() };
        assert!(optimize_angles(&obj, &bad, None).is_err());
        let bad = OptimizerConfig { convergence_tolerance: 0.0, ..Default::default() };
        assert!(optimize_angles(&obj, &bad, None).is_err());
        assert!(optimize_angles(&obj, &OptimizerConfig::default(), Some(&[])).is_err());
    }

    #[test]
    fn method_names() {
        assert_eq!("spsa".parse::<Method>().unwrap(), Method::SimultaneousPerturbation);
        assert!("newton".parse::<Method>().is_err());
    }
}

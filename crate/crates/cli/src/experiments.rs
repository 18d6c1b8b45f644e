//! The four experiment drivers. Each expands a config into independent tasks,
//! runs them on a bounded pool and returns rows sorted by key.

use std::time::Instant;

use rayon::prelude::*;
use rayon::ThreadPool;

use qdmera::dmera::calibrate::{reference_row, structural_counts};
use qdmera::dmera::{
    build_dmera, causal_cone, predicted_qubits_left, predicted_qubits_right, DmeraSpec, Layout, Side, SubsystemSpec,
};
use qdmera::lrtim::{exact_ground_state, exact_subsystem_entropy, lrtim_hamiltonian, LrtimParams};
use qdmera::noise::SampledVqse;
use qdmera::qsim::{hermitian_eigenvalues, von_neumann_entropy, MixedState, PureState};
use qdmera::variational::{
    optimize_angles, vqe_optimize, vqse_diagonalize, Checkpoint, OptimizerConfig, SpectrumEstimate, VqseCost,
};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::HarnessError;
use crate::results::{sort_rows, PartialWriter, ResultRow};

pub fn worker_pool(workers: usize) -> Result<ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))
}

/// Runs `job` over `tasks` on `pool`, streaming finished rows to `sink`.
/// Errors are reported in task order, so failures are deterministic too.
fn run_tasks<T, F>(
    pool: &ThreadPool,
    tasks: Vec<T>,
    sink: Option<&PartialWriter>,
    job: F,
) -> Result<Vec<ResultRow>, HarnessError>
where
    T: Send,
    F: Fn(T) -> Result<Vec<ResultRow>, HarnessError> + Sync,
{
    let results: Vec<Result<Vec<ResultRow>, HarnessError>> = pool.install(|| {
        tasks
            .into_par_iter()
            .map(|t| {
                let rows = job(t)?;
                if let Some(s) = sink {
                    s.append(&rows)?;
                }
                Ok(rows)
            })
            .collect()
    });
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// Trace distance between two diagonal states given by their spectra,
/// each sorted in descending order first.
pub fn spectrum_distance(a: &[f64], b: &[f64]) -> f64 {
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|x, y| y.total_cmp(x));
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    let len = a.len().max(b.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|i| (at(&a, i) - at(&b, i)).abs()).sum::<f64>()
}

fn vqse_config(cfg: &ExperimentConfig, m: usize, seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        max_iterations: cfg.vqse_max_sweeps,
        convergence_tolerance: cfg.tolerance,
        patience: cfg.patience,
        restarts: cfg.vqse_restarts_for(m),
        seed,
        ..Default::default()
    }
}

fn vqe_config(cfg: &ExperimentConfig, seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        max_iterations: cfg.vqe_max_sweeps,
        convergence_tolerance: cfg.tolerance,
        patience: cfg.patience,
        restarts: cfg.vqe_restarts,
        seed,
        ..Default::default()
    }
}

fn elapsed(cfg: &ExperimentConfig, t: Instant) -> Option<f64> {
    cfg.record_wall_time.then(|| t.elapsed().as_secs_f64())
}

fn side_index(side: Side) -> u64 {
    match side {
        Side::Left => 0,
        Side::Right => 1,
    }
}

/// Seed of a sub-task, distinct for each `(seed, parts)`.
fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(seed, |acc, &p| acc.wrapping_mul(0x100_0000_01b3).wrapping_add(p + 1))
}

/// Estimated spectrum of `rho` from a noiseless diagonalizer plus its
/// trace distance to the exact spectrum.
fn noiseless_vqse(
    rho: &MixedState,
    cfg: &ExperimentConfig,
    m: usize,
    seed: u64,
) -> Result<(SpectrumEstimate, f64), HarnessError> {
    let (_, est, _) = vqse_diagonalize(rho, &VqseCost::linear(m), &vqse_config(cfg, m, seed))?;
    let td = spectrum_distance(&est.lambdas, &hermitian_eigenvalues(rho));
    Ok((est, td))
}

/// Random DMERA states: exact entropy from the full state, estimate from VQSE
/// on the causal-cone reduced state.
pub fn run_random_dmera(
    cfg: &ExperimentConfig,
    pool: &ThreadPool,
    sink: Option<&PartialWriter>,
) -> Result<Vec<ResultRow>, HarnessError> {
    let n = cfg.num_qubits;
    let mut tasks = Vec::new();
    for i in 0..cfg.num_seeds as u64 {
        for &m in &cfg.m_values {
            for &side in &cfg.sides {
                tasks.push((cfg.seed_base + i, m, side));
            }
        }
    }
    run_tasks(pool, tasks, sink, |(seed, m, side)| {
        let t = Instant::now();
        let spec = DmeraSpec::random(n, Layout::CALIBRATED, seed)?;
        let sub = SubsystemSpec::new(side, m)?;
        let full = build_dmera(&spec).simulate();
        let exact = von_neumann_entropy(&full.partial_trace(&sub.wires(n)?)?);
        let rho = causal_cone(&spec, sub)?.reduced_state();
        let (est, td) = noiseless_vqse(&rho, cfg, m, derive_seed(seed, &[m as u64, side_index(side)]))?;
        let mut row = ResultRow::new(ExperimentKind::RandomDmera.name(), n).with_entropies(exact, est.entropy);
        row.seed = Some(seed);
        row.m = Some(m);
        row.side = Some(side);
        row.trace_distance = Some(td);
        row.wall_time_s = elapsed(cfg, t);
        Ok(vec![row])
    })
}

fn lrtim_params(cfg: &ExperimentConfig, h: f64) -> LrtimParams {
    let mut p = LrtimParams::new(cfg.num_qubits, h, cfg.alpha);
    p.j = cfg.coupling;
    p.spin = cfg.spin;
    p
}

/// VQE result for one field value.
pub struct GroundStateFit {
    pub h: f64,
    pub seed: u64,
    pub exact_energy: f64,
    pub exact_state: PureState,
    pub spec: DmeraSpec,
    pub energy: f64,
    pub vqe_state: PureState,
    pub converged: bool,
}

pub fn fit_ground_state(cfg: &ExperimentConfig, h: f64, seed: u64) -> Result<GroundStateFit, HarnessError> {
    let ham = lrtim_hamiltonian(&lrtim_params(cfg, h))?;
    let (exact_energy, exact_state) = exact_ground_state(&ham)?;
    let (spec, energy, report) = vqe_optimize(cfg.num_qubits, Layout::CALIBRATED, &ham, &vqe_config(cfg, seed))?;
    if !report.converged {
        eprintln!("warning: VQE at h = {h} hit the sweep budget in some restart");
    }
    let vqe_state = build_dmera(&spec).simulate();
    Ok(GroundStateFit { h, seed, exact_energy, exact_state, spec, energy, vqe_state, converged: report.converged })
}

/// Ground states of the long-range Ising chain by VQE, then VQSE on the
/// prepared state. Entropy errors are against the exact ground state and
/// trace distances against the exact spectrum of the prepared state.
pub fn run_lrtim_sweep(
    cfg: &ExperimentConfig,
    pool: &ThreadPool,
    sink: Option<&PartialWriter>,
    checkpoints: Option<&std::path::Path>,
) -> Result<Vec<ResultRow>, HarnessError> {
    let n = cfg.num_qubits;
    let tasks: Vec<(usize, f64)> = cfg.h_values.iter().copied().enumerate().collect();
    run_tasks(pool, tasks, sink, |(i, h)| {
        let t = Instant::now();
        let seed = cfg.seed_base + i as u64;
        let fit = fit_ground_state(cfg, h, seed)?;
        if let Some(dir) = checkpoints {
            let ck = Checkpoint { num_qubits: n, m: None, side: None, seed, angles: fit.spec.flat_angles() };
            let path = dir.join(format!("lrtim_h{i:02}.txt"));
            std::fs::write(&path, ck.to_text()).map_err(|e| HarnessError::io(&path, e))?;
        }
        let mut energy = ResultRow::new("lrtim/energy", n);
        energy.seed = Some(seed);
        energy.h = Some(h);
        energy.energy = Some(fit.energy);
        energy.exact_energy = Some(fit.exact_energy);
        energy.wall_time_s = elapsed(cfg, t);
        let mut rows = vec![energy];
        for &m in &cfg.m_values {
            for &side in &cfg.sides {
                let t = Instant::now();
                let sub = SubsystemSpec::new(side, m)?;
                let exact = exact_subsystem_entropy(&fit.exact_state, sub)?;
                let rho = causal_cone(&fit.spec, sub)?.reduced_state();
                let (est, td) = noiseless_vqse(&rho, cfg, m, derive_seed(seed, &[m as u64, side_index(side)]))?;
                let mut row = ResultRow::new("lrtim/entropy", n).with_entropies(exact, est.entropy);
                row.seed = Some(seed);
                row.m = Some(m);
                row.side = Some(side);
                row.h = Some(h);
                row.trace_distance = Some(td);
                row.wall_time_s = elapsed(cfg, t);
                rows.push(row);
            }
        }
        Ok(rows)
    })
}

/// Shot-based VQSE on noisy hardware models of the VQE ground states.
///
/// Each `(h, side, seed)` trains a diagonalizer on mitigated estimates, then
/// reads it out once more with and once without mitigation. The reference
/// entropy is that of the prepared (noiseless) VQE state, so the rows isolate
/// the effect of noise and shots. One noiseless VQSE row per `(h, side)` is
/// added for comparison.
pub fn run_noisy_lrtim(
    cfg: &ExperimentConfig,
    pool: &ThreadPool,
    sink: Option<&PartialWriter>,
) -> Result<Vec<ResultRow>, HarnessError> {
    let n = cfg.num_qubits;
    let fits: Vec<Result<GroundStateFit, HarnessError>> = pool.install(|| {
        cfg.h_values
            .par_iter()
            .enumerate()
            .map(|(i, &h)| fit_ground_state(cfg, h, cfg.seed_base + i as u64))
            .collect()
    });
    let fits = fits.into_iter().collect::<Result<Vec<_>, _>>()?;

    // (fit index, M, side, None for the noiseless row or Some(seed))
    let mut tasks = Vec::new();
    for i in 0..fits.len() {
        for &m in &cfg.m_values {
            for &side in &cfg.sides {
                tasks.push((i, m, side, None));
                for j in 0..cfg.num_seeds as u64 {
                    tasks.push((i, m, side, Some(cfg.seed_base + j)));
                }
            }
        }
    }
    run_tasks(pool, tasks, sink, |(i, m, side, seed)| {
        let t = Instant::now();
        let fit = &fits[i];
        let cone = causal_cone(&fit.spec, SubsystemSpec::new(side, m)?)?;
        let rho = cone.reduced_state();
        let exact = von_neumann_entropy(&rho);
        let exact_spectrum = hermitian_eigenvalues(&rho);
        let row = |tag: &str, s: Option<u64>, est: &SpectrumEstimate, t: Instant| {
            let mut r = ResultRow::new(&format!("noisy-lrtim/{tag}"), n).with_entropies(exact, est.entropy);
            r.seed = s;
            r.m = Some(m);
            r.side = Some(side);
            r.h = Some(fit.h);
            r.trace_distance = Some(spectrum_distance(&est.lambdas, &exact_spectrum));
            r.wall_time_s = elapsed(cfg, t);
            r
        };
        let Some(seed) = seed else {
            let (est, _) = noiseless_vqse(&rho, cfg, m, derive_seed(fit.seed, &[m as u64, side_index(side)]))?;
            return Ok(vec![row("noiseless", None, &est, t)]);
        };
        let run_seed = derive_seed(seed, &[i as u64, m as u64, side_index(side)]);
        let noisy = SampledVqse::new(&cone, &cfg.noise, VqseCost::linear(m), cfg.shots, run_seed)?;
        let opt = OptimizerConfig {
            method: cfg.noisy_optimizer,
            max_iterations: cfg.noisy_iterations,
            patience: cfg.noisy_iterations,
            convergence_tolerance: cfg.tolerance,
            restarts: 1,
            seed: run_seed,
            ..Default::default()
        };
        let (angles, _) = optimize_angles(&noisy, &opt, None)?;
        let mitigated = noisy.spectrum(&angles, true)?;
        let raw = noisy.spectrum(&angles, false)?;
        Ok(vec![row("mitigated", Some(seed), &mitigated, t), row("raw", Some(seed), &raw, t)])
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeReportRow {
    pub num_qubits: usize,
    pub side: Side,
    pub m: usize,
    pub structural_qubits: usize,
    pub predicted_qubits: usize,
    pub table_qubits: Option<usize>,
    pub structural_angles: usize,
    pub table_angles: Option<usize>,
}

impl ConeReportRow {
    /// `TABLE-MISMATCH` when the built cone disagrees with the reference
    /// table, else `PREDICTOR-MISMATCH` when only the closed form does.
    pub fn flag(&self) -> &'static str {
        match self.table_qubits {
            None => "NO-TABLE",
            Some(t) if t != self.structural_qubits => "TABLE-MISMATCH",
            Some(t) if t != self.predicted_qubits => "PREDICTOR-MISMATCH",
            Some(_) => "MATCH",
        }
    }

    pub fn angle_flag(&self) -> &'static str {
        match self.table_angles {
            None => "NO-TABLE",
            Some(t) if t == self.structural_angles => "MATCH",
            Some(_) => "TABLE-MISMATCH",
        }
    }
}

/// Cone sizes for every `(N, side, M)` of the config plus the reference
/// chain lengths 8 and 16, with `M` up to `N / 2`.
pub fn run_cone_report(cfg: &ExperimentConfig) -> Result<Vec<ConeReportRow>, HarnessError> {
    let mut sizes = vec![8, 16, cfg.num_qubits];
    sizes.sort_unstable();
    sizes.dedup();
    let mut rows = Vec::new();
    for &n in &sizes {
        for &side in &[Side::Left, Side::Right] {
            for &m in cfg.m_values.iter().filter(|&&m| m <= n / 2) {
                let (wires, angles) = structural_counts(Layout::CALIBRATED, n, side, m)?;
                let table = reference_row(n, m);
                rows.push(ConeReportRow {
                    num_qubits: n,
                    side,
                    m,
                    structural_qubits: wires,
                    predicted_qubits: match side {
                        Side::Left => predicted_qubits_left(n, m),
                        Side::Right => predicted_qubits_right(n, m),
                    },
                    table_qubits: table.map(|r| r.qubits(side)),
                    structural_angles: angles,
                    table_angles: table.map(|r| r.angles(side)),
                });
            }
        }
    }
    Ok(rows)
}

pub fn cone_report_csv(rows: &[ConeReportRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "N",
        "side",
        "M",
        "structural_qubits",
        "predicted_qubits",
        "table_qubits",
        "qubit_flag",
        "structural_angles",
        "table_angles",
        "angle_flag",
    ])
    .expect("in-memory write");
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.num_qubits.to_string(),
            r.side.label().to_string(),
            r.m.to_string(),
            r.structural_qubits.to_string(),
            r.predicted_qubits.to_string(),
            opt(r.table_qubits),
            r.flag().to_string(),
            r.structural_angles.to_string(),
            opt(r.table_angles),
            r.angle_flag().to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn cone_report_table(rows: &[ConeReportRow]) -> String {
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
    let mut out = format!(
        "{:>3} {:>4} {:>3} {:>10} {:>9} {:>6} {:<19} {:>7} {:>7} {:<15}\n",
        "N", "side", "M", "structural", "predictor", "table", "qubits", "angles", "table", "angles"
    );
    for r in rows {
        out += &format!(
            "{:>3} {:>4} {:>3} {:>10} {:>9} {:>6} {:<19} {:>7} {:>7} {:<15}\n",
            r.num_qubits,
            r.side.label(),
            r.m,
            r.structural_qubits,
            r.predicted_qubits,
            opt(r.table_qubits),
            r.flag(),
            r.structural_angles,
            opt(r.table_angles),
            r.angle_flag()
        );
    }
    out
}

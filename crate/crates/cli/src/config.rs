//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # random DMERA sweep
//! experiment = random-dmera
//! N = 16
//! M = 2, 3, 4
//! sides = L, R
//! seeds = 10
//! ```
//! Lists are comma separated. `#` starts a comment. Unknown keys are errors.

use std::collections::BTreeMap;
use std::str::FromStr;

use qdmera::dmera::Side;
use qdmera::lrtim::SpinConvention;
use qdmera::noise::NoiseModel;
use qdmera::variational::Method;

use crate::error::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    RandomDmera,
    LrtimSweep,
    NoisyLrtim,
    ConeReport,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::RandomDmera => "random-dmera",
            ExperimentKind::LrtimSweep => "lrtim",
            ExperimentKind::NoisyLrtim => "noisy-lrtim",
            ExperimentKind::ConeReport => "cone-report",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random-dmera" => Ok(ExperimentKind::RandomDmera),
            "lrtim" => Ok(ExperimentKind::LrtimSweep),
            "noisy-lrtim" => Ok(ExperimentKind::NoisyLrtim),
            "cone-report" => Ok(ExperimentKind::ConeReport),
            other => Err(HarnessError::Config(format!("unknown experiment `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub num_qubits: usize,
    pub m_values: Vec<usize>,
    pub sides: Vec<Side>,
    pub num_seeds: usize,
    pub seed_base: u64,
    pub h_values: Vec<f64>,
    pub alpha: f64,
    pub coupling: f64,
    pub spin: SpinConvention,
    pub shots: u64,
    pub noise: NoiseModel,
    pub vqe_restarts: usize,
    pub vqe_max_sweeps: usize,
    /// `None` picks [`default_vqse_restarts`] per subsystem size.
    pub vqse_restarts: Option<usize>,
    pub vqse_max_sweeps: usize,
    pub tolerance: f64,
    pub patience: usize,
    pub noisy_optimizer: Method,
    pub noisy_iterations: usize,
    pub record_wall_time: bool,
    pub plots: bool,
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}

/// Small diagonalizers have many nearly degenerate local minima but cost
/// little, so they get more restarts.
pub fn default_vqse_restarts(m: usize) -> usize {
    match m {
        0..=3 => 20,
        4 => 4,
        _ => 2,
    }
}

impl ExperimentConfig {
    pub fn vqse_restarts_for(&self, m: usize) -> usize {
        self.vqse_restarts.unwrap_or_else(|| default_vqse_restarts(m))
    }

    pub fn defaults(experiment: ExperimentKind) -> Self {
        let mut cfg = Self {
            experiment,
            num_qubits: 16,
            m_values: vec![2, 3, 4, 5, 6],
            sides: vec![Side::Left, Side::Right],
            num_seeds: 10,
            seed_base: 0,
            h_values: linspace(0.4, 2.3, 20),
            alpha: 2.2,
            coupling: 1.0,
            spin: SpinConvention::HalfSpin,
            shots: 1024,
            noise: NoiseModel::default(),
            vqe_restarts: 10,
            vqe_max_sweeps: 10_000,
            vqse_restarts: None,
            vqse_max_sweeps: 10_000,
            tolerance: 1e-12,
            patience: 25,
            noisy_optimizer: Method::SimultaneousPerturbation,
            noisy_iterations: 150,
            record_wall_time: false,
            plots: true,
        };
        match experiment {
            ExperimentKind::RandomDmera => {}
            ExperimentKind::LrtimSweep => {
                cfg.num_qubits = 8;
                cfg.m_values = vec![2, 4];
                cfg.sides = vec![Side::Left];
                cfg.num_seeds = 1;
            }
            ExperimentKind::NoisyLrtim => {
                cfg.num_qubits = 8;
                cfg.m_values = vec![2];
                cfg.num_seeds = 20;
                cfg.h_values = linspace(0.4, 2.3, 5);
            }
            ExperimentKind::ConeReport => {
                cfg.m_values = vec![1, 2, 3, 4, 5, 6];
            }
        }
        cfg
    }

    /// Parses a config file. `experiment` falls back to `default_kind` when absent.
    pub fn parse(text: &str, default_kind: ExperimentKind) -> Result<Self, HarnessError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected `key = value`", i + 1)))?;
            if entries.insert(k.trim().to_string(), (i + 1, v.trim().to_string())).is_some() {
                return Err(HarnessError::Config(format!("line {}: duplicate key `{}`", i + 1, k.trim())));
            }
        }
        let kind = match entries.remove("experiment") {
            Some((_, v)) => v.parse()?,
            None => default_kind,
        };
        let mut cfg = Self::defaults(kind);
        let (mut h_min, mut h_max, mut h_points) = (None, None, None);
        for (key, (line, value)) in &entries {
            let bad = |what: &str| HarnessError::Config(format!("line {line}: {key}: {what}"));
            let one = |v: &str| -> Result<f64, HarnessError> { v.parse().map_err(|_| bad("expected a number")) };
            let int = |v: &str| -> Result<usize, HarnessError> { v.parse().map_err(|_| bad("expected an integer")) };
            let list = |v: &str| -> Vec<String> {
                v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
            };
            let flag = |v: &str| -> Result<bool, HarnessError> {
                match v {
                    "true" | "yes" | "1" => Ok(true),
                    "false" | "no" | "0" => Ok(false),
                    _ => Err(bad("expected true or false")),
                }
            };
            match key.as_str() {
                "N" => cfg.num_qubits = int(value)?,
                "M" => cfg.m_values = list(value).iter().map(|s| int(s)).collect::<Result<_, _>>()?,
                "sides" => {
                    cfg.sides = list(value)
                        .iter()
                        .map(|s| s.parse::<Side>().map_err(|e| bad(&e.to_string())))
                        .collect::<Result<_, _>>()?
                }
                "seeds" => cfg.num_seeds = int(value)?,
                "seed_base" => cfg.seed_base = value.parse().map_err(|_| bad("expected an unsigned integer"))?,
                "h_grid" => cfg.h_values = list(value).iter().map(|s| one(s)).collect::<Result<_, _>>()?,
                "h_min" => h_min = Some(one(value)?),
                "h_max" => h_max = Some(one(value)?),
                "h_points" => h_points = Some(int(value)?),
                "alpha" => cfg.alpha = one(value)?,
                "J" => cfg.coupling = one(value)?,
                "spin" => {
                    cfg.spin = match value.as_str() {
                        "half" => SpinConvention::HalfSpin,
                        "pauli" => SpinConvention::Pauli,
                        _ => return Err(bad("expected `half` or `pauli`")),
                    }
                }
                "shots" => cfg.shots = int(value)? as u64,
                "depolarizing_p" => cfg.noise.depolarizing_p = one(value)?,
                "readout_p" => cfg.noise.readout_p = one(value)?,
                "scales" => {
                    cfg.noise.scale_factors =
                        list(value).iter().map(|s| s.parse().map_err(|_| bad("expected odd integers"))).collect::<Result<_, _>>()?
                }
                "vqe_restarts" => cfg.vqe_restarts = int(value)?,
                "vqe_max_sweeps" => cfg.vqe_max_sweeps = int(value)?,
                "vqse_restarts" => cfg.vqse_restarts = if value == "auto" { None } else { Some(int(value)?) },
                "vqse_max_sweeps" => cfg.vqse_max_sweeps = int(value)?,
                "tolerance" => cfg.tolerance = one(value)?,
                "patience" => cfg.patience = int(value)?,
                "noisy_optimizer" => cfg.noisy_optimizer = value.parse().map_err(|e: qdmera::Error| bad(&e.to_string()))?,
                "noisy_iterations" => cfg.noisy_iterations = int(value)?,
                "record_wall_time" => cfg.record_wall_time = flag(value)?,
                "plots" => cfg.plots = flag(value)?,
                _ => return Err(HarnessError::Config(format!("line {line}: unknown key `{key}`"))),
            }
        }
        if h_min.is_some() || h_max.is_some() || h_points.is_some() {
            if entries.contains_key("h_grid") {
                return Err(HarnessError::Config("give either h_grid or h_min/h_max/h_points".into()));
            }
            let lo = h_min.unwrap_or(0.4);
            let hi = h_max.unwrap_or(2.3);
            cfg.h_values = linspace(lo, hi, h_points.unwrap_or(cfg.h_values.len()));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        let n = self.num_qubits;
        if n < 2 || !n.is_power_of_two() {
            return fail(format!("N must be a power of two, got {n}"));
        }
        if self.m_values.is_empty() || self.sides.is_empty() {
            return fail("M and sides must be nonempty".into());
        }
        let needs_complement = self.experiment != ExperimentKind::ConeReport;
        for &m in &self.m_values {
            if m == 0 || m > n || (needs_complement && m >= n) {
                return fail(format!("M = {m} leaves no complement in a {n}-qubit chain"));
            }
            if needs_complement && m < 2 {
                return fail(format!("M = {m}: entropy estimation needs M >= 2"));
            }
        }
        if self.h_values.iter().any(|h| !(*h > 0.0 && *h <= 10.0)) {
            return fail("h values must lie in (0, 10]".into());
        }
        if matches!(self.experiment, ExperimentKind::LrtimSweep | ExperimentKind::NoisyLrtim) {
            if n > qdmera::lrtim::MAX_DENSE_SPINS {
                return fail(format!("N = {n} is too large for exact diagonalization"));
            }
            if self.h_values.is_empty() {
                return fail("the h grid is empty".into());
            }
        }
        if self.alpha <= 0.0 {
            return fail("alpha must be positive".into());
        }
        if self.shots == 0 || self.num_seeds == 0 {
            return fail("shots and seeds must be positive".into());
        }
        if self.vqe_restarts == 0 || self.vqse_restarts == Some(0) || self.vqe_max_sweeps == 0 || self.vqse_max_sweeps == 0 {
            return fail("restart and sweep counts must be positive".into());
        }
        if self.tolerance <= 0.0 || self.patience == 0 || self.noisy_iterations == 0 {
            return fail("tolerance, patience and noisy_iterations must be positive".into());
        }
        self.noise.validate().map_err(|e| HarnessError::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_comments() {
        let cfg = ExperimentConfig::parse(
            "experiment = random-dmera  # sweep\nN = 8\nM = 2, 3\nsides = R\nseeds = 4\n",
            ExperimentKind::LrtimSweep,
        )
        .unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::RandomDmera);
        assert_eq!(cfg.num_qubits, 8);
        assert_eq!(cfg.m_values, vec![2, 3]);
        assert_eq!(cfg.sides, vec![Side::Right]);
        assert_eq!(cfg.num_seeds, 4);
    }

    #[test]
    fn default_grid_and_overrides() {
        let cfg = ExperimentConfig::parse("", ExperimentKind::LrtimSweep).unwrap();
        assert_eq!(cfg.h_values.len(), 20);
        assert!((cfg.h_values[0] - 0.4).abs() < 1e-15 && (cfg.h_values[19] - 2.3).abs() < 1e-15);
        let cfg = ExperimentConfig::parse("h_points = 3\nh_max = 1.0", ExperimentKind::LrtimSweep).unwrap();
        assert_eq!(cfg.h_values, vec![0.4, 0.7, 1.0]);
        let cfg = ExperimentConfig::parse("scales = 1, 3, 5\nreadout_p = 0.05", ExperimentKind::NoisyLrtim).unwrap();
        assert_eq!(cfg.noise.scale_factors, vec![1, 3, 5]);
        assert_eq!(cfg.noise.readout_p, 0.05);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "M = 16",
            "N = 12",
            "bogus = 1",
            "M = two",
            "scales = 1, 2",
            "h_grid = 0.5, 11",
            "N = 8\nN = 8",
            "experiment = qft",
            "h_grid = 1.0\nh_points = 4",
            "no equals sign",
        ] {
            assert!(ExperimentConfig::parse(text, ExperimentKind::RandomDmera).is_err(), "{text}");
        }
        assert!(ExperimentConfig::parse("N = 16", ExperimentKind::LrtimSweep).is_err());
    }
}

//! Scenario files, result documents and the operations behind the CLI.
//!
//! A scenario is a JSON document:
//!
//! ```json
//! {
//!   "name": "two-side basic A",
//!   "config": {"topology": "cyclic_two_side", "K": 6, "M": 3, "d": 2, "N_t": 6, "N_r": 14},
//!   "design": {"family": "basic", "id": "A"},
//!   "snr_grid_db": [0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60],
//!   "trials": 50,
//!   "seed": 7,
//!   "output_path": "results/two_side_a.json"
//! }
//! ```
//!
//! `codebook_size` is required for option d and rejected otherwise.
//! `snr_grid_db` defaults to 0:5:60 and `slope_window_db` to `[40, 60]`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::approach::Approach;
use crate::error::{IaError, Result};
use crate::evaluation::{default_grid, run_sweep, DesignSpec, SweepResult, SweepSettings, DEFAULT_WINDOW_DB};
use crate::feasibility;
use crate::network::{NetworkConfig, Topology};
use crate::tables;

pub const SCHEMA_VERSION: &str = "cellular-ia.results.v1";

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "IA_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Basic,
    Advanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignChoice {
    pub family: Family,
    pub id: Approach,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub config: NetworkConfig,
    pub design: DesignChoice,
    #[serde(default = "default_grid")]
    pub snr_grid_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codebook_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_window_db: Option<(f64, f64)>,
    pub output_path: String,
}

/// Command-line values that replace scenario fields.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub output_path: Option<String>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| IaError::Scenario(format!("cannot parse scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| IaError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(trials) = o.trials {
            self.trials = trials;
        }
        if let Some(out) = &o.output_path {
            self.output_path = out.clone();
        }
    }

    pub fn window(&self) -> (f64, f64) {
        self.slope_window_db.unwrap_or(DEFAULT_WINDOW_DB)
    }

    pub fn design_spec(&self) -> DesignSpec {
        DesignSpec { approach: self.design.id, codebook_size: self.codebook_size }
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        let id = self.design.id;
        id.ensure_valid(self.config.topology)?;
        let problem = |msg: String| Err(IaError::Scenario(msg));
        match (self.design.family, id.is_basic()) {
            (Family::Basic, false) => return problem(format!("`{id}` is not a basic approach")),
            (Family::Advanced, true) => return problem(format!("`{id}` is not an advanced option")),
            _ => {}
        }
        match (id, self.codebook_size) {
            (Approach::OptD, None) => return problem("option d needs `codebook_size`".into()),
            (Approach::OptD, Some(0)) => return problem("`codebook_size` must be at least 1".into()),
            (Approach::OptD, Some(_)) | (_, None) => {}
            (_, Some(_)) => return problem("`codebook_size` is only used by option d".into()),
        }
        if self.trials == 0 {
            return problem("`trials` must be at least 1".into());
        }
        let grid = &self.snr_grid_db;
        if grid.is_empty() || grid.iter().any(|s| !s.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
            return problem("`snr_grid_db` must be nonempty, finite and strictly increasing".into());
        }
        let (lo, hi) = self.window();
        if grid.iter().filter(|&&s| s >= lo && s <= hi).count() < 2 {
            return problem(format!("fewer than two grid points in the slope window [{lo}, {hi}]"));
        }
        if self.output_path.trim().is_empty() {
            return problem("`output_path` is empty".into());
        }
        Ok(())
    }
}

/// Result document of one scenario run.
///
/// `wall_clock_seconds` is the only field that varies between runs with
/// the same scenario and is serialized last.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResults {
    pub schema_version: String,
    pub scenario: Scenario,
    pub snr_db: Vec<f64>,
    pub sum_rate_bits: Vec<f64>,
    pub dof_slope: f64,
    pub slope_window_db: (f64, f64),
    pub max_normalized_residual: f64,
    pub mean_normalized_residual: f64,
    pub mean_total_leakage: f64,
    pub boundary_cells: Vec<usize>,
    pub wall_clock_seconds: f64,
}

impl ScenarioResults {
    fn new(scenario: Scenario, sweep: SweepResult, seconds: f64) -> Self {
        ScenarioResults {
            schema_version: SCHEMA_VERSION.to_string(),
            snr_db: sweep.curve.points.iter().map(|p| p.snr_db).collect(),
            sum_rate_bits: sweep.curve.points.iter().map(|p| p.sum_rate).collect(),
            dof_slope: sweep.curve.dof_slope,
            slope_window_db: sweep.curve.slope_window_db,
            max_normalized_residual: sweep.max_normalized_residual,
            mean_normalized_residual: sweep.mean_normalized_residual,
            mean_total_leakage: sweep.mean_total_leakage,
            boundary_cells: sweep.boundary_cells,
            scenario,
            wall_clock_seconds: seconds,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| IaError::Io(e.to_string()))
    }
}

/// Worker count from the environment; serial when unset or malformed.
pub fn workers_from_env() -> usize {
    std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&n| n >= 1).unwrap_or(1)
}

/// Runs a validated scenario in memory.
pub fn execute(scenario: &Scenario, workers: usize) -> Result<(ScenarioResults, SweepResult)> {
    scenario.validate()?;
    let start = Instant::now();
    let settings = SweepSettings {
        snr_grid_db: scenario.snr_grid_db.clone(),
        trials: scenario.trials,
        seed: scenario.seed,
        window_db: scenario.window(),
        workers,
    };
    let sweep = run_sweep(&scenario.config, scenario.design_spec(), &settings)?;
    let results = ScenarioResults::new(scenario.clone(), sweep.clone(), start.elapsed().as_secs_f64());
    Ok((results, sweep))
}

/// Loads, runs and persists a scenario; returns the results path.
pub fn run_scenario(path: &Path, overrides: &Overrides, csv: Option<&Path>) -> Result<PathBuf> {
    let mut scenario = Scenario::load(path)?;
    scenario.apply(overrides);
    let (results, sweep) = execute(&scenario, workers_from_env())?;
    let out = PathBuf::from(&scenario.output_path);
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(&out, results.to_json()?)?;
    if let Some(csv) = csv {
        sweep.curve.write_csv(csv)?;
    }
    Ok(out)
}

/// PASS/FAIL verdict of every antenna condition of `approach`.
pub fn check_feasibility(cfg: &NetworkConfig, approach: Approach) -> String {
    feasibility::verdict(cfg, approach)
}

/// Verdict for a scenario file, with scenario-level problems reported as
/// failures.
pub fn check_scenario(path: &Path, overrides: &Overrides) -> Result<(bool, String)> {
    let mut scenario = Scenario::load(path)?;
    scenario.apply(overrides);
    let mut text = check_feasibility(&scenario.config, scenario.design.id);
    let mut ok = text.ends_with("PASS\n");
    if let Err(e) = scenario.validate() {
        if ok {
            text.truncate(text.len() - "PASS\n".len());
            text.push_str(&format!("FAIL scenario: {e}\nFAIL\n"));
        }
        ok = false;
    }
    Ok((ok, text))
}

/// Table dump for `topology` with dimensions given as `key=value` pairs.
///
/// Antenna counts that are not given default to the smallest values the
/// configuration checks accept.
pub fn print_tables(topology: Topology, dims: &[String]) -> Result<String> {
    let mut fields: BTreeMap<String, String> = BTreeMap::new();
    for item in dims {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| IaError::InvalidConfig(vec![format!("expected key=value, got `{item}`")]))?;
        fields.insert(key.trim().to_string(), value.trim().to_string());
    }
    let num = |fields: &BTreeMap<String, String>, key: &str| -> Result<Option<usize>> {
        fields
            .get(key)
            .map(|v| v.parse::<usize>())
            .transpose()
            .map_err(|_| IaError::InvalidConfig(vec![format!("`{key}` must be a nonnegative integer")]))
    };
    let k = num(&fields, "K")?.unwrap_or(match topology {
        Topology::CyclicTwoSide => 3,
        _ => 2,
    });
    let m = num(&fields, "M")?.ok_or_else(|| IaError::InvalidConfig(vec!["missing `M`".into()]))?;
    let d = num(&fields, "d")?.ok_or_else(|| IaError::InvalidConfig(vec!["missing `d`".into()]))?;
    let n_t = num(&fields, "N_t")?.unwrap_or(m * d);
    let mut cfg = match topology {
        Topology::CyclicOneSideEdge => {
            let m_edge =
                num(&fields, "M_edge")?.ok_or_else(|| IaError::InvalidConfig(vec!["missing `M_edge`".into()]))?;
            let m_star = num(&fields, "M_star")?.unwrap_or(m.saturating_sub(m_edge));
            let mut cfg = NetworkConfig::cyclic_one_side(
                k,
                m_star,
                m_edge,
                d,
                n_t,
                num(&fields, "N_r_star")?.unwrap_or(d),
                num(&fields, "N_r_edge")?.unwrap_or(d),
            );
            cfg.m = m;
            cfg
        }
        Topology::FullConnected => NetworkConfig::full_connected(k, m, d, n_t, num(&fields, "N_r")?.unwrap_or(d)),
        Topology::CyclicTwoSide => NetworkConfig::cyclic_two_side(k, m, d, n_t, num(&fields, "N_r")?.unwrap_or(d)),
    };
    cfg.topology = topology;
    let known = ["K", "M", "M_star", "M_edge", "d", "N_t", "N_r", "N_r_star", "N_r_edge"];
    if let Some(bad) = fields.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(IaError::InvalidConfig(vec![format!("unknown dimension `{bad}`")]));
    }
    tables::print_tables(&cfg)
}

//! Subspace metrics, residual-interference reports, achievable rates and
//! degrees-of-freedom estimates.

use std::path::Path;

use nalgebra::Cholesky;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approach::Approach;
use crate::coders::CoderSet;
use crate::designs::{self, generate_codebooks};
use crate::error::{IaError, Result};
use crate::feasibility;
use crate::linalg::{c, frobenius_sq, hermitian_eigen, orthonormal_basis, singular_values, ComplexMatrix};
use crate::network::{generate_channels, ChannelSet, NetworkConfig};
use crate::random::derive_seed;

/// Floor for the desired power in the normalized residual.
pub const POWER_FLOOR: f64 = 1e-30;

pub const DEFAULT_WINDOW_DB: (f64, f64) = (40.0, 60.0);

fn same_rows(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<()> {
    if p.nrows() != q.nrows() {
        return Err(IaError::DimensionMismatch(format!(
            "row counts differ: {} vs {}",
            p.nrows(),
            q.nrows()
        )));
    }
    Ok(())
}

/// Squared chordal distance between the column spaces of `p` and `q`.
///
/// Uses the smaller of the two subspace dimensions as the reference width,
/// so the value lies in `[0, min(dim p, dim q)]`.
pub fn chordal_distance_sq(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<f64> {
    same_rows(p, q)?;
    let bp = orthonormal_basis(p)?;
    let bq = orthonormal_basis(q)?;
    let width = bp.ncols().min(bq.ncols()) as f64;
    Ok((width - frobenius_sq(&(bp.adjoint() * bq))).max(0.0))
}

/// Interference power `‖p† q‖²_F` left after filtering `q` with `p`.
pub fn interference_leakage(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<f64> {
    same_rows(p, q)?;
    Ok(frobenius_sq(&(p.adjoint() * q)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserLeakage {
    pub cell: usize,
    pub user: usize,
    pub desired_min_singular: f64,
    pub desired_power: f64,
    pub iui_power: f64,
    pub ici_power: f64,
    pub normalized_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakageReport {
    pub per_user: Vec<UserLeakage>,
}

impl LeakageReport {
    pub fn max_residual(&self) -> f64 {
        self.per_user.iter().map(|u| u.normalized_residual).fold(0.0, f64::max)
    }

    pub fn mean_residual(&self) -> f64 {
        let n = self.per_user.len().max(1) as f64;
        self.per_user.iter().map(|u| u.normalized_residual).sum::<f64>() / n
    }

    /// Largest normalized residual among users outside `cells`.
    pub fn max_residual_excluding(&self, cells: &[usize]) -> f64 {
        self.per_user
            .iter()
            .filter(|u| !cells.contains(&u.cell))
            .map(|u| u.normalized_residual)
            .fold(0.0, f64::max)
    }

    pub fn min_desired_singular(&self) -> f64 {
        self.per_user.iter().map(|u| u.desired_min_singular).fold(f64::INFINITY, f64::min)
    }

    /// Total residual interference power over all users.
    pub fn total_leakage(&self) -> f64 {
        self.per_user.iter().map(|u| u.iui_power + u.ici_power).sum()
    }
}

fn check_shapes(ch: &ChannelSet, coders: &CoderSet) -> Result<()> {
    let cfg = &ch.config;
    for (k, m) in cfg.users() {
        let v = coders.precoders.get(&(k, m));
        let u = coders.receive_filters.get(&(k, m));
        match (v, u) {
            (Some(v), Some(u)) if v.shape() == (cfg.n_t, cfg.d) && u.shape() == (cfg.rx_antennas(m), cfg.d) => {}
            _ => {
                return Err(IaError::DimensionMismatch(format!(
                    "coders of user ({k}, {m}) missing or of the wrong shape"
                )))
            }
        }
    }
    Ok(())
}

/// Desired-link conditioning and residual interference of every user, over
/// the links present in the topology only.
pub fn leakage_report(ch: &ChannelSet, coders: &CoderSet) -> Result<LeakageReport> {
    check_shapes(ch, coders)?;
    let cfg = &ch.config;
    let mut per_user = Vec::with_capacity(cfg.k * cfg.m);
    for (k, m) in cfg.users() {
        let uh = coders.u(k, m).adjoint();
        let filtered_own = &uh * ch.h(k, k, m);
        let desired = &filtered_own * coders.v(k, m);
        let desired_min_singular = singular_values(&desired).last().copied().unwrap_or(0.0);
        let desired_power = frobenius_sq(&desired);
        let iui_power: f64 =
            (0..cfg.m).filter(|&n| n != m).map(|n| frobenius_sq(&(&filtered_own * coders.v(k, n)))).sum();
        let mut ici_power = 0.0;
        for j in cfg.interferers(k, m) {
            let filtered = &uh * ch.h(j, k, m);
            ici_power += (0..cfg.m).map(|n| frobenius_sq(&(&filtered * coders.v(j, n)))).sum::<f64>();
        }
        per_user.push(UserLeakage {
            cell: k,
            user: m,
            desired_min_singular,
            desired_power,
            iui_power,
            ici_power,
            normalized_residual: (iui_power + ici_power) / desired_power.max(POWER_FLOOR),
        });
    }
    Ok(LeakageReport { per_user })
}

fn log2_det_hermitian_pd(a: ComplexMatrix) -> Result<f64> {
    match Cholesky::new(a.clone()) {
        Some(chol) => {
            let l = chol.l();
            Ok(2.0 * (0..l.nrows()).map(|i| l[(i, i)].norm().log2()).sum::<f64>())
        }
        None => {
            let (values, _) = hermitian_eigen(&a)?;
            Ok(values.iter().map(|v| v.max(f64::MIN_POSITIVE).log2()).sum())
        }
    }
}

/// Sum over users of log2 det(I + S (J + I)^-1), with the BS power split
/// evenly over its Md streams and unit noise after orthonormal filtering.
pub fn sum_rate(ch: &ChannelSet, coders: &CoderSet, snr_db: f64) -> Result<f64> {
    Ok(sum_rates(ch, coders, &[snr_db])?[0])
}

/// [`sum_rate`] at every SNR of `snr_db`, sharing the filtered channels.
pub fn sum_rates(ch: &ChannelSet, coders: &CoderSet, snr_db: &[f64]) -> Result<Vec<f64>> {
    check_shapes(ch, coders)?;
    let cfg = &ch.config;
    let d = cfg.d;
    let per_stream: Vec<f64> =
        snr_db.iter().map(|s| 10f64.powf(s / 10.0) / cfg.streams_per_cell() as f64).collect();
    let mut totals = vec![0.0; snr_db.len()];
    for (k, m) in cfg.users() {
        let uh = coders.u(k, m).adjoint();
        let f = &uh * ch.h(k, k, m) * coders.v(k, m);
        let signal = &f * f.adjoint();
        let mut interference = ComplexMatrix::zeros(d, d);
        let mut sources = vec![k];
        sources.extend(cfg.interferers(k, m));
        for j in sources {
            let filtered = &uh * ch.h(j, k, m);
            for n in 0..cfg.m {
                if j == k && n == m {
                    continue;
                }
                let g = &filtered * coders.v(j, n);
                interference += &g * g.adjoint();
            }
        }
        let eye = ComplexMatrix::identity(d, d);
        for (i, &a) in per_stream.iter().enumerate() {
            let noise_plus = &eye + &interference * c(a, 0.0);
            let total = &noise_plus + &signal * c(a, 0.0);
            let rate = log2_det_hermitian_pd(total)? - log2_det_hermitian_pd(noise_plus)?;
            totals[i] += rate.max(0.0);
        }
    }
    Ok(totals)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub snr_db: f64,
    pub sum_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCurve {
    pub points: Vec<RatePoint>,
    pub dof_slope: f64,
    pub slope_window_db: (f64, f64),
}

impl RateCurve {
    /// Builds a curve and fits its slope over `window_db`.
    pub fn new(points: Vec<RatePoint>, window_db: (f64, f64)) -> Result<Self> {
        let mut curve = RateCurve { points, dof_slope: 0.0, slope_window_db: window_db };
        curve.dof_slope = dof_slope(&curve, window_db)?;
        Ok(curve)
    }

    pub fn rate_at(&self, snr_db: f64) -> Option<f64> {
        self.points.iter().find(|p| (p.snr_db - snr_db).abs() < 1e-9).map(|p| p.sum_rate)
    }

    /// CSV with header `snr_db,sum_rate_bits`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| IaError::Io(e.to_string());
        w.write_record(["snr_db", "sum_rate_bits"]).map_err(io)?;
        for p in &self.points {
            w.write_record([p.snr_db.to_string(), p.sum_rate.to_string()]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| IaError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| IaError::Io(e.to_string()))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?)?;
        Ok(())
    }
}

/// Least-squares slope of sum rate against log2(SNR) over `window_db`.
pub fn dof_slope(curve: &RateCurve, window_db: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window_db;
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.snr_db >= lo - 1e-9 && p.snr_db <= hi + 1e-9)
        .map(|p| (p.snr_db / 10.0 * 10f64.log2(), p.sum_rate))
        .collect();
    if pts.len() < 2 {
        return Err(IaError::InsufficientPoints(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Which construction a sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignSpec {
    pub approach: Approach,
    /// Candidates per cell; option d only.
    pub codebook_size: Option<usize>,
}

impl DesignSpec {
    pub fn new(approach: Approach) -> Self {
        DesignSpec { approach, codebook_size: None }
    }

    pub fn with_codebook(approach: Approach, size: usize) -> Self {
        DesignSpec { approach, codebook_size: Some(size) }
    }
}

/// Channels and coders of one trial, as a sweep draws them.
pub struct TrialInstance {
    pub channels: ChannelSet,
    pub coders: CoderSet,
    pub boundary_cells: Vec<usize>,
}

/// Reproduces trial `trial` of a sweep with base seed `seed`.
pub fn trial_instance(cfg: &NetworkConfig, spec: DesignSpec, seed: u64, trial: usize) -> Result<TrialInstance> {
    let channels = generate_channels(cfg, derive_seed(seed, trial, 0))?;
    let books = match (spec.approach, spec.codebook_size) {
        (Approach::OptD, Some(size)) => Some(generate_codebooks(cfg, size, derive_seed(seed, trial, 2))?),
        (Approach::OptD, None) => return Err(IaError::MissingCodebook),
        _ => None,
    };
    let (coders, report) = designs::design(&channels, spec.approach, derive_seed(seed, trial, 1), books.as_deref())?;
    let boundary_cells = report.map(|r| r.boundary_cells).unwrap_or_default();
    Ok(TrialInstance { channels, coders, boundary_cells })
}

struct TrialOutcome {
    rates: Vec<f64>,
    max_residual: f64,
    mean_residual: f64,
    leakage: f64,
    boundary_cells: Vec<usize>,
}

fn run_trial(cfg: &NetworkConfig, spec: DesignSpec, grid: &[f64], seed: u64, trial: usize) -> Result<TrialOutcome> {
    let inst = trial_instance(cfg, spec, seed, trial)?;
    let report = leakage_report(&inst.channels, &inst.coders)?;
    Ok(TrialOutcome {
        rates: sum_rates(&inst.channels, &inst.coders, grid)?,
        max_residual: report.max_residual(),
        mean_residual: report.mean_residual(),
        leakage: report.total_leakage(),
        boundary_cells: inst.boundary_cells,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub curve: RateCurve,
    pub max_normalized_residual: f64,
    pub mean_normalized_residual: f64,
    /// Mean over trials of the total residual interference power.
    pub mean_total_leakage: f64,
    pub boundary_cells: Vec<usize>,
}

/// Options of a sweep beyond the configuration and design.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub snr_grid_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub window_db: (f64, f64),
    /// Worker threads; 1 runs serially.
    pub workers: usize,
}

impl SweepSettings {
    pub fn new(snr_grid_db: Vec<f64>, trials: usize, seed: u64) -> Self {
        SweepSettings { snr_grid_db, trials, seed, window_db: DEFAULT_WINDOW_DB, workers: 1 }
    }
}

/// The 0:5:60 dB grid.
pub fn default_grid() -> Vec<f64> {
    (0..=12).map(|i| 5.0 * i as f64).collect()
}

/// Trial-averaged rates and residual statistics.
///
/// Trials run in parallel when `workers > 1`; results are combined in trial
/// order, so the output does not depend on the worker count.
pub fn run_sweep(cfg: &NetworkConfig, spec: DesignSpec, settings: &SweepSettings) -> Result<SweepResult> {
    cfg.validate()?;
    if settings.trials == 0 {
        return Err(IaError::Scenario("trials must be at least 1".into()));
    }
    let grid = &settings.snr_grid_db;
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) || grid.iter().any(|s| !s.is_finite()) {
        return Err(IaError::Scenario("SNR grid must be nonempty, finite and strictly increasing".into()));
    }
    spec.approach.ensure_valid(cfg.topology)?;
    feasibility::require(cfg, spec.approach)?;

    let run = |t: usize| {
        run_trial(cfg, spec, grid, settings.seed, t)
            .map_err(|e| IaError::TrialFailed { trial: t, source: Box::new(e) })
    };
    let outcomes: Vec<Result<TrialOutcome>> = if settings.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(settings.workers)
            .build()
            .map_err(|e| IaError::Io(e.to_string()))?;
        pool.install(|| (0..settings.trials).into_par_iter().map(run).collect())
    } else {
        (0..settings.trials).map(run).collect()
    };
    let outcomes: Vec<TrialOutcome> = outcomes.into_iter().collect::<Result<_>>()?;

    let n = settings.trials as f64;
    let mut sums = vec![0.0; grid.len()];
    let (mut max_res, mut mean_res, mut leak) = (0.0f64, 0.0, 0.0);
    for o in &outcomes {
        for (s, r) in sums.iter_mut().zip(&o.rates) {
            *s += r;
        }
        max_res = max_res.max(o.max_residual);
        mean_res += o.mean_residual;
        leak += o.leakage;
    }
    let points = grid.iter().zip(&sums).map(|(&snr_db, &s)| RatePoint { snr_db, sum_rate: s / n }).collect();
    Ok(SweepResult {
        curve: RateCurve::new(points, settings.window_db)?,
        max_normalized_residual: max_res,
        mean_normalized_residual: mean_res / n,
        mean_total_leakage: leak / n,
        boundary_cells: outcomes[0].boundary_cells.clone(),
    })
}

/// Trial-averaged rate curve with its slope over the default window.
pub fn rate_sweep(
    cfg: &NetworkConfig,
    spec: DesignSpec,
    snr_grid_db: &[f64],
    trials: usize,
    seed: u64,
) -> Result<RateCurve> {
    Ok(run_sweep(cfg, spec, &SweepSettings::new(snr_grid_db.to_vec(), trials, seed))?.curve)
}

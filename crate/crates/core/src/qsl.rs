//! The entropy bound chain over sampled trajectories: weight function, rate
//! bounds, integrated bound, relative error, and the QSL time.

use thiserror::Error;

use crate::entropy::{
    spectrum_alpha_purity, spectrum_unified_entropy, EntropyBranch, EntropyError, EntropyParams,
};
use crate::linalg::{DensityMatrix, LinalgError};

/// Floor on kappa_min. Below it the weight function is declared divergent and
/// the bound is reported as loose rather than as a huge float; the bound is
/// trivial in that regime anyway.
pub const KAPPA_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QslError {
    #[error("domain error: {reason}")]
    DomainError { reason: String },
    #[error(
        "trajectory state is singular (kappa_min = {kappa_min:.3e} below the {floor:.0e} floor)"
    )]
    SingularState { kappa_min: f64, floor: f64 },
    #[error("empty trajectory")]
    EmptyTrajectory,
    #[error("integrated bound is zero; relative error and QSL time are undefined")]
    ZeroDenominator,
    #[error("empty input series")]
    EmptyInput,
    #[error("invalid trajectory: {reason}")]
    InvalidTrajectory { reason: String },
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Time grid, sampled states, and the trace speed `||d rho/dt||_1` at each
/// sample. Time units are 1/energy (hbar = 1).
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    speeds: Vec<f64>,
}

impl Trajectory {
    pub fn new(
        times: Vec<f64>,
        states: Vec<DensityMatrix>,
        speeds: Vec<f64>,
    ) -> Result<Self, QslError> {
        if times.is_empty() {
            return Err(QslError::EmptyTrajectory);
        }
        if times.len() != states.len() || times.len() != speeds.len() {
            return Err(QslError::InvalidTrajectory {
                reason: format!(
                    "length mismatch: {} times, {} states, {} speeds",
                    times.len(),
                    states.len(),
                    speeds.len()
                ),
            });
        }
        if times[0] != 0.0 {
            return Err(QslError::InvalidTrajectory {
                reason: format!("grid must start at 0, got {}", times[0]),
            });
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(QslError::InvalidTrajectory {
                reason: "grid must be strictly increasing".into(),
            });
        }
        if speeds.iter().any(|&s| !s.is_finite() || s < 0.0) {
            return Err(QslError::InvalidTrajectory {
                reason: "speeds must be finite and nonnegative".into(),
            });
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(QslError::InvalidTrajectory {
                reason: "states must share one dimension".into(),
            });
        }
        Ok(Self {
            times,
            states,
            speeds,
        })
    }

    /// Builds the trajectory with finite-difference speeds: central stencils
    /// in the interior, one-sided at the endpoints.
    pub fn from_states(times: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self, QslError> {
        if times.is_empty() || states.is_empty() {
            return Err(QslError::EmptyTrajectory);
        }
        if times.len() != states.len() {
            return Err(QslError::InvalidTrajectory {
                reason: format!("{} times vs {} states", times.len(), states.len()),
            });
        }
        let n = times.len();
        let mut speeds = vec![0.0; n];
        if n >= 2 {
            for (k, speed) in speeds.iter_mut().enumerate() {
                let (lo, hi) = if k == 0 {
                    (0, 1)
                } else if k == n - 1 {
                    (n - 2, n - 1)
                } else {
                    (k - 1, k + 1)
                };
                let diff = states[hi].matrix() - states[lo].matrix();
                let norm = diff
                    .trace_norm_hermitian()
                    .expect("state difference is Hermitian");
                *speed = norm / (times[hi] - times[lo]);
            }
        }
        Self::new(times, states, speeds)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Spectrum of every sampled state, ascending per sample.
    pub fn spectra(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(|s| s.eigenvalues()).collect()
    }

    /// kappa_min of every sampled state.
    pub fn kappa_series(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.kappa_min()).collect()
    }
}

/// Weight function `h_alpha[x] = [alpha/(1-alpha)] (1 - alpha + x) x^{alpha-2}`
/// for alpha in (0,1) and x > 0. Diverges as x -> 0+.
pub fn weight_h(alpha: f64, x: f64) -> Result<f64, QslError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(QslError::DomainError {
            reason: format!("weight function needs alpha in (0,1), got {alpha}"),
        });
    }
    if !x.is_finite() || x <= 0.0 {
        return Err(QslError::DomainError {
            reason: format!("weight function needs x > 0, got {x}"),
        });
    }
    Ok(alpha / (1.0 - alpha) * (1.0 - alpha + x) * x.powf(alpha - 2.0))
}

/// Result of one bound evaluation over a full trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `|E(rho_tau) - E(rho_0)|`.
    pub lhs: f64,
    /// Integrated upper bound.
    pub rhs: f64,
    /// Relative error `1 - lhs/rhs`.
    pub delta: f64,
    /// QSL time; satisfies `tau_qsl = tau (1 - delta)`.
    pub tau_qsl: f64,
    /// True when kappa_min dipped below [`KAPPA_FLOOR`] somewhere along the
    /// integration; the reported values then use the floor-clamped weight and
    /// should be treated as loose/undefined.
    pub loose: bool,
    /// True when mu sits on or outside the open derivation range (0,1), e.g.
    /// the Renyi (mu = 0) and Tsallis (mu = 1) boundary members.
    pub mu_boundary: bool,
}

/// Per-prefix bound data for a fixed `(alpha, mu)`: everything needed to
/// report `delta` and the QSL time at every `tau = t_k`.
#[derive(Debug, Clone)]
pub struct PrefixSeries {
    pub times: Vec<f64>,
    /// `|E(rho_{t_k}) - E(rho_0)|`.
    pub lhs: Vec<f64>,
    /// Cumulative trapezoid of the weighted integrand up to `t_k`.
    pub rhs: Vec<f64>,
    /// The integrand `h_alpha[kappa] * weight` at each sample, for callers
    /// that estimate discretization error by re-integrating coarser grids.
    pub integrand: Vec<f64>,
    /// Floor breach anywhere in `[0, t_k]`.
    pub loose: Vec<bool>,
    pub mu_boundary: bool,
}

impl PrefixSeries {
    /// `delta(t_k)`, undefined (None) while the denominator is still zero.
    pub fn delta(&self, k: usize) -> Option<f64> {
        if self.rhs[k] > 0.0 {
            Some(1.0 - self.lhs[k] / self.rhs[k])
        } else {
            None
        }
    }

    /// QSL time for the prefix `[0, t_k]`; zero at `k = 0`.
    pub fn tau_qsl(&self, k: usize) -> f64 {
        if self.rhs[k] > 0.0 {
            self.times[k] * self.lhs[k] / self.rhs[k]
        } else {
            0.0
        }
    }

    pub fn delta_profile(&self) -> Vec<Option<f64>> {
        (0..self.times.len()).map(|k| self.delta(k)).collect()
    }

    /// Full-trajectory report.
    pub fn report(&self) -> Result<BoundReport, QslError> {
        let n = self.times.len() - 1;
        let delta = self.delta(n).ok_or(QslError::ZeroDenominator)?;
        Ok(BoundReport {
            lhs: self.lhs[n],
            rhs: self.rhs[n],
            delta,
            tau_qsl: self.tau_qsl(n),
            loose: self.loose[n],
            mu_boundary: self.mu_boundary,
        })
    }
}

fn check_bound_params(params: &EntropyParams) -> Result<(), QslError> {
    if params.branch() == EntropyBranch::VonNeumannLimit {
        return Err(QslError::DomainError {
            reason: "the weight function diverges in the alpha -> 1 limit".into(),
        });
    }
    if !(params.alpha() > 0.0 && params.alpha() < 1.0) {
        return Err(QslError::DomainError {
            reason: format!("bound chain needs alpha in (0,1), got {}", params.alpha()),
        });
    }
    Ok(())
}

fn is_mu_boundary(params: &EntropyParams) -> bool {
    match params.branch() {
        EntropyBranch::Generic => !(params.mu() > 0.0 && params.mu() < 1.0),
        _ => true,
    }
}

/// Core engine: prefix series for the bound with integrand
/// `h_alpha[kappa_min(rho_t)] * weight(t)`, from precomputed spectra. The
/// flavor of the bound is entirely in `weights`: trajectory speeds give the
/// generic bound, channel norm sums give the Kraus version, a constant gives
/// the non-Hermitian and many-body versions.
pub fn prefix_series_from_spectra(
    times: &[f64],
    spectra: &[Vec<f64>],
    weights: &[f64],
    params: &EntropyParams,
) -> Result<PrefixSeries, QslError> {
    check_bound_params(params)?;
    if times.is_empty() {
        return Err(QslError::EmptyTrajectory);
    }
    if times.len() != spectra.len() || times.len() != weights.len() {
        return Err(QslError::InvalidTrajectory {
            reason: "times, spectra and weights must have matching lengths".into(),
        });
    }
    let alpha = params.alpha();
    let n = times.len();

    let e0 = spectrum_unified_entropy(&spectra[0], params);
    let mut lhs = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    let mut loose = Vec::with_capacity(n);
    let mut integrand = Vec::with_capacity(n);
    let mut breached = false;
    for k in 0..n {
        let kappa = spectra[k][0].max(0.0);
        if kappa < KAPPA_FLOOR {
            breached = true;
        }
        let h = weight_h(alpha, kappa.max(KAPPA_FLOOR))?;
        integrand.push(h * weights[k]);
        lhs.push((spectrum_unified_entropy(&spectra[k], params) - e0).abs());
        loose.push(breached);
        rhs.push(if k == 0 {
            0.0
        } else {
            rhs[k - 1] + 0.5 * (times[k] - times[k - 1]) * (integrand[k - 1] + integrand[k])
        });
    }
    Ok(PrefixSeries {
        times: times.to_vec(),
        lhs,
        rhs,
        integrand,
        loose,
        mu_boundary: is_mu_boundary(params),
    })
}

/// Prefix series for a trajectory with the generic (speed-weighted) bound.
pub fn prefix_series(traj: &Trajectory, params: &EntropyParams) -> Result<PrefixSeries, QslError> {
    prefix_series_from_spectra(traj.times(), &traj.spectra(), traj.speeds(), params)
}

/// Integrated upper bound on `|E(rho_tau) - E(rho_0)|` by composite trapezoid
/// on the caller's grid. Strict: errors if any state dips below the floor.
pub fn integrated_bound(traj: &Trajectory, params: &EntropyParams) -> Result<f64, QslError> {
    let series = prefix_series(traj, params)?;
    if *series.loose.last().unwrap() {
        let worst = traj
            .kappa_series()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        return Err(QslError::SingularState {
            kappa_min: worst,
            floor: KAPPA_FLOOR,
        });
    }
    Ok(*series.rhs.last().unwrap())
}

/// Relative error `delta = 1 - lhs/rhs` for the full trajectory, plus the
/// per-prefix profile (None where the denominator is still zero).
pub fn relative_error(
    traj: &Trajectory,
    params: &EntropyParams,
) -> Result<(f64, Vec<Option<f64>>), QslError> {
    let series = prefix_series(traj, params)?;
    let n = traj.len() - 1;
    let delta = series.delta(n).ok_or(QslError::ZeroDenominator)?;
    Ok((delta, series.delta_profile()))
}

/// QSL time for the full trajectory; equals `tau (1 - delta)`.
pub fn qsl_time(traj: &Trajectory, params: &EntropyParams) -> Result<f64, QslError> {
    let series = prefix_series(traj, params)?;
    let n = traj.len() - 1;
    if series.rhs[n] <= 0.0 {
        return Err(QslError::ZeroDenominator);
    }
    Ok(series.tau_qsl(n))
}

/// Full bound report for a trajectory under the generic bound.
pub fn bound_report(traj: &Trajectory, params: &EntropyParams) -> Result<BoundReport, QslError> {
    prefix_series(traj, params)?.report()
}

/// Outcome of the sample-wise purity rate check.
#[derive(Debug, Clone)]
pub struct RateBoundCheck {
    pub checked: usize,
    pub violations: usize,
    pub worst_margin: f64,
}

/// Checks `|d f_alpha/dt| <= (kappa + 1 - alpha) kappa^{alpha-2} ||d rho/dt||_1`
/// sample-wise, differentiating `f_alpha` by central differences on the grid.
/// The slack is 1e-6 plus a third-difference estimate of the discretization
/// error; only interior samples with a full stencil are checked.
pub fn purity_rate_bound_check(traj: &Trajectory, alpha: f64) -> Result<RateBoundCheck, QslError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(QslError::DomainError {
            reason: format!("rate bound needs alpha in (0,1), got {alpha}"),
        });
    }
    let spectra = traj.spectra();
    let kappas: Vec<f64> = spectra.iter().map(|s| s[0].max(0.0)).collect();
    let smallest = kappas.iter().cloned().fold(f64::INFINITY, f64::min);
    if smallest < KAPPA_FLOOR {
        return Err(QslError::SingularState {
            kappa_min: smallest,
            floor: KAPPA_FLOOR,
        });
    }
    let f: Vec<f64> = spectra
        .iter()
        .map(|s| spectrum_alpha_purity(s, alpha))
        .collect();
    let times = traj.times();
    let n = times.len();
    let mut checked = 0;
    let mut violations = 0;
    let mut worst_margin = f64::INFINITY;
    if n >= 5 {
        for k in 2..n - 2 {
            let dt = times[k + 1] - times[k - 1];
            let dfdt = (f[k + 1] - f[k - 1]) / dt;
            let h = 0.5 * dt;
            // central-difference error ~ h^2 |f'''| / 6
            let fppp = (f[k + 2] - 2.0 * f[k + 1] + 2.0 * f[k - 1] - f[k - 2]) / (2.0 * h * h * h);
            let bound = (kappas[k] + 1.0 - alpha) * kappas[k].powf(alpha - 2.0) * traj.speeds()[k];
            let slack = 1e-6 * (1.0 + bound.abs()) + h * h * fppp.abs() / 6.0;
            let margin = bound + slack - dfdt.abs();
            checked += 1;
            if margin < 0.0 {
                violations += 1;
            }
            worst_margin = worst_margin.min(margin);
        }
    }
    Ok(RateBoundCheck {
        checked,
        violations,
        worst_margin: if checked == 0 { 0.0 } else { worst_margin },
    })
}

/// Min-max normalization `(x - min)/(max - min)` over the finite entries.
/// A constant series maps to all zeros; non-finite entries pass through.
pub fn normalize_series(xs: &[f64]) -> Result<Vec<f64>, QslError> {
    let finite: Vec<f64> = xs.iter().cloned().filter(|x| x.is_finite()).collect();
    if finite.is_empty() {
        return Err(QslError::EmptyInput);
    }
    let min = finite.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    Ok(xs
        .iter()
        .map(|&x| {
            if !x.is_finite() {
                x
            } else if range == 0.0 {
                0.0
            } else {
                (x - min) / range
            }
        })
        .collect())
}

/// Entropy along a trajectory from precomputed spectra.
pub fn entropy_series(spectra: &[Vec<f64>], params: &EntropyParams) -> Vec<f64> {
    spectra
        .iter()
        .map(|s| spectrum_unified_entropy(s, params))
        .collect()
}

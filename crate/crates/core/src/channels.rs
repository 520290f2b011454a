//! CPTP Kraus-channel evolution, the channel speed bound and QSL, and the
//! amplitude-damping closed forms.

use thiserror::Error;

use crate::entropy::{EntropyError, EntropyParams};
use crate::linalg::{ComplexMatrix, DensityMatrix, LinalgError, C64};
use crate::qsl::{self, BoundReport, PrefixSeries, QslError, Trajectory, KAPPA_FLOOR};

/// Completeness tolerance on `sum K^+ K = I` at sampled times.
pub const TOL_COMPLETENESS: f64 = 1e-8;
/// Tolerance on trace preservation along channel trajectories.
pub const TOL_TRACE_PRESERVE: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ChannelError {
    #[error("Kraus completeness violated (deviation {deviation:.3e} at t = {t})")]
    CompletenessViolation { deviation: f64, t: f64 },
    #[error("dimension mismatch ({expected} expected, {found} found)")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Kraus derivative unavailable at t = {t}")]
    DerivativeUnavailable { t: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Qsl(#[from] QslError),
}

/// Time-parametrized Kraus family `{K_l(t)}` with derivative suppliers.
///
/// `kraus_dot_at` defaults to central differences with step `1e-6 max(1, t)`
/// (forward at `t = 0` since channels need not extend to negative times);
/// `speed_terms` defaults to the literal products `K_l rho K_l_dot^+` and is
/// the hook for families whose derivative is singular while the product is
/// finite, like amplitude damping at `t = 0`.
pub trait KrausChannel: Sync {
    fn dim(&self) -> usize;

    fn kraus_at(&self, t: f64) -> Vec<ComplexMatrix>;

    fn kraus_dot_at(&self, t: f64) -> Result<Vec<ComplexMatrix>, ChannelError> {
        let step = 1e-6 * t.abs().max(1.0);
        let (lo, hi, dt) = if t - step < 0.0 {
            (t, t + step, step)
        } else {
            (t - step, t + step, 2.0 * step)
        };
        let below = self.kraus_at(lo);
        let above = self.kraus_at(hi);
        if below.len() != above.len() {
            return Err(ChannelError::DerivativeUnavailable { t });
        }
        Ok(below
            .iter()
            .zip(&above)
            .map(|(b, a)| (a - b).scale_real(1.0 / dt))
            .collect())
    }

    /// The products `K_l(t) rho0 K_l_dot(t)^+` entering the speed bound.
    fn speed_terms(
        &self,
        t: f64,
        rho0: &DensityMatrix,
    ) -> Result<Vec<ComplexMatrix>, ChannelError> {
        let kraus = self.kraus_at(t);
        let dots = self.kraus_dot_at(t)?;
        Ok(kraus
            .iter()
            .zip(&dots)
            .map(|(k, kd)| &(k * rho0.matrix()) * &kd.adjoint())
            .collect())
    }
}

/// Kraus channel defined by closures; the generic carrier for user-supplied
/// families.
pub struct FnChannel {
    dim: usize,
    kraus: Box<dyn Fn(f64) -> Vec<ComplexMatrix> + Sync + Send>,
    kraus_dot: Option<Box<dyn Fn(f64) -> Vec<ComplexMatrix> + Sync + Send>>,
}

impl FnChannel {
    pub fn new(
        dim: usize,
        kraus: impl Fn(f64) -> Vec<ComplexMatrix> + Sync + Send + 'static,
    ) -> Self {
        Self {
            dim,
            kraus: Box::new(kraus),
            kraus_dot: None,
        }
    }

    pub fn with_derivative(
        mut self,
        kraus_dot: impl Fn(f64) -> Vec<ComplexMatrix> + Sync + Send + 'static,
    ) -> Self {
        self.kraus_dot = Some(Box::new(kraus_dot));
        self
    }
}

impl KrausChannel for FnChannel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn kraus_at(&self, t: f64) -> Vec<ComplexMatrix> {
        (self.kraus)(t)
    }

    fn kraus_dot_at(&self, t: f64) -> Result<Vec<ComplexMatrix>, ChannelError> {
        match &self.kraus_dot {
            Some(f) => Ok(f(t)),
            None => {
                // fall back to the finite-difference default
                struct Fd<'a>(&'a FnChannel);
                impl KrausChannel for Fd<'_> {
                    fn dim(&self) -> usize {
                        self.0.dim
                    }
                    fn kraus_at(&self, t: f64) -> Vec<ComplexMatrix> {
                        (self.0.kraus)(t)
                    }
                }
                Fd(self).kraus_dot_at(t)
            }
        }
    }
}

/// Max entrywise deviation of `sum K^+ K` from the identity at `t`.
pub fn completeness_deviation<C: KrausChannel + ?Sized>(channel: &C, t: f64) -> f64 {
    let dim = channel.dim();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for k in channel.kraus_at(t) {
        acc = &acc + &(&k.adjoint() * &k);
    }
    (&acc - &ComplexMatrix::identity(dim)).max_abs()
}

/// Applies the channel at time `t`: `rho_t = sum K_l rho0 K_l^+`.
pub fn evolve_channel<C: KrausChannel + ?Sized>(
    channel: &C,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix, ChannelError> {
    if rho0.dim() != channel.dim() {
        return Err(ChannelError::DimensionMismatch {
            expected: channel.dim(),
            found: rho0.dim(),
        });
    }
    let deviation = completeness_deviation(channel, t);
    if deviation > TOL_COMPLETENESS {
        return Err(ChannelError::CompletenessViolation { deviation, t });
    }
    let dim = channel.dim();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for k in channel.kraus_at(t) {
        out = &out + &(&(&k * rho0.matrix()) * &k.adjoint());
    }
    let trace = out.trace();
    if (trace.re - 1.0).abs() > TOL_TRACE_PRESERVE || trace.im.abs() > TOL_TRACE_PRESERVE {
        return Err(ChannelError::CompletenessViolation {
            deviation: (trace.re - 1.0).abs(),
            t,
        });
    }
    // renormalize away the sub-1e-9 trace drift the completeness tolerance admits
    let out = out.scale_real(1.0 / trace.re);
    Ok(DensityMatrix::validate(out)?)
}

/// Upper bound on the trace speed: `2 sum_l ||K_l rho0 K_l_dot^+||_1`.
pub fn channel_speed_bound<C: KrausChannel + ?Sized>(
    channel: &C,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<f64, ChannelError> {
    let terms = channel.speed_terms(t, rho0)?;
    Ok(2.0 * terms.iter().map(|m| m.trace_norm()).sum::<f64>())
}

/// Exact trace speed at `t`, from `d rho/dt = sum_l (T_l + T_l^+)` with
/// `T_l = K_l rho0 K_l_dot^+`.
pub fn channel_speed<C: KrausChannel + ?Sized>(
    channel: &C,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<f64, ChannelError> {
    let terms = channel.speed_terms(t, rho0)?;
    let dim = channel.dim();
    let mut deriv = ComplexMatrix::zeros(dim, dim);
    for term in &terms {
        deriv = &(&deriv + term) + &term.adjoint();
    }
    deriv.trace_norm_hermitian().map_err(ChannelError::Linalg)
}

/// Samples the evolution on a grid, with exact speeds.
pub fn channel_trajectory<C: KrausChannel + ?Sized>(
    channel: &C,
    rho0: &DensityMatrix,
    times: &[f64],
) -> Result<Trajectory, ChannelError> {
    let mut states = Vec::with_capacity(times.len());
    let mut speeds = Vec::with_capacity(times.len());
    for &t in times {
        states.push(evolve_channel(channel, rho0, t)?);
        speeds.push(channel_speed(channel, rho0, t)?);
    }
    Ok(Trajectory::new(times.to_vec(), states, speeds)?)
}

/// Per-prefix bound series for a channel, with the Kraus-term denominator
/// `2 sum_l ||K_l rho0 K_l_dot^+||_1` in place of the raw speed.
pub fn channel_prefix_series<C: KrausChannel + ?Sized>(
    channel: &C,
    rho0: &DensityMatrix,
    times: &[f64],
    params: &EntropyParams,
) -> Result<PrefixSeries, ChannelError> {
    let mut spectra = Vec::with_capacity(times.len());
    let mut weights = Vec::with_capacity(times.len());
    for &t in times {
        let state = evolve_channel(channel, rho0, t)?;
        spectra.push(state.eigenvalues());
        weights.push(channel_speed_bound(channel, rho0, t)?);
    }
    Ok(qsl::prefix_series_from_spectra(
        times, &spectra, &weights, params,
    )?)
}

/// Channel QSL over `[0, tau]` (the last grid point): bound report with the
/// Kraus-term denominator.
pub fn channel_qsl<C: KrausChannel + ?Sized>(
    channel: &C,
    rho0: &DensityMatrix,
    times: &[f64],
    params: &EntropyParams,
) -> Result<BoundReport, ChannelError> {
    Ok(channel_prefix_series(channel, rho0, times, params)?.report()?)
}

/// Decay rate plus initial state for the amplitude-damping scenario.
#[derive(Debug, Clone, Copy)]
pub struct AmplitudeDampingParams {
    gamma: f64,
    bloch: crate::linalg::BlochParams,
}

impl AmplitudeDampingParams {
    pub fn new(gamma: f64, bloch: crate::linalg::BlochParams) -> Result<Self, ChannelError> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(ChannelError::Linalg(LinalgError::InvalidBloch {
                name: "gamma",
                value: gamma,
            }));
        }
        Ok(Self { gamma, bloch })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn bloch(&self) -> &crate::linalg::BlochParams {
        &self.bloch
    }

    pub fn initial_state(&self) -> DensityMatrix {
        DensityMatrix::from_bloch(&self.bloch)
    }
}

/// Single-qubit amplitude damping: `K_0 = |0><0| + e^{-gamma t/2} |1><1|`,
/// `K_1 = sqrt(1 - e^{-gamma t}) |0><1|`, with analytic derivatives.
pub struct AmplitudeDamping {
    gamma: f64,
}

/// Builds the amplitude-damping channel for the given parameters.
pub fn amplitude_damping(params: &AmplitudeDampingParams) -> AmplitudeDamping {
    AmplitudeDamping {
        gamma: params.gamma,
    }
}

impl KrausChannel for AmplitudeDamping {
    fn dim(&self) -> usize {
        2
    }

    fn kraus_at(&self, t: f64) -> Vec<ComplexMatrix> {
        let decay = (-self.gamma * t).exp();
        let k0 = ComplexMatrix::from_real_slice(2, 2, &[1.0, 0.0, 0.0, decay.sqrt()]);
        let k1 =
            ComplexMatrix::from_real_slice(2, 2, &[0.0, (1.0 - decay).max(0.0).sqrt(), 0.0, 0.0]);
        vec![k0, k1]
    }

    /// Analytic derivatives. `K_1_dot ~ t^{-1/2}` at `t = 0`; the derivative
    /// alone is unavailable there, while [`KrausChannel::speed_terms`] stays
    /// finite through the simplified product form.
    fn kraus_dot_at(&self, t: f64) -> Result<Vec<ComplexMatrix>, ChannelError> {
        let decay = (-self.gamma * t).exp();
        let w = (1.0 - decay).max(0.0).sqrt();
        if w == 0.0 {
            return Err(ChannelError::DerivativeUnavailable { t });
        }
        let d0 = ComplexMatrix::from_real_slice(
            2,
            2,
            &[0.0, 0.0, 0.0, -0.5 * self.gamma * decay.sqrt()],
        );
        let d1 =
            ComplexMatrix::from_real_slice(2, 2, &[0.0, 0.5 * self.gamma * decay / w, 0.0, 0.0]);
        Ok(vec![d0, d1])
    }

    fn speed_terms(
        &self,
        t: f64,
        rho0: &DensityMatrix,
    ) -> Result<Vec<ComplexMatrix>, ChannelError> {
        let decay = (-self.gamma * t).exp();
        let d0 = ComplexMatrix::from_real_slice(
            2,
            2,
            &[0.0, 0.0, 0.0, -0.5 * self.gamma * decay.sqrt()],
        );
        let k0 = ComplexMatrix::from_real_slice(2, 2, &[1.0, 0.0, 0.0, decay.sqrt()]);
        let term0 = &(&k0 * rho0.matrix()) * &d0.adjoint();
        // K_1 rho K_1_dot^+ = (gamma/2) e^{-gamma t} rho_11 |0><0|, finite at t = 0
        let mut term1 = ComplexMatrix::zeros(2, 2);
        term1.set(
            0,
            0,
            rho0.matrix().get(1, 1) * C64::new(0.5 * self.gamma * decay, 0.0),
        );
        Ok(vec![term0, term1])
    }
}

/// The auxiliary function
/// `xi_t = 1 - r^2 + (1 - e^{-gamma t}) (1 - r cos(theta))^2`.
pub fn ad_xi(params: &AmplitudeDampingParams, t: f64) -> f64 {
    let r = params.bloch.r();
    let ct = params.bloch.theta().cos();
    1.0 - r * r + (1.0 - (-params.gamma * t).exp()) * (1.0 - r * ct).powi(2)
}

/// Closed form for the smallest eigenvalue of the evolved state,
/// `kappa_min = (1/2)(1 - sqrt(1 - e^{-gamma t} xi_t))`.
pub fn ad_kappa_min(params: &AmplitudeDampingParams, t: f64) -> f64 {
    let inner = 1.0 - (-params.gamma * t).exp() * ad_xi(params, t);
    0.5 * (1.0 - inner.max(0.0).sqrt())
}

/// Closed-form QSL time for amplitude damping over `[0, tau]` (the last grid
/// point), for alpha in (0,1) and mu in [0,1]. The mu = 0 member is the joint
/// analytic limit of numerator and denominator (both vanish linearly in mu).
pub fn ad_qsl_closed_form(
    params: &AmplitudeDampingParams,
    times: &[f64],
    alpha: f64,
    mu: f64,
) -> Result<f64, ChannelError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ChannelError::Qsl(QslError::DomainError {
            reason: format!("closed form needs alpha in (0,1), got {alpha}"),
        }));
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(ChannelError::Qsl(QslError::DomainError {
            reason: format!("closed form needs mu in [0,1], got {mu}"),
        }));
    }
    if times.len() < 2 {
        return Err(ChannelError::Qsl(QslError::EmptyTrajectory));
    }
    let tau = *times.last().unwrap();
    let r = params.bloch.r();
    let theta = params.bloch.theta();
    let gamma = params.gamma;

    let kappa_tau = ad_kappa_min(params, tau);
    let f_tau = kappa_tau.powf(alpha) + (1.0 - kappa_tau).powf(alpha);
    let f_zero = 2f64.powf(-alpha) * ((1.0 - r).powf(alpha) + (1.0 + r).powf(alpha));
    let numerator = if mu == 0.0 {
        (f_tau.ln() - f_zero.ln()).abs()
    } else {
        (f_tau.powf(mu) - f_zero.powf(mu)).abs()
    };

    let integrand = |t: f64| -> Result<f64, ChannelError> {
        let kappa = ad_kappa_min(params, t);
        if kappa < KAPPA_FLOOR {
            return Err(ChannelError::Qsl(QslError::SingularState {
                kappa_min: kappa,
                floor: KAPPA_FLOOR,
            }));
        }
        let root = ((1.0 - r * theta.cos()).powi(2)
            + (gamma * t).exp() * r * r * theta.sin().powi(2))
        .sqrt();
        Ok((-gamma * t).exp()
            * (1.0 - alpha + kappa)
            * kappa.powf(alpha - 2.0)
            * (1.0 - r * theta.cos() + root))
    };
    let mut integral = 0.0;
    let mut previous = integrand(times[0])?;
    for pair in times.windows(2) {
        let current = integrand(pair[1])?;
        integral += 0.5 * (pair[1] - pair[0]) * (previous + current);
        previous = current;
    }
    let mu_eff = if mu == 0.0 { 1.0 } else { mu };
    let denominator = 0.5 * gamma * alpha * mu_eff * integral / tau;
    if denominator <= 0.0 {
        return Err(ChannelError::Qsl(QslError::ZeroDenominator));
    }
    Ok(numerator / denominator)
}

//! XXZ chain construction, Neel-based mixed initial states, reduced-state
//! trajectories under the global unitary evolution, the variance/QFI
//! inequality chain, and the many-body entropy bound and QSL.

use thiserror::Error;

use crate::entropy::{EntropyError, EntropyParams};
use crate::linalg::{
    commutator, partial_trace_matrix, ComplexMatrix, DensityMatrix, LinalgError, Subsystem, C64,
};
use crate::qsl::{self, BoundReport, PrefixSeries, QslError, Trajectory};

/// Desk-scale cap on the global Hilbert-space dimension.
pub const MAX_GLOBAL_DIM: usize = 4096;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ManyBodyError {
    #[error("chain of {l} sites exceeds the 2^L <= {max_dim} size limit")]
    SizeLimit { l: usize, max_dim: usize },
    #[error("invalid chain configuration: {reason}")]
    InvalidConfig { reason: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Qsl(#[from] QslError),
}

/// `(L, J, Delta, p, L_A)` defining an XXZ experiment: `L` sites with open
/// boundaries, exchange coupling `J`, anisotropy `Delta`, mixing parameter
/// `p`, and the kept subsystem A = the leftmost `L_A` sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinChainConfig {
    l: usize,
    j: f64,
    delta: f64,
    p: f64,
    l_a: usize,
}

impl SpinChainConfig {
    pub fn new(l: usize, j: f64, delta: f64, p: f64, l_a: usize) -> Result<Self, ManyBodyError> {
        if l < 2 {
            return Err(ManyBodyError::InvalidConfig {
                reason: format!("need L >= 2, got {l}"),
            });
        }
        if l > MAX_GLOBAL_DIM.trailing_zeros() as usize {
            return Err(ManyBodyError::SizeLimit {
                l,
                max_dim: MAX_GLOBAL_DIM,
            });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(ManyBodyError::InvalidConfig {
                reason: format!("need p in [0,1], got {p}"),
            });
        }
        if !j.is_finite() || !delta.is_finite() {
            return Err(ManyBodyError::InvalidConfig {
                reason: "J and Delta must be finite".into(),
            });
        }
        if l_a == 0 || l_a >= l {
            return Err(ManyBodyError::InvalidConfig {
                reason: format!("need 1 <= L_A <= L-1, got L_A = {l_a} for L = {l}"),
            });
        }
        Ok(Self {
            l,
            j,
            delta,
            p,
            l_a,
        })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn l_a(&self) -> usize {
        self.l_a
    }

    pub fn dim(&self) -> usize {
        1 << self.l
    }

    pub fn dim_a(&self) -> usize {
        1 << self.l_a
    }

    pub fn dim_b(&self) -> usize {
        1 << (self.l - self.l_a)
    }
}

// site s (1-indexed, leftmost = slowest tensor factor) reads bit L - s
fn site_bit(index: usize, l: usize, site: usize) -> usize {
    (index >> (l - site)) & 1
}

/// Dense XXZ Hamiltonian
/// `H = J sum_j (sx_j sx_{j+1} + sy_j sy_{j+1} + Delta sz_j sz_{j+1})`
/// with open boundaries; real entries in the computational basis.
pub fn xxz_hamiltonian(cfg: &SpinChainConfig) -> ComplexMatrix {
    let l = cfg.l;
    let dim = cfg.dim();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        let mut diag = 0.0;
        for site in 1..l {
            let b1 = site_bit(i, l, site);
            let b2 = site_bit(i, l, site + 1);
            let z1 = 1.0 - 2.0 * b1 as f64;
            let z2 = 1.0 - 2.0 * b2 as f64;
            diag += cfg.j * cfg.delta * z1 * z2;
            if b1 != b2 {
                // (sx sx + sy sy) |01> = 2 |10>
                let flipped = i ^ ((1 << (l - site)) | (1 << (l - site - 1)));
                let old = h.get(flipped, i);
                h.set(flipped, i, old + C64::new(2.0 * cfg.j, 0.0));
            }
        }
        h.set(i, i, C64::new(diag, 0.0));
    }
    h
}

/// Basis index of the Neel state |1,0,1,0,...> (site 1 = |1>).
pub fn neel_index(l: usize) -> usize {
    let mut index = 0usize;
    for site in (1..=l).step_by(2) {
        index |= 1 << (l - site);
    }
    index
}

/// `rho_0 = ((1-p)/d) I + p |Psi><Psi|` with the Neel state `|Psi>`;
/// eigenvalues `(1-p)/d` (d-1 fold) and `(1-p)/d + p`.
pub fn neel_mixed_state(cfg: &SpinChainConfig) -> DensityMatrix {
    let dim = cfg.dim();
    let uniform = (1.0 - cfg.p) / dim as f64;
    let mut m = ComplexMatrix::identity(dim).scale_real(uniform);
    let idx = neel_index(cfg.l);
    m.set(idx, idx, C64::new(uniform + cfg.p, 0.0));
    DensityMatrix::validate(m).expect("Neel mixture is a valid state")
}

/// Eigendecomposed XXZ evolution: the Hamiltonian is diagonalized once, then
/// every sample costs a few dense multiplications.
pub struct XxzEvolution {
    cfg: SpinChainConfig,
    eigenvalues: Vec<f64>,
    vectors: ComplexMatrix,
    /// Initial state rotated into the energy eigenbasis.
    w0: ComplexMatrix,
}

impl XxzEvolution {
    pub fn new(cfg: SpinChainConfig) -> Result<Self, ManyBodyError> {
        let h = xxz_hamiltonian(&cfg);
        let (eigenvalues, vectors) = h.hermitian_eigen()?;
        let rho0 = neel_mixed_state(&cfg);
        let w0 = &(&vectors.adjoint() * rho0.matrix()) * &vectors;
        Ok(Self {
            cfg,
            eigenvalues,
            vectors,
            w0,
        })
    }

    pub fn cfg(&self) -> &SpinChainConfig {
        &self.cfg
    }

    pub fn initial_state(&self) -> DensityMatrix {
        neel_mixed_state(&self.cfg)
    }

    fn rotated_at(&self, t: f64) -> ComplexMatrix {
        let n = self.w0.nrows();
        ComplexMatrix::from_fn(n, n, |a, b| {
            let phase = C64::new(0.0, -(self.eigenvalues[a] - self.eigenvalues[b]) * t).exp();
            phase * self.w0.get(a, b)
        })
    }

    /// Global state `e^{-itH} rho_0 e^{itH}` as a raw matrix.
    pub fn global_at(&self, t: f64) -> ComplexMatrix {
        let w = self.rotated_at(t);
        &(&self.vectors * &w) * &self.vectors.adjoint()
    }

    /// Reduced state of subsystem A at time `t`.
    pub fn reduced_at(&self, t: f64) -> Result<DensityMatrix, ManyBodyError> {
        let global = self.global_at(t);
        let reduced =
            partial_trace_matrix(&global, self.cfg.dim_a(), self.cfg.dim_b(), Subsystem::A);
        Ok(DensityMatrix::validate(reduced)?)
    }

    /// Exact reduced speed `|| Tr_B(-i [H, E_t(rho_0)]) ||_1`; the commutator
    /// is evaluated in the energy eigenbasis where `[H, .]` is a Hadamard
    /// product with the level differences. The operand is Hermitian, so the
    /// norm comes from its eigenvalues.
    pub fn reduced_speed_at(&self, t: f64) -> f64 {
        let n = self.w0.nrows();
        let w = self.rotated_at(t);
        let comm = ComplexMatrix::from_fn(n, n, |a, b| {
            // -i [Lambda, W_t]
            C64::new(0.0, -(self.eigenvalues[a] - self.eigenvalues[b])) * w.get(a, b)
        });
        let full = &(&self.vectors * &comm) * &self.vectors.adjoint();
        partial_trace_matrix(&full, self.cfg.dim_a(), self.cfg.dim_b(), Subsystem::A)
            .trace_norm_hermitian()
            .expect("-i [H, rho] is Hermitian")
    }
}

/// Reduced trajectory of subsystem A over the grid, with exact speeds.
pub fn reduced_trajectory(
    cfg: &SpinChainConfig,
    times: &[f64],
) -> Result<Trajectory, ManyBodyError> {
    let evolution = XxzEvolution::new(*cfg)?;
    let mut states = Vec::with_capacity(times.len());
    let mut speeds = Vec::with_capacity(times.len());
    for &t in times {
        states.push(evolution.reduced_at(t)?);
        speeds.push(evolution.reduced_speed_at(t));
    }
    Ok(Trajectory::new(times.to_vec(), states, speeds)?)
}

/// The three members of the speed hierarchy
/// `||[H, rho_0]||_1 <= 2 sqrt(F) <= 2 DeltaH`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceChain {
    /// `(DeltaH)^2 = Tr(rho_0 H^2) - Tr(rho_0 H)^2`.
    pub variance: f64,
    /// Quantum Fisher information `F(rho_0)`, normalized so that pure states
    /// give `F = (DeltaH)^2`.
    pub qfi: f64,
    /// `||[H, rho_0]||_1`.
    pub comm_norm: f64,
}

/// QFI from the spectral (symmetric-logarithmic-derivative) formula,
/// dropping degenerate pairs with `p_k + p_l <= 1e-12`.
pub fn quantum_fisher_information(
    rho: &DensityMatrix,
    h: &ComplexMatrix,
) -> Result<f64, LinalgError> {
    let (probs, vectors) = rho.matrix().hermitian_eigen()?;
    let h_eig = &(&vectors.adjoint() * h) * &vectors;
    let n = probs.len();
    let mut f = 0.0;
    for k in 0..n {
        for l in 0..n {
            let sum = probs[k].max(0.0) + probs[l].max(0.0);
            if sum > 1e-12 {
                let diff = probs[k] - probs[l];
                f += 0.5 * diff * diff / sum * h_eig.get(k, l).norm_sqr();
            }
        }
    }
    Ok(f)
}

/// Variance, QFI, and commutator norm for the configured initial state. The
/// commutator norm is taken through the Hermitian operand `i [H, rho_0]` so
/// that the tight (pure-state) end of the chain is not spoiled by the Gram
/// route's precision loss.
pub fn variance_qfi_chain(cfg: &SpinChainConfig) -> Result<VarianceChain, ManyBodyError> {
    let h = xxz_hamiltonian(cfg);
    let rho0 = neel_mixed_state(cfg);
    let h_rho = &h * rho0.matrix();
    let mean = h_rho.trace().re;
    let second = (&h * &h_rho).trace().re;
    let variance = second - mean * mean;
    let qfi = quantum_fisher_information(&rho0, &h)?;
    let comm_norm = commutator(&h, rho0.matrix())
        .scale(C64::new(0.0, 1.0))
        .trace_norm_hermitian()
        .map_err(ManyBodyError::Linalg)?;
    Ok(VarianceChain {
        variance,
        qfi,
        comm_norm,
    })
}

/// Closed form for the Neel-mixture variance,
/// `(DeltaH)^2 = J^2 (L-1) [2(1+p) + (1-p)(1+(L-1)p) Delta^2]`.
pub fn xxz_variance_closed_form(cfg: &SpinChainConfig) -> f64 {
    let l = cfg.l as f64;
    cfg.j
        * cfg.j
        * (l - 1.0)
        * (2.0 * (1.0 + cfg.p) + (1.0 - cfg.p) * (1.0 + (l - 1.0) * cfg.p) * cfg.delta * cfg.delta)
}

/// Bound report plus the variance chain entering the denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyBoundReport {
    pub bound: BoundReport,
    pub variance: f64,
    pub qfi: f64,
    pub comm_norm: f64,
}

/// Per-prefix series for the many-body bound: the integrand is
/// `2 DeltaH h_alpha[kappa_min(rho_t^A)]` (the Hamiltonian fluctuation
/// replaces the instantaneous speed).
pub fn mb_prefix_series(
    cfg: &SpinChainConfig,
    times: &[f64],
    params: &EntropyParams,
) -> Result<(PrefixSeries, VarianceChain), ManyBodyError> {
    let chain = variance_qfi_chain(cfg)?;
    let evolution = XxzEvolution::new(*cfg)?;
    let mut spectra = Vec::with_capacity(times.len());
    for &t in times {
        spectra.push(evolution.reduced_at(t)?.eigenvalues());
    }
    let weights = vec![2.0 * chain.variance.max(0.0).sqrt(); times.len()];
    let series = qsl::prefix_series_from_spectra(times, &spectra, &weights, params)?;
    Ok((series, chain))
}

/// Many-body QSL over the grid (tau = last point).
pub fn mb_qsl(
    cfg: &SpinChainConfig,
    times: &[f64],
    params: &EntropyParams,
) -> Result<ManyBodyBoundReport, ManyBodyError> {
    let (series, chain) = mb_prefix_series(cfg, times, params)?;
    let bound = series.report()?;
    Ok(ManyBodyBoundReport {
        bound,
        variance: chain.variance,
        qfi: chain.qfi,
        comm_norm: chain.comm_norm,
    })
}

//! Nonunitary evolution generated by non-Hermitian Hamiltonians,
//! `rho_t = E_t(rho_0) / Tr[E_t(rho_0)]` with `E_t(.) = e^{-itH~} . e^{+itH~^+}`,
//! the matching speed bound and QSL, and the PT-symmetric qubit closed forms
//! across the unbroken, exceptional and broken phases.

use thiserror::Error;

use crate::entropy::{EntropyError, EntropyParams};
use crate::linalg::{
    anticommutator, commutator, matrix_exponential, sigma_x, sigma_z, BlochParams, ComplexMatrix,
    DensityMatrix, LinalgError, C64,
};
use crate::qsl::{self, BoundReport, PrefixSeries, QslError, Trajectory};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NhError {
    #[error("norm of the evolved state vanished (trace = {trace:.3e})")]
    VanishingNorm { trace: f64 },
    #[error("invalid parameters: {reason}")]
    InvalidParams { reason: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Qsl(#[from] QslError),
}

/// `H~ = H + i Gamma` with Hermitian `H` (coherent part) and `Gamma`
/// (gain/loss part).
#[derive(Debug, Clone)]
pub struct NonHermitianHamiltonian {
    h_tilde: ComplexMatrix,
    h: ComplexMatrix,
    gamma_op: ComplexMatrix,
}

/// Splits an arbitrary square generator into its Hermitian parts,
/// `H = (H~ + H~^+)/2` and `Gamma = (H~ - H~^+)/(2i)`.
pub fn split_hermitian(h_tilde: ComplexMatrix) -> Result<NonHermitianHamiltonian, NhError> {
    if !h_tilde.is_square() {
        return Err(NhError::Linalg(LinalgError::NotSquare {
            rows: h_tilde.nrows(),
            cols: h_tilde.ncols(),
        }));
    }
    h_tilde.check_finite().map_err(NhError::Linalg)?;
    let adj = h_tilde.adjoint();
    let h = (&h_tilde + &adj).scale_real(0.5);
    let gamma_op = (&h_tilde - &adj).scale(C64::new(0.0, -0.5));
    Ok(NonHermitianHamiltonian {
        h_tilde,
        h,
        gamma_op,
    })
}

impl NonHermitianHamiltonian {
    pub fn dim(&self) -> usize {
        self.h_tilde.nrows()
    }

    pub fn h_tilde(&self) -> &ComplexMatrix {
        &self.h_tilde
    }

    pub fn h(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn gamma_op(&self) -> &ComplexMatrix {
        &self.gamma_op
    }

    pub fn is_hermitian(&self) -> bool {
        self.gamma_op.max_abs() == 0.0
    }
}

// Chunk the propagator once ||t H~||_1 passes this, renormalizing between
// chunks; exact for time-independent H~ and keeps the broken phase from
// overflowing at large times.
const CHUNK_NORM: f64 = 50.0;

/// Normalized evolution `rho_t = U rho_0 U^+ / Tr(U rho_0 U^+)` with
/// `U = e^{-itH~}`.
pub fn evolve_nonhermitian(
    nh: &NonHermitianHamiltonian,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix, NhError> {
    if rho0.dim() != nh.dim() {
        return Err(NhError::Linalg(LinalgError::DimensionMismatch {
            left: nh.dim(),
            right: rho0.dim(),
        }));
    }
    let scale = t.abs() * nh.h_tilde.induced_one_norm();
    let chunks = ((scale / CHUNK_NORM).ceil() as usize).max(1);
    let dt = t / chunks as f64;
    let generator = nh.h_tilde.scale(C64::new(0.0, -dt));
    let u = matrix_exponential(&generator).map_err(NhError::Linalg)?;
    let u_dag = u.adjoint();
    let mut state = rho0.matrix().clone();
    for _ in 0..chunks {
        state = &(&u * &state) * &u_dag;
        let trace = state.trace().re;
        if trace.abs() <= 1e-14 || !trace.is_finite() {
            return Err(NhError::VanishingNorm { trace });
        }
        state = state.scale_real(1.0 / trace);
    }
    Ok(DensityMatrix::validate(state)?)
}

/// Right-hand side of the equation of motion,
/// `d rho/dt = -i [H, rho] + {Gamma, rho} - 2 <Gamma>_t rho`.
pub fn equation_of_motion_rhs(nh: &NonHermitianHamiltonian, rho: &DensityMatrix) -> ComplexMatrix {
    let coherent = commutator(&nh.h, rho.matrix()).scale(C64::new(0.0, -1.0));
    let gain_loss = anticommutator(&nh.gamma_op, rho.matrix());
    let expectation = (&nh.gamma_op * rho.matrix()).trace().re;
    &(&coherent + &gain_loss) - &rho.matrix().scale_real(2.0 * expectation)
}

/// Instantaneous trace speed from the generator.
pub fn nh_speed(nh: &NonHermitianHamiltonian, rho: &DensityMatrix) -> f64 {
    equation_of_motion_rhs(nh, rho)
        .trace_norm_hermitian()
        .expect("the equation-of-motion right-hand side is Hermitian")
}

/// Samples the evolution on a grid with analytic speeds.
pub fn nh_trajectory(
    nh: &NonHermitianHamiltonian,
    rho0: &DensityMatrix,
    times: &[f64],
) -> Result<Trajectory, NhError> {
    let mut states = Vec::with_capacity(times.len());
    let mut speeds = Vec::with_capacity(times.len());
    for &t in times {
        let state = evolve_nonhermitian(nh, rho0, t)?;
        speeds.push(nh_speed(nh, &state));
        states.push(state);
    }
    Ok(Trajectory::new(times.to_vec(), states, speeds)?)
}

/// Max over interior grid points of `|| FD(d rho/dt) - RHS ||_1`; a
/// consistency check between the propagator and the generator. Uniform grids
/// get a fourth-order central stencil so the truncation error sits well below
/// the 1e-5 target on 1000-point grids; endpoints are skipped.
pub fn equation_of_motion_residual(nh: &NonHermitianHamiltonian, traj: &Trajectory) -> f64 {
    let times = traj.times();
    let states = traj.states();
    let n = times.len();
    let mut worst: f64 = 0.0;
    let uniform = n >= 5 && {
        let h = times[1] - times[0];
        times
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() < 1e-12 * h.max(1.0))
    };
    if uniform {
        let h = times[1] - times[0];
        for k in 2..n - 2 {
            let fd = &(&(states[k - 2].matrix() - states[k + 2].matrix())
                + &(states[k + 1].matrix() - states[k - 1].matrix()).scale_real(8.0))
                .scale_real(1.0 / (12.0 * h));
            let residual = (fd - &equation_of_motion_rhs(nh, &states[k]))
                .trace_norm_hermitian()
                .expect("residual operand is Hermitian");
            worst = worst.max(residual);
        }
    } else {
        for k in 1..n.saturating_sub(1) {
            let dt = times[k + 1] - times[k - 1];
            let fd = (states[k + 1].matrix() - states[k - 1].matrix()).scale_real(1.0 / dt);
            let residual = (&fd - &equation_of_motion_rhs(nh, &states[k]))
                .trace_norm_hermitian()
                .expect("residual operand is Hermitian");
            worst = worst.max(residual);
        }
    }
    worst
}

/// Time-independent speed bound `2 (||H||_inf + ||Gamma||_1 + ||Gamma||_inf)`.
pub fn nh_speed_bound(nh: &NonHermitianHamiltonian) -> f64 {
    2.0 * (nh.h.operator_norm() + nh.gamma_op.trace_norm() + nh.gamma_op.operator_norm())
}

/// Per-prefix bound series with the constant non-Hermitian denominator.
pub fn nh_prefix_series(
    nh: &NonHermitianHamiltonian,
    rho0: &DensityMatrix,
    times: &[f64],
    params: &EntropyParams,
) -> Result<PrefixSeries, NhError> {
    let bound = nh_speed_bound(nh);
    let mut spectra = Vec::with_capacity(times.len());
    for &t in times {
        spectra.push(evolve_nonhermitian(nh, rho0, t)?.eigenvalues());
    }
    let weights = vec![bound; times.len()];
    let mut series = qsl::prefix_series_from_spectra(times, &spectra, &weights, params)?;
    if nh.is_hermitian() {
        // unitary limit: the entropy is a constant of motion, so the
        // numerator is identically zero rather than rounding noise
        series.lhs.iter_mut().for_each(|v| *v = 0.0);
    }
    Ok(series)
}

/// QSL report for the non-Hermitian bound; vanishes identically in the
/// Hermitian limit.
pub fn nh_qsl(
    nh: &NonHermitianHamiltonian,
    rho0: &DensityMatrix,
    times: &[f64],
    params: &EntropyParams,
) -> Result<BoundReport, NhError> {
    Ok(nh_prefix_series(nh, rho0, times, params)?.report()?)
}

/// PT-symmetric qubit `H~ = varpi sigma_x + i eta sigma_z`: coupling
/// `varpi`, dissipation rate `eta`, and the initial Bloch state.
#[derive(Debug, Clone, Copy)]
pub struct PTQubitParams {
    varpi: f64,
    eta: f64,
    bloch: BlochParams,
}

/// Phase of the PT qubit, selected by `eta` against `|varpi|` with a 1e-12
/// tie window routing to the exceptional point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtRegime {
    Unbroken,
    Exceptional,
    Broken,
}

impl PTQubitParams {
    pub fn new(varpi: f64, eta: f64, bloch: BlochParams) -> Result<Self, NhError> {
        if varpi == 0.0 || !varpi.is_finite() {
            return Err(NhError::InvalidParams {
                reason: format!("varpi must be nonzero and finite, got {varpi}"),
            });
        }
        if !eta.is_finite() || eta < 0.0 {
            return Err(NhError::InvalidParams {
                reason: format!("eta must be nonnegative, got {eta}"),
            });
        }
        Ok(Self { varpi, eta, bloch })
    }

    pub fn varpi(&self) -> f64 {
        self.varpi
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn bloch(&self) -> &BlochParams {
        &self.bloch
    }

    pub fn initial_state(&self) -> DensityMatrix {
        DensityMatrix::from_bloch(&self.bloch)
    }

    pub fn regime(&self) -> PtRegime {
        let gap = self.eta - self.varpi.abs();
        if gap.abs() < 1e-12 {
            PtRegime::Exceptional
        } else if gap < 0.0 {
            PtRegime::Unbroken
        } else {
            PtRegime::Broken
        }
    }

    /// The generator `varpi sigma_x + i eta sigma_z`.
    pub fn hamiltonian(&self) -> NonHermitianHamiltonian {
        let h_tilde = &sigma_x().scale_real(self.varpi) + &sigma_z().scale(C64::new(0.0, self.eta));
        split_hermitian(h_tilde).expect("2x2 generator is square")
    }
}

// small complex 3-vector algebra for the closed forms; dot and cross are
// bilinear (no conjugation), conjugation is explicit where the formulas
// write u-hat*
#[derive(Debug, Clone, Copy)]
struct CVec3([C64; 3]);

impl CVec3 {
    fn from_real(v: [f64; 3]) -> Self {
        Self([
            C64::new(v[0], 0.0),
            C64::new(v[1], 0.0),
            C64::new(v[2], 0.0),
        ])
    }

    fn conj(&self) -> Self {
        Self([self.0[0].conj(), self.0[1].conj(), self.0[2].conj()])
    }

    fn dot(&self, other: &CVec3) -> C64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    fn cross(&self, other: &CVec3) -> CVec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        CVec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    fn add(&self, other: &CVec3) -> CVec3 {
        CVec3([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    fn sub(&self, other: &CVec3) -> CVec3 {
        CVec3([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }

    fn scale(&self, factor: C64) -> CVec3 {
        CVec3([self.0[0] * factor, self.0[1] * factor, self.0[2] * factor])
    }
}

fn pauli_dot(v: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::from_slice(
        2,
        2,
        &[
            C64::new(v[2], 0.0),
            C64::new(v[0], -v[1]),
            C64::new(v[0], v[1]),
            C64::new(-v[2], 0.0),
        ],
    )
}

const CLOSED_FORM_IM_TOL: f64 = 1e-9;

fn realize(z: C64, what: &str) -> Result<f64, NhError> {
    if z.im.abs() > CLOSED_FORM_IM_TOL * z.re.abs().max(1.0) {
        return Err(NhError::InvalidParams {
            reason: format!("{what} acquired an imaginary part {z:.3e}"),
        });
    }
    Ok(z.re)
}

/// Closed-form PT-qubit state at time `t`, dispatched on the phase. The
/// hyperbolic (broken-phase) form overflows near `2 sqrt(eta^2-varpi^2) t ~ 700`;
/// use the propagator beyond that.
pub fn pt_closed_form(params: &PTQubitParams, t: f64) -> Result<DensityMatrix, NhError> {
    let r_vec = CVec3::from_real(params.bloch.vector());
    let rho0 = params.initial_state();
    match params.regime() {
        PtRegime::Unbroken => {
            let omega = (params.varpi * params.varpi - params.eta * params.eta).sqrt();
            let u_hat = CVec3([
                C64::new(params.varpi / omega, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, params.eta / omega),
            ]);
            let u_conj = u_hat.conj();
            let sin1 = (omega * t).sin();
            let sin2 = (2.0 * omega * t).sin();
            let i = C64::new(0.0, 1.0);

            let c_t = (u_hat.dot(&u_conj) + i * u_conj.cross(&u_hat).dot(&r_vec)
                - C64::new(1.0, 0.0))
                * C64::new(2.0 * sin1 * sin1, 0.0)
                - i * u_hat.sub(&u_conj).dot(&r_vec) * C64::new(sin2, 0.0);

            let q_t = u_hat
                .add(&u_conj)
                .cross(&r_vec)
                .sub(&u_hat.sub(&u_conj).scale(i))
                .scale(C64::new(sin2, 0.0))
                .add(
                    &u_conj
                        .scale(u_hat.dot(&r_vec))
                        .add(&u_hat.scale(u_conj.dot(&r_vec)))
                        .sub(&r_vec.scale(C64::new(1.0, 0.0) + u_hat.dot(&u_conj)))
                        .add(&u_hat.cross(&u_conj).scale(i))
                        .scale(C64::new(2.0 * sin1 * sin1, 0.0)),
                );
            assemble_affine_state(&rho0, c_t, q_t)
        }
        PtRegime::Broken => {
            let omega = (params.eta * params.eta - params.varpi * params.varpi).sqrt();
            if 2.0 * omega * t.abs() > 690.0 {
                return Err(NhError::InvalidParams {
                    reason: format!(
                        "broken-phase closed form overflows at omega*t = {:.1}; use the propagator",
                        omega * t
                    ),
                });
            }
            let u_hat = CVec3([
                C64::new(0.0, -params.varpi / omega),
                C64::new(0.0, 0.0),
                C64::new(params.eta / omega, 0.0),
            ]);
            let u_conj = u_hat.conj();
            let sh1 = (omega * t).sinh();
            let sh2 = (2.0 * omega * t).sinh();
            let i = C64::new(0.0, 1.0);

            let h_t =
                (u_hat.dot(&u_conj) + i * u_conj.cross(&u_hat).dot(&r_vec) + C64::new(1.0, 0.0))
                    * C64::new(2.0 * sh1 * sh1, 0.0)
                    + u_hat.add(&u_conj).dot(&r_vec) * C64::new(sh2, 0.0);

            let v_t = u_hat
                .sub(&u_conj)
                .cross(&r_vec)
                .sub(&u_hat.add(&u_conj).scale(i))
                .scale(i * C64::new(sh2, 0.0))
                .add(
                    &u_conj
                        .scale(u_hat.dot(&r_vec))
                        .add(&u_hat.scale(u_conj.dot(&r_vec)))
                        .add(&r_vec.scale(C64::new(1.0, 0.0) - u_hat.dot(&u_conj)))
                        .add(&u_hat.cross(&u_conj).scale(i))
                        .scale(C64::new(2.0 * sh1 * sh1, 0.0)),
                );
            assemble_affine_state(&rho0, h_t, v_t)
        }
        PtRegime::Exceptional => {
            if params.varpi < 0.0 {
                return Err(NhError::InvalidParams {
                    reason: "exceptional-point closed form assumes varpi > 0".into(),
                });
            }
            let [rx, ry, rz] = params.bloch.vector();
            let wt = params.varpi * t;
            let denom = 1.0 + 2.0 * wt * (rz + wt * (1.0 + ry));
            if denom.abs() < 1e-14 {
                return Err(NhError::VanishingNorm { trace: denom });
            }
            let zeta = [
                rx / denom,
                (ry - 2.0 * wt * (rz + wt * (1.0 + ry))) / denom,
                (rz + 2.0 * wt * (1.0 + ry)) / denom,
            ];
            let matrix = ComplexMatrix::from_slice(
                2,
                2,
                &[
                    C64::new(0.5 * (1.0 + zeta[2]), 0.0),
                    C64::new(0.5 * zeta[0], -0.5 * zeta[1]),
                    C64::new(0.5 * zeta[0], 0.5 * zeta[1]),
                    C64::new(0.5 * (1.0 - zeta[2]), 0.0),
                ],
            );
            Ok(DensityMatrix::validate(matrix)?)
        }
    }
}

/// Builds `(4 rho_0 + c I + q . sigma) / (4 + 2c)` from the closed-form
/// scalars, checking that they came out real.
fn assemble_affine_state(rho0: &DensityMatrix, c: C64, q: CVec3) -> Result<DensityMatrix, NhError> {
    let c = realize(c, "the normalization scalar")?;
    let q = [
        realize(q.0[0], "q_x")?,
        realize(q.0[1], "q_y")?,
        realize(q.0[2], "q_z")?,
    ];
    let denom = 4.0 + 2.0 * c;
    if denom.abs() < 1e-14 {
        return Err(NhError::VanishingNorm { trace: denom });
    }
    let numer = &(&rho0.matrix().scale_real(4.0) + &ComplexMatrix::identity(2).scale_real(c))
        + &pauli_dot(q);
    Ok(DensityMatrix::validate(numer.scale_real(1.0 / denom))?)
}

/// Smallest eigenvalue of the closed-form evolved state at every grid point.
pub fn kappa_min_profile(params: &PTQubitParams, times: &[f64]) -> Result<Vec<f64>, NhError> {
    times
        .iter()
        .map(|&t| Ok(pt_closed_form(params, t)?.kappa_min()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::linspace;
    use std::f64::consts::FRAC_PI_4;

    fn fig3_params(eta_over_varpi: f64) -> PTQubitParams {
        let bloch = BlochParams::new(0.5, FRAC_PI_4, FRAC_PI_4).unwrap();
        PTQubitParams::new(1.0, eta_over_varpi, bloch).unwrap()
    }

    #[test]
    fn split_of_hermitian_generator_has_zero_gamma() {
        let nh = split_hermitian(sigma_x()).unwrap();
        assert_eq!(nh.gamma_op().max_abs(), 0.0);
        assert!(nh.is_hermitian());
    }

    #[test]
    fn split_of_pt_generator() {
        let nh = fig3_params(0.5).hamiltonian();
        assert!((nh.h() - &sigma_x()).max_abs() < 1e-15);
        assert!((nh.gamma_op() - &sigma_z().scale_real(0.5)).max_abs() < 1e-15);
        assert!(
            (&(nh.h() + &nh.gamma_op().scale(C64::new(0.0, 1.0))) - nh.h_tilde()).max_abs() < 1e-15
        );
    }

    #[test]
    fn evolution_starts_at_the_initial_state() {
        let params = fig3_params(0.5);
        let rho0 = params.initial_state();
        let evolved = evolve_nonhermitian(&params.hamiltonian(), &rho0, 0.0).unwrap();
        assert!(evolved.trace_distance(&rho0).unwrap() < 1e-13);
    }

    #[test]
    fn hermitian_limit_preserves_the_spectrum() {
        let nh = split_hermitian(sigma_x()).unwrap();
        let rho0 = fig3_params(0.0).initial_state();
        let evolved = evolve_nonhermitian(&nh, &rho0, 1.3).unwrap();
        for (a, b) in rho0.eigenvalues().iter().zip(evolved.eigenvalues()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_propagator_in_all_phases() {
        for ratio in [0.5, 1.0 - 1e-6, 1.0, 1.0 + 1e-6, 2.0] {
            let params = fig3_params(ratio);
            let nh = params.hamiltonian();
            let rho0 = params.initial_state();
            let mut worst: f64 = 0.0;
            for &t in &linspace(0.0, 5.0, 101) {
                let closed = pt_closed_form(&params, t).unwrap();
                let generic = evolve_nonhermitian(&nh, &rho0, t).unwrap();
                worst = worst.max(closed.trace_distance(&generic).unwrap());
            }
            assert!(worst < 1e-9, "ratio {ratio}: worst distance {worst:.3e}");
        }
    }

    #[test]
    fn closed_form_is_continuous_across_the_exceptional_point() {
        let below = fig3_params(1.0 - 1e-6);
        let at = fig3_params(1.0);
        let above = fig3_params(1.0 + 1e-6);
        for &t in &[0.5, 1.5, 3.0] {
            let b = pt_closed_form(&below, t).unwrap();
            let e = pt_closed_form(&at, t).unwrap();
            let a = pt_closed_form(&above, t).unwrap();
            assert!(b.trace_distance(&e).unwrap() < 1e-4);
            assert!(a.trace_distance(&e).unwrap() < 1e-4);
        }
    }

    #[test]
    fn equation_of_motion_residual_is_small_on_fine_grids() {
        for ratio in [0.5, 1.0, 2.0] {
            let params = fig3_params(ratio);
            let nh = params.hamiltonian();
            let traj =
                nh_trajectory(&nh, &params.initial_state(), &linspace(0.0, 5.0, 1001)).unwrap();
            let residual = equation_of_motion_residual(&nh, &traj);
            assert!(residual < 1e-5, "ratio {ratio}: residual {residual:.3e}");
        }
    }

    #[test]
    fn speed_bound_closed_forms() {
        let hermitian = split_hermitian(sigma_x()).unwrap();
        assert!((nh_speed_bound(&hermitian) - 2.0).abs() < 1e-12);

        // 2(varpi + 2 eta + eta) from the Pauli norms
        let params = fig3_params(0.5);
        let bound = nh_speed_bound(&params.hamiltonian());
        assert!((bound - (2.0 * 1.0 + 6.0 * 0.5)).abs() < 1e-12);
    }

    #[test]
    fn speed_bound_dominates_measured_speeds() {
        for ratio in [0.5, 1.0, 2.0] {
            let params = fig3_params(ratio);
            let nh = params.hamiltonian();
            let traj =
                nh_trajectory(&nh, &params.initial_state(), &linspace(0.0, 5.0, 201)).unwrap();
            let bound = nh_speed_bound(&nh);
            for &s in traj.speeds() {
                assert!(
                    bound + 1e-9 >= s,
                    "ratio {ratio}: bound {bound} < speed {s}"
                );
            }
        }
    }

    #[test]
    fn hermitian_limit_gives_zero_qsl() {
        let nh = split_hermitian(sigma_x()).unwrap();
        let rho0 = fig3_params(0.0).initial_state();
        let params = EntropyParams::generic(0.5, 0.5).unwrap();
        let report = nh_qsl(&nh, &rho0, &linspace(0.0, 3.0, 61), &params).unwrap();
        assert_eq!(report.tau_qsl, 0.0);
        assert_eq!(report.lhs, 0.0);
    }

    #[test]
    fn unbroken_phase_is_periodic() {
        let params = fig3_params(0.5);
        let nh = params.hamiltonian();
        let rho0 = params.initial_state();
        let period = std::f64::consts::PI / (1.0f64 - 0.25).sqrt();
        for &t in &[0.3, 1.1, 2.7] {
            let a = evolve_nonhermitian(&nh, &rho0, t).unwrap();
            let b = evolve_nonhermitian(&nh, &rho0, t + period).unwrap();
            assert!(a.trace_distance(&b).unwrap() < 1e-8);
        }
    }

    #[test]
    fn exceptional_point_flows_to_the_negative_y_pole() {
        let params = fig3_params(1.0);
        let state = pt_closed_form(&params, 1e3).unwrap();
        let m = state.matrix();
        let zeta_x = 2.0 * m.get(0, 1).re;
        let zeta_y = -2.0 * m.get(0, 1).im;
        let zeta_z = m.get(0, 0).re - m.get(1, 1).re;
        assert!(zeta_x.abs() < 1e-4);
        assert!((zeta_y + 1.0).abs() < 1e-2);
        assert!(zeta_z.abs() < 1e-2);
    }

    #[test]
    fn kappa_profile_of_the_unbroken_phase_oscillates_without_vanishing() {
        let params = fig3_params(0.5);
        let kappas = kappa_min_profile(&params, &linspace(0.0, 10.0, 401)).unwrap();
        assert!(kappas.iter().all(|&k| k > 1e-4));
        let max = kappas.iter().cloned().fold(0.0, f64::max);
        let min = kappas.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max - min > 0.05, "profile should oscillate");
    }
}

use super::{ComplexMatrix, LinalgError, C64, TOL_EIGEN_NEG, TOL_HERM, TOL_TRACE};

/// Bloch-sphere parametrization of a single-qubit state,
/// `rho = (I + r_vec . sigma_vec) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams {
    r: f64,
    theta: f64,
    phi: f64,
}

impl BlochParams {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self, LinalgError> {
        if !(0.0..=1.0).contains(&r) {
            return Err(LinalgError::InvalidBloch {
                name: "r",
                value: r,
            });
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(LinalgError::InvalidBloch {
                name: "theta",
                value: theta,
            });
        }
        if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
            return Err(LinalgError::InvalidBloch {
                name: "phi",
                value: phi,
            });
        }
        Ok(Self { r, theta, phi })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Cartesian Bloch vector (r_x, r_y, r_z).
    pub fn vector(&self) -> [f64; 3] {
        [
            self.r * self.theta.sin() * self.phi.cos(),
            self.r * self.theta.sin() * self.phi.sin(),
            self.r * self.theta.cos(),
        ]
    }
}

/// Which tensor factor a partial trace keeps. Subsystem A is the slower
/// (leftmost) factor: a bipartite index reads `i = a * d_b + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Hermitian, positive-semidefinite, trace-one matrix. Construction goes
/// through [`DensityMatrix::validate`] (or a structural constructor), so a
/// value of this type is always a physical state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates a candidate state: square, Hermitian within 1e-10, trace one
    /// within 1e-10, eigenvalues >= -1e-10. Negative eigenvalues within the
    /// tolerance are clamped to zero (and the state renormalized) so that
    /// downstream spectral functions never see a negative probability.
    pub fn validate(matrix: ComplexMatrix) -> Result<Self, LinalgError> {
        if !matrix.is_square() {
            return Err(LinalgError::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        matrix.check_finite()?;
        let dev = matrix.hermitian_deviation();
        if dev > TOL_HERM {
            return Err(LinalgError::NotHermitian { deviation: dev });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TOL_TRACE || trace.im.abs() > TOL_TRACE {
            return Err(LinalgError::TraceNotOne { trace: trace.re });
        }
        let (eigenvalues, vectors) = matrix.hermitian_eigen()?;
        let smallest = eigenvalues[0];
        if smallest < TOL_EIGEN_NEG {
            return Err(LinalgError::NegativeEigenvalue { value: smallest });
        }
        let dim = matrix.nrows();
        if smallest < 0.0 {
            let clamped: Vec<f64> = eigenvalues.iter().map(|&l| l.max(0.0)).collect();
            let total: f64 = clamped.iter().sum();
            let diag: Vec<C64> = clamped.iter().map(|&l| C64::new(l / total, 0.0)).collect();
            let rebuilt = &(&vectors * &ComplexMatrix::from_diagonal(&diag)) * &vectors.adjoint();
            return Ok(Self {
                dim,
                matrix: rebuilt,
            });
        }
        Ok(Self { dim, matrix })
    }

    /// `(I + r_vec . sigma_vec) / 2`; eigenvalues `(1 +- r)/2`.
    pub fn from_bloch(bloch: &BlochParams) -> Self {
        let [x, y, z] = bloch.vector();
        let matrix = ComplexMatrix::from_slice(
            2,
            2,
            &[
                C64::new(0.5 * (1.0 + z), 0.0),
                C64::new(0.5 * x, -0.5 * y),
                C64::new(0.5 * x, 0.5 * y),
                C64::new(0.5 * (1.0 - z), 0.0),
            ],
        );
        Self { dim: 2, matrix }
    }

    /// Projector onto a (normalized copy of a) state vector.
    pub fn pure(state: &[C64]) -> Result<Self, LinalgError> {
        if state.is_empty() {
            return Err(LinalgError::EmptyVector);
        }
        let norm_sq: f64 = state.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(LinalgError::EmptyVector);
        }
        let dim = state.len();
        let matrix = ComplexMatrix::from_fn(dim, dim, |i, j| state[i] * state[j].conj() / norm_sq);
        Ok(Self { dim, matrix })
    }

    /// Basis-state projector |index><index|.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        matrix.set(index, index, C64::new(1.0, 0.0));
        Self { dim, matrix }
    }

    /// The maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let matrix = ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64);
        Self { dim, matrix }
    }

    /// Mixture of states with the given weights (weights must sum to ~1; the
    /// result is validated).
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self, LinalgError> {
        let dim = states[0].dim;
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (w, s) in weights.iter().zip(states) {
            acc = &acc + &s.matrix.scale_real(*w);
        }
        Self::validate(acc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Spectrum, ascending. Clamped at zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix
            .hermitian_eigen()
            .expect("validated state is Hermitian")
            .0
            .into_iter()
            .map(|l| l.max(0.0))
            .collect()
    }

    /// Smallest eigenvalue of the state, >= 0.
    pub fn kappa_min(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Trace distance `|| a - b ||_1`, in [0, 2].
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64, LinalgError> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let diff = &self.matrix - &other.matrix;
        let vals = diff.hermitian_eigenvalues()?;
        Ok(vals.iter().map(|l| l.abs()).sum())
    }

    /// Reduce a bipartite state (`dim = d_a * d_b`) to one subsystem.
    pub fn partial_trace(
        &self,
        d_a: usize,
        d_b: usize,
        keep: Subsystem,
    ) -> Result<DensityMatrix, LinalgError> {
        if d_a * d_b != self.dim {
            return Err(LinalgError::DimensionMismatch {
                left: d_a * d_b,
                right: self.dim,
            });
        }
        let reduced = partial_trace_matrix(&self.matrix, d_a, d_b, keep);
        Self::validate(reduced)
    }
}

/// Partial trace of an arbitrary operator on a `d_a * d_b` space. Subsystem A
/// is the leftmost tensor factor.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    keep: Subsystem,
) -> ComplexMatrix {
    match keep {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(d_a, d_a);
            for a in 0..d_a {
                for a2 in 0..d_a {
                    let mut acc = C64::new(0.0, 0.0);
                    for b in 0..d_b {
                        acc += m.get(a * d_b + b, a2 * d_b + b);
                    }
                    out.set(a, a2, acc);
                }
            }
            out
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(d_b, d_b);
            for b in 0..d_b {
                for b2 in 0..d_b {
                    let mut acc = C64::new(0.0, 0.0);
                    for a in 0..d_a {
                        acc += m.get(a * d_b + b, a * d_b + b2);
                    }
                    out.set(b, b2, acc);
                }
            }
            out
        }
    }
}

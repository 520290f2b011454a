use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use super::{LinalgError, C64};

/// Dense complex matrix. Thin wrapper around `nalgebra::DMatrix<Complex<f64>>`
/// exposing the operations the rest of the crate needs; entries are finite by
/// construction when built through [`ComplexMatrix::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from a row-major entry list, rejecting NaN/Inf entries
    /// and count mismatches.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                found: entries.len(),
            });
        }
        let m = DMatrix::from_row_slice(rows, cols, &entries);
        let out = Self { inner: m };
        out.check_finite()?;
        Ok(out)
    }

    /// Row-major construction from a slice; panics on count mismatch and
    /// accepts the entries as-is. Intended for literals in this crate.
    pub fn from_slice(rows: usize, cols: usize, entries: &[C64]) -> Self {
        Self {
            inner: DMatrix::from_row_slice(rows, cols, entries),
        }
    }

    /// Row-major construction from real entries.
    pub fn from_real_slice(rows: usize, cols: usize, entries: &[f64]) -> Self {
        let data: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_slice(rows, cols, &data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = DMatrix::zeros(diag.len(), diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        Self { inner: m }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        Self {
            inner: DMatrix::from_fn(rows, cols, f),
        }
    }

    pub(crate) fn from_dmatrix(inner: DMatrix<C64>) -> Self {
        Self { inner }
    }

    pub(crate) fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn nrows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.inner.nrows() == self.inner.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.inner[(row, col)] = value;
    }

    pub fn check_finite(&self) -> Result<(), LinalgError> {
        for col in 0..self.ncols() {
            for row in 0..self.nrows() {
                let z = self.inner[(row, col)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(LinalgError::NonFiniteEntry { row, col });
                }
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.inner
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            inner: self.inner.map(|z| z.conj()),
        }
    }

    pub fn trace(&self) -> C64 {
        self.inner.diagonal().iter().sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            inner: self.inner.map(|z| z * factor),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self {
            inner: self.inner.map(|z| z * factor),
        }
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max entrywise |M - M^+|; zero for exactly Hermitian matrices.
    pub fn hermitian_deviation(&self) -> f64 {
        let adj = self.adjoint();
        (&(self.clone()) - &adj).max_abs()
    }

    /// Induced 1-norm (max column absolute sum); used by the expm scaling.
    pub fn induced_one_norm(&self) -> f64 {
        (0..self.ncols())
            .map(|c| self.inner.column(c).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Kronecker product, `self` as the slower (leftmost) factor.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        Self {
            inner: self.inner.kronecker(&other.inner),
        }
    }

    /// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and
    /// the matching eigenvector columns. The matrix is symmetrized before the
    /// solve so the result is exactly that of `(M + M^+)/2`. Backed by a
    /// cyclic complex Jacobi iteration, which stays robust on the sparse,
    /// highly degenerate spectra the spin-chain commutators produce.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.nrows(),
                cols: self.ncols(),
            });
        }
        let dev = self.hermitian_deviation();
        if dev > super::TOL_HERM {
            return Err(LinalgError::NotHermitian { deviation: dev });
        }
        let sym = (&self.inner + self.inner.adjoint()).map(|z| z * 0.5);
        let (raw_values, raw_vectors) = jacobi_hermitian(sym);
        let n = raw_values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&k| raw_values[k]).collect();
        let mut vectors = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &raw_vectors.column(src));
        }
        Ok((eigenvalues, ComplexMatrix { inner: vectors }))
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        Ok(self.hermitian_eigen()?.0)
    }

    /// Singular values (ascending), computed as sqrt of the eigenvalues of
    /// M^+ M. Cross terms like K rho K-dot^+ are not normal, so norms must
    /// never be taken from |eigenvalues(M)|.
    pub fn singular_values(&self) -> Vec<f64> {
        let gram = self.inner.adjoint() * &self.inner;
        let se = gram.symmetric_eigen();
        let mut vals: Vec<f64> = se.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    /// Schatten p-norm (Tr[(M^+ M)^{p/2}])^{1/p}; `p = f64::INFINITY` gives
    /// the operator norm.
    pub fn schatten_norm(&self, p: f64) -> Result<f64, LinalgError> {
        if p.is_nan() || p < 1.0 {
            return Err(LinalgError::InvalidOrder { p });
        }
        let sv = self.singular_values();
        let largest = sv.last().copied().unwrap_or(0.0);
        if p.is_infinite() {
            return Ok(largest);
        }
        if largest == 0.0 {
            return Ok(0.0);
        }
        if p == 1.0 {
            return Ok(sv.iter().sum());
        }
        // factor out the largest singular value to keep s^p in range
        let sum: f64 = sv.iter().map(|&s| (s / largest).powf(p)).sum();
        Ok(largest * sum.powf(1.0 / p))
    }

    /// Trace norm, sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        self.singular_values().iter().sum()
    }

    /// Trace norm of a Hermitian matrix via its eigenvalues, which coincide
    /// with the singular values up to sign. Avoids the half-precision loss
    /// the Gram route suffers on small singular values; only valid when the
    /// operand is Hermitian.
    pub fn trace_norm_hermitian(&self) -> Result<f64, LinalgError> {
        Ok(self.hermitian_eigenvalues()?.iter().map(|l| l.abs()).sum())
    }

    /// Operator norm, largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.singular_values().last().copied().unwrap_or(0.0)
    }
}

/// Cyclic complex Jacobi eigensolver for a Hermitian matrix. Returns
/// unsorted eigenvalues and the unitary of eigenvector columns.
fn jacobi_hermitian(mut a: DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = a.nrows();
    let mut v: DMatrix<C64> = DMatrix::identity(n, n);
    if n <= 1 {
        let vals = (0..n).map(|k| a[(k, k)].re).collect();
        return (vals, v);
    }
    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| 2.0 * a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_phase = phase * s;
                // A <- U^+ A U with U = [[c, s e^{i th}], [-s e^{-i th}, c]]
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c - aqj * s_phase;
                    a[(q, j)] = apj * s_phase.conj() + aqj * c;
                }
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * s_phase.conj();
                    a[(i, q)] = aip * s_phase + aiq * c;
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * s_phase.conj();
                    v[(i, q)] = vip * s_phase + viq * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }
    let vals = (0..n).map(|k| a[(k, k)].re).collect();
    (vals, v)
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix {
            inner: -&self.inner,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{sigma_x, sigma_z};
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        let err = ComplexMatrix::new(1, 2, vec![C64::new(1.0, 0.0), C64::new(f64::NAN, 0.0)]);
        assert!(matches!(err, Err(LinalgError::NonFiniteEntry { .. })));
    }

    #[test]
    fn diagonal_eigenvalues_come_back_sorted() {
        let m =
            ComplexMatrix::from_real_slice(3, 3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0]);
        let (vals, _) = m.hermitian_eigen().unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let (vals, _) = sigma_x().hermitian_eigen().unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn schatten_norms_of_sigma_z() {
        let z = sigma_z();
        assert!((z.schatten_norm(1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((z.schatten_norm(f64::INFINITY).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn schatten_rejects_small_orders() {
        assert!(matches!(
            sigma_z().schatten_norm(0.5),
            Err(LinalgError::InvalidOrder { .. })
        ));
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let m = ComplexMatrix::from_real_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            m.hermitian_eigen(),
            Err(LinalgError::NotHermitian { .. })
        ));
    }
}

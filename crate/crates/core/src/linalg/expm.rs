use nalgebra::DMatrix;

use super::{ComplexMatrix, LinalgError, C64};

// Pade-13 backward-error threshold and numerator/denominator coefficients
// (Higham, "The scaling and squaring method for the matrix exponential
// revisited", Alg. 3.1).
const THETA_13: f64 = 5.371_920_351_148_152;
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

const TOL_STRUCTURE: f64 = 1e-12;

/// Matrix exponential. Hermitian and skew-Hermitian inputs are handled by
/// eigendecomposition (exact for the unitary limit); everything else goes
/// through Pade-13 scaling and squaring, which stays valid at the exceptional
/// point where the generator is defective and diagonalization fails.
pub fn matrix_exponential(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if !a.is_finite() {
        return Err(LinalgError::Overflow);
    }
    let adj = a.adjoint();
    if (a - &adj).max_abs() <= TOL_STRUCTURE {
        return exp_via_spectrum(a, false);
    }
    if (a + &adj).max_abs() <= TOL_STRUCTURE {
        return exp_via_spectrum(a, true);
    }
    exp_pade(a)
}

/// Hermitian (`skew = false`) or skew-Hermitian (`skew = true`) fast path.
fn exp_via_spectrum(a: &ComplexMatrix, skew: bool) -> Result<ComplexMatrix, LinalgError> {
    // for skew-Hermitian A, iA is Hermitian and exp(A) = V e^{-i lambda} V^+
    let herm = if skew {
        a.scale(C64::new(0.0, 1.0))
    } else {
        a.clone()
    };
    let (values, vectors) = herm.hermitian_eigen()?;
    let phases: Vec<C64> = values
        .iter()
        .map(|&l| {
            if skew {
                C64::new(0.0, -l).exp()
            } else {
                C64::new(l, 0.0).exp()
            }
        })
        .collect();
    let diag = ComplexMatrix::from_diagonal(&phases);
    let result = &(&vectors * &diag) * &vectors.adjoint();
    if !result.is_finite() {
        return Err(LinalgError::Overflow);
    }
    Ok(result)
}

fn exp_pade(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let n = a.nrows();
    let norm = a.induced_one_norm();
    let squarings = if norm > THETA_13 {
        ((norm / THETA_13).log2().ceil() as i32).max(0)
    } else {
        0
    };
    let scaled = a.as_dmatrix().map(|z| z / 2f64.powi(squarings));

    let identity: DMatrix<C64> = DMatrix::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let w1 = a6.map(|z| z * B13[13]) + a4.map(|z| z * B13[11]) + a2.map(|z| z * B13[9]);
    let w2 = a6.map(|z| z * B13[7])
        + a4.map(|z| z * B13[5])
        + a2.map(|z| z * B13[3])
        + identity.map(|z| z * B13[1]);
    let u = &scaled * (&a6 * w1 + w2);

    let z1 = a6.map(|z| z * B13[12]) + a4.map(|z| z * B13[10]) + a2.map(|z| z * B13[8]);
    let v = &a6 * z1
        + a6.map(|z| z * B13[6])
        + a4.map(|z| z * B13[4])
        + a2.map(|z| z * B13[2])
        + identity.map(|z| z * B13[0]);

    let numer = &v + &u;
    let denom = &v - &u;
    let mut r = denom.lu().solve(&numer).ok_or(LinalgError::Overflow)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    let result = ComplexMatrix::from_dmatrix(r);
    if !result.is_finite() {
        return Err(LinalgError::Overflow);
    }
    Ok(result)
}

//! Seeded random inputs for tests, benchmarks, and the phase-diagram
//! scenario: Hilbert-Schmidt random states, Haar-ish unitaries, projector
//! sets. Everything is generic over the RNG so callers control determinism.

use rand::Rng;

use crate::linalg::{ComplexMatrix, DensityMatrix, C64};

/// Standard normal via Box-Muller.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Complex standard normal (Ginibre entry).
pub fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(standard_normal(rng), standard_normal(rng))
}

/// Square Ginibre matrix.
pub fn random_ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let entries: Vec<C64> = (0..dim * dim).map(|_| standard_complex(rng)).collect();
    ComplexMatrix::from_slice(dim, dim, &entries)
}

/// Hilbert-Schmidt random density matrix `G G^+ / Tr(G G^+)`; full rank
/// almost surely.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = random_ginibre(dim, rng);
    let gram = &g * &g.adjoint();
    let trace = gram.trace().re;
    DensityMatrix::validate(gram.scale_real(1.0 / trace)).expect("Gram matrix is a valid state")
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let vec: Vec<C64> = (0..dim).map(|_| standard_complex(rng)).collect();
    DensityMatrix::pure(&vec).expect("random vector is nonzero")
}

/// Random Hermitian matrix `(G + G^+)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_ginibre(dim, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Random unitary from the QR factorization of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_ginibre(dim, rng);
    let qr = g.as_dmatrix().clone().qr();
    ComplexMatrix::from_dmatrix(qr.q())
}

/// Complete set of rank-partitioned projectors built from the column groups
/// of a random unitary; they sum to the identity exactly up to rounding.
pub fn random_projectors<R: Rng + ?Sized>(
    dim: usize,
    blocks: usize,
    rng: &mut R,
) -> Vec<ComplexMatrix> {
    let blocks = blocks.clamp(1, dim);
    let u = random_unitary(dim, rng);
    let mut projectors = vec![ComplexMatrix::zeros(dim, dim); blocks];
    for col in 0..dim {
        let block = col % blocks;
        let column: Vec<C64> = (0..dim).map(|row| u.get(row, col)).collect();
        let outer = ComplexMatrix::from_fn(dim, dim, |i, j| column[i] * column[j].conj());
        projectors[block] = &projectors[block] + &outer;
    }
    projectors
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_density_is_valid_and_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [2, 3, 5] {
            let rho = random_density(dim, &mut rng);
            assert!(rho.kappa_min() > 1e-6);
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unitary(4, &mut rng);
        let res = (&(&u * &u.adjoint()) - &ComplexMatrix::identity(4)).max_abs();
        assert!(res < 1e-12);
    }

    #[test]
    fn projectors_resolve_the_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let projectors = random_projectors(4, 2, &mut rng);
        let mut acc = ComplexMatrix::zeros(4, 4);
        for p in &projectors {
            // each block is idempotent
            assert!((&(p * p) - p).max_abs() < 1e-12);
            acc = &acc + p;
        }
        assert!((&acc - &ComplexMatrix::identity(4)).max_abs() < 1e-12);
    }
}

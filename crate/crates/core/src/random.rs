//! Seeded sampling of states and local unitaries.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::C64;
use crate::qstate::{DensityMatrix, PureState};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for `(seed, stream)` pairs.
pub fn substream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state: normalized complex Gaussian vector.
pub fn sample_pure_state<R: Rng + ?Sized>(rng: &mut R, num_qubits: usize) -> PureState {
    let dim = 1usize << num_qubits;
    let v = DVector::from_fn(dim, |_, _| complex_gaussian(rng));
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

pub fn random_pure_state(num_qubits: usize, seed: u64) -> PureState {
    sample_pure_state(&mut rng_from_seed(seed), num_qubits)
}

/// Haar-random SU(2) element as ZYZ angles `[α, β, γ]`.
pub fn sample_su2<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let tau = std::f64::consts::TAU;
    let alpha = rng.random::<f64>() * tau;
    let gamma = rng.random::<f64>() * tau;
    // Haar density in β is ∝ sin β
    let beta = (1.0 - 2.0 * rng.random::<f64>()).acos();
    [alpha, beta, gamma]
}

pub fn random_su2(seed: u64) -> [f64; 3] {
    sample_su2(&mut rng_from_seed(seed))
}

/// Mixed state `G G† / tr(G G†)` from a `2^M x k` Ginibre matrix; `rank`
/// bounds the rank of the result.
pub fn sample_density<R: Rng + ?Sized>(rng: &mut R, num_qubits: usize, rank: usize) -> DensityMatrix {
    let dim = 1usize << num_qubits;
    let g = DMatrix::from_fn(dim, rank.max(1), |_, _| complex_gaussian(rng));
    let mut m = &g * g.adjoint();
    let tr = m.trace().re;
    m /= C64::new(tr, 0.0);
    // exact Hermitian symmetrization of rounding noise
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(m).expect("Ginibre construction is a density matrix")
}

pub fn sample_local_unitaries<R: Rng + ?Sized>(rng: &mut R, num_qubits: usize) -> Vec<[f64; 3]> {
    (0..num_qubits).map(|_| sample_su2(rng)).collect()
}

/// Uniform point on the probability simplex with `n` vertices.
pub fn sample_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bloch_vector, purity};

    #[test]
    fn deterministic_under_seed() {
        assert_eq!(random_pure_state(3, 7), random_pure_state(3, 7));
        assert_eq!(random_su2(11), random_su2(11));
        assert_ne!(random_pure_state(3, 7), random_pure_state(3, 8));
    }

    #[test]
    fn normalized_output() {
        for seed in 0..20 {
            let s = random_pure_state(2, seed);
            assert!((s.amplitudes().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_marginal_purity_mean() {
        // E[tr ρ_A²] = (dA + dB)/(dA dB + 1) = 4/5 for two qubits
        let mut rng = rng_from_seed(2024);
        let n = 10_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let s = sample_pure_state(&mut rng, 2);
            let b = bloch_vector(&s.projector(), 0).unwrap();
            // one-qubit purity = (1 + |b|²)/2
            acc += 0.5 * (1.0 + b.norm_squared());
        }
        let mean = acc / n as f64;
        assert!((mean - 0.8).abs() < 0.02, "mean purity {mean}");
    }

    #[test]
    fn density_samples_are_valid() {
        let mut rng = rng_from_seed(1);
        for rank in 1..=4 {
            let rho = sample_density(&mut rng, 2, rank);
            assert!(rho.rank(1e-10) <= rank);
            assert!(purity(&rho) <= 1.0 + 1e-12);
        }
        let w = sample_simplex(&mut rng, 4);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

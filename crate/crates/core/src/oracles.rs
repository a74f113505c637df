//! Closed-form ground truth for two-qubit state families: Bell-diagonal and
//! Werner states, the Wootters concurrence and the partial-transpose test.
//!
//! Bell labels follow `ψ± = (|00> ± |11>)/√2` and `φ± = (|01> ± |10>)/√2`,
//! the reverse of the more common Φ/Ψ naming.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};
use crate::qstate::{DensityMatrix, PauliAxis, PureState};

pub const SIMPLEX_TOL: f64 = 1e-12;
pub const TETRA_TOL: f64 = 1e-10;
pub const PPT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellLabel {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] =
        [BellLabel::PsiPlus, BellLabel::PsiMinus, BellLabel::PhiPlus, BellLabel::PhiMinus];

    /// Eigenvalues of `σ_i ⊗ σ_i` for `i = x, y, z`.
    pub fn correlation_signs(self) -> [f64; 3] {
        match self {
            BellLabel::PsiPlus => [1.0, -1.0, 1.0],
            BellLabel::PsiMinus => [-1.0, 1.0, 1.0],
            BellLabel::PhiPlus => [1.0, 1.0, -1.0],
            BellLabel::PhiMinus => [-1.0, -1.0, -1.0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellLabel::PsiPlus => "psi+",
            BellLabel::PsiMinus => "psi-",
            BellLabel::PhiPlus => "phi+",
            BellLabel::PhiMinus => "phi-",
        }
    }
}

pub fn bell_state(label: BellLabel) -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = match label {
        BellLabel::PsiPlus => [h, 0.0, 0.0, h],
        BellLabel::PsiMinus => [h, 0.0, 0.0, -h],
        BellLabel::PhiPlus => [0.0, h, h, 0.0],
        BellLabel::PhiMinus => [0.0, h, -h, 0.0],
    };
    PureState::from_real(&amps).expect("Bell states are normalized")
}

/// The four Bell states in [`BellLabel::ALL`] order.
pub fn bell_basis() -> [PureState; 4] {
    BellLabel::ALL.map(bell_state)
}

/// Weights `p_α` on the Bell projectors, a point of the probability simplex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BdWeights([f64; 4]);

impl BdWeights {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if let Some(&bad) = p.iter().find(|&&x| !(x >= -SIMPLEX_TOL)) {
            return Err(Error::BadWeights { reason: format!("negative weight {bad}") });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::BadWeights { reason: format!("weights sum to {sum}") });
        }
        Ok(Self(p))
    }

    pub fn weights(&self) -> [f64; 4] {
        self.0
    }

    /// `c_i = Σ_α p_α s_α,i` with `s_α` the correlation signs of each Bell state.
    pub fn correlations(&self) -> BdCorrelationVector {
        let mut c = [0.0; 3];
        for (p, label) in self.0.iter().zip(BellLabel::ALL) {
            for (ci, s) in c.iter_mut().zip(label.correlation_signs()) {
                *ci += p * s;
            }
        }
        BdCorrelationVector(c)
    }

    pub fn max_weight(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Correlation vector `(c1, c2, c3)` inside the tetrahedron spanned by the
/// Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BdCorrelationVector([f64; 3]);

impl BdCorrelationVector {
    pub fn new(c: [f64; 3]) -> Result<Self> {
        let candidate = Self(c);
        let worst = candidate.raw_weights().iter().copied().fold(f64::INFINITY, f64::min);
        if worst < -TETRA_TOL / 4.0 || c.iter().any(|x| !x.is_finite()) {
            return Err(Error::OutsideTetrahedron { c, violation: -4.0 * worst });
        }
        Ok(candidate)
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    fn raw_weights(&self) -> [f64; 4] {
        BellLabel::ALL.map(|label| {
            let s = label.correlation_signs();
            0.25 * (1.0 + s[0] * self.0[0] + s[1] * self.0[1] + s[2] * self.0[2])
        })
    }

    /// `p_α = ¼ (1 + s_α · c)`, clamped onto the simplex.
    pub fn weights(&self) -> BdWeights {
        let mut p = self.raw_weights().map(|x| x.max(0.0));
        let sum: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= sum);
        BdWeights(p)
    }

    /// Inside the octahedron `|c1| + |c2| + |c3| <= 1`, i.e. every Bell weight
    /// is at most ½.
    pub fn in_octahedron(&self, tol: f64) -> bool {
        self.0.iter().map(|x| x.abs()).sum::<f64>() <= 1.0 + tol
    }
}

/// `Σ_α p_α |b_α><b_α|` over an arbitrary ordered basis.
pub fn bd_state_in_basis(w: &BdWeights, basis: &[PureState; 4]) -> Result<DensityMatrix> {
    let projectors: Vec<DensityMatrix> = basis.iter().map(|b| b.projector()).collect();
    DensityMatrix::mixture(&w.0, &projectors)
}

pub fn bd_state(w: &BdWeights) -> DensityMatrix {
    bd_state_in_basis(w, &bell_basis()).expect("Bell mixtures are density matrices")
}

/// `¼ (I + Σ_i c_i σ_i ⊗ σ_i)`.
pub fn bd_from_c(c: &BdCorrelationVector) -> Result<DensityMatrix> {
    let mut m = DMatrix::<C64>::identity(4, 4);
    for axis in PauliAxis::ALL {
        let mut ss = DMatrix::<C64>::identity(4, 4);
        linalg::apply_1q_left(&mut ss, 2, 0, &axis.matrix());
        linalg::apply_1q_left(&mut ss, 2, 1, &axis.matrix());
        m += ss * C64::new(c.0[axis.index()], 0.0);
    }
    DensityMatrix::new(m * C64::new(0.25, 0.0))
}

/// `c_i = tr[ρ σ_i ⊗ σ_i]` of any two-qubit state.
pub fn bd_correlations(rho: &DensityMatrix) -> Result<[f64; 3]> {
    require_two_qubits(rho)?;
    let mut c = [0.0; 3];
    for axis in PauliAxis::ALL {
        let mut t = rho.entries().clone();
        linalg::apply_1q_left(&mut t, 2, 0, &axis.matrix());
        linalg::apply_1q_left(&mut t, 2, 1, &axis.matrix());
        c[axis.index()] = t.trace().re;
    }
    Ok(c)
}

/// Bell weights of `ρ` if it is diagonal in the Bell basis within `tol`.
pub fn bell_diagonal_weights(rho: &DensityMatrix, tol: f64) -> Option<[f64; 4]> {
    if rho.num_qubits() != 2 {
        return None;
    }
    let basis = bell_basis();
    let moved: Vec<DVector<C64>> = basis.iter().map(|b| rho.entries() * b.amplitudes()).collect();
    let mut p = [0.0; 4];
    for a in 0..4 {
        for b in 0..4 {
            let z = basis[a].amplitudes().dotc(&moved[b]);
            if a == b {
                p[a] = z.re;
            } else if z.norm() > tol {
                return None;
            }
        }
    }
    Some(p)
}

/// `2 Σ p_α² − 4 max_{ij|kl} (p_i p_j + p_k p_l)` over the three pairings.
pub fn bd_qcd(w: &BdWeights) -> f64 {
    let p = w.0;
    let squares: f64 = p.iter().map(|x| x * x).sum();
    let pairing = [p[0] * p[1] + p[2] * p[3], p[0] * p[2] + p[1] * p[3], p[0] * p[3] + p[1] * p[2]]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    2.0 * squares - 4.0 * pairing
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name: "p", value: p, min: 0.0, max: 1.0 })
    }
}

/// `(p/3, p/3, p/3, 1 − p)`: the `φ−` state carries weight `1 − p`.
pub fn werner_weights(p: f64) -> Result<BdWeights> {
    check_p(p)?;
    BdWeights::new([p / 3.0, p / 3.0, p / 3.0, 1.0 - p])
}

pub fn werner_state(p: f64) -> Result<DensityMatrix> {
    Ok(bd_state(&werner_weights(p)?))
}

/// `2 (1 − 4p/3)²`.
pub fn werner_qcd(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(2.0 * (1.0 - 4.0 * p / 3.0).powi(2))
}

/// `2 Θ(½ − p) (1 − 2p)²`, with `Θ(0) = 1` (both sides vanish at `p = ½`).
pub fn werner_ed(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(if p <= 0.5 { 2.0 * (1.0 - 2.0 * p).powi(2) } else { 0.0 })
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.num_qubits() != 2 {
        return Err(Error::NotTwoQubit { num_qubits: rho.num_qubits() });
    }
    Ok(())
}

/// Wootters concurrence `max(0, λ1 − λ2 − λ3 − λ4)`.
///
/// The `λ_i` are the eigenvalues of `sqrt(sqrt(ρ) ρ̃ sqrt(ρ))`, obtained here
/// as the singular values of `τ = Vᵀ (σ_y ⊗ σ_y) V` where `ρ = V V†` is the
/// scaled spectral factor. Unlike square roots of the eigenvalues of the
/// product, the singular values stay accurate for rank-deficient `ρ`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let (values, vectors) = linalg::hermitian_eigh(rho.entries());
    let scale = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        values.iter().map(|&l| C64::new(l.max(0.0).sqrt(), 0.0)),
    ));
    let v = vectors * scale;
    let mut yy = DMatrix::from_element(4, 4, ZERO);
    let y = PauliAxis::Y.matrix();
    for i in 0..4 {
        for j in 0..4 {
            yy[(i, j)] = y[i >> 1][j >> 1] * y[i & 1][j & 1];
        }
    }
    let tau = v.transpose() * yy * &v;
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// Transpose of the `qubit` tensor factor.
pub fn partial_transpose(rho: &DensityMatrix, qubit: usize) -> Result<DMatrix<C64>> {
    let m = rho.num_qubits();
    if qubit >= m {
        return Err(Error::QubitOutOfRange { qubit, num_qubits: m });
    }
    let mask = linalg::qubit_mask(m, qubit);
    let dim = rho.dim();
    let mut out = DMatrix::from_element(dim, dim, ZERO);
    for i in 0..dim {
        for j in 0..dim {
            let (ii, jj) = ((i & !mask) | (j & mask), (j & !mask) | (i & mask));
            out[(ii, jj)] = rho.entries()[(i, j)];
        }
    }
    Ok(out)
}

pub fn ppt_min_eigenvalue(rho: &DensityMatrix, qubit: usize) -> Result<f64> {
    let pt = partial_transpose(rho, qubit)?;
    Ok(*linalg::hermitian_eigenvalues(&pt).last().expect("non-empty spectrum"))
}

/// Positive partial transpose on `qubit`; for two qubits this is exactly
/// separability.
pub fn is_ppt(rho: &DensityMatrix, qubit: usize) -> Result<bool> {
    Ok(ppt_min_eigenvalue(rho, qubit)? >= -PPT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::purity;

    #[test]
    fn bell_definitions() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = bell_state(BellLabel::PsiPlus);
        assert!((a.amplitudes()[0].re - h).abs() < 1e-15 && (a.amplitudes()[3].re - h).abs() < 1e-15);
        let b = bell_state(BellLabel::PhiMinus);
        assert!((b.amplitudes()[1].re - h).abs() < 1e-15 && (b.amplitudes()[2].re + h).abs() < 1e-15);
        let basis = bell_basis();
        for i in 0..4 {
            for j in 0..4 {
                let ov = basis[i].amplitudes().dotc(basis[j].amplitudes()).norm();
                assert!((ov - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn correlation_signs_match_expectations() {
        for label in BellLabel::ALL {
            let c = bd_correlations(&bell_state(label).projector()).unwrap();
            for (x, s) in c.iter().zip(label.correlation_signs()) {
                assert!((x - s).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn bd_constructors() {
        let mm = bd_state(&BdWeights::new([0.25; 4]).unwrap());
        assert!(linalg::max_abs_diff(mm.entries(), DensityMatrix::maximally_mixed(2).entries()) < 1e-15);
        assert_eq!(BdWeights::new([0.25; 4]).unwrap().correlations().components(), [0.0; 3]);

        let pure = bd_state(&BdWeights::new([1.0, 0.0, 0.0, 0.0]).unwrap());
        let proj = bell_state(BellLabel::PsiPlus).projector();
        assert!(linalg::max_abs_diff(pure.entries(), proj.entries()) < 1e-15);

        let w = BdWeights::new([0.1, 0.2, 0.3, 0.4]).unwrap();
        let rho = bd_state(&w);
        let c = bd_correlations(&rho).unwrap();
        let c_vec = BdCorrelationVector::new(c).unwrap();
        let again = bd_from_c(&c_vec).unwrap();
        assert!(linalg::max_abs_diff(rho.entries(), again.entries()) < 1e-12);
        for (a, b) in c_vec.weights().weights().iter().zip(w.weights()) {
            assert!((a - b).abs() < 1e-12);
        }

        assert!(BdWeights::new([0.5, 0.6, 0.0, -0.1]).is_err());
        assert!(BdCorrelationVector::new([1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn bd_qcd_examples() {
        assert!((bd_qcd(&BdWeights::new([1.0, 0.0, 0.0, 0.0]).unwrap()) - 2.0).abs() < 1e-15);
        assert!(bd_qcd(&BdWeights::new([0.5, 0.5, 0.0, 0.0]).unwrap()).abs() < 1e-15);
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let expected = 2.0 * (1.0 - 4.0 * p / 3.0).powi(2);
            assert!((bd_qcd(&werner_weights(p).unwrap()) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn werner_examples() {
        let w0 = werner_state(0.0).unwrap();
        assert!((purity(&w0) - 1.0).abs() < 1e-15);
        assert!((bell_diagonal_weights(&w0, 1e-12).unwrap()[3] - 1.0).abs() < 1e-15);
        let w34 = werner_state(0.75).unwrap();
        assert!(linalg::max_abs_diff(w34.entries(), DensityMatrix::maximally_mixed(2).entries()) < 1e-15);
        assert!((purity(&werner_state(1.0).unwrap()) - 1.0 / 3.0).abs() < 1e-15);
        assert!((purity(&w34) - 0.25).abs() < 1e-15);
        assert!(werner_state(1.2).is_err());

        assert!(werner_qcd(0.75).unwrap().abs() < 1e-15);
        assert_eq!(werner_ed(0.75).unwrap(), 0.0);
        assert_eq!(werner_ed(0.0).unwrap(), 2.0);
        assert!((werner_qcd(0.3).unwrap() - 0.72).abs() < 1e-14);
        assert!((werner_ed(0.3).unwrap() - 0.32).abs() < 1e-14);
        assert_eq!(werner_ed(0.5).unwrap(), 0.0);
    }

    #[test]
    fn concurrence_of_pure_states_is_twice_the_determinant() {
        for seed in 0..20 {
            let s = crate::random::random_pure_state(2, seed);
            let a = s.amplitudes();
            let expected = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
            assert!((concurrence(&s.projector()).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn concurrence_examples() {
        for label in BellLabel::ALL {
            assert!((concurrence(&bell_state(label).projector()).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(concurrence(&DensityMatrix::maximally_mixed(2)).unwrap().abs() < 1e-12);
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let c = concurrence(&werner_state(p).unwrap()).unwrap();
            assert!((c - (1.0 - 2.0 * p).max(0.0)).abs() < 1e-7, "p={p} c={c}");
        }
        assert!(concurrence(&DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn ppt_examples() {
        let bell = bell_state(BellLabel::PsiPlus).projector();
        assert!((ppt_min_eigenvalue(&bell, 0).unwrap() + 0.5).abs() < 1e-14);
        assert!(!is_ppt(&bell, 0).unwrap());
        let mm = DensityMatrix::maximally_mixed(2);
        assert!((ppt_min_eigenvalue(&mm, 1).unwrap() - 0.25).abs() < 1e-15);
        assert!(is_ppt(&mm, 0).unwrap());
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            assert_eq!(is_ppt(&werner_state(p).unwrap(), 0).unwrap(), p >= 0.5, "p={p}");
        }
        assert!(ppt_min_eigenvalue(&mm, 2).is_err());
    }
}

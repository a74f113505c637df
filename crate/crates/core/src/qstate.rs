//! Validated state containers, Pauli operators on qubit subsystems and the
//! Hilbert–Schmidt distance.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
//! computational-basis index. Every module in the crate uses this convention.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, C64, I, ONE, ZERO};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const BLOCH_TOL: f64 = 1e-10;
pub const IMAG_TOL: f64 = 1e-8;

fn qubits_for_dim(dim: usize) -> Option<usize> {
    (dim >= 2 && dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

fn check_qubit(qubit: usize, num_qubits: usize) -> Result<()> {
    if qubit < num_qubits {
        Ok(())
    } else {
        Err(Error::QubitOutOfRange { qubit, num_qubits })
    }
}

/// Normalized state vector on `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: DVector<C64>,
}

impl PureState {
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let num_qubits =
            qubits_for_dim(amplitudes.len()).ok_or(Error::BadLength { len: amplitudes.len() })?;
        let violation = (amplitudes.norm() - 1.0).abs();
        if violation > NORM_TOL {
            return Err(Error::NotNormalized { violation });
        }
        Ok(Self { num_qubits, amplitudes })
    }

    /// Normalizes `amplitudes` before validating.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { violation: 1.0 });
        }
        Self::new(amplitudes / C64::new(norm, 0.0))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&a| C64::new(a, 0.0)),
        ))
    }

    /// Computational basis state `|bits>`, `bits[0]` being qubit 0.
    pub fn basis(bits: &[u8]) -> Result<Self> {
        let dim = 1usize << bits.len();
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1));
        let mut amps = DVector::from_element(dim, ZERO);
        amps[index] = ONE;
        Self::new(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// `|s><s|` as a validated density matrix.
    pub fn projector(&self) -> DensityMatrix {
        let entries = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix { num_qubits: self.num_qubits, entries }
    }

    /// `<s| A |s>` for a dense operator.
    pub fn expectation(&self, op: &DMatrix<C64>) -> C64 {
        self.amplitudes.dotc(&(op * &self.amplitudes))
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        PureState { num_qubits: self.num_qubits + other.num_qubits, amplitudes }
    }

    /// Applies a single-qubit unitary on `qubit`.
    pub fn apply_1q(&self, qubit: usize, u: &Mat2) -> Result<PureState> {
        check_qubit(qubit, self.num_qubits)?;
        let mut amplitudes = self.amplitudes.clone();
        linalg::apply_1q_vec(&mut amplitudes, self.num_qubits, qubit, u);
        Ok(PureState { num_qubits: self.num_qubits, amplitudes })
    }

    /// Bloch vector `<s|σ^mu|s>` of one qubit.
    pub fn bloch_vector(&self, qubit: usize) -> Result<BlochVector> {
        check_qubit(qubit, self.num_qubits)?;
        let mut comps = [0.0; 3];
        for (k, axis) in PauliAxis::ALL.iter().enumerate() {
            let mut moved = self.amplitudes.clone();
            linalg::apply_1q_vec(&mut moved, self.num_qubits, qubit, &axis.matrix());
            let value = self.amplitudes.dotc(&moved);
            if value.im.abs() > IMAG_TOL {
                return Err(Error::ImaginaryExpectation { imag: value.im });
            }
            comps[k] = value.re;
        }
        BlochVector::new(comps)
    }
}

/// Hermitian, unit-trace, positive semidefinite `2^M x 2^M` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates `entries` against every density-matrix invariant. No
    /// repair (clamping, symmetrizing) is attempted.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        let num_qubits = match qubits_for_dim(rows) {
            Some(m) if rows == cols => m,
            _ => return Err(Error::BadDimension { rows, cols }),
        };
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotHermitian { violation: f64::INFINITY });
        }
        let violation = linalg::hermiticity_violation(&entries);
        if violation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { violation });
        }
        let trace = entries.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace, violation: (trace - 1.0).abs() });
        }
        let min_eigenvalue = *linalg::hermitian_eigenvalues(&entries)
            .last()
            .expect("non-empty spectrum");
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self { num_qubits, entries })
    }

    /// Maximally mixed state `I / 2^M`.
    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let entries = DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        Self { num_qubits, entries }
    }

    /// `Σ w_k ρ_k`; weights must be non-negative and sum to one.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::CountMismatch { expected: weights.len(), got: states.len() });
        }
        let dim = states[0].dim();
        let mut acc = DMatrix::zeros(dim, dim);
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { left: (dim, dim), right: s.entries.shape() });
            }
            acc += &s.entries * C64::new(*w, 0.0);
        }
        Self::new(acc)
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            num_qubits: self.num_qubits + other.num_qubits,
            entries: self.entries.kronecker(&other.entries),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    /// Rank at eigenvalue cutoff `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        linalg::hermitian_eigenvalues(&self.entries).iter().filter(|&&l| l > tol).count()
    }

    /// `U ρ U†` with `U` acting on a single qubit.
    pub fn conjugate_1q(&self, qubit: usize, u: &Mat2) -> Result<DensityMatrix> {
        check_qubit(qubit, self.num_qubits)?;
        Ok(DensityMatrix {
            num_qubits: self.num_qubits,
            entries: linalg::conjugate_1q(&self.entries, self.num_qubits, qubit, u),
        })
    }

    /// Applies one single-qubit unitary per qubit.
    pub fn conjugate_local(&self, unitaries: &[Mat2]) -> Result<DensityMatrix> {
        if unitaries.len() != self.num_qubits {
            return Err(Error::CountMismatch { expected: self.num_qubits, got: unitaries.len() });
        }
        let mut entries = self.entries.clone();
        for (q, u) in unitaries.iter().enumerate() {
            entries = linalg::conjugate_1q(&entries, self.num_qubits, q, u);
        }
        Ok(DensityMatrix { num_qubits: self.num_qubits, entries })
    }

    /// Built from arithmetic already known to preserve the invariants.
    pub(crate) fn from_trusted(num_qubits: usize, entries: DMatrix<C64>) -> Self {
        Self { num_qubits, entries }
    }
}

/// Real 3-vector of unit length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVector3([f64; 3]);

impl UnitVector3 {
    pub const X: UnitVector3 = UnitVector3([1.0, 0.0, 0.0]);
    pub const Y: UnitVector3 = UnitVector3([0.0, 1.0, 0.0]);
    pub const Z: UnitVector3 = UnitVector3([0.0, 0.0, 1.0]);

    pub fn new(components: [f64; 3]) -> Result<Self> {
        let norm = components.iter().map(|c| c * c).sum::<f64>().sqrt();
        let violation = (norm - 1.0).abs();
        if violation > NORM_TOL {
            return Err(Error::NotUnitVector { violation });
        }
        Ok(Self(components))
    }

    /// Scales a nonzero vector to unit length.
    pub fn normalize(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnitVector { violation: 1.0 });
        }
        Self::new([v[0] / norm, v[1] / norm, v[2] / norm])
    }

    /// Spherical coordinates, polar angle `theta` from +z.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, v: &[f64; 3]) -> f64 {
        self.0[0] * v[0] + self.0[1] * v[1] + self.0[2] * v[2]
    }

    /// `n · σ` as a 2x2 matrix.
    pub fn sigma(&self) -> Mat2 {
        let [x, y, z] = self.0;
        [
            [C64::new(z, 0.0), C64::new(x, -y)],
            [C64::new(x, y), C64::new(-z, 0.0)],
        ]
    }
}

/// Single-qubit Pauli expectation vector, norm at most one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub fn new(components: [f64; 3]) -> Result<Self> {
        let norm = components.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1.0 + BLOCH_TOL {
            return Err(Error::BlochVectorTooLong { norm });
        }
        Ok(Self(components))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliAxis {
    X = 1,
    Y = 2,
    Z = 3,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn matrix(self) -> Mat2 {
        match self {
            PauliAxis::X => [[ZERO, ONE], [ONE, ZERO]],
            PauliAxis::Y => [[ZERO, -I], [I, ZERO]],
            PauliAxis::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    pub fn index(self) -> usize {
        self as usize - 1
    }
}

/// Validates a raw matrix as a density matrix.
pub fn make_density(entries: DMatrix<C64>) -> Result<DensityMatrix> {
    DensityMatrix::new(entries)
}

/// `I ⊗ … ⊗ σ_axis ⊗ … ⊗ I` with the Pauli in slot `qubit`.
pub fn pauli_on_qubit(num_qubits: usize, qubit: usize, axis: PauliAxis) -> Result<DMatrix<C64>> {
    if num_qubits == 0 {
        return Err(Error::QubitOutOfRange { qubit, num_qubits });
    }
    check_qubit(qubit, num_qubits)?;
    let dim = 1usize << num_qubits;
    let mut m = DMatrix::<C64>::identity(dim, dim);
    linalg::apply_1q_left(&mut m, num_qubits, qubit, &axis.matrix());
    Ok(m)
}

/// `tr[ρ σ^mu_j]` for `j = x, y, z`.
pub fn bloch_vector(rho: &DensityMatrix, qubit: usize) -> Result<BlochVector> {
    check_qubit(qubit, rho.num_qubits)?;
    let mut comps = [0.0; 3];
    for axis in PauliAxis::ALL {
        let mut moved = rho.entries.clone();
        linalg::apply_1q_left(&mut moved, rho.num_qubits, qubit, &axis.matrix());
        let value = moved.trace();
        if value.im.abs() > IMAG_TOL {
            return Err(Error::ImaginaryExpectation { imag: value.im });
        }
        comps[axis.index()] = value.re;
    }
    BlochVector::new(comps)
}

/// `tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.entries.iter().map(|z| z.norm_sqr()).sum()
}

/// `sqrt(½ tr[(A−B)†(A−B)])`.
pub fn hs_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch { left: a.shape(), right: b.shape() });
    }
    let sq: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm_sqr()).sum();
    Ok((0.5 * sq).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi_plus() -> PureState {
        PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    fn w3() -> PureState {
        let mut a = vec![0.0; 8];
        a[0b100] = 1.0;
        a[0b010] = 1.0;
        a[0b001] = 1.0;
        PureState::from_real(&a).unwrap()
    }

    #[test]
    fn make_density_accepts_and_rejects() {
        let mm = make_density(DensityMatrix::maximally_mixed(2).into_entries()).unwrap();
        assert_eq!(mm.num_qubits(), 2);

        let bad = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(0.9, 0.0),
            C64::new(0.2, 0.0),
            ZERO,
            ZERO,
        ]));
        match make_density(bad) {
            Err(Error::TraceNotOne { trace, .. }) => assert!((trace - 1.1).abs() < 1e-12),
            other => panic!("expected TraceNotOne, got {other:?}"),
        }

        let proj = make_density(psi_plus().projector().into_entries()).unwrap();
        assert_eq!(proj.rank(1e-10), 1);
    }

    #[test]
    fn make_density_error_paths() {
        let three = DMatrix::<C64>::identity(3, 3) / C64::new(3.0, 0.0);
        assert!(matches!(make_density(three), Err(Error::BadDimension { .. })));

        let mut m = DensityMatrix::maximally_mixed(1).into_entries();
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(make_density(m), Err(Error::NotHermitian { .. })));

        let neg = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(1.5, 0.0), C64::new(-0.5, 0.0)]));
        match make_density(neg) {
            Err(Error::NotPsd { min_eigenvalue }) => assert!((min_eigenvalue + 0.5).abs() < 1e-12),
            other => panic!("expected NotPSD, got {other:?}"),
        }
    }

    #[test]
    fn pauli_examples() {
        let z = pauli_on_qubit(1, 0, PauliAxis::Z).unwrap();
        assert_eq!(z[(0, 0)], ONE);
        assert_eq!(z[(1, 1)], -ONE);

        let ix = pauli_on_qubit(2, 1, PauliAxis::X).unwrap();
        for (r, c) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            assert_eq!(ix[(r, c)], ONE);
        }
        assert!(ix[(0, 2)].norm() == 0.0);

        assert!(pauli_on_qubit(2, 2, PauliAxis::X).is_err());
    }

    #[test]
    fn pauli_algebra() {
        for m in 1..=3 {
            let dim = 1 << m;
            let id = DMatrix::<C64>::identity(dim, dim);
            for q in 0..m {
                for a in PauliAxis::ALL {
                    let sa = pauli_on_qubit(m, q, a).unwrap();
                    assert!(linalg::max_abs_diff(&sa, &sa.adjoint()) < 1e-12);
                    assert!(linalg::max_abs_diff(&(&sa * &sa), &id) < 1e-12);
                    assert!(sa.trace().norm() < 1e-12);
                    for b in PauliAxis::ALL {
                        let sb = pauli_on_qubit(m, q, b).unwrap();
                        // σ_i σ_j = δ_ij I + i ε_ijk σ_k
                        let (i, j) = (a.index(), b.index());
                        let expected = if i == j {
                            id.clone()
                        } else {
                            let k = 3 - i - j;
                            let eps = if (i + 1) % 3 == j { 1.0 } else { -1.0 };
                            pauli_on_qubit(m, q, PauliAxis::ALL[k]).unwrap() * C64::new(0.0, eps)
                        };
                        assert!(linalg::max_abs_diff(&(&sa * &sb), &expected) < 1e-12);
                        for q2 in 0..m {
                            if q2 != q {
                                let sc = pauli_on_qubit(m, q2, b).unwrap();
                                let comm = &sa * &sc - &sc * &sa;
                                assert!(comm.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bloch_examples() {
        let zero = PureState::basis(&[0, 0]).unwrap().projector();
        assert_eq!(bloch_vector(&zero, 0).unwrap().components(), [0.0, 0.0, 1.0]);
        let bell = psi_plus().projector();
        assert!(bloch_vector(&bell, 0).unwrap().norm() < 1e-15);
        let w = w3();
        let b = bloch_vector(&w.projector(), 0).unwrap().components();
        assert!(b[0].abs() < 1e-15 && b[1].abs() < 1e-15);
        assert!((b[2] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(w.bloch_vector(0).unwrap().components(), b);
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&psi_plus().projector()) - 1.0).abs() < 1e-15);
        assert!((purity(&DensityMatrix::maximally_mixed(2)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn hs_distance_examples() {
        let zero = PureState::basis(&[0]).unwrap().projector();
        let one = PureState::basis(&[1]).unwrap().projector();
        assert_eq!(hs_distance(zero.entries(), zero.entries()).unwrap(), 0.0);
        assert!((hs_distance(zero.entries(), one.entries()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            hs_distance(zero.entries(), one.entries()).unwrap(),
            hs_distance(one.entries(), zero.entries()).unwrap()
        );
        let big = DensityMatrix::maximally_mixed(2);
        assert!(matches!(hs_distance(zero.entries(), big.entries()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn unit_vector_sigma_is_hermitian_involution() {
        let n = UnitVector3::from_angles(0.7, 2.1);
        let s = n.sigma();
        let sq = linalg::mul2(&s, &s);
        assert!((sq[0][0] - ONE).norm() < 1e-15 && sq[0][1].norm() < 1e-15);
        assert!(UnitVector3::new([1.0, 1.0, 0.0]).is_err());
    }
}

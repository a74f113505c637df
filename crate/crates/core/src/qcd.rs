//! Quantum correlation distance of mixed states.
//!
//! Rotating qubit `mu` of `ρ` by an infinitesimal angle about `n^mu` moves it
//! a Hilbert–Schmidt distance governed by
//!
//! ```text
//! g_{mu nu}(ρ, n) = ½ tr[ρ {S^mu, S^nu} ρ] − tr[ρ S^mu ρ S^nu],   S^mu = n^mu · σ^mu
//! ```
//!
//! The diagonal is `tr(ρ²) − n^T A^mu n` with the correlation matrix
//! `A^mu_ij = tr[ρ σ^mu_i ρ σ^mu_j]`, so minimizing over directions gives
//! `C_mu = tr(ρ²) − λ_max(A^mu)` and `C = Σ_mu C_mu`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, sym3, C64};
use crate::pure_ed::MetricTensor;
use crate::qstate::{purity, DensityMatrix, PauliAxis, UnitVector3};

pub const A_SYM_TOL: f64 = 1e-10;
pub const A_IMAG_TOL: f64 = 1e-10;
pub const MIN_GRID_RESOLUTION_DEG: f64 = 0.5;

/// Real symmetric 3x3 matrix `A^mu` of one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub qubit: usize,
    pub entries: [[f64; 3]; 3],
}

impl CorrelationMatrix {
    /// Eigenvalues (descending) and unit eigenvectors.
    pub fn eigen(&self) -> ([f64; 3], [[f64; 3]; 3]) {
        sym3::eigen(&self.entries)
    }

    pub fn quadratic_form(&self, n: &UnitVector3) -> f64 {
        sym3::quadratic_form(&self.entries, &n.components())
    }
}

/// Raw `A^mu` entries of an unvalidated Hermitian matrix.
pub(crate) fn correlation_entries(
    rho: &DMatrix<C64>,
    num_qubits: usize,
    qubit: usize,
) -> Result<[[f64; 3]; 3]> {
    let moved: Vec<DMatrix<C64>> = PauliAxis::ALL
        .iter()
        .map(|axis| {
            let mut t = rho.clone();
            linalg::apply_1q_right(&mut t, num_qubits, qubit, &axis.matrix());
            t
        })
        .collect();
    let mut raw = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            raw[i][j] = linalg::trace_of_product(&moved[i], &moved[j]);
            raw[j][i] = if i == j {
                raw[i][j]
            } else {
                linalg::trace_of_product(&moved[j], &moved[i])
            };
        }
    }
    let mut asym = 0.0f64;
    let mut imag = 0.0f64;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            asym = asym.max((raw[i][j] - raw[j][i]).norm());
            imag = imag.max(raw[i][j].im.abs());
            out[i][j] = 0.5 * (raw[i][j].re + raw[j][i].re);
        }
    }
    if asym > A_SYM_TOL {
        return Err(Error::AsymmetryTooLarge { violation: asym });
    }
    if imag > A_IMAG_TOL {
        return Err(Error::ImaginaryExpectation { imag });
    }
    Ok(out)
}

/// `A^mu_ij = tr[ρ σ^mu_i ρ σ^mu_j]`, symmetrized after the asymmetry check.
pub fn correlation_matrix(rho: &DensityMatrix, qubit: usize) -> Result<CorrelationMatrix> {
    if qubit >= rho.num_qubits() {
        return Err(Error::QubitOutOfRange { qubit, num_qubits: rho.num_qubits() });
    }
    let entries = correlation_entries(rho.entries(), rho.num_qubits(), qubit)?;
    Ok(CorrelationMatrix { qubit, entries })
}

/// `C_mu` of a raw Hermitian unit-trace matrix. Used on the hot path of the
/// entanglement-distance optimizer where inputs are valid by construction.
pub(crate) fn qubit_qcd_raw(rho: &DMatrix<C64>, num_qubits: usize, qubit: usize) -> Result<f64> {
    let a = correlation_entries(rho, num_qubits, qubit)?;
    let p: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
    Ok(p - sym3::eigen(&a).0[0])
}

/// Mixed-state metric over local rotation angles at directions `n`.
pub fn metric_mixed(rho: &DensityMatrix, directions: &[UnitVector3]) -> Result<MetricTensor> {
    let m = rho.num_qubits();
    if directions.len() != m {
        return Err(Error::WrongDirectionCount { expected: m, got: directions.len() });
    }
    let left: Vec<DMatrix<C64>> = directions
        .iter()
        .enumerate()
        .map(|(q, n)| {
            let mut t = rho.entries().clone();
            linalg::apply_1q_left(&mut t, m, q, &n.sigma());
            t
        })
        .collect();
    let right: Vec<DMatrix<C64>> = directions
        .iter()
        .enumerate()
        .map(|(q, n)| {
            let mut t = rho.entries().clone();
            linalg::apply_1q_right(&mut t, m, q, &n.sigma());
            t
        })
        .collect();
    let mut g = DMatrix::zeros(m, m);
    for mu in 0..m {
        for nu in 0..m {
            // ½ tr(ρ²{S^mu, S^nu}) = Re <S^mu ρ, S^nu ρ>_F
            let anti: f64 = left[mu].iter().zip(left[nu].iter()).map(|(a, b)| (a.conj() * b).re).sum();
            let cross = linalg::trace_of_product(&right[mu], &right[nu]);
            if cross.im.abs() > crate::pure_ed::METRIC_IMAG_TOL {
                return Err(Error::NonRealMetric { imag: cross.im });
            }
            g[(mu, nu)] = anti - cross.re;
        }
    }
    MetricTensor::new(g, directions.to_vec())
}

/// Per-qubit contribution to the QCD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitQcd {
    pub c: f64,
    pub lambda_max: f64,
    pub optimal_direction: UnitVector3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QcdResult {
    pub total: f64,
    pub purity: f64,
    pub per_qubit: Vec<QubitQcd>,
}

/// Closed-form QCD: `Σ_mu [tr(ρ²) − λ_max(A^mu)]`.
///
/// A degenerate top eigenvalue leaves the reported direction to the solver's
/// deterministic ordering; `c` does not depend on it.
pub fn qcd(rho: &DensityMatrix) -> Result<QcdResult> {
    let p = purity(rho);
    let mut per_qubit = Vec::with_capacity(rho.num_qubits());
    for q in 0..rho.num_qubits() {
        let a = correlation_matrix(rho, q)?;
        let (values, vectors) = a.eigen();
        per_qubit.push(QubitQcd {
            c: p - values[0],
            lambda_max: values[0],
            optimal_direction: UnitVector3::normalize(vectors[0])?,
        });
    }
    let total = per_qubit.iter().map(|x| x.c).sum();
    Ok(QcdResult { total, purity: p, per_qubit })
}

/// Direct minimization of `Σ_mu [tr(ρ²) − n^T A^mu n]` over an equal-angle
/// `(θ, φ)` grid on each qubit's sphere. The grid is not equal-area; it is
/// only meant as an independent check of [`qcd`].
pub fn qcd_bruteforce(rho: &DensityMatrix, resolution_deg: f64) -> Result<f64> {
    if !(resolution_deg >= MIN_GRID_RESOLUTION_DEG) {
        return Err(Error::ParameterOutOfRange {
            name: "angular_resolution",
            value: resolution_deg,
            min: MIN_GRID_RESOLUTION_DEG,
            max: 180.0,
        });
    }
    let step = resolution_deg.to_radians();
    let n_theta = (std::f64::consts::PI / step).floor() as usize;
    let n_phi = (std::f64::consts::TAU / step).ceil() as usize;
    let grid: Vec<UnitVector3> = (0..=n_theta)
        .flat_map(|i| (0..n_phi).map(move |j| UnitVector3::from_angles(i as f64 * step, j as f64 * step)))
        .collect();
    let p = purity(rho);
    let mut total = 0.0;
    for q in 0..rho.num_qubits() {
        let a = correlation_matrix(rho, q)?;
        let best = grid.iter().map(|n| a.quadratic_form(n)).fold(f64::NEG_INFINITY, f64::max);
        total += p - best;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pure_ed::fs_metric;
    use crate::qstate::PureState;

    fn psi_plus() -> PureState {
        PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    fn assert_mat3(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3], tol: f64) {
        for i in 0..3 {
            for j in 0..3 {
                assert!((a[i][j] - b[i][j]).abs() < tol, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn correlation_matrix_examples() {
        let zero = PureState::basis(&[0, 0]).unwrap().projector();
        let a = correlation_matrix(&zero, 0).unwrap();
        assert_mat3(&a.entries, &[[0.0; 3], [0.0; 3], [0.0, 0.0, 1.0]], 1e-15);

        let mm = DensityMatrix::maximally_mixed(2);
        for q in 0..2 {
            let a = correlation_matrix(&mm, q).unwrap();
            assert_mat3(&a.entries, &[[0.25, 0.0, 0.0], [0.0, 0.25, 0.0], [0.0, 0.0, 0.25]], 1e-15);
        }

        let bell = psi_plus().projector();
        assert_mat3(&correlation_matrix(&bell, 0).unwrap().entries, &[[0.0; 3]; 3], 1e-15);
        assert!(correlation_matrix(&bell, 2).is_err());
    }

    #[test]
    fn metric_mixed_examples() {
        let bell = psi_plus();
        let dirs = [UnitVector3::Z, UnitVector3::Z];
        let g = metric_mixed(&bell.projector(), &dirs).unwrap();
        let f = fs_metric(&bell, &dirs).unwrap();
        assert!((g.entries() - f.entries()).abs().max() < 1e-12);
        for x in g.entries().iter() {
            assert!((x - 1.0).abs() < 1e-12);
        }

        let mm = DensityMatrix::maximally_mixed(2);
        let g = metric_mixed(&mm, &[UnitVector3::from_angles(0.3, 1.0), UnitVector3::Y]).unwrap();
        assert!(g.entries().iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn qcd_of_simple_states() {
        assert!((qcd(&psi_plus().projector()).unwrap().total - 2.0).abs() < 1e-14);
        assert!(qcd(&DensityMatrix::maximally_mixed(3)).unwrap().total.abs() < 1e-15);
        let r = qcd(&PureState::basis(&[0, 1]).unwrap().projector()).unwrap();
        assert!(r.total.abs() < 1e-15);
        let d = r.per_qubit[1].optimal_direction.components();
        assert!((d[2].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bruteforce_rejects_fine_grid_and_handles_mixed() {
        let mm = DensityMatrix::maximally_mixed(2);
        assert!(qcd_bruteforce(&mm, 0.1).is_err());
        assert!(qcd_bruteforce(&mm, 2.0).unwrap().abs() < 1e-15);
    }
}

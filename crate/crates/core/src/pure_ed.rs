//! Entanglement distance of pure states.
//!
//! For a state `|s>` and one measurement direction `v^mu` per qubit, the
//! Fubini–Study metric over local rotation angles is
//!
//! ```text
//! g_{mu nu} = <s|(σ·v)^mu (σ·v)^nu|s> − <s|(σ·v)^mu|s><s|(σ·v)^nu|s>
//! ```
//!
//! Its trace is `Σ_mu [1 − (v^mu · b^mu)²]` with `b^mu` the Bloch vector of
//! qubit `mu`, so the infimum over directions is reached along the Bloch
//! vectors and equals `M − Σ_mu |b^mu|²`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::qstate::{PureState, UnitVector3};

pub const METRIC_SYM_TOL: f64 = 1e-10;
pub const METRIC_PSD_TOL: f64 = 1e-8;
pub const METRIC_IMAG_TOL: f64 = 1e-10;
/// Bloch vectors shorter than this leave the optimal direction undetermined.
pub const DEGENERATE_BLOCH_TOL: f64 = 1e-9;
pub const DEFAULT_BLOCK_ZERO_TOL: f64 = 1e-9;

/// Real symmetric `M x M` metric over per-qubit rotation angles, together
/// with the directions it was evaluated at.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTensor {
    entries: DMatrix<f64>,
    directions: Vec<UnitVector3>,
}

impl MetricTensor {
    pub fn new(entries: DMatrix<f64>, directions: Vec<UnitVector3>) -> Result<Self> {
        let m = entries.nrows();
        if entries.ncols() != m {
            return Err(Error::DimensionMismatch { left: entries.shape(), right: (m, m) });
        }
        if directions.len() != m {
            return Err(Error::WrongDirectionCount { expected: m, got: directions.len() });
        }
        let mut asym = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                asym = asym.max((entries[(i, j)] - entries[(j, i)]).abs());
            }
        }
        if asym > METRIC_SYM_TOL {
            return Err(Error::AsymmetryTooLarge { violation: asym });
        }
        let entries = (&entries + entries.transpose()) * 0.5;
        Ok(Self { entries, directions })
    }

    pub fn num_qubits(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn directions(&self) -> &[UnitVector3] {
        &self.directions
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.entries[(mu, nu)]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Diagonal in `[0, 1]` and positive semidefinite, both within tolerance.
    pub fn satisfies_invariants(&self) -> bool {
        let diag_ok = (0..self.num_qubits()).all(|i| {
            let d = self.entries[(i, i)];
            (-METRIC_SYM_TOL..=1.0 + METRIC_SYM_TOL).contains(&d)
        });
        diag_ok && self.min_eigenvalue() >= -METRIC_PSD_TOL
    }
}

fn check_directions(num_qubits: usize, directions: &[UnitVector3]) -> Result<()> {
    if directions.len() != num_qubits {
        return Err(Error::WrongDirectionCount { expected: num_qubits, got: directions.len() });
    }
    Ok(())
}

/// Fubini–Study metric of `state` at the given per-qubit directions.
pub fn fs_metric(state: &PureState, directions: &[UnitVector3]) -> Result<MetricTensor> {
    let m = state.num_qubits();
    check_directions(m, directions)?;
    let s = state.amplitudes();
    let moved: Vec<DVector<C64>> = directions
        .iter()
        .enumerate()
        .map(|(q, v)| {
            let mut out = s.clone();
            linalg::apply_1q_vec(&mut out, m, q, &v.sigma());
            out
        })
        .collect();
    let means: Vec<f64> = moved.iter().map(|w| s.dotc(w).re).collect();
    let mut g = DMatrix::zeros(m, m);
    for mu in 0..m {
        for nu in 0..m {
            let second = moved[mu].dotc(&moved[nu]);
            if second.im.abs() > METRIC_IMAG_TOL {
                return Err(Error::NonRealMetric { imag: second.im });
            }
            g[(mu, nu)] = second.re - means[mu] * means[nu];
        }
    }
    MetricTensor::new(g, directions.to_vec())
}

/// `Σ_mu [1 − (v^mu · <σ^mu>)²]`.
pub fn trace_g(state: &PureState, directions: &[UnitVector3]) -> Result<f64> {
    check_directions(state.num_qubits(), directions)?;
    let mut total = 0.0;
    for (q, v) in directions.iter().enumerate() {
        let b = state.bloch_vector(q)?;
        total += 1.0 - v.dot(&b.components()).powi(2);
    }
    Ok(total)
}

/// Per-qubit directions attaining the infimum of `trace_g`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalDirections {
    pub directions: Vec<UnitVector3>,
    /// `true` where the Bloch vector vanishes and every direction is optimal;
    /// the reported direction is then `+z`.
    pub degenerate: Vec<bool>,
}

pub fn optimal_directions(state: &PureState) -> Result<OptimalDirections> {
    let mut directions = Vec::with_capacity(state.num_qubits());
    let mut degenerate = Vec::with_capacity(state.num_qubits());
    for q in 0..state.num_qubits() {
        let b = state.bloch_vector(q)?;
        if b.norm() > DEGENERATE_BLOCH_TOL {
            directions.push(UnitVector3::normalize(b.components())?);
            degenerate.push(false);
        } else {
            directions.push(UnitVector3::Z);
            degenerate.push(true);
        }
    }
    Ok(OptimalDirections { directions, degenerate })
}

/// `M − Σ_mu |<s|σ^mu|s>|²`.
pub fn pure_ed(state: &PureState) -> Result<f64> {
    let mut total = state.num_qubits() as f64;
    for q in 0..state.num_qubits() {
        total -= state.bloch_vector(q)?.norm_squared();
    }
    // rounding can push a product state a few ulps below zero
    Ok(total.max(0.0))
}

/// Connected components of the coupling graph of a metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    /// One block: the metric is irreducible at the directions it was
    /// evaluated at. This is evidence, not a certificate of genuine
    /// multipartite entanglement, which would need every direction set.
    pub fn is_irreducible(&self) -> bool {
        self.blocks.len() == 1
    }
}

/// Blocks of `g` where qubits `mu`, `nu` are linked iff `|g_{mu nu}| > zero_tol`.
pub fn block_partition(g: &MetricTensor, zero_tol: f64) -> BlockPartition {
    let m = g.num_qubits();
    let mut label: Vec<Option<usize>> = vec![None; m];
    let mut blocks = Vec::new();
    for start in 0..m {
        if label[start].is_some() {
            continue;
        }
        let id = blocks.len();
        let mut block = vec![start];
        label[start] = Some(id);
        let mut cursor = 0;
        while cursor < block.len() {
            let mu = block[cursor];
            cursor += 1;
            for nu in 0..m {
                if label[nu].is_none() && nu != mu && g.get(mu, nu).abs() > zero_tol {
                    label[nu] = Some(id);
                    block.push(nu);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    BlockPartition { blocks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi_plus() -> PureState {
        PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    fn ghz3() -> PureState {
        let mut a = vec![0.0; 8];
        a[0] = 1.0;
        a[7] = 1.0;
        PureState::from_real(&a).unwrap()
    }

    fn w3() -> PureState {
        let mut a = vec![0.0; 8];
        a[4] = 1.0;
        a[2] = 1.0;
        a[1] = 1.0;
        PureState::from_real(&a).unwrap()
    }

    fn zz(n: usize) -> Vec<UnitVector3> {
        vec![UnitVector3::Z; n]
    }

    #[test]
    fn fs_metric_examples() {
        let g = fs_metric(&PureState::basis(&[0, 0]).unwrap(), &zz(2)).unwrap();
        assert!(g.entries().iter().all(|x| x.abs() < 1e-15));

        let g = fs_metric(&psi_plus(), &zz(2)).unwrap();
        for x in g.entries().iter() {
            assert!((x - 1.0).abs() < 1e-14);
        }
        assert!(g.satisfies_invariants());

        let product = PureState::from_real(&[0.6, 0.8]).unwrap().tensor(&PureState::from_real(&[1.0, -2.0]).unwrap());
        let dirs = [UnitVector3::from_angles(0.4, 1.0), UnitVector3::from_angles(2.0, -0.3)];
        let g = fs_metric(&product, &dirs).unwrap();
        assert!(g.get(0, 1).abs() < 1e-12);

        assert!(matches!(fs_metric(&psi_plus(), &zz(3)), Err(Error::WrongDirectionCount { .. })));
    }

    #[test]
    fn trace_g_examples() {
        let any = [UnitVector3::from_angles(0.3, 0.2), UnitVector3::X];
        assert!((trace_g(&psi_plus(), &any).unwrap() - 2.0).abs() < 1e-14);
        let zero = PureState::basis(&[0, 0]).unwrap();
        assert!(trace_g(&zero, &zz(2)).unwrap().abs() < 1e-15);
        assert!((trace_g(&zero, &[UnitVector3::X, UnitVector3::X]).unwrap() - 2.0).abs() < 1e-15);
        let g = fs_metric(&w3(), &any_three()).unwrap();
        assert!((g.trace() - trace_g(&w3(), &any_three()).unwrap()).abs() < 1e-12);
    }

    fn any_three() -> Vec<UnitVector3> {
        vec![UnitVector3::from_angles(0.1, 0.5), UnitVector3::Y, UnitVector3::from_angles(1.3, 2.2)]
    }

    #[test]
    fn optimal_direction_examples() {
        let o = optimal_directions(&PureState::basis(&[0, 0]).unwrap()).unwrap();
        assert_eq!(o.directions, zz(2));
        assert_eq!(o.degenerate, vec![false, false]);

        let o = optimal_directions(&psi_plus()).unwrap();
        assert_eq!(o.degenerate, vec![true, true]);

        let o = optimal_directions(&w3()).unwrap();
        for d in &o.directions {
            let c = d.components();
            assert!(c[0].abs() < 1e-15 && c[1].abs() < 1e-15 && (c[2] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pure_ed_examples() {
        assert!((pure_ed(&psi_plus()).unwrap() - 2.0).abs() < 1e-14);
        assert!(pure_ed(&PureState::basis(&[1, 0, 1]).unwrap()).unwrap().abs() < 1e-14);
        assert!((pure_ed(&ghz3()).unwrap() - 3.0).abs() < 1e-14);
        assert!((pure_ed(&w3()).unwrap() - 8.0 / 3.0).abs() < 1e-14);
        let o = optimal_directions(&w3()).unwrap();
        assert!((trace_g(&w3(), &o.directions).unwrap() - 8.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn block_partition_examples() {
        let s = psi_plus().tensor(&PureState::basis(&[0]).unwrap());
        let g = fs_metric(&s, &zz(3)).unwrap();
        assert_eq!(block_partition(&g, DEFAULT_BLOCK_ZERO_TOL).blocks, vec![vec![0, 1], vec![2]]);

        let g = fs_metric(&PureState::basis(&[0, 0, 0]).unwrap(), &zz(3)).unwrap();
        assert_eq!(block_partition(&g, DEFAULT_BLOCK_ZERO_TOL).blocks, vec![vec![0], vec![1], vec![2]]);

        let g = fs_metric(&ghz3(), &zz(3)).unwrap();
        let p = block_partition(&g, DEFAULT_BLOCK_ZERO_TOL);
        assert_eq!(p.blocks, vec![vec![0, 1, 2]]);
        assert!(p.is_irreducible());
    }
}

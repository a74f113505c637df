//! Dense linear-algebra helpers shared by the measure modules.
//!
//! Qubit `mu` of an `M`-qubit register is the `mu`-th tensor factor from the
//! left, i.e. bit `M - 1 - mu` of the computational-basis index.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;

/// A 2x2 complex matrix in row-major order.
pub type Mat2 = [[C64; 2]; 2];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub(crate) fn qubit_mask(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

pub fn adjoint2(u: &Mat2) -> Mat2 {
    [
        [u[0][0].conj(), u[1][0].conj()],
        [u[0][1].conj(), u[1][1].conj()],
    ]
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `v <- (I ⊗ u ⊗ I) v` with `u` on `qubit`.
pub fn apply_1q_vec(v: &mut DVector<C64>, num_qubits: usize, qubit: usize, u: &Mat2) {
    let mask = qubit_mask(num_qubits, qubit);
    for i in 0..v.len() {
        if i & mask == 0 {
            let j = i | mask;
            let (a, b) = (v[i], v[j]);
            v[i] = u[0][0] * a + u[0][1] * b;
            v[j] = u[1][0] * a + u[1][1] * b;
        }
    }
}

/// `m <- (I ⊗ u ⊗ I) m`.
pub fn apply_1q_left(m: &mut DMatrix<C64>, num_qubits: usize, qubit: usize, u: &Mat2) {
    let mask = qubit_mask(num_qubits, qubit);
    let n = m.nrows();
    for col in 0..m.ncols() {
        for i in 0..n {
            if i & mask == 0 {
                let j = i | mask;
                let (a, b) = (m[(i, col)], m[(j, col)]);
                m[(i, col)] = u[0][0] * a + u[0][1] * b;
                m[(j, col)] = u[1][0] * a + u[1][1] * b;
            }
        }
    }
}

/// `m <- m (I ⊗ w ⊗ I)`.
pub fn apply_1q_right(m: &mut DMatrix<C64>, num_qubits: usize, qubit: usize, w: &Mat2) {
    let mask = qubit_mask(num_qubits, qubit);
    let n = m.ncols();
    for i in 0..n {
        if i & mask == 0 {
            let j = i | mask;
            for row in 0..m.nrows() {
                let (a, b) = (m[(row, i)], m[(row, j)]);
                m[(row, i)] = a * w[0][0] + b * w[1][0];
                m[(row, j)] = a * w[0][1] + b * w[1][1];
            }
        }
    }
}

/// `U m U†` with `U` acting on a single qubit.
pub fn conjugate_1q(m: &DMatrix<C64>, num_qubits: usize, qubit: usize, u: &Mat2) -> DMatrix<C64> {
    let mut out = m.clone();
    apply_1q_left(&mut out, num_qubits, qubit, u);
    apply_1q_right(&mut out, num_qubits, qubit, &adjoint2(u));
    out
}

/// `tr(A B)` without forming the product.
pub fn trace_of_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |m_ij - conj(m_ji)|`.
pub fn hermiticity_violation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues in descending
/// order. Eigenvector phases are fixed so the largest-magnitude component is
/// real and positive.
pub fn hermitian_eigh(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let pivot = col
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(k, _)| k)
            .unwrap_or(0);
        let phase = if col[pivot].norm() > 0.0 {
            col[pivot].conj() / col[pivot].norm()
        } else {
            ONE
        };
        for r in 0..n {
            vectors[(r, dst)] = col[r] * phase;
        }
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Principal square root of a Hermitian PSD matrix; tiny negative eigenvalues
/// are clamped to zero.
pub fn hermitian_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let (values, vectors) = hermitian_eigh(m);
    let n = m.nrows();
    let mut scaled = vectors.clone();
    for (k, &lambda) in values.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        for r in 0..n {
            scaled[(r, k)] *= s;
        }
    }
    &scaled * vectors.adjoint()
}

pub mod sym3 {
    //! Real symmetric 3x3 eigenproblems.

    pub type Mat3 = [[f64; 3]; 3];

    /// Cyclic Jacobi eigensolver. Returns eigenvalues in descending order and
    /// the matching unit eigenvectors. Ties keep the order in which the
    /// diagonal settles, which is deterministic for a given input.
    pub fn eigen(a: &Mat3) -> ([f64; 3], [[f64; 3]; 3]) {
        let mut m = *a;
        let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for _sweep in 0..64 {
            let off = m[0][1].abs() + m[0][2].abs() + m[1][2].abs();
            let scale = m[0][0].abs() + m[1][1].abs() + m[2][2].abs();
            if off <= f64::EPSILON * 1e-3 * scale.max(f64::MIN_POSITIVE) || off == 0.0 {
                break;
            }
            for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
                if m[p][q] == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..3 {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..3 {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| m[j][j].total_cmp(&m[i][i]));
        let values = [m[order[0]][order[0]], m[order[1]][order[1]], m[order[2]][order[2]]];
        let mut vectors = [[0.0; 3]; 3];
        for (dst, &src) in order.iter().enumerate() {
            let mut vec = [v[0][src], v[1][src], v[2][src]];
            // sign convention: first non-negligible component positive
            if let Some(first) = vec.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    vec.iter_mut().for_each(|x| *x = -*x);
                }
            }
            vectors[dst] = vec;
        }
        (values, vectors)
    }

    /// Trigonometric closed form for the eigenvalues (descending). Loses
    /// roughly half the digits when the two largest eigenvalues coincide, so
    /// it serves as a cross-check rather than the production path.
    pub fn eigenvalues_closed_form(a: &Mat3) -> [f64; 3] {
        let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
        let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
        if p1 == 0.0 {
            let mut d = [a[0][0], a[1][1], a[2][2]];
            d.sort_by(|x, y| y.total_cmp(x));
            return d;
        }
        let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let mut b = *a;
        for (i, row) in b.iter_mut().enumerate() {
            row[i] -= q;
            row.iter_mut().for_each(|x| *x /= p);
        }
        let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
            - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        let r = (det / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let l1 = q + 2.0 * p * phi.cos();
        let l3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
        [l1, 3.0 * q - l1 - l3, l3]
    }

    pub fn quadratic_form(a: &Mat3, n: &[f64; 3]) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                acc += n[i] * a[i][j] * n[j];
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Matrix3;

    fn sym(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> sym3::Mat3 {
        [[a, d, e], [d, b, f], [e, f, c]]
    }

    #[test]
    fn jacobi_matches_nalgebra_and_closed_form() {
        let cases = [
            sym(1.0, 2.0, 3.0, 0.1, -0.3, 0.7),
            sym(0.25, 0.25, 0.25, 0.0, 0.0, 0.0),
            sym(0.5, 0.5, 0.1, 0.0, 0.0, 0.0),
            sym(2.0, -1.0, 0.5, 1.5, 0.2, -0.4),
            sym(1.0, 1.0, 1.0, 1.0, 1.0, 1.0),
        ];
        for a in cases {
            let (vals, vecs) = sym3::eigen(&a);
            let na = Matrix3::from_fn(|i, j| a[i][j]);
            let mut reference: Vec<f64> = na.symmetric_eigen().eigenvalues.iter().copied().collect();
            reference.sort_by(|x, y| y.total_cmp(x));
            let closed = sym3::eigenvalues_closed_form(&a);
            for k in 0..3 {
                assert!((vals[k] - reference[k]).abs() < 1e-13, "{a:?}");
                assert!((closed[k] - reference[k]).abs() < 1e-7, "{a:?}");
                let rq = sym3::quadratic_form(&a, &vecs[k]);
                assert!((rq - vals[k]).abs() < 1e-13);
                let norm: f64 = vecs[k].iter().map(|x| x * x).sum();
                assert!((norm - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn one_qubit_ops_compose() {
        // X on qubit 1 of two qubits: |00> -> |01>
        let x: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
        let mut v = DVector::from_vec(vec![ONE, ZERO, ZERO, ZERO]);
        apply_1q_vec(&mut v, 2, 1, &x);
        assert_eq!(v[1], ONE);
        let mut m = DMatrix::<C64>::identity(4, 4);
        apply_1q_left(&mut m, 2, 0, &x);
        apply_1q_right(&mut m, 2, 0, &x);
        assert!(max_abs_diff(&m, &DMatrix::identity(4, 4)) < 1e-15);
    }

    #[test]
    fn eigh_orders_descending() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(0.1, 0.0),
            C64::new(0.6, 0.0),
            C64::new(0.3, 0.0),
        ]));
        let (vals, vecs) = hermitian_eigh(&m);
        assert!((vals[0] - 0.6).abs() < 1e-15 && (vals[2] - 0.1).abs() < 1e-15);
        assert!((vecs[(1, 0)] - ONE).norm() < 1e-15);
        let root = hermitian_sqrt(&m);
        assert!(((&root * &root) - &m).norm() < 1e-14);
    }
}

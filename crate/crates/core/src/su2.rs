//! SU(2) elements from ZYZ Euler angles, `U = R_z(α) R_y(β) R_z(γ)` with
//! `R_a(θ) = exp(−iθσ_a/2)`.

use crate::linalg::{mul2, Mat2, C64, ZERO};

pub fn rz(theta: f64) -> Mat2 {
    let h = theta / 2.0;
    [[C64::from_polar(1.0, -h), ZERO], [ZERO, C64::from_polar(1.0, h)]]
}

pub fn ry(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]]
}

pub fn rx(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [[C64::new(c, 0.0), C64::new(0.0, -s)], [C64::new(0.0, -s), C64::new(c, 0.0)]]
}

/// `R_z(α) R_y(β) R_z(γ)` for `angles = [α, β, γ]`.
pub fn zyz(angles: &[f64; 3]) -> Mat2 {
    let [a, b, g] = *angles;
    let (s, c) = (b / 2.0).sin_cos();
    let plus = C64::from_polar(1.0, -(a + g) / 2.0);
    let minus = C64::from_polar(1.0, -(a - g) / 2.0);
    [
        [plus * c, -minus * s],
        [minus.conj() * s, plus.conj() * c],
    ]
}

/// Reference product form of [`zyz`], kept for cross-checking.
pub fn zyz_product(angles: &[f64; 3]) -> Mat2 {
    mul2(&mul2(&rz(angles[0]), &ry(angles[1])), &rz(angles[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::adjoint2;

    fn close(a: &Mat2, b: &Mat2) -> bool {
        (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() < 1e-14))
    }

    #[test]
    fn closed_form_matches_product() {
        for angles in [[0.3, 1.1, -2.0], [0.0, 0.0, 0.0], [3.0, 3.1, 6.0]] {
            assert!(close(&zyz(&angles), &zyz_product(&angles)));
            let u = zyz(&angles);
            let id = mul2(&u, &adjoint2(&u));
            assert!(close(&id, &rz(0.0)));
            let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
            assert!((det - C64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn x_rotation_in_zyz_form() {
        // R_z(π/2) R_y(π) R_z(−π/2) = i σ_x, which equals R_x(π) up to phase −1
        let u = zyz(&[std::f64::consts::FRAC_PI_2, std::f64::consts::PI, -std::f64::consts::FRAC_PI_2]);
        let x = rx(std::f64::consts::PI);
        let neg: Mat2 = [[-x[0][0], -x[0][1]], [-x[1][0], -x[1][1]]];
        assert!(close(&u, &neg));
    }
}

//! 2x2 unitaries for single-qubit operations. The rotation convention is
//! R(axis, theta) = exp(-i * theta * (axis . sigma) / 2); comparisons of
//! states built from these matrices should use fidelity so that global
//! phase drops out.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Mat2([[one, zero], [zero, one]])
    }

    /// Rotation about an arbitrary axis (normalized internally) by
    /// `angle_rad` radians:
    /// cos(t/2) I - i sin(t/2) (nx X + ny Y + nz Z).
    pub fn rotation(axis: [f64; 3], angle_rad: f64) -> Self {
        let len = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!(len > 0.0, "rotation axis must be non-zero");
        let [nx, ny, nz] = [axis[0] / len, axis[1] / len, axis[2] / len];
        let c = (angle_rad / 2.0).cos();
        let s = (angle_rad / 2.0).sin();
        let i = Complex64::new(0.0, 1.0);
        Mat2([
            [
                Complex64::new(c, 0.0) - i * s * nz,
                -i * s * Complex64::new(nx, -ny),
            ],
            [
                -i * s * Complex64::new(nx, ny),
                Complex64::new(c, 0.0) + i * s * nz,
            ],
        ])
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = self.0[r][0] * other.0[0][c] + self.0[r][1] * other.0[1][c];
            }
        }
        Mat2(out)
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    /// Max absolute deviation of `self * self^dagger` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let product = self.mul(&self.adjoint());
        let identity = Mat2::identity();
        let mut max = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                max = max.max((product.0[r][c] - identity.0[r][c]).norm());
            }
        }
        max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotations_are_unitary() {
        for axis in [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [1.0, 1.0, 0.5],
        ] {
            for angle in [
                -std::f64::consts::PI,
                -0.5,
                0.0,
                0.7,
                std::f64::consts::FRAC_PI_2,
            ] {
                assert!(Mat2::rotation(axis, angle).unitarity_error() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_angle_is_identity() {
        let u = Mat2::rotation([1.0, 0.0, 0.0], 0.0);
        let identity = Mat2::identity();
        for r in 0..2 {
            for c in 0..2 {
                assert!((u.0[r][c] - identity.0[r][c]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn opposite_angles_cancel() {
        let fwd = Mat2::rotation([0.0, 1.0, 0.0], 1.23);
        let back = Mat2::rotation([0.0, 1.0, 0.0], -1.23);
        let product = fwd.mul(&back);
        assert!(product.mul(&Mat2::identity()).unitarity_error() < 1e-9);
        assert!((product.0[0][0].re - 1.0).abs() < 1e-12);
        assert!(product.0[0][1].norm() < 1e-12);
    }
}

//! Small complex linear-algebra helpers shared across the library.
//!
//! Polarization operators are 2x2 complex Hermitian matrices in the
//! circular basis, bipartite operators are their 4x4 tensor products.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

pub type C64 = Complex64;
/// 2x2 complex matrix (single-photon polarization operators).
pub type Mat2 = Matrix2<C64>;
/// 4x4 real matrix (Mueller calculus).
pub type Mat4 = Matrix4<f64>;
/// 4x4 complex matrix (two-photon polarization operators).
pub type Mat4c = Matrix4<C64>;
/// 4-component real vector (Stokes calculus).
pub type Vec4 = Vector4<f64>;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Pauli basis {1, sigma_x, sigma_y, sigma_z} in the circular {|R>,|L>} basis.
pub fn pauli_basis() -> [Mat2; 4] {
    [
        Mat2::new(ONE, ZERO, ZERO, ONE),
        Mat2::new(ZERO, ONE, ONE, ZERO),
        Mat2::new(ZERO, -I, I, ZERO),
        Mat2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// Largest entry of |m - m^dagger|.
pub fn hermitian_asymmetry2(m: &Mat2) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry of |m - m^dagger| for a 4x4 matrix.
pub fn hermitian_asymmetry4(m: &Mat4c) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// (m + m^dagger) / 2, absorbing floating-point drift from chained products.
pub fn symmetrize2(m: &Mat2) -> Mat2 {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub fn symmetrize4(m: &Mat4c) -> Mat4c {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigenvalues of a 2x2 Hermitian matrix, ascending (closed form).
pub fn eigvals_hermitian2(m: &Mat2) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let b = m[(1, 1)].re;
    let c = m[(0, 1)].norm();
    let mid = 0.5 * (a + b);
    let rad = (0.25 * (a - b) * (a - b) + c * c).sqrt();
    [mid - rad, mid + rad]
}

/// Eigenvalues of a 4x4 Hermitian matrix, ascending.
pub fn eigvals_hermitian4(m: &Mat4c) -> [f64; 4] {
    let eig = nalgebra::SymmetricEigen::new(*m);
    let mut vals = [0.0; 4];
    for (dst, src) in vals.iter_mut().zip(eig.eigenvalues.iter()) {
        *dst = *src;
    }
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    vals
}

/// Trace norm ||m||_1 of a 2x2 Hermitian matrix.
pub fn trace_norm2(m: &Mat2) -> f64 {
    eigvals_hermitian2(m).iter().map(|l| l.abs()).sum()
}

/// Tensor product of two single-photon operators.
pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4c {
    a.kronecker(b)
}

/// Re Tr[rho * op].
pub fn trace_product4(rho: &Mat4c, op: &Mat4c) -> f64 {
    (rho * op).trace().re
}

/// Partial transpose over the second subsystem, in the tensor basis
/// {|RR>,|RL>,|LR>,|LL>}.
pub fn partial_transpose_second(m: &Mat4c) -> Mat4c {
    let mut out = *m;
    for ablock in 0..2 {
        for bblock in 0..2 {
            let (r, c) = (2 * ablock, 2 * bblock);
            let tmp = out[(r, c + 1)];
            out[(r, c + 1)] = out[(r + 1, c)];
            out[(r + 1, c)] = tmp;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pauli_matrices_square_to_identity() {
        for p in pauli_basis() {
            let sq = p * p;
            assert_abs_diff_eq!((sq - Mat2::identity()).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn hermitian_eigenvalues_match_trace_and_det() {
        let m = Mat2::new(
            C64::new(2.0, 0.0),
            C64::new(0.3, -0.7),
            C64::new(0.3, 0.7),
            C64::new(-1.0, 0.0),
        );
        let [lo, hi] = eigvals_hermitian2(&m);
        assert_abs_diff_eq!(lo + hi, 1.0, epsilon = 1e-14);
        let det = -2.0 - (0.3f64 * 0.3 + 0.7 * 0.7);
        assert_abs_diff_eq!(lo * hi, det, epsilon = 1e-14);
    }

    #[test]
    fn eigvals4_recover_diagonal() {
        let mut m = Mat4c::zeros();
        for (i, v) in [3.0, -1.0, 0.5, 2.0].iter().enumerate() {
            m[(i, i)] = C64::new(*v, 0.0);
        }
        let vals = eigvals_hermitian4(&m);
        assert_abs_diff_eq!(vals[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[3], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_transpose_is_involutive() {
        let mut m = Mat4c::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = C64::new((i * 4 + j) as f64, (i as f64) - (j as f64));
            }
        }
        let twice = partial_transpose_second(&partial_transpose_second(&m));
        assert_abs_diff_eq!((twice - m).norm(), 0.0, epsilon = 0.0);
    }
}

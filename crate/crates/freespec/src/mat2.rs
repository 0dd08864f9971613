//! Complex 2x2 matrices with the trace functionals and norms used throughout
//! the crate: normalized trace `tau = Tr/2`, operator norm (largest singular
//! value), the L2 norm `sqrt(tau(A*A))`, and the convention that the norm of
//! the inverse of a singular matrix is `+inf` (so its reciprocal is 0).

use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub const ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq)]
pub struct Mat2 {
    e: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub fn new(e: [[Complex64; 2]; 2]) -> Self {
        Mat2 { e }
    }

    /// Build from real entries `[[a, b], [c, d]]`.
    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new([
            [Complex64::new(a, 0.0), Complex64::new(b, 0.0)],
            [Complex64::new(c, 0.0), Complex64::new(d, 0.0)],
        ])
    }

    pub fn zero() -> Self {
        Mat2::from_real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        Mat2::from_real(1.0, 0.0, 0.0, 1.0)
    }

    /// Scalar multiple of the identity.
    pub fn scalar(c: Complex64) -> Self {
        Mat2::new([
            [c, Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), c],
        ])
    }

    /// Matrix unit `E_ij` (indices 0-based).
    pub fn unit(i: usize, j: usize) -> Self {
        let mut e = [[Complex64::new(0.0, 0.0); 2]; 2];
        e[i][j] = Complex64::new(1.0, 0.0);
        Mat2::new(e)
    }

    /// Antidiagonal matrix `[[0, a], [b, 0]]`.
    pub fn antidiag(a: Complex64, b: Complex64) -> Self {
        Mat2::new([
            [Complex64::new(0.0, 0.0), a],
            [b, Complex64::new(0.0, 0.0)],
        ])
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Mat2::new([
            [a, Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), d],
        ])
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.e[i][j]
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.e
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1]
    }

    /// Normalized trace `tau = Tr/2`.
    pub fn tau(&self) -> Complex64 {
        self.trace() * 0.5
    }

    pub fn det(&self) -> Complex64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn adjoint(&self) -> Self {
        Mat2::new([
            [self.e[0][0].conj(), self.e[1][0].conj()],
            [self.e[0][1].conj(), self.e[1][1].conj()],
        ])
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut e = self.e;
        for row in e.iter_mut() {
            for v in row.iter_mut() {
                *v *= c;
            }
        }
        Mat2::new(e)
    }

    /// Squared Frobenius norm `sum |a_ij|^2 = Tr(A*A)`.
    pub fn frobenius_sq(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|v| v.norm_sqr())
            .sum()
    }

    /// Singular values `(s_max, s_min)`.
    ///
    /// Roots of `s^4 - Tr(A*A) s^2 + |det A|^2`, with the small root computed
    /// through the product identity to avoid cancellation.
    pub fn singular_values(&self) -> (f64, f64) {
        let f = self.frobenius_sq();
        if f == 0.0 {
            return (0.0, 0.0);
        }
        let d2 = self.det().norm_sqr();
        let disc = (f * f - 4.0 * d2).max(0.0).sqrt();
        let s_max_sq = 0.5 * (f + disc);
        let s_min_sq = if s_max_sq > 0.0 { d2 / s_max_sq } else { 0.0 };
        (s_max_sq.sqrt(), s_min_sq.sqrt())
    }

    /// Operator norm (largest singular value).
    pub fn op_norm(&self) -> f64 {
        self.singular_values().0
    }

    /// `||A||_2 = sqrt(tau(A*A)) = sqrt(Tr(A*A)/2)`.
    pub fn l2_norm(&self) -> f64 {
        (self.frobenius_sq() * 0.5).sqrt()
    }

    /// `||A^{-1}||`, i.e. the reciprocal of the smallest singular value;
    /// `+inf` when `A` is singular.
    pub fn inv_op_norm(&self) -> f64 {
        let (_, s_min) = self.singular_values();
        if s_min <= ZERO_TOL * (1.0 + self.op_norm()) {
            f64::INFINITY
        } else {
            1.0 / s_min
        }
    }

    /// `||A^{-1}||_2`, `+inf` when `A` is singular.
    pub fn inv_l2_norm(&self) -> f64 {
        let (s_max, s_min) = self.singular_values();
        if s_min <= ZERO_TOL * (1.0 + s_max) {
            f64::INFINITY
        } else {
            (0.5 * (s_max.powi(-2) + s_min.powi(-2))).sqrt()
        }
    }

    /// Eigenvalues by the quadratic formula.
    pub fn eigenvalues(&self) -> (Complex64, Complex64) {
        let half_tr = self.tau();
        let disc = (half_tr * half_tr - self.det()).sqrt();
        (half_tr + disc, half_tr - disc)
    }

    pub fn is_zero(&self) -> bool {
        self.frobenius_sq().sqrt() <= ZERO_TOL
    }

    pub fn is_scalar(&self) -> bool {
        (*self - Mat2::scalar(self.tau())).frobenius_sq().sqrt()
            <= ZERO_TOL * (1.0 + self.frobenius_sq().sqrt())
    }

    pub fn is_traceless(&self) -> bool {
        self.trace().norm() <= ZERO_TOL * (1.0 + self.frobenius_sq().sqrt())
    }

    pub fn is_normal(&self) -> bool {
        let comm = *self * self.adjoint() - self.adjoint() * *self;
        comm.frobenius_sq().sqrt() <= 1e-10 * (1.0 + self.frobenius_sq())
    }

    /// Centered part `A - tau(A) 1`.
    pub fn centered(&self) -> Self {
        *self - Mat2::scalar(self.tau())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut e = self.e;
        for i in 0..2 {
            for j in 0..2 {
                e[i][j] += rhs.e[i][j];
            }
        }
        Mat2::new(e)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut e = self.e;
        for i in 0..2 {
            for j in 0..2 {
                e[i][j] -= rhs.e[i][j];
            }
        }
        Mat2::new(e)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut e = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                e[i][j] = self.e[i][0] * rhs.e[0][j] + self.e[i][1] * rhs.e[1][j];
            }
        }
        Mat2::new(e)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1]
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn singular_values_match_gram_eigenvalues() {
        // Oracle: eigenvalues of A*A computed from the characteristic polynomial.
        let a = Mat2::new([[c(1.0, 2.0), c(-0.5, 0.3)], [c(0.0, -1.0), c(2.0, 0.1)]]);
        let g = a.adjoint() * a;
        let tr = g.trace().re;
        let det = g.det().re;
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        let l_max = 0.5 * (tr + disc);
        let l_min = 0.5 * (tr - disc);
        let (s_max, s_min) = a.singular_values();
        assert_abs_diff_eq!(s_max * s_max, l_max, epsilon = 1e-12);
        assert_abs_diff_eq!(s_min * s_min, l_min.max(0.0), epsilon = 1e-12);
    }

    #[test]
    fn norm_ordering_and_det_identity() {
        let a = Mat2::new([[c(0.3, -1.1), c(2.0, 0.0)], [c(0.7, 0.2), c(-0.4, 0.9)]]);
        let (s_max, s_min) = a.singular_values();
        assert!(a.l2_norm() <= a.op_norm() + 1e-14);
        assert_abs_diff_eq!(a.det().norm(), s_max * s_min, epsilon = 1e-10);
    }

    #[test]
    fn inverse_norm_convention() {
        let nilpotent = Mat2::unit(0, 1);
        assert!(nilpotent.inv_op_norm().is_infinite());
        assert!(nilpotent.inv_l2_norm().is_infinite());
        // 1/inf = 0 is the convention used in every radius formula.
        assert_eq!(nilpotent.inv_op_norm().recip(), 0.0);

        let b = Mat2::antidiag(c(1.0, 0.0), c(2.0, 0.0));
        assert_abs_diff_eq!(b.inv_op_norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.inv_l2_norm() * b.inv_l2_norm(), 5.0 / 8.0, epsilon = 1e-12);
    }

    #[test]
    fn l2_norm_example() {
        // B = [[0,1],[2,0]]: B*B = diag(4,1), tau = 5/2.
        let b = Mat2::antidiag(c(1.0, 0.0), c(2.0, 0.0));
        assert_abs_diff_eq!(b.l2_norm() * b.l2_norm(), 2.5, epsilon = 1e-14);
    }

    #[test]
    fn eigenvalues_of_shear() {
        let z = Mat2::new([[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        let (l1, l2) = z.eigenvalues();
        assert_abs_diff_eq!((l1 - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((l2 - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn scalar_and_traceless_predicates() {
        assert!(Mat2::scalar(c(2.0, -1.0)).is_scalar());
        assert!(!Mat2::unit(0, 1).is_scalar());
        assert!(Mat2::antidiag(c(0.0, 2.0), c(0.0, 3.0)).is_traceless());
        assert!(Mat2::diag(c(1.0, 0.0), c(-1.0, 0.0)).is_traceless());
        assert!(!Mat2::identity().is_traceless());
        assert!(Mat2::diag(c(2.0, 0.0), c(1.0, 0.0)).is_normal());
        assert!(!Mat2::new([[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]).is_normal());
    }
}

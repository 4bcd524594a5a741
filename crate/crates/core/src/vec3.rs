//! Complex three-vectors tagged with the frame their components refer to.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Frame of reference for the three components of a [`ComplexVec3`].
///
/// The cylindrical frame carries the azimuth at which `e_rho` and `e_phi`
/// are defined, which is all that is needed to convert to Cartesian
/// components. On the axis only the Cartesian frame is meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame {
    /// Components along `(e_rho, e_phi, e_z)` at azimuth `phi`.
    Cylindrical { phi: f64 },
    /// Components along `(e_1, e_2, e_3)`.
    Cartesian,
}

/// Complex field sample with an explicit frame tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVec3 {
    pub c: [Complex64; 3],
    pub frame: Frame,
}

impl ComplexVec3 {
    pub fn new(c: [Complex64; 3], frame: Frame) -> Self {
        Self { c, frame }
    }

    pub fn zero(frame: Frame) -> Self {
        Self {
            c: [ZERO; 3],
            frame,
        }
    }

    pub fn cartesian(c: [Complex64; 3]) -> Self {
        Self {
            c,
            frame: Frame::Cartesian,
        }
    }

    /// `e_+ = e_1 + i e_2`.
    pub fn e_plus() -> Self {
        Self::cartesian([Complex64::new(1.0, 0.0), I, ZERO])
    }

    /// `e_- = e_1 - i e_2`.
    pub fn e_minus() -> Self {
        Self::cartesian([Complex64::new(1.0, 0.0), -I, ZERO])
    }

    pub fn e3() -> Self {
        Self::cartesian([ZERO, ZERO, Complex64::new(1.0, 0.0)])
    }

    /// Same vector expressed in Cartesian components.
    pub fn to_cartesian(&self) -> Self {
        match self.frame {
            Frame::Cartesian => *self,
            Frame::Cylindrical { phi } => {
                let (s, co) = phi.sin_cos();
                let [r, p, z] = self.c;
                Self::cartesian([r * co - p * s, r * s + p * co, z])
            }
        }
    }

    /// Same vector expressed in the cylindrical frame at azimuth `phi`.
    pub fn to_cylindrical(&self, phi: f64) -> Self {
        let cart = self.to_cartesian();
        let (s, co) = phi.sin_cos();
        let [x, y, z] = cart.c;
        Self::new(
            [x * co + y * s, -x * s + y * co, z],
            Frame::Cylindrical { phi },
        )
    }

    /// Expresses `other` in this vector's frame (converting if needed).
    fn aligned(&self, other: &Self) -> Self {
        match (self.frame, other.frame) {
            (Frame::Cartesian, Frame::Cartesian) => *other,
            (Frame::Cartesian, _) => other.to_cartesian(),
            (Frame::Cylindrical { phi }, _) => other.to_cylindrical(phi),
        }
    }

    /// Bilinear dot product (no conjugation).
    pub fn dot(&self, other: &Self) -> Complex64 {
        let o = self.aligned(other);
        self.c[0] * o.c[0] + self.c[1] * o.c[1] + self.c[2] * o.c[2]
    }

    /// Hermitian product `sum_i a_i conj(b_i)`.
    pub fn dot_conj(&self, other: &Self) -> Complex64 {
        let o = self.aligned(other);
        self.c[0] * o.c[0].conj() + self.c[1] * o.c[1].conj() + self.c[2] * o.c[2].conj()
    }

    /// Cross product in a right-handed frame. Both cylindrical and Cartesian
    /// triads are right-handed, so the formula is the same.
    pub fn cross(&self, other: &Self) -> Self {
        let o = self.aligned(other);
        let [a0, a1, a2] = self.c;
        let [b0, b1, b2] = o.c;
        Self::new(
            [a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0],
            self.frame,
        )
    }

    pub fn conj(&self) -> Self {
        Self::new(
            [self.c[0].conj(), self.c[1].conj(), self.c[2].conj()],
            self.frame,
        )
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest absolute component difference after aligning frames.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let o = self.aligned(other);
        (0..3)
            .map(|i| (self.c[i] - o.c[i]).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new([self.c[0] * s, self.c[1] * s, self.c[2] * s], self.frame)
    }

    /// Coefficients `(a_+, a_-, a_3)` in `v = a_+ e_+ + a_- e_- + a_3 e_3`.
    pub fn helical_components(&self) -> [Complex64; 3] {
        let [x, y, z] = self.to_cartesian().c;
        [(x - I * y) * 0.5, (x + I * y) * 0.5, z]
    }
}

impl Add for ComplexVec3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let o = self.aligned(&rhs);
        Self::new(
            [self.c[0] + o.c[0], self.c[1] + o.c[1], self.c[2] + o.c[2]],
            self.frame,
        )
    }
}

impl Sub for ComplexVec3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ComplexVec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new([-self.c[0], -self.c[1], -self.c[2]], self.frame)
    }
}

impl Mul<Complex64> for ComplexVec3 {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        self.scale(s)
    }
}

impl Mul<f64> for ComplexVec3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn frame_round_trip() {
        let v = ComplexVec3::new(
            [c(1.0, 2.0), c(-0.5, 0.3), c(0.1, -4.0)],
            Frame::Cylindrical { phi: 0.7 },
        );
        let back = v.to_cartesian().to_cylindrical(0.7);
        assert!(v.max_abs_diff(&back) < 1e-15);
        for (a, b) in v.c.iter().zip(back.c.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn helical_basis_norms() {
        assert!((ComplexVec3::e_plus().norm_sqr() - 2.0).abs() < 1e-15);
        assert!((ComplexVec3::e_minus().norm_sqr() - 2.0).abs() < 1e-15);
        let h = ComplexVec3::e_plus().helical_components();
        assert!((h[0] - c(1.0, 0.0)).norm() < 1e-15 && h[1].norm() < 1e-15);
    }

    #[test]
    fn cross_is_frame_independent() {
        let a = ComplexVec3::new(
            [c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0)],
            Frame::Cylindrical { phi: 1.1 },
        );
        let b = ComplexVec3::new(
            [c(0.3, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            Frame::Cylindrical { phi: 1.1 },
        );
        let cyl = a.cross(&b).to_cartesian();
        let cart = a.to_cartesian().cross(&b.to_cartesian());
        assert!(cyl.max_abs_diff(&cart) < 1e-14);
    }
}

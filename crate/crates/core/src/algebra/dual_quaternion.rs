use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{DualNumber, Quaternion};
use crate::error::{Error, Result};
use crate::tolerance::Tolerance;

/// Dual quaternion `p + ε q`; its eight coefficients are the Study parameters
/// `[p0, p1, p2, p3, q0, q1, q2, q3]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DualQuaternion {
    pub p: Quaternion,
    pub q: Quaternion,
}

impl DualQuaternion {
    pub const ZERO: DualQuaternion = DualQuaternion::new(Quaternion::ZERO, Quaternion::ZERO);
    pub const ONE: DualQuaternion = DualQuaternion::new(Quaternion::ONE, Quaternion::ZERO);

    #[inline]
    pub const fn new(p: Quaternion, q: Quaternion) -> Self {
        Self { p, q }
    }

    /// `1 · p`, i.e. a dual quaternion with zero dual part.
    #[inline]
    pub fn primal(p: Quaternion) -> Self {
        Self::new(p, Quaternion::ZERO)
    }

    /// `ε q`.
    #[inline]
    pub fn epsilon(q: Quaternion) -> Self {
        Self::new(Quaternion::ZERO, q)
    }

    #[inline]
    pub fn scalar(s: f64) -> Self {
        Self::primal(Quaternion::scalar(s))
    }

    pub fn from_array(c: [f64; 8]) -> Self {
        Self::new(
            Quaternion::new(c[0], c[1], c[2], c[3]),
            Quaternion::new(c[4], c[5], c[6], c[7]),
        )
    }

    pub fn to_array(self) -> [f64; 8] {
        let [p0, p1, p2, p3] = self.p.to_array();
        let [q0, q1, q2, q3] = self.q.to_array();
        [p0, p1, p2, p3, q0, q1, q2, q3]
    }

    /// Pure translation by `a`: `1 − ½ ε a`.
    pub fn translation(a: &Vector3<f64>) -> Self {
        Self::new(Quaternion::ONE, Quaternion::pure(a).scale(-0.5))
    }

    /// Rotation by `angle` about the unit axis `u` through the origin.
    pub fn rotation(u: &Vector3<f64>, angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Self::primal(Quaternion::new(c, s * u.x, s * u.y, s * u.z))
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.p.conj(), self.q.conj())
    }

    /// `h h̄ = p p̄ + ε (p q̄ + q p̄)`.
    pub fn norm(self) -> DualNumber {
        DualNumber::new(self.p.norm_squared(), 2.0 * self.p.dot(self.q))
    }

    /// Absolute dual part of the norm, `|p q̄ + q p̄|`.
    pub fn study_residual(self) -> f64 {
        (2.0 * self.p.dot(self.q)).abs()
    }

    /// Study residual of the representative with unit primal part; invariant under scaling.
    pub fn relative_study_residual(self) -> f64 {
        let n = self.p.norm_squared();
        if n == 0.0 {
            return f64::INFINITY;
        }
        self.study_residual() / n
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.p.scale(s), self.q.scale(s))
    }

    /// Divides by the square root of the primal norm. Errors on the exceptional generator.
    pub fn normalize(self, tol: Tolerance) -> Result<Self> {
        let n = self.p.norm_squared();
        if n <= tol.get() * tol.get() {
            return Err(Error::ZeroPrimal { norm: n });
        }
        Ok(self.scale(1.0 / n.sqrt()))
    }

    /// Representative on the Study quadric with the same displacement:
    /// `p + ε (q − (p·q / p·p) p)`. Points `h + μ ε p` share one displacement.
    pub fn study_projection(self) -> Self {
        let n = self.p.norm_squared();
        if n == 0.0 {
            return self;
        }
        let lambda = self.p.dot(self.q) / n;
        Self::new(self.p, self.q - self.p.scale(lambda))
    }

    /// Applies the displacement to a point:
    /// `1 + εx ↦ (p p̄)⁻¹ (p − εq)(1 + εx)(p̄ + εq̄)`.
    ///
    /// The dual part of the right-hand side is `p x p̄ + p q̄ − q p̄`, a pure
    /// quaternion for every `h` with `p ≠ 0`, so this is also the extended
    /// map on points off the Study quadric.
    pub fn act(self, x: &Vector3<f64>, tol: Tolerance) -> Result<Vector3<f64>> {
        let n = self.p.norm_squared();
        if n < tol.get() {
            return Err(Error::ZeroPrimal { norm: n });
        }
        Ok(self.act_unchecked(x))
    }

    pub(crate) fn act_unchecked(self, x: &Vector3<f64>) -> Vector3<f64> {
        let (p, q) = (self.p, self.q);
        let xq = Quaternion::pure(x);
        let y = p * xq * p.conj() + p * q.conj() - q * p.conj();
        y.vector() / p.norm_squared()
    }

    /// Inverse in the dual-quaternion algebra: `p⁻¹ − ε p⁻¹ q p⁻¹`.
    pub fn inverse(self, tol: Tolerance) -> Result<Self> {
        let n = self.p.norm_squared();
        if n < tol.get() {
            return Err(Error::ZeroPrimal { norm: n });
        }
        let pinv = self.p.conj().scale(1.0 / n);
        Ok(Self::new(pinv, -(pinv * self.q * pinv)))
    }

    pub fn max_abs(self) -> f64 {
        self.p.max_abs().max(self.q.max_abs())
    }

    pub fn euclidean_norm(self) -> f64 {
        (self.p.norm_squared() + self.q.norm_squared()).sqrt()
    }

    /// Distance between the points of P⁷ represented by `self` and `other`:
    /// both are scaled to unit Euclidean length, signs aligned, then compared.
    pub fn projective_distance(self, other: Self) -> f64 {
        let a = self.to_array();
        let b = other.to_array();
        let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nb = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        if na == 0.0 || nb == 0.0 {
            return if na == nb { 0.0 } else { f64::INFINITY };
        }
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let sign = if dot < 0.0 { -1.0 } else { 1.0 };
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x / na - sign * y / nb).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

impl Add for DualQuaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.p + o.p, self.q + o.q)
    }
}

impl AddAssign for DualQuaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for DualQuaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for DualQuaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for DualQuaternion {
    type Output = Self;
    /// `(p1 + εq1)(p2 + εq2) = p1 p2 + ε (p1 q2 + q1 p2)`.
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(self.p * o.p, self.p * o.q + self.q * o.p)
    }
}

impl Mul<f64> for DualQuaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    const TOL: Tolerance = Tolerance::DEFAULT;

    #[test]
    fn dual_unit_products() {
        let a = DualQuaternion::new(Quaternion::ONE, Quaternion::I);
        let b = DualQuaternion::new(Quaternion::ONE, Quaternion::J);
        assert_eq!(
            a * b,
            DualQuaternion::new(Quaternion::ONE, Quaternion::I + Quaternion::J)
        );
        assert_eq!(
            DualQuaternion::primal(Quaternion::I) * DualQuaternion::primal(Quaternion::J),
            DualQuaternion::primal(Quaternion::K)
        );
    }

    #[test]
    fn norm_of_one_plus_i() {
        let h = DualQuaternion::primal(Quaternion::ONE + Quaternion::I);
        assert_eq!(h.norm(), DualNumber::new(2.0, 0.0));
    }

    #[test]
    fn conj_is_componentwise() {
        let h = DualQuaternion::from_array([0.1, 0.2, -0.3, 0.4, 1.0, -2.0, 3.0, 0.5]);
        assert_eq!(h.conj(), DualQuaternion::new(h.p.conj(), h.q.conj()));
    }

    #[test]
    fn act_examples() {
        let x = Vector3::new(0.3, -1.0, 2.5);
        assert_eq!(DualQuaternion::ONE.act(&x, TOL).unwrap(), x);

        let shift = DualQuaternion::new(Quaternion::ONE, Quaternion::K.scale(-0.5));
        let y = shift.act(&Vector3::zeros(), TOL).unwrap();
        assert!((y - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-15);

        let theta: f64 = 0.77;
        let rot = DualQuaternion::primal(Quaternion::new((theta / 2.0).cos(), 0.0, 0.0, (theta / 2.0).sin()));
        let y = rot.act(&Vector3::x(), TOL).unwrap();
        assert!((y - Vector3::new(theta.cos(), theta.sin(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn act_rejects_exceptional_generator() {
        let h = DualQuaternion::epsilon(Quaternion::I);
        assert!(matches!(h.act(&Vector3::zeros(), TOL), Err(Error::ZeroPrimal { .. })));
    }

    #[test]
    fn translation_and_rotation_constructors() {
        let a = Vector3::new(1.0, -2.0, 0.5);
        let y = DualQuaternion::translation(&a).act(&Vector3::zeros(), TOL).unwrap();
        assert!((y - a).norm() < 1e-15);
        let r = DualQuaternion::rotation(&Vector3::z(), FRAC_PI_2);
        let y = r.act(&Vector3::x(), TOL).unwrap();
        assert!((y - Vector3::y()).norm() < 1e-15);
    }

    #[test]
    fn product_composes_actions() {
        let g = DualQuaternion::rotation(&Vector3::new(0.0, 0.6, 0.8), 1.1)
            * DualQuaternion::translation(&Vector3::new(0.2, 0.1, -0.4));
        let h =
            DualQuaternion::translation(&Vector3::new(-1.0, 3.0, 2.0)) * DualQuaternion::rotation(&Vector3::x(), -0.3);
        let x = Vector3::new(0.5, 0.25, -2.0);
        let lhs = (g * h).act(&x, TOL).unwrap();
        let rhs = g.act(&h.act(&x, TOL).unwrap(), TOL).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn fiber_shift_keeps_displacement() {
        let h =
            DualQuaternion::rotation(&Vector3::y(), 0.4) * DualQuaternion::translation(&Vector3::new(1.0, 2.0, 3.0));
        let shifted = h + DualQuaternion::epsilon(h.p).scale(0.7);
        let x = Vector3::new(-0.3, 0.9, 1.5);
        let a = h.act(&x, TOL).unwrap();
        let b = shifted.act(&x, TOL).unwrap();
        assert!((a - b).norm() < 1e-14);
        assert!(shifted.study_projection().study_residual() < 1e-15);
        assert!(shifted.study_projection().projective_distance(h) < 1e-15);
    }

    #[test]
    fn inverse_is_two_sided() {
        let h = DualQuaternion::from_array([0.3, -0.1, 0.7, 0.2, 0.5, 0.4, -1.0, 2.0]);
        let inv = h.inverse(TOL).unwrap();
        assert!((h * inv - DualQuaternion::ONE).max_abs() < 1e-14);
        assert!((inv * h - DualQuaternion::ONE).max_abs() < 1e-14);
    }

    #[test]
    fn normalize_does_not_touch_direction() {
        let h = DualQuaternion::from_array([2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0]);
        let n = h.normalize(TOL).unwrap();
        assert_eq!(n.to_array(), [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0]);
        assert!(DualQuaternion::epsilon(Quaternion::K).normalize(TOL).is_err());
    }
}

use nalgebra::Vector3;
use serde::Serialize;

use crate::algebra::{DualQuatPoly, DualQuaternion};
use crate::error::{Error, Result};
use crate::posemodels::{displacement_matrix, PoseMatrix};
use crate::tolerance::Tolerance;

/// How a [`MotionCurve`] was built.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Constant,
    Darboux { s_a: f64, s_b: f64 },
    Cubic { m: [f64; 4], a_ess: f64, b_ess: f64 },
    HelicalSampled { phi: f64, d: f64 },
    LineSymmetric,
    Bezier { control_points: usize },
}

/// Screw motion `left · Z(tφ, td) · right`, `Z` the screw about the third axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct HelicalMotion {
    pub left: DualQuaternion,
    pub right: DualQuaternion,
    pub phi: f64,
    pub d: f64,
}

/// Rotation by `angle` about the third axis followed by translation `d` along it.
pub fn screw_about_z(angle: f64, d: f64) -> DualQuaternion {
    DualQuaternion::translation(&Vector3::new(0.0, 0.0, d)) * DualQuaternion::rotation(&Vector3::z(), angle)
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Polynomial(DualQuatPoly),
    Helical(HelicalMotion),
}

/// A one-parameter motion `t ↦ h(t)` on a parameter interval.
///
/// Polynomial motions may leave the Study quadric (lines in P⁷); their poses are
/// read through the extended map, so [`MotionCurve::pose_at`] returns the
/// Study-projected, normalised representative.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionCurve {
    repr: Repr,
    domain: (f64, f64),
    provenance: Provenance,
}

impl MotionCurve {
    pub fn polynomial(poly: DualQuatPoly, domain: (f64, f64), provenance: Provenance) -> Result<Self> {
        let primal_zero = poly.coeffs.iter().all(|c| c.p.max_abs() == 0.0);
        if primal_zero {
            return Err(Error::ZeroPrimal { norm: 0.0 });
        }
        Ok(Self {
            repr: Repr::Polynomial(poly),
            domain,
            provenance,
        })
    }

    pub(crate) fn helical(h: HelicalMotion) -> Self {
        Self {
            repr: Repr::Helical(h),
            domain: (0.0, 1.0),
            provenance: Provenance::HelicalSampled { phi: h.phi, d: h.d },
        }
    }

    pub fn constant(h: DualQuaternion) -> Result<Self> {
        Self::polynomial(DualQuatPoly::constant(h), (0.0, 1.0), Provenance::Constant)
    }

    /// The polynomial, or `None` for sampled (non-algebraic) motions.
    pub fn poly(&self) -> Option<&DualQuatPoly> {
        match &self.repr {
            Repr::Polynomial(p) => Some(p),
            Repr::Helical(_) => None,
        }
    }

    pub fn is_algebraic(&self) -> bool {
        self.poly().is_some()
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn with_domain(mut self, domain: (f64, f64)) -> Self {
        self.domain = domain;
        self
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// The unnormalised dual quaternion at `t`.
    pub fn raw_at(&self, t: f64) -> DualQuaternion {
        match &self.repr {
            Repr::Polynomial(p) => p.eval(t),
            Repr::Helical(h) => h.left * screw_about_z(t * h.phi, t * h.d) * h.right,
        }
    }

    /// Unit Study parameters of the pose at `t`.
    pub fn pose_at(&self, t: f64, tol: Tolerance) -> Result<DualQuaternion> {
        let h = self.raw_at(t);
        if h.p.norm_squared() <= tol.get() * tol.get() * h.max_abs().max(1.0).powi(2) {
            return Err(Error::PrimalVanishes { t });
        }
        h.study_projection().normalize(tol)
    }

    pub fn pose_matrix_at(&self, t: f64, tol: Tolerance) -> Result<PoseMatrix> {
        displacement_matrix(&self.pose_at(t, tol)?, tol)
    }

    /// `n ≥ 2` equally spaced parameters covering the domain.
    pub fn sample_times(&self, n: usize) -> Vec<f64> {
        sample_interval(self.domain, n)
    }

    /// `left · h(t) · right`.
    pub fn transformed(&self, left: DualQuaternion, right: DualQuaternion) -> Self {
        let repr = match &self.repr {
            Repr::Polynomial(p) => Repr::Polynomial(p.left_mul(left).right_mul(right)),
            Repr::Helical(h) => Repr::Helical(HelicalMotion {
                left: left * h.left,
                right: h.right * right,
                ..*h
            }),
        };
        Self {
            repr,
            domain: self.domain,
            provenance: self.provenance.clone(),
        }
    }
}

pub(crate) fn sample_interval(domain: (f64, f64), n: usize) -> Vec<f64> {
    let n = n.max(2);
    let (a, b) = domain;
    (0..n)
        .map(|k| {
            if k == n - 1 {
                b
            } else {
                a + (b - a) * k as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Largest projective distance between the poses of two motions over `samples`
/// parameters of the first motion's domain.
pub fn curve_distance(a: &MotionCurve, b: &MotionCurve, samples: usize, tol: Tolerance) -> Result<f64> {
    let mut worst = 0.0_f64;
    for t in a.sample_times(samples) {
        let d = a.pose_at(t, tol)?.projective_distance(b.pose_at(t, tol)?);
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Instantaneous pitch `dz/dω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Pitch {
    Finite(f64),
    /// Angular rate vanishes, translational rate does not.
    Infinite,
    /// Both rates vanish.
    Undefined,
}

impl Pitch {
    pub fn from_rates(omega_rate: f64, z_rate: f64, tol: Tolerance) -> Self {
        if omega_rate.abs() > tol.get() * (1.0 + z_rate.abs()) {
            Pitch::Finite(z_rate / omega_rate)
        } else if z_rate.abs() > tol.get() {
            Pitch::Infinite
        } else {
            Pitch::Undefined
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Pitch::Finite(v) => Some(v),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_motion() {
        let m = MotionCurve::constant(DualQuaternion::ONE).unwrap();
        assert_eq!(m.pose_at(0.3, Tolerance::DEFAULT).unwrap(), DualQuaternion::ONE);
        assert!(MotionCurve::constant(DualQuaternion::ZERO).is_err());
    }

    #[test]
    fn screw_about_z_matrix() {
        let h = screw_about_z(std::f64::consts::FRAC_PI_2, 1.0);
        let pose = displacement_matrix(&h, Tolerance::DEFAULT).unwrap();
        assert!(pose.max_difference(&PoseMatrix::about_z(std::f64::consts::FRAC_PI_2, 1.0)) < 1e-15);
    }

    #[test]
    fn samples_cover_domain() {
        assert_eq!(sample_interval((0.0, 1.0), 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(sample_interval((2.0, 3.0), 1), vec![2.0, 3.0]);
    }

    #[test]
    fn pitch_from_rates() {
        let tol = Tolerance::DEFAULT;
        assert_eq!(Pitch::from_rates(2.0, 1.0, tol), Pitch::Finite(0.5));
        assert_eq!(Pitch::from_rates(0.0, 1.0, tol), Pitch::Infinite);
        assert_eq!(Pitch::from_rates(0.0, 0.0, tol), Pitch::Undefined);
    }
}

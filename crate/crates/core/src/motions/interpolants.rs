use nalgebra::Vector3;

use super::canonical::{CanonicalPair, ScrewInvariants};
use super::curve::{HelicalMotion, MotionCurve, Pitch, Provenance};
use crate::algebra::{DualQuatPoly, DualQuaternion, RealPoly};
use crate::error::{Error, Result};
use crate::extmap::{fiber, mu_polynomial, mu_prime, nullspace_basis, FiberOffsets, MapSelector};
use crate::posemodels::{matrix_to_dq, AmbientPose, PoseMatrix};
use crate::tolerance::Tolerance;

/// Smallest parameter in `domain` where the primal part of `poly` vanishes.
pub fn primal_zero_in(poly: &DualQuatPoly, domain: (f64, f64), tol: Tolerance) -> Option<f64> {
    let w = poly.primal_norm();
    let scale = w.max_abs();
    if scale == 0.0 {
        return Some(domain.0);
    }
    let mut candidates = vec![domain.0, domain.1];
    candidates.extend(
        w.derivative()
            .real_roots(1e-9)
            .into_iter()
            .filter(|t| *t >= domain.0 && *t <= domain.1),
    );
    candidates
        .into_iter()
        .filter(|t| w.eval(*t) <= tol.get() * tol.get() * scale)
        .min_by(f64::total_cmp)
}

/// The segment `(1 − t) h'_A + t h'_B` between the fiber representatives
/// `h'_A = h_A + s_A ε p_A` and `h'_B = h_B + s_B ε p_B`.
///
/// Both inputs are normalised and `h_B` is negated if `p_A · p_B < 0`.
pub fn darboux_interpolant(
    h_a: DualQuaternion,
    h_b: DualQuaternion,
    s_a: f64,
    s_b: f64,
    tol: Tolerance,
) -> Result<MotionCurve> {
    for h in [h_a, h_b] {
        let r = h.relative_study_residual();
        if r > tol.get() {
            return Err(Error::StudyViolation { residual: r });
        }
    }
    let a = h_a.normalize(tol)?;
    let mut b = h_b.normalize(tol)?;
    if a.p.dot(b.p) < 0.0 {
        b = -b;
    }
    let a = DualQuaternion::new(a.p, a.q + a.p.scale(s_a));
    let b = DualQuaternion::new(b.p, b.q + b.p.scale(s_b));
    let poly = DualQuatPoly::segment(a, b);
    if let Some(t) = primal_zero_in(&poly, (0.0, 1.0), tol) {
        return Err(Error::PrimalVanishes { t });
    }
    MotionCurve::polynomial(poly, (0.0, 1.0), Provenance::Darboux { s_a, s_b })
}

/// [`darboux_interpolant`] between the poses of a pair.
pub fn darboux_for_pair(pair: &CanonicalPair, s_a: f64, s_b: f64, tol: Tolerance) -> Result<MotionCurve> {
    if pair.degenerate {
        return MotionCurve::constant(pair.start_dq());
    }
    darboux_interpolant(matrix_to_dq(&pair.a, tol)?, matrix_to_dq(&pair.b, tol)?, s_a, s_b, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CubicOptions {
    /// Accept essentials for which the motion has a pole inside `[0, 1]`.
    pub allow_pole: bool,
}

/// Image under `μ_m` of the segment joining points in the fibers over the
/// identity and `B₀(φ, d)`, carried back to the pair's frame.
pub fn cubic_interpolant(
    pair: &CanonicalPair,
    m: &MapSelector,
    alpha: &FiberOffsets,
    beta: &FiberOffsets,
    tol: Tolerance,
) -> Result<MotionCurve> {
    cubic_interpolant_with(pair, m, alpha, beta, CubicOptions::default(), tol)
}

pub fn cubic_interpolant_with(
    pair: &CanonicalPair,
    m: &MapSelector,
    alpha: &FiberOffsets,
    beta: &FiberOffsets,
    options: CubicOptions,
    tol: Tolerance,
) -> Result<MotionCurve> {
    if pair.degenerate {
        return MotionCurve::constant(pair.start_dq());
    }
    let x_a = AmbientPose::from_pose(&PoseMatrix::identity());
    let x_b = AmbientPose::from_pose(&pair.canonical_end());
    let y_a = fiber(m, &x_a, tol)?.point(alpha);
    let y_b = fiber(m, &x_b, tol)?.point(beta);
    let a_ess = y_a.x0() - 1.0;
    let b_ess = y_b.x0() - 1.0;

    if !options.allow_pole {
        if let Some(t) = homogenizer_root(a_ess, b_ess) {
            return Err(Error::PoleInDomain { t });
        }
    }
    let u0 = mu_prime(m, &y_a.rotational());
    let u1 = mu_prime(m, &y_b.rotational());
    if let Some(t) = segment_zero(u0, u1, tol) {
        return Err(Error::ZeroImage { t: Some(t) });
    }

    let line: [RealPoly; 13] = std::array::from_fn(|i| RealPoly::linear(y_a.coords[i], y_b.coords[i] - y_a.coords[i]));
    let canonical = mu_polynomial(m, &line);
    let (l, r) = pair.outer_factors();
    MotionCurve::polynomial(
        canonical.left_mul(l).right_mul(r),
        (0.0, 1.0),
        Provenance::Cubic { m: m.m(), a_ess, b_ess },
    )
}

/// Cubic interpolant for prescribed essential scalars.
pub fn cubic_from_essentials(
    pair: &CanonicalPair,
    m: &MapSelector,
    a_ess: f64,
    b_ess: f64,
    options: CubicOptions,
    tol: Tolerance,
) -> Result<MotionCurve> {
    let basis = nullspace_basis(m);
    let alpha = basis.offsets_for_shift(a_ess)?;
    let beta = basis.offsets_for_shift(b_ess)?;
    cubic_interpolant_with(pair, m, &alpha, &beta, options, tol)
}

/// Root in `[0, 1]` of `(1 − t) a + t b + 1`.
pub fn homogenizer_root(a: f64, b: f64) -> Option<f64> {
    let (h0, h1) = (1.0 + a, 1.0 + b);
    if h0 == 0.0 {
        return Some(0.0);
    }
    if h0.signum() == h1.signum() && h1 != 0.0 {
        return None;
    }
    Some(h0 / (h0 - h1))
}

fn segment_zero(u0: [f64; 4], u1: [f64; 4], tol: Tolerance) -> Option<f64> {
    let d: [f64; 4] = std::array::from_fn(|i| u1[i] - u0[i]);
    let dd: f64 = d.iter().map(|v| v * v).sum();
    let t = if dd == 0.0 {
        0.0
    } else {
        (-(0..4).map(|i| u0[i] * d[i]).sum::<f64>() / dd).clamp(0.0, 1.0)
    };
    let at: f64 = (0..4).map(|i| (u0[i] + t * d[i]).powi(2)).sum::<f64>().sqrt();
    let scale = u0.iter().chain(u1.iter()).fold(1.0_f64, |m, v| m.max(v.abs()));
    (at <= tol.get() * scale).then_some(t)
}

/// Constant-pitch screw motion from `A` to `B`, sampled rather than polynomial.
pub fn helical_interpolant(pair: &CanonicalPair) -> (MotionCurve, ScrewInvariants) {
    let (left, right) = pair.outer_factors();
    let motion = MotionCurve::helical(HelicalMotion {
        left,
        right,
        phi: pair.phi,
        d: pair.d,
    });
    let pitch = if pair.degenerate {
        Pitch::Undefined
    } else if pair.phi == 0.0 {
        Pitch::Infinite
    } else {
        Pitch::Finite(pair.d / pair.phi)
    };
    let invariants = ScrewInvariants {
        axis: pair.world_axis(),
        angle: pair.phi,
        translation: pair.d,
        pitch,
    };
    (motion, invariants)
}

/// Pose on the third coordinate axis, used by tests and examples.
pub fn canonical_pose(phi: f64, d: f64) -> PoseMatrix {
    PoseMatrix::about_z(phi, d)
}

/// Translation of `h` read through the extended map.
pub(crate) fn translation_of(h: &DualQuaternion) -> Vector3<f64> {
    let tq = h.q * h.p.conj();
    tq.vector() * (-2.0 / h.p.norm_squared())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motions::canonical::canonicalize_pair;
    use std::f64::consts::FRAC_PI_2;

    const TOL: Tolerance = Tolerance::DEFAULT;

    fn pair() -> CanonicalPair {
        canonicalize_pair(&PoseMatrix::identity(), &PoseMatrix::about_z(FRAC_PI_2, 1.0), TOL).unwrap()
    }

    #[test]
    fn darboux_constant() {
        let m = darboux_interpolant(DualQuaternion::ONE, DualQuaternion::ONE, 0.0, 0.0, TOL).unwrap();
        assert!(m.poly().unwrap().degree(1e-15).unwrap() == 0);
    }

    #[test]
    fn darboux_flips_antipodal_representative() {
        let hb = -DualQuaternion::rotation(&Vector3::z(), 0.5);
        let m = darboux_interpolant(DualQuaternion::ONE, hb, 0.0, 0.0, TOL).unwrap();
        let end = m.pose_at(1.0, TOL).unwrap();
        assert!(end.projective_distance(hb) < 1e-15);
    }

    #[test]
    fn cubic_reaches_end_pose() {
        let m = MapSelector::classical();
        let c = cubic_interpolant(&pair(), &m, &FiberOffsets::zero(), &FiberOffsets::zero(), TOL).unwrap();
        let end = c.pose_matrix_at(1.0, TOL).unwrap();
        assert!(end.max_difference(&canonical_pose(FRAC_PI_2, 1.0)) < 1e-12);
        assert_eq!(c.poly().unwrap().degree(1e-14), Some(2));
    }

    #[test]
    fn pole_is_rejected_unless_allowed() {
        let m = MapSelector::classical();
        let err = cubic_from_essentials(&pair(), &m, 0.0, -3.0, CubicOptions::default(), TOL).unwrap_err();
        assert!(matches!(err, Error::PoleInDomain { t } if (t - 1.0 / 3.0).abs() < 1e-15));
        let allow = CubicOptions { allow_pole: true };
        assert!(cubic_from_essentials(&pair(), &m, 0.0, -3.0, allow, TOL).is_ok());
    }

    #[test]
    fn zero_image_at_identity_for_m0_zero() {
        let m = MapSelector::new([0.0, 1.0, 0.0, 0.0]).unwrap();
        let err = cubic_interpolant(&pair(), &m, &FiberOffsets::zero(), &FiberOffsets::zero(), TOL);
        assert!(matches!(err, Err(Error::ZeroImage { .. })));
    }

    #[test]
    fn helical_pitch() {
        let (h, s) = helical_interpolant(&pair());
        assert_eq!(s.pitch, Pitch::Finite(2.0 / std::f64::consts::PI));
        assert!(!h.is_algebraic());
        let end = h.pose_matrix_at(1.0, TOL).unwrap();
        assert!(end.max_difference(&canonical_pose(FRAC_PI_2, 1.0)) < 1e-12);
    }
}

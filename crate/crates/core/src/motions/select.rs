use super::canonical::CanonicalPair;
use super::curve::{MotionCurve, Pitch};
use super::interpolants::{cubic_from_essentials, darboux_for_pair, translation_of, CubicOptions};
use super::transmission::pitch_at;
use crate::error::{Error, Result};
use crate::extmap::MapSelector;
use crate::posemodels::PoseMatrix;
use crate::tolerance::Tolerance;

/// Extra condition singling out one interpolant of a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    /// The Darboux motion through a third pose of the pair's cylinder group.
    DarbouxThirdPose(PoseMatrix),
    /// The Darboux motion with prescribed pitch at `t = 0`.
    DarbouxStartPitch(f64),
    /// The Darboux motion with prescribed pitch at `t = 1`.
    DarbouxEndPitch(f64),
    /// A cubic circular motion with prescribed pitches at both ends.
    CubicPitchPair { start: f64, end: f64, m: MapSelector },
}

pub fn select_interpolant(pair: &CanonicalPair, constraint: &Constraint, tol: Tolerance) -> Result<MotionCurve> {
    if pair.degenerate {
        return Err(Error::DegenerateRelative);
    }
    match *constraint {
        Constraint::DarbouxThirdPose(c) => darboux_through(pair, &c, tol),
        Constraint::DarbouxStartPitch(p) => darboux_with_pitch(pair, 0.0, p, tol),
        Constraint::DarbouxEndPitch(p) => darboux_with_pitch(pair, 1.0, p, tol),
        Constraint::CubicPitchPair { start, end, m } => cubic_with_pitches(pair, start, end, &m, tol),
    }
}

/// Darboux motions of the pair form a one-parameter family in `δ = s_B − s_A`;
/// every quantity used below is affine in `δ`.
fn darboux_family(pair: &CanonicalPair, delta: f64, tol: Tolerance) -> Result<MotionCurve> {
    darboux_for_pair(pair, 0.0, delta, tol)
}

fn solve_affine(f0: f64, f1: f64, target: f64, what: &str) -> Result<f64> {
    let slope = f1 - f0;
    if slope.abs() <= 1e-12 * (1.0 + f0.abs()) {
        return Err(Error::NoSolution(format!(
            "{what} does not depend on the free parameter"
        )));
    }
    Ok((target - f0) / slope)
}

fn darboux_through(pair: &CanonicalPair, c: &PoseMatrix, tol: Tolerance) -> Result<MotionCurve> {
    let c0 = pair.to_canonical(c);
    let axis_dev = (c0.linear.column(2) - nalgebra::Vector3::z()).norm();
    let tr = c0.translation;
    let deviation = axis_dev.max(tr.x.hypot(tr.y) / (1.0 + tr.norm()));
    if deviation > 1e3 * tol.get() {
        return Err(Error::ThirdPoseNotInCylinder { deviation });
    }
    let omega_c = c0.linear[(1, 0)].atan2(c0.linear[(0, 0)]);
    let theta = 0.5 * pair.phi;
    let half = 0.5 * omega_c;
    let den = half.sin() + (theta - half).sin();
    if den.abs() <= tol.get() {
        return Err(Error::NoSolution("third pose lies at parameter infinity".into()));
    }
    let t_c = half.sin() / den;
    let z_at = |delta: f64| -> Result<f64> {
        let h = darboux_family(pair, delta, tol)?.raw_at(t_c);
        Ok(translation_of(&pair.to_canonical_dq(h)).z)
    };
    let delta = solve_affine(z_at(0.0)?, z_at(1.0)?, tr.z, "translation at the third pose")
        .map_err(|_| Error::NoSolution("third pose is not separated from the end poses".into()))?;
    darboux_family(pair, delta, tol)
}

fn darboux_with_pitch(pair: &CanonicalPair, t: f64, target: f64, tol: Tolerance) -> Result<MotionCurve> {
    let pitch = |delta: f64| -> Result<f64> {
        match pitch_at(&darboux_family(pair, delta, tol)?, pair, t, tol)? {
            Pitch::Finite(v) => Ok(v),
            _ => Err(Error::NoSolution("angular velocity vanishes at the end pose".into())),
        }
    };
    let delta = solve_affine(pitch(0.0)?, pitch(1.0)?, target, "pitch")?;
    darboux_family(pair, delta, tol)
}

/// The product `pitch(0) · pitch(1)` shared by all cubic interpolants of a pair.
pub fn cubic_pitch_product(phi: f64, d: f64) -> f64 {
    let s = (0.5 * phi).sin();
    d * d / (4.0 * s * s)
}

fn cubic_with_pitches(
    pair: &CanonicalPair,
    start: f64,
    end: f64,
    m: &MapSelector,
    tol: Tolerance,
) -> Result<MotionCurve> {
    if start * end <= 0.0 {
        return Err(Error::PitchPairInfeasible {
            reason: "end pitches of a cubic circular motion have the same sign".into(),
        });
    }
    if pair.phi.abs() <= tol.get() {
        return Err(Error::NoSolution(
            "no rotation between the poses; pitches are infinite".into(),
        ));
    }
    let required = cubic_pitch_product(pair.phi, pair.d);
    let product = start * end;
    if (product - required).abs() > 1e-9 * required.max(product) {
        return Err(Error::PitchPairInfeasible {
            reason: format!(
                "end pitches of every cubic interpolant multiply to d²/(4 sin²(φ/2)) = {required}, got {product}"
            ),
        });
    }
    let [m0, _, _, m3] = m.m();
    let n1 = m0 * pair.phi.sin() + m3 * (1.0 - pair.phi.cos());
    if m0 == 0.0 || n1 == 0.0 {
        return Err(Error::NoSolution("selector has no rotation at the start pose".into()));
    }
    let rho = start * n1 / (pair.d * m0);
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::NoSolution(
            "selector turns the motion the other way; the pitch sign is unattainable".into(),
        ));
    }
    cubic_from_essentials(pair, m, 0.0, rho - 1.0, CubicOptions::default(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motions::canonical::canonicalize_pair;
    use crate::motions::curve::curve_distance;
    use std::f64::consts::FRAC_PI_2;

    const TOL: Tolerance = Tolerance::DEFAULT;

    fn pair() -> CanonicalPair {
        canonicalize_pair(&PoseMatrix::identity(), &PoseMatrix::about_z(FRAC_PI_2, 1.0), TOL).unwrap()
    }

    #[test]
    fn third_pose_recovers_planted_motion() {
        let planted = darboux_for_pair(&pair(), 0.3, -0.4, TOL).unwrap();
        let c = planted.pose_matrix_at(0.5, TOL).unwrap();
        let got = select_interpolant(&pair(), &Constraint::DarbouxThirdPose(c), TOL).unwrap();
        assert!(curve_distance(&planted, &got, 50, TOL).unwrap() < 1e-12);
    }

    #[test]
    fn third_pose_equal_to_end_is_rejected() {
        let c = PoseMatrix::about_z(FRAC_PI_2, 1.0);
        let err = select_interpolant(&pair(), &Constraint::DarbouxThirdPose(c), TOL).unwrap_err();
        assert!(matches!(err, Error::NoSolution(_)));
    }

    #[test]
    fn third_pose_off_cylinder() {
        let c = PoseMatrix::translation(nalgebra::Vector3::new(1.0, 0.0, 0.0));
        let err = select_interpolant(&pair(), &Constraint::DarbouxThirdPose(c), TOL).unwrap_err();
        assert!(matches!(err, Error::ThirdPoseNotInCylinder { .. }));
    }

    #[test]
    fn darboux_start_pitch() {
        let got = select_interpolant(&pair(), &Constraint::DarbouxStartPitch(0.25), TOL).unwrap();
        let p = pitch_at(&got, &pair(), 0.0, TOL).unwrap().value().unwrap();
        assert!((p - 0.25).abs() < 1e-12);
    }

    #[test]
    fn cubic_pitch_pair() {
        let m = MapSelector::classical();
        let product = cubic_pitch_product(FRAC_PI_2, 1.0);
        let c = Constraint::CubicPitchPair {
            start: 0.8,
            end: product / 0.8,
            m,
        };
        let got = select_interpolant(&pair(), &c, TOL).unwrap();
        let p0 = pitch_at(&got, &pair(), 0.0, TOL).unwrap().value().unwrap();
        let p1 = pitch_at(&got, &pair(), 1.0, TOL).unwrap().value().unwrap();
        assert!((p0 - 0.8).abs() < 1e-12 && (p1 - product / 0.8).abs() < 1e-12);

        let opposite = Constraint::CubicPitchPair {
            start: 1.0,
            end: -1.0,
            m,
        };
        assert!(matches!(
            select_interpolant(&pair(), &opposite, TOL),
            Err(Error::PitchPairInfeasible { .. })
        ));
    }
}

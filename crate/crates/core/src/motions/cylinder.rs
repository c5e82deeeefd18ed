use nalgebra::Vector3;

use super::canonical::{screw_invariants, Axis};
use super::curve::MotionCurve;
use crate::error::{Error, Result};
use crate::posemodels::PoseMatrix;
use crate::tolerance::Tolerance;

const SAMPLES: usize = 41;

/// Fixed axis of the cylinder group containing the motion.
///
/// Poses are compared with a reference pose, `G(t) = C(t) C(t_ref)⁻¹`; the
/// motion lies in a cylinder group iff every `G(t)` rotates about and
/// translates along one common line.
pub fn cylinder_check(motion: &MotionCurve, tol: Tolerance) -> Result<Axis> {
    let (lo, hi) = motion.domain();
    let t_ref = lo + 0.381_966_011_25 * (hi - lo);
    let reference = motion.pose_matrix_at(t_ref, tol)?.inverse();
    let rel: Vec<PoseMatrix> = motion
        .sample_times(SAMPLES)
        .into_iter()
        .filter_map(|t| motion.pose_matrix_at(t, tol).ok())
        .map(|c| c * reference)
        .collect();
    if rel.is_empty() {
        return Err(Error::NotCylindrical {
            deviation: f64::INFINITY,
        });
    }
    let screws: Vec<_> = rel.iter().map(|g| screw_invariants(g, tol)).collect::<Result<_>>()?;
    let best = screws
        .iter()
        .max_by(|a, b| a.angle.total_cmp(&b.angle))
        .expect("non-empty");
    let axis = if best.angle > 1e-6 {
        best.axis
    } else {
        let longest = rel
            .iter()
            .map(|g| g.translation)
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("non-empty");
        if longest.norm() <= tol.get() {
            return Ok(Axis::new(Vector3::zeros(), Vector3::z()));
        }
        Axis::new(Vector3::zeros(), longest)
    };
    let (c, u) = (axis.point(), axis.direction());
    let scale = 1.0 + c.norm() + rel.iter().map(|g| g.translation.norm()).fold(0.0, f64::max);
    let deviation = rel
        .iter()
        .map(|g| {
            let w = g.apply(&c) - c;
            let off = (w - u * w.dot(&u)).norm() / scale;
            (g.linear * u - u).norm().max(off)
        })
        .fold(0.0, f64::max);
    if deviation > 1e3 * tol.get() {
        return Err(Error::NotCylindrical { deviation });
    }
    Ok(axis)
}

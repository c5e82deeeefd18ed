//! Bézier curves in the ambient matrix space and their motions under `μ_m`.

use crate::algebra::RealPoly;
use crate::error::{Error, Result};
use crate::extmap::{fiber, mu_polynomial, FiberOffsets, MapSelector};
use crate::motions::{primal_zero_in, MotionCurve, Provenance};
use crate::posemodels::{AmbientPose, PoseMatrix};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct ControlPolygon {
    points: Vec<AmbientPose>,
}

impl ControlPolygon {
    pub fn new(points: Vec<AmbientPose>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidSpec("a control polygon needs at least two points".into()));
        }
        if let Some(i) = points.iter().position(|p| p.x0() == 0.0) {
            return Err(Error::InvalidSpec(format!("control point {i} has x0 = 0")));
        }
        Ok(Self { points })
    }

    /// Control poses, each moved inside its `μ_m`-fiber by the matching offsets.
    pub fn from_poses(
        poses: &[PoseMatrix],
        offsets: Option<&[FiberOffsets]>,
        m: &MapSelector,
        tol: Tolerance,
    ) -> Result<Self> {
        if let Some(o) = offsets {
            if o.len() != poses.len() {
                return Err(Error::InvalidSpec(format!(
                    "{} offsets given for {} control poses",
                    o.len(),
                    poses.len()
                )));
            }
        }
        let points = poses
            .iter()
            .enumerate()
            .map(|(i, pose)| {
                let x = AmbientPose::from_pose(pose);
                match offsets {
                    Some(o) => Ok(fiber(m, &x, tol)?.point(&o[i])),
                    None => Ok(x),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn points(&self) -> &[AmbientPose] {
        &self.points
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }
}

/// Point of the Bézier curve at `t` by repeated linear interpolation.
pub fn de_casteljau(cp: &ControlPolygon, t: f64) -> AmbientPose {
    let mut pts = cp.points.clone();
    for level in 1..pts.len() {
        for i in 0..pts.len() - level {
            pts[i] = pts[i] * (1.0 - t) + pts[i + 1] * t;
        }
    }
    pts[0]
}

/// Control polygons of the pieces over `[0, t]` and `[t, 1]`.
pub fn bezier_subdivide(cp: &ControlPolygon, t: f64) -> (ControlPolygon, ControlPolygon) {
    let mut pts = cp.points.clone();
    let n = pts.len();
    let mut left = vec![pts[0]];
    let mut right = vec![pts[n - 1]];
    for level in 1..n {
        for i in 0..n - level {
            pts[i] = pts[i] * (1.0 - t) + pts[i + 1] * t;
        }
        left.push(pts[0]);
        right.push(pts[n - 1 - level]);
    }
    right.reverse();
    (ControlPolygon { points: left }, ControlPolygon { points: right })
}

fn bernstein(n: usize, k: usize) -> RealPoly {
    let binom = (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    let mut p = RealPoly::constant(binom);
    for _ in 0..k {
        p = &p * &RealPoly::linear(0.0, 1.0);
    }
    for _ in k..n {
        p = &p * &RealPoly::linear(1.0, -1.0);
    }
    p
}

/// Coordinates of the Bézier curve as polynomials in `t`.
pub fn bezier_polynomials(cp: &ControlPolygon) -> [RealPoly; 13] {
    let n = cp.degree();
    let basis: Vec<RealPoly> = (0..=n).map(|k| bernstein(n, k)).collect();
    std::array::from_fn(|i| {
        cp.points
            .iter()
            .zip(&basis)
            .fold(RealPoly::zero(), |acc, (pt, b)| &acc + &b.scale(pt.coords[i]))
    })
}

/// The motion `μ_m(C(t))` of the Bézier curve, `t ∈ [0, 1]`.
pub fn bezier_motion(cp: &ControlPolygon, m: &MapSelector, tol: Tolerance) -> Result<MotionCurve> {
    let poly = mu_polynomial(m, &bezier_polynomials(cp));
    if let Some(t) = primal_zero_in(&poly, (0.0, 1.0), tol) {
        return Err(Error::ZeroImage { t: Some(t) });
    }
    MotionCurve::polynomial(
        poly,
        (0.0, 1.0),
        Provenance::Bezier {
            control_points: cp.points.len(),
        },
    )
}

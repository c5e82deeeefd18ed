//! Least-squares fits used by the trajectory and transmission diagnostics.

use nalgebra::{DMatrix, DVector, Vector2, Vector3};
use serde::Serialize;

/// Algebraic (Kåsa) circle fit in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleFit {
    pub center: [f64; 2],
    pub radius: f64,
    /// Largest deviation `| |x − c| − r |`, divided by `max(1, r)`.
    pub residual: f64,
}

fn centroid2(points: &[Vector2<f64>]) -> Vector2<f64> {
    points.iter().fold(Vector2::zeros(), |a, p| a + p) / points.len() as f64
}

pub fn circle_fit(points: &[[f64; 2]]) -> CircleFit {
    assert!(!points.is_empty(), "circle fit needs at least one point");
    let pts: Vec<Vector2<f64>> = points.iter().map(|p| Vector2::new(p[0], p[1])).collect();
    let mean = centroid2(&pts);
    let spread = pts.iter().map(|p| (p - mean).norm()).fold(0.0, f64::max);
    if spread <= 1e-12 * (1.0 + mean.norm()) || pts.len() < 3 {
        return CircleFit {
            center: [mean.x, mean.y],
            radius: 0.0,
            residual: spread,
        };
    }
    let n = pts.len();
    let a = DMatrix::from_fn(n, 3, |i, j| {
        let p = (pts[i] - mean) / spread;
        [p.x, p.y, 1.0][j]
    });
    let b = DVector::from_fn(n, |i, _| -((pts[i] - mean) / spread).norm_squared());
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .expect("svd computed with both factors");
    let c = Vector2::new(-sol[0] / 2.0, -sol[1] / 2.0);
    let r = (c.norm_squared() - sol[2]).max(0.0).sqrt() * spread;
    let center = mean + c * spread;
    let residual = pts.iter().map(|p| ((p - center).norm() - r).abs()).fold(0.0, f64::max) / r.max(1.0);
    CircleFit {
        center: [center.x, center.y],
        radius: r,
        residual,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneFit {
    pub centroid: [f64; 3],
    pub normal: [f64; 3],
    /// In-plane orthonormal directions, ordered by decreasing spread.
    pub axes: [[f64; 3]; 2],
    /// Singular values of the centred point cloud, descending.
    pub spread: [f64; 3],
    /// Largest distance from the plane.
    pub residual: f64,
}

pub fn plane_fit(points: &[Vector3<f64>]) -> PlaneFit {
    assert!(!points.is_empty(), "plane fit needs at least one point");
    let n = points.len();
    let c = points.iter().fold(Vector3::zeros(), |a, p| a + p) / n as f64;
    let m = DMatrix::from_fn(n.max(3), 3, |i, j| if i < n { (points[i] - c)[j] } else { 0.0 });
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut order = [0usize, 1, 2];
    order.sort_by(|a, b| svd.singular_values[*b].total_cmp(&svd.singular_values[*a]));
    let row = |k: usize| Vector3::new(vt[(k, 0)], vt[(k, 1)], vt[(k, 2)]);
    let normal = row(order[2]);
    let residual = points.iter().map(|p| (p - c).dot(&normal).abs()).fold(0.0, f64::max);
    PlaneFit {
        centroid: c.into(),
        normal: normal.into(),
        axes: [row(order[0]).into(), row(order[1]).into()],
        spread: order.map(|k| svd.singular_values[k]),
        residual,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConicKind {
    Ellipse,
    Parabola,
    Hyperbola,
    Segment,
    Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConicFit {
    pub kind: ConicKind,
    /// `[A, B, C, D, E, F]` of `A x² + B xy + C y² + D x + E y + F = 0` in
    /// centred and scaled coordinates.
    pub coeffs: [f64; 6],
    /// Largest Sampson distance, divided by `max(1, spread)`.
    pub residual: f64,
}

/// General conic through planar points, from the smallest right singular vector
/// of the design matrix.
pub fn conic_fit(points: &[[f64; 2]]) -> ConicFit {
    let pts: Vec<Vector2<f64>> = points.iter().map(|p| Vector2::new(p[0], p[1])).collect();
    let mean = centroid2(&pts);
    let spread = pts.iter().map(|p| (p - mean).norm()).fold(0.0, f64::max);
    if spread <= 1e-12 * (1.0 + mean.norm()) {
        return ConicFit {
            kind: ConicKind::Point,
            coeffs: [0.0; 6],
            residual: spread,
        };
    }
    let local: Vec<Vector2<f64>> = pts.iter().map(|p| (p - mean) / spread).collect();
    let n = local.len().max(6);
    let design = DMatrix::from_fn(n, 6, |i, j| {
        let Some(p) = local.get(i) else { return 0.0 };
        [p.x * p.x, p.x * p.y, p.y * p.y, p.x, p.y, 1.0][j]
    });
    let svd = design.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let k = (0..6)
        .min_by(|a, b| svd.singular_values[*a].total_cmp(&svd.singular_values[*b]))
        .unwrap();
    let c: [f64; 6] = std::array::from_fn(|j| vt[(k, j)]);
    let [a, b, cc, d, e, f] = c;
    let residual = local
        .iter()
        .map(|p| {
            let q = a * p.x * p.x + b * p.x * p.y + cc * p.y * p.y + d * p.x + e * p.y + f;
            let g = Vector2::new(2.0 * a * p.x + b * p.y + d, b * p.x + 2.0 * cc * p.y + e);
            if g.norm() == 0.0 {
                q.abs()
            } else {
                q.abs() / g.norm()
            }
        })
        .fold(0.0, f64::max)
        * spread
        / spread.max(1.0);
    let disc = b * b - 4.0 * a * cc;
    let quad = a * a + b * b + cc * cc;
    let kind = if disc < -1e-9 * quad {
        ConicKind::Ellipse
    } else if disc > 1e-9 * quad {
        ConicKind::Hyperbola
    } else {
        ConicKind::Parabola
    };
    ConicFit {
        kind,
        coeffs: c,
        residual,
    }
}

/// `z ≈ λ sin(ω + κ) + ζ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SineFit {
    pub lambda: f64,
    pub kappa: f64,
    pub offset: f64,
    /// Largest deviation, divided by `1 + max|z|`.
    pub residual: f64,
}

impl SineFit {
    pub fn eval(&self, omega: f64) -> f64 {
        self.lambda * (omega + self.kappa).sin() + self.offset
    }
}

pub fn sine_fit(omega: &[f64], z: &[f64]) -> SineFit {
    assert_eq!(omega.len(), z.len());
    let n = omega.len();
    let a = DMatrix::from_fn(n, 3, |i, j| [omega[i].sin(), omega[i].cos(), 1.0][j]);
    let b = DVector::from_column_slice(z);
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-12)
        .expect("svd computed with both factors");
    let fit = SineFit {
        lambda: sol[0].hypot(sol[1]),
        kappa: sol[1].atan2(sol[0]),
        offset: sol[2],
        residual: 0.0,
    };
    let zmax = z.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let residual = omega
        .iter()
        .zip(z)
        .map(|(w, zi)| (fit.eval(*w) - zi).abs())
        .fold(0.0, f64::max)
        / (1.0 + zmax);
    SineFit { residual, ..fit }
}

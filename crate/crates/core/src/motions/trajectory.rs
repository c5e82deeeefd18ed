use nalgebra::{Complex, Vector3};
use serde::Serialize;

use super::canonical::Axis;
use super::curve::{sample_interval, MotionCurve};
use crate::algebra::{DualQuatPoly, Quaternion, RealPoly};
use crate::error::{Error, Result};
use crate::fitting::{circle_fit, conic_fit, plane_fit, CircleFit, ConicFit, ConicKind};

/// Rational space curve `t ↦ (x₁, x₂, x₃)(t) / w(t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalCurve {
    pub weight: RealPoly,
    pub numerators: [RealPoly; 3],
    /// Degree of the homogeneous 4-tuple after removing common factors.
    pub degree: usize,
    /// Degree of the common factor that was removed.
    pub removed: usize,
}

impl RationalCurve {
    pub fn eval(&self, t: f64) -> Option<Vector3<f64>> {
        let w = self.weight.eval(t);
        let x = Vector3::new(
            self.numerators[0].eval(t),
            self.numerators[1].eval(t),
            self.numerators[2].eval(t),
        );
        let scale = self.weight.max_abs() * (1.0 + t.abs()).powi(self.degree as i32);
        (w.abs() > 1e-10 * scale).then(|| x / w)
    }

    /// Number of distinct real points at infinity, counting `t = ∞` when the
    /// weight has lower degree than the curve.
    pub fn points_at_infinity(&self) -> usize {
        let w = self.weight.trimmed(1e-12);
        let mut roots = w.real_roots(1e-6);
        roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-6 * (1.0 + b.abs()));
        let at_infinity = usize::from(w.degree(0.0).unwrap_or(0) < self.degree);
        roots.len() + at_infinity
    }
}

fn quaternion_poly(c: [&RealPoly; 4]) -> DualQuatPoly {
    let zero = RealPoly::zero();
    DualQuatPoly::from_components(&[
        c[0].clone(),
        c[1].clone(),
        c[2].clone(),
        c[3].clone(),
        zero.clone(),
        zero.clone(),
        zero.clone(),
        zero,
    ])
}

const MIX: [f64; 4] = [1.0, 0.754_877_666_2, 0.569_840_290_9, 0.430_159_709_0];

fn relative_value(p: &RealPoly, z: Complex<f64>) -> f64 {
    let scale: f64 = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * z.norm().powi(k as i32))
        .sum();
    if scale == 0.0 {
        0.0
    } else {
        p.eval_complex(z).norm() / scale
    }
}

/// Removes common polynomial factors from `polys`, returning the total degree removed.
pub fn remove_common_factors(polys: &mut [RealPoly]) -> usize {
    let mut removed = 0;
    loop {
        for p in polys.iter_mut() {
            *p = p.trimmed(1e-13);
        }
        let mix = polys
            .iter()
            .zip(MIX.iter().cycle())
            .fold(RealPoly::zero(), |acc, (p, w)| &acc + &p.scale(*w));
        let dmix = mix.derivative();
        let mut found = None;
        for z0 in mix.complex_roots() {
            let mut z = z0;
            for _ in 0..3 {
                let d = dmix.eval_complex(z);
                if d.norm() == 0.0 {
                    break;
                }
                z -= mix.eval_complex(z) / d;
            }
            if polys.iter().all(|p| relative_value(p, z) <= 1e-9) {
                found = Some(z);
                break;
            }
        }
        let Some(z) = found else {
            return removed;
        };
        let (divisor, deg) = if z.im.abs() <= 1e-9 * (1.0 + z.re.abs()) {
            (RealPoly::linear(-z.re, 1.0), 1)
        } else {
            (RealPoly::new(vec![z.norm_sqr(), -2.0 * z.re, 1.0]), 2)
        };
        for p in polys.iter_mut() {
            if p.degree(0.0).is_some() {
                *p = p.div_rem(&divisor).0;
            }
        }
        removed += deg;
    }
}

/// Trajectory of the point `x` under a polynomial motion, in reduced form.
///
/// The homogeneous tuple is `(|p|², p x p̄ + p q̄ − q p̄)`, computed coefficientwise.
pub fn trajectory_exact(motion: &MotionCurve, x: &Vector3<f64>) -> Result<RationalCurve> {
    let poly = motion.poly().ok_or(Error::NotAlgebraic)?;
    let c = poly.components();
    let p = quaternion_poly([&c[0], &c[1], &c[2], &c[3]]);
    let q = quaternion_poly([&c[4], &c[5], &c[6], &c[7]]);
    let xq = crate::algebra::DualQuaternion::primal(Quaternion::pure(x));
    let rotated = &p.right_mul(xq) * &p.conj();
    let shifted = &(&p * &q.conj()) - &(&q * &p.conj());
    let numer = &rotated + &shifted;
    let mut polys = vec![
        poly.primal_norm(),
        numer.component(1),
        numer.component(2),
        numer.component(3),
    ];
    let removed = remove_common_factors(&mut polys);
    let degree = polys.iter().filter_map(|p| p.degree(1e-12)).max().unwrap_or(0);
    let [w, x1, x2, x3]: [RealPoly; 4] = polys.try_into().expect("four polynomials");
    Ok(RationalCurve {
        weight: w,
        numerators: [x1, x2, x3],
        degree,
        removed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryReport {
    pub degree: usize,
    pub points_at_infinity: usize,
    /// Circle fit of the projection along the axis.
    pub circle: Option<CircleFit>,
    /// Planarity and conic fit, for curves of degree at most two.
    pub plane_residual: Option<f64>,
    pub conic: Option<ConicFit>,
}

/// Degree, points at infinity and the circle/conic fits of a trajectory.
///
/// The projected circle is fitted over `domain`; conics are fitted over the
/// whole real parameter line.
pub fn trajectory_diagnostics(curve: &RationalCurve, axis: Option<&Axis>, domain: (f64, f64)) -> TrajectoryReport {
    let circle = axis.map(|ax| {
        let u = ax.direction();
        let k = (0..3).min_by(|i, j| u[*i].abs().total_cmp(&u[*j].abs())).unwrap();
        let mut e = Vector3::zeros();
        e[k] = 1.0;
        let e1 = (e - u * e.dot(&u)).normalize();
        let e2 = u.cross(&e1);
        let pts: Vec<[f64; 2]> = sample_interval(domain, 101)
            .into_iter()
            .filter_map(|t| curve.eval(t))
            .map(|x| [x.dot(&e1), x.dot(&e2)])
            .collect();
        circle_fit(&pts)
    });
    let (plane_residual, conic) = if curve.degree <= 2 {
        let pts: Vec<Vector3<f64>> = (1..200)
            .map(|k| (std::f64::consts::PI * (k as f64 / 200.0 - 0.5)).tan())
            .filter_map(|t| curve.eval(t))
            .collect();
        let plane = plane_fit(&pts);
        let scale = plane.spread[0].max(f64::MIN_POSITIVE);
        let fit = if plane.spread[1] <= 1e-9 * scale {
            let kind = if plane.spread[0] <= 1e-12 {
                ConicKind::Point
            } else {
                ConicKind::Segment
            };
            ConicFit {
                kind,
                coeffs: [0.0; 6],
                residual: plane.spread[1],
            }
        } else {
            let c = Vector3::from(plane.centroid);
            let (a1, a2) = (Vector3::from(plane.axes[0]), Vector3::from(plane.axes[1]));
            let flat: Vec<[f64; 2]> = pts.iter().map(|x| [(x - c).dot(&a1), (x - c).dot(&a2)]).collect();
            conic_fit(&flat)
        };
        (Some(plane.residual / (1.0 + scale)), Some(fit))
    } else {
        (None, None)
    };
    TrajectoryReport {
        degree: curve.degree,
        points_at_infinity: curve.points_at_infinity(),
        circle,
        plane_residual,
        conic,
    }
}

use serde::Serialize;

use super::canonical::CanonicalPair;
use super::curve::{MotionCurve, Pitch, Provenance};
use super::interpolants::translation_of;
use crate::algebra::{DualQuatPoly, DualQuaternion};
use crate::error::{Error, Result};
use crate::fitting::sine_fit;
use crate::tolerance::Tolerance;

/// Closed-form rotation angle and translation of a cubic circular motion in
/// canonical coordinates.
///
/// `tan(ω/2) = N₁ t / (D₁ t + D₀)` and `z = t Z₁ / ((b − a) t + a + 1)` with
/// `N₁ = m₀ sin φ − m₃ (cos φ − 1)`, `D₁ = m₀ (cos φ − 1) + m₃ sin φ`,
/// `D₀ = 2 m₀` and `Z₁ = d (b + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicTransmission {
    pub m0: f64,
    pub m3: f64,
    pub a_ess: f64,
    pub b_ess: f64,
    pub phi: f64,
    pub d: f64,
}

impl CubicTransmission {
    fn n1(&self) -> f64 {
        self.m0 * self.phi.sin() - self.m3 * (self.phi.cos() - 1.0)
    }

    fn d1(&self) -> f64 {
        self.m0 * (self.phi.cos() - 1.0) + self.m3 * self.phi.sin()
    }

    fn d0(&self) -> f64 {
        2.0 * self.m0
    }

    fn z1(&self) -> f64 {
        self.d * (self.b_ess + 1.0)
    }

    pub fn tan_half_omega(&self, t: f64) -> f64 {
        self.n1() * t / (self.d1() * t + self.d0())
    }

    /// `ω(t)`, continuous on `[0, 1]` and starting at `0`.
    pub fn omega(&self, t: f64) -> f64 {
        let s = self.d0().signum();
        2.0 * (s * self.n1() * t).atan2(s * (self.d1() * t + self.d0()))
    }

    pub fn z(&self, t: f64) -> f64 {
        t * self.z1() / ((self.b_ess - self.a_ess) * t + self.a_ess + 1.0)
    }

    pub fn omega_rate(&self, t: f64) -> f64 {
        let den = self.d1() * t + self.d0();
        2.0 * self.n1() * self.d0() / (den * den + (self.n1() * t).powi(2))
    }

    pub fn z_rate(&self, t: f64) -> f64 {
        let den = (self.b_ess - self.a_ess) * t + self.a_ess + 1.0;
        self.z1() * (self.a_ess + 1.0) / (den * den)
    }

    /// `(p, q, r, s)` with `(p t + q) tan(ω/2) = (r t + s) z`.
    pub fn law(&self) -> [f64; 4] {
        let n1 = self.n1();
        [
            self.d1() * self.z1(),
            self.d0() * self.z1(),
            n1 * (self.b_ess - self.a_ess),
            n1 * (self.a_ess + 1.0),
        ]
    }

    /// Scaled residual of the tangent law at a sample, in the bounded form
    /// `(p t + q) sin(ω/2) − (r t + s) z cos(ω/2)`.
    pub fn law_residual(&self, t: f64, omega: f64, z: f64) -> f64 {
        let [p, q, r, s] = self.law();
        let scale = (p * p + q * q + r * r + s * s).sqrt().max(f64::MIN_POSITIVE);
        let (sh, ch) = (0.5 * omega).sin_cos();
        ((p * t + q) * sh - (r * t + s) * z * ch).abs() / (scale * (1.0 + t.abs()) * (1.0 + z.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TransmissionLaw {
    /// `(p t + q) tan(ω/2) = (r t + s) z`.
    Tangent {
        p: f64,
        q: f64,
        r: f64,
        s: f64,
        closed_form: CubicTransmission,
    },
    /// `z = λ sin(ω + κ) + ζ`, fitted.
    Sine { lambda: f64, kappa: f64, offset: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionSample {
    pub t: f64,
    pub omega: f64,
    pub z: f64,
}

/// The planar curve `t ↦ (ω(t), z(t))` of a motion inside a cylinder group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmissionCurve {
    pub law: TransmissionLaw,
    pub samples: Vec<TransmissionSample>,
    /// Largest residual of the law over the samples.
    pub residual: f64,
    /// Largest departure of the sampled poses from the cylinder group.
    pub cylinder_deviation: f64,
}

impl TransmissionCurve {
    pub fn first(&self) -> TransmissionSample {
        self.samples[0]
    }

    pub fn last(&self) -> TransmissionSample {
        *self.samples.last().expect("at least two samples")
    }
}

/// Deviation of a canonical dual quaternion from the cylinder group of the
/// third axis, and its `(ω/2 before unwrapping, z)`.
fn cylinder_coordinates(h: &DualQuaternion) -> (f64, f64, f64) {
    let n = h.p.norm();
    let a = translation_of(h);
    let dev_rot = h.p.x.abs().max(h.p.y.abs()) / n;
    let dev_tr = a.x.hypot(a.y) / (1.0 + a.norm());
    (dev_rot.max(dev_tr), 2.0 * h.p.z.atan2(h.p.w), a.z)
}

fn unwrap(prev: f64, raw: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    raw + tau * ((prev - raw) / tau).round()
}

/// Samples the transmission curve of `motion` relative to `pair` and fits or
/// evaluates its law: the tangent law for cubic interpolants, the shifted sine
/// law otherwise.
pub fn transmission_curve(
    motion: &MotionCurve,
    pair: &CanonicalPair,
    samples: usize,
    tol: Tolerance,
) -> Result<TransmissionCurve> {
    let times = motion.sample_times(samples);
    let mut out = Vec::with_capacity(times.len());
    let mut deviation = 0.0_f64;
    let mut sign = 1.0;
    for (k, &t) in times.iter().enumerate() {
        let raw = motion.raw_at(t);
        if raw.p.norm_squared() <= tol.get() * tol.get() * raw.max_abs().max(1.0).powi(2) {
            return Err(Error::PrimalVanishes { t });
        }
        let mut h = pair.to_canonical_dq(raw);
        if k == 0 && h.p.w < 0.0 {
            sign = -1.0;
        }
        h = h.scale(sign);
        let (dev, omega, z) = cylinder_coordinates(&h);
        deviation = deviation.max(dev);
        let omega = match out.last() {
            Some(TransmissionSample { omega: prev, .. }) => unwrap(*prev, omega),
            None => omega,
        };
        out.push(TransmissionSample { t, omega, z });
    }
    if deviation > 1e3 * tol.get() {
        return Err(Error::NotInCylinderGroup { deviation });
    }
    let (law, residual) = match motion.provenance() {
        Provenance::Cubic { m, a_ess, b_ess } => {
            let closed = CubicTransmission {
                m0: m[0],
                m3: m[3],
                a_ess: *a_ess,
                b_ess: *b_ess,
                phi: pair.phi,
                d: pair.d,
            };
            let [p, q, r, s] = closed.law();
            let residual = out
                .iter()
                .map(|x| closed.law_residual(x.t, x.omega, x.z))
                .fold(0.0, f64::max);
            (
                TransmissionLaw::Tangent {
                    p,
                    q,
                    r,
                    s,
                    closed_form: closed,
                },
                residual,
            )
        }
        _ => {
            let w: Vec<f64> = out.iter().map(|x| x.omega).collect();
            let z: Vec<f64> = out.iter().map(|x| x.z).collect();
            let fit = sine_fit(&w, &z);
            (
                TransmissionLaw::Sine {
                    lambda: fit.lambda,
                    kappa: fit.kappa,
                    offset: fit.offset,
                },
                fit.residual,
            )
        }
    };
    Ok(TransmissionCurve {
        law,
        samples: out,
        residual,
        cylinder_deviation: deviation,
    })
}

/// `(ω', z')` of a canonical polynomial motion at `t`, by exact differentiation.
fn polynomial_rates(c0: &DualQuatPoly, t: f64) -> (f64, f64) {
    let c = c0.components();
    let [p0, p1, p2, p3, q0, q1, q2, q3] = &c;
    // k-component of q p̄
    let k = &(&(&(q3 * p0) - &(q0 * p3)) - &(q1 * p2)) + &(q2 * p1);
    let num = k.scale(-2.0);
    let w = c0.primal_norm();
    let (a0, a3) = (p0.eval(t), p3.eval(t));
    let (da0, da3) = (p0.derivative().eval(t), p3.derivative().eval(t));
    let omega_rate = 2.0 * (a0 * da3 - a3 * da0) / (a0 * a0 + a3 * a3);
    let (nv, wv) = (num.eval(t), w.eval(t));
    let z_rate = (num.derivative().eval(t) * wv - nv * w.derivative().eval(t)) / (wv * wv);
    (omega_rate, z_rate)
}

/// Canonical form `S⁻¹ A⁻¹ c(t) S` of a polynomial motion.
pub fn canonical_polynomial(motion: &MotionCurve, pair: &CanonicalPair) -> Option<DualQuatPoly> {
    let (l, r) = pair.outer_factors();
    motion.poly().map(|p| p.left_mul(l.conj()).right_mul(r.conj()))
}

/// Instantaneous pitch `dz/dω` of a motion in the pair's cylinder group.
pub fn pitch_at(motion: &MotionCurve, pair: &CanonicalPair, t: f64, tol: Tolerance) -> Result<Pitch> {
    if let Provenance::HelicalSampled { phi, d } = motion.provenance() {
        return Ok(Pitch::from_rates(*phi, *d, tol));
    }
    let c0 = canonical_polynomial(motion, pair).ok_or(Error::NotAlgebraic)?;
    let h = c0.eval(t);
    let (dev, ..) = cylinder_coordinates(&h);
    if dev > 1e3 * tol.get() {
        return Err(Error::NotInCylinderGroup { deviation: dev });
    }
    let (w, z) = polynomial_rates(&c0, t);
    Ok(Pitch::from_rates(w, z, tol))
}

/// Central-difference pitch from sampled poses.
pub fn pitch_numeric(motion: &MotionCurve, pair: &CanonicalPair, t: f64, tol: Tolerance) -> Result<Pitch> {
    let h = 1e-5;
    let at = |s: f64| -> Result<(f64, f64)> {
        let c = pair.to_canonical_dq(motion.pose_at(s, tol)?);
        let c = if c.p.w < 0.0 { -c } else { c };
        let (_, w, z) = cylinder_coordinates(&c);
        Ok((w, z))
    };
    let (w0, z0) = at(t - h)?;
    let (w1, z1) = at(t + h)?;
    let dw = unwrap(w0, w1) - w0;
    Ok(Pitch::from_rates(
        dw / (2.0 * h),
        (z1 - z0) / (2.0 * h),
        Tolerance(1e-6),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extmap::{FiberOffsets, MapSelector};
    use crate::motions::canonical::canonicalize_pair;
    use crate::motions::interpolants::{cubic_from_essentials, cubic_interpolant, darboux_for_pair, CubicOptions};
    use crate::posemodels::PoseMatrix;
    use std::f64::consts::FRAC_PI_2;

    const TOL: Tolerance = Tolerance::DEFAULT;

    fn pair() -> CanonicalPair {
        canonicalize_pair(&PoseMatrix::identity(), &PoseMatrix::about_z(FRAC_PI_2, 1.0), TOL).unwrap()
    }

    #[test]
    fn cubic_closed_form_matches_samples() {
        let m = MapSelector::new([0.8, 0.1, -0.3, 0.4]).unwrap();
        let c = cubic_from_essentials(&pair(), &m, 0.3, -0.2, CubicOptions::default(), TOL).unwrap();
        let tc = transmission_curve(&c, &pair(), 101, TOL).unwrap();
        let TransmissionLaw::Tangent { closed_form, .. } = tc.law else {
            panic!("cubic motions obey the tangent law")
        };
        for s in &tc.samples {
            assert!((closed_form.omega(s.t) - s.omega).abs() < 1e-12, "{s:?}");
            assert!((closed_form.z(s.t) - s.z).abs() < 1e-12);
        }
        assert!(tc.residual < 1e-12);
        assert!((tc.last().omega - FRAC_PI_2).abs() < 1e-12);
        assert!((tc.last().z - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_pitch_matches_closed_form_rates() {
        let m = MapSelector::new([0.7, 0.0, 0.0, 0.2]).unwrap();
        let c = cubic_from_essentials(&pair(), &m, 0.5, 0.5, CubicOptions::default(), TOL).unwrap();
        let closed = CubicTransmission {
            m0: 0.7,
            m3: 0.2,
            a_ess: 0.5,
            b_ess: 0.5,
            phi: FRAC_PI_2,
            d: 1.0,
        };
        for t in [0.0, 0.3, 1.0] {
            let p = pitch_at(&c, &pair(), t, TOL).unwrap().value().unwrap();
            assert!((p - closed.z_rate(t) / closed.omega_rate(t)).abs() < 1e-12);
            let n = pitch_numeric(&c, &pair(), t, TOL).unwrap().value().unwrap();
            assert!((p - n).abs() < 1e-6);
        }
    }

    #[test]
    fn darboux_sine_law() {
        let d = darboux_for_pair(&pair(), 0.1, 0.6, TOL).unwrap();
        let tc = transmission_curve(&d, &pair(), 200, TOL).unwrap();
        assert!(matches!(tc.law, TransmissionLaw::Sine { .. }));
        assert!(tc.residual < 1e-12, "{}", tc.residual);
        assert!(tc.first().omega.abs() < 1e-15 && tc.first().z.abs() < 1e-15);
    }

    #[test]
    fn m3_zero_tangent() {
        let m = MapSelector::classical();
        let c = cubic_interpolant(&pair(), &m, &FiberOffsets::zero(), &FiberOffsets::zero(), TOL).unwrap();
        let tc = transmission_curve(&c, &pair(), 11, TOL).unwrap();
        let phi = FRAC_PI_2;
        for s in &tc.samples {
            let expected = phi.sin() * s.t / ((phi.cos() - 1.0) * s.t + 2.0);
            assert!(((0.5 * s.omega).tan() - expected).abs() < 1e-12);
        }
    }
}

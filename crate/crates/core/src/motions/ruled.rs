use nalgebra::Vector3;
use serde::Serialize;

use super::curve::{MotionCurve, Provenance};
use crate::algebra::{DualQuatPoly, DualQuaternion, Quaternion, RealPoly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RulingSpec {
    /// `x₀x₃ + x₁²/a² − x₂²/b²`.
    HyperbolicParaboloid { pa: f64, pb: f64 },
    /// `z = c sin 2θ` over the rulings `θ`.
    PluckerConoid { c: f64 },
}

/// A line in Plücker coordinates, `moment = x × direction` for any point `x`
/// on it. A zero direction is a line at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PluckerLine {
    pub direction: [f64; 3],
    pub moment: [f64; 3],
}

impl PluckerLine {
    pub fn direction(&self) -> Vector3<f64> {
        Vector3::from(self.direction)
    }

    pub fn moment(&self) -> Vector3<f64> {
        Vector3::from(self.moment)
    }

    pub fn plucker_residual(&self) -> f64 {
        self.direction().dot(&self.moment())
    }

    /// Unit direction and matching moment; `None` for lines at infinity.
    pub fn normalized(&self) -> Option<PluckerLine> {
        let n = self.direction().norm();
        (n > 0.0).then(|| PluckerLine {
            direction: (self.direction() / n).into(),
            moment: (self.moment() / n).into(),
        })
    }

    /// Point of the line closest to the origin.
    pub fn foot(&self) -> Option<Vector3<f64>> {
        let l = self.normalized()?;
        Some(l.direction().cross(&l.moment()))
    }

    /// Half-turn about the line, `direction − ε moment`.
    pub fn half_turn(&self) -> DualQuaternion {
        DualQuaternion::new(
            Quaternion::pure(&self.direction()),
            Quaternion::pure(&self.moment()).scale(-1.0),
        )
    }
}

/// One regulus of a ruled surface as a polynomial family of lines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RulingFamily {
    pub spec: RulingSpec,
    pub direction: [RealPoly; 3],
    pub moment: [RealPoly; 3],
}

pub fn ruling_family(spec: RulingSpec) -> Result<RulingFamily> {
    let p = RealPoly::new;
    let (direction, moment) = match spec {
        RulingSpec::HyperbolicParaboloid { pa, pb } => {
            if pa == 0.0 || pb == 0.0 || !pa.is_finite() || !pb.is_finite() {
                return Err(Error::InvalidSpec("paraboloid parameters must be non-zero".into()));
            }
            (
                [
                    p(vec![0.0, 0.0, 4.0 * pa]),
                    p(vec![0.0, 0.0, 4.0 * pb]),
                    p(vec![0.0, 4.0]),
                ],
                [p(vec![pb]), p(vec![pa]), p(vec![0.0, -2.0 * pa * pb])],
            )
        }
        RulingSpec::PluckerConoid { c } => {
            if c == 0.0 || !c.is_finite() {
                return Err(Error::InvalidSpec("conoid parameter must be non-zero".into()));
            }
            // t = tan θ; the ruling through (0, 0, c sin 2θ) along (cos θ, sin θ, 0),
            // scaled by 1 + t².
            (
                [p(vec![1.0, 0.0, 1.0]), p(vec![0.0, 1.0, 0.0, 1.0]), RealPoly::zero()],
                [p(vec![0.0, 0.0, -2.0 * c]), p(vec![0.0, 2.0 * c]), RealPoly::zero()],
            )
        }
    };
    Ok(RulingFamily {
        spec,
        direction,
        moment,
    })
}

impl RulingFamily {
    pub fn line_at(&self, t: f64) -> PluckerLine {
        PluckerLine {
            direction: self.direction.each_ref().map(|p| p.eval(t)),
            moment: self.moment.each_ref().map(|p| p.eval(t)),
        }
    }

    /// Value of the surface equation at a point; zero on the surface.
    pub fn surface_residual(&self, x: &Vector3<f64>) -> f64 {
        match self.spec {
            RulingSpec::HyperbolicParaboloid { pa, pb } => x.z + x.x * x.x / (pa * pa) - x.y * x.y / (pb * pb),
            RulingSpec::PluckerConoid { c } => x.z * (x.x * x.x + x.y * x.y) - 2.0 * c * x.x * x.y,
        }
    }
}

/// The motion of half-turns about the rulings.
pub fn line_symmetric_motion(rulings: &RulingFamily, domain: (f64, f64)) -> Result<MotionCurve> {
    let zero = RealPoly::zero();
    let [d1, d2, d3] = rulings.direction.clone();
    let [m1, m2, m3] = rulings.moment.each_ref().map(|p| p.scale(-1.0));
    let poly = DualQuatPoly::from_components(&[zero.clone(), d1, d2, d3, zero, m1, m2, m3]);
    MotionCurve::polynomial(poly, domain, Provenance::LineSymmetric)
}

/// `c(t) = leading · F₁ · F₂` for the paraboloid motion.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicFactorization {
    pub leading: DualQuaternion,
    /// Rotations about an axis parallel to `(b, −a, 0)`.
    pub f1: DualQuatPoly,
    /// Translations along `(a, −b, 0)`.
    pub f2: DualQuatPoly,
}

impl CubicFactorization {
    pub fn product(&self) -> DualQuatPoly {
        &self.f1.left_mul(self.leading) * &self.f2
    }
}

pub fn factor_cubic(pa: f64, pb: f64) -> Result<CubicFactorization> {
    let s = pa * pa + pb * pb;
    if s == 0.0 || !s.is_finite() {
        return Err(Error::InvalidSpec("a² + b² must be non-zero".into()));
    }
    let leading = DualQuaternion::primal(Quaternion::new(0.0, 4.0 * pa, 4.0 * pb, 0.0));
    let k = (pa * pa - pb * pb) / (4.0 * s);
    let c1 = DualQuaternion::new(
        Quaternion::new(0.0, pb / s, -pa / s, 0.0),
        Quaternion::new(0.0, -k * pa, -k * pb, 0.0),
    );
    let c2 = DualQuaternion::epsilon(Quaternion::new(0.0, 0.25 * pa, -0.25 * pb, 0.0));
    Ok(CubicFactorization {
        leading,
        f1: DualQuatPoly::monic_linear(c1),
        f2: DualQuatPoly::monic_linear(c2),
    })
}

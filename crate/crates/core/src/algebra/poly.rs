//! Univariate polynomials with real and with dual-quaternion coefficients.
//!
//! Coefficients are stored in ascending order of powers. For [`DualQuatPoly`]
//! the indeterminate `t` commutes with the coefficients, so
//! `(a tⁱ)(b tʲ) = (a b) tⁱ⁺ʲ` and evaluation is a ring homomorphism at every
//! real `t₀`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use super::{DualQuaternion, Quaternion};

/// Real polynomial `c₀ + c₁ t + … + cₙ tⁿ`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RealPoly {
    pub coeffs: Vec<f64>,
}

impl RealPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `a + b t`.
    pub fn linear(a: f64, b: f64) -> Self {
        Self { coeffs: vec![a, b] }
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Degree after dropping leading coefficients with `|c| ≤ rel · max|cᵢ|`.
    /// The zero polynomial has degree `None`.
    pub fn degree(&self, rel: f64) -> Option<usize> {
        let scale = self.max_abs();
        if scale == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.abs() > rel * scale)
    }

    /// Drops leading coefficients that are negligible relative to the largest one.
    pub fn trimmed(&self, rel: f64) -> Self {
        match self.degree(rel) {
            Some(d) => Self::new(self.coeffs[..=d].to_vec()),
            None => Self::zero(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn eval_complex(&self, z: Complex<f64>) -> Complex<f64> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Long division; returns `(quotient, remainder)`. `divisor` must have a
    /// non-zero leading coefficient after exact trimming.
    pub fn div_rem(&self, divisor: &RealPoly) -> (RealPoly, RealPoly) {
        let d = divisor.trimmed(0.0);
        let n = d.coeffs.len();
        assert!(n > 0, "division by the zero polynomial");
        let lead = d.coeffs[n - 1];
        let mut rem = self.coeffs.clone();
        if rem.len() < n {
            return (RealPoly::zero(), RealPoly::new(rem));
        }
        let mut quot = vec![0.0; rem.len() - n + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + n - 1] / lead;
            quot[k] = c;
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
        rem.truncate(n - 1);
        (RealPoly::new(quot), RealPoly::new(rem))
    }

    /// All complex roots, from the eigenvalues of the companion matrix and a
    /// few Newton steps on the original polynomial.
    pub fn complex_roots(&self) -> Vec<Complex<f64>> {
        let p = self.trimmed(1e-14);
        let Some(deg) = p.degree(0.0) else {
            return vec![];
        };
        if deg == 0 {
            return vec![];
        }
        let lead = p.coeffs[deg];
        let mut companion = DMatrix::<f64>::zeros(deg, deg);
        for i in 1..deg {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..deg {
            companion[(i, deg - 1)] = -p.coeffs[i] / lead;
        }
        let dp = p.derivative();
        companion
            .complex_eigenvalues()
            .iter()
            .map(|&z0| {
                let mut z = z0;
                for _ in 0..4 {
                    let f = p.eval_complex(z);
                    let df = dp.eval_complex(z);
                    if df.norm() == 0.0 {
                        break;
                    }
                    let step = f / df;
                    if !step.re.is_finite() || !step.im.is_finite() || step.norm() > 1e-3 * (1.0 + z.norm()) {
                        break;
                    }
                    z -= step;
                }
                z
            })
            .collect()
    }

    /// Real roots (imaginary part below `imag_tol`, relative to `1 + |z|`), sorted.
    pub fn real_roots(&self, imag_tol: f64) -> Vec<f64> {
        let mut roots: Vec<f64> = self
            .complex_roots()
            .into_iter()
            .filter(|z| z.im.abs() <= imag_tol * (1.0 + z.re.abs()))
            .map(|z| z.re)
            .collect();
        roots.sort_by(f64::total_cmp);
        roots
    }

    /// `p(a t + b)`.
    pub fn compose_affine(&self, a: f64, b: f64) -> Self {
        let lin = RealPoly::linear(b, a);
        let mut out = RealPoly::zero();
        for c in self.coeffs.iter().rev() {
            out = &(&out * &lin) + &RealPoly::constant(*c);
        }
        out
    }
}

impl Add for &RealPoly {
    type Output = RealPoly;
    fn add(self, o: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RealPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &RealPoly {
    type Output = RealPoly;
    fn sub(self, o: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RealPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &RealPoly {
    type Output = RealPoly;
    fn mul(self, o: &RealPoly) -> RealPoly {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return RealPoly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RealPoly::new(out)
    }
}

/// Polynomial in a real indeterminate `t` with dual-quaternion coefficients.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DualQuatPoly {
    pub coeffs: Vec<DualQuaternion>,
}

impl DualQuatPoly {
    pub fn new(coeffs: Vec<DualQuaternion>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: DualQuaternion) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `a + b t`.
    pub fn linear(a: DualQuaternion, b: DualQuaternion) -> Self {
        Self { coeffs: vec![a, b] }
    }

    /// `(1 − t) a + t b`.
    pub fn segment(a: DualQuaternion, b: DualQuaternion) -> Self {
        Self::linear(a, b - a)
    }

    /// `t − c` (monic linear factor).
    pub fn monic_linear(c: DualQuaternion) -> Self {
        Self::linear(-c, DualQuaternion::ONE)
    }

    pub fn coeff(&self, i: usize) -> DualQuaternion {
        self.coeffs.get(i).copied().unwrap_or(DualQuaternion::ZERO)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.max_abs()))
    }

    /// Degree ignoring leading coefficients with max-abs ≤ `rel` × largest coefficient.
    pub fn degree(&self, rel: f64) -> Option<usize> {
        let scale = self.max_abs();
        if scale == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.max_abs() > rel * scale)
    }

    pub fn eval(&self, t: f64) -> DualQuaternion {
        self.coeffs
            .iter()
            .rev()
            .fold(DualQuaternion::ZERO, |acc, c| acc * t + *c)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Multiplies every coefficient from the left by a constant.
    pub fn left_mul(&self, c: DualQuaternion) -> Self {
        Self::new(self.coeffs.iter().map(|x| c * *x).collect())
    }

    pub fn right_mul(&self, c: DualQuaternion) -> Self {
        Self::new(self.coeffs.iter().map(|x| *x * c).collect())
    }

    /// The `i`-th Study coordinate (0..8) as a real polynomial.
    pub fn component(&self, i: usize) -> RealPoly {
        RealPoly::new(self.coeffs.iter().map(|c| c.to_array()[i]).collect())
    }

    pub fn components(&self) -> [RealPoly; 8] {
        std::array::from_fn(|i| self.component(i))
    }

    pub fn from_components(c: &[RealPoly; 8]) -> Self {
        let n = c.iter().map(|p| p.coeffs.len()).max().unwrap_or(0);
        Self::new(
            (0..n)
                .map(|k| DualQuaternion::from_array(std::array::from_fn(|i| c[i].coeff(k))))
                .collect(),
        )
    }

    /// `p(t) p̄(t)` as a real polynomial.
    pub fn primal_norm(&self) -> RealPoly {
        let p: [RealPoly; 4] = std::array::from_fn(|i| self.component(i));
        p.iter().fold(RealPoly::zero(), |acc, c| &acc + &(c * c))
    }

    /// `f(a t + b)`.
    pub fn compose_affine(&self, a: f64, b: f64) -> Self {
        let comps = self.components().map(|c| c.compose_affine(a, b));
        Self::from_components(&comps)
    }

    /// Polynomial whose primal part is the given quaternion polynomial coordinates.
    pub fn from_quaternion_parts(primal: &[Quaternion], dual: &[Quaternion]) -> Self {
        let n = primal.len().max(dual.len());
        Self::new(
            (0..n)
                .map(|k| {
                    DualQuaternion::new(
                        primal.get(k).copied().unwrap_or(Quaternion::ZERO),
                        dual.get(k).copied().unwrap_or(Quaternion::ZERO),
                    )
                })
                .collect(),
        )
    }
}

impl Add for &DualQuatPoly {
    type Output = DualQuatPoly;
    fn add(self, o: &DualQuatPoly) -> DualQuatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        DualQuatPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &DualQuatPoly {
    type Output = DualQuatPoly;
    fn sub(self, o: &DualQuatPoly) -> DualQuatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        DualQuatPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &DualQuatPoly {
    type Output = DualQuatPoly;
    fn neg(self) -> DualQuatPoly {
        self.scale(-1.0)
    }
}

impl Mul for &DualQuatPoly {
    type Output = DualQuatPoly;
    fn mul(self, o: &DualQuatPoly) -> DualQuatPoly {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return DualQuatPoly::new(vec![]);
        }
        let mut out = vec![DualQuaternion::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += *a * *b;
            }
        }
        DualQuatPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dq(p: Quaternion) -> DualQuaternion {
        DualQuaternion::primal(p)
    }

    #[test]
    fn product_of_monic_linears() {
        let f = DualQuatPoly::monic_linear(dq(Quaternion::I));
        let g = DualQuatPoly::monic_linear(dq(Quaternion::J));
        let fg = &f * &g;
        assert_eq!(fg.coeffs.len(), 3);
        assert_eq!(fg.coeff(0), dq(Quaternion::K));
        assert_eq!(fg.coeff(1), dq(-(Quaternion::I + Quaternion::J)));
        assert_eq!(fg.coeff(2), DualQuaternion::ONE);
    }

    #[test]
    fn division_and_roots() {
        // (t - 2)(t + 0.5)(t² + 1)
        let p = &(&RealPoly::linear(-2.0, 1.0) * &RealPoly::linear(0.5, 1.0)) * &RealPoly::new(vec![1.0, 0.0, 1.0]);
        let real = p.real_roots(1e-9);
        assert_eq!(real.len(), 2);
        assert!((real[0] + 0.5).abs() < 1e-13 && (real[1] - 2.0).abs() < 1e-13);
        assert_eq!(p.complex_roots().len(), 4);
        let (q, r) = p.div_rem(&RealPoly::linear(-2.0, 1.0));
        assert!(r.max_abs() < 1e-13);
        assert_eq!(q.degree(0.0), Some(3));
    }

    #[test]
    fn compose_affine_shifts() {
        let p = RealPoly::new(vec![1.0, -3.0, 2.0]);
        let q = p.compose_affine(0.5, 0.25);
        for t in [-1.0, 0.0, 0.3, 2.0] {
            assert!((q.eval(t) - p.eval(0.5 * t + 0.25)).abs() < 1e-14);
        }
    }

    #[test]
    fn degree_ignores_tiny_leading_terms() {
        let p = RealPoly::new(vec![1.0, 2.0, 1e-17]);
        assert_eq!(p.degree(1e-14), Some(1));
        assert_eq!(RealPoly::zero().degree(1e-14), None);
    }
}

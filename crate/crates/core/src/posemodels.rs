//! The two point models of SE(3) and the conversions between them.
//!
//! A displacement is either an affine pair `(A, a)` with `A ∈ SO(3)` acting as
//! `x ↦ A x + a`, or a dual quaternion `h = p + ε q` on the Study quadric,
//! acting through [`DualQuaternion::act`]. [`AmbientPose`] is the thirteen
//! dimensional ambient space of the matrix model, read projectively.

use std::ops::{Add, Mul, Sub};

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::algebra::{DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::tolerance::Tolerance;

/// Rigid displacement `x ↦ linear · x + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseMatrix {
    pub linear: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl PoseMatrix {
    pub fn new(linear: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        Self { linear, translation }
    }

    pub fn identity() -> Self {
        Self::new(Matrix3::identity(), Vector3::zeros())
    }

    /// Rotation by `angle` about the axis `u` through the origin.
    pub fn rotation(u: &Vector3<f64>, angle: f64) -> Self {
        let r = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(*u), angle);
        Self::new(*r.matrix(), Vector3::zeros())
    }

    pub fn translation(a: Vector3<f64>) -> Self {
        Self::new(Matrix3::identity(), a)
    }

    /// Rotation by `phi` about the third axis and translation `d` along it.
    pub fn about_z(phi: f64, d: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(
            Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
            Vector3::new(0.0, 0.0, d),
        )
    }

    pub fn apply(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.linear * x + self.translation
    }

    /// Inverse assuming `linear` is orthogonal.
    pub fn inverse(&self) -> Self {
        let rt = self.linear.transpose();
        Self::new(rt, -(rt * self.translation))
    }

    /// Homogeneous 4×4 matrix `[[1, 0ᵀ], [a, A]]`.
    pub fn to_homogeneous(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = 1.0;
        for i in 0..3 {
            m[(i + 1, 0)] = self.translation[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] = self.linear[(i, j)];
            }
        }
        m
    }

    /// Largest entry-wise difference of the linear parts and translations.
    pub fn max_difference(&self, other: &PoseMatrix) -> f64 {
        (self.linear - other.linear)
            .amax()
            .max((self.translation - other.translation).amax())
    }
}

impl Mul for PoseMatrix {
    type Output = PoseMatrix;
    /// Composition: `(self * other)(x) = self(other(x))`.
    fn mul(self, o: PoseMatrix) -> PoseMatrix {
        PoseMatrix::new(self.linear * o.linear, self.linear * o.translation + self.translation)
    }
}

/// Outcome of [`validate_pose`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `max |A Aᵀ − I|` over the nine entries.
    pub orthogonality_residual: f64,
    /// `|det A − 1|`.
    pub det_deviation: f64,
    pub determinant: f64,
    pub ok: bool,
}

pub fn validate_pose(pose: &PoseMatrix, tol: Tolerance) -> ValidationReport {
    let a = pose.linear;
    let orthogonality_residual = (a * a.transpose() - Matrix3::identity()).amax();
    let determinant = a.determinant();
    let det_deviation = (determinant - 1.0).abs();
    let finite = a.iter().chain(pose.translation.iter()).all(|v| v.is_finite());
    ValidationReport {
        orthogonality_residual,
        det_deviation,
        determinant,
        ok: finite && orthogonality_residual <= tol.get() && det_deviation <= tol.get(),
    }
}

impl ValidationReport {
    pub fn into_result(self) -> Result<()> {
        if self.ok {
            Ok(())
        } else {
            Err(Error::InvalidPose {
                orthogonality: self.orthogonality_residual,
                det_deviation: self.det_deviation,
            })
        }
    }
}

/// A point of R¹³ (or P¹²): homogeniser `x0`, the nine row-major entries
/// `x1..x9` of a linear part, and the translation `a1, a2, a3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientPose {
    pub coords: [f64; 13],
}

impl AmbientPose {
    pub fn new(coords: [f64; 13]) -> Self {
        Self { coords }
    }

    /// `(x0..x9)` and `(a1, a2, a3)` joined.
    pub fn from_parts(rotational: [f64; 10], translation: [f64; 3]) -> Self {
        let mut coords = [0.0; 13];
        coords[..10].copy_from_slice(&rotational);
        coords[10..].copy_from_slice(&translation);
        Self { coords }
    }

    /// Embedding on the affine chart `x0 = 1`.
    pub fn from_pose(pose: &PoseMatrix) -> Self {
        let mut rot = [0.0; 10];
        rot[0] = 1.0;
        for i in 0..3 {
            for j in 0..3 {
                rot[1 + 3 * i + j] = pose.linear[(i, j)];
            }
        }
        Self::from_parts(rot, pose.translation.into())
    }

    #[inline]
    pub fn x0(&self) -> f64 {
        self.coords[0]
    }

    /// `(x0, x1, …, x9)`.
    pub fn rotational(&self) -> [f64; 10] {
        std::array::from_fn(|i| self.coords[i])
    }

    pub fn translation(&self) -> [f64; 3] {
        [self.coords[10], self.coords[11], self.coords[12]]
    }

    /// The linear part `(x1..x9)` as a matrix, not dehomogenised.
    pub fn linear_part(&self) -> Matrix3<f64> {
        Matrix3::from_row_slice(&self.coords[1..10])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coords.map(|c| c * s))
    }

    /// Dehomogenises and checks that the result is a rigid displacement.
    pub fn restricted_to_pose(&self, tol: Tolerance) -> Result<PoseMatrix> {
        let x0 = self.x0();
        if x0.abs() <= tol.get() {
            return Err(Error::InvalidPose {
                orthogonality: f64::INFINITY,
                det_deviation: f64::INFINITY,
            });
        }
        let pose = PoseMatrix::new(self.linear_part() / x0, Vector3::from(self.translation()) / x0);
        validate_pose(&pose, tol).into_result()?;
        Ok(pose)
    }

    /// Largest coordinate difference after scaling both to unit Euclidean norm with aligned sign.
    pub fn projective_distance(&self, other: &AmbientPose) -> f64 {
        let na = self.coords.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nb = other.coords.iter().map(|v| v * v).sum::<f64>().sqrt();
        if na == 0.0 || nb == 0.0 {
            return f64::INFINITY;
        }
        let dot: f64 = self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum();
        let sign = dot.signum();
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a / na - sign * b / nb).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for AmbientPose {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(std::array::from_fn(|i| self.coords[i] + o.coords[i]))
    }
}

impl Sub for AmbientPose {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(std::array::from_fn(|i| self.coords[i] - o.coords[i]))
    }
}

impl Mul<f64> for AmbientPose {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

/// The four candidate primal tuples, one per proportion of the Euler-parameter ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerRatios {
    pub tuples: [[f64; 4]; 4],
}

impl EulerRatios {
    /// Index of the tuple with the largest Euclidean norm.
    pub fn best_index(&self) -> usize {
        let norms = self.tuples.map(|t| t.iter().map(|v| v * v).sum::<f64>());
        (0..4).max_by(|&a, &b| norms[a].total_cmp(&norms[b])).unwrap_or(0)
    }

    pub fn tuple_norm(&self, l: usize) -> f64 {
        self.tuples[l].iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Euler-parameter proportions read off a (not necessarily orthogonal) linear
/// part, with `x0` in the role of the constant `1`.
///
/// For orthogonal input the `ℓ`-th tuple equals `4 p_ℓ · (p0, p1, p2, p3)`.
pub fn euler_ratios(x: &AmbientPose) -> Result<EulerRatios> {
    let one = x.x0();
    let a = x.linear_part();
    let (a11, a12, a13) = (a[(0, 0)], a[(0, 1)], a[(0, 2)]);
    let (a21, a22, a23) = (a[(1, 0)], a[(1, 1)], a[(1, 2)]);
    let (a31, a32, a33) = (a[(2, 0)], a[(2, 1)], a[(2, 2)]);
    let tuples = [
        [one + a11 + a22 + a33, a32 - a23, a13 - a31, a21 - a12],
        [a32 - a23, one + a11 - a22 - a33, a21 + a12, a31 + a13],
        [a13 - a31, a21 + a12, one - a11 + a22 - a33, a32 + a23],
        [a21 - a12, a31 + a13, a32 + a23, one - a11 - a22 + a33],
    ];
    if tuples.iter().flatten().all(|v| *v == 0.0) {
        return Err(Error::AllZero);
    }
    Ok(EulerRatios { tuples })
}

/// Dual part from primal part and translation: `q = ½ Q(a) p`.
///
/// `Q(a)` is skew-symmetric, so `pᵀq = 0` for every `p`. The formula is
/// linear in `p` and is applied to the representative as given.
pub fn dual_from_primal(p: [f64; 4], a: [f64; 3]) -> [f64; 4] {
    let [a1, a2, a3] = a;
    let [p0, p1, p2, p3] = p;
    [
        0.5 * (a1 * p1 + a2 * p2 + a3 * p3),
        0.5 * (-a1 * p0 + a3 * p2 - a2 * p3),
        0.5 * (-a2 * p0 - a3 * p1 + a1 * p3),
        0.5 * (-a3 * p0 + a2 * p1 - a1 * p2),
    ]
}

/// Homogeneous rotation and translation numerators of a dual quaternion,
/// i.e. `Δ · (A, a)` with `Δ = p p̄`.
fn homogeneous_matrix(h: &DualQuaternion) -> (f64, Matrix3<f64>, Vector3<f64>) {
    let [p0, p1, p2, p3] = h.p.to_array();
    let [q0, q1, q2, q3] = h.q.to_array();
    let delta = p0 * p0 + p1 * p1 + p2 * p2 + p3 * p3;
    // Row-major; entry (3,2) is 2(p0p1 + p2p3).
    let a = Matrix3::new(
        p0 * p0 + p1 * p1 - p2 * p2 - p3 * p3,
        2.0 * (p1 * p2 - p0 * p3),
        2.0 * (p0 * p2 + p1 * p3),
        2.0 * (p0 * p3 + p1 * p2),
        p0 * p0 - p1 * p1 + p2 * p2 - p3 * p3,
        2.0 * (p2 * p3 - p0 * p1),
        2.0 * (p1 * p3 - p0 * p2),
        2.0 * (p0 * p1 + p2 * p3),
        p0 * p0 - p1 * p1 - p2 * p2 + p3 * p3,
    );
    let t = Vector3::new(
        2.0 * (-p0 * q1 + p1 * q0 - p2 * q3 + p3 * q2),
        2.0 * (-p0 * q2 + p1 * q3 + p2 * q0 - p3 * q1),
        2.0 * (-p0 * q3 - p1 * q2 + p2 * q1 + p3 * q0),
    );
    (delta, a, t)
}

/// Matrix form of the displacement of a Study-quadric point.
pub fn dq_to_matrix(h: &DualQuaternion, tol: Tolerance) -> Result<PoseMatrix> {
    let residual = h.relative_study_residual();
    if h.p.norm_squared() < tol.get() {
        return Err(Error::ZeroPrimal {
            norm: h.p.norm_squared(),
        });
    }
    if residual > tol.get() {
        return Err(Error::StudyViolation { residual });
    }
    displacement_matrix(h, tol)
}

/// Matrix form of the displacement of any `h` off the exceptional generator.
///
/// The Study condition is not checked: points `h + μ ε p` of one fiber all
/// give the same matrix.
pub fn displacement_matrix(h: &DualQuaternion, tol: Tolerance) -> Result<PoseMatrix> {
    let (delta, a, t) = homogeneous_matrix(h);
    if delta < tol.get() {
        return Err(Error::ZeroPrimal { norm: delta });
    }
    Ok(PoseMatrix::new(a / delta, t / delta))
}

/// Study parameters of a validated pose, together with the ratio index `ℓ` used.
///
/// The result has unit primal part with `p_ℓ > 0`.
pub fn matrix_to_dq_with_ratio(pose: &PoseMatrix, tol: Tolerance) -> Result<(DualQuaternion, usize)> {
    validate_pose(pose, tol).into_result()?;
    let ratios = euler_ratios(&AmbientPose::from_pose(pose))?;
    let l = ratios.best_index();
    let norm = ratios.tuple_norm(l);
    let p = ratios.tuples[l].map(|v| v / norm);
    let q = dual_from_primal(p, pose.translation.into());
    Ok((
        DualQuaternion::new(Quaternion::from_array(p), Quaternion::from_array(q)),
        l,
    ))
}

pub fn matrix_to_dq(pose: &PoseMatrix, tol: Tolerance) -> Result<DualQuaternion> {
    matrix_to_dq_with_ratio(pose, tol).map(|(h, _)| h)
}

/// The line of P⁷ mapped to one displacement: spanned by `h` and `ε p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyFiber {
    pub point: DualQuaternion,
    pub direction: DualQuaternion,
}

impl StudyFiber {
    /// `λ h + μ ε p`.
    pub fn sample(&self, lambda: f64, mu: f64) -> DualQuaternion {
        self.point.scale(lambda) + self.direction.scale(mu)
    }
}

pub fn study_fiber(h: &DualQuaternion, tol: Tolerance) -> Result<StudyFiber> {
    let n = h.p.norm_squared();
    if n < tol.get() {
        return Err(Error::ZeroPrimal { norm: n });
    }
    Ok(StudyFiber {
        point: *h,
        direction: DualQuaternion::epsilon(h.p),
    })
}

/// Pose exchange format: either `{"matrix": [[..];3], "t": [..]}` or `{"study": [..;8]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PoseJson {
    Matrix { matrix: [[f64; 3]; 3], t: [f64; 3] },
    Study { study: [f64; 8] },
}

impl PoseJson {
    pub fn from_pose(pose: &PoseMatrix) -> Self {
        let m = pose.linear;
        PoseJson::Matrix {
            matrix: std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])),
            t: pose.translation.into(),
        }
    }

    pub fn from_dq(h: &DualQuaternion) -> Self {
        PoseJson::Study { study: h.to_array() }
    }

    pub fn to_pose(&self, tol: Tolerance) -> Result<PoseMatrix> {
        match self {
            PoseJson::Matrix { matrix, t } => {
                let pose = PoseMatrix::new(Matrix3::from_fn(|i, j| matrix[i][j]), Vector3::from(*t));
                validate_pose(&pose, tol).into_result()?;
                Ok(pose)
            }
            PoseJson::Study { study } => dq_to_matrix(&DualQuaternion::from_array(*study), tol),
        }
    }

    pub fn to_dq(&self, tol: Tolerance) -> Result<DualQuaternion> {
        match self {
            PoseJson::Matrix { .. } => matrix_to_dq(&self.to_pose(tol)?, tol),
            PoseJson::Study { study } => {
                let h = DualQuaternion::from_array(*study);
                dq_to_matrix(&h, tol)?;
                Ok(h)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    const TOL: Tolerance = Tolerance::DEFAULT;

    #[test]
    fn identity_conversions() {
        let pose = dq_to_matrix(&DualQuaternion::ONE, TOL).unwrap();
        assert_eq!(pose, PoseMatrix::identity());
        let (h, l) = matrix_to_dq_with_ratio(&PoseMatrix::identity(), TOL).unwrap();
        assert_eq!(h.to_array(), [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(l, 0);
    }

    #[test]
    fn half_turn_about_z() {
        let pose = dq_to_matrix(&DualQuaternion::primal(Quaternion::K), TOL).unwrap();
        assert_eq!(pose.linear, Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0)));
        assert_eq!(pose.translation, Vector3::zeros());

        let ratios = euler_ratios(&AmbientPose::from_pose(&pose)).unwrap();
        assert_eq!(ratios.tuples[0], [0.0; 4]);
        assert_eq!(ratios.tuples[3], [0.0, 0.0, 0.0, 4.0]);
        let (h, l) = matrix_to_dq_with_ratio(&pose, TOL).unwrap();
        assert_eq!(l, 3);
        assert!(h.projective_distance(DualQuaternion::primal(Quaternion::K)) < 1e-15);
    }

    #[test]
    fn unit_translation_along_z() {
        let h = DualQuaternion::new(Quaternion::ONE, Quaternion::K.scale(-0.5));
        let pose = dq_to_matrix(&h, TOL).unwrap();
        assert_eq!(pose.linear, Matrix3::identity());
        assert_eq!(pose.translation, Vector3::new(0.0, 0.0, 1.0));
        assert_eq!(
            dual_from_primal([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0]),
            [0.0, 0.0, 0.0, -0.5]
        );
    }

    #[test]
    fn dual_from_primal_zero_translation() {
        assert_eq!(dual_from_primal([0.3, -0.2, 0.9, 1.4], [0.0; 3]), [0.0; 4]);
    }

    #[test]
    fn identity_ratios() {
        let r = euler_ratios(&AmbientPose::from_pose(&PoseMatrix::identity())).unwrap();
        assert_eq!(r.tuples[0], [4.0, 0.0, 0.0, 0.0]);
        for l in 1..4 {
            assert_eq!(r.tuples[l], [0.0; 4]);
        }
    }

    #[test]
    fn all_zero_ratios_on_degenerate_input() {
        let x = AmbientPose::from_parts([0.0; 10], [1.0, 0.0, 0.0]);
        assert_eq!(euler_ratios(&x), Err(Error::AllZero));
    }

    #[test]
    fn validation_examples() {
        let r = validate_pose(&PoseMatrix::identity(), TOL);
        assert!(r.ok);
        assert_eq!(r.orthogonality_residual, 0.0);
        assert_eq!(r.det_deviation, 0.0);

        let flip = PoseMatrix::new(Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)), Vector3::zeros());
        let r = validate_pose(&flip, TOL);
        assert!(!r.ok);
        assert_eq!(r.determinant, -1.0);

        let mut perturbed = PoseMatrix::identity();
        perturbed.linear[(0, 1)] += 1e-6;
        assert!(!validate_pose(&perturbed, Tolerance(1e-9)).ok);
        assert!(validate_pose(&perturbed, Tolerance(1e-5)).ok);
        assert!(matches!(matrix_to_dq(&perturbed, TOL), Err(Error::InvalidPose { .. })));
    }

    #[test]
    fn study_violation_is_reported() {
        let h = DualQuaternion::new(Quaternion::ONE, Quaternion::ONE);
        assert!(matches!(dq_to_matrix(&h, TOL), Err(Error::StudyViolation { .. })));
        assert!(matches!(
            dq_to_matrix(&DualQuaternion::epsilon(Quaternion::I), TOL),
            Err(Error::ZeroPrimal { .. })
        ));
        // Off-quadric points still describe a displacement.
        assert_eq!(displacement_matrix(&h, TOL).unwrap(), PoseMatrix::identity());
    }

    #[test]
    fn study_fiber_of_identity_and_shift() {
        let f = study_fiber(&DualQuaternion::ONE, TOL).unwrap();
        assert_eq!(f.direction, DualQuaternion::epsilon(Quaternion::ONE));

        let h = DualQuaternion::new(Quaternion::ONE, Quaternion::K.scale(-0.5));
        let f = study_fiber(&h, TOL).unwrap();
        let x = Vector3::new(0.4, -1.0, 2.0);
        let base = h.act(&x, TOL).unwrap();
        for k in 0..10 {
            let (lambda, mu) = (0.5 + k as f64 * 0.3, -2.0 + k as f64 * 0.45);
            let y = f.sample(lambda, mu).act(&x, TOL).unwrap();
            assert!((y - base).norm() < 1e-14);
        }
    }

    #[test]
    fn pose_composition_matches_about_z() {
        let a = PoseMatrix::about_z(FRAC_PI_2, 1.0);
        let b = a * a;
        assert!(b.max_difference(&PoseMatrix::about_z(2.0 * FRAC_PI_2, 2.0)) < 1e-15);
        assert!((a * a.inverse()).max_difference(&PoseMatrix::identity()) < 1e-15);
    }

    #[test]
    fn pose_json_forms() {
        let m: PoseJson = serde_json::from_str(r#"{"matrix": [[1,0,0],[0,1,0],[0,0,1]], "t": [1,2,3]}"#).unwrap();
        assert!(matches!(m, PoseJson::Matrix { .. }));
        let s: PoseJson = serde_json::from_str(r#"{"study": [1,0,0,0,0,0,0,-0.5]}"#).unwrap();
        let pose = s.to_pose(TOL).unwrap();
        assert_eq!(pose.translation, Vector3::new(0.0, 0.0, 1.0));
    }
}

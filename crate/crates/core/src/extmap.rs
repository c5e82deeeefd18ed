//! The family of extended kinematic maps from the matrix model to Study parameters.
//!
//! For a selector `m ∈ P³` the linear map `μ'_m : R¹⁰ → R⁴` extracts a primal
//! part from `(x0, x1..x9)` and `μ_m : P¹² → P⁷` completes it with the dual
//! part `½ Q(a) p`. The map is applied in homogeneous form
//! `X ↦ (x0 · μ'_m(x'), ½ Q(a) μ'_m(x'))`, which agrees with the affine
//! formulas on the chart `x0 = 1` and is well defined on P¹².

use nalgebra::{DMatrix, SMatrix};
use serde::{Deserialize, Serialize};

use crate::algebra::{DualQuatPoly, DualQuaternion, Quaternion, RealPoly};
use crate::error::{Error, Result};
use crate::posemodels::{dual_from_primal, AmbientPose};
use crate::tolerance::Tolerance;

/// Homogeneous selector `m = (m0, m1, m2, m3)` with the derived products `n0..n6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapSelector {
    m: [f64; 4],
    n: [f64; 7],
}

impl MapSelector {
    pub fn new(m: [f64; 4]) -> Result<Self> {
        if m.iter().all(|v| *v == 0.0) || m.iter().any(|v| !v.is_finite()) {
            return Err(Error::UndefinedMap);
        }
        let [m0, m1, m2, m3] = m;
        let n = [
            4.0 * m0 * m1 * m2 * m3,
            m0 * m1 - m2 * m3,
            m0 * m2 - m1 * m3,
            m0 * m3 - m1 * m2,
            m0 * m1 + m2 * m3,
            m0 * m2 + m1 * m3,
            m0 * m3 + m1 * m2,
        ];
        Ok(Self { m, n })
    }

    /// `m = (1, 0, 0, 0)`, the classical Euler-parameter extraction.
    pub fn classical() -> Self {
        Self::new([1.0, 0.0, 0.0, 0.0]).expect("non-zero selector")
    }

    #[inline]
    pub fn m(&self) -> [f64; 4] {
        self.m
    }

    #[inline]
    pub fn n(&self) -> [f64; 7] {
        self.n
    }
}

impl Default for MapSelector {
    fn default() -> Self {
        Self::classical()
    }
}

/// The `ℓ`-th linear form, mapping `(x0, …, x9)` to a primal tuple.
pub fn mu_prime_component(l: usize, x: &[f64; 10]) -> [f64; 4] {
    match l {
        0 => [x[0] + x[1] + x[5] + x[9], x[8] - x[6], x[3] - x[7], x[4] - x[2]],
        1 => [x[8] - x[6], x[0] + x[1] - x[5] - x[9], x[4] + x[2], x[7] + x[3]],
        2 => [x[3] - x[7], x[4] + x[2], x[0] - x[1] + x[5] - x[9], x[8] + x[6]],
        3 => [x[4] - x[2], x[7] + x[3], x[8] + x[6], x[0] - x[1] - x[5] + x[9]],
        _ => panic!("ratio index {l} out of range 0..4"),
    }
}

/// `m0 μ'_0(x) + m1 μ'_1(x) + m2 μ'_2(x) + m3 μ'_3(x)`.
pub fn mu_prime(sel: &MapSelector, x: &[f64; 10]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (l, ml) in sel.m.iter().enumerate() {
        if *ml == 0.0 {
            continue;
        }
        let c = mu_prime_component(l, x);
        for i in 0..4 {
            out[i] += ml * c[i];
        }
    }
    out
}

/// The 4×10 matrix `M_m = [M1, M2]` with `μ'_m(x) = M_m x`.
pub fn map_matrix(sel: &MapSelector) -> SMatrix<f64, 4, 10> {
    let [m0, m1, m2, m3] = sel.m;
    #[rustfmt::skip]
    let rows = [
        m0,  m0, -m3,  m2,  m3,    m0, -m1, -m2,  m1,  m0,
        m1,  m1,  m2,  m3,  m2,   -m1, -m0,  m3,  m0, -m1,
        m2, -m2,  m1,  m0,  m1,    m2,  m3, -m0,  m3, -m2,
        m3, -m3, -m0,  m1,  m0,   -m3,  m2,  m1,  m2,  m3,
    ];
    SMatrix::<f64, 4, 10>::from_row_slice(&rows)
}

/// The six nullspace generators in closed form.
pub fn closed_form_basis(sel: &MapSelector) -> [[f64; 10]; 6] {
    let [n0, n1, n2, n3, n4, n5, n6] = sel.n;
    [
        [n1 * n2, -n2 * n4, n0, 0.0, 0.0, -n1 * n5, 0.0, 0.0, 0.0, n4 * n5],
        [-n4 * n6, n1 * n6, 0.0, n0, 0.0, -n1 * n3, 0.0, 0.0, 0.0, n3 * n4],
        [-n4 * n5, n1 * n5, 0.0, 0.0, n0, n2 * n4, 0.0, 0.0, 0.0, -n1 * n2],
        [n2 * n3, n5 * n6, 0.0, 0.0, 0.0, -n3 * n5, n0, 0.0, 0.0, -n2 * n6],
        [n1 * n3, -n3 * n4, 0.0, 0.0, 0.0, n4 * n6, 0.0, n0, 0.0, -n1 * n6],
        [-n5 * n6, -n2 * n3, 0.0, 0.0, 0.0, n2 * n6, 0.0, 0.0, n0, n3 * n5],
    ]
}

/// Where the basis vectors of a [`NullspaceBasis`] come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisSource {
    ClosedForm,
    /// Reduced row echelon form of `M_m`, used when the closed form loses rank.
    Computed,
}

/// Basis of the nullspace of `M_m`, as rotational parts `(x0, …, x9)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullspaceBasis {
    pub vectors: Vec<[f64; 10]>,
    /// Numerical rank of the closed-form generators.
    pub closed_form_rank: usize,
    pub source: BasisSource,
}

impl NullspaceBasis {
    /// Offset of the homogenising coordinate, `Σ αℓ vℓ[0]`.
    pub fn homogenizer_shift(&self, offsets: &FiberOffsets) -> f64 {
        self.vectors.iter().zip(offsets.0.iter()).map(|(v, a)| a * v[0]).sum()
    }

    /// `x' + Σ αℓ vℓ`.
    pub fn displace(&self, x: &[f64; 10], offsets: &FiberOffsets) -> [f64; 10] {
        let mut y = *x;
        for (v, a) in self.vectors.iter().zip(offsets.0.iter()) {
            for i in 0..10 {
                y[i] += a * v[i];
            }
        }
        y
    }

    /// Offsets whose homogeniser shift equals `target`, using the generator with
    /// the largest homogenising entry.
    pub fn offsets_for_shift(&self, target: f64) -> Result<FiberOffsets> {
        let (idx, v0) = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v[0]))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .ok_or_else(|| Error::NoSolution("empty nullspace basis".into()))?;
        if v0 == 0.0 {
            if target == 0.0 {
                return Ok(FiberOffsets::zero());
            }
            return Err(Error::NoSolution(
                "nullspace has no component along the homogeniser".into(),
            ));
        }
        let mut alpha = [0.0; 6];
        alpha[idx] = target / v0;
        Ok(FiberOffsets(alpha))
    }
}

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let scale = m.amax();
    if scale == 0.0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let threshold = 1e-10 * scale * (m.nrows().max(m.ncols()) as f64);
    svd.singular_values.iter().filter(|s| **s > threshold).count()
}

/// Rank of `M_m` as computed from its singular values.
pub fn map_rank(sel: &MapSelector) -> usize {
    let m = map_matrix(sel);
    numerical_rank(&DMatrix::from_fn(4, 10, |i, j| m[(i, j)]))
}

/// Dimension of the numerical nullspace of `M_m`.
pub fn nullspace_dimension(sel: &MapSelector) -> usize {
    10 - map_rank(sel)
}

fn rref_nullspace(a: &SMatrix<f64, 4, 10>) -> Vec<[f64; 10]> {
    let mut m = *a;
    let scale = m.amax().max(1.0);
    let eps = 1e-12 * scale;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..10 {
        if row == 4 {
            break;
        }
        let (best, val) = (row..4)
            .map(|r| (r, m[(r, col)].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if val <= eps {
            continue;
        }
        m.swap_rows(row, best);
        let pv = m[(row, col)];
        for j in 0..10 {
            m[(row, j)] /= pv;
        }
        for r in 0..4 {
            if r != row {
                let f = m[(r, col)];
                if f != 0.0 {
                    for j in 0..10 {
                        m[(r, j)] -= f * m[(row, j)];
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..10)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = [0.0; 10];
            v[free] = 1.0;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(r, free)];
            }
            v
        })
        .collect()
}

/// Nullspace of `M_m`: the closed-form generators when they have full rank,
/// otherwise a reduced-row-echelon basis.
pub fn nullspace_basis(sel: &MapSelector) -> NullspaceBasis {
    let closed = closed_form_basis(sel);
    let mat = DMatrix::from_fn(10, 6, |i, j| closed[j][i]);
    let closed_form_rank = numerical_rank(&mat);
    if closed_form_rank == 6 {
        NullspaceBasis {
            vectors: closed.to_vec(),
            closed_form_rank,
            source: BasisSource::ClosedForm,
        }
    } else {
        NullspaceBasis {
            vectors: rref_nullspace(&map_matrix(sel)),
            closed_form_rank,
            source: BasisSource::Computed,
        }
    }
}

/// Coordinates of a fiber point with respect to a [`NullspaceBasis`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FiberOffsets(pub [f64; 6]);

impl FiberOffsets {
    pub fn zero() -> Self {
        Self([0.0; 6])
    }
}

/// The scalar through which fiber offsets enter a straight-line interpolant:
/// `n1n2 α0 − n4n6 α1 − n4n5 α2 + n2n3 α3 + n1n3 α4 − n5n6 α5`.
pub fn essential_scalar(sel: &MapSelector, offsets: &FiberOffsets) -> f64 {
    let [_, n1, n2, n3, n4, n5, n6] = sel.n;
    let a = offsets.0;
    n1 * n2 * a[0] - n4 * n6 * a[1] - n4 * n5 * a[2] + n2 * n3 * a[3] + n1 * n3 * a[4] - n5 * n6 * a[5]
}

fn zero_image_threshold(x: &[f64], tol: Tolerance) -> f64 {
    tol.get() * x.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}

/// `μ_m(X)` as homogeneous Study parameters. Always on the Study quadric.
pub fn mu(sel: &MapSelector, x: &AmbientPose, tol: Tolerance) -> Result<DualQuaternion> {
    let rot = x.rotational();
    let p = mu_prime(sel, &rot);
    let limit = zero_image_threshold(&x.coords, tol);
    let pmax = p.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if pmax <= limit || (x.x0() * pmax).abs() <= limit * tol.get() {
        return Err(Error::ZeroImage { t: None });
    }
    let q = dual_from_primal(p, x.translation());
    Ok(DualQuaternion::new(
        Quaternion::from_array(p).scale(x.x0()),
        Quaternion::from_array(q),
    ))
}

/// `μ_m` applied to a polynomial curve in the ambient space, coordinate by coordinate.
pub fn mu_polynomial(sel: &MapSelector, curve: &[RealPoly; 13]) -> DualQuatPoly {
    let sm = map_matrix(sel);
    let p: [RealPoly; 4] =
        std::array::from_fn(|i| (0..10).fold(RealPoly::zero(), |acc, j| &acc + &curve[j].scale(sm[(i, j)])));
    let [a1, a2, a3] = [&curve[10], &curve[11], &curve[12]];
    let half = |x: RealPoly| x.scale(0.5);
    let q = [
        half(&(&(a1 * &p[1]) + &(a2 * &p[2])) + &(a3 * &p[3])),
        half(&(&(a3 * &p[2]) - &(a1 * &p[0])) - &(a2 * &p[3])),
        half(&(&(a1 * &p[3]) - &(a2 * &p[0])) - &(a3 * &p[1])),
        half(&(&(a2 * &p[1]) - &(a3 * &p[0])) - &(a1 * &p[2])),
    ];
    let x0 = &curve[0];
    let comps: [RealPoly; 8] = std::array::from_fn(|i| if i < 4 { x0 * &p[i] } else { q[i - 4].clone() });
    DualQuatPoly::from_components(&comps)
}

/// Affine parameterisation of the `μ_m`-fiber through `X`:
/// `y(α) = x0 · (x' + Σ αℓ fℓ) + ψ(α) · xᵗ`, `ψ(α)` the homogeniser of `x' + Σ αℓ fℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberGenerator {
    pub selector: MapSelector,
    pub base: AmbientPose,
    pub basis: NullspaceBasis,
}

impl FiberGenerator {
    pub fn point(&self, offsets: &FiberOffsets) -> AmbientPose {
        let x0 = self.base.x0();
        let y = self.basis.displace(&self.base.rotational(), offsets);
        let psi = y[0];
        let t = self.base.translation();
        AmbientPose::from_parts(y.map(|v| x0 * v), t.map(|v| psi * v))
    }
}

pub fn fiber(sel: &MapSelector, x: &AmbientPose, tol: Tolerance) -> Result<FiberGenerator> {
    if x.x0().abs() <= tol.get() {
        return Err(Error::InvalidSpec(
            "fibers are only generated through points with x0 ≠ 0".into(),
        ));
    }
    mu(sel, x, tol)?;
    Ok(FiberGenerator {
        selector: *sel,
        base: *x,
        basis: nullspace_basis(sel),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posemodels::{euler_ratios, PoseMatrix};

    const IDENTITY: [f64; 10] = [1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];

    #[test]
    fn selector_products() {
        let s = MapSelector::new([1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(s.n(), [4.0, 0.0, 0.0, 0.0, 2.0, 2.0, 2.0]);
        assert_eq!(MapSelector::new([0.0; 4]), Err(Error::UndefinedMap));
    }

    #[test]
    fn identity_embedding_components() {
        assert_eq!(mu_prime_component(0, &IDENTITY), [4.0, 0.0, 0.0, 0.0]);
        assert_eq!(mu_prime_component(3, &IDENTITY), [0.0; 4]);
        assert_eq!(mu_prime(&MapSelector::classical(), &IDENTITY), [4.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn first_row_at_e0() {
        let m = map_matrix(&MapSelector::classical());
        let row: Vec<f64> = (0..10).map(|j| m[(0, j)]).collect();
        assert_eq!(row, IDENTITY.to_vec());
    }

    #[test]
    fn worked_basis_vector() {
        let s = MapSelector::new([1.0, 1.0, 1.0, 1.0]).unwrap();
        let f = closed_form_basis(&s);
        assert_eq!(f[0], [0.0, 0.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0]);
        assert_eq!(mu_prime(&s, &f[0]), [0.0; 4]);
        let basis = nullspace_basis(&s);
        assert_eq!(basis.source, BasisSource::ClosedForm);
    }

    #[test]
    fn degenerate_selector_falls_back() {
        let s = MapSelector::classical();
        let basis = nullspace_basis(&s);
        assert_eq!(basis.closed_form_rank, 0);
        assert_eq!(basis.source, BasisSource::Computed);
        assert_eq!(basis.vectors.len(), 6);
        for v in &basis.vectors {
            assert!(mu_prime(&s, v).iter().all(|c| c.abs() < 1e-14));
        }
        assert_eq!(nullspace_dimension(&s), 6);
    }

    #[test]
    fn essential_scalar_examples() {
        let s = MapSelector::new([1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(essential_scalar(&s, &FiberOffsets::zero()), 0.0);
        assert_eq!(essential_scalar(&s, &FiberOffsets([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])), 0.0);
    }

    #[test]
    fn mu_of_identity() {
        let x = AmbientPose::from_pose(&PoseMatrix::identity());
        let h = mu(&MapSelector::classical(), &x, Tolerance::DEFAULT).unwrap();
        assert!(h.projective_distance(DualQuaternion::ONE) < 1e-15);
    }

    #[test]
    fn zero_image_in_base_set() {
        let s = MapSelector::new([0.3, -0.5, 0.8, 0.2]).unwrap();
        let f = closed_form_basis(&s);
        let x = AmbientPose::from_parts(f[2], [1.0, 2.0, 3.0]);
        assert_eq!(mu(&s, &x, Tolerance::DEFAULT), Err(Error::ZeroImage { t: None }));
    }

    #[test]
    fn euler_ratios_agree_with_linear_forms() {
        let pose = PoseMatrix::rotation(&nalgebra::Vector3::new(0.2, -0.4, 0.9), 2.2);
        let x = AmbientPose::from_pose(&pose);
        let r = euler_ratios(&x).unwrap();
        for l in 0..4 {
            let c = mu_prime_component(l, &x.rotational());
            for (ci, ri) in c.iter().zip(r.tuples[l]) {
                assert!((ci - ri).abs() < 1e-15);
            }
        }
    }
}

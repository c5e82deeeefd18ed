//! Randomised property suites behind the `check` command.
//!
//! Every suite is deterministic for a given seed and reports each measured
//! quantity next to its bound.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::algebra::{DualQuatPoly, DualQuaternion, Quaternion, RealPoly};
use crate::bezier::{bezier_motion, bezier_subdivide, ControlPolygon};
use crate::error::Error;
use crate::extmap::{
    closed_form_basis, fiber, map_matrix, mu, nullspace_basis, nullspace_dimension, FiberOffsets, MapSelector,
};
use crate::motions::{
    canonicalize_pair, cubic_from_essentials, cubic_interpolant, cubic_pitch_product, curve_distance, cylinder_check,
    darboux_for_pair, factor_cubic, line_symmetric_motion, pitch_at, ruling_family, select_interpolant,
    trajectory_diagnostics, trajectory_exact, transmission_curve, CanonicalPair, Constraint, CubicOptions, RulingSpec,
    TransmissionLaw,
};
use crate::posemodels::{dq_to_matrix, matrix_to_dq, AmbientPose, PoseMatrix};
use crate::tolerance::Tolerance;

pub const DEFAULT_SEED: u64 = 0x6d6f_7469_6f6e;
const TOL: Tolerance = Tolerance::DEFAULT;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    /// `value ≤ bound`.
    pub fn at_most(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            label: label.into(),
            value,
            bound,
            passed: value <= bound,
        }
    }

    /// A yes/no property, counted as the number of violations.
    pub fn count(label: impl Into<String>, violations: usize) -> Self {
        Self::at_most(label, violations as f64, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {status} {}", self.id, self.title)?;
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            write!(
                f,
                "\n    {mark:<6} {}: {:.3e} (bound {:.1e})",
                c.label, c.value, c.bound
            )?;
        }
        Ok(())
    }
}

fn rng(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(id) << 56))
}

fn unit_quaternion(rng: &mut impl Rng) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        let n = q.norm();
        if n > 1e-3 {
            return q.scale(1.0 / n);
        }
    }
}

fn uniform3(rng: &mut impl Rng, r: f64) -> Vector3<f64> {
    Vector3::new(
        rng.random_range(-r..r),
        rng.random_range(-r..r),
        rng.random_range(-r..r),
    )
}

fn random_displacement(rng: &mut impl Rng, r: f64) -> DualQuaternion {
    DualQuaternion::translation(&uniform3(rng, r)) * DualQuaternion::primal(unit_quaternion(rng))
}

fn random_pose(rng: &mut impl Rng, r: f64) -> PoseMatrix {
    dq_to_matrix(&random_displacement(rng, r), TOL).expect("unit displacement")
}

/// Selector with components in `[−1, 1]`, all of modulus at least `floor`.
fn random_selector(rng: &mut impl Rng, floor: f64) -> MapSelector {
    let m = std::array::from_fn(|_| {
        let v: f64 = rng.random_range(floor..1.0);
        if rng.random_bool(0.5) {
            v
        } else {
            -v
        }
    });
    MapSelector::new(m).expect("non-zero selector")
}

fn random_offsets(rng: &mut impl Rng, r: f64) -> FiberOffsets {
    FiberOffsets(std::array::from_fn(|_| rng.random_range(-r..r)))
}

fn canonical_pair(phi: f64, d: f64) -> CanonicalPair {
    canonicalize_pair(&PoseMatrix::identity(), &PoseMatrix::about_z(phi, d), TOL).expect("valid poses")
}

fn wrap_angle(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

/// Projective distance between coefficient vectors of two polynomials.
pub fn poly_projective_distance(a: &DualQuatPoly, b: &DualQuatPoly) -> f64 {
    let n = a.coeffs.len().max(b.coeffs.len());
    let flat = |p: &DualQuatPoly| -> Vec<f64> { (0..n).flat_map(|i| p.coeff(i).to_array()).collect() };
    let (x, y) = (flat(a), flat(b));
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let dot: f64 = x.iter().zip(&y).map(|(u, v)| u * v).sum();
    let s = if dot < 0.0 { -1.0 } else { 1.0 };
    x.iter()
        .zip(&y)
        .map(|(u, v)| (u / nx - s * v / ny).powi(2))
        .sum::<f64>()
        .sqrt()
}

pub fn criterion_1(seed: u64) -> CriterionReport {
    let mut rng = rng(seed, 1);
    let (mut dist, mut study) = (0.0_f64, 0.0_f64);
    let mut failures = 0;
    for _ in 0..10_000 {
        let h = random_displacement(&mut rng, 10.0);
        match dq_to_matrix(&h, TOL).and_then(|pose| matrix_to_dq(&pose, TOL)) {
            Ok(back) => {
                dist = dist.max(back.projective_distance(h));
                study = study.max(back.relative_study_residual());
            }
            Err(_) => failures += 1,
        }
    }
    CriterionReport {
        id: 1,
        title: "conversion round trip",
        checks: vec![
            Check::at_most("dq→matrix→dq projective distance", dist, 1e-9),
            Check::at_most("matrix→dq Study residual", study, 1e-12),
            Check::count("conversion errors", failures),
        ],
    }
}

pub fn criterion_2(seed: u64) -> CriterionReport {
    let mut rng = rng(seed, 2);
    let (mut annihilation, mut wrong_dim) = (0.0_f64, 0);
    for _ in 0..100 {
        let m = random_selector(&mut rng, 1e-3);
        let mat = map_matrix(&m);
        for f in closed_form_basis(&m) {
            let r = mat * nalgebra::SVector::<f64, 10>::from(f);
            annihilation = annihilation.max(r.amax());
        }
        if m.n().iter().all(|v| *v != 0.0) && nullspace_dimension(&m) != 6 {
            wrong_dim += 1;
        }
    }
    let ones = MapSelector::new([1.0; 4]).expect("non-zero");
    let f0 = nullspace_basis(&ones).vectors[0];
    let expected = [0.0, 0.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0];
    CriterionReport {
        id: 2,
        title: "nullspace annihilation",
        checks: vec![
            Check::at_most("max |M_m f_i|", annihilation, 1e-12),
            Check::count("selectors with nullspace dimension ≠ 6", wrong_dim),
            Check::count(
                "f0 at m = (1,1,1,1) differs from (0,0,4,0,0,0,0,0,0,4)",
                usize::from(f0 != expected),
            ),
        ],
    }
}

pub fn criterion_3(seed: u64) -> CriterionReport {
    let mut rng = rng(seed, 3);
    let (mut spread, mut errors) = (0.0_f64, 0);
    for _ in 0..10 {
        let m = random_selector(&mut rng, 0.1);
        let x = AmbientPose::from_pose(&random_pose(&mut rng, 5.0));
        let Ok(gen) = fiber(&m, &x, TOL) else {
            errors += 1;
            continue;
        };
        let base = mu(&m, &x, TOL).expect("defined at the generator's base");
        for _ in 0..100 {
            match mu(&m, &gen.point(&random_offsets(&mut rng, 1.0)), TOL) {
                Ok(h) => spread = spread.max(h.projective_distance(base)),
                Err(_) => errors += 1,
            }
        }
    }
    let (mut missed, mut spurious) = (0, 0);
    for _ in 0..100 {
        let m = random_selector(&mut rng, 0.1);
        let basis = closed_form_basis(&m);
        let rot = loop {
            let coeffs = random_offsets(&mut rng, 1.0).0;
            let mut rot = [0.0; 10];
            for (f, c) in basis.iter().zip(coeffs) {
                for (r, v) in rot.iter_mut().zip(f) {
                    *r += c * v;
                }
            }
            if rot[0].abs() > 1e-3 * rot.iter().fold(0.0_f64, |m, v| m.max(v.abs())) {
                break rot;
            }
        };
        let in_base = AmbientPose::from_parts(rot, uniform3(&mut rng, 3.0).into());
        if !matches!(mu(&m, &in_base, TOL), Err(Error::ZeroImage { .. })) {
            missed += 1;
        }
        let generic = AmbientPose::new(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        if mu(&m, &generic, TOL).is_err() {
            spurious += 1;
        }
    }
    CriterionReport {
        id: 3,
        title: "fiber constancy",
        checks: vec![
            Check::at_most("max projective spread of μ_m on fibers", spread, 1e-9),
            Check::count("undefined fiber samples", errors),
            Check::count("base-set points without ZeroImage", missed),
            Check::count("generic points with ZeroImage", spurious),
        ],
    }
}

pub fn criterion_4(seed: u64) -> CriterionReport {
    let mut rng = rng(seed, 4);
    let (mut residual, mut errors) = (0.0_f64, 0);
    for _ in 0..1000 {
        let m = random_selector(&mut rng, 0.0);
        let mut c: [f64; 13] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        c[0] = 1.0;
        for v in &mut c[10..] {
            *v *= 10.0;
        }
        match mu(&m, &AmbientPose::new(c), TOL) {
            Ok(h) => residual = residual.max(h.relative_study_residual()),
            Err(_) => errors += 1,
        }
    }
    CriterionReport {
        id: 4,
        title: "Study containment of the extended map",
        checks: vec![
            Check::at_most("max Study residual of μ_m images", residual, 1e-12),
            Check::count("undefined images", errors),
        ],
    }
}

struct CubicCase {
    pair: CanonicalPair,
    m: MapSelector,
    a: f64,
    b: f64,
}

fn random_cubic_case(rng: &mut impl Rng) -> CubicCase {
    let phi = rng.random_range(0.05..PI - 0.05);
    let d = rng.random_range(-3.0..3.0);
    CubicCase {
        pair: canonical_pair(phi, d),
        m: random_selector(rng, 0.2),
        a: rng.random_range(-0.9..2.0),
        b: rng.random_range(-0.9..2.0),
    }
}

/// Closed forms of the coordinate functions `c₀, c₃, c₄, c₇` of the canonical cubic.
fn closed_form_cubic(case: &CubicCase) -> [RealPoly; 4] {
    let [m0, _, _, m3] = case.m.m();
    let (phi, d, a, b) = (case.pair.phi, case.pair.d, case.a, case.b);
    let g1 = RealPoly::linear(-2.0 * (a + 1.0), -2.0 * (b - a));
    let g2 = RealPoly::linear(0.0, d * (b + 1.0));
    let c0 = (&g1 * &RealPoly::linear(2.0 * m0, m0 * (phi.cos() - 1.0) + m3 * phi.sin())).scale(-1.0);
    let c3_over_g1 = RealPoly::linear(0.0, m3 * (phi.cos() - 1.0) - m0 * phi.sin());
    let c3 = &g1 * &c3_over_g1;
    let c4 = (&g2 * &c3_over_g1).scale(-1.0);
    let c7 = (&g2 * &RealPoly::linear(2.0 * m0, m0 * (phi.cos() - 1.0) + m3 * phi.sin())).scale(-1.0);
    [c0, c3, c4, c7]
}

pub fn criterion_5(seed: u64) -> CriterionReport {
    let mut rng = rng(seed, 5);
    let (mut sparse, mut closed, mut division) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut errors = 0;
    for _ in 0..100 {
        let case = random_cubic_case(&mut rng);
        let motion = match cubic_from_essentials(&case.pair, &case.m, case.a, case.b, CubicOptions::default(), TOL) {
            Ok(m) => m,
            Err(_) => {
                errors += 1;
                continue;
            }
        };
        let poly = motion.poly().expect("polynomial");
        let scale = poly.max_abs();
        let comps = poly.components();
        for i in [1, 2, 5, 6] {
            sparse = sparse.max(comps[i].max_abs() / scale);
        }
        let shown = closed_form_cubic(&case);
        let zero = RealPoly::zero();
        let expected = DualQuatPoly::from_components(&[
            shown[0].clone(),
            zero.clone(),
            zero.clone(),
            shown[1].clone(),
            shown[2].clone(),
            zero.clone(),
            zero,
            shown[3].clone(),
        ]);
        closed = closed.max(poly_projective_distance(poly, &expected));
        if case.b != case.a {
            let root = (case.a + 1.0) / (case.a - case.b);
            for c in &comps[..4] {
                let size: f64 = (0..c.coeffs.len())
                    .map(|k| c.coeff(k).abs() * root.abs().powi(k as i32))
                    .sum();
                if size > 0.0 {
                    division = division.max(c.eval(root).abs() / size);
                }
            }
        }
    }
    CriterionReport {
        id: 5,
        title: "structure of the cubic coordinate functions",
        checks: vec![
            Check::at_most("coefficients of c1, c2, c5, c6", sparse, 1e-12),
            Check::at_most("distance to the closed forms of c0, c3, c4, c7", closed, 1e-10),
            Check::at_most("relative value of the primal part at the root of g1", division, 1e-12),
            Check::count("construction errors", errors),
        ],
    }
}

pub fn criterion_6(seed: u64) -> CriterionReport {
    let mut rng = rng(seed, 6);
    let (mut tangent, mut sine, mut ends, mut half) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let mut errors = 0;
    for _ in 0..20 {
        let case = random_cubic_case(&mut rng);
        let res = cubic_from_essentials(&case.pair, &case.m, case.a, case.b, CubicOptions::default(), TOL)
            .and_then(|c| transmission_curve(&c, &case.pair, 1000, TOL));
        match res {
            Ok(tc) => {
                tangent = tangent.max(tc.residual);
                let (s, e) = (tc.first(), tc.last());
                ends = ends
                    .max(s.omega.abs())
                    .max(s.z.abs())
                    .max(wrap_angle(e.omega - case.pair.phi).abs())
                    .max((e.z - case.pair.d).abs());
                half = half.max(wrap_angle(e.omega - case.pair.phi).abs());
                if !matches!(tc.law, TransmissionLaw::Tangent { .. }) {
                    errors += 1;
                }
            }
            Err(_) => errors += 1,
        }
        let a = random_pose(&mut rng, 3.0);
        let b = random_pose(&mut rng, 3.0);
        let res = canonicalize_pair(&a, &b, TOL).and_then(|pair| {
            let s = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let motion = darboux_for_pair(&pair, s.0, s.1, TOL)?;
            Ok((pair, transmission_curve(&motion, &pair, 1000, TOL)?))
        });
        match res {
            Ok((pair, tc)) => {
                sine = sine.max(tc.residual);
                let (s, e) = (tc.first(), tc.last());
                ends = ends
                    .max(s.omega.abs())
                    .max(s.z.abs())
                    .max(wrap_angle(e.omega - pair.phi).abs())
                    .max((e.z - pair.d).abs());
            }
            Err(_) => errors += 1,
        }
    }
    CriterionReport {
        id: 6,
        title: "transmission laws",
        checks: vec![
            Check::at_most("tangent-law residual (cubic, 1000 samples)", tangent, 1e-9),
            Check::at_most("sine-law fit residual (Darboux, 1000 samples)", sine, 1e-9),
            Check::at_most("endpoint (ω, z) error", ends, 1e-9),
            Check::at_most("end rotation ω(1) − φ for random m", half, 1e-12),
            Check::count("construction errors", errors),
        ],
    }
}

pub fn criterion_7(seed: u64) -> CriterionReport {
    let mut rng = rng(seed, 7);
    let (mut darboux_deg, mut cubic_deg, mut not_ellipse, mut infinity) = (0, 0, 0, 0);
    let (mut circle, mut conic) = (0.0_f64, 0.0_f64);
    let mut errors = 0;
    let pair = canonicalize_pair(&random_pose(&mut rng, 2.0), &random_pose(&mut rng, 2.0), TOL).expect("valid poses");
    let darboux = darboux_for_pair(&pair, 0.4, -0.3, TOL).expect("Darboux interpolant");
    let case = random_cubic_case(&mut rng);
    let cubic = cubic_from_essentials(&case.pair, &case.m, case.a, case.b, CubicOptions::default(), TOL)
        .expect("cubic interpolant");
    for _ in 0..20 {
        let x = uniform3(&mut rng, 2.0);
        match trajectory_exact(&darboux, &x) {
            Ok(curve) => {
                darboux_deg += usize::from(curve.degree != 2);
                let report = trajectory_diagnostics(&curve, None, darboux.domain());
                match report.conic {
                    Some(c) => {
                        not_ellipse += usize::from(c.kind != crate::fitting::ConicKind::Ellipse);
                        conic = conic.max(c.residual).max(report.plane_residual.unwrap_or(0.0));
                    }
                    None => not_ellipse += 1,
                }
            }
            Err(_) => errors += 1,
        }
        match trajectory_exact(&cubic, &x) {
            Ok(curve) => {
                cubic_deg += usize::from(curve.degree != 3);
                infinity += usize::from(curve.points_at_infinity() != 1);
                let report = trajectory_diagnostics(&curve, Some(&case.pair.world_axis()), cubic.domain());
                circle = circle.max(report.circle.map_or(f64::INFINITY, |c| c.residual));
            }
            Err(_) => errors += 1,
        }
    }
    CriterionReport {
        id: 7,
        title: "trajectory degrees",
        checks: vec![
            Check::count("Darboux trajectories of degree ≠ 2", darboux_deg),
            Check::count("cubic trajectories of degree ≠ 3", cubic_deg),
            Check::count("cubic trajectories without exactly one point at infinity", infinity),
            Check::at_most("projected circle residual (cubic)", circle, 1e-9),
            Check::at_most("conic fit residual (Darboux)", conic, 1e-9),
            Check::count("Darboux trajectories not classified as ellipses", not_ellipse),
            Check::count("trajectory errors", errors),
        ],
    }
}

pub fn criterion_8(seed: u64) -> CriterionReport {
    let mut rng = rng(seed, 8);
    let mut product = 0.0_f64;
    let (mut missed, mut spurious, mut errors) = (0, 0, 0);
    for k in 0..50 {
        let pa: f64 = rng.random_range(0.2..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let pb_generic = pa * rng.random_range(1.3..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let pb = if k % 2 == 0 {
            pb_generic
        } else {
            pa * if k % 4 == 1 { 1.0 } else { -1.0 }
        };
        let res = ruling_family(RulingSpec::HyperbolicParaboloid { pa, pb })
            .and_then(|fam| line_symmetric_motion(&fam, (0.5, 2.0)))
            .and_then(|motion| Ok((factor_cubic(pa, pb)?, motion)));
        let Ok((f, motion)) = res else {
            errors += 1;
            continue;
        };
        let diff = &f.product() - motion.poly().expect("polynomial");
        product = product.max(diff.max_abs());
        let cylindrical = cylinder_check(&motion, TOL).is_ok();
        if k % 2 == 0 {
            spurious += usize::from(cylindrical);
        } else {
            missed += usize::from(!cylindrical);
        }
    }
    CriterionReport {
        id: 8,
        title: "factorization and cylinder criterion",
        checks: vec![
            Check::at_most("4(ai + bj) F1 F2 − c(t), coefficientwise", product, 1e-12),
            Check::count("a = ±b motions rejected by cylinder_check", missed),
            Check::count("a ≠ ±b motions accepted by cylinder_check", spurious),
            Check::count("construction errors", errors),
        ],
    }
}

pub fn criterion_9(seed: u64) -> CriterionReport {
    let mut rng = rng(seed, 9);
    let mut recover = 0.0_f64;
    let mut errors = 0;
    for _ in 0..10 {
        let res = canonicalize_pair(&random_pose(&mut rng, 3.0), &random_pose(&mut rng, 3.0), TOL).and_then(|pair| {
            let planted = darboux_for_pair(&pair, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), TOL)?;
            let third = planted.pose_matrix_at(0.5, TOL)?;
            let got = select_interpolant(&pair, &Constraint::DarbouxThirdPose(third), TOL)?;
            curve_distance(&planted, &got, 50, TOL)
        });
        match res {
            Ok(d) => recover = recover.max(d),
            Err(_) => errors += 1,
        }
    }

    let mut feasible = 0.0_f64;
    for _ in 0..10 {
        let phi = rng.random_range(0.2..PI - 0.2);
        let d = rng.random_range(0.2..3.0);
        let pair = canonical_pair(phi, d);
        let start = rng.random_range(0.2..3.0);
        let end = cubic_pitch_product(phi, d) / start;
        feasible = feasible.max(pitch_pair_error(&pair, start, end));
    }
    let opposite = select_interpolant(
        &canonical_pair(FRAC_PI_2, 1.0),
        &Constraint::CubicPitchPair {
            start: 2.0,
            end: -1.0,
            m: MapSelector::classical(),
        },
        TOL,
    );
    let rejected = matches!(opposite, Err(Error::PitchPairInfeasible { .. }));
    let literal = pitch_pair_error(&canonical_pair(FRAC_PI_2, 1.0), 2.0, 1.0);

    let pair = canonical_pair(1.1, 0.8);
    let m = MapSelector::new([0.9, 0.2, -0.1, 0.3]).expect("non-zero");
    let family: Vec<_> = (0..10)
        .map(|k| {
            let b = -0.5 + 0.35 * k as f64;
            cubic_from_essentials(&pair, &m, 0.25 * (k % 3) as f64, b, CubicOptions::default(), TOL)
        })
        .collect::<Result<_, _>>()
        .unwrap_or_default();
    let mut closest = f64::INFINITY;
    let mut endpoint = 0.0_f64;
    for (i, a) in family.iter().enumerate() {
        let (Ok(s), Ok(e)) = (a.pose_matrix_at(0.0, TOL), a.pose_matrix_at(1.0, TOL)) else {
            endpoint = f64::INFINITY;
            continue;
        };
        endpoint = endpoint.max(s.max_difference(&pair.a)).max(e.max_difference(&pair.b));
        for b in &family[i + 1..] {
            closest = closest.min(curve_distance(a, b, 21, TOL).unwrap_or(0.0));
        }
    }
    CriterionReport {
        id: 9,
        title: "selection statements",
        checks: vec![
            Check::at_most("Darboux third-pose recovery, curve distance", recover, 1e-9),
            Check::count("third-pose selection errors", errors),
            Check::at_most("cubic pitch pair reproduction (feasible pairs)", feasible, 1e-8),
            Check::count("opposite-sign pitch pair accepted", usize::from(!rejected)),
            Check::at_most(
                "cubic pitch pair (+2, +1) at φ = π/2, d = 1, where the pitch product is 0.5",
                literal,
                1e-8,
            ),
            Check::count("family members missing", 10 - family.len()),
            Check::at_most("family endpoint error", endpoint, 1e-9),
            Check::at_most("negated smallest pairwise family distance", -closest, -1e-6),
        ],
    }
}

fn pitch_pair_error(pair: &CanonicalPair, start: f64, end: f64) -> f64 {
    let c = Constraint::CubicPitchPair {
        start,
        end,
        m: MapSelector::classical(),
    };
    let Ok(motion) = select_interpolant(pair, &c, TOL) else {
        return f64::INFINITY;
    };
    let p0 = pitch_at(&motion, pair, 0.0, TOL).ok().and_then(|p| p.value());
    let p1 = pitch_at(&motion, pair, 1.0, TOL).ok().and_then(|p| p.value());
    match (p0, p1) {
        (Some(p0), Some(p1)) => (p0 - start).abs().max((p1 - end).abs()),
        _ => f64::INFINITY,
    }
}

pub fn criterion_10(seed: u64) -> CriterionReport {
    let mut rng = rng(seed, 10);
    let (mut segment, mut subdivision, mut ends) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut errors = 0;
    for _ in 0..20 {
        let phi = rng.random_range(0.05..PI - 0.05);
        let d = rng.random_range(-3.0..3.0);
        let m = random_selector(&mut rng, 0.2);
        let pair = canonical_pair(phi, d);
        let res = ControlPolygon::from_poses(&[pair.a, pair.b], None, &m, TOL).and_then(|cp| {
            let b = bezier_motion(&cp, &m, TOL)?;
            let c = cubic_interpolant(&pair, &m, &FiberOffsets::zero(), &FiberOffsets::zero(), TOL)?;
            Ok(poly_projective_distance(
                b.poly().expect("polynomial"),
                c.poly().expect("polynomial"),
            ))
        });
        match res {
            Ok(dist) => segment = segment.max(dist),
            Err(_) => errors += 1,
        }
    }
    for _ in 0..10 {
        let base = random_pose(&mut rng, 2.0);
        let poses: Vec<PoseMatrix> = (0..4)
            .map(|_| {
                let small = DualQuaternion::translation(&uniform3(&mut rng, 1.0))
                    * DualQuaternion::rotation(&uniform3(&mut rng, 1.0).normalize(), rng.random_range(0.0..0.8));
                base * dq_to_matrix(&small, TOL).expect("unit displacement")
            })
            .collect();
        let m =
            MapSelector::new([1.0, rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3), 0.0]).expect("non-zero");
        let res = ControlPolygon::from_poses(&poses, None, &m, TOL).and_then(|cp| {
            let full = bezier_motion(&cp, &m, TOL)?;
            let (l, r) = bezier_subdivide(&cp, 0.5);
            let (left, right) = (bezier_motion(&l, &m, TOL)?, bezier_motion(&r, &m, TOL)?);
            let mut worst = 0.0_f64;
            for k in 0..20 {
                let s = k as f64 / 19.0;
                worst = worst
                    .max(left.pose_at(s, TOL)?.projective_distance(full.pose_at(0.5 * s, TOL)?))
                    .max(
                        right
                            .pose_at(s, TOL)?
                            .projective_distance(full.pose_at(0.5 + 0.5 * s, TOL)?),
                    );
            }
            let first = matrix_to_dq(&poses[0], TOL)?;
            let last = matrix_to_dq(&poses[3], TOL)?;
            let e = full
                .pose_at(0.0, TOL)?
                .projective_distance(first)
                .max(full.pose_at(1.0, TOL)?.projective_distance(last));
            Ok((worst, e))
        });
        match res {
            Ok((w, e)) => {
                subdivision = subdivision.max(w);
                ends = ends.max(e);
            }
            Err(_) => errors += 1,
        }
    }
    CriterionReport {
        id: 10,
        title: "Bézier motions",
        checks: vec![
            Check::at_most("2-point polygon vs cubic interpolant", segment, 1e-10),
            Check::at_most("de Casteljau subdivision consistency", subdivision, 1e-10),
            Check::at_most("endpoint interpolation", ends, 1e-10),
            Check::count("construction errors", errors),
        ],
    }
}

pub fn run_criterion(id: u8, seed: u64) -> Option<CriterionReport> {
    Some(match id {
        1 => criterion_1(seed),
        2 => criterion_2(seed),
        3 => criterion_3(seed),
        4 => criterion_4(seed),
        5 => criterion_5(seed),
        6 => criterion_6(seed),
        7 => criterion_7(seed),
        8 => criterion_8(seed),
        9 => criterion_9(seed),
        10 => criterion_10(seed),
        _ => return None,
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    (1..=10).filter_map(|id| run_criterion(id, seed)).collect()
}

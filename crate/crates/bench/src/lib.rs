//! Fixtures shared by the benchmarks.

use motionforge::motions::canonicalize_pair;
use motionforge::posemodels::matrix_to_dq;
use motionforge::{CanonicalPair, DualQuaternion, MapSelector, PoseMatrix, Tolerance};

pub const TOL: Tolerance = Tolerance::DEFAULT;

pub fn start_pose() -> PoseMatrix {
    PoseMatrix::translation([0.3, -1.2, 0.5].into()) * PoseMatrix::rotation(&[1.0, 2.0, 2.0].into(), 0.4)
}

pub fn end_pose() -> PoseMatrix {
    PoseMatrix::translation([1.5, 0.2, -0.7].into()) * PoseMatrix::rotation(&[0.0, 0.6, 0.8].into(), 1.9)
}

pub fn pair() -> CanonicalPair {
    canonicalize_pair(&start_pose(), &end_pose(), TOL).expect("valid poses")
}

pub fn selector() -> MapSelector {
    MapSelector::new([0.9, 0.2, -0.3, 0.4]).expect("non-zero selector")
}

pub fn displacement() -> DualQuaternion {
    matrix_to_dq(&end_pose(), TOL).expect("valid pose")
}

//! Interpolating motions between two poses and their analysis.
//!
//! Lines in the dual-quaternion space give vertical Darboux motions, images of
//! lines in the matrix space under `μ_m` give cubic circular motions. Both lie
//! in the cylinder group of the pose pair and are studied through their
//! transmission curves, pitches and point trajectories.

mod canonical;
mod curve;
mod cylinder;
mod interpolants;
mod ruled;
mod select;
mod trajectory;
mod transmission;

pub use canonical::{canonicalize_pair, frame_for_axis, screw_invariants, Axis, CanonicalPair, ScrewInvariants};
pub use curve::{curve_distance, screw_about_z, MotionCurve, Pitch, Provenance};
pub use cylinder::cylinder_check;
pub use interpolants::{
    canonical_pose, cubic_from_essentials, cubic_interpolant, cubic_interpolant_with, darboux_for_pair,
    darboux_interpolant, helical_interpolant, homogenizer_root, primal_zero_in, CubicOptions,
};
pub use ruled::{
    factor_cubic, line_symmetric_motion, ruling_family, CubicFactorization, PluckerLine, RulingFamily, RulingSpec,
};
pub use select::{cubic_pitch_product, select_interpolant, Constraint};
pub use trajectory::{
    remove_common_factors, trajectory_diagnostics, trajectory_exact, RationalCurve, TrajectoryReport,
};
pub use transmission::{
    canonical_polynomial, pitch_at, pitch_numeric, transmission_curve, CubicTransmission, TransmissionCurve,
    TransmissionLaw, TransmissionSample,
};

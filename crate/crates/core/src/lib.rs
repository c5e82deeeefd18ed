//! Dual-quaternion kinematics: pose models, the extended kinematic maps and
//! low-degree rational motion interpolants.

pub mod algebra;
pub mod bezier;
pub mod error;
pub mod extmap;
pub mod fitting;
pub mod motions;
pub mod posemodels;
pub mod tolerance;
pub mod verify;

pub use algebra::{DualNumber, DualQuatPoly, DualQuaternion, Quaternion, RealPoly};
pub use bezier::ControlPolygon;
pub use error::{Error, Result};
pub use extmap::{FiberOffsets, MapSelector};
pub use motions::{CanonicalPair, MotionCurve};
pub use posemodels::{AmbientPose, PoseMatrix};
pub use tolerance::Tolerance;

//! Quaternions, dual numbers, dual quaternions and polynomials over them.

mod dual;
mod dual_quaternion;
mod poly;
mod quaternion;

pub use dual::DualNumber;
pub use dual_quaternion::DualQuaternion;
pub use poly::{DualQuatPoly, RealPoly};
pub use quaternion::Quaternion;

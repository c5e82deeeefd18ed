use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Dual number `primal + ε dual` with ε² = 0.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DualNumber {
    pub primal: f64,
    pub dual: f64,
}

impl DualNumber {
    #[inline]
    pub const fn new(primal: f64, dual: f64) -> Self {
        Self { primal, dual }
    }
}

impl Add for DualNumber {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.primal + o.primal, self.dual + o.dual)
    }
}

impl Sub for DualNumber {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.primal - o.primal, self.dual - o.dual)
    }
}

impl Neg for DualNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.primal, -self.dual)
    }
}

impl Mul for DualNumber {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.primal * o.primal, self.primal * o.dual + self.dual * o.primal)
    }
}

use thiserror::Error;

/// Errors raised by the kinematics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The dual quaternion lies on the exceptional generator (p = 0).
    #[error("primal part vanishes (squared norm {norm:e}); no displacement is represented")]
    ZeroPrimal { norm: f64 },
    #[error("Study condition violated: residual {residual:e}")]
    StudyViolation { residual: f64 },
    #[error("invalid pose: orthogonality residual {orthogonality:e}, det deviation {det_deviation:e}")]
    InvalidPose { orthogonality: f64, det_deviation: f64 },
    #[error("all four Euler-parameter ratios vanish")]
    AllZero,
    #[error("map selector m is the zero vector")]
    UndefinedMap,
    /// The extended map sends the input to the zero vector (input in the base set).
    #[error("extended map image is zero{}", at_parameter(*.t))]
    ZeroImage { t: Option<f64> },
    #[error("homogenising polynomial g1 vanishes at t = {t} inside the domain")]
    PoleInDomain { t: f64 },
    #[error("primal part of the interpolant vanishes at t = {t}")]
    PrimalVanishes { t: f64 },
    #[error("relative displacement is the identity")]
    DegenerateRelative,
    #[error("motion leaves the cylinder group (deviation {deviation:e})")]
    NotInCylinderGroup { deviation: f64 },
    #[error("motion is not cylindrical (deviation {deviation:e})")]
    NotCylindrical { deviation: f64 },
    #[error("third pose is not in the cylinder group of the pair (deviation {deviation:e})")]
    ThirdPoseNotInCylinder { deviation: f64 },
    #[error("pitch pair is infeasible: {reason}")]
    PitchPairInfeasible { reason: String },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("motion is not algebraic")]
    NotAlgebraic,
}

fn at_parameter(t: Option<f64>) -> String {
    t.map(|t| format!(" at t = {t}")).unwrap_or_default()
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroPrimal { .. } => "ZeroPrimal",
            Error::StudyViolation { .. } => "StudyViolation",
            Error::InvalidPose { .. } => "InvalidPose",
            Error::AllZero => "AllZero",
            Error::UndefinedMap => "UndefinedMap",
            Error::ZeroImage { .. } => "ZeroImage",
            Error::PoleInDomain { .. } => "PoleInDomain",
            Error::PrimalVanishes { .. } => "PrimalVanishes",
            Error::DegenerateRelative => "DegenerateRelative",
            Error::NotInCylinderGroup { .. } => "NotInCylinderGroup",
            Error::NotCylindrical { .. } => "NotCylindrical",
            Error::ThirdPoseNotInCylinder { .. } => "ThirdPoseNotInCylinder",
            Error::PitchPairInfeasible { .. } => "PitchPairInfeasible",
            Error::NoSolution(_) => "NoSolution",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::NotAlgebraic => "NotAlgebraic",
        }
    }

    /// Errors caused by malformed input rather than by the geometry of valid input.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidPose { .. } | Error::InvalidSpec(_) | Error::UndefinedMap
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Every failure the library can report.
///
/// Infeasible parameter regions are ordinary values of this type so that
/// sweeps can record them per cell instead of aborting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("risk-free rate must be positive, got {r}")]
    NonPositiveRate { r: f64 },

    #[error("drift of asset {index} ({drift}) must exceed the risk-free rate {r}")]
    DriftBelowRiskFree { index: usize, drift: f64, r: f64 },

    #[error(
        "covariance matrix is singular: min eigenvalue {min_eig:e}, max eigenvalue {max_eig:e}"
    )]
    SingularVolatility { min_eig: f64, max_eig: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0} must be finite")]
    NonFinite(&'static str),

    #[error("invalid preference {name}: {reason}")]
    InvalidPreference { name: &'static str, reason: String },

    #[error(
        "union value coefficient is inadmissible: benefit bracket {bracket:e} is not positive"
    )]
    InadmissibleA { bracket: f64 },

    #[error("firm value coefficient is inadmissible: bracket {bracket:e}")]
    InadmissibleB { bracket: f64 },

    #[error("cooperative value coefficient is inadmissible: benefit bracket {bracket:e} is not positive")]
    InadmissibleA0 { bracket: f64 },

    #[error("barrier game requires the union discount rate ({alpha}) to exceed the risk-free rate ({r})")]
    RequiresAlphaAboveR { alpha: f64, r: f64 },

    #[error("barrier game requires the firm ambiguity aversion to differ from 1")]
    MuEqualsOne,

    #[error("barrier game discriminant {disc:e} is not positive")]
    NegativeDiscriminant { disc: f64 },

    #[error("barrier game exponent {eta} lies outside (0, 1)")]
    EtaOutOfRange { eta: f64 },

    #[error(
        "invalid barriers: need 0 < lower < start < upper, got lower={l}, start={x0}, upper={v}"
    )]
    InvalidBarriers { l: f64, x0: f64, v: f64 },

    #[error("surplus must be positive, got {x}")]
    NonPositiveSurplus { x: f64 },

    #[error("surplus {x} lies outside the barriers [{l}, {v}]")]
    SurplusOutsideBarriers { x: f64, l: f64, v: f64 },

    #[error("start value must be positive, got {x0}")]
    NonPositiveStart { x0: f64 },

    #[error("variance rate of the law is zero")]
    DegenerateVolatility,

    #[error("payoff integral diverges: moment growth {growth} is not below the discount rate {discount}")]
    DivergentIntegral { growth: f64, discount: f64 },

    #[error("analytic tail beyond the horizon is {tail_fraction:e} of the target, above the limit {limit:e}")]
    TailBoundNotMet { tail_fraction: f64, limit: f64 },

    #[error("perturbing {param} leaves the admissible region")]
    InfeasiblePerturbation { param: &'static str },

    #[error("{censored} of {n} paths reached the horizon cap, above the allowed fraction {limit}")]
    ExcessiveCensoring { censored: u64, n: u64, limit: f64 },

    #[error("invalid simulation grid: {0}")]
    InvalidGrid(String),

    #[error("property ({property}) violated at x={x}: {detail}, normalised slack {slack:e}")]
    PropertyViolation {
        property: &'static str,
        x: f64,
        detail: String,
        slack: f64,
    },

    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    /// Short stable identifier, used as the reason column of sweep tables.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPositiveRate { .. } => "NonPositiveRate",
            Error::DriftBelowRiskFree { .. } => "DriftBelowRiskFree",
            Error::SingularVolatility { .. } => "SingularVolatility",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonFinite(_) => "NonFinite",
            Error::InvalidPreference { .. } => "InvalidPreference",
            Error::InadmissibleA { .. } => "InadmissibleA",
            Error::InadmissibleB { .. } => "InadmissibleB",
            Error::InadmissibleA0 { .. } => "InadmissibleA0",
            Error::RequiresAlphaAboveR { .. } => "RequiresAlphaAboveR",
            Error::MuEqualsOne => "MuEqualsOne",
            Error::NegativeDiscriminant { .. } => "NegativeDiscriminant",
            Error::EtaOutOfRange { .. } => "EtaOutOfRange",
            Error::InvalidBarriers { .. } => "InvalidBarriers",
            Error::NonPositiveSurplus { .. } => "NonPositiveSurplus",
            Error::SurplusOutsideBarriers { .. } => "SurplusOutsideBarriers",
            Error::NonPositiveStart { .. } => "NonPositiveStart",
            Error::DegenerateVolatility => "DegenerateVolatility",
            Error::DivergentIntegral { .. } => "DivergentIntegral",
            Error::TailBoundNotMet { .. } => "TailBoundNotMet",
            Error::InfeasiblePerturbation { .. } => "InfeasiblePerturbation",
            Error::ExcessiveCensoring { .. } => "ExcessiveCensoring",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::PropertyViolation { .. } => "PropertyViolation",
            Error::Unsupported(_) => "Unsupported",
        }
    }

    /// True for errors that describe an inadmissible parameter region rather
    /// than malformed input.
    pub fn is_infeasibility(&self) -> bool {
        matches!(
            self,
            Error::InadmissibleA { .. }
                | Error::InadmissibleB { .. }
                | Error::InadmissibleA0 { .. }
                | Error::RequiresAlphaAboveR { .. }
                | Error::MuEqualsOne
                | Error::NegativeDiscriminant { .. }
                | Error::EtaOutOfRange { .. }
                | Error::DivergentIntegral { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors produced by the tomography and measure routines.
///
/// Variants fall in two families: malformed input (bad grids, wrong
/// dimensions, unparsable specs) and numerical-contract violations (a
/// normalization, realness or consistency check that failed). The CLI maps
/// the first family to exit code 1 and the second to exit code 2, see
/// [`TomoError::is_numerical`].
#[derive(Debug, Error)]
pub enum TomoError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The grid does not reach far enough to hold the requested function.
    #[error("grid [{x_min}, {x_max}] too small: needs to cover [{need_min}, {need_max}]")]
    GridTooSmall {
        x_min: f64,
        x_max: f64,
        need_min: f64,
        need_max: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (defect {defect:.3e} exceeds {tolerance:.1e})")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("normalization failure: norm {norm:.12} deviates from 1 by more than {tolerance:.1e}")]
    Normalization { norm: f64, tolerance: f64 },

    /// A chirped quadrature kernel advances its phase too fast per grid step.
    #[error("oscillatory kernel undersampled: phase step {phase_step:.3} rad exceeds pi/4")]
    Undersampled { phase_step: f64 },

    #[error("imaginary residue {residue:.3e} exceeds {tolerance:.1e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },

    #[error("integration line X = {x} does not intersect the phase-space grid")]
    LineExitsGrid { x: f64 },

    #[error("insufficient decay at grid edge: {edge:.3e} exceeds {tolerance:.1e}")]
    InsufficientDecay { edge: f64, tolerance: f64 },

    #[error("derivative undefined for a step (atomic) distribution function")]
    StepFunction,

    #[error("unsupported order {order} (max {max})")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("least-squares system is rank deficient (condition number {condition:.3e})")]
    RankDeficient { condition: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("frame (mu={mu}, nu={nu}) lies outside the sampled family")]
    FrameOutsideFamily { mu: f64, nu: f64 },

    #[error("state spec: {0}")]
    Spec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl TomoError {
    /// True when the error reports a failed numerical contract rather than
    /// malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            TomoError::Normalization { .. }
                | TomoError::ImaginaryResidue { .. }
                | TomoError::InsufficientDecay { .. }
                | TomoError::Undersampled { .. }
                | TomoError::RankDeficient { .. }
                | TomoError::Consistency(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, TomoError>;

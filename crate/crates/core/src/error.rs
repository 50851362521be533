use thiserror::Error;

/// Errors produced anywhere in the representation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0}")]
    Degree(String),

    #[error("operation undefined on a constant polynomial")]
    Constant,

    #[error("leading coefficient {lead:e} is negligible relative to {scale:e}")]
    LeadingCoeff { lead: f64, scale: f64 },

    #[error("polynomial is not real-rooted (max imaginary part {max_imag:e})")]
    NotRealRooted { max_imag: f64 },

    #[error("f(e) = {value:e} vanishes to tolerance; e is not a valid base point")]
    BasePoint { value: f64 },

    #[error("the two curves share a common component (resultant vanishes identically)")]
    CommonFactor,

    #[error("intersection degree {found} differs from the Bezout number {expected}: {detail}")]
    BezoutDeficit {
        found: usize,
        expected: usize,
        detail: String,
    },

    #[error("divisor is not of real-contact type: {0}")]
    NotRealContact(String),

    #[error("determinant of the pencil is not proportional to f (misfit {misfit:e})")]
    DetMismatch { misfit: f64 },

    #[error("intersection multiplicity estimate is ambiguous: {0}")]
    MultiplicityEstimate(String),

    #[error("vanishing space has dimension {found}, need at least {needed}")]
    Dimension { found: usize, needed: usize },

    #[error("a11 does not vanish on the divisor (residual {residual:e})")]
    Containment { residual: f64 },

    #[error("Noether solve for entry ({row}, {col}) left residual {residual:e}")]
    NoetherResidual { row: usize, col: usize, residual: f64 },

    #[error("adjugate entry ({row}, {col}) is not divisible by f^(d-2) (residual {residual:e})")]
    DivisionResidual { row: usize, col: usize, residual: f64 },

    #[error("det(M) = gamma * f with |gamma| = {gamma:e}; the construction degenerated")]
    Degenerate { gamma: f64 },

    #[error("det(M) is not a multiple of f (relative misfit {misfit:e})")]
    DetMisfit { misfit: f64 },

    #[error("singular input: {0}. Try the smoothing preprocessor (--perturb s,k)")]
    SingularInput(String),

    #[error("smoothing destroyed hyperbolicity")]
    HyperbolicityLost,

    #[error("f is not hyperbolic with respect to e (refuted along a = {witness:?})")]
    NotHyperbolic { witness: [f64; 3] },

    #[error("matrix is not Hermitian (asymmetry {asym:e})")]
    NotHermitian { asym: f64 },

    #[error("vector must be nonzero")]
    ZeroVector,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// Innermost error, skipping stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by the layer that raises them: jet arithmetic,
/// curve machinery, germ geometry and the Cauchy solver / pipelines.
#[derive(Debug, Error)]
pub enum Error {
    // --- jet arithmetic ---
    #[error("certified degree is zero, cannot differentiate")]
    ZeroBudget,
    #[error("divisor has constant term {0:e}, below the unit tolerance")]
    NonUnitDivisor(f64),
    #[error("series is not divisible by v: v^0 coefficient of magnitude {0:e} remains")]
    NotDivisible(f64),
    #[error("square root needs a positive constant term, got {0:e}")]
    NonPositiveConstantTerm(f64),
    #[error("jet matrix is singular at the origin (det = {0:e})")]
    SingularAtOrigin(f64),
    #[error("substitution map has non-vanishing constant term {0:e}")]
    NonVanishingConstant(f64),

    // --- curve geometry ---
    #[error("degenerate curve: {0}")]
    DegenerateCurve(&'static str),
    #[error("initial frame is not orthonormal / positively oriented")]
    NonOrthonormalFrame,
    #[error("|mu| = {0} is not strictly below 1")]
    MuOutOfRange(f64),
    #[error("(a, b) is not an orthonormal pair")]
    NotOrthonormal,

    // --- edge geometry ---
    #[error("map germ is not a cuspidal edge: {0}")]
    DegenerateEdge(&'static str),
    #[error("degenerate frame: f_u x f_vv vanishes at the origin")]
    DegenerateFrame,
    #[error("map germ is not in adapted coordinates (max deviation {0:e})")]
    NotAdapted(f64),
    #[error("cuspidal edge is not generic: limiting normal curvature vanishes at the origin")]
    NonGeneric,
    #[error("metric orientation: lambda_v(0,0) = {0:e} is not positive")]
    WrongOrientation(f64),
    #[error("invalid Kossowski metric: {0}")]
    InvalidMetric(&'static str),

    // --- solver / pipeline ---
    #[error("coefficient matrix (psi, g_u, r_u) is singular at the origin (det = {0:e})")]
    MatrixSingular(f64),
    #[error("u-order budget exhausted at v-level {level} (need order {needed})")]
    BudgetExhausted { level: usize, needed: usize },
    #[error("genericity violated: {0}")]
    GenericityViolated(&'static str),
    #[error("target curvature too small: kappa(0) = {kappa} does not exceed |kappa_s(0)| = {kappa_s}")]
    CurvatureTooSmall { kappa: f64, kappa_s: f64 },

    // --- file formats ---
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid file: {0}")]
    InvalidFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

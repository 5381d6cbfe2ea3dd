use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// The CLI maps each variant family onto its own exit code, see
/// [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero series")]
    DivisionByZero,

    #[error("ramification index {needed} exceeds the configured cap {cap}")]
    RamificationCap { needed: u64, cap: u64 },

    #[error("root refinement did not converge within {steps} steps")]
    NonConvergent { steps: usize },

    #[error("polynomial is identically zero or constant")]
    DegeneratePolynomial,

    #[error("join with the point at infinity is not a disk")]
    JoinAtInfinity,

    #[error("tangent direction requested at the base point itself")]
    TangentAtBase,

    #[error("expected a type-2 point, got {0}")]
    NotType2(String),

    #[error("matrix is not invertible")]
    SingularMobius,

    #[error("rational map is degenerate: {0}")]
    DegenerateMap(String),

    #[error("unsupported map: {0}")]
    UnsupportedMap(String),

    #[error("denominator has a root in the disk {0}; its image is not a single disk")]
    PoleInDisk(String),

    #[error("seed {0} is exceptional for the map")]
    ExceptionalSeed(String),

    #[error("orbit leaves U+ and U- at step {step}: {point}")]
    NotInJulia { step: usize, point: String },

    #[error("point set needs at least two distinct points")]
    SingletonSpan,

    #[error("model has no divisors")]
    EmptyModel,

    #[error("duplicate divisorial point {0}")]
    DuplicateDivisor(String),

    #[error("snc violation: branch vertex {witness} is not a divisorial point")]
    SncViolation { witness: String },

    #[error("divisor {name}: radius exponent {q} needs a multiplicity divisible by {den}, got {mult}")]
    MultiplicityMismatch {
        name: String,
        q: String,
        den: i64,
        mult: u32,
    },

    #[error("no divisor named {0}")]
    UnknownDivisor(String),

    #[error("model is not a contraction of the other: {0}")]
    NotAContraction(String),

    #[error("measure puts mass on the divisorial point {0}")]
    MassOnDivisor(String),

    #[error("map has potentially good reduction; the limit is not atomic on closed points")]
    PotentiallyGoodReduction,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("coefficient has a pole at t = {0}")]
    CoefficientPole(String),

    #[error("complex root finder did not converge")]
    ComplexRootFailure,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 3,
            Error::EmptyModel
            | Error::DuplicateDivisor(_)
            | Error::MultiplicityMismatch { .. }
            | Error::UnknownDivisor(_)
            | Error::NotAContraction(_) => 4,
            Error::SncViolation { .. } => 5,
            Error::RamificationCap { .. }
            | Error::NonConvergent { .. }
            | Error::ComplexRootFailure
            | Error::DivisionByZero
            | Error::DegeneratePolynomial => 6,
            Error::PotentiallyGoodReduction
            | Error::MassOnDivisor(_)
            | Error::ExceptionalSeed(_)
            | Error::UnsupportedMap(_)
            | Error::DegenerateMap(_) => 7,
            Error::Config(_) => 8,
            _ => 9,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

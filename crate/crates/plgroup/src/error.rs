use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not in A")]
    NotInA(String),
    #[error("{0} is not in P")]
    NotInP(String),
    #[error("{0} is not in IP*A")]
    NotInIPA(String),
    #[error("parameter {0} is not in A")]
    ParamNotInA(String),
    #[error("parameter {0} is not in P")]
    ParamNotInP(String),
    #[error("generators are multiplicatively dependent")]
    DependentGenerators,
    #[error("context not supported: {0}")]
    UnsupportedContext(String),
    #[error("{0} is not in Aut_o(A)")]
    NotInAutO(String),
    #[error("bad k: a/p^k must be below b")]
    BadK,
    #[error("interval lengths are not congruent modulo IP*A (delta = {delta})")]
    CongruenceViolated { delta: u64 },
    #[error("point {0} is not in the interior of I")]
    NotInInterior(String),
    #[error("epsilon must be positive")]
    EpsilonTooTight,
    #[error("bad target: {0}")]
    BadTarget(String),
    #[error("z is the identity")]
    ZIsIdentity,
    #[error("element is not a member: {0}")]
    NotMember(String),
    #[error("code index out of range: {0}")]
    BadIndex(String),
    #[error("subdivisions have different lengths")]
    LengthMismatch,
    #[error("relator fails: {0}")]
    RelatorFails(String),
    #[error("word problem methods disagree on {0}")]
    MethodDisagreement(String),
    #[error("conjugate is not eventually affine")]
    NotEventuallyAffine,
    #[error("support not inside [0, b]")]
    SupportOutside,
    #[error("subgroup does not have finite index")]
    NotFiniteIndex,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("map has unbounded support and no window was given")]
    UnboundedWithoutWindow,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code, used as the "error" field of JSON output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotInA(_) => "NotInA",
            Error::NotInP(_) => "NotInP",
            Error::NotInIPA(_) => "NotInIPA",
            Error::ParamNotInA(_) => "ParamNotInA",
            Error::ParamNotInP(_) => "ParamNotInP",
            Error::DependentGenerators => "DependentGenerators",
            Error::UnsupportedContext(_) => "UnsupportedContext",
            Error::NotInAutO(_) => "NotInAutO",
            Error::BadK => "BadK",
            Error::CongruenceViolated { .. } => "CongruenceViolated",
            Error::NotInInterior(_) => "NotInInterior",
            Error::EpsilonTooTight => "EpsilonTooTight",
            Error::BadTarget(_) => "BadTarget",
            Error::ZIsIdentity => "ZIsIdentity",
            Error::NotMember(_) => "NotMember",
            Error::BadIndex(_) => "BadIndex",
            Error::LengthMismatch => "LengthMismatch",
            Error::RelatorFails(_) => "RelatorFails",
            Error::MethodDisagreement(_) => "MethodDisagreement",
            Error::NotEventuallyAffine => "NotEventuallyAffine",
            Error::SupportOutside => "SupportOutside",
            Error::NotFiniteIndex => "NotFiniteIndex",
            Error::BadParameters(_) => "BadParameters",
            Error::UnboundedWithoutWindow => "UnboundedWithoutWindow",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

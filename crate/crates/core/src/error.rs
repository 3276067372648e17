use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Witness data attached to a failed commutation check: two translate
/// offsets, the context and input path on which the two application orders
/// disagree, and a periodic closure of that path when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationWitness {
    pub offset_a: i64,
    pub offset_b: i64,
    pub left: String,
    pub right: String,
    pub path: Vec<String>,
    pub config: Option<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {edge} references unknown vertex {vertex}")]
    DanglingEdge { edge: String, vertex: String },
    #[error("graph is not essential; offending vertices: {vertices:?}")]
    NonEssential { vertices: Vec<String> },
    #[error("trimming removed every vertex")]
    EmptyGraph,
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(String),
    #[error("duplicate vertex id {0}")]
    DuplicateVertexId(String),
    #[error("unknown edge id {0}")]
    UnknownEdge(String),
    #[error("unknown vertex id {0}")]
    UnknownVertex(String),
    #[error("edge sequence {0:?} is not a path")]
    InvalidPath(Vec<String>),

    #[error("table is not a bijection of the fillings of context ({left}, {right})")]
    NotBijective { left: String, right: String },
    #[error("image endpoints differ from preimage in context ({left}, {right})")]
    EndpointMismatch { left: String, right: String },
    #[error("support [{0}, {1}] does not contain the gate support [{2}, {3}]")]
    SupportTooSmall(i64, i64, i64, i64),
    #[error("objects live on different shifts")]
    ShiftMismatch,
    #[error("pattern does not cover the gate support")]
    SupportNotCovered,
    #[error("context ({left}, {right}) has no fillings of length {len}")]
    EmptyContext { left: String, right: String, len: u32 },

    #[error("permutation is odd")]
    OddPermutation,
    #[error("domain has {0} points, need at least 5")]
    DomainTooSmall(usize),
    #[error("permutation is the identity")]
    IdentityInput,
    #[error("gate is not even")]
    NotEven,
    #[error("shift is not mixing")]
    NotMixing,

    #[error("local rule is missing the path {0:?}")]
    PartialRule(Vec<String>),
    #[error("rule outputs do not compose along {0:?}")]
    InvalidImage(Vec<String>),
    #[error("no inverse rule with radius <= {0}")]
    NotInvertibleWithinBound(i64),
    #[error("map is not invertible")]
    NotInvertible,
    #[error("powers differ: {0} vs {1}")]
    PowerMismatch(u32, u32),
    #[error("m = {m} fails the padding inequality; least valid m: {least:?}")]
    BlockTooSmall { m: u32, least: Option<u32> },

    #[error("translates at offsets {} and {} do not commute", witness.offset_a, witness.offset_b)]
    NonCommuting { witness: Box<CommutationWitness> },
    #[error("lattice period {lattice} does not divide configuration period {config}")]
    PeriodMismatch { lattice: u32, config: u32 },
    #[error("gate support is wider than the lattice period")]
    NotNormalized,
    #[error("K = {k} is below the sparseness bound; least admissible K is {least}")]
    NotSparseEnough { k: u32, least: u32 },
    #[error("map is trivial")]
    TrivialInput,
    #[error("search budget exceeded at stage {stage}")]
    BudgetExceeded { stage: &'static str },
    #[error("verification failed at stage {stage}")]
    VerificationFailed { stage: &'static str },

    #[error("{0}")]
    Parse(String),
    #[error("validation of {name} failed: {source}")]
    Validation {
        name: String,
        #[source]
        source: Box<Error>,
    },
    #[error("unknown suite {0}")]
    UnknownSuite(String),
}

impl Error {
    /// Stable machine-readable code used in CLI reports.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            DanglingEdge { .. } => "dangling-edge",
            NonEssential { .. } => "non-essential",
            EmptyGraph => "empty-graph",
            DuplicateEdgeId(_) => "duplicate-edge-id",
            DuplicateVertexId(_) => "duplicate-vertex-id",
            UnknownEdge(_) => "unknown-edge",
            UnknownVertex(_) => "unknown-vertex",
            InvalidPath(_) => "invalid-path",
            NotBijective { .. } => "not-bijective",
            EndpointMismatch { .. } => "endpoint-mismatch",
            SupportTooSmall(..) => "support-too-small",
            ShiftMismatch => "shift-mismatch",
            SupportNotCovered => "support-not-covered",
            EmptyContext { .. } => "empty-context",
            OddPermutation => "odd-permutation",
            DomainTooSmall(_) => "domain-too-small",
            IdentityInput => "identity-input",
            NotEven => "not-even",
            NotMixing => "not-mixing",
            PartialRule(_) => "partial-rule",
            InvalidImage(_) => "invalid-image",
            NotInvertibleWithinBound(_) => "not-invertible-within-bound",
            NotInvertible => "not-invertible",
            PowerMismatch(..) => "power-mismatch",
            BlockTooSmall { .. } => "block-too-small",
            NonCommuting { .. } => "non-commuting",
            PeriodMismatch { .. } => "period-mismatch",
            NotNormalized => "not-normalized",
            NotSparseEnough { .. } => "not-sparse-enough",
            TrivialInput => "trivial-input",
            BudgetExceeded { .. } => "budget-exceeded",
            VerificationFailed { .. } => "verification-failed",
            Parse(_) => "parse-error",
            Validation { .. } => "validation-error",
            UnknownSuite(_) => "unknown-suite",
        }
    }
}

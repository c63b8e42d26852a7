use alloc::string::String;

/// Errors raised by the chain-complex engine and the physics checks built on it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("branch `{0}` has the same tail and head")]
    SelfLoopBranch(String),
    #[error("face `{0}` does not close into a cycle")]
    NonClosingFace(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("no branch joins `{0}` and `{1}`")]
    MissingBranch(String, String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coefficients come from different coefficient modules")]
    ModuleMismatch,
    #[error("simplex index {index} out of range in dimension {dim}")]
    InvalidSimplex { dim: usize, index: usize },
    #[error("chain is empty")]
    EmptyChain,
    #[error("chain map does not commute with the boundary on edge {0}")]
    UnverifiedSpec(usize),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("euler characteristic mismatch: {from_counts} from simplex counts, {from_betti} from betti numbers")]
    InternalMismatch { from_counts: i64, from_betti: i64 },
    #[error("pairing undefined between these coefficient modules")]
    PairingUndefined,
    #[error("nodes {0} and {1} are realized at the same point")]
    CoincidentNodes(usize, usize),
    #[error("unsupported ambient dimension {0}")]
    UnsupportedDimension(usize),
    #[error("node counts differ: {0} vs {1}")]
    NodeCountMismatch(usize, usize),
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("snapshot {0} does not match the first snapshot")]
    SnapshotMismatch(usize),
    #[error("need at least {needed} samples, found {found}")]
    TooFewSamples { needed: usize, found: usize },
    #[error("signal kinds do not match")]
    KindMismatch,
    #[error("branch {0} has zero length")]
    DegenerateBranch(usize),
    #[error("invalid internal/external partition at branch {0}")]
    InvalidPartition(usize),
    #[error("total mass is zero")]
    ZeroTotalMass,
    #[error("time window [{t0}, {t1}] is outside the {len} available samples")]
    RangeError { t0: usize, t1: usize, len: usize },
    #[error("momentum at node {0} is not convective")]
    NonConvectiveMomentum(usize),
    #[error("hypotheses unmet: {0}")]
    HypothesesUnmet(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

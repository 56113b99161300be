use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("register of {requested} qubits exceeds the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("index {index} out of range for {len} entries")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("qubit index {0} used twice")]
    IndexClash(usize),
    #[error("gate is not unitary (deviation {deviation:.3e})")]
    NonUnitaryGate { deviation: f64 },
    #[error("outcome has probability {probability:.3e}, below cutoff")]
    ZeroOutcome { probability: f64 },
    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("amplitude vector of length {0} is not a power of two")]
    BadLength(usize),
    #[error("register sizes differ: {left} vs {right} qubits")]
    ShapeMismatch { left: usize, right: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("self loop on vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) has zero weight modulo 2π")]
    ZeroWeight(usize, usize),
    #[error("non-finite number where a weight or angle was expected")]
    NonFinite,
    #[error("mode transformation is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("mode transformation needs at least {min} modes, got {got}")]
    TooFewModes { min: usize, got: usize },
    #[error("invalid fusion context: {0}")]
    InvalidContext(&'static str),
    #[error("vertex `{0}` must be a chain endpoint (degree ≤ 1)")]
    NotEndpoint(String),
    #[error("vertex `{0}` must have exactly two neighbours")]
    NotInterior(String),
    #[error("neighbour weights χ1 = {chi1}, χ2 = {chi2} satisfy neither χ1 = χ2 nor χ1 = -χ2")]
    WeightsNotEligible { chi1: f64, chi2: f64 },
    #[error("vertex `{0}` is not part of a logical qubit")]
    NoLogicalPair(String),
    #[error("vertex `{0}` already belongs to a logical qubit")]
    LogicalPairConflict(String),
    #[error("target {target} lies outside the reachable range ±{max}")]
    NotAchievable { target: f64, max: f64 },
    #[error("Gram matrix is degenerate (|z| = {z_abs})")]
    DegenerateGram { z_abs: f64 },
    #[error("argument of a vanishing complex number is undefined")]
    DegenerateArgument,
    #[error("root finder failed to converge in bracket [{lo}, {hi}]")]
    ConvergenceFailure { lo: f64, hi: f64 },
    #[error("seed matrix is not unitary (deviation {deviation:.3e})")]
    BadSeed { deviation: f64 },
    #[error("{quantity}: analytic {analytic:.12e} disagrees with oracle {oracle:.12e}")]
    OracleMismatch { quantity: &'static str, analytic: f64, oracle: f64 },
    #[error("label `{0}` clashes between the fused registers")]
    LabelClash(String),
    #[error("projection vector is not normalizable")]
    InvalidProjection,
}

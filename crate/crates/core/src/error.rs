use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by all modules.
///
/// Guard failures (`PhaseUnresolved`, `BoundaryDecay`, `BandLimit`,
/// `MarginViolated`) reject computations whose discretization cannot
/// represent the requested quantity, instead of returning garbage.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degenerate box on axis {axis}: lo {lo} >= hi {hi}")]
    DegenerateBox { axis: usize, lo: f64, hi: f64 },

    #[error("sample count {samples} on axis {axis} must be a power of two >= 2")]
    BadSampleCount { axis: usize, samples: usize },

    #[error("value count {got} does not match grid cell count {want}")]
    ValueCountMismatch { got: usize, want: usize },

    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },

    #[error("invalid norm exponent p = {p}; require p > 0 or p = inf")]
    BadNormExponent { p: f64 },

    #[error("slope fit needs at least 2 points, got {got}")]
    TooFewPoints { got: usize },

    #[error("slope fit requires positive coordinates, got ({x}, {y})")]
    NonPositivePoint { x: f64, y: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {point:?} outside the surface parameter domain")]
    OutsideDomain { point: Vec<f64> },

    #[error("hemisphere domain must satisfy sup |xi| < 1, got {sup}")]
    HemisphereDomain { sup: f64 },

    #[error("oscillatory phase unresolved: |x| h = {product} exceeds {limit} on axis {axis}")]
    PhaseUnresolved { axis: usize, product: f64, limit: f64 },

    #[error("field does not decay at the box boundary: relative edge magnitude {edge}")]
    BoundaryDecay { edge: f64 },

    #[error("spectral mass outside the admissible set too large: relative {mass}")]
    BandLimit { mass: f64 },

    #[error("support margin violated: required {required}, got {got}")]
    MarginViolated { required: f64, got: f64 },

    #[error("empty evaluation point set")]
    EmptyPointSet,

    #[error("grid cannot resolve the requested construction: {reason}")]
    Unresolvable { reason: String },

    #[error("box is not alignable to the dyadic lattice at level {level}")]
    NotDyadic { level: i32 },

    #[error("distance oracle is not 1-Lipschitz: |d(x)-d(y)| = {jump} > |x-y| = {dist}")]
    NotLipschitz { jump: f64, dist: f64 },

    #[error("intervals must all have length {expected}, got {got}")]
    IntervalLength { expected: f64, got: f64 },

    #[error("cap exceeds the field frequency box")]
    CapOutsideBox,

    #[error("interval partition step {delta} must be smaller than the interval length {len}")]
    BadPartitionStep { delta: f64, len: f64 },

    #[error("oriented box axes are not orthonormal: gram defect {defect}")]
    NotOrthonormal { defect: f64 },

    #[error("tessellation extent too small to hold a single tile")]
    DegenerateExtent,

    #[error("transversality margin violated: nu = {nu} below required {required}")]
    NotTransverse { nu: f64, required: f64 },

    #[error("brute-force lattice extent {extent} exceeds budget {budget}")]
    LatticeTooLarge { extent: usize, budget: usize },

    #[error("invalid probe configuration: {reason}")]
    BadConfig { reason: String },

    #[error("unknown probe id `{id}`")]
    UnknownProbe { id: String },
}

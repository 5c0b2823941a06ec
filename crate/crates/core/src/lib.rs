//! Graded persistence diagrams for finite persistence modules.
//!
//! The pipeline runs from a barcode (or a chain of linear maps) through the
//! rank function on half-open intervals, its Möbius inversion (the
//! persistence diagram), the unary-graded rank functions and their
//! inversions (the graded persistence diagrams), persistence landscapes
//! stored by critical points, and exact (p,q)-Wasserstein distances with
//! signed multiplicities.
//!
//! Grid indices are plain integers; real coordinates are exact rationals
//! ([`Coord`]), so every headline quantity at (p,q) = (1,1) is computed
//! without rounding. Floating point enters only for q-norms with
//! q ∉ {1, ∞} and p-th roots.

pub mod assignment;
pub mod barcode;
pub mod diagram;
pub mod geodesic;
pub mod grading;
pub mod grid;
pub mod landscape;
pub mod mapchain;
pub mod oracles;
pub mod poset;
pub mod rank;
pub mod transport;
pub mod util;

pub use barcode::Barcode;
pub use diagram::{PlaneDiagram, SignedDiagram};
pub use geodesic::{coordinate_geodesic_path, GeodesicPath};
pub use grading::{graded_diagram, graded_rank, realizability_check, staircase_decompose};
pub use grading::{GradedDiagram, GradedRank, Staircase};
pub use grid::{Grid, RankEvaluator};
pub use landscape::{derivative, integrate, landscape_from_graded, Landscape, StepFunction};
pub use mapchain::{FieldSpec, MapChain};
pub use poset::{mobius_convolve, mobius_value, zeta_convolve, GridInterval, IntervalFunction};
pub use rank::{diagram_from_rank, rank_from_barcode, rank_from_mapchain, RankTable};
pub use transport::{
    coupling_cost, graded_levels_of_plane, signed_wasserstein, triangle_counterexample,
    verify_stability, wasserstein, Cost, CostParams, Coupling, Mate, Norm,
};

/// Exact coordinate type for points in the plane, grid values, landscape
/// heights, and (1,1)-costs.
pub type Coord = num_rational::Rational64;

/// Errors shared across the pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid half-open interval [{birth},{death}): birth must be < death")]
    InvalidInterval { birth: i64, death: i64 },
    #[error("interval [{birth},{death}) is outside the grid domain 0 ≤ a < b ≤ {max}")]
    OutOfDomain {
        birth: usize,
        death: usize,
        max: usize,
    },
    #[error("intervals [{lo_birth},{lo_death}) ⊆ [{hi_birth},{hi_death}) fail to nest")]
    NotNested {
        lo_birth: usize,
        lo_death: usize,
        hi_birth: usize,
        hi_death: usize,
    },
    #[error("grid size mismatch: expected m = {expected}, got m = {got}")]
    GridMismatch { expected: usize, got: usize },
    #[error("grid points must be strictly increasing (violated at index {index})")]
    GridNotIncreasing { index: usize },
    #[error("map {index} has shape {rows}×{cols}, expected {expected_rows}×{expected_cols}")]
    ShapeMismatch {
        index: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Möbius inversion is negative at [{birth},{death}): value {value}; the table is not the rank function of any module")]
    NegativeDiagramValue {
        birth: usize,
        death: usize,
        value: i64,
    },
    #[error("graded level value {value} ∉ {{-1,0,1}} at [{birth},{death}): the level did not come from an order-reversing 0/1 table")]
    NotGradedValue {
        birth: usize,
        death: usize,
        value: i64,
    },
    #[error("not a realizable graded level: {reason} at [{birth},{death})")]
    NotRealizable {
        birth: usize,
        death: usize,
        reason: String,
    },
    #[error("multiplicity must be positive, got {0}")]
    BadMultiplicity(i64),
    #[error("diagram must be non-negative, found value {value} at ({birth},{death})")]
    NegativePoint {
        birth: String,
        death: String,
        value: i64,
    },
    #[error("cost parameter {name} = {value} must satisfy 1 ≤ {name} ≤ ∞")]
    BadNorm { name: &'static str, value: f64 },
    #[error("no counterexample exists at p = 1: W_(1,q) is a metric")]
    MetricAtPOne,
    #[error("oracle size guard: {got} points exceeds the limit of {limit}")]
    OracleTooLarge { got: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

//! Crate-wide error type. Every fallible operation in the engine funnels
//! through [`Error`]; element equality is exact so there are no tolerance
//! or rounding failure modes, only structural ones.

use thiserror::Error;

/// Errors produced by lattice construction, function application, and
/// fixpoint evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A chain lattice needs at least one element.
    #[error("chain lattice must have at least one element")]
    EmptyChain,

    /// A product lattice needs at least one factor.
    #[error("product lattice must have at least one factor")]
    EmptyProduct,

    /// The requested carrier does not fit in an index.
    #[error("lattice carrier is too large to index")]
    CarrierOverflow,

    /// An element index outside the carrier.
    #[error("element index {index} out of range for carrier of size {carrier}")]
    IndexOutOfRange { index: usize, carrier: usize },

    /// A binary lattice operation was applied across two different lattices.
    #[error("elements belong to different lattices")]
    LatticeMismatch,

    /// Component access on a non-product lattice, or a tuple of the wrong shape.
    #[error("expected a product lattice element with {expected} components, got {got}")]
    ComponentMismatch { expected: usize, got: usize },

    /// A tuple with the wrong number of coordinates.
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    /// A domain or binding map with no coordinates at all.
    #[error("arity must be at least 1")]
    EmptyArity,

    /// A checker was invoked with arguments outside its stated regime.
    #[error("invalid check setup: {0}")]
    InvalidCheck(String),

    /// A coordinate outside `0..arity`.
    #[error("coordinate {coord} out of range for arity {arity}")]
    CoordOutOfRange { coord: usize, arity: usize },

    /// An enumeration-backed operation was asked to walk a carrier above its cap.
    #[error("carrier of size {size} exceeds the cap of {cap}")]
    CarrierTooLarge { size: usize, cap: usize },

    /// Monotone-function enumeration would produce more functions than the cap.
    #[error("{count} monotone functions exceed the cap of {cap}")]
    TooManyFunctions { count: u128, cap: u128 },

    /// A table constructor saw the same input tuple twice.
    #[error("duplicate table row for input {input}")]
    DuplicateRow { input: String },

    /// A table constructor is missing at least one input tuple.
    #[error("incomplete table: no row for input {missing}")]
    IncompleteTable { missing: String },

    /// A table failed monotonicity validation.
    #[error("function is not monotone: f({lo}) = {lo_out} but f({hi}) = {hi_out} with {lo} <= {hi}")]
    NotMonotone {
        lo: String,
        hi: String,
        lo_out: String,
        hi_out: String,
    },

    /// A term refers to coordinates or constants of the wrong lattice.
    #[error("term is ill-typed: {0}")]
    IllTypedTerm(String),

    /// Kleene iteration failed to stabilize within its fuel bound.
    #[error("no fixpoint within {fuel} iterations (function is likely not monotone)")]
    NoConvergence { fuel: usize },

    /// Expression evaluation hit a variable not bound by any enclosing binder.
    #[error("unbound variable x{} in expression", coord + 1)]
    UnboundVar { coord: usize },

    /// A symbolic expansion was refused because its predicted size is too big.
    #[error("nested expansion for arity {arity} would contain {predicted} binders (cap: arity <= {cap})")]
    ExpansionTooLarge {
        arity: usize,
        cap: usize,
        predicted: u128,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

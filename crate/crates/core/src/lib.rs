//! A fixpoint engine for finite complete lattices.
//!
//! The crate computes least fixpoints of monotone vector functions
//! `f : L1 x ... x Ln -> L1 x ... x Ln` two ways and verifies that they
//! agree: directly, by Kleene iteration on the product lattice, and by the
//! nested decomposition that expresses each coordinate of the vectorial
//! fixpoint as a tower of scalar `mu`-binders (the n-ary Bekic principle).
//! The same decomposition is also built symbolically as a mu-expression
//! tree, so syntax and semantics can be checked against each other.
//!
//! Everything is restricted to finite lattices, which keeps every fixpoint
//! computable by iteration and every identity checkable by enumeration.

pub mod bekic;
pub mod error;
pub mod fixpoint;
pub mod lattice;
pub mod monofn;
pub mod muexpr;

pub use bekic::{
    check_bekic, check_claim, check_shift_lemma, nested_eval, shift_insert, specialize,
    BekicReport, BindingMap, CoordCheck, NestedEvaluator,
};
pub use error::{Error, Result};
pub use fixpoint::{
    enumerate_fixpoints, enumerate_fixpoints_capped, lfp_scalar, lfp_vector, FixResult,
};
pub use lattice::{display_tuple, Elem, LatticeKind, LatticeSpec};
pub use monofn::{
    enumerate_monotone, enumerate_monotone_capped, random_monotone, random_monotone_capped,
    CoordFn, MonoMap, MonotoneFns, MonotoneWitness, Term, VectorFn, DEFAULT_CARRIER_CAP,
    DEFAULT_FN_ENUM_CAP,
};
pub use muexpr::{
    build_nested_expr, build_nested_expr_capped, build_nested_expr_with, print_expr, MuExpr,
    MAX_EXPANSION_ARITY,
};

//! Nested fixpoint evaluation and the checkers around it.
//!
//! The central object is the recursively defined scalar fixpoint
//!
//! ```text
//! nested(i, B) = mu x_i . f_i( j == i        -> x_i
//!                            , B(j) defined  -> B(j)
//!                            , otherwise     -> nested(j, B(i := x_i)) )
//! ```
//!
//! where `B` is a partial assignment of lattice elements to coordinates.
//! Each recursive call binds one more coordinate, so the recursion depth is
//! bounded by the number of unbound entries. [`check_bekic`] compares this
//! decomposition against the vectorial least fixpoint coordinate by
//! coordinate; [`check_shift_lemma`] and [`check_claim`] exercise the two
//! auxiliary identities the decomposition rests on.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fixpoint::{lfp_scalar, lfp_vector};
use crate::lattice::{Elem, LatticeSpec};
use crate::monofn::VectorFn;

/// A partial assignment of elements to coordinates: each entry is either
/// undefined or an element of that coordinate's lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingMap {
    domain: Vec<LatticeSpec>,
    entries: Vec<Option<Elem>>,
}

impl BindingMap {
    /// The all-undefined map over the given coordinate lattices.
    pub fn empty(domain: &[LatticeSpec]) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::EmptyArity);
        }
        Ok(BindingMap {
            domain: domain.to_vec(),
            entries: vec![None; domain.len()],
        })
    }

    pub fn arity(&self) -> usize {
        self.entries.len()
    }

    pub fn domain(&self) -> &[LatticeSpec] {
        &self.domain
    }

    pub fn get(&self, j: usize) -> Result<Option<&Elem>> {
        self.entries
            .get(j)
            .map(Option::as_ref)
            .ok_or(Error::CoordOutOfRange {
                coord: j,
                arity: self.entries.len(),
            })
    }

    /// A copy with entry `j` bound to `v`; all other entries are untouched
    /// and `self` stays usable.
    pub fn set(&self, j: usize, v: Elem) -> Result<Self> {
        if j >= self.entries.len() {
            return Err(Error::CoordOutOfRange {
                coord: j,
                arity: self.entries.len(),
            });
        }
        if v.lattice() != &self.domain[j] {
            return Err(Error::LatticeMismatch);
        }
        let mut out = self.clone();
        out.entries[j] = Some(v);
        Ok(out)
    }

    pub fn unbound_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_none()).count()
    }

    /// A copy with coordinate `i` deleted and the tail shifted down one
    /// position. Needs arity at least 2.
    pub fn shift(&self, i: usize) -> Result<Self> {
        if self.entries.len() < 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                got: self.entries.len(),
            });
        }
        if i >= self.entries.len() {
            return Err(Error::CoordOutOfRange {
                coord: i,
                arity: self.entries.len(),
            });
        }
        let mut out = self.clone();
        out.domain.remove(i);
        out.entries.remove(i);
        Ok(out)
    }

    /// Entry indices with slot `i` cleared; evaluation at coordinate `i`
    /// never reads that slot, so cache keys normalize it away.
    fn key_with_cleared(&self, i: usize) -> Vec<Option<usize>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(j, e)| {
                if j == i {
                    None
                } else {
                    e.as_ref().map(Elem::index)
                }
            })
            .collect()
    }

    /// Undefined entries other than `i`: the termination metric of the
    /// nested evaluation.
    fn unbound_excluding(&self, i: usize) -> usize {
        self.entries
            .iter()
            .enumerate()
            .filter(|(j, e)| *j != i && e.is_none())
            .count()
    }
}

/// Inserts `a` at position `i` of an `(n-1)`-tuple, producing an `n`-tuple:
/// `(y_1, ..., y_{i-1}, a, y_i, ..., y_{n-1})`.
pub fn shift_insert(y: &[Elem], i: usize, a: Elem) -> Result<Vec<Elem>> {
    if i > y.len() {
        return Err(Error::CoordOutOfRange {
            coord: i,
            arity: y.len() + 1,
        });
    }
    let mut out = Vec::with_capacity(y.len() + 1);
    out.extend_from_slice(&y[..i]);
    out.push(a);
    out.extend_from_slice(&y[i..]);
    Ok(out)
}

/// Freezes coordinate `i` of `f` at `a` and drops the `i`-th output: the
/// arity-`(n-1)` function `y -> (f_j(y with a inserted at i))_{j != i}`,
/// with output coordinates below `i` kept and those above shifted down.
pub fn specialize(f: &VectorFn, i: usize, a: &Elem) -> Result<VectorFn> {
    let n = f.arity();
    if n < 2 {
        return Err(Error::ArityMismatch { expected: 2, got: n });
    }
    if i >= n {
        return Err(Error::CoordOutOfRange { coord: i, arity: n });
    }
    if a.lattice() != &f.domain()[i] {
        return Err(Error::LatticeMismatch);
    }
    let mut reduced: Vec<LatticeSpec> = f.domain().to_vec();
    reduced.remove(i);
    let reduced_product = LatticeSpec::product_of(reduced.clone())?;
    let size = reduced_product.carrier_size();
    let mut table = Vec::with_capacity(size);
    for t in 0..size {
        let y: Vec<Elem> = reduced_product
            .split(t)
            .into_iter()
            .zip(&reduced)
            .map(|(idx, lat)| lat.elem(idx).expect("carrier index"))
            .collect();
        let full = shift_insert(&y, i, a.clone())?;
        let mut out = f.apply(&full)?;
        out.remove(i);
        table.push(out.iter().map(Elem::index).collect());
    }
    VectorFn::from_table_unchecked(reduced, table)
}

type CacheKey = (usize, Vec<Option<usize>>);

/// Evaluator for nested fixpoints of one function, with an optional memo
/// cache keyed by (coordinate, binding contents).
///
/// The evaluation is pure, so caching is semantics-preserving; a cache-off
/// mode exists for differential testing. The cache is confined to this
/// evaluator, which keeps concurrent evaluations of different functions
/// trivially independent.
pub struct NestedEvaluator<'f> {
    f: &'f VectorFn,
    cache: Option<RefCell<HashMap<CacheKey, usize>>>,
    depth: Cell<usize>,
    max_depth: Cell<usize>,
}

impl<'f> NestedEvaluator<'f> {
    pub fn new(f: &'f VectorFn) -> Self {
        NestedEvaluator {
            f,
            cache: Some(RefCell::new(HashMap::new())),
            depth: Cell::new(0),
            max_depth: Cell::new(0),
        }
    }

    pub fn without_cache(f: &'f VectorFn) -> Self {
        NestedEvaluator {
            f,
            cache: None,
            depth: Cell::new(0),
            max_depth: Cell::new(0),
        }
    }

    /// Deepest evaluation nesting seen so far; without the cache this
    /// equals the unbound-entry count of the outermost call.
    pub fn max_depth(&self) -> usize {
        self.max_depth.get()
    }

    /// The nested fixpoint for coordinate `i` under binding map `b`. Entry
    /// `i` of `b` may be bound or not; the binder shadows it either way.
    pub fn eval(&self, i: usize, b: &BindingMap) -> Result<Elem> {
        if b.arity() != self.f.arity() {
            return Err(Error::ArityMismatch {
                expected: self.f.arity(),
                got: b.arity(),
            });
        }
        if b.domain() != self.f.domain() {
            return Err(Error::LatticeMismatch);
        }
        if i >= self.f.arity() {
            return Err(Error::CoordOutOfRange {
                coord: i,
                arity: self.f.arity(),
            });
        }
        self.eval_rec(i, b)
    }

    fn eval_rec(&self, i: usize, b: &BindingMap) -> Result<Elem> {
        let key = (i, b.key_with_cleared(i));
        if let Some(cache) = &self.cache {
            if let Some(&idx) = cache.borrow().get(&key) {
                return self.f.domain()[i].elem(idx);
            }
        }
        let depth = self.depth.get() + 1;
        self.depth.set(depth);
        self.max_depth.set(self.max_depth.get().max(depth));
        let result = lfp_scalar(&self.f.domain()[i], |xi| self.body(i, b, xi), None);
        self.depth.set(depth - 1);
        let value = result?.value;
        if let Some(cache) = &self.cache {
            cache.borrow_mut().insert(key, value.index());
        }
        Ok(value)
    }

    /// One application of the body under the binder: `f_i` of the argument
    /// vector that reads `x_i` at `i`, bound entries from `b`, and nested
    /// fixpoints (under `b` extended with `i := x_i`) everywhere else.
    fn body(&self, i: usize, b: &BindingMap, xi: &Elem) -> Result<Elem> {
        let n = self.f.arity();
        let rebound = b.set(i, xi.clone())?;
        let mut args = Vec::with_capacity(n);
        for j in 0..n {
            if j == i {
                args.push(xi.clone());
            } else if let Some(v) = b.get(j)? {
                args.push(v.clone());
            } else {
                debug_assert_eq!(
                    rebound.unbound_excluding(j) + 1,
                    b.unbound_excluding(i),
                    "each recursion must bind exactly one more coordinate"
                );
                args.push(self.eval_rec(j, &rebound)?);
            }
        }
        self.f.apply_coord(i, &args)
    }
}

/// One-shot nested fixpoint evaluation with a fresh memo cache.
pub fn nested_eval(f: &VectorFn, i: usize, b: &BindingMap) -> Result<Elem> {
    NestedEvaluator::new(f).eval(i, b)
}

/// Checks the shift identity relating evaluation of `f` under `B(j := a)`
/// to evaluation of the specialization of `f` at `(j, a)` under the shifted
/// binding map, at coordinate `i` (shifted down when `i > j`).
///
/// Requires `i != j` and `b` leaving `j` undefined, so that binding `j`
/// is a genuine modification.
pub fn check_shift_lemma(
    f: &VectorFn,
    i: usize,
    j: usize,
    b: &BindingMap,
    a: &Elem,
) -> Result<bool> {
    let n = f.arity();
    if n < 2 || i == j || i >= n || j >= n {
        return Err(Error::InvalidCheck(format!(
            "need distinct coordinates below arity {n}, got i={i}, j={j}"
        )));
    }
    if b.get(j)?.is_some() {
        return Err(Error::InvalidCheck(format!(
            "binding map must leave coordinate {j} undefined"
        )));
    }
    let lhs = nested_eval(f, i, &b.set(j, a.clone())?)?;

    let g = specialize(f, j, a)?;
    let shifted = b.shift(j)?;
    let i_shifted = if i < j { i } else { i - 1 };
    let rhs = nested_eval(&g, i_shifted, &shifted)?;
    Ok(lhs == rhs)
}

/// Checks that coordinate `i` of the vectorial least fixpoint dominates one
/// application of `f_i` to the vector that reads `a_i` at `i` and the
/// nested fixpoints under `i := a_i` everywhere else.
pub fn check_claim(f: &VectorFn, i: usize) -> Result<bool> {
    let n = f.arity();
    if i >= n {
        return Err(Error::CoordOutOfRange { coord: i, arity: n });
    }
    let a = lfp_vector(f, None)?.value;
    let evaluator = NestedEvaluator::new(f);
    let bound = BindingMap::empty(f.domain())?.set(i, a[i].clone())?;
    let mut args = Vec::with_capacity(n);
    for j in 0..n {
        if j == i {
            args.push(a[i].clone());
        } else {
            args.push(evaluator.eval(j, &bound)?);
        }
    }
    let applied = f.apply_coord(i, &args)?;
    applied.leq(&a[i])
}

/// Per-coordinate comparison of the vectorial least fixpoint against the
/// nested decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordCheck {
    pub lfp: Elem,
    pub nested: Elem,
}

impl CoordCheck {
    pub fn equal(&self) -> bool {
        self.lfp == self.nested
    }
}

/// Report of [`check_bekic`]: all coordinates are compared rather than
/// short-circuiting, since the pattern of failing coordinates is the useful
/// diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BekicReport {
    pub coords: Vec<CoordCheck>,
    /// Strict increases the vectorial Kleene iteration took.
    pub iterations: usize,
}

impl BekicReport {
    pub fn all_equal(&self) -> bool {
        self.coords.iter().all(CoordCheck::equal)
    }

    pub fn first_mismatch(&self) -> Option<usize> {
        self.coords.iter().position(|c| !c.equal())
    }
}

/// Compares every coordinate of the vectorial least fixpoint with the
/// corresponding nested fixpoint from the empty binding map.
pub fn check_bekic(f: &VectorFn) -> Result<BekicReport> {
    let lfp = lfp_vector(f, None)?;
    let evaluator = NestedEvaluator::new(f);
    let empty = BindingMap::empty(f.domain())?;
    let mut coords = Vec::with_capacity(f.arity());
    for (i, lfp_coord) in lfp.value.iter().enumerate() {
        coords.push(CoordCheck {
            lfp: lfp_coord.clone(),
            nested: evaluator.eval(i, &empty)?,
        });
    }
    Ok(BekicReport {
        coords,
        iterations: lfp.iterations,
    })
}

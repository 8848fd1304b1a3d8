//! Least fixpoints by Kleene iteration from bottom.
//!
//! Everything here is restricted to finite lattices, where the ascending
//! chain `bot, g(bot), g(g(bot)), ...` of a monotone map stabilizes at the
//! least fixpoint after at most `carrier_size - 1` strict increases. The
//! fuel bound turns that guarantee into a hard runtime bound: running out
//! of fuel means the supplied function was not monotone (or not a
//! self-map).

use crate::error::{Error, Result};
use crate::lattice::{Elem, LatticeSpec};
use crate::monofn::{VectorFn, DEFAULT_CARRIER_CAP};

/// A found fixpoint together with the number of strict increases the
/// iteration took to reach it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixResult<T> {
    pub value: T,
    pub iterations: usize,
}

/// Least fixpoint of a scalar self-map on `lattice`, iterated from bottom.
///
/// `fuel` bounds the number of value changes and defaults to the carrier
/// size, which always suffices for a monotone map.
pub fn lfp_scalar<G>(lattice: &LatticeSpec, mut g: G, fuel: Option<usize>) -> Result<FixResult<Elem>>
where
    G: FnMut(&Elem) -> Result<Elem>,
{
    let fuel = fuel.unwrap_or_else(|| lattice.carrier_size());
    let mut x = lattice.bottom();
    let mut iterations = 0usize;
    loop {
        let y = g(&x)?;
        if y.lattice() != lattice {
            return Err(Error::LatticeMismatch);
        }
        if y == x {
            return Ok(FixResult {
                value: x,
                iterations,
            });
        }
        iterations += 1;
        if iterations > fuel {
            return Err(Error::NoConvergence { fuel });
        }
        x = y;
    }
}

/// Least fixpoint of a vector function on its product lattice, iterated
/// from the bottom tuple. `fuel` defaults to the product carrier size.
pub fn lfp_vector(f: &VectorFn, fuel: Option<usize>) -> Result<FixResult<Vec<Elem>>> {
    let fuel = fuel.unwrap_or_else(|| f.product_lattice().carrier_size());
    let mut x: Vec<Elem> = f.domain().iter().map(LatticeSpec::bottom).collect();
    let mut iterations = 0usize;
    loop {
        let y = f.apply(&x)?;
        if y == x {
            return Ok(FixResult {
                value: x,
                iterations,
            });
        }
        iterations += 1;
        if iterations > fuel {
            return Err(Error::NoConvergence { fuel });
        }
        x = y;
    }
}

/// All tuples `x` with `f(x) = x`, in carrier enumeration order. This is
/// the brute-force oracle the iterative solvers are checked against.
pub fn enumerate_fixpoints(f: &VectorFn) -> Result<Vec<Vec<Elem>>> {
    enumerate_fixpoints_capped(f, DEFAULT_CARRIER_CAP)
}

/// [`enumerate_fixpoints`] with an explicit carrier cap.
pub fn enumerate_fixpoints_capped(f: &VectorFn, cap: usize) -> Result<Vec<Vec<Elem>>> {
    let size = f.product_lattice().carrier_size();
    if size > cap {
        return Err(Error::CarrierTooLarge { size, cap });
    }
    let mut fixed = Vec::new();
    for t in 0..size {
        let x = f.tuple_at(t);
        if f.apply(&x)? == x {
            fixed.push(x);
        }
    }
    Ok(fixed)
}

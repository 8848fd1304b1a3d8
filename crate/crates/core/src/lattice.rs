//! Finite complete lattices: chains, powersets, and products.
//!
//! Every lattice here has an enumerable carrier indexed `0..carrier_size`,
//! with a fixed encoding per kind: a chain element is its height, a powerset
//! element is a bitset of atoms, and a product element is the mixed-radix
//! fusion of its component indices (first factor most significant). Under
//! these encodings index `0` is always bottom and `carrier_size - 1` is
//! always top, and finiteness makes every lattice complete.
//!
//! Lattice identity is structural: two independently built `chain 3` specs
//! are the same lattice. An [`Elem`] carries its lattice, and every binary
//! operation checks membership, so cross-lattice mixups surface as
//! [`Error::LatticeMismatch`] instead of silent nonsense.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The shape of a finite lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    /// Total order `0 < 1 < ... < k-1`.
    Chain(usize),
    /// Subsets of `m` atoms ordered by inclusion, encoded as bitsets.
    Powerset(u32),
    /// Componentwise order on a non-empty list of factor lattices.
    Product(Vec<LatticeSpec>),
}

/// A finite complete lattice with an enumerable carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    kind: Arc<LatticeKind>,
    carrier_size: usize,
}

impl LatticeSpec {
    /// The chain `0 < 1 < ... < k-1`. Needs `k >= 1`.
    pub fn chain(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyChain);
        }
        Ok(LatticeSpec {
            kind: Arc::new(LatticeKind::Chain(k)),
            carrier_size: k,
        })
    }

    /// The powerset of `m` atoms under inclusion; carrier size `2^m`.
    pub fn powerset(m: u32) -> Result<Self> {
        let carrier_size = 1usize.checked_shl(m).ok_or(Error::CarrierOverflow)?;
        Ok(LatticeSpec {
            kind: Arc::new(LatticeKind::Powerset(m)),
            carrier_size,
        })
    }

    /// The product of a non-empty list of lattices, ordered componentwise.
    pub fn product_of(parts: Vec<LatticeSpec>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyProduct);
        }
        let mut carrier_size = 1usize;
        for p in &parts {
            carrier_size = carrier_size
                .checked_mul(p.carrier_size)
                .ok_or(Error::CarrierOverflow)?;
        }
        Ok(LatticeSpec {
            kind: Arc::new(LatticeKind::Product(parts)),
            carrier_size,
        })
    }

    pub fn kind(&self) -> &LatticeKind {
        &self.kind
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    /// The factor lattices of a product, `None` for chains and powersets.
    pub fn factors(&self) -> Option<&[LatticeSpec]> {
        match &*self.kind {
            LatticeKind::Product(parts) => Some(parts),
            _ => None,
        }
    }

    /// The element with the given carrier index.
    pub fn elem(&self, index: usize) -> Result<Elem> {
        if index >= self.carrier_size {
            return Err(Error::IndexOutOfRange {
                index,
                carrier: self.carrier_size,
            });
        }
        Ok(Elem {
            lattice: self.clone(),
            index,
        })
    }

    pub fn bottom(&self) -> Elem {
        Elem {
            lattice: self.clone(),
            index: 0,
        }
    }

    pub fn top(&self) -> Elem {
        Elem {
            lattice: self.clone(),
            index: self.carrier_size - 1,
        }
    }

    /// `(bottom, top)`.
    pub fn bounds(&self) -> (Elem, Elem) {
        (self.bottom(), self.top())
    }

    /// Every carrier element exactly once, in index order.
    pub fn enumerate(&self) -> impl Iterator<Item = Elem> {
        let lattice = self.clone();
        (0..self.carrier_size).map(move |index| Elem {
            lattice: lattice.clone(),
            index,
        })
    }

    /// Fuses component elements into a product element (inverse of
    /// [`Elem::components`]).
    pub fn tuple_of(&self, components: &[Elem]) -> Result<Elem> {
        let parts = self.factors().ok_or(Error::ComponentMismatch {
            expected: 1,
            got: components.len(),
        })?;
        if parts.len() != components.len() {
            return Err(Error::ComponentMismatch {
                expected: parts.len(),
                got: components.len(),
            });
        }
        let mut index = 0usize;
        for (part, c) in parts.iter().zip(components) {
            if c.lattice != *part {
                return Err(Error::LatticeMismatch);
            }
            index = index * part.carrier_size + c.index;
        }
        self.elem(index)
    }

    pub(crate) fn split(&self, index: usize) -> Vec<usize> {
        match &*self.kind {
            LatticeKind::Product(parts) => {
                let mut digits = vec![0usize; parts.len()];
                let mut rest = index;
                for (slot, part) in digits.iter_mut().zip(parts).rev() {
                    *slot = rest % part.carrier_size;
                    rest /= part.carrier_size;
                }
                digits
            }
            _ => vec![index],
        }
    }

    pub(crate) fn fuse(&self, digits: &[usize]) -> usize {
        match &*self.kind {
            LatticeKind::Product(parts) => {
                let mut index = 0usize;
                for (part, d) in parts.iter().zip(digits) {
                    index = index * part.carrier_size + d;
                }
                index
            }
            _ => digits[0],
        }
    }

    pub(crate) fn leq_idx(&self, a: usize, b: usize) -> bool {
        match &*self.kind {
            LatticeKind::Chain(_) => a <= b,
            LatticeKind::Powerset(_) => a & b == a,
            LatticeKind::Product(parts) => {
                let xs = self.split(a);
                let ys = self.split(b);
                parts
                    .iter()
                    .zip(xs.iter().zip(&ys))
                    .all(|(p, (x, y))| p.leq_idx(*x, *y))
            }
        }
    }

    pub(crate) fn join_idx(&self, a: usize, b: usize) -> usize {
        match &*self.kind {
            LatticeKind::Chain(_) => a.max(b),
            LatticeKind::Powerset(_) => a | b,
            LatticeKind::Product(parts) => {
                let xs = self.split(a);
                let ys = self.split(b);
                let joined: Vec<usize> = parts
                    .iter()
                    .zip(xs.iter().zip(&ys))
                    .map(|(p, (x, y))| p.join_idx(*x, *y))
                    .collect();
                self.fuse(&joined)
            }
        }
    }

    pub(crate) fn meet_idx(&self, a: usize, b: usize) -> usize {
        match &*self.kind {
            LatticeKind::Chain(_) => a.min(b),
            LatticeKind::Powerset(_) => a & b,
            LatticeKind::Product(parts) => {
                let xs = self.split(a);
                let ys = self.split(b);
                let met: Vec<usize> = parts
                    .iter()
                    .zip(xs.iter().zip(&ys))
                    .map(|(p, (x, y))| p.meet_idx(*x, *y))
                    .collect();
                self.fuse(&met)
            }
        }
    }

    pub(crate) fn upper_cover_idx(&self, index: usize) -> Vec<usize> {
        match &*self.kind {
            LatticeKind::Chain(k) => {
                if index + 1 < *k {
                    vec![index + 1]
                } else {
                    vec![]
                }
            }
            LatticeKind::Powerset(m) => (0..*m)
                .filter(|bit| index & (1 << bit) == 0)
                .map(|bit| index | (1 << bit))
                .collect(),
            LatticeKind::Product(parts) => {
                let digits = self.split(index);
                let mut out = Vec::new();
                for (pos, part) in parts.iter().enumerate() {
                    for c in part.upper_cover_idx(digits[pos]) {
                        let mut bumped = digits.clone();
                        bumped[pos] = c;
                        out.push(self.fuse(&bumped));
                    }
                }
                out
            }
        }
    }

    pub(crate) fn lower_cover_idx(&self, index: usize) -> Vec<usize> {
        match &*self.kind {
            LatticeKind::Chain(_) => {
                if index > 0 {
                    vec![index - 1]
                } else {
                    vec![]
                }
            }
            LatticeKind::Powerset(m) => (0..*m)
                .filter(|bit| index & (1 << bit) != 0)
                .map(|bit| index & !(1 << bit))
                .collect(),
            LatticeKind::Product(parts) => {
                let digits = self.split(index);
                let mut out = Vec::new();
                for (pos, part) in parts.iter().enumerate() {
                    for c in part.lower_cover_idx(digits[pos]) {
                        let mut lowered = digits.clone();
                        lowered[pos] = c;
                        out.push(self.fuse(&lowered));
                    }
                }
                out
            }
        }
    }

    fn fmt_elem(&self, index: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.kind {
            LatticeKind::Chain(_) => write!(f, "{index}"),
            LatticeKind::Powerset(m) => {
                write!(f, "{{")?;
                let mut first = true;
                for bit in 0..*m {
                    if index & (1 << bit) != 0 {
                        if !first {
                            write!(f, ",")?;
                        }
                        write!(f, "{bit}")?;
                        first = false;
                    }
                }
                write!(f, "}}")
            }
            LatticeKind::Product(parts) => {
                let digits = self.split(index);
                write!(f, "(")?;
                for (pos, (part, d)) in parts.iter().zip(&digits).enumerate() {
                    if pos > 0 {
                        write!(f, ",")?;
                    }
                    part.fmt_elem(*d, f)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An element of a [`LatticeSpec`], represented as a carrier index bound to
/// its lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Elem {
    lattice: LatticeSpec,
    index: usize,
}

impl Elem {
    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn index(&self) -> usize {
        self.index
    }

    fn check_same(&self, other: &Elem) -> Result<()> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(())
    }

    /// `self <= other` in the lattice order.
    pub fn leq(&self, other: &Elem) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.lattice.leq_idx(self.index, other.index))
    }

    /// Least upper bound.
    pub fn join(&self, other: &Elem) -> Result<Elem> {
        self.check_same(other)?;
        Ok(Elem {
            lattice: self.lattice.clone(),
            index: self.lattice.join_idx(self.index, other.index),
        })
    }

    /// Greatest lower bound.
    pub fn meet(&self, other: &Elem) -> Result<Elem> {
        self.check_same(other)?;
        Ok(Elem {
            lattice: self.lattice.clone(),
            index: self.lattice.meet_idx(self.index, other.index),
        })
    }

    /// The elements immediately above `self` (y covers x: x < y with nothing
    /// strictly between).
    pub fn upper_covers(&self) -> Vec<Elem> {
        self.lattice
            .upper_cover_idx(self.index)
            .into_iter()
            .map(|index| Elem {
                lattice: self.lattice.clone(),
                index,
            })
            .collect()
    }

    /// The elements immediately below `self`.
    pub fn lower_covers(&self) -> Vec<Elem> {
        self.lattice
            .lower_cover_idx(self.index)
            .into_iter()
            .map(|index| Elem {
                lattice: self.lattice.clone(),
                index,
            })
            .collect()
    }

    /// Splits a product element into its component elements.
    pub fn components(&self) -> Result<Vec<Elem>> {
        let parts = self.lattice.factors().ok_or(Error::ComponentMismatch {
            expected: 1,
            got: 0,
        })?;
        let digits = self.lattice.split(self.index);
        Ok(parts
            .iter()
            .zip(digits)
            .map(|(part, index)| Elem {
                lattice: part.clone(),
                index,
            })
            .collect())
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.lattice.fmt_elem(self.index, f)
    }
}

/// Renders a tuple of elements as `(e1,e2,...)`.
pub fn display_tuple(tuple: &[Elem]) -> String {
    let parts: Vec<String> = tuple.iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(","))
}

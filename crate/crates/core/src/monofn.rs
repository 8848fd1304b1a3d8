//! Monotone vector functions `f : L1 x ... x Ln -> L1 x ... x Ln`.
//!
//! Two representations coexist. `Table` stores the full graph of the
//! function and admits any monotone map over heterogeneous coordinate
//! lattices; monotonicity is validated at construction. `Terms` builds each
//! output coordinate from a small syntax of joins, meets, constants,
//! variables, and validated unary maps, and is monotone by construction.
//!
//! Monotonicity validation walks covering pairs of the product carrier
//! rather than all comparable pairs; the two are equivalent by transitivity
//! since every interval of a finite lattice contains a saturated chain.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{display_tuple, Elem, LatticeSpec};

/// Largest product carrier the enumeration-backed operations will walk.
pub const DEFAULT_CARRIER_CAP: usize = 4096;

/// Largest number of functions [`enumerate_monotone`] will agree to yield.
pub const DEFAULT_FN_ENUM_CAP: usize = 100_000;

/// A validated monotone unary map on one lattice, usable as a term former.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoMap {
    lattice: LatticeSpec,
    table: Vec<usize>,
}

impl MonoMap {
    /// Builds a unary map from its images in carrier order, rejecting
    /// non-monotone tables.
    pub fn new(lattice: LatticeSpec, images: &[Elem]) -> Result<Self> {
        if images.len() != lattice.carrier_size() {
            return Err(Error::IncompleteTable {
                missing: format!("unary map needs {} images", lattice.carrier_size()),
            });
        }
        let mut table = Vec::with_capacity(images.len());
        for img in images {
            if img.lattice() != &lattice {
                return Err(Error::LatticeMismatch);
            }
            table.push(img.index());
        }
        for i in 0..table.len() {
            for c in lattice.upper_cover_idx(i) {
                if !lattice.leq_idx(table[i], table[c]) {
                    let at = lattice.elem(i).expect("carrier index");
                    let above = lattice.elem(c).expect("carrier index");
                    return Err(Error::NotMonotone {
                        lo: at.to_string(),
                        hi: above.to_string(),
                        lo_out: lattice.elem(table[i]).expect("image").to_string(),
                        hi_out: lattice.elem(table[c]).expect("image").to_string(),
                    });
                }
            }
        }
        Ok(MonoMap { lattice, table })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        if x.lattice() != &self.lattice {
            return Err(Error::LatticeMismatch);
        }
        self.lattice.elem(self.table[x.index()])
    }
}

/// A coordinate term: a syntax for monotone scalar functions of the input
/// tuple. Coordinates are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Const(Elem),
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Mono(MonoMap, Box<Term>),
}

impl Term {
    pub fn var(j: usize) -> Term {
        Term::Var(j)
    }

    pub fn constant(e: Elem) -> Term {
        Term::Const(e)
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn mono(map: MonoMap, arg: Term) -> Term {
        Term::Mono(map, Box::new(arg))
    }

    /// The lattice this term denotes into, under the given coordinate
    /// lattices. Errors if the term mixes lattices.
    pub fn lattice_in(&self, domain: &[LatticeSpec]) -> Result<LatticeSpec> {
        match self {
            Term::Var(j) => domain.get(*j).cloned().ok_or(Error::CoordOutOfRange {
                coord: *j,
                arity: domain.len(),
            }),
            Term::Const(e) => Ok(e.lattice().clone()),
            Term::Join(a, b) | Term::Meet(a, b) => {
                let la = a.lattice_in(domain)?;
                let lb = b.lattice_in(domain)?;
                if la != lb {
                    return Err(Error::IllTypedTerm(
                        "join/meet arguments live in different lattices".into(),
                    ));
                }
                Ok(la)
            }
            Term::Mono(map, arg) => {
                let la = arg.lattice_in(domain)?;
                if &la != map.lattice() {
                    return Err(Error::IllTypedTerm(
                        "unary map applied to an argument of a different lattice".into(),
                    ));
                }
                Ok(la)
            }
        }
    }

    fn eval(&self, x: &[Elem]) -> Result<Elem> {
        match self {
            Term::Var(j) => Ok(x[*j].clone()),
            Term::Const(e) => Ok(e.clone()),
            Term::Join(a, b) => a.eval(x)?.join(&b.eval(x)?),
            Term::Meet(a, b) => a.eval(x)?.meet(&b.eval(x)?),
            Term::Mono(map, arg) => map.apply(&arg.eval(x)?),
        }
    }
}

/// A pair witnessing a monotonicity violation: `lo <= hi` but
/// `f(lo) !<= f(hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneWitness {
    pub lo: Vec<Elem>,
    pub hi: Vec<Elem>,
    pub lo_out: Vec<Elem>,
    pub hi_out: Vec<Elem>,
}

impl fmt::Display for MonotoneWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "f({}) = {} but f({}) = {}",
            display_tuple(&self.lo),
            display_tuple(&self.lo_out),
            display_tuple(&self.hi),
            display_tuple(&self.hi_out)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Body {
    Table(Vec<Vec<usize>>),
    Terms(Vec<Term>),
}

/// A vector function on a non-empty list of coordinate lattices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFn {
    domain: Vec<LatticeSpec>,
    product: LatticeSpec,
    body: Body,
}

impl VectorFn {
    fn new_shell(domain: Vec<LatticeSpec>, body: Body) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::EmptyArity);
        }
        let product = LatticeSpec::product_of(domain.clone())?;
        Ok(VectorFn {
            domain,
            product,
            body,
        })
    }

    /// Builds a table function from explicit `(input, output)` rows,
    /// validating totality and monotonicity. The first violation is reported
    /// in the error.
    pub fn from_rows(domain: Vec<LatticeSpec>, rows: &[(Vec<Elem>, Vec<Elem>)]) -> Result<Self> {
        let shell = VectorFn::new_shell(domain, Body::Table(Vec::new()))?;
        let size = shell.product.carrier_size();
        let mut table: Vec<Option<Vec<usize>>> = vec![None; size];
        for (input, output) in rows {
            let t = shell.fuse_tuple(input)?;
            if table[t].is_some() {
                return Err(Error::DuplicateRow {
                    input: display_tuple(input),
                });
            }
            shell.check_tuple(output)?;
            table[t] = Some(output.iter().map(Elem::index).collect());
        }
        if let Some(missing) = table.iter().position(Option::is_none) {
            return Err(Error::IncompleteTable {
                missing: display_tuple(&shell.tuple_at(missing)),
            });
        }
        let f = VectorFn {
            body: Body::Table(table.into_iter().map(Option::unwrap).collect()),
            ..shell
        };
        f.validate_monotone()?;
        Ok(f)
    }

    /// Tabulates a closure over the whole carrier and validates monotonicity.
    pub fn from_fn<G>(domain: Vec<LatticeSpec>, mut g: G) -> Result<Self>
    where
        G: FnMut(&[Elem]) -> Result<Vec<Elem>>,
    {
        let shell = VectorFn::new_shell(domain, Body::Table(Vec::new()))?;
        let size = shell.product.carrier_size();
        let mut table = Vec::with_capacity(size);
        for t in 0..size {
            let out = g(&shell.tuple_at(t))?;
            shell.check_tuple(&out)?;
            table.push(out.iter().map(Elem::index).collect());
        }
        let f = VectorFn {
            body: Body::Table(table),
            ..shell
        };
        f.validate_monotone()?;
        Ok(f)
    }

    /// Builds a table function without monotonicity validation. Output
    /// indices are still bounds-checked. Useful for feeding deliberately
    /// broken tables to the checkers.
    pub fn from_table_unchecked(domain: Vec<LatticeSpec>, table: Vec<Vec<usize>>) -> Result<Self> {
        let shell = VectorFn::new_shell(domain, Body::Table(Vec::new()))?;
        let size = shell.product.carrier_size();
        if table.len() != size {
            return Err(Error::IncompleteTable {
                missing: format!("table has {} rows, carrier has {size}", table.len()),
            });
        }
        for row in &table {
            if row.len() != shell.domain.len() {
                return Err(Error::ArityMismatch {
                    expected: shell.domain.len(),
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= shell.domain[j].carrier_size() {
                    return Err(Error::IndexOutOfRange {
                        index: v,
                        carrier: shell.domain[j].carrier_size(),
                    });
                }
            }
        }
        Ok(VectorFn {
            body: Body::Table(table),
            ..shell
        })
    }

    /// Builds a term-backed function, one term per output coordinate, and
    /// checks that term `j` denotes into `L_j`.
    pub fn from_terms(domain: Vec<LatticeSpec>, terms: Vec<Term>) -> Result<Self> {
        if terms.len() != domain.len() {
            return Err(Error::ArityMismatch {
                expected: domain.len(),
                got: terms.len(),
            });
        }
        for (j, term) in terms.iter().enumerate() {
            let lat = term.lattice_in(&domain)?;
            if lat != domain[j] {
                return Err(Error::IllTypedTerm(format!(
                    "term for coordinate {} denotes into a different lattice",
                    j + 1
                )));
            }
        }
        VectorFn::new_shell(domain, Body::Terms(terms))
    }

    pub fn arity(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[LatticeSpec] {
        &self.domain
    }

    /// The product lattice of the coordinate lattices.
    pub fn product_lattice(&self) -> &LatticeSpec {
        &self.product
    }

    pub fn is_table(&self) -> bool {
        matches!(self.body, Body::Table(_))
    }

    fn check_tuple(&self, x: &[Elem]) -> Result<()> {
        if x.len() != self.domain.len() {
            return Err(Error::ArityMismatch {
                expected: self.domain.len(),
                got: x.len(),
            });
        }
        for (e, lat) in x.iter().zip(&self.domain) {
            if e.lattice() != lat {
                return Err(Error::LatticeMismatch);
            }
        }
        Ok(())
    }

    fn fuse_tuple(&self, x: &[Elem]) -> Result<usize> {
        self.check_tuple(x)?;
        let digits: Vec<usize> = x.iter().map(Elem::index).collect();
        Ok(self.product.fuse(&digits))
    }

    /// The input tuple with the given fused carrier index.
    pub(crate) fn tuple_at(&self, t: usize) -> Vec<Elem> {
        self.product
            .split(t)
            .into_iter()
            .zip(&self.domain)
            .map(|(idx, lat)| lat.elem(idx).expect("carrier index"))
            .collect()
    }

    /// Applies the function to an input tuple.
    pub fn apply(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        let t = self.fuse_tuple(x)?;
        match &self.body {
            Body::Table(rows) => Ok(rows[t]
                .iter()
                .zip(&self.domain)
                .map(|(&idx, lat)| lat.elem(idx).expect("validated row"))
                .collect()),
            Body::Terms(terms) => terms.iter().map(|term| term.eval(x)).collect(),
        }
    }

    /// Applies one output coordinate: `f_i(x)`.
    pub fn apply_coord(&self, i: usize, x: &[Elem]) -> Result<Elem> {
        if i >= self.domain.len() {
            return Err(Error::CoordOutOfRange {
                coord: i,
                arity: self.domain.len(),
            });
        }
        let t = self.fuse_tuple(x)?;
        match &self.body {
            Body::Table(rows) => self.domain[i].elem(rows[t][i]),
            Body::Terms(terms) => terms[i].eval(x),
        }
    }

    /// The scalar projection `f_i`, usable as a standalone function.
    pub fn project(&self, i: usize) -> Result<CoordFn<'_>> {
        if i >= self.domain.len() {
            return Err(Error::CoordOutOfRange {
                coord: i,
                arity: self.domain.len(),
            });
        }
        Ok(CoordFn { f: self, coord: i })
    }

    /// Checks monotonicity over covering pairs of the product carrier,
    /// returning the first violating pair if any. `Ok(None)` means monotone.
    pub fn check_monotone(&self) -> Result<Option<MonotoneWitness>> {
        self.check_monotone_capped(DEFAULT_CARRIER_CAP)
    }

    /// [`check_monotone`](Self::check_monotone) with an explicit carrier cap.
    pub fn check_monotone_capped(&self, cap: usize) -> Result<Option<MonotoneWitness>> {
        let size = self.product.carrier_size();
        if size > cap {
            return Err(Error::CarrierTooLarge { size, cap });
        }
        for t in 0..size {
            let x = self.tuple_at(t);
            let fx = self.apply(&x)?;
            for c in self.product.upper_cover_idx(t) {
                let y = self.tuple_at(c);
                let fy = self.apply(&y)?;
                let ok = fx
                    .iter()
                    .zip(&fy)
                    .all(|(a, b)| a.leq(b).expect("same coordinate lattice"));
                if !ok {
                    return Ok(Some(MonotoneWitness {
                        lo: x,
                        hi: y,
                        lo_out: fx,
                        hi_out: fy,
                    }));
                }
            }
        }
        Ok(None)
    }

    fn validate_monotone(&self) -> Result<()> {
        let size = self.product.carrier_size();
        match self.check_monotone_capped(size)? {
            None => Ok(()),
            Some(w) => Err(Error::NotMonotone {
                lo: display_tuple(&w.lo),
                hi: display_tuple(&w.hi),
                lo_out: display_tuple(&w.lo_out),
                hi_out: display_tuple(&w.hi_out),
            }),
        }
    }

    /// Re-expresses the function as an equivalent table.
    pub fn tabulate(&self) -> Result<VectorFn> {
        let size = self.product.carrier_size();
        if size > DEFAULT_CARRIER_CAP {
            return Err(Error::CarrierTooLarge {
                size,
                cap: DEFAULT_CARRIER_CAP,
            });
        }
        let mut table = Vec::with_capacity(size);
        for t in 0..size {
            let out = self.apply(&self.tuple_at(t))?;
            table.push(out.iter().map(Elem::index).collect());
        }
        Ok(VectorFn {
            domain: self.domain.clone(),
            product: self.product.clone(),
            body: Body::Table(table),
        })
    }
}

/// A scalar projection `f_i` of a [`VectorFn`].
#[derive(Debug, Clone, Copy)]
pub struct CoordFn<'a> {
    f: &'a VectorFn,
    coord: usize,
}

impl CoordFn<'_> {
    pub fn coord(&self) -> usize {
        self.coord
    }

    pub fn eval(&self, x: &[Elem]) -> Result<Elem> {
        self.f.apply_coord(self.coord, x)
    }
}

/// Generates a seeded monotone table function.
///
/// The carrier is walked in fused-index order, which is a linear extension
/// of the product order; each output is drawn uniformly from the up-set of
/// the join of the outputs already assigned below. The sampling is
/// reproducible for a fixed seed but is not uniform over all monotone
/// functions.
pub fn random_monotone(domain: &[LatticeSpec], seed: u64) -> Result<VectorFn> {
    random_monotone_capped(domain, seed, DEFAULT_CARRIER_CAP)
}

/// [`random_monotone`] with an explicit carrier cap.
pub fn random_monotone_capped(
    domain: &[LatticeSpec],
    seed: u64,
    cap: usize,
) -> Result<VectorFn> {
    if domain.is_empty() {
        return Err(Error::EmptyArity);
    }
    let product = LatticeSpec::product_of(domain.to_vec())?;
    let size = product.carrier_size();
    if size > cap {
        return Err(Error::CarrierTooLarge { size, cap });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = vec![vec![0usize; domain.len()]; size];
    for t in 0..size {
        let below = product.lower_cover_idx(t);
        for (j, lat) in domain.iter().enumerate() {
            let mut floor = 0usize;
            for &c in &below {
                floor = lat.join_idx(floor, table[c][j]);
            }
            let candidates: Vec<usize> = (0..lat.carrier_size())
                .filter(|&v| lat.leq_idx(floor, v))
                .collect();
            table[t][j] = candidates[rng.random_range(0..candidates.len())];
        }
    }
    VectorFn::from_table_unchecked(domain.to_vec(), table)
}

/// Enumerates every monotone table function on the domain, refusing when
/// there are more than [`DEFAULT_FN_ENUM_CAP`] of them.
pub fn enumerate_monotone(domain: &[LatticeSpec]) -> Result<MonotoneFns> {
    enumerate_monotone_capped(domain, DEFAULT_FN_ENUM_CAP)
}

/// [`enumerate_monotone`] with an explicit function-count cap.
pub fn enumerate_monotone_capped(domain: &[LatticeSpec], cap: usize) -> Result<MonotoneFns> {
    if domain.is_empty() {
        return Err(Error::EmptyArity);
    }
    let product = LatticeSpec::product_of(domain.to_vec())?;
    let mut per_coord = Vec::with_capacity(domain.len());
    let mut total: u128 = 1;
    for lat in domain {
        // per-coordinate enumeration aborts at cap + 1 maps, so a single
        // oversized coordinate reports a lower bound instead of hanging
        let (maps, exceeded) = monotone_maps_to(&product, lat, cap.saturating_add(1));
        let count = maps.len() as u128 + u128::from(exceeded);
        total = total.saturating_mul(count);
        if exceeded {
            return Err(Error::TooManyFunctions {
                count: total,
                cap: cap as u128,
            });
        }
        per_coord.push(maps);
    }
    if total > cap as u128 {
        return Err(Error::TooManyFunctions {
            count: total,
            cap: cap as u128,
        });
    }
    Ok(MonotoneFns {
        domain: domain.to_vec(),
        per_coord,
        cursor: None,
        total,
    })
}

/// All monotone maps `product -> target`, each as a vector of output indices
/// over the fused carrier, in a deterministic order. Stops early once
/// `limit` maps have been collected, reporting `true` as the second
/// component.
fn monotone_maps_to(
    product: &LatticeSpec,
    target: &LatticeSpec,
    limit: usize,
) -> (Vec<Vec<usize>>, bool) {
    let size = product.carrier_size();
    let below: Vec<Vec<usize>> = (0..size).map(|t| product.lower_cover_idx(t)).collect();

    struct Dfs<'a> {
        target: &'a LatticeSpec,
        below: &'a [Vec<usize>],
        limit: usize,
        current: Vec<usize>,
        maps: Vec<Vec<usize>>,
        exceeded: bool,
    }
    impl Dfs<'_> {
        fn go(&mut self, t: usize) {
            if self.exceeded {
                return;
            }
            if t == self.current.len() {
                if self.maps.len() == self.limit {
                    self.exceeded = true;
                } else {
                    self.maps.push(self.current.clone());
                }
                return;
            }
            let mut floor = 0usize;
            for &c in &self.below[t] {
                floor = self.target.join_idx(floor, self.current[c]);
            }
            for v in 0..self.target.carrier_size() {
                if self.target.leq_idx(floor, v) {
                    self.current[t] = v;
                    self.go(t + 1);
                    if self.exceeded {
                        return;
                    }
                }
            }
        }
    }

    let mut dfs = Dfs {
        target,
        below: &below,
        limit,
        current: vec![0; size],
        maps: Vec::new(),
        exceeded: false,
    };
    dfs.go(0);
    (dfs.maps, dfs.exceeded)
}

/// Iterator over every monotone table function on a domain.
#[derive(Debug)]
pub struct MonotoneFns {
    domain: Vec<LatticeSpec>,
    per_coord: Vec<Vec<Vec<usize>>>,
    cursor: Option<Vec<usize>>,
    total: u128,
}

impl MonotoneFns {
    /// The exact number of functions this iterator yields.
    pub fn total(&self) -> u128 {
        self.total
    }

    /// The number of monotone scalar maps per output coordinate.
    pub fn coord_counts(&self) -> Vec<usize> {
        self.per_coord.iter().map(Vec::len).collect()
    }
}

impl Iterator for MonotoneFns {
    type Item = VectorFn;

    fn next(&mut self) -> Option<VectorFn> {
        let cursor = match &mut self.cursor {
            None => {
                if self.per_coord.iter().any(Vec::is_empty) {
                    return None;
                }
                self.cursor = Some(vec![0; self.per_coord.len()]);
                self.cursor.as_mut().unwrap()
            }
            Some(cursor) => {
                // advance the odometer, last coordinate fastest
                let mut pos = cursor.len();
                loop {
                    if pos == 0 {
                        return None;
                    }
                    pos -= 1;
                    cursor[pos] += 1;
                    if cursor[pos] < self.per_coord[pos].len() {
                        break;
                    }
                    cursor[pos] = 0;
                }
                cursor
            }
        };
        let size = self.per_coord[0][0].len();
        let table: Vec<Vec<usize>> = (0..size)
            .map(|t| {
                (0..self.per_coord.len())
                    .map(|j| self.per_coord[j][cursor[j]][t])
                    .collect()
            })
            .collect();
        Some(
            VectorFn::from_table_unchecked(self.domain.clone(), table)
                .expect("enumerated table is well-formed"),
        )
    }
}

//! Symbolic mu-expression trees.
//!
//! [`build_nested_expr`] performs the same recursion as the semantic nested
//! evaluator but produces syntax: a tree of `mu`-binders and applications
//! whose root-to-leaf binder paths are exactly the repetition-free
//! coordinate sequences starting at the requested coordinate. Variables are
//! named by coordinate (`x1 ... xn`) and reused across sibling branches;
//! capture is impossible because no path binds a coordinate twice.
//!
//! The tree is exponentially large in the arity, so expansion is guarded by
//! an arity cap and refuses with the predicted binder count.

use std::fmt;

use crate::bekic::BindingMap;
use crate::error::{Error, Result};
use crate::fixpoint::lfp_scalar;
use crate::lattice::Elem;
use crate::monofn::VectorFn;

/// Largest arity [`build_nested_expr`] expands by default (1957 binders).
pub const MAX_EXPANSION_ARITY: usize = 7;

/// A mu-expression: binder, coordinate application, variable, or a constant
/// placeholder for an element bound by a binding map. Coordinates are
/// zero-based; printing is one-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MuExpr {
    /// `mu x_i . body`
    Mu(usize, Box<MuExpr>),
    /// `f_i(arg_1, ..., arg_n)`
    App(usize, Vec<MuExpr>),
    /// `x_i`
    Var(usize),
    /// A concrete element standing in for coordinate `i`.
    Hole(usize, Elem),
}

/// Predicted number of binders in a full expansion over `u` coordinates:
/// the number of repetition-free sequences with a fixed first coordinate.
fn predicted_mu_count(u: usize) -> u128 {
    let mut term: u128 = 1;
    let mut sum: u128 = 1;
    for k in 2..=u {
        term = term.saturating_mul((u - k + 1) as u128);
        sum = sum.saturating_add(term);
    }
    sum
}

#[derive(Clone)]
enum SymState {
    Undef,
    Hole(Elem),
    Bound,
}

fn build(n: usize, i: usize, states: &[SymState]) -> MuExpr {
    let mut inner: Vec<SymState> = states.to_vec();
    inner[i] = SymState::Bound;
    let mut args = Vec::with_capacity(n);
    for j in 0..n {
        if j == i {
            args.push(MuExpr::Var(i));
        } else {
            match &states[j] {
                SymState::Bound => args.push(MuExpr::Var(j)),
                SymState::Hole(v) => args.push(MuExpr::Hole(j, v.clone())),
                SymState::Undef => args.push(build(n, j, &inner)),
            }
        }
    }
    MuExpr::Mu(i, Box::new(MuExpr::App(i, args)))
}

fn build_guarded(n: usize, i: usize, states: Vec<SymState>, cap: usize) -> Result<MuExpr> {
    if n == 0 {
        return Err(Error::EmptyArity);
    }
    if i >= n {
        return Err(Error::CoordOutOfRange { coord: i, arity: n });
    }
    // effective binder coordinates: i itself plus every other undefined slot
    let effective = 1 + states
        .iter()
        .enumerate()
        .filter(|(j, s)| *j != i && matches!(s, SymState::Undef))
        .count();
    if effective > cap {
        return Err(Error::ExpansionTooLarge {
            arity: effective,
            cap,
            predicted: predicted_mu_count(effective),
        });
    }
    Ok(build(n, i, &states))
}

/// The full nested expansion for coordinate `i` of an arity-`n` function,
/// from the empty binding map.
pub fn build_nested_expr(n: usize, i: usize) -> Result<MuExpr> {
    build_nested_expr_capped(n, i, MAX_EXPANSION_ARITY)
}

/// [`build_nested_expr`] with an explicit arity cap.
pub fn build_nested_expr_capped(n: usize, i: usize, cap: usize) -> Result<MuExpr> {
    build_guarded(n, i, vec![SymState::Undef; n], cap)
}

/// Nested expansion under a partial binding map: bound coordinates appear
/// as constant holes instead of sub-expansions.
pub fn build_nested_expr_with(b: &BindingMap, i: usize) -> Result<MuExpr> {
    let n = b.arity();
    let states: Vec<SymState> = (0..n)
        .map(|j| match b.get(j).expect("in range") {
            Some(v) => SymState::Hole(v.clone()),
            None => SymState::Undef,
        })
        .collect();
    build_guarded(n, i, states, MAX_EXPANSION_ARITY)
}

impl MuExpr {
    /// Number of `mu` binders in the tree.
    pub fn count_mu(&self) -> usize {
        match self {
            MuExpr::Mu(_, body) => 1 + body.count_mu(),
            MuExpr::App(_, args) => args.iter().map(MuExpr::count_mu).sum(),
            MuExpr::Var(_) | MuExpr::Hole(..) => 0,
        }
    }

    /// Evaluates the expression against `f` under an environment of bound
    /// coordinates, with each `mu` computed by Kleene iteration.
    pub fn eval(&self, f: &VectorFn, env: &BindingMap) -> Result<Elem> {
        if env.arity() != f.arity() {
            return Err(Error::ArityMismatch {
                expected: f.arity(),
                got: env.arity(),
            });
        }
        if env.domain() != f.domain() {
            return Err(Error::LatticeMismatch);
        }
        self.eval_rec(f, env)
    }

    /// Evaluates a closed expression (no free variables) against `f`.
    pub fn eval_closed(&self, f: &VectorFn) -> Result<Elem> {
        self.eval(f, &BindingMap::empty(f.domain())?)
    }

    fn eval_rec(&self, f: &VectorFn, env: &BindingMap) -> Result<Elem> {
        match self {
            MuExpr::Var(j) => env
                .get(*j)?
                .cloned()
                .ok_or(Error::UnboundVar { coord: *j }),
            MuExpr::Hole(_, v) => Ok(v.clone()),
            MuExpr::App(k, args) => {
                if args.len() != f.arity() {
                    return Err(Error::ArityMismatch {
                        expected: f.arity(),
                        got: args.len(),
                    });
                }
                let vals: Vec<Elem> = args
                    .iter()
                    .map(|arg| arg.eval_rec(f, env))
                    .collect::<Result<_>>()?;
                f.apply_coord(*k, &vals)
            }
            MuExpr::Mu(i, body) => {
                if *i >= f.arity() {
                    return Err(Error::CoordOutOfRange {
                        coord: *i,
                        arity: f.arity(),
                    });
                }
                let lattice = &f.domain()[*i];
                let result = lfp_scalar(
                    lattice,
                    |x| body.eval_rec(f, &env.set(*i, x.clone())?),
                    None,
                )?;
                Ok(result.value)
            }
        }
    }
}

impl fmt::Display for MuExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuExpr::Mu(i, body) => {
                write!(f, "mu x{}. ", i + 1)?;
                body.fmt(f)
            }
            MuExpr::App(k, args) => {
                write!(f, "f{}(", k + 1)?;
                for (pos, arg) in args.iter().enumerate() {
                    if pos > 0 {
                        write!(f, ", ")?;
                    }
                    arg.fmt(f)?;
                }
                write!(f, ")")
            }
            MuExpr::Var(j) => write!(f, "x{}", j + 1),
            MuExpr::Hole(_, v) => write!(f, "<{v}>"),
        }
    }
}

/// Canonical text of an expression (same as its `Display` output).
pub fn print_expr(e: &MuExpr) -> String {
    e.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bekic::nested_eval;
    use crate::lattice::LatticeSpec;
    use crate::monofn::{enumerate_monotone, random_monotone, Term};

    fn chain(k: usize) -> LatticeSpec {
        LatticeSpec::chain(k).unwrap()
    }

    #[test]
    fn base_case_prints_as_a_single_binder() {
        assert_eq!(print_expr(&build_nested_expr(1, 0).unwrap()), "mu x1. f1(x1)");
    }

    #[test]
    fn two_coordinate_expansions_match_both_rows() {
        assert_eq!(
            print_expr(&build_nested_expr(2, 0).unwrap()),
            "mu x1. f1(x1, mu x2. f2(x1, x2))"
        );
        assert_eq!(
            print_expr(&build_nested_expr(2, 1).unwrap()),
            "mu x2. f2(mu x1. f1(x1, x2), x2)"
        );
    }

    #[test]
    fn three_coordinate_expansion_first_coordinate() {
        assert_eq!(
            print_expr(&build_nested_expr(3, 0).unwrap()),
            "mu x1. f1(x1, mu x2. f2(x1, x2, mu x3. f3(x1, x2, x3)), \
             mu x3. f3(x1, mu x2. f2(x1, x2, x3), x3))"
        );
    }

    /// Oracle: enumerate the repetition-free coordinate sequences starting
    /// at `i` by depth-first search, independently of the tree builder.
    fn injective_sequences_from(n: usize, i: usize) -> Vec<Vec<usize>> {
        fn go(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(prefix.clone());
            for j in 0..n {
                if !prefix.contains(&j) {
                    prefix.push(j);
                    go(n, prefix, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(n, &mut vec![i], &mut out);
        out
    }

    #[test]
    fn binder_count_matches_injective_sequence_oracle() {
        let expected = [1usize, 2, 5, 16, 65];
        for n in 1..=5 {
            let oracle = injective_sequences_from(n, 0).len();
            assert_eq!(oracle, expected[n - 1]);
            for i in 0..n {
                let tree = build_nested_expr(n, i).unwrap();
                assert_eq!(tree.count_mu(), oracle, "n={n} i={i}");
                assert_eq!(tree.count_mu(), injective_sequences_from(n, i).len());
            }
        }
    }

    /// Root-to-leaf binder paths are exactly the oracle's sequences, so no
    /// path binds a coordinate twice.
    #[test]
    fn binder_paths_are_repetition_free() {
        fn collect_paths(e: &MuExpr, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            match e {
                MuExpr::Mu(i, body) => {
                    assert!(!prefix.contains(i), "coordinate {i} rebound along a path");
                    prefix.push(*i);
                    out.push(prefix.clone());
                    collect_paths(body, prefix, out);
                    prefix.pop();
                }
                MuExpr::App(_, args) => {
                    for a in args {
                        collect_paths(a, prefix, out);
                    }
                }
                MuExpr::Var(_) | MuExpr::Hole(..) => {}
            }
        }
        for n in 1..=5 {
            for i in 0..n {
                let tree = build_nested_expr(n, i).unwrap();
                let mut paths = Vec::new();
                collect_paths(&tree, &mut Vec::new(), &mut paths);
                let mut oracle = injective_sequences_from(n, i);
                paths.sort();
                oracle.sort();
                assert_eq!(paths, oracle);
            }
        }
    }

    #[test]
    fn every_variable_occurs_under_its_binder() {
        fn check(e: &MuExpr, bound: &mut Vec<usize>) {
            match e {
                MuExpr::Mu(i, body) => {
                    bound.push(*i);
                    check(body, bound);
                    bound.pop();
                }
                MuExpr::App(_, args) => args.iter().for_each(|a| check(a, bound)),
                MuExpr::Var(j) => assert!(bound.contains(j), "free variable x{}", j + 1),
                MuExpr::Hole(..) => {}
            }
        }
        for n in 1..=5 {
            for i in 0..n {
                check(&build_nested_expr(n, i).unwrap(), &mut Vec::new());
            }
        }
    }

    #[test]
    fn printing_distinguishes_small_trees() {
        let mut printed = Vec::new();
        for n in 1..=3 {
            for i in 0..n {
                printed.push(print_expr(&build_nested_expr(n, i).unwrap()));
            }
        }
        for (a, s) in printed.iter().enumerate() {
            for t in &printed[a + 1..] {
                assert_ne!(s, t);
            }
        }
    }

    #[test]
    fn expansion_cap_reports_predicted_size() {
        assert_eq!(
            build_nested_expr(8, 0),
            Err(Error::ExpansionTooLarge {
                arity: 8,
                cap: 7,
                predicted: 13700,
            })
        );
        // raising the cap makes the same expansion buildable, and the
        // prediction matches the built tree
        let tree = build_nested_expr_capped(8, 0, 8).unwrap();
        assert_eq!(tree.count_mu(), 13700);
        assert_eq!(build_nested_expr_capped(7, 3, 7).unwrap().count_mu(), 1957);
    }

    #[test]
    fn eval_of_identity_base_case_is_bottom() {
        let c3 = chain(3);
        let f = VectorFn::from_terms(vec![c3.clone()], vec![Term::var(0)]).unwrap();
        let tree = build_nested_expr(1, 0).unwrap();
        assert_eq!(tree.eval_closed(&f).unwrap(), c3.bottom());
    }

    #[test]
    fn eval_agrees_with_nested_eval_on_all_n2_functions() {
        let c2 = chain(2);
        let domain = vec![c2.clone(), c2.clone()];
        let empty = BindingMap::empty(&domain).unwrap();
        for f in enumerate_monotone(&domain).unwrap() {
            for i in 0..2 {
                let tree = build_nested_expr(2, i).unwrap();
                assert_eq!(
                    tree.eval_closed(&f).unwrap(),
                    nested_eval(&f, i, &empty).unwrap()
                );
            }
        }
    }

    #[test]
    fn partial_bindings_become_holes() {
        let c2 = chain(2);
        let domain = vec![c2.clone(), c2.clone()];
        let b = BindingMap::empty(&domain)
            .unwrap()
            .set(1, c2.elem(1).unwrap())
            .unwrap();
        let tree = build_nested_expr_with(&b, 0).unwrap();
        assert_eq!(print_expr(&tree), "mu x1. f1(x1, <1>)");

        // evaluation of the partial expansion matches the semantic evaluator
        for seed in 0..20 {
            let f = random_monotone(&domain, seed).unwrap();
            assert_eq!(
                tree.eval_closed(&f).unwrap(),
                nested_eval(&f, 0, &b).unwrap()
            );
        }
    }

    #[test]
    fn eval_reports_unbound_variables() {
        let c2 = chain(2);
        let domain = vec![c2.clone(), c2.clone()];
        let f = random_monotone(&domain, 0).unwrap();
        let loose = MuExpr::Var(1);
        assert_eq!(
            loose.eval_closed(&f),
            Err(Error::UnboundVar { coord: 1 })
        );
    }
}

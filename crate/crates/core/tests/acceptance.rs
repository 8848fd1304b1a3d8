//! Acceptance suite: oracle-equivalence checks at desk scale.
//!
//! Each test covers one numbered criterion and prints a `PASS` line with
//! its statistics (visible with `--nocapture`). All equalities are exact:
//! elements are carrier indices, so there are no tolerances anywhere.

use mufix_core::{
    build_nested_expr, check_bekic, check_claim, check_shift_lemma, enumerate_fixpoints,
    enumerate_monotone, lfp_vector, nested_eval, print_expr, random_monotone, specialize,
    BindingMap, Elem, LatticeSpec, NestedEvaluator, VectorFn,
};

fn chain(k: usize) -> LatticeSpec {
    LatticeSpec::chain(k).unwrap()
}

fn uniform_domain(k: usize, n: usize) -> Vec<LatticeSpec> {
    vec![chain(k); n]
}

/// The 36 monotone functions on chain(2)^2, in enumeration order.
fn n2_instances() -> Vec<VectorFn> {
    enumerate_monotone(&uniform_domain(2, 2)).unwrap().collect()
}

/// The 8000 monotone functions on chain(2)^3, in enumeration order.
fn n3_instances() -> impl Iterator<Item = VectorFn> {
    enumerate_monotone(&uniform_domain(2, 3)).unwrap()
}

/// 500 seeded random monotone functions per criterion-3 population.
fn sampled_instances(k: usize, n: usize, count: u64) -> Vec<VectorFn> {
    let domain = uniform_domain(k, n);
    (0..count)
        .map(|seed| random_monotone(&domain, seed).unwrap())
        .collect()
}

/// Independent count of monotone scalar maps `chain(2)^n -> chain(2)`:
/// enumerate every raw table and filter by the all-pairs definition.
fn filtered_scalar_count(n: usize) -> usize {
    let domain = uniform_domain(2, n);
    let product = LatticeSpec::product_of(domain).unwrap();
    let size = product.carrier_size();
    let tuples: Vec<Vec<Elem>> = product
        .enumerate()
        .map(|e| e.components().unwrap())
        .collect();
    let leq = |a: &[Elem], b: &[Elem]| a.iter().zip(b).all(|(x, y)| x.leq(y).unwrap());
    let mut count = 0;
    for code in 0u32..1 << size {
        let out = |t: usize| (code >> t) & 1;
        let monotone = (0..size).all(|s| {
            (0..size).all(|t| !leq(&tuples[s], &tuples[t]) || out(s) <= out(t))
        });
        if monotone {
            count += 1;
        }
    }
    count
}

#[test]
fn criterion_01_exhaustive_n2_bekic() {
    assert_eq!(
        filtered_scalar_count(2),
        6,
        "criterion 1 FAIL: filtered enumeration oracle disagrees"
    );
    let instances = n2_instances();
    assert_eq!(
        instances.len(),
        36,
        "criterion 1 FAIL: expected 36 monotone functions on chain(2)^2"
    );
    for (idx, f) in instances.iter().enumerate() {
        let report = check_bekic(f).unwrap();
        assert!(
            report.all_equal(),
            "criterion 1 FAIL: function {idx} mismatch at coordinate {:?}",
            report.first_mismatch()
        );
    }
    println!("criterion 01 PASS: exhaustive n=2 (36/36 functions, both coordinates exact)");
}

#[test]
fn criterion_02_exhaustive_n3_bekic() {
    let mut total = 0usize;
    for (idx, f) in n3_instances().enumerate() {
        let report = check_bekic(&f).unwrap();
        assert!(
            report.all_equal(),
            "criterion 2 FAIL: function {idx} mismatch at coordinate {:?}",
            report.first_mismatch()
        );
        total += 1;
    }
    assert_eq!(
        total, 8000,
        "criterion 2 FAIL: expected 8000 monotone functions on chain(2)^3"
    );
    println!("criterion 02 PASS: exhaustive n=3 (8000/8000 functions, all coordinates exact)");
}

#[test]
fn criterion_03_sampled_n4_and_chain3() {
    for (idx, f) in sampled_instances(2, 4, 500).iter().enumerate() {
        let report = check_bekic(f).unwrap();
        assert!(
            report.all_equal(),
            "criterion 3 FAIL: chain(2)^4 seed {idx} mismatch at {:?}",
            report.first_mismatch()
        );
    }
    for (idx, f) in sampled_instances(3, 3, 500).iter().enumerate() {
        let report = check_bekic(f).unwrap();
        assert!(
            report.all_equal(),
            "criterion 3 FAIL: chain(3)^3 seed {idx} mismatch at {:?}",
            report.first_mismatch()
        );
    }
    println!("criterion 03 PASS: sampled n=4 and chain(3)^3 (500 + 500 seeded functions exact)");
}

/// Every binding map over `domain` that leaves coordinate `j` undefined:
/// each other coordinate is either undefined or bound to one of its
/// enumerated elements.
fn bindings_leaving_undef(domain: &[LatticeSpec], j: usize) -> Vec<BindingMap> {
    let mut out = vec![BindingMap::empty(domain).unwrap()];
    for (k, lattice) in domain.iter().enumerate() {
        if k == j {
            continue;
        }
        let mut grown = Vec::new();
        for b in &out {
            grown.push(b.clone());
            for v in lattice.enumerate() {
                grown.push(b.set(k, v).unwrap());
            }
        }
        out = grown;
    }
    out
}

fn shift_lemma_sweep<F>(fns: &[VectorFn], mut on_case: F) -> usize
where
    F: FnMut(&VectorFn, usize, usize, &BindingMap, &Elem) -> bool,
{
    let mut cases = 0usize;
    for f in fns {
        let n = f.arity();
        for j in 0..n {
            let bindings = bindings_leaving_undef(f.domain(), j);
            for i in (0..n).filter(|&i| i != j) {
                for b in &bindings {
                    for a in f.domain()[j].enumerate() {
                        assert!(
                            on_case(f, i, j, b, &a),
                            "criterion 4 FAIL: shift lemma broken at i={i} j={j}"
                        );
                        cases += 1;
                    }
                }
            }
        }
    }
    cases
}

#[test]
fn criterion_04_shift_lemma_both_branches() {
    // exhaustive on chain(2): every function, (i, j) pair, binding map
    // with j undefined, and element of L_j, for n = 2 and n = 3
    let via_checker =
        |f: &VectorFn, i: usize, j: usize, b: &BindingMap, a: &Elem| {
            check_shift_lemma(f, i, j, b, a).unwrap()
        };
    let c2n2 = shift_lemma_sweep(&n2_instances(), via_checker);
    assert_eq!(c2n2, 432);
    let all_n3: Vec<VectorFn> = n3_instances().collect();
    let c2n3 = shift_lemma_sweep(&all_n3, via_checker);
    assert_eq!(c2n3, 864_000);

    // sampled functions on chain(3), same exhaustive case structure
    let mut sampled = 0usize;
    for n in [2usize, 3] {
        let fns = sampled_instances(3, n, 40);
        sampled += shift_lemma_sweep(&fns, via_checker);
    }
    println!(
        "criterion 04 PASS: shift lemma exhaustive on chain(2) \
         ({c2n2} + {c2n3} cases) and sampled on chain(3) ({sampled} cases)"
    );
}

#[test]
fn criterion_05_claim_inequality() {
    let mut cases = 0usize;
    let mut run = |f: &VectorFn, tag: &str| {
        for i in 0..f.arity() {
            assert!(
                check_claim(f, i).unwrap(),
                "criterion 5 FAIL: claim inequality broken at coordinate {i} ({tag})"
            );
            cases += 1;
        }
    };
    for f in n2_instances() {
        run(&f, "n2");
    }
    for f in n3_instances() {
        run(&f, "n3");
    }
    for f in sampled_instances(2, 4, 500) {
        run(&f, "chain2^4");
    }
    for f in sampled_instances(3, 3, 500) {
        run(&f, "chain3^3");
    }
    println!("criterion 05 PASS: claim inequality on all criteria 1-3 instances ({cases} cases)");
}

#[test]
fn criterion_06_proof_path_tuple_is_a_fixpoint() {
    let run = |f: &VectorFn| {
        let n = f.arity();
        let evaluator = NestedEvaluator::new(f);
        let empty = BindingMap::empty(f.domain()).unwrap();
        let first = evaluator.eval(0, &empty).unwrap();
        let bound = empty.set(0, first.clone()).unwrap();
        let mut tuple = vec![first];
        for i in 1..n {
            tuple.push(evaluator.eval(i, &bound).unwrap());
        }
        assert_eq!(
            f.apply(&tuple).unwrap(),
            tuple,
            "criterion 6 FAIL: assembled tuple is not fixed"
        );
        assert!(
            enumerate_fixpoints(f).unwrap().contains(&tuple),
            "criterion 6 FAIL: tuple not in the brute-force fixpoint list"
        );
    };
    let mut count = 0usize;
    for f in n2_instances() {
        run(&f);
        count += 1;
    }
    for f in n3_instances() {
        run(&f);
        count += 1;
    }
    println!("criterion 06 PASS: proof-path tuple fixed for all {count} n=2 and n=3 instances");
}

fn normalize_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

#[test]
fn criterion_07_symbolic_golden_expressions() {
    let n3_first = "mu x1. f1(x1, mu x2. f2(x1, x2, mu x3. f3(x1, x2, x3)), \
                   mu x3. f3(x1, mu x2. f2(x1, x2, x3), x3))";
    assert_eq!(
        normalize_ws(&print_expr(&build_nested_expr(3, 0).unwrap())),
        normalize_ws(n3_first),
        "criterion 7 FAIL: n=3 first-coordinate expansion"
    );
    assert_eq!(
        normalize_ws(&print_expr(&build_nested_expr(2, 0).unwrap())),
        normalize_ws("mu x1. f1(x1, mu x2. f2(x1, x2))"),
        "criterion 7 FAIL: n=2 first coordinate"
    );
    assert_eq!(
        normalize_ws(&print_expr(&build_nested_expr(2, 1).unwrap())),
        normalize_ws("mu x2. f2(mu x1. f1(x1, x2), x2)"),
        "criterion 7 FAIL: n=2 second coordinate"
    );
    println!("criterion 07 PASS: symbolic expansions match the golden n=2 and n=3 expressions");
}

#[test]
fn criterion_08_binder_count_law() {
    // independent oracle: depth-first enumeration of repetition-free
    // coordinate sequences with a fixed first coordinate
    fn sequences(n: usize, prefix: &mut Vec<usize>, count: &mut usize) {
        *count += 1;
        for j in 0..n {
            if !prefix.contains(&j) {
                prefix.push(j);
                sequences(n, prefix, count);
                prefix.pop();
            }
        }
    }
    let frozen = [1usize, 2, 5, 16, 65];
    for n in 1..=5 {
        for i in 0..n {
            let mut oracle = 0usize;
            sequences(n, &mut vec![i], &mut oracle);
            assert_eq!(
                oracle,
                frozen[n - 1],
                "criterion 8 FAIL: oracle disagrees with frozen count at n={n}"
            );
            let built = build_nested_expr(n, i).unwrap().count_mu();
            assert_eq!(
                built, oracle,
                "criterion 8 FAIL: builder count at n={n} i={i}"
            );
        }
    }
    println!("criterion 08 PASS: binder counts 1, 2, 5, 16, 65 for every starting coordinate");
}

#[test]
fn criterion_09_syntax_semantics_differential() {
    let mut cases = 0usize;
    let mut run = |f: &VectorFn| {
        let n = f.arity();
        let empty = BindingMap::empty(f.domain()).unwrap();
        for i in 0..n {
            let tree = build_nested_expr(n, i).unwrap();
            assert_eq!(
                tree.eval_closed(f).unwrap(),
                nested_eval(f, i, &empty).unwrap(),
                "criterion 9 FAIL: syntax and semantics disagree at coordinate {i}"
            );
            cases += 1;
        }
    };
    for f in n2_instances() {
        run(&f);
    }
    // 100 sampled instances from the criterion-3 populations
    for f in sampled_instances(2, 4, 50) {
        run(&f);
    }
    for f in sampled_instances(3, 3, 50) {
        run(&f);
    }
    println!("criterion 09 PASS: expression evaluation matches nested evaluation ({cases} cases)");
}

#[test]
fn criterion_10_cache_soundness() {
    // criterion 1 without the memo cache, values compared against the
    // cached evaluator and the vectorial fixpoint
    for (idx, f) in n2_instances().iter().enumerate() {
        let lfp = lfp_vector(f, None).unwrap().value;
        let empty = BindingMap::empty(f.domain()).unwrap();
        let uncached = NestedEvaluator::without_cache(f);
        let cached = NestedEvaluator::new(f);
        for i in 0..f.arity() {
            let cold = uncached.eval(i, &empty).unwrap();
            assert_eq!(
                cold,
                cached.eval(i, &empty).unwrap(),
                "criterion 10 FAIL: cache changes the result (function {idx}, coordinate {i})"
            );
            assert_eq!(
                cold, lfp[i],
                "criterion 10 FAIL: uncached value differs from lfp (function {idx})"
            );
        }
    }

    // criterion 4 with both sides evaluated cache-free, still exhaustive
    let uncached_case = |f: &VectorFn, i: usize, j: usize, b: &BindingMap, a: &Elem| {
        let lhs = NestedEvaluator::without_cache(f)
            .eval(i, &b.set(j, a.clone()).unwrap())
            .unwrap();
        let g = specialize(f, j, a).unwrap();
        let shifted = b.shift(j).unwrap();
        let i_shifted = if i < j { i } else { i - 1 };
        let rhs = NestedEvaluator::without_cache(&g)
            .eval(i_shifted, &shifted)
            .unwrap();
        lhs == rhs && check_shift_lemma(f, i, j, b, a).unwrap()
    };
    let c2n2 = shift_lemma_sweep(&n2_instances(), uncached_case);
    let all_n3: Vec<VectorFn> = n3_instances().collect();
    let c2n3 = shift_lemma_sweep(&all_n3, uncached_case);
    for n in [2usize, 3] {
        shift_lemma_sweep(&sampled_instances(3, n, 40), uncached_case);
    }
    println!(
        "criterion 10 PASS: criteria 1 and 4 unchanged without the memo cache \
         ({c2n2} + {c2n3} chain(2) cases re-run)"
    );
}

//! Subcommand handlers. Each returns the text report, the JSON report, and
//! whether every executed check passed; the caller picks the output format
//! and maps failures to the exit code.

use std::path::Path;

use mufix_core::{
    build_nested_expr_capped, check_bekic, check_claim, check_shift_lemma, display_tuple,
    enumerate_monotone, lfp_vector, print_expr, random_monotone, BindingMap, Elem, LatticeSpec,
    NestedEvaluator, VectorFn, MAX_EXPANSION_ARITY,
};
use serde_json::{json, Value};

use crate::problem::{parse_problem, ProblemError};

pub struct Report {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

#[derive(Debug)]
pub enum AppError {
    Problem(ProblemError),
    Core(mufix_core::Error),
    Usage(String),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Problem(e) => write!(f, "{e}"),
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<ProblemError> for AppError {
    fn from(e: ProblemError) -> Self {
        AppError::Problem(e)
    }
}

impl From<mufix_core::Error> for AppError {
    fn from(e: mufix_core::Error) -> Self {
        AppError::Core(e)
    }
}

fn elem_strings(tuple: &[Elem]) -> Vec<String> {
    tuple.iter().map(|e| e.to_string()).collect()
}

fn problem_header(problem: &crate::problem::ProblemFile) -> String {
    let mut header = String::new();
    if let Some(desc) = &problem.description {
        header.push_str(&format!("problem: {desc}\n"));
    }
    header.push_str(&format!(
        "coordinates: {} ({})\n",
        problem.function.arity(),
        problem.coord_names.join(" ")
    ));
    header
}

pub fn solve(input: &Path) -> Result<Report, AppError> {
    let problem = parse_problem(input)?;
    let result = lfp_vector(&problem.function, None)?;
    let text = format!(
        "{}lfp: {}\niterations: {}\n",
        problem_header(&problem),
        display_tuple(&result.value),
        result.iterations
    );
    let json = json!({
        "coordinates": problem.function.arity(),
        "lfp": elem_strings(&result.value),
        "iterations": result.iterations,
    });
    Ok(Report { text, json, ok: true })
}

pub fn bekic(input: &Path, coordinate: Option<usize>) -> Result<Report, AppError> {
    let problem = parse_problem(input)?;
    let f = &problem.function;
    let n = f.arity();
    let coords: Vec<usize> = match coordinate {
        Some(c) => {
            if c == 0 || c > n {
                return Err(AppError::Usage(format!(
                    "--coordinate must be between 1 and {n}"
                )));
            }
            vec![c - 1]
        }
        None => (0..n).collect(),
    };
    let evaluator = NestedEvaluator::new(f);
    let empty = BindingMap::empty(f.domain())?;
    let mut text = problem_header(&problem);
    let mut nested = Vec::new();
    for &i in &coords {
        let value = evaluator.eval(i, &empty)?;
        text.push_str(&format!("nested x{} = {}\n", i + 1, value));
        nested.push(value.to_string());
    }
    let mut json = json!({
        "coordinates": n,
        "nested": nested,
    });
    if let Some(c) = coordinate {
        json["coordinate"] = json!(c);
    }
    Ok(Report { text, json, ok: true })
}

pub fn check(input: &Path) -> Result<Report, AppError> {
    let problem = parse_problem(input)?;
    let f = &problem.function;
    let n = f.arity();

    let report = check_bekic(f)?;
    let bekic_ok = report.all_equal();
    let lfp: Vec<Elem> = report.coords.iter().map(|c| c.lfp.clone()).collect();
    let nested: Vec<Elem> = report.coords.iter().map(|c| c.nested.clone()).collect();

    let mut claim = Vec::with_capacity(n);
    for i in 0..n {
        claim.push(check_claim(f, i)?);
    }
    let claim_ok = claim.iter().all(|&b| b);

    // shift lemma over every (i, j) pair from the empty binding map; the
    // bound element ranges over the whole coordinate lattice up to a cap
    let empty = BindingMap::empty(f.domain())?;
    let mut shift_cases = 0usize;
    let mut shift_failures = 0usize;
    for j in 0..n {
        for i in (0..n).filter(|&i| i != j) {
            for a in f.domain()[j].enumerate().take(16) {
                shift_cases += 1;
                if !check_shift_lemma(f, i, j, &empty, &a)? {
                    shift_failures += 1;
                }
            }
        }
    }
    let shift_ok = shift_failures == 0;
    let ok = bekic_ok && claim_ok && shift_ok;

    let mut text = format!(
        "{}lfp: {}\nnested: {}\n",
        problem_header(&problem),
        display_tuple(&lfp),
        display_tuple(&nested)
    );
    text.push_str(&format!(
        "bekic: {}\n",
        if bekic_ok { "PASS" } else { "FAIL" }
    ));
    if let Some(i) = report.first_mismatch() {
        text.push_str(&format!(
            "  first mismatch at x{}: lfp {} vs nested {}\n",
            i + 1,
            report.coords[i].lfp,
            report.coords[i].nested
        ));
    }
    text.push_str(&format!(
        "claim: {} ({n} coordinates)\n",
        if claim_ok { "PASS" } else { "FAIL" }
    ));
    text.push_str(&format!(
        "shift lemma: {} ({shift_cases} cases)\n",
        if shift_ok { "PASS" } else { "FAIL" }
    ));
    text.push_str(&format!("result: {}\n", if ok { "PASS" } else { "FAIL" }));

    let json = json!({
        "coordinates": n,
        "lfp": elem_strings(&lfp),
        "nested": elem_strings(&nested),
        "equal": bekic_ok,
        "iterations": report.iterations,
        "claim": claim,
        "shift_lemma": { "cases": shift_cases, "failures": shift_failures },
        "pass": ok,
    });
    Ok(Report { text, json, ok })
}

pub fn expr(arity: usize, coordinate: usize, max_arity: Option<usize>) -> Result<Report, AppError> {
    if coordinate == 0 || coordinate > arity {
        return Err(AppError::Usage(format!(
            "--coordinate must be between 1 and {arity}"
        )));
    }
    let cap = max_arity.unwrap_or(MAX_EXPANSION_ARITY);
    let tree = build_nested_expr_capped(arity, coordinate - 1, cap)?;
    let printed = print_expr(&tree);
    let count = tree.count_mu();
    let text = format!("{printed}\nmu_count: {count}\n");
    let json = json!({
        "coordinates": arity,
        "coordinate": coordinate,
        "expr": printed,
        "mu_count": count,
    });
    Ok(Report { text, json, ok: true })
}

/// Parses sweep lattice tokens like `chain2` or `powerset3`.
fn parse_lattice_token(token: &str) -> Result<LatticeSpec, AppError> {
    let (kind, digits) = token.split_at(
        token
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| AppError::Usage(format!("malformed lattice `{token}`")))?,
    );
    let size: usize = digits
        .parse()
        .map_err(|_| AppError::Usage(format!("malformed lattice `{token}`")))?;
    match kind {
        "chain" => Ok(LatticeSpec::chain(size)?),
        "powerset" => Ok(LatticeSpec::powerset(size as u32)?),
        _ => Err(AppError::Usage(format!(
            "unknown lattice `{token}` (expected chain<k> or powerset<m>)"
        ))),
    }
}

pub enum SweepPlan {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

pub fn sweep(lattice: &str, arity: usize, plan: SweepPlan) -> Result<Report, AppError> {
    if arity == 0 {
        return Err(AppError::Usage("--arity must be at least 1".into()));
    }
    let base = parse_lattice_token(lattice)?;
    let domain = vec![base; arity];

    let mut total = 0usize;
    let mut failed: Vec<String> = Vec::new();
    let mut run = |f: &VectorFn, label: String| -> Result<(), AppError> {
        total += 1;
        let report = check_bekic(f)?;
        if !report.all_equal() {
            failed.push(label);
        }
        Ok(())
    };
    match plan {
        SweepPlan::Exhaustive => {
            for (idx, f) in enumerate_monotone(&domain)?.enumerate() {
                run(&f, format!("function {idx}"))?;
            }
        }
        SweepPlan::Sampled { samples, seed } => {
            for s in seed..seed + samples {
                let f = random_monotone(&domain, s)?;
                run(&f, format!("seed {s}"))?;
            }
        }
    }

    let passed = total - failed.len();
    let ok = failed.is_empty();
    let mut text = format!("lattice: {lattice}\narity: {arity}\n");
    for label in failed.iter().take(10) {
        text.push_str(&format!("FAIL: {label}\n"));
    }
    text.push_str(&format!("{passed}/{total} pass\n"));
    let json = json!({
        "lattice": lattice,
        "coordinates": arity,
        "total": total,
        "passed": passed,
        "failed": failed.len(),
        "equal": ok,
    });
    Ok(Report { text, json, ok })
}

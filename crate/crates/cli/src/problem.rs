//! Line-oriented problem files: named lattice declarations, a coordinate
//! list, and a function given either as explicit table rows or as one term
//! per coordinate.
//!
//! ```text
//! # a 2-coordinate swap
//! desc swap the two coordinates
//! lattice c2 = chain 2
//! coords c2 c2
//! mode table
//! (0,0) -> (0,0)
//! (0,1) -> (1,0)
//! (1,0) -> (0,1)
//! (1,1) -> (1,1)
//! ```
//!
//! Elements are written per lattice encoding: a chain element is its
//! height, a powerset element a brace-set of atoms such as `{0,2}`. Terms
//! mode (`f1 = join(x1, const(0))`) requires all coordinates to share one
//! lattice; table mode allows heterogeneous coordinates.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;

use mufix_core::{Elem, LatticeKind, LatticeSpec, Term, VectorFn};

/// A parsed and validated problem.
#[derive(Debug)]
pub struct ProblemFile {
    pub description: Option<String>,
    pub coord_names: Vec<String>,
    pub function: VectorFn,
}

#[derive(Debug)]
pub enum ProblemError {
    Io(String),
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    /// Whole-file validation failures: incomplete or duplicate tables,
    /// non-monotone functions (with witness), ill-typed terms.
    Invalid(mufix_core::Error),
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemError::Io(msg) => write!(f, "{msg}"),
            ProblemError::Syntax { line, col, message } => {
                write!(f, "line {line}, column {col}: {message}")
            }
            ProblemError::Invalid(err) => write!(f, "{err}"),
        }
    }
}

impl std::error::Error for ProblemError {}

impl From<mufix_core::Error> for ProblemError {
    fn from(err: mufix_core::Error) -> Self {
        ProblemError::Invalid(err)
    }
}

pub fn parse_problem(path: &Path) -> Result<ProblemFile, ProblemError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ProblemError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_problem_str(&text)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line_no: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line_no: usize) -> Self {
        Cursor { text, pos: 0, line_no }
    }

    fn err(&self, message: impl Into<String>) -> ProblemError {
        ProblemError::Syntax {
            line: self.line_no,
            col: self.pos + 1,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn done(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn eat(&mut self, token: &str) -> Result<(), ProblemError> {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.err(format!("expected `{token}`")))
        }
    }

    fn parse_usize(&mut self) -> Result<usize, ProblemError> {
        self.skip_ws();
        let digits: &str = {
            let rest = self.rest();
            let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            &rest[..end]
        };
        if digits.is_empty() {
            return Err(self.err("expected a number"));
        }
        let value = digits
            .parse::<usize>()
            .map_err(|_| self.err("number out of range"))?;
        self.pos += digits.len();
        Ok(value)
    }

    fn parse_ident(&mut self) -> Result<&'a str, ProblemError> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(self.err("expected a name"));
        }
        self.pos += end;
        Ok(&rest[..end])
    }

    fn expect_end(&mut self) -> Result<(), ProblemError> {
        if self.done() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

fn parse_elem(cur: &mut Cursor, lattice: &LatticeSpec) -> Result<Elem, ProblemError> {
    cur.skip_ws();
    match lattice.kind() {
        LatticeKind::Chain(k) => {
            let at = cur.pos;
            let v = cur.parse_usize()?;
            lattice.elem(v).map_err(|_| {
                cur.pos = at;
                cur.err(format!("element {v} out of range for chain {k}"))
            })
        }
        LatticeKind::Powerset(m) => {
            cur.eat("{")?;
            let mut mask = 0usize;
            cur.skip_ws();
            if !cur.rest().starts_with('}') {
                loop {
                    let at = cur.pos;
                    let atom = cur.parse_usize()?;
                    if atom as u32 >= *m {
                        cur.pos = at;
                        return Err(cur.err(format!("atom {atom} out of range for powerset {m}")));
                    }
                    mask |= 1 << atom;
                    cur.skip_ws();
                    if cur.rest().starts_with(',') {
                        cur.eat(",")?;
                    } else {
                        break;
                    }
                }
            }
            cur.eat("}")?;
            Ok(lattice.elem(mask).expect("mask within carrier"))
        }
        LatticeKind::Product(_) => Err(cur.err("product elements are not supported in files")),
    }
}

fn parse_tuple(cur: &mut Cursor, domain: &[LatticeSpec]) -> Result<Vec<Elem>, ProblemError> {
    cur.eat("(")?;
    let mut out = Vec::with_capacity(domain.len());
    for (j, lattice) in domain.iter().enumerate() {
        if j > 0 {
            cur.eat(",")?;
        }
        out.push(parse_elem(cur, lattice)?);
    }
    cur.eat(")")?;
    Ok(out)
}

fn parse_term(cur: &mut Cursor, lattice: &LatticeSpec, arity: usize) -> Result<Term, ProblemError> {
    cur.skip_ws();
    let at = cur.pos;
    let ident = cur.parse_ident()?;
    if let Some(digits) = ident.strip_prefix('x') {
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            let idx: usize = digits.parse().map_err(|_| cur.err("coordinate out of range"))?;
            if idx == 0 || idx > arity {
                cur.pos = at;
                return Err(cur.err(format!("coordinate x{idx} out of range for arity {arity}")));
            }
            return Ok(Term::var(idx - 1));
        }
    }
    match ident {
        "const" => {
            cur.eat("(")?;
            let e = parse_elem(cur, lattice)?;
            cur.eat(")")?;
            Ok(Term::constant(e))
        }
        "join" | "meet" => {
            cur.eat("(")?;
            let a = parse_term(cur, lattice, arity)?;
            cur.eat(",")?;
            let b = parse_term(cur, lattice, arity)?;
            cur.eat(")")?;
            Ok(if ident == "join" {
                Term::join(a, b)
            } else {
                Term::meet(a, b)
            })
        }
        other => {
            cur.pos = at;
            Err(cur.err(format!(
                "expected a term (x<i>, const, join, meet), found `{other}`"
            )))
        }
    }
}

#[derive(PartialEq)]
enum Mode {
    Header,
    Table,
    Terms,
}

pub fn parse_problem_str(text: &str) -> Result<ProblemFile, ProblemError> {
    let mut lattices: HashMap<String, LatticeSpec> = HashMap::new();
    let mut description = None;
    let mut coord_names: Vec<String> = Vec::new();
    let mut domain: Vec<LatticeSpec> = Vec::new();
    let mut mode = Mode::Header;
    let mut rows: Vec<(Vec<Elem>, Vec<Elem>)> = Vec::new();
    let mut terms: Vec<Option<Term>> = Vec::new();
    let mut last_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = match raw.find('#') {
            Some(at) => &raw[..at],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(content, line_no);

        if mode == Mode::Table && content.trim_start().starts_with('(') {
            let input = parse_tuple(&mut cur, &domain)?;
            cur.eat("->")?;
            let output = parse_tuple(&mut cur, &domain)?;
            cur.expect_end()?;
            rows.push((input, output));
            continue;
        }

        let keyword_at = {
            cur.skip_ws();
            cur.pos
        };
        let keyword = cur.parse_ident()?;
        match keyword {
            "desc" => {
                description = Some(content[cur.pos..].trim().to_string());
            }
            "lattice" => {
                let name = cur.parse_ident()?.to_string();
                cur.eat("=")?;
                let kind_at = {
                    cur.skip_ws();
                    cur.pos
                };
                let kind = cur.parse_ident()?;
                let size = cur.parse_usize()?;
                cur.expect_end()?;
                let spec = match kind {
                    "chain" => LatticeSpec::chain(size)?,
                    "powerset" => LatticeSpec::powerset(size as u32)?,
                    other => {
                        cur.pos = kind_at;
                        return Err(cur.err(format!(
                            "unknown lattice kind `{other}` (expected chain or powerset)"
                        )));
                    }
                };
                if lattices.insert(name.clone(), spec).is_some() {
                    return Err(cur.err(format!("lattice `{name}` declared twice")));
                }
            }
            "coords" => {
                if !coord_names.is_empty() {
                    return Err(cur.err("coords declared twice"));
                }
                while !cur.done() {
                    let name_at = cur.pos;
                    let name = cur.parse_ident()?;
                    match lattices.get(name) {
                        Some(spec) => {
                            coord_names.push(name.to_string());
                            domain.push(spec.clone());
                        }
                        None => {
                            cur.pos = name_at;
                            return Err(cur.err(format!("unknown lattice `{name}`")));
                        }
                    }
                }
                if domain.is_empty() {
                    return Err(cur.err("coords needs at least one coordinate"));
                }
            }
            "mode" => {
                if domain.is_empty() {
                    return Err(cur.err("mode must come after coords"));
                }
                let which_at = {
                    cur.skip_ws();
                    cur.pos
                };
                let which = cur.parse_ident()?;
                cur.expect_end()?;
                mode = match which {
                    "table" => Mode::Table,
                    "terms" => {
                        if domain.iter().any(|l| l != &domain[0]) {
                            cur.pos = which_at;
                            return Err(cur.err(
                                "terms mode requires all coordinates to share one lattice",
                            ));
                        }
                        terms = vec![None; domain.len()];
                        Mode::Terms
                    }
                    other => {
                        cur.pos = which_at;
                        return Err(cur.err(format!(
                            "unknown mode `{other}` (expected table or terms)"
                        )));
                    }
                };
            }
            other if mode == Mode::Terms => {
                let coord = other
                    .strip_prefix('f')
                    .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                    .and_then(|d| d.parse::<usize>().ok());
                let coord = match coord {
                    Some(c) if c >= 1 && c <= domain.len() => c - 1,
                    _ => {
                        cur.pos = keyword_at;
                        return Err(cur.err(format!(
                            "expected f1..f{} on the left-hand side",
                            domain.len()
                        )));
                    }
                };
                cur.eat("=")?;
                let term = parse_term(&mut cur, &domain[0], domain.len())?;
                cur.expect_end()?;
                if terms[coord].is_some() {
                    cur.pos = keyword_at;
                    return Err(cur.err(format!("f{} defined twice", coord + 1)));
                }
                terms[coord] = Some(term);
            }
            other => {
                cur.pos = keyword_at;
                return Err(cur.err(format!("unexpected `{other}`")));
            }
        }
    }

    let eof = |message: &str| ProblemError::Syntax {
        line: last_line + 1,
        col: 1,
        message: message.to_string(),
    };

    let function = match mode {
        Mode::Header => return Err(eof("missing `mode table` or `mode terms`")),
        Mode::Table => VectorFn::from_rows(domain, &rows)?,
        Mode::Terms => {
            if let Some(missing) = terms.iter().position(Option::is_none) {
                return Err(eof(&format!("missing definition for f{}", missing + 1)));
            }
            VectorFn::from_terms(domain, terms.into_iter().map(Option::unwrap).collect())?
        }
    };

    Ok(ProblemFile {
        description,
        coord_names,
        function,
    })
}

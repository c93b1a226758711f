//! CNF data model: literals, normalized clauses, DIMACS reading/writing and
//! evaluation against explicit assignments.
//!
//! Variables are 1-based throughout (`x1..xt`). A [`Clause`] keeps its positive
//! and negative variables apart, both sorted and duplicate-free, and never
//! mentions a variable with both signs.

use std::fmt;

use thiserror::Error;

/// Errors raised while reading DIMACS text or building formulas.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected `p cnf <vars> <clauses>`")]
    BadHeader { line: usize },
    #[error("line {line}: duplicate `p` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: clause data before `p cnf` header")]
    MissingHeader { line: usize },
    #[error("no `p cnf` header found")]
    NoHeader,
    #[error("line {line}: invalid literal `{token}`")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: variable {var} exceeds declared count {t}")]
    VarOutOfRange { line: usize, var: usize, t: usize },
    #[error("clause is not terminated by 0 at end of input")]
    UnterminatedClause,
}

/// Errors from formula-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("assignment has length {got}, formula has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("variable {var} exceeds variable count {t}")]
    VarOutOfRange { var: usize, t: usize },
    #[error("variable index 0 is not allowed")]
    ZeroVar,
    #[error("clause mentions variable {0} with both signs")]
    Tautology(usize),
    #[error("clause has no literals")]
    EmptyClause,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub sign: Sign,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, sign: Sign::Positive }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, sign: Sign::Negative }
    }

    /// Builds a literal from a signed DIMACS integer. Returns `None` for 0.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        match lit {
            0 => None,
            l if l > 0 => Some(Literal::pos(l as usize)),
            l => Some(Literal::neg(l.unsigned_abs() as usize)),
        }
    }

    pub fn to_dimacs(self) -> i64 {
        match self.sign {
            Sign::Positive => self.var as i64,
            Sign::Negative => -(self.var as i64),
        }
    }
}

/// A disjunction of literals split into positive and negative variable sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pos: Vec<usize>,
    neg: Vec<usize>,
}

/// Outcome of [`normalize_clause`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    Clause(Clause),
    Tautology,
    Empty,
}

/// Dedupes literals and classifies the result.
pub fn normalize_clause(raw: &[Literal]) -> Normalized {
    let mut pos: Vec<usize> = Vec::new();
    let mut neg: Vec<usize> = Vec::new();
    for lit in raw {
        match lit.sign {
            Sign::Positive => pos.push(lit.var),
            Sign::Negative => neg.push(lit.var),
        }
    }
    pos.sort_unstable();
    pos.dedup();
    neg.sort_unstable();
    neg.dedup();
    if pos.is_empty() && neg.is_empty() {
        return Normalized::Empty;
    }
    if intersects(&pos, &neg) {
        return Normalized::Tautology;
    }
    Normalized::Clause(Clause { pos, neg })
}

fn intersects(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

impl Clause {
    /// Builds a clause from positive and negative variable lists. Duplicates are
    /// dropped; a variable on both sides or an empty literal set is an error.
    pub fn new(
        pos: impl IntoIterator<Item = usize>,
        neg: impl IntoIterator<Item = usize>,
    ) -> Result<Self, FormulaError> {
        let lits: Vec<Literal> = pos
            .into_iter()
            .map(Literal::pos)
            .chain(neg.into_iter().map(Literal::neg))
            .collect();
        if lits.iter().any(|l| l.var == 0) {
            return Err(FormulaError::ZeroVar);
        }
        match normalize_clause(&lits) {
            Normalized::Clause(c) => Ok(c),
            Normalized::Empty => Err(FormulaError::EmptyClause),
            Normalized::Tautology => {
                let v = lits
                    .iter()
                    .find(|l| {
                        l.sign == Sign::Positive
                            && lits.iter().any(|m| m.var == l.var && m.sign == Sign::Negative)
                    })
                    .map(|l| l.var)
                    .unwrap_or(0);
                Err(FormulaError::Tautology(v))
            }
        }
    }

    /// Variables occurring positively, ascending.
    pub fn pos(&self) -> &[usize] {
        &self.pos
    }

    /// Variables occurring negatively, ascending.
    pub fn neg(&self) -> &[usize] {
        &self.neg
    }

    pub fn len(&self) -> usize {
        self.pos.len() + self.neg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.neg.is_empty()
    }

    pub fn is_negative(&self) -> bool {
        self.pos.is_empty()
    }

    pub fn max_var(&self) -> usize {
        self.pos.last().copied().unwrap_or(0).max(self.neg.last().copied().unwrap_or(0))
    }

    /// Literals in DIMACS order: positives then negatives.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.pos
            .iter()
            .map(|&v| Literal::pos(v))
            .chain(self.neg.iter().map(|&v| Literal::neg(v)))
    }

    /// Evaluates the clause on a bit slice where `bits[i - 1]` is `x_i`.
    pub fn satisfied_by(&self, bits: &[bool]) -> bool {
        self.pos.iter().any(|&v| bits[v - 1]) || self.neg.iter().any(|&v| !bits[v - 1])
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for lit in self.literals() {
            if !first {
                f.write_str(" v ")?;
            }
            first = false;
            match lit.sign {
                Sign::Positive => write!(f, "x{}", lit.var)?,
                Sign::Negative => write!(f, "-x{}", lit.var)?,
            }
        }
        Ok(())
    }
}

/// A conjunction of clauses over `t` variables.
///
/// An empty clause in the source marks the formula unsatisfiable rather than
/// being stored as a clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    t: usize,
    clauses: Vec<Clause>,
    unsat: bool,
    original_clauses: usize,
    tautologies: usize,
}

impl Cnf {
    pub fn new(t: usize, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        if let Some(c) = clauses.iter().find(|c| c.max_var() > t) {
            return Err(FormulaError::VarOutOfRange { var: c.max_var(), t });
        }
        let original_clauses = clauses.len();
        Ok(Cnf { t, clauses, unsat: false, original_clauses, tautologies: 0 })
    }

    /// Parses a compact literal notation, one clause per slice, DIMACS signs.
    /// Tautologies are dropped and an empty slice marks the formula unsatisfiable.
    pub fn from_dimacs_clauses(t: usize, raw: &[&[i64]]) -> Result<Self, FormulaError> {
        let mut cnf = Cnf { t, clauses: Vec::new(), unsat: false, original_clauses: 0, tautologies: 0 };
        for lits in raw {
            let lits: Vec<Literal> = lits.iter().filter_map(|&l| Literal::from_dimacs(l)).collect();
            if let Some(l) = lits.iter().find(|l| l.var > t) {
                return Err(FormulaError::VarOutOfRange { var: l.var, t });
            }
            cnf.push_normalized(normalize_clause(&lits));
        }
        Ok(cnf)
    }

    fn push_normalized(&mut self, n: Normalized) {
        self.original_clauses += 1;
        match n {
            Normalized::Clause(c) => self.clauses.push(c),
            Normalized::Tautology => self.tautologies += 1,
            Normalized::Empty => self.unsat = true,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.t
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// True when the source contained an empty clause.
    pub fn is_trivially_unsat(&self) -> bool {
        self.unsat
    }

    /// Clause count as read from the source, before tautologies were dropped.
    pub fn original_clause_count(&self) -> usize {
        self.original_clauses
    }

    pub fn dropped_tautologies(&self) -> usize {
        self.tautologies
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, FormulaError> {
        if a.len() != self.t {
            return Err(FormulaError::LengthMismatch { expected: self.t, got: a.len() });
        }
        Ok(!self.unsat && self.clauses.iter().all(|c| c.satisfied_by(a.bits())))
    }

    /// Renders DIMACS text. The leading comment records the source clause count
    /// and the number of dropped tautologies.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!(
            "c original_clauses={} dropped_tautologies={}\n",
            self.original_clauses, self.tautologies
        );
        let count = self.clauses.len() + usize::from(self.unsat);
        out.push_str(&format!("p cnf {} {}\n", self.t, count));
        for c in &self.clauses {
            for lit in c.literals() {
                out.push_str(&lit.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        if self.unsat {
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF text.
///
/// Comment lines start with `c`; a `%` line ends the input (SATLIB style).
/// Clauses may span lines and are terminated by `0`.
pub fn parse_dimacs(text: &str) -> Result<Cnf, ParseError> {
    let mut cnf: Option<Cnf> = None;
    let mut current: Vec<Literal> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if cnf.is_some() {
                return Err(ParseError::DuplicateHeader { line: line_no });
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(ParseError::BadHeader { line: line_no });
            }
            let t: usize = fields[2].parse().map_err(|_| ParseError::BadHeader { line: line_no })?;
            let _: usize = fields[3].parse().map_err(|_| ParseError::BadHeader { line: line_no })?;
            cnf = Some(Cnf { t, clauses: Vec::new(), unsat: false, original_clauses: 0, tautologies: 0 });
            continue;
        }
        let Some(cnf) = cnf.as_mut() else {
            return Err(ParseError::MissingHeader { line: line_no });
        };
        for token in line.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| ParseError::BadLiteral {
                line: line_no,
                token: token.to_string(),
            })?;
            match Literal::from_dimacs(value) {
                None => cnf.push_normalized(normalize_clause(&std::mem::take(&mut current))),
                Some(lit) => {
                    if lit.var > cnf.t {
                        return Err(ParseError::VarOutOfRange { line: line_no, var: lit.var, t: cnf.t });
                    }
                    current.push(lit);
                }
            }
        }
    }

    let cnf = cnf.ok_or(ParseError::NoHeader)?;
    if !current.is_empty() {
        return Err(ParseError::UnterminatedClause);
    }
    Ok(cnf)
}

/// A full assignment to `x1..xt`; `bits()[i - 1]` holds `x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// Parses a `0`/`1` string such as `"0110"`.
    pub fn from_bitstring(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Assignment::new)
    }

    /// Decodes a lexicographic index: `x1` is the most significant bit.
    pub fn from_index(index: u64, t: usize) -> Self {
        assert!(t <= 64);
        Assignment { bits: (1..=t).map(|i| (index >> (t - i)) & 1 == 1).collect() }
    }

    /// Inverse of [`Assignment::from_index`]; `t` must be at most 64.
    pub fn to_index(&self) -> u64 {
        assert!(self.bits.len() <= 64);
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Value of variable `var` (1-based).
    pub fn get(&self, var: usize) -> bool {
        self.bits[var - 1]
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

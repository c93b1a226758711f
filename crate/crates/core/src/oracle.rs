//! Brute-force ground truth over all `2^t` assignments.
//!
//! Assignments are indexed lexicographically (`x1` is the most significant
//! bit) and model sets are plain bitsets, so this only works for small `t`.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{Assignment, Cnf};
use crate::row::Row;

pub const DEFAULT_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{t} variables exceed the oracle limit of {limit}")]
    TooManyVars { t: usize, limit: usize },
    #[error("row length {row} does not match formula length {t}")]
    LengthMismatch { row: usize, t: usize },
}

/// A set of assignments over `t` variables, one bit per assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSet {
    t: usize,
    words: Vec<u64>,
}

impl ModelSet {
    pub fn empty(t: usize) -> Self {
        let n = 1usize << t;
        ModelSet { t, words: vec![0; n.div_ceil(64)] }
    }

    pub fn num_vars(&self) -> usize {
        self.t
    }

    pub fn insert(&mut self, index: u64) -> bool {
        let (w, b) = ((index / 64) as usize, index % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, index: u64) -> bool {
        self.words[(index / 64) as usize] & (1 << (index % 64)) != 0
    }

    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w as u64 * 64 + b)
        })
    }

    /// First index in `self` but not in `other`.
    pub fn first_missing_from(&self, other: &ModelSet) -> Option<u64> {
        self.words.iter().zip(&other.words).enumerate().find_map(|(w, (a, b))| {
            let diff = a & !b;
            (diff != 0).then(|| w as u64 * 64 + u64::from(diff.trailing_zeros()))
        })
    }
}

fn check_limit(t: usize, limit: usize) -> Result<(), OracleError> {
    if t > limit || t > 32 {
        return Err(OracleError::TooManyVars { t, limit: limit.min(32) });
    }
    Ok(())
}

/// Mod(cnf) by exhaustive evaluation.
pub fn brute_models(cnf: &Cnf, limit: usize) -> Result<ModelSet, OracleError> {
    let t = cnf.num_vars();
    check_limit(t, limit)?;
    let mut set = ModelSet::empty(t);
    if cnf.is_trivially_unsat() {
        return Ok(set);
    }
    let bit = |v: usize| 1u64 << (t - v);
    let masks: Vec<(u64, u64)> = cnf
        .clauses()
        .iter()
        .map(|c| (c.pos().iter().map(|&v| bit(v)).sum(), c.neg().iter().map(|&v| bit(v)).sum()))
        .collect();
    for index in 0..1u64 << t {
        if masks.iter().all(|&(pos, neg)| index & pos != 0 || !index & neg != 0) {
            set.insert(index);
        }
    }
    Ok(set)
}

/// Outcome of checking a row list against the model set of a formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub disjoint: bool,
    /// First overlapping pair of row indices (0-based) and a shared member.
    #[serde(serialize_with = "ser_overlap")]
    pub overlap: Option<(usize, usize, Assignment)>,
    pub covered: bool,
    /// A model of the formula no row holds.
    #[serde(serialize_with = "ser_assignment")]
    pub missing: Option<Assignment>,
    /// A row member that is not a model.
    #[serde(serialize_with = "ser_assignment")]
    pub extra: Option<Assignment>,
    #[serde(serialize_with = "ser_big")]
    pub oracle_count: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub solver_count: BigUint,
}

fn ser_big<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

fn ser_assignment<S: serde::Serializer>(a: &Option<Assignment>, s: S) -> Result<S::Ok, S::Error> {
    match a {
        Some(a) => s.serialize_str(&a.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_overlap<S: serde::Serializer>(o: &Option<(usize, usize, Assignment)>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Overlap {
        first: usize,
        second: usize,
        member: String,
    }
    match o {
        Some((first, second, a)) => {
            Overlap { first: *first, second: *second, member: a.to_string() }.serialize(s)
        }
        None => s.serialize_none(),
    }
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.disjoint && self.covered && self.oracle_count == self.solver_count
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = serde_json::Value::Bool(self.passed());
        v
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "disjoint={}", self.disjoint)?;
        if let Some((i, j, a)) = &self.overlap {
            writeln!(f, "overlap=rows {} and {} share {}", i + 1, j + 1, a)?;
        }
        writeln!(f, "covered={}", self.covered)?;
        if let Some(a) = &self.missing {
            writeln!(f, "missing={a}")?;
        }
        if let Some(a) = &self.extra {
            writeln!(f, "extra={a}")?;
        }
        writeln!(f, "oracle_count={}", self.oracle_count)?;
        writeln!(f, "solver_count={}", self.solver_count)?;
        write!(f, "result={}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Checks that `rows` are pairwise disjoint and that their union is exactly
/// Mod(cnf).
pub fn check_partition(rows: &[Row], cnf: &Cnf, limit: usize) -> Result<VerifyReport, OracleError> {
    let t = cnf.num_vars();
    check_limit(t, limit)?;
    if let Some(r) = rows.iter().find(|r| r.len() != t) {
        return Err(OracleError::LengthMismatch { row: r.len(), t });
    }
    let models = brute_models(cnf, limit)?;
    let mut union = ModelSet::empty(t);
    let mut overlap = None;
    for (j, row) in rows.iter().enumerate() {
        for index in row.member_indices() {
            if !union.insert(index) && overlap.is_none() {
                let a = Assignment::from_index(index, t);
                let i = rows[..j].iter().position(|r| r.contains(&a).unwrap_or(false)).expect("earlier owner");
                overlap = Some((i, j, a));
            }
        }
    }
    let missing = models.first_missing_from(&union).map(|i| Assignment::from_index(i, t));
    let extra = union.first_missing_from(&models).map(|i| Assignment::from_index(i, t));
    Ok(VerifyReport {
        disjoint: overlap.is_none(),
        overlap,
        covered: missing.is_none() && extra.is_none(),
        missing,
        extra,
        oracle_count: BigUint::from(models.len()),
        solver_count: rows.iter().map(Row::cardinality).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed_example() -> Cnf {
        Cnf::from_dimacs_clauses(
            10,
            &[
                &[-1, -2, -3],
                &[4, 5, 6, 7],
                &[-8, -9, -10],
                &[-2, -3, -4, -5, 6, 7, 8, 9],
                &[1, -3, -4, -6, -7],
            ],
        )
        .unwrap()
    }

    #[test]
    fn mu2_models() {
        let mu2 = Cnf::from_dimacs_clauses(2, &[&[1, 2], &[-1, -2]]).unwrap();
        let m = brute_models(&mu2, DEFAULT_LIMIT).unwrap();
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![0b01, 0b10]);
    }

    #[test]
    fn mixed_example_count() {
        assert_eq!(brute_models(&mixed_example(), DEFAULT_LIMIT).unwrap().len(), 705);
    }

    #[test]
    fn limit_is_enforced() {
        let cnf = Cnf::new(25, vec![]).unwrap();
        assert_eq!(brute_models(&cnf, 24), Err(OracleError::TooManyVars { t: 25, limit: 24 }));
        assert!(check_partition(&[], &Cnf::new(10, vec![]).unwrap(), 8).is_err());
    }

    #[test]
    fn detects_overlap() {
        let cnf = Cnf::from_dimacs_clauses(2, &[&[1, 2]]).unwrap();
        let rows: Vec<Row> = vec!["1 2".parse().unwrap(), "2 1".parse().unwrap()];
        let report = check_partition(&rows, &cnf, DEFAULT_LIMIT).unwrap();
        assert!(!report.disjoint);
        assert_eq!(report.overlap, Some((0, 1, Assignment::from_bitstring("11").unwrap())));
        assert!(report.covered);
        assert!(!report.passed());
        assert_eq!(report.solver_count, BigUint::from(4u32));
        assert_eq!(report.oracle_count, BigUint::from(3u32));
    }

    #[test]
    fn detects_missing_and_extra() {
        let cnf = Cnf::from_dimacs_clauses(2, &[&[1, 2]]).unwrap();
        let report = check_partition(&["1 2".parse().unwrap()], &cnf, DEFAULT_LIMIT).unwrap();
        assert_eq!(report.missing.as_ref().map(ToString::to_string), Some("01".into()));
        assert!(!report.covered);
        let report = check_partition(&["2 2".parse().unwrap()], &cnf, DEFAULT_LIMIT).unwrap();
        assert_eq!(report.extra.as_ref().map(ToString::to_string), Some("00".into()));
    }

    #[test]
    fn empty_rows_cover_unsat_formula() {
        let cnf = Cnf::from_dimacs_clauses(2, &[&[1], &[-1]]).unwrap();
        let report = check_partition(&[], &cnf, DEFAULT_LIMIT).unwrap();
        assert!(report.covered && report.disjoint && report.passed());
        let marked = Cnf::from_dimacs_clauses(2, &[&[]]).unwrap();
        assert!(check_partition(&[], &marked, DEFAULT_LIMIT).unwrap().passed());
    }

    #[test]
    fn report_renders() {
        let cnf = Cnf::from_dimacs_clauses(2, &[&[1, 2]]).unwrap();
        let rows: Vec<Row> = vec!["1 2".parse().unwrap(), "0 1".parse().unwrap()];
        let report = check_partition(&rows, &cnf, DEFAULT_LIMIT).unwrap();
        assert_eq!(
            report.to_string(),
            "disjoint=true\ncovered=true\noracle_count=3\nsolver_count=3\nresult=PASS"
        );
        let json = report.to_json();
        assert_eq!(json["passed"], true);
        assert_eq!(json["oracle_count"], "3");
        assert!(json["overlap"].is_null());
    }
}

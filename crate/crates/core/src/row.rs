//! 012men-rows: compressed sets of bitstrings built from fixed bits `0`/`1`,
//! don't-cares `2`, and three wildcard kinds.
//!
//! * an `e`-group holds at least one 1,
//! * an `n`-group holds at least one 0,
//! * an `m`-group holds at least one 1 and at least one 0.
//!
//! Group positions need not be contiguous; the group table, not adjacency,
//! defines membership. Every group spans at least two positions. Group ids are
//! numbered `1..k` per kind in order of first occurrence, so two rows with the
//! same member structure print identically.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::formula::{Assignment, Clause, Cnf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RowError {
    #[error("a row needs at least one position")]
    Empty,
    #[error("malformed row token `{0}`")]
    BadToken(String),
    #[error("group {0} has a single position")]
    GroupTooSmall(String),
    #[error("length mismatch: row has {expected} positions, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("declared count {declared} does not match row cardinality {actual}")]
    CountMismatch { declared: String, actual: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    E,
    N,
    M,
}

impl Kind {
    fn dual(self) -> Kind {
        match self {
            Kind::E => Kind::N,
            Kind::N => Kind::E,
            Kind::M => Kind::M,
        }
    }

    fn needs_one(self) -> bool {
        matches!(self, Kind::E | Kind::M)
    }

    fn needs_zero(self) -> bool {
        matches!(self, Kind::N | Kind::M)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    One,
    Two,
    E(u32),
    N(u32),
    M(u32),
}

impl Symbol {
    pub fn wildcard(kind: Kind, id: u32) -> Symbol {
        match kind {
            Kind::E => Symbol::E(id),
            Kind::N => Symbol::N(id),
            Kind::M => Symbol::M(id),
        }
    }

    /// Kind and id of a wildcard symbol.
    pub fn group(self) -> Option<(Kind, u32)> {
        match self {
            Symbol::E(id) => Some((Kind::E, id)),
            Symbol::N(id) => Some((Kind::N, id)),
            Symbol::M(id) => Some((Kind::M, id)),
            _ => None,
        }
    }

    pub fn is_fixed(self) -> bool {
        matches!(self, Symbol::Zero | Symbol::One)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Symbol::Zero => f.write_str("0"),
            Symbol::One => f.write_str("1"),
            Symbol::Two => f.write_str("2"),
            Symbol::E(id) => write!(f, "e{id}"),
            Symbol::N(id) => write!(f, "n{id}"),
            Symbol::M(id) => write!(f, "m{id}"),
        }
    }
}

impl FromStr for Symbol {
    type Err = RowError;

    fn from_str(token: &str) -> Result<Self, Self::Err> {
        let bad = || RowError::BadToken(token.to_string());
        match token {
            "0" => return Ok(Symbol::Zero),
            "1" => return Ok(Symbol::One),
            "2" => return Ok(Symbol::Two),
            _ => {}
        }
        let mut chars = token.chars();
        let kind = match chars.next() {
            Some('e') => Kind::E,
            Some('n') => Kind::N,
            Some('m') => Kind::M,
            _ => return Err(bad()),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let id: u32 = digits.parse().map_err(|_| bad())?;
        if id == 0 {
            return Err(bad());
        }
        Ok(Symbol::wildcard(kind, id))
    }
}

/// A wildcard group: its kind, per-kind id, and 1-based positions (ascending).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Group {
    pub kind: Kind,
    pub id: u32,
    pub positions: Vec<usize>,
}

impl Group {
    fn count(&self) -> BigUint {
        let full = BigUint::one() << self.positions.len();
        match self.kind {
            Kind::E | Kind::N => full - 1u32,
            Kind::M => full - 2u32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    symbols: Vec<Symbol>,
    /// Ordered by first position.
    groups: Vec<Group>,
}

impl Row {
    /// The row `(2,2,...,2)` of length `t`.
    pub fn full(t: usize) -> Result<Row, RowError> {
        if t == 0 {
            return Err(RowError::Empty);
        }
        Ok(Row { symbols: vec![Symbol::Two; t], groups: Vec::new() })
    }

    /// Builds a row from raw symbols. Ids only need to be consistent within a
    /// kind; they are renumbered canonically. Single-position groups are rejected.
    pub fn from_symbols(symbols: Vec<Symbol>) -> Result<Row, RowError> {
        if symbols.is_empty() {
            return Err(RowError::Empty);
        }
        let mut tags: HashMap<(Kind, u32), usize> = HashMap::new();
        let cells: Vec<Cell> = symbols
            .iter()
            .map(|s| match *s {
                Symbol::Zero => Cell::Zero,
                Symbol::One => Cell::One,
                Symbol::Two => Cell::Two,
                wild => {
                    let (kind, id) = wild.group().expect("wildcard");
                    let next = tags.len();
                    Cell::Wild(kind, *tags.entry((kind, id)).or_insert(next))
                }
            })
            .collect();
        let groups = collect_groups(&cells);
        if let Some(g) = groups.iter().find(|g| g.1.len() < 2) {
            return Err(RowError::GroupTooSmall(symbols[g.1[0] - 1].to_string()));
        }
        Ok(assemble(cells, groups))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Symbol at 1-based position `pos`.
    pub fn get(&self, pos: usize) -> Symbol {
        self.symbols[pos - 1]
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn group(&self, kind: Kind, id: u32) -> Option<&Group> {
        self.groups.iter().find(|g| g.kind == kind && g.id == id)
    }

    /// Index into [`Row::groups`] of the group covering `pos`, if any.
    pub(crate) fn group_index_at(&self, pos: usize) -> Option<usize> {
        let (kind, id) = self.get(pos).group()?;
        self.groups.iter().position(|g| g.kind == kind && g.id == id)
    }

    /// Number of bitstrings the row represents.
    pub fn cardinality(&self) -> BigUint {
        let twos = self.symbols.iter().filter(|s| **s == Symbol::Two).count();
        self.groups.iter().fold(BigUint::one() << twos, |acc, g| acc * g.count())
    }

    pub fn contains(&self, a: &Assignment) -> Result<bool, RowError> {
        if a.len() != self.len() {
            return Err(RowError::LengthMismatch { expected: self.len(), got: a.len() });
        }
        let bits = a.bits();
        let fixed_ok = self.symbols.iter().zip(bits).all(|(s, &b)| match s {
            Symbol::Zero => !b,
            Symbol::One => b,
            _ => true,
        });
        Ok(fixed_ok
            && self.groups.iter().all(|g| {
                let one = g.positions.iter().any(|&p| bits[p - 1]);
                let zero = g.positions.iter().any(|&p| !bits[p - 1]);
                (!g.kind.needs_one() || one) && (!g.kind.needs_zero() || zero)
            }))
    }

    /// Whether every member of the row satisfies `c`.
    ///
    /// True iff a positive variable sits on a `1`, a negative variable on a `0`,
    /// the positive part covers a whole `e`/`m` group, or the negative part
    /// covers a whole `n`/`m` group.
    pub fn fulfills(&self, c: &Clause) -> bool {
        debug_assert!(c.max_var() <= self.len());
        if c.pos().iter().any(|&v| self.get(v) == Symbol::One)
            || c.neg().iter().any(|&v| self.get(v) == Symbol::Zero)
        {
            return true;
        }
        self.groups.iter().any(|g| {
            (g.kind.needs_one() && is_subset(&g.positions, c.pos()))
                || (g.kind.needs_zero() && is_subset(&g.positions, c.neg()))
        })
    }

    /// CNF whose model set is exactly the row's member set.
    pub fn to_cnf(&self) -> Cnf {
        let mut clauses = Vec::new();
        for (i, s) in self.symbols.iter().enumerate() {
            match s {
                Symbol::One => clauses.push(Clause::new([i + 1], []).expect("unit")),
                Symbol::Zero => clauses.push(Clause::new([], [i + 1]).expect("unit")),
                _ => {}
            }
        }
        // group clauses follow the unit clauses, in group order
        for g in &self.groups {
            let p = g.positions.iter().copied();
            if g.kind.needs_one() {
                clauses.push(Clause::new(p.clone(), []).expect("nonempty group"));
            }
            if g.kind.needs_zero() {
                clauses.push(Clause::new([], p).expect("nonempty group"));
            }
        }
        Cnf::new(self.len(), clauses).expect("row clauses stay within t")
    }

    /// Members in lexicographic order (`x1` most significant).
    pub fn members(&self) -> Members<'_> {
        Members { walker: Walker::new(self) }
    }

    /// Lexicographic indices of the members; requires `len() <= 64`.
    pub fn member_indices(&self) -> MemberIndices<'_> {
        assert!(self.len() <= 64, "member indices need t <= 64");
        MemberIndices { walker: Walker::new(self) }
    }

    /// Swaps 0/1 and e/n; m-groups are self-dual.
    pub fn complement(&self) -> Row {
        let symbols = self
            .symbols
            .iter()
            .map(|s| match *s {
                Symbol::Zero => Symbol::One,
                Symbol::One => Symbol::Zero,
                Symbol::Two => Symbol::Two,
                wild => {
                    let (kind, id) = wild.group().expect("wildcard");
                    Symbol::wildcard(kind.dual(), id)
                }
            })
            .collect();
        Row::from_symbols(symbols).expect("complement keeps group sizes")
    }

    /// Disjoint plain 012-rows with the same union.
    ///
    /// Groups expand left to right by first position. An `e`-group of size k
    /// becomes the k rows `1 2..2`, `0 1 2..2`, ..., `0..0 1`; an `n`-group the
    /// dual; an `m`-group `1` followed by an `n` on the rest, then `0`
    /// followed by an `e` on the rest.
    pub fn expand_012(&self) -> Vec<Row012> {
        let base: Vec<Symbol> = self
            .symbols
            .iter()
            .map(|s| if s.is_fixed() { *s } else { Symbol::Two })
            .collect();
        let mut acc = vec![base];
        for g in &self.groups {
            let patterns = group_patterns(g.kind, g.positions.len());
            let mut next = Vec::with_capacity(acc.len() * patterns.len());
            for row in &acc {
                for pattern in &patterns {
                    let mut r = row.clone();
                    for (&p, &s) in g.positions.iter().zip(pattern) {
                        r[p - 1] = s;
                    }
                    next.push(r);
                }
            }
            acc = next;
        }
        acc.into_iter().map(|symbols| Row012 { symbols }).collect()
    }

    /// Number of rows [`Row::expand_012`] would produce, without building them.
    pub fn expand_012_len(&self) -> BigUint {
        self.groups.iter().fold(BigUint::one(), |acc, g| {
            let k = g.positions.len();
            acc * match g.kind {
                Kind::E | Kind::N => k,
                Kind::M => 2 * k - 2,
            }
        })
    }
}

fn group_patterns(kind: Kind, k: usize) -> Vec<Vec<Symbol>> {
    let (hit, miss) = match kind {
        Kind::E => (Symbol::One, Symbol::Zero),
        Kind::N => (Symbol::Zero, Symbol::One),
        Kind::M => {
            let mut out = Vec::new();
            for (head, rest) in [(Symbol::One, Kind::N), (Symbol::Zero, Kind::E)] {
                for tail in group_patterns(rest, k - 1) {
                    let mut p = vec![head];
                    p.extend(tail);
                    out.push(p);
                }
            }
            return out;
        }
    };
    (0..k)
        .map(|i| {
            let mut p = vec![miss; i];
            p.push(hit);
            p.resize(k, Symbol::Two);
            p
        })
        .collect()
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.len() <= big.len() && small.iter().all(|p| big.binary_search(p).is_ok())
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Row {
    type Err = RowError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let symbols = text.split_whitespace().map(str::parse).collect::<Result<Vec<Symbol>, _>>()?;
        Row::from_symbols(symbols)
    }
}

#[derive(Serialize, Deserialize)]
struct RowJson {
    symbols: Vec<String>,
    count: String,
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RowJson {
            symbols: self.symbols.iter().map(ToString::to_string).collect(),
            count: self.cardinality().to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Row {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RowJson::deserialize(deserializer)?;
        let symbols = raw
            .symbols
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Symbol>, _>>()
            .map_err(D::Error::custom)?;
        let row = Row::from_symbols(symbols).map_err(D::Error::custom)?;
        let actual = row.cardinality().to_string();
        if actual != raw.count {
            return Err(D::Error::custom(RowError::CountMismatch { declared: raw.count, actual }));
        }
        Ok(row)
    }
}

/// A plain row over `{0,1,2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row012 {
    symbols: Vec<Symbol>,
}

impl Row012 {
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn cardinality(&self) -> BigUint {
        BigUint::one() << self.symbols.iter().filter(|s| **s == Symbol::Two).count()
    }

    pub fn to_row(&self) -> Row {
        Row { symbols: self.symbols.clone(), groups: Vec::new() }
    }
}

impl fmt::Display for Row012 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_row(), f)
    }
}

// ---------------------------------------------------------------------------
// Row construction from tagged cells. Impositions rewrite whole groups into
// fresh tags; `Draft::finish` regroups by tag, degrades single-position groups
// and renumbers ids canonically.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cell {
    Zero,
    One,
    Two,
    Wild(Kind, usize),
}

/// A mutable row under construction. Positions are 1-based.
#[derive(Debug, Clone)]
pub(crate) struct Draft {
    cells: Vec<Cell>,
    next_tag: usize,
    dead: bool,
}

impl Draft {
    pub(crate) fn of(row: &Row) -> Draft {
        let cells = row
            .symbols
            .iter()
            .enumerate()
            .map(|(i, s)| match s {
                Symbol::Zero => Cell::Zero,
                Symbol::One => Cell::One,
                Symbol::Two => Cell::Two,
                wild => {
                    let (kind, _) = wild.group().expect("wildcard");
                    Cell::Wild(kind, row.group_index_at(i + 1).expect("group table"))
                }
            })
            .collect();
        Draft { cells, next_tag: row.groups.len(), dead: false }
    }

    pub(crate) fn cell(&self, pos: usize) -> Cell {
        self.cells[pos - 1]
    }

    pub(crate) fn set_bits(&mut self, positions: &[usize], one: bool) {
        let cell = if one { Cell::One } else { Cell::Zero };
        for &p in positions {
            self.cells[p - 1] = cell;
        }
    }

    pub(crate) fn set_free(&mut self, positions: &[usize]) {
        for &p in positions {
            self.cells[p - 1] = Cell::Two;
        }
    }

    /// Puts a fresh group of `kind` on `positions`. An empty position set is
    /// an unsatisfiable requirement and kills the draft.
    pub(crate) fn set_group(&mut self, kind: Kind, positions: &[usize]) {
        if positions.is_empty() {
            self.dead = true;
            return;
        }
        let tag = self.next_tag;
        self.next_tag += 1;
        for &p in positions {
            self.cells[p - 1] = Cell::Wild(kind, tag);
        }
    }

    /// Finalizes the draft. Single-position `e`/`n` groups become `1`/`0`;
    /// a single-position `m` group empties the row.
    pub(crate) fn finish(mut self) -> Option<Row> {
        if self.dead {
            return None;
        }
        let mut groups = collect_groups(&self.cells);
        for (kind, positions) in &groups {
            if positions.len() == 1 {
                let p = positions[0];
                self.cells[p - 1] = match kind {
                    Kind::E => Cell::One,
                    Kind::N => Cell::Zero,
                    Kind::M => return None,
                };
            }
        }
        groups.retain(|g| g.1.len() >= 2);
        Some(assemble(self.cells, groups))
    }
}

/// Groups cells by tag in order of first position.
fn collect_groups(cells: &[Cell]) -> Vec<(Kind, Vec<usize>)> {
    let mut order: Vec<usize> = Vec::new();
    let mut by_tag: HashMap<usize, (Kind, Vec<usize>)> = HashMap::new();
    for (i, c) in cells.iter().enumerate() {
        if let Cell::Wild(kind, tag) = *c {
            by_tag
                .entry(tag)
                .or_insert_with(|| {
                    order.push(tag);
                    (kind, Vec::new())
                })
                .1
                .push(i + 1);
        }
    }
    order.into_iter().map(|tag| by_tag.remove(&tag).expect("tag")).collect()
}

/// Renumbers ids per kind in first-occurrence order and writes the symbols.
/// `groups` must come from `collect_groups` on the same cells (all sizes >= 2).
fn assemble(cells: Vec<Cell>, groups: Vec<(Kind, Vec<usize>)>) -> Row {
    let mut symbols: Vec<Symbol> = cells
        .iter()
        .map(|c| match c {
            Cell::Zero => Symbol::Zero,
            Cell::One => Symbol::One,
            _ => Symbol::Two,
        })
        .collect();
    let mut next_id = [0u32; 3];
    let groups = groups
        .into_iter()
        .map(|(kind, positions)| {
            let slot = &mut next_id[kind as usize];
            *slot += 1;
            let id = *slot;
            for &p in &positions {
                symbols[p - 1] = Symbol::wildcard(kind, id);
            }
            Group { kind, id, positions }
        })
        .collect();
    Row { symbols, groups }
}

// ---------------------------------------------------------------------------
// Lexicographic member enumeration by depth-first search over the non-fixed
// positions. Each position takes 0 unless that would leave its group unable
// to meet its requirements with the positions still to come.

struct Walker<'a> {
    row: &'a Row,
    /// 1-based positions that are not fixed.
    slots: Vec<usize>,
    slot_group: Vec<Option<usize>>,
    /// Positions of the same group after this slot.
    rem_after: Vec<usize>,
    ones: Vec<usize>,
    zeros: Vec<usize>,
    choice: Vec<bool>,
    bits: Vec<bool>,
    index: u64,
    started: bool,
    done: bool,
}

impl<'a> Walker<'a> {
    fn new(row: &'a Row) -> Self {
        let t = row.len();
        let bits: Vec<bool> = row.symbols.iter().map(|s| *s == Symbol::One).collect();
        let index = if t <= 64 {
            bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
        } else {
            0
        };
        let slots: Vec<usize> = (1..=t).filter(|&p| !row.get(p).is_fixed()).collect();
        let slot_group: Vec<Option<usize>> = slots.iter().map(|&p| row.group_index_at(p)).collect();
        let mut seen = vec![0usize; row.groups.len()];
        let mut rem_after = vec![0usize; slots.len()];
        for j in (0..slots.len()).rev() {
            if let Some(g) = slot_group[j] {
                rem_after[j] = seen[g];
                seen[g] += 1;
            }
        }
        let n = row.groups.len();
        Walker {
            row,
            choice: vec![false; slots.len()],
            slots,
            slot_group,
            rem_after,
            ones: vec![0; n],
            zeros: vec![0; n],
            bits,
            index,
            started: false,
            done: false,
        }
    }

    fn feasible(&self, j: usize, v: bool) -> bool {
        let Some(g) = self.slot_group[j] else { return true };
        let kind = self.row.groups[g].kind;
        let ones = self.ones[g] + usize::from(v);
        let zeros = self.zeros[g] + usize::from(!v);
        let missing = usize::from(kind.needs_one() && ones == 0) + usize::from(kind.needs_zero() && zeros == 0);
        missing <= self.rem_after[j]
    }

    fn apply(&mut self, j: usize, v: bool) {
        self.choice[j] = v;
        let p = self.slots[j];
        self.bits[p - 1] = v;
        let t = self.bits.len();
        if v && t <= 64 {
            self.index |= 1u64 << (t - p);
        }
        if let Some(g) = self.slot_group[j] {
            if v {
                self.ones[g] += 1;
            } else {
                self.zeros[g] += 1;
            }
        }
    }

    fn undo(&mut self, j: usize) {
        let v = self.choice[j];
        let p = self.slots[j];
        self.bits[p - 1] = false;
        let t = self.bits.len();
        if v && t <= 64 {
            self.index &= !(1u64 << (t - p));
        }
        if let Some(g) = self.slot_group[j] {
            if v {
                self.ones[g] -= 1;
            } else {
                self.zeros[g] -= 1;
            }
        }
    }

    fn descend(&mut self, from: usize) {
        for j in from..self.slots.len() {
            let v = !self.feasible(j, false);
            debug_assert!(self.feasible(j, v));
            self.apply(j, v);
        }
    }

    /// Moves to the next member; false once exhausted.
    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            self.descend(0);
            return true;
        }
        let mut j = self.slots.len();
        while j > 0 {
            j -= 1;
            let was_one = self.choice[j];
            self.undo(j);
            if !was_one && self.feasible(j, true) {
                self.apply(j, true);
                self.descend(j + 1);
                return true;
            }
        }
        self.done = true;
        false
    }
}

pub struct Members<'a> {
    walker: Walker<'a>,
}

impl Iterator for Members<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        self.walker.advance().then(|| Assignment::new(self.walker.bits.clone()))
    }
}

pub struct MemberIndices<'a> {
    walker: Walker<'a>,
}

impl Iterator for MemberIndices<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.walker.advance().then_some(self.walker.index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_clause, random_row};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn row(s: &str) -> Row {
        s.parse().unwrap()
    }

    fn bits(s: &str) -> Assignment {
        Assignment::from_bitstring(s).unwrap()
    }

    fn all_assignments(t: usize) -> impl Iterator<Item = Assignment> {
        (0..1u64 << t).map(move |i| Assignment::from_index(i, t))
    }

    #[test]
    fn full_row_basics() {
        let r = Row::full(3).unwrap();
        assert_eq!(r.to_string(), "2 2 2");
        assert_eq!(r.cardinality(), BigUint::from(8u32));
        assert_eq!(Row::full(1).unwrap().cardinality(), BigUint::from(2u32));
        assert_eq!(Row::full(0), Err(RowError::Empty));
        let r10 = Row::full(10).unwrap();
        assert!(all_assignments(10).all(|a| r10.contains(&a).unwrap()));
    }

    #[test]
    fn cardinality_examples() {
        let r = row("2 m1 e1 m1 1 n1 e1 e1 1 n1");
        assert_eq!(r.cardinality(), BigUint::from(84u32));
        assert_eq!(row("1 e1 0 e1").cardinality(), BigUint::from(3u32));
        assert_eq!(row("m1 m1 m1 m1 m1").cardinality(), BigUint::from(30u32));
    }

    #[test]
    fn cardinality_is_exact_beyond_machine_width() {
        let r = Row::full(200).unwrap();
        assert_eq!(r.cardinality(), BigUint::one() << 200);
    }

    #[test]
    fn contains_examples() {
        let r = row("1 e1 0 e1");
        assert!(r.contains(&bits("1001")).unwrap());
        assert!(!r.contains(&bits("1000")).unwrap());
        assert!(!row("m1 m1").contains(&bits("11")).unwrap());
        assert_eq!(r.contains(&bits("10")), Err(RowError::LengthMismatch { expected: 4, got: 2 }));
    }

    #[test]
    fn fulfills_examples() {
        let r = row("e1 e1 2 2");
        assert!(r.fulfills(&Clause::new([1, 2, 3], []).unwrap()));
        assert!(!r.fulfills(&Clause::new([1, 3], []).unwrap()));

        // m-group {6,7,8} straddles the positive and negative part of the clause
        let mut symbols = vec![Symbol::Two; 18];
        for p in [6, 7, 8] {
            symbols[p - 1] = Symbol::M(1);
        }
        let r = Row::from_symbols(symbols).unwrap();
        let c = Clause::new(1..=6, 7..=13).unwrap();
        assert!(!r.fulfills(&c));
        assert!(r.members().any(|a| !c.satisfied_by(a.bits())));

        let r = row("n1 n1 1 1 2");
        let c = Clause::new([], [3, 4]).unwrap();
        assert!(!r.fulfills(&c));
        assert!(r.members().all(|a| !c.satisfied_by(a.bits())));
    }

    #[test]
    fn to_cnf_examples() {
        let sigma = row("e1 0 e1 1 e1").to_cnf();
        let expected =
            vec![Clause::new([], [2]).unwrap(), Clause::new([4], []).unwrap(), Clause::new([1, 3, 5], []).unwrap()];
        assert_eq!(sigma.clauses(), expected.as_slice());
        assert!(row("2 2").to_cnf().clauses().is_empty());
        let sigma = row("m1 m1 n1 n1").to_cnf();
        assert_eq!(
            sigma.clauses(),
            &[
                Clause::new([1, 2], []).unwrap(),
                Clause::new([], [1, 2]).unwrap(),
                Clause::new([], [3, 4]).unwrap()
            ]
        );
    }

    #[test]
    fn enumerate_examples() {
        let got: Vec<String> = row("1 e1 0 e1").members().map(|a| a.to_string()).collect();
        assert_eq!(got, ["1001", "1100", "1101"]);
        let got: Vec<String> = row("m1 m1").members().map(|a| a.to_string()).collect();
        assert_eq!(got, ["01", "10"]);
        let got: Vec<String> = row("2 1").members().map(|a| a.to_string()).collect();
        assert_eq!(got, ["01", "11"]);
        let got: Vec<String> = row("1 0").members().map(|a| a.to_string()).collect();
        assert_eq!(got, ["10"]);
    }

    #[test]
    fn expand_examples() {
        let got: Vec<String> = row("e1 e1 e1 e1").expand_012().iter().map(ToString::to_string).collect();
        assert_eq!(got, ["1 2 2 2", "0 1 2 2", "0 0 1 2", "0 0 0 1"]);
        let r1 = row("e1 e1 e1 e1 e2 e2 e2 e2");
        assert_eq!(r1.expand_012().len(), 16);
        assert_eq!(r1.expand_012_len(), BigUint::from(16u32));
        let got: Vec<String> = row("m1 m1").expand_012().iter().map(ToString::to_string).collect();
        assert_eq!(got, ["1 0", "0 1"]);
    }

    #[test]
    fn text_format() {
        let r = row("2 m1 e1 m1 1 n1 e1 e1 1 n1");
        assert_eq!(r.to_string(), "2 m1 e1 m1 1 n1 e1 e1 1 n1");
        assert_eq!(row("0 1 2").symbols(), &[Symbol::Zero, Symbol::One, Symbol::Two]);
        assert_eq!("e1".parse::<Row>(), Err(RowError::GroupTooSmall("e1".into())));
        assert_eq!("0 e1 x".parse::<Row>(), Err(RowError::BadToken("x".into())));
        assert_eq!("e0 e0".parse::<Row>(), Err(RowError::BadToken("e0".into())));
        assert_eq!("".parse::<Row>(), Err(RowError::Empty));
        // ids are renumbered by first occurrence per kind
        assert_eq!(row("e7 n3 e7 n3 e2 e2").to_string(), "e1 n1 e1 n1 e2 e2");
    }

    #[test]
    fn json_format() {
        let r = row("1 e1 0 e1");
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v, serde_json::json!({"symbols": ["1", "e1", "0", "e1"], "count": "3"}));
        let back: Row = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
        let bad = serde_json::json!({"symbols": ["1", "e1", "0", "e1"], "count": "4"});
        assert!(serde_json::from_value::<Row>(bad).is_err());
    }

    #[test]
    fn draft_degrades_small_groups() {
        let r = row("2 2 2");
        let mut d = Draft::of(&r);
        d.set_group(Kind::E, &[1]);
        d.set_group(Kind::N, &[2]);
        assert_eq!(d.finish().unwrap().to_string(), "1 0 2");
        let mut d = Draft::of(&r);
        d.set_group(Kind::M, &[3]);
        assert!(d.finish().is_none());
        let mut d = Draft::of(&r);
        d.set_group(Kind::E, &[]);
        assert!(d.finish().is_none());
    }

    fn check_row_invariants(r: &Row) {
        let t = r.len();
        let members: Vec<Assignment> = all_assignments(t).filter(|a| r.contains(a).unwrap()).collect();
        assert_eq!(BigUint::from(members.len()), r.cardinality(), "{r}");

        let listed: Vec<Assignment> = r.members().collect();
        assert_eq!(listed, members, "lexicographic enumeration of {r}");
        let idx: Vec<u64> = r.member_indices().collect();
        assert_eq!(idx, members.iter().map(Assignment::to_index).collect::<Vec<_>>());

        let sigma = r.to_cnf();
        for a in all_assignments(t) {
            assert_eq!(sigma.eval(&a).unwrap(), r.contains(&a).unwrap(), "sigma of {r} at {a}");
        }

        let expansion = r.expand_012();
        assert_eq!(BigUint::from(expansion.len()), r.expand_012_len());
        let mut hits = vec![0u32; 1 << t];
        for e in &expansion {
            for i in e.to_row().member_indices() {
                hits[i as usize] += 1;
            }
        }
        for a in all_assignments(t) {
            let expected = u32::from(r.contains(&a).unwrap());
            assert_eq!(hits[a.to_index() as usize], expected, "expansion of {r} at {a}");
        }

        let text = r.to_string();
        assert_eq!(text.parse::<Row>().unwrap(), *r);
    }

    #[test]
    fn named_rows_satisfy_invariants() {
        for s in ["2 m1 e1 m1 1 n1 e1 e1 1 n1", "1 e1 0 e1", "m1 m1 m1 m1 m1", "e1 n1 e1 m1 n1 m1 2 0"] {
            check_row_invariants(&row(s));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn random_rows_satisfy_invariants(seed in any::<u64>(), t in 1usize..=12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = random_row(&mut rng, t);
            check_row_invariants(&r);
        }

        #[test]
        fn fulfills_is_exact(seed in any::<u64>(), t in 1usize..=12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = random_row(&mut rng, t);
            for _ in 0..8 {
                let c = random_clause(&mut rng, t);
                let every = r.members().all(|a| c.satisfied_by(a.bits()));
                prop_assert_eq!(r.fulfills(&c), every, "row {} clause {}", r, c);
            }
        }

        #[test]
        fn complement_maps_members(seed in any::<u64>(), t in 1usize..=10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = random_row(&mut rng, t);
            let c = r.complement();
            prop_assert_eq!(c.cardinality(), r.cardinality());
            let mask = (1u64 << t) - 1;
            let mut flipped: Vec<u64> = r.member_indices().map(|i| !i & mask).collect();
            flipped.sort_unstable();
            prop_assert_eq!(c.member_indices().collect::<Vec<_>>(), flipped);
        }
    }
}

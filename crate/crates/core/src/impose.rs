//! Clause imposition: replace a row by disjoint sons that together hold exactly
//! the row's members satisfying a clause.
//!
//! Purely positive (negative) clauses are imposed with a block pattern over the
//! chunks the clause cuts out of the row. Chunk `i`'s son(s) put the clause's
//! required 1 (0) inside chunk `i` while chunks `1..i` are pushed to the
//! opposite value, which keeps the sons pairwise disjoint. Mixed clauses first
//! split on the negative literals and impose the positive literals only on the
//! part where all negative literals are 1.

use std::fmt;

use thiserror::Error;

use crate::formula::{Assignment, Clause};
use crate::row::{Cell, Draft, Kind, Row, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImposeError {
    #[error("cannot impose an empty position set")]
    EmptyPositions,
    #[error("position {0} holds a fixed bit")]
    FixedPosition(usize),
    #[error("row already fulfills the clause")]
    AlreadyFulfilled,
}

/// A clause cut down to the positions that still matter on a row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Restricted {
    Fulfilled,
    Parts { pos: Vec<usize>, neg: Vec<usize> },
}

/// Drops clause positions that hold the falsifying bit. Returns
/// [`Restricted::Fulfilled`] when the row fulfills `c`.
pub fn restrict(r: &Row, c: &Clause) -> Restricted {
    if r.fulfills(c) {
        return Restricted::Fulfilled;
    }
    Restricted::Parts {
        pos: c.pos().iter().copied().filter(|&p| r.get(p) != Symbol::Zero).collect(),
        neg: c.neg().iter().copied().filter(|&p| r.get(p) != Symbol::One).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkSource {
    Free,
    Group(Kind, u32),
}

/// The trace of a position set on one wildcard group, or on the don't-cares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub source: ChunkSource,
    pub trace: Vec<usize>,
    /// Group positions outside the trace; always empty for `Free`.
    pub remainder: Vec<usize>,
}

/// Splits `positions` into chunks ordered by smallest trace position. All
/// don't-care positions form a single `Free` chunk.
pub fn chunks(r: &Row, positions: &[usize]) -> Result<Vec<Chunk>, ImposeError> {
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out: Vec<Chunk> = Vec::new();
    for &p in &sorted {
        let source = match r.get(p) {
            Symbol::Zero | Symbol::One => return Err(ImposeError::FixedPosition(p)),
            Symbol::Two => ChunkSource::Free,
            wild => {
                let (kind, id) = wild.group().expect("wildcard");
                ChunkSource::Group(kind, id)
            }
        };
        match out.iter_mut().find(|c| c.source == source) {
            Some(chunk) => chunk.trace.push(p),
            None => out.push(Chunk { source, trace: vec![p], remainder: Vec::new() }),
        }
    }
    for chunk in &mut out {
        if let ChunkSource::Group(kind, id) = chunk.source {
            let g = r.group(kind, id).expect("group table");
            chunk.remainder = g.positions.iter().copied().filter(|p| sorted.binary_search(p).is_err()).collect();
        }
    }
    Ok(out)
}

/// Which bit the imposed clause asks for: 1 for positive, 0 for negative.
#[derive(Debug, Clone, Copy)]
struct Side {
    hit: bool,
}

impl Side {
    /// The wildcard expressing "at least one hit".
    fn own(self) -> Kind {
        if self.hit {
            Kind::E
        } else {
            Kind::N
        }
    }

    /// The wildcard expressing "at least one miss".
    fn other(self) -> Kind {
        if self.hit {
            Kind::N
        } else {
            Kind::E
        }
    }
}

/// Rewrites of one chunk: the son(s) where the chunk holds a hit, and the
/// state it takes in later sons (no hit inside the chunk).
fn chunk_states(chunk: &Chunk, source_kind: Option<Kind>, side: Side) -> (Vec<EditList>, EditList) {
    let t = chunk.trace.clone();
    let r = chunk.remainder.clone();
    let miss = !side.hit;
    match source_kind {
        None => (vec![EditList::new().group(side.own(), t.clone())], EditList::new().bits(t, miss)),
        Some(k) if k == side.own() => (
            vec![EditList::new().group(side.own(), t.clone()).free(r.clone())],
            EditList::new().bits(t, miss).group(side.own(), r),
        ),
        Some(k) if k == side.other() => (
            vec![
                EditList::new().group(Kind::M, t.clone()).free(r.clone()),
                EditList::new().bits(t.clone(), side.hit).group(side.other(), r.clone()),
            ],
            EditList::new().bits(t, miss).free(r),
        ),
        Some(_) => (
            vec![
                EditList::new().group(Kind::M, t.clone()).free(r.clone()),
                EditList::new().bits(t.clone(), side.hit).group(side.other(), r.clone()),
            ],
            EditList::new().bits(t, miss).group(side.own(), r),
        ),
    }
}

/// A recorded sequence of draft edits.
#[derive(Debug, Clone, Default)]
struct EditList {
    edits: Vec<Edit>,
}

#[derive(Debug, Clone)]
enum Edit {
    Bits(Vec<usize>, bool),
    Free(Vec<usize>),
    Group(Kind, Vec<usize>),
}

impl EditList {
    fn new() -> Self {
        Self::default()
    }

    fn bits(mut self, p: Vec<usize>, one: bool) -> Self {
        self.edits.push(Edit::Bits(p, one));
        self
    }

    fn free(mut self, p: Vec<usize>) -> Self {
        self.edits.push(Edit::Free(p));
        self
    }

    fn group(mut self, kind: Kind, p: Vec<usize>) -> Self {
        self.edits.push(Edit::Group(kind, p));
        self
    }

    fn apply(&self, d: &mut Draft) {
        for e in &self.edits {
            match e {
                Edit::Bits(p, one) => d.set_bits(p, *one),
                Edit::Free(p) => d.set_free(p),
                // an empty remainder only occurs where the son is meant to vanish
                Edit::Group(kind, p) => d.set_group(*kind, p),
            }
        }
    }
}

fn impose_side(r: &Row, positions: &[usize], side: Side) -> Result<Vec<Row>, ImposeError> {
    if positions.is_empty() {
        return Err(ImposeError::EmptyPositions);
    }
    let chunks = chunks(r, positions)?;
    let mut prefix = Draft::of(r);
    let mut sons = Vec::new();
    for chunk in &chunks {
        let kind = match chunk.source {
            ChunkSource::Free => None,
            ChunkSource::Group(kind, _) => Some(kind),
        };
        let (diag, pass) = chunk_states(chunk, kind, side);
        for op in &diag {
            let mut d = prefix.clone();
            op.apply(&mut d);
            sons.extend(d.finish());
        }
        pass.apply(&mut prefix);
    }
    Ok(sons)
}

/// Sons covering the members of `r` with a 1 somewhere in `positions`.
///
/// `positions` must avoid fixed bits (use [`restrict`] first) and must not
/// contain a whole `e`/`m` group.
pub fn impose_positive(r: &Row, positions: &[usize]) -> Result<Vec<Row>, ImposeError> {
    impose_side(r, positions, Side { hit: true })
}

/// Sons covering the members of `r` with a 0 somewhere in `positions`; the
/// dual of [`impose_positive`].
pub fn impose_negative(r: &Row, positions: &[usize]) -> Result<Vec<Row>, ImposeError> {
    impose_side(r, positions, Side { hit: false })
}

/// The members of `r` with a 1 at every position of `forced`, or `None` if
/// there are none.
pub fn force_ones(r: &Row, forced: &[usize]) -> Option<Row> {
    let mut d = Draft::of(r);
    let mut touched: Vec<usize> = Vec::new();
    for &p in forced {
        match d.cell(p) {
            Cell::Zero => return None,
            Cell::One => {}
            Cell::Two => d.set_bits(&[p], true),
            Cell::Wild(..) => {
                let g = r.group_index_at(p).expect("group table");
                if !touched.contains(&g) {
                    touched.push(g);
                }
            }
        }
    }
    for g in touched {
        let group = &r.groups()[g];
        let (hit, rest): (Vec<usize>, Vec<usize>) = group.positions.iter().partition(|p| forced.contains(p));
        d.set_bits(&hit, true);
        match group.kind {
            Kind::E => d.set_free(&rest),
            Kind::N | Kind::M => d.set_group(Kind::N, &rest),
        }
    }
    d.finish()
}

/// Replaces `r` by disjoint sons whose union is `{a in r : a satisfies c}`.
///
/// Mixed clauses produce the negative-literal sons first, then the sons of
/// the all-ones-on-the-negative-part row with the positive literals imposed.
pub fn impose_clause(r: &Row, c: &Clause) -> Result<Vec<Row>, ImposeError> {
    let Restricted::Parts { pos, neg } = restrict(r, c) else {
        return Err(ImposeError::AlreadyFulfilled);
    };
    let sons = match (pos.is_empty(), neg.is_empty()) {
        (true, true) => Vec::new(),
        (false, true) => impose_positive(r, &pos)?,
        (true, false) => impose_negative(r, &neg)?,
        (false, false) => {
            let mut sons = impose_negative(r, &neg)?;
            if let Some(forced) = force_ones(r, &neg) {
                let positive = Clause::new(pos, []).expect("nonempty positive part");
                match restrict(&forced, &positive) {
                    Restricted::Fulfilled => sons.push(forced),
                    Restricted::Parts { pos, .. } if pos.is_empty() => {}
                    Restricted::Parts { pos, .. } => sons.extend(impose_positive(&forced, &pos)?),
                }
            }
            sons
        }
    };
    assert!(sons.len() <= c.len(), "{} sons for a clause of {} literals", sons.len(), c.len());
    Ok(sons)
}

/// A row with decorated positions, used to describe the two halves of a mixed
/// imposition.
///
/// * `Barred`: members with at least one 0 on the barred positions.
/// * `Encircled`: members with 1s on every encircled position and at least one
///   1 on the starred positions.
/// * `Starred`: members with at least one 1 on the starred positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OverloadedRow {
    Barred { base: Row, barred: Vec<usize> },
    Encircled { base: Row, encircled: Vec<usize>, starred: Vec<usize> },
    Starred { base: Row, starred: Vec<usize> },
}

impl OverloadedRow {
    pub fn base(&self) -> &Row {
        match self {
            OverloadedRow::Barred { base, .. }
            | OverloadedRow::Encircled { base, .. }
            | OverloadedRow::Starred { base, .. } => base,
        }
    }

    pub fn contains(&self, a: &Assignment) -> bool {
        if !self.base().contains(a).unwrap_or(false) {
            return false;
        }
        match self {
            OverloadedRow::Barred { barred, .. } => barred.iter().any(|&p| !a.get(p)),
            OverloadedRow::Encircled { encircled, starred, .. } => {
                encircled.iter().all(|&p| a.get(p)) && starred.iter().any(|&p| a.get(p))
            }
            OverloadedRow::Starred { starred, .. } => starred.iter().any(|&p| a.get(p)),
        }
    }
}

impl fmt::Display for OverloadedRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (barred, encircled, starred): (&[usize], &[usize], &[usize]) = match self {
            OverloadedRow::Barred { barred, .. } => (barred, &[], &[]),
            OverloadedRow::Encircled { encircled, starred, .. } => (&[], encircled, starred),
            OverloadedRow::Starred { starred, .. } => (&[], &[], starred),
        };
        for (i, s) in self.base().symbols().iter().enumerate() {
            let p = i + 1;
            if i > 0 {
                f.write_str(" ")?;
            }
            if barred.contains(&p) {
                write!(f, "[{s}]")?;
            } else if encircled.contains(&p) {
                write!(f, "({s})")?;
            } else if starred.contains(&p) {
                write!(f, "{s}*")?;
            } else {
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

/// The two overloaded rows a mixed clause splits `r` into, after restriction.
/// `None` unless the restricted clause has both positive and negative parts.
pub fn mixed_split(r: &Row, c: &Clause) -> Option<(OverloadedRow, OverloadedRow)> {
    match restrict(r, c) {
        Restricted::Parts { pos, neg } if !pos.is_empty() && !neg.is_empty() => Some((
            OverloadedRow::Barred { base: r.clone(), barred: neg.clone() },
            OverloadedRow::Encircled { base: r.clone(), encircled: neg, starred: pos },
        )),
        _ => None,
    }
}

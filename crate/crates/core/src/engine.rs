//! The LIFO driver.
//!
//! The stack starts with `(2,...,2)`. Each popped row either fulfills every
//! clause from its scan index on (it is final and gets emitted) or its first
//! unfulfilled clause is imposed and the surviving sons go back on the stack.
//! At all times the final rows plus the stacked rows are pairwise disjoint and
//! their union contains Mod(cnf); every imposition strictly shrinks that union,
//! so the loop terminates.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::formula::Cnf;
use crate::impose::{impose_clause, mixed_split};
use crate::oracle::{self, ModelSet};
use crate::row::Row;
use crate::satcheck::feasible;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    /// Drop sons that hold no model of the clauses after the pending one.
    pub prune: bool,
    /// Fail once more than this many final rows would be emitted.
    pub max_rows: Option<usize>,
    /// Record [`TraceEvent`]s.
    pub trace: bool,
    /// Brute-force the partition invariant after every imposition. Only for
    /// small `t` (see [`oracle::DEFAULT_LIMIT`]).
    pub check_steps: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { prune: true, max_rows: None, trace: false, check_steps: false }
    }
}

/// A stacked row and the 1-based clause index its pending scan resumes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkItem {
    pub row: Row,
    pub next: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub final_rows: usize,
    pub impositions: usize,
    pub sons_generated: usize,
    pub prune_calls: usize,
    pub prune_hits: usize,
    pub max_stack: usize,
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "final_rows={}", self.final_rows)?;
        writeln!(f, "impositions={}", self.impositions)?;
        writeln!(f, "sons_generated={}", self.sons_generated)?;
        writeln!(f, "prune_calls={}", self.prune_calls)?;
        writeln!(f, "prune_hits={}", self.prune_hits)?;
        write!(f, "max_stack={}", self.max_stack)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Push { row: Row, next: usize },
    Pop { row: Row },
    /// Overloaded halves of a mixed imposition, already rendered.
    Split { clause: usize, barred: String, encircled: String },
    Impose { clause: usize, row: Row, sons: usize },
    Prune { row: Row },
    Final { row: Row },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Push { row, next } => write!(f, "PUSH {row} next=C{next}"),
            TraceEvent::Pop { row } => write!(f, "POP {row}"),
            TraceEvent::Split { clause, barred, encircled } => {
                write!(f, "SPLIT C{clause} A=<{barred}> B=<{encircled}>")
            }
            TraceEvent::Impose { clause, row, sons } => {
                write!(f, "IMPOSE C{clause} on {row}: {sons} son{}", if *sons == 1 { "" } else { "s" })
            }
            TraceEvent::Prune { row } => write!(f, "PRUNE {row} infeasible"),
            TraceEvent::Final { row } => write!(f, "FINAL {row} count={}", row.cardinality()),
        }
    }
}

/// One line per event.
pub fn emit_trace(events: &[TraceEvent]) -> String {
    events.iter().map(|e| format!("{e}\n")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub final_rows: Vec<Row>,
    pub model_count: BigUint,
    pub stats: Stats,
    pub trace: Vec<TraceEvent>,
}

impl Solution {
    fn empty() -> Self {
        Solution { final_rows: Vec::new(), model_count: BigUint::zero(), stats: Stats::default(), trace: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("formula has no variables")]
    NoVariables,
    #[error("row limit of {limit} exceeded")]
    RowLimit { limit: usize, partial: Box<Solution> },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Smallest 1-based clause index `>= start` that `r` does not fulfill.
pub fn pending(r: &Row, cnf: &Cnf, start: usize) -> Option<usize> {
    let from = start.max(1);
    cnf.clauses().iter().enumerate().skip(from - 1).find(|(_, c)| !r.fulfills(c)).map(|(i, _)| i + 1)
}

/// Streams final rows in discovery order.
pub struct Engine<'a> {
    cnf: &'a Cnf,
    opts: Options,
    stack: Vec<WorkItem>,
    stats: Stats,
    events: Vec<TraceEvent>,
    check: Option<StepCheck>,
}

struct StepCheck {
    models: ModelSet,
    finals: ModelSet,
    covered: BigUint,
}

impl<'a> Engine<'a> {
    pub fn new(cnf: &'a Cnf, opts: Options) -> Result<Self, EngineError> {
        let t = cnf.num_vars();
        let start = Row::full(t).map_err(|_| EngineError::NoVariables)?;
        let check = if opts.check_steps {
            let models = oracle::brute_models(cnf, oracle::DEFAULT_LIMIT)
                .map_err(|e| EngineError::Invariant(format!("step checks unavailable: {e}")))?;
            Some(StepCheck { models, finals: ModelSet::empty(t), covered: start.cardinality() })
        } else {
            None
        };
        let stack = if cnf.is_trivially_unsat() { Vec::new() } else { vec![WorkItem { row: start, next: 1 }] };
        let mut engine = Engine { cnf, opts, stack, stats: Stats::default(), events: Vec::new(), check };
        engine.stats.max_stack = engine.stack.len();
        Ok(engine)
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn stack(&self) -> &[WorkItem] {
        &self.stack
    }

    /// Takes the trace events recorded so far.
    pub fn drain_trace(&mut self) -> Vec<TraceEvent> {
        std::mem::take(&mut self.events)
    }

    fn record(&mut self, event: impl FnOnce() -> TraceEvent) {
        if self.opts.trace {
            self.events.push(event());
        }
    }

    fn step(&mut self) -> Option<Result<Row, EngineError>> {
        while let Some(WorkItem { row, next }) = self.stack.pop() {
            self.record(|| TraceEvent::Pop { row: row.clone() });
            let Some(index) = pending(&row, self.cnf, next) else {
                self.stats.final_rows += 1;
                self.record(|| TraceEvent::Final { row: row.clone() });
                if let Some(check) = self.check.as_mut() {
                    for i in row.member_indices() {
                        check.finals.insert(i);
                    }
                }
                return Some(Ok(row));
            };

            let clause = &self.cnf.clauses()[index - 1];
            let sons = impose_clause(&row, clause).expect("pending clause is not fulfilled");
            self.stats.impositions += 1;
            self.stats.sons_generated += sons.len();
            if self.opts.trace {
                if let Some((a, b)) = mixed_split(&row, clause) {
                    self.events.push(TraceEvent::Split { clause: index, barred: a.to_string(), encircled: b.to_string() });
                }
                self.events.push(TraceEvent::Impose { clause: index, row: row.clone(), sons: sons.len() });
            }

            let remaining = &self.cnf.clauses()[index..];
            let mut kept = Vec::with_capacity(sons.len());
            for son in sons {
                if self.opts.prune {
                    self.stats.prune_calls += 1;
                    if !feasible(&son, remaining) {
                        self.stats.prune_hits += 1;
                        self.record(|| TraceEvent::Prune { row: son.clone() });
                        continue;
                    }
                }
                kept.push(son);
            }
            // reversed so the first son is popped first
            for son in kept.into_iter().rev() {
                self.record(|| TraceEvent::Push { row: son.clone(), next: index + 1 });
                self.stack.push(WorkItem { row: son, next: index + 1 });
            }
            self.stats.max_stack = self.stats.max_stack.max(self.stack.len());

            if let Err(e) = self.check_partition(&row) {
                return Some(Err(e));
            }
        }
        None
    }

    fn check_partition(&mut self, parent: &Row) -> Result<(), EngineError> {
        let Some(check) = self.check.as_mut() else { return Ok(()) };
        let mut union = check.finals.clone();
        let mut covered = BigUint::from(check.finals.len());
        for item in &self.stack {
            covered += item.row.cardinality();
            for i in item.row.member_indices() {
                if !union.insert(i) {
                    return Err(EngineError::Invariant(format!("stacked row {} overlaps another row", item.row)));
                }
            }
        }
        if let Some(i) = check.models.first_missing_from(&union) {
            return Err(EngineError::Invariant(format!("model index {i} lost while imposing on {parent}")));
        }
        if covered >= check.covered {
            return Err(EngineError::Invariant(format!("no progress imposing on {parent}")));
        }
        check.covered = covered;
        Ok(())
    }
}

impl Iterator for Engine<'_> {
    type Item = Result<Row, EngineError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.step()
    }
}

/// Runs the engine to completion and collects the final rows.
pub fn solve(cnf: &Cnf, opts: Options) -> Result<Solution, EngineError> {
    let max_rows = opts.max_rows;
    let mut engine = Engine::new(cnf, opts)?;
    let mut solution = Solution::empty();
    while let Some(row) = engine.next() {
        let row = row?;
        if max_rows.is_some_and(|limit| solution.final_rows.len() >= limit) {
            solution.stats = engine.stats().clone();
            solution.trace = engine.drain_trace();
            return Err(EngineError::RowLimit { limit: max_rows.unwrap_or(0), partial: Box::new(solution) });
        }
        solution.model_count += row.cardinality();
        solution.final_rows.push(row);
    }
    solution.stats = engine.stats().clone();
    solution.trace = engine.drain_trace();
    Ok(solution)
}

//! A small complete DPLL solver, used to discard rows that hold no model of
//! the remaining clauses.

use crate::formula::{Clause, Cnf};
use crate::row::Row;

/// Variable count plus a clause list.
#[derive(Debug, Clone, Default)]
pub struct SatInstance {
    pub t: usize,
    pub clauses: Vec<Clause>,
}

impl SatInstance {
    pub fn new(t: usize, clauses: Vec<Clause>) -> Self {
        SatInstance { t, clauses }
    }
}

impl From<&Cnf> for SatInstance {
    fn from(cnf: &Cnf) -> Self {
        SatInstance { t: cnf.num_vars(), clauses: cnf.clauses().to_vec() }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DpllConfig {
    pub pure_literals: bool,
}

pub fn satisfiable(inst: &SatInstance) -> bool {
    satisfiable_with(inst, DpllConfig::default())
}

/// Unit propagation to fixpoint, then branching on the lowest-index
/// unassigned variable of an open clause, true first.
pub fn satisfiable_with(inst: &SatInstance, config: DpllConfig) -> bool {
    let clauses: Vec<Vec<i64>> = inst.clauses.iter().map(|c| c.literals().map(|l| l.to_dimacs()).collect()).collect();
    let mut solver = Dpll { clauses, values: vec![0; inst.t + 1], trail: Vec::new(), config };
    solver.search()
}

/// Whether some member of `r` satisfies every clause of `remaining`.
pub fn feasible(r: &Row, remaining: &[Clause]) -> bool {
    let sigma = r.to_cnf();
    let mut clauses = sigma.clauses().to_vec();
    clauses.extend_from_slice(remaining);
    satisfiable(&SatInstance::new(r.len(), clauses))
}

struct Dpll {
    clauses: Vec<Vec<i64>>,
    /// Indexed by variable: 0 unassigned, 1 true, -1 false.
    values: Vec<i8>,
    trail: Vec<usize>,
    config: DpllConfig,
}

enum Status {
    Satisfied,
    Conflict,
    Unit(i64),
    Open,
}

impl Dpll {
    fn lit_value(&self, lit: i64) -> i8 {
        let v = self.values[lit.unsigned_abs() as usize];
        if lit > 0 {
            v
        } else {
            -v
        }
    }

    fn assign(&mut self, lit: i64) {
        let var = lit.unsigned_abs() as usize;
        self.values[var] = if lit > 0 { 1 } else { -1 };
        self.trail.push(var);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().expect("trail");
            self.values[var] = 0;
        }
    }

    fn status(&self, clause: &[i64]) -> Status {
        let mut unassigned = None;
        let mut open = 0;
        for &lit in clause {
            match self.lit_value(lit) {
                1 => return Status::Satisfied,
                0 => {
                    open += 1;
                    unassigned = Some(lit);
                }
                _ => {}
            }
        }
        match (open, unassigned) {
            (0, _) => Status::Conflict,
            (1, Some(lit)) => Status::Unit(lit),
            _ => Status::Open,
        }
    }

    /// False on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for i in 0..self.clauses.len() {
                match self.status(&self.clauses[i]) {
                    Status::Conflict => return false,
                    Status::Unit(lit) => {
                        self.assign(lit);
                        changed = true;
                    }
                    Status::Satisfied | Status::Open => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn assign_pure_literals(&mut self) {
        let mut polarity = vec![0u8; self.values.len()];
        for clause in &self.clauses {
            if matches!(self.status(clause), Status::Satisfied) {
                continue;
            }
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if self.values[var] == 0 {
                    polarity[var] |= if lit > 0 { 1 } else { 2 };
                }
            }
        }
        for (var, p) in polarity.into_iter().enumerate() {
            match p {
                1 => self.assign(var as i64),
                2 => self.assign(-(var as i64)),
                _ => {}
            }
        }
    }

    fn branch_var(&self) -> Option<usize> {
        self.clauses
            .iter()
            .filter(|c| !matches!(self.status(c), Status::Satisfied))
            .flat_map(|c| c.iter().map(|l| l.unsigned_abs() as usize))
            .filter(|&v| self.values[v] == 0)
            .min()
    }

    fn search(&mut self) -> bool {
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo_to(mark);
            return false;
        }
        if self.config.pure_literals {
            self.assign_pure_literals();
        }
        let Some(var) = self.branch_var() else {
            // no open clause left
            return true;
        };
        let decision = self.trail.len();
        for lit in [var as i64, -(var as i64)] {
            self.assign(lit);
            if self.search() {
                return true;
            }
            self.undo_to(decision);
        }
        self.undo_to(mark);
        false
    }
}

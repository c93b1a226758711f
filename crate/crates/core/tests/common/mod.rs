#![allow(dead_code)]

use men_core::{Clause, Cnf};
use rand::Rng;

/// Mixed-clause worked example over ten variables.
pub fn mixed_example() -> Cnf {
    Cnf::from_dimacs_clauses(
        10,
        &[&[-1, -2, -3], &[4, 5, 6, 7], &[-8, -9, -10], &[-2, -3, -4, -5, 6, 7, 8, 9], &[1, -3, -4, -6, -7]],
    )
    .unwrap()
}

/// Four random five-literal clauses; the last one repeats x9 with both signs.
pub fn phi1() -> Cnf {
    Cnf::from_dimacs_clauses(10, PHI1).unwrap()
}

pub const PHI1: &[&[i64]] = &[&[5, 7, 10, -2, -4], &[1, 2, 9, -7, -5], &[2, 3, 7, -4, -9], &[8, 9, 10, -4, -9]];

pub fn phi1_extended() -> Cnf {
    let mut raw = PHI1.to_vec();
    raw.push(&[5, 6, 8, -3, -9]);
    Cnf::from_dimacs_clauses(10, &raw).unwrap()
}

/// Five ten-literal clauses over 18 variables, alternately positive and negative.
pub fn phi2() -> Cnf {
    Cnf::from_dimacs_clauses(
        18,
        &[
            &[3, 4, 6, 7, 9, 14, 15, 16, 17, 18],
            &[-3, -5, -8, -9, -11, -12, -13, -14, -15, -17],
            &[1, 4, 5, 6, 9, 12, 14, 15, 17, 18],
            &[-1, -2, -3, -8, -11, -13, -14, -16, -17, -18],
            &[2, 3, 7, 8, 11, 13, 14, 16, 17, 18],
        ],
    )
    .unwrap()
}

/// (x1 v ... v xt) and (-x1 v ... v -xt).
pub fn mu(t: usize) -> Cnf {
    Cnf::new(t, vec![Clause::new(1..=t, []).unwrap(), Clause::new([], 1..=t).unwrap()]).unwrap()
}

pub fn random_clause<R: Rng>(rng: &mut R, t: usize, max_len: usize) -> Clause {
    let len = rng.gen_range(1..=t.min(max_len));
    let mut vars: Vec<usize> = (1..=t).collect();
    for i in 0..len {
        let j = rng.gen_range(i..t);
        vars.swap(i, j);
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for &v in &vars[..len] {
        if rng.gen_bool(0.5) {
            pos.push(v);
        } else {
            neg.push(v);
        }
    }
    Clause::new(pos, neg).unwrap()
}

pub fn random_cnf<R: Rng>(rng: &mut R, t: usize, max_clauses: usize, max_len: usize) -> Cnf {
    let n = rng.gen_range(0..=max_clauses);
    Cnf::new(t, (0..n).map(|_| random_clause(rng, t, max_len)).collect()).unwrap()
}

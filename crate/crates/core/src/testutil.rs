use rand::Rng;

use crate::formula::{Clause, Cnf};
use crate::row::{Kind, Row, Symbol};

pub(crate) fn random_row<R: Rng>(rng: &mut R, t: usize) -> Row {
    let ngroups = rng.gen_range(0..=3u32);
    let kinds: Vec<Kind> = (0..ngroups).map(|_| [Kind::E, Kind::N, Kind::M][rng.gen_range(0..3)]).collect();
    let mut symbols: Vec<Symbol> = (0..t)
        .map(|_| {
            let pick = rng.gen_range(0..3 + 2 * ngroups);
            match pick {
                0 => Symbol::Zero,
                1 => Symbol::One,
                2 => Symbol::Two,
                g => {
                    let g = (g - 3) / 2;
                    Symbol::wildcard(kinds[g as usize], g + 1)
                }
            }
        })
        .collect();
    for g in 0..ngroups {
        let at: Vec<usize> =
            (0..t).filter(|&i| symbols[i] == Symbol::wildcard(kinds[g as usize], g + 1)).collect();
        if at.len() == 1 {
            symbols[at[0]] = Symbol::Two;
        }
    }
    Row::from_symbols(symbols).expect("valid random row")
}

pub(crate) fn random_clause<R: Rng>(rng: &mut R, t: usize) -> Clause {
    loop {
        let len = rng.gen_range(1..=t.min(6));
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for _ in 0..len {
            let v = rng.gen_range(1..=t);
            if pos.contains(&v) || neg.contains(&v) {
                continue;
            }
            if rng.gen_bool(0.5) {
                pos.push(v);
            } else {
                neg.push(v);
            }
        }
        if let Ok(c) = Clause::new(pos, neg) {
            return c;
        }
    }
}

pub(crate) fn random_cnf<R: Rng>(rng: &mut R, t: usize, max_clauses: usize) -> Cnf {
    let n = rng.gen_range(0..=max_clauses);
    Cnf::new(t, (0..n).map(|_| random_clause(rng, t)).collect()).expect("vars within t")
}

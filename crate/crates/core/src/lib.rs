//! Enumerates the full model set of a CNF formula as a disjoint union of
//! compressed rows.
//!
//! A row fixes some bits, leaves others free (`2`), and ties groups of
//! positions together with wildcards: `e` (at least one 1), `n` (at least one
//! 0) and `m` (both). Clauses are imposed one at a time on a LIFO stack of
//! rows; see [`engine::solve`].
//!
//! ```
//! use men_core::{engine, formula};
//!
//! let cnf = formula::parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n").unwrap();
//! let sol = engine::solve(&cnf, engine::Options::default()).unwrap();
//! assert_eq!(sol.final_rows.len(), 1);
//! assert_eq!(sol.final_rows[0].to_string(), "m1 m1 m1");
//! assert_eq!(sol.model_count, 6u32.into());
//! ```

pub mod engine;
pub mod formula;
pub mod impose;
pub mod oracle;
pub mod row;
pub mod satcheck;

#[cfg(test)]
mod testutil;

pub use engine::{solve, Options, Solution};
pub use formula::{parse_dimacs, Assignment, Clause, Cnf};
pub use row::{Row, Row012};

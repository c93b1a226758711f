mod common;

use common::{mixed_example, mu, phi1, phi1_extended, phi2, random_cnf};
use men_core::engine::{Engine, EngineError};
use men_core::oracle::{brute_models, check_partition, DEFAULT_LIMIT};
use men_core::{parse_dimacs, solve, Cnf, Options};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_partition(cnf: &Cnf, models: u64) {
    let solution = solve(cnf, Options::default()).unwrap();
    assert_eq!(solution.model_count, BigUint::from(models));
    let report = check_partition(&solution.final_rows, cnf, DEFAULT_LIMIT).unwrap();
    assert!(report.passed(), "{report}");
}

#[test]
fn mixed_example_has_705_models() {
    assert_partition(&mixed_example(), 705);
}

#[test]
fn phi1_has_928_models() {
    assert_eq!(phi1().dropped_tautologies(), 1);
    assert_partition(&phi1(), 928);
}

#[test]
fn phi1_extended_has_898_models() {
    assert_partition(&phi1_extended(), 898);
}

#[test]
fn phi2_has_260928_models() {
    assert_partition(&phi2(), 260_928);
}

#[test]
fn mu_is_one_row() {
    for t in 2..=10 {
        let s = solve(&mu(t), Options::default()).unwrap();
        assert_eq!(s.final_rows.len(), 1);
        assert_eq!(s.final_rows[0].to_string(), vec!["m1"; t].join(" "));
    }
}

#[test]
fn dimacs_round_trip_preserves_models() {
    for cnf in [mixed_example(), phi1(), phi2()] {
        let back = parse_dimacs(&cnf.to_dimacs()).unwrap();
        assert_eq!(back.clauses(), cnf.clauses());
        assert_eq!(
            brute_models(&back, DEFAULT_LIMIT).unwrap().len(),
            brute_models(&cnf, DEFAULT_LIMIT).unwrap().len()
        );
    }
}

#[test]
fn step_checks_hold_on_random_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 1..=9 {
        let cnf = random_cnf(&mut rng, t, 10, 5);
        let opts = Options { check_steps: true, ..Options::default() };
        let rows: Result<Vec<_>, _> = Engine::new(&cnf, opts).unwrap().collect();
        let rows = rows.unwrap();
        assert!(check_partition(&rows, &cnf, DEFAULT_LIMIT).unwrap().passed());
    }
}

#[test]
fn row_limit_returns_partial_solution() {
    match solve(&phi2(), Options { max_rows: Some(3), ..Options::default() }) {
        Err(EngineError::RowLimit { limit: 3, partial }) => assert_eq!(partial.final_rows.len(), 3),
        other => panic!("unexpected {other:?}"),
    }
}

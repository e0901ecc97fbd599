//! Acceptance suite. Each test prints one `[PASS]`/`[FAIL]` line followed by
//! its evidence; run with `--nocapture` to see them.

use std::sync::OnceLock;

use qhash_core::real::DEFAULT_PRECISION_BITS;
use qhash_core::repro::{self, Repro};
use qhash_core::Limits;

const SEED: u64 = 20240601;
const MC_TRIALS: usize = 400;

fn ctx() -> &'static Repro {
    static CTX: OnceLock<Repro> = OnceLock::new();
    CTX.get_or_init(|| Repro::new(Limits::default(), DEFAULT_PRECISION_BITS, SEED, MC_TRIALS))
}

fn check(id: &str) {
    let r = repro::run(id, ctx());
    let mut out = r.line();
    for d in &r.details {
        out.push_str("\n    ");
        out.push_str(d);
    }
    println!("{out}");
    assert!(r.pass, "{out}");
}

#[test]
fn c01_complete_mappings_of_cyclic_groups() {
    check("1");
}

#[test]
fn c02_complete_mappings_of_fields() {
    check("2");
}

#[test]
fn c03_even_cyclic_groups_vanish() {
    check("3");
}

#[test]
fn c04_separated_subset_golden_values() {
    check("4");
}

#[test]
fn c05_shift_union_closed_form() {
    check("5");
}

#[test]
fn c06_brute_force_matches_inclusion_exclusion() {
    check("6");
}

#[test]
fn c07_small_coordinate_subset_law() {
    check("7");
}

#[test]
fn c08_rate_table() {
    check("8");
}

#[test]
fn c09_beats_probabilistic_certificates() {
    check("9");
}

#[test]
fn c10_monte_carlo_expectation() {
    check("10");
}

#[test]
fn four_column_exceeds_three_column() {
    check("note");
}

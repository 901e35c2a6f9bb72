//! One test per acceptance criterion. Each prints a single pass/fail line,
//! followed by the checks that failed, if any. Run with `--nocapture` to see
//! the lines.

use oproot::suite::run_criterion;

fn run(id: usize) {
    let outcome = match run_criterion(id) {
        Ok(o) => o,
        Err(e) => panic!("criterion {id} [FAIL] error: {e}"),
    };
    println!("{}", outcome.summary_line());
    for c in &outcome.checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        println!("    {mark} {}: {}", c.name, c.detail);
    }
    assert!(outcome.pass(), "{}", outcome.summary_line());
}

#[test]
fn criterion_01_cesaro_closed_form() {
    run(1);
}

#[test]
fn criterion_02_cesaro_cross_oracle() {
    run(2);
}

#[test]
fn criterion_03_cesaro_unbounded_growth() {
    run(3);
}

#[test]
fn criterion_04_cesaro_eigenfunctions() {
    run(4);
}

#[test]
fn criterion_05_shift_square_roots() {
    run(5);
}

#[test]
fn criterion_06_volterra_abel_root() {
    run(6);
}

#[test]
fn criterion_07_compressed_shift_root() {
    run(7);
}

#[test]
fn criterion_08_boundary_and_disc_images() {
    run(8);
}

#[test]
fn criterion_09_tcos_root() {
    run(9);
}

#[test]
fn criterion_10_lebedev_and_hilbert_root() {
    run(10);
}

#[test]
fn criterion_11_toeplitz_decision() {
    run(11);
}

#[test]
fn criterion_12_roots_commute_with_squares() {
    run(12);
}

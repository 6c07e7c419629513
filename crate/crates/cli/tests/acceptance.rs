//! Acceptance suite: one test per verification criterion, printing one
//! pass/fail line per criterion. Tolerances are pinned inside the
//! `verify` module; a criterion passes only if every one of its checks
//! passes.

use suddenlab::verify::{self, CheckRow};

fn run(criterion: u8, name: &str) {
    let rows: Vec<CheckRow> = verify::run_criterion(criterion);
    assert!(!rows.is_empty(), "criterion {criterion} produced no checks");
    let pass = rows.iter().all(|r| r.pass);
    println!(
        "criterion {criterion:2} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    for row in &rows {
        println!(
            "    [{}] {} expected {:.9e} computed {:.9e} tol {:.1e}{}",
            if row.pass { "ok" } else { "FAIL" },
            row.name,
            row.expected,
            row.computed,
            row.tol,
            if row.note.is_empty() {
                String::new()
            } else {
                format!("  ({})", row.note)
            }
        );
    }
    assert!(pass, "criterion {criterion} failed; see lines above");
}

#[test]
fn criterion_01_depolarizing_breaking_time() {
    run(1, "depolarizing entanglement-breaking time");
}

#[test]
fn criterion_02_ghz_bell_violation_deaths() {
    run(2, "ghz bell-violation deaths");
}

#[test]
fn criterion_03_w_state_violation_death() {
    run(3, "w-state violation death");
}

#[test]
fn criterion_04_collective_dephasing_death() {
    run(4, "collective-dephasing x-state death");
}

#[test]
fn criterion_05_noise_non_additivity() {
    run(5, "noise non-additivity");
}

#[test]
fn criterion_06_qubit_qutrit_death() {
    run(6, "qubit-qutrit negativity death");
}

#[test]
fn criterion_07_photonic_damping_deaths() {
    run(7, "photonic damping deaths");
}

#[test]
fn criterion_08_werner_critical_fidelity() {
    run(8, "werner damping critical fidelity");
}

#[test]
fn criterion_09_isotropic_separability_crossing() {
    run(9, "isotropic-state separability crossing");
}

#[test]
fn criterion_10_two_qutrit_separability_boundary() {
    run(10, "two-qutrit separability boundary");
}

#[test]
fn criterion_11_bell_bound_saturation() {
    run(11, "bell bound saturation");
}

#[test]
fn criterion_12_property_suites() {
    run(12, "property suites");
}

#[test]
fn criterion_13_vacuum_damping_death_time() {
    run(13, "vacuum damping death time");
}

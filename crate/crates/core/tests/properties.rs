//! Cross-module property suites: channel physicality across random
//! parameters, closed-form/generic measure agreement, entanglement-witness
//! orderings along noise trajectories, and Bell-bound saturation checks.

use rand::Rng;
use suddenlab_core::channels::{
    amplitude_damping_qubit, collective_dephasing, dephasing_qubit, depolarizing_qubit,
    depolarizing_qudit, multi_local, multi_local_uniform, qutrit_amplitude_damping,
};
use suddenlab_core::measures::{
    concurrence, entanglement_of_formation, isotropic_eof, negativity, phase_correlation,
    x_state_concurrence,
};
use suddenlab_core::nonlocality::{chsh_max, optimize_angles, BellFamily};
use suddenlab_core::random::{random_mixed_state, random_pure_state, random_x_state, rng};
use suddenlab_core::states::{x_state, DensityMatrix};
use suddenlab_core::tensor::{eigvals_hermitian, partial_transpose, DimList};

#[test]
fn every_shipped_channel_is_cptp_across_random_parameters() {
    let mut r = rng(1009);
    for _ in 0..100 {
        let g: f64 = r.gen();
        let t: f64 = r.gen::<f64>() * 4.0;
        let tau: f64 = 0.2 + r.gen::<f64>() * 3.0;
        let channels = vec![
            dephasing_qubit(g).unwrap(),
            amplitude_damping_qubit(g).unwrap(),
            depolarizing_qubit(tau, t).unwrap(),
            depolarizing_qudit(3, r.gen()).unwrap(),
            depolarizing_qudit(4, r.gen()).unwrap(),
            qutrit_amplitude_damping(r.gen::<f64>() * 2.0, r.gen::<f64>() * 2.0, t).unwrap(),
            collective_dephasing(2, r.gen::<f64>() * 2.0, t).unwrap(),
            collective_dephasing(3, r.gen::<f64>(), t).unwrap(),
        ];
        for ch in &channels {
            let (ok, dev) = ch.verify_cptp();
            assert!(ok, "CPTP deviation {dev:.3e}");
        }
        // products and compositions stay CPTP
        let pair = multi_local(&[channels[0].clone(), channels[1].clone()]).unwrap();
        let (ok, dev) = pair.verify_cptp();
        assert!(ok, "multi-local CPTP deviation {dev:.3e}");
        let seq = channels[0].compose(&channels[1]).unwrap();
        let (ok, dev) = seq.verify_cptp();
        assert!(ok, "composed CPTP deviation {dev:.3e}");
    }
}

#[test]
fn x_state_closed_form_matches_wootters_on_1000_draws() {
    let mut r = rng(1013);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = random_x_state(&mut r);
        let rho = x_state(&p).unwrap();
        let fast = x_state_concurrence(&p).unwrap().value;
        let generic = concurrence(&rho).unwrap().value;
        worst = worst.max((fast - generic).abs());
    }
    assert!(worst <= 1e-10, "worst closed-form/Wootters gap {worst:.3e}");
}

#[test]
fn negativity_positive_iff_partial_transpose_negative() {
    let mut r = rng(1019);
    for dims in [vec![2usize, 2], vec![2, 3]] {
        let dl = DimList::new(dims).unwrap();
        for _ in 0..1000 {
            let rho = random_mixed_state(&mut r, &dl);
            let pt = partial_transpose(rho.mat(), rho.dims(), 0).unwrap();
            let min_eig = *eigvals_hermitian(&pt.hermitize()).unwrap().last().unwrap();
            let neg = negativity(&rho, 0).unwrap();
            assert_eq!(
                neg > 1e-12,
                min_eig < -1e-12,
                "negativity {neg:.3e} vs min PT eigenvalue {min_eig:.3e}"
            );
        }
    }
}

#[test]
fn channel_application_preserves_state_validity_on_1000_inputs() {
    let mut r = rng(1021);
    let two_qubit = DimList::qubits(2);
    for k in 0..1000 {
        let rho = random_mixed_state(&mut r, &two_qubit);
        let g: f64 = r.gen();
        let ch = multi_local(&[
            dephasing_qubit(g).unwrap(),
            amplitude_damping_qubit(r.gen()).unwrap(),
        ])
        .unwrap();
        // from_parts inside apply re-checks Hermiticity, trace and PSD
        let out = ch.apply(&rho).unwrap_or_else(|e| panic!("draw {k}: {e}"));
        assert!((out.mat().trace().re - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn eof_is_monotone_along_dephasing_trajectories() {
    let mut r = rng(1031);
    for _ in 0..50 {
        let p = random_x_state(&mut r);
        let rho0 = x_state(&p).unwrap();
        let mut previous = f64::INFINITY;
        for k in 0..40 {
            let gamma = (-0.1 * k as f64).exp();
            let ch = multi_local_uniform(&dephasing_qubit(gamma).unwrap(), 2).unwrap();
            let rho = ch.apply(&rho0).unwrap();
            let c = concurrence(&rho).unwrap().value.min(1.0);
            let eof = entanglement_of_formation(c).unwrap();
            assert!(eof <= previous + 1e-9, "EoF rose along dephasing");
            previous = eof;
        }
    }
}

#[test]
fn concurrence_dominated_by_phase_correlation_before_death() {
    // ordering along multi-local dephasing of entangled X-states with
    // a, d > 0; equality at the death time is reported, not asserted
    let mut r = rng(1033);
    let mut checked = 0;
    let mut equality_gaps: Vec<f64> = Vec::new();
    while checked < 25 {
        let p = random_x_state(&mut r);
        if p.a <= 0.01 || p.d <= 0.01 {
            continue;
        }
        let rho0 = x_state(&p).unwrap();
        if concurrence(&rho0).unwrap().value < 0.05 {
            continue;
        }
        checked += 1;
        let mut death_gap: Option<f64> = None;
        for k in 0..=200 {
            let gamma = (-0.02 * k as f64).exp();
            let ch = multi_local_uniform(&dephasing_qubit(gamma).unwrap(), 2).unwrap();
            let rho = ch.apply(&rho0).unwrap();
            let c = concurrence(&rho).unwrap().value;
            let damped = suddenlab_core::states::XStateParams {
                w: p.w * gamma * gamma,
                z: p.z * gamma * gamma,
                ..p
            };
            let pc = phase_correlation(&damped);
            assert!(
                c <= pc + 1e-9,
                "concurrence {c} exceeded phase correlation {pc}"
            );
            if c <= 1e-12 && death_gap.is_none() {
                death_gap = Some(pc);
            }
        }
        if let Some(gap) = death_gap {
            equality_gaps.push(gap);
        }
    }
    // report the empirical status of the equality claim at the death time
    if !equality_gaps.is_empty() {
        let max_gap = equality_gaps.iter().cloned().fold(0.0, f64::max);
        println!(
            "phase correlation at detected deaths: {} cases, max residual {max_gap:.3e} \
             (equality does not hold for generic X-states; ordering verified)",
            equality_gaps.len()
        );
    }
}

#[test]
fn combined_noise_concurrence_matches_closed_form_pointwise() {
    // diagonal (0,4,4,1)/9 with inner coherence λ/9 under simultaneous
    // dephasing (Γ₂) and damping (Γ₁):
    // C(t) = (2/9)·e^{−Γ₁t}·max{0, λe^{−Γ₂t} − √(ω₁⁴+8ω₁²)}, ω₁² = 1−e^{−Γ₁t}
    for lambda in [1.0f64, 2.5] {
        let (g1, g2) = (0.8f64, 1.3f64);
        let p = suddenlab_core::states::XStateParams {
            a: 0.0,
            b: 4.0 / 9.0,
            c: 4.0 / 9.0,
            d: 1.0 / 9.0,
            w: suddenlab_core::tensor::ZERO,
            z: suddenlab_core::tensor::cr(lambda / 9.0),
        };
        let rho0 = x_state(&p).unwrap();
        for k in 0..60 {
            let t = 0.05 * k as f64;
            let local = dephasing_qubit((-g2 * t / 2.0).exp())
                .unwrap()
                .compose(&amplitude_damping_qubit((-g1 * t / 2.0).exp()).unwrap())
                .unwrap();
            let rho = multi_local_uniform(&local, 2).unwrap().apply(&rho0).unwrap();
            let simulated = concurrence(&rho).unwrap().value;
            let om2 = 1.0 - (-g1 * t).exp();
            let closed = 2.0 / 9.0
                * (-g1 * t).exp()
                * (lambda * (-g2 * t).exp() - (om2 * om2 + 8.0 * om2).sqrt()).max(0.0);
            assert!(
                (simulated - closed).abs() <= 1e-12,
                "λ={lambda}, t={t}: {simulated} vs {closed}"
            );
        }
    }
}

#[test]
fn optimized_chsh_never_exceeds_tsirelson_over_500_states() {
    let mut r = rng(1039);
    let bound = 2.0 * 2f64.sqrt() + 1e-9;
    for k in 0..500 {
        let rho = if k % 3 == 0 {
            random_pure_state(&mut r, &DimList::qubits(2))
        } else {
            random_mixed_state(&mut r, &DimList::qubits(2))
        };
        let (_, best) = optimize_angles(&rho, BellFamily::Chsh, 8, 25).unwrap();
        assert!(best <= bound, "state {k}: optimized CHSH {best}");
        // and stays honest against the analytic maximum
        assert!(best <= chsh_max(&rho).unwrap() + 1e-9);
    }
}

#[test]
fn optimized_svetlichny_never_exceeds_quantum_max_over_200_states() {
    let mut r = rng(1049);
    let bound = 4.0 * 2f64.sqrt() + 1e-9;
    for k in 0..200 {
        let rho = random_pure_state(&mut r, &DimList::qubits(3));
        let (_, best) = optimize_angles(&rho, BellFamily::Svetlichny, 8, 10).unwrap();
        assert!(best <= bound, "state {k}: optimized Svetlichny {best}");
    }
}

#[test]
fn isotropic_eof_is_continuous_on_unit_interval() {
    for d in [3usize, 4, 5] {
        let mut prev = isotropic_eof(0.0, d).unwrap();
        for k in 1..=2000 {
            let f = k as f64 / 2000.0;
            let v = isotropic_eof(f, d).unwrap();
            assert!(
                (v - prev).abs() < 5e-3,
                "jump of {} at F = {f}, d = {d}",
                (v - prev).abs()
            );
            prev = v;
        }
    }
}

#[test]
fn density_matrix_text_format_round_trips_interesting_states() {
    let mut r = rng(1051);
    for dims in [vec![2usize, 2], vec![2, 3], vec![3, 3]] {
        let dl = DimList::new(dims).unwrap();
        let rho = random_mixed_state(&mut r, &dl);
        let text = rho.to_text();
        let back = DensityMatrix::from_text(&text).unwrap();
        assert_eq!(rho.mat(), back.mat());
    }
}

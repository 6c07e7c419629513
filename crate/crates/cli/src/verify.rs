//! The acceptance checklist: every published number in scope is recomputed
//! from a simulation and compared against its reference value at a pinned
//! tolerance. `run_all` powers both the `verify` subcommand and the
//! acceptance test target.

use crate::runner;
use crate::scenario::Mode;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};
use suddenlab_core::channels::{
    amplitude_damping_qubit, collective_dephasing, dephasing_qubit, depolarizing_qubit,
    depolarizing_qudit, identity, multi_local, multi_local_uniform, qutrit_amplitude_damping,
};
use suddenlab_core::evolution::{
    excitation_number, jaynes_cummings_hamiltonian, lindblad_evolve, multi_local_lindblad,
    sigma_minus, sigma_plus, thermal_rates, CavityModel,
};
use suddenlab_core::measures::{
    caves_milburn_s, concurrence, isotropic_eof, negativity, x_state_concurrence,
};
use suddenlab_core::nonlocality::{
    optimize_angles, svetlichny_ghz_settings, svetlichny_value, tripartite_settings,
    violation_margin, wwzb_ghz_settings, BellFamily,
};
use suddenlab_core::random::{random_mixed_state, random_x_state, rng};
use suddenlab_core::states::{
    bell_state, caves_milburn_state, ghz_state, isotropic_state, max_entangled_projector,
    qubit_qutrit_ansatz, w_state, x_state, Bell, XStateParams,
};
use suddenlab_core::sudden_death::{detect_death_time, time_grid, DeathStatus, ZeroStyle};
use suddenlab_core::tensor::{cr, eigvals_hermitian, partial_transpose, ComplexMatrix, DimList, ZERO};
use suddenlab_core::Result;
use rand::Rng;

/// One row of the verification table.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub criterion: u8,
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tol: f64,
    pub pass: bool,
    pub note: String,
}

impl CheckRow {
    fn diff(criterion: u8, name: &str, expected: f64, computed: f64, tol: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            expected,
            computed,
            tol,
            pass: (expected - computed).abs() <= tol,
            note: String::new(),
        }
    }

    fn rel(criterion: u8, name: &str, expected: f64, computed: f64, tol: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            expected,
            computed,
            tol,
            pass: ((expected - computed) / expected).abs() <= tol,
            note: "relative tolerance".into(),
        }
    }

    fn flag(criterion: u8, name: &str, pass: bool, computed: f64, note: &str) -> Self {
        Self {
            criterion,
            name: name.into(),
            expected: 1.0,
            computed,
            tol: 0.0,
            pass,
            note: note.into(),
        }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = note.into();
        self
    }
}

fn fail_row(criterion: u8, name: &str, err: &suddenlab_core::Error) -> CheckRow {
    CheckRow {
        criterion,
        name: name.into(),
        expected: f64::NAN,
        computed: f64::NAN,
        tol: 0.0,
        pass: false,
        note: format!("error: {err}"),
    }
}

/// Criterion 1: depolarizing entanglement-breaking time τ ln 3 from the
/// Choi state's negativity, relative error ≤ 1e−6, τ ∈ {0.5, 1, 2}.
pub fn criterion_01() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for tau in [0.5f64, 1.0, 2.0] {
        let phi = bell_state(Bell::PhiPlus);
        let death = detect_death_time(
            |t| {
                let ch = multi_local(&[
                    depolarizing_qubit(tau, t)?,
                    identity(DimList::single(2)),
                ])?;
                negativity(&ch.apply(&phi)?, 0)
            },
            2.5 * tau,
            1e-9,
            ZeroStyle::Clamped,
        )?;
        let expected = tau * 3f64.ln();
        let computed = death.t_death.unwrap_or(f64::NAN);
        rows.push(CheckRow::rel(
            1,
            &format!("choi negativity death, tau={tau}"),
            expected,
            computed,
            1e-6,
        ));
    }
    Ok(rows)
}

/// Criterion 2: GHZ Bell-violation deaths under multi-local dephasing at
/// maximal-violation settings, plus the pointwise exponential form of the
/// Svetlichny expectation.
pub fn criterion_02() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let ghz = ghz_state(3)?;
    let rate = 1.0;
    let evolve = |t: f64| -> Result<_> {
        multi_local_uniform(&dephasing_qubit((-rate * t).exp())?, 3)?.apply(&ghz)
    };

    let sv_settings = svetlichny_ghz_settings();
    let death = detect_death_time(
        |t| violation_margin(&evolve(t)?, BellFamily::Svetlichny, &sv_settings),
        1.0,
        1e-9,
        ZeroStyle::Signed,
    )?;
    rows.push(
        CheckRow::diff(
            2,
            "svetlichny violation death",
            2f64.sqrt().ln() / 3.0,
            death.t_death.unwrap_or(f64::NAN),
            1e-6,
        )
        .with_note("maximal equatorial settings (printed z-x block cannot violate)"),
    );

    let p5_settings = wwzb_ghz_settings();
    let death = detect_death_time(
        |t| violation_margin(&evolve(t)?, BellFamily::P5, &p5_settings),
        1.0,
        1e-9,
        ZeroStyle::Signed,
    )?;
    rows.push(CheckRow::diff(
        2,
        "class-5 violation death",
        2f64.ln() / 3.0,
        death.t_death.unwrap_or(f64::NAN),
        1e-6,
    ));

    // pointwise |⟨S⟩(t)| = 8√2 |a0||a7| e^{−3Γt} on 100 grid points
    let mut worst = 0.0f64;
    for &t in &time_grid(0.5, 100) {
        let rho = evolve(t)?;
        let s = svetlichny_value(&rho, &sv_settings)?.expectation.abs();
        let expect = 8.0 * 2f64.sqrt() * 0.5 * (-3.0 * rate * t).exp();
        worst = worst.max((s - expect).abs());
    }
    rows.push(CheckRow::diff(
        2,
        "svetlichny expectation pointwise max deviation",
        0.0,
        worst,
        1e-9,
    ));
    Ok(rows)
}

/// Criterion 3: W-state two-setting violation death ln 2/(2Γ) at the
/// printed settings θ_B = π/6, θ_C = π/3.
pub fn criterion_03() -> Result<Vec<CheckRow>> {
    let w = w_state(3)?;
    let rate = 1.0;
    let settings = tripartite_settings(FRAC_PI_6, FRAC_PI_3);
    let death = detect_death_time(
        |t| {
            let rho = multi_local_uniform(&dephasing_qubit((-rate * t).exp())?, 3)?.apply(&w)?;
            violation_margin(&rho, BellFamily::P5, &settings)
        },
        2.0,
        1e-9,
        ZeroStyle::Signed,
    )?;
    Ok(vec![CheckRow::diff(
        3,
        "w-state violation death",
        2f64.ln() / 2.0,
        death.t_death.unwrap_or(f64::NAN),
        1e-6,
    )
    .with_note("class-5 two-setting operator at printed angles")])
}

/// Criterion 4: collective-dephasing X-state death at ln(|w|/√(bc))/(2Γ).
///
/// The quoted parameters w = 0.4, b = c = 0.25 violate positivity
/// (|w| ≤ √(ad) forces |w| ≤ 0.25 once b + c = 0.5), so the simulation
/// uses the ratio-preserving rescale w = 0.2, b = c = 0.125; the death
/// time depends only on |w|/√(bc) and is identical.
pub fn criterion_04() -> Result<Vec<CheckRow>> {
    let rate = 1.0;
    let p = XStateParams {
        a: 0.375,
        b: 0.125,
        c: 0.125,
        d: 0.375,
        w: cr(0.2),
        z: ZERO,
    };
    let rho0 = x_state(&p)?;
    let death = detect_death_time(
        |t| Ok(concurrence(&collective_dephasing(2, rate, t)?.apply(&rho0)?)?.value),
        2.0,
        1e-9,
        ZeroStyle::Clamped,
    )?;
    let expected = (0.4f64 / (0.25f64 * 0.25).sqrt()).ln() / (2.0 * rate);
    let mut rows = vec![CheckRow::diff(
        4,
        "collective dephasing death",
        expected,
        death.t_death.unwrap_or(f64::NAN),
        1e-6,
    )
    .with_note("stated (w=0.4,b=c=0.25) not PSD; simulated at the same w/sqrt(bc)=1.6")];
    // the formula evaluated at the simulated parameters matches too
    let same = (0.2f64 / (0.125f64 * 0.125).sqrt()).ln() / (2.0 * rate);
    rows.push(CheckRow::diff(
        4,
        "formula invariance under rescale",
        expected,
        same,
        1e-15,
    ));
    Ok(rows)
}

/// Criterion 5: noise non-additivity on the λ-state (λ = 1, Γ₁ = Γ₂ = 1).
///
/// The combined-noise root is checked against an independent scalar
/// bisection of λe^{−Γ₂t} = √(ω₁⁴ + 8ω₁²). The single-noise branches are
/// asserted `> 0` at t = 10 as stated; note that the published
/// amplitude-damping concurrence (2/9)[λ − √(ω₁⁴+8ω₁²)]e^{−Γ₁t} itself has
/// a finite root at ω₁² = √17 − 4 for λ < 3, so that branch records the
/// discrepancy rather than hiding it.
pub fn criterion_05() -> Result<Vec<CheckRow>> {
    let lambda = 1.0f64;
    let (g1, g2) = (1.0f64, 1.0f64); // damping, dephasing
    let p = XStateParams {
        a: 0.0,
        b: 4.0 / 9.0,
        c: 4.0 / 9.0,
        d: 1.0 / 9.0,
        w: ZERO,
        z: cr(lambda / 9.0),
    };
    let rho0 = x_state(&p)?;
    let evolve = |t: f64, deph: f64, damp: f64| -> Result<_> {
        let local = dephasing_qubit((-deph * t / 2.0).exp())?
            .compose(&amplitude_damping_qubit((-damp * t / 2.0).exp())?)?;
        multi_local_uniform(&local, 2)?.apply(&rho0)
    };
    let mut rows = Vec::new();

    // combined noise: finite death at the printed root
    let death = detect_death_time(
        |t| Ok(concurrence(&evolve(t, g2, g1)?)?.value),
        2.0,
        1e-9,
        ZeroStyle::Clamped,
    )?;
    let printed_root = {
        // independent bisection on λe^{−Γ₂t} − √(ω₁⁴ + 8ω₁²), ω₁² = 1 − e^{−Γ₁t}
        let g = |t: f64| {
            let om2 = 1.0 - (-g1 * t).exp();
            lambda * (-g2 * t).exp() - (om2 * om2 + 8.0 * om2).sqrt()
        };
        let (mut lo, mut hi) = (0.0f64, 2.0f64);
        assert!(g(lo) > 0.0 && g(hi) < 0.0);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    rows.push(CheckRow::diff(
        5,
        "combined-noise death vs printed-formula root",
        printed_root,
        death.t_death.unwrap_or(f64::NAN),
        1e-6,
    ));
    rows.push(CheckRow::diff(
        5,
        "printed-formula root is ln(10/9)",
        (10f64 / 9.0).ln(),
        printed_root,
        1e-9,
    ));

    // dephasing only: asymptotic, still positive at t = 10
    let deph_only = detect_death_time(
        |t| Ok(concurrence(&evolve(t, g2, 0.0)?)?.value),
        10.0,
        1e-9,
        ZeroStyle::Clamped,
    )?;
    let c10 = concurrence(&evolve(10.0, g2, 0.0)?)?.value;
    rows.push(CheckRow::flag(
        5,
        "dephasing-only asymptotic and positive at t=10",
        deph_only.status == DeathStatus::Asymptotic && c10 > 0.0,
        c10,
        "",
    ));

    // damping only: the criterion asserts asymptotic decay; the published
    // formula's own root sits at t = −ln(5−√17)/Γ₁ ≈ 0.131 for λ = 1
    let damp_only = detect_death_time(
        |t| Ok(concurrence(&evolve(t, 0.0, g1)?)?.value),
        10.0,
        1e-9,
        ZeroStyle::Clamped,
    )?;
    let c10 = concurrence(&evolve(10.0, 0.0, g1)?)?.value;
    let note = match (&damp_only.status, damp_only.t_death) {
        (DeathStatus::FiniteDeath, Some(t)) => format!(
            "simulation dies at t = {t:.6}; the published amplitude-only concurrence \
             (2/9)[lambda - sqrt(w1^4+8w1^2)]e^(-G1 t) shares this root for lambda < 3, \
             contradicting the stated asymptotic decay"
        ),
        _ => String::new(),
    };
    let mut row = CheckRow::flag(
        5,
        "damping-only asymptotic and positive at t=10",
        damp_only.status == DeathStatus::Asymptotic && c10 > 0.0,
        c10,
        "",
    );
    row.note = note;
    rows.push(row);
    Ok(rows)
}

/// Criterion 6: qubit-qutrit negativity death at ln(8x)/Γ for
/// x ∈ {0.15, 0.20, 0.25}.
pub fn criterion_06() -> Result<Vec<CheckRow>> {
    let rate = 1.0;
    let mut rows = Vec::new();
    for x in [0.15f64, 0.20, 0.25] {
        let death = detect_death_time(
            |t| negativity(&qubit_qutrit_ansatz(x, (-rate * t).exp())?, 0),
            2.0,
            1e-9,
            ZeroStyle::Clamped,
        )?;
        rows.push(
            CheckRow::diff(
                6,
                &format!("qubit-qutrit death, x={x}"),
                (8.0 * x).ln() / rate,
                death.t_death.unwrap_or(f64::NAN),
                1e-6,
            )
            .with_note("paper-typo: derived ln(8x)/rate used (printed 8x/rate)"),
        );
    }
    Ok(rows)
}

/// Criterion 7: photonic amplitude damping. |β|² = 3|α|² dies at
/// p = 1/√3; |β|² = |α|²/3 stays entangled for every p < 1.
pub fn criterion_07() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let rate = 1.0;

    // ψ_II: |α|² = 1/4
    let (alpha, beta) = (0.25f64.sqrt(), 0.75f64.sqrt());
    let death = detect_death_time(
        |t| {
            let p = 1.0 - (-rate * t).exp();
            let rho = runner::adh_polarization_state(alpha, beta, p)?;
            Ok(concurrence(&rho)?.value)
        },
        10.0,
        1e-9,
        ZeroStyle::Clamped,
    )?;
    let p_death = death.t_death.map(|t| 1.0 - (-rate * t).exp()).unwrap_or(f64::NAN);
    rows.push(CheckRow::diff(
        7,
        "psi_II death probability",
        1.0 / 3f64.sqrt(),
        p_death,
        1e-6,
    ));

    // ψ_I: |α|² = 3/4
    let (alpha, beta) = (0.75f64.sqrt(), 0.25f64.sqrt());
    let res = detect_death_time(
        |t| {
            let p = 1.0 - (-rate * t).exp();
            let rho = runner::adh_polarization_state(alpha, beta, p)?;
            Ok(concurrence(&rho)?.value)
        },
        10.0,
        1e-9,
        ZeroStyle::Clamped,
    )?;
    let c_end = {
        let p = 1.0 - (-rate * 10.0f64).exp();
        concurrence(&runner::adh_polarization_state(alpha, beta, p)?)?.value
    };
    rows.push(CheckRow::flag(
        7,
        "psi_I asymptotic (entangled for all p < 1)",
        res.status == DeathStatus::Asymptotic && c_end > 0.0,
        c_end,
        "",
    ));
    Ok(rows)
}

/// Criterion 8: the largest Werner fidelity with a finite death under
/// multi-local amplitude damping lies within 0.714 ± 0.005.
pub fn criterion_08() -> Result<Vec<CheckRow>> {
    let preset = crate::presets::preset("werner-adc-critical").expect("preset exists");
    assert_eq!(preset.mode, Mode::CriticalFidelity);
    let report = runner::run(&preset, 1, None)?;
    let largest = report
        .scalars
        .iter()
        .find(|(k, _)| k == "largest_fidelity_with_finite_death")
        .map(|(_, v)| *v)
        .unwrap_or(f64::NAN);
    Ok(vec![CheckRow::diff(
        8,
        "largest fidelity with finite death",
        0.714,
        largest,
        0.005,
    )
    .with_note("analytic boundary (3*sqrt(5)-1)/8 = 0.71353")])
}

/// Criterion 9: isotropic d = 3, 4 starting at F = 1 under two-sided
/// depolarizing: the fidelity crosses 1/d at finite time and the isotropic
/// entanglement of formation is exactly zero there.
pub fn criterion_09() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let rate = 1.0;
    for d in [3usize, 4] {
        let rho0 = isotropic_state(d, 1.0)?;
        let proj = max_entangled_projector(d);
        let fidelity_at = |t: f64| -> Result<f64> {
            let lambda = 1.0 - (-rate * t).exp();
            let local = depolarizing_qudit(d, lambda)?;
            let rho = multi_local(&[local.clone(), local])?.apply(&rho0)?;
            Ok(rho.mat().matmul(&proj).trace().re)
        };
        let death = detect_death_time(
            |t| Ok(fidelity_at(t)? - 1.0 / d as f64),
            4.0,
            1e-10,
            ZeroStyle::Signed,
        )?;
        let t_cross = death.t_death.unwrap_or(f64::NAN);
        rows.push(CheckRow::flag(
            9,
            &format!("fidelity crosses 1/d at finite t, d={d}"),
            death.status == DeathStatus::FiniteDeath && t_cross.is_finite(),
            t_cross,
            "",
        ));
        // entanglement of formation vanishes exactly at (and past) the crossing
        let f_before = fidelity_at((t_cross - 0.1).max(0.0))?;
        let f_after = fidelity_at(t_cross + 1e-6)?;
        let eof_before = isotropic_eof(f_before.clamp(0.0, 1.0), d)?;
        let eof_after = isotropic_eof(f_after.clamp(0.0, 1.0), d)?;
        rows.push(CheckRow::flag(
            9,
            &format!("isotropic EoF positive before, exactly 0 at crossing, d={d}"),
            eof_before > 0.0 && eof_after == 0.0,
            eof_after,
            "",
        ));
    }
    Ok(rows)
}

/// Criterion 10: the two-qutrit separability boundary. s(0) = ε exactly,
/// the verdict flips at ε = 1/4, and the one-sided damped evolution of the
/// ε = 1 mixture reproduces the printed s(t) to 1e−10.
pub fn criterion_10() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();

    let mut worst_s0 = 0.0f64;
    for eps in [0.05f64, 0.25, 0.6, 1.0] {
        let (s, _) = caves_milburn_s(eps, 1.0, 1.0, 0.0)?;
        worst_s0 = worst_s0.max((s - eps).abs());
    }
    rows.push(CheckRow::diff(10, "s(0) = epsilon", 0.0, worst_s0, 1e-14));

    // bisect the verdict flip
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if caves_milburn_s(mid, 1.0, 1.0, 0.0)?.1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    rows.push(CheckRow::diff(
        10,
        "separability verdict flips at epsilon",
        0.25,
        0.5 * (lo + hi),
        1e-9,
    ));

    // ε = 1, A₁ = A₂ = 1: the damped mixture's effective mixing parameter
    // (9F − 1)/8 reproduces the printed s(t)
    let rho0 = caves_milburn_state(1.0)?;
    let proj = max_entangled_projector(3);
    let mut worst = 0.0f64;
    for &t in &time_grid(6.0, 100) {
        let ch = multi_local(&[
            qutrit_amplitude_damping(1.0, 1.0, t)?,
            identity(DimList::single(3)),
        ])?;
        let rho = ch.apply(&rho0)?;
        let f = rho.mat().matmul(&proj).trace().re;
        let simulated = (9.0 * f - 1.0) / 8.0;
        let (printed, _) = caves_milburn_s(1.0, 1.0, 1.0, t)?;
        worst = worst.max((simulated - printed).abs());
    }
    rows.push(
        CheckRow::diff(10, "simulated s(t) vs printed form", 0.0, worst, 1e-10).with_note(
            "one-sided channel; the printed s(t) is the fidelity map (9F-1)/8 of that evolution",
        ),
    );
    Ok(rows)
}

/// Criterion 11: optimizer saturation of the quantum bounds.
pub fn criterion_11() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let singlet = bell_state(Bell::PsiMinus);
    let (_, chsh) = optimize_angles(&singlet, BellFamily::Chsh, 16, 50)?;
    let ts = 2.0 * 2f64.sqrt();
    rows.push(CheckRow::flag(
        11,
        "optimized CHSH on the singlet",
        chsh >= ts - 1e-3 && chsh <= ts + 1e-9,
        chsh,
        "window [2sqrt(2)-1e-3, 2sqrt(2)+1e-9]",
    ));

    let ghz = ghz_state(3)?;
    let (_, sv) = optimize_angles(&ghz, BellFamily::Svetlichny, 8, 50)?;
    let max = 4.0 * 2f64.sqrt();
    rows.push(CheckRow::flag(
        11,
        "optimized Svetlichny on GHZ",
        sv >= max - 1e-3 && sv <= max + 1e-9,
        sv,
        "window [4sqrt(2)-1e-3, 4sqrt(2)+1e-9]",
    ));
    Ok(rows)
}

/// Criterion 12: the property suites — channel physicality, closed-form
/// agreement, the entanglement⇔NPT equivalence, the semigroup law and
/// excitation conservation.
pub fn criterion_12() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();

    // CPTP across 100 random parameter draws of every shipped channel
    let mut r = rng(2026);
    let mut worst_cptp = 0.0f64;
    for _ in 0..100 {
        let g: f64 = r.gen();
        let t: f64 = r.gen::<f64>() * 4.0;
        let channels = [
            dephasing_qubit(g)?,
            amplitude_damping_qubit(r.gen())?,
            depolarizing_qubit(0.3 + r.gen::<f64>() * 2.0, t)?,
            depolarizing_qudit(3, r.gen())?,
            depolarizing_qudit(4, r.gen())?,
            qutrit_amplitude_damping(r.gen::<f64>() * 2.0, r.gen::<f64>() * 2.0, t)?,
            collective_dephasing(2, r.gen::<f64>() * 2.0, t)?,
            collective_dephasing(3, r.gen(), t)?,
        ];
        for ch in &channels {
            worst_cptp = worst_cptp.max(ch.verify_cptp().1);
        }
    }
    rows.push(CheckRow::diff(
        12,
        "CPTP deviation across shipped channels",
        0.0,
        worst_cptp,
        1e-10,
    ));

    // closed-form X-state concurrence vs the generic computation
    let mut worst_x = 0.0f64;
    for _ in 0..1000 {
        let p = random_x_state(&mut r);
        let fast = x_state_concurrence(&p)?.value;
        let generic = concurrence(&x_state(&p)?)?.value;
        worst_x = worst_x.max((fast - generic).abs());
    }
    rows.push(CheckRow::diff(
        12,
        "x-state closed form vs generic concurrence",
        0.0,
        worst_x,
        1e-10,
    ));

    // negativity > 0 ⇔ partial transpose has a negative eigenvalue
    let mut all_consistent = true;
    for dims in [vec![2usize, 2], vec![2, 3]] {
        let dl = DimList::new(dims)?;
        for _ in 0..1000 {
            let rho = random_mixed_state(&mut r, &dl);
            let pt = partial_transpose(rho.mat(), rho.dims(), 0)?;
            let min_eig = *eigvals_hermitian(&pt.hermitize())?.last().unwrap();
            let neg = negativity(&rho, 0)?;
            if (neg > 1e-12) != (min_eig < -1e-12) {
                all_consistent = false;
            }
        }
    }
    rows.push(CheckRow::flag(
        12,
        "negativity iff NPT on 2000 random states",
        all_consistent,
        if all_consistent { 1.0 } else { 0.0 },
        "",
    ));

    // Lindblad semigroup property
    let (up, down) = thermal_rates(0.8, 1.0, 1.1)?;
    let dims = DimList::qubits(2);
    let spec = multi_local_lindblad(
        ComplexMatrix::zeros(4, 4),
        &[(sigma_minus(), down), (sigma_plus(), up)],
        &dims,
    )?;
    let rho = bell_state(Bell::PhiPlus);
    let (t1, t2) = (0.37, 0.91);
    let direct = lindblad_evolve(&spec, &rho, t1 + t2)?;
    let stepped = lindblad_evolve(&spec, &lindblad_evolve(&spec, &rho, t1)?, t2)?;
    rows.push(CheckRow::diff(
        12,
        "lindblad semigroup max deviation",
        0.0,
        direct.mat().max_abs_diff(stepped.mat()),
        1e-8,
    ));

    // cavity-model excitation conservation
    let mut worst_comm = 0.0f64;
    for _ in 0..5 {
        let model = CavityModel {
            n_atoms: 1 + r.gen_range(0..2),
            omega_atom: r.gen::<f64>() * 2.0,
            omega_cavity: r.gen::<f64>() * 2.0,
            g: 0.2 + r.gen::<f64>(),
            truncation: 1 + r.gen_range(0..2),
        };
        let (h, _) = jaynes_cummings_hamiltonian(&model)?;
        let (n_op, _) = excitation_number(&model)?;
        let comm = &h.matmul(&n_op) - &n_op.matmul(&h);
        worst_comm = worst_comm.max(comm.norm_max());
    }
    rows.push(CheckRow::diff(
        12,
        "jaynes-cummings excitation conservation",
        0.0,
        worst_comm,
        1e-10,
    ));

    Ok(rows)
}

/// Criterion 13: vacuum-damping death time of the a = 1 state. Under the
/// per-qubit convention γ = e^{−Γt} the root is ln[(2+√2)/2]/(2Γ); the
/// published value ln[(2+√2)/2]/Γ corresponds to γ² = e^{−Γt} and is
/// reproduced by halving the per-qubit rate.
pub fn criterion_13() -> Result<Vec<CheckRow>> {
    let p = XStateParams {
        a: 0.0,
        b: 1.0 / 3.0,
        c: 1.0 / 3.0,
        d: 1.0 / 3.0,
        w: ZERO,
        z: cr(1.0 / 3.0),
    };
    let rho0 = x_state(&p)?;
    let death_at_rate = |rate: f64| -> Result<f64> {
        let death = detect_death_time(
            |t| {
                let ch = multi_local_uniform(&amplitude_damping_qubit((-rate * t).exp())?, 2)?;
                Ok(concurrence(&ch.apply(&rho0)?)?.value)
            },
            3.0,
            1e-9,
            ZeroStyle::Clamped,
        )?;
        Ok(death.t_death.unwrap_or(f64::NAN))
    };
    let half_log = ((2.0 + 2f64.sqrt()) / 2.0).ln();
    let mut rows = Vec::new();
    rows.push(
        CheckRow::diff(
            13,
            "damping death, gamma = e^(-rate t)",
            half_log / 2.0,
            death_at_rate(1.0)?,
            1e-6,
        )
        .with_note("simulation-consistent convention"),
    );
    rows.push(
        CheckRow::diff(
            13,
            "published value under gamma^2 = e^(-rate t)",
            half_log,
            death_at_rate(0.5)?,
            1e-6,
        )
        .with_note("alternate convention shown alongside; simulated with per-qubit rate/2"),
    );
    Ok(rows)
}

type Criterion = fn() -> Result<Vec<CheckRow>>;

pub const CRITERIA: [(u8, &str, Criterion); 13] = [
    (1, "depolarizing entanglement-breaking time", criterion_01),
    (2, "ghz bell-violation deaths", criterion_02),
    (3, "w-state violation death", criterion_03),
    (4, "collective-dephasing x-state death", criterion_04),
    (5, "noise non-additivity", criterion_05),
    (6, "qubit-qutrit negativity death", criterion_06),
    (7, "photonic damping deaths", criterion_07),
    (8, "werner damping critical fidelity", criterion_08),
    (9, "isotropic-state separability crossing", criterion_09),
    (10, "two-qutrit separability boundary", criterion_10),
    (11, "bell bound saturation", criterion_11),
    (12, "property suites", criterion_12),
    (13, "vacuum damping death time", criterion_13),
];

pub fn run_criterion(n: u8) -> Vec<CheckRow> {
    for (id, name, f) in CRITERIA {
        if id == n {
            return match f() {
                Ok(rows) => rows,
                Err(e) => vec![fail_row(n, name, &e)],
            };
        }
    }
    Vec::new()
}

pub fn run_all() -> Vec<CheckRow> {
    CRITERIA.iter().flat_map(|(id, _, _)| run_criterion(*id)).collect()
}

pub fn all_pass(rows: &[CheckRow]) -> bool {
    rows.iter().all(|r| r.pass)
}

pub fn format_table(rows: &[CheckRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<3} {:<52} {:>24} {:>24} {:>9} {:<4}\n",
        "no", "check", "expected", "computed", "tol", "pass"
    ));
    out.push_str(&"-".repeat(122));
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{:<3} {:<52} {:>24.16e} {:>24.16e} {:>9.1e} {:<4}\n",
            row.criterion,
            truncate(&row.name, 52),
            row.expected,
            row.computed,
            row.tol,
            if row.pass { "ok" } else { "FAIL" }
        ));
        if !row.note.is_empty() {
            out.push_str(&format!("      note: {}\n", row.note));
        }
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    out.push_str(&format!("\n{passed}/{} checks passed\n", rows.len()));
    out
}

fn truncate(s: &str, width: usize) -> String {
    if s.len() <= width {
        s.to_string()
    } else {
        format!("{}...", &s[..width - 3])
    }
}

/// Flat JSON map: check name → {paper, computed, tol, pass}.
pub fn to_json(rows: &[CheckRow]) -> String {
    let mut out = String::from("{\n");
    for (k, row) in rows.iter().enumerate() {
        let key = format!(
            "c{:02}_{}",
            row.criterion,
            row.name
                .to_lowercase()
                .replace([' ', ',', '=', '(', ')', '/'], "_")
        );
        out.push_str(&format!(
            "  \"{key}\": {{\"paper\": {:.17e}, \"computed\": {:.17e}, \"tol\": {:.3e}, \"pass\": {}}}{}\n",
            row.expected,
            row.computed,
            row.tol,
            row.pass,
            if k + 1 < rows.len() { "," } else { "" }
        ));
    }
    out.push_str("}\n");
    out
}

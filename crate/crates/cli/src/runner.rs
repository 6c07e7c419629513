//! Scenario execution: resolve the state and noise into an evolver, sweep
//! the requested quantities over the time grid, locate death times and
//! write trajectory files.

use crate::scenario::{BellSpec, MeasureSpec, Mode, NoiseSpec, Scenario, StateSpec};
use std::path::PathBuf;
use std::time::Instant;
use suddenlab_core::channels::{
    amplitude_damping_qubit, collective_dephasing, dephasing_qubit, depolarizing_qubit,
    depolarizing_qudit, identity, multi_local, multi_local_uniform, qutrit_amplitude_damping,
};
use suddenlab_core::evolution::{
    jaynes_cummings_hamiltonian, multi_local_lindblad, sigma_minus, sigma_plus, thermal_rates,
    unitary_evolve, CavityModel,
};
use suddenlab_core::measures;
use suddenlab_core::nonlocality::{
    chsh_singlet_settings, optimize_angles, svetlichny_ghz_settings, tripartite_settings,
    violation_margin, wwzb_ghz_settings, BellFamily, MeasurementSettings,
};
use suddenlab_core::states::{self, DensityMatrix};
use suddenlab_core::sudden_death::{
    detect_death_time, detect_revivals, sweep, time_grid, DeathStatus, DeathTimeResult,
    Trajectory, ZeroStyle,
};
use suddenlab_core::tensor::{c, cr, ComplexMatrix, DimList, ZERO};
use suddenlab_core::{Error, Result};

/// A time-parameterized state plus the measures evaluated along it.
pub type Evolver = Box<dyn Fn(f64) -> Result<DensityMatrix> + Send + Sync>;
pub type Measure = Box<dyn Fn(&DensityMatrix) -> Result<f64> + Send + Sync>;

pub fn build_initial_state(spec: &StateSpec) -> Result<DensityMatrix> {
    match spec {
        StateSpec::Bell { which } => Ok(states::bell_state(*which)),
        StateSpec::Ghz { n } => states::ghz_state(*n),
        StateSpec::W { n } => states::w_state(*n),
        StateSpec::Werner2 { fidelity } => states::werner2(*fidelity),
        StateSpec::Werner3 { p } => states::werner3(*p),
        StateSpec::Isotropic { d, fidelity } => states::isotropic_state(*d, *fidelity),
        StateSpec::CavesMilburn { epsilon } => states::caves_milburn_state(*epsilon),
        StateSpec::XState { a, b, c: cc, d, w, z } => states::x_state(&states::XStateParams {
            a: *a,
            b: *b,
            c: *cc,
            d: *d,
            w: c(w.0, w.1),
            z: c(z.0, z.1),
        }),
        StateSpec::QubitQutrit { x } => states::qubit_qutrit_ansatz(*x, 1.0),
        StateSpec::PhotonX {
            p00,
            p01,
            p10,
            p11,
            z,
        } => states::photon_xstate(*p00, *p01, *p10, *p11, c(z.0, z.1)),
        StateSpec::Adh { alpha_sq } => {
            let (alpha, beta) = adh_amplitudes(*alpha_sq)?;
            adh_polarization_state(alpha, beta, 0.0)
        }
        StateSpec::BellAtomsVacuum { which, truncation } => {
            bell_atoms_vacuum(*which, *truncation)
        }
        StateSpec::AtomsVacuum {
            excited_weight,
            truncation,
        } => atoms_vacuum(*excited_weight, *truncation),
    }
}

/// √(1−q)|gg⟩ + √q|ee⟩ on the atoms, both cavities in vacuum.
fn atoms_vacuum(excited_weight: f64, truncation: usize) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&excited_weight) {
        return Err(Error::InvalidParam(
            "excited_weight must lie in [0, 1]".into(),
        ));
    }
    let nc = truncation + 1;
    let dims = DimList::new(vec![2, nc, 2, nc])?;
    let mut amps = vec![ZERO; dims.total()];
    amps[0] = cr((1.0 - excited_weight).sqrt()); // |g 0 g 0⟩
    amps[(nc * 2 + 1) * nc] = cr(excited_weight.sqrt()); // |e 0 e 0⟩
    DensityMatrix::pure(&amps, dims)
}

fn adh_amplitudes(alpha_sq: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&alpha_sq) {
        return Err(Error::InvalidParam("alpha_sq must lie in [0, 1]".into()));
    }
    Ok((alpha_sq.sqrt(), (1.0 - alpha_sq).sqrt()))
}

/// Damped photon pair; see [`measures::adh_damped_pair`].
pub fn adh_polarization_state(alpha: f64, beta: f64, p: f64) -> Result<DensityMatrix> {
    measures::adh_damped_pair(alpha, beta, p)
}

fn bell_atoms_vacuum(which: states::Bell, truncation: usize) -> Result<DensityMatrix> {
    let nc = truncation + 1;
    let dims = DimList::new(vec![2, nc, 2, nc])?;
    let s = 1.0 / 2f64.sqrt();
    // atomic amplitudes on (q1, q2); cavities in |0⟩
    let pairs: [(usize, usize, f64); 2] = match which {
        states::Bell::PhiPlus => [(0, 0, s), (1, 1, s)],
        states::Bell::PhiMinus => [(0, 0, s), (1, 1, -s)],
        states::Bell::PsiPlus => [(0, 1, s), (1, 0, s)],
        states::Bell::PsiMinus => [(0, 1, s), (1, 0, -s)],
    };
    let mut amps = vec![ZERO; dims.total()];
    for (q1, q2, a) in pairs {
        let idx = ((q1 * nc) * 2 + q2) * nc;
        amps[idx] = cr(a);
    }
    DensityMatrix::pure(&amps, dims)
}

fn n_qubits_of(state: &DensityMatrix) -> Result<usize> {
    if state.dims().dims().iter().all(|&d| d == 2) {
        Ok(state.dims().len())
    } else {
        Err(Error::DimMismatch(
            "this noise model needs an all-qubit register".into(),
        ))
    }
}

/// Resolve (state, noise) into a time-parameterized density matrix.
pub fn build_evolver(scenario: &Scenario) -> Result<Evolver> {
    let rho0 = build_initial_state(&scenario.state)?;
    match &scenario.noise {
        NoiseSpec::None => Ok(Box::new(move |_| Ok(rho0.clone()))),
        NoiseSpec::DephasingMultiLocal { rate } => {
            let n = n_qubits_of(&rho0)?;
            let rate = *rate;
            Ok(Box::new(move |t| {
                let ch = multi_local_uniform(&dephasing_qubit((-rate * t).exp())?, n)?;
                ch.apply(&rho0)
            }))
        }
        NoiseSpec::DampingMultiLocal { rate } => {
            let n = n_qubits_of(&rho0)?;
            let rate = *rate;
            Ok(Box::new(move |t| {
                let ch = multi_local_uniform(&amplitude_damping_qubit((-rate * t).exp())?, n)?;
                ch.apply(&rho0)
            }))
        }
        NoiseSpec::CollectiveDephasing { rate } => {
            let n = n_qubits_of(&rho0)?;
            let rate = *rate;
            Ok(Box::new(move |t| {
                collective_dephasing(n, rate, t)?.apply(&rho0)
            }))
        }
        NoiseSpec::DepolarizingOneSide { tau } => {
            if rho0.dims().dims() != [2, 2] {
                return Err(Error::DimMismatch(
                    "one-sided depolarizing needs a two-qubit state".into(),
                ));
            }
            let tau = *tau;
            Ok(Box::new(move |t| {
                let ch = multi_local(&[depolarizing_qubit(tau, t)?, identity(DimList::single(2))])?;
                ch.apply(&rho0)
            }))
        }
        NoiseSpec::DepolarizingBothSides { rate } => {
            let dims = rho0.dims().dims().to_vec();
            if dims.len() != 2 || dims[0] != dims[1] {
                return Err(Error::DimMismatch(
                    "two-sided depolarizing needs a d⊗d state".into(),
                ));
            }
            let d = dims[0];
            let rate = *rate;
            Ok(Box::new(move |t| {
                let lambda = 1.0 - (-rate * t).exp();
                let local = depolarizing_qudit(d, lambda)?;
                multi_local(&[local.clone(), local])?.apply(&rho0)
            }))
        }
        NoiseSpec::QutritDampingOneSide { a1, a2 } => {
            if rho0.dims().dims() != [3, 3] {
                return Err(Error::DimMismatch(
                    "one-sided qutrit damping needs a 3⊗3 state".into(),
                ));
            }
            let (a1, a2) = (*a1, *a2);
            Ok(Box::new(move |t| {
                let ch = multi_local(&[
                    qutrit_amplitude_damping(a1, a2, t)?,
                    identity(DimList::single(3)),
                ])?;
                ch.apply(&rho0)
            }))
        }
        NoiseSpec::CombinedDephasingDamping {
            dephasing_rate,
            damping_rate,
        } => {
            let n = n_qubits_of(&rho0)?;
            let (g2, g1) = (*dephasing_rate, *damping_rate);
            Ok(Box::new(move |t| {
                // half-rate per-qubit factors: two-qubit coherences decay by
                // e^{−Γ₂t} (dephasing) and e^{−Γ₁t} (damping)
                let deph = dephasing_qubit((-g2 * t / 2.0).exp())?;
                let damp = amplitude_damping_qubit((-g1 * t / 2.0).exp())?;
                let local = deph.compose(&damp)?;
                multi_local_uniform(&local, n)?.apply(&rho0)
            }))
        }
        NoiseSpec::AnsatzDephasing { rate } => {
            let x = match scenario.state {
                StateSpec::QubitQutrit { x } => x,
                _ => {
                    return Err(Error::InvalidParam(
                        "ansatz_dephasing applies to the qubit_qutrit state".into(),
                    ))
                }
            };
            let rate = *rate;
            Ok(Box::new(move |t| {
                states::qubit_qutrit_ansatz(x, (-rate * t).exp())
            }))
        }
        NoiseSpec::AdhDamping { rate } => {
            let alpha_sq = match scenario.state {
                StateSpec::Adh { alpha_sq } => alpha_sq,
                _ => {
                    return Err(Error::InvalidParam(
                        "adh_damping applies to the adh state".into(),
                    ))
                }
            };
            let (alpha, beta) = adh_amplitudes(alpha_sq)?;
            let rate = *rate;
            Ok(Box::new(move |t| {
                adh_polarization_state(alpha, beta, 1.0 - (-rate * t).exp())
            }))
        }
        NoiseSpec::LindbladThermal {
            gamma0,
            omega0,
            beta,
        } => {
            let n = n_qubits_of(&rho0)?;
            let (up, down) = thermal_rates(*gamma0, *omega0, *beta)?;
            let dims = DimList::qubits(n);
            let spec = multi_local_lindblad(
                ComplexMatrix::zeros(rho0.dim(), rho0.dim()),
                &[(sigma_minus(), down), (sigma_plus(), up)],
                &dims,
            )?;
            Ok(Box::new(move |t| {
                suddenlab_core::evolution::lindblad_evolve(&spec, &rho0, t)
            }))
        }
        NoiseSpec::DoubleJaynesCummings {
            omega_atom,
            omega_cavity,
            g,
        } => {
            let truncation = match scenario.state {
                StateSpec::BellAtomsVacuum { truncation, .. } => truncation,
                StateSpec::AtomsVacuum { truncation, .. } => truncation,
                _ => {
                    return Err(Error::InvalidParam(
                        "double_jaynes_cummings applies to an atoms-and-cavities state".into(),
                    ))
                }
            };
            let model = CavityModel {
                n_atoms: 2,
                omega_atom: *omega_atom,
                omega_cavity: *omega_cavity,
                g: *g,
                truncation,
            };
            let (h, _) = jaynes_cummings_hamiltonian(&model)?;
            Ok(Box::new(move |t| unitary_evolve(&h, &rho0, t)))
        }
    }
}

/// Resolve a measure token into a closure over density matrices.
pub fn build_measure(spec: &MeasureSpec) -> Measure {
    match spec.clone() {
        MeasureSpec::Purity => Box::new(|rho| Ok(measures::purity(rho))),
        MeasureSpec::Concurrence => Box::new(|rho| Ok(measures::concurrence(rho)?.value)),
        MeasureSpec::ConcurrencePair(i, j) => Box::new(move |rho| {
            let red = rho.reduce(&[i, j])?;
            Ok(measures::concurrence(&red)?.value)
        }),
        MeasureSpec::Negativity { party } => {
            Box::new(move |rho| measures::negativity(rho, party))
        }
        MeasureSpec::EntanglementOfFormation => Box::new(|rho| {
            let c = measures::concurrence(rho)?.value.min(1.0);
            measures::entanglement_of_formation(c)
        }),
        MeasureSpec::FidelityMaxEntangled => Box::new(fidelity_max_entangled),
        MeasureSpec::IsotropicEof => Box::new(|rho| {
            let d = rho.dims().dims()[0];
            let f = fidelity_max_entangled(rho)?;
            measures::isotropic_eof(f.clamp(0.0, 1.0), d)
        }),
        MeasureSpec::FidelityMargin => Box::new(|rho| {
            let d = rho.dims().dims()[0];
            Ok(fidelity_max_entangled(rho)? - 1.0 / d as f64)
        }),
        MeasureSpec::CmS => Box::new(|rho| {
            let f = fidelity_max_entangled(rho)?;
            Ok((9.0 * f - 1.0) / 8.0)
        }),
        MeasureSpec::CmMargin => Box::new(|rho| {
            let f = fidelity_max_entangled(rho)?;
            Ok((9.0 * f - 1.0) / 8.0 - 0.25)
        }),
        MeasureSpec::PhaseCorrelation => Box::new(|rho| {
            if rho.dim() != 4 {
                return Err(Error::DimMismatch(
                    "phase correlation needs a two-qubit state".into(),
                ));
            }
            Ok(2.0 * (rho.mat().get(0, 3).norm() + rho.mat().get(1, 2).norm()))
        }),
    }
}

fn fidelity_max_entangled(rho: &DensityMatrix) -> Result<f64> {
    let dims = rho.dims().dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::DimMismatch(
            "maximally entangled fidelity needs a d⊗d state".into(),
        ));
    }
    let proj = states::max_entangled_projector(dims[0]);
    Ok(rho.mat().matmul(&proj).trace().re)
}

pub fn measure_label(spec: &MeasureSpec) -> String {
    match spec {
        MeasureSpec::Purity => "purity".into(),
        MeasureSpec::Concurrence => "concurrence".into(),
        MeasureSpec::ConcurrencePair(i, j) => format!("concurrence_{i}{j}"),
        MeasureSpec::Negativity { party } => format!("negativity_pt{party}"),
        MeasureSpec::EntanglementOfFormation => "eof".into(),
        MeasureSpec::FidelityMaxEntangled => "fidelity".into(),
        MeasureSpec::IsotropicEof => "isotropic_eof".into(),
        MeasureSpec::FidelityMargin => "fidelity_margin".into(),
        MeasureSpec::CmS => "cm_s".into(),
        MeasureSpec::CmMargin => "cm_margin".into(),
        MeasureSpec::PhaseCorrelation => "phase_correlation".into(),
    }
}

fn measure_style(spec: &MeasureSpec) -> ZeroStyle {
    match spec {
        MeasureSpec::FidelityMargin | MeasureSpec::CmMargin => ZeroStyle::Signed,
        _ => ZeroStyle::Clamped,
    }
}

/// Resolve a Bell token into (family, frozen settings).
pub fn build_bell(
    spec: &BellSpec,
    rho0: &DensityMatrix,
) -> Result<(BellFamily, MeasurementSettings, String)> {
    Ok(match spec {
        BellSpec::SvetlichnyXy => (
            BellFamily::Svetlichny,
            svetlichny_ghz_settings(),
            "svetlichny_xy".into(),
        ),
        BellSpec::P5Xy => (BellFamily::P5, wwzb_ghz_settings(), "p5_xy".into()),
        BellSpec::P5Printed { theta_b, theta_c } => (
            BellFamily::P5,
            tripartite_settings(*theta_b, *theta_c),
            "p5_printed".into(),
        ),
        BellSpec::ChshSinglet => (
            BellFamily::Chsh,
            chsh_singlet_settings(),
            "chsh_singlet".into(),
        ),
        BellSpec::ChshOptimal => {
            let (settings, _) = optimize_angles(rho0, BellFamily::Chsh, 16, 50)?;
            (BellFamily::Chsh, settings, "chsh_optimal".into())
        }
        BellSpec::SvetlichnyOptimal => {
            let (settings, _) = optimize_angles(rho0, BellFamily::Svetlichny, 8, 50)?;
            (BellFamily::Svetlichny, settings, "svetlichny_optimal".into())
        }
    })
}

/// Everything a scenario run produces.
pub struct RunReport {
    pub scenario: Scenario,
    pub measure_results: Vec<(String, DeathTimeResult)>,
    pub bell_results: Vec<(String, DeathTimeResult)>,
    pub revivals: Vec<(String, Vec<(f64, f64)>)>,
    pub scalars: Vec<(String, f64)>,
    pub trajectory_files: Vec<PathBuf>,
    pub wall_seconds: f64,
}

/// Evaluate a trajectory over the grid, optionally across worker threads.
/// Results are written into indexed slots, so the output is identical for
/// any worker count.
pub fn sweep_parallel(
    evolver: &Evolver,
    measure: &Measure,
    grid: &[f64],
    workers: usize,
) -> Result<Trajectory> {
    if workers <= 1 || grid.len() < 16 {
        return sweep(|t| evolver(t), |rho: &DensityMatrix| measure(rho), grid);
    }
    let n = grid.len();
    let mut values = vec![0.0f64; n];
    let chunk = n.div_ceil(workers);
    let errors: std::sync::Mutex<Vec<String>> = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for (w, slot) in values.chunks_mut(chunk).enumerate() {
            let errors = &errors;
            let start = w * chunk;
            scope.spawn(move || {
                for (k, out) in slot.iter_mut().enumerate() {
                    let t = grid[start + k];
                    match evolver(t).and_then(|rho| measure(&rho)) {
                        Ok(v) => *out = v,
                        Err(e) => {
                            errors.lock().unwrap().push(format!("t = {t}: {e}"));
                            return;
                        }
                    }
                }
            });
        }
    });
    let errs = errors.into_inner().unwrap();
    if let Some(first) = errs.first() {
        return Err(Error::Numerical(first.clone()));
    }
    Trajectory::new(grid.to_vec(), values)
}

/// Detection wrapper that also recognizes revivals: a finite death whose
/// trajectory comes back above the threshold later is reported with
/// `Revival` status (the death time is still the first zero).
fn detect_with_revivals(
    f: impl Fn(f64) -> Result<f64>,
    traj: &Trajectory,
    t_max: f64,
    tol: f64,
    style: ZeroStyle,
) -> Result<(DeathTimeResult, Vec<(f64, f64)>)> {
    let mut result = detect_death_time(&f, t_max, tol, style)?;
    let revivals = detect_revivals(traj);
    if !revivals.is_empty() && result.status == DeathStatus::FiniteDeath {
        result.status = DeathStatus::Revival;
    }
    Ok((result, revivals))
}

pub fn run(scenario: &Scenario, workers: usize, out_dir: Option<&std::path::Path>) -> Result<RunReport> {
    let started = Instant::now();
    match scenario.mode {
        Mode::Sweep => run_sweep(scenario, workers, out_dir, started),
        Mode::CriticalFidelity => run_critical_fidelity(scenario, started),
        Mode::SeparabilityBoundary => run_separability_boundary(scenario, started),
    }
}

fn run_sweep(
    scenario: &Scenario,
    workers: usize,
    out_dir: Option<&std::path::Path>,
    started: Instant,
) -> Result<RunReport> {
    let evolver = build_evolver(scenario)?;
    let rho0 = evolver(0.0)?;
    let grid = time_grid(scenario.sweep.t_max, scenario.sweep.points.max(2));
    let tol = scenario.detect.tolerance;

    let mut measure_results = Vec::new();
    let mut bell_results = Vec::new();
    let mut revivals_out = Vec::new();
    let mut files = Vec::new();
    let mut measure_results_scalars: Vec<(String, f64)> = Vec::new();

    let write_traj = |label: &str, traj: &Trajectory| -> Result<Option<PathBuf>> {
        let Some(dir) = out_dir else { return Ok(None) };
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Numerical(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(format!("{}_{label}.csv", scenario.name));
        std::fs::write(&path, traj.to_csv())
            .map_err(|e| Error::Numerical(format!("cannot write {}: {e}", path.display())))?;
        Ok(Some(path))
    };

    for mspec in &scenario.detect.measures {
        let label = measure_label(mspec);
        let measure = build_measure(mspec);
        let style = measure_style(mspec);
        let traj = sweep_parallel(&evolver, &measure, &grid, workers)?;
        let (result, revivals) = detect_with_revivals(
            |t| evolver(t).and_then(|rho| measure(&rho)),
            &traj,
            scenario.sweep.t_max,
            tol,
            style,
        )?;
        if let Some(path) = write_traj(&label, &traj)? {
            files.push(path);
        }
        if !revivals.is_empty() {
            revivals_out.push((label.clone(), revivals));
        }
        measure_results.push((label, result));
    }

    // photonic damping deaths read more naturally in probability units
    if let NoiseSpec::AdhDamping { rate } = &scenario.noise {
        for (label, res) in &measure_results {
            if let Some(t) = res.t_death {
                measure_results_scalars
                    .push((format!("death_probability_{label}"), 1.0 - (-rate * t).exp()));
            }
        }
    }

    // cavity truncation health: the truncated ladder only distorts the
    // dynamics if weight sits on (excited atom ⊗ top Fock level), the
    // configuration whose upward coupling the cutoff removed
    if let NoiseSpec::DoubleJaynesCummings { .. } = &scenario.noise {
        let truncation = match scenario.state {
            StateSpec::BellAtomsVacuum { truncation, .. }
            | StateSpec::AtomsVacuum { truncation, .. } => truncation,
            _ => 1,
        };
        let nc = truncation + 1;
        let mut worst: f64 = 0.0;
        for k in 0..=16 {
            let t = scenario.sweep.t_max * k as f64 / 16.0;
            let rho = evolver(t)?;
            for atom in 0..2 {
                let pair = rho.reduce(&[2 * atom, 2 * atom + 1])?;
                let idx = nc + (nc - 1); // |excited⟩ ⊗ |top⟩
                worst = worst.max(pair.mat().get(idx, idx).re);
            }
        }
        measure_results_scalars.push(("max_truncation_leakage".into(), worst));
    }

    // final state in the plain-text matrix format, for downstream tools
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Numerical(format!("cannot create {}: {e}", dir.display())))?;
        let rho_end = evolver(scenario.sweep.t_max)?;
        let path = dir.join(format!("{}_final_state.txt", scenario.name));
        std::fs::write(&path, rho_end.to_text())
            .map_err(|e| Error::Numerical(format!("cannot write {}: {e}", path.display())))?;
        files.push(path);
    }

    for bspec in &scenario.detect.bells {
        let (family, settings, label) = build_bell(bspec, &rho0)?;
        let margin: Measure = Box::new(move |rho| violation_margin(rho, family, &settings));
        let traj = sweep_parallel(&evolver, &margin, &grid, workers)?;
        let (result, revivals) = detect_with_revivals(
            |t| evolver(t).and_then(|rho| margin(&rho)),
            &traj,
            scenario.sweep.t_max,
            tol,
            ZeroStyle::Signed,
        )?;
        if let Some(path) = write_traj(&label, &traj)? {
            files.push(path);
        }
        if !revivals.is_empty() {
            revivals_out.push((label.clone(), revivals));
        }
        bell_results.push((label, result));
    }

    Ok(RunReport {
        scenario: scenario.clone(),
        measure_results,
        bell_results,
        revivals: revivals_out,
        scalars: measure_results_scalars,
        trajectory_files: files,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Scan the Werner fidelity: report the largest grid point whose
/// concurrence dies in finite time and the first that decays
/// asymptotically.
fn run_critical_fidelity(scenario: &Scenario, started: Instant) -> Result<RunReport> {
    let scan = scenario.scan.ok_or_else(|| {
        Error::InvalidParam("critical_fidelity mode needs a [scan] section".into())
    })?;
    let rate = match scenario.noise {
        NoiseSpec::DampingMultiLocal { rate } => rate,
        _ => {
            return Err(Error::InvalidParam(
                "critical_fidelity scans use damping_multilocal noise".into(),
            ))
        }
    };
    let tol = scenario.detect.tolerance;
    let t_max = scenario.sweep.t_max;

    let mut last_finite: Option<f64> = None;
    let mut first_asymptotic: Option<f64> = None;
    let mut f = scan.min;
    while f <= scan.max + 1e-12 {
        let rho0 = states::werner2(f)?;
        let death = detect_death_time(
            |t| {
                let ch = multi_local_uniform(&amplitude_damping_qubit((-rate * t).exp())?, 2)?;
                Ok(measures::concurrence(&ch.apply(&rho0)?)?.value)
            },
            t_max,
            tol,
            ZeroStyle::Clamped,
        )?;
        match death.status {
            DeathStatus::FiniteDeath => last_finite = Some(f),
            DeathStatus::Asymptotic => {
                if first_asymptotic.is_none() {
                    first_asymptotic = Some(f);
                }
            }
            _ => {}
        }
        f += scan.step;
    }
    let mut scalars = Vec::new();
    if let Some(f) = last_finite {
        scalars.push(("largest_fidelity_with_finite_death".into(), f));
    }
    if let Some(f) = first_asymptotic {
        scalars.push(("smallest_fidelity_with_asymptotic_decay".into(), f));
    }
    Ok(RunReport {
        scenario: scenario.clone(),
        measure_results: Vec::new(),
        bell_results: Vec::new(),
        revivals: Vec::new(),
        scalars,
        trajectory_files: Vec::new(),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Bisect the mixing parameter at which the two-qutrit mixture's
/// separability verdict flips (at t = 0 the indicator is ε itself).
fn run_separability_boundary(scenario: &Scenario, started: Instant) -> Result<RunReport> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let separable = |eps: f64| -> Result<bool> {
        let (a1, a2) = match scenario.noise {
            NoiseSpec::QutritDampingOneSide { a1, a2 } => (a1, a2),
            _ => (1.0, 1.0),
        };
        Ok(measures::caves_milburn_s(eps, a1, a2, 0.0)?.1)
    };
    if !separable(lo)? || separable(hi)? {
        return Err(Error::Numerical(
            "separability verdict does not flip on [0, 1]".into(),
        ));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if separable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RunReport {
        scenario: scenario.clone(),
        measure_results: Vec::new(),
        bell_results: Vec::new(),
        revivals: Vec::new(),
        scalars: vec![("separability_boundary_epsilon".into(), 0.5 * (lo + hi))],
        trajectory_files: Vec::new(),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Closed-form reference value for the presets that have one.
pub fn reference_death_time(preset_name: &str) -> Option<(f64, &'static str)> {
    use suddenlab_core::sudden_death::{closed_form_time, ClosedFormCase};
    match preset_name {
        "diosi" => Some((
            closed_form_time(ClosedFormCase::Depolarizing { tau: 1.0 }).ok()?,
            "tau*ln(3)",
        )),
        "ye04" => Some((
            closed_form_time(ClosedFormCase::VacuumDamping { rate: 1.0 }).ok()?,
            "ln((2+sqrt(2))/2)/(2*rate)",
        )),
        "global-dephasing" => Some((
            closed_form_time(ClosedFormCase::CollectiveDephasing {
                rate: 1.0,
                w: 0.4,
                b: 0.25,
                c: 0.25,
            })
            .ok()?,
            "ln(|w|/sqrt(bc))/(2*rate)",
        )),
        "qubit-qutrit" => Some((
            closed_form_time(ClosedFormCase::QubitQutrit { rate: 1.0, x: 0.25 }).ok()?,
            "ln(8x)/rate (derived; printed 8x/rate is flagged)",
        )),
        "bnsd-w" => Some((
            closed_form_time(ClosedFormCase::WStateBell { rate: 1.0 }).ok()?,
            "ln(2)/(2*rate)",
        )),
        "bnsd-ghz" => Some((
            closed_form_time(ClosedFormCase::SvetlichnyGhz { rate: 1.0 }).ok()?,
            "ln(sqrt(2))/(3*rate); full set at ln(2)/(3*rate)",
        )),
        "adh07-psi2" => Some((-(1.0 - 1.0 / 3f64.sqrt()).ln(), "p = 1/sqrt(3) in time units")),
        "lcd07" => Some(((0.25 / (0.3f64 * 0.1).sqrt()).ln() / 2.0, "ln(|z|/sqrt(p00*p11))/(2*rate)")),
        _ => None,
    }
}

/// Flat JSON rendering of a report (hand-rolled; keys stay ordered).
pub fn report_to_json(report: &RunReport) -> String {
    let mut out = String::from("{\n");
    let mut first = true;
    let mut push = |out: &mut String, key: &str, value: String| {
        if !first {
            out.push_str(",\n");
        }
        first = false;
        out.push_str(&format!("  \"{key}\": {value}"));
    };
    push(&mut out, "scenario", format!("\"{}\"", report.scenario.name));
    push(
        &mut out,
        "wall_seconds",
        format!("{:.6}", report.wall_seconds),
    );
    for (label, res) in report.measure_results.iter().chain(&report.bell_results) {
        let status = format!("{:?}", res.status);
        let t = res
            .t_death
            .map(|t| format!("{t:.17e}"))
            .unwrap_or_else(|| "null".into());
        push(
            &mut out,
            &format!("death_{label}"),
            format!("{{\"status\": \"{status}\", \"t\": {t}}}"),
        );
    }
    for (label, value) in &report.scalars {
        push(&mut out, label, format!("{value:.17e}"));
    }
    for (label, intervals) in &report.revivals {
        let list: Vec<String> = intervals
            .iter()
            .map(|(d, r)| format!("[{d:.17e}, {r:.17e}]"))
            .collect();
        push(
            &mut out,
            &format!("revivals_{label}"),
            format!("[{}]", list.join(", ")),
        );
    }
    for path in &report.trajectory_files {
        push(
            &mut out,
            &format!("file_{}", report.trajectory_files.iter().position(|p| p == path).unwrap()),
            format!("\"{}\"", path.display()),
        );
    }
    out.push_str("\n}\n");
    out
}

//! Continuous-time dynamics: Lindblad master-equation integration, thermal
//! rates, unitary evolution and cavity-QED Hamiltonians.
//!
//! Time-independent generators are integrated exactly by exponentiating the
//! vectorized superoperator; a fixed-step RK4 integrator takes over when
//! the vectorized dimension would make that too expensive.

use crate::states::DensityMatrix;
use crate::tensor::{
    c, cr, eig_hermitian, expm, kron_all, spectral_apply, ComplexMatrix, DimList,
};
use crate::tolerances::HERMITIAN_TOL;
use crate::{Error, Result};
use num_complex::Complex64;

/// Markovian master equation: dρ/dt = −i[H,ρ] + Σ rate·(LρL† − ½{L†L,ρ}).
#[derive(Debug, Clone)]
pub struct LindbladSpec {
    h: ComplexMatrix,
    jumps: Vec<(ComplexMatrix, f64)>,
}

impl LindbladSpec {
    pub fn new(h: ComplexMatrix, jumps: Vec<(ComplexMatrix, f64)>) -> Result<Self> {
        let dev = h.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { dev });
        }
        for (l, rate) in &jumps {
            if *rate < 0.0 {
                return Err(Error::InvalidParam(format!("negative jump rate {rate}")));
            }
            if l.rows() != h.rows() || l.cols() != h.cols() {
                return Err(Error::DimMismatch(
                    "jump operator and Hamiltonian sizes differ".into(),
                ));
            }
        }
        Ok(Self { h, jumps })
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn jumps(&self) -> &[(ComplexMatrix, f64)] {
        &self.jumps
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    /// dρ/dt evaluated at ρ.
    fn rhs(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let i = c(0.0, 1.0);
        let comm = &self.h.matmul(rho) - &rho.matmul(&self.h);
        let mut out = comm.scale(-i);
        for (l, rate) in &self.jumps {
            if *rate == 0.0 {
                continue;
            }
            let ldag = l.dagger();
            let ldl = ldag.matmul(l);
            let sandwich = l.matmul(rho).matmul(&ldag);
            let anti = &ldl.matmul(rho) + &rho.matmul(&ldl);
            out = &out + &(&sandwich - &anti.scale_re(0.5)).scale_re(*rate);
        }
        out
    }

    /// The vectorized generator acting on row-major vec(ρ).
    fn liouvillian(&self) -> ComplexMatrix {
        let n = self.dim();
        let id = ComplexMatrix::identity(n);
        let i = c(0.0, 1.0);
        // vec(AρB) = (A ⊗ Bᵀ) vec(ρ) for row-major vec
        let mut sup = &self.h.kron(&id.transpose()).scale(-i)
            + &id.kron(&self.h.transpose()).scale(i);
        for (l, rate) in &self.jumps {
            if *rate == 0.0 {
                continue;
            }
            let ldag = l.dagger();
            let ldl = ldag.matmul(l);
            let gain = l.kron(&ldag.transpose());
            let loss = &ldl.kron(&id).scale_re(0.5) + &id.kron(&ldl.transpose()).scale_re(0.5);
            sup = &sup + &(&gain - &loss).scale_re(*rate);
        }
        sup
    }
}

fn vec_rho(m: &ComplexMatrix) -> Vec<Complex64> {
    m.data().to_vec()
}

fn unvec(v: &[Complex64], n: usize) -> ComplexMatrix {
    ComplexMatrix::new(n, n, v.to_vec()).expect("length checked by caller")
}

/// Clamp tiny negative eigenvalues accumulated by integration round-off and
/// renormalize the trace.
fn scrub(m: ComplexMatrix, dims: DimList) -> Result<DensityMatrix> {
    let herm = m.hermitize();
    match DensityMatrix::from_parts(herm.clone(), dims.clone()) {
        Ok(dm) => Ok(dm),
        Err(_) => {
            let (eigs, v) = eig_hermitian(&herm)?;
            let clamped: Vec<f64> = eigs.iter().map(|&e| e.max(0.0)).collect();
            let total: f64 = clamped.iter().sum();
            if total <= 0.0 {
                return Err(Error::Numerical("state collapsed to zero trace".into()));
            }
            let rebuilt = spectral_apply(&clamped, &v, |e| cr(e / total));
            DensityMatrix::from_parts(rebuilt.hermitize(), dims)
        }
    }
}

/// Exact solution of the master equation at time t for time-independent
/// generators; falls back to fixed-step RK4 when the vectorized dimension
/// exceeds 1024.
pub fn lindblad_evolve(spec: &LindbladSpec, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if spec.dim() != rho0.dim() {
        return Err(Error::DimMismatch(format!(
            "generator dim {} vs state dim {}",
            spec.dim(),
            rho0.dim()
        )));
    }
    if t < 0.0 {
        return Err(Error::InvalidParam("time must be >= 0".into()));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let n = spec.dim();
    if n * n <= 1024 {
        let sup = spec.liouvillian().scale_re(t);
        let propagator = expm(&sup)?;
        let out = propagator.matvec(&vec_rho(rho0.mat()));
        scrub(unvec(&out, n), rho0.dims().clone())
    } else {
        // fixed-step RK4, dt bounded by the fastest rate in the generator
        let max_rate = spec
            .jumps
            .iter()
            .map(|(_, r)| *r)
            .fold(spec.h.norm_one().max(1.0), f64::max);
        let dt = 1e-3 / max_rate;
        let steps = (t / dt).ceil().max(1.0) as usize;
        let dt = t / steps as f64;
        let mut rho = rho0.mat().clone();
        for _ in 0..steps {
            let k1 = spec.rhs(&rho);
            let k2 = spec.rhs(&(&rho + &k1.scale_re(dt / 2.0)));
            let k3 = spec.rhs(&(&rho + &k2.scale_re(dt / 2.0)));
            let k4 = spec.rhs(&(&rho + &k3.scale_re(dt)));
            let incr = &(&k1 + &k4) + &(&k2 + &k3).scale_re(2.0);
            rho = &rho + &incr.scale_re(dt / 6.0);
        }
        scrub(rho, rho0.dims().clone())
    }
}

/// Each local jump embedded as I⊗…⊗L⊗…⊗I at every subsystem position.
pub fn multi_local_lindblad(
    h: ComplexMatrix,
    local_jumps: &[(ComplexMatrix, f64)],
    dims: &DimList,
) -> Result<LindbladSpec> {
    let mut jumps = Vec::new();
    for pos in 0..dims.len() {
        for (l, rate) in local_jumps {
            if l.rows() != dims.dims()[pos] {
                return Err(Error::DimMismatch(format!(
                    "local jump of size {} at a dim-{} subsystem",
                    l.rows(),
                    dims.dims()[pos]
                )));
            }
            jumps.push((crate::channels::embed_local(l, pos, dims), *rate));
        }
    }
    LindbladSpec::new(h, jumps)
}

/// e^{−iHt} ρ e^{+iHt} through the spectral decomposition of H.
pub fn unitary_evolve(h: &ComplexMatrix, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    let (energies, v) = eig_hermitian(h)?;
    if h.rows() != rho0.dim() {
        return Err(Error::DimMismatch(
            "Hamiltonian and state dimensions differ".into(),
        ));
    }
    let u = spectral_apply(&energies, &v, |e| c(0.0, -e * t).exp());
    let out = u.matmul(rho0.mat()).matmul(&u.dagger());
    DensityMatrix::from_parts(out.hermitize(), rho0.dims().clone())
}

/// Thermal excitation/decay rates for a bath at inverse temperature β:
/// Γ↑ = γ₀·n(ω₀), Γ↓ = γ₀·(1 + n(ω₀)) with n(ω₀) = 1/(e^{βω₀} − 1).
///
/// β = +∞ is the zero-temperature limit (0, γ₀); β ≤ 0 is rejected.
pub fn thermal_rates(gamma0: f64, omega0: f64, beta: f64) -> Result<(f64, f64)> {
    if gamma0 < 0.0 {
        return Err(Error::InvalidParam("base rate must be >= 0".into()));
    }
    if omega0 <= 0.0 {
        return Err(Error::InvalidParam("transition frequency must be > 0".into()));
    }
    if beta <= 0.0 {
        return Err(Error::InvalidParam(
            "inverse temperature must be > 0 (use +inf for T = 0)".into(),
        ));
    }
    let n = if beta.is_infinite() {
        0.0
    } else {
        1.0 / ((beta * omega0).exp_m1())
    };
    Ok((gamma0 * n, gamma0 * (1.0 + n)))
}

/// σ₊ = |1⟩⟨0| raises the ground state into the excited state.
pub fn sigma_plus() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(1, 0, crate::tensor::ONE);
    m
}

pub fn sigma_minus() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 1, crate::tensor::ONE);
    m
}

/// Truncated bosonic annihilation operator on n_max + 1 levels.
pub fn annihilation(n_levels: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n_levels, n_levels);
    for n in 1..n_levels {
        m.set(n - 1, n, cr((n as f64).sqrt()));
    }
    m
}

/// Atoms in independent single-mode cavities.
#[derive(Debug, Clone, Copy)]
pub struct CavityModel {
    pub n_atoms: usize,
    /// Atomic transition frequency.
    pub omega_atom: f64,
    /// Cavity mode frequency.
    pub omega_cavity: f64,
    /// Atom-cavity coupling.
    pub g: f64,
    /// Highest retained photon number per cavity.
    pub truncation: usize,
}

/// Hamiltonian of `n_atoms` two-level atoms, each coupled only to its own
/// cavity mode via g(a†σ₋ + σ₊a), ordered atom₁, cavity₁, atom₂, cavity₂, …
///
/// Returns the matrix together with the dimension list of the joint space.
pub fn jaynes_cummings_hamiltonian(model: &CavityModel) -> Result<(ComplexMatrix, DimList)> {
    if !(1..=3).contains(&model.n_atoms) {
        return Err(Error::InvalidParam(format!(
            "supported atom counts are 1..=3, got {}",
            model.n_atoms
        )));
    }
    if model.truncation < 1 {
        return Err(Error::InvalidParam("photon truncation must be >= 1".into()));
    }
    let nc = model.truncation + 1;
    let mut dims = Vec::new();
    for _ in 0..model.n_atoms {
        dims.push(2);
        dims.push(nc);
    }
    let dims = DimList::new(dims)?;
    let total = dims.total();
    let mut h = ComplexMatrix::zeros(total, total);

    // |1⟩ is excited: the atomic term is (ω₀/2)(σ₊σ₋ − σ₋σ₊) = diag(−ω₀/2, +ω₀/2)
    let sz_energy = ComplexMatrix::diag(&[-1.0, 1.0]);
    let a = annihilation(nc);
    let adag = a.dagger();
    let number = adag.matmul(&a);

    for atom in 0..model.n_atoms {
        let atom_pos = 2 * atom;
        let cav_pos = 2 * atom + 1;
        h = &h
            + &crate::channels::embed_local(
                &sz_energy.scale_re(model.omega_atom / 2.0),
                atom_pos,
                &dims,
            );
        h = &h
            + &crate::channels::embed_local(&number.scale_re(model.omega_cavity), cav_pos, &dims);
        // g(a†σ₋ + σ₊a) acting on the (atom, cavity) pair
        let raise_cavity = embed_pair(&sigma_minus(), &adag, atom_pos, cav_pos, &dims);
        let lower_cavity = embed_pair(&sigma_plus(), &a, atom_pos, cav_pos, &dims);
        h = &h + &(&raise_cavity + &lower_cavity).scale_re(model.g);
    }
    Ok((h, dims))
}

/// Total excitation operator Σ σ₊σ₋ + Σ a†a for the same layout.
pub fn excitation_number(model: &CavityModel) -> Result<(ComplexMatrix, DimList)> {
    let nc = model.truncation + 1;
    let mut dims = Vec::new();
    for _ in 0..model.n_atoms {
        dims.push(2);
        dims.push(nc);
    }
    let dims = DimList::new(dims)?;
    let total = dims.total();
    let mut n_op = ComplexMatrix::zeros(total, total);
    let excited = ComplexMatrix::diag(&[0.0, 1.0]);
    let a = annihilation(nc);
    let number = a.dagger().matmul(&a);
    for atom in 0..model.n_atoms {
        n_op = &n_op + &crate::channels::embed_local(&excited, 2 * atom, &dims);
        n_op = &n_op + &crate::channels::embed_local(&number, 2 * atom + 1, &dims);
    }
    Ok((n_op, dims))
}

fn embed_pair(
    op_a: &ComplexMatrix,
    op_b: &ComplexMatrix,
    pos_a: usize,
    pos_b: usize,
    dims: &DimList,
) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = dims
        .dims()
        .iter()
        .enumerate()
        .map(|(k, &d)| {
            if k == pos_a {
                op_a.clone()
            } else if k == pos_b {
                op_b.clone()
            } else {
                ComplexMatrix::identity(d)
            }
        })
        .collect();
    kron_all(&factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures;
    use crate::random::{random_hermitian, random_mixed_state, rng};
    use crate::states::{bell_state, Bell, DensityMatrix};
    use crate::tensor::{sigma_x, ZERO};
    use rand::Rng;

    #[test]
    fn free_evolution_fixes_state() {
        let mut r = rng(149);
        let rho = random_mixed_state(&mut r, &DimList::single(2));
        let spec = LindbladSpec::new(ComplexMatrix::zeros(2, 2), vec![]).unwrap();
        let out = lindblad_evolve(&spec, &rho, 3.0).unwrap();
        assert!(out.mat().max_abs_diff(rho.mat()) <= 1e-10);
    }

    #[test]
    fn thermal_steady_state_has_gibbs_populations() {
        let (up, down) = thermal_rates(0.8, 1.0, 1.3).unwrap();
        let spec = LindbladSpec::new(
            ComplexMatrix::zeros(2, 2),
            vec![(sigma_plus(), up), (sigma_minus(), down)],
        )
        .unwrap();
        let start = DensityMatrix::pure(&[crate::tensor::ONE, ZERO], DimList::single(2)).unwrap();
        let out = lindblad_evolve(&spec, &start, 200.0).unwrap();
        // two-level rate equation fixed point: p₁/p₀ = Γ↑/Γ↓
        let ratio = out.mat().get(1, 1).re / out.mat().get(0, 0).re;
        assert!((ratio - up / down).abs() <= 1e-8, "ratio {ratio}");
    }

    #[test]
    fn thermal_rate_identities() {
        let (up, down) = thermal_rates(1.0, 1.0, f64::INFINITY).unwrap();
        assert_eq!((up, down), (0.0, 1.0));

        // βω₀ = ln 2 → n = 1 → rates (γ₀, 2γ₀)
        let (up, down) = thermal_rates(0.5, 1.0, 2f64.ln()).unwrap();
        assert!((up - 0.5).abs() < 1e-12 && (down - 1.0).abs() < 1e-12);

        // detailed balance at any temperature
        for beta in [0.2, 1.0, 5.0] {
            let (up, down) = thermal_rates(1.0, 1.3, beta).unwrap();
            assert!((up / down - (-beta * 1.3f64).exp()).abs() < 1e-12);
        }
        assert!(thermal_rates(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn semigroup_property() {
        let (up, down) = thermal_rates(0.7, 1.0, 0.9).unwrap();
        let h = random_hermitian(&mut rng(151), 2);
        let spec = LindbladSpec::new(h, vec![(sigma_plus(), up), (sigma_minus(), down)]).unwrap();
        let rho = random_mixed_state(&mut rng(157), &DimList::single(2));
        let (t1, t2) = (0.4, 0.9);
        let direct = lindblad_evolve(&spec, &rho, t1 + t2).unwrap();
        let stepped = lindblad_evolve(&spec, &lindblad_evolve(&spec, &rho, t1).unwrap(), t2).unwrap();
        assert!(direct.mat().max_abs_diff(stepped.mat()) <= 1e-8);
        assert!((direct.mat().trace().re - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn zero_rates_reduce_to_unitary_evolution() {
        let h = random_hermitian(&mut rng(163), 4);
        let spec = LindbladSpec::new(h.clone(), vec![(sigma_plus().kron(&ComplexMatrix::identity(2)), 0.0)])
            .unwrap();
        let rho = random_mixed_state(&mut rng(167), &DimList::qubits(2));
        let a = lindblad_evolve(&spec, &rho, 1.7).unwrap();
        let b = unitary_evolve(&h, &rho, 1.7).unwrap();
        assert!(a.mat().max_abs_diff(b.mat()) <= 1e-9);
    }

    #[test]
    fn unitary_evolution_conserves_purity() {
        let mut r = rng(173);
        let h = random_hermitian(&mut r, 4);
        let rho = random_mixed_state(&mut r, &DimList::qubits(2));
        let p0 = measures::purity(&rho);
        for t in [0.0, 0.3, 2.1] {
            let out = unitary_evolve(&h, &rho, t).unwrap();
            assert!((measures::purity(&out) - p0).abs() <= 1e-10);
        }
        let out0 = unitary_evolve(&h, &rho, 0.0).unwrap();
        assert!(out0.mat().max_abs_diff(rho.mat()) <= 1e-12);
    }

    #[test]
    fn closed_two_qubit_exchange_oscillates() {
        // H = (ω/2)(σz⊗I + I⊗σz) + (g/2) σx⊗σx from |00⟩: the
        // {|00⟩, |11⟩} block is a 2×2 Rabi problem with frequency √(ω² + g²/4)
        let (omega, g) = (1.0, 0.8);
        let sz = crate::tensor::sigma_z();
        let id = ComplexMatrix::identity(2);
        let h = &(&sz.kron(&id) + &id.kron(&sz)).scale_re(omega / 2.0)
            + &sigma_x().kron(&sigma_x()).scale_re(g / 2.0);
        let start = DensityMatrix::pure(
            &crate::states::basis_vector(4, 0),
            DimList::qubits(2),
        )
        .unwrap();
        let nu = (omega * omega + g * g / 4.0).sqrt();
        let amp = (g / 2.0 / nu).powi(2);
        let mut saw_positive = false;
        for k in 1..40 {
            let t = k as f64 * 0.2;
            let out = unitary_evolve(&h, &start, t).unwrap();
            let p11 = out.mat().get(3, 3).re;
            let expect = amp * (nu * t).sin().powi(2);
            assert!((p11 - expect).abs() <= 1e-10, "t={t}: {p11} vs {expect}");
            let conc = measures::concurrence(&out).unwrap().value;
            let expect_c = 2.0 * (out.mat().get(0, 0).re * p11).sqrt();
            assert!((conc - expect_c).abs() <= 1e-9);
            saw_positive |= conc > 0.1;
        }
        assert!(saw_positive, "exchange coupling never generated entanglement");
    }

    #[test]
    fn multi_local_lindblad_embedding_counts() {
        let dims = DimList::qubits(3);
        let spec = multi_local_lindblad(
            ComplexMatrix::zeros(8, 8),
            &[(sigma_minus(), 1.0)],
            &dims,
        )
        .unwrap();
        assert_eq!(spec.jumps().len(), 3);

        let single = DimList::single(2);
        let spec1 =
            multi_local_lindblad(ComplexMatrix::zeros(2, 2), &[(sigma_minus(), 1.0)], &single)
                .unwrap();
        assert_eq!(spec1.jumps().len(), 1);
        assert!(spec1.jumps()[0].0.max_abs_diff(&sigma_minus()) == 0.0);
    }

    #[test]
    fn zero_temperature_emission_matches_kraus_damping() {
        // spontaneous emission at rate Γ↓ equals the amplitude-damping
        // channel with γ = e^{−Γ↓ t/2} applied to every qubit
        let gamma_down = 0.9;
        let dims = DimList::qubits(2);
        let spec = multi_local_lindblad(
            ComplexMatrix::zeros(4, 4),
            &[(sigma_minus(), gamma_down)],
            &dims,
        )
        .unwrap();
        let rho = bell_state(Bell::PhiPlus);
        for t in [0.3, 1.1, 2.5] {
            let me = lindblad_evolve(&spec, &rho, t).unwrap();
            let gamma = (-gamma_down * t / 2.0).exp();
            let local = crate::channels::amplitude_damping_qubit(gamma).unwrap();
            let kraus = crate::channels::multi_local_uniform(&local, 2).unwrap();
            let ch = kraus.apply(&rho).unwrap();
            assert!(me.mat().max_abs_diff(ch.mat()) <= 1e-8, "t = {t}");
        }
    }

    #[test]
    fn finite_temperature_kills_bell_entanglement_in_finite_time() {
        // at T = 0 the singlet's concurrence only decays asymptotically;
        // any Γ↑ > 0 produces a finite death time
        let dims = DimList::qubits(2);
        let cold = multi_local_lindblad(
            ComplexMatrix::zeros(4, 4),
            &[(sigma_minus(), 1.0)],
            &dims,
        )
        .unwrap();
        let warm = multi_local_lindblad(
            ComplexMatrix::zeros(4, 4),
            &[(sigma_minus(), 1.0), (sigma_plus(), 0.4)],
            &dims,
        )
        .unwrap();
        let rho = bell_state(Bell::PhiPlus);
        let c_cold = measures::concurrence(&lindblad_evolve(&cold, &rho, 6.0).unwrap())
            .unwrap()
            .value;
        let c_warm = measures::concurrence(&lindblad_evolve(&warm, &rho, 6.0).unwrap())
            .unwrap()
            .value;
        assert!(c_cold > 1e-7, "zero-T decay should stay entangled, C={c_cold}");
        assert!(c_warm == 0.0, "finite-T decay should hit zero, C={c_warm}");
    }

    #[test]
    fn ghz_multipartite_concurrence_dies_at_finite_temperature() {
        let dims = DimList::qubits(3);
        let warm = multi_local_lindblad(
            ComplexMatrix::zeros(8, 8),
            &[(sigma_minus(), 1.0), (sigma_plus(), 0.5)],
            &dims,
        )
        .unwrap();
        let ghz = crate::states::ghz_state(3).unwrap();
        // C_N needs pure states; at the two-qubit reduced level use negativity
        // across the A|BC split as the finite-time witness
        let early = lindblad_evolve(&warm, &ghz, 0.05).unwrap();
        let late = lindblad_evolve(&warm, &ghz, 8.0).unwrap();
        let neg_early = neg_split(&early);
        let neg_late = neg_split(&late);
        assert!(neg_early > 1e-3);
        assert!(neg_late < 1e-12, "negativity survived: {neg_late}");
    }

    fn neg_split(rho: &DensityMatrix) -> f64 {
        let flat = DensityMatrix::from_parts(
            rho.mat().clone(),
            DimList::new(vec![2, 4]).unwrap(),
        )
        .unwrap();
        measures::negativity(&flat, 0).unwrap()
    }

    #[test]
    fn jc_hamiltonian_structure() {
        let model = CavityModel {
            n_atoms: 2,
            omega_atom: 1.0,
            omega_cavity: 1.0,
            g: 0.0,
            truncation: 1,
        };
        let (h, dims) = jaynes_cummings_hamiltonian(&model).unwrap();
        assert_eq!(dims.dims(), &[2, 2, 2, 2]);
        assert!(h.is_hermitian(1e-12));

        // g = 0: populations are constant under evolution
        let mut amps = vec![ZERO; 16];
        amps[0b1000] = crate::tensor::ONE; // atom 1 excited, everything else empty
        let rho = DensityMatrix::pure(&amps, dims.clone()).unwrap();
        let out = unitary_evolve(&h, &rho, 2.3).unwrap();
        assert!(out.mat().get(0b1000, 0b1000).re > 1.0 - 1e-12);
    }

    #[test]
    fn vacuum_rabi_frequency() {
        let g = 0.7;
        let model = CavityModel {
            n_atoms: 1,
            omega_atom: 1.0,
            omega_cavity: 1.0,
            g,
            truncation: 1,
        };
        let (h, dims) = jaynes_cummings_hamiltonian(&model).unwrap();
        // |excited, 0 photons⟩ = index 2 in (atom, cavity) ordering
        let rho = DensityMatrix::pure(&crate::states::basis_vector(4, 2), dims).unwrap();
        for k in 1..30 {
            let t = 0.15 * k as f64;
            let out = unitary_evolve(&h, &rho, t).unwrap();
            let p_exc = out.mat().get(2, 2).re;
            // single-excitation block oscillates as cos²(gt)
            let expect = (g * t).cos().powi(2);
            assert!((p_exc - expect).abs() <= 1e-9, "t={t}: {p_exc} vs {expect}");
        }
    }

    #[test]
    fn excitation_number_commutes_with_hamiltonian() {
        let mut r = rng(179);
        for _ in 0..5 {
            let model = CavityModel {
                n_atoms: 1 + r.gen_range(0..2),
                omega_atom: r.gen::<f64>() * 2.0,
                omega_cavity: r.gen::<f64>() * 2.0,
                g: r.gen::<f64>(),
                truncation: 1 + r.gen_range(0..2),
            };
            let (h, _) = jaynes_cummings_hamiltonian(&model).unwrap();
            let (n_op, _) = excitation_number(&model).unwrap();
            let comm = &h.matmul(&n_op) - &n_op.matmul(&h);
            assert!(comm.norm_max() <= 1e-10);
        }
    }

    #[test]
    fn rk4_agrees_with_exponential_on_small_system() {
        // force the RK4 path by calling rhs-stepping through a large-dim
        // guard; here we instead cross-check on a 2-level system by
        // comparing exponential integration with manual RK4 stepping
        let (up, down) = (0.3, 1.1);
        let spec = LindbladSpec::new(
            ComplexMatrix::zeros(2, 2),
            vec![(sigma_plus(), up), (sigma_minus(), down)],
        )
        .unwrap();
        let rho = DensityMatrix::pure(&[ZERO, crate::tensor::ONE], DimList::single(2)).unwrap();
        let exact = lindblad_evolve(&spec, &rho, 1.0).unwrap();

        let mut m = rho.mat().clone();
        let steps = 2000;
        let dt = 1.0 / steps as f64;
        for _ in 0..steps {
            let k1 = spec.rhs(&m);
            let k2 = spec.rhs(&(&m + &k1.scale_re(dt / 2.0)));
            let k3 = spec.rhs(&(&m + &k2.scale_re(dt / 2.0)));
            let k4 = spec.rhs(&(&m + &k3.scale_re(dt)));
            let incr = &(&k1 + &k4) + &(&k2 + &k3).scale_re(2.0);
            m = &m + &incr.scale_re(dt / 6.0);
        }
        assert!(exact.mat().max_abs_diff(&m) <= 1e-9);
    }
}

//! Kraus-operator channels: construction, CPTP verification, application and
//! composition.
//!
//! Channels act as ρ ↦ Σ_μ E_μ ρ E_μ† with Σ_μ E_μ†E_μ = I. The qubit basis
//! is ground-first (|0⟩ ground, |1⟩ excited), so amplitude damping moves
//! population from index 1 to index 0.

use crate::states::DensityMatrix;
use crate::tensor::{
    c, cr, eig_hermitian, kron_all, ComplexMatrix, DimList, ONE, ZERO,
};
use crate::tolerances::CPTP_TOL;
use crate::{Error, Result};
use num_complex::Complex64;

/// A CPTP map in operator-sum form.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    ops: Vec<ComplexMatrix>,
    dims: DimList,
}

/// Exponential decay bookkeeping: rate Γ and elapsed time t give the
/// dimensionless factor γ(t) = e^{−Γt}.
#[derive(Debug, Clone, Copy)]
pub struct DecayParams {
    pub rate: f64,
    pub t: f64,
}

impl DecayParams {
    pub fn new(rate: f64, t: f64) -> Result<Self> {
        if rate < 0.0 || t < 0.0 {
            return Err(Error::InvalidParam(
                "decay rate and time must be >= 0".into(),
            ));
        }
        Ok(Self { rate, t })
    }

    pub fn gamma(&self) -> f64 {
        (-self.rate * self.t).exp()
    }
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>, dims: DimList) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidParam("channel needs at least one operator".into()));
        }
        let side = dims.total();
        for op in &ops {
            if op.rows() != side || op.cols() != side {
                return Err(Error::DimMismatch(format!(
                    "ragged Kraus operator: {}x{} on a dim-{} space",
                    op.rows(),
                    op.cols(),
                    side
                )));
            }
        }
        Ok(Self { ops, dims })
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }

    /// Trace preservation check: reports whether ‖Σ E†E − I‖_max ≤ 1e−10
    /// together with the deviation itself.
    pub fn verify_cptp(&self) -> (bool, f64) {
        let n = self.dim();
        let mut acc = ComplexMatrix::zeros(n, n);
        for op in &self.ops {
            acc = &acc + &op.dagger().matmul(op);
        }
        let dev = acc.max_abs_diff(&ComplexMatrix::identity(n));
        (dev <= CPTP_TOL, dev)
    }

    /// ρ ↦ Σ E ρ E†, validated on the way out.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimMismatch(format!(
                "channel on dim {} applied to state of dim {}",
                self.dim(),
                rho.dim()
            )));
        }
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for op in &self.ops {
            out = &out + &op.matmul(rho.mat()).matmul(&op.dagger());
        }
        DensityMatrix::from_parts(out.hermitize(), rho.dims().clone())
    }

    /// Sequential composition: applying the result equals applying `self`
    /// first, then `second`.
    pub fn compose(&self, second: &KrausChannel) -> Result<KrausChannel> {
        if self.dim() != second.dim() {
            return Err(Error::DimMismatch("composed channels must share a space".into()));
        }
        let mut ops = Vec::with_capacity(self.ops.len() * second.ops.len());
        for b in &second.ops {
            for a in &self.ops {
                ops.push(b.matmul(a));
            }
        }
        KrausChannel::new(ops, self.dims.clone())
    }
}

/// Identity channel on the given space.
pub fn identity(dims: DimList) -> KrausChannel {
    let n = dims.total();
    KrausChannel::new(vec![ComplexMatrix::identity(n)], dims).unwrap()
}

/// Qubit phase damping: E₀ = diag(1, γ), E₁ = diag(0, √(1−γ²)); the
/// off-diagonal element picks up a factor γ, populations are untouched.
pub fn dephasing_qubit(gamma: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParam(format!(
            "dephasing factor must lie in [0, 1], got {gamma}"
        )));
    }
    let e0 = ComplexMatrix::diag(&[1.0, gamma]);
    let e1 = ComplexMatrix::diag(&[0.0, (1.0 - gamma * gamma).sqrt()]);
    KrausChannel::new(vec![e0, e1], DimList::single(2))
}

/// Qubit amplitude damping in the ground-first basis:
/// E₀ = diag(1, γ), E₁ = |0⟩⟨1|·√(1−γ²); excited population scales by γ².
pub fn amplitude_damping_qubit(gamma: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParam(format!(
            "damping factor must lie in [0, 1], got {gamma}"
        )));
    }
    let omega = (1.0 - gamma * gamma).sqrt();
    let e0 = ComplexMatrix::diag(&[1.0, gamma]);
    let e1 = ComplexMatrix::new(2, 2, vec![ZERO, cr(omega), ZERO, ZERO])?;
    KrausChannel::new(vec![e0, e1], DimList::single(2))
}

/// Qubit depolarizing channel contracting the Bloch vector by e^{−t/τ},
/// realized as {√p₀ I, √p₁ σx, √p₁ σy, √p₁ σz} with
/// p₀ = (1 + 3e^{−t/τ})/4 and p₁ = (1 − e^{−t/τ})/4.
pub fn depolarizing_qubit(tau: f64, t: f64) -> Result<KrausChannel> {
    if tau <= 0.0 || t < 0.0 {
        return Err(Error::InvalidParam(
            "depolarizing needs τ > 0 and t >= 0".into(),
        ));
    }
    let contraction = (-t / tau).exp();
    let p0 = (1.0 + 3.0 * contraction) / 4.0;
    let p1 = (1.0 - contraction) / 4.0;
    let ops = vec![
        ComplexMatrix::identity(2).scale_re(p0.sqrt()),
        crate::tensor::sigma_x().scale_re(p1.sqrt()),
        crate::tensor::sigma_y().scale_re(p1.sqrt()),
        crate::tensor::sigma_z().scale_re(p1.sqrt()),
    ];
    KrausChannel::new(ops, DimList::single(2))
}

/// d-dimensional depolarizing channel ρ ↦ (1−λ)ρ + λ·I/d via the
/// Heisenberg-Weyl operator set.
pub fn depolarizing_qudit(d: usize, lambda: f64) -> Result<KrausChannel> {
    if d < 2 {
        return Err(Error::InvalidParam("depolarizing needs d >= 2".into()));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParam(format!(
            "depolarizing strength must lie in [0, 1], got {lambda}"
        )));
    }
    let omega = c(0.0, std::f64::consts::TAU / d as f64).exp();
    let shift = ComplexMatrix::from_fn(d, d, |i, j| if i == (j + 1) % d { ONE } else { ZERO });
    let clock = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            omega.powu(i as u32)
        } else {
            ZERO
        }
    });
    let mut ops = Vec::with_capacity(d * d);
    let keep = (1.0 - lambda + lambda / (d * d) as f64).sqrt();
    ops.push(ComplexMatrix::identity(d).scale_re(keep));
    let spread = lambda.sqrt() / d as f64;
    let mut xa = ComplexMatrix::identity(d);
    for a in 0..d {
        let mut w = xa.clone();
        for b in 0..d {
            if a != 0 || b != 0 {
                ops.push(w.scale_re(spread));
            }
            w = w.matmul(&clock);
        }
        xa = xa.matmul(&shift);
    }
    KrausChannel::new(ops, DimList::single(d))
}

/// Qutrit amplitude damping with two decay rates (levels 1 and 2 both decay
/// into level 0):
/// K₀ = diag(1, e^{−A₁t/2}, e^{−A₂t/2}), K₁ = |0⟩⟨1|√(1−e^{−A₁t}),
/// K₂ = |0⟩⟨2|√(1−e^{−A₂t}).
pub fn qutrit_amplitude_damping(a1: f64, a2: f64, t: f64) -> Result<KrausChannel> {
    if a1 < 0.0 || a2 < 0.0 || t < 0.0 {
        return Err(Error::InvalidParam("rates and time must be >= 0".into()));
    }
    let d1 = (-a1 * t / 2.0).exp();
    let d2 = (-a2 * t / 2.0).exp();
    let k0 = ComplexMatrix::diag(&[1.0, d1, d2]);
    let mut k1 = ComplexMatrix::zeros(3, 3);
    k1.set(0, 1, cr((1.0 - d1 * d1).sqrt()));
    let mut k2 = ComplexMatrix::zeros(3, 3);
    k2.set(0, 2, cr((1.0 - d2 * d2).sqrt()));
    KrausChannel::new(vec![k0, k1, k2], DimList::single(3))
}

/// Collective (global) dephasing on n qubits: the coherence between basis
/// states with excitation numbers h and h' decays by
/// exp[−Γt·(h − h')²/2], so the two-qubit outer coherence picks up
/// e^{−2Γt} while states of equal excitation stay untouched.
///
/// Realized as a diagonal Kraus set from the eigendecomposition of the
/// (positive-definite) Gaussian damping kernel.
pub fn collective_dephasing(n_qubits: usize, rate: f64, t: f64) -> Result<KrausChannel> {
    if n_qubits == 0 {
        return Err(Error::InvalidParam("need at least one qubit".into()));
    }
    if rate < 0.0 || t < 0.0 {
        return Err(Error::InvalidParam("rate and time must be >= 0".into()));
    }
    let dim = 1usize << n_qubits;
    let excitation = |idx: usize| idx.count_ones() as f64;
    let kernel = ComplexMatrix::from_fn(dim, dim, |i, j| {
        let dh = excitation(i) - excitation(j);
        cr((-rate * t * dh * dh / 2.0).exp())
    });
    let (eigs, v) = eig_hermitian(&kernel)?;
    let mut ops = Vec::new();
    for (k, &mu) in eigs.iter().enumerate() {
        if mu <= 1e-15 {
            continue;
        }
        let root = mu.sqrt();
        let diag: Vec<Complex64> = (0..dim).map(|i| v.get(i, k) * cr(root)).collect();
        ops.push(ComplexMatrix::diag_complex(&diag));
    }
    KrausChannel::new(ops, DimList::qubits(n_qubits))
}

/// Independent local noises: the joint Kraus set is every tensor product of
/// one operator from each local channel.
pub fn multi_local(locals: &[KrausChannel]) -> Result<KrausChannel> {
    if locals.is_empty() {
        return Err(Error::InvalidParam("multi_local needs at least one factor".into()));
    }
    let mut dims = Vec::new();
    for ch in locals {
        dims.extend_from_slice(ch.dims().dims());
    }
    let dims = DimList::new(dims)?;
    let mut ops: Vec<ComplexMatrix> = vec![ComplexMatrix::identity(1)];
    // identity(1) seeds the fold; kron with a 1x1 [1] is a no-op
    for ch in locals {
        let mut next = Vec::with_capacity(ops.len() * ch.ops().len());
        for acc in &ops {
            for op in ch.ops() {
                next.push(acc.kron(op));
            }
        }
        ops = next;
    }
    KrausChannel::new(ops, dims)
}

/// The same local channel applied independently to each of n subsystems.
pub fn multi_local_uniform(local: &KrausChannel, n: usize) -> Result<KrausChannel> {
    multi_local(&vec![local.clone(); n])
}

/// State obtained by sending half of the maximally entangled pair through
/// the channel: (c ⊗ id)(|Ψ(d)⟩⟨Ψ(d)|).
pub fn choi_state(channel: &KrausChannel) -> Result<DensityMatrix> {
    if channel.dims().len() != 1 {
        return Err(Error::DimMismatch(
            "Choi state is defined for single-system channels".into(),
        ));
    }
    let d = channel.dim();
    let proj = crate::states::max_entangled_projector(d);
    let id = ComplexMatrix::identity(d);
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for op in channel.ops() {
        let big = op.kron(&id);
        out = &out + &big.matmul(&proj).matmul(&big.dagger());
    }
    DensityMatrix::from_parts(out.hermitize(), DimList::new(vec![d, d])?)
}

/// Intrinsic dephasing in the eigenbasis of H: the (n, n') element picks up
/// e^{−i(E_n−E_{n'})t} · exp[−γt·(E_n−E_{n'})²].
///
/// The oscillation time `t` and the accumulated damping parameter
/// `gamma_t` are independent inputs; the constant-τ case uses
/// `gamma_t = τ·t`.
pub fn intrinsic_dephase(
    rho0: &DensityMatrix,
    hamiltonian: &ComplexMatrix,
    t: f64,
    gamma_t: f64,
) -> Result<DensityMatrix> {
    if gamma_t < 0.0 {
        return Err(Error::InvalidParam("accumulated γt must be >= 0".into()));
    }
    if hamiltonian.rows() != rho0.dim() {
        return Err(Error::DimMismatch(
            "Hamiltonian and state dimensions differ".into(),
        ));
    }
    let (energies, v) = eig_hermitian(hamiltonian)?;
    // move to the energy basis, damp, move back
    let rho_e = v.dagger().matmul(rho0.mat()).matmul(&v);
    let n = rho0.dim();
    let damped = ComplexMatrix::from_fn(n, n, |i, j| {
        let de = energies[i] - energies[j];
        let phase = c(0.0, -de * t).exp();
        rho_e.get(i, j) * phase * cr((-gamma_t * de * de).exp())
    });
    let back = v.matmul(&damped).matmul(&v.dagger());
    DensityMatrix::from_parts(back.hermitize(), rho0.dims().clone())
}

/// Convenience: tensor a slice of local operators (mixing identities) into
/// the full-space operator.
pub fn embed_local(op: &ComplexMatrix, position: usize, dims: &DimList) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = dims
        .dims()
        .iter()
        .enumerate()
        .map(|(k, &d)| {
            if k == position {
                op.clone()
            } else {
                ComplexMatrix::identity(d)
            }
        })
        .collect();
    kron_all(&factors)
}

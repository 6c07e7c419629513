//! Coherence, entanglement and separability functionals.
//!
//! All entropic quantities use base-2 logarithms.

use crate::states::{DensityMatrix, XStateParams};
use crate::tensor::{
    cr, eigvals_hermitian, kron_all, partial_trace, partial_transpose, sigma_y, sqrt_psd,
    ComplexMatrix,
};
use crate::{Error, Result};

/// Value of a cutoff-defined measure together with its pre-cutoff argument.
#[derive(Debug, Clone)]
pub struct MeasureResult {
    pub value: f64,
    /// Pre-cutoff quantity (the argument of the max(0, ·)).
    pub argument: f64,
    pub measure_id: &'static str,
}

/// tr ρ², in [1/d, 1].
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.mat().matmul(rho.mat()).trace().re
}

/// Uhlmann fidelity [tr √(√ρ₂ ρ₁ √ρ₂)]².
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimMismatch(format!(
            "fidelity between {}x{} and {}x{} states",
            rho1.dim(),
            rho1.dim(),
            rho2.dim(),
            rho2.dim()
        )));
    }
    let r2 = sqrt_psd(rho2.mat())?;
    let inner = &(&r2 * rho1.mat()) * &r2;
    let root = sqrt_psd(&inner.hermitize())?;
    let tr = root.trace().re;
    Ok((tr * tr).clamp(0.0, 1.0 + 1e-9))
}

/// Two-qubit concurrence via the spin-flipped matrix
/// ρ̃ = (σy⊗σy) ρ* (σy⊗σy).
///
/// The square roots of the eigenvalues of ρρ̃ are obtained directly as the
/// singular values of M = √ρ (σy⊗σy) (√ρ)*, through the Hermitian
/// embedding [[0, M], [M†, 0]]. Computing the √λ themselves keeps the
/// round-off absolute (≈1e−15) instead of letting a √ amplify it to 1e−8
/// when an eigenvalue sits at zero.
pub fn concurrence(rho: &DensityMatrix) -> Result<MeasureResult> {
    if rho.dim() != 4 || rho.dims().dims() != [2, 2] {
        return Err(Error::DimMismatch(
            "concurrence is defined for two-qubit states".into(),
        ));
    }
    let yy = kron_all(&[sigma_y(), sigma_y()]);
    let sr = sqrt_psd(rho.mat())?;
    let m = &(&sr * &yy) * &sr.conj();
    let mut block = ComplexMatrix::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            block.set(i, 4 + j, m.get(i, j));
            block.set(4 + j, i, m.get(i, j).conj());
        }
    }
    // spectrum is ±σ_i; descending order puts the four singular values first
    let eigs = eigvals_hermitian(&block)?;
    let roots: Vec<f64> = eigs[..4].iter().map(|&e| e.max(0.0)).collect();
    let argument = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(MeasureResult {
        value: argument.max(0.0),
        argument,
        measure_id: "concurrence",
    })
}

/// Binary entropy h(x) = −x log₂ x − (1−x) log₂(1−x).
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Entanglement of formation from a concurrence value.
pub fn entanglement_of_formation(c: f64) -> Result<f64> {
    if !(0.0..=1.0 + 1e-12).contains(&c) {
        return Err(Error::InvalidParam(format!(
            "concurrence must lie in [0, 1], got {c}"
        )));
    }
    let c = c.min(1.0);
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

/// Sum of |negative eigenvalues| of the partial transpose over `party`.
pub fn negativity(rho: &DensityMatrix, party: usize) -> Result<f64> {
    if rho.dims().len() != 2 {
        return Err(Error::DimMismatch(
            "negativity needs a bipartite dimension list".into(),
        ));
    }
    let pt = partial_transpose(rho.mat(), rho.dims(), party)?;
    let eigs = eigvals_hermitian(&pt.hermitize())?;
    Ok(eigs.iter().filter(|&&e| e < 0.0).map(|e| -e).sum())
}

/// Entanglement of formation of the d⊗d isotropic state (d ≥ 3), piecewise
/// in the fidelity F. Base-2 logarithms throughout.
pub fn isotropic_eof(fidelity: f64, d: usize) -> Result<f64> {
    if d < 3 {
        return Err(Error::InvalidParam("isotropic EoF formula needs d >= 3".into()));
    }
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::InvalidParam(format!(
            "fidelity must lie in [0, 1], got {fidelity}"
        )));
    }
    let df = d as f64;
    let f = fidelity;
    if f <= 1.0 / df {
        return Ok(0.0);
    }
    let knot = 4.0 * (df - 1.0) / (df * df);
    if f <= knot {
        let xi = ((f.sqrt() + ((df - 1.0) * (1.0 - f)).sqrt()).powi(2)) / df;
        Ok(binary_entropy(xi) + (1.0 - xi) * (df - 1.0).log2())
    } else {
        Ok(df * (df - 1.0).log2() / (df - 2.0) * (f - 1.0) + df.log2())
    }
}

/// Fidelity of a two-sided depolarized isotropic state after time t, and
/// whether it is still above the separability threshold 1/d.
pub fn isotropic_esd_check(d: usize, f0: f64, rate: f64, t: f64) -> Result<(f64, bool)> {
    if rate < 0.0 || t < 0.0 {
        return Err(Error::InvalidParam("rate and time must be >= 0".into()));
    }
    let rho0 = crate::states::isotropic_state(d, f0)?;
    let lambda = 1.0 - (-rate * t).exp();
    let local = crate::channels::depolarizing_qudit(d, lambda)?;
    let both = crate::channels::multi_local(&[local.clone(), local])?;
    let rho_t = both.apply(&rho0)?;
    let proj = crate::states::max_entangled_projector(d);
    let f_t = rho_t.mat().matmul(&proj).trace().re;
    Ok((f_t, f_t > 1.0 / d as f64))
}

/// Separability indicator s(t) for the damped two-qutrit mixture:
/// s(t) = (ε/8)(2e^{−A₁t/2} + 2e^{−A₂t/2} + 2e^{−(A₁+A₂)t/2} + e^{−A₁t} + e^{−A₂t}),
/// separable iff s(t) ≤ 1/4. s(0) = ε.
pub fn caves_milburn_s(epsilon: f64, a1: f64, a2: f64, t: f64) -> Result<(f64, bool)> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParam(format!(
            "mixing must lie in [0, 1], got {epsilon}"
        )));
    }
    if a1 < 0.0 || a2 < 0.0 || t < 0.0 {
        return Err(Error::InvalidParam("rates and time must be >= 0".into()));
    }
    let x1 = (-a1 * t / 2.0).exp();
    let x2 = (-a2 * t / 2.0).exp();
    let s = epsilon / 8.0 * (2.0 * x1 + 2.0 * x2 + 2.0 * x1 * x2 + x1 * x1 + x2 * x2);
    Ok((s, s <= 0.25))
}

/// Three-tangle of a pure three-qubit state,
/// τ = C²_{A[BC]} − C²_{AB} − C²_{AC} with C_{A[BC]} = 2√det ρ_A.
pub fn three_tangle(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 8 || rho.dims().dims() != [2, 2, 2] {
        return Err(Error::DimMismatch("three-tangle needs three qubits".into()));
    }
    if purity(rho) < 1.0 - 1e-8 {
        return Err(Error::InvalidState(
            "three-tangle is defined only for pure states".into(),
        ));
    }
    let rho_a = partial_trace(rho.mat(), rho.dims(), &[0])?;
    let det = rho_a.get(0, 0) * rho_a.get(1, 1) - rho_a.get(0, 1) * rho_a.get(1, 0);
    let c_a_bc_sq = 4.0 * det.re.max(0.0);
    let c_ab = concurrence(&rho.reduce(&[0, 1])?)?.value;
    let c_ac = concurrence(&rho.reduce(&[0, 2])?)?.value;
    Ok((c_a_bc_sq - c_ab * c_ab - c_ac * c_ac).clamp(0.0, 1.0))
}

/// Multipartite concurrence of a pure N-qubit state,
/// C_N = 2^{1−N/2} √((2^N − 2) − Σ_k tr ρ_k²), the sum running over all
/// 2^N − 2 nontrivial reductions.
pub fn multipartite_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let n = rho.dims().len();
    if n < 2 || rho.dims().dims().iter().any(|&d| d != 2) {
        return Err(Error::DimMismatch(
            "multipartite concurrence needs >= 2 qubits".into(),
        ));
    }
    if purity(rho) < 1.0 - 1e-8 {
        return Err(Error::InvalidState(
            "multipartite concurrence is defined only for pure states".into(),
        ));
    }
    let norm_sq = rho.mat().trace().re; // ⟨ψ|ψ⟩ for a normalized state
    let mut purity_sum = 0.0;
    for mask in 1..((1usize << n) - 1) {
        let keep: Vec<usize> = (0..n).filter(|k| mask & (1 << k) != 0).collect();
        let red = partial_trace(rho.mat(), rho.dims(), &keep)?;
        purity_sum += red.matmul(&red).trace().re;
    }
    let inside = (f64::powi(2.0, n as i32) - 2.0) * norm_sq * norm_sq - purity_sum;
    Ok(f64::powf(2.0, 1.0 - n as f64 / 2.0) * inside.max(0.0).sqrt())
}

/// Closed-form X-state concurrence 2·max{0, |w| − √(bc), |z| − √(ad)}.
pub fn x_state_concurrence(p: &XStateParams) -> Result<MeasureResult> {
    p.validate()?;
    let ch_w = p.w.norm() - (p.b * p.c).sqrt();
    let ch_z = p.z.norm() - (p.a * p.d).sqrt();
    let argument = 2.0 * ch_w.max(ch_z);
    Ok(MeasureResult {
        value: argument.max(0.0),
        argument,
        measure_id: "x_state_concurrence",
    })
}

/// Phase correlation of an X-state, 2(|w| + |z|).
pub fn phase_correlation(p: &XStateParams) -> f64 {
    2.0 * (p.w.norm() + p.z.norm())
}

/// Photonic amplitude-damping concurrence
/// C = max{0, 2(1−p)|β|(|α| − p|β|)} for the state |α||HH⟩ + |β|e^{iδ}|VV⟩.
pub fn adh_concurrence(alpha: f64, beta: f64, p: f64) -> Result<f64> {
    if (alpha * alpha + beta * beta - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParam(
            "amplitudes must satisfy |α|² + |β|² = 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!(
            "damping probability must lie in [0, 1], got {p}"
        )));
    }
    Ok((2.0 * (1.0 - p) * beta * (alpha - p * beta)).max(0.0))
}

/// Polarization pair α|HH⟩ + β|VV⟩ after each photon passed the damping
/// element |V⟩|a⟩ → √(1−p)|V⟩|a⟩ + √p|H⟩|b⟩, spatial modes traced out.
///
/// Built through the explicit polarization⊗mode dilation so the traced
/// channel action is exercised end to end, not just its closed form.
pub fn adh_damped_pair(alpha: f64, beta: f64, p: f64) -> Result<DensityMatrix> {
    use crate::tensor::{DimList, ZERO};
    if (alpha * alpha + beta * beta - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParam(
            "amplitudes must satisfy |α|² + |β|² = 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!(
            "damping probability must lie in [0, 1], got {p}"
        )));
    }
    // basis per photon: (pol ⊗ mode) with pol |0⟩=H, |1⟩=V; mode |0⟩=a, |1⟩=b
    let u = {
        let s = (1.0 - p).sqrt();
        let q = p.sqrt();
        // rows/columns ordered H a, H b, V a, V b
        ComplexMatrix::new(
            4,
            4,
            vec![
                cr(1.0),
                ZERO,
                ZERO,
                ZERO,
                ZERO,
                cr(s),
                cr(q),
                ZERO,
                ZERO,
                cr(-q),
                cr(s),
                ZERO,
                ZERO,
                ZERO,
                ZERO,
                cr(1.0),
            ],
        )?
    };
    // |Φ⟩ = α|HH⟩ + β|VV⟩ with both modes in |a⟩, ordering (polA, modeA, polB, modeB)
    let mut amps = vec![ZERO; 16];
    amps[0] = cr(alpha); // |H a H a⟩
    amps[10] = cr(beta); // |V a V a⟩
    let full = DimList::new(vec![2, 2, 2, 2])?;
    let psi = DensityMatrix::pure(&amps, full.clone())?;
    let u_both = u.kron(&u);
    let evolved = &(&u_both * psi.mat()) * &u_both.dagger();
    let reduced = partial_trace(&evolved, &full, &[0, 2])?;
    DensityMatrix::from_parts(reduced.hermitize(), DimList::qubits(2))
}

/// The damped-pair concurrence computed through the dilation.
pub fn adh_concurrence_simulated(alpha: f64, beta: f64, p: f64) -> Result<f64> {
    Ok(concurrence(&adh_damped_pair(alpha, beta, p)?)?.value)
}

/// Upper bound on the energy transfer needed for complete disentanglement,
/// E_A(2n̄+1) / (2[(2n̄+1)² + 2n̄(n̄+1)]).
pub fn energy_transfer_bound(e_a: f64, n_bar: f64) -> Result<f64> {
    if e_a <= 0.0 || n_bar < 0.0 {
        return Err(Error::InvalidParam(
            "level splitting must be > 0 and n̄ >= 0".into(),
        ));
    }
    let m = 2.0 * n_bar + 1.0;
    Ok(e_a * m / (2.0 * (m * m + 2.0 * n_bar * (n_bar + 1.0))))
}

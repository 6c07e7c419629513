//! Validated density-matrix construction for the state families under study.
//!
//! Basis conventions, used consistently by every factory and channel:
//! qubit |0⟩ is the ground state and |1⟩ the excited state, and party 0 is
//! the slowest-varying index (so the two-qubit basis reads |00⟩, |01⟩,
//! |10⟩, |11⟩). Factories reject invalid parameters instead of
//! renormalizing.

use crate::tensor::{c, cr, eigvals_hermitian, ComplexMatrix, DimList, ONE, ZERO};
use crate::tolerances::{HERMITIAN_TOL, PSD_TOL, TRACE_TOL};
use crate::{Error, Result};
use num_complex::Complex64;
use std::fmt::Write as _;

/// A validated quantum state: Hermitian, unit trace, positive semidefinite
/// within tolerance, annotated with its tensor factorization.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: DimList,
}

impl DensityMatrix {
    pub fn from_parts(mat: ComplexMatrix, dims: DimList) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidState("density matrix must be square".into()));
        }
        dims.check_side(mat.rows())?;
        let dev = mat.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { dev });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let eigs = eigvals_hermitian(&mat.hermitize())?;
        let min = eigs.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPsd { min_eig: min });
        }
        Ok(Self { mat, dims })
    }

    /// Rank-1 state |ψ⟩⟨ψ| from a normalized amplitude vector.
    pub fn pure(amplitudes: &[Complex64], dims: DimList) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParam(format!(
                "state vector norm² = {norm_sq}, expected 1"
            )));
        }
        Self::from_parts(ComplexMatrix::outer(amplitudes, amplitudes), dims)
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Reduced state over the kept subsystems.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let red = crate::tensor::partial_trace(&self.mat, &self.dims, keep)?;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        let dims = DimList::new(keep_sorted.iter().map(|&k| self.dims.dims()[k]).collect())?;
        DensityMatrix::from_parts(red.hermitize(), dims)
    }

    /// Serialize to the plain-text matrix format: a `dims:` header line, then
    /// one row per line with entries as `re+imj` pairs at 17 significant
    /// digits (exact f64 round trip).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("dims:");
        for d in self.dims.dims() {
            let _ = write!(out, " {d}");
        }
        out.push('\n');
        let n = self.mat.rows();
        for i in 0..n {
            for j in 0..n {
                if j > 0 {
                    out.push(' ');
                }
                let z = self.mat.get(i, j);
                let _ = write!(out, "{}", format_entry(z));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidParam("empty matrix file".into()))?;
        let rest = header
            .strip_prefix("dims:")
            .ok_or_else(|| Error::InvalidParam("matrix file must start with 'dims:'".into()))?;
        let dims: Vec<usize> = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidParam(format!("bad dimension '{t}'")))
            })
            .collect::<Result<_>>()?;
        let dims = DimList::new(dims)?;
        let n = dims.total();
        let mut data = Vec::with_capacity(n * n);
        for line in lines {
            for tok in line.split_whitespace() {
                data.push(parse_entry(tok)?);
            }
        }
        let mat = ComplexMatrix::new(n, n, data)?;
        Self::from_parts(mat, dims)
    }
}

fn format_entry(z: Complex64) -> String {
    // 17 significant digits guarantee exact decimal round trip for f64
    if z.im >= 0.0 || z.im.is_nan() {
        format!("{:.16e}+{:.16e}j", z.re, z.im)
    } else {
        format!("{:.16e}-{:.16e}j", z.re, -z.im)
    }
}

fn parse_entry(tok: &str) -> Result<Complex64> {
    let body = tok
        .strip_suffix('j')
        .ok_or_else(|| Error::InvalidParam(format!("entry '{tok}' missing trailing 'j'")))?;
    // split at the sign that separates re from im (skip mantissa signs after 'e')
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let ch = bytes[k] as char;
        if (ch == '+' || ch == '-') && bytes[k - 1] as char != 'e' && bytes[k - 1] as char != 'E' {
            split = Some(k);
            break;
        }
    }
    let k = split.ok_or_else(|| Error::InvalidParam(format!("cannot parse entry '{tok}'")))?;
    let re: f64 = body[..k]
        .parse()
        .map_err(|_| Error::InvalidParam(format!("bad real part in '{tok}'")))?;
    let im: f64 = body[k..]
        .parse()
        .map_err(|_| Error::InvalidParam(format!("bad imaginary part in '{tok}'")))?;
    Ok(c(re, im))
}

/// The four maximally entangled two-qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

pub fn bell_state(which: Bell) -> DensityMatrix {
    let s = 1.0 / 2f64.sqrt();
    let amps = match which {
        Bell::PhiPlus => [cr(s), ZERO, ZERO, cr(s)],
        Bell::PhiMinus => [cr(s), ZERO, ZERO, cr(-s)],
        Bell::PsiPlus => [ZERO, cr(s), cr(s), ZERO],
        Bell::PsiMinus => [ZERO, cr(s), cr(-s), ZERO],
    };
    DensityMatrix::pure(&amps, DimList::qubits(2)).unwrap()
}

/// (|00…0⟩ + |11…1⟩)/√2 on n qubits.
pub fn ghz_state(n: usize) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::InvalidParam("GHZ needs at least 2 qubits".into()));
    }
    let dim = 1usize << n;
    let mut amps = vec![ZERO; dim];
    let s = 1.0 / 2f64.sqrt();
    amps[0] = cr(s);
    amps[dim - 1] = cr(s);
    DensityMatrix::pure(&amps, DimList::qubits(n))
}

/// (|10…0⟩ + |01…0⟩ + … + |00…1⟩)/√n on n qubits.
pub fn w_state(n: usize) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::InvalidParam("W needs at least 2 qubits".into()));
    }
    let dim = 1usize << n;
    let mut amps = vec![ZERO; dim];
    let s = 1.0 / (n as f64).sqrt();
    for k in 0..n {
        amps[1usize << (n - 1 - k)] = cr(s);
    }
    DensityMatrix::pure(&amps, DimList::qubits(n))
}

/// Pure three-qubit state a0|000⟩ + a4|100⟩ + a5|101⟩ + a6|110⟩ + a7|111⟩.
pub fn generic_tripartite(coeffs: [Complex64; 5]) -> Result<DensityMatrix> {
    let norm_sq: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParam(format!(
            "coefficients have norm² = {norm_sq}, expected 1"
        )));
    }
    let mut amps = vec![ZERO; 8];
    amps[0] = coeffs[0];
    amps[4] = coeffs[1];
    amps[5] = coeffs[2];
    amps[6] = coeffs[3];
    amps[7] = coeffs[4];
    DensityMatrix::pure(&amps, DimList::qubits(3))
}

/// Two-qubit Werner state with fidelity F to the singlet.
pub fn werner2(fidelity: f64) -> Result<DensityMatrix> {
    if !(0.25..=1.0).contains(&fidelity) {
        return Err(Error::InvalidParam(format!(
            "Werner fidelity must lie in [1/4, 1], got {fidelity}"
        )));
    }
    let id = ComplexMatrix::identity(4).scale_re((1.0 - fidelity) / 3.0);
    let singlet = bell_state(Bell::PsiMinus);
    let mat = &id + &singlet.mat().scale_re((4.0 * fidelity - 1.0) / 3.0);
    DensityMatrix::from_parts(mat, DimList::qubits(2))
}

/// Three-qubit Werner state (p/8)·I + (1−p)·GHZ projector.
pub fn werner3(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!(
            "mixing weight must lie in [0, 1], got {p}"
        )));
    }
    let ghz = ghz_state(3)?;
    let mat = &ComplexMatrix::identity(8).scale_re(p / 8.0) + &ghz.mat().scale_re(1.0 - p);
    DensityMatrix::from_parts(mat, DimList::qubits(3))
}

/// Maximally entangled |Ψ(d)⟩ = (1/√d) Σ |ii⟩ as a projector.
pub fn max_entangled_projector(d: usize) -> ComplexMatrix {
    let mut amps = vec![ZERO; d * d];
    let s = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        amps[i * d + i] = cr(s);
    }
    ComplexMatrix::outer(&amps, &amps)
}

/// d⊗d isotropic state with fidelity F to |Ψ(d)⟩; U⊗U* invariant.
pub fn isotropic_state(d: usize, fidelity: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidParam("isotropic state needs d >= 2".into()));
    }
    let dd = (d * d) as f64;
    let id_w = (1.0 - fidelity) / (dd - 1.0);
    let p_w = (fidelity * dd - 1.0) / (dd - 1.0);
    let mat = &ComplexMatrix::identity(d * d).scale_re(id_w)
        + &max_entangled_projector(d).scale_re(p_w);
    // validity is a numeric check on the spectrum rather than an analytic
    // bound; from_parts rejects negative eigenvalues
    DensityMatrix::from_parts(mat, DimList::new(vec![d, d])?)
}

/// Two-qutrit mixture (1−ε)/9 · I₉ + ε |Ψ⟩⟨Ψ|.
pub fn caves_milburn_state(epsilon: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParam(format!(
            "mixing must lie in [0, 1], got {epsilon}"
        )));
    }
    let mat = &ComplexMatrix::identity(9).scale_re((1.0 - epsilon) / 9.0)
        + &max_entangled_projector(3).scale_re(epsilon);
    DensityMatrix::from_parts(mat, DimList::new(vec![3, 3])?)
}

/// Parameters of a two-qubit X-state: diagonal (a, b, c, d) and
/// anti-diagonal coherences w (outer, between |00⟩ and |11⟩) and z (inner,
/// between |01⟩ and |10⟩).
#[derive(Debug, Clone, Copy)]
pub struct XStateParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub w: Complex64,
    pub z: Complex64,
}

impl XStateParams {
    pub fn validate(&self) -> Result<()> {
        let sum = self.a + self.b + self.c + self.d;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParam(format!(
                "X-state diagonal sums to {sum}, expected 1"
            )));
        }
        if self.a < 0.0 || self.b < 0.0 || self.c < 0.0 || self.d < 0.0 {
            return Err(Error::InvalidParam("X-state populations must be >= 0".into()));
        }
        if self.w.norm_sqr() > self.a * self.d + 1e-12 {
            return Err(Error::NotPsd {
                min_eig: self.a * self.d - self.w.norm_sqr(),
            });
        }
        if self.z.norm_sqr() > self.b * self.c + 1e-12 {
            return Err(Error::NotPsd {
                min_eig: self.b * self.c - self.z.norm_sqr(),
            });
        }
        Ok(())
    }
}

/// Two-qubit state with the X sparsity pattern.
pub fn x_state(p: &XStateParams) -> Result<DensityMatrix> {
    p.validate()?;
    let mut m = ComplexMatrix::zeros(4, 4);
    m.set(0, 0, cr(p.a));
    m.set(1, 1, cr(p.b));
    m.set(2, 2, cr(p.c));
    m.set(3, 3, cr(p.d));
    m.set(0, 3, p.w);
    m.set(3, 0, p.w.conj());
    m.set(1, 2, p.z);
    m.set(2, 1, p.z.conj());
    DensityMatrix::from_parts(m, DimList::qubits(2))
}

/// The 6×6 qubit-qutrit matrix with corner coherences xγ, diagonal
/// (1/4, 1/8, 1/8, 1/8, 1/8, 1/4), dims (2, 3).
pub fn qubit_qutrit_ansatz(x: f64, gamma: f64) -> Result<DensityMatrix> {
    if !(0.0..=0.25).contains(&x) {
        return Err(Error::InvalidParam(format!("x must lie in [0, 1/4], got {x}")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParam(format!(
            "decay factor must lie in [0, 1], got {gamma}"
        )));
    }
    let mut m = ComplexMatrix::diag(&[0.25, 0.125, 0.125, 0.125, 0.125, 0.25]);
    m.set(0, 5, cr(x * gamma));
    m.set(5, 0, cr(x * gamma));
    DensityMatrix::from_parts(m, DimList::new(vec![2, 3])?)
}

/// Photon-number X-state (p00, p01, p10, p11 diagonal, z inner coherence),
/// normalized by P = p00 + p01 + p10 + p11.
pub fn photon_xstate(p00: f64, p01: f64, p10: f64, p11: f64, z: Complex64) -> Result<DensityMatrix> {
    if p00 < 0.0 || p01 < 0.0 || p10 < 0.0 || p11 < 0.0 {
        return Err(Error::InvalidParam("photon probabilities must be >= 0".into()));
    }
    let total = p00 + p01 + p10 + p11;
    if total <= 0.0 {
        return Err(Error::InvalidParam("photon probabilities sum to zero".into()));
    }
    if z.norm_sqr() > p01 * p10 + 1e-12 {
        return Err(Error::NotPsd {
            min_eig: p01 * p10 - z.norm_sqr(),
        });
    }
    let mut m = ComplexMatrix::zeros(4, 4);
    m.set(0, 0, cr(p00 / total));
    m.set(1, 1, cr(p01 / total));
    m.set(2, 2, cr(p10 / total));
    m.set(3, 3, cr(p11 / total));
    m.set(1, 2, z / cr(total));
    m.set(2, 1, z.conj() / cr(total));
    DensityMatrix::from_parts(m, DimList::qubits(2))
}

/// |0⟩/|1⟩ basis vectors of a d-dimensional space as amplitude slices.
pub fn basis_vector(d: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; d];
    v[k] = ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures;
    use crate::random::{random_unitary, rng};
    use crate::tensor::partial_trace;

    #[test]
    fn bell_states_are_pure_and_maximally_entangled() {
        for which in [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus] {
            let rho = bell_state(which);
            assert!((measures::purity(&rho) - 1.0).abs() < 1e-12);
            let red = rho.reduce(&[0]).unwrap();
            assert!(red
                .mat()
                .max_abs_diff(&ComplexMatrix::identity(2).scale_re(0.5))
                < 1e-12);
        }
        let singlet = bell_state(Bell::PsiMinus);
        assert!((measures::concurrence(&singlet).unwrap().value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ghz_reductions_carry_no_pair_entanglement() {
        let ghz = ghz_state(3).unwrap();
        for traced in 0..3 {
            let keep: Vec<usize> = (0..3).filter(|&k| k != traced).collect();
            let red = ghz.reduce(&keep).unwrap();
            let conc = measures::concurrence(&red).unwrap().value;
            assert!(conc < 1e-12, "pair concurrence {conc} after tracing {traced}");
        }
    }

    #[test]
    fn w_reductions_keep_equal_pair_entanglement() {
        for n in [3usize, 4] {
            let w = w_state(n).unwrap();
            let expected = 2.0 / n as f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    let red = w.reduce(&[i, j]).unwrap();
                    let conc = measures::concurrence(&red).unwrap().value;
                    assert!(
                        (conc - expected).abs() < 1e-10,
                        "pair ({i},{j}) concurrence {conc} != {expected}"
                    );
                }
            }
        }
    }

    #[test]
    fn ghz2_is_phi_plus() {
        let g = ghz_state(2).unwrap();
        let phi = bell_state(Bell::PhiPlus);
        assert!(g.mat().max_abs_diff(phi.mat()) < 1e-12);
    }

    #[test]
    fn generic_tripartite_corners() {
        let s = cr(1.0 / 2f64.sqrt());
        let ghzish = generic_tripartite([s, ZERO, ZERO, ZERO, s]).unwrap();
        assert!(ghzish.mat().max_abs_diff(ghz_state(3).unwrap().mat()) < 1e-12);

        let product = generic_tripartite([ONE, ZERO, ZERO, ZERO, ZERO]).unwrap();
        assert!((measures::purity(&product) - 1.0).abs() < 1e-12);

        assert!(generic_tripartite([ONE, ONE, ZERO, ZERO, ZERO]).is_err());
    }

    #[test]
    fn werner2_limits_and_concurrence() {
        let pure = werner2(1.0).unwrap();
        assert!(pure.mat().max_abs_diff(bell_state(Bell::PsiMinus).mat()) < 1e-12);

        let mixed = werner2(0.25).unwrap();
        assert!(mixed
            .mat()
            .max_abs_diff(&ComplexMatrix::identity(4).scale_re(0.25))
            < 1e-12);

        for f in [0.3, 0.5, 0.6, 0.75, 0.9] {
            let w = werner2(f).unwrap();
            let conc = measures::concurrence(&w).unwrap().value;
            let expect = (2.0 * f - 1.0).max(0.0);
            assert!((conc - expect).abs() < 1e-10, "F={f}: {conc} vs {expect}");
        }
        assert!(werner2(0.2).is_err());
    }

    #[test]
    fn werner3_limits_and_purity() {
        assert!(werner3(0.0)
            .unwrap()
            .mat()
            .max_abs_diff(ghz_state(3).unwrap().mat())
            < 1e-12);
        assert!(werner3(1.0)
            .unwrap()
            .mat()
            .max_abs_diff(&ComplexMatrix::identity(8).scale_re(0.125))
            < 1e-12);

        let w = werner3(0.5).unwrap();
        let direct = w.mat().matmul(w.mat()).trace().re;
        assert!((measures::purity(&w) - direct).abs() < 1e-12);
    }

    #[test]
    fn isotropic_invariance_under_u_otimes_ustar() {
        let mut r = rng(41);
        for d in [2usize, 3] {
            let rho = isotropic_state(d, 0.7).unwrap();
            for _ in 0..20 {
                let u = random_unitary(&mut r, d);
                let big = u.kron(&u.conj());
                let rotated = &(&big * rho.mat()) * &big.dagger();
                assert!(rotated.max_abs_diff(rho.mat()) <= 1e-9);
            }
        }
    }

    #[test]
    fn isotropic_limits() {
        let pure = isotropic_state(3, 1.0).unwrap();
        assert!(pure.mat().max_abs_diff(&max_entangled_projector(3)) < 1e-12);
        let mixed = isotropic_state(3, 1.0 / 9.0).unwrap();
        assert!(mixed
            .mat()
            .max_abs_diff(&ComplexMatrix::identity(9).scale_re(1.0 / 9.0))
            < 1e-12);
        // separability-critical point F = 1/d
        let critical = isotropic_state(3, 1.0 / 3.0).unwrap();
        let neg = measures::negativity(&critical, 0).unwrap();
        assert!(neg < 1e-10, "negativity at F=1/d should vanish, got {neg}");
    }

    #[test]
    fn caves_milburn_limits_and_boundary() {
        assert!(caves_milburn_state(0.0)
            .unwrap()
            .mat()
            .max_abs_diff(&ComplexMatrix::identity(9).scale_re(1.0 / 9.0))
            < 1e-12);
        assert!((measures::purity(&caves_milburn_state(1.0).unwrap()) - 1.0).abs() < 1e-10);
        let boundary = caves_milburn_state(0.25).unwrap();
        let neg = measures::negativity(&boundary, 0).unwrap();
        assert!(neg < 1e-10, "entanglement boundary is ε = 1/4, neg = {neg}");
        let above = caves_milburn_state(0.3).unwrap();
        assert!(measures::negativity(&above, 0).unwrap() > 1e-4);
    }

    #[test]
    fn x_state_bell_corners() {
        let phi = x_state(&XStateParams {
            a: 0.5,
            b: 0.0,
            c: 0.0,
            d: 0.5,
            w: cr(0.5),
            z: ZERO,
        })
        .unwrap();
        assert!(phi.mat().max_abs_diff(bell_state(Bell::PhiPlus).mat()) < 1e-12);

        let psi = x_state(&XStateParams {
            a: 0.0,
            b: 0.5,
            c: 0.5,
            d: 0.0,
            w: ZERO,
            z: cr(0.5),
        })
        .unwrap();
        assert!(psi.mat().max_abs_diff(bell_state(Bell::PsiPlus).mat()) < 1e-12);
    }

    #[test]
    fn lambda_state_initial_concurrence() {
        // diagonal (1,4,4,0)/9 with inner coherence λ/9
        for lambda in [0.5, 1.0, 2.0] {
            let p = XStateParams {
                a: 1.0 / 9.0,
                b: 4.0 / 9.0,
                c: 4.0 / 9.0,
                d: 0.0,
                w: ZERO,
                z: cr(lambda / 9.0),
            };
            let rho = x_state(&p).unwrap();
            let conc = measures::concurrence(&rho).unwrap().value;
            assert!((conc - 2.0 * lambda / 9.0).abs() < 1e-10);
        }
    }

    #[test]
    fn qubit_qutrit_ansatz_negativity() {
        let full = qubit_qutrit_ansatz(0.25, 1.0).unwrap();
        let neg = measures::negativity(&full, 0).unwrap();
        assert!((neg - 0.125).abs() < 1e-10);

        let boundary = qubit_qutrit_ansatz(0.125, 1.0).unwrap();
        assert!(measures::negativity(&boundary, 0).unwrap() < 1e-10);

        let dephased = qubit_qutrit_ansatz(0.25, 0.0).unwrap();
        assert!(measures::negativity(&dephased, 0).unwrap() < 1e-12);
    }

    #[test]
    fn photon_xstate_cases() {
        let bell = photon_xstate(0.0, 0.5, 0.5, 0.0, cr(0.5)).unwrap();
        assert!((measures::concurrence(&bell).unwrap().value - 1.0).abs() < 1e-10);

        let no_coh = photon_xstate(0.3, 0.3, 0.3, 0.1, ZERO).unwrap();
        assert!(measures::concurrence(&no_coh).unwrap().value < 1e-12);

        // closed form (2|z| − 2√(p00 p11))/P against the generic computation
        let p = (0.3, 0.25, 0.35, 0.1);
        let z = c(0.2, 0.1);
        let rho = photon_xstate(p.0, p.1, p.2, p.3, z).unwrap();
        let total = p.0 + p.1 + p.2 + p.3;
        let closed = ((2.0 * z.norm() - 2.0 * (p.0 * p.3).sqrt()) / total).max(0.0);
        let generic = measures::concurrence(&rho).unwrap().value;
        assert!((closed - generic).abs() <= 1e-10);
    }

    #[test]
    fn factories_reject_bad_parameters() {
        assert!(ghz_state(1).is_err());
        assert!(w_state(1).is_err());
        assert!(werner3(1.5).is_err());
        assert!(isotropic_state(1, 0.5).is_err());
        assert!(caves_milburn_state(-0.1).is_err());
        assert!(qubit_qutrit_ansatz(0.3, 0.5).is_err());
        assert!(x_state(&XStateParams {
            a: 0.5,
            b: 0.25,
            c: 0.25,
            d: 0.0,
            w: cr(0.4),
            z: ZERO,
        })
        .is_err());
        assert!(photon_xstate(0.5, 0.1, 0.1, 0.3, cr(0.3)).is_err());
    }

    #[test]
    fn product_state_partial_trace_factorizes() {
        let mut r = rng(43);
        let a = crate::random::random_mixed_state(&mut r, &DimList::single(2));
        let b = crate::random::random_mixed_state(&mut r, &DimList::single(3));
        let joint = a.mat().kron(b.mat());
        let dims = DimList::new(vec![2, 3]).unwrap();
        let red = partial_trace(&joint, &dims, &[0]).unwrap();
        assert!(red.max_abs_diff(a.mat()) <= 1e-12);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let mut r = rng(47);
        let rho = crate::random::random_mixed_state(&mut r, &DimList::new(vec![2, 3]).unwrap());
        let text = rho.to_text();
        let back = DensityMatrix::from_text(&text).unwrap();
        assert_eq!(rho.mat(), back.mat());
        assert_eq!(rho.dims(), back.dims());
    }
}

//! Seeded random generators for states, unitaries and channel parameters.
//!
//! These back the property checks in the verification suite, so they live in
//! the library proper rather than test code. Everything is driven by an
//! explicit `StdRng` so runs are reproducible.

use crate::states::{DensityMatrix, XStateParams};
use crate::tensor::{c, cr, ComplexMatrix, DimList};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn gaussian(r: &mut StdRng) -> f64 {
    // Box-Muller; plenty for test-state generation
    let u1: f64 = r.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = r.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn random_complex(r: &mut StdRng) -> Complex64 {
    c(gaussian(r), gaussian(r))
}

/// Haar-distributed unit vector of dimension `d`.
pub fn random_unit_vector(r: &mut StdRng, d: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| random_complex(r)).collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / cr(norm)).collect();
        }
    }
}

pub fn random_hermitian(r: &mut StdRng, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| random_complex(r));
    g.hermitize()
}

/// Haar-random unitary via Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(r: &mut StdRng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| random_complex(r)).collect();
        for u in &cols {
            let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= overlap * ui;
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / cr(norm)).collect());
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Haar-random pure density matrix on the given space.
pub fn random_pure_state(r: &mut StdRng, dims: &DimList) -> DensityMatrix {
    let v = random_unit_vector(r, dims.total());
    DensityMatrix::pure(&v, dims.clone()).expect("unit vector gives a valid state")
}

/// Full-rank random mixed state: a normalized G G† with Gaussian G.
pub fn random_mixed_state(r: &mut StdRng, dims: &DimList) -> DensityMatrix {
    let n = dims.total();
    let g = ComplexMatrix::from_fn(n, n, |_, _| random_complex(r));
    let gg = g.matmul(&g.dagger());
    let tr = gg.trace().re;
    DensityMatrix::from_parts(gg.scale_re(1.0 / tr), dims.clone())
        .expect("G G† / tr is a valid state")
}

/// Random valid X-state parameters (two-qubit, PSD by construction).
pub fn random_x_state(r: &mut StdRng) -> XStateParams {
    loop {
        let raw: Vec<f64> = (0..4).map(|_| r.gen::<f64>()).collect();
        let sum: f64 = raw.iter().sum();
        let (a, b, cc, d) = (raw[0] / sum, raw[1] / sum, raw[2] / sum, raw[3] / sum);
        let wmag = r.gen::<f64>() * (a * d).sqrt();
        let zmag = r.gen::<f64>() * (b * cc).sqrt();
        let wph = r.gen::<f64>() * std::f64::consts::TAU;
        let zph = r.gen::<f64>() * std::f64::consts::TAU;
        let p = XStateParams {
            a,
            b,
            c: cc,
            d,
            w: Complex64::from_polar(wmag, wph),
            z: Complex64::from_polar(zmag, zph),
        };
        if p.validate().is_ok() {
            return p;
        }
    }
}

/// Random diagonal (classical) state on n qubits.
pub fn random_diagonal_state(r: &mut StdRng, n_qubits: usize) -> DensityMatrix {
    let n = 1usize << n_qubits;
    let raw: Vec<f64> = (0..n).map(|_| r.gen::<f64>()).collect();
    let sum: f64 = raw.iter().sum();
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, &p) in raw.iter().enumerate() {
        m.set(i, i, cr(p / sum));
    }
    DensityMatrix::from_parts(m, DimList::qubits(n_qubits)).unwrap()
}

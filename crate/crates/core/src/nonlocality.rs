//! Bell-operator construction (CHSH, the five tripartite two-setting
//! correlation classes, Svetlichny), expectation evaluation and
//! measurement-angle optimization.
//!
//! Dichotomic observables are Bloch vectors n̂·σ⃗, so M² = I by construction.
//! Expectations are evaluated two ways that must agree: an explicit operator
//! trace (used by the `*_value` functions) and a real contraction against
//! the state's Pauli correlation tensor (used by the optimizer).

use crate::states::DensityMatrix;
use crate::tensor::{sigma_x, sigma_y, sigma_z, ComplexMatrix};
use crate::{Error, Result};

/// Bloch vector of a ±1-spectrum observable.
pub type Bloch = [f64; 3];

/// One party's measurement pair (M, M′).
#[derive(Debug, Clone, Copy)]
pub struct PartyPair {
    pub m: Bloch,
    pub m_prime: Bloch,
}

/// Per-party dichotomic observable pairs.
#[derive(Debug, Clone)]
pub struct MeasurementSettings {
    pub parties: Vec<PartyPair>,
}

pub fn observable(n: Bloch) -> ComplexMatrix {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let (x, y, z) = (n[0] / norm, n[1] / norm, n[2] / norm);
    &(&sigma_x().scale_re(x) + &sigma_y().scale_re(y)) + &sigma_z().scale_re(z)
}

fn zx(theta: f64) -> Bloch {
    // cos θ σz − sin θ σx
    [-theta.sin(), 0.0, theta.cos()]
}

fn zx_prime(theta: f64) -> Bloch {
    // sin θ σz + cos θ σx
    [theta.cos(), 0.0, theta.sin()]
}

fn xy(phi: f64) -> Bloch {
    [phi.cos(), phi.sin(), 0.0]
}

/// The printed three-party setting: A measures (σz, σx), parties B and C
/// measure (cos θ σz − sin θ σx, sin θ σz + cos θ σx) at their angles.
pub fn tripartite_settings(theta_b: f64, theta_c: f64) -> MeasurementSettings {
    MeasurementSettings {
        parties: vec![
            PartyPair {
                m: [0.0, 0.0, 1.0],
                m_prime: [1.0, 0.0, 0.0],
            },
            PartyPair {
                m: zx(theta_b),
                m_prime: zx_prime(theta_b),
            },
            PartyPair {
                m: zx(theta_c),
                m_prime: zx_prime(theta_c),
            },
        ],
    }
}

/// Two-party setting in the z–x plane with one angle per observable.
pub fn chsh_settings(a: f64, a_prime: f64, b: f64, b_prime: f64) -> MeasurementSettings {
    MeasurementSettings {
        parties: vec![
            PartyPair {
                m: zx(a),
                m_prime: zx(a_prime),
            },
            PartyPair {
                m: zx(b),
                m_prime: zx(b_prime),
            },
        ],
    }
}

/// Settings saturating CHSH on the singlet: A = (σz, σx),
/// B = (−(σz+σx)/√2, (σx−σz)/√2).
pub fn chsh_singlet_settings() -> MeasurementSettings {
    let s = 1.0 / 2f64.sqrt();
    MeasurementSettings {
        parties: vec![
            PartyPair {
                m: [0.0, 0.0, 1.0],
                m_prime: [1.0, 0.0, 0.0],
            },
            PartyPair {
                m: [-s, 0.0, -s],
                m_prime: [s, 0.0, -s],
            },
        ],
    }
}

/// Equatorial settings maximizing the Svetlichny expectation on a GHZ state
/// (every pair orthogonal in the x–y plane, total azimuth −π/4).
pub fn svetlichny_ghz_settings() -> MeasurementSettings {
    let pairs = [0.0, 0.0, -std::f64::consts::FRAC_PI_4];
    MeasurementSettings {
        parties: pairs
            .iter()
            .map(|&phi| PartyPair {
                m: xy(phi),
                m_prime: xy(phi + std::f64::consts::FRAC_PI_2),
            })
            .collect(),
    }
}

/// Equatorial settings maximizing the fifth correlation class on a GHZ
/// state (total azimuth π/2).
pub fn wwzb_ghz_settings() -> MeasurementSettings {
    let pairs = [0.0, 0.0, std::f64::consts::FRAC_PI_2];
    MeasurementSettings {
        parties: pairs
            .iter()
            .map(|&phi| PartyPair {
                m: xy(phi),
                m_prime: xy(phi + std::f64::consts::FRAC_PI_2),
            })
            .collect(),
    }
}

/// Bell operator families in scope. `P1`…`P5` are the five tripartite
/// two-setting correlation classes with local bound 2; `Svetlichny` has
/// hybrid bound 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellFamily {
    Chsh,
    P1,
    P2,
    P3,
    P4,
    P5,
    Svetlichny,
}

impl BellFamily {
    pub fn parties(&self) -> usize {
        match self {
            BellFamily::Chsh => 2,
            _ => 3,
        }
    }

    /// Local (or hybrid, for Svetlichny) classical bound.
    pub fn bound(&self) -> f64 {
        match self {
            BellFamily::Svetlichny => 4.0,
            _ => 2.0,
        }
    }

    /// Largest value quantum mechanics allows.
    pub fn quantum_max(&self) -> f64 {
        match self {
            BellFamily::Chsh => 2.0 * 2f64.sqrt(),
            BellFamily::Svetlichny => 4.0 * 2f64.sqrt(),
            BellFamily::P1 => 2.0,
            _ => 4.0,
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            BellFamily::Chsh => "CHSH",
            BellFamily::P1 => "P1",
            BellFamily::P2 => "P2",
            BellFamily::P3 => "P3",
            BellFamily::P4 => "P4",
            BellFamily::P5 => "P5",
            BellFamily::Svetlichny => "Svetlichny",
        }
    }

    /// Terms as (coefficient, per-party prime choice); only the first
    /// `parties()` entries of the choice array are meaningful.
    fn terms(&self) -> &'static [(f64, [bool; 3])] {
        match self {
            // M_A M_B + M_A M_B′ + M_A′ M_B − M_A′ M_B′
            BellFamily::Chsh => &[
                (1.0, [false, false, false]),
                (1.0, [false, true, false]),
                (1.0, [true, false, false]),
                (-1.0, [true, true, false]),
            ],
            BellFamily::P1 => &[(2.0, [false, false, false])],
            BellFamily::P2 => &[
                (-0.5, [false, false, false]),
                (0.5, [false, false, true]),
                (0.5, [false, true, false]),
                (0.5, [false, true, true]),
                (0.5, [true, false, false]),
                (0.5, [true, false, true]),
                (0.5, [true, true, false]),
                (0.5, [true, true, true]),
            ],
            // [M_A(M_B + M_B′) + M_A′(M_B − M_B′)] M_C
            BellFamily::P3 => &[
                (1.0, [false, false, false]),
                (1.0, [false, true, false]),
                (1.0, [true, false, false]),
                (-1.0, [true, true, false]),
            ],
            // M_A M_B (M_C + M_C′) − M_A′ M_B′ (M_C − M_C′)
            BellFamily::P4 => &[
                (1.0, [false, false, false]),
                (1.0, [false, false, true]),
                (-1.0, [true, true, false]),
                (1.0, [true, true, true]),
            ],
            BellFamily::P5 => &[
                (1.0, [false, false, true]),
                (1.0, [false, true, false]),
                (1.0, [true, false, false]),
                (-1.0, [true, true, true]),
            ],
            BellFamily::Svetlichny => &[
                (1.0, [false, false, false]),
                (1.0, [false, false, true]),
                (1.0, [false, true, false]),
                (1.0, [true, false, false]),
                (-1.0, [true, true, true]),
                (-1.0, [true, true, false]),
                (-1.0, [true, false, true]),
                (-1.0, [false, true, true]),
            ],
        }
    }
}

/// Expectation, bound and verdict for one operator on one state.
#[derive(Debug, Clone)]
pub struct BellReport {
    pub operator_id: &'static str,
    pub expectation: f64,
    pub bound: f64,
    pub violated: bool,
}

impl BellReport {
    fn new(family: BellFamily, expectation: f64) -> Self {
        let bound = family.bound();
        Self {
            operator_id: family.id(),
            expectation,
            bound,
            violated: expectation.abs() > bound + 1e-12,
        }
    }
}

/// The explicit operator matrix of a family at the given settings.
pub fn bell_operator(family: BellFamily, settings: &MeasurementSettings) -> Result<ComplexMatrix> {
    let p = family.parties();
    if settings.parties.len() != p {
        return Err(Error::DimMismatch(format!(
            "{} needs {} parties, settings provide {}",
            family.id(),
            p,
            settings.parties.len()
        )));
    }
    let dim = 1usize << p;
    let mut op = ComplexMatrix::zeros(dim, dim);
    for &(coeff, choice) in family.terms() {
        let factors: Vec<ComplexMatrix> = (0..p)
            .map(|k| {
                let pair = &settings.parties[k];
                observable(if choice[k] { pair.m_prime } else { pair.m })
            })
            .collect();
        op = &op + &crate::tensor::kron_all(&factors).scale_re(coeff);
    }
    Ok(op)
}

fn expectation_of(family: BellFamily, rho: &DensityMatrix, settings: &MeasurementSettings) -> Result<f64> {
    let dim = 1usize << family.parties();
    if rho.dim() != dim {
        return Err(Error::DimMismatch(format!(
            "{} expects a dim-{} state, got dim {}",
            family.id(),
            dim,
            rho.dim()
        )));
    }
    let op = bell_operator(family, settings)?;
    let tr = rho.mat().matmul(&op).trace();
    if tr.im.abs() > 1e-10 {
        return Err(Error::Numerical(format!(
            "Bell expectation has imaginary part {:.3e}",
            tr.im
        )));
    }
    Ok(tr.re)
}

pub fn chsh_value(rho: &DensityMatrix, settings: &MeasurementSettings) -> Result<BellReport> {
    Ok(BellReport::new(
        BellFamily::Chsh,
        expectation_of(BellFamily::Chsh, rho, settings)?,
    ))
}

pub fn svetlichny_value(rho: &DensityMatrix, settings: &MeasurementSettings) -> Result<BellReport> {
    Ok(BellReport::new(
        BellFamily::Svetlichny,
        expectation_of(BellFamily::Svetlichny, rho, settings)?,
    ))
}

/// The five correlation-class expectations at the supplied settings; a
/// local classical verdict requires all five within bounds.
pub fn wwzb_values(rho: &DensityMatrix, settings: &MeasurementSettings) -> Result<Vec<BellReport>> {
    [
        BellFamily::P1,
        BellFamily::P2,
        BellFamily::P3,
        BellFamily::P4,
        BellFamily::P5,
    ]
    .iter()
    .map(|&f| Ok(BellReport::new(f, expectation_of(f, rho, settings)?)))
    .collect()
}

/// Symmetry closure over a class: the largest |expectation| across sign
/// flips of every observable, swaps of (M, M′) within each party, and all
/// party permutations of the settings.
pub fn wwzb_values_exhaustive(
    rho: &DensityMatrix,
    settings: &MeasurementSettings,
) -> Result<Vec<BellReport>> {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut out = Vec::new();
    for family in [
        BellFamily::P1,
        BellFamily::P2,
        BellFamily::P3,
        BellFamily::P4,
        BellFamily::P5,
    ] {
        let mut best = 0.0f64;
        for perm in &perms {
            for swap_mask in 0..8u32 {
                for mask in 0..64u32 {
                    let parties: Vec<PartyPair> = (0..3)
                        .map(|k| {
                            let src = settings.parties[perm[k]];
                            let (m0, m1) = if swap_mask & (1 << k) != 0 {
                                (src.m_prime, src.m)
                            } else {
                                (src.m, src.m_prime)
                            };
                            let flip = |v: Bloch, on: bool| {
                                if on {
                                    [-v[0], -v[1], -v[2]]
                                } else {
                                    v
                                }
                            };
                            PartyPair {
                                m: flip(m0, mask & (1 << (2 * k)) != 0),
                                m_prime: flip(m1, mask & (1 << (2 * k + 1)) != 0),
                            }
                        })
                        .collect();
                    let val =
                        expectation_of(family, rho, &MeasurementSettings { parties })?.abs();
                    if val > best {
                        best = val;
                    }
                }
            }
        }
        out.push(BellReport::new(family, best));
    }
    Ok(out)
}

/// Pauli correlation tensor over the chosen parties (2 or 3 qubits);
/// `t[i][j]` or `t3[i][j][k]` with indices over (x, y, z).
struct CorrelationTensor {
    parties: usize,
    t2: [[f64; 3]; 3],
    t3: [[[f64; 3]; 3]; 3],
}

fn correlation_tensor(rho: &DensityMatrix, parties: usize) -> Result<CorrelationTensor> {
    let paulis = [sigma_x(), sigma_y(), sigma_z()];
    let mut ct = CorrelationTensor {
        parties,
        t2: [[0.0; 3]; 3],
        t3: [[[0.0; 3]; 3]; 3],
    };
    match parties {
        2 => {
            for (i, pi) in paulis.iter().enumerate() {
                for (j, pj) in paulis.iter().enumerate() {
                    let op = pi.kron(pj);
                    ct.t2[i][j] = rho.mat().matmul(&op).trace().re;
                }
            }
        }
        3 => {
            for (i, pi) in paulis.iter().enumerate() {
                for (j, pj) in paulis.iter().enumerate() {
                    let pij = pi.kron(pj);
                    for (k, pk) in paulis.iter().enumerate() {
                        let op = pij.kron(pk);
                        ct.t3[i][j][k] = rho.mat().matmul(&op).trace().re;
                    }
                }
            }
        }
        _ => {
            return Err(Error::InvalidParam(
                "correlation tensor supports 2 or 3 parties".into(),
            ))
        }
    }
    Ok(ct)
}

impl CorrelationTensor {
    fn correlation(&self, vs: &[Bloch]) -> f64 {
        match self.parties {
            2 => {
                let mut acc = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        acc += vs[0][i] * vs[1][j] * self.t2[i][j];
                    }
                }
                acc
            }
            _ => {
                let mut acc = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        for k in 0..3 {
                            acc += vs[0][i] * vs[1][j] * vs[2][k] * self.t3[i][j][k];
                        }
                    }
                }
                acc
            }
        }
    }

    fn value(&self, family: BellFamily, parties: &[PartyPair]) -> f64 {
        let mut acc = 0.0;
        for &(coeff, choice) in family.terms() {
            let vs: Vec<Bloch> = (0..self.parties)
                .map(|k| {
                    if choice[k] {
                        parties[k].m_prime
                    } else {
                        parties[k].m
                    }
                })
                .collect();
            acc += coeff * self.correlation(&vs);
        }
        acc
    }

    /// Effective field of one observable: the value is n̂·u + const, so the
    /// exact best response along this coordinate is n̂ = u/|u|.
    fn effective_field(&self, family: BellFamily, parties: &[PartyPair], who: usize, primed: bool) -> Bloch {
        let mut u = [0.0f64; 3];
        for &(coeff, choice) in family.terms() {
            if choice[who] != primed {
                continue;
            }
            for axis in 0..3 {
                let mut probe: Vec<Bloch> = (0..self.parties)
                    .map(|k| {
                        if choice[k] {
                            parties[k].m_prime
                        } else {
                            parties[k].m
                        }
                    })
                    .collect();
                probe[who] = [0.0; 3];
                probe[who][axis] = 1.0;
                u[axis] += coeff * self.correlation(&probe);
            }
        }
        u
    }
}

fn normalize(v: Bloch) -> Option<Bloch> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n < 1e-14 {
        None
    } else {
        Some([v[0] / n, v[1] / n, v[2] / n])
    }
}

/// Analytic maximal CHSH value 2√(s₁² + s₂²) from the two largest singular
/// values of the correlation matrix; the oracle the optimizer is checked
/// against.
pub fn chsh_max(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimMismatch("chsh_max needs a two-qubit state".into()));
    }
    let ct = correlation_tensor(rho, 2)?;
    let t = ComplexMatrix::from_fn(3, 3, |i, j| crate::tensor::cr(ct.t2[i][j]));
    let tt = t.transpose().matmul(&t);
    let eigs = crate::tensor::eigvals_hermitian(&tt.hermitize())?;
    Ok(2.0 * (eigs[0].max(0.0) + eigs[1].max(0.0)).sqrt())
}

/// Deterministic coarse grid over the z–x and x–y planes followed by
/// cyclic exact best-response refinement of every observable.
///
/// The refined value never decreases between iterations, and it cannot
/// exceed the family's quantum bound because it is a true expectation.
pub fn optimize_angles(
    rho: &DensityMatrix,
    family: BellFamily,
    grid_resolution: usize,
    refinement_iters: usize,
) -> Result<(MeasurementSettings, f64)> {
    if grid_resolution < 8 {
        return Err(Error::InvalidParam("grid resolution must be >= 8".into()));
    }
    let parties = family.parties();
    if rho.dim() != 1usize << parties {
        return Err(Error::DimMismatch(format!(
            "{} expects a dim-{} state",
            family.id(),
            1usize << parties
        )));
    }
    let ct = correlation_tensor(rho, parties)?;

    // party-0 observables enter linearly, so their grid is replaced by the
    // closed-form best response; scan the remaining parties over each plane
    let planes: [fn(f64) -> Bloch; 2] = [|t| [t.sin(), 0.0, t.cos()], |t| [t.cos(), t.sin(), 0.0]];
    let mut starts: Vec<(Vec<PartyPair>, f64)> = Vec::new();
    for plane in planes {
        let mut best: Option<(Vec<PartyPair>, f64)> = None;
        let steps = grid_resolution;
        let angle = |k: usize| std::f64::consts::PI * k as f64 / steps as f64;
        let combos = steps.pow(2 * (parties as u32 - 1));
        for combo in 0..combos {
            let mut digits = combo;
            let mut parties_v: Vec<PartyPair> = vec![PartyPair {
                m: [0.0, 0.0, 1.0],
                m_prime: [1.0, 0.0, 0.0],
            }];
            for _ in 1..parties {
                let th = angle(digits % steps);
                digits /= steps;
                let th_p = angle(digits % steps);
                digits /= steps;
                parties_v.push(PartyPair {
                    m: plane(th),
                    m_prime: plane(th_p),
                });
            }
            // closed-form best response for party 0
            for primed in [false, true] {
                let u = ct.effective_field(family, &parties_v, 0, primed);
                if let Some(n) = normalize(u) {
                    if primed {
                        parties_v[0].m_prime = n;
                    } else {
                        parties_v[0].m = n;
                    }
                }
            }
            let val = ct.value(family, &parties_v).abs();
            if best.as_ref().map_or(true, |(_, b)| val > *b) {
                best = Some((parties_v, val));
            }
        }
        starts.push(best.expect("grid is nonempty"));
    }

    let mut overall: Option<(Vec<PartyPair>, f64)> = None;
    for (mut parties_v, _) in starts {
        let mut current = ct.value(family, &parties_v).abs();
        for _ in 0..refinement_iters {
            let before = current;
            for who in 0..parties {
                for primed in [false, true] {
                    let u = ct.effective_field(family, &parties_v, who, primed);
                    let proposal = match normalize(u) {
                        Some(n) => n,
                        None => continue,
                    };
                    let mut trial = parties_v.clone();
                    if primed {
                        trial[who].m_prime = proposal;
                    } else {
                        trial[who].m = proposal;
                    }
                    let val = ct.value(family, &trial).abs();
                    if val >= current {
                        parties_v = trial;
                        current = val;
                    }
                }
            }
            if current - before < 1e-14 {
                break;
            }
        }
        if overall.as_ref().map_or(true, |(_, b)| current > *b) {
            overall = Some((parties_v, current));
        }
    }
    let (parties_v, value) = overall.expect("at least one start");
    Ok((MeasurementSettings { parties: parties_v }, value))
}

/// |⟨B⟩| − bound at fixed settings; positive while the inequality is
/// violated.
pub fn violation_margin(
    rho: &DensityMatrix,
    family: BellFamily,
    settings: &MeasurementSettings,
) -> Result<f64> {
    Ok(expectation_of(family, rho, settings)?.abs() - family.bound())
}

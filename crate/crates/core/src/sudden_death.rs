//! Trajectory sweeps, finite-death-time detection by bracketing and
//! bisection, revival detection, and closed-form death-time formulas used
//! as reference oracles.

use crate::states::DensityMatrix;
use crate::tolerances::ZERO_THRESHOLD;
use crate::{Error, Result};
use std::fmt::Write as _;

/// A sampled scalar observable along an evolution.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimMismatch(
                "trajectory times and values differ in length".into(),
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParam(
                "trajectory times must be strictly increasing".into(),
            ));
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// CSV with header `t,value`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for (t, v) in self.times.iter().zip(&self.values) {
            let _ = writeln!(out, "{:.16e},{:.16e}", t, v);
        }
        out
    }
}

/// Uniform grid of n points covering [0, t_max].
pub fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && t_max > 0.0);
    (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect()
}

/// Pointwise evaluation of measure ∘ evolver over the grid.
pub fn sweep(
    evolver: impl Fn(f64) -> Result<DensityMatrix>,
    measure: impl Fn(&DensityMatrix) -> Result<f64>,
    grid: &[f64],
) -> Result<Trajectory> {
    if grid.is_empty() {
        return Err(Error::InvalidParam("empty time grid".into()));
    }
    let mut values = Vec::with_capacity(grid.len());
    for &t in grid {
        let rho = evolver(t)
            .map_err(|e| Error::Numerical(format!("evolver failed at t = {t}: {e}")))?;
        values.push(
            measure(&rho)
                .map_err(|e| Error::Numerical(format!("measure failed at t = {t}: {e}")))?,
        );
    }
    Trajectory::new(grid.to_vec(), values)
}

/// How a scalar trajectory crosses zero.
///
/// `Clamped` is for max(0, ·) measures where exact zeros occur and anything
/// at or below the zero threshold counts as dead; `Signed` is for
/// quantities like violation margins that change sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroStyle {
    Clamped,
    Signed,
}

/// Classification of a decay trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum DeathStatus {
    /// The quantity reaches zero at a finite time.
    FiniteDeath,
    /// Positive through t_max with a clean exponential (or flat) tail.
    Asymptotic,
    /// Already zero at t = 0.
    NeverPositive,
    /// Zero intervals followed by recovery.
    Revival,
    /// Positive at t_max but the tail fits no recognized profile.
    Undetermined,
}

/// Death-time search result: status, located root (when finite), the
/// bracketing interval and the tolerance used.
#[derive(Debug, Clone)]
pub struct DeathTimeResult {
    pub status: DeathStatus,
    pub t_death: Option<f64>,
    pub bracket: Option<(f64, f64)>,
    pub tolerance: f64,
}

const SCAN_POINTS: usize = 256;

/// Locates the first time a decaying quantity hits zero.
///
/// A linear 256-point scan over [0, t_max] finds the first zero crossing,
/// the interval around it is densified 4×, and the crossing is bisected to
/// `tol`. Without a crossing the tail is classified: near-linear log-decay
/// (R² > 0.999) or a flat positive floor count as asymptotic, anything
/// else is reported undetermined.
pub fn detect_death_time(
    f: impl Fn(f64) -> Result<f64>,
    t_max: f64,
    tol: f64,
    style: ZeroStyle,
) -> Result<DeathTimeResult> {
    if t_max <= 0.0 || tol <= 0.0 {
        return Err(Error::InvalidParam("t_max and tol must be > 0".into()));
    }
    let threshold = match style {
        ZeroStyle::Clamped => ZERO_THRESHOLD,
        ZeroStyle::Signed => 0.0,
    };
    let eval = |t: f64| -> Result<f64> {
        let v = f(t)?;
        if !v.is_finite() {
            return Err(Error::Numerical(format!("non-finite value {v} at t = {t}")));
        }
        Ok(v)
    };

    let f0 = eval(0.0)?;
    if f0 <= threshold {
        return Ok(DeathTimeResult {
            status: DeathStatus::NeverPositive,
            t_death: Some(0.0),
            bracket: None,
            tolerance: tol,
        });
    }

    let grid = time_grid(t_max, SCAN_POINTS);
    let mut values = Vec::with_capacity(grid.len());
    for &t in &grid {
        values.push(eval(t)?);
    }

    let mut bracket: Option<(f64, f64)> = None;
    for k in 1..grid.len() {
        if values[k - 1] > threshold && values[k] <= threshold {
            // densify 4× inside the candidate interval to pin the first crossing
            let (mut lo, mut hi) = (grid[k - 1], grid[k]);
            let step = (hi - lo) / 4.0;
            for j in 0..4 {
                let a = lo + step * j as f64;
                let b = lo + step * (j + 1) as f64;
                if eval(a)? > threshold && eval(b)? <= threshold {
                    lo = a;
                    hi = b;
                    break;
                }
            }
            bracket = Some((lo, hi));
            break;
        }
    }

    if let Some((mut lo, mut hi)) = bracket {
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if eval(mid)? > threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Ok(DeathTimeResult {
            status: DeathStatus::FiniteDeath,
            t_death: Some(0.5 * (lo + hi)),
            bracket: Some((lo, hi)),
            tolerance: tol,
        });
    }

    // no crossing by t_max: classify the tail over the last quarter
    let tail_start = 3 * grid.len() / 4;
    let tail_t = &grid[tail_start..];
    let tail_v = &values[tail_start..];
    let spread = {
        let max = tail_v.iter().cloned().fold(f64::MIN, f64::max);
        let min = tail_v.iter().cloned().fold(f64::MAX, f64::min);
        let mean = tail_v.iter().sum::<f64>() / tail_v.len() as f64;
        if mean.abs() < 1e-300 {
            f64::INFINITY
        } else {
            (max - min) / mean.abs()
        }
    };
    let positive_floor = spread < 1e-3;
    let log_linear = if tail_v.iter().all(|&v| v > 0.0) {
        r_squared_of_log_fit(tail_t, tail_v) > 0.999
    } else {
        false
    };
    let status = if positive_floor || log_linear {
        DeathStatus::Asymptotic
    } else {
        DeathStatus::Undetermined
    };
    Ok(DeathTimeResult {
        status,
        t_death: None,
        bracket: None,
        tolerance: tol,
    })
}

fn r_squared_of_log_fit(ts: &[f64], vs: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let ys: Vec<f64> = vs.iter().map(|&v| v.ln()).collect();
    let mean_t = ts.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut stt = 0.0;
    let mut sty = 0.0;
    let mut syy = 0.0;
    for (&t, &y) in ts.iter().zip(&ys) {
        stt += (t - mean_t) * (t - mean_t);
        sty += (t - mean_t) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if syy < 1e-24 {
        return 1.0; // constant log = perfectly flat decay
    }
    (sty * sty) / (stt * syy)
}

/// Maximal intervals where the sampled values sit at zero before recovering.
/// Each entry is (death sample time, rebirth sample time); a trailing dead
/// interval with no rebirth is reported with rebirth = None by
/// [`detect_revivals_with_tail`].
pub fn detect_revivals(traj: &Trajectory) -> Vec<(f64, f64)> {
    detect_revivals_with_tail(traj)
        .into_iter()
        .filter_map(|(d, r)| r.map(|r| (d, r)))
        .collect()
}

pub fn detect_revivals_with_tail(traj: &Trajectory) -> Vec<(f64, Option<f64>)> {
    let mut out = Vec::new();
    let mut dead_since: Option<f64> = None;
    for (&t, &v) in traj.times().iter().zip(traj.values()) {
        if v <= ZERO_THRESHOLD {
            if dead_since.is_none() {
                dead_since = Some(t);
            }
        } else if let Some(d) = dead_since.take() {
            out.push((d, Some(t)));
        }
    }
    if let Some(d) = dead_since {
        out.push((d, None));
    }
    out
}

/// Closed-form death times printed for the scenarios in scope; reference
/// oracles, not simulations.
#[derive(Debug, Clone, Copy)]
pub enum ClosedFormCase {
    /// Depolarizing entanglement breaking: t = τ ln 3.
    Depolarizing { tau: f64 },
    /// Two-qubit vacuum amplitude damping of the a = 1 mixed state, with
    /// per-qubit amplitude factor γ = e^{−Γt}: t = ln[(2+√2)/2]/(2Γ).
    VacuumDamping { rate: f64 },
    /// Same expression under the published γ² = e^{−Γt} convention:
    /// t = ln[(2+√2)/2]/Γ.
    VacuumDampingHalfRate { rate: f64 },
    /// Collective dephasing of an X-state: t = ln(|w|/√(bc))/(2Γ).
    CollectiveDephasing { rate: f64, w: f64, b: f64, c: f64 },
    /// Qubit-qutrit dephasing: the ansatz condition γ(t) = 1/(8x) with
    /// γ = e^{−Γt} gives t = ln(8x)/Γ. (The published "8x/Γ" does not solve
    /// its own condition and is treated as a typo.)
    QubitQutrit { rate: f64, x: f64 },
    /// Three-qubit W-state loss of two-setting correlation violation:
    /// t = ln 2/(2Γ).
    WStateBell { rate: f64 },
    /// GHZ Svetlichny violation loss: t = ln(√2)/(3Γ).
    SvetlichnyGhz { rate: f64 },
    /// GHZ loss of the full two-setting correlation set: t = ln 2/(3Γ).
    WwzbGhz { rate: f64 },
    /// Level-k death of the d⊗d isotropic state under depolarizing noise:
    /// t = ln[(d²−1)/(dk−d−1)]/(2dΓ).
    GConcurrenceLevel { d: usize, k: usize, rate: f64 },
}

pub fn closed_form_time(case: ClosedFormCase) -> Result<f64> {
    match case {
        ClosedFormCase::Depolarizing { tau } => {
            if tau <= 0.0 {
                return Err(Error::InvalidParam("τ must be > 0".into()));
            }
            Ok(tau * 3f64.ln())
        }
        ClosedFormCase::VacuumDamping { rate } => {
            if rate <= 0.0 {
                return Err(Error::InvalidParam("rate must be > 0".into()));
            }
            Ok(((2.0 + 2f64.sqrt()) / 2.0).ln() / (2.0 * rate))
        }
        ClosedFormCase::VacuumDampingHalfRate { rate } => {
            if rate <= 0.0 {
                return Err(Error::InvalidParam("rate must be > 0".into()));
            }
            Ok(((2.0 + 2f64.sqrt()) / 2.0).ln() / rate)
        }
        ClosedFormCase::CollectiveDephasing { rate, w, b, c } => {
            if rate <= 0.0 || b <= 0.0 || c <= 0.0 {
                return Err(Error::InvalidParam("rate, b, c must be > 0".into()));
            }
            let ratio = w.abs() / (b * c).sqrt();
            if ratio <= 1.0 {
                return Err(Error::InvalidParam(
                    "death time needs |w| > √(bc)".into(),
                ));
            }
            Ok(ratio.ln() / (2.0 * rate))
        }
        ClosedFormCase::QubitQutrit { rate, x } => {
            if rate <= 0.0 {
                return Err(Error::InvalidParam("rate must be > 0".into()));
            }
            if !(x > 0.125 && x <= 0.25) {
                return Err(Error::InvalidParam(
                    "finite death needs 1/8 < x <= 1/4".into(),
                ));
            }
            Ok((8.0 * x).ln() / rate)
        }
        ClosedFormCase::WStateBell { rate } => {
            if rate <= 0.0 {
                return Err(Error::InvalidParam("rate must be > 0".into()));
            }
            Ok(2f64.ln() / (2.0 * rate))
        }
        ClosedFormCase::SvetlichnyGhz { rate } => {
            if rate <= 0.0 {
                return Err(Error::InvalidParam("rate must be > 0".into()));
            }
            Ok(2f64.sqrt().ln() / (3.0 * rate))
        }
        ClosedFormCase::WwzbGhz { rate } => {
            if rate <= 0.0 {
                return Err(Error::InvalidParam("rate must be > 0".into()));
            }
            Ok(2f64.ln() / (3.0 * rate))
        }
        ClosedFormCase::GConcurrenceLevel { d, k, rate } => {
            if rate <= 0.0 {
                return Err(Error::InvalidParam("rate must be > 0".into()));
            }
            if d < 2 || k < 2 || k > d {
                return Err(Error::InvalidParam("level formula needs 2 <= k <= d".into()));
            }
            let df = d as f64;
            let kf = k as f64;
            let denom = df * kf - df - 1.0;
            if denom <= 0.0 {
                return Err(Error::InvalidParam("dk − d − 1 must be > 0".into()));
            }
            Ok(((df * df - 1.0) / denom).ln() / (2.0 * df * rate))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{dephasing_qubit, multi_local_uniform};
    use crate::measures;
    use crate::states::{bell_state, Bell};

    #[test]
    fn sweep_constant_and_exponential() {
        let phi = bell_state(Bell::PhiPlus);
        let constant = sweep(
            |_| Ok(phi.clone()),
            |rho| Ok(measures::purity(rho)),
            &time_grid(2.0, 16),
        )
        .unwrap();
        assert!(constant.values().iter().all(|&v| (v - 1.0).abs() < 1e-12));

        // dephasing Bell pair: concurrence is e^{−2Γt}
        let rate = 1.0;
        let traj = sweep(
            |t| {
                let gamma = (-rate * t).exp();
                multi_local_uniform(&dephasing_qubit(gamma)?, 2)?.apply(&phi)
            },
            |rho| Ok(measures::concurrence(rho)?.value),
            &time_grid(3.0, 64),
        )
        .unwrap();
        for (&t, &v) in traj.times().iter().zip(traj.values()) {
            assert!((v - (-2.0 * rate * t).exp()).abs() <= 1e-10);
        }
    }

    #[test]
    fn detect_analytic_root() {
        let f = |t: f64| Ok(((-t).exp() - 0.5).max(0.0));
        let res = detect_death_time(f, 5.0, 1e-10, ZeroStyle::Clamped).unwrap();
        assert_eq!(res.status, DeathStatus::FiniteDeath);
        assert!((res.t_death.unwrap() - 2f64.ln()).abs() <= 1e-8);
        let (lo, hi) = res.bracket.unwrap();
        assert!(hi - lo <= 1e-10);
    }

    #[test]
    fn detect_asymptotic_exponential() {
        let res = detect_death_time(|t| Ok((-t).exp()), 5.0, 1e-8, ZeroStyle::Clamped).unwrap();
        assert_eq!(res.status, DeathStatus::Asymptotic);
        assert!(res.t_death.is_none());
    }

    #[test]
    fn detect_positive_floor() {
        let res = detect_death_time(
            |t| Ok(0.3 + (-t).exp() * 1e-6),
            50.0,
            1e-8,
            ZeroStyle::Clamped,
        )
        .unwrap();
        assert_eq!(res.status, DeathStatus::Asymptotic);
    }

    #[test]
    fn detect_never_positive() {
        let res = detect_death_time(|_| Ok(0.0), 5.0, 1e-8, ZeroStyle::Clamped).unwrap();
        assert_eq!(res.status, DeathStatus::NeverPositive);
    }

    #[test]
    fn detect_rejects_non_finite() {
        let res = detect_death_time(
            |t| Ok(if t > 1.0 { f64::NAN } else { 1.0 }),
            5.0,
            1e-8,
            ZeroStyle::Clamped,
        );
        assert!(res.is_err());
    }

    #[test]
    fn signed_margin_crossing() {
        // margin 3e^{−t} − 2 crosses zero at ln(3/2)
        let res = detect_death_time(
            |t| Ok(3.0 * (-t).exp() - 2.0),
            5.0,
            1e-10,
            ZeroStyle::Signed,
        )
        .unwrap();
        assert_eq!(res.status, DeathStatus::FiniteDeath);
        assert!((res.t_death.unwrap() - 1.5f64.ln()).abs() <= 1e-8);
    }

    #[test]
    fn revivals_on_oscillating_trajectory() {
        let grid = time_grid(10.0, 512);
        let values: Vec<f64> = grid.iter().map(|&t| (t.cos()).max(0.0)).collect();
        let traj = Trajectory::new(grid, values).unwrap();
        let revivals = detect_revivals(&traj);
        assert!(!revivals.is_empty());
        // first dead interval spans (π/2, 3π/2)
        let (death, rebirth) = revivals[0];
        assert!((death - std::f64::consts::FRAC_PI_2).abs() < 0.1);
        assert!((rebirth - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 0.1);

        // first revival's death point agrees with detect_death_time within
        // grid spacing
        let det = detect_death_time(
            |t| Ok((t.cos()).max(0.0)),
            10.0,
            1e-9,
            ZeroStyle::Clamped,
        )
        .unwrap();
        let spacing = 10.0 / 511.0;
        assert!((det.t_death.unwrap() - death).abs() <= spacing);

        let monotone = Trajectory::new(time_grid(5.0, 64), time_grid(5.0, 64).iter().map(|t| (-t).exp()).collect()).unwrap();
        assert!(detect_revivals(&monotone).is_empty());

        let all_zero = Trajectory::new(time_grid(5.0, 64), vec![0.0; 64]).unwrap();
        let tails = detect_revivals_with_tail(&all_zero);
        assert_eq!(tails.len(), 1);
        assert_eq!(tails[0], (0.0, None));
    }

    #[test]
    fn closed_forms_match_quoted_values() {
        let t = closed_form_time(ClosedFormCase::Depolarizing { tau: 1.0 }).unwrap();
        assert!((t - 1.0986122886681098).abs() < 1e-12);

        let t = closed_form_time(ClosedFormCase::WwzbGhz { rate: 1.0 }).unwrap();
        assert!((t - 0.23104906018664842).abs() < 1e-12);

        let t3s = closed_form_time(ClosedFormCase::SvetlichnyGhz { rate: 1.0 }).unwrap();
        // ln √2 = ½ ln 2, so the Svetlichny time is half the full-set time
        assert!((t3s - t / 2.0).abs() < 1e-15);

        let tw = closed_form_time(ClosedFormCase::WStateBell { rate: 2.0 }).unwrap();
        assert!((tw - 2f64.ln() / 4.0).abs() < 1e-15);

        // the two damping conventions differ by exactly a factor 2
        let a = closed_form_time(ClosedFormCase::VacuumDamping { rate: 1.0 }).unwrap();
        let b = closed_form_time(ClosedFormCase::VacuumDampingHalfRate { rate: 1.0 }).unwrap();
        assert!((2.0 * a - b).abs() < 1e-15);
    }

    #[test]
    fn closed_form_domain_errors() {
        assert!(closed_form_time(ClosedFormCase::CollectiveDephasing {
            rate: 1.0,
            w: 0.2,
            b: 0.25,
            c: 0.25,
        })
        .is_err());
        assert!(closed_form_time(ClosedFormCase::QubitQutrit { rate: 1.0, x: 0.1 }).is_err());
        assert!(closed_form_time(ClosedFormCase::GConcurrenceLevel {
            d: 3,
            k: 1,
            rate: 1.0
        })
        .is_err());
        // d=3, k=2: dk−d−1 = 2 > 0
        let t = closed_form_time(ClosedFormCase::GConcurrenceLevel {
            d: 3,
            k: 2,
            rate: 1.0,
        })
        .unwrap();
        assert!((t - (8f64 / 2.0).ln() / 6.0).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip_precision() {
        let traj = Trajectory::new(vec![0.0, 0.1, 0.2], vec![1.0 / 3.0, 2.0 / 7.0, 1e-17]).unwrap();
        let csv = traj.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,value");
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        let v: f64 = first[1].parse().unwrap();
        assert_eq!(v, 1.0 / 3.0);
    }
}

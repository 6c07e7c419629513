//! Named reproduction presets, one per published result in scope.

use crate::scenario::{
    BellSpec, DetectParams, MeasureSpec, Mode, NoiseSpec, OutputFormat, OutputParams, ScanParams,
    Scenario, StateSpec, SweepParams,
};
use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};
use suddenlab_core::states::Bell;

pub const PRESET_NAMES: [&str; 16] = [
    "diosi",
    "ye04",
    "global-dephasing",
    "nonadditive-lambda",
    "qubit-qutrit",
    "caves-milburn",
    "isotropic-d3",
    "isotropic-d4",
    "werner-adc-critical",
    "thermal-jj04",
    "double-jc",
    "bnsd-w",
    "bnsd-ghz",
    "adh07-psi1",
    "adh07-psi2",
    "lcd07",
];

fn base(name: &str, state: StateSpec, noise: NoiseSpec, t_max: f64) -> Scenario {
    Scenario {
        name: name.into(),
        mode: Mode::Sweep,
        state,
        noise,
        sweep: SweepParams { t_max, points: 256 },
        detect: DetectParams {
            measures: vec![MeasureSpec::Concurrence],
            bells: vec![],
            tolerance: 1e-9,
        },
        output: OutputParams {
            dir: None,
            format: OutputFormat::Csv,
        },
        scan: None,
    }
}

pub fn preset(name: &str) -> Option<Scenario> {
    let s = match name {
        // Depolarizing entanglement breaking located on the Choi state's
        // negativity; death at τ ln 3.
        "diosi" => {
            let mut s = base(
                "diosi",
                StateSpec::Bell {
                    which: Bell::PhiPlus,
                },
                NoiseSpec::DepolarizingOneSide { tau: 1.0 },
                2.5,
            );
            s.detect.measures = vec![MeasureSpec::Negativity { party: 0 }];
            s
        }
        // Vacuum-noise amplitude damping of the mixed two-qubit state with
        // unit excited-excited weight; death at ln[(2+√2)/2]/(2Γ).
        "ye04" => base(
            "ye04",
            StateSpec::XState {
                a: 0.0,
                b: 1.0 / 3.0,
                c: 1.0 / 3.0,
                d: 1.0 / 3.0,
                w: (0.0, 0.0),
                z: (1.0 / 3.0, 0.0),
            },
            NoiseSpec::DampingMultiLocal { rate: 1.0 },
            3.0,
        ),
        // Shared dephasing field: the outer X-state coherence decays as
        // e^{−2Γt} while the inner one survives; death at ln(|w|/√(bc))/(2Γ).
        // The populations keep the published w : √(bc) ratio 1.6 inside the
        // positivity region (|w| ≤ √(ad)).
        "global-dephasing" => base(
            "global-dephasing",
            StateSpec::XState {
                a: 0.375,
                b: 0.125,
                c: 0.125,
                d: 0.375,
                w: (0.2, 0.0),
                z: (0.0, 0.0),
            },
            NoiseSpec::CollectiveDephasing { rate: 1.0 },
            2.0,
        ),
        // Weak dephasing and weak damping acting together on the λ-state
        // (diagonal (0,4,4,1)/9 ground-first, inner coherence λ/9 = 1/9):
        // each noise alone decoheres only asymptotically, the combination
        // kills the concurrence at the root of λe^{−Γ₂t} = √(ω₁⁴+8ω₁²).
        "nonadditive-lambda" => base(
            "nonadditive-lambda",
            StateSpec::XState {
                a: 0.0,
                b: 4.0 / 9.0,
                c: 4.0 / 9.0,
                d: 1.0 / 9.0,
                w: (0.0, 0.0),
                z: (1.0 / 9.0, 0.0),
            },
            NoiseSpec::CombinedDephasingDamping {
                dephasing_rate: 1.0,
                damping_rate: 1.0,
            },
            2.0,
        ),
        // Qubit-qutrit dephasing ansatz; negativity max(0, xγ − 1/8) dies at
        // ln(8x)/Γ.
        "qubit-qutrit" => {
            let mut s = base(
                "qubit-qutrit",
                StateSpec::QubitQutrit { x: 0.25 },
                NoiseSpec::AnsatzDephasing { rate: 1.0 },
                2.0,
            );
            s.detect.measures = vec![MeasureSpec::Negativity { party: 0 }];
            s
        }
        // Two-qutrit mixture through a one-sided two-rate damping channel;
        // the separability indicator s(t) = (9F−1)/8 crosses 1/4 in finite
        // time for ε = 1.
        "caves-milburn" => {
            let mut s = base(
                "caves-milburn",
                StateSpec::CavesMilburn { epsilon: 1.0 },
                NoiseSpec::QutritDampingOneSide { a1: 1.0, a2: 1.0 },
                8.0,
            );
            s.detect.measures = vec![MeasureSpec::CmS, MeasureSpec::CmMargin];
            s
        }
        // Isotropic states under two-sided depolarizing: the fidelity
        // crosses 1/d in finite time and the entanglement of formation
        // hits exactly zero there.
        "isotropic-d3" => {
            let mut s = base(
                "isotropic-d3",
                StateSpec::Isotropic { d: 3, fidelity: 1.0 },
                NoiseSpec::DepolarizingBothSides { rate: 1.0 },
                8.0,
            );
            s.detect.measures = vec![
                MeasureSpec::FidelityMaxEntangled,
                MeasureSpec::FidelityMargin,
                MeasureSpec::IsotropicEof,
            ];
            s
        }
        "isotropic-d4" => {
            let mut s = base(
                "isotropic-d4",
                StateSpec::Isotropic { d: 4, fidelity: 1.0 },
                NoiseSpec::DepolarizingBothSides { rate: 1.0 },
                8.0,
            );
            s.detect.measures = vec![
                MeasureSpec::FidelityMaxEntangled,
                MeasureSpec::FidelityMargin,
                MeasureSpec::IsotropicEof,
            ];
            s
        }
        // Scan of the Werner fidelity under multi-local amplitude damping:
        // finite death below F ≈ 0.714, asymptotic decay above.
        "werner-adc-critical" => {
            let mut s = base(
                "werner-adc-critical",
                StateSpec::Werner2 { fidelity: 0.8 },
                NoiseSpec::DampingMultiLocal { rate: 1.0 },
                8.0,
            );
            s.mode = Mode::CriticalFidelity;
            s.scan = Some(ScanParams {
                min: 0.52,
                max: 0.95,
                step: 0.002,
            });
            s
        }
        // Finite-temperature bath: any Γ↑ > 0 turns the singlet's
        // asymptotic decay into a finite death.
        "thermal-jj04" => base(
            "thermal-jj04",
            StateSpec::Bell {
                which: Bell::PhiPlus,
            },
            NoiseSpec::LindbladThermal {
                gamma0: 1.0,
                omega0: 1.0,
                beta: 1.0,
            },
            6.0,
        ),
        // Two one-atom cavities, atoms starting excited-heavy: the
        // atom-atom concurrence dies in finite intervals and revives
        // periodically (the equal-amplitude Bell state is the marginal
        // case whose zeros are isolated points).
        "double-jc" => {
            let mut s = base(
                "double-jc",
                StateSpec::AtomsVacuum {
                    excited_weight: 0.75,
                    truncation: 1,
                },
                NoiseSpec::DoubleJaynesCummings {
                    omega_atom: 1.0,
                    omega_cavity: 1.0,
                    g: 1.0,
                },
                12.0,
            );
            s.detect.measures = vec![
                MeasureSpec::ConcurrencePair(0, 2),
                MeasureSpec::ConcurrencePair(1, 3),
                MeasureSpec::ConcurrencePair(0, 1),
                MeasureSpec::ConcurrencePair(2, 3),
                MeasureSpec::ConcurrencePair(0, 3),
                MeasureSpec::ConcurrencePair(1, 2),
            ];
            s
        }
        // W state under multi-local dephasing: the two-setting correlation
        // violation (class-5 operator at the printed angles) is lost at
        // ln 2/(2Γ).
        "bnsd-w" => {
            let mut s = base(
                "bnsd-w",
                StateSpec::W { n: 3 },
                NoiseSpec::DephasingMultiLocal { rate: 1.0 },
                2.0,
            );
            s.detect.measures = vec![];
            s.detect.bells = vec![BellSpec::P5Printed {
                theta_b: FRAC_PI_6,
                theta_c: FRAC_PI_3,
            }];
            s
        }
        // GHZ under multi-local dephasing at maximal-violation settings:
        // Svetlichny lost at ln(√2)/(3Γ), the full correlation set at
        // ln 2/(3Γ).
        "bnsd-ghz" => {
            let mut s = base(
                "bnsd-ghz",
                StateSpec::Ghz { n: 3 },
                NoiseSpec::DephasingMultiLocal { rate: 1.0 },
                1.0,
            );
            s.detect.measures = vec![];
            s.detect.bells = vec![BellSpec::SvetlichnyXy, BellSpec::P5Xy];
            s
        }
        // Photonic amplitude damping with p(t) = 1 − e^{−t}: |β|² = |α|²/3
        // decays only asymptotically.
        "adh07-psi1" => base(
            "adh07-psi1",
            StateSpec::Adh { alpha_sq: 0.75 },
            NoiseSpec::AdhDamping { rate: 1.0 },
            10.0,
        ),
        // |β|² = 3|α|² dies at p = |α/β| = 1/√3.
        "adh07-psi2" => base(
            "adh07-psi2",
            StateSpec::Adh { alpha_sq: 0.25 },
            NoiseSpec::AdhDamping { rate: 1.0 },
            10.0,
        ),
        // Photon-number X-state under local dephasing; the closed-form
        // concurrence (2|z| − 2√(p00 p11))/P dies when the stored coherence
        // decays to √(p00 p11).
        "lcd07" => base(
            "lcd07",
            StateSpec::PhotonX {
                p00: 0.3,
                p01: 0.3,
                p10: 0.3,
                p11: 0.1,
                z: (0.25, 0.0),
            },
            NoiseSpec::DephasingMultiLocal { rate: 1.0 },
            2.0,
        ),
        _ => return None,
    };
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_resolves() {
        for name in PRESET_NAMES {
            let s = preset(name).unwrap_or_else(|| panic!("missing preset {name}"));
            assert_eq!(s.name, name);
        }
        assert!(preset("nope").is_none());
    }
}

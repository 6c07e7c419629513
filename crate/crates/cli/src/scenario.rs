//! Scenario files: a sectioned key-value format describing an initial
//! state, a noise model, a sweep grid, the quantities to detect and where
//! to write the outputs.
//!
//! ```text
//! name = my-run
//! mode = sweep
//!
//! [state]
//! kind = bell
//! which = phi_plus
//!
//! [noise]
//! kind = dephasing_multilocal
//! rate = 1.0
//!
//! [sweep]
//! t_max = 5.0
//! points = 256
//!
//! [detect]
//! measures = concurrence
//! bell =
//! tolerance = 1e-8
//!
//! [output]
//! dir = out
//! format = csv
//! ```
//!
//! Unknown sections or keys are rejected with their line number. A single
//! top-level `preset = <name>` line expands to the named preset scenario;
//! later sections override the preset's fields.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use suddenlab_core::states::Bell;

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Bell { which: Bell },
    Ghz { n: usize },
    W { n: usize },
    Werner2 { fidelity: f64 },
    Werner3 { p: f64 },
    Isotropic { d: usize, fidelity: f64 },
    CavesMilburn { epsilon: f64 },
    XState { a: f64, b: f64, c: f64, d: f64, w: (f64, f64), z: (f64, f64) },
    QubitQutrit { x: f64 },
    PhotonX { p00: f64, p01: f64, p10: f64, p11: f64, z: (f64, f64) },
    /// Photon pair |α||HH⟩ + |β||VV⟩ parameterized by |α|².
    Adh { alpha_sq: f64 },
    /// Two atoms in a chosen Bell state, both cavities in vacuum.
    BellAtomsVacuum { which: Bell, truncation: usize },
    /// Atoms in √(1−q)|gg⟩ + √q|ee⟩ with vacuum cavities; q = 1/2 is the
    /// Bell case whose pair concurrence only touches zero at isolated
    /// points, q > 1/2 shows finite dead intervals with revivals.
    AtomsVacuum { excited_weight: f64, truncation: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    None,
    /// Independent qubit dephasing, per-qubit factor γ = e^{−Γt}.
    DephasingMultiLocal { rate: f64 },
    /// Independent qubit amplitude damping, per-qubit factor γ = e^{−Γt}.
    DampingMultiLocal { rate: f64 },
    /// Shared-field dephasing: excitation-difference coherences decay as
    /// e^{−Γt(Δh)²/2}, so the two-qubit outer coherence decays as e^{−2Γt}.
    CollectiveDephasing { rate: f64 },
    /// Depolarizing channel on subsystem 0 only (Choi-state evolutions).
    DepolarizingOneSide { tau: f64 },
    /// Local qudit depolarizing on both halves, strength λ = 1 − e^{−Γt}.
    DepolarizingBothSides { rate: f64 },
    /// Two-rate qutrit amplitude damping on subsystem 0 only.
    QutritDampingOneSide { a1: f64, a2: f64 },
    /// Simultaneous dephasing and damping on every qubit with the half-rate
    /// per-qubit factors e^{−Γ₂t/2} and e^{−Γ₁t/2}, so two-qubit coherences
    /// decay by e^{−Γ₂t} and e^{−Γ₁t} respectively.
    CombinedDephasingDamping { dephasing_rate: f64, damping_rate: f64 },
    /// The qubit-qutrit family evolved through its corner factor e^{−Γt}.
    AnsatzDephasing { rate: f64 },
    /// Photonic amplitude damping with probability p(t) = 1 − e^{−Γt}.
    AdhDamping { rate: f64 },
    /// Multi-local thermal emission/absorption at rates Γ↓ = γ₀(1+n),
    /// Γ↑ = γ₀n with n the thermal occupation at βω₀.
    LindbladThermal { gamma0: f64, omega0: f64, beta: f64 },
    /// Closed-system pair of single-atom cavities.
    DoubleJaynesCummings { omega_atom: f64, omega_cavity: f64, g: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepParams {
    pub t_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    Purity,
    Concurrence,
    /// Concurrence of the reduction to two parties.
    ConcurrencePair(usize, usize),
    Negativity { party: usize },
    EntanglementOfFormation,
    /// Overlap with the maximally entangled projector of the d⊗d space.
    FidelityMaxEntangled,
    /// Isotropic-state entanglement of formation of that fidelity.
    IsotropicEof,
    /// Signed margin F(t) − 1/d; crosses zero at the separability boundary.
    FidelityMargin,
    /// Separability indicator (9F − 1)/8 of the damped two-qutrit mixture.
    CmS,
    /// Signed margin s(t) − 1/4.
    CmMargin,
    PhaseCorrelation,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BellSpec {
    /// Svetlichny at the equatorial settings maximal for GHZ.
    SvetlichnyXy,
    /// Fifth correlation class at its GHZ-maximal equatorial settings.
    P5Xy,
    /// Fifth correlation class at the printed z–x settings.
    P5Printed { theta_b: f64, theta_c: f64 },
    /// CHSH at the singlet-maximal settings.
    ChshSinglet,
    /// CHSH with settings optimized on the initial state, then frozen.
    ChshOptimal,
    /// Svetlichny with settings optimized on the initial state, then frozen.
    SvetlichnyOptimal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectParams {
    pub measures: Vec<MeasureSpec>,
    pub bells: Vec<BellSpec>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputParams {
    pub dir: Option<String>,
    pub format: OutputFormat,
}

/// Parameter scans used by the boundary-hunting modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanParams {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Evolve and detect along a time grid (the default).
    Sweep,
    /// Scan the Werner fidelity for the largest value with a finite death.
    CriticalFidelity,
    /// Bisect the mixing parameter where the separability verdict flips.
    SeparabilityBoundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub mode: Mode,
    pub state: StateSpec,
    pub noise: NoiseSpec,
    pub sweep: SweepParams,
    pub detect: DetectParams,
    pub output: OutputParams,
    pub scan: Option<ScanParams>,
}

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<(String, String, usize)>,
}

fn split_sections(text: &str) -> Result<(Vec<(String, String, usize)>, Vec<Section>), ParseError> {
    let mut top = Vec::new();
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or(ParseError {
                    line: line_no,
                    message: format!("malformed section header '{raw}'"),
                })?
                .trim()
                .to_string();
            sections.push(Section {
                name,
                line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim().to_string(), v.trim().to_string()),
            None => return err(line_no, format!("expected 'key = value', got '{raw}'")),
        };
        match sections.last_mut() {
            Some(section) => section.entries.push((key, value, line_no)),
            None => top.push((key, value, line_no)),
        }
    }
    Ok((top, sections))
}

/// Typed access to a section's keys with unknown-key rejection.
struct Keys {
    map: BTreeMap<String, (String, usize)>,
    section: String,
    section_line: usize,
}

impl Keys {
    fn from(section: Section) -> Result<Self, ParseError> {
        let mut map = BTreeMap::new();
        for (k, v, line) in section.entries {
            if map.insert(k.clone(), (v, line)).is_some() {
                return err(line, format!("duplicate key '{k}'"));
            }
        }
        Ok(Self {
            map,
            section: section.name,
            section_line: section.line,
        })
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.map.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<(String, usize), ParseError> {
        self.take(key).ok_or(ParseError {
            line: self.section_line,
            message: format!("section [{}] is missing key '{}'", self.section, key),
        })
    }

    fn f64(&mut self, key: &str) -> Result<f64, ParseError> {
        let (v, line) = self.require(key)?;
        v.parse()
            .map_err(|_| ParseError {
                line,
                message: format!("'{key}' must be a number, got '{v}'"),
            })
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, ParseError> {
        match self.take(key) {
            None => Ok(default),
            Some((v, line)) => v.parse().map_err(|_| ParseError {
                line,
                message: format!("'{key}' must be a number, got '{v}'"),
            }),
        }
    }

    fn usize(&mut self, key: &str) -> Result<usize, ParseError> {
        let (v, line) = self.require(key)?;
        v.parse().map_err(|_| ParseError {
            line,
            message: format!("'{key}' must be a nonnegative integer, got '{v}'"),
        })
    }

    fn usize_or(&mut self, key: &str, default: usize) -> Result<usize, ParseError> {
        match self.take(key) {
            None => Ok(default),
            Some((v, line)) => v.parse().map_err(|_| ParseError {
                line,
                message: format!("'{key}' must be a nonnegative integer, got '{v}'"),
            }),
        }
    }

    fn finish(self) -> Result<(), ParseError> {
        if let Some((key, (_, line))) = self.map.into_iter().next() {
            return err(
                line,
                format!("unknown key '{key}' in section [{}]", self.section),
            );
        }
        Ok(())
    }
}

fn parse_bell(which: &str, line: usize) -> Result<Bell, ParseError> {
    match which {
        "phi_plus" => Ok(Bell::PhiPlus),
        "phi_minus" => Ok(Bell::PhiMinus),
        "psi_plus" => Ok(Bell::PsiPlus),
        "psi_minus" => Ok(Bell::PsiMinus),
        other => err(
            line,
            format!("unknown Bell state '{other}' (phi_plus|phi_minus|psi_plus|psi_minus)"),
        ),
    }
}

fn parse_state(section: Section) -> Result<StateSpec, ParseError> {
    let mut keys = Keys::from(section)?;
    let (kind, kind_line) = keys.require("kind")?;
    let spec = match kind.as_str() {
        "bell" => {
            let (which, line) = keys.require("which")?;
            StateSpec::Bell {
                which: parse_bell(&which, line)?,
            }
        }
        "ghz" => StateSpec::Ghz { n: keys.usize("n")? },
        "w" => StateSpec::W { n: keys.usize("n")? },
        "werner2" => StateSpec::Werner2 {
            fidelity: keys.f64("fidelity")?,
        },
        "werner3" => StateSpec::Werner3 { p: keys.f64("p")? },
        "isotropic" => StateSpec::Isotropic {
            d: keys.usize("d")?,
            fidelity: keys.f64("fidelity")?,
        },
        "caves_milburn" => StateSpec::CavesMilburn {
            epsilon: keys.f64("epsilon")?,
        },
        "x_state" => StateSpec::XState {
            a: keys.f64("a")?,
            b: keys.f64("b")?,
            c: keys.f64("c")?,
            d: keys.f64("d")?,
            w: (keys.f64_or("w_re", 0.0)?, keys.f64_or("w_im", 0.0)?),
            z: (keys.f64_or("z_re", 0.0)?, keys.f64_or("z_im", 0.0)?),
        },
        "qubit_qutrit" => StateSpec::QubitQutrit { x: keys.f64("x")? },
        "photon_x" => StateSpec::PhotonX {
            p00: keys.f64("p00")?,
            p01: keys.f64("p01")?,
            p10: keys.f64("p10")?,
            p11: keys.f64("p11")?,
            z: (keys.f64_or("z_re", 0.0)?, keys.f64_or("z_im", 0.0)?),
        },
        "adh" => StateSpec::Adh {
            alpha_sq: keys.f64("alpha_sq")?,
        },
        "bell_atoms_vacuum" => {
            let (which, line) = keys.require("which")?;
            StateSpec::BellAtomsVacuum {
                which: parse_bell(&which, line)?,
                truncation: keys.usize_or("truncation", 1)?,
            }
        }
        "atoms_vacuum" => StateSpec::AtomsVacuum {
            excited_weight: keys.f64("excited_weight")?,
            truncation: keys.usize_or("truncation", 1)?,
        },
        other => return err(kind_line, format!("unknown state kind '{other}'")),
    };
    keys.finish()?;
    Ok(spec)
}

fn parse_noise(section: Section) -> Result<NoiseSpec, ParseError> {
    let mut keys = Keys::from(section)?;
    let (kind, kind_line) = keys.require("kind")?;
    let spec = match kind.as_str() {
        "none" => NoiseSpec::None,
        "dephasing_multilocal" => NoiseSpec::DephasingMultiLocal {
            rate: keys.f64("rate")?,
        },
        "damping_multilocal" => NoiseSpec::DampingMultiLocal {
            rate: keys.f64("rate")?,
        },
        "dephasing_collective" => NoiseSpec::CollectiveDephasing {
            rate: keys.f64("rate")?,
        },
        "depolarizing_one_side" => NoiseSpec::DepolarizingOneSide {
            tau: keys.f64("tau")?,
        },
        "depolarizing_both_sides" => NoiseSpec::DepolarizingBothSides {
            rate: keys.f64("rate")?,
        },
        "qutrit_damping_one_side" => NoiseSpec::QutritDampingOneSide {
            a1: keys.f64("a1")?,
            a2: keys.f64("a2")?,
        },
        "combined_dephasing_damping" => NoiseSpec::CombinedDephasingDamping {
            dephasing_rate: keys.f64("dephasing_rate")?,
            damping_rate: keys.f64("damping_rate")?,
        },
        "ansatz_dephasing" => NoiseSpec::AnsatzDephasing {
            rate: keys.f64("rate")?,
        },
        "adh_damping" => NoiseSpec::AdhDamping {
            rate: keys.f64("rate")?,
        },
        "lindblad_thermal" => NoiseSpec::LindbladThermal {
            gamma0: keys.f64("gamma0")?,
            omega0: keys.f64("omega0")?,
            beta: keys.f64("beta")?,
        },
        "double_jaynes_cummings" => NoiseSpec::DoubleJaynesCummings {
            omega_atom: keys.f64("omega_atom")?,
            omega_cavity: keys.f64("omega_cavity")?,
            g: keys.f64("g")?,
        },
        other => return err(kind_line, format!("unknown noise kind '{other}'")),
    };
    keys.finish()?;
    Ok(spec)
}

fn parse_measure(token: &str, line: usize) -> Result<MeasureSpec, ParseError> {
    if let Some(args) = token.strip_prefix("concurrence(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return err(line, format!("concurrence(i,j) needs two indices, got '{token}'"));
        }
        let i = parts[0].parse().map_err(|_| ParseError {
            line,
            message: format!("bad party index in '{token}'"),
        })?;
        let j = parts[1].parse().map_err(|_| ParseError {
            line,
            message: format!("bad party index in '{token}'"),
        })?;
        return Ok(MeasureSpec::ConcurrencePair(i, j));
    }
    if let Some(arg) = token.strip_prefix("negativity(").and_then(|s| s.strip_suffix(')')) {
        let party = arg.trim().parse().map_err(|_| ParseError {
            line,
            message: format!("bad party index in '{token}'"),
        })?;
        return Ok(MeasureSpec::Negativity { party });
    }
    match token {
        "purity" => Ok(MeasureSpec::Purity),
        "concurrence" => Ok(MeasureSpec::Concurrence),
        "negativity" => Ok(MeasureSpec::Negativity { party: 0 }),
        "eof" => Ok(MeasureSpec::EntanglementOfFormation),
        "fidelity_max_entangled" => Ok(MeasureSpec::FidelityMaxEntangled),
        "isotropic_eof" => Ok(MeasureSpec::IsotropicEof),
        "fidelity_margin" => Ok(MeasureSpec::FidelityMargin),
        "cm_s" => Ok(MeasureSpec::CmS),
        "cm_margin" => Ok(MeasureSpec::CmMargin),
        "phase_correlation" => Ok(MeasureSpec::PhaseCorrelation),
        other => err(line, format!("unknown measure '{other}'")),
    }
}

fn parse_bell_spec(token: &str, line: usize) -> Result<BellSpec, ParseError> {
    if let Some(args) = token.strip_prefix("p5_printed(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return err(line, format!("p5_printed(θB,θC) needs two angles, got '{token}'"));
        }
        let parse_angle = |s: &str| -> Result<f64, ParseError> {
            match s {
                "pi/6" => Ok(std::f64::consts::FRAC_PI_6),
                "pi/3" => Ok(std::f64::consts::FRAC_PI_3),
                "pi/4" => Ok(std::f64::consts::FRAC_PI_4),
                _ => s.parse().map_err(|_| ParseError {
                    line,
                    message: format!("bad angle '{s}'"),
                }),
            }
        };
        return Ok(BellSpec::P5Printed {
            theta_b: parse_angle(parts[0])?,
            theta_c: parse_angle(parts[1])?,
        });
    }
    match token {
        "svetlichny_xy" => Ok(BellSpec::SvetlichnyXy),
        "p5_xy" => Ok(BellSpec::P5Xy),
        "chsh_singlet" => Ok(BellSpec::ChshSinglet),
        "chsh_optimal" => Ok(BellSpec::ChshOptimal),
        "svetlichny_optimal" => Ok(BellSpec::SvetlichnyOptimal),
        other => err(line, format!("unknown Bell family '{other}'")),
    }
}

/// Split a comma list, keeping commas inside parentheses with their token.
fn split_tokens(value: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in value.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(ch);
            }
            ',' if depth == 0 => {
                out.push(current.trim().to_string());
                current.clear();
            }
            _ => current.push(ch),
        }
    }
    out.push(current.trim().to_string());
    out.retain(|t| !t.is_empty());
    out
}

fn parse_list<T>(
    value: &str,
    line: usize,
    parse: impl Fn(&str, usize) -> Result<T, ParseError>,
) -> Result<Vec<T>, ParseError> {
    split_tokens(value)
        .iter()
        .map(|t| parse(t, line))
        .collect()
}

/// Parse a scenario file; `preset = name` lines are expanded through the
/// preset table first.
pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let (top, sections) = split_sections(text)?;

    let mut base: Option<Scenario> = None;
    let mut name: Option<String> = None;
    let mut mode: Option<Mode> = None;
    for (key, value, line) in top {
        match key.as_str() {
            "preset" => {
                base = Some(crate::presets::preset(&value).ok_or(ParseError {
                    line,
                    message: format!("unknown preset '{value}'"),
                })?);
            }
            "name" => name = Some(value),
            "mode" => {
                mode = Some(match value.as_str() {
                    "sweep" => Mode::Sweep,
                    "critical_fidelity" => Mode::CriticalFidelity,
                    "separability_boundary" => Mode::SeparabilityBoundary,
                    other => return err(line, format!("unknown mode '{other}'")),
                })
            }
            other => return err(line, format!("unknown top-level key '{other}'")),
        }
    }

    let mut state = base.as_ref().map(|s| s.state.clone());
    let mut noise = base.as_ref().map(|s| s.noise.clone());
    let mut sweep = base.as_ref().map(|s| s.sweep);
    let mut detect = base.as_ref().map(|s| s.detect.clone());
    let mut output = base.as_ref().map(|s| s.output.clone());
    let mut scan = base.as_ref().and_then(|s| s.scan);
    if mode.is_none() {
        mode = base.as_ref().map(|s| s.mode);
    }
    if name.is_none() {
        name = base.as_ref().map(|s| s.name.clone());
    }

    for section in sections {
        match section.name.as_str() {
            "state" => state = Some(parse_state(section)?),
            "noise" => noise = Some(parse_noise(section)?),
            "sweep" => {
                let mut keys = Keys::from(section)?;
                sweep = Some(SweepParams {
                    t_max: keys.f64("t_max")?,
                    points: keys.usize_or("points", 256)?,
                });
                keys.finish()?;
            }
            "detect" => {
                let mut keys = Keys::from(section)?;
                let measures = match keys.take("measures") {
                    Some((v, line)) => parse_list(&v, line, parse_measure)?,
                    None => Vec::new(),
                };
                let bells = match keys.take("bell") {
                    Some((v, line)) => parse_list(&v, line, parse_bell_spec)?,
                    None => Vec::new(),
                };
                let tolerance = keys.f64_or("tolerance", 1e-8)?;
                keys.finish()?;
                detect = Some(DetectParams {
                    measures,
                    bells,
                    tolerance,
                });
            }
            "output" => {
                let mut keys = Keys::from(section)?;
                let dir = keys.take("dir").map(|(v, _)| v);
                let format = match keys.take("format") {
                    None => OutputFormat::Csv,
                    Some((v, line)) => match v.as_str() {
                        "csv" => OutputFormat::Csv,
                        "json" => OutputFormat::Json,
                        other => return err(line, format!("unknown format '{other}'")),
                    },
                };
                keys.finish()?;
                output = Some(OutputParams { dir, format });
            }
            "scan" => {
                let mut keys = Keys::from(section)?;
                scan = Some(ScanParams {
                    min: keys.f64("min")?,
                    max: keys.f64("max")?,
                    step: keys.f64("step")?,
                });
                keys.finish()?;
            }
            other => {
                return err(section.line, format!("unknown section '[{other}]'"));
            }
        }
    }

    let state = state.ok_or(ParseError {
        line: 0,
        message: "scenario needs a [state] section".into(),
    })?;
    let noise = noise.ok_or(ParseError {
        line: 0,
        message: "scenario needs a [noise] section".into(),
    })?;
    let sweep = sweep.ok_or(ParseError {
        line: 0,
        message: "scenario needs a [sweep] section".into(),
    })?;
    let detect = detect.ok_or(ParseError {
        line: 0,
        message: "scenario needs a [detect] section".into(),
    })?;
    Ok(Scenario {
        name: name.unwrap_or_else(|| "scenario".into()),
        mode: mode.unwrap_or(Mode::Sweep),
        state,
        noise,
        sweep,
        detect,
        output: output.unwrap_or(OutputParams {
            dir: None,
            format: OutputFormat::Csv,
        }),
        scan,
    })
}

fn measure_token(m: &MeasureSpec) -> String {
    match m {
        MeasureSpec::Purity => "purity".into(),
        MeasureSpec::Concurrence => "concurrence".into(),
        MeasureSpec::ConcurrencePair(i, j) => format!("concurrence({i},{j})"),
        MeasureSpec::Negativity { party } => format!("negativity({party})"),
        MeasureSpec::EntanglementOfFormation => "eof".into(),
        MeasureSpec::FidelityMaxEntangled => "fidelity_max_entangled".into(),
        MeasureSpec::IsotropicEof => "isotropic_eof".into(),
        MeasureSpec::FidelityMargin => "fidelity_margin".into(),
        MeasureSpec::CmS => "cm_s".into(),
        MeasureSpec::CmMargin => "cm_margin".into(),
        MeasureSpec::PhaseCorrelation => "phase_correlation".into(),
    }
}

fn bell_token(b: &BellSpec) -> String {
    match b {
        BellSpec::SvetlichnyXy => "svetlichny_xy".into(),
        BellSpec::P5Xy => "p5_xy".into(),
        BellSpec::P5Printed { theta_b, theta_c } => format!("p5_printed({theta_b},{theta_c})"),
        BellSpec::ChshSinglet => "chsh_singlet".into(),
        BellSpec::ChshOptimal => "chsh_optimal".into(),
        BellSpec::SvetlichnyOptimal => "svetlichny_optimal".into(),
    }
}

fn bell_name(which: Bell) -> &'static str {
    match which {
        Bell::PhiPlus => "phi_plus",
        Bell::PhiMinus => "phi_minus",
        Bell::PsiPlus => "psi_plus",
        Bell::PsiMinus => "psi_minus",
    }
}

/// Canonical text rendering; parse(print(s)) == s for any valid scenario.
pub fn print_scenario(s: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", s.name);
    let mode = match s.mode {
        Mode::Sweep => "sweep",
        Mode::CriticalFidelity => "critical_fidelity",
        Mode::SeparabilityBoundary => "separability_boundary",
    };
    let _ = writeln!(out, "mode = {mode}");
    out.push_str("\n[state]\n");
    match &s.state {
        StateSpec::Bell { which } => {
            let _ = writeln!(out, "kind = bell\nwhich = {}", bell_name(*which));
        }
        StateSpec::Ghz { n } => {
            let _ = writeln!(out, "kind = ghz\nn = {n}");
        }
        StateSpec::W { n } => {
            let _ = writeln!(out, "kind = w\nn = {n}");
        }
        StateSpec::Werner2 { fidelity } => {
            let _ = writeln!(out, "kind = werner2\nfidelity = {fidelity:.17e}");
        }
        StateSpec::Werner3 { p } => {
            let _ = writeln!(out, "kind = werner3\np = {p:.17e}");
        }
        StateSpec::Isotropic { d, fidelity } => {
            let _ = writeln!(out, "kind = isotropic\nd = {d}\nfidelity = {fidelity:.17e}");
        }
        StateSpec::CavesMilburn { epsilon } => {
            let _ = writeln!(out, "kind = caves_milburn\nepsilon = {epsilon:.17e}");
        }
        StateSpec::XState { a, b, c, d, w, z } => {
            let _ = writeln!(
                out,
                "kind = x_state\na = {a:.17e}\nb = {b:.17e}\nc = {c:.17e}\nd = {d:.17e}"
            );
            let _ = writeln!(out, "w_re = {:.17e}\nw_im = {:.17e}", w.0, w.1);
            let _ = writeln!(out, "z_re = {:.17e}\nz_im = {:.17e}", z.0, z.1);
        }
        StateSpec::QubitQutrit { x } => {
            let _ = writeln!(out, "kind = qubit_qutrit\nx = {x:.17e}");
        }
        StateSpec::PhotonX {
            p00,
            p01,
            p10,
            p11,
            z,
        } => {
            let _ = writeln!(
                out,
                "kind = photon_x\np00 = {p00:.17e}\np01 = {p01:.17e}\np10 = {p10:.17e}\np11 = {p11:.17e}"
            );
            let _ = writeln!(out, "z_re = {:.17e}\nz_im = {:.17e}", z.0, z.1);
        }
        StateSpec::Adh { alpha_sq } => {
            let _ = writeln!(out, "kind = adh\nalpha_sq = {alpha_sq:.17e}");
        }
        StateSpec::BellAtomsVacuum { which, truncation } => {
            let _ = writeln!(
                out,
                "kind = bell_atoms_vacuum\nwhich = {}\ntruncation = {truncation}",
                bell_name(*which)
            );
        }
        StateSpec::AtomsVacuum {
            excited_weight,
            truncation,
        } => {
            let _ = writeln!(
                out,
                "kind = atoms_vacuum\nexcited_weight = {excited_weight:.17e}\ntruncation = {truncation}"
            );
        }
    }
    out.push_str("\n[noise]\n");
    match &s.noise {
        NoiseSpec::None => {
            let _ = writeln!(out, "kind = none");
        }
        NoiseSpec::DephasingMultiLocal { rate } => {
            let _ = writeln!(out, "kind = dephasing_multilocal\nrate = {rate:.17e}");
        }
        NoiseSpec::DampingMultiLocal { rate } => {
            let _ = writeln!(out, "kind = damping_multilocal\nrate = {rate:.17e}");
        }
        NoiseSpec::CollectiveDephasing { rate } => {
            let _ = writeln!(out, "kind = dephasing_collective\nrate = {rate:.17e}");
        }
        NoiseSpec::DepolarizingOneSide { tau } => {
            let _ = writeln!(out, "kind = depolarizing_one_side\ntau = {tau:.17e}");
        }
        NoiseSpec::DepolarizingBothSides { rate } => {
            let _ = writeln!(out, "kind = depolarizing_both_sides\nrate = {rate:.17e}");
        }
        NoiseSpec::QutritDampingOneSide { a1, a2 } => {
            let _ = writeln!(
                out,
                "kind = qutrit_damping_one_side\na1 = {a1:.17e}\na2 = {a2:.17e}"
            );
        }
        NoiseSpec::CombinedDephasingDamping {
            dephasing_rate,
            damping_rate,
        } => {
            let _ = writeln!(
                out,
                "kind = combined_dephasing_damping\ndephasing_rate = {dephasing_rate:.17e}\ndamping_rate = {damping_rate:.17e}"
            );
        }
        NoiseSpec::AnsatzDephasing { rate } => {
            let _ = writeln!(out, "kind = ansatz_dephasing\nrate = {rate:.17e}");
        }
        NoiseSpec::AdhDamping { rate } => {
            let _ = writeln!(out, "kind = adh_damping\nrate = {rate:.17e}");
        }
        NoiseSpec::LindbladThermal {
            gamma0,
            omega0,
            beta,
        } => {
            let _ = writeln!(
                out,
                "kind = lindblad_thermal\ngamma0 = {gamma0:.17e}\nomega0 = {omega0:.17e}\nbeta = {beta:.17e}"
            );
        }
        NoiseSpec::DoubleJaynesCummings {
            omega_atom,
            omega_cavity,
            g,
        } => {
            let _ = writeln!(
                out,
                "kind = double_jaynes_cummings\nomega_atom = {omega_atom:.17e}\nomega_cavity = {omega_cavity:.17e}\ng = {g:.17e}"
            );
        }
    }
    out.push_str("\n[sweep]\n");
    let _ = writeln!(out, "t_max = {:.17e}\npoints = {}", s.sweep.t_max, s.sweep.points);
    out.push_str("\n[detect]\n");
    let measures: Vec<String> = s.detect.measures.iter().map(measure_token).collect();
    let bells: Vec<String> = s.detect.bells.iter().map(bell_token).collect();
    let _ = writeln!(out, "measures = {}", measures.join(", "));
    let _ = writeln!(out, "bell = {}", bells.join(", "));
    let _ = writeln!(out, "tolerance = {:.17e}", s.detect.tolerance);
    out.push_str("\n[output]\n");
    if let Some(dir) = &s.output.dir {
        let _ = writeln!(out, "dir = {dir}");
    }
    let _ = writeln!(
        out,
        "format = {}",
        match s.output.format {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    );
    if let Some(scan) = &s.scan {
        out.push_str("\n[scan]\n");
        let _ = writeln!(
            out,
            "min = {:.17e}\nmax = {:.17e}\nstep = {:.17e}",
            scan.min, scan.max, scan.step
        );
    }
    out
}

//! Encodings built from the single-step gates: the three-qubit bit-flip code
//! and the Steane seven-qubit encoder.
//!
//! Bit-flip register: indices 0 and 1 are the ancillas (labelled qubits 1, 2),
//! index 2 carries the input (labelled qubit 3).
//! Steane register: indices 0..7 follow the labelling order `1, 2, 3, Q, 4, 5, 6`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::driven::DrivenGate;
use crate::error::{Error, Result};
use crate::evolution::NoiseSpec;
use crate::fidelity::{haar_average, Channel, MonteCarloEstimate};
use crate::gates::{embed_multi, ideal_cnotn_on, ideal_itoffoli};
use crate::linalg::{
    basis_state, c, embed, reduce_to_qubit, sigma_x, Operator, StateVector, C64, I, ONE, ZERO,
};
use crate::model::{DeviceModel, DriveSpec};

/// How each step of a circuit is realised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateMode {
    Ideal,
    /// Uniform coupling `coupling` inside each step's star, `Omega = coupling / ratio`.
    Driven { coupling: f64, ratio: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodeRun {
    pub gate_mode: GateMode,
    pub noise: Option<NoiseSpec>,
    pub error_site: Option<usize>,
    pub input: (C64, C64),
}

impl CodeRun {
    pub fn new(gate_mode: GateMode, noise: Option<NoiseSpec>, error_site: Option<usize>, input: (C64, C64)) -> Result<Self> {
        let n = input.0.norm_sqr() + input.1.norm_sqr();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("input norm^2 is {n}, expected 1")));
        }
        Ok(Self {
            gate_mode,
            noise,
            error_site,
            input,
        })
    }

    pub fn input_state(&self) -> StateVector {
        StateVector::from_vec(vec![self.input.0, self.input.1])
    }
}

/// One entangling window: a control (or target) at the centre of a star and the
/// qubits it acts on.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    /// `control` flips every qubit in `targets`.
    Fanout { control: usize, targets: Vec<usize> },
    /// `target` is inverted iff every qubit in `controls` is |1>.
    IToffoli { target: usize, controls: Vec<usize> },
}

impl Step {
    fn center(&self) -> usize {
        match self {
            Step::Fanout { control, .. } => *control,
            Step::IToffoli { target, .. } => *target,
        }
    }

    fn leaves(&self) -> &[usize] {
        match self {
            Step::Fanout { targets, .. } => targets,
            Step::IToffoli { controls, .. } => controls,
        }
    }

    /// Pairwise CNOTs needed for the same step in a two-qubit-gate circuit
    /// (a Toffoli is counted as one window).
    pub fn conventional_windows(&self) -> usize {
        match self {
            Step::Fanout { targets, .. } => targets.len(),
            Step::IToffoli { .. } => 1,
        }
    }

    pub fn ideal(&self, m: usize) -> Result<Operator> {
        match self {
            Step::Fanout { control, targets } => ideal_cnotn_on(m, *control, targets, &vec![0.0; targets.len()]),
            Step::IToffoli { target, controls } => {
                let mut sites = vec![*target];
                sites.extend_from_slice(controls);
                embed_multi(&ideal_itoffoli(controls.len(), 0.0), &sites, m)
            }
        }
    }

    /// Device of the step (couplings only inside the star, zero frequencies) and its drive.
    pub fn driven(&self, m: usize, coupling: f64, ratio: f64) -> Result<DrivenGate> {
        let center = self.center();
        let edges: Vec<(usize, usize, f64)> = self.leaves().iter().map(|&k| (center, k, coupling)).collect();
        let dev = DeviceModel::from_edges(vec![0.0; m], &edges, m.saturating_sub(1).max(1))?;
        if !(ratio > 0.0) {
            return Err(Error::InvalidDrive(format!("J/Omega must be positive, got {ratio}")));
        }
        let rabi = coupling.abs() / ratio;
        let drive = match self {
            Step::Fanout { control, targets } => DriveSpec::fanout(&dev, rabi, *control, targets, 0.0)?,
            Step::IToffoli { target, controls } => DriveSpec::resonant(&dev, rabi, &[(*target, 0.0)], controls)?,
        };
        DrivenGate::half_period(dev, drive)
    }
}

/// Ordered entangling windows on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub qubits: usize,
    pub steps: Vec<Step>,
}

impl Schedule {
    pub fn windows(&self) -> usize {
        self.steps.len()
    }

    pub fn conventional_windows(&self) -> usize {
        self.steps.iter().map(Step::conventional_windows).sum()
    }
}

pub fn steane_schedule() -> Schedule {
    Schedule {
        qubits: 7,
        steps: vec![
            Step::Fanout {
                control: 3,
                targets: vec![4, 5],
            },
            Step::Fanout {
                control: 2,
                targets: vec![3, 4, 6],
            },
            Step::Fanout {
                control: 1,
                targets: vec![3, 5, 6],
            },
            Step::Fanout {
                control: 0,
                targets: vec![4, 5, 6],
            },
        ],
    }
}

fn bitflip_encoder() -> Step {
    Step::Fanout {
        control: 2,
        targets: vec![0, 1],
    }
}

fn bitflip_corrector() -> Step {
    Step::IToffoli {
        target: 2,
        controls: vec![0, 1],
    }
}

/// A compiled step: either a unitary or a channel.
enum Compiled {
    Unitary(Operator),
    Channel(Box<dyn Channel>),
}

impl Compiled {
    fn apply(&self, rho: &Operator) -> Operator {
        match self {
            Compiled::Unitary(u) => u * rho * u.adjoint(),
            Compiled::Channel(ch) => ch.apply(rho),
        }
    }
}

fn compile(step: &Step, m: usize, mode: GateMode, noise: Option<&NoiseSpec>) -> Result<Compiled> {
    match mode {
        GateMode::Ideal => Ok(Compiled::Unitary(step.ideal(m)?)),
        GateMode::Driven { coupling, ratio } => {
            let g = step.driven(m, coupling, ratio)?;
            match noise {
                Some(nz) if !nz.is_noiseless() => Ok(Compiled::Channel(Box::new(g.channel(nz)?))),
                _ => Ok(Compiled::Unitary(g.unitary()?)),
            }
        }
    }
}

/// Image of the four input operators `|a><b|` of the data qubit (`a, b` in {0,1}),
/// so the output for any input is `sum psi_a psi_b^* M_ab` by linearity.
struct LinearRun {
    outputs: [[Operator; 2]; 2],
}

impl LinearRun {
    fn output(&self, psi: &StateVector) -> Operator {
        let mut out = &self.outputs[0][0] * ZERO;
        for a in 0..2 {
            for b in 0..2 {
                out += &self.outputs[a][b] * (psi[a] * psi[b].conj());
            }
        }
        out
    }
}

fn run_linear(
    prepare: impl Fn(usize) -> StateVector + Sync,
    stages: &[Compiled],
    error: Option<&Operator>,
    error_after: usize,
) -> LinearRun {
    let basis: Vec<StateVector> = (0..2).map(&prepare).collect();
    let pairs: Vec<(usize, usize)> = vec![(0, 0), (0, 1), (1, 1)];
    let imgs: Vec<Operator> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut rho = &basis[a] * basis[b].adjoint();
            for (k, st) in stages.iter().enumerate() {
                rho = st.apply(&rho);
                if k + 1 == error_after {
                    if let Some(x) = error {
                        rho = x * &rho * x.adjoint();
                    }
                }
            }
            rho
        })
        .collect();
    let m01 = imgs[1].clone();
    let m10 = m01.adjoint();
    LinearRun {
        outputs: [[imgs[0].clone(), m01], [m10, imgs[2].clone()]],
    }
}

/// Six stabilizer states: a projective 2-design on one qubit.
pub fn stabilizer_states() -> Vec<StateVector> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        (ONE, ZERO),
        (ZERO, ONE),
        (c(s, 0.0), c(s, 0.0)),
        (c(s, 0.0), c(-s, 0.0)),
        (c(s, 0.0), c(0.0, s)),
        (c(s, 0.0), c(0.0, -s)),
    ]
    .into_iter()
    .map(|(a, b)| StateVector::from_vec(vec![a, b]))
    .collect()
}

/// Exact Bloch-sphere average of a degree-(2,2) function via the stabilizer 2-design.
pub fn bloch_average<F: Fn(&StateVector) -> f64>(f: F) -> f64 {
    let states = stabilizer_states();
    states.iter().map(&f).sum::<f64>() / states.len() as f64
}

/// Haar Monte Carlo over input qubit states.
pub fn bloch_average_monte_carlo<F>(f: F, samples: usize, seed: u64) -> MonteCarloEstimate
where
    F: Fn(&StateVector) -> f64 + Sync,
{
    haar_average(2, samples, seed, f)
}

/// Compiled bit-flip code for a gate mode, noise and error site; evaluates any input.
pub struct BitFlipCode {
    run: LinearRun,
}

impl BitFlipCode {
    pub fn new(mode: GateMode, noise: Option<&NoiseSpec>, error_site: Option<usize>) -> Result<Self> {
        let m = 3;
        if let Some(s) = error_site {
            if s >= m {
                return Err(Error::InvalidErrorSite { site: s, qubits: m });
            }
        }
        let enc = compile(&bitflip_encoder(), m, mode, noise)?;
        let dec = compile(&bitflip_encoder(), m, mode, noise)?;
        let cor = compile(&bitflip_corrector(), m, mode, noise)?;
        let err = error_site.map(|s| embed(&sigma_x(), s, m)).transpose()?;
        let prepare = |a: usize| basis_state(8, a);
        let run = run_linear(prepare, &[enc, dec, cor], err.as_ref(), 1);
        Ok(Self { run })
    }

    /// `<psi| rho_data |psi>` for the data qubit (index 2).
    pub fn fidelity(&self, psi: &StateVector) -> f64 {
        let rho = self.run.output(psi);
        let red = reduce_to_qubit(&rho, 2, 3);
        (psi.adjoint() * red * psi)[(0, 0)].re
    }

    pub fn average_fidelity(&self) -> f64 {
        bloch_average(|p| self.fidelity(p))
    }

    /// Full output density matrix for input `psi`.
    pub fn output(&self, psi: &StateVector) -> Operator {
        self.run.output(psi)
    }
}

/// Fidelity of a single run of the three-qubit bit-flip code.
pub fn run_bitflip_code(run: &CodeRun) -> Result<f64> {
    let code = BitFlipCode::new(run.gate_mode, run.noise.as_ref(), run.error_site)?;
    Ok(code.fidelity(&run.input_state()))
}

/// The two encoded states, written out term by term.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalPair {
    pub zero_l: StateVector,
    pub one_l: StateVector,
}

fn from_terms(terms: &[(&str, C64)]) -> StateVector {
    let mut v = StateVector::zeros(128);
    let a = 1.0 / (2.0 * 2f64.sqrt());
    for (bits, ph) in terms {
        let idx = usize::from_str_radix(bits, 2).expect("bit string");
        v[idx] = ph * a;
    }
    v
}

pub fn steane_logical_states() -> LogicalPair {
    let p = ONE;
    let m = -ONE;
    let pi = I;
    let mi = -I;
    let zero_l = from_terms(&[
        ("0000000", p),
        ("0101011", pi),
        ("0011101", pi),
        ("0110110", m),
        ("1000111", pi),
        ("1101100", m),
        ("1011010", m),
        ("1110001", mi),
    ]);
    let one_l = from_terms(&[
        ("0001110", m),
        ("0010011", mi),
        ("0100101", mi),
        ("0111000", p),
        ("1001001", mi),
        ("1100010", p),
        ("1010100", p),
        ("1111111", pi),
    ]);
    LogicalPair { zero_l, one_l }
}

fn plus() -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_vec(vec![c(s, 0.0), c(s, 0.0)])
}

/// `|+>|+>|+> (a|0> + b|1>) |0>|0>|0>` with `input = (a, b)`.
pub fn steane_initial_state(input: &StateVector) -> StateVector {
    let zero = basis_state(2, 0);
    let parts = [plus(), plus(), plus(), input.clone(), zero.clone(), zero.clone(), zero];
    parts
        .iter()
        .skip(1)
        .fold(parts[0].clone(), |acc, p| crate::linalg::kron_states(&acc, p))
}

/// Compiled Steane encoder; linear in the input qubit.
pub struct SteaneEncoder {
    run: LinearRun,
    logical: LogicalPair,
}

impl SteaneEncoder {
    pub fn new(mode: GateMode, noise: Option<&NoiseSpec>) -> Result<Self> {
        let sched = steane_schedule();
        let stages: Vec<Compiled> = sched
            .steps
            .iter()
            .map(|s| compile(s, sched.qubits, mode, noise))
            .collect::<Result<_>>()?;
        let prepare = |a: usize| steane_initial_state(&basis_state(2, a));
        let run = run_linear(prepare, &stages, None, 0);
        Ok(Self {
            run,
            logical: steane_logical_states(),
        })
    }

    pub fn output(&self, psi: &StateVector) -> Operator {
        self.run.output(psi)
    }

    pub fn logical_target(&self, psi: &StateVector) -> StateVector {
        &self.logical.zero_l * psi[0] + &self.logical.one_l * psi[1]
    }

    pub fn fidelity(&self, psi: &StateVector) -> f64 {
        let goal = self.logical_target(psi);
        (goal.adjoint() * self.output(psi) * &goal)[(0, 0)].re
    }

    pub fn average_fidelity(&self) -> f64 {
        bloch_average(|p| self.fidelity(p))
    }
}

/// Encoded state (density matrix) and its fidelity with `a|0_L> + b|1_L>`.
pub fn steane_encode(run: &CodeRun) -> Result<(Operator, f64)> {
    if run.error_site.is_some() {
        return Err(Error::InvalidCircuit("the encoder takes no injected error".into()));
    }
    let enc = SteaneEncoder::new(run.gate_mode, run.noise.as_ref())?;
    let psi = run.input_state();
    Ok((enc.output(&psi), enc.fidelity(&psi)))
}

/// Ideal encoder as a state-vector map, for codespace checks.
pub fn steane_encode_pure(input: &StateVector) -> Result<StateVector> {
    let sched = steane_schedule();
    let mut v = steane_initial_state(input);
    for s in &sched.steps {
        v = s.ideal(sched.qubits)? * v;
    }
    Ok(v)
}

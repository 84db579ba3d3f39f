//! Ising-coupled qubit register, drive fields and the per-subspace bookkeeping
//! for a drive on qubit 0.
//!
//! All frequencies are angular (rad/s, or any consistent angular unit).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, diagonal, embed, sigma_x, sigma_y, z_sign, Operator};

/// Largest number of control qubits accepted unless a different limit is requested.
pub const DEFAULT_MAX_CONTROLS: usize = 7;

/// Qubit frequencies and the symmetric Ising coupling matrix.
///
/// Qubit 0 is the i-Toffoli target; qubits `1..=n` are the controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceModel {
    omega: Vec<f64>,
    couplings: Vec<Vec<f64>>,
}

impl DeviceModel {
    pub fn new(omega: Vec<f64>, couplings: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_limit(omega, couplings, DEFAULT_MAX_CONTROLS)
    }

    pub fn with_limit(omega: Vec<f64>, couplings: Vec<Vec<f64>>, max_controls: usize) -> Result<Self> {
        let m = omega.len();
        if m < 2 {
            return Err(Error::InvalidDevice("need at least one control qubit".into()));
        }
        if m - 1 > max_controls {
            return Err(Error::InvalidDevice(format!(
                "{} controls exceeds the limit of {max_controls}",
                m - 1
            )));
        }
        if couplings.len() != m || couplings.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidDevice(format!("coupling matrix must be {m}x{m}")));
        }
        for j in 0..m {
            if couplings[j][j] != 0.0 {
                return Err(Error::InvalidDevice(format!("nonzero self-coupling on qubit {j}")));
            }
            for k in 0..j {
                let (a, b) = (couplings[j][k], couplings[k][j]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidDevice(format!("couplings not symmetric at ({j},{k})")));
                }
            }
        }
        if omega.iter().chain(couplings.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidDevice("non-finite parameter".into()));
        }
        Ok(Self { omega, couplings })
    }

    /// Star around qubit 0 with coupling `j_k` to control `k` (`j_k[k-1]`).
    pub fn star(omega: Vec<f64>, to_target: &[f64]) -> Result<Self> {
        Self::star_around(omega, 0, to_target)
    }

    /// Star around `center` with the given couplings to every other qubit, in index order.
    pub fn star_around(omega: Vec<f64>, center: usize, to_center: &[f64]) -> Result<Self> {
        let m = omega.len();
        if center >= m || to_center.len() != m - 1 {
            return Err(Error::InvalidDevice("star couplings do not match register size".into()));
        }
        let mut cm = vec![vec![0.0; m]; m];
        let others = (0..m).filter(|&k| k != center);
        for (k, &jk) in others.zip(to_center) {
            cm[center][k] = jk;
            cm[k][center] = jk;
        }
        Self::new(omega, cm)
    }

    /// `n` controls, all coupled to qubit 0 with strength `j`, zero frequencies.
    pub fn uniform_star(n: usize, j: f64) -> Result<Self> {
        Self::star(vec![0.0; n + 1], &vec![j; n])
    }

    /// Register of `m` qubits with the listed couplings `(j, k, J_jk)`; all other entries zero.
    pub fn from_edges(omega: Vec<f64>, edges: &[(usize, usize, f64)], max_controls: usize) -> Result<Self> {
        let m = omega.len();
        let mut cm = vec![vec![0.0; m]; m];
        for &(a, b, v) in edges {
            if a >= m || b >= m || a == b {
                return Err(Error::InvalidDevice(format!("bad edge ({a},{b})")));
            }
            cm[a][b] = v;
            cm[b][a] = v;
        }
        Self::with_limit(omega, cm, max_controls)
    }

    pub fn num_qubits(&self) -> usize {
        self.omega.len()
    }

    pub fn n_controls(&self) -> usize {
        self.omega.len() - 1
    }

    pub fn dim(&self) -> usize {
        1 << self.omega.len()
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn coupling(&self, j: usize, k: usize) -> f64 {
        self.couplings[j][k]
    }

    pub fn couplings(&self) -> &[Vec<f64>] {
        &self.couplings
    }

    /// Copy with frequencies replaced.
    pub fn with_omega(&self, omega: Vec<f64>) -> Result<Self> {
        Self::with_limit(omega, self.couplings.clone(), usize::MAX)
    }
}

/// Control-string label `x` of a two-dimensional subspace {|0,x>, |1,x>}.
///
/// `x` is stored as an integer whose most significant of `n` bits is control qubit 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubspaceLabel {
    x: usize,
    n: usize,
}

impl SubspaceLabel {
    pub fn new(x: usize, n: usize) -> Self {
        assert!(n < usize::BITS as usize && x < (1 << n), "label out of range");
        Self { x, n }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let x = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1));
        Self::new(x, bits.len())
    }

    pub fn all(n: usize) -> impl Iterator<Item = SubspaceLabel> {
        (0..1usize << n).map(move |x| SubspaceLabel::new(x, n))
    }

    pub fn all_ones(n: usize) -> Self {
        Self::new((1 << n) - 1, n)
    }

    pub fn value(&self) -> usize {
        self.x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// State of control qubit `j` (1-based).
    pub fn bit(&self, j: usize) -> usize {
        assert!(j >= 1 && j <= self.n);
        (self.x >> (self.n - j)) & 1
    }

    pub fn hamming(&self) -> usize {
        self.x.count_ones() as usize
    }

    pub fn complement(&self) -> Self {
        Self::new(!self.x & ((1 << self.n) - 1), self.n)
    }

    /// Basis indices of |0,x> and |1,x>.
    pub fn block_indices(&self) -> (usize, usize) {
        (self.x, (1 << self.n) + self.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quadrature {
    /// `alpha = Omega cos`, `beta = Omega sin`.
    Two,
    /// `alpha = Omega cos`, `beta = 0`; RWA regime only.
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveTarget {
    pub qubit: usize,
    /// `Delta_j`: drive frequency offset so that the field rotates at `Delta_j - omega_j`.
    pub detuning: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    rabi: f64,
    quadrature: Quadrature,
    targets: Vec<DriveTarget>,
}

impl DriveSpec {
    pub fn new(rabi: f64, quadrature: Quadrature, targets: Vec<DriveTarget>) -> Result<Self> {
        if !(rabi > 0.0) || !rabi.is_finite() {
            return Err(Error::InvalidDrive(format!("rabi frequency must be positive, got {rabi}")));
        }
        if targets.is_empty() {
            return Err(Error::InvalidDrive("empty target set".into()));
        }
        let mut seen: Vec<usize> = targets.iter().map(|t| t.qubit).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != targets.len() {
            return Err(Error::InvalidDrive("duplicate drive target".into()));
        }
        Ok(Self {
            rabi,
            quadrature,
            targets,
        })
    }

    /// Two-quadrature drive of qubit 0 alone.
    pub fn on_target(rabi: f64, delta0: f64, theta: f64) -> Result<Self> {
        Self::new(
            rabi,
            Quadrature::Two,
            vec![DriveTarget {
                qubit: 0,
                detuning: delta0,
                phase: theta,
            }],
        )
    }

    /// i-Toffoli drive: qubit 0 resonant with the all-ones control subspace.
    pub fn itoffoli(dev: &DeviceModel, rabi: f64, theta: f64) -> Result<Self> {
        let delta0 = subspace_gap(dev, SubspaceLabel::all_ones(dev.n_controls()));
        Self::on_target(rabi, delta0, theta)
    }

    /// Drive on `targets` resonant when every qubit in `controls` is |1>
    /// and every other undriven qubit is |0>.
    pub fn resonant(
        dev: &DeviceModel,
        rabi: f64,
        targets: &[(usize, f64)],
        controls: &[usize],
    ) -> Result<Self> {
        let m = dev.num_qubits();
        let driven: Vec<usize> = targets.iter().map(|t| t.0).collect();
        let mut list = Vec::with_capacity(targets.len());
        for &(q, theta) in targets {
            if q >= m {
                return Err(Error::SiteOutOfRange { site: q, qubits: m });
            }
            let gap: f64 = (0..m)
                .filter(|&k| k != q && !driven.contains(&k))
                .map(|k| {
                    let s = if controls.contains(&k) { -1.0 } else { 1.0 };
                    dev.coupling(q, k) * s
                })
                .sum();
            list.push(DriveTarget {
                qubit: q,
                detuning: gap,
                phase: theta,
            });
        }
        Self::new(rabi, Quadrature::Two, list)
    }

    /// CNOT^n drive: `control` flips every target in `targets` (all with phase `theta`).
    pub fn fanout(dev: &DeviceModel, rabi: f64, control: usize, targets: &[usize], theta: f64) -> Result<Self> {
        let t: Vec<(usize, f64)> = targets.iter().map(|&q| (q, theta)).collect();
        Self::resonant(dev, rabi, &t, &[control])
    }

    pub fn rabi(&self) -> f64 {
        self.rabi
    }

    pub fn quadrature(&self) -> Quadrature {
        self.quadrature
    }

    pub fn targets(&self) -> &[DriveTarget] {
        &self.targets
    }

    pub fn with_quadrature(&self, quadrature: Quadrature) -> Self {
        Self {
            quadrature,
            ..self.clone()
        }
    }

    /// The single qubit-0 target, if that is the whole drive.
    pub fn target_zero(&self) -> Option<&DriveTarget> {
        match self.targets.as_slice() {
            [t] if t.qubit == 0 => Some(t),
            _ => None,
        }
    }

    fn check_targets(&self, m: usize) -> Result<()> {
        for t in &self.targets {
            if t.qubit >= m {
                return Err(Error::SiteOutOfRange { site: t.qubit, qubits: m });
            }
        }
        Ok(())
    }
}

/// Diagonal of `H0 + H_Ising` in the computational basis.
pub fn static_energies(dev: &DeviceModel) -> Vec<f64> {
    let m = dev.num_qubits();
    (0..dev.dim())
        .map(|b| {
            let mut e = 0.0;
            for j in 0..m {
                let sj = z_sign(b, j, m);
                e -= 0.5 * dev.omega[j] * sj;
                for k in (j + 1)..m {
                    e += 0.5 * dev.couplings[j][k] * sj * z_sign(b, k, m);
                }
            }
            e
        })
        .collect()
}

/// Diagonal of `H_Ising` alone.
pub fn ising_energies(dev: &DeviceModel) -> Vec<f64> {
    let m = dev.num_qubits();
    (0..dev.dim())
        .map(|b| {
            let mut e = 0.0;
            for j in 0..m {
                for k in (j + 1)..m {
                    e += 0.5 * dev.couplings[j][k] * z_sign(b, j, m) * z_sign(b, k, m);
                }
            }
            e
        })
        .collect()
}

/// `H0 + H_Ising`.
pub fn static_hamiltonian(dev: &DeviceModel) -> Operator {
    diagonal(&static_energies(dev))
}

pub fn ising_hamiltonian(dev: &DeviceModel) -> Operator {
    diagonal(&ising_energies(dev))
}

/// Lab-frame drive term at time `t`.
pub fn drive_hamiltonian(dev: &DeviceModel, drive: &DriveSpec, t: f64) -> Result<Operator> {
    let m = dev.num_qubits();
    drive.check_targets(m)?;
    let mut h = Operator::zeros(dev.dim(), dev.dim());
    for tg in &drive.targets {
        let phi = (tg.detuning - dev.omega[tg.qubit]) * t + tg.phase;
        let a = drive.rabi * phi.cos();
        h += embed(&sigma_x(), tg.qubit, m)? * c(a, 0.0);
        if drive.quadrature == Quadrature::Two {
            let b = drive.rabi * phi.sin();
            h += embed(&sigma_y(), tg.qubit, m)? * c(b, 0.0);
        }
    }
    Ok(h)
}

/// Full lab-frame Hamiltonian at time `t`.
pub fn lab_hamiltonian(dev: &DeviceModel, drive: &DriveSpec, t: f64) -> Result<Operator> {
    Ok(static_hamiltonian(dev) + drive_hamiltonian(dev, drive, t)?)
}

/// Warning text when a one-quadrature drive is outside the rotating-wave regime
/// (`Omega` above a tenth of the smallest of `|Delta_x|`, `|Delta_0|`, `omega_0`).
pub fn rwa_warning(dev: &DeviceModel, drive: &DriveSpec) -> Option<String> {
    if drive.quadrature != Quadrature::One {
        return None;
    }
    let tg = drive.targets.iter().find(|t| t.qubit == 0)?;
    let n = dev.n_controls();
    let mut scale = tg.detuning.abs().min(dev.omega[0].abs());
    for x in SubspaceLabel::all(n) {
        scale = scale.min(subspace_gap(dev, x).abs());
    }
    if drive.rabi > scale / 10.0 {
        let msg = format!(
            "one-quadrature drive with rabi {:.4e} outside RWA regime (smallest scale {:.4e})",
            drive.rabi, scale
        );
        log::warn!("{msg}");
        Some(msg)
    } else {
        None
    }
}

/// `Delta_x = sum_j J_j0 (-1)^{x_j}`.
pub fn subspace_gap(dev: &DeviceModel, x: SubspaceLabel) -> f64 {
    assert_eq!(x.n(), dev.n_controls(), "label length must equal control count");
    (1..=x.n())
        .map(|j| {
            let s = if x.bit(j) == 1 { -1.0 } else { 1.0 };
            dev.couplings[j][0] * s
        })
        .sum()
}

/// `delta_x = (Delta_x - Delta_0) / 2`; multiplies sigma-z directly in the block Hamiltonian.
pub fn subspace_detuning(dev: &DeviceModel, delta0: f64, x: SubspaceLabel) -> f64 {
    0.5 * (subspace_gap(dev, x) - delta0)
}

/// Uniform coupling `j`, all-ones resonance: `delta_q = J (n - q)`.
pub fn uniform_subspace_detuning(j: f64, n: usize, q: usize) -> f64 {
    j * (n as f64 - q as f64)
}

fn require_target_zero(drive: &DriveSpec) -> Result<&DriveTarget> {
    match drive.target_zero() {
        Some(t) if drive.quadrature == Quadrature::Two => Ok(t),
        _ => Err(Error::UnsupportedDrive),
    }
}

/// Static 2x2 block Hamiltonian `delta_x sz + Omega (cos theta sx + sin theta sy)`.
pub fn interaction_hamiltonian(dev: &DeviceModel, drive: &DriveSpec, x: SubspaceLabel) -> Result<Operator> {
    let tg = require_target_zero(drive)?;
    let delta = subspace_detuning(dev, tg.detuning, x);
    Ok(block_hamiltonian(delta, drive.rabi, tg.phase))
}

pub fn block_hamiltonian(delta: f64, rabi: f64, theta: f64) -> Operator {
    let off = c(rabi * theta.cos(), -rabi * theta.sin());
    Operator::from_row_slice(2, 2, &[c(delta, 0.0), off, off.conj(), c(-delta, 0.0)])
}

/// Diagonal of the interaction-frame generator `G`, with `U_int(t) = exp(i G t)`.
///
/// Entry for `|x0, x>` is `(Delta_0 - omega_0)/2 * s0 + Ebar_x`, where
/// `Ebar_x = (E_{0,x} + E_{1,x}) / 2`. Conjugating the lab Hamiltonian by
/// `U_int` and subtracting `G` leaves exactly the static block Hamiltonians.
pub fn interaction_frame_energies(dev: &DeviceModel, drive: &DriveSpec) -> Result<Vec<f64>> {
    let tg = drive.target_zero().ok_or(Error::UnsupportedDrive)?;
    let e = static_energies(dev);
    let n = dev.n_controls();
    let half = 1usize << n;
    let mut g = vec![0.0; dev.dim()];
    let shift = 0.5 * (tg.detuning - dev.omega[0]);
    for x in 0..half {
        let ebar = 0.5 * (e[x] + e[half + x]);
        g[x] = ebar + shift;
        g[half + x] = ebar - shift;
    }
    Ok(g)
}

pub fn interaction_frame_generator(dev: &DeviceModel, drive: &DriveSpec) -> Result<Operator> {
    Ok(diagonal(&interaction_frame_energies(dev, drive)?))
}

//! Driven gate windows: a device, a static two-quadrature drive and a duration,
//! simulated in the frame that makes the Hamiltonian time independent.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::evolution::{LindbladChannel, NoiseSpec};
use crate::fidelity::{process_fidelity_channel, unitary_process_fidelity};
use crate::gates::{ideal_cnotn_on, ideal_itoffoli};
use crate::linalg::{c, embed, pauli_in_plane, unitary_exp, Operator, C64, I};
use crate::model::{static_hamiltonian, DeviceModel, DriveSpec, Quadrature};

/// One drive window on a fixed device.
///
/// The simulation frame is `exp(i G t)` with `G = sum_j (Delta_j - omega_j)/2 sz_j`
/// over driven qubits. After the window the result is further conjugated by
/// `exp(i D T)`, `D = diag(H_rot)`, which removes the dynamical phases of the
/// idle subspaces before comparison with the ideal gate.
#[derive(Debug, Clone)]
pub struct DrivenGate {
    device: DeviceModel,
    drive: DriveSpec,
    duration: f64,
}

impl DrivenGate {
    pub fn new(device: DeviceModel, drive: DriveSpec, duration: f64) -> Result<Self> {
        if drive.quadrature() != Quadrature::Two {
            return Err(Error::UnsupportedDrive);
        }
        if !(duration >= 0.0) || !duration.is_finite() {
            return Err(Error::InvalidDrive(format!("duration must be finite and nonnegative, got {duration}")));
        }
        let m = device.num_qubits();
        for t in drive.targets() {
            if t.qubit >= m {
                return Err(Error::SiteOutOfRange { site: t.qubit, qubits: m });
            }
        }
        Ok(Self {
            device,
            drive,
            duration,
        })
    }

    /// Window of length `pi / (2 Omega)`.
    pub fn half_period(device: DeviceModel, drive: DriveSpec) -> Result<Self> {
        let t = gate_time(drive.rabi());
        Self::new(device, drive, t)
    }

    pub fn device(&self) -> &DeviceModel {
        &self.device
    }

    pub fn drive(&self) -> &DriveSpec {
        &self.drive
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn with_duration(&self, duration: f64) -> Result<Self> {
        Self::new(self.device.clone(), self.drive.clone(), duration)
    }

    /// Diagonal of the frame generator `G`.
    pub fn frame_energies(&self) -> Vec<f64> {
        let m = self.device.num_qubits();
        let mut g = vec![0.0; self.device.dim()];
        for t in self.drive.targets() {
            let w = 0.5 * (t.detuning - self.device.omega()[t.qubit]);
            for (b, gb) in g.iter_mut().enumerate() {
                *gb += w * crate::linalg::z_sign(b, t.qubit, m);
            }
        }
        g
    }

    /// Static Hamiltonian in the simulation frame.
    pub fn rotating_hamiltonian(&self) -> Result<Operator> {
        let m = self.device.num_qubits();
        let mut h = static_hamiltonian(&self.device);
        for (k, g) in self.frame_energies().into_iter().enumerate() {
            h[(k, k)] -= c(g, 0.0);
        }
        for t in self.drive.targets() {
            h += embed(&pauli_in_plane(t.phase), t.qubit, m)? * c(self.drive.rabi(), 0.0);
        }
        Ok(h)
    }

    /// `exp(i D_kk T)` for the diagonal-frame correction.
    pub fn frame_phases(&self) -> Result<Vec<C64>> {
        let h = self.rotating_hamiltonian()?;
        Ok((0..h.nrows())
            .map(|k| (I * h[(k, k)].re * self.duration).exp())
            .collect())
    }

    /// Noise-free window including the diagonal-frame correction.
    pub fn unitary(&self) -> Result<Operator> {
        let h = self.rotating_hamiltonian()?;
        let mut u = unitary_exp(&h, self.duration)?;
        for (k, p) in self.frame_phases()?.into_iter().enumerate() {
            let mut row = u.row_mut(k);
            row *= p;
        }
        Ok(u)
    }

    /// Raw rotating-frame propagator without the diagonal correction.
    pub fn rotating_propagator(&self) -> Result<Operator> {
        unitary_exp(&self.rotating_hamiltonian()?, self.duration)
    }

    /// Lindblad channel of the window, followed by the diagonal-frame correction.
    pub fn channel(&self, noise: &NoiseSpec) -> Result<LindbladChannel> {
        LindbladChannel::new(&self.rotating_hamiltonian()?, noise, self.duration)?.with_frame_phases(self.frame_phases()?)
    }

    /// Average gate fidelity against `goal`; `None` means noise free.
    pub fn process_fidelity(&self, goal: &Operator, noise: Option<&NoiseSpec>) -> Result<f64> {
        match noise {
            Some(nz) if !nz.is_noiseless() => process_fidelity_channel(&self.channel(nz)?, goal),
            _ => Ok(unitary_process_fidelity(&self.unitary()?, goal)),
        }
    }
}

/// `T = pi / (2 Omega)`.
pub fn gate_time(rabi: f64) -> f64 {
    PI / (2.0 * rabi)
}

/// i-Toffoli window on a uniform star: qubit 0 target, `n` controls at coupling `j`,
/// `Omega = j / ratio`.
pub fn itoffoli_gate(n: usize, j: f64, ratio: f64, theta: f64) -> Result<(DrivenGate, Operator)> {
    let dev = DeviceModel::uniform_star(n, j)?;
    let rabi = rabi_for(j, ratio)?;
    let drive = DriveSpec::itoffoli(&dev, rabi, theta)?;
    Ok((DrivenGate::half_period(dev, drive)?, ideal_itoffoli(n, theta)))
}

/// CNOT^n window on a uniform star: qubit 0 control, qubits `1..=n` targets.
pub fn cnotn_gate(n: usize, j: f64, ratio: f64, theta: f64) -> Result<(DrivenGate, Operator)> {
    let dev = DeviceModel::uniform_star(n, j)?;
    let rabi = rabi_for(j, ratio)?;
    let targets: Vec<usize> = (1..=n).collect();
    let drive = DriveSpec::fanout(&dev, rabi, 0, &targets, theta)?;
    let goal = ideal_cnotn_on(n + 1, 0, &targets, &vec![theta; n])?;
    Ok((DrivenGate::half_period(dev, drive)?, goal))
}

fn rabi_for(j: f64, ratio: f64) -> Result<f64> {
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(Error::InvalidDrive(format!("J/Omega must be positive, got {ratio}")));
    }
    Ok(j.abs() / ratio)
}

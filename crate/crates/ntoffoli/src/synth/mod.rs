//! Superconducting star circuit: capacitance matrix, quartic-expanded transmon
//! parameters, capacitive drive amplitude, and the map to the Ising device model.
//!
//! Energies are angular frequencies (rad/s); capacitances are in fF.

mod optimize;
mod table;

pub use optimize::{optimize_circuit, optimize_from, Candidate, ConstraintSet, CostWeights, OptimizerOptions, SynthResult};
pub use table::{golden_table, parse_table, read_table, render_table, TableRow, TABLE1_GOLDEN, TABLE_COLUMNS, TABLE_UNITS};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DeviceModel;
use crate::units::{ELEMENTARY_CHARGE, FEMTOFARAD, GHZ, MHZ, PLANCK};

/// Angular charging energy per `(1/fF)`: `E^C = CHARGING_UNIT * (K^-1 in fF^-1)_ii`,
/// i.e. `e^2 / (2 hbar)` with `K` in femtofarads.
pub const CHARGING_UNIT: f64 = ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * PLANCK / (2.0 * std::f64::consts::PI)) / FEMTOFARAD;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub e0: f64,
    pub ei: Vec<f64>,
    pub ezi: Vec<f64>,
    pub c0: f64,
    pub ci: Vec<f64>,
    pub czi: Vec<f64>,
}

impl CircuitParams {
    pub fn new(e0: f64, ei: Vec<f64>, ezi: Vec<f64>, c0: f64, ci: Vec<f64>, czi: Vec<f64>) -> Result<Self> {
        let p = Self {
            e0,
            ei,
            ezi,
            c0,
            ci,
            czi,
        };
        p.validate()?;
        Ok(p)
    }

    /// `n` identical controls.
    pub fn symmetric(n: usize, e0: f64, ei: f64, ez: f64, c0: f64, ci: f64, cz: f64) -> Result<Self> {
        Self::new(e0, vec![ei; n], vec![ez; n], c0, vec![ci; n], vec![cz; n])
    }

    pub fn n_controls(&self) -> usize {
        self.ei.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.ei.len();
        if n == 0 || self.ezi.len() != n || self.ci.len() != n || self.czi.len() != n {
            return Err(Error::InvalidCircuit("per-control lists must share a nonzero length".into()));
        }
        let finite = std::iter::once(self.e0)
            .chain(std::iter::once(self.c0))
            .chain(self.ei.iter().copied())
            .chain(self.ezi.iter().copied())
            .chain(self.ci.iter().copied())
            .chain(self.czi.iter().copied())
            .all(f64::is_finite);
        if !finite {
            return Err(Error::InvalidCircuit("non-finite circuit parameter".into()));
        }
        if self.e0 < 0.0 || self.ei.iter().any(|&e| e < 0.0) {
            return Err(Error::InvalidCircuit("junction energies must be nonnegative".into()));
        }
        if self.ezi.iter().any(|&e| e <= 0.0) {
            return Err(Error::InvalidCircuit("coupling junction energies must be positive".into()));
        }
        if self.c0 <= 0.0 || self.ci.iter().any(|&c| c <= 0.0) || self.czi.iter().any(|&c| c < 0.0) {
            return Err(Error::InvalidCircuit("capacitances must be positive (coupling >= 0)".into()));
        }
        Ok(())
    }
}

/// Star topology: `K00 = C0 + sum Cz`, `Kii = Ci + Czi`, `K0i = -Czi`.
pub fn capacitance_matrix(p: &CircuitParams) -> DMatrix<f64> {
    let n = p.n_controls();
    let mut k = DMatrix::zeros(n + 1, n + 1);
    k[(0, 0)] = p.c0 + p.czi.iter().sum::<f64>();
    for i in 1..=n {
        k[(i, i)] = p.ci[i - 1] + p.czi[i - 1];
        k[(0, i)] = -p.czi[i - 1];
        k[(i, 0)] = -p.czi[i - 1];
    }
    k
}

fn inverse_capacitance(p: &CircuitParams) -> Result<DMatrix<f64>> {
    let k = capacitance_matrix(p);
    let inv = k.clone().try_inverse().ok_or(Error::SingularCapacitance)?;
    if !inv.iter().all(|x| x.is_finite()) {
        return Err(Error::SingularCapacitance);
    }
    Ok(inv)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    pub omega0: f64,
    pub omegai: Vec<f64>,
    pub jz: Vec<f64>,
    pub jx: Vec<f64>,
    /// Control-control transverse couplings, `n x n`, zero diagonal.
    pub jxij: Vec<Vec<f64>>,
    /// `alpha = -E^C / 2` (angular).
    pub alpha0: f64,
    pub alphai: Vec<f64>,
    /// `alpha / omega` in percent.
    pub alpha_rel0: f64,
    pub alpha_reli: Vec<f64>,
    pub ratio0: f64,
    pub ratioi: Vec<f64>,
    /// Charging energies `E^C`, effective Josephson energies `E^J` and impedances, index 0 = target.
    pub charging: Vec<f64>,
    pub josephson: Vec<f64>,
    pub zeta: Vec<f64>,
}

/// Quartic transmon expansion of the star circuit projected on two levels.
///
/// `E^C_i = (e^2/2 hbar)(K^-1)_ii` and `(K^-1)` in energy units is `8 E^C`
/// (`8 CHARGING_UNIT` per fF^-1). `zeta_i = sqrt((K^-1)_ii / E^J_i)`.
pub fn derive_gate_params(p: &CircuitParams) -> Result<GateParams> {
    p.validate()?;
    let n = p.n_controls();
    let kinv = inverse_capacitance(p)? * (8.0 * CHARGING_UNIT);
    let charging: Vec<f64> = (0..=n).map(|i| kinv[(i, i)] / 8.0).collect();
    let mut josephson = vec![p.e0 + p.ezi.iter().sum::<f64>()];
    josephson.extend((0..n).map(|i| p.ei[i] + p.ezi[i]));
    let zeta: Vec<f64> = (0..=n).map(|i| (kinv[(i, i)] / josephson[i]).sqrt()).collect();
    let plasma = |i: usize| (8.0 * charging[i] * josephson[i]).sqrt() + 0.5 * charging[i];

    let omegai: Vec<f64> = (1..=n)
        .map(|i| plasma(i) + p.ezi[i - 1] * zeta[i] * zeta[0] / 6.0)
        .collect();
    let omega0 = plasma(0) + (1..=n).map(|i| p.ezi[i - 1] * zeta[i] * zeta[0]).sum::<f64>() / 6.0;
    let jz: Vec<f64> = (1..=n).map(|i| -p.ezi[i - 1] * zeta[i] * zeta[0] / 12.0).collect();
    let jx: Vec<f64> = (1..=n)
        .map(|i| {
            let s = (zeta[i] * zeta[0]).sqrt();
            let ez = p.ezi[i - 1];
            kinv[(i, 0)] / s - ez * s + 0.25 * ez * (zeta[i] + zeta[0]) * s
        })
        .collect();
    let mut jxij = vec![vec![0.0; n]; n];
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                jxij[i - 1][j - 1] = kinv[(i, j)] / (zeta[i] * zeta[j]).sqrt();
            }
        }
    }
    for (i, v) in jx.iter().enumerate() {
        log::debug!("control {}: dropped counter-rotating amplitude ~ {:.4e} rad/s", i + 1, v.abs());
    }
    let alpha0 = -charging[0] / 2.0;
    let alphai: Vec<f64> = (1..=n).map(|i| -charging[i] / 2.0).collect();
    let out = GateParams {
        omega0,
        alpha_rel0: 100.0 * alpha0 / omega0,
        alpha_reli: alphai.iter().zip(&omegai).map(|(a, w)| 100.0 * a / w).collect(),
        omegai,
        jz,
        jx,
        jxij,
        alpha0,
        alphai,
        ratio0: josephson[0] / charging[0],
        ratioi: (1..=n).map(|i| josephson[i] / charging[i]).collect(),
        charging,
        josephson,
        zeta,
    };
    if !out.omega0.is_finite() || out.omegai.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidCircuit("derived frequencies are not finite".into()));
    }
    Ok(out)
}

/// Effective Rabi frequency of a capacitive drive on `target`:
/// `Omega = -A drive_freq (K^-1)_ii / sqrt(2 zeta_i)` with `(K^-1)` in fF^-1, so
/// `A` carries the drive-capacitance scale in fF. Returns `Omega` and the
/// sigma-y envelope `beta(t) = Omega cos(drive_freq t + theta)`.
pub fn derive_drive(
    p: &CircuitParams,
    amplitude: f64,
    drive_freq: f64,
    theta: f64,
    target: usize,
) -> Result<(f64, impl Fn(f64) -> f64)> {
    let n = p.n_controls();
    if target > n {
        return Err(Error::SiteOutOfRange {
            site: target,
            qubits: n + 1,
        });
    }
    let g = derive_gate_params(p)?;
    let kinv = inverse_capacitance(p)?;
    let rabi = -amplitude * drive_freq * kinv[(target, target)] / (2.0 * g.zeta[target]).sqrt();
    Ok((rabi, move |t: f64| rabi * (drive_freq * t + theta).cos()))
}

/// Drive amplitude giving the Rabi frequency `rabi` (inverse of [`derive_drive`]).
pub fn amplitude_for_rabi(p: &CircuitParams, rabi: f64, drive_freq: f64, target: usize) -> Result<f64> {
    let (unit, _) = derive_drive(p, 1.0, drive_freq, 0.0, target)?;
    if unit == 0.0 {
        return Err(Error::InvalidDrive("drive frequency gives zero coupling".into()));
    }
    Ok(rabi / unit)
}

/// Dropped transverse terms when reducing to the Ising model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeResiduals {
    /// `|J^x_i| / |omega_i - omega_0|` per control.
    pub swap_ratio: Vec<f64>,
    /// Largest `|J^x_ij|`.
    pub max_cross: f64,
}

/// Ising device with `J_{i0} = J^z_i` and the qubit frequencies; transverse terms dropped.
pub fn gate_model_bridge(g: &GateParams, n: usize) -> Result<(DeviceModel, BridgeResiduals)> {
    if g.jz.len() != n || g.omegai.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.jz.len(),
        });
    }
    let mut omega = vec![g.omega0];
    omega.extend_from_slice(&g.omegai);
    let dev = DeviceModel::star(omega, &g.jz)?;
    let swap_ratio = (0..n)
        .map(|i| g.jx[i].abs() / (g.omegai[i] - g.omega0).abs())
        .collect();
    let max_cross = g.jxij.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    Ok((
        dev,
        BridgeResiduals {
            swap_ratio,
            max_cross,
        },
    ))
}

/// Ising device for a printed table row: the columns `omega_0, omega_i, J^z_i`
/// used directly, with residual ratios from the printed `J^x_i` and `J^x_ij`.
pub fn device_from_row(row: &TableRow, n: usize) -> Result<(DeviceModel, BridgeResiduals)> {
    let mut jxij = vec![vec![row.jxij * MHZ; n]; n];
    for (i, r) in jxij.iter_mut().enumerate() {
        r[i] = 0.0;
    }
    let g = GateParams {
        omega0: row.omega0 * GHZ,
        omegai: vec![row.omegai * GHZ; n],
        jz: vec![row.jz * MHZ; n],
        jx: vec![row.jx * MHZ; n],
        jxij,
        alpha0: row.alpha0 / 100.0 * row.omega0 * GHZ,
        alphai: vec![row.alphai / 100.0 * row.omegai * GHZ; n],
        alpha_rel0: row.alpha0,
        alpha_reli: vec![row.alphai; n],
        ratio0: row.ratio0,
        ratioi: vec![row.ratioi; n],
        charging: vec![],
        josephson: vec![],
        zeta: vec![],
    };
    gate_model_bridge(&g, n)
}

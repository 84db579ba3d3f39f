//! Closed-form block propagators and their assembly into register propagators.

use crate::error::{Error, Result};
use crate::linalg::{c, identity, Operator, I};
use crate::model::{
    interaction_frame_energies, lab_hamiltonian, rwa_warning, subspace_detuning, DeviceModel, DriveSpec,
    Quadrature, SubspaceLabel,
};

use super::ode::{integrate, OdeOptions};

/// `cos(vt) 1 - i (sigma . v / v) sin(vt)` with `v = (Omega cos theta, Omega sin theta, delta)`.
///
/// At `v = 0` the ratio `sin(vt)/v` is replaced by its series so the result is the identity.
pub fn analytic_subspace_propagator(delta: f64, rabi: f64, theta: f64, t: f64) -> Operator {
    let v = (rabi * rabi + delta * delta).sqrt();
    let vt = v * t;
    let sinc_t = if vt.abs() < 1e-6 {
        t * (1.0 - vt * vt / 6.0 + vt.powi(4) / 120.0)
    } else {
        vt.sin() / v
    };
    let cs = vt.cos();
    let (vx, vy, vz) = (rabi * theta.cos(), rabi * theta.sin(), delta);
    // sigma . v = [[vz, vx - i vy], [vx + i vy, -vz]]
    let d0 = c(cs, -vz * sinc_t);
    let d1 = c(cs, vz * sinc_t);
    let off01 = -I * c(vx, -vy) * sinc_t;
    let off10 = -I * c(vx, vy) * sinc_t;
    Operator::from_row_slice(2, 2, &[d0, off01, off10, d1])
}

/// Rotating-frame propagator of the full register.
///
/// Two-quadrature drives of qubit 0 use the closed-form blocks directly.
/// One-quadrature drives are integrated numerically in the same frame.
pub fn driven_propagator(dev: &DeviceModel, drive: &DriveSpec, t: f64) -> Result<Operator> {
    let tg = drive.target_zero().ok_or(Error::UnsupportedDrive)?;
    match drive.quadrature() {
        Quadrature::Two => {
            let n = dev.n_controls();
            let mut u = Operator::zeros(dev.dim(), dev.dim());
            for x in SubspaceLabel::all(n) {
                let delta = subspace_detuning(dev, tg.detuning, x);
                let b = analytic_subspace_propagator(delta, drive.rabi(), tg.phase, t);
                let (a0, a1) = x.block_indices();
                u[(a0, a0)] = b[(0, 0)];
                u[(a0, a1)] = b[(0, 1)];
                u[(a1, a0)] = b[(1, 0)];
                u[(a1, a1)] = b[(1, 1)];
            }
            Ok(u)
        }
        Quadrature::One => {
            rwa_warning(dev, drive);
            frame_integrated_propagator(dev, drive, t)
        }
    }
}

/// Interaction-frame Hamiltonian `U_int H(t) U_int^dag - G` at time `t`.
pub fn interaction_frame_hamiltonian(dev: &DeviceModel, drive: &DriveSpec, t: f64) -> Result<Operator> {
    let g = interaction_frame_energies(dev, drive)?;
    let h = lab_hamiltonian(dev, drive, t)?;
    let d = h.nrows();
    Ok(Operator::from_fn(d, d, |i, j| {
        let v = h[(i, j)] * (I * (g[i] - g[j]) * t).exp();
        if i == j {
            v - c(g[i], 0.0)
        } else {
            v
        }
    }))
}

fn frame_integrated_propagator(dev: &DeviceModel, drive: &DriveSpec, t: f64) -> Result<Operator> {
    if t == 0.0 {
        return Ok(identity(dev.dim()));
    }
    let opts = OdeOptions {
        rtol: 1e-10,
        atol: 1e-12,
        ..Default::default()
    };
    let (sign, span) = if t < 0.0 { (-1.0, -t) } else { (1.0, t) };
    let mut failure = None;
    let out = integrate(
        |s, u| match interaction_frame_hamiltonian(dev, drive, sign * s) {
            Ok(h) => (h * u) * (-I * sign),
            Err(e) => {
                failure.get_or_insert(e);
                u * c(0.0, 0.0)
            }
        },
        &identity(dev.dim()),
        0.0,
        &[span],
        &opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(out.into_iter().next().unwrap())
}

/// Lab-frame propagator `U_int(t)^dag U_rot(t)`, with `U_int(t) = exp(i G t)`.
pub fn lab_frame_propagator(dev: &DeviceModel, drive: &DriveSpec, t: f64) -> Result<Operator> {
    let g = interaction_frame_energies(dev, drive)?;
    let mut u = driven_propagator(dev, drive, t)?;
    for (i, mut row) in u.row_iter_mut().enumerate() {
        row *= (-I * g[i] * t).exp();
    }
    Ok(u)
}

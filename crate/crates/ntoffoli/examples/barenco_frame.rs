//! Two-qubit case: the lab-frame propagator, moved into the drive frame, matches
//! the closed-form controlled rotation.

use std::f64::consts::PI;

use ntoffoli::evolution::lab_frame_propagator;
use ntoffoli::gates::barenco;
use ntoffoli::linalg::{max_abs_diff, I};
use ntoffoli::model::{interaction_frame_energies, DeviceModel, DriveSpec};

fn main() -> ntoffoli::Result<()> {
    let (rabi, t) = (1.0, 2.0);
    // J chosen so the off-resonant block returns to identity at t
    let v = 2.0 * PI * 4.0 / t;
    let j = (v * v - rabi * rabi).sqrt();
    let theta = 0.4;
    let dev = DeviceModel::new(vec![1.3, 0.7], vec![vec![0.0, j], vec![j, 0.0]])?;
    let drive = DriveSpec::on_target(rabi, -j, theta)?;
    let mut u = lab_frame_propagator(&dev, &drive, t)?;
    let g = interaction_frame_energies(&dev, &drive)?;
    for b in 0..4 {
        let mut row = u.row_mut(b);
        row *= (I * g[b] * t).exp();
    }
    let want = barenco(0.0, rabi, theta, t);
    println!("max |U - U_barenco| = {:.3e}", max_abs_diff(&u, &want));
    Ok(())
}

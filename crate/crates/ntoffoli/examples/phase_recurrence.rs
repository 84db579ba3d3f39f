//! Shortest time after which the bare Ising evolution is a global phase.

use ntoffoli::evolution::phase_recurrence_time;
use ntoffoli::model::DeviceModel;
use ntoffoli::units::{MHZ, NS};

fn main() -> ntoffoli::Result<()> {
    for n in 1..=4 {
        let dev = DeviceModel::uniform_star(n, 40.0 * MHZ)?;
        println!("n = {n}: T_rec = {:.3} ns", phase_recurrence_time(&dev)? / NS);
    }
    let dev = DeviceModel::star(vec![0.0, 0.0, 0.0], &[30.0 * MHZ, 45.0 * MHZ])?;
    println!("J = 30, 45 MHz: T_rec = {:.3} ns", phase_recurrence_time(&dev)? / NS);
    Ok(())
}

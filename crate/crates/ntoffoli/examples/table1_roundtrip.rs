//! Re-derive the bundled circuit table and map each row onto the Ising model.

use ntoffoli::synth::{derive_gate_params, device_from_row, golden_table};
use ntoffoli::units::GHZ;

fn main() -> ntoffoli::Result<()> {
    println!("{:>3} {:>10} {:>10} {:>10} {:>10} {:>8}", "row", "omega0", "printed", "Jz", "printed", "swap");
    for row in golden_table() {
        let g = derive_gate_params(&row.circuit(2)?)?;
        let (_, res) = device_from_row(&row, 2)?;
        println!(
            "{:>3} {:>10.3} {:>10} {:>10.1} {:>10} {:>8.4}",
            row.index,
            g.omega0 / GHZ,
            row.omega0,
            g.jz[0] / GHZ * 1e3,
            row.jz,
            res.swap_ratio.iter().copied().fold(0.0, f64::max)
        );
    }
    Ok(())
}

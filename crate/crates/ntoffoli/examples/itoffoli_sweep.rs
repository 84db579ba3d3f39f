//! Simulated i-Toffoli with two controls across a J/Omega grid (noiseless).

use ntoffoli::driven::itoffoli_gate;
use ntoffoli::fidelity::FidelityReport;
use ntoffoli::units::{MHZ, NS};

fn main() -> ntoffoli::Result<()> {
    let j = 40.0 * MHZ;
    println!("{:>6} {:>10} {:>12} {:>12}", "J/Om", "T [ns]", "simulated", "closed form");
    for ratio in (4..=20).map(f64::from) {
        let (gate, goal) = itoffoli_gate(2, j, ratio, 0.0)?;
        let f = gate.process_fidelity(&goal, None)?;
        let cf = FidelityReport::closed_form(2, ratio).process_fidelity;
        println!("{ratio:>6} {:>10.2} {f:>12.8} {cf:>12.8}", gate.duration() / NS);
    }
    Ok(())
}

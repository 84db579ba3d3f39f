//! Process fidelity under amplitude damping and dephasing for a few coherence times.

use ntoffoli::driven::itoffoli_gate;
use ntoffoli::evolution::NoiseSpec;
use ntoffoli::units::{MHZ, US};

fn main() -> ntoffoli::Result<()> {
    let (gate, goal) = itoffoli_gate(2, 40.0 * MHZ, 8.0, 0.0)?;
    println!("noiseless: {:.6}", gate.process_fidelity(&goal, None)?);
    for t in [10.0, 30.0, 100.0] {
        let noise = NoiseSpec::new(t * US, t * US)?;
        println!("T1 = T2 = {t:>5} us: {:.6}", gate.process_fidelity(&goal, Some(&noise))?);
    }
    Ok(())
}

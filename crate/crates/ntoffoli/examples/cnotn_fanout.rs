//! CNOT^n (one control, n targets) against the i-Toffoli with n controls.

use ntoffoli::driven::{cnotn_gate, itoffoli_gate};
use ntoffoli::gates::conventional_cnot_count;
use ntoffoli::units::MHZ;

fn main() -> ntoffoli::Result<()> {
    let j = 40.0 * MHZ;
    println!("{:>3} {:>12} {:>12} {:>14}", "n", "i-Toffoli", "CNOT^n", "2-qubit CNOTs");
    for n in 1..=4 {
        let (it, it_goal) = itoffoli_gate(n, j, 8.0, 0.0)?;
        let (cn, cn_goal) = cnotn_gate(n, j, 8.0, 0.0)?;
        println!(
            "{n:>3} {:>12.6} {:>12.6} {:>14}",
            it.process_fidelity(&it_goal, None)?,
            cn.process_fidelity(&cn_goal, None)?,
            conventional_cnot_count(&[n])
        );
    }
    Ok(())
}

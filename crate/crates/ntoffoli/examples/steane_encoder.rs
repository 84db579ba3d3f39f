//! Steane encoder from four single-step windows; ideal gates then one noisy point.

use ntoffoli::evolution::NoiseSpec;
use ntoffoli::qec::{steane_logical_states, steane_schedule, GateMode, SteaneEncoder};
use ntoffoli::units::{MHZ, US};

fn main() -> ntoffoli::Result<()> {
    let s = steane_schedule();
    println!("windows: {} (two-qubit CNOT windows: {})", s.windows(), s.conventional_windows());
    let ideal = SteaneEncoder::new(GateMode::Ideal, None)?;
    println!("ideal average fidelity {:.10}", ideal.average_fidelity());
    let pair = steane_logical_states();
    println!("<0_L|1_L> = {:.2e}", (pair.zero_l.adjoint() * &pair.one_l)[(0, 0)].norm());

    let noise = NoiseSpec::new(30.0 * US, 30.0 * US)?;
    let driven = GateMode::Driven { coupling: 40.0 * MHZ, ratio: 8.0 };
    let enc = SteaneEncoder::new(driven, Some(&noise))?;
    println!("J/Omega = 8 with noise: {:.6}", enc.average_fidelity());
    Ok(())
}

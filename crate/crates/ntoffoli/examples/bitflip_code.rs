//! Three-qubit bit-flip code built from CNOT^2 encode and i-Toffoli correction.

use ntoffoli::evolution::NoiseSpec;
use ntoffoli::qec::{BitFlipCode, GateMode};
use ntoffoli::units::{MHZ, US};

fn main() -> ntoffoli::Result<()> {
    let noise = NoiseSpec::new(30.0 * US, 30.0 * US)?;
    let driven = GateMode::Driven { coupling: 40.0 * MHZ, ratio: 8.0 };
    for (label, site) in [("none", None), ("q1", Some(0)), ("q2", Some(1)), ("q3", Some(2))] {
        let ideal = BitFlipCode::new(GateMode::Ideal, None, site)?.average_fidelity();
        let real = BitFlipCode::new(driven, Some(&noise), site)?.average_fidelity();
        println!("flip {label:>4}: ideal {ideal:.6}  driven+noise {real:.6}");
    }
    Ok(())
}

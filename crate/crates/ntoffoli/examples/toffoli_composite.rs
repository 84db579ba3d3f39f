//! Two i-Toffoli windows between Hadamards on a spare control give an ordinary
//! Toffoli with one control fewer.

use ntoffoli::gates::{ideal_itoffoli, multi_controlled_x, operator_schmidt_rank, toffoli_composite};
use ntoffoli::linalg::max_abs_diff;

fn main() -> ntoffoli::Result<()> {
    for n in [2, 3] {
        let u = toffoli_composite(n)?;
        let dev = max_abs_diff(&u, &multi_controlled_x(n - 1));
        println!("n = {n}: |composite - Toffoli| = {dev:.2e}");
    }
    // the two-qubit member is a controlled-iX: operator Schmidt rank 2
    println!("Schmidt rank (n = 1): {}", operator_schmidt_rank(&ideal_itoffoli(1, 0.0), 1e-10)?);
    Ok(())
}

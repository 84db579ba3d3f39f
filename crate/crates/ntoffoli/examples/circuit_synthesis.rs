//! Search for superconducting circuit parameters that realise the Ising model.

use ntoffoli::synth::{optimize_circuit, render_table, ConstraintSet, OptimizerOptions, TableRow};

fn main() -> ntoffoli::Result<()> {
    let constraints = ConstraintSet::default();
    let opts = OptimizerOptions { seeds: 12, rng_seed: 3, ..OptimizerOptions::default() };
    let res = optimize_circuit(&constraints, &opts)?;
    println!("{} feasible of {} starts", res.candidates.len(), res.starts);
    let rows: Vec<TableRow> = res
        .candidates
        .iter()
        .take(5)
        .enumerate()
        .map(|(k, c)| TableRow::from_params(k + 1, &c.params, &c.gate))
        .collect();
    print!("{}", render_table(&rows, |v| format!("{v:.3}")));
    Ok(())
}

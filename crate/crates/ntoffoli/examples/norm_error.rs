//! Operator-norm error per subspace; the worst subspace does not depend on n.

use ntoffoli::fidelity::{norm_error_squared_closed_form, operator_norm_error_over_subspaces};

fn main() {
    for ratio in [4.0, 8.0, 16.0] {
        let row: Vec<String> = (2..=6)
            .map(|n| format!("{:.6}", operator_norm_error_over_subspaces(n, ratio, 0.0)))
            .collect();
        println!(
            "J/Omega = {ratio:>4}: n=2..6 [{}], closed form {:.6}",
            row.join(" "),
            norm_error_squared_closed_form(ratio).sqrt()
        );
    }
}

//! Closed-form trace and process fidelity of the uniform i-Toffoli versus J/Omega.

use ntoffoli::fidelity::FidelityReport;

fn main() {
    println!("{:>3} {:>6} {:>12} {:>12} {:>10}", "n", "J/Om", "F_trace", "F_process", "norm_err");
    for n in 1..=5 {
        for ratio in [4.0, 6.0, 8.0, 12.0, 16.0, 20.0] {
            let r = FidelityReport::closed_form(n, ratio);
            println!(
                "{n:>3} {ratio:>6} {:>12.8} {:>12.8} {:>10.6}",
                r.trace_fidelity, r.process_fidelity, r.operator_norm_error
            );
        }
    }
}

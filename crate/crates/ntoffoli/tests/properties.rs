use proptest::prelude::*;

use ntoffoli::experiments::format_sig;
use ntoffoli::fidelity::{
    norm_error_squared_closed_form, per_subspace_norm, process_fidelity_from_trace, subspace_trace_fidelity,
    weighted_trace_fidelity,
};
use ntoffoli::gates::ideal_itoffoli;
use ntoffoli::linalg::unitarity_deviation;
use ntoffoli::synth::{amplitude_for_rabi, capacitance_matrix, derive_drive, derive_gate_params, CircuitParams, CHARGING_UNIT};
use ntoffoli::units::GHZ;

fn circuit() -> impl Strategy<Value = CircuitParams> {
    (
        1usize..=3,
        0.5f64..40.0,
        0.5f64..40.0,
        0.5f64..40.0,
        5.0f64..80.0,
        5.0f64..80.0,
        0.01f64..2.0,
    )
        .prop_map(|(n, e0, ei, ez, c0, ci, cz)| {
            CircuitParams::symmetric(n, e0 * GHZ, ei * GHZ, ez * GHZ, c0, ci, cz).unwrap()
        })
}

proptest! {
    #[test]
    fn capacitance_matrix_is_symmetric_positive(p in circuit()) {
        let k = capacitance_matrix(&p);
        prop_assert_eq!(&k, &k.transpose());
        let eig = k.symmetric_eigen().eigenvalues;
        prop_assert!(eig.iter().all(|&l| l > 0.0));
    }

    #[test]
    fn charging_energy_matches_inverse_capacitance(p in circuit()) {
        let g = derive_gate_params(&p).unwrap();
        let kinv = capacitance_matrix(&p).try_inverse().unwrap();
        for (i, ec) in g.charging.iter().enumerate() {
            let want = CHARGING_UNIT * kinv[(i, i)];
            prop_assert!((ec - want).abs() <= 1e-10 * want.abs());
        }
    }

    #[test]
    fn drive_is_linear_in_amplitude(p in circuit(), a in 1e-4f64..1e-1, wd in 1.0f64..40.0) {
        let wd = wd * GHZ;
        let (r1, _) = derive_drive(&p, a, wd, 0.0, 0).unwrap();
        let (r2, _) = derive_drive(&p, 2.0 * a, wd, 0.0, 0).unwrap();
        prop_assert!((r2 - 2.0 * r1).abs() <= 1e-12 * r1.abs());
        let back = amplitude_for_rabi(&p, r1, wd, 0).unwrap();
        prop_assert!((back - a).abs() <= 1e-10 * a);
    }

    #[test]
    fn subspace_fidelity_bounded(g in 0.01f64..100.0) {
        let f = subspace_trace_fidelity(g);
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn norm_error_closed_form_agrees(g in 0.1f64..100.0, th in -3.0f64..3.0) {
        let e = per_subspace_norm(g, th);
        prop_assert!((e * e - norm_error_squared_closed_form(g)).abs() < 1e-10);
    }

    #[test]
    fn process_fidelity_below_trace_fidelity(n in 1usize..6, r in 1.0f64..30.0) {
        let ft = weighted_trace_fidelity(n, r);
        let fp = process_fidelity_from_trace(ft, 1 << (n + 1));
        prop_assert!(fp <= ft + 1e-15 && fp >= 0.0);
    }

    #[test]
    fn ideal_itoffoli_is_unitary(n in 1usize..5, th in -3.0f64..3.0) {
        prop_assert!(unitarity_deviation(&ideal_itoffoli(n, th)) < 1e-12);
    }

    #[test]
    fn format_sig_roundtrips_to_twelve_digits(v in -1e9f64..1e9) {
        let s = format_sig(v, 12);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - v).abs() <= 1e-11 * v.abs().max(1e-300));
        let mant: String = s.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).collect();
        prop_assert!(mant.trim_start_matches('0').len() <= 12);
    }
}

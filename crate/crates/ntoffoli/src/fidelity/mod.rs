//! Gate-quality metrics: closed-form subspace fidelities, trace and process
//! fidelities, and the worst-case operator-norm error.

pub mod channel;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use nalgebra::SVD;
use serde::Serialize;

pub use channel::{
    entanglement_fidelity, haar_average, haar_state, process_fidelity_channel, process_fidelity_monte_carlo,
    unitary_process_fidelity, Channel, CompletelyDepolarizing, MonteCarloEstimate, Sequence, SuperOperator,
    UnitaryChannel, DEFAULT_MC_SAMPLES,
};

use crate::linalg::{c, Operator, I};

/// Overlap `(1/2)|tr(U_q U_goal^dag)|` of a detuned block after `T = pi/(2 Omega)`
/// with free precession, as a function of `gamma = delta / Omega = J (n - q) / Omega`.
///
/// The resonant value `gamma = 0` evaluates to 0: it compares an inversion with
/// the identity. The weighted fidelity scores that block separately.
pub fn subspace_trace_fidelity(gamma: f64) -> f64 {
    let s = (1.0 + gamma * gamma).sqrt();
    let a = FRAC_PI_2 * gamma;
    let b = FRAC_PI_2 * s;
    a.cos() * b.cos() + (gamma / s) * a.sin() * b.sin()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `F_tr = (1/2^{n+1}) sum_q 2 F_q C(n, q)` for uniform coupling with the all-ones
/// subspace resonant; the resonant term is an exact inversion and counts as 1.
pub fn weighted_trace_fidelity(n: usize, ratio: f64) -> f64 {
    let dim = (1u64 << (n + 1)) as f64;
    let mut sum = 0.0;
    for q in 0..=n {
        let fq = if q == n {
            1.0
        } else {
            subspace_trace_fidelity(ratio * (n - q) as f64)
        };
        sum += 2.0 * fq * binomial(n, q);
    }
    sum / dim
}

/// `(d F_tr^2 + 1) / (d + 1)`; exact when the subspace trace phases are aligned.
pub fn process_fidelity_from_trace(f_tr: f64, dim: usize) -> f64 {
    let d = dim as f64;
    (d * f_tr * f_tr + 1.0) / (d + 1.0)
}

/// Difference `U_q - U_goal,q` at `T = pi/(2 Omega)` written as
/// `a 1 + i b sz - i c (n . sigma)` with `n = (cos theta, sin theta, 0)`.
pub fn subspace_difference(gamma: f64, theta: f64) -> Operator {
    let s = (1.0 + gamma * gamma).sqrt();
    let (ca, sa) = ((FRAC_PI_2 * gamma).cos(), (FRAC_PI_2 * gamma).sin());
    let (cb, sb) = ((FRAC_PI_2 * s).cos(), (FRAC_PI_2 * s).sin());
    let a = cb - ca;
    let b = sa - (gamma / s) * sb;
    let cc = sb / s;
    let nsig = Operator::from_row_slice(
        2,
        2,
        &[c(0.0, 0.0), c(theta.cos(), -theta.sin()), c(theta.cos(), theta.sin()), c(0.0, 0.0)],
    );
    let sz = Operator::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    Operator::identity(2, 2) * c(a, 0.0) + sz * (I * b) - nsig * (I * cc)
}

/// Largest singular value of [`subspace_difference`].
pub fn per_subspace_norm(gamma: f64, theta: f64) -> f64 {
    let svd = SVD::new(subspace_difference(gamma, theta), false, false);
    svd.singular_values.iter().cloned().fold(0.0, f64::max)
}

/// Closed-form square of the per-subspace norm error.
pub fn norm_error_squared_closed_form(gamma: f64) -> f64 {
    let s = (1.0 + gamma * gamma).sqrt();
    2.0 - 2.0 * (FRAC_PI_2 * gamma).cos() * (FRAC_PI_2 * s).cos()
        - 2.0 * (gamma / s) * (FRAC_PI_2 * gamma).sin() * (FRAC_PI_2 * s).sin()
}

/// Worst-case error of the gate, set by the least detuned non-resonant block (`q = n - 1`).
pub fn operator_norm_error(ratio: f64) -> f64 {
    per_subspace_norm(ratio, 0.0)
}

/// Maximum of the per-subspace norm over all non-resonant Hamming weights.
pub fn operator_norm_error_over_subspaces(n: usize, ratio: f64, theta: f64) -> f64 {
    (0..n)
        .map(|q| per_subspace_norm(ratio * (n - q) as f64, theta))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct FidelityReport {
    pub trace_fidelity: f64,
    pub process_fidelity: f64,
    pub per_subspace: BTreeMap<usize, f64>,
    pub operator_norm_error: f64,
}

impl FidelityReport {
    /// Closed-form report for the uniform-coupling i-Toffoli with `n` controls.
    pub fn closed_form(n: usize, ratio: f64) -> Self {
        let per_subspace = (0..=n)
            .map(|q| {
                let f = if q == n {
                    1.0
                } else {
                    subspace_trace_fidelity(ratio * (n - q) as f64)
                };
                (q, f)
            })
            .collect();
        let trace_fidelity = weighted_trace_fidelity(n, ratio);
        Self {
            trace_fidelity,
            process_fidelity: process_fidelity_from_trace(trace_fidelity, 1 << (n + 1)),
            per_subspace,
            operator_norm_error: operator_norm_error_over_subspaces(n, ratio, 0.0),
        }
    }
}

//! Dormand-Prince 5(4) with embedded error control, on complex matrices.

use crate::error::{Error, Result};
use crate::linalg::{c, Operator};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Upper bound on the step size (`None`: unbounded).
    pub max_step: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-11,
            max_steps: 50_000_000,
            max_step: None,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn lin(terms: &[(f64, &Operator)]) -> Operator {
    let mut out = terms[0].1 * c(terms[0].0, 0.0);
    for (w, m) in &terms[1..] {
        if *w != 0.0 {
            out.zip_apply(m, |o, x| *o += x * *w);
        }
    }
    out
}

fn max_abs(m: &Operator) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Integrates `dy/dt = f(t, y)` from `t0` and returns `y` at each of `outputs`
/// (ascending, all `>= t0`). Steps are clipped to land on every output time.
pub fn integrate<F>(mut f: F, y0: &Operator, t0: f64, outputs: &[f64], opts: &OdeOptions) -> Result<Vec<Operator>>
where
    F: FnMut(f64, &Operator) -> Operator,
{
    if outputs.windows(2).any(|w| w[1] < w[0]) || outputs.first().is_some_and(|&t| t < t0) {
        return Err(Error::Integration("output times must be ascending and >= t0".into()));
    }
    let mut results = Vec::with_capacity(outputs.len());
    let mut t = t0;
    let mut y = y0.clone();
    let mut k1 = f(t, &y);
    let t_final = outputs.last().copied().unwrap_or(t0);
    let span = (t_final - t0).abs();
    let scale0 = max_abs(&y) + opts.atol;
    let rate0 = max_abs(&k1);
    let mut h = if rate0 > 0.0 {
        (0.01 * scale0 / rate0).min(span.max(f64::MIN_POSITIVE))
    } else {
        span.max(f64::MIN_POSITIVE)
    };
    if let Some(hm) = opts.max_step {
        h = h.min(hm);
    }
    let mut steps = 0usize;

    for &target in outputs {
        while t < target {
            if steps >= opts.max_steps {
                return Err(Error::Integration(format!("step limit {} reached at t={t:e}", opts.max_steps)));
            }
            let mut hh = h.min(target - t);
            let last = hh >= target - t;
            if last {
                hh = target - t;
            }
            let k2 = f(t + C2 * hh, &lin(&[(1.0, &y), (hh * A21, &k1)]));
            let k3 = f(t + C3 * hh, &lin(&[(1.0, &y), (hh * A31, &k1), (hh * A32, &k2)]));
            let k4 = f(
                t + C4 * hh,
                &lin(&[(1.0, &y), (hh * A41, &k1), (hh * A42, &k2), (hh * A43, &k3)]),
            );
            let k5 = f(
                t + C5 * hh,
                &lin(&[(1.0, &y), (hh * A51, &k1), (hh * A52, &k2), (hh * A53, &k3), (hh * A54, &k4)]),
            );
            let k6 = f(
                t + hh,
                &lin(&[
                    (1.0, &y),
                    (hh * A61, &k1),
                    (hh * A62, &k2),
                    (hh * A63, &k3),
                    (hh * A64, &k4),
                    (hh * A65, &k5),
                ]),
            );
            let y_new = lin(&[
                (1.0, &y),
                (hh * B1, &k1),
                (hh * B3, &k3),
                (hh * B4, &k4),
                (hh * B5, &k5),
                (hh * B6, &k6),
            ]);
            let k7 = f(t + hh, &y_new);
            let err = lin(&[
                (hh * E1, &k1),
                (hh * E3, &k3),
                (hh * E4, &k4),
                (hh * E5, &k5),
                (hh * E6, &k6),
                (hh * E7, &k7),
            ]);
            let mut ratio: f64 = 0.0;
            for ((e, a), b) in err.iter().zip(y.iter()).zip(y_new.iter()) {
                let sc = opts.atol + opts.rtol * a.norm().max(b.norm());
                ratio = ratio.max(e.norm() / sc);
            }
            steps += 1;
            if !ratio.is_finite() {
                return Err(Error::Integration(format!("non-finite error estimate at t={t:e}")));
            }
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            if ratio <= 1.0 {
                t = if last { target } else { t + hh };
                y = y_new;
                k1 = k7;
                // a clipped final step says nothing about the natural step size
                if !last || factor < 1.0 {
                    h = hh * factor;
                }
            } else {
                h = hh * factor.min(1.0);
            }
            if let Some(hm) = opts.max_step {
                h = h.min(hm);
            }
            if h < 1e-14 * t.abs().max(span) {
                return Err(Error::Integration(format!("step size underflow at t={t:e}")));
            }
        }
        results.push(y.clone());
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitary_exp, I};

    #[test]
    fn scalar_exponential() {
        let y0 = Operator::from_element(1, 1, c(1.0, 0.0));
        let out = integrate(|_, y| y * c(-2.0, 0.0), &y0, 0.0, &[0.5, 1.0], &OdeOptions::default()).unwrap();
        assert!((out[0][(0, 0)].re - (-1.0f64).exp()).abs() < 1e-8);
        assert!((out[1][(0, 0)].re - (-2.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn schrodinger_matches_exponential() {
        let h = Operator::from_row_slice(2, 2, &[c(0.3, 0.0), c(1.0, -0.5), c(1.0, 0.5), c(-0.7, 0.0)]);
        let y0 = Operator::identity(2, 2);
        let opts = OdeOptions {
            rtol: 1e-11,
            atol: 1e-13,
            ..Default::default()
        };
        let out = integrate(|_, u| (&h * u) * -I, &y0, 0.0, &[3.0], &opts).unwrap();
        assert!(max_abs_diff(&out[0], &unitary_exp(&h, 3.0).unwrap()) < 1e-9);
    }

    #[test]
    fn time_dependent_rhs() {
        // dy/dt = cos(t) y  =>  y = exp(sin t)
        let y0 = Operator::from_element(1, 1, c(1.0, 0.0));
        let out = integrate(|t, y| y * c(t.cos(), 0.0), &y0, 0.0, &[4.0], &OdeOptions::default()).unwrap();
        assert!((out[0][(0, 0)].re - 4.0f64.sin().exp()).abs() < 1e-8);
    }

    #[test]
    fn rejects_unordered_outputs() {
        let y0 = Operator::from_element(1, 1, c(1.0, 0.0));
        assert!(integrate(|_, y| y.clone(), &y0, 0.0, &[1.0, 0.5], &OdeOptions::default()).is_err());
    }
}

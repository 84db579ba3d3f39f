//! Quantum channels and channel-based average gate fidelity.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{c, Operator, StateVector, C64, ONE, ZERO};

/// Linear map on `dim x dim` matrices.
pub trait Channel: Send + Sync {
    fn dim(&self) -> usize;
    fn apply(&self, rho: &Operator) -> Operator;
}

impl<T: Channel + ?Sized> Channel for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, rho: &Operator) -> Operator {
        (**self).apply(rho)
    }
}

/// Row-major vectorization, `vec(rho)[i*d + j] = rho[i,j]`.
pub fn vectorize(rho: &Operator) -> Vec<C64> {
    let d = rho.nrows();
    let mut v = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            v.push(rho[(i, j)]);
        }
    }
    v
}

pub fn unvectorize(v: &[C64], d: usize) -> Operator {
    Operator::from_fn(d, d, |i, j| v[i * d + j])
}

/// `rho -> U rho U^dagger`.
#[derive(Debug, Clone)]
pub struct UnitaryChannel(pub Operator);

impl Channel for UnitaryChannel {
    fn dim(&self) -> usize {
        self.0.nrows()
    }
    fn apply(&self, rho: &Operator) -> Operator {
        &self.0 * rho * self.0.adjoint()
    }
}

/// Dense superoperator acting on row-major vectorized matrices.
#[derive(Debug, Clone)]
pub struct SuperOperator {
    dim: usize,
    matrix: DMatrix<C64>,
}

impl SuperOperator {
    pub fn new(dim: usize, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != dim * dim || matrix.ncols() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: matrix.nrows(),
            });
        }
        Ok(Self { dim, matrix })
    }

    /// Tabulates any channel by applying it to every matrix unit.
    pub fn from_channel<C: Channel + ?Sized>(ch: &C) -> Self {
        let d = ch.dim();
        let mut m = DMatrix::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                let mut e = Operator::zeros(d, d);
                e[(a, b)] = ONE;
                let out = vectorize(&ch.apply(&e));
                m.column_mut(a * d + b).copy_from_slice(&out);
            }
        }
        Self { dim: d, matrix: m }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &SuperOperator) -> SuperOperator {
        SuperOperator {
            dim: self.dim,
            matrix: &self.matrix * &first.matrix,
        }
    }
}

impl Channel for SuperOperator {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, rho: &Operator) -> Operator {
        let v = nalgebra::DVector::from_vec(vectorize(rho));
        let out = &self.matrix * v;
        unvectorize(out.as_slice(), self.dim)
    }
}

/// `rho -> tr(rho) I / d`.
#[derive(Debug, Clone, Copy)]
pub struct CompletelyDepolarizing {
    pub dim: usize,
}

impl Channel for CompletelyDepolarizing {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, rho: &Operator) -> Operator {
        Operator::identity(self.dim, self.dim) * (rho.trace() / self.dim as f64)
    }
}

/// Channels applied left to right.
pub struct Sequence(pub Vec<Box<dyn Channel>>);

impl Channel for Sequence {
    fn dim(&self) -> usize {
        self.0.first().map(|c| c.dim()).unwrap_or(0)
    }
    fn apply(&self, rho: &Operator) -> Operator {
        self.0.iter().fold(rho.clone(), |r, ch| ch.apply(&r))
    }
}

const TRACE_TOL: f64 = 1e-6;

/// Entanglement fidelity `F_e = (1/d^2) sum_{mn} <m|U^dag C(|m><n|) U|n>`.
///
/// Uses `C(|n><m|) = C(|m><n|)^dag`, so only `m <= n` inputs are evaluated.
pub fn entanglement_fidelity<C: Channel + ?Sized>(channel: &C, goal: &Operator) -> Result<f64> {
    let d = channel.dim();
    if goal.nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: goal.nrows(),
        });
    }
    let cols: Vec<StateVector> = (0..d).map(|k| goal.column(k).into_owned()).collect();
    let per_row: Vec<Result<f64>> = (0..d)
        .into_par_iter()
        .map(|m| {
            let mut acc = 0.0;
            for n in m..d {
                let mut e = Operator::zeros(d, d);
                e[(m, n)] = ONE;
                let out = channel.apply(&e);
                let tr = out.trace();
                let want = if m == n { ONE } else { ZERO };
                let dev = (tr - want).norm();
                if dev > TRACE_TOL {
                    return Err(Error::NotTracePreserving { deviation: dev });
                }
                let val = (cols[m].adjoint() * &out * &cols[n])[(0, 0)];
                acc += if m == n { val.re } else { 2.0 * val.re };
            }
            Ok(acc)
        })
        .collect();
    let mut total = 0.0;
    for r in per_row {
        total += r?;
    }
    Ok(total / (d * d) as f64)
}

/// Average gate fidelity `(d F_e + 1)/(d + 1)`.
pub fn process_fidelity_channel<C: Channel + ?Sized>(channel: &C, goal: &Operator) -> Result<f64> {
    let d = channel.dim() as f64;
    let fe = entanglement_fidelity(channel, goal)?;
    Ok((d * fe + 1.0) / (d + 1.0))
}

/// Average gate fidelity of a unitary against a goal, from the global trace.
pub fn unitary_process_fidelity(u: &Operator, goal: &Operator) -> f64 {
    let d = u.nrows() as f64;
    let tr = (goal.adjoint() * u).trace();
    let fe = tr.norm_sqr() / (d * d);
    (d * fe + 1.0) / (d + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
}

impl MonteCarloEstimate {
    pub fn agrees_with(&self, value: f64, sigmas: f64) -> bool {
        (self.mean - value).abs() <= sigmas * self.std_err.max(f64::EPSILON)
    }
}

pub const DEFAULT_MC_SAMPLES: usize = 20_000;
const MC_CHUNK: usize = 256;

/// Haar-random pure state from normalized complex Gaussians.
pub fn haar_state<R: rand::Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let v = StateVector::from_fn(dim, |_, _| {
        c(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let n = v.norm();
    v / c(n, 0.0)
}

/// Mean and standard error of `f` over Haar states. Samples are split into fixed
/// chunks, each drawn from its own ChaCha stream, so the result does not depend
/// on the worker count.
pub fn haar_average<F>(dim: usize, samples: usize, seed: u64, f: F) -> MonteCarloEstimate
where
    F: Fn(&StateVector) -> f64 + Sync,
{
    let chunks = samples.div_ceil(MC_CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let count = MC_CHUNK.min(samples - k * MC_CHUNK);
            let mut s = 0.0;
            let mut s2 = 0.0;
            for _ in 0..count {
                let psi = haar_state(dim, &mut rng);
                let v = f(&psi);
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = partial.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples as f64;
    let mean = s / n;
    let var = if samples > 1 {
        ((s2 - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    MonteCarloEstimate {
        mean,
        std_err: (var / n).sqrt(),
        samples,
    }
}

/// Monte Carlo estimate of the average gate fidelity `E_psi <psi|U^dag C(psi) U|psi>`.
pub fn process_fidelity_monte_carlo<C: Channel + ?Sized>(
    channel: &C,
    goal: &Operator,
    samples: usize,
    seed: u64,
) -> MonteCarloEstimate {
    let d = channel.dim();
    haar_average(d, samples, seed, |psi| {
        let rho = psi * psi.adjoint();
        let out = channel.apply(&rho);
        let phi = goal * psi;
        (phi.adjoint() * out * phi)[(0, 0)].re
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hadamard, identity, kron, max_abs_diff, sigma_x, I};

    #[test]
    fn goal_conjugation_is_perfect() {
        let u = kron(&hadamard(), &sigma_x());
        let ch = UnitaryChannel(u.clone());
        assert!((process_fidelity_channel(&ch, &u).unwrap() - 1.0).abs() < 1e-14);
        let phased = UnitaryChannel(&u * (I * 0.7).exp());
        assert!((process_fidelity_channel(&phased, &u).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn depolarizing_qubit_gives_half() {
        let ch = CompletelyDepolarizing { dim: 2 };
        let f = process_fidelity_channel(&ch, &identity(2)).unwrap();
        assert_eq!(f, 0.5);
        let mc = process_fidelity_monte_carlo(&ch, &identity(2), 2000, 1);
        assert!((mc.mean - 0.5).abs() < 1e-12);
    }

    #[test]
    fn non_trace_preserving_rejected() {
        let ch = UnitaryChannel(identity(2) * c(0.5, 0.0));
        assert!(matches!(
            process_fidelity_channel(&ch, &identity(2)),
            Err(Error::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn superoperator_roundtrip() {
        let u = kron(&hadamard(), &sigma_x());
        let ch = UnitaryChannel(u);
        let s = SuperOperator::from_channel(&ch);
        let rho = Operator::from_fn(4, 4, |i, j| c((i + 2 * j) as f64, i as f64 - j as f64));
        assert!(max_abs_diff(&s.apply(&rho), &ch.apply(&rho)) < 1e-14);
        let twice = s.compose(&s);
        assert!(max_abs_diff(&twice.apply(&rho), &ch.apply(&ch.apply(&rho))) < 1e-12);
    }

    #[test]
    fn vectorization_roundtrip() {
        let rho = Operator::from_fn(4, 4, |i, j| c(i as f64, j as f64));
        assert_eq!(unvectorize(&vectorize(&rho), 4), rho);
        assert_eq!(vectorize(&rho)[1], c(0.0, 1.0));
    }

    #[test]
    fn haar_average_deterministic() {
        let f = |psi: &StateVector| psi[0].norm_sqr();
        let a = haar_average(3, 1000, 7, f);
        let b = haar_average(3, 1000, 7, f);
        assert_eq!(a, b);
        // E|psi_0|^2 = 1/d
        assert!(a.agrees_with(1.0 / 3.0, 4.0));
    }
}

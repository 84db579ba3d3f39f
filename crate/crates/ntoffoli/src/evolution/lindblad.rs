//! Lindblad master equation: noise model, dense adaptive integration, and
//! sparse Liouvillian channels for time-independent generators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::channel::{unvectorize, vectorize, Channel, SuperOperator};
use crate::linalg::{c, embed, expm_multiply, sigma_minus, sigma_z, Csr, DensityMatrix, Operator, C64, I};

use super::ode::{integrate, OdeOptions};

/// Per-qubit relaxation and dephasing times (seconds, or the time unit matching the Hamiltonian).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    t1: f64,
    t2: f64,
}

impl NoiseSpec {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if !(t1 > 0.0) || !(t2 > 0.0) {
            return Err(Error::InvalidState(format!("T1, T2 must be positive (got {t1}, {t2})")));
        }
        if t2 > 2.0 * t1 {
            return Err(Error::UnphysicalNoise { t1, t2 });
        }
        Ok(Self { t1, t2 })
    }

    /// Infinite T1 and T2.
    pub fn noiseless() -> Self {
        Self {
            t1: f64::INFINITY,
            t2: f64::INFINITY,
        }
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn relaxation_rate(&self) -> f64 {
        1.0 / self.t1
    }

    /// `gamma_phi = 1/T2 - 1/(2 T1)`.
    pub fn dephasing_rate(&self) -> f64 {
        (1.0 / self.t2 - 0.5 / self.t1).max(0.0)
    }

    pub fn is_noiseless(&self) -> bool {
        self.relaxation_rate() == 0.0 && self.dephasing_rate() == 0.0
    }

    /// `sqrt(1/T1) sigma-_j` and `sqrt(gamma_phi/2) sigma-z_j` for each qubit; zero rates omitted.
    pub fn collapse_operators(&self, m: usize) -> Result<Vec<Operator>> {
        let mut ops = Vec::new();
        let g1 = self.relaxation_rate();
        let gp = self.dephasing_rate();
        for j in 0..m {
            if g1 > 0.0 {
                ops.push(embed(&sigma_minus(), j, m)? * c(g1.sqrt(), 0.0));
            }
            if gp > 0.0 {
                ops.push(embed(&sigma_z(), j, m)? * c((gp / 2.0).sqrt(), 0.0));
            }
        }
        Ok(ops)
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory has at least one sample")
    }
}

fn qubits_for(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!("dimension {dim} is not 2^m")));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Integrates the master equation with a time-dependent Hamiltonian source and
/// returns `samples` evenly spaced states on `(0, t_end]` (a single sample is the final state).
pub fn lindblad_evolve<H>(
    hamiltonian: H,
    noise: &NoiseSpec,
    rho0: &DensityMatrix,
    t_end: f64,
    samples: usize,
) -> Result<Trajectory>
where
    H: Fn(f64) -> Operator,
{
    if !(t_end > 0.0) || samples == 0 {
        return Err(Error::Integration("need t_end > 0 and at least one sample".into()));
    }
    let d = rho0.dim();
    let m = qubits_for(d)?;
    let ls = noise.collapse_operators(m)?;
    let ldag: Vec<Operator> = ls.iter().map(|l| l.adjoint()).collect();
    let mut sum_ldl = Operator::zeros(d, d);
    for (l, ld) in ls.iter().zip(&ldag) {
        sum_ldl += ld * l;
    }
    let half = sum_ldl * c(0.5, 0.0);
    let mut bad_shape = false;
    let rhs = |t: f64, rho: &Operator| -> Operator {
        let h = hamiltonian(t);
        if h.nrows() != d {
            bad_shape = true;
            return Operator::zeros(d, d);
        }
        let hr = &h * rho;
        let mut out = (&hr - hr.adjoint()) * -I;
        for (l, ld) in ls.iter().zip(&ldag) {
            out += l * rho * ld;
        }
        let ar = &half * rho;
        out -= &ar + ar.adjoint();
        out
    };
    let times: Vec<f64> = (1..=samples).map(|k| t_end * k as f64 / samples as f64).collect();
    let opts = OdeOptions::default();
    let out = integrate(rhs, rho0.matrix(), 0.0, &times, &opts)?;
    if bad_shape {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: hamiltonian(0.0).nrows(),
        });
    }
    let mut states = Vec::with_capacity(out.len());
    for m in out {
        DensityMatrix::validate(&m, 1e-7, 1e-7)?;
        states.push(DensityMatrix::new_unchecked(m));
    }
    Ok(Trajectory { times, states })
}

/// Row-major Liouvillian of `-i[H, .] + sum_k D[L_k]`.
pub fn liouvillian(h: &Operator, collapse: &[Operator]) -> Csr {
    let d = h.nrows();
    let nz = |m: &Operator| -> Vec<(usize, usize, C64)> {
        let mut v = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let x = m[(i, j)];
                if x != C64::new(0.0, 0.0) {
                    v.push((i, j, x));
                }
            }
        }
        v
    };
    let mut trip: Vec<(usize, usize, C64)> = Vec::new();
    // A rho B  ->  (A ⊗ B^T) vec(rho)
    let left = |trip: &mut Vec<(usize, usize, C64)>, a: &[(usize, usize, C64)], w: C64| {
        for &(i, j, x) in a {
            for k in 0..d {
                trip.push((i * d + k, j * d + k, w * x));
            }
        }
    };
    let right = |trip: &mut Vec<(usize, usize, C64)>, b: &[(usize, usize, C64)], w: C64| {
        // rho B: (I ⊗ B^T), entry (k*d + j, k*d + i) = B[i, j]
        for &(i, j, x) in b {
            for k in 0..d {
                trip.push((k * d + j, k * d + i, w * x));
            }
        }
    };
    let hn = nz(h);
    left(&mut trip, &hn, -I);
    right(&mut trip, &hn, I);
    for l in collapse {
        let ln = nz(l);
        let ldl = l.adjoint() * l;
        let ldln = nz(&ldl);
        // L rho L^dag: (L ⊗ conj(L))
        for &(i, j, x) in &ln {
            for &(k, p, y) in &ln {
                trip.push((i * d + k, j * d + p, x * y.conj()));
            }
        }
        left(&mut trip, &ldln, c(-0.5, 0.0));
        right(&mut trip, &ldln, c(-0.5, 0.0));
    }
    Csr::from_triplets(d * d, trip)
}

/// Channel `rho -> P exp(L t)[rho] P^dag` for a static Liouvillian `L` and an
/// optional diagonal frame unitary `P`.
#[derive(Debug, Clone)]
pub struct LindbladChannel {
    dim: usize,
    generator: Csr,
    duration: f64,
    frame_phases: Option<Vec<C64>>,
}

impl LindbladChannel {
    pub fn new(h: &Operator, noise: &NoiseSpec, duration: f64) -> Result<Self> {
        let d = h.nrows();
        let m = qubits_for(d)?;
        let ls = noise.collapse_operators(m)?;
        Ok(Self {
            dim: d,
            generator: liouvillian(h, &ls),
            duration,
            frame_phases: None,
        })
    }

    /// Applies `diag(phases)` by conjugation after the evolution.
    pub fn with_frame_phases(mut self, phases: Vec<C64>) -> Result<Self> {
        if phases.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: phases.len(),
            });
        }
        self.frame_phases = Some(phases);
        Ok(self)
    }

    pub fn generator(&self) -> &Csr {
        &self.generator
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Dense tabulation; practical only for small registers.
    pub fn to_superoperator(&self) -> SuperOperator {
        SuperOperator::from_channel(self)
    }
}

impl Channel for LindbladChannel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, rho: &Operator) -> Operator {
        let out = expm_multiply(&self.generator, self.duration, &vectorize(rho));
        let mut r = unvectorize(&out, self.dim);
        if let Some(p) = &self.frame_phases {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    r[(i, j)] *= p[i] * p[j].conj();
                }
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_state, max_abs_diff, projector, unitary_exp, ZERO};
    use crate::model::{static_hamiltonian, DeviceModel, DriveSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noise_validation() {
        assert!(NoiseSpec::new(30e-6, 30e-6).is_ok());
        assert!(NoiseSpec::new(30e-6, 60e-6).is_ok());
        assert!(matches!(NoiseSpec::new(30e-6, 61e-6), Err(Error::UnphysicalNoise { .. })));
        assert!(NoiseSpec::new(0.0, 1.0).is_err());
        let n = NoiseSpec::new(30e-6, 30e-6).unwrap();
        assert!((n.dephasing_rate() - 1.0 / 60e-6).abs() < 1e-6);
        assert!(NoiseSpec::noiseless().is_noiseless());
        assert!(NoiseSpec::noiseless().collapse_operators(3).unwrap().is_empty());
    }

    #[test]
    fn single_qubit_decay() {
        let t1 = 2.0;
        let noise = NoiseSpec::new(t1, 2.0 * t1).unwrap();
        let rho0 = DensityMatrix::from_pure(&basis_state(2, 1));
        // 2x2 only via a two-qubit register is not required; use a 1-qubit register
        let traj = lindblad_evolve(|_| Operator::zeros(2, 2), &noise, &rho0, 3.0, 6).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let p1 = s.matrix()[(1, 1)].re;
            assert!((p1 - (-t / t1).exp()).abs() < 1e-8);
            assert!((s.matrix().trace().re - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn unitary_limit_matches_propagator() {
        let dev = DeviceModel::star(vec![3.0, 0.5], &[1.0]).unwrap();
        let drive = DriveSpec::itoffoli(&dev, 0.2, 0.4).unwrap();
        let h = crate::evolution::interaction_frame_hamiltonian(&dev, &drive, 0.0).unwrap();
        let psi = crate::linalg::normalize(&crate::linalg::StateVector::from_fn(4, |i, _| c(1.0 + i as f64, 0.5)));
        let rho0 = DensityMatrix::from_pure(&psi);
        let t = 4.0;
        let traj = lindblad_evolve(|_| h.clone(), &NoiseSpec::noiseless(), &rho0, t, 4).unwrap();
        let u = crate::evolution::driven_propagator(&dev, &drive, t).unwrap();
        let want = &u * rho0.matrix() * u.adjoint();
        assert!(max_abs_diff(traj.final_state().matrix(), &want) < 1e-7);
        for s in &traj.states {
            assert!((s.purity() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn lab_frame_trajectory_invariants() {
        let dev = DeviceModel::uniform_star(2, 1.0).unwrap();
        let dev = dev.with_omega(vec![6.0, 0.3, -0.4]).unwrap();
        let drive = DriveSpec::itoffoli(&dev, 0.125, 0.0).unwrap();
        let noise = NoiseSpec::new(20.0, 25.0).unwrap();
        let rho0 = DensityMatrix::from_pure(&basis_state(8, 3));
        let traj = lindblad_evolve(
            |t| crate::model::lab_hamiltonian(&dev, &drive, t).unwrap(),
            &noise,
            &rho0,
            12.0,
            5,
        )
        .unwrap();
        for s in &traj.states {
            let m = s.matrix();
            assert!((m.trace() - c(1.0, 0.0)).norm() < 1e-7);
            assert!(max_abs_diff(m, &m.adjoint()) < 1e-8);
        }
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_wrong_hamiltonian_size() {
        let rho0 = DensityMatrix::from_pure(&basis_state(4, 0));
        let r = lindblad_evolve(|_| Operator::zeros(2, 2), &NoiseSpec::noiseless(), &rho0, 1.0, 1);
        assert!(r.is_err());
    }

    #[test]
    fn liouvillian_channel_matches_dense_integration() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = 4;
        let a = Operator::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let h = (&a + a.adjoint()) * c(0.5, 0.0);
        let noise = NoiseSpec::new(3.0, 4.0).unwrap();
        let psi = crate::linalg::normalize(&crate::linalg::StateVector::from_fn(d, |i, _| c(i as f64, 1.0)));
        let rho0 = DensityMatrix::from_pure(&psi);
        let t = 2.5;
        let traj = lindblad_evolve(|_| h.clone(), &noise, &rho0, t, 1).unwrap();
        let ch = LindbladChannel::new(&h, &noise, t).unwrap();
        let out = ch.apply(rho0.matrix());
        assert!(max_abs_diff(&out, traj.final_state().matrix()) < 1e-8);
    }

    #[test]
    fn noiseless_channel_is_unitary_conjugation() {
        let dev = DeviceModel::uniform_star(2, 1.0).unwrap();
        let h = static_hamiltonian(&dev) + embed(&crate::linalg::sigma_x(), 0, 3).unwrap() * c(0.3, 0.0);
        let ch = LindbladChannel::new(&h, &NoiseSpec::noiseless(), 3.0).unwrap();
        let u = unitary_exp(&h, 3.0).unwrap();
        let rho = projector(&basis_state(8, 5));
        assert!(max_abs_diff(&ch.apply(&rho), &(&u * &rho * u.adjoint())) < 1e-12);
    }

    #[test]
    fn frame_phases_conjugate() {
        let h = Operator::zeros(2, 2);
        let ph = vec![c(1.0, 0.0), I];
        let ch = LindbladChannel::new(&h, &NoiseSpec::noiseless(), 1.0)
            .unwrap()
            .with_frame_phases(ph)
            .unwrap();
        let rho = Operator::from_element(2, 2, c(0.5, 0.0));
        let out = ch.apply(&rho);
        assert!((out[(0, 1)] - c(0.0, -0.5)).norm() < 1e-15);
        assert!((out[(1, 1)] - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(out[(1, 0)].re, ZERO.re);
    }
}

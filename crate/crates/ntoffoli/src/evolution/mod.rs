//! Time evolution: closed-form propagators, master-equation integration,
//! frame changes and phase recurrence.

mod lindblad;
pub mod ode;
mod propagator;
mod recurrence;

pub use lindblad::{liouvillian, lindblad_evolve, LindbladChannel, NoiseSpec, Trajectory};
pub use propagator::{
    analytic_subspace_propagator, driven_propagator, interaction_frame_hamiltonian, lab_frame_propagator,
};
pub use recurrence::phase_recurrence_time;

use crate::error::{Error, Result};
use crate::linalg::{is_diagonal, DensityMatrix, Operator, StateVector, I};

/// Objects that can be moved into a frame `exp(+i G t)` with diagonal `G`.
pub trait Rotatable: Sized {
    fn rotate_by(&self, phases: &[crate::linalg::C64]) -> Self;
}

impl Rotatable for StateVector {
    fn rotate_by(&self, p: &[crate::linalg::C64]) -> Self {
        StateVector::from_fn(self.len(), |i, _| self[i] * p[i])
    }
}

impl Rotatable for Operator {
    fn rotate_by(&self, p: &[crate::linalg::C64]) -> Self {
        Operator::from_fn(self.nrows(), self.ncols(), |i, j| self[(i, j)] * p[i] * p[j].conj())
    }
}

impl Rotatable for DensityMatrix {
    fn rotate_by(&self, p: &[crate::linalg::C64]) -> Self {
        DensityMatrix::new_unchecked(self.matrix().rotate_by(p))
    }
}

/// Conjugates `x` by `exp(+i generator t)` (a state picks up the phases directly).
pub fn rotate_result<T: Rotatable>(x: &T, generator: &Operator, t: f64) -> Result<T> {
    if !is_diagonal(generator, 0.0) {
        let dev = generator
            .iter()
            .enumerate()
            .filter(|(k, _)| k % (generator.nrows() + 1) != 0)
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max);
        return Err(Error::NotDiagonal { deviation: dev });
    }
    let phases: Vec<_> = (0..generator.nrows())
        .map(|k| (I * generator[(k, k)].re * t).exp())
        .collect();
    Ok(x.rotate_by(&phases))
}

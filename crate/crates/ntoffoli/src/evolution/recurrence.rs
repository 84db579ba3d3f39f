//! Time at which the Ising evolution returns to a global phase.

use crate::error::{Error, Result};
use crate::model::{ising_energies, DeviceModel};

const REL_TOL: f64 = 1e-9;
const MAX_DENOMINATOR: i64 = 10_000;

/// Best rational approximation `p/q` with `q <= max_den` via continued fractions,
/// accepted when within `tol` (relative to `max(1, |x|)`).
fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64 / k1 as f64) - x).abs() <= tol * x.abs().max(1.0) {
            return Some((h1, k1));
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    (k1 > 0 && ((h1 as f64 / k1 as f64) - x).abs() <= tol * x.abs().max(1.0)).then_some((h1, k1))
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Smallest `T > 0` with `exp(-i H_Ising T)` proportional to the identity.
///
/// Every eigenvalue difference is written as a rational multiple of the smallest
/// nonzero difference; the common unit `u` of those multiples gives `T = 2 pi / u`.
pub fn phase_recurrence_time(dev: &DeviceModel) -> Result<f64> {
    let e = ising_energies(dev);
    let e0 = e[0];
    let scale = e.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let diffs: Vec<f64> = e
        .iter()
        .map(|x| x - e0)
        .filter(|d| d.abs() > REL_TOL * scale.max(f64::MIN_POSITIVE))
        .collect();
    let base = diffs.iter().map(|d| d.abs()).fold(f64::INFINITY, f64::min);
    if !base.is_finite() {
        // flat spectrum: every time is a recurrence, so there is no minimal one
        return Err(Error::NoRecurrence);
    }
    let mut fracs = Vec::with_capacity(diffs.len());
    for d in &diffs {
        let (p, q) = rationalize(d / base, MAX_DENOMINATOR, REL_TOL).ok_or(Error::NoRecurrence)?;
        fracs.push((p, q));
    }
    let mut lcm: i64 = 1;
    for &(_, q) in &fracs {
        lcm = (lcm / gcd(lcm, q)).checked_mul(q).ok_or(Error::NoRecurrence)?;
    }
    let mut g: i64 = 0;
    for &(p, q) in &fracs {
        g = gcd(g, p * (lcm / q));
    }
    let unit = base * g as f64 / lcm as f64;
    Ok(2.0 * std::f64::consts::PI / unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitary_exp, Operator};
    use crate::model::ising_hamiltonian;
    use std::f64::consts::PI;

    fn proportional_to_identity(u: &Operator) -> f64 {
        let ph = u[(0, 0)];
        max_abs_diff(u, &(Operator::identity(u.nrows(), u.ncols()) * ph))
    }

    #[test]
    fn rationalize_basics() {
        assert_eq!(rationalize(1.5, 100, 1e-12), Some((3, 2)));
        assert_eq!(rationalize(-2.0, 100, 1e-12), Some((-2, 1)));
        assert_eq!(rationalize(2f64.sqrt(), 1000, 1e-9), None);
    }

    #[test]
    fn single_pair() {
        let j = 0.37;
        let dev = DeviceModel::uniform_star(1, j).unwrap();
        let t = phase_recurrence_time(&dev).unwrap();
        assert!((t - 2.0 * PI / j).abs() < 1e-12);
    }

    #[test]
    fn stars_recur() {
        for dev in [
            DeviceModel::uniform_star(2, 1.3).unwrap(),
            DeviceModel::uniform_star(3, 0.7).unwrap(),
            DeviceModel::star(vec![0.0; 3], &[1.0, 2.0]).unwrap(),
            DeviceModel::star(vec![0.0; 4], &[0.5, 1.5, 0.25]).unwrap(),
        ] {
            let t = phase_recurrence_time(&dev).unwrap();
            let u = unitary_exp(&ising_hamiltonian(&dev), t).unwrap();
            assert!(proportional_to_identity(&u) < 1e-10);
            // nothing shorter works: half the time is not a recurrence for these spectra
            let half = unitary_exp(&ising_hamiltonian(&dev), t / 2.0).unwrap();
            assert!(proportional_to_identity(&half) > 1e-3);
        }
    }

    #[test]
    fn incommensurate_fails() {
        let dev = DeviceModel::star(vec![0.0; 3], &[1.0, 2f64.sqrt()]).unwrap();
        assert!(matches!(phase_recurrence_time(&dev), Err(Error::NoRecurrence)));
        let flat = DeviceModel::star(vec![0.0; 2], &[0.0]).unwrap();
        assert!(matches!(phase_recurrence_time(&flat), Err(Error::NoRecurrence)));
    }
}

//! Compressed-row complex matrices and a Taylor-series `exp(tA) v`.

use super::{C64, ZERO};

#[derive(Debug, Clone)]
pub struct Csr {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<C64>,
}

impl Csr {
    /// Builds an `n x n` matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            indices.push(c as u32);
            values.push(v);
            indptr[r + 1] += 1;
            last = Some((r, c));
        }
        for r in 0..n {
            indptr[r + 1] += indptr[r];
        }
        let mut m = Self {
            n,
            indptr,
            indices,
            values,
        };
        m.prune();
        m
    }

    fn prune(&mut self) {
        let mut indptr = vec![0usize; self.n + 1];
        let mut indices = Vec::with_capacity(self.indices.len());
        let mut values = Vec::with_capacity(self.values.len());
        for r in 0..self.n {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if self.values[k] != ZERO {
                    indices.push(self.indices[k]);
                    values.push(self.values[k]);
                }
            }
            indptr[r + 1] = indices.len();
        }
        self.indptr = indptr;
        self.indices = indices;
        self.values = values;
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        (self.indptr[r]..self.indptr[r + 1])
            .find(|&k| self.indices[k] as usize == c)
            .map(|k| self.values[k])
            .unwrap_or(ZERO)
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|r| self.get(r, r)).sum()
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        for r in 0..self.n {
            let mut acc = ZERO;
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[k] * x[self.indices[k] as usize];
            }
            y[r] = acc;
        }
    }

    /// Max absolute column sum of `A - shift I`.
    pub fn norm1_shifted(&self, shift: C64) -> f64 {
        let mut cols = vec![0.0f64; self.n];
        let mut has_diag = vec![false; self.n];
        for r in 0..self.n {
            for k in self.indptr[r]..self.indptr[r + 1] {
                let c = self.indices[k] as usize;
                let v = if c == r {
                    has_diag[r] = true;
                    self.values[k] - shift
                } else {
                    self.values[k]
                };
                cols[c] += v.norm();
            }
        }
        for r in 0..self.n {
            if !has_diag[r] {
                cols[r] += shift.norm();
            }
        }
        cols.into_iter().fold(0.0, f64::max)
    }
}

fn inf_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Target 1-norm of one scaled Taylor step.
const STEP_NORM: f64 = 8.0;
const MAX_TERMS: usize = 120;

/// `exp(t A) v` by shifted, scaled truncated Taylor series with adaptive termination.
pub fn expm_multiply(a: &Csr, t: f64, v: &[C64]) -> Vec<C64> {
    let n = a.dim();
    assert_eq!(v.len(), n, "vector length mismatch");
    if t == 0.0 || n == 0 {
        return v.to_vec();
    }
    let mu = a.trace() / n as f64;
    let norm = a.norm1_shifted(mu) * t.abs();
    let steps = ((norm / STEP_NORM).ceil() as usize).max(1);
    let h = t / steps as f64;
    let eta = (mu * h).exp();
    let tol = f64::EPSILON;

    let mut f = v.to_vec();
    let mut term = vec![ZERO; n];
    let mut next = vec![ZERO; n];
    for _ in 0..steps {
        term.copy_from_slice(&f);
        let mut prev = inf_norm(&term);
        for k in 1..=MAX_TERMS {
            a.matvec(&term, &mut next);
            let scale = h / k as f64;
            for i in 0..n {
                next[i] = (next[i] - mu * term[i]) * scale;
                f[i] += next[i];
            }
            std::mem::swap(&mut term, &mut next);
            let cur = inf_norm(&term);
            if prev + cur <= tol * inf_norm(&f) {
                break;
            }
            prev = cur;
        }
        for z in f.iter_mut() {
            *z *= eta;
        }
    }
    f
}

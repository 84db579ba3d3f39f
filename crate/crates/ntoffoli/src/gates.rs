//! Ideal target unitaries: i-Toffoli, CNOT^n fanout, the two-qubit Barenco
//! family and the Toffoli built from two i-Toffolis and Hadamards.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{bit, hadamard, identity, pauli_in_plane, Operator, C64, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateKind {
    IToffoli,
    CnotN,
    Barenco,
    ToffoliComposite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateLabel {
    pub kind: GateKind,
    pub n: usize,
    pub theta: Vec<f64>,
}

impl GateLabel {
    pub fn new(kind: GateKind, n: usize, theta: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCircuit("gate label needs n >= 1".into()));
        }
        Ok(Self { kind, n, theta })
    }

    /// Ideal unitary for the label; Barenco has no parameter-free ideal and is rejected.
    pub fn ideal(&self) -> Result<Operator> {
        let th = |k: usize| self.theta.get(k).or(self.theta.first()).copied().unwrap_or(0.0);
        match self.kind {
            GateKind::IToffoli => Ok(ideal_itoffoli(self.n, th(0))),
            GateKind::CnotN => {
                let thetas: Vec<f64> = (0..self.n).map(th).collect();
                ideal_cnotn(self.n, &thetas)
            }
            GateKind::ToffoliComposite => toffoli_composite(self.n),
            GateKind::Barenco => Err(Error::InvalidCircuit("barenco needs (delta1, rabi, t)".into())),
        }
    }
}

impl std::fmt::Display for GateLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self.kind {
            GateKind::IToffoli => "i-toffoli",
            GateKind::CnotN => "cnot-n",
            GateKind::Barenco => "barenco",
            GateKind::ToffoliComposite => "toffoli-composite",
        };
        write!(f, "{name}")
    }
}

/// Qubit 0 is the target, 1..=n the controls. The block on `|0,1..1>, |1,1..1>`
/// is `-i (cos theta sx + sin theta sy)`, identity elsewhere.
pub fn ideal_itoffoli(n: usize, theta: f64) -> Operator {
    let dim = 1usize << (n + 1);
    let mut u = identity(dim);
    let ones = (1usize << n) - 1;
    let (a, b) = (ones, (1 << n) + ones);
    let blk = pauli_in_plane(theta) * -I;
    u[(a, a)] = blk[(0, 0)];
    u[(a, b)] = blk[(0, 1)];
    u[(b, a)] = blk[(1, 0)];
    u[(b, b)] = blk[(1, 1)];
    u
}

/// Fanout on an `m`-qubit register: when `control` is |1>, applies
/// `(-i)^k prod_j (cos theta_j sx_j + sin theta_j sy_j)` to the `k` targets.
pub fn ideal_cnotn_on(m: usize, control: usize, targets: &[usize], thetas: &[f64]) -> Result<Operator> {
    if targets.is_empty() {
        return Err(Error::InvalidCircuit("fanout needs at least one target".into()));
    }
    if thetas.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: targets.len(),
            got: thetas.len(),
        });
    }
    for &q in targets.iter().chain(std::iter::once(&control)) {
        if q >= m {
            return Err(Error::SiteOutOfRange { site: q, qubits: m });
        }
    }
    if targets.contains(&control) {
        return Err(Error::InvalidCircuit("control listed as target".into()));
    }
    let dim = 1usize << m;
    let phase = (0..targets.len()).fold(ONE, |acc, _| acc * -I);
    let mut u = Operator::zeros(dim, dim);
    for col in 0..dim {
        if bit(col, control, m) == 0 {
            u[(col, col)] = ONE;
            continue;
        }
        // each target applies [[0, e^{-i th}], [e^{i th}, 0]] to its bit
        let mut row = col;
        let mut amp = phase;
        for (&q, &th) in targets.iter().zip(thetas) {
            let mask = 1usize << (m - 1 - q);
            amp *= if col & mask == 0 {
                C64::from_polar(1.0, th)
            } else {
                C64::from_polar(1.0, -th)
            };
            row ^= mask;
        }
        u[(row, col)] = amp;
    }
    Ok(u)
}

/// Qubit 0 is the control, 1..=n the targets.
pub fn ideal_cnotn(n: usize, thetas: &[f64]) -> Result<Operator> {
    let targets: Vec<usize> = (1..=n).collect();
    ideal_cnotn_on(n + 1, 0, &targets, thetas)
}

/// `diag(1, i^n)` acting on `site` of an `m`-qubit register.
pub fn phase_correction(n: usize, site: usize, m: usize) -> Result<Operator> {
    let ph = (0..n).fold(ONE, |acc, _| acc * I);
    let mut d = Operator::identity(2, 2);
    d[(1, 1)] = ph;
    crate::linalg::embed(&d, site, m)
}

/// The n=1 two-qubit gate in the frame where the unresonant block is idle:
/// identity on `{|00>, |10>}`, and on `{|01>, |11>}`
/// `e^{i d t} [[cos, -i e^{-i th} sin], [-i e^{i th} sin, cos]]` with argument `Omega t`.
pub fn barenco(delta1: f64, rabi: f64, theta: f64, t: f64) -> Operator {
    let mut u = identity(4);
    let ph = C64::from_polar(1.0, delta1 * t);
    let (cs, sn) = ((rabi * t).cos(), (rabi * t).sin());
    // basis |target, control>: |01> = 1, |11> = 3
    u[(1, 1)] = ph * cs;
    u[(1, 3)] = ph * -I * C64::from_polar(sn, -theta);
    u[(3, 1)] = ph * -I * C64::from_polar(sn, theta);
    u[(3, 3)] = ph * cs;
    u
}

/// Unitary on qubits listed in `sites` (first listed is the most significant
/// input of `op`), identity elsewhere.
pub fn embed_multi(op: &Operator, sites: &[usize], m: usize) -> Result<Operator> {
    let k = sites.len();
    if op.nrows() != 1 << k {
        return Err(Error::DimensionMismatch {
            expected: 1 << k,
            got: op.nrows(),
        });
    }
    for (i, &s) in sites.iter().enumerate() {
        if s >= m {
            return Err(Error::SiteOutOfRange { site: s, qubits: m });
        }
        if sites[..i].contains(&s) {
            return Err(Error::InvalidCircuit(format!("site {s} listed twice")));
        }
    }
    let dim = 1usize << m;
    let sub = |b: usize| sites.iter().fold(0usize, |acc, &s| (acc << 1) | bit(b, s, m));
    let mask: usize = sites.iter().map(|&s| 1usize << (m - 1 - s)).sum();
    let mut u = Operator::zeros(dim, dim);
    for col in 0..dim {
        let rest = col & !mask;
        let a = sub(col);
        for r in 0..(1usize << k) {
            let v = op[(r, a)];
            if v == ZERO {
                continue;
            }
            let mut row = rest;
            for (i, &s) in sites.iter().enumerate() {
                if (r >> (k - 1 - i)) & 1 == 1 {
                    row |= 1 << (m - 1 - s);
                }
            }
            u[(row, col)] = v;
        }
    }
    Ok(u)
}

/// `H_a (i-Toffoli)^2 H_a` with `a` = the last control, restricted to the
/// former target (qubit 0) in |0>. Returns the `2^n x 2^n` action on qubits `1..=n`,
/// which is the (n-1)-control Toffoli with target `n`.
///
/// Fails if the ancilla does not return to |0>.
pub fn toffoli_composite(n: usize) -> Result<Operator> {
    if n < 2 {
        return Err(Error::InvalidCircuit("composite Toffoli needs n >= 2".into()));
    }
    let m = n + 1;
    let it = ideal_itoffoli(n, 0.0);
    let h = crate::linalg::embed(&hadamard(), n, m)?;
    let full = &h * &it * &it * &h;
    let half = 1usize << n;
    // ancilla |1> rows must vanish for ancilla |0> inputs
    let leak = (half..2 * half)
        .flat_map(|r| (0..half).map(move |c| (r, c)))
        .map(|(r, col)| full[(r, col)].norm())
        .fold(0.0, f64::max);
    if leak > 1e-12 {
        return Err(Error::InvalidCircuit(format!("ancilla leaks with amplitude {leak:.3e}")));
    }
    Ok(full.view((0, 0), (half, half)).into_owned())
}

/// Standard multi-controlled X on `k + 1` qubits, target last.
pub fn multi_controlled_x(k: usize) -> Operator {
    let dim = 1usize << (k + 1);
    let mut u = identity(dim);
    let (a, b) = (dim - 2, dim - 1);
    u[(a, a)] = ZERO;
    u[(b, b)] = ZERO;
    u[(a, b)] = ONE;
    u[(b, a)] = ONE;
    u
}

/// Number of entangling windows of the conventional decomposition of a fanout
/// into pairwise CNOTs, `sum_k n_k`.
pub fn conventional_cnot_count(fanouts: &[usize]) -> usize {
    fanouts.iter().sum()
}

/// Operator Schmidt rank of a two-qubit unitary across the qubit bipartition.
pub fn operator_schmidt_rank(u: &Operator, tol: f64) -> Result<usize> {
    if u.shape() != (4, 4) {
        return Err(Error::InvalidCircuit(format!("Schmidt rank needs a 4x4 operator, got {:?}", u.shape())));
    }
    // realign U_{(a b),(a' b')} -> R_{(a a'),(b b')}
    let mut r = Operator::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for ap in 0..2 {
                for bp in 0..2 {
                    r[(a * 2 + ap, b * 2 + bp)] = u[(a * 2 + b, ap * 2 + bp)];
                }
            }
        }
    }
    let sv = nalgebra::SVD::new(r, false, false).singular_values;
    Ok(sv.iter().filter(|&&s| s > tol).count())
}

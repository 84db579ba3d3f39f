//! Multi-start Nelder–Mead search for star circuits meeting gate-model constraints.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{derive_gate_params, CircuitParams, GateParams};
use crate::error::{Error, Result};
use crate::units::{GHZ, MHZ};

/// Targets on the derived gate parameters. Couplings and frequencies angular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    /// Allowed `|J^z_i|`.
    pub jz_range: (f64, f64),
    /// Upper bound on `|J^x_ij| / |J^z|`.
    pub cross_max: f64,
    /// Upper bound on `|J^x_i| / |omega_i - omega_0|`.
    pub swap_max: f64,
    /// Allowed relative anharmonicity in percent (negative).
    pub alpha_rel_range: (f64, f64),
    /// Allowed `E^J / E^C`.
    pub ratio_range: (f64, f64),
    /// Largest junction energy (angular).
    pub max_energy: f64,
    /// Allowed qubit capacitances in fF; coupling capacitances only use the upper end.
    pub capacitance_range: (f64, f64),
}

impl Default for ConstraintSet {
    fn default() -> Self {
        Self {
            jz_range: (25.0 * MHZ, 320.0 * MHZ),
            cross_max: 1.0,
            swap_max: 1.0 / 3.0,
            alpha_rel_range: (-2.5, -1.5),
            ratio_range: (50.0, 80.0),
            max_energy: 100.0 * GHZ,
            capacitance_range: (1.0, 1000.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostWeights {
    pub coupling: f64,
    pub cross: f64,
    pub swap: f64,
    pub anharmonicity: f64,
    pub ratio: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        Self {
            coupling: 1.0,
            cross: 1.0,
            swap: 1.0,
            anharmonicity: 1.0,
            ratio: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    pub n_controls: usize,
    pub seeds: usize,
    pub rng_seed: u64,
    /// Independent per-control parameters instead of identical controls.
    pub asymmetric: bool,
    pub max_evaluations: usize,
    /// Constraints are tightened by this log-margin while minimizing so that
    /// converged points are strictly inside the feasible region.
    pub margin: f64,
    pub weights: CostWeights,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            n_controls: 2,
            seeds: 50,
            rng_seed: 0,
            asymmetric: false,
            max_evaluations: 6000,
            margin: 0.01,
            weights: CostWeights::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub start: usize,
    pub params: CircuitParams,
    pub gate: GateParams,
    pub cost: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthResult {
    /// Feasible local minima in start order.
    pub candidates: Vec<Candidate>,
    pub starts: usize,
    pub best_cost: f64,
    pub diagnostic: Option<String>,
}

// log-box for random starts: energies in GHz (f/2pi), capacitances in fF
const E_BOX: (f64, f64) = (0.01, 100.0);
const C_BOX: (f64, f64) = (1.0, 500.0);
const CZ_BOX: (f64, f64) = (0.001, 5.0);
const FLOOR: f64 = 1e-6;
const INVALID: f64 = 1e6;

fn upper(x: f64, hi: f64) -> f64 {
    (x / hi).ln().max(0.0)
}

fn lower(x: f64, lo: f64) -> f64 {
    (lo / x).ln().max(0.0)
}

impl ConstraintSet {
    pub fn validate(&self) -> Result<()> {
        let ok = self.jz_range.0 > 0.0
            && self.jz_range.0 <= self.jz_range.1
            && self.cross_max > 0.0
            && self.swap_max > 0.0
            && self.alpha_rel_range.0 <= self.alpha_rel_range.1
            && self.alpha_rel_range.1 < 0.0
            && self.ratio_range.0 > 0.0
            && self.ratio_range.0 <= self.ratio_range.1
            && self.max_energy > 0.0
            && self.capacitance_range.0 > 0.0
            && self.capacitance_range.0 <= self.capacitance_range.1;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("malformed constraint set {self:?}")))
        }
    }

    /// Log-space violations (each `>= 0`), tightened by `margin`.
    fn violations(&self, p: &CircuitParams, g: &GateParams, margin: f64, w: &CostWeights) -> Vec<f64> {
        let s = margin.exp();
        let (clo, chi) = self.capacitance_range;
        let energies = std::iter::once(p.e0).chain(p.ei.iter().copied()).chain(p.ezi.iter().copied());
        let mut v: Vec<f64> = energies.map(|e| upper(e, self.max_energy)).collect();
        for c in std::iter::once(p.c0).chain(p.ci.iter().copied()) {
            v.push(lower(c, clo) + upper(c, chi));
        }
        v.extend(p.czi.iter().map(|&c| upper(c, chi)));
        let (jlo, jhi) = self.jz_range;
        let (alo, ahi) = (-self.alpha_rel_range.1, -self.alpha_rel_range.0);
        let (rlo, rhi) = self.ratio_range;
        for (i, &jz) in g.jz.iter().enumerate() {
            let a = jz.abs();
            v.push(w.coupling * (lower(a, jlo * s) + upper(a, jhi / s)));
            let det = (g.omegai[i] - g.omega0).abs();
            v.push(w.swap * upper(g.jx[i].abs() / det, self.swap_max / s));
            for (j, &x) in g.jxij[i].iter().enumerate() {
                if j != i {
                    v.push(w.cross * upper(x.abs() / a, self.cross_max / s));
                }
            }
        }
        for &a in std::iter::once(&g.alpha_rel0).chain(&g.alpha_reli) {
            v.push(w.anharmonicity * (lower(-a, alo * s) + upper(-a, ahi / s)));
        }
        for &r in std::iter::once(&g.ratio0).chain(&g.ratioi) {
            v.push(w.ratio * (lower(r, rlo * s) + upper(r, rhi / s)));
        }
        v
    }

    pub fn cost(&self, p: &CircuitParams, g: &GateParams, margin: f64, w: &CostWeights) -> f64 {
        let c: f64 = self.violations(p, g, margin, w).iter().map(|x| x * x).sum();
        if c.is_finite() {
            c
        } else {
            INVALID
        }
    }

    pub fn is_satisfied(&self, p: &CircuitParams, g: &GateParams) -> bool {
        self.violations(p, g, 0.0, &CostWeights::default()).iter().all(|&x| x == 0.0)
    }
}

struct Layout {
    n: usize,
    asymmetric: bool,
}

impl Layout {
    // x = ln of [e0, c0, (ei, ezi, ci, czi) ...] in GHz / fF
    fn decode(&self, x: &[f64]) -> Result<CircuitParams> {
        let e = |v: f64| v.exp() * GHZ;
        let per = |k: usize, i: usize| if self.asymmetric { x[2 + 4 * i + k] } else { x[2 + k] };
        let n = self.n;
        CircuitParams::new(
            e(x[0]),
            (0..n).map(|i| e(per(0, i))).collect(),
            (0..n).map(|i| e(per(1, i))).collect(),
            x[1].exp(),
            (0..n).map(|i| per(2, i).exp()).collect(),
            (0..n).map(|i| per(3, i).exp()).collect(),
        )
    }

    fn encode(&self, p: &CircuitParams) -> Vec<f64> {
        let l = |v: f64| v.max(FLOOR).ln();
        let mut x = vec![l(p.e0 / GHZ), l(p.c0)];
        let controls = if self.asymmetric { self.n } else { 1 };
        for i in 0..controls {
            x.extend([l(p.ei[i] / GHZ), l(p.ezi[i] / GHZ), l(p.ci[i]), l(p.czi[i])]);
        }
        x
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut draw = |(lo, hi): (f64, f64)| rng.random_range(f64::ln(lo)..f64::ln(hi));
        let mut x = vec![draw(E_BOX), draw(C_BOX)];
        let controls = if self.asymmetric { self.n } else { 1 };
        for _ in 0..controls {
            x.extend([draw(E_BOX), draw(E_BOX), draw(C_BOX), draw(CZ_BOX)]);
        }
        x
    }
}

struct Problem<'a> {
    layout: Layout,
    constraints: &'a ConstraintSet,
    opts: &'a OptimizerOptions,
}

impl Problem<'_> {
    fn cost(&self, x: &[f64]) -> f64 {
        let Ok(p) = self.layout.decode(x) else {
            return INVALID;
        };
        match derive_gate_params(&p) {
            Ok(g) => self.constraints.cost(&p, &g, self.opts.margin, &self.opts.weights),
            Err(_) => INVALID,
        }
    }

    fn run(&self, start: usize, x0: Vec<f64>) -> (Option<Candidate>, f64) {
        let (x, fx, evals) = nelder_mead(|x| self.cost(x), x0, 0.3, self.opts.max_evaluations);
        let Ok(params) = self.layout.decode(&x) else {
            return (None, fx);
        };
        let Ok(gate) = derive_gate_params(&params) else {
            return (None, fx);
        };
        let ok = self.constraints.is_satisfied(&params, &gate);
        log::debug!("start {start}: cost {fx:.3e} after {evals} evaluations, feasible = {ok}");
        let cand = ok.then(|| Candidate {
            start,
            params,
            gate,
            cost: fx,
            evaluations: evals,
        });
        (cand, fx)
    }
}

/// Minimizes `f` from `x0` with an axis simplex of log-step `step`; stops on a
/// zero cost, a collapsed simplex, or the evaluation budget. Restarts the
/// simplex around the current best when it collapses early.
fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: Vec<f64>, step: f64, budget: usize) -> (Vec<f64>, f64, usize) {
    let d = x0.len();
    let mut evals = 0;
    let eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    let mut best = (x0.clone(), eval(&x0, &mut evals));
    let mut restarts = 0;
    while evals < budget && best.1 > 0.0 && restarts < 4 {
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![best.clone()];
        for k in 0..d {
            let mut x = best.0.clone();
            x[k] += step;
            let fx = eval(&x, &mut evals);
            simplex.push((x, fx));
        }
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[d].1 - simplex[0].1;
            let size = simplex[1..]
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if simplex[0].1 == 0.0 || evals >= budget || size < 1e-9 || spread < 1e-16 * simplex[0].1 {
                break;
            }
            let centroid: Vec<f64> = (0..d)
                .map(|k| simplex[..d].iter().map(|(x, _)| x[k]).sum::<f64>() / d as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[d].0)
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };
            let xr = along(-1.0);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(-2.0);
                let fe = eval(&xe, &mut evals);
                simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[d - 1].1 {
                simplex[d] = (xr, fr);
            } else {
                let (xc, fc) = if fr < simplex[d].1 {
                    let xc = along(-0.5);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                } else {
                    let xc = along(0.5);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                };
                if fc < simplex[d].1.min(fr) {
                    simplex[d] = (xc, fc);
                } else {
                    let x0 = simplex[0].0.clone();
                    for v in simplex[1..].iter_mut() {
                        let xs: Vec<f64> = x0.iter().zip(&v.0).map(|(a, b)| a + 0.5 * (b - a)).collect();
                        let fs = eval(&xs, &mut evals);
                        *v = (xs, fs);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 >= best.1 {
            break;
        }
        best = simplex.swap_remove(0);
        restarts += 1;
    }
    (best.0, best.1, evals)
}

/// Runs `opts.seeds` independent searches from log-uniform random starts.
/// Start `k` draws from ChaCha stream `k` of `opts.rng_seed`, so the result
/// does not depend on thread scheduling.
pub fn optimize_circuit(constraints: &ConstraintSet, opts: &OptimizerOptions) -> Result<SynthResult> {
    constraints.validate()?;
    if opts.n_controls == 0 {
        return Err(Error::Config("optimizer needs at least one control".into()));
    }
    let problem = Problem {
        layout: Layout {
            n: opts.n_controls,
            asymmetric: opts.asymmetric,
        },
        constraints,
        opts,
    };
    let runs: Vec<(Option<Candidate>, f64)> = (0..opts.seeds)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
            rng.set_stream(k as u64);
            let x0 = problem.layout.random(&mut rng);
            problem.run(k, x0)
        })
        .collect();
    Ok(summarize(runs))
}

/// Single search from a given circuit.
pub fn optimize_from(
    constraints: &ConstraintSet,
    start: &CircuitParams,
    opts: &OptimizerOptions,
) -> Result<SynthResult> {
    constraints.validate()?;
    let layout = Layout {
        n: start.n_controls(),
        asymmetric: opts.asymmetric,
    };
    let x0 = layout.encode(start);
    let problem = Problem {
        layout,
        constraints,
        opts,
    };
    Ok(summarize(vec![problem.run(0, x0)]))
}

fn summarize(runs: Vec<(Option<Candidate>, f64)>) -> SynthResult {
    let starts = runs.len();
    let best_cost = runs.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let candidates: Vec<Candidate> = runs.into_iter().filter_map(|r| r.0).collect();
    let diagnostic = candidates.is_empty().then(|| {
        format!("no feasible circuit after {starts} starts (lowest cost {best_cost:.3e})")
    });
    if let Some(d) = &diagnostic {
        log::warn!("{d}");
    }
    SynthResult {
        candidates,
        starts,
        best_cost,
        diagnostic,
    }
}

//! Experiment runners behind the `sim` binary. Each returns a [`Table`] whose
//! rows follow grid order regardless of which worker finished first.

use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::config::{Experiment, ExperimentConfig, QecGates};
use crate::driven::{cnotn_gate, gate_time, itoffoli_gate, DrivenGate};
use crate::error::{Error, Result};
use crate::evolution::NoiseSpec;
use crate::fidelity::{
    norm_error_squared_closed_form, operator_norm_error_over_subspaces, process_fidelity_from_trace,
    weighted_trace_fidelity,
};
use crate::gates::ideal_itoffoli;
use crate::linalg::Operator;
use crate::model::DriveSpec;
use crate::qec::{BitFlipCode, GateMode, SteaneEncoder};
use crate::synth::{
    derive_gate_params, device_from_row, golden_table, optimize_circuit, read_table, TableRow, TABLE_COLUMNS,
    TABLE_UNITS,
};
use crate::units::{MHZ, NS};

/// Largest control count accepted by `sweep-n` (superoperator of `2^{2(n+1)}` entries per side).
pub const MAX_SWEEP_N: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format_sig(*v, 12),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Num(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k].clone()).collect())
    }

    /// Numeric column; `None` if absent or not numeric.
    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        self.column(name)?.iter().map(Cell::as_f64).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of objects keyed by column name, in row order.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (k, v) in self.columns.iter().zip(r) {
                    m.insert(k.clone(), v.json());
                }
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("json values serialize");
        s.push('\n');
        s
    }
}

/// `%.{digits}g`-style formatting: shortest of fixed or exponent notation,
/// trailing zeros removed.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let p = digits.max(1) as i32;
    // round first so the exponent reflects the printed mantissa
    let sci = format!("{:.*e}", (p - 1) as usize, v);
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if exp < -5 || exp >= p {
        format!("{}e{}", trim(mant.to_string()), exp)
    } else {
        trim(format!("{:.*}", (p - 1 - exp) as usize, v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Complete,
    /// The computation ran but produced no admissible result (synth).
    Infeasible(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub experiment: Experiment,
    pub table: Table,
    pub outcome: Outcome,
}

pub fn run_experiment(exp: Experiment, cfg: &ExperimentConfig) -> Result<Report> {
    let (table, outcome) = match exp {
        Experiment::SweepDrive => (run_sweep_drive(cfg)?, Outcome::Complete),
        Experiment::SweepN => (run_sweep_n(cfg)?, Outcome::Complete),
        Experiment::Qec3 => (run_qec3(cfg)?, Outcome::Complete),
        Experiment::Steane => (run_steane(cfg)?, Outcome::Complete),
        Experiment::Synth => run_synth(cfg)?,
        Experiment::Table1Check => (run_table1_check(cfg)?, Outcome::Complete),
        Experiment::NormError => (run_norm_error(cfg)?, Outcome::Complete),
    };
    Ok(Report {
        experiment: exp,
        table,
        outcome,
    })
}

fn with_noise_column(mut cols: Vec<&'static str>, noise: &Option<NoiseSpec>) -> Vec<&'static str> {
    if noise.is_none() {
        cols.retain(|c| *c != "fidelity_noisy");
    }
    cols
}

/// i-Toffoli fidelity against `J/Omega`; columns
/// `j_over_omega, gate_time_ns, fidelity_unitary[, fidelity_noisy]`.
pub fn run_sweep_drive(cfg: &ExperimentConfig) -> Result<Table> {
    let grid = cfg.drive.grid()?;
    let noise = cfg.noise.spec()?;
    let d = &cfg.device;
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&r| {
            let (gate, goal) = itoffoli_gate(d.n, d.coupling, r, d.theta)?;
            let mut row = vec![
                Cell::Num(r),
                Cell::Num(gate.duration() / NS),
                Cell::Num(gate.process_fidelity(&goal, None)?),
            ];
            if let Some(nz) = &noise {
                row.push(Cell::Num(gate.process_fidelity(&goal, Some(nz))?));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let cols = with_noise_column(
        vec!["j_over_omega", "gate_time_ns", "fidelity_unitary", "fidelity_noisy"],
        &noise,
    );
    let mut t = Table::new(&cols);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

/// Both gate families against the number of controls at fixed `J/Omega`;
/// columns `n, gate, fidelity_unitary[, fidelity_noisy]`.
pub fn run_sweep_n(cfg: &ExperimentConfig) -> Result<Table> {
    let ns = &cfg.sweep_n.n;
    if ns.is_empty() {
        return Err(Error::Config("sweep-n needs a nonempty n grid".into()));
    }
    if let Some(&n) = ns.iter().find(|&&n| n == 0 || n > MAX_SWEEP_N) {
        return Err(Error::TooLarge(format!("n = {n} outside 1..={MAX_SWEEP_N}")));
    }
    let noise = cfg.noise.spec()?;
    let d = &cfg.device;
    let ratio = cfg.sweep_n.ratio;
    let jobs: Vec<(usize, &str)> = ns.iter().flat_map(|&n| [(n, "itoffoli"), (n, "cnotn")]).collect();
    let rows: Vec<Vec<Cell>> = jobs
        .par_iter()
        .map(|&(n, kind)| {
            let (gate, goal) = if kind == "itoffoli" {
                itoffoli_gate(n, d.coupling, ratio, d.theta)?
            } else {
                cnotn_gate(n, d.coupling, ratio, d.theta)?
            };
            let mut row = vec![
                Cell::Int(n as i64),
                Cell::Text(kind.into()),
                Cell::Num(gate.process_fidelity(&goal, None)?),
            ];
            if let Some(nz) = &noise {
                row.push(Cell::Num(gate.process_fidelity(&goal, Some(nz))?));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let cols = with_noise_column(vec!["n", "gate", "fidelity_unitary", "fidelity_noisy"], &noise);
    let mut t = Table::new(&cols);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn qec_mode(cfg: &ExperimentConfig, ratio: f64) -> GateMode {
    match cfg.qec.gates {
        QecGates::Ideal => GateMode::Ideal,
        QecGates::Driven => GateMode::Driven {
            coupling: cfg.device.coupling,
            ratio,
        },
    }
}

/// Bloch-averaged bit-flip code fidelity per injected error; columns `error, fidelity`.
pub fn run_qec3(cfg: &ExperimentConfig) -> Result<Table> {
    let noise = cfg.noise.spec()?;
    let mode = qec_mode(cfg, cfg.qec.ratio);
    let cases: [(&str, Option<usize>); 4] = [("none", None), ("q1", Some(0)), ("q2", Some(1)), ("q3", Some(2))];
    let rows: Vec<Vec<Cell>> = cases
        .par_iter()
        .map(|&(name, site)| {
            let code = BitFlipCode::new(mode, noise.as_ref(), site)?;
            Ok(vec![Cell::Text(name.into()), Cell::Num(code.average_fidelity())])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["error", "fidelity"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

/// Steane encoder over the `J/Omega` grid; the circuit takes four windows,
/// so `gate_time_ns = 4 T`. Columns `j_over_omega, gate_time_ns, fidelity`.
pub fn run_steane(cfg: &ExperimentConfig) -> Result<Table> {
    let noise = cfg.noise.spec()?;
    let grid = match cfg.qec.gates {
        QecGates::Ideal => vec![cfg.qec.ratio],
        QecGates::Driven => cfg.drive.grid()?,
    };
    let j = cfg.device.coupling;
    let rows: Vec<Vec<Cell>> = grid
        .iter()
        .map(|&r| {
            let enc = SteaneEncoder::new(qec_mode(cfg, r), noise.as_ref())?;
            Ok(vec![
                Cell::Num(r),
                Cell::Num(4.0 * gate_time(j / r) / NS),
                Cell::Num(enc.average_fidelity()),
            ])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["j_over_omega", "gate_time_ns", "fidelity"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn unit_header() -> Vec<String> {
    TABLE_COLUMNS
        .iter()
        .zip(TABLE_UNITS)
        .map(|(c, u)| if u.is_empty() { c.to_string() } else { format!("{c} {u}") })
        .collect()
}

fn row_cells(r: &TableRow) -> Vec<Cell> {
    vec![
        Cell::Int(r.index as i64),
        Cell::Num(r.e0),
        Cell::Num(r.ei),
        Cell::Num(r.ez),
        Cell::Num(r.c0),
        Cell::Num(r.ci),
        Cell::Num(r.cz),
        Cell::Num(r.omega0),
        Cell::Num(r.omegai),
        Cell::Num(r.jz),
        Cell::Num(r.jx),
        Cell::Num(r.jxij),
        Cell::Num(r.alpha0),
        Cell::Num(r.alphai),
        Cell::Num(r.ratio0),
        Cell::Num(r.ratioi),
    ]
}

/// Optimizer candidates in the circuit-table columns (units in the header).
/// No feasible point gives a header-only table and [`Outcome::Infeasible`].
pub fn run_synth(cfg: &ExperimentConfig) -> Result<(Table, Outcome)> {
    let s = &cfg.synth;
    let res = optimize_circuit(&s.constraints(), &s.options(cfg.seed))?;
    let mut t = Table {
        columns: unit_header(),
        rows: Vec::new(),
    };
    for (k, c) in res.candidates.iter().enumerate() {
        t.push(row_cells(&TableRow::from_params(k + 1, &c.params, &c.gate)));
    }
    let outcome = match res.diagnostic {
        Some(d) => Outcome::Infeasible(d),
        None => Outcome::Complete,
    };
    Ok((t, outcome))
}

/// Peak of a fidelity scan over window lengths `[1 - span, 1 + span] T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeScan {
    pub times: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub peak: f64,
    /// Argmax time divided by `T = pi / (2 Omega)`.
    pub peak_over_t: f64,
}

pub fn fidelity_time_scan(
    gate: &DrivenGate,
    goal: &Operator,
    noise: Option<&NoiseSpec>,
    span: f64,
    points: usize,
) -> Result<TimeScan> {
    if points < 2 || !(span >= 0.0) || span >= 1.0 {
        return Err(Error::Config(format!("bad time scan: span {span}, {points} points")));
    }
    let t0 = gate_time(gate.drive().rabi());
    let times: Vec<f64> = (0..points)
        .map(|k| t0 * (1.0 - span + 2.0 * span * k as f64 / (points - 1) as f64))
        .collect();
    let fidelities = times
        .iter()
        .map(|&t| gate.with_duration(t)?.process_fidelity(goal, noise))
        .collect::<Result<Vec<f64>>>()?;
    let (k, &peak) = fidelities
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty scan");
    Ok(TimeScan {
        peak_over_t: times[k] / t0,
        times,
        fidelities,
        peak,
    })
}

/// The i-Toffoli window on the Ising device of a table row, `Omega = |J^z| / ratio`.
pub fn table_row_gate(row: &TableRow, n: usize, ratio: f64, theta: f64) -> Result<(DrivenGate, Operator)> {
    let (dev, _) = device_from_row(row, n)?;
    let rabi = (row.jz * MHZ).abs() / ratio;
    let drive = DriveSpec::itoffoli(&dev, rabi, theta)?;
    Ok((DrivenGate::half_period(dev, drive)?, ideal_itoffoli(n, theta)))
}

/// Derived against printed columns for every table row, plus the driven-gate
/// peak fidelity on the row's device.
pub fn run_table1_check(cfg: &ExperimentConfig) -> Result<Table> {
    let tc = &cfg.table1;
    let rows = match &tc.path {
        Some(p) => read_table(p)?,
        None => golden_table(),
    };
    let noise = cfg.noise.spec()?;
    let mut cols = vec![
        "row",
        "omega0_ghz",
        "omega0_ref",
        "omegai_ghz",
        "omegai_ref",
        "jz_mhz",
        "jz_ref",
        "jx_mhz",
        "jx_ref",
        "jxij_mhz",
        "jxij_ref",
        "alpha0_pct",
        "alpha0_ref",
        "alphai_pct",
        "alphai_ref",
        "ratio0",
        "ratio0_ref",
        "ratioi",
        "ratioi_ref",
        "swap_ratio",
        "peak_fidelity_unitary",
        "peak_time_over_t",
        "peak_fidelity_noisy",
    ];
    if noise.is_none() {
        cols.pop();
    }
    let out: Vec<Vec<Cell>> = rows
        .par_iter()
        .map(|r| {
            let g = derive_gate_params(&r.circuit(2)?)?;
            let d = TableRow::from_params(r.index, &r.circuit(2)?, &g);
            let (_, res) = device_from_row(r, tc.n)?;
            let (gate, goal) = table_row_gate(r, tc.n, tc.ratio, cfg.device.theta)?;
            let scan = fidelity_time_scan(&gate, &goal, None, tc.span, tc.points)?;
            let mut row = vec![Cell::Int(r.index as i64)];
            for (a, b) in [
                (d.omega0, r.omega0),
                (d.omegai, r.omegai),
                (d.jz, r.jz),
                (d.jx, r.jx),
                (d.jxij, r.jxij),
                (d.alpha0, r.alpha0),
                (d.alphai, r.alphai),
                (d.ratio0, r.ratio0),
                (d.ratioi, r.ratioi),
            ] {
                row.push(Cell::Num(a));
                row.push(Cell::Num(b));
            }
            row.push(Cell::Num(res.swap_ratio[0]));
            row.push(Cell::Num(scan.peak));
            row.push(Cell::Num(scan.peak_over_t));
            if let Some(nz) = &noise {
                let noisy = fidelity_time_scan(&gate, &goal, Some(nz), tc.span, tc.points)?;
                row.push(Cell::Num(noisy.peak));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&cols);
    out.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

/// Worst-case operator-norm error over non-resonant subspaces; columns
/// `j_over_omega, n, norm_error, norm_error_closed_form, process_fidelity`.
pub fn run_norm_error(cfg: &ExperimentConfig) -> Result<Table> {
    let grid = cfg.drive.grid()?;
    if cfg.norm_error.n.is_empty() || cfg.norm_error.n.contains(&0) {
        return Err(Error::Config("norm-error needs controls n >= 1".into()));
    }
    let mut t = Table::new(&[
        "j_over_omega",
        "n",
        "norm_error",
        "norm_error_closed_form",
        "process_fidelity",
    ]);
    for &r in &grid {
        for &n in &cfg.norm_error.n {
            let f = process_fidelity_from_trace(weighted_trace_fidelity(n, r), 1 << (n + 1));
            t.push(vec![
                Cell::Num(r),
                Cell::Int(n as i64),
                Cell::Num(operator_norm_error_over_subspaces(n, r, cfg.device.theta)),
                Cell::Num(norm_error_squared_closed_form(r).max(0.0).sqrt()),
                Cell::Num(f),
            ]);
        }
    }
    Ok(t)
}

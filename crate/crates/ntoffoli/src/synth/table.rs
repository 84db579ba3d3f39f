//! Plain-text tab-separated circuit table.
//!
//! Line 1: column names. Line 2: units. Then one row per configuration; the
//! first column is the row number. Values are in the printed units (energies
//! and frequencies as `f/2pi` in GHz, couplings in MHz, capacitances in fF,
//! anharmonicities in percent). Lines starting with `%` are comments.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CircuitParams, GateParams};
use crate::error::{Error, Result};
use crate::units::{GHZ, MHZ};

/// Bundled copy of the published 14-row table (two identical controls each).
pub const TABLE1_GOLDEN: &str = include_str!("../../data/table1.tsv");

pub fn golden_table() -> Vec<TableRow> {
    parse_table(TABLE1_GOLDEN).expect("bundled table parses")
}

pub const TABLE_COLUMNS: [&str; 16] = [
    "#",
    "E_0",
    "E_i",
    "E_z,i",
    "C_0",
    "C_i",
    "C_z,i",
    "omega_0",
    "omega_i",
    "J^z_i",
    "J^x_i",
    "J^x_ij",
    "alpha_0",
    "alpha_i",
    "E^J_0/E^C_0",
    "E^J_i/E^C_i",
];

pub const TABLE_UNITS: [&str; 16] = [
    "",
    "[2pi GHz]",
    "[2pi GHz]",
    "[2pi GHz]",
    "[fF]",
    "[fF]",
    "[fF]",
    "[2pi GHz]",
    "[2pi GHz]",
    "[2pi MHz]",
    "[2pi MHz]",
    "[2pi MHz]",
    "[%]",
    "[%]",
    "",
    "",
];

/// One symmetric-control configuration in printed units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub index: usize,
    pub e0: f64,
    pub ei: f64,
    pub ez: f64,
    pub c0: f64,
    pub ci: f64,
    pub cz: f64,
    pub omega0: f64,
    pub omegai: f64,
    pub jz: f64,
    pub jx: f64,
    pub jxij: f64,
    pub alpha0: f64,
    pub alphai: f64,
    pub ratio0: f64,
    pub ratioi: f64,
}

impl TableRow {
    /// Circuit inputs with `n` identical controls, in internal units.
    pub fn circuit(&self, n: usize) -> Result<CircuitParams> {
        CircuitParams::symmetric(n, self.e0 * GHZ, self.ei * GHZ, self.ez * GHZ, self.c0, self.ci, self.cz)
    }

    /// Row built from a circuit and its derived parameters (control 1 shown).
    pub fn from_params(index: usize, p: &CircuitParams, g: &GateParams) -> Self {
        let jxij = g.jxij.first().and_then(|r| r.get(1)).copied().unwrap_or(0.0);
        Self {
            index,
            e0: p.e0 / GHZ,
            ei: p.ei[0] / GHZ,
            ez: p.ezi[0] / GHZ,
            c0: p.c0,
            ci: p.ci[0],
            cz: p.czi[0],
            omega0: g.omega0 / GHZ,
            omegai: g.omegai[0] / GHZ,
            jz: g.jz[0] / MHZ,
            jx: g.jx[0] / MHZ,
            jxij: jxij / MHZ,
            alpha0: g.alpha_rel0,
            alphai: g.alpha_reli[0],
            ratio0: g.ratio0,
            ratioi: g.ratioi[0],
        }
    }

    fn values(&self) -> [f64; 15] {
        [
            self.e0, self.ei, self.ez, self.c0, self.ci, self.cz, self.omega0, self.omegai, self.jz, self.jx,
            self.jxij, self.alpha0, self.alphai, self.ratio0, self.ratioi,
        ]
    }
}

pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('%'));
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::Parse("empty table".into()))?
        .split('\t')
        .map(str::trim)
        .collect();
    if header != TABLE_COLUMNS {
        return Err(Error::Parse(format!("unexpected table header {header:?}")));
    }
    let units: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::Parse("missing unit line".into()))?
        .split('\t')
        .map(str::trim)
        .collect();
    if units != TABLE_UNITS {
        return Err(Error::Parse(format!("unexpected unit line {units:?}")));
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let cells: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cells.len() != TABLE_COLUMNS.len() {
                return Err(Error::Parse(format!(
                    "row {}: expected {} cells, found {}",
                    k + 1,
                    TABLE_COLUMNS.len(),
                    cells.len()
                )));
            }
            let index = cells[0]
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("row {}: index: {e}", k + 1)))?;
            let mut v = [0.0; 15];
            for (slot, (cell, name)) in v.iter_mut().zip(cells[1..].iter().zip(&TABLE_COLUMNS[1..])) {
                *slot = cell
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {index}, column {name}: {e}")))?;
            }
            Ok(TableRow {
                index,
                e0: v[0],
                ei: v[1],
                ez: v[2],
                c0: v[3],
                ci: v[4],
                cz: v[5],
                omega0: v[6],
                omegai: v[7],
                jz: v[8],
                jx: v[9],
                jxij: v[10],
                alpha0: v[11],
                alphai: v[12],
                ratio0: v[13],
                ratioi: v[14],
            })
        })
        .collect()
}

pub fn read_table(path: impl AsRef<Path>) -> Result<Vec<TableRow>> {
    parse_table(&std::fs::read_to_string(path)?)
}

/// Renders rows in the same layout `parse_table` reads, numbers through `fmt`.
pub fn render_table(rows: &[TableRow], fmt: impl Fn(f64) -> String) -> String {
    let mut out = TABLE_COLUMNS.join("\t");
    out.push('\n');
    out.push_str(&TABLE_UNITS.join("\t"));
    out.push('\n');
    for r in rows {
        out.push_str(&r.index.to_string());
        for v in r.values() {
            out.push('\t');
            out.push_str(&fmt(v));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table() {
        let rows = golden_table();
        assert_eq!(rows.len(), 14);
        assert_eq!(rows[0].jz, -320.1);
        assert_eq!(rows[13].c0, 299.11);
        assert!(rows.iter().enumerate().all(|(k, r)| r.index == k + 1));
    }

    #[test]
    fn render_parse_round_trip() {
        let row = TableRow {
            index: 3,
            e0: 1.5,
            ei: 0.25,
            ez: 2.0,
            c0: 10.0,
            ci: 20.0,
            cz: 0.01,
            omega0: 5.0,
            omegai: 4.0,
            jz: -30.0,
            jx: 7.5,
            jxij: 0.0,
            alpha0: -2.0,
            alphai: -1.9,
            ratio0: 70.0,
            ratioi: 65.0,
        };
        let text = render_table(std::slice::from_ref(&row), |v| format!("{v}"));
        assert_eq!(parse_table(&text).unwrap(), vec![row]);
        assert!(parse_table("a\tb\n").is_err());
        let broken = text.replace("\t7.5", "");
        assert!(parse_table(&broken).is_err());
    }
}

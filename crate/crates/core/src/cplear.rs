//! Comparison with the two published CPLEAR asymmetry measurements.
//!
//! Detection times are the corrected times as published; their temporal
//! uncertainty is not propagated.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::kinematics::{locality_max_ratio, DecayParams};
use crate::lr::{lr_asymmetry_bounds, BoundsInterval};
use crate::qm::qm_asymmetry;
use crate::scan::format_sig;

/// Velocity of the kaons in the proton-antiproton annihilation setup.
pub const CPLEAR_VELOCITY: f64 = 0.85;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CplearRow {
    pub dtau: f64,
    pub measured: f64,
    pub error: f64,
    pub tau1: f64,
    pub tau2: f64,
}

pub const CPLEAR_DATA: [CplearRow; 2] = [
    CplearRow {
        dtau: 0.0,
        measured: 0.88,
        error: 0.17,
        tau1: 0.55,
        tau2: 0.55,
    },
    CplearRow {
        dtau: 1.37,
        measured: 0.56,
        error: 0.12,
        tau1: 0.55,
        tau2: 1.92,
    },
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CplearComparison {
    pub row: CplearRow,
    pub qm: f64,
    pub lr: BoundsInterval,
    pub qm_compatible: bool,
    pub lr_compatible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalityCheck {
    pub velocity: f64,
    pub ratio: f64,
    pub max_ratio: f64,
    pub spacelike: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CplearReport {
    pub rows: Vec<CplearComparison>,
    pub locality: LocalityCheck,
}

/// One-sigma comparison of each row against QM and against the local-realistic range.
/// The QM asymmetry is taken at the published time difference.
pub fn cplear_compare(params: &DecayParams) -> Result<CplearReport> {
    let rows = CPLEAR_DATA
        .iter()
        .map(|row| {
            let qm = qm_asymmetry(params, row.dtau)?;
            let lr = lr_asymmetry_bounds(params, row.tau1, row.tau2)?;
            Ok(CplearComparison {
                row: *row,
                qm,
                lr,
                qm_compatible: (qm - row.measured).abs() <= row.error,
                lr_compatible: lr.distance(row.measured) <= row.error,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let far = &CPLEAR_DATA[1];
    let max_ratio = locality_max_ratio(CPLEAR_VELOCITY)?;
    let ratio = far.tau2 / far.tau1;
    Ok(CplearReport {
        rows,
        locality: LocalityCheck {
            velocity: CPLEAR_VELOCITY,
            ratio,
            max_ratio,
            spacelike: (1.0..max_ratio).contains(&ratio),
        },
    })
}

impl CplearReport {
    pub fn all_compatible(&self) -> bool {
        self.rows.iter().all(|r| r.qm_compatible && r.lr_compatible)
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for CplearReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CPLEAR asymmetry (corrected times as published)")?;
        writeln!(
            f,
            "{:>6} {:>6} {:>6} {:>14} {:>9} {:>20} {:>6} {:>6}",
            "dtau", "tau1", "tau2", "measured", "QM", "LR", "QM 1s", "LR 1s"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>6} {:>6} {:>6} {:>14} {:>9} {:>20} {:>6} {:>6}",
                format_sig(r.row.dtau),
                format_sig(r.row.tau1),
                format_sig(r.row.tau2),
                format!(
                    "{} +- {}",
                    format_sig(r.row.measured),
                    format_sig(r.row.error)
                ),
                format_sig(r.qm),
                format!("[{}, {}]", format_sig(r.lr.lo), format_sig(r.lr.hi)),
                yes_no(r.qm_compatible),
                yes_no(r.lr_compatible),
            )?;
        }
        let l = &self.locality;
        write!(
            f,
            "locality (v = {}): tau2/tau1 = {} < {} -> space-like {}",
            format_sig(l.velocity),
            format_sig(l.ratio),
            format_sig(l.max_ratio),
            if l.spacelike { "OK" } else { "VIOLATED" },
        )
    }
}

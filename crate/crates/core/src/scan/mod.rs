//! Grid scans with golden-section refinement.
//!
//! Each scan evaluates its objective on an evenly spaced grid (in parallel),
//! picks the best grid point (ties go to the smaller abscissa), and refines
//! inside the two neighbouring grid cells. The refined point replaces the grid
//! point only if it is strictly better.
//!
//! CSV columns per scan:
//!
//! | scan        | columns |
//! |-------------|---------|
//! | asymmetry   | `tau1,tau2,a_qm,a_lr_min,a_lr_max,diff,rel_gap` |
//! | wigner      | `tau,tau1,tau2,tau3,p12,p13,p32,w` |
//! | spin wigner | `theta,p_ab,p_ac,p_cb,w` |
//! | chsh        | `tau,tau1,tau2,tau3,tau4,p13,p14,p23,p24,single2,single3,s` |
//!
//! `rel_gap` is empty where `a_qm <= 0.05`.

mod golden;
mod table;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use golden::golden_section_max;
pub use table::{format_sig, round_sig, ScanTable, SIGNIFICANT_DIGITS};

use crate::bell::{chsh_s, wigner_w_kaon, wigner_w_spin, ChshConfig, WignerConfig};
use crate::error::{Error, Result};
use crate::kinematics::{is_spacelike, locality_max_ratio, DecayParams};
use crate::lr::lr_asymmetry_bounds;
use crate::qm::qm_asymmetry;

/// Relative gaps are only formed where the quantum asymmetry exceeds this.
pub const REL_GAP_MIN_ASYMMETRY: f64 = 0.05;
/// Width at which golden-section refinement stops.
pub const REFINE_TOL: f64 = 1e-10;
pub const DEFAULT_STEPS: usize = 2000;
pub const DEFAULT_RANGE: (f64, f64) = (0.0, 5.0);
pub const DEFAULT_REFINE_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanVariable {
    Tau1WithRatio,
    WignerTau,
    WignerTheta,
    ChshTau,
}

/// Range and resolution of a one-dimensional scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub refine_iterations: usize,
}

impl Default for ScanSpec {
    fn default() -> Self {
        ScanSpec {
            lo: DEFAULT_RANGE.0,
            hi: DEFAULT_RANGE.1,
            steps: DEFAULT_STEPS,
            refine_iterations: DEFAULT_REFINE_ITERATIONS,
        }
    }
}

impl ScanSpec {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let spec = ScanSpec {
            lo,
            hi,
            steps,
            refine_iterations: DEFAULT_REFINE_ITERATIONS,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_refine_iterations(mut self, n: usize) -> Self {
        self.refine_iterations = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::invalid(
                "range",
                format!("need lo < hi, got [{}, {}]", self.lo, self.hi),
            ));
        }
        if self.steps < 2 {
            return Err(Error::invalid(
                "steps",
                format!("need at least 2, got {}", self.steps),
            ));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == n {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / n as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremumResult {
    pub variable: ScanVariable,
    pub kind: ExtremumKind,
    pub location: f64,
    pub value: f64,
    /// Component quantities evaluated at `location`.
    pub context: BTreeMap<String, f64>,
}

impl ExtremumResult {
    /// Copy with every number rounded to six significant digits.
    pub fn rounded(&self) -> Self {
        ExtremumResult {
            location: round_sig(self.location),
            value: round_sig(self.value),
            context: self
                .context
                .iter()
                .map(|(k, v)| (k.clone(), round_sig(*v)))
                .collect(),
            ..*self
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rounded()).expect("extremum serializes")
    }
}

/// Best grid point plus refinement. `objective` returns `-inf` where undefined.
fn locate_max<F>(spec: &ScanSpec, xs: &[f64], values: &[f64], objective: F) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let (x0, v0) = (xs[best], values[best]);
    if spec.refine_iterations == 0 || !v0.is_finite() {
        return (x0, v0);
    }
    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(xs.len() - 1)];
    let (x, v) = golden_section_max(&objective, a, b, REFINE_TOL, spec.refine_iterations);
    if v > v0 {
        (x, v)
    } else {
        (x0, v0)
    }
}

fn evaluate<T, F>(xs: &[f64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync,
{
    xs.par_iter().map(|&x| f(x)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutput {
    pub table: ScanTable,
    pub extremum: ExtremumResult,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct DiscrepancyPoint {
    tau1: f64,
    tau2: f64,
    a_qm: f64,
    a_lr_min: f64,
    a_lr_max: f64,
}

impl DiscrepancyPoint {
    fn at(params: &DecayParams, alpha: f64, tau1: f64) -> Result<Self> {
        let tau2 = alpha * tau1;
        let bounds = lr_asymmetry_bounds(params, tau1, tau2)?;
        Ok(DiscrepancyPoint {
            tau1,
            tau2,
            a_qm: qm_asymmetry(params, tau2 - tau1)?,
            a_lr_min: bounds.lo,
            a_lr_max: bounds.hi,
        })
    }

    fn rel_gap(&self) -> Option<f64> {
        (self.a_qm > REL_GAP_MIN_ASYMMETRY).then(|| (self.a_qm - self.a_lr_max) / self.a_qm)
    }
}

/// Quantum asymmetry against the largest local-realistic one along `tau2 = alpha tau1`.
/// The extremum is the largest relative gap `(A_QM - A_LR_max) / A_QM`.
pub fn asymmetry_discrepancy_scan(
    params: &DecayParams,
    alpha: f64,
    spec: &ScanSpec,
) -> Result<ScanOutput> {
    spec.validate()?;
    if !(alpha.is_finite() && alpha >= 1.0) {
        return Err(Error::Ordering {
            tau1: 1.0,
            tau2: alpha,
        });
    }
    if spec.lo < 0.0 {
        return Err(Error::NegativeTime {
            what: "scan range",
            value: spec.lo,
        });
    }
    let xs = spec.grid();
    let points = evaluate(&xs, |t| DiscrepancyPoint::at(params, alpha, t))?;

    let mut table = ScanTable::new(&[
        "tau1", "tau2", "a_qm", "a_lr_min", "a_lr_max", "diff", "rel_gap",
    ]);
    for p in &points {
        table.push(vec![
            Some(p.tau1),
            Some(p.tau2),
            Some(p.a_qm),
            Some(p.a_lr_min),
            Some(p.a_lr_max),
            Some(p.a_qm - p.a_lr_max),
            p.rel_gap(),
        ]);
    }

    let objective = |t: f64| {
        DiscrepancyPoint::at(params, alpha, t)
            .ok()
            .and_then(|p| p.rel_gap())
            .unwrap_or(f64::NEG_INFINITY)
    };
    let values: Vec<f64> = points
        .iter()
        .map(|p| p.rel_gap().unwrap_or(f64::NEG_INFINITY))
        .collect();
    let (location, value) = locate_max(spec, &xs, &values, objective);
    let best = DiscrepancyPoint::at(params, alpha, location)?;

    let mut context = BTreeMap::new();
    context.insert("alpha".into(), alpha);
    context.insert("tau2".into(), best.tau2);
    context.insert("a_qm".into(), best.a_qm);
    context.insert("a_lr_max".into(), best.a_lr_max);
    context.insert("a_lr_min".into(), best.a_lr_min);
    context.insert("diff".into(), best.a_qm - best.a_lr_max);
    context.insert(
        "locality_max_ratio".into(),
        locality_max_ratio(params.velocity)?,
    );
    let spacelike = is_spacelike(best.tau1, best.tau2, params.velocity)?;
    context.insert("spacelike".into(), f64::from(u8::from(spacelike)));

    Ok(ScanOutput {
        table,
        extremum: ExtremumResult {
            variable: ScanVariable::Tau1WithRatio,
            kind: ExtremumKind::Max,
            location,
            value,
            context,
        },
    })
}

pub fn wigner_scan(
    params: &DecayParams,
    config: &WignerConfig,
    spec: &ScanSpec,
) -> Result<ScanOutput> {
    spec.validate()?;
    let xs = spec.grid();
    let points = evaluate(&xs, |t| wigner_w_kaon(params, t, config))?;
    let mut table = ScanTable::new(&["tau", "tau1", "tau2", "tau3", "p12", "p13", "p32", "w"]);
    for (x, v) in xs.iter().zip(&points) {
        table.push(
            [*x, v.tau1, v.tau2, v.tau3, v.p12, v.p13, v.p32, v.w]
                .into_iter()
                .map(Some)
                .collect(),
        );
    }
    let values: Vec<f64> = points.iter().map(|v| v.w).collect();
    let objective = |t: f64| wigner_w_kaon(params, t, config).map_or(f64::NEG_INFINITY, |v| v.w);
    let (location, value) = locate_max(spec, &xs, &values, objective);
    let best = wigner_w_kaon(params, location, config)?;

    let mut context = BTreeMap::new();
    context.insert("p".into(), config.p);
    context.insert("p12".into(), best.p12);
    context.insert("p13".into(), best.p13);
    context.insert("p32".into(), best.p32);
    context.insert("tau2".into(), best.tau2);
    context.insert("tau3".into(), best.tau3);
    context.insert(
        "local".into(),
        f64::from(u8::from(config.is_local(params.velocity)?)),
    );
    Ok(ScanOutput {
        table,
        extremum: ExtremumResult {
            variable: ScanVariable::WignerTau,
            kind: ExtremumKind::Max,
            location,
            value,
            context,
        },
    })
}

/// Spin-singlet Wigner function over the analyzer angle.
pub fn spin_wigner_scan(spec: &ScanSpec) -> Result<ScanOutput> {
    spec.validate()?;
    let xs = spec.grid();
    let points = evaluate(&xs, wigner_w_spin)?;
    let mut table = ScanTable::new(&["theta", "p_ab", "p_ac", "p_cb", "w"]);
    for v in &points {
        table.push(
            [v.theta, v.p_ab, v.p_ac, v.p_cb, v.w]
                .into_iter()
                .map(Some)
                .collect(),
        );
    }
    let values: Vec<f64> = points.iter().map(|v| v.w).collect();
    let objective = |t: f64| wigner_w_spin(t).map_or(f64::NEG_INFINITY, |v| v.w);
    let (location, value) = locate_max(spec, &xs, &values, objective);
    let best = wigner_w_spin(location)?;
    let mut context = BTreeMap::new();
    context.insert("p_ab".into(), best.p_ab);
    context.insert("p_ac".into(), best.p_ac);
    context.insert("p_cb".into(), best.p_cb);
    Ok(ScanOutput {
        table,
        extremum: ExtremumResult {
            variable: ScanVariable::WignerTheta,
            kind: ExtremumKind::Max,
            location,
            value,
            context,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshScanOutput {
    pub table: ScanTable,
    pub min: ExtremumResult,
    pub max: ExtremumResult,
}

pub fn chsh_scan(
    params: &DecayParams,
    config: &ChshConfig,
    spec: &ScanSpec,
) -> Result<ChshScanOutput> {
    spec.validate()?;
    let xs = spec.grid();
    let points = evaluate(&xs, |t| chsh_s(params, t, config))?;
    let mut table = ScanTable::new(&[
        "tau", "tau1", "tau2", "tau3", "tau4", "p13", "p14", "p23", "p24", "single2", "single3",
        "s",
    ]);
    for (x, v) in xs.iter().zip(&points) {
        let [t1, t2, t3, t4] = v.times;
        table.push(
            [
                *x, t1, t2, t3, t4, v.p13, v.p14, v.p23, v.p24, v.single2, v.single3, v.s,
            ]
            .into_iter()
            .map(Some)
            .collect(),
        );
    }

    let extremum = |kind: ExtremumKind| -> Result<ExtremumResult> {
        let sign = match kind {
            ExtremumKind::Max => 1.0,
            ExtremumKind::Min => -1.0,
        };
        let values: Vec<f64> = points.iter().map(|v| sign * v.s).collect();
        let objective =
            |t: f64| chsh_s(params, t, config).map_or(f64::NEG_INFINITY, |v| sign * v.s);
        let (location, _) = locate_max(spec, &xs, &values, objective);
        let best = chsh_s(params, location, config)?;
        let mut context = BTreeMap::new();
        context.insert("p".into(), config.p);
        context.insert(
            "renormalized".into(),
            f64::from(u8::from(config.renormalized)),
        );
        context.insert("p13".into(), best.p13);
        context.insert("p14".into(), best.p14);
        context.insert("p23".into(), best.p23);
        context.insert("p24".into(), best.p24);
        context.insert(
            "local".into(),
            f64::from(u8::from(config.is_local(params.velocity)?)),
        );
        Ok(ExtremumResult {
            variable: ScanVariable::ChshTau,
            kind,
            location,
            value: best.s,
            context,
        })
    };

    Ok(ChshScanOutput {
        min: extremum(ExtremumKind::Min)?,
        max: extremum(ExtremumKind::Max)?,
        table,
    })
}

/// Upper end of the first run of grid points, starting at the first grid
/// point where `pred` holds, on which `pred` keeps holding.
pub fn first_region_end(xs: &[f64], pred: impl Fn(usize) -> bool) -> Option<f64> {
    let start = (0..xs.len()).find(|&i| pred(i))?;
    let mut end = start;
    while end + 1 < xs.len() && pred(end + 1) {
        end += 1;
    }
    Some(xs[end])
}

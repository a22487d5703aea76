//! The free parameters of the most general local-realistic pair model and
//! the quantities back-solved from them.
//!
//! A model is fixed by four three-time probabilities, each stored as a ratio
//! to the survival factor at the later time: `p111 / E_S(t2)`,
//! `p112 / E_S(t2)`, `p333 / E_L(t2)` and `p334 / E_L(t2)`. Everything else
//! follows from the marginal constraints of the single-kaon matrix.

use serde::{Deserialize, Serialize};

use crate::error::{check_ordered, Error, Result};
use crate::kinematics::{q_weights_unchecked, survival_unchecked, DecayParams};

/// Slack allowed when testing membership of the closed feasibility intervals.
pub const FEASIBILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsInterval {
    pub lo: f64,
    pub hi: f64,
}

impl BoundsInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        BoundsInterval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo - FEASIBILITY_TOL && x <= self.hi + FEASIBILITY_TOL
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// `lo + t (hi - lo)`.
    pub fn lerp(&self, t: f64) -> f64 {
        self.lo + t * (self.hi - self.lo)
    }

    /// Distance from `x` to the interval; zero inside.
    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrModelParams {
    pub p111_norm: f64,
    pub p112_norm: f64,
    pub p333_norm: f64,
    pub p334_norm: f64,
}

impl LrModelParams {
    fn values(&self) -> [(&'static str, f64); 4] {
        [
            ("p111_norm", self.p111_norm),
            ("p112_norm", self.p112_norm),
            ("p333_norm", self.p333_norm),
            ("p334_norm", self.p334_norm),
        ]
    }
}

/// The four closed intervals bounding the normalized free parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityBox {
    pub tau1: f64,
    pub tau2: f64,
    pub p111: BoundsInterval,
    pub p112: BoundsInterval,
    pub p333: BoundsInterval,
    pub p334: BoundsInterval,
}

impl FeasibilityBox {
    fn intervals(&self) -> [BoundsInterval; 4] {
        [self.p111, self.p112, self.p333, self.p334]
    }

    /// Point at fractional position `t[k]` along each interval.
    pub fn at(&self, t: [f64; 4]) -> LrModelParams {
        LrModelParams {
            p111_norm: self.p111.lerp(t[0]),
            p112_norm: self.p112.lerp(t[1]),
            p333_norm: self.p333.lerp(t[2]),
            p334_norm: self.p334.lerp(t[3]),
        }
    }

    pub fn lower(&self) -> LrModelParams {
        self.at([0.0; 4])
    }

    pub fn upper(&self) -> LrModelParams {
        self.at([1.0; 4])
    }

    pub fn midpoint(&self) -> LrModelParams {
        self.at([0.5; 4])
    }

    /// All sixteen vertices of the box.
    pub fn corners(&self) -> Vec<LrModelParams> {
        (0..16u32)
            .map(|mask| {
                let bit = |k: u32| f64::from((mask >> k) & 1);
                self.at([bit(0), bit(1), bit(2), bit(3)])
            })
            .collect()
    }

    pub fn check(&self, params: &LrModelParams) -> Result<()> {
        for ((name, value), interval) in params.values().into_iter().zip(self.intervals()) {
            if !value.is_finite() || !interval.contains(value) {
                return Err(Error::ConstraintViolation {
                    name,
                    value,
                    lo: interval.lo,
                    hi: interval.hi,
                    tau1: self.tau1,
                    tau2: self.tau2,
                });
            }
        }
        Ok(())
    }
}

pub fn feasibility_box(params: &DecayParams, tau1: f64, tau2: f64) -> Result<FeasibilityBox> {
    check_ordered(tau1, tau2)?;
    let (qp1, qm1) = q_weights_unchecked(params, tau1);
    let (qp2, qm2) = q_weights_unchecked(params, tau2);
    let same = BoundsInterval::new((qp2 - qm1).max(0.0), qp1.min(qp2));
    let flip = BoundsInterval::new((qm1 - qp2).max(0.0), qm1.min(qm2));
    Ok(FeasibilityBox {
        tau1,
        tau2,
        p111: same,
        p112: flip,
        p333: same,
        p334: flip,
    })
}

/// A set of free parameters validated against the detection times it is used at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LrModel {
    pub tau1: f64,
    pub tau2: f64,
    #[serde(flatten)]
    pub params: LrModelParams,
}

#[derive(Deserialize)]
struct RawModel {
    tau1: f64,
    tau2: f64,
    #[serde(flatten)]
    params: LrModelParams,
}

impl LrModel {
    pub fn new(decay: &DecayParams, tau1: f64, tau2: f64, params: LrModelParams) -> Result<Self> {
        feasibility_box(decay, tau1, tau2)?.check(&params)?;
        Ok(LrModel { tau1, tau2, params })
    }

    /// Model at fractional box position `t` (each component in [0, 1]).
    pub fn from_box_fractions(
        decay: &DecayParams,
        tau1: f64,
        tau2: f64,
        t: [f64; 4],
    ) -> Result<Self> {
        let fbox = feasibility_box(decay, tau1, tau2)?;
        LrModel::new(decay, tau1, tau2, fbox.at(t))
    }

    pub fn midpoint(decay: &DecayParams, tau1: f64, tau2: f64) -> Result<Self> {
        LrModel::from_box_fractions(decay, tau1, tau2, [0.5; 4])
    }

    /// The box corner that maximizes the asymmetry. At equal times it is the
    /// only model with perfect strangeness anti-correlation.
    pub fn max_asymmetry(decay: &DecayParams, tau1: f64, tau2: f64) -> Result<Self> {
        LrModel::from_box_fractions(decay, tau1, tau2, [1.0; 4])
    }

    pub fn min_asymmetry(decay: &DecayParams, tau1: f64, tau2: f64) -> Result<Self> {
        LrModel::from_box_fractions(decay, tau1, tau2, [0.0; 4])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    /// Parses the flat JSON form and re-validates it.
    pub fn from_json(decay: &DecayParams, text: &str) -> Result<Self> {
        let raw: RawModel =
            serde_json::from_str(text).map_err(|e| Error::invalid("model json", e.to_string()))?;
        LrModel::new(decay, raw.tau1, raw.tau2, raw.params)
    }
}

/// Two-time transition probabilities `p_ij(t2|t1)` of one kaon between the
/// two detection times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalProbs {
    pub p11: f64,
    pub p12: f64,
    pub p21: f64,
    pub p22: f64,
    pub p33: f64,
    pub p34: f64,
    pub p43: f64,
    pub p44: f64,
}

pub fn conditional_probs(params: &DecayParams, model: &LrModel) -> ConditionalProbs {
    let dt = model.tau2 - model.tau1;
    let (es_dt, el_dt) = survival_unchecked(params, dt);
    let m = &model.params;
    // (p111 + p112) / E_S(t1) with p11x = norm * E_S(t2), and E_S(t2)/E_S(t1) = E_S(t2 - t1)
    let p11 = es_dt * (m.p111_norm + m.p112_norm);
    let p33 = el_dt * (m.p333_norm + m.p334_norm);
    let p12 = es_dt - p11;
    let p34 = el_dt - p33;
    ConditionalProbs {
        p11,
        p12,
        p21: p12,
        p22: p11,
        p33,
        p34,
        p43: p34,
        p44: p33,
    }
}

/// The eight three-time probabilities `p_ijk(t2, t1 | 0)` of one CP sector.
/// For the CP = -1 sector read state 1 as K3 and state 2 as K4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorThreeTime {
    pub p111: f64,
    pub p112: f64,
    pub p121: f64,
    pub p122: f64,
    pub p211: f64,
    pub p212: f64,
    pub p221: f64,
    pub p222: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeTimeProbs {
    pub cp_even: SectorThreeTime,
    pub cp_odd: SectorThreeTime,
}

fn solve_sector(
    norm_same: f64,
    norm_flip: f64,
    e2: f64,
    q1: (f64, f64),
    q2: (f64, f64),
) -> SectorThreeTime {
    let (qp1, _qm1) = q1;
    let (qp2, qm2) = q2;
    let p111 = norm_same * e2;
    let p112 = norm_flip * e2;
    // first system: unknowns p111, p121, p211, p221
    let p121 = e2 * qp2 - p111;
    let p211 = e2 * qp1 - p111;
    let p221 = e2 * qm2 - p211;
    // second system: unknowns p222, p212, p122, p112
    let p122 = e2 * qm2 - p112;
    let p222 = e2 * qp1 - p122;
    let p212 = e2 * qp2 - p222;
    SectorThreeTime {
        p111,
        p112,
        p121,
        p122,
        p211,
        p212,
        p221,
        p222,
    }
}

pub fn three_time_probs(params: &DecayParams, model: &LrModel) -> ThreeTimeProbs {
    let (es2, el2) = survival_unchecked(params, model.tau2);
    let q1 = q_weights_unchecked(params, model.tau1);
    let q2 = q_weights_unchecked(params, model.tau2);
    let m = &model.params;
    ThreeTimeProbs {
        cp_even: solve_sector(m.p111_norm, m.p112_norm, es2, q1, q2),
        cp_odd: solve_sector(m.p333_norm, m.p334_norm, el2, q1, q2),
    }
}

//! Wigner and CHSH inequalities evaluated with quantum-mechanical
//! probabilities. The inequalities themselves hold for every local-realistic
//! model; a positive Wigner value or a CHSH value outside `[-1, 0]` is a
//! quantum violation.

use serde::{Deserialize, Serialize};

use crate::error::{check_time, Error, Result};
use crate::kinematics::{locality_max_ratio, survival_unchecked, DecayParams};
use crate::qm::{qm_asymmetry_unchecked, qm_joint_strangeness, undecayed_pair, Strangeness};

/// Three detection times `tau1 = tau`, `tau2 = p tau`, `tau3 = (p + 1) tau / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerConfig {
    pub p: f64,
    /// Detected flavour in every joint; K0bar by default, K0 gives identical values.
    pub strangeness: Strangeness,
}

impl WignerConfig {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::invalid(
                "p",
                format!("Wigner ratio must be >= 1, got {p}"),
            ));
        }
        Ok(WignerConfig {
            p,
            strangeness: Strangeness::K0bar,
        })
    }

    pub fn with_strangeness(mut self, strangeness: Strangeness) -> Self {
        self.strangeness = strangeness;
        self
    }

    pub fn times(&self, tau: f64) -> (f64, f64, f64) {
        (tau, self.p * tau, 0.5 * (self.p + 1.0) * tau)
    }

    /// All detection pairs space-like separated for kaon velocity `velocity`.
    pub fn is_local(&self, velocity: f64) -> Result<bool> {
        Ok(self.p < locality_max_ratio(velocity)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerValue {
    pub tau1: f64,
    pub tau2: f64,
    pub tau3: f64,
    /// `P[t1, t2]`
    pub p12: f64,
    /// `P[t1, t3]`
    pub p13: f64,
    /// `P[t3, t2]`
    pub p32: f64,
    pub w: f64,
}

pub fn wigner_w_kaon(params: &DecayParams, tau: f64, config: &WignerConfig) -> Result<WignerValue> {
    check_time("tau", tau)?;
    let (tau1, tau2, tau3) = config.times(tau);
    let s = config.strangeness;
    let p12 = qm_joint_strangeness(params, s, s, tau1, tau2)?;
    let p13 = qm_joint_strangeness(params, s, s, tau1, tau3)?;
    let p32 = qm_joint_strangeness(params, s, s, tau3, tau2)?;
    Ok(WignerValue {
        tau1,
        tau2,
        tau3,
        p12,
        p13,
        p32,
        w: p12 - p13 - p32,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinWignerValue {
    pub theta: f64,
    pub p_ab: f64,
    pub p_ac: f64,
    pub p_cb: f64,
    pub w: f64,
}

/// Spin-singlet Wigner function with analyzers at `0`, `theta`, `2 theta`.
pub fn wigner_w_spin(theta: f64) -> Result<SpinWignerValue> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::invalid(
            "theta",
            format!("must lie in [0, pi], got {theta}"),
        ));
    }
    let minus_minus = |angle: f64| 0.25 * (1.0 - angle.cos());
    let p_ab = minus_minus(2.0 * theta);
    let p_ac = minus_minus(theta);
    Ok(SpinWignerValue {
        theta,
        p_ab,
        p_ac,
        p_cb: p_ac,
        w: p_ab - 2.0 * p_ac,
    })
}

/// Like-strangeness joint divided by the probability that both kaons survive.
pub fn renormalized_joint(params: &DecayParams, tau: f64, tau_prime: f64) -> Result<f64> {
    renormalized_joint_for(params, Strangeness::K0bar, tau, tau_prime)
}

pub fn renormalized_joint_for(
    params: &DecayParams,
    strangeness: Strangeness,
    tau: f64,
    tau_prime: f64,
) -> Result<f64> {
    let joint = qm_joint_strangeness(params, strangeness, strangeness, tau, tau_prime)?;
    let undecayed = undecayed_pair(params, tau, tau_prime)?;
    if undecayed == 0.0 {
        return Err(Error::invalid(
            "tau",
            format!("no surviving pairs at ({tau}, {tau_prime}) in double precision"),
        ));
    }
    Ok(joint / undecayed)
}

/// Single-kaon flavour probability divided by the single survival probability.
fn renormalized_single(params: &DecayParams, tau: f64) -> f64 {
    let (es, el) = survival_unchecked(params, tau);
    (0.25 * (es + el)) / (0.5 * (es + el))
}

fn raw_single(params: &DecayParams, tau: f64) -> f64 {
    let (es, el) = survival_unchecked(params, tau);
    0.25 * (es + el)
}

/// Four detection times `tau1 = p tau`, `tau2 = (p+2) tau`, `tau3 = (p+1) tau`,
/// `tau4 = (p+3) tau`: left side measures at `tau1`/`tau2`, right side at `tau3`/`tau4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshConfig {
    pub p: f64,
    pub renormalized: bool,
    pub strangeness: Strangeness,
}

impl ChshConfig {
    pub fn new(p: f64, renormalized: bool) -> Result<Self> {
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::invalid(
                "p",
                format!("CHSH offset must be >= 0, got {p}"),
            ));
        }
        Ok(ChshConfig {
            p,
            renormalized,
            strangeness: Strangeness::K0bar,
        })
    }

    pub fn with_strangeness(mut self, strangeness: Strangeness) -> Self {
        self.strangeness = strangeness;
        self
    }

    pub fn times(&self, tau: f64) -> [f64; 4] {
        let p = self.p;
        [p * tau, (p + 2.0) * tau, (p + 1.0) * tau, (p + 3.0) * tau]
    }

    /// `tau4 / tau1 = (p + 3) / p` inside the locality window.
    pub fn is_local(&self, velocity: f64) -> Result<bool> {
        let bound = locality_max_ratio(velocity)?;
        Ok(self.p > 0.0 && (self.p + 3.0) / self.p < bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshValue {
    pub times: [f64; 4],
    pub p13: f64,
    pub p14: f64,
    pub p23: f64,
    pub p24: f64,
    pub single2: f64,
    pub single3: f64,
    pub s: f64,
}

impl ChshValue {
    /// Outside the local-realistic range `[-1, 0]`.
    pub fn violates(&self) -> bool {
        self.s < -1.0 || self.s > 0.0
    }
}

/// CHSH combination assembled term by term from joint and single probabilities
/// at the configured times. Local realism requires `-1 <= s <= 0`.
pub fn chsh_s(params: &DecayParams, tau: f64, config: &ChshConfig) -> Result<ChshValue> {
    check_time("tau", tau)?;
    let times = config.times(tau);
    let [t1, t2, t3, t4] = times;
    let s = config.strangeness;
    let joint = |a: f64, b: f64| -> Result<f64> {
        if config.renormalized {
            renormalized_joint_for(params, s, a, b)
        } else {
            qm_joint_strangeness(params, s, s, a, b)
        }
    };
    let single = |t: f64| {
        if config.renormalized {
            renormalized_single(params, t)
        } else {
            raw_single(params, t)
        }
    };
    let p13 = joint(t1, t3)?;
    let p14 = joint(t1, t4)?;
    let p23 = joint(t2, t3)?;
    let p24 = joint(t2, t4)?;
    let single2 = single(t2);
    let single3 = single(t3);
    Ok(ChshValue {
        times,
        p13,
        p14,
        p23,
        p24,
        single2,
        single3,
        s: p13 - p14 + p23 + p24 - single2 - single3,
    })
}

/// Renormalized CHSH value written through the asymmetry alone:
/// `[2 - 3 A(tau) + A(3 tau)] / 4 - 1`.
pub fn chsh_s_closed_form(params: &DecayParams, tau: f64) -> Result<f64> {
    check_time("tau", tau)?;
    let a1 = qm_asymmetry_unchecked(params, tau);
    let a3 = qm_asymmetry_unchecked(params, 3.0 * tau);
    Ok(0.25 * (2.0 - 3.0 * a1 + a3) - 1.0)
}

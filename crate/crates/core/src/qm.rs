//! Quantum-mechanical observables of the entangled kaon pair.
//!
//! Joint probabilities are per produced pair (not conditioned on survival).
//! Slot 1 is measured at `tau1` on the left, slot 2 at `tau2` on the right;
//! the formulas hold for either time ordering.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_time, Error, Result};
use crate::kinematics::{mixing_weight, survival_unchecked, DecayParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strangeness {
    K0,
    K0bar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cp {
    /// CP = +1, short lived.
    KS,
    /// CP = -1, long lived.
    KL,
}

/// Result of detecting an undecayed kaon in either measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Strangeness(Strangeness),
    Cp(Cp),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    StrangenessStrangeness,
    CpCp,
    CpStrangeness,
    StrangenessCp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointProbability {
    pub value: f64,
    pub basis: Basis,
}

impl Outcome {
    pub const K0: Outcome = Outcome::Strangeness(Strangeness::K0);
    pub const K0BAR: Outcome = Outcome::Strangeness(Strangeness::K0bar);
    pub const KS: Outcome = Outcome::Cp(Cp::KS);
    pub const KL: Outcome = Outcome::Cp(Cp::KL);

    pub const ALL: [Outcome; 4] = [Outcome::K0, Outcome::K0BAR, Outcome::KS, Outcome::KL];
}

impl Strangeness {
    pub fn opposite(self) -> Self {
        match self {
            Strangeness::K0 => Strangeness::K0bar,
            Strangeness::K0bar => Strangeness::K0,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Outcome::Strangeness(Strangeness::K0) => "K0",
            Outcome::Strangeness(Strangeness::K0bar) => "K0bar",
            Outcome::Cp(Cp::KS) => "KS",
            Outcome::Cp(Cp::KL) => "KL",
        };
        f.write_str(name)
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k0" => Ok(Outcome::K0),
            "k0bar" | "k0b" | "antik0" => Ok(Outcome::K0BAR),
            "ks" => Ok(Outcome::KS),
            "kl" => Ok(Outcome::KL),
            _ => Err(Error::invalid(
                "outcome",
                format!("expected one of K0, K0bar, KS, KL; got `{s}`"),
            )),
        }
    }
}

fn check_pair(tau1: f64, tau2: f64) -> Result<()> {
    check_time("tau1", tau1)?;
    check_time("tau2", tau2)?;
    Ok(())
}

/// Probability of undecayed kaons in both slots: `1/2 [E_S(t1)E_L(t2) + E_L(t1)E_S(t2)]`.
pub fn undecayed_pair(params: &DecayParams, tau1: f64, tau2: f64) -> Result<f64> {
    check_pair(tau1, tau2)?;
    let (es1, el1) = survival_unchecked(params, tau1);
    let (es2, el2) = survival_unchecked(params, tau2);
    Ok(0.5 * (es1 * el2 + el1 * es2))
}

pub fn qm_joint_strangeness(
    params: &DecayParams,
    s1: Strangeness,
    s2: Strangeness,
    tau1: f64,
    tau2: f64,
) -> Result<f64> {
    check_pair(tau1, tau2)?;
    let (es1, el1) = survival_unchecked(params, tau1);
    let (es2, el2) = survival_unchecked(params, tau2);
    let (es12, el12) = survival_unchecked(params, tau1 + tau2);
    let sign = if s1 == s2 { -1.0 } else { 1.0 };
    let interference = 2.0 * (el12 * es12).sqrt() * (params.delta_m * (tau2 - tau1)).cos();
    let value = 0.125 * (el1 * es2 + es1 * el2 + sign * interference);
    // the like-strangeness combination cancels to zero at equal times
    Ok(value.max(0.0))
}

pub fn qm_joint_cp(params: &DecayParams, c1: Cp, c2: Cp, tau1: f64, tau2: f64) -> Result<f64> {
    check_pair(tau1, tau2)?;
    let (es1, el1) = survival_unchecked(params, tau1);
    let (es2, el2) = survival_unchecked(params, tau2);
    Ok(match (c1, c2) {
        (Cp::KL, Cp::KS) => 0.5 * el1 * es2,
        (Cp::KS, Cp::KL) => 0.5 * es1 * el2,
        _ => 0.0,
    })
}

/// CP outcome in slot 1, strangeness in slot 2. Independent of the strangeness value.
pub fn qm_joint_cp_strangeness(
    params: &DecayParams,
    c1: Cp,
    _s2: Strangeness,
    tau1: f64,
    tau2: f64,
) -> Result<f64> {
    check_pair(tau1, tau2)?;
    let (es1, el1) = survival_unchecked(params, tau1);
    let (es2, el2) = survival_unchecked(params, tau2);
    Ok(match c1 {
        Cp::KS => 0.25 * es1 * el2,
        Cp::KL => 0.25 * el1 * es2,
    })
}

/// Strangeness outcome in slot 1, CP in slot 2.
pub fn qm_joint_strangeness_cp(
    params: &DecayParams,
    _s1: Strangeness,
    c2: Cp,
    tau1: f64,
    tau2: f64,
) -> Result<f64> {
    check_pair(tau1, tau2)?;
    let (es1, el1) = survival_unchecked(params, tau1);
    let (es2, el2) = survival_unchecked(params, tau2);
    Ok(match c2 {
        Cp::KL => 0.25 * es1 * el2,
        Cp::KS => 0.25 * el1 * es2,
    })
}

pub fn qm_joint(
    params: &DecayParams,
    o1: Outcome,
    o2: Outcome,
    tau1: f64,
    tau2: f64,
) -> Result<JointProbability> {
    use Outcome::*;
    let (value, basis) = match (o1, o2) {
        (Strangeness(s1), Strangeness(s2)) => (
            qm_joint_strangeness(params, s1, s2, tau1, tau2)?,
            Basis::StrangenessStrangeness,
        ),
        (Cp(c1), Cp(c2)) => (qm_joint_cp(params, c1, c2, tau1, tau2)?, Basis::CpCp),
        (Cp(c1), Strangeness(s2)) => (
            qm_joint_cp_strangeness(params, c1, s2, tau1, tau2)?,
            Basis::CpStrangeness,
        ),
        (Strangeness(s1), Cp(c2)) => (
            qm_joint_strangeness_cp(params, s1, c2, tau1, tau2)?,
            Basis::StrangenessCp,
        ),
    };
    Ok(JointProbability { value, basis })
}

pub fn qm_single(params: &DecayParams, outcome: Outcome, tau: f64) -> Result<f64> {
    check_time("tau", tau)?;
    let (es, el) = survival_unchecked(params, tau);
    Ok(match outcome {
        Outcome::Strangeness(_) => 0.25 * (es + el),
        Outcome::Cp(Cp::KS) => 0.5 * es,
        Outcome::Cp(Cp::KL) => 0.5 * el,
    })
}

/// Closed-form asymmetry; depends only on the time difference.
pub fn qm_asymmetry(params: &DecayParams, dtau: f64) -> Result<f64> {
    check_time("dtau", dtau)?;
    Ok(qm_asymmetry_unchecked(params, dtau))
}

/// Even in `dtau`, so either time ordering may be passed.
#[inline]
pub(crate) fn qm_asymmetry_unchecked(params: &DecayParams, dtau: f64) -> f64 {
    mixing_weight(params, dtau) * (params.delta_m * dtau).cos()
}

/// Unlike-minus-like over unlike-plus-like strangeness joints, for any theory.
/// Arguments are `P[K0,K0bar]`, `P[K0bar,K0]`, `P[K0,K0]`, `P[K0bar,K0bar]`.
pub fn asymmetry_from_joints(k0_k0bar: f64, k0bar_k0: f64, k0_k0: f64, k0bar_k0bar: f64) -> f64 {
    let unlike = k0_k0bar + k0bar_k0;
    let like = k0_k0 + k0bar_k0bar;
    (unlike - like) / (unlike + like)
}

/// Asymmetry assembled from the four QM strangeness joints.
pub fn qm_asymmetry_from_joints(params: &DecayParams, tau1: f64, tau2: f64) -> Result<f64> {
    use Strangeness::*;
    let p = |a, b| qm_joint_strangeness(params, a, b, tau1, tau2);
    Ok(asymmetry_from_joints(
        p(K0, K0bar)?,
        p(K0bar, K0)?,
        p(K0, K0)?,
        p(K0bar, K0bar)?,
    ))
}

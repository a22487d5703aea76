//! The eighteen realistic pair states at a time pair `(t1, t2)` with
//! `t1 <= t2`, their probabilities, and the observables read off them.

use serde::{Deserialize, Serialize};

use crate::error::{check_ordered, Result};
use crate::kinematics::{q_weights_unchecked, survival_unchecked, DecayParams};
use crate::lr::model::{conditional_probs, BoundsInterval, LrModel};
use crate::qm::{Cp, Outcome, Strangeness};

/// Realistic single-kaon states: definite strangeness and CP at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KaonState {
    K1,
    K2,
    K3,
    K4,
}

impl KaonState {
    pub fn strangeness(self) -> Strangeness {
        match self {
            KaonState::K1 | KaonState::K3 => Strangeness::K0,
            KaonState::K2 | KaonState::K4 => Strangeness::K0bar,
        }
    }

    pub fn cp(self) -> Cp {
        match self {
            KaonState::K1 | KaonState::K2 => Cp::KS,
            KaonState::K3 | KaonState::K4 => Cp::KL,
        }
    }
}

/// What one side of the pair holds at its detection time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SlotState {
    Kaon(KaonState),
    /// Decay products of a kaon with the given CP.
    Decayed(Cp),
}

impl SlotState {
    /// Whether detecting `outcome` is consistent with this slot. Decay
    /// products never register as an undecayed kaon.
    pub fn shows(self, outcome: Outcome) -> bool {
        match (self, outcome) {
            (SlotState::Kaon(k), Outcome::Strangeness(s)) => k.strangeness() == s,
            (SlotState::Kaon(k), Outcome::Cp(c)) => k.cp() == c,
            (SlotState::Decayed(_), _) => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// Direction 1, measured at `tau1`.
    Left,
    /// Direction 2, measured at `tau2 >= tau1`.
    Right,
}

pub const N_STATES: usize = 18;

use KaonState::*;
use SlotState::{Decayed, Kaon};

/// Left/right content of each pair state, in table order (state 1 first).
pub const PAIR_STATES: [(SlotState, SlotState); N_STATES] = [
    (Kaon(K1), Kaon(K4)),
    (Kaon(K1), Decayed(Cp::KL)),
    (Decayed(Cp::KS), Kaon(K4)),
    (Kaon(K1), Kaon(K3)),
    (Kaon(K2), Kaon(K3)),
    (Kaon(K2), Decayed(Cp::KL)),
    (Decayed(Cp::KS), Kaon(K3)),
    (Kaon(K2), Kaon(K4)),
    (Kaon(K3), Kaon(K2)),
    (Kaon(K3), Decayed(Cp::KS)),
    (Decayed(Cp::KL), Kaon(K2)),
    (Kaon(K3), Kaon(K1)),
    (Kaon(K4), Kaon(K1)),
    (Kaon(K4), Decayed(Cp::KS)),
    (Decayed(Cp::KL), Kaon(K1)),
    (Kaon(K4), Kaon(K2)),
    (Decayed(Cp::KS), Decayed(Cp::KL)),
    (Decayed(Cp::KL), Decayed(Cp::KS)),
];

/// Zero-based indices of the states on which `o1` (left) and `o2` (right) are both seen.
pub fn joint_states(o1: Outcome, o2: Outcome) -> Vec<usize> {
    PAIR_STATES
        .iter()
        .enumerate()
        .filter(|(_, (l, r))| l.shows(o1) && r.shows(o2))
        .map(|(i, _)| i)
        .collect()
}

/// Zero-based indices of the states on which `outcome` is seen on `side`.
pub fn single_states(side: Side, outcome: Outcome) -> Vec<usize> {
    PAIR_STATES
        .iter()
        .enumerate()
        .filter(|(_, (l, r))| match side {
            Side::Left => l.shows(outcome),
            Side::Right => r.shows(outcome),
        })
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairStateTable {
    pub tau1: f64,
    pub tau2: f64,
    pub probabilities: [f64; N_STATES],
}

impl PairStateTable {
    /// One-based accessor, `p(1)` is the first state.
    pub fn p(&self, state: usize) -> f64 {
        self.probabilities[state - 1]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn sum_states(&self, states: &[usize]) -> f64 {
        states.iter().map(|&i| self.probabilities[i]).sum()
    }

    pub fn joint(&self, o1: Outcome, o2: Outcome) -> f64 {
        self.sum_states(&joint_states(o1, o2))
    }

    pub fn single(&self, side: Side, outcome: Outcome) -> f64 {
        self.sum_states(&single_states(side, outcome))
    }
}

pub fn pair_state_table(params: &DecayParams, model: &LrModel) -> PairStateTable {
    let (t1, t2) = (model.tau1, model.tau2);
    let (es1, el1) = survival_unchecked(params, t1);
    let (es2, el2) = survival_unchecked(params, t2);
    let c = conditional_probs(params, model);
    let both = 0.25 * es1 * el1;

    let mut p = [0.0; N_STATES];
    p[0] = both * c.p44;
    p[1] = 0.25 * es1 * (1.0 - el2);
    p[2] = 0.25 * (1.0 - es1) * el1 * (c.p43 + c.p44);
    p[3] = both * c.p34;
    p[4] = both * c.p33;
    p[5] = p[1];
    p[6] = 0.25 * (1.0 - es1) * el1 * (c.p33 + c.p34);
    p[7] = both * c.p43;
    p[8] = both * c.p22;
    p[9] = 0.25 * el1 * (1.0 - es2);
    p[10] = 0.25 * es1 * (1.0 - el1) * (c.p21 + c.p22);
    p[11] = both * c.p12;
    p[12] = both * c.p11;
    p[13] = p[9];
    p[14] = 0.25 * es1 * (1.0 - el1) * (c.p11 + c.p12);
    p[15] = both * c.p21;
    p[16] = 0.5 * (1.0 - es1) * (1.0 - el2);
    p[17] = 0.5 * (1.0 - el1) * (1.0 - es2);
    PairStateTable {
        tau1: t1,
        tau2: t2,
        probabilities: p,
    }
}

/// Joint detection probability, summed over the pair states that show both outcomes.
pub fn lr_joint(params: &DecayParams, model: &LrModel, o1: Outcome, o2: Outcome) -> f64 {
    pair_state_table(params, model).joint(o1, o2)
}

/// Single-kaon detection probability on one side, summed over pair states.
pub fn lr_single(params: &DecayParams, model: &LrModel, side: Side, outcome: Outcome) -> f64 {
    pair_state_table(params, model).single(side, outcome)
}

pub fn lr_asymmetry(params: &DecayParams, model: &LrModel) -> f64 {
    let (es_dt, el_dt) = survival_unchecked(params, model.tau2 - model.tau1);
    let c = conditional_probs(params, model);
    2.0 * (c.p11 + c.p33) / (es_dt + el_dt) - 1.0
}

/// Range of asymmetries reachable by any local-realistic model at `(tau1, tau2)`.
pub fn lr_asymmetry_bounds(params: &DecayParams, tau1: f64, tau2: f64) -> Result<BoundsInterval> {
    check_ordered(tau1, tau2)?;
    let (qp1, qm1) = q_weights_unchecked(params, tau1);
    let (qp2, _) = q_weights_unchecked(params, tau2);
    Ok(BoundsInterval::new(
        2.0 * (qp2 - qm1).abs() - 1.0,
        1.0 - 2.0 * (qp2 - qp1).abs(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qm::asymmetry_from_joints;

    fn d() -> DecayParams {
        DecayParams::default()
    }

    #[test]
    fn state_lists_match_reference_rows() {
        let one_based = |v: Vec<usize>| v.into_iter().map(|i| i + 1).collect::<Vec<_>>();
        assert_eq!(
            one_based(joint_states(Outcome::K0, Outcome::K0BAR)),
            vec![1, 9]
        );
        assert_eq!(
            one_based(joint_states(Outcome::K0BAR, Outcome::K0)),
            vec![5, 13]
        );
        assert_eq!(
            one_based(joint_states(Outcome::K0, Outcome::K0)),
            vec![4, 12]
        );
        assert_eq!(
            one_based(joint_states(Outcome::K0BAR, Outcome::K0BAR)),
            vec![8, 16]
        );
        assert_eq!(
            one_based(joint_states(Outcome::KL, Outcome::KS)),
            vec![9, 12, 13, 16]
        );
        assert_eq!(
            one_based(joint_states(Outcome::KS, Outcome::KL)),
            vec![1, 4, 5, 8]
        );
        assert!(joint_states(Outcome::KS, Outcome::KS).is_empty());
        assert!(joint_states(Outcome::KL, Outcome::KL).is_empty());
        assert_eq!(
            one_based(single_states(Side::Left, Outcome::K0)),
            vec![1, 2, 4, 9, 10, 12]
        );
    }

    #[test]
    fn creation_time_table() {
        let p = d();
        for model in [
            LrModel::midpoint(&p, 0.0, 0.0).unwrap(),
            LrModel::min_asymmetry(&p, 0.0, 0.0).unwrap(),
        ] {
            let t = pair_state_table(&p, &model);
            for (i, &v) in t.probabilities.iter().enumerate() {
                let expected = if [0, 4, 8, 12].contains(&i) {
                    0.25
                } else {
                    0.0
                };
                assert_eq!(v, expected, "state {}", i + 1);
            }
        }
    }

    #[test]
    fn equal_time_anticorrelation_rows_vanish() {
        let p = d();
        for tau in [0.3, 0.55, 1.7, 4.0] {
            let model = LrModel::max_asymmetry(&p, tau, tau).unwrap();
            let t = pair_state_table(&p, &model);
            for s in [4, 8, 12, 16] {
                assert!(t.p(s).abs() < 1e-15, "state {s} = {}", t.p(s));
            }
            assert!(lr_joint(&p, &model, Outcome::K0, Outcome::K0).abs() < 1e-15);
            assert!((lr_asymmetry(&p, &model) - 1.0).abs() < 1e-14);
        }
        // the rest of the equal-time box keeps like-strangeness weight
        let lower = LrModel::min_asymmetry(&p, 0.55, 0.55).unwrap();
        assert!(pair_state_table(&p, &lower).p(4) > 0.0);
    }

    #[test]
    fn creation_time_asymmetry_equals_qm() {
        let p = d();
        for tau in [0.2, 1.0, 2.5, 5.0] {
            let model = LrModel::midpoint(&p, 0.0, tau).unwrap();
            let (qp, qm) = q_weights_unchecked(&p, tau);
            let a = lr_asymmetry(&p, &model);
            assert!((a - (qp - qm)).abs() < 1e-14);
            assert!((a - crate::qm::qm_asymmetry(&p, tau).unwrap()).abs() < 1e-14);
            let b = lr_asymmetry_bounds(&p, 0.0, tau).unwrap();
            assert!((b.lo - a).abs() < 1e-14 && (b.hi - a).abs() < 1e-14);
        }
    }

    #[test]
    fn bounds_at_reference_points() {
        let p = d();
        let b = lr_asymmetry_bounds(&p, 0.55, 0.55).unwrap();
        assert_eq!(b.hi, 1.0);
        assert!((b.lo - 0.86).abs() < 0.01, "{b:?}");
        let b = lr_asymmetry_bounds(&p, 0.55, 1.92).unwrap();
        assert!(
            (b.lo - 0.34).abs() < 0.01 && (b.hi - 0.48).abs() < 0.01,
            "{b:?}"
        );
        assert!(lr_asymmetry_bounds(&p, 1.0, 0.5).is_err());
    }

    #[test]
    fn midpoint_model_is_strictly_inside() {
        let p = d();
        let model = LrModel::midpoint(&p, 1.5, 2.25).unwrap();
        let a = lr_asymmetry(&p, &model);
        let b = lr_asymmetry_bounds(&p, 1.5, 2.25).unwrap();
        assert!(b.lo < a && a < b.hi, "{a} not inside {b:?}");
    }

    #[test]
    fn table_asymmetry_matches_closed_form() {
        let p = d();
        let model = LrModel::from_box_fractions(&p, 0.8, 1.9, [0.2, 0.9, 0.6, 0.1]).unwrap();
        let t = pair_state_table(&p, &model);
        let a = asymmetry_from_joints(
            t.joint(Outcome::K0, Outcome::K0BAR),
            t.joint(Outcome::K0BAR, Outcome::K0),
            t.joint(Outcome::K0, Outcome::K0),
            t.joint(Outcome::K0BAR, Outcome::K0BAR),
        );
        assert!((a - lr_asymmetry(&p, &model)).abs() < 1e-13);
    }
}

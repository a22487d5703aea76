use serde::{Deserialize, Serialize};

use crate::error::{check_time, Error, Result};
use crate::kinematics::{q_weights_unchecked, survival_unchecked, DecayParams};

/// Single-kaon transition matrix `p_ij(tau|0)` between the four realistic
/// states K1..K4 (strangeness x CP). `entries[i][j]` is the probability of
/// finding `K_{i+1}` at `tau` when the kaon started as `K_{j+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleKaonMatrix {
    pub entries: [[f64; 4]; 4],
    pub delta: f64,
}

impl SingleKaonMatrix {
    /// One-based accessor matching the usual `p_ij` labels.
    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.entries[i - 1][j - 1]
    }

    /// `p11 E_L - p44 E_S`. Zero iff the matrix is usable for a correlated
    /// pair; equals `delta (E_L + E_S)` in general.
    pub fn pair_consistency_defect(&self, params: &DecayParams, tau: f64) -> f64 {
        let (es, el) = survival_unchecked(params, tau);
        self.p(1, 1) * el - self.p(4, 4) * es
    }
}

const LABELS: [[&str; 4]; 4] = [
    ["p11", "p12", "p13", "p14"],
    ["p21", "p22", "p23", "p24"],
    ["p31", "p32", "p33", "p34"],
    ["p41", "p42", "p43", "p44"],
];

pub fn single_matrix(params: &DecayParams, tau: f64, delta: f64) -> Result<SingleKaonMatrix> {
    check_time("tau", tau)?;
    if !delta.is_finite() {
        return Err(Error::invalid("delta", "must be finite"));
    }
    let (es, el) = survival_unchecked(params, tau);
    let (qp, qm) = q_weights_unchecked(params, tau);

    let p11 = es * qp + delta;
    let p12 = es * qm - delta;
    let p33 = el * qp - delta;
    let p34 = el * qm + delta;
    // CP-mixing block is identically zero
    let entries = [
        [p11, p12, 0.0, 0.0],
        [p12, p11, 0.0, 0.0],
        [0.0, 0.0, p33, p34],
        [0.0, 0.0, p34, p33],
    ];
    for (i, row) in entries.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InfeasibleDelta {
                    delta,
                    entry: LABELS[i][j],
                    value,
                });
            }
        }
    }
    Ok(SingleKaonMatrix { entries, delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identity_at_creation() {
        let m = single_matrix(&DecayParams::default(), 0.0, 0.0).unwrap();
        for i in 1..=4 {
            for j in 1..=4 {
                assert_eq!(m.p(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn block_structure_and_sums() {
        let p = DecayParams::default();
        for k in 0..60 {
            let tau = 0.1 * k as f64;
            let m = single_matrix(&p, tau, 0.0).unwrap();
            let (es, el) = survival_unchecked(&p, tau);
            assert_relative_eq!(m.p(1, 1) + m.p(1, 2), es, epsilon = 1e-15);
            assert_relative_eq!(m.p(3, 3) + m.p(3, 4), el, epsilon = 1e-15);
            assert_eq!(m.p(2, 1), m.p(1, 2));
            assert_eq!(m.p(2, 2), m.p(1, 1));
            assert_eq!(m.p(4, 3), m.p(3, 4));
            assert_eq!(m.p(4, 4), m.p(3, 3));
            for (i, j) in [
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 1),
                (3, 2),
                (4, 1),
                (4, 2),
            ] {
                assert_eq!(m.p(i, j), 0.0);
            }
        }
    }

    #[test]
    fn pair_consistency_only_without_offset() {
        let p = DecayParams::default();
        let tau = 0.8;
        let m0 = single_matrix(&p, tau, 0.0).unwrap();
        assert!(m0.pair_consistency_defect(&p, tau).abs() < 1e-16);

        let (es, el) = survival_unchecked(&p, tau);
        for delta in [-0.01, 0.003, 0.02] {
            let m = single_matrix(&p, tau, delta).unwrap();
            assert_relative_eq!(
                m.pair_consistency_defect(&p, tau),
                delta * (el + es),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn oversized_offset_is_rejected() {
        let p = DecayParams::default();
        let err = single_matrix(&p, 0.0, 0.1).unwrap_err();
        assert!(err.is_infeasible());
        assert!(matches!(err, Error::InfeasibleDelta { entry: "p11", .. }));
        assert!(single_matrix(&p, 0.0, -0.1).is_err());
        assert!(single_matrix(&p, -1.0, 0.0).is_err());
    }
}

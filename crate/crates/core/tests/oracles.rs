//! Closed-form probabilities checked against independent computations: an
//! explicit two-kaon amplitude for QM, and the Monte Carlo sampler for the
//! local-realistic table.

use kaonbell::lr::{LrModel, Side};
use kaonbell::*;
use proptest::prelude::*;

#[derive(Clone, Copy)]
struct C(f64, f64);

impl C {
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn scale(self, k: f64) -> C {
        C(self.0 * k, self.1 * k)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn norm_sqr(self) -> f64 {
        self.0 * self.0 + self.1 * self.1
    }
}

/// Time-evolution factor of a mass eigenstate with width `gamma` and mass `m`.
fn evolve(gamma: f64, m: f64, tau: f64) -> C {
    let r = (-0.5 * gamma * tau).exp();
    C(r * (m * tau).cos(), -r * (m * tau).sin())
}

/// Projection `<outcome|K_S>` and `<outcome|K_L>`.
fn overlaps(o: Outcome) -> (f64, f64) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match o {
        Outcome::Strangeness(Strangeness::K0) => (h, h),
        Outcome::Strangeness(Strangeness::K0bar) => (h, -h),
        Outcome::Cp(Cp::KS) => (1.0, 0.0),
        Outcome::Cp(Cp::KL) => (0.0, 1.0),
    }
}

/// Amplitude of the antisymmetric pair `(K_L K_S - K_S K_L) / sqrt 2` evolved and projected.
fn amplitude_probability(p: &DecayParams, o1: Outcome, o2: Outcome, t1: f64, t2: f64) -> f64 {
    let (s1, l1) = overlaps(o1);
    let (s2, l2) = overlaps(o2);
    let ks = |t| evolve(p.gamma_s, 0.0, t);
    let kl = |t| evolve(p.gamma_l, p.delta_m, t);
    let a = kl(t1).mul(ks(t2)).scale(l1 * s2);
    let b = ks(t1).mul(kl(t2)).scale(s1 * l2);
    a.sub(b).scale(std::f64::consts::FRAC_1_SQRT_2).norm_sqr()
}

fn single_probability(p: &DecayParams, o: Outcome, t: f64) -> f64 {
    // sum over both outcomes of a complete basis on the partner at time zero
    amplitude_probability(p, o, Outcome::KS, t, 0.0)
        + amplitude_probability(p, o, Outcome::KL, t, 0.0)
}

#[test]
fn qm_joints_match_amplitudes() {
    for params in [DecayParams::default(), DecayParams::stable()] {
        for i in 0..25 {
            for j in 0..25 {
                let (t1, t2) = (0.23 * i as f64, 0.19 * j as f64);
                for o1 in Outcome::ALL {
                    for o2 in Outcome::ALL {
                        let closed = qm_joint(&params, o1, o2, t1, t2).unwrap().value;
                        let oracle = amplitude_probability(&params, o1, o2, t1, t2);
                        assert!(
                            (closed - oracle).abs() < 1e-14,
                            "{o1},{o2} at ({t1},{t2}): {closed} vs {oracle}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn qm_singles_match_amplitudes() {
    let p = DecayParams::default();
    for i in 0..50 {
        let t = 0.1 * i as f64;
        for o in Outcome::ALL {
            let oracle = single_probability(&p, o, t);
            assert!((qm_single(&p, o, t).unwrap() - oracle).abs() < 1e-14);
        }
    }
}

#[test]
fn survival_reference_values() {
    let p = DecayParams::default();
    let (es, el) = survival(&p, 1.0).unwrap();
    assert!((es - (-1.0f64).exp()).abs() < 1e-16);
    assert!((el - (-1.0f64 / 579.0).exp()).abs() < 1e-16);
    let (qp, qm) = q_weights(&p, 13.0).unwrap();
    let (es, el) = survival(&p, 13.0).unwrap();
    let expected = 0.5 * (1.0 + 2.0 * (el * es).sqrt() / (el + es));
    assert!((qp - expected).abs() < 1e-15);
    assert_eq!(qp + qm, 1.0);
}

#[test]
fn mc_matches_lr_probabilities() {
    let p = DecayParams::default();
    let model = LrModel::midpoint(&p, 0.5, 1.0).unwrap();
    let table = sample_pairs(
        &p,
        &SamplerConfig {
            seed: 11,
            n_samples: 1_000_000,
            model,
        },
    )
    .unwrap();
    let obs = empirical_observables(&table);
    for j in &obs.joints {
        let analytic = lr_joint(&p, &model, j.left, j.right);
        assert!(
            j.estimate.within(analytic, 4.0),
            "{},{}: {:?} vs {analytic}",
            j.left,
            j.right,
            j.estimate
        );
    }
    for s in &obs.singles {
        let t = match s.side {
            Side::Left => 0.5,
            Side::Right => 1.0,
        };
        let analytic = qm_single(&p, s.outcome, t).unwrap();
        assert!(s.estimate.within(analytic, 4.0), "{:?} vs {analytic}", s);
    }
    let a = obs.asymmetry.unwrap();
    let bounds = lr_asymmetry_bounds(&p, 0.5, 1.0).unwrap();
    assert!(a.within(lr_asymmetry(&p, &model), 4.0));
    assert!(bounds.distance(a.value) <= 4.0 * a.std_error);
}

#[test]
fn mc_asymmetry_respects_envelope_at_corners() {
    let p = DecayParams::default();
    for (k, (t1, t2)) in [(0.3, 0.9), (1.0, 1.5), (0.55, 1.92)]
        .into_iter()
        .enumerate()
    {
        let fbox = feasibility_box(&p, t1, t2).unwrap();
        let bounds = lr_asymmetry_bounds(&p, t1, t2).unwrap();
        for (c, params) in fbox.corners().into_iter().enumerate() {
            let model = LrModel::new(&p, t1, t2, params).unwrap();
            let table = sample_pairs(
                &p,
                &SamplerConfig {
                    seed: (k * 100 + c) as u64,
                    n_samples: 200_000,
                    model,
                },
            )
            .unwrap();
            let a = table.asymmetry().unwrap();
            assert!(
                bounds.distance(a.value) <= 4.0 * a.std_error,
                "corner {c}: {a:?} vs {bounds:?}"
            );
        }
    }
}

#[test]
fn mc_chi_square_across_models() {
    let p = DecayParams::default();
    for (k, frac) in [[0.1, 0.9, 0.4, 0.6], [0.5; 4], [0.95, 0.05, 0.3, 0.8]]
        .into_iter()
        .enumerate()
    {
        let model = LrModel::from_box_fractions(&p, 0.7, 2.1, frac).unwrap();
        let table = sample_pairs(
            &p,
            &SamplerConfig {
                seed: 1000 + k as u64,
                n_samples: 500_000,
                model,
            },
        )
        .unwrap();
        assert!(table.chi_square_p_value() > 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_points_agree_with_amplitudes(t1 in 0.0f64..8.0, t2 in 0.0f64..8.0, i in 0usize..4, j in 0usize..4) {
        let p = DecayParams::default();
        let (o1, o2) = (Outcome::ALL[i], Outcome::ALL[j]);
        let closed = qm_joint(&p, o1, o2, t1, t2).unwrap().value;
        prop_assert!((closed - amplitude_probability(&p, o1, o2, t1, t2)).abs() < 1e-14);
    }

    #[test]
    fn table_sums_to_one(t1 in 0.0f64..6.0, dt in 0.0f64..6.0, f in proptest::array::uniform4(0.0f64..=1.0)) {
        let p = DecayParams::default();
        let model = LrModel::from_box_fractions(&p, t1, t1 + dt, f).unwrap();
        prop_assert!((pair_state_table(&p, &model).total() - 1.0).abs() < 1e-12);
    }
}

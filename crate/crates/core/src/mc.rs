//! Monte Carlo sampler of the 18 hidden-variable pair states.
//!
//! Each synthetic pair is assigned one state by a single uniform draw against
//! the cumulative distribution of [`pair_state_table`]. Draws come from
//! ChaCha20 (20 rounds). Samples are processed in fixed blocks of
//! [`BLOCK_SIZE`]; block `b` uses the generator seeded with `seed` and switched
//! to stream `b`, so merged counts do not depend on how blocks are spread
//! across threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::kinematics::DecayParams;
use crate::lr::{joint_states, pair_state_table, single_states, LrModel, Side, N_STATES};
use crate::qm::{asymmetry_from_joints, Outcome};

pub const GENERATOR: &str = "ChaCha20 (rand_chacha 0.9), stream = block index";
pub const BLOCK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub n_samples: u64,
    pub model: LrModel,
}

/// Uniform double in `[0, 1)` from the top 53 bits of a draw.
fn unit(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn cdf(probabilities: &[f64; N_STATES]) -> [f64; N_STATES] {
    let mut acc = 0.0;
    let mut out = [0.0; N_STATES];
    for (o, p) in out.iter_mut().zip(probabilities) {
        acc += p;
        *o = acc;
    }
    out
}

fn draw_state(cdf: &[f64; N_STATES], u: f64) -> usize {
    // the last state absorbs rounding so every draw lands somewhere
    cdf[..N_STATES - 1]
        .iter()
        .position(|&c| u < c)
        .unwrap_or(N_STATES - 1)
}

fn sample_block(seed: u64, block: u64, n: u64, cdf: &[f64; N_STATES]) -> [u64; N_STATES] {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut counts = [0u64; N_STATES];
    for _ in 0..n {
        counts[draw_state(cdf, unit(&mut rng))] += 1;
    }
    counts
}

/// Counts of sampled pair states along with the analytic table they were drawn from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalTable {
    pub config: SamplerConfig,
    pub decay: DecayParams,
    pub generator: String,
    pub counts: [u64; N_STATES],
    pub frequencies: [f64; N_STATES],
    pub std_errors: [f64; N_STATES],
    pub expected: [f64; N_STATES],
}

pub fn sample_pairs(params: &DecayParams, config: &SamplerConfig) -> Result<EmpiricalTable> {
    if config.n_samples == 0 {
        return Err(Error::invalid("n_samples", "must be at least 1"));
    }
    let m = &config.model;
    let model = LrModel::new(params, m.tau1, m.tau2, m.params)?;
    let expected = pair_state_table(params, &model).probabilities;
    let cdf = cdf(&expected);

    let n_blocks = config.n_samples.div_ceil(BLOCK_SIZE);
    let counts = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let len = BLOCK_SIZE.min(config.n_samples - b * BLOCK_SIZE);
            sample_block(config.seed, b, len, &cdf)
        })
        .reduce(
            || [0u64; N_STATES],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let n = config.n_samples as f64;
    let frequencies = counts.map(|c| c as f64 / n);
    let std_errors = frequencies.map(|f| (f * (1.0 - f) / n).sqrt());
    Ok(EmpiricalTable {
        config: SamplerConfig { model, ..*config },
        decay: *params,
        generator: GENERATOR.to_string(),
        counts,
        frequencies,
        std_errors,
        expected,
    })
}

/// A sampled proportion and its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    fn proportion(hits: u64, n: u64) -> Self {
        let q = hits as f64 / n as f64;
        Estimate {
            value: q,
            std_error: (q * (1.0 - q) / n as f64).sqrt(),
        }
    }

    /// Distance to `x` in standard errors. Zero when both agree exactly.
    pub fn z_score(&self, x: f64) -> f64 {
        let d = (self.value - x).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }

    pub fn within(&self, x: f64, n_sigma: f64) -> bool {
        self.z_score(x) <= n_sigma
    }
}

impl EmpiricalTable {
    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn hits(&self, states: &[usize]) -> u64 {
        states.iter().map(|&i| self.counts[i]).sum()
    }

    pub fn state(&self, index: usize) -> Estimate {
        Estimate::proportion(self.counts[index], self.n())
    }

    pub fn joint(&self, o1: Outcome, o2: Outcome) -> Estimate {
        Estimate::proportion(self.hits(&joint_states(o1, o2)), self.n())
    }

    pub fn single(&self, side: Side, outcome: Outcome) -> Estimate {
        Estimate::proportion(self.hits(&single_states(side, outcome)), self.n())
    }

    /// Asymmetry over pairs showing a strangeness on both sides. `None` if no such pair was drawn.
    pub fn asymmetry(&self) -> Option<Estimate> {
        let h = |a, b| self.hits(&joint_states(a, b)) as f64;
        let (unlike_a, unlike_b) = (
            h(Outcome::K0, Outcome::K0BAR),
            h(Outcome::K0BAR, Outcome::K0),
        );
        let (like_a, like_b) = (
            h(Outcome::K0, Outcome::K0),
            h(Outcome::K0BAR, Outcome::K0BAR),
        );
        let m = unlike_a + unlike_b + like_a + like_b;
        if m == 0.0 {
            return None;
        }
        let q = (unlike_a + unlike_b) / m;
        Some(Estimate {
            value: asymmetry_from_joints(unlike_a, unlike_b, like_a, like_b),
            std_error: 2.0 * (q * (1.0 - q) / m).sqrt(),
        })
    }

    /// Pearson chi-square against the analytic table. Cells with zero expected
    /// probability are left out; a count in one of them gives `+inf`.
    pub fn chi_square(&self) -> (f64, usize) {
        let n = self.n() as f64;
        let mut stat = 0.0;
        let mut cells = 0usize;
        for (&c, &p) in self.counts.iter().zip(&self.expected) {
            if p > 0.0 {
                let e = n * p;
                stat += (c as f64 - e).powi(2) / e;
                cells += 1;
            } else if c > 0 {
                stat = f64::INFINITY;
            }
        }
        (stat, cells.saturating_sub(1))
    }

    pub fn chi_square_p_value(&self) -> f64 {
        let (stat, dof) = self.chi_square();
        if dof == 0 {
            return if stat.is_finite() { 1.0 } else { 0.0 };
        }
        ChiSquared::new(dof as f64).expect("positive dof").sf(stat)
    }

    pub fn observables(&self) -> EmpiricalObservables {
        empirical_observables(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointEstimate {
    pub left: Outcome,
    pub right: Outcome,
    pub estimate: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleEstimate {
    pub side: Side,
    pub outcome: Outcome,
    pub estimate: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalObservables {
    pub joints: Vec<JointEstimate>,
    pub singles: Vec<SingleEstimate>,
    pub asymmetry: Option<Estimate>,
}

pub fn empirical_observables(table: &EmpiricalTable) -> EmpiricalObservables {
    let mut joints = Vec::with_capacity(16);
    for left in Outcome::ALL {
        for right in Outcome::ALL {
            joints.push(JointEstimate {
                left,
                right,
                estimate: table.joint(left, right),
            });
        }
    }
    let mut singles = Vec::with_capacity(8);
    for side in [Side::Left, Side::Right] {
        for outcome in Outcome::ALL {
            singles.push(SingleEstimate {
                side,
                outcome,
                estimate: table.single(side, outcome),
            });
        }
    }
    EmpiricalObservables {
        joints,
        singles,
        asymmetry: table.asymmetry(),
    }
}

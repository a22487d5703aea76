//! Decay constants, survival factors and the locality time window.
//!
//! Every time in this crate is a proper time measured in units of the
//! K_S mean lifetime, so `gamma_s` is 1 for the physical kaon and
//! `delta_m` is an angular frequency per K_S lifetime.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{check_time, Error, Result};

/// K_S / K_L width ratio used for the default constants.
pub const WIDTH_RATIO: f64 = 579.0;

/// Kaon velocity (fraction of c) at a phi factory.
pub const PHI_FACTORY_VELOCITY: f64 = 0.22;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    pub gamma_s: f64,
    pub gamma_l: f64,
    pub delta_m: f64,
    pub velocity: f64,
}

impl Default for DecayParams {
    fn default() -> Self {
        DecayParams {
            gamma_s: 1.0,
            gamma_l: 1.0 / WIDTH_RATIO,
            delta_m: 2.0 * PI / 13.0,
            velocity: PHI_FACTORY_VELOCITY,
        }
    }
}

impl DecayParams {
    pub fn new(gamma_s: f64, gamma_l: f64, delta_m: f64, velocity: f64) -> Result<Self> {
        let params = DecayParams {
            gamma_s,
            gamma_l,
            delta_m,
            velocity,
        };
        params.validate()?;
        Ok(params)
    }

    /// Both mass eigenstates stable; the strangeness correlations then take
    /// the spin-singlet form with angle `delta_m * (tau2 - tau1)`.
    pub fn stable() -> Self {
        DecayParams {
            gamma_s: 0.0,
            gamma_l: 0.0,
            ..Default::default()
        }
    }

    pub fn with_velocity(self, velocity: f64) -> Result<Self> {
        DecayParams::new(self.gamma_s, self.gamma_l, self.delta_m, velocity)
    }

    pub fn is_stable(&self) -> bool {
        self.gamma_s == 0.0 && self.gamma_l == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let DecayParams {
            gamma_s,
            gamma_l,
            delta_m,
            velocity,
        } = *self;
        if !(gamma_s.is_finite() && gamma_l.is_finite() && delta_m.is_finite()) {
            return Err(Error::invalid(
                "decay params",
                "all constants must be finite",
            ));
        }
        if gamma_l < 0.0 {
            return Err(Error::invalid(
                "gamma_l",
                format!("must be >= 0, got {gamma_l}"),
            ));
        }
        if gamma_l > gamma_s {
            return Err(Error::invalid(
                "gamma_l",
                format!("must not exceed gamma_s ({gamma_l} > {gamma_s})"),
            ));
        }
        if gamma_s <= 0.0 && !self.is_stable() {
            return Err(Error::invalid(
                "gamma_s",
                format!("must be > 0, got {gamma_s}"),
            ));
        }
        check_velocity(velocity)?;
        Ok(())
    }

    /// Parses `key = value` lines. Blank lines and `#` comments are skipped;
    /// missing keys keep their default.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut params = DecayParams::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected key=value, got `{line}`",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::Config(format!(
                    "line {}: value for `{key}` is not a number: `{}`",
                    lineno + 1,
                    value.trim()
                ))
            })?;
            match key {
                "gamma_s" => params.gamma_s = value,
                "gamma_l" => params.gamma_l = value,
                "delta_m" => params.delta_m = value,
                "velocity" => params.velocity = value,
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        params.validate()?;
        Ok(params)
    }

    pub fn from_config_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        DecayParams::from_config_str(&text)
    }

    pub fn to_config_string(&self) -> String {
        format!(
            "gamma_s = {}\ngamma_l = {}\ndelta_m = {}\nvelocity = {}\n",
            self.gamma_s, self.gamma_l, self.delta_m, self.velocity
        )
    }
}

/// Survival probabilities `(E_S, E_L)` after proper time `tau`.
pub fn survival(params: &DecayParams, tau: f64) -> Result<(f64, f64)> {
    check_time("tau", tau)?;
    Ok(survival_unchecked(params, tau))
}

#[inline]
pub(crate) fn survival_unchecked(params: &DecayParams, tau: f64) -> (f64, f64) {
    ((-params.gamma_s * tau).exp(), (-params.gamma_l * tau).exp())
}

/// `2 sqrt(E_L E_S) / (E_L + E_S)` at `tau`, evaluated as a hyperbolic
/// secant so it stays finite for long times. Even in `tau`.
#[inline]
pub(crate) fn mixing_weight(params: &DecayParams, tau: f64) -> f64 {
    1.0 / (0.5 * (params.gamma_s - params.gamma_l) * tau).cosh()
}

/// Interference weights `(Q+, Q-)`; they sum to one.
pub fn q_weights(params: &DecayParams, tau: f64) -> Result<(f64, f64)> {
    check_time("tau", tau)?;
    Ok(q_weights_unchecked(params, tau))
}

#[inline]
pub(crate) fn q_weights_unchecked(params: &DecayParams, tau: f64) -> (f64, f64) {
    let q_plus = 0.5 * (1.0 + mixing_weight(params, tau) * (params.delta_m * tau).cos());
    (q_plus, 1.0 - q_plus)
}

fn check_velocity(velocity: f64) -> Result<()> {
    if !(0.0..1.0).contains(&velocity) {
        return Err(Error::invalid(
            "velocity",
            format!("must lie in [0, 1), got {velocity}"),
        ));
    }
    Ok(())
}

/// Upper bound `(1 + v) / (1 - v)` on the detection-time ratio for which the
/// two measurements on back-to-back kaons are space-like separated.
pub fn locality_max_ratio(velocity: f64) -> Result<f64> {
    check_velocity(velocity)?;
    Ok((1.0 + velocity) / (1.0 - velocity))
}

/// True iff `1 <= max/min < (1 + v)/(1 - v)`.
pub fn is_spacelike(tau1: f64, tau2: f64, velocity: f64) -> Result<bool> {
    check_time("tau1", tau1)?;
    check_time("tau2", tau2)?;
    let bound = locality_max_ratio(velocity)?;
    let (lo, hi) = if tau1 <= tau2 {
        (tau1, tau2)
    } else {
        (tau2, tau1)
    };
    if lo == 0.0 {
        return Ok(false);
    }
    let ratio = hi / lo;
    Ok(ratio >= 1.0 && ratio < bound)
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be a finite non-negative time, got {value}")]
    NegativeTime { what: &'static str, value: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("detection times out of order: tau1 = {tau1} > tau2 = {tau2}")]
    Ordering { tau1: f64, tau2: f64 },

    #[error("delta = {delta} pushes matrix entry {entry} to {value}, outside [0, 1]")]
    InfeasibleDelta {
        delta: f64,
        entry: &'static str,
        value: f64,
    },

    #[error(
        "{name} = {value} lies outside its feasible interval [{lo}, {hi}] \
         at (tau1, tau2) = ({tau1}, {tau2})"
    )]
    ConstraintViolation {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
        tau1: f64,
        tau2: f64,
    },

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    /// True for errors that reject a local-realistic model or a matrix offset,
    /// as opposed to plain domain errors on the inputs.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::InfeasibleDelta { .. } | Error::ConstraintViolation { .. }
        )
    }
}

pub(crate) fn check_time(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::NegativeTime { what, value })
    }
}

pub(crate) fn check_ordered(tau1: f64, tau2: f64) -> Result<()> {
    check_time("tau1", tau1)?;
    check_time("tau2", tau2)?;
    if tau1 > tau2 {
        return Err(Error::Ordering { tau1, tau2 });
    }
    Ok(())
}

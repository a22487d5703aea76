//! Quantum-mechanical and local-realistic predictions for entangled neutral-kaon pairs.
//!
//! All times are proper times in units of the K_S lifetime. Strangeness and CP
//! outcomes are described by [`Outcome`]; local-realistic theories by
//! [`LrModel`], a point in the feasibility box of four free three-time
//! probabilities at one pair of detection times.
//!
//! ```
//! use kaonbell::{qm_asymmetry, lr_asymmetry_bounds, DecayParams};
//!
//! let p = DecayParams::default();
//! let qm = qm_asymmetry(&p, 1.37).unwrap();
//! let lr = lr_asymmetry_bounds(&p, 0.55, 1.92).unwrap();
//! assert!(qm > lr.hi);
//! ```

pub mod bell;
pub mod cplear;
pub mod error;
pub mod kinematics;
pub mod lr;
pub mod mc;
pub mod qm;
pub mod scan;

pub use bell::{
    chsh_s, chsh_s_closed_form, renormalized_joint, renormalized_joint_for, wigner_w_kaon,
    wigner_w_spin, ChshConfig, ChshValue, SpinWignerValue, WignerConfig, WignerValue,
};
pub use cplear::{cplear_compare, CplearReport, CplearRow, CPLEAR_DATA, CPLEAR_VELOCITY};
pub use error::{Error, Result};
pub use kinematics::{is_spacelike, locality_max_ratio, q_weights, survival, DecayParams};
pub use lr::{
    conditional_probs, feasibility_box, lr_asymmetry, lr_asymmetry_bounds, lr_joint, lr_single,
    pair_state_table, single_matrix, three_time_probs, BoundsInterval, ConditionalProbs,
    FeasibilityBox, LrModel, LrModelParams, PairStateTable, Side, SingleKaonMatrix, N_STATES,
};
pub use mc::{
    empirical_observables, sample_pairs, EmpiricalObservables, EmpiricalTable, Estimate,
    SamplerConfig,
};
pub use qm::{
    qm_asymmetry, qm_joint, qm_joint_cp, qm_joint_cp_strangeness, qm_joint_strangeness,
    qm_joint_strangeness_cp, qm_single, Cp, Outcome, Strangeness,
};
pub use scan::{
    asymmetry_discrepancy_scan, chsh_scan, spin_wigner_scan, wigner_scan, ChshScanOutput,
    ExtremumResult, ScanOutput, ScanSpec, ScanTable,
};

//! Local-realistic (hidden-variable) description of the kaon pair.

mod matrix;
mod model;
mod table;

pub use matrix::{single_matrix, SingleKaonMatrix};
pub use model::{
    conditional_probs, feasibility_box, three_time_probs, BoundsInterval, ConditionalProbs,
    FeasibilityBox, LrModel, LrModelParams, SectorThreeTime, ThreeTimeProbs, FEASIBILITY_TOL,
};
pub use table::{
    joint_states, lr_asymmetry, lr_asymmetry_bounds, lr_joint, lr_single, pair_state_table,
    single_states, KaonState, PairStateTable, Side, SlotState, N_STATES, PAIR_STATES,
};

//! Conditional updates of the local scales and the global scale, plus
//! quadrature oracles for the local-scale conditional.

pub mod bridge;
pub mod horseshoe;
pub mod oracles;
pub mod stable;
pub mod tau;

pub use bridge::{bridge_local_cdf, bridge_local_tv_to_limit, sample_bridge_local, BridgeLocalMethod, TiltedStableParams};
pub use horseshoe::{
    horseshoe_acceptance_rate, sample_horseshoe_eta, sample_horseshoe_eta_counted, EnvelopeBranch, HorseshoeEnvelope,
};
pub use oracles::{horseshoe_eta_cdf, horseshoe_neg_moment_bound, local_scale_cdf, local_scale_neg_moment, local_scale_tail_prob};
pub use tau::{sample_tau_bridge_collapsed, sample_tau_conditional, sample_truncated_gamma, slice_tau_update, TauMethod};

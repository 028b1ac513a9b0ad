//! Monotonicity and bounds for the summands and `s_n`, the growth rate of
//! `s_n`, Stirling's formula, and the series for `1/pi`.

mod growth;
mod pi;
mod theorem2;

pub use growth::{
    envelope_logs_in, ln_biguint, sample_asymptotics, sample_at, stirling_check, AsymptoticsSample,
};
pub use pi::{
    inv_pi_reference, pi_partial_sum, PiPartialSum, INV_PI_50, TAIL_RATIO_LIMIT, TAIL_WINDOW,
};
pub use theorem2::{
    bounds_for, bounds_range, check_bounds, check_monotone, check_monotone_in,
    check_sum_sandwich_in, ratio_identity, ratio_identity_in, theorem2_range, BoundsReport,
    RatioWitness,
};

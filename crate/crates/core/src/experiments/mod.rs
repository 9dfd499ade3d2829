//! Reproductions of the quantitative statements: correlation estimates, the
//! convergence-ratio series, the non-convergence gap construction, Monte
//! Carlo element statistics, and the exact verification suites.

pub mod correlations;
pub mod monte_carlo;
pub mod theorem_a;
pub mod thm_b;
pub mod verify;

pub use correlations::{
    arc_block_intersection, block_intersection, h_integral, h_pair_integral, h_support,
    kesten_count, quasi_independence_check, HPairReport, HStat, KestenReport,
    QuasiIndependenceReport,
};
pub use monte_carlo::{
    find_large_element, monte_carlo_wn, sum_ai_growth, BigTimeReport, GrowthRow, WnEstimate,
};
pub use theorem_a::{
    median_abs_ratio_gap, theorem_a_experiment, theorem_a_series, RatioPoint, ThmAReport,
    ThmASample,
};
pub use thm_b::{
    gap_prefix, theorem_b_experiment, theorem_b_oscillation, w_measure_closed_form, w_set,
    OscillationReport, SampledPair, ThmBConfig, ThmBReport,
};
pub use verify::{run_all, SuiteResult, VerifyConfig};

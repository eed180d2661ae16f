//! Conserved functionals, inequality gap fields, and blowup criteria.

mod criterion;
mod functionals;
mod inequalities;
mod suite;

pub use criterion::{
    breaking_time_bound, check_criterion_dgh, check_criterion_dgh2, CriterionVerdict, DEFAULT_RHO_TOL,
};
pub use functionals::{energy_e, energy_f, h_alpha_norm, l2_norm};
pub use inequalities::{
    lemma31_gaps, lemma31_gaps_with_slope, lemma32_gap, lemma32_gap_with_slope, sobolev_gap, GapField, GapSummary,
};
pub use suite::{
    peakon_witness, random_band_limited, run_inequality_suite, GapRow, SuiteConfig, SuiteReport, WitnessReport,
    WitnessRow,
};

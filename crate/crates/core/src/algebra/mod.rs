//! Exact truncated series algebra over words of noncommuting operator
//! symbols: the splitting-error engine.
//!
//! The submodules build on each other: [`word`] defines the alphabets,
//! [`series`] the truncated word series with its ring operations,
//! [`dbasis`] the reference commutator combinations, [`grading`] the
//! scale-separation bookkeeping, and [`expansion`] the remainder of a
//! splitting scheme together with its decomposition on the D-basis.

pub mod dbasis;
pub mod expansion;
pub mod grading;
pub mod series;
pub mod word;

pub use dbasis::{project, Projection};
pub use expansion::{
    expansion_report, graded_report_lines, k2_closed_form, order2_coefficient,
    order3_coefficients, order4_coefficients, remainder, report_lines, Order3Coefficients,
    Order4Coefficients,
};
pub use grading::{
    epsilon_component, epsilon_exponent, epsilon_order, graded_expand, normalize_commuting,
    EpsilonOrder,
};
pub use series::WordSeries;
pub use word::{word, Ab, Letter, Word, Xvf};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("exponential requires a zero constant term")]
    NonzeroConstantTerm,
    #[error("inverse requires a unit constant term")]
    NonunitConstantTerm,
    #[error("inconsistent scheme: {0}")]
    InconsistentScheme(String),
    #[error("remainder truncation order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("closed-form coefficients require a two-pair scheme, got k = {0}")]
    NotTwoPairs(usize),
}

/// Default truncation order of the expansion engine, one past the highest
/// word length the D-basis covers.
pub const DEFAULT_ORDER: usize = 5;

/// Cost ceiling for the truncation order; two-letter word counts stay tiny
/// up to here.
pub const MAX_ORDER: usize = 8;

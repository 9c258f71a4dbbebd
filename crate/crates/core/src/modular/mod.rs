//! Truncated q-expansions, eta quotients, candidate newforms and the
//! congruence tests comparing their coefficients with point counts.

mod form;
mod series;
mod verdict;

use thiserror::Error;

pub use form::{
    builtin_form, format_coefficients, prime_coeffs, CoefficientTable, FormSource, GroupLabel, NewformSpec, FORM_NAMES,
    TRUNCATION_CAP,
};
pub use series::{eta_quotient, euler_product, EtaQuotientSpec, QSeries};
pub use verdict::{
    congruence_match, esnault_guess, exact_cy3_fit, weil_bound_check, CyFit, PrimeDetail, Verdict, VerdictKind,
    WeilViolation, CAVEAT, SIGMA0_THRESHOLD,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModularError {
    #[error("series with constant term other than ±1 is not invertible over the integers")]
    NotInvertible,
    #[error("invalid eta quotient: {0}")]
    BadEtaSpec(String),
    #[error("q-power prefactor {numerator}/24 is not a non-negative integer")]
    NonIntegralPrefactor { numerator: i64 },
    #[error("coefficient file line {line}: {reason}")]
    CoefficientFile { line: usize, reason: String },
    #[error("{form}: coefficient {index} is {}, expected {expected}", got.as_deref().unwrap_or("missing"))]
    AnchorMismatch {
        form: String,
        index: usize,
        expected: i64,
        got: Option<String>,
    },
    #[error("{form}: no coefficient for index {index}")]
    MissingCoefficient { form: String, index: usize },
    #[error("need coefficients through {needed}, beyond the cap of {cap}")]
    TruncationShortfall { needed: usize, cap: usize },
    #[error("at least {needed} good primes are required")]
    NoGoodPrimes { needed: usize },
    #[error("constants solved from primes {primes:?} are not integers")]
    NonIntegerFit { primes: [u64; 2] },
    #[error("fit (c1, c2) = ({c1}, {c2}) fails at p = {prime}")]
    FitInconsistent { prime: u64, c1: i64, c2: i64 },
}

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{prime_coeffs, ModularError, NewformSpec};
use crate::count::{residue, Convention, PointCountRecord};

/// Minimum number of primes with `count ≢ 1 mod p` for a guess to count as
/// well supported.
pub const SIGMA0_THRESHOLD: usize = 10;

/// Attached to every verdict: the counts are of the singular model, and the
/// tests assume they agree mod p with counts of a resolution.
pub const CAVEAT: &str = "assumes the point count of a smooth resolution is congruent mod p to the count of the singular model; this is not checked";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    NotUnirationalGuess,
    Inconclusive,
    CongruencePass,
    CongruenceFail,
    ExactFit,
}

/// Evidence at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeDetail {
    pub p: u64,
    pub count: u64,
    /// Residue of the count under the test's convention.
    pub residue: u64,
    /// Fourier coefficient, when a form is involved.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_p: Option<i64>,
    /// Whether the tested relation holds at `p`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Good primes among the records.
    pub sigma: Vec<u64>,
    /// Good primes with `count ≢ 1 mod p`.
    pub sigma0: Vec<u64>,
    pub threshold_met: bool,
    pub details: Vec<PrimeDetail>,
    pub caveat: String,
}

fn sigma_sets(records: &[PointCountRecord]) -> (Vec<&PointCountRecord>, Vec<u64>, Vec<u64>) {
    let good: Vec<&PointCountRecord> = records.iter().filter(|r| r.good_reduction).collect();
    let sigma = good.iter().map(|r| r.p).collect();
    let sigma0 = good.iter().filter(|r| r.count % r.p != 1).map(|r| r.p).collect();
    (good, sigma, sigma0)
}

fn small(b: &BigInt) -> i64 {
    b.to_i64().expect("coefficient fits in i64")
}

/// Records with `good_reduction` recomputed from `bad_primes`.
fn regood(records: &[PointCountRecord], bad_primes: &BTreeSet<u64>) -> Vec<PointCountRecord> {
    records
        .iter()
        .map(|r| PointCountRecord {
            good_reduction: !bad_primes.contains(&r.p),
            ..r.clone()
        })
        .collect()
}

/// A good prime with `count ≢ 1 mod p` suggests the variety is not
/// unirational.
pub fn esnault_guess(records: &[PointCountRecord], bad_primes: &BTreeSet<u64>) -> Verdict {
    let records = regood(records, bad_primes);
    let (good, sigma, sigma0) = sigma_sets(&records);
    let details = good
        .iter()
        .map(|r| PrimeDetail {
            p: r.p,
            count: r.count,
            residue: residue(r.count, r.p, Convention::Weight4),
            b_p: None,
            holds: r.count % r.p == 1,
        })
        .collect();
    Verdict {
        kind: if sigma0.is_empty() {
            VerdictKind::Inconclusive
        } else {
            VerdictKind::NotUnirationalGuess
        },
        threshold_met: sigma0.len() >= SIGMA0_THRESHOLD,
        sigma,
        sigma0,
        details,
        caveat: CAVEAT.into(),
    }
}

/// Checks `b_p ≡ residue(count) mod p` at every good prime.
pub fn congruence_match(
    records: &[PointCountRecord],
    form: &NewformSpec,
    convention: Convention,
) -> Result<Verdict, ModularError> {
    let (good, sigma, sigma0) = sigma_sets(records);
    if good.is_empty() {
        return Err(ModularError::NoGoodPrimes { needed: 1 });
    }
    let coeffs = prime_coeffs(form, &sigma)?;
    let details: Vec<PrimeDetail> = good
        .iter()
        .map(|r| {
            let b = &coeffs[&r.p];
            let res = residue(r.count, r.p, convention);
            let b_mod = b.mod_floor(&BigInt::from(r.p));
            PrimeDetail {
                p: r.p,
                count: r.count,
                residue: res,
                b_p: Some(small(b)),
                holds: b_mod == BigInt::from(res),
            }
        })
        .collect();
    let pass = details.iter().all(|d| d.holds);
    Ok(Verdict {
        kind: if pass {
            VerdictKind::CongruencePass
        } else {
            VerdictKind::CongruenceFail
        },
        threshold_met: sigma0.len() >= SIGMA0_THRESHOLD,
        sigma,
        sigma0,
        details,
        caveat: CAVEAT.into(),
    })
}

/// Constants with `b_p = 1 + c1·p + c2·p² + p³ − count` at every checked
/// prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyFit {
    pub c1: i64,
    pub c2: i64,
    /// The two primes the constants were solved from.
    pub solved_from: [u64; 2],
    /// Every good prime at which the relation holds, ascending.
    pub verified: Vec<u64>,
}

impl CyFit {
    pub fn verdict(&self, records: &[PointCountRecord]) -> Verdict {
        let (_, sigma, sigma0) = sigma_sets(records);
        Verdict {
            kind: VerdictKind::ExactFit,
            threshold_met: sigma0.len() >= SIGMA0_THRESHOLD,
            sigma,
            sigma0,
            details: Vec::new(),
            caveat: CAVEAT.into(),
        }
    }
}

/// Fits `(c1, c2)` from the two largest good primes and verifies the
/// relation at every good prime in ascending order.
pub fn exact_cy3_fit(records: &[PointCountRecord], form: &NewformSpec) -> Result<CyFit, ModularError> {
    let (good, sigma, _) = sigma_sets(records);
    if good.len() < 3 {
        return Err(ModularError::NoGoodPrimes { needed: 3 });
    }
    let coeffs = prime_coeffs(form, &sigma)?;
    // r_p = b_p − 1 − p³ + count must equal c1·p + c2·p²
    let rhs = |r: &PointCountRecord| -> i128 {
        let p = r.p as i128;
        small(&coeffs[&r.p]) as i128 - 1 - p * p * p + r.count as i128
    };
    let mut sorted = good.clone();
    sorted.sort_by_key(|r| r.p);
    let (a, b) = (sorted[sorted.len() - 2], sorted[sorted.len() - 1]);
    let (p, q) = (a.p as i128, b.p as i128);
    let (rp, rq) = (rhs(a), rhs(b));
    let det = p * q * (q - p);
    let n1 = rp * q * q - rq * p * p;
    let n2 = p * rq - q * rp;
    if det.is_zero() || n1 % det != 0 || n2 % det != 0 {
        return Err(ModularError::NonIntegerFit { primes: [a.p, b.p] });
    }
    let (c1, c2) = (n1 / det, n2 / det);
    let mut verified = Vec::new();
    for r in &sorted {
        let p = r.p as i128;
        if c1 * p + c2 * p * p != rhs(r) {
            return Err(ModularError::FitInconsistent {
                prime: r.p,
                c1: c1 as i64,
                c2: c2 as i64,
            });
        }
        verified.push(r.p);
    }
    Ok(CyFit {
        c1: c1 as i64,
        c2: c2 as i64,
        solved_from: [a.p, b.p],
        verified,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeilViolation {
    pub p: u64,
    pub b_p: i64,
}

/// Primes where `|b_p| > h·p^{d/2}`, compared exactly as `b_p² > h²·p^d`.
pub fn weil_bound_check(
    form: &NewformSpec,
    h: u64,
    d: u32,
    primes: &[u64],
) -> Result<Vec<WeilViolation>, ModularError> {
    let coeffs = prime_coeffs(form, primes)?;
    Ok(coeffs
        .iter()
        .filter(|(&p, b)| {
            let lhs = *b * *b;
            let rhs = BigInt::from(h) * BigInt::from(h) * num_traits::pow(BigInt::from(p), d as usize);
            lhs > rhs
        })
        .map(|(&p, b)| WeilViolation { p, b_p: small(b) })
        .collect())
}

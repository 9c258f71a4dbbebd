use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{ExprError, MultiPoly};

/// Polynomial with coefficients reduced into `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPoly {
    prime: u64,
    nvars: usize,
    terms: Vec<(Box<[u32]>, u64)>,
}

impl ReducedPoly {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Nonzero terms as (exponents, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.terms.iter().map(|(e, c)| (&e[..], *c))
    }

    /// Evaluates at a point whose coordinates are already in `[0, p)`.
    pub fn eval_reduced(&self, point: &[u64]) -> u64 {
        let p = self.prime;
        let mut acc = 0u64;
        for (exps, c) in &self.terms {
            let mut term = *c;
            for (&x, &e) in point.iter().zip(exps.iter()) {
                if e > 0 {
                    term = term * pow_mod(x, e as u64, p) % p;
                }
            }
            acc = (acc + term) % p;
        }
        acc
    }
}

/// Per-prime reductions of one polynomial. Clones share the same cache, which
/// is sound because the polynomial itself is immutable.
#[derive(Clone, Default)]
pub(crate) struct ModCache(Arc<RwLock<HashMap<u64, Arc<ReducedPoly>>>>);

impl fmt::Debug for ModCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ModCache")
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut result = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

/// Largest modulus accepted by the mod-p routines; keeps products of two
/// residues inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 32;

impl MultiPoly {
    /// Coefficients reduced mod `prime`, computed once per prime and cached.
    pub fn reduce_mod(&self, prime: u64) -> Result<Arc<ReducedPoly>, ExprError> {
        if !(2..MAX_MODULUS).contains(&prime) {
            return Err(ExprError::ModulusOutOfRange(prime));
        }
        if let Some(hit) = self.cache.0.read().expect("mod cache poisoned").get(&prime) {
            return Ok(hit.clone());
        }
        let mut terms = Vec::with_capacity(self.num_terms());
        for (m, c) in self.terms() {
            let den = bigint_mod(c.denom(), prime);
            if den == 0 {
                return Err(ExprError::DenominatorDivisible { prime });
            }
            let num = bigint_mod(c.numer(), prime);
            let value = num * pow_mod(den, prime - 2, prime) % prime;
            if value != 0 {
                terms.push((m.exponents().into(), value));
            }
        }
        let reduced = Arc::new(ReducedPoly {
            prime,
            nvars: self.ring().len(),
            terms,
        });
        self.cache
            .0
            .write()
            .expect("mod cache poisoned")
            .entry(prime)
            .or_insert_with(|| reduced.clone());
        Ok(reduced)
    }

    /// Value at an integer point, reduced into `[0, prime)`.
    ///
    /// `prime` must be prime for the denominator inversion to be meaningful;
    /// the caller is responsible for that.
    pub fn eval_mod_p(&self, point: &[i64], prime: u64) -> Result<u64, ExprError> {
        self.check_len(point.len())?;
        let reduced = self.reduce_mod(prime)?;
        let pt: Vec<u64> = point.iter().map(|&v| v.rem_euclid(prime as i64) as u64).collect();
        Ok(reduced.eval_reduced(&pt))
    }
}

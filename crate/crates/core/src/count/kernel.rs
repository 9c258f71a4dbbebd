//! Dense nested-Horner enumeration of a reduced polynomial over one stratum
//! of projective space.

use rayon::prelude::*;

use super::PrimeFieldCtx;
use crate::expr::ReducedPoly;

/// Tallies of polynomial values by square class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Tally {
    pub zeros: u64,
    pub squares: u64,
    pub nonsquares: u64,
}

impl Tally {
    fn add(self, o: Tally) -> Tally {
        Tally {
            zeros: self.zeros + o.zeros,
            squares: self.squares + o.squares,
            nonsquares: self.nonsquares + o.nonsquares,
        }
    }
}

/// Polynomial in `k` variables as a dense coefficient cube of side `e`,
/// first variable outermost.
struct Dense {
    k: usize,
    e: usize,
    coeffs: Vec<u64>,
}

impl Dense {
    /// Substitutes the first variable, leaving `k - 1` variables.
    fn partial(&self, a: u64, p: u64) -> Dense {
        let stride = self.e.pow(self.k as u32 - 1);
        let mut out = vec![0u64; stride];
        for d in (0..self.e).rev() {
            let block = &self.coeffs[d * stride..(d + 1) * stride];
            for (o, &c) in out.iter_mut().zip(block) {
                *o = (*o * a + c) % p;
            }
        }
        Dense {
            k: self.k - 1,
            e: self.e,
            coeffs: out,
        }
    }

    fn tally(&self, ctx: &PrimeFieldCtx) -> Tally {
        let p = ctx.p();
        match self.k {
            0 => ctx.tally_value(self.coeffs[0]),
            1 => {
                let c = &self.coeffs;
                let mut t = Tally::default();
                for x in 0..p {
                    let mut v = 0u64;
                    for &ci in c.iter().rev() {
                        v = (v * x + ci) % p;
                    }
                    t = t.add(ctx.tally_value(v));
                }
                t
            }
            _ => (0..p)
                .map(|a| self.partial(a, p).tally(ctx))
                .fold(Tally::default(), Tally::add),
        }
    }
}

/// Restriction of `poly` to the stratum where coordinates before `lead` are
/// zero and coordinate `lead` is one, as a dense polynomial in the remaining
/// coordinates.
fn stratum_poly(poly: &ReducedPoly, lead: usize) -> Dense {
    let n = poly.nvars();
    let k = n - lead - 1;
    let e = poly
        .terms()
        .flat_map(|(exps, _)| exps[lead + 1..].iter().copied())
        .max()
        .unwrap_or(0) as usize
        + 1;
    let mut coeffs = vec![0u64; e.pow(k as u32)];
    let p = poly.prime();
    for (exps, c) in poly.terms() {
        if exps[..lead].iter().any(|&x| x > 0) {
            continue;
        }
        let idx = exps[lead + 1..].iter().fold(0usize, |acc, &x| acc * e + x as usize);
        coeffs[idx] = (coeffs[idx] + c) % p;
    }
    Dense { k, e, coeffs }
}

/// Square-class tally of `poly` over all normalized points of ℙ^{n-1}(𝔽_p).
/// The first free coordinate of each stratum is split across the current
/// rayon pool.
pub(crate) fn tally_projective(poly: &ReducedPoly, ctx: &PrimeFieldCtx) -> Tally {
    let p = ctx.p();
    (0..poly.nvars())
        .map(|lead| {
            let dense = stratum_poly(poly, lead);
            if dense.k == 0 {
                return dense.tally(ctx);
            }
            (0..p)
                .into_par_iter()
                .map(|a| dense.partial(a, p).tally(ctx))
                .reduce(Tally::default, Tally::add)
        })
        .fold(Tally::default(), Tally::add)
}

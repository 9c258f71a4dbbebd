//! Point counting of hypersurfaces and double covers over prime fields.
//!
//! Base points are enumerated as normalized representatives of projective
//! space: the first nonzero coordinate is 1. A double cover `w² = g`
//! contributes one point over each zero of `g`, two over each nonzero square
//! and none over a non-square.

mod kernel;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::alphabet::VarietyModel;
use crate::expr::{ExprError, MAX_MODULUS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Csv(#[from] CsvError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("csv output failed: {0}")]
pub struct CsvError(String);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareClass {
    Zero,
    Square,
    NonSquare,
}

/// Arithmetic context for one odd prime: a table of quadratic characters.
#[derive(Clone, Debug)]
pub struct PrimeFieldCtx {
    p: u64,
    classes: Vec<SquareClass>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Odd primes up to and including `bound`.
pub fn odd_primes_up_to(bound: u64) -> Vec<u64> {
    (3..=bound).step_by(2).filter(|&n| is_prime(n)).collect()
}

pub fn make_ctx(p: u64) -> Result<PrimeFieldCtx, CountError> {
    if p == 2 || p >= MAX_MODULUS || !is_prime(p) {
        return Err(CountError::NotOddPrime(p));
    }
    let mut classes = vec![SquareClass::NonSquare; p as usize];
    classes[0] = SquareClass::Zero;
    for a in 1..=(p - 1) / 2 {
        classes[(a * a % p) as usize] = SquareClass::Square;
    }
    Ok(PrimeFieldCtx { p, classes })
}

impl PrimeFieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn class(&self, a: u64) -> SquareClass {
        self.classes[(a % self.p) as usize]
    }

    /// Nonzero squares in ascending order.
    pub fn squares(&self) -> Vec<u64> {
        (1..self.p)
            .filter(|&a| self.classes[a as usize] == SquareClass::Square)
            .collect()
    }

    fn tally_value(&self, v: u64) -> kernel::Tally {
        let mut t = kernel::Tally::default();
        match self.classes[v as usize] {
            SquareClass::Zero => t.zeros = 1,
            SquareClass::Square => t.squares = 1,
            SquareClass::NonSquare => t.nonsquares = 1,
        }
        t
    }
}

/// Number of 𝔽_p-points of one reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCountRecord {
    pub p: u64,
    pub count: u64,
    /// Base points where the defining or branch polynomial vanishes.
    pub zeros: u64,
    /// Base points with a nonzero square branch value (double covers only).
    pub squares: Option<u64>,
    /// Base points with a non-square branch value (double covers only).
    pub nonsquares: Option<u64>,
    pub good_reduction: bool,
}

/// `#ℙⁿ(𝔽_p)` for `n = vars - 1`.
pub fn projective_size(vars: usize, p: u64) -> u64 {
    (0..vars as u32).map(|i| p.pow(i)).sum()
}

/// Counts the 𝔽_p-points of `model`. Work is spread over the current rayon
/// pool; the result does not depend on the number of threads.
pub fn count_points(model: &VarietyModel, p: u64) -> Result<PointCountRecord, CountError> {
    let ctx = make_ctx(p)?;
    let reduced = model.base_poly().reduce_mod(p)?;
    let t = kernel::tally_projective(&reduced, &ctx);
    let good_reduction = model.is_good_prime(p);
    Ok(if model.is_double_cover() {
        PointCountRecord {
            p,
            count: t.zeros + 2 * t.squares,
            zeros: t.zeros,
            squares: Some(t.squares),
            nonsquares: Some(t.nonsquares),
            good_reduction,
        }
    } else {
        PointCountRecord {
            p,
            count: t.zeros,
            zeros: t.zeros,
            squares: None,
            nonsquares: None,
            good_reduction,
        }
    })
}

/// Records for every odd prime up to `bound`, in ascending order.
pub fn count_range(model: &VarietyModel, bound: u64) -> Result<Vec<PointCountRecord>, CountError> {
    odd_primes_up_to(bound)
        .into_iter()
        .map(|p| count_points(model, p))
        .collect()
}

/// Which sign convention relates point counts to Fourier coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Residue `count − 1 mod p`, used for K3 surfaces.
    Weight3,
    /// Residue `1 − count mod p`, used for rigid threefolds.
    Weight4,
}

pub fn residue(count: u64, p: u64, convention: Convention) -> u64 {
    let c = count % p;
    match convention {
        Convention::Weight3 => (c + p - 1) % p,
        Convention::Weight4 => (1 + p - c) % p,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueRow {
    pub p: u64,
    pub residue: u64,
}

pub fn residue_report(records: &[PointCountRecord], convention: Convention) -> Vec<ResidueRow> {
    records
        .iter()
        .map(|r| ResidueRow {
            p: r.p,
            residue: residue(r.count, r.p, convention),
        })
        .collect()
}

/// One column of the point-count table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Table2Row {
    pub p: u64,
    pub count: u64,
    pub residue_weight4: u64,
    pub good_reduction: bool,
}

pub fn table2_rows(records: &[PointCountRecord]) -> Vec<Table2Row> {
    records
        .iter()
        .map(|r| Table2Row {
            p: r.p,
            count: r.count,
            residue_weight4: residue(r.count, r.p, Convention::Weight4),
            good_reduction: r.good_reduction,
        })
        .collect()
}

pub fn table2_csv(rows: &[Table2Row]) -> Result<String, CountError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CsvError(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CsvError(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Markdown blocks of eight primes, each with rows p, count and
/// `1 − count mod p`.
pub fn table2_markdown(rows: &[Table2Row]) -> String {
    let mut out = String::new();
    for (i, block) in rows.chunks(8).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let line = |label: &str, f: &dyn Fn(&Table2Row) -> u64| {
            let cells: Vec<String> = block.iter().map(|r| f(r).to_string()).collect();
            format!("| {} | {} |\n", label, cells.join(" | "))
        };
        out += &line("p", &|r| r.p);
        let _ = writeln!(out, "|---|{}", "---|".repeat(block.len()));
        out += &line("#X_p", &|r| r.count);
        out += &line("1 - #X_p mod p", &|r| r.residue_weight4);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::builtin_model;
    use crate::expr::Ring;

    #[test]
    fn square_tables() {
        assert_eq!(make_ctx(7).unwrap().squares(), [1, 2, 4]);
        assert_eq!(make_ctx(5).unwrap().squares(), [1, 4]);
        for p in [3, 5, 7, 11, 97] {
            let ctx = make_ctx(p).unwrap();
            assert_eq!(ctx.class(0), SquareClass::Zero);
            assert_eq!(ctx.squares().len() as u64, (p - 1) / 2);
        }
    }

    #[test]
    fn rejects_non_odd_primes() {
        for n in [0, 1, 2, 9, 15, 1 << 33] {
            assert_eq!(make_ctx(n).unwrap_err(), CountError::NotOddPrime(n));
        }
    }

    #[test]
    fn hyperplane_count() {
        let r = Ring::new(["x", "y", "z", "t"]);
        let m = VarietyModel::hypersurface("H", r.poly("x"), [2]).unwrap();
        let rec = count_points(&m, 5).unwrap();
        assert_eq!(rec.count, 31);
        assert_eq!(rec.squares, None);
    }

    #[test]
    fn octic_power_cover() {
        // x = 0 gives a P^2 of branch zeros, x = 1 gives 27 points with value 1
        let r = Ring::new(["x", "y", "z", "t"]);
        let m = VarietyModel::double_cover("W", "w", 4, r.poly("x^8"), [2]).unwrap();
        let rec = count_points(&m, 3).unwrap();
        assert_eq!(rec.count, 67);
        assert_eq!(rec.zeros, 13);
        assert_eq!(rec.squares, Some(27));
    }

    #[test]
    fn double_octic_small_primes() {
        let x = builtin_model("X").unwrap();
        let recs = count_range(&x, 10).unwrap();
        let counts: Vec<(u64, u64)> = recs.iter().map(|r| (r.p, r.count)).collect();
        assert_eq!(counts, [(3, 46), (5, 180), (7, 500)]);
        assert!(!recs[0].good_reduction && recs[1].good_reduction);
        for r in &recs {
            let total = r.zeros + r.squares.unwrap() + r.nonsquares.unwrap();
            assert_eq!(total, projective_size(4, r.p));
        }
    }

    #[test]
    fn empty_range() {
        let x = builtin_model("X").unwrap();
        assert!(count_range(&x, 2).unwrap().is_empty());
        assert_eq!(count_range(&x, 3).unwrap().len(), 1);
    }

    #[test]
    fn residues() {
        assert_eq!(residue(180, 5, Convention::Weight4), 1);
        assert_eq!(residue(500, 7, Convention::Weight4), 5);
        assert_eq!(residue(46, 3, Convention::Weight4), 0);
        assert_eq!(residue(948380, 97, Convention::Weight4), 87);
        assert_eq!(residue(8, 7, Convention::Weight3), 0);
        assert_eq!(residue(8, 7, Convention::Weight4), 0);
        assert_eq!(residue(5, 7, Convention::Weight3), 4);
    }

    #[test]
    fn table2_renderings() {
        let rows = table2_rows(&[PointCountRecord {
            p: 5,
            count: 180,
            zeros: 0,
            squares: None,
            nonsquares: None,
            good_reduction: true,
        }]);
        assert_eq!(
            table2_csv(&rows).unwrap(),
            "p,count,residue_weight4,good_reduction\n5,180,1,true\n"
        );
        let md = table2_markdown(&rows);
        assert_eq!(md, "| p | 5 |\n|---|---|\n| #X_p | 180 |\n| 1 - #X_p mod p | 1 |\n");
    }

    #[test]
    fn odd_primes() {
        assert_eq!(odd_primes_up_to(100).len(), 24);
        assert_eq!(odd_primes_up_to(2), Vec::<u64>::new());
    }
}

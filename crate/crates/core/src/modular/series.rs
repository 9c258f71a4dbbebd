use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ModularError;

/// Integer power series truncated after `q^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    /// Coefficients of `q^0 … q^N`.
    coeffs: Vec<BigInt>,
}

impl QSeries {
    /// Series with the given coefficients of `q^0, q^1, …`; the truncation is
    /// `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<BigInt>) -> QSeries {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        QSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> QSeries {
        QSeries::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: usize) -> QSeries {
        QSeries::new(vec![BigInt::zero(); n + 1])
    }

    pub fn one(n: usize) -> QSeries {
        let mut s = QSeries::zero(n);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^k`, or `None` beyond the truncation.
    pub fn coeff(&self, k: usize) -> Option<&BigInt> {
        self.coeffs.get(k)
    }

    pub fn truncate(&self, n: usize) -> QSeries {
        QSeries::new(self.coeffs[..=n.min(self.truncation())].to_vec())
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let n = self.truncation().min(other.truncation());
        QSeries::new((0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn neg(&self) -> QSeries {
        QSeries::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let n = self.truncation().min(other.truncation());
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries::new(out)
    }

    /// Multiplicative inverse; requires constant term ±1.
    pub fn inverse(&self) -> Result<QSeries, ModularError> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(ModularError::NotInvertible);
        }
        let n = self.truncation();
        let mut out: Vec<BigInt> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = if k == 0 { BigInt::one() } else { BigInt::zero() };
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc -= &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(acc * c0);
        }
        Ok(QSeries::new(out))
    }

    /// The series in `q^m`.
    pub fn dilate(&self, m: usize) -> QSeries {
        let n = self.truncation();
        let mut out = vec![BigInt::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if k * m > n {
                break;
            }
            out[k * m] = c.clone();
        }
        QSeries::new(out)
    }

    /// `q^s` times the series, keeping the truncation.
    pub fn shift(&self, s: usize) -> QSeries {
        let n = self.truncation();
        let mut out = vec![BigInt::zero(); n + 1];
        if s <= n {
            out[s..].clone_from_slice(&self.coeffs[..=n - s]);
        }
        QSeries::new(out)
    }

    fn support(&self) -> Vec<(usize, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Product with a series given by its few nonzero terms.
    fn mul_sparse(&self, sparse: &QSeries) -> QSeries {
        let n = self.truncation().min(sparse.truncation());
        let support = sparse.support();
        let mut out = vec![BigInt::zero(); n + 1];
        for (k, o) in out.iter_mut().enumerate() {
            for &(j, c) in &support {
                if j > k {
                    break;
                }
                if !self.coeffs[k - j].is_zero() {
                    *o += c * &self.coeffs[k - j];
                }
            }
        }
        QSeries::new(out)
    }

    /// Quotient by a sparse series with constant term 1.
    fn div_sparse(&self, sparse: &QSeries) -> QSeries {
        let n = self.truncation().min(sparse.truncation());
        let support: Vec<(usize, &BigInt)> = sparse.support().into_iter().filter(|&(j, _)| j > 0).collect();
        let mut out: Vec<BigInt> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for &(j, c) in &support {
                if j > k {
                    break;
                }
                if !out[k - j].is_zero() {
                    acc -= c * &out[k - j];
                }
            }
            out.push(acc);
        }
        QSeries::new(out)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let abs = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = abs.is_one() && k > 0;
            if !unit {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.truncation() + 1)
    }
}

/// `∏_{n≥1} (1 − qⁿ)` through `q^N` by the pentagonal number theorem.
pub fn euler_product(n: usize) -> QSeries {
    let mut out = QSeries::zero(n);
    out.coeffs[0] = BigInt::one();
    for k in 1.. {
        let g1 = k * (3 * k - 1) / 2;
        if g1 > n {
            break;
        }
        let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        out.coeffs[g1] += &sign;
        let g2 = k * (3 * k + 1) / 2;
        if g2 <= n {
            out.coeffs[g2] += &sign;
        }
    }
    out
}

/// A product `∏ η(m·τ)^e` of Dedekind eta functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    factors: Vec<(u32, i32)>,
}

impl EtaQuotientSpec {
    /// Validates that `∑ m·e` is a non-negative multiple of 24.
    pub fn new(factors: Vec<(u32, i32)>) -> Result<EtaQuotientSpec, ModularError> {
        if factors.is_empty() {
            return Err(ModularError::BadEtaSpec("no factors".into()));
        }
        if factors.iter().any(|&(m, _)| m == 0) {
            return Err(ModularError::BadEtaSpec("multipliers must be at least 1".into()));
        }
        let sum: i64 = factors.iter().map(|&(m, e)| m as i64 * e as i64).sum();
        if sum < 0 || sum % 24 != 0 {
            return Err(ModularError::NonIntegralPrefactor { numerator: sum });
        }
        Ok(EtaQuotientSpec { factors })
    }

    /// Parses `"m:e,m:e,…"`.
    pub fn parse(text: &str) -> Result<EtaQuotientSpec, ModularError> {
        let factors = text
            .split(',')
            .map(|part| {
                let (m, e) = part
                    .trim()
                    .split_once(':')
                    .ok_or_else(|| ModularError::BadEtaSpec(format!("expected m:e, got {part:?}")))?;
                let m = m
                    .trim()
                    .parse()
                    .map_err(|_| ModularError::BadEtaSpec(format!("bad multiplier {m:?}")))?;
                let e = e
                    .trim()
                    .parse()
                    .map_err(|_| ModularError::BadEtaSpec(format!("bad exponent {e:?}")))?;
                Ok((m, e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        EtaQuotientSpec::new(factors)
    }

    pub fn factors(&self) -> &[(u32, i32)] {
        &self.factors
    }

    /// Power of `q` in front of the product.
    pub fn prefactor(&self) -> usize {
        let sum: i64 = self.factors.iter().map(|&(m, e)| m as i64 * e as i64).sum();
        (sum / 24) as usize
    }

    /// Twice the weight, `∑ e`.
    pub fn twice_weight(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e as i64).sum()
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|(m, e)| format!("{m}:{e}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// q-expansion of the eta quotient through `q^N`. Each factor is applied by
/// sparse multiplication or division with the pentagonal series, so the
/// cost is `O(N·√N)` per unit of exponent.
pub fn eta_quotient(spec: &EtaQuotientSpec, n: usize) -> QSeries {
    let s = spec.prefactor();
    if s > n {
        return QSeries::zero(n);
    }
    let inner = n - s;
    let mut acc = QSeries::one(inner);
    for &(m, e) in spec.factors() {
        let base = euler_product(inner).dilate(m as usize);
        for _ in 0..e.unsigned_abs() {
            acc = if e > 0 {
                acc.mul_sparse(&base)
            } else {
                acc.div_sparse(&base)
            };
        }
    }
    let mut coeffs = vec![BigInt::zero(); s];
    coeffs.extend(acc.coeffs);
    QSeries::new(coeffs)
}

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::modp::ModCache;
use super::ExprError;

/// Exact coefficient type. `BigRational` keeps values in lowest terms with a
/// positive denominator, and zero is always `0/1`.
pub type ExactScalar = BigRational;

/// Ordered list of variable names shared by every polynomial of a ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring(Arc<[String]>);

impl Ring {
    /// Builds a ring from variable names.
    ///
    /// # Panics
    /// On an empty or duplicated name. Use [`Ring::try_new`] for user input.
    pub fn new<I, S>(vars: I) -> Ring
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Ring::try_new(vars).expect("invalid ring")
    }

    pub fn try_new<I, S>(vars: I) -> Result<Ring, ExprError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            let valid = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(ExprError::InvalidVariable(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(ExprError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Ring(vars.into()))
    }

    pub fn vars(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.join(","))
    }
}

/// Exponent vector, one entry per ring variable.
///
/// Ordered graded-lexicographically: total degree first, then the exponent of
/// the earliest variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Monomial {
        Monomial(exponents.into_boxed_slice())
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.0.iter().zip(weights).map(|(e, w)| e * w).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree and homogeneity of a polynomial. The zero polynomial has no
/// degree and counts as homogeneous.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeInfo {
    pub degree: Option<u32>,
    pub homogeneous: bool,
}

/// Sparse multivariate polynomial with exact rational coefficients, kept in
/// canonical form: no zero coefficients, terms keyed by [`Monomial`].
#[derive(Clone)]
pub struct MultiPoly {
    ring: Ring,
    terms: BTreeMap<Monomial, ExactScalar>,
    pub(super) cache: ModCache,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{:?}]({})", self.ring, self)
    }
}

impl MultiPoly {
    fn from_map(ring: Ring, terms: BTreeMap<Monomial, ExactScalar>) -> MultiPoly {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        MultiPoly {
            ring,
            terms,
            cache: ModCache::default(),
        }
    }

    pub fn zero(ring: &Ring) -> MultiPoly {
        MultiPoly::from_map(ring.clone(), BTreeMap::new())
    }

    pub fn one(ring: &Ring) -> MultiPoly {
        MultiPoly::constant(ring, ExactScalar::one())
    }

    pub fn constant(ring: &Ring, c: ExactScalar) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.len()), c);
        }
        MultiPoly::from_map(ring.clone(), terms)
    }

    pub fn integer(ring: &Ring, c: i64) -> MultiPoly {
        MultiPoly::constant(ring, ExactScalar::from_integer(BigInt::from(c)))
    }

    /// The `idx`-th ring variable.
    pub fn var(ring: &Ring, idx: usize) -> MultiPoly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(ring.len(), idx), ExactScalar::one());
        MultiPoly::from_map(ring.clone(), terms)
    }

    pub fn var_named(ring: &Ring, name: &str) -> Option<MultiPoly> {
        ring.index_of(name).map(|i| MultiPoly::var(ring, i))
    }

    /// Sums the given terms; repeated monomials are combined.
    ///
    /// # Panics
    /// If an exponent vector has the wrong length.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> MultiPoly
    where
        I: IntoIterator<Item = (Vec<u32>, ExactScalar)>,
    {
        let mut map = BTreeMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), ring.len(), "exponent vector length");
            accumulate(&mut map, Monomial::new(exps), c);
        }
        MultiPoly::from_map(ring.clone(), map)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// Leading term under graded-lex.
    pub fn leading_term(&self) -> Option<(&Monomial, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    fn check_ring(&self, other: &MultiPoly) -> Result<(), ExprError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(ExprError::RingMismatch {
                left: self.ring.vars().to_vec(),
                right: other.ring.vars().to_vec(),
            })
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, ExprError> {
        self.check_ring(other)?;
        let mut map = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut map, m.clone(), c.clone());
        }
        Ok(MultiPoly::from_map(self.ring.clone(), map))
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, ExprError> {
        self.check_ring(other)?;
        let mut map = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut map, m.clone(), -c);
        }
        Ok(MultiPoly::from_map(self.ring.clone(), map))
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, ExprError> {
        self.check_ring(other)?;
        let mut map = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                accumulate(&mut map, ma.mul(mb), ca * cb);
            }
        }
        Ok(MultiPoly::from_map(self.ring.clone(), map))
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut result = MultiPoly::one(&self.ring);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &ExactScalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        MultiPoly::from_map(self.ring.clone(), terms)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        let terms = self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect();
        MultiPoly::from_map(self.ring.clone(), terms)
    }

    /// Product of the given factors; `one` for an empty list.
    pub fn product<'a, I>(ring: &Ring, factors: I) -> MultiPoly
    where
        I: IntoIterator<Item = &'a MultiPoly>,
    {
        factors.into_iter().fold(MultiPoly::one(ring), |acc, f| &acc * f)
    }

    pub fn degree_info(&self) -> DegreeInfo {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => DegreeInfo {
                degree: None,
                homogeneous: true,
            },
            Some(first) => {
                let (mut max, mut homogeneous) = (first, true);
                for d in degrees {
                    homogeneous &= d == first;
                    max = max.max(d);
                }
                DegreeInfo {
                    degree: Some(max),
                    homogeneous,
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.degree_info().degree
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree_info().homogeneous
    }

    /// Weighted degree if every monomial has the same weighted degree.
    /// `Ok(None)` for the zero polynomial.
    pub fn weighted_homogeneous_degree(&self, weights: &[u32]) -> Result<Option<u32>, ExprError> {
        if weights.len() != self.ring.len() {
            return Err(ExprError::PointLength {
                expected: self.ring.len(),
                got: weights.len(),
            });
        }
        let mut degrees = self.terms.keys().map(|m| m.weighted_degree(weights));
        let Some(first) = degrees.next() else {
            return Ok(None);
        };
        if degrees.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(ExprError::NotHomogeneous)
        }
    }

    /// Lowest total degree among the terms, i.e. the order of vanishing at
    /// the origin. `None` for the zero polynomial.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Largest `k` such that the `idx`-th variable to the power `k` divides
    /// every term. `None` for the zero polynomial.
    pub fn min_exponent(&self, idx: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponents()[idx]).min()
    }

    /// Variables that occur in at least one term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.len())
            .filter(|&i| self.terms.keys().any(|m| m.exponents()[i] > 0))
            .collect()
    }

    pub fn eval(&self, point: &[ExactScalar]) -> Result<ExactScalar, ExprError> {
        self.check_len(point.len())?;
        let mut acc = ExactScalar::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn eval_integers(&self, point: &[i64]) -> Result<ExactScalar, ExprError> {
        let pt: Vec<ExactScalar> = point.iter().map(|&v| int_scalar(v)).collect();
        self.eval(&pt)
    }

    pub(super) fn check_len(&self, len: usize) -> Result<(), ExprError> {
        if len == self.ring.len() {
            Ok(())
        } else {
            Err(ExprError::PointLength {
                expected: self.ring.len(),
                got: len,
            })
        }
    }

    /// Multiplicity at a point of an affine chart.
    ///
    /// `point` holds all coordinates, with `point[chart] == 1`. The chart
    /// variable is set to 1, every other variable is translated so the point
    /// sits at the origin, and the lowest surviving degree is returned. Zero
    /// means the polynomial does not vanish at the point; `None` means the
    /// polynomial vanishes identically on the chart.
    pub fn multiplicity_at(&self, point: &[ExactScalar], chart: usize) -> Result<Option<u32>, ExprError> {
        self.check_len(point.len())?;
        if chart >= point.len() || !point[chart].is_one() {
            return Err(ExprError::BadChart { chart });
        }
        let images: Vec<MultiPoly> = (0..self.ring.len())
            .map(|i| {
                if i == chart {
                    MultiPoly::one(&self.ring)
                } else {
                    let shift = MultiPoly::constant(&self.ring, point[i].clone());
                    &MultiPoly::var(&self.ring, i) + &shift
                }
            })
            .collect();
        let map = super::PolyMap::new(self.ring.clone(), self.ring.clone(), images)?;
        Ok(map.apply(self)?.lowest_degree())
    }

    /// Multiplicity at a projective point with integer coordinates, computed
    /// in the chart of its last nonzero coordinate.
    pub fn multiplicity_at_projective(&self, point: &[i64]) -> Result<Option<u32>, ExprError> {
        self.check_len(point.len())?;
        let chart = point.iter().rposition(|&v| v != 0).ok_or(ExprError::ZeroPoint)?;
        let scale = int_scalar(point[chart]);
        let affine: Vec<ExactScalar> = point.iter().map(|&v| int_scalar(v) / &scale).collect();
        self.multiplicity_at(&affine, chart)
    }

    /// Exact quotient `self / divisor` by leading-term division in graded-lex
    /// order. Fails with [`ExprError::NotDivisible`] when a remainder appears.
    pub fn divide_exact(&self, divisor: &MultiPoly) -> Result<MultiPoly, ExprError> {
        self.check_ring(divisor)?;
        let (lead_m, lead_c) = divisor.leading_term().ok_or(ExprError::DivisionByZero)?;
        let mut rest = self.clone();
        let mut quotient = BTreeMap::new();
        while let Some((m, c)) = rest.leading_term() {
            if !lead_m.divides(m) {
                return Err(ExprError::NotDivisible);
            }
            let qm = lead_m.quotient_of(m);
            let qc = c / lead_c;
            let step = divisor.mul_monomial(&qm).scale(&qc);
            rest = &rest - &step;
            quotient.insert(qm, qc);
        }
        Ok(MultiPoly::from_map(self.ring.clone(), quotient))
    }

    /// Same polynomial viewed in another ring with identical variable count.
    pub fn with_ring(&self, ring: &Ring) -> Result<MultiPoly, ExprError> {
        if ring.len() != self.ring.len() {
            return Err(ExprError::RingMismatch {
                left: self.ring.vars().to_vec(),
                right: ring.vars().to_vec(),
            });
        }
        Ok(MultiPoly::from_map(ring.clone(), self.terms.clone()))
    }
}

pub(crate) fn int_scalar(v: i64) -> ExactScalar {
    ExactScalar::from_integer(BigInt::from(v))
}

fn accumulate(map: &mut BTreeMap<Monomial, ExactScalar>, m: Monomial, c: ExactScalar) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// # Panics
        /// If the operands live in different rings.
        impl $trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$checked(rhs).expect("polynomial ring mismatch")
            }
        }

        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        MultiPoly::from_map(self.ring.clone(), terms)
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// Prints in the accepted input grammar, terms in descending graded-lex
/// order, e.g. `x^2 - 2*x*y + 1/2*t`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut first = true;
            if m.is_one() || !abs.is_one() {
                write!(f, "{}", abs)?;
                first = false;
            }
            for (var, &e) in self.ring.vars().iter().zip(m.exponents()) {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(var)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

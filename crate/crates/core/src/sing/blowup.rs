use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::linalg::{self, Matrix};
use super::{branch_components, curve_catalog, find_curve, surface_label, table1_points, CurveComponent, SingError};
use crate::expr::{ExactScalar, Monomial, MultiPoly, PolyMap, Ring};

/// Centers of the five blow-ups along double curves, in the order they are
/// performed.
pub const BLOWUP_CENTERS: [&str; 5] = ["B_{1,6}", "B_{2,5}", "B_{5,6}^1", "B_{3,6}^1", "B_{4,5}^1"];

const SLICE_SEED: u64 = 0x0c7_1c5;
const SLICE_ATTEMPTS: usize = 64;
const MAX_PARAMETER: i64 = 64;

/// Vanishing orders of a list of polynomials along a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveOrders {
    pub curve: String,
    /// Minimum order over the sample points, one per divisor component.
    pub orders: Vec<u32>,
    pub total: u32,
    pub samples: Vec<Vec<i64>>,
    /// Orders at each sample point, one row per sample.
    pub per_sample: Vec<Vec<u32>>,
    /// True when every sample point produced the same orders.
    pub consistent: bool,
}

fn proportional(a: &[i64], b: &[i64]) -> bool {
    linalg::rank(&linalg::from_ints(&[a.to_vec(), b.to_vec()])) < 2
}

/// A curve point and its tangent vector.
type Sample = (Vec<i64>, Vec<i64>);

/// Sample points `(k : 1)` for `k = 0, 1, …`, skipping special points and
/// points where the parametrization is not immersive.
fn sample_points(curve: &CurveComponent, wanted: usize) -> Result<Vec<Sample>, SingError> {
    let special = table1_points();
    let mut out: Vec<Sample> = Vec::with_capacity(wanted);
    for k in 0..MAX_PARAMETER {
        let pt = curve.point_at(k, 1);
        if pt.iter().all(|&v| v == 0)
            || special.iter().any(|s| proportional(s, &pt))
            || out.iter().any(|(q, _)| proportional(q, &pt))
        {
            continue;
        }
        let tangent = curve.tangent_at(k, 1);
        if proportional(&pt, &tangent) {
            continue;
        }
        out.push((pt, tangent));
        if out.len() == wanted {
            return Ok(out);
        }
    }
    Err(SingError::NoSamples {
        curve: curve.label.clone(),
        wanted,
    })
}

/// Restrictions of `divisor` to the plane through `pt` spanned by two random
/// directions, in affine coordinates centered at `pt`.
fn slice_orders(
    divisor: &[MultiPoly],
    pt: &[i64],
    tangent: &[i64],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u32>, SingError> {
    let plane = Ring::new(["a", "b"]);
    let n = pt.len();
    'attempt: for _ in 0..SLICE_ATTEMPTS {
        let v1: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
        let v2: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
        let frame = linalg::from_ints(&[pt.to_vec(), v1.clone(), v2.clone(), tangent.to_vec()]);
        if n != 4 || linalg::det(&frame) == ExactScalar::from_integer(0.into()) {
            continue;
        }
        let images = (0..n)
            .map(|i| {
                let t = [(vec![0, 0], pt[i]), (vec![1, 0], v1[i]), (vec![0, 1], v2[i])];
                MultiPoly::from_terms(&plane, t.into_iter().map(|(e, c)| (e, crate::expr::int_scalar(c))))
            })
            .collect();
        let Some(first) = divisor.first() else {
            return Ok(Vec::new());
        };
        let map = PolyMap::new(first.ring().clone(), plane.clone(), images)?;
        let mut orders = Vec::with_capacity(divisor.len());
        for d in divisor {
            match map.apply(d)?.lowest_degree() {
                Some(o) => orders.push(o),
                None => continue 'attempt,
            }
        }
        return Ok(orders);
    }
    Err(SingError::DegenerateSlice(pt.to_vec()))
}

/// Order of vanishing of each component of `divisor` along `curve`.
///
/// At each of `samples` points of the curve the components are restricted to
/// a random plane meeting the curve transversally there; the order at that
/// point is the multiplicity of the restriction. The reported order is the
/// minimum over the samples. The planes come from a fixed seed, so results
/// are reproducible.
pub fn mult_along_curve(
    divisor: &[MultiPoly],
    curve: &CurveComponent,
    samples: usize,
) -> Result<CurveOrders, SingError> {
    if samples < 3 {
        return Err(SingError::TooFewSamples(samples));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SLICE_SEED);
    let points = sample_points(curve, samples)?;
    let mut per_sample = Vec::with_capacity(samples);
    for (pt, tangent) in &points {
        per_sample.push(slice_orders(divisor, pt, tangent, &mut rng)?);
    }
    let orders: Vec<u32> = (0..divisor.len())
        .map(|i| per_sample.iter().map(|row| row[i]).min().unwrap_or(0))
        .collect();
    let consistent = per_sample.windows(2).all(|w| w[0] == w[1]);
    Ok(CurveOrders {
        curve: curve.label.clone(),
        total: orders.iter().sum(),
        orders,
        samples: points.into_iter().map(|(p, _)| p).collect(),
        per_sample,
        consistent,
    })
}

/// Multiplicity of `B` along one blow-up center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupLedgerEntry {
    pub center: String,
    /// Order of each component B1..B6 along the center.
    pub orders: BTreeMap<String, u32>,
    pub total: u32,
}

/// Orders of B1..B6 along each of the five centers. Every total must be 2,
/// so each exceptional divisor enters the branch locus with even
/// multiplicity.
pub fn blowup_ledger() -> Result<Vec<BlowupLedgerEntry>, SingError> {
    let catalog = curve_catalog()?;
    let comps = branch_components();
    BLOWUP_CENTERS
        .iter()
        .map(|label| {
            let curve = find_curve(&catalog, label)?;
            let res = mult_along_curve(&comps, curve, 3)?;
            if res.total != 2 {
                return Err(SingError::OddTotal {
                    center: label.to_string(),
                    total: res.total,
                });
            }
            Ok(BlowupLedgerEntry {
                center: label.to_string(),
                orders: res
                    .orders
                    .iter()
                    .enumerate()
                    .map(|(i, &o)| (surface_label(i), o))
                    .collect(),
                total: res.total,
            })
        })
        .collect()
}

/// One affine chart of a blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupChart {
    /// Index of the exceptional coordinate in the chart ring.
    pub exceptional: usize,
    /// Pullback of the polynomial.
    pub total: MultiPoly,
    /// `total` divided by the largest power of the exceptional coordinate.
    pub strict: MultiPoly,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartBlowup {
    /// The polynomial in coordinates where the center is `{c0 = c1 = 0}`.
    pub adapted: MultiPoly,
    /// Chart `c1 = v·c0`, coordinates `(c0, v, …)`.
    pub chart0: BlowupChart,
    /// Chart `c0 = v·c1`, coordinates `(v, c1, …)`.
    pub chart1: BlowupChart,
    pub multiplicity: u32,
}

fn linear_row(form: &MultiPoly) -> Result<Vec<ExactScalar>, SingError> {
    let info = form.degree_info();
    if info.degree != Some(1) || !info.homogeneous {
        return Err(SingError::NonLinearCenter);
    }
    let n = form.ring().len();
    Ok((0..n).map(|i| form.coeff(&Monomial::var(n, i))).collect())
}

fn unit_row(n: usize, i: usize) -> Vec<ExactScalar> {
    (0..n)
        .map(|j| ExactScalar::from_integer(((i == j) as i64).into()))
        .collect()
}

fn chart(adapted: &MultiPoly, names: Vec<String>, exceptional: usize) -> Result<BlowupChart, SingError> {
    let ring = Ring::try_new(names)?;
    let other = 1 - exceptional;
    let images = (0..ring.len())
        .map(|i| {
            if i == other {
                &MultiPoly::var(&ring, 0) * &MultiPoly::var(&ring, 1)
            } else {
                MultiPoly::var(&ring, i)
            }
        })
        .collect();
    let total = PolyMap::new(adapted.ring().clone(), ring.clone(), images)?.apply(adapted)?;
    let multiplicity = total
        .min_exponent(exceptional)
        .ok_or(crate::expr::ExprError::DivisionByZero)?;
    let mut exps = vec![0; ring.len()];
    exps[exceptional] = multiplicity;
    let monomial = MultiPoly::from_terms(&ring, [(exps, ExactScalar::from_integer(1.into()))]);
    let strict = total.divide_exact(&monomial)?;
    Ok(BlowupChart {
        exceptional,
        total,
        strict,
        multiplicity,
    })
}

/// Blow-up of the ambient space along the codimension-two linear center
/// `{center[0] = center[1] = 0}`, computed in both standard charts.
///
/// The center forms become the first two coordinates, named `names`; the
/// remaining coordinates are standard variables completing a basis. The
/// new chart coordinate is called `v`.
pub fn chart_blowup_linear(p: &MultiPoly, center: [&MultiPoly; 2], names: [&str; 2]) -> Result<ChartBlowup, SingError> {
    let ring = p.ring();
    let n = ring.len();
    for c in center {
        if c.ring() != ring {
            return Err(crate::expr::ExprError::RingMismatch {
                left: ring.vars().to_vec(),
                right: c.ring().vars().to_vec(),
            }
            .into());
        }
    }
    let mut rows: Matrix = vec![linear_row(center[0])?, linear_row(center[1])?];
    if linalg::rank(&rows) < 2 {
        return Err(SingError::DependentCenter);
    }
    let mut rest = Vec::new();
    for i in (0..n).rev() {
        let mut trial = rows.clone();
        trial.push(unit_row(n, i));
        if linalg::rank(&trial) == trial.len() {
            rows = trial;
            rest.push(i);
        }
    }
    rest.sort_unstable();
    rows.truncate(2);
    rows.extend(rest.iter().map(|&i| unit_row(n, i)));
    let inv = linalg::inverse(&rows).ok_or(SingError::DependentCenter)?;

    let mut new_names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    new_names.extend(rest.iter().map(|&i| ring.vars()[i].clone()));
    let adapted_ring = Ring::try_new(new_names.clone())?;
    let images = inv
        .iter()
        .map(|row| {
            MultiPoly::from_terms(
                &adapted_ring,
                row.iter().enumerate().map(|(j, c)| {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    (e, c.clone())
                }),
            )
        })
        .collect();
    let adapted = PolyMap::new(ring.clone(), adapted_ring, images)?.apply(p)?;

    let mut names0 = new_names.clone();
    names0[1] = "v".into();
    let mut names1 = new_names;
    names1[0] = "v".into();
    let chart0 = chart(&adapted, names0, 0)?;
    let chart1 = chart(&adapted, names1, 1)?;
    if chart0.multiplicity != chart1.multiplicity {
        return Err(SingError::ChartMismatch(chart0.multiplicity, chart1.multiplicity));
    }
    Ok(ChartBlowup {
        multiplicity: chart0.multiplicity,
        adapted,
        chart0,
        chart1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::ring_xyzt;

    fn curve(label: &str) -> CurveComponent {
        find_curve(&curve_catalog().unwrap(), label).unwrap().clone()
    }

    #[test]
    fn octic_along_b16_has_order_two() {
        let res = mult_along_curve(&branch_components(), &curve("B_{1,6}"), 3).unwrap();
        assert_eq!(res.orders, [1, 0, 0, 0, 0, 1]);
        assert_eq!(res.total, 2);
        assert!(res.consistent);
        assert_eq!(res.samples.len(), 3);
    }

    #[test]
    fn octic_along_b12() {
        let res = mult_along_curve(&branch_components(), &curve("B_{1,2}"), 3).unwrap();
        assert_eq!(res.orders, [1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn smooth_quadric_has_order_one_along_a_line() {
        let b6 = branch_components()[5].clone();
        let res = mult_along_curve(&[b6], &curve("B_{1,6}"), 4).unwrap();
        assert_eq!(res.orders, [1]);
    }

    #[test]
    fn sample_points_avoid_special_points() {
        let res = mult_along_curve(&branch_components(), &curve("B_{5,6}^1"), 5).unwrap();
        let special = table1_points();
        for s in &res.samples {
            assert!(!special.iter().any(|p| proportional(p, s)));
        }
        assert_eq!(res.total, 2);
    }

    #[test]
    fn too_few_samples() {
        assert_eq!(
            mult_along_curve(&branch_components(), &curve("B_{1,2}"), 2),
            Err(SingError::TooFewSamples(2))
        );
    }

    #[test]
    fn ledger_totals_are_two() {
        let ledger = blowup_ledger().unwrap();
        let centers: Vec<&str> = ledger.iter().map(|e| e.center.as_str()).collect();
        assert_eq!(centers, BLOWUP_CENTERS);
        assert!(ledger.iter().all(|e| e.total == 2));
        assert_eq!(ledger[1].orders["B2"], 1);
        assert_eq!(ledger[1].orders["B5"], 1);
        assert_eq!(ledger[2].orders["B5"], 1);
        assert_eq!(ledger[2].orders["B6"], 1);
    }

    #[test]
    fn quadric_chart_matches_hand_computation() {
        let r = ring_xyzt();
        let b6 = r.poly("x*z - (y-t)^2");
        let (x, u) = (r.poly("x"), r.poly("y - t"));
        let res = chart_blowup_linear(&b6, [&x, &u], ["x", "u"]).unwrap();
        assert_eq!(res.multiplicity, 1);
        assert_eq!(res.adapted.to_string(), "x*z - u^2");
        let c1 = res.chart1.strict.ring().clone();
        assert_eq!(c1.vars(), ["v", "u", "z", "t"]);
        assert_eq!(res.chart1.total, c1.poly("u*(v*z - u)"));
        assert_eq!(res.chart1.strict, c1.poly("v*z - u"));
        let c0 = res.chart0.strict.ring().clone();
        assert_eq!(res.chart0.strict, c0.poly("z - v^2*x"));
    }

    #[test]
    fn plane_strict_transform_misses_one_chart() {
        let r = ring_xyzt();
        let (x, u) = (r.poly("x"), r.poly("y - t"));
        let res = chart_blowup_linear(&x, [&x, &u], ["x", "u"]).unwrap();
        assert_eq!(res.multiplicity, 1);
        assert_eq!(res.chart0.strict.to_string(), "1");
        assert_eq!(res.chart1.strict.to_string(), "v");
    }

    #[test]
    fn product_has_exceptional_multiplicity_two() {
        let r = ring_xyzt();
        let p = r.poly("x * (x - z) * (x*z - (y-t)^2)");
        let (x, u) = (r.poly("x"), r.poly("y - t"));
        assert_eq!(chart_blowup_linear(&p, [&x, &u], ["x", "u"]).unwrap().multiplicity, 2);
    }

    #[test]
    fn chart_errors() {
        let r = ring_xyzt();
        let p = r.poly("x");
        let (x, y) = (r.poly("x"), r.poly("y"));
        assert_eq!(
            chart_blowup_linear(&p, [&x, &r.poly("2*x")], ["a", "b"]),
            Err(SingError::DependentCenter)
        );
        assert_eq!(
            chart_blowup_linear(&p, [&x, &r.poly("y^2")], ["a", "b"]),
            Err(SingError::NonLinearCenter)
        );
        assert!(chart_blowup_linear(&p, [&x, &y], ["z", "b"]).is_err());
    }

    #[test]
    fn chart_agrees_with_slices_on_linear_centers() {
        let comps = branch_components();
        let octic = MultiPoly::product(comps[0].ring(), &comps);
        for label in ["B_{1,6}", "B_{2,5}", "B_{3,6}^1", "B_{4,5}^1", "B_{1,2}", "B_{3,4}"] {
            let c = curve(label);
            let res = chart_blowup_linear(&octic, [&c.equations[0], &c.equations[1]], ["c0", "c1"]).unwrap();
            let slices = mult_along_curve(&comps, &c, 3).unwrap();
            assert_eq!(res.multiplicity, slices.total, "{label}");
        }
    }
}

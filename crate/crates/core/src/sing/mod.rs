//! Singular locus of the branch octic `B = B1·…·B6`: its eighteen double
//! curves, the points where several components meet, multiplicities along
//! curves and the exceptional multiplicities of the resolving blow-ups.

mod blowup;
mod linalg;

use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::alphabet::{ring_xyzt, BRANCH_COMPONENTS};
use crate::expr::{ExprError, MultiPoly, PolyMap, Ring};

pub use blowup::{
    blowup_ledger, chart_blowup_linear, mult_along_curve, BlowupChart, BlowupLedgerEntry, ChartBlowup, CurveOrders,
    BLOWUP_CENTERS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("curve {0} is not parametrized correctly")]
    BadParametrization(String),
    #[error("split identity for {0} fails")]
    SplitIdentity(String),
    #[error("unknown curve {0}")]
    UnknownCurve(String),
    #[error("need at least 3 samples, got {0}")]
    TooFewSamples(usize),
    #[error("could not find {wanted} usable sample points on {curve}")]
    NoSamples { curve: String, wanted: usize },
    #[error("no transversal plane found at {0:?}")]
    DegenerateSlice(Vec<i64>),
    #[error("center forms must be linear")]
    NonLinearCenter,
    #[error("center forms are linearly dependent")]
    DependentCenter,
    #[error("blow-up along {center} has total {total}, expected 2")]
    OddTotal { center: String, total: u32 },
    #[error("charts disagree on the exceptional multiplicity: {0} vs {1}")]
    ChartMismatch(u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Line,
    Conic,
}

/// An irreducible component of the double locus of `B`.
#[derive(Clone, Debug)]
pub struct CurveComponent {
    pub label: String,
    /// Zero-indexed components of `B` containing the curve.
    pub surfaces: (usize, usize),
    /// Two polynomials in x, y, z, t whose common zeros are exactly the curve.
    pub equations: [MultiPoly; 2],
    /// Coordinates as forms in the parameter ring `(s, u)`.
    pub param: PolyMap,
    pub kind: CurveKind,
}

impl CurveComponent {
    /// The point with parameter `(s : u)`.
    pub fn point_at(&self, s: i64, u: i64) -> Vec<i64> {
        self.param
            .images()
            .iter()
            .map(|c| {
                let v = c.eval_integers(&[s, u]).expect("two parameters");
                v.to_integer().try_into().expect("small coordinates")
            })
            .collect()
    }

    /// Derivative of the parametrization in `s` at `(s : u)`.
    fn tangent_at(&self, s: i64, u: i64) -> Vec<i64> {
        let ring = self.param.target();
        self.param
            .images()
            .iter()
            .map(|c| {
                let d: MultiPoly = MultiPoly::from_terms(
                    ring,
                    c.terms().filter(|(m, _)| m.exponents()[0] > 0).map(|(m, k)| {
                        let e = m.exponents();
                        (vec![e[0] - 1, e[1]], k * crate::expr::int_scalar(e[0] as i64))
                    }),
                );
                let v = d.eval_integers(&[s, u]).expect("two parameters");
                v.to_integer().try_into().expect("small coordinates")
            })
            .collect()
    }

    /// True when both equations vanish at `point`.
    pub fn contains(&self, point: &[i64]) -> bool {
        self.equations
            .iter()
            .all(|e| e.eval_integers(point).is_ok_and(|v| v.is_zero()))
    }
}

/// Exact parametrization data for each curve:
/// (label, surfaces, equations, images of x, y, z, t in s, u, kind).
type CurveRow = (
    &'static str,
    (usize, usize),
    [&'static str; 2],
    [&'static str; 4],
    CurveKind,
);

const CURVES: [CurveRow; 18] = {
    use CurveKind::{Conic, Line};
    [
        ("B_{1,2}", (0, 1), ["x", "y"], ["0", "0", "s", "u"], Line),
        ("B_{1,3}", (0, 2), ["x", "z"], ["0", "s", "0", "u"], Line),
        ("B_{1,4}", (0, 3), ["x", "y - z"], ["0", "s", "s", "u"], Line),
        (
            "B_{1,5}",
            (0, 4),
            ["x", "y*z - (x-t)^2"],
            ["0", "s^2", "u^2", "s*u"],
            Conic,
        ),
        ("B_{1,6}", (0, 5), ["x", "y - t"], ["0", "s", "u", "s"], Line),
        ("B_{2,3}", (1, 2), ["y", "x - z"], ["s", "0", "s", "u"], Line),
        ("B_{2,4}", (1, 3), ["y", "z"], ["s", "0", "0", "u"], Line),
        ("B_{2,5}", (1, 4), ["y", "x - t"], ["s", "0", "u", "s"], Line),
        (
            "B_{2,6}",
            (1, 5),
            ["y", "x*z - (y-t)^2"],
            ["s^2", "0", "u^2", "s*u"],
            Conic,
        ),
        ("B_{3,4}", (2, 3), ["x - z", "y - z"], ["s", "s", "s", "u"], Line),
        (
            "B_{3,5}",
            (2, 4),
            ["x - z", "y*z - (x-t)^2"],
            ["s^2", "u^2", "s^2", "s^2 - s*u"],
            Conic,
        ),
        (
            "B_{3,6}^1",
            (2, 5),
            ["x - z", "x + y - t"],
            ["s", "u", "s", "s + u"],
            Line,
        ),
        (
            "B_{3,6}^2",
            (2, 5),
            ["x - z", "x - y + t"],
            ["s", "u", "s", "u - s"],
            Line,
        ),
        (
            "B_{4,5}^1",
            (3, 4),
            ["y - z", "x + y - t"],
            ["u", "s", "s", "s + u"],
            Line,
        ),
        (
            "B_{4,5}^2",
            (3, 4),
            ["y - z", "y - x + t"],
            ["u", "s", "s", "u - s"],
            Line,
        ),
        (
            "B_{4,6}",
            (3, 5),
            ["y - z", "x*z - (y-t)^2"],
            ["u^2", "s^2", "s^2", "s^2 - s*u"],
            Conic,
        ),
        (
            "B_{5,6}^1",
            (4, 5),
            ["x + y + z - 2*t", "y*z - (x-t)^2"],
            ["u^2", "s^2", "(s+u)^2", "s^2 + s*u + u^2"],
            Conic,
        ),
        (
            "B_{5,6}^2",
            (4, 5),
            ["x - y", "y*z - (x-t)^2"],
            ["s^2", "s^2", "u^2", "s^2 - s*u"],
            Conic,
        ),
    ]
};

/// Reducible intersections `B_i ∩ B_j` and witnesses for their splitting:
/// (label, substitution restricting to the common hyperplane as
/// (variable, image), polynomial, factor of component 1, factor of
/// component 2). With no substitution the identity is global.
type SplitRow = (
    &'static str,
    Option<(usize, &'static str)>,
    &'static str,
    &'static str,
    &'static str,
);

const SPLITS: [SplitRow; 3] = [
    ("B_{3,6}", Some((0, "z")), "x*z - (y-t)^2", "x + y - t", "x - y + t"),
    ("B_{4,5}", Some((1, "z")), "y*z - (x-t)^2", "x + y - t", "y - x + t"),
    (
        "B_{5,6}",
        None,
        "(y*z - (x-t)^2) - (x*z - (y-t)^2)",
        "x + y + z - 2*t",
        "y - x",
    ),
];

pub fn param_ring() -> Ring {
    Ring::new(["s", "u"])
}

/// The components B1..B6 of the branch octic.
pub fn branch_components() -> [MultiPoly; 6] {
    let ring = ring_xyzt();
    BRANCH_COMPONENTS.map(|s| ring.poly(s))
}

pub fn surface_label(i: usize) -> String {
    format!("B{}", i + 1)
}

/// All eighteen curves, with every parametrization and split identity
/// checked by exact arithmetic.
pub fn curve_catalog() -> Result<Vec<CurveComponent>, SingError> {
    let ring = ring_xyzt();
    let pring = param_ring();
    let comps = branch_components();
    let mut out = Vec::with_capacity(CURVES.len());
    for (label, surfaces, eqs, images, kind) in CURVES {
        let param = PolyMap::new(
            ring.clone(),
            pring.clone(),
            images.iter().map(|s| pring.poly(s)).collect(),
        )?;
        let max_deg = match kind {
            CurveKind::Line => 1,
            CurveKind::Conic => 2,
        };
        let degrees_ok = param
            .images()
            .iter()
            .all(|c| c.total_degree().is_none_or(|d| d <= max_deg) && c.is_homogeneous());
        let equations = eqs.map(|s| ring.poly(s));
        let vanishes = equations
            .iter()
            .chain([&comps[surfaces.0], &comps[surfaces.1]])
            .map(|e| param.apply(e))
            .collect::<Result<Vec<_>, _>>()?
            .iter()
            .all(MultiPoly::is_zero);
        if !degrees_ok || !vanishes {
            return Err(SingError::BadParametrization(label.to_string()));
        }
        out.push(CurveComponent {
            label: label.to_string(),
            surfaces,
            equations,
            param,
            kind,
        });
    }
    verify_splits()?;
    Ok(out)
}

fn verify_splits() -> Result<(), SingError> {
    let ring = ring_xyzt();
    for (label, restriction, poly, a, b) in SPLITS {
        let map = match restriction {
            Some((var, image)) => PolyMap::replace(&ring, var, ring.poly(image))?,
            None => PolyMap::identity(&ring),
        };
        let lhs = map.apply(&ring.poly(poly))?;
        let rhs = &map.apply(&ring.poly(a))? * &map.apply(&ring.poly(b))?;
        if lhs != rhs {
            return Err(SingError::SplitIdentity(label.to_string()));
        }
    }
    Ok(())
}

pub fn find_curve<'a>(catalog: &'a [CurveComponent], label: &str) -> Result<&'a CurveComponent, SingError> {
    catalog
        .iter()
        .find(|c| c.label == label)
        .ok_or_else(|| SingError::UnknownCurve(label.to_string()))
}

/// One row of the incidence table: a point, the multiplicity of `B` there,
/// and the components and curves of `B` through it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceRow {
    pub point: Vec<i64>,
    pub multiplicity: u32,
    pub surfaces: Vec<String>,
    pub curves: Vec<String>,
}

/// Expected incidence data: (point, multiplicity of B, surfaces, curves).
type ExpectedRow = ([i64; 4], u32, &'static [usize], &'static [&'static str]);

pub const TABLE1: [ExpectedRow; 16] = [
    (
        [1, 0, 0, 1],
        4,
        &[1, 3, 4],
        &["B_{2,4}", "B_{2,5}", "B_{4,5}^1", "B_{4,5}^2"],
    ),
    (
        [0, 1, 0, 1],
        4,
        &[0, 2, 5],
        &["B_{1,3}", "B_{1,6}", "B_{3,6}^1", "B_{3,6}^2"],
    ),
    ([0, -1, -1, 1], 3, &[0, 3, 4], &["B_{1,4}", "B_{1,5}", "B_{4,5}^2"]),
    ([-1, 0, -1, 1], 3, &[1, 2, 5], &["B_{2,3}", "B_{2,6}", "B_{3,6}^2"]),
    ([1, 0, 0, 0], 3, &[1, 3, 5], &["B_{2,4}", "B_{2,6}", "B_{4,6}"]),
    ([0, 1, 0, 0], 3, &[0, 2, 4], &["B_{1,3}", "B_{1,5}", "B_{3,5}"]),
    (
        [0, 0, 1, 0],
        4,
        &[0, 1, 4, 5],
        &["B_{1,2}", "B_{1,5}", "B_{1,6}", "B_{2,5}", "B_{2,6}", "B_{5,6}^2"],
    ),
    (
        [0, 0, 0, 1],
        4,
        &[0, 1, 2, 3],
        &["B_{1,2}", "B_{1,3}", "B_{1,4}", "B_{2,3}", "B_{2,4}", "B_{3,4}"],
    ),
    (
        [0, 1, 1, 1],
        4,
        &[0, 3, 4, 5],
        &["B_{1,4}", "B_{1,5}", "B_{1,6}", "B_{4,5}^1", "B_{4,6}", "B_{5,6}^1"],
    ),
    (
        [1, 0, 1, 1],
        4,
        &[1, 2, 4, 5],
        &["B_{2,3}", "B_{2,5}", "B_{2,6}", "B_{3,5}", "B_{3,6}^1", "B_{5,6}^1"],
    ),
    ([1, 1, 0, 1], 2, &[4, 5], &["B_{5,6}^1", "B_{5,6}^2"]),
    (
        [1, 1, 1, 0],
        4,
        &[2, 3, 4, 5],
        &["B_{3,4}", "B_{3,5}", "B_{3,6}^2", "B_{4,5}^2", "B_{4,6}", "B_{5,6}^2"],
    ),
    (
        [1, 1, 1, 2],
        4,
        &[2, 3, 4, 5],
        &["B_{3,4}", "B_{3,5}", "B_{3,6}^1", "B_{4,5}^1", "B_{4,6}", "B_{5,6}^2"],
    ),
    ([1, 1, 4, 3], 2, &[4, 5], &["B_{5,6}^1", "B_{5,6}^2"]),
    ([1, 4, 1, 3], 3, &[2, 4, 5], &["B_{3,5}", "B_{3,6}^2", "B_{5,6}^1"]),
    ([4, 1, 1, 3], 3, &[3, 4, 5], &["B_{4,5}^2", "B_{4,6}", "B_{5,6}^1"]),
];

pub fn table1_points() -> Vec<[i64; 4]> {
    TABLE1.iter().map(|r| r.0).collect()
}

/// The embedded expectation rows in [`IncidenceRow`] form.
pub fn expected_table1() -> Vec<IncidenceRow> {
    TABLE1
        .iter()
        .map(|(pt, mult, surfaces, curves)| IncidenceRow {
            point: pt.to_vec(),
            multiplicity: *mult,
            surfaces: surfaces.iter().map(|&i| surface_label(i)).collect(),
            curves: curves.iter().map(|c| c.to_string()).collect(),
        })
        .collect()
}

/// Incidence rows for `points`. The multiplicity is that of the product of
/// `surfaces` at the point; surfaces and curves are listed in catalog order.
pub fn incidence_table(
    surfaces: &[MultiPoly],
    points: &[[i64; 4]],
    curves: &[CurveComponent],
) -> Result<Vec<IncidenceRow>, SingError> {
    points
        .iter()
        .map(|pt| {
            let mut multiplicity = 0;
            let mut on = Vec::new();
            for (i, s) in surfaces.iter().enumerate() {
                let m = s.multiplicity_at_projective(pt)?.unwrap_or(0);
                if m > 0 {
                    on.push(surface_label(i));
                }
                multiplicity += m;
            }
            let through = curves
                .iter()
                .filter(|c| c.contains(pt))
                .map(|c| c.label.clone())
                .collect();
            Ok(IncidenceRow {
                point: pt.to_vec(),
                multiplicity,
                surfaces: on,
                curves: through,
            })
        })
        .collect()
}

/// Incidence table for the sixteen special points of `B`.
pub fn table1() -> Result<Vec<IncidenceRow>, SingError> {
    incidence_table(&branch_components(), &table1_points(), &curve_catalog()?)
}

fn fmt_point(p: &[i64]) -> String {
    let parts: Vec<String> = p.iter().map(i64::to_string).collect();
    format!("({})", parts.join(":"))
}

pub fn table1_markdown(rows: &[IncidenceRow]) -> String {
    let mut out = String::from("| Point | Multiplicity | Surfaces | Curves |\n|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            fmt_point(&r.point),
            r.multiplicity,
            r.surfaces.join(", "),
            r.curves.join(", ")
        );
    }
    out
}

//! The six square-root polynomials, the product octic, the quadratic
//! Cremona involution and the variety models built from them, with exact
//! checks of the polynomial identities relating them.

mod model;

use serde::Serialize;

use crate::expr::{MultiPoly, PolyMap, Ring};

pub use model::{ModelError, ModelKind, VarietyModel};

/// Polynomials f1..f6 as ring literals.
pub const ALPHABET: [&str; 6] = [
    "4*x - z",
    "4*y - z",
    "4*x^2*y - z*(y-t)^2",
    "4*x*y^2 - z*(x-t)^2",
    "(x-y)^2 - 2*(x+y)*t + t^2",
    "(x-y)^2 - 2*(x+y)*(z+t) + (z+t)^2",
];

/// Irreducible components B1..B6 of the branch octic of `X`.
pub const BRANCH_COMPONENTS: [&str; 6] = ["x", "y", "x - z", "y - z", "y*z - (x-t)^2", "x*z - (y-t)^2"];

/// Images of x, y, z, t under the Cremona involution.
pub const SIGMA_IMAGES: [&str; 4] = ["x*z", "y*z", "4*x*y", "t*z"];

#[derive(Clone, Debug)]
pub struct AlphabetFixture {
    pub ring: Ring,
    /// f1..f6, zero-indexed.
    pub polys: [MultiPoly; 6],
    /// f1·f2·f3·f4.
    pub f: MultiPoly,
    pub sigma: PolyMap,
    /// B1..B6, zero-indexed.
    pub branch: [MultiPoly; 6],
}

impl AlphabetFixture {
    /// Product of the branch components, the octic of `X`.
    pub fn branch_octic(&self) -> MultiPoly {
        MultiPoly::product(&self.ring, &self.branch)
    }
}

pub fn ring_xyzt() -> Ring {
    Ring::new(["x", "y", "z", "t"])
}

pub fn build_fixture() -> AlphabetFixture {
    let ring = ring_xyzt();
    let polys = ALPHABET.map(|s| ring.poly(s));
    let branch = BRANCH_COMPONENTS.map(|s| ring.poly(s));
    let f = MultiPoly::product(&ring, &polys[..4]);
    let sigma = PolyMap::new(
        ring.clone(),
        ring.clone(),
        SIGMA_IMAGES.iter().map(|s| ring.poly(s)).collect(),
    )
    .expect("sigma images live in the ring");
    AlphabetFixture {
        ring,
        polys,
        f,
        sigma,
        branch,
    }
}

/// One exact polynomial identity and whether it held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub label: String,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(label: impl Into<String>, holds: bool) -> IdentityCheck {
        IdentityCheck {
            label: label.into(),
            holds,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }
}

pub type SymmetryReport = IdentityReport;
pub type SigmaReport = IdentityReport;

/// The swap x↔y.
pub fn swap_xy(ring: &Ring) -> PolyMap {
    PolyMap::swap(ring, 0, 1)
}

/// The shift t ↦ z + t.
pub fn shift_t(ring: &Ring) -> PolyMap {
    PolyMap::replace(ring, 3, ring.poly("z + t")).expect("same ring")
}

/// Inverse of [`shift_t`]: t ↦ t − z.
pub fn unshift_t(ring: &Ring) -> PolyMap {
    PolyMap::replace(ring, 3, ring.poly("t - z")).expect("same ring")
}

/// Checks how the swap x↔y and the shift t ↦ z+t act on f1..f6.
pub fn verify_symmetries(fx: &AlphabetFixture) -> SymmetryReport {
    let swap = swap_xy(&fx.ring);
    let shift = shift_t(&fx.ring);
    let unshift = unshift_t(&fx.ring);
    let apply = |m: &PolyMap, i: usize| m.apply(&fx.polys[i]).expect("same ring");
    let mut checks = Vec::new();

    for (from, to) in [(0, 1), (1, 0), (2, 3), (3, 2), (4, 4), (5, 5)] {
        checks.push(IdentityCheck::new(
            format!("swap(x,y): f{} -> f{}", from + 1, to + 1),
            apply(&swap, from) == fx.polys[to],
        ));
    }
    for (from, to) in [(4, 5), (0, 0), (1, 1)] {
        checks.push(IdentityCheck::new(
            format!("shift(t->z+t): f{} -> f{}", from + 1, to + 1),
            apply(&shift, from) == fx.polys[to],
        ));
    }
    for i in 0..6 {
        let twice = swap.apply(&apply(&swap, i)).expect("same ring");
        checks.push(IdentityCheck::new(
            format!("swap(x,y) twice fixes f{}", i + 1),
            twice == fx.polys[i],
        ));
    }
    for i in 0..6 {
        let back = unshift.apply(&apply(&shift, i)).expect("same ring");
        checks.push(IdentityCheck::new(
            format!("shift(t->z+t) then t->t-z fixes f{}", i + 1),
            back == fx.polys[i],
        ));
    }
    IdentityReport { checks }
}

/// Exact identities for the Cremona involution: σ∘σ is a scalar multiple of
/// the identity, the factorization of f∘σ, and the rescaling of the cover
/// coordinate relating the pulled-back octic to the branch octic of `X`.
pub fn verify_sigma(fx: &AlphabetFixture) -> SigmaReport {
    let r = &fx.ring;
    let mut checks = Vec::new();

    let square = fx.sigma.then(&fx.sigma).expect("same ring");
    let expected_factor = r.poly("4*x*y*z");
    let factor = square.images()[0].divide_exact(&MultiPoly::var(r, 0)).ok();
    checks.push(IdentityCheck::new(
        "sigma∘sigma common factor is 4*x*y*z",
        factor.as_ref() == Some(&expected_factor),
    ));
    for (i, img) in square.images().iter().enumerate() {
        let scaled = &expected_factor * &MultiPoly::var(r, i);
        checks.push(IdentityCheck::new(
            format!("sigma∘sigma({}) = 4*x*y*z*{}", r.vars()[i], r.vars()[i]),
            *img == scaled,
        ));
    }

    let pullback = fx.sigma.apply(&fx.f).expect("same ring");
    let monomial = r.poly("x^3*y^3*z^4");
    let quartic_factors = MultiPoly::product(
        r,
        &[
            r.poly("x - z"),
            r.poly("y - z"),
            r.poly("x*z - (y-t)^2"),
            r.poly("y*z - (x-t)^2"),
        ],
    );
    let rhs = (&monomial * &quartic_factors).scale(&crate::expr::int_scalar(256));
    checks.push(IdentityCheck::new(
        "f∘sigma = 256*x^3*y^3*z^4*(x-z)*(y-z)*(x*z-(y-t)^2)*(y*z-(x-t)^2)",
        pullback == rhs,
    ));
    let quotient = pullback.divide_exact(&monomial).ok();
    checks.push(IdentityCheck::new(
        "f∘sigma / (x^3*y^3*z^4) = 256*(x-z)*(y-z)*(x*z-(y-t)^2)*(y*z-(x-t)^2)",
        quotient == Some(quartic_factors.scale(&crate::expr::int_scalar(256))),
    ));

    let rescaled = &r.poly("x^2*y^2*z^4") * &fx.branch_octic();
    let pullback_over_256 = pullback.scale(&crate::expr::ExactScalar::new(1.into(), 256.into()));
    checks.push(IdentityCheck::new(
        "x^2*y^2*z^4 * (branch octic of X) = (f∘sigma)/256",
        rescaled == pullback_over_256,
    ));
    IdentityReport { checks }
}

/// Names of the built-in models, in report order.
pub const MODEL_NAMES: [&str; 5] = ["X", "calX", "Q", "S", "fermat"];

pub const Q_QUARTIC: &str = "-x3^2*(x4^2 - x1*x2) + (x1 + x2)*(x1*x4^2 + x2*x4^2 - 4*x1*x2*x4 + x1^2*x2 + x1*x2^2)";
pub const S_BRANCH: &str = "(y1^2 + y2^2 - 2*y3^2)*(y1^2*y2^2 - y3^4)";
pub const FERMAT_QUARTIC: &str = "x^4 + y^4 + z^4 + t^4";

/// The built-in models: `X`, `calX`, `Q`, `S` and the Fermat quartic.
pub fn build_models() -> Vec<VarietyModel> {
    MODEL_NAMES
        .iter()
        .map(|n| builtin_model(n).expect("known builtin"))
        .collect()
}

pub fn builtin_model(name: &str) -> Option<VarietyModel> {
    let model = match name {
        "X" => {
            let fx = build_fixture();
            VarietyModel::double_cover("X", "w", 4, fx.branch_octic(), [2, 3])
        }
        "calX" => {
            let fx = build_fixture();
            VarietyModel::double_cover("calX", "w", 4, fx.f, [2, 3])
        }
        "Q" => {
            let r = Ring::new(["x1", "x2", "x3", "x4"]);
            VarietyModel::hypersurface("Q", r.poly(Q_QUARTIC), [2])
        }
        "S" => {
            let r = Ring::new(["y1", "y2", "y3"]);
            VarietyModel::double_cover("S", "y0", 0, r.poly(S_BRANCH), [2])
        }
        "fermat" => {
            let r = ring_xyzt();
            VarietyModel::hypersurface("fermat", r.poly(FERMAT_QUARTIC), [2])
        }
        _ => return None,
    };
    Some(model.expect("builtin models are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::DegreeInfo;

    #[test]
    fn fixture_matches_literals() {
        let fx = build_fixture();
        assert_eq!(fx.polys[0].to_string(), "4*x - z");
        assert_eq!(fx.branch[4], fx.ring.poly("y*z - x^2 + 2*x*t - t^2"));
        assert_eq!(
            fx.f.degree_info(),
            DegreeInfo {
                degree: Some(8),
                homogeneous: true
            }
        );
        assert_eq!(fx.f.eval_integers(&[1, 1, 1, 1]).unwrap(), crate::expr::int_scalar(144));
        for b in &fx.branch[..4] {
            assert_eq!(b.total_degree(), Some(1));
        }
    }

    #[test]
    fn symmetries_hold() {
        let fx = build_fixture();
        let report = verify_symmetries(&fx);
        assert!(report.all_hold(), "{:?}", report.failures());
        assert_eq!(report.checks.len(), 6 + 3 + 6 + 6);
        let swap = swap_xy(&fx.ring);
        assert_eq!(swap.apply(&fx.polys[2]).unwrap(), fx.polys[3]);
        assert_eq!(swap.apply(&fx.polys[4]).unwrap(), fx.polys[4]);
        assert_eq!(shift_t(&fx.ring).apply(&fx.polys[0]).unwrap(), fx.polys[0]);
    }

    #[test]
    fn shift_is_not_an_involution() {
        let fx = build_fixture();
        let shift = shift_t(&fx.ring);
        let twice = shift.apply(&shift.apply(&fx.polys[4]).unwrap()).unwrap();
        assert_ne!(twice, fx.polys[4]);
    }

    #[test]
    fn sigma_identities_hold() {
        let fx = build_fixture();
        let report = verify_sigma(&fx);
        assert!(report.all_hold(), "{:?}", report.failures());
    }

    #[test]
    fn sigma_pulls_back_f1() {
        let fx = build_fixture();
        let pulled = fx.sigma.apply(&fx.polys[0]).unwrap();
        assert_eq!(pulled, fx.ring.poly("4*x*z - 4*x*y"));
        assert_eq!(pulled, fx.ring.poly("-4*x*(y - z)"));
    }

    #[test]
    fn pullback_quotient_has_constant_256() {
        let fx = build_fixture();
        let pulled = fx.sigma.apply(&fx.f).unwrap();
        let quotient = pulled.divide_exact(&fx.ring.poly("x^3*y^3*z^4")).unwrap();
        // grlex leading term of the quartic product is -x^4*y*z
        let (m, lead) = quotient.leading_term().unwrap();
        assert_eq!(m.exponents(), &[4, 1, 1, 0]);
        assert_eq!(*lead, crate::expr::int_scalar(-256));
        let expected = fx.ring.poly("256*(x-z)*(y-z)*(y*z-(x-t)^2)*(x*z-(y-t)^2)");
        assert_eq!(quotient, expected);
    }

    #[test]
    fn corrupted_fixture_is_reported() {
        let mut fx = build_fixture();
        fx.polys[3] = fx.ring.poly("4*x*y^2 - z*(x+t)^2");
        let report = verify_symmetries(&fx);
        let failed: Vec<_> = report.failures().iter().map(|c| c.label.clone()).collect();
        assert!(failed.contains(&"swap(x,y): f3 -> f4".to_string()));
        assert!(failed.contains(&"swap(x,y): f4 -> f3".to_string()));
    }

    #[test]
    fn models_have_expected_shape() {
        let models = build_models();
        assert_eq!(models.len(), 5);
        let x = &models[0];
        assert_eq!(x.degree(), 8);
        assert_eq!(x.weights(), vec![1, 1, 1, 1, 4]);
        assert_eq!(x.variables(), vec!["x", "y", "z", "t", "w"]);
        assert_eq!(x.bad_primes().iter().copied().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(*x.base_poly(), build_fixture().branch_octic());
        assert_eq!(x.dimension(), 3);

        assert_eq!(*models[1].base_poly(), build_fixture().f);

        let s = &models[3];
        assert_eq!(s.degree(), 6);
        assert_eq!(s.weights(), vec![3, 1, 1, 1]);
        assert_eq!(s.variables(), vec!["y0", "y1", "y2", "y3"]);
        assert_eq!(s.dimension(), 2);
        assert!(s.is_good_prime(3));

        let q = &models[2];
        assert!(!q.is_double_cover());
        assert_eq!(q.degree(), 4);
        assert_eq!(q.dimension(), 2);
    }

    #[test]
    fn model_validation() {
        let r = ring_xyzt();
        assert_eq!(
            VarietyModel::double_cover("bad", "w", 4, r.poly("x^3"), []),
            Err(ModelError::OddBranchDegree(3))
        );
        assert_eq!(
            VarietyModel::hypersurface("bad", r.poly("x^2 + y"), []),
            Err(ModelError::NotHomogeneous)
        );
        assert_eq!(
            VarietyModel::double_cover("bad", "x", 4, r.poly("x^2"), []),
            Err(ModelError::CoverVariableClash("x".into()))
        );
        assert_eq!(
            VarietyModel::hypersurface("bad", MultiPoly::zero(&r), []),
            Err(ModelError::ZeroPolynomial)
        );
    }

    #[test]
    fn models_scale_homogeneously() {
        // eval(λv) = λ^d eval(v) mod ℓ for every built-in model
        for model in build_models() {
            let d = model.degree() as u64;
            let poly = model.base_poly();
            let n = poly.ring().len();
            let v: Vec<i64> = (0..n as i64).map(|i| 3 * i + 2).collect();
            for (l, lambda) in [(11u64, 3i64), (13, 5), (101, 17)] {
                let scaled: Vec<i64> = v.iter().map(|c| c * lambda).collect();
                let base = poly.eval_mod_p(&v, l).unwrap();
                let lam_d = crate::expr::pow_mod(lambda as u64, d, l);
                assert_eq!(
                    poly.eval_mod_p(&scaled, l).unwrap(),
                    base * lam_d % l,
                    "{}",
                    model.name()
                );
            }
        }
    }
}

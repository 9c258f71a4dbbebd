//! Randomized property checks shared by the property suite and the
//! acceptance run. Every oracle here is written independently of the
//! library's counting and series code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::select;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use octic::alphabet::{builtin_model, ring_xyzt, ModelKind, VarietyModel, MODEL_NAMES};
use octic::count::{count_points, odd_primes_up_to, projective_size, Convention, PointCountRecord};
use octic::expr::{parse_poly, ExactScalar, MultiPoly, PolyMap, Ring};
use octic::modular::{
    builtin_form, congruence_match, esnault_guess, euler_product, prime_coeffs, weil_bound_check, QSeries, VerdictKind,
};

pub const CASES: u32 = 1000;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn finish<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (-20i64..=20, 1i64..=5).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn poly(ring: Ring, max_terms: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
    let n = ring.len();
    vec((vec(0..=max_exp, n), scalar()), 0..=max_terms).prop_map(move |t| MultiPoly::from_terms(&ring, t))
}

/// Homogeneous polynomials with integer coefficients in `lo..=hi`.
fn homogeneous(ring: Ring, degree: u32, max_terms: usize, lo: i64, hi: i64) -> impl Strategy<Value = MultiPoly> {
    let n = ring.len();
    vec((vec(0..n, degree as usize), lo..=hi), 1..=max_terms).prop_map(move |terms| {
        let terms = terms.into_iter().map(|(idx, c)| {
            let mut e = vec![0u32; n];
            for i in idx {
                e[i] += 1;
            }
            (e, BigRational::from_integer(c.into()))
        });
        MultiPoly::from_terms(&ring, terms)
    })
}

fn map_images(ring: Ring) -> impl Strategy<Value = Vec<MultiPoly>> {
    vec(poly(ring, 3, 2), 4)
}

/// Ring laws, parse/print round trip, substitution as a homomorphism and
/// evaluation mod p as a homomorphism.
pub fn expr_laws(cases: u32) -> Result<(), String> {
    let r = ring_xyzt();
    let strat = (
        poly(r.clone(), 6, 3),
        poly(r.clone(), 6, 3),
        poly(r.clone(), 4, 2),
        map_images(r.clone()),
        vec(-50i64..=50, 4),
        select(vec![7u64, 11, 13, 101, 65_537]),
    );
    finish(runner(cases).run(&strat, |(p, q, s, images, pt, ell)| {
        let back = parse_poly(&p.to_string(), &r).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(&(&(&p + &q) - &q), &p);
        prop_assert_eq!(&(&p * &(&q + &s)), &(&(&p * &q) + &(&p * &s)));
        prop_assert_eq!(&(&p * &q), &(&q * &p));

        let map = PolyMap::new(r.clone(), r.clone(), images).unwrap();
        let ap = map.apply(&p).unwrap();
        let aq = map.apply(&q).unwrap();
        prop_assert_eq!(map.apply(&(&p * &q)).unwrap(), &ap * &aq);
        prop_assert_eq!(map.apply(&(&p + &q)).unwrap(), &ap + &aq);

        let ev = |f: &MultiPoly| f.eval_mod_p(&pt, ell).unwrap();
        prop_assert_eq!(ev(&(&p * &q)), ev(&p) * ev(&q) % ell);
        prop_assert_eq!(ev(&(&p + &q)), (ev(&p) + ev(&q)) % ell);
        Ok(())
    }))
}

/// Scaling of homogeneous polynomials and additivity of point multiplicity.
pub fn homogeneity_laws(cases: u32) -> Result<(), String> {
    let r = ring_xyzt();
    let f_strat = (1u32..=4).prop_flat_map({
        let r = r.clone();
        move |d| (Just(d), homogeneous(r.clone(), d, 5, -5, 5))
    });
    let g_strat = (1u32..=3).prop_flat_map({
        let r = r.clone();
        move |d| homogeneous(r.clone(), d, 4, -5, 5)
    });
    let strat = (
        f_strat,
        g_strat,
        vec(-2i64..=2, 4),
        (0usize..4, 1usize..4),
        0u32..=2,
        vec(-30i64..=30, 4),
        2i64..=100,
    );
    finish(runner(cases).run(&strat, |((d, f), g, point, (i, off), a, v, lambda)| {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let ell = 65_537u64;
        let scaled: Vec<i64> = v.iter().map(|c| c * lambda).collect();
        let lhs = f.eval_mod_p(&scaled, ell).unwrap() as u128;
        let rhs = f.eval_mod_p(&v, ell).unwrap() as u128 * (lambda as u128).pow(d) % ell as u128;
        prop_assert_eq!(lhs, rhs);

        prop_assume!(point.iter().any(|&c| c != 0));
        // a linear form through the point makes vanishing likely
        let j = (i + off) % 4;
        let xi = MultiPoly::var(&r, i);
        let xj = MultiPoly::var(&r, j);
        let line = &(&xi * &MultiPoly::integer(&r, point[j])) - &(&xj * &MultiPoly::integer(&r, point[i]));
        prop_assume!(!line.is_zero());
        let f = &f * &line.pow(a);
        let m = |h: &MultiPoly| h.multiplicity_at_projective(&point).unwrap().unwrap();
        prop_assert!(m(&f) >= a);
        prop_assert_eq!(m(&(&f * &g)), m(&f) + m(&g));
        Ok(())
    }))
}

fn eval_int_mod(f: &MultiPoly, v: &[u64], p: u64) -> u64 {
    let mut acc: i128 = 0;
    for (mono, c) in f.terms() {
        let c = c.numer().to_i64().expect("small integer coefficient") as i128;
        let mut t = c.rem_euclid(p as i128);
        for (x, &e) in v.iter().zip(mono.exponents()) {
            for _ in 0..e {
                t = t * *x as i128 % p as i128;
            }
        }
        acc = (acc + t) % p as i128;
    }
    acc as u64
}

fn all_vectors(n: usize, p: u64) -> impl Iterator<Item = Vec<u64>> {
    (0..p.pow(n as u32)).map(move |mut k| {
        (0..n)
            .map(|_| {
                let d = k % p;
                k /= p;
                d
            })
            .collect()
    })
}

/// Counts by enumerating every nonzero affine vector (and every cover value
/// for a double cover) and dividing by the size of a scaling orbit.
pub fn orbit_count(model: &VarietyModel, p: u64) -> u64 {
    let (poly, cover) = match model.kind() {
        ModelKind::Hypersurface { poly } => (poly, false),
        ModelKind::DoubleCover { branch, .. } => (branch, true),
    };
    assert_eq!(
        poly.terms().filter(|(_, c)| !c.denom().is_one()).count(),
        0,
        "integral model"
    );
    let n = poly.ring().len();
    let mut sols = 0u64;
    for v in all_vectors(n, p).filter(|v| v.iter().any(|&c| c != 0)) {
        let g = eval_int_mod(poly, &v, p);
        if cover {
            // with the base point nonzero, λ·(w, v) is an orbit of size p − 1
            sols += (0..p).filter(|w| w * w % p == g).count() as u64;
        } else if g == 0 {
            sols += 1;
        }
    }
    assert_eq!(sols % (p - 1), 0);
    sols / (p - 1)
}

fn random_model() -> impl Strategy<Value = (VarietyModel, u64)> {
    let three = Ring::new(["a", "b", "c"]);
    let four = Ring::new(["a", "b", "c", "d"]);
    prop_oneof![
        (1u32..=4, select(vec![3u64, 5, 7])).prop_flat_map(move |(d, p)| {
            (homogeneous(three.clone(), d, 6, -6, 6), Just(p), any::<bool>(), Just(d))
        }),
        (1u32..=2, select(vec![3u64, 5])).prop_flat_map(move |(d, p)| {
            (
                homogeneous(four.clone(), 2 * d, 5, -6, 6),
                Just(p),
                any::<bool>(),
                Just(2 * d),
            )
        }),
    ]
    .prop_filter_map("valid model", |(f, p, cover, d)| {
        let m = if cover && d % 2 == 0 {
            VarietyModel::double_cover("R", "w", 0, f, [2])
        } else {
            VarietyModel::hypersurface("R", f, [2])
        };
        m.ok().map(|m| (m, p))
    })
}

/// The kernel agrees with the orbit oracle on random hypersurfaces and
/// double covers over small fields.
pub fn random_counts_match_oracle(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&random_model(), |(model, p)| {
        let rec = count_points(&model, p).unwrap();
        prop_assert_eq!(rec.count, orbit_count(&model, p));
        if let (Some(sq), Some(ns)) = (rec.squares, rec.nonsquares) {
            let n = model.base_ring().len();
            prop_assert_eq!(rec.zeros + sq + ns, projective_size(n, p));
            prop_assert_eq!(rec.count, rec.zeros + 2 * sq);
        }
        Ok(())
    }))
}

fn builtin_oracle() -> &'static BTreeMap<(String, u64), u64> {
    static CACHE: OnceLock<BTreeMap<(String, u64), u64>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut m = BTreeMap::new();
        for name in MODEL_NAMES {
            let model = builtin_model(name).unwrap();
            for p in [3, 5, 7] {
                m.insert((name.to_string(), p), orbit_count(&model, p));
            }
        }
        m
    })
}

/// `model` with base coordinates permuted and rescaled by units mod `p`.
fn transformed(model: &VarietyModel, perm: &[usize], scale: &[i64]) -> VarietyModel {
    let ring = model.base_ring().clone();
    let images = (0..ring.len())
        .map(|i| &MultiPoly::var(&ring, perm[i]) * &MultiPoly::integer(&ring, scale[i]))
        .collect();
    let map = PolyMap::new(ring.clone(), ring, images).unwrap();
    let bad = model.bad_primes().clone();
    match model.kind() {
        ModelKind::Hypersurface { poly } => VarietyModel::hypersurface(model.name(), map.apply(poly).unwrap(), bad),
        ModelKind::DoubleCover {
            cover_var,
            cover_index,
            branch,
        } => VarietyModel::double_cover(
            model.name(),
            cover_var.clone(),
            *cover_index,
            map.apply(branch).unwrap(),
            bad,
        ),
    }
    .unwrap()
}

/// Every builtin model at p ≤ 7 matches the orbit oracle, also after a
/// random monomial change of coordinates.
pub fn builtin_counts_match_oracle(cases: u32) -> Result<(), String> {
    let oracle = builtin_oracle();
    for ((name, p), &want) in oracle {
        let got = count_points(&builtin_model(name).unwrap(), *p).unwrap().count;
        if got != want {
            return Err(format!("{name} at {p}: kernel {got}, oracle {want}"));
        }
    }
    let strat = (select(MODEL_NAMES.to_vec()), select(vec![3u64, 5, 7])).prop_flat_map(|(name, p)| {
        let n = builtin_model(name).unwrap().base_ring().len();
        let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        let scale = vec(1..p as i64, n);
        (Just(name), Just(p), perm, scale)
    });
    finish(runner(cases).run(&strat, |(name, p, perm, scale)| {
        let model = transformed(&builtin_model(name).unwrap(), &perm, &scale);
        let got = count_points(&model, p).unwrap().count;
        prop_assert_eq!(got, oracle[&(name.to_string(), p)], "{} at {}", name, p);
        Ok(())
    }))
}

/// A smooth quadric surface has (p + 1)² points.
pub fn quadric_counts() -> Result<(), String> {
    let r = Ring::new(["a", "b", "c", "d"]);
    let q = VarietyModel::hypersurface("quadric", r.poly("a*b - c*d"), [2]).unwrap();
    for p in [3u64, 5, 7, 11] {
        let got = count_points(&q, p).unwrap().count;
        if got != (p + 1) * (p + 1) {
            return Err(format!("quadric at {p}: {got}"));
        }
    }
    Ok(())
}

fn series(max_n: usize) -> impl Strategy<Value = QSeries> {
    (0..=max_n).prop_flat_map(|n| vec(-50i64..=50, n + 1).prop_map(|c| QSeries::from_i64(&c)))
}

fn naive_euler(n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n + 1];
    c[0] = 1;
    for k in 1..=n {
        for i in (k..=n).rev() {
            c[i] -= c[i - k];
        }
    }
    c
}

/// Ring laws for truncated series, inverses, and the Euler product.
pub fn series_laws(cases: u32) -> Result<(), String> {
    let strat = (series(30), series(30), series(30), any::<bool>(), 0usize..=50);
    finish(runner(cases).run(&strat, |(a, b, c, neg, n)| {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&QSeries::one(a.truncation())), a.clone());
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));

        let mut unit: Vec<BigInt> = a.coeffs().to_vec();
        unit[0] = if neg { BigInt::from(-1) } else { BigInt::one() };
        let u = QSeries::new(unit);
        let inv = u.inverse().unwrap();
        prop_assert_eq!(inv.mul(&u), QSeries::one(u.truncation()));

        let want = QSeries::from_i64(&naive_euler(n));
        prop_assert_eq!(euler_product(n), want);
        Ok(())
    }))
}

/// Coefficients of η(τ)²η(2τ)²η(3τ)²η(6τ)² from the plain product.
fn naive_level6(n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n + 1];
    c[1] = 1;
    for m in [1usize, 2, 3, 6] {
        for _ in 0..2 {
            for k in 1..=n / m {
                for i in (k * m..=n).rev() {
                    c[i] -= c[i - k * m];
                }
            }
        }
    }
    c
}

/// `|b_p| ≤ 2p^{3/2}` for the weight-4 level-6 form at every p < 100,
/// with `b_p` also matched against the plain product.
pub fn weil_bound(cases: u32) -> Result<(), String> {
    let form = builtin_form("w4-level6").unwrap();
    let primes: Vec<u64> = std::iter::once(2).chain(odd_primes_up_to(100)).collect();
    if !weil_bound_check(&form, 2, 3, &primes)
        .map_err(|e| e.to_string())?
        .is_empty()
    {
        return Err("weil bound violated".into());
    }
    let coeffs = prime_coeffs(&form, &primes).map_err(|e| e.to_string())?;
    let naive = naive_level6(100);
    finish(runner(cases).run(&select(primes), |p| {
        let b = coeffs[&p].to_i64().unwrap();
        prop_assert_eq!(b, naive[p as usize]);
        prop_assert!((b as i128).pow(2) <= 4 * (p as i128).pow(3));
        Ok(())
    }))
}

fn record(p: u64, count: u64, good: bool) -> PointCountRecord {
    PointCountRecord {
        p,
        count,
        zeros: count,
        squares: None,
        nonsquares: None,
        good_reduction: good,
    }
}

/// Adding primes never withdraws a negative guess, and a congruence that
/// holds on a set of primes holds on every subset.
pub fn verdict_monotonicity(cases: u32) -> Result<(), String> {
    let primes = odd_primes_up_to(100);
    let form = builtin_form("w4-level6").unwrap();
    let n = primes.len();
    let strat = (vec(any::<u32>(), n), vec(0u8..3, n), vec(any::<bool>(), n));
    finish(runner(cases).run(&strat, |(raw, member, good)| {
        // member: 0 absent, 1 only in the larger set, 2 in both
        let mut small = Vec::new();
        let mut large = Vec::new();
        for i in 0..n {
            let p = primes[i];
            // bias towards count ≡ 1 mod p so both verdicts occur
            let count = if raw[i] % 3 == 0 {
                p * (raw[i] as u64 % 50) + 1
            } else {
                raw[i] as u64
            };
            let r = record(p, count, good[i]);
            if member[i] >= 1 {
                large.push(r.clone());
            }
            if member[i] == 2 {
                small.push(r);
            }
        }
        let bad: BTreeSet<u64> = primes
            .iter()
            .zip(&good)
            .filter(|(_, g)| !**g)
            .map(|(p, _)| *p)
            .collect();
        let vs = esnault_guess(&small, &bad);
        let vl = esnault_guess(&large, &bad);
        if vs.kind == VerdictKind::NotUnirationalGuess {
            prop_assert_eq!(vl.kind, VerdictKind::NotUnirationalGuess);
        }
        prop_assert!(vs.sigma0.iter().all(|p| vl.sigma0.contains(p)));
        prop_assert!(!vs.threshold_met || vl.threshold_met);

        if let (Ok(cs), Ok(cl)) = (
            congruence_match(&small, &form, Convention::Weight4),
            congruence_match(&large, &form, Convention::Weight4),
        ) {
            if cl.kind == VerdictKind::CongruencePass {
                prop_assert_eq!(cs.kind, VerdictKind::CongruencePass);
            }
        }
        Ok(())
    }))
}

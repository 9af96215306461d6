//! Property suites for exact arithmetic, Zariski decomposition and δ assembly.

use proptest::prelude::*;

use lfdelta::catalog::{self, BuiltCase};
use lfdelta::cli::verify;
use lfdelta::delta::{evaluate_built, Engine, ExpectedKind};
use lfdelta::exact::{
    fit_rational_function, format_rational, int, integrate, is_canonical, midpoint_quadrature, parse_rational, rat,
    roots_in_interval, to_f64, Poly, Rational, RationalFunction,
};
use lfdelta::surface::{pair, DivisorExpr};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rat(), 1..=max_deg + 1).prop_map(Poly::new)
}

/// `a < c < b` with small denominators.
fn ordered_triple() -> impl Strategy<Value = (Rational, Rational, Rational)> {
    (small_rat(), 1i64..=30, 1i64..=30, 1i64..=9).prop_map(|(a, x, y, d)| {
        let c = &a + rat(x, d);
        let b = &c + rat(y, d);
        (a, c, b)
    })
}

fn targets() -> Vec<BuiltCase> {
    let c = catalog::shipped();
    verify::targets(c).into_iter().map(|(id, d)| c.build_case(&id, d).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integration_is_additive(p in poly(4), (a, c, b) in ordered_triple()) {
        prop_assert_eq!(integrate(&p, &a, &b), integrate(&p, &a, &c) + integrate(&p, &c, &b));
    }

    #[test]
    fn integration_matches_quadrature(p in poly(4), (a, _c, b) in ordered_triple()) {
        let exact = integrate(&p, &a, &b);
        let approx = midpoint_quadrature(|x| p.eval_f64(x), to_f64(&a), to_f64(&b), 1_000_000);
        // Relative to the L1 scale so cancelling integrals are not penalized.
        let scale = midpoint_quadrature(|x| p.eval_f64(x).abs(), to_f64(&a), to_f64(&b), 1_000).max(1e-12);
        prop_assert!((to_f64(&exact) - approx).abs() / scale <= 1e-6);
    }

    #[test]
    fn results_stay_canonical(p in poly(3), (a, _c, b) in ordered_triple(), x in small_rat()) {
        prop_assert!(is_canonical(&integrate(&p, &a, &b)));
        prop_assert!(is_canonical(&p.eval(&x)));
        prop_assert!(p.derivative().coeffs().iter().all(is_canonical));
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn rational_roots_are_found(r1 in small_rat(), r2 in small_rat()) {
        let p = &Poly::linear_factor(&r1) * &Poly::linear_factor(&r2);
        let roots = roots_in_interval(&p, &int(-50), &int(50)).unwrap();
        prop_assert!(roots.contains(&r1) && roots.contains(&r2));
        prop_assert!(roots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fit_recovers_generating_function(
        num in prop::collection::vec(-9i64..=9, 3),
        den in prop::collection::vec(-9i64..=9, 2),
    ) {
        let den = Poly::from_ints(&[den[0].abs() + 10, den[1]]);
        let f = RationalFunction::new(Poly::from_ints(&num), den);
        let xs: Vec<Rational> = (0..9).map(|k| rat(k, 13)).collect();
        let samples: Vec<(Rational, Rational)> = xs[..6].iter().map(|x| (x.clone(), f.eval(x).unwrap())).collect();
        let g = fit_rational_function(&samples, 2, 2).unwrap();
        prop_assert_eq!(&g, &f);
        for x in &xs[6..] {
            prop_assert_eq!(g.eval(x), f.eval(x));
        }
    }
}

/// Exact determinant by cofactor expansion.
fn det(m: &[Vec<Rational>]) -> Rational {
    if m.is_empty() {
        return int(1);
    }
    let mut total = int(0);
    for j in 0..m.len() {
        let minor: Vec<Vec<Rational>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * det(&minor);
        total = if j % 2 == 0 { total + term } else { total - term };
    }
    total
}

/// Cramer's rule.
fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let d = det(a);
    if d == int(0) {
        return None;
    }
    Some(
        (0..b.len())
            .map(|j| {
                let m: Vec<Vec<Rational>> = a
                    .iter()
                    .zip(b)
                    .map(|(row, bi)| row.iter().enumerate().map(|(k, x)| if k == j { bi.clone() } else { x.clone() }).collect())
                    .collect();
                det(&m) / &d
            })
            .collect(),
    )
}

/// Volume of `D` at a fixed `v` by trying every candidate support: the
/// Zariski support is the subset with negative definite Gram, positive
/// coefficients and a positive part that is nef on the other curves.
fn brute_force_volume(b: &BuiltCase, lambda: &Rational, v: &Rational) -> Option<Rational> {
    let model = &b.model;
    let n = model.len();
    let d = b.divisor(lambda).at(v);
    let curve = |i: usize| DivisorExpr::curve(n, i);
    let dot = |x: &DivisorExpr, y: &DivisorExpr| pair(model, x, y).unwrap().coeff(0);
    let gram: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| dot(&curve(i), &curve(j))).collect()).collect();
    let mut found = Vec::new();
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let neg_def = (1..=s.len()).all(|k| {
            let minor: Vec<Vec<Rational>> = s[..k].iter().map(|&i| s[..k].iter().map(|&j| -gram[i][j].clone()).collect()).collect();
            det(&minor) > int(0)
        });
        if !neg_def {
            continue;
        }
        let a: Vec<Vec<Rational>> = s.iter().map(|&i| s.iter().map(|&j| gram[i][j].clone()).collect()).collect();
        let rhs: Vec<Rational> = s.iter().map(|&i| dot(&d, &curve(i))).collect();
        let Some(x) = solve(&a, &rhs) else { continue };
        if x.iter().any(|c| c <= &int(0)) {
            continue;
        }
        let mut p = d.clone();
        for (k, &i) in s.iter().enumerate() {
            p.coeffs[i] = lfdelta::exact::Affine::constant(&p.coeffs[i].constant - &x[k]);
        }
        if (0..n).any(|i| !s.contains(&i) && dot(&p, &curve(i)) < int(0)) {
            continue;
        }
        found.push(dot(&p, &p));
    }
    // The Zariski decomposition is unique.
    (found.len() == 1).then(|| found.remove(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn volume_matches_brute_force(pick in 0usize..1000, k in 1u32..20, t in 0u32..=16) {
        let all = targets();
        let b = &all[pick % all.len()];
        let lambda = b.validity().sample(k, 20);
        let ev = evaluate_built(b.clone(), &lambda).unwrap();
        let v = ev.tau() * rat(t as i64, 16);
        let oracle = brute_force_volume(b, &lambda, &v);
        prop_assert_eq!(ev.volume.eval(&v), oracle, "{} d={} λ={} v={}", b.id(), b.degree, lambda, v);
    }

    #[test]
    fn delta_sandwich(pick in 0usize..1000, k in 1u32..1000) {
        let all = targets();
        let b = &all[pick % all.len()];
        let lambda = b.validity().sample(k, 1000);
        let engine = Engine::default();
        for r in engine.delta_point_all(b.id(), b.degree, &lambda).unwrap() {
            prop_assert!(r.lower <= r.upper);
            prop_assert!(r.a_e > int(0) && r.s_e > int(0));
            prop_assert_eq!(r.expected_kind, ExpectedKind::Exact);
            prop_assert!(r.exact, "{} λ={}", b.id(), lambda);
            prop_assert_eq!(&r.lower, &r.upper);
            prop_assert_eq!(Some(&r.value), r.expected.as_ref());
            prop_assert!(r.minimizers.contains(&b.spec.minimizer));
        }
    }
}

#[test]
fn sandwich_holds_outside_validity() {
    let engine = Engine::default();
    for b in targets() {
        let cap = rat(3, b.degree as i64);
        for k in 1..10 {
            let lambda = &cap * rat(k, 10);
            for r in engine.delta_point_all(b.id(), b.degree, &lambda).unwrap() {
                assert!(r.lower <= r.upper, "{} d={} λ={}", b.id(), b.degree, lambda);
            }
        }
    }
}

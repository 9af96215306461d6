//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::Instant;

use rayon::prelude::*;

use lfdelta::catalog::{self, BuiltCase, Catalog};
use lfdelta::cli::{corollary, verify};
use lfdelta::delta::{evaluate_built, Engine};
use lfdelta::exact::{format_rational, int, midpoint_quadrature, rat, to_f64, Affine, Poly, Rational, RationalFunction};
use lfdelta::surface::{pair, volume_function, DivisorExpr};
use lfdelta::threefold::{self, Kind};

type Outcome = Result<String, Vec<String>>;

/// Every `(id, degree)` the catalog can build: base cases at each degree, then aliases.
fn all_targets(catalog: &Catalog) -> Vec<BuiltCase> {
    verify::targets(catalog).into_iter().map(|(id, d)| catalog.build_case(&id, d).unwrap()).collect()
}

fn finish(failures: Vec<String>, ok: String) -> Outcome {
    if failures.is_empty() {
        Ok(ok)
    } else {
        Err(failures)
    }
}

fn criterion_1(catalog: &Catalog) -> Outcome {
    let start = Instant::now();
    let engine = Engine::new(catalog);
    let targets = all_targets(catalog);
    let mut failures = Vec::new();
    let mut evaluations = 0;
    for b in &targets {
        let f = b.spec.expected_function(b.degree);
        for k in 1..=6 {
            let l = b.validity().sample(k, 7);
            let expected = f.eval(&l).unwrap();
            for r in engine.delta_point_all(b.id(), b.degree, &l).unwrap() {
                evaluations += 1;
                if !r.exact || r.value != expected {
                    failures.push(format!(
                        "{} d={} λ={}: got {} (exact={}), expected {}",
                        b.id(),
                        b.degree,
                        format_rational(&l),
                        format_rational(&r.value),
                        r.exact,
                        format_rational(&expected)
                    ));
                }
            }
        }
    }
    let ids: std::collections::BTreeSet<&str> = targets.iter().map(|b| b.id()).collect();
    if ids.len() < 30 {
        failures.push(format!("only {} catalog entries", ids.len()));
    }
    finish(
        failures,
        format!("{} entries, {evaluations} exact evaluations in {:.2?}", ids.len(), start.elapsed()),
    )
}

fn closed(num: &[(i64, i64)], den: &[(i64, i64)]) -> RationalFunction {
    let p = |cs: &[(i64, i64)]| Poly::new(cs.iter().map(|&(n, d)| rat(n, d)).collect());
    RationalFunction::new(p(num), p(den))
}

fn criterion_2(catalog: &Catalog) -> Outcome {
    let engine = Engine::new(catalog);
    let targets = all_targets(catalog);
    let mut failures: Vec<String> = targets
        .par_iter()
        .filter_map(|b| match engine.delta_closed_form(b.id(), b.degree) {
            Ok(f) if f == b.spec.expected_function(b.degree) => None,
            Ok(f) => Some(format!("{} d={}: {}", b.id(), b.degree, f.display("λ"))),
            Err(e) => Some(format!("{} d={}: {e}", b.id(), b.degree)),
        })
        .collect();
    // Hand-entered formulas, independent of the catalog's stored numerators.
    let spot = [
        ("A2", closed(&[(15, 1), (-18, 1)], &[(15, 1), (-20, 1)])),
        ("E6", closed(&[(21, 1), (-36, 1)], &[(21, 1), (-28, 1)])),
        ("quadruple_line", closed(&[(3, 1), (-12, 1)], &[(3, 1), (-4, 1)])),
    ];
    for (id, want) in spot {
        match engine.delta_closed_form(id, 4) {
            Ok(f) if f == want => {}
            Ok(f) => failures.push(format!("{id} d=4: {} ≠ {}", f.display("λ"), want.display("λ"))),
            Err(e) => failures.push(format!("{id}: {e}")),
        }
    }
    finish(failures, format!("{} closed forms reconstructed", targets.len()))
}

fn criterion_3(catalog: &Catalog) -> Outcome {
    let engine = Engine::new(catalog);
    let mut failures = Vec::new();
    for id in ["A4", "A5", "A6", "A7"] {
        for l in [rat(1, 8), rat(1, 4), rat(5, 16)] {
            let a = int(3) - int(4) * &l;
            let want = int(3) / (int(2) * a);
            for r in engine.delta_point_all(id, 4, &l).unwrap() {
                if r.exact || r.lower != want {
                    failures.push(format!(
                        "{id} λ={}: exact={} lower={} (want {})",
                        format_rational(&l),
                        r.exact,
                        format_rational(&r.lower),
                        format_rational(&want)
                    ));
                }
            }
        }
    }
    finish(failures, "A₄, A₅, A₆, A₇ at λ = 1/8, 1/4, 5/16".into())
}

fn criterion_4(catalog: &Catalog) -> Outcome {
    let engine = Engine::new(catalog);
    let table = [("A1", rat(2, 3)), ("A2", rat(5, 3)), ("A4", rat(13, 6)), ("A6", rat(5, 2)), ("E6", rat(7, 3))];
    let mut failures = Vec::new();
    for (id, factor) in &table {
        let b = catalog.build_case(id, 4).unwrap();
        for k in 1..=3 {
            let l = b.validity().sample(k, 4);
            let s = engine.s_divisor(id, 4, &l).unwrap();
            let want = factor * (int(3) - int(4) * &l);
            if s != want {
                failures.push(format!("{id} λ={}: S = {}, want {}", format_rational(&l), format_rational(&s), format_rational(&want)));
            }
        }
    }
    finish(failures, format!("{} cases × 3 λ", table.len()))
}

fn criterion_5(catalog: &Catalog) -> Outcome {
    let engine = Engine::new(catalog);
    let mut failures = Vec::new();
    let mut n = 0;
    for b in all_targets(catalog) {
        if !b.validity().contains(&int(0)) {
            continue;
        }
        n += 1;
        for r in engine.delta_point_all(b.id(), b.degree, &int(0)).unwrap() {
            if r.value != int(1) || !r.exact {
                failures.push(format!("{} d={}: δ(0) = {}", b.id(), b.degree, format_rational(&r.value)));
            }
        }
    }
    finish(failures, format!("{n} entries give δ = 1 at λ = 0"))
}

/// Decomposition properties checked directly from `P(v)` and `N(v)`.
fn zariski_failures(b: &BuiltCase, l: &Rational) -> Vec<String> {
    let tag = format!("{} d={} λ={}", b.id(), b.degree, format_rational(l));
    let ev = match evaluate_built(b.clone(), l) {
        Ok(ev) => ev,
        Err(e) => return vec![format!("{tag}: {e}")],
    };
    let z = &ev.decomposition;
    let n = z.model.len();
    let mut out = Vec::new();
    let tau_declared = &b.spec.tau * &ev.anticanonical;
    if z.end() != &tau_declared {
        out.push(format!("{tag}: τ = {}, declared {}", format_rational(z.end()), format_rational(&tau_declared)));
    }
    let vol = volume_function(z);
    if !vol.is_continuous() {
        out.push(format!("{tag}: volume discontinuous"));
    }
    if vol.eval(z.end()) != Some(int(0)) {
        out.push(format!("{tag}: volume non-zero at τ"));
    }
    let mut grid: Vec<Rational> = Vec::new();
    for p in &z.pieces {
        for k in 0..4 {
            grid.push(&p.start + (&p.end - &p.start) * rat(k, 4));
        }
    }
    grid.push(z.end().clone());
    let mut previous: Option<Rational> = None;
    for v in &grid {
        let (pos, neg) = z.at(v).unwrap();
        let support: Vec<usize> = (0..n).filter(|&i| neg.coeffs[i].eval(v) != int(0)).collect();
        for i in 0..n {
            let c = neg.coeffs[i].eval(v);
            if c < int(0) {
                out.push(format!("{tag} v={}: N coefficient {} < 0", format_rational(v), format_rational(&c)));
            }
            let pc = pair(&z.model, &pos, &DivisorExpr::curve(n, i)).unwrap().eval(v);
            if pc < int(0) {
                out.push(format!("{tag} v={}: P·C{i} < 0", format_rational(v)));
            }
            if support.contains(&i) && pc != int(0) {
                out.push(format!("{tag} v={}: P·C{i} = {} on supp N", format_rational(v), format_rational(&pc)));
            }
        }
        if !support.is_empty() && !z.model.is_negative_definite(&support) {
            out.push(format!("{tag} v={}: support Gram not negative definite", format_rational(v)));
        }
        let vv = vol.eval(v).unwrap();
        if previous.as_ref().is_some_and(|p| &vv > p) {
            out.push(format!("{tag} v={}: volume increases", format_rational(v)));
        }
        previous = Some(vv);
    }
    out
}

fn criterion_6(catalog: &Catalog) -> Outcome {
    let targets = all_targets(catalog);
    let failures: Vec<String> = targets
        .par_iter()
        .flat_map(|b| (1..=5).flat_map(|k| zariski_failures(b, &b.validity().sample(k, 6))).collect::<Vec<_>>())
        .collect();
    finish(failures, format!("{} entries × 5 λ", targets.len()))
}

const PANELS: usize = 1_000_000;

fn relative_error(exact: &Rational, approx: f64) -> f64 {
    let e = to_f64(exact);
    ((e - approx) / e).abs()
}

fn criterion_7(catalog: &Catalog) -> Outcome {
    let targets = all_targets(catalog);
    let mut jobs: Vec<(BuiltCase, Rational)> = Vec::new();
    for b in &targets {
        for k in 1..=3 {
            jobs.push((b.clone(), b.validity().sample(k, 4)));
        }
    }
    let results: Vec<(f64, Vec<String>)> = jobs
        .par_iter()
        .map(|(b, l)| {
            let ev = evaluate_built(b.clone(), l).unwrap();
            let a2 = to_f64(&(&ev.anticanonical * &ev.anticanonical));
            let tau = to_f64(ev.tau());
            let tag = format!("{} d={} λ={}", b.id(), b.degree, format_rational(l));
            let mut worst: f64 = 0.0;
            let mut failures = Vec::new();
            let mut check = |name: &str, exact: &Rational, approx: f64| {
                let err = relative_error(exact, approx);
                worst = worst.max(err);
                if err > 1e-6 {
                    failures.push(format!("{tag}: {name} exact {} vs quadrature {approx:e}", format_rational(exact)));
                }
            };
            let vol = ev.volume.float_evaluator();
            check("S(Ē)", &ev.s_e, midpoint_quadrature(&vol, 0.0, tau, PANELS) / a2);
            let h = ev.h_generic.float_evaluator();
            check("S(W;O) generic", &ev.s_generic, 2.0 * midpoint_quadrature(&h, 0.0, tau, PANELS) / a2);
            if b.spec.has_companion() {
                let h = ev.h_on_l.float_evaluator();
                check("S(W;O) on L", &ev.s_on_l, 2.0 * midpoint_quadrature(&h, 0.0, tau, PANELS) / a2);
            }
            (worst, failures)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let failures: Vec<String> = results.into_iter().flat_map(|r| r.1).collect();
    finish(failures, format!("{} evaluations, worst relative error {worst:.1e}", jobs.len()))
}

fn criterion_8(catalog: &Catalog) -> Outcome {
    let engine = Engine::new(catalog);
    let mut failures = Vec::new();
    for k in 0..5 {
        for s in 3..=6u32 {
            let l = rat(4 * k, 6 * s as i64);
            for kind in [Kind::Smooth, Kind::Blowup] {
                if threefold::verify_threefold_volumes(kind, s, &l) != Ok(true) {
                    failures.push(format!("{} s={s} λ={}: volumes", kind.name(), format_rational(&l)));
                }
            }
        }
        if threefold::verify_threefold_volumes(Kind::Quadric, 0, &rat(k, 6)) != Ok(true) {
            failures.push(format!("quadric λ={}/6: volumes", k));
        }
    }
    let all = corollary::corollaries();
    let mut flagged = false;
    for c in &all {
        match c.evaluate(&engine) {
            Ok(r) => {
                if !r.at_least_one() {
                    failures.push(format!("{}: bound {} < 1", c.name, format_rational(&r.bound)));
                }
                let expect = match (c.name, c.lambda == rat(1, 2)) {
                    ("quartic surface, A1", true) => Some(rat(4, 3)),
                    ("quadric threefold, node of S", false) => Some(int(1) + rat(9 - 8, 27 - 8)),
                    _ => None,
                };
                if let Some(e) = expect {
                    if r.bound != e {
                        failures.push(format!("{}: {} ≠ {}", c.name, format_rational(&r.bound), format_rational(&e)));
                    }
                }
                if c.kind == Kind::Blowup && c.s == 4 && c.m == 3 {
                    flagged = r.bound == int(1) && !r.strict();
                }
            }
            Err(e) => failures.push(format!("{}: {e}", c.name)),
        }
    }
    if !flagged {
        failures.push("s=4, m=3 bound not flagged as equality at 1".into());
    }
    finish(failures, format!("volumes for 3 kinds × 5 λ; {} corollaries ≥ 1, s=4/m=3 flagged", all.len()))
}

/// One catalog mutation: a description and the edited copy.
struct Mutation {
    case: String,
    what: String,
    catalog: Catalog,
}

fn mutations(base: &Catalog) -> Vec<Mutation> {
    let deltas = [rat(1, 7), rat(-1, 3)];
    let mut out = Vec::new();
    for (ci, case) in base.cases.iter().enumerate() {
        let mut push = |what: String, edit: &dyn Fn(&mut catalog::CaseSpec)| {
            let mut catalog = base.clone();
            edit(&mut catalog.cases[ci]);
            out.push(Mutation { case: case.id.clone(), what, catalog });
        };
        for dv in &deltas {
            let q = format_rational(dv);
            let n = case.gram.len();
            for i in 0..n {
                for j in 0..n {
                    push(format!("gram[{i}][{j}] += {q}"), &|c| c.gram[i][j] += dv);
                    if i < j {
                        push(format!("gram[{i}][{j}] and gram[{j}][{i}] += {q}"), &|c| {
                            c.gram[i][j] += dv;
                            c.gram[j][i] += dv;
                        });
                    }
                }
            }
            push(format!("k_e += {q}"), &|c| c.k_e += dv);
            push(format!("m_c += {q}"), &|c| c.m_c += dv);
            if case.m_l.is_some() {
                push(format!("m_l += {q}"), &|c| *c.m_l.as_mut().unwrap() += dv);
            }
            for (oi, option) in case.differents.iter().enumerate() {
                push(format!("[{}] l_in_c += {q}", option.name), &|c| c.differents[oi].l_in_c += dv);
                for (pi, p) in option.points.iter().enumerate() {
                    push(format!("[{}] {} constant += {q}", option.name, p.label), &|c| {
                        let x = &mut c.differents[oi].points[pi].coefficient;
                        *x = Affine::new(&x.constant + dv, x.slope.clone());
                    });
                    push(format!("[{}] {} slope += {q}", option.name, p.label), &|c| {
                        let x = &mut c.differents[oi].points[pi].coefficient;
                        *x = Affine::new(x.constant.clone(), &x.slope + dv);
                    });
                }
            }
        }
    }
    out
}

/// Whether `verify --all` on the mutated catalog reports a failure. The
/// catalog invariants are part of that run; when they pass, the entries that
/// depend on the mutated case (the case and its aliases) are re-verified.
fn detected(m: &Mutation) -> bool {
    if !verify::verify_catalog_data(&m.catalog, None).is_empty() {
        return true;
    }
    let targets: Vec<(String, u32)> = verify::targets(&m.catalog)
        .into_iter()
        .filter(|(id, _)| id == &m.case || m.catalog.alias(id).is_some_and(|a| a.base == m.case))
        .collect();
    verify::verify_targets(&m.catalog, &targets).iter().any(|c| !c.passed())
}

fn criterion_9(catalog: &Catalog) -> Outcome {
    let all = mutations(catalog);
    let missed: Vec<String> =
        all.par_iter().filter(|m| !detected(m)).map(|m| format!("{}: {} not detected", m.case, m.what)).collect();
    // A few mutations run through the complete `verify --all` path as well.
    let mut failures = missed;
    for m in all.iter().step_by(all.len() / 4 + 1) {
        if verify::verify_all(&m.catalog).passed() {
            failures.push(format!("{}: {} passes verify_all", m.case, m.what));
        }
    }
    finish(failures, format!("{} single-number mutations all detected", all.len()))
}

fn main() {
    let catalog = catalog::shipped();
    let criteria: [(&str, fn(&Catalog) -> Outcome); 9] = [
        ("closed-form values", criterion_1),
        ("closed-form reconstruction", criterion_2),
        ("lower-bound regimes", criterion_3),
        ("S-invariant spot table", criterion_4),
        ("λ = 0 normalization", criterion_5),
        ("Zariski properties", criterion_6),
        ("quadrature oracle", criterion_7),
        ("threefold suite", criterion_8),
        ("fault injection", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f(catalog) {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(problems) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({} problems)", i + 1, problems.len());
                for p in problems.iter().take(20) {
                    println!("    {p}");
                }
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

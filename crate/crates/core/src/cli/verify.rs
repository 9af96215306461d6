//! Full verification of a catalog against its expected closed forms.

use rayon::prelude::*;

use crate::catalog::{BuiltCase, Catalog};
use crate::delta::{self, Engine};
use crate::exact::{format_rational, int, rat, Rational};
use crate::surface;
use crate::threefold::{self, Kind};

use super::corollary;

/// Result of one verification row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub subject: String,
    pub degree: Option<u32>,
    pub closed_form: Option<String>,
    pub failures: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Interior sample points `lo + (hi − lo)·k/7`, `k = 1..6`.
pub fn interior_samples(built: &BuiltCase) -> Vec<Rational> {
    let v = built.validity();
    (1..=6).map(|k| v.sample(k, 7)).collect()
}

/// Checks one `(case, degree)` pair: exact agreement with the expected
/// closed form, declared τ and S, decomposition audit, minimizer, λ = 0
/// normalization, lower-bound regime and closed-form reconstruction.
pub fn verify_case(engine: &Engine, id: &str, d: u32) -> Check {
    let mut failures = Vec::new();
    let mut closed_form = None;
    let fail = |failures: &mut Vec<String>, msg: String| failures.push(msg);
    let built = match engine.catalog().build_case(id, d) {
        Ok(b) => b,
        Err(e) => {
            return Check { subject: id.into(), degree: Some(d), closed_form: None, failures: vec![e.to_string()] };
        }
    };
    let spec = &built.spec;

    let mut lambdas = interior_samples(&built);
    if built.validity().contains(&int(0)) {
        lambdas.push(int(0));
    }
    for lambda in &lambdas {
        let l = format_rational(lambda);
        let ev = match delta::evaluate_built(built.clone(), lambda) {
            Ok(ev) => ev,
            Err(e) => {
                fail(&mut failures, format!("λ={l}: {e}"));
                continue;
            }
        };
        let a = &ev.anticanonical;
        if ev.tau() != &(&spec.tau * a) {
            fail(
                &mut failures,
                format!("λ={l}: τ = {}, declared {}", format_rational(ev.tau()), format_rational(&(&spec.tau * a))),
            );
        }
        if ev.s_e != &spec.s_factor * a {
            fail(
                &mut failures,
                format!("λ={l}: S(Ē) = {}, declared {}", format_rational(&ev.s_e), format_rational(&(&spec.s_factor * a))),
            );
        }
        for problem in surface::audit(&ev.decomposition, 4) {
            fail(&mut failures, format!("λ={l}: {problem}"));
        }
        match engine.delta_point_all(id, d, lambda) {
            Ok(reports) => {
                for r in reports {
                    if r.matches != Some(true) {
                        fail(
                            &mut failures,
                            format!(
                                "λ={l} [{}]: δ = {} ({}), expected {}",
                                r.option,
                                format_rational(&r.value),
                                if r.exact { "exact" } else { "not exact" },
                                r.expected.as_ref().map_or("-".into(), format_rational)
                            ),
                        );
                    }
                    if !r.minimizers.contains(&spec.minimizer) {
                        fail(
                            &mut failures,
                            format!("λ={l} [{}]: minimizers {:?} miss {}", r.option, r.minimizers, spec.minimizer),
                        );
                    }
                    if lambda == &int(0) && r.value != int(1) {
                        fail(&mut failures, format!("λ=0 [{}]: δ = {}", r.option, format_rational(&r.value)));
                    }
                }
            }
            Err(e) => fail(&mut failures, format!("λ={l}: {e}")),
        }
    }

    if let Some(b) = &spec.expected_lower_bound {
        for k in 1..=3 {
            let lambda = &b.lo + (&b.hi - &b.lo) * rat(k, 4);
            let l = format_rational(&lambda);
            match engine.delta_point_all(id, d, &lambda) {
                Ok(reports) => {
                    for r in reports {
                        let target = &b.numerator / built.anticanonical(&lambda);
                        if r.exact || r.lower != target {
                            fail(
                                &mut failures,
                                format!(
                                    "λ={l}: lower bound {} (exact={}), expected ≥ {}",
                                    format_rational(&r.lower),
                                    r.exact,
                                    format_rational(&target)
                                ),
                            );
                        }
                    }
                }
                Err(e) => fail(&mut failures, format!("λ={l}: {e}")),
            }
        }
    }

    match engine.delta_closed_form(id, d) {
        Ok(f) => {
            let expected = spec.expected_function(d);
            if f != expected {
                fail(
                    &mut failures,
                    format!("closed form {} differs from {}", f.display("λ"), expected.display("λ")),
                );
            }
            closed_form = Some(f.display("λ"));
        }
        Err(e) => fail(&mut failures, format!("closed form: {e}")),
    }
    Check { subject: id.into(), degree: Some(d), closed_form, failures }
}

/// Integrated threefold volumes against their closed forms at five λ each.
pub fn verify_threefold() -> Check {
    let mut failures = Vec::new();
    for k in 0..5 {
        let lambda = rat(k, 6);
        for s in 3..=6u32 {
            for kind in [Kind::Smooth, Kind::Blowup] {
                let l = &lambda * rat(4, s as i64);
                match threefold::verify_threefold_volumes(kind, s, &l) {
                    Ok(true) => {}
                    Ok(false) => failures.push(format!("{} s={s} λ={}: volume mismatch", kind.name(), format_rational(&l))),
                    Err(e) => failures.push(e.to_string()),
                }
            }
        }
        match threefold::verify_threefold_volumes(Kind::Quadric, 0, &lambda) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("quadric λ={}: volume mismatch", format_rational(&lambda))),
            Err(e) => failures.push(e.to_string()),
        }
    }
    Check { subject: "threefold volumes".into(), degree: None, closed_form: None, failures }
}

/// Every corollary configuration must give a bound of at least 1.
pub fn verify_corollaries(engine: &Engine) -> Check {
    let mut failures = Vec::new();
    for c in corollary::corollaries() {
        match c.evaluate(engine) {
            Ok(r) if r.at_least_one() => {}
            Ok(r) => failures.push(format!("{} λ={}: bound {}", c.name, format_rational(&c.lambda), format_rational(&r.bound))),
            Err(e) => failures.push(format!("{}: {e}", c.name)),
        }
    }
    Check { subject: "threefold corollaries".into(), degree: None, closed_form: None, failures }
}

/// Catalog-level invariants as one row per offending entry.
pub fn verify_catalog_data(catalog: &Catalog, only: Option<&str>) -> Vec<Check> {
    let mut rows: Vec<Check> = Vec::new();
    for v in catalog.validate() {
        if only.is_some_and(|id| id != v.case) {
            continue;
        }
        match rows.iter_mut().find(|r| r.subject == v.case) {
            Some(r) => r.failures.push(v.message),
            None => rows.push(Check {
                subject: v.case.clone(),
                degree: None,
                closed_form: None,
                failures: vec![format!("catalog: {}", v.message)],
            }),
        }
    }
    rows
}

/// All `(id, degree)` pairs: base cases at each degree, then aliases.
pub fn targets(catalog: &Catalog) -> Vec<(String, u32)> {
    let mut out: Vec<(String, u32)> = Vec::new();
    for c in &catalog.cases {
        out.extend(c.degrees.iter().map(|&d| (c.id.clone(), d)));
    }
    out.extend(catalog.aliases.iter().map(|a| (a.id.clone(), a.degree)));
    out
}

/// Verifies the listed targets in parallel; rows come back in input order.
pub fn verify_targets(catalog: &Catalog, targets: &[(String, u32)]) -> Vec<Check> {
    let engine = Engine::new(catalog);
    targets.par_iter().map(|(id, d)| verify_case(&engine, id, *d)).collect()
}

/// `verify --all`: catalog invariants, every case, threefold volumes and corollaries.
pub fn verify_all(catalog: &Catalog) -> VerifyReport {
    let mut checks = verify_catalog_data(catalog, None);
    checks.extend(verify_targets(catalog, &targets(catalog)));
    checks.push(verify_threefold());
    checks.push(verify_corollaries(&Engine::new(catalog)));
    VerifyReport { checks }
}

/// `verify --case ID`: catalog invariants of the entry and all its degrees.
pub fn verify_one(catalog: &Catalog, id: &str) -> Option<VerifyReport> {
    let degrees: Vec<u32> = match (catalog.case(id), catalog.alias(id)) {
        (Some(c), _) => c.degrees.iter().copied().collect(),
        (None, Some(a)) => vec![a.degree],
        (None, None) => return None,
    };
    let base = catalog.alias(id).map_or(id.to_string(), |a| a.base.clone());
    let mut checks = verify_catalog_data(catalog, Some(&base));
    let t: Vec<(String, u32)> = degrees.into_iter().map(|d| (id.to_string(), d)).collect();
    checks.extend(verify_targets(catalog, &t));
    Some(VerifyReport { checks })
}

//! δ_P assembly: S- and A-invariants of Ē, flag invariants of points on Ē,
//! upper bounds from curves in the plane, and closed-form reconstruction.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{self, BuiltCase, Catalog, CatalogError, Location};
use crate::exact::{
    fit_rational_function, format_rational, Affine, int, integrate_piecewise, rat, ExactError, PiecewisePoly, Rational,
    RationalFunction,
};
use crate::surface::{self, SurfaceError, ZariskiPieces};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeltaError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("λ = {lambda} outside [0, 3/{d})")]
    LambdaOutOfRange { lambda: String, d: u32 },
    #[error("unknown point `{point}` for `{case}`")]
    UnknownPoint { case: String, point: String },
    #[error("`{case}` is not exact at λ = {lambda}")]
    NotExactOnInterval { case: String, lambda: String },
    #[error("closed form for `{case}` disagrees with δ at λ = {lambda}")]
    CrossValidation { case: String, lambda: String },
}

/// Whether `expected` is an equality or a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedKind {
    Exact,
    LowerBound,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointRow {
    pub label: String,
    pub location: Option<Location>,
    pub a: Rational,
    pub s: Rational,
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRow {
    pub label: String,
    pub a: Rational,
    pub s: Rational,
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaReport {
    pub case: String,
    pub base: String,
    pub label: String,
    pub d: u32,
    pub lambda: Rational,
    pub option: String,
    pub a_e: Rational,
    pub s_e: Rational,
    pub tau: Rational,
    pub ratio_e: Rational,
    pub points: Vec<PointRow>,
    pub curve_bounds: Vec<CurveRow>,
    pub upper: Rational,
    pub lower: Rational,
    pub exact: bool,
    /// `upper` when exact, otherwise the lower bound.
    pub value: Rational,
    pub minimizers: Vec<String>,
    pub validity_ok: bool,
    pub expected: Option<Rational>,
    pub expected_kind: ExpectedKind,
    pub matches: Option<bool>,
    pub clause_value: Option<Rational>,
}

/// Everything computed once per `(case, d, λ)` and shared by all points.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub built: BuiltCase,
    pub lambda: Rational,
    /// `3 − dλ`.
    pub anticanonical: Rational,
    pub decomposition: ZariskiPieces,
    pub volume: PiecewisePoly,
    /// `h(v)` at a point of Ē off L̄.
    pub h_generic: PiecewisePoly,
    /// `h(v)` at Ē ∩ L̄ (same as `h_generic` without a companion).
    pub h_on_l: PiecewisePoly,
    pub s_e: Rational,
    pub s_generic: Rational,
    pub s_on_l: Rational,
}

impl Evaluation {
    pub fn tau(&self) -> &Rational {
        self.decomposition.end()
    }

    pub fn a_e(&self) -> Rational {
        self.built.spec.a_form.eval(&self.lambda)
    }

    fn s_at(&self, location: Option<Location>) -> &Rational {
        match location {
            Some(Location::OnL) => &self.s_on_l,
            _ => &self.s_generic,
        }
    }

    /// The integrand of `S(W;O)` at a point with the given location.
    pub fn h_at(&self, location: Option<Location>) -> &PiecewisePoly {
        match location {
            Some(Location::OnL) => &self.h_on_l,
            _ => &self.h_generic,
        }
    }
}

/// Computes δ-data against a given catalog (the shipped one by default).
#[derive(Debug, Clone, Copy)]
pub struct Engine<'a> {
    catalog: &'a Catalog,
}

impl Default for Engine<'static> {
    fn default() -> Self {
        Engine { catalog: catalog::shipped() }
    }
}

impl<'a> Engine<'a> {
    pub fn new(catalog: &'a Catalog) -> Self {
        Engine { catalog }
    }

    pub fn catalog(&self) -> &'a Catalog {
        self.catalog
    }

    pub fn evaluate(&self, case: &str, d: u32, lambda: &Rational) -> Result<Evaluation, DeltaError> {
        let built = self.catalog.build_case(case, d)?;
        evaluate_built(built, lambda)
    }

    pub fn s_divisor(&self, case: &str, d: u32, lambda: &Rational) -> Result<Rational, DeltaError> {
        Ok(self.evaluate(case, d, lambda)?.s_e)
    }

    pub fn a_divisor(&self, case: &str, lambda: &Rational) -> Result<Rational, DeltaError> {
        Ok(self.spec_of(case)?.a_form.eval(lambda))
    }

    pub fn s_flag_point(&self, case: &str, d: u32, lambda: &Rational, point: &str) -> Result<Rational, DeltaError> {
        let ev = self.evaluate(case, d, lambda)?;
        let (location, _) = find_point(&ev.built, point)?;
        Ok(ev.s_at(location).clone())
    }

    pub fn a_flag_point(&self, case: &str, lambda: &Rational, point: &str) -> Result<Rational, DeltaError> {
        let d = *self.spec_degrees(case)?.first().expect("non-empty degrees");
        let built = self.catalog.build_case(case, d)?;
        let (_, coefficient) = find_point(&built, point)?;
        Ok(Rational::one() - coefficient.eval(lambda))
    }

    /// δ_P for the first different option.
    pub fn delta_point(&self, case: &str, d: u32, lambda: &Rational) -> Result<DeltaReport, DeltaError> {
        let ev = self.evaluate(case, d, lambda)?;
        Ok(assemble(&ev, 0))
    }

    /// δ_P for every different option of the case.
    pub fn delta_point_all(&self, case: &str, d: u32, lambda: &Rational) -> Result<Vec<DeltaReport>, DeltaError> {
        let ev = self.evaluate(case, d, lambda)?;
        Ok((0..ev.built.spec.differents.len()).map(|i| assemble(&ev, i)).collect())
    }

    /// Samples δ at six interior points of the validity window, fits a (2,2)
    /// rational function and checks it at three further points.
    pub fn delta_closed_form(&self, case: &str, d: u32) -> Result<RationalFunction, DeltaError> {
        self.delta_closed_form_with(case, d, 2, 2)
    }

    /// As [`Engine::delta_closed_form`] with explicit degree bounds.
    pub fn delta_closed_form_with(
        &self,
        case: &str,
        d: u32,
        num_deg: usize,
        den_deg: usize,
    ) -> Result<RationalFunction, DeltaError> {
        let built = self.catalog.build_case(case, d)?;
        let validity = built.validity();
        let options = built.spec.differents.len();
        let value_at = |lambda: &Rational| -> Result<Rational, DeltaError> {
            let ev = evaluate_built(built.clone(), lambda)?;
            let mut value = None;
            for i in 0..options {
                let rep = assemble(&ev, i);
                if !rep.exact || value.as_ref().is_some_and(|v| v != &rep.value) {
                    return Err(DeltaError::NotExactOnInterval {
                        case: case.to_string(),
                        lambda: format_rational(lambda),
                    });
                }
                value = Some(rep.value);
            }
            Ok(value.expect("at least one option"))
        };
        let n = (num_deg + den_deg + 2) as u32;
        let samples: Vec<(Rational, Rational)> = (1..=n)
            .map(|k| {
                let l = validity.sample(k, n + 1);
                value_at(&l).map(|v| (l, v))
            })
            .collect::<Result<_, _>>()?;
        let f = fit_rational_function(&samples, num_deg, den_deg)?;
        for k in [1, 3, 5] {
            let l = validity.sample(k, 2 * n + 2);
            if f.eval(&l) != Some(value_at(&l)?) {
                return Err(DeltaError::CrossValidation { case: case.to_string(), lambda: format_rational(&l) });
            }
        }
        Ok(f)
    }

    fn spec_of(&self, case: &str) -> Result<&'a catalog::CaseSpec, DeltaError> {
        if let Some(c) = self.catalog.case(case) {
            return Ok(c);
        }
        let a = self.catalog.alias(case).ok_or_else(|| CatalogError::UnknownCase(case.to_string()))?;
        Ok(self.catalog.case(&a.base).ok_or_else(|| CatalogError::UnknownCase(a.base.clone()))?)
    }

    fn spec_degrees(&self, case: &str) -> Result<Vec<u32>, DeltaError> {
        if let Some(a) = self.catalog.alias(case) {
            return Ok(vec![a.degree]);
        }
        Ok(self.spec_of(case)?.degrees.iter().copied().collect())
    }
}

/// Label, location and coefficient of a point (searching every option).
fn find_point(
    built: &BuiltCase,
    point: &str,
) -> Result<(Option<Location>, Affine), DeltaError> {
    if point == "generic" {
        return Ok((None, Affine::zero()));
    }
    let options = &built.spec.differents;
    if point == "EL" {
        if !built.spec.has_companion() {
            return Err(DeltaError::UnknownPoint { case: built.id().to_string(), point: point.to_string() });
        }
        let c = options[0]
            .points
            .iter()
            .find(|p| p.location == Location::OnL)
            .map_or_else(Affine::zero, |p| p.coefficient.clone());
        return Ok((Some(Location::OnL), c));
    }
    options
        .iter()
        .flat_map(|o| &o.points)
        .find(|p| p.label == point)
        .map(|p| (Some(p.location), p.coefficient.clone()))
        .ok_or_else(|| DeltaError::UnknownPoint { case: built.id().to_string(), point: point.to_string() })
}

fn check_lambda(built: &BuiltCase, lambda: &Rational) -> Result<(), DeltaError> {
    if lambda < &Rational::zero() || built.anticanonical(lambda) <= Rational::zero() {
        return Err(DeltaError::LambdaOutOfRange { lambda: format_rational(lambda), d: built.degree });
    }
    Ok(())
}

pub fn evaluate_built(built: BuiltCase, lambda: &Rational) -> Result<Evaluation, DeltaError> {
    check_lambda(&built, lambda)?;
    let a = built.anticanonical(lambda);
    let d = built.divisor(lambda);
    let tau = surface::pseudo_effective_threshold(&built.model, &d)?;
    let z = surface::zariski_decompose(&built.model, &d, &tau)?;
    let volume = surface::volume_function(&z);
    let pe = z.positive_pairing(0);
    let h_generic = pe.map(|p| (p * p).scale(&rat(1, 2)));
    let h_on_l = if built.model.len() == 2 {
        let el = built.model.gram()[0][1].clone();
        let nl = z.negative_coefficient(1);
        let cross = pe.zip_with(&nl, |p, n| (p * n).scale(&el))?;
        cross.zip_with(&h_generic, |x, y| x + y)?
    } else {
        h_generic.clone()
    };
    let a2 = &a * &a;
    let s_e = integrate_piecewise(&volume) / &a2;
    let s_generic = int(2) * integrate_piecewise(&h_generic) / &a2;
    let s_on_l = int(2) * integrate_piecewise(&h_on_l) / &a2;
    Ok(Evaluation {
        built,
        lambda: lambda.clone(),
        anticanonical: a,
        decomposition: z,
        volume,
        h_generic,
        h_on_l,
        s_e,
        s_generic,
        s_on_l,
    })
}

/// `(S, A)` of a plane curve of degree `e` appearing in C with multiplicity `l`.
pub fn s_curve_on_plane(d: u32, lambda: &Rational, e: u32, l: u32) -> (Rational, Rational) {
    let a = int(3) - int(d as i64) * lambda;
    (a / int(3 * e as i64), Rational::one() - int(l as i64) * lambda)
}

/// Labelled points of one option, including `EL` and `generic`.
pub fn points_of(built: &BuiltCase, option: usize) -> Vec<(String, Option<Location>, Affine)> {
    let opt = &built.spec.differents[option];
    let mut out: Vec<_> = opt.points.iter().map(|p| (p.label.clone(), Some(p.location), p.coefficient.clone())).collect();
    if built.spec.has_companion() && !opt.points.iter().any(|p| p.location == Location::OnL) {
        out.push(("EL".to_string(), Some(Location::OnL), Affine::zero()));
    }
    out.push(("generic".to_string(), None, Affine::zero()));
    out
}

fn assemble(ev: &Evaluation, option: usize) -> DeltaReport {
    let built = &ev.built;
    let spec = &built.spec;
    let lambda = &ev.lambda;
    let a_e = ev.a_e();
    let ratio_e = &a_e / &ev.s_e;

    let points: Vec<PointRow> = points_of(built, option)
        .into_iter()
        .map(|(label, location, c)| {
            let a = Rational::one() - c.eval(lambda);
            let s = ev.s_at(location).clone();
            let ratio = &a / &s;
            PointRow { label, location, a, s, ratio }
        })
        .collect();
    let curve_bounds: Vec<CurveRow> = spec
        .extra_upper_bounds
        .iter()
        .map(|cb| {
            let (s, a) = s_curve_on_plane(built.degree, lambda, cb.e, cb.l);
            let ratio = &a / &s;
            CurveRow { label: cb.label(), a, s, ratio }
        })
        .collect();

    let upper = curve_bounds.iter().map(|c| &c.ratio).fold(ratio_e.clone(), |m, r| if r < &m { r.clone() } else { m });
    let lower = points.iter().map(|p| &p.ratio).fold(ratio_e.clone(), |m, r| if r < &m { r.clone() } else { m });
    let exact = upper == lower;
    let value = if exact { upper.clone() } else { lower.clone() };

    let mut minimizers = Vec::new();
    if ratio_e == value {
        minimizers.push("E".to_string());
    }
    minimizers.extend(curve_bounds.iter().filter(|c| c.ratio == value).map(|c| c.label.clone()));
    minimizers.extend(points.iter().filter(|p| p.ratio == value).map(|p| p.label.clone()));

    let validity_ok = built.validity().contains(lambda);
    let (expected, expected_kind) = if validity_ok {
        (Some(spec.expected_delta.eval(lambda) / &ev.anticanonical), ExpectedKind::Exact)
    } else if let Some(b) = spec.expected_lower_bound.as_ref().filter(|_| spec.lower_regime_contains(lambda)) {
        (Some(&b.numerator / &ev.anticanonical), ExpectedKind::LowerBound)
    } else {
        (None, ExpectedKind::None)
    };
    let matches = match (&expected, expected_kind) {
        (Some(e), ExpectedKind::Exact) => Some(exact && &value == e),
        (Some(e), ExpectedKind::LowerBound) => Some(&lower == e),
        _ => None,
    };

    DeltaReport {
        case: built.id().to_string(),
        base: spec.id.clone(),
        label: built.label().to_string(),
        d: built.degree,
        lambda: lambda.clone(),
        option: spec.differents[option].name.clone(),
        a_e,
        s_e: ev.s_e.clone(),
        tau: ev.tau().clone(),
        ratio_e,
        points,
        curve_bounds,
        upper,
        lower,
        exact,
        value,
        minimizers,
        validity_ok,
        expected,
        expected_kind,
        matches,
        clause_value: spec.clause.and_then(|c| c.evaluate(built.degree, lambda)),
    }
}

pub fn s_divisor(case: &str, d: u32, lambda: &Rational) -> Result<Rational, DeltaError> {
    Engine::default().s_divisor(case, d, lambda)
}

pub fn a_divisor(case: &str, lambda: &Rational) -> Result<Rational, DeltaError> {
    Engine::default().a_divisor(case, lambda)
}

pub fn s_flag_point(case: &str, d: u32, lambda: &Rational, point: &str) -> Result<Rational, DeltaError> {
    Engine::default().s_flag_point(case, d, lambda, point)
}

pub fn a_flag_point(case: &str, lambda: &Rational, point: &str) -> Result<Rational, DeltaError> {
    Engine::default().a_flag_point(case, lambda, point)
}

pub fn delta_point(case: &str, d: u32, lambda: &Rational) -> Result<DeltaReport, DeltaError> {
    Engine::default().delta_point(case, d, lambda)
}

pub fn delta_closed_form(case: &str, d: u32) -> Result<RationalFunction, DeltaError> {
    Engine::default().delta_closed_form(case, d)
}

/// The expected closed form `N(λ)/(3 − dλ)` of a case or alias.
pub fn expected_closed_form(catalog: &Catalog, case: &str, d: u32) -> Result<RationalFunction, DeltaError> {
    Ok(catalog.build_case(case, d)?.spec.expected_function(d))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        crate::exact::parse_rational(s).unwrap()
    }

    #[test]
    fn s_divisor_examples() {
        assert_eq!(s_divisor("A2", 4, &q("1/2")).unwrap(), q("5/3"));
        assert_eq!(s_divisor("A1", 4, &q("0")).unwrap(), q("2"));
        assert_eq!(s_divisor("smooth_conic", 2, &q("0")).unwrap(), q("3"));
    }

    #[test]
    fn a_divisor_examples() {
        assert_eq!(a_divisor("A2", &q("1/2")).unwrap(), q("2"));
        assert_eq!(a_divisor("E7", &q("1/3")).unwrap(), q("2"));
        for c in &catalog::shipped().cases {
            assert_eq!(a_divisor(&c.id, &q("0")).unwrap(), Rational::one() + &c.k_e);
        }
    }

    #[test]
    fn flag_point_examples() {
        let half = q("1/2");
        assert_eq!(s_flag_point("A2", 4, &half, "generic").unwrap(), q("1/9"));
        assert_eq!(s_flag_point("A2", 4, &half, "EL").unwrap(), q("1/6"));
        assert_eq!(s_flag_point("A1", 4, &q("0"), "generic").unwrap(), q("1"));
        assert_eq!(a_flag_point("A2", &half, "Q").unwrap(), half);
        assert_eq!(a_flag_point("A2", &q("1/5"), "P1").unwrap(), q("1/3"));
        assert_eq!(a_flag_point("D5", &half, "P1").unwrap(), q("1/6"));
        assert_eq!(a_flag_point("A2", &half, "generic").unwrap(), q("1"));
        assert!(matches!(a_flag_point("A2", &half, "X"), Err(DeltaError::UnknownPoint { .. })));
        assert!(matches!(s_flag_point("A1", 4, &half, "EL"), Err(DeltaError::UnknownPoint { .. })));
    }

    #[test]
    fn a2_report() {
        let r = delta_point("A2", 4, &q("1/2")).unwrap();
        assert_eq!(r.value, q("6/5"));
        assert!(r.exact);
        assert_eq!(r.minimizers, vec!["E".to_string()]);
        let ratio = |l: &str| r.points.iter().find(|p| p.label == l).unwrap().ratio.clone();
        assert_eq!(ratio("P1"), q("3"));
        assert_eq!(ratio("P2"), q("3"));
        assert_eq!(ratio("Q"), q("9/2"));
        assert_eq!(ratio("generic"), q("9"));
        assert_eq!(r.matches, Some(true));
    }

    #[test]
    fn a4_lower_regime() {
        let r = delta_point("A4", 4, &q("1/4")).unwrap();
        assert!(!r.exact);
        assert_eq!(r.lower, q("3/4"));
        assert_eq!(r.minimizers, vec!["P12".to_string()]);
        assert_eq!(r.expected_kind, ExpectedKind::LowerBound);
        assert!(r.lower <= r.upper);
    }

    #[test]
    fn normalized_at_zero() {
        for c in &catalog::shipped().cases {
            for &d in &c.degrees {
                if c.validity_for(d).contains(&Rational::zero()) {
                    for r in Engine::default().delta_point_all(&c.id, d, &Rational::zero()).unwrap() {
                        assert!(r.exact && r.value.is_one(), "{} d={d}", c.id);
                    }
                }
            }
        }
    }

    #[test]
    fn curve_on_plane_examples() {
        let (s, a) = s_curve_on_plane(1, &q("1/2"), 1, 1);
        assert_eq!(a / s, q("3/5"));
        let (s, a) = s_curve_on_plane(4, &q("1/4"), 1, 2);
        assert_eq!(a / s, q("3/4"));
        assert_eq!(s_curve_on_plane(3, &q("0"), 1, 0), (q("1"), q("1")));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(delta_closed_form("A2", 4).unwrap().display("λ"), "(15−18λ)/(15−20λ)");
        assert_eq!(delta_closed_form("D4", 3).unwrap().display("λ"), "(2−3λ)/(2−2λ)");
        let a7 = delta_closed_form("A7", 4).unwrap();
        assert_eq!(a7, expected_closed_form(catalog::shipped(), "A7", 4).unwrap());
        for k in 1..8 {
            let l = &q("3/8") + q("1/4") * rat(k, 8);
            assert_eq!(a7.eval(&l), Some(delta_point("A7", 4, &l).unwrap().value));
        }
    }

    #[test]
    fn closed_form_rejects_inexact_windows() {
        let mut cat = catalog::shipped().clone();
        cat.case_mut("A4").unwrap().validity.lo = Rational::zero();
        let err = Engine::new(&cat).delta_closed_form("A4", 4).unwrap_err();
        assert!(matches!(err, DeltaError::NotExactOnInterval { .. }));
    }

    #[test]
    fn lambda_range_is_checked() {
        assert!(matches!(delta_point("A2", 4, &q("3/4")), Err(DeltaError::LambdaOutOfRange { .. })));
        assert!(matches!(delta_point("A2", 4, &q("-1/4")), Err(DeltaError::LambdaOutOfRange { .. })));
    }

    #[test]
    fn a3_options_agree() {
        let reps = Engine::default().delta_point_all("A3", 4, &q("1/3")).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0].value, reps[1].value);
        assert!(reps.iter().all(|r| r.exact));
    }

    #[test]
    fn clause_reported_alongside() {
        let r = delta_point("double_line", 4, &q("1/4")).unwrap();
        assert_eq!(r.clause_value, Some(r.value.clone()));
        assert_eq!(r.minimizers[0], "curve[e=1,l=2]");
    }
}

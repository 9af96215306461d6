//! Singularity configurations: surface data of each plt blowup, pullback
//! multiplicities, differents, validity intervals and expected closed forms.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rational, int, rat, rational_str, Affine, Poly, Rational, RationalFunction};
use crate::surface::{Ambient, DivisorExpr, SurfaceModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("degree {d} is not admissible for `{id}` (allowed: {allowed:?})")]
    DegreeNotAdmissible { id: String, d: u32, allowed: Vec<u32> },
    #[error("invalid case data for `{0}`: {1}")]
    InvalidData(String, String),
}

/// Where a point of the different sits on Ē.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    /// The intersection point Ē ∩ L̄.
    OnL,
    /// A point of Ē ∩ C̄ away from L̄.
    OnC,
    /// A quotient singularity of S̄ away from L̄ and C̄ (or absorbing C̄ there).
    Isolated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentPoint {
    pub label: String,
    pub coefficient: Affine,
    pub location: Location,
}

/// One admissible different on Ē. Most cases have a single option.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentOption {
    pub name: String,
    /// Multiplicity of L̄ inside C̄ for this option (0 when L ⊄ C).
    #[serde(with = "rational_str")]
    pub l_in_c: Rational,
    pub points: Vec<DifferentPoint>,
}

/// A plane curve of degree `e` that is a component of C of multiplicity `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveBound {
    pub e: u32,
    pub l: u32,
}

impl CurveBound {
    pub fn label(&self) -> String {
        format!("curve[e={},l={}]", self.e, self.l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "rational_str")]
    pub lo: Rational,
    #[serde(with = "rational_str")]
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// A degree-specific validity window; `open_hi` when the right end is `3/d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validity {
    pub lo: Rational,
    pub hi: Rational,
    pub open_hi: bool,
}

impl Validity {
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && (x < &self.hi || (!self.open_hi && x == &self.hi))
    }

    /// `lo + (hi − lo)·k/n`.
    pub fn sample(&self, k: u32, n: u32) -> Rational {
        &self.lo + (&self.hi - &self.lo) * rat(k as i64, n as i64)
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let close = if self.open_hi { ")" } else { "]" };
        write!(f, "[{},{}{}", format_rational(&self.lo), format_rational(&self.hi), close)
    }
}

/// `δ ≥ numerator / (3 − dλ)` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundSpec {
    #[serde(with = "rational_str")]
    pub lo: Rational,
    #[serde(with = "rational_str")]
    pub hi: Rational,
    #[serde(with = "rational_str")]
    pub numerator: Rational,
}

/// The multiplicity-component clause: a line of multiplicity `l`, or a double conic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Line(u32),
    Conic,
}

impl Clause {
    /// Clause value `3(1 − lλ)/(3 − dλ)` or `1`, with its validity end.
    pub fn evaluate(&self, d: u32, lambda: &Rational) -> Option<Rational> {
        match self {
            Clause::Line(l) => {
                let l = int(*l as i64);
                if lambda > &l.recip() {
                    return None;
                }
                Some(int(3) * (Rational::one() - &l * lambda) / (int(3) - int(d as i64) * lambda))
            }
            Clause::Conic => (lambda <= &rat(3, 8)).then(Rational::one),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub id: String,
    pub label: String,
    pub configuration: String,
    pub degrees: BTreeSet<u32>,
    #[serde(with = "rational_matrix")]
    pub gram: Vec<Vec<Rational>>,
    #[serde(with = "rational_str")]
    pub k_e: Rational,
    #[serde(with = "rational_str")]
    pub m_c: Rational,
    #[serde(with = "rational_opt", default)]
    pub m_l: Option<Rational>,
    /// The printed log discrepancy `A(λ)`.
    pub a_form: Affine,
    pub differents: Vec<DifferentOption>,
    pub extra_upper_bounds: Vec<CurveBound>,
    pub validity: Interval,
    /// Declared `τ / (3 − dλ)`.
    #[serde(with = "rational_str")]
    pub tau: Rational,
    /// Declared `S(Ē) / (3 − dλ)`.
    #[serde(with = "rational_str")]
    pub s_factor: Rational,
    /// `N(λ)` with `δ = N(λ)/(3 − dλ)` on the validity interval.
    pub expected_delta: Affine,
    #[serde(default)]
    pub expected_lower_bound: Option<LowerBoundSpec>,
    pub minimizer: String,
    #[serde(default)]
    pub clause: Option<Clause>,
}

impl CaseSpec {
    pub fn expected_function(&self, d: u32) -> RationalFunction {
        RationalFunction::new(self.expected_delta.to_poly(), Poly::from_ints(&[3, -(d as i64)]))
    }

    pub fn validity_for(&self, d: u32) -> Validity {
        let cap = rat(3, d as i64);
        if self.validity.hi >= cap {
            Validity { lo: self.validity.lo.clone(), hi: cap, open_hi: true }
        } else {
            Validity { lo: self.validity.lo.clone(), hi: self.validity.hi.clone(), open_hi: false }
        }
    }

    pub fn lower_regime_contains(&self, lambda: &Rational) -> bool {
        self.expected_lower_bound
            .as_ref()
            .is_some_and(|b| &b.lo <= lambda && lambda <= &b.hi)
    }

    pub fn has_companion(&self) -> bool {
        self.gram.len() == 2
    }
}

/// A configuration whose δ is that of another entry at a fixed degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AliasSpec {
    pub id: String,
    pub label: String,
    pub configuration: String,
    pub base: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub cases: Vec<CaseSpec>,
    pub aliases: Vec<AliasSpec>,
}

/// Summary row of [`Catalog::list`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSummary {
    pub id: String,
    pub label: String,
    pub configuration: String,
    pub degrees: BTreeSet<u32>,
    pub validity: Interval,
    pub alias_of: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub case: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.case, self.message)
    }
}

/// A case resolved at a degree: surface model plus the family `D(v)`.
#[derive(Debug, Clone)]
pub struct BuiltCase {
    pub spec: CaseSpec,
    pub alias: Option<AliasSpec>,
    pub degree: u32,
    pub model: SurfaceModel,
    hyperplane: Ambient,
}

impl BuiltCase {
    /// `3 − dλ`.
    pub fn anticanonical(&self, lambda: &Rational) -> Rational {
        int(3) - int(self.degree as i64) * lambda
    }

    /// `σ*(−K − λC) − vĒ`.
    pub fn divisor(&self, lambda: &Rational) -> DivisorExpr {
        let a = self.anticanonical(lambda);
        let mut coeffs = vec![Affine::zero(); self.model.len()];
        coeffs[0] = Affine::new(Rational::zero(), -Rational::one());
        DivisorExpr::with_ambient(self.hyperplane.scale(&a), coeffs)
    }

    pub fn validity(&self) -> Validity {
        self.spec.validity_for(self.degree)
    }

    pub fn id(&self) -> &str {
        self.alias.as_ref().map_or(&self.spec.id, |a| &a.id)
    }

    pub fn label(&self) -> &str {
        self.alias.as_ref().map_or(&self.spec.label, |a| &a.label)
    }
}

impl Catalog {
    pub fn case(&self, id: &str) -> Option<&CaseSpec> {
        self.cases.iter().find(|c| c.id == id)
    }

    pub fn case_mut(&mut self, id: &str) -> Option<&mut CaseSpec> {
        self.cases.iter_mut().find(|c| c.id == id)
    }

    pub fn alias(&self, id: &str) -> Option<&AliasSpec> {
        self.aliases.iter().find(|a| a.id == id)
    }

    /// Base cases first, then aliases, each in catalog order.
    pub fn list(&self) -> Vec<CaseSummary> {
        let mut out: Vec<CaseSummary> = self
            .cases
            .iter()
            .map(|c| CaseSummary {
                id: c.id.clone(),
                label: c.label.clone(),
                configuration: c.configuration.clone(),
                degrees: c.degrees.clone(),
                validity: c.validity.clone(),
                alias_of: None,
            })
            .collect();
        for a in &self.aliases {
            let validity = self
                .case(&a.base)
                .map(|b| b.validity.clone())
                .unwrap_or_else(|| Interval::new(Rational::zero(), Rational::zero()));
            out.push(CaseSummary {
                id: a.id.clone(),
                label: a.label.clone(),
                configuration: a.configuration.clone(),
                degrees: [a.degree].into_iter().collect(),
                validity,
                alias_of: Some(a.base.clone()),
            });
        }
        out
    }

    /// Resolves `id` (a case or an alias) at degree `d`.
    pub fn build_case(&self, id: &str, d: u32) -> Result<BuiltCase, CatalogError> {
        let (spec, alias) = match self.case(id) {
            Some(c) => (c, None),
            None => {
                let a = self.alias(id).ok_or_else(|| CatalogError::UnknownCase(id.to_string()))?;
                if a.degree != d {
                    return Err(CatalogError::DegreeNotAdmissible {
                        id: id.to_string(),
                        d,
                        allowed: vec![a.degree],
                    });
                }
                let base = self.case(&a.base).ok_or_else(|| CatalogError::UnknownCase(a.base.clone()))?;
                (base, Some(a.clone()))
            }
        };
        if !spec.degrees.contains(&d) {
            return Err(CatalogError::DegreeNotAdmissible {
                id: id.to_string(),
                d,
                allowed: spec.degrees.iter().copied().collect(),
            });
        }
        let names: Vec<String> = ["E", "Lbar"].iter().take(spec.gram.len()).map(|s| s.to_string()).collect();
        let model = SurfaceModel::new(names, spec.gram.clone())
            .map_err(|e| CatalogError::InvalidData(spec.id.clone(), e.to_string()))?;
        let hyperplane = hyperplane_class(spec);
        Ok(BuiltCase { spec: spec.clone(), alias, degree: d, model, hyperplane })
    }

    /// Every invariant of every entry; empty for a consistent catalog.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for c in &self.cases {
            if !seen.insert(c.id.clone()) {
                out.push(violation(&c.id, "duplicate id".into()));
            }
            validate_case(c, &mut out);
        }
        for a in &self.aliases {
            if !seen.insert(a.id.clone()) {
                out.push(violation(&a.id, "duplicate id".into()));
            }
            match self.case(&a.base) {
                None => out.push(violation(&a.id, format!("alias base `{}` missing", a.base))),
                Some(b) if !b.degrees.contains(&a.degree) => out.push(violation(
                    &a.id,
                    format!("alias degree {} not admissible for `{}`", a.degree, b.id),
                )),
                Some(_) => {}
            }
        }
        out
    }
}

/// Pairings of σ*H with (Ē, L̄), read off the pullback `σ*L = L̄ + m_L Ē`.
fn hyperplane_class(spec: &CaseSpec) -> Ambient {
    let g = &spec.gram;
    let pairings = match (&spec.m_l, g.len()) {
        (Some(ml), 2) => vec![&g[0][1] + ml * &g[0][0], &g[1][1] + ml * &g[0][1]],
        (_, n) => vec![Rational::zero(); n],
    };
    Ambient { self_intersection: Rational::one(), pairings }
}

fn violation(case: &str, message: String) -> Violation {
    Violation { case: case.to_string(), message }
}

fn validate_case(c: &CaseSpec, out: &mut Vec<Violation>) {
    let id = c.id.as_str();
    let n = c.gram.len();
    if !(n == 1 || n == 2) || c.gram.iter().any(|r| r.len() != n) {
        out.push(violation(id, "gram must be 1×1 or 2×2".into()));
        return;
    }
    if n == 2 && c.gram[0][1] != c.gram[1][0] {
        out.push(violation(id, "gram not symmetric".into()));
    }
    if !c.gram[0][0].is_negative() {
        out.push(violation(id, "Ē² must be negative".into()));
    }

    let a = Affine::new(Rational::one() + &c.k_e, -c.m_c.clone());
    if a != c.a_form {
        out.push(violation(
            id,
            format!("A(λ) mismatch: got {}, catalog states {}", a.display("λ"), c.a_form.display("λ")),
        ));
    }

    match (n, &c.m_l) {
        (2, Some(ml)) => {
            let g = &c.gram;
            let e_pair = &g[0][1] + ml * &g[0][0];
            if !e_pair.is_zero() {
                out.push(violation(id, format!("σ*L·Ē = {} (expected 0)", format_rational(&e_pair))));
            }
            let l_pair = &g[1][1] + ml * &g[1][0];
            if !l_pair.is_one() {
                out.push(violation(id, format!("σ*L·L̄ = {} (expected 1)", format_rational(&l_pair))));
            }
        }
        (2, None) => out.push(violation(id, "companion L̄ without m_L".into())),
        (_, Some(_)) => out.push(violation(id, "m_L given without companion L̄".into())),
        _ => {}
    }

    if c.degrees.is_empty() || c.degrees.iter().any(|d| !(1..=4).contains(d)) {
        out.push(violation(id, "degrees must lie in 1..=4".into()));
    }
    let max_d = c.degrees.iter().copied().max().unwrap_or(1);
    if c.validity.lo.is_negative() || c.validity.lo >= c.validity.hi {
        out.push(violation(id, "validity interval malformed".into()));
    } else if c.validity.lo >= rat(3, max_d as i64) {
        out.push(violation(id, "validity empty for the largest degree".into()));
    }
    if !c.tau.is_positive() || !c.s_factor.is_positive() || c.s_factor >= c.tau {
        out.push(violation(id, "declared τ/S out of range".into()));
    }
    if let Some(b) = &c.expected_lower_bound {
        if b.lo > b.hi || b.hi > c.validity.lo || !b.numerator.is_positive() {
            out.push(violation(id, "lower-bound regime malformed".into()));
        }
    }
    for cb in &c.extra_upper_bounds {
        if cb.e == 0 || cb.l == 0 {
            out.push(violation(id, format!("extra bound {} degenerate", cb.label())));
        }
    }
    if c.differents.is_empty() {
        out.push(violation(id, "no different".into()));
    }

    // deg Δ = (K_S̄ + Ē + λC̄)·Ē + 2 with K_S̄ = σ*K + kĒ and C̄·Ē = −m_C Ē².
    let ee = &c.gram[0][0];
    let degree = Affine::new(int(2) + (&c.k_e + Rational::one()) * ee, -(&c.m_c * ee));
    let lo = match &c.expected_lower_bound {
        Some(b) if b.lo < c.validity.lo => b.lo.clone(),
        _ => c.validity.lo.clone(),
    };
    let hi = &c.validity.hi;
    for opt in &c.differents {
        let total = opt.points.iter().fold(Affine::zero(), |acc, p| &acc + &p.coefficient);
        if total != degree {
            out.push(violation(
                id,
                format!(
                    "different `{}` has degree {}, adjunction gives {}",
                    opt.name,
                    total.display("λ"),
                    degree.display("λ")
                ),
            ));
        }
        let mut labels = BTreeSet::new();
        for p in &opt.points {
            if !labels.insert(p.label.as_str()) || p.label == "generic" || p.label == "EL" {
                out.push(violation(id, format!("point label `{}` reused", p.label)));
            }
            let (x, y) = (p.coefficient.eval(&lo), p.coefficient.eval(hi));
            let ok_lo = !x.is_negative() && x < Rational::one();
            let ok_hi = !y.is_negative() && y <= Rational::one();
            if !ok_lo || !ok_hi {
                out.push(violation(id, format!("different out of [0,1) at {}", p.label)));
            }
        }
        let on_l: Vec<_> = opt.points.iter().filter(|p| p.location == Location::OnL).collect();
        if n == 1 {
            if !on_l.is_empty() || !opt.l_in_c.is_zero() {
                out.push(violation(id, format!("option `{}` refers to L̄ without a companion", opt.name)));
            }
        } else {
            if on_l.len() > 1 {
                out.push(violation(id, "more than one point on L̄".into()));
            }
            // L̄ ⊂ C̄ with multiplicity l contributes l·(L̄·Ē)·λ at Ē ∩ L̄.
            let slope = on_l.first().map_or_else(Rational::zero, |p| p.coefficient.slope.clone());
            if slope != &opt.l_in_c * &c.gram[0][1] {
                out.push(violation(
                    id,
                    format!("option `{}`: λ-part at Ē∩L̄ disagrees with L̄ ⊂ C̄ multiplicity", opt.name),
                ));
            }
        }
        if opt.l_in_c.is_negative() {
            out.push(violation(id, "negative L̄ multiplicity".into()));
        }
    }
}

static SHIPPED: OnceLock<Catalog> = OnceLock::new();

/// The built-in catalog.
pub fn shipped() -> &'static Catalog {
    SHIPPED.get_or_init(build_shipped)
}

pub fn build_case(id: &str, d: u32) -> Result<BuiltCase, CatalogError> {
    shipped().build_case(id, d)
}

pub fn list_cases() -> Vec<CaseSummary> {
    shipped().list()
}

pub fn validate_catalog() -> Vec<Violation> {
    shipped().validate()
}

fn r(s: &str) -> Rational {
    crate::exact::parse_rational(s).expect("literal")
}

fn af(c: &str, s: &str) -> Affine {
    Affine::new(r(c), r(s))
}

fn pt(label: &str, c: &str, s: &str, location: Location) -> DifferentPoint {
    DifferentPoint { label: label.to_string(), coefficient: af(c, s), location }
}

fn single(points: Vec<DifferentPoint>) -> Vec<DifferentOption> {
    vec![DifferentOption { name: "default".into(), l_in_c: Rational::zero(), points }]
}

/// Marks L̄ as a component of C̄ of multiplicity `l`.
fn line_in_c(mut c: CaseSpec, l: i64) -> CaseSpec {
    for opt in &mut c.differents {
        opt.l_in_c = int(l);
    }
    c
}

fn interval(lo: &str, hi: &str) -> Interval {
    Interval::new(r(lo), r(hi))
}

struct Draft {
    id: &'static str,
    label: &'static str,
    configuration: &'static str,
    degrees: &'static [u32],
    gram: [[&'static str; 2]; 2],
    companion: bool,
    k: &'static str,
    m_c: &'static str,
    m_l: Option<&'static str>,
    differents: Vec<DifferentOption>,
    extra: Vec<CurveBound>,
    validity: (&'static str, &'static str),
    tau: &'static str,
    s: &'static str,
    expected: (&'static str, &'static str),
    lower: Option<(&'static str, &'static str, &'static str)>,
    minimizer: &'static str,
    clause: Option<Clause>,
}

impl Draft {
    fn finish(self) -> CaseSpec {
        let gram = if self.companion {
            self.gram.iter().map(|row| row.iter().map(|x| r(x)).collect()).collect()
        } else {
            vec![vec![r(self.gram[0][0])]]
        };
        let k_e = r(self.k);
        let m_c = r(self.m_c);
        CaseSpec {
            id: self.id.into(),
            label: self.label.into(),
            configuration: self.configuration.into(),
            degrees: self.degrees.iter().copied().collect(),
            gram,
            a_form: Affine::new(Rational::one() + &k_e, -m_c.clone()),
            k_e,
            m_c,
            m_l: self.m_l.map(r),
            differents: self.differents,
            extra_upper_bounds: self.extra,
            validity: interval(self.validity.0, self.validity.1),
            tau: r(self.tau),
            s_factor: r(self.s),
            expected_delta: af(self.expected.0, self.expected.1),
            expected_lower_bound: self
                .lower
                .map(|(lo, hi, n)| LowerBoundSpec { lo: r(lo), hi: r(hi), numerator: r(n) }),
            minimizer: self.minimizer.into(),
            clause: self.clause,
        }
    }
}

const ORDINARY: [[&str; 2]; 2] = [["-1", "0"], ["0", "0"]];

/// Ordinary blowup of a point where C has multiplicity `m_c`.
#[allow(clippy::too_many_arguments)]
fn ordinary(
    id: &'static str,
    label: &'static str,
    configuration: &'static str,
    m_c: &'static str,
    points: Vec<DifferentPoint>,
    extra: Vec<CurveBound>,
    degrees: &'static [u32],
    validity: (&'static str, &'static str),
    expected: (&'static str, &'static str),
    minimizer: &'static str,
    clause: Option<Clause>,
) -> CaseSpec {
    Draft {
        id,
        label,
        configuration,
        degrees,
        gram: ORDINARY,
        companion: false,
        k: "1",
        m_c,
        m_l: None,
        differents: single(points),
        extra,
        validity,
        tau: "1",
        s: "2/3",
        expected,
        lower: None,
        minimizer,
        clause,
    }
    .finish()
}

/// Weighted blowup separating C from its tangent line at a point of contact order `k`.
fn tangency(
    id: &'static str,
    label: &'static str,
    configuration: &'static str,
    k: i64,
    degrees: &'static [u32],
    validity: (&'static str, &'static str),
    expected_slope: &'static str,
) -> CaseSpec {
    let kk = int(k);
    let spec = CaseSpec {
        id: id.into(),
        label: label.into(),
        configuration: configuration.into(),
        degrees: degrees.iter().copied().collect(),
        gram: vec![
            vec![-kk.recip(), Rational::one()],
            vec![Rational::one(), Rational::one() - &kk],
        ],
        k_e: kk.clone(),
        m_c: kk.clone(),
        m_l: Some(kk.clone()),
        a_form: Affine::new(Rational::one() + &kk, -kk.clone()),
        differents: single(vec![
            DifferentPoint {
                label: "P".into(),
                coefficient: Affine::constant(Rational::one() - kk.recip()),
                location: Location::Isolated,
            },
            pt("Q", "0", "1", Location::OnC),
        ]),
        extra_upper_bounds: vec![],
        validity: interval(validity.0, validity.1),
        tau: kk.clone(),
        s_factor: (&kk + Rational::one()) / int(3),
        expected_delta: af("3", expected_slope),
        expected_lower_bound: None,
        minimizer: "E".into(),
        clause: None,
    };
    spec
}

fn build_shipped() -> Catalog {
    use Location::*;
    let line = |l| CurveBound { e: 1, l };
    let mut cases = vec![
        ordinary(
            "line_component_smooth_point",
            "line",
            "smooth point of C lying on a line component",
            "1",
            vec![pt("Q", "0", "1", OnC)],
            vec![line(1)],
            &[1, 2, 3, 4],
            ("0", "1"),
            ("3", "-3"),
            "curve[e=1,l=1]",
            None,
        ),
        tangency("smooth_conic", "smooth conic", "point of a smooth conic", 2, &[2], ("0", "3/4"), "-2"),
        tangency(
            "smooth_cubic",
            "smooth cubic",
            "ordinary tangency point of a smooth cubic",
            2,
            &[3],
            ("0", "3/4"),
            "-2",
        ),
        tangency(
            "smooth_cubic_flex",
            "smooth cubic, 3-tangent",
            "inflection point of a smooth cubic",
            3,
            &[3],
            ("0", "8/9"),
            "-9/4",
        ),
        tangency(
            "smooth_quartic",
            "smooth quartic",
            "ordinary tangency point of a smooth quartic",
            2,
            &[4],
            ("0", "3/4"),
            "-2",
        ),
        tangency(
            "smooth_quartic_flex",
            "smooth quartic, 3-tangent",
            "inflection point of a smooth quartic",
            3,
            &[4],
            ("0", "3/4"),
            "-9/4",
        ),
        tangency(
            "smooth_quartic_hyperflex",
            "smooth quartic, 4-tangent",
            "hyperflex of a smooth quartic",
            4,
            &[4],
            ("0", "3/4"),
            "-12/5",
        ),
        ordinary(
            "A1",
            "A₁",
            "node",
            "2",
            vec![pt("Q1", "0", "1", OnC), pt("Q2", "0", "1", OnC)],
            vec![],
            &[2, 3, 4],
            ("0", "1"),
            ("3", "-3"),
            "E",
            None,
        ),
        Draft {
            id: "A2",
            label: "A₂",
            configuration: "ordinary cusp",
            degrees: &[3, 4],
            gram: [["-1/6", "1/2"], ["1/2", "-1/2"]],
            companion: true,
            k: "4",
            m_c: "6",
            m_l: Some("3"),
            differents: single(vec![
                pt("P1", "2/3", "0", Isolated),
                pt("P2", "1/2", "0", OnL),
                pt("Q", "0", "1", OnC),
            ]),
            extra: vec![],
            validity: ("0", "5/6"),
            tau: "3",
            s: "5/3",
            expected: ("3", "-18/5"),
            lower: None,
            minimizer: "E",
            clause: None,
        }
        .finish(),
    ];

    let a3_points = |second: Vec<DifferentPoint>| {
        let mut v = vec![pt("P", "1/2", "0", Isolated)];
        v.extend(second);
        v
    };
    cases.push(CaseSpec {
        differents: vec![
            DifferentOption {
                name: "tangent line not in C".into(),
                l_in_c: Rational::zero(),
                points: a3_points(vec![pt("Q1", "0", "1", OnC), pt("Q2", "0", "1", OnC)]),
            },
            DifferentOption {
                name: "tangent line in C".into(),
                l_in_c: Rational::one(),
                points: a3_points(vec![pt("Q", "0", "1", OnC), pt("QL", "0", "1", OnL)]),
            },
        ],
        ..Draft {
            id: "A3",
            label: "A₃",
            configuration: "tacnode",
            degrees: &[3, 4],
            gram: [["-1/2", "1"], ["1", "-1"]],
            companion: true,
            k: "2",
            m_c: "4",
            m_l: Some("2"),
            differents: vec![],
            extra: vec![],
            validity: ("0", "3/4"),
            tau: "2",
            s: "1",
            expected: ("3", "-4"),
            lower: None,
            minimizer: "E",
            clause: None,
        }
        .finish()
    });

    let lower = Some(("0", "3/8", "3/2"));
    cases.extend([
        Draft {
            id: "A4",
            label: "A₄",
            configuration: "rhamphoid cusp",
            degrees: &[4],
            gram: [["-1/10", "2/5"], ["2/5", "-3/5"]],
            companion: true,
            k: "6",
            m_c: "10",
            m_l: Some("4"),
            differents: single(vec![
                pt("P12", "4/5", "0", OnL),
                pt("P3", "1/2", "0", Isolated),
                pt("Q", "0", "1", OnC),
            ]),
            extra: vec![],
            validity: ("3/8", "7/10"),
            tau: "4",
            s: "13/6",
            expected: ("42/13", "-60/13"),
            lower,
            minimizer: "E",
            clause: None,
        }
        .finish(),
        Draft {
            id: "A5",
            label: "A₅",
            configuration: "oscnode, tangent line not in C",
            degrees: &[4],
            gram: [["-1/3", "2/3"], ["2/3", "-1/3"]],
            companion: true,
            k: "3",
            m_c: "6",
            m_l: Some("2"),
            differents: single(vec![
                pt("P", "2/3", "0", OnL),
                pt("Q1", "0", "1", OnC),
                pt("Q2", "0", "1", OnC),
            ]),
            extra: vec![],
            validity: ("3/8", "2/3"),
            tau: "2",
            s: "7/6",
            expected: ("24/7", "-36/7"),
            lower,
            minimizer: "E",
            clause: None,
        }
        .finish(),
        line_in_c(
Draft {
            id: "A5_line_in_C",
            label: "A₅, L ⊂ C",
            configuration: "oscnode whose tangent line is a component of C",
            degrees: &[4],
            gram: [["-1/3", "1"], ["1", "-2"]],
            companion: true,
            k: "3",
            m_c: "6",
            m_l: Some("3"),
            differents: single(vec![
                pt("P", "2/3", "0", Isolated),
                pt("Q", "0", "1", OnC),
                pt("QL", "0", "1", OnL),
            ]),
            extra: vec![],
            validity: ("0", "2/3"),
            tau: "3",
            s: "4/3",
            expected: ("3", "-9/2"),
            lower: None,
            minimizer: "E",
            clause: None,
        }
        .finish(),
            1,
        ),
        Draft {
            id: "A6",
            label: "A₆",
            configuration: "A6 point",
            degrees: &[4],
            gram: [["-1/14", "2/7"], ["2/7", "-1/7"]],
            companion: true,
            k: "8",
            m_c: "14",
            m_l: Some("4"),
            differents: single(vec![
                pt("P123", "6/7", "0", OnL),
                pt("P4", "1/2", "0", Isolated),
                pt("Q", "0", "1", OnC),
            ]),
            extra: vec![],
            validity: ("3/8", "1/2"),
            tau: "4",
            s: "5/2",
            expected: ("18/5", "-28/5"),
            lower,
            minimizer: "E",
            clause: None,
        }
        .finish(),
        Draft {
            id: "A7",
            label: "A₇",
            configuration: "A7 point",
            degrees: &[4],
            gram: [["-1/4", "1/2"], ["1/2", "0"]],
            companion: true,
            k: "4",
            m_c: "8",
            m_l: Some("2"),
            differents: single(vec![
                pt("P", "3/4", "0", Isolated),
                pt("Q1", "0", "1", OnC),
                pt("Q2", "0", "1", OnC),
            ]),
            extra: vec![],
            validity: ("3/8", "5/8"),
            tau: "2",
            s: "4/3",
            expected: ("15/4", "-6"),
            lower,
            minimizer: "E",
            clause: None,
        }
        .finish(),
        ordinary(
            "D4",
            "D₄",
            "ordinary triple point",
            "3",
            vec![pt("Q1", "0", "1", OnC), pt("Q2", "0", "1", OnC), pt("Q3", "0", "1", OnC)],
            vec![],
            &[3, 4],
            ("0", "2/3"),
            ("3", "-9/2"),
            "E",
            None,
        ),
        Draft {
            id: "D5",
            label: "D₅",
            configuration: "D5 point",
            degrees: &[4],
            gram: [["-1/6", "1/2"], ["1/2", "-1/2"]],
            companion: true,
            k: "4",
            m_c: "8",
            m_l: Some("3"),
            differents: single(vec![
                pt("P1", "2/3", "1/3", Isolated),
                pt("P2", "1/2", "0", OnL),
                pt("Q", "0", "1", OnC),
            ]),
            extra: vec![],
            validity: ("0", "5/8"),
            tau: "3",
            s: "5/3",
            expected: ("3", "-24/5"),
            lower: None,
            minimizer: "E",
            clause: None,
        }
        .finish(),
        line_in_c(
Draft {
            id: "D6",
            label: "D₆",
            configuration: "D6 point",
            degrees: &[4],
            gram: [["-1/2", "1"], ["1", "-1"]],
            companion: true,
            k: "2",
            m_c: "5",
            m_l: Some("2"),
            differents: single(vec![
                pt("P", "1/2", "1/2", Isolated),
                pt("Q", "0", "1", OnC),
                pt("QL", "0", "1", OnL),
            ]),
            extra: vec![],
            validity: ("0", "3/5"),
            tau: "2",
            s: "1",
            expected: ("3", "-5"),
            lower: None,
            minimizer: "E",
            clause: None,
        }
        .finish(),
            1,
        ),
        Draft {
            id: "E6",
            label: "E₆",
            configuration: "E6 point",
            degrees: &[4],
            gram: [["-1/12", "1/3"], ["1/3", "-1/3"]],
            companion: true,
            k: "6",
            m_c: "12",
            m_l: Some("4"),
            differents: single(vec![
                pt("P1", "3/4", "0", Isolated),
                pt("P23", "2/3", "0", OnL),
                pt("Q", "0", "1", OnC),
            ]),
            extra: vec![],
            validity: ("0", "7/12"),
            tau: "4",
            s: "7/3",
            expected: ("3", "-36/7"),
            lower: None,
            minimizer: "E",
            clause: None,
        }
        .finish(),
    ]);
    let e7 = Draft {
        id: "E7",
        label: "E₇",
        configuration: "E7 point",
        degrees: &[4],
        gram: [["-1/6", "1/2"], ["1/2", "-1/2"]],
        companion: true,
        k: "4",
        m_c: "9",
        m_l: Some("3"),
        differents: single(vec![
            pt("P1", "2/3", "0", Isolated),
            pt("P2", "1/2", "1/2", OnL),
            pt("Q", "0", "1", OnC),
        ]),
        extra: vec![],
        validity: ("0", "5/9"),
        tau: "3",
        s: "5/3",
        expected: ("3", "-27/5"),
        lower: None,
        minimizer: "E",
        clause: None,
    }
    .finish();
    cases.push(line_in_c(e7, 1));

    let q = |label, slope| pt(label, "0", slope, OnC);
    cases.extend([
        ordinary(
            "four_lines",
            "four concurrent lines",
            "ordinary quadruple point",
            "4",
            vec![q("Q1", "1"), q("Q2", "1"), q("Q3", "1"), q("Q4", "1")],
            vec![],
            &[4],
            ("0", "1/2"),
            ("3", "-6"),
            "E",
            None,
        ),
        ordinary(
            "double_line",
            "double line",
            "general point of a double line",
            "2",
            vec![q("Q", "2")],
            vec![line(2)],
            &[2, 3, 4],
            ("0", "1/2"),
            ("3", "-6"),
            "curve[e=1,l=2]",
            Some(Clause::Line(2)),
        ),
        ordinary(
            "double_line_line_singular_point",
            "double line + line",
            "intersection of a double line with a line",
            "3",
            vec![q("Q1", "1"), q("Q2", "2")],
            vec![line(2)],
            &[3],
            ("0", "1/2"),
            ("3", "-6"),
            "curve[e=1,l=2]",
            Some(Clause::Line(2)),
        ),
        ordinary(
            "triple_line",
            "triple line",
            "general point of a triple line",
            "3",
            vec![q("Q", "3")],
            vec![line(3)],
            &[3, 4],
            ("0", "1/3"),
            ("3", "-9"),
            "curve[e=1,l=3]",
            Some(Clause::Line(3)),
        ),
        ordinary(
            "triple_line_line_singular_point",
            "triple line + line",
            "intersection of a triple line with a line",
            "4",
            vec![q("Q1", "1"), q("Q2", "3")],
            vec![line(3)],
            &[4],
            ("0", "1/3"),
            ("3", "-9"),
            "curve[e=1,l=3]",
            Some(Clause::Line(3)),
        ),
        ordinary(
            "quadruple_line",
            "quadruple line",
            "point of a quadruple line",
            "4",
            vec![q("Q", "4")],
            vec![line(4)],
            &[4],
            ("0", "1/4"),
            ("3", "-12"),
            "curve[e=1,l=4]",
            Some(Clause::Line(4)),
        ),
        ordinary(
            "conic_double_chord_singular_point",
            "conic + double chord",
            "intersection of a conic with a double secant line",
            "3",
            vec![q("Q1", "1"), q("Q2", "2")],
            vec![line(2)],
            &[4],
            ("0", "1/2"),
            ("3", "-6"),
            "curve[e=1,l=2]",
            Some(Clause::Line(2)),
        ),
        ordinary(
            "double_line_two_lines_singular_point",
            "double line + two lines",
            "intersection of a double line with one of two further lines",
            "3",
            vec![q("Q1", "1"), q("Q2", "2")],
            vec![line(2)],
            &[4],
            ("0", "1/2"),
            ("3", "-6"),
            "curve[e=1,l=2]",
            Some(Clause::Line(2)),
        ),
        ordinary(
            "double_line_concurrent_lines_singular_point",
            "double line + two concurrent lines",
            "common point of a double line and two further lines",
            "4",
            vec![q("Q1", "1"), q("Q2", "1"), q("Q3", "2")],
            vec![],
            &[4],
            ("0", "1/2"),
            ("3", "-6"),
            "E",
            Some(Clause::Line(2)),
        ),
        ordinary(
            "two_double_lines_singular_point",
            "two double lines",
            "intersection of two double lines",
            "4",
            vec![q("Q1", "2"), q("Q2", "2")],
            vec![],
            &[4],
            ("0", "1/2"),
            ("3", "-6"),
            "E",
            Some(Clause::Line(2)),
        ),
        Draft {
            id: "double_conic",
            label: "double conic",
            configuration: "point of a double smooth conic",
            degrees: &[4],
            gram: [["-1/2", "1"], ["1", "-1"]],
            companion: true,
            k: "2",
            m_c: "4",
            m_l: Some("2"),
            differents: single(vec![pt("P", "1/2", "0", Isolated), q("Q", "2")]),
            extra: vec![],
            validity: ("0", "3/8"),
            tau: "2",
            s: "1",
            expected: ("3", "-4"),
            lower: None,
            minimizer: "E",
            clause: Some(Clause::Conic),
        }
        .finish(),
    ]);
    let tangent = Draft {
        id: "conic_double_tangent_singular_point",
        label: "conic + double tangent",
        configuration: "contact point of a conic with a double tangent line",
        degrees: &[4],
        gram: [["-1/2", "1"], ["1", "-1"]],
        companion: true,
        k: "2",
        m_c: "6",
        m_l: Some("2"),
        differents: single(vec![
            pt("P", "1/2", "0", Isolated),
            q("Q1", "1"),
            pt("Q2", "0", "2", OnL),
        ]),
        extra: vec![line(2)],
        validity: ("0", "1/2"),
        tau: "2",
        s: "1",
        expected: ("3", "-6"),
        lower: None,
        minimizer: "curve[e=1,l=2]",
        clause: Some(Clause::Line(2)),
    }
    .finish();
    cases.push(line_in_c(tangent, 2));

    let alias = |id: &str, label: &str, configuration: &str, base: &str, degree| AliasSpec {
        id: id.into(),
        label: label.into(),
        configuration: configuration.into(),
        base: base.into(),
        degree,
    };
    let aliases = vec![
        alias("two_lines", "two lines", "node of a pair of lines", "A1", 2),
        alias(
            "double_line_line_simple_point",
            "double line + line",
            "point of the simple line off the double line",
            "line_component_smooth_point",
            3,
        ),
        alias(
            "double_line_line_double_point",
            "double line + line",
            "point of the double line off the simple line",
            "double_line",
            3,
        ),
        alias(
            "triple_line_line_simple_point",
            "triple line + line",
            "point of the simple line off the triple line",
            "line_component_smooth_point",
            4,
        ),
        alias(
            "triple_line_line_triple_point",
            "triple line + line",
            "point of the triple line off the simple line",
            "triple_line",
            4,
        ),
        alias(
            "conic_double_chord_conic_point",
            "conic + double chord",
            "point of the conic off the chord",
            "smooth_quartic",
            4,
        ),
        alias(
            "conic_double_chord_line_point",
            "conic + double chord",
            "point of the double chord off the conic",
            "double_line",
            4,
        ),
        alias(
            "conic_double_tangent_conic_point",
            "conic + double tangent",
            "point of the conic off the tangent",
            "smooth_quartic",
            4,
        ),
        alias(
            "conic_double_tangent_line_point",
            "conic + double tangent",
            "point of the double tangent off the conic",
            "double_line",
            4,
        ),
        alias(
            "double_line_two_lines_simple_point",
            "double line + two lines",
            "point of a simple line off the others",
            "line_component_smooth_point",
            4,
        ),
        alias(
            "double_line_two_lines_node",
            "double line + two lines",
            "intersection of the two simple lines",
            "A1",
            4,
        ),
        alias(
            "double_line_two_lines_double_point",
            "double line + two lines",
            "point of the double line off the simple lines",
            "double_line",
            4,
        ),
        alias(
            "double_line_concurrent_lines_simple_point",
            "double line + two concurrent lines",
            "point of a simple line off the others",
            "line_component_smooth_point",
            4,
        ),
        alias(
            "double_line_concurrent_lines_double_point",
            "double line + two concurrent lines",
            "point of the double line off the simple lines",
            "double_line",
            4,
        ),
        alias(
            "two_double_lines_double_point",
            "two double lines",
            "point of one double line off the other",
            "double_line",
            4,
        ),
    ];
    Catalog { cases, aliases }
}

mod rational_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(format_rational).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|x| crate::exact::parse_rational(x).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

mod rational_opt {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(format_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|x| crate::exact::parse_rational(&x).map_err(serde::de::Error::custom))
            .transpose()
    }
}

//! Tangent-cone lookup for the threefold corollaries.

use num_traits::One;

use crate::delta::{DeltaError, Engine, ExpectedKind};
use crate::exact::{rat, Rational};
use crate::threefold::{self, Kind, ThreefoldBoundInput, ThreefoldError};

/// δ of the tangent-cone curve and whether it is an equality or a lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDelta {
    pub case: String,
    pub degree: u32,
    pub value: Rational,
    pub kind: ExpectedKind,
}

#[derive(Debug, thiserror::Error)]
pub enum ConeError {
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error(transparent)]
    Threefold(#[from] ThreefoldError),
    #[error("λ = {lambda} is outside the window where δ of `{case}` is known")]
    Unknown { case: String, lambda: String },
}

/// Resolves δ(P², λC) for the cone case at degree `d`: the exact value on the
/// validity window, the proven lower bound below it, an error elsewhere.
pub fn cone_delta(engine: &Engine, case: &str, d: u32, lambda: &Rational) -> Result<ConeDelta, ConeError> {
    let reports = engine.delta_point_all(case, d, lambda)?;
    let mut best: Option<ConeDelta> = None;
    for r in reports {
        let (value, kind) = match r.expected_kind {
            ExpectedKind::Exact if r.exact => (r.value, ExpectedKind::Exact),
            ExpectedKind::LowerBound => (r.lower, ExpectedKind::LowerBound),
            _ => {
                return Err(ConeError::Unknown {
                    case: case.to_string(),
                    lambda: crate::exact::format_rational(lambda),
                })
            }
        };
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(ConeDelta { case: case.to_string(), degree: d, value, kind });
        }
    }
    Ok(best.expect("at least one option"))
}

/// Outcome of a threefold bound evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreefoldResult {
    pub kind: Kind,
    pub input: ThreefoldBoundInput,
    pub cone: Option<ConeDelta>,
    pub terms: Vec<Rational>,
    pub bound: Rational,
}

impl ThreefoldResult {
    pub fn at_least_one(&self) -> bool {
        self.bound >= Rational::one()
    }

    pub fn strict(&self) -> bool {
        self.bound > Rational::one()
    }
}

pub fn evaluate(kind: Kind, input: ThreefoldBoundInput, cone: Option<ConeDelta>) -> Result<ThreefoldResult, ConeError> {
    let ThreefoldBoundInput { s, m, lambda, delta2d } = &input;
    let terms = match kind {
        Kind::Smooth => threefold::smooth_terms(*s, lambda, delta2d)?,
        Kind::Blowup => threefold::blowup_terms(*s, *m, lambda, delta2d)?,
        Kind::Quadric => threefold::quadric_terms(*m, lambda, delta2d)?,
    };
    let bound = threefold::bound(kind, &input)?;
    Ok(ThreefoldResult { kind, input, cone, terms, bound })
}

/// A configuration from the applications: the threefold pair, the point
/// type and the catalog case describing its tangent cone (or hyperplane section).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corollary {
    pub name: &'static str,
    pub kind: Kind,
    pub s: u32,
    pub m: u32,
    pub lambda: Rational,
    pub cone: &'static str,
}

impl Corollary {
    /// Degree of the plane curve whose δ enters the bound.
    pub fn cone_degree(&self) -> u32 {
        match self.kind {
            Kind::Smooth => self.s,
            _ => self.m,
        }
    }

    pub fn evaluate(&self, engine: &Engine) -> Result<ThreefoldResult, ConeError> {
        let cone = cone_delta(engine, self.cone, self.cone_degree(), &self.lambda)?;
        let input = ThreefoldBoundInput { s: self.s, m: self.m, lambda: self.lambda.clone(), delta2d: cone.value.clone() };
        evaluate(self.kind, input, Some(cone))
    }
}

/// Point types and their plane curves. At a smooth point the curve is the
/// section by a general plane, smooth at the point. Cubic and quartic
/// tangent cones are taken at their worst point (flex, hyperflex); the
/// tangent cone of an A_n point with n ≥ 2 is a pair of lines.
pub fn corollaries() -> Vec<Corollary> {
    let c = |name, kind, s, m, lambda: Rational, cone| Corollary { name, kind, s, m, lambda, cone };
    let half = rat(1, 2);
    let two_thirds = rat(2, 3);
    vec![
        c("cubic surface, smooth point", Kind::Smooth, 3, 1, half.clone(), "smooth_cubic"),
        c("cubic surface, smooth point", Kind::Smooth, 3, 1, two_thirds.clone(), "smooth_cubic"),
        c("cubic surface, A1", Kind::Blowup, 3, 2, half.clone(), "smooth_conic"),
        c("cubic surface, A1", Kind::Blowup, 3, 2, two_thirds.clone(), "smooth_conic"),
        c("quartic surface, smooth point", Kind::Smooth, 4, 1, half.clone(), "smooth_quartic"),
        c("quartic surface, A1", Kind::Blowup, 4, 2, half.clone(), "smooth_conic"),
        c("quartic surface, An (n>=2)", Kind::Blowup, 4, 2, half.clone(), "two_lines"),
        c("quartic surface, ordinary triple point", Kind::Blowup, 4, 3, half.clone(), "smooth_cubic_flex"),
        c("quintic surface, A1", Kind::Blowup, 5, 2, half.clone(), "smooth_conic"),
        c("quintic surface, An (n>=2)", Kind::Blowup, 5, 2, half.clone(), "two_lines"),
        c("quintic surface, ordinary triple point", Kind::Blowup, 5, 3, half.clone(), "smooth_cubic_flex"),
        c("sextic surface, A1", Kind::Blowup, 6, 2, half.clone(), "smooth_conic"),
        c("sextic surface, An (n>=2)", Kind::Blowup, 6, 2, half.clone(), "two_lines"),
        c("sextic surface, ordinary triple point", Kind::Blowup, 6, 3, half.clone(), "smooth_cubic_flex"),
        c("sextic surface, ordinary quadruple point", Kind::Blowup, 6, 4, half, "smooth_quartic_hyperflex"),
        c("quadric threefold, smooth point of S", Kind::Quadric, 0, 1, two_thirds.clone(), "line_component_smooth_point"),
        c("quadric threefold, node of S", Kind::Quadric, 0, 2, two_thirds, "smooth_conic"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn spot_values() {
        let eng = Engine::default();
        let find = |name: &str, l: Rational| {
            corollaries().into_iter().find(|c| c.name == name && c.lambda == l).unwrap().evaluate(&eng).unwrap()
        };
        assert_eq!(find("quartic surface, A1", rat(1, 2)).bound, rat(4, 3));
        assert_eq!(find("quadric threefold, node of S", rat(2, 3)).bound, rat(20, 19));
        assert_eq!(find("cubic surface, smooth point", rat(2, 3)).bound, rat(10, 9));
        let triple = find("quartic surface, ordinary triple point", rat(1, 2));
        assert_eq!(triple.bound, int(1));
        assert!(!triple.strict());
    }

    #[test]
    fn every_corollary_reaches_one() {
        let eng = Engine::default();
        for c in corollaries() {
            let r = c.evaluate(&eng).unwrap();
            assert!(r.at_least_one(), "{} at λ = {}", c.name, c.lambda);
        }
    }

    #[test]
    fn cone_outside_window_is_rejected() {
        let eng = Engine::default();
        assert!(matches!(cone_delta(&eng, "smooth_conic", 2, &rat(4, 5)), Err(ConeError::Unknown { .. })));
        let lower = cone_delta(&eng, "A4", 4, &rat(1, 4)).unwrap();
        assert_eq!(lower.kind, ExpectedKind::LowerBound);
        assert_eq!(lower.value, rat(3, 4));
    }
}

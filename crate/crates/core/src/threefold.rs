//! Bounds for δ of `(P³, λS)` and `(Q, λS)` built from plane δ-invariants.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{format_rational, int, integrate, integrate_piecewise, PiecewisePoly, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThreefoldError {
    #[error("λ = {lambda} out of range: {reason}")]
    OutOfRange { lambda: String, reason: &'static str },
    #[error("multiplicity must be positive")]
    BadMultiplicity,
}

/// The three flag situations: a smooth point of S ⊂ P³, a singular point of
/// S ⊂ P³ (blowup flag), or a point of S on the smooth quadric threefold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Smooth,
    Blowup,
    Quadric,
}

impl Kind {
    pub fn parse(s: &str) -> Option<Kind> {
        match s {
            "smooth" => Some(Kind::Smooth),
            "blowup" => Some(Kind::Blowup),
            "quadric" => Some(Kind::Quadric),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kind::Smooth => "smooth",
            Kind::Blowup => "blowup",
            Kind::Quadric => "quadric",
        }
    }
}

/// Inputs of a threefold bound; `delta2d` is δ (or a lower bound) of `(P², λC_m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreefoldBoundInput {
    pub s: u32,
    pub m: u32,
    pub lambda: Rational,
    pub delta2d: Rational,
}

/// `4 − λs`, rejecting `λ < 0` and `λs ≥ 4`.
fn p3_scale(s: u32, lambda: &Rational) -> Result<Rational, ThreefoldError> {
    let a = int(4) - lambda * int(s as i64);
    if lambda < &Rational::zero() || a <= Rational::zero() {
        return Err(ThreefoldError::OutOfRange { lambda: format_rational(lambda), reason: "need 0 ≤ λ and λs < 4" });
    }
    Ok(a)
}

fn quadric_scale(lambda: &Rational) -> Result<Rational, ThreefoldError> {
    if lambda < &Rational::zero() || lambda >= &Rational::one() {
        return Err(ThreefoldError::OutOfRange { lambda: format_rational(lambda), reason: "need 0 ≤ λ < 1" });
    }
    Ok(Rational::one() - lambda)
}

/// `(c − u)³` as a polynomial in `u`.
fn cube_of_difference(c: &Rational) -> Poly {
    let lin = Poly::new(vec![c.clone(), -Rational::one()]);
    &(&lin * &lin) * &lin
}

/// `c − u³`.
fn constant_minus_cube(c: Rational) -> Poly {
    Poly::new(vec![c, Rational::zero(), Rational::zero(), -Rational::one()])
}

/// `S(T)` for a general plane T through the point, by integrating `(4 − λs − u)³`.
pub fn s_plane_flag(s: u32, lambda: &Rational) -> Result<Rational, ThreefoldError> {
    let a = p3_scale(s, lambda)?;
    let total = integrate(&cube_of_difference(&a), &Rational::zero(), &a);
    Ok(total / (&a * &a * &a))
}

/// `S(E)` for the exceptional divisor of the ordinary blowup, by integrating `(4 − λs)³ − u³`.
pub fn s_blowup_flag(s: u32, lambda: &Rational) -> Result<Rational, ThreefoldError> {
    let a = p3_scale(s, lambda)?;
    let a3 = &a * &a * &a;
    let total = integrate(&constant_minus_cube(a3.clone()), &Rational::zero(), &a);
    Ok(total / a3)
}

/// `S(E)` on the quadric threefold from the two-piece volume
/// `54(1−λ)³ − u³` on `[0, 3(1−λ)]` and `(6(1−λ) − u)³` on `[3(1−λ), 6(1−λ)]`.
pub fn s_quadric_flag(lambda: &Rational) -> Result<Rational, ThreefoldError> {
    let c = quadric_scale(lambda)?;
    let c3 = &c * &c * &c;
    let vol0 = int(54) * &c3;
    let f = PiecewisePoly::new(
        vec![Rational::zero(), int(3) * &c, int(6) * &c],
        vec![constant_minus_cube(vol0.clone()), cube_of_difference(&(int(6) * &c))],
    )
    .expect("increasing breakpoints");
    debug_assert!(f.is_continuous());
    Ok(integrate_piecewise(&f) / vol0)
}

fn min_of(terms: &[Rational]) -> Rational {
    terms.iter().min().expect("non-empty").clone()
}

/// The two terms of the smooth-point bound.
pub fn smooth_terms(s: u32, lambda: &Rational, delta2d: &Rational) -> Result<Vec<Rational>, ThreefoldError> {
    let a = p3_scale(s, lambda)?;
    let factor = int(4) * (int(3) - lambda * int(s as i64)) / (int(3) * &a);
    Ok(vec![int(4) / &a, delta2d * factor])
}

/// `min{4/(4−λs), δ₂·4(3−λs)/(3(4−λs))}`.
pub fn delta_bound_smooth(s: u32, lambda: &Rational, delta2d: &Rational) -> Result<Rational, ThreefoldError> {
    Ok(min_of(&smooth_terms(s, lambda, delta2d)?))
}

/// The restriction factor `4(3−λm)/(3(4−λs))` shared by both blowup terms.
pub fn blowup_factor(s: u32, m: u32, lambda: &Rational) -> Result<Rational, ThreefoldError> {
    if m == 0 {
        return Err(ThreefoldError::BadMultiplicity);
    }
    let a = p3_scale(s, lambda)?;
    Ok(int(4) * (int(3) - lambda * int(m as i64)) / (int(3) * a))
}

pub fn blowup_terms(s: u32, m: u32, lambda: &Rational, delta2d: &Rational) -> Result<Vec<Rational>, ThreefoldError> {
    let f = blowup_factor(s, m, lambda)?;
    Ok(vec![f.clone(), delta2d * f])
}

/// `min{F, δ₂·F}` with `F = 4(3−λm)/(3(4−λs))`.
pub fn delta_bound_blowup(s: u32, m: u32, lambda: &Rational, delta2d: &Rational) -> Result<Rational, ThreefoldError> {
    Ok(min_of(&blowup_terms(s, m, lambda, delta2d)?))
}

pub fn quadric_terms(m: u32, lambda: &Rational, delta2d: &Rational) -> Result<Vec<Rational>, ThreefoldError> {
    if m == 0 {
        return Err(ThreefoldError::BadMultiplicity);
    }
    let c = quadric_scale(lambda)?;
    let lm = lambda * int(m as i64);
    let num = int(3) - &lm;
    Ok(vec![
        &num / (int(3) * &c),
        int(4) * &num / (int(15) - int(9) * lambda - int(2) * &lm),
        delta2d * int(4) * &num / (int(9) * &c),
    ])
}

/// `min{(3−λm)/(3(1−λ)), 4(3−λm)/(15−9λ−2λm), δ₂·4(3−λm)/(9(1−λ))}`.
pub fn delta_bound_quadric(m: u32, lambda: &Rational, delta2d: &Rational) -> Result<Rational, ThreefoldError> {
    Ok(min_of(&quadric_terms(m, lambda, delta2d)?))
}

/// Evaluates a bound of the given kind (`m` is ignored for smooth points).
pub fn bound(kind: Kind, input: &ThreefoldBoundInput) -> Result<Rational, ThreefoldError> {
    let ThreefoldBoundInput { s, m, lambda, delta2d } = input;
    match kind {
        Kind::Smooth => delta_bound_smooth(*s, lambda, delta2d),
        Kind::Blowup => delta_bound_blowup(*s, *m, lambda, delta2d),
        Kind::Quadric => delta_bound_quadric(*m, lambda, delta2d),
    }
}

/// Integrated volume against the closed forms `(4−λs)/4`, `3(4−λs)/4`, `3−3λ`.
pub fn verify_threefold_volumes(kind: Kind, s: u32, lambda: &Rational) -> Result<bool, ThreefoldError> {
    Ok(match kind {
        Kind::Smooth => s_plane_flag(s, lambda)? == p3_scale(s, lambda)? / int(4),
        Kind::Blowup => s_blowup_flag(s, lambda)? == int(3) * p3_scale(s, lambda)? / int(4),
        Kind::Quadric => s_quadric_flag(lambda)? == int(3) - int(3) * lambda,
    })
}

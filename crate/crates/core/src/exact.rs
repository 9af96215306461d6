//! Exact rational scalars, univariate polynomials, piecewise polynomials and
//! rational-function reconstruction.
//!
//! Nothing in this module rounds. Every public value is kept in lowest terms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("irrational root of {poly} in [{lo}, {hi}]")]
    IrrationalRoot { poly: String, lo: String, hi: String },
    #[error("unsupported degree {0} (at most 2)")]
    UnsupportedDegree(usize),
    #[error("no rational function with numerator degree <= {num_deg} and denominator degree <= {den_deg} fits the samples")]
    NoFit { num_deg: usize, den_deg: usize },
    #[error("samples admit no usable denominator")]
    Degenerate,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample abscissae are not distinct")]
    RepeatedSample,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("malformed piecewise polynomial: {0}")]
    Malformed(String),
}

/// `n/d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Whitespace around the parts is allowed.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let t = s.trim().replace('\u{2212}', "-");
    let err = || ExactError::Parse(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t.as_str(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Canonical `"p/q"` (or `"p"` when `q = 1`).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge operands: scale down through the ratio of bit lengths.
            let shift = r.denom().bits().saturating_sub(900) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// True when `r` is stored reduced with a positive denominator.
pub fn is_canonical(r: &Rational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

/// Serde adapter storing a rational as its canonical string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// An affine function `constant + slope * t` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affine {
    #[serde(with = "rational_str")]
    pub constant: Rational,
    #[serde(with = "rational_str")]
    pub slope: Rational,
}

impl Affine {
    pub fn new(constant: Rational, slope: Rational) -> Self {
        Affine { constant, slope }
    }

    pub fn constant(c: Rational) -> Self {
        Affine::new(c, Rational::zero())
    }

    pub fn zero() -> Self {
        Affine::constant(Rational::zero())
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        &self.constant + &self.slope * t
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.slope.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Affine {
        Affine::new(&self.constant * k, &self.slope * k)
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(vec![self.constant.clone(), self.slope.clone()])
    }

    /// Renders e.g. `5−6λ` in the given variable.
    pub fn display(&self, var: &str) -> String {
        self.to_poly().display(var)
    }
}

impl Add for &Affine {
    type Output = Affine;
    fn add(self, o: &Affine) -> Affine {
        Affine::new(&self.constant + &o.constant, &self.slope + &o.slope)
    }
}

impl Sub for &Affine {
    type Output = Affine;
    fn sub(self, o: &Affine) -> Affine {
        Affine::new(&self.constant - &o.constant, &self.slope - &o.slope)
    }
}

/// Univariate polynomial; `coeffs[i]` multiplies `x^i`. No trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    /// `(x - r)`.
    pub fn linear_factor(r: &Rational) -> Self {
        Poly::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let cs: Vec<f64> = self.coeffs.iter().map(to_f64).collect();
        cs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![Rational::zero()];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c / int(i as i64 + 1)),
        );
        Poly::new(out)
    }

    /// Euclidean division, `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            q[shift] = f;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic greatest common divisor (zero when both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scales to integer coefficients with content 1; the sign is left as is.
    /// Returns the primitive part and the factor `k` with `self = k * primitive`.
    pub fn primitive(&self) -> (Poly, Rational) {
        if self.is_zero() {
            return (Poly::zero(), Rational::one());
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let k = Rational::new(g.clone(), lcm);
        let prim = Poly::new(ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect());
        (prim, k)
    }

    /// Human-readable form in ascending powers, e.g. `9−v²/2` style `9 − 1/2v²`.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('\u{2212}');
                }
            } else {
                out.push(if neg { '\u{2212}' } else { '+' });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                k => format!("{var}{}", superscript(k)),
            };
            if i == 0 {
                out.push_str(&format_rational(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else if mag.denom().is_one() {
                out.push_str(&format!("{}{mono}", mag.numer()));
            } else {
                out.push_str(&format!("({}){mono}", format_rational(&mag)));
            }
        }
        out
    }
}

fn superscript(k: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display("x"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Exact definite integral of `p` over `[a, b]`.
pub fn integrate(p: &Poly, a: &Rational, b: &Rational) -> Rational {
    let f = p.antiderivative();
    f.eval(b) - f.eval(a)
}

/// A polynomial per closed interval `[v_i, v_{i+1}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Poly>) -> Result<Self, ExactError> {
        if breakpoints.len() < 2 {
            return Err(ExactError::Malformed("need at least two breakpoints".into()));
        }
        if pieces.len() + 1 != breakpoints.len() {
            return Err(ExactError::Malformed(format!(
                "{} breakpoints but {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ExactError::Malformed("breakpoints not strictly increasing".into()));
        }
        Ok(PiecewisePoly { breakpoints, pieces })
    }

    pub fn single(p: Poly, a: Rational, b: Rational) -> Result<Self, ExactError> {
        PiecewisePoly::new(vec![a, b], vec![p])
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn start(&self) -> &Rational {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &Rational {
        self.breakpoints.last().unwrap()
    }

    /// Index of the piece used at `x`: the left piece at interior breakpoints.
    pub fn piece_index(&self, x: &Rational) -> Option<usize> {
        if x < self.start() || x > self.end() {
            return None;
        }
        let i = self.breakpoints[1..].iter().position(|b| x <= b).unwrap();
        Some(i)
    }

    /// Value at `x`, or `None` outside the domain.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        self.piece_index(x).map(|i| self.pieces[i].eval(x))
    }

    /// Value at `x` using the right piece at interior breakpoints.
    pub fn eval_right(&self, x: &Rational) -> Option<Rational> {
        if x < self.start() || x > self.end() {
            return None;
        }
        let i = self.breakpoints[1..]
            .iter()
            .position(|b| x < b)
            .unwrap_or(self.pieces.len() - 1);
        Some(self.pieces[i].eval(x))
    }

    /// Left and right values agree at every interior breakpoint.
    pub fn is_continuous(&self) -> bool {
        self.breakpoints[1..self.breakpoints.len() - 1]
            .iter()
            .enumerate()
            .all(|(i, b)| self.pieces[i].eval(b) == self.pieces[i + 1].eval(b))
    }

    /// A double-precision evaluator (left piece at breakpoints; NaN outside the domain).
    pub fn float_evaluator(&self) -> impl Fn(f64) -> f64 + Send + Sync {
        let bps: Vec<f64> = self.breakpoints.iter().map(to_f64).collect();
        let coeffs: Vec<Vec<f64>> = self.pieces.iter().map(|p| p.coeffs().iter().map(to_f64).collect()).collect();
        move |x| {
            if x < bps[0] || x > bps[bps.len() - 1] {
                return f64::NAN;
            }
            let i = bps[1..].iter().position(|&b| x <= b).unwrap_or(coeffs.len() - 1);
            coeffs[i].iter().rev().fold(0.0, |acc, c| acc * x + c)
        }
    }

    /// Piecewise combination of two functions on the same breakpoints.
    pub fn zip_with(
        &self,
        other: &PiecewisePoly,
        f: impl Fn(&Poly, &Poly) -> Poly,
    ) -> Result<PiecewisePoly, ExactError> {
        if self.breakpoints != other.breakpoints {
            return Err(ExactError::Malformed("breakpoints differ".into()));
        }
        Ok(PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().zip(&other.pieces).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// Pointwise map of every piece.
    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PiecewisePoly {
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(f).collect(),
        }
    }

    /// Same function with an extra breakpoint at `c` (no-op if already present
    /// or outside the open domain).
    pub fn split_at(&self, c: &Rational) -> PiecewisePoly {
        if c <= self.start() || c >= self.end() || self.breakpoints.contains(c) {
            return self.clone();
        }
        let i = self.piece_index(c).unwrap();
        let mut bps = self.breakpoints.clone();
        let mut pieces = self.pieces.clone();
        bps.insert(i + 1, c.clone());
        pieces.insert(i + 1, self.pieces[i].clone());
        PiecewisePoly { breakpoints: bps, pieces }
    }
}

/// Sum of the exact integrals of all pieces.
pub fn integrate_piecewise(f: &PiecewisePoly) -> Rational {
    f.pieces
        .iter()
        .zip(f.breakpoints.windows(2))
        .map(|(p, w)| integrate(p, &w[0], &w[1]))
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// Rational roots of `p` in `[a, b]`, ascending and without repetition.
///
/// Constant polynomials (including zero) have no reported roots.
pub fn roots_in_interval(p: &Poly, a: &Rational, b: &Rational) -> Result<Vec<Rational>, ExactError> {
    let inside = |r: &Rational| r >= a && r <= b;
    match p.degree() {
        None | Some(0) => Ok(Vec::new()),
        Some(1) => {
            let r = -p.coeff(0) / p.coeff(1);
            Ok(if inside(&r) { vec![r] } else { Vec::new() })
        }
        Some(2) => {
            let (c, bb, aa) = (p.coeff(0), p.coeff(1), p.coeff(2));
            let disc = &bb * &bb - int(4) * &aa * &c;
            if disc.is_negative() {
                return Ok(Vec::new());
            }
            let two_a = int(2) * &aa;
            if let Some(s) = rational_sqrt(&disc) {
                let mut rs = vec![(-&bb - &s) / &two_a, (-&bb + &s) / &two_a];
                rs.sort();
                rs.dedup();
                return Ok(rs.into_iter().filter(|r| inside(r)).collect());
            }
            // Irrational pair: decide exactly whether either root lies in [a, b].
            let fa = p.eval(a);
            let fb = p.eval(b);
            let vertex = -&bb / &two_a;
            let crosses = (fa.is_positive() != fb.is_positive())
                || (inside(&vertex) && p.eval(&vertex).is_positive() != fa.is_positive());
            if a <= b && crosses {
                Err(ExactError::IrrationalRoot {
                    poly: p.display("v"),
                    lo: format_rational(a),
                    hi: format_rational(b),
                })
            } else {
                Ok(Vec::new())
            }
        }
        Some(k) => Err(ExactError::UnsupportedDegree(k)),
    }
}

/// Square root of a non-negative rational when it is itself rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// `numerator / denominator`, coprime, with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    numerator: Poly,
    denominator: Poly,
}

impl RationalFunction {
    /// Reduces `num / den`. Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalFunction {
                numerator: Poly::zero(),
                denominator: Poly::constant(Rational::one()),
            };
        }
        let g = Poly::gcd(&num, &den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let k = d.leading().recip();
        RationalFunction {
            numerator: n.scale(&k),
            denominator: d.scale(&k),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction::new(Poly::constant(c), Poly::constant(Rational::one()))
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    /// `None` at poles.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.denominator.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.numerator.eval(x) / d)
        }
    }

    /// Integer-coefficient presentation `(p, q)` with overall content 1 and a
    /// positive constant term in `q` (positive leading term if that is zero).
    pub fn integer_form(&self) -> (Poly, Poly) {
        let (pn, kn) = self.numerator.primitive();
        let (pd, kd) = self.denominator.primitive();
        // self = (kn/kd) * pn / pd; write kn/kd = a/b in lowest terms.
        let k = kn / kd;
        let mut num = pn.scale(&Rational::from_integer(k.numer().clone()));
        let mut den = pd.scale(&Rational::from_integer(k.denom().clone()));
        let sign_ref = den.coeffs.iter().find(|c| !c.is_zero()).cloned().unwrap();
        if sign_ref.is_negative() {
            num = -&num;
            den = -&den;
        }
        (num, den)
    }

    /// Renders like `(5−6λ)/(5−5λ)`, or just the numerator when the
    /// denominator is 1.
    pub fn display(&self, var: &str) -> String {
        let (n, d) = self.integer_form();
        let ns = n.display(var);
        if d.degree() == Some(0) && d.coeff(0).is_one() {
            return ns;
        }
        let wrap = |p: &Poly, s: String| {
            if p.coeffs.iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&n, ns), wrap(&d, d.display(var)))
    }

    /// LaTeX `\frac{…}{…}` form using `-` and `\lambda`.
    pub fn latex(&self) -> String {
        let (n, d) = self.integer_form();
        let conv = |p: &Poly| {
            p.display("\\lambda")
                .replace('\u{2212}', "-")
                .replace('²', "^2")
        };
        if d.degree() == Some(0) && d.coeff(0).is_one() {
            conv(&n)
        } else {
            format!("\\frac{{{}}}{{{}}}", conv(&n), conv(&d))
        }
    }
}

/// Solves the homogeneous system `m x = 0` exactly and returns a basis of its
/// null space (one vector per free column of the reduced row echelon form).
pub fn null_space(mut m: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in col..cols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..cols {
                    let v = &f * &m[row][c];
                    m[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Reconstructs the rational function of numerator degree `<= num_deg` and
/// denominator degree `<= den_deg` through `samples` by an exact linear solve.
pub fn fit_rational_function(
    samples: &[(Rational, Rational)],
    num_deg: usize,
    den_deg: usize,
) -> Result<RationalFunction, ExactError> {
    let needed = num_deg + den_deg + 2;
    if samples.len() < needed {
        return Err(ExactError::TooFewSamples { needed, got: samples.len() });
    }
    let mut xs: Vec<&Rational> = samples.iter().map(|(x, _)| x).collect();
    xs.sort();
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(ExactError::RepeatedSample);
    }
    // Unknowns: p_0..p_n, q_0..q_m with p(x) - y q(x) = 0 at every sample.
    let cols = num_deg + 1 + den_deg + 1;
    let rows: Vec<Vec<Rational>> = samples
        .iter()
        .map(|(x, y)| {
            let mut row = Vec::with_capacity(cols);
            let mut pw = Rational::one();
            for _ in 0..=num_deg {
                row.push(pw.clone());
                pw *= x;
            }
            let mut pw = Rational::one();
            for _ in 0..=den_deg {
                row.push(-(y * &pw));
                pw *= x;
            }
            row
        })
        .collect();
    let basis = null_space(rows, cols);
    let no_fit = ExactError::NoFit { num_deg, den_deg };
    let Some(v) = basis.into_iter().next() else {
        return Err(no_fit);
    };
    let p = Poly::new(v[..=num_deg].to_vec());
    let q = Poly::new(v[num_deg + 1..].to_vec());
    if q.is_zero() {
        return Err(ExactError::Degenerate);
    }
    let f = RationalFunction::new(p, q);
    for (x, y) in samples {
        match f.eval(x) {
            Some(val) if &val == y => {}
            Some(_) => return Err(no_fit),
            None => return Err(ExactError::Degenerate),
        }
    }
    Ok(f)
}

/// Midpoint rule with `panels` panels, in double precision.
pub fn midpoint_quadrature(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 0..panels {
        // Kahan summation keeps the oracle honest at 10^6 panels.
        let y = f(a + (i as f64 + 0.5) * h) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum * h
}

//! Finite curve lattices with a rational intersection form, divisor families
//! affine in a parameter `v`, and their Zariski decomposition.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{
    format_rational, roots_in_interval, Affine, ExactError, PiecewisePoly, Poly, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("divisor does not match the surface model")]
    ModelMismatch,
    #[error("not pseudo-effective: {0}")]
    NotPseudoEffective(String),
    #[error("support {0:?} has a Gram matrix that is not negative definite")]
    IndefiniteSupport(Vec<String>),
    #[error("volume never reaches zero")]
    Unbounded,
    #[error("irrational breakpoint: {0}")]
    IrrationalBreakpoint(ExactError),
    #[error("invalid surface model: {0}")]
    InvalidModel(String),
}

impl From<ExactError> for SurfaceError {
    fn from(e: ExactError) -> Self {
        SurfaceError::IrrationalBreakpoint(e)
    }
}

/// Named curve classes with their intersection matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    curves: Vec<String>,
    gram: Vec<Vec<Rational>>,
}

impl SurfaceModel {
    pub fn new(curves: Vec<String>, gram: Vec<Vec<Rational>>) -> Result<Self, SurfaceError> {
        let n = curves.len();
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(SurfaceError::InvalidModel("gram shape does not match curve count".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(SurfaceError::InvalidModel(format!(
                        "gram not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(SurfaceModel { curves, gram })
    }

    pub fn curves(&self) -> &[String] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c == name)
    }

    fn sub_gram(&self, idx: &[usize]) -> Vec<Vec<Rational>> {
        idx.iter()
            .map(|&i| idx.iter().map(|&j| self.gram[i][j].clone()).collect())
            .collect()
    }

    /// Negative definiteness of the Gram matrix restricted to `idx`.
    pub fn is_negative_definite(&self, idx: &[usize]) -> bool {
        let neg: Vec<Vec<Rational>> = self
            .sub_gram(idx)
            .into_iter()
            .map(|r| r.into_iter().map(|x| -x).collect())
            .collect();
        (1..=neg.len()).all(|k| {
            let minor: Vec<Vec<Rational>> = neg[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(minor).is_positive()
        })
    }
}

/// Exact determinant by fraction-field Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let v = &f * &m[c][k];
                m[r][k] -= v;
            }
        }
    }
    det
}

/// Solves `a x = b` for a nonsingular square `a`.
fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        let inv = m[c][c].recip();
        for k in c..=n {
            m[c][k] = &m[c][k] * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in c..=n {
                    let v = &f * &m[c][k];
                    m[r][k] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// A fixed class whose intersection numbers are known: its self-intersection
/// and its pairing with every curve of the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambient {
    pub self_intersection: Rational,
    pub pairings: Vec<Rational>,
}

impl Ambient {
    pub fn scale(&self, k: &Rational) -> Ambient {
        Ambient {
            self_intersection: &self.self_intersection * k * k,
            pairings: self.pairings.iter().map(|p| p * k).collect(),
        }
    }
}

/// `ambient + Σ c_i(v) C_i` with every `c_i` affine in `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorExpr {
    pub ambient: Option<Ambient>,
    pub coeffs: Vec<Affine>,
}

impl DivisorExpr {
    pub fn zero(n: usize) -> Self {
        DivisorExpr { ambient: None, coeffs: vec![Affine::zero(); n] }
    }

    /// The curve `C_i` with constant coefficient 1.
    pub fn curve(n: usize, i: usize) -> Self {
        let mut d = DivisorExpr::zero(n);
        d.coeffs[i] = Affine::constant(Rational::one());
        d
    }

    pub fn with_ambient(ambient: Ambient, coeffs: Vec<Affine>) -> Self {
        DivisorExpr { ambient: Some(ambient), coeffs }
    }

    pub fn coefficient(&self, i: usize) -> &Affine {
        &self.coeffs[i]
    }

    /// Same class at a fixed `v`: every coefficient becomes constant.
    pub fn at(&self, v: &Rational) -> DivisorExpr {
        DivisorExpr {
            ambient: self.ambient.clone(),
            coeffs: self.coeffs.iter().map(|c| Affine::constant(c.eval(v))).collect(),
        }
    }

    /// `self - Σ x_i C_i` (ambient part kept).
    pub fn minus_curves(&self, x: &[Affine]) -> DivisorExpr {
        DivisorExpr {
            ambient: self.ambient.clone(),
            coeffs: self.coeffs.iter().zip(x).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Intersection number of two divisor expressions as a polynomial in `v`.
pub fn pair(model: &SurfaceModel, d1: &DivisorExpr, d2: &DivisorExpr) -> Result<Poly, SurfaceError> {
    let n = model.len();
    if d1.coeffs.len() != n || d2.coeffs.len() != n {
        return Err(SurfaceError::ModelMismatch);
    }
    for a in [&d1.ambient, &d2.ambient].into_iter().flatten() {
        if a.pairings.len() != n {
            return Err(SurfaceError::ModelMismatch);
        }
    }
    let mut out = Poly::zero();
    if let (Some(a1), Some(a2)) = (&d1.ambient, &d2.ambient) {
        if a1 != a2 {
            return Err(SurfaceError::ModelMismatch);
        }
        out = Poly::constant(a1.self_intersection.clone());
    }
    if let Some(a) = &d1.ambient {
        for (c, p) in d2.coeffs.iter().zip(&a.pairings) {
            out = &out + &c.to_poly().scale(p);
        }
    }
    if let Some(a) = &d2.ambient {
        for (c, p) in d1.coeffs.iter().zip(&a.pairings) {
            out = &out + &c.to_poly().scale(p);
        }
    }
    for i in 0..n {
        for j in 0..n {
            let g = &model.gram[i][j];
            if g.is_zero() || d1.coeffs[i].is_zero() || d2.coeffs[j].is_zero() {
                continue;
            }
            out = &out + &(&d1.coeffs[i].to_poly() * &d2.coeffs[j].to_poly()).scale(g);
        }
    }
    Ok(out)
}

/// One regime `[start, end]` of the decomposition `D(v) = P(v) + N(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiPiece {
    pub start: Rational,
    pub end: Rational,
    pub positive: DivisorExpr,
    pub negative: DivisorExpr,
    pub support: Vec<usize>,
}

/// The full piecewise Zariski decomposition of a family on `[0, v_max]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiPieces {
    pub model: SurfaceModel,
    pub breakpoints: Vec<Rational>,
    pub pieces: Vec<ZariskiPiece>,
}

impl ZariskiPieces {
    pub fn end(&self) -> &Rational {
        self.breakpoints.last().unwrap()
    }

    /// Piece used at `v` (left piece at interior breakpoints).
    pub fn piece_at(&self, v: &Rational) -> Option<&ZariskiPiece> {
        self.pieces.iter().find(|p| &p.start <= v && v <= &p.end)
    }

    /// `(P(v), N(v))` with constant coefficients.
    pub fn at(&self, v: &Rational) -> Option<(DivisorExpr, DivisorExpr)> {
        self.piece_at(v).map(|p| (p.positive.at(v), p.negative.at(v)))
    }

    /// `v ↦ P(v)·C_i` as a piecewise polynomial.
    pub fn positive_pairing(&self, i: usize) -> PiecewisePoly {
        let c = DivisorExpr::curve(self.model.len(), i);
        self.piecewise(|p| pair(&self.model, &p.positive, &c).expect("same model"))
    }

    /// `v ↦` coefficient of `C_i` in `N(v)`.
    pub fn negative_coefficient(&self, i: usize) -> PiecewisePoly {
        self.piecewise(|p| p.negative.coefficient(i).to_poly())
    }

    fn piecewise(&self, f: impl Fn(&ZariskiPiece) -> Poly) -> PiecewisePoly {
        PiecewisePoly::new(self.breakpoints.clone(), self.pieces.iter().map(f).collect())
            .expect("breakpoints strictly increasing")
    }
}

/// Smallest root of `p` in `[from, ∞)` (rational, or an error if irrational).
fn first_root_from(p: &Poly, from: &Rational) -> Result<Option<Rational>, SurfaceError> {
    let Some(deg) = p.degree() else {
        return Ok(None);
    };
    if deg == 0 {
        return Ok(None);
    }
    // Cauchy bound on the absolute value of every root.
    let lead = p.leading();
    let bound = p.coeffs()[..deg]
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
        + Rational::one();
    if &bound < from {
        return Ok(None);
    }
    Ok(roots_in_interval(p, from, &bound)?.into_iter().next())
}

/// Runs support growth from `v = 0` until the volume vanishes or `limit`.
fn support_growth(
    model: &SurfaceModel,
    d: &DivisorExpr,
    limit: Option<&Rational>,
) -> Result<(ZariskiPieces, bool), SurfaceError> {
    let n = model.len();
    let zero = Rational::zero();
    for i in 0..n {
        let pc = pair(model, d, &DivisorExpr::curve(n, i))?;
        if pc.eval(&zero).is_negative() {
            return Err(SurfaceError::NotPseudoEffective(format!(
                "D(0)·{} = {} < 0",
                model.curves[i],
                format_rational(&pc.eval(&zero))
            )));
        }
    }
    let mut support: Vec<usize> = Vec::new();
    let mut v = zero.clone();
    let mut breakpoints = vec![zero.clone()];
    let mut pieces = Vec::new();
    loop {
        if !support.is_empty() && !model.is_negative_definite(&support) {
            let names = support.iter().map(|&i| model.curves[i].clone()).collect();
            return Err(SurfaceError::IndefiniteSupport(names));
        }
        // Coefficients x_j(v) of N solve (P·C_j) = 0 for j in the support.
        let gram = model.sub_gram(&support);
        let rhs: Vec<Poly> = support
            .iter()
            .map(|&j| pair(model, d, &DivisorExpr::curve(n, j)))
            .collect::<Result<_, _>>()?;
        let c0: Vec<Rational> = rhs.iter().map(|p| p.coeff(0)).collect();
        let c1: Vec<Rational> = rhs.iter().map(|p| p.coeff(1)).collect();
        let x0 = solve(&gram, &c0).unwrap_or_default();
        let x1 = solve(&gram, &c1).unwrap_or_default();
        let mut ncoeffs = vec![Affine::zero(); n];
        for (k, &j) in support.iter().enumerate() {
            ncoeffs[j] = Affine::new(x0[k].clone(), x1[k].clone());
        }
        let positive = d.minus_curves(&ncoeffs);
        let negative = DivisorExpr { ambient: None, coeffs: ncoeffs };
        let vol = pair(model, &positive, &positive)?;

        let mut entering: Vec<(Rational, usize)> = Vec::new();
        for i in (0..n).filter(|i| !support.contains(i)) {
            let pc = pair(model, &positive, &DivisorExpr::curve(n, i))?;
            if pc.coeff(1).is_negative() {
                if let Some(r) = first_root_from(&pc, &v)? {
                    entering.push((r, i));
                }
            }
        }
        let next_entry = entering.iter().map(|(r, _)| r.clone()).min();
        if next_entry.as_ref() == Some(&v) && vol.eval(&v).is_positive() {
            // A curve already pairs to zero and is about to turn negative.
            support.extend(entering.iter().filter(|(r, _)| r == &v).map(|(_, i)| *i));
            support.sort();
            continue;
        }
        let vol_root = match &next_entry {
            Some(e) => roots_in_interval(&vol, &v, e)?.into_iter().find(|r| r > &v),
            None => first_root_from(&vol, &v)?.filter(|r| r > &v),
        };
        let mut end = match (&vol_root, &next_entry) {
            (Some(t), Some(e)) => t.min(e).clone(),
            (Some(t), None) => t.clone(),
            (None, Some(e)) => e.clone(),
            (None, None) => match limit {
                Some(l) => l.clone(),
                None => return Err(SurfaceError::Unbounded),
            },
        };
        let mut done = vol_root.as_ref() == Some(&end);
        if let Some(l) = limit {
            if l <= &end {
                end = l.clone();
                done = true;
            }
        }
        pieces.push(ZariskiPiece {
            start: v.clone(),
            end: end.clone(),
            positive,
            negative,
            support: support.clone(),
        });
        breakpoints.push(end.clone());
        let reached_zero = vol.eval(&end).is_zero();
        if done {
            return Ok((ZariskiPieces { model: model.clone(), breakpoints, pieces }, reached_zero));
        }
        support.extend(entering.iter().filter(|(r, _)| r == &end).map(|(_, i)| *i));
        support.sort();
        v = end;
    }
}

/// The smallest `v` at which the volume of the running decomposition of `d` vanishes.
pub fn pseudo_effective_threshold(model: &SurfaceModel, d: &DivisorExpr) -> Result<Rational, SurfaceError> {
    let (z, _) = support_growth(model, d, None)?;
    Ok(z.end().clone())
}

/// Zariski decomposition of `d(v)` for `v ∈ [0, v_max]`, `0 < v_max ≤ τ`.
pub fn zariski_decompose(
    model: &SurfaceModel,
    d: &DivisorExpr,
    v_max: &Rational,
) -> Result<ZariskiPieces, SurfaceError> {
    if !v_max.is_positive() {
        return Err(SurfaceError::NotPseudoEffective("v_max must be positive".into()));
    }
    let (z, _) = support_growth(model, d, Some(v_max))?;
    if z.end() < v_max {
        return Err(SurfaceError::NotPseudoEffective(format!(
            "volume vanishes at {} before v_max = {}",
            format_rational(z.end()),
            format_rational(v_max)
        )));
    }
    Ok(z)
}

/// `v ↦ P(v)²` on the decomposition's domain.
pub fn volume_function(z: &ZariskiPieces) -> PiecewisePoly {
    z.piecewise(|p| pair(&z.model, &p.positive, &p.positive).expect("same model"))
}

/// Checks the decomposition properties on `samples` points per piece and
/// returns a description of every violation.
pub fn audit(z: &ZariskiPieces, samples: u32) -> Vec<String> {
    let model = &z.model;
    let n = model.len();
    let mut out = Vec::new();
    let vol = volume_function(z);
    let mut prev_vol: Option<Rational> = None;
    for (k, piece) in z.pieces.iter().enumerate() {
        if !piece.support.is_empty() && !model.is_negative_definite(&piece.support) {
            out.push(format!("piece {k}: support not negative definite"));
        }
        let span = &piece.end - &piece.start;
        let vs: Vec<Rational> = (0..=samples.max(1))
            .map(|t| &piece.start + &span * Rational::new(t.into(), samples.max(1).into()))
            .collect();
        for i in 0..n {
            let pc = match pair(model, &piece.positive, &DivisorExpr::curve(n, i)) {
                Ok(p) => p,
                Err(e) => {
                    out.push(format!("piece {k}: {e}"));
                    continue;
                }
            };
            if piece.support.contains(&i) && !pc.is_zero() {
                out.push(format!("piece {k}: P·{} = {} on the support", model.curves[i], pc));
            }
            for v in &vs {
                if pc.eval(v).is_negative() {
                    out.push(format!("piece {k}: P·{} < 0 at v = {}", model.curves[i], format_rational(v)));
                }
                if piece.negative.coefficient(i).eval(v).is_negative() {
                    out.push(format!("piece {k}: N has negative {}-coefficient", model.curves[i]));
                }
            }
            let c = piece.negative.coefficient(i);
            if c.eval(&piece.start) > c.eval(&piece.end) {
                out.push(format!("piece {k}: N coefficient of {} decreases", model.curves[i]));
            }
            if k > 0 {
                let before = z.pieces[k - 1].negative.coefficient(i).eval(&piece.start);
                if before > c.eval(&piece.start) {
                    out.push(format!("breakpoint {k}: N coefficient of {} drops", model.curves[i]));
                }
            }
        }
        let p = &vol.pieces()[k];
        if k > 0 && vol.pieces()[k - 1].eval(&piece.start) != p.eval(&piece.start) {
            out.push(format!("volume discontinuous at {}", format_rational(&piece.start)));
        }
        for v in &vs {
            let x = p.eval(v);
            if let Some(prev) = &prev_vol {
                if &x > prev {
                    out.push(format!("volume increases at v = {}", format_rational(v)));
                }
            }
            prev_vol = Some(x);
        }
    }
    if let Some(last) = vol.pieces().last() {
        if !last.eval(z.end()).is_zero() {
            out.push(format!("volume {} at the end of the range", format_rational(&last.eval(z.end()))));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    /// Ē and L̄ for a tangency blowup; the ambient class is `a·σ*H`.
    fn two_curve(ee: Rational, el: Rational, ll: Rational, m_l: Rational) -> SurfaceModel {
        let _ = m_l;
        SurfaceModel::new(
            vec!["E".into(), "L".into()],
            vec![vec![ee, el.clone()], vec![el, ll]],
        )
        .unwrap()
    }

    fn family(model: &SurfaceModel, a: Rational, h_pairings: Vec<Rational>) -> DivisorExpr {
        let amb = Ambient { self_intersection: Rational::one(), pairings: h_pairings }.scale(&a);
        let mut coeffs = vec![Affine::zero(); model.len()];
        coeffs[0] = Affine::new(Rational::zero(), int(-1));
        DivisorExpr::with_ambient(amb, coeffs)
    }

    fn conic() -> (SurfaceModel, DivisorExpr) {
        let m = two_curve(rat(-1, 2), int(1), int(-1), int(2));
        let d = family(&m, int(3), vec![int(0), int(1)]);
        (m, d)
    }

    fn a2(a: Rational) -> (SurfaceModel, DivisorExpr) {
        let m = two_curve(rat(-1, 6), rat(1, 2), rat(-1, 2), int(3));
        let d = family(&m, a, vec![int(0), int(1)]);
        (m, d)
    }

    #[test]
    fn conic_self_pairing() {
        let (m, d) = conic();
        assert_eq!(pair(&m, &d, &d).unwrap(), Poly::new(vec![int(9), int(0), rat(-1, 2)]));
        assert_eq!(pair(&m, &d, &DivisorExpr::zero(2)).unwrap(), Poly::zero());
    }

    #[test]
    fn a2_table_entry() {
        let (m, _) = a2(int(1));
        let e = DivisorExpr::curve(2, 0);
        let l = DivisorExpr::curve(2, 1);
        assert_eq!(pair(&m, &e, &l).unwrap(), Poly::constant(rat(1, 2)));
        assert_eq!(pair(&m, &l, &e).unwrap(), pair(&m, &e, &l).unwrap());
    }

    #[test]
    fn mismatched_ambients_rejected() {
        let (m, d) = conic();
        let other = family(&m, int(2), vec![int(0), int(1)]);
        assert_eq!(pair(&m, &d, &other), Err(SurfaceError::ModelMismatch));
        assert_eq!(pair(&m, &d, &DivisorExpr::zero(3)), Err(SurfaceError::ModelMismatch));
    }

    #[test]
    fn conic_decomposition() {
        let (m, d) = conic();
        let tau = pseudo_effective_threshold(&m, &d).unwrap();
        assert_eq!(tau, int(6));
        let z = zariski_decompose(&m, &d, &tau).unwrap();
        assert_eq!(z.breakpoints, vec![int(0), int(3), int(6)]);
        assert!(z.pieces[0].negative.coeffs.iter().all(Affine::is_zero));
        assert_eq!(z.pieces[1].negative.coefficient(1), &Affine::new(int(-3), int(1)));
        assert_eq!(z.pieces[1].support, vec![1]);
    }

    #[test]
    fn ordinary_blowup_single_piece() {
        let m = SurfaceModel::new(vec!["E".into()], vec![vec![int(-1)]]).unwrap();
        let d = family(&m, int(3), vec![int(0)]);
        let tau = pseudo_effective_threshold(&m, &d).unwrap();
        assert_eq!(tau, int(3));
        let z = zariski_decompose(&m, &d, &tau).unwrap();
        assert_eq!(z.pieces.len(), 1);
        let (p, n) = z.at(&int(0)).unwrap();
        assert_eq!(p, d.at(&int(0)));
        assert_eq!(n, DivisorExpr { ambient: None, coeffs: vec![Affine::zero()] });
    }

    #[test]
    fn a2_volume_at_unit_scale() {
        let (m, d) = a2(int(1));
        assert_eq!(pseudo_effective_threshold(&m, &d).unwrap(), int(3));
        let z = zariski_decompose(&m, &d, &int(3)).unwrap();
        let vol = volume_function(&z);
        assert_eq!(vol.breakpoints(), &[int(0), int(2), int(3)]);
        assert_eq!(vol.pieces()[0], Poly::new(vec![int(1), int(0), rat(-1, 6)]));
        assert_eq!(vol.pieces()[1], Poly::new(vec![int(3), int(-2), rat(1, 3)]));
        assert!(vol.is_continuous());
        assert_eq!(vol.eval(&int(0)), Some(int(1)));
        assert_eq!(vol.eval(&int(3)), Some(int(0)));
    }

    #[test]
    fn truncated_decomposition() {
        let (m, d) = conic();
        let z = zariski_decompose(&m, &d, &int(2)).unwrap();
        assert_eq!(z.breakpoints, vec![int(0), int(2)]);
        assert!(zariski_decompose(&m, &d, &int(7)).is_err());
    }

    #[test]
    fn zero_pairing_line_stops_at_threshold() {
        // L̄² = 0: the line would enter exactly where the volume vanishes.
        let m = two_curve(rat(-1, 4), rat(1, 2), int(0), int(2));
        let d = family(&m, int(1), vec![int(0), int(1)]);
        let z = zariski_decompose(&m, &d, &int(2)).unwrap();
        assert_eq!(z.pieces.len(), 1);
        assert_eq!(pseudo_effective_threshold(&m, &d).unwrap(), int(2));
    }

    #[test]
    fn errors_surface() {
        let m = SurfaceModel::new(vec!["E".into()], vec![vec![int(-1)]]).unwrap();
        let mut bad = family(&m, int(3), vec![int(0)]);
        bad.coeffs[0] = Affine::new(int(1), int(-1));
        assert!(matches!(
            pseudo_effective_threshold(&m, &bad),
            Err(SurfaceError::NotPseudoEffective(_))
        ));
        // a positive curve never bounds the family
        let pos = SurfaceModel::new(vec!["E".into()], vec![vec![int(1)]]).unwrap();
        let mut d = family(&pos, int(3), vec![int(0)]);
        d.coeffs[0] = Affine::new(int(0), int(1));
        assert_eq!(pseudo_effective_threshold(&pos, &d), Err(SurfaceError::Unbounded));
        // a support with L̄² > 0 is rejected
        let m = two_curve(rat(-1, 4), int(1), int(1), int(2));
        let d = family(&m, int(3), vec![int(0), int(1)]);
        assert!(matches!(
            pseudo_effective_threshold(&m, &d),
            Err(SurfaceError::IndefiniteSupport(_))
        ));
    }

    #[test]
    fn irrational_threshold_is_reported() {
        let m = SurfaceModel::new(vec!["E".into()], vec![vec![int(-1)]]).unwrap();
        let d = family(&m, int(1), vec![int(0)]);
        let mut d2 = d.clone();
        d2.ambient = Some(Ambient { self_intersection: int(2), pairings: vec![int(0)] });
        assert!(matches!(
            pseudo_effective_threshold(&m, &d2),
            Err(SurfaceError::IrrationalBreakpoint(_))
        ));
    }

    #[test]
    fn negative_definiteness() {
        let m = two_curve(rat(-1, 6), rat(1, 2), rat(-1, 2), int(3));
        assert!(m.is_negative_definite(&[0]));
        assert!(m.is_negative_definite(&[1]));
        assert!(!m.is_negative_definite(&[0, 1]));
        assert_eq!(determinant(vec![vec![int(2), int(1)], vec![int(1), int(1)]]), int(1));
    }

    #[test]
    fn asymmetric_gram_rejected() {
        assert!(SurfaceModel::new(
            vec!["E".into(), "L".into()],
            vec![vec![int(-1), int(1)], vec![int(0), int(-1)]]
        )
        .is_err());
    }
}

//! Finitely supported impulses, exponential-polynomial sequences, convolution
//! and the windowed annihilation oracle.

use std::collections::BTreeMap;

use crate::apolar::{ortho_homog_basis, DInvariantSpace};
use crate::error::{Error, Result};
use crate::mpoly::{apply_poly_diff, LaurentPoly, MultiIndex, Poly, Tolerance, C64};

pub(crate) fn theta_inverse(theta: &[C64]) -> Result<Vec<C64>> {
    theta
        .iter()
        .enumerate()
        .map(|(j, t)| {
            if *t == C64::new(0.0, 0.0) {
                Err(Error::ZeroCoordinate(j))
            } else {
                Ok(t.inv())
            }
        })
        .collect()
}

fn check_finite_point(theta: &[C64]) -> Result<()> {
    if theta.iter().all(|t| t.re.is_finite() && t.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// A finitely supported sequence `h : Z^s → C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Impulse {
    taps: LaurentPoly,
}

impl Impulse {
    pub fn new<I>(dim: usize, taps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C64)>,
    {
        Ok(Impulse {
            taps: LaurentPoly::from_terms(dim, taps)?,
        })
    }

    pub fn from_real(dim: usize, taps: &[(&[i64], f64)]) -> Result<Self> {
        Ok(Impulse {
            taps: LaurentPoly::from_real(dim, taps)?,
        })
    }

    pub fn delta(at: MultiIndex) -> Self {
        Impulse {
            taps: LaurentPoly::monomial(at, C64::new(1.0, 0.0)),
        }
    }

    /// The impulse whose symbol is `f`.
    pub fn from_symbol(f: &LaurentPoly) -> Self {
        Impulse { taps: f.clone() }
    }

    pub fn dim(&self) -> usize {
        self.taps.dim()
    }

    pub fn taps(&self) -> &BTreeMap<MultiIndex, C64> {
        self.taps.terms()
    }

    pub fn tap(&self, at: &MultiIndex) -> C64 {
        self.taps.coeff(at)
    }

    pub fn is_zero(&self) -> bool {
        self.taps.is_zero()
    }

    pub fn l1_norm(&self) -> f64 {
        self.taps.l1_norm()
    }

    /// `h*(z) = Σ h(α) z^α`.
    pub fn symbol(&self) -> LaurentPoly {
        self.taps.clone()
    }
}

pub fn symbol(h: &Impulse) -> LaurentPoly {
    h.symbol()
}

/// `g ∗ h`.
pub fn convolve_impulses(g: &Impulse, h: &Impulse) -> Result<Impulse> {
    let mut out = LaurentPoly::zero(g.dim());
    if g.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: h.dim(),
        });
    }
    for (a, x) in g.taps() {
        for (b, y) in h.taps() {
            out.add_term(a.add(b), x * y);
        }
    }
    Ok(Impulse { taps: out })
}

/// Anything that can be sampled on `Z^s`.
pub trait Sequence {
    fn dim(&self) -> usize;
    fn value(&self, alpha: &MultiIndex) -> Result<C64>;
}

/// `Σ_θ p_θ(α) θ^α` with pairwise distinct `θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPolySeq {
    dim: usize,
    terms: Vec<(Vec<C64>, Poly)>,
}

impl ExpPolySeq {
    pub fn new(dim: usize, terms: Vec<(Vec<C64>, Poly)>) -> Result<Self> {
        for (i, (theta, p)) in terms.iter().enumerate() {
            if theta.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: theta.len(),
                });
            }
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            check_finite_point(theta)?;
            theta_inverse(theta)?;
            p.require_polynomial("exponential-polynomial coefficient")?;
            if let Some(j) = terms[..i].iter().position(|(t, _)| t == theta) {
                return Err(Error::DuplicateZero {
                    first: j,
                    second: i,
                });
            }
        }
        Ok(ExpPolySeq { dim, terms })
    }

    /// `p · e_θ`.
    pub fn single(theta: Vec<C64>, p: Poly) -> Result<Self> {
        Self::new(theta.len(), vec![(theta, p)])
    }

    pub fn exponential(theta: Vec<C64>) -> Result<Self> {
        let dim = theta.len();
        Self::single(theta, Poly::one(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<C64>, Poly)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest polynomial degree over the terms (0 for an empty sequence).
    pub fn degree(&self) -> i64 {
        self.terms
            .iter()
            .filter_map(|(_, p)| p.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn value_at(&self, alpha: &MultiIndex) -> Result<C64> {
        if alpha.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: alpha.dim(),
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for (theta, p) in &self.terms {
            acc += p.eval_int(alpha)? * alpha.pow(theta)?;
        }
        Ok(acc)
    }
}

impl Sequence for ExpPolySeq {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, alpha: &MultiIndex) -> Result<C64> {
        self.value_at(alpha)
    }
}

/// Box `lower ≤ α ≤ upper` in `Z^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    lower: MultiIndex,
    upper: MultiIndex,
}

impl Window {
    pub fn new(lower: MultiIndex, upper: MultiIndex) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::DimensionMismatch {
                expected: lower.dim(),
                found: upper.dim(),
            });
        }
        if !lower.le(&upper) {
            return Err(Error::InvalidWindow(format!(
                "{lower} is not below {upper}"
            )));
        }
        Ok(Window { lower, upper })
    }

    /// `{0, …, n}^s`.
    pub fn cube(dim: usize, n: i64) -> Result<Self> {
        Self::new(MultiIndex::zeros(dim), MultiIndex::new(vec![n; dim]))
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &MultiIndex {
        &self.lower
    }

    pub fn upper(&self) -> &MultiIndex {
        &self.upper
    }

    pub fn contains(&self, alpha: &MultiIndex) -> bool {
        alpha.dim() == self.dim() && self.lower.le(alpha) && alpha.le(&self.upper)
    }

    pub fn len(&self) -> usize {
        self.lower
            .entries()
            .iter()
            .zip(self.upper.entries())
            .map(|(l, u)| (u - l + 1) as usize)
            .product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All points, first coordinate varying fastest.
    pub fn points(&self) -> Vec<MultiIndex> {
        let dim = self.dim();
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self.lower.entries().to_vec();
        loop {
            out.push(MultiIndex::new(cur.clone()));
            let mut j = 0;
            loop {
                if j == dim {
                    return out;
                }
                if cur[j] < self.upper.entries()[j] {
                    cur[j] += 1;
                    break;
                }
                cur[j] = self.lower.entries()[j];
                j += 1;
            }
        }
    }
}

/// Finitely many samples of a sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowedSeq {
    dim: usize,
    samples: BTreeMap<MultiIndex, C64>,
}

impl WindowedSeq {
    pub fn new(dim: usize) -> Self {
        WindowedSeq {
            dim,
            samples: BTreeMap::new(),
        }
    }

    /// Samples `seq` on every point of `w`.
    pub fn sample(seq: &impl Sequence, w: &Window) -> Result<Self> {
        let mut out = Self::new(w.dim());
        for a in w.points() {
            let v = seq.value(&a)?;
            out.insert(a, v);
        }
        Ok(out)
    }

    pub fn insert(&mut self, at: MultiIndex, v: C64) {
        self.samples.insert(at, v);
    }

    pub fn samples(&self) -> &BTreeMap<MultiIndex, C64> {
        &self.samples
    }

    pub fn get(&self, at: &MultiIndex) -> Option<C64> {
        self.samples.get(at).copied()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &WindowedSeq) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, v) in &self.samples {
            worst = worst.max((v - other.get(k).unwrap_or_default()).norm());
        }
        for (k, v) in &other.samples {
            if !self.samples.contains_key(k) {
                worst = worst.max(v.norm());
            }
        }
        worst
    }
}

impl Sequence for WindowedSeq {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, alpha: &MultiIndex) -> Result<C64> {
        self.get(alpha)
            .ok_or_else(|| Error::Coverage(alpha.entries().to_vec()))
    }
}

/// `(h ∗ c)(α) = Σ_β h(β) c(α − β)` on `w`.
pub fn convolve(h: &Impulse, c: &impl Sequence, w: &Window) -> Result<WindowedSeq> {
    for d in [c.dim(), w.dim()] {
        if d != h.dim() {
            return Err(Error::DimensionMismatch {
                expected: h.dim(),
                found: d,
            });
        }
    }
    let mut out = WindowedSeq::new(h.dim());
    for a in w.points() {
        let mut acc = C64::new(0.0, 0.0);
        for (b, v) in h.taps() {
            acc += v * c.value(&a.sub(b))?;
        }
        out.insert(a, acc);
    }
    Ok(out)
}

/// `{0, …, D}^s` with `D` the largest coefficient degree of `seq`: the
/// residual of each `θ`-term is `θ^α` times a polynomial of degree `≤ D`,
/// which vanishes identically once it vanishes on this grid.
pub fn certified_window(_h: &[Impulse], seq: &ExpPolySeq) -> Window {
    certified_window_padded(seq, 0)
}

pub fn certified_window_padded(seq: &ExpPolySeq, pad: usize) -> Window {
    Window::cube(seq.dim(), seq.degree() + pad as i64).expect("nonnegative extent")
}

/// Windowed residual of a filter family against an exponential-polynomial
/// sequence, split by `θ`-term.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelResidual {
    /// Largest `|h ∗ (p_θ e_θ)(α)| / (1 + |θ^α|)`: the normalized residual.
    pub max: f64,
    /// Largest `Σ|summands| / (1 + |θ^α|)` behind the residual.
    pub scale: f64,
    pub per_theta: Vec<f64>,
}

impl KernelResidual {
    /// `max` relative to the magnitude of the summands; used for
    /// certification so that large taps do not trip the tolerance.
    pub fn relative(&self) -> f64 {
        self.max / self.scale.max(1.0)
    }

    pub fn certified(&self, tol: f64) -> bool {
        self.max <= tol * self.scale.max(1.0)
    }
}

fn term_residual(
    h: &Impulse,
    theta: &[C64],
    p: &Poly,
    w: &Window,
    lambda_shift: Option<(C64, &MultiIndex)>,
) -> Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for a in w.points() {
        let mut acc = C64::new(0.0, 0.0);
        let mut mag = 0.0;
        for (b, v) in h.taps() {
            let x = a.sub(b);
            let t = v * p.eval_int(&x)? * x.pow(theta)?;
            acc += t;
            mag += t.norm();
        }
        if let Some((lambda, shift)) = lambda_shift {
            let x = a.add(shift);
            let t = lambda * p.eval_int(&x)? * x.pow(theta)?;
            acc -= t;
            mag += t.norm();
        }
        let denom = 1.0 + a.pow(theta)?.norm();
        worst = worst.max(acc.norm() / denom);
        scale = scale.max(mag / denom);
    }
    Ok((worst, scale))
}

fn check_family(h: &[Impulse], dim: usize) -> Result<()> {
    for f in h {
        if f.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: f.dim(),
            });
        }
    }
    Ok(())
}

pub fn kernel_residual(h: &[Impulse], seq: &ExpPolySeq) -> Result<KernelResidual> {
    kernel_residual_on_window(h, seq, &certified_window(h, seq))
}

pub fn kernel_residual_on_window(
    h: &[Impulse],
    seq: &ExpPolySeq,
    w: &Window,
) -> Result<KernelResidual> {
    check_family(h, seq.dim())?;
    let mut out = KernelResidual {
        max: 0.0,
        scale: 0.0,
        per_theta: Vec::with_capacity(seq.terms().len()),
    };
    for (theta, p) in seq.terms() {
        let mut r: f64 = 0.0;
        for f in h {
            let (v, s) = term_residual(f, theta, p, w, None)?;
            r = r.max(v);
            out.scale = out.scale.max(s);
        }
        out.per_theta.push(r);
        out.max = out.max.max(r);
    }
    Ok(out)
}

/// One dual condition `q(D) h*(θ⁻¹) = λ (q(D) z^{-α_h})(θ⁻¹)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCheck {
    pub element: usize,
    pub lhs: C64,
    pub rhs: C64,
    pub violation: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenReport {
    pub checks: Vec<EigenCheck>,
    pub max_violation: f64,
    pub pass: bool,
}

/// Eigen conditions for `h ∗ c = λ c(· + α_h)` on `P_θ e_θ`, checked against
/// the orthonormal homogeneous basis of `Q`. Since `e_θ(· + α_h) = θ^{α_h} e_θ`
/// and `θ^{α_h} = (z^{-α_h})(θ⁻¹)`, the shifted monomial carries `-α_h`.
pub fn eigen_conditions(
    h: &Impulse,
    theta: &[C64],
    q: &DInvariantSpace,
    lambda: C64,
    alpha_h: &MultiIndex,
    tol: Tolerance,
) -> Result<EigenReport> {
    let dim = h.dim();
    for d in [theta.len(), q.dim(), alpha_h.dim()] {
        if d != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: d,
            });
        }
    }
    check_finite_point(theta)?;
    let point = theta_inverse(theta)?;
    let sym = h.symbol();
    let shifted = LaurentPoly::monomial(
        MultiIndex::new(alpha_h.entries().iter().map(|a| -a).collect()),
        lambda,
    );
    let ortho = ortho_homog_basis(q)?;
    let mut checks = Vec::with_capacity(ortho.len());
    for (i, qe) in ortho.elements().iter().enumerate() {
        let dh = apply_poly_diff(qe, &sym)?;
        let ds = apply_poly_diff(qe, &shifted)?;
        let lhs = dh.eval(&point)?;
        let rhs = ds.eval(&point)?;
        let scale = dh.eval_abs(&point)? + ds.eval_abs(&point)?;
        let violation = (lhs - rhs).norm();
        let bound = tol.bound(scale);
        checks.push(EigenCheck {
            element: i,
            lhs,
            rhs,
            violation,
            bound,
            pass: violation <= bound,
        });
    }
    let max_violation = checks.iter().map(|c| c.violation).fold(0.0, f64::max);
    let pass = checks.iter().all(|c| c.pass);
    Ok(EigenReport {
        checks,
        max_violation,
        pass,
    })
}

/// `max |h ∗ c − λ c(· + α_h)|` over the certified window, per `θ`-term and
/// normalized as in [`kernel_residual`].
pub fn eigen_residual(
    h: &Impulse,
    lambda: C64,
    alpha_h: &MultiIndex,
    seq: &ExpPolySeq,
) -> Result<KernelResidual> {
    check_family(std::slice::from_ref(h), seq.dim())?;
    if alpha_h.dim() != seq.dim() {
        return Err(Error::DimensionMismatch {
            expected: seq.dim(),
            found: alpha_h.dim(),
        });
    }
    let w = certified_window(std::slice::from_ref(h), seq);
    let mut out = KernelResidual {
        max: 0.0,
        scale: 0.0,
        per_theta: Vec::new(),
    };
    for (theta, p) in seq.terms() {
        let (v, s) = term_residual(h, theta, p, &w, Some((lambda, alpha_h)))?;
        out.per_theta.push(v);
        out.max = out.max.max(v);
        out.scale = out.scale.max(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    fn imp1(taps: &[(i64, f64)]) -> Impulse {
        Impulse::new(
            1,
            taps.iter().map(|&(e, v)| (MultiIndex::new(vec![e]), r(v))),
        )
        .unwrap()
    }

    fn idx(e: &[i64]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    fn x1() -> Poly {
        Poly::var(1, 0)
    }

    #[test]
    fn symbol_examples() {
        let h = imp1(&[(0, 1.0), (1, -1.0)]);
        assert_eq!(
            h.symbol(),
            Poly::from_real(1, &[(&[0], 1.0), (&[1], -1.0)]).unwrap()
        );
        let h2 = convolve_impulses(&h, &h).unwrap();
        assert_eq!(h2, imp1(&[(0, 1.0), (1, -2.0), (2, 1.0)]));
        let a = Impulse::from_real(2, &[(&[0, 0], 1.0), (&[1, 0], -1.0)]).unwrap();
        let b = Impulse::from_real(2, &[(&[0, 0], 1.0), (&[0, 1], -1.0)]).unwrap();
        let ab = convolve_impulses(&a, &b).unwrap();
        let expect = Impulse::from_real(
            2,
            &[
                (&[0, 0], 1.0),
                (&[1, 0], -1.0),
                (&[0, 1], -1.0),
                (&[1, 1], 1.0),
            ],
        )
        .unwrap();
        assert_eq!(ab, expect);
        assert_eq!(ab.symbol(), &a.symbol() * &b.symbol());
    }

    #[test]
    fn convolve_examples() {
        let w = Window::new(idx(&[-3]), idx(&[5])).unwrap();
        let h = imp1(&[(0, 1.0), (1, -1.0)]);
        let ones = ExpPolySeq::exponential(vec![r(1.0)]).unwrap();
        assert_eq!(convolve(&h, &ones, &w).unwrap().max_abs(), 0.0);

        let h2 = imp1(&[(0, 1.0), (1, -2.0), (2, 1.0)]);
        let sq = ExpPolySeq::single(vec![r(1.0)], &x1() * &x1()).unwrap();
        let out = convolve(&h2, &sq, &w).unwrap();
        for v in out.samples().values() {
            assert!((v - r(2.0)).norm() < 1e-12);
        }

        let h = imp1(&[(-1, 0.5), (0, 2.0), (3, -1.5)]);
        let theta = vec![C64::new(0.8, 0.3)];
        let e = ExpPolySeq::exponential(theta.clone()).unwrap();
        let out = convolve(&h, &e, &w).unwrap();
        let factor = h.symbol().eval(&[theta[0].inv()]).unwrap();
        for (a, v) in out.samples() {
            let expect = factor * e.value_at(a).unwrap();
            assert!((v - expect).norm() <= 1e-12 * expect.norm().max(1.0));
        }
    }

    #[test]
    fn windowed_input_needs_coverage() {
        let w = Window::new(idx(&[0]), idx(&[2])).unwrap();
        let c = WindowedSeq::sample(&ExpPolySeq::exponential(vec![r(1.0)]).unwrap(), &w).unwrap();
        let h = imp1(&[(0, 1.0), (1, -1.0)]);
        assert_eq!(convolve(&h, &c, &w).unwrap_err(), Error::Coverage(vec![-1]));
        let inner = Window::new(idx(&[1]), idx(&[2])).unwrap();
        assert_eq!(convolve(&h, &c, &inner).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn window_points_cover_box() {
        let w = Window::new(idx(&[-1, 0]), idx(&[1, 2])).unwrap();
        let pts = w.points();
        assert_eq!(pts.len(), 9);
        assert_eq!(w.len(), 9);
        assert_eq!(pts[0], idx(&[-1, 0]));
        assert_eq!(pts[1], idx(&[0, 0]));
        assert!(pts.iter().all(|p| w.contains(p)));
        assert!(Window::new(idx(&[1]), idx(&[0])).is_err());
    }

    #[test]
    fn certified_window_examples() {
        let c = ExpPolySeq::exponential(vec![r(1.0), r(1.0)]).unwrap();
        assert_eq!(certified_window(&[], &c), Window::cube(2, 0).unwrap());
        let lin = ExpPolySeq::single(vec![r(0.5)], &Poly::one(1) + &x1()).unwrap();
        assert_eq!(certified_window(&[], &lin), Window::cube(1, 1).unwrap());
        let q = &Poly::var(2, 0) * &Poly::var(2, 1);
        let s = ExpPolySeq::single(vec![r(1.0), r(2.0)], q).unwrap();
        assert_eq!(certified_window(&[], &s), Window::cube(2, 2).unwrap());
    }

    #[test]
    fn kernel_residual_examples() {
        let d = imp1(&[(0, 1.0), (1, -1.0)]);
        let ones = ExpPolySeq::exponential(vec![r(1.0)]).unwrap();
        assert_eq!(kernel_residual(&[d], &ones).unwrap().max, 0.0);

        let h2 = imp1(&[(0, 1.0), (1, -2.0), (2, 1.0)]);
        let lin = ExpPolySeq::single(vec![r(1.0)], x1()).unwrap();
        assert_eq!(
            kernel_residual(std::slice::from_ref(&h2), &lin)
                .unwrap()
                .max,
            0.0
        );

        let sq = ExpPolySeq::single(vec![r(1.0)], &x1() * &x1()).unwrap();
        let res = kernel_residual(&[h2], &sq).unwrap();
        assert!((res.max - 1.0).abs() < 1e-14);
        assert_eq!(res.per_theta.len(), 1);
    }

    #[test]
    fn exp_poly_rejects_repeated_theta() {
        let t = vec![r(2.0)];
        let err = ExpPolySeq::new(1, vec![(t.clone(), Poly::one(1)), (t, x1())]).unwrap_err();
        assert_eq!(
            err,
            Error::DuplicateZero {
                first: 0,
                second: 1
            }
        );
        assert_eq!(
            ExpPolySeq::exponential(vec![r(0.0)]).unwrap_err(),
            Error::ZeroCoordinate(0)
        );
    }

    fn half_sum() -> Impulse {
        imp1(&[(0, 0.5), (1, 0.5)])
    }

    #[test]
    fn eigen_condition_examples() {
        let tol = Tolerance::default();
        let zero = idx(&[0]);
        let one = DInvariantSpace::new(vec![Poly::one(1)]).unwrap();
        let rep = eigen_conditions(&half_sum(), &[r(1.0)], &one, r(1.0), &zero, tol).unwrap();
        assert!(rep.pass);

        let lin = DInvariantSpace::new(vec![Poly::one(1), x1()]).unwrap();
        let rep = eigen_conditions(&half_sum(), &[r(1.0)], &lin, r(1.0), &zero, tol).unwrap();
        assert!(!rep.pass);
        assert!(!rep.checks[1].pass);
        assert!((rep.max_violation - 0.5).abs() < 1e-14);

        let shift = Impulse::delta(idx(&[1]));
        let theta = C64::new(0.6, -1.1);
        let rep = eigen_conditions(&shift, &[theta], &one, theta.inv(), &zero, tol).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn eigen_condition_with_shift() {
        // h ∗ c = c(· + 1) for the advance δ_{-1}, so λ = 1 with α_h = 1.
        let tol = Tolerance::default();
        let adv = Impulse::delta(idx(&[-1]));
        let q = DInvariantSpace::full(1, 2);
        let theta = [C64::new(1.3, 0.4)];
        let rep = eigen_conditions(&adv, &theta, &q, r(1.0), &idx(&[1]), tol).unwrap();
        assert!(rep.pass);
        let rep = eigen_conditions(&adv, &theta, &q, r(1.0), &idx(&[-1]), tol).unwrap();
        assert!(!rep.pass);
        let seq = ExpPolySeq::single(theta.to_vec(), &x1() * &x1()).unwrap();
        assert!(eigen_residual(&adv, r(1.0), &idx(&[1]), &seq).unwrap().max < 1e-12);
    }

    #[test]
    fn eigen_residual_examples() {
        let zero = idx(&[0]);
        let ones = ExpPolySeq::exponential(vec![r(1.0)]).unwrap();
        assert_eq!(
            eigen_residual(&half_sum(), r(1.0), &zero, &ones)
                .unwrap()
                .max,
            0.0
        );

        let theta = C64::new(-0.7, 0.9);
        let e = ExpPolySeq::exponential(vec![theta]).unwrap();
        let res = eigen_residual(&Impulse::delta(idx(&[1])), theta.inv(), &zero, &e).unwrap();
        assert!(res.max < 1e-15);

        let lin = ExpPolySeq::single(vec![r(1.0)], x1()).unwrap();
        let res = eigen_residual(&half_sum(), r(1.0), &zero, &lin).unwrap();
        assert!((res.max - 0.25).abs() < 1e-15);
    }
}

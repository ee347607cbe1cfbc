//! Sparse multivariate (Laurent) polynomials over complex double precision.
//!
//! Terms are kept in a `BTreeMap` keyed by [`MultiIndex`], whose ordering is
//! graded lexicographic, so iteration and serialization are deterministic.
//! Arithmetic prunes exact zeros only; tolerance-based comparisons live in
//! the verification routines.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest argument accepted by [`factorial`].
pub const MAX_FACTORIAL: i64 = 20;

/// Integer exponent vector. Ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<i64>);

impl MultiIndex {
    pub fn new(entries: Vec<i64>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, j: usize) -> Self {
        let mut e = vec![0; dim];
        e[j] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// Componentwise partial order.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `γ! = ∏ γ_j!`; errors on negative entries or entries above [`MAX_FACTORIAL`].
    pub fn factorial(&self) -> Result<f64> {
        self.0
            .iter()
            .try_fold(1.0, |acc, &e| Ok(acc * factorial(e)?))
    }

    /// `z^γ` by direct powers.
    pub fn pow(&self, z: &[C64]) -> Result<C64> {
        let mut acc = C64::new(1.0, 0.0);
        for (j, (&e, &zj)) in self.0.iter().zip(z).enumerate() {
            if e == 0 {
                continue;
            }
            if e < 0 && zj == C64::new(0.0, 0.0) {
                return Err(Error::ZeroCoordinate(j));
            }
            acc *= powi(zj, e);
        }
        Ok(acc)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[i64]> for MultiIndex {
    fn from(v: &[i64]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

pub fn factorial(n: i64) -> Result<f64> {
    if n < 0 {
        return Err(Error::NegativeExponent("factorial"));
    }
    if n > MAX_FACTORIAL {
        return Err(Error::Overflow(format!("{n}! exceeds {MAX_FACTORIAL}!")));
    }
    Ok((1..=n).fold(1u64, |acc, k| acc * k as u64) as f64)
}

/// Falling factorial `n (n-1) ⋯ (n-k+1)` of an integer, exact.
pub(crate) fn falling_int(n: i64, k: i64) -> Result<i128> {
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as i128)
            .ok_or_else(|| Error::Overflow(format!("falling factorial ({n})_{k}")))?;
        if acc == 0 {
            break;
        }
    }
    Ok(acc)
}

pub(crate) fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

pub(crate) fn powi(z: C64, e: i64) -> C64 {
    if e >= 0 {
        z.powu(e as u32)
    } else {
        z.inv().powu((-e) as u32)
    }
}

/// All nonnegative multi-indices of total degree ≤ `degree`, sorted graded-lex.
pub fn monomials_up_to(dim: usize, degree: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; dim];
    fn rec(j: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<MultiIndex>) {
        if j == cur.len() {
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[j] = e;
            rec(j + 1, left - e, cur, out);
        }
        cur[j] = 0;
    }
    if dim == 0 {
        return vec![MultiIndex(vec![])];
    }
    rec(0, degree as i64, &mut cur, &mut out);
    out.sort();
    out
}

/// Absolute and relative tolerance pair used by verification routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    abs: f64,
    rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        if !(abs.is_finite() && rel.is_finite() && abs > 0.0 && rel > 0.0) {
            return Err(Error::InvalidTolerance);
        }
        Ok(Tolerance { abs, rel })
    }

    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new(eps, eps)
    }

    pub fn abs(&self) -> f64 {
        self.abs
    }

    pub fn rel(&self) -> f64 {
        self.rel
    }

    /// Bound allowed for a quantity whose floating-point magnitude is `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale
    }

    pub fn accepts(&self, value: f64, scale: f64) -> bool {
        value <= self.bound(scale)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-9,
            rel: 1e-9,
        }
    }
}

/// A residual together with the magnitude of the terms that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        self.value / self.scale.max(1.0)
    }
}

/// Laurent polynomial in `dim` variables with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, C64>,
}

/// A [`LaurentPoly`] whose exponents are all nonnegative.
pub type Poly = LaurentPoly;

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: C64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::zeros(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, C64::new(1.0, 0.0))
    }

    /// The coordinate function `z_j` (0-based `j`).
    pub fn var(dim: usize, j: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, j), C64::new(1.0, 0.0))
    }

    pub fn monomial(exp: MultiIndex, c: C64) -> Self {
        let mut p = Self::zero(exp.dim());
        p.add_term(exp, c);
        p
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, summing repeated
    /// exponents and pruning exact zeros.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C64)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Convenience constructor from real coefficients.
    pub fn from_real(dim: usize, terms: &[(&[i64], f64)]) -> Result<Self> {
        Self::from_terms(
            dim,
            terms
                .iter()
                .map(|(e, c)| (MultiIndex::from(*e), C64::new(*c, 0.0))),
        )
    }

    pub(crate) fn add_term(&mut self, exp: MultiIndex, c: C64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                if c != C64::new(0.0, 0.0) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s == C64::new(0.0, 0.0) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, C64> {
        &self.terms
    }

    pub fn coeff(&self, exp: &MultiIndex) -> C64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_nonneg)
    }

    pub(crate) fn require_polynomial(&self, what: &'static str) -> Result<()> {
        if self.is_polynomial() {
            Ok(())
        } else {
            Err(Error::NegativeExponent(what))
        }
    }

    /// Maximal total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(MultiIndex::total).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(MultiIndex::total);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, k: i64) -> Self {
        LaurentPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.total() == k)
                .map(|(e, c)| (e.clone(), *c))
                .collect(),
        }
    }

    /// Homogeneous components keyed by total degree.
    pub fn homogeneous_components(&self) -> BTreeMap<i64, Self> {
        let mut out: BTreeMap<i64, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.total())
                .or_insert_with(|| Self::zero(self.dim))
                .terms
                .insert(e.clone(), *c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&MultiIndex, C64) -> C64) -> Self {
        let mut p = Self::zero(self.dim);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(e, *c));
        }
        p
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(|_, c| c.conj())
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map_coeffs(|_, a| a * c)
    }

    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference; convenient for approximate comparisons.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs_coeff()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    fn check_point(&self, z: &[C64]) -> Result<()> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), *c);
        }
        Ok(p)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), -*c);
        }
        Ok(p)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut p = Self::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                p.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(p)
    }

    /// `Σ coeff · z^γ`.
    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        self.check_point(z)?;
        let mut acc = C64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            acc += c * e.pow(z)?;
        }
        Ok(acc)
    }

    /// `Σ |coeff| · |z^γ|`, the floating-point magnitude of [`Self::eval`].
    pub fn eval_abs(&self, z: &[C64]) -> Result<f64> {
        self.check_point(z)?;
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            acc += c.norm() * e.pow(z)?.norm();
        }
        Ok(acc)
    }

    /// Evaluation at an integer point.
    pub fn eval_int(&self, alpha: &MultiIndex) -> Result<C64> {
        let z: Vec<C64> = alpha
            .entries()
            .iter()
            .map(|&a| C64::new(a as f64, 0.0))
            .collect();
        self.eval(&z)
    }

    /// `D^α f`. Works for Laurent exponents too: `d/dz z^n = n z^{n-1}`.
    pub fn diff(&self, alpha: &MultiIndex) -> Result<Self> {
        if alpha.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: alpha.dim(),
            });
        }
        if !alpha.is_nonneg() {
            return Err(Error::NegativeExponent("differentiation order"));
        }
        let mut p = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let mut factor: i128 = 1;
            for (&g, &a) in e.entries().iter().zip(alpha.entries()) {
                factor = factor
                    .checked_mul(falling_int(g, a)?)
                    .ok_or_else(|| Error::Overflow("derivative coefficient".into()))?;
                if factor == 0 {
                    break;
                }
            }
            if factor != 0 {
                p.add_term(e.sub(alpha), c * factor as f64);
            }
        }
        Ok(p)
    }

    /// `f(· + y)`, polynomials only.
    pub fn translate(&self, y: &[C64]) -> Result<Self> {
        self.check_point(y)?;
        self.require_polynomial("translation")?;
        let mut p = Self::zero(self.dim);
        for (e, c) in &self.terms {
            // expand ∏_j (x_j + y_j)^{γ_j}
            let mut partial: Vec<(Vec<i64>, C64)> = vec![(Vec::with_capacity(self.dim), *c)];
            for (j, &g) in e.entries().iter().enumerate() {
                let mut next = Vec::with_capacity(partial.len() * (g as usize + 1));
                for (exp, coef) in &partial {
                    for b in 0..=g {
                        let w = coef * binomial(g, b) * powi(y[j], g - b);
                        let mut ne = exp.clone();
                        ne.push(b);
                        next.push((ne, w));
                    }
                }
                partial = next;
            }
            for (exp, coef) in partial {
                p.add_term(MultiIndex(exp), coef);
            }
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            for (j, &k) in e.entries().iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*z{}", j + 1)?,
                    _ => write!(f, "*z{}^{}", j + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs)
            .expect("dimension mismatch in polynomial addition")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs)
            .expect("dimension mismatch in polynomial subtraction")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs)
            .expect("dimension mismatch in polynomial multiplication")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.map_coeffs(|_, c| -c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Scale(C64),
}

/// Ring operations; `Scale` ignores `g` apart from the dimension check.
pub fn poly_arith(f: &LaurentPoly, g: &LaurentPoly, op: ArithOp) -> Result<LaurentPoly> {
    match op {
        ArithOp::Add => f.checked_add(g),
        ArithOp::Sub => f.checked_sub(g),
        ArithOp::Mul => f.checked_mul(g),
        ArithOp::Scale(c) => {
            f.check_dim(g)?;
            Ok(f.scale(c))
        }
    }
}

/// `q(D) f = Σ_α q_α D^α f`.
pub fn apply_poly_diff(q: &Poly, f: &LaurentPoly) -> Result<LaurentPoly> {
    q.check_dim(f)?;
    q.require_polynomial("differential operator")?;
    let mut out = LaurentPoly::zero(f.dim);
    for (a, c) in &q.terms {
        let d = f.diff(a)?;
        for (e, v) in d.terms {
            out.add_term(e, c * v);
        }
    }
    Ok(out)
}

/// Homogeneous leading form `Λ(f)`.
pub fn leading_form(f: &LaurentPoly) -> Result<LaurentPoly> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    Ok(f.homogeneous_part(d))
}

/// `σ_θ f (z) = f(θ z)`.
pub fn scale_vars(f: &LaurentPoly, theta: &[C64]) -> Result<LaurentPoly> {
    f.check_point(theta)?;
    if let Some(j) = theta.iter().position(|t| *t == C64::new(0.0, 0.0)) {
        return Err(Error::ZeroScaling(j));
    }
    let mut out = LaurentPoly::zero(f.dim);
    for (e, c) in &f.terms {
        out.add_term(e.clone(), c * e.pow(theta)?);
    }
    Ok(out)
}

/// `σ_- f (z) = f(-z)`.
pub fn sigma_minus(f: &LaurentPoly) -> LaurentPoly {
    f.map_coeffs(|e, c| if e.total().rem_euclid(2) == 1 { -c } else { c })
}

/// `(x)_γ = ∏_j ∏_{k<γ_j} (x_j − k)`.
pub fn falling_factorial(gamma: &MultiIndex) -> Result<Poly> {
    if !gamma.is_nonneg() {
        return Err(Error::NegativeExponent("falling factorial"));
    }
    let dim = gamma.dim();
    let mut p = Poly::one(dim);
    for (j, &g) in gamma.entries().iter().enumerate() {
        for k in 0..g {
            let factor = &Poly::var(dim, j) - &Poly::constant(dim, C64::new(k as f64, 0.0));
            p = &p * &factor;
        }
    }
    Ok(p)
}

/// Splits `f = z^μ g` with `μ` the componentwise minimal exponent, so that
/// `g` is a polynomial not divisible by any coordinate.
pub fn laurent_normalize(f: &LaurentPoly) -> Result<(Poly, MultiIndex)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut mu = vec![i64::MAX; f.dim];
    for e in f.terms.keys() {
        for (m, &x) in mu.iter_mut().zip(e.entries()) {
            *m = (*m).min(x);
        }
    }
    let mu = MultiIndex(mu);
    let mut g = Poly::zero(f.dim);
    for (e, c) in &f.terms {
        g.add_term(e.sub(&mu), *c);
    }
    Ok((g, mu))
}

/// Shifts `f` by the smallest monomial making every exponent nonnegative,
/// leaving polynomials untouched (zeros at the origin are kept).
pub fn shift_to_polynomial(f: &LaurentPoly) -> LaurentPoly {
    let mut shift = vec![0i64; f.dim];
    for e in f.terms.keys() {
        for (m, &x) in shift.iter_mut().zip(e.entries()) {
            *m = (*m).min(x);
        }
    }
    let shift = MultiIndex(shift);
    let mut g = Poly::zero(f.dim);
    for (e, c) in &f.terms {
        g.add_term(e.sub(&shift), *c);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn p1(terms: &[(i64, f64)]) -> Poly {
        Poly::from_terms(
            1,
            terms.iter().map(|&(e, v)| (MultiIndex::new(vec![e]), c(v))),
        )
        .unwrap()
    }

    fn p2(terms: &[((i64, i64), f64)]) -> Poly {
        Poly::from_terms(
            2,
            terms
                .iter()
                .map(|&((a, b), v)| (MultiIndex::new(vec![a, b]), c(v))),
        )
        .unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let one_minus_z = p1(&[(0, 1.0), (1, -1.0)]);
        let sq = poly_arith(&one_minus_z, &one_minus_z, ArithOp::Mul).unwrap();
        assert_eq!(sq, p1(&[(0, 1.0), (1, -2.0), (2, 1.0)]));

        let zero = Poly::zero(1);
        assert!(poly_arith(&one_minus_z, &zero, ArithOp::Mul)
            .unwrap()
            .is_zero());

        let a = p2(&[((0, 0), 1.0), ((1, 0), -1.0)]);
        let b = p2(&[((0, 0), 1.0), ((0, 1), -1.0)]);
        let prod = poly_arith(&a, &b, ArithOp::Mul).unwrap();
        assert_eq!(
            prod,
            p2(&[((0, 0), 1.0), ((1, 0), -1.0), ((0, 1), -1.0), ((1, 1), 1.0)])
        );
        assert!(matches!(
            poly_arith(&a, &one_minus_z, ArithOp::Add),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cancellation_prunes_terms() {
        let a = p1(&[(0, 1.0), (1, 2.0)]);
        let d = poly_arith(&a, &a, ArithOp::Sub).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn evaluation_examples() {
        let f = p1(&[(0, 1.0), (1, -1.0)]);
        assert_eq!(f.eval(&[c(1.0)]).unwrap(), c(0.0));
        let g = p1(&[(-1, 1.0), (0, -1.0)]);
        assert_eq!(g.eval(&[c(2.0)]).unwrap(), c(-0.5));
        let h = p1(&[(0, 0.5), (1, 1.0), (2, 0.5)]);
        assert_eq!(h.eval(&[c(-1.0)]).unwrap(), c(0.0));
        assert_eq!(g.eval(&[c(0.0)]), Err(Error::ZeroCoordinate(0)));
    }

    #[test]
    fn differentiation_examples() {
        let x2y = p2(&[((2, 1), 1.0)]);
        assert_eq!(
            x2y.diff(&MultiIndex::new(vec![1, 0])).unwrap(),
            p2(&[((1, 1), 2.0)])
        );
        let x2 = p2(&[((2, 0), 1.0)]);
        assert!(x2.diff(&MultiIndex::new(vec![0, 1])).unwrap().is_zero());
        let xy2 = p2(&[((2, 0), 1.0), ((1, 1), 2.0), ((0, 2), 1.0)]);
        assert_eq!(
            xy2.diff(&MultiIndex::new(vec![1, 1])).unwrap(),
            p2(&[((0, 0), 2.0)])
        );
        assert!(matches!(
            x2.diff(&MultiIndex::new(vec![-1, 0])),
            Err(Error::NegativeExponent(_))
        ));
        // Laurent: d/dz z^{-2} = -2 z^{-3}
        let inv = p1(&[(-2, 1.0)]);
        assert_eq!(
            inv.diff(&MultiIndex::new(vec![1])).unwrap(),
            p1(&[(-3, -2.0)])
        );
    }

    #[test]
    fn apply_poly_diff_examples() {
        let x = Poly::var(1, 0);
        let x2 = p1(&[(2, 1.0)]);
        assert_eq!(apply_poly_diff(&x, &x2).unwrap(), p1(&[(1, 2.0)]));
        let f = p2(&[((3, 1), 2.0), ((0, 0), 1.0)]);
        assert_eq!(apply_poly_diff(&Poly::one(2), &f).unwrap(), f);
        let x_plus_y = p2(&[((1, 0), 1.0), ((0, 1), 1.0)]);
        let xy = p2(&[((1, 1), 1.0)]);
        assert_eq!(apply_poly_diff(&x_plus_y, &xy).unwrap(), x_plus_y);
    }

    #[test]
    fn leading_form_examples() {
        let f = p1(&[(2, 1.0), (1, 1.0)]);
        assert_eq!(leading_form(&f).unwrap(), p1(&[(2, 1.0)]));
        let three = Poly::constant(2, c(3.0));
        assert_eq!(leading_form(&three).unwrap(), three);
        assert_eq!(leading_form(&Poly::zero(2)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn scaling_examples() {
        let xy2 = p2(&[((2, 0), 1.0), ((1, 1), 2.0), ((0, 2), 1.0)]);
        let theta = [c(3.0), C64::new(0.0, 2.0)];
        let scaled = scale_vars(&xy2, &theta).unwrap();
        let lin = p2(&[((1, 0), 3.0)])
            .checked_add(&Poly::monomial(
                MultiIndex::new(vec![0, 1]),
                C64::new(0.0, 2.0),
            ))
            .unwrap();
        assert!(scaled.max_abs_diff(&(&lin * &lin)) < 1e-14);
        assert_eq!(scale_vars(&xy2, &[c(1.0), c(1.0)]).unwrap(), xy2);
        let f = p1(&[(2, 1.0), (1, 1.0)]);
        assert_eq!(sigma_minus(&f), p1(&[(2, 1.0), (1, -1.0)]));
        assert_eq!(sigma_minus(&f), scale_vars(&f, &[c(-1.0)]).unwrap());
        assert_eq!(scale_vars(&f, &[c(0.0)]), Err(Error::ZeroScaling(0)));
    }

    #[test]
    fn falling_factorial_examples() {
        let ff = falling_factorial(&MultiIndex::new(vec![2])).unwrap();
        assert_eq!(ff, p1(&[(2, 1.0), (1, -1.0)]));
        assert_eq!(
            falling_factorial(&MultiIndex::new(vec![0, 0])).unwrap(),
            Poly::one(2)
        );
        assert_eq!(
            falling_factorial(&MultiIndex::new(vec![1, 1])).unwrap(),
            p2(&[((1, 1), 1.0)])
        );
        assert!(falling_factorial(&MultiIndex::new(vec![-1])).is_err());
    }

    #[test]
    fn laurent_normalize_examples() {
        let f = p1(&[(-1, 1.0), (0, -1.0)]);
        let (g, mu) = laurent_normalize(&f).unwrap();
        assert_eq!(g, p1(&[(0, 1.0), (1, -1.0)]));
        assert_eq!(mu, MultiIndex::new(vec![-1]));

        let (g, mu) = laurent_normalize(&p2(&[((1, 1), 1.0)])).unwrap();
        assert_eq!(g, Poly::one(2));
        assert_eq!(mu, MultiIndex::new(vec![1, 1]));

        let (g, mu) = laurent_normalize(&p1(&[(2, 1.0), (1, -1.0)])).unwrap();
        assert_eq!(g, p1(&[(0, -1.0), (1, 1.0)]));
        assert_eq!(mu, MultiIndex::new(vec![1]));

        assert_eq!(
            laurent_normalize(&Poly::zero(1)),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn translation_matches_binomial_expansion() {
        let x2 = p1(&[(2, 1.0)]);
        let t = x2.translate(&[c(3.0)]).unwrap();
        assert_eq!(t, p1(&[(2, 1.0), (1, 6.0), (0, 9.0)]));
    }

    #[test]
    fn graded_lex_order_and_monomials() {
        let m = monomials_up_to(2, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], MultiIndex::zeros(2));
        assert!(m.windows(2).all(|w| w[0] < w[1]));
        assert!(MultiIndex::new(vec![0, 2]) > MultiIndex::new(vec![1, 0]));
    }

    #[test]
    fn factorial_guard() {
        assert_eq!(factorial(20).unwrap(), 2432902008176640000.0);
        assert!(matches!(factorial(21), Err(Error::Overflow(_))));
    }

    #[test]
    fn rejects_non_finite() {
        let r = Poly::from_terms(1, [(MultiIndex::new(vec![0]), C64::new(f64::NAN, 0.0))]);
        assert_eq!(r, Err(Error::NonFinite));
    }
}

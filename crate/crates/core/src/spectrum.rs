//! Zeros with multiplicity spaces: dual conditions, Hermite fundamentals,
//! synthesis of annihilating filters and kernel assembly.

use crate::apolar::{ortho_homog_basis, DInvariantSpace, OrthoHomogBasis};
use crate::error::{Error, Result};
use crate::filters::{kernel_residual_on_window, theta_inverse, ExpPolySeq, Impulse, Window};
use crate::linalg::{self, CMat};
use crate::mpoly::{
    apply_poly_diff, laurent_normalize, monomials_up_to, shift_to_polynomial, MultiIndex, Poly,
    Tolerance, C64,
};
use crate::newton::{build_p_theta_from_ortho, Convention, PThetaBasis};

/// Zeros closer than this (max-norm) are treated as the same point.
pub const DISTINCT_TOL: f64 = 1e-9;
/// Relative singular-value threshold for collocation ranks.
pub const COLLOCATION_RANK_REL: f64 = 1e-10;
/// Default bound for the windowed kernel oracle, relative to its scale.
pub const KERNEL_TOL: f64 = 1e-8;
/// Rank threshold for independence of kernel sequences on a window.
pub const INDEPENDENCE_REL: f64 = 1e-8;
/// Rank threshold used by [`quotient_dim_estimate`].
pub const QUOTIENT_RANK_REL: f64 = 1e-9;

/// `(θ, Q_θ)`; conditions are evaluated at `θ⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct Zero {
    theta: Vec<C64>,
    space: DInvariantSpace,
    ortho: OrthoHomogBasis,
}

impl Zero {
    pub fn new(theta: Vec<C64>, space: DInvariantSpace) -> Result<Self> {
        if theta.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: theta.len(),
            });
        }
        if theta
            .iter()
            .any(|t| !(t.re.is_finite() && t.im.is_finite()))
        {
            return Err(Error::NonFinite);
        }
        theta_inverse(&theta)?;
        let ortho = ortho_homog_basis(&space)?;
        Ok(Zero {
            theta,
            space,
            ortho,
        })
    }

    /// A zero of multiplicity one.
    pub fn simple(theta: Vec<C64>) -> Result<Self> {
        let dim = theta.len();
        Self::new(theta, DInvariantSpace::new(vec![Poly::one(dim)])?)
    }

    pub fn theta(&self) -> &[C64] {
        &self.theta
    }

    pub fn point(&self) -> Vec<C64> {
        self.theta.iter().map(|t| t.inv()).collect()
    }

    pub fn space(&self) -> &DInvariantSpace {
        &self.space
    }

    pub fn ortho(&self) -> &OrthoHomogBasis {
        &self.ortho
    }

    pub fn multiplicity(&self) -> usize {
        self.space.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    dim: usize,
    zeros: Vec<Zero>,
}

impl Spectrum {
    pub fn new(dim: usize, zeros: Vec<Zero>) -> Result<Self> {
        for z in &zeros {
            if z.theta.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: z.theta.len(),
                });
            }
        }
        for (i, a) in zeros.iter().enumerate() {
            for (j, b) in zeros.iter().enumerate().skip(i + 1) {
                let d = a
                    .theta
                    .iter()
                    .zip(&b.theta)
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max);
                if d <= DISTINCT_TOL {
                    return Err(Error::DuplicateZero {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Spectrum { dim, zeros })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// `Σ_θ dim Q_θ`.
    pub fn total_multiplicity(&self) -> usize {
        self.zeros.iter().map(Zero::multiplicity).sum()
    }

    fn max_degree(&self) -> usize {
        self.zeros
            .iter()
            .map(|z| z.space.degree().max(0) as usize)
            .max()
            .unwrap_or(0)
    }

    /// `(zero index, basis index)` for every dual functional, in order.
    fn functionals(&self) -> impl Iterator<Item = (usize, usize, &Poly, Vec<C64>)> {
        self.zeros.iter().enumerate().flat_map(|(i, z)| {
            let point = z.point();
            z.ortho
                .elements()
                .iter()
                .enumerate()
                .map(move |(k, q)| (i, k, q, point.clone()))
        })
    }
}

/// `(q(D) f)(point)`.
pub fn dual_apply(q: &Poly, f: &Poly, point: &[C64]) -> Result<C64> {
    apply_poly_diff(q, f)?.eval(point)
}

/// `Σ_β |f_β| |(q(D) z^β)(point)|`, the magnitude of the terms of [`dual_apply`].
pub fn dual_apply_scale(q: &Poly, f: &Poly, point: &[C64]) -> Result<f64> {
    apply_poly_diff(q, f)?.eval_abs(point)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualCheck {
    pub filter: usize,
    pub zero: usize,
    pub element: usize,
    pub value: C64,
    pub scale: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroDimReport {
    pub checks: Vec<DualCheck>,
    pub max_violation: f64,
    pub pass: bool,
}

/// Checks `q(D) h*(θ⁻¹) = 0` for every filter, zero and orthonormal `q`, with
/// symbols stripped of monomial factors first.
pub fn verify_zero_dim(h: &[Impulse], spec: &Spectrum, tol: Tolerance) -> Result<ZeroDimReport> {
    let mut symbols = Vec::with_capacity(h.len());
    for f in h {
        if f.dim() != spec.dim {
            return Err(Error::DimensionMismatch {
                expected: spec.dim,
                found: f.dim(),
            });
        }
        symbols.push(laurent_normalize(&f.symbol())?.0);
    }
    let mut checks = Vec::new();
    for (fi, g) in symbols.iter().enumerate() {
        for (zi, k, q, point) in spec.functionals() {
            let value = dual_apply(q, g, &point)?;
            let scale = dual_apply_scale(q, g, &point)?;
            let bound = tol.bound(scale);
            checks.push(DualCheck {
                filter: fi,
                zero: zi,
                element: k,
                value,
                scale,
                bound,
                pass: value.norm() <= bound,
            });
        }
    }
    let max_violation = checks.iter().map(|c| c.value.norm()).fold(0.0, f64::max);
    let pass = checks.iter().all(|c| c.pass);
    Ok(ZeroDimReport {
        checks,
        max_violation,
        pass,
    })
}

/// Collocation matrix `V[(θ,q), β] = (q(D) z^β)(θ⁻¹)` over `monos`.
fn collocation(spec: &Spectrum, monos: &[MultiIndex]) -> Result<CMat> {
    let rows: Vec<_> = spec.functionals().collect();
    let mut v = CMat::zeros(rows.len(), monos.len());
    for (r, (_, _, q, point)) in rows.iter().enumerate() {
        for (c, b) in monos.iter().enumerate() {
            let m = Poly::monomial(b.clone(), C64::new(1.0, 0.0));
            v[(r, c)] = dual_apply(q, &m, point)?;
        }
    }
    Ok(v)
}

/// Polynomials `f_{θ,q}` dual to the functionals `q(D)(·)(θ⁻¹)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalSystem {
    labels: Vec<(usize, usize)>,
    polys: Vec<Poly>,
    dual: CMat,
    degree: usize,
}

impl FundamentalSystem {
    /// `(zero index, orthonormal basis index)` of each fundamental polynomial.
    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn get(&self, zero: usize, element: usize) -> Option<&Poly> {
        self.labels
            .iter()
            .position(|&l| l == (zero, element))
            .map(|i| &self.polys[i])
    }

    /// Entry `(i, j)` is functional `i` applied to polynomial `j`.
    pub fn dual_matrix(&self) -> &CMat {
        &self.dual
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kronecker_defect(&self) -> f64 {
        let n = self.dual.nrows();
        (&self.dual - CMat::identity(n, n)).camax()
    }
}

pub fn hermite_fundamentals(spec: &Spectrum) -> Result<FundamentalSystem> {
    let n = spec.total_multiplicity();
    let labels: Vec<(usize, usize)> = spec.functionals().map(|(i, k, _, _)| (i, k)).collect();
    if n == 0 {
        return Ok(FundamentalSystem {
            labels,
            polys: Vec::new(),
            dual: CMat::zeros(0, 0),
            degree: 0,
        });
    }
    let d0 = spec.max_degree();
    let d_max = d0 + n;
    for d in d0..=d_max {
        let monos = monomials_up_to(spec.dim, d);
        let v = collocation(spec, &monos)?;
        if linalg::rank(&v, COLLOCATION_RANK_REL) < n {
            continue;
        }
        let x = linalg::min_norm_solve(&v, &CMat::identity(n, n), COLLOCATION_RANK_REL)?;
        let dual = &v * &x;
        let polys = (0..n)
            .map(|j| {
                Poly::from_terms(
                    spec.dim,
                    monos.iter().cloned().zip(x.column(j).iter().copied()),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(FundamentalSystem {
            labels,
            polys,
            dual,
            degree: d,
        });
    }
    Err(Error::RankDeficient { degree: d_max })
}

/// Rotates `v` so that its first entry of non-negligible size is real positive.
fn normalize_phase(v: &mut [C64]) {
    let big = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if let Some(c) = v.iter().find(|c| c.norm() > 1e-8 * big).copied() {
        let rot = c.conj() / c.norm();
        for x in v.iter_mut() {
            *x *= rot;
        }
    }
}

/// Filters whose symbols lie in the ideal of the spectrum: a basis of the
/// nullspace of the collocation matrix over `Π_d`, first `count` vectors.
pub fn ideal_complement_filters(
    spec: &Spectrum,
    count: usize,
    max_degree: usize,
) -> Result<Vec<Impulse>> {
    let monos = monomials_up_to(spec.dim, max_degree);
    let v = collocation(spec, &monos)?;
    let ns = if v.nrows() == 0 {
        CMat::identity(monos.len(), monos.len())
    } else {
        linalg::nullspace(&v, COLLOCATION_RANK_REL)
    };
    if ns.ncols() < count {
        return Err(Error::NullspaceTooSmall {
            requested: count,
            available: ns.ncols(),
        });
    }
    (0..count)
        .map(|j| {
            let mut col: Vec<C64> = ns.column(j).iter().copied().collect();
            normalize_phase(&mut col);
            Impulse::new(spec.dim, monos.iter().cloned().zip(col))
        })
        .collect()
}

/// All available ideal-complement filters of degree `≤ max_degree`.
pub fn ideal_filters_full(spec: &Spectrum, max_degree: usize) -> Result<Vec<Impulse>> {
    let available = monomials_up_to(spec.dim, max_degree)
        .len()
        .saturating_sub(spec.total_multiplicity());
    match ideal_complement_filters(spec, available, max_degree) {
        Err(Error::NullspaceTooSmall { available, .. }) => {
            ideal_complement_filters(spec, available, max_degree)
        }
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelOptions {
    pub convention: Convention,
    pub dual_tol: Tolerance,
    pub kernel_tol: f64,
    pub window_pad: usize,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            convention: Convention::default(),
            dual_tol: Tolerance::default(),
            kernel_tol: KERNEL_TOL,
            window_pad: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelComponent {
    pub theta: Vec<C64>,
    pub basis: PThetaBasis,
    /// Oracle residual of each `p e_θ` relative to its scale.
    pub residuals: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis {
    pub components: Vec<KernelComponent>,
    pub max_residual: f64,
    pub max_scale: f64,
    pub bound: f64,
    pub window: Window,
    pub rank: usize,
}

impl KernelBasis {
    pub fn count(&self) -> usize {
        self.components.iter().map(|c| c.basis.len()).sum()
    }

    pub fn sequences(&self) -> Vec<ExpPolySeq> {
        self.components
            .iter()
            .flat_map(|c| {
                c.basis.elements().iter().map(|p| {
                    ExpPolySeq::single(c.theta.clone(), p.clone()).expect("validated zero")
                })
            })
            .collect()
    }

    pub fn independent(&self) -> bool {
        self.rank == self.count()
    }
}

/// `P_θ` for every zero under `convention`, without any filter check.
pub fn p_theta_bases(spec: &Spectrum, convention: Convention) -> Result<Vec<PThetaBasis>> {
    spec.zeros
        .iter()
        .map(|z| build_p_theta_from_ortho(&z.ortho, &z.theta, convention))
        .collect()
}

/// Window large enough to separate `count` exponential polynomials of degree
/// `≤ degree`: along each axis the restriction obeys a recurrence of order at
/// most `count`, so `count` consecutive samples per axis determine it.
pub fn independence_window(dim: usize, degree: i64, count: usize, pad: usize) -> Window {
    let n = degree.max(count as i64 - 1).max(0) + pad as i64;
    Window::cube(dim, n).expect("nonnegative extent")
}

/// Numerical rank of the sampled sequences on `w`, rows and columns scaled.
pub fn window_rank(seqs: &[ExpPolySeq], w: &Window, rel: f64) -> Result<usize> {
    let pts = w.points();
    let mut m = CMat::zeros(pts.len(), seqs.len());
    for (j, s) in seqs.iter().enumerate() {
        for (i, a) in pts.iter().enumerate() {
            m[(i, j)] = s.value_at(a)?;
        }
    }
    for i in 0..m.nrows() {
        let big = m.row(i).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if big > 0.0 {
            m.row_mut(i).scale_mut(1.0 / big);
        }
    }
    for j in 0..m.ncols() {
        let nrm = m.column(j).norm();
        if nrm > 0.0 {
            m.column_mut(j).scale_mut(1.0 / nrm);
        }
    }
    Ok(linalg::rank(&m, rel))
}

/// `⊕_θ P_θ e_θ`, certified against `h` by the windowed oracle.
pub fn kernel_basis(h: &[Impulse], spec: &Spectrum, opts: &KernelOptions) -> Result<KernelBasis> {
    let report = verify_zero_dim(h, spec, opts.dual_tol)?;
    if !report.pass {
        return Err(Error::VerificationFailed {
            max_violation: report.max_violation,
        });
    }
    let bases = p_theta_bases(spec, opts.convention)?;
    let mut components = Vec::with_capacity(bases.len());
    let mut max_residual: f64 = 0.0;
    let mut max_scale: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    let mut degree = 0;
    for (z, basis) in spec.zeros.iter().zip(bases) {
        degree = degree.max(basis.degree());
        let mut residuals = Vec::with_capacity(basis.len());
        for p in basis.elements() {
            let seq = ExpPolySeq::single(z.theta.clone(), p.clone())?;
            let w = Window::cube(spec.dim, seq.degree() + opts.window_pad as i64)?;
            let r = kernel_residual_on_window(h, &seq, &w)?;
            residuals.push(r.relative());
            max_residual = max_residual.max(r.max);
            max_scale = max_scale.max(r.scale);
            worst_ratio = worst_ratio.max(r.relative());
        }
        components.push(KernelComponent {
            theta: z.theta.clone(),
            basis,
            residuals,
        });
    }
    let bound = opts.kernel_tol * max_scale.max(1.0);
    if worst_ratio > opts.kernel_tol {
        return Err(Error::CertificateFailed {
            residual: max_residual,
            bound,
        });
    }
    let window = independence_window(spec.dim, degree, spec.total_multiplicity(), opts.window_pad);
    let mut out = KernelBasis {
        components,
        max_residual,
        max_scale,
        bound,
        window,
        rank: 0,
    };
    out.rank = window_rank(&out.sequences(), &out.window, INDEPENDENCE_REL)?;
    Ok(out)
}

/// `dim Π_d − rank{z^γ h* : |γ| + deg h* ≤ d}`. Symbols with negative
/// exponents are shifted into `Π` first; zeros at the origin are counted.
pub fn quotient_dim_estimate(h: &[Impulse], dim: usize, d: usize) -> Result<usize> {
    let monos = monomials_up_to(dim, d);
    let pos: std::collections::BTreeMap<_, _> = monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let mut rows: Vec<Vec<(usize, C64)>> = Vec::new();
    for f in h {
        if f.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: f.dim(),
            });
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = shift_to_polynomial(&f.symbol());
        let deg = g.degree().unwrap_or(0) as usize;
        if deg > d {
            continue;
        }
        let norm = g.terms().values().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for gamma in monomials_up_to(dim, d - deg) {
            rows.push(
                g.terms()
                    .iter()
                    .map(|(e, c)| (pos[&e.add(&gamma)], c / norm))
                    .collect(),
            );
        }
    }
    if rows.is_empty() {
        return Ok(monos.len());
    }
    let mut m = CMat::zeros(rows.len(), monos.len());
    for (i, row) in rows.iter().enumerate() {
        for &(j, c) in row {
            m[(i, j)] = c;
        }
    }
    Ok(monos.len() - linalg::rank(&m, QUOTIENT_RANK_REL))
}

/// Largest relative oracle residual of `P_θ e_θ` against `h`, per zero.
pub fn annihilation_residual(
    h: &[Impulse],
    spec: &Spectrum,
    convention: Convention,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (z, basis) in spec.zeros.iter().zip(p_theta_bases(spec, convention)?) {
        for p in basis.elements() {
            let seq = ExpPolySeq::single(z.theta.clone(), p.clone())?;
            let w = Window::cube(spec.dim, seq.degree())?;
            worst = worst.max(kernel_residual_on_window(h, &seq, &w)?.relative());
        }
    }
    Ok(worst)
}

/// Runs both `P_θ` conventions through the annihilation oracle on
/// `Q = span{1, x+y, (x+y)²}`, `θ = (1, 2)`, and returns the one that passes.
pub fn calibrate_convention() -> Result<Convention> {
    let s = &Poly::var(2, 0) + &Poly::var(2, 1);
    let space = DInvariantSpace::new(vec![Poly::one(2), s.clone(), &s * &s])?;
    let theta = vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)];
    let spec = Spectrum::new(2, vec![Zero::new(theta, space)?])?;
    let h = ideal_filters_full(&spec, 3)?;
    let mut passing = Vec::new();
    for conv in [Convention::WithSigmaMinus, Convention::WithoutSigmaMinus] {
        if annihilation_residual(&h, &spec, conv)? <= KERNEL_TOL {
            passing.push(conv);
        }
    }
    match passing.as_slice() {
        [one] => Ok(*one),
        [] => Err(Error::Calibration("no convention annihilates".into())),
        _ => Err(Error::Calibration("both conventions annihilate".into())),
    }
}

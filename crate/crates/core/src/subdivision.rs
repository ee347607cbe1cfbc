//! Stationary subdivision with an integer dilation matrix: cosets,
//! subsymbols, symmetric zeros and the reduction of its kernel to
//! convolution kernels.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::filters::{
    kernel_residual_on_window, theta_inverse, ExpPolySeq, Impulse, Sequence, Window, WindowedSeq,
};
use crate::mpoly::{laurent_normalize, monomials_up_to, LaurentPoly, MultiIndex, Poly, C64};

/// Eigenvalue moduli must exceed `1 + EXPANDING_MARGIN`.
pub const EXPANDING_MARGIN: f64 = 1e-9;
/// Default relative tolerance for zero tests.
pub const ZERO_TOL: f64 = 1e-9;
/// Orders above the requested one probed when reporting the maximal order.
pub const ORDER_PROBE: usize = 2;

/// Square integer matrix with nonzero determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dilation {
    xi: Vec<Vec<i64>>,
    det: i128,
    adj: Vec<Vec<i128>>,
}

fn bareiss_det(m: &[Vec<i64>]) -> Result<i128> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| a[i][k].checked_mul(a[k][j]).and_then(|y| x.checked_sub(y)))
                    .ok_or_else(|| Error::Overflow("determinant".into()))?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

fn minor(m: &[Vec<i64>], row: usize, col: usize) -> Vec<Vec<i64>> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|&(j, _)| j != col)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

impl Dilation {
    pub fn new(xi: Vec<Vec<i64>>) -> Result<Self> {
        let n = xi.len();
        if n == 0 {
            return Err(Error::InvalidDilation("empty matrix".into()));
        }
        if xi.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDilation("matrix is not square".into()));
        }
        let det = bareiss_det(&xi)?;
        if det == 0 {
            return Err(Error::InvalidDilation("singular matrix".into()));
        }
        let adj = if n == 1 {
            vec![vec![1]]
        } else {
            let mut adj = vec![vec![0i128; n]; n];
            for (i, row) in adj.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    let c = bareiss_det(&minor(&xi, j, i))?;
                    *v = if (i + j) % 2 == 0 { c } else { -c };
                }
            }
            adj
        };
        Ok(Dilation { xi, det, adj })
    }

    /// Like [`Dilation::new`] but also rejects non-expanding matrices.
    pub fn expanding(xi: Vec<Vec<i64>>) -> Result<Self> {
        let d = Self::new(xi)?;
        if !d.is_expanding() {
            return Err(Error::InvalidDilation("matrix is not expanding".into()));
        }
        Ok(d)
    }

    /// `k · I`.
    pub fn scalar(dim: usize, k: i64) -> Result<Self> {
        Self::new(
            (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { k } else { 0 }).collect())
                .collect(),
        )
    }

    pub fn quincunx() -> Self {
        Self::new(vec![vec![1, 1], vec![1, -1]]).expect("nonsingular")
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.xi
    }

    pub fn det(&self) -> i128 {
        self.det
    }

    /// `|det Ξ|`, the number of cosets.
    pub fn coset_count(&self) -> usize {
        self.det.unsigned_abs() as usize
    }

    /// `adj Ξ`, so that `Ξ⁻¹ = adj Ξ / det Ξ`.
    pub fn adjugate(&self) -> &[Vec<i128>] {
        &self.adj
    }

    /// `Ξ^T`; its adjugate is the transpose of `adj Ξ`.
    pub fn transpose(&self) -> Self {
        let n = self.dim();
        Dilation {
            xi: (0..n)
                .map(|i| (0..n).map(|j| self.xi[j][i]).collect())
                .collect(),
            det: self.det,
            adj: (0..n)
                .map(|i| (0..n).map(|j| self.adj[j][i]).collect())
                .collect(),
        }
    }

    pub fn is_expanding(&self) -> bool {
        is_expanding(self)
    }

    /// `Ξ α`.
    pub fn apply(&self, alpha: &MultiIndex) -> MultiIndex {
        MultiIndex::new(
            self.xi
                .iter()
                .map(|r| r.iter().zip(alpha.entries()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `adj Ξ · α`, exact.
    fn adj_apply(&self, alpha: &MultiIndex) -> Vec<i128> {
        self.adj
            .iter()
            .map(|r| {
                r.iter()
                    .zip(alpha.entries())
                    .map(|(a, &b)| a * b as i128)
                    .sum()
            })
            .collect()
    }

    /// `(ξ, α)` with `β = ξ + Ξα` and `Ξ⁻¹ξ ∈ [0,1)^s`.
    pub fn split(&self, beta: &MultiIndex) -> (MultiIndex, MultiIndex) {
        let v = self.adj_apply(beta);
        let alpha = MultiIndex::new(v.iter().map(|&x| floor_div(x, self.det) as i64).collect());
        let xi = beta.sub(&self.apply(&alpha));
        (xi, alpha)
    }

    /// `α` with `Ξα = β`, if it exists.
    pub fn preimage(&self, beta: &MultiIndex) -> Option<MultiIndex> {
        let v = self.adj_apply(beta);
        if v.iter().all(|x| x % self.det == 0) {
            Some(MultiIndex::new(
                v.iter().map(|x| (x / self.det) as i64).collect(),
            ))
        } else {
            None
        }
    }

    fn in_cell(&self, alpha: &MultiIndex) -> bool {
        let d = self.det;
        self.adj_apply(alpha).iter().all(|&v| {
            if d > 0 {
                0 <= v && v < d
            } else {
                d < v && v <= 0
            }
        })
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// All eigenvalues of modulus `> 1 + EXPANDING_MARGIN`.
pub fn is_expanding(xi: &Dilation) -> bool {
    let n = xi.dim();
    let m = DMatrix::from_fn(n, n, |i, j| xi.xi[i][j] as f64);
    m.complex_eigenvalues()
        .iter()
        .all(|l| l.norm() > 1.0 + EXPANDING_MARGIN)
}

/// `E_M = M[0,1)^s ∩ Z^s` for `M = Ξ` or `Ξ^T`, sorted graded-lex.
pub fn coset_reps(xi: &Dilation, transpose: bool) -> Result<Vec<MultiIndex>> {
    let m = if transpose {
        xi.transpose()
    } else {
        xi.clone()
    };
    let n = m.dim();
    let lo: Vec<i64> =
        m.xi.iter()
            .map(|r| r.iter().map(|&v| v.min(0)).sum())
            .collect();
    let hi: Vec<i64> =
        m.xi.iter()
            .map(|r| r.iter().map(|&v| v.max(0)).sum())
            .collect();
    let window = Window::new(MultiIndex::new(lo), MultiIndex::new(hi))?;
    let mut reps: Vec<MultiIndex> = window
        .points()
        .into_iter()
        .filter(|a| m.in_cell(a))
        .collect();
    reps.sort();
    if reps.len() != m.coset_count() {
        return Err(Error::Internal(format!(
            "found {} coset representatives in dimension {n}, expected {}",
            reps.len(),
            m.coset_count()
        )));
    }
    Ok(reps)
}

/// `a_ξ*(z) = Σ_α a(ξ + Ξα) z^α` for every `ξ ∈ E_Ξ`.
pub fn subsymbols(a: &Impulse, xi: &Dilation) -> Result<BTreeMap<MultiIndex, LaurentPoly>> {
    if a.dim() != xi.dim() {
        return Err(Error::DimensionMismatch {
            expected: xi.dim(),
            found: a.dim(),
        });
    }
    let mut out: BTreeMap<MultiIndex, LaurentPoly> = coset_reps(xi, false)?
        .into_iter()
        .map(|r| (r, LaurentPoly::zero(xi.dim())))
        .collect();
    for (beta, v) in a.taps() {
        let (rep, alpha) = xi.split(beta);
        let entry = out
            .get_mut(&rep)
            .ok_or_else(|| Error::Internal(format!("{rep} is not a coset representative")))?;
        entry.add_term(alpha, *v);
    }
    Ok(out)
}

/// `z^Ξ = (z^{ξ_1}, …, z^{ξ_s})` with `ξ_j` the columns of `Ξ`.
pub fn z_pow_xi(z: &[C64], xi: &Dilation) -> Result<Vec<C64>> {
    let n = xi.dim();
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: z.len(),
        });
    }
    theta_inverse(z)?;
    (0..n)
        .map(|j| MultiIndex::new((0..n).map(|i| xi.xi[i][j]).collect()).pow(z))
        .collect()
}

/// `e^{-2πi k/m}`, exact at multiples of a quarter turn.
fn root_of_unity(k: i128, m: i128) -> C64 {
    let k = k.rem_euclid(m);
    if k == 0 {
        return C64::new(1.0, 0.0);
    }
    if 2 * k == m {
        return C64::new(-1.0, 0.0);
    }
    if 4 * k == m {
        return C64::new(0.0, -1.0);
    }
    if 4 * k == 3 * m {
        return C64::new(0.0, 1.0);
    }
    let phase = -2.0 * PI * (k as f64) / (m as f64);
    C64::new(phase.cos(), phase.sin())
}

/// `e^{-2πi Ξ^{-T} ξ'}` for `ξ' ∈ E'_Ξ`, computed from exact rationals.
pub fn modulations(xi: &Dilation) -> Result<Vec<Vec<C64>>> {
    let xt = xi.transpose();
    let m = xi.det.abs();
    let sign = xi.det.signum();
    Ok(coset_reps(xi, true)?
        .iter()
        .map(|r| {
            xt.adj_apply(r)
                .into_iter()
                .map(|v| root_of_unity(v * sign, m))
                .collect()
        })
        .collect())
}

/// `e^{-2πi Ξ^{-T} ξ'} ⊙ ζ`; the first point is `ζ` itself.
pub fn modulation_points(xi: &Dilation, zeta: &[C64]) -> Result<Vec<Vec<C64>>> {
    if zeta.len() != xi.dim() {
        return Err(Error::DimensionMismatch {
            expected: xi.dim(),
            found: zeta.len(),
        });
    }
    theta_inverse(zeta)?;
    Ok(modulations(xi)?
        .into_iter()
        .map(|u| u.iter().zip(zeta).map(|(a, b)| a * b).collect())
        .collect())
}

/// `ζ = exp(-Ξ^{-T} log θ)`, so that `ζ^Ξ = θ⁻¹`; principal logarithms.
pub fn symmetric_root(theta: &[C64], xi: &Dilation) -> Result<Vec<C64>> {
    let n = xi.dim();
    if theta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: theta.len(),
        });
    }
    theta_inverse(theta)?;
    let logs: Vec<C64> = theta.iter().map(|t| t.ln()).collect();
    let xt = xi.transpose();
    let det = xi.det as f64;
    Ok((0..n)
        .map(|i| {
            let mut acc = C64::new(0.0, 0.0);
            for (j, l) in logs.iter().enumerate() {
                acc += l * (xt.adj[i][j] as f64);
            }
            (-acc / det).exp()
        })
        .collect())
}

/// `|a*(z) − Σ_ξ z^ξ a_ξ*(z^Ξ)|` relative to `max(1, Σ|terms of a*(z)|)`.
pub fn reconstruction_residual(a: &Impulse, xi: &Dilation, z: &[C64]) -> Result<f64> {
    let subs = subsymbols(a, xi)?;
    let sym = a.symbol();
    let zx = z_pow_xi(z, xi)?;
    let mut rhs = C64::new(0.0, 0.0);
    for (rep, s) in &subs {
        rhs += rep.pow(z)? * s.eval(&zx)?;
    }
    Ok((sym.eval(z)? - rhs).norm() / sym.eval_abs(z)?.max(1.0))
}

/// Worst residual over `ξ ∈ E_Ξ` of the modulation identity
/// `z^ξ a_ξ*(z^Ξ) = |det Ξ|⁻¹ Σ_ξ' m^{-ξ} a*(m z)`, `m = e^{-2πi Ξ^{-T} ξ'}`.
///
/// With the phase `m^{+ξ}` and without the factor `z^ξ` the identity only
/// holds when every coset is its own inverse (e.g. `Ξ = 2I`).
pub fn modulation_identity_residual(a: &Impulse, xi: &Dilation, z: &[C64]) -> Result<f64> {
    let subs = subsymbols(a, xi)?;
    let sym = a.symbol();
    let zx = z_pow_xi(z, xi)?;
    let mods = modulations(xi)?;
    let n = xi.coset_count() as f64;
    let mut shifted = Vec::with_capacity(mods.len());
    let mut scale: f64 = 1.0;
    for m in &mods {
        let p: Vec<C64> = m.iter().zip(z).map(|(a, b)| a * b).collect();
        scale = scale.max(sym.eval_abs(&p)?);
        shifted.push(sym.eval(&p)?);
    }
    let mut worst: f64 = 0.0;
    for (rep, s) in &subs {
        let lhs = rep.pow(z)? * s.eval(&zx)?;
        let mut rhs = C64::new(0.0, 0.0);
        for (m, v) in mods.iter().zip(&shifted) {
            rhs += rep.pow(m)?.conj() * v;
        }
        worst = worst.max((lhs - rhs / n).norm() / scale);
    }
    Ok(worst)
}

/// `max |(e^{-2πi Ξ^{-T} ξ'})^Ξ − 1|` over `ξ' ∈ E'_Ξ`.
pub fn unit_root_residual(xi: &Dilation) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for m in modulations(xi)? {
        for v in z_pow_xi(&m, xi)? {
            worst = worst.max((v - C64::new(1.0, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Largest `|D^β f(z)| / max(1, Σ|terms|)` over `|β| ≤ k`.
fn max_derivative(f: &LaurentPoly, z: &[C64], k: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for beta in monomials_up_to(f.dim(), k) {
        let d = f.diff(&beta)?;
        let v = d.eval(z)?.norm();
        let scale = d.eval_abs(z)?.max(1.0);
        worst = worst.max(v / scale);
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTest {
    pub holds: bool,
    pub max_violation: f64,
}

/// Whether all derivatives of order `≤ k` of the normalized `a*` vanish at
/// every modulation point of `ζ`.
pub fn is_symmetric_zero(
    a: &Impulse,
    xi: &Dilation,
    zeta: &[C64],
    k: usize,
    tol: f64,
) -> Result<ZeroTest> {
    let (g, _) = laurent_normalize(&a.symbol())?;
    let mut worst: f64 = 0.0;
    for p in modulation_points(xi, zeta)? {
        worst = worst.max(max_derivative(&g, &p, k)?);
    }
    Ok(ZeroTest {
        holds: worst <= tol,
        max_violation: worst,
    })
}

/// Whether every subsymbol vanishes to order `k` at `point`.
pub fn common_subsymbol_zero(
    subs: &BTreeMap<MultiIndex, LaurentPoly>,
    point: &[C64],
    k: usize,
    tol: f64,
) -> Result<ZeroTest> {
    let mut worst: f64 = 0.0;
    for s in subs.values() {
        worst = worst.max(max_derivative(s, point, k)?);
    }
    Ok(ZeroTest {
        holds: worst <= tol,
        max_violation: worst,
    })
}

/// `(S_a c)(β) = Σ_α a(β − Ξα) c(α)` on `w`.
pub fn subdivide(a: &Impulse, xi: &Dilation, c: &impl Sequence, w: &Window) -> Result<WindowedSeq> {
    for d in [a.dim(), c.dim(), w.dim()] {
        if d != xi.dim() {
            return Err(Error::DimensionMismatch {
                expected: xi.dim(),
                found: d,
            });
        }
    }
    let mut out = WindowedSeq::new(xi.dim());
    for beta in w.points() {
        let mut acc = C64::new(0.0, 0.0);
        for (tau, v) in a.taps() {
            if let Some(alpha) = xi.preimage(&beta.sub(tau)) {
                acc += v * c.value(&alpha)?;
            }
        }
        out.insert(beta, acc);
    }
    Ok(out)
}

/// Result of the three equivalent tests for one candidate `(θ, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateReport {
    pub theta: Vec<C64>,
    pub order: usize,
    /// `ζ` with `ζ^Ξ = θ⁻¹`.
    pub root: Vec<C64>,
    pub modulation_points: Vec<Vec<C64>>,
    pub symmetric: ZeroTest,
    pub subsymbol: ZeroTest,
    /// Per-coset oracle on `Π_k e_θ`.
    pub kernel: ZeroTest,
    /// Largest order `≤ k + ORDER_PROBE` of the symmetric zero, if any.
    pub max_order: Option<usize>,
}

impl CandidateReport {
    pub fn pass(&self) -> bool {
        self.symmetric.holds && self.subsymbol.holds && self.kernel.holds
    }

    pub fn consistent(&self) -> bool {
        self.symmetric.holds == self.subsymbol.holds && self.subsymbol.holds == self.kernel.holds
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubdivisionReport {
    pub subsymbols: BTreeMap<MultiIndex, LaurentPoly>,
    pub modulations: Vec<Vec<C64>>,
    pub candidates: Vec<CandidateReport>,
}

impl SubdivisionReport {
    pub fn pass(&self) -> bool {
        self.candidates.iter().all(CandidateReport::pass)
    }
}

/// `Π_k e_θ ⊆ ker S_a` via `(S_a c)(ξ + Ξ·) = a_ξ ∗ c`.
pub fn subdivision_kernel_residual(
    subs: &BTreeMap<MultiIndex, LaurentPoly>,
    theta: &[C64],
    k: usize,
) -> Result<f64> {
    let dim = theta.len();
    let filters: Vec<Impulse> = subs
        .values()
        .filter(|s| !s.is_zero())
        .map(Impulse::from_symbol)
        .collect();
    let w = Window::cube(dim, k as i64)?;
    let mut worst: f64 = 0.0;
    for gamma in monomials_up_to(dim, k) {
        let seq = ExpPolySeq::single(theta.to_vec(), Poly::monomial(gamma, C64::new(1.0, 0.0)))?;
        worst = worst.max(kernel_residual_on_window(&filters, &seq, &w)?.relative());
    }
    Ok(worst)
}

pub fn subdivision_kernel_check(
    a: &Impulse,
    xi: &Dilation,
    candidates: &[(Vec<C64>, usize)],
    tol: f64,
) -> Result<SubdivisionReport> {
    let subs = subsymbols(a, xi)?;
    let mut reports = Vec::with_capacity(candidates.len());
    for (i, (theta, k)) in candidates.iter().enumerate() {
        let root = symmetric_root(theta, xi)?;
        let point = theta_inverse(theta)?;
        let symmetric = is_symmetric_zero(a, xi, &root, *k, tol)?;
        let subsymbol = common_subsymbol_zero(&subs, &point, *k, tol)?;
        let r = subdivision_kernel_residual(&subs, theta, *k)?;
        let kernel = ZeroTest {
            holds: r <= tol,
            max_violation: r,
        };
        let mut max_order = None;
        for j in 0..=k + ORDER_PROBE {
            if is_symmetric_zero(a, xi, &root, j, tol)?.holds {
                max_order = Some(j);
            } else {
                break;
            }
        }
        let rep = CandidateReport {
            theta: theta.clone(),
            order: *k,
            modulation_points: modulation_points(xi, &root)?,
            root,
            symmetric,
            subsymbol,
            kernel,
            max_order,
        };
        if !rep.consistent() {
            return Err(Error::Inconsistent(i));
        }
        reports.push(rep);
    }
    Ok(SubdivisionReport {
        subsymbols: subs,
        modulations: modulations(xi)?,
        candidates: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    fn idx(e: &[i64]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    fn mask1(taps: &[(i64, f64)]) -> Impulse {
        Impulse::new(1, taps.iter().map(|&(e, v)| (idx(&[e]), r(v)))).unwrap()
    }

    fn two() -> Dilation {
        Dilation::scalar(1, 2).unwrap()
    }

    fn close(a: &[C64], b: &[C64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    #[test]
    fn expanding_examples() {
        assert!(Dilation::scalar(2, 2).unwrap().is_expanding());
        assert!(Dilation::quincunx().is_expanding());
        assert!(!Dilation::new(vec![vec![1, 0], vec![0, 2]])
            .unwrap()
            .is_expanding());
        assert!(Dilation::new(vec![vec![1, 2], vec![2, 4]]).is_err());
        assert!(Dilation::new(vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn determinant_and_adjugate() {
        let d = Dilation::new(vec![vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 2]]).unwrap();
        assert_eq!(d.det(), 13);
        let q = Dilation::quincunx();
        assert_eq!(q.det(), -2);
        assert_eq!(q.adjugate(), &[vec![-1, -1], vec![-1, 1]]);
    }

    #[test]
    fn coset_examples() {
        let reps = coset_reps(&Dilation::scalar(2, 2).unwrap(), false).unwrap();
        assert_eq!(
            reps,
            vec![idx(&[0, 0]), idx(&[0, 1]), idx(&[1, 0]), idx(&[1, 1])]
        );
        let reps = coset_reps(&Dilation::quincunx(), false).unwrap();
        assert_eq!(reps, vec![idx(&[0, 0]), idx(&[1, 0])]);
        assert_eq!(
            coset_reps(&two(), false).unwrap(),
            vec![idx(&[0]), idx(&[1])]
        );
        let d = Dilation::new(vec![vec![2, 1], vec![0, 3]]).unwrap();
        assert_eq!(coset_reps(&d, true).unwrap().len(), 6);
    }

    #[test]
    fn subsymbol_examples() {
        let subs = subsymbols(&mask1(&[(0, 1.0), (2, -1.0)]), &two()).unwrap();
        assert_eq!(
            subs[&idx(&[0])],
            Poly::from_real(1, &[(&[0], 1.0), (&[1], -1.0)]).unwrap()
        );
        assert!(subs[&idx(&[1])].is_zero());

        let subs = subsymbols(&mask1(&[(0, 0.5), (1, 1.0), (2, 0.5)]), &two()).unwrap();
        assert_eq!(
            subs[&idx(&[0])],
            Poly::from_real(1, &[(&[0], 0.5), (&[1], 0.5)]).unwrap()
        );
        assert_eq!(subs[&idx(&[1])], Poly::one(1));

        let subs = subsymbols(&Impulse::delta(idx(&[0, 0])), &Dilation::quincunx()).unwrap();
        assert_eq!(subs[&idx(&[0, 0])], Poly::one(2));
        assert!(subs[&idx(&[1, 0])].is_zero());
    }

    #[test]
    fn negative_taps_land_in_cosets() {
        let subs = subsymbols(&mask1(&[(-3, 1.0), (-2, 2.0)]), &two()).unwrap();
        let m3 = LaurentPoly::monomial(idx(&[-2]), r(1.0));
        let m2 = LaurentPoly::monomial(idx(&[-1]), r(2.0));
        assert_eq!(subs[&idx(&[1])], m3);
        assert_eq!(subs[&idx(&[0])], m2);
    }

    #[test]
    fn z_pow_examples() {
        let z = [C64::new(0.3, 1.2), C64::new(-2.0, 0.5)];
        let sq = z_pow_xi(&z, &Dilation::scalar(2, 2).unwrap()).unwrap();
        assert!(close(&sq, &[z[0] * z[0], z[1] * z[1]]));
        let q = z_pow_xi(&z, &Dilation::quincunx()).unwrap();
        assert!(close(&q, &[z[0] * z[1], z[0] / z[1]]));
        let ones = z_pow_xi(&[r(1.0), r(1.0)], &Dilation::quincunx()).unwrap();
        assert_eq!(ones, vec![r(1.0), r(1.0)]);
        assert!(z_pow_xi(&[r(0.0), r(1.0)], &Dilation::quincunx()).is_err());
    }

    #[test]
    fn modulation_examples() {
        let pts = modulation_points(&two(), &[r(1.0)]).unwrap();
        assert_eq!(pts, vec![vec![r(1.0)], vec![r(-1.0)]]);
        let pts = modulation_points(&Dilation::scalar(2, 2).unwrap(), &[r(1.0), r(1.0)]).unwrap();
        assert_eq!(pts.len(), 4);
        for s in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
            assert!(pts.contains(&vec![r(s[0]), r(s[1])]));
        }
        let pts = modulation_points(&Dilation::quincunx(), &[r(1.0), r(1.0)]).unwrap();
        assert_eq!(pts, vec![vec![r(1.0), r(1.0)], vec![r(-1.0), r(-1.0)]]);
    }

    #[test]
    fn symmetric_zero_examples() {
        let a = mask1(&[(0, 1.0), (2, -1.0)]);
        assert!(
            is_symmetric_zero(&a, &two(), &[r(1.0)], 0, ZERO_TOL)
                .unwrap()
                .holds
        );
        let b = mask1(&[(0, 0.5), (1, 1.0), (2, 0.5)]);
        let t = is_symmetric_zero(&b, &two(), &[r(-1.0)], 0, ZERO_TOL).unwrap();
        assert!(!t.holds);
        let a2 = mask1(&[(0, 1.0), (2, -2.0), (4, 1.0)]);
        assert!(
            is_symmetric_zero(&a2, &two(), &[r(1.0)], 1, ZERO_TOL)
                .unwrap()
                .holds
        );
        assert!(
            !is_symmetric_zero(&a2, &two(), &[r(1.0)], 2, ZERO_TOL)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn symmetric_root_inverts_dilation() {
        for d in [
            Dilation::quincunx(),
            Dilation::new(vec![vec![2, 0], vec![0, 3]]).unwrap(),
        ] {
            let theta = [C64::new(0.7, -0.4), C64::new(-1.3, 0.2)];
            let z = symmetric_root(&theta, &d).unwrap();
            let back = z_pow_xi(&z, &d).unwrap();
            assert!(close(&back, &[theta[0].inv(), theta[1].inv()]));
        }
    }

    #[test]
    fn subdivide_examples() {
        let w = Window::new(idx(&[-4]), idx(&[7])).unwrap();
        let ones = ExpPolySeq::exponential(vec![r(1.0)]).unwrap();
        let b = mask1(&[(0, 0.5), (1, 1.0), (2, 0.5)]);
        for v in subdivide(&b, &two(), &ones, &w).unwrap().samples().values() {
            assert!((v - r(1.0)).norm() < 1e-15);
        }
        let a = mask1(&[(0, 1.0), (2, -1.0)]);
        assert_eq!(subdivide(&a, &two(), &ones, &w).unwrap().max_abs(), 0.0);

        let q = Dilation::quincunx();
        let seq = ExpPolySeq::single(
            vec![C64::new(0.9, 0.1), r(1.1)],
            &Poly::var(2, 0) + &Poly::one(2),
        )
        .unwrap();
        let w2 = Window::new(idx(&[-2, -2]), idx(&[2, 2])).unwrap();
        let up = subdivide(&Impulse::delta(idx(&[0, 0])), &q, &seq, &w2).unwrap();
        for (beta, v) in up.samples() {
            match q.preimage(beta) {
                Some(alpha) => assert_eq!(*v, seq.value_at(&alpha).unwrap()),
                None => assert_eq!(*v, r(0.0)),
            }
        }
    }

    #[test]
    fn kernel_check_examples() {
        let cand = [(vec![r(1.0)], 0usize)];
        let a = mask1(&[(0, 1.0), (2, -1.0)]);
        assert!(subdivision_kernel_check(&a, &two(), &cand, ZERO_TOL)
            .unwrap()
            .pass());

        let a2 = mask1(&[(0, 1.0), (2, -2.0), (4, 1.0)]);
        let rep = subdivision_kernel_check(&a2, &two(), &[(vec![r(1.0)], 1)], ZERO_TOL).unwrap();
        assert!(rep.pass());
        assert_eq!(rep.candidates[0].max_order, Some(1));

        let b = mask1(&[(0, 0.5), (1, 1.0), (2, 0.5)]);
        let rep = subdivision_kernel_check(&b, &two(), &cand, ZERO_TOL).unwrap();
        assert!(!rep.pass());
        assert_eq!(rep.candidates[0].max_order, None);

        let rep = subdivision_kernel_check(
            &Impulse::delta(idx(&[0, 0])),
            &Dilation::quincunx(),
            &[(vec![r(1.0), r(1.0)], 0)],
            ZERO_TOL,
        )
        .unwrap();
        assert!(!rep.pass());
        assert_eq!(rep.subsymbols.len(), 2);
    }

    #[test]
    fn subsymbol_identities() {
        let a = Impulse::from_real(
            2,
            &[
                (&[0, 0], 1.0),
                (&[1, 0], -2.0),
                (&[0, 2], 0.5),
                (&[-1, 1], 3.0),
                (&[2, -1], 0.25),
            ],
        )
        .unwrap();
        let z = [C64::new(0.8, 0.3), C64::new(-0.4, 1.1)];
        for xi in [
            Dilation::scalar(2, 2).unwrap(),
            Dilation::quincunx(),
            Dilation::new(vec![vec![2, 0], vec![0, 3]]).unwrap(),
        ] {
            assert!(reconstruction_residual(&a, &xi, &z).unwrap() < 1e-12);
            assert!(modulation_identity_residual(&a, &xi, &z).unwrap() < 1e-12);
            assert!(unit_root_residual(&xi).unwrap() < 1e-12);
        }
    }

    #[test]
    fn uncorrected_modulation_identity_fails_for_order_three() {
        // a_ξ*(z^Ξ) = |det|⁻¹ Σ m^ξ a*(m z) breaks once −ξ ≢ ξ mod Ξ
        let a = Impulse::from_real(2, &[(&[0, 1], 1.0), (&[0, 2], 2.0)]).unwrap();
        let xi = Dilation::new(vec![vec![2, 0], vec![0, 3]]).unwrap();
        let z = [C64::new(1.1, 0.2), C64::new(0.7, -0.5)];
        let subs = subsymbols(&a, &xi).unwrap();
        let zx = z_pow_xi(&z, &xi).unwrap();
        let mods = modulations(&xi).unwrap();
        let rep = idx(&[0, 1]);
        let lhs = subs[&rep].eval(&zx).unwrap();
        let mut rhs = C64::new(0.0, 0.0);
        for m in &mods {
            let p: Vec<C64> = m.iter().zip(&z).map(|(a, b)| a * b).collect();
            rhs += rep.pow(m).unwrap() * a.symbol().eval(&p).unwrap();
        }
        rhs /= mods.len() as f64;
        assert!((lhs - rhs).norm() > 0.1);
        assert!(modulation_identity_residual(&a, &xi, &z).unwrap() < 1e-12);
    }
}

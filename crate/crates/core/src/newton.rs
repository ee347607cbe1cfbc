//! Forward differences, Newton coefficients, the operator `L` and its inverse,
//! the shift-invariant spaces `P_θ` and their shift matrices `G(y)`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::apolar::{ortho_homog_basis, DInvariantSpace, OrthoHomogBasis, SPAN_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, MonomialIndex};
use crate::mpoly::{
    falling_factorial, scale_vars, sigma_minus, MultiIndex, Poly, C64, MAX_FACTORIAL,
};

/// `Δ^γ f`, built from `Δ_j f = f(· + ε_j) − f`.
pub fn forward_difference(f: &Poly, gamma: &MultiIndex) -> Result<Poly> {
    if gamma.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: gamma.dim(),
        });
    }
    if !gamma.is_nonneg() {
        return Err(Error::NegativeExponent("difference order"));
    }
    let dim = f.dim();
    let mut g = f.clone();
    for (j, &k) in gamma.entries().iter().enumerate() {
        let mut unit = vec![C64::new(0.0, 0.0); dim];
        unit[j] = C64::new(1.0, 0.0);
        for _ in 0..k {
            if g.is_zero() {
                return Ok(g);
            }
            g = g.translate(&unit)?.checked_sub(&g)?;
        }
    }
    Ok(g)
}

/// Stirling numbers of the second kind `S(n, k)`, `0 ≤ k ≤ n ≤ MAX_FACTORIAL`.
fn stirling2_table() -> Vec<Vec<f64>> {
    let n_max = MAX_FACTORIAL as usize;
    let mut s = vec![vec![0u128; n_max + 1]; n_max + 1];
    s[0][0] = 1;
    for n in 1..=n_max {
        for k in 1..=n {
            s[n][k] = k as u128 * s[n - 1][k] + s[n - 1][k - 1];
        }
    }
    s.into_iter()
        .map(|row| row.into_iter().map(|v| v as f64).collect())
        .collect()
}

/// Newton coefficients `Δ^γ f(0) / γ!` of a polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonCoeffs {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, C64>,
}

impl NewtonCoeffs {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, C64> {
        &self.coeffs
    }

    pub fn get(&self, gamma: &MultiIndex) -> C64 {
        self.coeffs.get(gamma).copied().unwrap_or_default()
    }

    /// `Σ_γ c_γ (x)_γ`.
    pub fn reconstruct(&self) -> Result<Poly> {
        let mut p = Poly::zero(self.dim);
        for (g, c) in &self.coeffs {
            p = p.checked_add(&falling_factorial(g)?.scale(*c))?;
        }
        Ok(p)
    }

    /// The same coefficients read as monomial coefficients, i.e. `L f`.
    pub fn as_monomial_poly(&self) -> Result<Poly> {
        Poly::from_terms(self.dim, self.coeffs.iter().map(|(g, c)| (g.clone(), *c)))
    }
}

/// Newton coefficients via `x^n = Σ_k S(n,k) (x)_k` coordinatewise.
pub fn newton_coeffs(f: &Poly) -> Result<NewtonCoeffs> {
    f.require_polynomial("Newton expansion")?;
    let dim = f.dim();
    let stirling = stirling2_table();
    let mut out = Poly::zero(dim);
    for (gamma, c) in f.terms() {
        if let Some(&e) = gamma.entries().iter().find(|&&e| e > MAX_FACTORIAL) {
            return Err(Error::Overflow(format!(
                "partial degree {e} above {MAX_FACTORIAL}"
            )));
        }
        let mut partial: Vec<(Vec<i64>, f64)> = vec![(Vec::with_capacity(dim), 1.0)];
        for &g in gamma.entries() {
            let row = &stirling[g as usize];
            let mut next = Vec::new();
            for (exp, w) in &partial {
                for (k, &s) in row.iter().enumerate().take(g as usize + 1) {
                    if s != 0.0 {
                        let mut ne = exp.clone();
                        ne.push(k as i64);
                        next.push((ne, w * s));
                    }
                }
            }
            partial = next;
        }
        for (exp, w) in partial {
            out.add_term(MultiIndex::new(exp), c * w);
        }
    }
    Ok(NewtonCoeffs {
        dim,
        coeffs: out.terms().clone(),
    })
}

/// `L f (x) = Σ_γ Δ^γ f(0)/γ! · x^γ`.
pub fn l_op(f: &Poly) -> Result<Poly> {
    newton_coeffs(f)?.as_monomial_poly()
}

/// `L⁻¹` by degree-graded back-substitution: `L` is the identity on leading
/// forms, so peeling off the top homogeneous part of the residual at each
/// degree terminates after `deg f + 1` steps.
pub fn l_inv(f: &Poly) -> Result<Poly> {
    f.require_polynomial("inverse Newton map")?;
    let Some(deg) = f.degree() else {
        return Ok(Poly::zero(f.dim()));
    };
    let mut g = Poly::zero(f.dim());
    let mut rest = f.clone();
    for k in (0..=deg).rev() {
        let part = rest.homogeneous_part(k);
        if part.is_zero() {
            continue;
        }
        rest = rest.checked_sub(&l_op(&part)?)?;
        g = g.checked_add(&part)?;
    }
    Ok(g)
}

/// Whether `σ_-` is applied after `L⁻¹ σ_θ` when building `P_θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    WithSigmaMinus,
    WithoutSigmaMinus,
}

/// Convention under which the annihilation equivalence holds; confirmed by
/// `spectrum::calibrate_convention` and its test.
pub const CALIBRATED_CONVENTION: Convention = Convention::WithSigmaMinus;

impl Default for Convention {
    fn default() -> Self {
        CALIBRATED_CONVENTION
    }
}

impl Convention {
    pub fn name(&self) -> &'static str {
        match self {
            Convention::WithSigmaMinus => "with-sigma",
            Convention::WithoutSigmaMinus => "without-sigma",
        }
    }
}

/// Basis of `P_θ = σ₋ L⁻¹ σ_θ Q_θ` (or `L⁻¹ σ_θ Q_θ`), one element per
/// orthonormal basis element of `Q_θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PThetaBasis {
    theta: Vec<C64>,
    elements: Vec<Poly>,
    convention: Convention,
}

impl PThetaBasis {
    pub fn theta(&self) -> &[C64] {
        &self.theta
    }

    pub fn elements(&self) -> &[Poly] {
        &self.elements
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn degree(&self) -> i64 {
        self.elements
            .iter()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }
}

pub fn build_p_theta(
    space: &DInvariantSpace,
    theta: &[C64],
    convention: Convention,
) -> Result<PThetaBasis> {
    let ortho = ortho_homog_basis(space)?;
    build_p_theta_from_ortho(&ortho, theta, convention)
}

pub fn build_p_theta_from_ortho(
    ortho: &OrthoHomogBasis,
    theta: &[C64],
    convention: Convention,
) -> Result<PThetaBasis> {
    if theta.len() != ortho.dim() {
        return Err(Error::DimensionMismatch {
            expected: ortho.dim(),
            found: theta.len(),
        });
    }
    let elements = ortho
        .elements()
        .iter()
        .map(|q| {
            let p = l_inv(&scale_vars(q, theta)?)?;
            Ok(match convention {
                Convention::WithSigmaMinus => sigma_minus(&p),
                Convention::WithoutSigmaMinus => p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PThetaBasis {
        theta: theta.to_vec(),
        elements,
        convention,
    })
}

/// `G(y)` with `p_i(· + y) = Σ_j G_ij p_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftMatrix {
    matrix: DMatrix<C64>,
    residual: f64,
}

impl ShiftMatrix {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn det(&self) -> C64 {
        self.matrix.determinant()
    }

    /// Relative least-squares residual of the expansion; large values mean the
    /// basis does not span a shift-invariant space.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn identity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        (&self.matrix - CMat::identity(n, n)).camax()
    }
}

pub fn shift_matrix(p: &PThetaBasis, y: &[C64]) -> Result<ShiftMatrix> {
    if y.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: y.len(),
        });
    }
    let n = p.len();
    if y.iter().all(|v| *v == C64::new(0.0, 0.0)) {
        return Ok(ShiftMatrix {
            matrix: CMat::identity(n, n),
            residual: 0.0,
        });
    }
    let shifted = p
        .elements()
        .iter()
        .map(|q| q.translate(y))
        .collect::<Result<Vec<_>>>()?;
    let index = MonomialIndex::from_polys(p.elements().iter().chain(&shifted));
    let a = index.matrix(p.elements(), false)?;
    let mut g = CMat::zeros(n, n);
    let mut worst: f64 = 0.0;
    for (i, s) in shifted.iter().enumerate() {
        let b = index.vector(s, false)?.expect("indexed");
        let (x, res) = linalg::lstsq(&a, &b)?;
        worst = worst.max(res / b.norm().max(f64::MIN_POSITIVE));
        for j in 0..n {
            g[(i, j)] = x[j];
        }
    }
    Ok(ShiftMatrix {
        matrix: g,
        residual: worst,
    })
}

/// Largest relative residual of `p(· + y)` against `span(P)`.
pub fn shift_invariance_residual(p: &PThetaBasis, y: &[C64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for q in p.elements() {
        let r = crate::apolar::span_residual(p.elements(), &q.translate(y)?)?;
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Whether two bases span the same space (apolar relative residual).
pub fn same_span(a: &[Poly], b: &[Poly]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    for f in b {
        if crate::apolar::span_residual(a, f)? > SPAN_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

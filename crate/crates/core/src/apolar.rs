//! The apolar (Bombieri) inner product `(f, g) = Σ α! f_α conj(g_α)`,
//! D-invariance tests and orthonormal homogeneous bases.
//!
//! Under this product multiplication by `p̄` is adjoint to `p(D)`, and
//! homogeneous polynomials of different degrees are orthogonal, which is what
//! makes a degree-by-degree Gram–Schmidt produce a homogeneous orthonormal
//! basis of a D-invariant space.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{self, CVec, MonomialIndex};
use crate::mpoly::{apply_poly_diff, MultiIndex, Poly, Residual, C64};

/// Default relative least-squares residual separating span members from non-members.
pub const SPAN_TOL: f64 = 1e-8;

/// Relative singular-value threshold for declaring a basis dependent.
const INDEPENDENCE_TOL: f64 = 1e-10;

pub fn bombieri(f: &Poly, g: &Poly) -> Result<C64> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: g.dim(),
        });
    }
    f.require_polynomial("apolar product")?;
    g.require_polynomial("apolar product")?;
    let (small, large, swapped) = if f.len() <= g.len() {
        (f, g, false)
    } else {
        (g, f, true)
    };
    let mut acc = C64::new(0.0, 0.0);
    for (e, a) in small.terms() {
        let b = large.coeff(e);
        if b == C64::new(0.0, 0.0) {
            continue;
        }
        let (fa, gb) = if swapped { (b, *a) } else { (*a, b) };
        acc += fa * gb.conj() * e.factorial()?;
    }
    Ok(acc)
}

pub fn bombieri_norm(f: &Poly) -> Result<f64> {
    Ok(bombieri(f, f)?.re.max(0.0).sqrt())
}

/// `|(p(D) f, g) − (f, p̄ g)|` with the magnitude of both sides as scale.
pub fn adjoint_check(p: &Poly, f: &Poly, g: &Poly) -> Result<Residual> {
    let lhs = bombieri(&apply_poly_diff(p, f)?, g)?;
    let pg = p.conj().checked_mul(g)?;
    let rhs = bombieri(f, &pg)?;
    Ok(Residual {
        value: (lhs - rhs).norm(),
        scale: bombieri_norm(f)? * bombieri_norm(&pg)? + 1.0,
    })
}

/// Relative residual `‖f − proj f‖ / ‖f‖` of projecting `f` onto `span(basis)`
/// in the apolar norm. Zero for `f = 0`.
pub fn span_residual(basis: &[Poly], f: &Poly) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let index = MonomialIndex::from_polys(basis.iter().chain(std::iter::once(f)));
    let a = index.matrix(basis, true)?;
    let b = index.vector(f, true)?.expect("f is part of the index");
    let (_, res) = linalg::lstsq(&a, &b)?;
    Ok(res / b.norm())
}

/// Outcome of [`is_d_invariant`].
#[derive(Clone, Debug, PartialEq)]
pub enum Invariance {
    Invariant,
    /// `D^{ε_coordinate}` of basis element `element` leaves the span.
    Violation {
        element: usize,
        coordinate: usize,
        residual: f64,
    },
}

impl Invariance {
    pub fn holds(&self) -> bool {
        matches!(self, Invariance::Invariant)
    }
}

fn check_basis(basis: &[Poly]) -> Result<usize> {
    let first = basis.first().ok_or(Error::EmptyBasis)?;
    let dim = first.dim();
    for q in basis {
        if q.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: q.dim(),
            });
        }
        q.require_polynomial("D-invariant space")?;
        if q.is_zero() {
            return Err(Error::LinearlyDependent);
        }
    }
    let index = MonomialIndex::from_polys(basis);
    let a = index.matrix(basis, true)?;
    if a.nrows() < a.ncols() || linalg::rank(&a, INDEPENDENCE_TOL) < a.ncols() {
        return Err(Error::LinearlyDependent);
    }
    Ok(dim)
}

/// Checks closure of `span(basis)` under every `∂/∂z_j`.
pub fn is_d_invariant(basis: &[Poly], tol: f64) -> Result<Invariance> {
    let dim = check_basis(basis)?;
    for (i, q) in basis.iter().enumerate() {
        for j in 0..dim {
            let d = q.diff(&MultiIndex::unit(dim, j))?;
            if d.is_zero() {
                continue;
            }
            let index = MonomialIndex::from_polys(basis.iter().chain(std::iter::once(&d)));
            let a = index.matrix(basis, true)?;
            let b = index.vector(&d, true)?.expect("derivative is indexed");
            let (_, res) = linalg::lstsq(&a, &b)?;
            let residual = res / bombieri_norm(q)?;
            if residual > tol {
                return Ok(Invariance::Violation {
                    element: i,
                    coordinate: j,
                    residual,
                });
            }
        }
    }
    Ok(Invariance::Invariant)
}

/// A finite-dimensional polynomial space closed under differentiation,
/// represented by the span of a linearly independent basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DInvariantSpace {
    dim: usize,
    basis: Vec<Poly>,
    degree: i64,
}

impl DInvariantSpace {
    pub fn new(basis: Vec<Poly>) -> Result<Self> {
        Self::with_tolerance(basis, SPAN_TOL)
    }

    pub fn with_tolerance(basis: Vec<Poly>, tol: f64) -> Result<Self> {
        match is_d_invariant(&basis, tol)? {
            Invariance::Invariant => {}
            Invariance::Violation {
                element,
                coordinate,
                residual,
            } => {
                return Err(Error::NotDInvariant {
                    element,
                    coordinate,
                    residual,
                })
            }
        }
        let degree = basis.iter().filter_map(Poly::degree).max().unwrap_or(0);
        Ok(DInvariantSpace {
            dim: basis[0].dim(),
            basis,
            degree,
        })
    }

    /// `Π_k`: all polynomials of total degree ≤ k.
    pub fn full(dim: usize, k: usize) -> Self {
        Self::lower_set(dim, crate::mpoly::monomials_up_to(dim, k))
            .expect("total-degree monomials form a lower set")
    }

    /// Span of monomials indexed by `exps`; must be closed under divisibility.
    pub fn lower_set(dim: usize, exps: Vec<MultiIndex>) -> Result<Self> {
        let basis = exps
            .into_iter()
            .map(|e| Poly::monomial(e, C64::new(1.0, 0.0)))
            .collect::<Vec<_>>();
        if basis.iter().any(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: basis
                    .iter()
                    .map(Poly::dim)
                    .find(|&d| d != dim)
                    .unwrap_or(dim),
            });
        }
        Self::new(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `max{deg q : q ∈ Q}`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(span_residual(&self.basis, f)? <= SPAN_TOL)
    }
}

/// Homogeneous basis, orthonormal under the apolar product, sorted by degree.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoHomogBasis {
    dim: usize,
    elements: Vec<Poly>,
}

impl OrthoHomogBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[Poly] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements grouped by total degree.
    pub fn by_degree(&self) -> BTreeMap<i64, Vec<&Poly>> {
        let mut out: BTreeMap<i64, Vec<&Poly>> = BTreeMap::new();
        for q in &self.elements {
            out.entry(q.degree().unwrap_or(0)).or_default().push(q);
        }
        out
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((bombieri(a, b)? - target).norm());
            }
        }
        Ok(worst)
    }

    /// Coefficients `(f, q) = (q̄(D) f)(0)` of `f` in this basis.
    pub fn coefficients(&self, f: &Poly) -> Result<Vec<C64>> {
        self.elements.iter().map(|q| bombieri(f, q)).collect()
    }
}

/// Degree-graded Gram–Schmidt with two re-orthogonalization passes.
pub fn ortho_homog_basis(space: &DInvariantSpace) -> Result<OrthoHomogBasis> {
    let dim = space.dim();
    let mut components: BTreeMap<i64, Vec<Poly>> = BTreeMap::new();
    for q in space.basis() {
        for (k, part) in q.homogeneous_components() {
            components.entry(k).or_default().push(part);
        }
    }
    let mut elements = Vec::with_capacity(space.len());
    for parts in components.values() {
        let index = MonomialIndex::from_polys(parts);
        let mut accepted: Vec<CVec> = Vec::new();
        for part in parts {
            let v = index.vector(part, true)?.expect("indexed");
            let vnorm = v.norm();
            let mut w = v.clone();
            for _ in 0..2 {
                for u in &accepted {
                    let proj = u.dotc(&w);
                    w -= u * proj;
                }
            }
            let wnorm = w.norm();
            if wnorm > SPAN_TOL * vnorm {
                accepted.push(w / C64::new(wnorm, 0.0));
            }
        }
        for u in &accepted {
            elements.push(index.poly(dim, u, true)?);
        }
    }
    if elements.len() != space.len() {
        return Err(Error::NotHomogeneouslyGenerated);
    }
    Ok(OrthoHomogBasis { dim, elements })
}

/// Residual of `f = Σ_q (q̄(D) f)(0) q` for `f` in the span.
pub fn ortho_expansion_residual(basis: &OrthoHomogBasis, f: &Poly) -> Result<f64> {
    let coeffs = basis.coefficients(f)?;
    let mut rec = Poly::zero(basis.dim());
    for (q, c) in basis.elements().iter().zip(coeffs) {
        rec = rec.checked_add(&q.scale(c))?;
    }
    let diff = f.checked_sub(&rec)?;
    Ok(bombieri_norm(&diff)? / bombieri_norm(f)?.max(1.0))
}

/// `|f(x+y) − Σ_q (q̄(D) f)(y) q(x)|` over the orthonormal homogeneous basis
/// (for real `q` the conjugation is void).
pub fn taylor_identity_residual(
    space: &DInvariantSpace,
    f: &Poly,
    x: &[C64],
    y: &[C64],
) -> Result<Residual> {
    let r = span_residual(space.basis(), f)?;
    if r > SPAN_TOL {
        return Err(Error::NotInSpan(r));
    }
    let basis = ortho_homog_basis(space)?;
    let xy: Vec<C64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    if xy.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: xy.len(),
        });
    }
    let lhs = f.eval(&xy)?;
    let mut rhs = C64::new(0.0, 0.0);
    let mut scale = lhs.norm();
    for q in basis.elements() {
        let term = apply_poly_diff(&q.conj(), f)?.eval(y)? * q.eval(x)?;
        scale += term.norm();
        rhs += term;
    }
    Ok(Residual {
        value: (lhs - rhs).norm(),
        scale,
    })
}

//! Small dense linear-algebra helpers over complex matrices, plus the mapping
//! between polynomials and coefficient vectors.

use std::collections::BTreeMap;

use nalgebra::{ColPivQR, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mpoly::{MultiIndex, Poly, C64};

pub(crate) type CMat = DMatrix<C64>;
pub(crate) type CVec = DVector<C64>;

/// Relative pivot threshold below which a column-pivoted QR is declared singular.
pub(crate) const QR_SINGULAR_REL: f64 = 1e-12;

/// Ordered set of exponents used as coordinates for coefficient vectors.
#[derive(Clone, Debug)]
pub(crate) struct MonomialIndex {
    exps: Vec<MultiIndex>,
    pos: BTreeMap<MultiIndex, usize>,
}

impl MonomialIndex {
    pub(crate) fn from_exps(mut exps: Vec<MultiIndex>) -> Self {
        exps.sort();
        exps.dedup();
        let pos = exps
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        MonomialIndex { exps, pos }
    }

    pub(crate) fn from_polys<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> Self {
        let exps = polys
            .into_iter()
            .flat_map(|p| p.terms().keys().cloned())
            .collect();
        Self::from_exps(exps)
    }

    pub(crate) fn len(&self) -> usize {
        self.exps.len()
    }

    fn weight(e: &MultiIndex, weighted: bool) -> Result<f64> {
        if weighted {
            Ok(e.factorial()?.sqrt())
        } else {
            Ok(1.0)
        }
    }

    /// Coefficient vector; with `weighted` the coordinates are `sqrt(α!) f_α`
    /// so the Euclidean product equals the apolar product. Returns `None` if
    /// `p` has a term outside the index.
    pub(crate) fn vector(&self, p: &Poly, weighted: bool) -> Result<Option<CVec>> {
        let mut v = CVec::zeros(self.len());
        for (e, c) in p.terms() {
            match self.pos.get(e) {
                Some(&i) => v[i] = c * Self::weight(e, weighted)?,
                None => return Ok(None),
            }
        }
        Ok(Some(v))
    }

    pub(crate) fn matrix(&self, polys: &[Poly], weighted: bool) -> Result<CMat> {
        let mut m = CMat::zeros(self.len(), polys.len());
        for (j, p) in polys.iter().enumerate() {
            let v = self
                .vector(p, weighted)?
                .ok_or_else(|| Error::Internal("term outside monomial index".into()))?;
            m.set_column(j, &v);
        }
        Ok(m)
    }

    pub(crate) fn poly(&self, dim: usize, v: &CVec, weighted: bool) -> Result<Poly> {
        let mut terms = Vec::with_capacity(self.len());
        for (e, c) in self.exps.iter().zip(v.iter()) {
            terms.push((e.clone(), c / Self::weight(e, weighted)?));
        }
        Poly::from_terms(dim, terms)
    }
}

/// Singular values in descending order with the matching right singular
/// vectors as columns of a square `ncols × ncols` unitary matrix.
pub(crate) fn svd_right(a: &CMat) -> (Vec<f64>, CMat) {
    let (m, n) = a.shape();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let padded = if m < n {
        let mut p = CMat::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut v = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        for r in 0..n {
            v[(r, k)] = v_t[(i, r)].conj();
        }
    }
    (sv, v)
}

pub(crate) fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Numerical rank: singular values above `rel · σ_max`.
pub(crate) fn rank(a: &CMat, rel: f64) -> usize {
    let sv = singular_values(a);
    match sv.first() {
        None => 0,
        Some(&0.0) => 0,
        Some(&smax) => sv.iter().filter(|&&s| s > rel * smax).count(),
    }
}

/// Orthonormal basis of the nullspace as matrix columns.
pub(crate) fn nullspace(a: &CMat, rel: f64) -> CMat {
    let n = a.ncols();
    let r = rank(a, rel);
    let (_, v) = svd_right(a);
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    v.columns(r, n - r).into_owned()
}

/// Minimum-norm least-squares solution via the pseudo-inverse.
pub(crate) fn min_norm_solve(a: &CMat, b: &CMat, rel: f64) -> Result<CMat> {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    let svd = a.clone().svd(true, true);
    svd.solve(b, rel * smax)
        .map_err(|e| Error::Internal(e.into()))
}

/// Least squares `min ‖A x − b‖` for a full-column-rank `A` via column-pivoted
/// QR. Returns the solution and the residual norm.
pub(crate) fn lstsq(a: &CMat, b: &CVec) -> Result<(CVec, f64)> {
    let (m, n) = a.shape();
    if n == 0 {
        return Ok((CVec::zeros(0), b.norm()));
    }
    if m < n {
        return Err(Error::Singular);
    }
    let qr = ColPivQR::new(a.clone());
    let r = qr.r();
    let anorm = a.norm();
    for i in 0..n {
        if r[(i, i)].norm() <= QR_SINGULAR_REL * anorm {
            return Err(Error::Singular);
        }
    }
    let mut qtb = b.clone();
    qr.q_tr_mul(&mut qtb);
    let top = qtb.rows(0, n).into_owned();
    let mut x = r.solve_upper_triangular(&top).ok_or(Error::Singular)?;
    qr.p().inv_permute_rows(&mut x);
    let res = (a * &x - b).norm();
    Ok((x, res))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn lstsq_recovers_complex_solution() {
        let a = CMat::from_row_slice(
            4,
            2,
            &[
                c(1.0, 0.0),
                c(2.0, 1.0),
                c(0.0, 1.0),
                c(1.0, 0.0),
                c(3.0, -1.0),
                c(0.5, 0.0),
                c(1.0, 1.0),
                c(-2.0, 0.0),
            ],
        );
        let x = CVec::from_vec(vec![c(0.3, -1.0), c(2.0, 0.5)]);
        let b = &a * &x;
        let (sol, res) = lstsq(&a, &b).unwrap();
        assert!((sol - x).norm() < 1e-12);
        assert!(res < 1e-12);
    }

    #[test]
    fn lstsq_detects_singular() {
        let a = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        let b = CVec::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(lstsq(&a, &b).unwrap_err(), Error::Singular);
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let a = CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let ns = nullspace(&a, 1e-12);
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).norm() < 1e-12);
        let gram = ns.adjoint() * &ns;
        assert!((gram - CMat::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn min_norm_solution() {
        let a = CMat::from_row_slice(1, 2, &[c(1.0, 0.0), c(1.0, 0.0)]);
        let b = CMat::from_row_slice(1, 1, &[c(2.0, 0.0)]);
        let x = min_norm_solve(&a, &b, 1e-12).unwrap();
        assert!((x[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((x[(1, 0)] - c(1.0, 0.0)).norm() < 1e-12);
    }
}

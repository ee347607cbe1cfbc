//! JSON wire formats and conversions to the library types.

use serde::{Deserialize, Serialize};

use crate::apolar::DInvariantSpace;
use crate::error::{Error, Result};
use crate::filters::{ExpPolySeq, Impulse};
use crate::mpoly::{MultiIndex, Poly, C64};
use crate::spectrum::{Spectrum, Zero};
use crate::subdivision::Dilation;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for WireComplex {
    fn from(c: C64) -> Self {
        WireComplex { re: c.re, im: c.im }
    }
}

impl WireComplex {
    pub fn value(&self) -> Result<C64> {
        if self.re.is_finite() && self.im.is_finite() {
            Ok(C64::new(self.re, self.im))
        } else {
            Err(Error::NonFinite)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireTerm {
    pub exp: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

pub type WirePoly = Vec<WireTerm>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireZero {
    pub theta: Vec<WireComplex>,
    #[serde(rename = "Q_basis")]
    pub q_basis: Vec<WirePoly>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireSpectrum {
    pub dim: usize,
    pub zeros: Vec<WireZero>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireTap {
    pub index: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireImpulse {
    pub dim: usize,
    pub taps: Vec<WireTap>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireSeqTerm {
    pub theta: Vec<WireComplex>,
    pub p: WirePoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireExpPolySeq {
    /// Needed only when `terms` is empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub terms: Vec<WireSeqTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireDilation {
    #[serde(rename = "Xi")]
    pub xi: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireCandidate {
    pub theta: Vec<WireComplex>,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireCandidates {
    pub candidates: Vec<WireCandidate>,
}

/// `h ∗ c = λ c(· + shift)` on `P_θ e_θ`; `Q_basis` defaults to `{1}` and
/// `shift` to the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireEigenSpec {
    pub theta: Vec<WireComplex>,
    #[serde(rename = "Q_basis", default, skip_serializing_if = "Option::is_none")]
    pub q_basis: Option<Vec<WirePoly>>,
    pub lambda: WireComplex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<i64>>,
}

/// Parsed eigen-problem input.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSpec {
    pub theta: Vec<C64>,
    pub space: DInvariantSpace,
    pub lambda: C64,
    pub shift: MultiIndex,
}

pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("wire types serialize")
}

fn complex_vec(v: &[WireComplex]) -> Result<Vec<C64>> {
    v.iter().map(WireComplex::value).collect()
}

fn complex_wire(v: &[C64]) -> Vec<WireComplex> {
    v.iter().copied().map(WireComplex::from).collect()
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn finite(re: f64, im: f64) -> Result<C64> {
    WireComplex { re, im }.value()
}

pub fn poly_to_wire(p: &Poly) -> WirePoly {
    p.terms()
        .iter()
        .map(|(e, c)| WireTerm {
            exp: e.entries().to_vec(),
            re: c.re,
            im: c.im,
        })
        .collect()
}

pub fn poly_from_wire(w: &WirePoly, dim: usize) -> Result<Poly> {
    let mut terms = Vec::with_capacity(w.len());
    for t in w {
        check_len(dim, t.exp.len())?;
        terms.push((MultiIndex::new(t.exp.clone()), finite(t.re, t.im)?));
    }
    Poly::from_terms(dim, terms)
}

/// Dimension inferred from the exponents, which must agree.
pub fn poly_from_wire_inferred(w: &WirePoly) -> Result<Poly> {
    let dim = w
        .first()
        .map(|t| t.exp.len())
        .ok_or_else(|| Error::Parse("cannot infer the dimension of an empty polynomial".into()))?;
    poly_from_wire(w, dim)
}

pub fn impulse_to_wire(h: &Impulse) -> WireImpulse {
    WireImpulse {
        dim: h.dim(),
        taps: h
            .taps()
            .iter()
            .map(|(e, c)| WireTap {
                index: e.entries().to_vec(),
                re: c.re,
                im: c.im,
            })
            .collect(),
    }
}

pub fn impulse_from_wire(w: &WireImpulse) -> Result<Impulse> {
    if w.dim == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let mut taps = Vec::with_capacity(w.taps.len());
    for t in &w.taps {
        check_len(w.dim, t.index.len())?;
        taps.push((MultiIndex::new(t.index.clone()), finite(t.re, t.im)?));
    }
    Impulse::new(w.dim, taps)
}

pub fn spectrum_to_wire(s: &Spectrum) -> WireSpectrum {
    WireSpectrum {
        dim: s.dim(),
        zeros: s
            .zeros()
            .iter()
            .map(|z| WireZero {
                theta: complex_wire(z.theta()),
                q_basis: z.space().basis().iter().map(poly_to_wire).collect(),
            })
            .collect(),
    }
}

pub fn spectrum_from_wire(w: &WireSpectrum) -> Result<Spectrum> {
    if w.dim == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let zeros = w
        .zeros
        .iter()
        .map(|z| {
            check_len(w.dim, z.theta.len())?;
            let basis = z
                .q_basis
                .iter()
                .map(|p| poly_from_wire(p, w.dim))
                .collect::<Result<Vec<_>>>()?;
            Zero::new(complex_vec(&z.theta)?, DInvariantSpace::new(basis)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Spectrum::new(w.dim, zeros)
}

pub fn seq_to_wire(s: &ExpPolySeq) -> WireExpPolySeq {
    WireExpPolySeq {
        dim: Some(s.dim()),
        terms: s
            .terms()
            .iter()
            .map(|(t, p)| WireSeqTerm {
                theta: complex_wire(t),
                p: poly_to_wire(p),
            })
            .collect(),
    }
}

pub fn seq_from_wire(w: &WireExpPolySeq) -> Result<ExpPolySeq> {
    let dim = match (w.dim, w.terms.first()) {
        (Some(d), _) => d,
        (None, Some(t)) => t.theta.len(),
        (None, None) => return Err(Error::Parse("empty sequence needs \"dim\"".into())),
    };
    let terms = w
        .terms
        .iter()
        .map(|t| {
            check_len(dim, t.theta.len())?;
            Ok((complex_vec(&t.theta)?, poly_from_wire(&t.p, dim)?))
        })
        .collect::<Result<Vec<_>>>()?;
    ExpPolySeq::new(dim, terms)
}

pub fn dilation_to_wire(d: &Dilation) -> WireDilation {
    WireDilation {
        xi: d.matrix().to_vec(),
    }
}

pub fn dilation_from_wire(w: &WireDilation) -> Result<Dilation> {
    Dilation::new(w.xi.clone())
}

pub fn candidates_to_wire(c: &[(Vec<C64>, usize)]) -> WireCandidates {
    WireCandidates {
        candidates: c
            .iter()
            .map(|(t, k)| WireCandidate {
                theta: complex_wire(t),
                order: *k,
            })
            .collect(),
    }
}

pub fn candidates_from_wire(w: &WireCandidates, dim: usize) -> Result<Vec<(Vec<C64>, usize)>> {
    w.candidates
        .iter()
        .map(|c| {
            check_len(dim, c.theta.len())?;
            Ok((complex_vec(&c.theta)?, c.order))
        })
        .collect()
}

pub fn eigen_to_wire(e: &EigenSpec) -> WireEigenSpec {
    WireEigenSpec {
        theta: complex_wire(&e.theta),
        q_basis: Some(e.space.basis().iter().map(poly_to_wire).collect()),
        lambda: e.lambda.into(),
        shift: Some(e.shift.entries().to_vec()),
    }
}

pub fn eigen_from_wire(w: &WireEigenSpec) -> Result<EigenSpec> {
    let dim = w.theta.len();
    if dim == 0 {
        return Err(Error::Parse("theta must be nonempty".into()));
    }
    let basis = match &w.q_basis {
        Some(b) => b
            .iter()
            .map(|p| poly_from_wire(p, dim))
            .collect::<Result<Vec<_>>>()?,
        None => vec![Poly::one(dim)],
    };
    let shift = match &w.shift {
        Some(s) => {
            check_len(dim, s.len())?;
            MultiIndex::new(s.clone())
        }
        None => MultiIndex::zeros(dim),
    };
    Ok(EigenSpec {
        theta: complex_vec(&w.theta)?,
        space: DInvariantSpace::new(basis)?,
        lambda: w.lambda.value()?,
        shift,
    })
}

pub fn parse_spectrum(text: &str) -> Result<Spectrum> {
    spectrum_from_wire(&from_str(text)?)
}

/// A filters file is a JSON array of impulses.
pub fn parse_filters(text: &str) -> Result<Vec<Impulse>> {
    let w: Vec<WireImpulse> = from_str(text)?;
    w.iter().map(impulse_from_wire).collect()
}

pub fn parse_impulse(text: &str) -> Result<Impulse> {
    impulse_from_wire(&from_str(text)?)
}

pub fn parse_dilation(text: &str) -> Result<Dilation> {
    dilation_from_wire(&from_str(text)?)
}

pub fn parse_candidates(text: &str, dim: usize) -> Result<Vec<(Vec<C64>, usize)>> {
    candidates_from_wire(&from_str(text)?, dim)
}

pub fn parse_eigen_spec(text: &str) -> Result<EigenSpec> {
    eigen_from_wire(&from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_round_trip_is_sorted() {
        let text = r#"[{"exp":[0,2],"re":1.5,"im":0.0},{"exp":[1,0],"re":-2.0,"im":0.25}]"#;
        let w: WirePoly = from_str(text).unwrap();
        let p = poly_from_wire_inferred(&w).unwrap();
        let back = poly_to_wire(&p);
        assert_eq!(back[0].exp, vec![1, 0]);
        assert_eq!(poly_from_wire(&back, 2).unwrap(), p);
    }

    #[test]
    fn rejects_unknown_fields_and_ragged_exponents() {
        assert!(matches!(
            from_str::<WirePoly>(r#"[{"exp":[1],"re":1,"im":0,"x":1}]"#),
            Err(Error::Parse(_))
        ));
        let w: WirePoly =
            from_str(r#"[{"exp":[1],"re":1,"im":0},{"exp":[1,0],"re":1,"im":0}]"#).unwrap();
        assert!(matches!(
            poly_from_wire_inferred(&w),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn spectrum_round_trip() {
        let text = r#"{"dim":2,"zeros":[{"theta":[{"re":1,"im":0},{"re":2,"im":0}],
            "Q_basis":[[{"exp":[0,0],"re":1,"im":0}],[{"exp":[1,0],"re":1,"im":0},{"exp":[0,1],"re":1,"im":0}]]}]}"#;
        let s = parse_spectrum(text).unwrap();
        let again =
            spectrum_from_wire(&from_str(&to_string(&spectrum_to_wire(&s))).unwrap()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn eigen_defaults() {
        let e =
            parse_eigen_spec(r#"{"theta":[{"re":1,"im":0}],"lambda":{"re":1,"im":0}}"#).unwrap();
        assert_eq!(e.space.basis(), &[Poly::one(1)]);
        assert_eq!(e.shift, MultiIndex::zeros(1));
        assert_eq!(eigen_from_wire(&eigen_to_wire(&e)).unwrap(), e);
    }

    #[test]
    fn non_finite_rejected() {
        let w = WireImpulse {
            dim: 1,
            taps: vec![WireTap {
                index: vec![0],
                re: f64::NAN,
                im: 0.0,
            }],
        };
        assert_eq!(impulse_from_wire(&w).unwrap_err(), Error::NonFinite);
    }
}

//! Command implementations behind the `convkern` binary. Each command takes
//! the raw input texts and returns a [`Report`]; the binary only does I/O.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::filters::{certified_window, eigen_conditions, eigen_residual, ExpPolySeq, WindowedSeq};
use crate::json::{self, poly_to_wire, WireComplex};
use crate::mpoly::{Tolerance, C64};
use crate::newton::{shift_invariance_residual, Convention};
use crate::spectrum::{
    calibrate_convention, hermite_fundamentals, kernel_basis, p_theta_bases, verify_zero_dim,
    KernelOptions, KERNEL_TOL,
};
use crate::subdivision::{subdivision_kernel_check, Dilation, ZERO_TOL};

/// Bound on `|dual matrix − I|` accepted by `hermite`.
pub const KRONECKER_TOL: f64 = 1e-8;
/// Bound on the shift-invariance residual reported by `build-kernel`.
pub const SHIFT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    fn flag(name: impl Into<String>, value: f64, tolerance: f64, pass: bool) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub data: Value,
}

impl Report {
    fn new(command: &str, inputs: &[&str], checks: Vec<Check>, data: Value) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Report {
            command: command.into(),
            inputs_digest: digest(inputs),
            checks,
            pass,
            data,
        }
    }

    pub fn to_json(&self) -> String {
        json::to_string(self)
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Exit status for a failed command: 2 for unusable input, 1 otherwise.
pub fn error_exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        2
    } else {
        1
    }
}

/// SHA-256 over the length-prefixed inputs.
pub fn digest(inputs: &[&str]) -> String {
    let mut h = Sha256::new();
    for s in inputs {
        h.update((s.len() as u64).to_le_bytes());
        h.update(s.as_bytes());
    }
    hex::encode(h.finalize())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConventionChoice {
    /// Run the calibration and use the convention it selects.
    #[default]
    Auto,
    Fixed(Convention),
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Options {
    pub tol: Option<f64>,
    pub window_pad: usize,
    pub convention: ConventionChoice,
}

impl Options {
    fn convention(&self) -> Result<Convention> {
        match self.convention {
            ConventionChoice::Auto => calibrate_convention(),
            ConventionChoice::Fixed(c) => Ok(c),
        }
    }

    fn dual_tol(&self) -> Result<Tolerance> {
        match self.tol {
            Some(t) => Tolerance::uniform(t),
            None => Ok(Tolerance::default()),
        }
    }

    fn scalar_tol(&self, default: f64) -> Result<f64> {
        match self.tol {
            Some(t) if t.is_finite() && t > 0.0 => Ok(t),
            Some(_) => Err(Error::InvalidTolerance),
            None => Ok(default),
        }
    }
}

fn cvec(v: &[C64]) -> Vec<WireComplex> {
    v.iter().copied().map(WireComplex::from).collect()
}

fn cval(c: C64) -> Value {
    json!(WireComplex::from(c))
}

fn samples_json(s: &WindowedSeq) -> Value {
    Value::Array(
        s.samples()
            .iter()
            .map(|(a, v)| json!({"index": a.entries(), "re": v.re, "im": v.im}))
            .collect(),
    )
}

pub fn cmd_verify(filters: &str, spectrum: &str, opts: &Options) -> Result<Report> {
    let h = json::parse_filters(filters)?;
    let spec = json::parse_spectrum(spectrum)?;
    let dual_tol = opts.dual_tol()?;
    let kernel_tol = opts.scalar_tol(KERNEL_TOL)?;
    let convention = opts.convention()?;
    let report = verify_zero_dim(&h, &spec, dual_tol)?;
    let mut checks: Vec<Check> = report
        .checks
        .iter()
        .map(|c| {
            Check::at_most(
                format!("dual[h{}][z{}][q{}]", c.filter, c.zero, c.element),
                c.value.norm(),
                c.bound,
            )
        })
        .collect();
    let dual: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({"filter": c.filter, "zero": c.zero, "element": c.element,
                   "value": cval(c.value), "bound": c.bound})
        })
        .collect();
    let mut data = json!({"convention": convention.name(), "dual": dual});
    if report.pass {
        let kopts = KernelOptions {
            convention,
            dual_tol,
            kernel_tol,
            window_pad: opts.window_pad,
        };
        match kernel_basis(&h, &spec, &kopts) {
            Ok(kb) => {
                let mut kernel = Vec::new();
                for (i, comp) in kb.components.iter().enumerate() {
                    for (k, r) in comp.residuals.iter().enumerate() {
                        checks.push(Check::at_most(
                            format!("kernel[z{i}][p{k}]"),
                            *r,
                            kernel_tol,
                        ));
                    }
                    kernel.push(json!({
                        "theta": cvec(&comp.theta),
                        "basis": comp.basis.elements().iter().map(poly_to_wire).collect::<Vec<_>>(),
                        "residuals": comp.residuals,
                    }));
                }
                let deficit = (kb.count() - kb.rank) as f64;
                checks.push(Check::at_most("independence_rank_deficit", deficit, 0.0));
                data["kernel"] = Value::Array(kernel);
                data["count"] = json!(kb.count());
                data["rank"] = json!(kb.rank);
                data["window"] = json!({"lower": kb.window.lower().entries(),
                                        "upper": kb.window.upper().entries()});
            }
            Err(Error::CertificateFailed { residual, bound }) => {
                checks.push(Check::flag("kernel_certificate", residual, bound, false));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Report::new("verify", &[filters, spectrum], checks, data))
}

pub fn cmd_build_kernel(spectrum: &str, opts: &Options) -> Result<Report> {
    let spec = json::parse_spectrum(spectrum)?;
    let convention = opts.convention()?;
    let shift_tol = opts.scalar_tol(SHIFT_TOL)?;
    let mut checks = Vec::new();
    let mut kernel = Vec::new();
    for (i, (z, basis)) in spec
        .zeros()
        .iter()
        .zip(p_theta_bases(&spec, convention)?)
        .enumerate()
    {
        let ones = vec![C64::new(1.0, 0.0); spec.dim()];
        let r = shift_invariance_residual(&basis, &ones)?;
        checks.push(Check::at_most(
            format!("shift_invariance[z{i}]"),
            r,
            shift_tol,
        ));
        let mut samples = Vec::with_capacity(basis.len());
        for p in basis.elements() {
            let seq = ExpPolySeq::single(z.theta().to_vec(), p.clone())?;
            let w = certified_window(&[], &seq);
            samples.push(samples_json(&WindowedSeq::sample(&seq, &w)?));
        }
        kernel.push(json!({
            "theta": cvec(z.theta()),
            "basis": basis.elements().iter().map(poly_to_wire).collect::<Vec<_>>(),
            "samples": samples,
        }));
    }
    let data = json!({"convention": convention.name(), "kernel": kernel});
    Ok(Report::new("build-kernel", &[spectrum], checks, data))
}

pub fn cmd_hermite(spectrum: &str, opts: &Options) -> Result<Report> {
    let spec = json::parse_spectrum(spectrum)?;
    let tol = opts.scalar_tol(KRONECKER_TOL)?;
    let fs = hermite_fundamentals(&spec)?;
    let fundamentals: Vec<Value> = fs
        .labels()
        .iter()
        .zip(fs.polys())
        .map(|(&(z, q), p)| json!({"zero": z, "element": q, "poly": poly_to_wire(p)}))
        .collect();
    let dual = fs.dual_matrix();
    let matrix: Vec<Vec<WireComplex>> = (0..dual.nrows())
        .map(|i| (0..dual.ncols()).map(|j| dual[(i, j)].into()).collect())
        .collect();
    let checks = vec![Check::at_most("kronecker", fs.kronecker_defect(), tol)];
    let data = json!({"degree": fs.degree(), "fundamentals": fundamentals, "dual_matrix": matrix});
    Ok(Report::new("hermite", &[spectrum], checks, data))
}

pub fn cmd_subdivide(
    mask: &str,
    dilation: &str,
    candidates: &str,
    opts: &Options,
) -> Result<Report> {
    let a = json::parse_impulse(mask)?;
    let xi: Dilation = json::parse_dilation(dilation)?;
    if !xi.is_expanding() {
        return Err(Error::InvalidDilation("matrix is not expanding".into()));
    }
    if a.dim() != xi.dim() {
        return Err(Error::DimensionMismatch {
            expected: xi.dim(),
            found: a.dim(),
        });
    }
    let cands = json::parse_candidates(candidates, xi.dim())?;
    let tol = opts.scalar_tol(ZERO_TOL)?;
    let rep = subdivision_kernel_check(&a, &xi, &cands, tol)?;
    let mut checks = Vec::new();
    let mut cand_json = Vec::new();
    for (i, c) in rep.candidates.iter().enumerate() {
        for (name, t) in [
            ("symmetric_zero", &c.symmetric),
            ("common_subsymbol_zero", &c.subsymbol),
            ("kernel", &c.kernel),
        ] {
            checks.push(Check::flag(
                format!("candidate[{i}].{name}"),
                t.max_violation,
                tol,
                t.holds,
            ));
        }
        cand_json.push(json!({
            "theta": cvec(&c.theta),
            "order": c.order,
            "root": cvec(&c.root),
            "modulation_points": c.modulation_points.iter().map(|p| cvec(p)).collect::<Vec<_>>(),
            "symmetric_zero": {"holds": c.symmetric.holds, "max_violation": c.symmetric.max_violation},
            "common_subsymbol_zero": {"holds": c.subsymbol.holds, "max_violation": c.subsymbol.max_violation},
            "kernel": {"holds": c.kernel.holds, "max_violation": c.kernel.max_violation},
            "max_order": c.max_order,
        }));
    }
    let subs: Vec<Value> = rep
        .subsymbols
        .iter()
        .map(|(xi, p)| json!({"coset": xi.entries(), "poly": poly_to_wire(p)}))
        .collect();
    let data = json!({
        "det": xi.det() as i64,
        "subsymbols": subs,
        "modulations": rep.modulations.iter().map(|p| cvec(p)).collect::<Vec<_>>(),
        "candidates": cand_json,
    });
    Ok(Report::new(
        "subdivide",
        &[mask, dilation, candidates],
        checks,
        data,
    ))
}

pub fn cmd_eigen(filter: &str, eigen_spec: &str, opts: &Options) -> Result<Report> {
    let h = json::parse_impulse(filter)?;
    let e = json::parse_eigen_spec(eigen_spec)?;
    if h.dim() != e.theta.len() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: e.theta.len(),
        });
    }
    let dual_tol = opts.dual_tol()?;
    let kernel_tol = opts.scalar_tol(KERNEL_TOL)?;
    let convention = opts.convention()?;
    let cond = eigen_conditions(&h, &e.theta, &e.space, e.lambda, &e.shift, dual_tol)?;
    let mut checks: Vec<Check> = cond
        .checks
        .iter()
        .map(|c| Check::at_most(format!("condition[q{}]", c.element), c.violation, c.bound))
        .collect();
    let zero = crate::spectrum::Zero::new(e.theta.clone(), e.space.clone())?;
    let basis = crate::newton::build_p_theta_from_ortho(zero.ortho(), &e.theta, convention)?;
    let mut residuals = Vec::new();
    for (k, p) in basis.elements().iter().enumerate() {
        let seq = ExpPolySeq::single(e.theta.clone(), p.clone())?;
        let r = eigen_residual(&h, e.lambda, &e.shift, &seq)?;
        checks.push(Check::at_most(
            format!("residual[p{k}]"),
            r.relative(),
            kernel_tol,
        ));
        residuals.push(r.relative());
    }
    let conditions: Vec<Value> = cond
        .checks
        .iter()
        .map(|c| json!({"element": c.element, "lhs": cval(c.lhs), "rhs": cval(c.rhs)}))
        .collect();
    let data = json!({
        "convention": convention.name(),
        "shift": e.shift.entries(),
        "conditions": conditions,
        "basis": basis.elements().iter().map(poly_to_wire).collect::<Vec<_>>(),
        "residuals": residuals,
    });
    Ok(Report::new("eigen", &[filter, eigen_spec], checks, data))
}

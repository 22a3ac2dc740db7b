//! Envelope-inequality audits against frozen baselines.
//!
//! Each audit measures the sup of a solution quantity divided by its
//! claimed envelope; the measured constants are frozen into
//! `baselines.json` and later runs must not drift above them. Baselines
//! change only through `--freeze`.

use serde::{Deserialize, Serialize};
use stark_core::potential::Potential;
use stark_core::{asym, basis, shoot, volterra, weights};
use std::path::PathBuf;

/// Upward slack on frozen constants: room for FP wobble across platforms,
/// far below anything a real regression would produce.
pub const DRIFT: f64 = 1.02;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Baselines {
    pub schema: u32,
    /// Frozen envelope-audit constants, in audit order.
    pub envelope: Vec<NamedValue>,
    /// Frozen constant for the norm-denominator band 1 +- C n^{-1/3}.
    pub denominator_c_hat: Option<f64>,
}

const COMPILED: &str = include_str!("../baselines.json");

fn path_override() -> Option<PathBuf> {
    std::env::var_os("STARK_SPECTRA_BASELINES").map(PathBuf::from)
}

pub fn load() -> Result<Baselines, String> {
    let text = match path_override() {
        Some(p) => std::fs::read_to_string(&p)
            .map_err(|e| format!("cannot read baselines {}: {e}", p.display()))?,
        None => COMPILED.to_string(),
    };
    let b: Baselines = serde_json::from_str(&text).map_err(|e| format!("bad baselines: {e}"))?;
    if b.schema != 1 {
        return Err(format!("unsupported baselines schema {}", b.schema));
    }
    Ok(b)
}

/// Persist updated baselines. Requires `STARK_SPECTRA_BASELINES` so the
/// target is explicit; the compiled-in copy cannot be edited at runtime.
pub fn save(b: &Baselines) -> Result<PathBuf, String> {
    let p = path_override().ok_or_else(|| {
        "--freeze needs STARK_SPECTRA_BASELINES to point at the baselines file".to_string()
    })?;
    let mut text =
        serde_json::to_string_pretty(b).map_err(|e| format!("serialize baselines: {e}"))?;
    text.push('\n');
    std::fs::write(&p, text).map_err(|e| format!("cannot write {}: {e}", p.display()))?;
    Ok(p)
}

/// Run every envelope audit; returns (name, measured) in a stable order.
pub fn measure() -> Result<Vec<NamedValue>, String> {
    let mut out = Vec::new();

    let audit = basis::envelope_audit().map_err(|e| format!("basis audit: {e}"))?;
    for (name, value, _) in audit.sup {
        out.push(NamedValue { name: format!("basis-{name}"), value });
    }

    // Picard-series shape constants for a representative decaying potential.
    let q = Potential::exp_decay(1.0, 1.0);
    let z = 5.0;
    let omega = weights::omega(&q, z).map_err(|e| format!("omega: {e}"))?;
    let c = volterra::picard_c(&q, z, 12.0).map_err(|e| format!("picard: {e}"))?;
    let shapes = c.term_shape_ratios(omega);
    for (k, r) in shapes.iter().enumerate().take(7).skip(1) {
        out.push(NamedValue { name: format!("picard-term-shape-k{k}"), value: *r });
    }
    let s = volterra::picard_s(&q, z, 12.0).map_err(|e| format!("picard: {e}"))?;
    out.push(NamedValue { name: "picard-deviation".into(), value: s.deviation_ratio(omega) });

    // Boundary deviation of the decaying solution: |psi(q,z,0) - psi0(z,0)|
    // against the first-order envelope omega(q,z) g_A(-z) / sigma(-z),
    // where g_A(-z) = 1 on z >= 0.
    let mut xi_sup = 0.0f64;
    for k in 0..=12 {
        let zz = 5.0 * k as f64;
        let x_max = shoot::truncation_point(&q, zz).map_err(|e| format!("truncation: {e}"))?;
        let psi = shoot::psi_backward(&q, zz, x_max, None).map_err(|e| format!("psi: {e}"))?;
        let psi0 = basis::eval(zz, 0.0).map_err(|e| format!("basis: {e}"))?.psi0;
        let om = weights::omega(&q, zz).map_err(|e| format!("omega: {e}"))?;
        let ratio = (psi.psi_at_0 - psi0).abs() * weights::sigma(zz) / om;
        xi_sup = xi_sup.max(ratio);
    }
    out.push(NamedValue { name: "boundary-deviation".into(), value: xi_sup });

    // Index-scaled deviations of the boundary basis values from their
    // large-n normalizations at the Neumann eigenvalues.
    let mut a_sup = 0.0f64;
    let mut bp_sup = 0.0f64;
    for n in [5u64, 10, 20, 40, 80] {
        let (lambda, _) = shoot::unperturbed_point(0.0, n).map_err(|e| format!("root: {e}"))?;
        let ab = asym::alpha_beta(0.0, lambda).map_err(|e| format!("alpha_beta: {e}"))?;
        let (da, db) = asym::alpha_beta_deviation(n, &ab);
        a_sup = a_sup.max(da * n as f64);
        bp_sup = bp_sup.max(db * n as f64);
    }
    out.push(NamedValue { name: "alpha-normalization-scaled".into(), value: a_sup });
    out.push(NamedValue { name: "beta-prime-normalization-scaled".into(), value: bp_sup });

    Ok(out)
}

pub struct AuditOutcome {
    /// (name, measured, baseline, ok) per audit.
    pub rows: Vec<(String, f64, Option<f64>, bool)>,
    pub passed: bool,
    /// Where new baselines were written, when freezing.
    pub frozen_to: Option<PathBuf>,
}

/// Measure, compare against baselines (or refreeze them), and summarize.
pub fn run(freeze: bool) -> Result<AuditOutcome, String> {
    let measured = measure()?;
    if freeze {
        let mut b = load().unwrap_or(Baselines {
            schema: 1,
            envelope: Vec::new(),
            denominator_c_hat: None,
        });
        b.envelope = measured.clone();
        let path = save(&b)?;
        let rows = measured
            .into_iter()
            .map(|nv| (nv.name, nv.value, None, true))
            .collect();
        return Ok(AuditOutcome { rows, passed: true, frozen_to: Some(path) });
    }

    let baselines = load()?;
    let mut rows = Vec::with_capacity(measured.len());
    let mut passed = true;
    for nv in measured {
        let frozen = baselines
            .envelope
            .iter()
            .find(|b| b.name == nv.name)
            .map(|b| b.value);
        let ok = match frozen {
            Some(f) => nv.value.is_finite() && nv.value <= f * DRIFT + 1e-12,
            None => false,
        };
        passed &= ok;
        rows.push((nv.name, nv.value, frozen, ok));
    }
    Ok(AuditOutcome { rows, passed, frozen_to: None })
}

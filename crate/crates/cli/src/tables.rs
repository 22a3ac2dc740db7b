//! Data-table commands: zeros, unperturbed spectral data, and the full
//! shooting spectrum. Rows are computed in parallel over the index and
//! merged in order, so output bytes never depend on the thread count.

use crate::potfile::PotentialSpec;
use crate::report::Table;
use crate::NRange;
use rayon::prelude::*;
use serde_json::json;
use stark_core::airy::{self, ZeroKind};
use stark_core::shoot;

pub fn solver_echo() -> serde_json::Value {
    json!({
        "ode_rtol": shoot::ODE_RTOL,
        "oscillatory_atol": shoot::OSC_ATOL,
        "tail_pad": shoot::TAIL_PAD,
        "truncation_tol": shoot::TRUNC_TOL,
        "kappa_route_gate": shoot::KAPPA_ROUTE_GATE,
        "fd_step_scale": shoot::FD_STEP_SCALE,
    })
}

/// Zeros of Ai or Ai' with their McMahon-expansion seeds.
pub fn zeros(kind: ZeroKind, count: u64) -> Result<Table, String> {
    let table = airy::zero_table(kind, count).map_err(|e| format!("zeros: {e}"))?;
    let rows = table
        .values
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let n = i as u64 + 1;
            let guess = airy::mcmahon_guess(n, kind);
            vec![n as f64, z, guess, z - guess]
        })
        .collect();
    Ok(Table {
        name: "zeros",
        columns: vec!["n", "zero", "mcmahon", "residual"],
        config_echo: json!({
            "kind": match kind { ZeroKind::Ai => "ai", ZeroKind::AiPrime => "ai-prime" },
            "count": count,
        }),
        rows,
    })
}

/// Exact q = 0 spectral data by Airy root-finding; no ODE integration.
pub fn unperturbed(b: f64, range: NRange) -> Result<Table, String> {
    let rows: Vec<Result<Vec<f64>, String>> = range
        .ns()
        .par_iter()
        .map(|&n| {
            let (lambda, kappa) =
                shoot::unperturbed_point(b, n).map_err(|e| format!("n = {n}: {e}"))?;
            Ok(vec![n as f64, lambda, kappa])
        })
        .collect();
    Ok(Table {
        name: "unperturbed",
        columns: vec!["n", "lambda", "kappa"],
        config_echo: json!({ "b": b, "n": [range.lo, range.hi] }),
        rows: collect_rows(rows)?,
    })
}

/// Eigenvalues and norming data through the full shooting pipeline.
pub fn spectrum(spec: &PotentialSpec, b: f64, range: NRange) -> Result<Table, String> {
    let q = spec.build().map_err(|e| format!("potential: {e}"))?;
    let rows: Vec<Result<Vec<f64>, String>> = range
        .ns()
        .par_iter()
        .map(|&n| {
            let p = shoot::spectral_point(&q, b, n).map_err(|e| format!("n = {n}: {e}"))?;
            Ok(vec![
                n as f64,
                p.lambda,
                p.kappa,
                p.kappa_via_derivative,
                p.psi_at_0,
                p.psi_prime_at_0,
                p.norm_sq,
                p.w_residual,
                p.x_max,
            ])
        })
        .collect();
    Ok(Table {
        name: "spectrum",
        columns: vec![
            "n",
            "lambda",
            "kappa",
            "kappa_via_derivative",
            "psi_at_0",
            "psi_prime_at_0",
            "norm_sq",
            "w_residual",
            "x_max",
        ],
        config_echo: json!({
            "potential": spec.echo(),
            "b": b,
            "n": [range.lo, range.hi],
            "solver": solver_echo(),
        }),
        rows: collect_rows(rows)?,
    })
}

fn collect_rows(rows: Vec<Result<Vec<f64>, String>>) -> Result<Vec<Vec<f64>>, String> {
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        out.push(r?);
    }
    Ok(out)
}

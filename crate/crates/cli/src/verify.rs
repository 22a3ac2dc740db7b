//! Verification campaigns: numeric spectral data against the closed-form
//! predictions, with decay-rate fits where a rate is claimed.
//!
//! Slope targets assume the default weight exponent r = 2, where the
//! remainder theory predicts n^{-4/3} for the unperturbed formulas, n^{-1}
//! for perturbed eigenvalues, and n^{-5/6} for perturbed norming
//! exponents. Intervals are generous on the steep side: superconvergence
//! is not a failure.

use crate::envelope;
use crate::potfile::PotentialSpec;
use crate::report::{Report, Row, SCHEMA};
use crate::tables::solver_echo;
use crate::{Failure, NRange};
use rayon::prelude::*;
use serde_json::json;
use stark_core::potential::Potential;
use stark_core::{asym, shoot};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Campaign {
    /// Root-found lambda for q = 0 vs the closed asymptotic formula.
    UnperturbedEig,
    /// Exact kappa for q = 0 vs the closed asymptotic formula.
    UnperturbedKappa,
    /// Shooting eigenvalues vs the first-order prediction.
    Eig,
    /// Shooting norming exponents vs the first-order prediction.
    Kappa,
    /// Eigenfunction norm against its (3 pi n / 2)^{1/3} growth law.
    Denominator,
    /// Directional eigenvalue derivatives vs the eigenfunction integral.
    Gradient,
    /// Envelope-inequality audits against frozen baselines.
    Envelope,
}

impl Campaign {
    pub fn name(self) -> &'static str {
        match self {
            Campaign::UnperturbedEig => "unperturbed-eig",
            Campaign::UnperturbedKappa => "unperturbed-kappa",
            Campaign::Eig => "eig",
            Campaign::Kappa => "kappa",
            Campaign::Denominator => "denominator",
            Campaign::Gradient => "gradient",
            Campaign::Envelope => "envelope",
        }
    }

    fn needs_potential(self) -> bool {
        matches!(self, Campaign::Eig | Campaign::Kappa | Campaign::Denominator)
    }

    fn default_range(self) -> NRange {
        match self {
            Campaign::UnperturbedEig | Campaign::UnperturbedKappa => NRange { lo: 5, hi: 120 },
            _ => NRange { lo: 5, hi: 60 },
        }
    }

    fn slope_interval(self) -> Option<(f64, f64)> {
        match self {
            Campaign::UnperturbedEig | Campaign::UnperturbedKappa => Some((-1.6, -1.1)),
            Campaign::Eig => Some((-1.6, -0.8)),
            Campaign::Kappa => Some((-1.3, -0.55)),
            // The norm-ratio error routinely decays faster than its n^{-1/3}
            // bound, so the pass criterion is envelope containment; the
            // fitted slope is reported for information only.
            Campaign::Denominator | Campaign::Gradient | Campaign::Envelope => None,
        }
    }

    fn fits_slope(self) -> bool {
        !matches!(self, Campaign::Gradient | Campaign::Envelope)
    }
}

pub struct VerifyInputs {
    pub campaign: Campaign,
    pub potential: Option<PotentialSpec>,
    pub b: f64,
    pub r: f64,
    pub range: Option<NRange>,
    pub freeze: bool,
}

pub fn run(inp: VerifyInputs) -> Result<Report, Failure> {
    let started = Instant::now();
    let c = inp.campaign;

    if c.needs_potential() != inp.potential.is_some() {
        return Err(Failure::usage(if c.needs_potential() {
            format!("campaign {} needs --potential", c.name())
        } else {
            format!("campaign {} takes no --potential", c.name())
        }));
    }
    if inp.freeze && !matches!(c, Campaign::Envelope | Campaign::Denominator) {
        return Err(Failure::usage(format!("campaign {} has no baselines to freeze", c.name())));
    }
    let range = inp.range.unwrap_or_else(|| c.default_range());
    if c.fits_slope() && range.len() < 8 {
        return Err(Failure::usage(format!(
            "campaign {} fits a slope and needs at least 8 indices, got {}",
            c.name(),
            range.len()
        )));
    }

    let q = match &inp.potential {
        Some(spec) => Some(spec.build().map_err(|e| Failure::usage(format!("potential: {e}")))?),
        None => None,
    };
    let mut config = json!({
        "campaign": c.name(),
        "b": inp.b,
        "r": inp.r,
        "n": [range.lo, range.hi],
        "potential": inp.potential.as_ref().map(|s| s.echo()),
        "solver": solver_echo(),
    });

    let (rows, rows_ok, slope_override, frozen_note) = match c {
        Campaign::UnperturbedEig | Campaign::UnperturbedKappa => {
            let want_kappa = c == Campaign::UnperturbedKappa;
            let rows = par_rows(&range.ns(), |n| {
                let (lambda, kappa) = shoot::unperturbed_point(inp.b, n)?;
                let (lambda_pred, kappa_pred) = asym::unperturbed(inp.b, n)?;
                let (numeric, predicted) =
                    if want_kappa { (kappa, kappa_pred) } else { (lambda, lambda_pred) };
                Ok(Row { n, numeric, predicted, residual: numeric - predicted })
            })?;
            // At b = 0 the formulas are exact, so there is no rate to fit;
            // the criterion there is plain agreement.
            if inp.b == 0.0 {
                let ok = rows.iter().all(|r| r.residual.abs() <= 1e-8);
                (rows, ok, Some(None), None)
            } else {
                (rows, true, None, None)
            }
        }
        Campaign::Eig => {
            let q = q.as_ref().unwrap();
            let rows = par_rows(&range.ns(), |n| {
                let e = shoot::eigenvalue(q, inp.b, n)?;
                let p = asym::predict(q, inp.b, n)?;
                Ok(Row {
                    n,
                    numeric: e.lambda,
                    predicted: p.lambda_pred,
                    residual: e.lambda - p.lambda_pred,
                })
            })?;
            (rows, true, None, None)
        }
        Campaign::Kappa => {
            let q = q.as_ref().unwrap();
            let pairs = par_rows(&range.ns(), |n| {
                let sp = shoot::spectral_point(q, inp.b, n)?;
                let p = asym::predict(q, inp.b, n)?;
                let routes_gap = (sp.kappa - sp.kappa_via_derivative).abs();
                Ok((
                    Row {
                        n,
                        numeric: sp.kappa,
                        predicted: p.kappa_pred,
                        residual: sp.kappa - p.kappa_pred,
                    },
                    routes_gap <= 1e-5 * sp.kappa.abs().max(1.0),
                ))
            })?;
            let ok = pairs.iter().all(|(_, g)| *g);
            (pairs.into_iter().map(|(r, _)| r).collect(), ok, None, None)
        }
        Campaign::Denominator => {
            let q = q.as_ref().unwrap();
            let rows = par_rows(&range.ns(), |n| {
                let sp = shoot::spectral_point(q, inp.b, n)?;
                let growth = (1.5 * core::f64::consts::PI * n as f64).powf(1.0 / 3.0);
                let ratio = sp.norm_sq / growth;
                Ok(Row { n, numeric: ratio, predicted: 1.0, residual: ratio - 1.0 })
            })?;
            let mut c_hat = envelope::load().map_err(Failure::numeric)?.denominator_c_hat;
            let mut note = None;
            if inp.freeze {
                let measured = rows
                    .iter()
                    .map(|r| r.residual.abs() * (r.n as f64).powf(1.0 / 3.0))
                    .fold(0.0f64, f64::max);
                let mut b = envelope::load().map_err(Failure::numeric)?;
                b.denominator_c_hat = Some(measured * 1.15);
                let path = envelope::save(&b).map_err(Failure::numeric)?;
                c_hat = b.denominator_c_hat;
                note = Some(format!("froze denominator_c_hat to {}", path.display()));
            }
            let ok = match c_hat {
                Some(ch) => rows
                    .iter()
                    .all(|r| r.residual.abs() <= ch * (r.n as f64).powf(-1.0 / 3.0)),
                None => false,
            };
            config["denominator_c_hat"] = json!(c_hat);
            (rows, ok, None, note)
        }
        Campaign::Gradient => {
            let pairs: [(PotentialSpec, PotentialSpec); 2] = [
                (PotentialSpec::Zero, PotentialSpec::ExpDecay { a: 1.0, c: 1.0 }),
                (
                    PotentialSpec::ExpDecay { a: 1.0, c: 2.0 },
                    PotentialSpec::CompactSpline { a: 1.0, l: 4.0 },
                ),
            ];
            let mut rows = Vec::new();
            let mut ok = true;
            for (qs, vs) in &pairs {
                let qq = qs.build().map_err(|e| Failure::numeric(format!("potential: {e}")))?;
                let vv = vs.build().map_err(|e| Failure::numeric(format!("direction: {e}")))?;
                let batch = gradient_rows(&qq, inp.b, &[1, 3, 10], &vv, 1e-4)
                    .map_err(Failure::numeric)?;
                for (row, row_ok) in batch {
                    ok &= row_ok;
                    rows.push(row);
                }
            }
            config["pairs"] = json!([
                { "q": pairs[0].0.echo(), "v": pairs[0].1.echo() },
                { "q": pairs[1].0.echo(), "v": pairs[1].1.echo() },
            ]);
            (rows, ok, None, None)
        }
        Campaign::Envelope => {
            let outcome = envelope::run(inp.freeze).map_err(Failure::numeric)?;
            let rows = outcome
                .rows
                .iter()
                .enumerate()
                .map(|(i, (_, measured, frozen, _))| Row {
                    n: i as u64 + 1,
                    numeric: *measured,
                    predicted: frozen.unwrap_or(*measured),
                    residual: measured - frozen.unwrap_or(*measured),
                })
                .collect();
            config["audits"] =
                json!(outcome.rows.iter().map(|(n, ..)| n.clone()).collect::<Vec<_>>());
            let note = outcome.frozen_to.map(|p| format!("froze baselines to {}", p.display()));
            (rows, outcome.passed, None, note)
        }
    };

    let (expected, want_fit) = match slope_override {
        // Exactness arms gate on the residuals directly; no rate to fit.
        Some(over) => (over, false),
        None => (c.slope_interval(), c.fits_slope()),
    };
    let fitted = if want_fit {
        let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
        let errs: Vec<f64> = rows.iter().map(|r| r.residual.abs()).collect();
        Some(
            asym::rate_fit(&ns, &errs)
                .map_err(|e| Failure::numeric(format!("rate fit: {e}")))?
                .slope,
        )
    } else {
        None
    };
    let slope_ok = match (fitted, expected) {
        (Some(s), Some((lo, hi))) => s >= lo && s <= hi,
        _ => true,
    };

    if let Some(note) = frozen_note {
        eprintln!("{note}");
    }
    Ok(Report {
        schema: SCHEMA,
        campaign: c.name().to_string(),
        config_echo: config,
        rows,
        fitted_slope: fitted,
        expected_slope_interval: expected,
        passed: rows_ok && slope_ok,
        runtime_ms: started.elapsed().as_millis(),
    })
}

/// Directional-derivative rows: numeric = central finite difference,
/// predicted = the eigenfunction-square integral; each row also reports
/// whether the two agree to 1e-4 relative.
pub fn gradient_rows(
    q: &Potential,
    b: f64,
    ns: &[u64],
    v: &Potential,
    eps: f64,
) -> Result<Vec<(Row, bool)>, String> {
    let out: Vec<Result<(Row, bool), String>> = ns
        .par_iter()
        .map(|&n| {
            let a = shoot::gradient_audit(q, b, n, v, eps).map_err(|e| format!("n = {n}: {e}"))?;
            let row = Row {
                n,
                numeric: a.finite_difference,
                predicted: a.analytic,
                residual: a.finite_difference - a.analytic,
            };
            let ok = row.residual.abs() <= 1e-4 * a.analytic.abs().max(1e-12);
            Ok((row, ok))
        })
        .collect();
    let mut rows = Vec::with_capacity(out.len());
    for r in out {
        rows.push(r?);
    }
    Ok(rows)
}

fn par_rows<T: Send>(
    ns: &[u64],
    f: impl Fn(u64) -> Result<T, shoot::ShootError> + Sync,
) -> Result<Vec<T>, Failure> {
    let results: Vec<(u64, Result<T, shoot::ShootError>)> =
        ns.par_iter().map(|&n| (n, f(n))).collect();
    let mut out = Vec::with_capacity(results.len());
    for (n, r) in results {
        match r {
            Ok(v) => out.push(v),
            Err(e) => return Err(Failure::numeric(format!("n = {n}: {e}"))),
        }
    }
    Ok(out)
}

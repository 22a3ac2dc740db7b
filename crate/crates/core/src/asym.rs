//! Large-index predictions for eigenvalues and norming exponents, plus the
//! log-log rate fitter used to measure how fast the predictions converge.
//!
//! For the operator -d^2/dx^2 + x + q(x) with boundary condition
//! y'(0) = b y(0), the n-th eigenvalue approaches the negated n-th zero of
//! Ai'; the corrections involve weighted integrals of q against the Airy
//! kernel translated to that zero.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec::Vec;

use crate::airy::{self, AiryError};
use crate::potential::Potential;
use crate::quad;
use crate::weights;

#[derive(Clone, Debug, PartialEq)]
pub enum AsymError {
    Airy(AiryError),
    /// The rate fit needs at least 8 usable points.
    TooFewPoints { have: usize },
}

impl core::fmt::Display for AsymError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AsymError::Airy(e) => write!(f, "{e}"),
            AsymError::TooFewPoints { have } => {
                write!(f, "rate fit needs at least 8 usable points, have {have}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AsymError {}

impl From<AiryError> for AsymError {
    fn from(e: AiryError) -> Self {
        AsymError::Airy(e)
    }
}

/// Closed-form predictions for q = 0: `(lambda, kappa)`.
///
/// lambda_n = -a'_n - b / a'_n and kappa_n = -ln(-a'_n) + b^2 / a'_n,
/// with a'_n the n-th zero of Ai'.
pub fn unperturbed(b: f64, n: u64) -> Result<(f64, f64), AsymError> {
    let a = airy::airy_prime_zero(n)?;
    Ok((-a - b / a, -(-a).ln() + b * b / a))
}

/// Additive pieces of the two predictions; each prediction is exactly the
/// sum of its pieces.
///
/// lambda_pred = minus_an_prime + q_integral_term + b_term;
/// kappa_pred = log_term + kappa_integral_term + q0_term + b_sq_term.
#[derive(Clone, Copy, Debug)]
pub struct LeadingTerms {
    /// -a'_n, the negated derivative zero: the leading eigenvalue term.
    pub minus_an_prime: f64,
    /// pi integral(Ai^2(x + a'_n) q) / sqrt(-a'_n)
    pub q_integral_term: f64,
    /// -b / a'_n
    pub b_term: f64,
    /// -ln(-a'_n), the leading norming-exponent term.
    pub log_term: f64,
    /// -2 pi integral(Ai Ai'(x + a'_n) q) / sqrt(-a'_n)
    pub kappa_integral_term: f64,
    /// q(0) / a'_n
    pub q0_term: f64,
    /// b^2 / a'_n
    pub b_sq_term: f64,
}

/// Large-index prediction for one spectral point, with its term breakdown
/// and a quadrature error estimate.
#[derive(Clone, Copy, Debug)]
pub struct AsymptoticPrediction {
    pub n: u64,
    pub lambda_pred: f64,
    pub kappa_pred: f64,
    /// kappa with the cross integral evaluated through its
    /// integration-by-parts form; agreement with `kappa_pred` is a built-in
    /// quadrature self-check.
    pub kappa_pred_ibp: f64,
    pub leading_terms: LeadingTerms,
    /// Largest shift observed in any potential integral when the panels are
    /// halved; an estimate of the quadrature error in the predictions.
    pub quadrature_error_estimate: f64,
}

impl AsymptoticPrediction {
    pub fn route_gap(&self) -> f64 {
        (self.kappa_pred - self.kappa_pred_ibp).abs()
    }
}

/// Predicted eigenvalue and norming exponent including the first-order
/// potential corrections.
pub fn predict(q: &Potential, b: f64, n: u64) -> Result<AsymptoticPrediction, AsymError> {
    let a = airy::airy_prime_zero(n)?;
    let pi = core::f64::consts::PI;
    let q0 = q.at_origin().0;

    let mut quad_err = 0.0f64;
    let mut refined = |kind: Weighting| -> Result<f64, AsymError> {
        let coarse = airy_weighted_integral(q, a, kind, 1.0)?;
        let fine = airy_weighted_integral(q, a, kind, 0.5)?;
        quad_err = quad_err.max((coarse - fine).abs());
        Ok(coarse)
    };
    let i_sq = refined(Weighting::Square)?;
    let i_cross = refined(Weighting::Cross)?;
    let i_sq_qprime = refined(Weighting::SquareOfDerivative)?;

    let terms = LeadingTerms {
        minus_an_prime: -a,
        q_integral_term: pi * i_sq / (-a).sqrt(),
        b_term: -b / a,
        log_term: -(-a).ln(),
        kappa_integral_term: -2.0 * pi * i_cross / (-a).sqrt(),
        q0_term: q0 / a,
        b_sq_term: b * b / a,
    };

    // d/dx Ai^2(x + a) = 2 Ai Ai', so the cross integral equals
    // -(Ai(a)^2 q(0) + int Ai^2 q') / 2.
    let ai_at_a = airy::airy_eval(a)?.ai;
    let i_cross_ibp = -0.5 * (ai_at_a * ai_at_a * q0 + i_sq_qprime);

    Ok(AsymptoticPrediction {
        n,
        lambda_pred: terms.minus_an_prime + terms.q_integral_term + terms.b_term,
        kappa_pred: terms.log_term + terms.kappa_integral_term + terms.q0_term + terms.b_sq_term,
        kappa_pred_ibp: terms.log_term - 2.0 * pi * i_cross_ibp / (-a).sqrt()
            + terms.q0_term
            + terms.b_sq_term,
        leading_terms: terms,
        quadrature_error_estimate: quad_err,
    })
}

/// Predicted eigenvalue including the first-order potential correction.
pub fn eig_asym(q: &Potential, b: f64, n: u64) -> Result<f64, AsymError> {
    let a = airy::airy_prime_zero(n)?;
    let i_sq = airy_weighted_integral(q, a, Weighting::Square, 1.0)?;
    Ok(-a - b / a + core::f64::consts::PI * i_sq / (-a).sqrt())
}

/// Both quadrature routes to the predicted norming exponent.
#[derive(Clone, Copy, Debug)]
pub struct KappaPrediction {
    /// Prediction using the Ai Ai' cross integral directly.
    pub value: f64,
    /// Same prediction with the cross integral replaced by its
    /// integration-by-parts form (boundary term plus an Ai^2 q' integral).
    pub value_ibp: f64,
}

impl KappaPrediction {
    pub fn route_gap(&self) -> f64 {
        (self.value - self.value_ibp).abs()
    }
}

/// Predicted norming exponent including the first-order potential correction.
pub fn kappa_asym(q: &Potential, b: f64, n: u64) -> Result<KappaPrediction, AsymError> {
    let p = predict(q, b, n)?;
    Ok(KappaPrediction { value: p.kappa_pred, value_ibp: p.kappa_pred_ibp })
}

/// Boundary values of the unperturbed fundamental pair at spectral
/// parameter `lambda`, and the eigenvalue-derivative combinations built
/// from them.
///
/// alpha = sqrt(pi) Ai(-lambda) is psi0 at x = 0, alpha_prime its slope;
/// beta, beta_prime the same for theta0. tau_dot = lambda alpha + b
/// alpha_prime is the lambda-derivative of the boundary mismatch of the
/// decaying branch at an eigenvalue; tau_cross is its growing-branch twin.
#[derive(Clone, Copy, Debug)]
pub struct AlphaBeta {
    pub alpha: f64,
    pub alpha_prime: f64,
    pub beta: f64,
    pub beta_prime: f64,
    pub tau_dot: f64,
    pub tau_cross: f64,
}

pub fn alpha_beta(b: f64, lambda: f64) -> Result<AlphaBeta, AsymError> {
    let s = airy::airy_eval(-lambda)?;
    let sp = airy::SQRT_PI;
    let alpha = sp * s.ai;
    let alpha_prime = sp * s.ai_prime;
    let beta = sp * s.bi;
    let beta_prime = sp * s.bi_prime;
    Ok(AlphaBeta {
        alpha,
        alpha_prime,
        beta,
        beta_prime,
        tau_dot: lambda * alpha + b * alpha_prime,
        tau_cross: lambda * beta + b * beta_prime,
    })
}

#[derive(Clone, Copy)]
enum Weighting {
    /// int Ai^2(x + a) q(x) dx
    Square,
    /// int Ai(x + a) Ai'(x + a) q(x) dx
    Cross,
    /// int Ai^2(x + a) q'(x) dx
    SquareOfDerivative,
}

/// Deviations of `alpha` and `beta_prime` from their large-index
/// normalizations `(-1)^{n+1} (3 pi n / 2)^{-1/6}` and
/// `(-1)^{n+1} (3 pi n / 2)^{1/6}`: both returned values tend to zero as n
/// grows when `lambda` is the n-th eigenvalue.
pub fn alpha_beta_deviation(n: u64, ab: &AlphaBeta) -> (f64, f64) {
    let scale = (1.5 * core::f64::consts::PI * n as f64).powf(1.0 / 6.0);
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    ((sign * scale * ab.alpha - 1.0).abs(), (sign * ab.beta_prime / scale - 1.0).abs())
}

/// Airy-kernel integrals of the potential, translated so the kernel's
/// argument vanishes at x = -a. Oscillation-aware panels track the local
/// wavelength; the domain is cut where either factor is negligible.
fn airy_weighted_integral(
    q: &Potential,
    a: f64,
    kind: Weighting,
    panel_scale: f64,
) -> Result<f64, AsymError> {
    let q_cut = weights::tail_cut(q, 1e-15);
    let hi = q_cut.min(-a + 14.0);
    if hi <= 0.0 {
        return Ok(0.0);
    }
    let mut failed = None;
    let value = quad::oscillatory_gl16_scaled(0.0, hi, panel_scale, |x| -(x + a), |x| {
        let s = match airy::airy_eval(x + a) {
            Ok(s) => s,
            Err(e) => {
                failed = Some(e);
                return 0.0;
            }
        };
        let (qv, qp) = q.eval(x);
        match kind {
            Weighting::Square => s.ai * s.ai * qv,
            Weighting::Cross => s.ai * s.ai_prime * qv,
            Weighting::SquareOfDerivative => s.ai * s.ai * qp,
        }
    });
    match failed {
        Some(e) => Err(e.into()),
        None => Ok(value),
    }
}

/// Result of a least-squares power-law fit `err ~ C n^slope`.
#[derive(Clone, Copy, Debug)]
pub struct RateFit {
    pub slope: f64,
    /// log C
    pub intercept: f64,
    pub r_squared: f64,
    pub used: usize,
    /// Points dropped because the error was zero or not finite.
    pub dropped: usize,
}

/// Fit a decay rate through (n, err) pairs in log-log coordinates.
///
/// Exact zeros and non-finite errors carry no rate information and are
/// dropped (counted in `dropped`); at least 8 points must survive.
pub fn rate_fit(ns: &[f64], errs: &[f64]) -> Result<RateFit, AsymError> {
    assert_eq!(ns.len(), errs.len(), "rate_fit needs paired inputs");
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(ns.len());
    let mut dropped = 0usize;
    for (&n, &e) in ns.iter().zip(errs) {
        if n > 0.0 && e > 0.0 && e.is_finite() {
            pts.push((n.ln(), e.ln()));
        } else {
            dropped += 1;
        }
    }
    if pts.len() < 8 {
        return Err(AsymError::TooFewPoints { have: pts.len() });
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let mx = sx / m;
    let my = sy / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(RateFit { slope, intercept, r_squared, used: pts.len(), dropped })
}

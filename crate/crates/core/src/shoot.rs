//! Eigenvalues and norming exponents by backward shooting.
//!
//! For -y'' + (x + q) y = lambda y on the half line, the L^2 solution is
//! recovered by integrating backward from a truncation point X where the
//! potential tail is negligible, starting on the Airy-decay branch. Backward
//! is the stable direction here: contamination by the growing branch decays
//! toward x = 0. The run is split at the turning point max(lambda, 0): above
//! it the solution is exponentially small and zero-free and is controlled
//! purely relatively (an absolute floor there would be enormous next to the
//! solution, and the floor-sized error survives into everything below),
//! while the oscillatory stretch underneath uses an ordinary mixed
//! tolerance, which it can afford because the solution is O(1) there.
//!
//! An eigenvalue is a root in lambda of w = psi'(0) - b psi(0); the norming
//! exponent is kappa = ln(psi(0)^2 / |psi|^2), cross-checked against the
//! independent route kappa = ln(psi(0) / dw/dlambda).

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;

use crate::airy::{self, AiryError, SQRT_PI};
use crate::asym::{self, AsymError};
use crate::ode::{self, OdeError, OdeOptions};
use crate::potential::Potential;
use crate::roots::{self, RootError};
use crate::weights;

/// Padding above max(lambda, 0) for the default truncation point.
pub const TAIL_PAD: f64 = 12.0;
/// Acceptable damped potential-tail error at the truncation point.
pub const TRUNC_TOL: f64 = 1e-13;
/// Relative tolerance for every shooting integration.
pub const ODE_RTOL: f64 = 1e-12;
/// Absolute floor on the oscillatory stretch below the turning point.
pub const OSC_ATOL: f64 = 1e-14;
/// Allowed gap between the two norming-exponent routes.
pub const KAPPA_ROUTE_GATE: f64 = 1e-4;
/// Relative step for the dw/dlambda finite differences.
pub const FD_STEP_SCALE: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub enum ShootError {
    Airy(AiryError),
    Ode(OdeError),
    Asym(AsymError),
    BadIndex { n: u64 },
    /// No sign change of the mismatch near the predicted eigenvalue.
    BracketFailed { n: u64, lo: f64, hi: f64, w_lo: f64, w_hi: f64 },
    /// More than one mismatch root inside the bracket.
    AmbiguousBracket { n: u64, sign_changes: usize },
    /// Even an extended truncation point leaves too much potential tail.
    TailTruncation { bound: f64 },
    /// The two norming routes disagree beyond tolerance.
    NormingInconsistent { n: u64, direct: f64, via_derivative: f64 },
    Root(RootError),
}

impl core::fmt::Display for ShootError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ShootError::Airy(e) => write!(f, "{e}"),
            ShootError::Ode(e) => write!(f, "{e}"),
            ShootError::Asym(e) => write!(f, "{e}"),
            ShootError::BadIndex { n } => write!(f, "eigenvalue index must be >= 1, got {n}"),
            ShootError::BracketFailed { n, lo, hi, w_lo, w_hi } => write!(
                f,
                "no mismatch sign change for index {n} on [{lo}, {hi}] (w: {w_lo} .. {w_hi})"
            ),
            ShootError::AmbiguousBracket { n, sign_changes } => write!(
                f,
                "bracket for index {n} contains {sign_changes} mismatch roots, expected 1"
            ),
            ShootError::TailTruncation { bound } => {
                write!(f, "potential tail stays at {bound:.3e} past the extended truncation point")
            }
            ShootError::NormingInconsistent { n, direct, via_derivative } => write!(
                f,
                "norming routes disagree at index {n}: {direct} vs {via_derivative}"
            ),
            ShootError::Root(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ShootError {}

impl From<AiryError> for ShootError {
    fn from(e: AiryError) -> Self {
        ShootError::Airy(e)
    }
}
impl From<OdeError> for ShootError {
    fn from(e: OdeError) -> Self {
        ShootError::Ode(e)
    }
}
impl From<AsymError> for ShootError {
    fn from(e: AsymError) -> Self {
        ShootError::Asym(e)
    }
}
impl From<RootError> for ShootError {
    fn from(e: RootError) -> Self {
        ShootError::Root(e)
    }
}

/// Truncation point for a given spectral parameter: max(lambda, 0) + 12,
/// pushed further out (in steps of 6, at most 10 times) until the potential
/// tail, damped by the squared decay envelope of the eigenfunction there,
/// is below tolerance. The damping matters: a slowly decaying q can never
/// meet a verbatim tail threshold, but its influence beyond the turning
/// point is suppressed by the eigenfunction itself.
pub fn truncation_point(q: &Potential, lambda: f64) -> Result<f64, ShootError> {
    let mut x = lambda.max(0.0) + TAIL_PAD;
    for _ in 0..10 {
        let damp = weights::g_a(x - lambda);
        if q.tail_bound(x) * damp * damp <= TRUNC_TOL {
            return Ok(x);
        }
        x += 6.0;
    }
    Err(ShootError::TailTruncation { bound: q.tail_bound(x) })
}

/// Backward-shot solution data at x = 0.
#[derive(Clone, Copy, Debug)]
pub struct PsiSolution {
    pub lambda: f64,
    pub x_max: f64,
    pub psi_at_0: f64,
    pub psi_prime_at_0: f64,
    /// Full L^2 norm squared, including the analytic Airy tail past x_max.
    pub norm_sq: f64,
    /// `int psi^2 v dx` when a probe direction was supplied.
    pub probe_integral: Option<f64>,
}

impl PsiSolution {
    /// Boundary mismatch w = psi'(0) - b psi(0).
    pub fn mismatch(&self, b: f64) -> f64 {
        self.psi_prime_at_0 - b * self.psi_at_0
    }
}

/// Integrate the decaying solution from `x_max` down to 0, accumulating the
/// norm along the way. The `probe` direction additionally accumulates
/// `int psi^2 probe dx` for derivative checks.
pub fn psi_backward(
    q: &Potential,
    lambda: f64,
    x_max: f64,
    probe: Option<&Potential>,
) -> Result<PsiSolution, ShootError> {
    let s = x_max - lambda;
    let term = airy::airy_eval(s)?;
    // int_s^inf pi Ai^2 = pi (Ai'(s)^2 - s Ai(s)^2).
    let tail_norm =
        core::f64::consts::PI * (term.ai_prime * term.ai_prime - s * term.ai * term.ai);
    let dim = if probe.is_some() { 4 } else { 3 };
    let mut y = vec![0.0; dim];
    y[0] = SQRT_PI * term.ai;
    y[1] = SQRT_PI * term.ai_prime;
    y[2] = tail_norm.max(f64::MIN_POSITIVE);

    let rhs = |x: f64, y: &[f64], dy: &mut [f64]| {
        let (qv, _) = q.eval(x);
        dy[0] = y[1];
        dy[1] = (x + qv - lambda) * y[0];
        dy[2] = -y[0] * y[0];
        if let Some(v) = probe {
            dy[3] = -y[0] * y[0] * v.eval(x).0;
        }
    };

    let x_mid = lambda.max(0.0);
    // Tail phase: pure relative control; the probe component may cross zero,
    // so it keeps a floor far below anything it can contribute.
    let mut atol_tail = vec![1e-250; dim];
    if dim == 4 {
        atol_tail[3] = 1e-18;
    }
    let opts_tail = OdeOptions { rtol: ODE_RTOL, atol: atol_tail, h0: 1e-3, max_steps: 4_000_000 };
    let (y_mid, _) = ode::integrate(rhs, x_max, &y, x_mid, &opts_tail)?;

    let y_end = if x_mid > 0.0 {
        let opts_osc =
            OdeOptions { rtol: ODE_RTOL, atol: vec![OSC_ATOL; dim], h0: 1e-3, max_steps: 4_000_000 };
        ode::integrate(rhs, x_mid, &y_mid, 0.0, &opts_osc)?.0
    } else {
        y_mid
    };

    Ok(PsiSolution {
        lambda,
        x_max,
        psi_at_0: y_end[0],
        psi_prime_at_0: y_end[1],
        norm_sq: y_end[2],
        probe_integral: if dim == 4 { Some(y_end[3]) } else { None },
    })
}

/// Decaying solution sampled at the requested points, which must be
/// ascending within [0, x_max]; the integration itself still runs backward
/// from the Airy tail values at `x_max`.
pub fn psi_backward_samples(
    q: &Potential,
    lambda: f64,
    x_max: f64,
    xs: &[f64],
) -> Result<Vec<(f64, f64)>, ShootError> {
    assert!(
        xs.windows(2).all(|w| w[0] < w[1]) && xs.iter().all(|&x| (0.0..=x_max).contains(&x)),
        "sample points must be ascending within [0, x_max]"
    );
    let s = x_max - lambda;
    let term = airy::airy_eval(s)?;
    let y = [SQRT_PI * term.ai, SQRT_PI * term.ai_prime];
    let rhs = |x: f64, y: &[f64], dy: &mut [f64]| {
        let (qv, _) = q.eval(x);
        dy[0] = y[1];
        dy[1] = (x + qv - lambda) * y[0];
    };

    let x_mid = lambda.max(0.0);
    let split = xs.partition_point(|&x| x <= x_mid);
    let mut upper: Vec<f64> = xs[split..].to_vec();
    upper.reverse();
    let mut lower: Vec<f64> = xs[..split].to_vec();
    lower.reverse();

    let opts_tail =
        OdeOptions { rtol: 1e-12, atol: vec![1e-250], h0: 1e-3, max_steps: 4_000_000 };
    let (up_vals, _) = ode::integrate_samples(rhs, x_max, &y, &upper, &opts_tail)?;
    let y_mid = if let Some(last) = up_vals.last() {
        let (m, _) = ode::integrate(rhs, *upper.last().unwrap(), last, x_mid, &opts_tail)?;
        m
    } else {
        ode::integrate(rhs, x_max, &y, x_mid, &opts_tail)?.0
    };

    let opts_osc = OdeOptions { rtol: ODE_RTOL, atol: vec![OSC_ATOL], h0: 1e-3, max_steps: 4_000_000 };
    let (low_vals, _) = ode::integrate_samples(rhs, x_mid, &y_mid, &lower, &opts_osc)?;

    let mut out: Vec<(f64, f64)> = Vec::with_capacity(xs.len());
    for v in low_vals.iter().rev() {
        out.push((v[0], v[1]));
    }
    for v in up_vals.iter().rev() {
        out.push((v[0], v[1]));
    }
    Ok(out)
}

/// Boundary mismatch w(lambda) at a fixed truncation point.
pub fn mismatch_at(
    q: &Potential,
    b: f64,
    lambda: f64,
    x_max: f64,
) -> Result<f64, ShootError> {
    Ok(psi_backward(q, lambda, x_max, None)?.mismatch(b))
}

/// A located eigenvalue before norming.
#[derive(Clone, Copy, Debug)]
pub struct Eigenvalue {
    pub n: u64,
    pub lambda: f64,
    pub bracket: (f64, f64),
    /// |w| at the returned root.
    pub w_residual: f64,
    /// Truncation point shared by every mismatch evaluation for this index.
    pub x_max: f64,
}

/// Everything the reports need about one spectral point.
#[derive(Clone, Copy, Debug)]
pub struct SpectralPoint {
    pub n: u64,
    pub lambda: f64,
    /// ln(psi(0)^2 / |psi|^2).
    pub kappa: f64,
    /// Independent route: ln(psi(0) / (dw/dlambda)).
    pub kappa_via_derivative: f64,
    pub psi_at_0: f64,
    pub psi_prime_at_0: f64,
    pub norm_sq: f64,
    pub bracket: (f64, f64),
    pub w_residual: f64,
    pub x_max: f64,
}

/// A mismatch evaluator sharing one truncation point, with error capture
/// suitable for use inside a root finder.
struct Mismatch<'a> {
    q: &'a Potential,
    b: f64,
    x_max: f64,
    failure: Option<ShootError>,
}

impl<'a> Mismatch<'a> {
    fn eval(&mut self, lambda: f64) -> f64 {
        match mismatch_at(self.q, self.b, lambda, self.x_max) {
            Ok(w) => w,
            Err(e) => {
                if self.failure.is_none() {
                    self.failure = Some(e);
                }
                f64::NAN
            }
        }
    }

    fn take(self, result: Result<f64, RootError>) -> Result<f64, ShootError> {
        match self.failure {
            Some(e) => Err(e),
            None => result.map_err(ShootError::Root),
        }
    }
}

/// Exact spectral data `(lambda, kappa)` for q = 0, with no ODE involved:
/// the mismatch w0(lambda) = sqrt(pi) (Ai'(-lambda) - b Ai(-lambda)) is
/// root-found directly on Airy evaluations, and the norming exponent has
/// the closed form kappa = -ln(lambda + b^2).
///
/// Each eigenvalue except the first is pinned by Dirichlet interlacing to
/// (-a_{n-1}, -a_n) with a_k the k-th zero of Ai, where w0 changes sign;
/// the first is bracketed by stepping down from -a_1 (it exceeds -b^2).
pub fn unperturbed_point(b: f64, n: u64) -> Result<(f64, f64), ShootError> {
    if n == 0 {
        return Err(ShootError::BadIndex { n });
    }
    let failure: core::cell::Cell<Option<AiryError>> = core::cell::Cell::new(None);
    let w0 = |lambda: f64| -> f64 {
        match airy::airy_eval(-lambda) {
            Ok(s) => SQRT_PI * (s.ai_prime - b * s.ai),
            Err(e) => {
                if failure.get().is_none() {
                    failure.set(Some(e));
                }
                f64::NAN
            }
        }
    };

    let hi = -airy::airy_zero(n)?;
    let (lo, hi) = if n >= 2 {
        (-airy::airy_zero(n - 1)?, hi)
    } else {
        // Step down past -b^2 until the mismatch changes sign.
        let w_hi = w0(hi);
        let mut step = 1.0f64.max(b * b + 2.0 - hi);
        let mut lo = hi - step;
        while w0(lo) * w_hi > 0.0 && failure.get().is_none() {
            step *= 2.0;
            lo = hi - step;
            if step > 1e8 {
                return Err(ShootError::BracketFailed { n, lo, hi, w_lo: w0(lo), w_hi });
            }
        }
        (lo, hi)
    };
    let xtol = 1e-14 * hi.abs().max(1.0);
    let root = roots::brent(lo, hi, xtol, w0);
    if let Some(e) = failure.get() {
        return Err(e.into());
    }
    let lambda = root.map_err(ShootError::Root)?;
    Ok((lambda, -(lambda + b * b).ln()))
}

/// Locate the n-th eigenvalue (n >= 1).
///
/// For n >= 4 the prediction from the asymptotic formulas seeds a bracket
/// narrower than the local eigenvalue spacing; the bracket is widened a few
/// times if needed and probed at interior points so that a second root
/// cannot hide inside. The smallest indices sit too far from the asymptotic
/// regime for that to be trustworthy, so n <= 3 is found by scanning upward
/// from a lower bound for the whole spectrum and counting mismatch roots.
pub fn eigenvalue(q: &Potential, b: f64, n: u64) -> Result<Eigenvalue, ShootError> {
    if n == 0 {
        return Err(ShootError::BadIndex { n });
    }
    let seed = asym::eig_asym(q, b, n)?;
    let ap_n = airy::airy_prime_zero(n)?;
    let ap_next = airy::airy_prime_zero(n + 1)?;
    let gap = ap_n - ap_next;
    let x_max = truncation_point(q, seed + gap)?;
    let xtol = 1e-13 * seed.abs().max(1.0);

    if n <= 3 {
        return scan_for_index(q, b, n, seed, gap, x_max, xtol);
    }

    let delta0 = (8.0 * (4.712 * n as f64).powf(-7.0 / 12.0)).min(0.45 * gap);
    let mut m = Mismatch { q, b, x_max, failure: None };
    let mut half = delta0;
    let (mut lo, mut hi) = (seed - half, seed + half);
    let (mut w_lo, mut w_hi) = (m.eval(lo), m.eval(hi));
    for _ in 0..6 {
        if m.failure.is_some() || w_lo * w_hi < 0.0 || half >= 0.9 * gap {
            break;
        }
        half = (half * 1.6).min(0.9 * gap);
        lo = seed - half;
        hi = seed + half;
        w_lo = m.eval(lo);
        w_hi = m.eval(hi);
    }
    if let Some(e) = m.failure {
        return Err(e);
    }
    if !(w_lo * w_hi < 0.0) {
        return Err(ShootError::BracketFailed { n, lo, hi, w_lo, w_hi });
    }

    // Interior probes: exactly one sign change may live in the bracket.
    let mut signs = Vec::with_capacity(7);
    signs.push(w_lo);
    for k in 1..=5 {
        signs.push(m.eval(lo + (hi - lo) * k as f64 / 6.0));
    }
    signs.push(w_hi);
    if let Some(e) = m.failure {
        return Err(e);
    }
    let changes = signs.windows(2).filter(|p| p[0] * p[1] < 0.0).count();
    if changes != 1 {
        return Err(ShootError::AmbiguousBracket { n, sign_changes: changes });
    }

    let root = roots::brent(lo, hi, xtol, |l| m.eval(l));
    let lambda = m.take(root)?;
    let w_res = mismatch_at(q, b, lambda, x_max)?.abs();
    Ok(Eigenvalue { n, lambda, bracket: (lo, hi), w_residual: w_res, x_max })
}

/// Count mismatch roots upward from below the bottom of the spectrum until
/// the n-th is bracketed, then polish it.
fn scan_for_index(
    q: &Potential,
    b: f64,
    n: u64,
    seed: f64,
    gap: f64,
    x_max: f64,
    xtol: f64,
) -> Result<Eigenvalue, ShootError> {
    // Every eigenvalue exceeds -b^2 - |q|_1 - 2; the tail bound at 0
    // dominates the L^1 norm.
    let lambda_min = -b * b - q.tail_bound(0.0) - 2.0;
    let step = 0.3f64.min(gap / 4.0);
    let mut m = Mismatch { q, b, x_max, failure: None };

    let mut hi_limit = seed + 0.9 * gap;
    let mut prev_l = lambda_min;
    let mut prev_w = m.eval(prev_l);
    let mut found = 0u64;
    for _ in 0..4 {
        let mut l = prev_l;
        while l < hi_limit {
            l = (l + step).min(hi_limit);
            let w = m.eval(l);
            if let Some(e) = m.failure {
                return Err(e);
            }
            if prev_w * w < 0.0 {
                found += 1;
                if found == n {
                    let (lo, hi) = (prev_l, l);
                    let root = roots::brent(lo, hi, xtol, |t| m.eval(t));
                    let lambda = m.take(root)?;
                    let w_res = mismatch_at(q, b, lambda, x_max)?.abs();
                    return Ok(Eigenvalue { n, lambda, bracket: (lo, hi), w_residual: w_res, x_max });
                }
            }
            prev_l = l;
            prev_w = w;
        }
        hi_limit += gap;
    }
    Err(ShootError::BracketFailed {
        n,
        lo: lambda_min,
        hi: hi_limit,
        w_lo: f64::NAN,
        w_hi: prev_w,
    })
}

/// Eigenvalue plus norming data, with the two norming routes cross-checked.
pub fn spectral_point(q: &Potential, b: f64, n: u64) -> Result<SpectralPoint, ShootError> {
    let eig = eigenvalue(q, b, n)?;
    let sol = psi_backward(q, eig.lambda, eig.x_max, None)?;
    let kappa = (sol.psi_at_0 * sol.psi_at_0 / sol.norm_sq).ln();

    // dw/dlambda by Richardson-extrapolated central differences, all four
    // stencil points sharing the eigenvalue's truncation point.
    let h = FD_STEP_SCALE * eig.lambda.abs().max(1.0);
    let d = |hh: f64| -> Result<f64, ShootError> {
        let wp = mismatch_at(q, b, eig.lambda + hh, eig.x_max)?;
        let wm = mismatch_at(q, b, eig.lambda - hh, eig.x_max)?;
        Ok((wp - wm) / (2.0 * hh))
    };
    let d_h = d(h)?;
    let d_h2 = d(h / 2.0)?;
    let w_dot = (4.0 * d_h2 - d_h) / 3.0;
    let ratio = sol.psi_at_0 / w_dot;
    let kappa_fd = if ratio > 0.0 { ratio.ln() } else { f64::NAN };
    if !((kappa - kappa_fd).abs() <= KAPPA_ROUTE_GATE) {
        return Err(ShootError::NormingInconsistent {
            n,
            direct: kappa,
            via_derivative: kappa_fd,
        });
    }

    Ok(SpectralPoint {
        n,
        lambda: eig.lambda,
        kappa,
        kappa_via_derivative: kappa_fd,
        psi_at_0: sol.psi_at_0,
        psi_prime_at_0: sol.psi_prime_at_0,
        norm_sq: sol.norm_sq,
        bracket: eig.bracket,
        w_residual: eig.w_residual,
        x_max: eig.x_max,
    })
}

/// First-order eigenvalue response to a potential direction.
#[derive(Clone, Copy, Debug)]
pub struct GradientAudit {
    pub n: u64,
    /// int psi^2 v dx / |psi|^2 at the base potential.
    pub analytic: f64,
    /// Central finite difference of lambda_n between q + eps v and q - eps v.
    pub finite_difference: f64,
    pub eps: f64,
}

impl GradientAudit {
    pub fn discrepancy(&self) -> f64 {
        (self.analytic - self.finite_difference).abs()
    }
}

/// Compare the analytic eigenvalue gradient against recomputed eigenvalues
/// of perturbed potentials.
pub fn gradient_audit(
    q: &Potential,
    b: f64,
    n: u64,
    v: &Potential,
    eps: f64,
) -> Result<GradientAudit, ShootError> {
    let base = eigenvalue(q, b, n)?;
    let sol = psi_backward(q, base.lambda, base.x_max, Some(v))?;
    let analytic = sol.probe_integral.expect("probe requested") / sol.norm_sq;

    let plus = Potential::combo(vec![(1.0, q.clone()), (eps, v.clone())]);
    let minus = Potential::combo(vec![(1.0, q.clone()), (-eps, v.clone())]);
    let lp = eigenvalue(&plus, b, n)?.lambda;
    let lm = eigenvalue(&minus, b, n)?.lambda;
    let finite_difference = (lp - lm) / (2.0 * eps);
    Ok(GradientAudit { n, analytic, finite_difference, eps })
}

//! Envelope weights and smallness functionals used by the perturbation
//! estimates: the algebraic weight `sigma`, the Airy-type exponential
//! envelopes `g_a`, `g_b`, the two-sided envelope `ch`, the potential
//! functional `omega`, and the decay rates `big_omega_r`, `omega_r`.

#[allow(unused_imports)]
use num_traits::Float;

use crate::potential::Potential;
use crate::quad;

/// Errors from weight-function inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightError {
    /// Weight exponent must satisfy r > 1.
    BadExponent { r: f64 },
    /// omega_r needs n >= 2 when r < 2 (log factor).
    BadIndex { n: u64, r: f64 },
}

impl core::fmt::Display for WeightError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            WeightError::BadExponent { r } => write!(f, "weight exponent r = {r} must exceed 1"),
            WeightError::BadIndex { n, r } => {
                write!(f, "omega_r needs n >= 2 for r = {r} in (1, 2); got n = {n}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for WeightError {}

/// Check that a weight exponent is admissible (r > 1).
pub fn validate_r(r: f64) -> Result<(), WeightError> {
    if r > 1.0 && r.is_finite() {
        Ok(())
    } else {
        Err(WeightError::BadExponent { r })
    }
}

/// Algebraic weight `sigma(w) = 1 + |w|^(1/4)`.
pub fn sigma(w: f64) -> f64 {
    1.0 + w.abs().sqrt().sqrt()
}

/// Exponent `(2/3) max(w, 0)^(3/2)` shared by the envelopes.
fn growth_exponent(w: f64) -> f64 {
    if w <= 0.0 {
        0.0
    } else {
        2.0 / 3.0 * w * w.sqrt()
    }
}

/// Decaying envelope: `exp(-(2/3) w^(3/2))` for w > 0, one otherwise.
pub fn g_a(w: f64) -> f64 {
    (-growth_exponent(w)).exp()
}

/// Growing envelope `1 / g_a(w)`; overflows to infinity past w ~ 102.
pub fn g_b(w: f64) -> f64 {
    growth_exponent(w).exp()
}

/// Two-sided envelope `ch(z, x) = g_b(-z) g_a(x-z) + g_a(-z) g_b(x-z)`.
///
/// Algebraically equal to `2 cosh(d)` with `d = e(x-z) - e(-z)`, which is the
/// form used once either exponent passes 600 (the direct products would
/// overflow even though the balanced sum is finite).
pub fn ch(z: f64, x: f64) -> f64 {
    let ea = growth_exponent(-z);
    let eb = growth_exponent(x - z);
    if ea < 600.0 && eb < 600.0 {
        (ea - eb).exp() + (eb - ea).exp()
    } else {
        ln_ch(z, x).exp()
    }
}

/// `ln ch(z, x)`, safe for all magnitudes.
pub fn ln_ch(z: f64, x: f64) -> f64 {
    let d = (growth_exponent(x - z) - growth_exponent(-z)).abs();
    d + (-2.0 * d).exp().ln_1p()
}

/// Smallness functional `omega(q, z) = int_0^inf |q(x)| / sqrt(1 + |x - z|) dx`.
///
/// Adaptive quadrature split at the kink x = z, truncated where the
/// potential's analytic tail bound (itself an upper bound for the remaining
/// integral, since the kernel is at most one) drops below 1e-13.
pub fn omega(q: &Potential, z: f64) -> Result<f64, quad::QuadError> {
    let cut = tail_cut(q, 1e-13);
    let kernel = |x: f64| q.eval(x).0.abs() / (1.0 + (x - z).abs()).sqrt();
    let mut total = 0.0;
    let split = z.clamp(0.0, cut);
    if split > 0.0 {
        total += quad::adaptive_gk(0.0, split, 1e-13, 1e-11, kernel)?.value;
    }
    if cut > split {
        total += quad::adaptive_gk(split, cut, 1e-13, 1e-11, kernel)?.value;
    }
    Ok(total)
}

/// Smallest abscissa where the family tail bound drops below `tol`,
/// found by doubling then bisection; capped at 1e7.
pub(crate) fn tail_cut(q: &Potential, tol: f64) -> f64 {
    let mut hi = 4.0;
    while q.tail_bound(hi) > tol && hi < 1e7 {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if q.tail_bound(mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Decay profile `big_omega_r(z)`: `sqrt(log(2+|z|)/(2+|z|))` for r in (1,2),
/// `1/sqrt(2+|z|)` for r >= 2.
pub fn big_omega_r(z: f64, r: f64) -> Result<f64, WeightError> {
    validate_r(r)?;
    let s = 2.0 + z.abs();
    if r < 2.0 {
        Ok((s.ln() / s).sqrt())
    } else {
        Ok(1.0 / s.sqrt())
    }
}

/// Eigenvalue-index decay rate `omega_r(n)`: `n^(-1/3) log^(1/2) n` for
/// r in (1,2) (requires n >= 2), `n^(-1/3)` for r >= 2.
pub fn omega_r(n: u64, r: f64) -> Result<f64, WeightError> {
    validate_r(r)?;
    let nf = n as f64;
    if r < 2.0 {
        if n < 2 {
            return Err(WeightError::BadIndex { n, r });
        }
        Ok(nf.powf(-1.0 / 3.0) * nf.ln().sqrt())
    } else {
        if n == 0 {
            return Err(WeightError::BadIndex { n, r });
        }
        Ok(nf.powf(-1.0 / 3.0))
    }
}

//! Unperturbed solutions of -y'' + (x - z) y = 0 on the half line.
//!
//! Everything here is built from the scaled Airy pair
//! `psi0(z, x) = sqrt(pi) Ai(x - z)` (recessive) and
//! `theta0(z, x) = sqrt(pi) Bi(x - z)` (dominant), normalized so their
//! Wronskian is exactly 1. The sine-like solution `s0` vanishes at x = 0
//! with unit slope; the cosine-like `c0` has unit value and zero slope.
//! Their z-derivatives follow from closed identities rather than finite
//! differences, which keeps them accurate even where the solutions grow.

#[allow(unused_imports)]
use num_traits::Float;

use crate::airy::{self, AiryError, SQRT_PI};
use crate::weights;

/// All basis quantities at one point (z, x). Primes are x-derivatives,
/// `_dz` fields are z-derivatives.
#[derive(Clone, Copy, Debug)]
pub struct BasisEval {
    pub z: f64,
    pub x: f64,
    pub psi0: f64,
    pub psi0_prime: f64,
    pub theta0: f64,
    pub theta0_prime: f64,
    pub s0: f64,
    pub s0_prime: f64,
    pub c0: f64,
    pub c0_prime: f64,
    pub s0_dz: f64,
    pub s0_prime_dz: f64,
    pub c0_dz: f64,
    pub c0_prime_dz: f64,
}

/// Evaluate the basis at spectral shift `z` and position `x >= 0`.
pub fn eval(z: f64, x: f64) -> Result<BasisEval, AiryError> {
    assert!(x >= 0.0, "basis evaluated at x = {x} < 0");
    let at_x = airy::airy_eval(x - z)?;
    let at_0 = airy::airy_eval(-z)?;

    let psi0 = SQRT_PI * at_x.ai;
    let psi0_prime = SQRT_PI * at_x.ai_prime;
    let theta0 = SQRT_PI * at_x.bi;
    let theta0_prime = SQRT_PI * at_x.bi_prime;

    let psi_at_0 = SQRT_PI * at_0.ai;
    let psi_prime_at_0 = SQRT_PI * at_0.ai_prime;
    let theta_at_0 = SQRT_PI * at_0.bi;
    let theta_prime_at_0 = SQRT_PI * at_0.bi_prime;

    let s0 = psi_at_0 * theta0 - theta_at_0 * psi0;
    let s0_prime = psi_at_0 * theta0_prime - theta_at_0 * psi0_prime;
    let c0 = theta_prime_at_0 * psi0 - psi_prime_at_0 * theta0;
    let c0_prime = theta_prime_at_0 * psi0_prime - psi_prime_at_0 * theta0_prime;

    // Differentiating the defining initial-value problem in z gives another
    // solution of the same equation; matching data at x = 0 yields these.
    let s0_dz = c0 - s0_prime;
    let c0_dz = -z * s0 - c0_prime;
    let s0_prime_dz = c0_prime - (x - z) * s0;
    let c0_prime_dz = -z * s0_prime - (x - z) * c0;

    Ok(BasisEval {
        z,
        x,
        psi0,
        psi0_prime,
        theta0,
        theta0_prime,
        s0,
        s0_prime,
        c0,
        c0_prime,
        s0_dz,
        s0_prime_dz,
        c0_dz,
        c0_prime_dz,
    })
}

/// Solution matching the boundary condition y'(0) = b y(0): value and slope.
pub fn phi0(b: f64, e: &BasisEval) -> (f64, f64) {
    (e.c0 + b * e.s0, e.c0_prime + b * e.s0_prime)
}

/// Sup of measured/envelope ratios over an audit grid, one entry per bound.
#[derive(Clone, Debug)]
pub struct EnvelopeAudit {
    /// (quantity, sup ratio, (z, x) where the sup was attained)
    pub sup: [(&'static str, f64, (f64, f64)); 8],
    pub grid_points: usize,
}

impl EnvelopeAudit {
    pub fn max_ratio(&self) -> f64 {
        self.sup.iter().map(|(_, r, _)| *r).fold(0.0, f64::max)
    }
}

/// Measure the eight growth envelopes on a stretched grid
/// (z from -5 to 60, geometric; 200 x points per z on [0, z + 40]).
///
/// Each basis quantity is divided by its predicted envelope; the sup over
/// the grid should be an O(1) constant, and regressions show up as drift.
pub fn envelope_audit() -> Result<EnvelopeAudit, AiryError> {
    let mut sup = [
        ("psi0", 0.0, (0.0, 0.0)),
        ("psi0_prime", 0.0, (0.0, 0.0)),
        ("theta0", 0.0, (0.0, 0.0)),
        ("theta0_prime", 0.0, (0.0, 0.0)),
        ("s0", 0.0, (0.0, 0.0)),
        ("s0_prime", 0.0, (0.0, 0.0)),
        ("c0", 0.0, (0.0, 0.0)),
        ("c0_prime", 0.0, (0.0, 0.0)),
    ];
    let mut points = 0usize;
    for j in 0..120 {
        let z = -6.0 + 66.0f64.powf(j as f64 / 119.0);
        let hi = z + 40.0;
        for i in 0..200 {
            let x = hi * i as f64 / 199.0;
            if x < 0.0 {
                continue;
            }
            let e = eval(z, x)?;
            let w = x - z;
            let sz = weights::sigma(z);
            let sw = weights::sigma(w);
            let ga = weights::g_a(w);
            let gb = weights::g_b(w);
            let ch = weights::ch(z, x);
            let ratios = [
                e.psi0.abs() * sw / ga,
                e.psi0_prime.abs() / (sw * ga),
                e.theta0.abs() * sw / gb,
                e.theta0_prime.abs() / (sw * gb),
                e.s0.abs() * sz * sw / ch,
                e.s0_prime.abs() * sz / (ch * sw),
                e.c0.abs() * sw / (ch * sz),
                e.c0_prime.abs() / (ch * sz * sw),
            ];
            points += 1;
            for (slot, r) in sup.iter_mut().zip(ratios) {
                if r > slot.1 {
                    slot.1 = r;
                    slot.2 = (z, x);
                }
            }
        }
    }
    Ok(EnvelopeAudit { sup, grid_points: points })
}

//! Adaptive Dormand-Prince 5(4) integration for small ODE systems.
//!
//! Steps can be signed, so the same driver integrates forward and backward.
//! Absolute tolerances are per component: a component whose absolute
//! tolerance is essentially zero is controlled purely relatively, which is
//! what exponentially small solutions need when integrated toward growth.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq)]
pub enum OdeError {
    /// Step size shrank below the resolvable spacing near `x`.
    StepSizeUnderflow { x: f64 },
    /// Step budget exhausted before reaching the endpoint.
    MaxSteps { x: f64, steps: usize },
    /// Options are inconsistent with the state dimension.
    BadOptions { what: &'static str },
}

impl core::fmt::Display for OdeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OdeError::StepSizeUnderflow { x } => write!(f, "step size underflow at x = {x}"),
            OdeError::MaxSteps { x, steps } => {
                write!(f, "no convergence after {steps} steps (reached x = {x})")
            }
            OdeError::BadOptions { what } => write!(f, "bad integrator options: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OdeError {}

#[derive(Clone, Debug)]
pub struct OdeOptions {
    /// Relative tolerance applied to every component.
    pub rtol: f64,
    /// Per-component absolute tolerance; a single entry is broadcast.
    pub atol: Vec<f64>,
    /// Initial step magnitude; sign is taken from the integration direction.
    pub h0: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-12, atol: vec![1e-12], h0: 1e-3, max_steps: 4_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OdeStats {
    pub steps: usize,
    pub rejected: usize,
    pub evals: usize,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate y' = f(x, y) from `x0` to `x1`, returning the final state.
pub fn integrate<F>(
    mut f: F,
    x0: f64,
    y0: &[f64],
    x1: f64,
    opts: &OdeOptions,
) -> Result<(Vec<f64>, OdeStats), OdeError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut driver = Driver::new(&mut f, x0, y0, opts)?;
    driver.advance_to(x1)?;
    Ok((driver.y, driver.stats))
}

/// Integrate while recording the state at each of `xs` (monotone in the
/// direction of travel, starting past `x0`). Returns one state per sample.
pub fn integrate_samples<F>(
    mut f: F,
    x0: f64,
    y0: &[f64],
    xs: &[f64],
    opts: &OdeOptions,
) -> Result<(Vec<Vec<f64>>, OdeStats), OdeError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut driver = Driver::new(&mut f, x0, y0, opts)?;
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        driver.advance_to(x)?;
        out.push(driver.y.clone());
    }
    Ok((out, driver.stats))
}

struct Driver<'a, F> {
    f: &'a mut F,
    x: f64,
    y: Vec<f64>,
    /// Derivative at (x, y); DOPRI5 is FSAL, the last stage seeds the next step.
    k1: Vec<f64>,
    h: f64,
    rtol: f64,
    atol: Vec<f64>,
    max_steps: usize,
    stats: OdeStats,
}

impl<'a, F> Driver<'a, F>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    fn new(f: &'a mut F, x0: f64, y0: &[f64], opts: &OdeOptions) -> Result<Self, OdeError> {
        let dim = y0.len();
        let atol = match opts.atol.len() {
            1 => vec![opts.atol[0]; dim],
            n if n == dim => opts.atol.clone(),
            _ => return Err(OdeError::BadOptions { what: "atol length must be 1 or the dimension" }),
        };
        if !(opts.rtol > 0.0) || !(opts.h0 > 0.0) {
            return Err(OdeError::BadOptions { what: "rtol and h0 must be positive" });
        }
        let mut k1 = vec![0.0; dim];
        f(x0, y0, &mut k1);
        Ok(Driver {
            f,
            x: x0,
            y: y0.to_vec(),
            k1,
            h: opts.h0,
            rtol: opts.rtol,
            atol,
            max_steps: opts.max_steps,
            stats: OdeStats { steps: 0, rejected: 0, evals: 1 },
        })
    }

    fn advance_to(&mut self, x1: f64) -> Result<(), OdeError> {
        if x1 == self.x {
            return Ok(());
        }
        let dir = (x1 - self.x).signum();
        let dim = self.y.len();
        let mut k2 = vec![0.0; dim];
        let mut k3 = vec![0.0; dim];
        let mut k4 = vec![0.0; dim];
        let mut k5 = vec![0.0; dim];
        let mut k6 = vec![0.0; dim];
        let mut k7 = vec![0.0; dim];
        let mut ytmp = vec![0.0; dim];
        let mut ynew = vec![0.0; dim];

        loop {
            let remaining = (x1 - self.x) * dir;
            if remaining <= 0.0 {
                return Ok(());
            }
            if self.stats.steps + self.stats.rejected >= self.max_steps {
                return Err(OdeError::MaxSteps { x: self.x, steps: self.max_steps });
            }
            let h = self.h.min(remaining) * dir;
            if h.abs() < 1e-14 * (1.0 + self.x.abs()) {
                return Err(OdeError::StepSizeUnderflow { x: self.x });
            }

            // Six derivative stages plus FSAL.
            for i in 0..dim {
                ytmp[i] = self.y[i] + h * A21 * self.k1[i];
            }
            (self.f)(self.x + h / 5.0, &ytmp, &mut k2);
            for i in 0..dim {
                ytmp[i] = self.y[i] + h * (A31 * self.k1[i] + A32 * k2[i]);
            }
            (self.f)(self.x + 0.3 * h, &ytmp, &mut k3);
            for i in 0..dim {
                ytmp[i] = self.y[i] + h * (A41 * self.k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            (self.f)(self.x + 0.8 * h, &ytmp, &mut k4);
            for i in 0..dim {
                ytmp[i] = self.y[i]
                    + h * (A51 * self.k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            (self.f)(self.x + 8.0 / 9.0 * h, &ytmp, &mut k5);
            for i in 0..dim {
                ytmp[i] = self.y[i]
                    + h * (A61 * self.k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i]
                        + A65 * k5[i]);
            }
            (self.f)(self.x + h, &ytmp, &mut k6);
            for i in 0..dim {
                ynew[i] = self.y[i]
                    + h * (B1 * self.k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
            }
            (self.f)(self.x + h, &ynew, &mut k7);
            self.stats.evals += 6;

            let mut err_sq = 0.0;
            for i in 0..dim {
                let e = h
                    * (E1 * self.k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let den = self.atol[i]
                    + self.rtol * self.y[i].abs().max(ynew[i].abs())
                    + f64::MIN_POSITIVE;
                err_sq += (e / den) * (e / den);
            }
            let err = (err_sq / dim as f64).sqrt();

            if err <= 1.0 {
                self.x += h;
                self.y.copy_from_slice(&ynew);
                self.k1.copy_from_slice(&k7);
                self.stats.steps += 1;
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                self.h = (h.abs() * grow).max(1e-14);
            } else {
                self.stats.rejected += 1;
                let shrink = (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                self.h = h.abs() * shrink;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy;

    #[test]
    fn exponential_growth() {
        let opts = OdeOptions { rtol: 1e-12, atol: vec![1e-14], ..Default::default() };
        let (y, stats) =
            integrate(|_, y, dy| dy[0] = y[0], 0.0, &[1.0], 1.0, &opts).unwrap();
        assert!((y[0] - core::f64::consts::E).abs() < 1e-11, "{}", y[0]);
        assert!(stats.steps > 5 && stats.evals < 2000);
    }

    #[test]
    fn harmonic_round_trip() {
        let opts = OdeOptions { rtol: 1e-12, atol: vec![1e-14], ..Default::default() };
        let f = |_: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        let end = 10.0 * core::f64::consts::PI;
        let (y, _) = integrate(f, 0.0, &[1.0, 0.0], end, &opts).unwrap();
        let (back, _) = integrate(f, end, &y, 0.0, &opts).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9, "forward {:?}", y);
        assert!((back[0] - 1.0).abs() < 1e-9 && back[1].abs() < 1e-9, "back {back:?}");
    }

    #[test]
    fn airy_oscillatory_forward() {
        // y'' = x y from 0 into the oscillatory region; compare at -20.
        let opts = OdeOptions { rtol: 1e-11, atol: vec![1e-13], ..Default::default() };
        let a0 = airy::airy_eval(0.0).unwrap();
        let f = |x: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = x * y[0];
        };
        let (y, _) = integrate(f, 0.0, &[a0.ai, a0.ai_prime], -20.0, &opts).unwrap();
        let want = airy::airy_eval(-20.0).unwrap();
        assert!((y[0] - want.ai).abs() < 5e-9, "{} vs {}", y[0], want.ai);
        assert!((y[1] - want.ai_prime).abs() < 5e-8, "{} vs {}", y[1], want.ai_prime);
    }

    #[test]
    fn backward_recovers_decaying_solution_relatively() {
        // Start on the tiny recessive branch at x = 10 and integrate back to
        // 0 under pure relative control; the contaminating dominant branch
        // decays in this direction, so relative accuracy should survive.
        let opts = OdeOptions { rtol: 1e-12, atol: vec![1e-280], ..Default::default() };
        let a10 = airy::airy_eval(10.0).unwrap();
        let f = |x: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = x * y[0];
        };
        let (y, _) = integrate(f, 10.0, &[a10.ai, a10.ai_prime], 0.0, &opts).unwrap();
        let want = airy::airy_eval(0.0).unwrap();
        assert!((y[0] / want.ai - 1.0).abs() < 1e-10, "{} vs {}", y[0], want.ai);
        assert!((y[1] / want.ai_prime - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sampled_path_matches_single_shot() {
        let opts = OdeOptions { rtol: 1e-12, atol: vec![1e-14], ..Default::default() };
        let f = |x: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = x * y[0];
        };
        let a0 = airy::airy_eval(0.0).unwrap();
        let xs = [-3.0, -7.5, -11.0, -20.0];
        let (path, _) = integrate_samples(f, 0.0, &[a0.ai, a0.ai_prime], &xs, &opts).unwrap();
        let (single, _) = integrate(f, 0.0, &[a0.ai, a0.ai_prime], -20.0, &opts).unwrap();
        assert_eq!(path.len(), 4);
        assert!((path[3][0] - single[0]).abs() < 1e-10);
        for (x, y) in xs.iter().zip(&path) {
            let want = airy::airy_eval(*x).unwrap();
            assert!((y[0] - want.ai).abs() < 5e-9, "at {x}");
        }
    }

    #[test]
    fn rejects_bad_options() {
        let opts = OdeOptions { atol: vec![1.0, 1.0, 1.0], ..Default::default() };
        let r = integrate(|_, _, dy| dy[0] = 0.0, 0.0, &[1.0], 1.0, &opts);
        assert!(matches!(r, Err(OdeError::BadOptions { .. })));
    }
}

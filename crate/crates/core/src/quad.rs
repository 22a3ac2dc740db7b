//! Quadrature kernels: fixed 16-node Gauss-Legendre panels and an adaptive
//! Gauss-Kronrod 7/15 integrator for smooth decaying integrands.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec::Vec;

/// Nodes of the 16-point Gauss-Legendre rule on [-1, 1] (positive half).
const GL16_X: [f64; 8] = [
    0.09501250983763744,
    0.2816035507792589,
    0.45801677765722737,
    0.6178762444026438,
    0.755404408355003,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];

/// Weights matching `GL16_X`.
const GL16_W: [f64; 8] = [
    0.1894506104550685,
    0.18260341504492358,
    0.16915651939500254,
    0.14959598881657674,
    0.12462897125553388,
    0.09515851168249279,
    0.062253523938647894,
    0.027152459411754096,
];

/// 16-point Gauss-Legendre approximation of the integral of `f` over `[a, b]`.
pub fn gl16<F: FnMut(f64) -> f64>(a: f64, b: f64, mut f: F) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..8 {
        acc += GL16_W[i] * (f(c + h * GL16_X[i]) + f(c - h * GL16_X[i]));
    }
    acc * h
}

/// The 16 Gauss-Legendre nodes of the panel `[a, b]`, ascending.
pub fn gl16_nodes(a: f64, b: f64) -> [f64; 16] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [0.0; 16];
    for i in 0..8 {
        out[7 - i] = c - h * GL16_X[i];
        out[8 + i] = c + h * GL16_X[i];
    }
    out
}

/// Weights matching `gl16_nodes`, scaled to the panel.
pub fn gl16_weights(a: f64, b: f64) -> [f64; 16] {
    let h = 0.5 * (b - a);
    let mut out = [0.0; 16];
    for i in 0..8 {
        out[7 - i] = h * GL16_W[i];
        out[8 + i] = h * GL16_W[i];
    }
    out
}

// Gauss-Kronrod 7/15 pair on [-1, 1]: Kronrod nodes (positive half,
// descending), Kronrod weights, and the embedded 7-point Gauss weights.
const GK15_X: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

const GK15_WK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

const GK15_WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss-Kronrod 7/15 panel: returns (integral, error estimate).
pub fn gk15<F: FnMut(f64) -> f64>(a: f64, b: f64, f: &mut F) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut result_k = GK15_WK[7] * fc;
    let mut result_g = GK15_WG[3] * fc;
    for i in 0..7 {
        let x = h * GK15_X[i];
        let v = f(c - x) + f(c + x);
        result_k += GK15_WK[i] * v;
        if i % 2 == 1 {
            result_g += GK15_WG[i / 2] * v;
        }
    }
    let integral = result_k * h;
    let err = ((result_k - result_g) * h).abs();
    (integral, err)
}

/// Outcome of adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Errors from adaptive quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuadError {
    /// Requested tolerance not reached within the subdivision budget.
    ToleranceNotMet { achieved: f64, requested: f64 },
}

impl core::fmt::Display for QuadError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            QuadError::ToleranceNotMet { achieved, requested } => write!(
                f,
                "adaptive quadrature reached error {achieved:.3e}, requested {requested:.3e}"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for QuadError {}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Bisects the worst panel until the summed error estimate meets
/// `abs_tol + rel_tol * |integral|` or 2000 panels are in flight.
pub fn adaptive_gk<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    mut f: F,
) -> Result<QuadResult, QuadError> {
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let (v, e) = gk15(a, b, &mut f);
    let mut panels = Vec::new();
    panels.push(Panel { a, b, value: v, err: e });
    let mut evals = 15usize;

    for _ in 0..2000 {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let tol = abs_tol + rel_tol * total.abs();
        if err <= tol {
            return Ok(QuadResult { value: total, error_estimate: err, evaluations: evals });
        }
        // Split the panel with the largest error estimate.
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(p.a, m, &mut f);
        let (v2, e2) = gk15(m, p.b, &mut f);
        evals += 30;
        panels.push(Panel { a: p.a, b: m, value: v1, err: e1 });
        panels.push(Panel { a: m, b: p.b, value: v2, err: e2 });
    }

    let total: f64 = panels.iter().map(|p| p.value).sum();
    let err: f64 = panels.iter().map(|p| p.err).sum();
    let tol = abs_tol + rel_tol * total.abs();
    if err <= tol {
        Ok(QuadResult { value: total, error_estimate: err, evaluations: evals })
    } else {
        Err(QuadError::ToleranceNotMet { achieved: err, requested: tol })
    }
}

/// Composite Gauss-Legendre integration with oscillation-aware panels.
///
/// Integrates `f` over `[a, b]` with 16-node panels whose length tracks the
/// local quarter wavelength `pi / (2 sqrt(max(1, freq(x))))` of an Airy-type
/// oscillation, where `freq` is the local squared frequency (e.g. `z - x`).
pub fn oscillatory_gl16<F: FnMut(f64) -> f64, G: Fn(f64) -> f64>(
    a: f64,
    b: f64,
    freq: G,
    f: F,
) -> f64 {
    oscillatory_gl16_scaled(a, b, 1.0, freq, f)
}

/// [`oscillatory_gl16`] with the panel length multiplied by `panel_scale`.
///
/// Running the same integral at scale 1 and at a finer scale gives a cheap
/// error estimate for the coarser result.
pub fn oscillatory_gl16_scaled<F: FnMut(f64) -> f64, G: Fn(f64) -> f64>(
    a: f64,
    b: f64,
    panel_scale: f64,
    freq: G,
    mut f: F,
) -> f64 {
    let mut acc = 0.0;
    let mut x = a;
    while x < b {
        let k2 = freq(x).max(1.0);
        let quarter = panel_scale * core::f64::consts::PI / (2.0 * k2.sqrt());
        let end = (x + quarter).min(b);
        acc += gl16(x, end, &mut f);
        x = end;
    }
    acc
}

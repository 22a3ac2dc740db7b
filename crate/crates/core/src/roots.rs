//! Scalar root finding: Brent's method on a bracketing interval.

#[allow(unused_imports)]
use num_traits::Float;

/// Errors from bracketed root finding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RootError {
    /// f(a) and f(b) have the same sign.
    NoSignChange { a: f64, b: f64, fa: f64, fb: f64 },
    /// Iteration budget exhausted before the interval shrank to tolerance.
    MaxIterations { best: f64 },
}

impl core::fmt::Display for RootError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RootError::NoSignChange { a, b, fa, fb } => write!(
                f,
                "no sign change on [{a}, {b}]: f(a) = {fa:.3e}, f(b) = {fb:.3e}"
            ),
            RootError::MaxIterations { best } => {
                write!(f, "root iteration budget exhausted near {best}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RootError {}

/// Brent's method: find a root of `f` in `[a, b]` where `f(a) f(b) < 0`.
///
/// Stops when the bracket width falls below `xtol + 4 eps |x|` or the
/// residual is exactly zero. Returns the best abscissa.
pub fn brent<F: FnMut(f64) -> f64>(mut a: f64, mut b: f64, xtol: f64, mut f: F) -> Result<f64, RootError> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoSignChange { a, b, fa, fb });
    }
    if fa.abs() < fb.abs() {
        core::mem::swap(&mut a, &mut b);
        core::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;

    for _ in 0..120 {
        let tol = xtol + 4.0 * f64::EPSILON * b.abs();
        if fb == 0.0 || (b - a).abs() <= tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            // Inverse quadratic interpolation.
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            // Secant.
            b - fb * (b - a) / (fb - fa)
        };

        let lo = (3.0 * a + b) / 4.0;
        let cond1 = !((s > lo.min(b) && s < lo.max(b)) || (s > b.min(lo) && s < b.max(lo)));
        let cond1 = cond1 || !(s - b).is_finite();
        let cond2 = mflag && (s - b).abs() >= (b - c).abs() / 2.0;
        let cond3 = !mflag && (s - b).abs() >= d.abs() / 2.0;
        let cond4 = mflag && (b - c).abs() < tol;
        let cond5 = !mflag && d.abs() < tol;
        if cond1 || cond2 || cond3 || cond4 || cond5 {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }

        let fs = f(s);
        d = c - b;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            core::mem::swap(&mut a, &mut b);
            core::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(RootError::MaxIterations { best: b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let r = brent(1.0, 2.0, 1e-14, |x| x * x * x - 2.0).unwrap();
        assert!((r - 2.0f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_same_sign() {
        assert!(matches!(
            brent(1.0, 2.0, 1e-14, |x| x * x + 1.0),
            Err(RootError::NoSignChange { .. })
        ));
    }

    #[test]
    fn exact_endpoint_root() {
        let r = brent(0.0, 1.0, 1e-14, |x| x).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn steep_function() {
        let r = brent(-1.0, 4.0, 1e-14, |x| (20.0 * (x - 0.7)).tanh()).unwrap();
        assert!((r - 0.7).abs() < 1e-12);
    }
}

//! Decaying potentials on the half line with weighted-space norms.
//!
//! A potential carries its value and first derivative, an analytic bound for
//! the integral tail of `|q| + |q'|`, and weighted L^2 norms over
//! `(1+x)^r dx`. Membership in the working space requires both q and q' to
//! have finite weighted norms.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::quad;
use crate::weights;

/// Construction/validation errors.
#[derive(Clone, Debug, PartialEq)]
pub enum PotentialError {
    /// A family parameter is outside its admissible range.
    BadParameter { what: String },
    /// A tabulated potential failed validation.
    BadTable { what: String },
    /// Weighted norm did not converge.
    Quadrature(quad::QuadError),
    /// Weight exponent invalid.
    Weight(weights::WeightError),
}

impl core::fmt::Display for PotentialError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PotentialError::BadParameter { what } => write!(f, "bad potential parameter: {what}"),
            PotentialError::BadTable { what } => write!(f, "bad tabulated potential: {what}"),
            PotentialError::Quadrature(e) => write!(f, "norm quadrature failed: {e}"),
            PotentialError::Weight(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PotentialError {}

impl From<quad::QuadError> for PotentialError {
    fn from(e: quad::QuadError) -> Self {
        PotentialError::Quadrature(e)
    }
}

impl From<weights::WeightError> for PotentialError {
    fn from(e: weights::WeightError) -> Self {
        PotentialError::Weight(e)
    }
}

#[derive(Clone, Debug)]
enum Kind {
    /// a e^(-c x)
    ExpDecay { a: f64, c: f64 },
    /// a e^(-c x^2)
    Gaussian { a: f64, c: f64 },
    /// C^2 cubic B-spline bump with peak `a`, supported on [0, l].
    CompactSpline { a: f64, l: f64 },
    /// a (1+x)^(-s)
    PowerDecay { a: f64, s: f64 },
    /// Clamped-left/natural-right cubic spline through sample points,
    /// zero beyond the table.
    Tabulated(Spline),
    /// Linear combination; used for directional-derivative probes.
    Combo(Vec<(f64, Potential)>),
}

/// A decaying potential q on [0, inf).
#[derive(Clone, Debug)]
pub struct Potential {
    kind: Kind,
}

impl Potential {
    /// The zero potential.
    pub fn zero() -> Self {
        Potential::exp_decay(0.0, 1.0)
    }

    /// `q(x) = a e^(-c x)`, c > 0.
    pub fn exp_decay(a: f64, c: f64) -> Self {
        assert!(c > 0.0 && c.is_finite() && a.is_finite(), "exp_decay needs finite a and c > 0");
        Potential { kind: Kind::ExpDecay { a, c } }
    }

    /// `q(x) = a e^(-c x^2)`, c > 0.
    pub fn gaussian(a: f64, c: f64) -> Self {
        assert!(c > 0.0 && c.is_finite() && a.is_finite(), "gaussian needs finite a and c > 0");
        Potential { kind: Kind::Gaussian { a, c } }
    }

    /// C^2 compactly supported bump on [0, l] with peak value `a` at l/2.
    pub fn compact_spline(a: f64, l: f64) -> Self {
        assert!(l > 0.0 && l.is_finite() && a.is_finite(), "compact_spline needs finite a and l > 0");
        Potential { kind: Kind::CompactSpline { a, l } }
    }

    /// `q(x) = a (1+x)^(-s)`, s > 0.
    pub fn power_decay(a: f64, s: f64) -> Self {
        assert!(s > 0.0 && s.is_finite() && a.is_finite(), "power_decay needs finite a and s > 0");
        Potential { kind: Kind::PowerDecay { a, s } }
    }

    /// Cubic-spline interpolant through `(xs, qs)` with prescribed left
    /// derivative and natural right end; identically zero past the table.
    pub fn tabulated(xs: &[f64], qs: &[f64], qprime0: f64) -> Result<Self, PotentialError> {
        let spline = Spline::build(xs, qs, qprime0)?;
        Ok(Potential { kind: Kind::Tabulated(spline) })
    }

    /// Linear combination `sum c_i q_i`.
    pub fn combo(terms: Vec<(f64, Potential)>) -> Self {
        Potential { kind: Kind::Combo(terms) }
    }

    /// Value and first derivative at `x >= 0`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        assert!(x >= 0.0, "potential evaluated at x = {x} < 0");
        match &self.kind {
            Kind::ExpDecay { a, c } => {
                let v = a * (-c * x).exp();
                (v, -c * v)
            }
            Kind::Gaussian { a, c } => {
                let v = a * (-c * x * x).exp();
                (v, -2.0 * c * x * v)
            }
            Kind::CompactSpline { a, l } => {
                if x >= *l {
                    (0.0, 0.0)
                } else {
                    let t = 4.0 * x / l;
                    let (b, bp) = bspline3(t);
                    (1.5 * a * b, 1.5 * a * bp * 4.0 / l)
                }
            }
            Kind::PowerDecay { a, s } => {
                let v = a * (1.0 + x).powf(-s);
                (v, -s * v / (1.0 + x))
            }
            Kind::Tabulated(sp) => sp.eval(x),
            Kind::Combo(terms) => {
                let mut q = 0.0;
                let mut qp = 0.0;
                for (c, p) in terms {
                    let (v, vp) = p.eval(x);
                    q += c * v;
                    qp += c * vp;
                }
                (q, qp)
            }
        }
    }

    /// Upper bound for `int_X^inf (|q| + |q'|) dx`.
    pub fn tail_bound(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        match &self.kind {
            Kind::ExpDecay { a, c } => a.abs() * (-c * x).exp() * (1.0 + c) / c,
            Kind::Gaussian { a, c } => {
                // int |q| <= |a| e^{-c x^2} / (2 c x) for x > 0; int |q'| = |a| e^{-c x^2}.
                let e = (-c * x * x).exp();
                if x * c.sqrt() >= 0.5 {
                    a.abs() * e * (1.0 / (2.0 * c * x) + 1.0)
                } else {
                    a.abs() * ((core::f64::consts::PI / c).sqrt() / 2.0 + 1.0)
                }
            }
            Kind::CompactSpline { a, l } => {
                if x >= *l {
                    0.0
                } else {
                    (l - x) * a.abs() * (1.0 + 3.0 / l)
                }
            }
            Kind::PowerDecay { a, s } => {
                let base = (1.0 + x).powf(-s);
                if *s > 1.0 {
                    a.abs() * (base * (1.0 + x) / (s - 1.0) + base)
                } else {
                    f64::INFINITY
                }
            }
            Kind::Tabulated(sp) => sp.tail_bound(x),
            Kind::Combo(terms) => terms.iter().map(|(c, p)| c.abs() * p.tail_bound(x)).sum(),
        }
    }

    /// Upper bound for `int_X^inf q(x)^2 (1+x)^r dx`.
    fn weighted_sq_tail(&self, x: f64, r: f64, of_derivative: bool) -> f64 {
        match &self.kind {
            Kind::ExpDecay { a, c } => {
                let amp = if of_derivative { a * c } else { *a };
                decaying_exp_tail(amp.abs(), 2.0 * c, x, r)
            }
            Kind::Gaussian { a, c } => {
                // q'^2 = 4 a^2 c^2 x^2 e^{-2 c x^2}; bound the polynomial factor
                // by an exponential beyond X.
                let x0 = x.max(1.0 / c.sqrt());
                let rate = 4.0 * c * x0 - r / (1.0 + x0) - if of_derivative { 2.0 / x0 } else { 0.0 };
                if rate <= 0.0 {
                    return f64::INFINITY;
                }
                let amp2 = if of_derivative {
                    4.0 * a * a * c * c * x0 * x0
                } else {
                    a * a
                };
                if x < x0 {
                    // Cheap constant bound below the matching point.
                    let peak = amp2.max(a * a * (1.0 + 4.0 * c));
                    peak * (1.0 + x0).powf(r) * (x0 - x) + self.weighted_sq_tail(x0, r, of_derivative)
                } else {
                    amp2 * (1.0 + x).powf(r) * (-2.0 * c * x * x).exp() / rate
                }
            }
            Kind::CompactSpline { a, l } => {
                if x >= *l {
                    0.0
                } else {
                    let m = if of_derivative { 3.0 * a / l } else { *a };
                    m * m * (1.0 + l).powf(r) * (l - x)
                }
            }
            Kind::PowerDecay { a, s } => {
                let ex = if of_derivative { 2.0 * s + 2.0 } else { 2.0 * s };
                let amp = if of_derivative { a * s } else { *a };
                let p = ex - r - 1.0;
                if p <= 0.0 {
                    f64::INFINITY
                } else {
                    amp * amp * (1.0 + x).powf(-p) / p
                }
            }
            Kind::Tabulated(sp) => {
                if x >= sp.last_x() {
                    0.0
                } else {
                    let (mq, mqp) = sp.max_abs();
                    let m = if of_derivative { mqp } else { mq };
                    m * m * (1.0 + sp.last_x()).powf(r) * (sp.last_x() - x)
                }
            }
            Kind::Combo(terms) => {
                // Minkowski: (sum |c_i| sqrt(T_i))^2.
                let s: f64 = terms
                    .iter()
                    .map(|(c, p)| c.abs() * p.weighted_sq_tail(x, r, of_derivative).sqrt())
                    .sum();
                s * s
            }
        }
    }

    /// Weighted norm `(int_0^inf q^2 (1+x)^r dx)^(1/2)`, r > 1.
    pub fn norm_ar(&self, r: f64) -> Result<f64, PotentialError> {
        weights::validate_r(r)?;
        self.weighted_norm(r, false)
    }

    /// Norm of the pair (q, q'): `sqrt(norm_ar(q)^2 + norm_ar(q')^2)`.
    pub fn norm_frak_ar(&self, r: f64) -> Result<f64, PotentialError> {
        weights::validate_r(r)?;
        let nq = self.weighted_norm(r, false)?;
        let nqp = self.weighted_norm(r, true)?;
        Ok((nq * nq + nqp * nqp).sqrt())
    }

    /// Membership test: both q and q' have finite weighted norms.
    pub fn in_frak_ar(&self, r: f64) -> Result<bool, PotentialError> {
        weights::validate_r(r)?;
        Ok(self.finite_in(r))
    }

    fn finite_in(&self, r: f64) -> bool {
        match &self.kind {
            Kind::ExpDecay { .. }
            | Kind::Gaussian { .. }
            | Kind::CompactSpline { .. }
            | Kind::Tabulated(_) => true,
            Kind::PowerDecay { s, .. } => *s > (r + 1.0) / 2.0,
            Kind::Combo(terms) => terms.iter().all(|(_, p)| p.finite_in(r)),
        }
    }

    fn weighted_norm(&self, r: f64, of_derivative: bool) -> Result<f64, PotentialError> {
        if !self.finite_in(r) {
            return Ok(f64::INFINITY);
        }
        let integrand = |x: f64| {
            let (q, qp) = self.eval(x);
            let v = if of_derivative { qp } else { q };
            v * v * (1.0 + x).powf(r)
        };
        // First pass to a provisional cut, then extend until the analytic
        // tail is negligible relative to the accumulated integral.
        let mut cut = weights::tail_cut(self, 1e-10).max(4.0);
        let mut total = quad::adaptive_gk(0.0, cut, 1e-16, 1e-11, integrand)?.value;
        for _ in 0..60 {
            let tail = self.weighted_sq_tail(cut, r, of_derivative);
            if tail <= 1e-10 * total.abs() + 1e-18 {
                break;
            }
            let next = cut * 2.0;
            total += quad::adaptive_gk(cut, next, 1e-16, 1e-11, integrand)?.value;
            cut = next;
        }
        Ok(total.max(0.0).sqrt())
    }

    /// Value and derivative at the origin.
    pub fn at_origin(&self) -> (f64, f64) {
        self.eval(0.0)
    }

    /// Interior points x > 0 where some derivative of q jumps (spline
    /// knots, support edges). Quadrature panels built on polynomial
    /// interpolation must not straddle these.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            Kind::ExpDecay { .. } | Kind::Gaussian { .. } | Kind::PowerDecay { .. } => Vec::new(),
            Kind::CompactSpline { l, .. } => {
                (1..=4).map(|k| k as f64 * l / 4.0).collect()
            }
            Kind::Tabulated(sp) => sp.xs[1..].to_vec(),
            Kind::Combo(terms) => {
                let mut pts: Vec<f64> = terms.iter().flat_map(|(_, p)| p.breakpoints()).collect();
                pts.sort_by(f64::total_cmp);
                pts.dedup();
                pts
            }
        }
    }

    /// One-line description for report echoes.
    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::ExpDecay { a, c } => format!("exp_decay(a={a}, c={c})"),
            Kind::Gaussian { a, c } => format!("gaussian(a={a}, c={c})"),
            Kind::CompactSpline { a, l } => format!("compact_spline(a={a}, l={l})"),
            Kind::PowerDecay { a, s } => format!("power_decay(a={a}, s={s})"),
            Kind::Tabulated(sp) => format!("tabulated({} points on [0, {}])", sp.len(), sp.last_x()),
            Kind::Combo(terms) => {
                let mut s = String::from("combo(");
                for (i, (c, p)) in terms.iter().enumerate() {
                    if i > 0 {
                        s.push_str(" + ");
                    }
                    s.push_str(&format!("{c} * {}", p.describe()));
                }
                s.push(')');
                s
            }
        }
    }
}

/// `int_X^inf A^2 e^{-k x} (1+x)^r dx` bounded via
/// `(1+x)^r <= (1+X)^r e^{r (x-X)/(1+X)}`.
fn decaying_exp_tail(amp: f64, k: f64, x: f64, r: f64) -> f64 {
    let rate = k - r / (1.0 + x);
    if rate <= 0.0 {
        f64::INFINITY
    } else {
        amp * amp * (1.0 + x).powf(r) * (-k * x).exp() / rate
    }
}

/// Cubic B-spline bump B(t) on [0, 4], C^2, peak 2/3 at t = 2.
/// Returns (B, B').
fn bspline3(t: f64) -> (f64, f64) {
    if !(0.0..4.0).contains(&t) {
        (0.0, 0.0)
    } else if t < 1.0 {
        (t * t * t / 6.0, t * t / 2.0)
    } else if t < 2.0 {
        (
            (-3.0 * t * t * t + 12.0 * t * t - 12.0 * t + 4.0) / 6.0,
            (-9.0 * t * t + 24.0 * t - 12.0) / 6.0,
        )
    } else if t < 3.0 {
        (
            (3.0 * t * t * t - 24.0 * t * t + 60.0 * t - 44.0) / 6.0,
            (9.0 * t * t - 48.0 * t + 60.0) / 6.0,
        )
    } else {
        let u = 4.0 - t;
        (u * u * u / 6.0, -u * u / 2.0)
    }
}

/// Cubic spline with clamped left derivative and natural right end.
#[derive(Clone, Debug)]
struct Spline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
    max_q: f64,
    max_qp: f64,
}

impl Spline {
    fn build(xs: &[f64], ys: &[f64], qprime0: f64) -> Result<Self, PotentialError> {
        if xs.len() != ys.len() {
            return Err(PotentialError::BadTable {
                what: format!("x has {} entries but q has {}", xs.len(), ys.len()),
            });
        }
        if xs.len() < 4 {
            return Err(PotentialError::BadTable {
                what: format!("need at least 4 sample points, got {}", xs.len()),
            });
        }
        if xs[0] != 0.0 {
            return Err(PotentialError::BadTable {
                what: format!("table must start at x = 0, got {}", xs[0]),
            });
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(PotentialError::BadTable {
                    what: format!("x values must be strictly increasing near {}", w[0]),
                });
            }
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) || !qprime0.is_finite() {
            return Err(PotentialError::BadTable { what: String::from("non-finite table entry") });
        }
        let last = *ys.last().unwrap();
        if last.abs() > 1e-9 {
            return Err(PotentialError::BadTable {
                what: format!("table must decay below 1e-9 at its end, got {last:.3e}"),
            });
        }

        // Tridiagonal system for knot second derivatives: clamped left
        // (S'(x0) = qprime0), natural right (S''(x_last) = 0).
        let n = xs.len();
        let mut diag = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        let h0 = xs[1] - xs[0];
        diag.push(h0 / 3.0);
        upper.push(h0 / 6.0);
        rhs.push((ys[1] - ys[0]) / h0 - qprime0);
        for i in 1..n - 1 {
            let hm = xs[i] - xs[i - 1];
            let hp = xs[i + 1] - xs[i];
            diag.push((hm + hp) / 3.0);
            upper.push(hp / 6.0);
            rhs.push((ys[i + 1] - ys[i]) / hp - (ys[i] - ys[i - 1]) / hm);
        }
        diag.push(1.0);
        upper.push(0.0);
        rhs.push(0.0);

        // Thomas algorithm; the lower diagonal mirrors the upper one except
        // in the final (natural) row, which is just m_last = 0.
        let mut m = rhs;
        let mut d = diag;
        for i in 1..n {
            let lower = if i == n - 1 { 0.0 } else { xs[i] - xs[i - 1] } / 6.0;
            let w = lower / d[i - 1];
            d[i] -= w * upper[i - 1];
            let prev = m[i - 1];
            m[i] -= w * prev;
        }
        m[n - 1] /= d[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (m[i] - upper[i] * m[i + 1]) / d[i];
        }

        let mut sp = Spline { xs: xs.to_vec(), ys: ys.to_vec(), m, max_q: 0.0, max_qp: 0.0 };
        let mut max_q = 0.0f64;
        let mut max_qp = 0.0f64;
        for i in 0..4 * n {
            let x = xs[0] + (xs[n - 1] - xs[0]) * i as f64 / (4 * n - 1) as f64;
            let (q, qp) = sp.eval(x);
            max_q = max_q.max(q.abs());
            max_qp = max_qp.max(qp.abs());
        }
        sp.max_q = max_q;
        sp.max_qp = max_qp;
        Ok(sp)
    }

    fn eval(&self, x: f64) -> (f64, f64) {
        let n = self.xs.len();
        if x <= self.xs[0] || x >= self.xs[n - 1] {
            if x == self.xs[0] {
                let h = self.xs[1] - self.xs[0];
                let d = (self.ys[1] - self.ys[0]) / h - h * (2.0 * self.m[0] + self.m[1]) / 6.0;
                return (self.ys[0], d);
            }
            return (0.0, 0.0);
        }
        let i = match self.xs.partition_point(|&t| t <= x) {
            0 => 0,
            p => p - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let v = a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0;
        let d = (self.ys[i + 1] - self.ys[i]) / h
            + (-(3.0 * a * a - 1.0) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h / 6.0;
        (v, d)
    }

    fn tail_bound(&self, x: f64) -> f64 {
        let last = self.last_x();
        if x >= last {
            0.0
        } else {
            (last - x) * (self.max_q + self.max_qp)
        }
    }

    fn last_x(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    fn max_abs(&self) -> (f64, f64) {
        (self.max_q, self.max_qp)
    }

    fn len(&self) -> usize {
        self.xs.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exp_decay_values() {
        let q = Potential::exp_decay(1.0, 1.0);
        let (v, d) = q.eval(0.0);
        assert_eq!(v, 1.0);
        assert_eq!(d, -1.0);
        let (v, d) = q.eval(2.0);
        assert!((v - (-2.0f64).exp()).abs() < 1e-16);
        assert!((d + (-2.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn exp_decay_norms_closed_form() {
        // int e^{-2x} (1+x)^2 dx = 5/4; with q' = -q the pair norm doubles.
        let q = Potential::exp_decay(1.0, 1.0);
        let n = q.norm_ar(2.0).unwrap();
        assert!((n - 1.25f64.sqrt()).abs() < 1e-9, "{n}");
        let nf = q.norm_frak_ar(2.0).unwrap();
        assert!((nf - 2.5f64.sqrt()).abs() < 1e-9, "{nf}");
    }

    #[test]
    fn power_decay_norm_closed_form() {
        // s = 2, r = 2: int (1+x)^{-4+2} dx = 1.
        let q = Potential::power_decay(1.0, 2.0);
        let n = q.norm_ar(2.0).unwrap();
        assert!((n - 1.0).abs() < 2e-7, "{n}");
    }

    #[test]
    fn power_decay_membership_threshold() {
        // Needs s > (r+1)/2 = 1.5.
        assert!(!Potential::power_decay(1.0, 1.4).in_frak_ar(2.0).unwrap());
        assert!(Potential::power_decay(1.0, 1.6).in_frak_ar(2.0).unwrap());
        assert_eq!(Potential::power_decay(1.0, 1.4).norm_ar(2.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn compact_spline_support_and_smoothness() {
        let q = Potential::compact_spline(2.0, 3.0);
        assert_eq!(q.eval(0.0), (0.0, 0.0));
        assert_eq!(q.eval(3.0), (0.0, 0.0));
        assert_eq!(q.eval(5.0), (0.0, 0.0));
        let (peak, dpeak) = q.eval(1.5);
        assert!((peak - 2.0).abs() < 1e-14);
        assert!(dpeak.abs() < 1e-13);
        // Derivative consistency by central differences.
        for x in [0.3, 0.9, 1.2, 2.1, 2.8] {
            let h = 1e-6;
            let fd = (q.eval(x + h).0 - q.eval(x - h).0) / (2.0 * h);
            assert!((fd - q.eval(x).1).abs() < 1e-7, "at {x}");
        }
        assert_eq!(q.tail_bound(3.0), 0.0);
    }

    #[test]
    fn tabulated_spline_reproduces_smooth_function() {
        // Sample e^{-2x} densely; check interpolation error and derivative.
        let xs: Vec<f64> = (0..200).map(|i| i as f64 * 0.075).collect();
        let qs: Vec<f64> = xs.iter().map(|&x| (-2.0 * x).exp() * 1e-0).collect();
        // Force the final entry under the decay threshold.
        let mut qs = qs;
        let n = qs.len();
        qs[n - 1] = 0.0;
        let q = Potential::tabulated(&xs, &qs, -2.0).unwrap();
        for &x in &[0.0, 0.11, 0.52, 1.3, 2.7, 5.0] {
            let (v, d) = q.eval(x);
            assert!((v - (-2.0 * x).exp()).abs() < 1e-5, "value at {x}");
            assert!((d + 2.0 * (-2.0 * x).exp()).abs() < 1e-3, "derivative at {x}");
        }
        assert_eq!(q.eval(20.0), (0.0, 0.0));
    }

    #[test]
    fn tabulated_rejections() {
        let bad = Potential::tabulated(&[0.0, 1.0, 2.0, 3.0], &[1.0, 0.5, 0.2, 0.1], -1.0);
        assert!(matches!(bad, Err(PotentialError::BadTable { .. })), "tail not decayed");
        let bad = Potential::tabulated(&[0.5, 1.0, 2.0, 3.0], &[1.0, 0.5, 0.2, 0.0], -1.0);
        assert!(matches!(bad, Err(PotentialError::BadTable { .. })), "must start at 0");
        let bad = Potential::tabulated(&[0.0, 1.0, 1.0, 3.0], &[1.0, 0.5, 0.2, 0.0], -1.0);
        assert!(matches!(bad, Err(PotentialError::BadTable { .. })), "not increasing");
        let bad = Potential::tabulated(&[0.0, 1.0, 2.0], &[1.0, 0.5, 0.0], -1.0);
        assert!(matches!(bad, Err(PotentialError::BadTable { .. })), "too short");
    }

    #[test]
    fn tail_bound_brackets_true_tail() {
        let q = Potential::exp_decay(1.5, 2.0);
        for x in [0.0, 1.0, 4.0, 10.0] {
            let true_tail = 1.5 * (-2.0 * x).exp() * (0.5 + 1.0);
            assert!(q.tail_bound(x) >= true_tail * 0.999, "at {x}");
        }
        // Gaussian bound dominates a numerical tail integral.
        let g = Potential::gaussian(1.0, 1.0);
        for x in [1.0, 2.0, 3.0] {
            let num = quad::adaptive_gk(x, x + 20.0, 1e-15, 1e-12, |t| {
                let (v, d) = g.eval(t);
                v.abs() + d.abs()
            })
            .unwrap()
            .value;
            assert!(g.tail_bound(x) >= num, "at {x}: {} < {num}", g.tail_bound(x));
        }
    }

    #[test]
    fn combo_linearity() {
        let q = Potential::exp_decay(1.0, 1.0);
        let v = Potential::gaussian(0.5, 1.0);
        let combo = Potential::combo(alloc::vec![(1.0, q.clone()), (2.0, v.clone())]);
        for x in [0.0, 0.7, 2.2] {
            let (cv, cd) = combo.eval(x);
            let (qv, qd) = q.eval(x);
            let (vv, vd) = v.eval(x);
            assert!((cv - (qv + 2.0 * vv)).abs() < 1e-15);
            assert!((cd - (qd + 2.0 * vd)).abs() < 1e-15);
        }
        assert!(combo.in_frak_ar(2.0).unwrap());
    }

    #[test]
    fn norm_rejects_bad_exponent() {
        let q = Potential::exp_decay(1.0, 1.0);
        assert!(matches!(q.norm_ar(1.0), Err(PotentialError::Weight(_))));
    }

    #[test]
    fn l1_dominated_by_weighted_norm() {
        // |q|_1 <= (r-1)^{-1/2} |q|_{A_r}.
        for (q, r) in [
            (Potential::exp_decay(1.0, 1.0), 2.0),
            (Potential::gaussian(2.0, 0.5), 3.0),
            (Potential::compact_spline(1.0, 3.0), 1.5),
        ] {
            let l1 = quad::adaptive_gk(0.0, 60.0, 1e-14, 1e-12, |x| q.eval(x).0.abs())
                .unwrap()
                .value;
            let bound = q.norm_ar(r).unwrap() / (r - 1.0).sqrt();
            assert!(l1 <= bound * (1.0 + 1e-9), "{l1} vs {bound}");
        }
    }

    proptest! {
        #[test]
        fn norm_homogeneity(a in 0.1f64..4.0, c in 0.3f64..3.0, s in 1.2f64..4.0) {
            let q1 = Potential::exp_decay(a, c);
            let qs = Potential::exp_decay(s * a, c);
            let n1 = q1.norm_ar(2.0).unwrap();
            let ns = qs.norm_ar(2.0).unwrap();
            prop_assert!((ns - s * n1).abs() <= 1e-9 * ns.max(1.0));
        }

        #[test]
        fn tail_bound_monotone(x1 in 0.0f64..8.0, dx in 0.0f64..8.0) {
            let q = Potential::gaussian(1.0, 0.7);
            prop_assert!(q.tail_bound(x1 + dx) <= q.tail_bound(x1) * (1.0 + 1e-12));
        }
    }
}

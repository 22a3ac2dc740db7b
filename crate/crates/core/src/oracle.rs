//! Slow, high-precision Airy oracle used only to generate and check test
//! expectations. Evaluates the Maclaurin series of Ai, Bi and their
//! derivatives in double-double arithmetic (~32 significant digits), which
//! keeps 20+ correct digits on |x| <= 12 despite the cancellation the series
//! suffers away from the origin. Production code must never call this.

/// Double-double value: `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

// Named methods instead of the operator traits: the sugar isn't worth the
// impl plumbing for a type that only backs tests.
#[allow(clippy::should_implement_trait)]
impl Dd {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    pub const fn from_f64(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd::new(-other.hi, -other.lo))
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul(Dd::from_f64(q1)));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul(Dd::from_f64(q2)));
        let q3 = r.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    pub fn scale(self, k: f64) -> Dd {
        self.mul(Dd::from_f64(k))
    }

    pub fn abs(self) -> f64 {
        if self.hi < 0.0 {
            -self.hi
        } else {
            self.hi
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

// Ai(0), Ai'(0), Bi(0), Bi'(0) as double-double constants (hi/lo split of
// 50-digit reference values; re-derivable from 3^(-2/3)/Gamma(2/3) etc.).
const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const AIP0: Dd = Dd::new(-0.2588194037928068, 2.522243111610832e-17);
const BI0: Dd = Dd::new(0.6149266274460007, 5.0899207794891416e-17);
const BIP0: Dd = Dd::new(0.4482883573538264, -2.5363237774417305e-17);

/// All four Airy values at one point, double-double precision.
#[derive(Clone, Copy, Debug)]
pub struct OracleAiry {
    pub ai: Dd,
    pub ai_prime: Dd,
    pub bi: Dd,
    pub bi_prime: Dd,
}

/// Maclaurin evaluation of the Airy pair at `x`.
///
/// Sums the two fundamental series f, g of y'' = x y (f(0)=1, f'(0)=0;
/// g(0)=0, g'(0)=1) until three consecutive terms fall below 1e-40 of the
/// running sums, doubling the term budget each round until the partial sums
/// stabilize. Accurate to ~1e-20 absolute on |x| <= 12.
pub fn airy_maclaurin(x: f64) -> OracleAiry {
    let (f, fp, g, gp) = fg_series(x);
    OracleAiry {
        ai: AI0.mul(f).add(AIP0.mul(g)),
        ai_prime: AI0.mul(fp).add(AIP0.mul(gp)),
        bi: BI0.mul(f).add(BIP0.mul(g)),
        bi_prime: BI0.mul(fp).add(BIP0.mul(gp)),
    }
}

fn fg_series(x: f64) -> (Dd, Dd, Dd, Dd) {
    let xd = Dd::from_f64(x);
    let x3 = xd.mul(xd).mul(xd);
    // Reciprocal kept in double-double so derivative terms stay full precision.
    let inv_x = if x != 0.0 {
        Dd::from_f64(1.0).div(xd)
    } else {
        Dd::from_f64(0.0)
    };

    let mut budget = 24usize;
    let mut prev: Option<(Dd, Dd, Dd, Dd)> = None;
    loop {
        let mut f = Dd::from_f64(1.0);
        let mut fp = Dd::from_f64(0.0);
        let mut g = xd;
        let mut gp = Dd::from_f64(1.0);

        // t_k = x^{3k} prod, u_k = d/dx t_k, and likewise for g.
        let mut t = Dd::from_f64(1.0);
        let mut s = xd;
        let mut small_streak = 0usize;
        for k in 0..budget {
            let kf = k as f64;
            // Denominators are exact small integers, so dd division keeps
            // the recurrence at full double-double precision.
            t = t.mul(x3).div(Dd::from_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0)));
            s = s.mul(x3).div(Dd::from_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0)));
            f = f.add(t);
            g = g.add(s);
            // derivative terms: (3k+3) t_{k+1} / x and (3k+4) s_{k+1} / x
            if x != 0.0 {
                fp = fp.add(t.scale(3.0 * kf + 3.0).mul(inv_x));
                gp = gp.add(s.scale(3.0 * kf + 4.0).mul(inv_x));
            }
            let scale = f.abs() + g.abs() + 1.0;
            if t.abs() < 1e-40 * scale && s.abs() < 1e-40 * scale {
                small_streak += 1;
                if small_streak >= 3 {
                    break;
                }
            } else {
                small_streak = 0;
            }
        }

        let cur = (f, fp, g, gp);
        if let Some(p) = prev {
            let stable = (p.0.sub(f).abs() <= 1e-32 * (1.0 + f.abs()))
                && (p.2.sub(g).abs() <= 1e-32 * (1.0 + g.abs()));
            if stable {
                return cur;
            }
        }
        prev = Some(cur);
        budget *= 2;
        assert!(budget <= 4096, "airy oracle series failed to stabilize at x = {x}");
    }
}

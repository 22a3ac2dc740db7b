//! Picard iteration for the Volterra integral form of the perturbed
//! equation, an independent construction of the solutions c and s that the
//! shooting solver can be checked against.
//!
//! With J0(z; x, y) = theta0(z,x) psi0(z,y) - psi0(z,x) theta0(z,y), the
//! perturbed solutions satisfy u = u0 + int_0^x J0(x, y) q(y) u(y) dy.
//! Each Picard term is kept in the split form
//! u_k(x) = theta0(x) A_k(x) - psi0(x) B_k(x) with cumulative integrals
//! A_k = int psi0 q u_{k-1}, B_k = int theta0 q u_{k-1}, so the kernel is
//! never formed pairwise and derivatives come for free from theta0', psi0'.
//!
//! Quadrature lives on fixed composite 16-node Gauss-Legendre panels sized
//! to the local Airy quarter wavelength. Within a panel the running
//! integrals are advanced by partial-weight matrices (integrals of the
//! degree-15 Lagrange basis up to each node, themselves exact under GL16),
//! so every Picard term is integrated exactly as the polynomial interpolant
//! of its integrand.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;

use crate::airy::AiryError;
use crate::basis;
use crate::potential::Potential;
use crate::quad;
use crate::weights;

/// Iteration cap; the terms decay factorially once the index passes the
/// coupling strength, so hitting this means the inputs are out of scope.
const K_MAX: usize = 40;
/// Pointwise relative term threshold for early exit.
const TERM_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub enum VolterraError {
    Airy(AiryError),
    /// Series not converged by `K_MAX`; carries the observed term norms.
    NotConverged { term_norms: Vec<f64> },
    /// Domain must satisfy 0 < x_max <= z + 40.
    BadDomain { z: f64, x_max: f64 },
    Quad(quad::QuadError),
}

impl core::fmt::Display for VolterraError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            VolterraError::Airy(e) => write!(f, "{e}"),
            VolterraError::NotConverged { term_norms } => write!(
                f,
                "Picard series not converged after {} terms (last sup {:.3e})",
                term_norms.len(),
                term_norms.last().copied().unwrap_or(f64::NAN)
            ),
            VolterraError::BadDomain { z, x_max } => {
                write!(f, "domain must satisfy 0 < x_max <= z + 40, got z = {z}, x_max = {x_max}")
            }
            VolterraError::Quad(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for VolterraError {}

impl From<AiryError> for VolterraError {
    fn from(e: AiryError) -> Self {
        VolterraError::Airy(e)
    }
}

impl From<quad::QuadError> for VolterraError {
    fn from(e: quad::QuadError) -> Self {
        VolterraError::Quad(e)
    }
}

/// Which unperturbed solution seeds the series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Seed {
    /// c0: unit value, zero slope at x = 0.
    Cosine,
    /// s0: zero value, unit slope at x = 0.
    Sine,
}

struct Panel {
    lo: f64,
    nodes: [f64; 16],
    /// Full-panel Gauss weights.
    full_w: [f64; 16],
    /// partial[i][j] = integral of the j-th Lagrange basis from lo to node i.
    partial: [[f64; 16]; 16],
    /// Normalized barycentric weights for interpolation.
    bary: [f64; 16],
    psi0: [f64; 16],
    psi0_prime: [f64; 16],
    theta0: [f64; 16],
    theta0_prime: [f64; 16],
    q: [f64; 16],
}

/// Converged Picard series for one seed at one spectral shift.
pub struct PicardSeries {
    pub z: f64,
    pub x_max: f64,
    pub seed: Seed,
    panels: Vec<Panel>,
    /// Flattened node coordinates, ascending.
    x_nodes: Vec<f64>,
    /// Per-term values at the nodes (term 0 is the seed).
    terms: Vec<Vec<f64>>,
    /// Accumulated solution and derivative at the nodes.
    total: Vec<f64>,
    total_prime: Vec<f64>,
    /// Sup of |term| over the nodes, one entry per term.
    pub term_norms: Vec<f64>,
}

/// Build the cosine-like perturbed solution c(z, x) on [0, x_max].
pub fn picard_c(q: &Potential, z: f64, x_max: f64) -> Result<PicardSeries, VolterraError> {
    picard(q, z, x_max, Seed::Cosine)
}

/// Build the sine-like perturbed solution s(z, x) on [0, x_max].
pub fn picard_s(q: &Potential, z: f64, x_max: f64) -> Result<PicardSeries, VolterraError> {
    picard(q, z, x_max, Seed::Sine)
}

/// Both solutions combined to match the boundary condition
/// y'(0) = b y(0): phi = c + b s.
pub struct PhiSolution {
    pub b: f64,
    pub c: PicardSeries,
    pub s: PicardSeries,
}

impl PhiSolution {
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let (cv, cp) = self.c.eval(x);
        let (sv, sp) = self.s.eval(x);
        (cv + self.b * sv, cp + self.b * sp)
    }
}

pub fn phi_solution(
    q: &Potential,
    b: f64,
    z: f64,
    x_max: f64,
) -> Result<PhiSolution, VolterraError> {
    Ok(PhiSolution { b, c: picard_c(q, z, x_max)?, s: picard_s(q, z, x_max)? })
}

fn picard(q: &Potential, z: f64, x_max: f64, seed: Seed) -> Result<PicardSeries, VolterraError> {
    if !(x_max > 0.0) || x_max > z + 40.0 || !z.is_finite() {
        return Err(VolterraError::BadDomain { z, x_max });
    }

    let panels = build_panels(q, z, x_max)?;
    let n_nodes: usize = panels.len() * 16;
    let mut x_nodes = Vec::with_capacity(n_nodes);
    for p in &panels {
        x_nodes.extend_from_slice(&p.nodes);
    }

    // Term 0: the seed solution on the grid, assembled from the same basis
    // values the kernel uses.
    let mut term = vec![0.0; n_nodes];
    let mut term_prime = vec![0.0; n_nodes];
    {
        let at0 = basis::eval(z, 0.0)?;
        let mut idx = 0;
        for p in &panels {
            for i in 0..16 {
                let (v, d) = match seed {
                    Seed::Cosine => (
                        at0.theta0_prime * p.psi0[i] - at0.psi0_prime * p.theta0[i],
                        at0.theta0_prime * p.psi0_prime[i] - at0.psi0_prime * p.theta0_prime[i],
                    ),
                    Seed::Sine => (
                        at0.psi0 * p.theta0[i] - at0.theta0 * p.psi0[i],
                        at0.psi0 * p.theta0_prime[i] - at0.theta0 * p.psi0_prime[i],
                    ),
                };
                term[idx] = v;
                term_prime[idx] = d;
                idx += 1;
            }
        }
    }

    let mut total = term.clone();
    let mut total_prime = term_prime.clone();
    let mut terms = vec![term.clone()];
    let mut term_norms = vec![sup_abs(&term)];

    for _k in 1..=K_MAX {
        // Next term: u <- theta0 * int psi0 q u - psi0 * int theta0 q u.
        let mut next = vec![0.0; n_nodes];
        let mut next_prime = vec![0.0; n_nodes];
        let mut a_run = 0.0;
        let mut b_run = 0.0;
        let mut idx = 0;
        for p in &panels {
            let mut fa = [0.0; 16];
            let mut fb = [0.0; 16];
            for i in 0..16 {
                let qu = p.q[i] * term[idx + i];
                fa[i] = p.psi0[i] * qu;
                fb[i] = p.theta0[i] * qu;
            }
            for i in 0..16 {
                let mut a_i = a_run;
                let mut b_i = b_run;
                for j in 0..16 {
                    a_i += p.partial[i][j] * fa[j];
                    b_i += p.partial[i][j] * fb[j];
                }
                next[idx + i] = p.theta0[i] * a_i - p.psi0[i] * b_i;
                next_prime[idx + i] = p.theta0_prime[i] * a_i - p.psi0_prime[i] * b_i;
            }
            for j in 0..16 {
                a_run += p.full_w[j] * fa[j];
                b_run += p.full_w[j] * fb[j];
            }
            idx += 16;
        }

        for i in 0..n_nodes {
            total[i] += next[i];
            total_prime[i] += next_prime[i];
        }
        term_norms.push(sup_abs(&next));
        let converged = next
            .iter()
            .zip(&total)
            .all(|(t, s)| t.abs() <= TERM_TOL * (1.0 + s.abs()));
        terms.push(next.clone());
        term = next;
        if converged {
            return Ok(PicardSeries {
                z,
                x_max,
                seed,
                panels,
                x_nodes,
                terms,
                total,
                total_prime,
                term_norms,
            });
        }
    }
    Err(VolterraError::NotConverged { term_norms })
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn build_panels(q: &Potential, z: f64, x_max: f64) -> Result<Vec<Panel>, VolterraError> {
    // Panel edges must land on the potential's derivative jumps, or the
    // per-panel degree-15 interpolation of q u drops to its C^2 floor.
    let mut cuts: Vec<f64> = q.breakpoints().into_iter().filter(|&c| c < x_max).collect();
    cuts.push(x_max);
    let mut panels = Vec::new();
    let mut lo = 0.0;
    for cut in cuts {
        // Sub-1e-12 slivers would degenerate the node set; the locator
        // tolerates the correspondingly tiny gap.
        while cut - lo > 1e-12 {
            // Quarter wavelength below the turning point; the same formula
            // also shortens panels where the solutions grow fastest above it.
            let rate = (z - lo).abs().max(1.0).sqrt();
            let hi = (lo + core::f64::consts::PI / (2.0 * rate)).min(cut);
            panels.push(make_panel(q, z, lo, hi)?);
            lo = hi;
        }
        lo = lo.max(cut);
    }
    Ok(panels)
}

fn make_panel(q: &Potential, z: f64, lo: f64, hi: f64) -> Result<Panel, VolterraError> {
    let nodes16 = quad::gl16_nodes(lo, hi);
    let full_w = quad::gl16_weights(lo, hi);

    // Barycentric weights, normalized to tame the scale.
    let mut bary = [0.0; 16];
    for j in 0..16 {
        let mut w = 1.0;
        for k in 0..16 {
            if k != j {
                w *= nodes16[j] - nodes16[k];
            }
        }
        bary[j] = 1.0 / w;
    }
    let bmax = bary.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for b in &mut bary {
        *b /= bmax;
    }

    // partial[i][j]: integrate the j-th Lagrange basis polynomial from lo to
    // node i; GL16 on the subinterval is exact at degree 15.
    let mut partial = [[0.0; 16]; 16];
    for i in 0..16 {
        let sub_x = quad::gl16_nodes(lo, nodes16[i]);
        let sub_w = quad::gl16_weights(lo, nodes16[i]);
        for (m, &t) in sub_x.iter().enumerate() {
            let l = lagrange_all(&nodes16, &bary, t);
            for j in 0..16 {
                partial[i][j] += sub_w[m] * l[j];
            }
        }
    }

    let mut psi0 = [0.0; 16];
    let mut psi0_prime = [0.0; 16];
    let mut theta0 = [0.0; 16];
    let mut theta0_prime = [0.0; 16];
    let mut qv = [0.0; 16];
    for i in 0..16 {
        let e = basis::eval(z, nodes16[i])?;
        psi0[i] = e.psi0;
        psi0_prime[i] = e.psi0_prime;
        theta0[i] = e.theta0;
        theta0_prime[i] = e.theta0_prime;
        qv[i] = q.eval(nodes16[i]).0;
    }

    Ok(Panel {
        lo,
        nodes: nodes16,
        full_w,
        partial,
        bary,
        psi0,
        psi0_prime,
        theta0,
        theta0_prime,
        q: qv,
    })
}

/// All 16 Lagrange basis values at `t` via the normalized barycentric form.
fn lagrange_all(nodes: &[f64; 16], bary: &[f64; 16], t: f64) -> [f64; 16] {
    let mut out = [0.0; 16];
    for j in 0..16 {
        if t == nodes[j] {
            out[j] = 1.0;
            return out;
        }
    }
    let mut denom = 0.0;
    let mut w = [0.0; 16];
    for j in 0..16 {
        w[j] = bary[j] / (t - nodes[j]);
        denom += w[j];
    }
    for j in 0..16 {
        out[j] = w[j] / denom;
    }
    out
}

impl PicardSeries {
    /// Node coordinates of the quadrature grid.
    pub fn grid(&self) -> &[f64] {
        &self.x_nodes
    }

    /// Accumulated solution values at the grid nodes.
    pub fn node_values(&self) -> (&[f64], &[f64]) {
        (&self.total, &self.total_prime)
    }

    /// Number of terms summed (including the seed).
    pub fn terms_used(&self) -> usize {
        self.terms.len()
    }

    /// Value and derivative at arbitrary `x` in [0, x_max] by barycentric
    /// interpolation on the containing panel.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        assert!(
            (0.0..=self.x_max).contains(&x),
            "evaluation point {x} outside [0, {}]",
            self.x_max
        );
        let pi = match self.panels.iter().position(|p| x < p.lo) {
            Some(0) | None if x >= self.panels.last().unwrap().lo => self.panels.len() - 1,
            Some(p) => p - 1,
            None => self.panels.len() - 1,
        };
        let p = &self.panels[pi];
        let l = lagrange_all(&p.nodes, &p.bary, x);
        let base = pi * 16;
        let mut v = 0.0;
        let mut d = 0.0;
        for j in 0..16 {
            v += l[j] * self.total[base + j];
            d += l[j] * self.total_prime[base + j];
        }
        (v, d)
    }

    /// Scaled residual of the Volterra equation at `x`, evaluated with an
    /// independent adaptive quadrature over the interpolated solution:
    /// |u(x) - u0(x) - theta0(x) int psi0 q u + psi0(x) int theta0 q u|
    /// relative to the local solution size.
    pub fn residual_at(&self, q: &Potential, x: f64) -> Result<f64, VolterraError> {
        let ex = basis::eval(self.z, x)?;
        let at0 = basis::eval(self.z, 0.0)?;
        let u0 = match self.seed {
            Seed::Cosine => at0.theta0_prime * ex.psi0 - at0.psi0_prime * ex.theta0,
            Seed::Sine => at0.psi0 * ex.theta0 - at0.theta0 * ex.psi0,
        };
        let mut bad = None;
        let mut integral = |weight: &dyn Fn(&basis::BasisEval) -> f64| -> f64 {
            match quad::adaptive_gk(0.0, x, 1e-14, 1e-11, |y| {
                let ey = match basis::eval(self.z, y) {
                    Ok(e) => e,
                    Err(er) => {
                        bad = Some(VolterraError::from(er));
                        return 0.0;
                    }
                };
                weight(&ey) * q.eval(y).0 * self.eval(y).0
            }) {
                Ok(r) => r.value,
                Err(e) => {
                    bad = Some(VolterraError::from(e));
                    0.0
                }
            }
        };
        let ia = integral(&|e| e.psi0);
        let ib = integral(&|e| e.theta0);
        if let Some(e) = bad {
            return Err(e);
        }
        let (u, _) = self.eval(x);
        let r = u - u0 - ex.theta0 * ia + ex.psi0 * ib;
        Ok(r.abs() / (1.0 + u.abs()))
    }

    /// Per-term envelope ratios for the factorial bound audit: for each term
    /// k the sup over nodes of |u_k| sigma(x-z) / (sigma(z) ch(z,x)),
    /// divided by (6 omega)^k / k!.
    pub fn term_shape_ratios(&self, omega: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.terms.len());
        let sz = weights::sigma(self.z);
        let mut factor = 1.0; // (6 omega)^k / k!
        for (k, term) in self.terms.iter().enumerate() {
            if k > 0 {
                factor *= 6.0 * omega / k as f64;
            }
            let mut sup = 0.0f64;
            for (i, &x) in self.x_nodes.iter().enumerate() {
                let env = weights::ch(self.z, x) * sz / weights::sigma(x - self.z);
                sup = sup.max(term[i].abs() / env);
            }
            out.push(if factor > 0.0 { sup / factor } else { f64::INFINITY });
        }
        out
    }

    /// Sup over nodes of |u - u0| sigma(z) sigma(x-z) / (ch(z,x) omega):
    /// the measured constant of the first-order deviation envelope.
    pub fn deviation_ratio(&self, omega: f64) -> f64 {
        if omega == 0.0 {
            return 0.0;
        }
        let sz = weights::sigma(self.z);
        let mut sup = 0.0f64;
        for (i, &x) in self.x_nodes.iter().enumerate() {
            let dev = (self.total[i] - self.terms[0][i]).abs();
            let env = weights::ch(self.z, x) / (sz * weights::sigma(x - self.z));
            sup = sup.max(dev / (env * omega));
        }
        sup
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode;

    #[test]
    fn zero_potential_returns_seed_exactly() {
        let q = Potential::zero();
        let s = picard_s(&q, 2.5, 10.0).unwrap();
        assert_eq!(s.terms_used(), 2, "one vanishing correction term");
        assert_eq!(s.term_norms[1], 0.0);
        for &x in &[0.0, 0.37, 2.5, 7.9, 10.0] {
            let (v, d) = s.eval(x);
            let e = basis::eval(2.5, x).unwrap();
            let scale = 1.0 + e.s0.abs() + e.s0_prime.abs();
            assert!((v - e.s0).abs() < 1e-9 * scale, "s at {x}");
            assert!((d - e.s0_prime).abs() < 1e-9 * scale, "s' at {x}");
        }
    }

    #[test]
    fn boundary_values() {
        let q = Potential::exp_decay(1.0, 1.0);
        for z in [-2.0, 1.0, 5.0] {
            let c = picard_c(&q, z, 6.0).unwrap();
            let s = picard_s(&q, z, 6.0).unwrap();
            let (cv, cp) = c.eval(0.0);
            let (sv, sp) = s.eval(0.0);
            assert!((cv - 1.0).abs() < 1e-11, "c(0) at z = {z}: {cv}");
            assert!(cp.abs() < 1e-11, "c'(0) at z = {z}: {cp}");
            assert!(sv.abs() < 1e-11, "s(0) at z = {z}: {sv}");
            assert!((sp - 1.0).abs() < 1e-11, "s'(0) at z = {z}: {sp}");
        }
    }

    #[test]
    fn wronskian_of_picard_pair() {
        let q = Potential::exp_decay(1.0, 1.0);
        let z = 5.0;
        let c = picard_c(&q, z, 9.0).unwrap();
        let s = picard_s(&q, z, 9.0).unwrap();
        for &x in &[0.0, 1.3, 3.0, 5.0, 6.5, 8.0] {
            let (cv, cp) = c.eval(x);
            let (sv, sp) = s.eval(x);
            let w = cv * sp - cp * sv;
            let cond = 1.0 + (cv * sp).abs() + (cp * sv).abs();
            assert!((w - 1.0).abs() < 1e-8 * cond.max(1.0), "x = {x}: {w} (cond {cond:.1e})");
        }
    }

    #[test]
    fn matches_direct_ode_integration() {
        let q = Potential::exp_decay(1.0, 1.0);
        for z in [1.0, 5.0] {
            let c = picard_c(&q, z, 10.0).unwrap();
            let s = picard_s(&q, z, 10.0).unwrap();
            let rhs = |x: f64, y: &[f64], dy: &mut [f64]| {
                let (qv, _) = q.eval(x);
                dy[0] = y[1];
                dy[1] = (x + qv - z) * y[0];
            };
            let opts = ode::OdeOptions { rtol: 1e-12, atol: vec![1e-14], ..Default::default() };
            let xs: Vec<f64> = (1..=40).map(|i| 0.25 * i as f64).collect();
            let (pc, _) = ode::integrate_samples(rhs, 0.0, &[1.0, 0.0], &xs, &opts).unwrap();
            let (ps, _) = ode::integrate_samples(rhs, 0.0, &[0.0, 1.0], &xs, &opts).unwrap();
            let mut cmax = 0.0f64;
            for (i, &x) in xs.iter().enumerate() {
                cmax = cmax.max(pc[i][0].abs()).max(ps[i][0].abs());
                let (cv, _) = c.eval(x);
                let (sv, _) = s.eval(x);
                let scale = 1.0 + cmax;
                assert!((cv - pc[i][0]).abs() < 1e-7 * scale, "c at z = {z}, x = {x}");
                assert!((sv - ps[i][0]).abs() < 1e-7 * scale, "s at z = {z}, x = {x}");
            }
        }
    }

    #[test]
    fn volterra_residual_small_at_probe_points() {
        let q = Potential::gaussian(0.8, 0.5);
        let z = 4.0;
        let c = picard_c(&q, z, 8.0).unwrap();
        // Deterministic low-discrepancy probes.
        for k in 1..=20 {
            let x = 8.0 * ((k as f64 * 0.6180339887498949) % 1.0);
            let r = c.residual_at(&q, x).unwrap();
            assert!(r < 1e-8, "residual {r:.2e} at x = {x}");
        }
    }

    #[test]
    fn spline_knots_do_not_degrade_the_series() {
        // Panels must break at the bump's knots; straddling one costs six
        // orders of magnitude here.
        let q = Potential::compact_spline(1.0, 4.0);
        let c = picard_c(&q, 5.0, 10.0).unwrap();
        for k in 1..=20 {
            let x = 10.0 * ((k as f64 * 0.6180339887498949) % 1.0);
            let r = c.residual_at(&q, x).unwrap();
            assert!(r < 1e-8, "residual {r:.2e} at x = {x}");
        }
    }

    #[test]
    fn term_norms_decay_factorially() {
        let q = Potential::exp_decay(2.0, 0.7);
        let z = 6.0;
        let s = picard_s(&q, z, 12.0).unwrap();
        let omega = weights::omega(&q, z).unwrap();
        // Factorial domination: ratios fall below 1/2 once k exceeds the
        // coupling scale by a margin.
        let k_star = (12.0 * omega).ceil() as usize + 2;
        for k in k_star..s.term_norms.len().saturating_sub(1) {
            if s.term_norms[k] == 0.0 {
                break;
            }
            let ratio = s.term_norms[k + 1] / s.term_norms[k];
            assert!(ratio < 0.6, "term ratio {ratio} at k = {k}");
        }
        assert!(s.terms_used() < 25, "unexpectedly slow convergence");
    }

    #[test]
    fn term_shape_ratios_bounded() {
        let q = Potential::exp_decay(1.0, 1.0);
        let z = 5.0;
        let c = picard_c(&q, z, 12.0).unwrap();
        let omega = weights::omega(&q, z).unwrap();
        let ratios = c.term_shape_ratios(omega);
        for (k, r) in ratios.iter().enumerate().take(7).skip(1) {
            // The bound allows C^{2(k+1)} for an O(1) envelope constant.
            let cap = 5.0f64.powi(k as i32 + 1);
            assert!(*r < cap, "term {k}: shape ratio {r:.3e} vs cap {cap:.1e}");
        }
        let dev = c.deviation_ratio(omega);
        assert!(dev.is_finite() && dev < 10.0, "deviation ratio {dev}");
    }

    #[test]
    fn phi_matches_boundary_condition() {
        let q = Potential::exp_decay(0.5, 1.0);
        for b in [-1.0, 0.0, 2.0] {
            let phi = phi_solution(&q, b, 3.0, 6.0).unwrap();
            let (v, d) = phi.eval(0.0);
            assert!((v - 1.0).abs() < 1e-11);
            assert!((d - b).abs() < 1e-11 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn rejects_bad_domain() {
        let q = Potential::zero();
        assert!(matches!(
            picard_c(&q, 1.0, 60.0),
            Err(VolterraError::BadDomain { .. })
        ));
        assert!(matches!(
            picard_c(&q, 1.0, 0.0),
            Err(VolterraError::BadDomain { .. })
        ));
    }
}

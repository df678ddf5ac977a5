//! Weierstrass elliptic functions on the lattice spanned by 1 and tau.
//!
//! Every context carries two independent evaluation routes for the
//! p-function: a Laurent series with duplication laddering in a reduced
//! frame, and a Jacobi theta quotient. The routes are cross-checked on
//! each call so convention drift cannot pass silently.

use crate::{Result, WlabError};
use num_complex::Complex64;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Modulus of a lattice, together with whether it already lies in the
/// standard fundamental domain |tau| >= 1, |Re tau| <= 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tau {
    pub value: Complex64,
    pub in_fundamental_domain: bool,
}

impl Tau {
    pub fn new(value: Complex64) -> Result<Self> {
        if !(value.im > 0.0) {
            return Err(WlabError::InvalidInput(format!(
                "tau must have positive imaginary part, got {value}"
            )));
        }
        Ok(Tau {
            value,
            in_fundamental_domain: in_f(value),
        })
    }
}

fn in_f(t: Complex64) -> bool {
    t.re.abs() <= 0.5 + 1e-12 && t.norm() >= 1.0 - 1e-12
}

/// Jacobi theta null values and the nome they were summed at.
#[derive(Debug, Clone, Copy)]
pub struct ThetaConstants {
    pub theta2: Complex64,
    pub theta3: Complex64,
    pub theta4: Complex64,
    pub nome_q: Complex64,
}

/// Numerical policy shared by all evaluations in one context.
#[derive(Debug, Clone, Copy)]
pub struct EllipticConfig {
    /// Points closer than this to a lattice point (reduced-frame units) are poles.
    pub pole_radius: f64,
    /// Allowed relative disagreement between the two p-function routes.
    pub route_tol: f64,
    /// Series terms below this relative size stop the summation.
    pub series_eps: f64,
    /// Hard cap on q-expansion terms.
    pub term_cap: usize,
}

impl Default for EllipticConfig {
    fn default() -> Self {
        EllipticConfig {
            pole_radius: 1e-6,
            route_tol: 1e-9,
            series_eps: 1e-16,
            term_cap: 10_000,
        }
    }
}

/// Reduced evaluation frame: the lattice of `tau` equals `scale` times the
/// lattice of `tau_f`, with `tau_f` in the fundamental domain.
#[derive(Debug, Clone)]
struct Frame {
    tau_f: Complex64,
    scale: Complex64,
    g2f: Complex64,
    e1f: Complex64,
    th3_0: Complex64,
    th4_0: Complex64,
    /// Laurent coefficients c_k for k = 2..=K of the p-function at tau_f.
    laurent: Vec<Complex64>,
    /// Quasi-period increments zeta(w+1) - zeta(w) and zeta(w+tau_f) - zeta(w).
    inc1: Complex64,
    inc_tau: Complex64,
}

/// All lattice constants for one tau, plus the evaluation frame.
#[derive(Debug, Clone)]
pub struct EllipticContext {
    pub tau: Tau,
    pub e1: Complex64,
    pub e2: Complex64,
    pub e3: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
    pub j: Complex64,
    pub mu: Complex64,
    pub theta: ThetaConstants,
    pub config: EllipticConfig,
    frame: Frame,
}

/// Reduces tau to the fundamental domain, returning the reduced value and
/// the integer matrix [[a,b],[c,d]] with tau' = (a tau + b)/(c tau + d).
pub fn reduce_to_fundamental_domain(tau_raw: Complex64) -> Result<(Tau, [[i64; 2]; 2])> {
    if !(tau_raw.im > 0.0) {
        return Err(WlabError::InvalidInput(format!(
            "tau must have positive imaginary part, got {tau_raw}"
        )));
    }
    let mut t = tau_raw;
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..256 {
        let n = t.re.round();
        if n != 0.0 {
            t -= n;
            // T^{-n} composed on the left.
            let n = n as i64;
            m = [[m[0][0] - n * m[1][0], m[0][1] - n * m[1][1]], m[1]];
        }
        if t.norm_sqr() < 1.0 - 1e-14 {
            t = -t.inv();
            m = [[-m[1][0], -m[1][1]], m[0]];
        } else {
            let tau = Tau {
                value: t,
                in_fundamental_domain: true,
            };
            return Ok((tau, m));
        }
    }
    Err(WlabError::Inconclusive(
        "fundamental-domain reduction did not terminate".into(),
    ))
}

fn theta_null(tau: Complex64, cfg: &EllipticConfig) -> Result<ThetaConstants> {
    let q = (c(0.0, PI) * tau).exp();
    if q.norm() >= 1.0 {
        return Err(WlabError::InvalidInput(format!(
            "theta series diverge: |q| = {} >= 1",
            q.norm()
        )));
    }
    let q2 = q * q;
    // theta2 = 2 q^{1/4} sum q^{n(n+1)}, computed with the canonical branch of q^{1/4}.
    let q14 = (c(0.0, PI / 4.0) * tau).exp();
    let mut s2 = c(1.0, 0.0);
    let mut term = c(1.0, 0.0);
    for n in 1..cfg.term_cap {
        term *= q2.powu(n as u32);
        s2 += term;
        if term.norm() < cfg.series_eps * s2.norm() {
            break;
        }
    }
    let theta2 = 2.0 * q14 * s2;
    let mut s3 = c(1.0, 0.0);
    let mut s4 = c(1.0, 0.0);
    let mut qp = c(1.0, 0.0);
    for n in 1..cfg.term_cap {
        qp *= q.powu(2 * n as u32 - 1);
        let t = 2.0 * qp;
        s3 += t;
        if n % 2 == 0 {
            s4 += t;
        } else {
            s4 -= t;
        }
        if t.norm() < cfg.series_eps * (s3.norm() + 1.0) {
            break;
        }
    }
    Ok(ThetaConstants {
        theta2,
        theta3: s3,
        theta4: s4,
        nome_q: q,
    })
}

/// Theta null values by direct series; errors if |q| >= 1.
pub fn theta_constants(tau: Complex64) -> Result<ThetaConstants> {
    Tau::new(tau)?;
    theta_null(tau, &EllipticConfig::default())
}

fn half_period_values(th: &ThetaConstants) -> (Complex64, Complex64, Complex64) {
    let p2 = PI * PI / 3.0;
    let t2 = th.theta2.powu(4);
    let t3 = th.theta3.powu(4);
    let t4 = th.theta4.powu(4);
    (p2 * (t3 + t4), -p2 * (t2 + t3), p2 * (t2 - t4))
}

/// Eisenstein E2 from its q-expansion in q2 = e^{2 pi i tau}.
fn eisenstein_e2(tau: Complex64, cfg: &EllipticConfig) -> Complex64 {
    let q2 = (c(0.0, 2.0 * PI) * tau).exp();
    let mut s = c(0.0, 0.0);
    let mut qn = c(1.0, 0.0);
    for n in 1..cfg.term_cap {
        qn *= q2;
        let term = n as f64 * qn / (1.0 - qn);
        s += term;
        if term.norm() < cfg.series_eps * (1.0 + s.norm()) {
            break;
        }
    }
    1.0 - 24.0 * s
}

/// Modular discriminant via the eta product (2 pi)^12 q2 prod (1-q2^n)^24.
///
/// Identical to g2^3 - 27 g3^2 but free of the catastrophic cancellation
/// that expression suffers for Im tau above roughly 2.
fn discriminant_eta(tau: Complex64, cfg: &EllipticConfig) -> Complex64 {
    let q2 = (c(0.0, 2.0 * PI) * tau).exp();
    let mut prod = c(1.0, 0.0);
    let mut qn = c(1.0, 0.0);
    for _ in 1..cfg.term_cap {
        qn *= q2;
        if qn.norm() < 1e-20 {
            break;
        }
        prod *= 1.0 - qn;
    }
    (2.0 * PI).powi(12) * q2 * prod.powu(24)
}

fn laurent_coeffs(g2: Complex64, g3: Complex64, kmax: usize) -> Vec<Complex64> {
    // c_2 = g2/20, c_3 = g3/28, then the quadratic recursion.
    let mut cs = vec![c(0.0, 0.0); kmax + 1];
    cs[2] = g2 / 20.0;
    cs[3] = g3 / 28.0;
    for k in 4..=kmax {
        let mut acc = c(0.0, 0.0);
        for m in 2..=k - 2 {
            acc += cs[m] * cs[k - m];
        }
        cs[k] = 3.0 / ((2 * k + 1) as f64 * (k - 3) as f64) * acc;
    }
    cs
}

/// Builds the full constant set for tau with default numerical policy.
pub fn elliptic_context(tau: Complex64) -> Result<EllipticContext> {
    elliptic_context_with(tau, EllipticConfig::default())
}

pub fn elliptic_context_with(tau_value: Complex64, config: EllipticConfig) -> Result<EllipticContext> {
    let tau = Tau::new(tau_value)?;
    let th = theta_null(tau_value, &config)?;
    let (e1, e2, e3) = half_period_values(&th);
    let g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3);
    let g3 = 4.0 * e1 * e2 * e3;
    let disc = discriminant_eta(tau_value, &config);
    if disc.norm() < 1e-280 {
        return Err(WlabError::DegenerateLattice {
            disc_abs: disc.norm(),
        });
    }
    let j = 1728.0 * g2.powu(3) / disc;
    let mu = -(PI * PI / 3.0) * eisenstein_e2(tau_value, &config);

    let (tf, m) = reduce_to_fundamental_domain(tau_value)?;
    let tau_f = tf.value;
    // 1/scale = a - c tau_f, so scale is exact from the reduction matrix.
    let scale = 1.0 / (m[0][0] as f64 - m[1][0] as f64 * tau_f);
    let thf = theta_null(tau_f, &config)?;
    let (e1f, e2f, e3f) = half_period_values(&thf);
    let g2f = -4.0 * (e1f * e2f + e1f * e3f + e2f * e3f);
    let g3f = 4.0 * e1f * e2f * e3f;
    let muf = -(PI * PI / 3.0) * eisenstein_e2(tau_f, &config);
    // zeta(1/2) = -mu/2 in the reduced frame; Legendre fixes the tau leg.
    let eta1f = -0.5 * muf;
    let eta2f = eta1f * tau_f - c(0.0, PI);
    let frame = Frame {
        tau_f,
        scale,
        g2f,
        e1f,
        th3_0: thf.theta3,
        th4_0: thf.theta4,
        laurent: laurent_coeffs(g2f, g3f, 30),
        inc1: 2.0 * eta1f,
        inc_tau: 2.0 * eta2f,
    };
    Ok(EllipticContext {
        tau,
        e1,
        e2,
        e3,
        g2,
        g3,
        j,
        mu,
        theta: th,
        config,
        frame,
    })
}

/// Odd theta function at general argument: 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1)u).
pub fn theta1_general(u: Complex64, tau: Complex64) -> Complex64 {
    let mut s = c(0.0, 0.0);
    for n in 0..64u32 {
        let ex = (c(0.0, PI) * tau * ((n as f64 + 0.5) * (n as f64 + 0.5))).exp();
        let term = ex * ((2.0 * n as f64 + 1.0) * u).sin();
        s += if n % 2 == 0 { term } else { -term };
        if term.norm() < 1e-18 * (1.0 + s.norm()) {
            break;
        }
    }
    2.0 * s
}

/// Even theta function at general argument: 2 sum q^{(n+1/2)^2} cos((2n+1)u).
pub fn theta2_general(u: Complex64, tau: Complex64) -> Complex64 {
    let mut s = c(0.0, 0.0);
    for n in 0..64u32 {
        let ex = (c(0.0, PI) * tau * ((n as f64 + 0.5) * (n as f64 + 0.5))).exp();
        let term = ex * ((2.0 * n as f64 + 1.0) * u).cos();
        s += term;
        if term.norm() < 1e-18 * (1.0 + s.norm()) {
            break;
        }
    }
    2.0 * s
}

/// Maps z into the reduced frame and subtracts the nearest lattice point.
/// Returns (w_reduced, lattice point in original coordinates, reduced distance).
fn reduce_z(z: Complex64, fr: &Frame) -> (Complex64, Complex64, f64) {
    let w = z / fr.scale;
    let y = w.im / fr.tau_f.im;
    let x = w.re - y * fr.tau_f.re;
    let m = x.round();
    let n = y.round();
    let w_red = w - m - n * fr.tau_f;
    let lattice_pt = fr.scale * (m + n * fr.tau_f);
    (w_red, lattice_pt, w_red.norm())
}

fn laurent_eval(w: Complex64, fr: &Frame) -> (Complex64, Complex64) {
    let w2 = w * w;
    let mut p = 1.0 / w2;
    let mut pp = -2.0 / (w2 * w);
    let mut zpow = c(1.0, 0.0); // w^{2k-2} built incrementally starting at k=2
    for k in 2..fr.laurent.len() {
        zpow *= w2;
        let ck = fr.laurent[k];
        p += ck * zpow;
        pp += (2 * k - 2) as f64 * ck * zpow / w;
    }
    (p, pp)
}

/// Laurent + duplication ladder in the reduced frame. w must be the reduced point.
fn wp_ladder(w_red: Complex64, fr: &Frame) -> (Complex64, Complex64) {
    let mut w = w_red;
    let mut halvings = 0;
    while w.norm() > 0.35 {
        w *= 0.5;
        halvings += 1;
    }
    let (mut p, mut pp) = laurent_eval(w, fr);
    for _ in 0..halvings {
        let a = (6.0 * p * p - 0.5 * fr.g2f) / (2.0 * pp);
        let pnext = a * a - 2.0 * p;
        pp = 6.0 * p * a - 2.0 * a * a * a - pp;
        p = pnext;
    }
    (p, pp)
}

fn wp_theta_reduced(w_red: Complex64, fr: &Frame) -> Complex64 {
    let u = PI * w_red;
    let quot = theta2_general(u, fr.tau_f) / theta1_general(u, fr.tau_f);
    fr.e1f + (PI * fr.th3_0 * fr.th4_0 * quot).powu(2)
}

fn pole_guard(z: Complex64, ctx: &EllipticContext) -> Result<(Complex64, Complex64)> {
    let (w_red, lattice_pt, dist) = reduce_z(z, &ctx.frame);
    if dist < ctx.config.pole_radius {
        return Err(WlabError::Pole {
            lattice_point: lattice_pt,
            distance: dist,
        });
    }
    Ok((w_red, lattice_pt))
}

/// p-function. Primary route returned after cross-checking the theta route.
pub fn wp(z: Complex64, ctx: &EllipticContext) -> Result<Complex64> {
    Ok(wp_with_derivative(z, ctx)?.0)
}

/// Derivative of the p-function; validated against the defining ODE.
pub fn wp_prime(z: Complex64, ctx: &EllipticContext) -> Result<Complex64> {
    Ok(wp_with_derivative(z, ctx)?.1)
}

/// Evaluates p and p' in one ladder pass, with both consistency checks.
pub fn wp_with_derivative(z: Complex64, ctx: &EllipticContext) -> Result<(Complex64, Complex64)> {
    let (w_red, _) = pole_guard(z, ctx)?;
    let fr = &ctx.frame;
    let (pf, ppf) = wp_ladder(w_red, fr);
    let pf_theta = wp_theta_reduced(w_red, fr);
    let delta = (pf - pf_theta).norm();
    let tol = ctx.config.route_tol * pf.norm().max(1.0);
    if delta > tol {
        return Err(WlabError::RouteMismatch { delta, tol });
    }
    let s2 = fr.scale * fr.scale;
    Ok((pf / s2, ppf / (s2 * fr.scale)))
}

/// Theta-quotient route alone, exposed for independent comparisons.
pub fn wp_theta_route(z: Complex64, ctx: &EllipticContext) -> Result<Complex64> {
    let (w_red, _) = pole_guard(z, ctx)?;
    let fr = &ctx.frame;
    Ok(wp_theta_reduced(w_red, fr) / (fr.scale * fr.scale))
}

/// Weierstrass zeta via the same ladder plus quasi-period bookkeeping.
pub fn weierstrass_zeta(z: Complex64, ctx: &EllipticContext) -> Result<Complex64> {
    let fr = &ctx.frame;
    let w = z / fr.scale;
    let y = w.im / fr.tau_f.im;
    let x = w.re - y * fr.tau_f.re;
    let m = x.round();
    let n = y.round();
    let w_red = w - m - n * fr.tau_f;
    if w_red.norm() < ctx.config.pole_radius {
        return Err(WlabError::Pole {
            lattice_point: fr.scale * (m + n * fr.tau_f),
            distance: w_red.norm(),
        });
    }
    let mut wh = w_red;
    let mut halvings = 0;
    while wh.norm() > 0.35 {
        wh *= 0.5;
        halvings += 1;
    }
    let (mut p, mut pp) = laurent_eval(wh, fr);
    let mut zt = zeta_series(wh, fr);
    for _ in 0..halvings {
        let a = (6.0 * p * p - 0.5 * fr.g2f) / (2.0 * pp);
        zt = 2.0 * zt + a;
        let pnext = a * a - 2.0 * p;
        pp = 6.0 * p * a - 2.0 * a * a * a - pp;
        p = pnext;
    }
    let zf = zt + m * fr.inc1 + n * fr.inc_tau;
    Ok(zf / fr.scale)
}

fn zeta_series(w: Complex64, fr: &Frame) -> Complex64 {
    // zeta(w) = 1/w - sum_{k>=2} c_k w^{2k-1}/(2k-1).
    let mut s = 1.0 / w;
    let w2 = w * w;
    let mut zpow = w * w2; // w^{2k-1} at k = 2
    for k in 2..fr.laurent.len() {
        s -= fr.laurent[k] * zpow / (2 * k - 1) as f64;
        zpow *= w2;
    }
    s
}

/// Residual of zeta' = -p by central finite differences; diagnostic helper.
pub fn zeta_derivative_residual(z: Complex64, ctx: &EllipticContext) -> Result<f64> {
    let h = 1e-5;
    let dz = c(h, 0.0);
    let d = (weierstrass_zeta(z + dz, ctx)? - weierstrass_zeta(z - dz, ctx)?) / (2.0 * h);
    Ok((d + wp(z, ctx)?).norm())
}

/// The three q-series for (-mu + e1, -mu + e2, -mu + e3), summed independently
/// of the context's own constants.
pub fn q_series_differences(ctx: &EllipticContext) -> (Complex64, Complex64, Complex64) {
    let q = ctx.theta.nome_q;
    let p2 = PI * PI;
    let cap = ctx.config.term_cap;
    let eps = ctx.config.series_eps;
    let mut s1 = c(0.0, 0.0);
    let mut s2 = c(0.0, 0.0);
    let mut s3 = c(0.0, 0.0);
    let mut qn = c(1.0, 0.0);
    let q2 = q * q;
    let mut q2n = c(1.0, 0.0);
    for n in 1..cap {
        qn *= q;
        q2n *= q2;
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let t1 = sign * nf * q2n / (1.0 - q2n);
        let t2 = nf * qn / (1.0 - q2n);
        let t3 = -sign * nf * qn / (1.0 - q2n);
        s1 += t1;
        s2 += t2;
        s3 += t3;
        if t1.norm() + t2.norm() + t3.norm() < eps * (1.0 + s1.norm() + s2.norm() + s3.norm()) {
            break;
        }
    }
    (p2 - 8.0 * p2 * s1, -8.0 * p2 * s2, 8.0 * p2 * s3)
}

/// Difference e2 - e3 by the cancellation-free odd-index q-series.
pub fn e2_minus_e3_q_series(ctx: &EllipticContext) -> Complex64 {
    let q = ctx.theta.nome_q;
    let q2 = q * q;
    let mut s = c(0.0, 0.0);
    let mut qn = q;
    let mut q2n = q2;
    let mut n = 1u64;
    while n < ctx.config.term_cap as u64 {
        let term = n as f64 * qn / (1.0 - q2n);
        s += term;
        if term.norm() < ctx.config.series_eps * (1.0 + s.norm()) {
            break;
        }
        // advance to the next odd n
        qn *= q2;
        q2n *= q2 * q2;
        n += 2;
    }
    -16.0 * PI * PI * s
}

/// JSON wire form of a context: {tau, e:[..], g2, g3, j, mu} with "a+bi" literals.
pub fn context_to_json(ctx: &EllipticContext) -> serde_json::Value {
    use crate::cplx::format_complex as fc;
    serde_json::json!({
        "tau": fc(ctx.tau.value),
        "e": [fc(ctx.e1), fc(ctx.e2), fc(ctx.e3)],
        "g2": fc(ctx.g2),
        "g3": fc(ctx.g3),
        "j": fc(ctx.j),
        "mu": fc(ctx.mu),
    })
}

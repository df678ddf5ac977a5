//! Torus engine: meromorphic 1-forms with a single double pole, the
//! three-puncture data family, its squared-sum classification, the 4x3
//! period matrix with rank and kernel analysis, and the scan showing the
//! rank-2 conditions fail on the relevant tau families.

use crate::elliptic::{e2_minus_e3_q_series, elliptic_context, wp, wp_with_derivative, EllipticContext};
use crate::linalg;
use crate::quad::integrate_segment;
use crate::{Result, WlabError};
use num_complex::Complex64;
use rayon::prelude::*;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Decomposes w = m + n*tau and returns the nearest integer pair with the
/// rounding residual.
fn lattice_coords(w: Complex64, tau: Complex64) -> (f64, f64, f64) {
    let n = w.im / tau.im;
    let m = w.re - n * tau.re;
    let resid = (m - m.round()).abs().max((n - n.round()).abs());
    (m.round(), n.round(), resid)
}

fn lattice_congruent(a: Complex64, b: Complex64, tau: Complex64) -> bool {
    let (_, _, resid) = lattice_coords(a - b, tau);
    resid < 1e-9
}

/// The three half-periods of the lattice (1, tau), in the order matching the
/// branch values e1, e2, e3.
pub fn half_periods(tau: Complex64) -> [Complex64; 3] {
    [
        c(0.5, 0.0),
        0.5 * tau,
        0.5 * (tau + c(1.0, 0.0)),
    ]
}

/// Index into half_periods if q is congruent to one of them, else None.
pub fn half_period_index(q: Complex64, tau: Complex64) -> Option<usize> {
    half_periods(tau)
        .iter()
        .position(|&h| lattice_congruent(q, h, tau))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaKind {
    /// 1/(wp(z) - wp(q)); valid when q is a half-period.
    H,
    /// (wp'(z) + wp'(q) + (wp''(q)/wp'(q)) (wp(z) - wp(q))) / (wp(z) - wp(q))^2;
    /// valid when q is not a half-period.
    D,
}

/// A 1-form density with a double pole at q and zero residue.
#[derive(Debug, Clone, Copy)]
pub struct EtaForm {
    pub q: Complex64,
    pub kind: EtaKind,
    pub wp_q: Complex64,
    pub wp_prime_q: Complex64,
    pub wp_pp_q: Complex64,
}

impl EtaForm {
    /// Evaluates the density given wp and wp' at the point.
    pub fn eval_at(&self, wp_z: Complex64, wp_prime_z: Complex64) -> Complex64 {
        let d = wp_z - self.wp_q;
        match self.kind {
            EtaKind::H => 1.0 / d,
            EtaKind::D => {
                (wp_prime_z + self.wp_prime_q + (self.wp_pp_q / self.wp_prime_q) * d) / (d * d)
            }
        }
    }

    pub fn eval(&self, ctx: &EllipticContext, z: Complex64) -> Result<Complex64> {
        let (p, pp) = wp_with_derivative(z, ctx)?;
        Ok(self.eval_at(p, pp))
    }
}

/// Builds the double-pole form at q: the reciprocal form when q is a
/// half-period, the derivative-quotient form otherwise.
pub fn eta_form(q: Complex64, ctx: &EllipticContext) -> Result<EtaForm> {
    let tau = ctx.tau.value;
    if let Some(idx) = half_period_index(q, tau) {
        // wp at a half-period equals the corresponding branch value; use it
        // directly rather than evaluating wp near its critical point.
        let wp_q = [ctx.e1, ctx.e2, ctx.e3][idx];
        return Ok(EtaForm {
            q,
            kind: EtaKind::H,
            wp_q,
            wp_prime_q: c(0.0, 0.0),
            wp_pp_q: c(0.0, 0.0),
        });
    }
    let (wp_q, wp_prime_q) = wp_with_derivative(q, ctx)?;
    // wp'' = 6 wp^2 - g2/2 from differentiating the cubic ODE.
    let wp_pp_q = 6.0 * wp_q * wp_q - 0.5 * ctx.g2;
    Ok(EtaForm {
        q,
        kind: EtaKind::D,
        wp_q,
        wp_prime_q,
        wp_pp_q,
    })
}

/// 1-form written over the basis {dz, wp dz} plus attached double-pole forms.
#[derive(Debug, Clone)]
pub struct TorusForm {
    pub c_dz: Complex64,
    pub c_wp: Complex64,
    pub attached: Vec<(Complex64, EtaForm)>,
}

impl TorusForm {
    pub fn eval_at(&self, wp_z: Complex64, wp_prime_z: Complex64) -> Complex64 {
        let mut v = self.c_dz + self.c_wp * wp_z;
        for (coef, form) in &self.attached {
            v += coef * form.eval_at(wp_z, wp_prime_z);
        }
        v
    }

    pub fn eval(&self, ctx: &EllipticContext, z: Complex64) -> Result<Complex64> {
        let (p, pp) = wp_with_derivative(z, ctx)?;
        Ok(self.eval_at(p, pp))
    }
}

/// Coefficients of the three-puncture family: phi_1..phi_4 built from
/// (a0..d0) dz, the eta-forms at q1 and q3, and wp dz at the middle puncture.
#[derive(Debug, Clone)]
pub struct Genus1Data {
    pub a0: Complex64,
    pub b0: Complex64,
    pub c0: Complex64,
    pub d0: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub sigma2: i32,
    pub sigma3: i32,
    pub q1: Complex64,
    pub q3: Complex64,
}

impl Genus1Data {
    pub fn validate(&self) -> Result<()> {
        if self.alpha.norm() == 0.0 || self.beta.norm() == 0.0 || self.gamma.norm() == 0.0 {
            return Err(WlabError::InvalidInput(
                "alpha, beta, gamma must be nonzero".into(),
            ));
        }
        if self.sigma2.abs() != 1 || self.sigma3.abs() != 1 {
            return Err(WlabError::InvalidInput("sigma values must be +-1".into()));
        }
        Ok(())
    }

    /// The four 1-forms of the family.
    pub fn forms(&self, ctx: &EllipticContext) -> Result<[TorusForm; 4]> {
        self.validate()?;
        let eta1 = eta_form(self.q1, ctx)?;
        let eta3 = eta_form(self.q3, ctx)?;
        let s2 = self.sigma2 as f64;
        let s3 = self.sigma3 as f64;
        Ok([
            TorusForm {
                c_dz: self.a0,
                c_wp: self.beta,
                attached: vec![(self.alpha, eta1)],
            },
            TorusForm {
                c_dz: self.b0,
                c_wp: I * s2 * self.beta,
                attached: vec![(I * self.alpha, eta1)],
            },
            TorusForm {
                c_dz: self.c0,
                c_wp: self.beta,
                attached: vec![(self.gamma, eta3)],
            },
            TorusForm {
                c_dz: self.d0,
                c_wp: -I * s2 * self.beta,
                attached: vec![(-I * s3 * self.gamma, eta3)],
            },
        ])
    }

    /// Projective images of the Gauss map at the three punctures, read off
    /// the coefficient vectors of the double-pole parts.
    pub fn gauss_images(&self) -> [[Complex64; 4]; 3] {
        let s2 = I * self.sigma2 as f64;
        let s3 = I * self.sigma3 as f64;
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        [
            // At q1: coefficients of eta1 are (alpha, i alpha, 0, 0).
            [one, I, zero, zero],
            // At the middle puncture: coefficients of wp dz.
            [one, s2, one, -s2],
            // At q3: coefficients of eta3.
            [zero, zero, one, -s3],
        ]
    }
}

/// The unique coefficient solution of the non-holomorphic branch
/// (sigma2 = -1, sigma3 = +1, both punctures at half-periods).
pub fn case2_coefficients(
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    wp1: Complex64,
    wp3: Complex64,
) -> (Complex64, Complex64, Complex64, Complex64) {
    let t = (alpha + gamma) / (wp3 - wp1);
    (
        -beta * wp1 - t,
        I * beta * wp1 - I * t,
        -beta * wp3 + t,
        -I * beta * wp3 - I * t,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquaredSumClass {
    Holomorphic,
    NonholoCase2,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct ClassifyReport {
    pub class: SquaredSumClass,
    /// Relative residual of sum phi_j^2 over the 12 sample points.
    pub identity_residual: f64,
    /// Distance of the coefficients from the matched solution family.
    pub family_residual: f64,
    pub q1_half_period: bool,
    pub q3_half_period: bool,
    /// Set when the identity holds numerically but no family matches.
    pub anomaly: bool,
}

/// 12 sample points inside the fundamental cell, clear of the punctures.
pub fn sample_points(tau: Complex64) -> Vec<Complex64> {
    (0..12)
        .map(|k| {
            let k = k as f64;
            c(0.11 + 0.063 * k, 0.0) + (0.071 + 0.029 * k) * tau
        })
        .collect()
}

/// Evaluates sum phi_j^2 at the sample points and decides which solution
/// family (if any) the coefficients lie in.
pub fn squared_sum_classify(ctx: &EllipticContext, data: &Genus1Data) -> Result<ClassifyReport> {
    data.validate()?;
    let forms = data.forms(ctx)?;
    let q1_half = half_period_index(data.q1, ctx.tau.value).is_some();
    let q3_half = half_period_index(data.q3, ctx.tau.value).is_some();
    let mut resid: f64 = 0.0;
    for z in sample_points(ctx.tau.value) {
        let (p, pp) = wp_with_derivative(z, ctx)?;
        let mut sum = c(0.0, 0.0);
        let mut scale: f64 = 1.0;
        for f in &forms {
            let v = f.eval_at(p, pp);
            sum += v * v;
            scale = scale.max(v.norm_sqr());
        }
        resid = resid.max(sum.norm() / scale);
    }
    let coeff_scale = [
        data.a0, data.b0, data.c0, data.d0, data.alpha, data.beta, data.gamma,
    ]
    .iter()
    .map(|v| v.norm())
    .fold(1.0f64, f64::max);
    // Holomorphic family: sigma2 = sigma3 = +1 with paired constants.
    let hol_resid = if data.sigma2 == 1 && data.sigma3 == 1 {
        (data.a0 + I * data.b0)
            .norm()
            .max((data.c0 - I * data.d0).norm())
            / coeff_scale
    } else {
        f64::INFINITY
    };
    // Nonholomorphic branch: both punctures at half-periods, sigma2 = -1,
    // sigma3 = +1, coefficients given by the closed formulas.
    let case2_resid = if q1_half && q3_half && data.sigma2 == -1 && data.sigma3 == 1 {
        let wp1 = eta_form(data.q1, ctx)?.wp_q;
        let wp3 = eta_form(data.q3, ctx)?.wp_q;
        let (a0, b0, c0, d0) = case2_coefficients(data.alpha, data.beta, data.gamma, wp1, wp3);
        (data.a0 - a0)
            .norm()
            .max((data.b0 - b0).norm())
            .max((data.c0 - c0).norm())
            .max((data.d0 - d0).norm())
            / coeff_scale
    } else {
        f64::INFINITY
    };
    let tol = 1e-8;
    let (class, family_residual, anomaly) = if resid > tol {
        (SquaredSumClass::Infeasible, hol_resid.min(case2_resid), false)
    } else if hol_resid <= tol {
        (SquaredSumClass::Holomorphic, hol_resid, false)
    } else if case2_resid <= tol {
        (SquaredSumClass::NonholoCase2, case2_resid, false)
    } else {
        // Identity holds but neither family matches: flagged, not silently
        // accepted.
        (SquaredSumClass::Infeasible, hol_resid.min(case2_resid), true)
    };
    Ok(ClassifyReport {
        class,
        identity_residual: resid,
        family_residual,
        q1_half_period: q1_half,
        q3_half_period: q3_half,
        anomaly,
    })
}

/// Closed-form path integrals over the two homology generators
/// C1(t) = t + v0 tau and C2(t) = u0 + t tau.
#[derive(Debug, Clone, Copy)]
pub struct PeriodIntegrals {
    /// Integrals of 1/(wp - wp1): over C1 and C2.
    pub h1: [Complex64; 2],
    /// Integrals of 1/(wp - wp3).
    pub h3: [Complex64; 2],
    /// Integrals of wp.
    pub wp: [Complex64; 2],
    /// Integrals of dz.
    pub dz: [Complex64; 2],
}

pub const PATH_OFFSET: f64 = 0.37;

fn reciprocal_integrals(
    ctx: &EllipticContext,
    wp_j: Complex64,
    others: (Complex64, Complex64),
) -> [Complex64; 2] {
    let tau = ctx.tau.value;
    let mu = ctx.mu;
    let den = (others.0 - wp_j) * (others.1 - wp_j);
    [
        (mu - wp_j) / den,
        (tau * (mu - wp_j) + 2.0 * std::f64::consts::PI * I) / den,
    ]
}

/// 4x3 period matrix for the non-holomorphic branch with punctures at the
/// half-periods q1, q3.
#[derive(Debug, Clone)]
pub struct PeriodMatrix {
    pub entries: [[Complex64; 3]; 4],
    pub wp1: Complex64,
    pub wp3: Complex64,
    pub wp4: Complex64,
    pub tau: Complex64,
    pub mu: Complex64,
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// Kernel direction in the order (conj beta, alpha, gamma); present only
    /// at rank 2.
    pub kernel: Option<[Complex64; 3]>,
    /// Max deviation of entries rebuilt from contour quadrature; None when
    /// the cross-check was skipped.
    pub quadrature_max_dev: Option<f64>,
}

fn assemble_entries(
    wp1: Complex64,
    wp3: Complex64,
    ints: &PeriodIntegrals,
) -> [[Complex64; 3]; 4] {
    let b = wp3 - wp1;
    let mut rows = [[c(0.0, 0.0); 3]; 4];
    for path in 0..2 {
        let (j1, j3, p, d) = (ints.h1[path], ints.h3[path], ints.wp[path], ints.dz[path]);
        rows[2 * path] = [(wp1 * d - p).conj(), -j1 + d / b, d / b];
        rows[2 * path + 1] = [(wp3 * d - p).conj(), -d / b, -j3 - d / b];
    }
    rows
}

fn resolve_half_period_pair(
    ctx: &EllipticContext,
    q1: Complex64,
    q3: Complex64,
) -> Result<(usize, usize, usize)> {
    let tau = ctx.tau.value;
    let i1 = half_period_index(q1, tau)
        .ok_or_else(|| WlabError::InvalidInput(format!("q1 = {q1} is not a half-period")))?;
    let i3 = half_period_index(q3, tau)
        .ok_or_else(|| WlabError::InvalidInput(format!("q3 = {q3} is not a half-period")))?;
    if i1 == i3 {
        return Err(WlabError::InvalidInput(
            "q1 and q3 must be distinct half-periods".into(),
        ));
    }
    let i4 = 3 - i1 - i3;
    Ok((i1, i3, i4))
}

/// Builds the period matrix from the closed-form integrals only.
pub fn period_matrix_closed(
    ctx: &EllipticContext,
    q1: Complex64,
    q3: Complex64,
) -> Result<PeriodMatrix> {
    period_matrix_impl(ctx, q1, q3, false)
}

/// Builds the period matrix and cross-checks every entry against direct
/// contour quadrature of the underlying integrals.
pub fn period_matrix(ctx: &EllipticContext, q1: Complex64, q3: Complex64) -> Result<PeriodMatrix> {
    period_matrix_impl(ctx, q1, q3, true)
}

fn period_matrix_impl(
    ctx: &EllipticContext,
    q1: Complex64,
    q3: Complex64,
    cross_check: bool,
) -> Result<PeriodMatrix> {
    let (i1, i3, i4) = resolve_half_period_pair(ctx, q1, q3)?;
    let es = [ctx.e1, ctx.e2, ctx.e3];
    let (wp1, wp3, wp4) = (es[i1], es[i3], es[i4]);
    let scale = wp1.norm().max(wp3.norm()).max(1.0);
    if (wp1 - wp3).norm() < 1e-8 * scale {
        return Err(WlabError::DegenerateLattice {
            disc_abs: (wp1 - wp3).norm(),
        });
    }
    let tau = ctx.tau.value;
    let mu = ctx.mu;
    let ints = PeriodIntegrals {
        h1: reciprocal_integrals(ctx, wp1, (wp3, wp4)),
        h3: reciprocal_integrals(ctx, wp3, (wp1, wp4)),
        wp: [mu, tau * mu + 2.0 * std::f64::consts::PI * I],
        dz: [c(1.0, 0.0), tau],
    };
    let entries = assemble_entries(wp1, wp3, &ints);
    let quadrature_max_dev = if cross_check {
        let qints = quadrature_integrals(ctx, wp1, wp3)?;
        let qentries = assemble_entries(wp1, wp3, &qints);
        let mut dev: f64 = 0.0;
        for r in 0..4 {
            for cidx in 0..3 {
                dev = dev.max((entries[r][cidx] - qentries[r][cidx]).norm());
            }
        }
        if dev > 1e-7 {
            return Err(WlabError::RouteMismatch {
                delta: dev,
                tol: 1e-7,
            });
        }
        Some(dev)
    } else {
        None
    };
    let rows: Vec<Vec<Complex64>> = entries.iter().map(|r| r.to_vec()).collect();
    let (rank, singular_values) = linalg::svd_rank(&rows, 1e-8);
    let kernel = if rank == 2 {
        let k = linalg::kernel_vector(&rows);
        Some([k[0], k[1], k[2]])
    } else {
        None
    };
    Ok(PeriodMatrix {
        entries,
        wp1,
        wp3,
        wp4,
        tau,
        mu,
        rank,
        singular_values,
        kernel,
        quadrature_max_dev,
    })
}

/// Direct Gauss-Kronrod quadrature of the four integrands over both paths.
pub fn quadrature_integrals(
    ctx: &EllipticContext,
    wp1: Complex64,
    wp3: Complex64,
) -> Result<PeriodIntegrals> {
    let tau = ctx.tau.value;
    let v0 = PATH_OFFSET;
    let paths = [
        (c(v0 * tau.re, v0 * tau.im), c(1.0 + v0 * tau.re, v0 * tau.im)),
        (c(v0, 0.0), c(v0, 0.0) + tau),
    ];
    let tol = 1e-10;
    let wp_at = |z: Complex64| wp(z, ctx).unwrap_or(c(f64::NAN, f64::NAN));
    let mut h1 = [c(0.0, 0.0); 2];
    let mut h3 = [c(0.0, 0.0); 2];
    let mut wp = [c(0.0, 0.0); 2];
    let mut dz = [c(0.0, 0.0); 2];
    for (k, (a, b)) in paths.iter().enumerate() {
        h1[k] = integrate_segment(&|z| 1.0 / (wp_at(z) - wp1), *a, *b, tol);
        h3[k] = integrate_segment(&|z| 1.0 / (wp_at(z) - wp3), *a, *b, tol);
        wp[k] = integrate_segment(&wp_at, *a, *b, tol);
        dz[k] = *b - *a;
    }
    Ok(PeriodIntegrals { h1, h3, wp, dz })
}

/// The two scalar conditions equivalent to rank 2, checked independently of
/// the singular-value computation.
#[derive(Debug, Clone, Copy)]
pub struct Rank2Report {
    pub abs_equal: bool,
    pub affine_identity: bool,
    pub rank2: bool,
    pub abs_residual: f64,
    pub affine_residual: f64,
    /// True when the numerical rank agrees with the two-condition test.
    pub consistent: bool,
    pub rank: usize,
}

pub fn rank2_conditions(ctx: &EllipticContext, q1: Complex64, q3: Complex64) -> Result<Rank2Report> {
    let m = period_matrix_closed(ctx, q1, q3)?;
    let (wp1, wp3, wp4) = (m.wp1, m.wp3, m.wp4);
    let mu = m.mu;
    let a = wp1 - mu;
    let b = wp3 - wp1;
    let cc = wp4 - wp1;
    let scale = wp1.norm().max(wp3.norm()).max(1.0);
    let abs_residual = (wp1.norm() - wp3.norm()).abs() / scale;
    let lhs = a + a.conj() + b.conj();
    let rhs = (ctx.tau.value.im / std::f64::consts::PI)
        * (a.norm_sqr() + a * b.conj() + cc * b.conj());
    let affine_residual = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0);
    let abs_equal = abs_residual <= 1e-8;
    let affine_identity = affine_residual <= 1e-8;
    let rank2 = m.rank == 2;
    Ok(Rank2Report {
        abs_equal,
        affine_identity,
        rank2,
        abs_residual,
        affine_residual,
        consistent: rank2 == (abs_equal && affine_identity),
        rank: m.rank,
    })
}

#[derive(Debug, Clone)]
pub struct KernelReport {
    pub kernel: [Complex64; 3],
    pub residual: f64,
    /// True when any component of (conj beta, alpha, gamma) vanishes, which
    /// the theory forbids at rank 2; reported as an anomaly, never hidden.
    pub anomaly: bool,
}

pub fn kernel_analysis(m: &PeriodMatrix) -> Result<KernelReport> {
    if m.rank != 2 {
        return Err(WlabError::Precondition(format!(
            "kernel analysis requires rank 2, got {}",
            m.rank
        )));
    }
    let rows: Vec<Vec<Complex64>> = m.entries.iter().map(|r| r.to_vec()).collect();
    let k = linalg::kernel_vector(&rows);
    let mut mk: f64 = 0.0;
    let mut mscale: f64 = 0.0;
    for r in &m.entries {
        let s = r[0] * k[0] + r[1] * k[1] + r[2] * k[2];
        mk = mk.max(s.norm());
        mscale = mscale.max(r.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let kmax = k.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let anomaly = k.iter().any(|v| v.norm() <= 1e-8 * kmax);
    Ok(KernelReport {
        kernel: [k[0], k[1], k[2]],
        residual: mk / mscale.max(1.0),
        anomaly,
    })
}

/// Scan request: the boundary family 1/2 + c i and a list of purely
/// imaginary tau values.
#[derive(Debug, Clone)]
pub struct ScanSpec {
    pub c_min: f64,
    pub c_max: f64,
    pub c_step: f64,
    pub imag_taus: Vec<f64>,
}

impl Default for ScanSpec {
    fn default() -> Self {
        let mut imag_taus = Vec::new();
        let mut t = 1.0;
        while t <= 4.0 + 1e-9 {
            imag_taus.push(t);
            t += 0.05;
        }
        ScanSpec {
            c_min: 3f64.sqrt() / 2.0,
            c_max: 8.0,
            c_step: 0.01,
            imag_taus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauFamily {
    Boundary,
    ImaginaryAxis,
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub family: TauFamily,
    pub tau: Complex64,
    pub e1: Complex64,
    pub mu: Complex64,
    /// c * Re(-mu + e1) - 2 pi on the boundary family.
    pub boundary_margin: Option<f64>,
    /// Re(e1) - pi on the imaginary axis.
    pub axis_margin: Option<f64>,
    /// |e2 - e3| from the cancellation-free q-series.
    pub e2e3_gap: f64,
    /// Ordered half-period pairs satisfying both rank-2 conditions.
    pub rank_pairs_satisfied: usize,
    pub rank_pairs_checked: usize,
    /// Pairs whose branch values coincide at working precision; the rank
    /// question is ill-posed there and the pair is excluded, not certified.
    pub rank_pairs_degenerate: usize,
    pub min_rank: usize,
    pub max_rank: usize,
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub rows: Vec<ScanRow>,
    pub min_boundary_margin: f64,
    pub min_axis_margin: f64,
    pub min_e2e3_gap: f64,
    pub total_rank_pairs_satisfied: usize,
    pub total_rank_pairs_degenerate: usize,
    pub min_rank_seen: usize,
}

fn scan_row(tau: Complex64, family: TauFamily) -> Result<ScanRow> {
    let ctx = elliptic_context(tau)?;
    let hp = half_periods(tau);
    let mut satisfied = 0;
    let mut checked = 0;
    let mut degenerate = 0;
    let mut min_rank = usize::MAX;
    let mut max_rank = 0;
    for a in 0..3 {
        for b in 0..3 {
            if a == b {
                continue;
            }
            // Pairs with coinciding branch values cannot host the rank-2
            // construction at all; they are counted separately, never as
            // satisfied. Other failures still abort the scan.
            match rank2_conditions(&ctx, hp[a], hp[b]) {
                Ok(r) => {
                    checked += 1;
                    if r.abs_equal && r.affine_identity {
                        satisfied += 1;
                    }
                    min_rank = min_rank.min(r.rank);
                    max_rank = max_rank.max(r.rank);
                }
                Err(WlabError::DegenerateLattice { .. }) => {
                    degenerate += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }
    if checked == 0 {
        return Err(WlabError::Inconclusive(format!(
            "all half-period pairs degenerate at tau = {tau}"
        )));
    }
    let gap = e2_minus_e3_q_series(&ctx).norm();
    let c_im = tau.im;
    let (boundary_margin, axis_margin) = match family {
        TauFamily::Boundary => (
            Some(c_im * (-ctx.mu + ctx.e1).re - 2.0 * std::f64::consts::PI),
            None,
        ),
        TauFamily::ImaginaryAxis => (None, Some(ctx.e1.re - std::f64::consts::PI)),
    };
    Ok(ScanRow {
        family,
        tau,
        e1: ctx.e1,
        mu: ctx.mu,
        boundary_margin,
        axis_margin,
        e2e3_gap: gap,
        rank_pairs_satisfied: satisfied,
        rank_pairs_checked: checked,
        rank_pairs_degenerate: degenerate,
        min_rank,
        max_rank,
    })
}

/// Evaluates the non-existence margins over the requested tau grid and
/// counts configurations satisfying both rank-2 conditions (expected zero).
pub fn verify_holomorphicity(spec: &ScanSpec) -> Result<ScanOutcome> {
    if spec.c_min < 3f64.sqrt() / 2.0 - 1e-12 {
        return Err(WlabError::InvalidInput(format!(
            "boundary scan requires c >= sqrt(3)/2, got {}",
            spec.c_min
        )));
    }
    if spec.c_step <= 0.0 {
        return Err(WlabError::InvalidInput("c_step must be positive".into()));
    }
    let mut taus: Vec<(Complex64, TauFamily)> = Vec::new();
    let n = ((spec.c_max - spec.c_min) / spec.c_step).floor() as usize;
    for k in 0..=n {
        let cv = spec.c_min + k as f64 * spec.c_step;
        taus.push((c(0.5, cv), TauFamily::Boundary));
    }
    for &cv in &spec.imag_taus {
        if cv < 1.0 - 1e-12 {
            return Err(WlabError::InvalidInput(
                "imaginary-axis scan requires c >= 1".into(),
            ));
        }
        taus.push((c(0.0, cv), TauFamily::ImaginaryAxis));
    }
    let rows: Vec<ScanRow> = taus
        .par_iter()
        .map(|(tau, fam)| scan_row(*tau, *fam))
        .collect::<Result<Vec<_>>>()?;
    let mut out = ScanOutcome {
        rows,
        min_boundary_margin: f64::INFINITY,
        min_axis_margin: f64::INFINITY,
        min_e2e3_gap: f64::INFINITY,
        total_rank_pairs_satisfied: 0,
        total_rank_pairs_degenerate: 0,
        min_rank_seen: usize::MAX,
    };
    for row in &out.rows {
        if let Some(mm) = row.boundary_margin {
            out.min_boundary_margin = out.min_boundary_margin.min(mm);
        }
        if let Some(mm) = row.axis_margin {
            out.min_axis_margin = out.min_axis_margin.min(mm);
        }
        out.min_e2e3_gap = out.min_e2e3_gap.min(row.e2e3_gap);
        out.total_rank_pairs_satisfied += row.rank_pairs_satisfied;
        out.total_rank_pairs_degenerate += row.rank_pairs_degenerate;
        out.min_rank_seen = out.min_rank_seen.min(row.min_rank);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    fn ctx_at(tau: Complex64) -> EllipticContext {
        elliptic_context(tau).unwrap()
    }

    #[test]
    fn eta_form_at_tau_half_is_reciprocal_with_e2() {
        let tau = c(0.3, 1.1);
        let ctx = ctx_at(tau);
        let f = eta_form(0.5 * tau, &ctx).unwrap();
        assert_eq!(f.kind, EtaKind::H);
        assert!((f.wp_q - ctx.e2).norm() < 1e-10);
    }

    #[test]
    fn eta_form_rejects_lattice_point() {
        let tau = c(0.2, 1.3);
        let ctx = ctx_at(tau);
        assert!(eta_form(c(0.0, 0.0), &ctx).is_err());
        assert!(eta_form(tau + c(1.0, 0.0), &ctx).is_err());
    }

    #[test]
    fn eta_residue_vanishes_and_pole_is_double() {
        let tau = c(0.13, 1.21);
        let ctx = ctx_at(tau);
        for q in [0.5 * tau, c(0.31, 0.0) + 0.17 * tau] {
            let f = eta_form(q, &ctx).unwrap();
            let density =
                |w: Complex64| f.eval(&ctx, q + w).unwrap_or(c(f64::NAN, f64::NAN));
            let (res, err) = quad::residue(&density, c(0.0, 0.0), 1e-3);
            assert!(res.norm() < 1e-8, "q={q} residue {res}");
            assert!(err < 1e-8);
            let ord = quad::estimate_order(&density, c(0.0, 0.0), 0.05).unwrap();
            assert_eq!(ord, -2, "q={q}");
        }
    }

    #[test]
    fn wp_periods_match_mu_and_legendre() {
        let tau = c(0.0, 1.0);
        let ctx = ctx_at(tau);
        let v0 = PATH_OFFSET;
        let wp_at = |z: Complex64| wp(z, &ctx).unwrap();
        let a = v0 * tau;
        let p1 = integrate_segment(&wp_at, a, a + c(1.0, 0.0), 1e-11);
        assert!((p1 - ctx.mu).norm() < 1e-9, "{p1} vs {}", ctx.mu);
        let b = c(v0, 0.0);
        let p2 = integrate_segment(&wp_at, b, b + tau, 1e-11);
        let expect = tau * ctx.mu + 2.0 * std::f64::consts::PI * I;
        assert!((p2 - expect).norm() < 1e-8, "{p2} vs {expect}");
    }

    fn holomorphic_data(tau: Complex64) -> Genus1Data {
        let b0 = c(0.3, 0.5);
        let d0 = c(-0.2, 0.8);
        Genus1Data {
            a0: -I * b0,
            b0,
            c0: I * d0,
            d0,
            alpha: c(0.7, 0.2),
            beta: c(1.1, -0.3),
            gamma: c(0.4, 0.9),
            sigma2: 1,
            sigma3: 1,
            q1: c(0.31, 0.0) + 0.17 * tau,
            q3: c(0.18, 0.0) + 0.44 * tau,
        }
    }

    #[test]
    fn classify_holomorphic_family() {
        let tau = c(0.23, 1.09);
        let ctx = ctx_at(tau);
        let data = holomorphic_data(tau);
        let rep = squared_sum_classify(&ctx, &data).unwrap();
        assert_eq!(rep.class, SquaredSumClass::Holomorphic);
        assert!(rep.identity_residual < 1e-12, "{}", rep.identity_residual);
        assert!(!rep.anomaly);
    }

    #[test]
    fn classify_infeasible_branch() {
        let tau = c(0.1, 1.27);
        let ctx = ctx_at(tau);
        let data = Genus1Data {
            a0: c(0.0, 0.0),
            b0: c(0.0, 0.0),
            c0: c(0.0, 0.0),
            d0: c(0.0, 0.0),
            alpha: c(0.8, 0.0),
            beta: c(1.3, 0.4),
            gamma: c(-0.6, 0.2),
            sigma2: 1,
            sigma3: -1,
            q1: c(0.5, 0.0),
            q3: 0.5 * tau,
        };
        let rep = squared_sum_classify(&ctx, &data).unwrap();
        assert_eq!(rep.class, SquaredSumClass::Infeasible);
        assert!(rep.identity_residual > 1e-4, "{}", rep.identity_residual);
    }

    fn case2_data(ctx: &EllipticContext) -> Genus1Data {
        let tau = ctx.tau.value;
        let (q1, q3) = (c(0.5, 0.0), 0.5 * tau);
        let (alpha, beta, gamma) = (c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0));
        let (a0, b0, c0, d0) = case2_coefficients(alpha, beta, gamma, ctx.e1, ctx.e2);
        Genus1Data {
            a0,
            b0,
            c0,
            d0,
            alpha,
            beta,
            gamma,
            sigma2: -1,
            sigma3: 1,
            q1,
            q3,
        }
    }

    #[test]
    fn classify_case2_family() {
        let tau = c(0.0, 1.0);
        let ctx = ctx_at(tau);
        let rep = squared_sum_classify(&ctx, &case2_data(&ctx)).unwrap();
        assert_eq!(rep.class, SquaredSumClass::NonholoCase2);
        assert!(rep.identity_residual < 1e-10, "{}", rep.identity_residual);
        assert!(rep.q1_half_period && rep.q3_half_period);
    }

    #[test]
    fn classify_homogeneous_under_scaling() {
        let tau = c(0.0, 1.0);
        let ctx = ctx_at(tau);
        for lambda in [c(2.0, 0.0), c(0.0, 1.0)] {
            for base in [holomorphic_data(tau), case2_data(&ctx)] {
                let scaled = Genus1Data {
                    a0: lambda * base.a0,
                    b0: lambda * base.b0,
                    c0: lambda * base.c0,
                    d0: lambda * base.d0,
                    alpha: lambda * base.alpha,
                    beta: lambda * base.beta,
                    gamma: lambda * base.gamma,
                    ..base.clone()
                };
                let r0 = squared_sum_classify(&ctx, &base).unwrap();
                let r1 = squared_sum_classify(&ctx, &scaled).unwrap();
                assert_eq!(r0.class, r1.class);
            }
        }
    }

    #[test]
    fn case2_gauss_images() {
        let ctx = ctx_at(c(0.0, 1.0));
        let data = case2_data(&ctx);
        let images = data.gauss_images();
        // Middle puncture: [1, -i, 1, i]; q3: [0, 0, 1, -i].
        let expect_mid = [c(1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0), c(0.0, 1.0)];
        let expect_q3 = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, -1.0)];
        for k in 0..4 {
            assert!((images[1][k] - expect_mid[k]).norm() < 1e-14);
            assert!((images[2][k] - expect_q3[k]).norm() < 1e-14);
        }
        // q1 image is the normalized [1, i, 0, 0].
        assert!((images[0][1] - I).norm() < 1e-14);
    }

    #[test]
    fn period_matrix_cross_checks_at_i() {
        let ctx = ctx_at(c(0.0, 1.0));
        let m = period_matrix(&ctx, c(0.5, 0.0), c(0.0, 0.5)).unwrap();
        assert!(m.quadrature_max_dev.unwrap() < 1e-7);
        assert!(m.rank >= 2);
        // Spot-check the closed-form reciprocal integral over C1.
        let expect = (ctx.mu - ctx.e1) / ((ctx.e3 - ctx.e1) * (ctx.e2 - ctx.e1));
        let got = reciprocal_integrals(&ctx, ctx.e1, (ctx.e2, ctx.e3))[0];
        assert!((got - expect).norm() < 1e-12);
    }

    #[test]
    fn period_matrix_rank_range_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let tau = c(rng.gen_range(-0.4..0.4), rng.gen_range(0.9..1.6));
            let ctx = ctx_at(tau);
            let hp = half_periods(tau);
            let picks = [(0, 1), (1, 2), (0, 2)];
            let (a, b) = picks[rng.gen_range(0..3)];
            let m = period_matrix_closed(&ctx, hp[a], hp[b]).unwrap();
            assert!(m.rank == 2 || m.rank == 3, "rank {}", m.rank);
        }
    }

    #[test]
    fn period_matrix_rejects_bad_punctures() {
        let ctx = ctx_at(c(0.0, 1.0));
        assert!(period_matrix_closed(&ctx, c(0.5, 0.0), c(0.5, 0.0)).is_err());
        assert!(period_matrix_closed(&ctx, c(0.31, 0.2), c(0.0, 0.5)).is_err());
    }

    #[test]
    fn rank2_conditions_at_i() {
        // wp values (e1, e2) = (e1, -e1): equal moduli but the affine
        // identity reduces to pi = e1, which fails by a wide margin.
        let ctx = ctx_at(c(0.0, 1.0));
        let r = rank2_conditions(&ctx, c(0.5, 0.0), c(0.0, 0.5)).unwrap();
        assert!(r.abs_equal);
        assert!(!r.affine_identity);
        assert!(!r.rank2);
        assert!(r.consistent);
        assert!(r.affine_residual > 0.1);
    }

    #[test]
    fn rank2_conditions_generic_tau() {
        let ctx = ctx_at(c(0.3, 1.4));
        let hp = half_periods(ctx.tau.value);
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            let r = rank2_conditions(&ctx, hp[a], hp[b]).unwrap();
            assert!(!r.abs_equal, "pair ({a},{b})");
            assert!(r.consistent);
        }
    }

    #[test]
    fn rank2_abs_equal_at_corner() {
        // At tau = 1/2 + (sqrt3/2) i the three branch values share one
        // modulus, so every pair passes the first condition.
        let ctx = ctx_at(c(0.5, 3f64.sqrt() / 2.0));
        let hp = half_periods(ctx.tau.value);
        let r = rank2_conditions(&ctx, hp[1], hp[2]).unwrap();
        assert!(r.abs_equal, "abs residual {}", r.abs_residual);
        assert!(!r.affine_identity);
        assert!(r.consistent);
    }

    #[test]
    fn kernel_analysis_synthetic_rank2() {
        let ctx = ctx_at(c(0.37, 1.21));
        let m0 = period_matrix_closed(&ctx, c(0.5, 0.0), 0.5 * ctx.tau.value).unwrap();
        let r1 = m0.entries[0];
        let r2 = m0.entries[1];
        let mix = |u: Complex64, v: Complex64| {
            let mut row = [c(0.0, 0.0); 3];
            for k in 0..3 {
                row[k] = u * r1[k] + v * r2[k];
            }
            row
        };
        let mut m = m0.clone();
        m.entries = [r1, r2, mix(c(0.3, -0.1), c(0.8, 0.2)), mix(c(0.0, 1.1), c(-0.4, 0.0))];
        let rows: Vec<Vec<Complex64>> = m.entries.iter().map(|r| r.to_vec()).collect();
        let (rank, sv) = linalg::svd_rank(&rows, 1e-8);
        m.rank = rank;
        m.singular_values = sv;
        assert_eq!(m.rank, 2);
        let rep = kernel_analysis(&m).unwrap();
        assert!(rep.residual < 1e-9, "{}", rep.residual);
        assert!(!rep.anomaly);
        // Projective invariance: scaling the kernel leaves the residual at 0.
        let k2: Vec<Complex64> = rep.kernel.iter().map(|v| 2.0 * v).collect();
        for r in &m.entries {
            let s = r[0] * k2[0] + r[1] * k2[1] + r[2] * k2[2];
            assert!(s.norm() < 1e-8);
        }
    }

    #[test]
    fn kernel_analysis_requires_rank2() {
        let ctx = ctx_at(c(0.37, 1.21));
        let m = period_matrix_closed(&ctx, c(0.5, 0.0), 0.5 * ctx.tau.value).unwrap();
        assert_eq!(m.rank, 3);
        assert!(kernel_analysis(&m).is_err());
    }

    #[test]
    fn scan_small_window() {
        let spec = ScanSpec {
            c_min: 3f64.sqrt() / 2.0,
            c_max: 1.0,
            c_step: 0.05,
            imag_taus: vec![1.0],
        };
        let out = verify_holomorphicity(&spec).unwrap();
        assert!(out.min_boundary_margin > 0.0, "{}", out.min_boundary_margin);
        assert!(out.min_e2e3_gap > 0.0);
        assert_eq!(out.total_rank_pairs_satisfied, 0);
        assert!(out.min_rank_seen >= 2);
        let axis_row = out
            .rows
            .iter()
            .find(|r| r.family == TauFamily::ImaginaryAxis)
            .unwrap();
        let margin = axis_row.axis_margin.unwrap();
        assert!((margin - 3.733593164430582).abs() < 1e-8, "{margin}");
        // First boundary row sits at the corner point with known mu.
        let corner = &out.rows[0];
        let expect_mu = -2.0 * 3f64.sqrt() * std::f64::consts::PI / 3.0;
        assert!((corner.mu - c(expect_mu, 0.0)).norm() < 1e-9, "{}", corner.mu);
    }

    #[test]
    fn scan_rejects_low_c() {
        let spec = ScanSpec {
            c_min: 0.5,
            c_max: 1.0,
            c_step: 0.1,
            imag_taus: vec![],
        };
        assert!(verify_holomorphicity(&spec).is_err());
    }
}

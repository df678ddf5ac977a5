//! Quadrature kernels: tanh-sinh on (0,1), adaptive Gauss-Kronrod on paths,
//! trapezoidal circle contours, and log-log order estimation.

use crate::{Result, WlabError};
use num_complex::Complex64;

/// Integrates f over (0,1) by tanh-sinh doubling.
///
/// The integrand receives (x, 1-x) with both endpoint distances computed
/// directly from the transformation, so algebraic endpoint singularities
/// integrate at full precision.
pub fn tanh_sinh_01<F: Fn(f64, f64) -> f64>(f: F) -> f64 {
    let mut prev = f64::NAN;
    let mut result = 0.0;
    for lev in 3..=12u32 {
        let h = 0.5f64.powi(lev as i32);
        let mut s = 0.0;
        for side in [1.0f64, -1.0] {
            let mut small = 0u32;
            let mut k = if side > 0.0 { 0 } else { 1 };
            loop {
                let t = side * h * k as f64;
                let u = std::f64::consts::FRAC_PI_2 * t.sinh();
                if u.abs() > 350.0 {
                    break;
                }
                let x = 1.0 / (1.0 + (-2.0 * u).exp());
                let xc = 1.0 / (1.0 + (2.0 * u).exp());
                if x <= 0.0 || xc <= 0.0 {
                    break;
                }
                let w = std::f64::consts::PI * t.cosh() * x * xc;
                let contrib = w * f(x, xc);
                if contrib.is_finite() {
                    s += contrib;
                }
                if contrib.abs() < 1e-18 * s.abs().max(1e-300) {
                    small += 1;
                    if small >= 3 {
                        break;
                    }
                } else {
                    small = 0;
                }
                k += 1;
            }
        }
        result = s * h;
        if (result - prev).abs() <= 1e-14 * result.abs().max(1e-300) {
            return result;
        }
        prev = result;
    }
    result
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_6,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let hl = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = hl * XGK[j];
        let fsum = f(mid - dx) + f(mid + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    ((kronrod * hl), ((kronrod - gauss) * hl).norm())
}

/// Adaptive Gauss-Kronrod integration of a complex-valued function on [a,b].
pub fn gk_adaptive<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    fn rec<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let (val, err) = gk15(f, a, b);
        if err <= tol || depth >= 28 {
            return val;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    rec(f, a, b, tol, 0)
}

/// Integrates the 1-form f(z) dz along the straight segment from z0 to z1.
pub fn integrate_segment<F: Fn(Complex64) -> Complex64>(
    f: &F,
    z0: Complex64,
    z1: Complex64,
    tol: f64,
) -> Complex64 {
    let dir = z1 - z0;
    gk_adaptive(&|t| f(z0 + dir * t) * dir, 0.0, 1.0, tol)
}

/// Integrates f(z) dz along a polyline through the given vertices.
pub fn integrate_polyline<F: Fn(Complex64) -> Complex64>(
    f: &F,
    pts: &[Complex64],
    tol: f64,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for w in pts.windows(2) {
        acc += integrate_segment(f, w[0], w[1], tol);
    }
    acc
}

/// Contour integral of f(z) dz around |z - center| = r by the periodic
/// trapezoidal rule with n nodes.
pub fn circle_integral<F: Fn(Complex64) -> Complex64>(
    f: &F,
    center: Complex64,
    r: f64,
    n: usize,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let e = Complex64::new(0.0, th).exp();
        acc += f(center + r * e) * Complex64::new(0.0, 1.0) * r * e;
    }
    acc * (2.0 * std::f64::consts::PI / n as f64)
}

/// Residue of f at `center` via a small circle, node count doubled once to
/// confirm convergence of the trapezoidal rule.
pub fn residue<F: Fn(Complex64) -> Complex64>(f: &F, center: Complex64, r: f64) -> (Complex64, f64) {
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let i1 = circle_integral(f, center, r, 256) / two_pi_i;
    let i2 = circle_integral(f, center, r, 512) / two_pi_i;
    (i2, (i2 - i1).norm())
}

/// Least-squares slope of ln|values| against ln(radii).
pub fn loglog_slope(radii: &[f64], magnitudes: &[f64]) -> f64 {
    let n = radii.len() as f64;
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = magnitudes.iter().map(|m| m.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - xbar) * (y - ybar);
        den += (x - xbar) * (x - xbar);
    }
    num / den
}

/// Estimates the integer leading order of f near `center` from the log-log
/// slope of |f| over 5 dyadic radii starting at r0.
///
/// Errors with `Inconclusive` when the slope is more than 0.1 from an integer.
pub fn estimate_order<F: Fn(Complex64) -> Complex64>(
    f: &F,
    center: Complex64,
    r0: f64,
) -> Result<i64> {
    let radii: Vec<f64> = (0..5).map(|k| r0 * 0.5f64.powi(k)).collect();
    // Averaging |f| over a few angles guards against hitting a zero ray.
    let mags: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let mut m = 0.0;
            for j in 0..4 {
                let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.37) / 4.0;
                m += f(center + r * Complex64::new(0.0, th).exp()).norm();
            }
            m / 4.0
        })
        .collect();
    let slope = loglog_slope(&radii, &mags);
    let nearest = slope.round();
    if (slope - nearest).abs() <= 0.1 {
        Ok(nearest as i64)
    } else {
        Err(WlabError::Inconclusive(format!(
            "order slope {slope:.4} not within 0.1 of an integer"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cplx::c;

    #[test]
    fn tanh_sinh_smooth() {
        let v = tanh_sinh_01(|x, _| x * x);
        assert!((v - 1.0 / 3.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // Beta(1/2, 1/2) = pi.
        let v = tanh_sinh_01(|x, xc| 1.0 / (x * xc).sqrt());
        assert!((v - std::f64::consts::PI).abs() < 1e-12, "{v}");
    }

    #[test]
    fn tanh_sinh_beta_sixth() {
        // Beta(1/6, 2/3) via x^(-5/6)(1-x)^(-1/3).
        let v = tanh_sinh_01(|x, xc| x.powf(-5.0 / 6.0) * xc.powf(-1.0 / 3.0));
        assert!((0.5 * v - 3.338_738_023_566_917_5).abs() < 1e-12, "{v}");
    }

    #[test]
    fn gk_complex_exponential() {
        let v = gk_adaptive(&|t| (Complex64::new(0.0, t)).exp(), 0.0, 1.0, 1e-12);
        let exact = c(1.0f64.sin(), 1.0 - 1.0f64.cos());
        assert!((v - exact).norm() < 1e-12);
    }

    #[test]
    fn segment_integral_of_z() {
        // Primitive z^2/2 between endpoints.
        let z0 = c(0.3, -0.2);
        let z1 = c(-1.0, 2.0);
        let v = integrate_segment(&|z| z, z0, z1, 1e-12);
        let exact = 0.5 * (z1 * z1 - z0 * z0);
        assert!((v - exact).norm() < 1e-11);
    }

    #[test]
    fn residue_simple_pole() {
        let f = |z: Complex64| c(2.0, 1.0) / (z - c(0.5, 0.5)) + z * z;
        let (res, err) = residue(&f, c(0.5, 0.5), 1e-3);
        assert!((res - c(2.0, 1.0)).norm() < 1e-10, "{res}");
        assert!(err < 1e-10);
    }

    #[test]
    fn order_estimation() {
        let f = |z: Complex64| 1.0 / (z * z) + 3.0 / z;
        assert_eq!(estimate_order(&f, c(0.0, 0.0), 1e-3).unwrap(), -2);
        let g = |z: Complex64| z * z * z * (1.0 + z);
        assert_eq!(estimate_order(&g, c(0.0, 0.0), 1e-3).unwrap(), 3);
    }

    #[test]
    fn order_inconclusive_on_sqrt() {
        let f = |z: Complex64| z.sqrt();
        assert!(estimate_order(&f, c(0.0, 0.0), 1e-3).is_err());
    }
}

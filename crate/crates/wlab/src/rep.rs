//! Weierstrass data quadruples: conformality, Gauss maps with the ruling
//! fallback, end analysis at punctures, and the integrated immersion.

use crate::quad::{estimate_order, integrate_polyline, integrate_segment, residue};
use crate::{Result, WlabError};
use num_complex::Complex64;
use std::sync::Arc;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Polynomial with ascending complex coefficients.
pub type Poly = Vec<Complex64>;

pub fn poly_eval(p: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = c(0.0, 0.0);
    for &ck in p.iter().rev() {
        acc = acc * z + ck;
    }
    acc
}

pub fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Poly {
    let mut out = vec![c(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub fn poly_add(a: &[Complex64], b: &[Complex64]) -> Poly {
    let mut out = vec![c(0.0, 0.0); a.len().max(b.len())];
    for (i, &ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, &bi) in b.iter().enumerate() {
        out[i] += bi;
    }
    out
}

/// Rational function num/den in one complex variable.
#[derive(Debug, Clone)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn constant(v: Complex64) -> Self {
        RatFn {
            num: vec![v],
            den: vec![c(1.0, 0.0)],
        }
    }
    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly_eval(&self.num, z) / poly_eval(&self.den, z)
    }
}

/// Coefficient function of a 1-form written as f(z) dz.
#[derive(Clone)]
pub enum FormExpr {
    Rational(RatFn),
    Callable(Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>),
}

impl std::fmt::Debug for FormExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormExpr::Rational(r) => write!(f, "Rational({r:?})"),
            FormExpr::Callable(_) => write!(f, "Callable(..)"),
        }
    }
}

impl FormExpr {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            FormExpr::Rational(r) => r.eval(z),
            FormExpr::Callable(f) => f(z),
        }
    }
}

/// Puncture location on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PuncturePoint {
    Finite(Complex64),
    Infinity,
}

/// Holomorphic data (phi_1..phi_4, punctures, base point, translation).
#[derive(Debug, Clone)]
pub struct WeierstrassQuadruple {
    pub phi: [FormExpr; 4],
    pub punctures: Vec<PuncturePoint>,
    pub base_point: Complex64,
    pub translation_b: [f64; 4],
}

impl WeierstrassQuadruple {
    pub fn eval_phi(&self, z: Complex64) -> [Complex64; 4] {
        [
            self.phi[0].eval(z),
            self.phi[1].eval(z),
            self.phi[2].eval(z),
            self.phi[3].eval(z),
        ]
    }
}

/// Data family with phi = (dz, -i dz, (a - 1/z^2) dz, -i(a - 1/z^2) dz) on
/// the twice-punctured sphere, based at z = 1.
pub fn dc_family_data(a: Complex64) -> WeierstrassQuadruple {
    let one = c(1.0, 0.0);
    let mi = c(0.0, -1.0);
    // (a z^2 - 1)/z^2 and its -i multiple.
    let phi3 = RatFn {
        num: vec![-one, c(0.0, 0.0), a],
        den: vec![c(0.0, 0.0), c(0.0, 0.0), one],
    };
    let phi4 = RatFn {
        num: phi3.num.iter().map(|&v| mi * v).collect(),
        den: phi3.den.clone(),
    };
    let b = [1.0, 0.0, a.re + 1.0, a.im];
    WeierstrassQuadruple {
        phi: [
            FormExpr::Rational(RatFn::constant(one)),
            FormExpr::Rational(RatFn::constant(mi)),
            FormExpr::Rational(phi3),
            FormExpr::Rational(phi4),
        ],
        punctures: vec![PuncturePoint::Finite(c(0.0, 0.0)), PuncturePoint::Infinity],
        base_point: one,
        translation_b: b,
    }
}

/// Exact immersion of the dc family: (Re z, Im z, Re(az + 1/z), Im(az + 1/z)).
pub fn dc_closed_immersion(a: Complex64, z: Complex64) -> Result<[f64; 4]> {
    if z.norm() < 1e-9 {
        return Err(WlabError::InvalidInput(
            "dc immersion evaluated at the puncture z = 0".into(),
        ));
    }
    let h = a * z + 1.0 / z;
    Ok([z.re, z.im, h.re, h.im])
}

/// Symbolic residual of sum phi_j^2 for all-rational quadruples: the maximum
/// numerator coefficient magnitude after clearing denominators. None when any
/// component is not rational.
pub fn conformality_symbolic(q: &WeierstrassQuadruple) -> Option<f64> {
    let mut rats = Vec::new();
    for f in &q.phi {
        match f {
            FormExpr::Rational(r) => rats.push(r),
            FormExpr::Callable(_) => return None,
        }
    }
    // Common denominator: product of all four squared denominators.
    let mut total: Poly = vec![c(0.0, 0.0)];
    for j in 0..4 {
        let mut term = poly_mul(&rats[j].num, &rats[j].num);
        for k in 0..4 {
            if k != j {
                let dk2 = poly_mul(&rats[k].den, &rats[k].den);
                term = poly_mul(&term, &dk2);
            }
        }
        total = poly_add(&total, &term);
    }
    let scale: f64 = rats
        .iter()
        .flat_map(|r| r.num.iter().chain(r.den.iter()))
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    Some(total.iter().map(|z| z.norm()).fold(0.0, f64::max) / scale.powi(8))
}

/// Pointwise residual of sum phi_j^2 at z.
pub fn conformality_at(q: &WeierstrassQuadruple, z: Complex64) -> f64 {
    let p = q.eval_phi(z);
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]).norm()
}

/// Value in the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjValue {
    Finite(Complex64),
    Infinity,
}

impl ProjValue {
    /// Projective value [num : den], with the fully degenerate case mapped to 0.
    fn from_pair(num: Complex64, den: Complex64, eps: f64) -> Option<ProjValue> {
        if den.norm() > eps {
            Some(ProjValue::Finite(num / den))
        } else if num.norm() > eps {
            Some(ProjValue::Infinity)
        } else {
            None
        }
    }
}

/// The pair of ruling directions attached to a surface point.
#[derive(Debug, Clone, Copy)]
pub struct GaussMapPair {
    pub g1: ProjValue,
    pub g2: ProjValue,
    pub ruling_fallback_used: bool,
}

/// Gauss map at z. Uses the direct quotients when phi1 - i phi2 is nonzero
/// there; otherwise falls back to the ruling through the lifted point, which
/// replaces each quotient by its alternative coordinate pair on the quadric.
pub fn gauss_map(q: &WeierstrassQuadruple, z: Complex64) -> Result<GaussMapPair> {
    let p = q.eval_phi(z);
    let scale = p.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale < 1e-13 {
        return Err(WlabError::DegeneratePoint { z });
    }
    let eps = 1e-9 * scale;
    let i = c(0.0, 1.0);
    let den = p[0] - i * p[1];
    let num1 = p[2] + i * p[3];
    let num2 = -p[2] + i * p[3];
    if den.norm() > eps {
        return Ok(GaussMapPair {
            g1: ProjValue::Finite(num1 / den),
            g2: ProjValue::Finite(num2 / den),
            ruling_fallback_used: false,
        });
    }
    let plus = p[0] + i * p[1];
    let zero = ProjValue::Finite(c(0.0, 0.0));
    // Both numerators vanishing means phi3 = phi4 = 0 at the point; both maps
    // are taken to be 0 there. Otherwise rewrite each quotient through the
    // quadric identities (z3+iz4)/(z1-iz2) = -(z1+iz2)/(z3-iz4) and
    // (-z3+iz4)/(z1-iz2) = (z1+iz2)/(z3+iz4).
    let (g1, g2) = if num1.norm() <= eps && num2.norm() <= eps {
        (zero, zero)
    } else {
        let g1 = ProjValue::from_pair(num1, den, eps)
            .or_else(|| ProjValue::from_pair(-plus, p[2] - i * p[3], eps))
            .unwrap_or(zero);
        let g2 = ProjValue::from_pair(num2, den, eps)
            .or_else(|| ProjValue::from_pair(plus, num1, eps))
            .unwrap_or(zero);
        (g1, g2)
    };
    Ok(GaussMapPair {
        g1,
        g2,
        ruling_fallback_used: true,
    })
}

/// Order estimate outcome for one form at one puncture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderEst {
    Order(i64),
    IdenticallyZero,
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndVerdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Per-puncture analysis of pole orders and residues.
#[derive(Debug, Clone)]
pub struct EndReport {
    pub puncture: PuncturePoint,
    pub orders: [OrderEst; 4],
    pub min_order: Option<i64>,
    pub residues: [Complex64; 4],
    pub residue_quad_err: f64,
    pub verdict: EndVerdict,
}

/// Coefficient function of the form in a local chart centered at the puncture.
fn chart_fn<'a>(
    form: &'a FormExpr,
    puncture: PuncturePoint,
) -> Box<dyn Fn(Complex64) -> Complex64 + 'a> {
    match puncture {
        PuncturePoint::Finite(p) => Box::new(move |w| form.eval(p + w)),
        // z = 1/w pulls f(z) dz back to -f(1/w)/w^2 dw.
        PuncturePoint::Infinity => Box::new(move |w| -form.eval(1.0 / w) / (w * w)),
    }
}

/// Order and residue of a single form at a puncture.
pub fn form_end_analysis(
    form: &FormExpr,
    puncture: PuncturePoint,
) -> (OrderEst, Complex64, f64) {
    let f = chart_fn(form, puncture);
    let probe: f64 = (0..5)
        .map(|k| {
            let r = 0.1 * 0.5f64.powi(k);
            f(c(r * 0.6, r * 0.8)).norm()
        })
        .fold(0.0, f64::max);
    if probe < 1e-13 {
        return (OrderEst::IdenticallyZero, c(0.0, 0.0), 0.0);
    }
    let ord = match estimate_order(&|w| f(w), c(0.0, 0.0), 0.1) {
        Ok(n) => OrderEst::Order(n),
        Err(_) => OrderEst::Ambiguous,
    };
    let (res, err) = residue(&|w| f(w), c(0.0, 0.0), 1e-3);
    (ord, res, err)
}

/// Checks the embedded-planar-end condition at one listed puncture:
/// minimum order equals -2 and every residue vanishes.
pub fn planar_end_check(
    q: &WeierstrassQuadruple,
    puncture: PuncturePoint,
) -> Result<EndReport> {
    let listed = q.punctures.iter().any(|p| match (*p, puncture) {
        (PuncturePoint::Infinity, PuncturePoint::Infinity) => true,
        (PuncturePoint::Finite(a), PuncturePoint::Finite(b)) => (a - b).norm() < 1e-12,
        _ => false,
    });
    if !listed {
        return Err(WlabError::InvalidInput(format!(
            "puncture {puncture:?} is not listed in the quadruple"
        )));
    }
    let mut orders = [OrderEst::Ambiguous; 4];
    let mut residues = [c(0.0, 0.0); 4];
    let mut qerr: f64 = 0.0;
    for j in 0..4 {
        let (o, r, e) = form_end_analysis(&q.phi[j], puncture);
        orders[j] = o;
        residues[j] = r;
        qerr = qerr.max(e);
    }
    let ambiguous = orders.iter().any(|o| *o == OrderEst::Ambiguous);
    let min_order = orders
        .iter()
        .filter_map(|o| match o {
            OrderEst::Order(n) => Some(*n),
            _ => None,
        })
        .min();
    let res_tol = 1e-8;
    let verdict = if ambiguous {
        EndVerdict::Inconclusive
    } else if min_order == Some(-2) && residues.iter().all(|r| r.norm() <= res_tol) {
        EndVerdict::Pass
    } else {
        EndVerdict::Fail
    };
    Ok(EndReport {
        puncture,
        orders,
        min_order,
        residues,
        residue_quad_err: qerr,
        verdict,
    })
}

fn segment_clearance(z0: Complex64, z1: Complex64, p: Complex64) -> f64 {
    let d = z1 - z0;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - z0).norm();
    }
    let t = ((p - z0).re * d.re + (p - z0).im * d.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (z0 + t * d)).norm()
}

/// Integrated immersion X = Re int phi + b at each target, with straight-line
/// paths from the base point. Paths that enter the pole-exclusion zone of a
/// finite puncture are rejected.
pub fn immerse(q: &WeierstrassQuadruple, targets: &[Complex64]) -> Result<Vec<[f64; 4]>> {
    let clearance = 1e-3;
    let mut out = Vec::with_capacity(targets.len());
    for &t in targets {
        for p in &q.punctures {
            if let PuncturePoint::Finite(pz) = p {
                let d = segment_clearance(q.base_point, t, *pz);
                if d < clearance {
                    return Err(WlabError::InvalidInput(format!(
                        "integration path from {} to {t} passes within {d:.2e} of puncture {pz}",
                        q.base_point
                    )));
                }
            }
        }
        let mut x = q.translation_b;
        for j in 0..4 {
            let v = integrate_segment(&|z| q.phi[j].eval(z), q.base_point, t, 1e-11);
            x[j] += v.re;
        }
        out.push(x);
    }
    Ok(out)
}

/// Real displacement around a closed polyline; zero when no period obstructs.
pub fn immerse_loop_residual(q: &WeierstrassQuadruple, loop_pts: &[Complex64]) -> [f64; 4] {
    let mut pts = loop_pts.to_vec();
    if pts.first() != pts.last() {
        pts.push(pts[0]);
    }
    let mut out = [0.0; 4];
    for j in 0..4 {
        let v = integrate_polyline(&|z| q.phi[j].eval(z), &pts, 1e-11);
        out[j] = v.re;
    }
    out
}

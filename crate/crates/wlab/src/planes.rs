//! Asymptotic 2-planes in R^4, the sup-of-inner-products plane distance,
//! and the block-orthogonal matrices admissible as ambient symmetries.

use crate::{Result, WlabError};
use num_complex::Complex64;

/// 2-plane through the origin with a stored (not necessarily orthonormal) basis.
#[derive(Debug, Clone)]
pub struct PlaneInR4 {
    pub basis: [[f64; 4]; 2],
    pub label: String,
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64; 4]) -> f64 {
    dot(a, a).sqrt()
}

impl PlaneInR4 {
    pub fn new(basis: [[f64; 4]; 2], label: impl Into<String>) -> Result<Self> {
        let p = PlaneInR4 {
            basis,
            label: label.into(),
        };
        p.orthonormal()?;
        Ok(p)
    }

    /// Gram-Schmidt frame; errors when the basis is dependent.
    pub fn orthonormal(&self) -> Result<[[f64; 4]; 2]> {
        let n1 = norm(&self.basis[0]);
        if n1 < 1e-12 {
            return Err(WlabError::InvalidInput("zero basis vector".into()));
        }
        let mut u1 = self.basis[0];
        u1.iter_mut().for_each(|x| *x /= n1);
        let proj = dot(&self.basis[1], &u1);
        let mut u2 = self.basis[1];
        for k in 0..4 {
            u2[k] -= proj * u1[k];
        }
        let n2 = norm(&u2);
        if n2 < 1e-12 {
            return Err(WlabError::InvalidInput(
                "basis vectors are linearly dependent".into(),
            ));
        }
        u2.iter_mut().for_each(|x| *x /= n2);
        Ok([u1, u2])
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.basis[0], self.basis[1]])
    }
}

/// First asymptotic plane: span{(1,0,|a|cos t,|a|sin t),(0,1,-|a|sin t,|a|cos t)}
/// with t the argument of a.
pub fn q1_plane(a: Complex64) -> PlaneInR4 {
    let m = a.norm();
    let t = if m == 0.0 { 0.0 } else { a.arg() };
    PlaneInR4 {
        basis: [
            [1.0, 0.0, m * t.cos(), m * t.sin()],
            [0.0, 1.0, -m * t.sin(), m * t.cos()],
        ],
        label: "Q1(a)".into(),
    }
}

/// Leaf plane at radius r of the foliation: the Q1 vectors shifted by
/// +1/r^2 and -1/r^2 in the third and fourth slots.
pub fn foliation_plane(a: Complex64, r: f64) -> Result<PlaneInR4> {
    if r <= 0.0 {
        return Err(WlabError::InvalidInput("radius must be positive".into()));
    }
    let m = a.norm();
    let t = if m == 0.0 { 0.0 } else { a.arg() };
    let s = 1.0 / (r * r);
    Ok(PlaneInR4 {
        basis: [
            [1.0, 0.0, m * t.cos() + s, m * t.sin()],
            [0.0, 1.0, -m * t.sin(), m * t.cos() - s],
        ],
        label: "Q2(a,r0)".into(),
    })
}

/// Third asymptotic plane: the coordinate plane span{e3, e4}.
pub fn q3_plane() -> PlaneInR4 {
    PlaneInR4 {
        basis: [[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]],
        label: "Q3".into(),
    }
}

/// Point of the model curve (r e^{it}, a r e^{it} + e^{-it}/r) as an R^4 vector.
pub fn foliation_curve_point(a: Complex64, r: f64, theta: f64) -> [f64; 4] {
    let e = Complex64::new(0.0, theta).exp();
    let z1 = r * e;
    let z2 = a * r * e + e.conj() / r;
    [z1.re, z1.im, z2.re, z2.im]
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Supremum of <v, w> over unit vectors of the two planes: 512x512 grid
/// followed by two alternating golden-section refinements.
pub fn theta_sup_numeric(v: &PlaneInR4, w: &PlaneInR4) -> Result<f64> {
    let uv = v.orthonormal()?;
    let uw = w.orthonormal()?;
    let unit = |basis: &[[f64; 4]; 2], t: f64| -> [f64; 4] {
        let (c, s) = (t.cos(), t.sin());
        let mut out = [0.0; 4];
        for k in 0..4 {
            out[k] = c * basis[0][k] + s * basis[1][k];
        }
        out
    };
    let f = |alpha: f64, beta: f64| dot(&unit(&uv, alpha), &unit(&uw, beta)).abs();
    let n = 512;
    let step = std::f64::consts::PI / n as f64; // |dot| has period pi in each variable
    let mut best = (0.0f64, 0.0f64, -1.0f64);
    let wcache: Vec<[f64; 4]> = (0..n).map(|j| unit(&uw, step * j as f64)).collect();
    for i in 0..n {
        let vi = unit(&uv, step * i as f64);
        for (j, wj) in wcache.iter().enumerate() {
            let val = dot(&vi, wj).abs();
            if val > best.2 {
                best = (step * i as f64, step * j as f64, val);
            }
        }
    }
    let (mut alpha, mut beta, _) = best;
    let mut val = f(alpha, beta);
    // Golden-section refinement sweeps. Axis-only descent stalls when the
    // ridge of f runs along the diagonal (nearly coincident planes), so each
    // sweep also searches the two diagonal directions.
    for sweep in 0..16 {
        alpha = golden_max(&|x| f(x, beta), alpha - 2.0 * step, alpha + 2.0 * step, 48);
        beta = golden_max(&|x| f(alpha, x), beta - 2.0 * step, beta + 2.0 * step, 48);
        let d = golden_max(&|t| f(alpha + t, beta + t), -2.0 * step, 2.0 * step, 48);
        alpha += d;
        beta += d;
        let d = golden_max(&|t| f(alpha + t, beta - t), -2.0 * step, 2.0 * step, 48);
        alpha += d;
        beta -= d;
        let next = f(alpha, beta);
        let gain = next - val;
        val = next;
        if sweep >= 1 && gain.abs() < 1e-14 {
            break;
        }
    }
    Ok(val)
}

/// Closed forms for the three pairwise plane distances as functions of
/// (|a|, r0). Order: (Theta_{12}, Theta_{23}, Theta_{13}).
pub fn theta_closed_forms(a: Complex64, r0: f64) -> Result<(f64, f64, f64)> {
    if r0 <= 0.0 {
        return Err(WlabError::InvalidInput("r0 must be positive".into()));
    }
    let m = a.norm();
    let root = ((1.0 + r0 * r0 * m).powi(2) + r0.powi(4)).sqrt();
    let th12 = (r0 * r0 * (1.0 + m * m) + m) / ((1.0 + m * m).sqrt() * root);
    let th23 = (1.0 + r0 * r0 * m) / root;
    let th13 = m / (1.0 + m * m).sqrt();
    Ok((th12, th23, th13))
}

/// Result of the swap-condition test at (a, r0).
#[derive(Debug, Clone, Copy)]
pub struct SwapCheck {
    pub holds: bool,
    pub theta12: f64,
    pub theta23: f64,
    /// |r0^2 - 1/sqrt(1+|a|^2)|, the algebraic form of the same condition.
    pub algebraic_residual: f64,
    pub consistent: bool,
}

/// True iff the first two plane distances coincide, equivalently iff
/// r0^2 = 1/sqrt(1+|a|^2).
pub fn swap_condition(a: Complex64, r0: f64) -> Result<SwapCheck> {
    let (th12, th23, _) = theta_closed_forms(a, r0)?;
    let m = a.norm();
    let algebraic_residual = (r0 * r0 - 1.0 / (1.0 + m * m).sqrt()).abs();
    let holds = (th12 - th23).abs() < 1e-9;
    let alg_holds = algebraic_residual < 1e-9;
    Ok(SwapCheck {
        holds,
        theta12: th12,
        theta23: th23,
        algebraic_residual,
        consistent: holds == alg_holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    S,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Diagonal,
    Swap,
}

/// 4x4 orthogonal matrix assembled from 2x2 rotation (S) or reflection (T)
/// blocks: diag(K_l, K_{-l}) or the off-diagonal form [[0, K_{-l}],[K_l, 0]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockOrthogonal {
    pub kind: BlockKind,
    pub angle: f64,
    pub placement: Placement,
}

pub fn s_mat(l: f64) -> [[f64; 2]; 2] {
    [[l.cos(), -l.sin()], [l.sin(), l.cos()]]
}

pub fn t_mat(l: f64) -> [[f64; 2]; 2] {
    [[l.cos(), -l.sin()], [-l.sin(), -l.cos()]]
}

fn block(kind: BlockKind, l: f64) -> [[f64; 2]; 2] {
    match kind {
        BlockKind::S => s_mat(l),
        BlockKind::T => t_mat(l),
    }
}

fn wrap_angle(x: f64) -> f64 {
    let mut y = x % (2.0 * std::f64::consts::PI);
    if y > std::f64::consts::PI {
        y -= 2.0 * std::f64::consts::PI;
    }
    if y <= -std::f64::consts::PI {
        y += 2.0 * std::f64::consts::PI;
    }
    y
}

impl BlockOrthogonal {
    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        let (pos, neg) = (block(self.kind, self.angle), block(self.kind, -self.angle));
        match self.placement {
            Placement::Diagonal => {
                for i in 0..2 {
                    for j in 0..2 {
                        out[i][j] = pos[i][j];
                        out[i + 2][j + 2] = neg[i][j];
                    }
                }
            }
            Placement::Swap => {
                for i in 0..2 {
                    for j in 0..2 {
                        out[i][j + 2] = neg[i][j];
                        out[i + 2][j] = pos[i][j];
                    }
                }
            }
        }
        out
    }
}

/// Composes two block matrices through the S/T angle relations and verifies
/// the result against direct matrix multiplication.
pub fn block_algebra(x: &BlockOrthogonal, y: &BlockOrthogonal) -> Result<BlockOrthogonal> {
    use BlockKind::*;
    // The lower-left (or first diagonal) 2x2 factor of the product determines
    // the composite angle; the complementary block follows by the same rules.
    let pair = |k1: BlockKind, l1: f64, k2: BlockKind, l2: f64| -> (BlockKind, f64) {
        match (k1, k2) {
            (S, S) => (S, l1 + l2),
            (S, T) => (T, l2 - l1),
            (T, S) => (T, l1 + l2),
            (T, T) => (S, l2 - l1),
        }
    };
    let (placement, kind, angle) = match (x.placement, y.placement) {
        (Placement::Diagonal, Placement::Diagonal) => {
            let (k, l) = pair(x.kind, x.angle, y.kind, y.angle);
            (Placement::Diagonal, k, l)
        }
        (Placement::Diagonal, Placement::Swap) => {
            // [[P,0],[0,N]] * [[0,N'],[P',0]] = [[0, P N'],[N P', 0]].
            let (k, l) = pair(x.kind, -x.angle, y.kind, y.angle);
            (Placement::Swap, k, l)
        }
        (Placement::Swap, Placement::Diagonal) => {
            // [[0,N],[P,0]] * [[P',0],[0,N']] = [[0, N N'],[P P', 0]].
            let (k, l) = pair(x.kind, x.angle, y.kind, y.angle);
            (Placement::Swap, k, l)
        }
        (Placement::Swap, Placement::Swap) => {
            // [[0,N],[P,0]] * [[0,N'],[P',0]] = [[N P', 0],[0, P N']].
            let (k, l) = pair(x.kind, -x.angle, y.kind, y.angle);
            (Placement::Diagonal, k, l)
        }
    };
    let result = BlockOrthogonal {
        kind,
        angle: wrap_angle(angle),
        placement,
    };
    let direct = mat4_mul(&x.to_matrix(), &y.to_matrix());
    let resid = mat4_dist(&direct, &result.to_matrix());
    if resid > 1e-12 {
        return Err(WlabError::RouteMismatch {
            delta: resid,
            tol: 1e-12,
        });
    }
    Ok(result)
}

pub fn mat4_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn mat4_dist(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

/// Outcome of matching a 4x4 orthogonal matrix against the admissible forms.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetryClass {
    /// diag(K_l, K_{-l}): fixes both asymptotic planes.
    DiagonalBlocks { kind: BlockKind, angle: f64 },
    /// Off-diagonal form: exchanges the first and third planes.
    SwapBlocks { kind: BlockKind, angle: f64 },
    Rejected { reason: String },
}

fn classify_2x2(b: &[[f64; 2]; 2]) -> Option<(BlockKind, f64)> {
    let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    if (det - 1.0).abs() < 1e-9 {
        let l = b[1][0].atan2(b[0][0]);
        if mat2_dist(b, &s_mat(l)) < 1e-9 {
            return Some((BlockKind::S, l));
        }
    } else if (det + 1.0).abs() < 1e-9 {
        let l = (-b[0][1]).atan2(b[0][0]);
        if mat2_dist(b, &t_mat(l)) < 1e-9 {
            return Some((BlockKind::T, l));
        }
    }
    None
}

fn mat2_dist(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

fn sub2(a: &[[f64; 4]; 4], r: usize, c: usize) -> [[f64; 2]; 2] {
    [[a[r][c], a[r][c + 1]], [a[r + 1][c], a[r + 1][c + 1]]]
}

fn block_norm(b: &[[f64; 2]; 2]) -> f64 {
    b.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Matches A against the admissible block forms for the parameter a.
///
/// With a = 0 every angle is admissible; with a != 0 the diagonal forms must
/// be +-identity or the reflection pair at angle arg(a) (up to sign).
pub fn classify_symmetry(a_mat: &[[f64; 4]; 4], a: Complex64) -> Result<SymmetryClass> {
    // Orthogonality precondition.
    let mut ata = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                ata[i][j] += a_mat[k][i] * a_mat[k][j];
            }
        }
    }
    let mut eye = [[0.0; 4]; 4];
    for (i, row) in eye.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    if mat4_dist(&ata, &eye) > 1e-10 {
        return Err(WlabError::Precondition(format!(
            "matrix is not orthogonal: |A^T A - I| = {:.3e}",
            mat4_dist(&ata, &eye)
        )));
    }
    let tl = sub2(a_mat, 0, 0);
    let tr = sub2(a_mat, 0, 2);
    let bl = sub2(a_mat, 2, 0);
    let br = sub2(a_mat, 2, 2);
    let tol = 1e-9;
    let (diagonal, swap) = (
        block_norm(&tr) < tol && block_norm(&bl) < tol,
        block_norm(&tl) < tol && block_norm(&br) < tol,
    );
    if diagonal {
        let Some((k1, l1)) = classify_2x2(&tl) else {
            return Ok(SymmetryClass::Rejected {
                reason: "top block is not an S or T form".into(),
            });
        };
        let Some((k2, l2)) = classify_2x2(&br) else {
            return Ok(SymmetryClass::Rejected {
                reason: "bottom block is not an S or T form".into(),
            });
        };
        if k1 != k2 || (wrap_angle(l1 + l2)).abs() > tol {
            return Ok(SymmetryClass::Rejected {
                reason: "blocks are not an opposite-angle pair of equal kind".into(),
            });
        }
        if a.norm() > 0.0 {
            let ta = a.arg();
            let ok = match k1 {
                BlockKind::S => wrap_angle(l1).abs() < tol || (wrap_angle(l1).abs() - std::f64::consts::PI).abs() < tol,
                BlockKind::T => {
                    let d = wrap_angle(l1 - ta);
                    d.abs() < tol || (d.abs() - std::f64::consts::PI).abs() < tol
                }
            };
            if !ok {
                return Ok(SymmetryClass::Rejected {
                    reason: "angle not admissible for nonzero a".into(),
                });
            }
        }
        return Ok(SymmetryClass::DiagonalBlocks { kind: k1, angle: l1 });
    }
    if swap {
        let Some((k1, l1)) = classify_2x2(&bl) else {
            return Ok(SymmetryClass::Rejected {
                reason: "lower-left block is not an S or T form".into(),
            });
        };
        let Some((k2, l2)) = classify_2x2(&tr) else {
            return Ok(SymmetryClass::Rejected {
                reason: "upper-right block is not an S or T form".into(),
            });
        };
        if k1 != k2 || (wrap_angle(l1 + l2)).abs() > tol {
            return Ok(SymmetryClass::Rejected {
                reason: "swap blocks are not an opposite-angle pair of equal kind".into(),
            });
        }
        return Ok(SymmetryClass::SwapBlocks { kind: k1, angle: l1 });
    }
    Ok(SymmetryClass::Rejected {
        reason: "matrix is not block-diagonal or block-swap".into(),
    })
}

/// Haar-ish random rotation from QR of a Gaussian matrix, determinant +1.
pub fn random_orthogonal_4<R: rand::Rng>(rng: &mut R) -> [[f64; 4]; 4] {
    use nalgebra::Matrix4;
    let gauss = |rng: &mut R| {
        let u1: f64 = rng.gen_range(1e-12..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    };
    let m = Matrix4::from_fn(|_, _| gauss(rng));
    let qr = m.qr();
    let mut q = qr.q();
    if q.determinant() < 0.0 {
        for i in 0..4 {
            q[(i, 3)] = -q[(i, 3)];
        }
    }
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = q[(i, j)];
        }
    }
    out
}

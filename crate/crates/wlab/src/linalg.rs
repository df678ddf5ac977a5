//! Complex SVD helpers for rank and kernel extraction.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Singular values of a dense complex matrix, descending.
pub fn singular_values(rows: &[Vec<Complex64>]) -> Vec<f64> {
    let nr = rows.len();
    let nc = rows[0].len();
    let m = DMatrix::from_fn(nr, nc, |i, j| rows[i][j]);
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Numerical rank: count of singular values above rel_tol * sigma_max.
pub fn svd_rank(rows: &[Vec<Complex64>], rel_tol: f64) -> (usize, Vec<f64>) {
    let sv = singular_values(rows);
    let smax = sv[0].max(f64::MIN_POSITIVE);
    let rank = sv.iter().filter(|s| **s > rel_tol * smax).count();
    (rank, sv)
}

/// Right null vector for the smallest singular value, scaled so the entry of
/// largest modulus equals 1.
pub fn kernel_vector(rows: &[Vec<Complex64>]) -> Vec<Complex64> {
    let nr = rows.len();
    let nc = rows[0].len();
    let m = DMatrix::from_fn(nr, nc, |i, j| rows[i][j]);
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("svd with v_t requested");
    // Rows of V^H correspond to singular values in the order nalgebra returns.
    let mut idx = 0;
    let mut smin = f64::INFINITY;
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s < smin {
            smin = *s;
            idx = k;
        }
    }
    let mut v: Vec<Complex64> = (0..nc).map(|j| vt[(idx, j)].conj()).collect();
    let (kmax, vmax) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .map(|(k, z)| (k, *z))
        .unwrap();
    let _ = kmax;
    for z in &mut v {
        *z /= vmax;
    }
    v
}

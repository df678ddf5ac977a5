//! Deterministic triangle meshing of sampled surfaces in R^4 and text
//! exporters that keep the fourth coordinate.

use crate::{Result, WlabError};
use num_complex::Complex64;
use std::io::Write;

/// Parameter grid. Polar grids wrap in the angular direction; rectangular
/// grids are open in both directions.
#[derive(Debug, Clone, Copy)]
pub enum GridSpec {
    Polar {
        r_min: f64,
        r_max: f64,
        n_theta: usize,
        n_r: usize,
    },
    Rect {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
    },
}

/// R^4 -> R^3 projection used at export time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    /// Remove coordinate k (0-based); the removed value is kept as an attribute.
    DropCoordinate(usize),
    /// (x1,x2,x3)/(1 - x4), undefined when x4 is 1.
    Stereographic,
}

#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub vertices: Vec<[f64; 4]>,
    pub faces: Vec<[u32; 3]>,
    pub projection: Projection,
}

/// Samples the grid with `sampler` and triangulates, splitting each quad
/// along the (i,j) -> (i+1,j+1) diagonal. Vertex order is row-major in the
/// first grid index; everything is deterministic.
pub fn mesh_surface<F: Fn(Complex64) -> Result<[f64; 4]>>(
    sampler: F,
    grid: &GridSpec,
    projection: Projection,
) -> Result<SurfaceMesh> {
    let (points, n0, n1, wrap0) = grid_points(grid)?;
    let mut vertices = Vec::with_capacity(points.len());
    for z in &points {
        let v = sampler(*z)?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(WlabError::InvalidInput(format!(
                "sampler produced a non-finite vertex at {z}"
            )));
        }
        vertices.push(v);
    }
    let mut faces = Vec::new();
    let quads0 = if wrap0 { n0 } else { n0 - 1 };
    for i in 0..quads0 {
        let i1 = (i + 1) % n0;
        for j in 0..n1 - 1 {
            let a = (i * n1 + j) as u32;
            let b = (i1 * n1 + j) as u32;
            let c = (i1 * n1 + j + 1) as u32;
            let d = (i * n1 + j + 1) as u32;
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    Ok(SurfaceMesh {
        vertices,
        faces,
        projection,
    })
}

fn grid_points(grid: &GridSpec) -> Result<(Vec<Complex64>, usize, usize, bool)> {
    match *grid {
        GridSpec::Polar {
            r_min,
            r_max,
            n_theta,
            n_r,
        } => {
            if n_theta < 2 || n_r < 2 {
                return Err(WlabError::InvalidInput(
                    "grid resolution must be at least 2x2".into(),
                ));
            }
            if r_min <= 0.0 || r_max <= r_min {
                return Err(WlabError::InvalidInput(
                    "polar grid needs 0 < r_min < r_max".into(),
                ));
            }
            let mut pts = Vec::with_capacity(n_theta * n_r);
            for i in 0..n_theta {
                let th = 2.0 * std::f64::consts::PI * i as f64 / n_theta as f64;
                for j in 0..n_r {
                    let r = r_min + (r_max - r_min) * j as f64 / (n_r - 1) as f64;
                    pts.push(r * Complex64::new(0.0, th).exp());
                }
            }
            Ok((pts, n_theta, n_r, true))
        }
        GridSpec::Rect {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        } => {
            if nx < 2 || ny < 2 {
                return Err(WlabError::InvalidInput(
                    "grid resolution must be at least 2x2".into(),
                ));
            }
            let mut pts = Vec::with_capacity(nx * ny);
            for i in 0..nx {
                let x = x_min + (x_max - x_min) * i as f64 / (nx - 1) as f64;
                for j in 0..ny {
                    let y = y_min + (y_max - y_min) * j as f64 / (ny - 1) as f64;
                    pts.push(Complex64::new(x, y));
                }
            }
            Ok((pts, nx, ny, false))
        }
    }
}

fn project(v: &[f64; 4], projection: Projection) -> Result<([f64; 3], f64)> {
    match projection {
        Projection::DropCoordinate(k) => {
            if k > 3 {
                return Err(WlabError::InvalidInput(format!(
                    "projection coordinate {k} out of range"
                )));
            }
            let mut out = [0.0; 3];
            let mut idx = 0;
            for (i, &x) in v.iter().enumerate() {
                if i != k {
                    out[idx] = x;
                    idx += 1;
                }
            }
            Ok((out, v[k]))
        }
        Projection::Stereographic => {
            let d = 1.0 - v[3];
            if d.abs() < 1e-9 {
                return Err(WlabError::InvalidInput(
                    "stereographic projection undefined at x4 = 1".into(),
                ));
            }
            Ok(([v[0] / d, v[1] / d, v[2] / d], v[3]))
        }
    }
}

/// Writes Wavefront OBJ: "v x y z" from the projection and "vt u 0" carrying
/// the removed fourth coordinate.
pub fn write_obj(mesh: &SurfaceMesh, out: &mut dyn Write) -> Result<()> {
    for v in &mesh.vertices {
        let (p, extra) = project(v, mesh.projection)?;
        writeln!(out, "v {} {} {}", p[0], p[1], p[2])?;
        writeln!(out, "vt {} 0", extra)?;
    }
    for f in &mesh.faces {
        writeln!(
            out,
            "f {}/{} {}/{} {}/{}",
            f[0] + 1,
            f[0] + 1,
            f[1] + 1,
            f[1] + 1,
            f[2] + 1,
            f[2] + 1
        )?;
    }
    Ok(())
}

/// Writes ascii PLY with a custom float property "x4" on each vertex.
pub fn write_ply(mesh: &SurfaceMesh, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "ply")?;
    writeln!(out, "format ascii 1.0")?;
    writeln!(out, "element vertex {}", mesh.vertices.len())?;
    writeln!(out, "property float x")?;
    writeln!(out, "property float y")?;
    writeln!(out, "property float z")?;
    writeln!(out, "property float x4")?;
    writeln!(out, "element face {}", mesh.faces.len())?;
    writeln!(out, "property list uchar int vertex_indices")?;
    writeln!(out, "end_header")?;
    for v in &mesh.vertices {
        let (p, extra) = project(v, mesh.projection)?;
        writeln!(out, "{} {} {} {}", p[0], p[1], p[2], extra)?;
    }
    for f in &mesh.faces {
        writeln!(out, "3 {} {} {}", f[0], f[1], f[2])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::dc_closed_immersion;
    use num_complex::Complex64;

    fn catenoid_sampler(z: Complex64) -> Result<[f64; 4]> {
        dc_closed_immersion(Complex64::new(0.0, 0.0), z)
    }

    #[test]
    fn polar_grid_counts() {
        let grid = GridSpec::Polar {
            r_min: 0.5,
            r_max: 2.0,
            n_theta: 16,
            n_r: 32,
        };
        let m = mesh_surface(catenoid_sampler, &grid, Projection::DropCoordinate(3)).unwrap();
        assert_eq!(m.vertices.len(), 512);
        assert_eq!(m.faces.len(), 992);
        let n = m.vertices.len() as u32;
        assert!(m.faces.iter().all(|f| f.iter().all(|&i| i < n)));
        assert!(m
            .vertices
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite())));
    }

    #[test]
    fn rect_grid_minimal() {
        let grid = GridSpec::Rect {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
            nx: 2,
            ny: 2,
        };
        let m = mesh_surface(
            |z| Ok([z.re, z.im, 0.0, 0.0]),
            &grid,
            Projection::DropCoordinate(3),
        )
        .unwrap();
        assert_eq!(m.vertices.len(), 4);
        assert_eq!(m.faces.len(), 2);
    }

    #[test]
    fn too_small_grid_rejected() {
        let grid = GridSpec::Rect {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
            nx: 1,
            ny: 5,
        };
        assert!(mesh_surface(
            |z| Ok([z.re, z.im, 0.0, 0.0]),
            &grid,
            Projection::DropCoordinate(3)
        )
        .is_err());
    }

    #[test]
    fn grid_touching_puncture_rejected() {
        // Rect grid crossing z = 0, where the catenoid sampler errors.
        let grid = GridSpec::Rect {
            x_min: -1.0,
            x_max: 1.0,
            y_min: -1.0,
            y_max: 1.0,
            nx: 3,
            ny: 3,
        };
        assert!(mesh_surface(catenoid_sampler, &grid, Projection::DropCoordinate(3)).is_err());
    }

    #[test]
    fn deterministic_output() {
        let grid = GridSpec::Polar {
            r_min: 0.5,
            r_max: 2.0,
            n_theta: 8,
            n_r: 8,
        };
        let mut bufs = Vec::new();
        for _ in 0..2 {
            let m = mesh_surface(catenoid_sampler, &grid, Projection::DropCoordinate(3)).unwrap();
            let mut b = Vec::new();
            write_obj(&m, &mut b).unwrap();
            let mut p = Vec::new();
            write_ply(&m, &mut p).unwrap();
            bufs.push((b, p));
        }
        assert_eq!(bufs[0], bufs[1]);
    }

    #[test]
    fn obj_and_ply_shape() {
        let grid = GridSpec::Rect {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
            nx: 2,
            ny: 2,
        };
        let m = mesh_surface(
            |z| Ok([z.re, z.im, 7.0, 9.0]),
            &grid,
            Projection::DropCoordinate(3),
        )
        .unwrap();
        let mut b = Vec::new();
        write_obj(&m, &mut b).unwrap();
        let text = String::from_utf8(b).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert!(text.contains("vt 9 0"));
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2);

        let mut p = Vec::new();
        write_ply(&m, &mut p).unwrap();
        let text = String::from_utf8(p).unwrap();
        assert!(text.contains("property float x4"));
        assert!(text.contains("element vertex 4"));
        assert!(text.contains("element face 2"));
    }

    #[test]
    fn stereographic_projection() {
        let v = [2.0, 4.0, 6.0, 0.5];
        let (p, extra) = project(&v, Projection::Stereographic).unwrap();
        assert_eq!(p, [4.0, 8.0, 12.0]);
        assert_eq!(extra, 0.5);
        assert!(project(&[0.0, 0.0, 0.0, 1.0], Projection::Stereographic).is_err());
    }
}

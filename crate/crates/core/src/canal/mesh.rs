use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::CanalPath;
use crate::error::{GeomError, Result};
use crate::lorentz::inner;
use crate::spheremodel::{project_null, CircleFrame};

/// Triangle mesh in ℝ³.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

pub const MIN_TRIANGLE_AREA: f64 = 1e-12;

pub fn triangle_area(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let n = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    0.5 * (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
}

impl TriMesh {
    /// `V − E + F` with edges counted once per unordered pair.
    pub fn euler_characteristic(&self) -> i64 {
        let mut edges = std::collections::HashSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        self.vertices.len() as i64 - edges.len() as i64 + self.triangles.len() as i64
    }

    /// Every edge is shared by exactly two triangles.
    pub fn is_closed(&self) -> bool {
        let mut count = std::collections::HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_insert(0usize) += 1;
            }
        }
        count.values().all(|&c| c == 2)
    }

    pub fn indices_valid(&self) -> bool {
        self.triangles
            .iter()
            .all(|t| t.iter().all(|&i| i < self.vertices.len()))
    }

    pub fn min_triangle_area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                triangle_area(
                    &self.vertices[t[0]],
                    &self.vertices[t[1]],
                    &self.vertices[t[2]],
                )
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// ASCII Wavefront OBJ with one-based `v`/`f` records.
    pub fn to_obj(&self) -> String {
        let mut s = String::with_capacity(48 * (self.vertices.len() + self.triangles.len()));
        for v in &self.vertices {
            let _ = writeln!(s, "v {:.12} {:.12} {:.12}", v[0], v[1], v[2]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        s
    }
}

/// Polyline OBJ (`v`/`l` records), used when a sweep has no area.
pub fn polyline_obj(points: &[[f64; 3]], closed: bool) -> String {
    let mut s = String::new();
    for p in points {
        let _ = writeln!(s, "v {:.12} {:.12} {:.12}", p[0], p[1], p[2]);
    }
    let mut idx: Vec<String> = (1..=points.len()).map(|i| i.to_string()).collect();
    if closed && !points.is_empty() {
        idx.push("1".into());
    }
    let _ = writeln!(s, "l {}", idx.join(" "));
    s
}

/// Continuous family of circle frames over a closed parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSweep {
    pub params: Vec<f64>,
    pub frames: Vec<CircleFrame>,
    /// Orientation of the circles reverses once around the loop.
    pub closure_flip: bool,
    /// Rotation removed to close the sweep, spread evenly along it.
    pub holonomy: f64,
}

impl CircleSweep {
    /// Transports frames of `frame_at(t)` along `params` and spreads the closing rotation.
    ///
    /// `frame_at(period)` must describe the same circle as `frame_at(0)`.
    pub fn transport<F: Fn(f64) -> Result<CircleFrame>>(
        params: Vec<f64>,
        period: f64,
        frame_at: F,
    ) -> Result<Self> {
        let n = params.len();
        let mut frames: Vec<CircleFrame> = Vec::with_capacity(n);
        let align = |prev: &CircleFrame, next: CircleFrame| {
            let a = inner(&prev.f1, &next.f2).atan2(inner(&prev.f1, &next.f1));
            let mut f = next.rotated(a);
            if inner(&prev.f2, &f.f2) < 0.0 {
                f.f2 = -f.f2;
            }
            f
        };
        for (i, &t) in params.iter().enumerate() {
            let f = frame_at(t)?;
            frames.push(if i == 0 { f } else { align(&frames[i - 1], f) });
        }
        let end = align(&frames[n - 1], frame_at(period)?);
        let closure_flip = inner(&end.f2, &frames[0].f2) < 0.0;
        let holonomy = inner(&end.f1, &frames[0].f2).atan2(inner(&end.f1, &frames[0].f1));
        for (i, f) in frames.iter_mut().enumerate() {
            *f = f.rotated(-holonomy * i as f64 / n as f64);
        }
        Ok(Self {
            params,
            frames,
            closure_flip,
            holonomy,
        })
    }

    /// Frames given pointwise, used as they are.
    pub fn from_frames(params: Vec<f64>, frames: Vec<CircleFrame>) -> Self {
        Self {
            params,
            frames,
            closure_flip: false,
            holonomy: 0.0,
        }
    }

    /// Stereographic image of circle `i` at `n` equally spaced angles.
    pub fn circle_polyline(&self, i: usize, n: usize) -> Vec<[f64; 3]> {
        (0..n)
            .filter_map(|j| project_null(&self.frames[i].point(TAU * j as f64 / n as f64)).point())
            .collect()
    }

    /// Triangulates the sweep with wraparound in both directions.
    pub fn mesh(&self, n_theta: usize) -> MeshReport {
        let nt = self.frames.len();
        let mut mesh = TriMesh::default();
        let mut index = vec![None; nt * n_theta];
        let mut culled = 0;
        for (i, f) in self.frames.iter().enumerate() {
            for j in 0..n_theta {
                match project_null(&f.point(TAU * j as f64 / n_theta as f64)).point() {
                    Some(p) if p.iter().all(|x| x.is_finite()) => {
                        index[i * n_theta + j] = Some(mesh.vertices.len());
                        mesh.vertices.push(p);
                    }
                    _ => culled += 1,
                }
            }
        }
        let mut dropped = 0;
        let mut candidates = 0;
        for i in 0..nt {
            let i1 = (i + 1) % nt;
            for j in 0..n_theta {
                let j1 = (j + 1) % n_theta;
                let quad = [
                    index[i * n_theta + j],
                    index[i1 * n_theta + j],
                    index[i1 * n_theta + j1],
                    index[i * n_theta + j1],
                ];
                for tri in [[quad[0], quad[1], quad[2]], [quad[0], quad[2], quad[3]]] {
                    candidates += 1;
                    let Some(t) = tri.iter().copied().collect::<Option<Vec<usize>>>() else {
                        continue;
                    };
                    let (a, b, c) = (
                        &mesh.vertices[t[0]],
                        &mesh.vertices[t[1]],
                        &mesh.vertices[t[2]],
                    );
                    if triangle_area(a, b, c) < MIN_TRIANGLE_AREA {
                        dropped += 1;
                    } else {
                        mesh.triangles.push([t[0], t[1], t[2]]);
                    }
                }
            }
        }
        let degenerate = mesh.triangles.is_empty() || 2 * dropped > candidates;
        MeshReport {
            mesh,
            culled_vertices: culled,
            dropped_triangles: dropped,
            degenerate,
            closure_flip: self.closure_flip,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshReport {
    pub mesh: TriMesh,
    /// Grid points sent to infinity by the projection.
    pub culled_vertices: usize,
    /// Triangles below [`MIN_TRIANGLE_AREA`].
    pub dropped_triangles: usize,
    /// Most triangles collapsed: the circles do not sweep a surface.
    pub degenerate: bool,
    pub closure_flip: bool,
}

/// Characteristic circles at `nt` parameters, transported continuously.
pub fn characteristic_sweep(path: &CanalPath, nt: usize) -> Result<CircleSweep> {
    if nt < 3 {
        return Err(GeomError::TooFewSamples { min: 3, got: nt });
    }
    let period = path.period();
    let params = (0..nt).map(|i| period * i as f64 / nt as f64).collect();
    CircleSweep::transport(params, period, |t| path.characteristic_circle(t)?.frame())
}

/// Envelope of the sphere family: `nt × nθ` characteristic-circle points, projected and triangulated.
pub fn envelope_mesh(path: &CanalPath, nt: usize, n_theta: usize) -> Result<MeshReport> {
    if n_theta < 3 {
        return Err(GeomError::TooFewSamples {
            min: 3,
            got: n_theta,
        });
    }
    Ok(characteristic_sweep(path, nt)?.mesh(n_theta))
}

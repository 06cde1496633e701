//! Conformal P1 triangulations of hyperbolic surfaces.
//!
//! Every vertex lives in one chart. Charts are either Fermi strips around a
//! geodesic (coordinates `(s, tau)`, metric `sec^2(tau) (ds^2 + dtau^2)`) or
//! scaled Poincare disks. Copies of the same surface point in different charts
//! are identified through glued edge pairs; a union-find over those pairs gives
//! the global degrees of freedom.

mod build;
mod check;
mod io;
mod models;
mod refine;

pub use build::mesh_surface;
pub use check::{validate_mesh, MeshReport};
pub use io::{export_mesh, import_mesh};
pub use models::{cylinder_mesh, half_collar_mesh};
pub use refine::refine;

use crate::hypgeom::hyperboloid::{mobius_center, mobius_uncenter, Frame, Lorentz};
use crate::hypgeom::{gudermannian, inverse_gudermannian};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshOptions {
    /// Target hyperbolic edge length of the coarsest mesh.
    pub h: f64,
    /// Smallest interior angle requested from the thick-piece triangulator.
    pub min_angle_deg: f64,
}

impl MeshOptions {
    pub fn with_h(h: f64) -> MeshOptions {
        MeshOptions { h, ..Default::default() }
    }
}

impl Default for MeshOptions {
    fn default() -> Self {
        MeshOptions {
            h: 0.15,
            min_angle_deg: 25.0,
        }
    }
}

/// A Poincare disk chart of radius `scale` for one hexagon of a pants.
///
/// Points are carried in the hyperboloid coordinates of the pants' reference
/// hexagon. The chart centres them by a disk automorphism, optionally mirrors
/// them (the second hexagon), then rotates and scales.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskChart {
    pub scale: f64,
    pub rotation: Complex64,
    pub center: Complex64,
    pub mirrored: bool,
    /// Cuff frames of the reference hexagon, used to bisect hypercycle edges.
    pub frames: Vec<Frame>,
}

impl DiskChart {
    pub fn to_chart(&self, x: Lorentz) -> [f64; 2] {
        let mut z = x.to_disk();
        if self.mirrored {
            z = z.conj();
        }
        let w = mobius_center(self.center, z) * self.rotation * self.scale;
        [w.re, w.im]
    }

    pub fn from_chart(&self, p: [f64; 2]) -> Lorentz {
        let w = Complex64::new(p[0], p[1]) / (self.rotation * self.scale);
        let mut z = mobius_uncenter(self.center, w);
        if self.mirrored {
            z = z.conj();
        }
        Lorentz::from_disk(z)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Chart {
    /// Fermi strip around a closed geodesic: `x = s` in `[0, core_length]`,
    /// `y = tau = gd(t)`.
    Fermi { core_length: f64 },
    Disk(DiskChart),
}

impl Chart {
    /// Conformal factor: hyperbolic length element over chart length element.
    pub fn conformal_factor(&self, p: [f64; 2]) -> f64 {
        match self {
            Chart::Fermi { .. } => 1.0 / p[1].cos(),
            Chart::Disk(d) => {
                let r2 = p[0] * p[0] + p[1] * p[1];
                2.0 * d.scale / (d.scale * d.scale - r2)
            }
        }
    }

    /// Midpoint of a straight chart edge, moved onto the curve it models.
    pub(crate) fn edge_midpoint(&self, a: [f64; 2], b: [f64; 2], curve: Option<EdgeCurve>) -> [f64; 2] {
        match self {
            Chart::Fermi { .. } => {
                let t = 0.5 * (inverse_gudermannian(a[1]) + inverse_gudermannian(b[1]));
                [0.5 * (a[0] + b[0]), gudermannian(t)]
            }
            Chart::Disk(d) => match curve {
                None => [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])],
                Some(EdgeCurve::Geodesic) => d.to_chart(d.from_chart(a).midpoint(d.from_chart(b))),
                Some(EdgeCurve::Hypercycle(f)) => {
                    let frame = d.frames[f as usize];
                    let (ua, ta) = frame.fermi_coords(d.from_chart(a));
                    let (ub, tb) = frame.fermi_coords(d.from_chart(b));
                    d.to_chart(frame.fermi_point(0.5 * (ua + ub), 0.5 * (ta + tb)))
                }
            },
        }
    }
}

/// Shape of a chart edge lying on a curved interface inside a disk chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeCurve {
    Geodesic,
    /// Equidistant curve of the cuff with the given frame index.
    Hypercycle(u8),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub chart: u32,
    pub pos: [f64; 2],
}

/// Which part of the surface a triangle belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Inside the standard collar of interior curve `curve`.
    Collar(u32),
    /// Inside the standard half collar of boundary `boundary`.
    HalfCollar(u32),
    /// Outside every collar, in hexagon `hexagon` (0 or 1) of pants `pants`.
    Thick { pants: u32, hexagon: u8 },
    /// A standalone collar model.
    Model,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub v: [u32; 2],
    pub label: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurvedEdge {
    pub v: [u32; 2],
    pub curve: EdgeCurve,
}

/// What a Fermi strip wraps around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StripCore {
    Curve(u32),
    Boundary(u32),
    Model,
}

/// A structured Fermi strip: chart index, core and conformal extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strip {
    pub chart: u32,
    pub core: StripCore,
    pub tau_min: f64,
    pub tau_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub id: String,
    pub charts: Vec<Chart>,
    pub vertices: Vec<Vertex>,
    pub triangles: Vec<[u32; 3]>,
    pub regions: Vec<Region>,
    pub boundary_labels: Vec<String>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Pairs of chart edges that are the same surface edge, endpoints matched.
    pub glued_edges: Vec<[[u32; 2]; 2]>,
    pub curved_edges: Vec<CurvedEdge>,
    pub strips: Vec<Strip>,
    /// Euler characteristic of the surface the mesh represents.
    pub euler_characteristic: i64,
    /// Target edge length of the coarsest level.
    pub h: f64,
    pub level: u32,
}

/// Global degrees of freedom: classes of glued vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    pub of_vertex: Vec<u32>,
    pub count: usize,
}

impl SurfaceMesh {
    /// Nominal edge length at the current refinement level.
    pub fn mesh_size(&self) -> f64 {
        self.h / f64::from(1u32 << self.level)
    }

    pub fn vertex_chart(&self, v: u32) -> &Chart {
        &self.charts[self.vertices[v as usize].chart as usize]
    }

    pub fn triangle_chart(&self, t: usize) -> &Chart {
        self.vertex_chart(self.triangles[t][0])
    }

    pub fn pos(&self, v: u32) -> [f64; 2] {
        self.vertices[v as usize].pos
    }

    /// Union-find over glued vertices; DOFs numbered by first vertex.
    pub fn dof_map(&self) -> DofMap {
        let n = self.vertices.len();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for [a, b] in &self.glued_edges {
            for i in 0..2 {
                let ra = find(&mut parent, a[i]);
                let rb = find(&mut parent, b[i]);
                if ra != rb {
                    parent[ra.max(rb) as usize] = ra.min(rb);
                }
            }
        }
        let mut number = vec![u32::MAX; n];
        let mut of_vertex = vec![0u32; n];
        let mut count = 0u32;
        for v in 0..n as u32 {
            let r = find(&mut parent, v) as usize;
            if number[r] == u32::MAX {
                number[r] = count;
                count += 1;
            }
            of_vertex[v as usize] = number[r];
        }
        DofMap {
            of_vertex,
            count: count as usize,
        }
    }

    /// Hyperbolic area of triangle `t`.
    pub fn triangle_area(&self, t: usize) -> f64 {
        let chart = self.triangle_chart(t);
        let [a, b, c] = self.triangles[t].map(|v| self.pos(v));
        triangle_integral(a, b, c, |p| chart.conformal_factor(p).powi(2))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Hyperbolic length of the straight chart edge `a -> b`.
    pub fn edge_length(&self, a: u32, b: u32) -> f64 {
        let chart = self.vertex_chart(a);
        let (pa, pb) = (self.pos(a), self.pos(b));
        segment_integral(pa, pb, |p| chart.conformal_factor(p))
    }

    pub fn boundary_length(&self, label: u32) -> f64 {
        self.boundary_edges
            .iter()
            .filter(|e| e.label == label)
            .map(|e| self.edge_length(e.v[0], e.v[1]))
            .sum()
    }

    pub fn boundary_index(&self, label: &str) -> Option<u32> {
        self.boundary_labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    /// Replace every chart by a similar one: disks are rescaled by `scale` and
    /// rotated by `angle`, Fermi strips are turned by half a revolution. The
    /// triangulation and all hyperbolic quantities are unchanged.
    pub fn rechart_similar(&self, scale: f64, angle: f64) -> SurfaceMesh {
        let mut m = self.clone();
        let rot = Complex64::from_polar(1.0, angle);
        for v in &mut m.vertices {
            match &self.charts[v.chart as usize] {
                Chart::Fermi { core_length } => v.pos = [core_length - v.pos[0], -v.pos[1]],
                Chart::Disk(_) => {
                    let w = Complex64::new(v.pos[0], v.pos[1]) * rot * scale;
                    v.pos = [w.re, w.im];
                }
            }
        }
        for c in &mut m.charts {
            if let Chart::Disk(d) = c {
                d.scale *= scale;
                d.rotation *= rot;
            }
        }
        for s in &mut m.strips {
            let (lo, hi) = (-s.tau_max, -s.tau_min);
            s.tau_min = lo;
            s.tau_max = hi;
        }
        m
    }
}

/// Degree-5 seven-point rule on a triangle.
pub fn triangle_integral(a: [f64; 2], b: [f64; 2], c: [f64; 2], f: impl Fn([f64; 2]) -> f64) -> f64 {
    const W0: f64 = 0.225;
    const A1: f64 = 0.059_715_871_789_769_82;
    const B1: f64 = 0.470_142_064_105_115_1;
    const W1: f64 = 0.132_394_152_788_506_18;
    const A2: f64 = 0.797_426_985_353_087_3;
    const B2: f64 = 0.101_286_507_323_456_34;
    const W2: f64 = 0.125_939_180_544_827_15;
    let area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs();
    let at = |l0: f64, l1: f64, l2: f64| [l0 * a[0] + l1 * b[0] + l2 * c[0], l0 * a[1] + l1 * b[1] + l2 * c[1]];
    let third = 1.0 / 3.0;
    let mut s = W0 * f(at(third, third, third));
    for (x, y, w) in [(A1, B1, W1), (A2, B2, W2)] {
        s += w * (f(at(x, y, y)) + f(at(y, x, y)) + f(at(y, y, x)));
    }
    s * area
}

/// Two-point Gauss rule along a straight chart segment.
pub fn segment_integral(a: [f64; 2], b: [f64; 2], f: impl Fn([f64; 2]) -> f64) -> f64 {
    let g = 0.5 / 3f64.sqrt();
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    let at = |x: f64| [a[0] + x * (b[0] - a[0]), a[1] + x * (b[1] - a[1])];
    0.5 * len * (f(at(0.5 - g)) + f(at(0.5 + g)))
}

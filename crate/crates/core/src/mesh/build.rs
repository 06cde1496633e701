//! Pants-glued surfaces: one Fermi strip per cuff geodesic plus two disk
//! charts per pants for what lies outside the strips.

use super::{
    BoundaryEdge, Chart, CurvedEdge, DiskChart, EdgeCurve, MeshOptions, Region, Strip, StripCore,
    SurfaceMesh, Vertex,
};
use crate::error::{domain, Error, Result};
use crate::hypgeom::hyperboloid::Lorentz;
use crate::hypgeom::{gudermannian, pants_from_boundary_lengths, tube_width, Pants};
use crate::topology::{Cuff, PantsGraph};
use num_complex::Complex64;
use spade::{
    AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation,
};
use std::collections::HashSet;

const MAX_STEINER_POINTS: usize = 400_000;

/// Strip layout for one geodesic.
#[derive(Debug, Clone)]
pub(super) struct StripPlan {
    pub length: f64,
    /// Full standard collar width.
    pub collar_width: f64,
    /// Extent actually covered by the structured strip.
    pub width: f64,
    /// Number of intervals around the geodesic (even).
    pub columns: usize,
    /// Number of `t`-intervals on one side of the geodesic.
    pub levels: usize,
    pub two_sided: bool,
    pub first_vertex: u32,
}

impl StripPlan {
    pub fn rows(&self) -> usize {
        if self.two_sided {
            2 * self.levels + 1
        } else {
            self.levels + 1
        }
    }

    pub fn vertex(&self, column: usize, row: usize) -> u32 {
        self.first_vertex + (row * (self.columns + 1) + column) as u32
    }

    /// Vertex on the rim facing pants side `side` at grid column `column` of that
    /// side's own parameter.
    fn rim_vertex(&self, side: usize, column: usize) -> u32 {
        if side == 0 {
            self.vertex(column, self.rows() - 1)
        } else {
            self.vertex(self.columns - column, 0)
        }
    }
}

#[derive(Clone, Copy)]
enum PlanRef {
    Boundary(usize),
    Curve(usize),
}

pub(super) struct Builder {
    pub mesh: SurfaceMesh,
}

impl Builder {
    fn add_chart(&mut self, chart: Chart) -> u32 {
        self.mesh.charts.push(chart);
        (self.mesh.charts.len() - 1) as u32
    }

    fn add_vertex(&mut self, chart: u32, pos: [f64; 2]) -> u32 {
        self.mesh.vertices.push(Vertex { chart, pos });
        (self.mesh.vertices.len() - 1) as u32
    }

    fn add_triangle(&mut self, tri: [u32; 3], region: Region) {
        self.mesh.triangles.push(tri);
        self.mesh.regions.push(region);
    }
}

/// Triangulate the surface described by `graph` with target edge length `opts.h`.
pub fn mesh_surface(graph: &PantsGraph, opts: &MeshOptions) -> Result<SurfaceMesh> {
    if !(opts.h.is_finite() && opts.h > 0.0) {
        return Err(domain(format!("mesh size must be positive, got {}", opts.h)));
    }
    if !graph.cusps().is_empty() {
        return Err(domain("surfaces with cusps are handled combinatorially only"));
    }
    let h = opts.h;
    let pants: Vec<Pants> = graph
        .pants()
        .iter()
        .enumerate()
        .map(|(p, _)| {
            let l = graph.cuff_lengths(p).map(|x| x.expect("no cusps"));
            pants_from_boundary_lengths(l[0], l[1], l[2])
        })
        .collect::<Result<_>>()?;

    let plan_of = |c: Cuff| match c {
        Cuff::Boundary(i) => PlanRef::Boundary(i),
        Cuff::Curve(i) => PlanRef::Curve(i),
        Cuff::Cusp(_) => unreachable!("cusps rejected above"),
    };

    let mut bplans: Vec<StripPlan> = Vec::new();
    for b in graph.boundaries() {
        let w = tube_width(b.length)?;
        bplans.push(StripPlan {
            length: b.length,
            collar_width: w,
            width: w,
            columns: 0,
            levels: 0,
            two_sided: false,
            first_vertex: 0,
        });
    }
    let mut cplans: Vec<StripPlan> = Vec::new();
    for c in graph.curves() {
        let w = tube_width(c.length)?;
        cplans.push(StripPlan {
            length: c.length,
            collar_width: w,
            width: w,
            columns: 0,
            levels: 0,
            two_sided: true,
            first_vertex: 0,
        });
    }

    // Standard collars may nearly touch along a seam. Narrow the strips so every
    // seam keeps a gap of about one element, shrinking boundary strips first.
    for (p, cuffs) in graph.pants().iter().enumerate() {
        let geo = &pants[p];
        for i in 0..3 {
            let j = (i + 1) % 3;
            let seam = geo.seam_length(i);
            let wi = plan_width(&bplans, &cplans, plan_of(cuffs[i]));
            let wj = plan_width(&bplans, &cplans, plan_of(cuffs[j]));
            let want = h.min(0.25 * seam);
            let deficit = want - (seam - wi - wj);
            if deficit <= 0.0 {
                continue;
            }
            let (si, sj) = match (cuffs[i], cuffs[j]) {
                (Cuff::Boundary(_), Cuff::Curve(_)) => (deficit, 0.0),
                (Cuff::Curve(_), Cuff::Boundary(_)) => (0.0, deficit),
                _ => (0.5 * deficit, 0.5 * deficit),
            };
            shrink(&mut bplans, &mut cplans, plan_of(cuffs[i]), wi - si);
            shrink(&mut bplans, &mut cplans, plan_of(cuffs[j]), wj - sj);
        }
    }

    for plan in bplans.iter_mut().chain(cplans.iter_mut()) {
        if plan.width <= 0.25 * plan.collar_width {
            return Err(Error::Geometry(format!(
                "collar of geodesic with length {} leaves no room for a strip",
                plan.length
            )));
        }
        let rim = plan.length * plan.width.cosh();
        plan.columns = (2 * (rim / (2.0 * h)).ceil() as usize).max(4);
        plan.levels = ((plan.width / h).ceil() as usize).max(2);
    }

    let mut b = Builder {
        mesh: SurfaceMesh {
            id: graph.id().to_string(),
            charts: Vec::new(),
            vertices: Vec::new(),
            triangles: Vec::new(),
            regions: Vec::new(),
            boundary_labels: graph.boundaries().iter().map(|x| x.label.clone()).collect(),
            boundary_edges: Vec::new(),
            glued_edges: Vec::new(),
            curved_edges: Vec::new(),
            strips: Vec::new(),
            euler_characteristic: graph.euler_characteristic(),
            h,
            level: 0,
        },
    };

    for (i, plan) in bplans.iter_mut().enumerate() {
        build_strip(&mut b, plan, StripCore::Boundary(i as u32), Region::HalfCollar(i as u32));
    }
    for (i, plan) in cplans.iter_mut().enumerate() {
        build_strip(&mut b, plan, StripCore::Curve(i as u32), Region::Collar(i as u32));
    }

    for (p, cuffs) in graph.pants().iter().enumerate() {
        let mut sides = [(0usize, PlanRef::Boundary(0)); 3];
        for (c, cuff) in cuffs.iter().enumerate() {
            sides[c] = match *cuff {
                Cuff::Boundary(i) => (0, PlanRef::Boundary(i)),
                Cuff::Curve(i) => {
                    let s = graph.curves()[i].sides;
                    let side = if s[0].pants == p && s[0].cuff == c { 0 } else { 1 };
                    (side, PlanRef::Curve(i))
                }
                Cuff::Cusp(_) => unreachable!(),
            };
        }
        let plans: [&StripPlan; 3] = sides.map(|(_, r)| match r {
            PlanRef::Boundary(i) => &bplans[i],
            PlanRef::Curve(i) => &cplans[i],
        });
        let tags: [Region; 3] = sides.map(|(_, r)| match r {
            PlanRef::Boundary(i) => Region::HalfCollar(i as u32),
            PlanRef::Curve(i) => Region::Collar(i as u32),
        });
        build_thick_piece(&mut b, p, &pants[p], plans, sides.map(|s| s.0), tags, opts)?;
    }
    Ok(b.mesh)
}

fn plan_width(b: &[StripPlan], c: &[StripPlan], r: PlanRef) -> f64 {
    match r {
        PlanRef::Boundary(i) => b[i].width,
        PlanRef::Curve(i) => c[i].width,
    }
}

fn shrink(b: &mut [StripPlan], c: &mut [StripPlan], r: PlanRef, to: f64) {
    let plan = match r {
        PlanRef::Boundary(i) => &mut b[i],
        PlanRef::Curve(i) => &mut c[i],
    };
    plan.width = plan.width.min(to);
}

/// Structured strip in a Fermi chart with `t` levels uniform in arclength.
pub(super) fn build_strip(b: &mut Builder, plan: &mut StripPlan, core: StripCore, region: Region) {
    let chart = b.add_chart(Chart::Fermi {
        core_length: plan.length,
    });
    let n = plan.columns;
    let m = plan.levels as i64;
    let tau_of = |level: i64| gudermannian(plan.width * level as f64 / m as f64);
    let row_levels: Vec<i64> = if plan.two_sided { (-m..=m).collect() } else { (0..=m).collect() };
    plan.first_vertex = b.mesh.vertices.len() as u32;
    for &lv in &row_levels {
        let tau = tau_of(lv);
        for k in 0..=n {
            let s = plan.length * k as f64 / n as f64;
            b.add_vertex(chart, [s, tau]);
        }
    }
    for (r, pair) in row_levels.windows(2).enumerate() {
        let lower_half = pair[1] <= 0;
        for k in 0..n {
            let (a, bb) = (plan.vertex(k, r), plan.vertex(k + 1, r));
            let (c, d) = (plan.vertex(k + 1, r + 1), plan.vertex(k, r + 1));
            // Diagonals mirror across the core so the strip is symmetric in tau.
            if lower_half {
                b.add_triangle([a, bb, d], region);
                b.add_triangle([bb, c, d], region);
            } else {
                b.add_triangle([a, bb, c], region);
                b.add_triangle([a, c, d], region);
            }
        }
        b.mesh
            .glued_edges
            .push([[plan.vertex(n, r), plan.vertex(n, r + 1)], [plan.vertex(0, r), plan.vertex(0, r + 1)]]);
    }
    if let StripCore::Boundary(label) = core {
        for k in 0..n {
            b.mesh.boundary_edges.push(BoundaryEdge {
                v: [plan.vertex(k, 0), plan.vertex(k + 1, 0)],
                label,
            });
        }
    }
    let tau_max = tau_of(m);
    b.mesh.strips.push(Strip {
        chart,
        core,
        tau_min: if plan.two_sided { -tau_max } else { 0.0 },
        tau_max,
    });
}

#[derive(Clone, Copy)]
enum PolyNode {
    /// Rim node `k` of the strip on cuff `cuff`.
    Rim { cuff: usize, k: usize },
    Seam,
}

/// Both hexagon pieces of one pants outside its strips, triangulated by a
/// refined constrained Delaunay triangulation in a centred disk chart. The
/// second hexagon is the mirror image of the first.
fn build_thick_piece(
    b: &mut Builder,
    p: usize,
    geo: &Pants,
    plans: [&StripPlan; 3],
    sides: [usize; 3],
    tags: [Region; 3],
    opts: &MeshOptions,
) -> Result<()> {
    let h = opts.h;
    let mut points: Vec<Lorentz> = Vec::new();
    let mut nodes: Vec<PolyNode> = Vec::new();
    let mut curves: Vec<EdgeCurve> = Vec::new();
    let mut corners: Vec<Lorentz> = Vec::new();
    for i in 0..3 {
        let plan = plans[i];
        let frame = geo.cuff_frame(i);
        let half = plan.columns / 2;
        for k in 0..=half {
            let u = plan.length * k as f64 / plan.columns as f64;
            points.push(frame.fermi_point(u, plan.width));
            nodes.push(PolyNode::Rim { cuff: i, k });
            curves.push(if k < half { EdgeCurve::Hypercycle(i as u8) } else { EdgeCurve::Geodesic });
        }
        corners.push(points[points.len() - half - 1]);
        corners.push(points[points.len() - 1]);
        let next = plans[(i + 1) % 3];
        let start = plan.width;
        let gap = geo.seam_length(i) - plan.width - next.width;
        if gap <= 1e-9 {
            return Err(Error::Geometry(format!(
                "collars overlap along a seam of pants {p} with cuff lengths {:?}",
                geo.cuff_lengths
            )));
        }
        let pieces = ((gap / h).ceil() as usize).max(1);
        let seam = geo.seam_frame(i);
        for j in 1..pieces {
            points.push(seam.geodesic_point(start + gap * j as f64 / pieces as f64));
            nodes.push(PolyNode::Seam);
            curves.push(EdgeCurve::Geodesic);
        }
    }
    let center = corners
        .iter()
        .fold(Lorentz([0.0; 3]), |acc, &x| acc + x)
        .normalized_point()
        .to_disk();
    let frames = (0..3).map(|i| geo.cuff_frame(i)).collect::<Vec<_>>();
    let chart_a = DiskChart {
        scale: 1.0,
        rotation: Complex64::new(1.0, 0.0),
        center,
        mirrored: false,
        frames: frames.clone(),
    };
    let poly: Vec<[f64; 2]> = points.iter().map(|&x| chart_a.to_chart(x)).collect();
    let lam = |q: [f64; 2]| 2.0 / (1.0 - q[0] * q[0] - q[1] * q[1]);
    let lam_max = poly.iter().map(|&q| lam(q)).fold(0.0, f64::max);
    let lam_typ = (lam_max * 2.0).sqrt();
    let side = h / lam_typ;
    let max_area = 3f64.sqrt() / 4.0 * side * side;

    let n = poly.len();
    let verts: Vec<Point2<f64>> = poly.iter().map(|q| Point2::new(q[0], q[1])).collect();
    let edges: Vec<[usize; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
    let mut cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::bulk_load_cdt(verts, edges)
        .map_err(|e| Error::Geometry(format!("triangulating pants {p}: {e:?}")))?;
    if cdt.num_vertices() != n {
        return Err(Error::Geometry(format!("pants {p}: coincident boundary nodes")));
    }
    let result = cdt.refine(
        RefinementParameters::<f64>::new()
            .with_angle_limit(AngleLimit::from_deg(opts.min_angle_deg))
            .with_max_allowed_area(max_area)
            .keep_constraint_edges()
            .exclude_outer_faces(true)
            .with_max_additional_vertices(MAX_STEINER_POINTS),
    );
    let excluded: HashSet<_> = result.excluded_faces.iter().copied().collect();
    let all_pos: Vec<[f64; 2]> = cdt
        .vertices()
        .map(|v| {
            let q = v.position();
            [q.x, q.y]
        })
        .collect();
    let mut tris: Vec<[usize; 3]> = Vec::new();
    for face in cdt.inner_faces() {
        if excluded.contains(&face.fix()) {
            continue;
        }
        let vs = face.vertices().map(|v| v.fix().index());
        tris.push(vs);
    }
    let widths = plans.map(|pl| pl.collar_width);

    for hex in 0..2u8 {
        let mirrored = hex == 1;
        let chart = DiskChart {
            center: if mirrored { center.conj() } else { center },
            mirrored,
            ..chart_a.clone()
        };
        let cid = b.add_chart(Chart::Disk(chart.clone()));
        let base = b.mesh.vertices.len() as u32;
        for q in &all_pos {
            let pos = if mirrored { [q[0], -q[1]] } else { *q };
            b.add_vertex(cid, pos);
        }
        for t in &tris {
            let tri = if mirrored {
                [t[0], t[2], t[1]].map(|x| base + x as u32)
            } else {
                t.map(|x| base + x as u32)
            };
            let centroid = {
                let ps = t.map(|x| all_pos[x]);
                [(ps[0][0] + ps[1][0] + ps[2][0]) / 3.0, (ps[0][1] + ps[1][1] + ps[2][1]) / 3.0]
            };
            let x = chart_a.from_chart(centroid);
            let mut region = Region::Thick { pants: p as u32, hexagon: hex };
            let mut best = f64::INFINITY;
            for c in 0..3 {
                let rel = frames[c].fermi_coords(x).1 / widths[c];
                if rel < 1.0 && rel < best {
                    best = rel;
                    region = tags[c];
                }
            }
            b.add_triangle(tri, region);
        }
        for i in 0..n {
            let j = (i + 1) % n;
            let e = [base + i as u32, base + j as u32];
            b.mesh.curved_edges.push(CurvedEdge { v: e, curve: curves[i] });
            match (nodes[i], nodes[j], curves[i]) {
                (PolyNode::Rim { cuff, k }, PolyNode::Rim { k: k2, .. }, EdgeCurve::Hypercycle(_)) => {
                    let plan = plans[cuff];
                    let col = |k: usize| if mirrored { plan.columns - k } else { k };
                    let side = sides[cuff];
                    let rim = [plan.rim_vertex(side, col(k)), plan.rim_vertex(side, col(k2))];
                    b.mesh.glued_edges.push([e, rim]);
                }
                _ => {
                    if mirrored {
                        let a = base - all_pos.len() as u32;
                        b.mesh.glued_edges.push([[a + i as u32, a + j as u32], e]);
                    }
                }
            }
        }
    }
    Ok(())
}

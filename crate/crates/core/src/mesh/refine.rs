use super::{BoundaryEdge, CurvedEdge, EdgeCurve, SurfaceMesh, Vertex};
use std::collections::HashMap;

fn key(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

/// Uniform red refinement: every triangle splits into four. New nodes on
/// geodesic and equidistant interfaces are placed on the exact curve, strip
/// nodes at the Fermi midpoint, so glued copies stay coincident.
pub fn refine(mesh: &SurfaceMesh) -> SurfaceMesh {
    let curve_of: HashMap<(u32, u32), EdgeCurve> = mesh
        .curved_edges
        .iter()
        .map(|e| (key(e.v[0], e.v[1]), e.curve))
        .collect();
    let mut vertices = mesh.vertices.clone();
    let mut mid: HashMap<(u32, u32), u32> = HashMap::with_capacity(mesh.triangles.len() * 2);
    let mut midpoint = |a: u32, b: u32, vertices: &mut Vec<Vertex>| -> u32 {
        let k = key(a, b);
        *mid.entry(k).or_insert_with(|| {
            let chart_id = mesh.vertices[k.0 as usize].chart;
            let chart = &mesh.charts[chart_id as usize];
            let pos = chart.edge_midpoint(mesh.pos(k.0), mesh.pos(k.1), curve_of.get(&k).copied());
            vertices.push(Vertex { chart: chart_id, pos });
            (vertices.len() - 1) as u32
        })
    };
    let mut triangles = Vec::with_capacity(4 * mesh.triangles.len());
    let mut regions = Vec::with_capacity(4 * mesh.triangles.len());
    for (t, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        let ab = midpoint(a, b, &mut vertices);
        let bc = midpoint(b, c, &mut vertices);
        let ca = midpoint(c, a, &mut vertices);
        triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        regions.extend([mesh.regions[t]; 4]);
    }
    let mut split = |a: u32, b: u32, vertices: &mut Vec<Vertex>| -> [[u32; 2]; 2] {
        let m = midpoint(a, b, vertices);
        [[a, m], [m, b]]
    };
    let mut boundary_edges = Vec::with_capacity(2 * mesh.boundary_edges.len());
    for e in &mesh.boundary_edges {
        for v in split(e.v[0], e.v[1], &mut vertices) {
            boundary_edges.push(BoundaryEdge { v, label: e.label });
        }
    }
    let mut curved_edges = Vec::with_capacity(2 * mesh.curved_edges.len());
    for e in &mesh.curved_edges {
        for v in split(e.v[0], e.v[1], &mut vertices) {
            curved_edges.push(CurvedEdge { v, curve: e.curve });
        }
    }
    let mut glued_edges = Vec::with_capacity(2 * mesh.glued_edges.len());
    for [p, q] in &mesh.glued_edges {
        let sp = split(p[0], p[1], &mut vertices);
        let sq = split(q[0], q[1], &mut vertices);
        glued_edges.push([sp[0], sq[0]]);
        glued_edges.push([sp[1], sq[1]]);
    }
    SurfaceMesh {
        id: mesh.id.clone(),
        charts: mesh.charts.clone(),
        vertices,
        triangles,
        regions,
        boundary_labels: mesh.boundary_labels.clone(),
        boundary_edges,
        glued_edges,
        curved_edges,
        strips: mesh.strips.clone(),
        euler_characteristic: mesh.euler_characteristic,
        h: mesh.h,
        level: mesh.level + 1,
    }
}

use super::SurfaceMesh;
use crate::error::{structural, Result};
use std::collections::HashMap;

/// Counts gathered while validating a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshReport {
    pub dofs: usize,
    pub edges: usize,
    pub triangles: usize,
    pub euler_characteristic: i64,
    pub boundary_cycles: usize,
    pub min_chart_area: f64,
}

/// Check conformity, orientability, boundary structure and Euler
/// characteristic of the glued triangulation.
pub fn validate_mesh(mesh: &SurfaceMesh) -> Result<MeshReport> {
    if mesh.regions.len() != mesh.triangles.len() {
        return Err(structural("region tags do not match triangles"));
    }
    let dofs = mesh.dof_map();
    let d = |v: u32| dofs.of_vertex[v as usize];
    let mut min_area = f64::INFINITY;
    let mut directed: HashMap<(u32, u32), u32> = HashMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let chart = mesh.vertices[tri[0] as usize].chart;
        if tri.iter().any(|&v| mesh.vertices[v as usize].chart != chart) {
            return Err(structural(format!("triangle {t} spans several charts")));
        }
        let [a, b, c] = tri.map(|v| mesh.pos(v));
        let area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
        if area <= 0.0 {
            return Err(structural(format!("triangle {t} is not positively oriented (area {area:e})")));
        }
        min_area = min_area.min(area);
        let g = tri.map(d);
        if g[0] == g[1] || g[1] == g[2] || g[0] == g[2] {
            return Err(structural(format!("triangle {t} has repeated global vertices")));
        }
        for i in 0..3 {
            *directed.entry((g[i], g[(i + 1) % 3])).or_default() += 1;
        }
    }
    let mut undirected: HashMap<(u32, u32), u32> = HashMap::new();
    for (&(a, b), &n) in &directed {
        if n > 1 {
            return Err(structural(format!(
                "edge ({a}, {b}) is traversed twice in the same direction: mesh is not orientable or not conforming"
            )));
        }
        *undirected.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    let mut open: Vec<(u32, u32)> = undirected.iter().filter(|(_, &n)| n == 1).map(|(&e, _)| e).collect();
    open.sort_unstable();
    let mut declared: Vec<(u32, u32)> = mesh
        .boundary_edges
        .iter()
        .map(|e| {
            let (a, b) = (d(e.v[0]), d(e.v[1]));
            (a.min(b), a.max(b))
        })
        .collect();
    declared.sort_unstable();
    if open != declared {
        return Err(structural(format!(
            "{} open edges but {} declared boundary edges",
            open.len(),
            declared.len()
        )));
    }
    let mut cycles = 0;
    for label in 0..mesh.boundary_labels.len() as u32 {
        let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
        for e in mesh.boundary_edges.iter().filter(|e| e.label == label) {
            let (a, b) = (d(e.v[0]), d(e.v[1]));
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        if adj.is_empty() {
            return Err(structural(format!("boundary {} has no edges", mesh.boundary_labels[label as usize])));
        }
        if adj.values().any(|n| n.len() != 2) {
            return Err(structural(format!(
                "boundary {} is not a union of closed curves",
                mesh.boundary_labels[label as usize]
            )));
        }
        let start = *adj.keys().min().expect("nonempty");
        let (mut prev, mut cur, mut len) = (start, adj[&start][0], 1usize);
        while cur != start {
            let next = if adj[&cur][0] == prev { adj[&cur][1] } else { adj[&cur][0] };
            prev = cur;
            cur = next;
            len += 1;
        }
        if len != adj.len() {
            return Err(structural(format!(
                "boundary {} consists of several closed curves",
                mesh.boundary_labels[label as usize]
            )));
        }
        cycles += 1;
    }
    let chi = dofs.count as i64 - undirected.len() as i64 + mesh.triangles.len() as i64;
    if chi != mesh.euler_characteristic {
        return Err(structural(format!(
            "Euler characteristic of the mesh is {chi}, surface has {}",
            mesh.euler_characteristic
        )));
    }
    Ok(MeshReport {
        dofs: dofs.count,
        edges: undirected.len(),
        triangles: mesh.triangles.len(),
        euler_characteristic: chi,
        boundary_cycles: cycles,
        min_chart_area: min_area,
    })
}

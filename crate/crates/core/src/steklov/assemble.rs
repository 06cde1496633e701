use super::sparse::CsrMatrix;
use super::{BoundaryCondition, BoundaryConditionMap};
use crate::error::{Error, Result};
use crate::mesh::{segment_integral, DofMap, SurfaceMesh};

/// Chart-area threshold below which a triangle is treated as degenerate.
pub const MIN_CHART_AREA: f64 = 1e-14;

/// P1 Dirichlet-energy matrix. Computed in chart coordinates, which is exact
/// for the hyperbolic metric because the energy is conformally invariant.
pub fn assemble_stiffness(mesh: &SurfaceMesh, dofs: &DofMap) -> Result<CsrMatrix> {
    let mut trip = Vec::with_capacity(9 * mesh.triangles.len());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let p = tri.map(|v| mesh.pos(v));
        let area2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        if area2.abs() < 2.0 * MIN_CHART_AREA {
            return Err(Error::Assembly(format!(
                "triangle {t} is degenerate (chart area {:e})",
                0.5 * area2.abs()
            )));
        }
        let mut gx = [0.0; 3];
        let mut gy = [0.0; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            gx[i] = p[j][1] - p[k][1];
            gy[i] = p[k][0] - p[j][0];
        }
        let scale = 1.0 / (2.0 * area2.abs());
        let g = tri.map(|v| dofs.of_vertex[v as usize]);
        for i in 0..3 {
            for j in 0..3 {
                trip.push((g[i], g[j], scale * (gx[i] * gx[j] + gy[i] * gy[j])));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(dofs.count, trip))
}

/// Consistent P1 mass of hyperbolic arclength on the Steklov boundary edges.
pub fn assemble_boundary_mass(mesh: &SurfaceMesh, dofs: &DofMap, bc: &BoundaryConditionMap) -> Result<CsrMatrix> {
    let mut trip = Vec::with_capacity(4 * mesh.boundary_edges.len());
    for e in &mesh.boundary_edges {
        if bc.get(&mesh.boundary_labels[e.label as usize]) != BoundaryCondition::Steklov {
            continue;
        }
        let chart = mesh.vertex_chart(e.v[0]);
        let (a, b) = (mesh.pos(e.v[0]), mesh.pos(e.v[1]));
        let lam = |q: [f64; 2]| chart.conformal_factor(q);
        // Linear shape functions along the chord, parameter x in [0, 1].
        let ax = |q: [f64; 2]| {
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            ((q[0] - a[0]) * dx + (q[1] - a[1]) * dy) / (dx * dx + dy * dy)
        };
        let m00 = segment_integral(a, b, |q| lam(q) * (1.0 - ax(q)).powi(2));
        let m11 = segment_integral(a, b, |q| lam(q) * ax(q).powi(2));
        let m01 = segment_integral(a, b, |q| lam(q) * ax(q) * (1.0 - ax(q)));
        let g = e.v.map(|v| dofs.of_vertex[v as usize]);
        trip.extend([(g[0], g[0], m00), (g[1], g[1], m11), (g[0], g[1], m01), (g[1], g[0], m01)]);
    }
    Ok(CsrMatrix::from_triplets(dofs.count, trip))
}

//! Standalone collar meshes used to check the discretisation against the
//! separable spectra.

use super::build::{build_strip, Builder, StripPlan};
use super::{BoundaryEdge, Region, StripCore, SurfaceMesh};
use crate::error::{domain, Result};
use crate::hypgeom::tube_width;

fn model_plan(length: f64, h: f64, two_sided: bool) -> Result<StripPlan> {
    if !(h.is_finite() && h > 0.0) {
        return Err(domain(format!("mesh size must be positive, got {h}")));
    }
    let w = tube_width(length)?;
    let rim = length * w.cosh();
    Ok(StripPlan {
        length,
        collar_width: w,
        width: w,
        columns: (2 * (rim / (2.0 * h)).ceil() as usize).max(4),
        levels: ((w / h).ceil() as usize).max(2),
        two_sided,
        first_vertex: 0,
    })
}

fn empty(id: String, h: f64, labels: [&str; 2]) -> Builder {
    Builder {
        mesh: SurfaceMesh {
            id,
            charts: Vec::new(),
            vertices: Vec::new(),
            triangles: Vec::new(),
            regions: Vec::new(),
            boundary_labels: labels.iter().map(|s| s.to_string()).collect(),
            boundary_edges: Vec::new(),
            glued_edges: Vec::new(),
            curved_edges: Vec::new(),
            strips: Vec::new(),
            euler_characteristic: 0,
            h,
            level: 0,
        },
    }
}

fn add_row(b: &mut Builder, plan: &StripPlan, row: usize, label: u32) {
    for k in 0..plan.columns {
        b.mesh.boundary_edges.push(BoundaryEdge {
            v: [plan.vertex(k, row), plan.vertex(k + 1, row)],
            label,
        });
    }
}

/// Half collar `[0, w] x S^1` of a boundary geodesic of length `length`.
/// Boundary labels: `core` (the geodesic) and `far` (the equidistant rim).
pub fn half_collar_mesh(length: f64, h: f64) -> Result<SurfaceMesh> {
    let mut plan = model_plan(length, h, false)?;
    let mut b = empty(format!("half-collar-{length}"), h, ["core", "far"]);
    build_strip(&mut b, &mut plan, StripCore::Model, Region::Model);
    add_row(&mut b, &plan, 0, 0);
    add_row(&mut b, &plan, plan.rows() - 1, 1);
    Ok(b.mesh)
}

/// Full collar `[-w, w] x S^1` of a geodesic of length `length`.
/// Boundary labels: `lower` and `upper`.
pub fn cylinder_mesh(length: f64, h: f64) -> Result<SurfaceMesh> {
    let mut plan = model_plan(length, h, true)?;
    let mut b = empty(format!("cylinder-{length}"), h, ["lower", "upper"]);
    build_strip(&mut b, &mut plan, StripCore::Model, Region::Model);
    add_row(&mut b, &plan, 0, 0);
    add_row(&mut b, &plan, plan.rows() - 1, 1);
    Ok(b.mesh)
}

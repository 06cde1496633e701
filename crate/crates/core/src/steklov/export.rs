//! CSV output of spectra and boundary traces.

use crate::error::{structural, Result};
use crate::mesh::SurfaceMesh;
use crate::steklov::SpectrumResult;
use std::collections::HashMap;
use std::io::Write;

/// One row of a spectrum table.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub problem_id: String,
    pub h: f64,
    pub k: usize,
    pub sigma_k: f64,
    pub residual: f64,
}

/// Value of eigenfunction `k` at arclength `arclength` along boundary `component`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub component: String,
    pub arclength: f64,
    pub value: f64,
}

pub fn spectrum_rows(problem_id: &str, h: f64, result: &SpectrumResult) -> Vec<SpectrumRow> {
    result
        .eigenvalues
        .iter()
        .zip(&result.residuals)
        .enumerate()
        .map(|(k, (&sigma_k, &residual))| SpectrumRow {
            problem_id: problem_id.to_string(),
            h,
            k,
            sigma_k,
            residual,
        })
        .collect()
}

/// Boundary traces of the requested nodal eigenfunctions, each component walked
/// once from its lowest-numbered node.
pub fn trace_rows(mesh: &SurfaceMesh, nodal: &[Vec<f64>], modes: &[usize]) -> Result<Vec<TraceRow>> {
    let dofs = mesh.dof_map();
    let mut rows = Vec::new();
    for (label_idx, label) in mesh.boundary_labels.iter().enumerate() {
        let mut adj: HashMap<u32, Vec<(u32, f64)>> = HashMap::new();
        for e in mesh.boundary_edges.iter().filter(|e| e.label as usize == label_idx) {
            let (a, b) = (dofs.of_vertex[e.v[0] as usize], dofs.of_vertex[e.v[1] as usize]);
            let len = mesh.edge_length(e.v[0], e.v[1]);
            adj.entry(a).or_default().push((b, len));
            adj.entry(b).or_default().push((a, len));
        }
        let Some(&start) = adj.keys().min() else { continue };
        let mut order = vec![(start, 0.0)];
        let (mut prev, mut cur, mut s) = (start, adj[&start][0].0, adj[&start][0].1);
        while cur != start {
            order.push((cur, s));
            let nbrs = &adj[&cur];
            if nbrs.len() != 2 {
                return Err(structural(format!("boundary {label} is not a closed curve")));
            }
            let (next, len) = if nbrs[0].0 == prev { nbrs[1] } else { nbrs[0] };
            prev = cur;
            cur = next;
            s += len;
            if order.len() > adj.len() {
                return Err(structural(format!("boundary {label} walk did not close")));
            }
        }
        for &k in modes {
            let Some(f) = nodal.get(k) else {
                return Err(structural(format!("eigenfunction {k} was not computed")));
            };
            for &(d, arclength) in &order {
                rows.push(TraceRow {
                    k,
                    component: label.clone(),
                    arclength,
                    value: f[d as usize],
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_spectrum_csv<W: Write>(out: W, rows: &[SpectrumRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["problem_id", "h", "k", "sigma_k", "residual"])?;
    for r in rows {
        w.write_record([
            r.problem_id.clone(),
            r.h.to_string(),
            r.k.to_string(),
            r.sigma_k.to_string(),
            r.residual.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_csv<W: Write>(out: W, rows: &[TraceRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "component", "arclength", "value"])?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.component.clone(),
            r.arclength.to_string(),
            r.value.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

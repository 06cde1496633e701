//! Eigenvalue bounds in terms of the geometry and two eigenfunction
//! diagnostics on meshes.
//!
//! Every universal constant is a caller-supplied parameter. Lower bounds are
//! only ever reported; the arctan upper bound has no unknown constant and is
//! the one a run may assert.

use crate::error::{domain, structural, Result};
use crate::hypgeom::{thick_thin_decomposition, ThickThin};
use crate::mesh::{Chart, Region, StripCore, SurfaceMesh};
use crate::topology::{ell_k, k_max, PantsGraph};
use std::collections::BTreeSet;
use std::io::Write;

/// Relative slack allowed on the arctan upper bound for discretization error.
pub const UPPER_BOUND_SLACK: f64 = 0.02;

/// Fraction of the tube-energy bound the discrete energy must reach.
pub const TUBE_ENERGY_SLACK: f64 = 0.05;

/// Unknown constants of the bound formulas. All default to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub main: f64,
    pub perrin: f64,
    pub kar: f64,
    pub exp: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            main: 1.0,
            perrin: 1.0,
            kar: 1.0,
            exp: 1.0,
        }
    }
}

/// Main lower bound for `sigma_k` at constant `c`. `ell_k = None` stands for
/// an infinite separating length.
pub fn lower_bound_main(
    boundaries: u32,
    chi: i64,
    beta: f64,
    ell_k: Option<f64>,
    k: usize,
    k_max: usize,
    c: f64,
) -> Result<f64> {
    if boundaries == 0 || chi >= 0 || !(beta > 0.0) || !(c > 0.0) {
        return Err(domain(format!(
            "lower bound needs b >= 1, chi < 0, beta > 0, C > 0 (got b={boundaries}, chi={chi}, beta={beta}, C={c})"
        )));
    }
    if k == 0 || k > k_max + 1 {
        return Err(domain(format!("lower bound defined for 1 <= k <= {}, got {k}", k_max + 1)));
    }
    let b = f64::from(boundaries);
    let x = chi.unsigned_abs() as f64;
    let decay = 1.0 / ((1.0 + beta).powi(2) * beta.exp());
    if k == k_max + 1 {
        return Ok(c * decay / (b * x * x));
    }
    let branch = match ell_k {
        Some(l) if l.is_finite() => decay.min(l / beta),
        _ => decay,
    };
    Ok(c * branch / (b * x.powi(3)))
}

/// Separating length below which the main bound is linear in it.
pub fn crossover_length(beta: f64) -> f64 {
    beta / ((1.0 + beta).powi(2) * beta.exp())
}

/// Constant-free upper bound from the shortest separating multicurve of length
/// `ell_k` and the boundary lengths `component_boundaries` of the pieces it cuts off.
pub fn upper_bound_arctan(ell_k: f64, component_boundaries: &[f64]) -> Result<f64> {
    if !(ell_k.is_finite() && ell_k > 0.0) {
        return Err(domain(format!("upper bound needs a finite positive length, got {ell_k}")));
    }
    let min_l = component_boundaries.iter().copied().fold(f64::INFINITY, f64::min);
    if component_boundaries.is_empty() || !(min_l > 0.0) {
        return Err(domain("upper bound needs nonempty positive component boundary lengths"));
    }
    Ok(ell_k / (min_l * (1.0 / (ell_k / 2.0).sinh()).atan()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiscUpperBounds {
    pub kar: f64,
    /// Only defined for `k` below the boundary count.
    pub exp: Option<f64>,
}

pub fn upper_bound_misc(
    chi: i64,
    k: usize,
    boundaries: u32,
    total_boundary: f64,
    beta: f64,
    c_kar: f64,
    c_exp: f64,
) -> Result<MiscUpperBounds> {
    if !(total_boundary > 0.0) {
        return Err(domain(format!("total boundary length must be positive, got {total_boundary}")));
    }
    let kar = c_kar * (chi.unsigned_abs() as f64 + k as f64) / total_boundary;
    let exp = (k >= 1 && k < boundaries as usize).then(|| c_exp * beta.exp());
    Ok(MiscUpperBounds { kar, exp })
}

/// Quadratic lower bound in the separating length, for comparison only.
pub fn lower_bound_perrin(ell_k: f64, c1: f64) -> f64 {
    c1 * ell_k * ell_k
}

/// Bounds for one computed eigenvalue, with every input echoed.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub surface_id: String,
    pub k: usize,
    pub sigma_k: f64,
    pub lb_main: Option<f64>,
    pub lb_perrin: Option<f64>,
    pub ub_arctan: Option<f64>,
    pub ub_kar: f64,
    pub ub_exp: Option<f64>,
    /// `sigma_k` divided by the main bound at unit constant.
    pub implied_c: Option<f64>,
    /// Shortest separating length in the pants system; `None` is infinite.
    pub ell_k: Option<f64>,
    pub boundaries: u32,
    pub chi: i64,
    pub alpha: f64,
    pub beta: f64,
    pub k_max: usize,
    /// Boundary length of each piece cut off by the minimizing multicurve.
    pub component_boundaries: Vec<f64>,
    pub h: f64,
    pub refinement: u32,
}

impl BoundReport {
    /// Signed gap `ub_arctan - sigma_k`.
    pub fn upper_margin(&self) -> Option<f64> {
        self.ub_arctan.map(|u| u - self.sigma_k)
    }

    /// Whether `sigma_k` respects the arctan bound up to the allowed slack.
    /// `None` when the bound does not apply.
    pub fn upper_bound_holds(&self) -> Option<bool> {
        self.ub_arctan.map(|u| self.sigma_k <= u * (1.0 + UPPER_BOUND_SLACK))
    }
}

/// Evaluate every bound for eigenvalue `k` of `graph`.
pub fn bound_report(
    graph: &PantsGraph,
    k: usize,
    sigma_k: f64,
    consts: &BoundConstants,
    h: f64,
    refinement: u32,
) -> Result<BoundReport> {
    let sig = graph.signature();
    let kmax = k_max(sig)?;
    let chi = graph.euler_characteristic();
    let beta = graph.beta();
    let best = if k >= 1 && k <= kmax { ell_k(graph, k, None)? } else { None };
    let ell = best.as_ref().map(|m| m.length);
    let component_boundaries: Vec<f64> = best
        .as_ref()
        .map(|m| m.components.iter().map(|c| c.boundary_length).collect())
        .unwrap_or_default();
    let (lb_main, implied_c) = if k >= 1 && k <= kmax + 1 {
        let shape = lower_bound_main(sig.boundaries, chi, beta, ell, k, kmax, 1.0)?;
        (Some(consts.main * shape), Some(sigma_k / shape))
    } else {
        (None, None)
    };
    let ub_arctan = match ell {
        Some(l) => Some(upper_bound_arctan(l, &component_boundaries)?),
        None => None,
    };
    let misc = upper_bound_misc(chi, k, sig.boundaries, graph.total_boundary_length(), beta, consts.kar, consts.exp)?;
    Ok(BoundReport {
        surface_id: graph.id().to_string(),
        k,
        sigma_k,
        lb_main,
        lb_perrin: ell.map(|l| lower_bound_perrin(l, consts.perrin)),
        ub_arctan,
        ub_kar: misc.kar,
        ub_exp: misc.exp,
        implied_c,
        ell_k: ell,
        boundaries: sig.boundaries,
        chi,
        alpha: graph.alpha(),
        beta,
        k_max: kmax,
        component_boundaries,
        h,
        refinement,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with the fixed leading columns followed by run and bound extras.
pub fn write_bounds_csv<W: Write>(out: W, rows: &[BoundReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "surface_id", "k", "sigma_k", "lb_main", "ub_arctan", "ub_kar", "ub_exp", "implied_C", "ell_k", "b", "chi",
        "alpha", "beta", "h", "refinement", "K", "L_j", "lb_perrin", "ub_pass",
    ])?;
    for r in rows {
        let lj: Vec<String> = r.component_boundaries.iter().map(|x| x.to_string()).collect();
        w.write_record([
            r.surface_id.clone(),
            r.k.to_string(),
            r.sigma_k.to_string(),
            opt(r.lb_main),
            opt(r.ub_arctan),
            r.ub_kar.to_string(),
            opt(r.ub_exp),
            opt(r.implied_c),
            r.ell_k.map(|x| x.to_string()).unwrap_or_else(|| "inf".into()),
            r.boundaries.to_string(),
            r.chi.to_string(),
            r.alpha.to_string(),
            r.beta.to_string(),
            r.h.to_string(),
            r.refinement.to_string(),
            r.k_max.to_string(),
            lj.join(";"),
            opt(r.lb_perrin),
            r.upper_bound_holds().map(|p| p.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Outcome of the tube-energy inequality on one collar strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeEnergy {
    /// Smallest jump of the function between reflected rim points.
    pub jump: f64,
    /// Dirichlet energy of the function on the strip.
    pub energy: f64,
    /// `jump^2 * core_length / 4`.
    pub bound: f64,
    pub pass: bool,
}

/// Index of the mesh strip around interior curve `curve`.
pub fn curve_strip(mesh: &SurfaceMesh, curve: usize) -> Option<usize> {
    mesh.strips.iter().position(|s| s.core == StripCore::Curve(curve as u32))
}

/// Check `energy >= (1 - slack) * jump^2 |core| / 4` for a nodal function on
/// the global DOFs, over the two-sided strip `strip`.
pub fn tube_energy_check(mesh: &SurfaceMesh, f: &[f64], strip: usize) -> Result<TubeEnergy> {
    let st = mesh
        .strips
        .get(strip)
        .ok_or_else(|| domain(format!("mesh has no strip {strip}")))?;
    let Chart::Fermi { core_length } = mesh.charts[st.chart as usize] else {
        return Err(structural("strip chart is not a Fermi chart"));
    };
    if (st.tau_min + st.tau_max).abs() > 1e-12 {
        return Err(structural("strip is not symmetric about its core"));
    }
    let dofs = mesh.dof_map();
    if f.len() != dofs.count {
        return Err(domain(format!("function has {} values, mesh has {} unknowns", f.len(), dofs.count)));
    }
    let value = |v: u32| f[dofs.of_vertex[v as usize] as usize];
    const TOL: f64 = 1e-9;
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (i, v) in mesh.vertices.iter().enumerate() {
        if v.chart != st.chart {
            continue;
        }
        if (v.pos[1] - st.tau_max).abs() < TOL {
            upper.push((v.pos[0], i as u32));
        } else if (v.pos[1] - st.tau_min).abs() < TOL {
            lower.push((v.pos[0], i as u32));
        }
    }
    upper.sort_by(|a, b| a.0.total_cmp(&b.0));
    lower.sort_by(|a, b| a.0.total_cmp(&b.0));
    if upper.is_empty() || upper.len() != lower.len() {
        return Err(structural("strip rims do not pair up under reflection"));
    }
    let mut jump = f64::INFINITY;
    for (&(su, vu), &(sl, vl)) in upper.iter().zip(&lower) {
        if (su - sl).abs() > TOL * core_length.max(1.0) {
            return Err(structural(format!("rim node at s={su} has no reflected partner")));
        }
        jump = jump.min((value(vu) - value(vl)).abs());
    }
    let mut energy = 0.0;
    for tri in mesh.triangles.iter().filter(|t| mesh.vertices[t[0] as usize].chart == st.chart) {
        energy += p1_energy(tri.map(|v| mesh.pos(v)), tri.map(value));
    }
    let bound = jump * jump * core_length / 4.0;
    Ok(TubeEnergy {
        jump,
        energy,
        bound,
        pass: energy >= (1.0 - TUBE_ENERGY_SLACK) * bound,
    })
}

/// Flat Dirichlet energy of the linear interpolant on one chart triangle.
fn p1_energy(p: [[f64; 2]; 3], u: [f64; 3]) -> f64 {
    let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    let gx = ((u[1] - u[0]) * (p[2][1] - p[0][1]) - (u[2] - u[0]) * (p[1][1] - p[0][1])) / det;
    let gy = ((u[2] - u[0]) * (p[1][0] - p[0][0]) - (u[1] - u[0]) * (p[2][0] - p[0][0])) / det;
    0.5 * det.abs() * (gx * gx + gy * gy)
}

/// Spread of an eigenfunction over a thick component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillation {
    pub component: usize,
    /// `max - min` of the eigenfunction over the component's nodes.
    pub spread: f64,
    pub area: f64,
    /// `spread / sqrt(sigma * area)`.
    pub ratio: f64,
}

/// Oscillation of the nodal function `f` with eigenvalue `sigma` on thick
/// component `component`. `None` for a zero eigenvalue.
pub fn oscillation_report(
    graph: &PantsGraph,
    mesh: &SurfaceMesh,
    f: &[f64],
    sigma: f64,
    component: usize,
) -> Result<Option<Oscillation>> {
    if sigma <= crate::steklov::ZERO_FLOOR {
        return Ok(None);
    }
    let tt: ThickThin = thick_thin_decomposition(graph, graph.beta())?;
    let comp = tt
        .components
        .get(component)
        .ok_or_else(|| domain(format!("surface has {} thick components", tt.components.len())))?;
    let in_comp = |p: usize| tt.pants_component[p] == component;
    let dofs = mesh.dof_map();
    if f.len() != dofs.count {
        return Err(domain(format!("function has {} values, mesh has {} unknowns", f.len(), dofs.count)));
    }
    let mut nodes = BTreeSet::new();
    for (tri, region) in mesh.triangles.iter().zip(&mesh.regions) {
        let keep = match *region {
            Region::Thick { pants, .. } => in_comp(pants as usize),
            Region::Collar(c) => {
                let c = c as usize;
                !tt.is_thin_curve(c) && in_comp(graph.curves()[c].sides[0].pants)
            }
            Region::HalfCollar(_) | Region::Model => false,
        };
        if keep {
            nodes.extend(tri.iter().map(|&v| dofs.of_vertex[v as usize]));
        }
    }
    if nodes.is_empty() {
        return Err(structural(format!("thick component {component} has no mesh nodes")));
    }
    let (lo, hi) = nodes
        .iter()
        .map(|&d| f[d as usize])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    let spread = hi - lo;
    Ok(Some(Oscillation {
        component,
        spread,
        area: comp.area,
        ratio: spread / (sigma * comp.area).sqrt(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn main_bound_values() {
        let v = lower_bound_main(4, -2, 1.0, Some(0.1), 1, 1, 1.0).unwrap();
        assert_relative_eq!(v, (1.0 / (4.0 * 1f64.exp())).min(0.1) / 32.0, max_relative = 1e-15);
        assert!((v - 0.0028741).abs() < 1e-7);
        let gap = lower_bound_main(4, -2, 1.0, None, 2, 1, 1.0).unwrap();
        assert_relative_eq!(gap, 1.0 / (64.0 * 1f64.exp()), max_relative = 1e-15);
        assert!((gap - 0.0057482).abs() < 1e-7);
        let inf = lower_bound_main(4, -2, 1.0, None, 1, 1, 1.0).unwrap();
        assert_relative_eq!(inf, 1.0 / (32.0 * 4.0 * 1f64.exp()), max_relative = 1e-15);
        assert!(lower_bound_main(4, -2, 1.0, None, 3, 1, 1.0).is_err());
        assert!(lower_bound_main(4, -2, 1.0, None, 0, 1, 1.0).is_err());
    }

    #[test]
    fn arctan_bound_values() {
        let v = upper_bound_arctan(0.2, &[2.0, 2.0]).unwrap();
        assert!((v - 0.067983).abs() < 1e-6, "{v}");
        let l = 2.0 * 1f64.asinh();
        assert_relative_eq!(upper_bound_arctan(l, &[1.0]).unwrap(), l * 4.0 / std::f64::consts::PI, max_relative = 1e-14);
        assert!(upper_bound_arctan(f64::INFINITY, &[1.0]).is_err());
        assert!(upper_bound_arctan(0.2, &[]).is_err());
    }

    #[test]
    fn misc_bounds() {
        let m = upper_bound_misc(-2, 1, 4, 4.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(m.kar, 0.75);
        assert_eq!(m.exp, Some(1f64.exp()));
        assert_eq!(upper_bound_misc(-2, 1, 4, 8.0, 1.0, 1.0, 1.0).unwrap().kar, 0.375);
        assert_eq!(upper_bound_misc(-2, 2, 4, 4.0, 1.0, 1.0, 1.0).unwrap().exp, m.exp);
        assert_eq!(upper_bound_misc(-2, 4, 4, 4.0, 1.0, 1.0, 1.0).unwrap().exp, None);
    }

    proptest! {
        #[test]
        fn branch_follows_crossover(beta in 0.05f64..6.0, frac in 0.01f64..0.99) {
            let star = crossover_length(beta);
            let decay = 1.0 / ((1.0 + beta).powi(2) * beta.exp());
            let below = lower_bound_main(3, -1, beta, Some(star * frac), 1, 2, 1.0).unwrap();
            prop_assert!((below - star * frac / beta / 3.0).abs() <= 1e-12 * below);
            let above = lower_bound_main(3, -1, beta, Some(star / frac), 1, 2, 1.0).unwrap();
            prop_assert!((above - decay / 3.0).abs() <= 1e-12 * above);
        }

        #[test]
        fn arctan_bound_vanishes_linearly(l in 1e-4f64..1e-2) {
            let v = upper_bound_arctan(l, &[1.0, 3.0]).unwrap();
            prop_assert!((v / l - 2.0 / std::f64::consts::PI).abs() < 2.0 * l);
        }
    }
}

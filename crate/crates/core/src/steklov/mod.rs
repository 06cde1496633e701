//! Steklov eigenproblem: P1 assembly, the discrete Dirichlet-to-Neumann map
//! and the separable spectra of the collar models.

mod assemble;
mod export;
mod model;
mod sparse;

pub use assemble::{assemble_boundary_mass, assemble_stiffness, MIN_CHART_AREA};
pub use export::{spectrum_rows, trace_rows, write_spectrum_csv, write_trace_csv, SpectrumRow, TraceRow};
pub use model::{
    cylinder_closed_form, cylinder_model_spectrum, expand_modes, halfcollar_closed_form, halfcollar_model_spectrum, shoot_cylinder,
    shoot_half_collar, verify_halfcollar_closed_forms, FarEnd, ModeEigenvalue, Parity,
};
pub use sparse::CsrMatrix;

use crate::error::{domain, Error, Result};
use crate::mesh::{DofMap, SurfaceMesh};
use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use std::collections::BTreeMap;

/// Eigenvalues with magnitude below this are reported as exactly zero.
pub const ZERO_FLOOR: f64 = 1e-10;

/// Right-hand sides per sparse triangular solve when forming the Schur complement.
const RHS_BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// `du/dn = sigma u`.
    Steklov,
    /// `u = 0`.
    Dirichlet,
    /// `du/dn = 0`.
    Neumann,
}

/// Boundary condition per boundary label; unlisted labels are Steklov.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryConditionMap {
    overrides: BTreeMap<String, BoundaryCondition>,
}

impl BoundaryConditionMap {
    pub fn all_steklov() -> Self {
        Self::default()
    }

    pub fn with(mut self, label: impl Into<String>, bc: BoundaryCondition) -> Self {
        self.overrides.insert(label.into(), bc);
        self
    }

    pub fn get(&self, label: &str) -> BoundaryCondition {
        self.overrides.get(label).copied().unwrap_or(BoundaryCondition::Steklov)
    }

    pub fn labels(&self) -> impl Iterator<Item = (&str, BoundaryCondition)> {
        self.overrides.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Role of a global degree of freedom in the solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofRole {
    Steklov,
    Dirichlet,
    Interior,
}

/// Assembled operators of a Steklov problem on one mesh.
#[derive(Debug, Clone)]
pub struct SteklovSystem {
    pub dofs: DofMap,
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    pub roles: Vec<DofRole>,
}

impl SteklovSystem {
    pub fn new(mesh: &SurfaceMesh, bc: &BoundaryConditionMap) -> Result<SteklovSystem> {
        for (label, _) in bc.labels() {
            if mesh.boundary_index(label).is_none() {
                return Err(domain(format!("boundary condition for unknown label {label}")));
            }
        }
        let dofs = mesh.dof_map();
        let stiffness = assemble_stiffness(mesh, &dofs)?;
        let mass = assemble_boundary_mass(mesh, &dofs, bc)?;
        let mut roles = vec![DofRole::Interior; dofs.count];
        for e in &mesh.boundary_edges {
            let role = match bc.get(&mesh.boundary_labels[e.label as usize]) {
                BoundaryCondition::Steklov => DofRole::Steklov,
                BoundaryCondition::Dirichlet => DofRole::Dirichlet,
                BoundaryCondition::Neumann => continue,
            };
            for v in e.v {
                let d = dofs.of_vertex[v as usize] as usize;
                if roles[d] != DofRole::Interior && roles[d] != role {
                    return Err(domain("a vertex lies on both a Steklov and a Dirichlet boundary"));
                }
                roles[d] = role;
            }
        }
        if !roles.contains(&DofRole::Steklov) {
            return Err(domain("problem has no Steklov boundary"));
        }
        Ok(SteklovSystem {
            dofs,
            stiffness,
            mass,
            roles,
        })
    }

    fn indices(&self, role: DofRole) -> Vec<usize> {
        (0..self.roles.len()).filter(|&i| self.roles[i] == role).collect()
    }

    /// Lowest `count` eigenpairs of the discrete Dirichlet-to-Neumann map.
    pub fn solve(&self, count: usize) -> Result<SpectrumResult> {
        let bnd = self.indices(DofRole::Steklov);
        let int = self.indices(DofRole::Interior);
        let nb = bnd.len();
        if count == 0 || count > nb {
            return Err(domain(format!("requested {count} eigenvalues, problem has {nb} boundary unknowns")));
        }
        let n = self.roles.len();
        let mut local = vec![usize::MAX; n];
        for (i, &d) in bnd.iter().enumerate() {
            local[d] = i;
        }
        for (i, &d) in int.iter().enumerate() {
            local[d] = i;
        }
        let k = &self.stiffness;

        // Interior block and its sparse Cholesky factor.
        let factor = if int.is_empty() {
            None
        } else {
            let mut trip = Vec::new();
            for (i, &d) in int.iter().enumerate() {
                for (c, v) in k.row(d) {
                    if self.roles[c] == DofRole::Interior {
                        trip.push(Triplet::new(i, local[c], v));
                    }
                }
            }
            let kii = SparseColMat::<usize, f64>::try_new_from_triplets(int.len(), int.len(), &trip)
                .map_err(|e| Error::Solver(format!("interior block: {e:?}")))?;
            Some(
                kii.sp_cholesky(Side::Lower)
                    .map_err(|e| Error::Solver(format!("interior block is not positive definite: {e:?}")))?,
            )
        };

        // Schur complement S = K_bb - K_bi K_ii^{-1} K_ib, assembled densely.
        let mut s = Mat::<f64>::zeros(nb, nb);
        for (i, &d) in bnd.iter().enumerate() {
            for (c, v) in k.row(d) {
                if self.roles[c] == DofRole::Steklov {
                    s[(i, local[c])] += v;
                }
            }
        }
        if let Some(llt) = &factor {
            let mut start = 0;
            while start < nb {
                let width = RHS_BLOCK.min(nb - start);
                let mut rhs = Mat::<f64>::zeros(int.len(), width);
                for j in 0..width {
                    for (c, v) in k.row(bnd[start + j]) {
                        if self.roles[c] == DofRole::Interior {
                            rhs[(local[c], j)] = v;
                        }
                    }
                }
                llt.solve_in_place(rhs.as_mut());
                for (i, &d) in bnd.iter().enumerate() {
                    for (c, v) in k.row(d) {
                        if self.roles[c] == DofRole::Interior {
                            let r = local[c];
                            for j in 0..width {
                                s[(i, start + j)] -= v * rhs[(r, j)];
                            }
                        }
                    }
                }
                start += width;
            }
        }
        for i in 0..nb {
            for j in 0..i {
                let avg = 0.5 * (s[(i, j)] + s[(j, i)]);
                s[(i, j)] = avg;
                s[(j, i)] = avg;
            }
        }

        let mut mb = Mat::<f64>::zeros(nb, nb);
        for (i, &d) in bnd.iter().enumerate() {
            for (c, v) in self.mass.row(d) {
                if self.roles[c] == DofRole::Steklov {
                    mb[(i, local[c])] = v;
                }
            }
        }

        // Reduce S u = sigma M u to standard form with M^{-1/2}.
        let me = mb
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Solver(format!("boundary mass eigendecomposition: {e:?}")))?;
        let md = me.S().column_vector();
        let mu = me.U();
        if (0..nb).any(|i| md[i] <= 0.0) {
            return Err(Error::Solver("boundary mass matrix is not positive definite".into()));
        }
        let mut mu_scaled = mu.to_owned();
        for j in 0..nb {
            let f = 1.0 / md[j].sqrt();
            for i in 0..nb {
                mu_scaled[(i, j)] *= f;
            }
        }
        let m_inv_half = &mu_scaled * mu.transpose();
        let c = &m_inv_half * &s * &m_inv_half;
        let ce = c
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Solver(format!("eigensolver failed: {e:?}")))?;
        let vals = ce.S().column_vector();
        let vecs = &m_inv_half * ce.U();

        let mut eigenvalues = Vec::with_capacity(count);
        let mut traces = Vec::with_capacity(count);
        let mut residuals = Vec::with_capacity(count);
        for j in 0..count {
            let mut sigma = vals[j];
            if sigma.abs() < ZERO_FLOOR {
                sigma = 0.0;
            } else if sigma < 0.0 {
                return Err(Error::Solver(format!(
                    "eigenvalue {j} is negative ({sigma:e}): operator is not positive semidefinite"
                )));
            }
            let u: Vec<f64> = (0..nb).map(|i| vecs[(i, j)]).collect();
            let mut r2 = 0.0;
            for i in 0..nb {
                let mut acc = 0.0;
                for l in 0..nb {
                    acc += (s[(i, l)] - vals[j] * mb[(i, l)]) * u[l];
                }
                r2 += acc * acc;
            }
            eigenvalues.push(sigma);
            residuals.push(r2.sqrt());
            traces.push(u);
        }
        let mut orthogonality_error = 0.0f64;
        for a in 0..count {
            let mu_a: Vec<f64> = (0..nb).map(|i| (0..nb).map(|l| mb[(i, l)] * traces[a][l]).sum()).collect();
            for b in 0..count {
                let g: f64 = (0..nb).map(|i| mu_a[i] * traces[b][i]).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                orthogonality_error = orthogonality_error.max((g - target).abs());
            }
        }

        // Harmonic extension into the interior: u_i = -K_ii^{-1} K_ib u_b.
        let mut nodal = vec![vec![0.0; n]; count];
        for j in 0..count {
            for (i, &d) in bnd.iter().enumerate() {
                nodal[j][d] = traces[j][i];
            }
        }
        if let Some(llt) = &factor {
            let mut rhs = Mat::<f64>::zeros(int.len(), count);
            for (r, &d) in int.iter().enumerate() {
                for (c, v) in k.row(d) {
                    if self.roles[c] == DofRole::Steklov {
                        for j in 0..count {
                            rhs[(r, j)] -= v * traces[j][local[c]];
                        }
                    }
                }
            }
            llt.solve_in_place(rhs.as_mut());
            for (r, &d) in int.iter().enumerate() {
                for j in 0..count {
                    nodal[j][d] = rhs[(r, j)];
                }
            }
        }

        Ok(SpectrumResult {
            eigenvalues,
            boundary_dofs: bnd,
            traces,
            nodal,
            residuals,
            orthogonality_error,
        })
    }

    /// Dirichlet energy over boundary `L^2` norm of a nodal function.
    pub fn rayleigh_quotient(&self, f: &[f64]) -> Result<f64> {
        if f.len() != self.roles.len() {
            return Err(domain(format!(
                "function has {} values, mesh has {} unknowns",
                f.len(),
                self.roles.len()
            )));
        }
        if (0..f.len()).any(|i| self.roles[i] == DofRole::Dirichlet && f[i] != 0.0) {
            return Err(domain("function does not vanish on the Dirichlet boundary"));
        }
        let den = self.mass.quadratic_form(f);
        if den <= 0.0 {
            return Err(domain("function has zero boundary norm"));
        }
        Ok(self.stiffness.quadratic_form(f) / den)
    }
}

/// Lowest eigenpairs of a Steklov problem, traces orthonormal in the discrete
/// boundary inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// Global DOF index of each boundary unknown.
    pub boundary_dofs: Vec<usize>,
    /// Eigenvector values on the boundary unknowns.
    pub traces: Vec<Vec<f64>>,
    /// Discrete harmonic extension on every DOF; zero on Dirichlet nodes.
    pub nodal: Vec<Vec<f64>>,
    /// `|S u - sigma M u|_2` for each pair.
    pub residuals: Vec<f64>,
    /// Largest deviation of the trace Gram matrix from the identity.
    pub orthogonality_error: f64,
}

/// Assemble and solve in one call.
pub fn solve_steklov(mesh: &SurfaceMesh, bc: &BoundaryConditionMap, count: usize) -> Result<SpectrumResult> {
    SteklovSystem::new(mesh, bc)?.solve(count)
}

/// Rayleigh quotient of a nodal function on the global DOFs of `mesh`.
pub fn rayleigh_quotient(mesh: &SurfaceMesh, bc: &BoundaryConditionMap, f: &[f64]) -> Result<f64> {
    SteklovSystem::new(mesh, bc)?.rayleigh_quotient(f)
}

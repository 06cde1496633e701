//! Sweep execution and report files.

use crate::config::{Plan, Point, Surface};
use hypsteklov::bounds::{bound_report, curve_strip, oscillation_report, tube_energy_check, write_bounds_csv, BoundReport};
use hypsteklov::hypgeom::thick_thin_decomposition;
use hypsteklov::mesh::{cylinder_mesh, half_collar_mesh, mesh_surface, refine, validate_mesh};
use hypsteklov::steklov::{
    cylinder_model_spectrum, expand_modes, halfcollar_model_spectrum, trace_rows, verify_halfcollar_closed_forms,
    FarEnd, SteklovSystem, TraceRow,
};
use hypsteklov::{BoundaryCondition, MeshOptions, Result as CoreResult, SurfaceMesh};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

/// Tolerance of the closed-form versus shooting gate.
pub const GATE_TOLERANCE: f64 = 1e-10;

/// Deterministic `(core length, mode)` samples for the gate: a golden-ratio
/// sequence over lengths in `[0.3, 4]` and modes `0..=8`.
pub fn gate_samples(count: usize) -> Vec<(f64, u32)> {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    (0..count)
        .map(|i| {
            let x = ((i as f64 + 1.0) * phi).fract();
            let y = ((i as f64 + 1.0) * phi * phi).fract();
            (0.3 + 3.7 * x, (y * 9.0) as u32)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLine {
    pub k: usize,
    pub sigma: f64,
    pub residual: f64,
}

/// A named diagnostic value at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticLine {
    pub check: &'static str,
    pub subject: String,
    pub value: f64,
    pub reference: Option<f64>,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult {
    pub level: u32,
    pub h: f64,
    pub dofs: usize,
    pub spectrum: Vec<SpectrumLine>,
    pub bounds: Vec<BoundReport>,
    pub diagnostics: Vec<DiagnosticLine>,
}

#[derive(Debug, Clone)]
pub struct PointResult {
    pub point: Point,
    pub surface_id: String,
    pub levels: Vec<LevelResult>,
    /// Separable reference spectrum for model surfaces.
    pub reference: Option<Vec<f64>>,
    pub traces: Vec<TraceRow>,
    /// Failed hard assertions.
    pub failures: Vec<String>,
    pub error: Option<String>,
    pub wall_seconds: f64,
}

fn base_mesh(point: &Point, min_angle: f64) -> CoreResult<SurfaceMesh> {
    match &point.surface {
        Surface::Graph(g) => mesh_surface(
            g,
            &MeshOptions {
                h: point.h,
                min_angle_deg: min_angle,
            },
        ),
        Surface::HalfCollar { core_length } => half_collar_mesh(*core_length, point.h),
        Surface::Cylinder { core_length } => cylinder_mesh(*core_length, point.h),
    }
}

/// Mesh of `point` at refinement `level`.
pub fn point_mesh(plan: &Plan, point: &Point, level: u32) -> CoreResult<SurfaceMesh> {
    let mut m = base_mesh(point, plan.min_angle)?;
    for _ in 0..level {
        m = refine(&m);
    }
    Ok(m)
}

fn model_reference(plan: &Plan, point: &Point) -> CoreResult<Option<Vec<f64>>> {
    let modes = plan.count as u32 + 1;
    let v = match &point.surface {
        Surface::Graph(_) => return Ok(None),
        Surface::HalfCollar { core_length } => {
            if plan.bc.get("core") != BoundaryCondition::Steklov {
                return Ok(None);
            }
            let far = match plan.bc.get("far") {
                BoundaryCondition::Neumann => FarEnd::Neumann,
                BoundaryCondition::Dirichlet => FarEnd::Dirichlet,
                BoundaryCondition::Steklov => return Ok(None),
            };
            expand_modes(&halfcollar_model_spectrum(*core_length, far, modes)?)
        }
        Surface::Cylinder { core_length } => {
            if plan.bc.get("lower") != BoundaryCondition::Steklov || plan.bc.get("upper") != BoundaryCondition::Steklov {
                return Ok(None);
            }
            expand_modes(&cylinder_model_spectrum(*core_length, modes)?)
        }
    };
    Ok(Some(v.into_iter().take(plan.count).collect()))
}

fn run_level(plan: &Plan, point: &Point, mesh: &SurfaceMesh, out: &mut PointResult) -> CoreResult<Vec<Vec<f64>>> {
    let report = validate_mesh(mesh)?;
    let sys = SteklovSystem::new(mesh, &plan.bc)?;
    let count = plan.count.min(sys.roles.iter().filter(|r| **r == hypsteklov::steklov::DofRole::Steklov).count());
    let res = sys.solve(count)?;
    let mut lvl = LevelResult {
        level: mesh.level,
        h: mesh.mesh_size(),
        dofs: report.dofs,
        spectrum: (0..count)
            .map(|k| SpectrumLine {
                k,
                sigma: res.eigenvalues[k],
                residual: res.residuals[k],
            })
            .collect(),
        bounds: Vec::new(),
        diagnostics: Vec::new(),
    };
    let area = mesh.total_area();
    let area_ref = match &point.surface {
        Surface::Graph(g) => 2.0 * PI * g.euler_characteristic().unsigned_abs() as f64,
        Surface::HalfCollar { core_length } => hypsteklov::Collar::new(*core_length, hypsteklov::CollarKind::Half)?.area(),
        Surface::Cylinder { core_length } => hypsteklov::Collar::new(*core_length, hypsteklov::CollarKind::Full)?.area(),
    };
    lvl.diagnostics.push(DiagnosticLine {
        check: "area",
        subject: "surface".into(),
        value: area,
        reference: Some(area_ref),
        pass: None,
    });
    lvl.diagnostics.push(DiagnosticLine {
        check: "orthogonality",
        subject: "traces".into(),
        value: res.orthogonality_error,
        reference: None,
        pass: None,
    });

    if let Surface::Graph(g) = &point.surface {
        for k in 1..count {
            let r = bound_report(g, k, res.eigenvalues[k], &plan.constants, lvl.h, mesh.level)?;
            if r.upper_bound_holds() == Some(false) {
                out.failures.push(format!(
                    "{} level {}: sigma_{k} = {} exceeds the arctan upper bound {}",
                    out.surface_id,
                    mesh.level,
                    r.sigma_k,
                    r.ub_arctan.unwrap_or(f64::NAN)
                ));
            }
            lvl.bounds.push(r);
        }
        if count > 1 && res.eigenvalues[1] > 0.0 {
            let tt = thick_thin_decomposition(g, g.beta())?;
            let f = &res.nodal[1];
            for (c, _) in &tt.thin_collars {
                let Some(strip) = curve_strip(mesh, *c) else { continue };
                let t = tube_energy_check(mesh, f, strip)?;
                let subject = g.curves()[*c].id.clone();
                if !t.pass {
                    out.failures.push(format!(
                        "{} level {}: tube energy {} below bound {} on {subject}",
                        out.surface_id, mesh.level, t.energy, t.bound
                    ));
                }
                lvl.diagnostics.push(DiagnosticLine {
                    check: "tube_energy",
                    subject,
                    value: t.energy,
                    reference: Some(t.bound),
                    pass: Some(t.pass),
                });
            }
            for comp in 0..tt.components.len() {
                if let Some(o) = oscillation_report(g, mesh, f, res.eigenvalues[1], comp)? {
                    lvl.diagnostics.push(DiagnosticLine {
                        check: "oscillation",
                        subject: format!("component{comp}"),
                        value: o.ratio,
                        reference: None,
                        pass: None,
                    });
                }
            }
        }
    }
    out.levels.push(lvl);
    Ok(res.nodal)
}

/// Run every level of one sweep point. Errors are recorded, not propagated,
/// so that finished levels are still reported.
pub fn run_point(plan: &Plan, point: &Point) -> PointResult {
    let start = Instant::now();
    let mut out = PointResult {
        point: point.clone(),
        surface_id: point.surface.id(),
        levels: Vec::new(),
        reference: None,
        traces: Vec::new(),
        failures: Vec::new(),
        error: None,
        wall_seconds: 0.0,
    };
    let result = (|| -> CoreResult<()> {
        out.reference = model_reference(plan, point)?;
        let mut mesh = base_mesh(point, plan.min_angle)?;
        for level in 0..=plan.refinements {
            if level > 0 {
                mesh = refine(&mesh);
            }
            let nodal = match run_level(plan, point, &mesh, &mut out) {
                Ok(n) => n,
                Err(e @ hypsteklov::Error::Structural(_)) => {
                    out.failures.push(format!("{} level {level}: mesh invariant violated: {e}", out.surface_id));
                    return Err(e);
                }
                Err(e) => return Err(e),
            };
            if level == plan.refinements && !plan.traces.is_empty() {
                out.traces = trace_rows(&mesh, &nodal, &plan.traces)?;
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        out.error = Some(e.to_string());
    }
    out.wall_seconds = start.elapsed().as_secs_f64();
    out
}

/// Options given on the command line.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub workers: usize,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub directory: PathBuf,
    pub points: Vec<PointResult>,
    pub gate_error: f64,
    pub failures: Vec<String>,
    pub errors: Vec<String>,
}

impl RunOutcome {
    /// 0 on success, 1 when a hard assertion failed, 2 on runtime errors.
    pub fn exit_code(&self) -> i32 {
        if !self.errors.is_empty() {
            2
        } else if !self.failures.is_empty() {
            1
        } else {
            0
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] hypsteklov::Error),
    #[error("closed-form gate failed: {0}")]
    Gate(String),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// Write `bytes` to `path` through a temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let io = |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, bytes).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn csv_bytes(f: impl FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        f(&mut w).expect("writing csv to memory");
        w.flush().expect("flushing csv to memory");
    }
    buf
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn sweep_cols(p: &PointResult) -> [String; 2] {
    match &p.point.sweep {
        Some((name, v)) => [name.clone(), v.to_string()],
        None => [String::new(), String::new()],
    }
}

fn spectra_csv(points: &[&PointResult]) -> Vec<u8> {
    csv_bytes(|w| {
        w.write_record(["problem_id", "h", "k", "sigma_k", "residual", "level", "point", "sweep_parameter", "sweep_value"])?;
        for p in points {
            let [sp, sv] = sweep_cols(p);
            for l in &p.levels {
                for s in &l.spectrum {
                    w.write_record([
                        p.surface_id.clone(),
                        l.h.to_string(),
                        s.k.to_string(),
                        s.sigma.to_string(),
                        s.residual.to_string(),
                        l.level.to_string(),
                        p.point.name(),
                        sp.clone(),
                        sv.clone(),
                    ])?;
                }
            }
        }
        Ok(())
    })
}

fn convergence_csv(points: &[&PointResult]) -> Vec<u8> {
    csv_bytes(|w| {
        w.write_record([
            "problem_id", "point", "k", "level", "h", "dofs", "sigma_k", "delta", "order", "reference", "rel_error",
        ])?;
        for p in points {
            let count = p.levels.iter().map(|l| l.spectrum.len()).min().unwrap_or(0);
            for k in 0..count {
                let mut prev_delta: Option<f64> = None;
                for (i, l) in p.levels.iter().enumerate() {
                    let sigma = l.spectrum[k].sigma;
                    let delta = (i > 0).then(|| (sigma - p.levels[i - 1].spectrum[k].sigma).abs());
                    let order = match (prev_delta, delta) {
                        (Some(a), Some(b)) if a > 0.0 && b > 0.0 => Some((a / b).log2()),
                        _ => None,
                    };
                    let reference = p.reference.as_ref().and_then(|r| r.get(k).copied());
                    let rel = reference.map(|r| (sigma - r).abs() / r.abs().max(1e-300));
                    let rel = rel.filter(|_| reference != Some(0.0));
                    w.write_record([
                        p.surface_id.clone(),
                        p.point.name(),
                        k.to_string(),
                        l.level.to_string(),
                        l.h.to_string(),
                        l.dofs.to_string(),
                        sigma.to_string(),
                        opt(delta),
                        opt(order),
                        opt(reference),
                        opt(rel),
                    ])?;
                    prev_delta = delta;
                }
            }
        }
        Ok(())
    })
}

fn diagnostics_csv(points: &[&PointResult]) -> Vec<u8> {
    csv_bytes(|w| {
        w.write_record(["problem_id", "point", "level", "h", "check", "subject", "value", "reference", "pass"])?;
        for p in points {
            for l in &p.levels {
                for d in &l.diagnostics {
                    w.write_record([
                        p.surface_id.clone(),
                        p.point.name(),
                        l.level.to_string(),
                        l.h.to_string(),
                        d.check.to_string(),
                        d.subject.clone(),
                        d.value.to_string(),
                        opt(d.reference),
                        d.pass.map(|b| b.to_string()).unwrap_or_default(),
                    ])?;
                }
            }
        }
        Ok(())
    })
}

fn traces_csv(points: &[&PointResult]) -> Vec<u8> {
    csv_bytes(|w| {
        w.write_record(["problem_id", "point", "k", "component", "arclength", "value"])?;
        for p in points {
            for t in &p.traces {
                w.write_record([
                    p.surface_id.clone(),
                    p.point.name(),
                    t.k.to_string(),
                    t.component.clone(),
                    t.arclength.to_string(),
                    t.value.to_string(),
                ])?;
            }
        }
        Ok(())
    })
}

fn bounds_bytes(points: &[&PointResult]) -> Result<Vec<u8>, RunError> {
    let rows: Vec<BoundReport> = points.iter().flat_map(|p| p.levels.iter().flat_map(|l| l.bounds.clone())).collect();
    let mut buf = Vec::new();
    write_bounds_csv(&mut buf, &rows)?;
    Ok(buf)
}

fn write_reports(dir: &Path, points: &[&PointResult], with_traces: bool) -> Result<(), RunError> {
    write_atomic(&dir.join("spectra.csv"), &spectra_csv(points))?;
    write_atomic(&dir.join("bounds.csv"), &bounds_bytes(points)?)?;
    write_atomic(&dir.join("convergence.csv"), &convergence_csv(points))?;
    write_atomic(&dir.join("diagnostics.csv"), &diagnostics_csv(points))?;
    if with_traces {
        write_atomic(&dir.join("traces.csv"), &traces_csv(points))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Manifest {
    run: ManifestRun,
    points: Vec<ManifestPoint>,
    config: ManifestConfig,
}

#[derive(Serialize)]
struct ManifestRun {
    id: String,
    tool: String,
    version: String,
    started_unix: u64,
    wall_seconds: f64,
    workers: usize,
    gate_samples: usize,
    gate_max_error: f64,
    status: String,
    failures: Vec<String>,
    errors: Vec<String>,
}

#[derive(Serialize)]
struct ManifestPoint {
    name: String,
    surface_id: String,
    sweep_parameter: String,
    sweep_value: String,
    h: f64,
    levels: u32,
    wall_seconds: f64,
    error: String,
}

#[derive(Serialize)]
struct ManifestConfig {
    text: String,
}

/// Output directory: command line first, then config, then `out/<id>`.
pub fn output_dir(plan: &Plan, opts: &RunOptions) -> PathBuf {
    opts.out
        .clone()
        .or_else(|| plan.output.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&plan.id))
}

/// Run the closed-form gate, then every sweep point on up to `workers`
/// threads, and write per-point and aggregated reports plus a manifest.
pub fn run_experiment(plan: &Plan, opts: &RunOptions) -> Result<RunOutcome, RunError> {
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let samples = gate_samples(20);
    let gate_error =
        verify_halfcollar_closed_forms(&samples, GATE_TOLERANCE).map_err(|e| RunError::Gate(e.to_string()))?;
    let dir = output_dir(plan, opts);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| RunError::Pool(e.to_string()))?;
    let with_traces = !plan.traces.is_empty();
    let points: Vec<PointResult> = pool.install(|| {
        plan.points
            .par_iter()
            .map(|p| {
                let r = run_point(plan, p);
                let point_dir = dir.join("points").join(p.name());
                let write = write_reports(&point_dir, &[&r], with_traces);
                (r, write)
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .map(|(r, write)| write.map(|_| r))
    .collect::<Result<_, _>>()?;
    let refs: Vec<&PointResult> = points.iter().collect();
    write_reports(&dir, &refs, with_traces)?;

    let failures: Vec<String> = points.iter().flat_map(|p| p.failures.clone()).collect();
    let errors: Vec<String> = points
        .iter()
        .filter_map(|p| p.error.as_ref().map(|e| format!("{}: {e}", p.point.name())))
        .collect();
    let outcome = RunOutcome {
        directory: dir.clone(),
        points,
        gate_error,
        failures,
        errors,
    };
    let manifest = Manifest {
        run: ManifestRun {
            id: plan.id.clone(),
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            started_unix: started,
            wall_seconds: clock.elapsed().as_secs_f64(),
            workers: opts.workers.max(1),
            gate_samples: samples.len(),
            gate_max_error: gate_error,
            status: match outcome.exit_code() {
                0 => "ok",
                1 => "assertion-failed",
                _ => "error",
            }
            .into(),
            failures: outcome.failures.clone(),
            errors: outcome.errors.clone(),
        },
        points: outcome
            .points
            .iter()
            .map(|p| {
                let [sp, sv] = sweep_cols(p);
                ManifestPoint {
                    name: p.point.name(),
                    surface_id: p.surface_id.clone(),
                    sweep_parameter: sp,
                    sweep_value: sv,
                    h: p.point.h,
                    levels: p.levels.len() as u32,
                    wall_seconds: p.wall_seconds,
                    error: p.error.clone().unwrap_or_default(),
                }
            })
            .collect(),
        config: ManifestConfig {
            text: plan.source.clone(),
        },
    };
    let text = toml::to_string(&manifest).expect("manifest serializes");
    write_atomic(&dir.join("manifest.toml"), text.as_bytes())?;
    Ok(outcome)
}

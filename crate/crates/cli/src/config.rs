//! Experiment configuration: TOML schema, validation and resolution into a
//! list of sweep points. The schema is documented in `docs/config.md`.

use hypsteklov::bounds::BoundConstants;
use hypsteklov::topology::{four_holed_sphere, sphere_chain, PantsGraph, MAX_ENUMERATED_CURVES};
use hypsteklov::{BoundaryCondition, BoundaryConditionMap, Signature};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

/// Most refinement levels a config may request.
pub const MAX_REFINEMENTS: u32 = 5;
pub const MIN_LENGTH: f64 = 1e-6;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    pub surface: SurfaceConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    pub mesh: MeshConfig,
    pub solve: SolveConfig,
    #[serde(default)]
    pub bounds: BoundsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    /// `sphere-chain`, `four-holed-sphere`, `explicit`, `half-collar` or `cylinder`.
    pub generator: String,
    #[serde(default)]
    pub boundary_lengths: Vec<f64>,
    #[serde(default)]
    pub interior_lengths: Vec<f64>,
    #[serde(default)]
    pub core_length: Option<f64>,
    #[serde(default)]
    pub boundaries: Vec<NamedLength>,
    #[serde(default)]
    pub curves: Vec<NamedLength>,
    #[serde(default)]
    pub cusps: Vec<String>,
    #[serde(default)]
    pub pants: Vec<[String; 3]>,
    /// Declared `[genus, boundaries, cusps]`, checked against the graph.
    #[serde(default)]
    pub signature: Option<[u32; 3]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedLength {
    pub name: String,
    pub length: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// A curve id, a boundary label, `core_length` for models, or `h`.
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub h: f64,
    #[serde(default)]
    pub refinements: u32,
    #[serde(default = "default_angle")]
    pub min_angle: f64,
}

fn default_angle() -> f64 {
    25.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub count: usize,
    #[serde(default)]
    pub boundary_conditions: BTreeMap<String, String>,
    /// Eigenfunction indices whose boundary traces are exported at the finest level.
    #[serde(default)]
    pub traces: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default = "one", rename = "C")]
    pub main: f64,
    #[serde(default = "one", rename = "C1")]
    pub perrin: f64,
    #[serde(default = "one")]
    pub c_kar: f64,
    #[serde(default = "one")]
    pub c_exp: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            main: 1.0,
            perrin: 1.0,
            c_kar: 1.0,
            c_exp: 1.0,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub directory: Option<PathBuf>,
}

/// One validation finding, located by a dotted field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn diag(path: impl Into<String>, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        path: path.into(),
        message: message.into(),
    }
}

/// What a sweep point meshes.
#[derive(Debug, Clone)]
pub enum Surface {
    Graph(PantsGraph),
    HalfCollar { core_length: f64 },
    Cylinder { core_length: f64 },
}

impl Surface {
    pub fn id(&self) -> String {
        match self {
            Surface::Graph(g) => g.id().to_string(),
            Surface::HalfCollar { core_length } => format!("half-collar-{core_length}"),
            Surface::Cylinder { core_length } => format!("cylinder-{core_length}"),
        }
    }

    pub fn boundary_labels(&self) -> Vec<String> {
        match self {
            Surface::Graph(g) => g.boundaries().iter().map(|b| b.label.clone()).collect(),
            Surface::HalfCollar { .. } => vec!["core".into(), "far".into()],
            Surface::Cylinder { .. } => vec!["lower".into(), "upper".into()],
        }
    }
}

/// A fully resolved sweep point.
#[derive(Debug, Clone)]
pub struct Point {
    pub index: usize,
    pub surface: Surface,
    pub h: f64,
    /// Swept parameter and its value, if the config sweeps.
    pub sweep: Option<(String, f64)>,
}

impl Point {
    pub fn name(&self) -> String {
        format!("p{:02}", self.index)
    }
}

/// A validated config ready to run.
#[derive(Debug, Clone)]
pub struct Plan {
    pub id: String,
    pub points: Vec<Point>,
    pub refinements: u32,
    pub min_angle: f64,
    pub count: usize,
    pub bc: BoundaryConditionMap,
    pub traces: Vec<usize>,
    pub constants: BoundConstants,
    pub output: Option<PathBuf>,
    /// Config text as read, echoed into the manifest.
    pub source: String,
}

fn check_length(out: &mut Vec<Diagnostic>, path: &str, v: f64) {
    if !(v.is_finite() && v >= MIN_LENGTH) {
        out.push(diag(path, format!("length must be finite and at least {MIN_LENGTH}, got {v}")));
    }
}

fn base_surface(s: &SurfaceConfig, out: &mut Vec<Diagnostic>) -> Option<Surface> {
    let before = out.len();
    for (i, &v) in s.boundary_lengths.iter().enumerate() {
        check_length(out, &format!("surface.boundary_lengths[{i}]"), v);
    }
    for (i, &v) in s.interior_lengths.iter().enumerate() {
        check_length(out, &format!("surface.interior_lengths[{i}]"), v);
    }
    for (i, b) in s.boundaries.iter().enumerate() {
        check_length(out, &format!("surface.boundaries[{i}].length"), b.length);
    }
    for (i, c) in s.curves.iter().enumerate() {
        check_length(out, &format!("surface.curves[{i}].length"), c.length);
    }
    if let Some(v) = s.core_length {
        check_length(out, "surface.core_length", v);
    }
    if out.len() > before {
        return None;
    }
    let surface = match s.generator.as_str() {
        "sphere-chain" => sphere_chain(&s.boundary_lengths, &s.interior_lengths)
            .map(Surface::Graph)
            .map_err(|e| diag("surface", e.to_string())),
        "four-holed-sphere" => match (<[f64; 4]>::try_from(s.boundary_lengths.as_slice()), s.interior_lengths.as_slice()) {
            (Ok(b), [l]) => four_holed_sphere(b, *l)
                .map(Surface::Graph)
                .map_err(|e| diag("surface", e.to_string())),
            (Err(_), _) => Err(diag("surface.boundary_lengths", "four-holed-sphere needs exactly 4 boundary lengths")),
            _ => Err(diag("surface.interior_lengths", "four-holed-sphere needs exactly 1 interior length")),
        },
        "explicit" => {
            let b: Vec<(&str, f64)> = s.boundaries.iter().map(|x| (x.name.as_str(), x.length)).collect();
            let c: Vec<(&str, f64)> = s.curves.iter().map(|x| (x.name.as_str(), x.length)).collect();
            let p: Vec<&str> = s.cusps.iter().map(String::as_str).collect();
            let pants: Vec<[&str; 3]> = s.pants.iter().map(|t| [t[0].as_str(), t[1].as_str(), t[2].as_str()]).collect();
            PantsGraph::build("explicit", &b, &c, &p, &pants)
                .map(Surface::Graph)
                .map_err(|e| diag("surface.pants", e.to_string()))
        }
        "half-collar" | "cylinder" => match s.core_length {
            None => Err(diag("surface.core_length", format!("{} needs a core length", s.generator))),
            Some(core_length) if s.generator == "half-collar" => Ok(Surface::HalfCollar { core_length }),
            Some(core_length) => Ok(Surface::Cylinder { core_length }),
        },
        other => Err(diag(
            "surface.generator",
            format!("unknown generator {other:?}; expected sphere-chain, four-holed-sphere, explicit, half-collar or cylinder"),
        )),
    };
    match surface {
        Ok(Surface::Graph(g)) => {
            if let Some([genus, b, p]) = s.signature {
                let declared = Signature::new(genus, b, p);
                if declared != g.signature() {
                    out.push(diag(
                        "surface.signature",
                        format!("declared {declared} but the pants graph has signature {}", g.signature()),
                    ));
                }
            }
            if !g.cusps().is_empty() {
                out.push(diag("surface.cusps", "the finite element pipeline needs a compact surface"));
            }
            if g.curves().len() > MAX_ENUMERATED_CURVES {
                out.push(diag(
                    "surface.curves",
                    format!("{} interior curves exceed the enumeration limit {MAX_ENUMERATED_CURVES}", g.curves().len()),
                ));
            }
            Some(Surface::Graph(g))
        }
        Ok(s) => Some(s),
        Err(d) => {
            out.push(d);
            None
        }
    }
}

fn with_value(surface: &Surface, parameter: &str, value: f64) -> Result<Surface, String> {
    match surface {
        Surface::Graph(g) => g.with_length(parameter, value).map(Surface::Graph).map_err(|e| e.to_string()),
        Surface::HalfCollar { .. } if parameter == "core_length" => Ok(Surface::HalfCollar { core_length: value }),
        Surface::Cylinder { .. } if parameter == "core_length" => Ok(Surface::Cylinder { core_length: value }),
        _ => Err(format!("model surfaces only sweep core_length or h, not {parameter:?}")),
    }
}

fn parse_bc(s: &str) -> Option<BoundaryCondition> {
    match s {
        "steklov" => Some(BoundaryCondition::Steklov),
        "neumann" => Some(BoundaryCondition::Neumann),
        "dirichlet" => Some(BoundaryCondition::Dirichlet),
        _ => None,
    }
}

/// Validate a parsed config. Returns the plan when there are no diagnostics.
pub fn resolve(cfg: &ExperimentConfig, source: &str) -> Result<Plan, Vec<Diagnostic>> {
    let mut out = Vec::new();
    if cfg.id.trim().is_empty() || cfg.id.contains(['/', '\\']) {
        out.push(diag("id", "id must be nonempty and free of path separators"));
    }
    if !(cfg.mesh.h > 1e-3 && cfg.mesh.h < 1.0) {
        out.push(diag("mesh.h", format!("mesh size must lie in (0.001, 1), got {}", cfg.mesh.h)));
    }
    if cfg.mesh.refinements > MAX_REFINEMENTS {
        out.push(diag(
            "mesh.refinements",
            format!("at most {MAX_REFINEMENTS} refinements, got {}", cfg.mesh.refinements),
        ));
    }
    if !(cfg.mesh.min_angle > 0.0 && cfg.mesh.min_angle <= 30.0) {
        out.push(diag("mesh.min_angle", format!("angle must lie in (0, 30] degrees, got {}", cfg.mesh.min_angle)));
    }
    if cfg.solve.count == 0 {
        out.push(diag("solve.count", "need at least one eigenvalue"));
    }
    for (i, &t) in cfg.solve.traces.iter().enumerate() {
        if t >= cfg.solve.count {
            out.push(diag(format!("solve.traces[{i}]"), format!("index {t} is not below solve.count")));
        }
    }
    for (name, v) in [
        ("bounds.C", cfg.bounds.main),
        ("bounds.C1", cfg.bounds.perrin),
        ("bounds.c_kar", cfg.bounds.c_kar),
        ("bounds.c_exp", cfg.bounds.c_exp),
    ] {
        if !(v.is_finite() && v > 0.0) {
            out.push(diag(name, format!("constant must be positive, got {v}")));
        }
    }
    let base = base_surface(&cfg.surface, &mut out);

    let mut bc = BoundaryConditionMap::all_steklov();
    let labels = base.as_ref().map(Surface::boundary_labels).unwrap_or_default();
    for (label, kind) in &cfg.solve.boundary_conditions {
        let path = format!("solve.boundary_conditions.{label}");
        match parse_bc(kind) {
            None => out.push(diag(&path, format!("unknown condition {kind:?}; expected steklov, neumann or dirichlet"))),
            Some(c) => bc = bc.with(label.clone(), c),
        }
        if base.is_some() && !labels.contains(label) {
            out.push(diag(&path, format!("no boundary labelled {label:?}")));
        }
    }
    if base.is_some() && labels.iter().all(|l| bc.get(l) != BoundaryCondition::Steklov) {
        out.push(diag("solve.boundary_conditions", "at least one boundary must be Steklov"));
    }

    let mut points = Vec::new();
    if let Some(base) = &base {
        match &cfg.sweep {
            None => points.push(Point {
                index: 0,
                surface: base.clone(),
                h: cfg.mesh.h,
                sweep: None,
            }),
            Some(sw) => {
                if sw.values.is_empty() {
                    out.push(diag("sweep.values", "sweep needs at least one value"));
                }
                for (i, &v) in sw.values.iter().enumerate() {
                    let path = format!("sweep.values[{i}]");
                    if !(v.is_finite() && v > 0.0) {
                        out.push(diag(&path, format!("sweep values must be positive, got {v}")));
                        continue;
                    }
                    if sw.parameter == "h" {
                        if !(v > 1e-3 && v < 1.0) {
                            out.push(diag(&path, format!("mesh size must lie in (0.001, 1), got {v}")));
                        }
                        points.push(Point {
                            index: i,
                            surface: base.clone(),
                            h: v,
                            sweep: Some((sw.parameter.clone(), v)),
                        });
                        continue;
                    }
                    match with_value(base, &sw.parameter, v) {
                        Ok(Surface::Graph(g)) => {
                            let id = format!("{}@{}={v}", g.id(), sw.parameter);
                            points.push(Point {
                                index: i,
                                surface: Surface::Graph(g.with_id(id)),
                                h: cfg.mesh.h,
                                sweep: Some((sw.parameter.clone(), v)),
                            })
                        }
                        Ok(surface) => points.push(Point {
                            index: i,
                            surface,
                            h: cfg.mesh.h,
                            sweep: Some((sw.parameter.clone(), v)),
                        }),
                        Err(e) => {
                            out.push(diag("sweep.parameter", e));
                            break;
                        }
                    }
                }
            }
        }
    }
    if !out.is_empty() {
        return Err(out);
    }
    Ok(Plan {
        id: cfg.id.clone(),
        points,
        refinements: cfg.mesh.refinements,
        min_angle: cfg.mesh.min_angle,
        count: cfg.solve.count,
        bc,
        traces: cfg.solve.traces.clone(),
        constants: BoundConstants {
            main: cfg.bounds.main,
            perrin: cfg.bounds.perrin,
            kar: cfg.bounds.c_kar,
            exp: cfg.bounds.c_exp,
        },
        output: cfg.output.directory.clone(),
        source: source.to_string(),
    })
}

/// Parse and validate config text.
pub fn parse_plan(text: &str) -> Result<Plan, Vec<Diagnostic>> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
        let path = match e.span() {
            Some(span) => {
                let line = text[..span.start.min(text.len())].matches('\n').count() + 1;
                format!("line {line}")
            }
            None => "config".to_string(),
        };
        vec![diag(path, e.message().to_string())]
    })?;
    resolve(&cfg, text)
}

/// Full validation of a config file without running it. An empty list means
/// the config is runnable.
pub fn validate_config(path: &Path) -> std::io::Result<Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path)?;
    Ok(match parse_plan(&text) {
        Ok(_) => Vec::new(),
        Err(d) => d,
    })
}

//! Plain-text mesh format. Floats are written in shortest round-trip form, so
//! `import_mesh(export_mesh(m)) == m` bit for bit.
//!
//! ```text
//! hypsteklov-mesh 1
//! id <rest of line>
//! h <f64>
//! level <u32>
//! euler <i64>
//! charts <n>
//!   fermi <core_length>
//!   disk <scale> <rot re> <rot im> <center re> <center im> <mirrored 0|1> <frames> <9 floats per frame>
//! labels <n>
//!   <label>
//! vertices <n>
//!   <chart> <x> <y>
//! triangles <n>
//!   <a> <b> <c> C <curve> | H <boundary> | T <pants> <hexagon> | M
//! boundary <n>
//!   <a> <b> <label>
//! glued <n>
//!   <a1> <b1> <a2> <b2>
//! curved <n>
//!   <a> <b> G | <a> <b> Y <frame>
//! strips <n>
//!   <chart> C <curve> | B <boundary> | M  <tau_min> <tau_max>
//! ```

use super::{
    BoundaryEdge, Chart, CurvedEdge, DiskChart, EdgeCurve, Region, Strip, StripCore, SurfaceMesh,
    Vertex,
};
use crate::error::{Error, Result};
use crate::hypgeom::hyperboloid::{Frame, Lorentz};
use num_complex::Complex64;
use std::fmt::Write;
use std::str::FromStr;

const MAGIC: &str = "hypsteklov-mesh 1";

pub fn export_mesh(mesh: &SurfaceMesh) -> String {
    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, "{MAGIC}");
    let _ = writeln!(w, "id {}", mesh.id);
    let _ = writeln!(w, "h {:e}", mesh.h);
    let _ = writeln!(w, "level {}", mesh.level);
    let _ = writeln!(w, "euler {}", mesh.euler_characteristic);
    let _ = writeln!(w, "charts {}", mesh.charts.len());
    for c in &mesh.charts {
        match c {
            Chart::Fermi { core_length } => {
                let _ = writeln!(w, "fermi {core_length:e}");
            }
            Chart::Disk(d) => {
                let _ = write!(
                    w,
                    "disk {:e} {:e} {:e} {:e} {:e} {} {}",
                    d.scale,
                    d.rotation.re,
                    d.rotation.im,
                    d.center.re,
                    d.center.im,
                    u8::from(d.mirrored),
                    d.frames.len()
                );
                for f in &d.frames {
                    for v in [f.point, f.tangent, f.normal] {
                        for x in v.0 {
                            let _ = write!(w, " {x:e}");
                        }
                    }
                }
                let _ = writeln!(w);
            }
        }
    }
    let _ = writeln!(w, "labels {}", mesh.boundary_labels.len());
    for l in &mesh.boundary_labels {
        let _ = writeln!(w, "{l}");
    }
    let _ = writeln!(w, "vertices {}", mesh.vertices.len());
    for v in &mesh.vertices {
        let _ = writeln!(w, "{} {:e} {:e}", v.chart, v.pos[0], v.pos[1]);
    }
    let _ = writeln!(w, "triangles {}", mesh.triangles.len());
    for (t, r) in mesh.triangles.iter().zip(&mesh.regions) {
        let _ = write!(w, "{} {} {} ", t[0], t[1], t[2]);
        let _ = match r {
            Region::Collar(c) => writeln!(w, "C {c}"),
            Region::HalfCollar(b) => writeln!(w, "H {b}"),
            Region::Thick { pants, hexagon } => writeln!(w, "T {pants} {hexagon}"),
            Region::Model => writeln!(w, "M"),
        };
    }
    let _ = writeln!(w, "boundary {}", mesh.boundary_edges.len());
    for e in &mesh.boundary_edges {
        let _ = writeln!(w, "{} {} {}", e.v[0], e.v[1], e.label);
    }
    let _ = writeln!(w, "glued {}", mesh.glued_edges.len());
    for [p, q] in &mesh.glued_edges {
        let _ = writeln!(w, "{} {} {} {}", p[0], p[1], q[0], q[1]);
    }
    let _ = writeln!(w, "curved {}", mesh.curved_edges.len());
    for e in &mesh.curved_edges {
        let _ = match e.curve {
            EdgeCurve::Geodesic => writeln!(w, "{} {} G", e.v[0], e.v[1]),
            EdgeCurve::Hypercycle(f) => writeln!(w, "{} {} Y {f}", e.v[0], e.v[1]),
        };
    }
    let _ = writeln!(w, "strips {}", mesh.strips.len());
    for st in &mesh.strips {
        let core = match st.core {
            StripCore::Curve(c) => format!("C {c}"),
            StripCore::Boundary(b) => format!("B {b}"),
            StripCore::Model => "M".to_string(),
        };
        let _ = writeln!(w, "{} {core} {:e} {:e}", st.chart, st.tau_min, st.tau_max);
    }
    s
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str> {
        match self.inner.next() {
            Some((i, l)) => {
                self.line = i + 1;
                Ok(l)
            }
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    /// A line `<key> <rest>`; returns `rest`.
    fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let l = self.next()?;
        match l.split_once(' ') {
            Some((k, rest)) if k == key => Ok(rest),
            _ => Err(self.err(format!("expected `{key}`"))),
        }
    }

    fn count(&mut self, key: &str) -> Result<usize> {
        let rest = self.keyed(key)?;
        rest.trim().parse().map_err(|_| self.err(format!("bad count for `{key}`")))
    }
}

struct Tokens<'a, 'b> {
    it: std::str::SplitWhitespace<'a>,
    lines: &'b Lines<'a>,
}

impl Tokens<'_, '_> {
    fn next<T: FromStr>(&mut self) -> Result<T> {
        let tok = self.it.next().ok_or_else(|| self.lines.err("missing field"))?;
        tok.parse().map_err(|_| self.lines.err(format!("cannot parse `{tok}`")))
    }

    fn word(&mut self) -> Result<&str> {
        self.it.next().ok_or_else(|| self.lines.err("missing field"))
    }

    fn end(&mut self) -> Result<()> {
        match self.it.next() {
            None => Ok(()),
            Some(t) => Err(self.lines.err(format!("trailing field `{t}`"))),
        }
    }
}

pub fn import_mesh(text: &str) -> Result<SurfaceMesh> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    if lines.next()? != MAGIC {
        return Err(lines.err("not a hypsteklov mesh"));
    }
    let id = lines.keyed("id")?.to_string();
    let h: f64 = lines.keyed("h")?.parse().map_err(|_| lines.err("bad h"))?;
    let level: u32 = lines.keyed("level")?.parse().map_err(|_| lines.err("bad level"))?;
    let euler: i64 = lines.keyed("euler")?.parse().map_err(|_| lines.err("bad euler"))?;

    macro_rules! tokens {
        ($l:expr) => {
            Tokens {
                it: $l.split_whitespace(),
                lines: &lines,
            }
        };
    }

    let n = lines.count("charts")?;
    let mut charts = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lines.next()?;
        let mut t = tokens!(l);
        let chart = match t.word()? {
            "fermi" => Chart::Fermi { core_length: t.next()? },
            "disk" => {
                let scale = t.next()?;
                let rotation = Complex64::new(t.next()?, t.next()?);
                let center = Complex64::new(t.next()?, t.next()?);
                let mirrored = t.next::<u8>()? == 1;
                let nf: usize = t.next()?;
                let mut frames = Vec::with_capacity(nf);
                for _ in 0..nf {
                    let mut v = [Lorentz([0.0; 3]); 3];
                    for x in &mut v {
                        *x = Lorentz([t.next()?, t.next()?, t.next()?]);
                    }
                    frames.push(Frame {
                        point: v[0],
                        tangent: v[1],
                        normal: v[2],
                    });
                }
                Chart::Disk(DiskChart {
                    scale,
                    rotation,
                    center,
                    mirrored,
                    frames,
                })
            }
            other => return Err(lines.err(format!("unknown chart kind `{other}`"))),
        };
        t.end()?;
        charts.push(chart);
    }

    let n = lines.count("labels")?;
    let mut boundary_labels = Vec::with_capacity(n);
    for _ in 0..n {
        boundary_labels.push(lines.next()?.to_string());
    }

    let n = lines.count("vertices")?;
    let mut vertices = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lines.next()?;
        let mut t = tokens!(l);
        let v = Vertex {
            chart: t.next()?,
            pos: [t.next()?, t.next()?],
        };
        t.end()?;
        if v.chart as usize >= charts.len() {
            return Err(lines.err("vertex chart out of range"));
        }
        vertices.push(v);
    }
    let nv = vertices.len() as u32;
    let check_v = |v: u32, lines: &Lines| {
        if v < nv {
            Ok(v)
        } else {
            Err(lines.err(format!("vertex index {v} out of range")))
        }
    };

    let n = lines.count("triangles")?;
    let mut triangles = Vec::with_capacity(n);
    let mut regions = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lines.next()?;
        let mut t = tokens!(l);
        let tri = [t.next()?, t.next()?, t.next()?];
        let region = match t.word()? {
            "C" => Region::Collar(t.next()?),
            "H" => Region::HalfCollar(t.next()?),
            "T" => Region::Thick {
                pants: t.next()?,
                hexagon: t.next()?,
            },
            "M" => Region::Model,
            other => return Err(lines.err(format!("unknown region `{other}`"))),
        };
        t.end()?;
        for v in tri {
            check_v(v, &lines)?;
        }
        triangles.push(tri);
        regions.push(region);
    }

    let n = lines.count("boundary")?;
    let mut boundary_edges = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lines.next()?;
        let mut t = tokens!(l);
        let e = BoundaryEdge {
            v: [t.next()?, t.next()?],
            label: t.next()?,
        };
        t.end()?;
        check_v(e.v[0], &lines)?;
        check_v(e.v[1], &lines)?;
        if e.label as usize >= boundary_labels.len() {
            return Err(lines.err("boundary label out of range"));
        }
        boundary_edges.push(e);
    }

    let n = lines.count("glued")?;
    let mut glued_edges = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lines.next()?;
        let mut t = tokens!(l);
        let g = [[t.next()?, t.next()?], [t.next()?, t.next()?]];
        t.end()?;
        for v in g.iter().flatten() {
            check_v(*v, &lines)?;
        }
        glued_edges.push(g);
    }

    let n = lines.count("curved")?;
    let mut curved_edges = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lines.next()?;
        let mut t = tokens!(l);
        let v = [t.next()?, t.next()?];
        let curve = match t.word()? {
            "G" => EdgeCurve::Geodesic,
            "Y" => EdgeCurve::Hypercycle(t.next()?),
            other => return Err(lines.err(format!("unknown curve `{other}`"))),
        };
        t.end()?;
        check_v(v[0], &lines)?;
        check_v(v[1], &lines)?;
        curved_edges.push(CurvedEdge { v, curve });
    }

    let n = lines.count("strips")?;
    let mut strips = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lines.next()?;
        let mut t = tokens!(l);
        let chart = t.next()?;
        let core = match t.word()? {
            "C" => StripCore::Curve(t.next()?),
            "B" => StripCore::Boundary(t.next()?),
            "M" => StripCore::Model,
            other => return Err(lines.err(format!("unknown strip core `{other}`"))),
        };
        let strip = Strip {
            chart,
            core,
            tau_min: t.next()?,
            tau_max: t.next()?,
        };
        t.end()?;
        strips.push(strip);
    }
    if let Some((i, l)) = lines.inner.next() {
        if !l.trim().is_empty() {
            return Err(Error::Parse {
                line: i + 1,
                msg: "trailing content".into(),
            });
        }
    }
    Ok(SurfaceMesh {
        id,
        charts,
        vertices,
        triangles,
        regions,
        boundary_labels,
        boundary_edges,
        glued_edges,
        curved_edges,
        strips,
        euler_characteristic: euler,
        h,
        level,
    })
}

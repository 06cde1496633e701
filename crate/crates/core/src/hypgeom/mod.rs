//! Hyperbolic trigonometry: collars, right-angled hexagons and pants.

pub mod hyperboloid;
mod thick_thin;

pub use thick_thin::{thick_thin_decomposition, ThickComponent, ThickThin};

use crate::error::{domain, Error, Result};
use hyperboloid::Frame;

/// Width of the standard collar around a simple closed geodesic of length `len`.
pub fn tube_width(len: f64) -> Result<f64> {
    if !(len.is_finite() && len > 0.0) {
        return Err(domain(format!("collar needs a positive finite length, got {len}")));
    }
    Ok((1.0 / (len / 2.0).sinh()).asinh())
}

/// Thin-part threshold: `min(arsinh 1, tube_width(beta))`.
pub fn epsilon_circ(beta: f64) -> Result<f64> {
    Ok(1f64.asinh().min(tube_width(beta)?))
}

/// Gudermannian `arctan(sinh t)`: the conformal coordinate of a collar.
pub fn gudermannian(t: f64) -> f64 {
    t.sinh().atan()
}

/// Inverse of [`gudermannian`] on `(-pi/2, pi/2)`.
pub fn inverse_gudermannian(tau: f64) -> f64 {
    tau.tan().asinh()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollarKind {
    /// `[-w, w] x S^1` around an interior geodesic.
    Full,
    /// `[0, w] x S^1` on one side of a boundary geodesic.
    Half,
}

/// The standard collar of a simple closed geodesic, metric `dt^2 + cosh^2 t ds^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Collar {
    pub core_length: f64,
    pub width: f64,
    pub kind: CollarKind,
}

impl Collar {
    pub fn new(core_length: f64, kind: CollarKind) -> Result<Collar> {
        Ok(Collar {
            core_length,
            width: tube_width(core_length)?,
            kind,
        })
    }

    /// Width in the conformal coordinate `tau = gd(t)`; equals `arctan(1/sinh(len/2))`.
    pub fn conformal_width(&self) -> f64 {
        gudermannian(self.width)
    }

    /// Length of each boundary circle at `|t| = width`.
    pub fn rim_length(&self) -> f64 {
        self.core_length * self.width.cosh()
    }

    pub fn area(&self) -> f64 {
        let half = self.core_length * self.width.sinh();
        match self.kind {
            CollarKind::Full => 2.0 * half,
            CollarKind::Half => half,
        }
    }
}

/// Length of the side opposite `x` in a right-angled hexagon whose other two
/// alternating sides are `y` and `z`.
pub fn opposite_side(x: f64, y: f64, z: f64) -> f64 {
    ((x.cosh() + y.cosh() * z.cosh()) / (y.sinh() * z.sinh())).acosh()
}

/// A right-angled hexagon traversed counterclockwise.
///
/// Sides are stored in the order `a, c', b, a', c, b'` where `x'` is the side
/// opposite `x`. `frames[i]` is the geodesic frame at the start of side `i`
/// with the interior on the left.
#[derive(Debug, Clone, PartialEq)]
pub struct Hexagon {
    pub sides: [f64; 6],
    pub frames: [Frame; 6],
}

impl Hexagon {
    /// The alternating sides `(a, b, c)`.
    pub fn alternating(&self) -> [f64; 3] {
        [self.sides[0], self.sides[2], self.sides[4]]
    }

    /// The opposite sides `(a', b', c')`.
    pub fn opposites(&self) -> [f64; 3] {
        [self.sides[3], self.sides[5], self.sides[1]]
    }

    /// Largest violation of the three cyclic hexagon cosine rules.
    pub fn identity_residual(&self) -> f64 {
        let [a, b, c] = self.alternating();
        let [ap, bp, cp] = self.opposites();
        let rule = |x: f64, xp: f64, y: f64, z: f64| {
            (y.sinh() * z.sinh() * xp.cosh() - y.cosh() * z.cosh() - x.cosh()).abs()
        };
        rule(a, ap, b, c).max(rule(b, bp, c, a)).max(rule(c, cp, a, b))
    }

    /// Distance between the end of the walk and the starting frame.
    pub fn closure_residual(&self) -> f64 {
        let end = self.frames[5].advance(self.sides[5]).turn_left();
        let start = self.frames[0];
        let d = end.point - start.point;
        let v = end.tangent - start.tangent;
        d.0.iter().chain(v.0.iter()).fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

/// Build the right-angled hexagon with alternating sides `a, b, c`.
pub fn hexagon_from_alternating_sides(a: f64, b: f64, c: f64) -> Result<Hexagon> {
    for (name, x) in [("a", a), ("b", b), ("c", c)] {
        if !(x.is_finite() && x > 0.0) {
            return Err(domain(format!("hexagon side {name} must be positive, got {x}")));
        }
    }
    let ap = opposite_side(a, b, c);
    let bp = opposite_side(b, c, a);
    let cp = opposite_side(c, a, b);
    let sides = [a, cp, b, ap, c, bp];
    if sides.iter().any(|s| !s.is_finite()) {
        return Err(Error::Geometry(format!(
            "hexagon with alternating sides ({a}, {b}, {c}) overflowed"
        )));
    }
    let mut frames = [Frame::standard(); 6];
    let mut f = Frame::standard();
    for (i, side) in sides.iter().enumerate() {
        frames[i] = f;
        f = f.advance(*side).turn_left();
    }
    Ok(Hexagon { sides, frames })
}

/// A pair of pants with geodesic cuffs, cut along its seams into two mirror
/// hexagons. Hexagon `A` is stored; hexagon `B` is its complex conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct Pants {
    pub cuff_lengths: [f64; 3],
    pub hexagon: Hexagon,
}

impl Pants {
    /// Seam from cuff `i` to cuff `i + 1 (mod 3)`.
    pub fn seam_length(&self, i: usize) -> f64 {
        self.hexagon.sides[2 * i + 1]
    }

    /// Frame of the half of cuff `i` lying in hexagon `A`.
    pub fn cuff_frame(&self, i: usize) -> Frame {
        self.hexagon.frames[2 * i]
    }

    /// Frame at the start of seam `i` (on cuff `i`).
    pub fn seam_frame(&self, i: usize) -> Frame {
        self.hexagon.frames[2 * i + 1]
    }

    pub fn collar_widths(&self) -> Result<[f64; 3]> {
        Ok([
            tube_width(self.cuff_lengths[0])?,
            tube_width(self.cuff_lengths[1])?,
            tube_width(self.cuff_lengths[2])?,
        ])
    }

    /// Length of seam `i` left over between the two standard collars it meets.
    pub fn seam_gap(&self, i: usize) -> Result<f64> {
        let w = self.collar_widths()?;
        Ok(self.seam_length(i) - w[i] - w[(i + 1) % 3])
    }

    pub fn area(&self) -> f64 {
        2.0 * std::f64::consts::PI
    }
}

/// Glue two copies of the right-angled hexagon with alternating sides `l_i / 2`.
pub fn pants_from_boundary_lengths(l1: f64, l2: f64, l3: f64) -> Result<Pants> {
    for x in [l1, l2, l3] {
        if !(x.is_finite() && x > 0.0) {
            return Err(domain(format!("cuff lengths must be positive, got {x}")));
        }
    }
    Ok(Pants {
        cuff_lengths: [l1, l2, l3],
        hexagon: hexagon_from_alternating_sides(l1 / 2.0, l2 / 2.0, l3 / 2.0)?,
    })
}

//! Points and frames on the hyperboloid model `-x0^2 + x1^2 + x2^2 = -1`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// A vector in Minkowski space R^{2,1} with the time coordinate first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lorentz(pub [f64; 3]);

impl Lorentz {
    pub const ORIGIN: Lorentz = Lorentz([1.0, 0.0, 0.0]);

    pub fn dot(self, o: Lorentz) -> f64 {
        -self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    /// Minkowski cross product, orthogonal to both factors in the Lorentz form.
    /// Normalised so that `e0 x e1 = e2`.
    pub fn cross(self, o: Lorentz) -> Lorentz {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = o.0;
        Lorentz([
            -(a1 * b2 - a2 * b1),
            a2 * b0 - a0 * b2,
            a0 * b1 - a1 * b0,
        ])
    }

    /// Rescale a timelike future vector onto the upper sheet.
    pub fn normalized_point(self) -> Lorentz {
        let n = (-self.dot(self)).sqrt();
        self * (1.0 / n)
    }

    pub fn distance(self, o: Lorentz) -> f64 {
        (-self.dot(o)).max(1.0).acosh()
    }

    /// Geodesic midpoint of two points on the upper sheet.
    pub fn midpoint(self, o: Lorentz) -> Lorentz {
        (self + o).normalized_point()
    }

    pub fn to_disk(self) -> Complex64 {
        let d = 1.0 + self.0[0];
        Complex64::new(self.0[1] / d, self.0[2] / d)
    }

    pub fn from_disk(z: Complex64) -> Lorentz {
        let r2 = z.norm_sqr();
        let d = 1.0 - r2;
        Lorentz([(1.0 + r2) / d, 2.0 * z.re / d, 2.0 * z.im / d])
    }

    /// Reflection `x2 -> -x2`, the complex conjugation of the disk.
    pub fn conj(self) -> Lorentz {
        Lorentz([self.0[0], self.0[1], -self.0[2]])
    }
}

impl Add for Lorentz {
    type Output = Lorentz;
    fn add(self, o: Lorentz) -> Lorentz {
        Lorentz([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Lorentz {
    type Output = Lorentz;
    fn sub(self, o: Lorentz) -> Lorentz {
        Lorentz([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<f64> for Lorentz {
    type Output = Lorentz;
    fn mul(self, s: f64) -> Lorentz {
        Lorentz([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Neg for Lorentz {
    type Output = Lorentz;
    fn neg(self) -> Lorentz {
        self * -1.0
    }
}

/// A geodesic frame: base point, unit tangent and left unit normal.
///
/// Fermi coordinates `(u, t)` relative to the frame place a point at signed
/// distance `t` (positive to the left) from the geodesic, with foot point at
/// arclength `u` from the base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub point: Lorentz,
    pub tangent: Lorentz,
    pub normal: Lorentz,
}

impl Frame {
    pub fn standard() -> Frame {
        Frame {
            point: Lorentz::ORIGIN,
            tangent: Lorentz([0.0, 1.0, 0.0]),
            normal: Lorentz([0.0, 0.0, 1.0]),
        }
    }

    /// Walk `d` along the geodesic, transporting the frame.
    pub fn advance(self, d: f64) -> Frame {
        let (s, c) = (d.sinh(), d.cosh());
        Frame {
            point: self.point * c + self.tangent * s,
            tangent: self.point * s + self.tangent * c,
            normal: self.normal,
        }
    }

    /// Rotate the tangent a quarter turn to the left.
    pub fn turn_left(self) -> Frame {
        let tangent = self.normal;
        Frame {
            point: self.point,
            tangent,
            normal: self.point.cross(tangent),
        }
    }

    pub fn geodesic_point(&self, d: f64) -> Lorentz {
        self.point * d.cosh() + self.tangent * d.sinh()
    }

    pub fn fermi_point(&self, u: f64, t: f64) -> Lorentz {
        self.geodesic_point(u) * t.cosh() + self.normal * t.sinh()
    }

    pub fn fermi_coords(&self, x: Lorentz) -> (f64, f64) {
        let t = x.dot(self.normal).asinh();
        let foot = (x - self.normal * t.sinh()) * (1.0 / t.cosh());
        let u = foot.dot(self.tangent).asinh();
        (u, t)
    }

    pub fn conj(self) -> Frame {
        Frame {
            point: self.point.conj(),
            tangent: self.tangent.conj(),
            normal: -self.normal.conj(),
        }
    }
}

/// Disk automorphism `z -> (z - a) / (1 - conj(a) z)` sending `a` to 0.
pub fn mobius_center(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

/// Inverse of [`mobius_center`].
pub fn mobius_uncenter(a: Complex64, w: Complex64) -> Complex64 {
    (w + a) / (Complex64::new(1.0, 0.0) + a.conj() * w)
}

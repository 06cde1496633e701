//! Separable Steklov spectra of the collar models.
//!
//! On a collar with metric `dt^2 + cosh^2 t ds^2` the Fourier mode
//! `u(t) e^{i k s}`, `k = 2 pi n / len`, is harmonic iff
//! `(cosh t u')' = k^2 u / cosh t`. In the conformal coordinate `tau = gd(t)`
//! this becomes `u'' = k^2 u`, which gives the closed forms below. The shooting
//! integrator works in `t` and does not use them.

use crate::error::{domain, Error, Result};
use crate::hypgeom::{gudermannian, tube_width};
use std::f64::consts::PI;

/// Condition on the rim of the half collar away from the geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FarEnd {
    Neumann,
    Dirichlet,
}

/// Symmetry of a cylinder mode under `t -> -t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEigenvalue {
    pub mode: u32,
    pub parity: Option<Parity>,
    /// 1 for the rotation-invariant mode, 2 otherwise.
    pub multiplicity: u32,
    pub sigma: f64,
}

fn wavenumber(length: f64, n: u32) -> f64 {
    2.0 * PI * f64::from(n) / length
}

fn check_length(length: f64) -> Result<()> {
    if !(length.is_finite() && length > 0.0) {
        return Err(domain(format!("core length must be positive, got {length}")));
    }
    Ok(())
}

fn multiplicity(n: u32) -> u32 {
    if n == 0 {
        1
    } else {
        2
    }
}

/// Closed-form Steklov eigenvalue of mode `n` on the half collar, Steklov on
/// the geodesic and `far` on the rim.
pub fn halfcollar_closed_form(length: f64, n: u32, far: FarEnd) -> Result<f64> {
    check_length(length)?;
    let tau = gudermannian(tube_width(length)?);
    let k = wavenumber(length, n);
    Ok(match (far, n) {
        (FarEnd::Neumann, 0) => 0.0,
        (FarEnd::Neumann, _) => k * (k * tau).tanh(),
        (FarEnd::Dirichlet, 0) => 1.0 / tau,
        (FarEnd::Dirichlet, _) => k / (k * tau).tanh(),
    })
}

/// Half-collar spectrum for modes `0..=max_mode`, ordered by mode.
pub fn halfcollar_model_spectrum(length: f64, far: FarEnd, max_mode: u32) -> Result<Vec<ModeEigenvalue>> {
    (0..=max_mode)
        .map(|n| {
            Ok(ModeEigenvalue {
                mode: n,
                parity: None,
                multiplicity: multiplicity(n),
                sigma: halfcollar_closed_form(length, n, far)?,
            })
        })
        .collect()
}

/// Closed-form Steklov eigenvalue of a cylinder mode, both rims Steklov.
pub fn cylinder_closed_form(length: f64, n: u32, parity: Parity) -> Result<f64> {
    check_length(length)?;
    let w = tube_width(length)?;
    let tau = gudermannian(w);
    let k = wavenumber(length, n);
    Ok(match (parity, n) {
        (Parity::Even, 0) => 0.0,
        (Parity::Even, _) => k * (k * tau).tanh() / w.cosh(),
        (Parity::Odd, 0) => 1.0 / (tau * w.cosh()),
        (Parity::Odd, _) => k / (k * tau).tanh() / w.cosh(),
    })
}

/// Cylinder spectrum for modes `0..=max_mode` by shooting, ascending.
pub fn cylinder_model_spectrum(length: f64, max_mode: u32) -> Result<Vec<ModeEigenvalue>> {
    let mut out = Vec::new();
    for n in 0..=max_mode {
        for parity in [Parity::Even, Parity::Odd] {
            out.push(ModeEigenvalue {
                mode: n,
                parity: Some(parity),
                multiplicity: multiplicity(n),
                sigma: shoot_cylinder(length, n, parity)?,
            });
        }
    }
    out.sort_by(|a, b| a.sigma.total_cmp(&b.sigma));
    Ok(out)
}

/// Eigenvalues repeated by multiplicity, ascending.
pub fn expand_modes(modes: &[ModeEigenvalue]) -> Vec<f64> {
    let mut v: Vec<f64> = modes
        .iter()
        .flat_map(|m| std::iter::repeat(m.sigma).take(m.multiplicity as usize))
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// State `(u, cosh t * u')` of the mode equation.
type State = [f64; 2];

/// Adaptive Dormand-Prince 5(4) integration of the mode equation from `t0` to `t1`.
fn integrate(k2: f64, t0: f64, t1: f64, y0: State, rtol: f64) -> Result<State> {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let f = |t: f64, y: State| -> State {
        let c = t.cosh();
        [y[1] / c, k2 * y[0] / c]
    };
    let span = t1 - t0;
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * (span.abs() / 64.0).min(0.1 / (1.0 + k2.sqrt()));
    let mut steps = 0usize;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > 5_000_000 {
            return Err(Error::Solver("shooting integrator did not converge".into()));
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let mut ks = [[0.0; 2]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (j, kj) in ks.iter().enumerate().take(s) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            ks[s] = f(t + C[s] * h, ys);
        }
        let mut y5 = y;
        let mut err = [0.0; 2];
        for s in 0..7 {
            let b5 = if s < 6 { A[6][s] } else { 0.0 };
            for i in 0..2 {
                y5[i] += h * b5 * ks[s][i];
                err[i] += h * (b5 - B4[s]) * ks[s][i];
            }
        }
        let scale = rtol * y.iter().chain(y5.iter()).fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let e = err[0].abs().max(err[1].abs()) / scale;
        if e <= 1.0 {
            t += h;
            y = y5;
            let norm = y[0].abs().max(y[1].abs());
            if norm > 1e100 {
                y = [y[0] / norm, y[1] / norm];
            }
        }
        let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    Ok(y)
}

const SHOOTING_RTOL: f64 = 1e-14;

/// Half-collar eigenvalue of mode `n` by integrating from the rim to the core.
pub fn shoot_half_collar(length: f64, n: u32, far: FarEnd) -> Result<f64> {
    check_length(length)?;
    let w = tube_width(length)?;
    let k = wavenumber(length, n);
    let start = match far {
        FarEnd::Neumann => [1.0, 0.0],
        FarEnd::Dirichlet => [0.0, 1.0],
    };
    let y = integrate(k * k, w, 0.0, start, SHOOTING_RTOL)?;
    // Outward normal at the core is -d/dt and cosh 0 = 1.
    Ok(-y[1] / y[0])
}

/// Cylinder eigenvalue of mode `n` with given parity, integrating from the core.
pub fn shoot_cylinder(length: f64, n: u32, parity: Parity) -> Result<f64> {
    check_length(length)?;
    let w = tube_width(length)?;
    let k = wavenumber(length, n);
    let start = match parity {
        Parity::Even => [1.0, 0.0],
        Parity::Odd => [0.0, 1.0],
    };
    let y = integrate(k * k, 0.0, w, start, SHOOTING_RTOL)?;
    Ok(y[1] / (w.cosh() * y[0]))
}

/// Largest relative disagreement between closed form and shooting over the
/// samples, for both far-end conditions. Fails if it exceeds `tol`.
pub fn verify_halfcollar_closed_forms(samples: &[(f64, u32)], tol: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(len, n) in samples {
        for far in [FarEnd::Neumann, FarEnd::Dirichlet] {
            let exact = halfcollar_closed_form(len, n, far)?;
            let shot = shoot_half_collar(len, n, far)?;
            let err = (exact - shot).abs() / exact.abs().max(1.0);
            worst = worst.max(err);
            if err > tol {
                return Err(Error::Solver(format!(
                    "half-collar closed form disagrees with shooting at len={len}, n={n}, {far:?}: {exact} vs {shot}"
                )));
            }
        }
    }
    Ok(worst)
}

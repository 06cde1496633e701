//! Standard pants graphs.

use super::graph::PantsGraph;
use super::Signature;
use crate::error::{domain, Result};

/// Gluing pattern: named parts and pants before name resolution.
#[derive(Default)]
struct Layout {
    boundaries: Vec<(String, f64)>,
    curves: Vec<(String, f64)>,
    cusps: Vec<String>,
    pants: Vec<[String; 3]>,
}

impl Layout {
    fn new_curve(&mut self, len: f64) -> String {
        let id = format!("g{}", self.curves.len() + 1);
        self.curves.push((id.clone(), len));
        id
    }

    /// Chain of pants joining the given ends in order; `ends.len() >= 3`.
    fn chain(&mut self, ends: &[String], len: f64) {
        let n = ends.len();
        if n == 3 {
            self.pants.push([ends[0].clone(), ends[1].clone(), ends[2].clone()]);
            return;
        }
        let mut prev = self.new_curve(len);
        self.pants.push([ends[0].clone(), ends[1].clone(), prev.clone()]);
        for e in &ends[2..n - 2] {
            let next = self.new_curve(len);
            self.pants.push([prev, e.clone(), next.clone()]);
            prev = next;
        }
        self.pants.push([prev, ends[n - 2].clone(), ends[n - 1].clone()]);
    }

    fn finish(self, id: String) -> Result<PantsGraph> {
        let b: Vec<(&str, f64)> = self.boundaries.iter().map(|(s, l)| (s.as_str(), *l)).collect();
        let c: Vec<(&str, f64)> = self.curves.iter().map(|(s, l)| (s.as_str(), *l)).collect();
        let p: Vec<&str> = self.cusps.iter().map(String::as_str).collect();
        let pants: Vec<[&str; 3]> = self
            .pants
            .iter()
            .map(|[a, b, c]| [a.as_str(), b.as_str(), c.as_str()])
            .collect();
        PantsGraph::build(id, &b, &c, &p, &pants)
    }
}

/// Sphere with `b >= 3` boundaries as a linear chain of `b - 2` pants:
/// `(B1, B2, g1), (g1, B3, g2), ..., (g_{b-3}, B_{b-1}, B_b)`.
pub fn sphere_chain(boundary_lengths: &[f64], interior_lengths: &[f64]) -> Result<PantsGraph> {
    let b = boundary_lengths.len();
    if b < 3 {
        return Err(domain(format!("sphere chain needs at least 3 boundaries, got {b}")));
    }
    if interior_lengths.len() != b - 3 {
        return Err(domain(format!(
            "sphere chain with {b} boundaries needs {} interior lengths, got {}",
            b - 3,
            interior_lengths.len()
        )));
    }
    let mut lay = Layout::default();
    let ends: Vec<String> = (1..=b).map(|i| format!("B{i}")).collect();
    for (e, l) in ends.iter().zip(boundary_lengths) {
        lay.boundaries.push((e.clone(), *l));
    }
    lay.chain(&ends, 1.0);
    for (c, l) in lay.curves.iter_mut().zip(interior_lengths) {
        c.1 = *l;
    }
    lay.finish(format!("sphere-chain-{b}"))
}

/// Two pants `(B1, B2, g1)` and `(g1, B3, B4)`.
pub fn four_holed_sphere(boundary_lengths: [f64; 4], separating: f64) -> Result<PantsGraph> {
    sphere_chain(&boundary_lengths, &[separating])
}

/// One pants with two cuffs glued: `(B1, a, a)`.
pub fn one_holed_torus(boundary: f64, curve: f64) -> Result<PantsGraph> {
    PantsGraph::build("one-holed-torus", &[("B1", boundary)], &[("a", curve)], &[], &[["B1", "a", "a"]])
}

/// A pants graph of the given signature (with `b >= 1`) and unit lengths whose
/// pants curves realise the largest separating multicurve the topology admits.
///
/// Genus zero uses a chain with the cusps placed at the ends. Positive genus
/// uses a necklace of `b` pants, one per boundary, with the remaining genus and
/// cusps hung off the first bead.
pub fn witness_graph(sig: Signature) -> Result<PantsGraph> {
    if !sig.is_hyperbolic() || sig.boundaries == 0 {
        return Err(domain(format!("no witness graph for signature {sig}")));
    }
    let (g, b, p) = (sig.genus as usize, sig.boundaries as usize, sig.cusps as usize);
    let mut lay = Layout::default();
    let bnd: Vec<String> = (1..=b).map(|i| format!("B{i}")).collect();
    let csp: Vec<String> = (1..=p).map(|i| format!("C{i}")).collect();
    for e in &bnd {
        lay.boundaries.push((e.clone(), 1.0));
    }
    lay.cusps = csp.clone();
    if g == 0 {
        let mut ends = Vec::new();
        if p >= 1 {
            ends.push(csp[0].clone());
        }
        ends.extend(bnd.iter().cloned());
        ends.extend(csp.iter().skip(1).cloned());
        lay.chain(&ends, 1.0);
    } else {
        // Ends hanging off the first bead besides B1: cusps and extra handles.
        let mut extra: Vec<String> = csp.clone();
        for _ in 1..g {
            let stem = lay.new_curve(1.0);
            let loop_ = lay.new_curve(1.0);
            lay.pants.push([stem.clone(), loop_.clone(), loop_]);
            extra.push(stem);
        }
        let first = if extra.is_empty() {
            bnd[0].clone()
        } else {
            let stem = lay.new_curve(1.0);
            let mut ends = vec![stem.clone(), bnd[0].clone()];
            ends.extend(extra);
            lay.chain(&ends, 1.0);
            stem
        };
        let mut outer = vec![first];
        outer.extend(bnd.iter().skip(1).cloned());
        let m = outer.len();
        match m {
            1 => {
                let a = lay.new_curve(1.0);
                lay.pants.push([outer[0].clone(), a.clone(), a]);
            }
            2 => {
                let a = lay.new_curve(1.0);
                let c = lay.new_curve(1.0);
                lay.pants.push([outer[0].clone(), a.clone(), c.clone()]);
                lay.pants.push([outer[1].clone(), a, c]);
            }
            _ => {
                let links: Vec<String> = (0..m).map(|_| lay.new_curve(1.0)).collect();
                for i in 0..m {
                    lay.pants.push([outer[i].clone(), links[i].clone(), links[(i + 1) % m].clone()]);
                }
            }
        }
    }
    let graph = lay.finish(format!("witness-{}-{}-{}", g, b, p))?;
    debug_assert_eq!(graph.signature(), sig);
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_graphs_have_requested_signature() {
        for g in 0..=2 {
            for b in 1..=6 {
                for p in 0..=2 {
                    let s = Signature::new(g, b, p);
                    if !s.is_hyperbolic() {
                        continue;
                    }
                    let graph = witness_graph(s).unwrap();
                    assert_eq!(graph.signature(), s);
                    assert_eq!(graph.pants().len(), s.pants_count());
                }
            }
        }
    }

    #[test]
    fn sphere_chain_shape() {
        let g = sphere_chain(&[1.0; 6], &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(g.pants().len(), 4);
        assert_eq!(g.curves().len(), 3);
        assert!(sphere_chain(&[1.0; 2], &[]).is_err());
        assert!(sphere_chain(&[1.0; 4], &[]).is_err());
    }
}

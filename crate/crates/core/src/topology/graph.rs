use super::Signature;
use crate::error::{domain, structural, Result};
use std::collections::HashMap;

/// Shortest admissible geodesic length. Below this the collar is wider than any
/// chart can represent accurately.
pub const MIN_LENGTH: f64 = 1e-6;

/// What sits on one cuff of a pants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cuff {
    Boundary(usize),
    Cusp(usize),
    Curve(usize),
}

/// Cuff `cuff` (0, 1 or 2) of pants `pants`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CuffSlot {
    pub pants: usize,
    pub cuff: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub label: String,
    pub length: f64,
    pub slot: CuffSlot,
}

/// A pants curve glued between two cuffs (possibly of the same pants).
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorCurve {
    pub id: String,
    pub length: f64,
    pub sides: [CuffSlot; 2],
}

impl InteriorCurve {
    pub fn is_self_loop(&self) -> bool {
        self.sides[0].pants == self.sides[1].pants
    }
}

/// A hyperbolic surface given by a pants decomposition with zero twists.
#[derive(Debug, Clone, PartialEq)]
pub struct PantsGraph {
    id: String,
    pants: Vec<[Cuff; 3]>,
    boundaries: Vec<BoundaryCurve>,
    curves: Vec<InteriorCurve>,
    cusps: Vec<String>,
}

fn check_length(what: &str, name: &str, len: f64) -> Result<()> {
    if !len.is_finite() || len <= 0.0 {
        return Err(domain(format!("{what} {name} has non-positive length {len}")));
    }
    if len < MIN_LENGTH {
        return Err(domain(format!(
            "{what} {name} has length {len} below the supported minimum {MIN_LENGTH}"
        )));
    }
    Ok(())
}

impl PantsGraph {
    /// Build from named parts. Each pants lists three names; a name must be a
    /// boundary label or cusp label (used exactly once) or a curve id (used
    /// exactly twice).
    pub fn build(
        id: impl Into<String>,
        boundaries: &[(&str, f64)],
        curves: &[(&str, f64)],
        cusps: &[&str],
        pants: &[[&str; 3]],
    ) -> Result<PantsGraph> {
        let mut names: HashMap<&str, Cuff> = HashMap::new();
        for (i, (label, len)) in boundaries.iter().enumerate() {
            check_length("boundary", label, *len)?;
            if names.insert(label, Cuff::Boundary(i)).is_some() {
                return Err(structural(format!("duplicate name {label}")));
            }
        }
        for (i, (cid, len)) in curves.iter().enumerate() {
            check_length("curve", cid, *len)?;
            if names.insert(cid, Cuff::Curve(i)).is_some() {
                return Err(structural(format!("duplicate name {cid}")));
            }
        }
        for (i, label) in cusps.iter().enumerate() {
            if names.insert(label, Cuff::Cusp(i)).is_some() {
                return Err(structural(format!("duplicate name {label}")));
            }
        }
        let mut slots: HashMap<Cuff, Vec<CuffSlot>> = HashMap::new();
        let mut resolved = Vec::with_capacity(pants.len());
        for (p, cuffs) in pants.iter().enumerate() {
            let mut row = [Cuff::Cusp(0); 3];
            for (c, name) in cuffs.iter().enumerate() {
                let cuff = *names
                    .get(name)
                    .ok_or_else(|| structural(format!("pants {p} refers to unknown curve {name}")))?;
                row[c] = cuff;
                slots.entry(cuff).or_default().push(CuffSlot { pants: p, cuff: c });
            }
            resolved.push(row);
        }
        let used = |c: Cuff| slots.get(&c).map_or(0, Vec::len);
        let mut bnd = Vec::new();
        for (i, (label, len)) in boundaries.iter().enumerate() {
            let n = used(Cuff::Boundary(i));
            if n != 1 {
                return Err(structural(format!("boundary {label} appears on {n} cuffs, expected 1")));
            }
            bnd.push(BoundaryCurve {
                label: label.to_string(),
                length: *len,
                slot: slots[&Cuff::Boundary(i)][0],
            });
        }
        let mut crv = Vec::new();
        for (i, (cid, len)) in curves.iter().enumerate() {
            let n = used(Cuff::Curve(i));
            if n != 2 {
                return Err(structural(format!("curve {cid} appears on {n} cuffs, expected 2")));
            }
            let s = &slots[&Cuff::Curve(i)];
            crv.push(InteriorCurve {
                id: cid.to_string(),
                length: *len,
                sides: [s[0], s[1]],
            });
        }
        for (i, label) in cusps.iter().enumerate() {
            let n = used(Cuff::Cusp(i));
            if n != 1 {
                return Err(structural(format!("cusp {label} appears on {n} cuffs, expected 1")));
            }
        }
        let g = PantsGraph {
            id: id.into(),
            pants: resolved,
            boundaries: bnd,
            curves: crv,
            cusps: cusps.iter().map(|s| s.to_string()).collect(),
        };
        if g.pants.is_empty() {
            return Err(structural("pants graph has no pants"));
        }
        if g.component_count(&[]) != 1 {
            return Err(structural("pants graph is disconnected"));
        }
        Ok(g)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn pants(&self) -> &[[Cuff; 3]] {
        &self.pants
    }

    pub fn boundaries(&self) -> &[BoundaryCurve] {
        &self.boundaries
    }

    pub fn curves(&self) -> &[InteriorCurve] {
        &self.curves
    }

    pub fn cusps(&self) -> &[String] {
        &self.cusps
    }

    pub fn signature(&self) -> Signature {
        let b = self.boundaries.len() as i64;
        let p = self.cusps.len() as i64;
        let chi = -(self.pants.len() as i64);
        let g = (2 - b - p - chi) / 2;
        Signature::new(g as u32, b as u32, p as u32)
    }

    pub fn euler_characteristic(&self) -> i64 {
        -(self.pants.len() as i64)
    }

    pub fn total_boundary_length(&self) -> f64 {
        self.boundaries.iter().map(|b| b.length).sum()
    }

    /// Shortest boundary length.
    pub fn alpha(&self) -> f64 {
        self.boundaries.iter().map(|b| b.length).fold(f64::INFINITY, f64::min)
    }

    /// Longest boundary length.
    pub fn beta(&self) -> f64 {
        self.boundaries.iter().map(|b| b.length).fold(0.0, f64::max)
    }

    /// Geodesic length on each cuff; `None` for cusps.
    pub fn cuff_lengths(&self, pants: usize) -> [Option<f64>; 3] {
        self.pants[pants].map(|c| self.cuff_length(c))
    }

    pub fn cuff_length(&self, c: Cuff) -> Option<f64> {
        match c {
            Cuff::Boundary(i) => Some(self.boundaries[i].length),
            Cuff::Curve(i) => Some(self.curves[i].length),
            Cuff::Cusp(_) => None,
        }
    }

    pub fn cuff_name(&self, c: Cuff) -> &str {
        match c {
            Cuff::Boundary(i) => &self.boundaries[i].label,
            Cuff::Curve(i) => &self.curves[i].id,
            Cuff::Cusp(i) => &self.cusps[i],
        }
    }

    pub fn curve_index(&self, id: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.id == id)
    }

    pub fn boundary_index(&self, label: &str) -> Option<usize> {
        self.boundaries.iter().position(|b| b.label == label)
    }

    /// Copy with one curve or boundary length replaced.
    pub fn with_length(&self, name: &str, len: f64) -> Result<PantsGraph> {
        let mut g = self.clone();
        if let Some(i) = g.curve_index(name) {
            check_length("curve", name, len)?;
            g.curves[i].length = len;
        } else if let Some(i) = g.boundary_index(name) {
            check_length("boundary", name, len)?;
            g.boundaries[i].length = len;
        } else {
            return Err(domain(format!("no curve or boundary named {name}")));
        }
        Ok(g)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> PantsGraph {
        self.id = id.into();
        self
    }

    /// Union-find labels of pants after deleting the curves in `cut`.
    pub(crate) fn pants_labels(&self, cut: &[usize]) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.pants.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, c) in self.curves.iter().enumerate() {
            if cut.contains(&i) {
                continue;
            }
            let a = find(&mut parent, c.sides[0].pants);
            let b = find(&mut parent, c.sides[1].pants);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..self.pants.len()).map(|x| find(&mut parent, x)).collect()
    }

    pub(crate) fn component_count(&self, cut: &[usize]) -> usize {
        let mut labels = self.pants_labels(cut);
        labels.sort_unstable();
        labels.dedup();
        labels.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_four_holed_sphere() {
        let g = PantsGraph::build(
            "x",
            &[("B1", 1.0), ("B2", 1.0), ("B3", 1.0), ("B4", 1.0)],
            &[("g", 0.3)],
            &[],
            &[["B1", "B2", "g"], ["g", "B3", "B4"]],
        )
        .unwrap();
        assert_eq!(g.signature(), Signature::new(0, 4, 0));
        assert_eq!(g.euler_characteristic(), -2);
        assert_eq!(g.total_boundary_length(), 4.0);
    }

    #[test]
    fn rejects_bad_graphs() {
        let dangling = PantsGraph::build("x", &[("B1", 1.0), ("B2", 1.0)], &[("g", 1.0)], &[], &[["B1", "B2", "g"]]);
        assert!(matches!(dangling, Err(crate::Error::Structural(_))));
        let unknown = PantsGraph::build("x", &[("B1", 1.0), ("B2", 1.0)], &[], &[], &[["B1", "B2", "h"]]);
        assert!(unknown.is_err());
        let negative = PantsGraph::build("x", &[("B1", -1.0), ("B2", 1.0), ("B3", 1.0)], &[], &[], &[["B1", "B2", "B3"]]);
        assert!(matches!(negative, Err(crate::Error::Domain(_))));
        let tiny = PantsGraph::build("x", &[("B1", 1e-7), ("B2", 1.0), ("B3", 1.0)], &[], &[], &[["B1", "B2", "B3"]]);
        assert!(tiny.is_err());
        let split = PantsGraph::build(
            "x",
            &[("B1", 1.0), ("B2", 1.0), ("B3", 1.0), ("B4", 1.0), ("B5", 1.0), ("B6", 1.0)],
            &[],
            &[],
            &[["B1", "B2", "B3"], ["B4", "B5", "B6"]],
        );
        assert!(split.is_err());
    }

    #[test]
    fn one_holed_torus_signature() {
        let g = PantsGraph::build("t", &[("B1", 1.0)], &[("a", 1.0)], &[], &[["B1", "a", "a"]]).unwrap();
        assert_eq!(g.signature(), Signature::new(1, 1, 0));
        assert!(g.curves()[0].is_self_loop());
    }
}

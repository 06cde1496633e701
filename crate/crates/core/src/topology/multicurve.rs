use super::graph::{Cuff, PantsGraph};
use crate::error::{domain, Error, Result};

/// Exhaustive enumeration visits every subset of pants curves.
pub const MAX_ENUMERATED_CURVES: usize = 20;

/// One piece of the surface after cutting along a multicurve.
#[derive(Debug, Clone, PartialEq)]
pub struct CutComponent {
    pub pants: Vec<usize>,
    pub boundaries: Vec<usize>,
    /// Total length of the boundary geodesics in this piece.
    pub boundary_length: f64,
}

/// A set of pants curves separating the surface into pieces that all touch
/// the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiCurve {
    pub curves: Vec<usize>,
    pub components: Vec<CutComponent>,
    pub length: f64,
}

impl MultiCurve {
    pub fn min_component_boundary(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.boundary_length)
            .fold(f64::INFINITY, f64::min)
    }
}

fn evaluate(graph: &PantsGraph, cut: &[usize], k: usize) -> Option<MultiCurve> {
    let labels = graph.pants_labels(cut);
    // Each cut curve must have different pieces on its two sides.
    for &c in cut {
        let s = graph.curves()[c].sides;
        if labels[s[0].pants] == labels[s[1].pants] {
            return None;
        }
    }
    let mut roots: Vec<usize> = labels.clone();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() != k + 1 {
        return None;
    }
    let mut components = Vec::with_capacity(roots.len());
    for r in roots {
        let pants: Vec<usize> = (0..labels.len()).filter(|&p| labels[p] == r).collect();
        let mut boundaries: Vec<usize> = pants
            .iter()
            .flat_map(|&p| graph.pants()[p])
            .filter_map(|c| match c {
                Cuff::Boundary(i) => Some(i),
                _ => None,
            })
            .collect();
        if boundaries.is_empty() {
            return None;
        }
        boundaries.sort_unstable();
        let boundary_length = boundaries.iter().map(|&i| graph.boundaries()[i].length).sum();
        components.push(CutComponent {
            pants,
            boundaries,
            boundary_length,
        });
    }
    let length = cut.iter().map(|&c| graph.curves()[c].length).sum();
    Some(MultiCurve {
        curves: cut.to_vec(),
        components,
        length,
    })
}

/// All multicurves made of pants curves that cut the surface into exactly
/// `k + 1` pieces, each containing a boundary component. Ordered by subset
/// bitmask.
pub fn enumerate_separating_multicurves(graph: &PantsGraph, k: usize) -> Result<Vec<MultiCurve>> {
    if k == 0 {
        return Err(domain("k must be at least 1"));
    }
    let n = graph.curves().len();
    if n > MAX_ENUMERATED_CURVES {
        return Err(Error::Capacity {
            what: "interior curves for exhaustive enumeration",
            limit: MAX_ENUMERATED_CURVES,
            got: n,
        });
    }
    let mut out = Vec::new();
    let mut cut = Vec::with_capacity(n);
    for mask in 1u32..(1u32 << n) {
        if (mask.count_ones() as usize) < k {
            continue;
        }
        cut.clear();
        cut.extend((0..n).filter(|i| mask & (1 << i) != 0));
        if let Some(mc) = evaluate(graph, &cut, k) {
            out.push(mc);
        }
    }
    Ok(out)
}

/// Shortest separating multicurve for `k`, optionally restricted to curves of
/// length at most `2 * epsilon`. `None` means the admissible set is empty.
pub fn ell_k(graph: &PantsGraph, k: usize, epsilon: Option<f64>) -> Result<Option<MultiCurve>> {
    let all = enumerate_separating_multicurves(graph, k)?;
    let admissible = all.into_iter().filter(|mc| match epsilon {
        Some(eps) => mc.curves.iter().all(|&c| graph.curves()[c].length <= 2.0 * eps),
        None => true,
    });
    Ok(admissible.min_by(|a, b| a.length.total_cmp(&b.length)))
}

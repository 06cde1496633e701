use super::{epsilon_circ, Collar, CollarKind};
use crate::error::Result;
use crate::topology::{Cuff, PantsGraph};
use std::f64::consts::PI;

/// Area of the standard cusp neighbourhood.
pub const CUSP_AREA: f64 = 2.0;

/// A connected piece of the thick part: pants joined through curves that are
/// not thin, minus every collar and cusp neighbourhood on their cuffs.
#[derive(Debug, Clone, PartialEq)]
pub struct ThickComponent {
    pub pants: Vec<usize>,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThickThin {
    pub epsilon: f64,
    /// Full collars of interior curves of length at most `2 * epsilon`.
    pub thin_collars: Vec<(usize, Collar)>,
    /// Half collars of every boundary geodesic.
    pub half_collars: Vec<(usize, Collar)>,
    pub cusp_count: usize,
    pub components: Vec<ThickComponent>,
    /// Component index of each pants.
    pub pants_component: Vec<usize>,
}

impl ThickThin {
    pub fn is_thin_curve(&self, curve: usize) -> bool {
        self.thin_collars.iter().any(|(c, _)| *c == curve)
    }

    pub fn total_area(&self) -> f64 {
        self.components.iter().map(|c| c.area).sum::<f64>()
            + self.thin_collars.iter().map(|(_, c)| c.area()).sum::<f64>()
            + self.half_collars.iter().map(|(_, c)| c.area()).sum::<f64>()
            + self.cusp_count as f64 * CUSP_AREA
    }
}

/// Split the surface into thin collars, boundary half collars, cusp
/// neighbourhoods and thick components at threshold `epsilon_circ(beta)`.
pub fn thick_thin_decomposition(graph: &PantsGraph, beta: f64) -> Result<ThickThin> {
    let epsilon = epsilon_circ(beta)?;
    let mut thin_collars = Vec::new();
    for (i, c) in graph.curves().iter().enumerate() {
        if c.length <= 2.0 * epsilon {
            thin_collars.push((i, Collar::new(c.length, CollarKind::Full)?));
        }
    }
    let mut half_collars = Vec::new();
    for (i, b) in graph.boundaries().iter().enumerate() {
        half_collars.push((i, Collar::new(b.length, CollarKind::Half)?));
    }
    let thin: Vec<usize> = thin_collars.iter().map(|(c, _)| *c).collect();
    let labels = graph.pants_labels(&thin);
    let mut roots: Vec<usize> = labels.clone();
    roots.sort_unstable();
    roots.dedup();
    let pants_component: Vec<usize> = labels
        .iter()
        .map(|l| roots.binary_search(l).expect("label is a root"))
        .collect();
    let mut components: Vec<ThickComponent> = roots
        .iter()
        .map(|_| ThickComponent {
            pants: Vec::new(),
            area: 0.0,
        })
        .collect();
    for (p, cuffs) in graph.pants().iter().enumerate() {
        let comp = &mut components[pants_component[p]];
        comp.pants.push(p);
        let mut area = 2.0 * PI;
        for cuff in cuffs {
            area -= match *cuff {
                Cuff::Cusp(_) => CUSP_AREA,
                Cuff::Boundary(i) => half_collars[i].1.area(),
                Cuff::Curve(i) if thin.contains(&i) => {
                    Collar::new(graph.curves()[i].length, CollarKind::Half)?.area()
                }
                Cuff::Curve(_) => 0.0,
            };
        }
        comp.area += area;
    }
    Ok(ThickThin {
        epsilon,
        thin_collars,
        half_collars,
        cusp_count: graph.cusps().len(),
        components,
        pants_component,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{four_holed_sphere, witness_graph, Signature};
    use approx::assert_relative_eq;

    #[test]
    fn four_holed_sphere_split_by_short_curve() {
        let g = four_holed_sphere([1.0; 4], 0.1).unwrap();
        let tt = thick_thin_decomposition(&g, g.beta()).unwrap();
        assert_eq!(tt.thin_collars.len(), 1);
        assert_eq!(tt.components.len(), 2);
        assert_relative_eq!(tt.total_area(), 4.0 * PI, max_relative = 1e-12);
        let g = four_holed_sphere([1.0; 4], 2.5).unwrap();
        let tt = thick_thin_decomposition(&g, g.beta()).unwrap();
        assert!(tt.thin_collars.is_empty());
        assert_eq!(tt.components.len(), 1);
    }

    #[test]
    fn gauss_bonnet_on_witness_graphs() {
        for (g, b, p) in [(0, 5, 0), (1, 3, 1), (2, 2, 2), (0, 3, 2)] {
            let s = Signature::new(g, b, p);
            let graph = witness_graph(s).unwrap().with_length("g1", 0.2).unwrap();
            let tt = thick_thin_decomposition(&graph, graph.beta()).unwrap();
            let expected = 2.0 * PI * (-s.euler_characteristic()) as f64;
            assert_relative_eq!(tt.total_area(), expected, max_relative = 1e-12);
            assert!(tt.components.iter().all(|c| c.area > 0.0));
        }
    }
}

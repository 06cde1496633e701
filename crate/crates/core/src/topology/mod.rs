//! Signatures, pants graphs and separating multicurves.

mod generators;
mod graph;
mod multicurve;

pub use generators::{four_holed_sphere, one_holed_torus, sphere_chain, witness_graph};
pub use graph::{BoundaryCurve, Cuff, CuffSlot, InteriorCurve, PantsGraph};
pub use multicurve::{ell_k, enumerate_separating_multicurves, CutComponent, MultiCurve, MAX_ENUMERATED_CURVES};

use crate::error::{domain, Result};

/// Topological type `(g, b; p)`: genus, boundary components and cusps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub genus: u32,
    pub boundaries: u32,
    pub cusps: u32,
}

impl Signature {
    pub fn new(genus: u32, boundaries: u32, cusps: u32) -> Signature {
        Signature {
            genus,
            boundaries,
            cusps,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundaries as i64 - self.cusps as i64
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.euler_characteristic() < 0
    }

    /// Number of pants in any pants decomposition.
    pub fn pants_count(&self) -> usize {
        (-self.euler_characteristic()).max(0) as usize
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{};{})", self.genus, self.boundaries, self.cusps)
    }
}

pub fn euler_number(sig: Signature) -> i64 {
    sig.euler_characteristic()
}

/// Index `K` of the last eigenvalue that can be small for this topology.
pub fn k_max(sig: Signature) -> Result<usize> {
    if !sig.is_hyperbolic() {
        return Err(domain(format!("signature {sig} has chi >= 0")));
    }
    if sig.boundaries == 0 {
        return Err(domain(format!("signature {sig} has no boundary")));
    }
    let b = sig.boundaries as usize;
    let k = match (sig.genus, sig.cusps) {
        (0, 0) => b.saturating_sub(3),
        (0, 1) => b.saturating_sub(2),
        _ => b - 1,
    };
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CkStatus {
    Empty,
    NonEmpty,
}

/// Whether some multicurve cuts the surface into `k + 1` pieces each meeting
/// the boundary.
pub fn ck_status(sig: Signature, k: usize) -> Result<CkStatus> {
    if k == 0 {
        return Err(domain("k must be at least 1"));
    }
    Ok(if k <= k_max(sig)? {
        CkStatus::NonEmpty
    } else {
        CkStatus::Empty
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use CkStatus::*;

    fn sig(g: u32, b: u32, p: u32) -> Signature {
        Signature::new(g, b, p)
    }

    #[test]
    fn k_table_examples() {
        assert_eq!(k_max(sig(0, 3, 0)).unwrap(), 0);
        assert_eq!(k_max(sig(0, 4, 0)).unwrap(), 1);
        assert_eq!(k_max(sig(0, 6, 0)).unwrap(), 3);
        assert_eq!(k_max(sig(0, 2, 1)).unwrap(), 0);
        assert_eq!(k_max(sig(0, 5, 1)).unwrap(), 3);
        assert_eq!(k_max(sig(0, 3, 2)).unwrap(), 2);
        assert_eq!(k_max(sig(1, 1, 0)).unwrap(), 0);
        assert_eq!(k_max(sig(2, 4, 1)).unwrap(), 3);
    }

    #[test]
    fn non_hyperbolic_or_closed_is_rejected() {
        for s in [sig(0, 1, 0), sig(0, 2, 0), sig(0, 1, 1), sig(1, 0, 0), sig(2, 0, 0)] {
            assert!(k_max(s).is_err(), "{s}");
        }
        assert!(ck_status(sig(0, 4, 0), 0).is_err());
    }

    #[test]
    fn lemma_items_on_small_signatures() {
        for g in 0..=2 {
            for b in 1..=6 {
                for p in 0..=2 {
                    let s = sig(g, b, p);
                    if !s.is_hyperbolic() {
                        continue;
                    }
                    let b = b as usize;
                    assert_eq!(ck_status(s, b).unwrap(), Empty, "C_b for {s}");
                    if (g >= 1 || p >= 2) && b >= 2 {
                        assert_eq!(ck_status(s, b - 1).unwrap(), NonEmpty, "{s}");
                    }
                    if g == 0 && p == 1 && b >= 3 {
                        assert_eq!(ck_status(s, b - 2).unwrap(), NonEmpty, "{s}");
                        assert_eq!(ck_status(s, b - 1).unwrap(), Empty, "{s}");
                    }
                    if g == 0 && p == 0 && b >= 4 {
                        assert_eq!(ck_status(s, b - 3).unwrap(), NonEmpty, "{s}");
                        assert_eq!(ck_status(s, b - 2).unwrap(), Empty, "{s}");
                    }
                }
            }
        }
        assert_eq!(ck_status(sig(0, 3, 0), 1).unwrap(), Empty);
        assert_eq!(ck_status(sig(0, 2, 1), 1).unwrap(), Empty);
    }
}

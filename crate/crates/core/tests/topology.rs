use hypsteklov::topology::{
    ck_status, ell_k, enumerate_separating_multicurves, four_holed_sphere, k_max, one_holed_torus, sphere_chain,
    witness_graph, CkStatus, Cuff, PantsGraph,
};
use hypsteklov::Signature;

/// Component labels of the pants after deleting the curves in `mask`, by BFS.
fn pieces(g: &PantsGraph, mask: u32) -> Vec<usize> {
    let n = g.pants().len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for (i, c) in g.curves().iter().enumerate() {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let [a, b] = [c.sides[0].pants, c.sides[1].pants];
                for (x, y) in [(a, b), (b, a)] {
                    if x == p && label[y] == usize::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
        }
        next += 1;
    }
    label
}

/// Independent brute force: every subset whose curves each separate, leaving
/// exactly `k + 1` pieces that all carry a boundary.
fn brute_force(g: &PantsGraph, k: usize) -> Vec<Vec<usize>> {
    let e = g.curves().len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << e) {
        let label = pieces(g, mask);
        let count = label.iter().max().map_or(0, |m| m + 1);
        if count != k + 1 {
            continue;
        }
        let cut: Vec<usize> = (0..e).filter(|i| mask & (1 << i) != 0).collect();
        if cut.iter().any(|&c| {
            let s = g.curves()[c].sides;
            label[s[0].pants] == label[s[1].pants]
        }) {
            continue;
        }
        let has_boundary = (0..count).all(|piece| {
            (0..g.pants().len())
                .filter(|&p| label[p] == piece)
                .any(|p| g.pants()[p].iter().any(|c| matches!(c, Cuff::Boundary(_))))
        });
        if has_boundary {
            out.push(cut);
        }
    }
    out
}

fn small_graphs() -> Vec<PantsGraph> {
    let mut v = vec![
        four_holed_sphere([1.0; 4], 0.3).unwrap(),
        one_holed_torus(1.0, 0.5).unwrap(),
        sphere_chain(&[1.0; 6], &[0.2, 0.3, 0.4]).unwrap(),
    ];
    for (g, b, p) in [(1, 2, 0), (1, 3, 0), (2, 1, 0), (0, 4, 1), (1, 1, 1), (0, 3, 2), (2, 2, 0)] {
        let graph = witness_graph(Signature::new(g, b, p)).unwrap();
        if graph.curves().len() <= 6 {
            v.push(graph);
        }
    }
    v
}

#[test]
fn enumeration_matches_brute_force() {
    for g in small_graphs() {
        for k in 1..=g.boundaries().len() {
            let fast: Vec<Vec<usize>> = enumerate_separating_multicurves(&g, k)
                .unwrap()
                .into_iter()
                .map(|m| m.curves)
                .collect();
            assert_eq!(fast, brute_force(&g, k), "{} k={k}", g.id());
        }
    }
}

#[test]
fn ell_k_examples() {
    let g = four_holed_sphere([1.0; 4], 0.2).unwrap();
    assert_eq!(ell_k(&g, 1, None).unwrap().unwrap().length, 0.2);
    let chain = sphere_chain(&[1.0; 5], &[0.3, 0.4]).unwrap();
    assert_eq!(ell_k(&chain, 1, None).unwrap().unwrap().length, 0.3);
    assert!((ell_k(&chain, 2, None).unwrap().unwrap().length - 0.7).abs() < 1e-15);
    let long = four_holed_sphere([1.0; 4], 1.9).unwrap();
    assert!(ell_k(&long, 1, Some(1f64.asinh())).unwrap().is_none());
}

#[test]
fn witness_graphs_realize_the_lemma_table() {
    for g in 0..=2 {
        for b in 1..=6 {
            for p in 0..=2 {
                let sig = Signature::new(g, b, p);
                if !sig.is_hyperbolic() {
                    continue;
                }
                let graph = witness_graph(sig).unwrap();
                assert_eq!(graph.signature(), sig);
                let kmax = k_max(sig).unwrap();
                for k in 1..=b as usize {
                    let found = ell_k(&graph, k, None).unwrap().is_some();
                    let expected = ck_status(sig, k).unwrap() == CkStatus::NonEmpty;
                    assert_eq!(found, expected, "{sig} k={k} K={kmax}");
                }
            }
        }
    }
}

#[test]
fn dropping_a_merging_curve_gives_a_smaller_cut() {
    let g = sphere_chain(&[1.0; 6], &[0.2, 0.3, 0.4]).unwrap();
    for k in 2..=3 {
        let lower: Vec<Vec<usize>> = enumerate_separating_multicurves(&g, k - 1)
            .unwrap()
            .into_iter()
            .map(|m| m.curves)
            .collect();
        for mc in enumerate_separating_multicurves(&g, k).unwrap() {
            for &drop in &mc.curves {
                let rest: Vec<usize> = mc.curves.iter().copied().filter(|&c| c != drop).collect();
                assert!(lower.contains(&rest), "k={k} {:?} minus {drop}", mc.curves);
                let len: f64 = rest.iter().map(|&c| g.curves()[c].length).sum();
                assert!(len < mc.length);
            }
        }
    }
}

use hypsteklov::hypgeom::thick_thin_decomposition;
use hypsteklov::mesh::{
    cylinder_mesh, export_mesh, half_collar_mesh, import_mesh, mesh_surface, refine, validate_mesh, Region,
};
use hypsteklov::topology::{four_holed_sphere, one_holed_torus, sphere_chain, witness_graph};
use hypsteklov::{MeshOptions, Signature};
use std::f64::consts::PI;

fn log2_ratio(a: f64, b: f64) -> f64 {
    (a / b).log2()
}

#[test]
fn half_collar_boundary_length() {
    let len = 2.0 * 1f64.asinh();
    let m = half_collar_mesh(len, 0.1).unwrap();
    let core = m.boundary_index("core").unwrap();
    assert!((m.boundary_length(core) / len - 1.0).abs() < 0.01);
    let r = validate_mesh(&m).unwrap();
    assert_eq!(r.boundary_cycles, 2);
    assert_eq!(r.euler_characteristic, 0);
}

#[test]
fn four_holed_sphere_structure() {
    let g = four_holed_sphere([1.0; 4], 0.5).unwrap();
    let m = mesh_surface(&g, &MeshOptions::default()).unwrap();
    let r = validate_mesh(&m).unwrap();
    assert_eq!(r.boundary_cycles, 4);
    assert_eq!(r.euler_characteristic, -2);
    assert_eq!(r.dofs as i64 - r.edges as i64 + r.triangles as i64, -2);
}

#[test]
fn refinement_counts_and_invariants() {
    let g = four_holed_sphere([1.0; 4], 0.3).unwrap();
    let m = mesh_surface(&g, &MeshOptions::with_h(0.2)).unwrap();
    let f = refine(&m);
    assert_eq!(f.triangles.len(), 4 * m.triangles.len());
    assert_eq!(f.boundary_edges.len(), 2 * m.boundary_edges.len());
    assert_eq!(f.level, m.level + 1);
    let r = validate_mesh(&f).unwrap();
    assert_eq!(r.boundary_cycles, 4);
}

#[test]
fn area_converges_to_gauss_bonnet() {
    let g = four_holed_sphere([1.0; 4], 0.5).unwrap();
    let exact = 2.0 * PI * 2.0;
    let mut m = mesh_surface(&g, &MeshOptions::default()).unwrap();
    let mut errs = Vec::new();
    for _ in 0..3 {
        errs.push((m.total_area() - exact).abs());
        m = refine(&m);
    }
    errs.push((m.total_area() - exact).abs());
    for w in errs.windows(2) {
        assert!(log2_ratio(w[0], w[1]) >= 1.8, "{errs:?}");
    }
    assert!(errs[3] / exact < 1e-3);
}

#[test]
fn boundary_lengths_are_exact_on_pants_meshes() {
    let g = sphere_chain(&[0.7, 1.0, 1.3, 2.0, 0.5], &[0.4, 0.9]).unwrap();
    let m = refine(&mesh_surface(&g, &MeshOptions::default()).unwrap());
    for (i, b) in g.boundaries().iter().enumerate() {
        let idx = m.boundary_index(&b.label).unwrap();
        assert!((m.boundary_length(idx) - b.length).abs() < 1e-12 * b.length, "boundary {i}");
    }
}

#[test]
fn witness_surfaces_mesh_cleanly() {
    for (g, b) in [(0, 3), (0, 5), (1, 1), (1, 2), (2, 1), (1, 3)] {
        let graph = witness_graph(Signature::new(g, b, 0)).unwrap();
        let m = mesh_surface(&graph, &MeshOptions::with_h(0.2)).unwrap();
        let r = validate_mesh(&m).unwrap();
        assert_eq!(r.boundary_cycles, b as usize);
        assert_eq!(r.euler_characteristic, graph.euler_characteristic());
    }
    let torus = one_holed_torus(1.0, 0.8).unwrap();
    validate_mesh(&mesh_surface(&torus, &MeshOptions::with_h(0.2)).unwrap()).unwrap();
}

#[test]
fn cusped_surfaces_are_rejected() {
    let graph = witness_graph(Signature::new(0, 2, 1)).unwrap();
    assert!(mesh_surface(&graph, &MeshOptions::default()).is_err());
}

#[test]
fn short_curves_and_boundaries_mesh() {
    let g = sphere_chain(&[0.2; 5], &[0.2, 0.2]).unwrap();
    let m = mesh_surface(&g, &MeshOptions::default()).unwrap();
    validate_mesh(&m).unwrap();
    let g = four_holed_sphere([1.0; 4], 0.05).unwrap();
    validate_mesh(&mesh_surface(&g, &MeshOptions::default()).unwrap()).unwrap();
}

#[test]
fn text_format_round_trips_exactly() {
    let g = four_holed_sphere([1.0, 0.8, 1.2, 1.0], 0.3).unwrap();
    let m = refine(&mesh_surface(&g, &MeshOptions::with_h(0.25)).unwrap());
    let text = export_mesh(&m);
    let back = import_mesh(&text).unwrap();
    assert_eq!(back, m);
    assert_eq!(export_mesh(&back), text);
    assert!(import_mesh("not a mesh").is_err());
    let broken = text.replacen("triangles", "triangels", 1);
    assert!(import_mesh(&broken).is_err());
}

#[test]
fn model_meshes_are_reflection_symmetric() {
    let len = 1.3;
    let m = cylinder_mesh(len, 0.1).unwrap();
    let key = |s: f64, t: f64| ((s * 1e9).round() as i64, (t * 1e9).round() as i64);
    let pts: std::collections::HashSet<_> = m.vertices.iter().map(|v| key(v.pos[0], v.pos[1])).collect();
    for v in &m.vertices {
        assert!(pts.contains(&key(v.pos[0], -v.pos[1])));
        let shifted = (v.pos[0] + len / 2.0) % len;
        assert!(pts.contains(&key(shifted, v.pos[1])) || shifted.abs() < 1e-12);
    }
}

#[test]
fn collar_tags_approximate_collar_area() {
    let g = four_holed_sphere([1.0; 4], 0.2).unwrap();
    let tt = thick_thin_decomposition(&g, g.beta()).unwrap();
    let m = refine(&mesh_surface(&g, &MeshOptions::default()).unwrap());
    let (_, collar) = tt.thin_collars[0];
    let area: f64 = (0..m.triangles.len())
        .filter(|&t| m.regions[t] == Region::Collar(0))
        .map(|t| m.triangle_area(t))
        .sum();
    assert!((area / collar.area() - 1.0).abs() < 0.02, "{area} vs {}", collar.area());
    assert!((tt.total_area() - 4.0 * PI).abs() < 1e-12);
}

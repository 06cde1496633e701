//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use hypsteklov::hypgeom::tube_width;
use hypsteklov::steklov::{
    assemble_stiffness, cylinder_model_spectrum, expand_modes, halfcollar_closed_form, verify_halfcollar_closed_forms,
    FarEnd,
};
use hypsteklov::topology::{ck_status, ell_k, k_max, witness_graph, CkStatus};
use hypsteklov::{solve_steklov, Signature};
use hypsteklov_cli::run::PointResult;
use hypsteklov_cli::{parse_plan, point_mesh, run_experiment, Plan, RunOptions, RunOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

type Check = Result<String, String>;

fn config(name: &str) -> Plan {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_plan(&text).unwrap_or_else(|d| panic!("{}: {d:?}", path.display()))
}

fn run(plan: &Plan, dir: &Path, workers: usize) -> Result<RunOutcome, String> {
    let out = run_experiment(
        plan,
        &RunOptions {
            workers,
            out: Some(dir.to_path_buf()),
        },
    )
    .map_err(|e| e.to_string())?;
    if !out.errors.is_empty() {
        return Err(format!("run errors: {:?}", out.errors));
    }
    Ok(out)
}

fn finest(p: &PointResult) -> &hypsteklov_cli::run::LevelResult {
    p.levels.last().expect("at least one level")
}

fn sweep_value(p: &PointResult) -> f64 {
    p.point.sweep.as_ref().map(|s| s.1).expect("swept point")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit_s: f64) -> Result<f64, String> {
    let t = start.elapsed().as_secs_f64();
    ensure(t <= limit_s, || format!("took {t:.1}s, limit {limit_s}s"))?;
    Ok(t)
}

fn criterion_1(tmp: &Path) -> Check {
    let start = Instant::now();
    let out = run(&config("acceptance_halfcollar.toml"), &tmp.join("c1"), 1)?;
    let mut notes = Vec::new();
    for p in &out.points {
        let len = sweep_value(p);
        let exact = halfcollar_closed_form(len, 1, FarEnd::Neumann).map_err(|e| e.to_string())?;
        let errs: Vec<f64> = p.levels.iter().map(|l| (l.spectrum[1].sigma - exact).abs()).collect();
        ensure(errs.len() == 4, || format!("len={len}: expected 4 levels"))?;
        let rel = errs[3] / exact;
        let order = errs.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min);
        ensure(rel < 0.01, || format!("len={len}: relative error {rel:.2e} at third refinement"))?;
        ensure(order >= 1.8, || format!("len={len}: observed order {order:.2}"))?;
        notes.push(format!("len={len:.4} err={rel:.1e} order>={order:.2}"));
    }
    let t = within_time(start, 120.0)?;
    Ok(format!("{} ({t:.1}s)", notes.join(", ")))
}

fn criterion_2(tmp: &Path) -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let samples: Vec<(f64, u32)> = (0..20).map(|_| (rng.gen_range(0.3..4.0), rng.gen_range(0..=8))).collect();
    let worst = verify_halfcollar_closed_forms(&samples, 1e-10).map_err(|e| e.to_string())?;
    let out = run(&config("acceptance_cylinder.toml"), &tmp.join("c2"), 1)?;
    let expected = expand_modes(&cylinder_model_spectrum(1.0, 4).map_err(|e| e.to_string())?);
    let fem = &finest(&out.points[0]).spectrum;
    let mut worst_fem = 0.0f64;
    for k in 0..5 {
        let (a, b) = (fem[k].sigma, expected[k]);
        let err = if b == 0.0 { a.abs() } else { (a / b - 1.0).abs() };
        ensure(err < 0.01, || format!("cylinder eigenvalue {k}: FEM {a} vs shooting {b}"))?;
        worst_fem = worst_fem.max(err);
    }
    let t = within_time(start, 120.0)?;
    Ok(format!("gate max error {worst:.1e}, cylinder max relative error {worst_fem:.2e} ({t:.1}s)"))
}

fn criterion_3(out: &RunOutcome, seconds: f64) -> Check {
    let mut notes = Vec::new();
    for p in &out.points {
        for l in &p.levels {
            let r = l.bounds.iter().find(|r| r.k == 1).ok_or("missing k=1 bound row")?;
            let ub = r.ub_arctan.ok_or("arctan bound missing")?;
            ensure(r.upper_bound_holds() == Some(true), || {
                format!("{} level {}: sigma_1 {} > bound {ub}", p.surface_id, l.level, r.sigma_k)
            })?;
        }
        let r = &finest(p).bounds[0];
        notes.push(format!("l={}: {:.4} <= {:.4}", sweep_value(p), r.sigma_k, r.ub_arctan.unwrap()));
    }
    ensure(seconds <= 300.0, || format!("took {seconds:.1}s"))?;
    Ok(format!("{} ({seconds:.1}s)", notes.join(", ")))
}

fn sigmas(out: &RunOutcome) -> BTreeMap<u64, (f64, f64, f64)> {
    out.points
        .iter()
        .map(|p| {
            let s = &finest(p).spectrum;
            let l = sweep_value(p);
            (l.to_bits(), (l, s[1].sigma, s[2].sigma))
        })
        .collect()
}

fn criterion_4(out: &RunOutcome, seconds: f64) -> Check {
    let s = sigmas(out);
    let ratios: Vec<f64> = s.values().map(|(l, s1, _)| s1 / l).collect();
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    ensure(max / min <= 5.0, || format!("sigma_1/l varies by {:.2}", max / min))?;
    let (l0, a, _) = s[&0.4f64.to_bits()];
    let (l1, b, _) = s[&0.05f64.to_bits()];
    let quad = (b / (l1 * l1)) / (a / (l0 * l0));
    ensure(quad >= 2.0, || format!("sigma_1/l^2 grows only by {quad:.2}"))?;
    ensure(seconds <= 600.0, || format!("took {seconds:.1}s"))?;
    Ok(format!("sigma_1/l spread {:.3}, sigma_1/l^2 ratio {quad:.2} ({seconds:.1}s)", max / min))
}

fn criterion_5(out: &RunOutcome) -> Check {
    let s = sigmas(out);
    let kmax = k_max(Signature::new(0, 4, 0)).map_err(|e| e.to_string())?;
    ensure(kmax == 1, || format!("K = {kmax}"))?;
    let (_, s1a, s2a) = s[&0.4f64.to_bits()];
    let (_, s1b, s2b) = s[&0.05f64.to_bits()];
    let drop2 = (s2a - s2b) / s2a;
    let drop1 = (s1a - s1b) / s1a;
    ensure(drop2 < 0.5, || format!("sigma_2 dropped by {:.1}%", 100.0 * drop2))?;
    ensure(drop1 > 0.8, || format!("sigma_1 dropped by only {:.1}%", 100.0 * drop1))?;
    Ok(format!("sigma_1 drop {:.1}%, sigma_2 change {:.1}%", 100.0 * drop1, -100.0 * drop2))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for g in 0..=2u32 {
        for b in 1..=6u32 {
            for p in 0..=2u32 {
                let sig = Signature::new(g, b, p);
                if !sig.is_hyperbolic() {
                    continue;
                }
                let st = |k: usize| ck_status(sig, k).map_err(|e| e.to_string());
                let bu = b as usize;
                ensure(st(bu)? == CkStatus::Empty, || format!("{sig}: C_b nonempty"))?;
                if (g, b, p) == (0, 3, 0) || (g, b, p) == (0, 2, 1) {
                    ensure(st(1)? == CkStatus::Empty, || format!("{sig}: C_1 nonempty"))?;
                }
                if (g >= 1 || p >= 2) && b >= 2 {
                    ensure(st(bu - 1)? == CkStatus::NonEmpty, || format!("{sig}: C_(b-1) empty"))?;
                }
                if g == 0 && p == 1 && b >= 3 {
                    ensure(st(bu - 2)? == CkStatus::NonEmpty && st(bu - 1)? == CkStatus::Empty, || {
                        format!("{sig}: item on one cusp")
                    })?;
                }
                if g == 0 && p == 0 && b >= 4 {
                    ensure(st(bu - 3)? == CkStatus::NonEmpty && st(bu - 2)? == CkStatus::Empty, || {
                        format!("{sig}: item on compact spheres")
                    })?;
                }
                let graph = witness_graph(sig).map_err(|e| e.to_string())?;
                ensure(graph.signature() == sig, || format!("{sig}: witness has wrong signature"))?;
                for k in 1..=bu {
                    let found = ell_k(&graph, k, None).map_err(|e| e.to_string())?.is_some();
                    ensure(found == (st(k)? == CkStatus::NonEmpty), || {
                        format!("{sig} k={k}: enumeration says {found}")
                    })?;
                }
                checked += 1;
            }
        }
    }
    let t = within_time(start, 60.0)?;
    Ok(format!("{checked} signatures ({t:.1}s)"))
}

fn criterion_7(plan: &Plan, out: &RunOutcome) -> Check {
    let start = Instant::now();
    let mut tube_checks = 0;
    for p in &out.points {
        for l in &p.levels {
            let tubes: Vec<_> = l.diagnostics.iter().filter(|d| d.check == "tube_energy").collect();
            ensure(!tubes.is_empty(), || format!("{} level {}: no tube-energy check", p.surface_id, l.level))?;
            for d in tubes {
                ensure(d.pass == Some(true), || format!("{} level {}: tube energy fails", p.surface_id, l.level))?;
                tube_checks += 1;
            }
        }
    }
    let mut worst_gb = 0.0f64;
    let mut worst_chart = 0.0f64;
    for point in &plan.points {
        let mesh = point_mesh(plan, point, plan.refinements).map_err(|e| e.to_string())?;
        let res = solve_steklov(&mesh, &plan.bc, plan.count).map_err(|e| e.to_string())?;
        let s = &res.eigenvalues;
        ensure(s[0].abs() <= 1e-8 * s[1].max(1.0), || format!("sigma_0 = {}", s[0]))?;
        let t0 = &res.traces[0];
        let mean = t0.iter().sum::<f64>() / t0.len() as f64;
        ensure(t0.iter().all(|v| (v - mean).abs() <= 1e-6 * mean.abs()), || "sigma_0 trace not constant".into())?;
        ensure(s.iter().all(|&x| x >= 0.0), || "negative eigenvalue".into())?;
        ensure(res.orthogonality_error <= 1e-8, || format!("orthogonality {:e}", res.orthogonality_error))?;
        let chi = mesh.euler_characteristic.unsigned_abs() as f64;
        let gb = (mesh.total_area() / (2.0 * std::f64::consts::PI * chi) - 1.0).abs();
        ensure(gb <= 1e-3, || format!("area relative error {gb:e}"))?;
        worst_gb = worst_gb.max(gb);
        let dofs = mesh.dof_map();
        let a = assemble_stiffness(&mesh, &dofs).map_err(|e| e.to_string())?;
        let b = assemble_stiffness(&mesh.rechart_similar(0.41, 0.9), &dofs).map_err(|e| e.to_string())?;
        let scale = a.max_abs();
        for i in 0..dofs.count {
            for (j, v) in a.row(i) {
                worst_chart = worst_chart.max((v - b.get(i, j)).abs() / scale);
            }
        }
        ensure(worst_chart <= 1e-10, || format!("dual-chart stiffness differs by {worst_chart:e}"))?;
    }
    let t = within_time(start, 300.0)?;
    Ok(format!(
        "{tube_checks} tube checks, area error <= {worst_gb:.1e}, chart error <= {worst_chart:.1e} ({t:.1}s)"
    ))
}

fn files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).into_iter().flatten().flatten() {
            let p = e.path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|x| x == "csv") {
                out.push(p.strip_prefix(dir).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}

fn criterion_8(tmp: &Path, dirs: &[(&str, PathBuf)]) -> Check {
    let mut compared = 0;
    for (name, first) in dirs {
        let second = tmp.join("rerun").join(name);
        run(&config(name), &second, 3)?;
        let a = files(first);
        ensure(a == files(&second), || format!("{name}: different file sets"))?;
        ensure(!a.is_empty(), || format!("{name}: no csv files"))?;
        for f in &a {
            let x = std::fs::read(first.join(f)).map_err(|e| e.to_string())?;
            let y = std::fs::read(second.join(f)).map_err(|e| e.to_string())?;
            ensure(x == y, || format!("{name}: {} differs", f.display()))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} csv files identical across reruns"))
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let tmp = tempfile::tempdir().expect("temporary directory");
    let tmp = tmp.path();
    assert!(tube_width(1.0).is_ok());
    let mut results: Vec<(u32, &str, Check)> = Vec::new();
    results.push((1, "half-collar oracle", criterion_1(tmp)));
    results.push((2, "closed-form gate and cylinder", criterion_2(tmp)));

    let upper_plan = config("acceptance_upper_bound.toml");
    let start = Instant::now();
    let upper = run(&upper_plan, &tmp.join("c3"), 1);
    let upper_s = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let rate = run(&config("acceptance_rate.toml"), &tmp.join("c4"), 1);
    let rate_s = start.elapsed().as_secs_f64();

    results.push((3, "arctan upper bound", upper.clone().and_then(|o| criterion_3(&o, upper_s))));
    results.push((4, "linear rate in the separating length", rate.clone().and_then(|o| criterion_4(&o, rate_s))));
    results.push((5, "gap above K", rate.clone().and_then(|o| criterion_5(&o))));
    results.push((6, "topology lemma table", criterion_6()));
    results.push((7, "structural invariants", upper.clone().and_then(|o| criterion_7(&upper_plan, &o))));
    let dirs = [
        ("acceptance_halfcollar.toml", tmp.join("c1")),
        ("acceptance_cylinder.toml", tmp.join("c2")),
        ("acceptance_upper_bound.toml", tmp.join("c3")),
        ("acceptance_rate.toml", tmp.join("c4")),
    ];
    results.push((8, "determinism", criterion_8(tmp, &dirs)));

    let mut failed = 0;
    for (id, name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

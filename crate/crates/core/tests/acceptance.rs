//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tfc_map::approx_inverse::{monte_carlo, ApproxInverseModel, InverseBasis};
use tfc_map::boundary_tools::Segment;
use tfc_map::boundary_tools::{four_segment_example, merge, tfc_one_boundary};
use tfc_map::complex_map::{MobiusMap, SwitchingMapping};
use tfc_map::config::ConfigFile;
use tfc_map::polynomial_map::{BilinearQuadMap, QuadSide, SerendipityQuadMap};
use tfc_map::projection_map::{density_controls, Direction, MultiRegionProjection};
use tfc_map::tfc_pipeline::{
    build_surface, ConstrainedExpression1d, CoonsPatch, DomainSpec, Field, InverseMap, Mapping, SurfaceOptions,
};
use tfc_map::{PolygonBoundary, RealPoint2};

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pt(u: f64, v: f64) -> RealPoint2 {
    RealPoint2::new(u, v)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn eq_points() -> (Vec<Complex64>, Vec<Complex64>) {
    (
        vec![c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)],
        vec![c(0.0, 0.0), c(5.0, -2.0), c(6.0, 8.0), c(-2.0, 4.0)],
    )
}

fn fig1_quad() -> BilinearQuadMap {
    BilinearQuadMap::new([pt(0.0, 0.0), pt(5.0, -2.0), pt(6.0, 8.0), pt(-2.0, 4.0)]).unwrap()
}

fn random_free_functions(rng: &mut ChaCha8Rng, n: usize) -> Vec<Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>> {
    (0..n)
        .map(|_| {
            let (a, b, d) = (
                c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                rng.gen_range(0.5..3.0),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
            Arc::new(move |z: Complex64| a * (b * z).sin() + d * z * z + (0.3 * z).exp())
                as Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>
        })
        .collect()
}

fn c1_mobius() -> Outcome {
    let z = [c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0)];
    // the reference coefficients send z_1 to -2-3i
    let w = [c(-2.0, -3.0), c(3.0, -1.0), c(0.0, 1.0)];
    let m = MobiusMap::from_points(z, w).map_err(|e| e.to_string())?;
    let err = [
        (m.alpha - c(-3.8, 4.4)).norm(),
        (m.beta - c(3.4, -0.2)).norm(),
        (m.gamma - c(1.0, 0.0)).norm(),
        (m.delta - c(-0.6, 3.8)).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let reps = 1000;
    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(MobiusMap::from_points(std::hint::black_box(z), w).unwrap());
    }
    let per_call = start.elapsed() / reps;
    check(
        err < 1e-9 && per_call < Duration::from_millis(1),
        format!("max coefficient error {err:.2e}, {per_call:?} per reconstruction"),
    )
}

fn c2_switching() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut configs = vec![eq_points()];
    while configs.len() < 6 {
        let z: Vec<Complex64> = (0..4).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let separated = (0..4).all(|i| (i + 1..4).all(|j| (z[i] - z[j]).norm() > 0.2));
        if separated {
            let w = (0..4).map(|_| c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))).collect();
            configs.push((z, w));
        }
    }
    let mut worst = 0.0_f64;
    for (z, w) in configs {
        let m = SwitchingMapping::build(z.clone(), w).map_err(|e| e.to_string())?;
        for i in 0..4 {
            for (j, &zj) in z.iter().enumerate() {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((m.phi(i, zj) - delta).norm());
            }
        }
    }
    check(worst < 1e-10, format!("max |phi_i(z_j) - delta_ij| = {worst:.2e} over 6 configurations"))
}

fn c3_tfc_embedding() -> Outcome {
    let (z, w) = eq_points();
    let m = SwitchingMapping::build(z.clone(), w.clone()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for g in random_free_functions(&mut rng, 5) {
        for (zi, wi) in z.iter().zip(&w) {
            let v = m.apply_tfc(|s| g(s), *zi).map_err(|e| e.to_string())?;
            worst = worst.max((v - wi).norm());
        }
    }
    check(worst < 1e-10, format!("max control residual {worst:.2e} for 5 free functions"))
}

fn random_in(poly_set: &[&PolygonBoundary], rng: &mut ChaCha8Rng) -> RealPoint2 {
    let bb = tfc_map::BoundingBox::of(poly_set.iter().flat_map(|p| p.vertices().iter().copied())).unwrap();
    loop {
        let p = pt(rng.gen_range(bb.min.u..bb.max.u), rng.gen_range(bb.min.v..bb.max.v));
        if poly_set.iter().any(|poly| poly.contains_strictly(p)) {
            return p;
        }
    }
}

fn projection_round_trip(name: &str, json: &str, seed: u64) -> Result<(f64, f64), String> {
    let cfg = ConfigFile::from_json(json).map_err(|e| e.to_string())?;
    let Mapping::Projection(m) = cfg.map.build_square().map_err(|e| e.to_string())? else {
        return Err(format!("{name}: not a projection document"));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z_polys: Vec<&PolygonBoundary> = m.regions().iter().map(|r| r.z_polygon()).collect();
    let w_polys: Vec<&PolygonBoundary> = m.regions().iter().map(|r| r.w_polygon()).collect();
    let mut round = 0.0_f64;
    for _ in 0..1000 {
        let z = random_in(&z_polys, &mut rng);
        let back = proj(&m, proj(&m, z, Direction::ZtoW)?, Direction::WtoZ)?;
        round = round.max(back.dist(z));
        let w = random_in(&w_polys, &mut rng);
        let back = proj(&m, proj(&m, w, Direction::WtoZ)?, Direction::ZtoW)?;
        round = round.max(back.dist(w));
    }
    let mut controls = 0.0_f64;
    for r in m.regions() {
        for (p, q) in r.z_polygon().vertices().iter().zip(r.w_polygon().vertices()) {
            controls = controls.max(proj(&m, *p, Direction::ZtoW)?.dist(*q));
            controls = controls.max(proj(&m, *q, Direction::WtoZ)?.dist(*p));
        }
    }
    Ok((round, controls))
}

fn proj(m: &MultiRegionProjection, p: RealPoint2, d: Direction) -> Result<RealPoint2, String> {
    m.project(p, d).map_err(|e| e.to_string())
}

fn c4_projection() -> Outcome {
    let (rt_t, cp_t) = projection_round_trip("tbeam", include_str!("../fixtures/tbeam.json"), 41)?;
    let (rt_c, cp_c) = projection_round_trip("cbeam", include_str!("../fixtures/cbeam.json"), 42)?;
    check(
        rt_t < 1e-9 && rt_c < 1e-9 && cp_t < 1e-10 && cp_c < 1e-10,
        format!("round trip T {rt_t:.2e} / C {rt_c:.2e}, controls T {cp_t:.2e} / C {cp_c:.2e}"),
    )
}

fn c5_density() -> Outcome {
    let w = PolygonBoundary::new(vec![
        pt(2.0, 0.0),
        pt(2.0, 1.6),
        pt(2.0, 2.0),
        pt(-2.0, 2.0),
        pt(-2.0, -2.0),
        pt(2.0, -2.0),
    ])
    .unwrap();
    let layout = density_controls(&w, RealPoint2::ORIGIN, RealPoint2::ORIGIN).map_err(|e| e.to_string())?;
    let worked = layout.z.vertex(0) == pt(1.0, 0.0) && layout.z.vertex(1) == pt(1.0, 0.8);

    let tbeam = ConfigFile::from_json(include_str!("../fixtures/tbeam.json")).map_err(|e| e.to_string())?;
    let Mapping::Projection(m) = tbeam.map.build_square().map_err(|e| e.to_string())? else {
        return Err("tbeam: not a projection document".into());
    };
    let q = m.regions()[0].w_polygon().clone();
    let region = density_controls(&q, RealPoint2::ORIGIN, pt(0.1, -0.2))
        .and_then(|l| l.into_region(pt(0.1, -0.2), RealPoint2::ORIGIN))
        .map_err(|e| e.to_string())?;
    let za = region.wedge_areas(Direction::ZtoW);
    let wa = region.wedge_areas(Direction::WtoZ);
    let (zt, wt): (f64, f64) = (za.iter().sum(), wa.iter().sum());
    let worst = za.iter().zip(&wa).map(|(a, b)| (a / zt - b / wt).abs()).fold(0.0, f64::max);
    let total = (zt - 4.0).abs() / 4.0;
    check(
        worked && worst < 1e-9 && total < 1e-9,
        format!(
            "worked value {}, max wedge fraction mismatch {worst:.2e} over {} wedges",
            if worked { "exact" } else { "wrong" },
            za.len()
        ),
    )
}

fn c6_merge() -> Outcome {
    let pieces = four_segment_example();
    let merged = merge(&pieces);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    let mut mismatches = 0;
    while checked < 10_000 {
        let x: f64 = rng.gen_range(-1.0..1.0);
        if pieces.breakpoints().iter().any(|b| (x - b).abs() <= 1e-9) {
            continue;
        }
        let k = pieces.active_segment(x).unwrap();
        if merged.eval(x).map_err(|e| e.to_string())? != pieces.segment(k)(x) {
            mismatches += 1;
        }
        checked += 1;
    }
    let jump = merged.eval(0.0).unwrap() - merged.eval(-1e-14).unwrap();
    check(
        mismatches == 0 && (jump + 1.0).abs() < 1e-12,
        format!("{mismatches} mismatches in {checked} samples, jump at 0 = {jump:.15}"),
    )
}

fn c7_one_boundary() -> Outcome {
    let merged = merge(&four_segment_example());
    let gs: Vec<Box<dyn Fn(f64, f64) -> f64>> = vec![
        Box::new(|_, _| 0.0),
        Box::new(|x, _| (5.0 * x).sin() * (x * (5.0 * x).cos()).exp()),
        Box::new(|x, y| x * y + 3.0),
        Box::new(|x, y| (x + 2.0 * y).cos() * 10.0),
        Box::new(|x, y| (x * x - y).exp()),
    ];
    let mut worst = 0.0_f64;
    for g in &gs {
        for i in 0..100 {
            let x = -1.0 + 2.0 * i as f64 / 99.0;
            let v = tfc_one_boundary(&merged, g, pt(x, -1.0)).map_err(|e| e.to_string())?;
            worst = worst.max((v - merged.eval(x).unwrap()).abs());
        }
    }
    check(worst < 1e-12, format!("max |S(x, -1) - f(x)| = {worst:.2e} for 5 free functions"))
}

fn c8_bilinear() -> Outcome {
    let m = fig1_quad();
    let mut worst = 0.0_f64;
    for j in 0..20 {
        for i in 0..20 {
            let z = pt(-1.0 + 2.0 * i as f64 / 19.0, -1.0 + 2.0 * j as f64 / 19.0);
            let back = m.inverse(m.apply(z)).map_err(|e| e.to_string())?;
            worst = worst.max(back.dist(z));
        }
    }
    let shift = pt(3.0, -2.0);
    let square = BilinearQuadMap::new(tfc_map::polynomial_map::SQUARE_CORNERS.map(|p| p + shift)).unwrap();
    let mut para = 0.0_f64;
    for k in 0..50 {
        let z = pt((0.37 * k as f64).sin(), (0.91 * k as f64).cos());
        let w = square.apply(z);
        para = para.max(square.inverse(w).map_err(|e| e.to_string())?.dist(z));
    }
    check(worst < 1e-10 && para < 1e-10, format!("400-point round trip {worst:.2e}, parallelogram branch {para:.2e}"))
}

fn c9_serendipity_circle() -> Outcome {
    let nodes: [RealPoint2; 8] =
        std::array::from_fn(|k| pt(3.0 * (k as f64 * PI / 4.0).cos(), 3.0 * (k as f64 * PI / 4.0).sin()));
    let m = SerendipityQuadMap::new(nodes).unwrap();
    let mut worst = 0.0_f64;
    for side in QuadSide::ALL {
        for i in 0..=1000 {
            let t = -1.0 + 2.0 * i as f64 / 1000.0;
            worst = worst.max((m.boundary(side, t).norm() - 3.0).abs() / 3.0);
        }
    }
    check((0.005..=0.02).contains(&worst), format!("max radial deviation {:.3}%", 100.0 * worst))
}

fn c10_approx_inverse() -> Outcome {
    let (z, w) = eq_points();
    let m = SwitchingMapping::build(z, w).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let forward = |s: Complex64| Ok(m.apply(s));
    let model =
        ApproxInverseModel::fit_grid(forward, 11, 20, InverseBasis::ComplexChebyshev).map_err(|e| e.to_string())?;
    let stats = monte_carlo(&model, forward, 100_000, 0).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(
        (1e-6..=1e-4).contains(&stats.mean) && elapsed < Duration::from_secs(10),
        format!("mean {:.4e}, 3 sigma {:.4e}, max {:.3e}, {:.2?}", stats.mean, stats.three_sigma, stats.max, elapsed),
    )
}

fn c11_coons() -> Outcome {
    let h = |a: f64, b: f64| 1.0 + a + 2.0 * b + 3.0 * a * b;
    let bilinear: [Segment; 4] = [
        Arc::new(move |a| h(a, -1.0)),
        Arc::new(move |b| h(1.0, b)),
        Arc::new(move |a| h(a, 1.0)),
        Arc::new(move |b| h(-1.0, b)),
    ];
    let p = CoonsPatch::new(bilinear).map_err(|e| e.to_string())?;
    let mut precision = 0.0_f64;
    for i in 0..20 {
        for j in 0..20 {
            let (a, b) = (-1.0 + 2.0 * i as f64 / 19.0, -1.0 + 2.0 * j as f64 / 19.0);
            precision = precision.max((p.eval(a, b) - h(a, b)).abs());
        }
    }
    let f = |a: f64, b: f64| (2.0 * a).sin() * (b + 0.5).cos() + a * a * b;
    let curves: [Segment; 4] = [
        Arc::new(move |a| f(a, -1.0)),
        Arc::new(move |b| f(1.0, b)),
        Arc::new(move |a| f(a, 1.0)),
        Arc::new(move |b| f(-1.0, b)),
    ];
    let p = CoonsPatch::new(curves).map_err(|e| e.to_string())?;
    let mut edges = 0.0_f64;
    for i in 0..=100 {
        let t = -1.0 + 2.0 * i as f64 / 100.0;
        for side in QuadSide::ALL {
            let q = side.point(t);
            edges = edges.max((p.eval(q.u, q.v) - f(q.u, q.v)).abs());
        }
    }
    check(
        precision < 1e-12 && edges < 1e-12,
        format!("bilinear precision {precision:.2e}, edge reproduction {edges:.2e}"),
    )
}

fn c12_constrained_expression() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut periodic, mut slope) = (0.0_f64, 0.0_f64);
    for _ in 0..10 {
        let degree = rng.gen_range(0..=6);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g = move |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let y = ConstrainedExpression1d::new(g);
        periodic = periodic.max((y.value(-3.0) - y.value(PI)).abs());
        let h = 1e-5;
        let d = (y.value(1.0 + h) - y.value(1.0 - h)) / (2.0 * h);
        slope = slope.max((d - 1.0).abs());
    }
    check(
        periodic < 1e-9 && slope < 1e-6,
        format!("max |y(-3) - y(pi)| = {periodic:.2e}, max |y'(1) - 1| = {slope:.2e}"),
    )
}

fn c13_end_to_end() -> Outcome {
    let f: Field = Arc::new(|p: RealPoint2| p.u.sin() * p.v.cos());
    let spec = DomainSpec::new(
        Mapping::Bilinear(fig1_quad()),
        InverseMap::Exact,
        [f.clone(), f.clone(), f.clone(), f.clone()],
        None,
    )
    .map_err(|e| e.to_string())?;
    let opts = SurfaceOptions::default();
    let s0 = build_surface(&spec, |_| 0.0, opts).map_err(|e| e.to_string())?;
    let s1 = build_surface(&spec, |w: RealPoint2| 5.0 * (w.u * w.v).cos() + w.u, opts).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut residual, mut g_effect) = (0.0_f64, 0.0_f64);
    for side in QuadSide::ALL {
        for _ in 0..50 {
            let w = spec.forward(side.point(rng.gen_range(-1.0..=1.0))).unwrap();
            let (a, b) = (s0.eval(w).map_err(|e| e.to_string())?, s1.eval(w).map_err(|e| e.to_string())?);
            residual = residual.max((a - f(w)).abs()).max((b - f(w)).abs());
            g_effect = g_effect.max((a - b).abs());
        }
    }
    check(
        residual < 1e-8 && g_effect < 1e-10,
        format!("boundary residual {residual:.2e}, free-function effect {g_effect:.2e} at 200 boundary points"),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 13] = [
        ("Mobius reconstruction", c1_mobius),
        ("switching property", c2_switching),
        ("complex TFC embedding", c3_tfc_embedding),
        ("projection round trip", c4_projection),
        ("density preservation", c5_density),
        ("Heaviside merge", c6_merge),
        ("one-boundary functional", c7_one_boundary),
        ("bilinear inverse", c8_bilinear),
        ("serendipity circle", c9_serendipity_circle),
        ("approximate inverse", c10_approx_inverse),
        ("Coons patch", c11_coons),
        ("1-D constrained expression", c12_constrained_expression),
        ("end-to-end surface", c13_end_to_end),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1)
            }
        }
    }
    println!("{} of {} criteria passed in {:.2?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tfc_map::config::ConfigFile;
use tfc_map::projection_map::{density_controls, Direction, MultiRegionProjection, ProjectionRegion};
use tfc_map::tfc_pipeline::Mapping;
use tfc_map::{PolygonBoundary, RealPoint2};

fn p(u: f64, v: f64) -> RealPoint2 {
    RealPoint2::new(u, v)
}

fn load(text: &str) -> MultiRegionProjection {
    match ConfigFile::from_json(text).unwrap().map.build_square().unwrap() {
        Mapping::Projection(m) => m,
        _ => panic!("fixture is not a projection map"),
    }
}

fn tbeam() -> MultiRegionProjection {
    load(include_str!("../fixtures/tbeam.json"))
}

fn cbeam() -> MultiRegionProjection {
    load(include_str!("../fixtures/cbeam.json"))
}

fn square_point(rng: &mut ChaCha8Rng) -> RealPoint2 {
    p(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

#[test]
fn tbeam_controls_and_center() {
    let m = tbeam();
    let w = m.project(p(1.0, 0.0), Direction::ZtoW).unwrap();
    assert!(w.dist(p(1.0, -4.0)) < 1e-14);
    assert!(m.project(p(0.0, 0.0), Direction::ZtoW).unwrap().dist(p(0.0, 0.0)) < 1e-15);
    let r = &m.regions()[0];
    for (a, b) in r.z_polygon().vertices().iter().zip(r.w_polygon().vertices()) {
        assert!(m.project(*a, Direction::ZtoW).unwrap().dist(*b) < 1e-13);
        assert!(m.project(*b, Direction::WtoZ).unwrap().dist(*a) < 1e-13);
    }
}

#[test]
fn tbeam_round_trip() {
    let m = tbeam();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..2000 {
        let z = square_point(&mut rng);
        let w = m.project(z, Direction::ZtoW).unwrap();
        assert!(m.regions()[0].w_polygon().contains(w));
        let back = m.project(w, Direction::WtoZ).unwrap();
        assert!(back.dist(z) < 1e-12, "{z:?} -> {w:?} -> {back:?}");
    }
}

#[test]
fn projection_scales_radially_inside_a_wedge() {
    // along a ray from c the image moves along the ray from upsilon, linearly in distance
    let m = tbeam();
    let edge = m.project(p(1.0, 0.0), Direction::ZtoW).unwrap();
    for t in [0.1, 0.25, 0.5, 0.9] {
        let w = m.project(p(t, 0.0), Direction::ZtoW).unwrap();
        assert!(w.dist(p(edge.u * t, edge.v * t)) < 1e-14);
    }
}

#[test]
fn cbeam_shared_boundary_is_continuous() {
    let m = cbeam();
    let w0 = m.project(p(1.0, 0.0), Direction::ZtoW).unwrap();
    assert!(w0.dist(p(1.0, 0.0)) < 1e-13);
    for a in [-0.9, -0.4, 0.0, 0.3, 0.8] {
        let above = m.project(p(a, 1e-9), Direction::ZtoW).unwrap();
        let below = m.project(p(a, -1e-9), Direction::ZtoW).unwrap();
        assert!(above.dist(below) < 1e-6, "a = {a}: {above:?} vs {below:?}");
    }
}

#[test]
fn cbeam_round_trip() {
    let m = cbeam();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let z = square_point(&mut rng);
        let w = m.project(z, Direction::ZtoW).unwrap();
        let back = m.project(w, Direction::WtoZ).unwrap();
        assert!(back.dist(z) < 1e-11);
    }
}

#[test]
fn points_outside_every_region_are_rejected() {
    let m = tbeam();
    assert!(m.project(p(1.5, 0.0), Direction::ZtoW).is_err());
    assert!(m.project(p(10.0, 10.0), Direction::WtoZ).is_err());
}

#[test]
fn non_star_shaped_region_is_rejected() {
    // c sees the far corner only through the notch
    let z = PolygonBoundary::unit_square();
    let w = PolygonBoundary::new(vec![p(-1.0, -1.0), p(1.0, -1.0), p(-0.9, -0.8), p(-1.0, 1.0)]).unwrap();
    assert!(ProjectionRegion::new(p(0.0, 0.0), p(0.5, 0.5), z, w).is_err());
}

fn pentagon() -> PolygonBoundary {
    PolygonBoundary::new(vec![p(0.0, 0.0), p(4.0, -1.0), p(6.0, 2.0), p(3.0, 5.0), p(-1.0, 3.0)]).unwrap()
}

#[test]
fn density_controls_preserve_wedge_mass() {
    let w = pentagon();
    let upsilon = p(2.5, 1.8);
    let c = p(0.2, -0.1);
    let layout = density_controls(&w, upsilon, c).unwrap();
    let region = layout.into_region(c, upsilon).unwrap();
    let zw = region.wedge_areas(Direction::ZtoW);
    let ww = region.wedge_areas(Direction::WtoZ);
    let zt: f64 = zw.iter().sum();
    let wt: f64 = ww.iter().sum();
    assert!((zt - 4.0).abs() < 1e-12);
    for (a, b) in zw.iter().zip(&ww) {
        assert!((a / zt - b / wt).abs() < 1e-12);
    }

    // Uniform samples in Z land in each W wedge with the wedge's area fraction.
    let n = 40_000usize;
    let mut counts = vec![0usize; ww.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..n {
        let out = region.project(square_point(&mut rng), Direction::ZtoW).unwrap();
        let k = region.wedge_index(out, Direction::WtoZ).unwrap().unwrap();
        counts[k] += 1;
    }
    for (k, &cnt) in counts.iter().enumerate() {
        let pr = ww[k] / wt;
        let sigma = (n as f64 * pr * (1.0 - pr)).sqrt();
        assert!((cnt as f64 - n as f64 * pr).abs() < 4.0 * sigma + 1.0, "wedge {k}: {cnt} vs {}", n as f64 * pr);
    }
}

#[test]
fn density_rejects_bad_projection_points() {
    let w = pentagon();
    assert!(density_controls(&w, p(2.5, 1.8), p(1.0, 0.0)).is_err());
    assert!(density_controls(&w, p(2.5, 1.8), p(3.0, 0.0)).is_err());
}

#[test]
fn exact_inverse_through_mapping() {
    let m = Mapping::Projection(tbeam());
    assert!(m.has_exact_inverse());
    let w = m.forward(p(0.3, -0.6)).unwrap();
    let z = m.exact_inverse(w).unwrap().unwrap();
    assert!(z.dist(p(0.3, -0.6)) < 1e-13);
}

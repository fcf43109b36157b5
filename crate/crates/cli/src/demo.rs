//! Data behind the worked figures. Every target writes a single CSV table.

use std::path::PathBuf;

use tfc_map::approx_inverse::InverseBasis;
use tfc_map::boundary_tools::{four_segment_example, merge, tfc_one_boundary};
use tfc_map::config::{ConfigFile, MapConfig, PointMap};
use tfc_map::polynomial_map::LinearTriangleMap;
use tfc_map::projection_map::Direction;
use tfc_map::tfc_pipeline::{interior_points, PointMode};
use tfc_map::RealPoint2;

use crate::commands::{accuracy, write_csv, write_histogram, CliResult};

const FIG1: [&str; 2] =
    [include_str!("../../core/fixtures/fig1_quad.json"), include_str!("../../core/fixtures/fig1_diamond.json")];
const FIG2: [&str; 5] = [
    include_str!("../../core/fixtures/fig2_top_center.json"),
    include_str!("../../core/fixtures/fig2_top_right.json"),
    include_str!("../../core/fixtures/fig2_bottom_left.json"),
    include_str!("../../core/fixtures/fig2_bottom_center.json"),
    include_str!("../../core/fixtures/fig2_bottom_right.json"),
];
const EQ_POINTS: &str = include_str!("../../core/fixtures/eq_points.json");
const FIG3: [&str; 3] = [
    EQ_POINTS,
    include_str!("../../core/fixtures/eq_points_rubber.json"),
    include_str!("../../core/fixtures/circle8_switching.json"),
];

/// Triangle used by the three-point example.
const TRIANGLE_Z: [RealPoint2; 3] =
    [RealPoint2::new(-1.0, -1.0), RealPoint2::new(1.0, -1.0), RealPoint2::new(-1.0, 1.0)];
const TRIANGLE_W: [RealPoint2; 3] = [RealPoint2::new(0.0, 0.0), RealPoint2::new(4.0, 1.0), RealPoint2::new(1.0, 3.0)];

fn build(text: &str) -> CliResult<PointMap> {
    Ok(ConfigFile::from_json(text)?.map.build()?)
}

/// `n × n` lattice of `[-1, 1]²` including the edges.
fn lattice(n: usize) -> Vec<RealPoint2> {
    let step = 2.0 / (n - 1) as f64;
    (0..n).flat_map(|j| (0..n).map(move |i| RealPoint2::new(-1.0 + step * i as f64, -1.0 + step * j as f64))).collect()
}

fn mapped_sets(maps: &[PointMap], n: usize) -> CliResult<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (k, m) in maps.iter().enumerate() {
        for z in lattice(n) {
            let w = m.forward(z)?;
            rows.push(vec![k as f64, z.u, z.v, w.u, w.v]);
        }
    }
    Ok(rows)
}

/// The diamond with its controls turned 30° clockwise.
fn rotated_diamond() -> CliResult<PointMap> {
    let MapConfig::Bilinear4 { w_pts } = ConfigFile::from_json(FIG1[1])?.map else {
        unreachable!("fixture kind is bilinear4")
    };
    let rot = num_complex::Complex64::from_polar(1.0, -std::f64::consts::PI / 6.0);
    let w_pts = w_pts.map(|p| RealPoint2::from_complex(p.to_complex() * rot));
    Ok(MapConfig::Bilinear4 { w_pts }.build()?)
}

pub fn run(figure: u8, seed: u64, out: Option<PathBuf>) -> CliResult<()> {
    let set_header = ["set", "a", "b", "x", "y"];
    match figure {
        1 => {
            let maps = [build(FIG1[0])?, build(FIG1[1])?, rotated_diamond()?];
            write_csv(out, &set_header, mapped_sets(&maps, 20)?)
        }
        2 => {
            let maps = FIG2.iter().map(|t| build(t)).collect::<CliResult<Vec<_>>>()?;
            write_csv(out, &set_header, mapped_sets(&maps, 30)?)
        }
        3 => {
            let maps = FIG3.iter().map(|t| build(t)).collect::<CliResult<Vec<_>>>()?;
            write_csv(out, &set_header, mapped_sets(&maps, 21)?)
        }
        4 => {
            let m = LinearTriangleMap::build(TRIANGLE_Z, TRIANGLE_W)?;
            let rows = lattice(21)
                .into_iter()
                .filter(|z| z.u + z.v <= 1e-12)
                .map(|z| {
                    let w = m.apply(z, Direction::ZtoW);
                    vec![z.u, z.v, w.u, w.v]
                })
                .collect::<Vec<_>>();
            write_csv(out, &["a", "b", "x", "y"], rows)
        }
        5 => {
            let samples = merge(&four_segment_example()).sample(1000)?;
            write_csv(out, &["x", "f"], samples.into_iter().map(|(x, f)| vec![x, f]))
        }
        6 => {
            let f = merge(&four_segment_example());
            let g = |x: f64, _y: f64| (5.0 * x).sin() * (x * (5.0 * x).cos()).exp();
            let rows = lattice(41)
                .into_iter()
                .map(|p| {
                    let zero = tfc_one_boundary(&f, |_, _| 0.0, p)?;
                    let with_g = tfc_one_boundary(&f, g, p)?;
                    Ok(vec![p.u, p.v, zero, with_g])
                })
                .collect::<tfc_map::Result<Vec<_>>>()?;
            write_csv(out, &["x", "y", "s_zero", "s_g"], rows)
        }
        7 => {
            let stats = accuracy(&build(EQ_POINTS)?, 20, 11, 100_000, seed, InverseBasis::ComplexChebyshev)?;
            write_histogram(out, &stats)
        }
        8 => {
            let PointMap::Square(mapping) = build(EQ_POINTS)? else { unreachable!("fixture is a square mapping") };
            let mut rows = Vec::new();
            for (code, mode) in [(0.0, PointMode::Grid), (1.0, PointMode::Collocation)] {
                for n in [9usize, 16, 28, 48] {
                    for p in interior_points(&mapping, mode, n)? {
                        rows.push(vec![code, n as f64, p.u, p.v]);
                    }
                }
            }
            write_csv(out, &["mode", "n", "x", "y"], rows)
        }
        _ => unreachable!("figure range is checked by the argument parser"),
    }
}

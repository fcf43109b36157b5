use std::f64::consts::PI;

use tfc_map::boundary_tools::{four_segment_example, heaviside, merge, tfc_one_boundary};
use tfc_map::config::boundary_from_json;
use tfc_map::{Error, RealPoint2};

#[test]
fn fixture_matches_built_in_example() {
    let from_file = merge(&boundary_from_json(include_str!("../fixtures/four_segment_boundary.json")).unwrap());
    let built_in = merge(&four_segment_example());
    for k in 0..=400 {
        let x = -1.0 + k as f64 / 200.0;
        assert!((from_file.eval(x).unwrap() - built_in.eval(x).unwrap()).abs() < 1e-14, "x = {x}");
    }
}

#[test]
fn merged_function_follows_each_segment() {
    let pieces = four_segment_example();
    let f = merge(&pieces);
    let oracle = |x: f64| {
        if x < -0.5 {
            -1.0 - 2.0 * x
        } else if x < 0.0 {
            1.0 + 4.0 * (1.0 + x) * x
        } else if x < 0.5 {
            (5.0 * PI * x).sin()
        } else {
            4.0 * (1.0 - x) * x
        }
    };
    for (x, y) in f.sample(1001).unwrap() {
        assert!((y - oracle(x)).abs() < 1e-14, "x = {x}");
    }
}

#[test]
fn breakpoints_belong_to_the_right_segment() {
    let f = merge(&four_segment_example());
    assert_eq!(f.eval(-0.5).unwrap(), 0.0);
    assert_eq!(f.eval(0.0).unwrap(), 0.0);
    assert!((f.eval(-1e-12).unwrap() - 1.0).abs() < 1e-10);
    assert!((f.eval(0.5).unwrap() - 1.0).abs() < 1e-15);
    assert!(f.eval(1.0).unwrap().abs() < 1e-15);
    assert!(matches!(f.eval(1.01), Err(Error::OutOfDomain(_))));
    assert_eq!(heaviside(-0.0), 1.0);
}

#[test]
fn one_boundary_functional_is_exact_on_the_edge() {
    let f = merge(&four_segment_example());
    for g in [|x: f64, y: f64| x * y + 3.0, |x: f64, y: f64| (x - y).exp()] {
        for k in 0..=40 {
            let x = -1.0 + k as f64 / 20.0;
            let v = tfc_one_boundary(&f, g, RealPoint2::new(x, -1.0)).unwrap();
            assert!((v - f.eval(x).unwrap()).abs() < 1e-14);
        }
        // at y = 1 the free function is untouched
        let top = tfc_one_boundary(&f, g, RealPoint2::new(0.3, 1.0)).unwrap();
        assert!((top - g(0.3, 1.0)).abs() < 1e-15);
    }
    assert!(tfc_one_boundary(&f, |_, _| f64::NAN, RealPoint2::new(0.0, 0.0)).is_err());
}

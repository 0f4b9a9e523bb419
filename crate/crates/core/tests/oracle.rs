//! The closed-form classifier against the brute-force oracle on a handful
//! of points from every region; the full sample lives in the acceptance run.

use ghzw_roof::bloch::InteriorPoint;
use ghzw_roof::oracle::brute_force_roof;
use ghzw_roof::roof::{classify, Region};
use nalgebra::Vector3;

fn compare(v: Vector3<f64>, seed: u64) -> (Region, f64, f64) {
    let p = InteriorPoint::new(v).unwrap();
    let c = classify(&p).unwrap();
    let o = brute_force_roof(&p, 4, 16, seed).unwrap();
    (c.region, c.value, o.value)
}

#[test]
fn classifier_matches_oracle_across_regions() {
    let points = [
        Vector3::new(0.0, 0.0, 0.5),
        Vector3::new(0.3, 0.1, 0.8),
        Vector3::new(0.56, 0.197, 0.632),
        Vector3::new(-0.2, 0.1, -0.9),
        Vector3::new(0.45, -0.2, -0.6),
        Vector3::new(0.05, 0.02, -0.1),
        Vector3::new(-0.7, 0.3, 0.1),
    ];
    let mut regions = std::collections::BTreeSet::new();
    for (k, v) in points.into_iter().enumerate() {
        let (region, cl, or) = compare(v, k as u64);
        regions.insert(region);
        assert!(
            (cl - or).abs() < 1e-3,
            "{v:?} ({region}): classifier {cl}, oracle {or}"
        );
        assert!(
            cl <= or + 1e-6,
            "{v:?} ({region}): classifier {cl} above oracle {or}"
        );
    }
    assert!(regions.len() >= 3, "{regions:?}");
}

#[test]
fn more_states_never_raise_the_minimum() {
    let p = InteriorPoint::new(Vector3::new(0.2, -0.3, 0.4)).unwrap();
    let vals: Vec<f64> = (2..=4)
        .map(|n| brute_force_roof(&p, n, 8, 5).unwrap().value)
        .collect();
    assert!(vals[1] <= vals[0] && vals[2] <= vals[1], "{vals:?}");
}

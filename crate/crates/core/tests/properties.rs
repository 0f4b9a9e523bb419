use std::f64::consts::{PI, TAU};

use ghzw_roof::bloch::{bloch_vector, BlochPoint, InteriorPoint};
use ghzw_roof::decomp::avg_tangle;
use ghzw_roof::oracle::{isometry_objective, IsometryParams};
use ghzw_roof::polytope::Tetrahedron;
use ghzw_roof::roof::{classify, roof_value, Region, Symmetry};
use ghzw_roof::tangle::{
    hyperdeterminant, sqrt_tau3_analytic, sqrt_threetangle, superpose, Amplitudes3Q,
};
use nalgebra::Vector3;
use num_complex::Complex64;
use proptest::prelude::*;

fn ball_point() -> impl Strategy<Value = Vector3<f64>> {
    (0.0..1.0f64, 0.0..TAU, 0.0..1.0f64).prop_map(|(u, phi, r)| {
        let theta = (1.0 - 2.0 * u).acos();
        Vector3::new(
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ) * r.cbrt()
            * 0.999_999
    })
}

fn su2(a: f64, b: f64, c: f64) -> [[Complex64; 2]; 2] {
    let (ea, eb) = (Complex64::from_polar(1.0, b), Complex64::from_polar(1.0, c));
    let (s, co) = a.sin_cos();
    [[ea * co, -eb.conj() * s], [eb * s, ea.conj() * co]]
}

fn roof(v: &Vector3<f64>) -> f64 {
    classify(&InteriorPoint::new(*v).unwrap()).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hyperdeterminant_modulus_is_local_unitary_invariant(
        amps in prop::array::uniform16(-1.0..1.0f64),
        angles in prop::array::uniform9(0.0..TAU),
        q in 0usize..3,
    ) {
        let psi: [Complex64; 8] = std::array::from_fn(|k| Complex64::new(amps[2 * k], amps[2 * k + 1]));
        prop_assume!(psi.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3);
        let a = Amplitudes3Q::new(psi).normalize().unwrap();
        let before = hyperdeterminant(&a).unwrap().norm();
        let b = a
            .apply_local(0, su2(angles[0], angles[1], angles[2]))
            .apply_local(1, su2(angles[3], angles[4], angles[5]))
            .apply_local(2, su2(angles[6], angles[7], angles[8]));
        prop_assert!((hyperdeterminant(&b).unwrap().norm() - before).abs() < 1e-12);
        let perm = [[1, 0, 2], [0, 2, 1], [2, 1, 0]][q];
        prop_assert!((hyperdeterminant(&a.permute(perm)).unwrap().norm() - before).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_amplitudes(p in 0.0..=1.0f64, phi in -TAU..TAU) {
        let direct = sqrt_threetangle(&superpose(p, phi).unwrap()).unwrap().value();
        let closed = sqrt_tau3_analytic(p, phi).unwrap().value();
        prop_assert!((direct - closed).abs() < 1e-7, "{direct} vs {closed}");
    }

    #[test]
    fn roof_on_sphere_is_the_pure_tangle(p in 0.0..=1.0f64, phi in 0.0..TAU) {
        let v = roof_value(p, phi, 1.0).unwrap();
        prop_assert!((v - sqrt_tau3_analytic(p, phi).unwrap().value()).abs() < 1e-12);
    }

    #[test]
    fn decomposition_reproduces_the_state(v in ball_point()) {
        let r = classify(&InteriorPoint::new(v).unwrap()).unwrap();
        let d = &r.decomposition;
        prop_assert!((d.barycenter() - v).amax() < 1e-10);
        prop_assert!((d.weight_sum() - 1.0).abs() < 1e-12);
        prop_assert!((avg_tangle(d) - r.value).abs() < 1e-12);
        prop_assert_eq!(r.value == 0.0, r.region == Region::ZeroPolytope);
    }

    #[test]
    fn roof_is_below_every_isometry_decomposition(
        v in ball_point(),
        n in 2usize..=4,
        raw in prop::collection::vec(-2.0..2.0f64, 16),
    ) {
        let point = InteriorPoint::new(v).unwrap();
        let params = IsometryParams::from_raw(n, &raw[..4 * n]).unwrap();
        prop_assert!(roof(&v) <= isometry_objective(&point, &params) + 1e-9);
    }

    #[test]
    fn roof_respects_the_symmetry_group(v in ball_point(), k in 0usize..3, conjugate: bool) {
        let g = Symmetry { rotation: TAU * k as f64 / 3.0, conjugate };
        prop_assert!((roof(&g.apply(&v)) - roof(&v)).abs() < 1e-9);
    }

    #[test]
    fn roof_is_convex_along_segments(a in ball_point(), b in ball_point(), t in 0.0..=1.0f64) {
        let mid = roof(&(a * t + b * (1.0 - t)));
        prop_assert!(mid <= t * roof(&a) + (1.0 - t) * roof(&b) + 1e-9);
    }

    #[test]
    fn roof_grows_with_radius_on_the_axis(p in 0.63..1.0f64) {
        let outer = roof_value(p, 0.0, 1.0).unwrap();
        let inner = roof_value(p, 0.0, 0.9).unwrap();
        prop_assert!(inner <= outer + 1e-12);
    }

    #[test]
    fn barycentric_coordinates_reconstruct(w in prop::array::uniform4(0.01..1.0f64)) {
        let verts = [
            bloch_vector(1.0, 0.0),
            bloch_vector(0.2, 0.0),
            bloch_vector(0.2, 2.0 * PI / 3.0),
            bloch_vector(0.2, -2.0 * PI / 3.0),
        ];
        let t = Tetrahedron::new(verts).unwrap();
        let total: f64 = w.iter().sum();
        let x: Vector3<f64> = verts.iter().zip(&w).map(|(v, wi)| v * (wi / total)).sum();
        let bary = t.barycentric(&x);
        for k in 0..4 {
            prop_assert!((bary[k] - w[k] / total).abs() < 1e-12);
        }
    }

    #[test]
    fn bloch_points_round_trip(p in 0.001..0.999f64, phi in -PI..PI) {
        let b = BlochPoint::new(p, phi).unwrap();
        let back = BlochPoint::from_direction(&b.cartesian()).unwrap();
        prop_assert!((back.p - p).abs() < 1e-12);
        prop_assert!((back.cartesian() - b.cartesian()).norm() < 1e-12);
    }
}

//! Location of the entangled tips of the (3,1) tetrahedra and of the lower
//! (2,1) circles by convexifying characteristic curves.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::convex::{convexify, CharacteristicCurve, ConvexTangent};
use super::formulas::{oneone_partner, twoone_partner};
use crate::bloch::{plane_through_points, ray_exit, wrap_angle, BlochPoint};
use crate::error::{Error, Result};
use crate::optimize::scan_then_golden;
use crate::polytope::ZeroPolytope;

const CURVE_SAMPLES: usize = 2001;

/// The GHZ/W zero vertices as unit vectors: `W` at the south pole and
/// `Z1, Z2, Z3` at heights `p₀` with phases `π/3, −π/3, π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroVertices {
    pub w: Vector3<f64>,
    pub z1: Vector3<f64>,
    pub z2: Vector3<f64>,
    pub z3: Vector3<f64>,
}

impl ZeroVertices {
    fn from_polytope(zp: &ZeroPolytope) -> Result<Self> {
        let pick = |phi: f64| -> Result<Vector3<f64>> {
            zp.vertices
                .iter()
                .find(|v| v.p > 0.5 && wrap_angle(v.phi - phi).abs() < 1e-6)
                .map(|v| v.cartesian())
                .ok_or_else(|| Error::DegeneratePolytope(format!("no zero vertex at phase {phi}")))
        };
        let w = zp
            .vertices
            .iter()
            .find(|v| v.p < 1e-12)
            .map(|v| v.cartesian())
            .ok_or_else(|| Error::DegeneratePolytope("no zero vertex at W".into()))?;
        Ok(Self {
            w,
            z1: pick(PI / 3.0)?,
            z2: pick(-PI / 3.0)?,
            z3: pick(PI)?,
        })
    }

    pub fn ghz_w() -> Result<&'static ZeroVertices> {
        static CELL: OnceLock<Result<ZeroVertices>> = OnceLock::new();
        CELL.get_or_init(|| ZeroPolytope::ghz_w().and_then(|zp| Self::from_polytope(&zp)))
            .as_ref()
            .map_err(Clone::clone)
    }
}

/// `√τ₃` of the pure state in direction `n`.
pub(crate) fn surface_tangle(n: &Vector3<f64>) -> f64 {
    BlochPoint::from_direction(n)
        .map(|b| b.sqrt_tangle())
        .unwrap_or(f64::NAN)
}

/// Average tangle of `rho = (1 − 1/s)·e + (1/s)·n` with a zero-tangle `e`.
pub(crate) fn one_state_value(
    e: &Vector3<f64>,
    rho: &Vector3<f64>,
) -> Result<(f64, Vector3<f64>, f64)> {
    let (n, s) = ray_exit(e, rho)?;
    Ok((surface_tangle(&n) / s, n, 1.0 / s))
}

/// Result of a tip search: the convexified curve, the touching point,
/// its partner in the auxiliary basis, and the three symmetric tip states.
///
/// `theta0` is the polar angle of the auxiliary axis, `theta1` the angle
/// between that axis and the tip, and `theta` the tip's polar angle in the
/// GHZ/W frame.
#[derive(Clone, Debug, Serialize)]
pub struct TipSearch {
    pub curve: CharacteristicCurve,
    pub tangent: ConvexTangent,
    /// Auxiliary-basis height of the tip, from the line–sphere intersection.
    pub partner: f64,
    /// The same height from the closed chord formula.
    pub partner_formula: f64,
    pub theta0: f64,
    pub theta1: f64,
    pub theta: f64,
    pub states: [BlochPoint; 3],
}

fn symmetric_images(b: BlochPoint) -> [BlochPoint; 3] {
    [b, b.rotated(-2.0 * PI / 3.0), b.rotated(2.0 * PI / 3.0)]
}

/// Aux-basis height and `cos φ` of `v` for the axis `north` in the real plane.
fn aux_coordinates(v: &Vector3<f64>, north: &Vector3<f64>) -> (f64, f64) {
    let east = Vector3::new(north.z, 0.0, -north.x);
    let p = (1.0 + v.dot(north)) / 2.0;
    let r = 2.0 * (p * (1.0 - p)).sqrt();
    (p, if r > 0.0 { v.dot(&east) / r } else { 1.0 })
}

/// Tips `N₁, N₂, N₃` of the tetrahedra over the lower faces of the zero-polytope.
///
/// Mixes `Z₃` with its antipode `Z₃⊥`, decomposes each mixture as the (2,1)
/// family with the pair `Z₁, Z₂`, and convexifies from the point where the
/// mixture enters the face `W Z₁ Z₂`. `N₁` lies at phase 0, `N₂` at `−2π/3`,
/// `N₃` at `2π/3`.
pub fn find_n_states() -> Result<TipSearch> {
    let v = ZeroVertices::ghz_w()?;
    let u = -v.z3;
    let e12 = (v.z1 + v.z2) / 2.0;
    let rho = |p: f64| u * (1.0 - 2.0 * p);
    let d = e12 - v.w;
    // (u − 2p·u − W) × d has vanishing y-component at the face.
    let p_exit = (u - v.w).cross(&d).y / (2.0 * u.cross(&d).y);
    let value = |p: f64| {
        one_state_value(&e12, &rho(p))
            .map(|r| r.0)
            .unwrap_or(f64::NAN)
    };
    let curve = CharacteristicCurve::from_fn(0.0, p_exit, CURVE_SAMPLES, value)?;
    let tangent = convexify(&curve)?;

    let (_, n, _) = one_state_value(&e12, &rho(tangent.p_c))?;
    let partner = (1.0 + n.dot(&v.z3)) / 2.0;
    let (p1, cos1) = aux_coordinates(&v.z1, &v.z3);
    let partner_formula = twoone_partner(p1, cos1.clamp(-1.0, 1.0).acos(), tangent.p_c)?;
    let theta0 = u.z.clamp(-1.0, 1.0).acos();
    let theta1 = PI - (2.0 * partner - 1.0).clamp(-1.0, 1.0).acos();
    let tip = BlochPoint::from_direction(&n)?;
    Ok(TipSearch {
        curve,
        tangent,
        partner,
        partner_formula,
        theta0,
        theta1,
        theta: theta0 + theta1,
        states: symmetric_images(BlochPoint { p: tip.p, phi: 0.0 }),
    })
}

/// Tips `M₁, M₂, M₃` below the lower edges `W Zₖ`.
///
/// Mixes the direction opposite to `(Z₁ + Z₂)` with its antipode,
/// decomposes as (1,1) with `Z₃`, and convexifies from the point where the
/// mixture reaches the edge `W Z₃`. `M₃` lies at phase `π`, `M₁` at `π/3`,
/// `M₂` at `−π/3`.
pub fn find_m_states() -> Result<TipSearch> {
    let v = ZeroVertices::ghz_w()?;
    let e_minus = -((v.z1 + v.z2) / 2.0).normalize();
    let rho = |q: f64| e_minus * (2.0 * q - 1.0);
    let d = v.z3 - v.w;
    let q_exit = -(-e_minus - v.w).cross(&d).y / (2.0 * e_minus.cross(&d).y);
    let value = |q: f64| {
        one_state_value(&v.z3, &rho(q))
            .map(|r| r.0)
            .unwrap_or(f64::NAN)
    };
    let curve = CharacteristicCurve::from_fn(q_exit, 1.0, CURVE_SAMPLES, value)?;
    let tangent = convexify(&curve)?;

    let (_, n, _) = one_state_value(&v.z3, &rho(tangent.p_c))?;
    let partner = (1.0 + n.dot(&e_minus)) / 2.0;
    let (p1, _) = aux_coordinates(&v.z3, &e_minus);
    let partner_formula = oneone_partner(p1, tangent.p_c)?.0;
    let theta0 = e_minus.z.clamp(-1.0, 1.0).acos();
    let theta1 = (2.0 * partner - 1.0).clamp(-1.0, 1.0).acos();
    let tip = BlochPoint::from_direction(&n)?;
    let m3 = BlochPoint { p: tip.p, phi: PI };
    Ok(TipSearch {
        curve,
        tangent,
        partner,
        partner_formula,
        theta0,
        theta1,
        theta: theta0 + theta1,
        states: [m3.rotated(-2.0 * PI / 3.0), m3.rotated(2.0 * PI / 3.0), m3],
    })
}

/// Optimal (2,1) decompositions along the chord from `n` to `m`.
#[derive(Clone, Debug, Serialize)]
pub struct LowerCircleTrace {
    pub lambdas: Vec<f64>,
    /// Position of the zero-pair point along the lower edge (0 at `W`).
    pub lambda2: Vec<f64>,
    pub states: Vec<BlochPoint>,
    pub values_21: Vec<f64>,
    /// Best (1,1) value using either end of the edge alone.
    pub values_11: Vec<f64>,
}

const LAMBDA2_SCAN: usize = 41;
const LAMBDA2_TOL: f64 = 1e-9;

/// `(λ, λ₂, state, (2,1) value, best (1,1) value)`.
type TracePoint = (f64, f64, BlochPoint, f64, f64);

/// For each grid point of the chord `n → m`, minimize the (2,1) average
/// tangle over the zero-pair point on the lower edge `W Zₖ` nearest `m`,
/// and record the entangled state of the optimum.
pub fn optimize_21_line(n: BlochPoint, m: BlochPoint, grid: usize) -> Result<LowerCircleTrace> {
    if grid < 2 {
        return Err(Error::InvalidInput("grid needs at least 2 points".into()));
    }
    let v = ZeroVertices::ghz_w()?;
    let mv = m.cartesian();
    let z = [v.z1, v.z2, v.z3]
        .into_iter()
        .max_by(|a, b| a.dot(&mv).total_cmp(&b.dot(&mv)))
        .expect("three vertices");
    let (nv, w) = (n.cartesian(), v.w);

    let rows: Vec<Result<TracePoint>> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let lambda = i as f64 / (grid - 1) as f64;
            let rho = nv * (1.0 - lambda) + mv * lambda;
            let h = |l2: f64| {
                let e = w * (1.0 - l2) + z * l2;
                one_state_value(&e, &rho)
                    .map(|r| r.0)
                    .unwrap_or(f64::INFINITY)
            };
            let (l2, best) = scan_then_golden(h, 0.0, 1.0, LAMBDA2_SCAN, LAMBDA2_TOL);
            let e = w * (1.0 - l2) + z * l2;
            let (_, state, _) = one_state_value(&e, &rho)?;
            let v11 = h(0.0).min(h(1.0));
            Ok((lambda, l2, BlochPoint::from_direction(&state)?, best, v11))
        })
        .collect();

    let mut trace = LowerCircleTrace {
        lambdas: Vec::with_capacity(grid),
        lambda2: Vec::with_capacity(grid),
        states: Vec::with_capacity(grid),
        values_21: Vec::with_capacity(grid),
        values_11: Vec::with_capacity(grid),
    };
    for row in rows {
        let (lambda, l2, state, v21, v11) = row?;
        trace.lambdas.push(lambda);
        trace.lambda2.push(l2);
        trace.states.push(state);
        trace.values_21.push(v21);
        trace.values_11.push(v11);
    }
    Ok(trace)
}

/// Circle through a sequence of points: the plane through the first,
/// middle and last point, the projection of the origin as centre, and the
/// mean distance to it as radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleFit {
    pub normal: Vector3<f64>,
    pub distance: f64,
    pub center: Vector3<f64>,
    pub radius: f64,
    /// Largest distance of any point from the plane.
    pub plane_residual: f64,
    /// Largest deviation of any point's distance to the centre from the radius.
    pub radius_residual: f64,
}

pub fn fit_circle(points: &[Vector3<f64>]) -> Result<CircleFit> {
    if points.len() < 3 {
        return Err(Error::InvalidInput("need at least 3 points".into()));
    }
    let a = points[0];
    let b = points[points.len() / 2];
    let c = points[points.len() - 1];
    let (normal, distance) = plane_through_points(&a, &b, &c)?;
    let offset = normal.dot(&a);
    let center = normal * offset;
    let radius = points.iter().map(|p| (p - center).norm()).sum::<f64>() / points.len() as f64;
    let plane_residual = points
        .iter()
        .map(|p| (normal.dot(p) - offset).abs())
        .fold(0.0, f64::max);
    let radius_residual = points
        .iter()
        .map(|p| ((p - center).norm() - radius).abs())
        .fold(0.0, f64::max);
    Ok(CircleFit {
        normal,
        distance,
        center,
        radius,
        plane_residual,
        radius_residual,
    })
}

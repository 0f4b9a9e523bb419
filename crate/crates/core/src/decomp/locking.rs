//! Numerical check that zero-states cannot be moved out of an optimal
//! decomposition: near a simple zero the tangle grows like `ε^{1/2}`, which
//! beats the linear gain from reweighting.

use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use super::{is_zero_state, Decomposition};
use crate::bloch::BlochPoint;
use crate::error::{Error, Result};

const BARYCENTER_TOL: f64 = 1e-10;
const FIT_POINTS: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LockingReport {
    /// Perturbation sizes that produced a valid decomposition, decreasing.
    pub eps_values: Vec<f64>,
    /// Average tangle after each perturbation.
    pub t_values: Vec<f64>,
    pub t0: f64,
    /// Slope of `log(T(ε) − T(0))` against `log ε` over the smallest ε.
    pub fitted_exponent: f64,
    /// Perturbation sizes for which the barycenter could not be kept.
    pub skipped: Vec<f64>,
}

/// `1e-2 · 10^{−k/4}` for `k = 0..=8`, from `1e-2` down to `1e-4`.
pub fn default_locking_eps() -> Vec<f64> {
    (0..=8)
        .map(|k| 1e-2 * 10f64.powf(-(k as f64) / 4.0))
        .collect()
}

/// Unit tangent of increasing `φ`, or `x̂` at the poles.
fn surface_tangent(b: &BlochPoint) -> Vector3<f64> {
    if b.p <= 0.0 || b.p >= 1.0 {
        Vector3::x()
    } else {
        Vector3::new(-b.phi.sin(), b.phi.cos(), 0.0)
    }
}

fn raw_average(members: &[(f64, BlochPoint)]) -> f64 {
    members.iter().map(|(w, b)| w * b.sqrt_tangle()).sum()
}

/// Weights reproducing `target` from `states`, or `None` if that needs a
/// negative weight or leaves a residual.
fn resolve_weights(states: &[BlochPoint], target: &Vector3<f64>) -> Option<Vec<f64>> {
    let n = states.len();
    let a = DMatrix::from_fn(
        4,
        n,
        |r, c| if r < 3 { states[c].cartesian()[r] } else { 1.0 },
    );
    let b = DVector::from_vec(vec![target.x, target.y, target.z, 1.0]);
    let w = a.clone().svd(true, true).solve(&b, 1e-14).ok()?;
    let residual = (&a * &w - &b).amax();
    (residual < BARYCENTER_TOL && w.iter().all(|&x| x >= 0.0)).then(|| w.iter().copied().collect())
}

/// Move the zero-state `vertex_index` of `decomp` by a geodesic distance `ε`
/// along increasing `φ` (along `x̂` at a pole), re-solve the weights to keep the barycenter, and
/// record the average tangle.
pub fn locking_perturbation(
    decomp: &Decomposition,
    vertex_index: usize,
    eps_list: &[f64],
) -> Result<LockingReport> {
    let member = decomp
        .members
        .get(vertex_index)
        .ok_or_else(|| Error::InvalidInput(format!("no member {vertex_index}")))?;
    if !is_zero_state(&member.1) {
        return Err(Error::InvalidInput(format!(
            "member {vertex_index} is not a zero-state"
        )));
    }
    if decomp.tag.1 != 1 || !(decomp.tag.0 == 2 || decomp.tag.0 == 3) {
        return Err(Error::InvalidInput(format!(
            "expected a (3,1) or (2,1) decomposition, got {:?}",
            decomp.tag
        )));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) || eps_list.iter().any(|&e| e.is_nan() || e <= 0.0)
    {
        return Err(Error::InvalidInput(
            "eps values must be positive and strictly decreasing".into(),
        ));
    }
    let zero = member.1.cartesian();
    let tangent = surface_tangent(&member.1);

    let target = decomp.barycenter();
    let t0 = raw_average(&decomp.members);
    let mut report = LockingReport {
        eps_values: vec![],
        t_values: vec![],
        t0,
        fitted_exponent: f64::NAN,
        skipped: vec![],
    };
    for &eps in eps_list {
        let mut states: Vec<BlochPoint> = decomp.members.iter().map(|(_, b)| *b).collect();
        states[vertex_index] =
            BlochPoint::from_direction(&(zero * eps.cos() + tangent * eps.sin()))?;
        match resolve_weights(&states, &target) {
            Some(w) => {
                let members: Vec<_> = w.into_iter().zip(states).collect();
                report.eps_values.push(eps);
                report.t_values.push(raw_average(&members));
            }
            None => report.skipped.push(eps),
        }
    }

    let pts: Vec<(f64, f64)> = report
        .eps_values
        .iter()
        .zip(&report.t_values)
        .rev()
        .take(FIT_POINTS)
        .filter(|(_, t)| **t > t0)
        .map(|(e, t)| (e.ln(), (t - t0).ln()))
        .collect();
    if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
        report.fitted_exponent = sxy / sxx;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::p0;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn ghz_tetra_decomposition() -> Decomposition {
        // Interior point of the tetrahedron GHZ, Z1, Z2, Z3.
        let z: Vec<BlochPoint> = [PI / 3.0, -PI / 3.0, PI]
            .iter()
            .map(|&f| BlochPoint::new(p0(), f).unwrap())
            .collect();
        Decomposition::new(vec![
            (0.4, BlochPoint::ghz()),
            (0.2, z[0]),
            (0.2, z[1]),
            (0.2, z[2]),
        ])
        .unwrap()
    }

    #[test]
    fn default_eps_spans_two_decades() {
        let e = default_locking_eps();
        assert_eq!(e.len(), 9);
        assert_abs_diff_eq!(e[0], 1e-2, epsilon = 1e-18);
        assert_abs_diff_eq!(e[8], 1e-4, epsilon = 1e-18);
    }

    #[test]
    fn square_root_scaling() {
        let d = ghz_tetra_decomposition();
        for k in 1..4 {
            let r = locking_perturbation(&d, k, &default_locking_eps()).unwrap();
            assert!(r.skipped.is_empty());
            assert_abs_diff_eq!(r.fitted_exponent, 0.5, epsilon = 0.05);
            assert!(r.t_values.iter().all(|&t| t > r.t0));
        }
    }

    #[test]
    fn vanishing_perturbation_is_continuous() {
        let d = ghz_tetra_decomposition();
        let r = locking_perturbation(&d, 2, &[1e-18]).unwrap();
        assert_abs_diff_eq!(r.t_values[0], r.t0, epsilon = 1e-8);
    }

    #[test]
    fn w_vertex_of_lower_tetrahedron() {
        // W, Z1, Z2 and a pure state below the face W Z1 Z2.
        let z1 = BlochPoint::new(p0(), PI / 3.0).unwrap();
        let z2 = BlochPoint::new(p0(), -PI / 3.0).unwrap();
        let n = BlochPoint::new(0.08, 0.0).unwrap();
        let d = Decomposition::new(vec![
            (0.3, BlochPoint::w()),
            (0.25, z1),
            (0.25, z2),
            (0.2, n),
        ])
        .unwrap();
        let r = locking_perturbation(&d, 0, &default_locking_eps()).unwrap();
        assert_abs_diff_eq!(r.fitted_exponent, 0.5, epsilon = 0.05);
    }

    #[test]
    fn rejects_entangled_vertex() {
        assert!(locking_perturbation(&ghz_tetra_decomposition(), 0, &[1e-3]).is_err());
    }
}

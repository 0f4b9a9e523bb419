//! Closed-form chord formulas for decompositions of axis points.
//!
//! All heights are GHZ weights `p`; an axis point with weight `p` sits at
//! `(0, 0, 2p − 1)`. Entangled pure states enter either singly on the real
//! great circle or as complex-conjugate pairs `(pᵢ, ±φᵢ)`, represented by
//! the midpoint of the pair.

use serde::{Deserialize, Serialize};

use crate::bloch::BlochPoint;
use crate::error::{check_probability, Error, Result};

/// Chord length from the real surface state at `p1` through the axis point `p`.
///
/// `2√((p − p₁)² + p₁(1 − p₁))`, the distance between `(2√(p₁(1−p₁)), 2p₁−1)`
/// and `(0, 2p − 1)`.
fn l1(p1: f64, p: f64) -> f64 {
    2.0 * ((p - p1).powi(2) + p1 * (1.0 - p1)).sqrt()
}

/// Partner height `p₂` and its weight `m₂` for the (1,1) chord from the real
/// surface state at `p1` through the axis point `p`.
pub fn oneone_partner(p1: f64, p: f64) -> Result<(f64, f64)> {
    check_probability("p1", p1)?;
    check_probability("p", p)?;
    let l1 = l1(p1, p);
    if l1 < 1e-300 {
        return Err(Error::Geometry(
            "axis point coincides with the chord start".into(),
        ));
    }
    // Power of the axis point: l1·l2 = 1 − (2p − 1)².
    let l2 = 4.0 * p * (1.0 - p) / l1;
    let p2 = 4.0 * p * p * (1.0 - p1) / (l1 * l1);
    Ok((p2.clamp(0.0, 1.0), l1 / (l1 + l2)))
}

/// Axis height reached by the chord between real surface states on opposite sides at `p1` and `p2`.
pub fn oneone_mix(p1: f64, p2: f64) -> Result<f64> {
    check_probability("p1", p1)?;
    check_probability("p2", p2)?;
    let a1 = (p1 * (1.0 - p1)).sqrt();
    let a2 = (p2 * (1.0 - p2)).sqrt();
    if a1 + a2 < 1e-300 {
        return Err(Error::NoCrossing);
    }
    Ok(p1 + (p2 - p1) * a1 / (a1 + a2))
}

/// Height `p′₂` of the conjugate pair at phase `±φ₂` that replaces the (1,1)
/// partner, keeping the pair midpoint on the chord from `p1` through `p`.
pub fn split_11_to_12(p1: f64, p: f64, phi2: f64) -> Result<f64> {
    check_probability("p1", p1)?;
    check_probability("p", p)?;
    let a = p1 * (1.0 - p1);
    let d = p - p1;
    let c = phi2.cos();
    let c2 = c * c;
    let den = 2.0 * (a + d * d * c2);
    if den < 1e-300 {
        return Err(Error::Geometry("degenerate chord".into()));
    }
    let disc = (4.0 * p * (1.0 - p) * a + d * d * c2).max(0.0);
    let num = 2.0 * a - d * (2.0 * p1 - 1.0) * c2 + c * disc.sqrt();
    Ok((p1 + d * num / den).clamp(0.0, 1.0))
}

/// Weights `(m₁, m₂)` of two conjugate pairs and the axis height they mix to.
pub fn twotwo_weights(p1: f64, phi1: f64, p2: f64, phi2: f64) -> Result<(f64, f64, f64)> {
    check_probability("p1", p1)?;
    check_probability("p2", p2)?;
    let s1 = (p1 * (1.0 - p1) * phi1.cos().powi(2)).sqrt();
    let s2 = (p2 * (1.0 - p2) * phi2.cos().powi(2)).sqrt();
    if s1 + s2 < 1e-300 {
        return Err(Error::NoCrossing);
    }
    let m2 = s1 / (s1 + s2);
    let m1 = 1.0 - m2;
    Ok((m1, m2, p1 * m1 + p2 * m2))
}

fn twoone_parameter(p1: f64, phi1: f64, p: f64) -> Result<f64> {
    check_probability("p1", p1)?;
    check_probability("p", p)?;
    let a = p1 * (1.0 - p1) * phi1.cos().powi(2);
    let d = p1 - p;
    let den = 2.0 * (d * d + a);
    if den < 1e-300 {
        return Err(Error::Geometry(
            "pair midpoint coincides with the axis point".into(),
        ));
    }
    let root = (d * d + 4.0 * p * (1.0 - p) * a).max(0.0).sqrt();
    Ok((d * (2.0 * p1 - 1.0) + 2.0 * a + root) / den)
}

/// Height of the real surface state on the far side of the chord from the
/// midpoint of the pair `(p1, ±φ1)` through the axis point `p`.
pub fn twoone_partner(p1: f64, phi1: f64, p: f64) -> Result<f64> {
    let t = twoone_parameter(p1, phi1, p)?;
    Ok((p1 + (p - p1) * t).clamp(0.0, 1.0))
}

/// [`twoone_partner`] as a surface point; its phase is `0` or `π`.
pub fn twoone_partner_point(p1: f64, phi1: f64, p: f64) -> Result<BlochPoint> {
    let t = twoone_parameter(p1, phi1, p)?;
    let x_mid = 2.0 * (p1 * (1.0 - p1)).sqrt() * phi1.cos();
    let x = x_mid * (1.0 - t);
    let phi = if x < 0.0 { std::f64::consts::PI } else { 0.0 };
    BlochPoint::new((p1 + (p - p1) * t).clamp(0.0, 1.0), phi)
}

/// Outcome of the (2,1) versus (0,2) comparison near a conjugate zero pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    TwoOne,
    ZeroTwo,
    Marginal,
}

impl Verdict {
    pub fn zero_two_optimal(self) -> bool {
        self == Verdict::ZeroTwo
    }
}

/// Compare `|τ''(0)|` with `τ₀·ρ/d₁`; the larger curvature favours (0,2).
pub fn decide_02_vs_21(tau0: f64, tau_dd: f64, outer_radius: f64, d1: f64) -> Result<Verdict> {
    if !(d1.is_finite() && d1 > 0.0) {
        return Err(Error::Domain {
            name: "d1",
            value: d1,
            domain: "(0, ∞)",
        });
    }
    if tau_dd >= 0.0 {
        return Ok(Verdict::TwoOne);
    }
    let diff = tau_dd.abs() - tau0 * outer_radius / d1;
    Ok(if diff.abs() <= 1e-12 {
        Verdict::Marginal
    } else if diff > 0.0 {
        Verdict::ZeroTwo
    } else {
        Verdict::TwoOne
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{bloch_vector, ray_exit};
    use approx::assert_abs_diff_eq;
    use nalgebra::Vector3;
    use std::f64::consts::PI;

    fn axis(p: f64) -> Vector3<f64> {
        Vector3::new(0.0, 0.0, 2.0 * p - 1.0)
    }

    #[test]
    fn oneone_examples() {
        let (p2, _) = oneone_partner(1.0, 0.4).unwrap();
        assert_eq!(p2, 0.0);
        let (p2, m2) = oneone_partner(0.5, 0.5).unwrap();
        assert_abs_diff_eq!(p2, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m2, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(oneone_partner(0.3, 0.6).unwrap().0, 0.84, epsilon = 1e-14);
    }

    #[test]
    fn oneone_agrees_with_line_sphere_intersection() {
        for &(p1, p) in &[(0.3, 0.6), (0.9, 0.2), (0.05, 0.5), (0.6, 0.61)] {
            let n1 = bloch_vector(p1, 0.0);
            let (n, s) = ray_exit(&n1, &axis(p)).unwrap();
            let (p2, m2) = oneone_partner(p1, p).unwrap();
            assert_abs_diff_eq!(p2, (1.0 + n.z) / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(m2, 1.0 / s, epsilon = 1e-12);
            assert_abs_diff_eq!(oneone_mix(p1, p2).unwrap(), p, epsilon = 1e-12);
        }
    }

    #[test]
    fn split_reduces_to_oneone() {
        for &(p1, p) in &[(0.3, 0.6), (0.8, 0.1)] {
            assert_abs_diff_eq!(
                split_11_to_12(p1, p, 0.0).unwrap(),
                oneone_partner(p1, p).unwrap().0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn split_keeps_similar_triangles() {
        let (p1, p) = (0.3, 0.55);
        let x1 = 2.0 * (p1 * (1.0f64 - p1)).sqrt();
        for phi2 in [0.2, 0.7, 1.2, PI / 2.0] {
            let q = split_11_to_12(p1, p, phi2).unwrap();
            let x2 = 2.0 * (q * (1.0 - q)).sqrt() * phi2.cos();
            // Midpoint of the pair is on the line through the start state and the axis point.
            let mid = Vector3::new(-x2, 0.0, 2.0 * q - 1.0);
            let start = bloch_vector(p1, 0.0);
            let cross = (mid - start).cross(&(axis(p) - start)).norm();
            assert!(cross < 1e-12, "phi2 = {phi2}: {cross}");
            if phi2 < PI / 2.0 {
                assert_abs_diff_eq!(
                    x1 / (2.0 * (p1 - p).abs()),
                    x2 / (2.0 * (q - p).abs()),
                    epsilon = 1e-10
                );
            } else {
                assert_abs_diff_eq!(q, p, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn twotwo_examples() {
        let (m1, m2, pm) = twotwo_weights(0.3, 0.0, 0.3, 0.0).unwrap();
        assert_abs_diff_eq!(m1, 0.5);
        assert_abs_diff_eq!(m2, 0.5);
        assert_abs_diff_eq!(pm, 0.3);
        let (_, a, _) = twotwo_weights(0.2, 0.4, 0.7, 1.1).unwrap();
        let (_, b, _) = twotwo_weights(0.8, 0.4, 0.3, 1.1).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        let (m1, m2, pm) = twotwo_weights(0.15, 0.9, 0.66, 0.3).unwrap();
        assert_abs_diff_eq!(pm, m1 * 0.15 + m2 * 0.66, epsilon = 1e-15);
        assert!(twotwo_weights(0.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn twoone_reduces_and_lands_on_the_sphere() {
        assert_abs_diff_eq!(
            twoone_partner(0.3, 0.0, 0.6).unwrap(),
            oneone_partner(0.3, 0.6).unwrap().0,
            epsilon = 1e-12
        );
        let (p1, phi1, p) = (0.62, PI / 3.0, 0.2);
        let x_mid = 2.0 * (p1 * (1.0f64 - p1)).sqrt() * phi1.cos();
        let mid = Vector3::new(x_mid, 0.0, 2.0 * p1 - 1.0);
        let (n, _) = ray_exit(&mid, &axis(p)).unwrap();
        let b = twoone_partner_point(p1, phi1, p).unwrap();
        assert_abs_diff_eq!(b.cartesian(), n, epsilon = 1e-12);
        assert_abs_diff_eq!(b.cartesian().norm(), 1.0, epsilon = 1e-12);
        assert_eq!(b.phi, PI);
    }

    #[test]
    fn decide_examples() {
        let tau0 = 0.8;
        assert_eq!(
            decide_02_vs_21(tau0, -9.0 / 8.0 * tau0, 2.0, 1.0).unwrap(),
            Verdict::TwoOne
        );
        assert_eq!(
            decide_02_vs_21(tau0, 0.0, 2.0, 1.0).unwrap(),
            Verdict::TwoOne
        );
        assert!(decide_02_vs_21(tau0, -3.0 * tau0 * 2.0, 2.0, 1.0)
            .unwrap()
            .zero_two_optimal());
        assert_eq!(
            decide_02_vs_21(tau0, -2.0 * tau0, 2.0, 1.0).unwrap(),
            Verdict::Marginal
        );
        assert!(decide_02_vs_21(tau0, -1.0, 2.0, 0.0).is_err());
    }
}

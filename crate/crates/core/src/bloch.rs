//! Bloch-ball geometry of the two-dimensional GHZ/W subspace.
//!
//! GHZ sits at the north pole and W at the south pole. A pure state
//! `√p·GHZ + e^{iφ}√(1−p)·W` maps to
//! `(2√(p(1−p)) cos φ, 2√(p(1−p)) sin φ, 2p − 1)`.

use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::tangle::{self, Amplitudes3Q};

/// Reduce an angle to `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// A pure state on the surface of the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub p: f64,
    pub phi: f64,
}

impl BlochPoint {
    pub fn new(p: f64, phi: f64) -> Result<Self> {
        check_probability("p", p)?;
        if !phi.is_finite() {
            return Err(Error::InvalidInput("non-finite phase".into()));
        }
        Ok(Self {
            p,
            phi: wrap_angle(phi),
        })
    }

    pub fn ghz() -> Self {
        Self { p: 1.0, phi: 0.0 }
    }

    pub fn w() -> Self {
        Self { p: 0.0, phi: 0.0 }
    }

    /// Surface point in the direction of `v` (need not be normalized).
    pub fn from_direction(v: &Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidInput("zero or non-finite direction".into()));
        }
        let u = v / n;
        let p = ((1.0 + u.z) / 2.0).clamp(0.0, 1.0);
        let phi = if u.x == 0.0 && u.y == 0.0 {
            0.0
        } else {
            u.y.atan2(u.x)
        };
        Ok(Self { p, phi })
    }

    pub fn cartesian(&self) -> Vector3<f64> {
        bloch_vector(self.p, self.phi)
    }

    /// Polar angle measured from the GHZ pole.
    pub fn theta(&self) -> f64 {
        (2.0 * self.p - 1.0).clamp(-1.0, 1.0).acos()
    }

    pub fn state(&self) -> Amplitudes3Q {
        tangle::superpose(self.p, self.phi).expect("BlochPoint holds a valid probability")
    }

    /// `√τ₃` of the pure state, from the closed formula.
    pub fn sqrt_tangle(&self) -> f64 {
        tangle::sqrt_tau3_unchecked(self.p, self.phi)
    }

    /// Mirror image under complex conjugation (`φ → −φ`).
    pub fn conjugate(&self) -> Self {
        Self {
            p: self.p,
            phi: wrap_angle(-self.phi),
        }
    }

    pub fn rotated(&self, dphi: f64) -> Self {
        Self {
            p: self.p,
            phi: wrap_angle(self.phi + dphi),
        }
    }
}

pub fn bloch_vector(p: f64, phi: f64) -> Vector3<f64> {
    let s = 2.0 * (p * (1.0 - p)).max(0.0).sqrt();
    Vector3::new(s * phi.cos(), s * phi.sin(), 2.0 * p - 1.0)
}

/// A mixed state of the rank-two subspace, as a vector in the unit ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorPoint(pub Vector3<f64>);

impl InteriorPoint {
    pub const BALL_TOL: f64 = 1e-12;

    pub fn new(v: Vector3<f64>) -> Result<Self> {
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        let r = v.norm();
        if r > 1.0 + Self::BALL_TOL {
            return Err(Error::Domain {
                name: "|v|",
                value: r,
                domain: "[0, 1]",
            });
        }
        Ok(Self(v))
    }

    /// Point at distance `radius` from the centre in the direction of the surface point `(p, φ)`.
    pub fn from_spherical(p: f64, phi: f64, radius: f64) -> Result<Self> {
        check_probability("p", p)?;
        if !(radius.is_finite() && (0.0..=1.0 + Self::BALL_TOL).contains(&radius)) {
            return Err(Error::Domain {
                name: "radius",
                value: radius,
                domain: "[0, 1]",
            });
        }
        Self::new(bloch_vector(p, phi) * radius)
    }

    /// Point on the z-axis with GHZ weight `p`.
    pub fn on_axis(p: f64) -> Result<Self> {
        check_probability("p", p)?;
        Ok(Self(Vector3::new(0.0, 0.0, 2.0 * p - 1.0)))
    }

    pub fn vector(&self) -> Vector3<f64> {
        self.0
    }

    pub fn radius(&self) -> f64 {
        self.0.norm()
    }
}

impl From<BlochPoint> for InteriorPoint {
    fn from(b: BlochPoint) -> Self {
        Self(b.cartesian())
    }
}

/// Intersection data of a straight line through the real plane with the sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordGeometry {
    pub r0: f64,
    pub theta_anchor: f64,
    pub theta_dir: f64,
    pub d_plus: f64,
    pub d_minus: f64,
    pub inner_radius: f64,
    pub outer_radius: f64,
}

fn chord_factor(p: f64, phi: f64) -> f64 {
    (p * (1.0 - p)).max(0.0).sqrt() * phi.cos().abs()
}

/// GHZ weight `P` of the point where the chord between `(p0, φ0)` and
/// `(p1, φ1)` meets the z-axis.
pub fn axis_crossing(p0: f64, phi0: f64, p1: f64, phi1: f64) -> Result<f64> {
    check_probability("p0", p0)?;
    check_probability("p1", p1)?;
    let a0 = chord_factor(p0, phi0);
    let a1 = chord_factor(p1, phi1);
    let den = a0 + a1;
    if den < 1e-300 {
        return Err(Error::NoCrossing);
    }
    Ok((p0 * a1 + p1 * a0) / den)
}

/// Weight ratio `λ = m1/m0` of the two chord ends for the axis point.
pub fn weight_ratio(p0: f64, phi0: f64, p1: f64, phi1: f64) -> Result<f64> {
    check_probability("p0", p0)?;
    check_probability("p1", p1)?;
    let a0 = chord_factor(p0, phi0);
    let a1 = chord_factor(p1, phi1);
    if a1 < 1e-300 {
        return Err(Error::NoCrossing);
    }
    Ok(a0 / a1)
}

/// Heights `(P₊, P₋)`, `P₊ ≥ P₋`, where the line through the surface
/// point `(p0, φ0)` projected to the real plane and the axis point with
/// GHZ weight `p` pierces the real great circle.
pub fn chord_endpoints_pm(p0: f64, phi0: f64, p: f64) -> Result<(f64, f64)> {
    check_probability("p0", p0)?;
    check_probability("p", p)?;
    let a = p0 * (1.0 - p0) * phi0.cos().powi(2);
    let d = p - p0;
    let den = d * d + a;
    if den < 1e-300 {
        // Both defining points coincide at a pole: the line is the z-axis.
        return Ok((1.0, 0.0));
    }
    let disc = d * d + 4.0 * p * p0 * (1.0 - p0) * (1.0 - p) * phi0.cos().powi(2);
    if disc < -1e-12 {
        return Err(Error::Geometry(format!("negative discriminant {disc}")));
    }
    let root = disc.max(0.0).sqrt();
    let base = d * (1.0 - 2.0 * p0) + 2.0 * a;
    let pa = p0 + d / 2.0 * (base + root) / den;
    let pb = p0 + d / 2.0 * (base - root) / den;
    Ok((pa.max(pb), pa.min(pb)))
}

/// Chord through the anchor `r0·(sin ϑ, cos ϑ)` of the real plane in
/// direction `(cos ϑ₁, sin ϑ₁)`.
pub fn inclined_chord(r0: f64, theta_anchor: f64, theta_dir: f64) -> Result<ChordGeometry> {
    if !(r0.is_finite() && (0.0..=1.0).contains(&r0)) {
        return Err(Error::Domain {
            name: "r0",
            value: r0,
            domain: "[0, 1]",
        });
    }
    let delta = theta_anchor - theta_dir;
    let inner = r0 * delta.cos().abs();
    let outer = (1.0 - (r0 * delta.sin()).powi(2)).max(0.0).sqrt();
    Ok(ChordGeometry {
        r0,
        theta_anchor,
        theta_dir,
        d_plus: -inner + outer,
        d_minus: -inner - outer,
        inner_radius: inner,
        outer_radius: outer,
    })
}

/// `ρ·(1 − cos δφ, sin δφ)`.
pub fn arc_offset(outer_radius: f64, dphi: f64) -> (f64, f64) {
    (outer_radius * (1.0 - dphi.cos()), outer_radius * dphi.sin())
}

/// Second-order form `ρ·(δφ²/2, δφ)` of [`arc_offset`].
pub fn arc_offset_small_angle(outer_radius: f64, dphi: f64) -> (f64, f64) {
    (outer_radius * dphi * dphi / 2.0, outer_radius * dphi)
}

/// Unit normal and distance to the origin of the plane through three points.
///
/// The normal is oriented to have a positive x-component, with ties broken
/// by positive z and then positive y.
pub fn plane_through_points(
    a: &Vector3<f64>,
    b: &Vector3<f64>,
    c: &Vector3<f64>,
) -> Result<(Vector3<f64>, f64)> {
    let n = (b - a).cross(&(c - a));
    let scale = (b - a).norm().max((c - a).norm()).max(1e-300);
    if n.norm() <= 1e-12 * scale * scale {
        return Err(Error::DegeneratePlane);
    }
    let mut n = n.normalize();
    let key = [n.x, n.z, n.y];
    if let Some(&k) = key.iter().find(|k| k.abs() > 1e-12) {
        if k < 0.0 {
            n = -n;
        }
    }
    Ok((n, n.dot(a).abs()))
}

/// Intersections of the line `e + t·d` with the unit sphere, as `(t_min, t_max)`.
pub fn line_sphere(e: &Vector3<f64>, d: &Vector3<f64>) -> Result<(f64, f64)> {
    let a = d.norm_squared();
    if a < 1e-300 {
        return Err(Error::Geometry("zero direction".into()));
    }
    let b = e.dot(d);
    let c = e.norm_squared() - 1.0;
    let disc = b * b - a * c;
    if disc < 0.0 {
        return Err(Error::Geometry("line misses the sphere".into()));
    }
    let s = disc.sqrt();
    // Stable pairing of the two roots.
    let q = -(b + b.signum() * s);
    let (t1, t2) = if q.abs() > 1e-300 {
        (q / a, c / q)
    } else {
        (-s / a, s / a)
    };
    Ok((t1.min(t2), t1.max(t2)))
}

/// Surface point hit by the ray from `e` through `rho`, and the stretch `s ≥ 1`
/// with `n = e + s·(rho − e)`. The weight of `n` in `rho = (1 − 1/s)·e + (1/s)·n` is `1/s`.
pub fn ray_exit(e: &Vector3<f64>, rho: &Vector3<f64>) -> Result<(Vector3<f64>, f64)> {
    let d = rho - e;
    let (_, t) = line_sphere(e, &d)?;
    Ok((e + d * t, t))
}

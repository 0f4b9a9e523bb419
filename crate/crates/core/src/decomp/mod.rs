//! Pure-state decompositions of rank-two mixtures and the searches that
//! locate the optimal ones.

mod convex;
mod formulas;
mod locking;
mod search;

pub use convex::{convexify, CharacteristicCurve, ConvexTangent};
pub use formulas::{
    decide_02_vs_21, oneone_mix, oneone_partner, split_11_to_12, twoone_partner,
    twoone_partner_point, twotwo_weights, Verdict,
};
pub use locking::{default_locking_eps, locking_perturbation, LockingReport};
pub(crate) use search::one_state_value;
pub use search::{
    find_m_states, find_n_states, fit_circle, optimize_21_line, CircleFit, LowerCircleTrace,
    TipSearch, ZeroVertices,
};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::bloch::BlochPoint;
use crate::error::{Error, Result};
use crate::tangle::ZERO_TANGLE_TOL;

/// Upper bound on the number of pure states needed for a rank-two mixture.
pub const MAX_MEMBERS: usize = 4;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Weighted pure states with an `(n_z, n_e)` tag counting zero-tangle and
/// entangled members.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub members: Vec<(f64, BlochPoint)>,
    pub tag: (usize, usize),
}

pub(crate) fn is_zero_state(b: &BlochPoint) -> bool {
    b.sqrt_tangle().powi(2) < ZERO_TANGLE_TOL
}

impl Decomposition {
    pub fn new(members: Vec<(f64, BlochPoint)>) -> Result<Self> {
        if members.is_empty() || members.len() > MAX_MEMBERS {
            return Err(Error::InvalidInput(format!(
                "a decomposition has 1 to {MAX_MEMBERS} members, got {}",
                members.len()
            )));
        }
        if members.iter().any(|(w, _)| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidInput(format!("weights sum to {total}")));
        }
        let n_z = members.iter().filter(|(_, b)| is_zero_state(b)).count();
        let tag = (n_z, members.len() - n_z);
        Ok(Self { members, tag })
    }

    /// Drop weights at or below `floor`, renormalize the rest, and build.
    pub fn pruned(members: Vec<(f64, BlochPoint)>, floor: f64) -> Result<Self> {
        let kept: Vec<(f64, BlochPoint)> =
            members.into_iter().filter(|(w, _)| *w > floor).collect();
        let total: f64 = kept.iter().map(|(w, _)| w).sum();
        Self::new(kept.into_iter().map(|(w, b)| (w / total, b)).collect())
    }

    pub fn pure(state: BlochPoint) -> Self {
        Self::new(vec![(1.0, state)]).expect("single member with weight one")
    }

    pub fn barycenter(&self) -> Vector3<f64> {
        self.members.iter().map(|(w, b)| b.cartesian() * *w).sum()
    }

    pub fn weight_sum(&self) -> f64 {
        self.members.iter().map(|(w, _)| w).sum()
    }

    /// Apply a map to every member state.
    pub fn map_states(&self, f: impl Fn(&BlochPoint) -> BlochPoint) -> Self {
        Self {
            members: self.members.iter().map(|(w, b)| (*w, f(b))).collect(),
            tag: self.tag,
        }
    }
}

/// `Σ wᵢ √τ₃(ψᵢ)`; members below the zero-state threshold contribute nothing.
pub fn avg_tangle(d: &Decomposition) -> f64 {
    d.members
        .iter()
        .map(|(w, b)| {
            if is_zero_state(b) {
                0.0
            } else {
                w * b.sqrt_tangle()
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::p0;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn avg_tangle_examples() {
        assert_eq!(avg_tangle(&Decomposition::pure(BlochPoint::ghz())), 1.0);
        let z1 = BlochPoint::new(p0(), PI / 3.0).unwrap();
        let z2 = BlochPoint::new(p0(), -PI / 3.0).unwrap();
        let d = Decomposition::new(vec![(0.5, z1), (0.5, z2)]).unwrap();
        assert_eq!(d.tag, (2, 0));
        assert_eq!(avg_tangle(&d), 0.0);

        let p = 0.85;
        let w = (p - p0()) / (1.0 - p0());
        let z3 = BlochPoint::new(p0(), PI).unwrap();
        let d = Decomposition::new(vec![(w, BlochPoint::ghz()), (1.0 - w, z3)]).unwrap();
        assert_eq!(d.tag, (1, 1));
        assert_abs_diff_eq!(avg_tangle(&d), w, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_weights() {
        let g = BlochPoint::ghz();
        assert!(Decomposition::new(vec![(0.5, g), (0.4, g)]).is_err());
        assert!(Decomposition::new(vec![(1.2, g), (-0.2, g)]).is_err());
        assert!(Decomposition::new(vec![(0.2, g); 5]).is_err());
        let d = Decomposition::pruned(vec![(0.5, g), (1e-14, g), (0.5, g)], 1e-12).unwrap();
        assert_eq!(d.members.len(), 2);
    }
}

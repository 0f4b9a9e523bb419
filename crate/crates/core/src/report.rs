//! Plot-ready datasets: the fixed structure of the GHZ–W ball and the
//! characteristic curves behind the tip searches.

use nalgebra::Vector3;
use serde::Serialize;

use crate::bloch::BlochPoint;
use crate::decomp::{CharacteristicCurve, ConvexTangent, TipSearch};
use crate::error::Result;
use crate::roof::RoofModel;
use crate::tangle::p0;

/// Published values the computation is compared against.
pub mod reference {
    pub const N_P_C: f64 = 0.0964142;
    pub const N_PARTNER: f64 = 0.00673174;
    pub const N_THETA: f64 = 1.99158;
    pub const M_P_C: f64 = 0.962243;
    pub const M_PARTNER: f64 = 0.989858;
    pub const M_THETA: f64 = 2.25566;
    pub const LOWER_CIRCLE_DISTANCE: f64 = 0.0711148;
    pub const LOWER_CIRCLE_NORMAL: [f64; 3] = [0.57589, 0.0, -0.81753];
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Compared {
    pub computed: f64,
    pub reference: f64,
    pub rel_deviation: f64,
}

impl Compared {
    pub fn new(computed: f64, reference: f64) -> Self {
        let rel_deviation = if reference == 0.0 {
            computed.abs()
        } else {
            (computed - reference).abs() / reference.abs()
        };
        Self {
            computed,
            reference,
            rel_deviation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedState {
    pub name: String,
    pub p: f64,
    pub phi: f64,
    pub theta: f64,
    pub cartesian: Vector3<f64>,
}

impl NamedState {
    fn new(name: impl Into<String>, b: BlochPoint) -> Self {
        Self {
            name: name.into(),
            p: b.p,
            phi: b.phi,
            theta: b.theta(),
            cartesian: b.cartesian(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircleRecord {
    pub name: String,
    pub center: Vector3<f64>,
    pub normal: Vector3<f64>,
    pub radius: f64,
    pub distance: f64,
    /// Where the normal through the centre meets the sphere.
    pub normal_tip: Vector3<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TipSummary {
    pub p_c: Compared,
    pub partner: Compared,
    pub partner_formula: f64,
    pub theta0: f64,
    pub theta1: f64,
    pub theta: Compared,
}

fn tip_summary(s: &TipSearch, p_c: f64, partner: f64, theta: f64) -> TipSummary {
    TipSummary {
        p_c: Compared::new(s.tangent.p_c, p_c),
        partner: Compared::new(s.partner, partner),
        partner_formula: s.partner_formula,
        theta0: s.theta0,
        theta1: s.theta1,
        theta: Compared::new(s.theta, theta),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub p0: f64,
    pub zero_vertices: Vec<NamedState>,
    pub polytope_edges: Vec<[String; 2]>,
    pub n_states: Vec<NamedState>,
    pub m_states: Vec<NamedState>,
    pub n_search: TipSummary,
    pub m_search: TipSummary,
    pub grand_circles: Vec<CircleRecord>,
    pub lower_circles: Vec<CircleRecord>,
    /// Distance of the lower circles from the centre.
    pub lower_circle_distance: Compared,
    /// Normal of the lower circle at `φ = π`, signed to match the reference.
    pub lower_circle_normal: [Compared; 3],
}

fn sphere_hit(center: &Vector3<f64>, normal: &Vector3<f64>) -> Vector3<f64> {
    crate::bloch::line_sphere(center, normal)
        .map(|(_, t)| center + normal * t)
        .unwrap_or(*normal)
}

pub fn structure() -> Result<StructureReport> {
    let model = RoofModel::get()?;
    let names = ["W", "Z1", "Z2", "Z3"];
    let zero_vertices = names
        .iter()
        .zip(model.zero_states)
        .map(|(n, b)| NamedState::new(*n, b))
        .collect();
    let polytope_edges = [(1, 2), (2, 3), (1, 3), (0, 1), (0, 2), (0, 3)]
        .iter()
        .map(|&(a, b)| [names[a].to_string(), names[b].to_string()])
        .collect();
    let n_states = model
        .n_search
        .states
        .iter()
        .enumerate()
        .map(|(k, b)| NamedState::new(format!("N{}", k + 1), *b))
        .collect();
    let m_states = model
        .m_search
        .states
        .iter()
        .enumerate()
        .map(|(k, b)| NamedState::new(format!("M{}", k + 1), *b))
        .collect();

    let grand_circles = model
        .n_search
        .states
        .iter()
        .enumerate()
        .map(|(k, n)| {
            let normal = Vector3::new(-n.phi.sin(), n.phi.cos(), 0.0);
            CircleRecord {
                name: format!("grand circle through GHZ and N{}", k + 1),
                center: Vector3::zeros(),
                normal,
                radius: 1.0,
                distance: 0.0,
                normal_tip: normal,
            }
        })
        .collect();
    let lower_circles = model
        .lower_circles
        .iter()
        .enumerate()
        .map(|(k, c)| CircleRecord {
            name: format!("lower circle below W Z{}", k + 1),
            center: c.center,
            normal: c.normal,
            radius: c.radius,
            distance: c.distance,
            normal_tip: sphere_hit(&c.center, &c.normal),
        })
        .collect();

    let c3 = &model.lower_circles[2];
    let r = reference::LOWER_CIRCLE_NORMAL;
    let sign = if c3.normal.dot(&Vector3::from(r)) < 0.0 {
        -1.0
    } else {
        1.0
    };
    let lower_circle_normal = [0, 1, 2].map(|i| Compared::new(sign * c3.normal[i], r[i]));

    Ok(StructureReport {
        p0: p0(),
        zero_vertices,
        polytope_edges,
        n_states,
        m_states,
        n_search: tip_summary(
            &model.n_search,
            reference::N_P_C,
            reference::N_PARTNER,
            reference::N_THETA,
        ),
        m_search: tip_summary(
            &model.m_search,
            reference::M_P_C,
            reference::M_PARTNER,
            reference::M_THETA,
        ),
        grand_circles,
        lower_circles,
        lower_circle_distance: Compared::new(c3.distance, reference::LOWER_CIRCLE_DISTANCE),
        lower_circle_normal,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub p: f64,
    pub value: f64,
    /// Lower convex envelope at `p`.
    pub hull: f64,
    /// `value − hull`, nonnegative.
    pub difference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveFamily {
    pub name: String,
    pub points: Vec<CurvePoint>,
    pub tangent: ConvexTangent,
    pub p_c: Compared,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvesReport {
    pub families: Vec<CurveFamily>,
}

fn family(
    name: &str,
    curve: &CharacteristicCurve,
    tangent: ConvexTangent,
    reference: f64,
    n: usize,
) -> CurveFamily {
    let stride = ((curve.samples.len() - 1) / (n.max(2) - 1)).max(1);
    let points = curve
        .samples
        .iter()
        .step_by(stride)
        .map(|&(p, value)| {
            let hull = tangent.hull_value(curve, p);
            CurvePoint {
                p,
                value,
                hull,
                difference: value - hull,
            }
        })
        .collect();
    CurveFamily {
        name: name.into(),
        points,
        tangent,
        p_c: Compared::new(tangent.p_c, reference),
    }
}

/// Both characteristic curves with roughly `n_points` samples each.
pub fn curves(n_points: usize) -> Result<CurvesReport> {
    let model = RoofModel::get()?;
    Ok(CurvesReport {
        families: vec![
            family(
                "Z3 mixed with its antipode, decomposed with the pair Z1 Z2",
                &model.n_search.curve,
                model.n_search.tangent,
                reference::N_P_C,
                n_points,
            ),
            family(
                "axis opposite Z1 + Z2 mixed with its antipode, decomposed with Z3",
                &model.m_search.curve,
                model.m_search.tangent,
                reference::M_P_C,
                n_points,
            ),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_is_close_to_reference() {
        let s = structure().unwrap();
        assert!(s.n_search.p_c.rel_deviation < 1e-3);
        assert!(s.m_search.theta.rel_deviation < 1e-3);
        assert!(s.lower_circle_distance.rel_deviation < 1e-2);
        assert_eq!(s.polytope_edges.len(), 6);
        for c in &s.lower_circles {
            assert!((c.normal_tip.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hull_never_exceeds_curve() {
        for f in curves(101).unwrap().families {
            assert!(f.points.len() >= 101);
            assert!(f.points.iter().all(|p| p.difference >= -1e-12));
        }
    }
}

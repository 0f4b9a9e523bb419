//! Exact convex roof of `√τ₃` on the GHZ–W Bloch ball.
//!
//! The ball splits into a kernel, where the roof is affine on each of five
//! pieces (the zero-polytope and four (3,1) tetrahedra), and the rest, where
//! an optimal decomposition mixes one entangled pure state with a zero-tangle
//! point on an edge of the zero-polytope. Interior edge points give the (2,1)
//! families, edge ends the (1,1) decompositions.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use nalgebra::{Rotation3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{wrap_angle, BlochPoint, InteriorPoint};
use crate::decomp::{
    avg_tangle, find_m_states, find_n_states, fit_circle, one_state_value, optimize_21_line,
    CircleFit, Decomposition, TipSearch, ZeroVertices,
};
use crate::error::{Error, Result};
use crate::optimize::scan_then_golden;
use crate::polytope::{Tetrahedron, MEMBERSHIP_TOL};

/// Points at least this close to the sphere are treated as pure.
pub const PURE_TOL: f64 = 1e-12;
/// (2,1) and (1,1) values closer than this are reported as a numeric boundary.
pub const BOUNDARY_GAP: f64 = 1e-8;
/// Radius at which [`surface_pattern`] probes the ball beneath the surface.
pub const SURFACE_DEPTH: f64 = 1.0 - 1e-9;

const EDGE_SCAN: usize = 65;
const EDGE_TOL: f64 = 1e-10;
const ENDPOINT_SLACK: f64 = 1e-13;
const LOWER_TRACE_GRID: usize = 129;
const ARC_SAMPLES: usize = 128;

/// Region of the ball by type of optimal decomposition.
///
/// The order is the tie-break order for points on shared boundaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "ZERO_POLYTOPE")]
    ZeroPolytope,
    #[serde(rename = "TETRA_GHZ")]
    TetraGhz,
    #[serde(rename = "TETRA_N1")]
    TetraN1,
    #[serde(rename = "TETRA_N2")]
    TetraN2,
    #[serde(rename = "TETRA_N3")]
    TetraN3,
    #[serde(rename = "GRAND_CIRCLE_21")]
    GrandCircle21,
    #[serde(rename = "LOWER_CIRCLE_21")]
    LowerCircle21,
    #[serde(rename = "ONE_ONE")]
    OneOne,
}

impl Region {
    pub const ALL: [Region; 8] = [
        Region::ZeroPolytope,
        Region::TetraGhz,
        Region::TetraN1,
        Region::TetraN2,
        Region::TetraN3,
        Region::GrandCircle21,
        Region::LowerCircle21,
        Region::OneOne,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Region::ZeroPolytope => "ZERO_POLYTOPE",
            Region::TetraGhz => "TETRA_GHZ",
            Region::TetraN1 => "TETRA_N1",
            Region::TetraN2 => "TETRA_N2",
            Region::TetraN3 => "TETRA_N3",
            Region::GrandCircle21 => "GRAND_CIRCLE_21",
            Region::LowerCircle21 => "LOWER_CIRCLE_21",
            Region::OneOne => "ONE_ONE",
        }
    }

    /// Regions on which the roof is affine.
    pub fn is_kernel(self) -> bool {
        self <= Region::TetraN3
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Symmetry element mapping a point into the wedge `0 ≤ φ ≤ π/3`:
/// first rotate by `rotation`, then conjugate if `conjugate`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Symmetry {
    pub rotation: f64,
    pub conjugate: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        rotation: 0.0,
        conjugate: false,
    };

    fn sign(self) -> f64 {
        if self.conjugate {
            -1.0
        } else {
            1.0
        }
    }

    /// Folded phase of `phi`.
    pub fn apply_phi(self, phi: f64) -> f64 {
        self.sign() * wrap_angle(phi + self.rotation)
    }

    pub fn apply(self, v: &Vector3<f64>) -> Vector3<f64> {
        let r = Rotation3::from_axis_angle(&Vector3::z_axis(), self.rotation) * v;
        Vector3::new(r.x, self.sign() * r.y, r.z)
    }

    /// Inverse map on surface states.
    pub fn unfold(self, b: &BlochPoint) -> BlochPoint {
        let b = if self.conjugate { b.conjugate() } else { *b };
        b.rotated(-self.rotation)
    }

    /// Element folding the phase `phi` into `[0, π/3]`.
    pub fn folding(phi: f64) -> Symmetry {
        let mut best = Symmetry::IDENTITY;
        let mut best_excess = f64::INFINITY;
        for rotation in [0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0] {
            for conjugate in [false, true] {
                let s = Symmetry {
                    rotation,
                    conjugate,
                };
                let f = s.apply_phi(phi);
                let excess = (-f).max(f - PI / 3.0).max(0.0);
                if excess < best_excess {
                    best_excess = excess;
                    best = s;
                }
            }
        }
        best
    }
}

/// Roof value at a point with the decomposition that attains it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoofResult {
    pub value: f64,
    pub region: Region,
    pub decomposition: Decomposition,
    /// Symmetry element that folded the point into the computation wedge.
    pub symmetry: Symmetry,
    /// Set when the (2,1) and (1,1) values differ by less than [`BOUNDARY_GAP`],
    /// so the tag between them is decided numerically.
    pub numeric_boundary: bool,
}

/// An edge of the zero-polytope; `upper` edges join two of the `Zₖ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroEdge {
    pub ends: [BlochPoint; 2],
    pub upper: bool,
}

/// Everything the classifier needs, computed once.
#[derive(Clone, Debug)]
pub struct RoofModel {
    pub vertices: ZeroVertices,
    /// `W, Z₁, Z₂, Z₃` as surface states.
    pub zero_states: [BlochPoint; 4],
    pub zero_tetra: Tetrahedron,
    /// The (3,1) tetrahedra in [`Region`] order with their vertex states.
    pub tetrahedra: [(Region, Tetrahedron, [BlochPoint; 4]); 4],
    pub edges: [ZeroEdge; 6],
    pub n_search: TipSearch,
    pub m_search: TipSearch,
    /// Lower circle `k` runs below the edge `W Zₖ₊₁`.
    pub lower_circles: [CircleFit; 3],
    /// Entangled states of the (2,1) decompositions: three meridian arcs from
    /// GHZ to `Nₖ`, then three lower arcs `N → M → N'`.
    pub generating_curves: Vec<Vec<Vector3<f64>>>,
}

fn rotate_z(v: &Vector3<f64>, angle: f64) -> Vector3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), angle) * v
}

fn slerp(a: &Vector3<f64>, b: &Vector3<f64>, n: usize) -> Vec<Vector3<f64>> {
    let omega = a.dot(b).clamp(-1.0, 1.0).acos();
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            if omega < 1e-12 {
                *a
            } else {
                (a * ((1.0 - t) * omega).sin() + b * (t * omega).sin()) / omega.sin()
            }
        })
        .collect()
}

impl RoofModel {
    pub fn get() -> Result<&'static RoofModel> {
        static CELL: OnceLock<Result<RoofModel>> = OnceLock::new();
        CELL.get_or_init(RoofModel::build)
            .as_ref()
            .map_err(Clone::clone)
    }

    fn build() -> Result<RoofModel> {
        let v = *ZeroVertices::ghz_w()?;
        let zs = [
            BlochPoint::w(),
            BlochPoint::from_direction(&v.z1)?,
            BlochPoint::from_direction(&v.z2)?,
            BlochPoint::from_direction(&v.z3)?,
        ];
        let [w, z1, z2, z3] = zs;
        let n_search = find_n_states()?;
        let m_search = find_m_states()?;
        let [n1, n2, n3] = n_search.states;
        let ghz = BlochPoint::ghz();
        let tetra = |s: [BlochPoint; 4]| -> Result<Tetrahedron> {
            Tetrahedron::new(s.map(|b| b.cartesian()))
        };
        let groups = [
            (Region::TetraGhz, [ghz, z1, z2, z3]),
            (Region::TetraN1, [n1, w, z1, z2]),
            (Region::TetraN2, [n2, w, z2, z3]),
            (Region::TetraN3, [n3, w, z1, z3]),
        ];
        let tetrahedra = [
            (groups[0].0, tetra(groups[0].1)?, groups[0].1),
            (groups[1].0, tetra(groups[1].1)?, groups[1].1),
            (groups[2].0, tetra(groups[2].1)?, groups[2].1),
            (groups[3].0, tetra(groups[3].1)?, groups[3].1),
        ];
        let edges = [
            ZeroEdge {
                ends: [z1, z2],
                upper: true,
            },
            ZeroEdge {
                ends: [z2, z3],
                upper: true,
            },
            ZeroEdge {
                ends: [z1, z3],
                upper: true,
            },
            ZeroEdge {
                ends: [w, z1],
                upper: false,
            },
            ZeroEdge {
                ends: [w, z2],
                upper: false,
            },
            ZeroEdge {
                ends: [w, z3],
                upper: false,
            },
        ];

        // The lower circle under W Z₃ passes N₃, M₃ and, by conjugation, N₂.
        let m3 = m_search.states[2];
        let trace = optimize_21_line(n3, m3, LOWER_TRACE_GRID)?;
        let half: Vec<Vector3<f64>> = trace.states.iter().map(|b| b.cartesian()).collect();
        let mut arc3 = half.clone();
        arc3.extend(
            half.iter()
                .rev()
                .skip(1)
                .map(|p| Vector3::new(p.x, -p.y, p.z)),
        );
        let fit3 = fit_circle(&arc3)?;
        // Rotations taking Z₃ to Z₁ and Z₂.
        let to_k = [-2.0 * PI / 3.0, 2.0 * PI / 3.0, 0.0];
        let lower_circles = to_k.map(|a| CircleFit {
            normal: rotate_z(&fit3.normal, a),
            center: rotate_z(&fit3.center, a),
            ..fit3
        });

        let pole = Vector3::z();
        let mut generating_curves: Vec<Vec<Vector3<f64>>> = n_search
            .states
            .iter()
            .map(|n| slerp(&pole, &n.cartesian(), ARC_SAMPLES))
            .collect();
        generating_curves.extend(
            to_k.iter()
                .map(|&a| arc3.iter().map(|p| rotate_z(p, a)).collect()),
        );

        Ok(RoofModel {
            vertices: v,
            zero_states: zs,
            zero_tetra: tetra(zs)?,
            tetrahedra,
            edges,
            n_search,
            m_search,
            lower_circles,
            generating_curves,
        })
    }

    /// Angular distance from the unit vector `x` to the nearest generating curve.
    pub fn distance_to_21_curves(&self, x: &Vector3<f64>) -> f64 {
        let x = x.normalize();
        self.generating_curves
            .iter()
            .flat_map(|c| c.windows(2))
            .map(|s| {
                let d = s[1] - s[0];
                let t = if d.norm_squared() > 0.0 {
                    ((x - s[0]).dot(&d) / d.norm_squared()).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let q = (s[0] + d * t).normalize();
                x.dot(&q).clamp(-1.0, 1.0).acos()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn kernel_decomposition(weights: [f64; 4], states: &[BlochPoint; 4]) -> Result<Decomposition> {
    let members = weights
        .iter()
        .zip(states)
        .map(|(w, b)| (w.max(0.0), *b))
        .collect();
    Decomposition::pruned(members, 0.0)
}

struct EdgeOptimum {
    value: f64,
    region: Region,
    decomposition: Decomposition,
    numeric_boundary: bool,
}

fn optimize_edge(edge: &ZeroEdge, rho: &Vector3<f64>) -> Result<EdgeOptimum> {
    let [a, b] = edge.ends.map(|s| s.cartesian());
    let at = |t: f64| a * (1.0 - t) + b * t;
    let h = |t: f64| {
        one_state_value(&at(t), rho)
            .map(|r| r.0)
            .unwrap_or(f64::INFINITY)
    };
    let (t_star, h_star) = scan_then_golden(h, 0.0, 1.0, EDGE_SCAN, EDGE_TOL);
    let (h0, h1) = (h(0.0), h(1.0));
    let h_end = h0.min(h1);
    let (t, region) = if h_star < h_end - ENDPOINT_SLACK {
        (
            t_star,
            if edge.upper {
                Region::GrandCircle21
            } else {
                Region::LowerCircle21
            },
        )
    } else {
        (if h0 <= h1 { 0.0 } else { 1.0 }, Region::OneOne)
    };
    let numeric_boundary = region != Region::OneOne && h_end - h_star < BOUNDARY_GAP;
    let (_, n, weight) = one_state_value(&at(t), rho)?;
    let members = vec![
        ((1.0 - weight) * (1.0 - t), edge.ends[0]),
        ((1.0 - weight) * t, edge.ends[1]),
        (weight, BlochPoint::from_direction(&n)?),
    ];
    let decomposition = Decomposition::pruned(members, 0.0)?;
    Ok(EdgeOptimum {
        value: avg_tangle(&decomposition),
        region,
        decomposition,
        numeric_boundary,
    })
}

fn unfold_region(region: Region, sym: Symmetry, model: &RoofModel) -> Region {
    let apex_phi = |r: Region| match r {
        Region::TetraN1 => Some(model.n_search.states[0].phi),
        Region::TetraN2 => Some(model.n_search.states[1].phi),
        Region::TetraN3 => Some(model.n_search.states[2].phi),
        _ => None,
    };
    let Some(folded) = apex_phi(region) else {
        return region;
    };
    let phi = sym
        .unfold(&BlochPoint {
            p: 0.5,
            phi: folded,
        })
        .phi;
    [Region::TetraN1, Region::TetraN2, Region::TetraN3]
        .into_iter()
        .min_by(|x, y| {
            let dx = wrap_angle(apex_phi(*x).unwrap_or(0.0) - phi).abs();
            let dy = wrap_angle(apex_phi(*y).unwrap_or(0.0) - phi).abs();
            dx.total_cmp(&dy)
        })
        .unwrap_or(region)
}

fn classify_folded(rho: &Vector3<f64>, model: &RoofModel) -> Result<(Region, Decomposition, bool)> {
    let w = model.zero_tetra.barycentric(rho);
    if w.iter().all(|&x| x >= -MEMBERSHIP_TOL) {
        return Ok((
            Region::ZeroPolytope,
            kernel_decomposition(w, &model.zero_states)?,
            false,
        ));
    }
    for (region, tetra, states) in &model.tetrahedra {
        let w = tetra.barycentric(rho);
        if w.iter().all(|&x| x >= -MEMBERSHIP_TOL) {
            return Ok((*region, kernel_decomposition(w, states)?, false));
        }
    }
    let mut best: Option<EdgeOptimum> = None;
    for edge in &model.edges {
        let opt = optimize_edge(edge, rho)?;
        if best.as_ref().is_none_or(|b| opt.value < b.value) {
            best = Some(opt);
        }
    }
    let best = best.expect("six edges");
    Ok((best.region, best.decomposition, best.numeric_boundary))
}

/// Roof value, region and optimal decomposition at a point of the ball.
pub fn classify(point: &InteriorPoint) -> Result<RoofResult> {
    let model = RoofModel::get()?;
    let x = point.vector();
    let r = x.norm();
    if r > 1.0 + InteriorPoint::BALL_TOL {
        return Err(Error::Domain {
            name: "|v|",
            value: r,
            domain: "[0, 1]",
        });
    }
    let phi = if x.x == 0.0 && x.y == 0.0 {
        0.0
    } else {
        x.y.atan2(x.x)
    };
    let sym = Symmetry::folding(phi);
    let folded = sym.apply(&x);

    if r >= 1.0 - PURE_TOL {
        let state = BlochPoint::from_direction(&x)?;
        let decomposition = Decomposition::pure(state);
        let value = avg_tangle(&decomposition);
        let region = if value == 0.0 {
            Region::ZeroPolytope
        } else {
            match classify_folded(&(folded * SURFACE_DEPTH), model)?.0 {
                Region::ZeroPolytope => Region::OneOne,
                other => unfold_region(other, sym, model),
            }
        };
        return Ok(RoofResult {
            value,
            region,
            decomposition,
            symmetry: sym,
            numeric_boundary: false,
        });
    }

    let (region, folded_decomp, numeric_boundary) = classify_folded(&folded, model)?;
    let decomposition = folded_decomp.map_states(|b| sym.unfold(b));
    Ok(RoofResult {
        value: avg_tangle(&decomposition),
        region: unfold_region(region, sym, model),
        decomposition,
        symmetry: sym,
        numeric_boundary,
    })
}

/// Roof value at distance `radius` from the centre towards the surface state `(p, φ)`.
pub fn roof_value(p: f64, phi: f64, radius: f64) -> Result<f64> {
    classify(&InteriorPoint::from_spherical(p, phi, radius)?).map(|r| r.value)
}

/// One grid point of the surface pattern.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRow {
    pub theta: f64,
    pub phi: f64,
    pub region: Region,
    pub roof_value: f64,
    pub on_21_line: bool,
    pub numeric_boundary: bool,
}

/// Region and roof value just beneath every point of a `θ × φ` surface grid,
/// with `θᵢ = (i + ½)π/n_θ` and `φⱼ = 2πj/n_φ`, theta-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePattern {
    pub n_theta: usize,
    pub n_phi: usize,
    pub rows: Vec<SurfaceRow>,
}

pub const MIN_SURFACE_GRID: usize = 8;

/// Index in `0..=n/6` equivalent to `j` under the order-6 symmetry group, for `n % 6 == 0`.
fn folded_index(j: usize, n: usize) -> usize {
    let third = n / 3;
    (0..3)
        .flat_map(|k| {
            let r = (j + k * third) % n;
            [r, (n - r) % n]
        })
        .find(|&c| c <= n / 6)
        .expect("n divisible by 6")
}

pub fn surface_pattern(n_theta: usize, n_phi: usize) -> Result<SurfacePattern> {
    if n_theta < MIN_SURFACE_GRID || n_phi < MIN_SURFACE_GRID {
        return Err(Error::InvalidInput(format!(
            "surface grid must be at least {MIN_SURFACE_GRID} in each direction"
        )));
    }
    let model = RoofModel::get()?;
    let d_theta = PI / n_theta as f64;
    let d_phi = 2.0 * PI / n_phi as f64;
    let theta_at = |i: usize| (i as f64 + 0.5) * d_theta;
    let phi_at = |j: usize| j as f64 * d_phi;

    let compute = |i: usize, j: usize| -> Result<(Region, f64, bool, bool)> {
        let (theta, phi) = (theta_at(i), phi_at(j));
        let p = (1.0 + theta.cos()) / 2.0;
        let r = classify(&InteriorPoint::from_spherical(p, phi, SURFACE_DEPTH)?)?;
        let tol = 0.5 * d_theta.hypot(d_phi * theta.sin());
        let on_line = model.distance_to_21_curves(&crate::bloch::bloch_vector(p, phi)) < tol;
        Ok((r.region, r.value, on_line, r.numeric_boundary))
    };

    let symmetric = n_phi.is_multiple_of(6);
    let columns: Vec<usize> = if symmetric {
        (0..=n_phi / 6).collect()
    } else {
        (0..n_phi).collect()
    };
    let computed: Vec<Result<(Region, f64, bool, bool)>> = (0..n_theta)
        .into_par_iter()
        .flat_map_iter(|i| columns.iter().map(move |&j| (i, j)).collect::<Vec<_>>())
        .map(|(i, j)| compute(i, j))
        .collect();
    let computed: Vec<(Region, f64, bool, bool)> = computed.into_iter().collect::<Result<_>>()?;
    let width = columns.len();

    let mut rows = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        for j in 0..n_phi {
            let jj = if symmetric { folded_index(j, n_phi) } else { j };
            let (region, roof_value, on_21_line, numeric_boundary) = computed[i * width + jj];
            let region = if symmetric {
                let sym = Symmetry::folding(phi_at(j));
                unfold_region(region, sym, model)
            } else {
                region
            };
            rows.push(SurfaceRow {
                theta: theta_at(i),
                phi: phi_at(j),
                region,
                roof_value,
                on_21_line,
                numeric_boundary,
            });
        }
    }
    Ok(SurfacePattern {
        n_theta,
        n_phi,
        rows,
    })
}

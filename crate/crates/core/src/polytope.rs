//! Zero-states of a two-state superposition family and their convex hull.
//!
//! For `|Ψ[z]⟩ = |ψ₀⟩ + z|ψ₁⟩` the hyperdeterminant is a quartic `P(z)`.
//! Its roots are the zero-tangle states of the family; their Bloch
//! vectors span the zero-polytope, inside which the convex roof vanishes.

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{wrap_angle, BlochPoint, InteriorPoint};
use crate::error::{Error, Result};
use crate::tangle::{self, hyperdeterminant_unchecked, Amplitudes3Q};

/// Roots closer than this are reported as one root with multiplicity.
pub const ROOT_CLUSTER_TOL: f64 = 1e-8;

/// Boundary tolerance of barycentric membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

const DEGREE: usize = 4;

/// Quartic `P(z) = Σ cⱼ zʲ` with `P(z) = Det(ψ₀ + z ψ₁)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TanglePolynomial {
    pub coeffs: [Complex64; 5],
}

/// A root of the tangle polynomial. `Infinity` stands for the state `ψ₁` itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Root {
    Finite(Complex64),
    Infinity,
}

impl Root {
    pub fn to_bloch(self) -> BlochPoint {
        match self {
            Root::Finite(z) => z_to_bloch(z),
            Root::Infinity => BlochPoint::ghz(),
        }
    }
}

impl TanglePolynomial {
    pub fn new(coeffs: [Complex64; 5]) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: [f64; 5]) -> Self {
        Self::new(coeffs.map(|c| Complex64::new(c, 0.0)))
    }

    fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every coefficient vanishes (relative to machine precision).
    pub fn is_degenerate(&self) -> bool {
        self.scale() < 1e-14
    }

    /// Effective degree; coefficients below `1e-12` of the largest are treated as zero.
    pub fn degree(&self) -> Option<usize> {
        let s = self.scale();
        if self.is_degenerate() {
            return None;
        }
        (0..=DEGREE)
            .rev()
            .find(|&j| self.coeffs[j].norm() > 1e-12 * s)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// k-th derivative.
    pub fn derivative(&self, k: usize) -> TanglePolynomial {
        let mut out = [Complex64::new(0.0, 0.0); 5];
        for j in k..=DEGREE {
            let f: f64 = ((j - k + 1)..=j).map(|x| x as f64).product();
            out[j - k] = self.coeffs[j] * f;
        }
        TanglePolynomial { coeffs: out }
    }
}

/// Rounding-error bound for `P^(k)(z)`, including the interpolation noise
/// carried by every coefficient of `P`.
fn derivative_error_bound(poly: &TanglePolynomial, k: usize, z: Complex64) -> f64 {
    let eps = f64::EPSILON;
    let noise = 16.0 * eps * poly.scale();
    let r = z.norm();
    let dk = poly.derivative(k);
    (0..=DEGREE - k)
        .map(|j| {
            let falling: f64 = ((j + 1)..=(j + k)).map(|x| x as f64).product();
            (8.0 * eps * dk.coeffs[j].norm() + noise * falling) * r.powi(j as i32)
        })
        .sum()
}

/// Interpolate `Det(ψ₀ + z ψ₁)` from its values at the fifth roots of unity.
pub fn build_polynomial(basis0: &Amplitudes3Q, basis1: &Amplitudes3Q) -> Result<TanglePolynomial> {
    for b in [basis0, basis1] {
        tangle::hyperdeterminant(b)?;
    }
    let n0 = basis0.norm_sqr();
    let n1 = basis1.norm_sqr();
    let overlap = basis0.inner(basis1).norm_sqr();
    if n0 == 0.0 || n1 == 0.0 || n0 * n1 - overlap <= 1e-12 * n0 * n1 {
        return Err(Error::DependentBasis);
    }

    let nodes: Vec<Complex64> = (0..5)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 5.0))
        .collect();
    let family =
        |z: Complex64| hyperdeterminant_unchecked(basis0.add_scaled(z, basis1).amplitudes());
    let values: Vec<Complex64> = nodes.iter().map(|&z| family(z)).collect();

    // Vandermonde system at roots of unity: the inverse is the conjugate transpose / 5.
    let mut coeffs = [Complex64::new(0.0, 0.0); 5];
    for (j, c) in coeffs.iter_mut().enumerate() {
        *c = nodes
            .iter()
            .zip(&values)
            .map(|(w, v)| v * w.powu(j as u32).conj())
            .sum::<Complex64>()
            / 5.0;
    }
    let poly = TanglePolynomial { coeffs };

    let probe = Complex64::new(0.37, -0.21);
    let residual = (poly.eval(probe) - family(probe)).norm();
    let scale = values.iter().map(|v| v.norm()).fold(1e-300, f64::max);
    if residual > 1e-10 * scale.max(1.0) {
        return Err(Error::Geometry(format!(
            "interpolation residual {residual:e}"
        )));
    }
    Ok(poly)
}

fn companion_roots(poly: &TanglePolynomial, degree: usize) -> Vec<Complex64> {
    let lead = poly.coeffs[degree];
    if degree == 1 {
        return vec![-poly.coeffs[0] / lead];
    }
    let mut m = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        m[(i, degree - 1)] = -poly.coeffs[i] / lead;
    }
    m.schur()
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

fn newton(poly: &TanglePolynomial, mut z: Complex64) -> Complex64 {
    let d = poly.derivative(1);
    let mut best = (poly.eval(z).norm(), z);
    for _ in 0..60 {
        let fz = poly.eval(z);
        let dz = d.eval(z);
        if dz.norm() == 0.0 {
            break;
        }
        let step = fz / dz;
        z -= step;
        let r = poly.eval(z).norm();
        if r < best.0 {
            best = (r, z);
        }
        if step.norm() <= 1e-17 * (1.0 + z.norm()) {
            break;
        }
    }
    best.1
}

/// Does `P` look like it has a root of multiplicity `k` at `c`, within rounding?
fn is_multiple_root(poly: &TanglePolynomial, c: Complex64, k: usize) -> bool {
    (0..k).all(|j| {
        poly.derivative(j).eval(c).norm() <= 1e3 * derivative_error_bound(poly, j, c).max(1e-300)
    })
}

fn cluster(points: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let r = radius * points[i].norm().max(points[j].norm()).max(1.0);
            if (points[i] - points[j]).norm() <= r {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == b {
                        *l = a;
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if let Some(g) = groups.iter_mut().find(|g| label[g[0]] == label[i]) {
            g.push(i);
        } else {
            groups.push(vec![i]);
        }
    }
    groups
}

fn resolve_cluster(
    poly: &TanglePolynomial,
    raw: &[Complex64],
    radius: f64,
    out: &mut Vec<(Complex64, usize)>,
) {
    for group in cluster(raw, radius) {
        let members: Vec<Complex64> = group.iter().map(|&i| raw[i]).collect();
        let k = members.len();
        if k == 1 {
            out.push((newton(poly, members[0]), 1));
            continue;
        }
        let mean = members.iter().sum::<Complex64>() / k as f64;
        // A k-fold root of P is a simple root of P^(k-1).
        let c = newton(&poly.derivative(k - 1), mean);
        if is_multiple_root(poly, c, k) {
            out.push((c, k));
        } else if radius > 1e-9 {
            resolve_cluster(poly, &members, radius / 10.0, out);
        } else {
            out.extend(members.iter().map(|&z| (newton(poly, z), 1)));
        }
    }
}

/// Roots with multiplicities. Missing degree is reported as a root at infinity,
/// so multiplicities always sum to four.
pub fn solve_zero_states(poly: &TanglePolynomial) -> Result<Vec<(Root, usize)>> {
    let degree = poly.degree().ok_or(Error::DegeneratePolynomial)?;
    let mut finite = Vec::new();
    if degree > 0 {
        let raw = companion_roots(poly, degree);
        resolve_cluster(poly, &raw, 1e-2, &mut finite);
    }
    // Final merge of roots that polished to the same point.
    let mut merged: Vec<(Complex64, usize)> = Vec::new();
    for (z, m) in finite {
        if let Some(e) = merged
            .iter_mut()
            .find(|(w, _)| (w - z).norm() <= ROOT_CLUSTER_TOL * w.norm().max(1.0))
        {
            let total = e.1 + m;
            e.0 = (e.0 * e.1 as f64 + z * m as f64) / total as f64;
            e.1 = total;
        } else {
            merged.push((z, m));
        }
    }
    let mut roots: Vec<(Root, usize)> = merged
        .into_iter()
        .map(|(z, m)| (Root::Finite(z), m))
        .collect();
    if degree < DEGREE {
        roots.push((Root::Infinity, DEGREE - degree));
    }
    Ok(roots)
}

/// Map `|ψ₀⟩ + z|ψ₁⟩` to Bloch coordinates with `ψ₁` at the north pole.
///
/// The phase is `−arg z`: dividing by `z` puts the relative phase
/// `1/z` on `ψ₀`, matching the convention of [`tangle::superpose`].
pub fn z_to_bloch(z: Complex64) -> BlochPoint {
    let r2 = z.norm_sqr();
    if !r2.is_finite() {
        return BlochPoint::ghz();
    }
    let p = r2 / (1.0 + r2);
    let phi = if r2 == 0.0 { 0.0 } else { wrap_angle(-z.arg()) };
    BlochPoint { p, phi }
}

/// A non-degenerate tetrahedron with barycentric queries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tetrahedron {
    pub vertices: [Vector3<f64>; 4],
}

impl Tetrahedron {
    pub fn new(vertices: [Vector3<f64>; 4]) -> Result<Self> {
        let t = Self { vertices };
        if t.edge_matrix().determinant().abs() < 1e-12 {
            return Err(Error::DegeneratePolytope(
                "tetrahedron has zero volume".into(),
            ));
        }
        Ok(t)
    }

    fn edge_matrix(&self) -> Matrix3<f64> {
        let [a, b, c, d] = self.vertices;
        Matrix3::from_columns(&[b - a, c - a, d - a])
    }

    pub fn volume(&self) -> f64 {
        self.edge_matrix().determinant().abs() / 6.0
    }

    pub fn barycentric(&self, x: &Vector3<f64>) -> [f64; 4] {
        let m = self.edge_matrix();
        let rhs = x - self.vertices[0];
        let s = m
            .lu()
            .solve(&rhs)
            .unwrap_or_else(|| Vector3::repeat(f64::NAN));
        [1.0 - s.x - s.y - s.z, s.x, s.y, s.z]
    }

    /// Closed membership with boundary tolerance `tol`.
    pub fn contains(&self, x: &Vector3<f64>, tol: f64) -> bool {
        self.barycentric(x).iter().all(|&w| w >= -tol)
    }

    /// Strict interior membership.
    pub fn contains_interior(&self, x: &Vector3<f64>, tol: f64) -> bool {
        self.barycentric(x).iter().all(|&w| w > tol)
    }

    /// Whether the open segment `(a, b)` passes through the interior.
    pub fn segment_hits_interior(&self, a: &Vector3<f64>, b: &Vector3<f64>, tol: f64) -> bool {
        let wa = self.barycentric(a);
        let wb = self.barycentric(b);
        // Barycentric coordinates are affine along the segment: clip [0, 1] to w_i(t) ≥ 0.
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for i in 0..4 {
            let (u, v) = (wa[i], wb[i]);
            let slope = v - u;
            if slope.abs() < 1e-300 {
                if u <= tol {
                    return false;
                }
            } else {
                let t = -u / slope;
                if slope > 0.0 {
                    lo = lo.max(t);
                } else {
                    hi = hi.min(t);
                }
            }
        }
        if hi - lo <= tol {
            return false;
        }
        let mid = 0.5 * (lo + hi);
        let x = a + (b - a) * mid;
        self.contains_interior(&x, tol)
    }
}

/// Convex hull of the zero-states of a superposition family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroPolytope {
    pub vertices: Vec<BlochPoint>,
    pub multiplicities: Vec<usize>,
    pub faces: Vec<[usize; 3]>,
    /// Reason the hull is not a proper tetrahedron, if it is not.
    pub degenerate: Option<String>,
}

impl ZeroPolytope {
    /// Zero-polytope of the family `|ψ₀⟩ + z|ψ₁⟩` for orthonormal `ψ₀` (south pole) and `ψ₁` (north pole).
    pub fn from_basis(basis0: &Amplitudes3Q, basis1: &Amplitudes3Q) -> Result<Self> {
        if !(basis0.is_normalized() && basis1.is_normalized())
            || basis0.inner(basis1).norm() > 1e-12
        {
            return Err(Error::InvalidInput("basis pair must be orthonormal".into()));
        }
        let poly = build_polynomial(basis0, basis1)?;
        let roots = solve_zero_states(&poly)?;
        let vertices: Vec<BlochPoint> = roots.iter().map(|(r, _)| r.to_bloch()).collect();
        let multiplicities: Vec<usize> = roots.iter().map(|(_, m)| *m).collect();
        let mut polytope = Self {
            vertices,
            multiplicities,
            faces: Vec::new(),
            degenerate: None,
        };
        if polytope.vertices.len() < 4 {
            polytope.degenerate = Some(format!("{} distinct zero-states", polytope.vertices.len()));
        } else if let Err(e) = polytope.tetrahedron() {
            polytope.degenerate = Some(e.to_string());
        } else {
            polytope.faces = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        }
        Ok(polytope)
    }

    /// The GHZ/W zero-polytope.
    pub fn ghz_w() -> Result<Self> {
        Self::from_basis(&Amplitudes3Q::w(), &Amplitudes3Q::ghz())
    }

    pub fn cartesian_vertices(&self) -> Vec<Vector3<f64>> {
        self.vertices.iter().map(|v| v.cartesian()).collect()
    }

    pub fn tetrahedron(&self) -> Result<Tetrahedron> {
        let v = self.cartesian_vertices();
        if v.len() != 4 {
            return Err(Error::DegeneratePolytope(format!("{} vertices", v.len())));
        }
        Tetrahedron::new([v[0], v[1], v[2], v[3]])
    }

    fn checked_tetrahedron(&self) -> Result<Tetrahedron> {
        match &self.degenerate {
            Some(reason) => Err(Error::DegeneratePolytope(reason.clone())),
            None => self.tetrahedron(),
        }
    }

    /// Closed membership at tolerance [`MEMBERSHIP_TOL`].
    pub fn contains(&self, point: &InteriorPoint) -> Result<bool> {
        Ok(self
            .checked_tetrahedron()?
            .contains(&point.vector(), MEMBERSHIP_TOL))
    }

    /// Indices of vertices whose open segment to `point` avoids the interior
    /// of every opaque tetrahedron. Pass [`ZeroPolytope::tetrahedron`] among
    /// `opaque` to let the polytope hide its own far side.
    pub fn visible_vertices(
        &self,
        point: &InteriorPoint,
        opaque: &[Tetrahedron],
    ) -> Result<Vec<usize>> {
        self.checked_tetrahedron()?;
        let x = point.vector();
        if opaque
            .iter()
            .any(|t| t.contains_interior(&x, MEMBERSHIP_TOL))
        {
            return Err(Error::InsideOpaque);
        }
        Ok(self
            .cartesian_vertices()
            .iter()
            .enumerate()
            .filter(|(_, v)| {
                !opaque
                    .iter()
                    .any(|t| t.segment_hits_interior(&x, v, MEMBERSHIP_TOL))
            })
            .map(|(i, _)| i)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn w_ghz_polynomial_by_hand() {
        let poly = build_polynomial(&Amplitudes3Q::w(), &Amplitudes3Q::ghz()).unwrap();
        let expected = [0.0, 4.0 / (3.0 * 6f64.sqrt()), 0.0, 0.0, 0.25];
        for (got, want) in poly.coeffs.iter().zip(expected) {
            assert_abs_diff_eq!(got.re, want, epsilon = 1e-15);
            assert_abs_diff_eq!(got.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn poles_pair_gives_double_roots() {
        let poly =
            build_polynomial(&Amplitudes3Q::basis(0, 0, 0), &Amplitudes3Q::basis(1, 1, 1)).unwrap();
        assert_eq!(poly.degree(), Some(2));
        let roots = solve_zero_states(&poly).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].1, 2);
        assert!(matches!(roots[0].0, Root::Finite(z) if z.norm() < 1e-12));
        assert_eq!(roots[1], (Root::Infinity, 2));
    }

    #[test]
    fn biseparable_family_is_degenerate() {
        let poly =
            build_polynomial(&Amplitudes3Q::basis(0, 0, 0), &Amplitudes3Q::basis(0, 0, 1)).unwrap();
        assert!(poly.is_degenerate());
        assert_eq!(solve_zero_states(&poly), Err(Error::DegeneratePolynomial));
    }

    #[test]
    fn dependent_basis_rejected() {
        let g = Amplitudes3Q::ghz();
        assert_eq!(
            build_polynomial(&g, &g.scale(c(2.0))),
            Err(Error::DependentBasis)
        );
    }

    #[test]
    fn quadruple_root() {
        let poly = TanglePolynomial::from_real([1.0, -4.0, 6.0, -4.0, 1.0]);
        let roots = solve_zero_states(&poly).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].1, 4);
        match roots[0].0 {
            Root::Finite(z) => assert_abs_diff_eq!((z - c(1.0)).norm(), 0.0, epsilon = 1e-12),
            Root::Infinity => panic!("finite root expected"),
        }
    }

    #[test]
    fn close_but_distinct_roots_stay_separate() {
        // (z - 1)(z - 1 - 1e-4)(z + 2)(z - 3i)
        let r = [c(1.0), c(1.0 + 1e-4), c(-2.0), Complex64::new(0.0, 3.0)];
        let mut coeffs = [c(1.0), c(0.0), c(0.0), c(0.0), c(0.0)];
        for root in r {
            let mut next = [c(0.0); 5];
            for j in 0..5 {
                if j > 0 {
                    next[j] += coeffs[j - 1];
                }
                next[j] -= root * coeffs[j];
            }
            coeffs = next;
        }
        let roots = solve_zero_states(&TanglePolynomial::new(coeffs)).unwrap();
        assert_eq!(roots.len(), 4);
        assert!(roots.iter().all(|(_, m)| *m == 1));
    }

    #[test]
    fn ghz_w_roots() {
        let poly = build_polynomial(&Amplitudes3Q::w(), &Amplitudes3Q::ghz()).unwrap();
        let roots = solve_zero_states(&poly).unwrap();
        assert_eq!(roots.len(), 4);
        let modulus = (16.0 / (3.0 * 6f64.sqrt())).cbrt();
        let mut phases = Vec::new();
        for (root, m) in &roots {
            assert_eq!(*m, 1);
            let Root::Finite(z) = root else {
                panic!("finite roots expected")
            };
            if z.norm() < 1e-12 {
                continue;
            }
            assert_abs_diff_eq!(z.norm(), modulus, epsilon = 1e-12);
            phases.push(z.arg().rem_euclid(2.0 * PI));
        }
        phases.sort_by(f64::total_cmp);
        for (got, want) in phases.iter().zip([PI / 3.0, PI, 5.0 * PI / 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn z_to_bloch_examples() {
        assert_eq!(z_to_bloch(c(0.0)), BlochPoint::w());
        assert_eq!(Root::Infinity.to_bloch(), BlochPoint::ghz());
        let modulus = (16.0 / (3.0 * 6f64.sqrt())).cbrt();
        let b = z_to_bloch(c(-modulus));
        assert_abs_diff_eq!(b.p, tangle::p0(), epsilon = 1e-14);
        assert_abs_diff_eq!(b.phi, PI, epsilon = 1e-15);
    }

    #[test]
    fn z_to_bloch_round_trips_through_superpose() {
        let z = Complex64::from_polar(0.8, 0.9);
        let raw = Amplitudes3Q::w()
            .add_scaled(z, &Amplitudes3Q::ghz())
            .normalize()
            .unwrap();
        let b = z_to_bloch(z);
        let s = tangle::superpose(b.p, b.phi).unwrap();
        assert_abs_diff_eq!(raw.inner(&s).norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn ghz_w_polytope_membership() {
        let zp = ZeroPolytope::ghz_w().unwrap();
        assert!(zp.degenerate.is_none());
        assert_eq!(zp.faces.len(), 4);
        let p0 = tangle::p0();
        assert!(zp
            .contains(&InteriorPoint::on_axis(p0 / 2.0).unwrap())
            .unwrap());
        assert!(!zp.contains(&InteriorPoint::on_axis(1.0).unwrap()).unwrap());
        let centroid = zp.cartesian_vertices().iter().sum::<Vector3<f64>>() / 4.0;
        assert!(zp.contains(&InteriorPoint::new(centroid).unwrap()).unwrap());
    }

    #[test]
    fn degenerate_polytope_refuses_queries() {
        let zp =
            ZeroPolytope::from_basis(&Amplitudes3Q::basis(0, 0, 0), &Amplitudes3Q::basis(1, 1, 1))
                .unwrap();
        assert!(zp.degenerate.is_some());
        assert!(matches!(
            zp.contains(&InteriorPoint::on_axis(0.5).unwrap()),
            Err(Error::DegeneratePolytope(_))
        ));
    }

    fn vertex_index(zp: &ZeroPolytope, p: f64, phi: f64) -> usize {
        zp.vertices
            .iter()
            .position(|v| {
                (v.p - p).abs() < 1e-9 && (p == 0.0 || (wrap_angle(v.phi - phi)).abs() < 1e-9)
            })
            .unwrap()
    }

    #[test]
    fn visibility_above_upper_face() {
        let zp = ZeroPolytope::ghz_w().unwrap();
        let w = vertex_index(&zp, 0.0, 0.0);
        let x = InteriorPoint::on_axis(tangle::p0() + 1e-3).unwrap();
        let own = zp.tetrahedron().unwrap();
        let mut visible = zp.visible_vertices(&x, &[own]).unwrap();
        visible.sort_unstable();
        let mut expected: Vec<usize> = (0..4).filter(|&i| i != w).collect();
        expected.sort_unstable();
        assert_eq!(visible, expected);
    }

    #[test]
    fn visibility_beyond_lower_face() {
        let zp = ZeroPolytope::ghz_w().unwrap();
        let x = InteriorPoint::from_spherical(0.02, 0.0, 0.99).unwrap();
        assert!(!zp.contains(&x).unwrap());
        let own = zp.tetrahedron().unwrap();
        let mut visible = zp.visible_vertices(&x, &[own]).unwrap();
        visible.sort_unstable();
        let mut expected = vec![
            vertex_index(&zp, 0.0, 0.0),
            vertex_index(&zp, tangle::p0(), PI / 3.0),
            vertex_index(&zp, tangle::p0(), -PI / 3.0),
        ];
        expected.sort_unstable();
        assert_eq!(visible, expected);
    }

    #[test]
    fn visibility_without_obstruction() {
        let zp = ZeroPolytope::ghz_w().unwrap();
        let x = InteriorPoint::new(Vector3::x()).unwrap();
        assert_eq!(zp.visible_vertices(&x, &[]).unwrap(), vec![0, 1, 2, 3]);
        let own = zp.tetrahedron().unwrap();
        let inside = InteriorPoint::on_axis(0.3).unwrap();
        assert_eq!(
            zp.visible_vertices(&inside, &[own]),
            Err(Error::InsideOpaque)
        );
    }
}

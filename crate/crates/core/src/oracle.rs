//! Brute-force convex roof: direct minimization of the average `√τ₃` over
//! decompositions generated by isometries acting on the spectral
//! decomposition of the density matrix.
//!
//! Nothing here uses the geometry of the Bloch ball; the density matrix is
//! diagonalized numerically and tangles come from the hyperdeterminant of
//! the three-qubit amplitudes.
//!
//! The isometry search alone stalls near the optimum: every zero-tangle
//! member sits in a square-root cusp of the objective. Four-state searches
//! are therefore finished by column generation on the linear program whose
//! variables are weights on all pure states of the sphere.
//!
//! Searches are nested: the `n`-state search also runs the `(n − 1)`-state
//! one and starts a simplex from its embedded solution, so the minimum never
//! grows with `n`.

use nalgebra::{DMatrix, Matrix2, Matrix4, Vector2, Vector3, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::bloch::{BlochPoint, InteriorPoint};
use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::optimize::NelderMead;
use crate::tangle::{hyperdeterminant_unchecked, Amplitudes3Q, TANGLE_NORMALIZATION};

pub const MIN_STATES: usize = 2;
pub const MAX_STATES: usize = 4;
/// Simplex evaluations per restart and per real parameter.
pub const EVALS_PER_DIM: usize = 200;
pub const WEIGHT_FLOOR: f64 = 1e-12;
const ISOMETRY_TOL: f64 = 1e-12;
const RANK_ONE_TOL: f64 = 1e-12;
const POLISH_STARTS: usize = 2;
const PRICING_ROUNDS: usize = 200;
const PRICING_THETA: usize = 32;
const PRICING_PHI: usize = 64;
const PRICING_REFINE_STARTS: usize = 3;
const PRICING_REFINE_EVALS: usize = 400;
const PRICING_TOL: f64 = 1e-12;
const BASIS_REFINE_STEP: f64 = 1e-2;
const BASIS_WEIGHT_TOL: f64 = 1e-10;
/// Bases with a smaller determinant give meaningless duals.
const BASIS_DET_TOL: f64 = 1e-10;
/// Bases whose values differ by rounding only count as tied.
const LP_TIE_TOL: f64 = 1e-9;
const POOL_MAX: usize = 16;
/// Columns closer than this are the same state.
const MERGE_DIST: f64 = 1e-9;
const ZERO_FOUND_TOL: f64 = 1e-3;

/// An `n × 2` complex matrix with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryParams {
    v: DMatrix<Complex64>,
}

impl IsometryParams {
    /// Orthonormalize the `n × 2` matrix whose entries are `raw[2k] + i·raw[2k+1]`
    /// in row-major order, by `A (A†A)^{-1/2}`.
    pub fn from_raw(n: usize, raw: &[f64]) -> Result<Self> {
        if !(MIN_STATES..=MAX_STATES).contains(&n) || raw.len() != 4 * n {
            return Err(Error::InvalidInput(format!(
                "need {} reals for n = {n}",
                4 * n
            )));
        }
        let a = DMatrix::from_fn(n, 2, |r, c| {
            Complex64::new(raw[4 * r + 2 * c], raw[4 * r + 2 * c + 1])
        });
        Ok(Self {
            v: lowdin(&a).ok_or(Error::DependentBasis)?,
        })
    }

    pub fn from_matrix(v: DMatrix<Complex64>) -> Result<Self> {
        if v.ncols() != 2 || !(MIN_STATES..=MAX_STATES).contains(&v.nrows()) {
            return Err(Error::InvalidInput(
                "isometry must be n × 2 with 2 ≤ n ≤ 4".into(),
            ));
        }
        let gram = v.adjoint() * &v;
        let err = (gram - DMatrix::identity(2, 2))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if err > ISOMETRY_TOL {
            return Err(Error::InvalidInput(format!(
                "columns not orthonormal (error {err:e})"
            )));
        }
        Ok(Self { v })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_matrix(DMatrix::from_fn(n, 2, |r, c| {
            if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn n_states(&self) -> usize {
        self.v.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.v
    }
}

fn lowdin(a: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
    let g = Matrix2::new(
        (a.column(0).adjoint() * a.column(0))[0],
        (a.column(0).adjoint() * a.column(1))[0],
        (a.column(1).adjoint() * a.column(0))[0],
        (a.column(1).adjoint() * a.column(1))[0],
    );
    let eig = g.symmetric_eigen();
    if eig.eigenvalues.min() <= 1e-14 * eig.eigenvalues.max().max(1e-300) {
        return None;
    }
    let d = Matrix2::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(1.0 / l.sqrt(), 0.0)));
    let inv_sqrt = eig.eigenvectors * d * eig.eigenvectors.adjoint();
    let m = DMatrix::from_fn(2, 2, |r, c| inv_sqrt[(r, c)]);
    Some(a * m)
}

/// Eigenvalues and eigenvectors of the density matrix of `point` in the
/// `{GHZ, W}` basis.
struct Spectrum {
    values: [f64; 2],
    vectors: [Vector2<Complex64>; 2],
}

fn spectrum(point: &InteriorPoint) -> Spectrum {
    let v = point.vector();
    let half = Complex64::new(0.5, 0.0);
    let rho = Matrix2::new(
        half * (1.0 + v.z),
        Complex64::new(v.x, -v.y) * 0.5,
        Complex64::new(v.x, v.y) * 0.5,
        half * (1.0 - v.z),
    );
    let eig = rho.symmetric_eigen();
    Spectrum {
        values: [eig.eigenvalues[0].max(0.0), eig.eigenvalues[1].max(0.0)],
        vectors: [
            eig.eigenvectors.column(0).into_owned(),
            eig.eigenvectors.column(1).into_owned(),
        ],
    }
}

fn embed(c: &Vector2<Complex64>) -> [Complex64; 8] {
    let g = Amplitudes3Q::ghz();
    let w = Amplitudes3Q::w();
    let mut psi = [Complex64::new(0.0, 0.0); 8];
    for (k, z) in psi.iter_mut().enumerate() {
        *z = c[0] * g.amplitudes()[k] + c[1] * w.amplitudes()[k];
    }
    psi
}

/// `‖ψ̃‖² √τ₃(ψ̃/‖ψ̃‖)`, which by homogeneity of the hyperdeterminant is
/// `√(4 |Det ψ̃|)` with no normalization.
fn weighted_sqrt_tangle(c: &Vector2<Complex64>) -> f64 {
    (TANGLE_NORMALIZATION * hyperdeterminant_unchecked(&embed(c)).norm()).sqrt()
}

fn subnormalized_states(s: &Spectrum, v: &DMatrix<Complex64>) -> Vec<Vector2<Complex64>> {
    let roots = [s.values[0].sqrt(), s.values[1].sqrt()];
    (0..v.nrows())
        .map(|i| s.vectors[0] * (v[(i, 0)] * roots[0]) + s.vectors[1] * (v[(i, 1)] * roots[1]))
        .collect()
}

fn to_bloch(c: &Vector2<Complex64>) -> BlochPoint {
    let n = c.norm_squared();
    let p = (c[0].norm_sqr() / n).clamp(0.0, 1.0);
    let phi = if c[0].norm() > 0.0 && c[1].norm() > 0.0 {
        (c[1] * c[0].conj()).arg()
    } else {
        0.0
    };
    BlochPoint { p, phi }
}

fn is_rank_one(point: &InteriorPoint) -> bool {
    point.radius() >= 1.0 - RANK_ONE_TOL
}

/// Decomposition of `point` obtained from `params`, with weights below
/// [`WEIGHT_FLOOR`] dropped.
pub fn decomposition_from_isometry(
    point: &InteriorPoint,
    params: &IsometryParams,
) -> Result<Decomposition> {
    if is_rank_one(point) {
        return Ok(Decomposition::pure(BlochPoint::from_direction(
            &point.vector(),
        )?));
    }
    let states = subnormalized_states(&spectrum(point), params.matrix());
    let members = states
        .iter()
        .map(|c| (c.norm_squared(), to_bloch(c)))
        .collect();
    Decomposition::pruned(members, WEIGHT_FLOOR)
}

/// Average `√τ₃` of the decomposition from `params`, computed from the
/// hyperdeterminant.
pub fn isometry_objective(point: &InteriorPoint, params: &IsometryParams) -> f64 {
    subnormalized_states(&spectrum(point), params.matrix())
        .iter()
        .map(weighted_sqrt_tangle)
        .sum()
}

/// Best decomposition found by the brute-force search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub best: Decomposition,
    pub evals: usize,
    /// Isometry parameters of the best simplex run, before polishing.
    #[serde(skip)]
    raw: Vec<f64>,
}

/// SplitMix64 step; expands one seed into independent stream seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub n_states: usize,
    pub restarts: usize,
    pub seed: u64,
    pub evals_per_dim: usize,
    /// Refine four-state searches by moving support points on the sphere.
    pub polish: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_states: MAX_STATES,
            restarts: 32,
            seed: 0,
            evals_per_dim: EVALS_PER_DIM,
            polish: true,
        }
    }
}

/// Minimize the average `√τ₃` over `n_states`-member decompositions by
/// Nelder–Mead from `restarts` random isometries. Deterministic in `seed`.
pub fn brute_force_roof(
    point: &InteriorPoint,
    n_states: usize,
    restarts: usize,
    seed: u64,
) -> Result<OracleResult> {
    brute_force_with(
        point,
        &OracleConfig {
            n_states,
            restarts,
            seed,
            ..Default::default()
        },
    )
}

pub fn brute_force_with(point: &InteriorPoint, cfg: &OracleConfig) -> Result<OracleResult> {
    let n = cfg.n_states;
    if !(MIN_STATES..=MAX_STATES).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "n_states must lie in {MIN_STATES}..={MAX_STATES}"
        )));
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidInput("need at least one restart".into()));
    }
    if is_rank_one(point) {
        let state = BlochPoint::from_direction(&point.vector())?;
        let c = state.state();
        let value =
            (TANGLE_NORMALIZATION * hyperdeterminant_unchecked(c.amplitudes()).norm()).sqrt();
        return Ok(OracleResult {
            value,
            best: Decomposition::pure(state),
            evals: 0,
            raw: vec![0.0; 4 * n],
        });
    }

    let inner = if n > MIN_STATES {
        Some(brute_force_with(
            point,
            &OracleConfig {
                n_states: n - 1,
                polish: false,
                ..cfg.clone()
            },
        )?)
    } else {
        None
    };

    let spec = spectrum(point);
    let dim = 4 * n;
    let nm = NelderMead {
        max_evals: cfg.evals_per_dim * dim,
        ..Default::default()
    };
    let objective = |raw: &[f64]| -> f64 {
        let a = DMatrix::from_fn(n, 2, |r, c| {
            Complex64::new(raw[4 * r + 2 * c], raw[4 * r + 2 * c + 1])
        });
        match lowdin(&a) {
            Some(v) => subnormalized_states(&spec, &v)
                .iter()
                .map(weighted_sqrt_tangle)
                .sum(),
            None => f64::INFINITY,
        }
    };

    let mut starts: Vec<Vec<f64>> = (0..cfg.restarts)
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(cfg.seed ^ splitmix64(k as u64)));
            (0..dim)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect();
    if let Some(r) = &inner {
        let mut x = r.raw.clone();
        x.resize(dim, 0.0);
        starts.push(x);
    }
    let mut runs: Vec<(usize, Vec<f64>, f64, usize)> = starts
        .into_par_iter()
        .enumerate()
        .map(|(k, x0)| {
            let m = nm.minimize(objective, &x0);
            (k, m.x, m.fx, m.evals)
        })
        .collect();
    let mut evals: usize =
        runs.iter().map(|r| r.3).sum::<usize>() + inner.as_ref().map_or(0, |r| r.evals);
    runs.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)));
    let (_, x, value, _) = &runs[0];
    let mut best = OracleResult {
        value: *value,
        best: decomposition_from_isometry(point, &IsometryParams::from_raw(n, x)?)?,
        evals: 0,
        raw: x.clone(),
    };
    if let Some(r) = inner {
        if r.value < best.value {
            let mut raw = r.raw;
            raw.resize(dim, 0.0);
            best = OracleResult { raw, ..r };
        }
    }

    if cfg.polish && n == MAX_STATES {
        let starts: Vec<Decomposition> = runs
            .iter()
            .take(POLISH_STARTS)
            .map(|(_, x, _, _)| {
                decomposition_from_isometry(point, &IsometryParams::from_raw(n, x)?)
            })
            .collect::<Result<_>>()?;
        let polished: Vec<(Option<(f64, Decomposition)>, usize)> = starts
            .into_par_iter()
            .map(|d| polish_support(&point.vector(), &d))
            .collect();
        for (res, e) in polished {
            evals += e;
            if let Some((v, d)) = res {
                if v < best.value {
                    best.value = v;
                    best.best = d;
                }
            }
        }
    }
    best.evals = evals;
    Ok(best)
}

/// Zeros of `√τ₃` on the sphere, found numerically from the local minima of
/// a grid. Pricing starts from them because the reduced cost has its
/// narrowest dips there.
fn tangle_zeros() -> &'static [Vector3<f64>] {
    static CELL: OnceLock<Vec<Vector3<f64>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let (nt, np) = (PRICING_THETA, PRICING_PHI);
        let at = |i: usize, j: usize| {
            let theta = (i as f64 + 0.5) * std::f64::consts::PI / nt as f64;
            let phi = std::f64::consts::TAU * j as f64 / np as f64;
            (pure_sqrt_tangle(&direction(theta, phi)), theta, phi)
        };
        let grid: Vec<Vec<(f64, f64, f64)>> = (0..nt)
            .map(|i| (0..np).map(|j| at(i, j)).collect())
            .collect();
        let local = NelderMead {
            max_evals: PRICING_REFINE_EVALS,
            initial_step: std::f64::consts::PI / nt as f64,
            ..Default::default()
        };
        let mut zeros: Vec<Vector3<f64>> = vec![];
        for i in 0..nt {
            for j in 0..np {
                let v = grid[i][j].0;
                let lowest = (i.saturating_sub(1)..=(i + 1).min(nt - 1))
                    .flat_map(|a| [np - 1, 0, 1].map(|d| (a, (j + d) % np)))
                    .all(|(a, b)| grid[a][b].0 >= v);
                if !lowest {
                    continue;
                }
                let m = local.minimize(
                    |x| pure_sqrt_tangle(&direction(x[0], x[1])),
                    &[grid[i][j].1, grid[i][j].2],
                );
                let n = direction(m.x[0], m.x[1]);
                if m.fx < ZERO_FOUND_TOL && zeros.iter().all(|z| (z - n).norm() > 1e-4) {
                    zeros.push(n);
                }
            }
        }
        zeros
    })
}

fn direction(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    )
}

/// `√τ₃` of the pure state with Bloch vector `n`, from its amplitudes.
fn pure_sqrt_tangle(n: &Vector3<f64>) -> f64 {
    BlochPoint::from_direction(n)
        .map(|b| {
            (TANGLE_NORMALIZATION * hyperdeterminant_unchecked(b.state().amplitudes()).norm())
                .sqrt()
        })
        .unwrap_or(f64::INFINITY)
}

/// Cheapest decomposition of `rho` over the points, as the best feasible
/// basis of the linear program `min Σ wᵢ tᵢ` with `Σ wᵢ nᵢ = rho`,
/// `Σ wᵢ = 1`, `w ≥ 0`. Ties between degenerate optimal bases go to the one
/// whose duals price the pool best, so that pricing never re-proposes a
/// column that is already there.
fn support_lp(
    points: &[Vector3<f64>],
    tangles: &[f64],
    rho: &Vector3<f64>,
) -> Option<(f64, [usize; 4], [f64; 4])> {
    let m = points.len();
    let rhs = Vector4::new(rho.x, rho.y, rho.z, 1.0);
    // (value, lowest reduced cost over the pool, basis, weights)
    let mut feasible: Vec<(f64, f64, [usize; 4], [f64; 4])> = vec![];
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                for d in c + 1..m {
                    let idx = [a, b, c, d];
                    let mat = Matrix4::from_fn(|r, k| if r < 3 { points[idx[k]][r] } else { 1.0 });
                    if mat.determinant().abs() < BASIS_DET_TOL {
                        continue;
                    }
                    let lu = mat.lu();
                    let Some(w) = lu.solve(&rhs) else {
                        continue;
                    };
                    if !w.iter().all(|x| x.is_finite() && *x >= -BASIS_WEIGHT_TOL) {
                        continue;
                    }
                    let w = [w[0].max(0.0), w[1].max(0.0), w[2].max(0.0), w[3].max(0.0)];
                    let v: f64 = (0..4).map(|k| w[k] * tangles[idx[k]]).sum();
                    let cost = Vector4::from_fn(|k, _| tangles[idx[k]]);
                    let lowest = mat
                        .transpose()
                        .lu()
                        .solve(&cost)
                        .map_or(f64::NEG_INFINITY, |y| {
                            (0..m)
                                .map(|j| {
                                    let n = &points[j];
                                    tangles[j] - y[0] * n.x - y[1] * n.y - y[2] * n.z - y[3]
                                })
                                .fold(f64::INFINITY, f64::min)
                        });
                    feasible.push((v, lowest, idx, w));
                }
            }
        }
    }
    let vmin = feasible.iter().map(|f| f.0).fold(f64::INFINITY, f64::min);
    feasible
        .into_iter()
        .filter(|f| f.0 <= vmin + LP_TIE_TOL)
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.total_cmp(&a.0)))
        .map(|(v, _, idx, w)| (v, idx, w))
}

/// Column generation on the linear program over all pure states: price the
/// sphere against the duals of the current basis, add the most negative
/// reduced-cost state, re-solve, until no state prices below zero.
///
/// The column pool always holds the numerical tangle zeros and the six axis states so that a nonsingular
/// basis exists even when the decomposition has fewer than four distinct
/// members.
fn polish_support(
    rho: &Vector3<f64>,
    start: &Decomposition,
) -> (Option<(f64, Decomposition)>, usize) {
    let mut pool: Vec<Vector3<f64>> = vec![
        Vector3::x(),
        -Vector3::x(),
        Vector3::y(),
        -Vector3::y(),
        Vector3::z(),
        -Vector3::z(),
    ];
    let fillers = pool.len();
    let add = |pool: &mut Vec<Vector3<f64>>, n: Vector3<f64>| -> bool {
        if pool.iter().any(|q| (q - n).norm() < MERGE_DIST) {
            return false;
        }
        pool.push(n);
        true
    };
    for z in tangle_zeros() {
        add(&mut pool, *z);
    }
    let fixed = pool.len();
    for (_, b) in &start.members {
        add(&mut pool, b.cartesian());
    }
    let mut tangles: Vec<f64> = pool.iter().map(pure_sqrt_tangle).collect();
    let mut evals = tangles.len();
    let Some(mut sol) = support_lp(&pool, &tangles, rho) else {
        return (None, evals);
    };

    for _ in 0..PRICING_ROUNDS {
        let (_, idx, _) = sol;
        let basis = Matrix4::from_fn(|r, k| if r < 3 { pool[idx[k]][r] } else { 1.0 });
        let cost = Vector4::from_fn(|k, _| tangles[idx[k]]);
        let Some(dual) = basis.transpose().lu().solve(&cost) else {
            break;
        };
        let y = Vector3::new(dual[0], dual[1], dual[2]);
        let reduced = |n: &Vector3<f64>| pure_sqrt_tangle(n) - y.dot(n) - dual[3];

        let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(PRICING_THETA * PRICING_PHI);
        for i in 0..PRICING_THETA {
            let theta = (i as f64 + 0.5) * std::f64::consts::PI / PRICING_THETA as f64;
            for j in 0..PRICING_PHI {
                let phi = std::f64::consts::TAU * j as f64 / PRICING_PHI as f64;
                grid.push((reduced(&direction(theta, phi)), theta, phi));
            }
        }
        evals += grid.len();
        grid.sort_by(|a, b| a.0.total_cmp(&b.0));
        let local = NelderMead {
            max_evals: PRICING_REFINE_EVALS,
            initial_step: std::f64::consts::PI / PRICING_THETA as f64,
            ..Default::default()
        };
        // Cusps are narrower than the grid; pool points, which include the
        // tangle zeros, are refined from where they stand.
        let near = NelderMead {
            initial_step: BASIS_REFINE_STEP,
            ..local.clone()
        };
        let starts = grid
            .iter()
            .take(PRICING_REFINE_STARTS)
            .map(|&(_, theta, phi)| (&local, theta, phi))
            .chain(pool[fillers..].iter().map(|n| {
                let b = BlochPoint::from_direction(n).unwrap_or_else(|_| BlochPoint::ghz());
                (&near, b.theta(), b.phi)
            }));
        let mut best = (f64::INFINITY, Vector3::zeros());
        for (nm, theta, phi) in starts {
            let m = nm.minimize(|x| reduced(&direction(x[0], x[1])), &[theta, phi]);
            evals += m.evals;
            if m.fx < best.0 {
                best = (m.fx, direction(m.x[0], m.x[1]));
            }
        }
        if best.0 > -PRICING_TOL || !add(&mut pool, best.1) {
            break;
        }
        tangles.push(pure_sqrt_tangle(&best.1));
        if pool.len() > POOL_MAX {
            if let Some(k) = (fixed..pool.len() - 1).find(|k| !idx.contains(k)) {
                pool.remove(k);
                tangles.remove(k);
            }
        }
        match support_lp(&pool, &tangles, rho) {
            Some(s) if s.0 <= sol.0 + LP_TIE_TOL => sol = s,
            _ => break,
        }
    }

    let (v, idx, w) = sol;
    let members = (0..4)
        .map(|k| BlochPoint::from_direction(&pool[idx[k]]).map(|b| (w[k], b)))
        .collect::<Result<Vec<_>>>();
    let decomposition = members.and_then(|m| Decomposition::pruned(m, WEIGHT_FLOOR));
    (decomposition.ok().map(|d| (v, d)), evals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::p0;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_gives_spectral_decomposition() {
        let point = InteriorPoint::on_axis(0.8).unwrap();
        let d = decomposition_from_isometry(&point, &IsometryParams::identity(2).unwrap()).unwrap();
        let mut ws: Vec<f64> = d.members.iter().map(|m| m.0).collect();
        ws.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(ws[0], 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(ws[1], 0.8, epsilon = 1e-12);
    }

    #[test]
    fn random_isometries_preserve_barycenter() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            let raw: Vec<f64> = (0..4 * n)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let params = IsometryParams::from_raw(n, &raw).unwrap();
            let gram = params.matrix().adjoint() * params.matrix();
            assert!((gram - DMatrix::identity(2, 2))
                .iter()
                .all(|z| z.norm() < 1e-12));
            let point = InteriorPoint::new(nalgebra::Vector3::new(0.2, -0.3, 0.1)).unwrap();
            let d = decomposition_from_isometry(&point, &params).unwrap();
            assert_eq!(d.members.len(), n);
            assert_abs_diff_eq!(d.barycenter(), point.vector(), epsilon = 1e-12);
        }
    }

    #[test]
    fn objective_matches_closed_form_tangles() {
        let point = InteriorPoint::new(nalgebra::Vector3::new(0.1, 0.4, 0.3)).unwrap();
        let params = IsometryParams::from_raw(
            3,
            &[
                0.3, -1.0, 0.2, 0.5, 1.1, 0.0, -0.4, 0.7, 0.9, 0.1, -0.2, 0.3,
            ],
        )
        .unwrap();
        let d = decomposition_from_isometry(&point, &params).unwrap();
        let closed: f64 = d.members.iter().map(|(w, b)| w * b.sqrt_tangle()).sum();
        assert_abs_diff_eq!(isometry_objective(&point, &params), closed, epsilon = 1e-12);
    }

    #[test]
    fn axis_point_matches_linear_law() {
        let r = brute_force_roof(&InteriorPoint::on_axis(0.8).unwrap(), 4, 8, 1).unwrap();
        assert_abs_diff_eq!(r.value, (0.8 - p0()) / (1.0 - p0()), epsilon = 1e-3);
    }

    #[test]
    fn ghz_pole_and_determinism() {
        let r = brute_force_roof(&InteriorPoint::on_axis(1.0).unwrap(), 4, 4, 0).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-6);
        let p = InteriorPoint::new(nalgebra::Vector3::new(0.3, 0.1, -0.2)).unwrap();
        assert_eq!(
            brute_force_roof(&p, 3, 4, 9).unwrap(),
            brute_force_roof(&p, 3, 4, 9).unwrap()
        );
    }

    #[test]
    fn inside_zero_polytope() {
        let r = brute_force_roof(&InteriorPoint::on_axis(0.4).unwrap(), 4, 8, 3).unwrap();
        assert!(r.value < 1e-4, "{}", r.value);
    }

    #[test]
    fn support_lp_picks_cheapest_basis() {
        // Octahedron vertices around the origin; only the cheap ones should carry weight.
        let pts = [
            Vector3::x(),
            -Vector3::x(),
            Vector3::y(),
            -Vector3::y(),
            Vector3::z(),
            -Vector3::z(),
        ];
        let t = [1.0, 1.0, 1.0, 1.0, 0.0, 0.0];
        let (v, idx, w) = support_lp(&pts, &t, &Vector3::zeros()).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        let mass: f64 = (0..4).filter(|&k| idx[k] >= 4).map(|k| w[k]).sum();
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-12);
    }
}

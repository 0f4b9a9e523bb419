//! The acceptance suite: nine numbered criteria with tolerances, runtime
//! budgets and a pass/fail verdict each.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bloch::{inclined_chord, plane_through_points, BlochPoint, InteriorPoint};
use crate::decomp::{
    avg_tangle, decide_02_vs_21, default_locking_eps, find_m_states, find_n_states, fit_circle,
    locking_perturbation, optimize_21_line, Verdict,
};
use crate::error::Result;
use crate::oracle::{brute_force_roof, splitmix64};
use crate::polytope::ZeroPolytope;
use crate::report::reference;
use crate::roof::{classify, surface_pattern, Region, RoofModel, Symmetry};
use crate::tangle::{p0, sqrt_tau3_analytic, sqrt_tau3_phi_curvature};

/// Knobs of the suite. `tolerance_scale` multiplies every numeric tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub tolerance_scale: f64,
    /// `(n_θ, n_φ, n_r)` of the oracle comparison sample.
    pub oracle_grid: (usize, usize, usize),
    pub oracle_restarts: usize,
    pub seed: u64,
    /// Enforce the runtime budgets.
    pub check_runtime: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerance_scale: 1.0,
            oracle_grid: (20, 20, 5),
            oracle_restarts: 32,
            seed: 0,
            check_runtime: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub runtime_s: f64,
    pub budget_s: Option<f64>,
}

impl CriterionReport {
    /// One line for a table: `[PASS] 2 N-state search (0.03 s): …`.
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.runtime_s,
            self.detail
        )
    }
}

/// Statistics of `oracle − classifier` over the criterion 7 sample.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GapStats {
    pub points: usize,
    pub max_abs_gap: f64,
    pub mean_abs_gap: f64,
    pub p99_abs_gap: f64,
    /// Most negative `oracle − classifier`.
    pub min_signed_gap: f64,
    pub within_tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub criteria: Vec<CriterionReport>,
    pub oracle_gaps: Option<GapStats>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

pub const CRITERIA: [(u8, &str, Option<f64>); 9] = [
    (1, "zero-polytope", Some(1.0)),
    (2, "N-state search", Some(10.0)),
    (3, "M-state search", Some(10.0)),
    (4, "lower circle", Some(60.0)),
    (5, "(2,1) versus (0,2) inequality", Some(1.0)),
    (6, "zero-state locking", Some(10.0)),
    (7, "oracle equivalence", Some(1800.0)),
    (8, "axis law", None),
    (9, "property suite", Some(300.0)),
];

struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self {
            failures: vec![],
            notes: vec![],
        }
    }

    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let dev = (got - want).abs();
        if dev <= tol {
            self.notes.push(format!(
                "{what} = {got:.9} (target {want}, |Δ| = {dev:.1e})"
            ));
        } else {
            self.failures.push(format!(
                "{what} = {got:.9}, target {want} ± {tol:.1e} (|Δ| = {dev:.1e})"
            ));
        }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn error(&mut self, what: &str, e: impl std::fmt::Display) {
        self.failures.push(format!("{what}: {e}"));
    }

    fn finish(self) -> (bool, String) {
        if self.failures.is_empty() {
            (true, self.notes.join("; "))
        } else {
            (false, self.failures.join("; "))
        }
    }
}

/// Run one criterion by number.
pub fn run_criterion(id: u8, opts: &VerifyOptions) -> (CriterionReport, Option<GapStats>) {
    let (_, name, budget) = CRITERIA
        .iter()
        .copied()
        .find(|c| c.0 == id)
        .unwrap_or((id, "unknown", None));
    let s = opts.tolerance_scale;
    let start = Instant::now();
    let mut c = Checks::new();
    let mut gaps = None;
    match id {
        1 => criterion_zero_polytope(&mut c, s),
        2 => criterion_n_search(&mut c, s),
        3 => criterion_m_search(&mut c, s),
        4 => criterion_lower_circle(&mut c, s),
        5 => criterion_inequality(&mut c, s),
        6 => criterion_locking(&mut c, s),
        7 => gaps = criterion_oracle(&mut c, s, opts),
        8 => criterion_axis(&mut c, s, opts.seed),
        9 => criterion_properties(&mut c, s, opts.seed),
        _ => c.check(format!("no criterion {id}"), false),
    }
    let elapsed = start.elapsed();
    if let (Some(b), true) = (budget, opts.check_runtime) {
        c.check(
            format!("runtime {:.2} s within {b} s", elapsed.as_secs_f64()),
            elapsed <= Duration::from_secs_f64(b),
        );
    }
    let (passed, detail) = c.finish();
    (
        CriterionReport {
            id,
            name: name.to_string(),
            passed,
            detail,
            runtime_s: elapsed.as_secs_f64(),
            budget_s: budget,
        },
        gaps,
    )
}

/// Run all nine criteria, warming up the shared model first so that its
/// construction is not billed to whichever criterion happens to run first.
pub fn run_all(opts: &VerifyOptions) -> VerifyReport {
    let _ = RoofModel::get();
    let mut criteria = vec![];
    let mut oracle_gaps = None;
    for (id, _, _) in CRITERIA {
        let (r, g) = run_criterion(id, opts);
        if g.is_some() {
            oracle_gaps = g;
        }
        criteria.push(r);
    }
    VerifyReport {
        options: opts.clone(),
        criteria,
        oracle_gaps,
    }
}

fn criterion_zero_polytope(c: &mut Checks, s: f64) {
    let zp = match ZeroPolytope::ghz_w() {
        Ok(z) => z,
        Err(e) => return c.error("zero-polytope", e),
    };
    let closed = 4.0 * 2f64.cbrt() / (3.0 + 4.0 * 2f64.cbrt());
    let upper: Vec<&BlochPoint> = zp.vertices.iter().filter(|v| v.p > 0.5).collect();
    c.check(
        format!("{} nontrivial roots", upper.len()),
        upper.len() == 3,
    );
    for v in &upper {
        c.close("vertex p", v.p, closed, 1e-9 * s);
    }
    let mut phases: Vec<f64> = upper.iter().map(|v| v.phi.rem_euclid(2.0 * PI)).collect();
    phases.sort_by(f64::total_cmp);
    for (got, want) in phases.iter().zip([PI / 3.0, PI, 5.0 * PI / 3.0]) {
        c.close("root phase", *got, want, 1e-9 * s);
    }
    let worst = zp
        .vertices
        .iter()
        .map(|v| v.sqrt_tangle().powi(2))
        .fold(0.0, f64::max);
    c.check(
        format!("largest vertex tangle {worst:.1e} < {:.0e}", 1e-10 * s),
        worst < 1e-10 * s,
    );
}

fn criterion_n_search(c: &mut Checks, s: f64) {
    match find_n_states() {
        Ok(r) => {
            c.close("p_c", r.tangent.p_c, reference::N_P_C, 5e-5 * s);
            c.close("partner", r.partner, reference::N_PARTNER, 5e-5 * s);
            c.close("theta", r.theta, reference::N_THETA, 1e-3 * s);
        }
        Err(e) => c.error("N search", e),
    }
}

fn criterion_m_search(c: &mut Checks, s: f64) {
    match find_m_states() {
        Ok(r) => {
            c.close("p_c", r.tangent.p_c, reference::M_P_C, 5e-5 * s);
            c.close("partner", r.partner, reference::M_PARTNER, 5e-5 * s);
            c.close("theta", r.theta, reference::M_THETA, 1e-3 * s);
        }
        Err(e) => c.error("M search", e),
    }
}

/// Circle through the optimal (2,1) states on the chord `N₃ → M₃` and its mirror image.
fn lower_circle(grid: usize) -> Result<crate::decomp::CircleFit> {
    let n = find_n_states()?;
    let m = find_m_states()?;
    let trace = optimize_21_line(n.states[2], m.states[2], grid)?;
    let mut pts: Vec<Vector3<f64>> = trace.states.iter().map(|b| b.cartesian()).collect();
    let mirrored: Vec<Vector3<f64>> = pts
        .iter()
        .rev()
        .skip(1)
        .map(|p| Vector3::new(p.x, -p.y, p.z))
        .collect();
    pts.extend(mirrored);
    fit_circle(&pts)
}

fn criterion_lower_circle(c: &mut Checks, s: f64) {
    let (a, b) = match (lower_circle(65), lower_circle(129)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return c.error("lower circle", e),
    };
    let r = Vector3::from(reference::LOWER_CIRCLE_NORMAL);
    for (label, fit) in [("grid 65", a), ("grid 129", b)] {
        c.close(
            &format!("{label} distance"),
            fit.distance,
            reference::LOWER_CIRCLE_DISTANCE,
            5e-4 * s,
        );
        let sign = if fit.normal.dot(&r) < 0.0 { -1.0 } else { 1.0 };
        for i in 0..3 {
            c.close(
                &format!("{label} normal[{i}]"),
                sign * fit.normal[i],
                r[i],
                5e-3 * s,
            );
        }
    }
    c.close(
        "distance change on doubling the grid",
        (a.distance - b.distance).abs(),
        0.0,
        5e-4 * s,
    );
    let turn = (a.normal - b.normal)
        .norm()
        .min((a.normal + b.normal).norm());
    c.close("normal change on doubling the grid", turn, 0.0, 5e-3 * s);
}

fn criterion_inequality(c: &mut Checks, s: f64) {
    let z1 = BlochPoint {
        p: p0(),
        phi: PI / 3.0,
    }
    .cartesian();
    let z2 = BlochPoint {
        p: p0(),
        phi: -PI / 3.0,
    }
    .cartesian();
    let e12 = (z1 + z2) / 2.0;
    let (tau0, tau_dd) = match (
        sqrt_tau3_analytic(p0(), 0.0),
        sqrt_tau3_phi_curvature(p0(), 0.0),
    ) {
        (Ok(t), Ok(k)) => (t.value(), k),
        (Err(e), _) | (_, Err(e)) => return c.error("tangle", e),
    };
    c.close("|τ''|/τ", tau_dd.abs() / tau0, 9.0 / 8.0, 1e-4 * s);
    let chord = match inclined_chord(e12.norm(), e12.x.atan2(e12.z), PI / 2.0) {
        Ok(ch) => ch,
        Err(e) => return c.error("chord", e),
    };
    c.close("ρ/d₁", chord.outer_radius / chord.d_plus, 2.0, 1e-9 * s);
    match decide_02_vs_21(tau0, tau_dd, chord.outer_radius, chord.d_plus) {
        Ok(v) => c.check(format!("verdict {v:?}"), v == Verdict::TwoOne),
        Err(e) => c.error("verdict", e),
    }
}

fn criterion_locking(c: &mut Checks, s: f64) {
    let model = match RoofModel::get() {
        Ok(m) => m,
        Err(e) => return c.error("model", e),
    };
    let eps = default_locking_eps();
    for (region, tetra, _) in &model.tetrahedra {
        let centroid = tetra.vertices.iter().sum::<Vector3<f64>>() / 4.0;
        let r = match InteriorPoint::new(centroid).and_then(|p| classify(&p)) {
            Ok(r) => r,
            Err(e) => return c.error("classify", e),
        };
        for (k, (_, b)) in r.decomposition.members.iter().enumerate() {
            if b.sqrt_tangle() > 1e-5 {
                continue;
            }
            match locking_perturbation(&r.decomposition, k, &eps) {
                Ok(rep) => {
                    c.close(
                        &format!("{region} vertex {k} exponent"),
                        rep.fitted_exponent,
                        0.5,
                        0.05 * s,
                    );
                    let grows = rep.t_values.iter().all(|&t| t > rep.t0);
                    c.check(
                        format!(
                            "{region} vertex {k}: T(ε) > T(0) at all {} ε",
                            rep.t_values.len()
                        ),
                        grows && rep.skipped.is_empty(),
                    );
                }
                Err(e) => c.error("locking", e),
            }
        }
    }
}

/// Sample points `θᵢ = (i + ½)π/n_θ`, `φⱼ = 2πj/n_φ`, `r_k = (k + ½)/n_r`.
pub fn oracle_sample(grid: (usize, usize, usize)) -> Vec<InteriorPoint> {
    let (nt, np, nr) = grid;
    let mut out = Vec::with_capacity(nt * np * nr);
    for i in 0..nt {
        let theta = (i as f64 + 0.5) * PI / nt as f64;
        let p = (1.0 + theta.cos()) / 2.0;
        for j in 0..np {
            let phi = 2.0 * PI * j as f64 / np as f64;
            for k in 0..nr {
                let r = (k as f64 + 0.5) / nr as f64;
                out.push(InteriorPoint::from_spherical(p, phi, r).expect("sample inside the ball"));
            }
        }
    }
    out
}

fn criterion_oracle(c: &mut Checks, s: f64, opts: &VerifyOptions) -> Option<GapStats> {
    let pts = oracle_sample(opts.oracle_grid);
    let mut gaps = Vec::with_capacity(pts.len());
    for (k, pt) in pts.iter().enumerate() {
        let cl = match classify(pt) {
            Ok(r) => r.value,
            Err(e) => {
                c.error("classify", e);
                return None;
            }
        };
        match brute_force_roof(
            pt,
            4,
            opts.oracle_restarts,
            splitmix64(opts.seed ^ k as u64),
        ) {
            Ok(o) => gaps.push(o.value - cl),
            Err(e) => {
                c.error("oracle", e);
                return None;
            }
        }
    }
    let mut abs: Vec<f64> = gaps.iter().map(|g| g.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let n = gaps.len();
    let within = abs.iter().filter(|&&g| g <= 1e-3 * s).count() as f64 / n as f64;
    let stats = GapStats {
        points: n,
        max_abs_gap: abs[n - 1],
        mean_abs_gap: abs.iter().sum::<f64>() / n as f64,
        p99_abs_gap: abs[((0.99 * n as f64).ceil() as usize).clamp(1, n) - 1],
        min_signed_gap: gaps.iter().copied().fold(f64::INFINITY, f64::min),
        within_tolerance: within,
    };
    c.check(
        format!(
            "{:.2}% of {n} points within {:.0e} (need 99%)",
            100.0 * within,
            1e-3 * s
        ),
        within >= 0.99,
    );
    c.check(
        format!(
            "classifier ≤ oracle + {:.0e} everywhere (min oracle − classifier {:.2e})",
            1e-6 * s,
            stats.min_signed_gap
        ),
        stats.min_signed_gap >= -1e-6 * s,
    );
    c.notes.push(format!(
        "max |gap| {:.2e}, mean {:.2e}, p99 {:.2e}",
        stats.max_abs_gap, stats.mean_abs_gap, stats.p99_abs_gap
    ));
    Some(stats)
}

fn axis_law(p: f64) -> f64 {
    ((p - p0()) / (1.0 - p0())).max(0.0)
}

fn criterion_axis(c: &mut Checks, s: f64, seed: u64) {
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let p = k as f64 / 199.0;
        match InteriorPoint::on_axis(p).and_then(|x| classify(&x)) {
            Ok(r) => worst = worst.max((r.value - axis_law(p)).abs()),
            Err(e) => return c.error("classify", e),
        }
    }
    c.close(
        "largest deviation from the linear law on 200 axis points",
        worst,
        0.0,
        1e-6 * s,
    );
    let mut oracle_worst: f64 = 0.0;
    for k in 0..9 {
        let p = 0.1 * (k + 1) as f64;
        match InteriorPoint::on_axis(p)
            .and_then(|x| brute_force_roof(&x, 4, 32, seed.wrapping_add(k)))
        {
            Ok(o) => oracle_worst = oracle_worst.max((o.value - axis_law(p)).abs()),
            Err(e) => return c.error("oracle", e),
        }
    }
    c.close(
        "oracle deviation on 9 axis points",
        oracle_worst,
        0.0,
        1e-3 * s,
    );
}

fn random_ball_point(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if v.norm() <= 1.0 {
            return v;
        }
    }
}

/// Every invariant of the classifier, the decompositions and the oracle,
/// on seeded random samples.
fn criterion_properties(c: &mut Checks, s: f64, seed: u64) {
    let model = match RoofModel::get() {
        Ok(m) => m,
        Err(e) => return c.error("model", e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x9));
    let roof = |v: &Vector3<f64>| InteriorPoint::new(*v).and_then(|p| classify(&p));

    // Decomposition invariants on 10⁴ random states.
    let mut bad = 0usize;
    let mut sym_bad = 0usize;
    for k in 0..10_000 {
        let v = random_ball_point(&mut rng);
        let Ok(r) = roof(&v) else {
            bad += 1;
            continue;
        };
        let d = &r.decomposition;
        let ok = (r.value - avg_tangle(d)).abs() <= 1e-12 * s
            && (d.barycenter() - v).amax() <= 1e-10 * s
            && (d.weight_sum() - 1.0).abs() <= 1e-12 * s
            && d.members.len() <= 4
            && d.tag.0 + d.tag.1 == d.members.len()
            && (r.value == 0.0) == (r.region == Region::ZeroPolytope)
            && r.value >= 0.0;
        if !ok {
            bad += 1;
        }
        if k < 1000 {
            for rot in [2.0 * PI / 3.0, -2.0 * PI / 3.0] {
                for conj in [false, true] {
                    let g = Symmetry {
                        rotation: rot,
                        conjugate: conj,
                    }
                    .apply(&v);
                    let same = roof(&g)
                        .map(|q| (q.value - r.value).abs() <= 1e-9 * s)
                        .unwrap_or(false);
                    if !same {
                        sym_bad += 1;
                    }
                }
            }
            let mirrored = Vector3::new(v.x, -v.y, v.z);
            if !roof(&mirrored)
                .map(|q| (q.value - r.value).abs() <= 1e-9 * s)
                .unwrap_or(false)
            {
                sym_bad += 1;
            }
        }
    }
    c.check(
        format!("{bad} of 10000 random states violate a decomposition invariant"),
        bad == 0,
    );
    c.check(
        format!("{sym_bad} symmetry mismatches on 1000 states"),
        sym_bad == 0,
    );

    // Convexity.
    let mut convex_bad = 0;
    for _ in 0..1000 {
        let (a, b) = (random_ball_point(&mut rng), random_ball_point(&mut rng));
        let l: f64 = rng.random();
        let (Ok(ra), Ok(rb), Ok(rm)) = (roof(&a), roof(&b), roof(&(a * l + b * (1.0 - l)))) else {
            convex_bad += 1;
            continue;
        };
        if rm.value > l * ra.value + (1.0 - l) * rb.value + 1e-9 * s {
            convex_bad += 1;
        }
    }
    c.check(
        format!("{convex_bad} convexity violations in 1000 pairs"),
        convex_bad == 0,
    );

    // Continuity along random rays through the ball.
    let mut worst_jump: f64 = 0.0;
    for _ in 0..3 {
        let a = random_ball_point(&mut rng).normalize();
        let b = random_ball_point(&mut rng).normalize();
        let steps = ((a - b).norm() / 1e-4).ceil() as usize;
        let mut prev: Option<f64> = None;
        for k in 0..=steps {
            let t = k as f64 / steps as f64;
            let x = (a * (1.0 - t) + b * t) * (1.0 - 1e-12);
            if let Ok(r) = roof(&x) {
                if let Some(p) = prev {
                    worst_jump = worst_jump.max((r.value - p).abs());
                }
                prev = Some(r.value);
            }
        }
    }
    c.check(
        format!("largest jump {worst_jump:.1e} along rays at step 1e-4"),
        worst_jump < 1e-3 * s,
    );

    // Linearity inside the kernel.
    let mut lin_worst: f64 = 0.0;
    for (_, tetra, states) in &model.tetrahedra {
        for _ in 0..250 {
            let w: Vec<f64> = (0..4).map(|_| -rng.random::<f64>().ln()).collect();
            let total: f64 = w.iter().sum();
            let x: Vector3<f64> = tetra
                .vertices
                .iter()
                .zip(&w)
                .map(|(v, wi)| v * (wi / total))
                .sum();
            let linear: f64 = states
                .iter()
                .zip(&w)
                .map(|(b, wi)| {
                    wi / total * crate::decomp::avg_tangle(&crate::decomp::Decomposition::pure(*b))
                })
                .sum();
            if let Ok(r) = roof(&x) {
                lin_worst = lin_worst.max((r.value - linear).abs());
            }
        }
    }
    c.check(
        format!("roof vs barycentric interpolation inside the tetrahedra: {lin_worst:.1e}"),
        lin_worst <= 1e-10 * s,
    );

    // Coplanarity: N1 lies in the plane GHZ Z1 Z2, N3 in the plane Z1 N1 W.
    let [w, z1, z2, _] = model.zero_states.map(|b| b.cartesian());
    let [n1, _, n3] = model.n_search.states.map(|b| b.cartesian());
    let residual = |a: Vector3<f64>, b: Vector3<f64>, cc: Vector3<f64>, d: Vector3<f64>| {
        plane_through_points(&a, &b, &cc)
            .map(|(nrm, _)| nrm.dot(&(d - a)).abs())
            .unwrap_or(f64::INFINITY)
    };
    let r1 = residual(Vector3::z(), z1, z2, n1);
    let r2 = residual(z1, n1, w, n3);
    c.check(
        format!("coplanarity residuals {r1:.1e} (GHZ Z1 Z2 N1), {r2:.1e} (Z1 N1 W N3)"),
        r1.max(r2) < 1e-6 * s,
    );

    // (2,1) beats (1,1) on the chord N3 → M3.
    match optimize_21_line(model.n_search.states[2], model.m_search.states[2], 33) {
        Ok(t) => {
            let n = t.lambdas.len();
            let never_worse = t
                .values_21
                .iter()
                .zip(&t.values_11)
                .all(|(a, b)| *a <= b + 1e-12 * s);
            let strict = (1..n - 1).all(|k| t.values_21[k] < t.values_11[k]);
            let end_gap =
                (t.values_11[0] - t.values_21[0]).max(t.values_11[n - 1] - t.values_21[n - 1]);
            let mid_gap = t.values_11[n / 2] - t.values_21[n / 2];
            c.check(
                format!("(2,1) ≤ (1,1) on the chord, strict inside, end gap {end_gap:.1e} vs middle {mid_gap:.1e}"),
                never_worse && strict && end_gap < 1e-3 * mid_gap.max(1e-300) + 1e-9 * s,
            );
        }
        Err(e) => c.error("chord", e),
    }

    // Circle check: tangent of the point sequence is orthogonal to the radius, error ∝ Δφ².
    let ortho = |grid: usize| -> Result<(f64, f64)> {
        let fit = lower_circle(grid)?;
        let trace = optimize_21_line(model.n_search.states[2], model.m_search.states[2], grid)?;
        let pts: Vec<Vector3<f64>> = trace.states.iter().map(|b| b.cartesian()).collect();
        let mut worst: f64 = 0.0;
        let mut spacing: f64 = 0.0;
        for k in 1..pts.len() - 1 {
            let d = pts[k + 1] - pts[k - 1];
            let rad = pts[k] - fit.center;
            worst = worst.max((d.dot(&rad) / (d.norm() * rad.norm())).abs());
            spacing = spacing.max((pts[k + 1] - pts[k]).norm() / fit.radius);
        }
        Ok((worst, spacing))
    };
    match (ortho(17), ortho(33)) {
        (Ok((e1, h1)), Ok((e2, h2))) => {
            let order = (e1 / e2).ln() / (h1 / h2).ln();
            c.check(
                format!("circle tangent error {e1:.1e} → {e2:.1e}, order {order:.2}"),
                (1.5..=2.6).contains(&order),
            );
        }
        (Err(e), _) | (_, Err(e)) => c.error("circle check", e),
    }

    // Surface pattern symmetries and the plane of the lower circles.
    match surface_pattern(12, 24) {
        Ok(pat) => {
            let at = |i: usize, j: usize| &pat.rows[i * pat.n_phi + (j % pat.n_phi)];
            let mut mism = 0;
            for i in 0..pat.n_theta {
                for j in 0..pat.n_phi {
                    let r = at(i, j);
                    if at(i, j + pat.n_phi / 3).region != r.region && !r.region.is_kernel() {
                        mism += 1;
                    }
                    if at(i, pat.n_phi - j).region.is_kernel() != r.region.is_kernel() {
                        mism += 1;
                    }
                }
            }
            c.check(
                format!("{mism} surface tag mismatches under rotation and mirror"),
                mism == 0,
            );
        }
        Err(e) => c.error("surface pattern", e),
    }
    let plane_worst = model
        .lower_circles
        .iter()
        .zip(model.generating_curves.iter().skip(3))
        .map(|(fit, pts)| {
            pts.iter()
                .map(|p| (fit.normal.dot(p) - fit.distance).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    c.check(
        format!(
            "lower arcs lie in planes at distance {:.7} (residual {plane_worst:.1e})",
            model.lower_circles[0].distance
        ),
        plane_worst < 1e-6 * s,
    );

    // Oracle monotonicity in the number of states.
    let mut mono_bad = 0;
    for k in 0..4u64 {
        let v = random_ball_point(&mut rng) * 0.9;
        let Ok(p) = InteriorPoint::new(v) else {
            continue;
        };
        let vals: Vec<f64> = (2..=4)
            .filter_map(|n| brute_force_roof(&p, n, 8, seed ^ k).ok().map(|r| r.value))
            .collect();
        if vals.len() != 3 || vals.windows(2).any(|w| w[1] > w[0] + 1e-6 * s) {
            mono_bad += 1;
        }
    }
    c.check(
        format!("{mono_bad} of 4 points where more oracle states gave a larger minimum"),
        mono_bad == 0,
    );
}

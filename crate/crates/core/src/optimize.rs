//! Derivative-free minimizers: golden-section search on an interval and
//! Nelder–Mead on R^n.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimize a unimodal `f` on `[a, b]` to an interval width of `tol`.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Scan `n` equispaced points of `[a, b]` (endpoints included), then refine
/// the best bracket by golden section. Returns the better of the refined
/// point and the best scanned point.
pub fn scan_then_golden<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    n: usize,
    tol: f64,
) -> (f64, f64) {
    assert!(n >= 3);
    let h = (b - a) / (n - 1) as f64;
    let (mut best_i, mut best_v) = (0, f64::INFINITY);
    for i in 0..n {
        let v = f(a + h * i as f64);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = a + h * best_i.saturating_sub(1) as f64;
    let hi = a + h * (best_i + 1).min(n - 1) as f64;
    let (x, v) = golden_section(&mut f, lo, hi, tol);
    if v <= best_v {
        (x, v)
    } else {
        (a + h * best_i as f64, best_v)
    }
}

#[derive(Clone, Debug)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Convergence threshold on the simplex diameter.
    pub xtol: f64,
    /// Convergence threshold on the spread of function values.
    pub ftol: f64,
    pub initial_step: f64,
    /// Dimension-dependent coefficients (Gao & Han 2012) instead of the classic ones.
    pub adaptive: bool,
    /// Rebuild a shrunken simplex around the best point after convergence
    /// while evaluations remain.
    pub restart_on_convergence: bool,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_evals: 1000,
            xtol: 1e-10,
            ftol: 1e-14,
            initial_step: 0.5,
            adaptive: true,
            restart_on_convergence: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
}

impl NelderMead {
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, x0: &[f64]) -> Minimum {
        let n = x0.len();
        assert!(n > 0);
        let nf = n as f64;
        let (alpha, gamma, rho, sigma) = if self.adaptive {
            (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf)
        } else {
            (1.0, 2.0, 0.5, 0.5)
        };

        let mut evals = 0usize;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut best_x = x0.to_vec();
        let mut best_f = eval(x0, &mut evals);
        let mut step = self.initial_step;

        while evals < self.max_evals {
            let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
            simplex.push((best_x.clone(), best_f));
            for i in 0..n {
                let mut x = best_x.clone();
                x[i] += step;
                let v = eval(&x, &mut evals);
                simplex.push((x, v));
            }

            loop {
                simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
                let spread = simplex[n].1 - simplex[0].1;
                let diameter = simplex[1..]
                    .iter()
                    .map(|(x, _)| {
                        x.iter()
                            .zip(&simplex[0].0)
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max)
                    })
                    .fold(0.0, f64::max);
                if evals >= self.max_evals || diameter < self.xtol || spread.abs() < self.ftol {
                    break;
                }

                let mut centroid = vec![0.0; n];
                for (x, _) in &simplex[..n] {
                    for (c, xi) in centroid.iter_mut().zip(x) {
                        *c += xi / nf;
                    }
                }
                let along = |t: f64| -> Vec<f64> {
                    centroid
                        .iter()
                        .zip(&simplex[n].0)
                        .map(|(c, w)| c + t * (c - w))
                        .collect()
                };

                let xr = along(alpha);
                let fr = eval(&xr, &mut evals);
                if fr < simplex[0].1 {
                    let xe = along(alpha * gamma);
                    let fe = eval(&xe, &mut evals);
                    simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                } else if fr < simplex[n - 1].1 {
                    simplex[n] = (xr, fr);
                } else {
                    let (xc, fc) = if fr < simplex[n].1 {
                        let xc = along(alpha * rho);
                        let fc = eval(&xc, &mut evals);
                        (xc, fc)
                    } else {
                        let xc = along(-rho);
                        let fc = eval(&xc, &mut evals);
                        (xc, fc)
                    };
                    if fc < simplex[n].1.min(fr) {
                        simplex[n] = (xc, fc);
                    } else {
                        let x0 = simplex[0].0.clone();
                        for (x, v) in simplex[1..].iter_mut() {
                            for (xi, bi) in x.iter_mut().zip(&x0) {
                                *xi = bi + sigma * (*xi - bi);
                            }
                            *v = eval(x, &mut evals);
                        }
                    }
                }
            }

            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[0].1 <= best_f {
                best_f = simplex[0].1;
                best_x = simplex[0].0.clone();
            }
            step *= 0.1;
            if !self.restart_on_convergence || step < self.xtol {
                break;
            }
        }
        Minimum {
            x: best_x,
            fx: best_f,
            evals,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-10);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-7);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn scan_handles_endpoint_minimum() {
        let (x, v) = scan_then_golden(|x| x, 0.0, 1.0, 9, 1e-12);
        assert_abs_diff_eq!(x, 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-11);
    }

    #[test]
    fn scan_picks_global_basin() {
        let f = |x: f64| (8.0 * x).cos() + 0.1 * x;
        let (x, _) = scan_then_golden(f, 0.0, 3.0, 65, 1e-12);
        assert_abs_diff_eq!(x, 0.391_136, epsilon = 1e-5);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let nm = NelderMead {
            max_evals: 20_000,
            ..Default::default()
        };
        let r = nm.minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
        );
        assert_abs_diff_eq!(r.x[0], 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r.x[1], 1.0, epsilon = 1e-6);
        assert!(r.evals <= 20_000 + 3);
    }

    #[test]
    fn nelder_mead_high_dimensional_quadratic() {
        let nm = NelderMead {
            max_evals: 20_000,
            ..Default::default()
        };
        let r = nm.minimize(
            |x| {
                x.iter()
                    .enumerate()
                    .map(|(i, v)| (i + 1) as f64 * (v - 0.5).powi(2))
                    .sum()
            },
            &[0.0; 12],
        );
        assert!(r.fx < 1e-10, "{}", r.fx);
    }
}

//! Tangent-line convexification of one-parameter characteristic curves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Average tangle of a one-parameter decomposition family, sampled on a
/// strictly increasing grid and interpolated by a natural cubic spline.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacteristicCurve {
    pub samples: Vec<(f64, f64)>,
    #[serde(skip)]
    second: Vec<f64>,
}

impl CharacteristicCurve {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidInput(
                "a curve needs at least 3 samples".into(),
            ));
        }
        if samples
            .iter()
            .any(|(p, v)| !(p.is_finite() && v.is_finite()))
        {
            return Err(Error::InvalidInput("non-finite curve sample".into()));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidInput(
                "curve abscissae must increase strictly".into(),
            ));
        }
        let second = natural_spline_second_derivatives(&samples);
        Ok(Self { samples, second })
    }

    pub fn from_fn(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = (hi - lo) / (n - 1) as f64;
        Self::new(
            (0..n)
                .map(|i| lo + h * i as f64)
                .map(|p| (p, f(p)))
                .collect(),
        )
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }

    fn segment(&self, p: f64) -> usize {
        let n = self.samples.len();
        match self.samples.binary_search_by(|(x, _)| x.total_cmp(&p)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    pub fn value(&self, p: f64) -> f64 {
        let i = self.segment(p);
        let (x0, y0) = self.samples[i];
        let (x1, y1) = self.samples[i + 1];
        let h = x1 - x0;
        let a = (x1 - p) / h;
        let b = (p - x0) / h;
        a * y0
            + b * y1
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                / 6.0
    }

    pub fn derivative(&self, p: f64) -> f64 {
        let i = self.segment(p);
        let (x0, y0) = self.samples[i];
        let (x1, y1) = self.samples[i + 1];
        let h = x1 - x0;
        let a = (x1 - p) / h;
        let b = (p - x0) / h;
        (y1 - y0) / h
            + (-(3.0 * a * a - 1.0) * self.second[i] + (3.0 * b * b - 1.0) * self.second[i + 1]) * h
                / 6.0
    }
}

fn natural_spline_second_derivatives(s: &[(f64, f64)]) -> Vec<f64> {
    let n = s.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations.
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = s[i].0 - s[i - 1].0;
        let h1 = s[i + 1].0 - s[i].0;
        let a = h0 / 6.0;
        let b = (h0 + h1) / 3.0;
        let c = h1 / 6.0;
        let d = (s[i + 1].1 - s[i].1) / h1 - (s[i].1 - s[i - 1].1) / h0;
        let denom = b - a * c_prime[i - 1];
        c_prime[i] = c / denom;
        d_prime[i] = (d - a * d_prime[i - 1]) / denom;
    }
    for i in (1..n - 1).rev() {
        m[i] = d_prime[i] - c_prime[i] * m[i + 1];
    }
    m
}

/// Tangent from the zero end of a curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexTangent {
    /// Abscissa of the curve end where the value vanishes.
    pub anchor: f64,
    /// Touching point of the tangent line.
    pub p_c: f64,
    /// Slope `value(p_c) / (p_c − anchor)` of the line.
    pub slope: f64,
}

impl ConvexTangent {
    /// Lower convex envelope: the line between anchor and `p_c`, the curve beyond.
    pub fn hull_value(&self, curve: &CharacteristicCurve, p: f64) -> f64 {
        let between = if self.p_c >= self.anchor {
            (self.anchor..=self.p_c).contains(&p)
        } else {
            (self.p_c..=self.anchor).contains(&p)
        };
        if between {
            self.slope * (p - self.anchor)
        } else {
            curve.value(p)
        }
    }
}

const SCAN_POINTS: usize = 4000;
const BISECT_TOL: f64 = 1e-9;

/// Tangent point of the line from the zero end of `curve` that supports it
/// from below (the curve's lower convex envelope near that end).
///
/// Solves `value′(p)·(p − anchor) = value(p)` on the spline.
pub fn convexify(curve: &CharacteristicCurve) -> Result<ConvexTangent> {
    let (lo, hi) = curve.domain();
    let scale = curve
        .samples
        .iter()
        .map(|(_, v)| v.abs())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ConvexificationNotNeeded);
    }
    let zero_tol = 1e-9 * scale;
    let (anchor, dir) = if curve.samples[0].1.abs() <= zero_tol {
        (lo, 1.0)
    } else if curve.samples[curve.samples.len() - 1].1.abs() <= zero_tol {
        (hi, -1.0)
    } else {
        return Err(Error::InvalidInput(
            "curve does not vanish at either end".into(),
        ));
    };
    let length = hi - lo;
    let at = |u: f64| anchor + dir * u;
    // Sign of d/du [value / u] in the distance u from the anchor.
    let k = |u: f64| dir * curve.derivative(at(u)) * u - curve.value(at(u));
    let flat = 1e-10 * scale;

    let du = length / SCAN_POINTS as f64;
    let mut best: Option<(f64, f64)> = None;
    let mut prev = k(du);
    for i in 2..=SCAN_POINTS {
        let u = du * i as f64;
        let cur = k(u);
        if prev < -flat && cur >= -flat {
            let (mut a, mut b) = (u - du, u);
            while b - a > BISECT_TOL {
                let m = 0.5 * (a + b);
                if k(m) < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            let uc = 0.5 * (a + b);
            let ratio = curve.value(at(uc)) / uc;
            if best.is_none_or(|(_, r)| ratio < r) {
                best = Some((uc, ratio));
            }
        }
        prev = cur;
    }
    let (uc, ratio) = best.ok_or(Error::ConvexificationNotNeeded)?;
    let p_c = at(uc);
    Ok(ConvexTangent {
        anchor,
        p_c,
        slope: dir * ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn spline_reproduces_cubic_interior() {
        let c = CharacteristicCurve::from_fn(0.0, 1.0, 201, |x| x.sin()).unwrap();
        assert_abs_diff_eq!(c.value(0.4321), 0.4321f64.sin(), epsilon = 1e-9);
        assert_abs_diff_eq!(c.derivative(0.5), 0.5f64.cos(), epsilon = 1e-6);
    }

    #[test]
    fn straight_line_needs_no_convexification() {
        let c = CharacteristicCurve::from_fn(0.0, 1.0, 50, |x| 0.7 * x).unwrap();
        assert_eq!(convexify(&c), Err(Error::ConvexificationNotNeeded));
        let c = CharacteristicCurve::from_fn(0.0, 1.0, 50, |x| x * x).unwrap();
        assert_eq!(convexify(&c), Err(Error::ConvexificationNotNeeded));
    }

    #[test]
    fn concave_then_convex_curve() {
        // f'(x)·x = f(x) reduces to 2x² = √x/2, so x = 4^(-2/3).
        let f = |x: f64| x.sqrt() + 2.0 * x * x - 2.0 * x;
        let c = CharacteristicCurve::from_fn(0.0, 1.0, 4001, f).unwrap();
        let t = convexify(&c).unwrap();
        assert_abs_diff_eq!(t.p_c, 4f64.powf(-2.0 / 3.0), epsilon = 1e-6);
        assert_eq!(t.anchor, 0.0);
        for &(x, v) in &c.samples {
            assert!(v >= t.slope * x - 1e-9);
        }
    }

    #[test]
    fn right_anchor_is_mirrored() {
        let f = |x: f64| x.sqrt() + 2.0 * x * x - 2.0 * x;
        let right =
            convexify(&CharacteristicCurve::from_fn(0.0, 1.0, 4001, |x| f(1.0 - x)).unwrap())
                .unwrap();
        let left = convexify(&CharacteristicCurve::from_fn(0.0, 1.0, 4001, f).unwrap()).unwrap();
        assert_eq!(right.anchor, 1.0);
        assert_abs_diff_eq!(right.p_c, 1.0 - left.p_c, epsilon = 1e-6);
        assert_abs_diff_eq!(right.slope, -left.slope, epsilon = 1e-6);
    }
}

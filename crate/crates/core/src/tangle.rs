//! Threetangle of three-qubit pure states.
//!
//! The threetangle is four times the modulus of Cayley's hyperdeterminant
//! of the amplitude tensor, so that the GHZ state has tangle one. The
//! entanglement measure used throughout the crate is its square root,
//! which is homogeneous of degree two in the amplitudes and hence linear
//! in the weights of a decomposition.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// States with a threetangle below this value count as zero-states.
///
/// The square root of the tangle vanishes like the square root of the
/// distance to a simple zero, so rounding in the amplitudes alone leaves
/// `sqrt_threetangle ~ 1e-8` at a computed zero. The threshold is set on
/// the tangle itself.
pub const ZERO_TANGLE_TOL: f64 = 1e-10;

/// Ratio between the threetangle and the modulus of the hyperdeterminant.
pub const TANGLE_NORMALIZATION: f64 = 4.0;

const NORM_TOL: f64 = 1e-12;

/// Mixing probability at which the GHZ/W superposition has zero tangle,
/// `4·2^{1/3} / (3 + 4·2^{1/3})`.
pub fn p0() -> f64 {
    let a = 4.0 * 2f64.cbrt();
    a / (3.0 + a)
}

/// Coefficient `2^{7/2} / 3^{3/2}` of the closed tangle formula.
fn analytic_coefficient() -> f64 {
    2f64.powf(3.5) / 3f64.powf(1.5)
}

/// Amplitudes `ψ_ijk` of a three-qubit pure state, stored at index `4i + 2j + k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Amplitudes3Q {
    psi: [Complex64; 8],
    normalized: bool,
}

impl Amplitudes3Q {
    pub fn new(psi: [Complex64; 8]) -> Self {
        let norm_sqr: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        Self {
            psi,
            normalized: (norm_sqr - 1.0).abs() <= NORM_TOL,
        }
    }

    pub fn from_real(psi: [f64; 8]) -> Self {
        Self::new(psi.map(|x| Complex64::new(x, 0.0)))
    }

    /// Computational basis state `|ijk⟩`.
    pub fn basis(i: usize, j: usize, k: usize) -> Self {
        assert!(i < 2 && j < 2 && k < 2, "qubit labels are 0 or 1");
        let mut psi = [Complex64::new(0.0, 0.0); 8];
        psi[4 * i + 2 * j + k] = Complex64::new(1.0, 0.0);
        Self::new(psi)
    }

    /// `(|000⟩ + |111⟩)/√2`.
    pub fn ghz() -> Self {
        let a = 1.0 / SQRT_2;
        Self::from_real([a, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, a])
    }

    /// `(|100⟩ + |010⟩ + |001⟩)/√3`.
    pub fn w() -> Self {
        let b = 1.0 / 3f64.sqrt();
        Self::from_real([0.0, b, b, 0.0, b, 0.0, 0.0, 0.0])
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.psi
    }

    pub fn norm_sqr(&self) -> f64 {
        self.psi.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidInput(
                "cannot normalize a zero or non-finite state".into(),
            ));
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self::new(self.psi.map(|c| c * alpha))
    }

    /// `self + z·other`, unnormalized.
    pub fn add_scaled(&self, z: Complex64, other: &Self) -> Self {
        let mut psi = self.psi;
        for (a, b) in psi.iter_mut().zip(other.psi.iter()) {
            *a += z * b;
        }
        Self::new(psi)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.psi
            .iter()
            .zip(other.psi.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Apply a 2×2 matrix `u` (row-major) to qubit `qubit` (0 is the leftmost label).
    pub fn apply_local(&self, qubit: usize, u: [[Complex64; 2]; 2]) -> Self {
        assert!(qubit < 3);
        let shift = 2 - qubit;
        let mut out = [Complex64::new(0.0, 0.0); 8];
        for (idx, slot) in out.iter_mut().enumerate() {
            let bit = (idx >> shift) & 1;
            let partner = idx ^ (1 << shift);
            let (i0, i1) = if bit == 0 {
                (idx, partner)
            } else {
                (partner, idx)
            };
            *slot = u[bit][0] * self.psi[i0] + u[bit][1] * self.psi[i1];
        }
        Self::new(out)
    }

    /// Relabel qubits: qubit `q` of the result is qubit `perm[q]` of `self`.
    pub fn permute(&self, perm: [usize; 3]) -> Self {
        let mut sorted = perm;
        sorted.sort_unstable();
        assert_eq!(sorted, [0, 1, 2], "not a permutation");
        let mut out = [Complex64::new(0.0, 0.0); 8];
        for (idx, slot) in out.iter_mut().enumerate() {
            let new_bits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
            let mut old_bits = [0usize; 3];
            for q in 0..3 {
                old_bits[perm[q]] = new_bits[q];
            }
            *slot = self.psi[4 * old_bits[0] + 2 * old_bits[1] + old_bits[2]];
        }
        Self::new(out)
    }

    fn check_finite(&self) -> Result<()> {
        if self
            .psi
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
        {
            Ok(())
        } else {
            Err(Error::InvalidInput("non-finite amplitude".into()))
        }
    }
}

impl Index<(usize, usize, usize)> for Amplitudes3Q {
    type Output = Complex64;

    fn index(&self, (i, j, k): (usize, usize, usize)) -> &Complex64 {
        &self.psi[4 * i + 2 * j + k]
    }
}

/// Nonnegative tangle value.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct TangleValue(f64);

impl TangleValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for TangleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Cayley hyperdeterminant `d1 - 2 d2 + 4 d3` of the amplitude tensor.
pub fn hyperdeterminant(a: &Amplitudes3Q) -> Result<Complex64> {
    a.check_finite()?;
    Ok(hyperdeterminant_unchecked(a.amplitudes()))
}

/// Hyperdeterminant of raw amplitudes (no finiteness check).
#[inline]
pub(crate) fn hyperdeterminant_unchecked(psi: &[Complex64; 8]) -> Complex64 {
    let [a000, a001, a010, a011, a100, a101, a110, a111] = *psi;
    let d1 = a000 * a000 * a111 * a111
        + a001 * a001 * a110 * a110
        + a010 * a010 * a101 * a101
        + a100 * a100 * a011 * a011;
    let g = a000 * a111;
    let h = a011 * a100;
    let k = a101 * a010;
    let l = a110 * a001;
    let d2 = g * h + g * k + g * l + h * k + h * l + k * l;
    let d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;
    d1 - 2.0 * d2 + 4.0 * d3
}

/// Threetangle `4·|hyperdeterminant|` of a normalized state.
pub fn threetangle(a: &Amplitudes3Q) -> Result<TangleValue> {
    if !a.is_normalized() {
        return Err(Error::InvalidInput(format!(
            "state not normalized (norm² = {})",
            a.norm_sqr()
        )));
    }
    let det = hyperdeterminant(a)?;
    Ok(TangleValue(TANGLE_NORMALIZATION * det.norm()))
}

pub fn sqrt_threetangle(a: &Amplitudes3Q) -> Result<TangleValue> {
    threetangle(a).map(|t| TangleValue(t.0.sqrt()))
}

/// `√p·|GHZ⟩ + e^{iφ}·√(1−p)·|W⟩`.
pub fn superpose(p: f64, phi: f64) -> Result<Amplitudes3Q> {
    check_probability("p", p)?;
    if !phi.is_finite() {
        return Err(Error::InvalidInput("non-finite phase".into()));
    }
    let g = Complex64::new(p.sqrt(), 0.0);
    let w = Complex64::from_polar((1.0 - p).sqrt(), phi);
    Ok(Amplitudes3Q::ghz()
        .scale(g)
        .add_scaled(w, &Amplitudes3Q::w()))
}

/// Closed form `|p² + 2^{7/2}/3^{3/2}·√(p(1−p)³)·e^{3iφ}|^{1/2}` of the
/// square-root tangle on the GHZ/W superposition family.
pub fn sqrt_tau3_analytic(p: f64, phi: f64) -> Result<TangleValue> {
    check_probability("p", p)?;
    if !phi.is_finite() {
        return Err(Error::InvalidInput("non-finite phase".into()));
    }
    Ok(TangleValue(sqrt_tau3_unchecked(p, phi)))
}

#[inline]
pub(crate) fn sqrt_tau3_unchecked(p: f64, phi: f64) -> f64 {
    let q = 1.0 - p;
    let m = analytic_coefficient() * (p * q * q * q).sqrt();
    let (s, c) = (3.0 * phi).sin_cos();
    let re = p * p + m * c;
    let im = m * s;
    re.hypot(im).sqrt()
}

/// Second φ-derivative of the closed formula by Richardson-extrapolated
/// central differences.
pub fn sqrt_tau3_phi_curvature(p: f64, phi: f64) -> Result<f64> {
    check_probability("p", p)?;
    let h = 1e-3;
    let f = |x: f64| sqrt_tau3_unchecked(p, x);
    let d2 = |h: f64| (f(phi + h) - 2.0 * f(phi) + f(phi - h)) / (h * h);
    Ok((4.0 * d2(h / 2.0) - d2(h)) / 3.0)
}

/// The three nontrivial zero azimuths of the GHZ/W family.
pub fn zero_azimuths() -> [f64; 3] {
    [PI / 3.0, PI, 5.0 * PI / 3.0]
}

//! Exact convex roof of the square-root threetangle `√τ₃` for rank-two
//! mixtures of the three-qubit GHZ and W states.
//!
//! Every such mixture is a point of the Bloch ball spanned by `|GHZ⟩`
//! (north pole) and `|W⟩` (south pole). The roof is zero on a tetrahedron
//! of four zero-tangle states, linear on four more tetrahedra, and given by
//! (2,1) and (1,1) decompositions everywhere else. [`classify`] returns the
//! value together with an optimal decomposition; [`oracle`] recomputes it by
//! brute force.
//!
//! ```
//! use ghzw_roof::{classify, InteriorPoint, Region};
//!
//! let rho = InteriorPoint::on_axis(0.8)?;
//! let r = classify(&rho)?;
//! let p0 = ghzw_roof::tangle::p0();
//! assert!((r.value - (0.8 - p0) / (1.0 - p0)).abs() < 1e-12);
//! assert_eq!(r.region, Region::TetraGhz);
//! # Ok::<(), ghzw_roof::Error>(())
//! ```

pub mod bloch;
pub mod decomp;
pub mod error;
pub mod optimize;
pub mod oracle;
pub mod polytope;
pub mod report;
pub mod roof;
pub mod tangle;
pub mod verify;

pub use bloch::{BlochPoint, InteriorPoint};
pub use decomp::Decomposition;
pub use error::{Error, Result};
pub use roof::{classify, roof_value, Region, RoofResult};

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/tangle.md")]
    mod tangle {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/zero-polytope.md")]
    mod zero_polytope {}
    #[doc = include_str!("../../../book/src/decompositions.md")]
    mod decompositions {}
    #[doc = include_str!("../../../book/src/classifier.md")]
    mod classifier {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

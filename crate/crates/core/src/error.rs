use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{name} = {value} outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("chord does not cross the z-axis (vanishing denominator)")]
    NoCrossing,

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("points are collinear; no unique plane")]
    DegeneratePlane,

    #[error("basis states are linearly dependent")]
    DependentBasis,

    #[error("tangle polynomial vanishes identically")]
    DegeneratePolynomial,

    #[error("zero-polytope is degenerate: {0}")]
    DegeneratePolytope(String),

    #[error("point lies inside an opaque polytope")]
    InsideOpaque,

    #[error("characteristic curve is already convex; no tangent point")]
    ConvexificationNotNeeded,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: p,
            domain: "[0, 1]",
        })
    }
}

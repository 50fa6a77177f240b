use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Gradient or one-sided value requested exactly on a jump curve.
    #[error("point ({x}, {y}) lies on the jump set")]
    OnJumpSet { x: f64, y: f64 },

    /// Gradient requested at the crack tip, where it is unbounded.
    #[error("point ({x}, {y}) is a singular point of the field")]
    AtSingularPoint { x: f64, y: f64 },

    /// A jump curve touches the probe circle tangentially (or ends on it),
    /// so the circle quantities are not defined at this radius.
    #[error("jump set meets the circle non-transversally at radius {radius}")]
    TangentialContact { radius: f64 },

    /// Panel-doubling refinements failed to settle within tolerance.
    #[error("quadrature did not converge: last error {last_error:.3e} > tol {tolerance:.3e}")]
    NoConvergence { last_error: f64, tolerance: f64 },

    /// Full-circle Fourier trace requested while the jump set crosses the circle.
    #[error("jump set crosses the circle; full-disk trace undefined")]
    JumpOnCircle,

    /// Sector trace requested over an arc with a jump crossing strictly inside.
    #[error("jump crossing at angle {angle} lies strictly inside the requested arc")]
    JumpInsideArc { angle: f64 },

    /// Operation requires an exact number of transversal crossings.
    #[error("expected {expected} transversal crossings, found {found}")]
    WrongCrossingCount { expected: usize, found: usize },

    /// Two-sector competitor hypothesis violated: longer arc exceeds the case split.
    #[error("longer enclosed arc {arc} exceeds the admissible {limit} radians")]
    ArcTooLong { arc: f64, limit: f64 },

    /// Grid certification could not close the gap at the requested resolution.
    #[error("certification inconclusive for {claim}: {detail}")]
    CertificationInconclusive { claim: String, detail: String },

    /// Malformed model description (JSON schema violation).
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

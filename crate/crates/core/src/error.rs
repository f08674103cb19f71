use thiserror::Error;

/// Errors raised by the lattice, complex, contraction and cochain layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// A structural assumption about the complex failed (for example two
    /// distinct cubes comparing equal in the star of a cell).
    #[error("integrity error: {0}")]
    Integrity(String),
    /// A computation needed distance data beyond the explored radius.
    #[error("radius exceeded: {0}")]
    RadiusExceeded(String),
    /// A minimal-set configuration that no trajectory rule covers.
    #[error("unhandled configuration: {0}")]
    Unhandled(String),
    /// A cochain was evaluated outside its tabulated support.
    #[error("support error: {0}")]
    Support(String),
    /// Overlap, gap or containment failure in chart geometry.
    #[error("geometry error: {0}")]
    Geometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Domain errors raised by the kernel.
///
/// Every variant corresponds to a point or parameter falling outside the
/// domain of a map. [`Error::kind`] gives a stable machine-readable name.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),
    #[error("element is not invertible: |x|^2 = {norm_sq:e}")]
    NotInvertible { norm_sq: f64 },
    #[error("expected |a|^2 = ±1, got {norm_sq}")]
    NotUnitNorm { norm_sq: f64 },
    #[error("vector has non-positive norm square {norm_sq:e}")]
    NullVector { norm_sq: f64 },
    #[error("quotient {quotient} is outside the range of the angle function")]
    AngleUndefined { quotient: f64 },
    #[error("isometry has u2 = 0 and is not invertible")]
    DegenerateIsometry,
    #[error("point lies on the null plane x0 + x1 = 0")]
    OnNullPlane,
    #[error("adapted chart undefined for |x|^2 = {norm_sq:e}")]
    NullNorm { norm_sq: f64 },
    #[error("point is not on the sphere: |x|^2 = {norm_sq}")]
    NotOnSphere { norm_sq: f64 },
    #[error("x = {x} lies on a branch line x = ±1")]
    OnBranchLine { x: f64 },
    #[error("logarithm argument is non-positive for both components")]
    BranchDomain,
    #[error("operation requires a finite plane point")]
    IdealPoint,
    #[error("parameter t = {t} hits a pole of tan")]
    AtPole { t: f64 },
    #[error("the two points coincide")]
    SamePoint,
    #[error("abscissas {p} and {q} are conjugate (p*q = -1); no graph geodesic joins them")]
    ConjugateAbscissas { p: f64, q: f64 },
    #[error("integration produced a non-finite state at t = {t}")]
    NonFiniteState { t: f64 },
}

impl Error {
    /// Stable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFinite(_) => "NonFinite",
            Error::NotInvertible { .. } => "NotInvertible",
            Error::NotUnitNorm { .. } => "NotUnitNorm",
            Error::NullVector { .. } => "NullVector",
            Error::AngleUndefined { .. } => "AngleUndefined",
            Error::DegenerateIsometry => "DegenerateIsometry",
            Error::OnNullPlane => "OnNullPlane",
            Error::NullNorm { .. } => "NullNorm",
            Error::NotOnSphere { .. } => "NotOnSphere",
            Error::OnBranchLine { .. } => "OnBranchLine",
            Error::BranchDomain => "BranchDomain",
            Error::IdealPoint => "IdealPoint",
            Error::AtPole { .. } => "AtPole",
            Error::SamePoint => "SamePoint",
            Error::ConjugateAbscissas { .. } => "ConjugateAbscissas",
            Error::NonFiniteState { .. } => "NonFiniteState",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

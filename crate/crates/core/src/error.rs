use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("matrix exponential did not converge after {halvings} halvings")]
    NonConvergence { halvings: u32 },

    #[error("sigma = 0: phase classification is undefined on this path")]
    NonDiagonalizablePath,

    #[error("off-diagonal phase phi = {phi} is not supported (only phi = 0)")]
    NonzeroPhi { phi: f64 },

    #[error("angle {value} outside the admissible range")]
    AlphaOutOfRange { value: f64 },

    #[error("too close to the exceptional point (normalization {value:e})")]
    NearEP { value: f64 },

    #[error("no metric or charge operator exists at the exceptional point")]
    EPHasNoMetric,

    #[error("parameters are not in the PT-broken phase")]
    NotBrokenPhase,

    #[error("broken-phase closed forms need rho*sin(varphi) > 0, got {value}")]
    NegativeRapidity { value: f64 },

    #[error("p*q = 0: meson mixing is degenerate")]
    DegenerateMixing,

    #[error("meson Hamiltonian is not passively decomposable: {0}")]
    NotDecomposable(String),

    #[error("non-positive decay width: chi = {chi} must exceed gamma = {gamma}")]
    WidthNotPositive { chi: f64, gamma: f64 },
}

use serde::{Deserialize, Serialize};

/// Tolerance policy for the verification suites.
///
/// `fd_step` is the central-difference step. With `h = 1e-5` the truncation
/// term `h^2 |f'''| / 6` and the round-off term `eps |f| / h` are both around
/// `1e-10` for magnitudes up to 10, well below `fd_abs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Exact polynomial identities.
    pub exact_rel: f64,
    /// Compositions of algebraic operations.
    pub algebraic_rel: f64,
    /// Checks against central differences.
    pub fd_abs: f64,
    pub fd_step: f64,
    /// RK4 against closed-form trajectories, and curve fits.
    pub ode_abs: f64,
    /// Closed-form geodesics plugged into the geodesic equations.
    pub ode_residual_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exact_rel: 1e-12,
            algebraic_rel: 1e-10,
            fd_abs: 1e-6,
            fd_step: 1e-5,
            ode_abs: 1e-8,
            ode_residual_rel: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn is_valid(&self) -> bool {
        [
            self.exact_rel,
            self.algebraic_rel,
            self.fd_abs,
            self.fd_step,
            self.ode_abs,
            self.ode_residual_rel,
        ]
        .iter()
        .all(|v| v.is_finite() && *v > 0.0)
    }
}

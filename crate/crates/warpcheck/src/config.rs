/// Numeric settings shared across the toolkit.
///
/// Every tolerance and step used by residual checks lives here, so a run can
/// be tightened or relaxed in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericConfig {
    /// Tolerance for identities evaluated with analytic derivatives.
    pub closed_form_tol: f64,
    /// Tolerance for identities evaluated through finite differences.
    pub finite_diff_tol: f64,
    /// Central-difference step for scalar fields.
    pub fd_step: f64,
    /// Central-difference step for metric derivative arrays (independent of
    /// `fd_step`).
    pub metric_fd_step: f64,
    /// |det g| below this is treated as a singular metric instead of inverted.
    pub singular_det: f64,
    /// |sum eps_i alpha_i^2| below this classifies a direction as null.
    pub null_tol: f64,
    /// Fixed step for the null-direction profile integrator.
    pub ode_step: f64,
    /// Fields are only sampled where |phi| and f exceed this margin.
    pub positivity_margin: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            closed_form_tol: 1e-6,
            finite_diff_tol: 1e-4,
            fd_step: 1e-4,
            metric_fd_step: 1e-4,
            singular_det: 1e-10,
            null_tol: 1e-12,
            ode_step: 1e-3,
            positivity_margin: 0.2,
        }
    }
}

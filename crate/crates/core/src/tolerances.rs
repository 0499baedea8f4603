//! Acceptance thresholds shared by the scenario drivers, the CLI summaries
//! and the acceptance suite.

/// `|k² - E| ≤ K2_EPS_FACTOR · eps · |E|`.
pub const K2_EPS_FACTOR: f64 = 16.0;
/// Relative agreement of `|Re k| + |Im k|` with its closed form.
pub const RE_IM_NORM_REL: f64 = 1e-12;
/// `|Im G| ≤ GREEN_REAL_REL · (1 + |G|)`.
pub const GREEN_REAL_REL: f64 = 1e-8;
/// Relative agreement with `-(1/2π) K₀` on `|λ| = 1`.
pub const BESSEL_REL: f64 = 1e-6;
/// Minimum observed finite-difference order.
pub const ORDER_MIN: f64 = 1.9;
/// Smallest relative residual treated as quadrature noise; see
/// [`fd_noise_floor`].
pub const FD_NOISE_FLOOR_REL: f64 = 1e-9;
/// Agreement of the two routes to `B` for the point potential.
pub const POINT_B_REL: f64 = 1e-13;
/// Symmetry residuals relative to the local magnitude.
pub const SYMMETRY_SCALE: f64 = 1e-13;
/// `|Re ω| ≤ OMEGA_IMAG_SCALE · (1 + |ω|)`.
pub const OMEGA_IMAG_SCALE: f64 = 1e-10;
/// Path-integrated versus closed-form increments.
pub const OMEGA_PATH_ABS: f64 = 1e-6;
/// Creation: `|B̃ - B_point| ≤ CREATION_B_SCALE · scale`.
pub const CREATION_B_SCALE: f64 = 1e-10;
/// Annihilation: `|B̃| ≤ ANNIHILATION_B_SCALE · max|B|`.
pub const ANNIHILATION_B_SCALE: f64 = 1e-12;
/// Eigenfunction comparisons allow this many Green-function tolerances.
pub const GREEN_BUDGET_FACTOR: f64 = 2.0;
/// Fitted pole order and its allowed deviation.
pub const POLE_ORDER: f64 = 1.0;
pub const POLE_ORDER_TOL: f64 = 0.1;
/// Largest relative `∂̄` or gradient residual accepted for a seed.
pub const SEED_REL: f64 = 1e-4;

/// Relative residual below which finite differences of Green-function
/// values are dominated by quadrature error: `max(1e-9, 100 · rel_tol)`.
pub fn fd_noise_floor(green_rel_tol: f64) -> f64 {
    FD_NOISE_FLOOR_REL.max(100.0 * green_rel_tol)
}

/// An order sequence passes when each step reaches [`ORDER_MIN`] or its
/// finer residual is already at `floor`.
pub fn orders_pass(residuals_rel: &[f64], floor: f64) -> bool {
    residuals_rel.len() >= 2
        && residuals_rel
            .windows(2)
            .all(|w| (w[0] / w[1]).log2() >= ORDER_MIN || w[1] <= floor)
}

/// `GREEN_BUDGET_FACTOR · (abs_tol + rel_tol · reference)`.
pub fn green_budget(abs_tol: f64, rel_tol: f64, reference: f64) -> f64 {
    GREEN_BUDGET_FACTOR * (abs_tol + rel_tol * reference)
}

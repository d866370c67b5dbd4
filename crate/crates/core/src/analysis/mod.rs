//! Large-N limits, line shapes and extremum searches built on the spectral
//! terms.

pub mod angular;
pub mod fejer;
pub mod impact;
pub mod line;
pub mod polar;

pub use angular::{
    angular_delta, angular_distribution, angular_ee, angular_emu, angular_eq1, angular_eq2, angular_point,
    angular_term, eq1_profile, f2, AngleVariable, AngularDistribution,
};
pub use fejer::{delta_weight, fejer_derivative, fejer_kernel};
pub use impact::{eq2_at_n_max, h_eff_at, impact_shape, optimal_impact, OptimalImpact};
pub use line::{
    fwhm, fwhm_row, line_metrics, narrowing_percent, to_thz, Fwhm, FwhmRow, LineMetrics, LineOptions, LineShape,
};
pub use polar::{polar_max_numeric, polar_shift_analytic, PolarShift};

//! Physical constants and gyromagnetic ratios.
//!
//! All numeric values used by the physics code live here; nothing else in
//! the crate carries inline constants for h, k, or nuclear properties.

/// Planck constant, J s (CODATA 2018 exact).
pub const PLANCK_H: f64 = 6.62607015e-34;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = PLANCK_H / (2.0 * std::f64::consts::PI);

/// Boltzmann constant, J/K (CODATA 2018 exact).
pub const BOLTZMANN_K: f64 = 1.380649e-23;

/// Electronvolt, J (CODATA 2018 exact).
pub const ELECTRON_VOLT_J: f64 = 1.602176634e-19;

/// Gyromagnetic ratio of 1H, rad s^-1 T^-1.
pub const GAMMA_H1: f64 = 2.6752218744e8;

/// Gyromagnetic ratio of 13C, rad s^-1 T^-1.
pub const GAMMA_C13: f64 = 6.728284e7;

/// Gyromagnetic ratio of 15N, rad s^-1 T^-1 (negative: spin precesses in
/// the opposite sense to 1H).
pub const GAMMA_N15: f64 = -2.71261804e7;

/// Gyromagnetic ratio of 19F, rad s^-1 T^-1.
pub const GAMMA_F19: f64 = 2.518148e8;

/// Gyromagnetic ratio of 31P, rad s^-1 T^-1.
pub const GAMMA_P31: f64 = 1.08394e8;

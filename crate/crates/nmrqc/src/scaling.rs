//! Feasibility arithmetic: critical fields and temperatures, Zeeman
//! energies, population excesses, epsilon falloff with system size, qubit
//! count limits, and decoherence budgets.

use std::f64::consts::PI;

use crate::constants::{BOLTZMANN_K, ELECTRON_VOLT_J, PLANCK_H};
use crate::error::{Error, Result};
use crate::init::epsilon_report;

/// Temperature at which the Zeeman splitting matches the thermal energy:
/// T = hbar gamma B / k. Ground-state initialization needs T well below it.
pub fn critical_temperature(field_tesla: f64, gamma: f64) -> Result<f64> {
    if !(field_tesla > 0.0) {
        return Err(Error::Physics(format!("field must be > 0, got {field_tesla}")));
    }
    let hbar = PLANCK_H / (2.0 * PI);
    Ok(hbar * gamma.abs() * field_tesla / BOLTZMANN_K)
}

/// Field at which the Zeeman splitting matches the thermal energy:
/// B = k T / (hbar gamma).
pub fn critical_field(temperature_k: f64, gamma: f64) -> Result<f64> {
    if !(temperature_k > 0.0) {
        return Err(Error::Physics(format!(
            "temperature must be > 0, got {temperature_k}"
        )));
    }
    let hbar = PLANCK_H / (2.0 * PI);
    Ok(BOLTZMANN_K * temperature_k / (hbar * gamma.abs()))
}

/// Zeeman quantum h nu in electronvolts.
pub fn zeeman_energy_ev(nu_hz: f64) -> Result<f64> {
    if !(nu_hz > 0.0) {
        return Err(Error::Physics(format!("frequency must be > 0, got {nu_hz}")));
    }
    Ok(PLANCK_H * nu_hz / ELECTRON_VOLT_J)
}

/// Thermal energy k T in electronvolts, for comparison against the Zeeman
/// quantum.
pub fn thermal_energy_ev(temperature_k: f64) -> Result<f64> {
    if !(temperature_k > 0.0) {
        return Err(Error::Physics(format!(
            "temperature must be > 0, got {temperature_k}"
        )));
    }
    Ok(BOLTZMANN_K * temperature_k / ELECTRON_VOLT_J)
}

/// Single-spin ground-state population excess tanh(h nu / 2kT) and the
/// corresponding excess molecule count in a sample.
pub fn excess_population(nu_hz: f64, temperature_k: f64, molecules: f64) -> Result<(f64, f64)> {
    if !(nu_hz > 0.0) || !(temperature_k > 0.0) {
        return Err(Error::Physics(format!(
            "need nu > 0 and T > 0, got nu={nu_hz}, T={temperature_k}"
        )));
    }
    if !(molecules >= 0.0) {
        return Err(Error::Physics(format!("molecule count must be >= 0, got {molecules}")));
    }
    let fraction = (PLANCK_H * nu_hz / (2.0 * BOLTZMANN_K * temperature_k)).tanh();
    Ok((fraction, fraction * molecules))
}

/// Addressable-qubit ceiling: per-species capacity times the number of
/// usable species.
pub fn qubit_limit(per_species_capacity: usize, species: &[&str]) -> Result<usize> {
    if per_species_capacity < 1 {
        return Err(Error::Physics("per-species capacity must be >= 1".into()));
    }
    Ok(per_species_capacity * species.len())
}

/// Decoherence-limited gate budget.
#[derive(Debug, Clone, Copy)]
pub struct DecoherenceBudget {
    pub gate_count: u64,
    pub t2_s: f64,
    pub gate_time_s: f64,
}

/// Gates that fit in one coherence time: floor(T2 / gate time). T1-based
/// budgets overestimate badly and are deliberately not offered.
pub fn decoherence_budget(t2_s: f64, gate_time_s: f64) -> Result<DecoherenceBudget> {
    if !(t2_s > 0.0) || !(gate_time_s > 0.0) {
        return Err(Error::Physics(format!(
            "need T2 > 0 and gate time > 0, got {t2_s}, {gate_time_s}"
        )));
    }
    Ok(DecoherenceBudget {
        gate_count: (t2_s / gate_time_s).floor() as u64,
        t2_s,
        gate_time_s,
    })
}

/// One row of the epsilon falloff table.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonRow {
    pub n: usize,
    pub epsilon_exact: f64,
    pub epsilon_hightemp: f64,
    /// Signal-averaging repetitions needed to recover the n=1
    /// signal-to-noise, proportional to 1/epsilon^2 (model choice, not a
    /// measured quantity).
    pub required_repetitions: f64,
}

/// Epsilon versus spin count at fixed frequency and temperature, with the
/// 1/epsilon^2 repetition column normalized to 1 at n=1.
pub fn epsilon_scaling_table(
    n_max: usize,
    nu_hz: f64,
    temperature_k: f64,
) -> Result<Vec<EpsilonRow>> {
    if n_max < 1 {
        return Err(Error::Physics("table needs n_max >= 1".into()));
    }
    let first = epsilon_report(1, nu_hz, temperature_k)?;
    (1..=n_max)
        .map(|n| {
            let r = epsilon_report(n, nu_hz, temperature_k)?;
            Ok(EpsilonRow {
                n,
                epsilon_exact: r.epsilon_exact,
                epsilon_hightemp: r.epsilon_hightemp,
                required_repetitions: (first.epsilon_exact / r.epsilon_exact).powi(2),
            })
        })
        .collect()
}

/// The five usable spin-1/2 species.
pub const USABLE_SPECIES: [&str; 5] = ["H1", "C13", "N15", "F19", "P31"];

/// Bundled feasibility summary at the given operating point.
#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub field_tesla: f64,
    pub temperature_k: f64,
    pub nu_hz: f64,
    pub critical_temperature_k: f64,
    pub critical_field_tesla: f64,
    pub zeeman_energy_ev: f64,
    pub thermal_energy_ev: f64,
    pub excess_fraction: f64,
    pub epsilon_table: Vec<EpsilonRow>,
    pub qubit_limit: usize,
    pub gate_budget: DecoherenceBudget,
}

/// Assemble a full report for a proton-referenced operating point.
pub fn scaling_report(
    field_tesla: f64,
    temperature_k: f64,
    gamma: f64,
    n_max: usize,
    t2_s: f64,
    gate_time_s: f64,
) -> Result<ScalingReport> {
    let nu_hz = gamma.abs() * field_tesla / (2.0 * PI);
    let (excess_fraction, _) = excess_population(nu_hz, temperature_k, 0.0)?;
    Ok(ScalingReport {
        field_tesla,
        temperature_k,
        nu_hz,
        critical_temperature_k: critical_temperature(field_tesla, gamma)?,
        critical_field_tesla: critical_field(temperature_k, gamma)?,
        zeeman_energy_ev: zeeman_energy_ev(nu_hz)?,
        thermal_energy_ev: thermal_energy_ev(temperature_k)?,
        excess_fraction,
        epsilon_table: epsilon_scaling_table(n_max, nu_hz, temperature_k)?,
        qubit_limit: qubit_limit(6, &USABLE_SPECIES)?,
        gate_budget: decoherence_budget(t2_s, gate_time_s)?,
    })
}

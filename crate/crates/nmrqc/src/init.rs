//! Initialization: thermal states, pseudo-pure state preparation by
//! gradients (spatial averaging) and by phase cycling (temporal averaging),
//! and the polarization arithmetic around epsilon.

use std::f64::consts::PI;

use crate::constants::{BOLTZMANN_K, PLANCK_H};
use crate::engine::{CrushMode, DensityMatrix};
use crate::error::{Error, Result};
use crate::spin_model::{build_hamiltonian, build_zeeman_hamiltonian, SpinSystem};

/// Sample temperature and field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalConditions {
    pub temperature_k: f64,
    pub field_tesla: f64,
}

impl ThermalConditions {
    pub fn new(temperature_k: f64, field_tesla: f64) -> Result<ThermalConditions> {
        if !(temperature_k > 0.0) {
            return Err(Error::Physics(format!(
                "temperature must be > 0, got {temperature_k}"
            )));
        }
        if !(field_tesla >= 0.0) {
            return Err(Error::Physics(format!("field must be >= 0, got {field_tesla}")));
        }
        Ok(ThermalConditions {
            temperature_k,
            field_tesla,
        })
    }
}

/// Exact and high-temperature polarization for an n-spin homonuclear system.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonReport {
    pub n: usize,
    pub nu_hz: f64,
    pub temperature_k: f64,
    pub epsilon_exact: f64,
    pub epsilon_hightemp: f64,
}

/// Population difference between the lowest and highest Zeeman states of an
/// n-spin homonuclear system:
/// exact   eps = 2 sinh(n h nu / 2kT) / (2^n cosh^n(h nu / 2kT)),
/// high-T  eps ~ (n h nu / kT) / 2^n.
pub fn epsilon_report(n: usize, nu_hz: f64, temperature_k: f64) -> Result<EpsilonReport> {
    if n < 1 {
        return Err(Error::Physics("spin count must be >= 1".into()));
    }
    if !(nu_hz > 0.0) || !(temperature_k > 0.0) {
        return Err(Error::Physics(format!(
            "need nu > 0 and T > 0, got nu={nu_hz}, T={temperature_k}"
        )));
    }
    let x = PLANCK_H * nu_hz / (2.0 * BOLTZMANN_K * temperature_k);
    let pow = 2f64.powi(n as i32);
    let epsilon_exact = 2.0 * (n as f64 * x).sinh() / (pow * x.cosh().powi(n as i32));
    let epsilon_hightemp = (n as f64 * 2.0 * x) / pow;
    Ok(EpsilonReport {
        n,
        nu_hz,
        temperature_k,
        epsilon_exact,
        epsilon_hightemp,
    })
}

/// Answer statistics for a pseudo-pure computation.
#[derive(Debug, Clone, Copy)]
pub struct AnswerProbabilities {
    pub correct: f64,
    pub wrong: f64,
}

/// A computation starting from a pseudo-pure state with purity epsilon
/// returns the correct answer with probability eps + (1-eps)/N.
pub fn p_correct(epsilon: f64, dim: usize) -> Result<AnswerProbabilities> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Physics(format!("epsilon must be in [0,1], got {epsilon}")));
    }
    if dim < 2 {
        return Err(Error::Physics(format!("dimension must be >= 2, got {dim}")));
    }
    let n = dim as f64;
    Ok(AnswerProbabilities {
        correct: epsilon + (1.0 - epsilon) / n,
        wrong: (n - 1.0) * (1.0 - epsilon) / n,
    })
}

/// Boltzmann equilibrium state. Populations come from the Zeeman-only
/// Hamiltonian at full Larmor frequencies; coupling contributions (Hz
/// against MHz) are negligible and omitted.
pub fn thermal_state(system: &SpinSystem, conditions: &ThermalConditions) -> DensityMatrix {
    let mut sys = system.clone();
    sys.field_tesla = conditions.field_tesla;
    let hz = build_zeeman_hamiltonian(&sys);
    // Energies are in rad/s; Boltzmann weight exp(-hbar omega / kT).
    let hbar = PLANCK_H / (2.0 * PI);
    let beta = hbar / (BOLTZMANN_K * conditions.temperature_k);
    let weights: Vec<f64> = hz.diagonal().iter().map(|e| (-beta * e).exp()).collect();
    let z: f64 = weights.iter().sum();
    let pops: Vec<f64> = weights.iter().map(|w| w / z).collect();
    DensityMatrix::from_populations(&pops).expect("Boltzmann populations sum to 1")
}

/// Tolerances for pseudo-pure structure checks.
pub const STRUCTURE_TOL: f64 = 1e-8;

/// Verify rho = (1-eps) 1/N + eps |0><0| and return eps, or report the
/// worst deviation from that structure.
pub fn extract_epsilon(rho: &DensityMatrix) -> Result<f64> {
    let dim = rho.dim();
    let mut worst: f64 = 0.0;
    for j in 0..dim {
        for k in 0..dim {
            if j != k {
                worst = worst.max(rho.matrix()[(j, k)].norm());
            }
        }
    }
    if worst > STRUCTURE_TOL {
        return Err(Error::Structure {
            what: "off-diagonal elements present; state is not pseudo-pure".into(),
            worst_deviation: worst,
        });
    }
    let pops = rho.populations();
    let rest_mean: f64 = pops[1..].iter().sum::<f64>() / (dim - 1) as f64;
    let mut worst_pop: f64 = 0.0;
    for p in &pops[1..] {
        worst_pop = worst_pop.max((p - rest_mean).abs());
    }
    if worst_pop > STRUCTURE_TOL {
        return Err(Error::Structure {
            what: "non-ground populations are not uniform".into(),
            worst_deviation: worst_pop,
        });
    }
    Ok((dim as f64 * pops[0] - 1.0) / (dim as f64 - 1.0))
}

/// Directly construct (1-eps) 1/N + eps |0><0|. Abstracts polarization
/// enhancement schemes as a single knob.
pub fn polarization_override(system: &SpinSystem, epsilon: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Physics(format!("epsilon must be in [0,1], got {epsilon}")));
    }
    let mixed = DensityMatrix::maximally_mixed(system.n_spins());
    let ground = DensityMatrix::basis_state(system.n_spins(), 0);
    mixed.mix(&ground, epsilon)
}

/// Pseudo-pure preparation by magnetic field gradients, for two-spin
/// systems. The sequence transfers part of the Zeeman order into two-spin
/// order through the coupling and crushes the rest:
/// theta_x on the high-polarization spin, crush, (pi/4)_x on the other,
/// a refocused 1/(2 J_eff) delay, a (pi/4)_(-y) pulse, crush.
pub fn prepare_pseudopure_spatial(
    system: &SpinSystem,
    conditions: &ThermalConditions,
    mode: CrushMode,
) -> Result<DensityMatrix> {
    if system.n_spins() != 2 {
        return Err(Error::Physics(format!(
            "the built-in gradient sequence supports exactly 2 spins, got {}; \
             use temporal averaging for larger systems",
            system.n_spins()
        )));
    }
    let j_eff = system.couplings.effective(0, 1);
    if j_eff == 0.0 {
        return Err(Error::Compile(
            "gradient pseudo-pure preparation needs a nonzero coupling".into(),
        ));
    }

    let mut sys = system.clone();
    sys.field_tesla = conditions.field_tesla;

    // Single-spin Zeeman order a_i = tanh(h nu_i / 2kT) / 2.
    let a: Vec<f64> = (0..2)
        .map(|i| {
            let x = PLANCK_H * sys.larmor_hz(i) / (2.0 * BOLTZMANN_K * conditions.temperature_k);
            x.tanh() / 2.0
        })
        .collect();
    // The transfer pathway runs on the lower-polarization spin so the
    // scaling pulse angle on the other is always realizable.
    let (low, high) = if a[0] <= a[1] { (0, 1) } else { (1, 0) };
    let theta = if a[high] == 0.0 {
        PI / 3.0
    } else {
        (a[low] / (2.0 * a[high])).acos()
    };

    let h = build_hamiltonian(&sys);
    let tau = 1.0 / (2.0 * j_eff.abs());
    // -y axis for positive effective coupling, +y for negative.
    let final_phase = if j_eff > 0.0 { 3.0 * PI / 2.0 } else { PI / 2.0 };

    let rho = thermal_state(&sys, conditions)
        .hard_pulse(&[high], theta, 0.0)?
        .gradient_crush(mode)
        .hard_pulse(&[low], PI / 4.0, 0.0)?
        // Spin echo around the coupling delay: offsets refocus, the
        // coupling runs at full strength.
        .evolve(&h, tau / 2.0)?
        .hard_pulse(&[0, 1], PI, 0.0)?
        .evolve(&h, tau / 2.0)?
        .hard_pulse(&[0, 1], PI, 0.0)?
        .hard_pulse(&[low], PI / 4.0, final_phase)?
        .gradient_crush(mode);
    Ok(rho)
}

/// Default cap on system size for temporal averaging (N-1 experiments).
pub const TEMPORAL_AVERAGING_DEFAULT_CAP: usize = 4;

/// Pseudo-pure preparation by temporal averaging with the default cap.
pub fn prepare_pseudopure_temporal(
    system: &SpinSystem,
    conditions: &ThermalConditions,
) -> Result<DensityMatrix> {
    prepare_pseudopure_temporal_capped(system, conditions, TEMPORAL_AVERAGING_DEFAULT_CAP)
}

/// Temporal averaging: run N-1 experiments whose preparations permute the
/// N-1 non-ground populations cyclically and average the results. Exactly
/// pseudo-pure for any diagonal input.
pub fn prepare_pseudopure_temporal_capped(
    system: &SpinSystem,
    conditions: &ThermalConditions,
    cap: usize,
) -> Result<DensityMatrix> {
    let n = system.n_spins();
    if n > cap {
        return Err(Error::Physics(format!(
            "temporal averaging over {} spins needs {} experiments, above the cap (n <= {cap})",
            n,
            (1usize << n) - 1
        )));
    }
    let mut sys = system.clone();
    sys.field_tesla = conditions.field_tesla;
    let thermal = thermal_state(&sys, conditions);
    let dim = sys.dim();

    // sigma cycles 1 -> 2 -> ... -> N-1 -> 1 and fixes the ground state.
    let sigma: Vec<usize> = (0..dim)
        .map(|i| if i == 0 { 0 } else { i % (dim - 1) + 1 })
        .collect();

    let mut avg = ndarray::Array2::from_elem((dim, dim), num_complex::Complex64::new(0.0, 0.0));
    let mut perm: Vec<usize> = (0..dim).collect();
    for _ in 0..(dim - 1) {
        let mut mat = ndarray::Array2::from_elem((dim, dim), num_complex::Complex64::new(0.0, 0.0));
        for j in 0..dim {
            for k in 0..dim {
                mat[(perm[j], perm[k])] = thermal.matrix()[(j, k)];
            }
        }
        avg += &mat;
        perm = perm.iter().map(|&p| sigma[p]).collect();
    }
    let scale = 1.0 / (dim - 1) as f64;
    DensityMatrix::new(avg.mapv(|z| z * scale))
}

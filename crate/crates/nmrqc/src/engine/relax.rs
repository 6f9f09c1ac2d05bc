//! T1/T2 relaxation as independent per-spin channels.
//!
//! Each spin gets a generalized amplitude-damping channel (rate 1/T1,
//! fixed point at the spin's equilibrium populations) composed with pure
//! phase damping chosen so the total transverse decay rate is exactly
//! 1/T2. Both channels have exact closed forms, so a timed event is applied
//! in a single step with no integration error. Cross-relaxation (NOE) is
//! out of scope; relaxation times are independent user inputs.

use num_complex::Complex64;

use crate::constants::{BOLTZMANN_K, PLANCK_H};
use crate::error::{Error, Result};
use crate::spin_model::SpinSystem;

use super::DensityMatrix;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relaxation behaviour of one spin.
#[derive(Debug, Clone, Copy)]
pub struct SpinRelaxation {
    pub t1_s: f64,
    pub t2_s: f64,
    /// Equilibrium ground-state (|0>) population of this spin.
    pub eq_ground_population: f64,
}

/// Per-spin relaxation parameters plus the equilibrium reference.
#[derive(Debug, Clone)]
pub struct RelaxationParams {
    pub spins: Vec<Option<SpinRelaxation>>,
}

impl RelaxationParams {
    /// Build from a spin system. With `temperature_k` given, each spin
    /// relaxes toward its single-spin Boltzmann populations at the full
    /// Larmor frequency; otherwise toward the unpolarized (maximally
    /// mixed) state.
    pub fn from_system(system: &SpinSystem, temperature_k: Option<f64>) -> RelaxationParams {
        let spins = system
            .spins
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.relaxation.map(|r| {
                    let eq = match temperature_k {
                        Some(t) => {
                            let x = PLANCK_H * system.larmor_hz(i) / (2.0 * BOLTZMANN_K * t);
                            x.exp() / (2.0 * x.cosh())
                        }
                        None => 0.5,
                    };
                    SpinRelaxation {
                        t1_s: r.t1_s,
                        t2_s: r.t2_s,
                        eq_ground_population: eq,
                    }
                })
            })
            .collect();
        RelaxationParams { spins }
    }

    /// The state every spin relaxes toward: a product of single-spin
    /// equilibrium populations (non-relaxing spins are taken as mixed).
    pub fn equilibrium_state(&self) -> DensityMatrix {
        let n = self.spins.len();
        let dim = 1 << n;
        let mut pops = vec![1.0; dim];
        for (idx, p) in pops.iter_mut().enumerate() {
            for (i, sr) in self.spins.iter().enumerate() {
                let ground = idx >> (n - 1 - i) & 1 == 0;
                let p0 = sr.map(|r| r.eq_ground_population).unwrap_or(0.5);
                *p *= if ground { p0 } else { 1.0 - p0 };
            }
        }
        DensityMatrix::from_populations(&pops).expect("product populations sum to 1")
    }
}

/// Apply per-spin T1/T2 relaxation for a time `t`.
pub fn relax(rho: &DensityMatrix, params: &RelaxationParams, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(Error::Physics(format!("relaxation time must be >= 0, got {t}")));
    }
    if params.spins.len() != rho.n_spins() {
        return Err(Error::Dimension(format!(
            "relaxation params for {} spins, state has {}",
            params.spins.len(),
            rho.n_spins()
        )));
    }
    let mut out = rho.clone();
    for (i, sr) in params.spins.iter().enumerate() {
        let Some(r) = sr else { continue };

        // Generalized amplitude damping toward diag(p0, 1-p0).
        let gamma = 1.0 - (-t / r.t1_s).exp();
        let p0 = r.eq_ground_population;
        let sp = p0.sqrt();
        let sq = (1.0 - p0).sqrt();
        let keep = (1.0 - gamma).sqrt();
        let jump = gamma.sqrt();
        let gad = [
            [
                [Complex64::new(sp, 0.0), C_ZERO],
                [C_ZERO, Complex64::new(sp * keep, 0.0)],
            ],
            [
                [C_ZERO, Complex64::new(sp * jump, 0.0)],
                [C_ZERO, C_ZERO],
            ],
            [
                [Complex64::new(sq * keep, 0.0), C_ZERO],
                [C_ZERO, Complex64::new(sq, 0.0)],
            ],
            [
                [C_ZERO, C_ZERO],
                [Complex64::new(sq * jump, 0.0), C_ZERO],
            ],
        ];
        out = out.apply_single_spin_kraus(i, &gad);

        // Extra pure dephasing: amplitude damping already contributes
        // e^(-t/2T1) to the coherences; top up to e^(-t/T2).
        let extra_rate = 1.0 / r.t2_s - 1.0 / (2.0 * r.t1_s);
        if extra_rate > 0.0 {
            let f = (-t * extra_rate).exp();
            let a = ((1.0 + f) / 2.0).sqrt();
            let b = ((1.0 - f) / 2.0).sqrt();
            let dephase = [
                [
                    [Complex64::new(a, 0.0), C_ZERO],
                    [C_ZERO, Complex64::new(a, 0.0)],
                ],
                [
                    [Complex64::new(b, 0.0), C_ZERO],
                    [C_ZERO, Complex64::new(-b, 0.0)],
                ],
            ];
            out = out.apply_single_spin_kraus(i, &dephase);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{ix, iy, iz, CMat};
    use crate::spin_model::{CouplingTable, Nucleus, Spin, SpinSystem};
    use approx::assert_relative_eq;

    fn relaxing_system() -> SpinSystem {
        let spins = vec![
            Spin::new(Nucleus::h1(), 50.0).with_relaxation(2.0, 1.0).unwrap(),
            Spin::new(Nucleus::c13(), 20.0).with_relaxation(3.0, 0.5).unwrap(),
        ];
        SpinSystem::new(spins, CouplingTable::new(2), 11.74).unwrap()
    }

    fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..a.nrows() {
            for k in 0..a.ncols() {
                worst = worst.max((a[(j, k)] - b[(j, k)]).norm());
            }
        }
        worst
    }

    #[test]
    fn zero_time_is_identity() {
        let params = RelaxationParams::from_system(&relaxing_system(), None);
        let rho = DensityMatrix::basis_state(2, 3);
        let out = relax(&rho, &params, 0.0).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn long_time_reaches_equilibrium() {
        let params = RelaxationParams::from_system(&relaxing_system(), Some(300.0));
        let rho = DensityMatrix::basis_state(2, 3);
        let out = relax(&rho, &params, 1e4).unwrap();
        let eq = params.equilibrium_state();
        assert!(max_abs_diff(out.matrix(), eq.matrix()) < 1e-10);
        out.validate().unwrap();
    }

    #[test]
    fn transverse_coefficient_decays_at_t2() {
        let sys = relaxing_system();
        let params = RelaxationParams::from_system(&sys, None);
        let mixed = DensityMatrix::maximally_mixed(2);
        let iy_op = iy(2, 0);
        let rho = DensityMatrix::new(mixed.matrix() + &iy_op.mapv(|z| z * 0.2)).unwrap();
        let t = 0.5;
        let out = relax(&rho, &params, t).unwrap();
        let before = rho.expectation(&iy_op).unwrap().re;
        let after = out.expectation(&iy_op).unwrap().re;
        assert_relative_eq!(after / before, (-t / 1.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn semigroup_in_time() {
        let sys = relaxing_system();
        let params = RelaxationParams::from_system(&sys, Some(300.0));
        let mixed = DensityMatrix::maximally_mixed(2);
        let mat = mixed.matrix()
            + &ix(2, 0).mapv(|z| z * 0.1)
            + &iz(2, 1).mapv(|z| z * 0.15);
        let rho = DensityMatrix::new(mat).unwrap();
        let a = relax(&relax(&rho, &params, 0.3).unwrap(), &params, 0.7).unwrap();
        let b = relax(&rho, &params, 1.0).unwrap();
        assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-10);
    }

    #[test]
    fn trace_preserved_and_positive() {
        let sys = relaxing_system();
        let params = RelaxationParams::from_system(&sys, Some(300.0));
        let rho = DensityMatrix::basis_state(2, 1)
            .hard_pulse(&[0, 1], 0.7, 0.3)
            .unwrap();
        let out = relax(&rho, &params, 0.2).unwrap();
        out.validate().unwrap();
    }
}

//! Timing and addressability analysis: achievable gate rates and
//! frequency-selectivity margins.

use crate::spin_model::SpinSystem;

/// Default RF nutation rate for non-selective one-qubit pulses, Hz.
pub const DEFAULT_NUTATION_HZ: f64 = 25_000.0;

/// Achievable gate rates by kind, Hz.
#[derive(Debug, Clone)]
pub struct GateRateReport {
    /// Non-selective (heteronuclear) one-qubit rate: the RF nutation rate.
    pub one_qubit_hetero_hz: f64,
    /// Selective (homonuclear) one-qubit rate, limited by the smallest
    /// same-species offset separation; None if no spin shares a species.
    pub one_qubit_homo_hz: Option<f64>,
    /// Two-qubit rate 2 J_eff per coupled pair.
    pub two_qubit: Vec<(usize, usize, f64)>,
}

/// Gate rates for a system with the given nutation rate.
pub fn gate_rate_report(system: &SpinSystem, nutation_hz: f64) -> GateRateReport {
    let n = system.n_spins();
    let mut homo: Option<f64> = None;
    for i in 0..n {
        for k in (i + 1)..n {
            if system.spins[i].nucleus.species == system.spins[k].nucleus.species {
                let sep = (system.spins[i].offset_hz - system.spins[k].offset_hz).abs();
                homo = Some(homo.map_or(sep, |h| h.min(sep)));
            }
        }
    }
    let mut two_qubit = Vec::new();
    for i in 0..n {
        for k in (i + 1)..n {
            let j_eff = system.couplings.effective(i, k);
            if j_eff != 0.0 {
                two_qubit.push((i, k, 2.0 * j_eff.abs()));
            }
        }
    }
    GateRateReport {
        one_qubit_hetero_hz: nutation_hz,
        one_qubit_homo_hz: homo,
        two_qubit,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectivityStatus {
    Pass,
    /// Margin below 5: addressable but tight.
    Warning,
    /// Margin below 1: multiplets overlap.
    Overlap,
}

/// Selectivity margin for one same-species pair.
#[derive(Debug, Clone)]
pub struct SelectivityEntry {
    pub i: usize,
    pub k: usize,
    /// Offset separation over the mean multiplet half-width.
    pub margin: f64,
    pub status: SelectivityStatus,
}

/// Check every same-species pair: margin = |nu_i - nu_k| / (W_i/2 + W_k/2)
/// with W the multiplet width (sum of coupling magnitudes). Heteronuclear
/// pairs are trivially selective and not listed.
pub fn selectivity_check(system: &SpinSystem) -> Vec<SelectivityEntry> {
    let n = system.n_spins();
    let width = |i: usize| -> f64 {
        (0..n)
            .filter(|&k| k != i)
            .map(|k| system.couplings.effective(i, k).abs())
            .sum()
    };
    let mut out = Vec::new();
    for i in 0..n {
        for k in (i + 1)..n {
            if system.spins[i].nucleus.species != system.spins[k].nucleus.species {
                continue;
            }
            let sep = (system.spins[i].offset_hz - system.spins[k].offset_hz).abs();
            let half_widths = width(i) / 2.0 + width(k) / 2.0;
            let margin = if sep == 0.0 {
                0.0
            } else if half_widths == 0.0 {
                f64::INFINITY
            } else {
                sep / half_widths
            };
            let status = if margin < 1.0 {
                SelectivityStatus::Overlap
            } else if margin < 5.0 {
                SelectivityStatus::Warning
            } else {
                SelectivityStatus::Pass
            };
            out.push(SelectivityEntry { i, k, margin, status });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_model::{CouplingTable, Nucleus, Spin, SpinSystem};
    use approx::assert_relative_eq;

    fn homo_pair(offset1: f64, j: f64) -> SpinSystem {
        let spins = vec![
            Spin::new(Nucleus::h1(), 0.0),
            Spin::new(Nucleus::h1(), offset1),
        ];
        let mut c = CouplingTable::new(2);
        c.set_j(0, 1, j).unwrap();
        SpinSystem::new(spins, c, 11.74).unwrap()
    }

    #[test]
    fn hetero_rates() {
        let spins = vec![
            Spin::new(Nucleus::h1(), 0.0),
            Spin::new(Nucleus::c13(), 100.0),
        ];
        let mut c = CouplingTable::new(2);
        c.set_j(0, 1, 7.143).unwrap();
        let sys = SpinSystem::new(spins, c, 11.74).unwrap();
        let r = gate_rate_report(&sys, DEFAULT_NUTATION_HZ);
        assert_relative_eq!(r.one_qubit_hetero_hz, 25_000.0);
        assert!((10_000.0..=100_000.0).contains(&r.one_qubit_hetero_hz));
        assert!(r.one_qubit_homo_hz.is_none());
        // Two-qubit gate time 1/rate = 1/(2J) = 70 ms.
        assert_relative_eq!(1.0 / r.two_qubit[0].2, 0.070, max_relative = 1e-3);
    }

    #[test]
    fn homo_rate_is_offset_limited() {
        let r = gate_rate_report(&homo_pair(400.0, 7.0), DEFAULT_NUTATION_HZ);
        assert_relative_eq!(r.one_qubit_homo_hz.unwrap(), 400.0);
        assert!(r.one_qubit_homo_hz.unwrap() <= 1000.0);
    }

    #[test]
    fn selectivity_examples() {
        // Separation 1000 Hz, widths 10 Hz each -> margin 100.
        let wide = homo_pair(1000.0, 10.0);
        let e = &selectivity_check(&wide)[0];
        assert_relative_eq!(e.margin, 100.0);
        assert_eq!(e.status, SelectivityStatus::Pass);

        // Identical offsets overlap at any coupling.
        let overlap = homo_pair(0.0, 3.0);
        let e = &selectivity_check(&overlap)[0];
        assert_relative_eq!(e.margin, 0.0);
        assert_eq!(e.status, SelectivityStatus::Overlap);

        // Heteronuclear pairs are not listed.
        let spins = vec![
            Spin::new(Nucleus::h1(), 0.0),
            Spin::new(Nucleus::c13(), 0.0),
        ];
        let sys = SpinSystem::new(spins, CouplingTable::new(2), 11.74).unwrap();
        assert!(selectivity_check(&sys).is_empty());
    }

    #[test]
    fn selectivity_warning_band() {
        let tight = homo_pair(30.0, 10.0);
        let e = &selectivity_check(&tight)[0];
        assert_relative_eq!(e.margin, 3.0);
        assert_eq!(e.status, SelectivityStatus::Warning);
    }
}

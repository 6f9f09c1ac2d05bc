//! Ensemble readout: FID acquisition, spectra, and qubit-value extraction.
//!
//! Detection is the expectation of the ladder observable sum of I_+ over
//! the detected spins (quadrature detection), sampled while the state
//! evolves freely. Spectra are plain DFTs with threshold peak picking; no
//! lineshape fitting. Qubit values come from the sigma_z expectations of
//! the pure component of a pseudo-pure state, normalized by its epsilon.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::engine::{i_plus, iz, relax, CMat, DensityMatrix, RelaxationParams};
use crate::error::{Error, Result};
use crate::spin_model::{build_hamiltonian, SpinSystem};

/// Relative threshold for spectrum peak picking.
pub const PEAK_THRESHOLD: f64 = 1e-9;

/// Rounding half-width for digital qubit values.
pub const ROUNDING_TOL: f64 = 0.02;

/// Free induction decay: complex time samples at a fixed dwell time.
#[derive(Debug, Clone, PartialEq)]
pub struct Fid {
    pub dwell_s: f64,
    pub samples: Vec<Complex64>,
}

impl Fid {
    pub fn duration_s(&self) -> f64 {
        self.dwell_s * self.samples.len() as f64
    }
}

/// Acquire an FID from `rho`: sample Tr(rho(t) sum I_+) over all spins.
pub fn acquire_fid(
    rho: &DensityMatrix,
    system: &SpinSystem,
    relaxation: Option<&RelaxationParams>,
    dwell_s: f64,
    points: usize,
) -> Result<Fid> {
    acquire_fid_channel(rho, system, relaxation, dwell_s, points, None)
}

/// Acquire an FID on one detection channel: only spins of the given
/// species contribute to the observable (all spins when `species` is None).
pub fn acquire_fid_channel(
    rho: &DensityMatrix,
    system: &SpinSystem,
    relaxation: Option<&RelaxationParams>,
    dwell_s: f64,
    points: usize,
    species: Option<&str>,
) -> Result<Fid> {
    if !(dwell_s > 0.0) {
        return Err(Error::Physics(format!("dwell time must be > 0, got {dwell_s}")));
    }
    if points < 2 {
        return Err(Error::Physics(format!("need at least 2 points, got {points}")));
    }
    let n = system.n_spins();
    if rho.n_spins() != n {
        return Err(Error::Dimension(format!(
            "state has {} spins, system has {n}",
            rho.n_spins()
        )));
    }
    let dim = system.dim();
    let mut observable = CMat::zeros((dim, dim));
    for i in 0..n {
        if species.is_none_or(|s| system.spins[i].nucleus.species == s) {
            observable += &i_plus(n, i);
        }
    }
    let h = build_hamiltonian(system);
    let mut state = rho.clone();
    let mut samples = Vec::with_capacity(points);
    for a in 0..points {
        if a > 0 {
            state = state.evolve(&h, dwell_s)?;
            if let Some(params) = relaxation {
                state = relax(&state, params, dwell_s)?;
            }
        }
        samples.push(state.expectation(&observable)?);
    }
    Ok(Fid { dwell_s, samples })
}

/// One detected spectral line.
#[derive(Debug, Clone)]
pub struct Peak {
    pub frequency_hz: f64,
    pub amplitude: f64,
    pub phase_rad: f64,
}

/// DFT of an FID with a centered frequency axis and a picked peak list.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub frequency_hz: Vec<f64>,
    pub amplitude: Vec<Complex64>,
    pub peaks: Vec<Peak>,
}

/// Fourier-transform an FID and pick peaks: local maxima of the magnitude
/// above `PEAK_THRESHOLD` of the global maximum.
pub fn spectrum(fid: &Fid) -> Spectrum {
    let n = fid.samples.len();
    let mut buf = fid.samples.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    // Reorder so the axis runs from -1/(2 dwell) to +1/(2 dwell).
    let half = n.div_ceil(2);
    buf.rotate_left(half);
    let df = 1.0 / (fid.dwell_s * n as f64);
    let frequency_hz: Vec<f64> = (0..n).map(|a| (a as f64 - (n - half) as f64) * df).collect();

    let max_mag = buf.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut peaks = Vec::new();
    if max_mag > 0.0 {
        let floor = PEAK_THRESHOLD * max_mag;
        for a in 0..n {
            let m = buf[a].norm();
            let left = if a > 0 { buf[a - 1].norm() } else { 0.0 };
            let right = if a + 1 < n { buf[a + 1].norm() } else { 0.0 };
            if m > floor && m >= left && m > right {
                peaks.push(Peak {
                    frequency_hz: frequency_hz[a],
                    amplitude: m,
                    phase_rad: buf[a].arg(),
                });
            }
        }
    }
    Spectrum {
        frequency_hz,
        amplitude: buf,
        peaks,
    }
}

/// One qubit's readout: the analog sigma_z value mapped to [0,1] and, when
/// within `ROUNDING_TOL` of an endpoint, the rounded digital value.
#[derive(Debug, Clone, Copy)]
pub struct QubitReading {
    pub analog: f64,
    pub rounded: Option<u8>,
}

/// Result of reading all qubits of a state.
#[derive(Debug, Clone)]
pub struct ReadoutReport {
    /// Purity-derived epsilon of the pseudo-pure component, when the state
    /// has pseudo-pure structure.
    pub epsilon: Option<f64>,
    /// True when the state carries no observable signal (maximally mixed).
    pub no_signal: bool,
    pub readings: Vec<QubitReading>,
}

fn reading(analog: f64) -> QubitReading {
    let rounded = if analog.abs() <= ROUNDING_TOL {
        Some(0)
    } else if (analog - 1.0).abs() <= ROUNDING_TOL {
        Some(1)
    } else {
        None
    };
    QubitReading { analog, rounded }
}

/// Read qubit values: 0 maps to |0>, 1 to |1>, intermediate analog values
/// are ensemble averages.
///
/// For a state with pseudo-pure structure (1-eps) 1/N + eps |psi><psi| the
/// pure component is reconstructed from the purity and values are read from
/// it, so answers are independent of eps. Other states report raw
/// 1/2 - <I_z> expectations without normalization.
pub fn read_qubits(rho: &DensityMatrix, system: &SpinSystem) -> Result<ReadoutReport> {
    let n = system.n_spins();
    if rho.n_spins() != n {
        return Err(Error::Dimension(format!(
            "state has {} spins, system has {n}",
            rho.n_spins()
        )));
    }
    let dim = rho.dim() as f64;
    let purity = rho.purity();
    let epsilon = ((purity - 1.0 / dim).max(0.0) / (1.0 - 1.0 / dim)).sqrt();
    if epsilon < 1e-9 {
        return Ok(ReadoutReport {
            epsilon: Some(0.0),
            no_signal: true,
            readings: vec![QubitReading { analog: 0.5, rounded: None }; n],
        });
    }

    // Candidate pure component P = (rho - (1-eps)/N)/eps; pseudo-pure iff
    // P is a projector.
    let mut p = rho.matrix().mapv(|z| z / epsilon);
    let shift = (1.0 - epsilon) / (dim * epsilon);
    for a in 0..rho.dim() {
        p[(a, a)] -= shift;
    }
    let p2 = p.dot(&p);
    let worst = p2
        .iter()
        .zip(p.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let pseudo_pure = worst < 1e-6;

    let readings = (0..n)
        .map(|i| {
            let op = iz(n, i);
            let expect = if pseudo_pure {
                let mut tr = Complex64::new(0.0, 0.0);
                for j in 0..rho.dim() {
                    for k in 0..rho.dim() {
                        tr += p[(j, k)] * op[(k, j)];
                    }
                }
                tr.re
            } else {
                rho.expectation(&op).map(|v| v.re).unwrap_or(0.0)
            };
            reading(0.5 - expect)
        })
        .collect();
    Ok(ReadoutReport {
        epsilon: pseudo_pure.then_some(epsilon),
        no_signal: false,
        readings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::init::polarization_override;
    use crate::spin_model::{CouplingTable, Nucleus, Spin, SpinSystem};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn single_spin(offset: f64) -> SpinSystem {
        let spins = vec![Spin::new(Nucleus::h1(), offset)];
        SpinSystem::new(spins, CouplingTable::new(1), 11.74).unwrap()
    }

    fn coupled_pair() -> SpinSystem {
        let spins = vec![
            Spin::new(Nucleus::h1(), 100.0),
            Spin::new(Nucleus::h1(), -100.0),
        ];
        let mut c = CouplingTable::new(2);
        c.set_j(0, 1, 10.0).unwrap();
        SpinSystem::new(spins, c, 11.74).unwrap()
    }

    #[test]
    fn mixed_state_gives_zero_signal() {
        let sys = coupled_pair();
        let rho = DensityMatrix::maximally_mixed(2);
        let fid = acquire_fid(&rho, &sys, None, 1e-3, 64).unwrap();
        for s in &fid.samples {
            assert!(s.norm() < 1e-14);
        }
        assert!(spectrum(&fid).peaks.is_empty());
    }

    #[test]
    fn single_spin_oscillates_at_offset() {
        let sys = single_spin(100.0);
        let rho = DensityMatrix::basis_state(1, 0)
            .hard_pulse(&[0], PI / 2.0, 0.0)
            .unwrap();
        let dwell = 1.0 / 1024.0;
        let fid = acquire_fid(&rho, &sys, None, dwell, 1024).unwrap();
        // Constant magnitude, phase advancing at -2 pi * 100 Hz (the I_+
        // expectation rotates opposite to the frame sense of H).
        let m0 = fid.samples[0].norm();
        assert!(m0 > 0.4);
        for s in &fid.samples {
            assert_relative_eq!(s.norm(), m0, max_relative = 1e-10);
        }
        let spec = spectrum(&fid);
        assert_eq!(spec.peaks.len(), 1);
        assert_relative_eq!(spec.peaks[0].frequency_hz.abs(), 100.0, epsilon = 1.01);
    }

    #[test]
    fn coupled_pair_gives_doublets() {
        let sys = coupled_pair();
        let rho = DensityMatrix::basis_state(2, 0)
            .hard_pulse(&[0, 1], PI / 2.0, 0.0)
            .unwrap();
        let fid = acquire_fid(&rho, &sys, None, 1.0 / 1024.0, 4096).unwrap();
        let spec = spectrum(&fid);
        let mut freqs: Vec<f64> = spec.peaks.iter().map(|p| p.frequency_hz.abs()).collect();
        freqs.sort_by(f64::total_cmp);
        assert_eq!(freqs.len(), 4);
        let expect = [95.0, 95.0, 105.0, 105.0];
        for (f, e) in freqs.iter().zip(expect) {
            assert_relative_eq!(*f, e, epsilon = 0.26);
        }
    }

    #[test]
    fn species_channel_filters_detection() {
        let spins = vec![
            Spin::new(Nucleus::h1(), 100.0),
            Spin::new(Nucleus::c13(), 50.0),
        ];
        let sys = SpinSystem::new(spins, CouplingTable::new(2), 11.74).unwrap();
        let rho = DensityMatrix::basis_state(2, 0)
            .hard_pulse(&[0], PI / 2.0, 0.0)
            .unwrap();
        let h_chan = acquire_fid_channel(&rho, &sys, None, 1e-3, 64, Some("H1")).unwrap();
        let c_chan = acquire_fid_channel(&rho, &sys, None, 1e-3, 64, Some("C13")).unwrap();
        assert!(h_chan.samples[0].norm() > 0.4);
        for s in &c_chan.samples {
            assert!(s.norm() < 1e-14);
        }
    }

    #[test]
    fn relaxation_decays_the_envelope() {
        let spins = vec![Spin::new(Nucleus::h1(), 100.0)
            .with_relaxation(10.0, 1.0)
            .unwrap()];
        let sys = SpinSystem::new(spins, CouplingTable::new(1), 11.74).unwrap();
        let params = RelaxationParams::from_system(&sys, None);
        let rho = DensityMatrix::basis_state(1, 0)
            .hard_pulse(&[0], PI / 2.0, 0.0)
            .unwrap();
        let dwell = 0.01;
        let fid = acquire_fid(&rho, &sys, Some(&params), dwell, 128).unwrap();
        let m0 = fid.samples[0].norm();
        for (a, s) in fid.samples.iter().enumerate() {
            let expect = m0 * (-(a as f64) * dwell / 1.0).exp();
            assert_relative_eq!(s.norm(), expect, max_relative = 1e-9);
        }
    }

    #[test]
    fn parseval_consistency() {
        let sys = coupled_pair();
        let rho = DensityMatrix::basis_state(2, 1)
            .hard_pulse(&[0], PI / 3.0, 0.4)
            .unwrap();
        let fid = acquire_fid(&rho, &sys, None, 1e-3, 256).unwrap();
        let spec = spectrum(&fid);
        let time_energy: f64 = fid.samples.iter().map(|s| s.norm_sqr()).sum();
        let freq_energy: f64 =
            spec.amplitude.iter().map(|s| s.norm_sqr()).sum::<f64>() / fid.samples.len() as f64;
        assert_relative_eq!(time_energy, freq_energy, max_relative = 1e-8);
    }

    #[test]
    fn epsilon_linearity_of_fid() {
        let sys = coupled_pair();
        let pure = DensityMatrix::basis_state(2, 0)
            .hard_pulse(&[0, 1], PI / 2.0, 0.0)
            .unwrap();
        let reference = acquire_fid(&pure, &sys, None, 1e-3, 64).unwrap();
        for eps in [1e-4, 1e-2, 0.5] {
            let mixed = DensityMatrix::maximally_mixed(2).mix(&pure, eps).unwrap();
            let fid = acquire_fid(&mixed, &sys, None, 1e-3, 64).unwrap();
            for (a, b) in fid.samples.iter().zip(&reference.samples) {
                assert!((a - b * eps).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn read_qubits_examples() {
        let sys = coupled_pair();

        // Pseudo-pure |01> at tiny epsilon reads (0, 1).
        let pure01 = DensityMatrix::basis_state(2, 1);
        let rho = DensityMatrix::maximally_mixed(2).mix(&pure01, 4e-5).unwrap();
        let r = read_qubits(&rho, &sys).unwrap();
        assert!(!r.no_signal);
        assert_relative_eq!(r.epsilon.unwrap(), 4e-5, max_relative = 1e-6);
        assert_eq!(r.readings[0].rounded, Some(0));
        assert_eq!(r.readings[1].rounded, Some(1));
        // Rounding error in the purity is amplified by 1/eps when the pure
        // component is reconstructed, so the analog values are only good to
        // about 1e-8 at eps = 4e-5.
        assert_relative_eq!(r.readings[0].analog, 0.0, epsilon = 1e-6);
        assert_relative_eq!(r.readings[1].analog, 1.0, epsilon = 1e-6);

        // Uniform superposition reads an analog 0.5, not rounded.
        let sup = DensityMatrix::basis_state(2, 0)
            .hard_pulse(&[0], PI / 2.0, 0.0)
            .unwrap();
        let r = read_qubits(&sup, &sys).unwrap();
        assert_relative_eq!(r.readings[0].analog, 0.5, epsilon = 1e-12);
        assert!(r.readings[0].rounded.is_none());
        assert_eq!(r.readings[1].rounded, Some(0));

        // Maximally mixed: no signal.
        let r = read_qubits(&DensityMatrix::maximally_mixed(2), &sys).unwrap();
        assert!(r.no_signal);
        assert_relative_eq!(r.epsilon.unwrap(), 0.0);
    }

    #[test]
    fn read_qubits_non_pseudopure_reports_raw_expectations() {
        let sys = coupled_pair();
        // A diagonal mixture that is not pseudo-pure.
        let rho = DensityMatrix::from_populations(&[0.5, 0.3, 0.1, 0.1]).unwrap();
        let r = read_qubits(&rho, &sys).unwrap();
        assert!(r.epsilon.is_none());
        // <I_z0> = (0.5+0.3-0.1-0.1)/2 = 0.3 -> 0.2
        assert_relative_eq!(r.readings[0].analog, 0.2, max_relative = 1e-12);
    }

    #[test]
    fn readout_from_polarization_override_matches_pure_answer() {
        let sys = coupled_pair();
        let rho = polarization_override(&sys, 1e-3).unwrap();
        let r = read_qubits(&rho, &sys).unwrap();
        assert_eq!(r.readings[0].rounded, Some(0));
        assert_eq!(r.readings[1].rounded, Some(0));
    }
}

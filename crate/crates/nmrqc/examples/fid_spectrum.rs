//! Pulse-acquire on the built-in molecule: excite, record an FID with
//! relaxation, Fourier transform, and pick peaks. The proton doublet sits
//! at offset +/- J/2.

use std::f64::consts::PI;

use nmrqc::demos::builtin_molecule;
use nmrqc::engine::{DensityMatrix, RelaxationParams};
use nmrqc::init::{thermal_state, ThermalConditions};
use nmrqc::readout::{acquire_fid, spectrum};

fn main() {
    let system = builtin_molecule();
    let cond = ThermalConditions::new(300.0, system.field_tesla).unwrap();
    let params = RelaxationParams::from_system(&system, Some(cond.temperature_k));

    let excited: DensityMatrix = thermal_state(&system, &cond)
        .hard_pulse(&[0, 1], PI / 2.0, 0.0)
        .unwrap();
    let fid = acquire_fid(&excited, &system, Some(&params), 1.0 / 1024.0, 4096).unwrap();
    println!(
        "acquired {} points over {:.1} s; first sample magnitude {:.3e}",
        fid.samples.len(),
        fid.dwell_s * fid.samples.len() as f64,
        fid.samples[0].norm()
    );

    let spec = spectrum(&fid);
    println!("\npeaks (expect 1H at 200 +/- 107.5 Hz, 13C at -120 +/- 107.5 Hz):");
    for p in &spec.peaks {
        println!(
            "  {:+9.2} Hz  amplitude {:.3e}",
            p.frequency_hz, p.amplitude
        );
    }
}

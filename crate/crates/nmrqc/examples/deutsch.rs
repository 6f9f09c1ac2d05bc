//! Deutsch's algorithm end to end: compile to pulses, run on a pseudo-pure
//! state, and read the constant/balanced verdict from one qubit.

use nmrqc::compiler::{compile_circuit, execute_sequence};
use nmrqc::demos::{builtin_molecule, deutsch_circuit, DeutschOracle};
use nmrqc::init::{prepare_pseudopure_temporal, ThermalConditions};
use nmrqc::readout::read_qubits;

fn main() {
    let system = builtin_molecule();
    let cond = ThermalConditions::new(300.0, system.field_tesla).unwrap();
    let initial = prepare_pseudopure_temporal(&system, &cond).unwrap();

    for oracle in DeutschOracle::all() {
        let (seq, report) = compile_circuit(&deutsch_circuit(oracle), &system).unwrap();
        let out = execute_sequence(&initial, &system, &seq, None).unwrap();
        let readout = read_qubits(&out.state, &system).unwrap();
        let verdict = match readout.readings[0].rounded {
            Some(0) => "constant",
            Some(1) => "balanced",
            _ => "ambiguous",
        };
        println!(
            "{:>13}: qubit 0 reads {:.4} -> {verdict}  ({} pulses, {:.2} ms)",
            oracle.name(),
            readout.readings[0].analog,
            report.pulse_count,
            report.total_duration_s * 1e3
        );
    }
}

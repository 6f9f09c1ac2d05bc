//! Two-qubit Grover search: one iteration lands exactly on the marked
//! item. Run all four oracles from a pseudo-pure start.

use nmrqc::compiler::{compile_circuit, execute_sequence};
use nmrqc::demos::{builtin_molecule, grover2_circuit};
use nmrqc::init::{prepare_pseudopure_temporal, ThermalConditions};
use nmrqc::readout::read_qubits;

fn main() {
    let system = builtin_molecule();
    let cond = ThermalConditions::new(300.0, system.field_tesla).unwrap();
    let initial = prepare_pseudopure_temporal(&system, &cond).unwrap();

    for marked in 0..4usize {
        let (seq, _) = compile_circuit(&grover2_circuit(marked), &system).unwrap();
        let out = execute_sequence(&initial, &system, &seq, None).unwrap();
        let readout = read_qubits(&out.state, &system).unwrap();
        let found: String = readout
            .readings
            .iter()
            .map(|r| char::from(b'0' + r.rounded.unwrap()))
            .collect();
        println!(
            "marked {marked:02b}: search returns {found}  (analog {:.4}, {:.4})",
            readout.readings[0].analog, readout.readings[1].analog
        );
    }
}

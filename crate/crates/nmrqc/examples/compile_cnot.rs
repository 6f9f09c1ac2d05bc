//! Lower a CNOT to the native pulse/delay vocabulary of a 1H/13C pair and
//! print the resulting sequence.

use nmrqc::compiler::{compile_circuit, Circuit, Gate};
use nmrqc::demos::builtin_molecule;
use nmrqc::io::serialize_sequence;

fn main() {
    let system = builtin_molecule();
    let mut circuit = Circuit::new(2);
    circuit.push(Gate::cnot(0, 1)).unwrap();

    let (seq, report) = compile_circuit(&circuit, &system).unwrap();
    println!(
        "CNOT on J = {} Hz: {} pulses, {:.3} ms total",
        system.couplings.effective(0, 1),
        report.pulse_count,
        report.total_duration_s * 1e3
    );
    for w in &report.warnings {
        println!("warning: {w}");
    }
    println!("\n{}", serialize_sequence(&seq));
}

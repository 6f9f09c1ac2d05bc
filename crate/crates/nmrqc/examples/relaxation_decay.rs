//! Decoherence in action: transverse proton magnetization decays at 1/T2
//! while identity-equivalent gate blocks burn wall-clock time.

use std::f64::consts::PI;

use nmrqc::compiler::{compile_circuit, execute_sequence, Circuit, Gate};
use nmrqc::demos::builtin_molecule;
use nmrqc::engine::{i_plus, DensityMatrix, RelaxationParams};
use nmrqc::scaling::decoherence_budget;

fn main() {
    let system = builtin_molecule();
    let params = RelaxationParams::from_system(&system, None);
    let observable = i_plus(2, 0);
    let initial = DensityMatrix::basis_state(2, 0)
        .hard_pulse(&[0], PI / 2.0, 0.0)
        .unwrap();

    println!("pairs of CZ gates (a net identity) vs surviving 1H coherence:");
    println!("{:>7} {:>10} {:>12} {:>12}", "blocks", "time (ms)", "signal", "exp(-t/T2)");
    for blocks in [0usize, 4, 8, 16, 32, 64] {
        let mut circuit = Circuit::new(2);
        for _ in 0..2 * blocks {
            circuit.push(Gate::cz(0, 1)).unwrap();
        }
        let (seq, report) = compile_circuit(&circuit, &system).unwrap();
        let out = execute_sequence(&initial, &system, &seq, Some(&params)).unwrap();
        let amp = 2.0 * out.state.expectation(&observable).unwrap().norm();
        let t = report.total_duration_s.max(0.0);
        println!(
            "{blocks:>7} {:>10.2} {:>12.6} {:>12.6}",
            t * 1e3,
            amp,
            (-t / 0.3).exp()
        );
    }

    let budget = decoherence_budget(1.0, 1e-3).unwrap();
    println!(
        "\nrule of thumb: T2 = {} s and {} ms gates allow about {} gates",
        budget.t2_s,
        budget.gate_time_s * 1e3,
        budget.gate_count
    );
}

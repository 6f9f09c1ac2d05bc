//! The feasibility arithmetic in one place: critical temperature/field,
//! energy scales, the qubit ceiling, the gate budget, and how the
//! pseudo-pure signal falls off with register size.

use nmrqc::constants::GAMMA_H1;
use nmrqc::scaling::{scaling_report, USABLE_SPECIES};

fn main() {
    let report = scaling_report(11.74, 300.0, GAMMA_H1, 12, 1.0, 1e-3).unwrap();

    println!("operating point: {} T, {} K", report.field_tesla, report.temperature_k);
    println!("1H Larmor frequency: {:.1} MHz", report.nu_hz / 1e6);
    println!(
        "Zeeman quantum {:.2} ueV vs thermal energy {:.1} meV",
        report.zeeman_energy_ev * 1e6,
        report.thermal_energy_ev * 1e3
    );
    println!(
        "ground-state init would need T < {:.1} mK or B > {:.1e} T",
        report.critical_temperature_k * 1e3,
        report.critical_field_tesla
    );
    println!(
        "addressable qubits: 6 per species x {} species = {}",
        USABLE_SPECIES.len(),
        report.qubit_limit
    );
    println!(
        "gate budget: {} gates inside one T2",
        report.gate_budget.gate_count
    );

    println!("\nsignal falloff (repetitions to recover n=1 signal-to-noise):");
    for r in &report.epsilon_table {
        println!(
            "  n={:<2}  epsilon {:.3e}  repetitions {:>10.1}",
            r.n, r.epsilon_exact, r.required_repetitions
        );
    }
}

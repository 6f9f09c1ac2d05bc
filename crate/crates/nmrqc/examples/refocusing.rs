//! Refocusing schedules: freeze every coupling in a four-spin chain except
//! one retained pair, using sign rows from a Hadamard matrix.

use nmrqc::compiler::refocusing_schedule;
use nmrqc::spin_model::{CouplingTable, Nucleus, Spin, SpinSystem};

fn main() {
    let spins: Vec<Spin> = (0..4)
        .map(|i| Spin::new(Nucleus::h1(), i as f64 * 600.0 - 900.0))
        .collect();
    let mut c = CouplingTable::new(4);
    c.set_j(0, 1, 50.0).unwrap();
    c.set_j(1, 2, 35.0).unwrap();
    c.set_j(2, 3, 60.0).unwrap();
    c.set_j(0, 2, 20.0).unwrap();
    let system = SpinSystem::new(spins, c, 11.74).unwrap();

    let schedule = refocusing_schedule(&system, Some((1, 2)), 0.02).unwrap();
    println!(
        "retain 1-2 for 20 ms: {} intervals of {:.3} ms, {} pi pulses",
        schedule.n_intervals(),
        schedule.interval_s * 1e3,
        schedule.pi_pulse_count()
    );
    println!("\nsign rows (+ = unflipped):");
    for (i, row) in schedule.rows.iter().enumerate() {
        let signs: String = row.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
        println!("  spin {i}: {signs}");
    }
    println!("\npi pulses at each interval boundary:");
    for b in 0..=schedule.n_intervals() {
        println!("  boundary {b}: spins {:?}", schedule.pulses_at(b));
    }
}

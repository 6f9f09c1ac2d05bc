//! Room-temperature polarization: how small the usable population excess
//! is, and what it would take to freeze spins into their ground state.

use nmrqc::constants::GAMMA_H1;
use nmrqc::init::epsilon_report;
use nmrqc::scaling::{critical_field, critical_temperature, excess_population};
use nmrqc::spin_model::larmor_frequency;

fn main() {
    let field = 11.74;
    let temp = 300.0;
    let nu = larmor_frequency(GAMMA_H1, field);
    println!("1H at {field} T: {:.1} MHz", nu / 1e6);

    let (fraction, excess) = excess_population(nu, temp, 1e17).unwrap();
    println!("ground-state excess at {temp} K: {fraction:.3e}");
    println!("in a 1e17-molecule sample: {excess:.2e} usable spins");

    println!(
        "to polarize instead: cool below {:.1} mK or raise the field past {:.2e} T",
        critical_temperature(field, GAMMA_H1).unwrap() * 1e3,
        critical_field(temp, GAMMA_H1).unwrap()
    );

    println!("\npseudo-pure epsilon vs register size (500 MHz, 300 K):");
    for n in 1..=8 {
        let r = epsilon_report(n, 500e6, temp).unwrap();
        println!("  n={n}: epsilon = {:.3e}", r.epsilon_exact);
    }
}

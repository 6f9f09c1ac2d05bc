//! Prepare pseudo-pure states two ways — gradient (spatial) averaging and
//! temporal averaging — and verify the identity-plus-projector structure.

use nmrqc::demos::builtin_molecule;
use nmrqc::engine::CrushMode;
use nmrqc::init::{
    extract_epsilon, prepare_pseudopure_spatial, prepare_pseudopure_temporal, thermal_state,
    ThermalConditions,
};

fn main() {
    let system = builtin_molecule();
    let cond = ThermalConditions::new(300.0, system.field_tesla).unwrap();

    let thermal = thermal_state(&system, &cond);
    println!("thermal state purity: {:.12}", thermal.purity());
    println!(
        "thermal state is not pseudo-pure: {:?}\n",
        extract_epsilon(&thermal).err().map(|e| e.to_string())
    );

    let spatial = prepare_pseudopure_spatial(&system, &cond, CrushMode::Physical).unwrap();
    println!(
        "spatial prep:  epsilon = {:.6e}",
        extract_epsilon(&spatial).unwrap()
    );

    let temporal = prepare_pseudopure_temporal(&system, &cond).unwrap();
    println!(
        "temporal prep: epsilon = {:.6e}",
        extract_epsilon(&temporal).unwrap()
    );
    println!("(temporal averaging trades 2^n - 1 experiments for a cleaner state)");
}

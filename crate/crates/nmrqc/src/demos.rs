//! Bundled demonstration algorithms: Deutsch's problem on two spins and
//! two-qubit Grover search, plus the built-in molecule they run on.

use std::f64::consts::PI;

use crate::compiler::{Circuit, Gate};
use crate::spin_model::{CouplingTable, Nucleus, Spin, SpinSystem};

/// Two-spin heteronuclear working molecule: a chloroform-like 1H/13C pair
/// with a large one-bond coupling.
pub fn builtin_molecule() -> SpinSystem {
    let spins = vec![
        Spin::new(Nucleus::h1(), 200.0).with_relaxation(10.0, 0.3).unwrap(),
        Spin::new(Nucleus::c13(), -120.0).with_relaxation(25.0, 0.4).unwrap(),
    ];
    let mut c = CouplingTable::new(2);
    c.set_j(0, 1, 215.0).unwrap();
    SpinSystem::new(spins, c, 11.74).unwrap()
}

/// Hadamard on one qubit as native gates: Rz(pi) then Ry(pi/2), equal to H
/// up to a global phase.
fn hadamard(circuit: &mut Circuit, q: usize) {
    circuit.push(Gate::rz(q, PI)).unwrap();
    circuit.push(Gate::ry(q, PI / 2.0)).unwrap();
}

/// NOT as Rx(pi) (equal to X up to a global phase).
fn not(circuit: &mut Circuit, q: usize) {
    circuit.push(Gate::rx(q, PI)).unwrap();
}

/// The four one-bit functions Deutsch's algorithm distinguishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeutschOracle {
    ConstantZero,
    ConstantOne,
    Identity,
    Negation,
}

impl DeutschOracle {
    pub fn all() -> [DeutschOracle; 4] {
        [
            DeutschOracle::ConstantZero,
            DeutschOracle::ConstantOne,
            DeutschOracle::Identity,
            DeutschOracle::Negation,
        ]
    }

    pub fn is_balanced(self) -> bool {
        matches!(self, DeutschOracle::Identity | DeutschOracle::Negation)
    }

    pub fn name(self) -> &'static str {
        match self {
            DeutschOracle::ConstantZero => "constant-zero",
            DeutschOracle::ConstantOne => "constant-one",
            DeutschOracle::Identity => "identity",
            DeutschOracle::Negation => "negation",
        }
    }
}

/// Deutsch's algorithm on qubits (0 = query, 1 = ancilla), starting from
/// |00>. Qubit 0 reads 0 for a constant oracle and 1 for a balanced one.
pub fn deutsch_circuit(oracle: DeutschOracle) -> Circuit {
    let mut c = Circuit::new(2);
    not(&mut c, 1);
    hadamard(&mut c, 0);
    hadamard(&mut c, 1);
    match oracle {
        DeutschOracle::ConstantZero => {}
        DeutschOracle::ConstantOne => not(&mut c, 1),
        DeutschOracle::Identity => c.push(Gate::cnot(0, 1)).unwrap(),
        DeutschOracle::Negation => {
            c.push(Gate::cnot(0, 1)).unwrap();
            not(&mut c, 1);
        }
    }
    hadamard(&mut c, 0);
    c
}

/// Phase flip on one basis state of two qubits: CZ conjugated by NOTs on
/// the qubits that are 0 in the state (ancilla-free oracle).
fn phase_flip(c: &mut Circuit, state: usize) {
    let zeros: Vec<usize> = (0..2).filter(|q| state >> (1 - q) & 1 == 0).collect();
    for &q in &zeros {
        not(c, q);
    }
    c.push(Gate::cz(0, 1)).unwrap();
    for &q in &zeros {
        not(c, q);
    }
}

/// One full Grover iteration for two qubits and one marked item, starting
/// from |00>. A single iteration lands exactly on the marked state.
pub fn grover2_circuit(marked: usize) -> Circuit {
    assert!(marked < 4, "marked item must be 0..=3");
    let mut c = Circuit::new(2);
    hadamard(&mut c, 0);
    hadamard(&mut c, 1);
    phase_flip(&mut c, marked);
    hadamard(&mut c, 0);
    hadamard(&mut c, 1);
    phase_flip(&mut c, 0);
    hadamard(&mut c, 0);
    hadamard(&mut c, 1);
    c
}

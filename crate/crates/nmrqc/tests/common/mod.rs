//! Shared helpers for the integration tests: a gate-matrix oracle built
//! from first principles (independent of the compiler) and random
//! spin-system / gate generators.

#![allow(dead_code)]

use ndarray::Array2;
use nmrqc::compiler::{Gate, GateKind};
use nmrqc::engine::{CMat, DensityMatrix};
use nmrqc::spin_model::{CouplingTable, Nucleus, Spin, SpinSystem};
use num_complex::Complex64;
use rand::Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            for p in 0..br {
                for q in 0..bc {
                    out[(i * br + p, j * bc + q)] = a[(i, j)] * b[(p, q)];
                }
            }
        }
    }
    out
}

pub fn identity(dim: usize) -> CMat {
    Array2::eye(dim)
}

/// Embed a 2x2 matrix on qubit `q` of `n` qubits, qubit 0 being the most
/// significant bit.
pub fn embed_single(n: usize, q: usize, u: &CMat) -> CMat {
    let left = identity(1 << q);
    let right = identity(1 << (n - 1 - q));
    kron(&kron(&left, u), &right)
}

pub fn rx_matrix(theta: f64) -> CMat {
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    ndarray::arr2(&[[c(ch, 0.0), c(0.0, -sh)], [c(0.0, -sh), c(ch, 0.0)]])
}

pub fn ry_matrix(theta: f64) -> CMat {
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    ndarray::arr2(&[[c(ch, 0.0), c(-sh, 0.0)], [c(sh, 0.0), c(ch, 0.0)]])
}

pub fn rz_matrix(theta: f64) -> CMat {
    let e = |a: f64| c(a.cos(), a.sin());
    ndarray::arr2(&[[e(-theta / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), e(theta / 2.0)]])
}

fn bit(index: usize, n: usize, q: usize) -> usize {
    index >> (n - 1 - q) & 1
}

/// Permutation unitary: basis state `b` maps to `perm(b)`.
fn permutation(n: usize, perm: impl Fn(usize) -> usize) -> CMat {
    let dim = 1 << n;
    let mut u = Array2::zeros((dim, dim));
    for b in 0..dim {
        u[(perm(b), b)] = c(1.0, 0.0);
    }
    u
}

/// The ideal unitary for a gate on `n` qubits, assembled directly from the
/// matrix definitions.
pub fn gate_unitary(gate: &Gate, n: usize) -> CMat {
    let t = &gate.targets;
    match gate.kind {
        GateKind::Rx => embed_single(n, t[0], &rx_matrix(gate.angle)),
        GateKind::Ry => embed_single(n, t[0], &ry_matrix(gate.angle)),
        GateKind::Rz => embed_single(n, t[0], &rz_matrix(gate.angle)),
        GateKind::CPhase => {
            let dim = 1 << n;
            let mut u = identity(dim);
            let phase = c(gate.angle.cos(), gate.angle.sin());
            for b in 0..dim {
                if bit(b, n, t[0]) == 1 && bit(b, n, t[1]) == 1 {
                    u[(b, b)] = phase;
                }
            }
            u
        }
        GateKind::CZ => {
            let mut g = gate.clone();
            g.kind = GateKind::CPhase;
            g.angle = std::f64::consts::PI;
            gate_unitary(&g, n)
        }
        GateKind::CNot => permutation(n, |b| {
            if bit(b, n, t[0]) == 1 {
                b ^ 1 << (n - 1 - t[1])
            } else {
                b
            }
        }),
        GateKind::Swap => permutation(n, |b| {
            let (bi, bk) = (bit(b, n, t[0]), bit(b, n, t[1]));
            if bi != bk {
                b ^ (1 << (n - 1 - t[0])) ^ (1 << (n - 1 - t[1]))
            } else {
                b
            }
        }),
        GateKind::Toffoli => permutation(n, |b| {
            if bit(b, n, t[0]) == 1 && bit(b, n, t[1]) == 1 {
                b ^ 1 << (n - 1 - t[2])
            } else {
                b
            }
        }),
    }
}

/// Tr(rho sigma); equals the state fidelity when either argument is pure.
pub fn overlap(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let (a, b) = (rho.matrix(), sigma.matrix());
    let mut s = c(0.0, 0.0);
    for j in 0..a.nrows() {
        for k in 0..a.ncols() {
            s += a[(j, k)] * b[(k, j)];
        }
    }
    s.re
}

/// Random normalized pure state on `n` qubits.
pub fn random_pure_state(n: usize, rng: &mut impl Rng) -> DensityMatrix {
    let dim = 1 << n;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    DensityMatrix::pure_state(&amps).unwrap()
}

/// Random 2..=4 spin system with a connected coupling graph, well-separated
/// same-species offsets, and couplings weak enough that the weak-coupling
/// and selectivity checks both pass.
pub fn random_system(n: usize, rng: &mut impl Rng) -> SpinSystem {
    assert!((2..=4).contains(&n));
    let species = [Nucleus::h1(), Nucleus::c13(), Nucleus::f19()];
    let spins: Vec<Spin> = (0..n)
        .map(|i| {
            let nucleus = species[rng.gen_range(0..species.len())].clone();
            // Slots 3500 Hz apart keep any same-species pair well resolved
            // against couplings capped at 80 Hz.
            let offset = i as f64 * 3500.0 + rng.gen_range(-400.0..400.0) - 5000.0;
            Spin::new(nucleus, offset)
        })
        .collect();

    // Spanning path guarantees connectivity; extra edges appear at random.
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    for i in 0..n {
        for k in (i + 2)..n {
            if rng.gen_bool(0.4) {
                edges.push((i, k));
            }
        }
    }
    let mut couplings = CouplingTable::new(n);
    for (i, k) in edges {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let target = sign * rng.gen_range(25.0..80.0);
        if rng.gen_bool(0.3) {
            // Split the effective coupling between J and 2D.
            let d = target * rng.gen_range(-0.4..0.4);
            couplings.set_j(i, k, target - 2.0 * d).unwrap();
            couplings.set_d(i, k, d).unwrap();
        } else {
            couplings.set_j(i, k, target).unwrap();
        }
    }
    SpinSystem::new(spins, couplings, 11.74).unwrap()
}

/// Random gate valid for an n-qubit register.
pub fn random_gate(n: usize, rng: &mut impl Rng) -> Gate {
    let kinds = [
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::CPhase,
        GateKind::CNot,
        GateKind::CZ,
        GateKind::Swap,
        GateKind::Toffoli,
    ];
    loop {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        if kind.arity() > n {
            continue;
        }
        let mut targets: Vec<usize> = (0..n).collect();
        for i in (1..targets.len()).rev() {
            targets.swap(i, rng.gen_range(0..=i));
        }
        targets.truncate(kind.arity());
        let angle = if kind.takes_angle() {
            rng.gen_range(-std::f64::consts::TAU..std::f64::consts::TAU)
        } else {
            0.0
        };
        return Gate::new(kind, targets, angle).unwrap();
    }
}

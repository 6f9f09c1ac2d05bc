//! Circuit-to-pulse compilation.
//!
//! Gates lower to a small primitive set (transverse pulses, frame
//! z-rotations, controlled-phase on directly coupled pairs); controlled
//! phases become refocused coupling delays; gates on uncoupled pairs are
//! routed over the coupling graph with SWAP chains. The compiled sequence,
//! run with ideal pulses and no relaxation, reproduces each gate's unitary
//! up to a global phase.

mod analysis;
mod exec;
mod refocus;
mod route;

pub use analysis::{
    gate_rate_report, selectivity_check, GateRateReport, SelectivityEntry, SelectivityStatus,
    DEFAULT_NUTATION_HZ,
};
pub use exec::{execute_sequence, ExecutionOutput};
pub use refocus::{refocusing_schedule, RefocusingSchedule};
pub use route::route_swaps;

use std::f64::consts::PI;

use crate::engine::CrushMode;
use crate::error::{Error, Result};
use crate::spin_model::{coupling_graph, weak_coupling_check, CouplingGraph, SpinSystem};

const TAU: f64 = 2.0 * PI;

/// Gate vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    CPhase,
    CNot,
    CZ,
    Swap,
    Toffoli,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            GateKind::CPhase | GateKind::CNot | GateKind::CZ | GateKind::Swap => 2,
            GateKind::Toffoli => 3,
        }
    }

    pub fn takes_angle(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::CPhase)
    }
}

/// One gate: kind, target spins, rotation or phase angle (rad).
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub angle: f64,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>, angle: f64) -> Result<Gate> {
        if targets.len() != kind.arity() {
            return Err(Error::Compile(format!(
                "{kind:?} takes {} targets, got {}",
                kind.arity(),
                targets.len()
            )));
        }
        for (a, &t) in targets.iter().enumerate() {
            if targets[..a].contains(&t) {
                return Err(Error::Compile(format!("{kind:?} targets repeat spin {t}")));
            }
        }
        if !angle.is_finite() {
            return Err(Error::Compile(format!("{kind:?} angle {angle} is not finite")));
        }
        if !kind.takes_angle() && angle != 0.0 {
            return Err(Error::Compile(format!("{kind:?} takes no angle")));
        }
        Ok(Gate { kind, targets, angle })
    }

    pub fn rx(q: usize, angle: f64) -> Gate {
        Gate::new(GateKind::Rx, vec![q], angle).unwrap()
    }

    pub fn ry(q: usize, angle: f64) -> Gate {
        Gate::new(GateKind::Ry, vec![q], angle).unwrap()
    }

    pub fn rz(q: usize, angle: f64) -> Gate {
        Gate::new(GateKind::Rz, vec![q], angle).unwrap()
    }

    pub fn cphase(i: usize, k: usize, phi: f64) -> Gate {
        Gate::new(GateKind::CPhase, vec![i, k], phi).unwrap()
    }

    pub fn cz(i: usize, k: usize) -> Gate {
        Gate::new(GateKind::CZ, vec![i, k], 0.0).unwrap()
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::new(GateKind::CNot, vec![control, target], 0.0).unwrap()
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::new(GateKind::Swap, vec![a, b], 0.0).unwrap()
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Gate {
        Gate::new(GateKind::Toffoli, vec![c1, c2, target], 0.0).unwrap()
    }
}

/// An ordered gate list over a fixed qubit count.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Circuit {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&t) = gate.targets.iter().find(|&&t| t >= self.n_qubits) {
            return Err(Error::Compile(format!(
                "gate target {t} out of range for {} qubits",
                self.n_qubits
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Circuit> {
        let mut c = Circuit::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }
}

/// One timed event of a pulse sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum PulseEvent {
    /// Ideal zero-duration rotation on each target.
    HardPulse {
        targets: Vec<usize>,
        angle: f64,
        phase: f64,
    },
    /// Selective rotation on one spin; relaxation runs over the duration.
    SoftPulse {
        target: usize,
        angle: f64,
        phase: f64,
        duration_s: f64,
    },
    /// Free evolution under the system Hamiltonian.
    Delay { duration_s: f64 },
    /// Bookkept z-rotation exp(-i angle I_z), zero duration.
    FrameZ { target: usize, angle: f64 },
    /// Gradient crush.
    Crush { mode: CrushMode },
    /// Start FID acquisition.
    Acquire { dwell_s: f64, points: usize },
}

impl PulseEvent {
    pub fn duration_s(&self) -> f64 {
        match self {
            PulseEvent::SoftPulse { duration_s, .. } | PulseEvent::Delay { duration_s } => {
                *duration_s
            }
            _ => 0.0,
        }
    }
}

/// Ordered pulse events over a fixed spin count.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    pub n_spins: usize,
    pub events: Vec<PulseEvent>,
}

impl PulseSequence {
    pub fn new(n_spins: usize) -> PulseSequence {
        PulseSequence {
            n_spins,
            events: Vec::new(),
        }
    }

    pub fn duration_s(&self) -> f64 {
        self.events.iter().map(PulseEvent::duration_s).sum()
    }

    /// Per-spin pulse applications (a hard pulse on 3 targets counts 3).
    pub fn pulse_count(&self) -> usize {
        self.events
            .iter()
            .map(|e| match e {
                PulseEvent::HardPulse { targets, .. } => targets.len(),
                PulseEvent::SoftPulse { .. } => 1,
                _ => 0,
            })
            .sum()
    }
}

/// Compilation statistics and warnings.
#[derive(Debug, Clone)]
pub struct CompilationReport {
    pub total_duration_s: f64,
    pub pulse_count: usize,
    pub swap_count: usize,
    pub refocusing_pulse_count: usize,
    pub warnings: Vec<String>,
}

/// The coupling delay realizing CPhase(phi) on a pair with effective
/// coupling `j_eff`, and the frame z-angle applied to both spins after it.
///
/// The delay satisfies 2 pi J_eff t = -phi (mod 2 pi) with the shortest
/// nonnegative t, so positive couplings give t = (2 pi - phi)/(2 pi J_eff)
/// and negative ones t = phi/(2 pi |J_eff|); at phi = pi both reduce to the
/// antiphase time 1/(2 |J_eff|). The frame angle is minus half the
/// accumulated coupling angle.
pub fn cphase_timing(j_eff: f64, phi: f64) -> (f64, f64) {
    let x = if j_eff > 0.0 { TAU - phi } else { -phi };
    let t = x / (TAU * j_eff);
    (t, -x / 2.0)
}

fn cphase_events(
    system: &SpinSystem,
    i: usize,
    k: usize,
    phi: f64,
) -> Result<(Vec<PulseEvent>, usize)> {
    let n = system.n_spins();
    if i >= n || k >= n || i == k {
        return Err(Error::Compile(format!("bad controlled-phase pair ({i},{k})")));
    }
    let phi = phi.rem_euclid(TAU);
    if phi < 1e-12 || TAU - phi < 1e-12 {
        return Ok((Vec::new(), 0));
    }
    let j_eff = system.couplings.effective(i, k);
    if j_eff == 0.0 {
        return Err(Error::Compile(format!(
            "spins {i} and {k} are not directly coupled; route the gate first"
        )));
    }
    let (t, alpha) = cphase_timing(j_eff, phi);
    let schedule = refocusing_schedule(system, Some((i, k)), t)?;
    let pi_pulses = schedule.pi_pulse_count();
    let mut events = schedule.to_events();
    events.push(PulseEvent::FrameZ { target: i, angle: alpha });
    events.push(PulseEvent::FrameZ { target: k, angle: alpha });
    Ok((events, pi_pulses))
}

/// Compile a controlled-phase gate diag(1,1,1,e^(i phi)) on spins i,k into
/// a refocused coupling delay plus frame z-rotations.
pub fn compile_cphase(system: &SpinSystem, i: usize, k: usize, phi: f64) -> Result<PulseSequence> {
    let (events, _) = cphase_events(system, i, k, phi)?;
    Ok(PulseSequence {
        n_spins: system.n_spins(),
        events,
    })
}

/// Primitive operations after gate lowering.
enum Prim {
    Pulse { target: usize, angle: f64, phase: f64 },
    Frame { target: usize, angle: f64 },
    CPhase { i: usize, k: usize, phi: f64 },
}

struct Lowerer<'a> {
    graph: &'a CouplingGraph,
    prims: Vec<Prim>,
    swap_count: usize,
}

impl Lowerer<'_> {
    fn pulse(&mut self, target: usize, angle: f64, phase: f64) {
        self.prims.push(Prim::Pulse { target, angle, phase });
    }

    fn frame(&mut self, target: usize, angle: f64) {
        self.prims.push(Prim::Frame { target, angle });
    }

    /// Hadamard as Rz(pi) then Ry(pi/2) (equal up to global phase).
    fn hadamard(&mut self, q: usize) {
        self.frame(q, PI);
        self.pulse(q, PI / 2.0, PI / 2.0);
    }

    /// CNOT = Ry_t(-pi/2), CZ, Ry_t(pi/2) in time order.
    fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.pulse(target, -PI / 2.0, PI / 2.0);
        self.cphase(control, target, PI)?;
        self.pulse(target, PI / 2.0, PI / 2.0);
        Ok(())
    }

    fn swap(&mut self, a: usize, b: usize) -> Result<()> {
        self.cnot(a, b)?;
        self.cnot(b, a)?;
        self.cnot(a, b)
    }

    /// Controlled phase with routing: uncoupled pairs are bracketed by a
    /// SWAP chain moving k's qubit next to i, then restored.
    fn cphase(&mut self, i: usize, k: usize, phi: f64) -> Result<()> {
        if self.graph.has_edge(i, k) {
            self.prims.push(Prim::CPhase { i, k, phi });
            return Ok(());
        }
        let chain = route_swaps(self.graph, i, k)?;
        debug_assert!(!chain.is_empty());
        self.swap_count += 2 * chain.len();
        for &(a, b) in &chain {
            self.swap(a, b)?;
        }
        let partner = chain.last().unwrap().0;
        self.prims.push(Prim::CPhase { i, k: partner, phi });
        for &(a, b) in chain.iter().rev() {
            self.swap(a, b)?;
        }
        Ok(())
    }

    /// Standard Toffoli decomposition over CNOT and eighth-turn frame
    /// rotations (T gates up to global phase).
    fn toffoli(&mut self, c1: usize, c2: usize, t: usize) -> Result<()> {
        let q = PI / 4.0;
        self.hadamard(t);
        self.cnot(c2, t)?;
        self.frame(t, -q);
        self.cnot(c1, t)?;
        self.frame(t, q);
        self.cnot(c2, t)?;
        self.frame(t, -q);
        self.cnot(c1, t)?;
        self.frame(c2, q);
        self.frame(t, q);
        self.hadamard(t);
        self.cnot(c1, c2)?;
        self.frame(c1, q);
        self.frame(c2, -q);
        self.cnot(c1, c2)
    }

    fn gate(&mut self, g: &Gate) -> Result<()> {
        match g.kind {
            GateKind::Rx => self.pulse(g.targets[0], g.angle, 0.0),
            GateKind::Ry => self.pulse(g.targets[0], g.angle, PI / 2.0),
            GateKind::Rz => self.frame(g.targets[0], g.angle),
            GateKind::CPhase => self.cphase(g.targets[0], g.targets[1], g.angle)?,
            GateKind::CZ => self.cphase(g.targets[0], g.targets[1], PI)?,
            GateKind::CNot => self.cnot(g.targets[0], g.targets[1])?,
            GateKind::Swap => self.swap(g.targets[0], g.targets[1])?,
            GateKind::Toffoli => self.toffoli(g.targets[0], g.targets[1], g.targets[2])?,
        }
        Ok(())
    }
}

/// Minimum same-species offset separation for spin q, if any.
fn same_species_separation(system: &SpinSystem, q: usize) -> Option<f64> {
    let species = &system.spins[q].nucleus.species;
    system
        .spins
        .iter()
        .enumerate()
        .filter(|(k, s)| *k != q && s.nucleus.species == *species)
        .map(|(_, s)| (s.offset_hz - system.spins[q].offset_hz).abs())
        .min_by(f64::total_cmp)
}

/// Compile a circuit to a pulse sequence plus a report.
pub fn compile_circuit(
    circuit: &Circuit,
    system: &SpinSystem,
) -> Result<(PulseSequence, CompilationReport)> {
    if circuit.n_qubits != system.n_spins() {
        return Err(Error::Compile(format!(
            "circuit has {} qubits, system has {} spins",
            circuit.n_qubits,
            system.n_spins()
        )));
    }
    let graph = coupling_graph(system, 0.0);
    let mut lowerer = Lowerer {
        graph: &graph,
        prims: Vec::new(),
        swap_count: 0,
    };
    for g in &circuit.gates {
        lowerer.gate(g)?;
    }

    let mut warnings = Vec::new();
    let weak = weak_coupling_check(system);
    for p in weak.pairs.iter().filter(|p| !p.pass) {
        warnings.push(format!(
            "weak-coupling check failed for spins {} and {} (ratio {:.3})",
            p.i, p.k, p.ratio
        ));
    }
    for e in selectivity_check(system) {
        match e.status {
            SelectivityStatus::Pass => {}
            SelectivityStatus::Warning => warnings.push(format!(
                "selectivity margin {:.2} between spins {} and {} is below 5",
                e.margin, e.i, e.k
            )),
            SelectivityStatus::Overlap => warnings.push(format!(
                "resonances of spins {} and {} overlap (margin {:.2})",
                e.i, e.k, e.margin
            )),
        }
    }
    let max_j = {
        let mut m = 0.0f64;
        for i in 0..system.n_spins() {
            for k in (i + 1)..system.n_spins() {
                m = m.max(system.couplings.effective(i, k).abs());
            }
        }
        m
    };

    let mut seq = PulseSequence::new(system.n_spins());
    let mut refocusing_pulse_count = 0;
    let mut soft_flagged = false;
    for prim in &lowerer.prims {
        match *prim {
            Prim::Pulse { target, angle, phase } => {
                if let Some(sep) = same_species_separation(system, target) {
                    if sep == 0.0 {
                        return Err(Error::Compile(format!(
                            "spin {target} shares species and offset with a neighbor; \
                             selective excitation is impossible"
                        )));
                    }
                    // Selective pulse at nutation rate matched to the
                    // separation; duration grows with the angle.
                    let duration_s = angle.abs() / (TAU * sep);
                    if max_j > 0.0 && duration_s > 0.1 / max_j && !soft_flagged {
                        warnings.push(format!(
                            "soft pulse duration {duration_s:.4} s exceeds 10% of the \
                             shortest coupling period {:.4} s; coupling evolution during \
                             pulses is neglected",
                            1.0 / max_j
                        ));
                        soft_flagged = true;
                    }
                    seq.events.push(PulseEvent::SoftPulse {
                        target,
                        angle,
                        phase,
                        duration_s,
                    });
                } else {
                    seq.events.push(PulseEvent::HardPulse {
                        targets: vec![target],
                        angle,
                        phase,
                    });
                }
            }
            Prim::Frame { target, angle } => {
                seq.events.push(PulseEvent::FrameZ { target, angle });
            }
            Prim::CPhase { i, k, phi } => {
                let (events, pi_pulses) = cphase_events(system, i, k, phi)?;
                refocusing_pulse_count += pi_pulses;
                seq.events.extend(events);
            }
        }
    }

    let report = CompilationReport {
        total_duration_s: seq.duration_s(),
        pulse_count: seq.pulse_count(),
        swap_count: lowerer.swap_count,
        refocusing_pulse_count,
        warnings,
    };
    Ok((seq, report))
}

/// Remove interior FrameZ events by commuting them rightward into the
/// phases of later pulses on the same spin (a frame rotation by alpha
/// turns a later pulse of phase phi into phi - alpha). Residual frame
/// angles are
/// re-emitted before any Acquire event and at the end of the sequence, so
/// the folded sequence acts identically on any state.
pub fn fold_frame_z(sequence: &PulseSequence) -> PulseSequence {
    let mut acc = vec![0.0f64; sequence.n_spins];
    let mut events = Vec::with_capacity(sequence.events.len());
    let flush = |acc: &mut Vec<f64>, events: &mut Vec<PulseEvent>| {
        for (spin, a) in acc.iter_mut().enumerate() {
            if *a != 0.0 {
                events.push(PulseEvent::FrameZ {
                    target: spin,
                    angle: *a,
                });
                *a = 0.0;
            }
        }
    };
    for e in &sequence.events {
        match e {
            PulseEvent::FrameZ { target, angle } => acc[*target] += angle,
            PulseEvent::HardPulse { targets, angle, phase } => {
                // Targets may carry different accumulated frame angles;
                // split the pulse per spin where needed.
                for &t in targets {
                    events.push(PulseEvent::HardPulse {
                        targets: vec![t],
                        angle: *angle,
                        phase: phase - acc[t],
                    });
                }
            }
            PulseEvent::SoftPulse {
                target,
                angle,
                phase,
                duration_s,
            } => {
                events.push(PulseEvent::SoftPulse {
                    target: *target,
                    angle: *angle,
                    phase: phase - acc[*target],
                    duration_s: *duration_s,
                });
            }
            PulseEvent::Acquire { .. } => {
                flush(&mut acc, &mut events);
                events.push(e.clone());
            }
            // Delays and crushes commute with frame z-rotations.
            PulseEvent::Delay { .. } | PulseEvent::Crush { .. } => events.push(e.clone()),
        }
    }
    flush(&mut acc, &mut events);
    PulseSequence {
        n_spins: sequence.n_spins,
        events,
    }
}

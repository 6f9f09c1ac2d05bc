//! Pulse-sequence execution against the density-matrix engine.

use crate::engine::{relax, DensityMatrix, RelaxationParams};
use crate::error::{Error, Result};
use crate::readout::{acquire_fid, Fid};
use crate::spin_model::{build_hamiltonian, SpinSystem};

use super::{PulseEvent, PulseSequence};

/// Final state plus any FIDs acquired along the way.
#[derive(Debug, Clone)]
pub struct ExecutionOutput {
    pub state: DensityMatrix,
    pub fids: Vec<Fid>,
}

/// Run a pulse sequence on an initial state. With relaxation parameters
/// given, every timed event (delays, soft pulses, acquisitions) also
/// relaxes the state; hard pulses, frame rotations, and crushes are
/// instantaneous.
pub fn execute_sequence(
    initial: &DensityMatrix,
    system: &SpinSystem,
    sequence: &PulseSequence,
    relaxation: Option<&RelaxationParams>,
) -> Result<ExecutionOutput> {
    if sequence.n_spins != system.n_spins() || initial.n_spins() != system.n_spins() {
        return Err(Error::Dimension(format!(
            "sequence/state/system spin counts disagree: {}/{}/{}",
            sequence.n_spins,
            initial.n_spins(),
            system.n_spins()
        )));
    }
    let h = build_hamiltonian(system);
    let mut state = initial.clone();
    let mut fids = Vec::new();
    for event in &sequence.events {
        match event {
            PulseEvent::HardPulse { targets, angle, phase } => {
                state = state.hard_pulse(targets, *angle, *phase)?;
            }
            PulseEvent::SoftPulse {
                target,
                angle,
                phase,
                duration_s,
            } => {
                state = state.soft_pulse(*target, *angle, *phase, *duration_s, relaxation)?;
            }
            PulseEvent::Delay { duration_s } => {
                state = state.evolve(&h, *duration_s)?;
                if let Some(params) = relaxation {
                    state = relax(&state, params, *duration_s)?;
                }
            }
            PulseEvent::FrameZ { target, angle } => {
                state = state.frame_z(*target, *angle)?;
            }
            PulseEvent::Crush { mode } => {
                state = state.gradient_crush(*mode);
            }
            PulseEvent::Acquire { dwell_s, points } => {
                let fid = acquire_fid(&state, system, relaxation, *dwell_s, *points)?;
                // The state keeps evolving while the receiver records.
                let total = *dwell_s * (*points - 1) as f64;
                state = state.evolve(&h, total)?;
                if let Some(params) = relaxation {
                    state = relax(&state, params, total)?;
                }
                fids.push(fid);
            }
        }
    }
    Ok(ExecutionOutput { state, fids })
}

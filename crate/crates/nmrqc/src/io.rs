//! File formats: molecule descriptions (TOML), circuits (line-oriented
//! text), pulse sequences (line-oriented text, lossless round trip), and
//! comma-separated exports for FIDs, spectra, and tables.

use std::path::Path;

use serde::Deserialize;

use crate::compiler::{Circuit, Gate, GateKind, PulseEvent, PulseSequence};
use crate::engine::CrushMode;
use crate::error::{Error, Result};
use crate::readout::{Fid, Spectrum};
use crate::scaling::EpsilonRow;
use crate::spin_model::{CouplingTable, Nucleus, Spin, SpinSystem};

/// A parsed molecule file: the spin system plus optional metadata.
#[derive(Debug, Clone)]
pub struct MoleculeFile {
    pub name: Option<String>,
    pub system: SpinSystem,
    pub temperature_k: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MoleculeToml {
    name: Option<String>,
    field_tesla: f64,
    temperature_k: Option<f64>,
    #[serde(default)]
    spins: Vec<SpinToml>,
    #[serde(default)]
    couplings: Vec<CouplingToml>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpinToml {
    species: String,
    /// Required for species outside the bundled registry.
    gamma: Option<f64>,
    offset_hz: f64,
    t1_s: Option<f64>,
    t2_s: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CouplingToml {
    spins: [usize; 2],
    #[serde(default)]
    j_hz: f64,
    #[serde(default)]
    d_hz: f64,
}

/// Parse a molecule description from TOML text.
pub fn parse_molecule(text: &str) -> Result<MoleculeFile> {
    let raw: MoleculeToml =
        toml::from_str(text).map_err(|e| Error::Parse(format!("molecule file: {e}")))?;
    let mut spins = Vec::with_capacity(raw.spins.len());
    for (i, s) in raw.spins.iter().enumerate() {
        let nucleus = match (Nucleus::registered(&s.species), s.gamma) {
            (_, Some(gamma)) => Nucleus::new(s.species.clone(), gamma)?,
            (Some(n), None) => n,
            (None, None) => {
                return Err(Error::Parse(format!(
                    "spin {i}: unknown species {:?} and no gamma given",
                    s.species
                )))
            }
        };
        let mut spin = Spin::new(nucleus, s.offset_hz);
        match (s.t1_s, s.t2_s) {
            (Some(t1), Some(t2)) => spin = spin.with_relaxation(t1, t2)?,
            (None, None) => {}
            _ => {
                return Err(Error::Parse(format!(
                    "spin {i}: t1_s and t2_s must be given together"
                )))
            }
        }
        spins.push(spin);
    }
    let n = spins.len();
    let mut table = CouplingTable::new(n);
    let mut seen = Vec::new();
    for c in &raw.couplings {
        let [i, k] = c.spins;
        let key = (i.min(k), i.max(k));
        if seen.contains(&key) {
            return Err(Error::Parse(format!(
                "coupling between spins {i} and {k} is listed more than once"
            )));
        }
        seen.push(key);
        table.set_j(i, k, c.j_hz)?;
        table.set_d(i, k, c.d_hz)?;
    }
    let system = SpinSystem::new(spins, table, raw.field_tesla)?;
    Ok(MoleculeFile {
        name: raw.name,
        system,
        temperature_k: raw.temperature_k,
    })
}

pub fn load_molecule(path: &Path) -> Result<MoleculeFile> {
    parse_molecule(&std::fs::read_to_string(path)?)
}

/// Parse a circuit: one gate per line, `KIND targets... [angle]`, with `#`
/// comments. Angles are radians.
pub fn parse_circuit(text: &str, n_qubits: usize) -> Result<Circuit> {
    let mut circuit = Circuit::new(n_qubits);
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        let mut parts = line.split_whitespace();
        let kind_str = parts.next().unwrap();
        let kind = match kind_str.to_ascii_uppercase().as_str() {
            "RX" => GateKind::Rx,
            "RY" => GateKind::Ry,
            "RZ" => GateKind::Rz,
            "CPHASE" => GateKind::CPhase,
            "CNOT" => GateKind::CNot,
            "CZ" => GateKind::CZ,
            "SWAP" => GateKind::Swap,
            "TOFFOLI" => GateKind::Toffoli,
            other => return Err(at(format!("unknown gate kind {other:?}"))),
        };
        let rest: Vec<&str> = parts.collect();
        let expected = kind.arity() + usize::from(kind.takes_angle());
        if rest.len() != expected {
            return Err(at(format!(
                "{kind_str} takes {} arguments, got {}",
                expected,
                rest.len()
            )));
        }
        let targets: Vec<usize> = rest[..kind.arity()]
            .iter()
            .map(|t| {
                t.parse()
                    .map_err(|_| at(format!("bad target index {t:?}")))
            })
            .collect::<Result<_>>()?;
        let angle = if kind.takes_angle() {
            rest[kind.arity()]
                .parse()
                .map_err(|_| at(format!("bad angle {:?}", rest[kind.arity()])))?
        } else {
            0.0
        };
        let gate = Gate::new(kind, targets, angle).map_err(|e| at(e.to_string()))?;
        circuit.push(gate).map_err(|e| at(e.to_string()))?;
    }
    Ok(circuit)
}

pub fn load_circuit(path: &Path, n_qubits: usize) -> Result<Circuit> {
    parse_circuit(&std::fs::read_to_string(path)?, n_qubits)
}

fn join_indices(targets: &[usize]) -> String {
    targets
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Serialize a pulse sequence to its text form. Floating-point fields use
/// the shortest representation that parses back to the same bits, so
/// serialize/parse round trips are lossless.
pub fn serialize_sequence(seq: &PulseSequence) -> String {
    let mut out = format!("nspins={}\n", seq.n_spins);
    for e in &seq.events {
        let line = match e {
            PulseEvent::HardPulse { targets, angle, phase } => {
                format!("hard targets={} angle={angle} phase={phase}", join_indices(targets))
            }
            PulseEvent::SoftPulse {
                target,
                angle,
                phase,
                duration_s,
            } => format!("soft target={target} angle={angle} phase={phase} duration={duration_s}"),
            PulseEvent::Delay { duration_s } => format!("delay duration={duration_s}"),
            PulseEvent::FrameZ { target, angle } => format!("framez target={target} angle={angle}"),
            PulseEvent::Crush { mode } => format!(
                "crush mode={}",
                match mode {
                    CrushMode::Physical => "physical",
                    CrushMode::Ideal => "ideal",
                }
            ),
            PulseEvent::Acquire { dwell_s, points } => {
                format!("acquire dwell={dwell_s} points={points}")
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Parse the text form produced by [`serialize_sequence`].
pub fn parse_sequence(text: &str) -> Result<PulseSequence> {
    let mut lines = text.lines().enumerate().filter_map(|(no, raw)| {
        let line = raw.split('#').next().unwrap().trim();
        (!line.is_empty()).then_some((no + 1, line))
    });
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty pulse sequence file".into()))?;
    let n_spins: usize = header
        .strip_prefix("nspins=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad sequence header {header:?}")))?;

    let mut seq = PulseSequence::new(n_spins);
    for (no, line) in lines {
        let at = |msg: String| Error::Parse(format!("line {no}: {msg}"));
        let mut parts = line.split_whitespace();
        let kind = parts.next().unwrap();
        let mut field = |name: &str| -> Result<String> {
            parts
                .next()
                .and_then(|p| p.strip_prefix(name))
                .and_then(|p| p.strip_prefix('='))
                .map(str::to_string)
                .ok_or_else(|| at(format!("expected field {name}=")))
        };
        let parse_f64 = |v: String| -> Result<f64> {
            v.parse().map_err(|_| at(format!("bad number {v:?}")))
        };
        let event = match kind {
            "hard" => {
                let targets = field("targets")?
                    .split(',')
                    .map(|t| t.parse().map_err(|_| at(format!("bad target {t:?}"))))
                    .collect::<Result<Vec<usize>>>()?;
                let angle = parse_f64(field("angle")?)?;
                let phase = parse_f64(field("phase")?)?;
                PulseEvent::HardPulse { targets, angle, phase }
            }
            "soft" => PulseEvent::SoftPulse {
                target: field("target")?
                    .parse()
                    .map_err(|_| at("bad target".into()))?,
                angle: parse_f64(field("angle")?)?,
                phase: parse_f64(field("phase")?)?,
                duration_s: parse_f64(field("duration")?)?,
            },
            "delay" => PulseEvent::Delay {
                duration_s: parse_f64(field("duration")?)?,
            },
            "framez" => PulseEvent::FrameZ {
                target: field("target")?
                    .parse()
                    .map_err(|_| at("bad target".into()))?,
                angle: parse_f64(field("angle")?)?,
            },
            "crush" => PulseEvent::Crush {
                mode: match field("mode")?.as_str() {
                    "physical" => CrushMode::Physical,
                    "ideal" => CrushMode::Ideal,
                    other => return Err(at(format!("bad crush mode {other:?}"))),
                },
            },
            "acquire" => PulseEvent::Acquire {
                dwell_s: parse_f64(field("dwell")?)?,
                points: field("points")?
                    .parse()
                    .map_err(|_| at("bad point count".into()))?,
            },
            other => return Err(at(format!("unknown event {other:?}"))),
        };
        seq.events.push(event);
    }
    Ok(seq)
}

/// FID as `time_s,real,imag` rows.
pub fn fid_to_csv(fid: &Fid) -> String {
    let mut out = String::from("time_s,real,imag\n");
    for (a, s) in fid.samples.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", a as f64 * fid.dwell_s, s.re, s.im));
    }
    out
}

/// Spectrum as `freq_hz,real,imag` rows.
pub fn spectrum_to_csv(spec: &Spectrum) -> String {
    let mut out = String::from("freq_hz,real,imag\n");
    for (f, s) in spec.frequency_hz.iter().zip(&spec.amplitude) {
        out.push_str(&format!("{f},{},{}\n", s.re, s.im));
    }
    out
}

/// Peak list as readable text.
pub fn peaks_to_text(spec: &Spectrum) -> String {
    let mut out = format!("{} peaks\n", spec.peaks.len());
    for p in &spec.peaks {
        out.push_str(&format!(
            "freq_hz={:.4} amplitude={:.6e} phase_rad={:.4}\n",
            p.frequency_hz, p.amplitude, p.phase_rad
        ));
    }
    out
}

/// Epsilon falloff table as CSV.
pub fn epsilon_table_to_csv(rows: &[EpsilonRow]) -> String {
    let mut out = String::from("n,epsilon_exact,epsilon_hightemp,required_repetitions\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:e},{:e},{:e}\n",
            r.n, r.epsilon_exact, r.epsilon_hightemp, r.required_repetitions
        ));
    }
    out
}

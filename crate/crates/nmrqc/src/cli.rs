//! Command-line pipeline: load a molecule, prepare a state, compile and run
//! a circuit, read out, and report. All outputs are deterministic for a
//! fixed invocation unless a noise seed is requested, in which case the
//! seed is echoed in the report.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compiler::{
    compile_circuit, execute_sequence, gate_rate_report, selectivity_check, CompilationReport,
    SelectivityStatus, DEFAULT_NUTATION_HZ,
};
use crate::constants::GAMMA_H1;
use crate::demos::{builtin_molecule, deutsch_circuit, grover2_circuit, DeutschOracle};
use crate::engine::{CrushMode, DensityMatrix, RelaxationParams};
use crate::error::{Error, Result};
use crate::init::{
    extract_epsilon, polarization_override, prepare_pseudopure_spatial,
    prepare_pseudopure_temporal, thermal_state, ThermalConditions,
};
use crate::io;
use crate::readout::{acquire_fid, read_qubits, spectrum, Fid, ReadoutReport};
use crate::scaling::{scaling_report, USABLE_SPECIES};
use crate::spin_model::{weak_coupling_check, SpinSystem};

#[derive(Parser)]
#[command(name = "nmrqc", about = "Liquid-state NMR quantum computing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit end to end and report the answer.
    Simulate(SimulateArgs),
    /// Compile a circuit to a pulse sequence.
    Compile(CompileArgs),
    /// Excite a prepared state and emit its FID and spectrum.
    Spectrum(SpectrumArgs),
    /// Feasibility arithmetic and per-molecule timing analysis.
    Analyze(AnalyzeArgs),
    /// Run a bundled demonstration algorithm.
    Demo(DemoArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Prep {
    /// Boltzmann equilibrium state.
    Thermal,
    /// Pseudo-pure state by gradient (spatial) averaging.
    Spatial,
    /// Pseudo-pure state by temporal averaging.
    Temporal,
    /// Pseudo-pure state at a chosen epsilon (see --epsilon).
    Override,
    /// Exact pure ground state.
    Pure,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Relaxation {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Crush {
    Physical,
    Ideal,
}

impl From<Crush> for CrushMode {
    fn from(c: Crush) -> CrushMode {
        match c {
            Crush::Physical => CrushMode::Physical,
            Crush::Ideal => CrushMode::Ideal,
        }
    }
}

#[derive(Args)]
struct PrepArgs {
    /// State preparation strategy.
    #[arg(long, value_enum, default_value = "temporal")]
    prep: Prep,
    /// Epsilon for --prep override.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Sample temperature in kelvin (defaults to the molecule file's value,
    /// then 300 K).
    #[arg(long)]
    temperature: Option<f64>,
    /// Gradient crush model for spatial preparation.
    #[arg(long, value_enum, default_value = "physical")]
    crush: Crush,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    molecule: PathBuf,
    #[arg(long)]
    circuit: PathBuf,
    #[command(flatten)]
    prep: PrepArgs,
    /// Apply T1/T2 relaxation during timed events.
    #[arg(long, value_enum, default_value = "off")]
    relaxation: Relaxation,
    /// Directory for the report and compiled sequence files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    molecule: PathBuf,
    #[arg(long)]
    circuit: PathBuf,
    /// Write the compiled pulse sequence here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the compilation report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    molecule: PathBuf,
    /// Pulse sequence to run before acquisition (after preparation).
    #[arg(long, name = "in")]
    sequence: Option<PathBuf>,
    #[command(flatten)]
    prep: PrepArgs,
    #[arg(long, value_enum, default_value = "off")]
    relaxation: Relaxation,
    /// Skip the built-in 90-degree excitation pulse.
    #[arg(long)]
    no_excite: bool,
    /// Sample interval in seconds.
    #[arg(long, default_value_t = 1.0 / 1024.0)]
    dwell: f64,
    #[arg(long, default_value_t = 4096)]
    points: usize,
    /// Additive Gaussian detection noise (standard deviation).
    #[arg(long)]
    noise: Option<f64>,
    /// RNG seed for --noise.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for fid.csv, spectrum.csv, and peaks.txt.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Molecule for timing and selectivity analysis (otherwise only the
    /// general feasibility arithmetic is reported).
    #[arg(long)]
    molecule: Option<PathBuf>,
    #[arg(long, default_value_t = 11.74)]
    field: f64,
    #[arg(long, default_value_t = 300.0)]
    temperature: f64,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    /// Coherence time assumed for the gate budget, seconds.
    #[arg(long, default_value_t = 1.0)]
    t2: f64,
    /// Gate time assumed for the gate budget, seconds.
    #[arg(long, default_value_t = 1e-3)]
    gate_time: f64,
    /// Write the epsilon falloff table as CSV.
    #[arg(long)]
    epsilon_csv: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    /// Demo name: deutsch or grover2.
    name: String,
    #[command(flatten)]
    prep: PrepArgs,
    #[arg(long, value_enum, default_value = "off")]
    relaxation: Relaxation,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Files to write, held back until the whole run has succeeded so failures
/// leave no partial outputs.
struct Outputs {
    stdout: String,
    files: Vec<(PathBuf, String)>,
}

impl Outputs {
    fn new() -> Outputs {
        Outputs {
            stdout: String::new(),
            files: Vec::new(),
        }
    }

    fn file(&mut self, dir: &Option<PathBuf>, name: &str, content: String) {
        if let Some(d) = dir {
            self.files.push((d.join(name), content));
        }
    }

    fn commit(self) -> Result<()> {
        for (path, content) in &self.files {
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, content)?;
        }
        print!("{}", self.stdout);
        Ok(())
    }
}

/// Entry point; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Compile(a) => compile(a),
        Command::Spectrum(a) => run_spectrum(a),
        Command::Analyze(a) => analyze(a),
        Command::Demo(a) => demo(a),
    };
    match result.and_then(Outputs::commit) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn conditions(prep: &PrepArgs, mol_temp: Option<f64>, field: f64) -> Result<ThermalConditions> {
    ThermalConditions::new(prep.temperature.or(mol_temp).unwrap_or(300.0), field)
}

fn prepare(
    system: &SpinSystem,
    prep: &PrepArgs,
    cond: &ThermalConditions,
) -> Result<(DensityMatrix, String)> {
    match prep.prep {
        Prep::Thermal => Ok((thermal_state(system, cond), "thermal".into())),
        Prep::Spatial => {
            let rho = prepare_pseudopure_spatial(system, cond, prep.crush.into())?;
            Ok((rho, "pseudo-pure (spatial)".into()))
        }
        Prep::Temporal => {
            let rho = prepare_pseudopure_temporal(system, cond)?;
            Ok((rho, "pseudo-pure (temporal)".into()))
        }
        Prep::Override => {
            let eps = prep.epsilon.ok_or_else(|| {
                Error::Parse("--prep override needs --epsilon".into())
            })?;
            Ok((
                polarization_override(system, eps)?,
                format!("pseudo-pure (override, epsilon={eps})"),
            ))
        }
        Prep::Pure => Ok((
            DensityMatrix::basis_state(system.n_spins(), 0),
            "pure ground state".into(),
        )),
    }
}

fn relaxation_params(
    system: &SpinSystem,
    relaxation: Relaxation,
    cond: &ThermalConditions,
) -> Option<RelaxationParams> {
    match relaxation {
        Relaxation::On => Some(RelaxationParams::from_system(system, Some(cond.temperature_k))),
        Relaxation::Off => None,
    }
}

fn describe_system(out: &mut String, name: Option<&str>, system: &SpinSystem) {
    if let Some(n) = name {
        let _ = writeln!(out, "molecule: {n}");
    }
    let _ = writeln!(
        out,
        "spins: {}  field: {} T",
        system.n_spins(),
        system.field_tesla
    );
    for (i, s) in system.spins.iter().enumerate() {
        let _ = writeln!(
            out,
            "  spin {i}: {} offset {} Hz ({:.4} MHz absolute)",
            s.nucleus.species,
            s.offset_hz,
            system.absolute_frequency_hz(i) / 1e6
        );
    }
    for i in 0..system.n_spins() {
        for k in (i + 1)..system.n_spins() {
            let j_eff = system.couplings.effective(i, k);
            if j_eff != 0.0 {
                let _ = writeln!(out, "  coupling {i}-{k}: J_eff {j_eff} Hz");
            }
        }
    }
}

fn describe_compilation(out: &mut String, report: &CompilationReport) {
    let _ = writeln!(
        out,
        "compiled: duration {:.6} s, {} pulses ({} refocusing), {} routing swaps",
        report.total_duration_s,
        report.pulse_count,
        report.refocusing_pulse_count,
        report.swap_count
    );
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
}

fn describe_readout(out: &mut String, readout: &ReadoutReport) {
    if readout.no_signal {
        let _ = writeln!(out, "readout: no signal (state is maximally mixed)");
        return;
    }
    if let Some(eps) = readout.epsilon {
        let _ = writeln!(out, "readout epsilon: {eps:.6e}");
    } else {
        let _ = writeln!(out, "readout: state is not pseudo-pure; raw expectations follow");
    }
    for (q, r) in readout.readings.iter().enumerate() {
        match r.rounded {
            Some(v) => {
                let _ = writeln!(out, "  qubit {q}: {v} (analog {:.6})", r.analog);
            }
            None => {
                let _ = writeln!(
                    out,
                    "  qubit {q}: analog {:.6} (non-deterministic ensemble average)",
                    r.analog
                );
            }
        }
    }
}

fn simulate(args: SimulateArgs) -> Result<Outputs> {
    let mol = io::load_molecule(&args.molecule)?;
    let circuit = io::load_circuit(&args.circuit, mol.system.n_spins())?;
    let cond = conditions(&args.prep, mol.temperature_k, mol.system.field_tesla)?;
    let (initial, prep_desc) = prepare(&mol.system, &args.prep, &cond)?;
    let (seq, report) = compile_circuit(&circuit, &mol.system)?;
    let params = relaxation_params(&mol.system, args.relaxation, &cond);
    let exec = execute_sequence(&initial, &mol.system, &seq, params.as_ref())?;
    let readout = read_qubits(&exec.state, &mol.system)?;

    let mut out = Outputs::new();
    describe_system(&mut out.stdout, mol.name.as_deref(), &mol.system);
    let _ = writeln!(out.stdout, "preparation: {prep_desc}");
    if let Ok(eps) = extract_epsilon(&initial) {
        let _ = writeln!(out.stdout, "prepared epsilon: {eps:.6e}");
    }
    describe_compilation(&mut out.stdout, &report);
    describe_readout(&mut out.stdout, &readout);
    let report_text = out.stdout.clone();
    out.file(&args.out_dir, "report.txt", report_text);
    out.file(&args.out_dir, "sequence.pseq", io::serialize_sequence(&seq));
    Ok(out)
}

fn compile(args: CompileArgs) -> Result<Outputs> {
    let mol = io::load_molecule(&args.molecule)?;
    let circuit = io::load_circuit(&args.circuit, mol.system.n_spins())?;
    let (seq, report) = compile_circuit(&circuit, &mol.system)?;

    let mut out = Outputs::new();
    describe_system(&mut out.stdout, mol.name.as_deref(), &mol.system);
    describe_compilation(&mut out.stdout, &report);
    if let Some(path) = &args.out {
        out.files.push((path.clone(), io::serialize_sequence(&seq)));
    }
    if let Some(path) = &args.report {
        let mut text = String::new();
        describe_compilation(&mut text, &report);
        out.files.push((path.clone(), text));
    }
    Ok(out)
}

fn add_noise(fid: &mut Fid, sigma: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in &mut fid.samples {
        // Box-Muller transform of two uniform draws.
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        let r = (-2.0 * u1.ln()).sqrt() * sigma;
        *s += Complex64::new(r * (2.0 * PI * u2).cos(), r * (2.0 * PI * u2).sin());
    }
}

fn run_spectrum(args: SpectrumArgs) -> Result<Outputs> {
    let mol = io::load_molecule(&args.molecule)?;
    let cond = conditions(&args.prep, mol.temperature_k, mol.system.field_tesla)?;
    let (mut state, prep_desc) = prepare(&mol.system, &args.prep, &cond)?;
    let params = relaxation_params(&mol.system, args.relaxation, &cond);
    if let Some(path) = &args.sequence {
        let seq = io::parse_sequence(&std::fs::read_to_string(path)?)?;
        state = execute_sequence(&state, &mol.system, &seq, params.as_ref())?.state;
    }
    if !args.no_excite {
        let all: Vec<usize> = (0..mol.system.n_spins()).collect();
        state = state.hard_pulse(&all, PI / 2.0, 0.0)?;
    }
    let mut fid = acquire_fid(&state, &mol.system, params.as_ref(), args.dwell, args.points)?;
    if let Some(sigma) = args.noise {
        add_noise(&mut fid, sigma, args.seed);
    }
    let spec = spectrum(&fid);

    let mut out = Outputs::new();
    describe_system(&mut out.stdout, mol.name.as_deref(), &mol.system);
    let _ = writeln!(out.stdout, "preparation: {prep_desc}");
    if let Some(sigma) = args.noise {
        let _ = writeln!(out.stdout, "noise: sigma {sigma}, seed {}", args.seed);
    }
    let _ = writeln!(
        out.stdout,
        "acquired {} points at dwell {} s",
        args.points, args.dwell
    );
    out.stdout.push_str(&io::peaks_to_text(&spec));
    out.file(&args.out_dir, "fid.csv", io::fid_to_csv(&fid));
    out.file(&args.out_dir, "spectrum.csv", io::spectrum_to_csv(&spec));
    out.file(&args.out_dir, "peaks.txt", io::peaks_to_text(&spec));
    Ok(out)
}

fn analyze(args: AnalyzeArgs) -> Result<Outputs> {
    let report = scaling_report(
        args.field,
        args.temperature,
        GAMMA_H1,
        args.n_max,
        args.t2,
        args.gate_time,
    )?;
    let mut out = Outputs::new();
    let o = &mut out.stdout;
    let _ = writeln!(o, "operating point: {} T, {} K (1H)", args.field, args.temperature);
    let _ = writeln!(o, "larmor frequency: {:.4} MHz", report.nu_hz / 1e6);
    let _ = writeln!(
        o,
        "zeeman quantum: {:.3} ueV against thermal {:.1} meV",
        report.zeeman_energy_ev * 1e6,
        report.thermal_energy_ev * 1e3
    );
    let _ = writeln!(
        o,
        "critical temperature at this field: {:.4} K",
        report.critical_temperature_k
    );
    let _ = writeln!(
        o,
        "critical field at this temperature: {:.4e} T",
        report.critical_field_tesla
    );
    let _ = writeln!(o, "excess population fraction: {:.4e}", report.excess_fraction);
    let _ = writeln!(
        o,
        "qubit limit: 6 per species x {} species = {}",
        USABLE_SPECIES.len(),
        report.qubit_limit
    );
    let _ = writeln!(
        o,
        "gate budget: T2 {} s / gate {} s = {} gates (T1-based budgets overestimate)",
        report.gate_budget.t2_s, report.gate_budget.gate_time_s, report.gate_budget.gate_count
    );
    let _ = writeln!(o, "epsilon falloff (repetitions column is a 1/epsilon^2 model):");
    let _ = writeln!(o, "  n  epsilon_exact  epsilon_hightemp  repetitions");
    for r in &report.epsilon_table {
        let _ = writeln!(
            o,
            "  {:<2} {:.6e}   {:.6e}    {:.3e}",
            r.n, r.epsilon_exact, r.epsilon_hightemp, r.required_repetitions
        );
    }

    if let Some(path) = &args.molecule {
        let mol = io::load_molecule(path)?;
        describe_system(o, mol.name.as_deref(), &mol.system);
        let weak = weak_coupling_check(&mol.system);
        for p in &weak.pairs {
            let _ = writeln!(
                o,
                "weak coupling {}-{}: ratio {:.3e} {}",
                p.i,
                p.k,
                p.ratio,
                if p.pass { "pass" } else { "FAIL" }
            );
        }
        let rates = gate_rate_report(&mol.system, DEFAULT_NUTATION_HZ);
        let _ = writeln!(
            o,
            "one-qubit rate (heteronuclear): {} Hz",
            rates.one_qubit_hetero_hz
        );
        if let Some(h) = rates.one_qubit_homo_hz {
            let _ = writeln!(o, "one-qubit rate (homonuclear, offset-limited): {h} Hz");
        }
        for (i, k, rate) in &rates.two_qubit {
            let _ = writeln!(
                o,
                "two-qubit rate {i}-{k}: {rate:.3} Hz (gate time {:.4} s)",
                1.0 / rate
            );
        }
        for e in selectivity_check(&mol.system) {
            let status = match e.status {
                SelectivityStatus::Pass => "pass",
                SelectivityStatus::Warning => "WARNING",
                SelectivityStatus::Overlap => "OVERLAP",
            };
            let _ = writeln!(
                o,
                "selectivity {}-{}: margin {:.2} {status}",
                e.i, e.k, e.margin
            );
        }
    }

    if let Some(path) = &args.epsilon_csv {
        out.files
            .push((path.clone(), io::epsilon_table_to_csv(&report.epsilon_table)));
    }
    Ok(out)
}

fn demo(args: DemoArgs) -> Result<Outputs> {
    let system = builtin_molecule();
    let cond = conditions(&args.prep, None, system.field_tesla)?;
    let params = relaxation_params(&system, args.relaxation, &cond);
    let mut out = Outputs::new();

    let run = |circuit, label: &str, out: &mut Outputs| -> Result<ReadoutReport> {
        let (initial, _) = prepare(&system, &args.prep, &cond)?;
        let (seq, _) = compile_circuit(&circuit, &system)?;
        let exec = execute_sequence(&initial, &system, &seq, params.as_ref())?;
        let readout = read_qubits(&exec.state, &system)?;
        let _ = writeln!(out.stdout, "{label}:");
        describe_readout(&mut out.stdout, &readout);
        Ok(readout)
    };

    match args.name.as_str() {
        "deutsch" => {
            let _ = writeln!(
                out.stdout,
                "Deutsch's algorithm: qubit 0 reads 0 for constant oracles, 1 for balanced"
            );
            for oracle in DeutschOracle::all() {
                let r = run(deutsch_circuit(oracle), oracle.name(), &mut out)?;
                let verdict = match r.readings[0].rounded {
                    Some(0) => "constant",
                    Some(1) => "balanced",
                    _ => "ambiguous",
                };
                let _ = writeln!(out.stdout, "  verdict: {verdict}");
            }
        }
        "grover2" => {
            let _ = writeln!(
                out.stdout,
                "Two-qubit Grover search: one iteration, oracle as a bare controlled phase"
            );
            for marked in 0..4 {
                run(
                    grover2_circuit(marked),
                    &format!("marked item {marked:02b}"),
                    &mut out,
                )?;
            }
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown demo {other:?}; available: deutsch, grover2"
            )))
        }
    }
    let report_text = out.stdout.clone();
    out.file(&args.out_dir, "report.txt", report_text);
    Ok(out)
}

//! Nuclei, spin systems, coupling graphs, and the Hamiltonians built from them.
//!
//! The Hamiltonian here is the weak-coupling form: Zeeman offsets plus
//! longitudinal two-spin couplings only. Strong-coupling (flip-flop) terms
//! are deliberately omitted. The full angular dipolar Hamiltonian is also
//! out of scope: in isotropic liquids its average vanishes, and partial
//! alignment is modelled only through the residual coupling `d_hz`, which
//! enters everywhere as the effective coupling J + 2D.

use std::f64::consts::PI;

use crate::constants;
use crate::error::{Error, Result};

/// A nuclear species with its gyromagnetic ratio (rad s^-1 T^-1).
#[derive(Debug, Clone, PartialEq)]
pub struct Nucleus {
    pub species: String,
    pub gamma: f64,
}

impl Nucleus {
    pub fn new(species: impl Into<String>, gamma: f64) -> Result<Nucleus> {
        if !gamma.is_finite() || gamma == 0.0 {
            return Err(Error::Physics(format!(
                "gyromagnetic ratio must be finite and nonzero, got {gamma}"
            )));
        }
        Ok(Nucleus {
            species: species.into(),
            gamma,
        })
    }

    /// Look up one of the five bundled species: H1, C13, N15, F19, P31.
    pub fn registered(species: &str) -> Option<Nucleus> {
        let gamma = match species {
            "H1" => constants::GAMMA_H1,
            "C13" => constants::GAMMA_C13,
            "N15" => constants::GAMMA_N15,
            "F19" => constants::GAMMA_F19,
            "P31" => constants::GAMMA_P31,
            _ => return None,
        };
        Some(Nucleus {
            species: species.to_string(),
            gamma,
        })
    }

    pub fn h1() -> Nucleus {
        Nucleus::registered("H1").unwrap()
    }

    pub fn c13() -> Nucleus {
        Nucleus::registered("C13").unwrap()
    }

    pub fn f19() -> Nucleus {
        Nucleus::registered("F19").unwrap()
    }
}

/// Larmor frequency nu = gamma * B / 2 pi, in Hz.
pub fn larmor_frequency(gamma: f64, field_tesla: f64) -> f64 {
    gamma * field_tesla / (2.0 * PI)
}

/// Per-spin relaxation times. `None` marks a spin as non-relaxing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationTimes {
    pub t1_s: f64,
    pub t2_s: f64,
}

impl RelaxationTimes {
    pub fn new(t1_s: f64, t2_s: f64) -> Result<RelaxationTimes> {
        if !(t1_s > 0.0) || !(t2_s > 0.0) {
            return Err(Error::Physics(format!(
                "relaxation times must be positive, got T1={t1_s}, T2={t2_s}"
            )));
        }
        if t2_s > 2.0 * t1_s {
            return Err(Error::Physics(format!(
                "T2 must not exceed 2*T1, got T1={t1_s}, T2={t2_s}"
            )));
        }
        Ok(RelaxationTimes { t1_s, t2_s })
    }
}

/// One spin-1/2 site: nucleus, rotating-frame offset, relaxation times.
///
/// Offsets are stored in Hz relative to a per-species carrier; the angular
/// frequency entering the Hamiltonian is omega = 2 pi * offset_hz.
#[derive(Debug, Clone)]
pub struct Spin {
    pub nucleus: Nucleus,
    pub offset_hz: f64,
    pub relaxation: Option<RelaxationTimes>,
}

impl Spin {
    pub fn new(nucleus: Nucleus, offset_hz: f64) -> Spin {
        Spin {
            nucleus,
            offset_hz,
            relaxation: None,
        }
    }

    pub fn with_relaxation(mut self, t1_s: f64, t2_s: f64) -> Result<Spin> {
        self.relaxation = Some(RelaxationTimes::new(t1_s, t2_s)?);
        Ok(self)
    }
}

/// Symmetric J/D coupling matrices, Hz. The effective coupling used by the
/// rest of the engine is always J + 2D.
#[derive(Debug, Clone)]
pub struct CouplingTable {
    n: usize,
    j_hz: Vec<f64>,
    d_hz: Vec<f64>,
}

impl CouplingTable {
    pub fn new(n: usize) -> CouplingTable {
        CouplingTable {
            n,
            j_hz: vec![0.0; n * n],
            d_hz: vec![0.0; n * n],
        }
    }

    fn check_pair(&self, i: usize, k: usize) -> Result<()> {
        if i >= self.n || k >= self.n {
            return Err(Error::Dimension(format!(
                "coupling index ({i},{k}) out of range for {} spins",
                self.n
            )));
        }
        if i == k {
            return Err(Error::Physics(format!("self-coupling on spin {i}")));
        }
        Ok(())
    }

    pub fn set_j(&mut self, i: usize, k: usize, j_hz: f64) -> Result<()> {
        self.check_pair(i, k)?;
        self.j_hz[i * self.n + k] = j_hz;
        self.j_hz[k * self.n + i] = j_hz;
        Ok(())
    }

    pub fn set_d(&mut self, i: usize, k: usize, d_hz: f64) -> Result<()> {
        self.check_pair(i, k)?;
        self.d_hz[i * self.n + k] = d_hz;
        self.d_hz[k * self.n + i] = d_hz;
        Ok(())
    }

    pub fn j(&self, i: usize, k: usize) -> f64 {
        self.j_hz[i * self.n + k]
    }

    pub fn d(&self, i: usize, k: usize) -> f64 {
        self.d_hz[i * self.n + k]
    }

    /// Effective coupling J + 2D, Hz.
    pub fn effective(&self, i: usize, k: usize) -> f64 {
        self.j(i, k) + 2.0 * self.d(i, k)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// The molecule: an ordered list of spins, their coupling table, and the
/// static field.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    pub spins: Vec<Spin>,
    pub couplings: CouplingTable,
    pub field_tesla: f64,
}

impl SpinSystem {
    pub fn new(spins: Vec<Spin>, couplings: CouplingTable, field_tesla: f64) -> Result<SpinSystem> {
        if spins.is_empty() {
            return Err(Error::Physics("spin system must contain at least one spin".into()));
        }
        if couplings.len() != spins.len() {
            return Err(Error::Dimension(format!(
                "coupling table is for {} spins but system has {}",
                couplings.len(),
                spins.len()
            )));
        }
        if !(field_tesla >= 0.0) {
            return Err(Error::Physics(format!("field must be >= 0, got {field_tesla}")));
        }
        Ok(SpinSystem {
            spins,
            couplings,
            field_tesla,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.spins.len()
    }

    /// Hilbert-space dimension N = 2^n.
    pub fn dim(&self) -> usize {
        1 << self.n_spins()
    }

    /// Full Larmor frequency of spin `i` in Hz (species carrier, not the
    /// rotating-frame offset). Uses |gamma| so that |0...0> is the ground
    /// state regardless of the precession sense.
    pub fn larmor_hz(&self, i: usize) -> f64 {
        larmor_frequency(self.spins[i].nucleus.gamma.abs(), self.field_tesla)
    }

    /// Absolute resonance frequency of spin `i` in Hz: carrier plus offset.
    pub fn absolute_frequency_hz(&self, i: usize) -> f64 {
        self.larmor_hz(i) + self.spins[i].offset_hz
    }

    /// Magnetic quantum number of spin `i` in basis state `idx`
    /// (+1/2 for |0>, -1/2 for |1>). Spin 0 is the most significant bit.
    pub fn m_quantum(&self, idx: usize, i: usize) -> f64 {
        let n = self.n_spins();
        if (idx >> (n - 1 - i)) & 1 == 0 {
            0.5
        } else {
            -0.5
        }
    }

    /// True if another spin in the system shares this spin's species.
    pub fn has_same_species_neighbor(&self, i: usize) -> bool {
        self.spins
            .iter()
            .enumerate()
            .any(|(k, s)| k != i && s.nucleus.species == self.spins[i].nucleus.species)
    }
}

/// Diagonal n-spin Hamiltonian in rad/s: sum of Zeeman offset terms and
/// longitudinal J + 2D coupling terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    diag: Vec<f64>,
}

impl Hamiltonian {
    pub fn from_diagonal(diag: Vec<f64>) -> Hamiltonian {
        Hamiltonian { diag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Diagonal entries, rad/s.
    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }
}

/// Build the weak-coupling Hamiltonian for the system: the basis state with
/// magnetic quantum numbers m_i has energy
/// sum_i omega_i m_i + sum_{i<k} pi (J_ik + 2 D_ik) 2 m_i m_k (rad/s).
pub fn build_hamiltonian(system: &SpinSystem) -> Hamiltonian {
    let n = system.n_spins();
    let dim = system.dim();
    let mut diag = vec![0.0; dim];
    for (idx, entry) in diag.iter_mut().enumerate() {
        let mut e = 0.0;
        for i in 0..n {
            let mi = system.m_quantum(idx, i);
            e += 2.0 * PI * system.spins[i].offset_hz * mi;
            for k in (i + 1)..n {
                let mk = system.m_quantum(idx, k);
                e += PI * system.couplings.effective(i, k) * 2.0 * mi * mk;
            }
        }
        *entry = e;
    }
    Hamiltonian { diag }
}

/// Zeeman-only Hamiltonian at full Larmor frequencies (rad/s), used for
/// thermal populations. Couplings (Hz) are negligible against Larmor terms
/// (MHz) and are omitted.
pub fn build_zeeman_hamiltonian(system: &SpinSystem) -> Hamiltonian {
    let n = system.n_spins();
    let dim = system.dim();
    let mut diag = vec![0.0; dim];
    for (idx, entry) in diag.iter_mut().enumerate() {
        let mut e = 0.0;
        for i in 0..n {
            // Energy -m * h nu, expressed in rad/s: -m * 2 pi nu.
            e -= 2.0 * PI * system.larmor_hz(i) * system.m_quantum(idx, i);
        }
        *entry = e;
    }
    Hamiltonian { diag }
}

/// Per-pair weak-coupling ratio |2 pi J| / |omega_i - omega_k|.
#[derive(Debug, Clone)]
pub struct WeakCouplingPair {
    pub i: usize,
    pub k: usize,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct WeakCouplingReport {
    pub pairs: Vec<WeakCouplingPair>,
}

impl WeakCouplingReport {
    pub fn all_pass(&self) -> bool {
        self.pairs.iter().all(|p| p.pass)
    }
}

/// Pass threshold for the weak-coupling ratio. Reported, not enforced.
pub const WEAK_COUPLING_RATIO_LIMIT: f64 = 0.1;

/// Check every coupled pair against the weak coupling limit. Frequencies
/// are absolute (carrier + offset), so heteronuclear pairs essentially
/// always pass. Degenerate frequencies with nonzero coupling fail with an
/// infinite ratio.
pub fn weak_coupling_check(system: &SpinSystem) -> WeakCouplingReport {
    let n = system.n_spins();
    let mut pairs = Vec::new();
    for i in 0..n {
        for k in (i + 1)..n {
            let j_eff = system.couplings.effective(i, k);
            let delta =
                (system.absolute_frequency_hz(i) - system.absolute_frequency_hz(k)).abs();
            let ratio = if j_eff == 0.0 {
                0.0
            } else if delta == 0.0 {
                f64::INFINITY
            } else {
                (2.0 * PI * j_eff).abs() / (2.0 * PI * delta)
            };
            pairs.push(WeakCouplingPair {
                i,
                k,
                ratio,
                pass: ratio < WEAK_COUPLING_RATIO_LIMIT,
            });
        }
    }
    WeakCouplingReport { pairs }
}

/// Undirected coupling graph: edge (i,k) present iff |J + 2D| > threshold.
#[derive(Debug, Clone)]
pub struct CouplingGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl CouplingGraph {
    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: usize, k: usize) -> bool {
        self.adj[i].contains(&k)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for &k in &self.adj[i] {
                if i < k {
                    out.push((i, k));
                }
            }
        }
        out
    }
}

/// Build the coupling graph with the given edge threshold in Hz.
pub fn coupling_graph(system: &SpinSystem, threshold_hz: f64) -> CouplingGraph {
    let n = system.n_spins();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for k in (i + 1)..n {
            if system.couplings.effective(i, k).abs() > threshold_hz {
                adj[i].push(k);
                adj[k].push(i);
            }
        }
    }
    CouplingGraph { n, adj }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_spin(offsets: [f64; 2], j: f64, d: f64) -> SpinSystem {
        let spins = vec![
            Spin::new(Nucleus::h1(), offsets[0]),
            Spin::new(Nucleus::h1(), offsets[1]),
        ];
        let mut c = CouplingTable::new(2);
        c.set_j(0, 1, j).unwrap();
        c.set_d(0, 1, d).unwrap();
        SpinSystem::new(spins, c, 11.74).unwrap()
    }

    #[test]
    fn larmor_matches_field_range() {
        let low = larmor_frequency(constants::GAMMA_H1, 2.3);
        let high = larmor_frequency(constants::GAMMA_H1, 21.1);
        assert_relative_eq!(low, 97.94e6, max_relative = 1e-3);
        assert_relative_eq!(high, 898.4e6, max_relative = 1e-3);
        assert_eq!(larmor_frequency(constants::GAMMA_C13, 0.0), 0.0);
    }

    #[test]
    fn hamiltonian_uncoupled_is_zeeman_ladder() {
        let sys = two_spin([100.0, 50.0], 0.0, 0.0);
        let h = build_hamiltonian(&sys);
        let wi = 2.0 * PI * 100.0;
        let ws = 2.0 * PI * 50.0;
        let expect = [
            (wi + ws) / 2.0,
            (wi - ws) / 2.0,
            (-wi + ws) / 2.0,
            (-wi - ws) / 2.0,
        ];
        for (a, b) in h.diagonal().iter().zip(expect.iter()) {
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }

    #[test]
    fn hamiltonian_ground_entry_with_coupling() {
        let sys = two_spin([100.0, 50.0], 10.0, 0.0);
        let h = build_hamiltonian(&sys);
        // |00>: 2 pi (75) + pi * 5
        assert_relative_eq!(h.diagonal()[0], 2.0 * PI * 75.0 + PI * 5.0, max_relative = 1e-14);
    }

    #[test]
    fn effective_coupling_is_j_plus_2d() {
        let sys = two_spin([100.0, 50.0], 1.0, 3.5);
        assert_relative_eq!(sys.couplings.effective(0, 1), 8.0);
        let h = build_hamiltonian(&sys);
        let sys_j8 = two_spin([100.0, 50.0], 8.0, 0.0);
        let h_j8 = build_hamiltonian(&sys_j8);
        for (a, b) in h.diagonal().iter().zip(h_j8.diagonal().iter()) {
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }

    #[test]
    fn hamiltonian_label_swap_conjugates() {
        // Swapping the two spins permutes |01> and |10>.
        let sys = two_spin([100.0, 50.0], 10.0, 0.0);
        let swapped = two_spin([50.0, 100.0], 10.0, 0.0);
        let h = build_hamiltonian(&sys);
        let hs = build_hamiltonian(&swapped);
        assert_relative_eq!(h.diagonal()[0], hs.diagonal()[0]);
        assert_relative_eq!(h.diagonal()[1], hs.diagonal()[2]);
        assert_relative_eq!(h.diagonal()[2], hs.diagonal()[1]);
        assert_relative_eq!(h.diagonal()[3], hs.diagonal()[3]);
    }

    #[test]
    fn weak_coupling_examples() {
        let sys = two_spin([0.0, 1000.0], 10.0, 0.0);
        let rep = weak_coupling_check(&sys);
        assert!(rep.pairs[0].pass);
        assert_relative_eq!(rep.pairs[0].ratio, 0.01, max_relative = 1e-12);

        let uncoupled = two_spin([0.0, 0.0], 0.0, 0.0);
        assert!(weak_coupling_check(&uncoupled).pairs[0].pass);

        let degenerate = two_spin([0.0, 0.0], 5.0, 0.0);
        let rep = weak_coupling_check(&degenerate);
        assert!(!rep.pairs[0].pass);
        assert!(rep.pairs[0].ratio.is_infinite());
    }

    #[test]
    fn coupling_graph_examples() {
        let spins = vec![
            Spin::new(Nucleus::h1(), 0.0),
            Spin::new(Nucleus::h1(), 400.0),
            Spin::new(Nucleus::h1(), 800.0),
        ];
        let mut c = CouplingTable::new(3);
        c.set_j(0, 1, 10.0).unwrap();
        c.set_j(1, 2, 10.0).unwrap();
        let sys = SpinSystem::new(spins, c, 11.74).unwrap();

        let g = coupling_graph(&sys, 1.0);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));

        let empty = coupling_graph(&two_spin([0.0, 100.0], 0.0, 0.0), 0.0);
        assert!(empty.edges().is_empty());

        let complete = coupling_graph(&two_spin([0.0, 100.0], 5.0, 0.0), 0.0);
        assert_eq!(complete.edges(), vec![(0, 1)]);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(Nucleus::new("X", 0.0).is_err());
        assert!(RelaxationTimes::new(1.0, 3.0).is_err());
        assert!(RelaxationTimes::new(-1.0, 0.5).is_err());
        let mut c = CouplingTable::new(2);
        assert!(c.set_j(0, 0, 1.0).is_err());
    }
}

//! Density-matrix state representation and the operations that act on it:
//! unitary evolution under diagonal Hamiltonians, ideal pulses, gradient
//! crushes, relaxation channels, and expectation values.
//!
//! Rotation convention, fixed globally: a pulse of angle theta and phase phi
//! acts as rho -> R rho R^dag with R = exp(-i theta (I_x cos phi + I_y sin phi)).
//! Consequently a (pi/2)_x pulse maps I_z to -I_y.

mod po;
mod relax;

pub use po::{po_decompose, Axis, PoLabel, ProductOperatorExpansion};
pub use relax::{relax, RelaxationParams, SpinRelaxation};

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin_model::Hamiltonian;

pub type CMat = Array2<Complex64>;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Hermitian, unit-trace state of the ensemble-averaged spin system.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    /// Wrap a matrix after validating Hermiticity, unit trace, and
    /// approximate positivity.
    pub fn new(mat: CMat) -> Result<DensityMatrix> {
        let rho = DensityMatrix { mat };
        rho.validate()?;
        Ok(rho)
    }

    /// Maximally mixed state 1/N on n spins.
    pub fn maximally_mixed(n_spins: usize) -> DensityMatrix {
        let dim = 1 << n_spins;
        let mut mat = CMat::zeros((dim, dim));
        for i in 0..dim {
            mat[(i, i)] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        DensityMatrix { mat }
    }

    /// Pure basis state |idx><idx| on n spins.
    pub fn basis_state(n_spins: usize, idx: usize) -> DensityMatrix {
        let dim = 1 << n_spins;
        let mut mat = CMat::zeros((dim, dim));
        mat[(idx, idx)] = C_ONE;
        DensityMatrix { mat }
    }

    /// Pure state |v><v| from an amplitude vector (normalized internally).
    pub fn pure_state(amplitudes: &[Complex64]) -> Result<DensityMatrix> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "state vector length {dim} is not a power of two"
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Physics("zero state vector".into()));
        }
        let mut mat = CMat::zeros((dim, dim));
        for j in 0..dim {
            for k in 0..dim {
                mat[(j, k)] = amplitudes[j] * amplitudes[k].conj() / (norm * norm);
            }
        }
        Ok(DensityMatrix { mat })
    }

    /// Diagonal state from a population vector (must sum to 1).
    pub fn from_populations(pops: &[f64]) -> Result<DensityMatrix> {
        let sum: f64 = pops.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::Physics(format!("populations sum to {sum}, not 1")));
        }
        let dim = pops.len();
        let mut mat = CMat::zeros((dim, dim));
        for (i, &p) in pops.iter().enumerate() {
            mat[(i, i)] = Complex64::new(p, 0.0);
        }
        DensityMatrix::new(mat)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_spins(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    /// Tr(rho^2), a purity measure in [1/N, 1].
    pub fn purity(&self) -> f64 {
        let mut s = 0.0;
        for j in 0..self.dim() {
            for k in 0..self.dim() {
                s += (self.mat[(j, k)] * self.mat[(k, j)]).re;
            }
        }
        s
    }

    /// Check Hermiticity (1e-12), unit trace (1e-12), and positivity
    /// (eigenvalues >= -1e-10, tested via a shifted Cholesky factorization).
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::Dimension(format!("bad dimension {dim}")));
        }
        let mut worst_herm: f64 = 0.0;
        for j in 0..dim {
            for k in j..dim {
                let d = (self.mat[(j, k)] - self.mat[(k, j)].conj()).norm();
                worst_herm = worst_herm.max(d);
            }
        }
        if worst_herm > 1e-12 {
            return Err(Error::Structure {
                what: "density matrix is not Hermitian".into(),
                worst_deviation: worst_herm,
            });
        }
        let tr = self.trace();
        if (tr - C_ONE).norm() > 1e-12 {
            return Err(Error::Structure {
                what: "density matrix trace is not 1".into(),
                worst_deviation: (tr - C_ONE).norm(),
            });
        }
        if !shifted_cholesky_psd(&self.mat, 1e-10) {
            return Err(Error::Structure {
                what: "density matrix has an eigenvalue below -1e-10".into(),
                worst_deviation: f64::NAN,
            });
        }
        Ok(())
    }

    /// Unitary evolution rho -> U rho U^dag with U = exp(-i H t). H is
    /// diagonal, so each element just acquires a phase.
    pub fn evolve(&self, h: &Hamiltonian, t: f64) -> Result<DensityMatrix> {
        if h.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "Hamiltonian dim {} vs state dim {}",
                h.dim(),
                self.dim()
            )));
        }
        if !(t >= 0.0) {
            return Err(Error::Physics(format!("evolution time must be >= 0, got {t}")));
        }
        let e = h.diagonal();
        let mut mat = self.mat.clone();
        for j in 0..self.dim() {
            for k in 0..self.dim() {
                let phase = -(e[j] - e[k]) * t;
                mat[(j, k)] *= Complex64::from_polar(1.0, phase);
            }
        }
        Ok(DensityMatrix { mat })
    }

    /// Conjugate by an arbitrary unitary: rho -> U rho U^dag.
    pub fn transform(&self, u: &CMat) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Dimension("unitary dimension mismatch".into()));
        }
        let ud = u.t().mapv(|z| z.conj());
        let mat = u.dot(&self.mat).dot(&ud);
        Ok(DensityMatrix { mat })
    }

    /// Apply a single-spin operation given by Kraus operators (2x2 blocks)
    /// acting on spin `spin`. Spin 0 is the most significant bit.
    pub fn apply_single_spin_kraus(&self, spin: usize, kraus: &[[[Complex64; 2]; 2]]) -> DensityMatrix {
        let n = self.n_spins();
        assert!(spin < n, "spin index out of range");
        let dim = self.dim();
        let mask = 1usize << (n - 1 - spin);
        let mut out = CMat::zeros((dim, dim));
        for j in 0..dim {
            let ja = usize::from(j & mask != 0);
            for k in 0..dim {
                let kb = usize::from(k & mask != 0);
                let mut acc = C_ZERO;
                for op in kraus {
                    for ap in 0..2 {
                        let jj = (j & !mask) | if ap == 1 { mask } else { 0 };
                        for bp in 0..2 {
                            let kk = (k & !mask) | if bp == 1 { mask } else { 0 };
                            acc += op[ja][ap] * self.mat[(jj, kk)] * op[kb][bp].conj();
                        }
                    }
                }
                out[(j, k)] = acc;
            }
        }
        DensityMatrix { mat: out }
    }

    /// Hard pulse: simultaneous ideal rotation on each target spin, zero
    /// duration.
    pub fn hard_pulse(&self, targets: &[usize], angle: f64, phase: f64) -> Result<DensityMatrix> {
        if targets.is_empty() {
            return Err(Error::Physics("hard pulse needs at least one target".into()));
        }
        let r = rotation_2x2(angle, phase);
        let mut rho = self.clone();
        for &t in targets {
            if t >= self.n_spins() {
                return Err(Error::Dimension(format!("pulse target {t} out of range")));
            }
            rho = rho.apply_single_spin_kraus(t, std::slice::from_ref(&r));
        }
        Ok(rho)
    }

    /// Soft (selective) pulse: ideal rotation on the single target plus
    /// relaxation of all spins over the pulse duration. Coupling and offset
    /// evolution during the pulse is neglected.
    pub fn soft_pulse(
        &self,
        target: usize,
        angle: f64,
        phase: f64,
        duration_s: f64,
        relaxation: Option<&RelaxationParams>,
    ) -> Result<DensityMatrix> {
        if !(duration_s > 0.0) {
            return Err(Error::Physics(format!(
                "soft pulse duration must be > 0, got {duration_s}"
            )));
        }
        let rho = self.hard_pulse(&[target], angle, phase)?;
        match relaxation {
            Some(params) => relax(&rho, params, duration_s),
            None => Ok(rho),
        }
    }

    /// Frame z-rotation exp(-i angle I_z) on one spin (zero duration).
    pub fn frame_z(&self, target: usize, angle: f64) -> Result<DensityMatrix> {
        if target >= self.n_spins() {
            return Err(Error::Dimension(format!("frame-z target {target} out of range")));
        }
        let rz = [
            [Complex64::from_polar(1.0, -angle / 2.0), C_ZERO],
            [C_ZERO, Complex64::from_polar(1.0, angle / 2.0)],
        ];
        Ok(self.apply_single_spin_kraus(target, std::slice::from_ref(&rz)))
    }

    /// Gradient crush. Physical mode zeroes every element with nonzero
    /// coherence order (difference of total m_z between ket and bra); ideal
    /// mode zeroes all off-diagonal elements.
    pub fn gradient_crush(&self, mode: CrushMode) -> DensityMatrix {
        let dim = self.dim();
        let mut mat = self.mat.clone();
        for j in 0..dim {
            for k in 0..dim {
                let kill = match mode {
                    CrushMode::Ideal => j != k,
                    // Coherence order is popcount(k) - popcount(j); spins
                    // are all 1/2 so total m_z differs iff popcounts do.
                    CrushMode::Physical => j.count_ones() != k.count_ones(),
                };
                if kill {
                    mat[(j, k)] = C_ZERO;
                }
            }
        }
        DensityMatrix { mat }
    }

    /// Expectation value Tr(rho O) for an arbitrary operator.
    pub fn expectation(&self, observable: &CMat) -> Result<Complex64> {
        if observable.nrows() != self.dim() || observable.ncols() != self.dim() {
            return Err(Error::Dimension("observable dimension mismatch".into()));
        }
        let mut acc = C_ZERO;
        for j in 0..self.dim() {
            for k in 0..self.dim() {
                acc += self.mat[(j, k)] * observable[(k, j)];
            }
        }
        Ok(acc)
    }

    /// Convex mixture (1-w) self + w other.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if other.dim() != self.dim() {
            return Err(Error::Dimension("mixture dimension mismatch".into()));
        }
        let mat = self.mat.mapv(|z| z * (1.0 - w)) + other.mat.mapv(|z| z * w);
        Ok(DensityMatrix { mat })
    }
}

/// Gradient crush idealization level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrushMode {
    /// Zero all elements with nonzero coherence order (zero-quantum
    /// coherences survive, as for a real B0 gradient pulse).
    Physical,
    /// Zero all off-diagonal elements.
    Ideal,
}

/// 2x2 rotation exp(-i theta (I_x cos phi + I_y sin phi)).
pub fn rotation_2x2(angle: f64, phase: f64) -> [[Complex64; 2]; 2] {
    let c = (angle / 2.0).cos();
    let s = (angle / 2.0).sin();
    let m_i = Complex64::new(0.0, -1.0);
    [
        [Complex64::new(c, 0.0), m_i * s * Complex64::from_polar(1.0, -phase)],
        [m_i * s * Complex64::from_polar(1.0, phase), Complex64::new(c, 0.0)],
    ]
}

/// Embed a 2x2 operator on spin `i` of an n-spin system as a full N x N
/// matrix (identity elsewhere).
pub fn single_spin_operator(n_spins: usize, spin: usize, op: &[[Complex64; 2]; 2]) -> CMat {
    let dim = 1 << n_spins;
    let mask = 1usize << (n_spins - 1 - spin);
    let mut out = CMat::zeros((dim, dim));
    for j in 0..dim {
        let ja = usize::from(j & mask != 0);
        for b in 0..2 {
            let k = (j & !mask) | if b == 1 { mask } else { 0 };
            if op[ja][b] != C_ZERO {
                out[(j, k)] += op[ja][b];
            }
        }
    }
    out
}

/// I_x on one spin, embedded in the full space.
pub fn ix(n_spins: usize, spin: usize) -> CMat {
    let half = Complex64::new(0.5, 0.0);
    single_spin_operator(n_spins, spin, &[[C_ZERO, half], [half, C_ZERO]])
}

/// I_y on one spin.
pub fn iy(n_spins: usize, spin: usize) -> CMat {
    let h = 0.5;
    single_spin_operator(
        n_spins,
        spin,
        &[
            [C_ZERO, Complex64::new(0.0, -h)],
            [Complex64::new(0.0, h), C_ZERO],
        ],
    )
}

/// I_z on one spin.
pub fn iz(n_spins: usize, spin: usize) -> CMat {
    single_spin_operator(
        n_spins,
        spin,
        &[
            [Complex64::new(0.5, 0.0), C_ZERO],
            [C_ZERO, Complex64::new(-0.5, 0.0)],
        ],
    )
}

/// Ladder (raising) operator I_+ = I_x + i I_y on one spin.
pub fn i_plus(n_spins: usize, spin: usize) -> CMat {
    single_spin_operator(n_spins, spin, &[[C_ZERO, C_ONE], [C_ZERO, C_ZERO]])
}

/// PSD test: attempt a Cholesky factorization of m + shift*I. Succeeds iff
/// all eigenvalues are >= -shift (up to rounding).
fn shifted_cholesky_psd(m: &CMat, shift: f64) -> bool {
    let n = m.nrows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] += Complex64::new(shift, 0.0);
    }
    let mut l = CMat::zeros((n, n));
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for p in 0..j {
            d -= l[(j, p)].norm_sqr();
        }
        if d < -1e-14 {
            return false;
        }
        let d = d.max(0.0).sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in (j + 1)..n {
            let mut v = a[(i, j)];
            for p in 0..j {
                v -= l[(i, p)] * l[(j, p)].conj();
            }
            l[(i, j)] = if d > 1e-300 { v / d } else { C_ZERO };
        }
    }
    true
}

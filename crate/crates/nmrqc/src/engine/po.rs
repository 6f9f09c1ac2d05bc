//! Product-operator expansion of density matrices.
//!
//! The basis is the set of tensor products of {E, I_x, I_y, I_z} over the
//! spins, with the conventional 2^(q-1) prefactor for a product involving
//! q non-identity factors (so the two-spin operators read 2IzSz and so on,
//! and the all-identity element is E/2). Under the trace inner product all
//! basis operators share the norm 2^(n-2), so coefficients come straight
//! from trace projections.

use std::collections::BTreeMap;
use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;

use super::{CMat, DensityMatrix};

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One factor of a product-operator label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axis {
    E,
    X,
    Y,
    Z,
}

impl Axis {
    fn matrix(self) -> [[Complex64; 2]; 2] {
        let h = 0.5;
        match self {
            Axis::E => [
                [Complex64::new(1.0, 0.0), C_ZERO],
                [C_ZERO, Complex64::new(1.0, 0.0)],
            ],
            Axis::X => [
                [C_ZERO, Complex64::new(h, 0.0)],
                [Complex64::new(h, 0.0), C_ZERO],
            ],
            Axis::Y => [
                [C_ZERO, Complex64::new(0.0, -h)],
                [Complex64::new(0.0, h), C_ZERO],
            ],
            Axis::Z => [
                [Complex64::new(h, 0.0), C_ZERO],
                [C_ZERO, Complex64::new(-h, 0.0)],
            ],
        }
    }

    fn letter(self) -> char {
        match self {
            Axis::E => 'e',
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

/// A product-operator label: one axis per spin.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PoLabel(pub Vec<Axis>);

impl PoLabel {
    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|a| **a != Axis::E).count()
    }

    /// The basis operator for this label, including the 2^(q-1) prefactor.
    pub fn operator(&self) -> CMat {
        let n = self.0.len();
        let dim = 1 << n;
        let mut out = Array2::from_elem((dim, dim), C_ZERO);
        let factors: Vec<_> = self.0.iter().map(|a| a.matrix()).collect();
        for j in 0..dim {
            for k in 0..dim {
                let mut v = Complex64::new(1.0, 0.0);
                for (i, f) in factors.iter().enumerate() {
                    let jb = (j >> (n - 1 - i)) & 1;
                    let kb = (k >> (n - 1 - i)) & 1;
                    v *= f[jb][kb];
                    if v == C_ZERO {
                        break;
                    }
                }
                out[(j, k)] = v;
            }
        }
        let q = self.weight() as i32;
        let scale = 2f64.powi(q - 1);
        out.mapv_inplace(|z| z * scale);
        out
    }
}

impl fmt::Display for PoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.0 {
            write!(f, "{}", a.letter())?;
        }
        Ok(())
    }
}

/// Real coefficients keyed by product-operator label. Only coefficients
/// with magnitude above 1e-14 are stored (plus the identity term).
#[derive(Debug, Clone)]
pub struct ProductOperatorExpansion {
    pub n_spins: usize,
    pub coefficients: BTreeMap<PoLabel, f64>,
}

impl ProductOperatorExpansion {
    pub fn coefficient(&self, label: &PoLabel) -> f64 {
        self.coefficients.get(label).copied().unwrap_or(0.0)
    }

    /// Coefficient looked up by letter string, e.g. "ze" for I_z on spin 0
    /// of a two-spin system or "zz" for 2IzSz.
    pub fn coefficient_str(&self, letters: &str) -> f64 {
        let axes: Vec<Axis> = letters
            .chars()
            .map(|c| match c {
                'e' => Axis::E,
                'x' => Axis::X,
                'y' => Axis::Y,
                'z' => Axis::Z,
                _ => panic!("bad product-operator letter {c}"),
            })
            .collect();
        self.coefficient(&PoLabel(axes))
    }

    /// Rebuild the matrix from the stored coefficients.
    pub fn reconstruct(&self) -> CMat {
        let dim = 1 << self.n_spins;
        let mut out = Array2::from_elem((dim, dim), C_ZERO);
        for (label, &c) in &self.coefficients {
            out = out + label.operator().mapv(|z| z * c);
        }
        out
    }
}

fn all_labels(n: usize) -> Vec<PoLabel> {
    let axes = [Axis::E, Axis::X, Axis::Y, Axis::Z];
    let mut out = Vec::with_capacity(4usize.pow(n as u32));
    for code in 0..4usize.pow(n as u32) {
        let mut v = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            v.push(axes[c % 4]);
            c /= 4;
        }
        v.reverse();
        out.push(PoLabel(v));
    }
    out
}

/// Expand a density matrix over the product-operator basis by trace
/// projection. Round-trip reconstruction is exact to 1e-10 (tested).
pub fn po_decompose(rho: &DensityMatrix) -> ProductOperatorExpansion {
    let n = rho.n_spins();
    let norm = 2f64.powi(n as i32 - 2);
    let mut coefficients = BTreeMap::new();
    for label in all_labels(n) {
        let op = label.operator();
        let c = rho.expectation(&op).expect("dimension match").re / norm;
        if c.abs() > 1e-14 || label.weight() == 0 {
            coefficients.insert(label, c);
        }
    }
    ProductOperatorExpansion {
        n_spins: n,
        coefficients,
    }
}

use std::collections::HashMap;

use num_complex::Complex64;

use super::{key_to_string, PRUNE_THRESHOLD, STATE_TOL};

/// A pure n-qubit state as a sparse map from basis strings to amplitudes.
///
/// Stored amplitudes always have magnitude at least [`PRUNE_THRESHOLD`];
/// normalized kets satisfy Σ|amplitude|² = 1 within [`STATE_TOL`].
#[derive(Debug, Clone)]
pub struct SparseKet {
    num_qubits: usize,
    amplitudes: HashMap<u64, Complex64>,
}

impl SparseKet {
    /// The basis state |key⟩.
    pub fn basis(num_qubits: usize, key: u64) -> Self {
        let mut amplitudes = HashMap::with_capacity(1);
        amplitudes.insert(key, Complex64::new(1.0, 0.0));
        SparseKet { num_qubits, amplitudes }
    }

    /// Builds a ket from raw terms, pruning tiny amplitudes. Does not
    /// normalize; see [`normalized`](Self::normalized).
    pub fn from_terms(num_qubits: usize, terms: impl IntoIterator<Item = (u64, Complex64)>) -> Self {
        let mut amplitudes: HashMap<u64, Complex64> = HashMap::new();
        for (key, amp) in terms {
            *amplitudes.entry(key).or_insert(Complex64::ZERO) += amp;
        }
        amplitudes.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        SparseKet { num_qubits, amplitudes }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &HashMap<u64, Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, key: u64) -> Complex64 {
        self.amplitudes.get(&key).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn num_terms(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= STATE_TOL
    }

    /// Rescales to unit norm.
    pub fn normalized(mut self) -> Self {
        let norm = self.norm_sqr().sqrt();
        assert!(norm > PRUNE_THRESHOLD, "cannot normalize a null ket");
        for a in self.amplitudes.values_mut() {
            *a /= norm;
        }
        self
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &SparseKet) -> Complex64 {
        // iterate the smaller map
        let (small, large, conj_small) = if self.num_terms() <= other.num_terms() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = Complex64::ZERO;
        for (key, a) in &small.amplitudes {
            let b = large.amplitude(*key);
            acc += if conj_small { a.conj() * b } else { b.conj() * *a };
        }
        acc
    }

    /// |self⟩ ⊗ |other⟩, with self's qubits first.
    pub fn tensor(&self, other: &SparseKet) -> SparseKet {
        let n = self.num_qubits + other.num_qubits;
        let shift = other.num_qubits;
        let mut amplitudes = HashMap::with_capacity(self.num_terms() * other.num_terms());
        for (ka, a) in &self.amplitudes {
            for (kb, b) in &other.amplitudes {
                amplitudes.insert((ka << shift) | kb, a * b);
            }
        }
        SparseKet { num_qubits: n, amplitudes }
    }

    /// Rewrites every basis string through `f`, e.g. to insert marker
    /// qubits or drop deterministic ones. `f` must be injective on the
    /// support.
    pub fn map_keys(&self, new_num_qubits: usize, f: impl Fn(u64) -> u64) -> SparseKet {
        let mut amplitudes = HashMap::with_capacity(self.num_terms());
        for (key, a) in &self.amplitudes {
            let prev = amplitudes.insert(f(*key), *a);
            assert!(prev.is_none(), "key map must be injective on the support");
        }
        SparseKet { num_qubits: new_num_qubits, amplitudes }
    }

    pub fn render(&self) -> String {
        let mut keys: Vec<u64> = self.amplitudes.keys().copied().collect();
        keys.sort_unstable();
        keys.iter()
            .map(|k| format!("({:.4})|{}⟩", self.amplitudes[k], key_to_string(*k, self.num_qubits)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

use num_complex::Complex64;

use super::{bit_at, extract_bits, SparseDensity, SparseKet, PRUNE_THRESHOLD};
use crate::error::StateError;

/// An ensemble of weighted pure states representing Σ wᵢ |ψᵢ⟩⟨ψᵢ|.
///
/// Partial traces split components into at most 2^k branches (k = traced
/// qubits) instead of squaring the support the way the entry-map
/// representation does, so channels composed of traces, projections and
/// injective relabelings stay cheap. The decomposition is not unique and
/// carries no physical meaning; [`to_density`](Self::to_density) is the
/// canonical view.
#[derive(Debug, Clone)]
pub struct Mixture {
    num_qubits: usize,
    components: Vec<(f64, SparseKet)>,
}

impl Mixture {
    pub fn pure(ket: SparseKet) -> Self {
        Mixture { num_qubits: ket.num_qubits(), components: vec![(1.0, ket)] }
    }

    pub fn from_components(num_qubits: usize, components: Vec<(f64, SparseKet)>) -> Self {
        assert!(components.iter().all(|(_, k)| k.num_qubits() == num_qubits));
        Mixture { num_qubits, components }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn components(&self) -> &[(f64, SparseKet)] {
        &self.components
    }

    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|(w, _)| w).sum()
    }

    pub fn to_density(&self) -> SparseDensity {
        let parts: Vec<(f64, SparseDensity)> = self
            .components
            .iter()
            .map(|(w, k)| (*w, SparseDensity::from_ket(k)))
            .collect();
        SparseDensity::mix(&parts)
    }

    /// self ⊗ other, with self's qubits first.
    pub fn tensor(&self, other: &Mixture) -> Mixture {
        let mut components = Vec::with_capacity(self.components.len() * other.components.len());
        for (wa, ka) in &self.components {
            for (wb, kb) in &other.components {
                components.push((wa * wb, ka.tensor(kb)));
            }
        }
        Mixture { num_qubits: self.num_qubits + other.num_qubits, components }
    }

    /// Appends a pure ket to every component.
    pub fn tensor_ket(&self, ket: &SparseKet) -> Mixture {
        let components = self
            .components
            .iter()
            .map(|(w, k)| (*w, k.tensor(ket)))
            .collect();
        Mixture { num_qubits: self.num_qubits + ket.num_qubits(), components }
    }

    /// Relabels every basis string; `f` must be injective per component.
    pub fn map_keys(&self, new_num_qubits: usize, f: impl Fn(u64) -> u64 + Copy) -> Mixture {
        let components = self
            .components
            .iter()
            .map(|(w, k)| (*w, k.map_keys(new_num_qubits, f)))
            .collect();
        Mixture { num_qubits: new_num_qubits, components }
    }

    /// Partial trace over the given (strictly increasing, 1-based)
    /// positions. Each component splits into one branch per observed bit
    /// pattern on the traced positions, weighted by the branch norm.
    pub fn partial_trace_multi(&self, positions: &[usize]) -> Result<Mixture, StateError> {
        self.check_positions(positions)?;
        if positions.is_empty() {
            return Ok(self.clone());
        }
        let n = self.num_qubits;
        let keep: Vec<usize> = (1..=n).filter(|p| !positions.contains(p)).collect();
        let mut components = Vec::new();
        for (w, ket) in &self.components {
            let mut branches: std::collections::HashMap<u64, Vec<(u64, Complex64)>> =
                std::collections::HashMap::new();
            for (key, amp) in ket.amplitudes() {
                branches
                    .entry(extract_bits(*key, positions, n))
                    .or_default()
                    .push((extract_bits(*key, &keep, n), *amp));
            }
            let mut ordered: Vec<_> = branches.into_iter().collect();
            ordered.sort_by_key(|(pattern, _)| *pattern);
            for (_, terms) in ordered {
                let branch = SparseKet::from_terms(keep.len(), terms);
                let p = branch.norm_sqr();
                if p >= PRUNE_THRESHOLD {
                    components.push((w * p, branch.normalized()));
                }
            }
        }
        Ok(Mixture { num_qubits: keep.len(), components })
    }

    /// Probability that qubit `i` reads 0 / 1.
    pub fn bit_probabilities(&self, i: usize) -> Result<(f64, f64), StateError> {
        self.check_positions(&[i])?;
        let total = self.total_weight();
        let mut p1 = 0.0;
        for (w, ket) in &self.components {
            for (key, amp) in ket.amplitudes() {
                if bit_at(*key, i, self.num_qubits) == 1 {
                    p1 += w * amp.norm_sqr();
                }
            }
        }
        Ok((total - p1, p1))
    }

    /// Projects qubit `i` onto `outcome` and renormalizes. The outcome
    /// probability must be positive.
    pub fn collapse_bit(&self, i: usize, outcome: u8) -> Result<Mixture, StateError> {
        self.check_positions(&[i])?;
        let n = self.num_qubits;
        let mut components = Vec::with_capacity(self.components.len());
        let mut kept = 0.0;
        for (w, ket) in &self.components {
            let terms: Vec<(u64, Complex64)> = ket
                .amplitudes()
                .iter()
                .filter(|(key, _)| bit_at(**key, i, n) == outcome)
                .map(|(key, amp)| (*key, *amp))
                .collect();
            if terms.is_empty() {
                continue;
            }
            let branch = SparseKet::from_terms(n, terms);
            let p = branch.norm_sqr();
            if p >= PRUNE_THRESHOLD {
                kept += w * p;
                components.push((w * p, branch.normalized()));
            }
        }
        if kept < PRUNE_THRESHOLD {
            return Err(StateError::ProbabilityUnderflow(kept));
        }
        for (w, _) in &mut components {
            *w /= kept;
        }
        Ok(Mixture { num_qubits: n, components })
    }

    fn check_positions(&self, positions: &[usize]) -> Result<(), StateError> {
        for (j, &p) in positions.iter().enumerate() {
            if p == 0 || p > self.num_qubits {
                return Err(StateError::IndexOutOfRange {
                    index: p,
                    num_qubits: self.num_qubits,
                });
            }
            if positions[..j].contains(&p) {
                return Err(StateError::DuplicateIndex(p));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::string_to_key;

    fn bell_mixture() -> Mixture {
        let ket = SparseKet::from_terms(
            2,
            [
                (string_to_key("00"), Complex64::new(1.0, 0.0)),
                (string_to_key("11"), Complex64::new(1.0, 0.0)),
            ],
        )
        .normalized();
        Mixture::pure(ket)
    }

    #[test]
    fn matches_density_partial_trace() {
        let m = bell_mixture();
        let traced = m.partial_trace_multi(&[1]).unwrap();
        let rho = m.to_density().partial_trace(1).unwrap();
        assert!(traced.to_density().trace_distance(&rho).unwrap() < 1e-12);
        assert_eq!(traced.components().len(), 2);
    }

    #[test]
    fn collapse_and_probabilities() {
        let m = bell_mixture();
        let (p0, p1) = m.bit_probabilities(1).unwrap();
        assert!((p0 - 0.5).abs() < 1e-12 && (p1 - 0.5).abs() < 1e-12);
        let collapsed = m.collapse_bit(1, 0).unwrap();
        let expected = SparseDensity::basis(2, string_to_key("00"));
        assert!(collapsed.to_density().trace_distance(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn weight_is_preserved_by_tracing() {
        let m = bell_mixture().tensor(&Mixture::pure(SparseKet::basis(1, 1)));
        let traced = m.partial_trace_multi(&[1, 3]).unwrap();
        assert!((traced.total_weight() - 1.0).abs() < 1e-12);
    }
}

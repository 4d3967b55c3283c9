use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{extract_bits, SparseKet, PRUNE_THRESHOLD, STATE_TOL};
use crate::error::StateError;

/// A mixed n-qubit state as a sparse map from (ket string, bra string)
/// pairs to matrix entries τ_{x,y}.
#[derive(Debug, Clone)]
pub struct SparseDensity {
    num_qubits: usize,
    entries: HashMap<(u64, u64), Complex64>,
}

/// Outcome of a computational-basis measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    /// Measured qubit positions, 1-based.
    pub positions: Vec<usize>,
    /// One bit per measured position.
    pub outcomes: Vec<u8>,
    /// Born-rule probability of this outcome.
    pub probability: f64,
    /// Seed the sampler was handed (consulted only for genuinely random
    /// branches).
    pub rng_seed_used: u64,
}

impl SparseDensity {
    pub fn basis(num_qubits: usize, key: u64) -> Self {
        let mut entries = HashMap::with_capacity(1);
        entries.insert((key, key), Complex64::new(1.0, 0.0));
        SparseDensity { num_qubits, entries }
    }

    /// |ψ⟩⟨ψ| for a normalized ket.
    pub fn from_ket(ket: &SparseKet) -> Self {
        let mut entries = HashMap::with_capacity(ket.num_terms() * ket.num_terms());
        for (x, a) in ket.amplitudes() {
            for (y, b) in ket.amplitudes() {
                let v = a * b.conj();
                if v.norm() >= PRUNE_THRESHOLD {
                    entries.insert((*x, *y), v);
                }
            }
        }
        SparseDensity { num_qubits: ket.num_qubits(), entries }
    }

    pub fn from_entries(
        num_qubits: usize,
        entries: impl IntoIterator<Item = ((u64, u64), Complex64)>,
    ) -> Self {
        let mut map: HashMap<(u64, u64), Complex64> = HashMap::new();
        for (k, v) in entries {
            *map.entry(k).or_insert(Complex64::ZERO) += v;
        }
        map.retain(|_, v| v.norm() >= PRUNE_THRESHOLD);
        SparseDensity { num_qubits, entries: map }
    }

    /// Convex combination Σ wᵢ ρᵢ.
    pub fn mix(parts: &[(f64, SparseDensity)]) -> Self {
        assert!(!parts.is_empty());
        let n = parts[0].1.num_qubits;
        let mut entries: HashMap<(u64, u64), Complex64> = HashMap::new();
        for (w, rho) in parts {
            assert_eq!(rho.num_qubits, n);
            for (k, v) in &rho.entries {
                *entries.entry(*k).or_insert(Complex64::ZERO) += w * v;
            }
        }
        entries.retain(|_, v| v.norm() >= PRUNE_THRESHOLD);
        SparseDensity { num_qubits: n, entries }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn entries(&self) -> &HashMap<(u64, u64), Complex64> {
        &self.entries
    }

    pub fn entry(&self, x: u64, y: u64) -> Complex64 {
        self.entries.get(&(x, y)).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .filter(|((x, y), _)| x == y)
            .map(|(_, v)| v.re)
            .sum()
    }

    /// Tr(ρ²), 1 for pure states.
    pub fn purity(&self) -> f64 {
        // Tr(ρρ) with ρ Hermitian: Σ |ρ_{xy}|²
        self.entries.values().map(|v| v.norm_sqr()).sum()
    }

    /// ρ ⊗ other, with self's qubits first.
    pub fn tensor(&self, other: &SparseDensity) -> SparseDensity {
        let n = self.num_qubits + other.num_qubits;
        let shift = other.num_qubits;
        let mut entries = HashMap::with_capacity(self.entries.len() * other.entries.len());
        for ((xa, ya), a) in &self.entries {
            for ((xb, yb), b) in &other.entries {
                let v = a * b;
                if v.norm() >= PRUNE_THRESHOLD {
                    entries.insert(((xa << shift) | xb, (ya << shift) | yb), v);
                }
            }
        }
        SparseDensity { num_qubits: n, entries }
    }

    /// Rewrites ket and bra strings through an injective key map.
    pub fn map_keys(&self, new_num_qubits: usize, f: impl Fn(u64) -> u64) -> SparseDensity {
        let mut entries = HashMap::with_capacity(self.entries.len());
        for ((x, y), v) in &self.entries {
            let prev = entries.insert((f(*x), f(*y)), *v);
            assert!(prev.is_none(), "key map must be injective on the support");
        }
        SparseDensity { num_qubits: new_num_qubits, entries }
    }

    /// Partial trace over qubit `i` (1-based): entries with x_i ≠ y_i drop,
    /// matching entries merge; remaining positions keep their order.
    pub fn partial_trace(&self, i: usize) -> Result<SparseDensity, StateError> {
        self.partial_trace_multi(&[i])
    }

    /// Partial trace over several positions at once. Positions must be
    /// strictly increasing. Equals the composition of single partial traces
    /// applied right-to-left with index renormalization.
    pub fn partial_trace_multi(&self, positions: &[usize]) -> Result<SparseDensity, StateError> {
        self.check_positions(positions)?;
        if positions.is_empty() {
            return Ok(self.clone());
        }
        let n = self.num_qubits;
        let keep: Vec<usize> = (1..=n).filter(|p| !positions.contains(p)).collect();
        let mut entries: HashMap<(u64, u64), Complex64> =
            HashMap::with_capacity(self.entries.len());
        for ((x, y), v) in &self.entries {
            if extract_bits(*x, positions, n) != extract_bits(*y, positions, n) {
                continue;
            }
            let key = (extract_bits(*x, &keep, n), extract_bits(*y, &keep, n));
            *entries.entry(key).or_insert(Complex64::ZERO) += v;
        }
        entries.retain(|_, v| v.norm() >= PRUNE_THRESHOLD);
        Ok(SparseDensity { num_qubits: keep.len(), entries })
    }

    /// Marginal state of the listed positions, in the listed (increasing)
    /// order: the partial trace over everything else.
    pub fn keep_positions(&self, positions: &[usize]) -> Result<SparseDensity, StateError> {
        let drop: Vec<usize> = (1..=self.num_qubits)
            .filter(|p| !positions.contains(p))
            .collect();
        self.partial_trace_multi(&drop)
    }

    /// Born-rule measurement of the given qubits in the computational
    /// basis. Deterministic branches (probability ≥ 1 − tol) short-circuit
    /// without consulting the RNG.
    pub fn measure_computational(
        &self,
        positions: &[usize],
        seed: u64,
    ) -> Result<(MeasurementRecord, SparseDensity), StateError> {
        self.check_positions(positions)?;
        let n = self.num_qubits;

        // outcome distribution from the diagonal
        let mut probs: HashMap<u64, f64> = HashMap::new();
        for ((x, y), v) in &self.entries {
            if x == y {
                *probs.entry(extract_bits(*x, positions, n)).or_insert(0.0) += v.re;
            }
        }
        let total: f64 = probs.values().sum();
        if total < STATE_TOL {
            return Err(StateError::ProbabilityUnderflow(total));
        }

        let mut outcomes: Vec<(u64, f64)> =
            probs.into_iter().map(|(k, p)| (k, p / total)).collect();
        outcomes.sort_by_key(|(k, _)| *k);

        let (best_key, best_p) = outcomes
            .iter()
            .copied()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one outcome");
        let picked = if best_p >= 1.0 - STATE_TOL {
            (best_key, best_p)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut draw: f64 = rng.gen();
            let mut chosen = outcomes[outcomes.len() - 1];
            for &(k, p) in &outcomes {
                if draw < p {
                    chosen = (k, p);
                    break;
                }
                draw -= p;
            }
            chosen
        };

        // project and renormalize
        let (key, prob) = picked;
        let mut entries: HashMap<(u64, u64), Complex64> = HashMap::new();
        for ((x, y), v) in &self.entries {
            if extract_bits(*x, positions, n) == key && extract_bits(*y, positions, n) == key {
                entries.insert((*x, *y), v / prob);
            }
        }
        entries.retain(|_, v| v.norm() >= PRUNE_THRESHOLD);

        let record = MeasurementRecord {
            positions: positions.to_vec(),
            outcomes: (0..positions.len())
                .map(|j| ((key >> (positions.len() - 1 - j)) & 1) as u8)
                .collect(),
            probability: prob,
            rng_seed_used: seed,
        };
        Ok((record, SparseDensity { num_qubits: n, entries }))
    }

    /// (1/2)‖self − other‖₁ on the jointly spanned subspace.
    pub fn trace_distance(&self, other: &SparseDensity) -> Result<f64, StateError> {
        if self.num_qubits != other.num_qubits {
            return Err(StateError::DimensionMismatch(self.num_qubits, other.num_qubits));
        }
        let mut support: Vec<u64> = self
            .entries
            .keys()
            .chain(other.entries.keys())
            .flat_map(|(x, y)| [*x, *y])
            .collect();
        support.sort_unstable();
        support.dedup();
        let dim = support.len();
        let index: HashMap<u64, usize> =
            support.iter().enumerate().map(|(i, k)| (*k, i)).collect();

        let mut diff = DMatrix::<Complex64>::zeros(dim, dim);
        for ((x, y), v) in &self.entries {
            diff[(index[x], index[y])] += v;
        }
        for ((x, y), v) in &other.entries {
            diff[(index[x], index[y])] -= v;
        }
        let eigs = hermitian_eigenvalues(&diff);
        Ok(eigs.iter().map(|l| l.abs()).sum::<f64>() / 2.0)
    }

    /// Checks trace, Hermiticity and positive semidefiniteness of the dense
    /// restriction to the spanned subspace.
    pub fn validate(&self, tol: f64) -> Result<(), String> {
        let tr = self.trace();
        if (tr - 1.0).abs() > tol {
            return Err(format!("trace {tr} deviates from 1"));
        }
        for ((x, y), v) in &self.entries {
            let conj = self.entry(*y, *x).conj();
            if (v - conj).norm() > tol {
                return Err(format!("entry ({x},{y}) not Hermitian: {v} vs {conj}"));
            }
        }
        let min = self
            .hermitian_spectrum()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -tol {
            return Err(format!("negative eigenvalue {min}"));
        }
        Ok(())
    }

    /// Eigenvalues of the dense restriction to the spanned subspace.
    pub fn hermitian_spectrum(&self) -> Vec<f64> {
        let mut support: Vec<u64> = self.entries.keys().flat_map(|(x, y)| [*x, *y]).collect();
        support.sort_unstable();
        support.dedup();
        let dim = support.len();
        if dim == 0 {
            return Vec::new();
        }
        let index: HashMap<u64, usize> =
            support.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for ((x, y), v) in &self.entries {
            m[(index[x], index[y])] = *v;
        }
        hermitian_eigenvalues(&m)
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

/// Eigenvalues of a Hermitian complex matrix via the real symmetric
/// embedding [[A, −B], [B, A]] of H = A + iB, whose spectrum is that of H
/// with every eigenvalue doubled.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    let mut r = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = m[(i, j)];
            r[(i, j)] = v.re;
            r[(i + n, j + n)] = v.re;
            r[(i, j + n)] = -v.im;
            r[(i + n, j)] = v.im;
        }
    }
    let mut eigs: Vec<f64> = r.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(f64::total_cmp);
    // each eigenvalue of H appears twice; keep one per pair
    eigs.into_iter().step_by(2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::string_to_key;

    fn bell() -> SparseDensity {
        let ket = SparseKet::from_terms(
            2,
            [
                (string_to_key("00"), Complex64::new(1.0, 0.0)),
                (string_to_key("11"), Complex64::new(1.0, 0.0)),
            ],
        )
        .normalized();
        SparseDensity::from_ket(&ket)
    }

    #[test]
    fn tensor_products() {
        let zero = SparseDensity::basis(1, 0);
        let one = SparseDensity::basis(1, 1);
        let prod = zero.tensor(&one);
        assert_eq!(prod.entry(string_to_key("01"), string_to_key("01")).re, 1.0);
        assert!((prod.trace() - 1.0).abs() < 1e-15);

        let b = bell();
        let ext = b.tensor(&zero);
        assert_eq!(ext.num_qubits(), 3);
        assert!((ext.entry(string_to_key("000"), string_to_key("110")).re - 0.5).abs() < 1e-12);
        assert!((ext.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_product_state() {
        let rho = SparseDensity::basis(2, string_to_key("01"));
        let reduced = rho.partial_trace(1).unwrap();
        assert_eq!(reduced.num_qubits(), 1);
        assert_eq!(reduced.entry(1, 1).re, 1.0);
    }

    #[test]
    fn partial_trace_bell_is_maximally_mixed() {
        let reduced = bell().partial_trace(1).unwrap();
        assert!((reduced.entry(0, 0).re - 0.5).abs() < 1e-12);
        assert!((reduced.entry(1, 1).re - 0.5).abs() < 1e-12);
        assert_eq!(reduced.entry(0, 1).norm(), 0.0);
        assert!((reduced.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_out_of_range() {
        let rho = SparseDensity::basis(2, 0);
        assert!(matches!(
            rho.partial_trace(3),
            Err(StateError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn measurement_deterministic() {
        let rho = SparseDensity::basis(1, 0);
        let (record, post) = rho.measure_computational(&[1], 42).unwrap();
        assert_eq!(record.outcomes, vec![0]);
        assert!((record.probability - 1.0).abs() < 1e-12);
        assert!((post.entry(0, 0).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_unbiased_coin() {
        let mixed = SparseDensity::mix(&[
            (0.5, SparseDensity::basis(1, 0)),
            (0.5, SparseDensity::basis(1, 1)),
        ]);
        let mut counts = [0u32; 2];
        for seed in 0..200 {
            let (record, _) = mixed.measure_computational(&[1], seed).unwrap();
            assert!((record.probability - 0.5).abs() < 1e-12);
            counts[record.outcomes[0] as usize] += 1;
        }
        assert!(counts[0] > 50 && counts[1] > 50);
    }

    #[test]
    fn measurement_collapses_bell() {
        let (record, post) = bell().measure_computational(&[1], 7).unwrap();
        assert!((record.probability - 0.5).abs() < 1e-12);
        let expected = match record.outcomes[0] {
            0 => SparseDensity::basis(2, string_to_key("00")),
            _ => SparseDensity::basis(2, string_to_key("11")),
        };
        assert!(post.trace_distance(&expected).unwrap() < 1e-10);
    }

    #[test]
    fn trace_distances() {
        let zero = SparseDensity::basis(1, 0);
        let one = SparseDensity::basis(1, 1);
        assert!(zero.trace_distance(&zero).unwrap() < 1e-12);
        assert!((zero.trace_distance(&one).unwrap() - 1.0).abs() < 1e-12);

        let plus = SparseKet::from_terms(
            1,
            [(0u64, Complex64::new(1.0, 0.0)), (1u64, Complex64::new(1.0, 0.0))],
        )
        .normalized();
        let plus = SparseDensity::from_ket(&plus);
        // closed form for two pure qubit states: sqrt(1 - |<a|b>|^2)
        let expected = std::f64::consts::FRAC_1_SQRT_2;
        assert!((zero.trace_distance(&plus).unwrap() - expected).abs() < 1e-10);

        assert!(matches!(
            zero.trace_distance(&bell()),
            Err(StateError::DimensionMismatch(1, 2))
        ));
    }

    #[test]
    fn validation() {
        assert!(bell().validate(1e-10).is_ok());
        let bogus = SparseDensity::from_entries(
            1,
            [((0u64, 0u64), Complex64::new(2.0, 0.0))],
        );
        assert!(bogus.validate(1e-10).is_err());
    }
}

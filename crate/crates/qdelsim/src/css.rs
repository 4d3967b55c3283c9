//! The quantum Reed-Solomon code: CSS coset-superposition encoder, code
//! projector and numerically constructed erasure recovery.
//!
//! A logical basis state |x⟩ encodes as the uniform superposition over the
//! x-th coset of D⊥ in C, each field symbol laid out as E qubits. Block
//! erasures (erased blocks replaced by |0^E⟩) are undone by a recovery
//! channel assembled from the Knill-Laflamme prescription: diagonalize the
//! error-overlap matrix, polar-decompose each resulting error branch on the
//! code space, and invert the isometric factors. Recoveries are cached per
//! erased-block set.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{CodeError, QrsError};
use crate::field::{FieldElement, FieldSpec};
use crate::reed_solomon::{coset_representatives, RSCodePair};
use crate::state::{Mixture, SparseDensity, SparseKet, PRUNE_THRESHOLD};

/// Eigenvalues of the error-overlap matrix below this are treated as zero.
const EIGENVALUE_CUTOFF: f64 = 1e-10;
/// Knill-Laflamme residual above this signals a construction bug.
const KL_RESIDUAL_TOL: f64 = 1e-8;
/// Weight allowed to leak outside the reachable subspace during decoding.
const DECODE_LEAK_TOL: f64 = 1e-8;
/// Largest enumerable code space (basis strings of C).
const MAX_CODE_SPACE: u128 = 1 << 20;

/// Packs a symbol word into an NE-bit basis key, leftmost symbol first,
/// each symbol big-endian over its E qubits.
pub fn word_to_key(word: &[FieldElement], spec: &FieldSpec) -> u64 {
    word.iter()
        .fold(0u64, |key, s| (key << spec.extension_degree()) | s.value() as u64)
}

/// A sparse real operator on basis strings, used for the code projector.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    num_qubits: usize,
    entries: HashMap<(u64, u64), f64>,
}

impl SparseOperator {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn entries(&self) -> &HashMap<(u64, u64), f64> {
        &self.entries
    }

    pub fn entry(&self, x: u64, y: u64) -> f64 {
        self.entries.get(&(x, y)).copied().unwrap_or(0.0)
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .filter(|((x, y), _)| x == y)
            .map(|(_, v)| v)
            .sum()
    }

    pub fn apply_ket(&self, ket: &SparseKet) -> SparseKet {
        let mut terms: HashMap<u64, Complex64> = HashMap::new();
        for ((x, y), v) in &self.entries {
            let a = ket.amplitude(*y);
            if a.norm() >= PRUNE_THRESHOLD {
                *terms.entry(*x).or_insert(Complex64::ZERO) += a * v;
            }
        }
        SparseKet::from_terms(ket.num_qubits(), terms)
    }

    /// self · other.
    pub fn compose(&self, other: &SparseOperator) -> SparseOperator {
        let mut by_row: HashMap<u64, Vec<(u64, f64)>> = HashMap::new();
        for ((x, y), v) in &other.entries {
            by_row.entry(*x).or_default().push((*y, *v));
        }
        let mut entries: HashMap<(u64, u64), f64> = HashMap::new();
        for ((x, y), v) in &self.entries {
            if let Some(row) = by_row.get(y) {
                for (z, w) in row {
                    *entries.entry((*x, *z)).or_insert(0.0) += v * w;
                }
            }
        }
        entries.retain(|_, v| v.abs() >= PRUNE_THRESHOLD);
        SparseOperator { num_qubits: self.num_qubits, entries }
    }
}

/// One Kraus operator of an erasure recovery: a linear map from damaged
/// NE-qubit basis strings to vectors over the logical basis.
#[derive(Debug, Clone)]
pub struct RecoveryKraus {
    /// damaged key -> real column of length `logical_dim`.
    columns: HashMap<u64, Vec<f64>>,
}

/// The cached recovery channel for one erased-block set.
#[derive(Debug, Clone)]
pub struct ErasureRecovery {
    pub erased_blocks: Vec<usize>,
    kraus: Vec<RecoveryKraus>,
    logical_dim: usize,
    /// max over Kraus pairs of ‖P E_j†E_k P − α_{jk} P‖_F.
    pub max_kl_residual: f64,
}

impl ErasureRecovery {
    pub fn num_kraus(&self) -> usize {
        self.kraus.len()
    }

    /// Dimension of the logical space the channel recovers onto.
    pub fn logical_dim(&self) -> usize {
        self.logical_dim
    }
}

/// The quantum Reed-Solomon code over a classical pair.
pub struct QRSCode {
    pair: RSCodePair,
    /// basis strings of each coset, indexed by logical basis label.
    coset_keys: Vec<Vec<u64>>,
    logical_qubits: usize,
    physical_qubits: usize,
    block_size: usize,
    num_blocks: usize,
    d_r_bound: usize,
    dperp_size: usize,
    recovery_cache: Mutex<HashMap<Vec<usize>, Arc<ErasureRecovery>>>,
}

impl QRSCode {
    pub fn new(pair: RSCodePair) -> Result<Self, QrsError> {
        let spec = pair.spec();
        let e = spec.extension_degree() as usize;
        let n = pair.params.n;
        let code_size = (spec.field_size() as u128).pow(pair.params.k_c as u32);
        if code_size > MAX_CODE_SPACE {
            return Err(QrsError::TooLarge(code_size));
        }

        let reps = coset_representatives(&pair).map_err(to_qrs)?;
        let dperp = pair.dperp_elements().map_err(to_qrs)?;
        let coset_keys: Vec<Vec<u64>> = reps
            .iter()
            .map(|rep| {
                let mut keys: Vec<u64> = dperp
                    .iter()
                    .map(|d| {
                        let word: Vec<FieldElement> =
                            rep.iter().zip(d).map(|(&r, &dd)| spec.add(r, dd)).collect();
                        word_to_key(&word, spec)
                    })
                    .collect();
                keys.sort_unstable();
                keys
            })
            .collect();

        Ok(QRSCode {
            logical_qubits: e * pair.params.logical_symbols(),
            physical_qubits: e * n,
            block_size: e,
            num_blocks: n,
            d_r_bound: pair.d_c.min(pair.d_d),
            dperp_size: dperp.len(),
            pair,
            coset_keys,
            recovery_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn pair(&self) -> &RSCodePair {
        &self.pair
    }

    pub fn spec(&self) -> &FieldSpec {
        self.pair.spec()
    }

    /// Number of logical qubits E(K_C + K_D − N).
    pub fn logical_qubits(&self) -> usize {
        self.logical_qubits
    }

    /// Complex dimension 2^{E(K_C+K_D−N)}.
    pub fn logical_dim(&self) -> usize {
        1 << self.logical_qubits
    }

    pub fn physical_qubits(&self) -> usize {
        self.physical_qubits
    }

    /// E qubits per symbol block.
    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    /// min{N−K_C+1, N−K_D+1}, the lower bound on the quantum distance.
    pub fn d_r_bound(&self) -> usize {
        self.d_r_bound
    }

    /// Largest number of correctable block erasures, d_R bound − 1.
    pub fn max_erasures(&self) -> usize {
        self.d_r_bound - 1
    }

    /// The codeword ket |ψ_x⟩ for a logical basis label.
    pub fn codeword_ket(&self, x: u64) -> SparseKet {
        let amp = Complex64::new(1.0 / (self.dperp_size as f64).sqrt(), 0.0);
        SparseKet::from_terms(
            self.physical_qubits,
            self.coset_keys[x as usize].iter().map(|k| (*k, amp)),
        )
    }

    /// 1-based qubit positions of the given 1-based blocks.
    pub fn block_positions(&self, blocks: &[usize]) -> Vec<usize> {
        let mut positions = Vec::with_capacity(blocks.len() * self.block_size);
        for &b in blocks {
            for j in 1..=self.block_size {
                positions.push((b - 1) * self.block_size + j);
            }
        }
        positions
    }

    fn check_blocks(&self, erased_blocks: &[usize]) -> Result<(), QrsError> {
        for &b in erased_blocks {
            if b == 0 || b > self.num_blocks {
                return Err(QrsError::BlockOutOfRange(b, self.num_blocks));
            }
        }
        if erased_blocks.len() > self.max_erasures() {
            return Err(QrsError::TooManyErasures {
                got: erased_blocks.len(),
                max: self.max_erasures(),
            });
        }
        Ok(())
    }

    /// Enc_R on a pure logical state: |x⟩ ↦ (1/√|D⊥|) Σ_{d∈D⊥} |rep(x)+d⟩.
    pub fn enc_r_ket(&self, logical: &SparseKet) -> Result<SparseKet, QrsError> {
        if logical.num_qubits() != self.logical_qubits {
            return Err(QrsError::LogicalDimension {
                got: logical.num_qubits(),
                want: self.logical_qubits,
            });
        }
        let scale = 1.0 / (self.dperp_size as f64).sqrt();
        let mut terms: Vec<(u64, Complex64)> = Vec::new();
        for (x, amp) in logical.amplitudes() {
            for key in &self.coset_keys[*x as usize] {
                terms.push((*key, amp * scale));
            }
        }
        Ok(SparseKet::from_terms(self.physical_qubits, terms))
    }

    /// Enc_R extended to ensembles.
    pub fn enc_r_mixture(&self, logical: &Mixture) -> Result<Mixture, QrsError> {
        let components = logical
            .components()
            .iter()
            .map(|(w, ket)| Ok((*w, self.enc_r_ket(ket)?)))
            .collect::<Result<Vec<_>, QrsError>>()?;
        Ok(Mixture::from_components(self.physical_qubits, components))
    }

    /// Enc_R extended to density matrices by conjugation.
    pub fn enc_r_density(&self, logical: &SparseDensity) -> Result<SparseDensity, QrsError> {
        if logical.num_qubits() != self.logical_qubits {
            return Err(QrsError::LogicalDimension {
                got: logical.num_qubits(),
                want: self.logical_qubits,
            });
        }
        let scale = 1.0 / self.dperp_size as f64;
        let mut out: Vec<((u64, u64), Complex64)> = Vec::new();
        for ((x, y), v) in logical.entries() {
            for kx in &self.coset_keys[*x as usize] {
                for ky in &self.coset_keys[*y as usize] {
                    out.push(((*kx, *ky), v * scale));
                }
            }
        }
        Ok(SparseDensity::from_entries(self.physical_qubits, out))
    }

    /// Orthogonal projector onto the code space, Σ_x |ψ_x⟩⟨ψ_x|.
    pub fn code_projector(&self) -> SparseOperator {
        let scale = 1.0 / self.dperp_size as f64;
        let mut entries: HashMap<(u64, u64), f64> = HashMap::new();
        for keys in &self.coset_keys {
            for kx in keys {
                for ky in keys {
                    *entries.entry((*kx, *ky)).or_insert(0.0) += scale;
                }
            }
        }
        SparseOperator { num_qubits: self.physical_qubits, entries }
    }

    /// The block-erasure channel Λ_i: erased blocks are traced out and
    /// replaced by |0^E⟩ in place, so the register keeps NE qubits.
    pub fn erasure_channel_mixture(
        &self,
        erased_blocks: &[usize],
        state: &Mixture,
    ) -> Result<Mixture, QrsError> {
        self.check_blocks(erased_blocks)?;
        if state.num_qubits() != self.physical_qubits {
            return Err(QrsError::PhysicalDimension {
                got: state.num_qubits(),
                want: self.physical_qubits,
            });
        }
        let mut out = state.clone();
        // trace highest block first so positions stay valid, then re-insert
        let mut blocks = erased_blocks.to_vec();
        blocks.sort_unstable();
        for &b in blocks.iter().rev() {
            let span = self.block_positions(&[b]);
            out = out.partial_trace_multi(&span).map_err(QrsError::from_state)?;
            let offset = (b - 1) * self.block_size;
            let e = self.block_size;
            let n_new = out.num_qubits() + e;
            out = out.map_keys(n_new, |key| {
                let low_len = n_new - e - offset;
                let low_mask = (1u64 << low_len) - 1;
                ((key >> low_len) << (low_len + e)) | (key & low_mask)
            });
        }
        Ok(out)
    }

    /// Builds (or fetches from the cache) the recovery channel for one
    /// erased-block set.
    pub fn build_erasure_recovery(
        &self,
        erased_blocks: &[usize],
    ) -> Result<Arc<ErasureRecovery>, QrsError> {
        self.check_blocks(erased_blocks)?;
        let mut blocks = erased_blocks.to_vec();
        blocks.sort_unstable();
        blocks.dedup();

        if let Some(hit) = self.recovery_cache.lock().unwrap().get(&blocks) {
            return Ok(hit.clone());
        }
        let built = Arc::new(self.construct_recovery(&blocks)?);
        let mut cache = self.recovery_cache.lock().unwrap();
        // a racing builder may have inserted the same (deterministic) value
        Ok(cache.entry(blocks).or_insert(built).clone())
    }

    fn construct_recovery(&self, blocks: &[usize]) -> Result<ErasureRecovery, QrsError> {
        let m_dim = self.logical_dim();
        let erased_pos = self.block_positions(blocks);
        let s_bits = erased_pos.len();
        let r = 1usize << s_bits;
        let n = self.physical_qubits;
        let keep_pos: Vec<usize> = (1..=n).filter(|p| !erased_pos.contains(p)).collect();
        let erased_mask: u64 = erased_pos.iter().map(|&p| 1u64 << (n - p)).sum();

        // Group code basis strings by their restriction off the erased set.
        // For each pair of codewords agreeing there, the Kraus pair
        // (their two restrictions to the erased set) picks up an overlap
        // contribution 1/|D⊥|.
        let scale = 1.0 / self.dperp_size as f64;
        let mut groups: HashMap<u64, Vec<(usize, u64)>> = HashMap::new();
        for (x, keys) in self.coset_keys.iter().enumerate() {
            for key in keys {
                let rest = crate::state::extract_bits(*key, &keep_pos, n);
                let erased = crate::state::extract_bits(*key, &erased_pos, n);
                groups.entry(rest).or_default().push((x, erased));
            }
        }
        let mut overlap: HashMap<(u64, u64), DMatrix<f64>> = HashMap::new();
        for members in groups.values() {
            for &(x1, s1) in members {
                for &(x2, s2) in members {
                    overlap
                        .entry((s1, s2))
                        .or_insert_with(|| DMatrix::zeros(m_dim, m_dim))
                        [(x1, x2)] += scale;
                }
            }
        }

        // alpha_{jk} = Tr(P E_j†E_k P)/dim and the KL residuals
        let mut alpha = DMatrix::<f64>::zeros(r, r);
        let mut max_residual = 0.0f64;
        for ((s1, s2), m) in &overlap {
            let a = m.trace() / m_dim as f64;
            alpha[(*s1 as usize, *s2 as usize)] = a;
            let residual = (m - DMatrix::<f64>::identity(m_dim, m_dim) * a).norm();
            max_residual = max_residual.max(residual);
        }
        if max_residual > KL_RESIDUAL_TOL {
            return Err(QrsError::KnillLaflammeViolation(max_residual));
        }

        // Diagonalize alpha; each positive eigenvalue yields one recovery
        // Kraus operator R_m = Σ_x |x⟩⟨φ_{m,x}| with
        // φ_{m,x} = Σ_b V_{b,m} E_b |ψ_x⟩ / √d_m.
        let eig = alpha.symmetric_eigen();
        let amp = (self.dperp_size as f64).sqrt().recip();
        let mut kraus = Vec::new();
        for m in 0..r {
            let d_m = eig.eigenvalues[m];
            if d_m <= EIGENVALUE_CUTOFF {
                continue;
            }
            let v_col: DVector<f64> = eig.eigenvectors.column(m).into();
            let norm = d_m.sqrt().recip();
            let mut columns: HashMap<u64, Vec<f64>> = HashMap::new();
            for (x, keys) in self.coset_keys.iter().enumerate() {
                for key in keys {
                    let b = crate::state::extract_bits(*key, &erased_pos, n) as usize;
                    let coeff = v_col[b] * amp * norm;
                    if coeff.abs() < PRUNE_THRESHOLD {
                        continue;
                    }
                    let damaged = key & !erased_mask;
                    columns.entry(damaged).or_insert_with(|| vec![0.0; m_dim])[x] += coeff;
                }
            }
            columns.retain(|_, col| col.iter().any(|c| c.abs() >= PRUNE_THRESHOLD));
            if !columns.is_empty() {
                kraus.push(RecoveryKraus { columns });
            }
        }

        Ok(ErasureRecovery {
            erased_blocks: blocks.to_vec(),
            kraus,
            logical_dim: m_dim,
            max_kl_residual: max_residual,
        })
    }

    /// Dec_R on an ensemble: applies the cached recovery channel and
    /// reports leakage outside the reachable subspace as a failure.
    pub fn dec_r_mixture(
        &self,
        erased_blocks: &[usize],
        damaged: &Mixture,
    ) -> Result<SparseDensity, QrsError> {
        if damaged.num_qubits() != self.physical_qubits {
            return Err(QrsError::PhysicalDimension {
                got: damaged.num_qubits(),
                want: self.physical_qubits,
            });
        }
        let recovery = self.build_erasure_recovery(erased_blocks)?;
        let m_dim = self.logical_dim();
        let mut rho = DMatrix::<Complex64>::zeros(m_dim, m_dim);
        for (w, ket) in damaged.components() {
            for k in &recovery.kraus {
                let mut v = vec![Complex64::ZERO; m_dim];
                for (key, amp) in ket.amplitudes() {
                    if let Some(col) = k.columns.get(key) {
                        for (vi, ci) in v.iter_mut().zip(col) {
                            *vi += amp * *ci;
                        }
                    }
                }
                for (i, vi) in v.iter().enumerate() {
                    for (j, vj) in v.iter().enumerate() {
                        rho[(i, j)] += *w * vi * vj.conj();
                    }
                }
            }
        }
        self.finish_decode(rho, damaged.total_weight())
    }

    /// Dec_R on a density matrix.
    pub fn dec_r_density(
        &self,
        erased_blocks: &[usize],
        damaged: &SparseDensity,
    ) -> Result<SparseDensity, QrsError> {
        if damaged.num_qubits() != self.physical_qubits {
            return Err(QrsError::PhysicalDimension {
                got: damaged.num_qubits(),
                want: self.physical_qubits,
            });
        }
        let recovery = self.build_erasure_recovery(erased_blocks)?;
        let m_dim = self.logical_dim();
        let mut rho = DMatrix::<Complex64>::zeros(m_dim, m_dim);
        for k in &recovery.kraus {
            // A = R ρ, then ρ_out += A R†
            let mut a: HashMap<u64, Vec<Complex64>> = HashMap::new();
            for ((x, y), v) in damaged.entries() {
                if let Some(col) = k.columns.get(x) {
                    let row = a.entry(*y).or_insert_with(|| vec![Complex64::ZERO; m_dim]);
                    for (ri, ci) in row.iter_mut().zip(col) {
                        *ri += v * *ci;
                    }
                }
            }
            for (y, row) in &a {
                if let Some(col) = k.columns.get(y) {
                    for i in 0..m_dim {
                        for j in 0..m_dim {
                            rho[(i, j)] += row[i] * col[j];
                        }
                    }
                }
            }
        }
        self.finish_decode(rho, damaged.trace())
    }

    fn finish_decode(
        &self,
        rho: DMatrix<Complex64>,
        input_weight: f64,
    ) -> Result<SparseDensity, QrsError> {
        let m_dim = self.logical_dim();
        let trace: f64 = (0..m_dim).map(|i| rho[(i, i)].re).sum();
        let leak = (input_weight - trace).abs();
        if leak > DECODE_LEAK_TOL {
            return Err(QrsError::DecodeFailure(leak));
        }
        let entries = (0..m_dim).flat_map(|i| (0..m_dim).map(move |j| (i, j))).map(|(i, j)| {
            (((i as u64), (j as u64)), rho[(i, j)])
        });
        Ok(SparseDensity::from_entries(self.logical_qubits, entries))
    }
}

fn to_qrs(err: CodeError) -> QrsError {
    match err {
        CodeError::TooLarge(s) => QrsError::TooLarge(s),
        other => panic!("unexpected code error during QRS construction: {other}"),
    }
}

impl QrsError {
    fn from_state(err: crate::error::StateError) -> Self {
        panic!("internal state error during erasure channel: {err}")
    }
}

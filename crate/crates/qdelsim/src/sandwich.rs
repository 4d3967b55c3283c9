//! The alternating sandwich mapping and the block error locator.
//!
//! `asm` appends t qubits in |0⟩ followed by t qubits in |1⟩ after every
//! E-qubit code block. After up to t deletions the 0-run/1-run boundary of
//! each marker pair shifts left by the number of deletions so far, which a
//! computational-basis measurement of the first marker half reads off
//! without ever touching code data. `loc` turns those cumulative counts
//! into a set of flagged blocks and rebuilds an NE-qubit register with the
//! flagged blocks replaced by |0^E⟩ — a block erasure at known positions.

use crate::error::LocError;
use crate::state::{Mixture, SparseDensity, SparseKet, STATE_TOL};

/// Geometry of a sandwiched register: N blocks of E data qubits, each
/// followed by a t-qubit 0-marker and a t-qubit 1-marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AsmLayout {
    pub num_blocks: usize,
    pub block_size: usize,
    pub marker_width: usize,
}

impl AsmLayout {
    pub fn new(num_blocks: usize, block_size: usize, marker_width: usize) -> Self {
        AsmLayout { num_blocks, block_size, marker_width }
    }

    /// N(E+2t).
    pub fn total_qubits(&self) -> usize {
        self.num_blocks * self.stride()
    }

    /// N·E.
    pub fn data_qubits(&self) -> usize {
        self.num_blocks * self.block_size
    }

    /// E + 2t, the footprint of one block with its markers.
    pub fn stride(&self) -> usize {
        self.block_size + 2 * self.marker_width
    }

    /// 1-based span of the 0-marker of block b in the undamaged register.
    pub fn o_span(&self, b: usize) -> std::ops::RangeInclusive<usize> {
        let start = (b - 1) * self.stride() + self.block_size + 1;
        start..=start + self.marker_width - 1
    }

    /// 1-based span of the 1-marker of block b in the undamaged register.
    pub fn l_span(&self, b: usize) -> std::ops::RangeInclusive<usize> {
        let start = (b - 1) * self.stride() + self.block_size + self.marker_width + 1;
        start..=start + self.marker_width - 1
    }

    /// Post-deletion window measured for block b: the positions the marker
    /// boundary shift licenses, (b−1)(E+2t)+E+1 ..= (b−1)(E+2t)+E+t.
    pub fn window(&self, b: usize) -> Vec<usize> {
        let base = (b - 1) * self.stride() + self.block_size;
        (base + 1..=base + self.marker_width).collect()
    }

    /// Inserts the marker bits into an NE-bit data key.
    fn sandwich_key(&self, data: u64) -> u64 {
        let (n, e, t) = (self.num_blocks, self.block_size, self.marker_width);
        let ones = (1u64 << t) - 1;
        let mut out = 0u64;
        for b in 0..n {
            let block = (data >> ((n - 1 - b) * e)) & ((1u64 << e) - 1);
            out = (out << e) | block;
            out <<= t; // 0-marker
            out = (out << t) | ones; // 1-marker
        }
        out
    }
}

/// Asm on an ensemble: a pure relabeling plus marker ancillas.
pub fn asm_mixture(rho: &Mixture, layout: &AsmLayout) -> Result<Mixture, LocError> {
    check_data_size(rho.num_qubits(), layout)?;
    Ok(rho.map_keys(layout.total_qubits(), |k| layout.sandwich_key(k)))
}

/// Asm on a density matrix.
pub fn asm_density(rho: &SparseDensity, layout: &AsmLayout) -> Result<SparseDensity, LocError> {
    check_data_size(rho.num_qubits(), layout)?;
    Ok(rho.map_keys(layout.total_qubits(), |k| layout.sandwich_key(k)))
}

fn check_data_size(got: usize, layout: &AsmLayout) -> Result<(), LocError> {
    if got != layout.data_qubits() {
        return Err(LocError::State(crate::error::StateError::DimensionMismatch(
            got,
            layout.data_qubits(),
        )));
    }
    Ok(())
}

/// Result of the block error locator.
#[derive(Debug, Clone)]
pub struct LocOutput {
    /// Flagged block indices i′, increasing, 1-based.
    pub flagged_blocks: Vec<usize>,
    /// The NE-qubit state with flagged blocks replaced by |0^E⟩.
    pub reconstructed: Mixture,
    /// Cumulative deletion counts w_0, w_1, …, w_N.
    pub weights: Vec<usize>,
    /// Marker window outcomes s_b, one t-bit row per block.
    pub outcomes: Vec<Vec<u8>>,
}

/// Measures the t-qubit window after the first `a` positions of a
/// (possibly deleted) 0-marker/1-marker layout and returns the Hamming
/// weight of the outcomes, which counts the deletions among the first
/// a+t original positions. Valid inputs make every window qubit
/// deterministic, so the seed is never consulted.
pub fn lemma_weight_measure(
    tau: &Mixture,
    a: usize,
    t: usize,
    _seed: u64,
) -> Result<usize, LocError> {
    let mut state = tau.clone();
    let mut weight = 0usize;
    for pos in a + 1..=a + t {
        let (bit, next) = measure_deterministic(&state, pos, 0)?;
        weight += bit as usize;
        state = next;
    }
    Ok(weight)
}

/// The block error locator. The number of deletions is inferred from the
/// register length and the marker windows; it is not an input.
pub fn loc(tau: &Mixture, layout: &AsmLayout, _seed: u64) -> Result<LocOutput, LocError> {
    let n_full = layout.total_qubits();
    let t = layout.marker_width;
    let e = layout.block_size;
    let n_prime = tau.num_qubits();
    if n_prime + t < n_full {
        return Err(LocError::TooFewQubits { got: n_prime, min: n_full - t, max: t });
    }
    if n_prime > n_full {
        return Err(LocError::TooManyQubits { got: n_prime, max: n_full });
    }

    // I-2: pad the tail with t fresh |1⟩ qubits so every window exists
    let pad = SparseKet::basis(t, (1u64 << t) - 1);
    let mut state = tau.tensor_ket(&pad);

    // M-1/E-1: measure each block's window, deterministically
    let mut weights = vec![0usize; layout.num_blocks + 1];
    let mut outcomes = Vec::with_capacity(layout.num_blocks);
    for b in 1..=layout.num_blocks {
        let mut s_b = Vec::with_capacity(t);
        for pos in layout.window(b) {
            let (bit, next) = measure_deterministic(&state, pos, b)?;
            s_b.push(bit);
            state = next;
        }
        // a run-shifted marker pair always reads 0…01…1
        if s_b.windows(2).any(|w| w[0] == 1 && w[1] == 0) {
            return Err(LocError::MalformedWindow {
                block: b,
                outcome: s_b.iter().map(|x| char::from(b'0' + x)).collect(),
            });
        }
        weights[b] = s_b.iter().map(|&x| x as usize).sum();
        outcomes.push(s_b);
    }

    // E-2/E-3: block b is clean iff w_b = w_{b−1}; clean data sits w_b
    // positions left of its undamaged offset
    let mut flagged_blocks = Vec::new();
    let mut keep_positions = Vec::new();
    for b in 1..=layout.num_blocks {
        if weights[b] == weights[b - 1] {
            let start = (b - 1) * layout.stride() - weights[b];
            keep_positions.extend(start + 1..=start + e);
        } else {
            flagged_blocks.push(b);
        }
    }

    // T-1: keep clean data in order, trace out everything else, then slot
    // |0^E⟩ in for each flagged block
    let padded_len = state.num_qubits();
    let drop: Vec<usize> = (1..=padded_len)
        .filter(|p| !keep_positions.contains(p))
        .collect();
    let mut reconstructed = state.partial_trace_multi(&drop)?;
    for &b in &flagged_blocks {
        let offset = (b - 1) * e;
        let n_new = reconstructed.num_qubits() + e;
        reconstructed = reconstructed.map_keys(n_new, |key| {
            let low_len = n_new - e - offset;
            let low_mask = (1u64 << low_len) - 1;
            ((key >> low_len) << (low_len + e)) | (key & low_mask)
        });
    }
    debug_assert_eq!(reconstructed.num_qubits(), layout.data_qubits());

    Ok(LocOutput { flagged_blocks, reconstructed, weights, outcomes })
}

/// Probability-1 computational-basis measurement of one qubit; anything
/// genuinely random here means the input was not a ≤t-deleted codeword.
fn measure_deterministic(
    state: &Mixture,
    pos: usize,
    block: usize,
) -> Result<(u8, Mixture), LocError> {
    let (p0, p1) = state.bit_probabilities(pos)?;
    let total = p0 + p1;
    let outcome = if p1 >= p0 { 1u8 } else { 0u8 };
    let p_max = p0.max(p1) / total;
    if p_max < 1.0 - STATE_TOL {
        return Err(LocError::NondeterministicWindow { block, prob: p_max });
    }
    Ok((outcome, state.collapse_bit(pos, outcome)?))
}

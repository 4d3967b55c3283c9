//! Locator suites: Lemma 1's weight oracle, weight bookkeeping across all
//! desk-scale deletion patterns, and soundness of the reconstruction.

mod common;

use common::dense::random_ket;
use common::{build, combinations, grid1_params};
use qdelsim::deletion::{delete_multi_mixture, DeletionPattern};
use qdelsim::pipeline::{enc, logical_mixture, LogicalStateSpec};
use qdelsim::sandwich::{lemma_weight_measure, loc, AsmLayout};
use qdelsim::state::{Mixture, SparseKet};

/// ρ₁(a qubits) ⊗ |0^t⟩ ⊗ |1^t⟩ ⊗ ρ₄(b qubits) as a pure-state mixture.
fn lemma_layout(a: usize, t: usize, b: usize, seed: u64) -> Mixture {
    let rho1 = random_ket(a, seed);
    let marker = SparseKet::basis(2 * t, (1u64 << t) - 1);
    let rho4 = random_ket(b, seed + 1);
    Mixture::pure(rho1.tensor(&marker).tensor(&rho4))
}

#[test]
fn lemma1_weight_equals_deletions_before_window() {
    for a in 1..=3 {
        for t in 1..=2 {
            let b = 2;
            let n = a + 2 * t + b;
            let layout = lemma_layout(a, t, b, (10 * a + t) as u64);
            for size in 0..=t {
                for pattern in combinations(n, size) {
                    let dp = DeletionPattern::new(pattern.clone(), n).unwrap();
                    let damaged = delete_multi_mixture(&layout, &dp).unwrap();
                    let weight = lemma_weight_measure(&damaged, a, t, 0).unwrap();
                    // only deletions among the first a+t original
                    // positions shift the window contents (Lemma 1's
                    // t₁ + t₂)
                    let expected = pattern.iter().filter(|&&p| p <= a + t).count();
                    assert_eq!(
                        weight, expected,
                        "a = {a}, t = {t}, pattern {pattern:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn lemma1_is_seed_independent() {
    let layout = lemma_layout(2, 2, 2, 3);
    let dp = DeletionPattern::new(vec![1, 5], 8).unwrap();
    let damaged = delete_multi_mixture(&layout, &dp).unwrap();
    let w0 = lemma_weight_measure(&damaged, 2, 2, 0).unwrap();
    for seed in [1, 42, u64::MAX] {
        assert_eq!(lemma_weight_measure(&damaged, 2, 2, seed).unwrap(), w0);
    }
}

fn grid1_encoded() -> (qdelsim::css::QRSCode, AsmLayout, Mixture, Mixture) {
    let (code, layout) = build(&grid1_params());
    let sigma = logical_mixture(&LogicalStateSpec::Ghz, code.logical_qubits()).unwrap();
    let encoded = enc(&sigma, &code, &layout).unwrap();
    (code, layout, sigma, encoded)
}

#[test]
fn weights_are_monotone_and_count_pre_tail_deletions() {
    let (_, layout, _, encoded) = grid1_encoded();
    let total = layout.total_qubits();
    let t = layout.marker_width;
    for size in 0..=t {
        for pattern in combinations(total, size) {
            let dp = DeletionPattern::new(pattern.clone(), total).unwrap();
            let damaged = delete_multi_mixture(&encoded, &dp).unwrap();
            let out = loc(&damaged, &layout, 0).unwrap();
            assert_eq!(out.weights[0], 0);
            assert!(out.weights.windows(2).all(|w| w[0] <= w[1]), "{pattern:?}");
            // w_N counts the deletions the windows can see: those among
            // the first N(E+2t) − t original positions. A deletion inside
            // the final 1-run erases a marker the tail padding replaces,
            // so it never shifts any window.
            let visible = pattern.iter().filter(|&&p| p <= total - t).count();
            assert_eq!(*out.weights.last().unwrap(), visible, "{pattern:?}");
            assert!(out.flagged_blocks.len() <= pattern.len(), "{pattern:?}");
        }
    }
}

#[test]
fn reconstruction_equals_erasure_of_flagged_blocks() {
    // Theorem 1's proof step: ρ′ = E_{i′}(Enc_R(σ))
    let (code, layout, _, encoded) = grid1_encoded();
    let enc_r = code
        .enc_r_mixture(&logical_mixture(&LogicalStateSpec::Ghz, code.logical_qubits()).unwrap())
        .unwrap();
    let total = layout.total_qubits();
    for size in 0..=layout.marker_width {
        for pattern in combinations(total, size) {
            let dp = DeletionPattern::new(pattern.clone(), total).unwrap();
            let damaged = delete_multi_mixture(&encoded, &dp).unwrap();
            let out = loc(&damaged, &layout, 0).unwrap();
            let expected = code
                .erasure_channel_mixture(&out.flagged_blocks, &enc_r)
                .unwrap();
            let d = out
                .reconstructed
                .to_density()
                .trace_distance(&expected.to_density())
                .unwrap();
            assert!(d < 1e-9, "pattern {pattern:?}: distance {d}");
        }
    }
}

#[test]
fn loc_is_deterministic_across_seeds() {
    let (_, layout, _, encoded) = grid1_encoded();
    let dp = DeletionPattern::new(vec![6], layout.total_qubits()).unwrap();
    let damaged = delete_multi_mixture(&encoded, &dp).unwrap();
    let base = loc(&damaged, &layout, 0).unwrap();
    for seed in [17, 1 << 40] {
        let again = loc(&damaged, &layout, seed).unwrap();
        assert_eq!(again.flagged_blocks, base.flagged_blocks);
        assert_eq!(again.weights, base.weights);
        assert_eq!(again.outcomes, base.outcomes);
        let d = again
            .reconstructed
            .to_density()
            .trace_distance(&base.reconstructed.to_density())
            .unwrap();
        assert!(d < 1e-12);
    }
}

#[test]
fn windows_never_touch_data_qubits() {
    // marker-window safety: after any ≤ t deletions, every measured
    // window holds only marker-derived qubits, so each outcome row is a
    // deterministic 0-run followed by a 1-run; when nothing is flagged
    // the untouched codeword comes back pure
    let (_, layout, _, encoded) = grid1_encoded();
    let total = layout.total_qubits();
    let t = layout.marker_width;
    for pattern in combinations(total, 1) {
        let dp = DeletionPattern::new(pattern.clone(), total).unwrap();
        let damaged = delete_multi_mixture(&encoded, &dp).unwrap();
        let out = loc(&damaged, &layout, 0).unwrap();
        assert_eq!(out.outcomes.len(), layout.num_blocks);
        for row in &out.outcomes {
            assert_eq!(row.len(), t);
            assert!(row.windows(2).all(|w| w[0] <= w[1]), "{row:?} not 0…01…1");
        }
        if out.flagged_blocks.is_empty() {
            let purity = out.reconstructed.to_density().purity();
            assert!(purity > 1.0 - 1e-9, "pattern {pattern:?}: purity {purity}");
        }
    }
}

//! Quantum single and multi deletion errors as partial-trace maps.
//!
//! A deletion at position i discards the i-th subsystem; the register
//! shrinks and later positions shift left. Multi deletions compose single
//! deletions; all pattern indices refer to the *original* register, which
//! is realized by removing the highest index first (equivalently, by a
//! single simultaneous partial trace).

use crate::error::StateError;
use crate::state::{Mixture, SparseDensity};

/// A strictly increasing vector of 1-based deletion positions in an
/// n-qubit register.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeletionPattern {
    positions: Vec<usize>,
    original_length: usize,
}

impl DeletionPattern {
    pub fn new(positions: Vec<usize>, original_length: usize) -> Result<Self, StateError> {
        for (j, &p) in positions.iter().enumerate() {
            if p == 0 || p > original_length {
                return Err(StateError::IndexOutOfRange {
                    index: p,
                    num_qubits: original_length,
                });
            }
            if j > 0 && positions[j - 1] >= p {
                return Err(StateError::DuplicateIndex(p));
            }
        }
        Ok(DeletionPattern { positions, original_length })
    }

    pub fn empty(original_length: usize) -> Self {
        DeletionPattern { positions: Vec::new(), original_length }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn original_length(&self) -> usize {
        self.original_length
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// D_i: deletes the single subsystem at position `i`.
pub fn delete(tau: &SparseDensity, i: usize) -> Result<SparseDensity, StateError> {
    tau.partial_trace(i)
}

/// D_i for a whole pattern of original-register positions.
pub fn delete_multi(
    tau: &SparseDensity,
    pattern: &DeletionPattern,
) -> Result<SparseDensity, StateError> {
    if tau.num_qubits() != pattern.original_length {
        return Err(StateError::DimensionMismatch(
            tau.num_qubits(),
            pattern.original_length,
        ));
    }
    tau.partial_trace_multi(&pattern.positions)
}

/// Ensemble form of [`delete_multi`].
pub fn delete_multi_mixture(
    tau: &Mixture,
    pattern: &DeletionPattern,
) -> Result<Mixture, StateError> {
    if tau.num_qubits() != pattern.original_length {
        return Err(StateError::DimensionMismatch(
            tau.num_qubits(),
            pattern.original_length,
        ));
    }
    tau.partial_trace_multi(&pattern.positions)
}

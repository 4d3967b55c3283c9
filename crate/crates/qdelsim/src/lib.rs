//! qdelsim: a desk-scale simulator for quantum codes that correct
//! multiple deletions.
//!
//! The crate builds CSS codes from nested Reed-Solomon codes over
//! GF(2^E), wraps them in an alternating sandwich of marker qubits, and
//! verifies end to end that up to t deletions — qubits removed from the
//! register by partial trace, with everything after them shifting down —
//! are corrected exactly. The decoder is never told which positions were
//! deleted, or how many; a block error locator infers that from the
//! register length and marker measurements alone, reducing the problem to
//! block erasures that the inner code corrects via Knill-Laflamme
//! recovery.
//!
//! Layer by layer:
//!
//! - [`field`]: GF(2^E) arithmetic with log/antilog tables.
//! - [`reed_solomon`]: the nested pair D⊥ ⊂ C of Reed-Solomon codes and
//!   classical erasure decoding.
//! - [`state`]: a sparse state engine (kets, density matrices, and
//!   ensembles of pure states) sized for a desk machine.
//! - [`deletion`]: the deletion channel as partial trace.
//! - [`css`]: the quantum Reed-Solomon encoder and erasure recovery.
//! - [`sandwich`]: the alternating sandwich mapping and block error
//!   locator.
//! - [`pipeline`]: Enc/Dec composition and the verification harness.
//! - [`rate`]: exact-rational code rates and the convergence table.
//!
//! The `qdelsim` binary exposes the same machinery as a CLI; see the
//! guide in `book/` for worked examples.

pub mod config;
pub mod css;
pub mod deletion;
pub mod error;
pub mod field;
pub mod pipeline;
pub mod rate;
pub mod reed_solomon;
pub mod report;
pub mod sandwich;
pub mod state;

pub use css::QRSCode;
pub use error::{CodeError, FieldError, LocError, PipelineError, QrsError, StateError};
pub use field::{FieldElement, FieldSpec};
pub use pipeline::{
    dec, enc, verify_theorem1, CodeParams, DeletionMode, ExperimentConfig, LogicalStateSpec,
    TrialReport, VerifySummary,
};
pub use reed_solomon::{build_pair, RSCodePair, RSParams};
pub use sandwich::{asm_mixture, loc, AsmLayout, LocOutput};
pub use state::{Mixture, SparseDensity, SparseKet};

// The guide chapters double as doc-tests so their code stays compilable.
#[doc = include_str!("../../../book/src/fields.md")]
mod _guide_fields {}
#[doc = include_str!("../../../book/src/reed-solomon.md")]
mod _guide_reed_solomon {}
#[doc = include_str!("../../../book/src/states.md")]
mod _guide_states {}
#[doc = include_str!("../../../book/src/css.md")]
mod _guide_css {}
#[doc = include_str!("../../../book/src/sandwich.md")]
mod _guide_sandwich {}
#[doc = include_str!("../../../book/src/pipeline.md")]
mod _guide_pipeline {}

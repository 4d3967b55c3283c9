//! Sparse computational-basis simulation of multi-qubit states.
//!
//! Basis strings of an n-qubit register are packed into a `u64`, with
//! qubit 1 (the leftmost position in ket notation) stored in the
//! most significant of the n used bits. All public qubit positions are
//! 1-based.
//!
//! Three representations coexist:
//! - [`SparseKet`]: pure states as amplitude maps.
//! - [`SparseDensity`]: mixed states as (ket, bra) entry maps. This is the
//!   general-purpose engine with partial trace, measurement and trace
//!   distance.
//! - [`Mixture`]: an ensemble of weighted pure states. Channels built from
//!   partial traces and projections keep this form, which is what lets the
//!   end-to-end deletion trials run fast; `to_density` bridges back.

mod density;
mod ket;
mod mixture;

pub use density::{MeasurementRecord, SparseDensity};
pub use ket::SparseKet;
pub use mixture::Mixture;

/// Amplitudes below this magnitude are dropped from sparse maps.
pub const PRUNE_THRESHOLD: f64 = 1e-12;
/// Comparison tolerance for normalization, Hermiticity and probabilities.
pub const STATE_TOL: f64 = 1e-10;

/// Bit of basis string `key` at 1-based qubit position `i` of an n-qubit
/// register.
#[inline]
pub fn bit_at(key: u64, i: usize, n: usize) -> u8 {
    debug_assert!(i >= 1 && i <= n);
    ((key >> (n - i)) & 1) as u8
}

/// Inserts a new qubit with value `bit` at position `i` of an n-qubit
/// string, producing an (n+1)-qubit string.
#[inline]
pub fn insert_bit(key: u64, i: usize, n: usize, bit: u8) -> u64 {
    debug_assert!(i >= 1 && i <= n + 1);
    let low_len = n + 1 - i;
    let low_mask = (1u64 << low_len) - 1;
    let high = key >> low_len << (low_len + 1);
    let low = key & low_mask;
    high | ((bit as u64) << low_len) | low
}

/// Removes the qubit at position `i` of an n-qubit string.
#[inline]
pub fn remove_bit(key: u64, i: usize, n: usize) -> u64 {
    debug_assert!(i >= 1 && i <= n);
    let low_len = n - i;
    let low_mask = (1u64 << low_len) - 1;
    ((key >> (low_len + 1)) << low_len) | (key & low_mask)
}

/// Keeps only the listed positions (strictly increasing, 1-based), packed
/// in order into a shorter string.
#[inline]
pub fn extract_bits(key: u64, positions: &[usize], n: usize) -> u64 {
    let mut out = 0u64;
    for &p in positions {
        out = (out << 1) | bit_at(key, p, n) as u64;
    }
    out
}

/// Renders a basis string as "0101…".
pub fn key_to_string(key: u64, n: usize) -> String {
    (1..=n).map(|i| char::from(b'0' + bit_at(key, i, n))).collect()
}

/// Parses "0101…" into a basis key; panics on non-binary characters.
pub fn string_to_key(s: &str) -> u64 {
    s.chars().fold(0u64, |k, c| {
        (k << 1)
            | match c {
                '0' => 0,
                '1' => 1,
                _ => panic!("non-binary character {c:?} in basis string"),
            }
    })
}

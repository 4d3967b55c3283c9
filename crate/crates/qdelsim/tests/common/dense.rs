//! A dense, brute-force density-matrix engine used as an independent
//! oracle for the sparse state engine. Everything here is O(4^n); keep
//! n small.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdelsim::state::{SparseDensity, SparseKet};

/// Converts a sparse density matrix to a dense one.
pub fn to_dense(rho: &SparseDensity) -> DMatrix<Complex64> {
    let dim = 1usize << rho.num_qubits();
    let mut m = DMatrix::zeros(dim, dim);
    for (&(x, y), &v) in rho.entries() {
        m[(x as usize, y as usize)] = v;
    }
    m
}

/// Converts a dense matrix back to the sparse representation.
pub fn to_sparse(m: &DMatrix<Complex64>, num_qubits: usize) -> SparseDensity {
    let entries = (0..m.nrows())
        .flat_map(|x| (0..m.ncols()).map(move |y| (x, y)))
        .map(|(x, y)| ((x as u64, y as u64), m[(x, y)]));
    SparseDensity::from_entries(num_qubits, entries)
}

/// Inserts bit `b` at 1-based position `i` (MSB first) of an (n−1)-bit
/// index.
fn insert_bit(x: usize, i: usize, n: usize, b: usize) -> usize {
    let low_len = n - i;
    let low_mask = (1usize << low_len) - 1;
    ((x >> low_len) << (low_len + 1)) | (b << low_len) | (x & low_mask)
}

/// Dense partial trace over qubit `i` (1-based, qubit 1 is the leftmost /
/// most significant bit).
pub fn partial_trace(m: &DMatrix<Complex64>, n: usize, i: usize) -> DMatrix<Complex64> {
    let half = 1usize << (n - 1);
    let mut out = DMatrix::zeros(half, half);
    for x in 0..half {
        for y in 0..half {
            for b in 0..2 {
                out[(x, y)] += m[(insert_bit(x, i, n, b), insert_bit(y, i, n, b))];
            }
        }
    }
    out
}

/// Kronecker product, first factor on the most significant bits.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// A seeded random normalized pure state on n qubits, with every
/// amplitude nonzero almost surely.
pub fn random_ket(n: usize, seed: u64) -> SparseKet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1u64 << n;
    SparseKet::from_terms(
        n,
        (0..dim).map(|k| {
            let re = rng.gen::<f64>() - 0.5;
            let im = rng.gen::<f64>() - 0.5;
            (k, Complex64::new(re, im))
        }),
    )
    .normalized()
}

/// A seeded random mixed state: a two-component mixture of random pure
/// states.
pub fn random_density(n: usize, seed: u64) -> SparseDensity {
    let a = SparseDensity::from_ket(&random_ket(n, seed));
    let b = SparseDensity::from_ket(&random_ket(n, seed ^ 0x9e3779b97f4a7c15));
    SparseDensity::mix(&[(0.3, a), (0.7, b)])
}

/// Largest entrywise difference between two dense matrices.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (0..a.nrows())
        .flat_map(|x| (0..a.ncols()).map(move |y| (x, y)))
        .map(|(x, y)| (a[(x, y)] - b[(x, y)]).norm())
        .fold(0.0, f64::max)
}

/// Trace distance computed densely: half the sum of |eigenvalues| of the
/// difference (Hermitian), via nalgebra's symmetric eigensolver on the
/// real embedding.
pub fn trace_distance_dense(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let d = a - b;
    let n = d.nrows();
    let mut real = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for x in 0..n {
        for y in 0..n {
            let v = d[(x, y)];
            real[(x, y)] = v.re;
            real[(x + n, y + n)] = v.re;
            real[(x + n, y)] = v.im;
            real[(x, y + n)] = -v.im;
        }
    }
    let mut eigs: Vec<f64> = real.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    // the embedding doubles each eigenvalue; take every other one
    eigs.iter().step_by(2).map(|e| e.abs()).sum::<f64>() / 2.0
}

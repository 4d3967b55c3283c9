//! The classical (shortened) Reed-Solomon code pair C ⊇ D⊥ behind the CSS
//! construction: Vandermonde parity-check matrices, coset structure and
//! erasure decoding over GF(2^E).
//!
//! `H_{D⊥}[i][j] = α^{(i−1)(j−1)}` and `H_C` is its first N−K_C rows, so
//! D⊥ ⊂ C by construction. Both codes are MDS; minimum distances follow
//! the Singleton identity d = N − K + 1 (validated by brute force in the
//! test suite).

use std::sync::Arc;

use crate::error::CodeError;
use crate::field::{FieldElement, FieldSpec};

/// Brute-force enumeration guard: codes above this size are refused.
const MAX_ENUMERABLE: u128 = 1 << 20;

/// Parameters of the pair, under the constraints
/// t ≤ K_C ≤ N − t, N − K_C ≤ K_D, N ≤ 2^E − 1.
#[derive(Debug, Clone)]
pub struct RSParams {
    pub n: usize,
    pub k_c: usize,
    pub k_d: usize,
    pub t: usize,
    pub spec: Arc<FieldSpec>,
}

impl RSParams {
    pub fn new(
        n: usize,
        k_c: usize,
        k_d: usize,
        t: usize,
        spec: Arc<FieldSpec>,
    ) -> Result<Self, CodeError> {
        let params = RSParams { n, k_c, k_d, t, spec };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), CodeError> {
        let RSParams { n, k_c, k_d, t, .. } = *self;
        if n == 0 {
            return Err(CodeError::InvalidParams("N must be positive".into()));
        }
        if t > k_c {
            return Err(CodeError::InvalidParams(format!(
                "t <= K_C violated: t = {t}, K_C = {k_c}"
            )));
        }
        if k_c + t > n {
            return Err(CodeError::InvalidParams(format!(
                "K_C <= N - t violated: K_C = {k_c}, N = {n}, t = {t}"
            )));
        }
        if k_d > n {
            return Err(CodeError::InvalidParams(format!(
                "K_D <= N violated: K_D = {k_d}, N = {n}"
            )));
        }
        if n - k_c > k_d {
            return Err(CodeError::InvalidParams(format!(
                "N - K_C <= K_D violated: N = {n}, K_C = {k_c}, K_D = {k_d}"
            )));
        }
        if n as u128 > self.spec.group_order() as u128 {
            return Err(CodeError::InvalidParams(format!(
                "N <= 2^E - 1 violated: N = {n}, E = {}",
                self.spec.extension_degree()
            )));
        }
        Ok(())
    }

    /// Number of logical symbols K_C + K_D − N of the quantum code.
    pub fn logical_symbols(&self) -> usize {
        self.k_c + self.k_d - self.n
    }
}

/// The constructed pair with parity-check matrices, generator bases and
/// (MDS) minimum distances. Immutable after [`build_pair`].
#[derive(Debug, Clone)]
pub struct RSCodePair {
    pub params: RSParams,
    /// K_D × N matrix with h[i][j] = α^{(i−1)(j−1)}.
    pub h_dperp: Vec<Vec<FieldElement>>,
    /// First N − K_C rows of `h_dperp`.
    pub h_c: Vec<Vec<FieldElement>>,
    /// K_C generators of C (kernel basis of H_C).
    pub basis_c: Vec<Vec<FieldElement>>,
    /// N − K_D generators of D⊥ (kernel basis of H_{D⊥}).
    pub basis_dperp: Vec<Vec<FieldElement>>,
    /// N − K_C + 1.
    pub d_c: usize,
    /// N − K_D + 1.
    pub d_d: usize,
}

/// Builds the pair, computing kernels by Gaussian elimination and checking
/// D⊥ ⊂ C.
pub fn build_pair(params: RSParams) -> Result<RSCodePair, CodeError> {
    params.validate()?;
    let spec = &params.spec;
    let (n, k_c, k_d) = (params.n, params.k_c, params.k_d);

    let vandermonde_row = |i: usize| -> Vec<FieldElement> {
        (1..=n)
            .map(|j| {
                spec.pow(spec.primitive_element(), ((i - 1) * (j - 1)) as i64)
                    .expect("alpha is nonzero")
            })
            .collect()
    };
    let h_dperp: Vec<Vec<FieldElement>> = (1..=k_d).map(vandermonde_row).collect();
    let h_c: Vec<Vec<FieldElement>> = h_dperp[..n - k_c].to_vec();

    let basis_c = kernel_basis(&h_c, n, spec);
    let basis_dperp = kernel_basis(&h_dperp, n, spec);
    if basis_c.len() != k_c || basis_dperp.len() != n - k_d {
        return Err(CodeError::InvalidParams(format!(
            "kernel dimensions {} / {} do not match K_C = {k_c} / N - K_D = {}",
            basis_c.len(),
            basis_dperp.len(),
            n - k_d
        )));
    }
    // D⊥ ⊂ C: every generator of D⊥ must satisfy H_C x = 0
    for g in &basis_dperp {
        if !in_kernel(&h_c, g, spec) {
            return Err(CodeError::InvalidParams(
                "D-perp generator escapes C; H_C is not a submatrix of H_Dperp".into(),
            ));
        }
    }

    Ok(RSCodePair {
        d_c: n - k_c + 1,
        d_d: n - k_d + 1,
        params,
        h_dperp,
        h_c,
        basis_c,
        basis_dperp,
    })
}

impl RSCodePair {
    pub fn spec(&self) -> &FieldSpec {
        &self.params.spec
    }

    /// |D⊥| = 2^{E(N−K_D)}.
    pub fn dperp_size(&self) -> u128 {
        (self.spec().field_size() as u128).pow(self.basis_dperp.len() as u32)
    }

    /// Number of cosets of D⊥ in C, 2^{E(K_C+K_D−N)}.
    pub fn coset_count(&self) -> u128 {
        (self.spec().field_size() as u128).pow(self.params.logical_symbols() as u32)
    }

    /// All elements of D⊥, enumerated from the generator basis.
    pub fn dperp_elements(&self) -> Result<Vec<Vec<FieldElement>>, CodeError> {
        enumerate_code(&self.basis_dperp, self.params.n, self.spec())
    }

    /// All elements of C.
    pub fn c_elements(&self) -> Result<Vec<Vec<FieldElement>>, CodeError> {
        enumerate_code(&self.basis_c, self.params.n, self.spec())
    }
}

/// One canonical codeword of C per coset of D⊥: the lexicographically
/// smallest member under the fixed bit encoding, with the returned list
/// itself sorted lexicographically. The list index is the logical basis
/// label.
pub fn coset_representatives(pair: &RSCodePair) -> Result<Vec<Vec<FieldElement>>, CodeError> {
    let spec = pair.spec();
    let codewords = pair.c_elements()?;
    // same coset of D⊥ <=> same syndrome under H_Dperp
    let mut by_syndrome: std::collections::HashMap<Vec<u32>, Vec<FieldElement>> =
        std::collections::HashMap::new();
    for word in codewords {
        let syndrome: Vec<u32> = pair
            .h_dperp
            .iter()
            .map(|row| dot(row, &word, spec).value())
            .collect();
        by_syndrome
            .entry(syndrome)
            .and_modify(|best| {
                if word < *best {
                    *best = word.clone();
                }
            })
            .or_insert(word);
    }
    let mut reps: Vec<Vec<FieldElement>> = by_syndrome.into_values().collect();
    reps.sort();
    debug_assert_eq!(reps.len() as u128, pair.coset_count());
    Ok(reps)
}

/// Fills in the erased positions (1-based) of `word` so that the result is
/// the unique codeword of C agreeing with the unerased symbols.
pub fn erasure_decode_classical(
    word: &[FieldElement],
    erased: &[usize],
    pair: &RSCodePair,
) -> Result<Vec<FieldElement>, CodeError> {
    let spec = pair.spec();
    let n = pair.params.n;
    if word.len() != n {
        return Err(CodeError::WordLength { got: word.len(), want: n });
    }
    let max = pair.d_c - 1;
    if erased.len() > max {
        return Err(CodeError::TooManyErasures { got: erased.len(), max });
    }
    for &p in erased {
        if p == 0 || p > n {
            return Err(CodeError::InvalidParams(format!(
                "erased position {p} out of range 1..={n}"
            )));
        }
    }
    if erased.is_empty() {
        if !in_kernel(&pair.h_c, word, spec) {
            return Err(CodeError::Inconsistent);
        }
        return Ok(word.to_vec());
    }

    // H_C restricted to erased columns, rhs = sum over unerased columns
    let rows = pair.h_c.len();
    let mut system: Vec<Vec<FieldElement>> = Vec::with_capacity(rows);
    for row in &pair.h_c {
        let mut eq: Vec<FieldElement> = erased.iter().map(|&p| row[p - 1]).collect();
        let mut rhs = FieldElement::ZERO;
        for (j, &h) in row.iter().enumerate() {
            if !erased.contains(&(j + 1)) {
                rhs = spec.add(rhs, spec.mul(h, word[j]));
            }
        }
        eq.push(rhs);
        system.push(eq);
    }
    let solved = solve_unique(system, erased.len(), spec).ok_or(CodeError::Inconsistent)?;

    let mut full = word.to_vec();
    for (&p, &v) in erased.iter().zip(&solved) {
        full[p - 1] = v;
    }
    if !in_kernel(&pair.h_c, &full, spec) {
        return Err(CodeError::Inconsistent);
    }
    Ok(full)
}

/// Minimum Hamming weight over all nonzero codewords spanned by
/// `generators`, by exhaustive enumeration. A zero-dimensional code has no
/// nonzero codeword; the convention N + 1 is returned.
pub fn min_distance_bruteforce(
    generators: &[Vec<FieldElement>],
    n: usize,
    spec: &FieldSpec,
) -> Result<usize, CodeError> {
    if generators.is_empty() {
        return Ok(n + 1);
    }
    let words = enumerate_code(generators, n, spec)?;
    Ok(words
        .iter()
        .map(|w| w.iter().filter(|s| !s.is_zero()).count())
        .filter(|&wt| wt > 0)
        .min()
        .unwrap_or(n + 1))
}

/// Every linear combination of the generators, in mixed-radix counter order.
pub fn enumerate_code(
    generators: &[Vec<FieldElement>],
    n: usize,
    spec: &FieldSpec,
) -> Result<Vec<Vec<FieldElement>>, CodeError> {
    let q = spec.field_size() as u128;
    let size = q.checked_pow(generators.len() as u32).filter(|&s| s <= MAX_ENUMERABLE);
    let size = size.ok_or(CodeError::TooLarge(q.saturating_pow(generators.len() as u32)))?;

    let mut words = Vec::with_capacity(size as usize);
    let mut coeffs = vec![FieldElement::ZERO; generators.len()];
    loop {
        let mut word = vec![FieldElement::ZERO; n];
        for (c, g) in coeffs.iter().zip(generators) {
            for (w, &s) in word.iter_mut().zip(g) {
                *w = spec.add(*w, spec.mul(*c, s));
            }
        }
        words.push(word);
        // increment the mixed-radix counter
        let mut k = 0;
        loop {
            if k == coeffs.len() {
                return Ok(words);
            }
            let next = coeffs[k].value() + 1;
            if next < spec.field_size() {
                coeffs[k] = FieldElement(next);
                break;
            }
            coeffs[k] = FieldElement::ZERO;
            k += 1;
        }
    }
}

fn dot(a: &[FieldElement], b: &[FieldElement], spec: &FieldSpec) -> FieldElement {
    a.iter()
        .zip(b)
        .fold(FieldElement::ZERO, |acc, (&x, &y)| spec.add(acc, spec.mul(x, y)))
}

fn in_kernel(rows: &[Vec<FieldElement>], word: &[FieldElement], spec: &FieldSpec) -> bool {
    rows.iter().all(|row| dot(row, word, spec).is_zero())
}

/// Kernel basis of an r×n matrix by Gaussian elimination to reduced row
/// echelon form; free variables yield one basis vector each.
fn kernel_basis(rows: &[Vec<FieldElement>], n: usize, spec: &FieldSpec) -> Vec<Vec<FieldElement>> {
    let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = spec.inv(m[rank][col]).expect("pivot is nonzero");
        for v in m[rank].iter_mut() {
            *v = spec.mul(*v, inv);
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col];
                for c in 0..n {
                    let sub = spec.mul(factor, m[rank][c]);
                    m[r][c] = spec.add(m[r][c], sub);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }

    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![FieldElement::ZERO; n];
            v[f] = FieldElement::ONE;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m[r][f]; // -x = x in characteristic 2
            }
            v
        })
        .collect()
}

/// Solves a linear system given as rows [a_1 .. a_u | rhs] with `u`
/// unknowns; returns None when inconsistent or underdetermined.
fn solve_unique(
    mut system: Vec<Vec<FieldElement>>,
    unknowns: usize,
    spec: &FieldSpec,
) -> Option<Vec<FieldElement>> {
    let rows = system.len();
    let mut rank = 0;
    for col in 0..unknowns {
        let p = (rank..rows).find(|&r| !system[r][col].is_zero())?;
        system.swap(rank, p);
        let inv = spec.inv(system[rank][col]).expect("pivot is nonzero");
        for v in system[rank].iter_mut() {
            *v = spec.mul(*v, inv);
        }
        for r in 0..rows {
            if r != rank && !system[r][col].is_zero() {
                let factor = system[r][col];
                for c in 0..=unknowns {
                    let sub = spec.mul(factor, system[rank][c]);
                    system[r][c] = spec.add(system[r][c], sub);
                }
            }
        }
        rank += 1;
    }
    // remaining rows must have zero rhs
    for r in rank..rows {
        if !system[r][unknowns].is_zero() {
            return None;
        }
    }
    Some((0..unknowns).map(|i| system[i][unknowns]).collect())
}

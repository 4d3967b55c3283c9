//! Arithmetic in GF(2^E) with a fixed primitive element and a fixed
//! element-to-bit-string encoding.
//!
//! Elements are polynomials over GF(2) modulo a fixed irreducible polynomial,
//! stored as integers where bit `j` holds the coefficient of `x^j`. Addition
//! is bitwise XOR; multiplication and inversion go through log/antilog tables
//! built at construction. The primitive element `α` is always the residue
//! class of `x` (verified to have order 2^E − 1).
//!
//! The bit-string encoding is big-endian: the leftmost bit carries the
//! coefficient of `α^{E−1}`. Every place a field symbol occupies E qubits
//! uses this convention.

use crate::error::FieldError;

/// Fixed irreducible (and x-primitive) modulus per extension degree,
/// including the leading term. Index 0 is unused.
const MODULI: [u32; 17] = [
    0,
    0b11,                // x + 1
    0b111,               // x^2 + x + 1
    0b1011,              // x^3 + x + 1
    0b10011,             // x^4 + x + 1
    0b100101,            // x^5 + x^2 + 1
    0b1000011,           // x^6 + x + 1
    0b10001001,          // x^7 + x^3 + 1
    0b100011101,         // x^8 + x^4 + x^3 + x^2 + 1
    0b1000010001,        // x^9 + x^4 + 1
    0b10000001001,       // x^10 + x^3 + 1
    0b100000000101,      // x^11 + x^2 + 1
    0b1000001010011,     // x^12 + x^6 + x^4 + x + 1
    0b10000000011011,    // x^13 + x^4 + x^3 + x + 1
    0b100010001000011,   // x^14 + x^10 + x^6 + x + 1
    0b1000000000000011,  // x^15 + x + 1
    0b10001000000001011, // x^16 + x^12 + x^3 + x + 1
];

/// An element of GF(2^E). Bit `j` of `value` is the coefficient of `α^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Immutable description of GF(2^E): modulus, primitive element and the
/// log/antilog tables all arithmetic routes through.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    extension_degree: u32,
    modulus: u32,
    primitive_element: FieldElement,
    /// `log_table[x]` = k with α^k = x, for 1 ≤ x < 2^E. Entry 0 is unused.
    log_table: Vec<u32>,
    /// `antilog_table[k]` = α^k for 0 ≤ k ≤ 2^E − 2.
    antilog_table: Vec<u32>,
}

impl FieldSpec {
    /// Builds GF(2^E) for 1 ≤ E ≤ 16, verifying that the tabulated modulus
    /// is irreducible and that α = x has multiplicative order 2^E − 1.
    pub fn new(extension_degree: u32) -> Result<Self, FieldError> {
        if !(1..=16).contains(&extension_degree) {
            return Err(FieldError::UnsupportedDegree(extension_degree));
        }
        let modulus = MODULI[extension_degree as usize];
        if !is_irreducible(modulus, extension_degree) {
            return Err(FieldError::ReducibleModulus(modulus));
        }

        let order = (1u32 << extension_degree) - 1;
        let alpha = if extension_degree == 1 { 1 } else { 2 };
        let mut log_table = vec![u32::MAX; 1 << extension_degree];
        let mut antilog_table = vec![0u32; order as usize];
        let mut acc = 1u32;
        for k in 0..order {
            if log_table[acc as usize] != u32::MAX {
                // revisited an element before exhausting the order
                return Err(FieldError::NotPrimitive(modulus));
            }
            log_table[acc as usize] = k;
            antilog_table[k as usize] = acc;
            acc = poly_mul_mod(acc, alpha, modulus, extension_degree);
        }
        if acc != 1 {
            return Err(FieldError::NotPrimitive(modulus));
        }

        Ok(FieldSpec {
            extension_degree,
            modulus,
            primitive_element: FieldElement(alpha),
            log_table,
            antilog_table,
        })
    }

    pub fn extension_degree(&self) -> u32 {
        self.extension_degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// α, the residue class of x.
    pub fn primitive_element(&self) -> FieldElement {
        self.primitive_element
    }

    /// 2^E, the number of field elements.
    pub fn field_size(&self) -> u32 {
        1 << self.extension_degree
    }

    /// 2^E − 1, the order of the multiplicative group.
    pub fn group_order(&self) -> u32 {
        self.field_size() - 1
    }

    /// Iterator over all field elements, zero first.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.field_size()).map(FieldElement)
    }

    fn check(&self, a: FieldElement) -> Result<(), FieldError> {
        if a.0 < self.field_size() {
            Ok(())
        } else {
            Err(FieldError::OutOfRange {
                value: a.0,
                degree: self.extension_degree,
            })
        }
    }

    /// Addition in characteristic 2: bitwise XOR.
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    /// Product via the log/antilog tables.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let k = (self.log_table[a.0 as usize] as u64 + self.log_table[b.0 as usize] as u64)
            % self.group_order() as u64;
        FieldElement(self.antilog_table[k as usize])
    }

    /// Product by direct polynomial multiplication and reduction. Slower
    /// route used to cross-check the tables.
    pub fn mul_poly(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(poly_mul_mod(a.0, b.0, self.modulus, self.extension_degree))
    }

    /// Multiplicative inverse; zero is rejected.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let order = self.group_order();
        let k = (order - self.log_table[a.0 as usize]) % order;
        Ok(FieldElement(self.antilog_table[k as usize]))
    }

    /// a^k, with a^0 = 1 and negative exponents via the inverse.
    pub fn pow(&self, a: FieldElement, k: i64) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return match k {
                0 => Ok(FieldElement::ONE),
                _ if k > 0 => Ok(FieldElement::ZERO),
                _ => Err(FieldError::ZeroNegativePower),
            };
        }
        let order = self.group_order() as i64;
        let e = (self.log_table[a.0 as usize] as i64 * (k % order)).rem_euclid(order);
        Ok(FieldElement(self.antilog_table[e as usize]))
    }

    /// Big-endian bit string of an element: index 0 carries the coefficient
    /// of α^{E−1}.
    pub fn symbol_to_bits(&self, a: FieldElement) -> Vec<u8> {
        (0..self.extension_degree)
            .rev()
            .map(|j| ((a.0 >> j) & 1) as u8)
            .collect()
    }

    /// Inverse of [`symbol_to_bits`](Self::symbol_to_bits); the slice must
    /// have length E.
    pub fn bits_to_symbol(&self, bits: &[u8]) -> Result<FieldElement, FieldError> {
        if bits.len() != self.extension_degree as usize {
            return Err(FieldError::BitLength {
                got: bits.len(),
                want: self.extension_degree as usize,
            });
        }
        let mut v = 0u32;
        for &b in bits {
            v = (v << 1) | (b & 1) as u32;
        }
        Ok(FieldElement(v))
    }
}

/// Carryless multiply of two GF(2)[x] polynomials followed by reduction
/// modulo `modulus` (degree `degree`).
fn poly_mul_mod(a: u32, b: u32, modulus: u32, degree: u32) -> u32 {
    let mut prod = 0u64;
    let (a, b) = (a as u64, b as u64);
    for j in 0..32 {
        if (b >> j) & 1 == 1 {
            prod ^= a << j;
        }
    }
    // reduce from the top down
    for j in (degree..64).rev() {
        if (prod >> j) & 1 == 1 {
            prod ^= (modulus as u64) << (j - degree);
        }
    }
    prod as u32
}

/// Irreducibility over GF(2) by trial division by every polynomial of
/// degree 1..=E/2. Fine for E ≤ 16.
fn is_irreducible(modulus: u32, degree: u32) -> bool {
    for d in 1..=degree / 2 {
        for divisor in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_rem(modulus, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = 31 - b.leading_zeros();
    while a != 0 {
        let da = 31 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

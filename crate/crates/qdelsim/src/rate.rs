//! Code-rate formulas and the rate-convergence table, in exact rational
//! arithmetic.
//!
//! For the composed code the rate is E(K_C+K_D−N)/(N(E+2t)); the bare
//! quantum Reed-Solomon code has rate (K_C+K_D−N)/N. The table follows the
//! convergence construction N = 2^E − 1, K_D = N − t, K_C = ⌊γN⌋, whose
//! emitted rates are sandwiched between
//! (γN−1−t)E/(N(E+2t)) and (γN−t)E/(N(E+2t)).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::CodeError;

/// Rate of the composed code Q: E(K_C + K_D − N) / (N(E + 2t)).
pub fn code_rate_q(e: u64, n: u64, k_c: u64, k_d: u64, t: u64) -> BigRational {
    let num = BigInt::from(e) * (BigInt::from(k_c) + BigInt::from(k_d) - BigInt::from(n));
    let den = BigInt::from(n) * BigInt::from(e + 2 * t);
    BigRational::new(num, den)
}

/// Rate of the bare quantum Reed-Solomon code: (K_C + K_D − N) / N.
pub fn code_rate_r(n: u64, k_c: u64, k_d: u64) -> BigRational {
    BigRational::new(
        BigInt::from(k_c) + BigInt::from(k_d) - BigInt::from(n),
        BigInt::from(n),
    )
}

/// A rate-convergence query: target rate γ, deletion budget t and a range
/// of extension degrees. Requires 2^E − 1 > 2t across the range.
#[derive(Debug, Clone)]
pub struct RateQuery {
    pub gamma: BigRational,
    pub t: u64,
    pub e_min: u32,
    pub e_max: u32,
}

impl RateQuery {
    pub fn validate(&self) -> Result<(), CodeError> {
        if self.gamma.is_negative() || self.gamma > BigRational::one() {
            return Err(CodeError::InvalidParams(format!(
                "gamma = {} outside [0, 1]",
                self.gamma
            )));
        }
        if self.e_min == 0 || self.e_min > self.e_max {
            return Err(CodeError::InvalidParams(format!(
                "bad extension degree range {}..={}",
                self.e_min, self.e_max
            )));
        }
        for e in self.e_min..=self.e_max {
            let n = (BigInt::one() << e) - 1;
            if n <= BigInt::from(2 * self.t) {
                return Err(CodeError::InvalidParams(format!(
                    "2^E - 1 > 2t violated at E = {e}, t = {}",
                    self.t
                )));
            }
        }
        Ok(())
    }
}

/// One row of the convergence table.
#[derive(Debug, Clone)]
pub struct RateRow {
    pub e: u32,
    pub n: BigInt,
    pub k_c: BigInt,
    pub k_d: BigInt,
    pub rate: BigRational,
    pub lower: BigRational,
    pub upper: BigRational,
    /// Whether t ≤ K_C ≤ N − t holds; rows outside the constraint carry no
    /// constructible code.
    pub feasible: bool,
}

/// The convergence table over the queried extension degrees.
pub fn rate_table(query: &RateQuery) -> Result<Vec<RateRow>, CodeError> {
    query.validate()?;
    let t = BigInt::from(query.t);
    let mut rows = Vec::new();
    for e in query.e_min..=query.e_max {
        let n: BigInt = (BigInt::one() << e) - 1;
        let k_d = &n - &t;
        let k_c = (&query.gamma * BigRational::from(n.clone())).floor().to_integer();
        let feasible = k_c >= t && &k_c + &t <= n;

        let e_big = BigInt::from(e);
        let den = BigRational::from(&n * (&e_big + BigInt::from(2 * query.t)));
        let rate = BigRational::from((&k_c - &t) * &e_big) / den.clone();
        let gamma_n = &query.gamma * BigRational::from(n.clone());
        let e_rat = BigRational::from(e_big);
        let lower = (&gamma_n - BigRational::from(BigInt::one() + &t)) * &e_rat / den.clone();
        let upper = (&gamma_n - BigRational::from(t.clone())) * &e_rat / den;

        rows.push(RateRow { e, n: n.clone(), k_c, k_d, rate, lower, upper, feasible });
    }
    Ok(rows)
}

/// Parses γ from a decimal string ("0.25") or a fraction ("1/4").
pub fn parse_gamma(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let int: BigInt = if int_part.is_empty() { BigInt::zero() } else { int_part.parse().ok()? };
        if !frac_part.chars().all(|c| c.is_ascii_digit()) || frac_part.is_empty() {
            return None;
        }
        let frac: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let sign = if s.starts_with('-') { -BigInt::one() } else { BigInt::one() };
        return Some(BigRational::new(int.magnitude().clone().into(), BigInt::one()) * sign.clone()
            + BigRational::new(frac, scale) * sign);
    }
    let int: BigInt = s.parse().ok()?;
    Some(BigRational::from(int))
}

/// Renders a rational as a decimal with the given number of significant
/// digits.
pub fn to_decimal(r: &BigRational, sig_digits: usize) -> String {
    let v = r.to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exponent = v.abs().log10().floor() as i64;
    let precision = (sig_digits as i64 - 1 - exponent).max(0) as usize;
    format!("{v:.precision$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn grid1_rates() {
        // E=2, N=3, t=1, K_C=K_D=2: rate(Q) = 2/12 = 1/6, rate(R) = 1/3,
        // cross-checked against log2(dim)/length
        assert_eq!(code_rate_q(2, 3, 2, 2, 1), rational(1, 6));
        assert_eq!(code_rate_r(3, 2, 2), rational(1, 3));
        let log2_dim = 2.0 * (2.0 + 2.0 - 3.0);
        assert!((code_rate_q(2, 3, 2, 2, 1).to_f64().unwrap() - log2_dim / 12.0).abs() < 1e-15);

        // K_C + K_D = N: rate 0
        assert_eq!(code_rate_q(2, 3, 2, 1, 1), rational(0, 1));
        // t = 0: rate(Q) = rate(R)
        assert_eq!(code_rate_q(2, 3, 2, 2, 0), code_rate_r(3, 2, 2));
    }

    #[test]
    fn theorem2_reference_row() {
        // γ = 0.5, t = 1, E = 10: N = 1023, K_C = 511, rate = 5100/12276
        let query = RateQuery {
            gamma: rational(1, 2),
            t: 1,
            e_min: 10,
            e_max: 10,
        };
        let rows = rate_table(&query).unwrap();
        let row = &rows[0];
        assert_eq!(row.n, BigInt::from(1023));
        assert_eq!(row.k_c, BigInt::from(511));
        assert_eq!(row.k_d, BigInt::from(1022));
        assert_eq!(row.rate, rational(5100, 12276));
        assert!(row.feasible);
        assert!((row.rate.to_f64().unwrap() - 0.41544).abs() < 1e-5);
    }

    #[test]
    fn sandwich_bounds_hold() {
        for (gn, gd) in [(1i64, 4i64), (1, 2), (3, 4), (1, 1)] {
            for t in [0u64, 1, 2] {
                let query = RateQuery {
                    gamma: rational(gn, gd),
                    t,
                    e_min: 3,
                    e_max: 12,
                };
                for row in rate_table(&query).unwrap() {
                    assert!(row.lower <= row.rate && row.rate <= row.upper);
                }
            }
        }
    }

    #[test]
    fn gamma_one_t_zero_is_rate_one() {
        let query = RateQuery { gamma: rational(1, 1), t: 0, e_min: 2, e_max: 8 };
        for row in rate_table(&query).unwrap() {
            assert_eq!(row.rate, BigRational::one());
            assert!(row.feasible);
        }
    }

    #[test]
    fn gamma_zero_is_infeasible() {
        let query = RateQuery { gamma: rational(0, 1), t: 1, e_min: 2, e_max: 6 };
        for row in rate_table(&query).unwrap() {
            assert!(!row.feasible);
            assert!(row.rate <= BigRational::zero());
        }
    }

    #[test]
    fn bounds_converge_symbolically() {
        // exact-rational check at E = 60: both sandwich bounds sit within
        // 2tγ/E + (t+1)/N of γ, an envelope that vanishes as E grows
        for (gn, gd) in [(1i64, 4), (1, 2), (3, 4)] {
            for t in [1u64, 2] {
                let gamma = rational(gn, gd);
                let query = RateQuery { gamma: gamma.clone(), t, e_min: 60, e_max: 60 };
                let row = &rate_table(&query).unwrap()[0];
                let envelope = rational(2 * t as i64, 60) * gamma.clone()
                    + BigRational::new(BigInt::from(t + 1), row.n.clone());
                assert!(gamma.clone() - row.upper.clone() >= BigRational::zero());
                assert!(gamma.clone() - row.lower.clone() <= envelope);
                // and the envelope at E=60 is strictly tighter than at E=12
                let q12 = RateQuery { gamma: gamma.clone(), t, e_min: 12, e_max: 12 };
                let row12 = &rate_table(&q12).unwrap()[0];
                assert!(
                    gamma.clone() - row.lower.clone() < gamma.clone() - row12.lower.clone()
                );
            }
        }
    }

    #[test]
    fn gamma_parsing() {
        assert_eq!(parse_gamma("0.5").unwrap(), rational(1, 2));
        assert_eq!(parse_gamma("1/4").unwrap(), rational(1, 4));
        assert_eq!(parse_gamma("0.25").unwrap(), rational(1, 4));
        assert_eq!(parse_gamma("1").unwrap(), rational(1, 1));
        assert!(parse_gamma("abc").is_none());
        assert!(parse_gamma("1/0").is_none());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rational(5100, 12276), 12), "0.415444770283");
        assert_eq!(to_decimal(&rational(0, 1), 12), "0");
        assert_eq!(to_decimal(&rational(1, 1), 12), "1.00000000000");
    }
}

//! Deciding `x^3 ≡ c (mod m)`.
//!
//! A prime modulus `p ≡ 2 (mod 3)` or `p = 3` makes cubing a bijection
//! on units, so every unit is a cube. For `p ≡ 1 (mod 3)` the answer comes
//! from Euler's criterion `c^{(p-1)/3} ≡ 1`, from the direct character, or
//! from the rational rules. Composite moduli are reduced to their prime
//! factors:
//!
//! - `p^k` with `p >= 5` behaves like `p` (Hensel lifting, since `3 ∤ p`);
//! - `3^k` with `k >= 2` needs `c ≡ ±1 (mod 9)`;
//! - `2^k` imposes nothing, cubing permutes the odd residues.
//!
//! Only `c` coprime to `m` is supported.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::arith;
use crate::character::{chi_int, CharacterContext};
use crate::decompose::decompose_prime;
use crate::factor::{factor, FactorError, DEFAULT_FACTOR_BOUND};
use crate::ratchar::{RatCharError, RationalCharacter};

/// Largest modulus the exhaustive oracle accepts.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(BigInt),
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("gcd({c}, {m}) = {gcd} > 1; only coprime inputs are supported")]
    NotCoprime { c: BigInt, m: BigInt, gcd: BigInt },
    #[error("exhaustive search is limited to moduli up to {EXHAUSTIVE_LIMIT}, got {0}")]
    TooLarge(BigInt),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    RatChar(#[from] RatCharError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    /// Rational rules for each prime factor `p ≡ 1 (mod 3)`.
    Rules,
    /// Character of the primary prime over each such `p`.
    DirectCharacter,
    /// `c^{(p-1)/3} mod p`.
    #[default]
    Exponentiation,
    /// Try every `x` in `[0, m)`.
    Exhaustive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rules => "rules",
            Method::DirectCharacter => "direct",
            Method::Exponentiation => "exponentiation",
            Method::Exhaustive => "exhaustive",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rules" => Ok(Method::Rules),
            "direct" => Ok(Method::DirectCharacter),
            "exponentiation" | "exp" => Ok(Method::Exponentiation),
            "exhaustive" => Ok(Method::Exhaustive),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

/// Is `c` a cube modulo the prime `p`, `p ∤ c`?
pub fn is_cubic_residue_prime(c: &BigInt, p: &BigInt) -> Result<bool, SolverError> {
    if !arith::is_prime(p) {
        return Err(SolverError::NotPrime(p.clone()));
    }
    if c.is_multiple_of(p) {
        return Err(SolverError::NotCoprime {
            c: c.clone(),
            m: p.clone(),
            gcd: p.clone(),
        });
    }
    if let Some(pw) = p.to_u64() {
        if pw == 3 || pw % 3 == 2 {
            return Ok(true);
        }
        let cw = arith::reduce_big(c, pw);
        return Ok(arith::pow_mod(cw, (pw - 1) / 3, pw) == 1);
    }
    let three = BigInt::from(3);
    if p.mod_floor(&three) == BigInt::from(2) {
        return Ok(true);
    }
    let e = (p - 1u32) / &three;
    Ok(c.mod_floor(p).modpow(&e, p).is_one())
}

/// `x^3 ≡ c (mod m)` solvable, by reduction to prime factors of `m`.
pub fn is_cubic_residue(c: &BigInt, m: &BigInt) -> Result<bool, SolverError> {
    decide(c, m, Method::Exponentiation, DEFAULT_FACTOR_BOUND)
}

/// The same reduction with a choice of prime-level method.
pub fn decide(c: &BigInt, m: &BigInt, method: Method, factor_bound: u64) -> Result<bool, SolverError> {
    if m < &BigInt::from(2) {
        return Err(SolverError::ModulusTooSmall(m.clone()));
    }
    let g = c.gcd(m);
    if !g.is_one() {
        return Err(SolverError::NotCoprime {
            c: c.clone(),
            m: m.clone(),
            gcd: g,
        });
    }
    if method == Method::Exhaustive {
        return exhaustive_oracle(c, m);
    }
    if method == Method::Exponentiation {
        if let Some(mw) = m.to_u64().filter(|&x| x <= WORD_FACTOR_LIMIT) {
            return Ok(decide_word(arith::reduce_big(c, mw), mw));
        }
    }
    let f = factor(m, factor_bound)?;
    for (p, k) in &f.factors {
        let ok = match p.to_u64() {
            Some(2) => true,
            Some(3) => *k == 1 || matches!(arith::reduce_big(c, 9), 1 | 8),
            _ => prime_level(c, p, method)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Moduli up to this size are factored by word-sized trial division.
const WORD_FACTOR_LIMIT: u64 = 1 << 40;

/// Exponentiation path for `c` already reduced and coprime to `m`.
fn decide_word(c: u64, m: u64) -> bool {
    let mut rest = m;
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            let mut k = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                k += 1;
            }
            if !prime_power_word(c, d, k) {
                return false;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    rest == 1 || prime_power_word(c, rest, 1)
}

fn prime_power_word(c: u64, p: u64, k: u32) -> bool {
    match p {
        2 => true,
        3 => k == 1 || matches!(c % 9, 1 | 8),
        _ if p % 3 == 2 => true,
        _ => arith::pow_mod(c % p, (p - 1) / 3, p) == 1,
    }
}

fn prime_level(c: &BigInt, p: &BigInt, method: Method) -> Result<bool, SolverError> {
    if !p.mod_floor(&BigInt::from(3)).is_one() {
        return is_cubic_residue_prime(c, p);
    }
    match method {
        Method::Exponentiation | Method::Exhaustive => is_cubic_residue_prime(c, p),
        Method::DirectCharacter => {
            let d = decompose_prime(p).map_err(RatCharError::from)?;
            Ok(chi_int(&CharacterContext::from_decomposition(&d), c).is_one())
        }
        Method::Rules => Ok(RationalCharacter::new(p)?.chi(c)?.is_one()),
    }
}

/// Which residues modulo `m` are cubes: `out[r]` for `r` in `[0, m)`.
pub fn cube_residues(m: u64) -> Result<Vec<bool>, SolverError> {
    if m == 0 || m > EXHAUSTIVE_LIMIT {
        return Err(SolverError::TooLarge(BigInt::from(m)));
    }
    let mut out = vec![false; m as usize];
    for x in 0..m {
        out[arith::mul_mod(arith::mul_mod(x, x, m), x, m) as usize] = true;
    }
    Ok(out)
}

/// Ground truth by trying every `x` in `[0, m)`.
pub fn exhaustive_oracle(c: &BigInt, m: &BigInt) -> Result<bool, SolverError> {
    let mw = m
        .to_u64()
        .filter(|&x| (1..=EXHAUSTIVE_LIMIT).contains(&x))
        .ok_or_else(|| SolverError::TooLarge(m.clone()))?;
    let target = arith::reduce_big(c, mw);
    Ok((0..mw).any(|x| arith::mul_mod(arith::mul_mod(x, x, mw), x, mw) == target))
}

/// A residuosity question bundled with how to answer it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueQuery {
    pub c: BigInt,
    pub m: BigInt,
    pub method: Method,
}

impl ResidueQuery {
    pub fn new(c: impl Into<BigInt>, m: impl Into<BigInt>, method: Method) -> Self {
        ResidueQuery {
            c: c.into(),
            m: m.into(),
            method,
        }
    }

    pub fn decide(&self) -> Result<bool, SolverError> {
        decide(&self.c, &self.m, self.method, DEFAULT_FACTOR_BOUND)
    }
}

/// Euler's criterion for 2: a cube modulo `p ≡ 1 (mod 3)` exactly when
/// `L` and `M` are both even.
pub fn two_is_cube_by_parity(p: &BigInt) -> Result<bool, SolverError> {
    let d = decompose_prime(p).map_err(RatCharError::from)?;
    Ok(d.l.is_even() && d.m.is_even())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn prime_moduli() {
        assert!(is_cubic_residue_prime(&b(490), &b(63601)).unwrap());
        assert!(is_cubic_residue_prime(&b(2), &b(31)).unwrap());
        assert_eq!(arith::pow_mod(4, 3, 31), 2);
        assert!(!is_cubic_residue_prime(&b(2), &b(7)).unwrap());
        for c in 1..5 {
            assert!(is_cubic_residue_prime(&b(c), &b(5)).unwrap());
        }
        assert!(is_cubic_residue_prime(&b(2), &b(3)).unwrap());
        assert!(matches!(
            is_cubic_residue_prime(&b(14), &b(7)),
            Err(SolverError::NotCoprime { .. })
        ));
        assert!(matches!(is_cubic_residue_prime(&b(2), &b(9)), Err(SolverError::NotPrime(_))));
    }

    #[test]
    fn big_prime_example() {
        let p: BigInt = (BigInt::from(3u32).pow(19u32) + BigInt::from(5u32).pow(82u32)) / 4u32;
        assert!(!is_cubic_residue_prime(&b(1982), &p).unwrap());
        assert!(!decide(&b(1982), &p, Method::Rules, DEFAULT_FACTOR_BOUND).unwrap());
        assert!(!decide(&b(1982), &p, Method::DirectCharacter, DEFAULT_FACTOR_BOUND).unwrap());
    }

    #[test]
    fn composite_moduli() {
        assert!(is_cubic_residue(&b(8), &b(9)).unwrap());
        assert!(!is_cubic_residue(&b(2), &b(9)).unwrap());
        assert!(matches!(
            is_cubic_residue(&b(490), &b(63601 * 2)),
            Err(SolverError::NotCoprime { gcd, .. }) if gcd == b(2)
        ));
        let table = cube_residues(91).unwrap();
        assert_eq!(is_cubic_residue(&b(10), &b(91)).unwrap(), table[10]);
        assert_eq!(
            is_cubic_residue(&b(10), &b(91)).unwrap(),
            is_cubic_residue(&b(10), &b(7)).unwrap() && is_cubic_residue(&b(10), &b(13)).unwrap()
        );
        assert!(matches!(is_cubic_residue(&b(1), &b(1)), Err(SolverError::ModulusTooSmall(_))));
    }

    #[test]
    fn oracle() {
        assert!(exhaustive_oracle(&b(2), &b(31)).unwrap());
        assert!(!exhaustive_oracle(&b(2), &b(7)).unwrap());
        assert_eq!(
            cube_residues(7).unwrap(),
            [true, true, false, false, false, false, true]
        );
        for m in [1i64, 2, 17, 1000] {
            assert!(exhaustive_oracle(&b(0), &b(m)).unwrap());
        }
        assert!(exhaustive_oracle(&b(490), &b(63601)).unwrap());
        assert!(matches!(exhaustive_oracle(&b(1), &b(2_000_000)), Err(SolverError::TooLarge(_))));
    }

    #[test]
    fn methods_agree_on_small_moduli() {
        for m in 2..400i64 {
            let table = cube_residues(m as u64).unwrap();
            for c in 1..m {
                if num_integer::gcd(c, m) != 1 {
                    continue;
                }
                for method in [Method::Exponentiation, Method::DirectCharacter, Method::Rules] {
                    let got = decide(&b(c), &b(m), method, 1000).unwrap();
                    assert_eq!(got, table[c as usize], "c={c} m={m} {method}");
                }
            }
        }
    }

    #[test]
    fn parity_criterion_for_two() {
        for p in arith::primes_up_to(5000).into_iter().filter(|p| p % 3 == 1) {
            let p = b(p as i64);
            assert_eq!(
                two_is_cube_by_parity(&p).unwrap(),
                is_cubic_residue_prime(&b(2), &p).unwrap()
            );
        }
    }

    #[test]
    fn method_names() {
        for m in [Method::Rules, Method::DirectCharacter, Method::Exponentiation, Method::Exhaustive] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
    }
}

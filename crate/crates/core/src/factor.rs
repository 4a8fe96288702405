//! Integer factorization: trial division followed by Brent's variant of
//! Pollard's rho, with every reported factor checked for primality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

/// Minimum rho iteration budget regardless of the trial-division bound.
const RHO_MIN_BUDGET: u64 = 1 << 16;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{self, add_mod, mul_mod};

/// Trial-division bound used when the caller has no preference.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("cannot factor zero")]
    Zero,
    #[error("could not split the cofactor {cofactor} within the search bound {bound}")]
    Unfactored { cofactor: BigInt, bound: u64 },
}

/// `sign * prod(p^e)`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    pub sign: i8,
    pub factors: Vec<(BigInt, u32)>,
}

impl FactoredInteger {
    /// Multiply the factorization back out.
    pub fn value(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        acc
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Accept a factorization supplied by the caller after checking that
    /// every base is prime. Repeated primes are merged.
    pub fn from_parts(sign: i8, parts: impl IntoIterator<Item = (BigInt, u32)>) -> Option<Self> {
        if sign != 1 && sign != -1 {
            return None;
        }
        let mut factors: Vec<(BigInt, u32)> = Vec::new();
        for (p, e) in parts {
            if !arith::is_prime(&p) {
                return None;
            }
            if e > 0 {
                factors.push((p, e));
            }
        }
        Some(FactoredInteger {
            sign,
            factors: merge(factors),
        })
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", self.sign);
        }
        if self.sign < 0 {
            write!(f, "-")?;
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn merge(mut factors: Vec<(BigInt, u32)>) -> Vec<(BigInt, u32)> {
    factors.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::with_capacity(factors.len());
    for (p, e) in factors {
        match out.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => out.push((p, e)),
        }
    }
    out
}

/// Factor `c`. Trial division runs up to `bound`; what remains is split
/// by rho with an iteration budget of `max(bound, 2^16)` per attempt,
/// which reliably finds prime factors up to roughly the square of that
/// budget.
pub fn factor(c: &BigInt, bound: u64) -> Result<FactoredInteger, FactorError> {
    if c.is_zero() {
        return Err(FactorError::Zero);
    }
    let sign = if c.is_negative() { -1 } else { 1 };
    let mut n = c.abs();
    let mut found = Vec::new();

    let mut d = 2u64;
    while d <= bound.max(2) {
        let dd = BigInt::from(d);
        if &dd * &dd > n {
            break;
        }
        if (&n % d).is_zero() {
            let mut e = 0;
            while (&n % d).is_zero() {
                n /= d;
                e += 1;
            }
            found.push((dd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }

    let mut pending = vec![n];
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        if arith::is_prime(&m) {
            found.push((m, 1));
            continue;
        }
        if let Some(r) = perfect_root(&m) {
            let (root, k) = r;
            for _ in 0..k {
                pending.push(root.clone());
            }
            continue;
        }
        match split(&m, bound) {
            Some(f) => {
                pending.push(&m / &f);
                pending.push(f);
            }
            None => {
                return Err(FactorError::Unfactored { cofactor: m, bound });
            }
        }
    }
    Ok(FactoredInteger {
        sign,
        factors: merge(found),
    })
}

/// `n = r^k` with `k >= 2` maximal among small exponents, if any; rho
/// cycles poorly on prime powers.
fn perfect_root(n: &BigInt) -> Option<(BigInt, u32)> {
    let bits = n.bits() as u32;
    for k in (2..=bits.min(64)).rev() {
        let r = n.nth_root(k);
        if num_traits::pow(r.clone(), k as usize) == *n {
            return Some((r, k));
        }
    }
    None
}

fn split(n: &BigInt, budget: u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    if let Some(small) = n.to_u64() {
        return split_u64(small, budget).map(BigInt::from);
    }
    let budget = budget.max(RHO_MIN_BUDGET);
    (1..=8u64).find_map(|c| brent_big(n, &BigInt::from(c), budget))
}

fn split_u64(n: u64, budget: u64) -> Option<u64> {
    (1..=8u64).find_map(|c| brent_u64(n, c, budget.max(RHO_MIN_BUDGET)))
}

/// Brent's cycle detection on `x -> x^2 + c`, batching gcds.
fn brent_u64(n: u64, c: u64, budget: u64) -> Option<u64> {
    let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut x;
    let mut ys;
    let mut steps = 0u64;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r {
            ys = y;
            let batch = 128.min(r - k);
            for _ in 0..batch {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            let g = q.gcd(&n);
            steps += batch;
            if g != 1 {
                if g != n {
                    return Some(g);
                }
                // the batch overshot; replay it one step at a time
                let mut z = ys;
                loop {
                    z = f(z);
                    let g = x.abs_diff(z).gcd(&n);
                    if g != 1 {
                        return (g != n).then_some(g);
                    }
                }
            }
            k += batch;
        }
        if steps > budget {
            return None;
        }
        r *= 2;
    }
}

fn brent_big(n: &BigInt, c: &BigInt, budget: u64) -> Option<BigInt> {
    let f = |x: &BigInt| (x * x + c) % n;
    let mut y = BigInt::from(2);
    let mut r = 1u64;
    let mut q = BigInt::one();
    let mut steps = 0u64;
    loop {
        let x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r {
            let ys = y.clone();
            let batch = 128.min(r - k);
            for _ in 0..batch {
                y = f(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            steps += batch;
            let g = q.gcd(n);
            if !g.is_one() {
                if &g != n {
                    return Some(g);
                }
                let mut z = ys;
                loop {
                    z = f(&z);
                    let g = (&x - &z).abs().gcd(n);
                    if !g.is_one() {
                        return (&g != n).then_some(g);
                    }
                }
            }
            k += batch;
        }
        if steps > budget {
            return None;
        }
        r *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(v: &[(i64, u32)]) -> Vec<(BigInt, u32)> {
        v.iter().map(|&(p, e)| (BigInt::from(p), e)).collect()
    }

    #[test]
    fn worked_examples() {
        let f = factor(&BigInt::from(1982), DEFAULT_FACTOR_BOUND).unwrap();
        assert_eq!((f.sign, f.factors.clone()), (1, parts(&[(2, 1), (991, 1)])));
        let f = factor(&BigInt::from(490), DEFAULT_FACTOR_BOUND).unwrap();
        assert_eq!(f.factors, parts(&[(2, 1), (5, 1), (7, 2)]));
        let f = factor(&BigInt::from(-8), DEFAULT_FACTOR_BOUND).unwrap();
        assert_eq!((f.sign, f.factors.clone()), (-1, parts(&[(2, 3)])));
        assert_eq!(f.to_string(), "-2^3");
    }

    #[test]
    fn units_and_zero() {
        assert!(factor(&BigInt::from(1), 10).unwrap().is_unit());
        assert_eq!(factor(&BigInt::from(-1), 10).unwrap().sign, -1);
        assert_eq!(factor(&BigInt::zero(), 10), Err(FactorError::Zero));
    }

    #[test]
    fn rho_splits_beyond_trial_division() {
        let p = BigInt::from(1_000_000_007u64);
        let q = BigInt::from(998_244_353u64);
        let r = BigInt::from(4_294_967_311u64);
        let n = &p * &q * &r * &r;
        let f = factor(&n, 100).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(
            f.factors,
            vec![(q.clone(), 1), (p.clone(), 1), (r.clone(), 2)]
        );
    }

    #[test]
    fn prime_powers() {
        let n = num_traits::pow(BigInt::from(1_000_003u64), 3);
        let f = factor(&n, 10).unwrap();
        assert_eq!(f.factors, vec![(BigInt::from(1_000_003u64), 3)]);
    }

    #[test]
    fn resistant_cofactor_is_reported() {
        let p: BigInt = (BigInt::one() << 61) - 1u32;
        let q: BigInt = (BigInt::one() << 89) - 1u32;
        let n = &p * &q;
        match factor(&n, 10) {
            Err(FactorError::Unfactored { cofactor, bound }) => {
                assert_eq!(cofactor, n);
                assert_eq!(bound, 10);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn supplied_factorizations_are_checked() {
        assert!(FactoredInteger::from_parts(1, parts(&[(4, 1)])).is_none());
        let f = FactoredInteger::from_parts(1, parts(&[(7, 1), (2, 1), (7, 1)])).unwrap();
        assert_eq!(f.factors, parts(&[(2, 1), (7, 2)]));
        assert_eq!(f.value(), BigInt::from(98));
    }

    #[test]
    fn products_round_trip() {
        for n in 2..3000i64 {
            let f = factor(&BigInt::from(n), 20).unwrap();
            assert_eq!(f.value(), BigInt::from(n));
            assert!(f.factors.iter().all(|(p, _)| arith::is_prime(p)));
        }
    }
}

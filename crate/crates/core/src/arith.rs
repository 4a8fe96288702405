//! Word-sized and arbitrary-precision modular helpers shared by the rest of
//! the crate: modular powers and inverses, square roots modulo a prime,
//! Miller-Rabin primality and a small sieve.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

#[inline]
pub fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i64(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

/// Reduce an arbitrary-precision integer into `[0, m)`.
pub fn reduce_big(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue below a u64 modulus")
}

/// Nonnegative residue of `x` modulo `m > 0`.
pub fn mod_floor(x: &BigInt, m: &BigInt) -> BigInt {
    x.mod_floor(m)
}

/// `x^{-1} mod m` for arbitrary-precision values.
pub fn inv_mod_big(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = x.mod_floor(m).extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks), or
/// `None` when `a` is a non-residue.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

const SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn strong_probable_prime(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    SMALL_PRIMES[..12].iter().all(|&a| strong_probable_prime(n, a))
}

fn strong_probable_prime_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Rounds used above the deterministic range.
pub const PROBABLE_PRIME_ROUNDS: usize = 64;

/// Primality for arbitrary-precision integers. Exact below 3.317e24 (the
/// first thirteen prime bases are a proven witness set there); above that
/// it runs [`PROBABLE_PRIME_ROUNDS`] strong-pseudoprime rounds with bases
/// drawn from a fixed-seed generator, so results are reproducible.
pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n = n.magnitude();
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let deterministic_limit: BigUint = "3317044064679887385961981".parse().unwrap();
    if n < &deterministic_limit {
        return SMALL_PRIMES
            .iter()
            .all(|&a| strong_probable_prime_big(n, &BigUint::from(a)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6375_6272_6573);
    let upper = n - 2u32;
    (0..PROBABLE_PRIME_ROUNDS).all(|_| {
        let a = BigUint::from(2u32) + random_below(&mut rng, &(&upper - 2u32));
        strong_probable_prime_big(n, &a)
    })
}

fn random_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    let bytes = bound.to_bytes_le().len() + 8;
    let mut buf = vec![0u8; bytes];
    rng.fill(&mut buf[..]);
    BigUint::from_bytes_le(&buf) % bound
}

/// Sieve of Eratosthenes, inclusive of `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Integer square root of a nonnegative big integer.
pub fn isqrt_big(n: &BigInt) -> BigInt {
    num_integer::Roots::sqrt(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primality_matches_sieve() {
        let sieve = primes_up_to(10_000);
        for n in 0..=10_000u64 {
            assert_eq!(is_prime_u64(n), sieve.binary_search(&n).is_ok(), "n={n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // base-2 strong pseudoprimes and a Carmichael number
        for n in [2047u64, 3215031751, 561, 3825123056546413051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn big_primality() {
        let m127 = (BigInt::one() << 127) - 1;
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m127 * BigInt::from(3u32))));
        let p = (BigInt::from(3u32).pow(19) + BigInt::from(5u32).pow(82)) / 4;
        assert!(is_prime(&p));
        assert!(!is_prime(&(p + 2)));
    }

    #[test]
    fn sqrt_mod_all_residues() {
        for &p in &[3u64, 5, 7, 13, 17, 97, 193, 257, 7681] {
            for a in 0..p {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a),
                    None => assert_eq!(legendre(a, p), -1),
                }
            }
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(6, 9), None);
        assert_eq!(
            inv_mod_big(&BigInt::from(-2), &BigInt::from(7)),
            Some(BigInt::from(3))
        );
    }
}

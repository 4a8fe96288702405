//! Splitting a prime `p ≡ 1 (mod 3)` in `Z[w]` and reading off the pair
//! `(L, M)` with `4p = L^2 + 27 M^2`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::arith;
use crate::eisenstein::EisensteinInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("{0} is not congruent to 1 mod 3")]
    NotOneModThree(BigInt),
    #[error("3 ramifies in Z[w] and has no (L, M) decomposition")]
    Three,
    #[error("{0} is not primary")]
    NotPrimary(EisensteinInt),
    #[error("L = {0} and M = {1} have different parity")]
    ParityMismatch(BigInt, BigInt),
}

/// The canonical splitting of `p`: the primary divisor `pi = a + b w` whose
/// pair `L = 2a - b`, `M = b/3` is positive in both coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub p: BigInt,
    pub pi: EisensteinInt,
    pub l: BigInt,
    pub m: BigInt,
    /// `s` in `[0, p)` with `pi | s - w`, so `s^2 + s + 1 ≡ 0 (mod p)`.
    pub omega_image: BigInt,
}

impl Decomposition {
    /// Build the decomposition directly from a primary prime with positive
    /// `(L, M)`; used when the caller already knows `pi`.
    pub fn from_canonical_primary(pi: EisensteinInt) -> Result<Self, DecomposeError> {
        let (l, m) = lm_from_primary(&pi)?;
        if !l.is_positive() || !m.is_positive() {
            return Err(DecomposeError::NotPrimary(pi));
        }
        let p = pi.norm();
        let omega_image = omega_image_of(&pi, &p);
        Ok(Decomposition {
            p,
            pi,
            l,
            m,
            omega_image,
        })
    }
}

fn omega_image_of(pi: &EisensteinInt, p: &BigInt) -> BigInt {
    let b_inv = arith::inv_mod_big(&pi.b, p).expect("b is prime to p for a complex primary prime");
    (-&pi.a * b_inv).mod_floor(p)
}

/// Canonical decomposition of a prime `p ≡ 1 (mod 3)`.
///
/// A nontrivial cube root of unity `s = g^{(p-1)/3}` is found by trying
/// `g = 2, 3, 5, 7, ...` in order; then `gcd(p, s - w)` in `Z[w]` is a prime
/// of norm `p`, and the unique associate or conjugate with `L, M > 0` is
/// kept.
pub fn decompose_prime(p: &BigInt) -> Result<Decomposition, DecomposeError> {
    let three = BigInt::from(3);
    if p == &three {
        return Err(DecomposeError::Three);
    }
    if !arith::is_prime(p) {
        return Err(DecomposeError::NotPrime(p.clone()));
    }
    if !p.mod_floor(&three).is_one() {
        return Err(DecomposeError::NotOneModThree(p.clone()));
    }
    let exp = (p - 1u32) / 3u32;
    let s = small_primes()
        .map(|g| BigInt::from(g).modpow(&exp, p))
        .find(|s| !s.is_one())
        .expect("a cubic non-residue exists below p");
    let pi0 = EisensteinInt::rational(p.clone())
        .gcd(&EisensteinInt::new(s, -1))
        .expect("p is nonzero");
    debug_assert_eq!(&pi0.norm(), p);
    let pi = pi0
        .associates()
        .into_iter()
        .chain(pi0.conj().associates())
        .filter(|x| x.is_primary())
        .find(|x| {
            let (l, m) = lm_from_primary(x).expect("filtered to primary");
            l.is_positive() && m.is_positive()
        })
        .expect("exactly one primary divisor of p has L, M > 0");
    Decomposition::from_canonical_primary(pi)
}

fn small_primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| arith::is_prime_u64(n))
}

/// `(L, M) = (2a - b, b/3)` for a primary `pi = a + b w`. Signs are kept.
pub fn lm_from_primary(pi: &EisensteinInt) -> Result<(BigInt, BigInt), DecomposeError> {
    if !pi.is_primary() {
        return Err(DecomposeError::NotPrimary(pi.clone()));
    }
    Ok((&pi.a * 2 - &pi.b, &pi.b / 3))
}

/// Inverse of [`lm_from_primary`]: `a = (L + 3M)/2`, `b = 3M`.
pub fn primary_from_lm(l: &BigInt, m: &BigInt) -> Result<EisensteinInt, DecomposeError> {
    let sum: BigInt = l + m * 3u32;
    if sum.is_odd() {
        return Err(DecomposeError::ParityMismatch(l.clone(), m.clone()));
    }
    Ok(EisensteinInt::new(sum / 2, m * 3))
}

/// The integer in `[0, p)` congruent to `alpha` modulo the canonical `pi`.
pub fn rational_image(alpha: &EisensteinInt, d: &Decomposition) -> BigInt {
    (&alpha.a + &alpha.b * &d.omega_image).mod_floor(&d.p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    /// All positive (L, M) with L^2 + 27 M^2 = 4p, by direct search over M.
    fn brute_force_lm(p: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        let mut m = 1;
        while 27 * m * m < 4 * p {
            let rest = 4 * p - 27 * m * m;
            let l = (rest as f64).sqrt().round() as i64;
            for cand in [l - 1, l, l + 1] {
                if cand > 0 && cand * cand == rest {
                    out.push((cand, m));
                }
            }
            m += 1;
        }
        out
    }

    #[test]
    fn known_decompositions() {
        for (p, l, m) in [(7, 1, 1), (31, 4, 2), (63601, 19, 97), (61, 1, 3)] {
            let d = decompose_prime(&big(p)).unwrap();
            assert_eq!((d.l.clone(), d.m.clone()), (big(l), big(m)), "p={p}");
            assert_eq!(brute_force_lm(p), vec![(l, m)]);
        }
    }

    #[test]
    fn matches_brute_force_below_20000() {
        for p in arith::primes_up_to(20_000).into_iter().filter(|p| p % 3 == 1) {
            let d = decompose_prime(&big(p as i64)).unwrap();
            let expect = brute_force_lm(p as i64);
            assert_eq!(expect.len(), 1, "p={p}");
            assert_eq!((d.l.clone(), d.m.clone()), (big(expect[0].0), big(expect[0].1)));
            let s = &d.omega_image;
            assert!(((s * s + s + 1u32) % &d.p).is_zero());
            assert!(!s.is_one());
            assert!(rational_image(&d.pi, &d).is_zero());
        }
    }

    #[test]
    fn decompose_errors() {
        assert_eq!(decompose_prime(&big(3)), Err(DecomposeError::Three));
        assert_eq!(decompose_prime(&big(11)), Err(DecomposeError::NotOneModThree(big(11))));
        assert_eq!(decompose_prime(&big(91)), Err(DecomposeError::NotPrime(big(91))));
        assert_eq!(decompose_prime(&big(1)), Err(DecomposeError::NotPrime(big(1))));
    }

    #[test]
    fn lm_maps() {
        let e = EisensteinInt::new;
        assert_eq!(lm_from_primary(&e(2, 3)).unwrap(), (big(1), big(1)));
        assert_eq!(lm_from_primary(&e(5, 6)).unwrap(), (big(4), big(2)));
        assert_eq!(lm_from_primary(&e(-2, -3)).unwrap(), (big(-1), big(-1)));
        assert!(lm_from_primary(&e(1, -1)).is_err());
        assert_eq!(primary_from_lm(&big(1), &big(1)).unwrap(), e(2, 3));
        assert_eq!(primary_from_lm(&big(19), &big(97)).unwrap(), e(155, 291));
        assert_eq!(primary_from_lm(&big(4), &big(2)).unwrap(), e(5, 6));
        assert!(matches!(
            primary_from_lm(&big(2), &big(1)),
            Err(DecomposeError::ParityMismatch(_, _))
        ));
    }

    #[test]
    fn conjugate_flips_m() {
        let d = decompose_prime(&big(63601)).unwrap();
        assert_eq!(lm_from_primary(&d.pi.conj()).unwrap(), (big(19), big(-97)));
        assert_eq!(lm_from_primary(&-d.pi.clone()).unwrap(), (big(-19), big(-97)));
    }

    #[test]
    fn rational_images() {
        let d = decompose_prime(&big(7)).unwrap();
        assert_eq!(d.pi, EisensteinInt::new(2, 3));
        assert_eq!(rational_image(&EisensteinInt::omega(), &d), big(4));
        assert_eq!(rational_image(&EisensteinInt::rational(5), &d), big(5));
        assert_eq!(rational_image(&EisensteinInt::rational(12), &d), big(5));
        assert!(rational_image(&d.pi, &d).is_zero());
    }

    #[test]
    fn big_prime_from_the_1982_example() {
        let p: BigInt = (BigInt::from(3u32).pow(19u32) + BigInt::from(5u32).pow(82u32)) / 4u32;
        assert_eq!(p.to_string().len(), 57);
        let d = decompose_prime(&p).unwrap();
        assert_eq!(d.l, BigInt::from(5u32).pow(41u32));
        assert_eq!(d.m, BigInt::from(3u32).pow(8u32));
    }
}

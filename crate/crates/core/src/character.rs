//! The cubic residue character `chi_pi` of a primary prime `pi`, evaluated
//! by direct exponentiation, and the table function
//! `F_q(L, M) = chi_pi(q)` for the primary `pi` attached to `(L, M)`.

use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::decompose::{self, DecomposeError, Decomposition};
use crate::eisenstein::{pow_mod_pair, residue_pow, CubeRoot, EisensteinInt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("{0} is not primary")]
    NotPrimary(EisensteinInt),
    #[error("{0} is not a prime of Z[w]")]
    NotPrime(EisensteinInt),
    #[error("operation needs a complex primary prime, got {0}")]
    NotComplex(EisensteinInt),
    #[error("{} and {} arise from the same rational prime", .0.0, .0.1)]
    SameRationalPrime(Box<(EisensteinInt, EisensteinInt)>),
    #[error("(L^2 + 27 M^2)/4 is not a prime congruent to 1 mod 3 for L = {0}, M = {1}")]
    NotFourTimesPrime(BigInt, BigInt),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

/// Value of a cubic character: zero, or a cube root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharValue {
    Zero,
    Root(CubeRoot),
}

impl CharValue {
    pub const ONE: CharValue = CharValue::Root(CubeRoot::ONE);
    pub const OMEGA: CharValue = CharValue::Root(CubeRoot::OMEGA);
    pub const OMEGA_BAR: CharValue = CharValue::Root(CubeRoot::OMEGA_BAR);

    pub fn root(self) -> Option<CubeRoot> {
        match self {
            CharValue::Zero => None,
            CharValue::Root(r) => Some(r),
        }
    }

    pub fn is_one(self) -> bool {
        self == CharValue::ONE
    }

    pub fn conj(self) -> CharValue {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root(r) => CharValue::Root(r.conj()),
        }
    }

    pub fn pow(self, e: u64) -> CharValue {
        match self {
            CharValue::Zero if e == 0 => CharValue::ONE,
            CharValue::Zero => CharValue::Zero,
            CharValue::Root(r) => CharValue::Root(r.pow(e)),
        }
    }

    /// `0`, `1`, `w` or `w2`.
    pub fn label(self) -> &'static str {
        match self {
            CharValue::Zero => "0",
            CharValue::Root(r) => r.label(),
        }
    }

    pub fn parse(s: &str) -> Option<CharValue> {
        match s {
            "0" => Some(CharValue::Zero),
            "1" => Some(CharValue::ONE),
            "w" => Some(CharValue::OMEGA),
            "w2" => Some(CharValue::OMEGA_BAR),
            _ => None,
        }
    }
}

impl Mul for CharValue {
    type Output = CharValue;
    fn mul(self, rhs: CharValue) -> CharValue {
        match (self, rhs) {
            (CharValue::Root(a), CharValue::Root(b)) => CharValue::Root(a * b),
            _ => CharValue::Zero,
        }
    }
}

impl From<CubeRoot> for CharValue {
    fn from(r: CubeRoot) -> Self {
        CharValue::Root(r)
    }
}

impl fmt::Display for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharacterKind {
    /// `pi` complex of prime norm `p ≡ 1 (mod 3)`; `omega_image` is the
    /// residue `s` with `pi | s - w`.
    Complex { p: BigInt, omega_image: BigInt },
    /// `pi = ±q` with `q ≡ 2 (mod 3)` prime.
    Rational { q: BigInt },
}

/// A validated primary prime together with what its character needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterContext {
    pub pi: EisensteinInt,
    pub kind: CharacterKind,
}

impl CharacterContext {
    pub fn new(pi: EisensteinInt) -> Result<Self, CharacterError> {
        if !pi.is_primary() {
            return Err(CharacterError::NotPrimary(pi));
        }
        let kind = if pi.is_rational() {
            let q = pi.a.abs();
            if !arith::is_prime(&q) || !q.mod_floor(&BigInt::from(3)).eq(&BigInt::from(2)) {
                return Err(CharacterError::NotPrime(pi));
            }
            CharacterKind::Rational { q }
        } else {
            let p = pi.norm();
            if !arith::is_prime(&p) {
                return Err(CharacterError::NotPrime(pi));
            }
            let b_inv = arith::inv_mod_big(&pi.b, &p).expect("b prime to p");
            let omega_image = (-&pi.a * b_inv).mod_floor(&p);
            CharacterKind::Complex { p, omega_image }
        };
        Ok(CharacterContext { pi, kind })
    }

    pub fn from_decomposition(d: &Decomposition) -> Self {
        CharacterContext {
            pi: d.pi.clone(),
            kind: CharacterKind::Complex {
                p: d.p.clone(),
                omega_image: d.omega_image.clone(),
            },
        }
    }

    /// The rational prime this `pi` arises from.
    pub fn rational_prime(&self) -> &BigInt {
        match &self.kind {
            CharacterKind::Complex { p, .. } => p,
            CharacterKind::Rational { q } => q,
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self.kind, CharacterKind::Complex { .. })
    }
}

/// `chi_pi(alpha)`.
///
/// Complex `pi`: `alpha` is mapped to `r` in `Z/p`, and `r^{(p-1)/3}` is
/// matched against `1, s, s^2`. Rational `pi = ±q`: `alpha^{(q^2-1)/3}` is
/// computed in `Z[w]/q` and matched against `1, w, w_bar`.
pub fn chi(ctx: &CharacterContext, alpha: &EisensteinInt) -> CharValue {
    match &ctx.kind {
        CharacterKind::Complex { p, omega_image } => {
            if let (Some(p), Some(s)) = (p.to_u64(), omega_image.to_u64()) {
                return chi_complex_word(p, s, alpha);
            }
            let r = (&alpha.a + &alpha.b * omega_image).mod_floor(p);
            if r.is_zero() {
                return CharValue::Zero;
            }
            let t = r.modpow(&((p - 1u32) / 3u32), p);
            let s2 = (omega_image * omega_image).mod_floor(p);
            if t.is_one() {
                CharValue::ONE
            } else if &t == omega_image {
                CharValue::OMEGA
            } else if t == s2 {
                CharValue::OMEGA_BAR
            } else {
                panic!("{t} is not a cube root of unity mod {p}; context is corrupt")
            }
        }
        CharacterKind::Rational { q } => {
            let e: BigUint = ((q * q - 1u32) / 3u32).to_biguint().expect("positive");
            let value = if let Some(qw) = q.to_u64() {
                let base = (arith::reduce_big(&alpha.a, qw), arith::reduce_big(&alpha.b, qw));
                if base == (0, 0) {
                    return CharValue::Zero;
                }
                let (a, b) = pow_mod_pair(base, &e, qw);
                EisensteinInt::new(a, b)
            } else {
                let reduced = EisensteinInt::new(alpha.a.mod_floor(q), alpha.b.mod_floor(q));
                if reduced.is_zero() {
                    return CharValue::Zero;
                }
                residue_pow(&reduced, &e, &EisensteinInt::rational(q.clone()))
            };
            let qm1 = q - 1u32;
            if value == EisensteinInt::one() {
                CharValue::ONE
            } else if value == EisensteinInt::omega() {
                CharValue::OMEGA
            } else if value.a == qm1 && value.b == qm1 {
                CharValue::OMEGA_BAR
            } else {
                panic!("{value} is not a cube root of unity mod {q}; context is corrupt")
            }
        }
    }
}

fn chi_complex_word(p: u64, s: u64, alpha: &EisensteinInt) -> CharValue {
    let r = arith::add_mod(
        arith::reduce_big(&alpha.a, p),
        arith::mul_mod(arith::reduce_big(&alpha.b, p), s, p),
        p,
    );
    if r == 0 {
        return CharValue::Zero;
    }
    let t = arith::pow_mod(r, (p - 1) / 3, p);
    if t == 1 {
        CharValue::ONE
    } else if t == s {
        CharValue::OMEGA
    } else if t == arith::mul_mod(s, s, p) {
        CharValue::OMEGA_BAR
    } else {
        panic!("{t} is not a cube root of unity mod {p}; context is corrupt")
    }
}

/// `chi_pi(n)` for a rational integer `n`.
pub fn chi_int(ctx: &CharacterContext, n: &BigInt) -> CharValue {
    chi(ctx, &EisensteinInt::rational(n.clone()))
}

/// `F_q(L, M)`: the character of the primary prime attached to `(L, M)`,
/// evaluated at `q`. Zero exactly when `q = (L^2 + 27M^2)/4`.
pub fn table_value(q: u64, l: &BigInt, m: &BigInt) -> Result<CharValue, CharacterError> {
    let four_p = l * l + m * m * 27u32;
    let (p, rem) = four_p.div_rem(&BigInt::from(4));
    if !rem.is_zero() || !arith::is_prime(&p) || !p.mod_floor(&BigInt::from(3)).is_one() {
        return Err(CharacterError::NotFourTimesPrime(l.clone(), m.clone()));
    }
    let pi = decompose::primary_from_lm(l, m)?;
    let ctx = CharacterContext::new(pi)?;
    Ok(chi_int(&ctx, &BigInt::from(q)))
}

/// `chi_pi(w) = w^{(p-1)/3}`.
pub fn chi_omega(ctx: &CharacterContext) -> Result<CubeRoot, CharacterError> {
    match &ctx.kind {
        CharacterKind::Complex { p, .. } => {
            let k = ((p - 1u32) / 3u32).mod_floor(&BigInt::from(3));
            Ok(CubeRoot::from_exponent(k.to_i64().expect("small")))
        }
        CharacterKind::Rational { .. } => Err(CharacterError::NotComplex(ctx.pi.clone())),
    }
}

/// `chi_pi(1 - w) = w^{2n}` where `a = ±(3n - 1)` for `pi = a + b w`.
/// Exactly one sign makes `n` integral because `a ≢ 0 (mod 3)`.
pub fn chi_one_minus_omega(ctx: &CharacterContext) -> CubeRoot {
    let three = BigInt::from(3);
    let a = &ctx.pi.a;
    let n = if (a + 1u32).is_multiple_of(&three) {
        (a + 1u32) / &three
    } else {
        debug_assert!((BigInt::one() - a).is_multiple_of(&three));
        (BigInt::one() - a) / &three
    };
    let k = (n * 2u32).mod_floor(&three);
    CubeRoot::from_exponent(k.to_i64().expect("small"))
}

/// Whether `chi_pi(rho) = chi_rho(pi)`. Both must be primary primes arising
/// from different rational primes.
pub fn reciprocity_check(pi: &EisensteinInt, rho: &EisensteinInt) -> Result<bool, CharacterError> {
    let a = CharacterContext::new(pi.clone())?;
    let b = CharacterContext::new(rho.clone())?;
    if a.rational_prime() == b.rational_prime() {
        return Err(CharacterError::SameRationalPrime(Box::new((pi.clone(), rho.clone()))));
    }
    Ok(chi(&a, rho) == chi(&b, pi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: i64, b: i64) -> EisensteinInt {
        EisensteinInt::new(a, b)
    }

    fn ctx(a: i64, b: i64) -> CharacterContext {
        CharacterContext::new(e(a, b)).unwrap()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn worked_values() {
        assert_eq!(chi(&ctx(2, 3), &e(5, 0)), CharValue::OMEGA);
        assert_eq!(chi(&ctx(5, 6), &e(5, 0)), CharValue::OMEGA_BAR);
        for c in [ctx(2, 3), ctx(5, 6), ctx(5, 0), ctx(-11, 0)] {
            assert_eq!(chi(&c, &e(1, 0)), CharValue::ONE);
            assert_eq!(chi(&c, &e(-1, 0)), CharValue::ONE);
        }
        for k in 1..5 {
            assert_eq!(chi(&ctx(5, 0), &e(k, 0)), CharValue::ONE);
        }
        assert_eq!(chi(&ctx(2, 3), &e(2, 3)), CharValue::Zero);
        assert_eq!(chi(&ctx(5, 0), &e(10, -5)), CharValue::Zero);
    }

    #[test]
    fn context_validation() {
        assert!(matches!(CharacterContext::new(e(1, -1)), Err(CharacterError::NotPrimary(_))));
        assert!(matches!(CharacterContext::new(e(7, 0)), Err(CharacterError::NotPrime(_))));
        assert!(matches!(CharacterContext::new(e(4, 6)), Err(CharacterError::NotPrime(_))));
        assert!(CharacterContext::new(e(-2, 0)).is_ok());
    }

    #[test]
    fn table_function_values() {
        assert_eq!(table_value(2, &big(1), &big(1)).unwrap(), CharValue::OMEGA);
        assert_eq!(table_value(2, &big(-1), &big(-1)).unwrap(), CharValue::OMEGA);
        assert_eq!(table_value(2, &big(1), &big(-1)).unwrap(), CharValue::OMEGA_BAR);
        assert_eq!(table_value(2, &big(-1), &big(1)).unwrap(), CharValue::OMEGA_BAR);
        assert_eq!(table_value(5, &big(19), &big(97)).unwrap(), CharValue::OMEGA_BAR);
        assert_eq!(table_value(7, &big(19), &big(97)).unwrap(), CharValue::OMEGA);
        assert_eq!(table_value(2, &big(19), &big(97)).unwrap(), CharValue::OMEGA_BAR);
        assert_eq!(table_value(7, &big(1), &big(1)).unwrap(), CharValue::Zero);
        assert!(table_value(5, &big(3), &big(1)).is_err());
        assert!(table_value(5, &big(2), &big(1)).is_err());
    }

    #[test]
    fn omega_and_one_minus_omega() {
        assert_eq!(chi_omega(&ctx(2, 3)).unwrap(), CubeRoot::OMEGA_BAR);
        assert_eq!(chi_omega(&ctx(-1, 3)).unwrap(), CubeRoot::OMEGA);
        let d61 = decompose::decompose_prime(&big(61)).unwrap();
        assert_eq!(chi_omega(&CharacterContext::from_decomposition(&d61)).unwrap(), CubeRoot::OMEGA_BAR);
        assert!(chi_omega(&ctx(5, 0)).is_err());
        assert_eq!(chi_one_minus_omega(&ctx(2, 3)), CubeRoot::OMEGA_BAR);
        assert_eq!(chi_one_minus_omega(&ctx(-1, 3)), CubeRoot::ONE);
        for c in [ctx(2, 3), ctx(-1, 3)] {
            assert_eq!(CharValue::Root(chi_omega(&c).unwrap()), chi(&c, &e(0, 1)));
            assert_eq!(CharValue::Root(chi_one_minus_omega(&c)), chi(&c, &e(1, -1)));
        }
    }

    #[test]
    fn reciprocity_examples() {
        assert!(reciprocity_check(&e(2, 3), &e(5, 0)).unwrap());
        assert!(reciprocity_check(&e(2, 3), &e(-1, 3)).unwrap());
        assert!(matches!(
            reciprocity_check(&e(2, 3), &e(-1, -3)),
            Err(CharacterError::SameRationalPrime(_))
        ));
    }

    #[test]
    fn big_modulus_path_matches_word_path() {
        // p exceeds u64, so this runs the arbitrary-precision branch
        let p: BigInt = (BigInt::from(3u32).pow(19u32) + BigInt::from(5u32).pow(82u32)) / 4u32;
        let d = decompose::decompose_prime(&p).unwrap();
        let c = CharacterContext::from_decomposition(&d);
        assert_eq!(chi_int(&c, &big(2)), CharValue::OMEGA);
        assert_eq!(chi_int(&c, &big(991)), CharValue::OMEGA);
        assert_eq!(chi_int(&c, &big(1982)), CharValue::OMEGA_BAR);
    }
}

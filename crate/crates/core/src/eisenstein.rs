//! Exact arithmetic in the Eisenstein integers `Z[w]`, `w = e^{2 pi i/3}`.
//!
//! Elements are stored as a coordinate pair `(a, b)` meaning `a + b w`, with
//! `w^2 = -1 - w` used to reduce products. Coordinates are arbitrary
//! precision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EisensteinError {
    #[error("gcd of zero and zero is undefined")]
    BothZero,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} has norm divisible by 3 and no primary associate")]
    NormDivisibleByThree(EisensteinInt),
}

/// A cube root of unity `w^k`, stored by its exponent `k mod 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeRoot(u8);

impl CubeRoot {
    pub const ONE: CubeRoot = CubeRoot(0);
    pub const OMEGA: CubeRoot = CubeRoot(1);
    pub const OMEGA_BAR: CubeRoot = CubeRoot(2);

    pub fn from_exponent(k: i64) -> CubeRoot {
        CubeRoot(k.rem_euclid(3) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn conj(self) -> CubeRoot {
        CubeRoot((3 - self.0) % 3)
    }

    pub fn pow(self, e: u64) -> CubeRoot {
        CubeRoot(((self.0 as u64 * (e % 3)) % 3) as u8)
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// The root as an element of `Z[w]`: `1`, `w` or `-1 - w`.
    pub fn to_eisenstein(self) -> EisensteinInt {
        match self.0 {
            0 => EisensteinInt::one(),
            1 => EisensteinInt::omega(),
            _ => EisensteinInt::new(-1, -1),
        }
    }

    /// Short ASCII label: `1`, `w`, `w2`.
    pub fn label(self) -> &'static str {
        ["1", "w", "w2"][self.0 as usize]
    }
}

impl Mul for CubeRoot {
    type Output = CubeRoot;
    fn mul(self, rhs: CubeRoot) -> CubeRoot {
        CubeRoot((self.0 + rhs.0) % 3)
    }
}

impl fmt::Display for CubeRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `a + b w` with `a, b` in `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EisensteinInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl EisensteinInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        EisensteinInt {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn rational(a: impl Into<BigInt>) -> Self {
        EisensteinInt::new(a, 0)
    }

    pub fn zero() -> Self {
        EisensteinInt::new(0, 0)
    }

    pub fn one() -> Self {
        EisensteinInt::new(1, 0)
    }

    pub fn omega() -> Self {
        EisensteinInt::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Complex conjugate: `a + b w_bar = (a - b) - b w`.
    pub fn conj(&self) -> Self {
        EisensteinInt {
            a: &self.a - &self.b,
            b: -&self.b,
        }
    }

    /// `N(a + b w) = a^2 - ab + b^2`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Primary: `3 | b` and `3 ∤ N`. The second clause rules out the
    /// associates of `1 - w` and zero.
    pub fn is_primary(&self) -> bool {
        self.b.is_multiple_of(&BigInt::from(3)) && !self.norm().is_multiple_of(&BigInt::from(3))
    }

    /// Multiplication by `-w^2 = 1 + w`, a rotation by sixty degrees.
    fn rotate(&self) -> Self {
        EisensteinInt {
            a: &self.a - &self.b,
            b: self.a.clone(),
        }
    }

    /// The six associates `u * self`, starting with `self` and rotating by
    /// the unit `1 + w` each step.
    pub fn associates(&self) -> [EisensteinInt; 6] {
        let mut out: [EisensteinInt; 6] = Default::default();
        let mut cur = self.clone();
        for slot in out.iter_mut() {
            let next = cur.rotate();
            *slot = cur;
            cur = next;
        }
        out
    }

    /// The primary associates of `self`, ordered `[β, -β]` with `β.a > 0`.
    pub fn primary_associates(&self) -> Result<Vec<EisensteinInt>, EisensteinError> {
        if self.is_zero() || self.norm().is_multiple_of(&BigInt::from(3)) {
            return Err(EisensteinError::NormDivisibleByThree(self.clone()));
        }
        let mut out: Vec<EisensteinInt> = self
            .associates()
            .into_iter()
            .filter(|x| x.is_primary())
            .collect();
        out.sort_by_key(|x| std::cmp::Reverse(x.a.sign() == Sign::Plus));
        debug_assert_eq!(out.len(), 2);
        Ok(out)
    }

    /// Canonical associate: the primary associate with `a > 0` when the norm
    /// is prime to 3; otherwise the associate in the half-open sector
    /// `a > b >= 0`.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        if let Ok(mut prim) = self.primary_associates() {
            return prim.swap_remove(0);
        }
        self.associates()
            .into_iter()
            .find(|x| !x.b.is_negative() && x.a > x.b)
            .expect("one associate lies in each sixty-degree sector")
    }

    /// Euclidean division: `self = q * other + r` with `N(r) < N(other)`.
    /// The exact quotient `self * conj(other) / N(other)` is rounded
    /// coordinate-wise to the nearest integer, ties toward zero.
    pub fn div_rem(&self, other: &Self) -> Result<(Self, Self), EisensteinError> {
        if other.is_zero() {
            return Err(EisensteinError::DivisionByZero);
        }
        let n = other.norm();
        let num = self * &other.conj();
        let q = EisensteinInt {
            a: round_div(&num.a, &n),
            b: round_div(&num.b, &n),
        };
        let r = self - &(&q * other);
        Ok((q, r))
    }

    /// Greatest common divisor, returned in [`normalized`](Self::normalized) form.
    pub fn gcd(&self, other: &Self) -> Result<Self, EisensteinError> {
        if self.is_zero() && other.is_zero() {
            return Err(EisensteinError::BothZero);
        }
        let (mut x, mut y) = (self.clone(), other.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y)?;
            x = y;
            y = r;
        }
        Ok(x.normalized())
    }

    /// Exact divisibility test `divisor | value`.
    pub fn divides(divisor: &Self, value: &Self) -> bool {
        match value.div_rem(divisor) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => value.is_zero(),
        }
    }
}

/// Nearest integer to `n / d` for `d > 0`, ties toward zero.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    let twice: BigInt = &r * 2u32;
    match twice.cmp(d) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if n.is_negative() {
                q + 1
            } else {
                q
            }
        }
    }
}

impl Default for EisensteinInt {
    fn default() -> Self {
        EisensteinInt::zero()
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}w", self.a, self.b)
        }
    }
}

impl<'a> Add<&'a EisensteinInt> for &'a EisensteinInt {
    type Output = EisensteinInt;
    fn add(self, rhs: &EisensteinInt) -> EisensteinInt {
        EisensteinInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a EisensteinInt> for &'a EisensteinInt {
    type Output = EisensteinInt;
    fn sub(self, rhs: &EisensteinInt) -> EisensteinInt {
        EisensteinInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a EisensteinInt> for &'a EisensteinInt {
    type Output = EisensteinInt;
    fn mul(self, rhs: &EisensteinInt) -> EisensteinInt {
        let bb = &self.b * &rhs.b;
        EisensteinInt {
            a: &self.a * &rhs.a - &bb,
            b: &self.a * &rhs.b + &rhs.a * &self.b - bb,
        }
    }
}

impl Add for EisensteinInt {
    type Output = EisensteinInt;
    fn add(self, rhs: EisensteinInt) -> EisensteinInt {
        &self + &rhs
    }
}

impl Sub for EisensteinInt {
    type Output = EisensteinInt;
    fn sub(self, rhs: EisensteinInt) -> EisensteinInt {
        &self - &rhs
    }
}

impl Mul for EisensteinInt {
    type Output = EisensteinInt;
    fn mul(self, rhs: EisensteinInt) -> EisensteinInt {
        &self * &rhs
    }
}

impl Neg for EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        EisensteinInt {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Neg for &EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        -(self.clone())
    }
}

/// `alpha^e` reduced modulo `mu`.
///
/// For rational `mu = ±n` both coordinates are reduced into `[0, |n|)`. For
/// complex `mu` of prime norm `p` the result is the rational integer in
/// `[0, p)` congruent to the power, obtained through the ring map
/// `w -> -a b^{-1} mod p`. Any other `mu` falls back to Euclidean
/// remainders, which give a valid but non-canonical representative.
pub fn residue_pow(alpha: &EisensteinInt, e: &BigUint, mu: &EisensteinInt) -> EisensteinInt {
    assert!(!mu.is_zero(), "residue_pow modulo zero");
    if mu.is_rational() {
        let n = mu.a.abs();
        return pow_mod_rational(alpha, e, &n);
    }
    let p = mu.norm();
    if arith::is_prime(&p) {
        let s = (-&mu.a * arith::inv_mod_big(&mu.b, &p).expect("b invertible mod prime norm"))
            .mod_floor(&p);
        let r = (&alpha.a + &alpha.b * &s).mod_floor(&p);
        return EisensteinInt::rational(r.modpow(&BigInt::from(e.clone()), &p));
    }
    let reduce = |x: EisensteinInt| x.div_rem(mu).expect("mu nonzero").1;
    let mut acc = reduce(EisensteinInt::one());
    let mut base = reduce(alpha.clone());
    for i in 0..e.bits() {
        if e.bit(i) {
            acc = reduce(&acc * &base);
        }
        base = reduce(&base * &base);
    }
    acc
}

fn pow_mod_rational(alpha: &EisensteinInt, e: &BigUint, n: &BigInt) -> EisensteinInt {
    if n.is_one() {
        return EisensteinInt::zero();
    }
    if let Some(m) = n.to_u64() {
        let (a, b) = pow_mod_pair(
            (arith::reduce_big(&alpha.a, m), arith::reduce_big(&alpha.b, m)),
            e,
            m,
        );
        return EisensteinInt::new(a, b);
    }
    let reduce = |x: EisensteinInt| EisensteinInt {
        a: x.a.mod_floor(n),
        b: x.b.mod_floor(n),
    };
    let mut acc = EisensteinInt::one();
    let mut base = reduce(alpha.clone());
    for i in 0..e.bits() {
        if e.bit(i) {
            acc = reduce(&acc * &base);
        }
        base = reduce(&base * &base);
    }
    acc
}

/// `(a + b w)^e` in `(Z/m)[w]`, coordinates in `[0, m)`.
pub(crate) fn pow_mod_pair(base: (u64, u64), e: &BigUint, m: u64) -> (u64, u64) {
    let mul = |x: (u64, u64), y: (u64, u64)| {
        let bb = arith::mul_mod(x.1, y.1, m);
        let a = arith::sub_mod(arith::mul_mod(x.0, y.0, m), bb, m);
        let b = arith::sub_mod(
            arith::add_mod(arith::mul_mod(x.0, y.1, m), arith::mul_mod(y.0, x.1, m), m),
            bb,
            m,
        );
        (a, b)
    };
    let mut acc = (1 % m, 0);
    let mut base = base;
    for i in 0..e.bits() {
        if e.bit(i) {
            acc = mul(acc, base);
        }
        base = mul(base, base);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: i64, b: i64) -> EisensteinInt {
        EisensteinInt::new(a, b)
    }

    #[test]
    fn products() {
        assert_eq!(&e(0, 1) * &e(0, 1), e(-1, -1));
        assert_eq!(&e(2, 3) * &e(-1, -3), e(7, 0));
        assert_eq!(&e(2, 3) * &e(1, 1), e(-1, 2));
        assert_eq!(&e(1, 0) * &e(17, -4), e(17, -4));
        assert_eq!(e(2, 3).conj(), e(-1, -3));
    }

    #[test]
    fn conjugation_and_norm() {
        assert_eq!(e(5, 0).conj(), e(5, 0));
        assert_eq!(e(2, 3).norm(), BigInt::from(7));
        assert_eq!(e(4, 3).norm(), BigInt::from(13));
        assert_eq!(e(0, 0).norm(), BigInt::zero());
        let a = e(2, 3);
        let prod = &a * &a.conj();
        assert_eq!(prod, EisensteinInt::rational(a.norm()));
    }

    #[test]
    fn gcd_examples() {
        let g = e(7, 0).gcd(&e(2, -1)).unwrap();
        assert_eq!(g.norm(), BigInt::from(7));
        // s = 2 is the image of w under the conjugate prime; 2+3w sends w to 4
        assert_eq!(g, e(1, 3));
        assert!(g.conj().associates().contains(&e(2, 3)));
        assert!(EisensteinInt::divides(&g, &e(7, 0)));
        assert!(EisensteinInt::divides(&g, &e(2, -1)));
        let g4 = e(7, 0).gcd(&e(4, -1)).unwrap();
        assert_eq!(g4, e(2, 3));
        assert_eq!(e(6, 0).gcd(&e(4, 0)).unwrap(), e(2, 0));
        assert_eq!(e(-3, -1).gcd(&EisensteinInt::zero()).unwrap(), e(2, 3));
        assert_eq!(
            EisensteinInt::zero().gcd(&EisensteinInt::zero()),
            Err(EisensteinError::BothZero)
        );
    }

    #[test]
    fn gcd_of_non_primary_lands_in_sector() {
        let g = e(3, 0).gcd(&e(1, -1)).unwrap();
        assert_eq!(g, e(2, 1));
        assert!(g.associates().contains(&e(1, -1)));
    }

    #[test]
    fn primary_examples() {
        assert!(e(2, 3).is_primary());
        assert!(!e(1, -1).is_primary());
        assert!(e(5, 0).is_primary());
        assert_eq!(e(2, 3).primary_associates().unwrap(), vec![e(2, 3), e(-2, -3)]);
        assert_eq!(e(-3, -1).primary_associates().unwrap(), vec![e(2, 3), e(-2, -3)]);
        assert_eq!(e(5, 0).primary_associates().unwrap(), vec![e(5, 0), e(-5, 0)]);
        assert!(e(1, -1).primary_associates().is_err());
        assert!(e(3, 0).primary_associates().is_err());
    }

    #[test]
    fn residue_powers() {
        let five = e(5, 0);
        assert_eq!(residue_pow(&e(0, 1), &BigUint::from(2u32), &five), e(4, 4));
        assert_eq!(
            residue_pow(&e(1, 0), &BigUint::from(1_000_000_000u64), &e(2, 3)),
            e(1, 0)
        );
        assert_eq!(
            residue_pow(&e(1, 0), &BigUint::from(1_000_000_000u64), &five),
            e(1, 0)
        );
        assert_eq!(residue_pow(&e(2, 0), &BigUint::from(8u32), &five), e(1, 0));
        // composite-norm complex modulus: result agrees modulo mu
        let mu = e(4, 1); // norm 13 is prime; use a composite one
        let mu2 = &mu * &e(2, 3); // norm 91
        let r = residue_pow(&e(3, 5), &BigUint::from(11u32), &mu2);
        let mut direct = EisensteinInt::one();
        for _ in 0..11 {
            direct = &direct * &e(3, 5);
        }
        let diff = &direct - &r;
        assert!(diff.div_rem(&mu2).unwrap().1.is_zero());
        assert!(r.norm() < mu2.norm());
    }

    #[test]
    fn cube_roots() {
        assert_eq!(CubeRoot::OMEGA * CubeRoot::OMEGA_BAR, CubeRoot::ONE);
        assert_eq!(CubeRoot::OMEGA.conj(), CubeRoot::OMEGA_BAR);
        assert_eq!(CubeRoot::OMEGA.pow(2), CubeRoot::OMEGA_BAR);
        assert_eq!(CubeRoot::from_exponent(-1), CubeRoot::OMEGA_BAR);
        let w = CubeRoot::OMEGA.to_eisenstein();
        assert_eq!(&w * &w, CubeRoot::OMEGA_BAR.to_eisenstein());
    }
}

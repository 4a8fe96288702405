//! Slopes `M/L` on the projective line over `Z/q` and the degree-three
//! rational functions that enumerate them.
//!
//! Every function here is a ratio of two cubics evaluated projectively, so
//! `t = ∞` and vertical slopes need no special casing. The central family is
//!
//! ```text
//! g_γ(t) = -(D t^3 - C t^2 - 9D t + C) / (C t^3 + 27D t^2 - 9C t - 27D),
//! γ = c + d w,  C = 6c - 3d,  D = d,
//! ```
//!
//! with `g_1(t) = (t^2 - 1)/(t^3 - 9t)` the Lehmer function.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::arith::{self, add_mod, inv_mod, mul_mod, neg_mod, reduce_big, reduce_i64, sub_mod};
use crate::eisenstein::EisensteinInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("slope machinery needs a prime q >= 5, got {0}")]
    BadModulus(u64),
    #[error("g_gamma for gamma = {c}+{d}w is degenerate modulo {q}")]
    DegenerateGamma { c: i64, d: i64, q: u64 },
    #[error("numerator and denominator vanish together at t = {t} modulo {q}")]
    CommonRoot { t: Slope, q: u64 },
    #[error("L and M are both divisible by {0}")]
    BothZero(u64),
    #[error("leading coefficient vanishes modulo {0}")]
    DegenerateLeading(u64),
    #[error("{0} is not congruent to ±2 or ±4 mod 9")]
    OmegaLawInapplicable(u64),
    #[error("gamma coordinates do not fit in 64 bits")]
    GammaTooLarge,
}

/// A point of the projective line over `Z/q`: a residue or `∞`.
///
/// Used both for slopes `M/L` and for the parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slope {
    Finite(u64),
    Infinity,
}

impl Slope {
    /// `num/den` as a projective point, `None` when both vanish.
    pub fn from_ratio(num: u64, den: u64, q: u64) -> Option<Slope> {
        let (num, den) = (num % q, den % q);
        match (num, den) {
            (0, 0) => None,
            (_, 0) => Some(Slope::Infinity),
            _ => Some(Slope::Finite(mul_mod(num, inv_mod(den, q).expect("q prime"), q))),
        }
    }

    /// The slope `M/L` of an integer pair, `None` when `q` divides both.
    pub fn of_pair(l: &BigInt, m: &BigInt, q: u64) -> Option<Slope> {
        Slope::from_ratio(reduce_big(m, q), reduce_big(l, q), q)
    }

    pub fn neg(self, q: u64) -> Slope {
        match self {
            Slope::Finite(v) => Slope::Finite(neg_mod(v, q)),
            Slope::Infinity => Slope::Infinity,
        }
    }

    /// `1/s`, swapping `0` and `∞`.
    pub fn reciprocal(self, q: u64) -> Slope {
        match self {
            Slope::Infinity => Slope::Finite(0),
            Slope::Finite(v) => Slope::from_ratio(1, v, q).expect("nonzero numerator"),
        }
    }

    /// Homogeneous coordinates `(x : z)`.
    fn coords(self) -> (u64, u64) {
        match self {
            Slope::Finite(v) => (v, 1),
            Slope::Infinity => (1, 0),
        }
    }

    /// `0, 1, ..., q-1, ∞`.
    pub fn all(q: u64) -> impl Iterator<Item = Slope> {
        (0..q).map(Slope::Finite).chain(std::iter::once(Slope::Infinity))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(v) => write!(f, "{v}"),
            Slope::Infinity => f.write_str("inf"),
        }
    }
}

/// Values of a slope function over the whole t-line, with the number of
/// t-preimages of each value. Multiplicities always sum to `q + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeSet {
    pub q: u64,
    pub multiplicity: BTreeMap<Slope, usize>,
}

impl SlopeSet {
    pub fn contains(&self, s: &Slope) -> bool {
        self.multiplicity.contains_key(s)
    }

    pub fn members(&self) -> BTreeSet<Slope> {
        self.multiplicity.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.multiplicity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicity.is_empty()
    }

    pub fn total(&self) -> usize {
        self.multiplicity.values().sum()
    }

    pub fn negated(&self) -> SlopeSet {
        SlopeSet {
            q: self.q,
            multiplicity: self
                .multiplicity
                .iter()
                .map(|(s, &k)| (s.neg(self.q), k))
                .collect(),
        }
    }

    /// `(distinct values attained k times, k)` pairs, e.g. `{3: 4}` for
    /// four values each hit three times.
    pub fn census(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for &k in self.multiplicity.values() {
            *out.entry(k).or_insert(0) += 1;
        }
        out
    }
}

/// `γ = c + d w` with the derived `C = 6c - 3d`, `D = d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GammaParams {
    pub c: i64,
    pub d: i64,
    pub big_c: i64,
    pub big_d: i64,
}

impl GammaParams {
    pub fn new(c: i64, d: i64) -> Self {
        GammaParams {
            c,
            d,
            big_c: 6 * c - 3 * d,
            big_d: d,
        }
    }

    pub fn one() -> Self {
        GammaParams::new(1, 0)
    }

    pub fn omega() -> Self {
        GammaParams::new(0, 1)
    }

    pub fn from_eisenstein(g: &EisensteinInt) -> Result<Self, SlopeError> {
        match (g.a.to_i64(), g.b.to_i64()) {
            (Some(c), Some(d)) if c.abs() < 1 << 40 && d.abs() < 1 << 40 => Ok(GammaParams::new(c, d)),
            _ => Err(SlopeError::GammaTooLarge),
        }
    }

    pub fn to_eisenstein(self) -> EisensteinInt {
        EisensteinInt::new(self.c, self.d)
    }

    /// `conj(c + d w) = (c - d) - d w`; `C` is unchanged and `D` flips.
    pub fn conj(self) -> Self {
        GammaParams::new(self.c - self.d, -self.d)
    }

    /// `g_γ` is a Möbius image of `g_1` with determinant `C^2 + 27 D^2 =
    /// 36 N(γ)`; when `q` divides it the function is constant.
    pub fn is_degenerate(self, q: u64) -> bool {
        let c = reduce_i64(self.big_c, q);
        let d = reduce_i64(self.big_d, q);
        add_mod(mul_mod(c, c, q), mul_mod(27 % q, mul_mod(d, d, q), q), q) == 0
    }
}

impl std::ops::Neg for GammaParams {
    type Output = GammaParams;

    fn neg(self) -> Self {
        GammaParams::new(-self.c, -self.d)
    }
}

/// A ratio of two cubics, coefficients listed from `t^3` down to `t^0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlopeFunction {
    pub num: [i64; 4],
    pub den: [i64; 4],
}

impl SlopeFunction {
    /// `g_γ`.
    pub fn gamma(gp: GammaParams) -> Self {
        let (c, d) = (gp.big_c, gp.big_d);
        SlopeFunction {
            num: [-d, c, 9 * d, -c],
            den: [c, 27 * d, -9 * c, -27 * d],
        }
    }

    /// `(t^2 - 1)/(t^3 - 9t)`.
    pub fn lehmer() -> Self {
        SlopeFunction {
            num: [0, 1, 0, -1],
            den: [1, 0, -9, 0],
        }
    }

    /// The omega-slope congruence written out literally:
    /// `-(t^3 - 3t^2 - 9t + 3) / (3(t^3 + 9t^2 - 9t - 9))`.
    pub fn omega_equation() -> Self {
        SlopeFunction {
            num: [-1, 3, 9, -3],
            den: [3, 27, -27, -27],
        }
    }

    pub fn negated(self) -> Self {
        SlopeFunction {
            num: self.num.map(|x| -x),
            den: self.den,
        }
    }

    /// Evaluate at a projective `t`; `None` at a common root.
    pub fn eval(&self, t: Slope, q: u64) -> Option<Slope> {
        let (x, z) = t.coords();
        let n = eval_homogeneous(&self.num, x, z, q);
        let d = eval_homogeneous(&self.den, x, z, q);
        Slope::from_ratio(n, d, q)
    }

    pub fn try_eval(&self, t: Slope, q: u64) -> Result<Slope, SlopeError> {
        self.eval(t, q).ok_or(SlopeError::CommonRoot { t, q })
    }

    /// Enumerate all `q + 1` parameters.
    pub fn value_set(&self, q: u64) -> Result<SlopeSet, SlopeError> {
        let mut multiplicity = BTreeMap::new();
        for t in Slope::all(q) {
            *multiplicity.entry(self.try_eval(t, q)?).or_insert(0) += 1;
        }
        Ok(SlopeSet { q, multiplicity })
    }

    /// Whether some `t` maps to `s`, found by root counting instead of
    /// enumeration.
    pub fn attains(&self, s: Slope, q: u64) -> Result<bool, SlopeError> {
        if let Some(v) = self.eval(Slope::Infinity, q) {
            if v == s {
                return Ok(true);
            }
        } else {
            return Err(SlopeError::CommonRoot { t: Slope::Infinity, q });
        }
        let num = self.num.map(|x| reduce_i64(x, q));
        let den = self.den.map(|x| reduce_i64(x, q));
        // finite t with num(t) : den(t) = s, i.e. v*den(t) - num(t) = 0
        // (finite s) or den(t) = 0 (s = ∞)
        let target: Vec<u64> = match s {
            Slope::Finite(v) => (0..4)
                .map(|i| sub_mod(mul_mod(v, den[i], q), num[i], q))
                .collect(),
            Slope::Infinity => den.to_vec(),
        };
        let roots = poly::distinct_roots(&poly::from_high(&target), q);
        match roots {
            poly::Roots::Everything => Err(SlopeError::CommonRoot { t: Slope::Finite(0), q }),
            poly::Roots::Count(0) => Ok(false),
            poly::Roots::Count(_) => {
                // a shared root of num and den would masquerade as a hit
                let common = poly::gcd(&poly::from_high(&num), &poly::from_high(&den), q);
                if poly::degree(&common).unwrap_or(0) > 0 && poly::has_root(&common, q) {
                    return Err(SlopeError::CommonRoot { t: Slope::Finite(0), q });
                }
                Ok(true)
            }
        }
    }
}

fn eval_homogeneous(coeffs: &[i64; 4], x: u64, z: u64, q: u64) -> u64 {
    // c3 x^3 + c2 x^2 z + c1 x z^2 + c0 z^3
    let mut acc = 0u64;
    let mut xp = 1u64;
    let mut zp = [1u64; 4];
    for i in 1..4 {
        zp[i] = mul_mod(zp[i - 1], z, q);
    }
    for (deg, &c) in coeffs.iter().rev().enumerate() {
        // deg = power of x
        let term = mul_mod(reduce_i64(c, q), mul_mod(xp, zp[3 - deg], q), q);
        acc = add_mod(acc, term, q);
        xp = mul_mod(xp, x, q);
    }
    acc
}

fn check_modulus(q: u64) -> Result<(), SlopeError> {
    if q < 5 || !arith::is_prime_u64(q) {
        return Err(SlopeError::BadModulus(q));
    }
    Ok(())
}

/// Lehmer's `(t^2 - 1)/(t^3 - 9t)`; `t = ∞` gives slope 0.
pub fn lehmer_g(t: Slope, q: u64) -> Option<Slope> {
    SlopeFunction::lehmer().eval(t, q)
}

pub fn g_gamma(gp: GammaParams, t: Slope, q: u64) -> Result<Slope, SlopeError> {
    check_modulus(q)?;
    if gp.is_degenerate(q) {
        return Err(SlopeError::DegenerateGamma { c: gp.c, d: gp.d, q });
    }
    SlopeFunction::gamma(gp).try_eval(t, q)
}

pub fn slope_set(gp: GammaParams, q: u64) -> Result<SlopeSet, SlopeError> {
    check_modulus(q)?;
    if gp.is_degenerate(q) {
        return Err(SlopeError::DegenerateGamma { c: gp.c, d: gp.d, q });
    }
    SlopeFunction::gamma(gp).value_set(q)
}

/// The order-three map `t -> (t - 3)/(t + 1)`.
pub fn h_apply(t: Slope, q: u64) -> Slope {
    let (x, z) = t.coords();
    let three_z = mul_mod(3, z, q);
    Slope::from_ratio(sub_mod(x % q, three_z, q), add_mod(x % q, z, q), q)
        .expect("h is invertible for q >= 5")
}

/// The two slopes `±1/(3√-3)` on which `L^2 + 27M^2 ≡ 0 (mod q)`; empty
/// for `q ≡ 2 (mod 3)`.
pub fn undefined_slopes(q: u64) -> BTreeSet<Slope> {
    let mut out = BTreeSet::new();
    if q % 3 != 1 {
        return out;
    }
    let root = arith::sqrt_mod(q - 3, q).expect("-3 is a square for q ≡ 1 mod 3");
    let s = Slope::from_ratio(1, mul_mod(3, root, q), q).expect("nonzero");
    out.insert(s);
    out.insert(s.neg(q));
    out
}

/// Is the slope of `(L, M)` one of Lehmer's slopes, i.e. does
/// `(t^2 - 1) L ≡ (t^3 - 9t) M (mod q)` have a solution?
///
/// For `q = 2, 3` the two cubics share roots; those `t` are skipped, and
/// `L ≡ M ≡ 0 (mod 2)` counts as a solution. This reproduces `2 | L, M`
/// and `3 | M` as the conditions for `q` to be a cube.
pub fn lehmer_test(q: u64, l: &BigInt, m: &BigInt) -> Result<bool, SlopeError> {
    if q == 2 || q == 3 {
        let (lr, mr) = (reduce_big(l, q), reduce_big(m, q));
        let Some(s) = Slope::from_ratio(mr, lr, q) else {
            return Ok(true);
        };
        let f = SlopeFunction::lehmer();
        return Ok(Slope::all(q).filter_map(|t| f.eval(t, q)).any(|v| v == s));
    }
    check_modulus(q)?;
    let s = Slope::of_pair(l, m, q).ok_or(SlopeError::BothZero(q))?;
    SlopeCache::global().contains(&SlopeFunction::lehmer(), q, s)
}

/// Lehmer's original recipe, returning the accepted ratios `μ = L/M`
/// (note: the reciprocal of the slope convention used elsewhere).
///
/// For each quadratic residue `r ≠ 1` solve `r ≡ (3u + 1)/(3u - 3)`, drop
/// `u ∈ {0, 1, -1/2, -1/3}`, and take both roots of
/// `μ^2 ≡ r (9/(2u + 1))^2`. The ratios `0` and `∞` (`q | LM`) are added.
pub fn lehmer_original_slopes(q: u64) -> Result<BTreeSet<Slope>, SlopeError> {
    if q <= 3 || !arith::is_prime_u64(q) {
        return Err(SlopeError::BadModulus(q));
    }
    let inv = |x: u64| inv_mod(x % q, q);
    let excluded: Vec<u64> = vec![
        0,
        1,
        neg_mod(inv(2).expect("q odd"), q),
        neg_mod(inv(3).expect("q > 3"), q),
    ];
    let residues: BTreeSet<u64> = (1..q).map(|x| mul_mod(x, x, q)).collect();
    let mut out = BTreeSet::new();
    out.insert(Slope::Finite(0));
    out.insert(Slope::Infinity);
    for r in residues.into_iter().filter(|&r| r != 1) {
        let Some(den_inv) = inv(mul_mod(3, sub_mod(r, 1, q), q)) else {
            continue;
        };
        let u = mul_mod(add_mod(mul_mod(3, r, q), 1, q), den_inv, q);
        if excluded.contains(&u) {
            continue;
        }
        let w = mul_mod(9, inv(add_mod(mul_mod(2, u, q), 1, q)).expect("u ≠ -1/2"), q);
        let mu2 = mul_mod(r, mul_mod(w, w, q), q);
        let mu = arith::sqrt_mod(mu2, q).expect("r times a square is a square");
        out.insert(Slope::Finite(mu));
        out.insert(Slope::Finite(neg_mod(mu, q)));
    }
    Ok(out)
}

/// The omega-slopes predicted by the literal congruence for
/// `q ≡ ±2, ±4 (mod 9)`: the values of the function itself for `±2` and of
/// its negation for `±4`.
pub fn omega_slopes_literal(q: u64) -> Result<SlopeSet, SlopeError> {
    check_modulus(q)?;
    let f = SlopeFunction::omega_equation();
    match q % 9 {
        2 | 7 => f.value_set(q),
        4 | 5 => f.negated().value_set(q),
        _ => Err(SlopeError::OmegaLawInapplicable(q)),
    }
}

/// Above this modulus, membership is decided by root counting rather than
/// by enumerating and caching the whole value set.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// Number of distinct roots modulo a prime `q` of the cubic with the given
/// coefficients (`t^3` first).
pub fn count_roots_cubic(coeffs: [i64; 4], q: u64) -> Result<usize, SlopeError> {
    if q < 2 || !arith::is_prime_u64(q) {
        return Err(SlopeError::BadModulus(q));
    }
    if reduce_i64(coeffs[0], q) == 0 {
        return Err(SlopeError::DegenerateLeading(q));
    }
    if q <= ENUMERATION_LIMIT {
        Ok(count_roots_exhaustive(coeffs, q))
    } else {
        Ok(count_roots_by_gcd(coeffs, q))
    }
}

pub(crate) fn count_roots_exhaustive(coeffs: [i64; 4], q: u64) -> usize {
    (0..q)
        .filter(|&t| eval_homogeneous(&coeffs, t, 1, q) == 0)
        .count()
}

pub(crate) fn count_roots_by_gcd(coeffs: [i64; 4], q: u64) -> usize {
    let f = poly::from_high(&coeffs.map(|c| reduce_i64(c, q)));
    match poly::distinct_roots(&f, q) {
        poly::Roots::Count(n) => n,
        poly::Roots::Everything => q as usize,
    }
}

type CacheKey = (u64, [u64; 8]);

/// Thread-safe memo of enumerated value sets, keyed by the function's
/// coefficients reduced modulo `q`.
#[derive(Debug, Default)]
pub struct SlopeCache {
    sets: RwLock<HashMap<CacheKey, Arc<SlopeSet>>>,
}

impl SlopeCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static SlopeCache {
        static CACHE: OnceLock<SlopeCache> = OnceLock::new();
        CACHE.get_or_init(SlopeCache::new)
    }

    fn key(f: &SlopeFunction, q: u64) -> (u64, [u64; 8]) {
        let mut k = [0u64; 8];
        for i in 0..4 {
            k[i] = reduce_i64(f.num[i], q);
            k[i + 4] = reduce_i64(f.den[i], q);
        }
        (q, k)
    }

    pub fn value_set(&self, f: &SlopeFunction, q: u64) -> Result<Arc<SlopeSet>, SlopeError> {
        let key = Self::key(f, q);
        if let Some(hit) = self.sets.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let set = Arc::new(f.value_set(q)?);
        self.sets
            .write()
            .expect("cache lock")
            .entry(key)
            .or_insert_with(|| Arc::clone(&set));
        Ok(set)
    }

    pub fn contains(&self, f: &SlopeFunction, q: u64, s: Slope) -> Result<bool, SlopeError> {
        if q <= ENUMERATION_LIMIT {
            Ok(self.value_set(f, q)?.contains(&s))
        } else {
            f.attains(s, q)
        }
    }

    pub fn len(&self) -> usize {
        self.sets.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Dense polynomials over `Z/q`, lowest degree first, trimmed.
mod poly {
    use crate::arith::{add_mod, inv_mod, mul_mod, sub_mod};

    pub type Poly = Vec<u64>;

    pub enum Roots {
        Count(usize),
        Everything,
    }

    pub fn from_high(coeffs: &[u64]) -> Poly {
        let mut p: Poly = coeffs.iter().rev().copied().collect();
        trim(&mut p);
        p
    }

    fn trim(p: &mut Poly) {
        while p.last() == Some(&0) {
            p.pop();
        }
    }

    pub fn degree(p: &Poly) -> Option<usize> {
        p.len().checked_sub(1)
    }

    fn mul(a: &Poly, b: &Poly, q: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, q), q);
            }
        }
        trim(&mut out);
        out
    }

    fn rem(a: &Poly, m: &Poly, q: u64) -> Poly {
        let mut r = a.clone();
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], q).expect("nonzero leading coefficient");
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let f = mul_mod(*r.last().unwrap(), lead_inv, q);
            for (i, &c) in m.iter().enumerate() {
                r[k + i] = sub_mod(r[k + i], mul_mod(f, c, q), q);
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd(a: &Poly, b: &Poly, q: u64) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_empty() {
            let r = rem(&x, &y, q);
            x = y;
            y = r;
        }
        x
    }

    /// `t^e mod m`.
    fn pow_t(e: u64, m: &Poly, q: u64) -> Poly {
        let mut acc: Poly = rem(&vec![1], m, q);
        let mut base = rem(&vec![0, 1], m, q);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &base, q), m, q);
            }
            base = rem(&mul(&base, &base, q), m, q);
            e >>= 1;
        }
        acc
    }

    /// Distinct roots in `Z/q`: degree of `gcd(f, t^q - t)`.
    pub fn distinct_roots(f: &Poly, q: u64) -> Roots {
        match degree(f) {
            None => Roots::Everything,
            Some(0) => Roots::Count(0),
            Some(_) => {
                let mut tq = pow_t(q, f, q);
                tq.resize(tq.len().max(2), 0);
                tq[1] = sub_mod(tq[1], 1, q);
                trim(&mut tq);
                let g = gcd(f, &tq, q);
                Roots::Count(degree(&g).unwrap_or(0))
            }
        }
    }

    pub fn has_root(f: &Poly, q: u64) -> bool {
        matches!(distinct_roots(f, q), Roots::Count(n) if n > 0)
    }
}

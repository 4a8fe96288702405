//! The rational cubic character modulo a fixed prime `p ≡ 1 (mod 3)`,
//! computed from the positive pair `4p = L^2 + 27M^2` without touching
//! `Z[w]` at evaluation time.
//!
//! For a prime `q` the value `chi(q)` is read off as follows:
//!
//! - `q = 2` and `q = 3` by congruences on `L` and `M`;
//! - `q >= 5`: `chi(q) = 1` when the slope `M/L` is one of Lehmer's slopes,
//!   otherwise the slope lies in exactly one of `±g(t)` for one of three
//!   explicit cubic ratios, each usable on certain residue classes of `q`;
//! - primes missed by all three ratios go through the general slope law
//!   with an auxiliary prime `l ≡ 1 (mod 3)`.
//!
//! The value extends multiplicatively to all integers.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::character::{chi_int, CharValue, CharacterContext};
use crate::decompose::{decompose_prime, DecomposeError, Decomposition};
use crate::slopes::{GammaParams, Slope, SlopeCache, SlopeError, SlopeFunction};

pub use crate::factor::{factor, FactorError, FactoredInteger, DEFAULT_FACTOR_BOUND};

/// Largest auxiliary prime tried by the general fallback by default.
pub const DEFAULT_FALLBACK_BOUND: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatCharError {
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("slope rules need q below 2^64, got {0}")]
    ModulusTooLarge(BigInt),
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("internal error: rule ({rule}) at q = {q}: slope {slope} lies in {found}")]
    Internal {
        rule: Rule,
        q: u64,
        slope: Slope,
        found: &'static str,
    },
    #[error("internal error: literal omega-slope congruence disagrees with g_w at q = {0}")]
    LiteralMismatch(u64),
    #[error("no auxiliary prime l <= {bound} separates the slopes at q = {q}")]
    FallbackExhausted { q: u64, bound: u64 },
}

/// Which rule produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `q = p`.
    Zero,
    A,
    B,
    C,
    D,
    E,
    F,
    /// The general slope law with auxiliary prime `l`.
    Fallback { l: u64 },
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Zero => write!(f, "q = p"),
            Rule::A => write!(f, "a"),
            Rule::B => write!(f, "b"),
            Rule::C => write!(f, "c"),
            Rule::D => write!(f, "d"),
            Rule::E => write!(f, "e"),
            Rule::F => write!(f, "f"),
            Rule::Fallback { l } => write!(f, "general, l = {l}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub value: CharValue,
    pub rule: Rule,
}

/// The three explicit slope laws. `plus` is the ratio as written; the
/// matching `g_γ` engine function is kept alongside.
struct SlopeRule {
    rule: Rule,
    gamma: GammaParams,
    plus: SlopeFunction,
    /// `(plus value, minus value)` for the residue class of `q`, or `None`
    /// where the rule does not apply.
    assign: fn(u64) -> Option<(CharValue, CharValue)>,
}

const W: CharValue = CharValue::OMEGA;
const WB: CharValue = CharValue::OMEGA_BAR;

fn rule_d_assign(q: u64) -> Option<(CharValue, CharValue)> {
    match q % 9 {
        2 | 7 => Some((WB, W)),
        4 | 5 => Some((W, WB)),
        _ => None,
    }
}

fn rule_e_assign(q: u64) -> Option<(CharValue, CharValue)> {
    match q % 7 {
        2 | 5 => Some((W, WB)),
        3 | 4 => Some((WB, W)),
        _ => None,
    }
}

fn rule_f_assign(q: u64) -> Option<(CharValue, CharValue)> {
    match q % 13 {
        2 | 11 | 3 | 10 => Some((W, WB)),
        4 | 9 | 6 | 7 => Some((WB, W)),
        _ => None,
    }
}

fn slope_rules() -> [SlopeRule; 3] {
    [
        SlopeRule {
            rule: Rule::D,
            gamma: GammaParams::omega(),
            plus: SlopeFunction {
                num: [1, -3, -9, 3],
                den: [3, 27, -27, -27],
            },
            assign: rule_d_assign,
        },
        SlopeRule {
            rule: Rule::E,
            gamma: GammaParams::new(2, 3),
            plus: SlopeFunction {
                num: [1, -1, -9, 1],
                den: [1, 27, -9, -27],
            },
            assign: rule_e_assign,
        },
        SlopeRule {
            rule: Rule::F,
            gamma: GammaParams::new(4, 3),
            plus: SlopeFunction {
                num: [1, -5, -9, 5],
                den: [5, 27, -45, -27],
            },
            assign: rule_f_assign,
        },
    ]
}

/// The function whose values are the "plus" slopes of a rule, expressed
/// through `g_γ`: `g_w` for rule (d) and `-g_γ` for rules (e) and (f).
pub fn rule_plus_function(rule: Rule) -> Option<SlopeFunction> {
    let r = slope_rules().into_iter().find(|r| r.rule == rule)?;
    let g = SlopeFunction::gamma(r.gamma);
    Some(if rule == Rule::D { g } else { g.negated() })
}

/// The plus ratio exactly as written in the rule.
pub fn rule_literal_function(rule: Rule) -> Option<SlopeFunction> {
    slope_rules()
        .into_iter()
        .find(|r| r.rule == rule)
        .map(|r| r.plus)
}

/// Whether rule (d), (e) or (f) can be used at `q`.
pub fn rule_applies(rule: Rule, q: u64) -> bool {
    q >= 5
        && slope_rules()
            .iter()
            .any(|r| r.rule == rule && (r.assign)(q).is_some())
}

struct Auxiliary {
    l: u64,
    gamma: GammaParams,
    ctx: CharacterContext,
}

fn auxiliaries(bound: u64) -> Vec<Auxiliary> {
    arith::primes_up_to(bound)
        .into_iter()
        .filter(|&l| l % 3 == 1 && l != 7 && l != 13)
        .map(|l| {
            let d = decompose_prime(&BigInt::from(l)).expect("l ≡ 1 mod 3 is prime");
            Auxiliary {
                l,
                gamma: GammaParams::from_eisenstein(&d.pi).expect("small"),
                ctx: CharacterContext::from_decomposition(&d),
            }
        })
        .collect()
}

fn default_auxiliaries() -> &'static [Auxiliary] {
    static LIST: OnceLock<Vec<Auxiliary>> = OnceLock::new();
    LIST.get_or_init(|| auxiliaries(DEFAULT_FALLBACK_BOUND))
}

/// `chi` for a fixed `p`, keyed by its positive `(L, M)`.
pub struct RationalCharacter {
    decomposition: Decomposition,
    fallback_bound: u64,
    custom_auxiliaries: OnceLock<Vec<Auxiliary>>,
    cache: &'static SlopeCache,
}

impl fmt::Debug for RationalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RationalCharacter")
            .field("p", &self.decomposition.p)
            .field("l", &self.decomposition.l)
            .field("m", &self.decomposition.m)
            .field("fallback_bound", &self.fallback_bound)
            .finish()
    }
}

impl RationalCharacter {
    pub fn new(p: &BigInt) -> Result<Self, RatCharError> {
        Ok(Self::from_decomposition(decompose_prime(p)?))
    }

    pub fn from_decomposition(decomposition: Decomposition) -> Self {
        RationalCharacter {
            decomposition,
            fallback_bound: DEFAULT_FALLBACK_BOUND,
            custom_auxiliaries: OnceLock::new(),
            cache: SlopeCache::global(),
        }
    }

    pub fn with_fallback_bound(mut self, bound: u64) -> Self {
        self.fallback_bound = bound;
        self.custom_auxiliaries = OnceLock::new();
        self
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn p(&self) -> &BigInt {
        &self.decomposition.p
    }

    pub fn fallback_bound(&self) -> u64 {
        self.fallback_bound
    }

    fn auxiliary_list(&self) -> &[Auxiliary] {
        if self.fallback_bound == DEFAULT_FALLBACK_BOUND {
            default_auxiliaries()
        } else {
            self.custom_auxiliaries
                .get_or_init(|| auxiliaries(self.fallback_bound))
        }
    }

    /// `M/L` modulo `q`.
    pub fn slope(&self, q: u64) -> Slope {
        Slope::of_pair(&self.decomposition.l, &self.decomposition.m, q)
            .expect("q^2 cannot divide 4p")
    }

    /// `chi(q)` for a prime `q`, with the rule that decided it.
    pub fn chi_prime(&self, q: &BigInt) -> Result<Evaluation, RatCharError> {
        if !arith::is_prime(q) {
            return Err(RatCharError::NotPrime(q.clone()));
        }
        if q == self.p() {
            return Ok(Evaluation {
                value: CharValue::Zero,
                rule: Rule::Zero,
            });
        }
        let qw = q
            .to_u64()
            .ok_or_else(|| RatCharError::ModulusTooLarge(q.clone()))?;
        match qw {
            2 => Ok(self.rule_a()),
            3 => Ok(self.rule_b()),
            _ => {
                if self.lehmer(qw)? {
                    return Ok(Evaluation {
                        value: CharValue::ONE,
                        rule: Rule::C,
                    });
                }
                for r in slope_rules() {
                    if let Some(value) = self.slope_rule(&r, qw)? {
                        return Ok(Evaluation { value, rule: r.rule });
                    }
                }
                self.general(qw)
            }
        }
    }

    fn rule_a(&self) -> Evaluation {
        let (l, m) = (&self.decomposition.l, &self.decomposition.m);
        let four = BigInt::from(4);
        let value = if (l * m).is_multiple_of(&four) {
            CharValue::ONE
        } else if (l - m).is_multiple_of(&four) {
            W
        } else {
            debug_assert!((l + m).is_multiple_of(&four));
            WB
        };
        Evaluation {
            value,
            rule: Rule::A,
        }
    }

    fn rule_b(&self) -> Evaluation {
        let (l, m) = (&self.decomposition.l, &self.decomposition.m);
        let three = BigInt::from(3);
        let value = if m.is_multiple_of(&three) {
            CharValue::ONE
        } else if (l + m).is_multiple_of(&three) {
            W
        } else {
            debug_assert!((l - m).is_multiple_of(&three));
            WB
        };
        Evaluation {
            value,
            rule: Rule::B,
        }
    }

    fn lehmer(&self, q: u64) -> Result<bool, RatCharError> {
        Ok(self
            .cache
            .contains(&SlopeFunction::lehmer(), q, self.slope(q))?)
    }

    fn signed_membership(
        &self,
        plus: &SlopeFunction,
        q: u64,
        s: Slope,
    ) -> Result<(bool, bool), RatCharError> {
        Ok((
            self.cache.contains(plus, q, s)?,
            self.cache.contains(&plus.negated(), q, s)?,
        ))
    }

    fn slope_rule(&self, r: &SlopeRule, q: u64) -> Result<Option<CharValue>, RatCharError> {
        let Some((plus_value, minus_value)) = (r.assign)(q) else {
            return Ok(None);
        };
        let s = self.slope(q);
        let g = SlopeFunction::gamma(r.gamma);
        let engine = if r.rule == Rule::D { g } else { g.negated() };
        let hit = self.signed_membership(&engine, q, s)?;
        if r.rule == Rule::D && self.signed_membership(&r.plus, q, s)? != hit {
            return Err(RatCharError::LiteralMismatch(q));
        }
        match hit {
            (true, false) => Ok(Some(plus_value)),
            (false, true) => Ok(Some(minus_value)),
            (true, true) => Err(RatCharError::Internal {
                rule: r.rule,
                q,
                slope: s,
                found: "both signed sets",
            }),
            (false, false) => Err(RatCharError::Internal {
                rule: r.rule,
                q,
                slope: s,
                found: "neither signed set",
            }),
        }
    }

    /// Evaluate one rule in isolation: `None` when it does not apply to
    /// `q`. Rules (d)-(f) return `1` when Lehmer's test holds, matching
    /// their "either `chi(q) = 1` or ..." form.
    pub fn apply_rule(&self, rule: Rule, q: u64) -> Result<Option<CharValue>, RatCharError> {
        if q as u128 == self.p().to_u128().unwrap_or(0) {
            return Ok(None);
        }
        match rule {
            Rule::Zero => Ok(None),
            Rule::A => Ok((q == 2).then(|| self.rule_a().value)),
            Rule::B => Ok((q == 3).then(|| self.rule_b().value)),
            Rule::C => Ok((q >= 5 && self.lehmer(q)?).then_some(CharValue::ONE)),
            Rule::D | Rule::E | Rule::F => {
                if !rule_applies(rule, q) {
                    return Ok(None);
                }
                if self.lehmer(q)? {
                    return Ok(Some(CharValue::ONE));
                }
                let r = slope_rules()
                    .into_iter()
                    .find(|r| r.rule == rule)
                    .expect("rule listed");
                self.slope_rule(&r, q)
            }
            Rule::Fallback { .. } => {
                if q < 5 {
                    return Ok(None);
                }
                Ok(Some(self.fallback(q)?.value))
            }
        }
    }

    /// The general slope law, used directly (also for `q` the explicit
    /// rules cover, for cross-checking).
    pub fn fallback(&self, q: u64) -> Result<Evaluation, RatCharError> {
        if self.lehmer(q)? {
            return Ok(Evaluation {
                value: CharValue::ONE,
                rule: Rule::C,
            });
        }
        self.general(q)
    }

    fn general(&self, q: u64) -> Result<Evaluation, RatCharError> {
        let s = self.slope(q);
        let qb = BigInt::from(q);
        for aux in self.auxiliary_list().iter().filter(|a| a.l != q) {
            // which of g_γ, g_γ̄ carries the w-slopes
            let (w_gamma, wb_gamma) = match chi_int(&aux.ctx, &qb) {
                v if v == WB => (aux.gamma, aux.gamma.conj()),
                v if v == W => (aux.gamma.conj(), aux.gamma),
                _ => continue,
            };
            let in_w = self
                .cache
                .contains(&SlopeFunction::gamma(w_gamma), q, s)?;
            let in_wb = self
                .cache
                .contains(&SlopeFunction::gamma(wb_gamma), q, s)?;
            let rule = Rule::Fallback { l: aux.l };
            return match (in_w, in_wb) {
                (true, false) => Ok(Evaluation { value: W, rule }),
                (false, true) => Ok(Evaluation { value: WB, rule }),
                (true, true) => Err(RatCharError::Internal {
                    rule,
                    q,
                    slope: s,
                    found: "both signed sets",
                }),
                (false, false) => Err(RatCharError::Internal {
                    rule,
                    q,
                    slope: s,
                    found: "neither signed set",
                }),
            };
        }
        Err(RatCharError::FallbackExhausted {
            q,
            bound: self.fallback_bound,
        })
    }

    /// `chi(c)`, factoring `c` with the given trial-division bound.
    pub fn chi_with_bound(&self, c: &BigInt, factor_bound: u64) -> Result<CharValue, RatCharError> {
        if c.is_zero() || c.is_multiple_of(self.p()) {
            return Ok(CharValue::Zero);
        }
        let f = factor(c, factor_bound)?;
        self.chi_factored(&f)
    }

    pub fn chi(&self, c: &BigInt) -> Result<CharValue, RatCharError> {
        self.chi_with_bound(c, DEFAULT_FACTOR_BOUND)
    }

    /// `chi` of an already factored integer; the sign is ignored since
    /// `chi(-1) = 1`.
    pub fn chi_factored(&self, f: &FactoredInteger) -> Result<CharValue, RatCharError> {
        Ok(self
            .explain_factored(f)?
            .iter()
            .fold(CharValue::ONE, |acc, (_, e, ev)| acc * ev.value.pow(*e as u64)))
    }

    /// Per-prime evaluations behind `chi_factored`.
    pub fn explain_factored(
        &self,
        f: &FactoredInteger,
    ) -> Result<Vec<(BigInt, u32, Evaluation)>, RatCharError> {
        f.factors
            .iter()
            .map(|(q, e)| Ok((q.clone(), *e, self.chi_prime(q)?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::CharacterContext;

    fn rc(p: u64) -> RationalCharacter {
        RationalCharacter::new(&BigInt::from(p)).unwrap()
    }

    fn chi_q(r: &RationalCharacter, q: u64) -> Evaluation {
        r.chi_prime(&BigInt::from(q)).unwrap()
    }

    #[test]
    fn sixty_three_thousand_six_hundred_one() {
        let r = rc(63601);
        assert_eq!(chi_q(&r, 2), Evaluation { value: WB, rule: Rule::A });
        assert_eq!(chi_q(&r, 5).value, WB);
        assert_eq!(chi_q(&r, 7).value, W);
        assert_eq!(r.chi(&BigInt::from(490)).unwrap(), CharValue::ONE);
        assert_eq!(r.chi(&BigInt::from(63601 * 3)).unwrap(), CharValue::Zero);
        assert_eq!(r.chi(&BigInt::from(1)).unwrap(), CharValue::ONE);
        assert_eq!(r.chi(&BigInt::from(-1)).unwrap(), CharValue::ONE);
        assert_eq!(r.chi(&BigInt::from(0)).unwrap(), CharValue::Zero);
    }

    #[test]
    fn rule_b_for_seven() {
        let r = rc(7);
        assert_eq!(chi_q(&r, 3), Evaluation { value: WB, rule: Rule::B });
        let ctx = CharacterContext::new(crate::EisensteinInt::new(2, 3)).unwrap();
        assert_eq!(chi_int(&ctx, &BigInt::from(3)), WB);
    }

    #[test]
    fn literal_ratios_match_the_engine_up_to_scaling() {
        for rule in [Rule::E, Rule::F] {
            let lit = rule_literal_function(rule).unwrap();
            let eng = rule_plus_function(rule).unwrap();
            for q in [5u64, 11, 17, 29, 31, 101] {
                if q == 13 {
                    continue;
                }
                for t in Slope::all(q) {
                    assert_eq!(lit.eval(t, q), eng.eval(t, q), "rule {rule} q={q}");
                }
            }
        }
        // rule (d) agrees only as a set: G(-t) = g_w(t)
        let lit = rule_literal_function(Rule::D).unwrap();
        let eng = rule_plus_function(Rule::D).unwrap();
        for q in [5u64, 7, 11, 23, 41, 43] {
            for t in Slope::all(q) {
                assert_eq!(lit.eval(t.neg(q), q), eng.eval(t, q));
            }
        }
    }

    #[test]
    fn smallest_uncovered_prime_uses_the_general_law() {
        assert!([Rule::D, Rule::E, Rule::F]
            .iter()
            .all(|&rule| !rule_applies(rule, 181)));
        let mut reached = false;
        for p in arith::primes_up_to(3000).into_iter().filter(|p| p % 3 == 1) {
            let r = rc(p);
            let d = r.decomposition();
            let direct = chi_int(&CharacterContext::from_decomposition(d), &BigInt::from(181));
            let ev = chi_q(&r, 181);
            assert_eq!(ev.value, direct, "p={p}");
            if let Rule::Fallback { .. } = ev.rule {
                reached = true;
            }
        }
        assert!(reached);
    }

    #[test]
    fn fallback_agrees_with_explicit_rules() {
        let r = rc(63601);
        for q in arith::primes_up_to(400).into_iter().filter(|&q| q >= 5) {
            assert_eq!(r.fallback(q).unwrap().value, chi_q(&r, q).value, "q={q}");
        }
    }

    #[test]
    fn tiny_fallback_bound_can_exhaust() {
        // with l <= 20 only l = 19 is available
        let r = rc(63601).with_fallback_bound(20);
        let aux = CharacterContext::from_decomposition(&decompose_prime(&BigInt::from(19)).unwrap());
        let q = arith::primes_up_to(20_000)
            .into_iter()
            .filter(|&q| q >= 5 && q != 19)
            .filter(|&q| ![Rule::D, Rule::E, Rule::F].iter().any(|&x| rule_applies(x, q)))
            .filter(|&q| r.apply_rule(Rule::C, q).unwrap().is_none())
            .find(|&q| chi_int(&aux, &BigInt::from(q)).is_one())
            .expect("some uncovered q has chi_19(q) = 1");
        assert_eq!(
            r.chi_prime(&BigInt::from(q)),
            Err(RatCharError::FallbackExhausted { q, bound: 20 })
        );
        assert!(rc(63601).chi_prime(&BigInt::from(q)).is_ok());
    }

    #[test]
    fn rules_against_direct_character() {
        for p in arith::primes_up_to(2000).into_iter().filter(|p| p % 3 == 1) {
            let r = rc(p);
            let ctx = CharacterContext::from_decomposition(r.decomposition());
            for q in arith::primes_up_to(300) {
                let want = chi_int(&ctx, &BigInt::from(q));
                assert_eq!(chi_q(&r, q).value, want, "p={p} q={q}");
                for rule in [Rule::D, Rule::E, Rule::F] {
                    if let Some(v) = r.apply_rule(rule, q).unwrap() {
                        assert_eq!(v, want, "p={p} q={q} rule {rule}");
                    }
                }
            }
        }
    }

    #[test]
    fn not_prime_is_rejected() {
        assert_eq!(
            rc(7).chi_prime(&BigInt::from(9)),
            Err(RatCharError::NotPrime(BigInt::from(9)))
        );
    }
}

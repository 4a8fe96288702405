//! End-to-end checks of the whole pipeline against known values and
//! independent oracles. Each check is a numbered criterion with an
//! optional time limit; [`Scale::Quick`] shrinks the ranges.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::character::{chi_int, reciprocity_check, CharValue, CharacterContext};
use crate::decompose::decompose_prime;
use crate::eisenstein::EisensteinInt;
use crate::ratchar::{rule_literal_function, RationalCharacter, Rule};
use crate::slopes::{
    count_roots_cubic, lehmer_original_slopes, lehmer_test, slope_set, undefined_slopes, GammaParams, Slope,
    SlopeError,
};
use crate::solver::{cube_residues, exhaustive_oracle, is_cubic_residue, is_cubic_residue_prime, two_is_cube_by_parity};
use crate::tables::{build_table, known_grid, verify_table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quick" => Ok(Scale::Quick),
            "full" => Ok(Scale::Full),
            other => Err(format!("unknown scale {other:?}; use quick or full")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub time_limit: Option<Duration>,
}

impl Outcome {
    pub fn within_time(&self) -> bool {
        self.time_limit.is_none_or(|t| self.elapsed <= t)
    }

    pub fn ok(&self) -> bool {
        self.passed && self.within_time()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "PASS" } else { "FAIL" };
        let limit = match self.time_limit {
            Some(t) => format!(" (limit {:.0?})", t),
            None => String::new(),
        };
        write!(
            f,
            "{verdict} [{:>2}] {}: {} in {:.2?}{limit}",
            self.id, self.title, self.detail, self.elapsed
        )
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "residue tables for q = 2, 3, 5, 7"),
    (2, "p = 63601 worked example"),
    (3, "p = (3^19 + 5^82)/4 worked example"),
    (4, "Lehmer criterion against exponentiation"),
    (5, "value census of g_gamma"),
    (6, "slope partition"),
    (7, "cubic reciprocity"),
    (8, "rational rules against the direct character"),
    (9, "original Lehmer recipe"),
    (10, "roots of t^3 - 7t - 7"),
    (11, "composite moduli against exhaustive search"),
    (12, "Euler's criterion for 2"),
];

fn limit(id: u8) -> Option<Duration> {
    let secs = match id {
        1 => 5,
        2 => 1,
        3 => 5,
        4 => 60,
        5 => 30,
        8 => 300,
        11 => 120,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

type Check = Result<String, String>;

pub fn run(id: u8, scale: Scale) -> Outcome {
    let title = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .unwrap_or("unknown criterion");
    let start = Instant::now();
    let result: Check = match id {
        1 => residue_tables(),
        2 => small_example(),
        3 => big_example(),
        4 => lehmer_equivalence(scale),
        5 => value_census(scale),
        6 => partition(scale),
        7 => reciprocity(scale),
        8 => rules_consistency(scale),
        9 => original_recipe(scale),
        10 => root_counts(scale),
        11 => oracle_closure(scale),
        12 => euler_two(scale),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome {
        id,
        title,
        passed,
        detail,
        elapsed,
        time_limit: limit(id),
    }
}

pub fn run_all(scale: Scale) -> Vec<Outcome> {
    CRITERIA.iter().map(|&(id, _)| run(id, scale)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn primes_one_mod_three(limit: u64) -> Vec<u64> {
    arith::primes_up_to(limit)
        .into_iter()
        .filter(|p| p % 3 == 1)
        .collect()
}

fn residue_tables() -> Check {
    for q in [2u64, 3, 5, 7] {
        let t = build_table(q, crate::tables::DEFAULT_SEARCH_BOUND).map_err(|e| e.to_string())?;
        ensure(Some(t.entries.clone()) == known_grid(q), || {
            format!("table for q = {q} differs:\n{t}")
        })?;
        let report = verify_table(&t);
        ensure(report.is_clean(), || format!("q = {q}: {report:?}"))?;
    }
    Ok("4 tables match cell for cell".into())
}

fn small_example() -> Check {
    let p = big(63601);
    let d = decompose_prime(&p).map_err(|e| e.to_string())?;
    ensure((d.l.clone(), d.m.clone()) == (big(19), big(97)), || {
        format!("decompose gave ({}, {})", d.l, d.m)
    })?;
    let rc = RationalCharacter::from_decomposition(d.clone());
    let ctx = CharacterContext::from_decomposition(&d);
    for (q, want) in [(2u64, CharValue::OMEGA_BAR), (5, CharValue::OMEGA_BAR), (7, CharValue::OMEGA)] {
        let got = rc.chi_prime(&big(q)).map_err(|e| e.to_string())?.value;
        ensure(got == want, || format!("chi({q}) = {got}, expected {want}"))?;
        let direct = chi_int(&ctx, &big(q));
        ensure(direct == want, || format!("direct chi({q}) = {direct}"))?;
    }
    let c490 = rc.chi(&big(490)).map_err(|e| e.to_string())?;
    ensure(c490.is_one(), || format!("chi(490) = {c490}"))?;
    ensure(exhaustive_oracle(&big(490), &p) == Ok(true), || "490 has no cube root".into())?;
    Ok("(L, M) = (19, 97); chi(2) = chi(5) = w2, chi(7) = w, chi(490) = 1".into())
}

/// `(3^19 + 5^82)/4`.
pub fn big_example_prime() -> BigInt {
    (num_traits::pow(big(3), 19) + num_traits::pow(big(5), 82)) / 4u32
}

fn big_example() -> Check {
    let p = big_example_prime();
    let rc = RationalCharacter::new(&p).map_err(|e| e.to_string())?;
    let d = rc.decomposition();
    ensure(d.l == num_traits::pow(big(5), 41) && d.m == num_traits::pow(big(3), 8), || {
        "L, M are not 5^41, 3^8".into()
    })?;
    let two = rc.chi_prime(&big(2)).map_err(|e| e.to_string())?;
    ensure(two.value == CharValue::OMEGA && two.rule == Rule::A, || {
        format!("chi(2) = {} by rule {}", two.value, two.rule)
    })?;
    let s = rc.slope(991);
    ensure(s == Slope::Finite(672) && s.neg(991) == Slope::Finite(319), || {
        format!("slope mod 991 is {s}")
    })?;
    let e_set = rule_literal_function(Rule::E).expect("rule e").value_set(991).map_err(|e| e.to_string())?;
    ensure(e_set.contains(&Slope::Finite(319)) && !e_set.contains(&Slope::Finite(672)), || {
        "rule (e) list should contain 319 and not 672".into()
    })?;
    let f_set = rule_literal_function(Rule::F).expect("rule f").value_set(991).map_err(|e| e.to_string())?;
    ensure(f_set.contains(&Slope::Finite(672)) && !f_set.contains(&Slope::Finite(319)), || {
        "rule (f) list should contain 672 and not 319".into()
    })?;
    for rule in [Rule::E, Rule::F] {
        let v = rc.apply_rule(rule, 991).map_err(|e| e.to_string())?;
        ensure(v == Some(CharValue::OMEGA), || format!("rule ({rule}) gave {v:?} at 991"))?;
    }
    ensure(rc.apply_rule(Rule::D, 991) == Ok(None), || "rule (d) should not apply at 991".into())?;
    let c = rc.chi(&big(1982)).map_err(|e| e.to_string())?;
    ensure(c == CharValue::OMEGA_BAR, || format!("chi(1982) = {c}"))?;
    let oracle = is_cubic_residue_prime(&big(1982), &p).map_err(|e| e.to_string())?;
    ensure(!oracle, || "1982^((p-1)/3) ≡ 1 (mod p)".into())?;
    Ok(format!(
        "{}-digit p; chi(2) = w (rule a), slope 672 = -319, chi(991) = w by (e) and (f), chi(1982) = w2",
        p.to_string().len()
    ))
}

fn lehmer_equivalence(scale: Scale) -> Check {
    let p_max = if scale == Scale::Full { 20_000 } else { 3_000 };
    let qs = arith::primes_up_to(50);
    let ps = primes_one_mod_three(p_max);
    let mut checked = 0;
    for &p in &ps {
        let d = decompose_prime(&big(p)).map_err(|e| e.to_string())?;
        for &q in qs.iter().filter(|&&q| q != p) {
            let lehmer = lehmer_test(q, &d.l, &d.m).map_err(|e| e.to_string())?;
            let truth = is_cubic_residue_prime(&big(q), &big(p)).map_err(|e| e.to_string())?;
            ensure(lehmer == truth, || format!("q = {q}, p = {p}: Lehmer {lehmer}, truth {truth}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs (q <= 50, p <= {p_max}), zero discrepancies"))
}

fn census_gammas() -> [GammaParams; 4] {
    [
        GammaParams::one(),
        GammaParams::omega(),
        GammaParams::new(2, 3),
        GammaParams::new(4, 3),
    ]
}

fn value_census(scale: Scale) -> Check {
    let q_max = if scale == Scale::Full { 200 } else { 60 };
    let mut checked = 0;
    let mut degenerate = 0;
    for q in arith::primes_up_to(q_max).into_iter().filter(|&q| q >= 5) {
        for gp in census_gammas() {
            let set = match slope_set(gp, q) {
                Ok(s) => s,
                Err(SlopeError::DegenerateGamma { .. }) if gp.is_degenerate(q) => {
                    degenerate += 1;
                    continue;
                }
                Err(e) => return Err(format!("q = {q}, gamma = {}: {e}", gp.to_eisenstein())),
            };
            let triples: Vec<Slope> = set.multiplicity.iter().filter(|e| *e.1 == 3).map(|e| *e.0).collect();
            let singles: BTreeSet<Slope> = set.multiplicity.iter().filter(|e| *e.1 == 1).map(|e| *e.0).collect();
            let ok = if q % 3 == 2 {
                triples.len() as u64 == (q + 1) / 3 && singles.is_empty() && set.len() == triples.len()
            } else {
                triples.len() as u64 == (q - 1) / 3
                    && singles == undefined_slopes(q)
                    && set.len() == triples.len() + 2
            };
            ensure(ok, || format!("q = {q}, gamma = {}: census {:?}", gp.to_eisenstein(), set.census()))?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} (q, gamma) pairs for q <= {q_max}; {degenerate} degenerate pairs (q = N(gamma)) skipped"
    ))
}

fn partition(scale: Scale) -> Check {
    let q_max = if scale == Scale::Full { 200 } else { 60 };
    let gamma = GammaParams::new(2, 3);
    let ctx = CharacterContext::new(gamma.to_eisenstein()).expect("2+3w is a primary prime");
    let mut checked = 0;
    for q in arith::primes_up_to(q_max).into_iter().filter(|&q| q >= 5) {
        let v = chi_int(&ctx, &big(q));
        if v.is_one() || v == CharValue::Zero {
            continue;
        }
        let undefined = undefined_slopes(q);
        let sets: Vec<BTreeSet<Slope>> = [GammaParams::one(), gamma, gamma.conj()]
            .iter()
            .map(|&g| {
                slope_set(g, q)
                    .map(|s| s.members().difference(&undefined).copied().collect())
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<_, _>>()?;
        let total: usize = sets.iter().map(|s| s.len()).sum();
        let union: BTreeSet<Slope> = sets.iter().flatten().copied().collect();
        let expected: BTreeSet<Slope> = Slope::all(q).filter(|s| !undefined.contains(s)).collect();
        ensure(total == union.len() && union == expected, || {
            format!("q = {q}: sizes {:?}, union {} of {}", sets.iter().map(|s| s.len()).collect::<Vec<_>>(), union.len(), expected.len())
        })?;
        checked += 1;
    }
    Ok(format!("{checked} primes q <= {q_max} with chi_(2+3w)(q) ≠ 1 partitioned"))
}

/// Every primary prime of norm below `bound`: both primary associates of
/// each complex prime and its conjugate, and `±q` for inert `q`.
pub fn primary_primes_below(bound: u64) -> Vec<EisensteinInt> {
    let mut out = Vec::new();
    for p in arith::primes_up_to(bound) {
        if p % 3 == 1 {
            let d = decompose_prime(&big(p)).expect("p ≡ 1 mod 3");
            for x in [d.pi.clone(), d.pi.conj()] {
                out.extend(x.primary_associates().expect("norm prime to 3"));
            }
        } else if p % 3 == 2 && p * p < bound {
            out.push(EisensteinInt::rational(p));
            out.push(EisensteinInt::rational(-(p as i64)));
        }
    }
    out
}

fn reciprocity(scale: Scale) -> Check {
    let pairs = if scale == Scale::Full { 1000 } else { 200 };
    let pool = primary_primes_below(10_000);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < pairs {
        let pi = pool.choose(&mut rng).expect("nonempty");
        let rho = pool.choose(&mut rng).expect("nonempty");
        let rp = |x: &EisensteinInt| CharacterContext::new(x.clone()).map(|c| c.rational_prime().clone());
        if rp(pi) == rp(rho) {
            continue;
        }
        let ok = reciprocity_check(pi, rho).map_err(|e| e.to_string())?;
        ensure(ok, || format!("reciprocity fails for pi = {pi}, rho = {rho}"))?;
        done += 1;
    }
    Ok(format!("{done} pairs from {} primary primes of norm < 10^4", pool.len()))
}

fn rules_consistency(scale: Scale) -> Check {
    let (q_max, p_max) = if scale == Scale::Full { (2000, 10_000) } else { (400, 2000) };
    let qs = arith::primes_up_to(q_max);
    let ps = primes_one_mod_three(p_max);
    let failures = std::sync::Mutex::new(Vec::new());
    let fallbacks_at_181 = std::sync::atomic::AtomicUsize::new(0);
    let fallbacks = std::sync::atomic::AtomicUsize::new(0);
    let overlaps = std::sync::atomic::AtomicUsize::new(0);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = ps.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for part in ps.chunks(chunk) {
            let (qs, failures) = (&qs, &failures);
            let (fallbacks_at_181, fallbacks, overlaps) = (&fallbacks_at_181, &fallbacks, &overlaps);
            scope.spawn(move || {
                for &p in part {
                    let rc = RationalCharacter::new(&big(p)).expect("p ≡ 1 mod 3");
                    let ctx = CharacterContext::from_decomposition(rc.decomposition());
                    for &q in qs.iter().filter(|&&q| q != p) {
                        let truth = chi_int(&ctx, &big(q));
                        let fail = |msg: String| failures.lock().expect("lock").push(msg);
                        match rc.chi_prime(&big(q)) {
                            Ok(ev) => {
                                if ev.value != truth {
                                    fail(format!("p = {p}, q = {q}: rule {} gave {}, direct {truth}", ev.rule, ev.value));
                                }
                                if let Rule::Fallback { .. } = ev.rule {
                                    fallbacks.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                                    if q == 181 {
                                        fallbacks_at_181.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                                    }
                                }
                            }
                            Err(e) => fail(format!("p = {p}, q = {q}: {e}")),
                        }
                        let mut applicable = 0;
                        for rule in [Rule::D, Rule::E, Rule::F] {
                            match rc.apply_rule(rule, q) {
                                Ok(Some(v)) => {
                                    applicable += 1;
                                    if v != truth {
                                        fail(format!("p = {p}, q = {q}: rule ({rule}) gave {v}, direct {truth}"));
                                    }
                                }
                                Ok(None) => {}
                                Err(e) => fail(format!("p = {p}, q = {q}, rule ({rule}): {e}")),
                            }
                        }
                        if applicable >= 2 {
                            overlaps.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        }
                    }
                }
            });
        }
    });
    let failures = failures.into_inner().expect("lock");
    if let Some(first) = failures.first() {
        return Err(format!("{} discrepancies, first: {first}", failures.len()));
    }
    let at_181 = fallbacks_at_181.into_inner();
    ensure(at_181 > 0, || "q = 181 never reached the general law".into())?;
    Ok(format!(
        "{} p x {} q; {} evaluations with two or more of (d)-(f) agreeing; general law used {} times ({} at q = 181)",
        ps.len(),
        qs.len(),
        overlaps.into_inner(),
        fallbacks.into_inner(),
        at_181
    ))
}

fn original_recipe(scale: Scale) -> Check {
    let q_max = if scale == Scale::Full { 500 } else { 100 };
    let mut checked = 0;
    for q in arith::primes_up_to(q_max).into_iter().filter(|&q| q >= 5) {
        let inverted: BTreeSet<Slope> = lehmer_original_slopes(q)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|mu| mu.reciprocal(q))
            .collect();
        let undefined = undefined_slopes(q);
        let lehmer: BTreeSet<Slope> = slope_set(GammaParams::one(), q)
            .map_err(|e| e.to_string())?
            .members()
            .difference(&undefined)
            .copied()
            .collect();
        ensure(inverted == lehmer, || format!("q = {q}: original {inverted:?} vs {lehmer:?}"))?;
        checked += 1;
    }
    Ok(format!("{checked} primes 5 <= q <= {q_max} agree"))
}

fn root_counts(scale: Scale) -> Check {
    let q_max = if scale == Scale::Full { 10_000 } else { 2000 };
    let mut checked = 0;
    for q in arith::primes_up_to(q_max) {
        let n = count_roots_cubic([1, 0, -7, -7], q).map_err(|e| e.to_string())?;
        let want = match q % 7 {
            0 => 1,
            1 | 6 => 3,
            _ => 0,
        };
        ensure(n == want, || format!("q = {q}: {n} roots, expected {want}"))?;
        checked += 1;
    }
    Ok(format!("{checked} primes q <= {q_max}"))
}

fn oracle_closure(scale: Scale) -> Check {
    let m_max = if scale == Scale::Full { 5000u64 } else { 800 };
    let mut checked = 0u64;
    for m in 2..=m_max {
        let cubes = cube_residues(m).map_err(|e| e.to_string())?;
        let mb = big(m);
        for c in (1..m).filter(|&c| num_integer::gcd(c, m) == 1) {
            let got = is_cubic_residue(&big(c), &mb).map_err(|e| e.to_string())?;
            ensure(got == cubes[c as usize], || format!("c = {c}, m = {m}: solver {got}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} coprime pairs with m <= {m_max}"))
}

fn euler_two(scale: Scale) -> Check {
    let p_max = if scale == Scale::Full { 100_000 } else { 10_000 };
    let ps = primes_one_mod_three(p_max);
    for &p in &ps {
        let parity = two_is_cube_by_parity(&big(p)).map_err(|e| e.to_string())?;
        let truth = is_cubic_residue_prime(&big(2), &big(p)).map_err(|e| e.to_string())?;
        ensure(parity == truth, || format!("p = {p}: parity says {parity}, truth {truth}"))?;
    }
    Ok(format!("{} primes p <= {p_max}", ps.len()))
}

pub fn describe_scale(scale: Scale) -> &'static str {
    match scale {
        Scale::Quick => "quick (reduced ranges)",
        Scale::Full => "full",
    }
}


//! The rational cubic character: chi(q) from the slope M/L mod q alone,
//! with the rule that decided each prime.
//!
//!     cargo run --example rational_character -- 63601 490

use cubres::character::chi_int;
use cubres::cli::parse_integer;
use cubres::factor::{factor, DEFAULT_FACTOR_BOUND};
use cubres::{CharacterContext, RationalCharacter};

fn main() {
    let mut args = std::env::args().skip(1);
    let p = parse_integer(&args.next().unwrap_or_else(|| "63601".into())).expect("p");
    let rc = RationalCharacter::new(&p).expect("p must be a prime ≡ 1 mod 3");
    let d = rc.decomposition();
    println!("p = {p}, L = {}, M = {}", d.l, d.m);
    let ctx = CharacterContext::from_decomposition(d);

    let cs: Vec<String> = args.collect();
    let cs = if cs.is_empty() {
        ["2", "3", "5", "7", "13", "181", "490"].map(String::from).to_vec()
    } else {
        cs
    };
    for c in cs {
        let c = parse_integer(&c).expect("c");
        let f = factor(&c, DEFAULT_FACTOR_BOUND).expect("factorable");
        let value = rc.chi_factored(&f).expect("rules apply");
        println!("chi({c}) = {value}  [direct: {}]", chi_int(&ctx, &c));
        for (q, e, ev) in rc.explain_factored(&f).unwrap() {
            println!("    {q}^{e}: {} by rule ({})", ev.value, ev.rule);
        }
    }
}

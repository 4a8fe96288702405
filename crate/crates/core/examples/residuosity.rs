//! Decide x^3 ≡ c (mod m) for composite moduli with every method and
//! compare against brute force where that is feasible.
//!
//!     cargo run --example residuosity -- 490 63601

use cubres::cli::parse_integer;
use cubres::solver::{decide, exhaustive_oracle, Method, EXHAUSTIVE_LIMIT};
use cubres::factor::DEFAULT_FACTOR_BOUND;
use num_bigint::BigInt;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let queries: Vec<(BigInt, BigInt)> = if args.len() == 2 {
        vec![(parse_integer(&args[0]).unwrap(), parse_integer(&args[1]).unwrap())]
    } else {
        [(490, 63601), (8, 9), (10, 9), (2, 7), (2, 31), (5, 4 * 27 * 49), (17, 91)]
            .iter()
            .map(|&(c, m)| (BigInt::from(c), BigInt::from(m)))
            .collect()
    };
    for (c, m) in queries {
        print!("{c} mod {m}:");
        for method in [Method::Exponentiation, Method::DirectCharacter, Method::Rules] {
            match decide(&c, &m, method, DEFAULT_FACTOR_BOUND) {
                Ok(r) => print!(" {method}={}", if r { "yes" } else { "no" }),
                Err(e) => print!(" {method}: {e}"),
            }
        }
        if m <= BigInt::from(EXHAUSTIVE_LIMIT) {
            if let Ok(r) = exhaustive_oracle(&c, &m) {
                print!(" brute-force={}", if r { "yes" } else { "no" });
            }
        }
        println!();
    }
}

//! Split primes p ≡ 1 (mod 3) as 4p = L^2 + 27M^2 and show the primary
//! Eisenstein prime behind each pair.
//!
//!     cargo run --example decompose_prime -- 63601 7 "(3^19+5^82)/4"

use cubres::cli::parse_integer;
use cubres::decompose::{decompose_prime, rational_image};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() {
        vec!["7".to_string(), "13".into(), "63601".into(), "(3^19+5^82)/4".into()]
    } else {
        args
    };
    for input in inputs {
        let p = match parse_integer(&input) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("{input}: {e}");
                continue;
            }
        };
        match decompose_prime(&p) {
            Ok(d) => {
                println!("p  = {}", d.p);
                println!("L  = {}, M = {}", d.l, d.m);
                println!("pi = {}  (norm {})", d.pi, d.pi.norm());
                println!("w  ≡ {} (mod pi)", d.omega_image);
                assert_eq!(rational_image(&d.pi, &d), 0.into());
                println!();
            }
            Err(e) => println!("{input}: {e}\n"),
        }
    }
}

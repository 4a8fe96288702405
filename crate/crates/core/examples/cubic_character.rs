//! The cubic residue character chi_pi for a few primary primes, together
//! with the cubic reciprocity law and the supplementary values at w and
//! 1 - w.

use cubres::character::{chi, chi_int, chi_omega, chi_one_minus_omega, reciprocity_check};
use cubres::{decompose_prime, CharacterContext, EisensteinInt};
use num_bigint::BigInt;

fn main() {
    let d = decompose_prime(&BigInt::from(63601)).expect("63601 ≡ 1 mod 3");
    let ctx = CharacterContext::from_decomposition(&d);
    println!("pi = {} over p = {}", d.pi, d.p);
    for q in [2, 3, 5, 7, 11, 13, 490] {
        println!("  chi({q:>3}) = {}", chi_int(&ctx, &BigInt::from(q)));
    }
    println!("  chi(w) = {}", chi_omega(&ctx).expect("complex prime"));
    println!("  chi(1 - w) = {}", chi_one_minus_omega(&ctx));

    let alpha = EisensteinInt::new(5, 7);
    println!("  chi({alpha}) = {}", chi(&ctx, &alpha));

    let pi = EisensteinInt::new(2, 3);
    let rho = EisensteinInt::new(-1, 3);
    let pc = CharacterContext::new(pi.clone()).unwrap();
    let rc = CharacterContext::new(rho.clone()).unwrap();
    println!(
        "reciprocity: chi_[{pi}]({rho}) = {}, chi_[{rho}]({pi}) = {}, holds: {}",
        chi(&pc, &rho),
        chi(&rc, &pi),
        reciprocity_check(&pi, &rho).unwrap()
    );
}

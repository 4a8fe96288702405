//! Is 1982 a cube modulo p = (3^19 + 5^82)/4? The rational rules answer
//! from L = 5^41 and M = 3^8 without any modular exponentiation.

use cubres::ratchar::{rule_literal_function, Rule};
use cubres::slopes::Slope;
use cubres::solver::is_cubic_residue_prime;
use cubres::RationalCharacter;
use num_bigint::BigInt;

fn main() {
    let p: BigInt = (num_traits::pow(BigInt::from(3), 19) + num_traits::pow(BigInt::from(5), 82)) / 4u32;
    let rc = RationalCharacter::new(&p).unwrap();
    println!("p = {p}");
    println!("L = {} = 5^41, M = {} = 3^8", rc.decomposition().l, rc.decomposition().m);

    let two = rc.chi_prime(&BigInt::from(2)).unwrap();
    println!("chi(2) = {} by rule ({})", two.value, two.rule);

    let s = rc.slope(991);
    println!("M/L ≡ {s} ≡ -{} (mod 991)", s.neg(991));
    for rule in [Rule::E, Rule::F] {
        let set = rule_literal_function(rule).unwrap().value_set(991).unwrap();
        println!(
            "  rule ({rule}) list contains 319: {}, 672: {}; verdict {}",
            set.contains(&Slope::Finite(319)),
            set.contains(&Slope::Finite(672)),
            rc.apply_rule(rule, 991).unwrap().map_or("not applicable".to_string(), |v| v.to_string())
        );
    }

    let chi = rc.chi(&BigInt::from(1982)).unwrap();
    println!("chi(1982) = {chi}");
    println!(
        "1982 is a cube mod p (by exponentiation): {}",
        is_cubic_residue_prime(&BigInt::from(1982), &p).unwrap()
    );
}

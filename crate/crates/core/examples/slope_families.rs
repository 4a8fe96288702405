//! The slope functions g_gamma: their value sets modulo q, and how the
//! sets for 1, gamma and its conjugate split the projective line.

use cubres::slopes::{lehmer_original_slopes, slope_set, undefined_slopes, GammaParams};

fn main() {
    let gamma = GammaParams::new(2, 3);
    for q in [5u64, 11, 17, 19, 23] {
        println!("q = {q}");
        for (name, gp) in [("1", GammaParams::one()), ("2+3w", gamma), ("conj", gamma.conj())] {
            match slope_set(gp, q) {
                Ok(s) => {
                    let members: Vec<String> = s.members().iter().map(|m| m.to_string()).collect();
                    println!("  g_{name:<5} hits {{{}}}", members.join(", "));
                }
                Err(e) => println!("  g_{name:<5} {e}"),
            }
        }
        let undefined = undefined_slopes(q);
        if !undefined.is_empty() {
            let u: Vec<String> = undefined.iter().map(|s| s.to_string()).collect();
            println!("  undefined slopes: {}", u.join(", "));
        }
        let original = lehmer_original_slopes(q).unwrap();
        println!("  Lehmer's own list (as L/M): {} values", original.len());
    }
}

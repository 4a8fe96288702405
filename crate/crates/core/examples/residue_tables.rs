//! Print the residue tables f_q(l, m) for small q and check their
//! structural laws.
//!
//!     cargo run --release --example residue_tables -- 13

use cubres::tables::{build_table, known_grid, verify_table, DEFAULT_SEARCH_BOUND};

fn main() {
    let qs: Vec<u64> = match std::env::args().nth(1) {
        Some(q) => vec![q.parse().expect("q must be an integer")],
        None => vec![2, 3, 5, 7],
    };
    for q in qs {
        let table = match build_table(q, DEFAULT_SEARCH_BOUND) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("q = {q}: {e}");
                continue;
            }
        };
        print!("{table}");
        let report = verify_table(&table);
        println!("value counts over unit classes: {:?}", report.distribution);
        println!("clean: {}", report.is_clean());
        if let Some(grid) = known_grid(q) {
            println!("matches the reference grid: {}", grid == table.entries);
        }
        println!();
    }
}

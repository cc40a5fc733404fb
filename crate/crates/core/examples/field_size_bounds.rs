//! Field-size limits from the MDS conjecture and the construction comparison
//! table.
//!
//! Run with `cargo run --example field_size_bounds`.

use sdmm::cli::comparison_rows;
use sdmm::schemes::mds_conjecture_bound;

fn main() {
    for (n, x) in [(10, 2), (10, 3), (4, 1), (5, 3)] {
        println!("{}\n", mds_conjecture_bound(n, x));
    }
    for row in comparison_rows(2, 1, 1) {
        println!("{:<15} N={:<3} R={:<3} minimal {:<5} {}{}",
            row.construction, row.workers, row.recovery_threshold, row.minimal_recovery, row.field_condition,
            if row.implemented { "" } else { "  (reference only)" });
    }
}

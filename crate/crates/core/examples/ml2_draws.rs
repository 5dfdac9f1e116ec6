//! Prints the default (α, β, z) draws of the E_{α,β} identity suite, one per
//! line, for regenerating `tests/data/ml2_reference.txt`.

use frackin::mlkit::identities::{ml2_draws, DEFAULT_SEED};

fn main() {
    for [a, b, z] in ml2_draws(DEFAULT_SEED, 200) {
        println!("{a:?} {b:?} {z:?}");
    }
}

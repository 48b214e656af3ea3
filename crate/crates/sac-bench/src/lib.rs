//! Benchmark-only crate; see `benches/core.rs`.

use sac_core::qsim::derive_stream;
use sac_core::{random_function, BooleanFunction};

/// A fixed pseudorandom function for benches, so runs compare like with like.
pub fn bench_function(n: usize) -> BooleanFunction {
    let mut rng = derive_stream(0xbe2c4, 0);
    random_function(n, &mut rng).expect("bench arity is valid")
}

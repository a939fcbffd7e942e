//! Fixed benchmark inputs shared by the criterion benches.

use regmatch_core::generators::random_regular;
use regmatch_core::BipartiteMultigraph;

pub const FIXTURE_SEED: u64 = 0x5eed;

/// `(n, d)` pairs with `d = n/2`, the dense regime where sampling pays off.
pub const DENSE_SIZES: &[(usize, usize)] = &[(256, 128), (512, 256), (1024, 512)];

/// Random `d`-regular graph on `n + n` vertices, identical across runs.
pub fn fixture(n: usize, d: usize) -> BipartiteMultigraph {
    random_regular(n, d, FIXTURE_SEED).expect("valid fixture parameters")
}

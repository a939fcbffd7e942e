//! Perfect matchings in regular bipartite graphs by uniform edge sampling.
//!
//! The fast path samples each edge of a `d`-regular bipartite graph with
//! probability `p = c·n·ln n / d²` and runs Hopcroft-Karp on the sample
//! ([`matcher::find_perfect_matching`]). The remaining modules build the graph
//! families and brute-force checks that back up why the sampling rate works,
//! and why it cannot be lowered much:
//!
//! * [`witness`]: Hall violators, minimal relevant pairs, and the
//!   witness-set to cut injection.
//! * [`decomposition`]: splitting a small graph into pieces with large
//!   minimum cut.
//! * [`generators`]: random regular graphs and the chained lower-bound family.
//! * [`experiment`]: Monte Carlo survival curves, lower-bound checks, cut
//!   preservation, and timing runs, written as CSV.

pub mod decomposition;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod matcher;
pub mod rng;
pub mod sampler;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{
    read_graph, validate_perfect_matching, write_graph, BipartiteMultigraph, EdgeId, Matching, Side,
    VertexSet,
};
pub use matcher::{find_perfect_matching, hopcroft_karp, MatchResult};
pub use sampler::{sample_edges, SamplingConfig};

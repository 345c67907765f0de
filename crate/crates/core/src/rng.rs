//! Seeded random streams.
//!
//! Every stochastic routine draws from a ChaCha8 stream derived from one
//! master seed and a stream index (`set_stream`), so trajectory `r` of a
//! Monte Carlo ensemble sees the same numbers no matter how the runs are
//! scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stream type used throughout the crate.
pub type SimRng = ChaCha8Rng;

/// Stream index reserved for Q-learning training episodes.
pub const TRAINING_STREAM: u64 = 0;

/// Offset for greedy evaluation rollouts; rollout after episode `e` uses
/// stream `EVALUATION_STREAM_BASE + e`.
pub const EVALUATION_STREAM_BASE: u64 = 1 << 32;

/// Returns the stream with index `stream` under master seed `seed`.
pub fn stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

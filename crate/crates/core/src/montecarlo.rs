//! Deterministic chunked Monte Carlo.
//!
//! Work is cut into fixed-size chunks and chunk `c` always draws from ChaCha
//! stream `c` of the base seed, so results do not depend on how many worker
//! threads run the chunks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;

/// Samples per chunk.
pub const CHUNK_SIZE: u64 = 4096;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `work(rng, count)` over chunks of `samples` in parallel and folds the
/// results in chunk order with `merge`.
pub fn run_chunked<T, W, M>(seed: u64, samples: u64, work: W, merge: M) -> Result<Option<T>>
where
    T: Send,
    W: Fn(&mut ChaCha8Rng, u64) -> Result<T> + Sync,
    M: Fn(T, T) -> T,
{
    let chunks = samples.div_ceil(CHUNK_SIZE);
    let parts: Vec<Result<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK_SIZE.min(samples - c * CHUNK_SIZE);
            work(&mut stream_rng(seed, c), count)
        })
        .collect();
    let mut acc: Option<T> = None;
    for part in parts {
        let part = part?;
        acc = Some(match acc {
            None => part,
            Some(prev) => merge(prev, part),
        });
    }
    Ok(acc)
}

/// Runs `f` on a dedicated pool of `workers` threads (`0` means the global pool).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

//! Seeded random streams.
//!
//! All randomness comes from ChaCha8. A seed selects the key; the stream id
//! separates training noise from evaluation-goal sampling so the two never
//! share draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const TRAINING_STREAM: u64 = 0;
const EVALUATION_STREAM: u64 = 1;

pub fn training_rng(seed: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(TRAINING_STREAM);
    rng
}

pub fn evaluation_rng(seed: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(EVALUATION_STREAM);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_differ_for_the_same_seed() {
        let a: Vec<u64> = (0..4).map({
            let mut r = training_rng(9);
            move |_| r.next_u64()
        }).collect();
        let b: Vec<u64> = (0..4).map({
            let mut r = evaluation_rng(9);
            move |_| r.next_u64()
        }).collect();
        assert_ne!(a, b);
        assert_eq!(training_rng(9).next_u64(), a[0]);
    }
}

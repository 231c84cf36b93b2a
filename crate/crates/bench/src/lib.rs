//! Shared helpers for the benchmark targets.

use orbas_core::synth::DeterministicRng;

/// Random letter sequences shaped like extracted call sequences.
pub fn random_sequences(count: usize, max_len: usize, alphabet: usize, seed: u64) -> Vec<Vec<char>> {
    let mut rng = DeterministicRng::seeded(seed);
    (0..count)
        .map(|_| {
            let len = 2 + rng.next_below(max_len.saturating_sub(1).max(1));
            (0..len).map(|_| (b'a' + rng.next_below(alphabet) as u8) as char).collect()
        })
        .collect()
}

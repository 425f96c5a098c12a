//! Random reduced words and braids for sampled checks. All functions take the
//! generator from the caller, so results are reproducible from a seed.

use alloc::vec::Vec;

use rand::Rng;

use crate::braid::{p3_assemble, Braid, BraidWord};
use crate::word::{Letter, Word};

/// A uniformly random reduced word of exactly `len` letters.
pub fn random_word_of_length<R: Rng + ?Sized>(rng: &mut R, rank: u32, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.random_range(1..=rank), rng.random_bool(0.5));
        if letters.last().is_some_and(|&last| last == l.inverse()) {
            continue;
        }
        letters.push(l);
    }
    Word::reduce(letters)
}

/// A random reduced word whose length is uniform in `0..=max_len`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, rank: u32, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    random_word_of_length(rng, rank, len)
}

/// A random (not necessarily reduced) braid word of length in `0..=max_len`.
pub fn random_braid_word<R: Rng + ?Sized>(rng: &mut R, strands: u32, max_len: usize) -> BraidWord {
    let len = rng.random_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let i = rng.random_range(1..strands as i32);
            if rng.random_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    BraidWord::new(strands, letters).expect("indices in range")
}

/// `ι(w)·Δ^{2k}` for a random `w` with `|w| ≤ max_len` and `|k| ≤ max_center`,
/// together with the coordinates used.
pub fn random_pure_braid<R: Rng + ?Sized>(rng: &mut R, max_len: usize, max_center: i64) -> (Braid, Word, i64) {
    let w = random_word(rng, 2, max_len);
    let k = rng.random_range(-max_center..=max_center);
    (p3_assemble(&w, k), w, k)
}

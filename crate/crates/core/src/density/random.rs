//! Seeded random bigraphons (ChaCha8 streams).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BigraphonTuple, StepBigraphon};
use crate::bigraph::Color;

/// Uniform weights and i.i.d. values uniform on `[floor, 1]`.
pub fn random_step_bigraphon(rows: usize, cols: usize, seed: u64, floor: f64) -> StepBigraphon {
    random_with(&mut ChaCha8Rng::seed_from_u64(seed), rows, cols, floor)
}

pub fn random_with<R: Rng>(rng: &mut R, rows: usize, cols: usize, floor: f64) -> StepBigraphon {
    let w = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(floor..=1.0)).collect()).collect();
    StepBigraphon::uniform(w).expect("random values are valid")
}

/// Entries close to a random 0/1 pattern: `1 - jitter` or `floor + jitter`.
pub fn near_indicator<R: Rng>(rng: &mut R, rows: usize, cols: usize, floor: f64) -> StepBigraphon {
    let w = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    let jitter = rng.gen_range(0.0..0.01);
                    if rng.gen_bool(0.5) { 1.0 - jitter } else { floor + jitter * floor }
                })
                .collect()
        })
        .collect();
    StepBigraphon::uniform(w).expect("random values are valid")
}

/// One independent random bigraphon per color over common uniform spaces.
pub fn random_positive_tuple<R: Rng>(rng: &mut R, colors: &[Color], rows: usize, cols: usize, floor: f64) -> BigraphonTuple {
    let members: BTreeMap<Color, StepBigraphon> = colors.iter().map(|&c| (c, random_with(rng, rows, cols, floor))).collect();
    BigraphonTuple::new(members).expect("shared uniform spaces")
}

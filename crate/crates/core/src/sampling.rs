//! Seeded random systems and step functions for sampled checks.

use num::traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::measure::{MeasureSystem, Tails};
use crate::rational::{rat, Exponent, Rational};
use crate::step::StepFunction;

/// Deterministic generator for a `u64` seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailChoice {
    /// Pure window.
    None,
    /// Both ratios below one.
    Contracting,
    /// Ratios drawn from a set that straddles one.
    Arbitrary,
}

#[derive(Clone, Debug)]
pub struct SystemShape {
    pub p: Exponent,
    pub max_side: i64,
    pub max_cells: usize,
    pub tails: TailChoice,
}

impl Default for SystemShape {
    fn default() -> Self {
        SystemShape {
            p: Exponent::one(),
            max_side: 4,
            max_cells: 3,
            tails: TailChoice::Arbitrary,
        }
    }
}

const CONTRACTING: [(i64, i64); 4] = [(1, 3), (1, 2), (2, 3), (3, 4)];
const ARBITRARY: [(i64, i64); 7] = [(1, 3), (1, 2), (2, 3), (1, 1), (3, 2), (2, 1), (3, 1)];

fn small_positive<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(1..=9), rng.gen_range(1..=9))
}

fn small_nonzero<R: Rng>(rng: &mut R) -> Rational {
    let n = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(n, rng.gen_range(1..=9))
}

fn pick<R: Rng>(rng: &mut R, table: &[(i64, i64)]) -> Rational {
    let &(n, d) = table.choose(rng).expect("table is nonempty");
    rat(n, d)
}

pub fn random_system<R: Rng>(rng: &mut R, shape: &SystemShape) -> MeasureSystem {
    let k_min = -rng.gen_range(0..=shape.max_side);
    let k_max = rng.gen_range(0..=shape.max_side);
    let cells = rng.gen_range(1..=shape.max_cells.max(1));
    let mu = (k_min..=k_max)
        .map(|_| (0..cells).map(|_| small_positive(rng)).collect())
        .collect();
    let tails = match shape.tails {
        TailChoice::None => None,
        TailChoice::Contracting => Some(Tails::new(pick(rng, &CONTRACTING), pick(rng, &CONTRACTING))),
        TailChoice::Arbitrary => Some(Tails::new(pick(rng, &ARBITRARY), pick(rng, &ARBITRARY))),
    };
    let names = (0..cells).map(|i| format!("B{i}")).collect();
    MeasureSystem::new(shape.p.clone(), k_min, k_max, names, mu, tails).expect("sampled data is valid")
}

/// Levels a sampled step function may occupy: a few tail levels when tails
/// exist, otherwise the window minus its bottom level so `T_f φ` stays defined.
pub fn sample_levels(sys: &MeasureSystem) -> (i64, i64) {
    let (k_min, k_max) = sys.window();
    if sys.tails().is_some() {
        (k_min - 3, k_max + 3)
    } else {
        (k_min + 1, k_max)
    }
}

/// Random nonzero rational step function with at most `max_terms` terms.
/// Empty when the sampling range is empty.
pub fn random_step_function<R: Rng>(rng: &mut R, sys: &MeasureSystem, max_terms: usize) -> StepFunction {
    let (lo, hi) = sample_levels(sys);
    if lo > hi {
        return StepFunction::zero(sys);
    }
    let terms = rng.gen_range(1..=max_terms.max(1));
    let entries: Vec<_> = (0..terms)
        .map(|_| {
            let k = rng.gen_range(lo..=hi);
            let cell = rng.gen_range(0..sys.cell_count());
            ((k, cell), small_nonzero(rng))
        })
        .collect();
    let phi = StepFunction::new(sys, entries).expect("levels are covered");
    if phi.is_zero() {
        StepFunction::level_indicator(sys, hi, Rational::one())
    } else {
        phi
    }
}

/// Random rational vector of at most `max_terms` terms on indices `lo..=hi`.
pub fn random_coefficients<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_terms: usize) -> Vec<(i64, Rational)> {
    let terms = rng.gen_range(1..=max_terms.max(1));
    let mut out: Vec<(i64, Rational)> = (0..terms).map(|_| (rng.gen_range(lo..=hi), small_nonzero(rng))).collect();
    out.retain(|(_, q)| !q.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        let shape = SystemShape::default();
        let a = random_system(&mut rng_from_seed(7), &shape);
        let b = random_system(&mut rng_from_seed(7), &shape);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn sampled_step_functions_stay_in_range() {
        let mut rng = rng_from_seed(3);
        for tails in [TailChoice::None, TailChoice::Contracting] {
            let shape = SystemShape { tails, ..SystemShape::default() };
            for _ in 0..50 {
                let sys = random_system(&mut rng, &shape);
                let phi = random_step_function(&mut rng, &sys, 4);
                let (lo, hi) = sample_levels(&sys);
                assert!(phi.levels().iter().all(|k| (lo..=hi).contains(k)));
            }
        }
    }
}

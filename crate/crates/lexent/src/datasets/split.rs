//! Class-balanced dev1/dev2/test splitting.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::LabeledPair;

/// Class counts `(ones, zeros)` of each split, plus whether the input was
/// class-balanced to begin with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitReport {
    pub dev1: (usize, usize),
    pub dev2: (usize, usize),
    pub test: (usize, usize),
    pub input_balanced: bool,
}

/// The three splits in dev1, dev2, test order with their report.
pub type ThreeWaySplit = (
    Vec<LabeledPair>,
    Vec<LabeledPair>,
    Vec<LabeledPair>,
    SplitReport,
);

/// Random three-way split preserving the class balance: each class is
/// shuffled separately and divided by the given fractions, remainders going
/// to the test split. Deterministic per seed.
pub fn split_dev_test_with(
    dataset: &[LabeledPair],
    dev1_fraction: f64,
    dev2_fraction: f64,
    seed: u64,
) -> Result<ThreeWaySplit> {
    if dataset.is_empty() {
        return Err(Error::Input("cannot split an empty dataset".into()));
    }
    if !(dev1_fraction > 0.0 && dev2_fraction > 0.0 && dev1_fraction + dev2_fraction < 1.0) {
        return Err(Error::Parameter(format!(
            "split fractions must be positive and sum below 1, got {dev1_fraction} + {dev2_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dev1 = Vec::new();
    let mut dev2 = Vec::new();
    let mut test = Vec::new();
    for class in [1u8, 0u8] {
        let mut members: Vec<&LabeledPair> = dataset.iter().filter(|p| p.label == class).collect();
        members.shuffle(&mut rng);
        let n = members.len();
        let n1 = (n as f64 * dev1_fraction).floor() as usize;
        let n2 = (n as f64 * dev2_fraction).floor() as usize;
        for (i, p) in members.into_iter().enumerate() {
            if i < n1 {
                dev1.push(p.clone());
            } else if i < n1 + n2 {
                dev2.push(p.clone());
            } else {
                test.push(p.clone());
            }
        }
    }
    let count = |split: &[LabeledPair]| {
        let ones = split.iter().filter(|p| p.label == 1).count();
        (ones, split.len() - ones)
    };
    let total_ones = dataset.iter().filter(|p| p.label == 1).count();
    let report = SplitReport {
        dev1: count(&dev1),
        dev2: count(&dev2),
        test: count(&test),
        input_balanced: 2 * total_ones == dataset.len(),
    };
    Ok((dev1, dev2, test, report))
}

/// Thirds split, matching the published dev/dev/test sizes on a balanced
/// 2,308-pair dataset (768 / 768 / 772).
pub fn split_dev_test(dataset: &[LabeledPair], seed: u64) -> Result<ThreeWaySplit> {
    split_dev_test_with(dataset, 1.0 / 3.0, 1.0 / 3.0, seed)
}

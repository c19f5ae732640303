//! Confusion-matrix measures: class-wise and class-weighted precision,
//! recall and F, plus accuracy as a percentage.

use crate::error::{Error, Result};

use super::wilson::wilson_interval;

/// Counts `c[actual][predicted]` for binary labels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub c00: u64,
    pub c01: u64,
    pub c10: u64,
    pub c11: u64,
}

impl ConfusionMatrix {
    pub fn new(c00: u64, c01: u64, c10: u64, c11: u64) -> Self {
        ConfusionMatrix { c00, c01, c10, c11 }
    }

    pub fn add(&mut self, actual: u8, predicted: u8) {
        match (actual, predicted) {
            (0, 0) => self.c00 += 1,
            (0, 1) => self.c01 += 1,
            (1, 0) => self.c10 += 1,
            (1, 1) => self.c11 += 1,
            _ => unreachable!("labels are binary"),
        }
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        self.c00 += other.c00;
        self.c01 += other.c01;
        self.c10 += other.c10;
        self.c11 += other.c11;
    }

    pub fn total(&self) -> u64 {
        self.c00 + self.c01 + self.c10 + self.c11
    }

    pub fn correct(&self) -> u64 {
        self.c00 + self.c11
    }

    pub fn accuracy_fraction(&self) -> f64 {
        self.correct() as f64 / self.total() as f64
    }
}

/// All measures of one evaluation run. `acc` is a percentage; `ap0`/`ap1`
/// are filled by ranking-aware drivers and absent when a class has no
/// examples. `degenerate` lists class-wise measures that were forced to 0
/// by a zero denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub ap0: Option<f64>,
    pub ap1: Option<f64>,
    pub pre0: f64,
    pub pre1: f64,
    pub rec0: f64,
    pub rec1: f64,
    pub f0: f64,
    pub f1: f64,
    pub pre: f64,
    pub rec: f64,
    pub f: f64,
    pub acc: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub confusion: ConfusionMatrix,
    pub degenerate: Vec<&'static str>,
}

fn guarded(num: f64, den: f64, name: &'static str, degenerate: &mut Vec<&'static str>) -> f64 {
    if den == 0.0 {
        degenerate.push(name);
        0.0
    } else {
        num / den
    }
}

/// Compute every confusion-based measure at 95% confidence for the Wilson
/// interval. Zero-denominator class measures come back as 0 and are listed
/// in `degenerate`.
pub fn metrics(confusion: &ConfusionMatrix) -> Result<MetricsReport> {
    let total = confusion.total();
    if total == 0 {
        return Err(Error::Input(
            "cannot compute metrics of an empty confusion matrix".into(),
        ));
    }
    let (c00, c01, c10, c11) = (
        confusion.c00 as f64,
        confusion.c01 as f64,
        confusion.c10 as f64,
        confusion.c11 as f64,
    );
    let mut degenerate = Vec::new();
    let pre0 = guarded(c00, c00 + c10, "pre0", &mut degenerate);
    let pre1 = guarded(c11, c11 + c01, "pre1", &mut degenerate);
    let rec0 = guarded(c00, c00 + c01, "rec0", &mut degenerate);
    let rec1 = guarded(c11, c11 + c10, "rec1", &mut degenerate);
    let f0 = guarded(2.0 * pre0 * rec0, pre0 + rec0, "f0", &mut degenerate);
    let f1 = guarded(2.0 * pre1 * rec1, pre1 + rec1, "f1", &mut degenerate);

    let w0 = (c00 + c01) / total as f64;
    let w1 = (c11 + c10) / total as f64;
    let acc_fraction = confusion.accuracy_fraction();
    let (wilson_low, wilson_high) = wilson_interval(acc_fraction, total as usize, 0.95);

    Ok(MetricsReport {
        ap0: None,
        ap1: None,
        pre0,
        pre1,
        rec0,
        rec1,
        f0,
        f1,
        pre: w0 * pre0 + w1 * pre1,
        rec: w0 * rec0 + w1 * rec1,
        f: w0 * f0 + w1 * f1,
        acc: 100.0 * acc_fraction,
        wilson_low,
        wilson_high,
        confusion: *confusion,
        degenerate,
    })
}

/// Just the class-weighted F-measure; the objective of threshold tuning.
pub fn weighted_f(confusion: &ConfusionMatrix) -> f64 {
    let total = confusion.total();
    if total == 0 {
        return 0.0;
    }
    let (c00, c01, c10, c11) = (
        confusion.c00 as f64,
        confusion.c01 as f64,
        confusion.c10 as f64,
        confusion.c11 as f64,
    );
    let frac = |num: f64, den: f64| if den == 0.0 { 0.0 } else { num / den };
    let pre0 = frac(c00, c00 + c10);
    let pre1 = frac(c11, c11 + c01);
    let rec0 = frac(c00, c00 + c01);
    let rec1 = frac(c11, c11 + c10);
    let f0 = frac(2.0 * pre0 * rec0, pre0 + rec0);
    let f1 = frac(2.0 * pre1 * rec1, pre1 + rec1);
    let w0 = (c00 + c01) / total as f64;
    let w1 = (c11 + c10) / total as f64;
    w0 * f0 + w1 * f1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_evaluated_confusion() {
        let c = ConfusionMatrix::new(50, 10, 20, 20);
        let m = metrics(&c).unwrap();
        assert!((m.pre0 - 5.0 / 7.0).abs() < 1e-12);
        assert!((m.pre1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.rec0 - 5.0 / 6.0).abs() < 1e-12);
        assert!((m.rec1 - 0.5).abs() < 1e-12);
        assert!((m.f0 - 10.0 / 13.0).abs() < 1e-12);
        assert!((m.f1 - 4.0 / 7.0).abs() < 1e-12);
        assert!((m.pre - 0.6952).abs() < 1e-4);
        assert!((m.rec - 0.7).abs() < 1e-12);
        assert!((m.f - 0.6901).abs() < 1e-4);
        assert!((m.acc - 70.0).abs() < 1e-12);
        assert!(m.degenerate.is_empty());
    }

    #[test]
    fn perfect_diagonal() {
        let c = ConfusionMatrix::new(30, 0, 0, 30);
        let m = metrics(&c).unwrap();
        for v in [m.pre, m.rec, m.f, m.pre0, m.pre1, m.rec0, m.rec1] {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!((m.acc - 100.0).abs() < 1e-12);
    }

    #[test]
    fn constant_predictor_balanced_truth() {
        // everything predicted class 1 on a balanced dataset
        let c = ConfusionMatrix::new(0, 30, 0, 30);
        let m = metrics(&c).unwrap();
        assert!((m.rec1 - 1.0).abs() < 1e-12);
        assert!((m.pre1 - 0.5).abs() < 1e-12);
        assert!((m.acc - 50.0).abs() < 1e-12);
        assert!(m.degenerate.contains(&"pre0"));
        assert_eq!(m.rec0, 0.0);
    }

    #[test]
    fn weighted_recall_equals_accuracy_when_off_diagonal_balanced() {
        // c01 == c10 forces weighted recall == acc / 100
        let c = ConfusionMatrix::new(37, 13, 13, 21);
        let m = metrics(&c).unwrap();
        assert!((m.rec - m.acc / 100.0).abs() < 1e-12);
    }

    #[test]
    fn empty_matrix_is_an_error() {
        assert!(metrics(&ConfusionMatrix::default()).is_err());
    }
}

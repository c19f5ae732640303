//! Platt scaling: fit a sigmoid to decision values by regularized maximum
//! likelihood with robust Newton steps and backtracking line search.

use crate::error::{Error, Result};

const MAX_ITER: usize = 100;
const MIN_STEP: f64 = 1e-10;
const SIGMA: f64 = 1e-12;
const GRAD_EPS: f64 = 1e-5;

fn objective(values: &[f64], targets: &[f64], a: f64, b: f64) -> f64 {
    let mut fval = 0.0;
    for (&f, &t) in values.iter().zip(targets) {
        let fapb = f * a + b;
        if fapb >= 0.0 {
            fval += t * fapb + (1.0 + (-fapb).exp()).ln();
        } else {
            fval += (t - 1.0) * fapb + (1.0 + fapb.exp()).ln();
        }
    }
    fval
}

/// Fit `(A, B)` so that `1 / (1 + exp(A f + B))` matches the smoothed
/// class-1 targets `(N+ + 1)/(N+ + 2)` and `1/(N- + 2)`. Fails on
/// single-class input or if Newton iteration does not converge within 100
/// steps.
pub fn fit_platt(decision_values: &[f64], labels: &[u8]) -> Result<(f64, f64)> {
    if decision_values.len() != labels.len() {
        return Err(Error::Input(format!(
            "{} decision values for {} labels",
            decision_values.len(),
            labels.len()
        )));
    }
    let prior1 = labels.iter().filter(|&&l| l == 1).count() as f64;
    let prior0 = labels.len() as f64 - prior1;
    if prior0 == 0.0 || prior1 == 0.0 {
        return Err(Error::Calibration("calibration needs both classes".into()));
    }

    let hi = (prior1 + 1.0) / (prior1 + 2.0);
    let lo = 1.0 / (prior0 + 2.0);
    let targets: Vec<f64> = labels
        .iter()
        .map(|&l| if l == 1 { hi } else { lo })
        .collect();

    let mut a = 0.0f64;
    let mut b = ((prior0 + 1.0) / (prior1 + 1.0)).ln();
    let mut fval = objective(decision_values, &targets, a, b);

    for _ in 0..MAX_ITER {
        let (mut h11, mut h22) = (SIGMA, SIGMA);
        let mut h21 = 0.0;
        let mut g1 = 0.0;
        let mut g2 = 0.0;
        for (&f, &t) in decision_values.iter().zip(&targets) {
            let fapb = f * a + b;
            let (p, q) = if fapb >= 0.0 {
                let e = (-fapb).exp();
                (e / (1.0 + e), 1.0 / (1.0 + e))
            } else {
                let e = fapb.exp();
                (1.0 / (1.0 + e), e / (1.0 + e))
            };
            let d2 = p * q;
            h11 += f * f * d2;
            h22 += d2;
            h21 += f * d2;
            let d1 = t - p;
            g1 += f * d1;
            g2 += d1;
        }
        if g1.abs() < GRAD_EPS && g2.abs() < GRAD_EPS {
            return Ok((a, b));
        }

        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;

        let mut step = 1.0;
        loop {
            if step < MIN_STEP {
                return Err(Error::Numerical(
                    "platt line search failed to make progress".into(),
                ));
            }
            let new_a = a + step * da;
            let new_b = b + step * db;
            let new_f = objective(decision_values, &targets, new_a, new_b);
            if new_f < fval + 1e-4 * step * gd {
                a = new_a;
                b = new_b;
                fval = new_f;
                break;
            }
            step /= 2.0;
        }
    }
    Err(Error::Numerical(format!(
        "platt fitting did not converge within {MAX_ITER} iterations"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigmoid(a: f64, b: f64, f: f64) -> f64 {
        1.0 / (1.0 + (a * f + b).exp())
    }

    #[test]
    fn antisymmetric_values_balanced_labels_center_b_at_zero() {
        let values = [2.0, 1.0, 0.5, -0.5, -1.0, -2.0];
        let labels = [1, 1, 1, 0, 0, 0];
        let (a, b) = fit_platt(&values, &labels).unwrap();
        assert!(a < 0.0);
        assert!(b.abs() < 1e-3, "B = {b}");
    }

    #[test]
    fn constant_values_reduce_to_smoothed_rate() {
        let values = [0.0; 10];
        let labels = [1, 1, 1, 1, 1, 1, 1, 0, 0, 0];
        let (a, b) = fit_platt(&values, &labels).unwrap();
        // with all f = 0, the fitted probability is the mean target
        let hi = (7.0 + 1.0) / (7.0 + 2.0);
        let lo = 1.0 / (3.0 + 2.0);
        let mean_target = (7.0 * hi + 3.0 * lo) / 10.0;
        assert!((sigmoid(a, b, 0.0) - mean_target).abs() < 1e-4);
    }

    #[test]
    fn rescaling_values_rescales_a_inversely() {
        let values = [3.0, 2.5, 1.0, 0.2, -0.7, -1.4, -2.2, -3.1];
        let labels = [1, 1, 1, 1, 0, 0, 0, 0];
        let (a1, b1) = fit_platt(&values, &labels).unwrap();
        let scaled: Vec<f64> = values.iter().map(|v| v * 10.0).collect();
        let (a10, b10) = fit_platt(&scaled, &labels).unwrap();
        assert!((a10 - a1 / 10.0).abs() < 1e-6, "a1 = {a1}, a10 = {a10}");
        assert!((b1 - b10).abs() < 1e-5);
        for (&f, &fs) in values.iter().zip(&scaled) {
            assert!((sigmoid(a1, b1, f) - sigmoid(a10, b10, fs)).abs() < 1e-6);
        }
    }

    #[test]
    fn separated_data_stays_off_the_extremes() {
        let values = [5.0, 4.0, 3.0, -3.0, -4.0, -5.0];
        let labels = [1, 1, 1, 0, 0, 0];
        let (a, b) = fit_platt(&values, &labels).unwrap();
        // regularized targets keep probabilities away from exactly 0 and 1
        let hi = (3.0 + 1.0) / (3.0 + 2.0);
        let lo = 1.0 / (3.0 + 2.0);
        for &f in &values {
            let p = sigmoid(a, b, f);
            assert!(p > 0.0 && p < 1.0);
            assert!(p <= hi + 0.05 && p >= lo - 0.05);
        }
    }

    #[test]
    fn single_class_is_a_calibration_error() {
        assert!(fit_platt(&[1.0, 2.0], &[1, 1]).is_err());
    }
}

//! Two-sided Fisher's exact test for comparing two systems' accuracies.

/// Natural log of the gamma function (Lanczos, g = 7, 9 terms).
// published coefficients kept digit-for-digit
#[allow(clippy::excessive_precision)]
fn ln_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(x > 0.0);
    let x = x - 1.0;
    let mut acc = G[0];
    for (i, &g) in G.iter().enumerate().skip(1) {
        acc += g / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

fn ln_choose(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Two-sided Fisher p-value for the 2x2 table
///
/// ```text
///           correct   incorrect
/// system A  ca        n_a - ca
/// system B  cb        n_b - cb
/// ```
///
/// Sums the probabilities of all tables with the same margins whose
/// hypergeometric probability does not exceed that of the observed table
/// (ties included via a 1e-9 relative slack).
pub fn fisher_exact(correct_a: u64, n_a: u64, correct_b: u64, n_b: u64) -> f64 {
    assert!(correct_a <= n_a, "correct_a exceeds n_a");
    assert!(correct_b <= n_b, "correct_b exceeds n_b");
    let n = n_a + n_b;
    if n == 0 {
        return 1.0;
    }
    let col1 = correct_a + correct_b;
    // feasible values of the top-left cell
    let k_min = col1.saturating_sub(n_b);
    let k_max = col1.min(n_a);

    let ln_denom = ln_choose(n, col1);
    let ln_prob = |k: u64| ln_choose(n_a, k) + ln_choose(n_b, col1 - k) - ln_denom;

    let observed = ln_prob(correct_a);
    let cutoff = observed + 1e-9;
    let mut p = 0.0;
    for k in k_min..=k_max {
        let lp = ln_prob(k);
        if lp <= cutoff {
            p += lp.exp();
        }
    }
    p.min(1.0)
}

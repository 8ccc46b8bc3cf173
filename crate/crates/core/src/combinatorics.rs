//! Factorials and binomial coefficients as `f64`.

use std::sync::LazyLock;

/// `k!` is finite in double precision up to `k = 170`.
pub const MAX_FACTORIAL: usize = 170;

static FACTORIALS: LazyLock<[f64; MAX_FACTORIAL + 1]> = LazyLock::new(|| {
    let mut table = [1.0; MAX_FACTORIAL + 1];
    for k in 1..=MAX_FACTORIAL {
        table[k] = table[k - 1] * k as f64;
    }
    table
});

/// `k!`, exact for `k ≤ 22`.
///
/// # Panics
///
/// Panics if `k > 170`.
pub fn factorial(k: usize) -> f64 {
    assert!(k <= MAX_FACTORIAL, "{k}! overflows f64");
    FACTORIALS[k]
}

/// `C(n, k)`, computed multiplicatively so that intermediate values stay small.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

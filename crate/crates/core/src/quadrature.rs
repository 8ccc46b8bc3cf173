//! Gauss–Legendre rules.
//!
//! Used as an independent integration route when checking closed-form
//! integrals and exact polynomial operator images.

/// Nodes and weights of the `k`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes come from Newton's method on the three-term Legendre recurrence.
/// The rule integrates polynomials of degree `2k - 1` exactly.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 1, "a quadrature rule needs at least one node");
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let kf = k as f64;
    for i in 0..k.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(k, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(k, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫ₐᵇ f` by the `k`-point rule mapped to `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, k: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(k);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// `∫₀¹∫₀¹ f(x, t) dt dx` by a tensor-product rule.
pub fn integrate_unit_square<F: Fn(f64, f64) -> f64>(f: F, k: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(k);
    let mut sum = 0.0;
    for (xi, wi) in nodes.iter().zip(&weights) {
        for (tj, wj) in nodes.iter().zip(&weights) {
            sum += wi * wj * f(0.5 * (1.0 + xi), 0.5 * (1.0 + tj));
        }
    }
    0.25 * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for k in 1..20 {
            let (_, w) = gauss_legendre(k);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn exact_for_degree_2k_minus_1() {
        for k in 1..12 {
            let deg = 2 * k - 1;
            let got = integrate(|x| x.powi(deg as i32), 0.0, 1.0, k);
            assert!((got - 1.0 / (deg + 1) as f64).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn three_point_rule() {
        let (x, w) = gauss_legendre(3);
        assert!((x[2] - (0.6f64).sqrt()).abs() < 1e-15);
        assert!(x[1].abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
    }
}

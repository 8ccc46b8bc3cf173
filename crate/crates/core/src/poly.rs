//! Real polynomials on `[0, 1]` in the monomial basis.
//!
//! Inner products are exact: `∫₀¹ xⁱ xʲ dx = 1/(i+j+1)`, so norms of
//! polynomial residuals carry no quadrature error.

use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;

/// Coefficients `c_0, …, c_d` of `Σ c_j xʲ`.
///
/// Trailing zero coefficients are trimmed, so the zero polynomial has no
/// coefficients and every other polynomial has a nonzero leading term.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// `c·xʲ`.
    pub fn monomial(j: usize, c: f64) -> Self {
        let mut coeffs = vec![0.0; j + 1];
        coeffs[j] = c;
        Poly::new(coeffs)
    }

    /// `(1 - x)ᵏ` expanded.
    pub fn one_minus_x_pow(k: usize) -> Self {
        Poly::new(
            (0..=k)
                .map(|i| {
                    let c = binomial(k, i);
                    if i % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let at = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(0.0);
        Poly::new((0..len).map(|i| at(self, i) + at(other, i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// `p(1 - x)`.
    pub fn reflect(&self) -> Poly {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (j, &c)| {
                acc.add(&Poly::one_minus_x_pow(j).scale(c))
            })
    }

    /// `∫₀¹ p(x) q(x) dx`, exact up to rounding.
    pub fn inner(&self, other: &Poly) -> f64 {
        let mut sum = 0.0;
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                sum += a * b / (i + j + 1) as f64;
            }
        }
        sum
    }

    /// L²[0,1] norm.
    pub fn norm(&self) -> f64 {
        // The Gram form can dip below zero by rounding for tiny residuals.
        self.inner(self).max(0.0).sqrt()
    }

    /// Scaled to unit L² norm; the zero polynomial is returned unchanged.
    pub fn normalized(&self) -> Poly {
        let n = self.norm();
        if n > 0.0 {
            self.scale(1.0 / n)
        } else {
            self.clone()
        }
    }
}

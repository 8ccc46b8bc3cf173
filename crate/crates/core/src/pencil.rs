//! Exact finite spectra of `Re Vⁿ` (n odd) and `Im Vⁿ` (n even).
//!
//! A nonzero eigenvalue of `Re(iⁿ⁻¹Vⁿ)` has a polynomial eigenfunction
//! `f(x) = Σ_{j<n} c_j xʲ`. Substituting into the boundary conditions that
//! the eigen-equation imposes at `x = 1` gives `(A - λB) v = 0` with
//! `v_j = j!·c_j` and
//!
//! ```text
//! A[j][k] = iⁿ⁻¹ / (j+n-k)!       B[j][k] = 2/(j-k)!  (j ≥ k),  0 otherwise.
//! ```
//!
//! The phase `iⁿ⁻¹` is factored out: with `A' = A / iⁿ⁻¹` and `μ` ranging
//! over the eigenvalues of `B⁻¹A'`,
//!
//! - n odd: `iⁿ⁻¹ = ε = ±1`, `Re(iⁿ⁻¹Vⁿ) = ε Re Vⁿ`, and the eigenvalues of
//!   `Re Vⁿ` are exactly the (real) `μ`;
//! - n even: `iⁿ⁻¹ = εi`, `Re(iⁿ⁻¹Vⁿ) = -ε Im Vⁿ`, and the eigenvalues of
//!   `Im Vⁿ` are `-iμ`, the `μ` being purely imaginary conjugate pairs.
//!
//! In both cases zero is also an eigenvalue, with a kernel of finite
//! codimension; it is reported as a flag and never as a spectrum entry.

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::kernels::{apply_imag_factor, apply_real_part, Part, PowerIndex};
use crate::poly::Poly;
use crate::spectrum::{by_modulus, SpectralValue, Source, Spectrum};
use crate::tolerances::{
    MAX_PENCIL_POWER, MULTIPLICITY_REL, PENCIL_CONTAMINATION, PENCIL_RESIDUAL, PENCIL_ZERO,
};

/// The factored-out phase `iⁿ⁻¹`: `ε` for odd `n`, `εi` for even `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseCase {
    OddReal { sign: i8 },
    EvenImag { sign: i8 },
}

impl PhaseCase {
    fn for_power(n: u32) -> Self {
        let sign = |e: u32| if e % 2 == 0 { 1 } else { -1 };
        if n % 2 == 1 {
            PhaseCase::OddReal {
                sign: sign((n - 1) / 2),
            }
        } else {
            PhaseCase::EvenImag {
                sign: sign((n - 2) / 2),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PencilPair {
    n: PowerIndex,
    a_prime: DMatrix<f64>,
    b: DMatrix<f64>,
    phase: PhaseCase,
}

pub fn build_pencil(n: PowerIndex) -> Result<PencilPair> {
    if n.get() > MAX_PENCIL_POWER {
        return Err(Error::CapacityExceeded {
            what: "pencil power",
            got: n.usize(),
            limit: MAX_PENCIL_POWER as usize,
        });
    }
    let size = n.usize();
    let a_prime = DMatrix::from_fn(size, size, |j, k| 1.0 / factorial(j + size - k));
    let b = DMatrix::from_fn(size, size, |j, k| {
        if j >= k {
            2.0 / factorial(j - k)
        } else {
            0.0
        }
    });
    Ok(PencilPair {
        n,
        a_prime,
        b,
        phase: PhaseCase::for_power(n.get()),
    })
}

impl PencilPair {
    pub fn n(&self) -> PowerIndex {
        self.n
    }

    pub fn a_prime(&self) -> &DMatrix<f64> {
        &self.a_prime
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn phase(&self) -> PhaseCase {
        self.phase
    }

    /// The self-adjoint part whose spectrum this pencil describes.
    pub fn part(&self) -> Part {
        match self.phase {
            PhaseCase::OddReal { .. } => Part::RealPart,
            PhaseCase::EvenImag { .. } => Part::ImagPart,
        }
    }

    /// Generalized eigenvalues `μ` of `(A', B)`.
    fn roots(&self) -> Result<Vec<Complex<f64>>> {
        let c = self
            .b
            .solve_lower_triangular(&self.a_prime)
            .ok_or_else(|| Error::Internal("pencil matrix B is singular".into()))?;
        let balanced = balance(c);
        let roots = balanced
            .try_schur(f64::EPSILON, 10_000)
            .ok_or_else(|| Error::NumericalBreakdown("Schur iteration did not converge".into()))?
            .complex_eigenvalues();
        Ok(roots.iter().copied().collect())
    }

    /// Null vector of `(A' - μB)ᵀ`.
    ///
    /// The boundary condition of order `k` reads `Σ_j A'[j][k] v_j = μ Σ_j B[j][k] v_j`,
    /// so the coefficient vector lives in the kernel of the transpose. The
    /// determinant, hence every `μ`, is the same for both.
    fn null_vector(&self, mu: Complex<f64>) -> Result<DVector<Complex<f64>>> {
        let size = self.n.usize();
        let m = DMatrix::from_fn(size, size, |k, j| {
            Complex::new(self.a_prime[(j, k)], 0.0) - mu * self.b[(j, k)]
        });
        let svd = m.svd(false, true);
        let v_t = svd
            .v_t
            .ok_or_else(|| Error::Internal("SVD did not return right vectors".into()))?;
        let (last, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .ok_or_else(|| Error::Internal("empty pencil".into()))?;
        Ok(v_t.row(last).transpose().map(|z| z.conj()))
    }
}

/// Diagonal similarity by powers of two that evens out row and column norms.
fn balance(mut c: DMatrix<f64>) -> DMatrix<f64> {
    const RADIX: f64 = 2.0;
    let n = c.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut col: f64 = (0..n).filter(|&j| j != i).map(|j| c[(j, i)].abs()).sum();
            let row: f64 = (0..n).filter(|&j| j != i).map(|j| c[(i, j)].abs()).sum();
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            while col < row / RADIX {
                f *= RADIX;
                col *= RADIX * RADIX;
            }
            while col > row * RADIX {
                f /= RADIX;
                col /= RADIX * RADIX;
            }
            if (col + row) / f < 0.95 * total {
                done = false;
                for j in 0..n {
                    c[(i, j)] /= f;
                    c[(j, i)] *= f;
                }
            }
        }
    }
    c
}

/// Nonzero pencil eigenvalues together with their multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilSpectrum {
    pub spectrum: Spectrum,
    /// How many entries of `spectrum` coincide with each entry (itself included).
    pub multiplicity: Vec<usize>,
    /// Zero is always an eigenvalue, with infinite-dimensional eigenspace.
    pub infinite_kernel: bool,
    /// Pencil roots discarded as numerically zero.
    pub zero_roots: usize,
}

struct MappedRoot {
    mu: Complex<f64>,
    value: f64,
    contamination: f64,
}

fn mapped_roots(p: &PencilPair) -> Result<(Vec<MappedRoot>, usize)> {
    let roots = p.roots()?;
    let scale = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut zero_roots = 0;
    let mut mapped = Vec::new();
    for mu in roots {
        if mu.norm() <= PENCIL_ZERO * scale {
            zero_roots += 1;
            continue;
        }
        let (value, contamination) = match p.phase {
            PhaseCase::OddReal { .. } => (mu.re, mu.im.abs()),
            // -iμ = Im μ - i Re μ
            PhaseCase::EvenImag { .. } => (mu.im, mu.re.abs()),
        };
        if contamination > PENCIL_CONTAMINATION * scale {
            return Err(Error::NumericalBreakdown(format!(
                "pencil root {mu} for n = {} has a spurious component {contamination:.3e} \
                 (scale {scale:.3e})",
                p.n
            )));
        }
        mapped.push(MappedRoot {
            mu,
            value,
            contamination,
        });
    }
    if let PhaseCase::EvenImag { .. } = p.phase {
        // Conjugate pairs: force the ± pairing to be exact.
        let mut pos: Vec<&MappedRoot> = mapped.iter().filter(|r| r.value > 0.0).collect();
        let neg = mapped.iter().filter(|r| r.value < 0.0).count();
        if pos.len() != neg || pos.len() * 2 != mapped.len() {
            return Err(Error::NumericalBreakdown(format!(
                "pencil roots for n = {} are not in conjugate pairs",
                p.n
            )));
        }
        pos.sort_by(|a, b| by_modulus(a.value, b.value));
        mapped = pos
            .into_iter()
            .flat_map(|r| {
                [
                    MappedRoot {
                        mu: Complex::new(0.0, r.value),
                        value: r.value,
                        contamination: r.contamination,
                    },
                    MappedRoot {
                        mu: Complex::new(0.0, -r.value),
                        value: -r.value,
                        contamination: r.contamination,
                    },
                ]
            })
            .collect();
    }
    mapped.sort_by(|a, b| by_modulus(a.value, b.value));
    Ok((mapped, zero_roots))
}

fn multiplicities(values: &[f64]) -> Vec<usize> {
    values
        .iter()
        .map(|&v| {
            values
                .iter()
                .filter(|&&w| (v - w).abs() <= MULTIPLICITY_REL * v.abs().max(w.abs()))
                .count()
        })
        .collect()
}

/// The at most `n` nonzero eigenvalues of `Re Vⁿ` (n odd) or `Im Vⁿ` (n even).
pub fn pencil_eigenvalues(p: &PencilPair) -> Result<PencilSpectrum> {
    let (mapped, zero_roots) = mapped_roots(p)?;
    let values: Vec<f64> = mapped.iter().map(|r| r.value).collect();
    let spectrum = Spectrum::new(
        mapped
            .iter()
            .map(|r| SpectralValue {
                value: r.value,
                error_hint: Some(r.contamination),
            })
            .collect(),
        Source::Pencil,
    );
    Ok(PencilSpectrum {
        multiplicity: multiplicities(&values),
        spectrum,
        infinite_kernel: true,
        zero_roots,
    })
}

/// An eigenvalue with its polynomial eigenfunction.
///
/// For `Im Vⁿ` the eigenfunction is complex; `poly` holds its real part `u`,
/// which together with `g = S u / λ` (`S` the antisymmetric factor) satisfies
/// `S u = λ g`, `S g = -λ u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactEigenpair {
    pub lambda: f64,
    /// Unit L²[0,1] norm.
    pub poly: Poly,
    pub residual: f64,
    pub multiplicity: usize,
}

pub fn pencil_eigenpairs(p: &PencilPair) -> Result<Vec<ExactEigenpair>> {
    let (mapped, _) = mapped_roots(p)?;
    let values: Vec<f64> = mapped.iter().map(|r| r.value).collect();
    let mult = multiplicities(&values);
    let part = p.part();
    mapped
        .iter()
        .zip(mult)
        .map(|(root, multiplicity)| {
            let v = p.null_vector(root.mu)?;
            let c: Vec<Complex<f64>> = v
                .iter()
                .enumerate()
                .map(|(j, z)| z / factorial(j))
                .collect();
            // Rotate the largest coefficient onto the real axis, keep the real part.
            let pivot = c
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .ok_or_else(|| Error::Internal("empty eigenvector".into()))?;
            let phase = pivot.conj() / pivot.norm();
            let poly = Poly::new(c.iter().map(|z| (z * phase).re).collect()).normalized();
            let residual = residual_check(p.n, part, root.value, &poly)?;
            if !(residual <= PENCIL_RESIDUAL) {
                return Err(Error::NumericalBreakdown(format!(
                    "eigenpair λ = {:e} for n = {} has residual {residual:e}",
                    root.value, p.n
                )));
            }
            Ok(ExactEigenpair {
                lambda: root.value,
                poly,
                residual,
                multiplicity,
            })
        })
        .collect()
}

/// L² norm of the eigen-equation residual, by exact polynomial arithmetic.
///
/// `RealPart`: `‖Re Vⁿ f - λ f‖`. `ImagPart`: with `S = (Vⁿ - V*ⁿ)/2` and
/// `g = S f / λ`, the norm `‖S g + λ f‖` of the second equation of the
/// invariant pair (for `λ = 0`, `‖S f‖`).
pub fn residual_check(n: PowerIndex, part: Part, lambda: f64, f: &Poly) -> Result<f64> {
    match part {
        Part::RealPart => Ok(apply_real_part(n, f)?.sub(&f.scale(lambda)).norm()),
        Part::ImagPart => {
            let sf = apply_imag_factor(n, f)?;
            if lambda == 0.0 {
                return Ok(sf.norm());
            }
            let g = sf.scale(1.0 / lambda);
            Ok(apply_imag_factor(n, &g)?.add(&f.scale(lambda)).norm())
        }
        Part::FullV | Part::FullVAdjoint => Err(Error::InvalidInput(
            "residual check is defined for the real and imaginary parts".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pencil(n: u32) -> PencilPair {
        build_pencil(PowerIndex::new(n).unwrap()).unwrap()
    }

    fn im4(sign: f64) -> f64 {
        (1575.0 + sign * 84.0 * 345f64.sqrt()).sqrt() / 5040.0
    }

    #[test]
    fn build_examples() {
        let p = pencil(1);
        assert_eq!(p.a_prime(), &DMatrix::from_element(1, 1, 1.0));
        assert_eq!(p.b(), &DMatrix::from_element(1, 1, 2.0));
        assert_eq!(p.phase(), PhaseCase::OddReal { sign: 1 });

        let p = pencil(2);
        assert_eq!(p.a_prime(), &DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 1.0 / 6.0, 0.5]));
        assert_eq!(p.b(), &DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 2.0, 2.0]));
        assert!(matches!(p.phase(), PhaseCase::EvenImag { .. }));

        let p = pencil(3);
        assert_eq!(p.a_prime().row(2).iter().copied().collect::<Vec<_>>(), vec![1.0 / 120.0, 1.0 / 24.0, 1.0 / 6.0]);
        assert_eq!(p.b()[(2, 0)], 1.0);
        assert_eq!(p.phase(), PhaseCase::OddReal { sign: -1 });
        assert_eq!(pencil(4).phase(), PhaseCase::EvenImag { sign: -1 });
    }

    #[test]
    fn b_is_lower_triangular_with_determinant_two_to_the_n() {
        for n in 1..=12 {
            let p = pencil(n);
            let size = n as usize;
            for j in 0..size {
                assert_eq!(p.b()[(j, j)], 2.0);
                assert!((j + 1..size).all(|k| p.b()[(j, k)] == 0.0));
            }
            assert!((p.b().determinant() - 2f64.powi(n as i32)).abs() < 1e-9);
        }
    }

    #[test]
    fn out_of_range_power() {
        let n = PowerIndex::new(13).unwrap();
        assert!(matches!(build_pencil(n), Err(Error::CapacityExceeded { .. })));
    }

    #[test]
    fn closed_form_spectra() {
        let cases: Vec<(u32, Vec<f64>)> = vec![
            (1, vec![0.5]),
            (2, vec![3f64.sqrt() / 12.0, -3f64.sqrt() / 12.0]),
            (
                3,
                vec![1.0 / 48.0 + 5f64.sqrt() / 80.0, -1.0 / 24.0, 1.0 / 48.0 - 5f64.sqrt() / 80.0],
            ),
            (4, vec![im4(1.0), -im4(1.0), im4(-1.0), -im4(-1.0)]),
        ];
        for (n, want) in cases {
            let s = pencil_eigenvalues(&pencil(n)).unwrap();
            assert_eq!(s.spectrum.source(), Source::Pencil);
            assert!(s.infinite_kernel);
            assert_eq!(s.spectrum.values().len(), want.len(), "n={n}");
            for (got, want) in s.spectrum.values().iter().zip(&want) {
                assert!((got - want).abs() < 1e-10, "n={n}: {got} vs {want}");
            }
        }
        // Decimal forms quoted alongside the radicals.
        assert!((im4(-1.0) - 7.6251545867e-4).abs() < 1e-13);
        assert!((im4(1.0) - 0.0111097482727).abs() < 1e-13);
    }

    #[test]
    fn at_most_n_values_and_even_spectra_symmetric() {
        for n in 1..=12 {
            let s = match pencil_eigenvalues(&pencil(n)) {
                Ok(s) => s,
                Err(Error::NumericalBreakdown(_)) if n > 10 => continue,
                Err(e) => panic!("n={n}: {e}"),
            };
            assert!(s.spectrum.len() <= n as usize);
            if n % 2 == 0 {
                let v = s.spectrum.ascending();
                for k in 0..v.len() {
                    assert_eq!(v[k], -v[v.len() - 1 - k]);
                }
            }
            assert!(s.multiplicity.iter().all(|&m| m == 1), "n={n}");
        }
    }

    #[test]
    fn eigenpair_examples() {
        let pairs = pencil_eigenpairs(&pencil(1)).unwrap();
        assert_eq!(pairs.len(), 1);
        assert!((pairs[0].lambda - 0.5).abs() < 1e-15);
        assert_eq!(pairs[0].poly.degree(), Some(0));
        assert!((pairs[0].poly.coeffs()[0].abs() - 1.0).abs() < 1e-15);

        let pairs = pencil_eigenpairs(&pencil(3)).unwrap();
        let neg = pairs.iter().find(|p| (p.lambda + 1.0 / 24.0).abs() < 1e-12).unwrap();
        assert_eq!(neg.poly.degree(), Some(2));
        assert!(neg.residual < 1e-10);

        let pairs = pencil_eigenpairs(&pencil(2)).unwrap();
        let pos = pairs.iter().find(|p| (p.lambda - 3f64.sqrt() / 12.0).abs() < 1e-12).unwrap();
        assert_eq!(pos.poly.degree(), Some(1));
        assert!(pos.residual < 1e-10);
    }

    #[test]
    fn every_eigenpair_passes_its_residual() {
        for n in 1..=6 {
            for pair in pencil_eigenpairs(&pencil(n)).unwrap() {
                assert!(pair.residual < 1e-8, "n={n} λ={}", pair.lambda);
                assert!((pair.poly.norm() - 1.0).abs() < 1e-10);
                assert!(pair.poly.degree().unwrap() < n as usize);
            }
        }
    }

    #[test]
    fn residual_examples() {
        let n1 = PowerIndex::new(1).unwrap();
        let one = Poly::constant(1.0);
        assert!(residual_check(n1, Part::RealPart, 0.5, &one).unwrap() < 1e-16);
        assert!((residual_check(n1, Part::RealPart, 0.4, &one).unwrap() - 0.1).abs() < 1e-15);
        // A wrong eigenvalue is caught.
        let pairs = pencil_eigenpairs(&pencil(2)).unwrap();
        let n2 = PowerIndex::new(2).unwrap();
        assert!(residual_check(n2, Part::ImagPart, 0.1, &pairs[0].poly).unwrap() > 1e-3);
        assert!(residual_check(n1, Part::FullV, 0.5, &one).is_err());
    }

    #[test]
    fn cubic_negative_eigenfunction_is_linear_reflection_odd() {
        // The λ = -1/24 eigenfunction of Re V³ is ∝ 1 - 2x.
        let pairs = pencil_eigenpairs(&pencil(3)).unwrap();
        let neg = pairs.iter().find(|p| (p.lambda + 1.0 / 24.0).abs() < 1e-12).unwrap();
        let f = Poly::new(vec![1.0, -2.0]).normalized();
        let overlap = neg.poly.inner(&f).abs();
        assert!((overlap - 1.0).abs() < 1e-10, "{:?}", neg.poly);
    }
}

//! Accretivity of `aV + bV²`.
//!
//! `aV + bV²` is accretive iff `b ≤ 0` and `2a + b ≥ 0`, because
//!
//! ```text
//! Re⟨(aV + bV²)f, f⟩ = (2a + b)‖(Re V)f‖² − b‖(Im V)f‖².
//! ```
//!
//! The discrete check uses the midpoint matrix `V_h = R + K` of
//! [`VolterraSplit`], whose diagonal is `h/2`. Then `R = (h/2)J` satisfies
//! `R² = R/2`, and the identity above holds for the matrices exactly, so the
//! discrete operator is accretive on the same region as the continuous one.
//! The strict-indicator matrix from [`crate::assemble`] has zero diagonal;
//! its real part `R − (h/2)I` is not positive semidefinite and would make
//! even `V` itself fail the check.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::discretizer::{Grid, VolterraSplit};
use crate::error::{Error, Result};

/// Smallest grid accepted by [`certify_numeric`].
pub const MIN_CERTIFY_GRID: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadCoeffs {
    pub a: f64,
    pub b: f64,
}

impl QuadCoeffs {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidInput(format!("coefficients must be finite: a={a}, b={b}")));
        }
        Ok(QuadCoeffs { a, b })
    }
}

/// Test functions that show non-accretivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// `f(x) = x − 1/2`: `(Re V)f = 0`, so the form is `−b‖(Im V)f‖²`.
    XMinusHalf,
    /// `f = k·1_{[0,1/k]} + k·1_{[1−1/k,1]}`: `‖(Re V)f‖ = 1` while
    /// `‖(Im V)f‖² ≤ 2/k`.
    Spike(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccretivityVerdict {
    pub coeffs: QuadCoeffs,
    pub predicate: bool,
    pub min_eig_certificate: Option<f64>,
    pub witness: Option<Witness>,
    /// Normalized Rayleigh value of the witness on the grid.
    pub witness_value: Option<f64>,
}

impl AccretivityVerdict {
    /// Whether the certificate sign matches the predicate with `slack`.
    pub fn agrees(&self, slack: f64) -> Option<bool> {
        self.min_eig_certificate
            .map(|e| if self.predicate { e >= -slack } else { e < -slack })
    }
}

/// `b ≤ 0` and `2a + b ≥ 0`.
pub fn is_accretive_quadratic(q: QuadCoeffs) -> bool {
    q.b <= 0.0 && 2.0 * q.a + q.b >= 0.0
}

/// Euclidean distance from `(a, b)` to the boundary of the accretive
/// region, the rays `{b = 0, a ≥ 0}` and `{2a + b = 0, b ≤ 0}`.
pub fn boundary_distance(q: QuadCoeffs) -> f64 {
    let to_ray = |dx: f64, dy: f64| {
        let s = ((q.a * dx + q.b * dy) / (dx * dx + dy * dy)).max(0.0);
        (q.a - s * dx).hypot(q.b - s * dy)
    };
    to_ray(1.0, 0.0).min(to_ray(1.0, -2.0))
}

/// Discretized `x − 1/2`.
pub fn x_minus_half(grid: Grid) -> DVector<f64> {
    DVector::from_iterator(grid.m(), grid.nodes().into_iter().map(|x| x - 0.5))
}

/// Discretized spike `f_k`: constant on the cells whose nodes lie within
/// `1/k` of either end, scaled so that `∫f = 2`.
pub fn spike_vector(grid: Grid, k: usize) -> Result<DVector<f64>> {
    let width = if k == 0 { f64::INFINITY } else { 1.0 / k as f64 };
    let inside = |x: f64| x < width || x > 1.0 - width;
    let count = grid.nodes().into_iter().filter(|&x| inside(x)).count();
    if k < 2 || count == 0 {
        return Err(Error::InvalidInput(format!(
            "spike k={k} needs k ≥ 2 and a cell within 1/k of the ends on m={}",
            grid.m()
        )));
    }
    let c = 2.0 / (grid.h() * count as f64);
    Ok(DVector::from_iterator(
        grid.m(),
        grid.nodes().into_iter().map(|x| if inside(x) { c } else { 0.0 }),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `(2a + b)·‖R f‖²`.
    pub re_v_term: f64,
    /// `−b·‖K f‖²`.
    pub im_v_term: f64,
}

impl Decomposition {
    pub fn total(&self) -> f64 {
        self.re_v_term + self.im_v_term
    }
}

/// Discrete accretivity checks on one grid, with `V_h²` cached.
#[derive(Debug, Clone)]
pub struct AccretivityProbe {
    split: VolterraSplit,
    square: DMatrix<f64>,
}

impl AccretivityProbe {
    pub fn new(grid: Grid) -> Self {
        let split = VolterraSplit::new(grid);
        let square = &split.full * &split.full;
        AccretivityProbe { split, square }
    }

    pub fn grid(&self) -> Grid {
        self.split.grid()
    }

    pub fn split(&self) -> &VolterraSplit {
        &self.split
    }

    /// `aV_h + bV_h²`.
    pub fn operator(&self, q: QuadCoeffs) -> DMatrix<f64> {
        &self.split.full * q.a + &self.square * q.b
    }

    /// `(M + Mᵀ)/2` for `M = aV_h + bV_h²`.
    pub fn real_part(&self, q: QuadCoeffs) -> DMatrix<f64> {
        let m = self.operator(q);
        (&m + m.transpose()) * 0.5
    }

    pub fn min_eig(&self, q: QuadCoeffs) -> f64 {
        self.real_part(q).symmetric_eigenvalues().min()
    }

    /// `h·fᵀ(aV_h + bV_h²)f`, the real part of the quadratic form.
    pub fn rayleigh_value(&self, q: QuadCoeffs, f: &DVector<f64>) -> Result<f64> {
        self.check_len(f)?;
        let vf = &self.split.full * f;
        let vvf = &self.split.full * &vf;
        Ok(self.grid().h() * f.dot(&(vf * q.a + vvf * q.b)))
    }

    /// The two terms of the quadratic form, in the `h`-weighted norm.
    pub fn decompose(&self, q: QuadCoeffs, f: &DVector<f64>) -> Result<Decomposition> {
        self.check_len(f)?;
        decompose_on(&self.split, q, f)
    }

    fn normalized_rayleigh(&self, q: QuadCoeffs, f: &DVector<f64>) -> Result<f64> {
        Ok(self.rayleigh_value(q, f)? / (self.grid().h() * f.norm_squared()))
    }

    /// `x − 1/2` when `b > 0`; otherwise the first spike in `k = 2, 4, 8, …`
    /// with a negative value, or the narrowest one tried.
    pub fn witness(&self, q: QuadCoeffs) -> Result<(Witness, f64)> {
        if q.b > 0.0 {
            let v = self.normalized_rayleigh(q, &x_minus_half(self.grid()))?;
            return Ok((Witness::XMinusHalf, v));
        }
        let mut best = None;
        let mut k = 2;
        while k <= self.grid().m() / 2 {
            let v = self.normalized_rayleigh(q, &spike_vector(self.grid(), k)?)?;
            best = Some((Witness::Spike(k), v));
            if v < 0.0 {
                break;
            }
            k *= 2;
        }
        best.ok_or_else(|| Error::InvalidInput("grid too small for a spike".into()))
    }

    pub fn certify(&self, q: QuadCoeffs) -> Result<AccretivityVerdict> {
        let predicate = is_accretive_quadratic(q);
        let (witness, witness_value) = if predicate {
            (None, None)
        } else {
            let (w, v) = self.witness(q)?;
            (Some(w), Some(v))
        };
        Ok(AccretivityVerdict {
            coeffs: q,
            predicate,
            min_eig_certificate: Some(self.min_eig(q)),
            witness,
            witness_value,
        })
    }

    /// `‖(I + aV_h + bV_h²)⁻¹‖ = 1/σ_min`.
    pub fn resolvent_norm(&self, q: QuadCoeffs) -> Result<f64> {
        let m = self.grid().m();
        let op = DMatrix::identity(m, m) + self.operator(q);
        let smin = op.singular_values().min();
        if !(smin > f64::EPSILON * m as f64) {
            return Err(Error::NumericalBreakdown(format!(
                "I + aV + bV² is numerically singular (σ_min = {smin:e})"
            )));
        }
        Ok(1.0 / smin)
    }

    fn check_len(&self, f: &DVector<f64>) -> Result<()> {
        if f.len() != self.grid().m() {
            return Err(Error::InvalidInput(format!(
                "vector length {} does not match grid size {}",
                f.len(),
                self.grid().m()
            )));
        }
        Ok(())
    }
}

pub fn certify_numeric(q: QuadCoeffs, m: usize) -> Result<AccretivityVerdict> {
    if m < MIN_CERTIFY_GRID {
        return Err(Error::InvalidInput(format!(
            "certification needs m ≥ {MIN_CERTIFY_GRID}, got {m}"
        )));
    }
    AccretivityProbe::new(Grid::new(m)?).certify(q)
}

pub fn resolvent_norm_check(q: QuadCoeffs, m: usize) -> Result<f64> {
    AccretivityProbe::new(Grid::new(m)?).resolvent_norm(q)
}

/// [`AccretivityProbe::decompose`] on the grid with `f.len()` cells.
pub fn rayleigh_decomposition(q: QuadCoeffs, f: &DVector<f64>) -> Result<Decomposition> {
    decompose_on(&VolterraSplit::new(Grid::new(f.len())?), q, f)
}

fn decompose_on(split: &VolterraSplit, q: QuadCoeffs, f: &DVector<f64>) -> Result<Decomposition> {
    if f.norm() == 0.0 {
        return Err(Error::InvalidInput("zero vector".into()));
    }
    let h = split.grid().h();
    let rf = split.real.entries() * f;
    let kf = split.imag.entries() * f;
    Ok(Decomposition {
        re_v_term: (2.0 * q.a + q.b) * h * rf.norm_squared(),
        im_v_term: -q.b * h * kf.norm_squared(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::{ACCRETIVE_BOUNDARY_BAND, ACCRETIVE_SLACK, DECOMPOSITION_REL, RESOLVENT_SLACK};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::LazyLock;

    static PROBE: LazyLock<AccretivityProbe> = LazyLock::new(|| AccretivityProbe::new(Grid::new(500).unwrap()));

    fn q(a: f64, b: f64) -> QuadCoeffs {
        QuadCoeffs::new(a, b).unwrap()
    }

    #[test]
    fn predicate_examples() {
        assert!(is_accretive_quadratic(q(1.0, 0.0)));
        assert!(!is_accretive_quadratic(q(0.0, 1.0)));
        assert!(is_accretive_quadratic(q(1.0, -2.0)));
        assert!(!is_accretive_quadratic(q(0.0, -1.0)));
        assert!(QuadCoeffs::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn boundary_distances() {
        assert_eq!(boundary_distance(q(1.0, 0.0)), 0.0);
        assert!((boundary_distance(q(1.0, -2.0))).abs() < 1e-15);
        assert!((boundary_distance(q(-1.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!((boundary_distance(q(0.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!((boundary_distance(q(1.0, -1.0)) - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!((boundary_distance(q(0.0, -1.0)) - 1.0 / 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn certificate_examples() {
        let v = PROBE.certify(q(1.0, 0.0)).unwrap();
        assert!(v.predicate && v.min_eig_certificate.unwrap() >= -1e-9);
        assert_eq!(v.witness, None);

        let v = PROBE.certify(q(0.0, -1.0)).unwrap();
        assert!(!v.predicate && v.min_eig_certificate.unwrap() < 0.0);
        assert!(matches!(v.witness, Some(Witness::Spike(_))));
        assert!(v.witness_value.unwrap() < 0.0);

        let v = PROBE.certify(q(0.0, 1.0)).unwrap();
        assert_eq!(v.witness, Some(Witness::XMinusHalf));
        assert!(v.witness_value.unwrap() < 0.0);

        assert!(certify_numeric(q(1.0, 0.0), 50).is_err());
    }

    #[test]
    fn strict_indicator_matrix_is_not_accretive() {
        use crate::{assemble, KernelSpec, Part, PowerIndex};
        let grid = Grid::new(200).unwrap();
        let strict = assemble(KernelSpec::new(Part::FullV, PowerIndex::new(1).unwrap()), grid);
        let e = strict.entries();
        let sym = (e + e.transpose()) * 0.5;
        let min = sym.symmetric_eigenvalues().min();
        assert!((min + grid.h() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_agrees_with_criterion() {
        let steps: Vec<f64> = (0..=8).map(|i| -2.0 + 0.5 * i as f64).collect();
        let mut checked = 0;
        for &a in &steps {
            for &b in &steps {
                let c = q(a, b);
                let v = PROBE.certify(c).unwrap();
                if v.predicate {
                    assert!(v.agrees(ACCRETIVE_SLACK).unwrap(), "({a},{b}): {v:?}");
                } else {
                    assert!(v.witness.is_some());
                    if boundary_distance(c) > ACCRETIVE_BOUNDARY_BAND {
                        assert!(v.agrees(ACCRETIVE_SLACK).unwrap(), "({a},{b}): {v:?}");
                        assert!(v.witness_value.unwrap() < 0.0, "({a},{b}): {v:?}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 40);
    }

    #[test]
    fn decomposition_identity() {
        let probe = AccretivityProbe::new(Grid::new(100).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(a, b) in &[(1.0, 0.0), (0.0, 1.0), (-1.5, 0.5), (2.0, -2.0), (0.3, -1.7)] {
            let c = q(a, b);
            for _ in 0..100 {
                let f = DVector::from_fn(100, |_, _| rng.gen_range(-1.0..1.0));
                let d = probe.decompose(c, &f).unwrap();
                let total = probe.rayleigh_value(c, &f).unwrap();
                let scale = (d.re_v_term.abs() + d.im_v_term.abs()).max(1e-300);
                assert!((d.total() - total).abs() <= DECOMPOSITION_REL * scale, "({a},{b})");
                let free = rayleigh_decomposition(c, &f).unwrap();
                assert_eq!(free, d);
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let grid = PROBE.grid();
        let ones = DVector::from_element(grid.m(), 1.0);
        let d = PROBE.decompose(q(1.0, 0.0), &ones).unwrap();
        assert_eq!(d.im_v_term, 0.0);
        assert!(d.total() > 0.0);

        let d = PROBE.decompose(q(0.0, 1.0), &x_minus_half(grid)).unwrap();
        assert!(d.re_v_term.abs() < 1e-25);
        assert!(d.total() < 0.0);

        let c = q(0.0, -1.0);
        let d20 = PROBE.decompose(c, &spike_vector(grid, 20).unwrap()).unwrap();
        let d40 = PROBE.decompose(c, &spike_vector(grid, 40).unwrap()).unwrap();
        assert!((d20.re_v_term + 1.0).abs() < 1e-12);
        assert!(d20.im_v_term <= 2.0 / 20.0 && d40.im_v_term <= 2.0 / 40.0);
        let ratio = d20.im_v_term / d40.im_v_term;
        assert!((ratio - 2.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn spike_vectors() {
        let grid = Grid::new(100).unwrap();
        let s = spike_vector(grid, 10).unwrap();
        assert!((grid.h() * s.sum() - 2.0).abs() < 1e-14);
        assert_eq!(s.iter().filter(|&&v| v > 0.0).count(), 20);
        assert!(spike_vector(grid, 1).is_err());
        assert!(spike_vector(grid, 1000).is_err());
        assert!(rayleigh_decomposition(q(1.0, 0.0), &DVector::zeros(100)).is_err());
    }

    #[test]
    fn resolvent_bounded_in_region() {
        assert!((PROBE.resolvent_norm(q(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(PROBE.resolvent_norm(q(1.0, 0.0)).unwrap() <= 1.0 + RESOLVENT_SLACK);
        assert!(PROBE.resolvent_norm(q(1.0, -2.0)).unwrap() <= 1.0 + RESOLVENT_SLACK);
        let probe = AccretivityProbe::new(Grid::new(200).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let b = -rng.gen_range(0.0..4.0);
            let a = -b / 2.0 + rng.gen_range(0.0..4.0);
            let r = probe.resolvent_norm(q(a, b)).unwrap();
            assert!(r <= 1.0 + RESOLVENT_SLACK, "({a},{b}): {r}");
        }
        // Outside the region the bound can fail.
        assert!(probe.resolvent_norm(q(-0.5, 0.0)).unwrap() > 1.0);
    }
}

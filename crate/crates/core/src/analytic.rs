//! Eigenvalue families of `Im V` and `Re V²` that are known in closed or
//! transcendental form.
//!
//! - `Im V`: `{ 1/((2k+1)π) : k ∈ ℤ }`.
//! - `Re V²`: `1/(4t²)` with `coth t = t` (one root, `ρ ≈ 1.1996786`),
//!   `-1/(4t²)` with `cot t = -t` (one root per interval `(kπ + π/2, (k+1)π)`),
//!   and `-1/((2k+1)²π²)`.
//!
//! `k` and `-k-1` give the same value in the last family; the eigenfunction
//! is `cos((2k+1)πx)` for both, so each value is listed once.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{by_modulus, SpectralValue, Source, Spectrum};
use crate::tolerances::{BISECTION_WIDTH, COT_BRACKET_DELTA, ROOT_ABS_TOL, ROOT_MAX_ITER};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootSolverConfig {
    pub abs_tol: f64,
    pub max_iter: usize,
}

impl Default for RootSolverConfig {
    fn default() -> Self {
        RootSolverConfig {
            abs_tol: ROOT_ABS_TOL,
            max_iter: ROOT_MAX_ITER,
        }
    }
}

/// Root of `f` in `[lo, hi]`, where `f(lo)` and `f(hi)` differ in sign.
///
/// Bisection narrows the bracket to [`BISECTION_WIDTH`], then Newton steps
/// polish the root. A Newton step that leaves the current bracket is
/// replaced by a bisection step, so the iterate never escapes. Stops when
/// `|f| ≤ abs_tol` or when the step falls to the rounding level of `t`.
pub fn bracketed_newton<F, D>(f: F, df: D, lo: f64, hi: f64, cfg: &RootSolverConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(cfg.abs_tol > 0.0) {
        return Err(Error::InvalidInput("abs_tol must be positive".into()));
    }
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Internal(format!(
            "no sign change on [{lo}, {hi}]: f = {fa:e}, {fb:e}"
        )));
    }
    let left_sign = fa.signum();
    let mut iter = 0;
    while b - a > BISECTION_WIDTH && iter < cfg.max_iter {
        let mid = 0.5 * (a + b);
        if f(mid).signum() == left_sign {
            a = mid;
        } else {
            b = mid;
        }
        iter += 1;
    }
    let mut t = 0.5 * (a + b);
    while iter < cfg.max_iter {
        iter += 1;
        let ft = f(t);
        if ft.abs() <= cfg.abs_tol {
            return Ok(t);
        }
        if ft.signum() == left_sign {
            a = t;
        } else {
            b = t;
        }
        let step = ft / df(t);
        let mut next = t - step;
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        if (next - t).abs() <= 4.0 * f64::EPSILON * t.abs() {
            return Ok(if f(next).abs() < ft.abs() { next } else { t });
        }
        t = next;
    }
    Err(Error::NumericalBreakdown(format!(
        "root solver hit {} iterations on [{lo}, {hi}]",
        cfg.max_iter
    )))
}

/// `coth t - t`.
pub fn coth_residual(t: f64) -> f64 {
    1.0 / t.tanh() - t
}

/// `cos t + t sin t`, which is `sin t · (cot t + t)`.
///
/// Its slope at a root is `t cos t ≈ ±t`, against `≈ -t²` for `cot t + t`,
/// so residuals stay at rounding level for large `t`.
pub fn cot_residual(t: f64) -> f64 {
    t.cos() + t * t.sin()
}

/// The positive root `ρ` of `coth t = t`.
pub fn solve_coth_eq(cfg: &RootSolverConfig) -> Result<f64> {
    let df = |t: f64| {
        let s = t.sinh();
        -1.0 / (s * s) - 1.0
    };
    bracketed_newton(coth_residual, df, 0.5, 3.0, cfg)
        .map_err(|e| Error::Internal(format!("coth t = t: {e}")))
}

/// The first `count` positive roots of `cot t = -t`, one in each
/// `(kπ + π/2 + δ, (k+1)π - δ)`.
pub fn solve_cot_family(count: usize, cfg: &RootSolverConfig) -> Result<Vec<f64>> {
    let df = |t: f64| t * t.cos();
    (0..count)
        .map(|k| {
            let k = k as f64;
            let lo = k * PI + 0.5 * PI + COT_BRACKET_DELTA;
            let hi = (k + 1.0) * PI - COT_BRACKET_DELTA;
            bracketed_newton(cot_residual, df, lo, hi, cfg)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `1/((2k+1)π)`, eigenvalues of `Im V`.
    ImVOddPi,
    /// `1/(4ρ²)`, the positive eigenvalue of `Re V²`.
    ReV2Coth,
    /// `-1/(4t²)` with `cot t = -t`.
    ReV2Cot,
    /// `-1/((2k+1)²π²)`.
    ReV2OddPi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub value: f64,
    pub kind: FamilyKind,
    pub index: i64,
}

/// Family members sorted by descending modulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenFamily {
    members: Vec<FamilyMember>,
}

impl EigenFamily {
    fn new(mut members: Vec<FamilyMember>) -> Self {
        members.sort_by(|a, b| by_modulus(a.value, b.value));
        EigenFamily { members }
    }

    pub fn members(&self) -> &[FamilyMember] {
        &self.members
    }

    pub fn values(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.value).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_spectrum(&self) -> Spectrum {
        Spectrum::new(
            self.members
                .iter()
                .map(|m| SpectralValue {
                    value: m.value,
                    error_hint: match m.kind {
                        FamilyKind::ReV2Coth | FamilyKind::ReV2Cot => Some(ROOT_ABS_TOL),
                        FamilyKind::ImVOddPi | FamilyKind::ReV2OddPi => None,
                    },
                })
                .collect(),
            Source::Analytic,
        )
    }
}

fn require_count(count: usize) -> Result<()> {
    if count == 0 {
        Err(Error::InvalidInput("count must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `±1/((2k+1)π)` for `k = 0..count`: `2·count` values.
pub fn imv_eigenvalues(count: usize) -> Result<EigenFamily> {
    require_count(count)?;
    let members = (0..count as i64)
        .flat_map(|k| [k, -k - 1])
        .map(|k| FamilyMember {
            value: 1.0 / ((2 * k + 1) as f64 * PI),
            kind: FamilyKind::ImVOddPi,
            index: k,
        })
        .collect();
    Ok(EigenFamily::new(members))
}

/// The `count` eigenvalues of `Re V²` of largest modulus.
pub fn rev2_eigenvalues(count: usize) -> Result<EigenFamily> {
    require_count(count)?;
    let cfg = RootSolverConfig::default();
    let rho = solve_coth_eq(&cfg)?;
    let mut members = vec![FamilyMember {
        value: 1.0 / (4.0 * rho * rho),
        kind: FamilyKind::ReV2Coth,
        index: 0,
    }];
    for (k, t) in solve_cot_family(count, &cfg)?.into_iter().enumerate() {
        members.push(FamilyMember {
            value: -1.0 / (4.0 * t * t),
            kind: FamilyKind::ReV2Cot,
            index: k as i64,
        });
    }
    for k in 0..count as i64 {
        let w = (2 * k + 1) as f64 * PI;
        members.push(FamilyMember {
            value: -1.0 / (w * w),
            kind: FamilyKind::ReV2OddPi,
            index: k,
        });
    }
    let mut family = EigenFamily::new(members);
    family.members.truncate(count);
    Ok(family)
}

//! Closed-form Hilbert–Schmidt norms and operator-norm bounds for `Vⁿ`,
//! `Re Vⁿ` and `Im Vⁿ`.

use std::f64::consts::{FRAC_2_PI, PI};

use serde::{Deserialize, Serialize};

use crate::analytic::{solve_coth_eq, RootSolverConfig};
use crate::combinatorics::{binomial, factorial};
use crate::discretizer::{assemble, Grid};
use crate::error::Result;
use crate::kernels::{KernelSpec, Part, PowerIndex};
use crate::tolerances::SANDWICH_SLACK;

fn nf(n: PowerIndex) -> f64 {
    n.get() as f64
}

fn fact_nm1(n: PowerIndex) -> f64 {
    factorial(n.usize() - 1)
}

/// `‖Vⁿ‖_HS = 1/((n−1)!·√(2n(2n−1)))`.
pub fn hs_vn(n: PowerIndex) -> f64 {
    let n_ = nf(n);
    1.0 / (fact_nm1(n) * (2.0 * n_ * (2.0 * n_ - 1.0)).sqrt())
}

/// `‖Re Vⁿ‖_HS = ‖Im Vⁿ‖_HS = ‖Vⁿ‖_HS/√2`.
pub fn hs_re_im(n: PowerIndex) -> f64 {
    let n_ = nf(n);
    1.0 / (fact_nm1(n) * (4.0 * n_ * (2.0 * n_ - 1.0)).sqrt())
}

/// `(lower, upper)` bounds on `‖Vⁿ‖`.
pub fn opnorm_bounds_vn(n: PowerIndex) -> (f64, f64) {
    let n_ = nf(n);
    let lower = 1.0 / (fact_nm1(n) * ((2.0 * n_ + 1.0) * (2.0 * n_ - 1.0)).sqrt());
    (lower, hs_vn(n))
}

/// `(lower, upper)` bounds on `‖Re Vⁿ‖`.
///
/// The lower bound is only valid for `n ≤ 2`: from `n = 3` on it exceeds
/// the true norm (`‖Re V³‖ = 1/48 + √5/80 ≈ 0.04878 < 0.05455`), tending to
/// about `4/3` of it. It is kept as published; see [`NormReport::violations`].
pub fn opnorm_bounds_re(n: PowerIndex) -> (f64, f64) {
    let n_ = nf(n);
    let lower = 1.0 / (2f64.sqrt() * fact_nm1(n) * (2.0 * n_ * (2.0 * n_ + 1.0)).sqrt());
    (lower, hs_re_im(n))
}

/// `(lower, upper)` bounds on `‖Im Vⁿ‖`. The lower bound is the `Re` one
/// scaled by `1 − 1/C(2n−2, n−1)`, which vanishes at `n = 1`. Valid for
/// `n ≤ 3` only.
pub fn opnorm_bounds_im(n: PowerIndex) -> (f64, f64) {
    let k = n.usize() - 1;
    let factor = 1.0 - 1.0 / binomial(2 * k, k);
    (opnorm_bounds_re(n).0 * factor, hs_re_im(n))
}

/// Bounds for any part. `V*ⁿ` has the same norms as `Vⁿ`.
pub fn opnorm_bounds(part: Part, n: PowerIndex) -> (f64, f64) {
    match part {
        Part::FullV | Part::FullVAdjoint => opnorm_bounds_vn(n),
        Part::RealPart => opnorm_bounds_re(n),
        Part::ImagPart => opnorm_bounds_im(n),
    }
}

/// Closed-form Hilbert–Schmidt norm for any part.
pub fn hs_exact(part: Part, n: PowerIndex) -> f64 {
    match part {
        Part::FullV | Part::FullVAdjoint => hs_vn(n),
        Part::RealPart | Part::ImagPart => hs_re_im(n),
    }
}

/// Claimed lower bound on `‖(Re Vⁿ)²‖_HS`.
///
/// Holds at `n = 1` only. For `n = 2` the true value is
/// `sqrt(Σλ⁴) ≈ 0.0318883` over the eigenvalues of `Re V²`, below the
/// `1/(6√20) ≈ 0.0372678` returned here. The derivation replaces the kernel
/// integral over `[0,x] ∪ [y,1]` by twice the `[0,x]` piece, which
/// overestimates its L² norm.
pub fn hs_sq_re_lower(n: PowerIndex) -> f64 {
    let n_ = nf(n);
    let f = fact_nm1(n);
    1.0 / (2.0 * f * f * (2.0 * n_ - 1.0) * (2.0 * n_ * (2.0 * n_ + 1.0)).sqrt())
}

/// `‖(Re Vⁿ)² − (Im Vⁿ)²‖_HS = ‖Re V²ⁿ‖_HS`.
pub fn hs_sq_diff(n: PowerIndex) -> f64 {
    let n_ = nf(n);
    1.0 / (2.0 * factorial(2 * n.usize() - 1) * (2.0 * n_ * (4.0 * n_ - 1.0)).sqrt())
}

/// `∫₀¹∫₀¹ (x − t)^{2n−2} dx dt = 1/(n(2n−1))`.
pub fn double_integral_check(n: PowerIndex) -> f64 {
    let n_ = nf(n);
    1.0 / (n_ * (2.0 * n_ - 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownNorm {
    pub part: Part,
    pub n: PowerIndex,
    pub value: f64,
    pub formula: &'static str,
}

/// The operator norms of `Re Vⁿ` and `Im Vⁿ` that have closed forms.
pub fn known_exact_opnorms() -> Result<Vec<KnownNorm>> {
    let rho = solve_coth_eq(&RootSolverConfig::default())?;
    let p = |n| PowerIndex::new(n).expect("small power");
    let s5 = 5f64.sqrt();
    let s345 = 345f64.sqrt();
    Ok(vec![
        KnownNorm { part: Part::RealPart, n: p(1), value: 0.5, formula: "1/2" },
        KnownNorm { part: Part::ImagPart, n: p(1), value: 1.0 / PI, formula: "1/pi" },
        KnownNorm {
            part: Part::RealPart,
            n: p(2),
            value: 1.0 / (4.0 * rho * rho),
            formula: "1/(4 rho^2), coth rho = rho",
        },
        KnownNorm { part: Part::ImagPart, n: p(2), value: 3f64.sqrt() / 12.0, formula: "sqrt(3)/12" },
        KnownNorm {
            part: Part::RealPart,
            n: p(3),
            value: 1.0 / 48.0 + s5 / 80.0,
            formula: "1/48 + sqrt(5)/80",
        },
        KnownNorm {
            part: Part::ImagPart,
            n: p(4),
            value: (1575.0 + 84.0 * s345).sqrt() / 5040.0,
            formula: "sqrt(1575 + 84 sqrt(345))/5040",
        },
    ])
}

/// Known exact operator norm, including `‖V‖ = ‖V*‖ = 2/π`.
pub fn exact_opnorm(part: Part, n: PowerIndex) -> Result<Option<f64>> {
    if matches!(part, Part::FullV | Part::FullVAdjoint) {
        return Ok((n.get() == 1).then_some(FRAC_2_PI));
    }
    Ok(known_exact_opnorms()?
        .into_iter()
        .find(|k| k.part == part && k.n == n)
        .map(|k| k.value))
}

/// Whether `value` lies in `[lower, upper]` up to `1e−3·max(1, upper)`.
pub fn within_bounds(value: f64, (lower, upper): (f64, f64)) -> bool {
    let slack = SANDWICH_SLACK * upper.max(1.0);
    value >= lower - slack && value <= upper + slack
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub n: PowerIndex,
    pub part: Part,
    pub hs_exact: f64,
    pub op_lower: f64,
    pub op_upper: f64,
    pub op_exact: Option<f64>,
    pub op_discretized: Option<f64>,
}

impl NormReport {
    /// Formulas only; pass `Some(grid)` to add a discretized operator norm.
    pub fn build(part: Part, n: PowerIndex, grid: Option<Grid>) -> Result<Self> {
        let (op_lower, op_upper) = opnorm_bounds(part, n);
        let op_discretized = grid.map(|g| assemble(KernelSpec::new(part, n), g).op_norm());
        Ok(NormReport {
            n,
            part,
            hs_exact: hs_exact(part, n),
            op_lower,
            op_upper,
            op_exact: exact_opnorm(part, n)?,
            op_discretized,
        })
    }

    /// Exact norm within the bounds, and the discretized norm within the
    /// slackened bounds.
    pub fn consistent(&self) -> bool {
        self.violations().is_empty()
    }

    /// Names of the bound checks that fail.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.op_lower > self.op_upper {
            out.push("lower > upper");
        }
        if let Some(e) = self.op_exact {
            if e < self.op_lower {
                out.push("exact < lower");
            }
            if e > self.op_upper {
                out.push("exact > upper");
            }
        }
        if let Some(d) = self.op_discretized {
            let slack = SANDWICH_SLACK * self.op_upper.max(1.0);
            if d < self.op_lower - slack {
                out.push("discretized < lower");
            }
            if d > self.op_upper + slack {
                out.push("discretized > upper");
            }
        }
        out
    }
}

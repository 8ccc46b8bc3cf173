//! Numerical ranges of `Re Vⁿ` and `Im Vⁿ`, the boundary of `W(V)`, and
//! Rayleigh-quotient probes.
//!
//! `W(V)` is the convex set bounded by the segment `[-i/2π, i/2π]` and the
//! curves `t ↦ (1 − cos t)/t² ± i(t − sin t)/t²`, `t ∈ [0, 2π]`.

use std::f64::consts::TAU;
use std::sync::LazyLock;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::analytic::{imv_eigenvalues, rev2_eigenvalues};
use crate::combinatorics::factorial;
use crate::discretizer::{assemble, Grid, VolterraSplit};
use crate::error::{Error, Result};
use crate::kernels::{apply_real_part, KernelSpec, Part, PowerIndex};
use crate::pencil::{build_pencil, pencil_eigenvalues};
use crate::poly::Poly;
use crate::spectrum::Source;
use crate::tolerances::{BROWN_CURVE_SAMPLES, BROWN_MIN_SAMPLES};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    /// Smallest interval holding every value.
    pub fn hull(values: impl IntoIterator<Item = f64>) -> Result<Self> {
        let (lo, hi) = values
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        Interval::new(lo, hi)
    }

    pub fn symmetric(r: f64) -> Result<Self> {
        Interval::new(-r.abs(), r.abs())
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lo - tol && v <= self.hi + tol
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub t: f64,
    pub upper: Point,
    pub lower: Point,
}

/// `((1 − cos t)/t², (t − sin t)/t²)`, with the `t → 0` limit `(1/2, 0)`.
pub fn brown_point(t: f64) -> Point {
    if t == 0.0 {
        return Point { x: 0.5, y: 0.0 };
    }
    let s = (0.5 * t).sin();
    let x = 2.0 * s * s / (t * t);
    let y = if t.abs() < 0.1 {
        let t2 = t * t;
        t * (1.0 / 6.0 - t2 * (1.0 / 120.0 - t2 * (1.0 / 5040.0 - t2 / 362_880.0)))
    } else {
        (t - t.sin()) / (t * t)
    };
    Point { x, y }
}

/// Boundary of `W(V)` at `t = 2πk/samples`, `k = 1..samples`, preceded by
/// the limit point at `t = 0`.
pub fn brown_curve(samples: usize) -> Result<Vec<CurveSample>> {
    if samples < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples, got {samples}")));
    }
    Ok((0..=samples)
        .map(|k| {
            let t = TAU * k as f64 / samples as f64;
            let upper = brown_point(t);
            CurveSample {
                t,
                upper,
                // 0 - y rather than -y so the t = 0 point is +0.
                lower: Point { x: upper.x, y: 0.0 - upper.y },
            }
        })
        .collect())
}

/// Polygonal approximation of `W(V)`, vertices counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownRegion {
    vertices: Vec<Point>,
}

impl BrownRegion {
    pub fn new(samples: usize) -> Result<Self> {
        if samples < BROWN_MIN_SAMPLES {
            return Err(Error::InvalidInput(format!(
                "region needs at least {BROWN_MIN_SAMPLES} samples, got {samples}"
            )));
        }
        let curve = brown_curve(samples)?;
        let mut vertices: Vec<Point> = curve.iter().map(|c| c.upper).collect();
        vertices.extend(curve[1..].iter().rev().map(|c| c.lower));
        vertices.pop();
        Ok(BrownRegion { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Inside the polygon, or within `tol` of its boundary.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let n = self.vertices.len();
        let mut inside = true;
        let mut dist = f64::INFINITY;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let (ex, ey) = (b.x - a.x, b.y - a.y);
            let (px, py) = (p.x - a.x, p.y - a.y);
            if ex * py - ey * px < 0.0 {
                inside = false;
            }
            let len2 = ex * ex + ey * ey;
            let s = if len2 > 0.0 { ((px * ex + py * ey) / len2).clamp(0.0, 1.0) } else { 0.0 };
            dist = dist.min((px - s * ex).hypot(py - s * ey));
        }
        inside || dist <= tol
    }
}

static DEFAULT_REGION: LazyLock<BrownRegion> =
    LazyLock::new(|| BrownRegion::new(BROWN_CURVE_SAMPLES).expect("default sample count"));

/// Membership in `W(V)` inflated by `tol`, at the default resolution.
pub fn hull_contains(p: Point, tol: f64) -> bool {
    DEFAULT_REGION.contains(p, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeInterval {
    pub interval: Interval,
    pub source: Source,
}

/// `W(Re Vⁿ)` or `W(Im Vⁿ)`: the closed convex hull of the spectrum.
///
/// Uses the pencil for odd `Re` and even `Im`, the analytic families for
/// `Im V` and `Re V²`, and the discretization at `m` cells otherwise or when
/// the pencil breaks down. `0` is always in the spectrum of these compact
/// operators; `Im` ranges are symmetric.
pub fn range_interval(part: Part, n: PowerIndex, m: usize) -> Result<RangeInterval> {
    let symmetric = match part {
        Part::RealPart => false,
        Part::ImagPart => true,
        other => {
            return Err(Error::StructureMismatch {
                expected: "Re or Im",
                found: other.name(),
            })
        }
    };
    let (values, source) = match (part, n.get()) {
        (Part::ImagPart, 1) => (imv_eigenvalues(1)?.values(), Source::Analytic),
        (Part::RealPart, 2) => (rev2_eigenvalues(8)?.values(), Source::Analytic),
        _ => {
            let pencil_case = (part == Part::RealPart) == n.is_odd();
            let pencil = if pencil_case {
                build_pencil(n).and_then(|p| pencil_eigenvalues(&p)).ok()
            } else {
                None
            };
            match pencil {
                Some(ps) => (ps.spectrum.values(), Source::Pencil),
                None => {
                    let grid = Grid::new(m)?;
                    let op = assemble(KernelSpec::new(part, n), grid);
                    (op.spectrum()?.values(), Source::Discretized)
                }
            }
        }
    };
    let interval = if symmetric {
        Interval::symmetric(values.iter().fold(0.0f64, |r, v| r.max(v.abs())))?
    } else {
        Interval::hull(values.into_iter().chain([0.0]))?
    };
    Ok(RangeInterval { interval, source })
}

/// `⟨Re Vⁿ f, f⟩/‖f‖²` for `f = 1 − 2x`, by exact polynomial arithmetic.
pub fn rayleigh_probe_re(n: PowerIndex) -> Result<f64> {
    let f = Poly::new(vec![1.0, -2.0]);
    let g = apply_real_part(n, &f)?;
    Ok(g.inner(&f) / f.inner(&f))
}

/// `−3(n−1)/((n+3)(n+1)!)`, the closed form of [`rayleigh_probe_re`].
pub fn rayleigh_probe_closed_form(n: PowerIndex) -> f64 {
    let n_ = n.get() as f64;
    -3.0 * (n_ - 1.0) / ((n_ + 3.0) * factorial(n.usize() + 1))
}

/// `−(n−1)/(3(n+3)(n+1)!)`: a weaker left endpoint of an interval inside
/// `W(Re Vⁿ)`, one ninth of the probe value.
pub fn inner_left_endpoint(n: PowerIndex) -> f64 {
    let n_ = n.get() as f64;
    -(n_ - 1.0) / (3.0 * (n_ + 3.0) * factorial(n.usize() + 1))
}

/// `⟨V_h v, v⟩` for `v = u + iw`, normalized to `h‖v‖² = 1`.
///
/// `V_h` is the compression of `V` to piecewise-constant functions, so the
/// point lies in `W(V)`.
pub fn discrete_rayleigh_point(split: &VolterraSplit, u: &DVector<f64>, w: &DVector<f64>) -> Result<Point> {
    let m = split.grid().m();
    if u.len() != m || w.len() != m {
        return Err(Error::InvalidInput(format!("vectors must have length {m}")));
    }
    let h = split.grid().h();
    let norm2 = h * (u.norm_squared() + w.norm_squared());
    if !(norm2 > 0.0) {
        return Err(Error::InvalidInput("zero vector".into()));
    }
    let r = split.real.entries();
    let k = split.imag.entries();
    let x = h * (u.dot(&(r * u)) + w.dot(&(r * w)));
    let y = 2.0 * h * u.dot(&(k * w));
    Ok(Point {
        x: x / norm2,
        y: y / norm2,
    })
}

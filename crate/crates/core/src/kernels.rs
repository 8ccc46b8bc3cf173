//! Integral kernels of `Vⁿ`, `V*ⁿ`, `Re Vⁿ`, `Im Vⁿ` and exact application of
//! `Vⁿ`, `V*ⁿ` to polynomials.
//!
//! With `Vf(x) = ∫₀ˣ f`, the powers are
//!
//! ```text
//! Vⁿ f(x)  = ∫₀ˣ (x-t)ⁿ⁻¹/(n-1)! f(t) dt
//! V*ⁿ f(x) = ∫ₓ¹ (t-x)ⁿ⁻¹/(n-1)! f(t) dt
//! ```
//!
//! so `Re Vⁿ` has the symmetric kernel `|x-t|ⁿ⁻¹ / (2(n-1)!)`.
//!
//! `Im Vⁿ = (Vⁿ - V*ⁿ)/2i` is stored through its real antisymmetric factor
//! `s(x,t) = |x-t|ⁿ⁻¹ sign(x-t) / (2(n-1)!)`, the operator being `-i·s`.
//! Expanding `Vⁿ - V*ⁿ` term by term puts `sign(x-t)` to the first power for
//! every `n`. Raising the sign to the power `n-1`, as is sometimes written,
//! would make the kernel symmetric for odd `n` and cannot describe an
//! imaginary part; this module always uses the first power.

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, factorial};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::tolerances::{MAX_POLY_DEGREE, MAX_POWER};

/// The exponent `n ≥ 1` of `Vⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PowerIndex(u32);

impl PowerIndex {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("power index must be at least 1".into()));
        }
        if n > MAX_POWER {
            return Err(Error::CapacityExceeded {
                what: "power index",
                got: n as usize,
                limit: MAX_POWER as usize,
            });
        }
        Ok(PowerIndex(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn usize(self) -> usize {
        self.0 as usize
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }
}

impl TryFrom<u32> for PowerIndex {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        PowerIndex::new(n)
    }
}

impl From<PowerIndex> for u32 {
    fn from(n: PowerIndex) -> u32 {
        n.0
    }
}

impl std::fmt::Display for PowerIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Which operator built from `Vⁿ` a kernel describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Part {
    FullV,
    FullVAdjoint,
    RealPart,
    ImagPart,
}

impl Part {
    pub fn name(self) -> &'static str {
        match self {
            Part::FullV => "V",
            Part::FullVAdjoint => "V*",
            Part::RealPart => "Re",
            Part::ImagPart => "Im",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KernelSpec {
    pub part: Part,
    pub power: PowerIndex,
}

impl KernelSpec {
    pub fn new(part: Part, power: PowerIndex) -> Self {
        KernelSpec { part, power }
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        eval_kernel(*self, x, t)
    }
}

/// Sign with `sign(0) = 0`.
fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `k(x, t)` for `x, t ∈ [0, 1]`.
///
/// For [`Part::ImagPart`] the value is the real antisymmetric factor `s(x,t)`
/// described in the module docs. Indicators are strict, so `FullV` and
/// `FullVAdjoint` vanish on the diagonal.
pub fn eval_kernel(spec: KernelSpec, x: f64, t: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&t));
    let n = spec.power.usize();
    let inv_fact = 1.0 / factorial(n - 1);
    let d = x - t;
    let p = d.abs().powi(n as i32 - 1);
    match spec.part {
        Part::RealPart => 0.5 * p * inv_fact,
        Part::ImagPart => 0.5 * p * sign(d) * inv_fact,
        Part::FullV if t < x => p * inv_fact,
        Part::FullVAdjoint if t > x => p * inv_fact,
        Part::FullV | Part::FullVAdjoint => 0.0,
    }
}

/// Exact image of a polynomial under `Vⁿ` or `V*ⁿ`.
///
/// `Vⁿ xʲ = j!/(j+n)! x^(j+n)` and
/// `V*ⁿ xʲ = Σᵢ C(j,i) x^(j-i) (1-x)^(n+i) / ((n-1)! (n+i))`.
pub fn apply_power_to_poly(part: Part, n: PowerIndex, p: &Poly) -> Result<Poly> {
    let n = n.usize();
    let out_degree = p.degree().unwrap_or(0) + n;
    if out_degree > MAX_POLY_DEGREE {
        return Err(Error::CapacityExceeded {
            what: "polynomial degree",
            got: out_degree,
            limit: MAX_POLY_DEGREE,
        });
    }
    match part {
        Part::FullV => {
            let mut coeffs = vec![0.0; out_degree + 1];
            for (j, &c) in p.coeffs().iter().enumerate() {
                coeffs[j + n] = c * factorial(j) / factorial(j + n);
            }
            Ok(Poly::new(coeffs))
        }
        Part::FullVAdjoint => {
            let inv_fact = 1.0 / factorial(n - 1);
            let mut out = Poly::zero();
            for (j, &c) in p.coeffs().iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                for i in 0..=j {
                    let scale = c * binomial(j, i) * inv_fact / (n + i) as f64;
                    let term = Poly::monomial(j - i, scale).mul(&Poly::one_minus_x_pow(n + i));
                    out = out.add(&term);
                }
            }
            Ok(out)
        }
        Part::RealPart | Part::ImagPart => Err(Error::InvalidInput(format!(
            "exact polynomial application is defined for V and V*, not {}",
            part.name()
        ))),
    }
}

/// `Re Vⁿ p = (Vⁿ p + V*ⁿ p)/2`.
pub fn apply_real_part(n: PowerIndex, p: &Poly) -> Result<Poly> {
    let v = apply_power_to_poly(Part::FullV, n, p)?;
    let w = apply_power_to_poly(Part::FullVAdjoint, n, p)?;
    Ok(v.add(&w).scale(0.5))
}

/// The antisymmetric factor `(Vⁿ p - V*ⁿ p)/2`, so that `Im Vⁿ p = -i·(…)`.
pub fn apply_imag_factor(n: PowerIndex, p: &Poly) -> Result<Poly> {
    let v = apply_power_to_poly(Part::FullV, n, p)?;
    let w = apply_power_to_poly(Part::FullVAdjoint, n, p)?;
    Ok(v.sub(&w).scale(0.5))
}

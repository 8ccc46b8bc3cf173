//! Spectra, norms and numerical ranges of the real and imaginary parts of
//! powers of the Volterra operator `Vf(x) = ∫₀ˣ f(t) dt` on `L²[0,1]`.
//!
//! Every closed-form quantity is reachable through at least two independent
//! routes:
//!
//! - [`pencil`]: exact finite spectra of `Re Vⁿ` (n odd) and `Im Vⁿ` (n even)
//!   from a small matrix pencil, with eigenfunctions recovered as polynomials
//!   and verified by exact polynomial arithmetic;
//! - [`analytic`]: the transcendental eigenvalue families of `Im V` and `Re V²`;
//! - [`discretizer`]: midpoint Nyström matrices and dense eigensolvers;
//! - [`norms`]: closed-form Hilbert–Schmidt norms and operator-norm bounds;
//! - [`numerical_range`]: numerical-range intervals and the boundary of `W(V)`;
//! - [`accretivity`]: the accretivity criterion for `aV + bV²`.

pub mod accretivity;
pub mod analytic;
pub mod combinatorics;
pub mod discretizer;
pub mod error;
pub mod kernels;
pub mod norms;
pub mod numerical_range;
pub mod pencil;
pub mod poly;
pub mod quadrature;
pub mod spectrum;
pub mod tolerances;

pub use discretizer::{assemble, Grid, OperatorMatrix, Structure, VolterraSplit};
pub use error::{Error, Result};
pub use kernels::{apply_power_to_poly, eval_kernel, KernelSpec, Part, PowerIndex};
pub use poly::Poly;
pub use spectrum::{Source, SpectralValue, Spectrum};

//! Midpoint-rule Nyström discretization.
//!
//! On the uniform grid `xᵢ = (i + ½)/m` with weight `h = 1/m`, an integral
//! operator with kernel `k` becomes the matrix `h·k(xᵢ, xⱼ)`. Symmetric and
//! antisymmetric kernels give exactly symmetric and antisymmetric matrices,
//! and eigenvalues of the matrix approximate those of the operator.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{eval_kernel, KernelSpec, Part, PowerIndex};
use crate::spectrum::{SpectralValue, Source, Spectrum};
use crate::tolerances::MAX_GRID;

/// Uniform midpoint grid with `m` cells on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    m: usize,
}

impl Grid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput(format!("grid needs at least 2 cells, got {m}")));
        }
        if m > MAX_GRID {
            return Err(Error::CapacityExceeded {
                what: "grid size",
                got: m,
                limit: MAX_GRID,
            });
        }
        Ok(Grid { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> f64 {
        1.0 / self.m as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.m as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.m).map(|i| self.node(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Structure {
    Symmetric,
    Antisymmetric,
    General,
}

impl Structure {
    fn name(self) -> &'static str {
        match self {
            Structure::Symmetric => "symmetric",
            Structure::Antisymmetric => "antisymmetric",
            Structure::General => "general",
        }
    }
}

/// Nyström matrix of one kernel on one grid. Immutable once assembled.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    grid: Grid,
    entries: DMatrix<f64>,
    structure: Structure,
    spec: KernelSpec,
}

/// `h·k(xᵢ, xⱼ)`; the structure tag follows the kernel part.
pub fn assemble(spec: KernelSpec, grid: Grid) -> OperatorMatrix {
    let m = grid.m();
    let h = grid.h();
    let nodes = grid.nodes();
    let structure = match spec.part {
        Part::RealPart => Structure::Symmetric,
        Part::ImagPart => Structure::Antisymmetric,
        Part::FullV | Part::FullVAdjoint => Structure::General,
    };
    let mut entries = DMatrix::zeros(m, m);
    match structure {
        Structure::General => {
            for j in 0..m {
                for i in 0..m {
                    entries[(i, j)] = h * eval_kernel(spec, nodes[i], nodes[j]);
                }
            }
        }
        Structure::Symmetric | Structure::Antisymmetric => {
            let mirror = if structure == Structure::Symmetric { 1.0 } else { -1.0 };
            for j in 0..m {
                for i in j..m {
                    let v = h * eval_kernel(spec, nodes[i], nodes[j]);
                    entries[(i, j)] = v;
                    entries[(j, i)] = mirror * v;
                }
                if structure == Structure::Antisymmetric {
                    entries[(j, j)] = 0.0;
                }
            }
        }
    }
    OperatorMatrix {
        grid,
        entries,
        structure,
        spec,
    }
}

impl OperatorMatrix {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn spec(&self) -> KernelSpec {
        self.spec
    }

    fn require(&self, expected: Structure) -> Result<()> {
        if self.structure == expected {
            Ok(())
        } else {
            Err(Error::StructureMismatch {
                expected: expected.name(),
                found: self.structure.name(),
            })
        }
    }

    /// Rough backward-error scale of a dense eigensolve on this matrix.
    fn eig_error_hint(&self) -> f64 {
        f64::EPSILON * self.grid.m() as f64 * self.hs_norm()
    }

    /// All `m` eigenvalues of a symmetric Nyström matrix.
    pub fn eigenvalues_symmetric(&self) -> Result<Spectrum> {
        self.require(Structure::Symmetric)?;
        let hint = self.eig_error_hint();
        let values = self.entries.symmetric_eigenvalues();
        Ok(Spectrum::new(
            values
                .iter()
                .map(|&value| SpectralValue {
                    value,
                    error_hint: Some(hint),
                })
                .collect(),
            Source::Discretized,
        ))
    }

    /// Eigenvalues of the Hermitian matrix `-i·M` for antisymmetric `M`.
    ///
    /// The singular values of a real antisymmetric matrix come in equal pairs
    /// `σ, σ`; each pair contributes `+σ̄` and `-σ̄` (`σ̄` the pair mean), so the
    /// result is an exactly symmetric multiset. Odd `m` adds one exact zero.
    pub fn eigenvalues_antisymmetric(&self) -> Result<Spectrum> {
        self.require(Structure::Antisymmetric)?;
        let hint = self.eig_error_hint();
        let sv = self.entries.singular_values();
        let mut values = Vec::with_capacity(sv.len());
        for pair in sv.as_slice().chunks(2) {
            match pair {
                [a, b] => {
                    let s = 0.5 * (a + b);
                    values.push(s);
                    values.push(-s);
                }
                _ => values.push(0.0),
            }
        }
        Ok(Spectrum::new(
            values
                .into_iter()
                .map(|value| SpectralValue {
                    value,
                    error_hint: Some(hint),
                })
                .collect(),
            Source::Discretized,
        ))
    }

    /// Spectrum of the self-adjoint operator this matrix discretizes.
    pub fn spectrum(&self) -> Result<Spectrum> {
        match self.structure {
            Structure::Symmetric => self.eigenvalues_symmetric(),
            Structure::Antisymmetric => self.eigenvalues_antisymmetric(),
            Structure::General => Err(Error::StructureMismatch {
                expected: "symmetric or antisymmetric",
                found: "general",
            }),
        }
    }

    /// Operator norm: max |eigenvalue| for self-adjoint parts, largest
    /// singular value otherwise.
    pub fn op_norm(&self) -> f64 {
        match self.structure {
            Structure::Symmetric => self
                .entries
                .symmetric_eigenvalues()
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs())),
            Structure::Antisymmetric | Structure::General => self.entries.singular_values()[0],
        }
    }

    /// Hilbert–Schmidt norm of the discretized integral operator,
    /// `h·sqrt(Σ k(xᵢ,xⱼ)²)`, i.e. the Frobenius norm of the matrix.
    ///
    /// Summed over kernel values and divided by `m` rather than scaled by a
    /// rounded `h`, so a constant kernel gives its exact norm.
    pub fn hs_norm(&self) -> f64 {
        let nodes = self.grid.nodes();
        let mut sum = 0.0;
        for &x in &nodes {
            for &t in &nodes {
                let k = eval_kernel(self.spec, x, t);
                sum += k * k;
            }
        }
        sum.sqrt() / self.grid.m() as f64
    }

    /// `M²`, the Nyström matrix of the squared operator.
    pub fn squared(&self) -> DMatrix<f64> {
        &self.entries * &self.entries
    }
}

/// The discretized Volterra operator split into real and imaginary parts.
///
/// `real` and `imag` are the Nyström matrices of `Re V` and of the
/// antisymmetric factor of `Im V`; `full = real + imag` is the midpoint
/// matrix of `V` whose diagonal carries the exact cell integral `h/2`
/// instead of the strict-indicator value `0` used by [`assemble`].
#[derive(Debug, Clone)]
pub struct VolterraSplit {
    pub real: OperatorMatrix,
    pub imag: OperatorMatrix,
    pub full: DMatrix<f64>,
}

impl VolterraSplit {
    pub fn new(grid: Grid) -> Self {
        let one = PowerIndex::new(1).expect("1 is a valid power");
        let real = assemble(KernelSpec::new(Part::RealPart, one), grid);
        let imag = assemble(KernelSpec::new(Part::ImagPart, one), grid);
        let full = real.entries() + imag.entries();
        VolterraSplit { real, imag, full }
    }

    pub fn grid(&self) -> Grid {
        self.real.grid()
    }
}

//! Two-mode truncated Fock space: basis indexing, ladder operators, pure
//! states, density matrices and the partial trace.
//!
//! The basis |m n⟩ (m photons in mode a, n in mode b) is linearized
//! row-major throughout the crate: index = m · dim_b + n.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Which oscillator mode an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// Truncation dimensions of the two-mode Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockDims {
    dim_a: usize,
    dim_b: usize,
}

impl FockDims {
    /// Both modes need at least the {0, 1} levels for the qubit subspace.
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a < 2 || dim_b < 2 {
            return Err(Error::DimsTooSmall(dim_a, dim_b));
        }
        Ok(Self { dim_a, dim_b })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Total Hilbert-space dimension dim_a · dim_b.
    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    /// Linear index of |m n⟩.
    pub fn index(&self, m: usize, n: usize) -> Result<usize> {
        if m >= self.dim_a || n >= self.dim_b {
            return Err(Error::LevelOutOfRange {
                m,
                n,
                dim_a: self.dim_a,
                dim_b: self.dim_b,
            });
        }
        Ok(m * self.dim_b + n)
    }

    /// Inverse of [`FockDims::index`].
    pub fn levels(&self, index: usize) -> (usize, usize) {
        (index / self.dim_b, index % self.dim_b)
    }

    pub(crate) fn idx(&self, m: usize, n: usize) -> usize {
        m * self.dim_b + n
    }
}

/// Pure state of the two-mode field, amplitudes c_mn over |m n⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    dims: FockDims,
    amps: DVector<C64>,
}

impl TwoModeState {
    /// Basis state |m n⟩.
    pub fn fock(dims: FockDims, m: usize, n: usize) -> Result<Self> {
        let i = dims.index(m, n)?;
        let mut amps = DVector::zeros(dims.total());
        amps[i] = C64::new(1.0, 0.0);
        Ok(Self { dims, amps })
    }

    /// Wrap an amplitude vector (length must match the dimensions).
    pub fn new(dims: FockDims, amps: DVector<C64>) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                got: amps.len(),
            });
        }
        Ok(Self { dims, amps })
    }

    pub fn dims(&self) -> FockDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amplitude(&self, m: usize, n: usize) -> Result<C64> {
        Ok(self.amps[self.dims.index(m, n)?])
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.total(),
                got: other.dims.total(),
            });
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// The four amplitudes (c00, c01, c10, c11) of the two-qubit block.
    pub fn qubit_amplitudes(&self) -> [C64; 4] {
        let d = self.dims;
        [
            self.amps[d.idx(0, 0)],
            self.amps[d.idx(0, 1)],
            self.amps[d.idx(1, 0)],
            self.amps[d.idx(1, 1)],
        ]
    }
}

/// Density matrix over the same linearized basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: FockDims,
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &TwoModeState) -> Self {
        let a = psi.amplitudes();
        Self {
            dims: psi.dims(),
            mat: a * a.adjoint(),
        }
    }

    /// Wrap a matrix; only the shape is validated here. Hermiticity and
    /// positivity checks are available separately.
    pub fn new(dims: FockDims, mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != dims.total() || mat.ncols() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                got: mat.nrows().max(mat.ncols()),
            });
        }
        Ok(Self { dims, mat })
    }

    pub fn dims(&self) -> FockDims {
        self.dims
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.diagonal().sum()
    }

    /// max |ρ − ρ†| over all elements.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.mat.nrows();
        let mut dev: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                dev = dev.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Smallest eigenvalue; negative values of magnitude above the numerical
    /// floor signal loss of positivity.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eig = self
            .mat
            .clone()
            .try_symmetric_eigen(f64::EPSILON, 0)
            .ok_or(Error::Eigendecomposition)?;
        Ok(eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
    }
}

/// Matrix of â⊗1 (mode a) or 1⊗b̂ (mode b): ⟨m−1, n|â|m, n⟩ = √m.
pub fn annihilation_matrix(dims: FockDims, mode: Mode) -> DMatrix<C64> {
    let d = dims.total();
    let mut out = DMatrix::zeros(d, d);
    match mode {
        Mode::A => {
            for m in 1..dims.dim_a() {
                for n in 0..dims.dim_b() {
                    out[(dims.idx(m - 1, n), dims.idx(m, n))] = C64::new((m as f64).sqrt(), 0.0);
                }
            }
        }
        Mode::B => {
            for m in 0..dims.dim_a() {
                for n in 1..dims.dim_b() {
                    out[(dims.idx(m, n - 1), dims.idx(m, n))] = C64::new((n as f64).sqrt(), 0.0);
                }
            }
        }
    }
    out
}

/// Matrix of ↠(mode a) or b̂† (mode b). The top level maps to zero: the
/// truncation edge is handled by leakage monitoring, not by erroring.
pub fn creation_matrix(dims: FockDims, mode: Mode) -> DMatrix<C64> {
    annihilation_matrix(dims, mode).adjoint()
}

/// Matrix of the photon-number operator n̂ = â†â of one mode.
pub fn number_matrix(dims: FockDims, mode: Mode) -> DMatrix<C64> {
    let d = dims.total();
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        let (m, n) = dims.levels(i);
        let occ = match mode {
            Mode::A => m,
            Mode::B => n,
        };
        out[(i, i)] = C64::new(occ as f64, 0.0);
    }
    out
}

/// Partial trace over the discarded mode; `keep` names the surviving mode.
pub fn partial_trace(rho: &DensityMatrix, keep: Mode) -> DMatrix<C64> {
    let dims = rho.dims();
    let (da, db) = (dims.dim_a(), dims.dim_b());
    let m = rho.matrix();
    match keep {
        Mode::A => {
            let mut out = DMatrix::zeros(da, da);
            for i in 0..da {
                for j in 0..da {
                    let mut s = C64::new(0.0, 0.0);
                    for n in 0..db {
                        s += m[(dims.idx(i, n), dims.idx(j, n))];
                    }
                    out[(i, j)] = s;
                }
            }
            out
        }
        Mode::B => {
            let mut out = DMatrix::zeros(db, db);
            for i in 0..db {
                for j in 0..db {
                    let mut s = C64::new(0.0, 0.0);
                    for k in 0..da {
                        s += m[(dims.idx(k, i), dims.idx(k, j))];
                    }
                    out[(i, j)] = s;
                }
            }
            out
        }
    }
}

//! Exact unitary propagation |ψ(t)⟩ = exp(−i H₁ t)|ψ(0)⟩ over a time grid.
//!
//! H₁ is time independent, so one Hermitian eigendecomposition is reused
//! for every grid point; evaluation across points is embarrassingly
//! parallel.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::TwoModeState;

/// Monotone time grid in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    /// Uniform grid of `n_points` from `t_start` to `t_end` inclusive.
    pub fn linspace(t_start: f64, t_end: f64, n_points: usize) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::InvalidGrid("need at least one point".into()));
        }
        if !(t_start.is_finite() && t_end.is_finite()) || t_start > t_end {
            return Err(Error::InvalidGrid(format!(
                "bad interval [{t_start}, {t_end}]"
            )));
        }
        if n_points == 1 {
            return Ok(Self { points: vec![t_start] });
        }
        let dt = (t_end - t_start) / (n_points - 1) as f64;
        if dt <= 0.0 {
            return Err(Error::InvalidGrid("points would not be increasing".into()));
        }
        let points = (0..n_points).map(|k| t_start + k as f64 * dt).collect();
        Ok(Self { points })
    }

    /// Wrap explicit points; they must be strictly increasing.
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("need at least one point".into()));
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) || points.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("points must be strictly increasing".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        *self.points.last().unwrap()
    }
}

/// Time grid plus one payload per grid point (states or derived scalars).
#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    grid: TimeGrid,
    states: Vec<S>,
}

impl<S> Trajectory<S> {
    pub fn new(grid: TimeGrid, states: Vec<S>) -> Result<Self> {
        if states.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: states.len(),
            });
        }
        Ok(Self { grid, states })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.grid.points().iter().copied().zip(self.states.iter())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

const NORM_TOL: f64 = 1e-8;

/// Propagate `psi0` under the Hermitian matrix `h1` to every grid point.
pub fn propagate(
    h1: &DMatrix<C64>,
    psi0: &TwoModeState,
    grid: &TimeGrid,
) -> Result<Trajectory<TwoModeState>> {
    let d = psi0.dims().total();
    if h1.nrows() != d || h1.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: h1.nrows().max(h1.ncols()),
        });
    }
    let norm = psi0.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let herm_dev = (h1 - h1.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = h1.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if herm_dev > 1e-10 * scale {
        return Err(Error::NotHermitian { deviation: herm_dev });
    }

    let eig = h1
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::Eigendecomposition)?;
    let basis = &eig.eigenvectors;
    let energies = &eig.eigenvalues;
    let coeffs = basis.adjoint() * psi0.amplitudes();

    let dims = psi0.dims();
    let states: Vec<TwoModeState> = grid
        .points()
        .par_iter()
        .map(|&t| {
            let phased = DVector::from_iterator(
                d,
                coeffs
                    .iter()
                    .zip(energies.iter())
                    .map(|(c, &e)| c * (-C64::i() * e * t).exp()),
            );
            TwoModeState::new(dims, basis * phased).expect("dimensions preserved")
        })
        .collect();

    Trajectory::new(grid.clone(), states)
}

/// Probability outside the two-qubit subspace {|00⟩, |01⟩, |10⟩, |11⟩}.
pub fn leaked_probability(state: &TwoModeState) -> f64 {
    let kept: f64 = state.qubit_amplitudes().iter().map(|c| c.norm_sqr()).sum();
    (1.0 - kept).max(0.0)
}

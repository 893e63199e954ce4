//! Interaction-picture Hamiltonian of the pumped Kerr coupler.
//!
//! H₁ = (χ_a/2)(â†)²â² + (χ_b/2)(b̂†)²b̂² + ε â†b̂ + ε* â b̂†
//!    + α â† + α* â + β b̂† + β* b̂
//!
//! β = 0 recovers the single-pump coupler. All rates are angular (rad/s)
//! and exact resonance is assumed, so the free part never appears.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockDims, TwoModeState};

/// Physical constants of the coupler and its reservoirs.
///
/// `chi_*` are the Kerr nonlinearities, `alpha`/`beta` the classical pump
/// couplings of modes a/b, `epsilon` the internal mode coupling (all rad/s).
/// `gamma_*` are cavity damping rates (rad/s) and `nbar_*` the mean thermal
/// photon numbers of the reservoirs; they are ignored by the unitary paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub chi_a: f64,
    pub chi_b: f64,
    pub alpha: C64,
    pub beta: C64,
    pub epsilon: C64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub nbar_a: f64,
    pub nbar_b: f64,
}

impl SystemParams {
    /// Loss-free coupler; β = 0 gives the single-pump model.
    pub fn unitary(chi_a: f64, chi_b: f64, alpha: C64, beta: C64, epsilon: C64) -> Self {
        Self {
            chi_a,
            chi_b,
            alpha,
            beta,
            epsilon,
            gamma_a: 0.0,
            gamma_b: 0.0,
            nbar_a: 0.0,
            nbar_b: 0.0,
        }
    }

    pub fn with_damping(mut self, gamma_a: f64, gamma_b: f64, nbar_a: f64, nbar_b: f64) -> Self {
        self.gamma_a = gamma_a;
        self.gamma_b = gamma_b;
        self.nbar_a = nbar_a;
        self.nbar_b = nbar_b;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("chi_a", self.chi_a),
            ("chi_b", self.chi_b),
            ("gamma_a", self.gamma_a),
            ("gamma_b", self.gamma_b),
            ("nbar_a", self.nbar_a),
            ("nbar_b", self.nbar_b),
        ];
        for (name, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be >= 0, got {v}")));
            }
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("epsilon", self.epsilon)] {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// Kerr diagonal (χ_a/2)·m(m−1) + (χ_b/2)·n(n−1) at basis index (m, n).
pub(crate) fn kerr_diagonal(params: &SystemParams, dims: FockDims) -> Vec<f64> {
    let mut diag = vec![0.0; dims.total()];
    for (i, d) in diag.iter_mut().enumerate() {
        let (m, n) = dims.levels(i);
        *d = 0.5 * params.chi_a * (m * (m.max(1) - 1)) as f64
            + 0.5 * params.chi_b * (n * (n.max(1) - 1)) as f64;
    }
    diag
}

/// Assemble H₁ on the linearized basis. Hermitian by construction; a final
/// symmetrization pass removes any rounding asymmetry.
pub fn build_h1(params: &SystemParams, dims: FockDims) -> Result<DMatrix<C64>> {
    params.validate()?;
    let d = dims.total();
    let mut h = DMatrix::<C64>::zeros(d, d);

    for (i, k) in kerr_diagonal(params, dims).into_iter().enumerate() {
        h[(i, i)] = C64::new(k, 0.0);
    }

    let sq = |x: usize| (x as f64).sqrt();
    for m in 0..dims.dim_a() {
        for n in 0..dims.dim_b() {
            let row = dims.idx(m, n);
            // ε a†b: couples (m, n) <- (m-1, n+1) with sqrt(m(n+1))
            if m >= 1 && n + 1 < dims.dim_b() {
                h[(row, dims.idx(m - 1, n + 1))] += params.epsilon * sq(m) * sq(n + 1);
            }
            // ε* a b†: couples (m, n) <- (m+1, n-1) with sqrt((m+1)n)
            if m + 1 < dims.dim_a() && n >= 1 {
                h[(row, dims.idx(m + 1, n - 1))] += params.epsilon.conj() * sq(m + 1) * sq(n);
            }
            // α a† and α* a
            if m >= 1 {
                h[(row, dims.idx(m - 1, n))] += params.alpha * sq(m);
            }
            if m + 1 < dims.dim_a() {
                h[(row, dims.idx(m + 1, n))] += params.alpha.conj() * sq(m + 1);
            }
            // β b† and β* b
            if n >= 1 {
                h[(row, dims.idx(m, n - 1))] += params.beta * sq(n);
            }
            if n + 1 < dims.dim_b() {
                h[(row, dims.idx(m, n + 1))] += params.beta.conj() * sq(n + 1);
            }
        }
    }

    let herm = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    debug_assert!((&herm - herm.adjoint()).iter().all(|z| z.norm() < 1e-12));
    Ok(herm)
}

/// dc/dt = −i H₁ c written out component-wise in the amplitude equations,
/// an independent route from the matrix product with [`build_h1`].
pub fn amplitude_rhs(
    params: &SystemParams,
    dims: FockDims,
    state: &TwoModeState,
) -> Result<DVector<C64>> {
    params.validate()?;
    if state.dims() != dims {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            got: state.dims().total(),
        });
    }
    let c = state.amplitudes();
    let sq = |x: usize| (x as f64).sqrt();
    let kerr = kerr_diagonal(params, dims);
    let mut out = DVector::<C64>::zeros(dims.total());
    for m in 0..dims.dim_a() {
        for n in 0..dims.dim_b() {
            let i = dims.idx(m, n);
            let mut acc = C64::new(kerr[i], 0.0) * c[i];
            if m >= 1 && n + 1 < dims.dim_b() {
                acc += params.epsilon * c[dims.idx(m - 1, n + 1)] * sq(m) * sq(n + 1);
            }
            if m + 1 < dims.dim_a() && n >= 1 {
                acc += params.epsilon.conj() * c[dims.idx(m + 1, n - 1)] * sq(m + 1) * sq(n);
            }
            if m >= 1 {
                acc += params.alpha * c[dims.idx(m - 1, n)] * sq(m);
            }
            if m + 1 < dims.dim_a() {
                acc += params.alpha.conj() * c[dims.idx(m + 1, n)] * sq(m + 1);
            }
            if n >= 1 {
                acc += params.beta * c[dims.idx(m, n - 1)] * sq(n);
            }
            if n + 1 < dims.dim_b() {
                acc += params.beta.conj() * c[dims.idx(m, n + 1)] * sq(n + 1);
            }
            out[i] = -C64::i() * acc;
        }
    }
    Ok(out)
}

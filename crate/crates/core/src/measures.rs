//! State-comparison and entanglement functionals: Uhlmann fidelity, Bures
//! distance, entropy of entanglement, two-qubit projection, Bell-basis
//! decomposition, Wootters concurrence and entanglement of formation.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::analytic::TruncatedQubitPair;
use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, TwoModeState};

const HERM_TOL: f64 = 1e-8;
const TRACE_TOL: f64 = 1e-6;
const NORM_TOL: f64 = 1e-8;

/// Amplitudes of a state in the Bell-like basis
/// B1 = (|11⟩ + i|00⟩)/√2, B2 = (|00⟩ + i|11⟩)/√2,
/// B3 = (|01⟩ − i|10⟩)/√2, B4 = (|10⟩ − i|01⟩)/√2,
/// plus the probability weight outside the two-qubit subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDecomposition {
    pub b1: C64,
    pub b2: C64,
    pub b3: C64,
    pub b4: C64,
    pub leakage: f64,
}

impl BellDecomposition {
    pub fn amplitudes(&self) -> [C64; 4] {
        [self.b1, self.b2, self.b3, self.b4]
    }

    pub fn probabilities(&self) -> [f64; 4] {
        [
            self.b1.norm_sqr(),
            self.b2.norm_sqr(),
            self.b3.norm_sqr(),
            self.b4.norm_sqr(),
        ]
    }
}

fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    for q in [p, 1.0 - p] {
        if q > 0.0 {
            h -= q * q.log2();
        }
    }
    h
}

/// The entanglement function E(x) = h((1 + √(1−x²))/2) with h the binary
/// entropy; E(0) = 0, E(1) = 1 ebit.
pub fn cal_e(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            value: x,
            domain: "[0, 1]",
        });
    }
    let s = (1.0 - x * x).max(0.0).sqrt();
    Ok(binary_entropy(0.5 * (1.0 + s)))
}

fn check_density(rho: &DensityMatrix) -> Result<()> {
    let dev = rho.hermiticity_deviation();
    if dev > HERM_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidParams(format!(
            "density matrix trace {tr} is not 1"
        )));
    }
    Ok(())
}

/// Eigenvalue dust below n·1e-15 of the spectral radius is
/// indistinguishable from rounding; set it to zero so the square roots
/// taken downstream do not amplify it (sqrt turns 1e-16 into 1e-8).
fn clamp_spectrum(mut eigenvalues: Vec<f64>) -> Vec<f64> {
    let peak = eigenvalues.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let floor = peak * eigenvalues.len() as f64 * 1e-15;
    for x in eigenvalues.iter_mut() {
        *x = if *x > floor { *x } else { 0.0 };
    }
    eigenvalues
}

/// Hermitian square root with negative numerical dust clamped to zero.
fn sqrtm_psd(m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::Eigendecomposition)?;
    let clamped = clamp_spectrum(eig.eigenvalues.iter().copied().collect());
    let roots = nalgebra::DVector::from_iterator(
        clamped.len(),
        clamped.into_iter().map(|x| C64::new(x.sqrt(), 0.0)),
    );
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint())
}

fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::Eigendecomposition)?;
    Ok(eig.eigenvalues.iter().copied().collect())
}

/// Uhlmann transition probability F = (Tr √(√σ ρ √σ))².
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch {
            expected: rho.dims().total(),
            got: sigma.dims().total(),
        });
    }
    check_density(rho)?;
    check_density(sigma)?;
    let s = sqrtm_psd(sigma.matrix())?;
    let inner = &s * rho.matrix() * &s;
    let sum: f64 = clamp_spectrum(hermitian_eigenvalues(&inner)?)
        .into_iter()
        .map(f64::sqrt)
        .sum();
    Ok((sum * sum).clamp(0.0, 1.0))
}

/// Shortcut for pure σ = |ψ⟩⟨ψ|: F = ⟨ψ|ρ|ψ⟩.
pub fn fidelity_with_pure(rho: &DensityMatrix, psi: &TwoModeState) -> Result<f64> {
    if rho.dims() != psi.dims() {
        return Err(Error::DimensionMismatch {
            expected: rho.dims().total(),
            got: psi.dims().total(),
        });
    }
    check_density(rho)?;
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let v = psi.amplitudes();
    let f = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
    Ok(f.clamp(0.0, 1.0))
}

/// Bures distance D_B = 2 − 2√F; a proper metric, symmetric in both states.
pub fn bures_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(2.0 - 2.0 * fidelity(rho, sigma)?.sqrt())
}

fn shannon_entropy_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    let mut e = 0.0;
    for p in probs {
        if p > 0.0 {
            e -= p * p.log2();
        }
    }
    e
}

/// Entropy of entanglement (ebits): von Neumann entropy of the reduced
/// state of mode a, computed from the eigenvalues of Tr_b |ψ⟩⟨ψ|.
pub fn entropy_of_entanglement(psi: &TwoModeState) -> Result<f64> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let dims = psi.dims();
    let (da, db) = (dims.dim_a(), dims.dim_b());
    let c = psi.amplitudes();
    // rho_a[m, m'] = sum_n c_mn conj(c_m'n)
    let mut rho_a = DMatrix::<C64>::zeros(da, da);
    for m in 0..da {
        for mp in 0..=m {
            let mut s = C64::new(0.0, 0.0);
            for n in 0..db {
                s += c[dims.index(m, n)?] * c[dims.index(mp, n)?].conj();
            }
            rho_a[(m, mp)] = s;
            rho_a[(mp, m)] = s.conj();
        }
    }
    let probs = hermitian_eigenvalues(&rho_a)?;
    Ok(shannon_entropy_bits(probs.into_iter().map(|p| p.max(0.0))))
}

/// Entropy of entanglement of a two-qubit pure state from its amplitudes:
/// E = cal_e(2 |c00 c11 − c01 c10|).
pub fn entropy_of_entanglement_qubit(pair: &TruncatedQubitPair) -> Result<f64> {
    let norm = pair.norm_sqr().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let x = 2.0 * (pair.c00 * pair.c11 - pair.c01 * pair.c10).norm();
    cal_e(x.min(1.0))
}

/// Extract the {|00⟩, |01⟩, |10⟩, |11⟩} block of a full-space density
/// matrix, renormalized by its trace; also returns the leakage
/// 1 − Tr(block).
pub fn project_two_qubit(rho: &DensityMatrix) -> Result<(DMatrix<C64>, f64)> {
    check_density(rho)?;
    let dims = rho.dims();
    let idx = [
        dims.index(0, 0)?,
        dims.index(0, 1)?,
        dims.index(1, 0)?,
        dims.index(1, 1)?,
    ];
    let m = rho.matrix();
    let mut block = DMatrix::<C64>::zeros(4, 4);
    for (i, &bi) in idx.iter().enumerate() {
        for (j, &bj) in idx.iter().enumerate() {
            block[(i, j)] = m[(bi, bj)];
        }
    }
    let tr = block.diagonal().iter().map(|z| z.re).sum::<f64>();
    if tr < 1e-12 {
        return Err(Error::DegenerateProjection { trace: tr });
    }
    block /= C64::new(tr, 0.0);
    Ok((block, (1.0 - tr).clamp(0.0, 1.0)))
}

/// σ_y ⊗ σ_y in the (|00⟩, |01⟩, |10⟩, |11⟩) basis: an antidiagonal of
/// (−1, 1, 1, −1).
fn sigma_y_sigma_y() -> DMatrix<C64> {
    let mut y = DMatrix::<C64>::zeros(4, 4);
    y[(0, 3)] = C64::new(-1.0, 0.0);
    y[(1, 2)] = C64::new(1.0, 0.0);
    y[(2, 1)] = C64::new(1.0, 0.0);
    y[(3, 0)] = C64::new(-1.0, 0.0);
    y
}

fn check_two_qubit(rho4: &DMatrix<C64>) -> Result<()> {
    if rho4.nrows() != 4 || rho4.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho4.nrows().max(rho4.ncols()),
        });
    }
    let dev = (rho4 - rho4.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if dev > HERM_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit density matrix: the λ_i are the
/// square roots of the eigenvalues of ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y), with
/// conjugation in the computational basis; evaluated on the similar
/// Hermitian form √ρ ρ̃ √ρ for numerical robustness.
pub fn concurrence(rho4: &DMatrix<C64>) -> Result<f64> {
    check_two_qubit(rho4)?;
    let y = sigma_y_sigma_y();
    let rho_tilde = &y * rho4.map(|z| z.conj()) * &y;
    let s = sqrtm_psd(rho4)?;
    let inner = &s * rho_tilde * &s;
    let mut lambda: Vec<f64> = clamp_spectrum(hermitian_eigenvalues(&inner)?)
        .into_iter()
        .map(f64::sqrt)
        .collect();
    lambda.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let c = 2.0 * lambda[0] - lambda.iter().sum::<f64>();
    Ok(c.clamp(0.0, 1.0))
}

/// Wootters entanglement of formation E_F = cal_e(C(ρ)); coincides with
/// the entropy of entanglement on pure two-qubit states.
pub fn entanglement_of_formation(rho4: &DMatrix<C64>) -> Result<f64> {
    cal_e(concurrence(rho4)?)
}

/// Decompose a normalized state over the Bell-like basis; works on any
/// truncation since the basis spans only the two-qubit block.
pub fn bell_decompose(state: &TwoModeState) -> Result<BellDecomposition> {
    let norm = state.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let [c00, c01, c10, c11] = state.qubit_amplitudes();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let i = C64::i();
    let b1 = (c11 - i * c00) * s;
    let b2 = (c00 - i * c11) * s;
    let b3 = (c01 + i * c10) * s;
    let b4 = (c10 + i * c01) * s;
    let kept = b1.norm_sqr() + b2.norm_sqr() + b3.norm_sqr() + b4.norm_sqr();
    Ok(BellDecomposition {
        b1,
        b2,
        b3,
        b4,
        leakage: (1.0 - kept).clamp(0.0, 1.0),
    })
}

/// Bell decomposition of a truncated qubit pair (zero leakage by
/// construction when the pair is normalized).
pub fn bell_decompose_qubit(pair: &TruncatedQubitPair) -> Result<BellDecomposition> {
    bell_decompose(&pair.to_two_mode_state())
}

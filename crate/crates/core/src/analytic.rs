//! Closed-form solutions of the truncated two-qubit dynamics and their
//! entanglement entropies, plus the exact propagator of the truncated
//! four-amplitude system used as the reference for fidelity runs.
//!
//! All closed forms are for real couplings (the regimes that admit them);
//! complex couplings go through [`truncated_propagate`], which is exact for
//! any parameter set. Public interfaces use physical time in seconds.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockDims, TwoModeState};
use crate::hamiltonian::SystemParams;
use crate::measures;

/// Initial Fock state |kl⟩ of the truncated dynamics, k, l ∈ {0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialFock {
    F00,
    F01,
    F10,
    F11,
}

impl InitialFock {
    pub fn levels(self) -> (usize, usize) {
        match self {
            Self::F00 => (0, 0),
            Self::F01 => (0, 1),
            Self::F10 => (1, 0),
            Self::F11 => (1, 1),
        }
    }

    pub fn from_levels(m: usize, n: usize) -> Option<Self> {
        match (m, n) {
            (0, 0) => Some(Self::F00),
            (0, 1) => Some(Self::F01),
            (1, 0) => Some(Self::F10),
            (1, 1) => Some(Self::F11),
            _ => None,
        }
    }

    /// Sign (−1)^(k−l) appearing in the generalized entropy formulas.
    fn entropy_sign(self) -> f64 {
        match self {
            Self::F00 | Self::F11 => 1.0,
            Self::F01 | Self::F10 => -1.0,
        }
    }
}

/// The four amplitudes of the ideally truncated state
/// c00|00⟩ + c01|01⟩ + c10|10⟩ + c11|11⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedQubitPair {
    pub c00: C64,
    pub c01: C64,
    pub c10: C64,
    pub c11: C64,
}

impl TruncatedQubitPair {
    pub fn new(c00: C64, c01: C64, c10: C64, c11: C64) -> Self {
        Self { c00, c01, c10, c11 }
    }

    /// Basis state |kl⟩ as a qubit pair.
    pub fn basis(initial: InitialFock) -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        match initial {
            InitialFock::F00 => Self::new(one, zero, zero, zero),
            InitialFock::F01 => Self::new(zero, one, zero, zero),
            InitialFock::F10 => Self::new(zero, zero, one, zero),
            InitialFock::F11 => Self::new(zero, zero, zero, one),
        }
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        [self.c00, self.c01, self.c10, self.c11]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|c| c.norm_sqr()).sum()
    }

    /// The pair as a two-mode state on a (2, 2) Fock space.
    pub fn to_two_mode_state(&self) -> TwoModeState {
        let dims = FockDims::new(2, 2).expect("2x2 is valid");
        self.embed(dims).expect("qubit block always fits")
    }

    /// Embed the four amplitudes into a larger truncated Fock space.
    pub fn embed(&self, dims: FockDims) -> Result<TwoModeState> {
        let mut amps = nalgebra::DVector::zeros(dims.total());
        amps[dims.index(0, 0)?] = self.c00;
        amps[dims.index(0, 1)?] = self.c01;
        amps[dims.index(1, 0)?] = self.c10;
        amps[dims.index(1, 1)?] = self.c11;
        TwoModeState::new(dims, amps)
    }
}

/// Characteristic frequencies of the closed-form solutions (rad/s):
/// γ = √(4α² + ε²), Ω_j = √(2[2α² + ε² ± εγ]), λ = √(16α² + ε²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedFrequencies {
    pub gamma_freq: f64,
    pub omega_1: f64,
    pub omega_2: f64,
    pub lambda: f64,
}

impl DerivedFrequencies {
    pub fn new(alpha: f64, epsilon: f64) -> Self {
        let gamma_freq = (4.0 * alpha * alpha + epsilon * epsilon).sqrt();
        let base = 2.0 * alpha * alpha + epsilon * epsilon;
        Self {
            gamma_freq,
            omega_1: (2.0 * (base + epsilon * gamma_freq)).sqrt(),
            omega_2: (2.0 * (base - epsilon * gamma_freq)).max(0.0).sqrt(),
            lambda: (16.0 * alpha * alpha + epsilon * epsilon).sqrt(),
        }
    }
}

const COUPLING_MATCH_TOL: f64 = 1e-9;

fn couplings_equal(alpha: f64, epsilon: f64) -> bool {
    (alpha - epsilon).abs() <= COUPLING_MATCH_TOL * alpha.abs().max(epsilon.abs())
}

fn require_real_inputs(alpha: f64, epsilon: f64, t: f64) -> Result<()> {
    if !(alpha.is_finite() && epsilon.is_finite() && t.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "couplings and time must be finite, got alpha={alpha}, epsilon={epsilon}, t={t}"
        )));
    }
    Ok(())
}

/// Single-pump amplitudes for the initial vacuum, valid for any real α, ε
/// (not both zero). c10 uses the symmetric form −i(α/γ)(sin τ₁ + sin τ₂),
/// equal to the (γ+ε)Ω₂/(4αγ) prefactor by the frequency identity and
/// finite as α → 0.
fn single_pump_vacuum(alpha: f64, epsilon: f64, t: f64) -> Result<TruncatedQubitPair> {
    let f = DerivedFrequencies::new(alpha, epsilon);
    let g = f.gamma_freq;
    if g == 0.0 {
        return Err(Error::InvalidParams(
            "alpha and epsilon cannot both vanish".into(),
        ));
    }
    let (t1, t2) = (0.5 * f.omega_1 * t, 0.5 * f.omega_2 * t);
    let c00 = C64::new(
        ((g - epsilon) * t1.cos() + (g + epsilon) * t2.cos()) / (2.0 * g),
        0.0,
    );
    let c01 = C64::new(alpha * (t1.cos() - t2.cos()) / g, 0.0);
    let c10 = C64::new(0.0, -alpha * (t1.sin() + t2.sin()) / g);
    let c11 = C64::new(
        0.0,
        -(f.omega_2 * t1.sin() - f.omega_1 * t2.sin()) / (2.0 * g),
    );
    Ok(TruncatedQubitPair::new(c00, c01, c10, c11))
}

/// Equal-coupling amplitudes c_mn (initial vacuum), τ = αt/2.
fn equal_coupling_vacuum(alpha: f64, t: f64) -> TruncatedQubitPair {
    let tau = 0.5 * alpha * t;
    let r5 = 5f64.sqrt();
    let (s5, c5) = (r5 * tau).sin_cos();
    let (s, c) = tau.sin_cos();
    TruncatedQubitPair::new(
        C64::new(c5 * c + s5 * s / r5, 0.0),
        C64::new(-2.0 / r5 * s5 * s, 0.0),
        C64::new(0.0, -2.0 / r5 * s5 * c),
        C64::new(0.0, -c5 * s + s5 * c / r5),
    )
}

/// Companion amplitudes c̃00, c̃11 for the equal-coupling initial Fock
/// states; they differ from c00, c11 by interior signs.
fn equal_coupling_tilde(alpha: f64, t: f64) -> (C64, C64) {
    let tau = 0.5 * alpha * t;
    let r5 = 5f64.sqrt();
    let (s5, c5) = (r5 * tau).sin_cos();
    let (s, c) = tau.sin_cos();
    (
        C64::new(c5 * c - s5 * s / r5, 0.0),
        C64::new(0.0, -c5 * s - s5 * c / r5),
    )
}

fn assemble_initial_fock(
    initial: InitialFock,
    c: TruncatedQubitPair,
    ct00: C64,
    ct11: C64,
) -> TruncatedQubitPair {
    match initial {
        InitialFock::F00 => c,
        InitialFock::F01 => TruncatedQubitPair::new(c.c01, ct00, ct11, c.c10),
        InitialFock::F10 => TruncatedQubitPair::new(c.c10, ct11, ct00, c.c01),
        InitialFock::F11 => TruncatedQubitPair::new(c.c11, c.c10, c.c01, c.c00),
    }
}

/// Closed-form truncated amplitudes of the single-pump coupler (β = 0).
///
/// The initial vacuum admits a closed form for any real α, ε; the other
/// initial Fock states are solved only for equal couplings α = ε, and any
/// other regime is an error.
pub fn single_pump_amplitudes(
    alpha: f64,
    epsilon: f64,
    t: f64,
    initial: InitialFock,
) -> Result<TruncatedQubitPair> {
    require_real_inputs(alpha, epsilon, t)?;
    match initial {
        InitialFock::F00 => single_pump_vacuum(alpha, epsilon, t),
        _ => {
            if !couplings_equal(alpha, epsilon) {
                return Err(Error::UnsupportedRegime(format!(
                    "initial Fock states other than |00> require alpha = epsilon, \
                     got alpha={alpha}, epsilon={epsilon}"
                )));
            }
            Ok(single_pump_amplitudes_equal_couplings(alpha, t, initial))
        }
    }
}

/// Equal-coupling (α = ε) single-pump closed form for any initial Fock
/// state; this is the special case the general vacuum solution reduces to.
pub fn single_pump_amplitudes_equal_couplings(
    alpha: f64,
    t: f64,
    initial: InitialFock,
) -> TruncatedQubitPair {
    let c = equal_coupling_vacuum(alpha, t);
    let (ct00, ct11) = equal_coupling_tilde(alpha, t);
    assemble_initial_fock(initial, c, ct00, ct11)
}

/// Two-pump amplitudes for equal pump couplings β = α (real couplings).
/// λ = √(16α² + ε²) sets the fast scale; the structure forces
/// c01 = c10 and c11 = c00 − 1 at all times.
pub fn two_pump_amplitudes(
    alpha: f64,
    epsilon: f64,
    t: f64,
    initial: InitialFock,
) -> Result<TruncatedQubitPair> {
    require_real_inputs(alpha, epsilon, t)?;
    let lambda = DerivedFrequencies::new(alpha, epsilon).lambda;
    if lambda == 0.0 {
        return Err(Error::InvalidParams(
            "alpha and epsilon cannot both vanish".into(),
        ));
    }
    let half = 0.5 * lambda * t;
    let phase = (-C64::i() * 0.5 * epsilon * t).exp();
    let c00 = 0.5
        * (C64::new(1.0, 0.0)
            + (C64::new(half.cos(), 0.0) + C64::i() * (epsilon / lambda) * half.sin()) * phase);
    let c01 = -C64::i() * (2.0 * alpha / lambda) * half.sin() * phase;
    let c = TruncatedQubitPair::new(c00, c01, c01, c00 - C64::new(1.0, 0.0));
    match initial {
        InitialFock::F00 => Ok(c),
        _ => {
            let anti = (C64::i() * epsilon * t).exp();
            let ct00 = 0.5
                * (anti
                    + (C64::new(half.cos(), 0.0) - C64::i() * (epsilon / lambda) * half.sin())
                        * phase);
            let ct11 = ct00 - anti;
            Ok(assemble_initial_fock(initial, c, ct00, ct11))
        }
    }
}

/// The four coupled amplitude equations of the truncated dynamics: the
/// derivative of (c00, c01, c10, c11) for general complex α, β, ε.
/// β = 0 recovers the single-pump system.
pub fn truncated_ode_rhs(params: &SystemParams, c: &TruncatedQubitPair) -> TruncatedQubitPair {
    let (a, b, e) = (params.alpha, params.beta, params.epsilon);
    let mi = -C64::i();
    TruncatedQubitPair::new(
        mi * (a.conj() * c.c10 + b.conj() * c.c01),
        mi * (e.conj() * c.c10 + a.conj() * c.c11 + b * c.c00),
        mi * (e * c.c01 + a * c.c00 + b.conj() * c.c11),
        mi * (a * c.c01 + b * c.c10),
    )
}

/// Hamiltonian of the truncated four-state system in the basis
/// (|00⟩, |01⟩, |10⟩, |11⟩); the Kerr terms vanish identically there.
#[rustfmt::skip]
pub fn truncated_hamiltonian(params: &SystemParams) -> Matrix4<C64> {
    let (a, b, e) = (params.alpha, params.beta, params.epsilon);
    let z = C64::new(0.0, 0.0);
    Matrix4::new(
        z,        b.conj(), a.conj(), z,
        b,        z,        e.conj(), a.conj(),
        a,        e,        z,        b.conj(),
        z,        a,        b,        z,
    )
}

/// Exact solution of the truncated dynamics for arbitrary complex
/// couplings: one 4×4 Hermitian eigendecomposition per call.
pub fn truncated_propagate(
    params: &SystemParams,
    initial: &TruncatedQubitPair,
    t: f64,
) -> Result<TruncatedQubitPair> {
    if !t.is_finite() {
        return Err(Error::InvalidParams(format!("time must be finite, got {t}")));
    }
    params.validate()?;
    let h = truncated_hamiltonian(params);
    let eig = h
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::Eigendecomposition)?;
    let c0 = Vector4::from_row_slice(&initial.amplitudes());
    let coeffs = eig.eigenvectors.adjoint() * c0;
    let phased = Vector4::from_fn(|i, _| coeffs[i] * (-C64::i() * eig.eigenvalues[i] * t).exp());
    let ct = eig.eigenvectors * phased;
    Ok(TruncatedQubitPair::new(ct[0], ct[1], ct[2], ct[3]))
}

/// Entropy of entanglement (ebits) of the single-pump closed forms.
pub fn entropy_single_pump(alpha: f64, epsilon: f64, t: f64, initial: InitialFock) -> Result<f64> {
    require_real_inputs(alpha, epsilon, t)?;
    match initial {
        InitialFock::F00 if !couplings_equal(alpha, epsilon) => {
            // General vacuum formula in terms of the two eigenfrequencies.
            let f = DerivedFrequencies::new(alpha, epsilon);
            let g2 = f.gamma_freq * f.gamma_freq;
            if g2 == 0.0 {
                return Err(Error::InvalidParams(
                    "alpha and epsilon cannot both vanish".into(),
                ));
            }
            let omega = [f.omega_1, f.omega_2];
            let mut x = 0.0;
            for j in 1..=2usize {
                let oj = omega[j - 1];
                let ok = omega[2 - j];
                let sign = if j == 1 { -1.0 } else { 1.0 };
                x += oj / g2
                    * (epsilon * (0.5 * ok * t).cos()
                        - (epsilon + sign * f.gamma_freq) * (0.5 * oj * t).cos())
                    * (0.5 * ok * t).sin();
            }
            measures::cal_e(x.abs().min(1.0))
        }
        _ => {
            if !couplings_equal(alpha, epsilon) {
                return Err(Error::UnsupportedRegime(format!(
                    "initial Fock states other than |00> require alpha = epsilon, \
                     got alpha={alpha}, epsilon={epsilon}"
                )));
            }
            // Equal couplings: one expression covers all initial Fock
            // states through the sign (−1)^(k−l).
            let sign = initial.entropy_sign();
            let r5 = 5f64.sqrt();
            let x = 0.2
                * ((4.0 + (r5 * alpha * t).cos()) * (alpha * t).sin()
                    - sign * r5 * (alpha * t).cos() * (r5 * alpha * t).sin());
            measures::cal_e(x.abs().min(1.0))
        }
    }
}

/// Entropy of entanglement (ebits) of the two-pump (β = α) closed forms.
///
/// The initial vacuum has an explicit formula; the other initial Fock
/// states are evaluated from their closed-form amplitudes.
pub fn entropy_two_pump(alpha: f64, epsilon: f64, t: f64, initial: InitialFock) -> Result<f64> {
    require_real_inputs(alpha, epsilon, t)?;
    match initial {
        InitialFock::F00 => {
            let lambda = DerivedFrequencies::new(alpha, epsilon).lambda;
            if lambda == 0.0 {
                return Err(Error::InvalidParams(
                    "alpha and epsilon cannot both vanish".into(),
                ));
            }
            let inner = C64::new(
                16.0 * alpha * alpha + epsilon * epsilon * (lambda * t).cos(),
                epsilon * lambda * (lambda * t).sin(),
            );
            let x = 0.5
                * (C64::new(1.0, 0.0)
                    - (-C64::i() * epsilon * t).exp() * inner / (lambda * lambda))
                    .norm();
            measures::cal_e(x.min(1.0))
        }
        _ => {
            let pair = two_pump_amplitudes(alpha, epsilon, t, initial)?;
            measures::entropy_of_entanglement_qubit(&pair)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::amplitude_rhs;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ALL_INITIALS: [InitialFock; 4] = [
        InitialFock::F00,
        InitialFock::F01,
        InitialFock::F10,
        InitialFock::F11,
    ];

    fn max_amp_diff(a: &TruncatedQubitPair, b: &TruncatedQubitPair) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn initial_conditions_hold_at_t_zero() {
        for initial in ALL_INITIALS {
            let sp = single_pump_amplitudes(7e5, 7e5, 0.0, initial).unwrap();
            assert!(max_amp_diff(&sp, &TruncatedQubitPair::basis(initial)) < 1e-14);
            let tp = two_pump_amplitudes(6e5, 3e5, 0.0, initial).unwrap();
            assert!(max_amp_diff(&tp, &TruncatedQubitPair::basis(initial)) < 1e-14);
        }
        let general = single_pump_amplitudes(5e5, 2e5, 0.0, InitialFock::F00).unwrap();
        assert!(max_amp_diff(&general, &TruncatedQubitPair::basis(InitialFock::F00)) < 1e-14);
    }

    #[test]
    fn general_vacuum_solution_reduces_at_equal_couplings() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let alpha = rng.gen_range(1e5..3e6);
            let t = rng.gen_range(0.0..10.0) / alpha;
            let general = single_pump_amplitudes(alpha, alpha, t, InitialFock::F00).unwrap();
            let special = single_pump_amplitudes_equal_couplings(alpha, t, InitialFock::F00);
            assert!(
                max_amp_diff(&general, &special) < 1e-10,
                "deviation {}",
                max_amp_diff(&general, &special)
            );
        }
    }

    #[test]
    fn closed_forms_stay_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let alpha = rng.gen_range(1e5..3e6);
            let eps = rng.gen_range(1e5..3e6);
            let t = rng.gen_range(0.0..10.0) / alpha;
            let sp = single_pump_amplitudes(alpha, eps, t, InitialFock::F00).unwrap();
            assert_abs_diff_eq!(sp.norm_sqr(), 1.0, epsilon = 1e-12);
            let tp = two_pump_amplitudes(alpha, eps, t, InitialFock::F00).unwrap();
            assert_abs_diff_eq!(tp.norm_sqr(), 1.0, epsilon = 1e-12);
            for initial in [InitialFock::F01, InitialFock::F10, InitialFock::F11] {
                let s = single_pump_amplitudes_equal_couplings(alpha, t, initial);
                assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
                let p = two_pump_amplitudes(alpha, eps, t, initial).unwrap();
                assert_abs_diff_eq!(p.norm_sqr(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn two_pump_structure_constraints() {
        // c01 = c10 and c11 = c00 - 1, exactly as constructed.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let alpha = rng.gen_range(1e5..3e6);
            let eps = rng.gen_range(1e5..3e6);
            let t = rng.gen_range(0.0..10.0) / alpha;
            let c = two_pump_amplitudes(alpha, eps, t, InitialFock::F00).unwrap();
            assert_eq!(c.c01, c.c10);
            assert!((c.c11 - (c.c00 - C64::new(1.0, 0.0))).norm() < 1e-15);
        }
    }

    #[test]
    fn frequency_identity() {
        // (gamma + eps) * Omega_2 = (gamma - eps) * Omega_1, relative 1e-9.
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let alpha = rng.gen_range(1e5..3e6);
            let eps = rng.gen_range(1e4..3e6);
            let f = DerivedFrequencies::new(alpha, eps);
            let lhs = (f.gamma_freq + eps) * f.omega_2;
            let rhs = (f.gamma_freq - eps) * f.omega_1;
            let direct =
                2.0 * (alpha * alpha * (f.gamma_freq * f.gamma_freq - eps * eps)).sqrt();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
            assert_relative_eq!(lhs, direct, max_relative = 1e-9);
        }
    }

    #[test]
    fn symmetric_c10_matches_literal_prefactor() {
        // -i (gamma+eps) Omega_2 / (4 alpha gamma) (sin t1 + sin t2)
        // equals the -i (alpha/gamma)(sin t1 + sin t2) form used here.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let alpha = rng.gen_range(1e5..3e6);
            let eps = rng.gen_range(1e4..3e6);
            let t = rng.gen_range(0.0..10.0) / alpha;
            let f = DerivedFrequencies::new(alpha, eps);
            let (t1, t2) = (0.5 * f.omega_1 * t, 0.5 * f.omega_2 * t);
            let literal = (f.gamma_freq + eps) * f.omega_2 / (4.0 * alpha * f.gamma_freq)
                * (t1.sin() + t2.sin());
            let c = single_pump_amplitudes(alpha, eps, t, InitialFock::F00).unwrap();
            assert_abs_diff_eq!(c.c10.im, -literal, epsilon = 1e-9);
        }
    }

    #[test]
    fn rhs_reads_off_the_truncated_equations() {
        // c = |00>, beta = 0: dc10/dt = -i alpha, dc00/dt = 0.
        let p = SystemParams::unitary(
            1e8,
            1e8,
            C64::new(5e5, 0.0),
            C64::new(0.0, 0.0),
            C64::new(3e5, 0.0),
        );
        let d = truncated_ode_rhs(&p, &TruncatedQubitPair::basis(InitialFock::F00));
        assert!((d.c10 - -C64::i() * p.alpha).norm() < 1e-9);
        assert!(d.c00.norm() < 1e-15);
        assert!(d.c01.norm() < 1e-15);

        // beta != 0 additionally drives dc01/dt = -i beta.
        let p2 = SystemParams::unitary(
            1e8,
            1e8,
            C64::new(5e5, 0.0),
            C64::new(2e5, 1e5),
            C64::new(3e5, 0.0),
        );
        let d2 = truncated_ode_rhs(&p2, &TruncatedQubitPair::basis(InitialFock::F00));
        assert!((d2.c01 - -C64::i() * p2.beta).norm() < 1e-9);
    }

    #[test]
    fn rhs_is_qubit_block_of_full_amplitude_equations() {
        let dims = FockDims::new(6, 6).unwrap();
        let p = SystemParams::unitary(
            1e8,
            1.2e8,
            C64::new(4e5, 1e5),
            C64::new(-2e5, 3e5),
            C64::new(2e5, -1e5),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let raw = TruncatedQubitPair::new(
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            );
            let norm = raw.norm_sqr().sqrt();
            let pair = TruncatedQubitPair::new(
                raw.c00 / norm,
                raw.c01 / norm,
                raw.c10 / norm,
                raw.c11 / norm,
            );
            let full = amplitude_rhs(&p, dims, &pair.embed(dims).unwrap()).unwrap();
            let block = truncated_ode_rhs(&p, &pair);
            // On subspace-confined states the qubit block of the full
            // equations matches the four-state system exactly: terms that
            // leave the subspace do not feed back into it.
            let expected = [
                full[dims.index(0, 0).unwrap()],
                full[dims.index(0, 1).unwrap()],
                full[dims.index(1, 0).unwrap()],
                full[dims.index(1, 1).unwrap()],
            ];
            for (got, want) in block.amplitudes().iter().zip(expected) {
                assert!((got - want).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn truncated_rhs_matches_truncated_hamiltonian() {
        let p = SystemParams::unitary(
            1e8,
            1e8,
            C64::new(4e5, 1e5),
            C64::new(-2e5, 3e5),
            C64::new(2e5, -1e5),
        );
        let h = truncated_hamiltonian(&p);
        assert!((h - h.adjoint()).iter().all(|z| z.norm() < 1e-12));
        let pair = TruncatedQubitPair::new(
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.5),
            C64::new(-0.5, 0.0),
            C64::new(0.0, -0.5),
        );
        let rhs = truncated_ode_rhs(&p, &pair);
        let v = Vector4::from_row_slice(&pair.amplitudes());
        let hv = h * v * -C64::i();
        for (got, want) in rhs.amplitudes().iter().zip(hv.iter()) {
            assert!((got - want).norm() < 1e-9);
        }
    }

    #[test]
    fn exact_propagator_matches_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let alpha = rng.gen_range(1e5..3e6);
            let eps = rng.gen_range(1e5..3e6);
            let t = rng.gen_range(0.0..10.0) / alpha;

            let p = SystemParams::unitary(
                1e8,
                1e8,
                C64::new(alpha, 0.0),
                C64::new(0.0, 0.0),
                C64::new(eps, 0.0),
            );
            let exact =
                truncated_propagate(&p, &TruncatedQubitPair::basis(InitialFock::F00), t).unwrap();
            let closed = single_pump_amplitudes(alpha, eps, t, InitialFock::F00).unwrap();
            assert!(max_amp_diff(&exact, &closed) < 1e-10);

            let p2 = SystemParams::unitary(
                1e8,
                1e8,
                C64::new(alpha, 0.0),
                C64::new(alpha, 0.0),
                C64::new(eps, 0.0),
            );
            let exact2 =
                truncated_propagate(&p2, &TruncatedQubitPair::basis(InitialFock::F00), t).unwrap();
            let closed2 = two_pump_amplitudes(alpha, eps, t, InitialFock::F00).unwrap();
            assert!(max_amp_diff(&exact2, &closed2) < 1e-10);
        }
    }

    #[test]
    fn entropy_vanishes_at_t_zero() {
        assert_abs_diff_eq!(
            entropy_single_pump(7e5, 7e5, 0.0, InitialFock::F00).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            entropy_single_pump(7e5, 2e5, 0.0, InitialFock::F00).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            entropy_two_pump(7e5, 2e5, 0.0, InitialFock::F00).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn entropy_symmetries_between_initial_states() {
        // E(00) = E(11) and E(01) = E(10) pointwise.
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let alpha = rng.gen_range(1e5..3e6);
            let t = rng.gen_range(0.0..20.0) / alpha;
            let e00 = entropy_single_pump(alpha, alpha, t, InitialFock::F00).unwrap();
            let e11 = entropy_single_pump(alpha, alpha, t, InitialFock::F11).unwrap();
            let e01 = entropy_single_pump(alpha, alpha, t, InitialFock::F01).unwrap();
            let e10 = entropy_single_pump(alpha, alpha, t, InitialFock::F10).unwrap();
            assert_abs_diff_eq!(e00, e11, epsilon = 1e-12);
            assert_abs_diff_eq!(e01, e10, epsilon = 1e-12);

            let eps = rng.gen_range(1e5..3e6);
            let f00 = entropy_two_pump(alpha, eps, t, InitialFock::F00).unwrap();
            let f11 = entropy_two_pump(alpha, eps, t, InitialFock::F11).unwrap();
            let f01 = entropy_two_pump(alpha, eps, t, InitialFock::F01).unwrap();
            let f10 = entropy_two_pump(alpha, eps, t, InitialFock::F10).unwrap();
            assert_abs_diff_eq!(f00, f11, epsilon = 1e-12);
            assert_abs_diff_eq!(f01, f10, epsilon = 1e-12);
        }
    }

    #[test]
    fn entropy_formulas_match_their_amplitudes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let alpha = rng.gen_range(1e5..3e6);
            let eps = rng.gen_range(1e5..3e6);
            let t = rng.gen_range(0.0..10.0) / alpha;

            // General vacuum formula vs generic entropy of the amplitudes.
            let e = entropy_single_pump(alpha, eps, t, InitialFock::F00).unwrap();
            let pair = single_pump_amplitudes(alpha, eps, t, InitialFock::F00).unwrap();
            let generic = measures::entropy_of_entanglement_qubit(&pair).unwrap();
            assert_abs_diff_eq!(e, generic, epsilon = 1e-9);

            // Two-pump vacuum formula likewise.
            let e2 = entropy_two_pump(alpha, eps, t, InitialFock::F00).unwrap();
            let pair2 = two_pump_amplitudes(alpha, eps, t, InitialFock::F00).unwrap();
            let generic2 = measures::entropy_of_entanglement_qubit(&pair2).unwrap();
            assert_abs_diff_eq!(e2, generic2, epsilon = 1e-9);

            // Equal-coupling generalized formula for every initial state.
            for initial in ALL_INITIALS {
                let ef = entropy_single_pump(alpha, alpha, t, initial).unwrap();
                let pf = single_pump_amplitudes(alpha, alpha, t, initial).unwrap();
                let gf = measures::entropy_of_entanglement_qubit(&pf).unwrap();
                assert_abs_diff_eq!(ef, gf, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn unequal_couplings_rejected_for_excited_initials() {
        for initial in [InitialFock::F01, InitialFock::F10, InitialFock::F11] {
            assert!(matches!(
                single_pump_amplitudes(5e5, 2e5, 1e-6, initial),
                Err(Error::UnsupportedRegime(_))
            ));
            assert!(matches!(
                entropy_single_pump(5e5, 2e5, 1e-6, initial),
                Err(Error::UnsupportedRegime(_))
            ));
        }
    }
}

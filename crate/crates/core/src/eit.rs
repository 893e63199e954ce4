//! Achievable Kerr nonlinearity from the resonantly enhanced scheme in a
//! four-level atomic medium: 2χ = 3|g₁₃|²|g₂₄|² n_atom / (Ω² Δω).
//!
//! A pure algebraic estimate; the coupling coefficients are taken as
//! precomputed inputs.

use crate::error::{Error, Result};

/// Inputs of the Kerr-nonlinearity estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EitParams {
    /// Coupling coefficient of the |1⟩↔|3⟩ transition (rad/s).
    pub g13: f64,
    /// Coupling coefficient of the |2⟩↔|4⟩ transition (rad/s).
    pub g24: f64,
    /// Rabi frequency of the classical drive (rad/s).
    pub rabi: f64,
    /// Detuning of the |2⟩↔|4⟩ transition (rad/s).
    pub detuning: f64,
    /// Number of atoms in the cavity.
    pub n_atom: f64,
}

impl EitParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("g13", self.g13),
            ("g24", self.g24),
            ("rabi", self.rabi),
            ("detuning", self.detuning),
            ("n_atom", self.n_atom),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite")));
            }
        }
        if self.rabi == 0.0 {
            return Err(Error::Domain {
                value: self.rabi,
                domain: "rabi != 0",
            });
        }
        if self.detuning == 0.0 {
            return Err(Error::Domain {
                value: self.detuning,
                domain: "detuning != 0",
            });
        }
        if self.n_atom < 1.0 {
            return Err(Error::Domain {
                value: self.n_atom,
                domain: "n_atom >= 1",
            });
        }
        Ok(())
    }
}

/// Estimated Kerr rate plus the adiabatic-elimination validity flag
/// |g₁₃|² n_atom / Ω² < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrEstimate {
    pub chi: f64,
    pub adiabatic_ok: bool,
}

/// Evaluate the estimate; an order-of-magnitude relation implemented as an
/// equality, so the output is labelled an estimate, not a prediction.
pub fn kerr_estimate(p: &EitParams) -> Result<KerrEstimate> {
    p.validate()?;
    let g13_sq = p.g13 * p.g13;
    let g24_sq = p.g24 * p.g24;
    let chi = 1.5 * g13_sq * g24_sq * p.n_atom / (p.rabi * p.rabi * p.detuning);
    let adiabatic_ok = g13_sq * p.n_atom / (p.rabi * p.rabi) < 1.0;
    Ok(KerrEstimate { chi, adiabatic_ok })
}

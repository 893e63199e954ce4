//! Dissipative evolution dρ/dt = −i[H₁, ρ] + L(ρ) for the standard-damping
//! and phase-damping Liouvillians with thermal reservoirs.
//!
//! Standard damping:
//!   (γ_a/2)([âρ, â†] + [â, ρâ†]) + γ_a n̄_a [[â, ρ], â†]  (+ mode-b terms)
//! Phase damping:
//!   (γ_a/2)(2n̄_a+1)(2n̂ρn̂ − n̂²ρ − ρn̂²) with n̂ = â†â    (+ mode-b terms)
//!
//! The generator is applied with O(d²) shift-scale passes per operator
//! (never dense matrix products); the integrator is the adaptive
//! Dormand-Prince stepper with Hermitian re-symmetrization after every
//! accepted step.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::dynamics::{TimeGrid, Trajectory};
use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, FockDims};
use crate::hamiltonian::{kerr_diagonal, SystemParams};
use crate::ode::Dopri5;

/// Which reservoir coupling model the master equation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DissipationKind {
    /// Photon loss (amplitude plus phase relaxation), with thermal pumping
    /// when n̄ > 0.
    StandardDamping,
    /// Photon-number-preserving scattering (pure dephasing).
    PhaseDamping,
}

/// Default relative tolerance for [`solve_master`].
pub const DEFAULT_REL_TOL: f64 = 1e-9;

const TRACE_DRIFT_TOL: f64 = 1e-8;
const HERM_DRIFT_TOL: f64 = 1e-10;
const EIGENVALUE_FLOOR: f64 = -1e-6;

/// Precomputed generator tables; `apply` evaluates the full right-hand
/// side of the master equation into `out` using one scratch buffer.
struct Generator {
    da: usize,
    db: usize,
    kind: DissipationKind,
    alpha: C64,
    beta: C64,
    epsilon: C64,
    gamma_a: f64,
    gamma_b: f64,
    nbar_a: f64,
    nbar_b: f64,
    kerr: Vec<f64>,
    occ_a: Vec<f64>,
    occ_b: Vec<f64>,
    // Diagonal of the truncated a a† (zero in the top level, not m+1).
    lower_raise_a: Vec<f64>,
    lower_raise_b: Vec<f64>,
    sq_a: Vec<f64>,
    sq_b: Vec<f64>,
}

impl Generator {
    fn new(params: &SystemParams, dims: FockDims, kind: DissipationKind) -> Self {
        let (da, db) = (dims.dim_a(), dims.dim_b());
        let total = dims.total();
        let mut occ_a = vec![0.0; total];
        let mut occ_b = vec![0.0; total];
        let mut lower_raise_a = vec![0.0; total];
        let mut lower_raise_b = vec![0.0; total];
        for i in 0..total {
            let (m, n) = dims.levels(i);
            occ_a[i] = m as f64;
            occ_b[i] = n as f64;
            lower_raise_a[i] = if m + 1 < da { (m + 1) as f64 } else { 0.0 };
            lower_raise_b[i] = if n + 1 < db { (n + 1) as f64 } else { 0.0 };
        }
        Self {
            da,
            db,
            kind,
            alpha: params.alpha,
            beta: params.beta,
            epsilon: params.epsilon,
            gamma_a: params.gamma_a,
            gamma_b: params.gamma_b,
            nbar_a: params.nbar_a,
            nbar_b: params.nbar_b,
            kerr: kerr_diagonal(params, dims),
            occ_a,
            occ_b,
            lower_raise_a,
            lower_raise_b,
            sq_a: (0..=da).map(|m| (m as f64).sqrt()).collect(),
            sq_b: (0..=db).map(|n| (n as f64).sqrt()).collect(),
        }
    }

    fn dim(&self) -> usize {
        self.da * self.db
    }

    fn apply(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>, tmp: &mut DMatrix<C64>) {
        self.elementwise_pass(rho, out);
        self.commutator_offdiag(rho, out);
        if self.kind == DissipationKind::StandardDamping {
            self.standard_sandwiches(rho, out, tmp);
        }
    }

    /// Everything diagonal in the basis-pair (i, j): the Kerr commutator
    /// phases plus the scalar part of the dissipator. Overwrites `out`.
    fn elementwise_pass(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let d = self.dim();
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        match self.kind {
            DissipationKind::StandardDamping => {
                // Scalar part of gamma/2 (2 a rho a† - n rho - rho n)
                // + gamma nbar (a rho a† + a† rho a - rho a a† - n rho):
                // -(gamma/2)(n_i + n_j) - gamma nbar (n_i + (a a†)_j),
                // with the a a† diagonal taken in the truncated space so the
                // generator stays exactly traceless at the edge.
                for j in 0..d {
                    let col = j * d;
                    let g_j = -(self.gamma_a
                        * (0.5 * self.occ_a[j] + self.nbar_a * self.lower_raise_a[j])
                        + self.gamma_b
                            * (0.5 * self.occ_b[j] + self.nbar_b * self.lower_raise_b[j]));
                    let kj = self.kerr[j];
                    for i in 0..d {
                        let real = g_j
                            - self.gamma_a * (0.5 + self.nbar_a) * self.occ_a[i]
                            - self.gamma_b * (0.5 + self.nbar_b) * self.occ_b[i];
                        let imag = -(self.kerr[i] - kj);
                        o[col + i] = C64::new(real, imag) * r[col + i];
                    }
                }
            }
            DissipationKind::PhaseDamping => {
                // -(gamma/2)(2 nbar + 1)(n_i - n_j)^2 per mode.
                let fa = 0.5 * self.gamma_a * (2.0 * self.nbar_a + 1.0);
                let fb = 0.5 * self.gamma_b * (2.0 * self.nbar_b + 1.0);
                for j in 0..d {
                    let col = j * d;
                    let (maj, nbj) = (self.occ_a[j], self.occ_b[j]);
                    let kj = self.kerr[j];
                    for i in 0..d {
                        let dm = self.occ_a[i] - maj;
                        let dn = self.occ_b[i] - nbj;
                        let real = -(fa * dm * dm + fb * dn * dn);
                        let imag = -(self.kerr[i] - kj);
                        o[col + i] = C64::new(real, imag) * r[col + i];
                    }
                }
            }
        }
    }

    /// −i(Hρ − ρH) for the off-diagonal Hamiltonian terms (pumps and the
    /// internal coupling); accumulates into `out`.
    fn commutator_offdiag(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let mi = -C64::i();
        let pi = C64::i();
        let zero = C64::new(0.0, 0.0);
        if self.epsilon != zero {
            self.acc_left_adag_b(mi * self.epsilon, rho, out);
            self.acc_left_a_bdag(mi * self.epsilon.conj(), rho, out);
            self.acc_right_adag_b(pi * self.epsilon, rho, out);
            self.acc_right_a_bdag(pi * self.epsilon.conj(), rho, out);
        }
        if self.alpha != zero {
            self.acc_left_a_raise(mi * self.alpha, rho, out);
            self.acc_left_a_lower(mi * self.alpha.conj(), rho, out);
            self.acc_right_a_raise(pi * self.alpha, rho, out);
            self.acc_right_a_lower(pi * self.alpha.conj(), rho, out);
        }
        if self.beta != zero {
            self.acc_left_b_raise(mi * self.beta, rho, out);
            self.acc_left_b_lower(mi * self.beta.conj(), rho, out);
            self.acc_right_b_raise(pi * self.beta, rho, out);
            self.acc_right_b_lower(pi * self.beta.conj(), rho, out);
        }
    }

    /// Sandwich terms of standard damping:
    /// γ(1+n̄) O ρ O† + γ n̄ O† ρ O per mode, with O the mode's lowering
    /// operator. The scalar anticommutator parts live in the elementwise
    /// pass.
    fn standard_sandwiches(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>, tmp: &mut DMatrix<C64>) {
        let one = C64::new(1.0, 0.0);
        if self.gamma_a > 0.0 {
            tmp.fill(C64::new(0.0, 0.0));
            self.acc_left_a_lower(one, rho, tmp);
            self.acc_right_a_raise(
                C64::new(self.gamma_a * (1.0 + self.nbar_a), 0.0),
                tmp,
                out,
            );
            if self.nbar_a > 0.0 {
                tmp.fill(C64::new(0.0, 0.0));
                self.acc_left_a_raise(one, rho, tmp);
                self.acc_right_a_lower(C64::new(self.gamma_a * self.nbar_a, 0.0), tmp, out);
            }
        }
        if self.gamma_b > 0.0 {
            tmp.fill(C64::new(0.0, 0.0));
            self.acc_left_b_lower(one, rho, tmp);
            self.acc_right_b_raise(
                C64::new(self.gamma_b * (1.0 + self.nbar_b), 0.0),
                tmp,
                out,
            );
            if self.nbar_b > 0.0 {
                tmp.fill(C64::new(0.0, 0.0));
                self.acc_left_b_raise(one, rho, tmp);
                self.acc_right_b_lower(C64::new(self.gamma_b * self.nbar_b, 0.0), tmp, out);
            }
        }
    }

    // Left applications act on the row index (blocks of length db per
    // mode-a level); right applications are whole-column operations.

    /// out += fac · (â ρ): row (m, n) ← √(m+1) · row (m+1, n).
    fn acc_left_a_lower(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for col in 0..d {
            let base = col * d;
            for m in 0..da - 1 {
                let cfac = fac * self.sq_a[m + 1];
                let dst = base + m * db;
                let src = base + (m + 1) * db;
                for k in 0..db {
                    o[dst + k] += cfac * r[src + k];
                }
            }
        }
    }

    /// out += fac · (↠ρ): row (m, n) ← √m · row (m−1, n).
    fn acc_left_a_raise(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for col in 0..d {
            let base = col * d;
            for m in 1..da {
                let cfac = fac * self.sq_a[m];
                let dst = base + m * db;
                let src = base + (m - 1) * db;
                for k in 0..db {
                    o[dst + k] += cfac * r[src + k];
                }
            }
        }
    }

    /// out += fac · (b̂ ρ): row (m, n) ← √(n+1) · row (m, n+1).
    fn acc_left_b_lower(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for col in 0..d {
            let base = col * d;
            for m in 0..da {
                let row0 = base + m * db;
                for n in 0..db - 1 {
                    o[row0 + n] += fac * self.sq_b[n + 1] * r[row0 + n + 1];
                }
            }
        }
    }

    /// out += fac · (b̂† ρ): row (m, n) ← √n · row (m, n−1).
    fn acc_left_b_raise(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for col in 0..d {
            let base = col * d;
            for m in 0..da {
                let row0 = base + m * db;
                for n in (1..db).rev() {
                    o[row0 + n] += fac * self.sq_b[n] * r[row0 + n - 1];
                }
            }
        }
    }

    /// out += fac · (â†b̂ ρ): row (m, n) ← √(m(n+1)) · row (m−1, n+1).
    fn acc_left_adag_b(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for col in 0..d {
            let base = col * d;
            for m in 1..da {
                let dst = base + m * db;
                let src = base + (m - 1) * db;
                let sa = self.sq_a[m];
                for n in 0..db - 1 {
                    o[dst + n] += fac * sa * self.sq_b[n + 1] * r[src + n + 1];
                }
            }
        }
    }

    /// out += fac · (âb̂† ρ): row (m, n) ← √((m+1)n) · row (m+1, n−1).
    fn acc_left_a_bdag(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for col in 0..d {
            let base = col * d;
            for m in 0..da - 1 {
                let dst = base + m * db;
                let src = base + (m + 1) * db;
                let sa = self.sq_a[m + 1];
                for n in 1..db {
                    o[dst + n] += fac * sa * self.sq_b[n] * r[src + n - 1];
                }
            }
        }
    }

    /// out += fac · (ρ â): column (m, n) ← √m · column (m−1, n).
    fn acc_right_a_lower(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for m in 1..da {
            let cfac = fac * self.sq_a[m];
            for n in 0..db {
                let dst = (m * db + n) * d;
                let src = ((m - 1) * db + n) * d;
                for k in 0..d {
                    o[dst + k] += cfac * r[src + k];
                }
            }
        }
    }

    /// out += fac · (ρ â†): column (m, n) ← √(m+1) · column (m+1, n).
    fn acc_right_a_raise(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for m in 0..da - 1 {
            let cfac = fac * self.sq_a[m + 1];
            for n in 0..db {
                let dst = (m * db + n) * d;
                let src = ((m + 1) * db + n) * d;
                for k in 0..d {
                    o[dst + k] += cfac * r[src + k];
                }
            }
        }
    }

    /// out += fac · (ρ b̂): column (m, n) ← √n · column (m, n−1).
    fn acc_right_b_lower(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for m in 0..da {
            for n in 1..db {
                let cfac = fac * self.sq_b[n];
                let dst = (m * db + n) * d;
                let src = (m * db + n - 1) * d;
                for k in 0..d {
                    o[dst + k] += cfac * r[src + k];
                }
            }
        }
    }

    /// out += fac · (ρ b̂†): column (m, n) ← √(n+1) · column (m, n+1).
    fn acc_right_b_raise(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for m in 0..da {
            for n in 0..db - 1 {
                let cfac = fac * self.sq_b[n + 1];
                let dst = (m * db + n) * d;
                let src = (m * db + n + 1) * d;
                for k in 0..d {
                    o[dst + k] += cfac * r[src + k];
                }
            }
        }
    }

    /// out += fac · (ρ â†b̂): column (m, n) ← √((m+1)n) · column (m+1, n−1).
    fn acc_right_adag_b(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for m in 0..da - 1 {
            for n in 1..db {
                let cfac = fac * self.sq_a[m + 1] * self.sq_b[n];
                let dst = (m * db + n) * d;
                let src = ((m + 1) * db + n - 1) * d;
                for k in 0..d {
                    o[dst + k] += cfac * r[src + k];
                }
            }
        }
    }

    /// out += fac · (ρ âb̂†): column (m, n) ← √(m(n+1)) · column (m−1, n+1).
    fn acc_right_a_bdag(&self, fac: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let (da, db, d) = (self.da, self.db, self.dim());
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        for m in 1..da {
            for n in 0..db - 1 {
                let cfac = fac * self.sq_a[m] * self.sq_b[n + 1];
                let dst = (m * db + n) * d;
                let src = ((m - 1) * db + n + 1) * d;
                for k in 0..d {
                    o[dst + k] += cfac * r[src + k];
                }
            }
        }
    }
}

fn check_initial(rho: &DensityMatrix) -> Result<()> {
    let dev = rho.hermiticity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(Error::InvalidParams(format!(
            "initial density matrix trace {tr} is not 1"
        )));
    }
    Ok(())
}

fn hermitize(m: &mut DMatrix<C64>) {
    let n = m.nrows();
    for j in 0..n {
        for i in 0..j {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
        m[(j, j)] = C64::new(m[(j, j)].re, 0.0);
    }
}

/// Right-hand side of the master equation at `rho`.
pub fn liouvillian_rhs(
    rho: &DensityMatrix,
    params: &SystemParams,
    kind: DissipationKind,
) -> Result<DMatrix<C64>> {
    params.validate()?;
    let dims = rho.dims();
    let gen = Generator::new(params, dims, kind);
    let d = dims.total();
    let mut out = DMatrix::zeros(d, d);
    let mut tmp = DMatrix::zeros(d, d);
    gen.apply(rho.matrix(), &mut out, &mut tmp);
    Ok(out)
}

/// Integrate the master equation across `grid`, returning the density
/// matrix at every grid point.
///
/// Along the trajectory the trace is required to stay within 1e-8 of one,
/// Hermiticity is enforced by symmetrization after each accepted step, and
/// eigenvalues may not dip below −1e-6; violations abort with a
/// diagnostic error carrying the offending time.
pub fn solve_master(
    rho0: &DensityMatrix,
    params: &SystemParams,
    kind: DissipationKind,
    grid: &TimeGrid,
    rel_tol: f64,
) -> Result<Trajectory<DensityMatrix>> {
    params.validate()?;
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "relative tolerance must be positive, got {rel_tol}"
        )));
    }
    check_initial(rho0)?;

    let dims = rho0.dims();
    let gen = Generator::new(params, dims, kind);
    let d = dims.total();
    let mut tmp = DMatrix::zeros(d, d);
    let solver = Dopri5 {
        rtol: rel_tol,
        atol: rel_tol * 1e-3,
    };
    let mut states: Vec<DensityMatrix> = Vec::with_capacity(grid.len());
    solver.integrate(
        |y, out| gen.apply(y, out, &mut tmp),
        rho0.matrix(),
        grid.points(),
        hermitize,
        |_, y| {
            states.push(DensityMatrix::new(dims, y.clone()).expect("dims preserved"));
        },
    )?;
    let traj = Trajectory::new(grid.clone(), states)?;

    for (t, rho) in traj.iter() {
        let tr = rho.trace();
        let drift = ((tr.re - 1.0).powi(2) + tr.im.powi(2)).sqrt();
        if drift > TRACE_DRIFT_TOL {
            return Err(Error::ConservationViolation {
                what: "trace drift",
                t,
                value: drift,
            });
        }
        let herm = rho.hermiticity_deviation();
        if herm > HERM_DRIFT_TOL {
            return Err(Error::ConservationViolation {
                what: "hermiticity deviation",
                t,
                value: herm,
            });
        }
        let floor = rho.min_eigenvalue()?;
        if floor < EIGENVALUE_FLOOR {
            return Err(Error::ConservationViolation {
                what: "eigenvalue floor",
                t,
                value: floor,
            });
        }
    }
    Ok(traj)
}

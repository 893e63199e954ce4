//! Embedded Dormand-Prince 5(4) stepper for matrix-valued ODEs.
//!
//! Used by the master-equation solver; the right-hand side is applied
//! directly to the density matrix, steps are clamped onto requested output
//! times, and a post-acceptance hook lets the caller re-symmetrize the
//! state after every accepted step.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

// Fifth-order weights; the seventh stage is FSAL.
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// b - b_hat, for the embedded fourth-order error estimate.
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 + 92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const SHRINK_LIMIT: f64 = 0.2;
const GROW_LIMIT: f64 = 5.0;
const MAX_STEPS: u64 = 50_000_000;

pub(crate) struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
}

struct Work {
    k: [DMatrix<C64>; 7],
    ytmp: DMatrix<C64>,
    ynew: DMatrix<C64>,
}

impl Dopri5 {
    /// Integrate from `grid[0]` with initial value `y0`, invoking
    /// `emit(index, y)` at every grid point (including the first) and
    /// `post_accept(y)` after each accepted step.
    pub fn integrate<F, P, O>(
        &self,
        mut rhs: F,
        y0: &DMatrix<C64>,
        grid: &[f64],
        mut post_accept: P,
        mut emit: O,
    ) -> Result<()>
    where
        F: FnMut(&DMatrix<C64>, &mut DMatrix<C64>),
        P: FnMut(&mut DMatrix<C64>),
        O: FnMut(usize, &DMatrix<C64>),
    {
        let mut y = y0.clone();
        let mut t = grid[0];
        emit(0, &y);
        if grid.len() == 1 {
            return Ok(());
        }
        let t_end = *grid.last().unwrap();
        let span = t_end - t;

        let zero = DMatrix::<C64>::zeros(y.nrows(), y.ncols());
        let mut w = Work {
            k: [(); 7].map(|_| zero.clone()),
            ytmp: zero.clone(),
            ynew: zero,
        };

        let mut h = span * 1e-6;
        let h_floor = span * 1e-14;
        let mut next_out = 1usize;
        let mut k1_fresh = false;
        let mut steps: u64 = 0;

        while next_out < grid.len() {
            if steps >= MAX_STEPS {
                return Err(Error::IntegrationFailure {
                    t,
                    reason: "step budget exhausted",
                });
            }
            steps += 1;

            // Clamp the step onto the next output time.
            let mut h_step = h.min(t_end - t);
            let hits_output = t + h_step >= grid[next_out] - h_floor;
            if hits_output {
                h_step = grid[next_out] - t;
            }

            if !k1_fresh {
                rhs(&y, &mut w.k[0]);
                k1_fresh = true;
            }
            stages(&mut rhs, &y, h_step, &mut w);

            let err = error_norm(&w, &y, h_step, self.rtol, self.atol);
            if err <= 1.0 {
                t += h_step;
                std::mem::swap(&mut y, &mut w.ynew);
                post_accept(&mut y);
                // FSAL: stage 7 is the RHS at the accepted state (the
                // post-acceptance symmetrization is roundoff-sized).
                w.k.swap(0, 6);
                if hits_output {
                    emit(next_out, &y);
                    next_out += 1;
                }
                let grow = if err == 0.0 {
                    GROW_LIMIT
                } else {
                    (SAFETY * err.powf(-0.2)).min(GROW_LIMIT)
                };
                h = (h * grow.max(SHRINK_LIMIT)).min(span);
            } else {
                h = h_step * (SAFETY * err.powf(-0.2)).max(SHRINK_LIMIT);
                if h < h_floor {
                    return Err(Error::IntegrationFailure {
                        t,
                        reason: "step size underflow",
                    });
                }
            }
        }
        Ok(())
    }
}

fn stages<F>(rhs: &mut F, y: &DMatrix<C64>, h: f64, w: &mut Work)
where
    F: FnMut(&DMatrix<C64>, &mut DMatrix<C64>),
{
    combine(&mut w.ytmp, y, h, &[(A21, &w.k[0])]);
    let (_, hi) = w.k.split_at_mut(1);
    rhs(&w.ytmp, &mut hi[0]);

    combine(&mut w.ytmp, y, h, &[(A31, &w.k[0]), (A32, &w.k[1])]);
    let (_, hi) = w.k.split_at_mut(2);
    rhs(&w.ytmp, &mut hi[0]);

    combine(
        &mut w.ytmp,
        y,
        h,
        &[(A41, &w.k[0]), (A42, &w.k[1]), (A43, &w.k[2])],
    );
    let (_, hi) = w.k.split_at_mut(3);
    rhs(&w.ytmp, &mut hi[0]);

    combine(
        &mut w.ytmp,
        y,
        h,
        &[(A51, &w.k[0]), (A52, &w.k[1]), (A53, &w.k[2]), (A54, &w.k[3])],
    );
    let (_, hi) = w.k.split_at_mut(4);
    rhs(&w.ytmp, &mut hi[0]);

    combine(
        &mut w.ytmp,
        y,
        h,
        &[
            (A61, &w.k[0]),
            (A62, &w.k[1]),
            (A63, &w.k[2]),
            (A64, &w.k[3]),
            (A65, &w.k[4]),
        ],
    );
    let (_, hi) = w.k.split_at_mut(5);
    rhs(&w.ytmp, &mut hi[0]);

    // Fifth-order solution; its RHS is the FSAL stage 7.
    combine(
        &mut w.ynew,
        y,
        h,
        &[
            (B1, &w.k[0]),
            (B3, &w.k[2]),
            (B4, &w.k[3]),
            (B5, &w.k[4]),
            (B6, &w.k[5]),
        ],
    );
    let (_, hi) = w.k.split_at_mut(6);
    rhs(&w.ynew, &mut hi[0]);
}

/// out = y + h * sum(c_i * k_i)
fn combine(out: &mut DMatrix<C64>, y: &DMatrix<C64>, h: f64, terms: &[(f64, &DMatrix<C64>)]) {
    let out_s = out.as_mut_slice();
    out_s.copy_from_slice(y.as_slice());
    for &(c, k) in terms {
        let hc = h * c;
        for (o, v) in out_s.iter_mut().zip(k.as_slice()) {
            *o += hc * v;
        }
    }
}

/// Scaled RMS norm of the embedded error estimate.
fn error_norm(w: &Work, y: &DMatrix<C64>, h: f64, rtol: f64, atol: f64) -> f64 {
    let n = y.len();
    let (k1, k3, k4, k5, k6, k7) = (
        w.k[0].as_slice(),
        w.k[2].as_slice(),
        w.k[3].as_slice(),
        w.k[4].as_slice(),
        w.k[5].as_slice(),
        w.k[6].as_slice(),
    );
    let y_s = y.as_slice();
    let ynew_s = w.ynew.as_slice();
    let mut acc = 0.0;
    for i in 0..n {
        let err =
            h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let scale = atol + rtol * y_s[i].norm().max(ynew_s[i].norm());
        let r = err.norm() / scale;
        acc += r * r;
    }
    (acc / n as f64).sqrt()
}

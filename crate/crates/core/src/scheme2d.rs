//! Two-dimensional Lax-Wendroff scheme with the cross-derivative stabilizer.
//!
//! A step is split as `u_next = u - w + v` with
//! `v = -alpha D1_0 u - beta D2_0 u` and
//! `w = -(alpha^2/2) Lap1 u - (beta^2/2) Lap2 u - alpha beta D1_0 D2_0 u
//!      + ((alpha^2 + beta^2)/8) Lap1 Lap2 u`.

use crate::energy::{self, EnergyBreakdown};
use crate::error::{Error, Result};
use crate::grid::{CflMode, CflPair, Field2D, InteriorArray};
use crate::stencils::ops;

/// `v` on the interior.
pub fn compute_v(u: &Field2D, cfl: &CflPair) -> InteriorArray {
    let o = ops();
    let (alpha, beta) = (cfl.alpha, cfl.beta);
    InteriorArray::from_fn(u.nx(), u.ny(), |j, k| {
        let (j, k) = (j as isize, k as isize);
        -alpha * o.d10.eval(u, j, k) - beta * o.d20.eval(u, j, k)
    })
}

/// `w` on the interior.
pub fn compute_w(u: &Field2D, cfl: &CflPair) -> InteriorArray {
    let o = ops();
    let (alpha, beta) = (cfl.alpha, cfl.beta);
    let (a2, b2) = (alpha * alpha, beta * beta);
    InteriorArray::from_fn(u.nx(), u.ny(), |j, k| {
        let (j, k) = (j as isize, k as isize);
        -0.5 * a2 * o.lap1.eval(u, j, k) - 0.5 * b2 * o.lap2.eval(u, j, k)
            - alpha * beta * o.d10_d20.eval(u, j, k)
            + (a2 + b2) / 8.0 * o.lap1_lap2.eval(u, j, k)
    })
}

/// One step after checking `cfl` against `mode`.
pub fn step_2d(u: &Field2D, cfl: &CflPair, mode: CflMode) -> Result<Field2D> {
    cfl.admit(mode)?;
    step_unchecked(u, cfl)
}

/// One step through the `v`/`w` split, without CFL admission.
pub fn step_unchecked(u: &Field2D, cfl: &CflPair) -> Result<Field2D> {
    let v = compute_v(u, cfl);
    let w = compute_w(u, cfl);
    let mut next = Field2D::zeros(u.nx(), u.ny());
    for k in 0..u.ny() {
        for j in 0..u.nx() {
            let (jj, kk) = (j as isize, k as isize);
            next.set(jj, kk, u.at(jj, kk) - w.get(j, k) + v.get(j, k));
        }
    }
    next.fill_ghosts();
    if !next.all_finite() {
        return Err(Error::NonFinite { step: 0 });
    }
    Ok(next)
}

/// Reference step from the expanded nine-point formula.
pub fn step_direct(u: &Field2D, cfl: &CflPair) -> Field2D {
    let (al, be) = (cfl.alpha, cfl.beta);
    let mut next = Field2D::zeros(u.nx(), u.ny());
    for k in 0..u.ny() as isize {
        for j in 0..u.nx() as isize {
            let p = |dj: isize, dk: isize| u.at(j + dj, k + dk);
            let val = p(0, 0) - al / 2.0 * (p(1, 0) - p(-1, 0)) - be / 2.0 * (p(0, 1) - p(0, -1))
                + al * al / 2.0 * (p(1, 0) - 2.0 * p(0, 0) + p(-1, 0))
                + be * be / 2.0 * (p(0, 1) - 2.0 * p(0, 0) + p(0, -1))
                + al * be / 4.0 * (p(1, 1) - p(1, -1) - p(-1, 1) + p(-1, -1))
                - (al * al + be * be) / 8.0
                    * (p(1, 1) - 2.0 * p(1, 0) + p(1, -1) - 2.0 * p(0, 1) + 4.0 * p(0, 0)
                        - 2.0 * p(0, -1)
                        + p(-1, 1)
                        - 2.0 * p(-1, 0)
                        + p(-1, -1));
            next.set(j, k, val);
        }
    }
    next.fill_ghosts();
    next
}

/// What `run` reports to its observer after each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Tracking {
    #[default]
    Off,
    /// Weighted norm of the new state only.
    Norm,
    /// Norm plus the full breakdown of the increment (needs data away from
    /// the far edges).
    Breakdown,
}

#[derive(Debug, Clone)]
pub struct StepRecord {
    /// Index `n` of the step `u^n -> u^{n+1}`.
    pub step: usize,
    /// `||u^{n+1}||^2` in the weighted norm.
    pub norm_sq: f64,
    pub breakdown: Option<EnergyBreakdown>,
}

/// Applies `steps` steps, reporting to `observer` unless tracking is off.
pub fn run(
    u0: &Field2D,
    cfl: &CflPair,
    mode: CflMode,
    steps: usize,
    tracking: Tracking,
    mut observer: impl FnMut(&StepRecord, &Field2D),
) -> Result<Field2D> {
    cfl.admit(mode)?;
    let mut current = u0.clone();
    for n in 0..steps {
        let breakdown = match tracking {
            Tracking::Breakdown => Some(energy::breakdown(&current, cfl)?),
            _ => None,
        };
        let next = step_unchecked(&current, cfl).map_err(|e| match e {
            Error::NonFinite { .. } => Error::NonFinite { step: n },
            other => other,
        })?;
        if tracking != Tracking::Off {
            let record = StepRecord {
                step: n,
                norm_sq: energy::norm_sq(&next),
                breakdown,
            };
            observer(&record, &current);
        }
        current = next;
    }
    Ok(current)
}

//! Difference and averaging operators as weighted offset lists.
//!
//! Each [`StencilOp`] expands to a [`Stencil`]; composite operators such as
//! `D1+ D2+` or `Lap1 Lap2` are built with [`Stencil::compose`] (offset
//! convolution) and never written out by hand.

use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::grid::Field2D;

/// The twelve elementary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StencilOp {
    D1Plus,
    D1Minus,
    D2Plus,
    D2Minus,
    D1Center,
    D2Center,
    Lap1,
    Lap2,
    A1Plus,
    A1Minus,
    A2Plus,
    A2Minus,
}

impl StencilOp {
    pub const ALL: [StencilOp; 12] = [
        StencilOp::D1Plus,
        StencilOp::D1Minus,
        StencilOp::D2Plus,
        StencilOp::D2Minus,
        StencilOp::D1Center,
        StencilOp::D2Center,
        StencilOp::Lap1,
        StencilOp::Lap2,
        StencilOp::A1Plus,
        StencilOp::A1Minus,
        StencilOp::A2Plus,
        StencilOp::A2Minus,
    ];

    pub fn stencil(self) -> Stencil {
        use StencilOp::*;
        match self {
            D1Plus => Stencil::from_taps(&[(1, 0, 1.0), (0, 0, -1.0)]),
            D1Minus => Stencil::from_taps(&[(0, 0, 1.0), (-1, 0, -1.0)]),
            D2Plus => Stencil::from_taps(&[(0, 1, 1.0), (0, 0, -1.0)]),
            D2Minus => Stencil::from_taps(&[(0, 0, 1.0), (0, -1, -1.0)]),
            D1Center => D1Plus.stencil().add(&D1Minus.stencil()).scale(0.5),
            D2Center => D2Plus.stencil().add(&D2Minus.stencil()).scale(0.5),
            Lap1 => D1Plus.stencil().compose(&D1Minus.stencil()),
            Lap2 => D2Plus.stencil().compose(&D2Minus.stencil()),
            A1Plus => Stencil::from_taps(&[(0, 0, 0.5), (1, 0, 0.5)]),
            A1Minus => Stencil::from_taps(&[(-1, 0, 0.5), (0, 0, 0.5)]),
            A2Plus => Stencil::from_taps(&[(0, 0, 0.5), (0, 1, 0.5)]),
            A2Minus => Stencil::from_taps(&[(0, -1, 0.5), (0, 0, 0.5)]),
        }
    }
}

/// A linear operator `(Su)(j,k) = sum c * u(j+dj, k+dk)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    taps: Vec<(i32, i32, f64)>,
}

impl Stencil {
    pub fn identity() -> Self {
        Self::from_taps(&[(0, 0, 1.0)])
    }

    /// Builds a stencil, merging duplicate offsets and dropping zeros.
    pub fn from_taps(taps: &[(i32, i32, f64)]) -> Self {
        let mut merged: Vec<(i32, i32, f64)> = Vec::with_capacity(taps.len());
        for &(dj, dk, c) in taps {
            match merged.iter_mut().find(|t| t.0 == dj && t.1 == dk) {
                Some(t) => t.2 += c,
                None => merged.push((dj, dk, c)),
            }
        }
        merged.retain(|t| t.2 != 0.0);
        merged.sort_by_key(|t| (t.1, t.0));
        Self { taps: merged }
    }

    pub fn taps(&self) -> &[(i32, i32, f64)] {
        &self.taps
    }

    pub fn add(&self, other: &Stencil) -> Stencil {
        let mut all = self.taps.clone();
        all.extend_from_slice(&other.taps);
        Self::from_taps(&all)
    }

    pub fn scale(&self, s: f64) -> Stencil {
        let taps: Vec<_> = self.taps.iter().map(|&(a, b, c)| (a, b, c * s)).collect();
        Self::from_taps(&taps)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Stencil) -> Stencil {
        let mut taps = Vec::with_capacity(self.taps.len() * other.taps.len());
        for &(a1, b1, c1) in &self.taps {
            for &(a2, b2, c2) in &other.taps {
                taps.push((a1 + a2, b1 + b2, c1 * c2));
            }
        }
        Self::from_taps(&taps)
    }

    /// Largest |offset| in each direction.
    pub fn reach(&self) -> (i32, i32) {
        self.taps
            .iter()
            .fold((0, 0), |(rj, rk), &(a, b, _)| (rj.max(a.abs()), rk.max(b.abs())))
    }

    /// Evaluates at `(j, k)`; every tap must land on stored data.
    pub fn apply(&self, field: &Field2D, j: isize, k: isize) -> Result<f64> {
        for &(dj, dk, _) in &self.taps {
            let (jj, kk) = (j + dj as isize, k + dk as isize);
            if !field.contains(jj, kk) {
                return Err(Error::OutOfRange { j: jj, k: kk });
            }
        }
        Ok(self.eval(field, j, k))
    }

    /// Unchecked-range evaluation (panics outside storage).
    #[inline]
    pub fn eval(&self, field: &Field2D, j: isize, k: isize) -> f64 {
        self.taps
            .iter()
            .map(|&(dj, dk, c)| c * field.at(j + dj as isize, k + dk as isize))
            .sum()
    }
}

/// Evaluates `op` at interior index `(j, k)`.
pub fn apply(op: StencilOp, field: &Field2D, j: isize, k: isize) -> Result<f64> {
    op.stencil().apply(field, j, k)
}

/// Prebuilt composites used by the energy audits.
pub struct Ops {
    pub d1p: Stencil,
    pub d1m: Stencil,
    pub d2p: Stencil,
    pub d2m: Stencil,
    pub d10: Stencil,
    pub d20: Stencil,
    pub lap1: Stencil,
    pub lap2: Stencil,
    pub d1p_d2p: Stencil,
    pub d1p_d2m: Stencil,
    pub d1m_d2p: Stencil,
    pub d1m_d2m: Stencil,
    pub d10_d20: Stencil,
    pub lap1_lap2: Stencil,
    pub d2p_lap1: Stencil,
    pub d1p_lap2: Stencil,
    pub d2p_d10: Stencil,
    pub d1p_d20: Stencil,
}

static OPS: LazyLock<Ops> = LazyLock::new(|| {
    use StencilOp::*;
    let s = |op: StencilOp| op.stencil();
    Ops {
        d1p: s(D1Plus),
        d1m: s(D1Minus),
        d2p: s(D2Plus),
        d2m: s(D2Minus),
        d10: s(D1Center),
        d20: s(D2Center),
        lap1: s(Lap1),
        lap2: s(Lap2),
        d1p_d2p: s(D1Plus).compose(&s(D2Plus)),
        d1p_d2m: s(D1Plus).compose(&s(D2Minus)),
        d1m_d2p: s(D1Minus).compose(&s(D2Plus)),
        d1m_d2m: s(D1Minus).compose(&s(D2Minus)),
        d10_d20: s(D1Center).compose(&s(D2Center)),
        lap1_lap2: s(Lap1).compose(&s(Lap2)),
        d2p_lap1: s(D2Plus).compose(&s(Lap1)),
        d1p_lap2: s(D1Plus).compose(&s(Lap2)),
        d2p_d10: s(D2Plus).compose(&s(D1Center)),
        d1p_d20: s(D1Plus).compose(&s(D2Center)),
    }
});

pub fn ops() -> &'static Ops {
    &OPS
}

/// Both sides of a 1D summation identity on a finite window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentitySides {
    pub lhs: f64,
    pub rhs: f64,
}

fn dp(u: &[f64], j: usize) -> f64 {
    u[j + 1] - u[j]
}

fn lap(u: &[f64], j: usize) -> f64 {
    u[j + 1] - 2.0 * u[j] + u[j - 1]
}

/// Summation by parts for `sum_{j=1}^{N} (Lap U_j) V_j` with `N = len - 2`.
///
/// The right-hand side is `-sum (D+U_j)(D+V_j) - (D+U_0) V_1` plus the far
/// end term `(D+U_N) V_{N+1}`, which vanishes for data that is zero near the
/// end of the window.
pub fn telescoping_ipp_1d(u: &[f64], v: &[f64]) -> Result<IdentitySides> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if u.len() < 3 {
        return Ok(IdentitySides { lhs: 0.0, rhs: 0.0 });
    }
    let n = u.len() - 2;
    let lhs: f64 = (1..=n).map(|j| lap(u, j) * v[j]).sum();
    let rhs = -(1..=n).map(|j| dp(u, j) * dp(v, j)).sum::<f64>() - dp(u, 0) * v[1]
        + dp(u, n) * v[n + 1];
    Ok(IdentitySides { lhs, rhs })
}

/// `sum (D0 U_j)^2 + 1/4 sum (Lap U_j)^2 = sum (D+U_j)^2 + 1/2 (D+U_0)^2`
/// over `j = 1..=len-2`, with the far end correction `-1/2 (D+U_N)^2`.
pub fn centered_square_identity_1d(u: &[f64]) -> IdentitySides {
    if u.len() < 3 {
        return IdentitySides { lhs: 0.0, rhs: 0.0 };
    }
    let n = u.len() - 2;
    let lhs: f64 = (1..=n)
        .map(|j| {
            let d0 = 0.5 * (u[j + 1] - u[j - 1]);
            d0 * d0 + 0.25 * lap(u, j).powi(2)
        })
        .sum();
    let rhs = (1..=n).map(|j| dp(u, j).powi(2)).sum::<f64>() + 0.5 * dp(u, 0).powi(2)
        - 0.5 * dp(u, n).powi(2);
    IdentitySides { lhs, rhs }
}

//! One-dimensional Lax-Wendroff with second order outflow extrapolation.
//!
//! The plain energy `sum_{j>=0} u_j^2` has an indefinite boundary term; the
//! half-weighted energy `w0 u_0^2 + sum_{j>=1} u_j^2` with `w0 = 1/2` turns it
//! into a negative definite form in `(u_0, u_1)`.

use crate::error::{Error, Result};
use crate::grid::Field1D;

/// Weight of `u_0^2` in the modified energy.
pub const MODIFIED_WEIGHT: f64 = 0.5;

/// Cells at the far end that must stay zero for the balance identities.
pub const FAR_MARGIN: usize = 3;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha != 0.0 && alpha.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::CflRejected {
            alpha,
            beta: 0.0,
            reason: "1D scheme needs 0 < |alpha| < 1".into(),
        })
    }
}

/// One time step; the result has its ghosts refilled.
pub fn step_1d(state: &Field1D, alpha: f64) -> Result<Field1D> {
    check_alpha(alpha)?;
    let n = state.len() as isize;
    let mut next = state.clone();
    for j in 0..n {
        let (um, u, up) = (state.at(j - 1), state.at(j), state.at(j + 1));
        next.set(
            j,
            u - 0.5 * alpha * (up - um) + 0.5 * alpha * alpha * (up - 2.0 * u + um),
        );
    }
    next.fill_ghosts();
    Ok(next)
}

pub fn energy_standard_1d(state: &Field1D) -> f64 {
    state.values().iter().map(|v| v * v).sum()
}

/// `w0 u_0^2 + sum_{j>=1} u_j^2`.
pub fn energy_weighted_1d(state: &Field1D, w0: f64) -> f64 {
    let v = state.values();
    w0 * v[0] * v[0] + v[1..].iter().map(|x| x * x).sum::<f64>()
}

pub fn energy_modified_1d(state: &Field1D) -> f64 {
    energy_weighted_1d(state, MODIFIED_WEIGHT)
}

/// Boundary quadratic term of the energy balance, evaluated at `(u_0, u_1)`
/// together with its symmetric matrix in that basis.
///
/// Standard: `(alpha-1)/2 u_0^2 + (1+alpha)/2 p^2`; modified:
/// `alpha/2 u_0^2 + alpha/2 p^2`, where `p = u_0 - alpha (u_1 - u_0)`.
pub fn boundary_form_1d(state: &Field1D, alpha: f64, modified: bool) -> (f64, [[f64; 2]; 2]) {
    let (c0, cp) = boundary_coefficients(alpha, modified);
    // p = r . (u0, u1)
    let r = [1.0 + alpha, -alpha];
    let mut m = [[0.0; 2]; 2];
    m[0][0] = c0;
    for (i, row) in m.iter_mut().enumerate() {
        for (l, entry) in row.iter_mut().enumerate() {
            *entry += cp * r[i] * r[l];
        }
    }
    let (u0, u1) = (state.at(0), state.at(1));
    let p = u0 - alpha * (u1 - u0);
    (c0 * u0 * u0 + cp * p * p, m)
}

/// Coefficients of `u_0^2` and `p^2` in the boundary term.
pub fn boundary_coefficients(alpha: f64, modified: bool) -> (f64, f64) {
    if modified {
        (0.5 * alpha, 0.5 * alpha)
    } else {
        (0.5 * (alpha - 1.0), 0.5 * (1.0 + alpha))
    }
}

/// Interior dissipation coefficient `alpha^2 (1 - alpha^2) / 4`.
pub fn dissipation_coefficient(alpha: f64) -> f64 {
    alpha * alpha * (1.0 - alpha * alpha) / 4.0
}

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
pub fn sym2_eigenvalues(m: &[[f64; 2]; 2]) -> (f64, f64) {
    let mean = 0.5 * (m[0][0] + m[1][1]);
    let half_diff = 0.5 * (m[0][0] - m[1][1]);
    let rad = half_diff.hypot(m[0][1]);
    (mean - rad, mean + rad)
}

/// `[E(u^{n+1}) - E(u^n)] - [-dissipation + boundary term]`, which vanishes
/// up to round-off for data away from the far end.
pub fn energy_balance_residual_1d(state: &Field1D, alpha: f64, modified: bool) -> Result<f64> {
    check_alpha(alpha)?;
    let n = state.len();
    if state.values()[n.saturating_sub(FAR_MARGIN)..]
        .iter()
        .any(|&v| v != 0.0)
    {
        return Err(Error::SupportNearFarEdge { margin: FAR_MARGIN });
    }
    let next = step_1d(state, alpha)?;
    let energy = |f: &Field1D| {
        if modified {
            energy_modified_1d(f)
        } else {
            energy_standard_1d(f)
        }
    };
    let first = if modified { 1 } else { 0 };
    let lap_sq: f64 = (first..n as isize)
        .map(|j| (state.at(j + 1) - 2.0 * state.at(j) + state.at(j - 1)).powi(2))
        .sum();
    let (boundary, _) = boundary_form_1d(state, alpha, modified);
    let predicted = -dissipation_coefficient(alpha) * lap_sq + boundary;
    Ok(energy(&next) - energy(state) - predicted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spike(n: usize, at: usize) -> Field1D {
        let mut v = vec![0.0; n];
        v[at] = 1.0;
        Field1D::from_values(&v).unwrap()
    }

    #[test]
    fn step_examples() {
        let c = Field1D::from_values(&[2.0; 10]).unwrap();
        assert_eq!(step_1d(&c, -0.4).unwrap(), c);
        let z = Field1D::from_values(&[0.0; 10]).unwrap();
        assert_eq!(step_1d(&z, -0.4).unwrap(), z);
        let s = step_1d(&spike(12, 5), -0.5).unwrap();
        assert_eq!(&s.values()[4..7], &[0.375, 0.75, -0.125]);
        assert!(step_1d(&c, -1.0).is_err());
        assert!(step_1d(&c, 1.5).is_err());
    }

    #[test]
    fn energies() {
        let u = spike(8, 0);
        assert_eq!(energy_standard_1d(&u), 1.0);
        assert_eq!(energy_modified_1d(&u), 0.5);
        let z = Field1D::from_values(&[0.0; 8]).unwrap();
        assert_eq!((energy_standard_1d(&z), energy_modified_1d(&z)), (0.0, 0.0));
    }

    #[test]
    fn boundary_forms_at_half() {
        assert_eq!(boundary_coefficients(-0.5, false), (-0.75, 0.25));
        assert_eq!(boundary_coefficients(-0.5, true), (-0.25, -0.25));
        let z = Field1D::from_values(&[0.0; 6]).unwrap();
        assert_eq!(boundary_form_1d(&z, -0.5, false).0, 0.0);
        assert_eq!(boundary_form_1d(&z, -0.5, true).0, 0.0);
        let (_, m) = boundary_form_1d(&z, -0.5, false);
        let (lo, hi) = sym2_eigenvalues(&m);
        assert!(lo < 0.0 && hi > 0.0);
        let (_, m) = boundary_form_1d(&z, -0.5, true);
        assert!(sym2_eigenvalues(&m).1 < 0.0);
    }

    #[test]
    fn matrix_reproduces_value() {
        let u = Field1D::from_values(&[0.7, -1.3, 0.2, 0.0, 0.0]).unwrap();
        for modified in [false, true] {
            let (q, m) = boundary_form_1d(&u, -0.35, modified);
            let x = [0.7, -1.3];
            let qm = m[0][0] * x[0] * x[0] + 2.0 * m[0][1] * x[0] * x[1] + m[1][1] * x[1] * x[1];
            assert!((q - qm).abs() < 1e-14);
        }
    }

    #[test]
    fn residual_rejects_far_support() {
        let u = spike(10, 8);
        assert!(energy_balance_residual_1d(&u, -0.3, true).is_err());
        let z = Field1D::from_values(&[0.0; 10]).unwrap();
        assert_eq!(energy_balance_residual_1d(&z, -0.3, false).unwrap(), 0.0);
    }
}

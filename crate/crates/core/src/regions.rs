//! Stability-region maps over the `(lambda|a|, mu|b|)` plane.
//!
//! Three classifiers: the full corner form, the reduced corner form without
//! the two troublesome cross terms, and the Fourier symbol of the whole-line
//! boundary form.

use nalgebra::{Matrix4, SymmetricEigen};
use rayon::prelude::*;
use rustfft::{num_complex::Complex64, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::CflPair;

/// Relative threshold for strict definiteness.
pub const TOL_ND: f64 = 1e-12;

/// Default number of abscissae `x = sin^2(xi/2)` sampled on `[0, 1]`.
pub const DEFAULT_SYMBOL_SAMPLES: usize = 256;

pub const MIN_SWEEP_RESOLUTION: usize = 16;

/// Symmetric form on `(u_00, D1+ u_00, D2+ u_00, D1+ D2+ u_00)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadForm4 {
    pub m: [[f64; 4]; 4],
}

impl QuadForm4 {
    /// Builds a symmetric matrix from the upper triangle; cross coefficients
    /// are given as they appear in the form (so they are halved here).
    fn from_coefficients(diag: [f64; 4], cross: &[((usize, usize), f64)]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, d) in diag.into_iter().enumerate() {
            m[i][i] = d;
        }
        for &((i, l), c) in cross {
            m[i][l] += 0.5 * c;
            m[l][i] += 0.5 * c;
        }
        Self { m }
    }

    pub fn eval(&self, x: [f64; 4]) -> f64 {
        let mut acc = 0.0;
        for i in 0..4 {
            for l in 0..4 {
                acc += self.m[i][l] * x[i] * x[l];
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0, |a, &x| a.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|x| x.is_finite())
    }

    fn matrix(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, l| self.m[i][l])
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let e = SymmetricEigen::new(self.matrix()).eigenvalues;
        let mut v = [e[0], e[1], e[2], e[3]];
        v.sort_by(f64::total_cmp);
        v
    }

    /// Determinants of the leading `1x1 .. 4x4` blocks.
    pub fn leading_minors(&self) -> [f64; 4] {
        let full = self.matrix();
        [
            full[(0, 0)],
            full.fixed_view::<2, 2>(0, 0).determinant(),
            full.fixed_view::<3, 3>(0, 0).determinant(),
            full.determinant(),
        ]
    }

    /// Sylvester's criterion for negative definiteness: `(-1)^k D_k > 0`.
    pub fn negative_definite_by_minors(&self) -> bool {
        self.leading_minors()
            .iter()
            .enumerate()
            .all(|(k, d)| if k % 2 == 0 { *d < 0.0 } else { *d > 0.0 })
    }
}

/// Matrix of the corner contribution.
pub fn corner_form(cfl: &CflPair) -> QuadForm4 {
    let (a, b) = (cfl.alpha.abs(), cfl.beta.abs());
    let (a2, b2) = (a * a, b * b);
    let s = a2 + b2;
    QuadForm4::from_coefficients(
        [
            a * b - (a + b) / 2.0,
            -(a.powi(3) / 4.0 + a2 * b / 2.0),
            -(b.powi(3) / 4.0 + a * b2 / 2.0),
            -3.0 * s / 16.0 - (a + b) * s / 8.0 - s * s / 16.0,
        ],
        &[
            ((0, 1), -a2 / 2.0),
            ((0, 2), -b2 / 2.0),
            ((1, 2), -a * b * (a + b) / 2.0),
            ((0, 3), -s / 4.0),
            ((1, 3), -s / 4.0),
            ((2, 3), -s / 4.0),
        ],
    )
}

/// Corner form without the `D1+ u D1+D2+ u` and `D2+ u D1+D2+ u` products.
pub fn reduced_corner_form(cfl: &CflPair) -> QuadForm4 {
    let mut q = corner_form(cfl);
    for (i, l) in [(1, 3), (2, 3)] {
        q.m[i][l] = 0.0;
        q.m[l][i] = 0.0;
    }
    q
}

/// All eigenvalues below `-TOL_ND * max|m|`, confirmed by the minor signs.
///
/// When the two criteria disagree the form sits on the borderline and is
/// reported as not definite.
pub fn is_negative_definite_4(q: &QuadForm4) -> Result<bool> {
    if !q.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    let scale = q.max_abs();
    if scale == 0.0 {
        return Ok(false);
    }
    let by_eigen = q.eigenvalues()[3] < -TOL_ND * scale;
    Ok(by_eigen && q.negative_definite_by_minors())
}

/// Hermitian 2x2 symbol of the whole-line boundary form at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermSymbol2 {
    pub h11: f64,
    pub h22: f64,
    pub off_re: f64,
    pub off_im: f64,
    pub x: f64,
}

impl HermSymbol2 {
    pub fn trace(&self) -> f64 {
        self.h11 + self.h22
    }

    pub fn det(&self) -> f64 {
        self.h11 * self.h22 - (self.off_re * self.off_re + self.off_im * self.off_im)
    }

    fn scale(&self) -> f64 {
        self.h11
            .abs()
            .max(self.h22.abs())
            .max(self.off_re.abs())
            .max(self.off_im.abs())
    }

    pub fn is_negative_definite(&self) -> bool {
        let s = self.scale();
        self.trace() < 0.0 && s > 0.0 && self.det() > TOL_ND * s * s
    }

    /// `z^* H z` for `z = (p, q)`.
    pub fn quad(&self, p: Complex64, q: Complex64) -> f64 {
        let off = Complex64::new(self.off_re, self.off_im);
        self.h11 * p.norm_sqr() + self.h22 * q.norm_sqr() + 2.0 * (p.conj() * off * q).re
    }
}

pub fn boundary_symbol(cfl: &CflPair, x: f64, sin_xi: f64) -> Result<HermSymbol2> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::AbscissaOutOfRange(x));
    }
    Ok(symbol_unchecked(cfl, x, sin_xi))
}

/// Symbol at frequency `xi`.
pub fn boundary_symbol_at(cfl: &CflPair, xi: f64) -> HermSymbol2 {
    let x = (0.5 * xi).sin().powi(2);
    symbol_unchecked(cfl, x, xi.sin())
}

fn symbol_unchecked(cfl: &CflPair, x: f64, sin_xi: f64) -> HermSymbol2 {
    let (a, b) = (cfl.alpha.abs(), cfl.beta.abs());
    let (a2, b2) = (a * a, b * b);
    let s = a2 + b2;
    HermSymbol2 {
        h11: -b * (1.0 + 2.0 * a2 * x) - 2.0 * a2 * (1.0 - b).powi(2) * x * x,
        h22: -b.powi(3) / 2.0 - (1.0 + b - b2) * s / 2.0 * x - 2.0 * a2 * b2 * x * x,
        off_re: -b2 / 2.0 - s * x / 2.0 - a2 * s * x * x,
        off_im: sin_xi * (a * b2 / 2.0 + a * s / 2.0 * x - 2.0 * a.powi(3) * b * x),
        x,
    }
}

/// Whether the symbol is negative definite at every sampled `x` on a uniform
/// grid of `[0, 1]` with both endpoints.
pub fn boundary_negdef_all_xi(cfl: &CflPair, samples: usize) -> bool {
    let n = samples.max(2);
    (0..n).all(|i| {
        let x = i as f64 / (n - 1) as f64;
        let sin_xi = 2.0 * (x * (1.0 - x)).max(0.0).sqrt();
        symbol_unchecked(cfl, x, sin_xi).is_negative_definite()
    })
}

/// Whole-line boundary form of sequences `u`, `v` (indexed from 0, zero
/// elsewhere), evaluated through the symbol on a zero-padded DFT grid.
pub fn whole_line_boundary_form(cfl: &CflPair, u: &[f64], v: &[f64]) -> f64 {
    let support = u.len().max(v.len());
    let n = (2 * support + 8).next_power_of_two();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let transform = |seq: &[f64]| {
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (slot, &x) in buf.iter_mut().zip(seq) {
            slot.re = x;
        }
        fft.process(&mut buf);
        buf
    };
    let (uh, vh) = (transform(u), transform(v));
    let total: f64 = (0..n)
        .map(|m| {
            let xi = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
            boundary_symbol_at(cfl, xi).quad(uh[m], vh[m])
        })
        .sum();
    total / n as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionKind {
    Corner,
    Reduced,
    Boundary,
}

impl std::str::FromStr for RegionKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "corner" => Ok(Self::Corner),
            "reduced" => Ok(Self::Reduced),
            "boundary" => Ok(Self::Boundary),
            other => Err(format!("unknown region kind `{other}`")),
        }
    }
}

/// Pixel class, with the numeric codes used in CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Region {
    Outside = 0,
    Bad = 1,
    Good = 2,
}

impl Region {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(c: u8) -> Option<Self> {
        match c {
            0 => Some(Self::Outside),
            1 => Some(Self::Bad),
            2 => Some(Self::Good),
            _ => None,
        }
    }
}

/// Classification of one parameter point.
pub fn classify(kind: RegionKind, la: f64, mb: f64) -> Region {
    let cfl = CflPair::new(-la, -mb);
    if !cfl.inside_cauchy_ball() {
        return Region::Outside;
    }
    let good = match kind {
        RegionKind::Corner => is_negative_definite_4(&corner_form(&cfl)).unwrap_or(false),
        RegionKind::Reduced => is_negative_definite_4(&reduced_corner_form(&cfl)).unwrap_or(false),
        RegionKind::Boundary => boundary_negdef_all_xi(&cfl, DEFAULT_SYMBOL_SAMPLES),
    };
    if good {
        Region::Good
    } else {
        Region::Bad
    }
}

/// Classified pixels; `i` indexes `lambda|a|`, `j` indexes `mu|b|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMap {
    pub kind: RegionKind,
    pub resolution: usize,
    classes: Vec<Region>,
}

impl RegionMap {
    pub fn center(&self, idx: usize) -> f64 {
        (idx as f64 + 0.5) / self.resolution as f64
    }

    pub fn get(&self, i: usize, j: usize) -> Region {
        self.classes[j * self.resolution + i]
    }

    pub fn count(&self, class: Region) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    /// Rows ordered by `j`, then `i`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Region)> + '_ {
        self.classes
            .iter()
            .enumerate()
            .map(|(n, &c)| (n % self.resolution, n / self.resolution, c))
    }
}

pub fn sweep(kind: RegionKind, resolution: usize) -> Result<RegionMap> {
    if resolution < MIN_SWEEP_RESOLUTION {
        return Err(Error::InvalidGrid {
            name: "resolution",
            value: resolution as f64,
        });
    }
    Ok(sweep_unchecked(kind, resolution))
}

/// Like [`sweep`] without the minimum resolution.
pub fn sweep_unchecked(kind: RegionKind, resolution: usize) -> RegionMap {
    let r = resolution as f64;
    let classes = (0..resolution * resolution)
        .into_par_iter()
        .map(|n| {
            let (i, j) = (n % resolution, n / resolution);
            classify(kind, (i as f64 + 0.5) / r, (j as f64 + 0.5) / r)
        })
        .collect();
    RegionMap {
        kind,
        resolution,
        classes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_form_examples() {
        let cfl = CflPair::new(-0.3, -0.2);
        let q = corner_form(&cfl);
        assert!((q.m[0][0] - (0.06 - 0.25)).abs() < 1e-15);
        assert_eq!(corner_form(&CflPair::new(0.0, 0.0)).m, [[0.0; 4]; 4]);
        assert_eq!(reduced_corner_form(&CflPair::new(0.0, 0.0)).m, [[0.0; 4]; 4]);
        let r = reduced_corner_form(&cfl);
        for i in 0..4 {
            for l in 0..4 {
                let differs = q.m[i][l] != r.m[i][l];
                let dropped = matches!((i, l), (1, 3) | (3, 1) | (2, 3) | (3, 2));
                assert_eq!(differs, dropped, "entry ({i},{l})");
            }
        }
    }

    #[test]
    fn definiteness_examples() {
        let mut neg = QuadForm4 { m: [[0.0; 4]; 4] };
        for i in 0..4 {
            neg.m[i][i] = -1.0;
        }
        assert!(is_negative_definite_4(&neg).unwrap());
        neg.m[3][3] = 0.0;
        assert!(!is_negative_definite_4(&neg).unwrap());
        neg.m[0][1] = f64::NAN;
        assert!(is_negative_definite_4(&neg).is_err());
    }

    #[test]
    fn small_parameters() {
        let cfl = CflPair::new(-0.05, -0.05);
        assert!(!is_negative_definite_4(&corner_form(&cfl)).unwrap());
        assert_eq!(classify(RegionKind::Corner, 0.05, 0.05), Region::Bad);
        assert_eq!(classify(RegionKind::Corner, 0.9, 0.9), Region::Outside);
    }

    #[test]
    fn symbol_examples() {
        let cfl = CflPair::new(-0.3, -0.4);
        let h = boundary_symbol(&cfl, 0.0, 0.0).unwrap();
        assert_eq!(h.off_im, 0.0);
        assert!((h.h11 + 0.4).abs() < 1e-15);
        assert!((h.off_re + 0.08).abs() < 1e-15);
        assert!(boundary_symbol(&cfl, 1.2, 0.0).is_err());
        assert!(boundary_symbol(&cfl, -0.1, 0.0).is_err());
        assert!(boundary_negdef_all_xi(&CflPair::new(-0.3, -0.3), 256));
        assert!(!boundary_negdef_all_xi(&CflPair::new(-0.3, 0.0), 256));
    }

    #[test]
    fn sweep_resolution_guard() {
        assert!(sweep(RegionKind::Corner, 8).is_err());
        let m = sweep_unchecked(RegionKind::Corner, 2);
        assert_eq!(m.get(1, 1), Region::Outside);
        assert_eq!(m.center(1), 0.75);
    }
}

//! Grid and CFL bookkeeping plus ghost-layered field storage.
//!
//! Fields carry one ghost layer on every side. On the outflow sides
//! (`j = -1`, `k = -1`) the ghost values come from second order
//! extrapolation, and the corner ghost uses
//! `u(-1,-1) = 4 u(0,0) - 2 u(1,0) - 2 u(0,1) + u(1,1)`. The far edges
//! (`j = nx`, `k = ny`) use the same extrapolation; they only exist to close
//! the stencil on a finite box and never matter while the data stays away
//! from them.

use crate::error::{Error, Result};

/// Number of interior cells the 9-point stencil plus extrapolation needs.
pub const MIN_CELLS: usize = 3;

/// Uniform Cartesian grid and time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub dt: f64,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64, dt: f64) -> Result<Self> {
        if nx < MIN_CELLS || ny < MIN_CELLS {
            return Err(Error::GridTooSmall {
                nx,
                ny,
                min: MIN_CELLS,
            });
        }
        for (name, value) in [("dx", dx), ("dy", dy), ("dt", dt)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidGrid { name, value });
            }
        }
        Ok(Self {
            nx,
            ny,
            dx,
            dy,
            dt,
        })
    }

    /// `dt / dx`.
    pub fn lambda(&self) -> f64 {
        self.dt / self.dx
    }

    /// `dt / dy`.
    pub fn mu(&self) -> f64 {
        self.dt / self.dy
    }
}

/// Which hypotheses a CFL pair has to satisfy before stepping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CflMode {
    /// Comparability with constant `M` and the small-ball restriction.
    #[default]
    Strict,
    /// Only the whole-space condition `alpha^2 + beta^2 <= 1/2`.
    Explore,
}

pub const DEFAULT_BOUND_M: f64 = 2.0;
pub const DEFAULT_RADIUS_EPS: f64 = 0.25;

/// Signed Courant numbers `alpha = lambda a`, `beta = mu b` with the
/// constants used by the admissibility predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CflPair {
    pub alpha: f64,
    pub beta: f64,
    pub bound_m: f64,
    pub radius_eps: f64,
}

impl CflPair {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            bound_m: DEFAULT_BOUND_M,
            radius_eps: DEFAULT_RADIUS_EPS,
        }
    }

    /// Courant numbers from transport speeds `a`, `b` on `grid`.
    pub fn from_speeds(grid: &GridSpec, a: f64, b: f64) -> Self {
        Self::new(grid.lambda() * a, grid.mu() * b)
    }

    pub fn with_bound_m(mut self, m: f64) -> Self {
        self.bound_m = m;
        self
    }

    pub fn with_radius_eps(mut self, eps: f64) -> Self {
        self.radius_eps = eps;
        self
    }

    /// Same pair with the roles of the two directions exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
            ..*self
        }
    }

    pub fn radius_sq(&self) -> f64 {
        self.alpha * self.alpha + self.beta * self.beta
    }

    pub fn is_outflow(&self) -> bool {
        self.alpha < 0.0 && self.beta < 0.0
    }

    /// `|alpha| <= m |beta|` and `|beta| <= m |alpha|`.
    pub fn comparable(&self, m: f64) -> bool {
        let (a, b) = (self.alpha.abs(), self.beta.abs());
        a <= m * b && b <= m * a
    }

    pub fn inside_cauchy_ball(&self) -> bool {
        self.radius_sq() <= 0.5
    }

    pub fn inside_eps_ball(&self) -> bool {
        self.radius_sq() <= self.radius_eps
    }

    /// Checks the pair against `mode`; outflow (both numbers negative) is
    /// always required.
    pub fn admit(&self, mode: CflMode) -> Result<()> {
        let reject = |reason: String| {
            Err(Error::CflRejected {
                alpha: self.alpha,
                beta: self.beta,
                reason,
            })
        };
        if !(self.alpha.is_finite() && self.beta.is_finite()) {
            return reject("non-finite Courant number".into());
        }
        if !self.is_outflow() {
            return reject("both transport speeds must be negative (outflow)".into());
        }
        match mode {
            CflMode::Strict => {
                if !self.comparable(self.bound_m) {
                    return reject(format!("not comparable with M = {}", self.bound_m));
                }
                if !self.inside_eps_ball() {
                    return reject(format!(
                        "alpha^2 + beta^2 = {} exceeds eps = {}",
                        self.radius_sq(),
                        self.radius_eps
                    ));
                }
            }
            CflMode::Explore => {
                if !self.inside_cauchy_ball() {
                    return reject(format!(
                        "alpha^2 + beta^2 = {} exceeds 1/2",
                        self.radius_sq()
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Read access to values on the interior index set `0..nx` x `0..ny`.
pub trait InteriorValues {
    fn dims(&self) -> (usize, usize);
    fn interior(&self, j: usize, k: usize) -> f64;
}

/// Values on the interior index set only (no ghosts).
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorArray {
    nx: usize,
    ny: usize,
    data: Vec<f64>,
}

impl InteriorArray {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            data: vec![0.0; nx * ny],
        }
    }

    pub fn from_fn(nx: usize, ny: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(nx, ny);
        for k in 0..ny {
            for j in 0..nx {
                out.data[k * nx + j] = f(j, k);
            }
        }
        out
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.data[k * self.nx + j]
    }

    pub fn set(&mut self, j: usize, k: usize, value: f64) {
        self.data[k * self.nx + j] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

impl InteriorValues for InteriorArray {
    fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    fn interior(&self, j: usize, k: usize) -> f64 {
        self.get(j, k)
    }
}

/// Scalar field on `{-1..=nx} x {-1..=ny}`: interior plus one ghost ring.
///
/// Storage is row-major in `k` with `j` fastest; index `-1` maps to slot 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    nx: usize,
    ny: usize,
    data: Vec<f64>,
}

impl Field2D {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            data: vec![0.0; (nx + 2) * (ny + 2)],
        }
    }

    /// Field with interior values `f(j, k)` and extrapolated ghosts.
    pub fn from_interior_fn(nx: usize, ny: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(nx, ny);
        for k in 0..ny {
            for j in 0..nx {
                out.set(j as isize, k as isize, f(j, k));
            }
        }
        out.fill_ghosts();
        out
    }

    /// Field whose interior is `values`, ghosts extrapolated.
    pub fn from_interior(values: &InteriorArray) -> Self {
        let (nx, ny) = values.dims();
        Self::from_interior_fn(nx, ny, |j, k| values.get(j, k))
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    fn slot(&self, j: isize, k: isize) -> usize {
        debug_assert!(self.contains(j, k), "({j}, {k}) outside field");
        (k + 1) as usize * (self.nx + 2) + (j + 1) as usize
    }

    pub fn contains(&self, j: isize, k: isize) -> bool {
        (-1..=self.nx as isize).contains(&j) && (-1..=self.ny as isize).contains(&k)
    }

    /// Value at a stored index; panics outside storage.
    #[inline]
    pub fn at(&self, j: isize, k: isize) -> f64 {
        assert!(self.contains(j, k), "index ({j}, {k}) outside field");
        self.data[self.slot(j, k)]
    }

    pub fn try_at(&self, j: isize, k: isize) -> Result<f64> {
        if self.contains(j, k) {
            Ok(self.data[self.slot(j, k)])
        } else {
            Err(Error::OutOfRange { j, k })
        }
    }

    #[inline]
    pub fn set(&mut self, j: isize, k: isize, value: f64) {
        assert!(self.contains(j, k), "index ({j}, {k}) outside field");
        let s = self.slot(j, k);
        self.data[s] = value;
    }

    /// Raw storage including ghosts.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Refills every ghost value from the interior. Interior values are
    /// untouched, so the operation is idempotent.
    pub fn fill_ghosts(&mut self) {
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        for k in 0..ny {
            let g = 2.0 * self.at(0, k) - self.at(1, k);
            self.set(-1, k, g);
            let g = 2.0 * self.at(nx - 1, k) - self.at(nx - 2, k);
            self.set(nx, k, g);
        }
        for j in 0..nx {
            let g = 2.0 * self.at(j, 0) - self.at(j, 1);
            self.set(j, -1, g);
            let g = 2.0 * self.at(j, ny - 1) - self.at(j, ny - 2);
            self.set(j, ny, g);
        }
        // corner (edge index, inward neighbour) in each direction
        let corners = [
            ((-1, 0, 1), (-1, 0, 1)),
            ((nx, nx - 1, nx - 2), (-1, 0, 1)),
            ((-1, 0, 1), (ny, ny - 1, ny - 2)),
            ((nx, nx - 1, nx - 2), (ny, ny - 1, ny - 2)),
        ];
        for ((gj, j0, j1), (gk, k0, k1)) in corners {
            let g = 4.0 * self.at(j0, k0) - 2.0 * self.at(j1, k0) - 2.0 * self.at(j0, k1)
                + self.at(j1, k1);
            self.set(gj, gk, g);
        }
    }

    /// Copy with the roles of `j` and `k` exchanged.
    pub fn transposed(&self) -> Self {
        let mut out = Self::zeros(self.ny, self.nx);
        for k in -1..=self.ny as isize {
            for j in -1..=self.nx as isize {
                out.set(k, j, self.at(j, k));
            }
        }
        out
    }

    pub fn interior_array(&self) -> InteriorArray {
        InteriorArray::from_fn(self.nx, self.ny, |j, k| self.at(j as isize, k as isize))
    }

    /// Largest distance-to-far-edge violation: returns `Err` if a nonzero
    /// interior value sits within `margin` cells of `j = nx` or `k = ny`.
    pub fn check_far_support(&self, margin: usize) -> Result<()> {
        for k in 0..self.ny {
            for j in 0..self.nx {
                let near = j + margin >= self.nx || k + margin >= self.ny;
                if near && self.at(j as isize, k as isize) != 0.0 {
                    return Err(Error::SupportNearFarEdge { margin });
                }
            }
        }
        Ok(())
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl InteriorValues for Field2D {
    fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    fn interior(&self, j: usize, k: usize) -> f64 {
        self.at(j as isize, k as isize)
    }
}

/// Free-function form of [`Field2D::fill_ghosts`].
pub fn fill_ghosts_2d(field: &Field2D) -> Field2D {
    let mut out = field.clone();
    out.fill_ghosts();
    out
}

/// Cell averages of `u0` by tensor 2-point Gauss quadrature, ghosts filled.
pub fn project_initial_2d(u0: impl Fn(f64, f64) -> f64, grid: &GridSpec) -> Result<Field2D> {
    let g = 0.5 / 3f64.sqrt();
    let nodes = [0.5 - g, 0.5 + g];
    let mut out = Field2D::zeros(grid.nx, grid.ny);
    for k in 0..grid.ny {
        for j in 0..grid.nx {
            let mut acc = 0.0;
            for sy in nodes {
                for sx in nodes {
                    let x = (j as f64 + sx) * grid.dx;
                    let y = (k as f64 + sy) * grid.dy;
                    let s = u0(x, y);
                    if !s.is_finite() {
                        return Err(Error::NonFiniteSample { j, k });
                    }
                    acc += s;
                }
            }
            out.set(j as isize, k as isize, 0.25 * acc);
        }
    }
    out.fill_ghosts();
    Ok(out)
}

/// 1D field on `{-1..=n}` with the same ghost convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    n: usize,
    data: Vec<f64>,
}

impl Field1D {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.len() < MIN_CELLS {
            return Err(Error::GridTooSmall {
                nx: values.len(),
                ny: 1,
                min: MIN_CELLS,
            });
        }
        let mut data = Vec::with_capacity(values.len() + 2);
        data.push(0.0);
        data.extend_from_slice(values);
        data.push(0.0);
        let mut out = Self {
            n: values.len(),
            data,
        };
        out.fill_ghosts();
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn at(&self, j: isize) -> f64 {
        self.data[(j + 1) as usize]
    }

    #[inline]
    pub fn set(&mut self, j: isize, value: f64) {
        self.data[(j + 1) as usize] = value;
    }

    /// Interior values `0..n`.
    pub fn values(&self) -> &[f64] {
        &self.data[1..=self.n]
    }

    pub fn fill_ghosts(&mut self) {
        let n = self.n as isize;
        let g = 2.0 * self.at(0) - self.at(1);
        self.set(-1, g);
        let g = 2.0 * self.at(n - 1) - self.at(n - 2);
        self.set(n, g);
    }
}

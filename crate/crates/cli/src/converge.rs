//! Refinement study on `[0,1]^2` with the exact translated solution.

use std::io::Write;

use lwquad::grid::project_initial_2d;
use lwquad::scheme2d::{run as run_scheme, Tracking};
use lwquad::{CflMode, CflPair, GridSpec};

use crate::output::{create, num, CsvWriter};
use crate::{exit, Case, CmdResult, ConvergeArgs, Failure};

pub const ORDER_BAND: (f64, f64) = (1.7, 2.3);

/// Cells next to any edge that an interior bump must avoid.
pub const EDGE_CELLS: f64 = 3.0;

/// Compactly supported bump of radius `r` around `(cx, cy)`, `C^5`.
#[derive(Debug, Clone, Copy)]
pub struct Bump {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

impl Bump {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let q = ((x - self.cx).powi(2) + (y - self.cy).powi(2)) / (self.r * self.r);
        if q < 1.0 {
            (1.0 - q).powi(6)
        } else {
            0.0
        }
    }

    pub fn shifted(&self, dx: f64, dy: f64) -> Self {
        Self {
            cx: self.cx + dx,
            cy: self.cy + dy,
            ..*self
        }
    }
}

/// Initial bump and default coarse step count for a case.
pub fn case_setup(case: Case) -> (Option<Bump>, usize) {
    match case {
        Case::Interior => (Some(Bump { cx: 0.65, cy: 0.65, r: 0.25 }), 40),
        Case::Corner => (Some(Bump { cx: 0.3, cy: 0.3, r: 0.25 }), 56),
        Case::Zero => (None, 40),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub cells: usize,
    pub steps: usize,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Study {
    pub levels: Vec<Level>,
    pub final_time: f64,
}

impl Study {
    /// `log2(e_h / e_{h/2})`, `None` when both errors vanish.
    pub fn orders(&self) -> Vec<Option<f64>> {
        self.levels
            .windows(2)
            .map(|w| {
                if w[0].error == 0.0 && w[1].error == 0.0 {
                    None
                } else {
                    Some((w[0].error / w[1].error).log2())
                }
            })
            .collect()
    }

    /// The last two orders (or the only one) lie in [`ORDER_BAND`].
    pub fn pass(&self) -> bool {
        let orders = self.orders();
        let tail = &orders[orders.len().saturating_sub(2)..];
        tail.iter().all(|o| match o {
            None => true,
            Some(p) => (ORDER_BAND.0..=ORDER_BAND.1).contains(p),
        })
    }
}

/// Checks that the exact support avoids the edges it has to avoid over `[0, t]`.
fn check_support(bump: &Bump, case: Case, a: f64, b: f64, t: f64, h: f64) -> Result<(), Failure> {
    let margin = EDGE_CELLS * h;
    for s in [0.0, t] {
        let c = bump.shifted(a * s, b * s);
        let hi = c.cx.max(c.cy) + c.r;
        if hi > 1.0 - margin {
            return Err(Failure::data(format!(
                "bump reaches within {EDGE_CELLS} coarse cells of a far edge at t = {s}"
            )));
        }
        let lo = c.cx.min(c.cy) - c.r;
        if case == Case::Interior && lo < margin {
            return Err(Failure::data(format!(
                "interior bump reaches within {EDGE_CELLS} coarse cells of an outflow edge at t = {s}"
            )));
        }
    }
    Ok(())
}

pub fn study(args: &ConvergeArgs) -> Result<Study, Failure> {
    if args.levels < 2 {
        return Err(Failure::usage("--levels must be at least 2"));
    }
    if args.coarse < 8 {
        return Err(Failure::usage("--coarse must be at least 8"));
    }
    let (bump, default_steps) = case_setup(args.case);
    let steps0 = args.coarse_steps.unwrap_or(default_steps);
    let h0 = 1.0 / args.coarse as f64;
    let final_time = steps0 as f64 * args.lambda * h0;
    if let Some(bump) = &bump {
        check_support(bump, args.case, args.a, args.b, final_time, h0)?;
    }
    let mut levels = Vec::with_capacity(args.levels);
    for l in 0..args.levels {
        let cells = args.coarse << l;
        let steps = steps0 << l;
        let h = 1.0 / cells as f64;
        let grid = GridSpec::new(cells, cells, h, h, args.lambda * h)?;
        let cfl = CflPair::from_speeds(&grid, args.a, args.b);
        let error = match &bump {
            None => {
                let u0 = lwquad::Field2D::zeros(cells, cells);
                let u = run_scheme(&u0, &cfl, CflMode::Strict, steps, Tracking::Off, |_, _| {})?;
                l2_norm(&u, &lwquad::Field2D::zeros(cells, cells), h)
            }
            Some(bump) => {
                let u0 = project_initial_2d(|x, y| bump.eval(x, y), &grid)?;
                let u = run_scheme(&u0, &cfl, CflMode::Strict, steps, Tracking::Off, |_, _| {})?;
                let t = steps as f64 * grid.dt;
                let moved = bump.shifted(args.a * t, args.b * t);
                let exact = project_initial_2d(|x, y| moved.eval(x, y), &grid)?;
                l2_norm(&u, &exact, h)
            }
        };
        levels.push(Level { cells, steps, error });
    }
    Ok(Study { levels, final_time })
}

fn l2_norm(u: &lwquad::Field2D, v: &lwquad::Field2D, h: f64) -> f64 {
    let mut acc = 0.0;
    for k in 0..u.ny() as isize {
        for j in 0..u.nx() as isize {
            acc += (u.at(j, k) - v.at(j, k)).powi(2);
        }
    }
    h * acc.sqrt()
}

pub fn run(args: &ConvergeArgs, out: &mut dyn Write) -> CmdResult {
    let s = study(args)?;
    let orders = s.orders();
    if let Some(path) = &args.out_csv {
        let io = |e| Failure::io(path, e);
        let mut csv = CsvWriter::new(create(path)?, &["cells", "h", "steps", "l2_error", "order"]).map_err(io)?;
        for (n, lv) in s.levels.iter().enumerate() {
            let order = match n.checked_sub(1).map(|m| orders[m]) {
                Some(Some(p)) => num(p),
                Some(None) => "exact".into(),
                None => String::new(),
            };
            csv.row(&[
                lv.cells.to_string(),
                num(1.0 / lv.cells as f64),
                lv.steps.to_string(),
                num(lv.error),
                order,
            ])
            .map_err(io)?;
        }
        csv.finish().map_err(io)?;
    }
    let pass = s.pass();
    let report = |out: &mut dyn Write| -> std::io::Result<()> {
        writeln!(
            out,
            "converge: case {:?} lambda {} a {} b {} final time {}",
            args.case,
            args.lambda,
            args.a,
            args.b,
            num(s.final_time)
        )?;
        for (n, lv) in s.levels.iter().enumerate() {
            write!(out, "{:>5} cells {:>6} steps  L2 error {}", lv.cells, lv.steps, num(lv.error))?;
            match n.checked_sub(1).map(|m| orders[m]) {
                Some(Some(p)) => writeln!(out, "  order {p:.4}")?,
                Some(None) => writeln!(out, "  order exact")?,
                None => writeln!(out)?,
            }
        }
        let verdict = if pass { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "last orders within [{}, {}]: {verdict}",
            ORDER_BAND.0, ORDER_BAND.1
        )
    };
    report(out).map_err(Failure::report)?;
    Ok(if pass { exit::OK } else { exit::CHECK_FAILED })
}

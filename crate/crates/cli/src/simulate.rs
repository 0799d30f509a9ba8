use std::io::Write;
use std::path::Path;

use lwquad::energy::{self, Summation};
use lwquad::grid::project_initial_2d;
use lwquad::scheme2d::step_unchecked;
use lwquad::{CflMode, CflPair, Field2D, GridSpec};

use crate::output::{create, num, CsvWriter};
use crate::{exit, CmdResult, Failure, InitialCondition, SimulateArgs};

pub const HEADER: [&str; 8] = ["step", "norm_sq", "increment", "I", "B1", "B2", "C", "theorem_lhs"];

pub fn initial_field(args: &SimulateArgs, grid: &GridSpec) -> Result<Field2D, Failure> {
    match args.ic {
        InitialCondition::Zero => Ok(Field2D::zeros(grid.nx, grid.ny)),
        InitialCondition::Gaussian => {
            let (lx, ly) = (grid.nx as f64 * grid.dx, grid.ny as f64 * grid.dy);
            let (cx, cy) = (args.center_x * lx, args.center_y * ly);
            let w = args.width * lx.min(ly);
            if !(w > 0.0) {
                return Err(Failure::usage("--width must be positive"));
            }
            Ok(project_initial_2d(
                |x, y| {
                    let r2 = (x - cx).powi(2) + (y - cy).powi(2);
                    if r2 < 16.0 * w * w {
                        (-r2 / (2.0 * w * w)).exp()
                    } else {
                        0.0
                    }
                },
                grid,
            )?)
        }
        InitialCondition::Spike => {
            if args.spike_j >= grid.nx || args.spike_k >= grid.ny {
                return Err(Failure::usage("spike position outside the grid"));
            }
            let (sj, sk) = (args.spike_j, args.spike_k);
            Ok(Field2D::from_interior_fn(grid.nx, grid.ny, |j, k| {
                if (j, k) == (sj, sk) {
                    1.0
                } else {
                    0.0
                }
            }))
        }
        InitialCondition::File => {
            let path = args
                .ic_path
                .as_deref()
                .ok_or_else(|| Failure::usage("--ic file needs --ic-path"))?;
            read_field(path, grid.nx, grid.ny)
        }
    }
}

/// Reads `nx*ny` whitespace-separated numbers, `j` fastest.
pub fn read_field(path: &Path, nx: usize, ny: usize) -> Result<Field2D, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::data(format!("cannot read {}: {e}", path.display())))?;
    let values = text
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Failure::data(format!("bad number `{t}` in {}", path.display())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != nx * ny {
        return Err(Failure::data(format!(
            "{} holds {} values, expected {nx}x{ny} = {}",
            path.display(),
            values.len(),
            nx * ny
        )));
    }
    Ok(Field2D::from_interior_fn(nx, ny, |j, k| values[k * nx + j]))
}

pub fn run(args: &SimulateArgs, out: &mut dyn Write) -> CmdResult {
    let grid = GridSpec::new(args.nx, args.ny, args.dx, args.dy, args.dt)?;
    let cfl = CflPair::from_speeds(&grid, args.a, args.b)
        .with_bound_m(args.m)
        .with_radius_eps(args.eps);
    let mode = CflMode::from(args.mode);
    cfl.admit(mode)?;
    let claimed = cfl.admit(CflMode::Strict).is_ok();
    let mut u = initial_field(args, &grid)?;

    let file = create(&args.out)?;
    let io = |e| Failure::io(&args.out, e);
    let mut csv = CsvWriter::new(file, &HEADER).map_err(io)?;
    let tol = energy::IDENTITY_TOL * (1.0 + energy::norm_sq(&u));
    let mut max_lhs = f64::NEG_INFINITY;
    for n in 0..args.steps {
        let b = energy::breakdown_truncated(&u, &cfl, Summation::Ordered)?;
        let lhs = b.increment + energy::theorem_dissipation(&u, &cfl, args.c);
        max_lhs = max_lhs.max(lhs);
        csv.row(&[
            n.to_string(),
            num(b.norm_sq),
            num(b.increment),
            num(b.interior_i),
            num(b.boundary_b1),
            num(b.boundary_b2),
            num(b.corner_c),
            num(lhs),
        ])
        .map_err(io)?;
        u = step_unchecked(&u, &cfl).map_err(|_| Failure::data(format!("non-finite value at step {n}")))?;
    }
    csv.finish().map_err(io)?;

    let report = |out: &mut dyn Write| -> std::io::Result<()> {
        writeln!(
            out,
            "simulate: grid {}x{} alpha {} beta {} mode {:?} steps {}",
            grid.nx, grid.ny, cfl.alpha, cfl.beta, args.mode, args.steps
        )?;
        writeln!(out, "seed: none (deterministic initial data {:?})", args.ic)?;
        if args.steps > 0 {
            let status = if max_lhs <= tol { "holds" } else { "violated" };
            let scope = if claimed { "" } else { " (observational, outside strict hypotheses)" };
            writeln!(out, "max theorem_lhs {} tol {} estimate {status}{scope}", num(max_lhs), num(tol))?;
        }
        writeln!(out, "final norm_sq {}", num(energy::norm_sq(&u)))?;
        writeln!(out, "wrote {}", args.out.display())
    };
    report(out).map_err(Failure::report)?;
    Ok(exit::OK)
}

use std::io::Write;

use lwquad::energy::{self, IDENTITY_TOL};
use lwquad::{CflPair, Field2D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::num;
use crate::{exit, AuditArgs, CmdResult, Failure};

/// Pairs used by `--sweep-cfl`.
pub const SWEEP_PAIRS: [(f64, f64); 4] = [(-0.1, -0.1), (-0.3, -0.2), (-0.2, -0.3), (-0.4, -0.4)];

/// Cells next to the far edges that stay zero.
pub const FAR_MARGIN: usize = 3;

/// Worst cases over all trials and pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AuditSummary {
    pub skew1: f64,
    pub skew2: f64,
    pub sym_vw: f64,
    pub split: f64,
    /// `max(0, ||w||^2 - bound) / (1 + |bound|)`.
    pub w_violation: f64,
    /// `max(0, increment - estimate) / (1 + ||u||^2)`.
    pub estimate_violation: f64,
    pub evaluations: usize,
}

impl AuditSummary {
    pub fn identities(&self) -> [(&'static str, f64); 4] {
        [
            ("skew1 2<u;v>", self.skew1),
            ("skew2 -2<v;w>", self.skew2),
            ("sym ||v||^2-2<u;w>", self.sym_vw),
            ("split of increment", self.split),
        ]
    }

    pub fn inequalities(&self) -> [(&'static str, f64); 2] {
        [
            ("||w||^2 <= bound", self.w_violation),
            ("increment <= I+B1+B2+C", self.estimate_violation),
        ]
    }

    pub fn pass(&self) -> bool {
        self.identities()
            .iter()
            .chain(self.inequalities().iter())
            .all(|(_, r)| *r <= IDENTITY_TOL)
    }
}

/// Uniform values in `[-1, 1)` on the cells at least `FAR_MARGIN` away from
/// the far edges.
pub fn random_field(rng: &mut ChaCha8Rng, n: usize) -> Field2D {
    let support = n - FAR_MARGIN;
    Field2D::from_interior_fn(n, n, |j, k| {
        if j < support && k < support {
            rng.gen_range(-1.0..1.0)
        } else {
            0.0
        }
    })
}

/// Adds one to the ghost column left of the domain.
pub fn corrupt_ghosts(u: &mut Field2D) {
    for k in -1..u.ny() as isize {
        let g = u.at(-1, k);
        u.set(-1, k, g + 1.0);
    }
}

pub fn audit_fields(
    pairs: &[CflPair],
    trials: usize,
    seed: u64,
    n: usize,
    corrupt: bool,
) -> Result<AuditSummary, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = AuditSummary::default();
    for _ in 0..trials {
        let mut u = random_field(&mut rng, n);
        if corrupt {
            corrupt_ghosts(&mut u);
        }
        for cfl in pairs {
            let l1 = energy::lemma1_verify(&u, cfl)?;
            let l2 = energy::lemma2_verify(&u, cfl)?;
            let b = energy::breakdown(&u, cfl)?;
            let (r1, r2) = l1.relative_residuals();
            s.skew1 = s.skew1.max(r1);
            s.skew2 = s.skew2.max(r2);
            s.sym_vw = s.sym_vw.max(l2.relative_residual());
            s.split = s.split.max(b.split_residual());
            s.w_violation = s.w_violation.max((-b.w_slack()).max(0.0) / (1.0 + b.w_bound.abs()));
            s.estimate_violation = s
                .estimate_violation
                .max((-b.estimate_slack()).max(0.0) / (1.0 + b.norm_sq));
            s.evaluations += 1;
        }
    }
    Ok(s)
}

pub fn run(args: &AuditArgs, out: &mut dyn Write) -> CmdResult {
    if args.n < 2 * FAR_MARGIN + 2 {
        return Err(Failure::usage(format!("--n must be at least {}", 2 * FAR_MARGIN + 2)));
    }
    let pairs: Vec<CflPair> = if args.sweep_cfl {
        SWEEP_PAIRS.iter().map(|&(a, b)| CflPair::new(a, b)).collect()
    } else {
        vec![CflPair::new(args.alpha, args.beta)]
    };
    for p in &pairs {
        if !p.is_outflow() {
            return Err(Failure::new(
                exit::CFL_REJECTED,
                format!("alpha = {}, beta = {}: both must be negative", p.alpha, p.beta),
            ));
        }
    }
    let s = audit_fields(&pairs, args.trials, args.seed, args.n, args.corrupt_ghosts)?;
    let pass = s.pass();
    let report = |out: &mut dyn Write| -> std::io::Result<()> {
        writeln!(
            out,
            "audit: seed {} rng ChaCha8 trials {} grid {}x{} pairs {}",
            args.seed,
            args.trials,
            args.n,
            args.n,
            pairs
                .iter()
                .map(|p| format!("({},{})", p.alpha, p.beta))
                .collect::<Vec<_>>()
                .join(" ")
        )?;
        for (name, r) in s.identities() {
            let verdict = if r <= IDENTITY_TOL { "PASS" } else { "FAIL" };
            writeln!(out, "identity   {name:<24} max relative residual {} {verdict}", num(r))?;
        }
        for (name, r) in s.inequalities() {
            let verdict = if r <= IDENTITY_TOL { "PASS" } else { "FAIL" };
            writeln!(out, "inequality {name:<24} max relative violation {} {verdict}", num(r))?;
        }
        writeln!(out, "{}", if pass { "all checks passed" } else { "some checks failed" })
    };
    report(out).map_err(Failure::report)?;
    Ok(if pass { exit::OK } else { exit::CHECK_FAILED })
}

use lwquad::energy::norm_sq;
use lwquad::scheme1d::*;
use lwquad::scheme2d::{run, step_2d, step_unchecked, Tracking};
use lwquad::{CflMode, CflPair, Field1D, Field2D};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Nine-point update written out coefficient by coefficient.
fn nine_point(u: &Field2D, al: f64, be: f64) -> Vec<f64> {
    let s = al * al + be * be;
    let mut out = Vec::new();
    for k in 0..u.ny() as isize {
        for j in 0..u.nx() as isize {
            let p = |dj: isize, dk: isize| u.at(j + dj, k + dk);
            let c00 = 1.0 - al * al - be * be - s / 2.0;
            let c_e = -al / 2.0 + al * al / 2.0 + s / 4.0;
            let c_w = al / 2.0 + al * al / 2.0 + s / 4.0;
            let c_n = -be / 2.0 + be * be / 2.0 + s / 4.0;
            let c_s = be / 2.0 + be * be / 2.0 + s / 4.0;
            let c_ne = al * be / 4.0 - s / 8.0;
            let c_nw = -al * be / 4.0 - s / 8.0;
            out.push(
                c00 * p(0, 0)
                    + c_e * p(1, 0)
                    + c_w * p(-1, 0)
                    + c_n * p(0, 1)
                    + c_s * p(0, -1)
                    + c_ne * (p(1, 1) + p(-1, -1))
                    + c_nw * (p(-1, 1) + p(1, -1)),
            );
        }
    }
    out
}

fn interior(u: &Field2D) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 0..u.ny() as isize {
        for j in 0..u.nx() as isize {
            out.push(u.at(j, k));
        }
    }
    out
}

fn random_field(rng: &mut ChaCha8Rng, n: usize, support: usize) -> Field2D {
    Field2D::from_interior_fn(n, n, |j, k| {
        if j < support && k < support {
            rng.gen_range(-1.0..1.0)
        } else {
            0.0
        }
    })
}

#[test]
fn split_matches_nine_point_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let u = random_field(&mut rng, 12, 12);
        let cfl = CflPair::new(-rng.gen_range(0.01..0.45), -rng.gen_range(0.01..0.45));
        let got = interior(&step_unchecked(&u, &cfl).unwrap());
        let want = nine_point(&u, cfl.alpha, cfl.beta);
        for (g, w) in got.iter().zip(&want) {
            // inputs bounded by 9 (corner ghosts), nine taps
            assert!((g - w).abs() <= 8.0 * f64::EPSILON * 9.0 * 9.0, "{g} vs {w}");
        }
    }
}

#[test]
fn matches_periodic_stencil_away_from_boundaries() {
    let n = 24;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let vals: Vec<f64> = (0..36).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let u = Field2D::from_interior_fn(n, n, |j, k| {
        if (9..15).contains(&j) && (9..15).contains(&k) {
            vals[(k - 9) * 6 + j - 9]
        } else {
            0.0
        }
    });
    let cfl = CflPair::new(-0.3, -0.25);
    let next = step_2d(&u, &cfl, CflMode::Explore).unwrap();
    // periodic reference on the same box
    let (al, be) = (cfl.alpha, cfl.beta);
    let s = al * al + be * be;
    let per = |j: isize, k: isize| u.at(j.rem_euclid(n as isize), k.rem_euclid(n as isize));
    for k in 0..n as isize {
        for j in 0..n as isize {
            let p = |dj: isize, dk: isize| per(j + dj, k + dk);
            let lap1 = p(1, 0) - 2.0 * p(0, 0) + p(-1, 0);
            let lap2 = p(0, 1) - 2.0 * p(0, 0) + p(0, -1);
            let cross = (p(1, 1) - p(1, -1) - p(-1, 1) + p(-1, -1)) / 4.0;
            let lap12 = p(1, 1) + p(1, -1) + p(-1, 1) + p(-1, -1) - 2.0 * (p(1, 0) + p(-1, 0) + p(0, 1) + p(0, -1))
                + 4.0 * p(0, 0);
            let want = p(0, 0) - al * (p(1, 0) - p(-1, 0)) / 2.0 - be * (p(0, 1) - p(0, -1)) / 2.0
                + al * al / 2.0 * lap1
                + be * be / 2.0 * lap2
                + al * be * cross
                - s / 8.0 * lap12;
            assert!((next.at(j, k) - want).abs() < 1e-14);
        }
    }
}

proptest! {
    #[test]
    fn step_is_linear(
        u in prop::collection::vec(-1.0f64..1.0, 64),
        v in prop::collection::vec(-1.0f64..1.0, 64),
        a in -2.0f64..2.0,
        al in 0.01f64..0.45,
        be in 0.01f64..0.45,
    ) {
        let cfl = CflPair::new(-al, -be);
        let fu = Field2D::from_interior_fn(8, 8, |j, k| u[k * 8 + j]);
        let fv = Field2D::from_interior_fn(8, 8, |j, k| v[k * 8 + j]);
        let fc = Field2D::from_interior_fn(8, 8, |j, k| a * u[k * 8 + j] + v[k * 8 + j]);
        let (su, sv, sc) = (
            step_unchecked(&fu, &cfl).unwrap(),
            step_unchecked(&fv, &cfl).unwrap(),
            step_unchecked(&fc, &cfl).unwrap(),
        );
        for k in 0..8 {
            for j in 0..8 {
                let want = a * su.at(j, k) + sv.at(j, k);
                prop_assert!((sc.at(j, k) - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn modified_1d_energy_never_grows(
        vals in prop::collection::vec(-3.0f64..3.0, 3..30),
        alpha in -0.99f64..-0.01,
    ) {
        let mut v = vals.clone();
        v.extend([0.0; 4]);
        let u = Field1D::from_values(&v).unwrap();
        let next = step_1d(&u, alpha).unwrap();
        prop_assert!(energy_modified_1d(&next) <= energy_modified_1d(&u) + 1e-12 * (1.0 + energy_modified_1d(&u)));
    }

    #[test]
    fn balance_1d_matches_oracle(
        vals in prop::collection::vec(-3.0f64..3.0, 3..30),
        alpha in -0.99f64..-0.01,
    ) {
        let mut v = vals.clone();
        v.extend([0.0; 4]);
        let u = Field1D::from_values(&v).unwrap();
        for modified in [false, true] {
            let (oracle_lhs, oracle_rhs) = oracle_balance_1d(&v, alpha, modified);
            prop_assert!((oracle_lhs - oracle_rhs).abs() <= 1e-12 * (1.0 + oracle_lhs.abs()));
            let r = energy_balance_residual_1d(&u, alpha, modified).unwrap();
            prop_assert!(r.abs() <= 1e-12 * (1.0 + oracle_lhs.abs()));
            let (q, _) = boundary_form_1d(&u, alpha, modified);
            let first = if modified { 1 } else { 0 };
            let lap: f64 = (first..v.len() - 1)
                .map(|j| {
                    let um = if j == 0 { 2.0 * v[0] - v[1] } else { v[j - 1] };
                    (v[j + 1] - 2.0 * v[j] + um).powi(2)
                })
                .sum();
            let from_lib = -dissipation_coefficient(alpha) * lap + q;
            prop_assert!((from_lib - oracle_rhs).abs() <= 1e-12 * (1.0 + oracle_rhs.abs()));
        }
    }

    #[test]
    fn boundary_matrix_signs(alpha in -0.999f64..-0.001) {
        let z = Field1D::from_values(&[0.0; 5]).unwrap();
        let (_, m) = boundary_form_1d(&z, alpha, false);
        let (lo, hi) = sym2_eigenvalues(&m);
        prop_assert!(lo < 0.0 && hi > 0.0);
        let (_, m) = boundary_form_1d(&z, alpha, true);
        prop_assert!(sym2_eigenvalues(&m).1 < 0.0);
        prop_assert!(dissipation_coefficient(alpha) > 0.0);
    }
}

/// Energy change from a hand-rolled step, and the balance rewritten from
/// scratch: both energies lose `alpha^2 (1-alpha^2)/4` times the squared
/// second differences plus a boundary quadratic in `(u_0, p)`.
fn oracle_balance_1d(v: &[f64], alpha: f64, modified: bool) -> (f64, f64) {
    let n = v.len();
    let get = |j: isize| -> f64 {
        if j < 0 {
            2.0 * v[0] - v[1]
        } else if j as usize >= n {
            2.0 * v[n - 1] - v[n - 2]
        } else {
            v[j as usize]
        }
    };
    let next: Vec<f64> = (0..n as isize)
        .map(|j| {
            let (a, b, c) = (get(j - 1), get(j), get(j + 1));
            b - alpha * (c - a) / 2.0 + alpha * alpha * (c - 2.0 * b + a) / 2.0
        })
        .collect();
    let w0 = if modified { 0.5 } else { 1.0 };
    let energy = |x: &[f64]| w0 * x[0] * x[0] + x[1..].iter().map(|y| y * y).sum::<f64>();
    let lhs = energy(&next) - energy(v);
    let first: isize = if modified { 1 } else { 0 };
    let lap: f64 = (first..n as isize)
        .map(|j| (get(j + 1) - 2.0 * get(j) + get(j - 1)).powi(2))
        .sum();
    let p = v[0] - alpha * (v[1] - v[0]);
    let boundary = if modified {
        alpha / 2.0 * (v[0] * v[0] + p * p)
    } else {
        (alpha - 1.0) / 2.0 * v[0] * v[0] + (1.0 + alpha) / 2.0 * p * p
    };
    let rhs = -alpha * alpha * (1.0 - alpha * alpha) / 4.0 * lap + boundary;
    (lhs, rhs)
}

#[test]
fn rows_follow_1d_scheme_in_the_limit() {
    let profile: Vec<f64> = (0..20)
        .map(|j| if j < 14 { (-(j as f64 - 5.0).powi(2) / 6.0).exp() } else { 0.0 })
        .collect();
    let mut u2 = Field2D::from_interior_fn(20, 10, |j, _| profile[j]);
    let mut u1 = Field1D::from_values(&profile).unwrap();
    let cfl = CflPair::new(-0.4, -1e-8);
    for _ in 0..8 {
        u2 = step_2d(&u2, &cfl, CflMode::Explore).unwrap();
        u1 = step_1d(&u1, cfl.alpha).unwrap();
        for k in 0..10 {
            for j in 0..20 {
                assert!((u2.at(j, k) - u1.at(j)).abs() < 1e-6);
            }
        }
    }
    assert!(step_2d(&u2, &cfl, CflMode::Strict).is_err());
}

#[test]
fn strict_runs_do_not_gain_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let u = random_field(&mut rng, 20, 10);
        let cfl = CflPair::new(-rng.gen_range(0.1..0.3), -rng.gen_range(0.1..0.3));
        if cfl.admit(CflMode::Strict).is_err() {
            continue;
        }
        let mut prev = norm_sq(&u);
        run(&u, &cfl, CflMode::Strict, 30, Tracking::Norm, |rec, _| {
            assert!(rec.norm_sq <= prev * (1.0 + 1e-12));
            prev = rec.norm_sq;
        })
        .unwrap();
    }
}

#[test]
fn strict_mode_rejections() {
    let u = Field2D::zeros(8, 8);
    for (a, b) in [(-0.45, -0.05), (0.1, -0.1), (-0.4, -0.4)] {
        assert!(step_2d(&u, &CflPair::new(a, b), CflMode::Strict).is_err(), "({a}, {b})");
    }
    assert!(step_2d(&u, &CflPair::new(-0.45, -0.05), CflMode::Explore).is_ok());
}

use lwquad::regions::*;
use lwquad::CflPair;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Whole-line boundary form evaluated directly in space, `u` and `v`
/// extended by zero.
fn boundary_form_direct(cfl: &CflPair, u: &[f64], v: &[f64]) -> f64 {
    let (a, b) = (cfl.alpha.abs(), cfl.beta.abs());
    let (a2, b2) = (a * a, b * b);
    let s = a2 + b2;
    let at = |x: &[f64], j: i64| {
        if j < 0 || j as usize >= x.len() {
            0.0
        } else {
            x[j as usize]
        }
    };
    let dp = |x: &[f64], j: i64| at(x, j + 1) - at(x, j);
    let d0 = |x: &[f64], j: i64| (at(x, j + 1) - at(x, j - 1)) / 2.0;
    let lap = |x: &[f64], j: i64| at(x, j + 1) - 2.0 * at(x, j) + at(x, j - 1);
    let n = u.len().max(v.len()) as i64;
    let mut total = 0.0;
    for j in -3..n + 3 {
        total += -b * at(u, j).powi(2)
            - b.powi(3) / 2.0 * at(v, j).powi(2)
            - a2 * b / 2.0 * dp(u, j).powi(2)
            - a2 * (1.0 - b).powi(2) / 8.0 * lap(u, j).powi(2)
            - b2 * at(u, j) * at(v, j)
            - a * b2 * d0(u, j) * at(v, j)
            - a2 * b2 / 8.0 * lap(v, j).powi(2)
            + a * s / 4.0 * d0(u, j) * lap(v, j)
            - (1.0 + b - b2) * s / 8.0 * dp(v, j).powi(2)
            - s / 4.0 * dp(u, j) * dp(v, j)
            - a2 * s / 8.0 * lap(u, j) * lap(v, j)
            + a.powi(3) * b * lap(u, j) * d0(v, j);
    }
    total
}

proptest! {
    #[test]
    fn symbol_reproduces_space_form(
        u in prop::collection::vec(-1.0f64..1.0, 1..24),
        v in prop::collection::vec(-1.0f64..1.0, 1..24),
        la in 0.01f64..0.7,
        mb in 0.01f64..0.7,
    ) {
        let cfl = CflPair::new(-la, -mb);
        let direct = boundary_form_direct(&cfl, &u, &v);
        let spectral = whole_line_boundary_form(&cfl, &u, &v);
        let scale: f64 = 1.0 + u.iter().chain(&v).map(|x| x * x).sum::<f64>();
        prop_assert!((direct - spectral).abs() <= 1e-12 * scale, "{} vs {}", direct, spectral);
    }

    #[test]
    fn eigenvalue_and_minor_tests_agree(entries in prop::collection::vec(-1.0f64..1.0, 10), shift in -3.0f64..1.0) {
        let mut m = [[0.0; 4]; 4];
        let mut it = entries.into_iter();
        for i in 0..4 {
            for l in i..4 {
                let x = it.next().unwrap();
                m[i][l] = x;
                m[l][i] = x;
            }
            m[i][i] += shift;
        }
        let q = QuadForm4 { m };
        let top = q.eigenvalues()[3];
        prop_assume!(top.abs() > 1e-6);
        prop_assert_eq!(top < 0.0, q.negative_definite_by_minors());
        prop_assert_eq!(top < 0.0, is_negative_definite_4(&q).unwrap());
    }

    #[test]
    fn determinant_ignores_sign_of_sine(x in 0.0f64..=1.0, la in 0.01f64..0.7, mb in 0.01f64..0.7) {
        let cfl = CflPair::new(-la, -mb);
        let s = 2.0 * (x * (1.0 - x)).sqrt();
        let plus = boundary_symbol(&cfl, x, s).unwrap();
        let minus = boundary_symbol(&cfl, x, -s).unwrap();
        prop_assert_eq!(plus.det(), minus.det());
        prop_assert_eq!(plus.trace(), minus.trace());
    }

    #[test]
    fn trace_negative_inside_ball(x in 0.0f64..=1.0, la in 0.0f64..0.7, mb in 0.001f64..0.7) {
        let cfl = CflPair::new(-la, -mb);
        prop_assume!(cfl.inside_cauchy_ball());
        let h = boundary_symbol(&cfl, x, 2.0 * (x * (1.0 - x)).sqrt()).unwrap();
        prop_assert!(h.trace() < 0.0);
    }

    #[test]
    fn symbol_depends_on_x_only(xi in -10.0f64..10.0, la in 0.01f64..0.7, mb in 0.01f64..0.7) {
        let cfl = CflPair::new(-la, -mb);
        let h = boundary_symbol_at(&cfl, xi);
        let mirrored = boundary_symbol_at(&cfl, -xi);
        prop_assert!((h.det() - mirrored.det()).abs() <= 1e-14);
    }
}

#[test]
fn sampling_refinement_is_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    while checked < 50 {
        let cfl = CflPair::new(-rng.gen_range(0.0..0.71), -rng.gen_range(0.02..0.71));
        if !cfl.inside_cauchy_ball() {
            continue;
        }
        assert_eq!(
            boundary_negdef_all_xi(&cfl, 256),
            boundary_negdef_all_xi(&cfl, 512),
            "{cfl:?}"
        );
        checked += 1;
    }
}

#[test]
fn corner_maps_are_mirror_symmetric() {
    for kind in [RegionKind::Corner, RegionKind::Reduced] {
        let map = sweep(kind, 64).unwrap();
        for j in 0..64 {
            for i in 0..64 {
                assert_eq!(map.get(i, j), map.get(j, i), "{kind:?} ({i}, {j})");
            }
        }
    }
}

#[test]
fn reduced_region_is_larger() {
    let corner = sweep(RegionKind::Corner, 128).unwrap();
    let reduced = sweep(RegionKind::Reduced, 128).unwrap();
    assert!(reduced.count(Region::Good) > corner.count(Region::Good));
    assert_eq!(reduced.count(Region::Outside), corner.count(Region::Outside));
}

#[test]
fn sweep_is_deterministic() {
    assert_eq!(
        sweep(RegionKind::Boundary, 32).unwrap(),
        sweep(RegionKind::Boundary, 32).unwrap()
    );
}

#[test]
fn outside_pixels_follow_ball() {
    let map = sweep(RegionKind::Boundary, 20).unwrap();
    for (i, j, class) in map.iter() {
        let (la, mb) = (map.center(i), map.center(j));
        assert_eq!(class == Region::Outside, la * la + mb * mb > 0.5);
    }
}

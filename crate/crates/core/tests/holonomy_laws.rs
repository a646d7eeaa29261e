mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use hqc_core::holonomy::{concatenate, enclosed_area, holonomy, reverse, LoopFamily, LoopPath, PlaneTag};
use hqc_core::model::{ControlPoint, Coord};
use hqc_core::synthesis::{primitive_holonomy, realize_step_as_loop, Step};
use hqc_core::{CMatrix, UnitaryMatrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::integrated_step;

fn legal_pairs(family: LoopFamily, n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for b in 0..n {
        if family == LoopFamily::C1 {
            v.push((b, b));
            continue;
        }
        for bb in 0..n {
            if bb != b {
                v.push((b, bb));
            }
        }
    }
    v
}

#[test]
fn closed_forms_hold_for_every_family_and_pair() {
    for family in LoopFamily::ALL {
        for n in 1..=4 {
            for (b, bb) in legal_pairs(family, n) {
                for &s in &[0.1, FRAC_PI_4, FRAC_PI_2, PI, 3.0] {
                    let step = Step::new(family, b, Some(bb), s);
                    let want = primitive_holonomy(&step, n).unwrap().matrix;
                    let got = integrated_step(&step, n, 64);
                    let d = got.distance(&want);
                    assert!(d < 1e-7, "{family} n={n} ({b},{bb}) Σ={s}: {d}");
                }
            }
        }
    }
}

#[test]
fn areas_of_realized_rectangles_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let family = LoopFamily::ALL[rng.random_range(0..4)];
        let n = rng.random_range(2..=5);
        let b = rng.random_range(0..n - 1);
        let bb = rng.random_range(b + 1..n);
        let (b, bb) = if family.is_polar_pair() && rng.random_bool(0.5) { (bb, b) } else { (b, bb) };
        let cap = hqc_core::synthesis::capacity(family);
        let s = rng.random_range(-cap..cap);
        let l = realize_step_as_loop(&Step::new(family, b, Some(bb), s), n).unwrap();
        assert!((enclosed_area(&l, family).unwrap() - s).abs() < 1e-10);
    }
}

fn c1_tag() -> PlaneTag {
    PlaneTag::for_family(LoopFamily::C1, 0, 0).unwrap()
}

#[test]
fn holonomy_depends_only_on_area() {
    let base = ControlPoint::origin(2);
    let circle = LoopPath::circle(&base, c1_tag(), [0.8, 1.5], 0.35, 400).unwrap();
    let area = enclosed_area(&circle, LoopFamily::C1).unwrap();
    assert!(area < 0.0);

    let dphi = 1.0;
    let t = (area.abs() / dphi).sqrt().asin();
    let rect = LoopPath::rectangle(&base, c1_tag(), [0.0, 0.0], [t, dphi]).unwrap();

    let (w, a) = (1.2, 0.4f64);
    let b = (2.0 * area.abs() / w - a.sin().powi(2)).sqrt().asin();
    let ell = LoopPath::polygon(&base, c1_tag(), &[[0.0, 0.0], [b, 0.0], [b, w / 2.0], [a, w / 2.0], [a, w], [0.0, w]])
        .unwrap();

    for l in [&rect, &ell] {
        assert!((enclosed_area(l, LoopFamily::C1).unwrap() - area).abs() < 1e-12);
    }
    let gs: Vec<UnitaryMatrix> = [&circle, &rect, &ell].iter().map(|l| holonomy(l, 32).unwrap()).collect();
    for i in 0..3 {
        for j in i + 1..3 {
            let d = gs[i].distance(&gs[j]);
            assert!(d < 1e-6, "shapes {i},{j}: {d}");
        }
    }
}

#[test]
fn midpoint_rule_is_second_order_on_slanted_edges() {
    let base = ControlPoint::origin(3);
    for beta in 0..3 {
        let tag = PlaneTag::for_family(LoopFamily::C1, beta, beta).unwrap();
        let tri = LoopPath::polygon(&base, tag, &[[0.1, 0.2], [1.4, 0.9], [0.5, 2.3]]).unwrap();
        let s = enclosed_area(&tri, LoopFamily::C1).unwrap();
        let want = primitive_holonomy(&Step::c1(beta, s), 3).unwrap().matrix;
        let errs: Vec<f64> = [4, 8, 16].iter().map(|&k| holonomy(&tri, k).unwrap().distance(&want)).collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.5..4.5).contains(&ratio), "β={beta} errors {errs:?}");
        }
    }
}

#[test]
fn generic_loops_converge_to_a_unitary_limit() {
    // several coordinates move at once, so there is no closed form, but the
    // Richardson ratio still shows second order
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pts: Vec<ControlPoint> = (0..5)
        .map(|_| {
            ControlPoint::new(
                (0..3).map(|_| rng.random_range(0.0..FRAC_PI_2)).collect(),
                (0..3).map(|_| rng.random_range(0.0..2.0)).collect(),
            )
            .unwrap()
        })
        .collect();
    pts.push(pts[0].clone());
    let l = LoopPath::new(pts, None).unwrap();
    let g: Vec<UnitaryMatrix> = [16, 32, 64].iter().map(|&k| holonomy(&l, k).unwrap()).collect();
    let ratio = g[0].distance(&g[1]) / g[1].distance(&g[2]);
    assert!((3.5..4.5).contains(&ratio), "{ratio}");
    assert!(g[2].defect() < 1e-12);
    assert!(g[2].distance(&UnitaryMatrix::identity(3)) > 1e-2);
}

#[derive(Debug, Clone)]
struct Case {
    base: ControlPoint,
    tags: [PlaneTag; 2],
    corners: [[f64; 2]; 2],
}

fn coord(n: usize, k: usize) -> Coord {
    if k < n {
        Coord::Theta(k)
    } else {
        Coord::Phi(k - n)
    }
}

fn corner_value(c: Coord, u: f64) -> f64 {
    if c.is_theta() {
        u * FRAC_PI_2
    } else {
        u * 2.0
    }
}

fn case_strategy() -> impl Strategy<Value = Case> {
    (1usize..=4)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(0.0..FRAC_PI_2, n),
                prop::collection::vec(0.0..2.0f64, n),
                [(0..2 * n, 0..2 * n), (0..2 * n, 0..2 * n)],
                [[0.0..1.0f64, 0.0..1.0f64], [0.0..1.0f64, 0.0..1.0f64]],
            )
        })
        .prop_filter_map("distinct plane coordinates", |(n, theta, phi, idx, u)| {
            let base = ControlPoint::new(theta, phi).unwrap();
            let tags = [
                PlaneTag::new(coord(n, idx[0].0), coord(n, idx[0].1)).ok()?,
                PlaneTag::new(coord(n, idx[1].0), coord(n, idx[1].1)).ok()?,
            ];
            let corners = [0, 1].map(|k| {
                [corner_value(tags[k].first, u[k][0]), corner_value(tags[k].second, u[k][1])]
            });
            Some(Case { base, tags, corners })
        })
}

fn rect(case: &Case, k: usize) -> LoopPath {
    let tag = case.tags[k];
    let lo = [case.base.get(tag.first), case.base.get(tag.second)];
    LoopPath::rectangle(&case.base, tag, lo, case.corners[k]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reverse_gives_adjoint(case in case_strategy()) {
        let l = rect(&case, 0);
        let n = l.n();
        let g = holonomy(&l, 8).unwrap();
        let r = holonomy(&reverse(&l), 8).unwrap();
        prop_assert!(r.matrix().max_abs_diff(g.adjoint().matrix()) < 1e-8);
        prop_assert!(g.raw_defect() < 1e-9 && g.defect() < 1e-9);
        prop_assert_eq!(reverse(&reverse(&l)), l.clone());
        let id = holonomy(&concatenate(&l, &reverse(&l)).unwrap(), 8).unwrap();
        prop_assert!(id.matrix().max_abs_diff(&CMatrix::identity(n)) < 1e-8);
    }

    #[test]
    fn concatenation_is_a_homomorphism(case in case_strategy()) {
        let (l1, l2) = (rect(&case, 0), rect(&case, 1));
        let g1 = holonomy(&l1, 8).unwrap();
        let g2 = holonomy(&l2, 8).unwrap();
        let g = holonomy(&concatenate(&l1, &l2).unwrap(), 8).unwrap();
        prop_assert!(g.matrix().max_abs_diff(&(g2.matrix() * g1.matrix())) < 1e-8);
        let with_trivial = concatenate(&l1, &LoopPath::degenerate(l1.base_point())).unwrap();
        prop_assert!(holonomy(&with_trivial, 8).unwrap().distance(&g1) < 1e-10);
    }

    #[test]
    fn zero_area_loops_are_trivial(n in 1usize..=5, t in 0.0..FRAC_PI_2, p in 0.0..3.0f64) {
        // a there-and-back path encloses nothing
        let base = ControlPoint::origin(n);
        let tip = base.with(Coord::Theta(n - 1), t).unwrap().with(Coord::Phi(0), p).unwrap();
        let l = LoopPath::new(vec![base.clone(), tip, base.clone()], None).unwrap();
        let g = holonomy(&l, 16).unwrap();
        prop_assert!(g.matrix().max_abs_diff(&CMatrix::identity(n)) < 1e-12);
        let d = LoopPath::degenerate(&base);
        let cat = concatenate(&d, &d).unwrap();
        let g = holonomy(&cat, 4).unwrap();
        prop_assert_eq!(g.matrix(), &CMatrix::identity(n));
    }
}

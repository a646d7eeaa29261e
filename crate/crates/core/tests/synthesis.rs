mod common;

use std::f64::consts::PI;

use hqc_core::holonomy::{holonomy, LoopFamily};
use hqc_core::linalg::{c, distance_up_to_phase};
use hqc_core::synthesis::{
    capacity, compile_u2_block, compile_unitary, primitive_holonomy, realize_step_as_loop, two_qubit_gate, NamedGate,
    PhaseParams, Step,
};
use hqc_core::CMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::random_unitary;

#[test]
fn single_rectangles_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let family = LoopFamily::ALL[rng.random_range(0..4)];
        let n = rng.random_range(2..=5);
        let b = rng.random_range(0..n - 1);
        let bb = rng.random_range(b + 1..n);
        let (b, bb) = if family.is_polar_pair() && rng.random_bool(0.5) { (bb, b) } else { (b, bb) };
        let cap = capacity(family);
        let step = Step::new(family, b, Some(bb), rng.random_range(-cap..cap));
        let g = holonomy(&realize_step_as_loop(&step, n).unwrap(), 32).unwrap();
        let want = primitive_holonomy(&step, n).unwrap().matrix;
        assert!(g.distance(&want) < 1e-6, "{step:?}");
    }
}

#[test]
fn random_u2_blocks_compile_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let u = random_unitary(&mut rng, 2, 2.0);
        let n = rng.random_range(2..=5);
        let b = rng.random_range(0..n - 1);
        let bb = rng.random_range(b + 1..n);
        let p = compile_u2_block(&u, b, bb, n).unwrap();
        assert!(p.len() <= 6);
        let got = p.evaluate();
        let want = CMatrix::embed_two_level(n, b, bb, &u);
        let (d, phase) = distance_up_to_phase(got.matrix(), &want);
        assert!(d < 1e-8);
        assert!(phase.abs() < 1e-9, "no residual global phase expected");
    }
}

#[test]
fn compiled_u2_programs_integrate_to_the_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let u = random_unitary(&mut rng, 2, 3.0);
        let p = compile_u2_block(&u, 1, 3, 4).unwrap();
        let got = p.integrate(16).unwrap();
        let want = CMatrix::embed_two_level(4, 1, 3, &u);
        assert!(got.matrix().max_abs_diff(&want) < 1e-9);
    }
}

#[test]
fn random_unitaries_compile_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for dim in 1..=8 {
        for _ in 0..5 {
            let u = random_unitary(&mut rng, dim, 2.0);
            let p = compile_unitary(&u).unwrap();
            assert!(p.evaluate().matrix().max_abs_diff(&u) < 1e-10, "dim {dim}");
        }
    }
    assert!(compile_unitary(&CMatrix::identity(5)).unwrap().is_empty());
}

#[test]
fn named_programs_by_closed_form_and_by_integration() {
    let params = PhaseParams { sigma1: 0.6, sigma3: 2.2 };
    for g in NamedGate::ALL {
        let prog = two_qubit_gate(g, params);
        let want = g.standard_matrix(params);
        let (d_eval, _) = distance_up_to_phase(prog.evaluate().matrix(), &want);
        let (d_int, _) = distance_up_to_phase(prog.integrate(32).unwrap().matrix(), &want);
        assert!(d_eval < 1e-12 && d_int < 1e-6, "{g}: {d_eval} {d_int}");
    }
}

#[test]
fn uph1_displayed_block() {
    let (s1, s3) = (0.35f64, 1.2f64);
    let u = two_qubit_gate(NamedGate::Uph1, PhaseParams { sigma1: s1, sigma3: s3 }).evaluate();
    let m = u.matrix();
    let e = |x: f64| c(x.cos(), x.sin());
    assert!((m[(0, 0)] - c(s3.cos(), 0.0)).norm() < 1e-14);
    assert!((m[(0, 1)] + e(-2.0 * s1) * s3.sin()).norm() < 1e-14);
    assert!((m[(1, 0)] - e(2.0 * s1) * s3.sin()).norm() < 1e-14);
    assert!((m[(1, 1)] - c(s3.cos(), 0.0)).norm() < 1e-14);
    assert!((m[(2, 2)] - c(1.0, 0.0)).norm() < 1e-14 && (m[(3, 3)] - c(1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn crot_xor_swap_specifics() {
    let p = PhaseParams::default();
    let crot = two_qubit_gate(NamedGate::Crot, p).evaluate();
    assert!(crot.matrix().max_abs_diff(&CMatrix::from_diagonal(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)])) < 1e-14);
    let xor = two_qubit_gate(NamedGate::Xor, p).evaluate();
    assert!((xor.matrix()[(3, 2)] - c(1.0, 0.0)).norm() < 1e-14);
    let swap = two_qubit_gate(NamedGate::Swap, p).evaluate();
    assert!((swap.matrix()[(2, 1)] - c(1.0, 0.0)).norm() < 1e-14);
    assert!((swap.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn splitting_preserves_the_product() {
    let mut p = hqc_core::GateProgram::new(3);
    p.push_split(Step::c3(0, 2, 2.5)).unwrap();
    assert_eq!(p.len(), 2);
    let want = primitive_holonomy(&Step::c3(0, 2, 2.5), 3).unwrap().matrix;
    assert!(p.evaluate().distance(&want) < 1e-14);
    let mut q = hqc_core::GateProgram::new(2);
    q.push_split(Step::c1(1, -3.0 * PI)).unwrap();
    assert_eq!(q.len(), 3);
}

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use hqc_core::dynamics::{
    adiabatic_transport, code_block, continuous_propagator, kick_evolution, KickPlan, Schedule, DEFAULT_STEPS,
    DEFAULT_TOTAL_TIME,
};
use hqc_core::holonomy::{LoopFamily, LoopPath, PlaneTag};
use hqc_core::linalg::{cis, distance_up_to_phase};
use hqc_core::model::{ControlPoint, Coord};
use hqc_core::synthesis::{primitive_holonomy, realize_step_as_loop, two_qubit_gate, NamedGate, PhaseParams, Step};
use hqc_core::HamiltonianFamily;

fn transport_error(f: &HamiltonianFamily, l: &LoopPath, want: &hqc_core::CMatrix, t: f64) -> (f64, f64) {
    let r = adiabatic_transport(f, &Schedule::new(l.clone(), t, DEFAULT_STEPS).unwrap()).unwrap();
    (r.transport.matrix().max_abs_diff(want), r.max_leakage())
}

#[test]
fn c1_quarter_phase_and_convergence_in_time() {
    let f = HamiltonianFamily::unit(1);
    let l = realize_step_as_loop(&Step::c1(0, FRAC_PI_4), 1).unwrap();
    let want = primitive_holonomy(&Step::c1(0, FRAC_PI_4), 1).unwrap().matrix.into_matrix();
    let (e_short, _) = transport_error(&f, &l, &want, 200.0);
    let (e_long, leak) = transport_error(&f, &l, &want, 2000.0);
    assert!(e_long < 1e-2 && leak < 1e-3, "{e_long} {leak}");
    assert!(e_long < e_short / 2.0, "{e_short} -> {e_long}");
}

#[test]
fn every_family_agrees_with_the_oracle() {
    let n = 3;
    let f = HamiltonianFamily::unit(n);
    let steps = [
        Step::c1(1, 0.9),
        Step::c2(0, 2, 1.1),
        Step::c3(0, 1, 0.8),
        Step::c3(2, 0, 0.6),
        Step::c4(1, 2, -0.7),
        Step::c4(2, 1, 1.2),
    ];
    for s in steps {
        let l = realize_step_as_loop(&s, n).unwrap();
        let want = primitive_holonomy(&s, n).unwrap().matrix.into_matrix();
        let (e200, _) = transport_error(&f, &l, &want, 200.0);
        let (e2000, leak) = transport_error(&f, &l, &want, DEFAULT_TOTAL_TIME);
        assert!(e2000 < 5e-2 && e2000 < e200, "{s:?}: {e200} {e2000}");
        assert!(leak < 1e-3);
    }
}

#[test]
fn crot_program_agrees_with_the_oracle() {
    let f = HamiltonianFamily::unit(4);
    let prog = two_qubit_gate(NamedGate::Crot, PhaseParams::default());
    let l = prog.to_loop().unwrap();
    let want = prog.evaluate().into_matrix();
    let (e_short, _) = transport_error(&f, &l, &want, 400.0);
    let (e_long, _) = transport_error(&f, &l, &want, 2.0 * DEFAULT_TOTAL_TIME);
    assert!(e_long < 5e-2 && e_long < e_short, "{e_short} {e_long}");
}

#[test]
fn epsilon_scales_time() {
    // the dynamics only depends on ε₀T
    let l = realize_step_as_loop(&Step::c1(0, 1.0), 1).unwrap();
    let a = adiabatic_transport(&HamiltonianFamily::unit(1), &Schedule::new(l.clone(), 300.0, 10).unwrap()).unwrap();
    let b = adiabatic_transport(&HamiltonianFamily::new(1, 3.0).unwrap(), &Schedule::new(l, 100.0, 10).unwrap()).unwrap();
    assert!(a.transport.distance(&b.transport) < 1e-6);
}

fn kick_schedule() -> Schedule {
    let tag = PlaneTag::new(Coord::Theta(0), Coord::Phi(0)).unwrap();
    let l = LoopPath::polygon(&ControlPoint::origin(2), tag, &[[0.0, 0.0], [1.0, 0.5], [0.6, 1.5]]).unwrap();
    Schedule::new(l, 5.0, 100).unwrap()
}

#[test]
fn kicks_converge_at_first_order() {
    let f = HamiltonianFamily::unit(2);
    let sched = kick_schedule();
    let exact = continuous_propagator(&f, &sched, 40_000).unwrap();
    let d: Vec<f64> = [250, 500, 1000]
        .iter()
        .map(|&n| {
            let k = kick_evolution(&f, &KickPlan::from_schedule(&sched, n).unwrap()).unwrap();
            (k.matrix() - exact.matrix()).spectral_norm()
        })
        .collect();
    for w in d.windows(2) {
        let ratio = w[0] / w[1];
        assert!((1.6..=2.4).contains(&ratio), "{d:?}");
    }
}

#[test]
fn kicks_reproduce_a_c1_phase() {
    let f = HamiltonianFamily::unit(1);
    let l = realize_step_as_loop(&Step::c1(0, FRAC_PI_2), 1).unwrap();
    let sched = Schedule::new(l, 1000.0, DEFAULT_STEPS).unwrap();
    let plan = KickPlan::from_schedule(&sched, 40_000).unwrap();
    let u = kick_evolution(&f, &plan).unwrap();
    let block = code_block(u.matrix(), sched.path().base_point());
    assert!((block[(0, 0)] - cis(-FRAC_PI_2)).norm() < 5e-2, "{block:?}");
    let want = primitive_holonomy(&Step::c1(0, FRAC_PI_2), 1).unwrap().matrix.into_matrix();
    assert!(distance_up_to_phase(&block, &want).0 < 5e-2);
}

#[test]
fn families_of_loops_in_plane_metadata() {
    let l = realize_step_as_loop(&Step::c2(0, 1, 0.5), 2).unwrap();
    assert_eq!(l.plane(), Some(PlaneTag::for_family(LoopFamily::C2, 0, 1).unwrap()));
}

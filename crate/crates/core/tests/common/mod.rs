#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, TAU};

use hqc_core::holonomy::{concatenate, holonomy};
use hqc_core::linalg::{c, expm_antihermitian};
use hqc_core::model::ControlPoint;
use hqc_core::synthesis::{capacity, lasso, Step};
use hqc_core::{CMatrix, LoopPath, UnitaryMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `exp` of a random anti-hermitian matrix with entries of size ~`scale`.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> CMatrix {
    let mut a = CMatrix::zeros(dim);
    for r in 0..dim {
        a[(r, r)] = c(0.0, rng.random_range(-scale..scale));
        for col in r + 1..dim {
            let z = c(rng.random_range(-scale..scale), rng.random_range(-scale..scale));
            a[(r, col)] = z;
            a[(col, r)] = -z.conj();
        }
    }
    expm_antihermitian(&a)
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> ControlPoint {
    ControlPoint::new(
        (0..n).map(|_| rng.random_range(0.0..=FRAC_PI_2)).collect(),
        (0..n).map(|_| rng.random_range(0.0..TAU)).collect(),
    )
    .unwrap()
}

/// Integrates one step of any size (split into rectangles) as a lasso chain.
pub fn integrated_step(step: &Step, n: usize, segments: usize) -> UnitaryMatrix {
    let parts = (step.area.abs() / capacity(step.family)).ceil().max(1.0) as usize;
    let part = Step { area: step.area / parts as f64, ..*step };
    let one = lasso(&part, n).unwrap();
    let mut l = LoopPath::degenerate(&ControlPoint::origin(n));
    for _ in 0..parts {
        l = concatenate(&l, &one).unwrap();
    }
    holonomy(&l, segments).unwrap()
}

//! The Wilczek–Zee connection `A^μ_{ᾱα} = ⟨ψ^ᾱ| ∂_μ |ψ^α⟩` on the code
//! frame, row `ᾱ`, column `α`.
//!
//! [`connection_analytic`] evaluates the closed formulas; [`connection_numeric`]
//! differentiates the closed-form eigenvectors by central differences and is
//! the independent check on them. Both use the same smooth frame, never an
//! eigensolver, so there are no per-point phase jumps.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)] // f64 math is inherent in core on newer toolchains
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{cis, CMatrix, C64};
use crate::model::{eigenstate, ControlPoint, Coord};

/// Default central-difference step (radians).
pub const DEFAULT_STEP: f64 = 1e-5;

/// The `2n` anti-hermitian `n×n` components of the connection at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionValue {
    a_theta: Vec<CMatrix>,
    a_phi: Vec<CMatrix>,
}

impl ConnectionValue {
    pub fn n(&self) -> usize {
        self.a_theta.len()
    }

    /// `A^{θ_β}` for `β = 0..n`.
    pub fn a_theta(&self) -> &[CMatrix] {
        &self.a_theta
    }

    /// `A^{φ_β}` for `β = 0..n`.
    pub fn a_phi(&self) -> &[CMatrix] {
        &self.a_phi
    }

    pub fn component(&self, coord: Coord) -> &CMatrix {
        match coord {
            Coord::Theta(k) => &self.a_theta[k],
            Coord::Phi(k) => &self.a_phi[k],
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (Coord, &CMatrix)> {
        let t = self.a_theta.iter().enumerate().map(|(k, m)| (Coord::Theta(k), m));
        let p = self.a_phi.iter().enumerate().map(|(k, m)| (Coord::Phi(k), m));
        t.chain(p)
    }

    /// Largest entry-wise difference over all components.
    pub fn max_abs_diff(&self, other: &ConnectionValue) -> f64 {
        self.components()
            .zip(other.components())
            .map(|((_, a), (_, b))| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn max_antihermitian_defect(&self) -> f64 {
        self.components().map(|(_, m)| m.antihermitian_defect()).fold(0.0, f64::max)
    }
}

struct Trig {
    sin: Vec<f64>,
    cos: Vec<f64>,
    phi: Vec<f64>,
}

impl Trig {
    fn new(p: &ControlPoint) -> Self {
        let (sin, cos) = p.theta().iter().map(|t| t.sin_cos()).unzip();
        Trig { sin, cos, phi: p.phi().to_vec() }
    }

    /// `∏_{lo ≤ γ < hi} cos θ_γ`
    fn cos_prod(&self, lo: usize, hi: usize) -> f64 {
        (lo..hi).map(|g| self.cos[g]).product()
    }

    fn phase(&self, a: usize, b: usize) -> C64 {
        cis(self.phi[a] - self.phi[b])
    }
}

fn set_antihermitian_pair(m: &mut CMatrix, row: usize, col: usize, value: C64) {
    m[(row, col)] = value;
    if row != col {
        m[(col, row)] = -value.conj();
    }
}

fn a_theta(t: &Trig, n: usize, beta: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n);
    for ab in 0..beta {
        let v = t.phase(ab, beta) * (t.sin[ab] * t.cos_prod(ab + 1, beta));
        set_antihermitian_pair(&mut m, ab, beta, v);
    }
    m
}

fn a_phi(t: &Trig, n: usize, beta: usize) -> CMatrix {
    let i = C64::new(0.0, 1.0);
    let mut m = CMatrix::zeros(n);
    // column β, rows ᾱ ≤ β
    for ab in 0..=beta {
        let v = -i * t.phase(ab, beta) * (t.sin[beta] * t.sin[ab] * t.cos_prod(ab + 1, beta + 1));
        set_antihermitian_pair(&mut m, ab, beta, v);
    }
    // columns α < β, rows ᾱ ≤ α
    let s2 = t.sin[beta] * t.sin[beta];
    for al in 0..beta {
        for ab in 0..=al {
            let mag = t.sin[al] * t.sin[ab] * s2 * t.cos_prod(al + 1, beta) * t.cos_prod(ab + 1, beta);
            set_antihermitian_pair(&mut m, ab, al, i * t.phase(ab, al) * mag);
        }
    }
    m
}

/// One component of the connection from the closed formulas.
pub fn component_analytic(p: &ControlPoint, coord: Coord) -> CMatrix {
    let t = Trig::new(p);
    match coord {
        Coord::Theta(b) => a_theta(&t, p.n(), b),
        Coord::Phi(b) => a_phi(&t, p.n(), b),
    }
}

/// All `2n` components from the closed formulas.
pub fn connection_analytic(p: &ControlPoint) -> ConnectionValue {
    let t = Trig::new(p);
    let n = p.n();
    ConnectionValue {
        a_theta: (0..n).map(|b| a_theta(&t, n, b)).collect(),
        a_phi: (0..n).map(|b| a_phi(&t, n, b)).collect(),
    }
}

/// Finite-difference connection plus the anti-hermiticity defect measured
/// before symmetrization.
#[derive(Debug, Clone)]
pub struct NumericConnection {
    pub value: ConnectionValue,
    pub antihermitian_defect: f64,
}

/// Central-difference connection: `⟨ψ^ᾱ(p)| (ψ^α(p + h e_μ) − ψ^α(p − h e_μ)) / 2h⟩`,
/// then `M ← (M − M†)/2`.
///
/// Every `θ` coordinate must sit at least `step` inside `[0, π/2]`.
pub fn connection_numeric(p: &ControlPoint, step: f64) -> Result<NumericConnection> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidDiscretization { coord: Coord::Theta(0), step });
    }
    let n = p.n();
    for (k, &t) in p.theta().iter().enumerate() {
        if t - step < 0.0 || t + step > FRAC_PI_2 {
            return Err(Error::InvalidDiscretization { coord: Coord::Theta(k), step });
        }
    }
    let frame: Vec<Vec<C64>> = (0..n).map(|a| eigenstate(p, a)).collect::<Result<_>>()?;

    let mut defect = 0.0f64;
    let mut derivative = |coord: Coord| -> Result<CMatrix> {
        let x = p.get(coord);
        let up = p.with(coord, x + step)?;
        let dn = p.with(coord, x - step)?;
        let mut m = CMatrix::zeros(n);
        for al in 0..n {
            let vu = eigenstate(&up, al)?;
            let vd = eigenstate(&dn, al)?;
            for (ab, bra) in frame.iter().enumerate() {
                let ip: C64 = bra
                    .iter()
                    .zip(vu.iter().zip(&vd))
                    .map(|(b, (u, d))| b.conj() * (u - d))
                    .sum();
                m[(ab, al)] = ip / (2.0 * step);
            }
        }
        defect = defect.max(m.antihermitian_defect());
        Ok(m.antihermitian_part())
    };
    let a_theta = (0..n).map(|b| derivative(Coord::Theta(b))).collect::<Result<Vec<_>>>()?;
    let a_phi = (0..n).map(|b| derivative(Coord::Phi(b))).collect::<Result<Vec<_>>>()?;
    Ok(NumericConnection { value: ConnectionValue { a_theta, a_phi }, antihermitian_defect: defect })
}

//! Gate programs built from the four primitive loop families, the `U(2)`
//! and `U(n)` compilers, and the two-qubit constructions on `CP^4`.
//!
//! A step's closed form is `exp` of a fixed generator times its area `Σ`:
//!
//! | family | plane, frozen values | holonomy |
//! |---|---|---|
//! | C1 | `(θ_β, φ_β)`, other `θ = 0` | `exp(−iΣ|β⟩⟨β|)` |
//! | C2 | `(θ_β, φ_β̄)`, `θ_β̄ = π/2`, `φ_β = 0`, other `θ = 0` | `exp(+iΣ|β⟩⟨β|)` if `β < β̄`, else `𝟙` |
//! | C3 | `(θ_β, θ_β̄)`, `φ_β = φ_β̄ = 0` | `exp(−(|β⟩⟨β̄| − |β̄⟩⟨β|)Σ)` |
//! | C4 | `(θ_β, θ_β̄)`, `φ_β = π/2`, `φ_β̄ = 0` | `exp(−i(|β⟩⟨β̄| + |β̄⟩⟨β|)Σ)` |
//!
//! Areas follow [`enclosed_area`](crate::holonomy::enclosed_area). Every
//! step is realized as a lasso based at the chart origin, so a program is a
//! single closed loop and can be integrated as one path-ordered product.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // f64 math is inherent in core on newer toolchains
use num_traits::Float;

use crate::error::{Error, Result};
use crate::holonomy::{concatenate, holonomy, reverse, LoopFamily, LoopPath, PlaneTag};
use crate::linalg::{c, cis, CMatrix, UnitaryMatrix, C64};
use crate::model::{ControlPoint, Coord};

/// Areas below this are dropped by the compilers.
const AREA_EPS: f64 = 1e-15;

/// One primitive loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub family: LoopFamily,
    pub beta: usize,
    /// Second level; ignored (and `None`) for C1.
    pub beta_bar: Option<usize>,
    pub area: f64,
}

/// Non-fatal findings while evaluating a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    /// C2 with `β̄ < β`: the connection is pure gauge on that plane.
    TrivialHolonomy { beta: usize, beta_bar: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::TrivialHolonomy { beta, beta_bar } => write!(
                f,
                "C2 with beta_bar < beta (levels {} and {}) has trivial holonomy",
                beta + 1,
                beta_bar + 1
            ),
        }
    }
}

/// A closed-form step holonomy and any warning raised while producing it.
#[derive(Debug, Clone)]
pub struct Primitive {
    pub matrix: UnitaryMatrix,
    pub warning: Option<Warning>,
}

impl Step {
    pub fn c1(beta: usize, area: f64) -> Self {
        Step { family: LoopFamily::C1, beta, beta_bar: None, area }
    }

    pub fn c2(beta: usize, beta_bar: usize, area: f64) -> Self {
        Step { family: LoopFamily::C2, beta, beta_bar: Some(beta_bar), area }
    }

    pub fn c3(beta: usize, beta_bar: usize, area: f64) -> Self {
        Step { family: LoopFamily::C3, beta, beta_bar: Some(beta_bar), area }
    }

    pub fn c4(beta: usize, beta_bar: usize, area: f64) -> Self {
        Step { family: LoopFamily::C4, beta, beta_bar: Some(beta_bar), area }
    }

    pub fn new(family: LoopFamily, beta: usize, beta_bar: Option<usize>, area: f64) -> Self {
        let beta_bar = if family == LoopFamily::C1 { None } else { beta_bar };
        Step { family, beta, beta_bar, area }
    }

    fn second(&self) -> usize {
        self.beta_bar.unwrap_or(self.beta)
    }

    /// Checks index ranges and distinctness; C2 with `β̄ < β` passes here.
    fn check_lenient(&self, n: usize) -> Result<()> {
        if !self.area.is_finite() {
            return Err(Error::NonFinite("step area"));
        }
        if self.beta >= n {
            return Err(Error::LevelOutOfRange { level: self.beta, limit: n });
        }
        if self.family == LoopFamily::C1 {
            return Ok(());
        }
        let bb = self
            .beta_bar
            .ok_or_else(|| Error::Constraint(format!("{} needs a second level", self.family)))?;
        if bb >= n {
            return Err(Error::LevelOutOfRange { level: bb, limit: n });
        }
        if bb == self.beta {
            return Err(Error::Constraint(format!("{} needs two distinct levels", self.family)));
        }
        Ok(())
    }

    /// Full constraint check used by [`GateProgram`]: additionally C2 needs `β̄ > β`.
    pub fn validate(&self, n: usize) -> Result<()> {
        self.check_lenient(n)?;
        if self.family == LoopFamily::C2 && self.second() < self.beta {
            return Err(Error::Constraint(format!(
                "C2 needs beta_bar > beta (got levels {} and {}); the holonomy would be trivial",
                self.beta + 1,
                self.second() + 1
            )));
        }
        Ok(())
    }

    /// The frozen coordinate values that define the family's plane besides
    /// "every other `θ` is 0".
    pub fn frozen(&self) -> Vec<(Coord, f64)> {
        let (b, bb) = (self.beta, self.second());
        match self.family {
            LoopFamily::C1 => vec![],
            LoopFamily::C2 => vec![(Coord::Theta(bb), FRAC_PI_2), (Coord::Phi(b), 0.0)],
            LoopFamily::C3 => vec![(Coord::Phi(b), 0.0), (Coord::Phi(bb), 0.0)],
            LoopFamily::C4 => vec![(Coord::Phi(b), FRAC_PI_2), (Coord::Phi(bb), 0.0)],
        }
    }

    pub fn plane(&self) -> PlaneTag {
        PlaneTag::for_family(self.family, self.beta, self.second()).expect("validated step has distinct coordinates")
    }

    /// The plane's corner `(0, 0)` with the frozen values applied.
    fn base_point(&self, n: usize) -> Result<ControlPoint> {
        self.frozen().into_iter().try_fold(ControlPoint::origin(n), |p, (coord, v)| p.with(coord, v))
    }
}

/// Largest `|Σ|` one rectangle of the family can enclose.
pub fn capacity(family: LoopFamily) -> f64 {
    if family.is_polar_pair() {
        FRAC_PI_2
    } else {
        PI
    }
}

/// The closed-form holonomy of a step on the `n`-dimensional code.
pub fn primitive_holonomy(step: &Step, n: usize) -> Result<Primitive> {
    step.check_lenient(n)?;
    let (b, bb, s) = (step.beta, step.second(), step.area);
    let (sin, cos) = s.sin_cos();
    let mut warning = None;
    let m = match step.family {
        LoopFamily::C1 => phase_matrix(n, b, -s),
        LoopFamily::C2 if bb > b => phase_matrix(n, b, s),
        LoopFamily::C2 => {
            warning = Some(Warning::TrivialHolonomy { beta: b, beta_bar: bb });
            CMatrix::identity(n)
        }
        LoopFamily::C3 => CMatrix::embed_two_level(n, b, bb, &CMatrix::from_real(2, &[cos, -sin, sin, cos])),
        LoopFamily::C4 => {
            let block = CMatrix::from_row_major(vec![c(cos, 0.0), c(0.0, -sin), c(0.0, -sin), c(cos, 0.0)])?;
            CMatrix::embed_two_level(n, b, bb, &block)
        }
    };
    Ok(Primitive { matrix: UnitaryMatrix::from_exact(m), warning })
}

fn phase_matrix(n: usize, level: usize, angle: f64) -> CMatrix {
    let mut d = vec![c(1.0, 0.0); n];
    d[level] = cis(angle);
    CMatrix::from_diagonal(&d)
}

/// A rectangle in the step's plane, based at the plane's `(0, 0)` corner,
/// whose enclosed area is exactly the step's `Σ`.
///
/// C1/C2 use `Δφ = clamp(|Σ|, π/2, π)` and `θ* = arcsin √(|Σ|/Δφ)`; C3/C4 span
/// `[0, π/2]` along the larger level's `θ` and `[0, arcsin(2|Σ|/π)]` along the
/// smaller one.
pub fn realize_step_as_loop(step: &Step, n: usize) -> Result<LoopPath> {
    step.check_lenient(n)?;
    let base = step.base_point(n)?;
    let s = step.area;
    if s.abs() < AREA_EPS {
        return Ok(LoopPath::degenerate(&base));
    }
    let cap = capacity(step.family);
    if s.abs() > cap * (1.0 + 1e-12) {
        return Err(Error::AreaOutOfRange { family: step.family, area: s, capacity: cap });
    }
    let a = s.abs().min(cap);
    let plane = step.plane();
    let positive = if step.family.is_polar_pair() {
        let corner = (2.0 * a / PI).min(1.0).asin();
        let hi = if step.beta < step.second() { [corner, FRAC_PI_2] } else { [FRAC_PI_2, corner] };
        LoopPath::rectangle(&base, plane, [0.0, 0.0], hi)?
    } else {
        let dphi = a.clamp(FRAC_PI_2, PI);
        let t = (a / dphi).sqrt().min(1.0).asin();
        LoopPath::polygon(&base, plane, &[[0.0, 0.0], [0.0, dphi], [t, dphi], [t, 0.0]])?
    };
    Ok(if s > 0.0 { positive } else { reverse(&positive) })
}

/// The step's rectangle reached from the chart origin along the frozen
/// coordinates, where the connection vanishes, and back.
pub fn lasso(step: &Step, n: usize) -> Result<LoopPath> {
    let rect = realize_step_as_loop(step, n)?;
    let origin = ControlPoint::origin(n);
    if rect.base_point() == &origin {
        return Ok(rect);
    }
    let mut points = Vec::with_capacity(rect.points().len() + 2);
    points.push(origin.clone());
    points.extend_from_slice(rect.points());
    points.push(origin);
    LoopPath::new(points, None)
}

/// An ordered sequence of primitive steps acting on an `n`-level code.
#[derive(Debug, Clone, PartialEq)]
pub struct GateProgram {
    n: usize,
    steps: Vec<Step>,
}

impl GateProgram {
    pub fn new(n: usize) -> Self {
        GateProgram { n, steps: Vec::new() }
    }

    pub fn from_steps(n: usize, steps: Vec<Step>) -> Result<Self> {
        let mut p = GateProgram::new(n);
        for s in steps {
            p.push(s)?;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: Step) -> Result<()> {
        step.validate(self.n)?;
        self.steps.push(step);
        Ok(())
    }

    /// Pushes `step`, split into equal parts that each fit one rectangle.
    pub fn push_split(&mut self, step: Step) -> Result<()> {
        step.validate(self.n)?;
        let parts = (step.area.abs() / capacity(step.family)).ceil().max(1.0) as usize;
        for _ in 0..parts {
            self.steps.push(Step { area: step.area / parts as f64, ..step });
        }
        Ok(())
    }

    pub fn extend(&mut self, other: &GateProgram) -> Result<()> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        self.steps.extend_from_slice(&other.steps);
        Ok(())
    }

    /// Product of the closed forms, later steps on the left.
    pub fn evaluate(&self) -> UnitaryMatrix {
        let m = self.steps.iter().fold(CMatrix::identity(self.n), |acc, s| {
            let p = primitive_holonomy(s, self.n).expect("steps are validated on push");
            p.matrix.matrix() * &acc
        });
        UnitaryMatrix::project(m).expect("product of exact unitaries")
    }

    /// The whole program as one closed loop at the chart origin; steps too
    /// large for one rectangle become several.
    pub fn to_loop(&self) -> Result<LoopPath> {
        let mut acc = LoopPath::degenerate(&ControlPoint::origin(self.n));
        for s in &self.steps {
            let mut split = GateProgram::new(self.n);
            split.push_split(*s)?;
            for part in &split.steps {
                acc = concatenate(&acc, &lasso(part, self.n)?)?;
            }
        }
        Ok(acc)
    }

    /// Integrates the connection around [`to_loop`](Self::to_loop).
    pub fn integrate(&self, segments_per_edge: usize) -> Result<UnitaryMatrix> {
        holonomy(&self.to_loop()?, segments_per_edge)
    }
}

/// Factorizes a `2×2` unitary acting on levels `β < β̄` as
/// `diag(e^{ia}, e^{ib}) · R(θ) · diag(e^{ic}, 1)` with `R` the C3 rotation,
/// realized by at most four steps `C2(c), C3(θ), C2(a), C1(β̄, −b)`.
/// The match is exact, global phase included.
pub fn compile_u2_block(target: &CMatrix, beta: usize, beta_bar: usize, n: usize) -> Result<GateProgram> {
    if target.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: target.dim() });
    }
    if beta >= beta_bar {
        return Err(Error::Constraint(format!("block levels must satisfy beta < beta_bar, got {beta} and {beta_bar}")));
    }
    if beta_bar >= n {
        return Err(Error::LevelOutOfRange { level: beta_bar, limit: n });
    }
    let u = UnitaryMatrix::new(target.clone())?.into_matrix();
    let (u11, u12, u21, u22) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let theta = u21.norm().atan2(u11.norm());
    let (a, b, cph) = if u12.norm() < 1e-12 {
        (0.0, u22.arg(), u11.arg())
    } else if u11.norm() < 1e-12 {
        let a = (-u12).arg();
        (a, 0.0, u21.arg())
    } else {
        let a = (-u12).arg();
        (a, u22.arg(), u11.arg() - a)
    };
    let mut p = GateProgram::new(n);
    for step in [
        Step::c2(beta, beta_bar, wrap_angle(cph)),
        Step::c3(beta, beta_bar, theta),
        Step::c2(beta, beta_bar, wrap_angle(a)),
        Step::c1(beta_bar, -wrap_angle(b)),
    ] {
        if step.area.abs() > AREA_EPS {
            p.push(step)?;
        }
    }
    Ok(p)
}

/// Reduces an angle to `(−π, π]`.
fn wrap_angle(x: f64) -> f64 {
    crate::model::phi_delta(0.0, x)
}

/// Compiles an `N×N` unitary by two-level (Givens) elimination: `U = G₁†⋯G_m† D`,
/// each `G_k†` through [`compile_u2_block`] and `D` through C1 phases.
pub fn compile_unitary(target: &CMatrix) -> Result<GateProgram> {
    let n = target.dim();
    let mut m = UnitaryMatrix::new(target.clone())?.into_matrix();
    let mut rotations: Vec<(usize, usize, CMatrix)> = Vec::new();
    for j in 0..n {
        for i in j + 1..n {
            let (a, b) = (m[(j, j)], m[(i, j)]);
            if b.norm() < 1e-14 {
                continue;
            }
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let g = CMatrix::from_row_major(vec![a.conj() / r, b.conj() / r, -b / r, a / r])?;
            m = &CMatrix::embed_two_level(n, j, i, &g) * &m;
            rotations.push((j, i, g));
        }
    }
    let mut p = GateProgram::new(n);
    for k in 0..n {
        let angle = m[(k, k)].arg();
        if angle.abs() > AREA_EPS {
            p.push(Step::c1(k, -angle))?;
        }
    }
    for (j, i, g) in rotations.iter().rev() {
        p.extend(&compile_u2_block(&g.adjoint(), *j, *i, n)?)?;
    }
    Ok(p)
}

/// The rotation angles of the single-qubit phase gates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams {
    pub sigma1: f64,
    pub sigma3: f64,
}

impl Default for PhaseParams {
    fn default() -> Self {
        PhaseParams { sigma1: FRAC_PI_8, sigma3: FRAC_PI_4 }
    }
}

impl PhaseParams {
    /// `[[cos σ₃, −sin σ₃ e^{−2iσ₁}], [sin σ₃ e^{2iσ₁}, cos σ₃]]`
    pub fn qubit_matrix(&self) -> CMatrix {
        let (s, co) = self.sigma3.sin_cos();
        let w = cis(2.0 * self.sigma1);
        CMatrix::from_row_major(vec![c(co, 0.0), -w.conj() * s, w * s, c(co, 0.0)]).expect("2×2")
    }
}

/// The named two-qubit gates on `CP^4`, basis `|00⟩, |01⟩, |10⟩, |11⟩` ↔ levels `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedGate {
    /// `|0⟩⟨0| ⊗ 𝟙 + |1⟩⟨1| ⊗ σ_x`
    Xor,
    /// `|0⟩⟨0| ⊗ 𝟙 + |1⟩⟨1| ⊗ σ_z`
    Crot,
    Swap,
    /// `U_q ⊗ 𝟙`
    Phase1,
    /// `𝟙 ⊗ U_q`
    Phase2,
    /// `U_q` on levels `{0, 1}`, identity on `{2, 3}`
    Uph1,
    /// `U_q` on levels `{2, 3}`, identity on `{0, 1}`
    Uph2,
}

impl NamedGate {
    pub const ALL: [NamedGate; 7] = [
        NamedGate::Xor,
        NamedGate::Crot,
        NamedGate::Swap,
        NamedGate::Phase1,
        NamedGate::Phase2,
        NamedGate::Uph1,
        NamedGate::Uph2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedGate::Xor => "XOR",
            NamedGate::Crot => "CROT",
            NamedGate::Swap => "SWAP",
            NamedGate::Phase1 => "PHASE1",
            NamedGate::Phase2 => "PHASE2",
            NamedGate::Uph1 => "UPH1",
            NamedGate::Uph2 => "UPH2",
        }
    }

    /// Whether the gate depends on [`PhaseParams`].
    pub fn is_parametrized(self) -> bool {
        matches!(self, NamedGate::Phase1 | NamedGate::Phase2 | NamedGate::Uph1 | NamedGate::Uph2)
    }

    /// The textbook matrix in the computational basis.
    pub fn standard_matrix(self, params: PhaseParams) -> CMatrix {
        let one = c(1.0, 0.0);
        let perm = |p: [usize; 4]| CMatrix::from_fn(4, |r, col| if p[col] == r { one } else { C64::default() });
        let q = params.qubit_matrix();
        match self {
            NamedGate::Xor => perm([0, 1, 3, 2]),
            NamedGate::Crot => CMatrix::from_diagonal(&[one, one, one, -one]),
            NamedGate::Swap => perm([0, 2, 1, 3]),
            NamedGate::Phase1 => q.kron(&CMatrix::identity(2)),
            NamedGate::Phase2 => CMatrix::identity(2).kron(&q),
            NamedGate::Uph1 => embed_block(&q, 0),
            NamedGate::Uph2 => embed_block(&q, 2),
        }
    }
}

fn embed_block(q: &CMatrix, at: usize) -> CMatrix {
    CMatrix::embed_two_level(4, at, at + 1, q)
}

impl fmt::Display for NamedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedGate::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Constraint(format!("unknown gate `{s}`")))
    }
}

/// `U_q` on levels `{at, at+1}` conjugated by C1 phases:
/// `D† R(σ₃) D` with `D = diag(e^{iσ₁}, e^{−iσ₁})`.
fn phase_block_steps(at: usize, p: PhaseParams) -> [Step; 5] {
    [
        Step::c1(at, -p.sigma1),
        Step::c1(at + 1, p.sigma1),
        Step::c3(at, at + 1, p.sigma3),
        Step::c1(at + 1, -p.sigma1),
        Step::c1(at, p.sigma1),
    ]
}

/// The loop program of a named gate on `n = 4`.
pub fn two_qubit_gate(gate: NamedGate, params: PhaseParams) -> GateProgram {
    let swap = [Step::c4(1, 2, FRAC_PI_2), Step::c1(1, -FRAC_PI_2), Step::c1(2, -FRAC_PI_2)];
    let steps: Vec<Step> = match gate {
        NamedGate::Xor => vec![Step::c4(2, 3, FRAC_PI_2), Step::c1(2, -FRAC_PI_2), Step::c1(3, -FRAC_PI_2)],
        NamedGate::Crot => vec![Step::c1(3, FRAC_PI_2), Step::c1(3, FRAC_PI_2)],
        NamedGate::Swap => swap.to_vec(),
        NamedGate::Uph1 => phase_block_steps(0, params).to_vec(),
        NamedGate::Uph2 => phase_block_steps(2, params).to_vec(),
        NamedGate::Phase2 => [phase_block_steps(0, params), phase_block_steps(2, params)].concat(),
        NamedGate::Phase1 => {
            let mut s = swap.to_vec();
            s.extend(phase_block_steps(0, params));
            s.extend(phase_block_steps(2, params));
            s.extend(swap);
            s
        }
    };
    GateProgram::from_steps(4, steps).expect("named programs are valid")
}

//! Physical-dynamics oracles: adiabatic Schrödinger transport around a loop
//! and the repeated-kick scheme with its continuum limit.
//!
//! Every propagator step is `exp(−i H(λ) δt)` with `H(λ) = ε₀ |v⟩⟨v|` rank
//! one, applied in closed form as `𝟙 + (e^{−iε₀δt} − 1)|v⟩⟨v|`, so it is
//! unitary to rounding. The code sits at eigenvalue 0, hence code overlaps
//! carry no dynamical phase.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // f64 math is inherent in core on newer toolchains
use num_traits::Float;

use crate::error::{Error, Result};
use crate::holonomy::{holonomy, LoopPath};
use crate::linalg::{cis, polar_unitary, CMatrix, UnitaryMatrix, C64};
use crate::model::{code_frame, eigenstate, frame_unitary, ControlPoint, HamiltonianFamily};

/// Largest `ε₀ δt` the adiabatic stepper takes.
pub const MAX_PHASE_STEP: f64 = 0.05;
/// Default `ε₀ T` for transport runs.
pub const DEFAULT_TOTAL_TIME: f64 = 2000.0;
/// Default minimum step count.
pub const DEFAULT_STEPS: usize = 1000;
/// Default leakage above which a run is reported as non-adiabatic.
pub const DEFAULT_LEAKAGE_BOUND: f64 = 1e-3;
/// Segments per edge for the reference holonomy in transport reports.
pub const REFERENCE_SEGMENTS: usize = 64;
/// Default factor required by the `≪` time-scale checks.
pub const DEFAULT_MARGIN: f64 = 10.0;

/// Reparametrization `s: [0, 1] → [0, 1]` of the loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ramp {
    Linear,
    /// `3x² − 2x³`, zero velocity at both ends.
    #[default]
    Smoothstep,
}

impl Ramp {
    pub fn eval(self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            Ramp::Linear => x,
            Ramp::Smoothstep => x * x * (3.0 - 2.0 * x),
        }
    }
}

/// A loop traversed in time `T` (units of `1/ε₀`).
#[derive(Debug, Clone)]
pub struct Schedule {
    path: LoopPath,
    total_time: f64,
    ramp: Ramp,
    steps: usize,
    leakage_bound: f64,
    cumulative: Vec<f64>,
}

impl Schedule {
    pub fn new(path: LoopPath, total_time: f64, steps: usize) -> Result<Self> {
        if !(total_time > 0.0 && total_time.is_finite()) {
            return Err(Error::InvalidSchedule(format!("total time must be positive and finite, got {total_time}")));
        }
        if steps == 0 {
            return Err(Error::InvalidSchedule("step count must be positive".into()));
        }
        let mut cumulative = vec![0.0];
        for w in path.points().windows(2) {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + w[0].distance(&w[1]));
        }
        Ok(Schedule { path, total_time, ramp: Ramp::default(), steps, leakage_bound: DEFAULT_LEAKAGE_BOUND, cumulative })
    }

    pub fn with_ramp(mut self, ramp: Ramp) -> Self {
        self.ramp = ramp;
        self
    }

    pub fn with_leakage_bound(mut self, bound: f64) -> Self {
        self.leakage_bound = bound;
        self
    }

    pub fn path(&self) -> &LoopPath {
        &self.path
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn ramp(&self) -> Ramp {
        self.ramp
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn leakage_bound(&self) -> f64 {
        self.leakage_bound
    }

    /// The point a fraction `s` of the way along the loop, by coordinate length.
    pub fn point_at(&self, s: f64) -> ControlPoint {
        let pts = self.path.points();
        let total = *self.cumulative.last().unwrap();
        if total == 0.0 || s <= 0.0 {
            return pts[0].clone();
        }
        if s >= 1.0 {
            return pts[pts.len() - 1].clone();
        }
        let target = s * total;
        let k = self.cumulative.partition_point(|&c| c <= target).clamp(1, pts.len() - 1) - 1;
        let len = self.cumulative[k + 1] - self.cumulative[k];
        let t = if len > 0.0 { (target - self.cumulative[k]) / len } else { 0.0 };
        pts[k].offset(&pts[k].displacement_to(&pts[k + 1]), t)
    }

    /// `λ(t)` for `t ∈ [0, T]`.
    pub fn point_at_time(&self, t: f64) -> ControlPoint {
        self.point_at(self.ramp.eval(t / self.total_time))
    }

    /// Step count actually used for `ε₀`: at least `steps`, and enough that
    /// `|ε₀| δt ≤ 0.05`.
    pub fn effective_steps(&self, epsilon0: f64) -> usize {
        let needed = (epsilon0.abs() * self.total_time / MAX_PHASE_STEP).ceil() as usize;
        self.steps.max(needed)
    }
}

/// Applies `exp(−i ε₀ δt |v⟩⟨v|)` to each state in place.
fn rank_one_step(states: &mut [Vec<C64>], v: &[C64], factor: C64) {
    for psi in states.iter_mut() {
        let proj: C64 = v.iter().zip(psi.iter()).map(|(a, b)| a.conj() * b).sum();
        let k = factor * proj;
        for (x, a) in psi.iter_mut().zip(v) {
            *x += k * a;
        }
    }
}

/// Propagates `states` through `H(λ(t))` with the exponential midpoint rule.
fn propagate(f: &HamiltonianFamily, sched: &Schedule, states: &mut [Vec<C64>], steps: usize) -> Result<()> {
    let n = f.n();
    let dt = sched.total_time / steps as f64;
    let factor = cis(-f.epsilon0() * dt) - C64::new(1.0, 0.0);
    for k in 0..steps {
        let p = sched.point_at_time((k as f64 + 0.5) * dt);
        let v = eigenstate(&p, n)?;
        rank_one_step(states, &v, factor);
    }
    Ok(())
}

/// Result of an adiabatic transport run.
#[derive(Debug, Clone)]
pub struct TransportReport {
    /// `⟨β(λ₀)|ψ_α(T)⟩`, re-unitarized.
    pub transport: UnitaryMatrix,
    /// The overlap matrix before re-unitarization.
    pub raw_transport: CMatrix,
    /// `1 − Σ_β |⟨β(λ₀)|ψ_α(T)⟩|²` per column `α`.
    pub leakage: Vec<f64>,
    /// Max-entry distance between `transport` and the integrated holonomy.
    pub holonomy_distance: f64,
    pub holonomy: UnitaryMatrix,
    pub total_time: f64,
    pub steps: usize,
    /// Whether every column's leakage stayed within the schedule's bound.
    pub adiabatic: bool,
}

impl TransportReport {
    pub fn max_leakage(&self) -> f64 {
        self.leakage.iter().copied().fold(0.0, f64::max)
    }
}

/// Transports the code basis at the loop's base point around the schedule
/// and reads off the code-to-code overlaps.
pub fn adiabatic_transport(f: &HamiltonianFamily, sched: &Schedule) -> Result<TransportReport> {
    let n = f.n();
    if sched.path.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: sched.path.n() });
    }
    let base = sched.path.base_point();
    let frame = code_frame(base);
    let mut states = frame.clone();
    let steps = sched.effective_steps(f.epsilon0());
    propagate(f, sched, &mut states, steps)?;

    let raw = CMatrix::from_fn(n, |b, a| frame[b].iter().zip(&states[a]).map(|(x, y)| x.conj() * y).sum());
    let leakage: Vec<f64> = (0..n).map(|a| 1.0 - (0..n).map(|b| raw[(b, a)].norm_sqr()).sum::<f64>()).collect();
    if !raw.is_finite() {
        return Err(Error::NonFinite("transport"));
    }
    let polar = polar_unitary(&raw).ok_or(Error::NotUnitary { defect: raw.unitarity_defect() })?;
    let transport = UnitaryMatrix::new(polar)?;
    let reference = holonomy(&sched.path, REFERENCE_SEGMENTS)?;
    let holonomy_distance = transport.distance(&reference);
    let adiabatic = leakage.iter().all(|&l| l <= sched.leakage_bound);
    Ok(TransportReport {
        transport,
        raw_transport: raw,
        leakage,
        holonomy_distance,
        holonomy: reference,
        total_time: sched.total_time,
        steps,
        adiabatic,
    })
}

/// Full `(n+1)`-level propagator of `H(λ(t))` by `steps` exponential-midpoint steps.
pub fn continuous_propagator(f: &HamiltonianFamily, sched: &Schedule, steps: usize) -> Result<UnitaryMatrix> {
    if steps == 0 {
        return Err(Error::InvalidSchedule("step count must be positive".into()));
    }
    let d = f.n() + 1;
    let mut columns: Vec<Vec<C64>> = (0..d).map(|k| CMatrix::identity(d).column(k)).collect();
    propagate(f, sched, &mut columns, steps)?;
    UnitaryMatrix::new(CMatrix::from_fn(d, |r, col| columns[col][r]))
}

/// Piecewise-constant control: `λ_i` held for `Δt`, `i = 0..N`, with
/// `λ_0 = λ_N` the base point.
#[derive(Debug, Clone)]
pub struct KickPlan {
    points: Vec<ControlPoint>,
    delta_t: f64,
}

impl KickPlan {
    pub fn new(points: Vec<ControlPoint>, delta_t: f64) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidSchedule("a kick plan needs at least one interval".into()));
        }
        if !(delta_t > 0.0 && delta_t.is_finite()) {
            return Err(Error::InvalidSchedule(format!("delta_t must be positive and finite, got {delta_t}")));
        }
        let n = points[0].n();
        if let Some(bad) = points.iter().find(|p| p.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.n() });
        }
        let gap = points[0].distance(points.last().unwrap());
        if gap > 1e-12 {
            return Err(Error::OpenLoop { gap });
        }
        Ok(KickPlan { points, delta_t })
    }

    /// Samples the schedule at `t_i = iT/N`.
    pub fn from_schedule(sched: &Schedule, intervals: usize) -> Result<Self> {
        if intervals == 0 {
            return Err(Error::InvalidSchedule("interval count must be positive".into()));
        }
        let dt = sched.total_time / intervals as f64;
        let points = (0..=intervals).map(|i| sched.point_at_time(i as f64 * dt)).collect();
        KickPlan::new(points, dt)
    }

    pub fn intervals(&self) -> usize {
        self.points.len() - 1
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    pub fn total_time(&self) -> f64 {
        self.delta_t * self.intervals() as f64
    }

    pub fn points(&self) -> &[ControlPoint] {
        &self.points
    }
}

fn free_evolution(f: &HamiltonianFamily, dt: f64) -> CMatrix {
    let d = f.n() + 1;
    let mut diag = vec![C64::new(1.0, 0.0); d];
    diag[d - 1] = cis(-f.epsilon0() * dt);
    CMatrix::from_diagonal(&diag)
}

/// `∏_{i=0}^{N−1} U_i e^{−iH₀Δt} U_i†`, later factors on the left.
pub fn kick_evolution(f: &HamiltonianFamily, plan: &KickPlan) -> Result<UnitaryMatrix> {
    check_plan(f, plan)?;
    let free = free_evolution(f, plan.delta_t);
    let d = f.n() + 1;
    let mut acc = CMatrix::identity(d);
    for p in &plan.points[..plan.intervals()] {
        let u = frame_unitary(p);
        let step = &(u.matrix() * &free) * u.adjoint().matrix();
        acc = &step * &acc;
    }
    UnitaryMatrix::project(acc)
}

/// The same evolution as a literal pulse sequence: free evolution for `Δt`
/// alternating with the kicks `U_{i+1}† U_i`, conjugated by `U_0`.
pub fn kick_sequence(f: &HamiltonianFamily, plan: &KickPlan) -> Result<UnitaryMatrix> {
    check_plan(f, plan)?;
    let free = free_evolution(f, plan.delta_t);
    let frames: Vec<UnitaryMatrix> = plan.points.iter().map(frame_unitary).collect();
    let mut acc = frames[0].adjoint().into_matrix();
    for w in frames.windows(2) {
        acc = &free * &acc;
        let kick = w[1].adjoint().matrix() * w[0].matrix();
        acc = &kick * &acc;
    }
    acc = frames[frames.len() - 1].matrix() * &acc;
    UnitaryMatrix::project(acc)
}

fn check_plan(f: &HamiltonianFamily, plan: &KickPlan) -> Result<()> {
    if plan.points[0].n() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), found: plan.points[0].n() });
    }
    Ok(())
}

/// The `n×n` code block `⟨β(λ₀)| U |α(λ₀)⟩` of a full propagator.
pub fn code_block(u: &CMatrix, base: &ControlPoint) -> CMatrix {
    let frame = code_frame(base);
    CMatrix::from_fn(frame.len(), |b, a| {
        let ua = u.mul_vec(&frame[a]);
        frame[b].iter().zip(&ua).map(|(x, y)| x.conj() * y).sum()
    })
}

/// Outcome of one inequality of the time-scale chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Within rounding of the required ratio.
    Marginal,
    Violated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimescaleCheck {
    pub relation: &'static str,
    /// `larger / smaller`
    pub ratio: f64,
    /// Ratio needed to pass.
    pub required: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimescaleReport {
    pub checks: Vec<TimescaleCheck>,
}

impl TimescaleReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }
}

/// Evaluates `τ_k ≤ Δt ≪ ω⁻¹ ≪ τ_λ` with `ω = |ε₀|`. `≤` passes at equality;
/// each `≪` needs a ratio above `margin`, and a ratio equal to it is marginal.
pub fn timescale_check(plan: &KickPlan, epsilon0: f64, tau_k: f64, tau_lambda: f64, margin: f64) -> TimescaleReport {
    let dt = plan.delta_t;
    let inv_omega = 1.0 / epsilon0.abs();
    let classify = |ratio: f64, required: f64, strict: bool| {
        let close = (ratio - required).abs() <= 1e-9 * required.abs().max(1.0);
        if close {
            if strict {
                Verdict::Marginal
            } else {
                Verdict::Pass
            }
        } else if ratio > required {
            Verdict::Pass
        } else {
            Verdict::Violated
        }
    };
    let mk = |relation, ratio: f64, required: f64, strict| TimescaleCheck {
        relation,
        ratio,
        required,
        verdict: classify(ratio, required, strict),
    };
    TimescaleReport {
        checks: vec![
            mk("tau_k <= delta_t", dt / tau_k, 1.0, false),
            mk("delta_t << 1/omega", inv_omega / dt, margin, true),
            mk("1/omega << tau_lambda", tau_lambda / inv_omega, margin, true),
        ],
    }
}

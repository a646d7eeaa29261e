//! Loops in the chart, loop algebra, oriented areas and the path-ordered
//! holonomy `Γ(C) = P exp ∮_C A`.
//!
//! Edges run straight in chart coordinates between consecutive vertices;
//! azimuths take the short way round, so an edge may not change any `φ` by
//! `π` or more. Factors of later segments multiply on the left.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // f64 math is inherent in core on newer toolchains
use num_traits::Float;

use crate::connection::component_analytic;
use crate::error::{Error, Result};
use crate::linalg::{expm_antihermitian, CMatrix, UnitaryMatrix};
use crate::model::{ControlPoint, Coord};

/// Closure tolerance between the first and last vertex.
pub const CLOSURE_TOL: f64 = 1e-14;
/// Tolerance for "only the tagged coordinates vary".
pub const PLANE_TOL: f64 = 1e-12;
/// Longest azimuth step the polygon builders put on one edge.
const MAX_BUILDER_PHI_STEP: f64 = FRAC_PI_2;

/// The four primitive loop families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LoopFamily {
    /// `(θ_β, φ_β)`: phase on `|β⟩`.
    C1,
    /// `(θ_β, φ_β̄)` with `θ_β̄ = π/2`: phase on `|β⟩` for `β < β̄`.
    C2,
    /// `(θ_β, θ_β̄)` at `φ_β = φ_β̄ = 0`: real rotation between `|β⟩`, `|β̄⟩`.
    C3,
    /// `(θ_β, θ_β̄)` at `φ_β = π/2`, `φ_β̄ = 0`: `σ_x`-type rotation.
    C4,
}

impl LoopFamily {
    pub const ALL: [LoopFamily; 4] = [LoopFamily::C1, LoopFamily::C2, LoopFamily::C3, LoopFamily::C4];

    pub fn name(self) -> &'static str {
        match self {
            LoopFamily::C1 => "C1",
            LoopFamily::C2 => "C2",
            LoopFamily::C3 => "C3",
            LoopFamily::C4 => "C4",
        }
    }

    /// Whether the family's plane is spanned by two polar angles.
    pub fn is_polar_pair(self) -> bool {
        matches!(self, LoopFamily::C3 | LoopFamily::C4)
    }
}

impl fmt::Display for LoopFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LoopFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LoopFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Constraint(format!("unknown loop family `{s}`")))
    }
}

/// The two coordinates a planar loop varies; everything else stays frozen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlaneTag {
    pub first: Coord,
    pub second: Coord,
}

impl PlaneTag {
    pub fn new(first: Coord, second: Coord) -> Result<Self> {
        if first == second {
            return Err(Error::Constraint(format!("plane needs two distinct coordinates, got {first} twice")));
        }
        Ok(PlaneTag { first, second })
    }

    /// The plane a family uses for levels `β`, `β̄` (ignored for C1).
    pub fn for_family(family: LoopFamily, beta: usize, beta_bar: usize) -> Result<Self> {
        match family {
            LoopFamily::C1 => PlaneTag::new(Coord::Theta(beta), Coord::Phi(beta)),
            LoopFamily::C2 => PlaneTag::new(Coord::Theta(beta), Coord::Phi(beta_bar)),
            LoopFamily::C3 | LoopFamily::C4 => PlaneTag::new(Coord::Theta(beta), Coord::Theta(beta_bar)),
        }
    }

    pub fn contains(&self, coord: Coord) -> bool {
        self.first == coord || self.second == coord
    }

    fn max_level(&self) -> usize {
        self.first.level().max(self.second.level())
    }
}

/// An oriented closed polygon in the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopPath {
    points: Vec<ControlPoint>,
    plane: Option<PlaneTag>,
    orientation: i8,
}

impl LoopPath {
    /// Validates closure, the point count (≥ 3), a common `n`, the plane tag
    /// and the azimuth steps.
    pub fn new(points: Vec<ControlPoint>, plane: Option<PlaneTag>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewPoints { min: 3, found: points.len() });
        }
        let n = points[0].n();
        if let Some(bad) = points.iter().find(|p| p.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.n() });
        }
        let gap = points[0].distance(points.last().unwrap());
        if gap.is_nan() || gap > CLOSURE_TOL {
            return Err(Error::OpenLoop { gap });
        }
        if let Some(tag) = plane {
            if tag.max_level() >= n {
                return Err(Error::LevelOutOfRange { level: tag.max_level(), limit: n });
            }
            let base = &points[0];
            for (i, p) in points.iter().enumerate().skip(1) {
                let d = base.displacement_to(p);
                let off_plane = d.iter().enumerate().any(|(k, v)| {
                    let coord = if k < n { Coord::Theta(k) } else { Coord::Phi(k - n) };
                    !tag.contains(coord) && v.abs() > PLANE_TOL
                });
                if off_plane {
                    return Err(Error::PlaneViolation { index: i });
                }
            }
        }
        for (i, w) in points.windows(2).enumerate() {
            let d = w[0].displacement_to(&w[1]);
            if d[n..].iter().any(|v| v.abs() >= PI - 1e-9) {
                return Err(Error::Constraint(format!(
                    "edge {i}: an azimuth step of π or more is ambiguous; insert a vertex"
                )));
            }
        }
        Ok(LoopPath { points, plane, orientation: 1 })
    }

    /// The constant loop at `base`.
    pub fn degenerate(base: &ControlPoint) -> Self {
        LoopPath { points: vec![base.clone(); 3], plane: None, orientation: 1 }
    }

    /// A closed polygon through `vertices`, given as `(first, second)`
    /// coordinate pairs of `plane`; all other coordinates come from `base`.
    /// Long azimuth edges are subdivided.
    pub fn polygon(base: &ControlPoint, plane: PlaneTag, vertices: &[[f64; 2]]) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::TooFewPoints { min: 2, found: vertices.len() });
        }
        let at = |v: [f64; 2]| base.with(plane.first, v[0])?.with(plane.second, v[1]);
        let mut closed: Vec<[f64; 2]> = vertices.to_vec();
        closed.push(vertices[0]);
        let mut points = vec![at(closed[0])?];
        for w in closed.windows(2) {
            let span = |c: Coord, d: f64| if c.is_theta() { 0.0 } else { d.abs() };
            let longest = span(plane.first, w[1][0] - w[0][0]).max(span(plane.second, w[1][1] - w[0][1]));
            let pieces = (longest / MAX_BUILDER_PHI_STEP).ceil().max(1.0) as usize;
            for k in 1..=pieces {
                let t = k as f64 / pieces as f64;
                points.push(at([w[0][0] + t * (w[1][0] - w[0][0]), w[0][1] + t * (w[1][1] - w[0][1])])?);
            }
        }
        LoopPath::new(points, Some(plane))
    }

    /// Axis-aligned rectangle `lo → (hi₀, lo₁) → hi → (lo₀, hi₁) → lo`,
    /// counterclockwise in `(first, second)` when `lo < hi`.
    pub fn rectangle(base: &ControlPoint, plane: PlaneTag, lo: [f64; 2], hi: [f64; 2]) -> Result<Self> {
        LoopPath::polygon(base, plane, &[lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]])
    }

    /// Counterclockwise regular `vertices`-gon inscribed in a circle.
    pub fn circle(
        base: &ControlPoint,
        plane: PlaneTag,
        center: [f64; 2],
        radius: f64,
        vertices: usize,
    ) -> Result<Self> {
        let pts: Vec<[f64; 2]> = (0..vertices.max(3))
            .map(|k| {
                let a = TAU * k as f64 / vertices.max(3) as f64;
                [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            })
            .collect();
        LoopPath::polygon(base, plane, &pts)
    }

    pub fn n(&self) -> usize {
        self.points[0].n()
    }

    pub fn points(&self) -> &[ControlPoint] {
        &self.points
    }

    pub fn base_point(&self) -> &ControlPoint {
        &self.points[0]
    }

    pub fn plane(&self) -> Option<PlaneTag> {
        self.plane
    }

    /// `+1` as built, `−1` after an odd number of reversals.
    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn edge_count(&self) -> usize {
        self.points.len() - 1
    }

    /// Sum of edge lengths in chart coordinates (azimuths wrapped).
    pub fn coordinate_length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }
}

/// Traverses `a`, then `b`. Both must start at the same point.
pub fn concatenate(a: &LoopPath, b: &LoopPath) -> Result<LoopPath> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: b.n() });
    }
    if a.base_point().distance(b.base_point()) > CLOSURE_TOL {
        return Err(Error::BasePointMismatch);
    }
    let mut points = a.points.clone();
    points.extend_from_slice(&b.points[1..]);
    let plane = if a.plane == b.plane { a.plane } else { None };
    Ok(LoopPath { points, plane, orientation: a.orientation })
}

/// The same loop traversed backwards.
pub fn reverse(l: &LoopPath) -> LoopPath {
    let mut points = l.points.clone();
    points.reverse();
    LoopPath { points, plane: l.plane, orientation: -l.orientation }
}

/// Path-ordered holonomy with `segments_per_edge` exponential-midpoint
/// factors per edge, polar-projected onto `U(n)`.
pub fn holonomy(l: &LoopPath, segments_per_edge: usize) -> Result<UnitaryMatrix> {
    if segments_per_edge == 0 {
        return Err(Error::Constraint("segments_per_edge must be at least 1".into()));
    }
    let n = l.n();
    let mut acc = CMatrix::identity(n);
    for w in l.points.windows(2) {
        let d = w[0].displacement_to(&w[1]);
        let active: Vec<(Coord, f64)> = d
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(k, &v)| (if k < n { Coord::Theta(k) } else { Coord::Phi(k - n) }, v))
            .collect();
        if active.is_empty() {
            continue;
        }
        let h = 1.0 / segments_per_edge as f64;
        for s in 0..segments_per_edge {
            let mid = w[0].offset(&d, (s as f64 + 0.5) * h);
            let mut gen = CMatrix::zeros(n);
            for &(coord, dv) in &active {
                gen = &gen - &component_analytic(&mid, coord).scale_real(dv * h);
            }
            acc = &expm_antihermitian(&gen) * &acc;
        }
    }
    if !acc.is_finite() {
        return Err(Error::NonFinite("holonomy"));
    }
    UnitaryMatrix::project(acc)
}

/// `∫ sin²θ dφ` along the straight edge `θ₀ → θ₁` with azimuth step `dphi`.
fn edge_sin2_dphi(t0: f64, t1: f64, dphi: f64) -> f64 {
    let dt = t1 - t0;
    if dt.abs() < 1e-9 {
        let s = (0.5 * (t0 + t1)).sin();
        dphi * s * s
    } else {
        dphi * (0.5 - ((2.0 * t1).sin() - (2.0 * t0).sin()) / (4.0 * dt))
    }
}

/// `∫ sin θ_a dθ_b` along the straight edge.
fn edge_sin_dtheta(a0: f64, a1: f64, db: f64) -> f64 {
    let da = a1 - a0;
    if da.abs() < 1e-9 {
        db * (0.5 * (a0 + a1)).sin()
    } else {
        db * (a0.cos() - a1.cos()) / da
    }
}

/// Oriented area `Σ` of a planar loop for `family`, evaluated edge by edge
/// in closed form.
///
/// * C1, C2 (`θ_β`, `φ_β̄`): `Σ = −∮ sin²θ_β dφ_β̄`, positive clockwise in `(θ, φ)`.
/// * C3, C4 (`θ_β`, `θ_β̄`), `β` the first tagged coordinate:
///   `Σ = ∬ cos θ_min(β,β̄) dθ_β dθ_β̄`, positive counterclockwise in
///   `(θ_β, θ_β̄)`; for `β < β̄` this is `∮ sin θ_β dθ_β̄`.
pub fn enclosed_area(l: &LoopPath, family: LoopFamily) -> Result<f64> {
    let mismatch = Error::FamilyMismatch { family };
    let tag = l.plane.ok_or(mismatch.clone())?;
    let n = l.n();
    let pairs = l.points.windows(2).map(|w| (&w[0], &w[1], w[0].displacement_to(&w[1])));
    match family {
        LoopFamily::C1 | LoopFamily::C2 => {
            let (t, p) = match (tag.first, tag.second) {
                (Coord::Theta(t), Coord::Phi(p)) | (Coord::Phi(p), Coord::Theta(t)) => (t, p),
                _ => return Err(mismatch),
            };
            if (family == LoopFamily::C1) != (t == p) {
                return Err(mismatch);
            }
            Ok(-pairs.map(|(a, b, d)| edge_sin2_dphi(a.theta()[t], b.theta()[t], d[n + p])).sum::<f64>())
        }
        LoopFamily::C3 | LoopFamily::C4 => {
            let (b, bb) = match (tag.first, tag.second) {
                (Coord::Theta(b), Coord::Theta(bb)) => (b, bb),
                _ => return Err(mismatch),
            };
            if b < bb {
                Ok(pairs.map(|(p, q, d)| edge_sin_dtheta(p.theta()[b], q.theta()[b], d[bb])).sum())
            } else {
                Ok(-pairs.map(|(p, q, d)| edge_sin_dtheta(p.theta()[bb], q.theta()[bb], d[b])).sum::<f64>())
            }
        }
    }
}

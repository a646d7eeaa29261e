//! JSON file formats. Levels, qubits and coordinates are 1-based here and
//! converted to the 0-based core API on load.
//!
//! Complex numbers are `[re, im]` pairs; matrices are arrays of rows.

use std::collections::BTreeMap;

use hqc_core::holonomy::{LoopFamily, LoopPath, PlaneTag};
use hqc_core::model::{ControlPoint, Coord};
use hqc_core::multipartite::{CircuitGate, GateSpec};
use hqc_core::synthesis::{GateProgram, NamedGate, PhaseParams, Step};
use hqc_core::{CMatrix, UnitaryMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::CliError;

/// Default segments per edge when a loop file does not say.
pub const DEFAULT_SEGMENTS: usize = 64;

/// A matrix entry on input: `[re, im]` or a bare real.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn complex_json(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn matrix_json(m: &CMatrix) -> JsonMatrix {
    (0..m.dim()).map(|r| m.row(r).iter().map(|z| complex_json(*z)).collect()).collect()
}

pub fn matrix_from_json(rows: &[Vec<Entry>]) -> Result<CMatrix, CliError> {
    let d = rows.len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(CliError::Usage("matrix must be square and non-empty".into()));
    }
    let entries = rows
        .iter()
        .flatten()
        .map(|e| match e {
            Entry::Complex([re, im]) => C64::new(*re, *im),
            Entry::Real(x) => C64::new(*x, 0.0),
        })
        .collect();
    Ok(CMatrix::from_row_major(entries)?)
}

fn angle(a: &Angle) -> Result<f64, CliError> {
    a.value().map_err(CliError::Usage)
}

fn angles(v: &[Angle]) -> Result<Vec<f64>, CliError> {
    v.iter().map(angle).collect()
}

/// `{"theta": [...], "phi": [...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub theta: Vec<Angle>,
    pub phi: Vec<Angle>,
}

impl PointFile {
    pub fn to_point(&self) -> Result<ControlPoint, CliError> {
        Ok(ControlPoint::new(angles(&self.theta)?, angles(&self.phi)?)?)
    }

    pub fn from_point(p: &ControlPoint) -> Self {
        PointFile {
            theta: p.theta().iter().map(|&x| x.into()).collect(),
            phi: p.phi().iter().map(|&x| x.into()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneFile {
    pub coords: [String; 2],
    #[serde(default)]
    pub frozen: BTreeMap<String, Angle>,
}

/// A loop: each vertex is `[[θ₁..θₙ], [φ₁..φₙ]]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopFile {
    pub n: usize,
    #[serde(default)]
    pub plane: Option<PlaneFile>,
    #[serde(default)]
    pub family: Option<String>,
    pub points: Vec<[Vec<Angle>; 2]>,
    #[serde(default)]
    pub segments_per_edge: Option<usize>,
}

pub fn parse_family(s: &str) -> Result<LoopFamily, CliError> {
    s.parse::<LoopFamily>().map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_coord(s: &str) -> Result<Coord, CliError> {
    s.parse::<Coord>().map_err(|e| CliError::Usage(e.to_string()))
}

fn check_frozen(p: &ControlPoint, frozen: &BTreeMap<String, Angle>, what: &str) -> Result<(), CliError> {
    for (k, v) in frozen {
        let c = parse_coord(k)?;
        if c.level() >= p.n() {
            return Err(CliError::Usage(format!("{what}: frozen coordinate {k} out of range")));
        }
        let want = angle(v)?;
        let got = p.get(c);
        let diff = if c.is_theta() { got - want } else { hqc_core::model::phi_delta(want, got) };
        if diff.abs() > 1e-12 {
            return Err(CliError::Usage(format!("{what}: {k} is {got}, frozen value is {want}")));
        }
    }
    Ok(())
}

impl LoopFile {
    pub fn to_loop(&self) -> Result<(LoopPath, Option<LoopFamily>), CliError> {
        let points = self
            .points
            .iter()
            .map(|[t, p]| Ok(ControlPoint::new(angles(t)?, angles(p)?)?))
            .collect::<Result<Vec<_>, CliError>>()?;
        if let Some(bad) = points.iter().find(|p| p.n() != self.n) {
            return Err(CliError::Usage(format!("loop declares n = {} but has a point with n = {}", self.n, bad.n())));
        }
        let plane = match &self.plane {
            None => None,
            Some(pf) => {
                let tag = PlaneTag::new(parse_coord(&pf.coords[0])?, parse_coord(&pf.coords[1])?)?;
                for p in &points {
                    check_frozen(p, &pf.frozen, "loop point")?;
                }
                Some(tag)
            }
        };
        let family = self.family.as_deref().map(parse_family).transpose()?;
        Ok((LoopPath::new(points, plane)?, family))
    }

    pub fn segments(&self) -> usize {
        self.segments_per_edge.unwrap_or(DEFAULT_SEGMENTS)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFile {
    pub family: String,
    pub beta: usize,
    #[serde(default)]
    pub beta_bar: Option<usize>,
    #[serde(default)]
    pub frozen: Option<BTreeMap<String, Angle>>,
    pub area: Angle,
}

/// `{"n": ..., "steps": [...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramFile {
    pub n: usize,
    pub steps: Vec<StepFile>,
}

fn level(k: usize, what: &str) -> Result<usize, CliError> {
    k.checked_sub(1).ok_or_else(|| CliError::Usage(format!("{what} is 1-based, got 0")))
}

fn frozen_map(step: &Step) -> BTreeMap<String, Angle> {
    step.frozen().into_iter().map(|(c, v)| (c.to_string(), v.into())).collect()
}

impl StepFile {
    pub fn to_step(&self) -> Result<Step, CliError> {
        let family = parse_family(&self.family)?;
        let beta = level(self.beta, "beta")?;
        let beta_bar = self.beta_bar.map(|b| level(b, "beta_bar")).transpose()?;
        let step = Step::new(family, beta, beta_bar, angle(&self.area)?);
        if let Some(given) = &self.frozen {
            let want = frozen_map(&step);
            for (k, v) in given {
                let expected = want.get(k).map(angle).transpose()?;
                let value = angle(v)?;
                let ok = match (parse_coord(k)?, expected) {
                    (_, Some(e)) => (value - e).abs() < 1e-12,
                    // every other θ is frozen at 0; other φ values do not matter there
                    (Coord::Theta(_), None) => value.abs() < 1e-12,
                    (Coord::Phi(_), None) => true,
                };
                if !ok {
                    return Err(CliError::Usage(format!("{family} step: frozen {k} = {value} contradicts the family plane")));
                }
            }
        }
        Ok(step)
    }

    pub fn from_step(step: &Step) -> Self {
        StepFile {
            family: step.family.name().into(),
            beta: step.beta + 1,
            beta_bar: step.beta_bar.map(|b| b + 1),
            frozen: Some(frozen_map(step)),
            area: step.area.into(),
        }
    }
}

impl ProgramFile {
    pub fn to_program(&self) -> Result<GateProgram, CliError> {
        let steps = self.steps.iter().map(StepFile::to_step).collect::<Result<Vec<_>, _>>()?;
        Ok(GateProgram::from_steps(self.n, steps)?)
    }

    pub fn from_program(p: &GateProgram) -> Self {
        ProgramFile { n: p.n(), steps: p.steps().iter().map(StepFile::from_step).collect() }
    }
}

/// Either input accepted by commands that integrate a loop.
pub enum LoopInput {
    Loop { path: LoopPath, family: Option<LoopFamily>, segments: usize },
    Program(GateProgram),
}

impl LoopInput {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        if v.get("steps").is_some() {
            let pf: ProgramFile = serde_json::from_value(v)?;
            Ok(LoopInput::Program(pf.to_program()?))
        } else {
            let lf: LoopFile = serde_json::from_value(v)?;
            let (path, family) = lf.to_loop()?;
            Ok(LoopInput::Loop { path, family, segments: lf.segments() })
        }
    }

    pub fn path(&self) -> Result<LoopPath, CliError> {
        match self {
            LoopInput::Loop { path, .. } => Ok(path.clone()),
            LoopInput::Program(p) => Ok(p.to_loop()?),
        }
    }

    pub fn segments(&self) -> usize {
        match self {
            LoopInput::Loop { segments, .. } => *segments,
            LoopInput::Program(_) => DEFAULT_SEGMENTS,
        }
    }
}

/// A circuit element's gate: a name, a parametrized name, or a 4×4 matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GateFile {
    Name(String),
    Matrix {
        matrix: Vec<Vec<Entry>>,
    },
    Named {
        name: String,
        #[serde(default)]
        sigma1: Option<Angle>,
        #[serde(default)]
        sigma3: Option<Angle>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitEntry {
    pub pair: [usize; 2],
    pub gate: GateFile,
}

pub fn parse_gate_name(s: &str) -> Result<NamedGate, CliError> {
    s.parse::<NamedGate>().map_err(|e| CliError::Usage(e.to_string()))
}

pub fn phase_params(sigma1: Option<&Angle>, sigma3: Option<&Angle>) -> Result<PhaseParams, CliError> {
    let d = PhaseParams::default();
    Ok(PhaseParams {
        sigma1: sigma1.map(angle).transpose()?.unwrap_or(d.sigma1),
        sigma3: sigma3.map(angle).transpose()?.unwrap_or(d.sigma3),
    })
}

impl CircuitEntry {
    pub fn to_gate(&self) -> Result<CircuitGate, CliError> {
        let i = level(self.pair[0], "qubit index")?;
        let j = level(self.pair[1], "qubit index")?;
        let gate = match &self.gate {
            GateFile::Name(s) => GateSpec::Named(parse_gate_name(s)?, PhaseParams::default()),
            GateFile::Named { name, sigma1, sigma3 } => {
                GateSpec::Named(parse_gate_name(name)?, phase_params(sigma1.as_ref(), sigma3.as_ref())?)
            }
            GateFile::Matrix { matrix } => {
                let m = matrix_from_json(matrix)?;
                if m.dim() != 4 {
                    return Err(CliError::Usage(format!("circuit gate matrix must be 4×4, got {}×{}", m.dim(), m.dim())));
                }
                GateSpec::Matrix(UnitaryMatrix::new(m)?)
            }
        };
        Ok(CircuitGate { i, j, gate })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_file_round_trip() {
        let text = r#"{
            "n": 1,
            "plane": {"coords": ["theta:1", "phi:1"], "frozen": {}},
            "family": "C1",
            "points": [[[0],[0]], [[0],["pi/2"]], [["pi/2"],["pi/2"]], [["pi/2"],[0]], [[0],[0]]],
            "segments_per_edge": 8
        }"#;
        let lf: LoopFile = serde_json::from_str(text).unwrap();
        let (path, family) = lf.to_loop().unwrap();
        assert_eq!(family, Some(LoopFamily::C1));
        assert_eq!(path.points().len(), 5);
        assert_eq!(lf.segments(), 8);
    }

    #[test]
    fn frozen_values_are_checked() {
        let text = r#"{
            "n": 2,
            "plane": {"coords": ["theta:1", "phi:2"], "frozen": {"theta:2": "pi/2"}},
            "points": [[[0, 0],[0, 0]], [[0.5, 0],[0, 0]], [[0, 0],[0, 0]]]
        }"#;
        let lf: LoopFile = serde_json::from_str(text).unwrap();
        assert!(lf.to_loop().is_err());
    }

    #[test]
    fn step_file_conversions() {
        let s = Step::c2(0, 2, 0.5);
        let f = StepFile::from_step(&s);
        assert_eq!(f.beta, 1);
        assert_eq!(f.beta_bar, Some(3));
        assert_eq!(f.to_step().unwrap(), s);
        let mut wrong = f.clone();
        wrong.frozen.as_mut().unwrap().insert("theta:3".into(), Angle::Number(0.0));
        assert!(wrong.to_step().is_err());
        let zero = StepFile { beta: 0, ..f };
        assert!(zero.to_step().is_err());
    }

    #[test]
    fn circuit_entries() {
        let text = r#"[
            {"pair": [1, 2], "gate": "XOR"},
            {"pair": [2, 3], "gate": {"name": "PHASE1", "sigma1": "pi/8"}},
            {"pair": [3, 1], "gate": {"matrix": [[1,0,0,0],[0,1,0,0],[0,0,0,1],[0,0,1,0]]}}
        ]"#;
        let c: Vec<CircuitEntry> = serde_json::from_str(text).unwrap();
        let g: Vec<_> = c.iter().map(|e| e.to_gate().unwrap()).collect();
        assert_eq!((g[0].i, g[0].j), (0, 1));
        assert!(matches!(g[1].gate, GateSpec::Named(NamedGate::Phase1, _)));
        assert!(matches!(g[2].gate, GateSpec::Matrix(_)));
    }
}

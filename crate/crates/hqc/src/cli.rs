//! Subcommands. Each handler returns the full output text; [`execute`]
//! writes it to stdout or `--out`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use hqc_core::connection::{connection_analytic, connection_numeric, ConnectionValue, DEFAULT_STEP};
use hqc_core::dynamics::{
    adiabatic_transport, continuous_propagator, kick_evolution, KickPlan, Schedule, DEFAULT_STEPS, DEFAULT_TOTAL_TIME,
};
use hqc_core::holonomy::{enclosed_area, holonomy, LoopFamily, LoopPath};
use hqc_core::linalg::distance_up_to_phase;
use hqc_core::model::{ControlPoint, Coord};
use hqc_core::multipartite::{apply_circuit, gate_count, Code, Register};
use hqc_core::synthesis::{
    capacity, compile_u2_block, compile_unitary, primitive_holonomy, realize_step_as_loop, two_qubit_gate, GateProgram,
    Step,
};
use hqc_core::{CMatrix, HamiltonianFamily, UnitaryMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::angle::{parse_angle, Angle};
use crate::error::CliError;
use crate::formats::{
    complex_json, matrix_from_json, matrix_json, parse_gate_name, phase_params, CircuitEntry, Entry, LoopInput,
    PointFile, ProgramFile, DEFAULT_SEGMENTS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeArg {
    Plus,
    Minus,
}

/// Holonomic gate synthesis on CP^n control manifolds.
///
/// Input arguments take inline JSON or a path to a JSON file (`-` reads
/// stdin). Angles may be numbers or strings such as "pi/2". Levels, qubits
/// and coordinates are 1-based.
#[derive(Debug, Parser)]
#[command(name = "hqc", version)]
pub struct Cli {
    /// The n of CP^n (the code dimension) where a command needs one.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Tolerance for the pass/fail checks of `holonomy` and `gate`.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; `kick` and `sweep` default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Connection components at a point (the origin of CP^n by default).
    Connection {
        /// Point JSON: {"theta": [...], "phi": [...]}.
        point: Option<String>,
        /// Also evaluate by central differences and report the gap.
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
    },
    /// Integrated holonomy of a loop.
    Holonomy {
        /// Loop JSON.
        input: String,
        /// Segments per edge; overrides the loop file.
        #[arg(long)]
        segments: Option<usize>,
    },
    /// Loop program for a named two-qubit gate or an arbitrary target matrix.
    Gate {
        /// XOR, CROT, SWAP, PHASE1, PHASE2, UPH1 or UPH2.
        name: Option<String>,
        /// Target matrix JSON (rows of [re, im]) instead of a name.
        #[arg(long, conflicts_with = "name")]
        target: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        sigma1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        sigma3: Option<String>,
        /// Segments per edge for the integrated check.
        #[arg(long, default_value_t = DEFAULT_SEGMENTS)]
        segments: usize,
    },
    /// Compile a unitary into a loop program.
    Compile {
        /// Matrix JSON.
        matrix: String,
        /// Treat the matrix as a 2×2 block on levels "b,bb" of CP^n (needs --n).
        #[arg(long)]
        block: Option<String>,
    },
    /// Adiabatic transport of the code around a loop or program.
    Verify {
        /// Loop or program JSON.
        input: String,
        #[arg(long, default_value_t = DEFAULT_TOTAL_TIME, allow_hyphen_values = true)]
        time: f64,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        /// Gap ε₀ of the Hamiltonian.
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
    },
    /// Kick-sequence convergence against the fine-step propagator.
    Kick {
        /// Loop or program JSON.
        input: String,
        /// Comma-separated interval counts.
        #[arg(long, default_value = "1,250,500,1000")]
        n_list: String,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        time: f64,
        #[arg(long, default_value_t = 40_000)]
        reference_steps: usize,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
    },
    /// Run a circuit on an encoded register.
    Circuit {
        /// Circuit JSON: [{"pair": [i, j], "gate": ...}, ...].
        circuit: String,
        #[arg(long)]
        qubits: usize,
        /// Input basis state as a bit string, qubit 1 first.
        #[arg(long)]
        input_state: Option<String>,
        #[arg(long, value_enum, default_value = "plus")]
        code: CodeArg,
    },
    /// Transport error over random primitive steps and total times.
    Sweep {
        #[arg(long, default_value_t = 8)]
        samples: usize,
        /// Comma-separated total times.
        #[arg(long, default_value = "200,2000")]
        times: String,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
    },
}

/// Reads inline JSON, `-` for stdin, or a file.
pub fn read_input(arg: &str) -> Result<String, CliError> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        return std::io::read_to_string(std::io::stdin()).map_err(|source| CliError::Io { path: "<stdin>".into(), source });
    }
    fs::read_to_string(arg).map_err(|source| CliError::Io { path: arg.into(), source })
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn json_only(format: Option<Format>, cmd: &str) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::usage(format!("`{cmd}` only writes json"))),
        _ => Ok(()),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    let items: Vec<&str> = s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
    if items.is_empty() {
        return Err(CliError::usage(format!("{what} is empty")));
    }
    items.iter().map(|x| x.parse::<T>().map_err(|_| CliError::usage(format!("bad entry `{x}` in {what}")))).collect()
}

fn connection_json(c: &ConnectionValue) -> Value {
    let dump = |ms: &[CMatrix]| ms.iter().map(matrix_json).collect::<Vec<_>>();
    json!({ "a_theta": dump(c.a_theta()), "a_phi": dump(c.a_phi()) })
}

fn cmd_connection(cli: &Cli, point: Option<&str>, numeric: bool, step: f64) -> Result<String, CliError> {
    json_only(cli.format, "connection")?;
    let p = match point {
        Some(arg) => {
            let pf: PointFile = serde_json::from_str(&read_input(arg)?)?;
            let p = pf.to_point()?;
            if let Some(n) = cli.n.filter(|&n| n != p.n()) {
                return Err(CliError::usage(format!("--n {n} does not match the point's n = {}", p.n())));
            }
            p
        }
        None => ControlPoint::origin(cli.n.ok_or_else(|| CliError::usage("give a point or --n"))?),
    };
    let a = connection_analytic(&p);
    let mut out = json!({
        "n": p.n(),
        "point": PointFile::from_point(&p),
        "index_base": 1,
        "connection": connection_json(&a),
        "antihermitian_defect": a.max_antihermitian_defect(),
    });
    if numeric {
        let num = connection_numeric(&p, step)?;
        out["numeric"] = json!({
            "step": step,
            "connection": connection_json(&num.value),
            "antihermitian_defect": num.antihermitian_defect,
            "max_abs_diff": num.value.max_abs_diff(&a),
        });
    }
    to_json(&out)
}

/// `(β, β̄)` of a loop plane for the given family.
fn plane_levels(l: &LoopPath, family: LoopFamily) -> Result<Step, CliError> {
    let plane = l.plane().ok_or_else(|| CliError::usage("a family needs a tagged plane"))?;
    let (a, b) = (plane.first, plane.second);
    let mismatch = || CliError::from(hqc_core::Error::FamilyMismatch { family });
    let step = match family {
        LoopFamily::C1 | LoopFamily::C2 => {
            let (t, p) = match (a, b) {
                (Coord::Theta(t), Coord::Phi(p)) | (Coord::Phi(p), Coord::Theta(t)) => (t, p),
                _ => return Err(mismatch()),
            };
            match (family, t == p) {
                (LoopFamily::C1, true) => Step::c1(t, 0.0),
                (LoopFamily::C2, false) => Step::new(LoopFamily::C2, t, Some(p), 0.0),
                _ => return Err(mismatch()),
            }
        }
        LoopFamily::C3 | LoopFamily::C4 => match (a, b) {
            (Coord::Theta(x), Coord::Theta(y)) => Step::new(family, x, Some(y), 0.0),
            _ => return Err(mismatch()),
        },
    };
    Ok(step)
}

/// Closed-form comparison, when the loop sits on the family's standard plane.
fn closed_form(l: &LoopPath, family: LoopFamily, g: &UnitaryMatrix) -> Result<Value, CliError> {
    let area = enclosed_area(l, family)?;
    let mut step = plane_levels(l, family)?;
    step.area = area;
    let base = l.base_point();
    let plane = l.plane().expect("checked by plane_levels");
    let frozen = step.frozen();
    let on_standard_plane = frozen.iter().all(|&(c, v)| {
        let d = base.get(c) - v;
        if c.is_theta() { d.abs() < 1e-12 } else { hqc_core::model::phi_delta(v, base.get(c)).abs() < 1e-12 }
    }) && (0..base.n()).all(|k| {
        let c = Coord::Theta(k);
        plane.contains(c) || frozen.iter().any(|&(f, _)| f == c) || base.get(c).abs() < 1e-12
    });
    let mut out = json!({ "family": family.name(), "enclosed_area": area, "beta": step.beta + 1 });
    if let Some(bb) = step.beta_bar {
        out["beta_bar"] = json!(bb + 1);
    }
    if on_standard_plane {
        let prim = primitive_holonomy(&step, base.n())?;
        out["closed_form"] = json!(matrix_json(prim.matrix.matrix()));
        out["closed_form_distance"] = json!(g.distance(&prim.matrix));
        if let Some(w) = prim.warning {
            out["warning"] = json!(w.to_string());
        }
    } else {
        out["closed_form"] = Value::Null;
        out["closed_form_distance"] = Value::Null;
    }
    Ok(out)
}

fn cmd_holonomy(cli: &Cli, input: &str, segments: Option<usize>) -> Result<String, CliError> {
    json_only(cli.format, "holonomy")?;
    let parsed = LoopInput::parse(&read_input(input)?)?;
    let l = parsed.path()?;
    let segs = segments.unwrap_or(parsed.segments());
    let g = holonomy(&l, segs)?;
    if g.raw_defect() > cli.tol {
        return Err(CliError::Numerical(format!("unitarity defect {:e} exceeds --tol {:e}", g.raw_defect(), cli.tol)));
    }
    let mut out = json!({
        "n": l.n(),
        "dim": g.dim(),
        "segments_per_edge": segs,
        "edges": l.edge_count(),
        "holonomy": matrix_json(g.matrix()),
        "unitarity_defect": g.raw_defect(),
    });
    match parsed {
        LoopInput::Loop { family: Some(f), .. } => out["family_check"] = closed_form(&l, f, &g)?,
        LoopInput::Program(p) => {
            let want = p.evaluate();
            out["program_steps"] = json!(p.len());
            out["program_matrix"] = json!(matrix_json(want.matrix()));
            out["program_distance"] = json!(g.distance(&want));
        }
        _ => {}
    }
    to_json(&out)
}

fn fidelity(a: &CMatrix, b: &CMatrix) -> f64 {
    (&a.adjoint() * b).trace().norm() / a.dim() as f64
}

fn angle_arg(s: Option<&String>) -> Result<Option<Angle>, CliError> {
    s.map(|t| parse_angle(t).map(Angle::Number).map_err(CliError::Usage)).transpose()
}

fn cmd_gate(
    cli: &Cli,
    name: Option<&str>,
    target: Option<&str>,
    sigma1: Option<&String>,
    sigma3: Option<&String>,
    segments: usize,
) -> Result<String, CliError> {
    json_only(cli.format, "gate")?;
    let (label, params, program, want) = match (name, target) {
        (Some(name), None) => {
            let g = parse_gate_name(name)?;
            let params = phase_params(angle_arg(sigma1)?.as_ref(), angle_arg(sigma3)?.as_ref())?;
            let params_json =
                g.is_parametrized().then(|| json!({ "sigma1": params.sigma1, "sigma3": params.sigma3 }));
            (g.name().to_string(), params_json, two_qubit_gate(g, params), g.standard_matrix(params))
        }
        (None, Some(t)) => {
            if sigma1.is_some() || sigma3.is_some() {
                return Err(CliError::usage("--sigma1/--sigma3 only apply to named gates"));
            }
            let rows: Vec<Vec<Entry>> = serde_json::from_str(&read_input(t)?)?;
            let m = UnitaryMatrix::new(matrix_from_json(&rows)?)?.into_matrix();
            ("target".to_string(), None, compile_unitary(&m)?, m)
        }
        _ => return Err(CliError::usage("give a gate name or --target")),
    };
    let evaluated = program.evaluate();
    let (distance, phase) = distance_up_to_phase(evaluated.matrix(), &want);
    let integrated = program.integrate(segments)?;
    let (integrated_distance, _) = distance_up_to_phase(integrated.matrix(), &want);
    let out = json!({
        "gate": label,
        "params": params,
        "program": ProgramFile::from_program(&program),
        "matrix": matrix_json(evaluated.matrix()),
        "target": matrix_json(&want),
        "fidelity": fidelity(evaluated.matrix(), &want),
        "distance": distance,
        "global_phase": phase,
        "segments_per_edge": segments,
        "integrated_distance": integrated_distance,
        "tol": cli.tol,
        "pass": integrated_distance < cli.tol,
    });
    let text = to_json(&out)?;
    if integrated_distance >= cli.tol {
        write_output(cli.out.as_deref(), &text)?;
        return Err(CliError::Numerical(format!(
            "integrated program misses the target by {integrated_distance:e} (--tol {:e})",
            cli.tol
        )));
    }
    Ok(text)
}

fn cmd_compile(cli: &Cli, matrix: &str, block: Option<&str>) -> Result<String, CliError> {
    json_only(cli.format, "compile")?;
    let rows: Vec<Vec<Entry>> = serde_json::from_str(&read_input(matrix)?)?;
    let m = UnitaryMatrix::new(matrix_from_json(&rows)?)?.into_matrix();
    let (program, want) = match block {
        None => (compile_unitary(&m)?, m),
        Some(spec) => {
            let n = cli.n.ok_or_else(|| CliError::usage("--block needs --n"))?;
            let levels: Vec<usize> = parse_list(spec, "--block")?;
            let [b, bb] = levels[..] else {
                return Err(CliError::usage("--block takes two levels"));
            };
            if b == 0 || bb == 0 {
                return Err(CliError::usage("--block levels are 1-based"));
            }
            if m.dim() != 2 {
                return Err(CliError::usage("--block needs a 2×2 matrix"));
            }
            let p = compile_u2_block(&m, b - 1, bb - 1, n)?;
            (p, CMatrix::embed_two_level(n, b - 1, bb - 1, &m))
        }
    };
    let evaluated = program.evaluate();
    let (distance, phase) = distance_up_to_phase(evaluated.matrix(), &want);
    to_json(&json!({
        "program": ProgramFile::from_program(&program),
        "steps": program.len(),
        "matrix": matrix_json(evaluated.matrix()),
        "distance": distance,
        "global_phase": phase,
    }))
}

fn loop_for_dynamics(input: &str) -> Result<(LoopPath, Option<GateProgram>), CliError> {
    match LoopInput::parse(&read_input(input)?)? {
        LoopInput::Program(p) => Ok((p.to_loop()?, Some(p))),
        other => Ok((other.path()?, None)),
    }
}

fn cmd_verify(cli: &Cli, input: &str, time: f64, steps: usize, epsilon: f64) -> Result<String, CliError> {
    json_only(cli.format, "verify")?;
    let (l, program) = loop_for_dynamics(input)?;
    let f = HamiltonianFamily::new(l.n(), epsilon)?;
    let sched = Schedule::new(l, time, steps)?;
    let r = adiabatic_transport(&f, &sched)?;
    let mut out = json!({
        "n": f.n(),
        "epsilon0": epsilon,
        "T": r.total_time,
        "steps": r.steps,
        "transport": matrix_json(r.transport.matrix()),
        "raw_transport": matrix_json(&r.raw_transport),
        "leakage": r.leakage,
        "max_leakage": r.max_leakage(),
        "leakage_bound": sched.leakage_bound(),
        "adiabatic": r.adiabatic,
        "holonomy": matrix_json(r.holonomy.matrix()),
        "distance": r.holonomy_distance,
    });
    if let Some(p) = program {
        let want = p.evaluate();
        out["program_matrix"] = json!(matrix_json(want.matrix()));
        out["program_distance"] = json!(r.transport.matrix().max_abs_diff(want.matrix()));
    }
    to_json(&out)
}

#[derive(Serialize)]
struct KickRow {
    #[serde(rename = "N")]
    n: usize,
    delta_t: f64,
    distance: f64,
}

fn cmd_kick(
    cli: &Cli,
    input: &str,
    n_list: &str,
    time: f64,
    reference_steps: usize,
    epsilon: f64,
) -> Result<String, CliError> {
    let counts: Vec<usize> = parse_list(n_list, "--n-list")?;
    if counts.contains(&0) {
        return Err(CliError::usage("--n-list entries must be positive"));
    }
    let (l, _) = loop_for_dynamics(input)?;
    let f = HamiltonianFamily::new(l.n(), epsilon)?;
    let sched = Schedule::new(l, time, reference_steps.max(1))?;
    let exact = continuous_propagator(&f, &sched, reference_steps)?;
    let rows = counts
        .par_iter()
        .map(|&n| {
            let plan = KickPlan::from_schedule(&sched, n)?;
            let k = kick_evolution(&f, &plan)?;
            Ok(KickRow { n, delta_t: plan.delta_t(), distance: (k.matrix() - exact.matrix()).spectral_norm() })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("N,delta_t,distance\n");
            for r in &rows {
                s.push_str(&format!("{},{},{}\n", r.n, r.delta_t, r.distance));
            }
            Ok(s)
        }
        Format::Json => to_json(&json!({ "T": time, "reference_steps": reference_steps, "rows": rows })),
    }
}

fn cmd_circuit(
    cli: &Cli,
    circuit: &str,
    qubits: usize,
    input_state: Option<&str>,
    code: CodeArg,
) -> Result<String, CliError> {
    json_only(cli.format, "circuit")?;
    let code = match code {
        CodeArg::Plus => Code::Plus,
        CodeArg::Minus => Code::Minus,
    };
    let reg = Register::new(qubits, code)?;
    let entries: Vec<CircuitEntry> = serde_json::from_str(&read_input(circuit)?)?;
    let gates = entries.iter().map(CircuitEntry::to_gate).collect::<Result<Vec<_>, _>>()?;
    let bits = match input_state {
        None => 0,
        Some(s) if s.len() == qubits && s.chars().all(|c| c == '0' || c == '1') => {
            usize::from_str_radix(s, 2).expect("checked bit string")
        }
        Some(s) => return Err(CliError::usage(format!("--input-state must be {qubits} bits, got `{s}`"))),
    };
    let mut state = reg.basis_state(bits)?;
    apply_circuit(&reg, &gates, &mut state)?;
    let cost = gate_count(&reg, &gates)?;
    let norm: f64 = state.iter().map(|a| a.norm_sqr()).sum();
    to_json(&json!({
        "qubits": qubits,
        "code": match code { Code::Plus => "plus", Code::Minus => "minus" },
        "input_state": format!("{bits:0qubits$b}"),
        "gates": gates.len(),
        "state": reg.code_amplitudes(&state).into_iter().map(complex_json).collect::<Vec<_>>(),
        "norm": norm.sqrt(),
        "off_code_weight": reg.off_code_weight(&state),
        "cost": {
            "local_per_gate": cost.local_per_gate,
            "local_total": cost.local_total,
            "monolithic": cost.monolithic,
            "monolithic_per_gate": cost.monolithic_per_gate,
        },
    }))
}

#[derive(Serialize)]
struct SweepRow {
    sample: usize,
    family: &'static str,
    beta: usize,
    beta_bar: Option<usize>,
    area: f64,
    #[serde(rename = "T")]
    t: f64,
    distance: f64,
    max_leakage: f64,
}

fn random_step(rng: &mut ChaCha8Rng, n: usize) -> Step {
    let family = if n < 2 { LoopFamily::C1 } else { LoopFamily::ALL[rng.random_range(0..4)] };
    let cap = capacity(family);
    let area = rng.random_range(-cap..cap);
    if family == LoopFamily::C1 {
        return Step::c1(rng.random_range(0..n), area);
    }
    let b = rng.random_range(0..n - 1);
    let bb = rng.random_range(b + 1..n);
    Step::new(family, b, Some(bb), area)
}

fn cmd_sweep(cli: &Cli, samples: usize, times: &str, steps: usize) -> Result<String, CliError> {
    let times: Vec<f64> = parse_list(times, "--times")?;
    let n = cli.n.unwrap_or(3);
    if n == 0 {
        return Err(CliError::usage("--n must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let cases: Vec<Step> = (0..samples).map(|_| random_step(&mut rng, n)).collect();
    let f = HamiltonianFamily::unit(n);
    let jobs: Vec<(usize, f64)> = (0..samples).flat_map(|s| times.iter().map(move |&t| (s, t))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(s, t)| {
            let step = &cases[s];
            let l = realize_step_as_loop(step, n)?;
            let want = primitive_holonomy(step, n)?.matrix;
            let r = adiabatic_transport(&f, &Schedule::new(l, t, steps)?)?;
            Ok(SweepRow {
                sample: s,
                family: step.family.name(),
                beta: step.beta + 1,
                beta_bar: step.beta_bar.map(|b| b + 1),
                area: step.area,
                t,
                distance: r.transport.matrix().max_abs_diff(want.matrix()),
                max_leakage: r.max_leakage(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("sample,family,beta,beta_bar,area,T,distance,max_leakage\n");
            for r in &rows {
                let bb = r.beta_bar.map(|b| b.to_string()).unwrap_or_default();
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.sample, r.family, r.beta, bb, r.area, r.t, r.distance, r.max_leakage
                ));
            }
            Ok(s)
        }
        Format::Json => to_json(&json!({ "n": n, "seed": cli.seed, "steps": steps, "rows": rows })),
    }
}

/// Runs a parsed command and returns its output text.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    match &cli.command {
        Command::Connection { point, numeric, step } => cmd_connection(cli, point.as_deref(), *numeric, *step),
        Command::Holonomy { input, segments } => cmd_holonomy(cli, input, *segments),
        Command::Gate { name, target, sigma1, sigma3, segments } => {
            cmd_gate(cli, name.as_deref(), target.as_deref(), sigma1.as_ref(), sigma3.as_ref(), *segments)
        }
        Command::Compile { matrix, block } => cmd_compile(cli, matrix, block.as_deref()),
        Command::Verify { input, time, steps, epsilon } => cmd_verify(cli, input, *time, *steps, *epsilon),
        Command::Kick { input, n_list, time, reference_steps, epsilon } => {
            cmd_kick(cli, input, n_list, *time, *reference_steps, *epsilon)
        }
        Command::Circuit { circuit, qubits, input_state, code } => {
            cmd_circuit(cli, circuit, *qubits, input_state.as_deref(), *code)
        }
        Command::Sweep { samples, times, steps } => cmd_sweep(cli, *samples, times, *steps),
    }
}

pub fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

/// Runs and writes the output; returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    match run(cli).and_then(|text| write_output(cli.out.as_deref(), &text)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hqc: {e}");
            e.exit_code()
        }
    }
}

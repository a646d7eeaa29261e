//! Holonomic quantum gates on the `CP^n` control manifold.
//!
//! The control manifold is the orbit of `H₀ = ε₀ |n+1⟩⟨n+1|` under `U(n+1)`,
//! charted by angles `(θ₁..θₙ, φ₁..φₙ)`. The `n`-fold degenerate zero
//! eigenspace is the code; driving the angles around a loop applies the
//! holonomy of the Wilczek–Zee connection to it.
//!
//! Modules, bottom-up:
//!
//! * [`linalg`]: small dense complex matrices, a hermitian eigensolver, the
//!   anti-hermitian exponential and [`UnitaryMatrix`].
//! * [`model`]: [`ControlPoint`], the rotated eigenframe and the isospectral
//!   Hamiltonian family.
//! * [`connection`]: the connection from closed formulas and from finite
//!   differences of the frame.
//! * [`holonomy`]: loops, loop algebra, oriented areas and the path-ordered
//!   holonomy integrator.
//! * [`synthesis`]: primitive loop families, the `U(2)`/`U(n)` compilers and
//!   the two-qubit programs on `CP^4`.
//! * [`dynamics`]: adiabatic Schrödinger transport and the repeated-kick
//!   scheme, used as independent oracles for every holonomy.
//! * [`multipartite`]: local embedding of 4×4 gates into a qubit register
//!   with an ancilla, plus cost accounting.
//!
//! Levels and qubits are 0-based throughout the Rust API.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod connection;
pub mod dynamics;
mod error;
pub mod holonomy;
pub mod linalg;
pub mod model;
pub mod multipartite;
pub mod synthesis;

pub use connection::{connection_analytic, connection_numeric, ConnectionValue};
pub use error::{Error, Result};
pub use holonomy::{concatenate, enclosed_area, holonomy, reverse, LoopFamily, LoopPath, PlaneTag};
pub use linalg::{CMatrix, UnitaryMatrix, C64};
pub use model::{Coord, ControlPoint, HamiltonianFamily};
pub use synthesis::{GateProgram, NamedGate, Step};

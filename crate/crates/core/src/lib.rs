//! A classical simulator for quantum circuits over mixed-dimensional
//! qudits, built on variable-arity edge-weighted decision diagrams.
//!
//! Every wire of a register may carry its own number of levels; the
//! diagrams adapt their node arity per level, so a qubit-qutrit-ququart
//! system is represented as compactly as a homogeneous one. States and
//! operators share one canonical node store per [`Package`], with complex
//! edge weights deduplicated up to a configurable tolerance.
//!
//! ```
//! use mddsim::{run, parse, RunOptions};
//!
//! let circuit = parse("qudits 2 3 4\ngate h target=1\nmeasure all\n").unwrap();
//! let outcome = run(&circuit, &RunOptions::default()).unwrap();
//! assert_eq!(outcome.op_count, 1);
//! ```

pub mod circuit;
pub mod complex;
pub mod dd;
pub mod error;
pub mod gates;
pub mod register;
pub mod rng;

pub use circuit::{
    ghz_circuit, parse, random_circuit, run, w_state_circuit, Circuit, CircuitOp,
    RunOptions, RunOutcome,
};
pub use complex::{ComplexId, ComplexTable, DEFAULT_TOLERANCE};
pub use dd::{DdStats, Edge, Kind, NodeId, OpCounters, Package};
pub use error::{Error, ParseError, Result};
pub use gates::{
    cex, csum, givens, hadamard, level_swap, pauli_x, pauli_x_power, pauli_z,
    ControlSpec, CsumSpec, GateSpec, LocalUnitary,
};
pub use register::{BasisIndex, QuditRegister};
pub use rng::SplitMix64;

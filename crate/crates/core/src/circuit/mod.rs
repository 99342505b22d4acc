//! Circuit representation and the simulation driver.

mod generate;
mod parse;

pub use generate::{ghz_circuit, random_circuit, w_state_circuit};
pub use parse::parse;

use std::time::Instant;

use crate::dd::{DdStats, Edge, Package};
use crate::error::Result;
use crate::gates::{self, ControlSpec, GateSpec};
use crate::register::{BasisIndex, QuditRegister};
use crate::rng::SplitMix64;

/// One gate of a circuit, kept in its surface form so circuits can be
/// printed back to text unchanged. `Csum` is a composite that expands into
/// several elementary controlled shifts when applied.
#[derive(Debug, Clone, PartialEq)]
pub enum CircuitOp {
    Hadamard {
        target: usize,
        controls: Vec<ControlSpec>,
    },
    PauliX {
        target: usize,
        controls: Vec<ControlSpec>,
    },
    PauliZ {
        target: usize,
        controls: Vec<ControlSpec>,
    },
    Givens {
        target: usize,
        controls: Vec<ControlSpec>,
        levels: (usize, usize),
        theta: f64,
        phi: f64,
    },
    Cex {
        target: usize,
        control: ControlSpec,
        levels: (usize, usize),
    },
    Csum {
        control: usize,
        target: usize,
    },
}

impl CircuitOp {
    /// The elementary gate applications this op denotes.
    pub fn elementary(&self, register: &QuditRegister) -> Result<Vec<GateSpec>> {
        match self {
            CircuitOp::Hadamard { target, controls } => Ok(vec![GateSpec::new(
                register,
                gates::hadamard(register.dim(*target))?,
                *target,
                controls.clone(),
            )?]),
            CircuitOp::PauliX { target, controls } => Ok(vec![GateSpec::new(
                register,
                gates::pauli_x(register.dim(*target))?,
                *target,
                controls.clone(),
            )?]),
            CircuitOp::PauliZ { target, controls } => Ok(vec![GateSpec::new(
                register,
                gates::pauli_z(register.dim(*target))?,
                *target,
                controls.clone(),
            )?]),
            CircuitOp::Givens {
                target,
                controls,
                levels,
                theta,
                phi,
            } => Ok(vec![GateSpec::new(
                register,
                gates::givens(register.dim(*target), levels.0, levels.1, *theta, *phi)?,
                *target,
                controls.clone(),
            )?]),
            CircuitOp::Cex {
                target,
                control,
                levels,
            } => Ok(vec![gates::cex(
                register,
                control.wire,
                control.level,
                *target,
                levels.0,
                levels.1,
            )?]),
            CircuitOp::Csum { control, target } => {
                gates::csum(register, *control, *target)?.expand(register)
            }
        }
    }

}

/// An ordered gate list over a mixed-radix register, plus a measurement
/// directive.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    register: QuditRegister,
    ops: Vec<CircuitOp>,
    measure_all: bool,
}

impl Circuit {
    pub fn new(register: QuditRegister) -> Self {
        Circuit {
            register,
            ops: Vec::new(),
            measure_all: false,
        }
    }

    /// Appends a gate after validating it against the register.
    pub fn push(&mut self, op: CircuitOp) -> Result<()> {
        op.elementary(&self.register)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn set_measure_all(&mut self, measure: bool) {
        self.measure_all = measure;
    }

    pub fn register(&self) -> &QuditRegister {
        &self.register
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn measure_all(&self) -> bool {
        self.measure_all
    }

    /// Number of elementary gate applications the circuit expands to.
    pub fn elementary_count(&self) -> Result<usize> {
        let mut count = 0;
        for op in &self.ops {
            count += op.elementary(&self.register)?.len();
        }
        Ok(count)
    }
}

/// Options controlling one simulation run.
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Seed of the measurement sampler.
    pub seed: u64,
    /// Number of measurement outcomes to draw from the final state.
    pub samples: usize,
    /// Complex-table deduplication tolerance.
    pub tolerance: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            samples: 0,
            tolerance: crate::complex::DEFAULT_TOLERANCE,
        }
    }
}

/// Result of simulating a circuit.
#[derive(Debug)]
pub struct RunOutcome {
    /// The package owning the final state, kept alive so amplitudes can be
    /// queried.
    pub package: Package,
    pub final_state: Edge,
    pub stats: DdStats,
    /// Elementary gate-diagram applications performed.
    pub op_count: usize,
    /// Wall-clock seconds spent building and applying gate diagrams
    /// (excludes parsing, generation, and sampling).
    pub runtime_seconds: f64,
    pub samples: Vec<BasisIndex>,
}

/// Simulates a circuit: starts from the all-zero state, folds every gate
/// via its diagram, and optionally draws measurement samples. Deterministic
/// for a fixed seed.
pub fn run(circuit: &Circuit, options: &RunOptions) -> Result<RunOutcome> {
    let mut package =
        Package::with_tolerance(circuit.register().clone(), options.tolerance);
    let mut op_count = 0;
    let start = Instant::now();
    let mut state = package.all_zero_state()?;
    package.ref_edge(state);
    for op in circuit.ops() {
        for spec in op.elementary(circuit.register())? {
            let gate = package.make_gate_dd(&spec)?;
            let next = package.multiply(gate, state)?;
            package.ref_edge(next);
            package.unref_edge(state);
            state = next;
            op_count += 1;
            package.maybe_collect();
        }
    }
    let runtime_seconds = start.elapsed().as_secs_f64();
    let stats = package.stats(state);
    let samples = if options.samples > 0 {
        let mut rng = SplitMix64::new(options.seed);
        package.sample_many(state, options.samples, &mut rng)?
    } else {
        Vec::new()
    };
    Ok(RunOutcome {
        package,
        final_state: state,
        stats,
        op_count,
        runtime_seconds,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn empty_circuit_prepares_the_all_zero_state() {
        let circuit = Circuit::new(QuditRegister::new(vec![3, 2]).unwrap());
        let outcome = run(&circuit, &RunOptions::default()).unwrap();
        let amp = outcome
            .package
            .get_amplitude(outcome.final_state, &BasisIndex::new(vec![0, 0]))
            .unwrap();
        assert_eq!(amp, Complex64::new(1.0, 0.0));
        assert_eq!(outcome.op_count, 0);
        assert_eq!(outcome.stats.node_count, 3);
    }

    #[test]
    fn run_is_deterministic() {
        let circuit = ghz_circuit(3, 3).unwrap();
        let opts = RunOptions {
            seed: 99,
            samples: 25,
            ..RunOptions::default()
        };
        let a = run(&circuit, &opts).unwrap();
        let b = run(&circuit, &opts).unwrap();
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.stats, b.stats);
        assert_eq!(a.op_count, b.op_count);
    }

    #[test]
    fn ghz_sampling_support_is_diagonal() {
        let circuit = ghz_circuit(3, 3).unwrap();
        let opts = RunOptions {
            seed: 7,
            samples: 2000,
            ..RunOptions::default()
        };
        let outcome = run(&circuit, &opts).unwrap();
        for sample in &outcome.samples {
            let d = sample.digit(0);
            assert!(sample.digits().iter().all(|&x| x == d), "off-diagonal {sample}");
        }
    }
}

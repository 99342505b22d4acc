//! Benchmark circuit generators.

use super::{Circuit, CircuitOp};
use crate::error::{Error, Result};
use crate::gates::ControlSpec;
use crate::register::QuditRegister;
use crate::rng::SplitMix64;

/// Circuit preparing the `d`-level GHZ state
/// `(|0...0> + |1...1> + ... + |d-1...d-1>) / sqrt(d)` on `n` qudits:
/// a Hadamard on the top wire followed by a ladder of controlled sums
/// copying each digit to the next wire. Expands to `1 + (n-1)(d-1)`
/// elementary gates.
pub fn ghz_circuit(n: usize, d: usize) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::TooFewQudits { required: 2, got: n });
    }
    let register = QuditRegister::new(vec![d; n])?;
    let mut circuit = Circuit::new(register);
    circuit.push(CircuitOp::Hadamard {
        target: 0,
        controls: vec![],
    })?;
    for wire in 0..n - 1 {
        circuit.push(CircuitOp::Csum {
            control: wire,
            target: wire + 1,
        })?;
    }
    circuit.set_measure_all(true);
    Ok(circuit)
}

/// Circuit preparing the `n`-qudit W state
/// `(|0...01> + |0...010> + ... + |10...0>) / sqrt(n)` on levels `{0, 1}`
/// of each wire (higher levels stay unused).
///
/// An X seeds the excitation on wire 0; each step then splits off an
/// amplitude of `1/sqrt(n)` with a controlled two-level rotation of angle
/// `arccos(1 / sqrt(n - k))` and moves the remainder down the ladder with a
/// controlled exchange.
pub fn w_state_circuit(dims: &[usize]) -> Result<Circuit> {
    let register = QuditRegister::new(dims.to_vec())?;
    let n = register.num_qudits();
    let mut circuit = Circuit::new(register);
    circuit.push(CircuitOp::PauliX {
        target: 0,
        controls: vec![],
    })?;
    for k in 1..n {
        let remaining = (n - k + 1) as f64;
        circuit.push(CircuitOp::Givens {
            target: k,
            controls: vec![ControlSpec {
                wire: k - 1,
                level: 1,
            }],
            levels: (0, 1),
            theta: (1.0 / remaining.sqrt()).acos(),
            phi: 0.0,
        })?;
        circuit.push(CircuitOp::Cex {
            target: k - 1,
            control: ControlSpec { wire: k, level: 1 },
            levels: (0, 1),
        })?;
    }
    circuit.set_measure_all(true);
    Ok(circuit)
}

const KIND_COUNT: u64 = 6;
const LOCAL_KIND_COUNT: u64 = 2;

/// Deterministic-in-seed random circuit of `op_count` gates.
///
/// Each gate draws its kind uniformly from `{h, givens, cex, csum,
/// controlled-x, controlled-z}`, then wires, levels, and angles uniformly
/// from their valid ranges. On a single-qudit register only the local kinds
/// are drawn; a csum whose control dimension exceeds its target dimension
/// is redrawn.
pub fn random_circuit(dims: &[usize], op_count: usize, seed: u64) -> Result<Circuit> {
    let register = QuditRegister::new(dims.to_vec())?;
    let n = register.num_qudits();
    let mut circuit = Circuit::new(register.clone());
    let mut rng = SplitMix64::new(seed);
    for _ in 0..op_count {
        let kind = if n < 2 {
            rng.next_below(LOCAL_KIND_COUNT)
        } else {
            rng.next_below(KIND_COUNT)
        };
        let op = match kind {
            0 => CircuitOp::Hadamard {
                target: rng.next_below(n as u64) as usize,
                controls: vec![],
            },
            1 => {
                let target = rng.next_below(n as u64) as usize;
                let (i, j) = random_level_pair(&mut rng, register.dim(target));
                CircuitOp::Givens {
                    target,
                    controls: vec![],
                    levels: (i, j),
                    theta: rng.next_f64() * std::f64::consts::TAU,
                    phi: rng.next_f64() * std::f64::consts::TAU,
                }
            }
            2 => {
                let (control, target) = random_wire_pair(&mut rng, n);
                let (t1, t2) = random_level_pair(&mut rng, register.dim(target));
                CircuitOp::Cex {
                    target,
                    control: ControlSpec {
                        wire: control,
                        level: rng.next_below(register.dim(control) as u64) as usize,
                    },
                    levels: (t1, t2),
                }
            }
            3 => {
                let (control, target) = loop {
                    let (c, t) = random_wire_pair(&mut rng, n);
                    if register.dim(c) <= register.dim(t) {
                        break (c, t);
                    }
                };
                CircuitOp::Csum { control, target }
            }
            4 | 5 => {
                let (control, target) = random_wire_pair(&mut rng, n);
                let spec = ControlSpec {
                    wire: control,
                    level: rng.next_below(register.dim(control) as u64) as usize,
                };
                if kind == 4 {
                    CircuitOp::PauliX {
                        target,
                        controls: vec![spec],
                    }
                } else {
                    CircuitOp::PauliZ {
                        target,
                        controls: vec![spec],
                    }
                }
            }
            _ => unreachable!(),
        };
        circuit.push(op)?;
    }
    circuit.set_measure_all(true);
    Ok(circuit)
}

fn random_wire_pair(rng: &mut SplitMix64, n: usize) -> (usize, usize) {
    let first = rng.next_below(n as u64) as usize;
    let mut second = rng.next_below(n as u64 - 1) as usize;
    if second >= first {
        second += 1;
    }
    (first, second)
}

fn random_level_pair(rng: &mut SplitMix64, d: usize) -> (usize, usize) {
    let j = 1 + rng.next_below(d as u64 - 1) as usize;
    let i = rng.next_below(j as u64) as usize;
    (i, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_requires_two_qudits() {
        assert!(matches!(
            ghz_circuit(1, 3),
            Err(Error::TooFewQudits { .. })
        ));
    }

    #[test]
    fn random_circuits_are_reproducible_as_text() {
        let a = random_circuit(&[3, 2, 4], 200, 17).unwrap();
        let b = random_circuit(&[3, 2, 4], 200, 17).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        let c = random_circuit(&[3, 2, 4], 200, 18).unwrap();
        assert_ne!(a.to_string(), c.to_string());
    }

    #[test]
    fn random_circuit_round_trips_through_text() {
        let circuit = random_circuit(&[2, 3, 5], 150, 3).unwrap();
        let reparsed = super::super::parse(&circuit.to_string()).unwrap();
        assert_eq!(circuit, reparsed);
    }

    #[test]
    fn random_kind_histogram_is_roughly_uniform() {
        let circuit = random_circuit(&[3, 3, 3], 10_000, 5).unwrap();
        let mut counts = [0usize; 6];
        for op in circuit.ops() {
            let slot = match op {
                CircuitOp::Hadamard { .. } => 0,
                CircuitOp::Givens { .. } => 1,
                CircuitOp::Cex { .. } => 2,
                CircuitOp::Csum { .. } => 3,
                CircuitOp::PauliX { .. } => 4,
                CircuitOp::PauliZ { .. } => 5,
            };
            counts[slot] += 1;
        }
        for &count in &counts {
            let freq = count as f64 / 10_000.0;
            assert!(
                (freq - 1.0 / 6.0).abs() < 0.02,
                "kind frequency {freq} deviates from uniform"
            );
        }
    }

    #[test]
    fn single_qudit_registers_draw_only_local_gates() {
        let circuit = random_circuit(&[4], 500, 23).unwrap();
        for op in circuit.ops() {
            assert!(matches!(
                op,
                CircuitOp::Hadamard { .. } | CircuitOp::Givens { .. }
            ));
        }
    }

    #[test]
    fn csum_draws_respect_dimension_ordering() {
        let circuit = random_circuit(&[5, 2, 3], 2000, 1).unwrap();
        for op in circuit.ops() {
            if let CircuitOp::Csum { control, target } = op {
                assert!(circuit.register().dim(*control) <= circuit.register().dim(*target));
            }
        }
    }
}

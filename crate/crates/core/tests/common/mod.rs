//! Shared test support: an independent dense simulator used as the oracle
//! for the decision-diagram implementation, plus chi-square helpers.
//!
//! The dense route never touches diagram code: operators are padded via
//! per-wire delta logic and applied by plain matrix-vector products.

#![allow(dead_code)]

use mddsim::{
    BasisIndex, Circuit, Edge, GateSpec, Package, QuditRegister, SplitMix64,
};
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense `D x D` matrix of a gate padded to the full register, built
/// directly from the definition: spectator wires are diagonal, control
/// wires gate the local action, and the target wire carries the local
/// matrix when every control is satisfied (identity otherwise).
pub fn padded_operator(register: &QuditRegister, spec: &GateSpec) -> Vec<Complex64> {
    let dim = register.total_dimension().expect("oracle registers are small");
    let n = register.num_qudits();
    let mut out = vec![c(0.0, 0.0); dim * dim];
    for row in 0..dim {
        let rd = BasisIndex::from_dense(register, row);
        'col: for col in 0..dim {
            let cd = BasisIndex::from_dense(register, col);
            for wire in 0..n {
                if wire != spec.target() && rd.digit(wire) != cd.digit(wire) {
                    continue 'col;
                }
            }
            let satisfied = spec
                .controls()
                .iter()
                .all(|ctl| rd.digit(ctl.wire) == ctl.level);
            let entry = if satisfied {
                spec.op().entry(rd.digit(spec.target()), cd.digit(spec.target()))
            } else if rd.digit(spec.target()) == cd.digit(spec.target()) {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            };
            out[row * dim + col] = entry;
        }
    }
    out
}

/// Dense matrix-vector product.
pub fn apply_dense(matrix: &[Complex64], state: &[Complex64]) -> Vec<Complex64> {
    let dim = state.len();
    let mut out = vec![c(0.0, 0.0); dim];
    for (row, slot) in out.iter_mut().enumerate() {
        let mut sum = c(0.0, 0.0);
        for (col, amp) in state.iter().enumerate() {
            sum += matrix[row * dim + col] * amp;
        }
        *slot = sum;
    }
    out
}

/// Dense simulation of a circuit from the all-zero state.
pub fn simulate_dense(circuit: &Circuit) -> Vec<Complex64> {
    let register = circuit.register();
    let dim = register.total_dimension().expect("oracle registers are small");
    let mut state = vec![c(0.0, 0.0); dim];
    state[0] = c(1.0, 0.0);
    for op in circuit.ops() {
        for spec in op.elementary(register).unwrap() {
            let matrix = padded_operator(register, &spec);
            state = apply_dense(&matrix, &state);
        }
    }
    state
}

/// Reads the full amplitude vector back out of a state diagram.
pub fn reconstruct_vector(package: &Package, root: Edge) -> Vec<Complex64> {
    let register = package.register();
    let dim = register.total_dimension().expect("oracle registers are small");
    (0..dim)
        .map(|i| {
            package
                .get_amplitude(root, &BasisIndex::from_dense(register, i))
                .unwrap()
        })
        .collect()
}

/// Reads the full matrix back out of an operator diagram.
pub fn reconstruct_matrix(package: &Package, root: Edge) -> Vec<Complex64> {
    let register = package.register();
    let dim = register.total_dimension().expect("oracle registers are small");
    let mut out = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        let row = BasisIndex::from_dense(register, r);
        for cidx in 0..dim {
            let col = BasisIndex::from_dense(register, cidx);
            out.push(package.get_matrix_entry(root, &row, &col).unwrap());
        }
    }
    out
}

pub fn max_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Draws a random register with dimensions in 2..=5 and total dimension at
/// most `max_dim`.
pub fn random_register(rng: &mut SplitMix64, max_dim: usize) -> QuditRegister {
    let mut dims = vec![2 + rng.next_below(4) as usize];
    let mut product = dims[0];
    loop {
        let d = 2 + rng.next_below(4) as usize;
        if product * d > max_dim || rng.next_below(4) == 0 {
            break;
        }
        product *= d;
        dims.push(d);
    }
    QuditRegister::new(dims).unwrap()
}

/// A normalized random state vector.
pub fn random_state(rng: &mut SplitMix64, dim: usize) -> Vec<Complex64> {
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| c(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    amps
}

/// Chi-square statistic of observed counts against expected probabilities.
/// Cells with zero probability must have zero observations.
pub fn chi_square(counts: &[usize], probabilities: &[f64]) -> f64 {
    assert_eq!(counts.len(), probabilities.len());
    let total: usize = counts.iter().sum();
    let mut statistic = 0.0;
    for (&obs, &p) in counts.iter().zip(probabilities) {
        if p == 0.0 {
            assert_eq!(obs, 0, "observed an outcome of probability zero");
            continue;
        }
        let expected = total as f64 * p;
        let diff = obs as f64 - expected;
        statistic += diff * diff / expected;
    }
    statistic
}

/// Upper 0.01 quantile of the chi-square distribution.
pub fn chi_square_critical_001(df: usize) -> f64 {
    match df {
        1 => 6.634897,
        2 => 9.210340,
        3 => 11.344867,
        4 => 13.276704,
        5 => 15.086272,
        8 => 20.090236,
        11 => 24.724970,
        26 => 45.641683,
        _ => panic!("no tabulated critical value for {df} degrees of freedom"),
    }
}

/// The qutrit-qubit entangled state `(|00> - |11> + |21>)/sqrt(3)` used in
/// several structural checks.
pub fn entangled_qutrit_qubit() -> (Package, Edge) {
    let register = QuditRegister::new(vec![3, 2]).unwrap();
    let mut pkg = Package::new(register);
    let s = 1.0 / 3.0f64.sqrt();
    let amps = vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-s, 0.0), c(0.0, 0.0), c(s, 0.0)];
    let e = pkg.vector_from_dense(&amps).unwrap();
    (pkg, e)
}

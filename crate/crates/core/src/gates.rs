//! Local gate matrices and the construction of full-register gate diagrams.
//!
//! Only the `d x d` local matrix of a gate is ever held densely. The
//! diagram for the padded operator is assembled level by level: identity
//! blocks for non-participating qudits, identity-or-zero filtering for
//! control qudits, and the local matrix entries at the target level.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::dd::{Edge, Kind, Package};
use crate::error::{Error, Result};
use crate::register::QuditRegister;

const UNITARITY_TOL: f64 = 1e-10;

/// A dense `d x d` unitary acting on one qudit, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    dim: usize,
    entries: Vec<Complex64>,
}

impl LocalUnitary {
    /// Validates the shape and unitarity (`U^dag U = I` within 1e-10
    /// componentwise) of the given entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        let u = LocalUnitary { dim, entries };
        let mut deviation: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                let mut sum = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    sum += u.entry(k, r).conj() * u.entry(k, c);
                }
                let expected = if r == c { 1.0 } else { 0.0 };
                deviation = deviation.max((sum - expected).norm());
            }
        }
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                deviation,
                tol: UNITARITY_TOL,
            });
        }
        Ok(u)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> LocalUnitary {
        let mut entries = Vec::with_capacity(self.dim * self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                entries.push(self.entry(c, r).conj());
            }
        }
        LocalUnitary {
            dim: self.dim,
            entries,
        }
    }
}

/// Cyclic increment: `X |j> = |j+1 mod d>`.
pub fn pauli_x(d: usize) -> Result<LocalUnitary> {
    pauli_x_power(d, 1)
}

/// `X^k`, the shift by `k` levels: `|j> -> |j+k mod d>`.
pub fn pauli_x_power(d: usize, k: usize) -> Result<LocalUnitary> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for j in 0..d {
        entries[((j + k) % d) * d + j] = Complex64::new(1.0, 0.0);
    }
    LocalUnitary::new(d, entries)
}

/// Phase gradient: `diag(1, w, ..., w^(d-1))` with `w = exp(2 pi i / d)`.
pub fn pauli_z(d: usize) -> Result<LocalUnitary> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for j in 0..d {
        entries[j * d + j] = root_of_unity(d, j);
    }
    LocalUnitary::new(d, entries)
}

/// Discrete-Fourier generalization of the Hadamard:
/// `H[j][k] = w^(jk) / sqrt(d)`.
pub fn hadamard(d: usize) -> Result<LocalUnitary> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let scale = 1.0 / (d as f64).sqrt();
    let mut entries = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            entries.push(root_of_unity(d, j * k) * scale);
        }
    }
    LocalUnitary::new(d, entries)
}

/// Two-level rotation: identity except on levels `(i, j)`, where it acts as
/// `[[cos t, -exp(-i phi) sin t], [exp(i phi) sin t, cos t]]`.
pub fn givens(d: usize, i: usize, j: usize, theta: f64, phi: f64) -> Result<LocalUnitary> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if i >= j || j >= d {
        return Err(Error::InvalidLevelPair { t1: i, t2: j, dim: d });
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        entries[k * d + k] = Complex64::new(1.0, 0.0);
    }
    let (sin, cos) = theta.sin_cos();
    entries[i * d + i] = Complex64::new(cos, 0.0);
    entries[j * d + j] = Complex64::new(cos, 0.0);
    entries[i * d + j] = -Complex64::from_polar(sin, -phi);
    entries[j * d + i] = Complex64::from_polar(sin, phi);
    LocalUnitary::new(d, entries)
}

/// Transposition of two levels: identity except `|t1> <-> |t2>`.
pub fn level_swap(d: usize, t1: usize, t2: usize) -> Result<LocalUnitary> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if t1 == t2 || t1 >= d || t2 >= d {
        return Err(Error::InvalidLevelPair { t1, t2, dim: d });
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        let to = if k == t1 {
            t2
        } else if k == t2 {
            t1
        } else {
            k
        };
        entries[to * d + k] = Complex64::new(1.0, 0.0);
    }
    LocalUnitary::new(d, entries)
}

fn root_of_unity(d: usize, exponent: usize) -> Complex64 {
    let angle = 2.0 * PI * (exponent % d) as f64 / d as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// A control condition: the gate acts only when `wire` is at `level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ControlSpec {
    pub wire: usize,
    pub level: usize,
}

/// One elementary gate application: a local unitary on a target wire plus a
/// conjunctive set of controls on other wires.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    op: LocalUnitary,
    target: usize,
    controls: Vec<ControlSpec>,
}

impl GateSpec {
    pub fn new(
        register: &QuditRegister,
        op: LocalUnitary,
        target: usize,
        mut controls: Vec<ControlSpec>,
    ) -> Result<Self> {
        let n = register.num_qudits();
        if target >= n {
            return Err(Error::WireOutOfRange { wire: target, size: n });
        }
        if op.dim() != register.dim(target) {
            return Err(Error::GateDimensionMismatch {
                wire: target,
                matrix_dim: op.dim(),
                wire_dim: register.dim(target),
            });
        }
        controls.sort_by_key(|c| c.wire);
        for (i, c) in controls.iter().enumerate() {
            if c.wire >= n {
                return Err(Error::WireOutOfRange { wire: c.wire, size: n });
            }
            if c.wire == target {
                return Err(Error::ControlOnTarget(c.wire));
            }
            if i > 0 && controls[i - 1].wire == c.wire {
                return Err(Error::DuplicateControl(c.wire));
            }
            if c.level >= register.dim(c.wire) {
                return Err(Error::ControlLevelOutOfRange {
                    wire: c.wire,
                    level: c.level,
                    dim: register.dim(c.wire),
                });
            }
        }
        Ok(GateSpec {
            op,
            target,
            controls,
        })
    }

    pub fn op(&self) -> &LocalUnitary {
        &self.op
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[ControlSpec] {
        &self.controls
    }

    /// The inverse gate: conjugate-transposed local matrix, same controls.
    /// The full diagram is never transposed; only the local matrix is.
    pub fn dagger(&self) -> GateSpec {
        GateSpec {
            op: self.op.dagger(),
            target: self.target,
            controls: self.controls.clone(),
        }
    }
}

/// Controlled exchange: swaps target levels `(t1, t2)` when the control
/// qudit is at `control_level`, identity otherwise.
pub fn cex(
    register: &QuditRegister,
    control_wire: usize,
    control_level: usize,
    target_wire: usize,
    t1: usize,
    t2: usize,
) -> Result<GateSpec> {
    if target_wire >= register.num_qudits() {
        return Err(Error::WireOutOfRange {
            wire: target_wire,
            size: register.num_qudits(),
        });
    }
    let op = level_swap(register.dim(target_wire), t1, t2)?;
    GateSpec::new(
        register,
        op,
        target_wire,
        vec![ControlSpec {
            wire: control_wire,
            level: control_level,
        }],
    )
}

/// Controlled sum `|c, j> -> |c, c + j mod d>`, described as a composite of
/// controlled shifts: for every control level `c >= 1`, apply `X^c` to the
/// target. Defined for control dimension at most the target dimension; the
/// addend is the control digit and addition is modulo the target dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsumSpec {
    pub control: usize,
    pub target: usize,
}

pub fn csum(register: &QuditRegister, control: usize, target: usize) -> Result<CsumSpec> {
    let n = register.num_qudits();
    if control >= n {
        return Err(Error::WireOutOfRange { wire: control, size: n });
    }
    if target >= n {
        return Err(Error::WireOutOfRange { wire: target, size: n });
    }
    if control == target {
        return Err(Error::ControlOnTarget(control));
    }
    if register.dim(control) > register.dim(target) {
        return Err(Error::CsumDimensionMismatch {
            control_dim: register.dim(control),
            target_dim: register.dim(target),
        });
    }
    Ok(CsumSpec { control, target })
}

impl CsumSpec {
    /// The elementary controlled-shift gates realizing this sum.
    pub fn expand(&self, register: &QuditRegister) -> Result<Vec<GateSpec>> {
        let d_control = register.dim(self.control);
        let d_target = register.dim(self.target);
        (1..d_control)
            .map(|c| {
                GateSpec::new(
                    register,
                    pauli_x_power(d_target, c)?,
                    self.target,
                    vec![ControlSpec {
                        wire: self.control,
                        level: c,
                    }],
                )
            })
            .collect()
    }
}

impl Package {
    /// Builds the matrix diagram of a gate padded to the full register.
    ///
    /// Construction is bottom-up: below the target every local-matrix entry
    /// is wrapped per level (identity blocks on non-participating wires,
    /// identity-or-zero filtering on control wires), the target node holds
    /// the wrapped entries, and levels above the target wrap the result the
    /// same way.
    pub fn make_gate_dd(&mut self, spec: &GateSpec) -> Result<Edge> {
        let n = self.register().num_qudits();
        if spec.target() >= n || spec.op().dim() != self.register().dim(spec.target()) {
            return Err(Error::GateDimensionMismatch {
                wire: spec.target(),
                matrix_dim: spec.op().dim(),
                wire_dim: self.register().dim(spec.target().min(n - 1)),
            });
        }
        let t_level = self.register().level_of(spec.target());
        let d_t = spec.op().dim();

        let mut control_at_level: Vec<Option<usize>> = vec![None; n];
        for c in spec.controls() {
            if c.wire >= n || c.level >= self.register().dim(c.wire) {
                return Err(Error::ControlLevelOutOfRange {
                    wire: c.wire,
                    level: c.level,
                    dim: self.register().dim(c.wire.min(n - 1)),
                });
            }
            control_at_level[self.register().level_of(c.wire) as usize] = Some(c.level);
        }
        if control_at_level[t_level as usize].is_some() {
            return Err(Error::ControlOnTarget(spec.target()));
        }

        let mut entry_edges = Vec::with_capacity(d_t * d_t);
        for r in 0..d_t {
            for k in 0..d_t {
                let w = self.lookup(spec.op().entry(r, k))?;
                entry_edges.push(Edge::terminal(w));
            }
        }

        for level in 0..t_level {
            let d = self.register().dim_at_level(level);
            let control = control_at_level[level as usize];
            // Indexing keeps the borrow local; each slot is read and then
            // replaced by its wrapped node.
            #[allow(clippy::needless_range_loop)]
            for idx in 0..d_t * d_t {
                let e_i = entry_edges[idx];
                let is_diag = idx / d_t == idx % d_t;
                match control {
                    Some(c) => {
                        let mut succ = vec![Edge::ZERO; d * d];
                        succ[c * d + c] = e_i;
                        if is_diag {
                            // Unsatisfied control on a diagonal block means
                            // the whole operator acts as identity below.
                            let ident = self.identity_below(level)?;
                            for j in 0..d {
                                if j != c {
                                    succ[j * d + j] = ident;
                                }
                            }
                        }
                        entry_edges[idx] = self.make_node(level, Kind::Matrix, succ)?;
                    }
                    None => {
                        if e_i.is_zero() {
                            continue;
                        }
                        let mut succ = vec![Edge::ZERO; d * d];
                        for j in 0..d {
                            succ[j * d + j] = e_i;
                        }
                        entry_edges[idx] = self.make_node(level, Kind::Matrix, succ)?;
                    }
                }
            }
        }

        let mut edge = self.make_node(t_level, Kind::Matrix, entry_edges)?;

        for level in t_level + 1..n as u16 {
            let d = self.register().dim_at_level(level);
            let mut succ = vec![Edge::ZERO; d * d];
            match control_at_level[level as usize] {
                Some(c) => {
                    let ident = self.identity_below(level)?;
                    for j in 0..d {
                        succ[j * d + j] = if j == c { edge } else { ident };
                    }
                }
                None => {
                    for j in 0..d {
                        succ[j * d + j] = edge;
                    }
                }
            }
            edge = self.make_node(level, Kind::Matrix, succ)?;
        }
        Ok(edge)
    }
}

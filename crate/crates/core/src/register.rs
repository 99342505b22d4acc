//! Mixed-radix qudit registers and basis indices.

use crate::error::{Error, Result};

/// An ordered collection of qudits, each with its own dimension.
///
/// Wires are numbered in the order given, `0..n`, with wire 0 drawn topmost
/// in circuit diagrams and acting as the most significant digit of a dense
/// amplitude index. Internally the decision diagrams number the same qudits
/// by *level*, counted from the bottom: the root node of a diagram sits at
/// level `n - 1` (wire 0) and level 0 is the wire just above the terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuditRegister {
    dims: Vec<usize>,
}

impl QuditRegister {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(Error::EmptyRegister);
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::DimensionTooSmall(d));
        }
        Ok(QuditRegister { dims })
    }

    pub fn num_qudits(&self) -> usize {
        self.dims.len()
    }

    /// Dimension of a wire (top-down numbering).
    pub fn dim(&self, wire: usize) -> usize {
        self.dims[wire]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Product of all dimensions, or `None` if it overflows.
    pub fn total_dimension(&self) -> Option<usize> {
        self.dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
    }

    /// Decision-diagram level of a wire. Wire 0 is the root level `n - 1`.
    pub fn level_of(&self, wire: usize) -> u16 {
        debug_assert!(wire < self.dims.len());
        (self.dims.len() - 1 - wire) as u16
    }

    /// Wire owning a decision-diagram level.
    pub fn wire_of(&self, level: u16) -> usize {
        debug_assert!((level as usize) < self.dims.len());
        self.dims.len() - 1 - level as usize
    }

    pub fn dim_at_level(&self, level: u16) -> usize {
        self.dims[self.wire_of(level)]
    }

    /// Top level of the register, i.e. the level of the root node of any
    /// full-register decision diagram.
    pub fn top_level(&self) -> u16 {
        (self.dims.len() - 1) as u16
    }
}

/// A basis-state label: one digit per wire, in wire order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisIndex(Vec<usize>);

impl BasisIndex {
    pub fn new(digits: impl Into<Vec<usize>>) -> Self {
        BasisIndex(digits.into())
    }

    /// The all-zero label for a register.
    pub fn zero(register: &QuditRegister) -> Self {
        BasisIndex(vec![0; register.num_qudits()])
    }

    pub fn digits(&self) -> &[usize] {
        &self.0
    }

    pub fn digit(&self, wire: usize) -> usize {
        self.0[wire]
    }

    pub fn validate(&self, register: &QuditRegister) -> Result<()> {
        if self.0.len() != register.num_qudits() {
            return Err(Error::IndexLength {
                expected: register.num_qudits(),
                got: self.0.len(),
            });
        }
        for (wire, &digit) in self.0.iter().enumerate() {
            if digit >= register.dim(wire) {
                return Err(Error::IndexOutOfRange {
                    wire,
                    digit,
                    dim: register.dim(wire),
                });
            }
        }
        Ok(())
    }

    /// Position of this basis state in the dense amplitude vector
    /// (wire 0 most significant). `None` if the register dimension
    /// overflows.
    pub fn dense_index(&self, register: &QuditRegister) -> Option<usize> {
        let mut idx = 0usize;
        for (wire, &digit) in self.0.iter().enumerate() {
            idx = idx.checked_mul(register.dim(wire))?.checked_add(digit)?;
        }
        Some(idx)
    }

    /// Inverse of [`dense_index`](Self::dense_index).
    pub fn from_dense(register: &QuditRegister, mut index: usize) -> Self {
        let n = register.num_qudits();
        let mut digits = vec![0usize; n];
        for wire in (0..n).rev() {
            let d = register.dim(wire);
            digits[wire] = index % d;
            index /= d;
        }
        BasisIndex(digits)
    }
}

impl std::fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

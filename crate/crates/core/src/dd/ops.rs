//! Diagram arithmetic: Kronecker product, multiplication, addition,
//! amplitude reconstruction, inner products, and measurement sampling.
//!
//! Multiplication and the Kronecker product factor the operand edge weights
//! out before recursing, so their caches key on node identities alone and
//! the weights are reapplied to the result. Addition is not factorable the
//! same way and caches on full `(weight, node)` edges. Zero-stub
//! short-circuits always fire before any cache is consulted.

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use super::{Edge, Kind, NodeId, Package};
use crate::error::{Error, Result};
use crate::register::BasisIndex;
use crate::rng::SplitMix64;

/// Memoization tables for the recursive operations.
///
/// Entries are dropped before any garbage collection that could free their
/// operands or results; a hit therefore always denotes exactly the value a
/// fresh computation would produce.
#[derive(Debug, Default)]
pub(crate) struct ComputeTables {
    mult_mv: FxHashMap<(NodeId, NodeId), Edge>,
    mult_mm: FxHashMap<(NodeId, NodeId), Edge>,
    add: FxHashMap<(Edge, Edge), Edge>,
    kron: FxHashMap<(NodeId, NodeId), Edge>,
    inner: FxHashMap<(NodeId, NodeId), Complex64>,
}

impl ComputeTables {
    pub(crate) fn clear(&mut self) {
        self.mult_mv.clear();
        self.mult_mm.clear();
        self.add.clear();
        self.kron.clear();
        self.inner.clear();
    }
}

/// Instrumentation counters: node expansions performed by each recursive
/// operation since the last reset (cache hits and short-circuits excluded).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub kron_node_visits: u64,
    pub mult_node_visits: u64,
    pub add_node_visits: u64,
}

impl Package {
    /// Kronecker product `x (x) y` of two diagrams of the same kind, with
    /// `y` occupying the levels strictly below `x`.
    ///
    /// Every terminal-reaching edge of `x` is redirected to the root of `y`
    /// with weights multiplied, so the cost is linear in the node count of
    /// `x`.
    pub fn kron(&mut self, x: Edge, y: Edge) -> Result<Edge> {
        if x.is_zero() || y.is_zero() {
            return Ok(Edge::ZERO);
        }
        if x.is_terminal() {
            let w = self.table_mut().mul(x.weight, y.weight)?;
            return Ok(Edge { weight: w, node: y.node });
        }
        if y.is_terminal() {
            let w = self.table_mut().mul(x.weight, y.weight)?;
            return Ok(Edge { weight: w, node: x.node });
        }
        if self.node_kind(x.node) != self.node_kind(y.node) {
            return Err(Error::OperandMismatch);
        }
        if self.bottom_level(x.node) != self.node_level(y.node) + 1 {
            return Err(Error::OperandMismatch);
        }
        let sub = self.kron_nodes(x.node, y.node)?;
        let w = self.table_mut().mul(x.weight, y.weight)?;
        let w = self.table_mut().mul(w, sub.weight)?;
        Ok(Edge { weight: w, node: sub.node })
    }

    fn kron_nodes(&mut self, x: NodeId, y: NodeId) -> Result<Edge> {
        if x.is_terminal() {
            return Ok(Edge { weight: crate::complex::ComplexId::ONE, node: y });
        }
        if self.caching() {
            if let Some(&hit) = self.compute_mut().kron.get(&(x, y)) {
                return Ok(hit);
            }
        }
        self.counters_mut().kron_node_visits += 1;
        let succ: Vec<Edge> = self.node_successors(x).to_vec();
        let level = self.node_level(x);
        let kind = self.node_kind(x);
        let mut out = Vec::with_capacity(succ.len());
        for e in succ {
            if e.is_zero() {
                out.push(Edge::ZERO);
            } else if e.is_terminal() {
                out.push(Edge { weight: e.weight, node: y });
            } else {
                let sub = self.kron_nodes(e.node, y)?;
                let w = self.table_mut().mul(e.weight, sub.weight)?;
                out.push(Edge { weight: w, node: sub.node });
            }
        }
        let result = self.make_node(level, kind, out)?;
        if self.caching() {
            self.compute_mut().kron.insert((x, y), result);
        }
        Ok(result)
    }

    /// Applies an operator diagram to a state diagram (`m · v`).
    pub fn multiply(&mut self, m: Edge, v: Edge) -> Result<Edge> {
        self.multiply_impl(m, v, Kind::Vector)
    }

    /// Product of two operator diagrams (`a · b`).
    pub fn multiply_mm(&mut self, a: Edge, b: Edge) -> Result<Edge> {
        self.multiply_impl(a, b, Kind::Matrix)
    }

    fn multiply_impl(&mut self, x: Edge, y: Edge, y_kind: Kind) -> Result<Edge> {
        if x.is_zero() || y.is_zero() {
            return Ok(Edge::ZERO);
        }
        if x.is_terminal() && y.is_terminal() {
            let w = self.table_mut().mul(x.weight, y.weight)?;
            return Ok(Edge::terminal(w));
        }
        if x.is_terminal() || y.is_terminal() {
            return Err(Error::OperandMismatch);
        }
        if self.node_kind(x.node) != Kind::Matrix
            || self.node_kind(y.node) != y_kind
            || self.node_level(x.node) != self.node_level(y.node)
        {
            return Err(Error::OperandMismatch);
        }
        let sub = self.mult_nodes(x.node, y.node, y_kind)?;
        let w = self.table_mut().mul(x.weight, y.weight)?;
        let w = self.table_mut().mul(w, sub.weight)?;
        Ok(Edge { weight: w, node: sub.node })
    }

    fn mult_nodes(&mut self, x: NodeId, y: NodeId, y_kind: Kind) -> Result<Edge> {
        let level = self.node_level(x);
        if self.node_level(y) != level {
            return Err(Error::OperandMismatch);
        }
        // Identity short-circuits: the unique table guarantees an identity
        // block is pointer-equal to the cached identity diagram.
        if self.identity_node_at(level) == Some(x) {
            return Ok(Edge { weight: crate::complex::ComplexId::ONE, node: y });
        }
        if y_kind == Kind::Matrix && self.identity_node_at(level) == Some(y) {
            return Ok(Edge { weight: crate::complex::ComplexId::ONE, node: x });
        }
        if self.caching() {
            let cache = match y_kind {
                Kind::Vector => &self.compute_mut().mult_mv,
                Kind::Matrix => &self.compute_mut().mult_mm,
            };
            if let Some(&hit) = cache.get(&(x, y)) {
                return Ok(hit);
            }
        }
        self.counters_mut().mult_node_visits += 1;
        let d = self.register().dim_at_level(level);
        let cols = match y_kind {
            Kind::Vector => 1,
            Kind::Matrix => d,
        };
        let x_succ: Vec<Edge> = self.node_successors(x).to_vec();
        let y_succ: Vec<Edge> = self.node_successors(y).to_vec();
        let mut out = vec![Edge::ZERO; d * cols];
        for i in 0..d {
            for j in 0..cols {
                let mut acc = Edge::ZERO;
                for k in 0..d {
                    let ex = x_succ[i * d + k];
                    let ey = y_succ[k * cols + j];
                    let prod = self.mult_edge(ex, ey, y_kind)?;
                    acc = self.add(acc, prod)?;
                }
                out[i * cols + j] = acc;
            }
        }
        let result = self.make_node(level, y_kind, out)?;
        if self.caching() {
            let cache = match y_kind {
                Kind::Vector => &mut self.compute_mut().mult_mv,
                Kind::Matrix => &mut self.compute_mut().mult_mm,
            };
            cache.insert((x, y), result);
        }
        Ok(result)
    }

    fn mult_edge(&mut self, x: Edge, y: Edge, y_kind: Kind) -> Result<Edge> {
        if x.is_zero() || y.is_zero() {
            return Ok(Edge::ZERO);
        }
        if x.is_terminal() && y.is_terminal() {
            let w = self.table_mut().mul(x.weight, y.weight)?;
            return Ok(Edge::terminal(w));
        }
        if x.is_terminal() || y.is_terminal() {
            return Err(Error::OperandMismatch);
        }
        let sub = self.mult_nodes(x.node, y.node, y_kind)?;
        let w = self.table_mut().mul(x.weight, y.weight)?;
        let w = self.table_mut().mul(w, sub.weight)?;
        Ok(Edge { weight: w, node: sub.node })
    }

    /// Componentwise sum of two diagrams over the same levels and kind.
    ///
    /// When both edges target the same node the weights are summed without
    /// recursion; a vanishing result collapses to the zero stub.
    pub fn add(&mut self, x: Edge, y: Edge) -> Result<Edge> {
        if x.is_zero() {
            return Ok(y);
        }
        if y.is_zero() {
            return Ok(x);
        }
        if x.node == y.node {
            let w = self.table_mut().add(x.weight, y.weight)?;
            return Ok(if w.is_zero() {
                Edge::ZERO
            } else {
                Edge { weight: w, node: x.node }
            });
        }
        if x.is_terminal() || y.is_terminal() {
            return Err(Error::OperandMismatch);
        }
        if self.node_level(x.node) != self.node_level(y.node)
            || self.node_kind(x.node) != self.node_kind(y.node)
        {
            return Err(Error::OperandMismatch);
        }
        // Addition is commutative; order the key so both argument orders
        // share one cache slot.
        let key = if (x.node, x.weight) <= (y.node, y.weight) {
            (x, y)
        } else {
            (y, x)
        };
        if self.caching() {
            if let Some(&hit) = self.compute_mut().add.get(&key) {
                return Ok(hit);
            }
        }
        self.counters_mut().add_node_visits += 1;
        let level = self.node_level(x.node);
        let kind = self.node_kind(x.node);
        let x_succ: Vec<Edge> = self.node_successors(x.node).to_vec();
        let y_succ: Vec<Edge> = self.node_successors(y.node).to_vec();
        let mut out = Vec::with_capacity(x_succ.len());
        for (ex, ey) in x_succ.into_iter().zip(y_succ) {
            let ex_scaled = Edge {
                weight: self.table_mut().mul(x.weight, ex.weight)?,
                node: ex.node,
            };
            let ey_scaled = Edge {
                weight: self.table_mut().mul(y.weight, ey.weight)?,
                node: ey.node,
            };
            out.push(self.add(ex_scaled, ey_scaled)?);
        }
        let result = self.make_node(level, kind, out)?;
        if self.caching() {
            self.compute_mut().add.insert(key, result);
        }
        Ok(result)
    }

    /// Amplitude of one basis state: the product of the edge weights along
    /// the path selected by `index`, top level first. A zero stub anywhere
    /// on the path yields zero.
    pub fn get_amplitude(&self, root: Edge, index: &BasisIndex) -> Result<Complex64> {
        index.validate(self.register())?;
        if root.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut weight = self.value(root.weight);
        let mut node = root.node;
        while !node.is_terminal() {
            debug_assert_eq!(self.node_kind(node), Kind::Vector);
            let level = self.node_level(node);
            let wire = self.register().wire_of(level);
            let edge = self.node_successors(node)[index.digit(wire)];
            if edge.is_zero() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            weight *= self.value(edge.weight);
            node = edge.node;
        }
        Ok(weight)
    }

    /// Matrix element `<row| U |col>`: the path product with successor
    /// `row_digit * d + col_digit` selected at each level.
    pub fn get_matrix_entry(
        &self,
        root: Edge,
        row: &BasisIndex,
        col: &BasisIndex,
    ) -> Result<Complex64> {
        row.validate(self.register())?;
        col.validate(self.register())?;
        if root.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut weight = self.value(root.weight);
        let mut node = root.node;
        while !node.is_terminal() {
            debug_assert_eq!(self.node_kind(node), Kind::Matrix);
            let level = self.node_level(node);
            let wire = self.register().wire_of(level);
            let d = self.register().dim(wire);
            let edge = self.node_successors(node)[row.digit(wire) * d + col.digit(wire)];
            if edge.is_zero() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            weight *= self.value(edge.weight);
            node = edge.node;
        }
        Ok(weight)
    }

    /// Inner product `<a|b>`, conjugating the weights of `a` during the
    /// synchronized descent. `|<a|b>| = 1` within tolerance certifies
    /// equality up to a global phase.
    pub fn inner_product(&mut self, a: Edge, b: Edge) -> Result<Complex64> {
        if !a.is_terminal()
            && !b.is_terminal()
            && (self.node_kind(a.node) != Kind::Vector
                || self.node_kind(b.node) != Kind::Vector
                || self.node_level(a.node) != self.node_level(b.node))
        {
            return Err(Error::OperandMismatch);
        }
        self.inner_rec(a, b)
    }

    fn inner_rec(&mut self, a: Edge, b: Edge) -> Result<Complex64> {
        if a.is_zero() || b.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let w = self.value(a.weight).conj() * self.value(b.weight);
        if a.is_terminal() && b.is_terminal() {
            return Ok(w);
        }
        if a.is_terminal() || b.is_terminal() {
            return Err(Error::OperandMismatch);
        }
        let key = (a.node, b.node);
        let cached = if self.caching() {
            self.compute_mut().inner.get(&key).copied()
        } else {
            None
        };
        let sum = match cached {
            Some(s) => s,
            None => {
                let a_succ: Vec<Edge> = self.node_successors(a.node).to_vec();
                let b_succ: Vec<Edge> = self.node_successors(b.node).to_vec();
                let mut sum = Complex64::new(0.0, 0.0);
                for (ea, eb) in a_succ.into_iter().zip(b_succ) {
                    sum += self.inner_rec(ea, eb)?;
                }
                if self.caching() {
                    self.compute_mut().inner.insert(key, sum);
                }
                sum
            }
        };
        Ok(w * sum)
    }

    /// Draws one measurement outcome from a normalized state.
    ///
    /// One top-to-bottom traversal, consuming one uniform real per level;
    /// at each node edge `i` is followed with probability `|w_i|^2`.
    pub fn sample(&mut self, root: Edge, rng: &mut SplitMix64) -> Result<BasisIndex> {
        self.check_sampling_norm(root)?;
        Ok(self.sample_unchecked(root, rng))
    }

    /// Draws `count` outcomes, validating the norm once.
    pub fn sample_many(
        &mut self,
        root: Edge,
        count: usize,
        rng: &mut SplitMix64,
    ) -> Result<Vec<BasisIndex>> {
        self.check_sampling_norm(root)?;
        Ok((0..count)
            .map(|_| self.sample_unchecked(root, rng))
            .collect())
    }

    fn check_sampling_norm(&mut self, root: Edge) -> Result<()> {
        let ip = self.inner_product(root, root)?;
        let norm = ip.re.max(0.0).sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Unnormalized { norm, tol: 1e-10 });
        }
        Ok(())
    }

    fn sample_unchecked(&self, root: Edge, rng: &mut SplitMix64) -> BasisIndex {
        let mut digits = vec![0usize; self.register().num_qudits()];
        let mut node = root.node;
        while !node.is_terminal() {
            let successors = self.node_successors(node);
            let u = rng.next_f64();
            let mut cumulative = 0.0;
            let mut chosen = None;
            let mut last_nonzero = 0;
            for (i, e) in successors.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                last_nonzero = i;
                cumulative += self.value(e.weight).norm_sqr();
                if u < cumulative {
                    chosen = Some(i);
                    break;
                }
            }
            // Rounding may leave the cumulative sum marginally below u;
            // fall back to the last reachable edge.
            let pick = chosen.unwrap_or(last_nonzero);
            let level = self.node_level(node);
            digits[self.register().wire_of(level)] = pick;
            node = successors[pick].node;
        }
        BasisIndex::new(digits)
    }
}

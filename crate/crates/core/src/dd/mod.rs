//! Variable-arity edge-weighted decision diagrams.
//!
//! A diagram is a rooted DAG with one level per qudit: the root sits at the
//! highest level (the most significant wire) and every edge descends toward
//! a single shared terminal. Vector nodes carry one successor per basis
//! level of their qudit, matrix nodes one per (row, column) pair in
//! row-major order. Edge weights are interned [`ComplexId`]s, so two
//! diagrams are structurally equal exactly when their root edges are equal.
//!
//! All state lives in a [`Package`]: the complex table, the node arena with
//! its unique (hash-consing) table, reference counts, the identity cache,
//! and the operation caches. A package is single-owner; independent packages
//! may run on different threads.

mod ops;

pub use ops::OpCounters;

use num_complex::Complex64;
use rustc_hash::FxHashMap;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use crate::complex::{ComplexId, ComplexTable, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::register::{BasisIndex, QuditRegister};

/// Whether a node decomposes a state vector or an operator matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Vector,
    Matrix,
}

/// Handle to a node slot inside a package.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    /// The single shared terminal. It has no successors and is counted once
    /// in every node count.
    pub const TERMINAL: NodeId = NodeId(0);

    pub fn is_terminal(self) -> bool {
        self == Self::TERMINAL
    }
}

/// A weighted reference to a node. Root edges denote whole states or
/// operators; a weight-zero edge to the terminal (the "zero stub") denotes
/// an all-zero sub-vector or sub-matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub weight: ComplexId,
    pub node: NodeId,
}

impl Edge {
    /// The zero stub.
    pub const ZERO: Edge = Edge {
        weight: ComplexId::ZERO,
        node: NodeId::TERMINAL,
    };

    /// Weight-one edge to the terminal (the scalar 1).
    pub const UNIT: Edge = Edge {
        weight: ComplexId::ONE,
        node: NodeId::TERMINAL,
    };

    pub fn terminal(weight: ComplexId) -> Edge {
        if weight.is_zero() {
            Edge::ZERO
        } else {
            Edge {
                weight,
                node: NodeId::TERMINAL,
            }
        }
    }

    pub fn is_zero(self) -> bool {
        self.weight.is_zero()
    }

    pub fn is_terminal(self) -> bool {
        self.node.is_terminal()
    }
}

#[derive(Debug)]
struct Node {
    level: u16,
    kind: Kind,
    ref_count: u32,
    in_use: bool,
    successors: Box<[Edge]>,
}

/// Structural statistics of one diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DdStats {
    /// Reachable nodes including the terminal.
    pub node_count: usize,
    /// Distinct complex values reachable as edge weights, root weight
    /// included.
    pub distinct_complex: usize,
    /// Largest successor count among reachable nodes.
    pub max_arity: usize,
}

/// Owner of all decision-diagram state for one register.
#[derive(Debug)]
pub struct Package {
    register: QuditRegister,
    table: ComplexTable,
    nodes: Vec<Node>,
    free: Vec<u32>,
    live: usize,
    unique: FxHashMap<u64, Vec<NodeId>>,
    identity_cache: Vec<Edge>,
    compute: ops::ComputeTables,
    caching: bool,
    gc_threshold: usize,
    counters: OpCounters,
}

const DEFAULT_GC_THRESHOLD: usize = 1 << 20;

impl Package {
    pub fn new(register: QuditRegister) -> Self {
        Self::with_tolerance(register, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(register: QuditRegister, tolerance: f64) -> Self {
        let terminal = Node {
            level: 0,
            kind: Kind::Vector,
            ref_count: 1,
            in_use: true,
            successors: Box::new([]),
        };
        Package {
            register,
            table: ComplexTable::new(tolerance),
            nodes: vec![terminal],
            free: Vec::new(),
            live: 0,
            unique: FxHashMap::default(),
            identity_cache: Vec::new(),
            compute: ops::ComputeTables::default(),
            caching: true,
            gc_threshold: DEFAULT_GC_THRESHOLD,
            counters: OpCounters::default(),
        }
    }

    pub fn register(&self) -> &QuditRegister {
        &self.register
    }

    pub fn tolerance(&self) -> f64 {
        self.table.tolerance()
    }

    /// Interns a raw complex value.
    pub fn lookup(&mut self, v: Complex64) -> Result<ComplexId> {
        self.table.lookup(v)
    }

    /// The stored value of an interned id.
    pub fn value(&self, id: ComplexId) -> Complex64 {
        self.table.value(id)
    }

    /// Total number of interned complex values, dead intermediates included.
    pub fn complex_table_size(&self) -> usize {
        self.table.len()
    }

    /// Non-terminal nodes currently alive in the arena.
    pub fn live_nodes(&self) -> usize {
        self.live
    }

    /// Enables or disables the operation caches (enabled by default).
    pub fn set_caching(&mut self, enabled: bool) {
        self.caching = enabled;
        if !enabled {
            self.compute.clear();
        }
    }

    pub(crate) fn caching(&self) -> bool {
        self.caching
    }

    /// Sets the live-node count above which [`maybe_collect`](Self::maybe_collect)
    /// triggers a garbage collection.
    pub fn set_gc_threshold(&mut self, threshold: usize) {
        self.gc_threshold = threshold;
    }

    pub fn op_counters(&self) -> &OpCounters {
        &self.counters
    }

    pub fn reset_op_counters(&mut self) {
        self.counters = OpCounters::default();
    }

    pub(crate) fn counters_mut(&mut self) -> &mut OpCounters {
        &mut self.counters
    }

    pub(crate) fn compute_mut(&mut self) -> &mut ops::ComputeTables {
        &mut self.compute
    }

    pub(crate) fn table_mut(&mut self) -> &mut ComplexTable {
        &mut self.table
    }

    pub(crate) fn node_level(&self, id: NodeId) -> u16 {
        self.node(id).level
    }

    pub(crate) fn node_kind(&self, id: NodeId) -> Kind {
        self.node(id).kind
    }

    pub(crate) fn node_successors(&self, id: NodeId) -> &[Edge] {
        &self.node(id).successors
    }

    /// Kind of the diagram hanging off an edge; `None` for scalars.
    pub fn edge_kind(&self, e: Edge) -> Option<Kind> {
        if e.is_terminal() {
            None
        } else {
            Some(self.node(e.node).kind)
        }
    }

    /// Level of an edge's target node; `None` for terminal targets.
    pub fn edge_level(&self, e: Edge) -> Option<u16> {
        if e.is_terminal() {
            None
        } else {
            Some(self.node(e.node).level)
        }
    }

    fn node(&self, id: NodeId) -> &Node {
        let node = &self.nodes[id.0 as usize];
        debug_assert!(node.in_use, "access to collected node {id:?}");
        node
    }

    /// Builds the unique, normalized node for `(level, kind, successors)`.
    ///
    /// The common factor pulled out by normalization becomes the weight of
    /// the returned edge. If every successor is a zero stub the node is not
    /// materialized and the zero stub itself is returned.
    pub fn make_node(&mut self, level: u16, kind: Kind, successors: Vec<Edge>) -> Result<Edge> {
        let n = self.register.num_qudits();
        if level as usize >= n {
            return Err(Error::LevelOutOfRange { level, size: n });
        }
        let d = self.register.dim_at_level(level);
        let expected = match kind {
            Kind::Vector => d,
            Kind::Matrix => d * d,
        };
        if successors.len() != expected {
            return Err(Error::ArityMismatch {
                level,
                expected,
                got: successors.len(),
            });
        }
        let mut succ = successors;
        let mut all_zero = true;
        for e in succ.iter_mut() {
            if e.weight.is_zero() {
                *e = Edge::ZERO;
                continue;
            }
            all_zero = false;
            if !e.is_terminal() {
                let child = self.node(e.node);
                if child.level >= level {
                    return Err(Error::LevelOrder {
                        parent: level,
                        child: child.level,
                    });
                }
                if child.kind != kind {
                    return Err(Error::OperandMismatch);
                }
            }
        }
        if all_zero {
            return Ok(Edge::ZERO);
        }
        let (factor, normalized) = match kind {
            Kind::Vector => self.normalize_vector(succ)?,
            Kind::Matrix => self.normalize_matrix(succ)?,
        };
        let node = self.unique_insert(level, kind, normalized);
        Ok(Edge {
            weight: factor,
            node,
        })
    }

    /// Vector rule: scale to unit 2-norm, then rotate so the first nonzero
    /// successor weight is real and strictly positive. The sum-of-squares
    /// rule alone would leave one free phase per node, which would break
    /// unique-table canonicity.
    fn normalize_vector(&mut self, succ: Vec<Edge>) -> Result<(ComplexId, Vec<Edge>)> {
        let sum: f64 = succ
            .iter()
            .map(|e| self.table.value(e.weight).norm_sqr())
            .sum();
        let norm = sum.sqrt();
        let pivot_idx = succ
            .iter()
            .position(|e| !e.weight.is_zero())
            .expect("all-zero successors are handled before normalization");
        let pivot = self.table.value(succ[pivot_idx].weight);
        let pivot_abs = pivot.norm();
        let factor = self.table.lookup(Complex64::new(
            norm * pivot.re / pivot_abs,
            norm * pivot.im / pivot_abs,
        ))?;
        let denom = pivot_abs * norm;
        let mut out = Vec::with_capacity(succ.len());
        for (i, e) in succ.into_iter().enumerate() {
            if e.weight.is_zero() {
                out.push(Edge::ZERO);
            } else if i == pivot_idx {
                let w = self
                    .table
                    .lookup(Complex64::new(pivot_abs / norm, 0.0))?;
                out.push(Edge { weight: w, node: e.node });
            } else {
                let v = self.table.value(e.weight);
                let w = self.table.lookup(v * pivot.conj() / denom)?;
                out.push(Edge { weight: w, node: e.node });
            }
        }
        Ok((factor, out))
    }

    /// Matrix rule: divide by the successor weight of largest magnitude
    /// (ties to the lowest index), making that weight exactly one. This
    /// keeps identity sub-diagrams literally weight-one, so the identity
    /// cache and the identity short-circuits in multiplication stay
    /// effective.
    fn normalize_matrix(&mut self, succ: Vec<Edge>) -> Result<(ComplexId, Vec<Edge>)> {
        let mut max_idx = 0;
        let mut max_mag = -1.0;
        for (i, e) in succ.iter().enumerate() {
            if e.weight.is_zero() {
                continue;
            }
            let m = self.table.value(e.weight).norm_sqr();
            if m > max_mag {
                max_mag = m;
                max_idx = i;
            }
        }
        let pivot_id = succ[max_idx].weight;
        let pivot = self.table.value(pivot_id);
        let inv_sqr = pivot.norm_sqr();
        let mut out = Vec::with_capacity(succ.len());
        for (i, e) in succ.into_iter().enumerate() {
            if e.weight.is_zero() {
                out.push(Edge::ZERO);
            } else if i == max_idx {
                out.push(Edge {
                    weight: ComplexId::ONE,
                    node: e.node,
                });
            } else {
                let v = self.table.value(e.weight);
                let w = self.table.lookup(v * pivot.conj() / inv_sqr)?;
                out.push(Edge { weight: w, node: e.node });
            }
        }
        Ok((pivot_id, out))
    }

    fn unique_insert(&mut self, level: u16, kind: Kind, succ: Vec<Edge>) -> NodeId {
        let hash = hash_node(level, kind, &succ);
        if let Some(bucket) = self.unique.get(&hash) {
            for &id in bucket {
                let node = &self.nodes[id.0 as usize];
                if node.in_use
                    && node.level == level
                    && node.kind == kind
                    && *node.successors == *succ
                {
                    return id;
                }
            }
        }
        let node = Node {
            level,
            kind,
            ref_count: 0,
            in_use: true,
            successors: succ.into_boxed_slice(),
        };
        let id = match self.free.pop() {
            Some(slot) => {
                self.nodes[slot as usize] = node;
                NodeId(slot)
            }
            None => {
                self.nodes.push(node);
                NodeId((self.nodes.len() - 1) as u32)
            }
        };
        self.live += 1;
        self.unique.entry(hash).or_default().push(id);
        id
    }

    /// Pins the diagram rooted at `edge` against garbage collection.
    pub fn ref_edge(&mut self, edge: Edge) {
        if edge.node.is_terminal() {
            return;
        }
        let node = &mut self.nodes[edge.node.0 as usize];
        debug_assert!(node.in_use);
        node.ref_count += 1;
        if node.ref_count == 1 {
            let succ: Vec<Edge> = node.successors.to_vec();
            for e in succ {
                self.ref_edge(e);
            }
        }
    }

    /// Releases one reference. Nodes whose count drops to zero become
    /// eligible for the next collection; they stay valid until then.
    pub fn unref_edge(&mut self, edge: Edge) {
        if edge.node.is_terminal() {
            return;
        }
        let node = &mut self.nodes[edge.node.0 as usize];
        debug_assert!(node.in_use);
        assert!(
            node.ref_count > 0,
            "reference count underflow on node {:?}",
            edge.node
        );
        node.ref_count -= 1;
        if node.ref_count == 0 {
            let succ: Vec<Edge> = node.successors.to_vec();
            for e in succ {
                self.unref_edge(e);
            }
        }
    }

    /// Frees every unreferenced node and rebuilds the unique table.
    ///
    /// Operation caches and the identity cache are dropped first, since
    /// their entries may reference nodes about to be freed. Returns the
    /// number of freed nodes.
    pub fn collect_garbage(&mut self) -> usize {
        self.compute.clear();
        let pinned: Vec<Edge> = std::mem::take(&mut self.identity_cache);
        for e in pinned {
            self.unref_edge(e);
        }
        let mut freed = 0;
        for slot in 1..self.nodes.len() {
            let node = &mut self.nodes[slot];
            if node.in_use && node.ref_count == 0 {
                node.in_use = false;
                node.successors = Box::new([]);
                self.free.push(slot as u32);
                self.live -= 1;
                freed += 1;
            }
        }
        self.unique.clear();
        for slot in 1..self.nodes.len() {
            let node = &self.nodes[slot];
            if node.in_use {
                let hash = hash_node(node.level, node.kind, &node.successors);
                self.unique
                    .entry(hash)
                    .or_default()
                    .push(NodeId(slot as u32));
            }
        }
        freed
    }

    /// Runs a collection if the arena has outgrown the configured threshold.
    pub fn maybe_collect(&mut self) -> usize {
        if self.live > self.gc_threshold {
            self.collect_garbage()
        } else {
            0
        }
    }

    /// Matrix diagram of the identity on levels `0..=upto_level`. Cached, so
    /// repeated calls return the identical edge.
    pub fn identity_dd(&mut self, upto_level: u16) -> Result<Edge> {
        let n = self.register.num_qudits();
        if upto_level as usize >= n {
            return Err(Error::LevelOutOfRange {
                level: upto_level,
                size: n,
            });
        }
        while self.identity_cache.len() <= upto_level as usize {
            let level = self.identity_cache.len() as u16;
            let below = if level == 0 {
                Edge::UNIT
            } else {
                self.identity_cache[level as usize - 1]
            };
            let d = self.register.dim_at_level(level);
            let mut succ = vec![Edge::ZERO; d * d];
            for j in 0..d {
                succ[j * d + j] = below;
            }
            let e = self.make_node(level, Kind::Matrix, succ)?;
            debug_assert!(e.weight.is_one());
            self.ref_edge(e);
            self.identity_cache.push(e);
        }
        Ok(self.identity_cache[upto_level as usize])
    }

    /// Identity sub-diagram spanning everything strictly below `level`.
    pub(crate) fn identity_below(&mut self, level: u16) -> Result<Edge> {
        if level == 0 {
            Ok(Edge::UNIT)
        } else {
            self.identity_dd(level - 1)
        }
    }

    /// Node of the cached identity at `level`, if one has been built.
    pub(crate) fn identity_node_at(&self, level: u16) -> Option<NodeId> {
        self.identity_cache
            .get(level as usize)
            .map(|e| e.node)
    }

    /// Vector diagram of a basis state.
    pub fn basis_state(&mut self, index: &BasisIndex) -> Result<Edge> {
        index.validate(&self.register)?;
        let mut edge = Edge::UNIT;
        for level in 0..=self.register.top_level() {
            let wire = self.register.wire_of(level);
            let d = self.register.dim(wire);
            let mut succ = vec![Edge::ZERO; d];
            succ[index.digit(wire)] = edge;
            edge = self.make_node(level, Kind::Vector, succ)?;
        }
        Ok(edge)
    }

    /// Vector diagram of the all-zero state, the conventional initial state
    /// of a simulation.
    pub fn all_zero_state(&mut self) -> Result<Edge> {
        self.basis_state(&BasisIndex::zero(&self.register))
    }

    /// Builds a vector diagram from a dense amplitude slice spanning levels
    /// `bottom_level..=top_level` (most significant wire first). Intended
    /// for small instances; the slice length must match the span dimension.
    pub fn vector_from_dense_span(
        &mut self,
        top_level: u16,
        bottom_level: u16,
        amplitudes: &[Complex64],
    ) -> Result<Edge> {
        let expected: usize = (bottom_level..=top_level)
            .map(|l| self.register.dim_at_level(l))
            .product();
        if amplitudes.len() != expected || top_level < bottom_level {
            return Err(Error::OperandMismatch);
        }
        self.dense_rec(top_level, bottom_level, amplitudes)
    }

    /// Builds a full-register vector diagram from a dense amplitude vector.
    pub fn vector_from_dense(&mut self, amplitudes: &[Complex64]) -> Result<Edge> {
        self.vector_from_dense_span(self.register.top_level(), 0, amplitudes)
    }

    fn dense_rec(
        &mut self,
        level: u16,
        bottom: u16,
        amplitudes: &[Complex64],
    ) -> Result<Edge> {
        if amplitudes.iter().all(|a| a.re == 0.0 && a.im == 0.0) {
            return Ok(Edge::ZERO);
        }
        if level < bottom {
            debug_assert_eq!(amplitudes.len(), 1);
            let w = self.table.lookup(amplitudes[0])?;
            return Ok(Edge::terminal(w));
        }
        let d = self.register.dim_at_level(level);
        let part = amplitudes.len() / d;
        let mut succ = Vec::with_capacity(d);
        for k in 0..d {
            let slice = &amplitudes[k * part..(k + 1) * part];
            if level == bottom {
                debug_assert_eq!(slice.len(), 1);
                let w = self.table.lookup(slice[0])?;
                succ.push(Edge::terminal(w));
            } else {
                succ.push(self.dense_rec(level - 1, bottom, slice)?);
            }
        }
        self.make_node(level, Kind::Vector, succ)
    }

    /// Number of distinct reachable nodes, terminal included.
    pub fn node_count(&self, root: Edge) -> usize {
        let mut seen = HashSet::new();
        self.walk(root.node, &mut seen);
        seen.len() + 1
    }

    /// Number of distinct complex values reachable as edge weights in the
    /// diagram, root weight included; zero counts if any zero stub exists.
    pub fn distinct_complex(&self, root: Edge) -> usize {
        let mut nodes = HashSet::new();
        let mut weights = HashSet::new();
        weights.insert(root.weight);
        self.walk_weights(root.node, &mut nodes, &mut weights);
        weights.len()
    }

    pub fn stats(&self, root: Edge) -> DdStats {
        let mut nodes = HashSet::new();
        let mut weights = HashSet::new();
        weights.insert(root.weight);
        self.walk_weights(root.node, &mut nodes, &mut weights);
        let max_arity = nodes
            .iter()
            .map(|&id| self.node(id).successors.len())
            .max()
            .unwrap_or(0);
        DdStats {
            node_count: nodes.len() + 1,
            distinct_complex: weights.len(),
            max_arity,
        }
    }

    fn walk(&self, node: NodeId, seen: &mut HashSet<NodeId>) {
        if node.is_terminal() || !seen.insert(node) {
            return;
        }
        for e in self.node(node).successors.iter() {
            self.walk(e.node, seen);
        }
    }

    fn walk_weights(
        &self,
        node: NodeId,
        seen: &mut HashSet<NodeId>,
        weights: &mut HashSet<ComplexId>,
    ) {
        if node.is_terminal() || !seen.insert(node) {
            return;
        }
        for e in self.node(node).successors.iter() {
            weights.insert(e.weight);
            self.walk_weights(e.node, seen, weights);
        }
    }

    /// Walks the diagram and checks the structural invariants: vector nodes
    /// have unit out-norm, no node is all-zero, levels strictly descend,
    /// zero weights appear only on terminal edges, and arities match the
    /// register.
    pub fn check_consistency(&self, root: Edge) -> std::result::Result<(), String> {
        let mut seen = HashSet::new();
        self.check_rec(root, u16::MAX, &mut seen)
    }

    fn check_rec(
        &self,
        edge: Edge,
        parent_level: u16,
        seen: &mut HashSet<NodeId>,
    ) -> std::result::Result<(), String> {
        if edge.weight.is_zero() && !edge.is_terminal() {
            return Err(format!("zero weight on edge to node {:?}", edge.node));
        }
        if edge.is_terminal() {
            return Ok(());
        }
        let node = self.node(edge.node);
        if node.level >= parent_level {
            return Err(format!(
                "level {} does not descend below parent level {}",
                node.level, parent_level
            ));
        }
        if !seen.insert(edge.node) {
            return Ok(());
        }
        let d = self.register.dim_at_level(node.level);
        let expected = match node.kind {
            Kind::Vector => d,
            Kind::Matrix => d * d,
        };
        if node.successors.len() != expected {
            return Err(format!(
                "node {:?} at level {} has arity {}, expected {}",
                edge.node,
                node.level,
                node.successors.len(),
                expected
            ));
        }
        if node.successors.iter().all(|e| e.weight.is_zero()) {
            return Err(format!("node {:?} has all-zero successors", edge.node));
        }
        if node.kind == Kind::Vector {
            let sum: f64 = node
                .successors
                .iter()
                .map(|e| self.table.value(e.weight).norm_sqr())
                .sum();
            if (sum - 1.0).abs() > 1e-10 {
                return Err(format!(
                    "vector node {:?} has out-norm {} instead of 1",
                    edge.node, sum
                ));
            }
        }
        for e in node.successors.iter() {
            self.check_rec(*e, node.level, seen)?;
        }
        Ok(())
    }

    /// Scans all live nodes for unique-table violations (two live nodes
    /// with identical level, kind, and successors).
    pub fn check_unique_table(&self) -> std::result::Result<(), String> {
        let mut seen: FxHashMap<u64, Vec<NodeId>> = FxHashMap::default();
        for slot in 1..self.nodes.len() {
            let node = &self.nodes[slot];
            if !node.in_use {
                continue;
            }
            let hash = hash_node(node.level, node.kind, &node.successors);
            let bucket = seen.entry(hash).or_default();
            for &other in bucket.iter() {
                let o = self.node(other);
                if o.level == node.level
                    && o.kind == node.kind
                    && *o.successors == *node.successors
                {
                    return Err(format!(
                        "duplicate nodes {:?} and {:?} at level {}",
                        other, slot, node.level
                    ));
                }
            }
            bucket.push(NodeId(slot as u32));
        }
        Ok(())
    }

    /// Level of the bottom-most non-terminal node along nonzero paths.
    pub(crate) fn bottom_level(&self, mut node: NodeId) -> u16 {
        loop {
            let n = self.node(node);
            let next = n
                .successors
                .iter()
                .find(|e| !e.weight.is_zero())
                .expect("live nodes have a nonzero successor");
            if next.node.is_terminal() {
                return n.level;
            }
            node = next.node;
        }
    }
}

fn hash_node(level: u16, kind: Kind, succ: &[Edge]) -> u64 {
    let mut hasher = rustc_hash::FxHasher::default();
    level.hash(&mut hasher);
    (kind == Kind::Matrix).hash(&mut hasher);
    for e in succ {
        e.weight.hash(&mut hasher);
        e.node.hash(&mut hasher);
    }
    hasher.finish()
}

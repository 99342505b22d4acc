//! Tolerance-deduplicated storage for complex edge weights.
//!
//! Every amplitude, matrix entry, and edge weight in a decision diagram is
//! interned here. Values whose components differ by at most the table
//! tolerance resolve to the same entry, so structural equality of diagrams
//! reduces to comparing entry ids and "number of distinct complex values"
//! is a well-defined statistic.

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// Default componentwise deduplication tolerance.
///
/// Tight enough to keep physically distinct amplitudes apart over circuits
/// of thousands of gates, loose enough to absorb floating-point drift from
/// repeated normalization.
pub const DEFAULT_TOLERANCE: f64 = 1e-13;

/// Handle to an interned complex value. Two handles are equal exactly when
/// they denote the same table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexId(pub(crate) u32);

impl ComplexId {
    /// The pre-seeded exact zero.
    pub const ZERO: ComplexId = ComplexId(0);
    /// The pre-seeded exact one.
    pub const ONE: ComplexId = ComplexId(1);

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }
}

/// Interning table for complex values.
///
/// Entries are pairwise separated by more than the tolerance in at least one
/// component. Lookups bucket values on a grid wider than the tolerance, so a
/// query only ever needs to inspect the 3x3 neighborhood of its own cell.
#[derive(Debug)]
pub struct ComplexTable {
    entries: Vec<Complex64>,
    buckets: FxHashMap<(i64, i64), Vec<u32>>,
    tolerance: f64,
    cell: f64,
}

impl ComplexTable {
    pub fn new(tolerance: f64) -> Self {
        assert!(
            tolerance.is_finite() && tolerance > 0.0,
            "tolerance must be a positive finite number"
        );
        let mut table = ComplexTable {
            entries: Vec::new(),
            buckets: FxHashMap::default(),
            tolerance,
            cell: 2.0 * tolerance,
        };
        // Seed 0 and 1 so they always resolve to themselves exactly and the
        // ids are stable constants.
        let zero = table.insert(Complex64::new(0.0, 0.0));
        let one = table.insert(Complex64::new(1.0, 0.0));
        debug_assert_eq!(zero, ComplexId::ZERO);
        debug_assert_eq!(one, ComplexId::ONE);
        table
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Number of entries currently interned (the "full table" statistic,
    /// including values only used by intermediate results).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The stored value of an entry.
    pub fn value(&self, id: ComplexId) -> Complex64 {
        self.entries[id.0 as usize]
    }

    /// Interns `v`: returns the existing entry within tolerance of `v` if one
    /// exists, otherwise inserts `v` as a new entry. Idempotent.
    pub fn lookup(&mut self, v: Complex64) -> Result<ComplexId> {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite { re: v.re, im: v.im });
        }
        let (cx, cy) = self.cell_of(v);
        let mut found: Option<u32> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.buckets.get(&(cx + dx, cy + dy)) {
                    for &id in ids {
                        let e = self.entries[id as usize];
                        if (e.re - v.re).abs() <= self.tolerance
                            && (e.im - v.im).abs() <= self.tolerance
                        {
                            // Prefer the oldest matching entry so the result
                            // does not depend on bucket iteration order.
                            found = Some(found.map_or(id, |f| f.min(id)));
                        }
                    }
                }
            }
        }
        if let Some(id) = found {
            return Ok(ComplexId(id));
        }
        Ok(self.insert(v))
    }

    /// Product of two interned values, interned.
    pub fn mul(&mut self, a: ComplexId, b: ComplexId) -> Result<ComplexId> {
        if a.is_zero() || b.is_zero() {
            return Ok(ComplexId::ZERO);
        }
        if a.is_one() {
            return Ok(b);
        }
        if b.is_one() {
            return Ok(a);
        }
        self.lookup(self.value(a) * self.value(b))
    }

    /// Sum of two interned values, interned.
    pub fn add(&mut self, a: ComplexId, b: ComplexId) -> Result<ComplexId> {
        if a.is_zero() {
            return Ok(b);
        }
        if b.is_zero() {
            return Ok(a);
        }
        self.lookup(self.value(a) + self.value(b))
    }

    fn insert(&mut self, v: Complex64) -> ComplexId {
        let id = self.entries.len() as u32;
        self.entries.push(v);
        let cell = self.cell_of(v);
        self.buckets.entry(cell).or_default().push(id);
        ComplexId(id)
    }

    fn cell_of(&self, v: Complex64) -> (i64, i64) {
        ((v.re / self.cell).floor() as i64, (v.im / self.cell).floor() as i64)
    }
}

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One nonzero matrix entry: `q^phase` at `(row, col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub phase: u32,
}

/// An exact linear map between enumerated bases in which every column holds
/// at most one entry, a power of the primitive `phase_order`-th root of unity.
///
/// Witnesses built without copairing also have at most one entry per row;
/// copairing can send two basis vectors to the same one (the codiagonal).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConcreteMorphism {
    source_dim: usize,
    target_dim: usize,
    phase_order: u32,
    cols: Vec<Option<(usize, u32)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("dimension mismatch: {what} ({left} vs {right})")]
    DimMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },
    #[error("phase orders differ ({0} vs {1})")]
    PhaseOrderMismatch(u32, u32),
    #[error("phase order must be at least 1")]
    ZeroPhaseOrder,
    #[error("entry ({row}, {col}) is outside a {target_dim}x{source_dim} matrix")]
    OutOfRange {
        row: usize,
        col: usize,
        source_dim: usize,
        target_dim: usize,
    },
    #[error("column {0} has more than one entry")]
    DuplicateColumn(usize),
}

impl ConcreteMorphism {
    pub fn identity(dim: usize, phase_order: u32) -> ConcreteMorphism {
        ConcreteMorphism {
            source_dim: dim,
            target_dim: dim,
            phase_order,
            cols: (0..dim).map(|i| Some((i, 0))).collect(),
        }
    }

    pub fn from_entries(
        source_dim: usize,
        target_dim: usize,
        phase_order: u32,
        entries: impl IntoIterator<Item = Entry>,
    ) -> Result<ConcreteMorphism, MorphismError> {
        if phase_order == 0 {
            return Err(MorphismError::ZeroPhaseOrder);
        }
        let mut cols = vec![None; source_dim];
        for e in entries {
            if e.col >= source_dim || e.row >= target_dim {
                return Err(MorphismError::OutOfRange {
                    row: e.row,
                    col: e.col,
                    source_dim,
                    target_dim,
                });
            }
            if cols[e.col].is_some() {
                return Err(MorphismError::DuplicateColumn(e.col));
            }
            cols[e.col] = Some((e.row, e.phase % phase_order));
        }
        Ok(ConcreteMorphism {
            source_dim,
            target_dim,
            phase_order,
            cols,
        })
    }

    /// Builds a morphism from `(col, row, phase)` triples with signed phases.
    pub(crate) fn from_map(
        source_dim: usize,
        target_dim: usize,
        phase_order: u32,
        map: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> ConcreteMorphism {
        let mut cols = vec![None; source_dim];
        for (col, row, phase) in map {
            debug_assert!(row < target_dim && cols[col].is_none());
            cols[col] = Some((row, reduce_phase(phase, phase_order)));
        }
        ConcreteMorphism {
            source_dim,
            target_dim,
            phase_order,
            cols,
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn phase_order(&self) -> u32 {
        self.phase_order
    }

    /// Image of basis vector `col`, if nonzero: `(row, phase)`.
    pub fn column(&self, col: usize) -> Option<(usize, u32)> {
        self.cols[col]
    }

    /// Entries sorted by column.
    pub fn entries(&self) -> impl Iterator<Item = Entry> + '_ {
        self.cols
            .iter()
            .enumerate()
            .filter_map(|(col, e)| e.map(|(row, phase)| Entry { row, col, phase }))
    }

    /// Underlying map on basis indices, phases dropped.
    pub fn basis_map(&self) -> Vec<Option<usize>> {
        self.cols.iter().map(|e| e.map(|(r, _)| r)).collect()
    }

    /// Every basis vector maps to a distinct basis vector.
    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_dim];
        for e in &self.cols {
            match e {
                Some((r, _)) if !seen[*r] => seen[*r] = true,
                _ => return false,
            }
        }
        true
    }

    pub fn is_bijective(&self) -> bool {
        self.source_dim == self.target_dim && self.is_injective()
    }

    pub fn is_identity(&self) -> bool {
        self.source_dim == self.target_dim && self.cols.iter().enumerate().all(|(i, e)| *e == Some((i, 0)))
    }

    /// `self` after `first`, i.e. the matrix product `self * first`.
    pub fn after(&self, first: &ConcreteMorphism) -> Result<ConcreteMorphism, MorphismError> {
        self.check_phase(first)?;
        if first.target_dim != self.source_dim {
            return Err(MorphismError::DimMismatch {
                what: "composition",
                left: first.target_dim,
                right: self.source_dim,
            });
        }
        let n = self.phase_order;
        let cols = first
            .cols
            .iter()
            .map(|e| {
                let (mid, p1) = (*e)?;
                let (row, p2) = self.cols[mid]?;
                Some((row, (p1 + p2) % n))
            })
            .collect();
        Ok(ConcreteMorphism {
            source_dim: first.source_dim,
            target_dim: self.target_dim,
            phase_order: n,
            cols,
        })
    }

    /// Block diagonal sum; `left_first == false` lays out the second block first.
    pub(crate) fn direct_sum_ordered(
        &self,
        other: &ConcreteMorphism,
        left_first: bool,
    ) -> Result<ConcreteMorphism, MorphismError> {
        self.check_phase(other)?;
        let (first, second) = if left_first { (self, other) } else { (other, self) };
        let shift = first.target_dim;
        let cols = first
            .cols
            .iter()
            .copied()
            .chain(second.cols.iter().map(|e| e.map(|(r, p)| (r + shift, p))))
            .collect();
        Ok(ConcreteMorphism {
            source_dim: self.source_dim + other.source_dim,
            target_dim: self.target_dim + other.target_dim,
            phase_order: self.phase_order,
            cols,
        })
    }

    pub fn direct_sum(&self, other: &ConcreteMorphism) -> Result<ConcreteMorphism, MorphismError> {
        self.direct_sum_ordered(other, true)
    }

    /// Kronecker product, left factor major; phases add.
    pub fn tensor(&self, other: &ConcreteMorphism) -> Result<ConcreteMorphism, MorphismError> {
        self.check_phase(other)?;
        let n = self.phase_order;
        let mut cols = Vec::with_capacity(self.source_dim * other.source_dim);
        for a in &self.cols {
            for b in &other.cols {
                cols.push(match (a, b) {
                    (Some((r1, p1)), Some((r2, p2))) => Some((r1 * other.target_dim + r2, (p1 + p2) % n)),
                    _ => None,
                });
            }
        }
        Ok(ConcreteMorphism {
            source_dim: self.source_dim * other.source_dim,
            target_dim: self.target_dim * other.target_dim,
            phase_order: n,
            cols,
        })
    }

    /// Exact inverse of a bijective monomial matrix.
    pub fn inverse(&self) -> Option<ConcreteMorphism> {
        if !self.is_bijective() {
            return None;
        }
        let n = self.phase_order;
        let mut cols = vec![None; self.source_dim];
        for (col, e) in self.cols.iter().enumerate() {
            let (row, p) = e.expect("bijective");
            cols[row] = Some((col, (n - p) % n));
        }
        Some(ConcreteMorphism {
            source_dim: self.target_dim,
            target_dim: self.source_dim,
            phase_order: n,
            cols,
        })
    }

    /// Block concatenation `[f | g]`: the first `f.source_dim` columns act as
    /// `f`, the rest as `g`. This is the unique map out of the coproduct that
    /// restricts to `f` and `g` along the two injections.
    pub fn copair(f: &ConcreteMorphism, g: &ConcreteMorphism) -> Result<ConcreteMorphism, MorphismError> {
        f.copair_ordered(g, true)
    }

    pub(crate) fn copair_ordered(
        &self,
        g: &ConcreteMorphism,
        left_first: bool,
    ) -> Result<ConcreteMorphism, MorphismError> {
        self.check_phase(g)?;
        if self.target_dim != g.target_dim {
            return Err(MorphismError::DimMismatch {
                what: "copair targets",
                left: self.target_dim,
                right: g.target_dim,
            });
        }
        let (first, second) = if left_first { (self, g) } else { (g, self) };
        Ok(ConcreteMorphism {
            source_dim: self.source_dim + g.source_dim,
            target_dim: self.target_dim,
            phase_order: self.phase_order,
            cols: first.cols.iter().chain(&second.cols).copied().collect(),
        })
    }

    fn check_phase(&self, other: &ConcreteMorphism) -> Result<(), MorphismError> {
        if self.phase_order != other.phase_order {
            return Err(MorphismError::PhaseOrderMismatch(self.phase_order, other.phase_order));
        }
        Ok(())
    }

    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            entries: self.entries().map(|e| [e.row, e.col, e.phase as usize]).collect(),
            phase_order: self.phase_order,
            source_dim: self.source_dim,
            target_dim: self.target_dim,
        }
    }

    pub fn from_json(json: &MorphismJson) -> Result<ConcreteMorphism, MorphismError> {
        let entries = json.entries.iter().map(|&[row, col, phase]| Entry {
            row,
            col,
            phase: (phase % json.phase_order.max(1) as usize) as u32,
        });
        ConcreteMorphism::from_entries(json.source_dim, json.target_dim, json.phase_order, entries)
    }
}

/// Wire form: `{"entries": [[row, col, phase], ...], "phase_order": n,
/// "source_dim": k, "target_dim": m}`, entries sorted by column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub entries: Vec<[usize; 3]>,
    pub phase_order: u32,
    pub source_dim: usize,
    pub target_dim: usize,
}

/// `phase mod n` in `0..n`.
pub(crate) fn reduce_phase(phase: i64, n: u32) -> u32 {
    phase.rem_euclid(i64::from(n)) as u32
}

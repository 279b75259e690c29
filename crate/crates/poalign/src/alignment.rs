//! The alignment object: a set of columns over named row posets plus a
//! strict partial order on the columns.
//!
//! Columns are stored as sets (partial maps row -> element), so the
//! complete-subgraph reading of a column holds by construction. The
//! column order is stored reduced with derived reachability, mirroring
//! the row posets. Alignments are immutable once built; constructors
//! enforce the structural invariants (coverage, non-empty columns,
//! well-formed order), while the axiom checks live in [`crate::validate`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::order::{CycleCertificate, StrictOrder};
use crate::poset::Poset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlignmentError {
    #[error("no column order exists: forced relations contain a cycle: columns {certificate}")]
    NoOrderExists { certificate: CycleCertificate },
    #[error("column {column} has two entries for row {row}")]
    ColumnRowClash { column: usize, row: usize },
    #[error("column {column} is empty")]
    EmptyColumn { column: usize },
    #[error("column {column} references row {row} which does not exist")]
    RowIndexOutOfRange { column: usize, row: usize },
    #[error("column {column} references element {elem} of row {row_id} (n={n})")]
    ElementOutOfRange { column: usize, row_id: String, elem: usize, n: usize },
    #[error("element {elem} of row {row_id} appears in no column")]
    ElementUnplaced { row_id: String, elem: usize },
    #[error("element {elem} of row {row_id} appears in more than one column")]
    ElementDuplicated { row_id: String, elem: usize },
    #[error("column order is over {order_len} columns but the alignment has {columns}")]
    OrderSizeMismatch { order_len: usize, columns: usize },
    #[error("duplicate row id {row_id}")]
    DuplicateRowId { row_id: String },
    #[error("row subset is empty")]
    EmptyRowSet,
    #[error("unknown row {row_id}")]
    UnknownRow { row_id: String },
    #[error("invalid row partition: {reason}")]
    InvalidPartition { reason: String },
    #[error("inconsistent correspondence: {reason}")]
    InconsistentCorrespondence { reason: String },
    #[error("no block order exists: forced block relations contain a cycle: blocks {certificate}")]
    BlockOrderUnsatisfiable { certificate: CycleCertificate },
    #[error("row {row_id} is not totally ordered")]
    RowNotTotal { row_id: String },
    #[error("row {row_id} has no symbol labels, cannot render")]
    MissingLabels { row_id: String },
    #[error("gapped rows malformed: {reason}")]
    BadGappedRows { reason: String },
}

/// Marks a column as aligned or as an unaligned prefix/suffix column of
/// a partially local alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum ColumnFlag {
    #[default]
    Aligned,
    UnalignedPrefix,
    UnalignedSuffix,
}

impl fmt::Display for ColumnFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnFlag::Aligned => write!(f, "aligned"),
            ColumnFlag::UnalignedPrefix => write!(f, "unaligned_prefix"),
            ColumnFlag::UnalignedSuffix => write!(f, "unaligned_suffix"),
        }
    }
}

/// One alignment column: at most one element per row, at least one
/// entry overall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    entries: BTreeMap<usize, usize>,
    flag: ColumnFlag,
}

impl Column {
    pub fn new(
        entries: impl IntoIterator<Item = (usize, usize)>,
        flag: ColumnFlag,
    ) -> Result<Self, AlignmentError> {
        let mut map = BTreeMap::new();
        for (row, elem) in entries {
            if map.insert(row, elem).is_some() {
                return Err(AlignmentError::ColumnRowClash { column: usize::MAX, row });
            }
        }
        Ok(Column { entries: map, flag })
    }

    pub fn aligned(entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, AlignmentError> {
        Column::new(entries, ColumnFlag::Aligned)
    }

    pub fn get(&self, row: usize) -> Option<usize> {
        self.entries.get(&row).copied()
    }

    /// Entries as sorted `(row, element)` pairs.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().map(|(&r, &e)| (r, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn flag(&self) -> ColumnFlag {
        self.flag
    }

    pub fn set_flag(&mut self, flag: ColumnFlag) {
        self.flag = flag;
    }

    fn sort_key(&self) -> (Vec<(usize, usize)>, ColumnFlag) {
        (self.entries().collect(), self.flag)
    }
}

/// An alignment of the posets `rows`: every element of every row sits in
/// exactly one column, and `column_order` is a strict partial order on
/// the column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    rows: Vec<Poset>,
    columns: Vec<Column>,
    column_order: StrictOrder,
}

/// The canonical witness order: the transitive closure of the relation
/// that puts `P` before `Q` whenever some row has an element of `P`
/// strictly below an element of `Q`. Fails with a cycle certificate when
/// the forced relations admit no partial order (which also covers every
/// way the closure could contradict a row order).
pub fn induce_column_order(
    rows: &[Poset],
    columns: &[Column],
) -> Result<StrictOrder, AlignmentError> {
    let mut pairs = Vec::new();
    for (p, cp) in columns.iter().enumerate() {
        for (q, cq) in columns.iter().enumerate() {
            if p == q {
                continue;
            }
            let forced = cp.entries().any(|(row, i)| match cq.get(row) {
                Some(j) => rows[row].lt(i, j),
                None => false,
            });
            if forced {
                pairs.push((p, q));
            }
        }
    }
    StrictOrder::from_pairs(columns.len(), pairs)
        .map_err(|certificate| AlignmentError::NoOrderExists { certificate })
}

impl Alignment {
    /// Builds an alignment with an explicit column order, checking the
    /// structural invariants only. Axiom conformance of the supplied
    /// order is the validators' business.
    pub fn new(
        rows: Vec<Poset>,
        columns: Vec<Column>,
        column_order: StrictOrder,
    ) -> Result<Self, AlignmentError> {
        if column_order.len() != columns.len() {
            return Err(AlignmentError::OrderSizeMismatch {
                order_len: column_order.len(),
                columns: columns.len(),
            });
        }
        for (ri, row) in rows.iter().enumerate() {
            if rows[..ri].iter().any(|r| r.row_id() == row.row_id()) {
                return Err(AlignmentError::DuplicateRowId { row_id: row.row_id().to_string() });
            }
        }
        let mut seen: Vec<Vec<usize>> = rows.iter().map(|r| vec![0; r.len()]).collect();
        for (ci, col) in columns.iter().enumerate() {
            if col.is_empty() {
                return Err(AlignmentError::EmptyColumn { column: ci });
            }
            for (row, elem) in col.entries() {
                if row >= rows.len() {
                    return Err(AlignmentError::RowIndexOutOfRange { column: ci, row });
                }
                if elem >= rows[row].len() {
                    return Err(AlignmentError::ElementOutOfRange {
                        column: ci,
                        row_id: rows[row].row_id().to_string(),
                        elem,
                        n: rows[row].len(),
                    });
                }
                seen[row][elem] += 1;
            }
        }
        for (ri, counts) in seen.iter().enumerate() {
            for (elem, &c) in counts.iter().enumerate() {
                if c == 0 {
                    return Err(AlignmentError::ElementUnplaced {
                        row_id: rows[ri].row_id().to_string(),
                        elem,
                    });
                }
                if c > 1 {
                    return Err(AlignmentError::ElementDuplicated {
                        row_id: rows[ri].row_id().to_string(),
                        elem,
                    });
                }
            }
        }
        Ok(Alignment { rows, columns, column_order })
    }

    /// Builds an alignment carrying the canonical induced order.
    pub fn with_induced_order(rows: Vec<Poset>, columns: Vec<Column>) -> Result<Self, AlignmentError> {
        let order = induce_column_order(&rows, &columns)?;
        Alignment::new(rows, columns, order)
    }

    /// The trivial alignment of a single poset: one singleton column per
    /// element, ordered exactly as the poset.
    pub fn single_row(row: Poset) -> Alignment {
        let n = row.len();
        let columns: Vec<Column> = (0..n)
            .map(|e| Column::aligned([(0usize, e)]).unwrap())
            .collect();
        let order = row.order().clone();
        Alignment { rows: vec![row], columns, column_order: order }
    }

    pub fn rows(&self) -> &[Poset] {
        &self.rows
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column_order(&self) -> &StrictOrder {
        &self.column_order
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn row_index(&self, row_id: &str) -> Option<usize> {
        self.rows.iter().position(|r| r.row_id() == row_id)
    }

    /// For each row, the column holding each of its elements.
    pub fn element_columns(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.rows.iter().map(|r| vec![usize::MAX; r.len()]).collect();
        for (ci, col) in self.columns.iter().enumerate() {
            for (row, elem) in col.entries() {
                out[row][elem] = ci;
            }
        }
        out
    }

    /// The same alignment with columns sorted into canonical order
    /// (sorted entry lists, then flag) and the column order relabelled
    /// accordingly. Canonical forms of isomorphic alignments are equal.
    pub fn canonical(&self) -> Alignment {
        let mut perm: Vec<usize> = (0..self.columns.len()).collect();
        perm.sort_by_key(|&i| self.columns[i].sort_key());
        let mut inv = vec![0usize; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let columns: Vec<Column> = perm.iter().map(|&old| self.columns[old].clone()).collect();
        let pairs: Vec<(usize, usize)> = self
            .column_order
            .reach_pairs()
            .into_iter()
            .map(|(p, q)| (inv[p], inv[q]))
            .collect();
        let order = StrictOrder::from_pairs(columns.len(), pairs)
            .expect("relabelling preserves acyclicity");
        Alignment { rows: self.rows.clone(), columns, column_order: order }
    }

    /// Isomorphism: a bijection of columns preserving entries, flags and
    /// the column order, with identical rows.
    pub fn is_isomorphic(&self, other: &Alignment) -> bool {
        self.rows == other.rows && {
            let a = self.canonical();
            let b = other.canonical();
            a.columns == b.columns && a.column_order == b.column_order
        }
    }

    /// Builds an alignment from classic gapped rows (gap char `-`).
    /// Rows become labelled chains; columns are the vertical slices in
    /// string order (all-gap slices are dropped) and the column order is
    /// the left-to-right chain.
    pub fn from_gapped_rows(rows: &[(&str, &str)]) -> Result<Alignment, AlignmentError> {
        let width = rows.first().map(|(_, s)| s.chars().count()).unwrap_or(0);
        for (id, s) in rows {
            if s.chars().count() != width {
                return Err(AlignmentError::BadGappedRows {
                    reason: format!("row {} has length {}, expected {}", id, s.chars().count(), width),
                });
            }
        }
        let mut posets = Vec::new();
        let grids: Vec<Vec<char>> = rows.iter().map(|(_, s)| s.chars().collect()).collect();
        for ((id, _), grid) in rows.iter().zip(&grids) {
            let symbols: String = grid.iter().filter(|&&c| c != '-').collect();
            posets.push(Poset::from_sequence(*id, &symbols));
        }
        let mut columns = Vec::new();
        let mut next_elem = vec![0usize; rows.len()];
        for c in 0..width {
            let mut entries = Vec::new();
            for (r, grid) in grids.iter().enumerate() {
                if grid[c] != '-' {
                    entries.push((r, next_elem[r]));
                    next_elem[r] += 1;
                }
            }
            if !entries.is_empty() {
                columns.push(Column::aligned(entries)?);
            }
        }
        let order = StrictOrder::chain(columns.len());
        Alignment::new(posets, columns, order)
    }

    /// Renders an all-chain alignment as classic gapped rows in the
    /// deterministic linear extension of the column order. Requires
    /// symbol labels on every non-empty row.
    pub fn render_gapped(&self) -> Result<Vec<(String, String)>, AlignmentError> {
        for row in &self.rows {
            if !row.is_chain() {
                return Err(AlignmentError::RowNotTotal { row_id: row.row_id().to_string() });
            }
            if row.len() > 0 && row.labels().is_none() {
                return Err(AlignmentError::MissingLabels { row_id: row.row_id().to_string() });
            }
        }
        let extension = self.column_order.topo_order();
        let mut out = Vec::new();
        for (ri, row) in self.rows.iter().enumerate() {
            let mut s = String::with_capacity(extension.len());
            for &ci in &extension {
                match self.columns[ci].get(ri) {
                    Some(e) => s.push(row.label(e).unwrap()),
                    None => s.push('-'),
                }
            }
            out.push((row.row_id().to_string(), s));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gapped_round_trip() {
        let al = Alignment::from_gapped_rows(&[("B", "000011011"), ("C", "100010000")]).unwrap();
        assert_eq!(al.n_rows(), 2);
        assert_eq!(al.n_columns(), 9);
        assert!(al.column_order().is_chain());
        let rendered = al.render_gapped().unwrap();
        assert_eq!(rendered[0], ("B".to_string(), "000011011".to_string()));
        assert_eq!(rendered[1], ("C".to_string(), "100010000".to_string()));
    }

    #[test]
    fn gapped_rows_with_gaps() {
        let al = Alignment::from_gapped_rows(&[("A", "0000111110000"), ("B", "000011011----")])
            .unwrap();
        assert_eq!(al.n_columns(), 13);
        assert_eq!(al.rows()[1].len(), 9);
        let rendered = al.render_gapped().unwrap();
        assert_eq!(rendered[1].1, "000011011----");
    }

    #[test]
    fn induced_order_on_total_rows_is_a_chain() {
        let al = Alignment::from_gapped_rows(&[("A", "0000111110000"), ("B", "000011011----")])
            .unwrap();
        let order = induce_column_order(al.rows(), al.columns()).unwrap();
        assert!(order.is_chain());
        assert_eq!(order.topo_order(), (0..13).collect::<Vec<_>>());
    }

    #[test]
    fn fig2_style_instance_has_no_order() {
        // Row a: 4 < 1 and 2 < 3; row b: 1 < 2 and 3 < 4 (1-based), with
        // columns pairing equal positions. The forced relations cycle.
        let a = Poset::new("a", 4, [(3, 0), (1, 2)], None).unwrap();
        let b = Poset::new("b", 4, [(0, 1), (2, 3)], None).unwrap();
        let columns: Vec<Column> = (0..4)
            .map(|i| Column::aligned([(0, i), (1, i)]).unwrap())
            .collect();
        let err = induce_column_order(&[a, b], &columns).unwrap_err();
        match err {
            AlignmentError::NoOrderExists { certificate } => {
                assert!(certificate.0.len() >= 2);
            }
            other => panic!("expected NoOrderExists, got {other:?}"),
        }
    }

    #[test]
    fn single_row_order_is_isomorphic_to_poset() {
        let p = Poset::new("a", 3, [(0, 2), (1, 2)], None).unwrap();
        let al = Alignment::single_row(p.clone());
        assert_eq!(al.n_columns(), 3);
        assert_eq!(al.column_order(), p.order());
    }

    #[test]
    fn coverage_is_enforced() {
        let p = Poset::chain("a", 2, None).unwrap();
        let cols = vec![Column::aligned([(0, 0)]).unwrap()];
        let err = Alignment::with_induced_order(vec![p], cols).unwrap_err();
        assert!(matches!(err, AlignmentError::ElementUnplaced { .. }));
    }

    #[test]
    fn empty_alignment_is_legal() {
        let rows = vec![Poset::chain("a", 0, None).unwrap(), Poset::chain("b", 0, None).unwrap()];
        let al = Alignment::new(rows, vec![], StrictOrder::empty(0)).unwrap();
        assert_eq!(al.n_columns(), 0);
        assert!(al.render_gapped().unwrap().iter().all(|(_, s)| s.is_empty()));
    }

    #[test]
    fn canonical_sorts_columns() {
        let a = Poset::from_sequence("a", "xy");
        let b = Poset::from_sequence("b", "xy");
        let cols = vec![
            Column::aligned([(0, 1), (1, 1)]).unwrap(),
            Column::aligned([(0, 0), (1, 0)]).unwrap(),
        ];
        let order = StrictOrder::from_pairs(2, [(1, 0)]).unwrap();
        let al = Alignment::new(vec![a, b], cols, order).unwrap();
        let canon = al.canonical();
        assert_eq!(canon.columns()[0].get(0), Some(0));
        assert!(canon.column_order().lt(0, 1));
        assert!(al.is_isomorphic(&canon));
    }
}

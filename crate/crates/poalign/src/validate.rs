//! Axiom validators for alignments.
//!
//! Validators never fail early: each returns a [`Report`] listing every
//! check with all offending witnesses, so a front end can show the whole
//! picture at once. Structural invariants (coverage, non-empty columns)
//! are enforced by the [`Alignment`] constructors and are not re-checked
//! here.

use std::fmt;

use crate::alignment::{induce_column_order, Alignment, AlignmentError, ColumnFlag};

/// Outcome of one axiom check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

impl Check {
    fn pass(name: &'static str) -> Self {
        Check { name, passed: true, witnesses: Vec::new() }
    }

    fn from_witnesses(name: &'static str, witnesses: Vec<String>) -> Self {
        Check { name, passed: witnesses.is_empty(), witnesses }
    }
}

/// A structured validation report: one entry per axiom.
#[derive(Debug, Clone)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed {
                writeln!(f, "check {} pass", c.name)?;
            } else {
                writeln!(f, "check {} FAIL", c.name)?;
                for w in &c.witnesses {
                    writeln!(f, "  witness {}", w)?;
                }
            }
        }
        Ok(())
    }
}

fn check_one_per_row(al: &Alignment) -> Check {
    // True by construction of Column; verified anyway so the report is
    // self-contained when alignments arrive from other front ends.
    let mut witnesses = Vec::new();
    for (ci, col) in al.columns().iter().enumerate() {
        let mut seen = Vec::new();
        for (row, _) in col.entries() {
            if seen.contains(&row) {
                witnesses.push(format!("column {} holds row {} twice", ci, al.rows()[row].row_id()));
            }
            seen.push(row);
        }
    }
    Check::from_witnesses("one-per-row", witnesses)
}

/// Columns are stored as sets, so each column is trivially a complete
/// subgraph of the alignment graph.
fn check_subgraph() -> Check {
    Check::pass("subgraph")
}

/// Row orders force column order: `i < j` in row `a` with the elements
/// in columns `P`, `Q` requires `P < Q`.
fn check_order_respects_rows(al: &Alignment) -> Check {
    let mut witnesses = Vec::new();
    let positions = al.element_columns();
    for (ri, row) in al.rows().iter().enumerate() {
        for i in 0..row.len() {
            for j in 0..row.len() {
                if row.lt(i, j) {
                    let (p, q) = (positions[ri][i], positions[ri][j]);
                    if p != q && !al.column_order().lt(p, q) {
                        witnesses.push(format!(
                            "row {}: {} < {} but column {} is not before column {}",
                            row.row_id(), i, j, p, q
                        ));
                    }
                }
            }
        }
    }
    Check::from_witnesses("order-respects-rows", witnesses)
}

/// The column order never contradicts a row order: `P < Q` with entries
/// `i`, `j` of the same row requires `i < j` or incomparability.
fn check_order_never_contradicts(al: &Alignment) -> Check {
    let mut witnesses = Vec::new();
    for p in 0..al.n_columns() {
        for q in 0..al.n_columns() {
            if !al.column_order().lt(p, q) {
                continue;
            }
            for (row, i) in al.columns()[p].entries() {
                if let Some(j) = al.columns()[q].get(row) {
                    if al.rows()[row].lt(j, i) {
                        witnesses.push(format!(
                            "columns {} < {} but row {} has {} > {}",
                            p, q, al.rows()[row].row_id(), i, j
                        ));
                    }
                }
            }
        }
    }
    Check::from_witnesses("order-never-contradicts-rows", witnesses)
}

/// The strong projection axiom: `P < Q` with entries `i`, `j` of the
/// same row requires `i < j` in that row, so projecting the column order
/// onto any row returns exactly the row order.
fn check_order_projects_to_rows(al: &Alignment) -> Check {
    let mut witnesses = Vec::new();
    for p in 0..al.n_columns() {
        for q in 0..al.n_columns() {
            if !al.column_order().lt(p, q) {
                continue;
            }
            for (row, i) in al.columns()[p].entries() {
                if let Some(j) = al.columns()[q].get(row) {
                    if !al.rows()[row].lt(i, j) {
                        witnesses.push(format!(
                            "columns {} < {} but row {} does not have {} < {}",
                            p, q, al.rows()[row].row_id(), i, j
                        ));
                    }
                }
            }
        }
    }
    Check::from_witnesses("order-projects-to-rows", witnesses)
}

/// Validates the general alignment axioms against the stored column
/// order.
pub fn validate_general(al: &Alignment) -> Report {
    Report {
        checks: vec![
            check_subgraph(),
            check_one_per_row(al),
            check_order_respects_rows(al),
            check_order_never_contradicts(al),
        ],
    }
}

/// Validates the general axioms plus the strong projection axiom.
pub fn validate_recover(al: &Alignment) -> Report {
    let mut report = validate_general(al);
    report.checks.push(check_order_projects_to_rows(al));
    report
}

/// Validates the total-order alignment axioms. All rows must be chains.
pub fn validate_total(al: &Alignment) -> Result<Report, AlignmentError> {
    for row in al.rows() {
        if !row.is_chain() {
            return Err(AlignmentError::RowNotTotal { row_id: row.row_id().to_string() });
        }
    }
    let mut checks = vec![check_subgraph(), check_one_per_row(al)];

    // No crossing: shared row pairs of two columns must agree in
    // direction.
    let mut witnesses = Vec::new();
    let cols = al.columns();
    for p in 0..cols.len() {
        for q in 0..cols.len() {
            if p == q {
                continue;
            }
            for (a, i) in cols[p].entries() {
                let Some(k) = cols[q].get(a) else { continue };
                if !al.rows()[a].lt(i, k) {
                    continue;
                }
                for (b, j) in cols[p].entries() {
                    if b == a {
                        continue;
                    }
                    let Some(l) = cols[q].get(b) else { continue };
                    if !al.rows()[b].lt(j, l) {
                        witnesses.push(format!(
                            "columns {} and {} cross: row {} has {} < {} but row {} has {} >= {}",
                            p, q,
                            al.rows()[a].row_id(), i, k,
                            al.rows()[b].row_id(), j, l
                        ));
                    }
                }
            }
        }
    }
    checks.push(Check::from_witnesses("no-crossing", witnesses));

    checks.push(Check {
        name: "order-recovers-rows",
        ..check_order_respects_rows(al)
    });

    // With total rows the forced relations must admit a linear
    // extension; the induced closure being a partial order is exactly
    // that.
    let ext_check = match induce_column_order(al.rows(), al.columns()) {
        Ok(_) => Check::pass("linear-extension-exists"),
        Err(AlignmentError::NoOrderExists { certificate }) => Check::from_witnesses(
            "linear-extension-exists",
            vec![format!("forced relations cycle: columns {}", certificate)],
        ),
        Err(e) => Check::from_witnesses("linear-extension-exists", vec![e.to_string()]),
    };
    checks.push(ext_check);

    Ok(Report { checks })
}

/// Validates the partially local column marking: unaligned columns are
/// singletons, no unaligned suffix column precedes an aligned column, no
/// aligned column precedes an unaligned prefix column, and unaligned
/// prefix (respectively suffix) columns of different rows are mutually
/// incomparable.
pub fn validate_local_marking(al: &Alignment) -> Report {
    let cols = al.columns();
    let order = al.column_order();

    let mut singleton = Vec::new();
    for (ci, col) in cols.iter().enumerate() {
        if col.flag() != ColumnFlag::Aligned && col.len() != 1 {
            singleton.push(format!("unaligned column {} has {} entries", ci, col.len()));
        }
    }

    let mut suffix_before_aligned = Vec::new();
    let mut aligned_before_prefix = Vec::new();
    let mut prefix_incomparable = Vec::new();
    let mut suffix_incomparable = Vec::new();
    for p in 0..cols.len() {
        for q in 0..cols.len() {
            if p == q {
                continue;
            }
            match (cols[p].flag(), cols[q].flag()) {
                (ColumnFlag::UnalignedSuffix, ColumnFlag::Aligned) if order.lt(p, q) => {
                    suffix_before_aligned
                        .push(format!("suffix column {} precedes aligned column {}", p, q));
                }
                (ColumnFlag::Aligned, ColumnFlag::UnalignedPrefix) if order.lt(p, q) => {
                    aligned_before_prefix
                        .push(format!("aligned column {} precedes prefix column {}", p, q));
                }
                (ColumnFlag::UnalignedPrefix, ColumnFlag::UnalignedPrefix) if p < q => {
                    let shares_row = cols[p].entries().any(|(r, _)| cols[q].get(r).is_some());
                    if !shares_row && order.comparable(p, q) {
                        prefix_incomparable.push(format!(
                            "prefix columns {} and {} of different rows are comparable",
                            p, q
                        ));
                    }
                }
                (ColumnFlag::UnalignedSuffix, ColumnFlag::UnalignedSuffix) if p < q => {
                    let shares_row = cols[p].entries().any(|(r, _)| cols[q].get(r).is_some());
                    if !shares_row && order.comparable(p, q) {
                        suffix_incomparable.push(format!(
                            "suffix columns {} and {} of different rows are comparable",
                            p, q
                        ));
                    }
                }
                _ => {}
            }
        }
    }

    Report {
        checks: vec![
            Check::from_witnesses("unaligned-singleton", singleton),
            Check::from_witnesses("suffix-not-before-aligned", suffix_before_aligned),
            Check::from_witnesses("aligned-not-before-prefix", aligned_before_prefix),
            Check::from_witnesses("prefix-columns-incomparable", prefix_incomparable),
            Check::from_witnesses("suffix-columns-incomparable", suffix_incomparable),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::{induce_column_order, Alignment, Column};
    use crate::order::StrictOrder;
    use crate::poset::Poset;

    #[test]
    fn ungapped_two_row_alignment_passes_total() {
        let al = Alignment::from_gapped_rows(&[("B", "000011011"), ("C", "100010000")]).unwrap();
        let report = validate_total(&al).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn crossing_columns_fail_total() {
        let a = Poset::from_sequence("a", "xy");
        let b = Poset::from_sequence("b", "xy");
        let cols = vec![
            Column::aligned([(0, 0), (1, 1)]).unwrap(),
            Column::aligned([(0, 1), (1, 0)]).unwrap(),
        ];
        // Crossing columns admit no forced order, so store the empty one.
        let al = Alignment::new(vec![a, b], cols, StrictOrder::empty(2)).unwrap();
        let report = validate_total(&al).unwrap();
        assert!(!report.check("no-crossing").unwrap().passed);
    }

    #[test]
    fn empty_alignment_passes_everything() {
        let rows = vec![Poset::chain("a", 0, None).unwrap(), Poset::chain("b", 0, None).unwrap()];
        let al = Alignment::new(rows, vec![], StrictOrder::empty(0)).unwrap();
        assert!(validate_total(&al).unwrap().passed());
        assert!(validate_general(&al).passed());
        assert!(validate_recover(&al).passed());
        assert!(validate_local_marking(&al).passed());
    }

    #[test]
    fn non_chain_row_is_rejected_by_total() {
        let v = Poset::new("v", 3, [(0, 2), (1, 2)], None).unwrap();
        let al = Alignment::single_row(v);
        assert!(matches!(
            validate_total(&al),
            Err(AlignmentError::RowNotTotal { .. })
        ));
    }

    #[test]
    fn shared_singleton_column_passes_both() {
        let a = Poset::chain("a", 1, None).unwrap();
        let b = Poset::chain("b", 1, None).unwrap();
        let cols = vec![Column::aligned([(0, 0), (1, 0)]).unwrap()];
        let al = Alignment::with_induced_order(vec![a, b], cols).unwrap();
        assert!(validate_general(&al).passed());
        assert!(validate_recover(&al).passed());
    }

    #[test]
    fn cross_valid_but_recover_invalid() {
        // Left row is a two-element antichain, right row a chain;
        // matching both pairs orders the antichain elements via the
        // chain, which the projection axiom forbids.
        let free = Poset::new("a", 2, [], None).unwrap();
        let chain = Poset::chain("b", 2, None).unwrap();
        let cols = vec![
            Column::aligned([(0, 0), (1, 0)]).unwrap(),
            Column::aligned([(0, 1), (1, 1)]).unwrap(),
        ];
        let al = Alignment::with_induced_order(vec![free, chain], cols).unwrap();
        assert!(validate_general(&al).passed());
        let report = validate_recover(&al);
        assert!(!report.passed());
        assert!(!report.check("order-projects-to-rows").unwrap().passed);
    }

    #[test]
    fn all_aligned_local_marking_is_vacuous() {
        let al = Alignment::from_gapped_rows(&[("a", "xx"), ("b", "xx")]).unwrap();
        assert!(validate_local_marking(&al).passed());
    }

    #[test]
    fn prefix_after_aligned_fails_local_marking() {
        use crate::alignment::ColumnFlag;
        let a = Poset::from_sequence("a", "xy");
        let b = Poset::from_sequence("b", "x");
        let cols = vec![
            Column::aligned([(0, 0), (1, 0)]).unwrap(),
            Column::new([(0usize, 1usize)], ColumnFlag::UnalignedPrefix).unwrap(),
        ];
        let al = Alignment::with_induced_order(vec![a, b], cols).unwrap();
        let report = validate_local_marking(&al);
        assert!(!report.check("aligned-not-before-prefix").unwrap().passed);
    }

    #[test]
    fn prefix_columns_of_different_rows_incomparable_pass() {
        use crate::alignment::ColumnFlag;
        let a = Poset::from_sequence("a", "px");
        let b = Poset::from_sequence("b", "qx");
        let cols = vec![
            Column::new([(0usize, 0usize)], ColumnFlag::UnalignedPrefix).unwrap(),
            Column::new([(1usize, 0usize)], ColumnFlag::UnalignedPrefix).unwrap(),
            Column::aligned([(0, 1), (1, 1)]).unwrap(),
        ];
        let order = induce_column_order(&[a.clone(), b.clone()], &cols).unwrap();
        let al = Alignment::new(vec![a, b], cols, order).unwrap();
        assert!(validate_local_marking(&al).passed());
    }
}

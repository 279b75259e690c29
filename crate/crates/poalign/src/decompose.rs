//! Structural decompositions of alignments: restriction to a row
//! subset, quotient by a row partition (alignment of alignments),
//! recombination of row-disjoint parts, and blockwise column
//! decomposition with concatenation.

use crate::alignment::{Alignment, AlignmentError, Column};
use crate::order::StrictOrder;
use crate::poset::Poset;

/// Restriction of an alignment to a subset of its rows: columns become
/// the non-empty intersections, the column order is inherited, gap-only
/// columns are dropped. Row posets are kept whole.
pub fn restrict(al: &Alignment, row_ids: &[&str]) -> Result<Alignment, AlignmentError> {
    restrict_with_map(al, row_ids).map(|(a, _)| a)
}

/// Like [`restrict`], also returning for each original column the index
/// of its surviving intersection, if any.
pub fn restrict_with_map(
    al: &Alignment,
    row_ids: &[&str],
) -> Result<(Alignment, Vec<Option<usize>>), AlignmentError> {
    if row_ids.is_empty() {
        return Err(AlignmentError::EmptyRowSet);
    }
    for id in row_ids {
        if al.row_index(id).is_none() {
            return Err(AlignmentError::UnknownRow { row_id: id.to_string() });
        }
    }
    // Rows keep their original relative order.
    let keep: Vec<usize> = (0..al.n_rows())
        .filter(|&ri| row_ids.contains(&al.rows()[ri].row_id()))
        .collect();
    let mut row_remap = vec![None; al.n_rows()];
    for (new, &old) in keep.iter().enumerate() {
        row_remap[old] = Some(new);
    }

    let mut columns = Vec::new();
    let mut survivors = Vec::new();
    let mut colmap = vec![None; al.n_columns()];
    for (ci, col) in al.columns().iter().enumerate() {
        let entries: Vec<(usize, usize)> = col
            .entries()
            .filter_map(|(r, e)| row_remap[r].map(|nr| (nr, e)))
            .collect();
        if !entries.is_empty() {
            colmap[ci] = Some(columns.len());
            columns.push(Column::new(entries, col.flag())?);
            survivors.push(ci);
        }
    }
    let order = al.column_order().restrict(&survivors);
    let rows: Vec<Poset> = keep.iter().map(|&ri| al.rows()[ri].clone()).collect();
    let restricted = Alignment::new(rows, columns, order)?;
    Ok((restricted, colmap))
}

/// A partition of an alignment's rows into disjoint non-empty classes.
#[derive(Debug, Clone)]
pub struct RowPartition {
    classes: Vec<Vec<String>>,
}

impl RowPartition {
    pub fn new(classes: Vec<Vec<String>>, al: &Alignment) -> Result<Self, AlignmentError> {
        if classes.iter().any(|c| c.is_empty()) {
            return Err(AlignmentError::InvalidPartition { reason: "empty class".into() });
        }
        let mut seen = Vec::new();
        for class in &classes {
            for id in class {
                if al.row_index(id).is_none() {
                    return Err(AlignmentError::UnknownRow { row_id: id.clone() });
                }
                if seen.contains(id) {
                    return Err(AlignmentError::InvalidPartition {
                        reason: format!("row {} appears twice", id),
                    });
                }
                seen.push(id.clone());
            }
        }
        if seen.len() != al.n_rows() {
            return Err(AlignmentError::InvalidPartition {
                reason: format!("{} of {} rows covered", seen.len(), al.n_rows()),
            });
        }
        Ok(RowPartition { classes })
    }

    /// One class per row.
    pub fn singletons(al: &Alignment) -> Self {
        RowPartition {
            classes: al.rows().iter().map(|r| vec![r.row_id().to_string()]).collect(),
        }
    }

    pub fn classes(&self) -> &[Vec<String>] {
        &self.classes
    }
}

/// The quotient of an alignment by a row partition, together with the
/// constituent restrictions.
#[derive(Debug, Clone)]
pub struct QuotientResult {
    /// The alignment of alignments: one row per class, whose poset
    /// elements are the columns of the class restriction in inherited
    /// order.
    pub quotient: Alignment,
    /// The class restrictions, in class order.
    pub parts: Vec<Alignment>,
}

/// Quotients an alignment by a row partition. The result has exactly as
/// many columns as the input (the correspondence is one to one) and
/// inherits the column order; its rows are the class restrictions read
/// as posets of their own columns.
pub fn quotient(al: &Alignment, part: &RowPartition) -> Result<QuotientResult, AlignmentError> {
    let mut parts = Vec::new();
    let mut maps = Vec::new();
    for class in part.classes() {
        let ids: Vec<&str> = class.iter().map(|s| s.as_str()).collect();
        let (restricted, map) = restrict_with_map(al, &ids)?;
        parts.push(restricted);
        maps.push(map);
    }
    let mut class_posets = Vec::new();
    for (class, restricted) in part.classes().iter().zip(&parts) {
        let id = class.join("+");
        let pairs = restricted.column_order().reach_pairs();
        class_posets.push(
            Poset::new(id, restricted.n_columns(), pairs, None)
                .expect("column order is already a strict order"),
        );
    }
    let mut columns = Vec::new();
    for ci in 0..al.n_columns() {
        let entries: Vec<(usize, usize)> = maps
            .iter()
            .enumerate()
            .filter_map(|(class_idx, map)| map[ci].map(|c| (class_idx, c)))
            .collect();
        columns.push(Column::new(entries, al.columns()[ci].flag())?);
    }
    let quotient = Alignment::new(class_posets, columns, al.column_order().clone())?;
    Ok(QuotientResult { quotient, parts })
}

/// Splits an alignment by a row partition and derives the column
/// correspondence that [`recombine`] needs to reassemble it: one merged
/// group per original column, listing its surviving piece in each part.
pub fn split_rows(
    al: &Alignment,
    part: &RowPartition,
) -> Result<(Vec<Alignment>, Vec<Vec<(usize, usize)>>), AlignmentError> {
    let mut parts = Vec::new();
    let mut maps = Vec::new();
    for class in part.classes() {
        let ids: Vec<&str> = class.iter().map(|s| s.as_str()).collect();
        let (restricted, map) = restrict_with_map(al, &ids)?;
        parts.push(restricted);
        maps.push(map);
    }
    let mut groups = Vec::new();
    for ci in 0..al.n_columns() {
        let group: Vec<(usize, usize)> = maps
            .iter()
            .enumerate()
            .filter_map(|(p, map)| map[ci].map(|c| (p, c)))
            .collect();
        groups.push(group);
    }
    Ok((parts, groups))
}

/// Inverse of restriction: merges row-disjoint alignments into one.
/// `groups` lists the column groups to be merged, each holding at most
/// one column per part; part columns not mentioned become standalone
/// columns. The column order is the transitive closure of the parts'
/// orders lifted through the merge; if that closure is cyclic the
/// correspondence is inconsistent.
pub fn recombine(
    parts: &[Alignment],
    groups: &[Vec<(usize, usize)>],
) -> Result<Alignment, AlignmentError> {
    let mut rows = Vec::new();
    let mut row_offset = Vec::new();
    for part in parts {
        row_offset.push(rows.len());
        for row in part.rows() {
            if rows.iter().any(|r: &Poset| r.row_id() == row.row_id()) {
                return Err(AlignmentError::InconsistentCorrespondence {
                    reason: format!("row {} appears in more than one part", row.row_id()),
                });
            }
            rows.push(row.clone());
        }
    }

    // group_of[part][col] = merged column index.
    let mut group_of: Vec<Vec<Option<usize>>> =
        parts.iter().map(|p| vec![None; p.n_columns()]).collect();
    let mut merged: Vec<Vec<(usize, usize)>> = Vec::new();
    for group in groups {
        let gi = merged.len();
        let mut parts_seen = Vec::new();
        for &(p, c) in group {
            if p >= parts.len() || c >= parts[p].n_columns() {
                return Err(AlignmentError::InconsistentCorrespondence {
                    reason: format!("group member ({}, {}) out of range", p, c),
                });
            }
            if parts_seen.contains(&p) {
                return Err(AlignmentError::InconsistentCorrespondence {
                    reason: format!("group {} holds two columns of part {}", gi, p),
                });
            }
            if group_of[p][c].is_some() {
                return Err(AlignmentError::InconsistentCorrespondence {
                    reason: format!("column {} of part {} is in two groups", c, p),
                });
            }
            parts_seen.push(p);
            group_of[p][c] = Some(gi);
        }
        merged.push(group.clone());
    }
    for (p, part) in parts.iter().enumerate() {
        for c in 0..part.n_columns() {
            if group_of[p][c].is_none() {
                group_of[p][c] = Some(merged.len());
                merged.push(vec![(p, c)]);
            }
        }
    }

    let mut columns = Vec::new();
    for (gi, group) in merged.iter().enumerate() {
        if group.is_empty() {
            return Err(AlignmentError::InconsistentCorrespondence {
                reason: format!("group {} is empty", gi),
            });
        }
        let mut entries = Vec::new();
        let mut flag = None;
        for &(p, c) in group {
            let col = &parts[p].columns()[c];
            match flag {
                None => flag = Some(col.flag()),
                Some(f) if f != col.flag() => {
                    return Err(AlignmentError::InconsistentCorrespondence {
                        reason: format!("group {} merges columns with different flags", gi),
                    });
                }
                _ => {}
            }
            for (r, e) in col.entries() {
                entries.push((row_offset[p] + r, e));
            }
        }
        columns.push(Column::new(entries, flag.unwrap())?);
    }

    let mut pairs = Vec::new();
    for (p, part) in parts.iter().enumerate() {
        for (c1, c2) in part.column_order().reach_pairs() {
            pairs.push((group_of[p][c1].unwrap(), group_of[p][c2].unwrap()));
        }
    }
    let order = StrictOrder::from_pairs(columns.len(), pairs).map_err(|cycle| {
        AlignmentError::InconsistentCorrespondence {
            reason: format!("merged column order is cyclic: columns {}", cycle),
        }
    })?;
    Alignment::new(rows, columns, order)
}

/// A partition of an alignment's columns into blocks, with a strict
/// partial order on the blocks.
#[derive(Debug, Clone)]
pub struct BlockPartition {
    pub classes: Vec<Vec<usize>>,
    pub block_order: StrictOrder,
}

/// Partitions the columns into blocks per `assignment` (column index ->
/// block id, block ids `0..k`) and computes the minimal block order: the
/// transitive closure of `Y' < Y''` whenever some column of `Y'`
/// precedes some column of `Y''`. Fails when that closure is cyclic.
pub fn block_decompose(al: &Alignment, assignment: &[usize]) -> Result<BlockPartition, AlignmentError> {
    if assignment.len() != al.n_columns() {
        return Err(AlignmentError::InvalidPartition {
            reason: format!(
                "assignment covers {} columns, alignment has {}",
                assignment.len(),
                al.n_columns()
            ),
        });
    }
    let k = assignment.iter().copied().max().map_or(0, |m| m + 1);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (ci, &b) in assignment.iter().enumerate() {
        classes[b].push(ci);
    }
    if let Some(empty) = classes.iter().position(|c| c.is_empty()) {
        return Err(AlignmentError::InvalidPartition { reason: format!("block {} is empty", empty) });
    }
    let mut pairs = Vec::new();
    for (p, q) in al.column_order().reach_pairs() {
        if assignment[p] != assignment[q] {
            pairs.push((assignment[p], assignment[q]));
        }
    }
    let block_order = StrictOrder::from_pairs(k, pairs)
        .map_err(|certificate| AlignmentError::BlockOrderUnsatisfiable { certificate })?;
    Ok(BlockPartition { classes, block_order })
}

/// Concatenates the blocks of `bp` back into an alignment over the same
/// rows and columns, with the extended order: within-block pairs are
/// kept from `al`, and every cross-block pair ordered by `bp.block_order`
/// becomes ordered. The given block order must relate every pair of
/// blocks that `al`'s column order already forces. With the minimal
/// (mirrored) block order on a block-convex alignment this reproduces
/// `al` exactly.
pub fn concatenate_blocks(al: &Alignment, bp: &BlockPartition) -> Result<Alignment, AlignmentError> {
    let mut block_of = vec![usize::MAX; al.n_columns()];
    for (b, class) in bp.classes.iter().enumerate() {
        for &c in class {
            if c >= al.n_columns() || block_of[c] != usize::MAX {
                return Err(AlignmentError::InvalidPartition {
                    reason: format!("column {} missing or repeated in blocks", c),
                });
            }
            block_of[c] = b;
        }
    }
    if block_of.iter().any(|&b| b == usize::MAX) {
        return Err(AlignmentError::InvalidPartition { reason: "blocks do not cover all columns".into() });
    }
    // The block order must honour every relation the alignment forces
    // across blocks.
    for (p, q) in al.column_order().reach_pairs() {
        let (bp_, bq) = (block_of[p], block_of[q]);
        if bp_ != bq && !bp.block_order.lt(bp_, bq) {
            return Err(AlignmentError::InvalidPartition {
                reason: format!(
                    "columns {} < {} span blocks {} and {} which the block order does not relate",
                    p, q, bp_, bq
                ),
            });
        }
    }
    let mut pairs = Vec::new();
    for (p, q) in al.column_order().reach_pairs() {
        if block_of[p] == block_of[q] {
            pairs.push((p, q));
        }
    }
    for p in 0..al.n_columns() {
        for q in 0..al.n_columns() {
            if p != q && bp.block_order.lt(block_of[p], block_of[q]) {
                pairs.push((p, q));
            }
        }
    }
    let order = StrictOrder::from_pairs(al.n_columns(), pairs)
        .map_err(|certificate| AlignmentError::BlockOrderUnsatisfiable { certificate })?;
    Alignment::new(al.rows().to_vec(), al.columns().to_vec(), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::{validate_general, validate_recover};

    fn three_row() -> Alignment {
        Alignment::from_gapped_rows(&[("a", "A-C"), ("b", "-BC"), ("c", "AB-")]).unwrap()
    }

    #[test]
    fn restrict_to_all_rows_is_identity() {
        let al = three_row();
        let r = restrict(&al, &["a", "b", "c"]).unwrap();
        assert_eq!(al, r);
    }

    #[test]
    fn restrict_drops_gap_only_columns() {
        let al = Alignment::from_gapped_rows(&[
            ("A", "0000111110000"),
            ("B", "000011011----"),
            ("C", "----100010000"),
        ])
        .unwrap();
        let r = restrict(&al, &["B", "C"]).unwrap();
        assert_eq!(r.n_columns(), 13);
        let expected =
            Alignment::from_gapped_rows(&[("B", "000011011----"), ("C", "----100010000")]).unwrap();
        assert!(r.is_isomorphic(&expected));
    }

    #[test]
    fn restrict_rejects_empty_and_unknown() {
        let al = three_row();
        assert!(matches!(restrict(&al, &[]), Err(AlignmentError::EmptyRowSet)));
        assert!(matches!(restrict(&al, &["z"]), Err(AlignmentError::UnknownRow { .. })));
    }

    #[test]
    fn restrict_preserves_validators() {
        let al = three_row();
        assert!(validate_general(&al).passed());
        for ids in [vec!["a"], vec!["b", "c"], vec!["a", "c"]] {
            let r = restrict(&al, &ids).unwrap();
            assert!(validate_general(&r).passed());
            assert!(validate_recover(&r).passed());
        }
    }

    #[test]
    fn quotient_by_singletons_mirrors_rows() {
        let al = three_row();
        let part = RowPartition::singletons(&al);
        let q = quotient(&al, &part).unwrap();
        assert_eq!(q.quotient.n_columns(), al.n_columns());
        assert_eq!(q.quotient.n_rows(), 3);
        assert_eq!(q.quotient.column_order(), al.column_order());
        for (class_poset, row) in q.quotient.rows().iter().zip(al.rows()) {
            assert_eq!(class_poset.len(), row.len());
            assert_eq!(class_poset.order(), row.order());
        }
    }

    #[test]
    fn quotient_pairs_example() {
        let al = three_row();
        let part =
            RowPartition::new(vec![vec!["a".into(), "b".into()], vec!["c".into()]], &al).unwrap();
        let q = quotient(&al, &part).unwrap();
        assert_eq!(q.quotient.n_columns(), 3);
        assert_eq!(q.parts[0].n_rows(), 2);
        assert_eq!(q.parts[0].n_columns(), 3);
        assert_eq!(q.parts[1].n_rows(), 1);
        assert_eq!(q.parts[1].n_columns(), 2);
        assert_eq!(q.quotient.rows()[0].row_id(), "a+b");
        assert!(validate_general(&q.quotient).passed());
    }

    fn reorder_rows(al: &Alignment, ids: &[&str]) -> Alignment {
        let perm: Vec<usize> = ids.iter().map(|id| al.row_index(id).unwrap()).collect();
        let mut inv = vec![0usize; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let rows: Vec<Poset> = perm.iter().map(|&old| al.rows()[old].clone()).collect();
        let columns: Vec<Column> = al
            .columns()
            .iter()
            .map(|c| Column::new(c.entries().map(|(r, e)| (inv[r], e)), c.flag()).unwrap())
            .collect();
        Alignment::new(rows, columns, al.column_order().clone()).unwrap()
    }

    #[test]
    fn recombine_inverts_split() {
        let al = three_row();
        for classes in [
            vec![vec!["a".to_string()], vec!["b".to_string()], vec!["c".to_string()]],
            vec![vec!["a".to_string(), "b".to_string()], vec!["c".to_string()]],
            vec![vec!["a".to_string(), "c".to_string()], vec!["b".to_string()]],
            vec![vec!["b".to_string()], vec!["a".to_string(), "c".to_string()]],
        ] {
            let part = RowPartition::new(classes, &al).unwrap();
            let (parts, groups) = split_rows(&al, &part).unwrap();
            let back = recombine(&parts, &groups).unwrap();
            let ids: Vec<&str> = al.rows().iter().map(|r| r.row_id()).collect();
            let reordered = reorder_rows(&back, &ids);
            assert!(reordered.is_isomorphic(&al), "partition failed round trip");
        }
    }

    #[test]
    fn recombine_empty_correspondence_is_disjoint_union() {
        let a = Alignment::single_row(Poset::from_sequence("a", "xy"));
        let b = Alignment::single_row(Poset::from_sequence("b", "zw"));
        let merged = recombine(&[a, b], &[]).unwrap();
        assert_eq!(merged.n_columns(), 4);
        for p in 0..4 {
            for q in 0..4 {
                if merged.column_order().lt(p, q) {
                    let rp = merged.columns()[p].entries().next().unwrap().0;
                    let rq = merged.columns()[q].entries().next().unwrap().0;
                    assert_eq!(rp, rq, "cross-row columns must stay incomparable");
                }
            }
        }
    }

    #[test]
    fn recombine_detects_forced_cycle() {
        let a = Alignment::single_row(Poset::from_sequence("a", "xy"));
        let b = Alignment::single_row(Poset::from_sequence("b", "xy"));
        let groups = vec![vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]];
        let err = recombine(&[a, b], &groups).unwrap_err();
        assert!(matches!(err, AlignmentError::InconsistentCorrespondence { .. }));
    }

    #[test]
    fn single_block_concatenation_is_identity() {
        let al = three_row();
        let bp = block_decompose(&al, &vec![0; al.n_columns()]).unwrap();
        assert!(bp.block_order.reach_pairs().is_empty());
        let back = concatenate_blocks(&al, &bp).unwrap();
        assert_eq!(back, al);
    }

    #[test]
    fn chain_alignment_splits_at_any_boundary() {
        let al = Alignment::from_gapped_rows(&[("B", "000011011----"), ("C", "----100010000")])
            .unwrap();
        let n = al.n_columns();
        for cut in 1..n {
            let assignment: Vec<usize> = (0..n).map(|c| usize::from(c >= cut)).collect();
            let bp = block_decompose(&al, &assignment).unwrap();
            assert!(bp.block_order.lt(0, 1));
            let back = concatenate_blocks(&al, &bp).unwrap();
            assert_eq!(back, al, "cut at {cut}");
        }
    }

    #[test]
    fn column_versus_rest_split_requires_maximal_column() {
        let al = Alignment::from_gapped_rows(&[("a", "xy"), ("b", "xy")]).unwrap();
        assert!(block_decompose(&al, &[0, 1]).is_ok());
        assert!(block_decompose(&al, &[1, 0]).is_ok());
        let al3 = Alignment::from_gapped_rows(&[("a", "xyz"), ("b", "xyz")]).unwrap();
        // A middle column alone: the rest-block both precedes and
        // follows it, so no block order exists.
        let err = block_decompose(&al3, &[0, 1, 0]).unwrap_err();
        assert!(matches!(err, AlignmentError::BlockOrderUnsatisfiable { .. }));
    }
}

//! Pairwise alignments as binary relations: the matching property (M),
//! the order-isomorphism property (P), the weaker orderability property
//! (P'), relational composition, conversions to and from two-row
//! alignments, and transitive multiple alignment over a set of pairwise
//! relations.
//!
//! Relations are stored directed (left to right); the symmetric reading
//! is recovered by [`PairRelation::reversed`] and the conversions.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::alignment::{induce_column_order, Alignment, AlignmentError, Column};
use crate::order::CycleCertificate;
use crate::poset::Poset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("cannot compose: middle posets differ ({left} vs {right})")]
    MiddleMismatch { left: String, right: String },
    #[error("relation references element {index} of {side} row {row_id} (n={n})")]
    IndexOutOfRange { side: &'static str, row_id: String, index: usize, n: usize },
    #[error("alignment has {n_rows} rows, need exactly 2")]
    NotPairwise { n_rows: usize },
    #[error("relation violates ({property}): {witness}")]
    PropertyViolation { property: &'static str, witness: String },
    #[error("row {row_id} is not registered in the relation graph")]
    UnknownRow { row_id: String },
    #[error("relation endpoints do not match registered row {row_id}")]
    EndpointMismatch { row_id: String },
    #[error("duplicate relation between {left} and {right}")]
    DuplicateEdge { left: String, right: String },
    #[error(transparent)]
    Model(#[from] AlignmentError),
}

/// Why a property check failed, with a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyFailure {
    /// Two pairs share an endpoint.
    M { first: (usize, usize), second: (usize, usize) },
    /// Comparability is not mirrored by the two pairs.
    P { first: (usize, usize), second: (usize, usize) },
    /// The order forced on the pairs is cyclic.
    PPrime { cycle: Vec<(usize, usize)> },
}

impl fmt::Display for PropertyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyFailure::M { first, second } => {
                write!(f, "pairs {:?} and {:?} share an endpoint", first, second)
            }
            PropertyFailure::P { first, second } => {
                write!(f, "pairs {:?} and {:?} disagree on comparability", first, second)
            }
            PropertyFailure::PPrime { cycle } => {
                write!(f, "forced order on pairs is cyclic:")?;
                for p in cycle {
                    write!(f, " {:?}", p)?;
                }
                Ok(())
            }
        }
    }
}

impl PropertyFailure {
    pub fn property(&self) -> &'static str {
        match self {
            PropertyFailure::M { .. } => "M",
            PropertyFailure::P { .. } => "P",
            PropertyFailure::PPrime { .. } => "P'",
        }
    }

    fn into_error(self) -> RelationError {
        RelationError::PropertyViolation { property: self.property(), witness: self.to_string() }
    }
}

/// A binary relation between the elements of two posets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRelation {
    left: Poset,
    right: Poset,
    pairs: BTreeSet<(usize, usize)>,
}

impl PairRelation {
    pub fn new(
        left: Poset,
        right: Poset,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, RelationError> {
        let mut set = BTreeSet::new();
        for (i, j) in pairs {
            if i >= left.len() {
                return Err(RelationError::IndexOutOfRange {
                    side: "left",
                    row_id: left.row_id().to_string(),
                    index: i,
                    n: left.len(),
                });
            }
            if j >= right.len() {
                return Err(RelationError::IndexOutOfRange {
                    side: "right",
                    row_id: right.row_id().to_string(),
                    index: j,
                    n: right.len(),
                });
            }
            set.insert((i, j));
        }
        Ok(PairRelation { left, right, pairs: set })
    }

    /// The identity relation of a poset with itself.
    pub fn identity(p: &Poset) -> PairRelation {
        PairRelation {
            left: p.clone(),
            right: p.clone(),
            pairs: (0..p.len()).map(|i| (i, i)).collect(),
        }
    }

    pub fn left(&self) -> &Poset {
        &self.left
    }

    pub fn right(&self) -> &Poset {
        &self.right
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn pair_vec(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The same relation read right-to-left.
    pub fn reversed(&self) -> PairRelation {
        PairRelation {
            left: self.right.clone(),
            right: self.left.clone(),
            pairs: self.pairs.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// The matching property: no element appears in two pairs.
    pub fn check_m(&self) -> Result<(), PropertyFailure> {
        let pairs = self.pair_vec();
        for (i, &a) in pairs.iter().enumerate() {
            for &b in &pairs[i + 1..] {
                if a.0 == b.0 || a.1 == b.1 {
                    return Err(PropertyFailure::M { first: a, second: b });
                }
            }
        }
        Ok(())
    }

    /// The order-isomorphism property: for any two pairs, the left
    /// elements are below each other exactly when the right elements
    /// are. Comparability and incomparability are both preserved.
    pub fn check_p(&self) -> Result<(), PropertyFailure> {
        let pairs = self.pair_vec();
        for (i, &a) in pairs.iter().enumerate() {
            for &b in &pairs[i + 1..] {
                let fwd = self.left.lt(a.0, b.0) == self.right.lt(a.1, b.1);
                let bwd = self.left.lt(b.0, a.0) == self.right.lt(b.1, a.1);
                if !fwd || !bwd {
                    return Err(PropertyFailure::P { first: a, second: b });
                }
            }
        }
        Ok(())
    }

    /// The orderability property: some partial order on the pairs puts
    /// `(u, v)` before `(x, y)` whenever `u < x` on the left or `v < y`
    /// on the right. Decided by closing the forced relation and testing
    /// for cycles.
    pub fn check_p_prime(&self) -> Result<(), PropertyFailure> {
        let pairs = self.pair_vec();
        let mut edges = Vec::new();
        for (i, &a) in pairs.iter().enumerate() {
            for (j, &b) in pairs.iter().enumerate() {
                if i != j && (self.left.lt(a.0, b.0) || self.right.lt(a.1, b.1)) {
                    edges.push((i, j));
                }
            }
        }
        match crate::order::StrictOrder::from_pairs(pairs.len(), edges) {
            Ok(_) => Ok(()),
            Err(CycleCertificate(cycle)) => Err(PropertyFailure::PPrime {
                cycle: cycle.into_iter().map(|i| pairs[i]).collect(),
            }),
        }
    }

    pub fn is_m(&self) -> bool {
        self.check_m().is_ok()
    }

    pub fn is_p(&self) -> bool {
        self.check_p().is_ok()
    }

    pub fn is_p_prime(&self) -> bool {
        self.check_p_prime().is_ok()
    }
}

/// Relational composition, read left to right: `(x, z)` is in the
/// result iff some `y` has `(x, y)` in `r` and `(y, z)` in `s`. The
/// middle posets must be identical. If both inputs satisfy (M) and (P),
/// so does the result.
pub fn compose(r: &PairRelation, s: &PairRelation) -> Result<PairRelation, RelationError> {
    if r.right != s.left {
        return Err(RelationError::MiddleMismatch {
            left: r.right.row_id().to_string(),
            right: s.left.row_id().to_string(),
        });
    }
    let mut pairs = BTreeSet::new();
    for &(x, y) in &r.pairs {
        for &(y2, z) in &s.pairs {
            if y == y2 {
                pairs.insert((x, z));
            }
        }
    }
    Ok(PairRelation { left: r.left.clone(), right: s.right.clone(), pairs })
}

/// The matched columns of a two-row alignment, as a relation from the
/// first row to the second.
pub fn relation_from_alignment(al: &Alignment) -> Result<PairRelation, RelationError> {
    if al.n_rows() != 2 {
        return Err(RelationError::NotPairwise { n_rows: al.n_rows() });
    }
    let pairs: BTreeSet<(usize, usize)> = al
        .columns()
        .iter()
        .filter_map(|c| match (c.get(0), c.get(1)) {
            (Some(i), Some(j)) => Some((i, j)),
            _ => None,
        })
        .collect();
    Ok(PairRelation { left: al.rows()[0].clone(), right: al.rows()[1].clone(), pairs })
}

/// Extends a relation satisfying (M) and (P') to a two-row alignment:
/// one column per pair plus a singleton column for every unmatched
/// element, carrying the canonical induced column order. If the
/// relation additionally satisfies (P), the result passes the strong
/// projection validator.
pub fn alignment_from_relation(r: &PairRelation) -> Result<Alignment, RelationError> {
    r.check_m().map_err(PropertyFailure::into_error)?;
    r.check_p_prime().map_err(PropertyFailure::into_error)?;
    let mut columns = Vec::new();
    let mut left_used = vec![false; r.left.len()];
    let mut right_used = vec![false; r.right.len()];
    for &(i, j) in &r.pairs {
        left_used[i] = true;
        right_used[j] = true;
        columns.push(Column::aligned([(0, i), (1, j)])?);
    }
    for (i, used) in left_used.iter().enumerate() {
        if !used {
            columns.push(Column::aligned([(0, i)])?);
        }
    }
    for (j, used) in right_used.iter().enumerate() {
        if !used {
            columns.push(Column::aligned([(1, j)])?);
        }
    }
    Ok(Alignment::with_induced_order(vec![r.left.clone(), r.right.clone()], columns)?)
}

/// A set of pairwise relations over a common collection of rows.
#[derive(Debug, Clone)]
pub struct RelationGraph {
    rows: Vec<Poset>,
    edges: Vec<PairRelation>,
}

impl RelationGraph {
    pub fn new(rows: Vec<Poset>) -> Result<Self, RelationError> {
        for (i, row) in rows.iter().enumerate() {
            if rows[..i].iter().any(|r| r.row_id() == row.row_id()) {
                return Err(RelationError::DuplicateEdge {
                    left: row.row_id().to_string(),
                    right: row.row_id().to_string(),
                });
            }
        }
        Ok(RelationGraph { rows, edges: Vec::new() })
    }

    pub fn add(&mut self, rel: PairRelation) -> Result<(), RelationError> {
        for side in [rel.left(), rel.right()] {
            match self.rows.iter().find(|r| r.row_id() == side.row_id()) {
                None => {
                    return Err(RelationError::UnknownRow { row_id: side.row_id().to_string() })
                }
                Some(registered) if registered != side => {
                    return Err(RelationError::EndpointMismatch {
                        row_id: side.row_id().to_string(),
                    })
                }
                _ => {}
            }
        }
        let key = (rel.left().row_id().to_string(), rel.right().row_id().to_string());
        if self
            .edges
            .iter()
            .any(|e| e.left().row_id() == key.0 && e.right().row_id() == key.1)
        {
            return Err(RelationError::DuplicateEdge { left: key.0, right: key.1 });
        }
        self.edges.push(rel);
        Ok(())
    }

    pub fn rows(&self) -> &[Poset] {
        &self.rows
    }

    pub fn edges(&self) -> &[PairRelation] {
        &self.edges
    }

    /// True when the undirected graph of rows and relation edges is a
    /// tree: connected and acyclic (parallel edges count as a cycle).
    pub fn is_tree(&self) -> bool {
        let n = self.rows.len();
        if n == 0 || self.edges.len() != n - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        for e in &self.edges {
            let a = self.rows.iter().position(|r| r.row_id() == e.left().row_id()).unwrap();
            let b = self.rows.iter().position(|r| r.row_id() == e.right().row_id()).unwrap();
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

fn find(parent: &mut Vec<usize>, x: usize) -> usize {
    if parent[x] != x {
        let root = find(parent, parent[x]);
        parent[x] = root;
    }
    parent[x]
}

/// Candidate columns that cannot form a valid alignment: row clashes
/// inside components, or a cyclic forced order among the components.
#[derive(Debug, Clone)]
pub struct ViolationReport {
    /// Components holding more than one element of some row.
    pub clashes: Vec<ComponentClash>,
    /// A cycle among the candidate columns when the forced order failed.
    pub order_cycle: Option<Vec<Vec<(String, usize)>>>,
}

#[derive(Debug, Clone)]
pub struct ComponentClash {
    pub members: Vec<(String, usize)>,
    pub row_id: String,
    pub elems: (usize, usize),
}

fn write_member_set(f: &mut fmt::Formatter<'_>, members: &[(String, usize)]) -> fmt::Result {
    write!(f, "{{")?;
    for (k, (row, e)) in members.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{}:{}", row, e)?;
    }
    write!(f, "}}")
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for clash in &self.clashes {
            write!(f, "column ")?;
            write_member_set(f, &clash.members)?;
            writeln!(
                f,
                " holds row {} elements {} and {}",
                clash.row_id, clash.elems.0, clash.elems.1
            )?;
        }
        if let Some(cycle) = &self.order_cycle {
            write!(f, "candidate columns admit no order, cycle:")?;
            for col in cycle {
                write!(f, " ")?;
                write_member_set(f, col)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Result of transitive multiple alignment.
#[derive(Debug, Clone)]
pub enum MultialignOutcome {
    Aligned(Alignment),
    Violations(ViolationReport),
}

impl MultialignOutcome {
    pub fn alignment(&self) -> Option<&Alignment> {
        match self {
            MultialignOutcome::Aligned(al) => Some(al),
            MultialignOutcome::Violations(_) => None,
        }
    }
}

/// Builds the multiple alignment induced by closing a set of pairwise
/// relations transitively: the candidate columns are the connected
/// components of the union graph over all elements. Every relation must
/// satisfy (M) and (P). When the relation graph is a tree the result is
/// the unique induced alignment; on cyclic graphs the candidates are
/// validated and either a valid alignment or a violation report comes
/// back. No repair is attempted.
pub fn transitive_multialign(g: &RelationGraph) -> Result<MultialignOutcome, RelationError> {
    for e in g.edges() {
        e.check_m().map_err(PropertyFailure::into_error)?;
        e.check_p().map_err(PropertyFailure::into_error)?;
    }
    let rows = g.rows();
    let mut offset = vec![0usize; rows.len()];
    let mut total = 0;
    for (i, row) in rows.iter().enumerate() {
        offset[i] = total;
        total += row.len();
    }
    let row_of = |v: usize| -> (usize, usize) {
        let ri = (0..rows.len()).rfind(|&i| offset[i] <= v).unwrap();
        (ri, v - offset[ri])
    };

    let mut parent: Vec<usize> = (0..total).collect();
    for e in g.edges() {
        let li = rows.iter().position(|r| r.row_id() == e.left().row_id()).unwrap();
        let ri = rows.iter().position(|r| r.row_id() == e.right().row_id()).unwrap();
        for (i, j) in e.pairs() {
            let (a, b) = (find(&mut parent, offset[li] + i), find(&mut parent, offset[ri] + j));
            if a != b {
                parent[a] = b;
            }
        }
    }

    // Components in deterministic order: grouped by first appearance.
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut comp_of = vec![usize::MAX; total];
    for v in 0..total {
        let root = find(&mut parent, v);
        if comp_of[root] == usize::MAX {
            comp_of[root] = components.len();
            components.push(Vec::new());
        }
        components[comp_of[root]].push(v);
    }

    let mut clashes = Vec::new();
    for comp in &components {
        let mut per_row: Vec<(usize, usize)> = comp.iter().map(|&v| row_of(v)).collect();
        per_row.sort_unstable();
        for w in per_row.windows(2) {
            if w[0].0 == w[1].0 {
                clashes.push(ComponentClash {
                    members: per_row
                        .iter()
                        .map(|&(r, e)| (rows[r].row_id().to_string(), e))
                        .collect(),
                    row_id: rows[w[0].0].row_id().to_string(),
                    elems: (w[0].1, w[1].1),
                });
                break;
            }
        }
    }
    if !clashes.is_empty() {
        return Ok(MultialignOutcome::Violations(ViolationReport { clashes, order_cycle: None }));
    }

    let mut columns = Vec::new();
    for comp in &components {
        let entries: Vec<(usize, usize)> = comp.iter().map(|&v| row_of(v)).collect();
        columns.push(Column::aligned(entries)?);
    }
    match induce_column_order(rows, &columns) {
        Ok(order) => {
            let al = Alignment::new(rows.to_vec(), columns, order)?;
            Ok(MultialignOutcome::Aligned(al))
        }
        Err(AlignmentError::NoOrderExists { certificate }) => {
            let cycle = certificate
                .0
                .iter()
                .map(|&ci| {
                    columns[ci]
                        .entries()
                        .map(|(r, e)| (rows[r].row_id().to_string(), e))
                        .collect()
                })
                .collect();
            Ok(MultialignOutcome::Violations(ViolationReport {
                clashes: Vec::new(),
                order_cycle: Some(cycle),
            }))
        }
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::{validate_general, validate_recover};

    fn chain(id: &str, s: &str) -> Poset {
        Poset::from_sequence(id, s)
    }

    #[test]
    fn identity_relation_has_all_properties() {
        let p = Poset::new("a", 4, [(0, 2), (1, 2), (2, 3)], None).unwrap();
        let id = PairRelation::identity(&p);
        assert!(id.is_m());
        assert!(id.is_p());
        assert!(id.is_p_prime());
    }

    #[test]
    fn shared_endpoint_fails_m() {
        let a = chain("a", "xy");
        let b = chain("b", "xy");
        let r = PairRelation::new(a, b, [(0, 0), (0, 1)]).unwrap();
        match r.check_m().unwrap_err() {
            PropertyFailure::M { first, second } => {
                assert_eq!((first, second), ((0, 0), (0, 1)));
            }
            other => panic!("expected M failure, got {other:?}"),
        }
    }

    #[test]
    fn crossing_pairs_fail_p_and_p_prime() {
        let a = chain("a", "xy");
        let b = chain("b", "xy");
        let r = PairRelation::new(a, b, [(0, 1), (1, 0)]).unwrap();
        assert!(!r.is_p());
        match r.check_p_prime().unwrap_err() {
            PropertyFailure::PPrime { cycle } => assert_eq!(cycle.len(), 2),
            other => panic!("expected P' failure, got {other:?}"),
        }
    }

    #[test]
    fn composition_with_identity() {
        let a = chain("a", "xyz");
        let b = chain("b", "xy");
        let r = PairRelation::new(a.clone(), b.clone(), [(0, 0), (2, 1)]).unwrap();
        assert_eq!(compose(&r, &PairRelation::identity(&b)).unwrap(), r);
        assert_eq!(compose(&PairRelation::identity(&a), &r).unwrap(), r);
    }

    #[test]
    fn composition_requires_matching_middle() {
        let a = chain("a", "x");
        let b = chain("b", "x");
        let c = chain("c", "x");
        let r = PairRelation::new(a, b.clone(), [(0, 0)]).unwrap();
        let s = PairRelation::new(c, b, [(0, 0)]).unwrap();
        assert!(matches!(compose(&r, &s), Err(RelationError::MiddleMismatch { .. })));
    }

    #[test]
    fn composition_through_shared_row_matches_restriction() {
        // Two pairwise alignments sharing row A; composing B->A with
        // A->C gives exactly the matched columns of the B,C restriction.
        let ab = Alignment::from_gapped_rows(&[("A", "0000111110000"), ("B", "000011011----")])
            .unwrap();
        let ac = Alignment::from_gapped_rows(&[("A", "0000111110000"), ("C", "----100010000")])
            .unwrap();
        let r_ab = relation_from_alignment(&ab).unwrap();
        let r_ac = relation_from_alignment(&ac).unwrap();
        let r_bc = compose(&r_ab.reversed(), &r_ac).unwrap();
        let expected: Vec<(usize, usize)> = vec![(4, 0), (5, 1), (6, 2), (7, 3), (8, 4)];
        assert_eq!(r_bc.pair_vec(), expected);
        let bc = Alignment::from_gapped_rows(&[("B", "000011011----"), ("C", "----100010000")])
            .unwrap();
        assert_eq!(relation_from_alignment(&bc).unwrap().pair_vec(), expected);
    }

    #[test]
    fn composition_is_associative() {
        let w = chain("w", "xyzu");
        let x = chain("x", "xyz");
        let y = chain("y", "xyzw");
        let z = chain("z", "xy");
        let r = PairRelation::new(w.clone(), x.clone(), [(0, 0), (1, 1), (3, 2)]).unwrap();
        let s = PairRelation::new(x, y.clone(), [(0, 1), (2, 3)]).unwrap();
        let t = PairRelation::new(y, z, [(1, 0), (3, 1)]).unwrap();
        let left = compose(&compose(&r, &s).unwrap(), &t).unwrap();
        let right = compose(&r, &compose(&s, &t).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn empty_relation_extends_to_all_indel_columns() {
        let a = chain("a", "xy");
        let b = chain("b", "zw");
        let r = PairRelation::new(a, b, []).unwrap();
        let al = alignment_from_relation(&r).unwrap();
        assert_eq!(al.n_columns(), 4);
        // Order only within rows.
        for p in 0..4 {
            for q in 0..4 {
                if al.column_order().lt(p, q) {
                    let rp = al.columns()[p].entries().next().unwrap().0;
                    let rq = al.columns()[q].entries().next().unwrap().0;
                    assert_eq!(rp, rq);
                }
            }
        }
        assert!(validate_recover(&al).passed());
    }

    #[test]
    fn ungapped_two_row_alignment_gives_m_and_p_relation() {
        let al = Alignment::from_gapped_rows(&[("B", "000011011"), ("C", "100010000")]).unwrap();
        let r = relation_from_alignment(&al).unwrap();
        assert_eq!(r.len(), 9);
        assert!(r.is_m());
        assert!(r.is_p());
    }

    #[test]
    fn relation_alignment_round_trip() {
        let a = Poset::new("a", 4, [(0, 1), (0, 2), (1, 3), (2, 3)], None).unwrap();
        let b = chain("b", "xyz");
        let r = PairRelation::new(a, b, [(0, 0), (3, 2)]).unwrap();
        assert!(r.is_m() && r.is_p_prime());
        let al = alignment_from_relation(&r).unwrap();
        assert!(validate_general(&al).passed());
        let back = relation_from_alignment(&al).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn star_of_identities_gives_ungapped_alignment() {
        let a = chain("a", "xyz");
        let b = chain("b", "xyz");
        let c = chain("c", "xyz");
        let mut g = RelationGraph::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
        g.add(PairRelation::new(a.clone(), b.clone(), [(0, 0), (1, 1), (2, 2)]).unwrap())
            .unwrap();
        g.add(PairRelation::new(a, c, [(0, 0), (1, 1), (2, 2)]).unwrap()).unwrap();
        assert!(g.is_tree());
        let outcome = transitive_multialign(&g).unwrap();
        let al = outcome.alignment().expect("tree case must align");
        assert_eq!(al.n_columns(), 3);
        assert!(validate_recover(al).passed());
        let rendered = al.render_gapped().unwrap();
        for (_, row) in rendered {
            assert_eq!(row, "xyz");
        }
    }

    #[test]
    fn cyclic_graph_with_clashing_matches_is_reported() {
        // Row c reaches two different b elements through the cycle.
        let a = chain("a", "AC");
        let b = chain("b", "BC");
        let c = chain("c", "AB");
        let mut g = RelationGraph::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
        g.add(PairRelation::new(a.clone(), b.clone(), [(0, 0), (1, 1)]).unwrap()).unwrap();
        g.add(PairRelation::new(b, c.clone(), [(0, 1)]).unwrap()).unwrap();
        g.add(PairRelation::new(a, c, [(0, 0)]).unwrap()).unwrap();
        assert!(!g.is_tree());
        let outcome = transitive_multialign(&g).unwrap();
        match outcome {
            MultialignOutcome::Violations(report) => {
                assert!(!report.clashes.is_empty());
                assert_eq!(report.clashes[0].row_id, "c");
            }
            MultialignOutcome::Aligned(_) => panic!("expected a violation report"),
        }
    }

    #[test]
    fn path_graph_matches_composed_relation() {
        let a = chain("a", "xy");
        let b = chain("b", "xyz");
        let c = chain("c", "yz");
        let r_ab = PairRelation::new(a.clone(), b.clone(), [(0, 0), (1, 1)]).unwrap();
        let r_bc = PairRelation::new(b.clone(), c.clone(), [(1, 0), (2, 1)]).unwrap();
        let mut g = RelationGraph::new(vec![a.clone(), b, c.clone()]).unwrap();
        g.add(r_ab.clone()).unwrap();
        g.add(r_bc.clone()).unwrap();
        assert!(g.is_tree());
        let al = transitive_multialign(&g).unwrap().alignment().unwrap().clone();
        assert!(validate_recover(&al).passed());
        // The a-c matches of the multiple alignment are exactly the
        // composition of the two input relations.
        let ac = crate::decompose::restrict(&al, &["a", "c"]).unwrap();
        let r_ac = relation_from_alignment(&ac).unwrap();
        assert_eq!(r_ac.pair_vec(), compose(&r_ab, &r_bc).unwrap().pair_vec());
        // And restricting to each edge recovers the edge's alignment.
        let ab = crate::decompose::restrict(&al, &["a", "b"]).unwrap();
        assert!(ab.is_isomorphic(&alignment_from_relation(&r_ab).unwrap()));
    }

    #[test]
    fn property_violation_is_rejected_up_front() {
        let a = chain("a", "xy");
        let b = chain("b", "xy");
        let mut g = RelationGraph::new(vec![a.clone(), b.clone()]).unwrap();
        g.add(PairRelation::new(a, b, [(0, 1), (1, 0)]).unwrap()).unwrap();
        assert!(matches!(
            transitive_multialign(&g),
            Err(RelationError::PropertyViolation { property: "P", .. })
        ));
    }
}

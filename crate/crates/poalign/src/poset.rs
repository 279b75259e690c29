//! Finite posets over named rows, plus the order-theoretic primitives
//! the aligners are built from: antichains, bottom sets and the
//! bijection between them.
//!
//! A `Poset` is immutable after construction. Reachability is stored
//! dense and recomputed only at build time; cover edges are kept
//! transitively reduced.

use std::fmt::Write as _;

use thiserror::Error;

use crate::order::{CycleCertificate, StrictOrder};

/// Default cap on the number of antichains [`Poset::enumerate_antichains`]
/// will emit before giving up.
pub const DEFAULT_ANTICHAIN_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("row {row_id}: relation closure contains a cycle: {cycle}")]
    Cycle { row_id: String, cycle: CycleCertificate },
    #[error("row {row_id}: element index {index} out of range (n={n})")]
    IndexOutOfRange { row_id: String, index: usize, n: usize },
    #[error("row {row_id}: {got} labels supplied for {n} elements")]
    LabelCount { row_id: String, got: usize, n: usize },
    #[error("row {row_id}: elements {a} and {b} are comparable, not an antichain")]
    NotAntichain { row_id: String, a: usize, b: usize },
    #[error("row {row_id}: {member} is in the set but its predecessor {below} is not")]
    NotDownwardClosed { row_id: String, member: usize, below: usize },
    #[error("antichain enumeration exceeded cap of {cap}")]
    StateSpaceExceeded { cap: usize },
}

/// A finite strict partial order over `n` elements of one named row,
/// with optional symbol labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    row_id: String,
    labels: Option<Vec<char>>,
    order: StrictOrder,
}

/// A set of pairwise incomparable elements of some poset, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Antichain {
    members: Vec<usize>,
}

/// A downward closed subset of some poset, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BottomSet {
    members: Vec<usize>,
}

impl Antichain {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl BottomSet {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl Poset {
    /// Builds a poset from an arbitrary relation. The pairs need not be
    /// reduced or transitively closed; reachability becomes the closure
    /// and the stored covers its reduction.
    pub fn new(
        row_id: impl Into<String>,
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        labels: Option<Vec<char>>,
    ) -> Result<Self, PosetError> {
        let row_id = row_id.into();
        if let Some(ref ls) = labels {
            if ls.len() != n {
                return Err(PosetError::LabelCount { row_id, got: ls.len(), n });
            }
        }
        let mut checked = Vec::new();
        for (i, j) in pairs {
            for idx in [i, j] {
                if idx >= n {
                    return Err(PosetError::IndexOutOfRange { row_id, index: idx, n });
                }
            }
            checked.push((i, j));
        }
        let order = StrictOrder::from_pairs(n, checked)
            .map_err(|cycle| PosetError::Cycle { row_id: row_id.clone(), cycle })?;
        Ok(Poset { row_id, labels, order })
    }

    /// The total order `0 < 1 < ... < n-1`.
    pub fn chain(row_id: impl Into<String>, n: usize, labels: Option<Vec<char>>) -> Result<Self, PosetError> {
        let row_id = row_id.into();
        if let Some(ref ls) = labels {
            if ls.len() != n {
                return Err(PosetError::LabelCount { row_id, got: ls.len(), n });
            }
        }
        Ok(Poset { row_id, labels, order: StrictOrder::chain(n) })
    }

    /// A chain labelled by the characters of `symbols`.
    pub fn from_sequence(row_id: impl Into<String>, symbols: &str) -> Self {
        let labels: Vec<char> = symbols.chars().collect();
        let n = labels.len();
        Poset { row_id: row_id.into(), labels: Some(labels), order: StrictOrder::chain(n) }
    }

    pub fn row_id(&self) -> &str {
        &self.row_id
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn label(&self, i: usize) -> Option<char> {
        self.labels.as_ref().map(|ls| ls[i])
    }

    pub fn labels(&self) -> Option<&[char]> {
        self.labels.as_deref()
    }

    pub fn order(&self) -> &StrictOrder {
        &self.order
    }

    /// `i` strictly precedes `j`.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.order.lt(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.order.comparable(i, j)
    }

    pub fn cover_edges(&self) -> &[(usize, usize)] {
        self.order.covers()
    }

    pub fn is_chain(&self) -> bool {
        self.order.is_chain()
    }

    /// Validates `members` as an antichain of this poset.
    pub fn antichain(&self, mut members: Vec<usize>) -> Result<Antichain, PosetError> {
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            if m >= self.len() {
                return Err(PosetError::IndexOutOfRange {
                    row_id: self.row_id.clone(),
                    index: m,
                    n: self.len(),
                });
            }
        }
        for (ai, &a) in members.iter().enumerate() {
            for &b in &members[ai + 1..] {
                if self.comparable(a, b) {
                    return Err(PosetError::NotAntichain { row_id: self.row_id.clone(), a, b });
                }
            }
        }
        Ok(Antichain { members })
    }

    /// Validates `members` as a downward closed set of this poset.
    pub fn bottom_set(&self, mut members: Vec<usize>) -> Result<BottomSet, PosetError> {
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            if m >= self.len() {
                return Err(PosetError::IndexOutOfRange {
                    row_id: self.row_id.clone(),
                    index: m,
                    n: self.len(),
                });
            }
        }
        for &m in &members {
            for below in 0..self.len() {
                if self.lt(below, m) && !members.contains(&below) {
                    return Err(PosetError::NotDownwardClosed {
                        row_id: self.row_id.clone(),
                        member: m,
                        below,
                    });
                }
            }
        }
        Ok(BottomSet { members })
    }

    /// Maximal elements of a bottom set. The result is an antichain;
    /// the empty bottom set yields the empty antichain.
    pub fn suprema(&self, b: &BottomSet) -> Antichain {
        Antichain { members: self.order.maximal_in(&b.members) }
    }

    /// Downward closure of an antichain: all elements `<=` some member.
    /// Inverse of [`Poset::suprema`].
    pub fn bottom_set_of(&self, a: &Antichain) -> BottomSet {
        let mut members: Vec<usize> = (0..self.len())
            .filter(|&p| a.members.iter().any(|&u| p == u || self.lt(p, u)))
            .collect();
        members.sort_unstable();
        BottomSet { members }
    }

    /// Every antichain of the poset, including the empty one, in
    /// lexicographic order of the sorted member lists.
    pub fn enumerate_antichains(&self) -> Result<Vec<Antichain>, PosetError> {
        self.enumerate_antichains_capped(DEFAULT_ANTICHAIN_CAP)
    }

    pub fn enumerate_antichains_capped(&self, cap: usize) -> Result<Vec<Antichain>, PosetError> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.extend_antichain(0, &mut current, &mut out, cap)?;
        Ok(out)
    }

    fn extend_antichain(
        &self,
        from: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Antichain>,
        cap: usize,
    ) -> Result<(), PosetError> {
        if out.len() >= cap {
            return Err(PosetError::StateSpaceExceeded { cap });
        }
        out.push(Antichain { members: current.clone() });
        for next in from..self.len() {
            if current.iter().all(|&m| !self.comparable(m, next)) {
                current.push(next);
                self.extend_antichain(next + 1, current, out, cap)?;
                current.pop();
            }
        }
        Ok(())
    }

    /// A deterministic linear extension: smallest available index first.
    pub fn linear_extension(&self) -> Vec<usize> {
        self.order.topo_order()
    }

    /// The Hasse diagram in DOT format, one node per element.
    pub fn hasse_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", self.row_id);
        let _ = writeln!(s, "  rankdir=LR;");
        for i in 0..self.len() {
            match self.label(i) {
                Some(c) => {
                    let _ = writeln!(s, "  n{} [label=\"{}:{}\"];", i, i, c);
                }
                None => {
                    let _ = writeln!(s, "  n{} [label=\"{}\"];", i, i);
                }
            }
        }
        for &(i, j) in self.cover_edges() {
            let _ = writeln!(s, "  n{} -> n{};", i, j);
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v_poset() -> Poset {
        // 0 < 2 and 1 < 2.
        Poset::new("v", 3, [(0, 2), (1, 2)], None).unwrap()
    }

    #[test]
    fn build_chain_from_pairs() {
        let p = Poset::new("a", 3, [(0, 1), (1, 2)], None).unwrap();
        assert_eq!(p.cover_edges(), &[(0, 1), (1, 2)]);
        assert!(p.lt(0, 2));
    }

    #[test]
    fn closure_input_reduces_to_same_poset() {
        let p1 = Poset::new("a", 3, [(0, 1), (1, 2)], None).unwrap();
        let p2 = Poset::new("a", 3, [(0, 1), (1, 2), (0, 2)], None).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn cycle_is_reported() {
        let err = Poset::new("a", 2, [(0, 1), (1, 0)], None).unwrap_err();
        assert!(matches!(err, PosetError::Cycle { .. }));
    }

    #[test]
    fn out_of_range_is_reported() {
        let err = Poset::new("a", 2, [(0, 5)], None).unwrap_err();
        assert!(matches!(err, PosetError::IndexOutOfRange { index: 5, .. }));
    }

    #[test]
    fn chain_poset_sizes() {
        let empty = Poset::chain("a", 0, None).unwrap();
        assert_eq!(empty.len(), 0);
        let single = Poset::chain("a", 1, None).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single.cover_edges().is_empty());
        let four = Poset::chain("a", 4, None).unwrap();
        assert_eq!(four.cover_edges().len(), 3);
        assert_eq!(four.order().reach_count(), 6);
    }

    #[test]
    fn suprema_of_chain_prefix() {
        let c = Poset::chain("a", 5, None).unwrap();
        let b = c.bottom_set(vec![0, 1, 2]).unwrap();
        assert_eq!(c.suprema(&b).members(), &[2]);
    }

    #[test]
    fn suprema_of_antichain_poset() {
        let p = Poset::new("a", 2, [], None).unwrap();
        let b = p.bottom_set(vec![0, 1]).unwrap();
        assert_eq!(p.suprema(&b).members(), &[0, 1]);
    }

    #[test]
    fn suprema_of_v_legs() {
        let p = v_poset();
        let b = p.bottom_set(vec![0, 1]).unwrap();
        assert_eq!(p.suprema(&b).members(), &[0, 1]);
    }

    #[test]
    fn bottom_set_of_chain_element() {
        let c = Poset::chain("a", 5, None).unwrap();
        let a = c.antichain(vec![2]).unwrap();
        assert_eq!(c.bottom_set_of(&a).members(), &[0, 1, 2]);
    }

    #[test]
    fn bottom_set_of_empty_antichain() {
        let c = Poset::chain("a", 3, None).unwrap();
        let a = c.antichain(vec![]).unwrap();
        assert!(c.bottom_set_of(&a).is_empty());
    }

    #[test]
    fn bottom_set_of_v_top() {
        let p = v_poset();
        let a = p.antichain(vec![2]).unwrap();
        assert_eq!(p.bottom_set_of(&a).members(), &[0, 1, 2]);
    }

    #[test]
    fn comparable_members_rejected_as_antichain() {
        let c = Poset::chain("a", 3, None).unwrap();
        assert!(matches!(c.antichain(vec![0, 2]), Err(PosetError::NotAntichain { .. })));
    }

    #[test]
    fn not_downward_closed_rejected() {
        let c = Poset::chain("a", 3, None).unwrap();
        assert!(matches!(c.bottom_set(vec![1]), Err(PosetError::NotDownwardClosed { .. })));
    }

    #[test]
    fn antichain_counts() {
        let chain = Poset::chain("a", 3, None).unwrap();
        assert_eq!(chain.enumerate_antichains().unwrap().len(), 4);
        let free = Poset::new("a", 3, [], None).unwrap();
        assert_eq!(free.enumerate_antichains().unwrap().len(), 8);
        let v = v_poset();
        let chains: Vec<Vec<usize>> = v
            .enumerate_antichains()
            .unwrap()
            .iter()
            .map(|a| a.members().to_vec())
            .collect();
        assert_eq!(chains, vec![vec![], vec![0], vec![0, 1], vec![1], vec![2]]);
    }

    #[test]
    fn antichain_cap_is_enforced() {
        let free = Poset::new("a", 10, [], None).unwrap();
        let err = free.enumerate_antichains_capped(100).unwrap_err();
        assert_eq!(err, PosetError::StateSpaceExceeded { cap: 100 });
    }

    #[test]
    fn linear_extension_cases() {
        let chain = Poset::chain("a", 4, None).unwrap();
        assert_eq!(chain.linear_extension(), vec![0, 1, 2, 3]);
        let free = Poset::new("a", 2, [], None).unwrap();
        assert_eq!(free.linear_extension(), vec![0, 1]);
        let v = v_poset();
        assert_eq!(v.linear_extension(), vec![0, 1, 2]);
    }

    /// suprema and bottom_set_of are mutually inverse bijections,
    /// checked by enumerating all subsets for small posets.
    #[test]
    fn suprema_bottom_set_bijection() {
        let posets = vec![
            Poset::chain("a", 5, None).unwrap(),
            Poset::new("a", 4, [], None).unwrap(),
            Poset::new("a", 6, [(0, 2), (1, 2), (2, 3), (2, 4), (4, 5)], None).unwrap(),
        ];
        for p in posets {
            let n = p.len();
            let mut bottom_sets = Vec::new();
            for mask in 0u32..(1 << n) {
                let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                if let Ok(b) = p.bottom_set(members) {
                    bottom_sets.push(b);
                }
            }
            let antichains = p.enumerate_antichains().unwrap();
            assert_eq!(bottom_sets.len(), antichains.len());
            for b in &bottom_sets {
                let a = p.suprema(b);
                assert_eq!(&p.bottom_set_of(&a), b);
            }
            for a in &antichains {
                let b = p.bottom_set_of(a);
                assert_eq!(&p.suprema(&b), a);
            }
        }
    }

    #[test]
    fn labels_must_cover_all_elements() {
        let err = Poset::new("a", 3, [], Some(vec!['x'])).unwrap_err();
        assert!(matches!(err, PosetError::LabelCount { .. }));
    }
}

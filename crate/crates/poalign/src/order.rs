//! Dense strict partial orders over `0..n`.
//!
//! This is the storage backbone shared by row posets, alignment column
//! orders and block orders: reachability is kept as a dense boolean
//! matrix, cover edges (the transitive reduction) are derived once at
//! construction time. Values are immutable after they are built.

use std::fmt;

/// A directed cycle found while closing a relation that was supposed to
/// be a strict partial order. Nodes are listed in walk order; the first
/// node is repeated implicitly (`c0 -> c1 -> ... -> ck -> c0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCertificate(pub Vec<usize>);

impl fmt::Display for CycleCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "{} < ", v)?;
        }
        match self.0.first() {
            Some(v) => write!(f, "{}", v),
            None => write!(f, "(empty cycle)"),
        }
    }
}

/// A strict partial order on `0..n`, stored as the full reachability
/// matrix plus the cover (Hasse) edges of its transitive reduction.
#[derive(Clone, PartialEq, Eq)]
pub struct StrictOrder {
    n: usize,
    reach: Vec<bool>,
    covers: Vec<(usize, usize)>,
}

impl StrictOrder {
    /// The empty order: all elements mutually incomparable.
    pub fn empty(n: usize) -> Self {
        StrictOrder { n, reach: vec![false; n * n], covers: Vec::new() }
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let mut reach = vec![false; n * n];
        let mut covers = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                reach[i * n + j] = true;
            }
            if i + 1 < n {
                covers.push((i, i + 1));
            }
        }
        StrictOrder { n, reach, covers }
    }

    /// Builds the order whose reachability is the transitive closure of
    /// `pairs`. The input need not be reduced or closed. Fails with a
    /// cycle certificate if the closure would relate any element to
    /// itself.
    ///
    /// Indices must be `< n`; out-of-range pairs are the caller's
    /// responsibility to reject (callers produce friendlier errors).
    pub fn from_pairs(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CycleCertificate> {
        let mut direct = vec![false; n * n];
        for (i, j) in pairs {
            assert!(i < n && j < n, "pair ({}, {}) out of range for n={}", i, j, n);
            if i == j {
                return Err(CycleCertificate(vec![i]));
            }
            direct[i * n + j] = true;
        }
        let mut reach = direct.clone();
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if reach[i * n + k] {
                    for j in 0..n {
                        if reach[k * n + j] {
                            reach[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            if reach[i * n + i] {
                return Err(find_cycle(n, &direct));
            }
        }
        let covers = reduction(n, &reach);
        Ok(StrictOrder { n, reach, covers })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `i < j` in the order.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.reach[i * self.n + j]
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.lt(i, j) || self.lt(j, i)
    }

    /// Cover edges (the transitive reduction), sorted ascending.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// All pairs `(i, j)` with `i < j` in the order, sorted ascending.
    pub fn reach_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.reach[i * self.n + j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn reach_count(&self) -> usize {
        self.reach.iter().filter(|&&b| b).count()
    }

    /// True if the order is total.
    pub fn is_chain(&self) -> bool {
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.comparable(i, j) {
                    return false;
                }
            }
        }
        true
    }

    /// Elements with no successor.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| (0..self.n).all(|j| !self.lt(i, j)))
            .collect()
    }

    /// Elements with no predecessor.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| (0..self.n).all(|j| !self.lt(j, i)))
            .collect()
    }

    /// Maximal elements among `members` (no other member above them).
    pub fn maximal_in(&self, members: &[usize]) -> Vec<usize> {
        members
            .iter()
            .copied()
            .filter(|&i| members.iter().all(|&j| !self.lt(i, j)))
            .collect()
    }

    /// Deterministic linear extension: repeatedly emits the smallest
    /// index whose predecessors have all been emitted.
    pub fn topo_order(&self) -> Vec<usize> {
        let n = self.n;
        let mut emitted = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .find(|&i| {
                    !emitted[i] && (0..n).all(|j| emitted[j] || !self.lt(j, i))
                })
                .expect("strict order is acyclic, a minimal element exists");
            emitted[next] = true;
            order.push(next);
        }
        order
    }

    /// The order induced on `keep`, reindexed so that `keep[k]` becomes
    /// element `k` of the result.
    pub fn restrict(&self, keep: &[usize]) -> StrictOrder {
        let m = keep.len();
        let mut reach = vec![false; m * m];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if self.lt(i, j) {
                    reach[a * m + b] = true;
                }
            }
        }
        let covers = reduction(m, &reach);
        StrictOrder { n: m, reach, covers }
    }

    /// True when every related pair of `self` is related in `other`.
    pub fn subrelation_of(&self, other: &StrictOrder) -> bool {
        debug_assert_eq!(self.n, other.n);
        (0..self.n * self.n).all(|idx| !self.reach[idx] || other.reach[idx])
    }
}

impl fmt::Debug for StrictOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StrictOrder")
            .field("n", &self.n)
            .field("covers", &self.covers)
            .finish()
    }
}

/// Transitive reduction of an already transitively closed acyclic
/// relation: an edge i->j is a cover iff no k lies strictly between.
fn reduction(n: usize, reach: &[bool]) -> Vec<(usize, usize)> {
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if reach[i * n + j]
                && !(0..n).any(|k| reach[i * n + k] && reach[k * n + j])
            {
                covers.push((i, j));
            }
        }
    }
    covers.sort_unstable();
    covers
}

/// Locates a directed cycle in `direct` (which is known to have one).
/// Deterministic: starts the search from the smallest index.
fn find_cycle(n: usize, direct: &[bool]) -> CycleCertificate {
    // Colors: 0 unvisited, 1 on stack, 2 done.
    let mut color = vec![0u8; n];
    let mut stack: Vec<usize> = Vec::new();

    fn dfs(
        v: usize,
        n: usize,
        direct: &[bool],
        color: &mut [u8],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        color[v] = 1;
        stack.push(v);
        for w in 0..n {
            if direct[v * n + w] {
                if color[w] == 1 {
                    let start = stack.iter().position(|&x| x == w).unwrap();
                    return Some(stack[start..].to_vec());
                }
                if color[w] == 0 {
                    if let Some(c) = dfs(w, n, direct, color, stack) {
                        return Some(c);
                    }
                }
            }
        }
        stack.pop();
        color[v] = 2;
        None
    }

    for v in 0..n {
        if color[v] == 0 {
            if let Some(c) = dfs(v, n, direct, &mut color, &mut stack) {
                return CycleCertificate(c);
            }
        }
    }
    unreachable!("find_cycle called on an acyclic relation")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_reduction_of_chain() {
        let o = StrictOrder::from_pairs(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(o.covers(), &[(0, 1), (1, 2)]);
        assert!(o.lt(0, 2));
        assert_eq!(o.reach_count(), 3);
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = StrictOrder::from_pairs(2, [(0, 1), (1, 0)]).unwrap_err();
        assert_eq!(err.0.len(), 2);
    }

    #[test]
    fn self_loop_is_rejected() {
        let err = StrictOrder::from_pairs(1, [(0, 0)]).unwrap_err();
        assert_eq!(err.0, vec![0]);
    }

    #[test]
    fn rebuild_from_covers_is_identity() {
        let o = StrictOrder::from_pairs(5, [(0, 2), (1, 2), (2, 3), (2, 4), (0, 4)]).unwrap();
        let rebuilt = StrictOrder::from_pairs(5, o.covers().to_vec()).unwrap();
        assert_eq!(o, rebuilt);
    }

    #[test]
    fn topo_order_prefers_small_indices() {
        let o = StrictOrder::from_pairs(3, [(0, 2), (1, 2)]).unwrap();
        assert_eq!(o.topo_order(), vec![0, 1, 2]);
        let free = StrictOrder::empty(2);
        assert_eq!(free.topo_order(), vec![0, 1]);
    }

    #[test]
    fn restrict_reindexes() {
        let o = StrictOrder::chain(4);
        let r = o.restrict(&[1, 3]);
        assert_eq!(r.len(), 2);
        assert!(r.lt(0, 1));
        assert!(!r.lt(1, 0));
    }

    #[test]
    fn topo_order_respects_reach() {
        let o = StrictOrder::from_pairs(6, [(5, 0), (0, 3), (2, 3), (4, 1)]).unwrap();
        let t = o.topo_order();
        let pos: Vec<usize> = (0..6).map(|i| t.iter().position(|&x| x == i).unwrap()).collect();
        for (i, j) in o.reach_pairs() {
            assert!(pos[i] < pos[j]);
        }
    }
}

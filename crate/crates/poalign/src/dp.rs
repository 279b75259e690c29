//! Score-optimal alignment construction.
//!
//! Four aligners share this module:
//!
//! * [`align_pair_cross`] maximises the column-additive score over all
//!   alignments of two posets, by the bottom-set recursion: a partial
//!   alignment state is a pair of bottom sets, its last column removes a
//!   supremum from either or both sides, and states are memoised through
//!   the bottom-set/antichain bijection. Virtual source and sink are
//!   implicit in the full-set and empty-set states.
//! * [`align_strings_nw`] is the classic quadratic string DP, kept as an
//!   independent code path.
//! * [`align_pair_recover`] maximises over relations that preserve
//!   comparability and incomparability both ways, by an exact candidate
//!   set branch and bound: compatible candidate pairs are kept in label
//!   classes that refine as matches are chosen, and class bounds prune
//!   the search.
//! * [`align_seq_to_poset`] aligns a totally ordered row to a poset; the
//!   matched poset elements follow one source-to-sink path of the Hasse
//!   diagram.
//!
//! [`progressive_align`] folds a guide tree over any of the pairwise
//! engines, treating intermediate alignments as posets of columns with
//! sum-of-pairs profile scoring.

use std::collections::HashMap;

use thiserror::Error;

use crate::alignment::{Alignment, AlignmentError, Column};
use crate::decompose::recombine;
use crate::order::StrictOrder;
use crate::poset::Poset;
use crate::scoring::ScoringScheme;

/// Default cap on memoised bottom-set pairs in [`align_pair_cross`].
pub const DEFAULT_STATE_CAP: usize = 1_000_000;
/// Default cap on search nodes in [`align_pair_recover`].
pub const DEFAULT_NODE_CAP: usize = 2_000_000;

/// The antichain-pair cap, read from `POALIGN_STATE_CAP` when set.
pub fn state_cap() -> usize {
    std::env::var("POALIGN_STATE_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_STATE_CAP)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DpError {
    #[error("state space exceeded: more than {cap} antichain pairs")]
    StateSpaceExceeded { cap: usize },
    #[error("search budget exceeded: more than {cap} nodes")]
    SearchBudgetExceeded { cap: usize },
    #[error("row {row_id} must be totally ordered")]
    RowNotChain { row_id: String },
    #[error("poset has {n} elements, the aligner supports at most {max}")]
    TooManyElements { n: usize, max: usize },
    #[error("bad guide tree: {reason}")]
    BadGuideTree { reason: String },
    #[error(transparent)]
    Model(#[from] AlignmentError),
}

/// Column scores for one pairwise DP run. Implementations score element
/// pairs and per-side gaps; the engines are generic over this so plain
/// posets and profile columns run through the same recursions.
pub trait PairScorer {
    fn pair(&self, left: usize, right: usize) -> i64;
    fn gap_left(&self, left: usize) -> i64;
    fn gap_right(&self, right: usize) -> i64;
}

/// Scores poset elements by their symbol labels.
pub struct LabelScorer<'a> {
    pub left: &'a Poset,
    pub right: &'a Poset,
    pub scheme: &'a ScoringScheme,
}

impl PairScorer for LabelScorer<'_> {
    fn pair(&self, left: usize, right: usize) -> i64 {
        self.scheme.symbol_score(self.left.label(left), self.right.label(right))
    }

    fn gap_left(&self, _left: usize) -> i64 {
        self.scheme.gap_score
    }

    fn gap_right(&self, _right: usize) -> i64 {
        self.scheme.gap_score
    }
}

/// Sum-of-pairs scores for aligning two alignments column against
/// column: every left row is paired with every right row; symbol-gap
/// slots cost a gap and gap-gap slots are free.
pub struct ProfileScorer<'a> {
    pub left: &'a Alignment,
    pub right: &'a Alignment,
    pub scheme: &'a ScoringScheme,
}

impl ProfileScorer<'_> {
    fn left_slot(&self, col: usize, row: usize) -> Option<Option<char>> {
        self.left.columns()[col].get(row).map(|e| self.left.rows()[row].label(e))
    }

    fn right_slot(&self, col: usize, row: usize) -> Option<Option<char>> {
        self.right.columns()[col].get(row).map(|e| self.right.rows()[row].label(e))
    }
}

impl PairScorer for ProfileScorer<'_> {
    fn pair(&self, left: usize, right: usize) -> i64 {
        let mut total = 0;
        for r1 in 0..self.left.n_rows() {
            for r2 in 0..self.right.n_rows() {
                total += self.scheme.slot_score(self.left_slot(left, r1), self.right_slot(right, r2));
            }
        }
        total
    }

    fn gap_left(&self, left: usize) -> i64 {
        self.left.columns()[left].len() as i64
            * self.right.n_rows() as i64
            * self.scheme.gap_score
    }

    fn gap_right(&self, right: usize) -> i64 {
        self.right.columns()[right].len() as i64
            * self.left.n_rows() as i64
            * self.scheme.gap_score
    }
}

/// One emitted column of a pairwise run: left element, right element,
/// or both.
type ColSpec = (Option<usize>, Option<usize>);

const MAX_ELEMENTS: usize = 127;

struct CrossDp<'a, S: PairScorer> {
    left_tie: &'a str,
    right_tie: &'a str,
    succ_left: Vec<u128>,
    succ_right: Vec<u128>,
    scorer: &'a S,
    memo: HashMap<(u128, u128), i64>,
    cap: usize,
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Match(usize, usize),
    GapLeft(usize),
    GapRight(usize),
}

impl<'a, S: PairScorer> CrossDp<'a, S> {
    fn new(
        left: &'a StrictOrder,
        right: &'a StrictOrder,
        left_tie: &'a str,
        right_tie: &'a str,
        scorer: &'a S,
        cap: usize,
    ) -> Result<Self, DpError> {
        for order in [left, right] {
            if order.len() > MAX_ELEMENTS {
                return Err(DpError::TooManyElements { n: order.len(), max: MAX_ELEMENTS });
            }
        }
        let succ = |o: &StrictOrder| -> Vec<u128> {
            (0..o.len())
                .map(|i| (0..o.len()).filter(|&j| o.lt(i, j)).fold(0u128, |m, j| m | (1 << j)))
                .collect()
        };
        Ok(CrossDp {
            left_tie,
            right_tie,
            succ_left: succ(left),
            succ_right: succ(right),
            scorer,
            memo: HashMap::new(),
            cap,
        })
    }

    fn full(n: usize) -> u128 {
        if n == 0 {
            0
        } else {
            (!0u128) >> (128 - n)
        }
    }

    /// Suprema of a bottom set: members with no member above them.
    fn sup(mask: u128, succ: &[u128]) -> Vec<usize> {
        let mut out = Vec::new();
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if succ[i] & mask == 0 {
                out.push(i);
            }
        }
        out
    }

    fn best(&mut self, p: u128, q: u128) -> Result<i64, DpError> {
        if p == 0 && q == 0 {
            return Ok(0);
        }
        if let Some(&v) = self.memo.get(&(p, q)) {
            return Ok(v);
        }
        if self.memo.len() >= self.cap {
            return Err(DpError::StateSpaceExceeded { cap: self.cap });
        }
        // Reserve the state before recursing so the cap also counts the
        // states currently being expanded.
        self.memo.insert((p, q), i64::MIN);
        let sup_p = Self::sup(p, &self.succ_left);
        let sup_q = Self::sup(q, &self.succ_right);
        let mut best = i64::MIN;
        for &a in &sup_p {
            for &b in &sup_q {
                let v = self.scorer.pair(a, b) + self.best(p & !(1 << a), q & !(1 << b))?;
                best = best.max(v);
            }
        }
        for &a in &sup_p {
            let v = self.scorer.gap_left(a) + self.best(p & !(1 << a), q)?;
            best = best.max(v);
        }
        for &b in &sup_q {
            let v = self.scorer.gap_right(b) + self.best(p, q & !(1 << b))?;
            best = best.max(v);
        }
        self.memo.insert((p, q), best);
        Ok(best)
    }

    /// Deterministic preference among equally scoring steps: matches
    /// first, then the column whose sorted (row id, element) entries are
    /// smallest. Keying on row ids makes the choice covariant under
    /// swapping the two inputs.
    fn step_key(&self, step: &Step) -> (u8, Vec<(&'a str, usize)>) {
        match *step {
            Step::Match(a, b) => {
                let mut v = vec![(self.left_tie, a), (self.right_tie, b)];
                v.sort_unstable();
                (0, v)
            }
            Step::GapLeft(a) => (1, vec![(self.left_tie, a)]),
            Step::GapRight(b) => (1, vec![(self.right_tie, b)]),
        }
    }

    fn traceback(&mut self, mut p: u128, mut q: u128) -> Result<Vec<ColSpec>, DpError> {
        let mut cols = Vec::new();
        while p != 0 || q != 0 {
            let target = self.best(p, q)?;
            let sup_p = Self::sup(p, &self.succ_left);
            let sup_q = Self::sup(q, &self.succ_right);
            let mut steps: Vec<Step> = Vec::new();
            for &a in &sup_p {
                for &b in &sup_q {
                    steps.push(Step::Match(a, b));
                }
            }
            for &a in &sup_p {
                steps.push(Step::GapLeft(a));
            }
            for &b in &sup_q {
                steps.push(Step::GapRight(b));
            }
            let mut chosen: Option<Step> = None;
            for step in steps {
                let value = match step {
                    Step::Match(a, b) => {
                        self.scorer.pair(a, b) + self.best(p & !(1 << a), q & !(1 << b))?
                    }
                    Step::GapLeft(a) => self.scorer.gap_left(a) + self.best(p & !(1 << a), q)?,
                    Step::GapRight(b) => self.scorer.gap_right(b) + self.best(p, q & !(1 << b))?,
                };
                if value != target {
                    continue;
                }
                let better = match &chosen {
                    None => true,
                    Some(current) => self.step_key(&step) < self.step_key(current),
                };
                if better {
                    chosen = Some(step);
                }
            }
            let step = chosen.expect("an optimal step exists");
            match step {
                Step::Match(a, b) => {
                    cols.push((Some(a), Some(b)));
                    p &= !(1 << a);
                    q &= !(1 << b);
                }
                Step::GapLeft(a) => {
                    cols.push((Some(a), None));
                    p &= !(1 << a);
                }
                Step::GapRight(b) => {
                    cols.push((None, Some(b)));
                    q &= !(1 << b);
                }
            }
        }
        cols.reverse();
        Ok(cols)
    }
}

/// Runs the bottom-set recursion over two orders with an arbitrary
/// scorer, returning the optimal score and the emitted columns.
pub(crate) fn cross_dp(
    left: &StrictOrder,
    right: &StrictOrder,
    left_tie: &str,
    right_tie: &str,
    scorer: &impl PairScorer,
    cap: usize,
) -> Result<(i64, Vec<ColSpec>), DpError> {
    let mut dp = CrossDp::new(left, right, left_tie, right_tie, scorer, cap)?;
    let full_l = CrossDp::<LabelScorer>::full(left.len());
    let full_r = CrossDp::<LabelScorer>::full(right.len());
    let score = dp.best(full_l, full_r)?;
    let cols = dp.traceback(full_l, full_r)?;
    Ok((score, cols))
}

fn columns_from_specs(cols: &[ColSpec]) -> Result<Vec<Column>, AlignmentError> {
    cols.iter()
        .map(|&(a, b)| {
            let mut entries = Vec::new();
            if let Some(i) = a {
                entries.push((0usize, i));
            }
            if let Some(j) = b {
                entries.push((1usize, j));
            }
            Column::aligned(entries)
        })
        .collect()
}

/// Score-optimal alignment of two posets under the weak axioms: the
/// column order never contradicts a row order, but incomparable row
/// elements may become ordered. Exact, memoised over antichain pairs.
pub fn align_pair_cross(
    p1: &Poset,
    p2: &Poset,
    sc: &ScoringScheme,
) -> Result<(i64, Alignment), DpError> {
    align_pair_cross_capped(p1, p2, sc, state_cap())
}

pub fn align_pair_cross_capped(
    p1: &Poset,
    p2: &Poset,
    sc: &ScoringScheme,
    cap: usize,
) -> Result<(i64, Alignment), DpError> {
    let scorer = LabelScorer { left: p1, right: p2, scheme: sc };
    let (score, cols) =
        cross_dp(p1.order(), p2.order(), p1.row_id(), p2.row_id(), &scorer, cap)?;
    let columns = columns_from_specs(&cols)?;
    let al = Alignment::with_induced_order(vec![p1.clone(), p2.clone()], columns)?;
    Ok((score, al))
}

/// Classic quadratic global alignment of two strings; an independent
/// code path from the poset engines. Returns the score and the two
/// gapped rows.
pub fn align_strings_nw(s1: &str, s2: &str, sc: &ScoringScheme) -> (i64, (String, String)) {
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    let (n, m) = (a.len(), b.len());
    let g = sc.gap_score;
    let mut dp = vec![vec![0i64; m + 1]; n + 1];
    for i in 1..=n {
        dp[i][0] = i as i64 * g;
    }
    for j in 1..=m {
        dp[0][j] = j as i64 * g;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = dp[i - 1][j - 1] + sc.symbol_score(Some(a[i - 1]), Some(b[j - 1]));
            let up = dp[i - 1][j] + g;
            let left = dp[i][j - 1] + g;
            dp[i][j] = diag.max(up).max(left);
        }
    }
    let (mut i, mut j) = (n, m);
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    while i > 0 || j > 0 {
        if i > 0
            && j > 0
            && dp[i][j] == dp[i - 1][j - 1] + sc.symbol_score(Some(a[i - 1]), Some(b[j - 1]))
        {
            r1.push(a[i - 1]);
            r2.push(b[j - 1]);
            i -= 1;
            j -= 1;
        } else if i > 0 && dp[i][j] == dp[i - 1][j] + g {
            r1.push(a[i - 1]);
            r2.push('-');
            i -= 1;
        } else {
            r1.push('-');
            r2.push(b[j - 1]);
            j -= 1;
        }
    }
    r1.reverse();
    r2.reverse();
    (dp[n][m], (r1.into_iter().collect(), r2.into_iter().collect()))
}

/// How two elements of one poset relate; matched pairs must agree on
/// this signature for the projection axioms to survive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rel {
    Below,
    Above,
    Incomparable,
}

fn rel(order: &StrictOrder, x: usize, anchor: usize) -> Rel {
    if order.lt(x, anchor) {
        Rel::Below
    } else if order.lt(anchor, x) {
        Rel::Above
    } else {
        Rel::Incomparable
    }
}

struct RecoverSearch<'a, S: PairScorer> {
    left: &'a StrictOrder,
    right: &'a StrictOrder,
    scorer: &'a S,
    cap: usize,
    nodes: usize,
    best_total: i64,
    best_pairs: Vec<(usize, usize)>,
}

type Classes = Vec<(Vec<usize>, Vec<usize>)>;

impl<S: PairScorer> RecoverSearch<'_, S> {
    /// Net effect of matching `(l, r)` instead of gapping both.
    fn value(&self, l: usize, r: usize) -> i64 {
        self.scorer.pair(l, r) - self.scorer.gap_left(l) - self.scorer.gap_right(r)
    }

    /// Admissible bound on the value still collectable from `classes`:
    /// matches only form inside a class, at most `min(|L|, |R|)` of
    /// them, each at most the best pair value of the class.
    fn bound(&self, classes: &Classes) -> i64 {
        let mut total = 0;
        for (ls, rs) in classes {
            let mut max_v = 0;
            for &l in ls {
                for &r in rs {
                    max_v = max_v.max(self.value(l, r));
                }
            }
            total += max_v * ls.len().min(rs.len()) as i64;
        }
        total
    }

    fn search(
        &mut self,
        classes: &Classes,
        chosen: &mut Vec<(usize, usize)>,
        current: i64,
    ) -> Result<(), DpError> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(DpError::SearchBudgetExceeded { cap: self.cap });
        }
        if current + self.bound(classes) <= self.best_total {
            return Ok(());
        }
        // Branch on the smallest left vertex that can still be matched.
        let pick = classes
            .iter()
            .enumerate()
            .filter(|(_, (ls, rs))| !ls.is_empty() && !rs.is_empty())
            .min_by_key(|(_, (ls, _))| *ls.iter().min().unwrap());
        let Some((ci, _)) = pick else {
            if current > self.best_total {
                self.best_total = current;
                self.best_pairs = chosen.clone();
            }
            return Ok(());
        };
        let l = *classes[ci].0.iter().min().unwrap();
        let rs = {
            let mut rs = classes[ci].1.clone();
            rs.sort_unstable();
            rs
        };
        for r in rs {
            let mut refined: Classes = Vec::new();
            for (ls_k, rs_k) in classes.iter() {
                for sig in [Rel::Below, Rel::Above, Rel::Incomparable] {
                    let ls: Vec<usize> = ls_k
                        .iter()
                        .copied()
                        .filter(|&x| x != l && rel(self.left, x, l) == sig)
                        .collect();
                    let rs2: Vec<usize> = rs_k
                        .iter()
                        .copied()
                        .filter(|&y| y != r && rel(self.right, y, r) == sig)
                        .collect();
                    if !ls.is_empty() && !rs2.is_empty() {
                        refined.push((ls, rs2));
                    }
                }
            }
            chosen.push((l, r));
            self.search(&refined, chosen, current + self.value(l, r))?;
            chosen.pop();
        }
        // Leave l unmatched.
        let mut without: Classes = classes.to_vec();
        without[ci].0.retain(|&x| x != l);
        self.search(&without, chosen, current)?;
        Ok(())
    }
}

/// Exact maximum-score matching between two orders that preserves
/// comparability and incomparability in both directions, by candidate
/// set branch and bound. Returns the total score (matched pairs plus
/// gaps for everything unmatched) and the matching.
pub(crate) fn recover_search(
    left: &StrictOrder,
    right: &StrictOrder,
    scorer: &impl PairScorer,
    cap: usize,
) -> Result<(i64, Vec<(usize, usize)>), DpError> {
    let base: i64 = (0..left.len()).map(|i| scorer.gap_left(i)).sum::<i64>()
        + (0..right.len()).map(|j| scorer.gap_right(j)).sum::<i64>();
    let mut search = RecoverSearch {
        left,
        right,
        scorer,
        cap,
        nodes: 0,
        best_total: 0,
        best_pairs: Vec::new(),
    };
    let classes: Classes =
        vec![((0..left.len()).collect(), (0..right.len()).collect())];
    search.search(&classes, &mut Vec::new(), 0)?;
    let mut pairs = search.best_pairs;
    pairs.sort_unstable();
    Ok((base + search.best_total, pairs))
}

/// Score-optimal alignment of two posets under the strong projection
/// axioms: the column order restricted to any row is exactly that row's
/// order. Exact branch and bound over candidate pairs.
pub fn align_pair_recover(
    p1: &Poset,
    p2: &Poset,
    sc: &ScoringScheme,
) -> Result<(i64, Alignment), DpError> {
    align_pair_recover_capped(p1, p2, sc, DEFAULT_NODE_CAP)
}

pub fn align_pair_recover_capped(
    p1: &Poset,
    p2: &Poset,
    sc: &ScoringScheme,
    cap: usize,
) -> Result<(i64, Alignment), DpError> {
    let scorer = LabelScorer { left: p1, right: p2, scheme: sc };
    let (score, pairs) = recover_search(p1.order(), p2.order(), &scorer, cap)?;
    let al = alignment_from_matching(p1, p2, &pairs)?;
    Ok((score, al))
}

fn alignment_from_matching(
    p1: &Poset,
    p2: &Poset,
    pairs: &[(usize, usize)],
) -> Result<Alignment, DpError> {
    let mut columns = Vec::new();
    let mut left_used = vec![false; p1.len()];
    let mut right_used = vec![false; p2.len()];
    for &(i, j) in pairs {
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
    Ok(Alignment::with_induced_order(vec![p1.clone(), p2.clone()], columns)?)
}

/// Aligns a poset against a totally ordered row. The matched poset
/// elements follow a single source-to-sink path of the Hasse diagram
/// (one path is always chosen when the poset is non-empty); unmatched
/// on-path elements cost a gap each. Elements off the chosen path are
/// emitted as indel columns and cost nothing by default; with
/// `charge_offpath` they cost a gap each, in which case the path choice
/// no longer matters and the matched chain alone decides the score.
pub fn align_seq_to_poset(
    p: &Poset,
    s: &Poset,
    sc: &ScoringScheme,
    charge_offpath: bool,
) -> Result<(i64, Alignment), DpError> {
    if !s.is_chain() {
        return Err(DpError::RowNotChain { row_id: s.row_id().to_string() });
    }
    let scorer = LabelScorer { left: p, right: s, scheme: sc };
    let n = p.len();
    let m = s.len();
    if charge_offpath {
        let (score, pairs) = chain_matching_dp(p, s, &scorer);
        let al = alignment_from_matching(p, s, &pairs)?;
        return Ok((score, al));
    }
    if n == 0 {
        let score = m as i64 * sc.gap_score;
        let cols: Vec<ColSpec> = (0..m).map(|j| (None, Some(j))).collect();
        let columns = columns_from_specs(&cols)?;
        let al = Alignment::with_induced_order(vec![p.clone(), s.clone()], columns)?;
        return Ok((score, al));
    }

    let preds: Vec<Vec<usize>> = (0..n)
        .map(|v| p.cover_edges().iter().filter(|&&(_, w)| w == v).map(|&(u, _)| u).collect())
        .collect();
    let sinks: Vec<usize> =
        (0..n).filter(|&v| p.cover_edges().iter().all(|&(u, _)| u != v)).collect();
    let neg = i64::MIN / 4;
    let mut table = vec![vec![neg; m + 1]; n];

    let topo = p.order().topo_order();
    for &v in &topo {
        for j in 0..=m {
            let from_pred = |jj: usize, table: &Vec<Vec<i64>>| -> i64 {
                if preds[v].is_empty() {
                    jj as i64 * sc.gap_score
                } else {
                    preds[v].iter().map(|&u| table[u][jj]).max().unwrap()
                }
            };
            let mut best = neg;
            if j >= 1 {
                best = best.max(from_pred(j - 1, &table) + scorer.pair(v, j - 1));
            }
            best = best.max(from_pred(j, &table) + scorer.gap_left(v));
            if j >= 1 {
                best = best.max(table[v][j - 1] + scorer.gap_right(j - 1));
            }
            table[v][j] = best;
        }
    }

    let (&end, _) = sinks
        .iter()
        .zip(sinks.iter().map(|&v| table[v][m]))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(a.0)))
        .expect("non-empty poset has a sink");
    let score = table[end][m];

    // Walk the table back to recover the path and its matches.
    let mut cols: Vec<ColSpec> = Vec::new();
    let mut on_path = vec![false; n];
    let mut v = end;
    let mut j = m;
    loop {
        on_path[v] = true;
        let t = table[v][j];
        // Prefer the match step, then stepping the path, then gapping
        // the sequence; predecessors are tried in ascending order.
        let mut matched = false;
        if j >= 1 {
            if preds[v].is_empty() {
                if t == (j - 1) as i64 * sc.gap_score + scorer.pair(v, j - 1) {
                    cols.push((Some(v), Some(j - 1)));
                    j -= 1;
                    for jj in (0..j).rev() {
                        cols.push((None, Some(jj)));
                    }
                    break;
                }
            } else {
                let mut ps = preds[v].clone();
                ps.sort_unstable();
                for &u in &ps {
                    if t == table[u][j - 1] + scorer.pair(v, j - 1) {
                        cols.push((Some(v), Some(j - 1)));
                        v = u;
                        j -= 1;
                        matched = true;
                        break;
                    }
                }
                if matched {
                    continue;
                }
            }
        }
        if preds[v].is_empty() {
            if t == j as i64 * sc.gap_score + scorer.gap_left(v) {
                cols.push((Some(v), None));
                for jj in (0..j).rev() {
                    cols.push((None, Some(jj)));
                }
                break;
            }
        } else {
            let mut ps = preds[v].clone();
            ps.sort_unstable();
            let mut stepped = false;
            for &u in &ps {
                if t == table[u][j] + scorer.gap_left(v) {
                    cols.push((Some(v), None));
                    v = u;
                    stepped = true;
                    break;
                }
            }
            if stepped {
                continue;
            }
        }
        assert!(j >= 1, "traceback must make progress");
        cols.push((None, Some(j - 1)));
        j -= 1;
    }
    cols.reverse();
    for u in 0..n {
        if !on_path[u] {
            cols.push((Some(u), None));
        }
    }
    let columns = columns_from_specs(&cols)?;
    let al = Alignment::with_induced_order(vec![p.clone(), s.clone()], columns)?;
    Ok((score, al))
}

/// All-gaps-charged variant: the best chain of the poset matched
/// order-isomorphically into the sequence; everything unmatched costs a
/// gap.
fn chain_matching_dp(p: &Poset, s: &Poset, scorer: &impl PairScorer) -> (i64, Vec<(usize, usize)>) {
    let n = p.len();
    let m = s.len();
    let base: i64 = (0..n).map(|i| scorer.gap_left(i)).sum::<i64>()
        + (0..m).map(|j| scorer.gap_right(j)).sum::<i64>();
    if n == 0 || m == 0 {
        return (base, Vec::new());
    }
    let value = |v: usize, j: usize| scorer.pair(v, j) - scorer.gap_left(v) - scorer.gap_right(j);
    let mut gain = vec![vec![0i64; m]; n];
    let mut from: Vec<Vec<Option<(usize, usize)>>> = vec![vec![None; m]; n];
    for v in 0..n {
        for j in 0..m {
            let mut best_prev = 0;
            let mut best_from = None;
            for u in 0..n {
                if !p.lt(u, v) {
                    continue;
                }
                for jj in 0..j {
                    if gain[u][jj] > best_prev {
                        best_prev = gain[u][jj];
                        best_from = Some((u, jj));
                    }
                }
            }
            gain[v][j] = value(v, j) + best_prev;
            from[v][j] = best_from;
        }
    }
    let mut best = 0;
    let mut at = None;
    for v in 0..n {
        for j in 0..m {
            if gain[v][j] > best {
                best = gain[v][j];
                at = Some((v, j));
            }
        }
    }
    let mut pairs = Vec::new();
    let mut cursor = at;
    while let Some((v, j)) = cursor {
        pairs.push((v, j));
        cursor = from[v][j];
    }
    pairs.sort_unstable();
    (base + best, pairs)
}

/// A rooted binary guide tree over row ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuideTree {
    Leaf(String),
    Node(Box<GuideTree>, Box<GuideTree>),
}

impl GuideTree {
    /// Parses nested parentheses over row ids, e.g. `((a,b),c)`.
    pub fn parse(text: &str) -> Result<GuideTree, DpError> {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let tree = Self::parse_node(&chars, &mut pos)?;
        Self::skip_ws(&chars, &mut pos);
        if pos != chars.len() {
            return Err(DpError::BadGuideTree {
                reason: format!("trailing input at position {}", pos),
            });
        }
        Ok(tree)
    }

    fn skip_ws(chars: &[char], pos: &mut usize) {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    }

    fn parse_node(chars: &[char], pos: &mut usize) -> Result<GuideTree, DpError> {
        Self::skip_ws(chars, pos);
        if *pos >= chars.len() {
            return Err(DpError::BadGuideTree { reason: "unexpected end of input".into() });
        }
        if chars[*pos] == '(' {
            *pos += 1;
            let left = Self::parse_node(chars, pos)?;
            Self::skip_ws(chars, pos);
            if chars.get(*pos) != Some(&',') {
                return Err(DpError::BadGuideTree { reason: format!("expected ',' at {}", pos) });
            }
            *pos += 1;
            let right = Self::parse_node(chars, pos)?;
            Self::skip_ws(chars, pos);
            if chars.get(*pos) != Some(&')') {
                return Err(DpError::BadGuideTree { reason: format!("expected ')' at {}", pos) });
            }
            *pos += 1;
            Ok(GuideTree::Node(Box::new(left), Box::new(right)))
        } else {
            let start = *pos;
            while *pos < chars.len() && !['(', ')', ','].contains(&chars[*pos]) && !chars[*pos].is_whitespace() {
                *pos += 1;
            }
            if *pos == start {
                return Err(DpError::BadGuideTree { reason: format!("expected row id at {}", pos) });
            }
            Ok(GuideTree::Leaf(chars[start..*pos].iter().collect()))
        }
    }

    pub fn leaves(&self) -> Vec<&str> {
        match self {
            GuideTree::Leaf(id) => vec![id.as_str()],
            GuideTree::Node(l, r) => {
                let mut out = l.leaves();
                out.extend(r.leaves());
                out
            }
        }
    }
}

impl std::fmt::Display for GuideTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GuideTree::Leaf(id) => write!(f, "{}", id),
            GuideTree::Node(l, r) => write!(f, "({},{})", l, r),
        }
    }
}

/// Which pairwise engine progressive alignment uses at each merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignMode {
    Cross,
    Recover,
}

/// Progressive multiple alignment: post-order over the guide tree; at
/// each inner node the two child alignments are aligned as posets of
/// columns under sum-of-pairs profile scoring and merged. The result is
/// a valid alignment of all rows, but not in general the score-optimal
/// one.
pub fn progressive_align(
    rows: &[Poset],
    tree: &GuideTree,
    sc: &ScoringScheme,
    mode: AlignMode,
) -> Result<Alignment, DpError> {
    let leaves = tree.leaves();
    for id in &leaves {
        if !rows.iter().any(|r| r.row_id() == *id) {
            return Err(DpError::BadGuideTree { reason: format!("leaf {} is not an input row", id) });
        }
    }
    for (i, id) in leaves.iter().enumerate() {
        if leaves[..i].contains(id) {
            return Err(DpError::BadGuideTree { reason: format!("leaf {} appears twice", id) });
        }
    }
    if leaves.len() != rows.len() {
        return Err(DpError::BadGuideTree {
            reason: format!("tree covers {} of {} rows", leaves.len(), rows.len()),
        });
    }
    progressive_node(rows, tree, sc, mode)
}

fn progressive_node(
    rows: &[Poset],
    tree: &GuideTree,
    sc: &ScoringScheme,
    mode: AlignMode,
) -> Result<Alignment, DpError> {
    match tree {
        GuideTree::Leaf(id) => {
            let row = rows.iter().find(|r| r.row_id() == id).unwrap();
            Ok(Alignment::single_row(row.clone()))
        }
        GuideTree::Node(lt, rt) => {
            let left = progressive_node(rows, lt, sc, mode)?;
            let right = progressive_node(rows, rt, sc, mode)?;
            let scorer = ProfileScorer { left: &left, right: &right, scheme: sc };
            let left_tie: String =
                left.rows().iter().map(|r| r.row_id()).collect::<Vec<_>>().join("+");
            let right_tie: String =
                right.rows().iter().map(|r| r.row_id()).collect::<Vec<_>>().join("+");
            let matches: Vec<(usize, usize)> = match mode {
                AlignMode::Cross => {
                    let (_, cols) = cross_dp(
                        left.column_order(),
                        right.column_order(),
                        &left_tie,
                        &right_tie,
                        &scorer,
                        state_cap(),
                    )?;
                    cols.into_iter()
                        .filter_map(|(a, b)| match (a, b) {
                            (Some(u), Some(v)) => Some((u, v)),
                            _ => None,
                        })
                        .collect()
                }
                AlignMode::Recover => {
                    let (_, pairs) = recover_search(
                        left.column_order(),
                        right.column_order(),
                        &scorer,
                        DEFAULT_NODE_CAP,
                    )?;
                    pairs
                }
            };
            let groups: Vec<Vec<(usize, usize)>> =
                matches.iter().map(|&(u, v)| vec![(0, u), (1, v)]).collect();
            Ok(recombine(&[left, right], &groups)?)
        }
    }
}

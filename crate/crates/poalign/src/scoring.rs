//! Column-additive scoring.

use crate::alignment::Alignment;

/// Column-additive scores: match/mismatch for two present symbols, a
/// per-entry gap cost, and zero for gap-gap pairs inside multi-row
/// columns. `eq` decides symbol equality; unlabelled elements compare
/// equal to each other and unequal to any symbol.
#[derive(Clone, Copy)]
pub struct ScoringScheme {
    pub match_score: i64,
    pub mismatch_score: i64,
    pub gap_score: i64,
    pub eq: fn(char, char) -> bool,
}

fn chars_equal(a: char, b: char) -> bool {
    a == b
}

impl Default for ScoringScheme {
    fn default() -> Self {
        ScoringScheme::new(1, 0, -1)
    }
}

impl std::fmt::Debug for ScoringScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScoringScheme")
            .field("match_score", &self.match_score)
            .field("mismatch_score", &self.mismatch_score)
            .field("gap_score", &self.gap_score)
            .finish()
    }
}

impl ScoringScheme {
    pub fn new(match_score: i64, mismatch_score: i64, gap_score: i64) -> Self {
        ScoringScheme { match_score, mismatch_score, gap_score, eq: chars_equal }
    }

    /// Score of two present elements given their labels.
    pub fn symbol_score(&self, a: Option<char>, b: Option<char>) -> i64 {
        let equal = match (a, b) {
            (Some(x), Some(y)) => (self.eq)(x, y),
            (None, None) => true,
            _ => false,
        };
        if equal {
            self.match_score
        } else {
            self.mismatch_score
        }
    }

    /// Score of one row-pair slot in a column: both present -> symbol
    /// score, one present -> gap, neither -> 0.
    pub fn slot_score(&self, a: Option<Option<char>>, b: Option<Option<char>>) -> i64 {
        match (a, b) {
            (Some(x), Some(y)) => self.symbol_score(x, y),
            (None, None) => 0,
            _ => self.gap_score,
        }
    }
}

/// Sum-of-pairs score of an alignment: over every column and every
/// unordered row pair, match/mismatch for two symbols, gap for a symbol
/// against a gap, zero for gap against gap. For two rows this is exactly
/// the column-additive pairwise score.
pub fn sum_of_pairs_score(al: &Alignment, sc: &ScoringScheme) -> i64 {
    let rows = al.rows();
    let mut total = 0;
    for col in al.columns() {
        for r1 in 0..rows.len() {
            for r2 in r1 + 1..rows.len() {
                let a = col.get(r1).map(|e| rows[r1].label(e));
                let b = col.get(r2).map(|e| rows[r2].label(e));
                total += sc.slot_score(a, b);
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::Alignment;

    #[test]
    fn default_scores() {
        let sc = ScoringScheme::default();
        assert_eq!(sc.symbol_score(Some('a'), Some('a')), 1);
        assert_eq!(sc.symbol_score(Some('a'), Some('b')), 0);
        assert_eq!(sc.symbol_score(None, None), 1);
        assert_eq!(sc.symbol_score(Some('a'), None), 0);
        assert_eq!(sc.slot_score(Some(Some('a')), None), -1);
        assert_eq!(sc.slot_score(None, None), 0);
    }

    #[test]
    fn pairwise_sum_of_pairs_matches_hand_count() {
        let sc = ScoringScheme::default();
        let al = Alignment::from_gapped_rows(&[("B", "000011011"), ("C", "100010000")]).unwrap();
        assert_eq!(sum_of_pairs_score(&al, &sc), 5);
    }

    #[test]
    fn three_row_gap_gap_is_free() {
        let sc = ScoringScheme::default();
        let al = Alignment::from_gapped_rows(&[("a", "x-"), ("b", "x-"), ("c", "-y")]).unwrap();
        // Column 1: (x,x)=1, (x,-)=-1, (x,-)=-1 => -1.
        // Column 2: (-,-)=0, (-,y)=-1, (-,y)=-1 => -2.
        assert_eq!(sum_of_pairs_score(&al, &sc), -3);
    }
}

//! Algebra of length-3 ordinal patterns.
//!
//! A window of three observations is encoded by the permutation that sorts it
//! ascending, ties broken towards the earlier position. The six patterns form
//! the symmetric group S3 under right-action composition; the transcript from
//! one pattern to another, together with its inversion and cycle structure,
//! yields the Kendall and Cayley distances used by the transcript charts.
//!
//! Everything here is stateless and side-effect free; the composition,
//! inverse, and count tables are derived from the defining formulas at compile
//! time and the hot-path operations reduce to array lookups.

use std::fmt;

use crate::error::Error;

/// Number of distinct length-3 ordinal patterns (3! = 6).
pub const PATTERN_COUNT: usize = 6;

/// One-line forms in lexicographic order; position `k` holds the form of the
/// pattern with 1-based index `k + 1`.
const ONE_LINE: [[u8; 3]; PATTERN_COUNT] = [
    [1, 2, 3],
    [1, 3, 2],
    [2, 1, 3],
    [2, 3, 1],
    [3, 1, 2],
    [3, 2, 1],
];

/// A length-3 ordinal pattern: one of the six elements of S3 in lexicographic
/// one-line order. Transcripts are patterns as well.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Pattern(u8);

const fn line_rank(line: [u8; 3]) -> u8 {
    let mut k = 0;
    while k < PATTERN_COUNT {
        if ONE_LINE[k][0] == line[0] && ONE_LINE[k][1] == line[1] && ONE_LINE[k][2] == line[2] {
            return k as u8;
        }
        k += 1;
    }
    panic!("not a permutation of 1..=3");
}

/// Right action: `a` acts first, `b` second, giving `(b[a1], b[a2], b[a3])`.
const fn compose_lines(a: [u8; 3], b: [u8; 3]) -> [u8; 3] {
    [
        b[(a[0] - 1) as usize],
        b[(a[1] - 1) as usize],
        b[(a[2] - 1) as usize],
    ]
}

const fn invert_line(a: [u8; 3]) -> [u8; 3] {
    let mut inv = [0u8; 3];
    let mut n = 0;
    while n < 3 {
        inv[(a[n] - 1) as usize] = n as u8 + 1;
        n += 1;
    }
    inv
}

const COMPOSE: [[u8; PATTERN_COUNT]; PATTERN_COUNT] = {
    let mut table = [[0u8; PATTERN_COUNT]; PATTERN_COUNT];
    let mut i = 0;
    while i < PATTERN_COUNT {
        let mut j = 0;
        while j < PATTERN_COUNT {
            table[i][j] = line_rank(compose_lines(ONE_LINE[i], ONE_LINE[j]));
            j += 1;
        }
        i += 1;
    }
    table
};

const INVERSE: [u8; PATTERN_COUNT] = {
    let mut table = [0u8; PATTERN_COUNT];
    let mut i = 0;
    while i < PATTERN_COUNT {
        table[i] = line_rank(invert_line(ONE_LINE[i]));
        i += 1;
    }
    table
};

const INVERSIONS: [u8; PATTERN_COUNT] = {
    let mut table = [0u8; PATTERN_COUNT];
    let mut k = 0;
    while k < PATTERN_COUNT {
        let line = ONE_LINE[k];
        let mut count = 0;
        let mut i = 0;
        while i < 3 {
            let mut j = i + 1;
            while j < 3 {
                if line[i] > line[j] {
                    count += 1;
                }
                j += 1;
            }
            i += 1;
        }
        table[k] = count;
        k += 1;
    }
    table
};

const CYCLES: [u8; PATTERN_COUNT] = {
    let mut table = [0u8; PATTERN_COUNT];
    let mut k = 0;
    while k < PATTERN_COUNT {
        let line = ONE_LINE[k];
        let mut seen = [false; 3];
        let mut cycles = 0;
        let mut start = 0;
        while start < 3 {
            if !seen[start] {
                cycles += 1;
                let mut pos = start;
                while !seen[pos] {
                    seen[pos] = true;
                    pos = (line[pos] - 1) as usize;
                }
            }
            start += 1;
        }
        table[k] = cycles;
        k += 1;
    }
    table
};

impl Pattern {
    /// All six patterns in lexicographic order.
    pub const ALL: [Pattern; PATTERN_COUNT] = [
        Pattern(0),
        Pattern(1),
        Pattern(2),
        Pattern(3),
        Pattern(4),
        Pattern(5),
    ];

    /// Pattern from its 1-based lexicographic index.
    pub fn from_index(index: usize) -> Result<Pattern, Error> {
        if (1..=PATTERN_COUNT).contains(&index) {
            Ok(Pattern(index as u8 - 1))
        } else {
            Err(Error::PatternIndex(index))
        }
    }

    /// 1-based lexicographic index.
    pub const fn index(self) -> usize {
        self.0 as usize + 1
    }

    /// One-line form `(i1, i2, i3)`: the ascending pass visits positions
    /// `i1`, then `i2`, then `i3`.
    pub const fn one_line(self) -> [u8; 3] {
        ONE_LINE[self.0 as usize]
    }

    /// Pattern with the given one-line form.
    pub fn from_one_line(line: [u8; 3]) -> Result<Pattern, Error> {
        Pattern::ALL
            .into_iter()
            .find(|p| p.one_line() == line)
            .ok_or(Error::OneLineForm(line))
    }

    /// Right-action composition: `self` acts first, `other` second.
    pub const fn compose(self, other: Pattern) -> Pattern {
        Pattern(COMPOSE[self.0 as usize][other.0 as usize])
    }

    /// Group inverse: `p.compose(p.invert())` is the identity.
    pub const fn invert(self) -> Pattern {
        Pattern(INVERSE[self.0 as usize])
    }

    /// Number of inverted pairs in the one-line form, in 0..=3.
    pub const fn inversions(self) -> u8 {
        INVERSIONS[self.0 as usize]
    }

    /// Number of cycles (1-cycles included) in the cycle factorization, in 1..=3.
    pub const fn cycles(self) -> u8 {
        CYCLES[self.0 as usize]
    }

    /// 0-based position, for table lookups.
    pub(crate) const fn pos(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = self.one_line();
        write!(f, "({},{},{})", line[0], line[1], line[2])
    }
}

/// Transcript from `source` to `target`: the pattern `t` with
/// `source -> target` under `t`, computed as `target ∘ source⁻¹`.
pub const fn transcript(source: Pattern, target: Pattern) -> Pattern {
    target.compose(source.invert())
}

/// Kendall distance: minimum number of adjacent transpositions turning `a`
/// into `b`; equals the inversion count of their transcript.
pub const fn kendall_distance(a: Pattern, b: Pattern) -> u8 {
    transcript(a, b).inversions()
}

/// Cayley distance: minimum number of arbitrary transpositions turning `a`
/// into `b`; equals 3 minus the cycle count of their transcript.
pub const fn cayley_distance(a: Pattern, b: Pattern) -> u8 {
    3 - transcript(a, b).cycles()
}

/// Whether `from` can be immediately followed by `to` as the overlapping
/// patterns of some real 4-window. With 1-based indices, k in {1,3,4} is never
/// followed by l in {3,4,6}, and k in {2,5,6} is never followed by l in
/// {1,2,5}; the remaining 18 transitions all occur.
pub const fn is_feasible_transition(from: Pattern, to: Pattern) -> bool {
    let k = from.index();
    let l = to.index();
    let first_group = k == 1 || k == 3 || k == 4;
    let blocked = if first_group {
        l == 3 || l == 4 || l == 6
    } else {
        l == 1 || l == 2 || l == 5
    };
    !blocked
}

/// Three consecutive raw observations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window3([f64; 3]);

impl Window3 {
    /// Fails when any value is non-finite.
    pub fn new(values: [f64; 3]) -> Result<Window3, Error> {
        if values.iter().all(|v| v.is_finite()) {
            Ok(Window3(values))
        } else {
            Err(Error::NonFiniteWindow)
        }
    }

    pub fn values(self) -> [f64; 3] {
        self.0
    }

    /// True when any two of the three values are exactly equal.
    pub fn has_tie(self) -> bool {
        let [a, b, c] = self.0;
        a == b || b == c || a == c
    }

    /// The pattern placing the values in ascending order; on exact ties the
    /// earlier position comes first.
    pub fn pattern(self) -> Pattern {
        pattern_of(self.0)
    }
}

/// Ascending-order pattern of a finite 3-window. The `<=` comparisons encode
/// the tie rule: an equal earlier value sorts before a later one.
pub(crate) fn pattern_of(values: [f64; 3]) -> Pattern {
    let [a, b, c] = values;
    let rank = if a <= b {
        if b <= c {
            0 // (1,2,3)
        } else if a <= c {
            1 // (1,3,2)
        } else {
            4 // (3,1,2)
        }
    } else if a <= c {
        2 // (2,1,3)
    } else if b <= c {
        3 // (2,3,1)
    } else {
        5 // (3,2,1)
    };
    Pattern(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(index: usize) -> Pattern {
        Pattern::from_index(index).unwrap()
    }

    #[test]
    fn window_encoding() {
        assert_eq!(Window3::new([1.0, 2.0, 3.0]).unwrap().pattern(), p(1));
        assert_eq!(Window3::new([0.5, -1.2, 0.1]).unwrap().pattern(), p(4));
        // tie between the first two positions resolves towards position 1
        assert_eq!(Window3::new([1.0, 1.0, 0.5]).unwrap().pattern(), p(5));
        assert!(Window3::new([1.0, f64::NAN, 0.5]).is_err());
        assert!(Window3::new([1.0, f64::INFINITY, 0.5]).is_err());
    }

    /// Stable argsort reference for the decision tree in `pattern_of`.
    fn reference_pattern(values: [f64; 3]) -> Pattern {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap().then(i.cmp(&j)));
        Pattern::from_one_line([idx[0] as u8 + 1, idx[1] as u8 + 1, idx[2] as u8 + 1]).unwrap()
    }

    #[test]
    fn pattern_of_matches_stable_sort_reference() {
        let grid = [-1.5, -0.25, 0.0, 0.25, 1.5];
        for &a in &grid {
            for &b in &grid {
                for &c in &grid {
                    assert_eq!(pattern_of([a, b, c]), reference_pattern([a, b, c]));
                }
            }
        }
    }

    #[test]
    fn composition_examples() {
        assert_eq!(p(1).compose(p(5)), p(5));
        assert_eq!(p(5).compose(p(1)), p(5));
        assert_eq!(p(2).compose(p(3)), p(4));
        assert_eq!(p(4).compose(p(5)), p(1));
    }

    #[test]
    fn group_laws() {
        let id = p(1);
        for a in Pattern::ALL {
            assert_eq!(id.compose(a), a);
            assert_eq!(a.compose(id), a);
            assert_eq!(a.compose(a.invert()), id);
            assert_eq!(a.invert().compose(a), id);
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p(1).invert(), p(1));
        assert_eq!(p(4).invert(), p(5));
        assert_eq!(p(6).invert(), p(6));
    }

    #[test]
    fn transcript_examples() {
        assert_eq!(transcript(p(4), p(1)), p(5));
        assert_eq!(transcript(p(2), p(5)), p(3));
        for a in Pattern::ALL {
            assert_eq!(transcript(a, a), p(1));
        }
    }

    #[test]
    fn transcript_swap_is_inverse() {
        for a in Pattern::ALL {
            for b in Pattern::ALL {
                assert_eq!(transcript(b, a), transcript(a, b).invert());
            }
        }
    }

    #[test]
    fn inversion_and_cycle_counts() {
        assert_eq!(p(1).inversions(), 0);
        assert_eq!(p(5).inversions(), 2);
        assert_eq!(p(6).inversions(), 3);
        assert_eq!(p(1).cycles(), 3);
        assert_eq!(p(4).cycles(), 1);
        assert_eq!(p(6).cycles(), 2);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(kendall_distance(p(1), p(6)), 3);
        assert_eq!(kendall_distance(p(4), p(1)), 2);
        assert_eq!(cayley_distance(p(1), p(6)), 1);
        assert_eq!(cayley_distance(p(1), p(4)), 2);
        for a in Pattern::ALL {
            assert_eq!(kendall_distance(a, a), 0);
            assert_eq!(cayley_distance(a, a), 0);
            for b in Pattern::ALL {
                assert!(cayley_distance(a, b) <= kendall_distance(a, b));
            }
        }
    }

    #[test]
    fn feasibility_examples() {
        assert!(!is_feasible_transition(p(1), p(3)));
        assert!(!is_feasible_transition(p(2), p(1)));
        assert!(is_feasible_transition(p(1), p(1)));
        let feasible = Pattern::ALL
            .iter()
            .flat_map(|&a| Pattern::ALL.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| is_feasible_transition(a, b))
            .count();
        assert_eq!(feasible, 18);
    }

    #[test]
    fn index_round_trip() {
        for k in 1..=6 {
            assert_eq!(p(k).index(), k);
            assert_eq!(Pattern::from_one_line(p(k).one_line()).unwrap(), p(k));
        }
        assert!(Pattern::from_index(0).is_err());
        assert!(Pattern::from_index(7).is_err());
        assert!(Pattern::from_one_line([1, 1, 3]).is_err());
    }
}

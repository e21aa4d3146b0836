//! Permutations, involutions, their statistics, and enumeration streams.
//!
//! Words are one-line notation on `{1, ..., n}` and every public position
//! or value is 1-indexed. Enumeration is lexicographic on one-line words so
//! golden tests and shard boundaries are stable across platforms.

use std::fmt;
use std::str::FromStr;

use crate::Error;

/// A permutation of `{1, ..., n}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n as u32).collect(),
        }
    }

    /// Validates that `word` is a bijection on `{1, ..., n}`.
    pub fn from_word(word: Vec<u32>) -> Result<Self, Error> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(Error::InvalidPermutation(format!("{word:?}")));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { word })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// The image of position `i` (1-indexed).
    pub fn apply(&self, i: usize) -> usize {
        self.word[i - 1] as usize
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn inverse(&self) -> Self {
        let mut word = vec![0u32; self.word.len()];
        for (i, &v) in self.word.iter().enumerate() {
            word[v as usize - 1] = i as u32 + 1;
        }
        Permutation { word }
    }

    /// Composition `self . other`, i.e. `other` applied first.
    pub fn compose(&self, other: &Self) -> Result<Self, Error> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Permutation {
            word: (1..=self.len()).map(|i| self.apply(other.apply(i)) as u32).collect(),
        })
    }

    pub fn is_involution(&self) -> bool {
        (1..=self.len()).all(|i| self.apply(self.apply(i)) == i)
    }

    pub fn is_fixed_point_free(&self) -> bool {
        (1..=self.len()).all(|i| self.apply(i) != i)
    }

    pub fn is_fpf_involution(&self) -> bool {
        self.is_involution() && self.is_fixed_point_free()
    }

    /// All pairs `(i, j)` with `i < j` and `p(i) > p(j)`.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                if self.apply(i) > self.apply(j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn inversion_count(&self) -> usize {
        let n = self.len();
        (1..=n)
            .map(|i| (i + 1..=n).filter(|&j| self.apply(i) > self.apply(j)).count())
            .sum()
    }

    /// Inversions `(i, j)` with `p(j) <= min(i, p(i))`.
    pub fn visible_inversions(&self) -> Vec<(usize, usize)> {
        self.inversions()
            .into_iter()
            .filter(|&(i, j)| self.apply(j) <= i.min(self.apply(i)))
            .collect()
    }

    /// Matching-style cycle form, e.g. `(1 5)(3 6)`; fixed points are
    /// omitted and the identity prints as `id`. Intended for logs and DOT
    /// labels.
    pub fn cycle_notation(&self) -> String {
        let mut out = String::new();
        let mut seen = vec![false; self.len() + 1];
        for i in 1..=self.len() {
            if seen[i] {
                continue;
            }
            let mut cycle = vec![i];
            let mut j = self.apply(i);
            seen[i] = true;
            while j != i {
                seen[j] = true;
                cycle.push(j);
                j = self.apply(j);
            }
            if cycle.len() > 1 {
                out.push('(');
                for (k, v) in cycle.iter().enumerate() {
                    if k > 0 {
                        out.push(' ');
                    }
                    out.push_str(&v.to_string());
                }
                out.push(')');
            }
        }
        if out.is_empty() {
            out.push_str("id");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.word {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let word = s
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad entry '{t}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::from_word(word)
    }
}

/// Statistics of an involution: the inversion number, the number of
/// matching arcs, and the two rank functions derived from them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvolutionStats {
    /// Number of inversions.
    pub inversions: usize,
    /// Number of two-cycles.
    pub arcs: usize,
    /// `(inversions + arcs) / 2`; the rank in the induced order.
    pub rank: usize,
    /// `(inversions - arcs) / 2`; the rank in the fixed-point-free order.
    pub fpf_rank: usize,
}

/// A permutation equal to its own inverse, with its two-cycles cached as
/// ordered arcs `(i, j)`, `i < j = s(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Involution {
    perm: Permutation,
    arcs: Vec<(usize, usize)>,
}

impl Involution {
    pub fn new(perm: Permutation) -> Result<Self, Error> {
        if !perm.is_involution() {
            return Err(Error::NotInvolution(perm.to_string()));
        }
        let arcs = (1..=perm.len())
            .filter_map(|i| {
                let j = perm.apply(i);
                (i < j).then_some((i, j))
            })
            .collect();
        Ok(Involution { perm, arcs })
    }

    pub fn identity(n: usize) -> Self {
        Involution {
            perm: Permutation::identity(n),
            arcs: Vec::new(),
        }
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm.apply(i)
    }

    /// The arcs `(i, j)` with `i < j = s(i)`, in increasing order of `i`.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.apply(i) == i).collect()
    }

    pub fn is_fpf(&self) -> bool {
        self.arcs.len() * 2 == self.len()
    }

    /// Inversions, arcs, and the two halved rank statistics. Both halvings
    /// are exact for involutions; a remainder panics since it would mean a
    /// non-involution slipped past validation.
    pub fn stats(&self) -> InvolutionStats {
        let inversions = self.perm.inversion_count();
        let arcs = self.arcs.len();
        assert!(
            (inversions + arcs).is_multiple_of(2),
            "inversions + arcs must be even for an involution: {self}"
        );
        InvolutionStats {
            inversions,
            arcs,
            rank: (inversions + arcs) / 2,
            fpf_rank: (inversions - arcs) / 2,
        }
    }

    pub fn rank(&self) -> usize {
        self.stats().rank
    }

    pub fn fpf_rank(&self) -> usize {
        self.stats().fpf_rank
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.perm.fmt(f)
    }
}

/// `n!` with checked arithmetic.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).try_fold(1u64, u64::checked_mul).expect("factorial overflow")
}

/// Number of involutions of `{1, ..., n}` (the telephone numbers).
pub fn involution_count(n: usize) -> u64 {
    let mut prev = 1u64; // n = 0
    let mut cur = 1u64; // n = 1
    if n == 0 {
        return prev;
    }
    for k in 2..=n as u64 {
        let next = cur
            .checked_add((k - 1).checked_mul(prev).expect("involution count overflow"))
            .expect("involution count overflow");
        prev = cur;
        cur = next;
    }
    cur
}

/// Number of fixed-point-free involutions of `{1, ..., n}`: `(n-1)!!` for
/// even `n`, zero for odd.
pub fn fpf_involution_count(n: usize) -> u64 {
    if n % 2 == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut k = 1u64;
    while k < n as u64 {
        acc = acc.checked_mul(k).expect("double factorial overflow");
        k += 2;
    }
    acc
}

fn next_permutation(w: &mut [u32]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

/// The word at lexicographic index `idx` (0-based) among the `n!`
/// permutation words, via the factorial number system.
fn unrank_permutation(n: usize, mut idx: u64) -> Vec<u32> {
    let mut avail: Vec<u32> = (1..=n as u32).collect();
    let mut word = Vec::with_capacity(n);
    for i in 0..n {
        let f = factorial(n - 1 - i);
        let d = (idx / f) as usize;
        idx %= f;
        word.push(avail.remove(d));
    }
    word
}

/// Lexicographic stream of permutations over an index range. Restartable
/// from any index, so shards partition `0..n!` exactly.
pub struct Permutations {
    word: Vec<u32>,
    remaining: u64,
    exhausted: bool,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.remaining == 0 || self.exhausted {
            return None;
        }
        let item = Permutation {
            word: self.word.clone(),
        };
        self.remaining -= 1;
        if !next_permutation(&mut self.word) {
            self.exhausted = true;
        }
        Some(item)
    }
}

pub fn permutations(n: usize) -> Permutations {
    permutations_range(n, 0, factorial(n))
}

/// Permutations with lexicographic indices in `lo..hi`.
pub fn permutations_range(n: usize, lo: u64, hi: u64) -> Permutations {
    let total = factorial(n);
    assert!(lo <= hi && hi <= total, "bad permutation range {lo}..{hi}");
    if lo == hi {
        return Permutations {
            word: Vec::new(),
            remaining: 0,
            exhausted: true,
        };
    }
    Permutations {
        word: unrank_permutation(n, lo),
        remaining: hi - lo,
        exhausted: false,
    }
}

/// Backtracking generator shared by the involution streams. At the smallest
/// unassigned position the candidates are the position itself (a fixed
/// point, skipped in fixed-point-free mode) followed by every free larger
/// position; trying them in increasing order yields lexicographic output.
pub struct Involutions {
    word: Vec<u32>,
    stack: Vec<(usize, usize)>,
    fpf_only: bool,
    started: bool,
    done: bool,
}

impl Involutions {
    fn new(n: usize, fpf_only: bool) -> Self {
        Involutions {
            word: vec![0; n],
            stack: Vec::with_capacity(n),
            fpf_only,
            started: false,
            done: false,
        }
    }

    fn assign(&mut self, i: usize, j: usize) {
        self.word[i - 1] = j as u32;
        self.word[j - 1] = i as u32;
        self.stack.push((i, j));
    }

    fn first_free(&self, from: usize) -> Option<usize> {
        (from..=self.word.len()).find(|&k| self.word[k - 1] == 0)
    }

    fn descend(&mut self) {
        while let Some(i) = self.first_free(1) {
            let j = if self.fpf_only {
                self.first_free(i + 1).expect("even number of free positions")
            } else {
                i
            };
            self.assign(i, j);
        }
    }

    fn backtrack(&mut self) -> bool {
        while let Some((i, j)) = self.stack.pop() {
            self.word[i - 1] = 0;
            self.word[j - 1] = 0;
            if let Some(j2) = self.first_free(j + 1) {
                self.assign(i, j2);
                self.descend();
                return true;
            }
        }
        false
    }

    fn current(&self) -> Involution {
        let perm = Permutation {
            word: self.word.clone(),
        };
        let arcs = self
            .stack
            .iter()
            .filter(|&&(i, j)| i < j)
            .copied()
            .collect::<Vec<_>>();
        let mut arcs = arcs;
        arcs.sort_unstable();
        Involution { perm, arcs }
    }
}

impl Iterator for Involutions {
    type Item = Involution;

    fn next(&mut self) -> Option<Involution> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend();
        } else if !self.backtrack() {
            self.done = true;
            return None;
        }
        Some(self.current())
    }
}

/// All involutions of `{1, ..., n}` in lexicographic word order.
pub fn involutions(n: usize) -> Involutions {
    Involutions::new(n, false)
}

/// All fixed-point-free involutions of `{1, ..., n}` in lexicographic word
/// order; `n` must be even.
pub fn fpf_involutions(n: usize) -> Result<Involutions, Error> {
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    Ok(Involutions::new(n, true))
}

/// Involutions with stream indices in `lo..hi`. The skip to `lo` replays
/// the stream, which is cheap at the sizes the guards allow.
pub fn involutions_range(n: usize, lo: u64, hi: u64) -> impl Iterator<Item = Involution> {
    involutions(n).skip(lo as usize).take((hi - lo) as usize)
}

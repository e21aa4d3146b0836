//! Bruhat order restricted to involutions, weak-order covers, and rank
//! generating functions.
//!
//! Comparisons use the prefix-count dominance criterion, so the full
//! symmetric group is never materialized. Poset covers are computed as a
//! genuine transitive reduction (no element strictly between), which keeps
//! the gradedness checks in the test suite meaningful rather than true by
//! construction.

use rayon::prelude::*;

use crate::perm::{fpf_involution_count, fpf_involutions, involution_count, involutions, Involution, Permutation};
use crate::qpoly::{odd_double_factorial, qint, QPoly};
use crate::Error;

/// Largest `n` for which the involution poset is built without forcing;
/// the closure bitset grows quadratically in the number of elements.
pub const INVOLUTION_POSET_MAX: usize = 10;
/// Largest (even) size for the fixed-point-free poset without forcing.
pub const FPF_POSET_MAX: usize = 12;
/// Largest `n` for rank generating functions by enumeration.
pub const RANK_GEN_MAX: usize = 14;

/// Bruhat comparison by prefix dominance: `a <= b` iff for every prefix
/// length `i` and threshold `k`, the prefix of `a` holds at most as many
/// values `>= k` as the prefix of `b`.
pub fn bruhat_leq(a: &Permutation, b: &Permutation) -> Result<bool, Error> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    let mut ca = vec![0u32; n + 1];
    let mut cb = vec![0u32; n + 1];
    for i in 1..=n {
        ca[1..=a.apply(i)].iter_mut().for_each(|c| *c += 1);
        cb[1..=b.apply(i)].iter_mut().for_each(|c| *c += 1);
        if ca[1..=n].iter().zip(&cb[1..=n]).any(|(x, y)| x > y) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A finite graded poset of involutions: elements in lexicographic word
/// order, covers as index pairs `(lower, upper)`, and a rank per element.
#[derive(Clone, Debug)]
pub struct Poset {
    elements: Vec<Involution>,
    covers: Vec<(usize, usize)>,
    ranks: Vec<usize>,
}

impl Poset {
    pub fn elements(&self) -> &[Involution] {
        &self.elements
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn rank(&self, idx: usize) -> usize {
        self.ranks[idx]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Number of elements at each rank, from rank 0 upward.
    pub fn rank_profile(&self) -> Vec<usize> {
        let mut profile = vec![0usize; self.max_rank() + 1];
        for &r in &self.ranks {
            profile[r] += 1;
        }
        profile
    }

    pub fn rank_polynomial(&self) -> QPoly {
        self.ranks.iter().map(|&r| QPoly::monomial(r)).sum()
    }

    /// Deterministic DOT rendering: elements labeled in cycle notation,
    /// one same-rank cluster per level, edges lower -> upper.
    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = self.elements.iter().map(|s| s.perm().cycle_notation()).collect();
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=none];\n");
        for level in 0..=self.max_rank() {
            out.push_str("  { rank=same;");
            for (idx, &r) in self.ranks.iter().enumerate() {
                if r == level {
                    out.push_str(&format!(" \"{}\";", labels[idx]));
                }
            }
            out.push_str(" }\n");
        }
        let mut covers = self.covers.clone();
        covers.sort_unstable();
        for (lo, hi) in covers {
            out.push_str(&format!("  \"{}\" -> \"{}\";\n", labels[lo], labels[hi]));
        }
        out.push_str("}\n");
        out
    }
}

struct Bitset {
    words: Vec<u64>,
    stride: usize,
}

impl Bitset {
    fn new(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        Bitset {
            words: vec![0; rows * stride],
            stride,
        }
    }

    fn set(&mut self, row: usize, col: usize) {
        self.words[row * self.stride + col / 64] |= 1 << (col % 64);
    }

    fn row(&self, row: usize) -> &[u64] {
        &self.words[row * self.stride..(row + 1) * self.stride]
    }
}

fn poset_from_elements(elements: Vec<Involution>, ranks: Vec<usize>) -> Poset {
    let m = elements.len();
    // Strict order relation, one bitset row per element.
    let rows: Vec<Vec<u64>> = (0..m)
        .into_par_iter()
        .map(|x| {
            let stride = m.div_ceil(64);
            let mut row = vec![0u64; stride];
            for y in 0..m {
                if x != y
                    && bruhat_leq(elements[x].perm(), elements[y].perm()).expect("equal sizes")
                {
                    row[y / 64] |= 1 << (y % 64);
                }
            }
            row
        })
        .collect();
    let stride = m.div_ceil(64);
    let mut above = Bitset::new(m, m);
    let mut below = Bitset::new(m, m);
    for (x, row) in rows.iter().enumerate() {
        above.words[x * stride..(x + 1) * stride].copy_from_slice(row);
        for y in 0..m {
            if row[y / 64] >> (y % 64) & 1 == 1 {
                below.set(y, x);
            }
        }
    }
    // x -| y iff x < y with nothing strictly between.
    let covers: Vec<(usize, usize)> = (0..m)
        .into_par_iter()
        .flat_map_iter(|x| {
            let above_row = above.row(x);
            let mut local = Vec::new();
            for y in 0..m {
                if above_row[y / 64] >> (y % 64) & 1 == 0 {
                    continue;
                }
                let between = above_row
                    .iter()
                    .zip(below.row(y))
                    .all(|(&a, &b)| a & b == 0);
                if between {
                    local.push((x, y));
                }
            }
            local
        })
        .collect();
    let mut covers = covers;
    covers.sort_unstable();
    Poset {
        elements,
        covers,
        ranks,
    }
}

fn guard(what: &'static str, requested: usize, max: usize, estimate: &'static str, force: bool) -> Result<(), Error> {
    if requested > max && !force {
        return Err(Error::GuardExceeded {
            what,
            requested,
            max,
            estimate,
        });
    }
    Ok(())
}

/// Bruhat order induced on all involutions of `{1, ..., n}`, ranked by
/// `(inversions + arcs) / 2`.
pub fn involution_poset(n: usize) -> Result<Poset, Error> {
    involution_poset_forced(n, false)
}

pub fn involution_poset_forced(n: usize, force: bool) -> Result<Poset, Error> {
    guard(
        "involution poset",
        n,
        INVOLUTION_POSET_MAX,
        "pairwise comparisons grow quadratically in the element count",
        force,
    )?;
    let elements: Vec<Involution> = involutions(n).collect();
    let ranks = elements.iter().map(|s| s.stats().rank).collect();
    Ok(poset_from_elements(elements, ranks))
}

/// Bruhat order induced on fixed-point-free involutions of even size `n`,
/// ranked by `(inversions - arcs) / 2`.
pub fn fpf_involution_poset(n: usize) -> Result<Poset, Error> {
    fpf_involution_poset_forced(n, false)
}

pub fn fpf_involution_poset_forced(n: usize, force: bool) -> Result<Poset, Error> {
    guard(
        "fixed-point-free involution poset",
        n,
        FPF_POSET_MAX,
        "pairwise comparisons grow quadratically in the element count",
        force,
    )?;
    let elements: Vec<Involution> = fpf_involutions(n)?.collect();
    let ranks = elements.iter().map(|s| s.stats().fpf_rank).collect();
    Ok(poset_from_elements(elements, ranks))
}

/// Weak order on all involutions of `{1, ..., n}`: same elements and ranks
/// as the Bruhat poset, covers restricted to [`weak_covers`].
pub fn weak_involution_poset(n: usize) -> Result<Poset, Error> {
    weak_involution_poset_forced(n, false)
}

pub fn weak_involution_poset_forced(n: usize, force: bool) -> Result<Poset, Error> {
    guard(
        "weak involution poset",
        n,
        INVOLUTION_POSET_MAX,
        "cover search is linear per element but the poset itself is large",
        force,
    )?;
    let elements: Vec<Involution> = involutions(n).collect();
    let ranks: Vec<usize> = elements.iter().map(|s| s.stats().rank).collect();
    let index_of = |s: &Involution| elements.binary_search(s).expect("cover stays in the poset");
    let mut covers = Vec::new();
    for (idx, s) in elements.iter().enumerate() {
        for c in weak_covers(s) {
            covers.push((idx, index_of(&c)));
        }
    }
    covers.sort_unstable();
    Ok(Poset {
        elements,
        covers,
        ranks,
    })
}

/// Upper covers of `t` in the weak order: for each adjacent transposition
/// `s`, take `s t s` when it differs from `t` and `s t` otherwise, keeping
/// the results whose rank is exactly one higher.
pub fn weak_covers(t: &Involution) -> Vec<Involution> {
    let n = t.len();
    let rank = t.stats().rank;
    let mut out = Vec::new();
    for i in 1..n {
        let mut word: Vec<u32> = t.perm().word().to_vec();
        // Conjugation by the transposition (i, i+1): swap the two entries,
        // then swap the two values.
        word.swap(i - 1, i);
        for v in word.iter_mut() {
            if *v == i as u32 {
                *v = i as u32 + 1;
            } else if *v == i as u32 + 1 {
                *v = i as u32;
            }
        }
        if word == t.perm().word() {
            // s t s = t, so multiply instead: s t swaps the values i, i+1.
            for v in word.iter_mut() {
                if *v == i as u32 {
                    *v = i as u32 + 1;
                } else if *v == i as u32 + 1 {
                    *v = i as u32;
                }
            }
        }
        let candidate = Involution::new(Permutation::from_word(word).expect("valid word"))
            .expect("transposition action preserves involutions");
        if candidate.stats().rank == rank + 1 {
            out.push(candidate);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Rank generating function of the involution order by direct enumeration.
pub fn involution_rank_gen(n: usize) -> Result<QPoly, Error> {
    involution_rank_gen_forced(n, false)
}

pub fn involution_rank_gen_forced(n: usize, force: bool) -> Result<QPoly, Error> {
    guard(
        "involution rank generating function",
        n,
        RANK_GEN_MAX,
        "enumerates all involutions; seconds up to the guard",
        force,
    )?;
    let _ = involution_count(n); // checked early so overflow panics loudly
    Ok(involutions(n).map(|s| QPoly::monomial(s.stats().rank)).sum())
}

/// Rank generating function of the fixed-point-free order by enumeration.
pub fn fpf_rank_gen(n: usize) -> Result<QPoly, Error> {
    fpf_rank_gen_forced(n, false)
}

pub fn fpf_rank_gen_forced(n: usize, force: bool) -> Result<QPoly, Error> {
    guard(
        "fixed-point-free rank generating function",
        n,
        RANK_GEN_MAX,
        "enumerates all fixed-point-free involutions; seconds up to the guard",
        force,
    )?;
    let _ = fpf_involution_count(n);
    Ok(fpf_involutions(n)?.map(|s| QPoly::monomial(s.stats().fpf_rank)).sum())
}

/// The involution rank generating function by its two-term recurrence:
/// `R(n) = R(n-1) + q [n-1]_q R(n-2)`.
pub fn involution_rank_gen_recurrence(n: usize) -> QPoly {
    let mut prev = QPoly::one(); // R(0)
    let mut cur = QPoly::one(); // R(1)
    if n == 0 {
        return prev;
    }
    for k in 2..=n {
        let next = &cur + &(&qint(k as u64 - 1) * &prev).shifted(1);
        prev = cur;
        cur = next;
    }
    cur
}

/// Closed form for the fixed-point-free rank generating function on size
/// `2 * half`: the q-odd double factorial.
pub fn fpf_rank_gen_closed(half: usize) -> QPoly {
    odd_double_factorial(half as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::permutations;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn inv(s: &str) -> Involution {
        Involution::new(perm(s)).unwrap()
    }

    #[test]
    fn bruhat_basics() {
        let id = Permutation::identity(4);
        for w in permutations(4) {
            assert!(bruhat_leq(&id, &w).unwrap());
        }
        assert!(bruhat_leq(&perm("2 1 4 3"), &perm("3 4 1 2")).unwrap());
        assert!(!bruhat_leq(&perm("3 2 1 4"), &perm("2 1 4 3")).unwrap());
        assert!(bruhat_leq(&perm("1 2"), &perm("1 2 3")).is_err());
    }

    /// Independent oracle: Bruhat order as the transitive closure of
    /// inversion-increasing transposition moves.
    fn bruhat_closure(n: usize) -> Vec<(Permutation, Vec<Permutation>)> {
        let all: Vec<Permutation> = permutations(n).collect();
        let mut reach: Vec<Vec<bool>> = all
            .iter()
            .map(|a| {
                all.iter()
                    .map(|b| {
                        // direct cover candidate: b = (i j) a with one more inversion
                        if b.inversion_count() != a.inversion_count() + 1 {
                            return false;
                        }
                        let diff: Vec<usize> =
                            (1..=n).filter(|&i| a.apply(i) != b.apply(i)).collect();
                        diff.len() == 2
                            && a.apply(diff[0]) == b.apply(diff[1])
                            && a.apply(diff[1]) == b.apply(diff[0])
                    })
                    .collect()
            })
            .collect();
        // Floyd-Warshall style closure.
        let m = all.len();
        for k in 0..m {
            for i in 0..m {
                if reach[i][k] {
                    let via = reach[k].clone();
                    reach[i].iter_mut().zip(via).for_each(|(r, v)| *r |= v);
                }
            }
        }
        all.iter()
            .enumerate()
            .map(|(i, a)| {
                let ups = all
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| i == j || reach[i][j])
                    .map(|(_, b)| b.clone())
                    .collect();
                (a.clone(), ups)
            })
            .collect()
    }

    #[test]
    fn dominance_matches_cover_closure() {
        for n in 1..=4 {
            for (a, ups) in bruhat_closure(n) {
                for b in permutations(n) {
                    assert_eq!(
                        bruhat_leq(&a, &b).unwrap(),
                        ups.contains(&b),
                        "dominance disagrees with closure on {a} <= {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn involution_poset_matches_hasse_diagram() {
        let p = involution_poset(4).unwrap();
        assert_eq!(p.elements().len(), 10);
        assert_eq!(p.rank_profile(), vec![1, 3, 3, 2, 1]);
        assert_eq!(p.covers().len(), 17);
    }

    /// Assumption-free reduction oracle at cubic cost.
    fn naive_covers(elements: &[Involution]) -> Vec<(usize, usize)> {
        let m = elements.len();
        let less = |x: usize, y: usize| {
            x != y && bruhat_leq(elements[x].perm(), elements[y].perm()).unwrap()
        };
        let mut covers = Vec::new();
        for x in 0..m {
            for y in 0..m {
                if less(x, y) && (0..m).all(|z| !(less(x, z) && less(z, y))) {
                    covers.push((x, y));
                }
            }
        }
        covers.sort_unstable();
        covers
    }

    #[test]
    fn reduction_matches_naive_oracle() {
        for n in 0..=6 {
            let p = involution_poset(n).unwrap();
            assert_eq!(p.covers(), naive_covers(p.elements()).as_slice(), "n = {n}");
        }
        for n in (2..=8).step_by(2) {
            let p = fpf_involution_poset(n).unwrap();
            assert_eq!(p.covers(), naive_covers(p.elements()).as_slice(), "fpf n = {n}");
        }
    }

    #[test]
    fn fpf_poset_small_chain() {
        let p = fpf_involution_poset(4).unwrap();
        let words: Vec<String> = p.elements().iter().map(|e| e.to_string()).collect();
        assert_eq!(words, ["2 1 4 3", "3 4 1 2", "4 3 2 1"]);
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert_eq!(p.ranks(), &[0, 1, 2]);
    }

    #[test]
    fn covers_raise_rank_by_one() {
        for n in 0..=7 {
            let p = involution_poset(n).unwrap();
            for &(lo, hi) in p.covers() {
                assert_eq!(p.rank(hi), p.rank(lo) + 1, "cover jump in involutions({n})");
            }
        }
        for n in (0..=10).step_by(2) {
            let p = fpf_involution_poset(n).unwrap();
            for &(lo, hi) in p.covers() {
                assert_eq!(p.rank(hi), p.rank(lo) + 1, "cover jump in fpf({n})");
            }
        }
    }

    #[test]
    fn weak_cover_examples() {
        let ups = weak_covers(&Involution::identity(4));
        let expected: Vec<Involution> = ["1 2 4 3", "1 3 2 4", "2 1 3 4"].iter().map(|s| inv(s)).collect();
        assert_eq!(ups, expected);

        // 3 2 1 4 is the arc (1 3): its only weak cover is (1 4).
        assert_eq!(weak_covers(&inv("3 2 1 4")), vec![inv("4 2 3 1")]);

        // 2 1 4 3 = (1 2)(3 4): covers (1 3)(2 4) but not (1 4).
        let ups = weak_covers(&inv("2 1 4 3"));
        assert!(ups.contains(&inv("3 4 1 2")));
        assert!(!ups.contains(&inv("4 2 3 1")));
    }

    /// The six local moves on a window of a partial matching, checked as
    /// explicit small instances.
    #[test]
    fn weak_cover_local_moves() {
        // two fixed points gain an arc
        assert!(weak_covers(&Involution::identity(2)).contains(&inv("2 1")));
        // arc ending at i slides to i+1
        assert!(weak_covers(&inv("2 1 3")).contains(&inv("3 2 1")));
        // arc starting at i+1 extends to i
        assert!(weak_covers(&inv("1 3 2")).contains(&inv("3 2 1")));
        // disjoint arcs around the window start crossing
        assert!(weak_covers(&inv("2 1 4 3")).contains(&inv("3 4 1 2")));
        // nested-left pair uncrosses upward
        assert!(weak_covers(&inv("3 4 1 2")).contains(&inv("4 3 2 1")));
        // crossing-right pair, move at the left endpoints
        assert!(weak_covers(&inv("3 4 1 2")).contains(&inv("4 3 2 1")));
    }

    #[test]
    fn dashed_edges_are_bruhat_only() {
        // Bruhat covers of I_4 that the weak order drops.
        let bruhat = involution_poset(4).unwrap();
        let weak = weak_involution_poset(4).unwrap();
        let to_pairs = |p: &Poset| {
            p.covers()
                .iter()
                .map(|&(lo, hi)| (p.elements()[lo].to_string(), p.elements()[hi].to_string()))
                .collect::<Vec<_>>()
        };
        let bruhat_edges = to_pairs(&bruhat);
        let weak_edges = to_pairs(&weak);
        for e in &weak_edges {
            assert!(bruhat_edges.contains(e), "weak edge {e:?} missing from Bruhat");
        }
        let dropped: Vec<_> = bruhat_edges.iter().filter(|e| !weak_edges.contains(e)).collect();
        let expected_dropped = [
            ("2 1 4 3".to_string(), "4 2 3 1".to_string()),
            ("3 2 1 4".to_string(), "3 4 1 2".to_string()),
            ("1 4 3 2".to_string(), "3 4 1 2".to_string()),
        ];
        assert_eq!(dropped.len(), 3);
        for e in expected_dropped {
            assert!(dropped.contains(&&e), "expected dashed edge {e:?}");
        }
    }

    #[test]
    fn weak_covers_are_bruhat_covers() {
        for n in 0..=8 {
            let bruhat = involution_poset(n).unwrap();
            let cover_pairs: std::collections::BTreeSet<(Involution, Involution)> = bruhat
                .covers()
                .iter()
                .map(|&(lo, hi)| (bruhat.elements()[lo].clone(), bruhat.elements()[hi].clone()))
                .collect();
            for t in involutions(n) {
                for c in weak_covers(&t) {
                    assert!(
                        cover_pairs.contains(&(t.clone(), c.clone())),
                        "weak cover {t} -| {c} is not a Bruhat cover"
                    );
                }
            }
        }
    }

    #[test]
    fn weak_order_reaches_everything_by_rank() {
        // Breadth-first closure from the identity: levels must match rank.
        for n in 0..=8 {
            let all: Vec<Involution> = involutions(n).collect();
            let mut level = vec![Involution::identity(n)];
            let mut seen: Vec<Involution> = level.clone();
            let mut depth = 0;
            while !level.is_empty() {
                for t in &level {
                    assert_eq!(t.stats().rank, depth, "weak order level mismatch at {t}");
                }
                let mut next: Vec<Involution> = level.iter().flat_map(weak_covers).collect();
                next.sort_unstable();
                next.dedup();
                seen.extend(next.iter().cloned());
                level = next;
                depth += 1;
            }
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), all.len(), "weak order misses elements at n = {n}");
        }
    }

    #[test]
    fn rank_generating_functions() {
        assert_eq!(
            involution_rank_gen(4).unwrap(),
            QPoly::from_coeffs(vec![1, 3, 3, 2, 1])
        );
        assert_eq!(fpf_rank_gen_closed(2), qint(1) * qint(3));
        for n in 0..=9 {
            assert_eq!(
                involution_rank_gen(n).unwrap(),
                involution_rank_gen_recurrence(n),
                "recurrence mismatch at n = {n}"
            );
        }
        for half in 0..=5 {
            assert_eq!(
                fpf_rank_gen(2 * half).unwrap(),
                fpf_rank_gen_closed(half),
                "closed form mismatch at half = {half}"
            );
        }
    }

    #[test]
    fn guards_fire_without_force() {
        assert!(matches!(
            involution_poset(11),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(matches!(
            involution_rank_gen(15),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn dot_export_is_stable() {
        let p = involution_poset(1).unwrap();
        assert_eq!(
            p.to_dot(),
            "digraph poset {\n  rankdir=BT;\n  node [shape=none];\n  { rank=same; \"id\"; }\n}\n"
        );
        let p4 = involution_poset(4).unwrap();
        let dot = p4.to_dot();
        assert_eq!(dot, p4.to_dot());
        assert_eq!(dot.matches(" -> ").count(), 17);
        assert!(dot.contains("\"(1 2)(3 4)\" -> \"(1 3)(2 4)\";"));

        let chain = fpf_involution_poset(4).unwrap().to_dot();
        assert_eq!(chain.matches(" -> ").count(), 2);
    }
}

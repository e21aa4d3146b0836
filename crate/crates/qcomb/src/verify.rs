//! Exhaustive identity verification with guard rails.
//!
//! Each check produces a [`VerificationReport`]. Reports serialize to JSON
//! lines; the serialized record deliberately excludes wall-clock time and
//! shard count so that identical inputs produce byte-identical output no
//! matter how the work was split. Guards are explicit ceilings with a
//! stated cost estimate; callers override them with `force`.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::dinner::{
    allocate, allocate_bob_first, count_fair, fair_count_formula, fpf_coincidence, is_fair,
    is_fair_by_path, is_fair_by_simulation, word_string,
};
use crate::order::{
    fpf_involution_poset_forced, fpf_rank_gen_closed, fpf_rank_gen_forced, involution_poset_forced,
    involution_rank_gen_forced, involution_rank_gen_recurrence, weak_covers,
};
use crate::paths::{dyck_paths, labelings, motzkin_paths, MotzkinPath};
use crate::perm::{fpf_involutions, involution_count, involutions, permutations, Involution};
use crate::qpoly::{gaussian_binomial, QPoly};
use crate::rook::{watson_weight, RookPlacement};
use crate::Error;

/// Guard ceiling for the main rank identity (paths against enumeration).
pub const MAIN_MAX: usize = 12;
/// Guard ceiling for the recurrence cross-check against enumeration.
pub const RECURRENCE_MAX: usize = 14;
/// Guard ceiling (half-size) for the fixed-point-free identities.
pub const FPF_MAX_HALF: usize = 7;
/// Guard ceiling for the binomial decomposition identity.
pub const DEODHAR_MAX: usize = 10;
/// Guard ceiling for the fair-permutation census (word size).
pub const CENSUS_MAX: usize = 10;

/// Result of one verified comparison or structural check.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Left-hand polynomial in text form, when the check compares two.
    pub left: Option<String>,
    pub right: Option<String>,
    pub equal: bool,
    /// Minimal counterexample for failed structural checks.
    pub witness: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub shards: usize,
}

impl VerificationReport {
    fn compare(identity: &str, n: usize, k: Option<usize>, left: &QPoly, right: &QPoly, started: Instant, shards: usize) -> Self {
        VerificationReport {
            identity: identity.to_string(),
            n,
            k,
            equal: left == right,
            left: Some(left.to_string()),
            right: Some(right.to_string()),
            witness: None,
            elapsed: started.elapsed(),
            shards,
        }
    }

    fn structural(identity: &str, n: usize, outcome: Result<(), String>, started: Instant) -> Self {
        let (equal, witness) = match outcome {
            Ok(()) => (true, None),
            Err(w) => (false, Some(w)),
        };
        VerificationReport {
            identity: identity.to_string(),
            n,
            k: None,
            left: None,
            right: None,
            equal,
            witness,
            elapsed: started.elapsed(),
            shards: 1,
        }
    }

    pub fn passed(&self) -> bool {
        self.equal
    }

    /// One JSON object per report; key order is fixed by the field order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.identity, self.n)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        write!(f, ": {}", if self.equal { "PASS" } else { "FAIL" })?;
        if !self.equal {
            if let (Some(l), Some(r)) = (&self.left, &self.right) {
                write!(f, " (left = {l}; right = {r})")?;
            }
            if let Some(w) = &self.witness {
                write!(f, " (witness: {w})")?;
            }
        }
        Ok(())
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

/// Sum of the step products over all Motzkin paths of length `n` against
/// the enumerated rank generating function, plus the recurrence.
pub fn verify_main(n: usize, force: bool) -> Result<Vec<VerificationReport>, Error> {
    guard(
        "main rank identity",
        n,
        MAIN_MAX,
        "seconds up to the guard, grows with the involution count",
        force,
    )?;
    let shards = rayon::current_num_threads();
    let started = Instant::now();
    let path_sum: QPoly = motzkin_paths(n)
        .par_iter()
        .map(MotzkinPath::h_poly)
        .reduce(QPoly::zero, |a, b| &a + &b);
    let enumerated = involution_rank_gen_forced(n, force)?;
    let first = VerificationReport::compare("rank-identity", n, None, &path_sum, &enumerated, started, shards);

    let started = Instant::now();
    let recurrence = involution_rank_gen_recurrence(n);
    let second = VerificationReport::compare("rank-recurrence", n, None, &enumerated, &recurrence, started, 1);
    Ok(vec![first, second])
}

/// The recurrence against enumeration alone; this one is allowed past the
/// path comparison guard since it only streams involutions.
pub fn verify_recurrence(n: usize, force: bool) -> Result<VerificationReport, Error> {
    guard(
        "rank recurrence",
        n,
        RECURRENCE_MAX,
        "streams every involution once; seconds up to the guard",
        force,
    )?;
    let started = Instant::now();
    let enumerated = involution_rank_gen_forced(n, true)?;
    let recurrence = involution_rank_gen_recurrence(n);
    Ok(VerificationReport::compare("rank-recurrence", n, None, &enumerated, &recurrence, started, 1))
}

/// Dyck-path sums against the closed product form on size `2 * half`:
/// the plain sum equals `q^half` times both the closed form and the
/// reduced sum, and enumeration agrees with the closed form.
pub fn verify_fpf(half: usize, force: bool) -> Result<Vec<VerificationReport>, Error> {
    guard(
        "fixed-point-free identities",
        half,
        FPF_MAX_HALF,
        "streams every fixed-point-free involution; seconds up to the guard",
        force,
    )?;
    let paths = dyck_paths(2 * half);
    let started = Instant::now();
    let sum_h: QPoly = paths.par_iter().map(MotzkinPath::h_poly).reduce(QPoly::zero, |a, b| &a + &b);
    let sum_h_tilde: QPoly = paths
        .par_iter()
        .map(MotzkinPath::h_tilde_poly)
        .reduce(QPoly::zero, |a, b| &a + &b);
    let closed = fpf_rank_gen_closed(half);
    let enumerated = fpf_rank_gen_forced(2 * half, force)?;
    let shards = rayon::current_num_threads();
    Ok(vec![
        VerificationReport::compare("fpf-sum-vs-closed", half, None, &sum_h, &closed.shifted(half), started, shards),
        VerificationReport::compare(
            "fpf-sum-vs-reduced-sum",
            half,
            None,
            &sum_h,
            &sum_h_tilde.shifted(half),
            started,
            shards,
        ),
        VerificationReport::compare("fpf-enumeration-vs-closed", half, None, &enumerated, &closed, started, 1),
    ])
}

/// The reduced-sum identity on its own: the up-step-reduced products over
/// Dyck paths sum to the odd double factorial.
pub fn verify_blm(half: usize, force: bool) -> Result<Vec<VerificationReport>, Error> {
    guard(
        "reduced-sum identity",
        half,
        FPF_MAX_HALF,
        "sums over all Dyck paths; instant up to the guard",
        force,
    )?;
    let started = Instant::now();
    let sum: QPoly = dyck_paths(2 * half)
        .par_iter()
        .map(MotzkinPath::h_tilde_poly)
        .reduce(QPoly::zero, |a, b| &a + &b);
    let closed = fpf_rank_gen_closed(half);
    Ok(vec![VerificationReport::compare(
        "reduced-sum-vs-closed",
        half,
        None,
        &sum,
        &closed,
        started,
        rayon::current_num_threads(),
    )])
}

/// The down-position product weight: per path it must equal the reduced
/// step product (and the plain one after a shift), and its sum over Dyck
/// paths gives the closed form.
pub fn verify_watson(half: usize, force: bool) -> Result<Vec<VerificationReport>, Error> {
    guard(
        "down-position weight identity",
        half,
        FPF_MAX_HALF,
        "checks every Dyck path; instant up to the guard",
        force,
    )?;
    let paths = dyck_paths(2 * half);
    let started = Instant::now();
    let mut per_path = Ok(());
    for d in &paths {
        let w = watson_weight(d);
        if w != d.h_tilde_poly() || w.shifted(half) != d.h_poly() {
            per_path = Err(format!("path {d}"));
            break;
        }
    }
    let first = VerificationReport::structural("down-weight-per-path", half, per_path, started);

    let started = Instant::now();
    let sum: QPoly = paths.iter().map(watson_weight).sum();
    let closed = fpf_rank_gen_closed(half);
    let second = VerificationReport::compare("down-weight-sum-vs-closed", half, None, &sum, &closed, started, 1);
    Ok(vec![first, second])
}

fn ordinary_binomial(m: usize, j: i64) -> i64 {
    if j < 0 || j as usize > m {
        return 0;
    }
    let j = j as u64;
    let m = m as u64;
    let mut acc = 1i64;
    for i in 1..=j.min(m - j) {
        acc = acc
            .checked_mul((m - j.min(m - j) + i) as i64)
            .expect("binomial overflow")
            / i as i64;
    }
    acc
}

/// The binomial decomposition: for every `k`, both the involution sum
/// (grouped by arc count) and the Motzkin sum (grouped by down-step count)
/// must equal the Gaussian binomial.
pub fn verify_deodhar(n: usize, force: bool) -> Result<Vec<VerificationReport>, Error> {
    guard(
        "binomial decomposition",
        n,
        DEODHAR_MAX,
        "streams every involution and Motzkin path once; seconds up to the guard",
        force,
    )?;
    // Group once, reuse for every k.
    let mut by_arcs: Vec<QPoly> = vec![QPoly::zero(); n / 2 + 1];
    for s in involutions(n) {
        let stats = s.stats();
        by_arcs[stats.arcs] += &QPoly::monomial(stats.fpf_rank);
    }
    let mut by_downs: Vec<QPoly> = vec![QPoly::zero(); n / 2 + 1];
    for m in motzkin_paths(n) {
        by_downs[m.down_positions().len()] += &m.h_tilde_poly();
    }
    let q_minus_one = QPoly::from_coeffs(vec![-1, 1]);

    let mut reports = Vec::new();
    for k in 0..=n {
        let started = Instant::now();
        let target = gaussian_binomial(n as u64, k as i64);
        let combine = |groups: &[QPoly]| -> QPoly {
            let mut acc = QPoly::zero();
            for (c, poly) in groups.iter().enumerate() {
                let factor = ordinary_binomial(n - 2 * c, k as i64 - c as i64);
                if factor == 0 {
                    continue;
                }
                acc += &(&q_minus_one.pow(c as u32) * poly).scaled(factor);
            }
            acc
        };
        let inv_side = combine(&by_arcs);
        let motz_side = combine(&by_downs);
        reports.push(VerificationReport::compare(
            "binomial-involution-form",
            n,
            Some(k),
            &inv_side,
            &target,
            started,
            1,
        ));
        reports.push(VerificationReport::compare(
            "binomial-motzkin-form",
            n,
            Some(k),
            &motz_side,
            &target,
            started,
            1,
        ));
    }
    Ok(reports)
}

/// The exhaustive fair census against the double-factorial square.
pub fn verify_census(size: usize, force: bool) -> Result<VerificationReport, Error> {
    guard(
        "fair census",
        size,
        CENSUS_MAX,
        "plays every permutation of the given size; under a minute at the guard",
        force,
    )?;
    let started = Instant::now();
    let count = count_fair(size)?;
    let formula = fair_count_formula(size);
    Ok(VerificationReport::compare(
        "fair-census",
        size,
        None,
        &QPoly::constant(count as i64),
        &QPoly::constant(formula as i64),
        started,
        rayon::current_num_threads(),
    ))
}

struct StructureCheck {
    name: &'static str,
    cap: usize,
    even_only: bool,
    run: fn(usize, bool) -> Result<(), String>,
}

const STRUCTURE_CHECKS: &[StructureCheck] = &[
    StructureCheck {
        name: "visible-inversions-equal-rank",
        cap: 9,
        even_only: false,
        run: |m, _| {
            for s in involutions(m) {
                let visible = s.perm().visible_inversions();
                if visible.len() != s.stats().rank {
                    return Err(format!("{s}"));
                }
                if s.arcs().iter().any(|arc| !visible.contains(arc)) {
                    return Err(format!("{s}"));
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "fpf-arc-statistics",
        cap: 12,
        even_only: true,
        run: |m, _| {
            for t in fpf_involutions(m).map_err(|e| e.to_string())? {
                let stats = t.stats();
                if stats.arcs != m / 2 || stats.fpf_rank + m / 2 != stats.rank {
                    return Err(format!("{t}"));
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "involution-counts",
        cap: 7,
        even_only: false,
        run: |m, _| {
            let pinned = [1u64, 1, 2, 4, 10, 26, 76, 232];
            for (j, &expected) in pinned.iter().enumerate().take(m + 1) {
                let counted = involutions(j).count() as u64;
                if counted != involution_count(j) || counted != expected {
                    return Err(format!("count at {j} was {counted}"));
                }
            }
            for j in 0..=m.min(6) {
                let filtered = permutations(j).filter(|p| p.is_involution()).count() as u64;
                if filtered != involution_count(j) {
                    return Err(format!("filter oracle at {j}"));
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "path-roundtrip",
        cap: 10,
        even_only: false,
        run: |m, _| {
            let mut image = 0u64;
            for s in involutions(m) {
                if s.to_labeled_path().to_involution() != s {
                    return Err(format!("{s}"));
                }
                image += 1;
            }
            let mut labeled = 0u64;
            for path in motzkin_paths(m) {
                for lp in labelings(&path) {
                    if lp.to_involution().to_labeled_path() != lp {
                        return Err(format!("{lp}"));
                    }
                    labeled += 1;
                }
            }
            if image != labeled {
                return Err(format!("image size {image} vs labeled paths {labeled}"));
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "fpf-image-is-dyck",
        cap: 12,
        even_only: true,
        run: |m, _| {
            for t in fpf_involutions(m).map_err(|e| e.to_string())? {
                if !t.to_labeled_path().path().is_dyck() {
                    return Err(format!("{t}"));
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "h-counts-visible-inversions",
        cap: 10,
        even_only: false,
        run: |m, _| {
            for s in involutions(m) {
                if s.to_labeled_path().h_stat() != s.perm().visible_inversions().len() {
                    return Err(format!("{s}"));
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "h-poly-equals-labeling-sum",
        cap: 9,
        even_only: false,
        run: |m, _| {
            for path in motzkin_paths(m) {
                let sum: QPoly = labelings(&path).map(|lp| QPoly::monomial(lp.h_stat())).sum();
                if path.h_poly() != sum {
                    return Err(format!("{path}"));
                }
                if path.h_poly().eval_at_one() as u64 != path.labeling_count() {
                    return Err(format!("{path} at q = 1"));
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "involution-poset-graded",
        cap: 8,
        even_only: false,
        run: |m, force| {
            let p = involution_poset_forced(m, force).map_err(|e| e.to_string())?;
            for &(lo, hi) in p.covers() {
                if p.rank(hi) != p.rank(lo) + 1 {
                    return Err(format!("{} -| {}", p.elements()[lo], p.elements()[hi]));
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "fpf-poset-graded",
        cap: 10,
        even_only: true,
        run: |m, force| {
            let p = fpf_involution_poset_forced(m, force).map_err(|e| e.to_string())?;
            for &(lo, hi) in p.covers() {
                if p.rank(hi) != p.rank(lo) + 1 {
                    return Err(format!("{} -| {}", p.elements()[lo], p.elements()[hi]));
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "weak-covers-within-bruhat",
        cap: 8,
        even_only: false,
        run: |m, force| {
            let p = involution_poset_forced(m, force).map_err(|e| e.to_string())?;
            let covers: std::collections::BTreeSet<(String, String)> = p
                .covers()
                .iter()
                .map(|&(lo, hi)| (p.elements()[lo].to_string(), p.elements()[hi].to_string()))
                .collect();
            for t in involutions(m) {
                for c in weak_covers(&t) {
                    if !covers.contains(&(t.to_string(), c.to_string())) {
                        return Err(format!("{t} -| {c}"));
                    }
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "h-increment-on-weak-covers",
        cap: 8,
        even_only: false,
        run: |m, _| {
            for t in involutions(m) {
                let base = t.to_labeled_path().h_stat();
                for c in weak_covers(&t) {
                    if c.to_labeled_path().h_stat() != base + 1 {
                        return Err(format!("{t} -| {c}"));
                    }
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "weak-order-levels-match-rank",
        cap: 8,
        even_only: false,
        run: |m, _| {
            let mut level = vec![Involution::identity(m)];
            let mut seen = 1u64;
            let mut depth = 0;
            while !level.is_empty() {
                for t in &level {
                    if t.stats().rank != depth {
                        return Err(format!("{t} at level {depth}"));
                    }
                }
                let mut next: Vec<Involution> = level.iter().flat_map(weak_covers).collect();
                next.sort_unstable();
                next.dedup();
                seen += next.len() as u64;
                level = next;
                depth += 1;
            }
            // Rank levels partition the poset, so reachable-with-multiplicity
            // counts every element exactly once.
            if seen != involution_count(m) {
                return Err(format!("reached {seen} of {}", involution_count(m)));
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "down-position-height-relation",
        cap: 12,
        even_only: true,
        run: |m, _| {
            for d in dyck_paths(m) {
                let heights = d.heights();
                for (i, pos) in d.down_positions().into_iter().enumerate() {
                    if heights[pos - 1] != pos - 2 * (i + 1) + 1 {
                        return Err(format!("{d}"));
                    }
                }
                let w = watson_weight(&d);
                if w != d.h_tilde_poly() || w.shifted(m / 2) != d.h_poly() {
                    return Err(format!("{d}"));
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "rook-roundtrip",
        cap: 10,
        even_only: true,
        run: |m, _| {
            for d in dyck_paths(m) {
                for lp in labelings(&d) {
                    let rp = RookPlacement::from_labeled_dyck(&lp).map_err(|e| e.to_string())?;
                    if rp.to_labeled_dyck() != lp {
                        return Err(format!("{lp}"));
                    }
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "fairness-routes-agree",
        cap: 8,
        even_only: true,
        run: |m, _| {
            for p in permutations(m) {
                let by_path = is_fair_by_path(&p).map_err(|e| e.to_string())?;
                let by_sim = is_fair_by_simulation(&p).map_err(|e| e.to_string())?;
                if by_path != by_sim {
                    return Err(format!("{p}"));
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "fair-eating-order-stable",
        cap: 8,
        even_only: true,
        run: |m, _| {
            for p in permutations(m) {
                if is_fair(&p).map_err(|e| e.to_string())? {
                    let first = allocate(&p).map_err(|e| e.to_string())?;
                    let second = allocate_bob_first(&p).map_err(|e| e.to_string())?;
                    if first.allocation().alice_order != second.alice_order {
                        return Err(format!("{p}"));
                    }
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "game-coincidence-iff-fpf",
        cap: 8,
        even_only: true,
        run: |m, _| {
            for p in permutations(m) {
                if fpf_coincidence(&p).map_err(|e| e.to_string())? != p.is_fpf_involution() {
                    return Err(format!("{p}"));
                }
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "game-label-worked-example",
        cap: usize::MAX,
        even_only: false,
        run: |_, _| {
            let p: crate::perm::Permutation = "9 4 3 2 8 10 7 5 1 6".parse().unwrap();
            let out = allocate(&p).map_err(|e| e.to_string())?;
            if out.allocation().to_compact_string() != "AABBAAABBB"
                || word_string(out.delta_a()) != "UUUDUUDDDD"
                || word_string(out.delta_b()) != "UUUDDUUUDDDD"
                || out.lambda_b().values().copied().collect::<Vec<_>>() != vec![3, 2, 2, 1, 1]
            {
                return Err(format!("{p}"));
            }
            Ok(())
        },
    },
    StructureCheck {
        name: "fair-census",
        cap: 8,
        even_only: true,
        run: |m, _| {
            let counted = count_fair(m).map_err(|e| e.to_string())?;
            if counted != fair_count_formula(m) {
                return Err(format!("census {counted} at size {m}"));
            }
            Ok(())
        },
    },
];

/// Runs every structural invariant suite, each at the requested size capped
/// by its own ceiling unless forced (the worked-example check ignores the
/// size).
pub fn verify_structure(n: usize, force: bool) -> Result<Vec<VerificationReport>, Error> {
    let mut reports = Vec::new();
    for check in STRUCTURE_CHECKS {
        let mut m = if force { n } else { n.min(check.cap) };
        if check.even_only && m % 2 == 1 {
            m -= 1;
        }
        if check.cap == usize::MAX {
            m = 10; // fixed-size worked example
        }
        let started = Instant::now();
        let outcome = (check.run)(m, force);
        reports.push(VerificationReport::structural(check.name, m, outcome, started));
    }
    Ok(reports)
}

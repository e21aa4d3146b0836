//! Motzkin and Dyck paths, down-step labels, and the bijection with
//! involutions.
//!
//! A path of length `n` is a word over `{U, L, D}` that stays weakly above
//! the axis and returns to it. The height of step `i` is the larger of the
//! step's two y-coordinates. A labeled path carries an integer
//! `1 <= label <= height` on every down step; scanning left to right, the
//! label says which open up step the down step closes (the label-th
//! leftmost), and horizontal steps stand for fixed points. That decoding is
//! inverse to the map sending an involution to its step word (up at `i`
//! when `i < s(i)`, horizontal at fixed points, down otherwise) with
//! `label(i) = #{j >= i : s(j) <= s(i)}` on down steps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::perm::{Involution, Permutation};
use crate::qpoly::{qint, QPoly};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Up,
    Level,
    Down,
}

impl Step {
    pub fn to_char(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Level => 'L',
            Step::Down => 'D',
        }
    }

    pub fn from_char(c: char) -> Result<Self, Error> {
        match c {
            'U' => Ok(Step::Up),
            'L' => Ok(Step::Level),
            'D' => Ok(Step::Down),
            other => Err(Error::InvalidPath(format!("unexpected step '{other}'"))),
        }
    }
}

/// A Motzkin path: every prefix has at least as many up as down steps and
/// the totals agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotzkinPath {
    steps: Vec<Step>,
}

impl MotzkinPath {
    pub fn new(steps: Vec<Step>) -> Result<Self, Error> {
        let mut y = 0i64;
        for (i, s) in steps.iter().enumerate() {
            match s {
                Step::Up => y += 1,
                Step::Level => {}
                Step::Down => {
                    y -= 1;
                    if y < 0 {
                        return Err(Error::InvalidPath(format!(
                            "path dips below the axis at step {}",
                            i + 1
                        )));
                    }
                }
            }
        }
        if y != 0 {
            return Err(Error::InvalidPath("path does not return to the axis".into()));
        }
        Ok(MotzkinPath { steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn step(&self, i: usize) -> Step {
        self.steps[i - 1]
    }

    pub fn is_dyck(&self) -> bool {
        self.steps.iter().all(|&s| s != Step::Level)
    }

    /// Height of each step: the larger of its two y-coordinates.
    pub fn heights(&self) -> Vec<usize> {
        let mut y = 0usize;
        self.steps
            .iter()
            .map(|s| match s {
                Step::Up => {
                    y += 1;
                    y
                }
                Step::Level => y,
                Step::Down => {
                    let h = y;
                    y -= 1;
                    h
                }
            })
            .collect()
    }

    /// 1-indexed positions of the down steps, in order.
    pub fn down_positions(&self) -> Vec<usize> {
        self.steps
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| (s == Step::Down).then_some(i + 1))
            .collect()
    }

    /// Product over steps: `[h]_q` on a down step, `q^h` elsewhere. Equals
    /// the sum of `q^H` over all labelings of the path.
    pub fn h_poly(&self) -> QPoly {
        self.step_product(false)
    }

    /// Same product with the `q` on each up step omitted.
    pub fn h_tilde_poly(&self) -> QPoly {
        self.step_product(true)
    }

    fn step_product(&self, drop_up_factor: bool) -> QPoly {
        let mut acc = QPoly::one();
        for (s, h) in self.steps.iter().zip(self.heights()) {
            match s {
                Step::Down => acc = &acc * &qint(h as u64),
                Step::Up => acc = acc.shifted(if drop_up_factor { h - 1 } else { h }),
                Step::Level => acc = acc.shifted(h),
            }
        }
        acc
    }

    /// Number of labelings: the product of the down-step heights.
    pub fn labeling_count(&self) -> u64 {
        self.heights()
            .iter()
            .zip(&self.steps)
            .filter(|(_, &s)| s == Step::Down)
            .map(|(&h, _)| h as u64)
            .product()
    }
}

impl fmt::Display for MotzkinPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for MotzkinPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let steps = s.trim().chars().map(Step::from_char).collect::<Result<Vec<_>, _>>()?;
        MotzkinPath::new(steps)
    }
}

/// A Motzkin path with a label on every down step, stored sparsely by
/// 1-indexed position so path and labels validate independently.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledMotzkinPath {
    path: MotzkinPath,
    labels: BTreeMap<usize, usize>,
}

impl LabeledMotzkinPath {
    /// Checks that the label domain is exactly the down-step set and that
    /// every label lies in `1..=height`.
    pub fn new(path: MotzkinPath, labels: BTreeMap<usize, usize>) -> Result<Self, Error> {
        let downs = path.down_positions();
        if labels.len() != downs.len() || !downs.iter().all(|i| labels.contains_key(i)) {
            return Err(Error::InvalidLabels(format!(
                "label positions {:?} do not match down steps {downs:?}",
                labels.keys().collect::<Vec<_>>()
            )));
        }
        let heights = path.heights();
        for (&i, &l) in &labels {
            let h = heights[i - 1];
            if l == 0 || l > h {
                return Err(Error::InvalidLabels(format!(
                    "label {l} at position {i} outside 1..={h}"
                )));
            }
        }
        Ok(LabeledMotzkinPath { path, labels })
    }

    pub fn path(&self) -> &MotzkinPath {
        &self.path
    }

    pub fn labels(&self) -> &BTreeMap<usize, usize> {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    /// Labels read off in left-to-right down-step order.
    pub fn label_word(&self) -> Vec<usize> {
        self.path.down_positions().iter().map(|i| self.labels[i]).collect()
    }

    /// The step statistic: `label - 1` on down steps, the height elsewhere.
    pub fn h_stat(&self) -> usize {
        self.path
            .heights()
            .iter()
            .enumerate()
            .map(|(idx, &h)| match self.path.steps()[idx] {
                Step::Down => self.labels[&(idx + 1)] - 1,
                _ => h,
            })
            .sum()
    }

    /// Decodes the labeled path back to an involution: a down step labeled
    /// `l` closes the `l`-th leftmost open up step, horizontal steps become
    /// fixed points. The simple quadratic scan is plenty at these sizes.
    pub fn to_involution(&self) -> Involution {
        let n = self.path.len();
        let mut word: Vec<u32> = (1..=n as u32).collect();
        let mut open: Vec<usize> = Vec::new();
        for (idx, &s) in self.path.steps().iter().enumerate() {
            let i = idx + 1;
            match s {
                Step::Up => open.push(i),
                Step::Level => {}
                Step::Down => {
                    let l = self.labels[&i];
                    let u = open.remove(l - 1);
                    word[u - 1] = i as u32;
                    word[i - 1] = u as u32;
                }
            }
        }
        Involution::new(Permutation::from_word(word).expect("decoded word is a permutation"))
            .expect("decoded word is an involution")
    }
}

impl fmt::Display for LabeledMotzkinPath {
    /// `UULDUULLDDD;2,2,1,1` with labels in down-step order; the semicolon
    /// is omitted when there are no down steps.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.path)?;
        if !self.labels.is_empty() {
            write!(f, ";")?;
            for (k, l) in self.label_word().iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LabeledMotzkinPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let (word, label_part) = match s.split_once(';') {
            Some((w, l)) => (w, Some(l)),
            None => (s, None),
        };
        let path: MotzkinPath = word.parse()?;
        let downs = path.down_positions();
        let labels: Vec<usize> = match label_part {
            None | Some("") => Vec::new(),
            Some(l) => l
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad label '{t}'"))))
                .collect::<Result<_, _>>()?,
        };
        if labels.len() != downs.len() {
            return Err(Error::InvalidLabels(format!(
                "{} labels for {} down steps",
                labels.len(),
                downs.len()
            )));
        }
        LabeledMotzkinPath::new(path, downs.into_iter().zip(labels).collect())
    }
}

impl Involution {
    /// The labeled Motzkin path of this involution: up at positions below
    /// their partner, horizontal at fixed points, down otherwise, with the
    /// down step at `i` labeled by `#{j >= i : s(j) <= s(i)}`.
    pub fn to_labeled_path(&self) -> LabeledMotzkinPath {
        let n = self.len();
        let mut steps = Vec::with_capacity(n);
        let mut labels = BTreeMap::new();
        for i in 1..=n {
            let si = self.apply(i);
            if i < si {
                steps.push(Step::Up);
            } else if i == si {
                steps.push(Step::Level);
            } else {
                steps.push(Step::Down);
                let label = (i..=n).filter(|&j| self.apply(j) <= si).count();
                labels.insert(i, label);
            }
        }
        let path = MotzkinPath::new(steps).expect("involution word is a Motzkin path");
        LabeledMotzkinPath::new(path, labels).expect("labels stay within step heights")
    }
}

/// Visible inversions of an involution split by whether the first index is
/// weakly below its partner. The first class is counted by the heights of
/// the non-down steps of the path image, the second by `label - 1` on the
/// down steps.
#[allow(clippy::type_complexity)]
pub fn class_split(s: &Involution) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    s.perm()
        .visible_inversions()
        .into_iter()
        .partition(|&(i, _)| i <= s.apply(i))
}

fn generate_paths(n: usize, allow_level: bool) -> Vec<MotzkinPath> {
    // Step order U < L < D makes the output lexicographic.
    fn rec(prefix: &mut Vec<Step>, height: usize, remaining: usize, allow_level: bool, out: &mut Vec<MotzkinPath>) {
        if remaining == 0 {
            out.push(MotzkinPath {
                steps: prefix.clone(),
            });
            return;
        }
        if height + 2 <= remaining {
            prefix.push(Step::Up);
            rec(prefix, height + 1, remaining - 1, allow_level, out);
            prefix.pop();
        }
        if allow_level && height < remaining {
            prefix.push(Step::Level);
            rec(prefix, height, remaining - 1, allow_level, out);
            prefix.pop();
        }
        if height >= 1 {
            prefix.push(Step::Down);
            rec(prefix, height - 1, remaining - 1, allow_level, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 0, n, allow_level, &mut out);
    out
}

/// All Motzkin paths of length `n`, lexicographic with `U < L < D`.
pub fn motzkin_paths(n: usize) -> Vec<MotzkinPath> {
    generate_paths(n, true)
}

/// All Dyck paths of length `len` (empty for odd `len`), lexicographic.
pub fn dyck_paths(len: usize) -> Vec<MotzkinPath> {
    if len % 2 == 1 {
        return Vec::new();
    }
    generate_paths(len, false)
}

/// Odometer over all label assignments of a path, within the height bound
/// of each down step.
pub struct Labelings<'a> {
    path: &'a MotzkinPath,
    positions: Vec<usize>,
    bounds: Vec<usize>,
    current: Vec<usize>,
    done: bool,
}

impl<'a> Iterator for Labelings<'a> {
    type Item = LabeledMotzkinPath;

    fn next(&mut self) -> Option<LabeledMotzkinPath> {
        if self.done {
            return None;
        }
        let labels: BTreeMap<usize, usize> =
            self.positions.iter().copied().zip(self.current.iter().copied()).collect();
        let item = LabeledMotzkinPath {
            path: self.path.clone(),
            labels,
        };
        // Advance the odometer, last position fastest.
        let mut idx = self.current.len();
        loop {
            if idx == 0 {
                self.done = true;
                break;
            }
            idx -= 1;
            if self.current[idx] < self.bounds[idx] {
                self.current[idx] += 1;
                break;
            }
            self.current[idx] = 1;
        }
        Some(item)
    }
}

/// All labelings of `path`, in lexicographic order of the label word.
pub fn labelings(path: &MotzkinPath) -> Labelings<'_> {
    let positions = path.down_positions();
    let heights = path.heights();
    let bounds: Vec<usize> = positions.iter().map(|&i| heights[i - 1]).collect();
    Labelings {
        path,
        current: vec![1; positions.len()],
        positions,
        bounds,
        done: false,
    }
}

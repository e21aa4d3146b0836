//! Labeled Dyck paths as full rook placements on Young diagrams.
//!
//! The boundary lattice path from `(0, n)` to `(n, 0)` mirrors the Dyck
//! path: horizontal on up steps, vertical on down steps. Rows are indexed
//! by down steps in path order (so the i-th row has length `d_i - i`, where
//! `d_i` is the position of the i-th down step), and columns run left to
//! right from the diagram's edge; this fixes what "label-th leftmost valid
//! spot" means. Level steps have no row, so the constructors reject
//! non-Dyck input rather than invent a convention for them.

use std::collections::BTreeMap;
use std::fmt;

use crate::paths::{LabeledMotzkinPath, MotzkinPath, Step};
use crate::qpoly::{qint, QPoly};
use crate::Error;

/// One rook per row of a Young diagram, no two sharing a column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RookPlacement {
    /// Row lengths in down-step order (weakly increasing).
    row_lengths: Vec<usize>,
    /// 1-indexed rook column for each row.
    rook_cols: Vec<usize>,
}

impl RookPlacement {
    pub fn new(row_lengths: Vec<usize>, rook_cols: Vec<usize>) -> Result<Self, Error> {
        if row_lengths.len() != rook_cols.len() {
            return Err(Error::InvalidPlacement(format!(
                "{} rows but {} rooks",
                row_lengths.len(),
                rook_cols.len()
            )));
        }
        let n = row_lengths.len();
        for (idx, win) in row_lengths.windows(2).enumerate() {
            if win[0] > win[1] {
                return Err(Error::InvalidPlacement(format!(
                    "row lengths must be weakly increasing in down-step order, got {:?} then {:?} at row {}",
                    win[0],
                    win[1],
                    idx + 1
                )));
            }
        }
        for (idx, &len) in row_lengths.iter().enumerate() {
            // Row i sits below i up steps of the boundary, so i <= len <= n.
            if len < idx + 1 || len > n {
                return Err(Error::InvalidPlacement(format!(
                    "row {} length {len} falls outside the staircase region",
                    idx + 1
                )));
            }
        }
        let mut used = vec![false; n + 1];
        for (idx, &col) in rook_cols.iter().enumerate() {
            if col == 0 || col > row_lengths[idx] {
                return Err(Error::InvalidPlacement(format!(
                    "rook in row {} at column {col} is outside the shape",
                    idx + 1
                )));
            }
            if used[col] {
                return Err(Error::InvalidPlacement(format!("column {col} holds two rooks")));
            }
            used[col] = true;
        }
        Ok(RookPlacement {
            row_lengths,
            rook_cols,
        })
    }

    /// Places rooks for a labeled Dyck path: the i-th down step's row gets
    /// its rook in the label-th leftmost column not used by an earlier one.
    pub fn from_labeled_dyck(lp: &LabeledMotzkinPath) -> Result<Self, Error> {
        if !lp.path().is_dyck() {
            return Err(Error::InvalidPlacement(
                "rook placements are defined for Dyck paths only".into(),
            ));
        }
        let downs = lp.path().down_positions();
        let n = downs.len();
        let mut row_lengths = Vec::with_capacity(n);
        let mut rook_cols = Vec::with_capacity(n);
        let mut used = vec![false; n + 1];
        for (i, &d) in downs.iter().enumerate() {
            let len = d - (i + 1);
            let label = lp.labels()[&d];
            let col = (1..=len)
                .filter(|&c| !used[c])
                .nth(label - 1)
                .expect("label bound equals the number of free columns");
            used[col] = true;
            row_lengths.push(len);
            rook_cols.push(col);
        }
        Ok(RookPlacement {
            row_lengths,
            rook_cols,
        })
    }

    /// Recovers the labeled Dyck path: the shape dictates the step word and
    /// each rook's rank among the columns still free gives its label.
    pub fn to_labeled_dyck(&self) -> LabeledMotzkinPath {
        let n = self.row_lengths.len();
        let len = 2 * n;
        let mut steps = vec![Step::Up; len];
        let downs: Vec<usize> = self
            .row_lengths
            .iter()
            .enumerate()
            .map(|(i, &l)| l + i + 1)
            .collect();
        for &d in &downs {
            steps[d - 1] = Step::Down;
        }
        let mut labels = BTreeMap::new();
        let mut used = vec![false; n + 1];
        for (i, (&d, &col)) in downs.iter().zip(&self.rook_cols).enumerate() {
            let label = (1..=col).filter(|&c| !used[c]).count();
            used[col] = true;
            let _ = self.row_lengths[i];
            labels.insert(d, label);
        }
        let path = MotzkinPath::new(steps).expect("staircase shape decodes to a Dyck path");
        LabeledMotzkinPath::new(path, labels).expect("rook ranks stay within step heights")
    }

    pub fn row_lengths(&self) -> &[usize] {
        &self.row_lengths
    }

    pub fn rook_cols(&self) -> &[usize] {
        &self.rook_cols
    }
}

impl fmt::Display for RookPlacement {
    /// `2,2;1->2,2->1`: shape, then `row->column` per rook.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, len) in self.row_lengths.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{len}")?;
        }
        write!(f, ";")?;
        for (i, col) in self.rook_cols.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}->{col}", i + 1)?;
        }
        Ok(())
    }
}

/// Product over down steps of `q^(d - 2i) [d - 2i + 1]_q`, with `d` the
/// position of the i-th down step. Equals the up-step-reduced step product
/// exactly, and the plain step product after a shift by `q^n`.
pub fn watson_weight(path: &MotzkinPath) -> QPoly {
    assert!(path.is_dyck(), "down-position weight requires a Dyck path");
    let mut acc = QPoly::one();
    for (i, d) in path.down_positions().into_iter().enumerate() {
        let shift = d - 2 * (i + 1);
        acc = (&acc * &qint(shift as u64 + 1)).shifted(shift);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{dyck_paths, labelings};

    fn labeled(s: &str) -> LabeledMotzkinPath {
        s.parse().unwrap()
    }

    #[test]
    fn placement_worked_example() {
        let rp = RookPlacement::from_labeled_dyck(&labeled("UUDD;2,1")).unwrap();
        assert_eq!(rp.row_lengths(), &[2, 2]);
        assert_eq!(rp.rook_cols(), &[2, 1]);
        assert_eq!(rp.to_string(), "2,2;1->2,2->1");
        assert_eq!(rp.to_labeled_dyck(), labeled("UUDD;2,1"));
    }

    #[test]
    fn all_ones_labels_walk_the_diagonal() {
        let rp = RookPlacement::from_labeled_dyck(&labeled("UDUDUD;1,1,1")).unwrap();
        assert_eq!(rp.row_lengths(), &[1, 2, 3]);
        assert_eq!(rp.rook_cols(), &[1, 2, 3]);
    }

    #[test]
    fn rejects_level_steps() {
        assert!(RookPlacement::from_labeled_dyck(&labeled("ULD;1")).is_err());
    }

    #[test]
    fn malformed_placements() {
        assert!(RookPlacement::new(vec![1, 2], vec![1, 1]).is_err()); // shared column
        assert!(RookPlacement::new(vec![1, 2], vec![1, 3]).is_err()); // outside shape
        assert!(RookPlacement::new(vec![2, 1], vec![1, 1]).is_err()); // shape not increasing
        assert!(RookPlacement::new(vec![1], vec![1, 1]).is_err()); // row/rook mismatch
        assert!(RookPlacement::new(vec![1, 1], vec![1, 2]).is_err()); // row 2 too short
    }

    #[test]
    fn roundtrip_exhaustive() {
        for half in 0..=5 {
            for d in dyck_paths(2 * half) {
                for lp in labelings(&d) {
                    let rp = RookPlacement::from_labeled_dyck(&lp).unwrap();
                    assert_eq!(rp.to_labeled_dyck(), lp, "roundtrip failed for {lp}");
                }
            }
        }
    }

    #[test]
    fn down_weight_examples() {
        // Down positions (4,7,8,9,10) sit at heights (3,4,3,2,1).
        let p: MotzkinPath = "UUUDUUDDDD".parse().unwrap();
        let heights = p.heights();
        let expected = [3, 4, 3, 2, 1];
        for (i, d) in p.down_positions().into_iter().enumerate() {
            assert_eq!(heights[d - 1], d - 2 * (i + 1) + 1);
            assert_eq!(heights[d - 1], expected[i]);
        }

        let ud: MotzkinPath = "UDUD".parse().unwrap();
        assert_eq!(watson_weight(&ud), QPoly::one());

        let total: QPoly = dyck_paths(4).iter().map(watson_weight).sum();
        assert_eq!(total, qint(3));
        let h_total: QPoly = dyck_paths(4).iter().map(MotzkinPath::h_poly).sum();
        assert_eq!(h_total, qint(3).shifted(2));
    }

    #[test]
    fn down_weight_matches_step_products() {
        for half in 0..=6 {
            for d in dyck_paths(2 * half) {
                let w = watson_weight(&d);
                assert_eq!(w, d.h_tilde_poly(), "reduced form mismatch on {d}");
                assert_eq!(w.shifted(half), d.h_poly(), "shifted form mismatch on {d}");
                let heights = d.heights();
                for (i, pos) in d.down_positions().into_iter().enumerate() {
                    assert_eq!(heights[pos - 1], pos - 2 * (i + 1) + 1, "height relation on {d}");
                }
            }
        }
    }
}

//! Young diagrams, skew diagrams, and the low-row data driving reverse fills.
//!
//! Boxes are addressed `(row, col)`, both 1-indexed, in English orientation:
//! row 1 is the longest row and column 1 is the leftmost column.

use serde::Serialize;

use crate::{Error, Result};

/// An integer partition: weakly decreasing positive row lengths.
///
/// Trailing zero rows are trimmed on construction, so two partitions are
/// equal exactly when their diagrams are. The empty partition is valid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition {
    rows: Vec<usize>,
}

impl Partition {
    /// Builds a partition, trimming trailing zeros.
    ///
    /// Errors if the rows are not weakly decreasing (an interior zero
    /// followed by a positive row is caught by the same check).
    pub fn new(mut rows: Vec<usize>) -> Result<Self> {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "partition rows must be weakly decreasing, got {rows:?}"
            )));
        }
        Ok(Partition { rows })
    }

    pub fn empty() -> Self {
        Partition { rows: Vec::new() }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns, i.e. the length of the first row.
    pub fn num_cols(&self) -> usize {
        self.rows.first().copied().unwrap_or(0)
    }

    pub fn area(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Length of row `r` (1-indexed); 0 beyond the last row.
    pub fn row_len(&self, r: usize) -> usize {
        if r == 0 {
            return 0;
        }
        self.rows.get(r - 1).copied().unwrap_or(0)
    }

    /// Height of column `c` (1-indexed); 0 beyond the last column.
    pub fn col_height(&self, c: usize) -> usize {
        if c == 0 {
            return 0;
        }
        self.rows.iter().take_while(|&&len| len >= c).count()
    }

    pub fn contains_box(&self, row: usize, col: usize) -> bool {
        row >= 1 && col >= 1 && col <= self.row_len(row)
    }

    /// Row-wise containment: every row of `other` fits inside this diagram.
    pub fn contains(&self, other: &Partition) -> bool {
        other
            .rows
            .iter()
            .enumerate()
            .all(|(i, &len)| self.row_len(i + 1) >= len)
    }

    /// The conjugate diagram (rows and columns exchanged).
    pub fn transpose(&self) -> Partition {
        let mut rows = Vec::with_capacity(self.num_cols());
        for c in 1..=self.num_cols() {
            rows.push(self.col_height(c));
        }
        Partition { rows }
    }

    /// Removes the rightmost column (one box from every row of maximal
    /// length). Errors on the empty partition.
    pub fn drop_last_column(&self) -> Result<Partition> {
        if self.is_empty() {
            return Err(Error::InvalidInput(
                "cannot drop a column from the empty partition".into(),
            ));
        }
        let cols = self.num_cols();
        let rows = self
            .rows
            .iter()
            .map(|&len| if len == cols { len - 1 } else { len })
            .collect();
        Partition::new(rows)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, len) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{len}")?;
        }
        write!(f, ")")
    }
}

/// A single box `(row, col)`, 1-indexed; the derived order is lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BoxRef {
    pub row: usize,
    pub col: usize,
}

impl BoxRef {
    pub fn new(row: usize, col: usize) -> Self {
        BoxRef { row, col }
    }
}

/// A skew diagram `outer / inner`. A straight shape has an empty inner part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::InvalidInput(format!(
                "inner shape {inner} does not fit inside outer shape {outer}"
            )));
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn straight(outer: Partition) -> Self {
        SkewShape {
            outer,
            inner: Partition::empty(),
        }
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn is_straight(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn num_rows(&self) -> usize {
        self.outer.num_rows()
    }

    pub fn area(&self) -> usize {
        self.outer.area() - self.inner.area()
    }

    /// Column range `(first, last)` of the boxes in row `r`; `first > last`
    /// means the row has no boxes.
    pub fn row_span(&self, r: usize) -> (usize, usize) {
        (self.inner.row_len(r) + 1, self.outer.row_len(r))
    }

    pub fn contains_box(&self, row: usize, col: usize) -> bool {
        self.outer.contains_box(row, col) && !self.inner.contains_box(row, col)
    }

    /// All boxes in lexicographic (row-major) order.
    pub fn boxes(&self) -> Vec<BoxRef> {
        let mut out = Vec::with_capacity(self.area());
        for r in 1..=self.num_rows() {
            let (lo, hi) = self.row_span(r);
            for c in lo..=hi {
                out.push(BoxRef::new(r, c));
            }
        }
        out
    }
}

impl From<Partition> for SkewShape {
    fn from(outer: Partition) -> Self {
        SkewShape::straight(outer)
    }
}

impl std::fmt::Display for SkewShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_straight() {
            write!(f, "{}", self.outer)
        } else {
            write!(f, "{} / {}", self.outer, self.inner)
        }
    }
}

/// Segment sizes of a diagram's low row, top segment first.
///
/// The low row of a diagram is the set of boxes with no box below them; it
/// splits into one segment per row, of size `row r minus row r+1`. By
/// convention the representation starts at the first nonzero segment, so a
/// canonical low row from [`low_row`] has a nonzero leading entry; triples
/// fed to [`low_row_step`] are positional and may start with zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LowRow {
    sizes: Vec<usize>,
}

impl LowRow {
    pub fn new(sizes: Vec<usize>) -> Self {
        LowRow { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn sum(&self) -> usize {
        self.sizes.iter().sum()
    }
}

impl std::fmt::Display for LowRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.sizes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Low row of a diagram, starting at its first nonzero segment.
///
/// The empty diagram has an empty low row; this is defined, not an error.
pub fn low_row(shape: &Partition) -> LowRow {
    let rows = shape.rows();
    if rows.is_empty() {
        return LowRow::new(Vec::new());
    }
    let diffs: Vec<usize> = (0..rows.len())
        .map(|i| rows[i] - rows.get(i + 1).copied().unwrap_or(0))
        .collect();
    // The last diff equals the last row length, which is positive.
    let first = diffs.iter().position(|&d| d != 0).unwrap();
    LowRow::new(diffs[first..].to_vec())
}

/// The low-row boxes themselves, in lexicographic order.
pub fn low_row_boxes(shape: &Partition) -> Vec<BoxRef> {
    let mut out = Vec::new();
    for r in 1..=shape.num_rows() {
        let below = shape.row_len(r + 1);
        for c in below + 1..=shape.row_len(r) {
            out.push(BoxRef::new(r, c));
        }
    }
    out
}

/// The reduced shape `(level^2k, p, p)` on which ranks are counted.
///
/// Requires `level >= 1` and `1 <= p <= level`; `k = 0` gives `(p, p)`.
pub fn reduced_shape(level: usize, k: usize, p: usize) -> Result<Partition> {
    if level == 0 {
        return Err(Error::InvalidInput("level must be positive".into()));
    }
    if p == 0 || p > level {
        return Err(Error::InvalidInput(format!(
            "p must satisfy 1 <= p <= level, got p={p} at level {level}"
        )));
    }
    let mut rows = vec![level; 2 * k];
    rows.push(p);
    rows.push(p);
    Partition::new(rows)
}

/// Splits `s >= 1` as `s = (k-1)*level + p` with `1 <= p <= level`.
pub(crate) fn s_decompose(level: usize, s: usize) -> Result<(usize, usize)> {
    if level == 0 {
        return Err(Error::InvalidInput("level must be positive".into()));
    }
    if s == 0 {
        return Err(Error::InvalidInput("s must be positive".into()));
    }
    let k = (s - 1) / level + 1;
    let p = s - (k - 1) * level;
    debug_assert!((1..=level).contains(&p));
    Ok((k, p))
}

/// The straight shape `(level^(s+2k-1), p, p)` counting level-`level`
/// tableaux at quantum degree `s >= 1`, where `s = (k-1)*level + p`.
///
/// This is the rim-hook extension of the two-row rectangle with its first
/// row already removed; [`add_rim_hook`] rebuilds the unquotiented chain.
pub fn quantum_shape(level: usize, s: usize) -> Result<Partition> {
    let (k, p) = s_decompose(level, s)?;
    let mut rows = vec![level; s + 2 * k - 1];
    rows.push(p);
    rows.push(p);
    Partition::new(rows)
}

/// Adds one border strip of `level + 2` boxes to `shape`, landing as the
/// chain of quantum shapes does: the first row shorter than `level` is
/// filled to `level`, and each following row grows to one more than the row
/// previously above it until the strip is used up.
///
/// Exposed for cross-checking [`quantum_shape`] box counts; requires every
/// row of `shape` to be at most `level` wide and errors if the strip does
/// not land exactly on a row boundary.
pub fn add_rim_hook(shape: &Partition, level: usize) -> Result<Partition> {
    if level == 0 {
        return Err(Error::InvalidInput("level must be positive".into()));
    }
    if shape.num_cols() > level {
        return Err(Error::InvalidInput(format!(
            "shape {shape} is wider than the level {level}"
        )));
    }
    let budget = level + 2;
    let first_narrow = shape
        .rows()
        .iter()
        .take_while(|&&len| len >= level)
        .count()
        + 1;
    let mut rows = shape.rows().to_vec();
    rows.resize(first_narrow.max(rows.len()), 0);
    let mut used = level - shape.row_len(first_narrow);
    rows[first_narrow - 1] = level;
    let mut r = first_narrow + 1;
    while used < budget {
        let target = shape.row_len(r - 1) + 1;
        let have = shape.row_len(r);
        if target < have || used + (target - have) > budget {
            return Err(Error::Internal(format!(
                "border strip of size {budget} does not land on a row boundary of {shape}"
            )));
        }
        used += target - have;
        if rows.len() < r {
            rows.resize(r, 0);
        }
        rows[r - 1] = target;
        r += 1;
    }
    Partition::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn partition_construction_trims_and_validates() {
        assert_eq!(part(&[3, 2, 0, 0]).rows(), &[3, 2]);
        assert_eq!(part(&[0, 0]).rows(), &[] as &[usize]);
        assert!(Partition::new(vec![2, 3]).is_err());
        assert!(Partition::new(vec![2, 0, 1]).is_err());
    }

    #[test]
    fn partition_geometry() {
        let p = part(&[9, 9, 5, 3]);
        assert_eq!(p.area(), 26);
        assert_eq!(p.num_cols(), 9);
        assert_eq!(p.col_height(1), 4);
        assert_eq!(p.col_height(4), 3);
        assert_eq!(p.col_height(6), 2);
        assert_eq!(p.col_height(10), 0);
        assert!(p.contains_box(3, 5));
        assert!(!p.contains_box(3, 6));
        assert!(p.contains(&part(&[9, 5, 5])));
        assert!(!p.contains(&part(&[9, 9, 6])));
    }

    #[test]
    fn transpose_matches_hand_computation() {
        assert_eq!(part(&[3, 2]).transpose(), part(&[2, 2, 1]));
        assert_eq!(part(&[2, 1]).transpose(), part(&[2, 1]));
        assert_eq!(part(&[2, 2, 1, 1]).transpose(), part(&[4, 2]));
        assert_eq!(part(&[6, 6, 6, 6, 3, 3]).transpose(), part(&[6, 6, 6, 4, 4, 4]));
        assert_eq!(Partition::empty().transpose(), Partition::empty());
    }

    #[test]
    fn drop_last_column_removes_rightmost_boxes() {
        assert_eq!(part(&[3, 3, 1]).drop_last_column().unwrap(), part(&[2, 2, 1]));
        assert_eq!(part(&[1, 1]).drop_last_column().unwrap(), Partition::empty());
        assert!(Partition::empty().drop_last_column().is_err());
    }

    #[test]
    fn drop_last_column_agrees_with_transposed_row_removal() {
        // Dropping the last column is conjugation-dual to dropping the last row.
        for rows in [
            vec![5, 3, 3, 1],
            vec![2, 2, 2],
            vec![7],
            vec![4, 4, 4, 4],
            vec![6, 5, 4, 3, 2, 1],
        ] {
            let p = part(&rows);
            let mut t_rows = p.transpose().rows().to_vec();
            t_rows.pop();
            let expect = Partition::new(t_rows).unwrap().transpose();
            assert_eq!(p.drop_last_column().unwrap(), expect);
        }
    }

    #[test]
    fn low_row_per_row_differences() {
        assert_eq!(low_row(&part(&[4, 4, 3, 3])).sizes(), &[1, 0, 3]);
        assert_eq!(low_row(&part(&[9, 9, 5, 3])).sizes(), &[4, 2, 3]);
        assert_eq!(low_row(&part(&[6, 6, 6, 6, 3, 3])).sizes(), &[3, 0, 3]);
        assert_eq!(low_row(&part(&[5])).sizes(), &[5]);
        assert_eq!(low_row(&part(&[2, 2])).sizes(), &[2]);
        assert_eq!(low_row(&Partition::empty()).sizes(), &[] as &[usize]);
    }

    #[test]
    fn low_row_sums_to_longest_row() {
        for rows in [
            vec![9, 9, 5, 3],
            vec![4, 4, 3, 3],
            vec![6, 6, 6, 6, 3, 3],
            vec![2, 1],
            vec![7],
        ] {
            let p = part(&rows);
            let lr = low_row(&p);
            assert_eq!(lr.sum(), p.num_cols());
            assert!(lr.sizes().len() <= p.num_rows());
            assert_ne!(lr.sizes().first(), Some(&0));
        }
    }

    #[test]
    fn low_row_boxes_in_lex_order() {
        assert_eq!(
            low_row_boxes(&part(&[2, 2, 1, 1])),
            vec![BoxRef::new(2, 2), BoxRef::new(4, 1)]
        );
        assert_eq!(
            low_row_boxes(&part(&[6, 6, 6, 6, 3, 3])),
            vec![
                BoxRef::new(4, 4),
                BoxRef::new(4, 5),
                BoxRef::new(4, 6),
                BoxRef::new(6, 1),
                BoxRef::new(6, 2),
                BoxRef::new(6, 3),
            ]
        );
        let boxes = low_row_boxes(&part(&[9, 9, 5, 3]));
        assert_eq!(boxes.len(), 9);
        assert!(boxes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn reduced_shape_examples() {
        assert_eq!(reduced_shape(6, 2, 3).unwrap(), part(&[6, 6, 6, 6, 3, 3]));
        assert_eq!(reduced_shape(2, 1, 1).unwrap(), part(&[2, 2, 1, 1]));
        assert_eq!(reduced_shape(1, 0, 1).unwrap(), part(&[1, 1]));
        assert_eq!(
            reduced_shape(10, 2, 2).unwrap(),
            part(&[10, 10, 10, 10, 2, 2])
        );
        assert_eq!(reduced_shape(5, 0, 4).unwrap(), part(&[4, 4]));
        assert!(reduced_shape(5, 1, 0).is_err());
        assert!(reduced_shape(5, 1, 6).is_err());
        for level in 1..=6 {
            for k in 0..=3 {
                for p in 1..=level {
                    let shape = reduced_shape(level, k, p).unwrap();
                    assert_eq!(shape.area(), 2 * k * level + 2 * p);
                }
            }
        }
    }

    #[test]
    fn quantum_shape_examples() {
        assert_eq!(quantum_shape(2, 1).unwrap(), part(&[2, 2, 1, 1]));
        assert_eq!(quantum_shape(2, 2).unwrap(), part(&[2, 2, 2, 2, 2]));
        assert_eq!(
            quantum_shape(4, 5).unwrap(),
            part(&[4, 4, 4, 4, 4, 4, 4, 4, 1, 1])
        );
        assert!(quantum_shape(4, 0).is_err());
    }

    #[test]
    fn quantum_shape_matches_rim_hook_chain() {
        // Independent route: extend (level, level) by s border strips of
        // size level + 2, then remove the first row.
        for level in 1..=5 {
            for s in 1..=6 {
                let mut nu = part(&[level, level]);
                for _ in 0..s {
                    nu = add_rim_hook(&nu, level).unwrap();
                }
                let direct = quantum_shape(level, s).unwrap();
                assert_eq!(nu.row_len(1), level);
                assert_eq!(
                    nu.rows()[1..],
                    *direct.rows(),
                    "level {level}, {s} strips"
                );
                assert_eq!(nu.area(), 2 * level + s * (level + 2));
            }
        }
    }

    #[test]
    fn skew_shape_validation_and_boxes() {
        let skew = SkewShape::new(part(&[2, 2]), part(&[1])).unwrap();
        assert_eq!(skew.area(), 3);
        assert_eq!(
            skew.boxes(),
            vec![BoxRef::new(1, 2), BoxRef::new(2, 1), BoxRef::new(2, 2)]
        );
        assert!(!skew.contains_box(1, 1));
        assert!(SkewShape::new(part(&[2]), part(&[3])).is_err());
        assert!(SkewShape::new(part(&[2, 1]), part(&[2, 2])).is_err());
    }

    #[test]
    fn box_order_is_lexicographic() {
        assert!(BoxRef::new(1, 9) < BoxRef::new(2, 1));
        assert!(BoxRef::new(2, 1) < BoxRef::new(2, 2));
    }
}

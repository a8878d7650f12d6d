//! Tableaux over Young diagrams and the fill algorithms that build them.
//!
//! A tableau assigns a flavor (a 1-indexed label) to every box of a shape.
//! [`forward_fill`] packs flavors row-major in increasing order;
//! [`reverse_fill`] packs them in decreasing order into the largest low-row
//! boxes; [`combined_fill`] runs the reverse pass for the high flavors and
//! the forward pass for the rest, which on the reduced shape produces a
//! valid filling whenever one exists. [`modify_tableau`] perturbs such a
//! filling into a second one, witnessing a count above one.

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::shapes::{low_row_boxes, reduced_shape, LowRow, Partition, SkewShape};
use crate::{Error, Result};

/// Per-flavor amounts: flavor `i` occurs `amounts[i-1]` times.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Content {
    amounts: Vec<usize>,
}

impl Content {
    pub fn new(amounts: Vec<usize>) -> Self {
        Content { amounts }
    }

    pub fn amounts(&self) -> &[usize] {
        &self.amounts
    }

    pub fn num_flavors(&self) -> usize {
        self.amounts.len()
    }

    /// Amount of `flavor` (1-indexed); 0 beyond the last flavor.
    pub fn amount(&self, flavor: usize) -> usize {
        if flavor == 0 {
            return 0;
        }
        self.amounts.get(flavor - 1).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.amounts.iter().sum()
    }

    pub fn is_sorted_descending(&self) -> bool {
        self.amounts.windows(2).all(|w| w[0] >= w[1])
    }
}

impl std::fmt::Display for Content {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.amounts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// A filling of a (possibly skew) shape with flavors.
///
/// Entries are stored row-major in one flat vector; `offsets[r]` is the
/// index of the first entry of 1-indexed row `r+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    shape: SkewShape,
    entries: Vec<usize>,
    offsets: Vec<usize>,
}

impl Tableau {
    /// Builds a tableau from per-row entry lists (top to bottom, each row
    /// left to right over the boxes the skew shape has in that row).
    pub fn new(shape: SkewShape, rows: Vec<Vec<usize>>) -> Result<Self> {
        if rows.len() != shape.num_rows() {
            return Err(Error::InvalidInput(format!(
                "expected {} rows of entries for shape {shape}, got {}",
                shape.num_rows(),
                rows.len()
            )));
        }
        let mut entries = Vec::with_capacity(shape.area());
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        for (i, row) in rows.iter().enumerate() {
            let (lo, hi) = shape.row_span(i + 1);
            let want = (hi + 1).saturating_sub(lo);
            if row.len() != want {
                return Err(Error::InvalidInput(format!(
                    "row {} of shape {shape} has {want} boxes, got {} entries",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().any(|&e| e == 0) {
                return Err(Error::InvalidInput("flavors are 1-indexed; 0 is not a flavor".into()));
            }
            entries.extend_from_slice(row);
            offsets.push(entries.len());
        }
        Ok(Tableau {
            shape,
            entries,
            offsets,
        })
    }

    pub fn shape(&self) -> &SkewShape {
        &self.shape
    }

    pub fn num_rows(&self) -> usize {
        self.shape.num_rows()
    }

    /// Entries of 1-indexed row `r`, left to right.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.entries[self.offsets[r - 1]..self.offsets[r]]
    }

    /// Flavor at box `(row, col)` (1-indexed), or None if the box is not in
    /// the shape.
    pub fn entry(&self, row: usize, col: usize) -> Option<usize> {
        if !self.shape.contains_box(row, col) {
            return None;
        }
        let (lo, _) = self.shape.row_span(row);
        Some(self.entries[self.offsets[row - 1] + (col - lo)])
    }

    /// The multiset of entries as per-flavor amounts (up to the largest
    /// flavor present).
    pub fn content(&self) -> Content {
        let n = self.entries.iter().copied().max().unwrap_or(0);
        let mut amounts = vec![0usize; n];
        for &e in &self.entries {
            amounts[e - 1] += 1;
        }
        Content::new(amounts)
    }

    fn with_swapped(&self, a: (usize, usize), b: (usize, usize)) -> Tableau {
        let idx = |(row, col): (usize, usize)| {
            let (lo, _) = self.shape.row_span(row);
            self.offsets[row - 1] + (col - lo)
        };
        let mut out = self.clone();
        out.entries.swap(idx(a), idx(b));
        out
    }
}

impl std::fmt::Display for Tableau {
    /// One line per row, entries space-separated; boxes removed by the
    /// inner shape print as dots.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let width = self
            .entries
            .iter()
            .map(|e| e.to_string().len())
            .max()
            .unwrap_or(1);
        for r in 1..=self.num_rows() {
            if r > 1 {
                writeln!(f)?;
            }
            let (lo, _) = self.shape.row_span(r);
            let mut first = true;
            for _ in 1..lo {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", ".")?;
                first = false;
            }
            for e in self.row(r) {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{e:>width$}")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl Serialize for Tableau {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[usize]> = (1..=self.num_rows()).map(|r| self.row(r)).collect();
        let mut s = serializer.serialize_struct("Tableau", 2)?;
        s.serialize_field("shape", &self.shape)?;
        s.serialize_field("rows", &rows)?;
        s.end()
    }
}

/// Rows weakly increasing left to right, columns strictly increasing top to
/// bottom.
pub fn is_semistandard(t: &Tableau) -> bool {
    let shape = t.shape();
    for r in 1..=t.num_rows() {
        let row = t.row(r);
        if row.windows(2).any(|w| w[0] > w[1]) {
            return false;
        }
        if r == 1 {
            continue;
        }
        let (lo, hi) = shape.row_span(r);
        for c in lo..=hi {
            if let (Some(above), Some(here)) = (t.entry(r - 1, c), t.entry(r, c)) {
                if above >= here {
                    return false;
                }
            }
        }
    }
    true
}

/// The extra condition under which a semistandard filling counts toward a
/// quantum Kostka number: for every `q >= 1` with a box at
/// `(r_plus_1 + q, 1)`, the flavor there is at least the flavor at
/// `(q, level)` whenever that box exists.
pub fn is_proper(t: &Tableau, level: usize, r_plus_1: usize) -> bool {
    for q in 1..=t.num_rows().saturating_sub(r_plus_1) {
        if let (Some(low), Some(high)) = (t.entry(r_plus_1 + q, 1), t.entry(q, level)) {
            if low < high {
                return false;
            }
        }
    }
    true
}

/// A mutable filling-in-progress over a straight shape; 0 marks an empty
/// box.
struct Grid {
    rows: Vec<Vec<usize>>,
}

impl Grid {
    fn empty(shape: &Partition) -> Self {
        Grid {
            rows: shape.rows().iter().map(|&len| vec![0; len]).collect(),
        }
    }

    fn into_tableau(self, shape: Partition) -> Result<Tableau> {
        if self.rows.iter().flatten().any(|&e| e == 0) {
            return Err(Error::Internal(
                "fill left empty boxes despite matching areas".into(),
            ));
        }
        Tableau::new(SkewShape::from(shape), self.rows)
    }

    /// Places `amount` copies of `flavor` into the largest low-row boxes of
    /// `shape` (a sub-shape of this grid); returns the shrunken shape.
    fn place_reverse(&mut self, shape: &Partition, flavor: usize, amount: usize) -> Result<Partition> {
        if amount == 0 {
            return Ok(shape.clone());
        }
        let boxes = low_row_boxes(shape);
        if amount > boxes.len() {
            return Err(Error::FillFailed(format!(
                "flavor {flavor} needs {amount} boxes but the low row has only {}",
                boxes.len()
            )));
        }
        let mut rows = shape.rows().to_vec();
        for b in &boxes[boxes.len() - amount..] {
            self.rows[b.row - 1][b.col - 1] = flavor;
            rows[b.row - 1] = rows[b.row - 1].min(b.col - 1);
        }
        Partition::new(rows)
    }

    /// Places flavors `1..` of `mu` row-major into the empty boxes of
    /// `shape` (a sub-shape of this grid), smallest boxes first.
    fn place_forward(&mut self, shape: &Partition, mu: &Content) -> Result<()> {
        let mut flavor = 1;
        let mut left = mu.amount(flavor);
        for r in 1..=shape.num_rows() {
            for c in 1..=shape.row_len(r) {
                while left == 0 {
                    flavor += 1;
                    if flavor > mu.num_flavors() {
                        return Err(Error::InvalidInput(format!(
                            "content {mu} has fewer entries than shape {shape} has boxes"
                        )));
                    }
                    left = mu.amount(flavor);
                }
                self.rows[r - 1][c - 1] = flavor;
                left -= 1;
            }
        }
        Ok(())
    }
}

/// Fills `shape` with `mu` flavor by flavor in increasing order, packing
/// each into the lexicographically smallest empty boxes.
///
/// Returns the raw filling; whether it is semistandard is the caller's
/// question ([`is_semistandard`]).
pub fn forward_fill(shape: &Partition, mu: &Content) -> Result<Tableau> {
    if mu.total() != shape.area() {
        return Err(Error::InvalidInput(format!(
            "content {mu} totals {}, shape {shape} has {} boxes",
            mu.total(),
            shape.area()
        )));
    }
    let mut grid = Grid::empty(shape);
    grid.place_forward(shape, mu)?;
    grid.into_tableau(shape.clone())
}

/// Fills `shape` with `mu` flavor by flavor in decreasing order, packing
/// each into the largest low-row boxes of what remains.
///
/// Fails if some flavor's amount exceeds the current low row. Returns the
/// raw filling; validation is the caller's question.
pub fn reverse_fill(shape: &Partition, mu: &Content) -> Result<Tableau> {
    if mu.total() != shape.area() {
        return Err(Error::InvalidInput(format!(
            "content {mu} totals {}, shape {shape} has {} boxes",
            mu.total(),
            shape.area()
        )));
    }
    let mut grid = Grid::empty(shape);
    let mut current = shape.clone();
    for flavor in (1..=mu.num_flavors()).rev() {
        current = grid.place_reverse(&current, flavor, mu.amount(flavor))?;
    }
    grid.into_tableau(shape.clone())
}

/// Transition of a positional three-segment low row `(l1, l2, l3)` under
/// removal of the `amount` largest low-row boxes, for diagrams whose rows
/// of maximal length have `level` boxes.
///
/// Requires exactly three segments summing to `level` and
/// `1 <= amount <= level`. The result again sums to `level`.
pub fn low_row_step(lr: &LowRow, amount: usize, level: usize) -> Result<LowRow> {
    let sizes = lr.sizes();
    if sizes.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "low-row step needs exactly 3 segments, got {lr}"
        )));
    }
    let (l1, l2, l3) = (sizes[0], sizes[1], sizes[2]);
    if l1 + l2 + l3 != level {
        return Err(Error::InvalidInput(format!(
            "low-row segments {lr} must sum to the level {level}"
        )));
    }
    if amount == 0 || amount > level {
        return Err(Error::InvalidInput(format!(
            "amount {amount} must be between 1 and the level {level}"
        )));
    }
    let next = if amount <= l3 {
        [l1, l2 + amount, l3 - amount]
    } else if amount <= l2 + l3 {
        [l1 + amount - l3, l2 + 2 * l3 - amount, 0]
    } else {
        let t = amount - l2 - l3;
        [t, level - t - l3, l3]
    };
    Ok(LowRow::new(next.to_vec()))
}

/// Fills the reduced shape `(level^2k, p, p)` with weakly decreasing
/// content: flavors `2k+2..=n` go in by reverse fill, the rest by forward
/// fill, except that the boundary slides down when it must: whenever the
/// next flavor below the boundary would occupy one column across the two
/// short rows of what remains (its amount exceeds `l2 + l3` while
/// `l3 > 0`), that flavor joins the reverse pass too. With the tail sum
/// exactly `p` the slide never happens (`l2 + l3 = level` there), so
/// rank-one fillings always split at `2k+1`.
///
/// Requires the content total to match the shape area, every amount at
/// most `level`, and the tail sum `Λ = Σ_{i>=2k+2} amounts[i]` at least
/// `p`; under those conditions the result is always a proper semistandard
/// tableau. Each reverse step is cross-checked against [`low_row_step`],
/// the staircase form `(level^j, x, y)` of the remaining shape (at most
/// three low-row segments, which is what forces propriety), and the bound
/// `l3 <= p` (`l3` never grows; `l1` can legitimately exceed `level - p`
/// after a step that empties the bottom row).
pub fn combined_fill(level: usize, k: usize, p: usize, mu: &Content) -> Result<Tableau> {
    let shape = reduced_shape(level, k, p)?;
    if !mu.is_sorted_descending() {
        return Err(Error::InvalidInput(format!(
            "content {mu} must be sorted in weakly decreasing order"
        )));
    }
    if mu.amount(1) > level {
        return Err(Error::InvalidInput(format!(
            "content {mu} has an amount above the level {level}"
        )));
    }
    if mu.total() != shape.area() {
        return Err(Error::InvalidInput(format!(
            "content {mu} totals {}, but 2(k*level + p) = {}",
            mu.total(),
            shape.area()
        )));
    }
    let n = mu.num_flavors();
    let head = 2 * k + 1;
    let tail_sum: usize = mu.amounts().iter().skip(head).sum();
    if tail_sum < p {
        return Err(Error::InvalidInput(format!(
            "amounts of flavors above {head} sum to {tail_sum}, below p = {p}; no filling exists"
        )));
    }

    let mut grid = Grid::empty(&shape);
    let mut current = shape.clone();
    // Positional low-row window over the bottom three distinct segments;
    // `window_top` is the row playing position 1 (0 = a virtual full row
    // above the shape, covering k = 0).
    let mut triple = LowRow::new(vec![level - p, 0, p]);
    let mut window_top = 2 * k as isize;
    // Flavors above `head_end` go in by reverse fill. That starts as the
    // tail past 2k+1, but grows downward when the next head flavor would
    // land in one column across the two short rows (it exceeds l2 + l3
    // while l3 > 0): forward-filling it there would repeat a flavor in a
    // column, so it joins the reverse pass instead.
    let mut head_end = head.min(n);
    let mut flavor = n;
    while flavor > head_end {
        let amount = mu.amount(flavor);
        if amount > 0 {
            let slides = amount > triple.sizes()[1] + triple.sizes()[2];
            current = grid.place_reverse(&current, flavor, amount).map_err(|e| {
                Error::Internal(format!("reverse pass failed despite valid input: {e}"))
            })?;
            triple = low_row_step(&triple, amount, level)?;
            if slides {
                window_top -= 1;
            }
            let len = |r: isize| -> usize {
                if r <= 0 {
                    level
                } else {
                    current.row_len(r as usize)
                }
            };
            let derived = [
                len(window_top).wrapping_sub(len(window_top + 1)),
                len(window_top + 1).wrapping_sub(len(window_top + 2)),
                len(window_top + 2),
            ];
            if derived != [triple.sizes()[0], triple.sizes()[1], triple.sizes()[2]] {
                return Err(Error::Internal(format!(
                    "low-row transition predicted {triple} but the shape {current} gives {derived:?}"
                )));
            }
            let rows = current.rows();
            let staircase =
                rows.len() <= 2 || rows[..rows.len() - 2].iter().all(|&len| len == level);
            if !staircase {
                return Err(Error::Internal(format!(
                    "shape {current} has more than three low-row segments"
                )));
            }
            if triple.sizes()[2] > p {
                return Err(Error::Internal(format!(
                    "low row {triple} escapes the bound l3 <= {p}"
                )));
            }
        }
        flavor -= 1;
        if flavor == head_end
            && head_end >= 1
            && triple.sizes()[2] > 0
            && mu.amount(head_end) > triple.sizes()[1] + triple.sizes()[2]
        {
            head_end -= 1;
        }
    }

    let head_content = Content::new(mu.amounts()[..head_end].to_vec());
    if head_content.total() != current.area() {
        return Err(Error::Internal(format!(
            "flavors 1..={head} total {} but {} boxes remain",
            head_content.total(),
            current.area()
        )));
    }
    grid.place_forward(&current, &head_content)?;

    let t = grid.into_tableau(shape)?;
    if !is_semistandard(&t) || !is_proper(&t, level, 2) {
        return Err(Error::Internal(format!(
            "combined fill produced an invalid tableau for {mu} at level {level}"
        )));
    }
    Ok(t)
}

/// Produces a second valid filling from a [`combined_fill`] tableau, or
/// None when the filling is forced to be unique (tail sum `Λ <= p`, or
/// content maximal: at least `n - 3` amounts equal to the full row width).
///
/// The move swaps one box in an anchor row `r` with one in row `r + 1`: at
/// the first column whose flavor jumps by more than one between the rows,
/// take the largest flavor `y` in row `r` below the jump target, and trade
/// its rightmost box for the leftmost box of `y + 1` in row `r + 1`. The
/// anchor is normally the lowest row free of tail flavors (those past
/// `2k + 1`), but narrow rows can strand the jump elsewhere, so every other
/// row is tried as a fallback; whatever comes back was checked to be a
/// genuinely different valid filling.
pub fn modify_tableau(t: &Tableau, k: usize, p: usize) -> Option<Tableau> {
    let amounts = t.content();
    let n = amounts.amounts().iter().filter(|&&a| a > 0).count();
    let width = t.shape().outer().num_cols();
    let head = 2 * k + 1;
    let tail_sum: usize = amounts.amounts().iter().skip(head).sum();
    if tail_sum <= p {
        return None;
    }
    let full_amounts = amounts.amounts().iter().filter(|&&a| a == width).count();
    if full_amounts + 3 >= n {
        return None;
    }

    let num_rows = t.num_rows();
    let canonical = (1..num_rows)
        .rev()
        .find(|&r| t.row(r).iter().all(|&e| e <= head));
    let fallbacks = (1..num_rows).rev().filter(|&r| Some(r) != canonical);
    canonical
        .into_iter()
        .chain(fallbacks)
        .find_map(|r| swap_across_jump(t, r, width))
}

/// One attempt of the swap described at [`modify_tableau`], anchored at
/// row `r`; None when the pieces are missing or the result is not a new
/// valid filling.
fn swap_across_jump(t: &Tableau, r: usize, width: usize) -> Option<Tableau> {
    let jump_col = (1..=t.shape().outer().row_len(r + 1)).find(|&c| {
        match (t.entry(r, c), t.entry(r + 1, c)) {
            (Some(a), Some(b)) => b > a + 1,
            _ => false,
        }
    })?;
    let b = t.entry(r + 1, jump_col)?;

    let row_r = t.row(r);
    let y = *row_r.iter().filter(|&&e| e < b).max()?;
    let y_idx = row_r.len() - 1 - row_r.iter().rev().position(|&e| e == y)?;
    let y_col = t.shape().row_span(r).0 + y_idx;
    let z = y + 1;
    let z_col = t.shape().row_span(r + 1).0 + t.row(r + 1).iter().position(|&e| e == z)?;

    let swapped = t.with_swapped((r, y_col), (r + 1, z_col));
    if swapped != *t && is_semistandard(&swapped) && is_proper(&swapped, width, 2) {
        Some(swapped)
    } else {
        None
    }
}

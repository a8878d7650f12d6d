//! Exact counting and enumeration of semistandard tableaux.
//!
//! Three counting regimes share one search engine:
//!
//! * [`count_tableaux`] counts semistandard tableaux of a (possibly skew)
//!   shape with prescribed content, the classical Kostka number;
//! * [`count_proper_tableaux`] restricts to fillings that also satisfy the
//!   level-`l` propriety condition of [`crate::fills::is_proper`];
//! * [`quantum_kostka`] counts proper fillings of the full quantum shape
//!   and cross-checks the answer against the reduced shape, where the
//!   forced top rows have been stripped along with their content.
//!
//! [`enumerate_tableaux`] materializes the fillings the counters count, in
//! lexicographic order of the row-major entry sequence.
//!
//! Counts are returned as arbitrary-precision naturals: Kostka numbers grow
//! combinatorially and a silent overflow would corrupt every result built
//! on top of them. An optional cap lets callers that only need to know
//! "zero, one, or more" stop the search early.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::fills::{Content, Tableau};
use crate::shapes::{quantum_shape, reduced_shape, s_decompose, Partition, SkewShape};
use crate::{Error, Result};

/// Number of semistandard tableaux of `shape` with content `mu`.
///
/// With `cap: Some(c)` the search stops as soon as `c` fillings have been
/// found and returns a value that is `>= c`; the result is exact whenever it
/// is below the cap. Capped calls are how 0/1/many classification queries
/// avoid full enumeration.
pub fn count_tableaux(shape: &SkewShape, mu: &Content, cap: Option<u64>) -> Result<BigUint> {
    check_area(shape, mu)?;
    count_impl(shape, mu, None, cap)
}

/// Number of semistandard tableaux of the straight `shape`, content `mu`,
/// that in addition satisfy the level-`level` propriety condition.
pub fn count_proper_tableaux(shape: &Partition, mu: &Content, level: usize) -> Result<BigUint> {
    count_proper_tableaux_impl(shape, mu, level, None)
}

/// [`count_proper_tableaux`] with an early exit: the result is exact if it
/// is below `cap`, and otherwise some value `>= cap`.
pub fn count_proper_tableaux_capped(
    shape: &Partition,
    mu: &Content,
    level: usize,
    cap: u64,
) -> Result<BigUint> {
    count_proper_tableaux_impl(shape, mu, level, Some(cap))
}

fn count_proper_tableaux_impl(
    shape: &Partition,
    mu: &Content,
    level: usize,
    cap: Option<u64>,
) -> Result<BigUint> {
    check_level(shape, level)?;
    let skew = SkewShape::straight(shape.clone());
    check_area(&skew, mu)?;
    count_impl(&skew, mu, Some(level), cap)
}

/// Quantum Kostka number for level `level` and `s` added rim hooks, computed
/// two independent ways.
///
/// Writing `s = (k-1)*level + p` with `1 <= p <= level`, the content `mu`
/// must satisfy `sum(mu) = 2*(k*level + p)`. The first computation counts
/// proper tableaux on the full quantum shape with `s - 1` extra full-row
/// flavors prepended to `mu`; those flavors are forced into the top rows, so
/// the count must equal the proper count on the reduced shape with content
/// `mu` alone. Both are computed and a mismatch is reported as an internal
/// error rather than returned.
pub fn quantum_kostka(level: usize, s: usize, mu: &Content) -> Result<BigUint> {
    let (k, p) = s_decompose(level, s)?;
    let expected = 2 * (k * level + p);
    if mu.total() != expected {
        return Err(Error::InvalidInput(format!(
            "content total {} does not match 2(kl + p) = {expected} for level {level}, s = {s}",
            mu.total(),
        )));
    }

    let full_shape = quantum_shape(level, s)?;
    let mut full_amounts = vec![level; s - 1];
    full_amounts.extend_from_slice(mu.amounts());
    let full_content = Content::new(full_amounts);
    let full = count_impl(
        &SkewShape::straight(full_shape),
        &full_content,
        Some(level),
        None,
    )?;

    let reduced = count_proper_tableaux(&reduced_shape(level, k, p)?, mu, level)?;
    if full != reduced {
        return Err(Error::Internal(format!(
            "quantum count {full} on the full shape disagrees with {reduced} on the reduced shape \
             (level {level}, s = {s}, content {mu})",
        )));
    }
    Ok(full)
}

/// Up to `limit` tableaux of `shape` with content `mu`, in lexicographic
/// order of the row-major entry sequence. With `proper` set, only fillings
/// passing the level-`level` propriety condition are produced (and `level`
/// is ignored otherwise). The output is deterministic.
pub fn enumerate_tableaux(
    shape: &SkewShape,
    mu: &Content,
    level: usize,
    proper: bool,
    limit: usize,
) -> Result<Vec<Tableau>> {
    check_area(shape, mu)?;
    let proper_level = if proper {
        check_level(shape.outer(), level)?;
        Some(level)
    } else {
        None
    };
    if limit == 0 {
        return Ok(Vec::new());
    }

    let frame = Frame::build(shape, mu.num_flavors(), proper_level);
    let mut flats: Vec<Vec<usize>> = Vec::new();
    let mut search = Search::new(&frame, mu);
    let _ = search.run(0, &mut |entries| {
        flats.push(entries.to_vec());
        if flats.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });

    flats
        .into_iter()
        .map(|flat| {
            let mut rows = Vec::with_capacity(shape.num_rows());
            let mut cursor = 0;
            for r in 1..=shape.num_rows() {
                let (lo, hi) = shape.row_span(r);
                let width = (hi + 1).saturating_sub(lo);
                rows.push(flat[cursor..cursor + width].to_vec());
                cursor += width;
            }
            Tableau::new(shape.clone(), rows)
        })
        .collect()
}

fn check_area(shape: &SkewShape, mu: &Content) -> Result<()> {
    if mu.total() != shape.area() {
        return Err(Error::InvalidInput(format!(
            "content total {} does not match the area {} of {shape}",
            mu.total(),
            shape.area(),
        )));
    }
    Ok(())
}

fn check_level(shape: &Partition, level: usize) -> Result<()> {
    if level == 0 {
        return Err(Error::InvalidInput("level must be at least 1".into()));
    }
    if shape.num_cols() > level {
        return Err(Error::InvalidInput(format!(
            "shape {shape} is wider than the level {level}",
        )));
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct MemoKey {
    outer: Vec<usize>,
    inner: Vec<usize>,
    amounts: Vec<usize>,
    proper_level: Option<usize>,
}

/// Finished counts, keyed by the query exactly as posed.
///
/// The content is deliberately not sorted into a canonical order: the count
/// is invariant under reordering, and the tests that verify that invariance
/// must not be short-circuited by the cache. Concurrent fills of the same
/// key are benign because the counts are pure.
static COUNT_MEMO: LazyLock<RwLock<HashMap<MemoKey, BigUint>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn count_impl(
    shape: &SkewShape,
    mu: &Content,
    proper_level: Option<usize>,
    cap: Option<u64>,
) -> Result<BigUint> {
    let key = MemoKey {
        outer: shape.outer().rows().to_vec(),
        inner: shape.inner().rows().to_vec(),
        amounts: mu.amounts().to_vec(),
        proper_level,
    };
    if let Some(hit) = COUNT_MEMO.read().expect("count memo poisoned").get(&key) {
        // An exact stored count satisfies the capped contract as well.
        return Ok(hit.clone());
    }

    let frame = Frame::build(shape, mu.num_flavors(), proper_level);
    let mut search = Search::new(&frame, mu);
    let mut overflow = BigUint::zero();
    let mut tally: u64 = 0;
    let _ = search.run(0, &mut |_| {
        tally += 1;
        if tally == u64::MAX {
            overflow += tally;
            tally = 0;
        }
        match cap {
            Some(c) if !overflow.is_zero() || tally >= c => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    });
    let count = overflow + tally;

    if cap.is_none() {
        COUNT_MEMO
            .write()
            .expect("count memo poisoned")
            .insert(key, count.clone());
    }
    Ok(count)
}

/// Static per-box search data, independent of the content being placed.
struct BoxMeta {
    row: usize,
    /// Index of the box to the left in the same row, if any.
    left: Option<usize>,
    /// Index of the box directly above, if any.
    above: Option<usize>,
    /// Index of the box two rows up in the level-th column, if the propriety
    /// condition ties this box to one.
    partner: Option<usize>,
    /// Largest flavor this box can hold: everything strictly below it in its
    /// column needs a strictly larger flavor.
    max_flavor: usize,
    row_start: bool,
}

struct Frame {
    boxes: Vec<BoxMeta>,
    /// Per row `r`, the smallest entry any box in a row below `r` could ever
    /// hold, ignoring content; used to detect stranded flavors.
    tail_floor: Vec<usize>,
}

impl Frame {
    fn build(shape: &SkewShape, num_flavors: usize, proper_level: Option<usize>) -> Frame {
        let nrows = shape.num_rows();
        let mut spans = vec![(1usize, 0usize); nrows + 1];
        let mut offsets = vec![0usize; nrows + 1];
        let mut total = 0;
        for r in 1..=nrows {
            spans[r] = shape.row_span(r);
            offsets[r] = total;
            total += (spans[r].1 + 1).saturating_sub(spans[r].0);
        }
        let index_of = |r: usize, c: usize| -> Option<usize> {
            if r == 0 || r > nrows {
                return None;
            }
            let (lo, hi) = spans[r];
            (lo <= c && c <= hi).then(|| offsets[r] + (c - lo))
        };

        let mut boxes = Vec::with_capacity(total);
        let mut min_entries = Vec::with_capacity(total);
        let mut row_floor = vec![usize::MAX; nrows + 2];
        for r in 1..=nrows {
            let (lo, hi) = spans[r];
            for c in lo..=hi {
                let above = index_of(r.wrapping_sub(1), c);
                let partner = match proper_level {
                    Some(level) if c == 1 && r >= 3 => index_of(r - 2, level),
                    _ => None,
                };
                let below = (r + 1..)
                    .take_while(|&rr| index_of(rr, c).is_some())
                    .count();
                let min_entry = above.map_or(1, |j| min_entries[j] + 1);
                min_entries.push(min_entry);
                row_floor[r] = row_floor[r].min(min_entry);
                boxes.push(BoxMeta {
                    row: r,
                    left: (c > lo).then(|| index_of(r, c - 1)).flatten(),
                    above,
                    partner,
                    max_flavor: num_flavors.saturating_sub(below),
                    row_start: c == lo,
                });
            }
        }

        let mut tail_floor = vec![usize::MAX; nrows + 2];
        for r in (1..=nrows).rev() {
            tail_floor[r] = tail_floor[r + 1].min(row_floor[r + 1]);
        }
        Frame { boxes, tail_floor }
    }
}

/// Depth-first placement of flavors into boxes in row-major order.
///
/// At each box the admissible flavors form an interval: at least the left
/// neighbor, strictly more than the box above, at least the propriety
/// partner, and small enough that the column below it can still be completed.
/// On entering a row, any still-unplaced flavor smaller than everything the
/// remaining boxes can hold proves the branch dead.
struct Search<'a> {
    frame: &'a Frame,
    remaining: Vec<usize>,
    entries: Vec<usize>,
}

impl Search<'_> {
    fn new<'a>(frame: &'a Frame, mu: &Content) -> Search<'a> {
        Search {
            frame,
            remaining: mu.amounts().to_vec(),
            entries: vec![0; frame.boxes.len()],
        }
    }

    fn run(
        &mut self,
        idx: usize,
        on_filling: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if idx == self.frame.boxes.len() {
            return on_filling(&self.entries);
        }
        let meta = &self.frame.boxes[idx];
        let mut lb = 1;
        if let Some(j) = meta.left {
            lb = lb.max(self.entries[j]);
        }
        if let Some(j) = meta.above {
            lb = lb.max(self.entries[j] + 1);
        }
        if let Some(j) = meta.partner {
            lb = lb.max(self.entries[j]);
        }

        if meta.row_start {
            let floor = lb
                .min(self.frame.tail_floor[meta.row])
                .min(self.remaining.len() + 1);
            if self.remaining[..floor - 1].iter().any(|&left| left > 0) {
                return ControlFlow::Continue(());
            }
        }

        for flavor in lb..=meta.max_flavor {
            if self.remaining[flavor - 1] == 0 {
                continue;
            }
            self.remaining[flavor - 1] -= 1;
            self.entries[idx] = flavor;
            let flow = self.run(idx + 1, on_filling);
            self.remaining[flavor - 1] += 1;
            if flow.is_break() {
                return flow;
            }
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fills::{combined_fill, modify_tableau};

    fn part(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    fn content(amounts: &[usize]) -> Content {
        Content::new(amounts.to_vec())
    }

    fn straight(rows: &[usize]) -> SkewShape {
        SkewShape::straight(part(rows))
    }

    fn count(shape: &SkewShape, amounts: &[usize]) -> BigUint {
        count_tableaux(shape, &content(amounts), None).unwrap()
    }

    #[test]
    fn classical_counts_match_hand_enumeration() {
        for n in 1..=5 {
            assert_eq!(count(&straight(&[n]), &[n]), BigUint::from(1u32));
        }
        // 2x2 with four distinct flavors: only the two standard fillings.
        assert_eq!(count(&straight(&[2, 2]), &[1, 1, 1, 1]), BigUint::from(2u32));
        // Two of each of three flavors on 2x3: the bottom row [2,3,3] works,
        // [2,2,3] collides with the top row's trailing 3.
        assert_eq!(count(&straight(&[3, 3]), &[2, 2, 2]), BigUint::from(1u32));
        // Standard fillings of the staircase (3,2,1).
        assert_eq!(
            count(&straight(&[3, 2, 1]), &[1, 1, 1, 1, 1, 1]),
            BigUint::from(16u32)
        );
        // Empty shape: exactly the empty filling.
        assert_eq!(count(&SkewShape::straight(Partition::empty()), &[]), BigUint::from(1u32));
    }

    #[test]
    fn skew_counts_ignore_inner_boxes() {
        let shape = SkewShape::new(part(&[2, 2]), part(&[1])).unwrap();
        assert_eq!(
            count_tableaux(&shape, &content(&[1, 1, 1]), None).unwrap(),
            BigUint::from(2u32)
        );
    }

    #[test]
    fn counts_are_invariant_under_content_reordering() {
        let shape = straight(&[4, 3, 1]);
        let base = count(&shape, &[3, 2, 2, 1]);
        for perm in [
            [3, 2, 1, 2],
            [2, 3, 2, 1],
            [1, 2, 2, 3],
            [2, 1, 3, 2],
        ] {
            assert_eq!(count(&shape, &perm), base);
        }
        assert!(base > BigUint::zero());
    }

    #[test]
    fn unique_classical_count_matches_the_filled_figure() {
        let shape = straight(&[6, 6, 6, 6, 3, 3]);
        let mu = content(&[6, 6, 5, 5, 5, 2, 1]);
        assert_eq!(count_tableaux(&shape, &mu, None).unwrap(), BigUint::from(1u32));

        let found = enumerate_tableaux(&shape, &mu, 6, false, 10).unwrap();
        let filled = combined_fill(6, 2, 3, &mu).unwrap();
        assert_eq!(found, vec![filled]);
    }

    #[test]
    fn proper_counts_filter_the_classical_ones() {
        // A single column of four is forced and proper.
        assert_eq!(
            count_proper_tableaux(&part(&[1, 1]), &content(&[1, 1]), 1).unwrap(),
            BigUint::from(1u32)
        );
        // Of the nine standard fillings of (2,2,1,1), propriety at level 2
        // keeps the four whose third and fourth column-1 entries dominate
        // the second-column entries two rows up.
        assert_eq!(
            count_tableaux(&straight(&[2, 2, 1, 1]), &content(&[1, 1, 1, 1, 1, 1]), None).unwrap(),
            BigUint::from(9u32)
        );
        assert_eq!(
            count_proper_tableaux(&part(&[2, 2, 1, 1]), &content(&[1, 1, 1, 1, 1, 1]), 2).unwrap(),
            BigUint::from(4u32)
        );
        // The forced filling on a tall reduced shape.
        assert_eq!(
            count_proper_tableaux(
                &part(&[5, 5, 5, 5, 5, 5, 2, 2]),
                &content(&[5, 5, 5, 5, 5, 3, 3, 3]),
                5
            )
            .unwrap(),
            BigUint::from(1u32)
        );
    }

    #[test]
    fn proper_count_with_two_exhibited_fillings() {
        let shape = part(&[10, 10, 10, 10, 2, 2]);
        let mu = content(&[10, 8, 8, 7, 6, 3, 1, 1]);
        let n = count_proper_tableaux(&shape, &mu, 10).unwrap();
        assert_eq!(n, BigUint::from(23u32));
    }

    #[test]
    fn quantum_count_agrees_with_reduced_shape() {
        // level 6, k = 2, p = 3, so s = 9: the reduced count is the unique
        // figure checked above.
        assert_eq!(
            quantum_kostka(6, 9, &content(&[6, 6, 5, 5, 5, 2, 1])).unwrap(),
            BigUint::from(1u32)
        );
        // level 2, s = 1: full and reduced shapes coincide at (2,2,1,1).
        assert_eq!(
            quantum_kostka(2, 1, &content(&[2, 2, 1, 1])).unwrap(),
            BigUint::from(1u32)
        );
        // level 1, s = 1: a single forced column of four.
        assert_eq!(
            quantum_kostka(1, 1, &content(&[1, 1, 1, 1])).unwrap(),
            BigUint::from(1u32)
        );
    }

    #[test]
    fn quantum_count_validates_the_content_total() {
        let err = quantum_kostka(1, 1, &content(&[1, 1])).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)), "got {err:?}");
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let shape = straight(&[3, 2, 1]);
        let mu = content(&[1, 1, 1, 1, 1, 1]);
        let all = enumerate_tableaux(&shape, &mu, 0, false, usize::MAX).unwrap();
        assert_eq!(BigUint::from(all.len()), count_tableaux(&shape, &mu, None).unwrap());

        let flatten = |t: &Tableau| -> Vec<usize> {
            (1..=t.num_rows()).flat_map(|r| t.row(r).to_vec()).collect()
        };
        for pair in all.windows(2) {
            assert!(flatten(&pair[0]) < flatten(&pair[1]));
        }

        assert_eq!(
            enumerate_tableaux(&straight(&[1]), &content(&[1]), 0, false, 10).unwrap(),
            vec![Tableau::new(straight(&[1]), vec![vec![1]]).unwrap()]
        );
        assert_eq!(
            enumerate_tableaux(&shape, &mu, 0, false, 3).unwrap().len(),
            3
        );
        assert!(enumerate_tableaux(&shape, &mu, 0, false, 0).unwrap().is_empty());
    }

    #[test]
    fn enumeration_contains_the_constructed_fillings() {
        let mu = content(&[10, 8, 8, 7, 6, 3, 1, 1]);
        let filled = combined_fill(10, 2, 2, &mu).unwrap();
        let swapped = modify_tableau(&filled, 2, 2).unwrap();

        let shape = straight(&[10, 10, 10, 10, 2, 2]);
        let first_two = enumerate_tableaux(&shape, &mu, 10, true, 2).unwrap();
        assert_eq!(first_two.len(), 2);

        let all = enumerate_tableaux(&shape, &mu, 10, true, usize::MAX).unwrap();
        assert_eq!(
            BigUint::from(all.len()),
            count_proper_tableaux(shape.outer(), &mu, 10).unwrap()
        );
        assert!(all.contains(&filled));
        assert!(all.contains(&swapped));
    }

    #[test]
    fn capped_counts_short_circuit() {
        let shape = straight(&[3, 2, 1]);
        let mu = content(&[1, 1, 1, 1, 1, 1]);
        let capped = count_tableaux(&shape, &mu, Some(2)).unwrap();
        assert!(capped >= BigUint::from(2u32));
        // A cap above the true count leaves the result exact.
        assert_eq!(
            count_tableaux(&straight(&[3, 3]), &content(&[2, 2, 2]), Some(5)).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            count_proper_tableaux_capped(
                &part(&[2, 2, 1, 1]),
                &content(&[1, 1, 1, 1, 1, 1]),
                2,
                100
            )
            .unwrap(),
            BigUint::from(4u32)
        );
        assert!(
            count_proper_tableaux_capped(&part(&[2, 2, 1, 1]), &content(&[1, 1, 1, 1, 1, 1]), 2, 2)
                .unwrap()
                >= BigUint::from(2u32)
        );
    }

    #[test]
    fn unique_fillings_survive_dropping_the_final_column() {
        // Whenever the count is one, dropping the final column of the unique
        // filling (and its flavors from the content) must leave a count of
        // one again. Sweep all small straight shapes and contents.
        let partitions = |n: usize| -> Vec<Vec<usize>> {
            fn rec(left: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if left == 0 {
                    out.push(prefix.clone());
                    return;
                }
                for next in (1..=left.min(max)).rev() {
                    prefix.push(next);
                    rec(left - next, next, prefix, out);
                    prefix.pop();
                }
            }
            let mut out = Vec::new();
            rec(n, n, &mut Vec::new(), &mut out);
            out
        };
        let compositions = |n: usize| -> Vec<Vec<usize>> {
            fn rec(left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if left == 0 {
                    out.push(prefix.clone());
                    return;
                }
                for next in 1..=left {
                    prefix.push(next);
                    rec(left - next, prefix, out);
                    prefix.pop();
                }
            }
            let mut out = Vec::new();
            rec(n, &mut Vec::new(), &mut out);
            out
        };

        let mut checked = 0;
        for n in 1..=7 {
            for rows in partitions(n) {
                let shape = part(&rows);
                for amounts in compositions(n) {
                    let mu = content(&amounts);
                    let skew = SkewShape::straight(shape.clone());
                    if count_tableaux(&skew, &mu, Some(2)).unwrap() != BigUint::from(1u32) {
                        continue;
                    }
                    let unique = enumerate_tableaux(&skew, &mu, 0, false, 2).unwrap();
                    assert_eq!(unique.len(), 1);

                    let mut reduced_amounts = amounts.clone();
                    for r in 1..=shape.num_rows() {
                        if shape.row_len(r) == shape.num_cols() {
                            let flavor = unique[0].entry(r, shape.num_cols()).unwrap();
                            reduced_amounts[flavor - 1] -= 1;
                        }
                    }
                    let dropped = shape.drop_last_column().unwrap();
                    assert_eq!(
                        count_tableaux(
                            &SkewShape::straight(dropped),
                            &content(&reduced_amounts),
                            None
                        )
                        .unwrap(),
                        BigUint::from(1u32),
                        "shape {shape}, content {mu}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 50, "only {checked} unique instances swept");
    }

    #[test]
    fn validation_rejects_malformed_queries() {
        let err = count_tableaux(&straight(&[2, 2]), &content(&[1, 1, 1]), None).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));

        let err = count_proper_tableaux(&part(&[3, 1]), &content(&[2, 2]), 2).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));

        let err = count_proper_tableaux(&part(&[1]), &content(&[1]), 0).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }
}

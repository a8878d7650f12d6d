//! First Chern classes of rank-one bundles: Casimir numbers, 4-point
//! degrees, F-curve intersection numbers, and the decomposition into
//! level-one bundles.
//!
//! The chain of tools, bottom to top:
//!
//! * [`casimir`] evaluates the Casimir number of a weight exactly;
//! * [`degree4`] is the degree of a 4-point bundle's first Chern class on
//!   the 4-pointed moduli space, from the Casimir numbers and 3-point
//!   ranks;
//! * [`fcurve_degree`] pushes that to `n` points via the factorization
//!   rule: an [`FCurve`] splits the points into four blocks, and the
//!   degree sums 4-point degrees against the leg ranks of each block;
//! * [`decompose`] writes the first Chern class of a rank-one bundle as a
//!   nonnegative combination of level-one bundles [`LevelOneVector`], with
//!   [`decompose_by_columns`] rebuilding the same combination from the
//!   columns of the unique tableau where that recursion applies;
//! * [`verify_decomposition`] checks the decomposition degree-by-degree
//!   against every F-curve.
//!
//! All arithmetic is exact: rationals for Casimir values, integers
//! everywhere else, with over-narrow intermediate types rejected rather
//! than wrapped.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bundles::{classify, rank_exact, BundleSpec, RankKind, Reason};
use crate::fills::{combined_fill, Content};
use crate::{Error, Result};

/// A weight for the Casimir formula: the algebra's `r + 1` and the
/// fundamental-weight coefficients `c_1 ... c_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CasimirInput {
    rank_plus_one: usize,
    coeffs: Vec<usize>,
}

impl CasimirInput {
    pub fn new(rank_plus_one: usize, coeffs: Vec<usize>) -> Result<Self> {
        if rank_plus_one < 2 {
            return Err(Error::InvalidInput(
                "the Casimir formula needs r + 1 >= 2".into(),
            ));
        }
        if coeffs.len() != rank_plus_one - 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} fundamental-weight coefficients, got {}",
                rank_plus_one - 1,
                coeffs.len(),
            )));
        }
        Ok(CasimirInput {
            rank_plus_one,
            coeffs,
        })
    }

    pub fn rank_plus_one(&self) -> usize {
        self.rank_plus_one
    }

    pub fn coeffs(&self) -> &[usize] {
        &self.coeffs
    }
}

/// Casimir number of a weight, as an exact rational:
/// `(1/(r+1)) * sum_i (r+1-i) i c_i^2 + (2/(r+1)) * sum_{i<j} (r+1-j) i c_i c_j
///  + sum_i (r+1-i) i c_i`.
pub fn casimir(input: &CasimirInput) -> Ratio<i64> {
    let rp1 = input.rank_plus_one as i64;
    let c = |i: usize| input.coeffs[i - 1] as i64;
    let r = input.coeffs.len();

    let mut squares = 0i64;
    let mut linear = 0i64;
    for i in 1..=r {
        squares += (rp1 - i as i64) * i as i64 * c(i) * c(i);
        linear += (rp1 - i as i64) * i as i64 * c(i);
    }
    let mut cross = 0i64;
    for i in 1..=r {
        for j in i + 1..=r {
            cross += (rp1 - j as i64) * i as i64 * c(i) * c(j);
        }
    }
    Ratio::new(squares + 2 * cross, rp1) + Ratio::from_integer(linear)
}

/// Casimir number of the one-row weight `c` over `sl_2`: `c(c + 2)/2`.
fn casimir2(c: usize) -> Ratio<i64> {
    let c = c as i64;
    Ratio::new(c * (c + 2), 2)
}

/// Checks the cubic scaling of Casimir numbers under the rectangular
/// embedding: the `sl_2m` weight with coefficient `m*c` in position `m`
/// must have Casimir number `m^3` times that of the `sl_2` weight `c`.
pub fn casimir_scaling_check(m: usize, base: &CasimirInput) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidInput("scaling needs m >= 1".into()));
    }
    if base.rank_plus_one != 2 {
        return Err(Error::InvalidInput(
            "the scaling identity starts from an sl_2 weight".into(),
        ));
    }
    let c = base.coeffs[0];
    let mut coeffs = vec![0; 2 * m - 1];
    coeffs[m - 1] = m * c;
    let scaled = casimir(&CasimirInput::new(2 * m, coeffs)?);
    let cube = Ratio::from_integer((m * m * m) as i64);
    Ok(scaled == cube * casimir(base))
}

/// Rank of the 3-point bundle at level `level`: always 0 or 1, straight
/// from the classifier (three points are always maximal, so the verdict
/// cannot be more-than-one).
fn rank3(level: usize, a: usize, b: usize, c: usize) -> u64 {
    let spec = BundleSpec::new(1, level, vec![a, b, c]).expect("weights within level");
    match classify(&spec).class {
        RankKind::Zero => 0,
        RankKind::One => 1,
        RankKind::MoreThanOne => unreachable!("three points cannot exceed rank one"),
    }
}

/// Degree of the 4-point bundle's first Chern class: zero for a rank-zero
/// bundle, and otherwise
/// `(rank * sum_i cas(c_i) - sum_{y in 0..=level} cas(y) * P(y)) / (2 (level + 2))`
/// where `rank` is the bundle's rank and `P(y)` sums, over the three
/// pairings `{ab|cd}` of the points, the products
/// `rank3(a, b, y) * rank3(c, d, y)` (one-row `sl_2` weights are
/// self-dual, so no dualization appears). The rank factor matters: without
/// it the division below fails on any rank-two input. The division is
/// asserted exact and the result nonnegative.
pub fn degree4(level: usize, weights: [usize; 4]) -> Result<u64> {
    if level == 0 {
        return Err(Error::InvalidInput("level must be at least 1".into()));
    }
    if let Some(&bad) = weights.iter().find(|&&w| w > level) {
        return Err(Error::InvalidInput(format!(
            "weight {bad} exceeds the level {level}",
        )));
    }
    let spec = BundleSpec::new(1, level, weights.to_vec())?;
    if classify(&spec).class == RankKind::Zero {
        return Ok(0);
    }
    let rank = rank_exact(&spec)?;
    let rank = i64::try_from(&rank).map_err(|_| {
        Error::Internal(format!(
            "4-point rank {rank} at level {level} for {weights:?} exceeds the degree formula's range",
        ))
    })?;

    let [a, b, c, d] = weights;
    let own: Ratio<i64> =
        Ratio::from_integer(rank) * weights.iter().map(|&w| casimir2(w)).sum::<Ratio<i64>>();
    let mut boundary = Ratio::zero();
    for y in 0..=level {
        let pairings = rank3(level, a, b, y) * rank3(level, c, d, y)
            + rank3(level, a, c, y) * rank3(level, b, d, y)
            + rank3(level, a, d, y) * rank3(level, b, c, y);
        boundary += casimir2(y) * Ratio::from_integer(pairings as i64);
    }

    let degree = (own - boundary) / Ratio::from_integer(2 * (level as i64 + 2));
    if !degree.is_integer() {
        return Err(Error::Internal(format!(
            "4-point degree {degree} at level {level} for {weights:?} is not an integer",
        )));
    }
    let degree = degree.to_integer();
    if degree < 0 {
        return Err(Error::Internal(format!(
            "4-point degree {degree} at level {level} for {weights:?} is negative",
        )));
    }
    Ok(degree as u64)
}

/// Full 4-point degree tables, one per level: entry
/// `((a*(L+1) + b)*(L+1) + c)*(L+1) + d` holds `degree4(level, [a,b,c,d])`.
/// The F-curve sums hit these tables millions of times, so they are built
/// once and shared.
static DEGREE4_TABLES: LazyLock<RwLock<HashMap<usize, Arc<Vec<u64>>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn degree4_table(level: usize) -> Result<Arc<Vec<u64>>> {
    if let Some(table) = DEGREE4_TABLES
        .read()
        .expect("degree table poisoned")
        .get(&level)
    {
        return Ok(table.clone());
    }
    let side = level + 1;
    let mut by_multiset: HashMap<[usize; 4], u64> = HashMap::new();
    let mut table = vec![0u64; side * side * side * side];
    for a in 0..side {
        for b in 0..side {
            for c in 0..side {
                for d in 0..side {
                    let mut key = [a, b, c, d];
                    key.sort_unstable();
                    let value = match by_multiset.get(&key) {
                        Some(&v) => v,
                        None => {
                            let v = degree4(level, key)?;
                            by_multiset.insert(key, v);
                            v
                        }
                    };
                    table[((a * side + b) * side + c) * side + d] = value;
                }
            }
        }
    }
    let table = Arc::new(table);
    DEGREE4_TABLES
        .write()
        .expect("degree table poisoned")
        .insert(level, table.clone());
    Ok(table)
}

/// A one-dimensional boundary curve class: the `n` points split into four
/// nonempty blocks. Canonical form sorts each block and orders blocks by
/// their minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FCurve {
    n: usize,
    blocks: [Vec<usize>; 4],
}

impl FCurve {
    pub fn new(n: usize, blocks: [Vec<usize>; 4]) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut covered = 0;
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidInput("every block must be nonempty".into()));
            }
            for &i in block {
                if i == 0 || i > n {
                    return Err(Error::InvalidInput(format!(
                        "point {i} is outside 1..={n}",
                    )));
                }
                if seen[i] {
                    return Err(Error::InvalidInput(format!(
                        "point {i} appears in two blocks",
                    )));
                }
                seen[i] = true;
                covered += 1;
            }
        }
        if covered != n {
            return Err(Error::InvalidInput(format!(
                "blocks cover {covered} of {n} points",
            )));
        }
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
        }
        blocks.sort_by_key(|block| block[0]);
        Ok(FCurve { n, blocks })
    }

    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>; 4] {
        &self.blocks
    }
}

impl std::fmt::Display for FCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fmt_block = |block: &[usize]| {
            block
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "{{{}}}{{{}}}{{{}}}{{{}}}",
            fmt_block(&self.blocks[0]),
            fmt_block(&self.blocks[1]),
            fmt_block(&self.blocks[2]),
            fmt_block(&self.blocks[3]),
        )
    }
}

/// All F-curves on `n` points, in a fixed deterministic order (restricted
/// growth enumeration of 4-block set partitions). Empty for `n < 4`.
pub fn enumerate_fcurves(n: usize) -> Vec<FCurve> {
    fn rec(
        i: usize,
        n: usize,
        used: usize,
        assign: &mut Vec<usize>,
        out: &mut Vec<FCurve>,
    ) {
        if i == n {
            if used == 4 {
                let mut blocks: [Vec<usize>; 4] = Default::default();
                for (point, &label) in assign.iter().enumerate() {
                    blocks[label].push(point + 1);
                }
                out.push(FCurve { n, blocks });
            }
            return;
        }
        // No hope of reaching four blocks: prune.
        if used + (n - i) < 4 {
            return;
        }
        for label in 0..=used.min(3) {
            assign.push(label);
            rec(i + 1, n, used.max(label + 1), assign, out);
            assign.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 4 {
        rec(0, n, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// A level-one bundle given by a 0/1 weight vector: point `i` carries the
/// middle fundamental weight exactly when `i` lies in
/// `({1..=2k+1} minus A) union B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelOneVector {
    n: usize,
    m: usize,
    k: usize,
    #[serde(rename = "A")]
    a: Vec<usize>,
    #[serde(rename = "B")]
    b: Vec<usize>,
    support: Vec<usize>,
}

impl LevelOneVector {
    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    /// The points carrying a nonzero weight, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// The 0/1 weight multiples, one per point.
    pub fn weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.n];
        for &i in &self.support {
            w[i - 1] = 1;
        }
        w
    }

    /// The bundle this vector names: level 1, algebra `sl_2m`.
    pub fn bundle(&self) -> BundleSpec {
        BundleSpec::new(self.m, 1, self.weights()).expect("0/1 weights fit level 1")
    }
}

impl std::fmt::Display for LevelOneVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "V{{{}}}",
            self.support
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(","),
        )
    }
}

/// Builds the level-one vector for index sets `A` within `{1..=2k+1}` and
/// `B` within `{2k+2..=n}`: support `({1..=2k+1} minus A) union B` (set
/// difference binds first).
pub fn make_vab(n: usize, k: usize, m: usize, a: &[usize], b: &[usize]) -> Result<LevelOneVector> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let head_end = 2 * k + 1;
    if head_end > n {
        return Err(Error::InvalidInput(format!(
            "2k + 1 = {head_end} exceeds the point count {n}",
        )));
    }
    let a: BTreeSet<usize> = a.iter().copied().collect();
    let b: BTreeSet<usize> = b.iter().copied().collect();
    if let Some(&bad) = a.iter().find(|&&i| i == 0 || i > head_end) {
        return Err(Error::InvalidInput(format!(
            "index {bad} in A is outside 1..={head_end}",
        )));
    }
    if let Some(&bad) = b.iter().find(|&&i| i <= head_end || i > n) {
        return Err(Error::InvalidInput(format!(
            "index {bad} in B is outside {}..={n}",
            head_end + 1,
        )));
    }
    let support: Vec<usize> = (1..=head_end)
        .filter(|i| !a.contains(i))
        .chain(b.iter().copied())
        .collect();
    Ok(LevelOneVector {
        n,
        m,
        k,
        a: a.into_iter().collect(),
        b: b.into_iter().collect(),
        support,
    })
}

/// [`make_vab`] after canonicalizing labels: indices of `B` that fall in
/// `{1..=2k+1}` add nothing the head does not already provide once they
/// are struck from `A`, so they are absorbed. The closed-form coefficients
/// name such vectors in one of their non-canonical spellings.
fn make_vab_normalized(
    n: usize,
    k: usize,
    m: usize,
    a: &[usize],
    b: &[usize],
) -> Result<LevelOneVector> {
    let head_end = 2 * k + 1;
    let b_low: BTreeSet<usize> = b.iter().copied().filter(|&i| i <= head_end).collect();
    let a: Vec<usize> = a.iter().copied().filter(|i| !b_low.contains(i)).collect();
    let b: Vec<usize> = b.iter().copied().filter(|i| !b_low.contains(i)).collect();
    make_vab(n, k, m, &a, &b)
}

/// A nonnegative integer combination of level-one bundles, with `scale`
/// recording the `m` its vectors live over. Terms are merged by support:
/// the support determines the bundle, while the `(A, B)` labels are
/// bookkeeping from whichever formula produced the term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorCombo {
    scale: usize,
    terms: Vec<DivisorTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorTerm {
    coefficient: usize,
    vector: LevelOneVector,
}

impl DivisorTerm {
    pub fn coefficient(&self) -> usize {
        self.coefficient
    }

    pub fn vector(&self) -> &LevelOneVector {
        &self.vector
    }
}

impl DivisorCombo {
    fn new(scale: usize) -> Self {
        DivisorCombo {
            scale,
            terms: Vec::new(),
        }
    }

    /// Adds a term, dropping zero coefficients and empty supports (the
    /// trivial bundle contributes nothing) and merging equal supports.
    fn add(&mut self, coefficient: usize, vector: LevelOneVector) {
        if coefficient == 0 || vector.support().is_empty() {
            return;
        }
        match self
            .terms
            .iter_mut()
            .find(|t| t.vector.support() == vector.support())
        {
            Some(term) => term.coefficient += coefficient,
            None => self.terms.push(DivisorTerm {
                coefficient,
                vector,
            }),
        }
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn terms(&self) -> &[DivisorTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(coefficient, support)` pairs sorted by support: the
    /// label-independent content, for comparing combos from different
    /// constructions.
    pub fn canonical_terms(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out: Vec<(usize, Vec<usize>)> = self
            .terms
            .iter()
            .map(|t| (t.coefficient, t.vector.support().to_vec()))
            .collect();
        out.sort_by(|x, y| x.1.cmp(&y.1));
        out
    }
}

impl std::fmt::Display for DivisorCombo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{}·{}", t.coefficient, t.vector))
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

/// Writes the first Chern class of a rank-one bundle as a nonnegative
/// combination of level-one bundles.
///
/// Indices refer to the weights sorted descending with zeros last; the
/// returned vectors span all `n` points, zero-weight points never entering
/// a support. With the tail sum equal to `p` the combination is
/// `sum_{i=1}^{2k+1} (level - c_i) V_{i,0} + sum_{j>=2k+2} c_j V_{0,j}`;
/// the surplus maximal cases trade the two ends of the weight vector
/// against `p` in one of two patterns according to whether `n - 3` (on
/// nonzero weights) equals `2k` or `2k - 1` (no other value can occur).
/// Flip-reduced rank-one bundles fill a full-width rectangle whose columns
/// are forced, giving `sum_i (level - c_i) V_{off i}` over the level-one
/// bundles supported away from each flavor. The all-zero bundle decomposes
/// as the empty combination.
pub fn decompose(spec: &BundleSpec) -> Result<DivisorCombo> {
    let verdict = classify(spec);
    if verdict.class != RankKind::One {
        return Err(Error::InvalidInput(format!(
            "decomposition needs a rank-one bundle, got class {}",
            verdict.class,
        )));
    }
    let mut combo = DivisorCombo::new(spec.m());
    let Some(cert) = verdict.certificate else {
        return Ok(combo);
    };

    let n_full = spec.num_points();
    let m = spec.m();
    let level = spec.level();
    let sorted = spec.sorted_nonzero();
    let np = sorted.len();
    let (k, p) = (cert.k, cert.p);
    let sub = |x: usize, y: usize, what: &str| -> Result<usize> {
        x.checked_sub(y).ok_or_else(|| {
            Error::Internal(format!("negative coefficient {x} - {y} for {what}"))
        })
    };

    if cert.lambda_tail == p {
        // The general formula; on maximal inputs with tail sum p it agrees
        // with the maximal-case one term by term.
        for (i, &ci) in sorted.iter().take(2 * k + 1).enumerate() {
            let vector = make_vab(n_full, k, m, &[i + 1], &[])?;
            combo.add(sub(level, ci, "a head term")?, vector);
        }
        for (j, &cj) in sorted.iter().enumerate().skip(2 * k + 1) {
            let vector = make_vab(n_full, k, m, &[], &[j + 1])?;
            combo.add(cj, vector);
        }
    } else if verdict.reason == Reason::FlipReduction {
        // Rank one by flip reduction. Every instance seen in sweeps has
        // `p = level` and `2k + 3` nonzero weights, which forces the shape
        // to the full rectangle of height `2k + 2`: each of its columns
        // holds all flavors but one, so the column missing flavor `i`
        // occurs exactly `level - c_i` times and contributes the level-one
        // bundle supported off `i`. Anything else has no derived formula.
        if p != level || np != 2 * k + 3 {
            return Err(Error::Unsupported(format!(
                "no decomposition formula for a flip-reduced bundle with p = {p}, level = \
                 {level}, and {np} nonzero weights",
            )));
        }
        for (i, &ci) in sorted.iter().enumerate() {
            let vector = if i + 1 <= 2 * k + 1 {
                make_vab(n_full, k, m, &[i + 1], &[2 * k + 2, 2 * k + 3])?
            } else {
                let other = if i + 1 == 2 * k + 2 { 2 * k + 3 } else { 2 * k + 2 };
                make_vab(n_full, k, m, &[], &[other])?
            };
            combo.add(sub(level, ci, "a missing-flavor term")?, vector);
        }
    } else if np == 2 * k + 3 {
        // Maximal surplus with n - 3 = 2k.
        let (c_last, c_mid, c_first) = (sorted[np - 1], sorted[np - 2], sorted[np - 3]);
        combo.add(
            sub(level, p, "the full-row term")?,
            make_vab_normalized(n_full, k, m, &[np - 2], &[])?,
        );
        combo.add(
            sub(p, c_last, "the next-to-last tail term")?,
            make_vab_normalized(n_full, k, m, &[], &[np - 1])?,
        );
        combo.add(
            sub(p, c_mid, "the last tail term")?,
            make_vab_normalized(n_full, k, m, &[], &[np])?,
        );
        combo.add(
            sub(p, c_first, "the paired term")?,
            make_vab_normalized(n_full, k, m, &[np - 2], &[np - 1, np])?,
        );
    } else if np == 2 * k + 2 {
        // Maximal surplus with n - 3 = 2k - 1; note the crossed pattern:
        // the larger of the two head-side weights pairs with the deeper
        // removal.
        let (c_last, c_mid, c_first) = (sorted[np - 1], sorted[np - 2], sorted[np - 3]);
        combo.add(p, make_vab_normalized(n_full, k, m, &[], &[np - 1, np])?);
        combo.add(
            sub(c_first, p, "the first crossed term")?,
            make_vab_normalized(n_full, k, m, &[np - 1], &[])?,
        );
        combo.add(
            sub(c_mid, p, "the second crossed term")?,
            make_vab_normalized(n_full, k, m, &[np - 2], &[])?,
        );
        combo.add(
            sub(c_last, p, "the doubled removal")?,
            make_vab_normalized(n_full, k, m, &[np - 2, np - 1], &[np])?,
        );
    } else {
        // A maximal vector with surplus tail forces the first 2k+1 sorted
        // weights to stay below the count of full ones, pinning n to one
        // of the two shapes above.
        return Err(Error::Internal(format!(
            "maximal surplus with n = {np} nonzero weights and k = {k}",
        )));
    }

    for term in combo.terms() {
        let v = term.vector();
        if v.support().len() % 2 != 0 {
            return Err(Error::Internal(format!(
                "term {v} has odd support",
            )));
        }
        let one_point = BundleSpec::new(1, 1, v.weights())?;
        if classify(&one_point).class != RankKind::One {
            return Err(Error::Internal(format!(
                "term {v} is not a rank-one level-one bundle",
            )));
        }
    }
    Ok(combo)
}

/// Rebuilds the decomposition from the unique tableau, column by column:
/// peeling the final column of a count-one filling leaves a count-one
/// filling, and each peeled column names a level-one vector. When the tail
/// sum equals `p`, columns of height `2k` hold all head flavors but one,
/// giving `V_{i,0}` for the missing `i`, and columns of height `2k + 2`
/// hold every head flavor in order plus one tail flavor `j` at the bottom,
/// giving `V_{0,j}`. On a flip-reduced bundle the filled shape is a full
/// rectangle over `2k + 3` flavors, so every column misses exactly one
/// flavor and names the level-one bundle supported away from it.
///
/// Surplus maximal inputs use [`decompose`]'s closed form alone.
pub fn decompose_by_columns(spec: &BundleSpec) -> Result<DivisorCombo> {
    let verdict = classify(spec);
    if verdict.class != RankKind::One {
        return Err(Error::InvalidInput(format!(
            "decomposition needs a rank-one bundle, got class {}",
            verdict.class,
        )));
    }
    let mut combo = DivisorCombo::new(spec.m());
    let Some(cert) = verdict.certificate else {
        return Ok(combo);
    };
    let rectangle = verdict.reason == Reason::FlipReduction;
    if cert.lambda_tail != cert.p && !rectangle {
        return Err(Error::Unsupported(format!(
            "the column recursion needs tail sum {} equal to p = {}; surplus maximal bundles \
             use the closed form only",
            cert.lambda_tail, cert.p,
        )));
    }

    let (k, p) = (cert.k, cert.p);
    let level = spec.level();
    let sorted = spec.sorted_nonzero();
    let np = sorted.len();
    if rectangle && (p != level || np != 2 * k + 3) {
        return Err(Error::Unsupported(format!(
            "no column recursion for a flip-reduced bundle with p = {p}, level = {level}, \
             and {np} nonzero weights",
        )));
    }
    let tableau = combined_fill(level, k, p, &Content::new(sorted.clone()))?;
    let head_end = 2 * k + 1;
    let shape = tableau.shape().outer().clone();

    for col in (1..=shape.num_cols()).rev() {
        let entries: Vec<usize> = (1..=shape.num_rows())
            .filter_map(|row| tableau.entry(row, col))
            .collect();
        if rectangle {
            let present: BTreeSet<usize> = entries.iter().copied().collect();
            let missing: Vec<usize> = (1..=np).filter(|f| !present.contains(f)).collect();
            let ([i], true) = (missing.as_slice(), entries.len() == 2 * k + 2) else {
                return Err(Error::Internal(format!(
                    "column {col} should hold all but one of 1..={np}, got {entries:?}",
                )));
            };
            let vector = if *i <= head_end {
                make_vab(spec.num_points(), k, spec.m(), &[*i], &[2 * k + 2, 2 * k + 3])?
            } else {
                let other = if *i == 2 * k + 2 { 2 * k + 3 } else { 2 * k + 2 };
                make_vab(spec.num_points(), k, spec.m(), &[], &[other])?
            };
            combo.add(1, vector);
        } else if entries.len() == 2 * k + 2 {
            let heads = &entries[..head_end];
            let in_order = heads.iter().enumerate().all(|(idx, &e)| e == idx + 1);
            let bottom = entries[2 * k + 1];
            if !in_order || bottom <= head_end {
                return Err(Error::Internal(format!(
                    "column {col} should read 1..={head_end} over a tail flavor, got {entries:?}",
                )));
            }
            combo.add(1, make_vab(spec.num_points(), k, spec.m(), &[], &[bottom])?);
        } else if entries.len() == 2 * k {
            let present: BTreeSet<usize> = entries.iter().copied().collect();
            let missing: Vec<usize> = (1..=head_end).filter(|f| !present.contains(f)).collect();
            let [i] = missing.as_slice() else {
                return Err(Error::Internal(format!(
                    "column {col} should hold all but one of 1..={head_end}, got {entries:?}",
                )));
            };
            combo.add(1, make_vab(spec.num_points(), k, spec.m(), &[*i], &[])?);
        } else {
            return Err(Error::Internal(format!(
                "column {col} has height {}, expected {} or {}",
                entries.len(),
                2 * k,
                2 * k + 2,
            )));
        }
    }

    // Each column contributed its height to exactly one support, so the
    // weighted support sizes must reassemble the full weight total.
    let support_area: usize = combo
        .terms()
        .iter()
        .map(|t| t.coefficient() * t.vector().support().len())
        .sum();
    if support_area != spec.sorted_nonzero().iter().sum::<usize>() {
        return Err(Error::Internal(format!(
            "column supports cover {support_area} boxes, the weights cover {}",
            spec.sorted_nonzero().iter().sum::<usize>(),
        )));
    }
    Ok(combo)
}

/// Intersection number of the bundle's first Chern class with an F-curve.
///
/// For `m = 1` this is the factorization sum: over all attachments
/// `(y_1, y_2, y_3, y_4)` of level-bounded weights to the four blocks, the
/// 4-point degree of `(y_1..y_4)` times the product of the four leg ranks
/// (block weights plus the attached weight). For `m > 1` the degree is `m`
/// times the `m = 1` value on rank-zero and rank-one bundles, and refused
/// otherwise (no counting rule exists there).
pub fn fcurve_degree(spec: &BundleSpec, curve: &FCurve) -> Result<BigUint> {
    if curve.num_points() != spec.num_points() {
        return Err(Error::InvalidInput(format!(
            "curve on {} points, bundle on {}",
            curve.num_points(),
            spec.num_points(),
        )));
    }
    if spec.m() > 1 {
        if classify(spec).class == RankKind::MoreThanOne {
            return Err(Error::Unsupported(
                "degrees at m > 1 come from the rank-one scaling; this bundle has higher rank"
                    .into(),
            ));
        }
        let base = BundleSpec::new(1, spec.level(), spec.weights().to_vec())?;
        return Ok(fcurve_degree(&base, curve)? * BigUint::from(spec.m()));
    }

    let level = spec.level();
    let table = degree4_table(level)?;
    let side = level + 1;
    let overflow = || Error::Internal("F-curve degree exceeds 128 bits".into());

    // Nonzero leg ranks per block: (attached weight, rank).
    let mut legs: Vec<Vec<(usize, u128)>> = Vec::with_capacity(4);
    for block in curve.blocks() {
        let mut nonzero = Vec::new();
        for mu in 0..=level {
            let mut weights: Vec<usize> =
                block.iter().map(|&i| spec.weights()[i - 1]).collect();
            weights.push(mu);
            let rank = rank_exact(&BundleSpec::new(1, level, weights)?)?;
            if !rank.is_zero() {
                let rank = u128::try_from(&rank).map_err(|_| overflow())?;
                nonzero.push((mu, rank));
            }
        }
        legs.push(nonzero);
    }

    let mut total: u128 = 0;
    for &(y1, r1) in &legs[0] {
        for &(y2, r2) in &legs[1] {
            let r12 = r1.checked_mul(r2).ok_or_else(overflow)?;
            for &(y3, r3) in &legs[2] {
                let r123 = r12.checked_mul(r3).ok_or_else(overflow)?;
                let base = ((y1 * side + y2) * side + y3) * side;
                for &(y4, r4) in &legs[3] {
                    let d = table[base + y4];
                    if d != 0 {
                        let product = r123
                            .checked_mul(r4)
                            .and_then(|r| r.checked_mul(d as u128))
                            .ok_or_else(overflow)?;
                        total = total.checked_add(product).ok_or_else(overflow)?;
                    }
                }
            }
        }
    }
    Ok(BigUint::from(total))
}

/// One failed curve comparison in a [`VerificationReport`].
#[derive(Debug, Clone, Serialize)]
pub struct CurveCheck {
    pub blocks: Vec<Vec<usize>>,
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
}

/// Outcome of [`verify_decomposition`]: how many curves were compared and
/// which ones disagreed (expected: none). A bundle outside the rank-one
/// domain is reported in `precondition` rather than checked.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub precondition: Option<String>,
    pub checked: usize,
    pub violations: usize,
    pub failures: Vec<CurveCheck>,
}

/// Checks [`decompose`] degree-by-degree: for every F-curve on the `n`
/// points, the bundle's degree must equal the coefficient-weighted sum of
/// its terms' degrees. Runs at `m = 1` (both sides of the `m > 1` identity
/// scale by `m`, so nothing more is learned there) on the descending-sorted
/// weights, which is the order the decomposition's indices refer to.
pub fn verify_decomposition(spec: &BundleSpec) -> Result<VerificationReport> {
    let verdict = classify(spec);
    if verdict.class != RankKind::One {
        return Ok(VerificationReport {
            precondition: Some(format!(
                "verification needs a rank-one bundle, got class {}",
                verdict.class,
            )),
            checked: 0,
            violations: 0,
            failures: Vec::new(),
        });
    }

    let mut weights = spec.weights().to_vec();
    weights.sort_unstable_by(|a, b| b.cmp(a));
    let base = BundleSpec::new(1, spec.level(), weights)?;
    let combo = decompose(&base)?;
    let term_bundles: Vec<(BigUint, BundleSpec)> = combo
        .terms()
        .iter()
        .map(|t| {
            Ok((
                BigUint::from(t.coefficient()),
                BundleSpec::new(1, 1, t.vector().weights())?,
            ))
        })
        .collect::<Result<_>>()?;

    let curves = enumerate_fcurves(base.num_points());
    let failures: Vec<CurveCheck> = curves
        .par_iter()
        .map(|curve| -> Result<Option<CurveCheck>> {
            let lhs = fcurve_degree(&base, curve)?;
            let mut rhs = BigUint::zero();
            for (coefficient, bundle) in &term_bundles {
                rhs += coefficient * fcurve_degree(bundle, curve)?;
            }
            if lhs == rhs {
                Ok(None)
            } else {
                Ok(Some(CurveCheck {
                    blocks: curve.blocks().to_vec(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    ok: false,
                }))
            }
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    Ok(VerificationReport {
        precondition: None,
        checked: curves.len(),
        violations: failures.len(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(level: usize, weights: &[usize]) -> BundleSpec {
        BundleSpec::new(1, level, weights.to_vec()).unwrap()
    }

    fn sl2(c: usize) -> CasimirInput {
        CasimirInput::new(2, vec![c]).unwrap()
    }

    #[test]
    fn casimir_matches_hand_values() {
        assert_eq!(casimir(&sl2(1)), Ratio::new(3, 2));
        assert_eq!(casimir(&sl2(0)), Ratio::from_integer(0));
        assert_eq!(
            casimir(&CasimirInput::new(4, vec![0, 2, 0]).unwrap()),
            Ratio::from_integer(12)
        );
        assert!(CasimirInput::new(4, vec![1, 2]).is_err());
        assert!(CasimirInput::new(1, vec![]).is_err());
    }

    #[test]
    fn casimir_scaling_is_cubic() {
        assert!(casimir_scaling_check(2, &sl2(1)).unwrap());
        assert!(casimir_scaling_check(3, &sl2(2)).unwrap());
        for c in 0..=6 {
            for m in 1..=4 {
                assert!(casimir_scaling_check(m, &sl2(c)).unwrap(), "m={m}, c={c}");
            }
        }
        assert!(casimir_scaling_check(0, &sl2(1)).is_err());
        assert!(casimir_scaling_check(2, &CasimirInput::new(4, vec![0, 1, 0]).unwrap()).is_err());
    }

    #[test]
    fn three_point_ranks_match_fusion_rules() {
        // Independent statement of the level-truncated fusion rule: even
        // total, triangle inequalities, and total at most twice the level.
        for level in 1..=5 {
            for a in 0..=level {
                for b in 0..=level {
                    for c in 0..=level {
                        let fusion = (a + b + c) % 2 == 0
                            && a + b >= c
                            && a + c >= b
                            && b + c >= a
                            && a + b + c <= 2 * level;
                        assert_eq!(
                            rank3(level, a, b, c),
                            u64::from(fusion),
                            "level {level}, ({a},{b},{c})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn degree4_matches_hand_values() {
        assert_eq!(degree4(1, [1, 1, 1, 1]).unwrap(), 1);
        assert_eq!(degree4(1, [1, 1, 0, 0]).unwrap(), 0);
        assert_eq!(degree4(2, [2, 2, 2, 2]).unwrap(), 2);
        assert_eq!(degree4(4, [4, 2, 2, 2]).unwrap(), 1);
        assert!(degree4(2, [3, 0, 0, 0]).is_err());
    }

    #[test]
    fn degree4_is_a_nonnegative_integer_across_small_levels() {
        // degree4 itself asserts integrality and nonnegativity; sweeping
        // all weight tuples exercises those assertions.
        for level in 1..=4 {
            for a in 0..=level {
                for b in 0..=level {
                    for c in 0..=level {
                        for d in 0..=level {
                            degree4(level, [a, b, c, d]).unwrap();
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn level_one_vectors_follow_the_index_rule() {
        let v = make_vab(9, 2, 2, &[3], &[8]).unwrap();
        assert_eq!(v.support(), &[1, 2, 4, 5, 8]);
        assert_eq!(v.weights(), vec![1, 1, 0, 1, 1, 0, 0, 1, 0]);
        assert_eq!(v.m(), 2);

        let plain = make_vab(9, 2, 1, &[], &[]).unwrap();
        assert_eq!(plain.support(), &[1, 2, 3, 4, 5]);

        let odd = make_vab(7, 2, 1, &[1], &[7]).unwrap();
        assert_eq!(odd.support(), &[2, 3, 4, 5, 7]);

        assert!(make_vab(7, 2, 1, &[6], &[7]).is_err());
        assert!(make_vab(7, 2, 1, &[1], &[4]).is_err());
        assert!(make_vab(3, 2, 1, &[], &[]).is_err());
        assert!(make_vab(7, 2, 0, &[], &[]).is_err());
    }

    #[test]
    fn fcurve_enumeration_counts_set_partitions() {
        assert_eq!(enumerate_fcurves(3).len(), 0);
        assert_eq!(enumerate_fcurves(4).len(), 1);
        assert_eq!(enumerate_fcurves(5).len(), 10);
        assert_eq!(enumerate_fcurves(6).len(), 65);
        assert_eq!(enumerate_fcurves(7).len(), 350);

        let first = &enumerate_fcurves(5)[0];
        assert_eq!(
            first.blocks(),
            &[vec![1, 2], vec![3], vec![4], vec![5]]
        );

        // Canonicalization sorts blocks by minimum and points within.
        let curve = FCurve::new(5, [vec![4], vec![2, 5], vec![3], vec![1]]).unwrap();
        assert_eq!(
            curve.blocks(),
            &[vec![1], vec![2, 5], vec![3], vec![4]]
        );
        assert!(FCurve::new(4, [vec![1], vec![2], vec![3], vec![3]]).is_err());
        assert!(FCurve::new(5, [vec![1], vec![2], vec![3], vec![4]]).is_err());
        assert!(FCurve::new(4, [vec![1, 2], vec![3], vec![4], vec![]]).is_err());
    }

    #[test]
    fn fcurve_degree_reduces_to_the_four_point_degree() {
        let curve = &enumerate_fcurves(4)[0];
        assert_eq!(
            fcurve_degree(&spec(1, &[1, 1, 1, 1]), curve).unwrap(),
            BigUint::from(1u32)
        );
        // Zero bundles meet every curve in degree zero.
        assert_eq!(
            fcurve_degree(&spec(3, &[3, 3, 3, 1]), curve).unwrap(),
            BigUint::zero()
        );
        assert_eq!(
            fcurve_degree(&spec(2, &[1, 1, 1, 0]), curve).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn fcurve_degree_scales_linearly_in_m() {
        let weights = [6, 6, 5, 5, 5, 2, 1];
        let base = spec(6, &weights);
        let doubled = BundleSpec::new(2, 6, weights.to_vec()).unwrap();
        for curve in enumerate_fcurves(7).into_iter().step_by(7) {
            let lhs = fcurve_degree(&doubled, &curve).unwrap();
            let rhs = fcurve_degree(&base, &curve).unwrap() * BigUint::from(2u32);
            assert_eq!(lhs, rhs, "curve {curve}");
        }

        let many = BundleSpec::new(2, 10, vec![10, 8, 8, 7, 6, 3, 1, 1]).unwrap();
        let curve = &enumerate_fcurves(8)[0];
        assert!(matches!(
            fcurve_degree(&many, curve),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn decompose_matches_the_closed_forms() {
        // Tail sum equal to p, the general formula.
        let combo = decompose(&spec(9, &[9, 8, 8, 8, 8, 8, 8, 2, 1])).unwrap();
        let expected: Vec<(usize, Vec<usize>)> = vec![
            (1, make_vab(9, 3, 1, &[2], &[]).unwrap().support().to_vec()),
            (1, make_vab(9, 3, 1, &[3], &[]).unwrap().support().to_vec()),
            (1, make_vab(9, 3, 1, &[4], &[]).unwrap().support().to_vec()),
            (1, make_vab(9, 3, 1, &[5], &[]).unwrap().support().to_vec()),
            (1, make_vab(9, 3, 1, &[6], &[]).unwrap().support().to_vec()),
            (1, make_vab(9, 3, 1, &[7], &[]).unwrap().support().to_vec()),
            (2, make_vab(9, 3, 1, &[], &[8]).unwrap().support().to_vec()),
            (1, make_vab(9, 3, 1, &[], &[9]).unwrap().support().to_vec()),
        ];
        let mut expected_sorted = expected;
        expected_sorted.sort_by(|x, y| x.1.cmp(&y.1));
        assert_eq!(combo.canonical_terms(), expected_sorted);

        // Head coefficients vanish at full level; a single tail term stays.
        let combo = decompose(&spec(1, &[1, 1, 1, 1])).unwrap();
        assert_eq!(
            combo.canonical_terms(),
            vec![(1, vec![1, 2, 3, 4])]
        );

        // Maximal surplus, n - 3 = 2k: head term, two tail removals, and
        // the paired vector, in support order.
        let combo = decompose(&spec(6, &[6, 6, 6, 6, 2, 2, 2])).unwrap();
        assert_eq!(
            combo.canonical_terms(),
            vec![
                (3, vec![1, 2, 3, 4]),       // (level - p) V_{5,0}
                (1, vec![1, 2, 3, 4, 5, 6]), // (p - c_7) V_{0,6}
                (1, vec![1, 2, 3, 4, 5, 7]), // (p - c_6) V_{0,7}
                (1, vec![1, 2, 3, 4, 6, 7]), // (p - c_5) V_{5,{6,7}}
            ],
        );

        // Maximal surplus, n - 3 = 2k - 1, with the crossed coefficients.
        let combo = decompose(&spec(5, &[5, 5, 5, 3, 2, 2])).unwrap();
        assert_eq!(
            combo.canonical_terms(),
            vec![
                (2, vec![1, 2, 3, 4]),       // (c_4 - p) V_{5,0}
                (1, vec![1, 2, 3, 4, 5, 6]), // p V_{0,{5,6}}, canonically V_{0,6}
                (1, vec![1, 2, 3, 5]),       // (c_5 - p) V_{4,0}
                (1, vec![1, 2, 3, 6]),       // (c_6 - p) V_{{4,5},6}
            ],
        );

        // Degenerate and out-of-domain inputs.
        assert!(decompose(&spec(4, &[0, 0, 0])).unwrap().is_empty());
        assert!(decompose(&spec(10, &[10, 8, 8, 7, 6, 3, 1, 1])).is_err());
        assert!(decompose(&spec(2, &[2, 2, 2])).is_err());
    }

    #[test]
    fn column_peeling_rebuilds_the_decomposition() {
        for (level, weights) in [
            (9, vec![9, 8, 8, 8, 8, 8, 8, 2, 1]),
            (1, vec![1, 1, 1, 1]),
            (2, vec![2, 2, 1, 1]),
            (6, vec![6, 6, 5, 5, 5, 2, 1]),
            (2, vec![2, 1, 1, 0]),
        ] {
            let spec = spec(level, &weights);
            assert_eq!(
                decompose_by_columns(&spec).unwrap().canonical_terms(),
                decompose(&spec).unwrap().canonical_terms(),
                "level {level}, weights {weights:?}"
            );
        }

        // Surplus maximal bundles have no column recursion.
        assert!(matches!(
            decompose_by_columns(&spec(6, &[6, 6, 6, 6, 2, 2, 2])),
            Err(Error::Unsupported(_))
        ));
        assert!(decompose_by_columns(&spec(2, &[2, 2, 2])).is_err());
    }

    #[test]
    fn flip_reduced_rectangles_decompose_and_verify() {
        // Rank one with a surplus tail and no maximality: the filled shape
        // is a full rectangle and each weight contributes its distance to
        // the level as the coefficient of the bundle supported away from
        // it. The smallest instance pins the whole pattern.
        let combo = decompose(&spec(4, &[4, 3, 3, 3, 3])).unwrap();
        assert_eq!(
            combo.canonical_terms(),
            vec![
                (1, vec![1, 2, 3, 4]),
                (1, vec![1, 2, 3, 5]),
                (1, vec![1, 2, 4, 5]),
                (1, vec![1, 3, 4, 5]),
            ],
        );

        for (level, weights) in [
            (4, vec![4, 3, 3, 3, 3]),
            (4, vec![4, 4, 4, 3, 3, 3, 3]),
            (5, vec![5, 4, 4, 4, 3]),
            (5, vec![4, 4, 4, 4, 4]),
            (5, vec![5, 5, 5, 4, 4, 4, 3]),
            (5, vec![5, 5, 4, 4, 4, 4, 4]),
        ] {
            let spec = spec(level, &weights);
            assert_eq!(
                decompose_by_columns(&spec).unwrap().canonical_terms(),
                decompose(&spec).unwrap().canonical_terms(),
                "level {level}, weights {weights:?}"
            );
            let report = verify_decomposition(&spec).unwrap();
            assert!(report.precondition.is_none());
            assert!(report.checked > 0);
            assert_eq!(report.violations, 0, "level {level}, weights {weights:?}");
        }
    }

    #[test]
    fn verification_confirms_the_decomposition_degrees() {
        let report = verify_decomposition(&spec(1, &[1, 1, 1, 1])).unwrap();
        assert_eq!(report.checked, 1);
        assert_eq!(report.violations, 0);
        assert!(report.precondition.is_none());

        // The crossed maximal case, all 65 curves.
        let report = verify_decomposition(&spec(5, &[5, 5, 5, 3, 2, 2])).unwrap();
        assert_eq!(report.checked, 65);
        assert_eq!(report.violations, 0);

        // The other maximal case, all 350 curves.
        let report = verify_decomposition(&spec(6, &[6, 6, 6, 6, 2, 2, 2])).unwrap();
        assert_eq!(report.checked, 350);
        assert_eq!(report.violations, 0);

        // Zero weights ride along as extra points.
        let report = verify_decomposition(&spec(2, &[2, 1, 1, 0])).unwrap();
        assert_eq!(report.checked, 1);
        assert_eq!(report.violations, 0);

        let report = verify_decomposition(&spec(2, &[2, 2, 2, 2, 1])).unwrap();
        assert_eq!(report.violations, 0);
        assert!(report.precondition.is_some());
    }
}

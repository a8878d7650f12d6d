//! Bundle specifications and their ranks.
//!
//! A bundle is given by an algebra `sl_2m`, a level, and weights
//! `c_i * w_m`. Everything rank-related flows through one decomposition:
//! writing half the weight total as `k*level + p` with `1 <= p <= level`,
//! the rank equals the number of proper tableaux on the reduced shape
//! `(level^2k, p, p)` with the weights as content. On top of that count
//! this module provides:
//!
//! * [`classify`], a closed-form zero / one / more-than-one verdict that
//!   never counts anything: it compares the tail sum of the weights beyond
//!   the first `2k+1` against `p`, with maximality of the weight vector
//!   and a rank-preserving weight flip deciding the surplus case;
//! * [`rank_exact`], the count itself (for `m = 1`, where counting applies);
//! * [`sp_relabel`], the equivalent level-one symplectic description.
//!
//! The classification is independent of `m`; the exact count is only
//! defined for `m = 1` and is refused, not approximated, otherwise.

use num_bigint::BigUint;
use serde::Serialize;

use crate::fills::Content;
use crate::kostka::count_proper_tableaux;
use crate::shapes::reduced_shape;
use crate::{Error, Result};

/// A conformal-blocks bundle: algebra `sl_2m`, level, and per-point
/// multiples of the middle fundamental weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleSpec {
    m: usize,
    level: usize,
    weights: Vec<usize>,
}

impl BundleSpec {
    /// Validates `m >= 1`, `level >= 1`, a nonempty weight list, and
    /// `0 <= c_i <= level`.
    pub fn new(m: usize, level: usize, weights: Vec<usize>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("m must be at least 1".into()));
        }
        if level == 0 {
            return Err(Error::InvalidInput("level must be at least 1".into()));
        }
        if weights.is_empty() {
            return Err(Error::InvalidInput("at least one weight is required".into()));
        }
        if let Some(&bad) = weights.iter().find(|&&c| c > level) {
            return Err(Error::InvalidInput(format!(
                "weight {bad} exceeds the level {level}",
            )));
        }
        Ok(BundleSpec { m, level, weights })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn num_points(&self) -> usize {
        self.weights.len()
    }

    /// Sum of the weight multiples.
    pub fn total(&self) -> usize {
        self.weights.iter().sum()
    }

    /// The nonzero weights in descending order: the normal form on which
    /// the classifier and the counting oracle operate. Dropping zeros is
    /// harmless for rank purposes (they insert trivial factors) and the
    /// order never matters for counts.
    pub fn sorted_nonzero(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.weights.iter().copied().filter(|&c| c > 0).collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// The three possible rank classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankKind {
    Zero,
    One,
    MoreThanOne,
}

impl std::fmt::Display for RankKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RankKind::Zero => "zero",
            RankKind::One => "one",
            RankKind::MoreThanOne => "more-than-one",
        })
    }
}

/// Which clause of the classification fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// An odd weight total admits no `(k, p)` decomposition at all.
    OddTotal,
    /// Every weight is zero: the trivial bundle, rank one.
    AllZero,
    /// The tail sum falls short of `p`.
    LambdaBelowP,
    /// The tail sum equals `p` exactly.
    LambdaEqualsP,
    /// Surplus tail, but enough weights equal the level to force rank one.
    Maximal,
    /// Surplus tail and no maximality, yet flipping weight pairs
    /// `(a, b) -> (level - a, level - b)`, which preserves the rank,
    /// reaches a vector the other clauses classify as rank one.
    FlipReduction,
    /// Surplus tail, no maximality, and no flip reduction: rank at least two.
    NonMaximalSurplus,
}

impl std::fmt::Display for Reason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Reason::OddTotal => "odd-total",
            Reason::AllZero => "all-zero",
            Reason::LambdaBelowP => "lambda-below-p",
            Reason::LambdaEqualsP => "lambda-equals-p",
            Reason::Maximal => "maximal",
            Reason::FlipReduction => "flip-reduction",
            Reason::NonMaximalSurplus => "non-maximal-surplus",
        })
    }
}

/// The numbers the verdict is computed from, on the descending-sorted
/// nonzero weights: `sum = 2(k*level + p)`, the tail sum beyond position
/// `2k+1`, and whether the vector is maximal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub k: usize,
    pub p: usize,
    pub lambda_tail: usize,
    pub maximal: bool,
}

/// Outcome of [`classify`]: the class, why, and (whenever the weights are
/// nonzero with an even total) the certificate behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankClass {
    pub class: RankKind,
    pub reason: Reason,
    pub certificate: Option<Certificate>,
}

/// Splits half the weight total as `k*level + p` with `1 <= p <= level`,
/// `k >= 0`. Returns nothing when the total is odd or zero; the pair is
/// unique otherwise.
pub fn kp_decompose(spec: &BundleSpec) -> Option<(usize, usize)> {
    let total = spec.total();
    if total == 0 || total % 2 != 0 {
        return None;
    }
    let half = total / 2;
    let k = half.div_ceil(spec.level()) - 1;
    Some((k, half - k * spec.level()))
}

/// Whether at least `n - 3` of the `n` given weights equal the level
/// (trivially true for `n <= 3`). Zero weights count toward `n` here; the
/// classifier applies the same test to the zero-dropped vector instead,
/// which is what keeps its verdict stable under appending zeros.
pub fn is_maximal(spec: &BundleSpec) -> bool {
    maximal_among(spec.weights(), spec.level())
}

fn maximal_among(weights: &[usize], level: usize) -> bool {
    let full = weights.iter().filter(|&&c| c == level).count();
    full + 3 >= weights.len()
}

/// Descending-sorted nonzero weights after exhaustively applying the
/// rank-preserving pair flip: while the two largest weights sum to more
/// than the level, both are replaced by their level complements and zeros
/// are dropped. Every step lowers the total, so the loop terminates with
/// the two largest entries summing to at most the level.
fn flip_normalize(sorted: &[usize], level: usize) -> Vec<usize> {
    let mut w = sorted.to_vec();
    while w.len() >= 2 && w[0] + w[1] > level {
        let (a, b) = (w[0], w[1]);
        w[0] = level - a;
        w[1] = level - b;
        w.retain(|&c| c > 0);
        w.sort_unstable_by(|x, y| y.cmp(x));
    }
    w
}

/// The bare tail-sum trichotomy on a descending-sorted nonzero vector,
/// without the flip refinement. The total must be even.
fn plain_trichotomy(sorted: &[usize], level: usize) -> RankKind {
    let total: usize = sorted.iter().sum();
    if total == 0 {
        return RankKind::One;
    }
    debug_assert_eq!(total % 2, 0, "pair flips preserve the total's parity");
    let half = total / 2;
    let k = half.div_ceil(level) - 1;
    let p = half - k * level;
    let lambda: usize = sorted.get(2 * k + 1..).map_or(0, |tail| tail.iter().sum());
    match lambda.cmp(&p) {
        std::cmp::Ordering::Less => RankKind::Zero,
        std::cmp::Ordering::Equal => RankKind::One,
        std::cmp::Ordering::Greater if maximal_among(sorted, level) => RankKind::One,
        std::cmp::Ordering::Greater => RankKind::MoreThanOne,
    }
}

/// Closed-form rank classification.
///
/// On the descending-sorted nonzero weights with total `2(k*level + p)`,
/// let `lambda` be the sum of the entries after position `2k+1`. The class
/// is `Zero` when the total is odd or `lambda < p`; `One` when `lambda = p`,
/// or `lambda > p` with a maximal weight vector, or all weights vanish.
/// A surplus without maximality usually means `MoreThanOne`, but not
/// always: flipping two weights to their level complements preserves the
/// rank, and some surplus vectors flip down to a rank-one form (the
/// smallest is `(4, 3, 3, 3, 3)` at level 4, whose unique proper tableau
/// fills the full-width rectangle). The classifier therefore re-applies
/// the trichotomy to the flip-normalized weights before settling on
/// `MoreThanOne`. The outcome does not depend on `m`, on the order of the
/// weights, or on zero weights.
pub fn classify(spec: &BundleSpec) -> RankClass {
    let total = spec.total();
    if total == 0 {
        return RankClass {
            class: RankKind::One,
            reason: Reason::AllZero,
            certificate: None,
        };
    }
    if total % 2 != 0 {
        return RankClass {
            class: RankKind::Zero,
            reason: Reason::OddTotal,
            certificate: None,
        };
    }

    let sorted = spec.sorted_nonzero();
    let (k, p) = kp_decompose(spec).expect("even positive total always decomposes");
    let lambda: usize = sorted.get(2 * k + 1..).map_or(0, |tail| tail.iter().sum());
    let maximal = maximal_among(&sorted, spec.level());
    let certificate = Some(Certificate {
        k,
        p,
        lambda_tail: lambda,
        maximal,
    });

    let (class, reason) = match lambda.cmp(&p) {
        std::cmp::Ordering::Less => (RankKind::Zero, Reason::LambdaBelowP),
        std::cmp::Ordering::Equal => (RankKind::One, Reason::LambdaEqualsP),
        std::cmp::Ordering::Greater if maximal => (RankKind::One, Reason::Maximal),
        std::cmp::Ordering::Greater => {
            let reduced = flip_normalize(&sorted, spec.level());
            match plain_trichotomy(&reduced, spec.level()) {
                RankKind::One => (RankKind::One, Reason::FlipReduction),
                verdict => {
                    // A surplus tail admits a proper filling, so the rank
                    // is at least one and the flipped form can never land
                    // in the zero clause.
                    debug_assert_eq!(verdict, RankKind::MoreThanOne);
                    (RankKind::MoreThanOne, Reason::NonMaximalSurplus)
                }
            }
        }
    };
    RankClass {
        class,
        reason,
        certificate,
    }
}

/// Exact rank for `m = 1`: the number of proper tableaux on the reduced
/// shape `(level^2k, p, p)` with the sorted weights as content. An odd
/// total gives zero and the all-zero bundle has rank one. For `m > 1` only
/// the class is available (see [`classify`]), so the count is refused.
pub fn rank_exact(spec: &BundleSpec) -> Result<BigUint> {
    if spec.m() != 1 {
        return Err(Error::Unsupported(format!(
            "exact rank is only computed for m = 1; for m = {} only the class is available",
            spec.m(),
        )));
    }
    let total = spec.total();
    if total == 0 {
        return Ok(BigUint::from(1u32));
    }
    if total % 2 != 0 {
        return Ok(BigUint::ZERO);
    }
    let (k, p) = kp_decompose(spec).expect("even positive total always decomposes");
    let shape = reduced_shape(spec.level(), k, p)?;
    count_proper_tableaux(&shape, &Content::new(spec.sorted_nonzero()), spec.level())
}

/// Witten branch selector: the integer `s` with weight total `2(level + s)`.
///
/// The total diagram area is `m` times the weight total and the dictionary
/// divides it by `2m`, so `m` cancels and `s = total/2 - level`. Negative
/// and zero `s` land in the classical branch (a two-row rectangle suffices);
/// positive `s` needs the quantum shape. An odd total is rejected: no `s`
/// exists and the bundle is forced to rank zero.
pub fn witten_s(spec: &BundleSpec) -> Result<i64> {
    let total = spec.total();
    if total % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "weight total {total} is odd, so no integer s with total = 2(level + s) exists",
        )));
    }
    Ok((total / 2) as i64 - spec.level() as i64)
}

/// The level-one symplectic bundle with the same rank: algebra `sp_2l`,
/// one fundamental weight per point indexed by the original multiple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymplecticRelabel {
    /// Algebra name, `sp_{2*level}`.
    pub algebra: String,
    /// Always 1.
    pub level: usize,
    /// Fundamental-weight index per marked point (0 means the trivial
    /// weight), in the original point order.
    pub weight_indices: Vec<usize>,
    pub class: RankClass,
}

/// Transposes an `m = 1` bundle into its rank-equivalent level-one
/// description over `sp_2l`: the weight `c * w_1` becomes the single
/// fundamental weight `w_c`. Only `m = 1` transposes to level one.
pub fn sp_relabel(spec: &BundleSpec) -> Result<SymplecticRelabel> {
    if spec.m() != 1 {
        return Err(Error::Unsupported(format!(
            "the level-one relabel transposes single columns, so it needs m = 1, not m = {}",
            spec.m(),
        )));
    }
    Ok(SymplecticRelabel {
        algebra: format!("sp_{}", 2 * spec.level()),
        level: 1,
        weight_indices: spec.weights().to_vec(),
        class: classify(spec),
    })
}

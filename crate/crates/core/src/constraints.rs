//! Variable pairwise constraints: weighted pair sampling routed into must-link
//! and cannot-link sets by label overlap.

use alloc::format;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::{Error, MultiLabelDataset, Result};

/// Default draw budget per requested pair.
pub const ATTEMPTS_PER_PAIR: usize = 50;
/// Tolerance on `Σ w_i = 1` for sampling weights.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Share of labels two instances have in common: `|A ∩ B| / ((|A| + |B|) / 2)`.
///
/// Two empty sets count as identical (1.0); an empty set against a non-empty
/// one shares nothing (0.0).
pub fn label_overlap_ratio(a: &[bool], b: &[bool]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut common = 0usize;
    let mut size_a = 0usize;
    let mut size_b = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        common += usize::from(x && y);
        size_a += usize::from(x);
        size_b += usize::from(y);
    }
    if size_a + size_b == 0 {
        return 1.0;
    }
    (2 * common) as f64 / (size_a + size_b) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstraintConfig {
    /// Overlap threshold Θ in [0, 1]; ratio ≥ Θ means must-link.
    pub theta: f64,
    pub target_must: usize,
    pub target_cannot: usize,
    /// Upper bound on pair draws, including rejected `i == j` redraws.
    pub max_attempts: usize,
}

impl ConstraintConfig {
    /// Targets of `pairs` each and the default attempt budget.
    pub fn new(theta: f64, pairs: usize) -> Self {
        Self::with_targets(theta, pairs, pairs)
    }

    pub fn with_targets(theta: f64, target_must: usize, target_cannot: usize) -> Self {
        ConstraintConfig {
            theta,
            target_must,
            target_cannot,
            max_attempts: ATTEMPTS_PER_PAIR * (target_must + target_cannot),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::config(format!("theta must lie in [0, 1], got {}", self.theta)));
        }
        if self.max_attempts < self.target_must + self.target_cannot {
            return Err(Error::config(format!(
                "max_attempts ({}) is below the combined targets ({})",
                self.max_attempts,
                self.target_must + self.target_cannot
            )));
        }
        Ok(())
    }

    /// Whether a pair with this overlap ratio goes to the must-link set.
    #[inline]
    pub fn is_must_link(&self, ratio: f64) -> bool {
        ratio >= self.theta
    }
}

/// Ordered index pairs; duplicates are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairConstraintSets {
    pub must: Vec<(usize, usize)>,
    pub cannot: Vec<(usize, usize)>,
    /// Draws consumed while filling the sets.
    pub attempts: usize,
}

/// Samples must-link and cannot-link pairs.
///
/// Both endpoints are drawn independently in proportion to `weights`; the
/// second endpoint is redrawn while it equals the first. Each draw of the
/// second endpoint spends one attempt. Pairs whose destination set is already
/// full are discarded. Sampling stops when both sets are full or the attempt
/// budget runs out, so either set can come back short or empty.
pub fn sample_constraints<R: Rng + ?Sized>(
    ds: &MultiLabelDataset,
    weights: &[f64],
    cfg: &ConstraintConfig,
    rng: &mut R,
) -> Result<PairConstraintSets> {
    cfg.validate()?;
    let n = ds.instance_count();
    if n < 2 {
        return Err(Error::config("pair sampling needs at least two instances"));
    }
    if weights.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: weights.len() });
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::validation("sampling weights must be finite and non-negative"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::validation(format!("sampling weights sum to {total}, expected 1")));
    }
    let dist = WeightedIndex::new(weights).map_err(|e| Error::validation(format!("{e}")))?;

    let mut sets = PairConstraintSets::default();
    let full = |s: &PairConstraintSets| s.must.len() >= cfg.target_must && s.cannot.len() >= cfg.target_cannot;
    while !full(&sets) && sets.attempts < cfg.max_attempts {
        let i = dist.sample(rng);
        let mut j = dist.sample(rng);
        sets.attempts += 1;
        while j == i && sets.attempts < cfg.max_attempts {
            j = dist.sample(rng);
            sets.attempts += 1;
        }
        if j == i {
            break;
        }
        let ratio = label_overlap_ratio(ds.labels_of(i), ds.labels_of(j));
        if cfg.is_must_link(ratio) {
            if sets.must.len() < cfg.target_must {
                sets.must.push((i, j));
            }
        } else if sets.cannot.len() < cfg.target_cannot {
            sets.cannot.push((i, j));
        }
    }
    Ok(sets)
}

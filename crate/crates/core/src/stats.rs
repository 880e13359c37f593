//! Wilcoxon signed-rank tests and the per-setting comparison of GSEMO against
//! GREEDY (min/mean/max aggregation, verdict symbols, loss-win-tie counts).

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::{Error, Result};

/// Two-sided significance level.
pub const ALPHA: f64 = 0.05;
/// Differences with magnitude at most this are zero; magnitudes this close share a rank.
pub const ZERO_TOLERANCE: f64 = 1e-9;
/// Largest number of non-zero differences handled by the exact null distribution.
pub const EXACT_LIMIT: usize = 15;
pub const MIN_NONZERO: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

pub fn aggregate_runs(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::Empty("run list"));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    // keep min <= mean <= max despite rounding in the sum
    Ok(Summary {
        min,
        mean: mean.clamp(min, max),
        max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PValueMethod {
    Exact,
    /// Plain normal approximation.
    Normal,
    /// Normal approximation with an Edgeworth correction; the large-sample default.
    Edgeworth,
}

/// Non-zero differences with their (doubled, hence integral) average ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedDifferences {
    pub doubled_ranks: Vec<u32>,
    pub positive: Vec<bool>,
    /// Sizes of the groups of tied magnitudes.
    pub tie_groups: Vec<usize>,
}

impl RankedDifferences {
    pub fn len(&self) -> usize {
        self.doubled_ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doubled_ranks.is_empty()
    }

    pub fn doubled_w_plus(&self) -> u32 {
        self.doubled_ranks
            .iter()
            .zip(&self.positive)
            .filter(|(_, &p)| p)
            .map(|(r, _)| r)
            .sum()
    }
}

pub fn rank_differences(diffs: &[f64]) -> RankedDifferences {
    let mut kept: Vec<(f64, bool)> = diffs
        .iter()
        .filter(|d| d.abs() > ZERO_TOLERANCE)
        .map(|&d| (d.abs(), d > 0.0))
        .collect();
    kept.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = kept.len();
    let mut doubled_ranks = vec![0u32; m];
    let mut tie_groups = Vec::new();
    let mut start = 0;
    while start < m {
        let mut end = start;
        while end + 1 < m && kept[end + 1].0 - kept[start].0 <= ZERO_TOLERANCE {
            end += 1;
        }
        // ranks start+1 ..= end+1 averaged, doubled
        let doubled = (start + end + 2) as u32;
        doubled_ranks[start..=end].fill(doubled);
        tie_groups.push(end - start + 1);
        start = end + 1;
    }
    RankedDifferences {
        doubled_ranks,
        positive: kept.iter().map(|&(_, p)| p).collect(),
        tie_groups,
    }
}

/// Two-sided p-value of `W+` (doubled) under the exact permutation null,
/// computed by counting sign assignments with a subset-sum recurrence.
pub fn exact_p_value(doubled_ranks: &[u32], doubled_w_plus: u32) -> f64 {
    let total: u32 = doubled_ranks.iter().sum();
    let mut counts = vec![0.0f64; total as usize + 1];
    counts[0] = 1.0;
    let mut reach = 0usize;
    for &r in doubled_ranks {
        let r = r as usize;
        for s in (0..=reach).rev() {
            let c = counts[s];
            if c != 0.0 {
                counts[s + r] += c;
            }
        }
        reach += r;
    }
    let all = libm::ldexp(1.0, doubled_ranks.len() as i32);
    let w = doubled_w_plus as usize;
    let upper: f64 = counts[w.min(counts.len())..].iter().sum();
    let lower: f64 = counts[..=w.min(total as usize)].iter().sum();
    (2.0 * upper.min(lower) / all).min(1.0)
}

fn rank_cumulants(doubled_ranks: &[u32]) -> (f64, f64) {
    // W+ = Σ r_i B_i with B_i ~ Bernoulli(1/2): κ2 = Σ r²/4, κ4 = -Σ r⁴/8
    doubled_ranks.iter().fold((0.0, 0.0), |(k2, k4), &d| {
        let r = d as f64 / 2.0;
        let r2 = r * r;
        (k2 + r2 / 4.0, k4 - r2 * r2 / 8.0)
    })
}

/// Two-sided p-value from the normal approximation with continuity
/// correction. The variance is computed from the actual (tie-averaged)
/// ranks, which equals the usual tie-corrected variance.
pub fn normal_p_value(doubled_ranks: &[u32], doubled_w_plus: u32) -> f64 {
    let (z, _) = standardized(doubled_ranks, doubled_w_plus);
    z.map_or(1.0, |z| libm::erfc(z / core::f64::consts::SQRT_2).min(1.0))
}

/// [`normal_p_value`] plus the Edgeworth fourth-cumulant term. The statistic
/// is symmetric, so there is no skewness term.
pub fn edgeworth_p_value(doubled_ranks: &[u32], doubled_w_plus: u32) -> f64 {
    let (z, excess) = standardized(doubled_ranks, doubled_w_plus);
    let Some(z) = z else { return 1.0 };
    let density = libm::exp(-z * z / 2.0) / libm::sqrt(2.0 * core::f64::consts::PI);
    let tail = 0.5 * libm::erfc(z / core::f64::consts::SQRT_2)
        + density * excess / 24.0 * (z * z * z - 3.0 * z);
    (2.0 * tail).clamp(0.0, 1.0)
}

/// Continuity-corrected `|z|` (or `None` for a degenerate variance) and the
/// excess kurtosis of `W+`.
fn standardized(doubled_ranks: &[u32], doubled_w_plus: u32) -> (Option<f64>, f64) {
    let (k2, k4) = rank_cumulants(doubled_ranks);
    if k2 <= 0.0 {
        return (None, 0.0);
    }
    let total: u32 = doubled_ranks.iter().sum();
    let mean = total as f64 / 4.0;
    let w_plus = doubled_w_plus as f64 / 2.0;
    let z = ((w_plus - mean).abs() - 0.5).max(0.0) / libm::sqrt(k2);
    (Some(z), k4 / (k2 * k2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedRank {
    pub w_plus: f64,
    pub w_minus: f64,
    /// Number of non-zero differences that entered the ranking.
    pub nonzero: usize,
    pub p_value: f64,
    pub method: PValueMethod,
}

impl SignedRank {
    /// Sign of the location shift: `Greater` when positive differences dominate the ranks.
    pub fn direction(&self) -> Ordering {
        self.w_plus.total_cmp(&self.w_minus)
    }
}

/// Signed-rank test on raw differences, with an explicit p-value method.
pub fn signed_rank_with(diffs: &[f64], method: PValueMethod) -> Result<SignedRank> {
    let ranked = rank_differences(diffs);
    let m = ranked.len();
    if m < MIN_NONZERO {
        return Err(Error::InsufficientData {
            needed: MIN_NONZERO,
            found: m,
        });
    }
    let w2 = ranked.doubled_w_plus();
    let total2: u32 = ranked.doubled_ranks.iter().sum();
    let w_plus = w2 as f64 / 2.0;
    let p_value = match method {
        PValueMethod::Exact => exact_p_value(&ranked.doubled_ranks, w2),
        PValueMethod::Normal => normal_p_value(&ranked.doubled_ranks, w2),
        PValueMethod::Edgeworth => edgeworth_p_value(&ranked.doubled_ranks, w2),
    };
    Ok(SignedRank {
        w_plus,
        w_minus: (total2 - w2) as f64 / 2.0,
        nonzero: m,
        p_value,
        method,
    })
}

/// Exact for at most [`EXACT_LIMIT`] non-zero differences, Edgeworth-corrected
/// normal beyond.
pub fn signed_rank(diffs: &[f64]) -> Result<SignedRank> {
    let m = diffs.iter().filter(|d| d.abs() > ZERO_TOLERANCE).count();
    let method = if m <= EXACT_LIMIT {
        PValueMethod::Exact
    } else {
        PValueMethod::Edgeworth
    };
    signed_rank_with(diffs, method)
}

/// Paired test on `a_i - b_i`.
pub fn wilcoxon_signed_rank(pairs: &[(f64, f64)]) -> Result<SignedRank> {
    let diffs: Vec<f64> = pairs.iter().map(|&(a, b)| a - b).collect();
    signed_rank(&diffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Loss,
    Win,
    Tie,
}

fn significant(diffs: &[f64], alpha: f64) -> Ordering {
    match signed_rank(diffs) {
        Ok(t) if t.p_value < alpha => t.direction(),
        _ => Ordering::Equal,
    }
}

/// One-sample test of GSEMO's repeated values against GREEDY's point value.
/// Fewer than [`MIN_NONZERO`] differing values is a tie.
pub fn per_instance_verdict(gsemo_values: &[f64], greedy_value: f64, alpha: f64) -> Outcome {
    let diffs: Vec<f64> = gsemo_values.iter().map(|v| v - greedy_value).collect();
    match significant(&diffs, alpha) {
        Ordering::Greater => Outcome::Win,
        Ordering::Less => Outcome::Loss,
        Ordering::Equal => Outcome::Tie,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Greater,
    Less,
    NoDifference,
}

impl Verdict {
    pub fn symbol(self) -> char {
        match self {
            Verdict::Greater => '+',
            Verdict::Less => '-',
            Verdict::NoDifference => '*',
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Is `candidate` significantly greater or less than `baseline`, paired by index?
pub fn paired_verdict(baseline: &[f64], candidate: &[f64], alpha: f64) -> Verdict {
    assert_eq!(baseline.len(), candidate.len(), "paired columns differ in length");
    let diffs: Vec<f64> = candidate.iter().zip(baseline).map(|(c, b)| c - b).collect();
    match significant(&diffs, alpha) {
        Ordering::Greater => Verdict::Greater,
        Ordering::Less => Verdict::Less,
        Ordering::Equal => Verdict::NoDifference,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    fn of(values: &[f64]) -> Range {
        Range {
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// One row of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingSummary {
    pub instances: usize,
    pub greedy: Range,
    /// Ranges across instances of the per-instance GSEMO min, mean and max.
    pub gsemo_min: Range,
    pub gsemo_mean: Range,
    pub gsemo_max: Range,
    /// GSEMO⁻, GSEMO*, GSEMO⁺ against GREEDY.
    pub verdicts: [Verdict; 3],
    pub losses: usize,
    pub wins: usize,
    pub ties: usize,
}

/// Builds a setting row from GREEDY's value and GSEMO's repeated values per
/// instance. Both maps must cover the same instance keys.
pub fn setting_verdicts<K: Ord + fmt::Display>(
    greedy: &BTreeMap<K, f64>,
    gsemo: &BTreeMap<K, Vec<f64>>,
    alpha: f64,
) -> Result<SettingSummary> {
    let mut missing: Vec<_> = greedy
        .keys()
        .filter(|k| gsemo.get(*k).is_none_or(|v| v.is_empty()))
        .map(|k| k.to_string())
        .collect();
    missing.extend(gsemo.keys().filter(|k| !greedy.contains_key(*k)).map(|k| k.to_string()));
    if !missing.is_empty() {
        return Err(Error::MissingPairs(missing));
    }
    if greedy.is_empty() {
        return Err(Error::Empty("setting"));
    }

    let mut g = Vec::with_capacity(greedy.len());
    let mut lo = Vec::with_capacity(greedy.len());
    let mut mean = Vec::with_capacity(greedy.len());
    let mut hi = Vec::with_capacity(greedy.len());
    let (mut losses, mut wins, mut ties) = (0, 0, 0);
    for (key, &gv) in greedy {
        let runs = &gsemo[key];
        let s = aggregate_runs(runs)?;
        g.push(gv);
        lo.push(s.min);
        mean.push(s.mean);
        hi.push(s.max);
        match per_instance_verdict(runs, gv, alpha) {
            Outcome::Loss => losses += 1,
            Outcome::Win => wins += 1,
            Outcome::Tie => ties += 1,
        }
    }
    Ok(SettingSummary {
        instances: g.len(),
        greedy: Range::of(&g),
        gsemo_min: Range::of(&lo),
        gsemo_mean: Range::of(&mean),
        gsemo_max: Range::of(&hi),
        verdicts: [
            paired_verdict(&g, &lo, alpha),
            paired_verdict(&g, &mean, alpha),
            paired_verdict(&g, &hi, alpha),
        ],
        losses,
        wins,
        ties,
    })
}

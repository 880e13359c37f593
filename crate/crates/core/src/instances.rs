//! Random max-cut benchmark instances and the two constraint families.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::objectives::WeightedGraph;
use crate::rng::rng_from_seed;
use crate::{Error, PartitionMatroid, Result};

/// Which vertex pairs edges are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EdgeUniverse {
    /// Unordered pairs of distinct vertices; every weight is uniform in `[0, 1)`.
    #[default]
    Unordered,
    /// All `n²` ordered pairs. Self-loops are discarded and a pair drawn in
    /// both directions becomes one edge carrying the sum of both weights.
    Ordered,
}

impl EdgeUniverse {
    pub fn name(self) -> &'static str {
        match self {
            EdgeUniverse::Unordered => "unordered",
            EdgeUniverse::Ordered => "ordered",
        }
    }

    fn pool_size(self, n: u64) -> u64 {
        match self {
            EdgeUniverse::Unordered => n * n.saturating_sub(1) / 2,
            EdgeUniverse::Ordered => n * n,
        }
    }
}

impl FromStr for EdgeUniverse {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unordered" => Ok(EdgeUniverse::Unordered),
            "ordered" => Ok(EdgeUniverse::Ordered),
            _ => Err(Error::InvalidInstance(format!("unknown edge universe {s:?}"))),
        }
    }
}

/// `⌊density · n²⌋`. A `1e-9` nudge absorbs representation error in `density`.
pub fn edge_count(n: usize, density: f64) -> u64 {
    libm::floor(density * (n * n) as f64 + 1e-9) as u64
}

/// Validates `density` for `n` and returns the number of sampled pairs.
pub fn check_density(n: usize, density: f64, universe: EdgeUniverse) -> Result<u64> {
    if !(density.is_finite() && density > 0.0) {
        return Err(Error::InvalidInstance(format!("density must be positive, got {density}")));
    }
    let m = edge_count(n, density);
    let pool = universe.pool_size(n as u64);
    if m > pool {
        return Err(Error::InvalidInstance(format!(
            "density {density} asks for {m} edges but only {pool} {} pairs exist for n = {n}",
            universe.name()
        )));
    }
    Ok(m)
}

/// Partial Fisher-Yates: the first `m` entries of `pool` become a uniform
/// sample without replacement.
fn partial_shuffle<T, R: Rng + ?Sized>(pool: &mut [T], m: usize, rng: &mut R) {
    let len = pool.len() as u64;
    for i in 0..m {
        let j = i as u64 + rng.random_range(0..len - i as u64);
        pool.swap(i, j as usize);
    }
}

/// Samples `⌊density · n²⌋` distinct pairs uniformly without replacement and
/// gives each a uniform weight.
pub fn generate_graph<R: Rng + ?Sized>(
    n: usize,
    density: f64,
    universe: EdgeUniverse,
    rng: &mut R,
) -> Result<WeightedGraph> {
    let m = check_density(n, density, universe)? as usize;
    let mut pool: Vec<(u32, u32)> = match universe {
        EdgeUniverse::Unordered => (0..n as u32)
            .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
            .collect(),
        EdgeUniverse::Ordered => (0..n as u32)
            .flat_map(|a| (0..n as u32).map(move |b| (a, b)))
            .collect(),
    };
    partial_shuffle(&mut pool, m, rng);
    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(a, b) in &pool[..m] {
        let w: f64 = rng.random();
        if a == b {
            continue;
        }
        let key = (a.min(b) as usize, a.max(b) as usize);
        *merged.entry(key).or_insert(0.0) += w;
    }
    WeightedGraph::new(n, merged.into_iter().map(|((u, v), w)| (u, v, w)))
}

/// Exact fraction `num/den` of the ground set used as a cardinality budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction {
    pub num: u32,
    pub den: u32,
}

impl Fraction {
    pub const fn new(num: u32, den: u32) -> Self {
        Fraction { num, den }
    }

    /// `round(num/den · n)` with halves rounded up.
    pub fn of(self, n: usize) -> usize {
        let (num, den, n) = (self.num as u64, self.den as u64, n as u64);
        ((2 * num * n + den) / (2 * den)) as usize
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Single block, `d_1 = round(fraction · n)`.
pub fn make_cardinality_constraint(n: usize, fraction: Fraction) -> Result<PartitionMatroid> {
    if fraction.den == 0 || fraction.num == 0 || fraction.num > fraction.den {
        return Err(Error::InvalidInstance(format!(
            "cardinality fraction must lie in (0, 1], got {fraction}"
        )));
    }
    let d = fraction.of(n);
    if d == 0 {
        return Err(Error::InvalidInstance(format!(
            "{fraction} of n = {n} rounds to a zero budget"
        )));
    }
    PartitionMatroid::cardinality(n, d)
}

/// `k` equal blocks from a uniformly random balanced assignment, each with
/// threshold `⌈n / 2k⌉`.
pub fn make_partition_constraint<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<PartitionMatroid> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidInstance(format!(
            "equal-size blocks need k to divide n (n = {n}, k = {k})"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    partial_shuffle(&mut order, n, rng);
    let block = n / k;
    let mut assignment = alloc::vec![0; n];
    for (pos, &e) in order.iter().enumerate() {
        assignment[e] = pos / block;
    }
    let threshold = n.div_ceil(2 * k);
    PartitionMatroid::new(assignment, alloc::vec![threshold; k])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintScheme {
    Cardinality(Fraction),
    Partition { k: usize },
}

impl ConstraintScheme {
    pub fn family(&self) -> &'static str {
        match self {
            ConstraintScheme::Cardinality(_) => "cardinality",
            ConstraintScheme::Partition { .. } => "partition",
        }
    }

    pub fn needs_seed(&self) -> bool {
        matches!(self, ConstraintScheme::Partition { .. })
    }

    pub fn build(&self, n: usize, seed: Option<u64>) -> Result<PartitionMatroid> {
        match *self {
            ConstraintScheme::Cardinality(fr) => make_cardinality_constraint(n, fr),
            ConstraintScheme::Partition { k } => {
                let seed = seed.ok_or_else(|| {
                    Error::InvalidInstance("partition scheme requires a seed".into())
                })?;
                make_partition_constraint(n, k, &mut rng_from_seed(seed))
            }
        }
    }
}

impl fmt::Display for ConstraintScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintScheme::Cardinality(fr) => write!(f, "card:{fr}"),
            ConstraintScheme::Partition { k } => write!(f, "part:{k}"),
        }
    }
}

impl FromStr for ConstraintScheme {
    type Err = Error;

    /// `card:<num>/<den>` or `part:<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInstance(format!("bad constraint scheme {s:?}"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "card" => {
                let (num, den) = arg.split_once('/').ok_or_else(bad)?;
                let fr = Fraction::new(num.parse().map_err(|_| bad())?, den.parse().map_err(|_| bad())?);
                if fr.den == 0 || fr.num == 0 || fr.num > fr.den {
                    return Err(bad());
                }
                Ok(ConstraintScheme::Cardinality(fr))
            }
            "part" => {
                let k: usize = arg.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                Ok(ConstraintScheme::Partition { k })
            }
            _ => Err(bad()),
        }
    }
}

/// 64-bit instance identity, printed as 16 hex digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InstanceId(pub u64);

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl FromStr for InstanceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        u64::from_str_radix(s, 16)
            .map(InstanceId)
            .map_err(|_| Error::InvalidInstance(format!("bad instance id {s:?}")))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// FNV-1a identity of arbitrary bytes, for instances without a generating spec.
pub fn content_id(bytes: &[u8]) -> InstanceId {
    InstanceId(fnv1a(bytes))
}

/// Everything needed to regenerate one benchmark instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub n: usize,
    pub density: f64,
    pub scheme: ConstraintScheme,
    pub graph_seed: u64,
    pub partition_seed: Option<u64>,
    pub universe: EdgeUniverse,
}

impl InstanceSpec {
    /// Canonical text the id is hashed from.
    pub fn canonical(&self) -> String {
        let part = self
            .partition_seed
            .map_or_else(|| "-".to_string(), |s| s.to_string());
        format!(
            "n={}|density={:?}|graph_seed={}|scheme={}|partition_seed={}|universe={}",
            self.n,
            self.density,
            self.graph_seed,
            self.scheme,
            part,
            self.universe.name()
        )
    }

    pub fn id(&self) -> InstanceId {
        InstanceId(fnv1a(self.canonical().as_bytes()))
    }

    pub fn graph(&self) -> Result<WeightedGraph> {
        generate_graph(self.n, self.density, self.universe, &mut rng_from_seed(self.graph_seed))
    }

    pub fn constraint(&self) -> Result<PartitionMatroid> {
        self.scheme.build(self.n, self.partition_seed)
    }
}

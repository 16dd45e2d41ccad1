//! Integer partitions, their statistics, and symmetric-group characters.
//!
//! Characters are computed with the Murnaghan–Nakayama rule on beta-sets
//! (abacus positions) and sealed into one [`CharacterTable`] per weight.
//! Tables are shared process-wide through [`character_table`] and can be
//! persisted to a directory of versioned JSON files, one per weight.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// The derived `Ord` is lexicographic on the parts; the canonical listing
/// order used for reports is the reverse of it (see [`partitions_of`]).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Validates that `parts` is weakly decreasing and strictly positive.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Parse(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!(
                "parts not weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zero parts.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn row(n: u32) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition(vec![n])
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of parts, l(λ).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicity of each part size, ascending by part.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// z_λ = |Aut(λ)| · Π λ_i.
    pub fn z(&self) -> u128 {
        let mut z: u128 = 1;
        for (part, mult) in self.multiplicities() {
            for k in 1..=mult as u128 {
                z = z.checked_mul(k * part as u128).expect("z_mu overflow");
            }
        }
        z
    }

    /// κ_λ = Σ λ_i (λ_i − 2i + 1), twice the content sum.
    pub fn kappa(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| p as i64 * (p as i64 - 2 * (i as i64 + 1) + 1))
            .sum()
    }

    pub fn conjugate(&self) -> Self {
        let Some(&first) = self.0.first() else {
            return Self::empty();
        };
        Partition(
            (1..=first)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    pub fn as_hook(&self) -> Option<HookShape> {
        let (&first, rest) = self.0.split_first()?;
        if rest.iter().all(|&p| p == 1) {
            Some(HookShape {
                arm: first - 1,
                leg: rest.len() as u32,
            })
        } else {
            None
        }
    }

    /// True when p divides every part ("p | μ"). Vacuously true for ∅.
    pub fn all_parts_divisible(&self, p: u32) -> bool {
        self.0.iter().all(|&x| x % p == 0)
    }

    /// The partition c·λ = (cλ_1, cλ_2, ...).
    pub fn scaled(&self, c: u32) -> Self {
        Partition(self.0.iter().map(|&x| x * c).collect())
    }

    /// The ν with pν = λ, when every part is divisible by p.
    pub fn divided(&self, p: u32) -> Option<Self> {
        self.all_parts_divisible(p)
            .then(|| Partition(self.0.iter().map(|&x| x / p).collect()))
    }

    /// gcd of the parts; 0 for ∅.
    pub fn parts_gcd(&self) -> u32 {
        self.0.iter().fold(0, |g, &x| g.gcd(&x))
    }

    /// Multiset union, re-sorted.
    pub fn union(&self, other: &Partition) -> Self {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Self::from_unsorted(parts)
    }

    pub fn divisibility(&self, p: u32) -> DivisibilityInfo {
        DivisibilityInfo {
            all_parts_divisible: self.all_parts_divisible(p),
            scaled: self.scaled(p),
            preimage: self.divided(p),
            gcd: self.parts_gcd(),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join("+"))
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses the canonical key form `"3+1+1"`; `"0"` and `""` give ∅.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Self::empty());
        }
        let parts = s
            .split('+')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Result of [`Partition::divisibility`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityInfo {
    pub all_parts_divisible: bool,
    pub scaled: Partition,
    pub preimage: Option<Partition>,
    pub gcd: u32,
}

/// Hook (m|n) = (m+1, 1^n), of weight m + n + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HookShape {
    pub arm: u32,
    pub leg: u32,
}

impl HookShape {
    pub fn new(arm: u32, leg: u32) -> Self {
        HookShape { arm, leg }
    }

    pub fn weight(&self) -> u32 {
        self.arm + self.leg + 1
    }

    pub fn to_partition(&self) -> Partition {
        let mut parts = vec![self.arm + 1];
        parts.extend(std::iter::repeat_n(1, self.leg as usize));
        Partition(parts)
    }

    /// All hooks of the given weight, ordered by increasing leg.
    pub fn all_of_weight(d: u32) -> Vec<HookShape> {
        if d == 0 {
            return Vec::new();
        }
        (0..d)
            .map(|leg| HookShape {
                arm: d - 1 - leg,
                leg,
            })
            .collect()
    }
}

impl fmt::Display for HookShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.arm, self.leg)
    }
}

/// All partitions of `n` in reverse-lexicographic order: (n), (n-1,1), ..., (1^n).
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions of weight `1..=max_weight`, grouped by weight.
pub fn partitions_up_to(max_weight: u32) -> Vec<Partition> {
    (1..=max_weight).flat_map(partitions_of).collect()
}

/// Möbius function.
pub fn mobius(n: u32) -> i64 {
    assert!(n > 0);
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}

// ---------------------------------------------------------------------------
// Murnaghan–Nakayama
// ---------------------------------------------------------------------------

/// Beta-set of λ with exactly `len` beads: λ_i + (len − i), decreasing.
fn beta_set(parts: &[u32], len: usize) -> Vec<u32> {
    (0..len)
        .map(|i| parts.get(i).copied().unwrap_or(0) + (len - 1 - i) as u32)
        .collect()
}

fn from_beta_set(mut beta: Vec<u32>) -> Partition {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let len = beta.len();
    Partition::from_unsorted(
        beta.iter()
            .enumerate()
            .map(|(i, &b)| b - (len - 1 - i) as u32)
            .collect(),
    )
}

/// All ways to remove a rim hook of length `k` from λ, with the sign (−1)^{height}.
fn remove_rim_hooks(lambda: &Partition, k: u32) -> Vec<(Partition, i64)> {
    let beta = beta_set(&lambda.0, lambda.len());
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        if b < k {
            continue;
        }
        let target = b - k;
        if beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut next = beta.clone();
        next[idx] = target;
        out.push((from_beta_set(next), if height % 2 == 0 { 1 } else { -1 }));
    }
    out
}

/// χ_λ(μ) by the Murnaghan–Nakayama rule, memoized on (λ, μ).
///
/// Removes the largest part of μ first. Returns 0 when |λ| ≠ |μ|.
pub fn murnaghan_nakayama(lambda: &Partition, mu: &Partition) -> i64 {
    let mut memo = HashMap::new();
    mn_memo(lambda, mu.parts(), &mut memo)
}

fn mn_memo(lambda: &Partition, mu: &[u32], memo: &mut HashMap<(Partition, Vec<u32>), i64>) -> i64 {
    let weight: u32 = mu.iter().sum();
    if lambda.weight() != weight {
        return 0;
    }
    let Some((&k, rest)) = mu.split_first() else {
        return 1;
    };
    let key = (lambda.clone(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let v = remove_rim_hooks(lambda, k)
        .into_iter()
        .map(|(smaller, sign)| sign * mn_memo(&smaller, rest, memo))
        .sum();
    memo.insert(key, v);
    v
}

/// All characters χ_λ(μ) for λ, μ ⊢ n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    weight: u32,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// `values[i][j] = χ_{partitions[i]}(partitions[j])`
    values: Vec<Vec<i64>>,
}

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    weight: u32,
    characters: BTreeMap<String, BTreeMap<String, i64>>,
}

impl CharacterTable {
    pub fn compute(n: u32) -> Self {
        let partitions = partitions_of(n);
        let mut memo = HashMap::new();
        let values = partitions
            .iter()
            .map(|lambda| {
                partitions
                    .iter()
                    .map(|mu| mn_memo(lambda, mu.parts(), &mut memo))
                    .collect()
            })
            .collect();
        Self::from_parts(n, partitions, values)
    }

    fn from_parts(weight: u32, partitions: Vec<Partition>, values: Vec<Vec<i64>>) -> Self {
        let index = partitions
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        CharacterTable {
            weight,
            partitions,
            index,
            values,
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn get(&self, lambda: &Partition, mu: &Partition) -> i64 {
        match (self.index.get(lambda), self.index.get(mu)) {
            (Some(&i), Some(&j)) => self.values[i][j],
            _ => 0,
        }
    }

    pub fn row(&self, lambda: &Partition) -> Option<&[i64]> {
        self.index.get(lambda).map(|&i| self.values[i].as_slice())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut characters = BTreeMap::new();
        for (i, lambda) in self.partitions.iter().enumerate() {
            let row = self
                .partitions
                .iter()
                .enumerate()
                .map(|(j, mu)| (mu.to_string(), self.values[i][j]))
                .collect();
            characters.insert(lambda.to_string(), row);
        }
        let file = CacheFile {
            version: CACHE_FORMAT_VERSION,
            weight: self.weight,
            characters,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Parses a cache file and checks that it is complete for its weight.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: CacheFile = serde_json::from_str(text)?;
        if file.version != CACHE_FORMAT_VERSION {
            return Err(Error::Cache(format!(
                "unsupported cache version {}",
                file.version
            )));
        }
        let partitions = partitions_of(file.weight);
        let mut values = Vec::with_capacity(partitions.len());
        for lambda in &partitions {
            let row = file
                .characters
                .get(&lambda.to_string())
                .ok_or_else(|| Error::Cache(format!("missing row {lambda}")))?;
            let row = partitions
                .iter()
                .map(|mu| {
                    row.get(&mu.to_string())
                        .copied()
                        .ok_or_else(|| Error::Cache(format!("missing entry {lambda},{mu}")))
                })
                .collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        if file.characters.len() != partitions.len() {
            return Err(Error::Cache("unexpected rows in cache file".into()));
        }
        Ok(Self::from_parts(file.weight, partitions, values))
    }
}

fn registry() -> &'static RwLock<HashMap<u32, Arc<CharacterTable>>> {
    static TABLES: OnceLock<RwLock<HashMap<u32, Arc<CharacterTable>>>> = OnceLock::new();
    TABLES.get_or_init(Default::default)
}

/// The shared character table of weight `n`, computed on first use.
pub fn character_table(n: u32) -> Arc<CharacterTable> {
    if let Some(t) = registry().read().unwrap().get(&n) {
        return Arc::clone(t);
    }
    let table = Arc::new(CharacterTable::compute(n));
    let mut guard = registry().write().unwrap();
    Arc::clone(guard.entry(n).or_insert(table))
}

/// Seeds the shared registry, e.g. from a disk cache. Existing entries win.
pub fn install_table(table: CharacterTable) {
    registry()
        .write()
        .unwrap()
        .entry(table.weight)
        .or_insert_with(|| Arc::new(table));
}

/// χ_λ(μ); zero when the weights differ.
pub fn chi(lambda: &Partition, mu: &Partition) -> i64 {
    if lambda.weight() != mu.weight() {
        return 0;
    }
    character_table(lambda.weight()).get(lambda, mu)
}

// ---------------------------------------------------------------------------
// Disk cache
// ---------------------------------------------------------------------------

/// A directory of `chars-<n>.json` files.
#[derive(Clone, Debug)]
pub struct CharacterCache {
    dir: PathBuf,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheBuildStats {
    pub written: Vec<u32>,
    pub reused: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStat {
    pub entries: usize,
    pub weights: Vec<u32>,
    pub bytes: u64,
}

impl CharacterCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CharacterCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, n: u32) -> PathBuf {
        self.dir.join(format!("chars-{n}.json"))
    }

    pub fn load(&self, n: u32) -> Result<Option<CharacterTable>> {
        let path = self.path_for(n);
        if !path.exists() {
            return Ok(None);
        }
        let table = CharacterTable::from_json(&fs::read_to_string(&path)?)?;
        if table.weight != n {
            return Err(Error::Cache(format!(
                "{} holds weight {}",
                path.display(),
                table.weight
            )));
        }
        Ok(Some(table))
    }

    /// Writes tables for weights `1..=max_weight`, keeping files that already load cleanly.
    pub fn build(&self, max_weight: u32) -> Result<CacheBuildStats> {
        fs::create_dir_all(&self.dir)?;
        let mut stats = CacheBuildStats::default();
        for n in 1..=max_weight {
            if let Ok(Some(table)) = self.load(n) {
                install_table(table);
                stats.reused.push(n);
                continue;
            }
            let table = character_table(n);
            fs::write(self.path_for(n), table.to_json()?)?;
            stats.written.push(n);
        }
        Ok(stats)
    }

    /// Loads every cached table into the shared registry; returns the weights loaded.
    pub fn install_all(&self) -> Result<Vec<u32>> {
        let mut loaded = Vec::new();
        for n in self.stat()?.weights {
            if let Some(table) = self.load(n)? {
                install_table(table);
                loaded.push(n);
            }
        }
        Ok(loaded)
    }

    pub fn stat(&self) -> Result<CacheStat> {
        let mut stat = CacheStat::default();
        if !self.dir.exists() {
            return Ok(stat);
        }
        for entry in fs::read_dir(&self.dir)? {
            let entry = entry?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if let Some(n) = name
                .strip_prefix("chars-")
                .and_then(|s| s.strip_suffix(".json"))
            {
                if let Ok(n) = n.parse::<u32>() {
                    stat.weights.push(n);
                    stat.bytes += entry.metadata()?.len();
                }
            }
        }
        stat.weights.sort_unstable();
        stat.entries = stat.weights.len();
        Ok(stat)
    }

    /// Removes cache files; returns how many were deleted.
    pub fn clear(&self) -> Result<usize> {
        let stat = self.stat()?;
        for &n in &stat.weights {
            fs::remove_file(self.path_for(n))?;
        }
        Ok(stat.entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn small_partition_lists() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(1), vec![p(&[1])]);
        assert_eq!(
            partitions_of(4),
            vec![
                p(&[4]),
                p(&[3, 1]),
                p(&[2, 2]),
                p(&[2, 1, 1]),
                p(&[1, 1, 1, 1])
            ]
        );
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=15).map(|n| partitions_of(n).len()).collect();
        assert_eq!(
            counts,
            vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176]
        );
    }

    #[test]
    fn z_values() {
        assert_eq!(p(&[1, 1, 1]).z(), 6);
        assert_eq!(p(&[3]).z(), 3);
        assert_eq!(p(&[2, 1]).z(), 2);
        assert_eq!(Partition::empty().z(), 1);
    }

    #[test]
    fn kappa_values() {
        assert_eq!(p(&[2]).kappa(), 2);
        assert_eq!(p(&[1, 1]).kappa(), -2);
        assert_eq!(p(&[2, 1]).kappa(), 0);
        for n in 1..=8 {
            for lambda in partitions_of(n) {
                assert_eq!(lambda.conjugate().kappa(), -lambda.kappa(), "{lambda}");
            }
        }
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&p(&[2, 1]), &p(&[3])), -1);
        assert_eq!(chi(&p(&[3]), &p(&[2, 1])), 1);
        assert_eq!(chi(&p(&[1, 1, 1]), &p(&[2, 1])), -1);
        assert_eq!(chi(&p(&[2, 1]), &p(&[2])), 0);
    }

    #[test]
    fn divisibility_helpers() {
        let info = p(&[4, 2]).divisibility(2);
        assert!(info.all_parts_divisible);
        assert_eq!(info.preimage, Some(p(&[2, 1])));
        assert_eq!(info.gcd, 2);
        assert!(!p(&[3, 1]).all_parts_divisible(2));
        let nu = p(&[2, 1]);
        assert_eq!(nu.scaled(3), p(&[6, 3]));
        assert_eq!(nu.scaled(3).z(), 18);
        assert_eq!(nu.scaled(3).z(), 3u128.pow(nu.len() as u32) * nu.z());
    }

    #[test]
    fn hooks_round_trip() {
        for d in 1..=6 {
            for hook in HookShape::all_of_weight(d) {
                let lambda = hook.to_partition();
                assert_eq!(lambda.weight(), d);
                assert_eq!(lambda.as_hook(), Some(hook));
                assert_eq!(
                    chi(&lambda, &Partition::row(d)),
                    if hook.leg % 2 == 0 { 1 } else { -1 }
                );
                assert_eq!(
                    lambda.kappa(),
                    (hook.arm as i64 - hook.leg as i64) * d as i64
                );
            }
        }
        assert_eq!(p(&[2, 2]).as_hook(), None);
    }

    #[test]
    fn non_hooks_vanish_on_full_cycle() {
        for n in 1..=9 {
            for lambda in partitions_of(n) {
                if lambda.as_hook().is_none() {
                    assert_eq!(chi(&lambda, &Partition::row(n)), 0);
                }
            }
        }
    }

    #[test]
    fn mobius_values() {
        let v: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(v, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn key_strings() {
        assert_eq!(p(&[3, 1, 1]).to_string(), "3+1+1");
        assert_eq!("3+1+1".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1+3".parse::<Partition>().is_err());
    }

    #[test]
    fn cache_file_round_trip() {
        let table = CharacterTable::compute(5);
        let back = CharacterTable::from_json(&table.to_json().unwrap()).unwrap();
        assert_eq!(back, table);
    }
}

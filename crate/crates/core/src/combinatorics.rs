//! Index sets: two-part compositions, signed multisets of them, labelled
//! shapes (signed collections of nations filled with `1..=N`), the symmetric
//! group action and the counting series.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::{par_map, Execution};

/// A composition with at most two parts: `top ≥ 1` individuals in the first
/// county and `bottom ≥ 0` in the second.
///
/// Ordered by total size, then by ascending `bottom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Composition2 {
    pub top: usize,
    pub bottom: usize,
}

impl Composition2 {
    pub fn new(top: usize, bottom: usize) -> Result<Self> {
        if top == 0 {
            return Err(Error::InvalidRank(0));
        }
        Ok(Self { top, bottom })
    }

    pub fn total(&self) -> usize {
        self.top + self.bottom
    }

    fn key(&self) -> (usize, usize) {
        (self.total(), self.bottom)
    }
}

impl Ord for Composition2 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Composition2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The `k` compositions of total `k`, ascending by bottom size.
pub fn enum_compositions2(k: usize) -> Result<Vec<Composition2>> {
    if k == 0 {
        return Err(Error::InvalidRank(0));
    }
    Ok((0..k).map(|b| Composition2 { top: k - b, bottom: b }).collect())
}

/// A finite multiset of compositions, stored as sorted `(composition,
/// multiplicity)` pairs with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multiset(Vec<(Composition2, usize)>);

impl Multiset {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_list(items: impl IntoIterator<Item = Composition2>) -> Self {
        let mut counts: BTreeMap<Composition2, usize> = BTreeMap::new();
        for c in items {
            *counts.entry(c).or_default() += 1;
        }
        Self(counts.into_iter().collect())
    }

    pub fn counts(&self) -> &[(Composition2, usize)] {
        &self.0
    }

    /// Each composition repeated by its multiplicity, in ascending order.
    pub fn expanded(&self) -> Vec<Composition2> {
        self.0.iter().flat_map(|&(c, m)| std::iter::repeat(c).take(m)).collect()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|(c, m)| c.total() * m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|(_, m)| m).sum()
    }
}

/// All multisets of compositions of total degree `n`.
///
/// Order: compositions are considered in ascending order, and for each the
/// multiplicity is taken from largest to smallest. For `n = 2` this gives
/// `□², (2), (1,1)`.
pub fn enum_multisets(n: usize) -> Vec<Multiset> {
    let comps: Vec<Composition2> =
        (1..=n).flat_map(|k| enum_compositions2(k).expect("k >= 1")).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill_multisets(&comps, 0, n, &mut current, &mut out);
    out
}

fn fill_multisets(
    comps: &[Composition2],
    from: usize,
    remaining: usize,
    current: &mut Vec<(Composition2, usize)>,
    out: &mut Vec<Multiset>,
) {
    if remaining == 0 {
        out.push(Multiset(current.clone()));
        return;
    }
    for idx in from..comps.len() {
        let c = comps[idx];
        if c.total() > remaining {
            break;
        }
        for m in (1..=remaining / c.total()).rev() {
            current.push((c, m));
            fill_multisets(comps, idx + 1, remaining - m * c.total(), current, out);
            current.pop();
        }
    }
}

/// An element of the signed index set: a pair of multisets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignedShape {
    pub plus: Multiset,
    pub minus: Multiset,
}

impl SignedShape {
    pub fn new(plus: Multiset, minus: Multiset) -> Self {
        Self { plus, minus }
    }

    pub fn rank(&self) -> usize {
        self.plus.degree() + self.minus.degree()
    }
}

/// All signed shapes of total degree `n`, with the plus part's degree running
/// from `n` down to 0.
pub fn enum_signed(n: usize) -> Vec<SignedShape> {
    let tables: Vec<Vec<Multiset>> = (0..=n).map(enum_multisets).collect();
    let mut out = Vec::new();
    for p in (0..=n).rev() {
        for f in &tables[p] {
            for g in &tables[n - p] {
                out.push(SignedShape::new(f.clone(), g.clone()));
            }
        }
    }
    out
}

/// Coefficients up to `x^max_n` of `∏_k (1 - x^k)^{-k}` and of its square.
pub fn count_series(max_n: usize) -> (Vec<BigUint>, Vec<BigUint>) {
    let mut unsigned = vec![BigUint::zero(); max_n + 1];
    unsigned[0] = BigUint::one();
    for k in 1..=max_n {
        // Multiplying by 1/(1 - x^k) is a running sum with stride k.
        for _ in 0..k {
            for i in k..=max_n {
                let prev = unsigned[i - k].clone();
                unsigned[i] += prev;
            }
        }
    }
    let signed = (0..=max_n)
        .map(|n| (0..=n).map(|p| &unsigned[p] * &unsigned[n - p]).sum())
        .collect();
    (unsigned, signed)
}

/// The sign carried by a nation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A nation: a non-empty top county and a possibly empty bottom county, both
/// held sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Nation {
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
}

impl Nation {
    pub fn new(mut top: Vec<usize>, mut bottom: Vec<usize>) -> Result<Self> {
        if top.is_empty() {
            return Err(Error::ConstraintViolated("top county must be non-empty".into()));
        }
        top.sort_unstable();
        bottom.sort_unstable();
        Ok(Self { top, bottom })
    }

    pub fn composition(&self) -> Composition2 {
        Composition2 { top: self.top.len(), bottom: self.bottom.len() }
    }

    pub fn lowest(&self) -> usize {
        let t = self.top.first().copied().unwrap_or(usize::MAX);
        let b = self.bottom.first().copied().unwrap_or(usize::MAX);
        t.min(b)
    }

    pub fn residents(&self) -> impl Iterator<Item = usize> + '_ {
        self.top.iter().chain(self.bottom.iter()).copied()
    }

    fn order_key(&self) -> (Composition2, usize) {
        (self.composition(), self.lowest())
    }
}

/// A labelled shape: signed nations whose counties partition `1..=N`.
///
/// Nations within each sign are kept in the standard order: by composition,
/// then by lowest resident. Nation `s` (1-based) counts plus nations first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelledShape {
    plus: Vec<Nation>,
    minus: Vec<Nation>,
    rank: usize,
}

/// Where an individual lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residence {
    /// 0-based nation index in the standard order.
    pub nation: usize,
    pub top: bool,
}

impl LabelledShape {
    pub fn new(mut plus: Vec<Nation>, mut minus: Vec<Nation>) -> Result<Self> {
        let rank: usize = plus.iter().chain(minus.iter()).map(|n| n.top.len() + n.bottom.len()).sum();
        let mut seen = vec![false; rank + 1];
        for nation in plus.iter().chain(minus.iter()) {
            if nation.top.is_empty() {
                return Err(Error::ConstraintViolated("top county must be non-empty".into()));
            }
            for i in nation.residents() {
                if i == 0 || i > rank {
                    return Err(Error::IndexOutOfRange { index: i, n: rank });
                }
                if seen[i] {
                    return Err(Error::ConstraintViolated(format!("individual {i} appears twice")));
                }
                seen[i] = true;
            }
        }
        for n in plus.iter_mut().chain(minus.iter_mut()) {
            n.top.sort_unstable();
            n.bottom.sort_unstable();
        }
        plus.sort_by_key(Nation::order_key);
        minus.sort_by_key(Nation::order_key);
        Ok(Self { plus, minus, rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn plus(&self) -> &[Nation] {
        &self.plus
    }

    pub fn minus(&self) -> &[Nation] {
        &self.minus
    }

    /// All nations in standard order with their signs.
    pub fn nations(&self) -> impl Iterator<Item = (Sign, &Nation)> + '_ {
        self.plus.iter().map(|n| (Sign::Plus, n)).chain(self.minus.iter().map(|n| (Sign::Minus, n)))
    }

    pub fn nation_count(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    pub fn nation(&self, s: usize) -> (Sign, &Nation) {
        if s < self.plus.len() {
            (Sign::Plus, &self.plus[s])
        } else {
            (Sign::Minus, &self.minus[s - self.plus.len()])
        }
    }

    /// Residence of each individual; index 0 is unused.
    pub fn residences(&self) -> Vec<Residence> {
        let mut out = vec![Residence { nation: usize::MAX, top: false }; self.rank + 1];
        for (s, (_, nation)) in self.nations().enumerate() {
            for &i in &nation.top {
                out[i] = Residence { nation: s, top: true };
            }
            for &i in &nation.bottom {
                out[i] = Residence { nation: s, top: false };
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelledRepr {
    plus: Vec<Nation>,
    minus: Vec<Nation>,
}

impl Serialize for LabelledShape {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LabelledRepr { plus: self.plus.clone(), minus: self.minus.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabelledShape {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = LabelledRepr::deserialize(deserializer)?;
        LabelledShape::new(repr.plus, repr.minus).map_err(serde::de::Error::custom)
    }
}

fn write_nations(f: &mut std::fmt::Formatter<'_>, nations: &[Nation]) -> std::fmt::Result {
    let join = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    for (k, n) in nations.iter().enumerate() {
        if k > 0 {
            write!(f, " ")?;
        }
        if n.bottom.is_empty() {
            write!(f, "⟨{}⟩", join(&n.top))?;
        } else {
            write!(f, "⟨{}/{}⟩", join(&n.top), join(&n.bottom))?;
        }
    }
    Ok(())
}

/// `(⟨1 2/3⟩ ⟨4⟩, ⟨5⟩)`: plus nations, a comma, minus nations.
impl std::fmt::Display for LabelledShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        write_nations(f, &self.plus)?;
        write!(f, ", ")?;
        write_nations(f, &self.minus)?;
        write!(f, ")")
    }
}

fn parse_nations(text: &str) -> Result<Vec<Nation>> {
    let bad = || Error::Parse(format!("malformed nation list {text:?}"));
    let numbers = |s: &str| -> Result<Vec<usize>> {
        s.split_whitespace().map(|t| t.parse().map_err(|_| bad())).collect()
    };
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('⟨').or_else(|| rest.strip_prefix('<')).ok_or_else(bad)?;
        let end = body.find(['⟩', '>']).ok_or_else(bad)?;
        let (inner, tail) = body.split_at(end);
        let (top, bottom) = inner.split_once('/').unwrap_or((inner, ""));
        out.push(Nation::new(numbers(top)?, numbers(bottom)?)?);
        let close = tail.chars().next().map_or(0, char::len_utf8);
        rest = tail[close..].trim_start();
    }
    Ok(out)
}

/// Accepts the display form; `<` and `>` may stand in for the angle brackets.
impl std::str::FromStr for LabelledShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected (plus, minus), got {s:?}")))?;
        let (plus, minus) = inner.split_once(',').ok_or_else(|| Error::Parse("missing comma".into()))?;
        LabelledShape::new(parse_nations(plus)?, parse_nations(minus)?)
    }
}

/// `(1,0)^2 (2,1)`: compositions with multiplicities above one.
impl std::fmt::Display for Multiset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, (c, m)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "({},{})", c.top, c.bottom)?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

/// `((1,0)^2 (2,1), (1,1))`
impl std::fmt::Display for SignedShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.plus, self.minus)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignedRepr {
    plus: Vec<[usize; 2]>,
    minus: Vec<[usize; 2]>,
}

fn comps_from_pairs(pairs: &[[usize; 2]]) -> Result<Vec<Composition2>> {
    pairs.iter().map(|&[t, b]| Composition2::new(t, b)).collect()
}

impl Serialize for SignedShape {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let to_pairs = |m: &Multiset| m.expanded().iter().map(|c| [c.top, c.bottom]).collect();
        SignedRepr { plus: to_pairs(&self.plus), minus: to_pairs(&self.minus) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SignedShape {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SignedRepr::deserialize(deserializer)?;
        let plus = comps_from_pairs(&repr.plus).map_err(serde::de::Error::custom)?;
        let minus = comps_from_pairs(&repr.minus).map_err(serde::de::Error::custom)?;
        Ok(SignedShape::new(Multiset::from_list(plus), Multiset::from_list(minus)))
    }
}

/// Fills `1..=N` into the shape nation by nation, top county then bottom.
pub fn canonical_labelling(shape: &SignedShape) -> LabelledShape {
    let mut next = 1;
    let mut fill = |m: &Multiset| -> Vec<Nation> {
        m.expanded()
            .into_iter()
            .map(|c| {
                let top: Vec<usize> = (next..next + c.top).collect();
                let bottom: Vec<usize> = (next + c.top..next + c.total()).collect();
                next += c.total();
                Nation { top, bottom }
            })
            .collect()
    };
    let plus = fill(&shape.plus);
    let minus = fill(&shape.minus);
    LabelledShape::new(plus, minus).expect("filling produces a partition")
}

pub fn shape_of(lambda: &LabelledShape) -> SignedShape {
    SignedShape::new(
        Multiset::from_list(lambda.plus.iter().map(Nation::composition)),
        Multiset::from_list(lambda.minus.iter().map(Nation::composition)),
    )
}

/// Checks that `w` (1-based images, `w[i-1] = w(i)`) is a permutation of `1..=n`.
pub fn check_permutation(w: &[usize], n: usize) -> Result<()> {
    if w.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: w.len() });
    }
    let mut seen = vec![false; n + 1];
    for &x in w {
        if x == 0 || x > n || seen[x] {
            return Err(Error::NotInjective);
        }
        seen[x] = true;
    }
    Ok(())
}

pub fn invert_permutation(w: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; w.len()];
    for (i, &x) in w.iter().enumerate() {
        inv[x - 1] = i + 1;
    }
    inv
}

/// `(v ∘ w)(i) = v(w(i))`.
pub fn compose_permutations(v: &[usize], w: &[usize]) -> Vec<usize> {
    w.iter().map(|&x| v[x - 1]).collect()
}

/// Replaces every individual `i` by `w(i)`.
pub fn perm_action(w: &[usize], lambda: &LabelledShape) -> Result<LabelledShape> {
    check_permutation(w, lambda.rank)?;
    let map = |n: &Nation| Nation {
        top: n.top.iter().map(|&i| w[i - 1]).collect(),
        bottom: n.bottom.iter().map(|&i| w[i - 1]).collect(),
    };
    LabelledShape::new(lambda.plus.iter().map(map).collect(), lambda.minus.iter().map(map).collect())
}

/// All set partitions of `1..=n`, blocks in order of their least element.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i > n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, blocks, out);
        blocks.pop();
    }
    rec(1, n, &mut blocks, &mut out);
    out
}

/// Every ordered split of `block` into (non-empty top, bottom).
fn county_splits(block: &[usize]) -> Vec<Nation> {
    let k = block.len();
    (0u64..1 << k)
        .filter_map(|mask| {
            let top: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 0).map(|b| block[b]).collect();
            let bottom: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| block[b]).collect();
            (!top.is_empty()).then_some(Nation { top, bottom })
        })
        .collect()
}

fn labellings_of_partition(partition: &[Vec<usize>]) -> Vec<LabelledShape> {
    let choices: Vec<Vec<Nation>> = partition.iter().map(|b| county_splits(b)).collect();
    let mut out = Vec::new();
    let mut picked: Vec<(Nation, Sign)> = Vec::new();
    fn rec(
        choices: &[Vec<Nation>],
        picked: &mut Vec<(Nation, Sign)>,
        out: &mut Vec<LabelledShape>,
    ) {
        let d = picked.len();
        if d == choices.len() {
            let plus = picked.iter().filter(|p| p.1 == Sign::Plus).map(|p| p.0.clone()).collect();
            let minus = picked.iter().filter(|p| p.1 == Sign::Minus).map(|p| p.0.clone()).collect();
            out.push(LabelledShape::new(plus, minus).expect("partition is valid"));
            return;
        }
        for nation in &choices[d] {
            for sign in [Sign::Plus, Sign::Minus] {
                picked.push((nation.clone(), sign));
                rec(choices, picked, out);
                picked.pop();
            }
        }
    }
    rec(&choices, &mut picked, &mut out);
    out
}

fn labelled_sort_key(l: &LabelledShape) -> (SignedShape, Vec<Nation>, Vec<Nation>) {
    (shape_of(l), l.plus.clone(), l.minus.clone())
}

/// The full labelled set at rank `n`, sorted by shape and then by nations.
pub fn enum_labelled(n: usize) -> Result<Vec<LabelledShape>> {
    enum_labelled_with(n, Execution::default())
}

pub fn enum_labelled_with(n: usize, exec: Execution) -> Result<Vec<LabelledShape>> {
    if n == 0 {
        return Err(Error::InvalidRank(0));
    }
    let partitions = set_partitions(n);
    let mut out: Vec<LabelledShape> =
        par_map(exec, &partitions, |p| labellings_of_partition(p)).into_iter().flatten().collect();
    out.sort_by_cached_key(labelled_sort_key);
    Ok(out)
}

//! Construction of solutions: the recipe from a labelled shape and a
//! parameter point, the rank-2 braid families, the rank-2 loop braid
//! solutions, and random parameter sampling.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combinatorics::{invert_permutation, perm_action, LabelledShape, Sign};
use crate::error::{Error, Result};
use crate::matchcat::{scalar_block, swap_block, AlphaForm, Block, Pair};
use crate::scalars::ExactComplex;

/// Parameters of one nation: `alpha` for the top county, `beta` for the
/// bottom county when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NationParams {
    pub alpha: ExactComplex,
    pub beta: Option<ExactComplex>,
}

/// Parameters of an ordered pair of nations `s < t`.
///
/// The recipe needs only `p = μC` and `q = μ/C`; the `(μ, C)` form is the
/// usual presentation and the `(p, q)` form covers points where `√(pq)` is
/// not a Gaussian rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairParams {
    MuC { mu: ExactComplex, c: ExactComplex },
    Invariants { p: ExactComplex, q: ExactComplex },
}

impl PairParams {
    /// `(p, q) = (μC, μ/C)`.
    pub fn invariants(&self) -> Result<(ExactComplex, ExactComplex)> {
        match self {
            PairParams::MuC { mu, c } => Ok((mu * c, mu.checked_div(c)?)),
            PairParams::Invariants { p, q } => Ok((p.clone(), q.clone())),
        }
    }

    /// The same point seen from the reversed pair `(t, s)`: `C ↦ 1/C`, that
    /// is `p ↔ q`.
    pub fn reversed(&self) -> Result<Self> {
        Ok(match self {
            PairParams::MuC { mu, c } => PairParams::MuC { mu: mu.clone(), c: c.inv()? },
            PairParams::Invariants { p, q } => PairParams::Invariants { p: q.clone(), q: p.clone() },
        })
    }

    /// Recovers `(μ, C)` when `pq` has a Gaussian-rational square root,
    /// taking the root with `re > 0`, or `re = 0` and `im ≥ 0`.
    pub fn normalized(&self) -> Result<Self> {
        let (p, q) = self.invariants()?;
        Ok(match (&p * &q).sqrt() {
            Some(mu) if !mu.is_zero() => {
                let c = p.checked_div(&mu)?;
                PairParams::MuC { mu, c }
            }
            _ => PairParams::Invariants { p, q },
        })
    }
}

/// An entry of [`ParamPoint::pairs`], nation indices 1-based with `s < t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairEntry {
    pub s: usize,
    pub t: usize,
    pub params: PairParams,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairRepr {
    s: usize,
    t: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<ExactComplex>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<ExactComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<ExactComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<ExactComplex>,
}

impl Serialize for PairEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut repr = PairRepr { s: self.s, t: self.t, mu: None, c: None, p: None, q: None };
        match &self.params {
            PairParams::MuC { mu, c } => (repr.mu, repr.c) = (Some(mu.clone()), Some(c.clone())),
            PairParams::Invariants { p, q } => (repr.p, repr.q) = (Some(p.clone()), Some(q.clone())),
        }
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PairEntry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = PairRepr::deserialize(deserializer)?;
        let params = match (r.mu, r.c, r.p, r.q) {
            (Some(mu), Some(c), None, None) => PairParams::MuC { mu, c },
            (None, None, Some(p), Some(q)) => PairParams::Invariants { p, q },
            _ => return Err(serde::de::Error::custom("pair needs exactly one of {mu, C} or {p, q}")),
        };
        Ok(PairEntry { s: r.s, t: r.t, params })
    }
}

/// A point of the parameter space of a labelled shape. Nations are indexed
/// in the shape's standard order (plus nations first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamPoint {
    pub nations: Vec<NationParams>,
    pub pairs: Vec<PairEntry>,
}

impl ParamPoint {
    /// Parameters of the ordered nation pair `(s, t)`, 1-based, `s ≠ t`;
    /// reversed pairs are read through [`PairParams::reversed`].
    pub fn pair(&self, s: usize, t: usize) -> Result<PairParams> {
        let (lo, hi) = (s.min(t), s.max(t));
        let entry = self
            .pairs
            .iter()
            .find(|e| e.s == lo && e.t == hi)
            .ok_or_else(|| Error::ParamMismatch(format!("no parameters for nations ({lo}, {hi})")))?;
        if s < t {
            Ok(entry.params.clone())
        } else {
            entry.params.reversed()
        }
    }

    /// Checks the point against the nation structure of `lambda` and the
    /// nonvanishing constraints.
    pub fn validate(&self, lambda: &LabelledShape) -> Result<()> {
        let k = lambda.nation_count();
        if self.nations.len() != k {
            return Err(Error::ParamMismatch(format!("{} nations, {} parameter sets", k, self.nations.len())));
        }
        for (s, ((_, nation), np)) in lambda.nations().zip(&self.nations).enumerate() {
            let s = s + 1;
            if nation.bottom.is_empty() != np.beta.is_none() {
                return Err(Error::ParamMismatch(format!("nation {s}: beta must be present iff there is a bottom county")));
            }
            if np.alpha.is_zero() {
                return Err(Error::ConstraintViolated(format!("alpha_{s} = 0")));
            }
            if let Some(beta) = &np.beta {
                if beta.is_zero() {
                    return Err(Error::ConstraintViolated(format!("beta_{s} = 0")));
                }
                if (&np.alpha + beta).is_zero() {
                    return Err(Error::ConstraintViolated(format!("alpha_{s} + beta_{s} = 0")));
                }
            }
        }
        let mut expected: Vec<(usize, usize)> = (1..=k).flat_map(|s| (s + 1..=k).map(move |t| (s, t))).collect();
        let mut got: Vec<(usize, usize)> = self.pairs.iter().map(|e| (e.s, e.t)).collect();
        expected.sort_unstable();
        got.sort_unstable();
        if expected != got {
            return Err(Error::ParamMismatch("pairs must list each s < t exactly once".into()));
        }
        for e in &self.pairs {
            let bad = match &e.params {
                PairParams::MuC { mu, c } => mu.is_zero() || c.is_zero(),
                PairParams::Invariants { p, q } => p.is_zero() || q.is_zero(),
            };
            if bad {
                return Err(Error::ConstraintViolated(format!("pair ({}, {}) has a zero parameter", e.s, e.t)));
            }
        }
        Ok(())
    }
}

/// The recipe: builds `(S, R)` from a labelled shape and a parameter point.
///
/// * vertex: `a_i` is `α` on the top county and `β` on the bottom; `b_i` is
///   the nation sign on the top county and its negative on the bottom.
/// * different nations: `A = [[0, μ/C], [μC, 0]]` read for the nations of
///   `(i, j)` in that order, `B` the swap.
/// * same nation, different counties: `A = [[α+β, ±α], [∓β, 0]]` when `i`
///   is on top and the anti-transpose otherwise, `B` the swap.
/// * same county: `A` the county scalar, `B` the county's `b_i`.
pub fn make_recipe(lambda: &LabelledShape, x: &ParamPoint) -> Result<Pair> {
    x.validate(lambda)?;
    let res = lambda.residences();
    let n = lambda.rank();
    let sign_of = |s: usize| ExactComplex::from_int(lambda.nation(s).0.value());
    let county_value = |i: usize| {
        let np = &x.nations[res[i].nation];
        if res[i].top {
            np.alpha.clone()
        } else {
            np.beta.clone().expect("validated")
        }
    };
    let r_vertex: Vec<ExactComplex> = (1..=n).map(county_value).collect();
    let s_vertex: Vec<ExactComplex> = (1..=n)
        .map(|i| {
            let sg = sign_of(res[i].nation);
            if res[i].top {
                sg
            } else {
                -sg
            }
        })
        .collect();
    let mut r_edges: Vec<Block> = Vec::new();
    let mut s_edges: Vec<Block> = Vec::new();
    for j in 2..=n {
        for i in 1..j {
            let (ri, rj) = (res[i], res[j]);
            let (rb, sb) = if ri.nation != rj.nation {
                let (p, q) = x.pair(ri.nation + 1, rj.nation + 1)?.invariants()?;
                ([[ExactComplex::zero(), q], [p, ExactComplex::zero()]], swap_block())
            } else if ri.top != rj.top {
                let np = &x.nations[ri.nation];
                let sg = sign_of(ri.nation);
                let (alpha, beta) = (&np.alpha, np.beta.as_ref().expect("validated"));
                let sum = alpha + beta;
                let rb = if ri.top {
                    [[sum, &sg * alpha], [-(&sg * beta), ExactComplex::zero()]]
                } else {
                    [[ExactComplex::zero(), -(&sg * beta)], [&sg * alpha, sum]]
                };
                (rb, swap_block())
            } else {
                (scalar_block(county_value(i)), scalar_block(s_vertex[i - 1].clone()))
            };
            r_edges.push(rb);
            s_edges.push(sb);
        }
    }
    let mut r_it = r_edges.into_iter();
    let mut s_it = s_edges.into_iter();
    Pair::new(
        AlphaForm::from_fn(s_vertex, |_, _| s_it.next().expect("one block per edge")),
        AlphaForm::from_fn(r_vertex, |_, _| r_it.next().expect("one block per edge")),
    )
}

/// Transports `(λ, x)` along relabelling the individuals by `w`, keeping each
/// nation's parameters with the nation. A nation pair whose order flips reads
/// its parameters reversed.
pub fn permute_point(lambda: &LabelledShape, x: &ParamPoint, w: &[usize]) -> Result<(LabelledShape, ParamPoint)> {
    x.validate(lambda)?;
    let moved = perm_action(w, lambda)?;
    let new_res = moved.residences();
    // Old nation s goes to the nation of w(lowest resident of s).
    let new_index: Vec<usize> = lambda.nations().map(|(_, n)| new_res[w[n.lowest() - 1]].nation).collect();
    let old_of_new = invert_permutation(&new_index.iter().map(|&k| k + 1).collect::<Vec<_>>());
    let nations = old_of_new.iter().map(|&s| x.nations[s - 1].clone()).collect();
    let k = lambda.nation_count();
    let mut pairs = Vec::new();
    for s in 1..=k {
        for t in s + 1..=k {
            let params = x.pair(old_of_new[s - 1], old_of_new[t - 1])?;
            pairs.push(PairEntry { s, t, params });
        }
    }
    Ok((moved, ParamPoint { nations, pairs }))
}

/// A nonzero Gaussian integer with parts in `-5..=5`.
fn small_gaussian(rng: &mut ChaCha8Rng) -> ExactComplex {
    loop {
        let x = ExactComplex::gaussian(rng.gen_range(-5..=5), rng.gen_range(-5..=5));
        if !x.is_zero() {
            return x;
        }
    }
}

/// A deterministic random point for `lambda`.
pub fn random_point(lambda: &LabelledShape, seed: u64) -> ParamPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nations = lambda
        .nations()
        .map(|(_, nation)| {
            let alpha = small_gaussian(&mut rng);
            let beta = (!nation.bottom.is_empty()).then(|| loop {
                let b = small_gaussian(&mut rng);
                if !(&alpha + &b).is_zero() {
                    break b;
                }
            });
            NationParams { alpha, beta }
        })
        .collect();
    let k = lambda.nation_count();
    let mut pairs = Vec::new();
    for s in 1..=k {
        for t in s + 1..=k {
            let mu = small_gaussian(&mut rng);
            let c = small_gaussian(&mut rng);
            pairs.push(PairEntry { s, t, params: PairParams::MuC { mu, c } });
        }
    }
    ParamPoint { nations, pairs }
}

/// The six families of rank-2 braid solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum N2Family {
    F0 { alpha: ExactComplex },
    Fslash { alpha: ExactComplex, beta: ExactComplex, gamma: ExactComplex, chi: ExactComplex },
    Ff { alpha: ExactComplex, beta: ExactComplex, chi: ExactComplex },
    Fa { alpha: ExactComplex, beta: ExactComplex, chi: ExactComplex },
    Ffbar { alpha: ExactComplex, beta: ExactComplex, chi: ExactComplex },
    Fabar { alpha: ExactComplex, beta: ExactComplex, chi: ExactComplex },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum N2Tag {
    F0,
    Fslash,
    Ff,
    Fa,
    Ffbar,
    Fabar,
}

impl N2Family {
    pub fn tag(&self) -> N2Tag {
        match self {
            N2Family::F0 { .. } => N2Tag::F0,
            N2Family::Fslash { .. } => N2Tag::Fslash,
            N2Family::Ff { .. } => N2Tag::Ff,
            N2Family::Fa { .. } => N2Tag::Fa,
            N2Family::Ffbar { .. } => N2Tag::Ffbar,
            N2Family::Fabar { .. } => N2Tag::Fabar,
        }
    }
}

fn nonzero(x: &ExactComplex, what: &str) -> Result<()> {
    if x.is_zero() {
        return Err(Error::ConstraintViolated(format!("{what} = 0")));
    }
    Ok(())
}

/// The rank-2 braid solution of a family, in α-form.
pub fn n2_family(f: &N2Family) -> Result<AlphaForm> {
    let z = ExactComplex::zero;
    let two = |v1: &ExactComplex, v2: &ExactComplex, b: Block| AlphaForm::from_fn(vec![v1.clone(), v2.clone()], |_, _| b.clone());
    match f {
        N2Family::F0 { alpha } => {
            nonzero(alpha, "alpha")?;
            Ok(AlphaForm::scalar(2, alpha.clone()))
        }
        N2Family::Fslash { alpha, beta, gamma, chi } => {
            for (x, w) in [(alpha, "alpha"), (beta, "beta"), (gamma, "gamma"), (chi, "chi")] {
                nonzero(x, w)?;
            }
            Ok(two(alpha, beta, [[z(), gamma * chi], [gamma / chi, z()]]))
        }
        N2Family::Ff { alpha, beta, chi }
        | N2Family::Fa { alpha, beta, chi }
        | N2Family::Ffbar { alpha, beta, chi }
        | N2Family::Fabar { alpha, beta, chi } => {
            for (x, w) in [(alpha, "alpha"), (beta, "beta"), (chi, "chi")] {
                nonzero(x, w)?;
            }
            let sum = alpha + beta;
            nonzero(&sum, "alpha + beta")?;
            let f_type = matches!(f, N2Family::Ff { .. } | N2Family::Ffbar { .. });
            if f_type && alpha == beta {
                return Err(Error::ConstraintViolated("alpha = beta in an f family".into()));
            }
            let low = -(alpha * beta / chi.clone());
            let v2 = if f_type { alpha } else { beta };
            let b = match f.tag() {
                N2Tag::Ff | N2Tag::Fa => [[sum, chi.clone()], [low, z()]],
                _ => [[z(), chi.clone()], [low, sum]],
            };
            Ok(two(alpha, v2, b))
        }
    }
}

/// Which of the six families a rank-2 form belongs to.
pub fn n2_tag(r: &AlphaForm) -> Result<N2Tag> {
    if r.rank() != 2 {
        return Err(Error::InvalidRank(r.rank()));
    }
    let unclassifiable = Err(Error::Unclassifiable { i: 1, j: 2 });
    let (x1, x2) = (r.vertex(1), r.vertex(2));
    let [[a, b], [c, d]] = r.block(1, 2);
    if x1.is_zero() || x2.is_zero() {
        return Err(Error::NotInvertible);
    }
    if b.is_zero() && c.is_zero() {
        return if a == d && a == x1 && a == x2 { Ok(N2Tag::F0) } else { unclassifiable };
    }
    if b.is_zero() || c.is_zero() {
        return unclassifiable;
    }
    let diag = match (a.is_zero(), d.is_zero()) {
        (true, true) => return Ok(N2Tag::Fslash),
        (false, true) => a,
        (true, false) => d,
        (false, false) => return unclassifiable,
    };
    let top_first = !a.is_zero();
    let bc = b * c;
    if diag == &(x1 + x2) && bc == -(x1 * x2) {
        return Ok(if top_first { N2Tag::Fa } else { N2Tag::Fabar });
    }
    let beta = diag - x1;
    if x1 == x2 && &beta != x1 && !beta.is_zero() && bc == -(x1 * &beta) {
        return Ok(if top_first { N2Tag::Ff } else { N2Tag::Ffbar });
    }
    unclassifiable
}

/// The rank-2 loop braid solutions, one constructor per case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnofCase {
    /// `R` of type a with `S = diag(1, 1/c, c, −1)·P`.
    IA { a1: ExactComplex, a2: ExactComplex, c: ExactComplex },
    /// `R` of type ā with the same `S`.
    IAbar { a1: ExactComplex, a2: ExactComplex, c: ExactComplex },
    /// `S = ±1`, `R = α`.
    III { alpha: ExactComplex, sign: Sign },
    /// `S = ±diag(1, 1/c, c, ±1)·P`, `R` anti-diagonal on the edge.
    IV {
        a1: ExactComplex,
        a2: ExactComplex,
        big_c: ExactComplex,
        mu: ExactComplex,
        c: ExactComplex,
        inner: Sign,
        overall: Sign,
    },
}

fn monomial_s(v2: i64, c: &ExactComplex, overall: Sign) -> Result<AlphaForm> {
    let k = ExactComplex::from_int(overall.value());
    let blk = [[ExactComplex::zero(), &k * &c.inv()?], [&k * c, ExactComplex::zero()]];
    Ok(AlphaForm::from_fn(vec![k.clone(), &k * &ExactComplex::from_int(v2)], |_, _| blk.clone()))
}

pub fn anof_solution(case: &AnofCase) -> Result<Pair> {
    let z = ExactComplex::zero;
    match case {
        AnofCase::IA { a1, a2, c } | AnofCase::IAbar { a1, a2, c } => {
            for (x, w) in [(a1, "A1"), (a2, "A2"), (c, "c")] {
                nonzero(x, w)?;
            }
            let sum = a1 + a2;
            nonzero(&sum, "A1 + A2")?;
            let (b, lower) = (a1 / c, -(c * a2));
            let blk = if matches!(case, AnofCase::IA { .. }) {
                [[sum, b], [lower, z()]]
            } else {
                [[z(), b], [lower, sum]]
            };
            let r = AlphaForm::from_fn(vec![a1.clone(), a2.clone()], |_, _| blk.clone());
            Pair::new(monomial_s(-1, c, Sign::Plus)?, r)
        }
        AnofCase::III { alpha, sign } => {
            nonzero(alpha, "alpha")?;
            Pair::new(
                AlphaForm::scalar(2, ExactComplex::from_int(sign.value())),
                AlphaForm::scalar(2, alpha.clone()),
            )
        }
        AnofCase::IV { a1, a2, big_c, mu, c, inner, overall } => {
            for (x, w) in [(a1, "A1"), (a2, "A2"), (big_c, "C"), (mu, "mu"), (c, "c")] {
                nonzero(x, w)?;
            }
            let blk = [[z(), mu / &(big_c * c)], [mu * big_c * c.clone(), z()]];
            let r = AlphaForm::from_fn(vec![a1.clone(), a2.clone()], |_, _| blk.clone());
            Pair::new(monomial_s(inner.value(), c, *overall)?, r)
        }
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::combinatorics::{canonical_labelling, enum_signed};
    use crate::matchcat::Gauge;
    use proptest::prelude::*;

    /// A recipe solution at rank `n` on a random shape and point.
    pub fn arb_solution(n: usize) -> impl Strategy<Value = Pair> {
        let shapes = enum_signed(n);
        (0..shapes.len(), any::<u64>()).prop_map(move |(k, seed)| {
            let l = canonical_labelling(&shapes[k]);
            make_recipe(&l, &random_point(&l, seed)).unwrap()
        })
    }

    pub fn arb_gauge(n: usize) -> impl Strategy<Value = Gauge> {
        proptest::collection::vec((-4i64..=4, -4i64..=4), n * (n - 1) / 2).prop_map(move |v| {
            let mut g = Gauge::identity();
            let mut it = v.into_iter();
            for i in 1..=n {
                for j in i + 1..=n {
                    let (re, im) = it.next().unwrap();
                    let m = ExactComplex::gaussian(re, im);
                    g.set(i, j, if m.is_zero() { ExactComplex::from_int(3) } else { m });
                }
            }
            g
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{canonical_labelling, enum_labelled, enum_signed, Nation};
    use crate::matchcat::{alpha_to_dense, restrict};
    use crate::relations::{verify_pair, verify_pair_with, Method};
    use crate::Execution;
    use proptest::prelude::*;

    fn z(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    fn nation(t: &[usize], b: &[usize]) -> Nation {
        Nation::new(t.to_vec(), b.to_vec()).unwrap()
    }

    fn one_nation(plus: bool, t: &[usize], b: &[usize]) -> LabelledShape {
        if plus {
            LabelledShape::new(vec![nation(t, b)], vec![]).unwrap()
        } else {
            LabelledShape::new(vec![], vec![nation(t, b)]).unwrap()
        }
    }

    fn ab(alpha: i64, beta: Option<i64>) -> NationParams {
        NationParams { alpha: z(alpha), beta: beta.map(z) }
    }

    #[test]
    fn one_nation_with_bottom() {
        let l = one_nation(true, &[1, 2], &[3]);
        let x = ParamPoint { nations: vec![ab(2, Some(5))], pairs: vec![] };
        let pair = make_recipe(&l, &x).unwrap();
        assert_eq!(pair.r.vertices(), &[z(2), z(2), z(5)]);
        assert_eq!(pair.r.block(1, 2), &scalar_block(z(2)));
        assert_eq!(pair.r.block(1, 3), &[[z(7), z(2)], [z(-5), z(0)]]);
        assert_eq!(pair.r.block(2, 3), &[[z(7), z(2)], [z(-5), z(0)]]);
        assert_eq!(pair.s.vertices(), &[z(1), z(1), z(-1)]);
        assert_eq!(pair.s.block(1, 2), &scalar_block(z(1)));
        assert_eq!(pair.s.block(1, 3), &swap_block());
        assert_eq!(pair.s.block(2, 3), &swap_block());
    }

    #[test]
    fn minus_sign_example() {
        let l = one_nation(false, &[1, 2], &[3]);
        let x = ParamPoint { nations: vec![ab(2, Some(5))], pairs: vec![] };
        let pair = make_recipe(&l, &x).unwrap();
        assert_eq!(pair.s.vertices(), &[z(-1), z(-1), z(1)]);
        assert_eq!(pair.s.block(1, 2), &scalar_block(z(-1)));
        assert_eq!(pair.r.block(1, 3), &[[z(7), z(-2)], [z(5), z(0)]]);
        assert!(verify_pair(&pair.s, &pair.r, Method::Both).unwrap().all_hold());
    }

    #[test]
    fn two_nations_slash_edges() {
        let l = LabelledShape::new(vec![nation(&[1], &[2]), nation(&[3], &[])], vec![]).unwrap();
        let (mu, c) = (z(3), ExactComplex::ratio(1, 2));
        let x = ParamPoint {
            nations: vec![ab(7, None), ab(2, Some(5))],
            pairs: vec![PairEntry { s: 1, t: 2, params: PairParams::MuC { mu: mu.clone(), c: c.clone() } }],
        };
        let pair = make_recipe(&l, &x).unwrap();
        // Individual 3 forms nation 1, so (1, 3) runs from nation 2 to nation 1.
        let slash = [[z(0), &mu * &c], [&mu / &c, z(0)]];
        assert_eq!(pair.r.block(1, 3), &slash);
        assert_eq!(pair.r.block(2, 3), &slash);
        assert_eq!(pair.s.block(1, 3), &swap_block());
    }

    #[test]
    fn parameter_errors() {
        let l = one_nation(true, &[1], &[2]);
        let missing_beta = ParamPoint { nations: vec![ab(2, None)], pairs: vec![] };
        assert!(matches!(make_recipe(&l, &missing_beta), Err(Error::ParamMismatch(_))));
        let cancel = ParamPoint { nations: vec![ab(2, Some(-2))], pairs: vec![] };
        assert!(matches!(make_recipe(&l, &cancel), Err(Error::ConstraintViolated(_))));
        let zero = ParamPoint { nations: vec![ab(0, Some(1))], pairs: vec![] };
        assert!(matches!(make_recipe(&l, &zero), Err(Error::ConstraintViolated(_))));
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let labelled = enum_labelled(3).unwrap();
        for (k, l) in labelled.iter().enumerate() {
            assert_eq!(random_point(l, k as u64), random_point(l, k as u64));
        }
        let l = LabelledShape::new(vec![nation(&[1], &[2]), nation(&[3], &[4])], vec![nation(&[5], &[])]).unwrap();
        for seed in 0..1000 {
            random_point(&l, seed).validate(&l).unwrap();
        }
    }

    #[test]
    fn braid_families() {
        let (alpha, beta, gamma, chi) = (z(2), z(3), z(5), z(7));
        assert_eq!(n2_family(&N2Family::F0 { alpha: alpha.clone() }).unwrap(), AlphaForm::scalar(2, z(2)));
        let f = n2_family(&N2Family::Fslash { alpha: alpha.clone(), beta: beta.clone(), gamma: gamma.clone(), chi: chi.clone() }).unwrap();
        assert_eq!(f.block(1, 2), &[[z(0), z(35)], [ExactComplex::ratio(5, 7), z(0)]]);
        let f = n2_family(&N2Family::Fabar { alpha: alpha.clone(), beta: beta.clone(), chi: chi.clone() }).unwrap();
        assert_eq!(f.block(1, 2), &[[z(0), z(7)], [ExactComplex::ratio(-6, 7), z(5)]]);
        assert_eq!(f.vertices(), &[z(2), z(3)]);
        assert!(n2_family(&N2Family::Ff { alpha: z(2), beta: z(2), chi: z(1) }).is_err());
        assert!(n2_family(&N2Family::Fa { alpha: z(2), beta: z(-2), chi: z(1) }).is_err());
    }

    fn all_families(alpha: i64, beta: i64, chi: i64) -> Vec<N2Family> {
        let (alpha, beta, chi) = (z(alpha), z(beta), z(chi));
        vec![
            N2Family::F0 { alpha: alpha.clone() },
            N2Family::Fslash { alpha: alpha.clone(), beta: beta.clone(), gamma: z(3), chi: chi.clone() },
            N2Family::Ff { alpha: alpha.clone(), beta: beta.clone(), chi: chi.clone() },
            N2Family::Fa { alpha: alpha.clone(), beta: beta.clone(), chi: chi.clone() },
            N2Family::Ffbar { alpha: alpha.clone(), beta: beta.clone(), chi: chi.clone() },
            N2Family::Fabar { alpha, beta, chi },
        ]
    }

    #[test]
    fn families_braid_and_are_recognized() {
        for f in all_families(2, 3, 5) {
            let r = n2_family(&f).unwrap();
            assert_eq!(n2_tag(&r).unwrap(), f.tag());
            let rep = verify_pair(&AlphaForm::identity(2), &r, Method::Dense).unwrap();
            assert!(rep.rrr, "{:?}", f.tag());
        }
    }

    #[test]
    fn rank_two_solutions_verify() {
        let cases = vec![
            AnofCase::IA { a1: z(2), a2: z(3), c: z(1) },
            AnofCase::IA { a1: z(2), a2: z(3), c: ExactComplex::gaussian(1, 2) },
            AnofCase::IAbar { a1: z(2), a2: z(-5), c: z(4) },
            AnofCase::III { alpha: z(5), sign: Sign::Minus },
        ];
        let mut all = cases;
        for inner in [Sign::Plus, Sign::Minus] {
            for overall in [Sign::Plus, Sign::Minus] {
                all.push(AnofCase::IV { a1: z(2), a2: z(3), big_c: z(5), mu: z(7), c: z(-2), inner, overall });
            }
        }
        for case in all {
            let pair = anof_solution(&case).unwrap();
            let rep = verify_pair(&pair.s, &pair.r, Method::Both).unwrap();
            assert!(rep.all_hold(), "{case:?}: {rep:?}");
        }
    }

    #[test]
    fn product_forms() {
        let (a1, a2, big_c, mu) = (z(2), z(3), z(5), z(7));
        let pair = anof_solution(&AnofCase::IV {
            a1: a1.clone(),
            a2: a2.clone(),
            big_c: big_c.clone(),
            mu: mu.clone(),
            c: z(11),
            inner: Sign::Plus,
            overall: Sign::Plus,
        })
        .unwrap();
        let sr = alpha_to_dense(&pair.s).compose(&alpha_to_dense(&pair.r)).unwrap();
        let expect = crate::DenseMatrix::diagonal(vec![a1, &mu * &big_c, &mu / &big_c, a2]);
        assert_eq!(sr, expect);

        let c = z(3);
        let pair = anof_solution(&AnofCase::IA { a1: z(2), a2: z(5), c: c.clone() }).unwrap();
        let sr = alpha_to_dense(&pair.s).compose(&alpha_to_dense(&pair.r)).unwrap();
        assert_eq!(sr.get(0, 0), &z(2));
        assert_eq!(sr.get(1, 1), &z(-5));
        assert_eq!(sr.get(2, 1), &(&c * &z(7)));
        assert_eq!(sr.get(3, 3), &z(-5));
    }

    #[test]
    fn rank_two_recipe_is_gauge_one_member() {
        let l = one_nation(true, &[1], &[2]);
        let x = ParamPoint { nations: vec![ab(2, Some(3))], pairs: vec![] };
        let pair = make_recipe(&l, &x).unwrap();
        let anof = anof_solution(&AnofCase::IA { a1: z(2), a2: z(3), c: z(1) }).unwrap();
        assert_eq!(pair, anof);

        let l = LabelledShape::new(vec![nation(&[1], &[]), nation(&[2], &[])], vec![]).unwrap();
        let x = ParamPoint {
            nations: vec![ab(2, None), ab(3, None)],
            pairs: vec![PairEntry { s: 1, t: 2, params: PairParams::MuC { mu: z(7), c: z(5) } }],
        };
        let pair = make_recipe(&l, &x).unwrap();
        let anof = anof_solution(&AnofCase::IV {
            a1: z(2),
            a2: z(3),
            big_c: z(5),
            mu: z(7),
            c: z(1),
            inner: Sign::Plus,
            overall: Sign::Plus,
        })
        .unwrap();
        assert_eq!(pair, anof);
    }

    #[test]
    fn invariant_form_matches_mu_c_form() {
        let l = LabelledShape::new(vec![nation(&[1], &[]), nation(&[2], &[3])], vec![]).unwrap();
        let mu_c = PairParams::MuC { mu: z(6), c: z(2) };
        let (p, q) = mu_c.invariants().unwrap();
        assert_eq!((p.clone(), q.clone()), (z(12), z(3)));
        let x1 = ParamPoint { nations: vec![ab(2, None), ab(3, Some(4))], pairs: vec![PairEntry { s: 1, t: 2, params: mu_c.clone() }] };
        let x2 = ParamPoint { nations: x1.nations.clone(), pairs: vec![PairEntry { s: 1, t: 2, params: PairParams::Invariants { p, q } }] };
        assert_eq!(make_recipe(&l, &x1).unwrap(), make_recipe(&l, &x2).unwrap());
        assert_eq!(x2.pairs[0].params.normalized().unwrap(), mu_c);
        let odd = PairParams::Invariants { p: z(2), q: z(1) };
        assert_eq!(odd.normalized().unwrap(), odd);
    }

    #[test]
    fn param_json() {
        let x = ParamPoint {
            nations: vec![ab(2, None), ab(3, Some(4))],
            pairs: vec![PairEntry { s: 1, t: 2, params: PairParams::MuC { mu: z(6), c: z(2) } }],
        };
        let json = serde_json::to_string(&x).unwrap();
        assert!(json.contains(r#""beta":null"#) && json.contains(r#""C":{"re":"2","im":"0"}"#));
        assert_eq!(serde_json::from_str::<ParamPoint>(&json).unwrap(), x);
        let bad = json.replace(r#""mu""#, r#""p""#);
        assert!(serde_json::from_str::<ParamPoint>(&bad).is_err());
    }

    #[test]
    fn small_ranks_all_shapes() {
        for n in 1..=3 {
            for (k, shape) in enum_signed(n).iter().enumerate() {
                let l = canonical_labelling(shape);
                let pair = make_recipe(&l, &random_point(&l, k as u64)).unwrap();
                let rep = verify_pair_with(&pair, Method::Both, Execution::Sequential).unwrap();
                assert!(rep.all_hold(), "{shape:?}: {:?}", rep.failures.first());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn relabelling_is_equivariant((l, seed, w) in (2usize..=4).prop_flat_map(|n| {
            let all = enum_labelled(n).unwrap();
            (0..all.len(), any::<u64>(), Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
                .prop_map(move |(k, s, w)| (all[k].clone(), s, w))
        })) {
            let x = random_point(&l, seed);
            let pair = make_recipe(&l, &x).unwrap();
            let restricted = restrict(&pair, &w).unwrap();
            let (moved, x2) = permute_point(&l, &x, &invert_permutation(&w)).unwrap();
            let rebuilt = make_recipe(&moved, &x2).unwrap();
            prop_assert!(crate::classifier::x_equivalent(&restricted, &rebuilt).unwrap().is_some());
        }
    }
}

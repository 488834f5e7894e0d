//! The inverse of the recipe: read a verified pair `(S, R)` back into a
//! labelled shape, a parameter point and a gauge, decide gauge equivalence,
//! and bring a pair to canonical form under relabelling and gauge.

use serde::{Serialize, Serializer};

use crate::combinatorics::{
    canonical_labelling, invert_permutation, shape_of, LabelledShape, Nation, Sign, SignedShape,
};
use crate::error::{Error, Result};
use crate::matchcat::{gauge_pair, restrict, AlphaForm, Gauge, Pair};
use crate::recipe::{make_recipe, NationParams, PairEntry, PairParams, ParamPoint};
use crate::relations::{verify_pair_with, Method};
use crate::scalars::ExactComplex;
use crate::Execution;

/// Type of the restriction of a verified pair to one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeType {
    /// Both blocks scalar: same county.
    Zero,
    /// `R` anti-diagonal: different nations.
    Slash,
    /// `R = [[α+β, ·], [·, 0]]`: same nation, smaller index on top.
    ATopFirst,
    /// `R = [[0, ·], [·, α+β]]`: same nation, larger index on top.
    ATopSecond,
}

fn edge_type_of(s: &AlphaForm, r: &AlphaForm, i: usize, j: usize) -> Result<EdgeType> {
    let unclassifiable = Err(Error::Unclassifiable { i, j });
    let (xi, xj) = (r.vertex(i), r.vertex(j));
    let [[a, b], [c, d]] = r.block(i, j);
    let [[sa, sb], [sc, sd]] = s.block(i, j);
    let s_scalar = sb.is_zero() && sc.is_zero() && sa == sd;
    let s_anti = sa.is_zero() && sd.is_zero() && (sb * sc).is_one();
    if b.is_zero() && c.is_zero() {
        return if a == d && a == xi && a == xj && s_scalar { Ok(EdgeType::Zero) } else { unclassifiable };
    }
    if b.is_zero() || c.is_zero() || !s_anti {
        return unclassifiable;
    }
    let (diag, kind) = match (a.is_zero(), d.is_zero()) {
        (true, true) => return Ok(EdgeType::Slash),
        (false, true) => (a, EdgeType::ATopFirst),
        (true, false) => (d, EdgeType::ATopSecond),
        (false, false) => return unclassifiable,
    };
    if diag == &(xi + xj) {
        Ok(kind)
    } else if xi == xj {
        Err(Error::FTypeDetected { i, j })
    } else {
        unclassifiable
    }
}

/// Edge type of a rank-2 pair.
pub fn edge_type(pair: &Pair) -> Result<EdgeType> {
    if pair.rank() != 2 {
        return Err(Error::InvalidRank(pair.rank()));
    }
    edge_type_of(&pair.s, &pair.r, 1, 2)
}

/// The data read off a verified pair.
///
/// `make_recipe(labelled, params)` gauged by `gauge` equals the input; `perm`
/// (new → old) relabels the input so that its labelled shape becomes the
/// canonical labelling of `shape`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub shape: SignedShape,
    pub labelled: LabelledShape,
    pub params: ParamPoint,
    pub gauge: Gauge,
    pub perm: Vec<usize>,
}

impl Classification {
    pub fn signs(&self) -> Vec<Sign> {
        self.labelled.nations().map(|(s, _)| s).collect()
    }
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct PairOut {
            s: usize,
            t: usize,
            p: ExactComplex,
            q: ExactComplex,
            mu: Option<ExactComplex>,
            #[serde(rename = "C")]
            c: Option<ExactComplex>,
        }
        #[derive(Serialize)]
        struct ParamsOut<'a> {
            nations: &'a [NationParams],
            pairs: Vec<PairOut>,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            shape: &'a SignedShape,
            labelled: &'a LabelledShape,
            sign: Vec<Sign>,
            params: ParamsOut<'a>,
            gauge: &'a Gauge,
            perm: &'a [usize],
        }
        let pairs = self
            .params
            .pairs
            .iter()
            .map(|e| {
                let (p, q) = e.params.invariants().map_err(serde::ser::Error::custom)?;
                let (mu, c) = match &e.params {
                    PairParams::MuC { mu, c } => (Some(mu.clone()), Some(c.clone())),
                    PairParams::Invariants { .. } => (None, None),
                };
                Ok(PairOut { s: e.s, t: e.t, p, q, mu, c })
            })
            .collect::<std::result::Result<Vec<_>, S::Error>>()?;
        Out {
            shape: &self.shape,
            labelled: &self.labelled,
            sign: self.signs(),
            params: ParamsOut { nations: &self.params.nations, pairs },
            gauge: &self.gauge,
            perm: &self.perm,
        }
        .serialize(serializer)
    }
}

fn inconsistent<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InconsistentParameters(msg.into()))
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut y = x;
    while parent[y] != root {
        let next = parent[y];
        parent[y] = root;
        y = next;
    }
    root
}

/// Reads the labelled shape, parameters and gauge of a verified pair.
pub fn interrogate(pair: &Pair) -> Result<Classification> {
    interrogate_with(pair, Execution::default())
}

pub fn interrogate_with(pair: &Pair, exec: Execution) -> Result<Classification> {
    let report = verify_pair_with(pair, Method::Subsets, exec)?;
    if !report.all_hold() {
        return Err(Error::NotARepresentation);
    }
    let (s, r) = (&pair.s, &pair.r);
    let n = pair.rank();
    let mut types = std::collections::HashMap::new();
    for (i, j) in r.edge_list() {
        types.insert((i, j), edge_type_of(s, r, i, j)?);
    }

    // Nations are the components joined by same-nation edges.
    let mut parent: Vec<usize> = (0..=n).collect();
    for (&(i, j), t) in &types {
        if *t != EdgeType::Slash {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    let mut members: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 1..=n {
        let root = find(&mut parent, i);
        members.entry(root).or_default().push(i);
    }

    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for people in members.values() {
        // County of each resident relative to the lowest one, then orient.
        let first = people[0];
        let mut first_top = true;
        let mut same = std::collections::BTreeMap::new();
        for &k in people {
            let with_first = if k == first {
                true
            } else {
                match types[&(first, k)] {
                    EdgeType::Zero => true,
                    EdgeType::ATopFirst => false,
                    EdgeType::ATopSecond => {
                        first_top = false;
                        false
                    }
                    EdgeType::Slash => return inconsistent("nation not a clique"),
                }
            };
            same.insert(k, with_first);
        }
        let top_of: std::collections::BTreeMap<usize, bool> =
            same.into_iter().map(|(k, w)| (k, w == first_top)).collect();
        // Every pair inside the nation must agree with the county split.
        for (x, &i) in people.iter().enumerate() {
            for &j in &people[x + 1..] {
                let expected = match (top_of[&i], top_of[&j]) {
                    (a, b) if a == b => EdgeType::Zero,
                    (true, false) => EdgeType::ATopFirst,
                    _ => EdgeType::ATopSecond,
                };
                if types[&(i, j)] != expected {
                    return inconsistent(format!("edge ({i}, {j}) contradicts the county split"));
                }
            }
        }
        let top: Vec<usize> = people.iter().copied().filter(|k| top_of[k]).collect();
        let bottom: Vec<usize> = people.iter().copied().filter(|k| !top_of[k]).collect();
        let lead = s.vertex(top[0]);
        let sign = if lead.is_one() {
            Sign::Plus
        } else if *lead == ExactComplex::from_int(-1) {
            Sign::Minus
        } else {
            return inconsistent(format!("S vertex at {} is not ±1", top[0]));
        };
        let sg = ExactComplex::from_int(sign.value());
        if top.iter().any(|&k| s.vertex(k) != &sg) || bottom.iter().any(|&k| s.vertex(k) != &-&sg) {
            return inconsistent("nation sign not constant on counties");
        }
        let nation = Nation::new(top, bottom)?;
        match sign {
            Sign::Plus => plus.push(nation),
            Sign::Minus => minus.push(nation),
        }
    }
    let labelled = LabelledShape::new(plus, minus)?;
    let res = labelled.residences();

    // Off-diagonal entries of S are gauged to 1 in the recipe.
    let mut gauge = Gauge::identity();
    for (&(i, j), t) in &types {
        if *t != EdgeType::Zero {
            gauge.set(i, j, s.block(i, j)[0][1].clone());
        }
    }
    let plain = gauge_pair(pair, &gauge.inverse()?)?;

    let mut nations = Vec::new();
    for (_, nation) in labelled.nations() {
        let alpha = plain.r.vertex(nation.top[0]).clone();
        let beta = nation.bottom.first().map(|&b| plain.r.vertex(b).clone());
        if nation.top.iter().any(|&k| plain.r.vertex(k) != &alpha)
            || nation.bottom.iter().any(|&k| Some(plain.r.vertex(k)) != beta.as_ref())
        {
            return inconsistent("vertex scalars not constant on a county");
        }
        nations.push(NationParams { alpha, beta });
    }
    let k = labelled.nation_count();
    let mut pairs = Vec::new();
    for s_idx in 0..k {
        for t_idx in s_idx + 1..k {
            let i = labelled.nation(s_idx).1.lowest();
            let j = labelled.nation(t_idx).1.lowest();
            debug_assert!(res[i].nation == s_idx && res[j].nation == t_idx);
            let [[_, q], [p, _]] = plain.r.oriented_block(i, j);
            let params = PairParams::Invariants { p, q }.normalized()?;
            pairs.push(PairEntry { s: s_idx + 1, t: t_idx + 1, params });
        }
    }
    let params = ParamPoint { nations, pairs };
    let rebuilt = make_recipe(&labelled, &params).map_err(|e| Error::InconsistentParameters(e.to_string()))?;
    if gauge_pair(&rebuilt, &gauge)? != *pair {
        return inconsistent("recipe at the recovered point does not reproduce the input");
    }

    let shape = shape_of(&labelled);
    let perm = aligning_perm(&labelled, &canonical_labelling(&shape));
    Ok(Classification { shape, labelled, params, gauge, perm })
}

/// `ψ` (new → old) with `perm_action(ψ⁻¹, from) = to`, matching nations in
/// standard order and residents in ascending order.
fn aligning_perm(from: &LabelledShape, to: &LabelledShape) -> Vec<usize> {
    let mut psi = vec![0; from.rank()];
    for ((_, a), (_, b)) in from.nations().zip(to.nations()) {
        for (&old, &new) in a.top.iter().zip(&b.top).chain(a.bottom.iter().zip(&b.bottom)) {
            psi[new - 1] = old;
        }
    }
    psi
}

/// A gauge `m` with `gauge_transform(a, m) = b` for both members, if any.
pub fn x_equivalent(a: &Pair, b: &Pair) -> Result<Option<Gauge>> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch(a.rank(), b.rank()));
    }
    let mut gauge = Gauge::identity();
    for (i, j) in a.s.edge_list() {
        let mut m = None;
        for (fa, fb) in [(&a.s, &b.s), (&a.r, &b.r)] {
            let ([[_, ab], [ac, _]], [[_, bb], [bc, _]]) = (fa.block(i, j), fb.block(i, j));
            if !ab.is_zero() {
                m = Some(bb / ab);
            } else if !ac.is_zero() && !bc.is_zero() {
                m = Some(ac / bc);
            }
            if m.is_some() {
                break;
            }
        }
        match m {
            Some(x) if x.is_zero() => return Ok(None),
            Some(x) => gauge.set(i, j, x),
            None => {}
        }
    }
    Ok((gauge_pair(a, &gauge)? == *b).then_some(gauge))
}

/// Canonical form of a verified pair under relabelling and gauge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub shape: SignedShape,
    /// New → old: restrict the input along this map first.
    pub perm: Vec<usize>,
    /// Then gauge the restricted pair by this to reach the recipe.
    pub gauge: Gauge,
    pub params: ParamPoint,
}

impl Canonical {
    pub fn labelled(&self) -> LabelledShape {
        canonical_labelling(&self.shape)
    }

    /// `make_recipe` at the canonical labelling and recovered parameters.
    pub fn recipe(&self) -> Result<Pair> {
        make_recipe(&self.labelled(), &self.params)
    }
}

pub fn canonicalize(pair: &Pair) -> Result<Canonical> {
    let first = interrogate(pair)?;
    let moved = restrict(pair, &first.perm)?;
    let second = interrogate(&moved)?;
    if second.labelled != canonical_labelling(&first.shape) {
        return inconsistent("relabelled pair is not canonically labelled");
    }
    debug_assert_eq!(invert_permutation(&invert_permutation(&first.perm)), first.perm);
    Ok(Canonical {
        shape: first.shape,
        perm: first.perm,
        gauge: second.gauge.inverse()?,
        params: second.params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{enum_labelled, enum_signed, Multiset};
    use crate::matchcat::gauge_transform;
    use crate::recipe::{random_point, testing::arb_gauge};
    use proptest::prelude::*;

    fn z(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    fn nation(t: &[usize], b: &[usize]) -> Nation {
        Nation::new(t.to_vec(), b.to_vec()).unwrap()
    }

    fn recipe_at(l: &LabelledShape, seed: u64) -> Pair {
        make_recipe(l, &random_point(l, seed)).unwrap()
    }

    #[test]
    fn edge_types_of_one_nation() {
        let l = LabelledShape::new(vec![nation(&[1, 2], &[3])], vec![]).unwrap();
        let pair = recipe_at(&l, 1);
        assert_eq!(edge_type(&restrict(&pair, &[1, 2]).unwrap()).unwrap(), EdgeType::Zero);
        assert_eq!(edge_type(&restrict(&pair, &[1, 3]).unwrap()).unwrap(), EdgeType::ATopFirst);
        let l = LabelledShape::new(vec![nation(&[1, 3], &[2])], vec![]).unwrap();
        let pair = recipe_at(&l, 2);
        assert_eq!(edge_type(&restrict(&pair, &[2, 3]).unwrap()).unwrap(), EdgeType::ATopSecond);
        let l = LabelledShape::new(vec![nation(&[1], &[2]), nation(&[3], &[])], vec![]).unwrap();
        let pair = recipe_at(&l, 3);
        assert_eq!(edge_type(&restrict(&pair, &[1, 3]).unwrap()).unwrap(), EdgeType::Slash);
    }

    #[test]
    fn f_type_is_rejected() {
        let r = crate::recipe::n2_family(&crate::recipe::N2Family::Ff { alpha: z(2), beta: z(3), chi: z(1) }).unwrap();
        let s = AlphaForm::from_fn(vec![z(1), z(-1)], |_, _| crate::matchcat::swap_block());
        assert_eq!(edge_type(&Pair::new(s, r).unwrap()), Err(Error::FTypeDetected { i: 1, j: 2 }));
    }

    #[test]
    fn scalar_pairs() {
        let pair = Pair::new(AlphaForm::identity(2), AlphaForm::scalar(2, z(5))).unwrap();
        let c = interrogate(&pair).unwrap();
        assert_eq!(c.labelled, LabelledShape::new(vec![nation(&[1, 2], &[])], vec![]).unwrap());
        assert_eq!(c.params.nations[0].alpha, z(5));
        assert!(c.gauge.is_identity());

        let pair = Pair::new(AlphaForm::scalar(2, z(-1)), AlphaForm::scalar(2, z(5))).unwrap();
        let canon = canonicalize(&pair).unwrap();
        let two = crate::Composition2::new(2, 0).unwrap();
        assert_eq!(canon.shape, SignedShape::new(Multiset::empty(), Multiset::from_list([two])));
    }

    #[test]
    fn non_representation_rejected() {
        let pair = Pair::new(AlphaForm::scalar(2, z(2)), AlphaForm::identity(2)).unwrap();
        assert_eq!(interrogate(&pair), Err(Error::NotARepresentation));
    }

    #[test]
    fn recovers_recipe_input() {
        for n in 1..=4 {
            for l in enum_labelled(n).unwrap() {
                let x = random_point(&l, 7);
                let pair = make_recipe(&l, &x).unwrap();
                let c = interrogate(&pair).unwrap();
                assert_eq!(c.labelled, l);
                assert!(c.gauge.is_identity());
                assert_eq!(c.params.nations, x.nations);
                for (got, want) in c.params.pairs.iter().zip(&x.pairs) {
                    assert_eq!(got.params.invariants().unwrap(), want.params.invariants().unwrap());
                }
            }
        }
    }

    #[test]
    fn gauge_is_recorded() {
        let l = LabelledShape::new(vec![nation(&[1], &[2])], vec![nation(&[3], &[])]).unwrap();
        let pair = recipe_at(&l, 4);
        let mut m = Gauge::identity();
        m.set(1, 3, z(3));
        let gauged = gauge_pair(&pair, &m).unwrap();
        let a = interrogate(&pair).unwrap();
        let b = interrogate(&gauged).unwrap();
        assert_eq!(a.labelled, b.labelled);
        assert_eq!(a.params, b.params);
        assert_eq!(b.gauge.get(1, 3), z(3));
    }

    #[test]
    fn equivalence_examples() {
        let l = LabelledShape::new(vec![nation(&[1, 2], &[3])], vec![]).unwrap();
        let pair = recipe_at(&l, 5);
        assert_eq!(x_equivalent(&pair, &pair).unwrap(), Some(Gauge::identity()));
        let mut m = Gauge::identity();
        m.set(1, 3, z(7));
        let gauged = gauge_pair(&pair, &m).unwrap();
        assert_eq!(x_equivalent(&pair, &gauged).unwrap().unwrap().get(1, 3), z(7));

        // Same vertex data, but the (2, 3) block diagonals sit in different slots.
        let l2 = LabelledShape::new(vec![nation(&[1, 3], &[2])], vec![]).unwrap();
        let x = random_point(&l2, 0);
        let a = make_recipe(&l2, &x).unwrap();
        let mut b = a.clone();
        *b.r.block_mut(2, 3) = crate::matchcat::antitranspose(a.r.block(2, 3));
        assert_eq!(x_equivalent(&a, &b).unwrap(), None);
        assert!(x_equivalent(&a, &Pair::new(AlphaForm::identity(2), AlphaForm::identity(2)).unwrap()).is_err());
    }

    #[test]
    fn swap_exchanges_a_orientations() {
        let l = LabelledShape::new(vec![nation(&[1], &[2])], vec![]).unwrap();
        let pair = recipe_at(&l, 6);
        assert_eq!(edge_type(&pair).unwrap(), EdgeType::ATopFirst);
        assert_eq!(edge_type(&restrict(&pair, &[2, 1]).unwrap()).unwrap(), EdgeType::ATopSecond);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn canonical_round_trip((shape, seed, w, m) in (1usize..=4).prop_flat_map(|n| {
            let all = enum_signed(n);
            (
                (0..all.len()).prop_map(move |k| all[k].clone()),
                any::<u64>(),
                Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
                arb_gauge(n),
            )
        })) {
            let l = canonical_labelling(&shape);
            let pair = make_recipe(&l, &random_point(&l, seed)).unwrap();
            let input = gauge_pair(&restrict(&pair, &w).unwrap(), &m).unwrap();
            let canon = canonicalize(&input).unwrap();
            prop_assert_eq!(&canon.shape, &shape);
            let moved = restrict(&input, &canon.perm).unwrap();
            prop_assert_eq!(gauge_pair(&moved, &canon.gauge).unwrap(), canon.recipe().unwrap());
            prop_assert!(x_equivalent(&moved, &canon.recipe().unwrap()).unwrap().is_some());
        }

        #[test]
        fn edge_types_equivariant((shape, seed) in (2usize..=4).prop_flat_map(|n| {
            let all = enum_signed(n);
            ((0..all.len()).prop_map(move |k| all[k].clone()), any::<u64>())
        })) {
            let l = canonical_labelling(&shape);
            let pair = recipe_at(&l, seed);
            for (i, j) in pair.r.edge_list() {
                let t = edge_type(&restrict(&pair, &[i, j]).unwrap()).unwrap();
                let flipped = edge_type(&restrict(&pair, &[j, i]).unwrap()).unwrap();
                let expect = match t {
                    EdgeType::ATopFirst => EdgeType::ATopSecond,
                    EdgeType::ATopSecond => EdgeType::ATopFirst,
                    other => other,
                };
                prop_assert_eq!(flipped, expect);
            }
        }

        #[test]
        fn products_are_invariant((shape, seed, m) in (2usize..=4).prop_flat_map(|n| {
            let all = enum_signed(n);
            ((0..all.len()).prop_map(move |k| all[k].clone()), any::<u64>(), arb_gauge(n))
        })) {
            let l = canonical_labelling(&shape);
            let pair = recipe_at(&l, seed);
            let gauged = gauge_transform(&pair.r, &m).unwrap();
            let a = interrogate(&pair).unwrap();
            for e in &a.params.pairs {
                let (p, q) = e.params.invariants().unwrap();
                let i = a.labelled.nation(e.s - 1).1.lowest();
                let j = a.labelled.nation(e.t - 1).1.lowest();
                let [[_, b], [c, _]] = gauged.oriented_block(i, j);
                prop_assert_eq!(&p * &q, b * c);
            }
        }
    }
}

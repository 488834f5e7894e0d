//! Relation checks for a candidate pair `(S, R)`.
//!
//! Each mixed braid-type relation is the vanishing of a width-3 anomaly
//! `z₁Z₂ζ₁ − ζ₂Z₁z₂` where `X₁ = X ⊗ 1` and `X₂ = 1 ⊗ X`:
//!
//! | relation | `(z, Z, ζ)` | reads            |
//! |----------|-------------|------------------|
//! | `rrr`    | `(R, R, R)` | `σ₁σ₂σ₁ = σ₂σ₁σ₂` |
//! | `sss`    | `(S, S, S)` | `s₁s₂s₁ = s₂s₁s₂` |
//! | `rrs`    | `(R, R, S)` | `σ₁σ₂s₁ = s₂σ₁σ₂` |
//! | `rss`    | `(R, S, S)` | `σ₁s₂s₁ = s₂s₁σ₂` |
//! | `srr`    | `(S, R, R)` | `s₁σ₂σ₁ = σ₂σ₁s₂` (not imposed) |
//!
//! together with `s² = 1`. Two verifiers are provided: a dense one that
//! builds the anomalies outright, and a subset one that checks every pair of
//! letters at rank 2 and every triple of distinct letters through closed-form
//! cubic residuals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{par_map, Execution};
use crate::matchcat::{
    alpha_to_dense, block_mul, restrict, scalar_block, shift_embed, word_of, AlphaForm,
    Block, DenseMatrix, Pair,
};
use crate::recipe::{n2_tag, N2Tag};
use crate::scalars::ExactComplex;
use num_traits::{One, Zero};

/// At most this many failures are listed per relation in a report.
pub const MAX_FAILURES_PER_RELATION: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Rrr,
    Sss,
    Rrs,
    Rss,
    Srr,
}

impl Relation {
    pub const ALL: [Relation; 5] = [Relation::Rrr, Relation::Sss, Relation::Rrs, Relation::Rss, Relation::Srr];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Rrr => "rrr",
            Relation::Sss => "sss",
            Relation::Rrs => "rrs",
            Relation::Rss => "rss",
            Relation::Srr => "srr",
        }
    }

    /// The `(z, Z, ζ)` triple of the anomaly.
    pub fn operands(self, pair: &Pair) -> (&AlphaForm, &AlphaForm, &AlphaForm) {
        let (s, r) = (&pair.s, &pair.r);
        match self {
            Relation::Rrr => (r, r, r),
            Relation::Sss => (s, s, s),
            Relation::Rrs => (r, r, s),
            Relation::Rss => (r, s, s),
            Relation::Srr => (s, r, r),
        }
    }
}

/// `z₁Z₂ζ₁ − ζ₂Z₁z₂` at width 3.
pub fn anomaly(z: &DenseMatrix, big_z: &DenseMatrix, zeta: &DenseMatrix, n: usize) -> Result<DenseMatrix> {
    anomaly_with(z, big_z, zeta, n, Execution::Sequential)
}

pub fn anomaly_with(
    z: &DenseMatrix,
    big_z: &DenseMatrix,
    zeta: &DenseMatrix,
    n: usize,
    exec: Execution,
) -> Result<DenseMatrix> {
    let z1 = shift_embed(z, 1, n)?;
    let z2 = shift_embed(z, 2, n)?;
    let big_z1 = shift_embed(big_z, 1, n)?;
    let big_z2 = shift_embed(big_z, 2, n)?;
    let zeta1 = shift_embed(zeta, 1, n)?;
    let zeta2 = shift_embed(zeta, 2, n)?;
    let left = z1.compose_with(&big_z2, exec)?.compose_with(&zeta1, exec)?;
    let right = zeta2.compose_with(&big_z1, exec)?.compose_with(&z2, exec)?;
    left.sub(&right)
}

/// One named cubic equation evaluated at a concrete choice of letters: the
/// anomaly entry `⟨output|A|input⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub name: &'static str,
    pub output: [usize; 3],
    pub input: [usize; 3],
    pub value: ExactComplex,
}

/// The cubic residuals at an ordered triple of distinct letters `(i, j, k)`.
///
/// `distinct` holds the five nontrivial equations with input `|ijk⟩`;
/// `repeated` holds the equations on words in the letters `i, j` with a
/// repeated letter: the `|112⟩, |121⟩, |211⟩` family at `(i, j)` and its
/// transpose, the `|221⟩, |212⟩, |122⟩` family, obtained by evaluating the
/// same formulas at `(j, i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleResiduals {
    pub triple: [usize; 3],
    pub distinct: Vec<Residual>,
    pub repeated: Vec<Residual>,
}

impl TripleResiduals {
    pub fn all(&self) -> impl Iterator<Item = &Residual> {
        self.distinct.iter().chain(self.repeated.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.all().all(|r| r.value.is_zero())
    }
}

/// Entries of an α-form as seen from ordered letters.
struct View<'a>(&'a AlphaForm);

impl View<'_> {
    fn v(&self, p: usize) -> ExactComplex {
        self.0.vertex(p).clone()
    }
    fn blk(&self, p: usize, q: usize) -> Block {
        self.0.oriented_block(p, q)
    }
}

fn distinct_residuals(z: &AlphaForm, big_z: &AlphaForm, zeta: &AlphaForm, t: [usize; 3]) -> Vec<Residual> {
    let [l1, l2, l3] = t;
    let (z, big_z, zeta) = (View(z), View(big_z), View(zeta));
    let [[a12, b12], [c12, d12]] = z.blk(l1, l2);
    let [[_, b13], [_, d13]] = z.blk(l1, l3);
    let [[_, b23], [_, d23]] = z.blk(l2, l3);
    let [[_, zb12], [_, zd12]] = big_z.blk(l1, l2);
    let [[_, zb13], [_, zd13]] = big_z.blk(l1, l3);
    let [[_, zb23], [_, zd23]] = big_z.blk(l2, l3);
    let [[_, be12], [_, de12]] = zeta.blk(l1, l2);
    let [[_, be13], [_, de13]] = zeta.blk(l1, l3);
    let [[al23, be23], [ga23, de23]] = zeta.blk(l2, l3);
    let res = |name, out: [usize; 3], value| Residual {
        name,
        output: out.map(|x| t[x - 1]),
        input: t,
        value,
    };
    vec![
        res(
            "rel1",
            [1, 2, 3],
            &be12 * &zd13 * &c12 + &de12 * &zd23 * &d12 - &b23 * &zd13 * &ga23 - &d23 * &zd12 * &de23,
        ),
        res("rel2", [2, 1, 3], &be12 * &zd13 * &a12 + &de12 * &zd23 * &b12 - &d23 * &zb12 * &de13),
        res("rel3", [1, 3, 2], &de12 * &zb23 * &d13 - &b23 * &zd13 * &al23 - &d23 * &zd12 * &be23),
        res("rel4", [2, 3, 1], &be12 * &zb13 * &d23 - &d23 * &zb12 * &be13),
        res("rel5", [3, 1, 2], &de12 * &zb23 * &b13 - &b23 * &zb13 * &de12),
    ]
}

const TRANSPOSED_NAMES: [&str; 7] =
    ["w221_1", "w221_2", "w212_1", "w212_2", "w212_3", "w122_1", "w122_2"];
const DIRECT_NAMES: [&str; 7] =
    ["w112_1", "w112_2", "w121_1", "w121_2", "w121_3", "w211_1", "w211_2"];

/// The seven nontrivial equations on words in `p, q` with `p` repeated.
fn repeated_residuals(
    z: &AlphaForm,
    big_z: &AlphaForm,
    zeta: &AlphaForm,
    p: usize,
    q: usize,
    names: &[&'static str; 7],
) -> Vec<Residual> {
    let (z, big_z, zeta) = (View(z), View(big_z), View(zeta));
    let (a11, za11, al11) = (z.v(p), big_z.v(p), zeta.v(p));
    let [[a12, b12], [c12, d12]] = z.blk(p, q);
    let [[za12, zb12], [zc12, zd12]] = big_z.blk(p, q);
    let [[al12, be12], [ga12, de12]] = zeta.blk(p, q);
    let w = |x: [u8; 3]| x.map(|l| if l == 1 { p } else { q });
    let res = |k: usize, out: [u8; 3], inp: [u8; 3], value| Residual { name: names[k], output: w(out), input: w(inp), value };
    vec![
        res(0, [1, 1, 2], [1, 1, 2], &al11 * &zd12 * &a11 - &d12 * &za11 * &de12 - &b12 * &zd12 * &ga12),
        res(1, [1, 2, 1], [1, 1, 2], &al11 * &zb12 * &d12 - &d12 * &za11 * &be12 - &b12 * &zd12 * &al12),
        res(2, [1, 1, 2], [1, 2, 1], &zc12 * &a11 * &de12 - &za11 * &c12 * &de12 - &zd12 * &a12 * &ga12),
        res(3, [1, 2, 1], [1, 2, 1], &za12 * &d12 * &de12 - &zd12 * &a12 * &al12),
        res(4, [2, 1, 1], [1, 2, 1], &za11 * &a12 * &be12 + &za12 * &b12 * &de12 - &zb12 * &a12 * &al11),
        res(5, [1, 2, 1], [2, 1, 1], &za11 * &al12 * &c12 + &za12 * &d12 * &ga12 - &zc12 * &a11 * &al12),
        res(6, [2, 1, 1], [2, 1, 1], &za11 * &a12 * &al12 - &za12 * &a11 * &al11 + &za12 * &b12 * &ga12),
    ]
}

/// Evaluates the named cubic equations at the ordered triple `(i, j, k)`.
pub fn cubic_residuals(
    z: &AlphaForm,
    big_z: &AlphaForm,
    zeta: &AlphaForm,
    triple: (usize, usize, usize),
) -> Result<TripleResiduals> {
    let n = z.rank();
    if big_z.rank() != n || zeta.rank() != n {
        return Err(Error::RankMismatch(n, if big_z.rank() != n { big_z.rank() } else { zeta.rank() }));
    }
    let t = [triple.0, triple.1, triple.2];
    for &x in &t {
        if x == 0 || x > n {
            return Err(Error::IndexOutOfRange { index: x, n });
        }
    }
    if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
        return Err(Error::NotInjective);
    }
    let mut repeated = repeated_residuals(z, big_z, zeta, t[0], t[1], &DIRECT_NAMES);
    repeated.extend(repeated_residuals(z, big_z, zeta, t[1], t[0], &TRANSPOSED_NAMES));
    Ok(TripleResiduals { triple: t, distinct: distinct_residuals(z, big_z, zeta, t), repeated })
}

/// How [`verify_pair`] checks the width-3 relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dense,
    #[default]
    Subsets,
    Both,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Method::Dense),
            "subsets" => Ok(Method::Subsets),
            "both" => Ok(Method::Both),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

/// One nonzero anomaly entry or a failed `s² = 1` check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub relation: String,
    /// The letters involved, ascending.
    pub triple: Vec<usize>,
    pub equation: String,
    pub residual: ExactComplex,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub output: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub input: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub rrr: bool,
    pub sss: bool,
    pub ss_unit: bool,
    pub rrs: bool,
    pub rss: bool,
    pub failures: Vec<Failure>,
    /// Whether the reverse of the `rrs` relation happens to hold. It is not
    /// part of the presentation.
    pub reverse_srr: bool,
}

impl RelationReport {
    /// All five imposed relations hold.
    pub fn all_hold(&self) -> bool {
        self.rrr && self.sss && self.ss_unit && self.rrs && self.rss
    }

    pub fn holds(&self, relation: Relation) -> bool {
        match relation {
            Relation::Rrr => self.rrr,
            Relation::Sss => self.sss,
            Relation::Rrs => self.rrs,
            Relation::Rss => self.rss,
            Relation::Srr => self.reverse_srr,
        }
    }

    /// First recorded failure of a relation (`"ss_unit"` for the unit check).
    pub fn witness(&self, relation: &str) -> Option<&Failure> {
        self.failures.iter().find(|f| f.relation == relation)
    }

    fn flags(&self) -> [bool; 6] {
        [self.rrr, self.sss, self.ss_unit, self.rrs, self.rss, self.reverse_srr]
    }
}

fn sorted_letters(words: &[usize]) -> Vec<usize> {
    let mut v = words.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn ss_unit_failures(s: &AlphaForm) -> Vec<Failure> {
    let mut out = Vec::new();
    for i in 1..=s.rank() {
        let sq = s.vertex(i).square();
        if !sq.is_one() {
            out.push(Failure {
                relation: "ss_unit".into(),
                triple: vec![i],
                equation: "vertex".into(),
                residual: sq - ExactComplex::one(),
                output: vec![],
                input: vec![],
            });
        }
    }
    let id = scalar_block(ExactComplex::one());
    for (i, j) in s.edge_list() {
        let sq = block_mul(s.block(i, j), s.block(i, j));
        if sq != id {
            let residual = (0..4)
                .map(|k| &sq[k / 2][k % 2] - &id[k / 2][k % 2])
                .find(|x| !x.is_zero())
                .expect("differs somewhere");
            out.push(Failure {
                relation: "ss_unit".into(),
                triple: vec![i, j],
                equation: "block".into(),
                residual,
                output: vec![],
                input: vec![],
            });
        }
    }
    out
}

/// Nonzero entries of a dense width-3 anomaly, words relabelled through
/// `letters` (letter `l` of the rank becomes `letters[l - 1]`).
fn dense_failures(relation: Relation, anomaly: &DenseMatrix, n: usize, letters: &[usize], label: &str) -> Vec<Failure> {
    anomaly
        .triplets()
        .into_iter()
        .take(MAX_FAILURES_PER_RELATION)
        .map(|(r, c, x)| {
            let output: Vec<usize> = word_of(r, n, 3).iter().map(|&l| letters[l - 1]).collect();
            let input: Vec<usize> = word_of(c, n, 3).iter().map(|&l| letters[l - 1]).collect();
            Failure {
                relation: relation.name().into(),
                triple: sorted_letters(&input),
                equation: label.into(),
                residual: x,
                output,
                input,
            }
        })
        .collect()
}

fn dense_relation_failures(pair: &Pair, letters: &[usize], label: &str, exec: Execution) -> Result<Vec<Failure>> {
    let n = pair.rank();
    let s = alpha_to_dense(&pair.s);
    let r = alpha_to_dense(&pair.r);
    let mut out = Vec::new();
    for rel in Relation::ALL {
        let pick = |f: &AlphaForm| if std::ptr::eq(f, &pair.s) { &s } else { &r };
        let (z, big_z, zeta) = rel.operands(pair);
        let a = anomaly_with(pick(z), pick(big_z), pick(zeta), n, exec)?;
        out.extend(dense_failures(rel, &a, n, letters, label));
    }
    Ok(out)
}

fn assemble(mut failures: Vec<Failure>) -> RelationReport {
    let failed = |name: &str| failures.iter().any(|f| f.relation == name);
    let (rrr, sss, ss_unit, rrs, rss, reverse_srr) =
        (!failed("rrr"), !failed("sss"), !failed("ss_unit"), !failed("rrs"), !failed("rss"), !failed("srr"));
    failures.retain(|f| f.relation != "srr");
    let mut counts = std::collections::HashMap::<String, usize>::new();
    failures.retain(|f| {
        let c = counts.entry(f.relation.clone()).or_default();
        *c += 1;
        *c <= MAX_FAILURES_PER_RELATION
    });
    RelationReport { rrr, sss, ss_unit, rrs, rss, failures, reverse_srr }
}

fn verify_dense(pair: &Pair, exec: Execution) -> Result<RelationReport> {
    let letters: Vec<usize> = (1..=pair.rank()).collect();
    let mut failures = ss_unit_failures(&pair.s);
    failures.extend(dense_relation_failures(pair, &letters, "dense", exec)?);
    Ok(assemble(failures))
}

fn subsets_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

const ORDERINGS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn triple_failures(pair: &Pair, subset: &[usize]) -> Vec<Failure> {
    let mut out = Vec::new();
    for rel in Relation::ALL {
        let (z, big_z, zeta) = rel.operands(pair);
        for o in ORDERINGS {
            let t = [subset[o[0]], subset[o[1]], subset[o[2]]];
            for r in distinct_residuals(z, big_z, zeta, t) {
                if !r.value.is_zero() {
                    out.push(Failure {
                        relation: rel.name().into(),
                        triple: subset.to_vec(),
                        equation: r.name.into(),
                        residual: r.value,
                        output: r.output.to_vec(),
                        input: r.input.to_vec(),
                    });
                }
            }
        }
    }
    out
}

fn verify_subsets(pair: &Pair, exec: Execution) -> Result<RelationReport> {
    let n = pair.rank();
    let mut failures = ss_unit_failures(&pair.s);
    if n == 1 {
        failures.extend(dense_relation_failures(pair, &[1], "dense", Execution::Sequential)?);
        return Ok(assemble(failures));
    }
    let pairs = subsets_of(n, 2);
    let from_pairs = par_map(exec, &pairs, |ij| {
        let sub = restrict(pair, ij)?;
        dense_relation_failures(&sub, ij, "rank2", Execution::Sequential)
    });
    for f in from_pairs {
        failures.extend(f?);
    }
    let triples = subsets_of(n, 3);
    failures.extend(par_map(exec, &triples, |t| triple_failures(pair, t)).into_iter().flatten());
    Ok(assemble(failures))
}

/// Checks `s² = 1`, `sss`, `rrr`, `rrs` and `rss` for the pair, and reports
/// whether the non-imposed `srr` happens to hold.
pub fn verify_pair(s: &AlphaForm, r: &AlphaForm, method: Method) -> Result<RelationReport> {
    verify_pair_with(&Pair::new(s.clone(), r.clone())?, method, Execution::default())
}

pub fn verify_pair_with(pair: &Pair, method: Method, exec: Execution) -> Result<RelationReport> {
    if pair.s.rank() != pair.r.rank() {
        return Err(Error::RankMismatch(pair.s.rank(), pair.r.rank()));
    }
    match method {
        Method::Dense => verify_dense(pair, exec),
        Method::Subsets => verify_subsets(pair, exec),
        Method::Both => {
            let dense = verify_dense(pair, exec)?;
            let subsets = verify_subsets(pair, exec)?;
            if dense.flags() != subsets.flags() {
                return Err(Error::OracleDisagreement);
            }
            Ok(subsets)
        }
    }
}

/// The shape of `S` found by [`search_extension`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ExtensionKind {
    /// `S = ±1`, no constraint on `R`.
    Scalar,
    /// `S` anti-diagonal on the edge with free gauge parameter.
    Slash,
    /// `S = ±diag(1, 1/c, c, −1)·P` with `c` locked by `b₁₂(R) = A₁/c`.
    TypeA { barred: bool, c: ExactComplex },
}

/// A verified rank-2 extension of a braid solution `R` to a pair `(S, R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub family: N2Tag,
    pub kind: ExtensionKind,
    pub s: AlphaForm,
}

fn s_candidate(v1: i64, v2: i64, off: Option<&ExactComplex>) -> AlphaForm {
    let blk = match off {
        Some(c) => [[ExactComplex::zero(), c.inv().expect("nonzero")], [c.clone(), ExactComplex::zero()]],
        None => scalar_block(ExactComplex::from_int(v1)),
    };
    AlphaForm::from_fn(vec![ExactComplex::from_int(v1), ExactComplex::from_int(v2)], |_, _| blk.clone())
}

fn negate(f: &AlphaForm) -> AlphaForm {
    let minus = ExactComplex::from_int(-1);
    AlphaForm::from_fn(f.vertices().iter().map(|x| x * &minus).collect(), |i, j| {
        f.block(i, j).clone().map(|row| row.map(|x| x * &minus))
    })
}

/// Given a rank-2 braid solution `R`, finds an `S` completing it to a
/// representation, or `None` when `R` is of f-type.
///
/// The candidate forms are those allowed at rank 2; each is checked with
/// [`verify_pair`] before being returned.
pub fn search_extension(r: &AlphaForm) -> Result<Option<Extension>> {
    if r.rank() != 2 {
        return Err(Error::InvalidRank(r.rank()));
    }
    if !r.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let family = n2_tag(r)?;
    let a1 = r.vertex(1).clone();
    let b = r.block(1, 2)[0][1].clone();
    let mut shapes: Vec<(ExtensionKind, AlphaForm)> = Vec::new();
    match family {
        N2Tag::F0 => shapes.push((ExtensionKind::Scalar, s_candidate(1, 1, None))),
        N2Tag::Fslash => {
            for v2 in [1, -1] {
                shapes.push((ExtensionKind::Slash, s_candidate(1, v2, Some(&ExactComplex::one()))));
            }
        }
        N2Tag::Fa | N2Tag::Fabar => {
            let c = &a1 / &b;
            let kind = ExtensionKind::TypeA { barred: family == N2Tag::Fabar, c: c.clone() };
            shapes.push((kind, s_candidate(1, -1, Some(&c))));
        }
        N2Tag::Ff | N2Tag::Ffbar => {
            // Every admissible S shape, including the locks the a-types use.
            let a2 = r.vertex(2).clone();
            let mut offs = vec![ExactComplex::one(), &a1 / &b, &a2 / &b];
            offs.extend(offs.clone().into_iter().map(|x| -x));
            shapes.push((ExtensionKind::Scalar, s_candidate(1, 1, None)));
            for c in &offs {
                for v2 in [1, -1] {
                    shapes.push((ExtensionKind::Slash, s_candidate(1, v2, Some(c))));
                }
            }
        }
    }
    let candidates = shapes.into_iter().flat_map(|(kind, s)| {
        let neg = negate(&s);
        [(kind.clone(), s), (kind, neg)]
    });
    for (kind, s) in candidates {
        let report = verify_pair(&s, r, Method::Subsets)?;
        if report.all_hold() {
            return Ok(Some(Extension { family, kind, s }));
        }
    }
    Ok(None)
}

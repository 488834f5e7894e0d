//! Shared fixtures: reference α-forms at rank 3 written out symbol by symbol,
//! and deterministic random generators.

#![allow(dead_code)]

use loopbraid::{
    canonical_labelling, enum_signed, make_recipe, perm_action, random_point, AlphaForm, Block,
    ExactComplex, Gauge, LabelledShape, Nation, Pair, ParamPoint, Residence,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn z(n: i64) -> ExactComplex {
    ExactComplex::from_int(n)
}

pub fn nation(top: &[usize], bottom: &[usize]) -> Nation {
    Nation::new(top.to_vec(), bottom.to_vec()).unwrap()
}

pub fn shape(plus: Vec<Nation>, minus: Vec<Nation>) -> LabelledShape {
    LabelledShape::new(plus, minus).unwrap()
}

pub fn zero_block() -> Block {
    [[z(0), z(0)], [z(0), z(0)]]
}

pub fn scalar(x: &ExactComplex) -> Block {
    [[x.clone(), z(0)], [z(0), x.clone()]]
}

pub fn swap() -> Block {
    [[z(0), z(1)], [z(1), z(0)]]
}

pub fn neg(b: &Block) -> Block {
    b.clone().map(|row| row.map(|x| -x))
}

/// `[[α+β, α], [−β, 0]]`
pub fn type_a(alpha: &ExactComplex, beta: &ExactComplex) -> Block {
    [[alpha + beta, alpha.clone()], [-beta, z(0)]]
}

/// `[[0, −β], [α, α+β]]`
pub fn type_a_rev(alpha: &ExactComplex, beta: &ExactComplex) -> Block {
    [[z(0), -beta], [alpha.clone(), alpha + beta]]
}

/// `[[α+β, −α], [β, 0]]`
pub fn type_a_minus(alpha: &ExactComplex, beta: &ExactComplex) -> Block {
    [[alpha + beta, -alpha], [beta.clone(), z(0)]]
}

/// A rank-3 α-form from its vertex scalars and the blocks at (1,2), (1,3), (2,3).
pub fn form3(vertex: [ExactComplex; 3], blocks: [Block; 3]) -> AlphaForm {
    AlphaForm::from_fn(vertex.to_vec(), |i, j| match (i, j) {
        (1, 2) => blocks[0].clone(),
        (1, 3) => blocks[1].clone(),
        (2, 3) => blocks[2].clone(),
        _ => unreachable!(),
    })
}

pub fn signs3(s: [i64; 3], blocks: [Block; 3]) -> AlphaForm {
    form3(s.map(z), blocks)
}

/// Values of the symbols `α_s`, `β_s`, `μ_st/C_st` at a parameter point.
pub struct Symbols {
    pub lambda: LabelledShape,
    pub x: ParamPoint,
    res: Vec<Residence>,
}

impl Symbols {
    pub fn new(lambda: LabelledShape, seed: u64) -> Self {
        let x = random_point(&lambda, seed);
        let res = lambda.residences();
        Symbols { lambda, x, res }
    }

    pub fn alpha(&self, s: usize) -> ExactComplex {
        self.x.nations[s - 1].alpha.clone()
    }

    pub fn beta(&self, s: usize) -> ExactComplex {
        self.x.nations[s - 1].beta.clone().expect("nation has a bottom county")
    }

    /// Nation of an individual, from 1.
    pub fn nat(&self, i: usize) -> usize {
        self.res[i].nation + 1
    }

    /// Value of the individual's county.
    pub fn a(&self, i: usize) -> ExactComplex {
        if self.res[i].top {
            self.alpha(self.nat(i))
        } else {
            self.beta(self.nat(i))
        }
    }

    /// `[[0, μ_st/C_st], [μ_st C_st, 0]]`, with `C_ts = 1/C_st`.
    pub fn slash(&self, s: usize, t: usize) -> Block {
        let (p, q) = self.x.pair(s, t).unwrap().invariants().unwrap();
        [[z(0), q], [p, z(0)]]
    }

    /// The slash block between the nations of two individuals.
    pub fn slash_between(&self, i: usize, j: usize) -> Block {
        self.slash(self.nat(i), self.nat(j))
    }

    pub fn recipe(&self) -> Pair {
        make_recipe(&self.lambda, &self.x).unwrap()
    }
}

/// A reference form: a labelled shape and the pair written for it.
pub struct Reference {
    pub name: String,
    pub symbols: Symbols,
    pub s: AlphaForm,
    pub r: AlphaForm,
}

/// Differences between a reference form and the recipe, entry by entry.
pub fn differences(reference: &Reference) -> Vec<String> {
    let built = reference.symbols.recipe();
    let mut out = Vec::new();
    for (label, want, got) in [("S", &reference.s, &built.s), ("R", &reference.r, &built.r)] {
        for i in 1..=3 {
            if want.vertex(i) != got.vertex(i) {
                out.push(format!("{label} vertex {i}: reference {} recipe {}", want.vertex(i), got.vertex(i)));
            }
        }
        for (i, j) in want.edge_list() {
            if want.block(i, j) != got.block(i, j) {
                out.push(format!("{label} block ({i},{j}) differs"));
            }
        }
    }
    out
}

fn reference(name: &str, lambda: LabelledShape, seed: u64, build: impl Fn(&Symbols) -> (AlphaForm, AlphaForm)) -> Reference {
    let symbols = Symbols::new(lambda, seed);
    let (s, r) = build(&symbols);
    Reference { name: name.to_string(), symbols, s, r }
}

/// The worked examples at rank 3 with a single nation or one nation plus a singleton.
pub fn worked_examples(seed: u64) -> Vec<Reference> {
    vec![
        reference("(<1 2/3>,)", shape(vec![nation(&[1, 2], &[3])], vec![]), seed, |y| {
            let (a, b) = (y.alpha(1), y.beta(1));
            (
                signs3([1, 1, -1], [scalar(&z(1)), swap(), swap()]),
                form3([a.clone(), a.clone(), b.clone()], [scalar(&a), type_a(&a, &b), type_a(&a, &b)]),
            )
        }),
        reference("(<1 3/2>,)", shape(vec![nation(&[1, 3], &[2])], vec![]), seed, |y| {
            let (a, b) = (y.alpha(1), y.beta(1));
            (
                signs3([1, -1, 1], [swap(), scalar(&z(1)), swap()]),
                form3([a.clone(), b.clone(), a.clone()], [type_a(&a, &b), scalar(&a), type_a_rev(&a, &b)]),
            )
        }),
        reference("(,<1 2/3>)", shape(vec![], vec![nation(&[1, 2], &[3])]), seed, |y| {
            let (a, b) = (y.alpha(1), y.beta(1));
            (
                signs3([-1, -1, 1], [scalar(&z(-1)), swap(), swap()]),
                form3([a.clone(), a.clone(), b.clone()], [scalar(&a), type_a_minus(&a, &b), type_a_minus(&a, &b)]),
            )
        }),
        reference("(<1/2>, <3>)", shape(vec![nation(&[1], &[2])], vec![nation(&[3], &[])]), seed, |y| {
            let (a1, b1, a2) = (y.alpha(1), y.beta(1), y.alpha(2));
            (
                signs3([1, -1, -1], [swap(), swap(), swap()]),
                form3([a1.clone(), b1.clone(), a2], [type_a(&a1, &b1), y.slash(1, 2), y.slash(1, 2)]),
            )
        }),
        reference("(<3/2>, <1>)", shape(vec![nation(&[3], &[2])], vec![nation(&[1], &[])]), seed, |y| {
            let (a1, b1, a2) = (y.alpha(1), y.beta(1), y.alpha(2));
            (
                signs3([-1, -1, 1], [swap(), swap(), swap()]),
                form3([a2, b1.clone(), a1.clone()], [y.slash(2, 1), y.slash(2, 1), type_a_rev(&a1, &b1)]),
            )
        }),
        // Vertex row as written: (α₂, β₁, α₁).
        reference("(<1/3>, <2>)", shape(vec![nation(&[1], &[3])], vec![nation(&[2], &[])]), seed, |y| {
            let (a1, b1, a2) = (y.alpha(1), y.beta(1), y.alpha(2));
            (
                signs3([1, -1, -1], [swap(), swap(), swap()]),
                form3([a2, b1.clone(), a1.clone()], [y.slash(1, 2), type_a(&a1, &b1), y.slash(2, 1)]),
            )
        }),
    ]
}

/// Every labelled shape on `{1,2,3}` with singleton nations, by sign pattern.
fn singletons(signs: [i64; 3]) -> LabelledShape {
    let (mut plus, mut minus) = (vec![], vec![]);
    for (k, s) in signs.iter().enumerate() {
        let n = nation(&[k + 1], &[]);
        if *s > 0 {
            plus.push(n)
        } else {
            minus.push(n)
        }
    }
    shape(plus, minus)
}

/// The rank-3 family list: every sign pattern on three singletons, a
/// singleton with a one-county pair, a singleton with a two-county pair in
/// both sign placements, and the single nations (3), (2,1), (1,2).
pub fn family_forms(seed: u64) -> Vec<Reference> {
    let mut out = Vec::new();
    for bits in 0..8u32 {
        let signs = [0, 1, 2].map(|k| if bits >> k & 1 == 1 { -1 } else { 1 });
        out.push(reference(&format!("three singletons {signs:?}"), singletons(signs), seed, move |y| {
            (
                signs3(signs, [swap(), swap(), swap()]),
                form3(
                    [y.a(1), y.a(2), y.a(3)],
                    [y.slash_between(1, 2), y.slash_between(1, 3), y.slash_between(2, 3)],
                ),
            )
        }));
    }
    for first in [1i64, -1] {
        let one = vec![nation(&[1], &[])];
        let lambda = if first > 0 {
            shape([one, vec![nation(&[2, 3], &[])]].concat(), vec![])
        } else {
            shape(vec![nation(&[2, 3], &[])], one)
        };
        out.push(reference(&format!("singleton {first:+} with <2 3>"), lambda, seed, move |y| {
            (
                signs3([first, 1, 1], [swap(), swap(), scalar(&z(1))]),
                form3(
                    [y.a(1), y.a(2), y.a(2)],
                    [y.slash_between(1, 2), y.slash_between(1, 3), scalar(&y.a(2))],
                ),
            )
        }));
    }
    out.push(reference("(<1> <2/3>,)", shape(vec![nation(&[1], &[]), nation(&[2], &[3])], vec![]), seed, |y| {
        (
            signs3([1, 1, -1], [swap(), swap(), swap()]),
            form3(
                [y.a(1), y.a(2), y.a(3)],
                [y.slash_between(1, 2), y.slash_between(1, 3), type_a(&y.a(2), &y.a(3))],
            ),
        )
    }));
    out.push(reference("(<1>, <2/3>)", shape(vec![nation(&[1], &[])], vec![nation(&[2], &[3])]), seed, |y| {
        (
            signs3([1, -1, 1], [swap(), swap(), swap()]),
            form3(
                [y.a(1), y.a(2), y.a(3)],
                [y.slash_between(1, 2), y.slash_between(1, 3), type_a_minus(&y.a(2), &y.a(3))],
            ),
        )
    }));
    for sign in [1i64, -1] {
        let n3 = vec![nation(&[1, 2, 3], &[])];
        let lambda = if sign > 0 { shape(n3, vec![]) } else { shape(vec![], n3) };
        out.push(reference(&format!("<1 2 3> {sign:+}"), lambda, seed, move |y| {
            (AlphaForm::scalar(3, z(sign)), AlphaForm::scalar(3, y.a(1)))
        }));
    }
    out.push(reference("(<1 2/3>,) as family", shape(vec![nation(&[1, 2], &[3])], vec![]), seed, |y| {
        let (a1, a3) = (y.a(1), y.a(3));
        (
            signs3([1, 1, -1], [scalar(&z(1)), swap(), swap()]),
            form3([a1.clone(), a1.clone(), a3.clone()], [scalar(&a1), type_a(&a1, &a3), type_a(&a1, &a3)]),
        )
    }));
    // S block on the bottom county as written: the identity.
    out.push(reference("(<1/2 3>,)", shape(vec![nation(&[1], &[2, 3])], vec![]), seed, |y| {
        let (a1, a2) = (y.a(1), y.a(2));
        (
            signs3([1, -1, -1], [swap(), swap(), scalar(&z(1))]),
            form3([a1.clone(), a2.clone(), a2.clone()], [type_a(&a1, &a2), type_a(&a1, &a2), scalar(&a2)]),
        )
    }));
    out
}

/// The pair that fails to be a representation on `(<1 3/2>,)`: the (2,3)
/// block uses the top-first orientation, with either sign on the S block.
pub fn near_miss(seed: u64, s_sign: i64) -> Pair {
    let y = Symbols::new(shape(vec![nation(&[1, 3], &[2])], vec![]), seed);
    let (a, b) = (y.alpha(1), y.beta(1));
    let swap23 = if s_sign > 0 { swap() } else { neg(&swap()) };
    Pair::new(
        signs3([1, -1, 1], [swap(), scalar(&z(1)), swap23]),
        form3([a.clone(), b.clone(), a.clone()], [type_a(&a, &b), scalar(&a), type_a(&a, &b)]),
    )
    .unwrap()
}

pub fn small_gaussian(rng: &mut ChaCha8Rng) -> ExactComplex {
    loop {
        let x = ExactComplex::gaussian(rng.gen_range(-5..=5), rng.gen_range(-5..=5));
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut w: Vec<usize> = (1..=n).collect();
    w.shuffle(rng);
    w
}

pub fn random_gauge(rng: &mut ChaCha8Rng, n: usize) -> Gauge {
    let mut m = Gauge::identity();
    for j in 2..=n {
        for i in 1..j {
            m.set(i, j, small_gaussian(rng));
        }
    }
    m
}

/// A random labelled shape of rank `n`.
pub fn random_labelled(rng: &mut ChaCha8Rng, n: usize) -> LabelledShape {
    let shapes = enum_signed(n);
    let base = canonical_labelling(&shapes[rng.gen_range(0..shapes.len())]);
    perm_action(&random_permutation(rng, n), &base).unwrap()
}

/// A random recipe solution at rank `n`, relabelled and gauged.
pub fn random_solution(rng: &mut ChaCha8Rng, n: usize) -> Pair {
    let lambda = random_labelled(rng, n);
    let pair = make_recipe(&lambda, &random_point(&lambda, rng.gen())).unwrap();
    loopbraid::gauge_pair(&pair, &random_gauge(rng, n)).unwrap()
}

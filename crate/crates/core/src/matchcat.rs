//! Charge-conserving matrices: the α-form encoding, its dense expansion, the
//! Kronecker calculus, restriction along injections, diagonal gauge
//! transforms and the monomial decomposition.
//!
//! # Basis convention
//!
//! A word `|i₁ i₂ … i_w⟩` over the alphabet `1..=N` has flat index
//! `Σ (i_k − 1)·N^(k−1)`: earlier letters vary fastest, so at `N = 2` the
//! width-2 basis runs `11, 21, 12, 22`. For an edge `i < j` the flat index of
//! `|ji⟩` is below that of `|ij⟩`, and the edge block `[[a, b], [c, d]]` acts
//! on the ordered pair `(|ji⟩, |ij⟩)`:
//!
//! ```text
//! M|ij⟩ = d|ij⟩ + b|ji⟩        M|ji⟩ = a|ji⟩ + c|ij⟩
//! ```

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::{par_map, Execution};
use crate::scalars::ExactComplex;

/// A 2×2 block `[[a, b], [c, d]]`.
pub type Block = [[ExactComplex; 2]; 2];

pub fn block(a: ExactComplex, b: ExactComplex, c: ExactComplex, d: ExactComplex) -> Block {
    [[a, b], [c, d]]
}

pub fn scalar_block(x: ExactComplex) -> Block {
    [[x.clone(), ExactComplex::zero()], [ExactComplex::zero(), x]]
}

pub fn swap_block() -> Block {
    [[ExactComplex::zero(), ExactComplex::one()], [ExactComplex::one(), ExactComplex::zero()]]
}

/// `[[a, b], [c, d]] ↦ [[d, c], [b, a]]`: the block seen from the reversed pair.
pub fn antitranspose(b: &Block) -> Block {
    [[b[1][1].clone(), b[1][0].clone()], [b[0][1].clone(), b[0][0].clone()]]
}

pub fn block_mul(x: &Block, y: &Block) -> Block {
    let e = |r: usize, c: usize| &x[r][0] * &y[0][c] + &x[r][1] * &y[1][c];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Flat index of a word.
pub fn flat_index(letters: &[usize], n: usize) -> usize {
    letters.iter().rev().fold(0, |acc, &l| acc * n + (l - 1))
}

/// Inverse of [`flat_index`].
pub fn word_of(mut index: usize, n: usize, width: usize) -> Vec<usize> {
    (0..width)
        .map(|_| {
            let l = index % n + 1;
            index /= n;
            l
        })
        .collect()
}

/// Index of edge `(i, j)`, `1 ≤ i < j`, in colex order.
fn edge_index(i: usize, j: usize) -> usize {
    (j - 1) * (j - 2) / 2 + (i - 1)
}

/// A square matrix with exact entries, stored row-major and 0-based.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    side: usize,
    entries: Vec<ExactComplex>,
}

impl std::fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DenseMatrix({})", self.side)?;
        for r in 0..self.side {
            let row: Vec<String> = (0..self.side).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl DenseMatrix {
    pub fn zeros(side: usize) -> Self {
        Self { side, entries: vec![ExactComplex::zero(); side * side] }
    }

    pub fn identity(side: usize) -> Self {
        let mut m = Self::zeros(side);
        for i in 0..side {
            m.set(i, i, ExactComplex::one());
        }
        m
    }

    pub fn diagonal(diag: Vec<ExactComplex>) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, x) in diag.into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactComplex>>) -> Result<Self> {
        let side = rows.len();
        let mut entries = Vec::with_capacity(side * side);
        for row in rows {
            if row.len() != side {
                return Err(Error::SizeMismatch { expected: side, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { side, entries })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactComplex {
        &self.entries[r * self.side + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: ExactComplex) {
        self.entries[r * self.side + c] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactComplex::is_zero)
    }

    /// Nonzero entries as `(row, col, value)`, sorted by `(row, col)`.
    pub fn triplets(&self) -> Vec<(usize, usize, ExactComplex)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| (k / self.side, k % self.side, x.clone()))
            .collect()
    }

    pub fn from_triplets(side: usize, triplets: &[(usize, usize, ExactComplex)]) -> Result<Self> {
        let mut m = Self::zeros(side);
        for (r, c, x) in triplets {
            if *r >= side || *c >= side {
                return Err(Error::IndexOutOfRange { index: (*r).max(*c), n: side });
            }
            m.set(*r, *c, x.clone());
        }
        Ok(m)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.side != other.side {
            return Err(Error::SizeMismatch { expected: self.side, found: other.side });
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Self { side: self.side, entries })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Self { side: self.side, entries })
    }

    pub fn scale(&self, x: &ExactComplex) -> Self {
        Self { side: self.side, entries: self.entries.iter().map(|e| e * x).collect() }
    }

    /// Exact product `self · other`, skipping zero entries.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.compose_with(other, Execution::Sequential)
    }

    pub fn compose_with(&self, other: &Self, exec: Execution) -> Result<Self> {
        self.check_same(other)?;
        let n = self.side;
        let other_rows: Vec<Vec<(usize, &ExactComplex)>> = (0..n)
            .map(|k| (0..n).map(|c| (c, other.get(k, c))).filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        let rows: Vec<usize> = (0..n).collect();
        let computed = par_map(exec, &rows, |&r| {
            let mut row = vec![ExactComplex::zero(); n];
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for &(c, b) in &other_rows[k] {
                    row[c] += &(a * b);
                }
            }
            row
        });
        Ok(Self { side: n, entries: computed.into_iter().flatten().collect() })
    }
}

/// Kronecker product with earlier factors varying fastest:
/// `kron(A, B)[r₁ + r₂·n_A, c₁ + c₂·n_A] = A[r₁, c₁]·B[r₂, c₂]`.
///
/// Both factors are square here; for the rectangular case see
/// [`kron_rect`].
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (na, nb) = (a.side, b.side);
    let mut out = DenseMatrix::zeros(na * nb);
    for (r2, c2, y) in b.triplets() {
        for (r1, c1, x) in a.triplets() {
            out.set(r1 + r2 * na, c1 + c2 * na, &x * &y);
        }
    }
    out
}

/// Kronecker product of rectangular matrices given as row vectors, same
/// convention as [`kron`].
pub fn kron_rect(a: &[Vec<ExactComplex>], b: &[Vec<ExactComplex>]) -> Vec<Vec<ExactComplex>> {
    let (ra, ca) = (a.len(), a.first().map_or(0, Vec::len));
    let (rb, cb) = (b.len(), b.first().map_or(0, Vec::len));
    let mut out = vec![vec![ExactComplex::zero(); ca * cb]; ra * rb];
    for r2 in 0..rb {
        for c2 in 0..cb {
            for r1 in 0..ra {
                for c1 in 0..ca {
                    out[r1 + r2 * ra][c1 + c2 * ca] = &a[r1][c1] * &b[r2][c2];
                }
            }
        }
    }
    out
}

/// The flip `P|ij⟩ = |ji⟩` on `C^N ⊗ C^N`.
pub fn perm_p(n: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n * n);
    for i in 1..=n {
        for j in 1..=n {
            m.set(flat_index(&[j, i], n), flat_index(&[i, j], n), ExactComplex::one());
        }
    }
    m
}

/// Promotes a width-2 operator to width 3: position 1 gives `M ⊗ 1`,
/// position 2 gives `1 ⊗ M`.
pub fn shift_embed(m: &DenseMatrix, position: usize, n: usize) -> Result<DenseMatrix> {
    if m.side != n * n {
        return Err(Error::SizeMismatch { expected: n * n, found: m.side });
    }
    let id = DenseMatrix::identity(n);
    match position {
        1 => Ok(kron(m, &id)),
        2 => Ok(kron(&id, m)),
        other => Err(Error::IndexOutOfRange { index: other, n: 2 }),
    }
}

/// True iff every nonzero `⟨u|M|v⟩` has `u` a rearrangement of `v`.
pub fn is_charge_conserving(m: &DenseMatrix, n: usize, width: usize) -> Result<bool> {
    let side = n.pow(width as u32);
    if m.side != side {
        return Err(Error::SizeMismatch { expected: side, found: m.side });
    }
    Ok(m.triplets().iter().all(|(r, c, _)| {
        let mut u = word_of(*r, n, width);
        let mut v = word_of(*c, n, width);
        u.sort_unstable();
        v.sort_unstable();
        u == v
    }))
}

/// A charge-conserving operator on `C^N ⊗ C^N` in α-form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlphaForm {
    n: usize,
    vertex: Vec<ExactComplex>,
    edges: Vec<Block>,
}

impl std::fmt::Debug for AlphaForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlphaForm(N={}; vertex {:?}", self.n, self.vertex)?;
        for j in 2..=self.n {
            for i in 1..j {
                write!(f, "; ({i},{j}) {:?}", self.block(i, j))?;
            }
        }
        write!(f, ")")
    }
}

impl AlphaForm {
    /// Builds a form whose vertex scalars are `vertex` and whose block on
    /// edge `(i, j)` is `edge(i, j)`.
    pub fn from_fn(vertex: Vec<ExactComplex>, mut edge: impl FnMut(usize, usize) -> Block) -> Self {
        let n = vertex.len();
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for j in 2..=n {
            for i in 1..j {
                edges.push(edge(i, j));
            }
        }
        Self { n, vertex, edges }
    }

    pub fn scalar(n: usize, x: ExactComplex) -> Self {
        Self::from_fn(vec![x.clone(); n], |_, _| scalar_block(x.clone()))
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, ExactComplex::one())
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Vertex scalar `⟨ii|M|ii⟩`, 1-based.
    pub fn vertex(&self, i: usize) -> &ExactComplex {
        &self.vertex[i - 1]
    }

    pub fn vertices(&self) -> &[ExactComplex] {
        &self.vertex
    }

    /// Block on edge `(i, j)` with `i < j`.
    pub fn block(&self, i: usize, j: usize) -> &Block {
        assert!(i < j && j <= self.n, "edge ({i}, {j}) out of range");
        &self.edges[edge_index(i, j)]
    }

    pub fn block_mut(&mut self, i: usize, j: usize) -> &mut Block {
        assert!(i < j && j <= self.n, "edge ({i}, {j}) out of range");
        &mut self.edges[edge_index(i, j)]
    }

    pub fn set_vertex(&mut self, i: usize, x: ExactComplex) {
        self.vertex[i - 1] = x;
    }

    /// The block as seen from the ordered pair `(p, q)`, `p ≠ q`: entries
    /// `[[a_pq, b_pq], [c_pq, d_pq]]` with `M|pq⟩ = d_pq|pq⟩ + b_pq|qp⟩` and
    /// `M|qp⟩ = a_pq|qp⟩ + c_pq|pq⟩`.
    pub fn oriented_block(&self, p: usize, q: usize) -> Block {
        if p < q {
            self.block(p, q).clone()
        } else {
            antitranspose(self.block(q, p))
        }
    }

    /// Edges `(i, j)` in ascending lexicographic order.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edges.len());
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                out.push((i, j));
            }
        }
        out
    }

    /// `⟨ii|M|ii⟩ ≠ 0` and every block has nonzero determinant.
    pub fn is_invertible(&self) -> bool {
        self.vertex.iter().all(|x| !x.is_zero())
            && self.edges.iter().all(|b| !(&b[0][0] * &b[1][1] - &b[0][1] * &b[1][0]).is_zero())
    }

    /// Entrywise square of the operator: vertex scalars squared and blocks
    /// squared.
    pub fn square(&self) -> Self {
        Self {
            n: self.n,
            vertex: self.vertex.iter().map(ExactComplex::square).collect(),
            edges: self.edges.iter().map(|b| block_mul(b, b)).collect(),
        }
    }

    /// `f^ψ`: the form at rank `ψ.len()` reading vertex `v` from `ψ(v)` and
    /// edge `(v, w)` from the ordered pair `(ψ(v), ψ(w))`.
    pub fn restrict(&self, psi: &[usize]) -> Result<Self> {
        check_injection(psi, self.n)?;
        let vertex = psi.iter().map(|&p| self.vertex(p).clone()).collect();
        Ok(Self::from_fn(vertex, |v, w| self.oriented_block(psi[v - 1], psi[w - 1])))
    }
}

fn check_injection(psi: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n + 1];
    for &p in psi {
        if p == 0 || p > n || seen[p] {
            return Err(Error::NotInjective);
        }
        seen[p] = true;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRepr {
    i: usize,
    j: usize,
    block: Block,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphaRepr {
    #[serde(rename = "N")]
    n: usize,
    vertex: Vec<ExactComplex>,
    edges: Vec<EdgeRepr>,
}

impl Serialize for AlphaForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let edges = self
            .edge_list()
            .into_iter()
            .map(|(i, j)| EdgeRepr { i, j, block: self.block(i, j).clone() })
            .collect();
        AlphaRepr { n: self.n, vertex: self.vertex.clone(), edges }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AlphaForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = AlphaRepr::deserialize(deserializer)?;
        let n = repr.n;
        if n == 0 || repr.vertex.len() != n {
            return Err(D::Error::custom(format!("expected {n} vertex scalars, found {}", repr.vertex.len())));
        }
        let mut slots: Vec<Option<Block>> = vec![None; n * (n - 1) / 2];
        for e in repr.edges {
            if !(1 <= e.i && e.i < e.j && e.j <= n) {
                return Err(D::Error::custom(format!("bad edge ({}, {})", e.i, e.j)));
            }
            let slot = &mut slots[edge_index(e.i, e.j)];
            if slot.is_some() {
                return Err(D::Error::custom(format!("duplicate edge ({}, {})", e.i, e.j)));
            }
            *slot = Some(e.block);
        }
        let edges = slots
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| D::Error::custom("missing edge block"))?;
        Ok(AlphaForm { n, vertex: repr.vertex, edges })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DenseRepr {
    side: usize,
    triplets: Vec<(usize, usize, ExactComplex)>,
}

impl Serialize for DenseMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DenseRepr { side: self.side, triplets: self.triplets() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DenseMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DenseRepr::deserialize(deserializer)?;
        DenseMatrix::from_triplets(repr.side, &repr.triplets).map_err(serde::de::Error::custom)
    }
}

/// A candidate representation: images of the symmetric generator `s` and the
/// braid generator `σ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    #[serde(rename = "S")]
    pub s: AlphaForm,
    #[serde(rename = "R")]
    pub r: AlphaForm,
}

impl Pair {
    pub fn new(s: AlphaForm, r: AlphaForm) -> Result<Self> {
        if s.rank() != r.rank() {
            return Err(Error::RankMismatch(s.rank(), r.rank()));
        }
        Ok(Self { s, r })
    }

    pub fn rank(&self) -> usize {
        self.s.rank()
    }
}

/// Restricts both members of a pair along `ψ`.
pub fn restrict(pair: &Pair, psi: &[usize]) -> Result<Pair> {
    Ok(Pair { s: pair.s.restrict(psi)?, r: pair.r.restrict(psi)? })
}

pub fn alpha_to_dense(f: &AlphaForm) -> DenseMatrix {
    let n = f.n;
    let mut m = DenseMatrix::zeros(n * n);
    for i in 1..=n {
        let ii = flat_index(&[i, i], n);
        m.set(ii, ii, f.vertex(i).clone());
    }
    for (i, j) in f.edge_list() {
        let ji = flat_index(&[j, i], n);
        let ij = flat_index(&[i, j], n);
        let [[a, b], [c, d]] = f.block(i, j).clone();
        m.set(ji, ji, a);
        m.set(ji, ij, b);
        m.set(ij, ji, c);
        m.set(ij, ij, d);
    }
    m
}

pub fn dense_to_alpha(m: &DenseMatrix, n: usize) -> Result<AlphaForm> {
    if n == 0 || m.side != n * n {
        return Err(Error::SizeMismatch { expected: n * n, found: m.side });
    }
    if let Some((row, col, _)) = m.triplets().into_iter().find(|(r, c, _)| {
        let (u, v) = (word_of(*r, n, 2), word_of(*c, n, 2));
        !(u == v || (u[0] == v[1] && u[1] == v[0]))
    }) {
        return Err(Error::NotChargeConserving { row, col });
    }
    let vertex = (1..=n).map(|i| {
        let ii = flat_index(&[i, i], n);
        m.get(ii, ii).clone()
    });
    Ok(AlphaForm::from_fn(vertex.collect(), |i, j| {
        let ji = flat_index(&[j, i], n);
        let ij = flat_index(&[i, j], n);
        [[m.get(ji, ji).clone(), m.get(ji, ij).clone()], [m.get(ij, ji).clone(), m.get(ij, ij).clone()]]
    }))
}

/// Per-edge gauge factors `m_ij` for `i < j`; absent edges carry 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Gauge(BTreeMap<(usize, usize), ExactComplex>);

impl Gauge {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn set(&mut self, i: usize, j: usize, m: ExactComplex) {
        let (i, j, m) = if i < j { (i, j, m) } else { (j, i, m.inv().unwrap_or_else(|_| ExactComplex::zero())) };
        if m.is_one() {
            self.0.remove(&(i, j));
        } else {
            self.0.insert((i, j), m);
        }
    }

    /// Factor on `(i, j)` with `i < j`.
    pub fn get(&self, i: usize, j: usize) -> ExactComplex {
        self.0.get(&(i, j)).cloned().unwrap_or_else(ExactComplex::one)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &ExactComplex)> {
        self.0.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Pointwise product.
    pub fn then(&self, other: &Gauge) -> Gauge {
        let mut out = self.clone();
        for (&(i, j), m) in &other.0 {
            out.set(i, j, &self.get(i, j) * m);
        }
        out
    }

    /// Pointwise inverse.
    pub fn inverse(&self) -> Result<Gauge> {
        let mut out = Gauge::default();
        for (&(i, j), m) in &self.0 {
            out.set(i, j, m.inv().map_err(|_| Error::ZeroGaugeFactor { i, j })?);
        }
        Ok(out)
    }

    /// The gauge on the restricted rank whose action commutes with
    /// restriction along `ψ`.
    pub fn pull_back(&self, psi: &[usize]) -> Result<Gauge> {
        let mut out = Gauge::default();
        for v in 1..=psi.len() {
            for w in v + 1..=psi.len() {
                let (p, q) = (psi[v - 1], psi[w - 1]);
                let m = if p < q { self.get(p, q) } else { self.get(q, p).inv()? };
                out.set(v, w, m);
            }
        }
        Ok(out)
    }

    /// Dense diagonal `X` with `X F X⁻¹` equal to the gauged form:
    /// `X_{|ji⟩} = m_ij` and every other diagonal entry 1.
    pub fn conjugator(&self, n: usize) -> DenseMatrix {
        let mut diag = vec![ExactComplex::one(); n * n];
        for (&(i, j), m) in &self.0 {
            diag[flat_index(&[j, i], n)] = m.clone();
        }
        DenseMatrix::diagonal(diag)
    }
}

impl Serialize for Gauge {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            i: usize,
            j: usize,
            m: &'a ExactComplex,
        }
        let v: Vec<Entry> = self.0.iter().map(|(&(i, j), m)| Entry { i, j, m }).collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Gauge {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Entry {
            i: usize,
            j: usize,
            m: ExactComplex,
        }
        let v: Vec<Entry> = Vec::deserialize(deserializer)?;
        let mut out = Gauge::default();
        for e in v {
            if e.i == e.j || e.i == 0 || e.j == 0 {
                return Err(serde::de::Error::custom(format!("bad edge ({}, {})", e.i, e.j)));
            }
            if e.m.is_zero() {
                return Err(serde::de::Error::custom(format!("zero gauge factor on ({}, {})", e.i, e.j)));
            }
            out.set(e.i, e.j, e.m);
        }
        Ok(out)
    }
}

/// `b_ij ↦ m_ij·b_ij`, `c_ij ↦ c_ij / m_ij`; everything else unchanged.
pub fn gauge_transform(f: &AlphaForm, m: &Gauge) -> Result<AlphaForm> {
    let mut out = f.clone();
    for (&(i, j), x) in m.entries() {
        if j > f.n {
            return Err(Error::IndexOutOfRange { index: j, n: f.n });
        }
        let inv = x.inv().map_err(|_| Error::ZeroGaugeFactor { i, j })?;
        let b = out.block_mut(i, j);
        b[0][1] = &b[0][1] * x;
        b[1][0] = &b[1][0] * &inv;
    }
    Ok(out)
}

pub fn gauge_pair(pair: &Pair, m: &Gauge) -> Result<Pair> {
    Ok(Pair { s: gauge_transform(&pair.s, m)?, r: gauge_transform(&pair.r, m)? })
}

/// Splits `M = Δ + D·P` with `Δ, D` diagonal.
///
/// `Δ` carries `a_ij` at `|ji⟩` and `d_ij` at `|ij⟩`, zero at `|ii⟩`; `D`
/// carries `a_i` at `|ii⟩`, `b_ij` at `|ji⟩` and `c_ij` at `|ij⟩`.
pub fn monomial_decompose(f: &AlphaForm) -> (DenseMatrix, DenseMatrix) {
    let n = f.n;
    let mut delta = vec![ExactComplex::zero(); n * n];
    let mut d = vec![ExactComplex::zero(); n * n];
    for i in 1..=n {
        d[flat_index(&[i, i], n)] = f.vertex(i).clone();
    }
    for (i, j) in f.edge_list() {
        let ji = flat_index(&[j, i], n);
        let ij = flat_index(&[i, j], n);
        let [[a, b], [c, dd]] = f.block(i, j).clone();
        delta[ji] = a;
        delta[ij] = dd;
        d[ji] = b;
        d[ij] = c;
    }
    (DenseMatrix::diagonal(delta), DenseMatrix::diagonal(d))
}

/// The diagonal `D⁻` with the `|ij⟩` and `|ji⟩` entries of `D` exchanged,
/// so that `D·P = P·D⁻`.
pub fn swap_diagonal(d: &DenseMatrix, n: usize) -> DenseMatrix {
    let diag = (0..n * n)
        .map(|k| {
            let w = word_of(k, n, 2);
            d.get(flat_index(&[w[1], w[0]], n), flat_index(&[w[1], w[0]], n)).clone()
        })
        .collect();
    DenseMatrix::diagonal(diag)
}

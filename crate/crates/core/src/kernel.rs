//! Graded components, the exact matrix of the derivation on each of them, and
//! generation certificates comparing kernels with spans of candidates.
//!
//! A component is keyed by the joint degree in every derivation pair and the
//! weight (number of letters the derivation does not kill). The derivation
//! maps `(pd, w)` to `(pd, w - 1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::commpoly::{monomials_with, CommMonomial, CommPoly, VarAlphabet};
use crate::constants::{canonical_basis, pair_degree_vectors};
use crate::error::{Error, Result};
use crate::grassmann::{grass_derive, grass_mul, GrassElement, GrassMonomial};
use crate::lincomb::LinComb;
use crate::linalg::{nullspace, to_sparse, QMatrix, Rational, RowSpace, SparseVec};
use crate::metabelian::{act_uv, meta_derive, meta_mul, CommTerm, MetaElement, MetaMonomial};
use crate::wreath::{module_derive, ModMono, ModuleElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Component {
    pub pair_degrees: Vec<u32>,
    pub weight: u32,
}

impl Component {
    pub fn new(pair_degrees: Vec<u32>, weight: u32) -> Self {
        Component { pair_degrees, weight }
    }

    /// Component of a letter-count vector over consecutive pairs.
    pub fn of_letters(letters: &[u32]) -> Self {
        Component {
            pair_degrees: letters.chunks(2).map(|c| c.iter().sum()).collect(),
            weight: letters.iter().skip(1).step_by(2).sum(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.pair_degrees.iter().sum()
    }

    /// Where the derivation sends this component.
    pub fn target(&self) -> Option<Component> {
        (self.weight > 0).then(|| Component::new(self.pair_degrees.clone(), self.weight - 1))
    }

    pub fn add(&self, other: &Component) -> Component {
        Component {
            pair_degrees: self.pair_degrees.iter().zip(&other.pair_degrees).map(|(a, b)| a + b).collect(),
            weight: self.weight + other.weight,
        }
    }

    /// `self - other`, if every entry stays non-negative.
    pub fn sub(&self, other: &Component) -> Option<Component> {
        let pd: Option<Vec<u32>> = self
            .pair_degrees
            .iter()
            .zip(&other.pair_degrees)
            .map(|(a, b)| a.checked_sub(*b))
            .collect();
        Some(Component::new(pd?, self.weight.checked_sub(other.weight)?))
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pd: Vec<String> = self.pair_degrees.iter().map(u32::to_string).collect();
        write!(f, "({}; w={})", pd.join(","), self.weight)
    }
}

/// A graded algebra (or module) with a locally nilpotent derivation that
/// preserves pair degrees and lowers the weight by one.
pub trait Graded: Sync {
    type Mono: Ord + Clone + Send + Sync;
    type Elem: Clone + Send + Sync;

    fn name(&self) -> &'static str;
    fn pairs(&self) -> usize;
    /// Deterministic, duplicate-free basis of a component.
    fn basis(&self, c: &Component) -> Vec<Self::Mono>;
    fn component_of(&self, m: &Self::Mono) -> Component;
    fn derive_mono(&self, m: &Self::Mono) -> LinComb<Self::Mono>;
    fn to_elem(&self, lc: LinComb<Self::Mono>) -> Self::Elem;
    fn coords<'a>(&self, e: &'a Self::Elem) -> &'a LinComb<Self::Mono>;
    fn render(&self, e: &Self::Elem) -> String;

    fn mul(&self, _a: &Self::Elem, _b: &Self::Elem) -> Result<Self::Elem> {
        Err(Error::KindMismatch(format!("{} has no product", self.name())))
    }

    fn derive(&self, e: &Self::Elem) -> Self::Elem {
        let mut out = LinComb::new();
        for (m, c) in self.coords(e) {
            out.add_assign_scaled(&self.derive_mono(m), c);
        }
        self.to_elem(out)
    }
}

fn from_derive_list(list: Vec<(u32, CommMonomial)>) -> LinComb<CommMonomial> {
    list.into_iter().map(|(c, m)| (m, Rational::from_integer(c.into()))).collect()
}

/// `K[X_2d]` with `x_{2i} -> x_{2i-1}`.
#[derive(Debug, Clone, Copy)]
pub struct Commutative {
    pub d: usize,
}

impl Graded for Commutative {
    type Mono = CommMonomial;
    type Elem = CommPoly;

    fn name(&self) -> &'static str {
        "comm"
    }
    fn pairs(&self) -> usize {
        self.d
    }
    fn basis(&self, c: &Component) -> Vec<CommMonomial> {
        monomials_with(&c.pair_degrees, c.weight)
    }
    fn component_of(&self, m: &CommMonomial) -> Component {
        Component::of_letters(m.exponents())
    }
    fn derive_mono(&self, m: &CommMonomial) -> LinComb<CommMonomial> {
        from_derive_list(m.derive())
    }
    fn to_elem(&self, lc: LinComb<CommMonomial>) -> CommPoly {
        CommPoly::from_lincomb(VarAlphabet::x(2 * self.d), lc)
    }
    fn coords<'a>(&self, e: &'a CommPoly) -> &'a LinComb<CommMonomial> {
        e.terms()
    }
    fn render(&self, e: &CommPoly) -> String {
        e.render()
    }
    fn mul(&self, a: &CommPoly, b: &CommPoly) -> Result<CommPoly> {
        a.try_mul(b)
    }
}

/// `K[U_2d, V_2d]`; pairs are `(u_{2i-1}, u_{2i})` then `(v_{2i-1}, v_{2i})`.
#[derive(Debug, Clone, Copy)]
pub struct UvPolynomial {
    pub d: usize,
}

impl Graded for UvPolynomial {
    type Mono = CommMonomial;
    type Elem = CommPoly;

    fn name(&self) -> &'static str {
        "uv"
    }
    fn pairs(&self) -> usize {
        2 * self.d
    }
    fn basis(&self, c: &Component) -> Vec<CommMonomial> {
        monomials_with(&c.pair_degrees, c.weight)
    }
    fn component_of(&self, m: &CommMonomial) -> Component {
        Component::of_letters(m.exponents())
    }
    fn derive_mono(&self, m: &CommMonomial) -> LinComb<CommMonomial> {
        from_derive_list(m.derive())
    }
    fn to_elem(&self, lc: LinComb<CommMonomial>) -> CommPoly {
        CommPoly::from_lincomb(VarAlphabet::uv(self.d), lc)
    }
    fn coords<'a>(&self, e: &'a CommPoly) -> &'a LinComb<CommMonomial> {
        e.terms()
    }
    fn render(&self, e: &CommPoly) -> String {
        e.render()
    }
    fn mul(&self, a: &CommPoly, b: &CommPoly) -> Result<CommPoly> {
        a.try_mul(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetaPart {
    Full,
    /// Only the commutator ideal `F'`.
    CommutatorIdeal,
}

/// The free metabelian algebra `F_2d`, or its commutator ideal.
#[derive(Debug, Clone, Copy)]
pub struct Metabelian {
    pub d: usize,
    pub part: MetaPart,
}

impl Metabelian {
    pub fn full(d: usize) -> Self {
        Metabelian { d, part: MetaPart::Full }
    }

    pub fn ideal(d: usize) -> Self {
        Metabelian {
            d,
            part: MetaPart::CommutatorIdeal,
        }
    }
}

fn sub_multisets(bound: &[u32], from: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; bound.len()]];
    for k in from..bound.len() {
        let mut next = Vec::new();
        for v in &out {
            for e in 0..=bound[k] {
                let mut w = v.clone();
                w[k] = e;
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Commutator basis terms with the given letter counts.
pub fn commutator_terms(letters: &[u32]) -> Vec<CommTerm> {
    let n = letters.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if letters[i] == 0 || letters[j] == 0 {
                continue;
            }
            let mut rest = letters.to_vec();
            rest[i] -= 1;
            rest[j] -= 1;
            for t in sub_multisets(&rest, j) {
                let exps: Vec<u32> = rest.iter().zip(&t).map(|(r, x)| r - x).collect();
                let mut tail = Vec::new();
                for (k, &e) in t.iter().enumerate() {
                    tail.extend(std::iter::repeat_n(k, e as usize));
                }
                out.push(CommTerm {
                    exps: CommMonomial::from_exponents(exps),
                    head: (i, j),
                    tail,
                });
            }
        }
    }
    out
}

impl Graded for Metabelian {
    type Mono = MetaMonomial;
    type Elem = MetaElement;

    fn name(&self) -> &'static str {
        match self.part {
            MetaPart::Full => "meta",
            MetaPart::CommutatorIdeal => "meta-ideal",
        }
    }
    fn pairs(&self) -> usize {
        self.d
    }
    fn basis(&self, c: &Component) -> Vec<MetaMonomial> {
        let mut out = Vec::new();
        for m in monomials_with(&c.pair_degrees, c.weight) {
            out.extend(commutator_terms(m.exponents()).into_iter().map(MetaMonomial::Comm));
            if self.part == MetaPart::Full {
                out.push(MetaMonomial::Pure(m));
            }
        }
        out.sort();
        out
    }
    fn component_of(&self, m: &MetaMonomial) -> Component {
        Component::of_letters(&m.letters())
    }
    fn derive_mono(&self, m: &MetaMonomial) -> LinComb<MetaMonomial> {
        meta_derive(&MetaElement::from_monomial(self.d, m.clone(), Rational::one()))
            .terms()
            .clone()
    }
    fn to_elem(&self, lc: LinComb<MetaMonomial>) -> MetaElement {
        MetaElement::from_lincomb(self.d, lc)
    }
    fn coords<'a>(&self, e: &'a MetaElement) -> &'a LinComb<MetaMonomial> {
        e.terms()
    }
    fn render(&self, e: &MetaElement) -> String {
        e.render()
    }
    fn mul(&self, a: &MetaElement, b: &MetaElement) -> Result<MetaElement> {
        meta_mul(a, b)
    }
}

/// The relatively free algebra of the Grassmann variety.
#[derive(Debug, Clone, Copy)]
pub struct Grassmann {
    pub d: usize,
}

fn subsets_of_support(letters: &[u32]) -> Vec<Vec<usize>> {
    let support: Vec<usize> = (0..letters.len()).filter(|&k| letters[k] > 0).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << support.len()) {
        if mask.count_ones() % 2 == 0 {
            out.push(support.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &p)| p).collect());
        }
    }
    out
}

impl Graded for Grassmann {
    type Mono = GrassMonomial;
    type Elem = GrassElement;

    fn name(&self) -> &'static str {
        "grass"
    }
    fn pairs(&self) -> usize {
        self.d
    }
    fn basis(&self, c: &Component) -> Vec<GrassMonomial> {
        let mut out = Vec::new();
        for m in monomials_with(&c.pair_degrees, c.weight) {
            for block in subsets_of_support(m.exponents()) {
                let mut word = m.clone();
                for &p in &block {
                    word = word.with_exp(p, word.exponents()[p] - 1);
                }
                out.push(GrassMonomial { word, block });
            }
        }
        out.sort();
        out
    }
    fn component_of(&self, m: &GrassMonomial) -> Component {
        Component::of_letters(&m.letters())
    }
    fn derive_mono(&self, m: &GrassMonomial) -> LinComb<GrassMonomial> {
        grass_derive(&GrassElement::from_monomial(self.d, m.clone(), Rational::one()))
            .terms()
            .clone()
    }
    fn to_elem(&self, lc: LinComb<GrassMonomial>) -> GrassElement {
        GrassElement::from_lincomb(self.d, lc)
    }
    fn coords<'a>(&self, e: &'a GrassElement) -> &'a LinComb<GrassMonomial> {
        e.terms()
    }
    fn render(&self, e: &GrassElement) -> String {
        e.render()
    }
    fn mul(&self, a: &GrassElement, b: &GrassElement) -> Result<GrassElement> {
        grass_mul(a, b)
    }
}

/// The free `K[U,V]`-module on `a_1..a_2d`; `a_k`, `u_k`, `v_k` all count as
/// letter `k` for the grading.
#[derive(Debug, Clone, Copy)]
pub struct WreathModule {
    pub d: usize,
}

fn split_uv(letters: &[u32]) -> Vec<CommMonomial> {
    let n = letters.len();
    let mut out = vec![vec![0u32; 2 * n]];
    for (k, &l) in letters.iter().enumerate() {
        let mut next = Vec::new();
        for e in &out {
            for s in 0..=l {
                let mut e = e.clone();
                e[k] = s;
                e[n + k] = l - s;
                next.push(e);
            }
        }
        out = next;
    }
    out.into_iter().map(CommMonomial::from_exponents).collect()
}

impl Graded for WreathModule {
    type Mono = ModMono;
    type Elem = ModuleElement;

    fn name(&self) -> &'static str {
        "wreath"
    }
    fn pairs(&self) -> usize {
        self.d
    }
    fn basis(&self, c: &Component) -> Vec<ModMono> {
        let mut out = Vec::new();
        for m in monomials_with(&c.pair_degrees, c.weight) {
            let e = m.exponents();
            for a in (0..e.len()).filter(|&a| e[a] > 0) {
                let mut rest = e.to_vec();
                rest[a] -= 1;
                out.extend(split_uv(&rest).into_iter().map(|mono| ModMono { a, mono }));
            }
        }
        out.sort();
        out
    }
    fn component_of(&self, m: &ModMono) -> Component {
        Component::of_letters(&m.letters())
    }
    fn derive_mono(&self, m: &ModMono) -> LinComb<ModMono> {
        module_derive(&ModuleElement::from_term(self.d, m.a, m.mono.clone(), Rational::one()))
            .terms()
            .clone()
    }
    fn to_elem(&self, lc: LinComb<ModMono>) -> ModuleElement {
        ModuleElement::from_lincomb(self.d, lc)
    }
    fn coords<'a>(&self, e: &'a ModuleElement) -> &'a LinComb<ModMono> {
        e.terms()
    }
    fn render(&self, e: &ModuleElement) -> String {
        e.render()
    }
}

/// All nonempty components of total degree `n`.
pub fn components<A: Graded>(alg: &A, n: u32) -> Vec<Component> {
    let mut out = Vec::new();
    for pd in pair_degree_vectors(alg.pairs(), n) {
        for w in 0..=n {
            let c = Component::new(pd.clone(), w);
            if !alg.basis(&c).is_empty() {
                out.push(c);
            }
        }
    }
    out
}

pub fn component_basis<A: Graded>(alg: &A, c: &Component) -> Result<Vec<A::Mono>> {
    if c.pair_degrees.len() != alg.pairs() {
        return Err(Error::DimensionMismatch {
            expected: alg.pairs(),
            found: c.pair_degrees.len(),
        });
    }
    if c.weight > c.degree() {
        return Err(Error::InvalidArgument(format!("weight exceeds degree in {c}")));
    }
    Ok(alg.basis(c))
}

fn index_of<M: Ord + Clone>(basis: &[M]) -> BTreeMap<M, usize> {
    basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Coordinates of `lc` in a basis index; fails on a monomial outside it.
fn coordinates<M: Ord + Clone>(lc: &LinComb<M>, index: &BTreeMap<M, usize>) -> Result<SparseVec> {
    lc.iter()
        .map(|(m, c)| {
            index
                .get(m)
                .map(|&i| (i, c.clone()))
                .ok_or_else(|| Error::NotHomogeneous("term outside the component".into()))
        })
        .collect()
}

/// Matrix of the derivation from `c` to its target component. Column `k`
/// holds the coordinates of the derivative of `basis[k]`.
pub fn derivation_matrix<A: Graded>(alg: &A, c: &Component) -> Result<QMatrix> {
    let source = component_basis(alg, c)?;
    let Some(t) = c.target() else {
        return Ok(QMatrix::zeros(0, source.len()));
    };
    let target = alg.basis(&t);
    let index = index_of(&target);
    let cols: Vec<SparseVec> = source
        .iter()
        .map(|m| coordinates(&alg.derive_mono(m), &index))
        .collect::<Result<_>>()?;
    QMatrix::from_sparse_columns(target.len(), &cols)
}

/// Kernel of the derivation on `c` as coordinate vectors in `component_basis`.
pub fn kernel_vectors<A: Graded>(alg: &A, c: &Component) -> Result<(Vec<A::Mono>, Vec<SparseVec>)> {
    let basis = component_basis(alg, c)?;
    let m = derivation_matrix(alg, c)?;
    let ker = nullspace(&m).iter().map(|v| to_sparse(v)).collect();
    Ok((basis, ker))
}

fn vector_to_elem<A: Graded>(alg: &A, basis: &[A::Mono], v: &SparseVec) -> A::Elem {
    alg.to_elem(v.iter().map(|(&i, c)| (basis[i].clone(), c.clone())).collect())
}

pub fn kernel_basis<A: Graded>(alg: &A, c: &Component) -> Result<Vec<A::Elem>> {
    let (basis, ker) = kernel_vectors(alg, c)?;
    Ok(ker.iter().map(|v| vector_to_elem(alg, &basis, v)).collect())
}

/// Kernel bases of every component of total degree `n`, ordered by component.
pub fn kernel_by_degree<A: Graded>(alg: &A, n: u32) -> Result<Vec<(Component, Vec<A::Elem>)>> {
    with_pool(|| {
        components(alg, n)
            .into_par_iter()
            .map(|c| kernel_basis(alg, &c).map(|k| (c, k)))
            .collect()
    })
}

/// Runs `f` on a pool capped by `NOWICKI_THREADS` when that is set.
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("NOWICKI_THREADS").ok().and_then(|s| s.parse::<usize>().ok());
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// A spanning element with a human-readable origin.
#[derive(Debug, Clone)]
pub struct Labeled<M: Ord> {
    pub label: String,
    pub terms: LinComb<M>,
}

/// Spanning candidates grouped by component.
pub type SpanningSet<M> = BTreeMap<Component, Vec<Labeled<M>>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpanReport {
    pub component: Component,
    pub kernel_dim: usize,
    pub span_dim: usize,
    pub missing_witnesses: Vec<String>,
    pub relation_witnesses: Vec<String>,
}

impl SpanReport {
    pub fn verified(&self) -> bool {
        self.kernel_dim == self.span_dim && self.missing_witnesses.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanMode {
    /// All products of candidates up to the degree bound.
    Products,
    /// The candidates themselves.
    Linear,
}

const MAX_RELATIONS: usize = 3;

fn render_relation<M: Ord>(dep: &SparseVec, labels: &[&Labeled<M>]) -> String {
    let terms = dep.iter().map(|(&i, c)| (c.clone(), format!("({})", labels[i].label)));
    format!("{} = 0", crate::lincomb::render_terms(terms))
}

/// Splits `e` into homogeneous parts.
pub fn homogeneous_parts<A: Graded>(alg: &A, e: &A::Elem) -> BTreeMap<Component, LinComb<A::Mono>> {
    let mut out: BTreeMap<Component, LinComb<A::Mono>> = BTreeMap::new();
    for (m, c) in alg.coords(e) {
        out.entry(alg.component_of(m)).or_default().add_term(m.clone(), c.clone());
    }
    out
}

/// Errors unless every candidate is a constant.
pub fn check_constants<A: Graded>(alg: &A, gens: &[(String, A::Elem)]) -> Result<()> {
    for (name, g) in gens {
        let dg = alg.derive(g);
        if !alg.coords(&dg).is_zero() {
            return Err(Error::NotConstant {
                name: name.clone(),
                derivative: alg.render(&dg),
            });
        }
    }
    Ok(())
}

/// Compares each component's kernel with the span of `spanning` there.
pub fn compare<A: Graded>(alg: &A, spanning: &SpanningSet<A::Mono>, max_degree: u32) -> Result<Vec<SpanReport>> {
    let comps: Vec<Component> = (1..=max_degree).flat_map(|n| components(alg, n)).collect();
    with_pool(|| {
        comps
            .into_par_iter()
            .map(|c| {
                let (basis, ker) = kernel_vectors(alg, &c)?;
                let index = index_of(&basis);
                let mut space = RowSpace::with_tracking();
                let mut relations = Vec::new();
                let empty = Vec::new();
                let cands: Vec<&Labeled<A::Mono>> = spanning.get(&c).unwrap_or(&empty).iter().collect();
                for cand in &cands {
                    if let Err(dep) = space.insert(&coordinates(&cand.terms, &index)?) {
                        if relations.len() < MAX_RELATIONS {
                            relations.push(render_relation(&dep, &cands));
                        }
                    }
                }
                let missing = ker
                    .iter()
                    .filter(|v| !space.contains(v))
                    .map(|v| alg.render(&vector_to_elem(alg, &basis, v)))
                    .collect();
                Ok(SpanReport {
                    component: c,
                    kernel_dim: ker.len(),
                    span_dim: space.dim(),
                    missing_witnesses: missing,
                    relation_witnesses: relations,
                })
            })
            .collect()
    })
}

/// Independent products of candidates, by component, up to `max_degree`.
///
/// Every word in the candidates is `g * w'` for a shorter word `w'`, so it is
/// enough to multiply each candidate by a basis of the span found at lower
/// degree.
pub fn product_span<A: Graded>(alg: &A, gens: &[(String, A::Elem)], max_degree: u32) -> Result<SpanningSet<A::Mono>> {
    let mut parts: Vec<(Component, Labeled<A::Mono>)> = Vec::new();
    for (name, g) in gens {
        for (c, terms) in homogeneous_parts(alg, g) {
            if c.degree() >= 1 && c.degree() <= max_degree {
                parts.push((c, Labeled { label: name.clone(), terms }));
            }
        }
    }
    let mut found: SpanningSet<A::Mono> = BTreeMap::new();
    let mut spaces: BTreeMap<Component, (BTreeMap<A::Mono, usize>, RowSpace)> = BTreeMap::new();
    for n in 1..=max_degree {
        let mut level: Vec<(Component, Labeled<A::Mono>)> = Vec::new();
        for (c, g) in &parts {
            let k = c.degree();
            if k == n {
                level.push((c.clone(), g.clone()));
            } else if k < n {
                let gel = alg.to_elem(g.terms.clone());
                for (c2, items) in found.iter().filter(|(c2, _)| c2.degree() == n - k) {
                    let target = c.add(c2);
                    let prods: Vec<Result<Labeled<A::Mono>>> = items
                        .par_iter()
                        .map(|b| {
                            let p = alg.mul(&gel, &alg.to_elem(b.terms.clone()))?;
                            Ok(Labeled {
                                label: format!("{}*{}", g.label, b.label),
                                terms: alg.coords(&p).clone(),
                            })
                        })
                        .collect();
                    for p in prods {
                        level.push((target.clone(), p?));
                    }
                }
            }
        }
        for (c, item) in level {
            if item.terms.is_zero() {
                continue;
            }
            let (index, space) = spaces
                .entry(c.clone())
                .or_insert_with(|| (index_of(&alg.basis(&c)), RowSpace::new()));
            if space.insert(&coordinates(&item.terms, index)?).is_ok() {
                found.entry(c).or_default().push(item);
            }
        }
    }
    Ok(found)
}

/// Candidates grouped by component without products.
pub fn linear_span<A: Graded>(alg: &A, gens: &[(String, A::Elem)]) -> SpanningSet<A::Mono> {
    let mut out: SpanningSet<A::Mono> = BTreeMap::new();
    for (name, g) in gens {
        for (c, terms) in homogeneous_parts(alg, g) {
            out.entry(c).or_default().push(Labeled {
                label: name.clone(),
                terms,
            });
        }
    }
    out
}

/// Generation certificate for every component of degree `1..=max_degree`.
pub fn span_check<A: Graded>(alg: &A, gens: &[(String, A::Elem)], max_degree: u32, mode: SpanMode) -> Result<Vec<SpanReport>> {
    check_constants(alg, gens)?;
    let spanning = match mode {
        SpanMode::Products => with_pool(|| product_span(alg, gens, max_degree))?,
        SpanMode::Linear => linear_span(alg, gens),
    };
    compare(alg, &spanning, max_degree)
}

/// Module-mode spanning set inside `F'`: each candidate acted on by the
/// canonical monomials of `K[U,V]` constants.
pub fn module_span(d: usize, gens: &[(String, MetaElement)], max_degree: u32) -> Result<SpanningSet<MetaMonomial>> {
    let alg = Metabelian::ideal(d);
    let mut out: SpanningSet<MetaMonomial> = BTreeMap::new();
    for (name, g) in gens {
        for (c, terms) in homogeneous_parts(&alg, g) {
            let gel = MetaElement::from_lincomb(d, terms);
            let room = max_degree.saturating_sub(c.degree());
            if c.degree() > max_degree {
                continue;
            }
            for deg in 0..=room {
                for pd in pair_degree_vectors(2 * d, deg) {
                    for w in 0..=deg {
                        for cm in canonical_basis(d, &pd, w) {
                            let p = cm.expand(d)?;
                            let mut acted = MetaElement::zero(d);
                            for (m, x) in p.iter() {
                                acted = acted.add(&act_uv(&gel, m)?.scale(x));
                            }
                            if acted.is_zero() {
                                continue;
                            }
                            let merged: Vec<u32> = (0..d).map(|i| pd[i] + pd[d + i]).collect();
                            let target = c.add(&Component::new(merged, w));
                            let label = if deg == 0 { name.clone() } else { format!("{name}.{cm}") };
                            out.entry(target).or_default().push(Labeled {
                                label,
                                terms: acted.terms().clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Spanning set in the wreath module: each module element times the canonical
/// monomials of the `K[U,V]` constants.
pub fn wreath_span(d: usize, gens: &[(String, ModuleElement)], max_degree: u32) -> Result<SpanningSet<ModMono>> {
    let alg = WreathModule { d };
    let mut out: SpanningSet<ModMono> = BTreeMap::new();
    for (name, g) in gens {
        for (c, terms) in homogeneous_parts(&alg, g) {
            if c.degree() > max_degree {
                continue;
            }
            let gel = ModuleElement::from_lincomb(d, terms);
            for deg in 0..=max_degree - c.degree() {
                for pd in pair_degree_vectors(2 * d, deg) {
                    for w in 0..=deg {
                        for cm in canonical_basis(d, &pd, w) {
                            let acted = gel.times(&cm.expand(d)?);
                            let merged: Vec<u32> = (0..d).map(|i| pd[i] + pd[d + i]).collect();
                            let label = if deg == 0 { name.clone() } else { format!("{name}.{cm}") };
                            out.entry(c.add(&Component::new(merged, w))).or_default().push(Labeled {
                                label,
                                terms: acted.terms().clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Module-mode certificate over the components of `F'`.
pub fn module_span_check(d: usize, gens: &[(String, MetaElement)], max_degree: u32) -> Result<Vec<SpanReport>> {
    let alg = Metabelian::ideal(d);
    check_constants(&alg, gens)?;
    for (name, g) in gens {
        if !g.is_commutator() {
            return Err(Error::NotInCommutatorIdeal(name.clone()));
        }
    }
    let spanning = module_span(d, gens, max_degree)?;
    compare(&alg, &spanning, max_degree)
}

/// Coordinates of `e` in the basis of `c`.
pub fn coordinates_in<A: Graded>(alg: &A, e: &A::Elem, c: &Component) -> Result<SparseVec> {
    coordinates(alg.coords(e), &index_of(&alg.basis(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::commpoly::nowicki_generators;
    use crate::grassmann::grassmann_generators;
    use crate::linalg::int;
    use crate::metabelian::{comm, x};

    fn comp(pd: &[u32], w: u32) -> Component {
        Component::new(pd.to_vec(), w)
    }

    fn kernel_dim_of_degree<A: Graded>(alg: &A, n: u32) -> usize {
        kernel_by_degree(alg, n).unwrap().iter().map(|(_, k)| k.len()).sum()
    }

    fn basis_size_of_degree<A: Graded>(alg: &A, n: u32) -> usize {
        components(alg, n).iter().map(|c| alg.basis(c).len()).sum()
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis_size_of_degree(&Commutative { d: 2 }, 1), 4);
        assert_eq!(basis_size_of_degree(&Commutative { d: 2 }, 2), 10);
        assert_eq!(basis_size_of_degree(&Metabelian::full(2), 2), 16);
        assert_eq!(basis_size_of_degree(&Metabelian::ideal(2), 2), 6);
        // x^a y^b [x,y]^c with c <= 1
        assert_eq!(basis_size_of_degree(&Grassmann { d: 1 }, 3), 4 + 2);
        // a_k times a monomial of degree n-1 in 4 variables
        assert_eq!(basis_size_of_degree(&WreathModule { d: 1 }, 2), 2 * 4);
    }

    #[test]
    fn matrix_example() {
        let m = derivation_matrix(&Commutative { d: 1 }, &comp(&[1], 1)).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert_eq!(m.get(0, 0), int(1));
        let m0 = derivation_matrix(&Commutative { d: 1 }, &comp(&[1], 0)).unwrap();
        assert_eq!(m0.rows(), 0);
        // [x4,x2] goes to [x3,x2] + [x4,x1]
        let alg = Metabelian::full(2);
        let c = comp(&[1, 1], 2);
        let basis = alg.basis(&c);
        let m = derivation_matrix(&alg, &c).unwrap();
        let col = basis.iter().position(|b| *b == comm(2, &[4, 2]).terms().iter().next().unwrap().0.clone()).unwrap();
        let nnz = (0..m.rows()).filter(|&r| !m.get(r, col).is_zero()).count();
        assert_eq!(nnz, 2);
    }

    #[test]
    fn kernel_examples() {
        let alg = Commutative { d: 2 };
        let k1: Vec<String> = kernel_by_degree(&alg, 1)
            .unwrap()
            .into_iter()
            .flat_map(|(_, k)| k.into_iter().map(|e| e.render()))
            .collect();
        assert_eq!(k1.len(), 2);
        assert_eq!(kernel_dim_of_degree(&alg, 2), 4);
        assert_eq!(kernel_dim_of_degree(&Metabelian::full(2), 2), 8);
        assert_eq!(kernel_dim_of_degree(&Metabelian::ideal(2), 2), 4);
        for n in 2..=5 {
            assert_eq!(kernel_dim_of_degree(&Grassmann { d: 1 }, n), 2, "n={n}");
        }
    }

    #[test]
    fn kernel_elements_are_constants() {
        let alg = Grassmann { d: 2 };
        for n in 1..=3 {
            for (_, ker) in kernel_by_degree(&alg, n).unwrap() {
                for e in ker {
                    assert!(grass_derive(&e).is_zero());
                }
            }
        }
    }

    #[test]
    fn matrix_composition() {
        let alg = Metabelian::full(2);
        let c = comp(&[2, 1], 2);
        let m1 = derivation_matrix(&alg, &c).unwrap();
        let m2 = derivation_matrix(&alg, &c.target().unwrap()).unwrap();
        let sq = m2.mul(&m1).unwrap();
        let basis = alg.basis(&c);
        let t2 = index_of(&alg.basis(&comp(&[2, 1], 0)));
        for (k, b) in basis.iter().enumerate() {
            let e = alg.to_elem(LinComb::monomial(b.clone()));
            let dd = alg.derive(&alg.derive(&e));
            let v = coordinates(alg.coords(&dd), &t2).unwrap();
            for r in 0..sq.rows() {
                assert_eq!(sq.get(r, k), v.get(&r).cloned().unwrap_or_default());
            }
        }
    }

    #[test]
    fn nowicki_generation_small() {
        let alg = Commutative { d: 2 };
        let gens: Vec<(String, CommPoly)> = nowicki_generators(2).into_iter().map(|g| (g.render(), g)).collect();
        let reports = span_check(&alg, &gens, 4, SpanMode::Products).unwrap();
        assert!(reports.iter().all(SpanReport::verified));
    }

    #[test]
    fn non_constant_candidate_is_rejected() {
        let alg = Metabelian::full(2);
        let gens = vec![("x2".to_string(), x(2, 2))];
        let err = span_check(&alg, &gens, 2, SpanMode::Products).unwrap_err();
        assert!(err.to_string().contains("x2"));
    }

    #[test]
    fn grassmann_generation_small() {
        let alg = Grassmann { d: 2 };
        let gens: Vec<(String, GrassElement)> = grassmann_generators(2).into_iter().map(|(g, e)| (g.to_string(), e)).collect();
        let reports = span_check(&alg, &gens, 3, SpanMode::Products).unwrap();
        let bad: Vec<_> = reports.iter().filter(|r| !r.verified()).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn adding_constants_never_shrinks_span() {
        let alg = Commutative { d: 2 };
        let mut gens: Vec<(String, CommPoly)> = nowicki_generators(2).into_iter().map(|g| (g.render(), g)).collect();
        gens.truncate(2);
        let a = span_check(&alg, &gens, 3, SpanMode::Products).unwrap();
        let extra = nowicki_generators(2).pop().unwrap();
        gens.push(("det".into(), extra));
        let b = span_check(&alg, &gens, 3, SpanMode::Products).unwrap();
        for (r, s) in a.iter().zip(&b) {
            assert!(r.span_dim <= s.span_dim);
        }
    }
}

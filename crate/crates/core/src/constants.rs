//! Generators of the constants of `K[U,V]`, their relations, the canonical
//! basis built from non-crossing intervals, and the module generators of the
//! constants in the commutator ideal.
//!
//! All indices in this module are 1-based, matching the generator names:
//! `u(j) = u_{2j-1}`, `v(i) = v_{2i-1}`, `alpha(p,q) = u_{2p-1}u_{2q} - u_{2p}u_{2q-1}`,
//! `beta` is the same determinant in `v`, `gamma(p,q) = u_{2p-1}v_{2q} - u_{2p}v_{2q-1}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::commpoly::{CommMonomial, CommPoly, VarAlphabet};
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::linalg::{self, int, Rational, SparseVec};
use crate::metabelian::{comm, meta_mul, x, MetaElement};
use crate::wreath::ModuleElement;

/// Generator of the constants of `K[U,V]`. The variant order is the factor
/// order of canonical monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstGen {
    Vodd(usize),
    Beta(usize, usize),
    Gamma(usize, usize),
    Alpha(usize, usize),
    Uodd(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Point(usize),
    /// Open interval.
    Interval(usize, usize),
}

impl ConstGen {
    pub fn geometry(&self, d: usize) -> Geometry {
        match *self {
            ConstGen::Uodd(j) => Geometry::Point(j),
            ConstGen::Vodd(i) => Geometry::Point(i + d),
            ConstGen::Alpha(p, q) => Geometry::Interval(p, q),
            ConstGen::Beta(p, q) => Geometry::Interval(p + d, q + d),
            ConstGen::Gamma(p, q) => Geometry::Interval(p, q + d),
        }
    }

    pub fn is_interval(&self) -> bool {
        !matches!(self, ConstGen::Uodd(_) | ConstGen::Vodd(_))
    }

    pub fn check(&self, d: usize) -> Result<()> {
        let ok = |k: usize| (1..=d).contains(&k);
        let valid = match *self {
            ConstGen::Uodd(j) | ConstGen::Vodd(j) => ok(j),
            ConstGen::Alpha(p, q) | ConstGen::Beta(p, q) | ConstGen::Gamma(p, q) => ok(p) && ok(q),
        };
        if valid {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("{self} with d={d}")))
        }
    }

    /// Degrees in the 2d derivation pairs of `UV` (u-pairs, then v-pairs).
    pub fn pair_degrees(&self, d: usize) -> Vec<u32> {
        let mut pd = vec![0u32; 2 * d];
        match *self {
            ConstGen::Uodd(j) => pd[j - 1] += 1,
            ConstGen::Vodd(i) => pd[d + i - 1] += 1,
            ConstGen::Alpha(p, q) => {
                pd[p - 1] += 1;
                pd[q - 1] += 1;
            }
            ConstGen::Beta(p, q) => {
                pd[d + p - 1] += 1;
                pd[d + q - 1] += 1;
            }
            ConstGen::Gamma(p, q) => {
                pd[p - 1] += 1;
                pd[d + q - 1] += 1;
            }
        }
        pd
    }

    pub fn weight(&self) -> u32 {
        u32::from(self.is_interval())
    }

    pub fn degree(&self) -> u32 {
        if self.is_interval() {
            2
        } else {
            1
        }
    }

    pub fn expand(&self, d: usize) -> Result<CommPoly> {
        self.check(d)?;
        let a = VarAlphabet::uv(d);
        let u = |k: usize| CommPoly::var(a, a.u_slot(k));
        let v = |k: usize| CommPoly::var(a, a.v_slot(k));
        let det = |a1: CommPoly, b2: CommPoly, a2: CommPoly, b1: CommPoly| &(&a1 * &b2) - &(&a2 * &b1);
        Ok(match *self {
            ConstGen::Uodd(j) => u(2 * j - 1),
            ConstGen::Vodd(i) => v(2 * i - 1),
            ConstGen::Alpha(p, q) => det(u(2 * p - 1), u(2 * q), u(2 * p), u(2 * q - 1)),
            ConstGen::Beta(p, q) => det(v(2 * p - 1), v(2 * q), v(2 * p), v(2 * q - 1)),
            ConstGen::Gamma(p, q) => det(u(2 * p - 1), v(2 * q), u(2 * p), v(2 * q - 1)),
        })
    }

    /// All generators for rank `d`, in factor order. Alpha and beta need `p < q`.
    pub fn all(d: usize) -> Vec<ConstGen> {
        let mut out = Vec::new();
        for i in 1..=d {
            out.push(ConstGen::Vodd(i));
            out.push(ConstGen::Uodd(i));
        }
        for p in 1..=d {
            for q in 1..=d {
                if p < q {
                    out.push(ConstGen::Alpha(p, q));
                    out.push(ConstGen::Beta(p, q));
                }
                out.push(ConstGen::Gamma(p, q));
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for ConstGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConstGen::Uodd(j) => write!(f, "u({j})"),
            ConstGen::Vodd(i) => write!(f, "v({i})"),
            ConstGen::Alpha(p, q) => write!(f, "alpha({p},{q})"),
            ConstGen::Beta(p, q) => write!(f, "beta({p},{q})"),
            ConstGen::Gamma(p, q) => write!(f, "gamma({p},{q})"),
        }
    }
}

pub fn intersects(g1: &ConstGen, g2: &ConstGen, d: usize) -> Result<bool> {
    match (g1.geometry(d), g2.geometry(d)) {
        (Geometry::Interval(a, b), Geometry::Interval(c, e)) => {
            let overlap = a.max(c) < b.min(e);
            let nested = (c <= a && b <= e) || (a <= c && e <= b);
            Ok(overlap && !nested)
        }
        _ => Err(Error::KindMismatch(format!("intersects({g1}, {g2}) needs two intervals"))),
    }
}

pub fn covers(g: &ConstGen, p: &ConstGen, d: usize) -> Result<bool> {
    match (g.geometry(d), p.geometry(d)) {
        (Geometry::Interval(a, b), Geometry::Point(x)) => Ok(a < x && x < b),
        _ => Err(Error::KindMismatch(format!("covers({g}, {p}) needs an interval and a point"))),
    }
}

/// Whether two factors may sit together in a canonical monomial.
fn compatible(g: &ConstGen, h: &ConstGen, d: usize) -> bool {
    match (g.is_interval(), h.is_interval()) {
        (true, true) => !intersects(g, h, d).unwrap(),
        (true, false) => !covers(g, h, d).unwrap(),
        (false, true) => !covers(h, g, d).unwrap(),
        (false, false) => true,
    }
}

/// Sorted product of generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalMonomial {
    pub factors: Vec<ConstGen>,
}

impl CanonicalMonomial {
    pub fn new(mut factors: Vec<ConstGen>) -> Self {
        factors.sort();
        CanonicalMonomial { factors }
    }

    pub fn is_canonical(&self, d: usize) -> bool {
        let f = &self.factors;
        (0..f.len()).all(|i| (i + 1..f.len()).all(|j| compatible(&f[i], &f[j], d)))
    }

    pub fn expand(&self, d: usize) -> Result<CommPoly> {
        expand_product(&self.factors, d)
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(ConstGen::degree).sum()
    }
}

impl fmt::Display for CanonicalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("*"))
    }
}

pub fn expand_product(factors: &[ConstGen], d: usize) -> Result<CommPoly> {
    let mut out = CommPoly::one(VarAlphabet::uv(d));
    for g in factors {
        out = out.try_mul(&g.expand(d)?)?;
    }
    Ok(out)
}

/// Canonical monomials with the given pair degrees (length 2d over `UV`) and
/// weight, in increasing order.
pub fn canonical_basis(d: usize, pair_degrees: &[u32], weight: u32) -> Vec<CanonicalMonomial> {
    assert_eq!(pair_degrees.len(), 2 * d, "pair degree length");
    let gens = ConstGen::all(d);
    let degs: Vec<Vec<u32>> = gens.iter().map(|g| g.pair_degrees(d)).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut left = pair_degrees.to_vec();
    enumerate(d, &gens, &degs, 0, &mut left, weight, &mut chosen, &mut out);
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    d: usize,
    gens: &[ConstGen],
    degs: &[Vec<u32>],
    start: usize,
    left: &mut Vec<u32>,
    weight_left: u32,
    chosen: &mut Vec<ConstGen>,
    out: &mut Vec<CanonicalMonomial>,
) {
    if left.iter().all(|&x| x == 0) {
        if weight_left == 0 {
            out.push(CanonicalMonomial::new(chosen.clone()));
        }
        return;
    }
    for k in start..gens.len() {
        let g = &gens[k];
        if g.weight() > weight_left || degs[k].iter().zip(left.iter()).any(|(a, b)| a > b) {
            continue;
        }
        if !chosen.iter().all(|h| compatible(g, h, d)) {
            continue;
        }
        for (l, a) in left.iter_mut().zip(&degs[k]) {
            *l -= a;
        }
        chosen.push(*g);
        enumerate(d, gens, degs, k, left, weight_left - g.weight(), chosen, out);
        chosen.pop();
        for (l, a) in left.iter_mut().zip(&degs[k]) {
            *l += a;
        }
    }
}

/// Every pair-degree vector over `n` pairs with total `deg`.
pub fn pair_degree_vectors(n: usize, deg: u32) -> Vec<Vec<u32>> {
    crate::commpoly::monomials_of_degree(n, deg)
        .into_iter()
        .map(|m| m.exponents().to_vec())
        .collect()
}

/// Coordinates of `p` with respect to the monomial index `index`.
fn coords(p: &CommPoly, index: &BTreeMap<CommMonomial, usize>) -> Result<SparseVec> {
    p.iter()
        .map(|(m, c)| {
            index
                .get(m)
                .map(|&i| (i, c.clone()))
                .ok_or_else(|| Error::Internal(format!("monomial {m:?} outside component")))
        })
        .collect()
}

/// Expresses a product of generators in the canonical basis of its component.
pub fn straighten(product: &[ConstGen], d: usize) -> Result<LinComb<CanonicalMonomial>> {
    for g in product {
        g.check(d)?;
    }
    let target = expand_product(product, d)?;
    if target.is_zero() {
        return Ok(LinComb::new());
    }
    let mut pd = vec![0u32; 2 * d];
    let mut w = 0;
    for g in product {
        for (a, b) in pd.iter_mut().zip(g.pair_degrees(d)) {
            *a += b;
        }
        w += g.weight();
    }
    let basis = canonical_basis(d, &pd, w);
    let index: BTreeMap<CommMonomial, usize> = crate::commpoly::monomials_with(&pd, w)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let n = index.len();
    let cols: Vec<Vec<Rational>> = basis
        .iter()
        .map(|b| Ok(linalg::to_dense(&coords(&b.expand(d)?, &index)?, n)))
        .collect::<Result<_>>()?;
    let t = linalg::to_dense(&coords(&target, &index)?, n);
    let sol = linalg::span_membership(&cols, &t)?
        .ok_or_else(|| Error::Internal(format!("product {product:?} is not in the canonical span")))?;
    Ok(basis.into_iter().zip(sol).filter(|(_, c)| !c.is_zero()).collect())
}

/// Generators of the module of constants in the wreath module, and of the
/// submodule of commutator images. `a(i) = a_{2i-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleGen {
    A(usize),
    W(usize, usize),
    G1(usize),
    G2(usize, usize),
    G3(usize, usize),
    G4(usize, usize, usize),
    G5(usize, usize, usize, usize),
    G6(usize, usize, usize),
    G7(usize, usize, usize, usize),
    G8(usize, usize, usize),
}

impl fmt::Display for ModuleGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModuleGen::A(i) => write!(f, "a({i})"),
            ModuleGen::W(p, q) => write!(f, "w({p},{q})"),
            ModuleGen::G1(i) => write!(f, "g1({i})"),
            ModuleGen::G2(i, j) => write!(f, "g2({i},{j})"),
            ModuleGen::G3(i, j) => write!(f, "g3({i},{j})"),
            ModuleGen::G4(i, p, q) => write!(f, "g4({i},{p},{q})"),
            ModuleGen::G5(i, j, p, q) => write!(f, "g5({i},{j},{p},{q})"),
            ModuleGen::G6(i, j, k) => write!(f, "g6({i},{j},{k})"),
            ModuleGen::G7(i, j, k, l) => write!(f, "g7({i},{j},{k},{l})"),
            ModuleGen::G8(i, j, k) => write!(f, "g8({i},{j},{k})"),
        }
    }
}

fn a_odd(d: usize, i: usize) -> ModuleElement {
    ModuleElement::generator(d, 2 * i - 2)
}

fn a_even(d: usize, i: usize) -> ModuleElement {
    ModuleElement::generator(d, 2 * i - 1)
}

fn v_poly(d: usize, k: usize) -> CommPoly {
    let a = VarAlphabet::uv(d);
    CommPoly::var(a, a.v_slot(k))
}

/// `w_pq = a_{2p-1} v_{2q} - a_{2p} v_{2q-1}`, the determinant that is
/// actually killed by the derivation.
pub fn w(d: usize, p: usize, q: usize) -> ModuleElement {
    a_odd(d, p)
        .times(&v_poly(d, 2 * q))
        .sub(&a_even(d, p).times(&v_poly(d, 2 * q - 1)))
}

/// The printed variant `a_{2p-1} v_{2q} - a_{2q} v_{2p-1}`; only a constant for `p = q`.
pub fn w_printed(d: usize, p: usize, q: usize) -> ModuleElement {
    a_odd(d, p)
        .times(&v_poly(d, 2 * q))
        .sub(&a_even(d, q).times(&v_poly(d, 2 * p - 1)))
}

fn cg(g: ConstGen, d: usize) -> CommPoly {
    g.expand(d).expect("index checked by caller")
}

impl ModuleGen {
    fn indices(&self) -> Vec<usize> {
        match *self {
            ModuleGen::A(i) | ModuleGen::G1(i) => vec![i],
            ModuleGen::W(a, b) | ModuleGen::G2(a, b) | ModuleGen::G3(a, b) => vec![a, b],
            ModuleGen::G4(a, b, c) | ModuleGen::G6(a, b, c) | ModuleGen::G8(a, b, c) => vec![a, b, c],
            ModuleGen::G5(a, b, c, e) | ModuleGen::G7(a, b, c, e) => vec![a, b, c, e],
        }
    }

    fn check(&self, d: usize) -> Result<()> {
        if self.indices().iter().all(|k| (1..=d).contains(k)) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("{self} with d={d}")))
        }
    }

    pub fn expand(&self, d: usize) -> Result<ModuleElement> {
        use ConstGen::*;
        self.check(d)?;
        let vo = |i: usize| cg(Vodd(i), d);
        Ok(match *self {
            ModuleGen::A(i) => a_odd(d, i),
            ModuleGen::W(p, q) => w(d, p, q),
            ModuleGen::G1(i) => w(d, i, i),
            ModuleGen::G2(i, j) => w(d, i, j).add(&w(d, j, i)),
            ModuleGen::G3(i, j) => a_odd(d, i).times(&vo(j)).sub(&a_odd(d, j).times(&vo(i))),
            ModuleGen::G4(i, p, q) => a_odd(d, i)
                .times(&cg(Beta(p, q), d))
                .sub(&w(d, p, q).times(&vo(i))),
            ModuleGen::G5(i, j, p, q) => w(d, i, j)
                .times(&cg(Beta(p, q), d))
                .sub(&w(d, p, q).times(&cg(Beta(i, j), d))),
            ModuleGen::G6(i, j, k) => a_odd(d, i)
                .times(&cg(Beta(j, k), d))
                .sub(&a_odd(d, j).times(&cg(Beta(i, k), d)))
                .add(&a_odd(d, k).times(&cg(Beta(i, j), d))),
            ModuleGen::G7(i, j, k, l) => w(d, k, l)
                .times(&cg(Gamma(i, j), d))
                .sub(&w(d, j, l).times(&cg(Gamma(i, k), d)))
                .add(&w(d, j, k).times(&cg(Gamma(i, l), d))),
            ModuleGen::G8(i, j, k) => w(d, j, k)
                .times(&cg(Uodd(i), d))
                .sub(&a_odd(d, j).times(&cg(Gamma(i, k), d)))
                .add(&a_odd(d, k).times(&cg(Gamma(i, j), d))),
        })
    }

    /// Name of the matching generator of the constants in F'.
    pub fn ideal_label(&self) -> Option<String> {
        Some(match *self {
            ModuleGen::G1(i) => format!("g1({i})"),
            ModuleGen::G2(i, j) => format!("g3({i},{j})"),
            ModuleGen::G3(i, j) => format!("g2({i},{j})"),
            ModuleGen::G4(i, p, q) => format!("g4({i},{p},{q})"),
            ModuleGen::G5(i, j, p, q) => format!("g6({i},{j},{p},{q})"),
            ModuleGen::G6(i, j, k) => format!("g5({i},{j},{k})"),
            ModuleGen::G7(i, j, k, l) => format!("g7({i},{j},{k},{l})"),
            ModuleGen::G8(i, j, k) => format!("g8({i},{j},{k})"),
            ModuleGen::A(_) | ModuleGen::W(..) => return None,
        })
    }
}

fn o(i: usize) -> usize {
    2 * i - 1
}

fn e(i: usize) -> usize {
    2 * i
}

/// Constants of the commutator ideal, indexed as in [`IdealGen`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdealGen {
    G1(usize),
    G2(usize, usize),
    G3(usize, usize),
    G4(usize, usize, usize),
    G5(usize, usize, usize),
    G6(usize, usize, usize, usize),
    G7(usize, usize, usize, usize),
    G8(usize, usize, usize),
}

impl fmt::Display for IdealGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IdealGen::G1(i) => write!(f, "g1({i})"),
            IdealGen::G2(i, j) => write!(f, "g2({i},{j})"),
            IdealGen::G3(i, j) => write!(f, "g3({i},{j})"),
            IdealGen::G4(i, p, q) => write!(f, "g4({i},{p},{q})"),
            IdealGen::G5(i, j, k) => write!(f, "g5({i},{j},{k})"),
            IdealGen::G6(i, j, p, q) => write!(f, "g6({i},{j},{p},{q})"),
            IdealGen::G7(i, j, k, l) => write!(f, "g7({i},{j},{k},{l})"),
            IdealGen::G8(i, j, k) => write!(f, "g8({i},{j},{k})"),
        }
    }
}

impl IdealGen {
    pub fn element(&self, d: usize) -> MetaElement {
        let c = |ls: &[usize]| comm(d, ls);
        let lx = |k: usize, f: &MetaElement| meta_mul(&x(d, k), f).expect("same rank");
        match *self {
            IdealGen::G1(i) => c(&[o(i), e(i)]),
            IdealGen::G2(i, j) => c(&[o(i), o(j)]),
            IdealGen::G3(i, j) => c(&[o(i), e(j)]).add(&c(&[o(j), e(i)])),
            IdealGen::G4(i, p, q) => c(&[o(i), o(p), e(q)]).sub(&c(&[o(i), e(p), o(q)])),
            IdealGen::G5(i, j, k) => c(&[o(i), o(j), e(k)])
                .sub(&c(&[o(i), o(k), e(j)]))
                .add(&c(&[o(j), o(k), e(i)])),
            IdealGen::G6(i, j, p, q) => c(&[o(i), o(p), e(j), e(q)])
                .add(&c(&[e(i), e(p), o(j), o(q)]))
                .sub(&c(&[o(i), e(p), e(j), o(q)]))
                .sub(&c(&[e(i), o(p), o(j), e(q)])),
            IdealGen::G7(i, j, k, l) => lx(e(i), &c(&[o(j), o(k), e(l)]))
                .add(&lx(o(i), &c(&[e(j), e(k), o(l)])))
                .sub(&lx(e(i), &c(&[o(j), e(k), o(l)])))
                .sub(&lx(o(i), &c(&[e(j), o(k), e(l)]))),
            IdealGen::G8(i, j, k) => lx(e(i), &c(&[o(j), o(k)])).sub(&lx(o(i), &c(&[e(j), o(k)]))),
        }
    }

    /// All generators for rank `d` with their index ranges.
    pub fn all(d: usize) -> Vec<IdealGen> {
        module_index_tuples(d)
            .into_iter()
            .filter_map(|g| g.ideal_gen())
            .collect()
    }
}

impl ModuleGen {
    /// The ideal generator whose image is this module generator.
    pub fn ideal_gen(&self) -> Option<IdealGen> {
        Some(match *self {
            ModuleGen::G1(i) => IdealGen::G1(i),
            ModuleGen::G2(i, j) => IdealGen::G3(i, j),
            ModuleGen::G3(i, j) => IdealGen::G2(i, j),
            ModuleGen::G4(i, p, q) => IdealGen::G4(i, p, q),
            ModuleGen::G5(i, j, p, q) => IdealGen::G6(i, j, p, q),
            ModuleGen::G6(i, j, k) => IdealGen::G5(i, j, k),
            ModuleGen::G7(i, j, k, l) => IdealGen::G7(i, j, k, l),
            ModuleGen::G8(i, j, k) => IdealGen::G8(i, j, k),
            ModuleGen::A(_) | ModuleGen::W(..) => return None,
        })
    }
}

fn module_index_tuples(d: usize) -> Vec<ModuleGen> {
    let mut out = Vec::new();
    let r = 1..=d;
    for i in r.clone() {
        out.push(ModuleGen::G1(i));
    }
    for i in r.clone() {
        for j in i + 1..=d {
            out.push(ModuleGen::G2(i, j));
        }
    }
    for i in r.clone() {
        for j in i + 1..=d {
            out.push(ModuleGen::G3(i, j));
        }
    }
    for i in r.clone() {
        for p in r.clone() {
            for q in p + 1..=d {
                out.push(ModuleGen::G4(i, p, q));
            }
        }
    }
    for i in r.clone() {
        for j in i + 1..=d {
            for p in r.clone() {
                for q in p + 1..=d {
                    out.push(ModuleGen::G5(i, j, p, q));
                }
            }
        }
    }
    for i in r.clone() {
        for j in i + 1..=d {
            for k in j + 1..=d {
                out.push(ModuleGen::G6(i, j, k));
            }
        }
    }
    for i in r.clone() {
        for j in r.clone() {
            for k in j + 1..=d {
                for l in k + 1..=d {
                    out.push(ModuleGen::G7(i, j, k, l));
                }
            }
        }
    }
    for i in r.clone() {
        for j in r.clone() {
            for k in j + 1..=d {
                out.push(ModuleGen::G8(i, j, k));
            }
        }
    }
    out
}

/// Generators of the submodule of commutator images, each with its module
/// expansion and its preimage in F'.
pub fn module_generators(d: usize) -> Vec<(ModuleGen, ModuleElement, MetaElement)> {
    module_index_tuples(d)
        .into_iter()
        .map(|g| {
            let m = g.expand(d).expect("indices in range");
            let pre = g.ideal_gen().expect("g-type generator").element(d);
            (g, m, pre)
        })
        .collect()
}

/// Generators of the algebra of constants of F_{2d}: the odd letters, the
/// lifted determinants, and the commutator-ideal generators.
pub fn algebra_generators(d: usize) -> Vec<MetaElement> {
    let mut out: Vec<MetaElement> = (1..=d).map(|i| x(d, o(i))).collect();
    for i in 1..=d {
        for j in i + 1..=d {
            let l = meta_mul(&x(d, o(i)), &x(d, e(j))).expect("same rank");
            let r = meta_mul(&x(d, e(i)), &x(d, o(j))).expect("same rank");
            out.push(l.sub(&r));
        }
    }
    out.extend(IdealGen::all(d).iter().map(|g| g.element(d)));
    out
}

/// Relation identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationId {
    S1,
    S2,
    S3,
    S4,
    R1,
    R2,
    R3,
    R4,
    R5,
    S,
    R,
}

impl RelationId {
    pub const ALL: [RelationId; 11] = [
        RelationId::S1,
        RelationId::S2,
        RelationId::S3,
        RelationId::S4,
        RelationId::R1,
        RelationId::R2,
        RelationId::R3,
        RelationId::R4,
        RelationId::R5,
        RelationId::S,
        RelationId::R,
    ];

    pub fn arity(&self) -> usize {
        match self {
            RelationId::S1 | RelationId::S2 | RelationId::S3 | RelationId::S4 | RelationId::S => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Which second factor to use in the module relation `S`: the printed one
/// repeats `v_{2j-1}`, the corrected one uses `v_{2k-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SReading {
    Printed,
    #[default]
    Corrected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residual {
    Poly(CommPoly),
    Module(ModuleElement),
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Poly(p) => p.is_zero(),
            Residual::Module(m) => m.is_zero(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Residual::Poly(p) => p.render(),
            Residual::Module(m) => m.render(),
        }
    }
}

fn side_condition(id: RelationId, ix: &[usize], d: usize) -> bool {
    let inr = |k: usize| (1..=d).contains(&k);
    if ix.len() != id.arity() || !ix.iter().all(|&k| inr(k)) {
        return false;
    }
    match (id, ix) {
        (RelationId::S1 | RelationId::S4, [i, j, k]) => i < j && j < k,
        (RelationId::S2, [i, j, _]) => i < j,
        (RelationId::S3 | RelationId::S, [_, j, k]) => j < k,
        (RelationId::R1 | RelationId::R5, [i, j, k, l]) => i < j && j < k && k < l,
        (RelationId::R2, [i, j, k, _]) => i < j && j < k,
        (RelationId::R3, [i, j, k, l]) => i < j && k < l,
        (RelationId::R4 | RelationId::R, [_, j, k, l]) => j < k && k < l,
        _ => false,
    }
}

/// Residual of a relation after full expansion.
pub fn verify_relation(id: RelationId, ix: &[usize], d: usize, reading: SReading) -> Result<Residual> {
    use ConstGen::*;
    if !side_condition(id, ix, d) {
        return Err(Error::SideCondition(format!("{id} with indices {ix:?} and d={d}")));
    }
    let g = |c: ConstGen| cg(c, d);
    let pr = |a: ConstGen, b: ConstGen| &g(a) * &g(b);
    let sum3 = |a: CommPoly, b: CommPoly, c: CommPoly| &(&a - &b) + &c;
    let res = match (id, ix) {
        (RelationId::S1, &[i, j, k]) => Residual::Poly(sum3(
            pr(Uodd(i), Alpha(j, k)),
            pr(Uodd(j), Alpha(i, k)),
            pr(Uodd(k), Alpha(i, j)),
        )),
        (RelationId::S2, &[i, j, k]) => Residual::Poly(sum3(
            pr(Uodd(i), Gamma(j, k)),
            pr(Uodd(j), Gamma(i, k)),
            pr(Vodd(k), Alpha(i, j)),
        )),
        (RelationId::S3, &[i, j, k]) => Residual::Poly(sum3(
            pr(Uodd(i), Beta(j, k)),
            pr(Vodd(j), Gamma(i, k)),
            pr(Vodd(k), Gamma(i, j)),
        )),
        (RelationId::S4, &[i, j, k]) => Residual::Poly(sum3(
            pr(Vodd(i), Beta(j, k)),
            pr(Vodd(j), Beta(i, k)),
            pr(Vodd(k), Beta(i, j)),
        )),
        (RelationId::R1, &[i, j, k, l]) => Residual::Poly(sum3(
            pr(Alpha(i, j), Alpha(k, l)),
            pr(Alpha(i, k), Alpha(j, l)),
            pr(Alpha(i, l), Alpha(j, k)),
        )),
        (RelationId::R2, &[i, j, k, l]) => Residual::Poly(sum3(
            pr(Alpha(i, j), Gamma(k, l)),
            pr(Alpha(i, k), Gamma(j, l)),
            pr(Gamma(i, l), Alpha(j, k)),
        )),
        (RelationId::R3, &[i, j, k, l]) => Residual::Poly(sum3(
            pr(Alpha(i, j), Beta(k, l)),
            pr(Gamma(i, k), Gamma(j, l)),
            pr(Gamma(i, l), Gamma(j, k)),
        )),
        (RelationId::R4, &[i, j, k, l]) => Residual::Poly(sum3(
            pr(Gamma(i, j), Beta(k, l)),
            pr(Gamma(i, k), Beta(j, l)),
            pr(Gamma(i, l), Beta(j, k)),
        )),
        (RelationId::R5, &[i, j, k, l]) => Residual::Poly(sum3(
            pr(Beta(i, j), Beta(k, l)),
            pr(Beta(i, k), Beta(j, l)),
            pr(Beta(i, l), Beta(j, k)),
        )),
        (RelationId::S, &[i, j, k]) => {
            let last = match reading {
                SReading::Printed => j,
                SReading::Corrected => k,
            };
            Residual::Module(
                a_odd(d, i)
                    .times(&g(Beta(j, k)))
                    .sub(&w(d, i, k).times(&g(Vodd(j))))
                    .add(&w(d, i, j).times(&g(Vodd(last)))),
            )
        }
        (RelationId::R, &[i, j, k, l]) => Residual::Module(
            w(d, i, j)
                .times(&g(Beta(k, l)))
                .sub(&w(d, i, k).times(&g(Beta(j, l))))
                .add(&w(d, i, l).times(&g(Beta(j, k)))),
        ),
        _ => unreachable!("arity checked"),
    };
    Ok(res)
}

/// Every admissible index tuple of `id` for rank `d`.
pub fn relation_instances(id: RelationId, d: usize) -> Vec<Vec<usize>> {
    let n = id.arity();
    let mut out = Vec::new();
    let mut cur = vec![1usize; n];
    loop {
        if side_condition(id, &cur, d) {
            out.push(cur.clone());
        }
        let mut p = n;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if cur[p] < d {
                cur[p] += 1;
                for c in cur.iter_mut().skip(p + 1) {
                    *c = 1;
                }
                break;
            }
        }
    }
}

/// Kernel dimension of the derivation on the `UV` component with the given
/// pair degrees and weight, by exact nullspace.
pub fn uv_kernel_dim(pair_degrees: &[u32], weight: u32) -> usize {
    let src = crate::commpoly::monomials_with(pair_degrees, weight);
    if weight == 0 {
        return src.len();
    }
    let tgt: BTreeMap<CommMonomial, usize> = crate::commpoly::monomials_with(pair_degrees, weight - 1)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let cols: Vec<SparseVec> = src
        .iter()
        .map(|m| {
            let mut v = SparseVec::new();
            for (e, dm) in m.derive() {
                let r = tgt[&dm];
                *v.entry(r).or_insert_with(Rational::zero) += int(i64::from(e));
            }
            v
        })
        .collect();
    let mat = linalg::QMatrix::from_sparse_columns(tgt.len(), &cols).expect("rows in range");
    src.len() - linalg::rank(&mat)
}

/// Rank of the expansions of a list of canonical monomials.
pub fn expansion_rank(basis: &[CanonicalMonomial], d: usize) -> Result<usize> {
    let mut rs = linalg::RowSpace::new();
    let mut index: BTreeMap<CommMonomial, usize> = BTreeMap::new();
    for b in basis {
        let p = b.expand(d)?;
        let mut v = SparseVec::new();
        for (m, c) in p.iter() {
            let n = index.len();
            let i = *index.entry(m.clone()).or_insert(n);
            v.insert(i, c.clone());
        }
        let _ = rs.insert(&v);
    }
    Ok(rs.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::metabelian::meta_derive;
    use crate::wreath::{embed, is_commutator_image, is_constant, module_derive};
    use ConstGen::*;

    fn one() -> Rational {
        Rational::one()
    }

    #[test]
    fn expansions() {
        assert_eq!(Alpha(1, 2).expand(2).unwrap().render(), "u1*u4 - u2*u3");
        assert_eq!(Gamma(1, 1).expand(1).unwrap().render(), "u1*v2 - u2*v1");
        assert!(Alpha(1, 1).expand(1).unwrap().is_zero());
        assert!(Alpha(1, 3).expand(2).is_err());
        assert_eq!(ModuleGen::W(1, 1).expand(1).unwrap().render(), "a1*v2 - a2*v1");
        for g in ConstGen::all(3) {
            assert!(g.expand(3).unwrap().weitz_derive().unwrap().is_zero(), "{g}");
        }
    }

    #[test]
    fn printed_w_is_not_constant() {
        assert!(is_constant(&w_printed(2, 1, 1)));
        assert!(!is_constant(&w_printed(2, 1, 2)));
        for p in 1..=3 {
            for q in 1..=3 {
                assert!(is_constant(&w(3, p, q)));
            }
        }
    }

    #[test]
    fn geometry_predicates() {
        assert!(intersects(&Alpha(1, 3), &Alpha(2, 4), 4).unwrap());
        assert!(!intersects(&Alpha(1, 4), &Alpha(2, 3), 4).unwrap());
        assert!(covers(&Alpha(1, 3), &Uodd(2), 3).unwrap());
        assert!(!covers(&Alpha(1, 2), &Uodd(2), 3).unwrap());
        assert!(intersects(&Alpha(1, 2), &Uodd(1), 2).is_err());
        assert!(covers(&Uodd(1), &Alpha(1, 2), 2).is_err());
    }

    #[test]
    fn small_canonical_bases() {
        assert_eq!(
            canonical_basis(1, &[1, 0], 0),
            vec![CanonicalMonomial::new(vec![Uodd(1)])]
        );
        // u-pairs 1 and 2 each once, weight 1: only alpha(1,2).
        assert_eq!(
            canonical_basis(2, &[1, 1, 0, 0], 1),
            vec![CanonicalMonomial::new(vec![Alpha(1, 2)])]
        );
        assert_eq!(
            canonical_basis(2, &[1, 1, 0, 0], 0),
            vec![CanonicalMonomial::new(vec![Uodd(1), Uodd(2)])]
        );
    }

    #[test]
    fn straighten_examples() {
        let c = straighten(&[Alpha(1, 2), Alpha(3, 4)], 4).unwrap();
        assert_eq!(c.len(), 1);
        let r1 = straighten(&[Alpha(1, 3), Alpha(2, 4)], 4).unwrap();
        let expect: LinComb<CanonicalMonomial> = [
            (CanonicalMonomial::new(vec![Alpha(1, 2), Alpha(3, 4)]), one()),
            (CanonicalMonomial::new(vec![Alpha(1, 4), Alpha(2, 3)]), one()),
        ]
        .into_iter()
        .collect();
        assert_eq!(r1, expect);
        let s1 = straighten(&[Uodd(2), Alpha(1, 3)], 3).unwrap();
        let expect: LinComb<CanonicalMonomial> = [
            (CanonicalMonomial::new(vec![Alpha(2, 3), Uodd(1)]), one()),
            (CanonicalMonomial::new(vec![Alpha(1, 2), Uodd(3)]), one()),
        ]
        .into_iter()
        .collect();
        assert_eq!(s1, expect);
    }

    #[test]
    fn relations_vanish() {
        for d in 1..=4 {
            for id in RelationId::ALL {
                for ix in relation_instances(id, d) {
                    let r = verify_relation(id, &ix, d, SReading::Corrected).unwrap();
                    assert!(r.is_zero(), "{id} {ix:?}: {}", r.render());
                }
            }
        }
        assert!(verify_relation(RelationId::R1, &[1, 2, 3, 4], 3, SReading::Corrected).is_err());
        let printed = verify_relation(RelationId::S, &[1, 1, 2], 2, SReading::Printed).unwrap();
        assert!(!printed.is_zero());
    }

    #[test]
    fn module_generators_are_images_of_their_preimages() {
        for d in 1..=3 {
            for (g, m, pre) in module_generators(d) {
                assert!(is_commutator_image(&m), "{g}");
                assert!(module_derive(&m).is_zero(), "{g}");
                assert!(meta_derive(&pre).is_zero(), "{g}: {}", meta_derive(&pre));
                let img = embed(&pre).unwrap();
                assert!(img.poly.is_zero());
                assert_eq!(img.module, m, "{g} vs {}", g.ideal_label().unwrap());
            }
        }
    }

    #[test]
    fn algebra_generators_are_constants() {
        for d in 1..=3 {
            for g in algebra_generators(d) {
                assert!(meta_derive(&g).is_zero(), "{g}");
            }
        }
        assert_eq!(algebra_generators(1)[1].render(), "[x1,x2]");
    }

    #[test]
    fn canonical_counts_match_kernel() {
        for (d, max) in [(1, 4), (2, 3)] {
            for n in 0..=max {
                for pd in pair_degree_vectors(2 * d, n) {
                    for w in 0..=n {
                        let basis = canonical_basis(d, &pd, w);
                        assert_eq!(basis.len(), uv_kernel_dim(&pd, w), "d={d} {pd:?} w={w}");
                        assert_eq!(expansion_rank(&basis, d).unwrap(), basis.len());
                    }
                }
            }
        }
    }
}

//! The wreath product `W_{2d} = K[Y] ⋉ M`, where `M` is the free
//! `K[U,V]`-module on `a1..a_{2d}` with `M * M = 0`.
//!
//! Bimodule rules: `y_j a_i = a_i u_j` and `a_i y_j = a_i (u_j + v_j)`. The
//! module coefficients are stored over `u1..u2d, v1..v2d` directly.

use std::fmt;

use num_traits::One;

use crate::commpoly::{delta_index, CommMonomial, CommPoly, VarAlphabet};
use crate::error::{Error, Result};
use crate::lincomb::{render_terms, LinComb};
use crate::linalg::Rational;
use crate::metabelian::{push_comm, CommTerm, MetaElement, MetaMonomial};

/// `a_a * mono`, with `a` 0-based and `mono` over the `UV` alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMono {
    pub a: usize,
    pub mono: CommMonomial,
}

impl ModMono {
    /// Letter counts over `1..2d`, counting `a_k`, `u_k`, `v_k` as letter `k`.
    pub fn letters(&self) -> Vec<u32> {
        let e = self.mono.exponents();
        let n = e.len() / 2;
        let mut l: Vec<u32> = (0..n).map(|k| e[k] + e[n + k]).collect();
        l[self.a] += 1;
        l
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    d: usize,
    terms: LinComb<ModMono>,
}

impl ModuleElement {
    pub fn zero(d: usize) -> Self {
        ModuleElement {
            d,
            terms: LinComb::new(),
        }
    }

    /// Generator `a_{a+1}`.
    pub fn generator(d: usize, a: usize) -> Self {
        Self::from_term(d, a, CommMonomial::one(4 * d), Rational::one())
    }

    pub fn from_term(d: usize, a: usize, mono: CommMonomial, c: Rational) -> Self {
        ModuleElement {
            d,
            terms: LinComb::from_term(ModMono { a, mono }, c),
        }
    }

    pub fn from_lincomb(d: usize, terms: LinComb<ModMono>) -> Self {
        ModuleElement { d, terms }
    }

    /// `sum_i a_i f_i`.
    pub fn from_coefficients(d: usize, coeffs: &[CommPoly]) -> Self {
        let mut terms = LinComb::new();
        for (a, f) in coeffs.iter().enumerate() {
            for (m, c) in f.iter() {
                terms.add_term(ModMono { a, mono: m.clone() }, c.clone());
            }
        }
        ModuleElement { d, terms }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &LinComb<ModMono> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModMono, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn alphabet(&self) -> VarAlphabet {
        VarAlphabet::uv(self.d)
    }

    /// Coefficient `f_i` of `a_{i+1}`.
    pub fn coefficient(&self, i: usize) -> CommPoly {
        CommPoly::from_lincomb(
            self.alphabet(),
            self.iter()
                .filter(|(m, _)| m.a == i)
                .map(|(m, c)| (m.mono.clone(), c.clone()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.add_assign(&other.terms);
        ModuleElement { d: self.d, terms: t }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.sub_assign(&other.terms);
        ModuleElement { d: self.d, terms: t }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ModuleElement {
            d: self.d,
            terms: self.terms.scaled(c),
        }
    }

    /// Multiplies every coefficient by `p` (over `UV`).
    pub fn times(&self, p: &CommPoly) -> Self {
        let mut terms = LinComb::new();
        for (m, c) in self.iter() {
            for (n, e) in p.iter() {
                terms.add_term(
                    ModMono {
                        a: m.a,
                        mono: m.mono.mul(n),
                    },
                    c * e,
                );
            }
        }
        ModuleElement { d: self.d, terms }
    }

    pub fn render(&self) -> String {
        let a = self.alphabet();
        render_terms(self.iter().map(|(m, c)| {
            let mono = m.mono.render(&a);
            let s = if mono.is_empty() {
                format!("a{}", m.a + 1)
            } else {
                format!("a{}*{}", m.a + 1, mono)
            };
            (c.clone(), s)
        }))
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub poly: CommPoly,
    pub module: ModuleElement,
}

impl WreathElement {
    pub fn zero(d: usize) -> Self {
        WreathElement {
            poly: CommPoly::zero(VarAlphabet::y(2 * d)),
            module: ModuleElement::zero(d),
        }
    }

    pub fn one(d: usize) -> Self {
        WreathElement {
            poly: CommPoly::one(VarAlphabet::y(2 * d)),
            module: ModuleElement::zero(d),
        }
    }

    pub fn from_poly(d: usize, poly: CommPoly) -> Self {
        WreathElement {
            poly,
            module: ModuleElement::zero(d),
        }
    }

    pub fn from_module(m: ModuleElement) -> Self {
        WreathElement {
            poly: CommPoly::zero(VarAlphabet::y(2 * m.d)),
            module: m,
        }
    }

    /// `y_{k+1}`.
    pub fn y(d: usize, k: usize) -> Self {
        Self::from_poly(d, CommPoly::var(VarAlphabet::y(2 * d), k))
    }

    /// `a_{k+1}`.
    pub fn a(d: usize, k: usize) -> Self {
        Self::from_module(ModuleElement::generator(d, k))
    }

    pub fn d(&self) -> usize {
        self.module.d
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.module.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        WreathElement {
            poly: &self.poly + &other.poly,
            module: self.module.add(&other.module),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        WreathElement {
            poly: &self.poly - &other.poly,
            module: self.module.sub(&other.module),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        WreathElement {
            poly: self.poly.scale(c),
            module: self.module.scale(c),
        }
    }

    pub fn render(&self) -> String {
        let p = self.poly.render();
        let m = self.module.render();
        match (self.poly.is_zero(), self.module.is_zero()) {
            (_, true) => p,
            (true, false) => m,
            (false, false) => {
                if let Some(rest) = m.strip_prefix('-') {
                    format!("{p} - {rest}")
                } else {
                    format!("{p} + {m}")
                }
            }
        }
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `p(U)` for `p` over `Y`.
fn left_image(p: &CommPoly, d: usize) -> Result<CommPoly> {
    let uv = VarAlphabet::uv(d);
    let images: Vec<CommPoly> = (0..2 * d).map(|k| CommPoly::var(uv, uv.u_slot(k + 1))).collect();
    p.substitute(&images)
}

/// `p(U + V)` for `p` over `Y`.
fn right_image(p: &CommPoly, d: usize) -> Result<CommPoly> {
    let uv = VarAlphabet::uv(d);
    let images: Vec<CommPoly> = (0..2 * d)
        .map(|k| &CommPoly::var(uv, uv.u_slot(k + 1)) + &CommPoly::var(uv, uv.v_slot(k + 1)))
        .collect();
    p.substitute(&images)
}

pub fn wreath_mul(w1: &WreathElement, w2: &WreathElement) -> Result<WreathElement> {
    let d = w1.d();
    if d != w2.d() {
        return Err(Error::RankMismatch { left: d, right: w2.d() });
    }
    let poly = w1.poly.try_mul(&w2.poly)?;
    let left = w2.module.times(&left_image(&w1.poly, d)?);
    let right = w1.module.times(&right_image(&w2.poly, d)?);
    Ok(WreathElement {
        poly,
        module: left.add(&right),
    })
}

fn wreath_commutator(a: &WreathElement, b: &WreathElement) -> Result<WreathElement> {
    Ok(wreath_mul(a, b)?.sub(&wreath_mul(b, a)?))
}

fn embed_letter(d: usize, k: usize) -> WreathElement {
    WreathElement::y(d, k).add(&WreathElement::a(d, k))
}

/// The embedding `x_k -> y_k + a_k`, evaluated multiplicatively.
pub fn embed(f: &MetaElement) -> Result<WreathElement> {
    let d = f.d();
    let mut out = WreathElement::zero(d);
    for (m, c) in f.iter() {
        let (word, bracket) = match m {
            MetaMonomial::Pure(xi) => (xi, None),
            MetaMonomial::Comm(t) => (&t.exps, Some(t)),
        };
        let mut img = WreathElement::one(d);
        for (k, &e) in word.exponents().iter().enumerate() {
            for _ in 0..e {
                img = wreath_mul(&img, &embed_letter(d, k))?;
            }
        }
        if let Some(t) = bracket {
            let mut br = wreath_commutator(&embed_letter(d, t.head.0), &embed_letter(d, t.head.1))?;
            for &k in &t.tail {
                br = wreath_commutator(&br, &embed_letter(d, k))?;
            }
            img = wreath_mul(&img, &br)?;
        }
        out = out.add(&img.scale(c));
    }
    Ok(out)
}

/// Closed form `(a_i v_j - a_j v_i) v^tail u^xi` of a basis commutator.
pub fn commutator_image(b: &MetaMonomial, d: usize) -> Result<ModuleElement> {
    let MetaMonomial::Comm(t) = b else {
        return Err(Error::KindMismatch("commutator image of a pure word".into()));
    };
    Ok(comm_term_image(t, d))
}

fn comm_term_image(t: &CommTerm, d: usize) -> ModuleElement {
    let uv = VarAlphabet::uv(d);
    let mut e = t.exps.exponents().to_vec();
    e.resize(4 * d, 0);
    for &k in &t.tail {
        e[uv.v_slot(k + 1)] += 1;
    }
    let base = CommMonomial::from_exponents(e);
    let (i, j) = t.head;
    let vj = CommMonomial::var(4 * d, uv.v_slot(j + 1));
    let vi = CommMonomial::var(4 * d, uv.v_slot(i + 1));
    let mut terms = LinComb::new();
    terms.add_term(ModMono { a: i, mono: base.mul(&vj) }, Rational::one());
    terms.add_term(ModMono { a: j, mono: base.mul(&vi) }, -Rational::one());
    ModuleElement { d, terms }
}

/// `sum_i v_i f_i`; zero exactly on images of the commutator ideal.
pub fn image_residual(m: &ModuleElement) -> CommPoly {
    let uv = m.alphabet();
    let mut terms = LinComb::new();
    for (mm, c) in m.iter() {
        let v = CommMonomial::var(4 * m.d, uv.v_slot(mm.a + 1));
        terms.add_term(mm.mono.mul(&v), c.clone());
    }
    CommPoly::from_lincomb(uv, terms)
}

pub fn is_commutator_image(m: &ModuleElement) -> bool {
    image_residual(m).is_zero()
}

/// Inverts the embedding on the commutator ideal by lead-term matching on the
/// largest `a`-index.
pub fn pullback(m: &ModuleElement) -> Result<MetaElement> {
    let residual = image_residual(m);
    if !residual.is_zero() {
        return Err(Error::NotAnImage {
            residual: residual.render(),
        });
    }
    let d = m.d;
    let uv = m.alphabet();
    let mut rest = m.terms.clone();
    let mut out = LinComb::new();
    while let Some((lead, c)) = rest.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        let e = lead.mono.exponents();
        let j = (0..2 * d).find(|&k| e[uv.v_slot(k + 1)] > 0);
        let Some(j) = j.filter(|&j| j < lead.a) else {
            return Err(Error::Internal(format!(
                "pullback failed at a{}*{}",
                lead.a + 1,
                lead.mono.render(&uv)
            )));
        };
        let mut tail = Vec::new();
        for k in 0..2 * d {
            let mut n = e[uv.v_slot(k + 1)];
            if k == j {
                n -= 1;
            }
            tail.extend(std::iter::repeat_n(k, n as usize));
        }
        let t = CommTerm {
            exps: CommMonomial::from_exponents(e[..2 * d].to_vec()),
            head: (lead.a, j),
            tail,
        };
        rest.add_assign_scaled(&comm_term_image(&t, d).terms, &-c.clone());
        push_comm(&mut out, c, t.exps, t.head.0, t.head.1, t.tail);
    }
    Ok(MetaElement::from_lincomb(d, out))
}

fn derive_module(m: &ModuleElement) -> ModuleElement {
    let mut terms = LinComb::new();
    for (mm, c) in m.iter() {
        if let Some(a) = delta_index(mm.a) {
            terms.add_term(ModMono { a, mono: mm.mono.clone() }, c.clone());
        }
        for (e, dm) in mm.mono.derive() {
            terms.add_term(ModMono { a: mm.a, mono: dm }, c * Rational::from_integer(e.into()));
        }
    }
    ModuleElement { d: m.d, terms }
}

pub fn wreath_derive(w: &WreathElement) -> WreathElement {
    WreathElement {
        poly: w.poly.weitz_derive().expect("Y alphabet is paired"),
        module: derive_module(&w.module),
    }
}

pub fn module_derive(m: &ModuleElement) -> ModuleElement {
    derive_module(m)
}

/// Whether the element is killed by the derivation.
pub fn is_constant(m: &ModuleElement) -> bool {
    derive_module(m).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::metabelian::{comm, meta_derive, meta_mul, meta_normalize, x, WordFactor};
    use proptest::prelude::*;

    fn uv(d: usize) -> VarAlphabet {
        VarAlphabet::uv(d)
    }

    fn u(d: usize, k: usize) -> CommPoly {
        CommPoly::var(uv(d), uv(d).u_slot(k))
    }

    fn v(d: usize, k: usize) -> CommPoly {
        CommPoly::var(uv(d), uv(d).v_slot(k))
    }

    fn a(d: usize, k: usize) -> ModuleElement {
        ModuleElement::generator(d, k - 1)
    }

    #[test]
    fn bimodule_rules() {
        let d = 1;
        let ya = wreath_mul(&WreathElement::y(d, 0), &WreathElement::a(d, 0)).unwrap();
        assert_eq!(ya.module, a(d, 1).times(&u(d, 1)));
        let ay = wreath_mul(&WreathElement::a(d, 0), &WreathElement::y(d, 0)).unwrap();
        assert_eq!(ay.module, a(d, 1).times(&(&u(d, 1) + &v(d, 1))));
        let aa = wreath_mul(&WreathElement::a(d, 0), &WreathElement::a(d, 1)).unwrap();
        assert!(aa.is_zero());
    }

    #[test]
    fn embedding_examples() {
        let d = 2;
        assert_eq!(embed(&x(d, 1)).unwrap().render(), "y1 + a1");
        let c = embed(&comm(d, &[2, 1])).unwrap();
        let expect = a(d, 2).times(&v(d, 1)).sub(&a(d, 1).times(&v(d, 2)));
        assert!(c.poly.is_zero());
        assert_eq!(c.module, expect);
        let f = meta_mul(&x(d, 3), &comm(d, &[2, 1])).unwrap();
        assert_eq!(embed(&f).unwrap().module, expect.times(&u(d, 3)));
    }

    #[test]
    fn closed_form_examples() {
        let d = 2;
        let base = a(d, 2).times(&v(d, 1)).sub(&a(d, 1).times(&v(d, 2)));
        let img = |e: &MetaElement| {
            let (m, _) = e.iter().next().unwrap();
            commutator_image(m, d).unwrap()
        };
        assert_eq!(img(&comm(d, &[2, 1])), base);
        assert_eq!(img(&comm(d, &[2, 1, 3])), base.times(&v(d, 3)));
        let f = meta_mul(&x(d, 1), &comm(d, &[2, 1])).unwrap();
        assert_eq!(img(&f), base.times(&u(d, 1)));
        assert!(commutator_image(x(d, 1).iter().next().unwrap().0, d).is_err());
    }

    #[test]
    fn image_criterion_examples() {
        let d = 2;
        let base = a(d, 2).times(&v(d, 1)).sub(&a(d, 1).times(&v(d, 2)));
        assert!(is_commutator_image(&base));
        assert!(!is_commutator_image(&a(d, 1)));
        assert!(is_commutator_image(&ModuleElement::zero(d)));
    }

    #[test]
    fn pullback_examples() {
        let d = 2;
        let base = a(d, 2).times(&v(d, 1)).sub(&a(d, 1).times(&v(d, 2)));
        assert_eq!(pullback(&base).unwrap(), comm(d, &[2, 1]));
        let f = meta_mul(&x(d, 3), &comm(d, &[2, 1])).unwrap();
        assert_eq!(pullback(&base.times(&u(d, 3))).unwrap(), f);
        match pullback(&a(d, 1)) {
            Err(Error::NotAnImage { residual }) => assert_eq!(residual, "v1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derivation_examples() {
        let d = 1;
        let w = wreath_derive(&WreathElement::a(d, 1));
        assert_eq!(w, WreathElement::a(d, 0));
        let m = WreathElement::from_module(a(d, 1).times(&u(d, 2)));
        assert_eq!(wreath_derive(&m).module, a(d, 1).times(&u(d, 1)));
        let w11 = a(d, 2).times(&v(d, 1)).sub(&a(d, 1).times(&v(d, 2)));
        assert!(module_derive(&w11).is_zero());
    }

    fn element(d: usize) -> impl Strategy<Value = MetaElement> {
        let n = 2 * d;
        let factor = prop_oneof![
            (0..n).prop_map(WordFactor::Letter),
            proptest::collection::vec(0..n, 2..4).prop_map(WordFactor::Commutator),
        ];
        proptest::collection::vec((-3i64..4, proptest::collection::vec(factor, 0..3)), 0..4).prop_map(
            move |ts| {
                let raw: Vec<_> = ts.into_iter().map(|(c, f)| (int(c), f)).collect();
                meta_normalize(d, &raw).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn homomorphism(f in element(2), g in element(2)) {
            let lhs = embed(&meta_mul(&f, &g).unwrap()).unwrap();
            let rhs = wreath_mul(&embed(&f).unwrap(), &embed(&g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn equivariance(f in element(2)) {
            prop_assert_eq!(embed(&meta_derive(&f)).unwrap(), wreath_derive(&embed(&f).unwrap()));
        }

        #[test]
        fn closed_form_matches_embedding(f in element(2)) {
            let c = f.comm_part();
            let mut closed = ModuleElement::zero(2);
            for (m, k) in c.iter() {
                closed = closed.add(&commutator_image(m, 2).unwrap().scale(k));
            }
            let e = embed(&c).unwrap();
            prop_assert!(e.poly.is_zero());
            prop_assert!(is_commutator_image(&closed));
            prop_assert_eq!(&e.module, &closed);
            prop_assert_eq!(pullback(&closed).unwrap(), c);
        }
    }
}

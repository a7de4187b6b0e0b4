//! The free metabelian associative algebra on `x1..x_{2d}`.
//!
//! Basis: ordered words `x^xi` and elements `x^xi [x_i, x_j, x_{t1}, ..., x_{tm}]`
//! with `i > j <= t1 <= ... <= tm`. The commutator ideal is a module over
//! `K[U,V]`: `u_k` multiplies on the left by `x_k`, `v_k` takes the commutator
//! with `x_k` on the right. Both actions commute, so a commutator term is
//! really `c_ij * u^xi * v^tail` and products reduce to module arithmetic.
//!
//! Indices are 0-based internally and 1-based in names.

use std::fmt;

use num_traits::{One, Zero};

use crate::commpoly::{delta_index, AlphabetName, CommMonomial, VarAlphabet};
use crate::error::{Error, Result};
use crate::lincomb::{render_terms, LinComb};
use crate::linalg::Rational;

/// Commutator basis term `x^exps [x_head.0, x_head.1, tail...]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommTerm {
    pub exps: CommMonomial,
    pub head: (usize, usize),
    pub tail: Vec<usize>,
}

impl CommTerm {
    pub fn degree(&self) -> u32 {
        self.exps.degree() + 2 + self.tail.len() as u32
    }

    /// Per-variable letter counts, including head and tail.
    pub fn letters(&self) -> Vec<u32> {
        let mut l = self.exps.exponents().to_vec();
        l[self.head.0] += 1;
        l[self.head.1] += 1;
        for &t in &self.tail {
            l[t] += 1;
        }
        l
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetaMonomial {
    Pure(CommMonomial),
    Comm(CommTerm),
}

impl MetaMonomial {
    pub fn letters(&self) -> Vec<u32> {
        match self {
            MetaMonomial::Pure(m) => m.exponents().to_vec(),
            MetaMonomial::Comm(c) => c.letters(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.letters().iter().sum()
    }

    pub fn is_comm(&self) -> bool {
        matches!(self, MetaMonomial::Comm(_))
    }

    pub fn render(&self) -> String {
        let a = VarAlphabet::x(self.letters().len());
        match self {
            MetaMonomial::Pure(m) => m.render(&a),
            MetaMonomial::Comm(c) => {
                // Heads are shown ascending; callers negate the coefficient.
                let mut parts = vec![c.head.1, c.head.0];
                parts.extend(&c.tail);
                let names: Vec<String> = parts.iter().map(|&k| a.var_name(k)).collect();
                let br = format!("[{}]", names.join(","));
                let w = c.exps.render(&a);
                if w.is_empty() {
                    br
                } else {
                    format!("{w}*{br}")
                }
            }
        }
    }
}

/// Element of F_{2d}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MetaElement {
    d: usize,
    terms: LinComb<MetaMonomial>,
}

/// Factor of a raw product fed to [`meta_normalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordFactor {
    Letter(usize),
    Commutator(Vec<usize>),
}

impl MetaElement {
    pub fn zero(d: usize) -> Self {
        MetaElement {
            d,
            terms: LinComb::new(),
        }
    }

    pub fn one(d: usize) -> Self {
        Self::from_monomial(d, MetaMonomial::Pure(CommMonomial::one(2 * d)), Rational::one())
    }

    pub fn from_monomial(d: usize, m: MetaMonomial, c: Rational) -> Self {
        MetaElement {
            d,
            terms: LinComb::from_term(m, c),
        }
    }

    pub fn from_lincomb(d: usize, terms: LinComb<MetaMonomial>) -> Self {
        MetaElement { d, terms }
    }

    /// Letter with 0-based index `k`.
    pub fn var(d: usize, k: usize) -> Self {
        assert!(k < 2 * d, "letter out of range");
        Self::from_monomial(d, MetaMonomial::Pure(CommMonomial::var(2 * d, k)), Rational::one())
    }

    /// Left-normed commutator of 0-based letters.
    pub fn commutator(d: usize, letters: &[usize]) -> Result<Self> {
        if letters.len() < 2 {
            return Err(Error::MalformedCommutator(format!(
                "commutator needs at least 2 entries, got {}",
                letters.len()
            )));
        }
        if let Some(&k) = letters.iter().find(|&&k| k >= 2 * d) {
            return Err(Error::IndexOutOfRange(format!("x{} with d={d}", k + 1)));
        }
        let mut out = LinComb::new();
        push_comm(
            &mut out,
            Rational::one(),
            CommMonomial::one(2 * d),
            letters[0],
            letters[1],
            letters[2..].to_vec(),
        );
        Ok(MetaElement { d, terms: out })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &LinComb<MetaMonomial> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MetaMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether the element lies in the commutator ideal.
    pub fn is_commutator(&self) -> bool {
        self.terms.monomials().all(MetaMonomial::is_comm)
    }

    pub fn pure_part(&self) -> MetaElement {
        self.filtered(|m| !m.is_comm())
    }

    pub fn comm_part(&self) -> MetaElement {
        self.filtered(MetaMonomial::is_comm)
    }

    fn filtered(&self, keep: impl Fn(&MetaMonomial) -> bool) -> MetaElement {
        MetaElement {
            d: self.d,
            terms: self
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.add_assign(&other.terms);
        MetaElement { d: self.d, terms: t }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.sub_assign(&other.terms);
        MetaElement { d: self.d, terms: t }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MetaElement {
            d: self.d,
            terms: self.terms.scaled(c),
        }
    }

    pub fn render(&self) -> String {
        render_terms(self.iter().map(|(m, c)| {
            let c = if m.is_comm() { -c.clone() } else { c.clone() };
            (c, m.render())
        }))
    }
}

impl fmt::Display for MetaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Adds `coeff * x^exps [x_i, x_j, tail...]`, rewritten into the basis.
pub(crate) fn push_comm(
    out: &mut LinComb<MetaMonomial>,
    coeff: Rational,
    exps: CommMonomial,
    i: usize,
    j: usize,
    mut tail: Vec<usize>,
) {
    if i == j || coeff.is_zero() {
        return;
    }
    let (i, j, coeff) = if i > j { (i, j, coeff) } else { (j, i, -coeff) };
    tail.sort_unstable();
    match tail.first() {
        Some(&m) if m < j => {
            // [x_i,x_j,x_m] = [x_i,x_m,x_j] - [x_j,x_m,x_i]; the tail commutes.
            let rest = &tail[1..];
            let mut t1 = rest.to_vec();
            t1.push(j);
            t1.sort_unstable();
            let mut t2 = rest.to_vec();
            t2.push(i);
            t2.sort_unstable();
            out.add_term(
                MetaMonomial::Comm(CommTerm {
                    exps: exps.clone(),
                    head: (i, m),
                    tail: t1,
                }),
                coeff.clone(),
            );
            out.add_term(
                MetaMonomial::Comm(CommTerm {
                    exps,
                    head: (j, m),
                    tail: t2,
                }),
                -coeff,
            );
        }
        _ => out.add_term(MetaMonomial::Comm(CommTerm { exps, head: (i, j), tail }), coeff),
    }
}

fn add_var(m: &CommMonomial, k: usize) -> CommMonomial {
    m.with_exp(k, m.exponents()[k] + 1)
}

/// `c * x_k` for a commutator term: the right action of `u_k + v_k`.
fn comm_times_letter(out: &mut LinComb<MetaMonomial>, coeff: &Rational, c: &CommTerm, k: usize) {
    out.add_term(
        MetaMonomial::Comm(CommTerm {
            exps: add_var(&c.exps, k),
            head: c.head,
            tail: c.tail.clone(),
        }),
        coeff.clone(),
    );
    let mut tail = c.tail.clone();
    tail.push(k);
    push_comm(out, coeff.clone(), c.exps.clone(), c.head.0, c.head.1, tail);
}

/// `x^xi * x_k`, moving `x_k` left past the letters greater than `k`.
fn pure_times_letter(out: &mut LinComb<MetaMonomial>, coeff: &Rational, xi: &CommMonomial, k: usize) {
    out.add_term(MetaMonomial::Pure(add_var(xi, k)), coeff.clone());
    let e = xi.exponents();
    let mut prefix = xi.clone();
    let mut bigger = Vec::new();
    for (c, &n) in e.iter().enumerate().skip(k + 1) {
        prefix = prefix.with_exp(c, 0);
        bigger.extend(std::iter::repeat_n(c, n as usize));
    }
    // Swapping x_k past c_t leaves [x_{c_t}, x_k] with c_1..c_{t-1} acting on
    // the left and c_{t+1}..c_r on the right.
    for t in 0..bigger.len() {
        let mut left = prefix.clone();
        for &c in &bigger[..t] {
            left = add_var(&left, c);
        }
        let mut partial: Vec<(CommMonomial, Vec<usize>)> = vec![(left, Vec::new())];
        for &c in &bigger[t + 1..] {
            partial = partial
                .into_iter()
                .flat_map(|(u, v)| {
                    let mut v2 = v.clone();
                    v2.push(c);
                    [(add_var(&u, c), v), (u, v2)]
                })
                .collect();
        }
        for (u, v) in partial {
            push_comm(out, coeff.clone(), u, bigger[t], k, v);
        }
    }
}

fn times_letter(f: &LinComb<MetaMonomial>, k: usize) -> LinComb<MetaMonomial> {
    let mut out = LinComb::new();
    for (m, c) in f {
        match m {
            MetaMonomial::Pure(xi) => pure_times_letter(&mut out, c, xi, k),
            MetaMonomial::Comm(t) => comm_times_letter(&mut out, c, t, k),
        }
    }
    out
}

fn mul_monomials(a: &MetaMonomial, b: &MetaMonomial, size: usize) -> LinComb<MetaMonomial> {
    match (a, b) {
        (MetaMonomial::Comm(_), MetaMonomial::Comm(_)) => LinComb::new(),
        (MetaMonomial::Pure(xi), MetaMonomial::Comm(t)) => LinComb::monomial(MetaMonomial::Comm(CommTerm {
            exps: xi.mul(&t.exps),
            head: t.head,
            tail: t.tail.clone(),
        })),
        (_, MetaMonomial::Pure(eta)) => {
            let mut cur = LinComb::monomial(a.clone());
            for k in 0..size {
                for _ in 0..eta.exponents()[k] {
                    cur = times_letter(&cur, k);
                }
            }
            cur
        }
    }
}

pub fn meta_mul(f: &MetaElement, g: &MetaElement) -> Result<MetaElement> {
    if f.d != g.d {
        return Err(Error::RankMismatch {
            left: f.d,
            right: g.d,
        });
    }
    let size = 2 * f.d;
    let mut out = LinComb::new();
    for (a, x) in f.iter() {
        for (b, y) in g.iter() {
            out.add_assign_scaled(&mul_monomials(a, b, size), &(x * y));
        }
    }
    Ok(MetaElement { d: f.d, terms: out })
}

/// Normalizes a formal combination of products of letters and left-normed
/// commutators (0-based letters).
pub fn meta_normalize(d: usize, raw: &[(Rational, Vec<WordFactor>)]) -> Result<MetaElement> {
    let mut out = MetaElement::zero(d);
    for (c, factors) in raw {
        let mut term = MetaElement::one(d).scale(c);
        for f in factors {
            let e = match f {
                WordFactor::Letter(k) => {
                    if *k >= 2 * d {
                        return Err(Error::IndexOutOfRange(format!("x{} with d={d}", k + 1)));
                    }
                    MetaElement::var(d, *k)
                }
                WordFactor::Commutator(ls) => MetaElement::commutator(d, ls)?,
            };
            term = meta_mul(&term, &e)?;
        }
        out = out.add(&term);
    }
    Ok(out)
}

fn derive_comm(out: &mut LinComb<MetaMonomial>, coeff: &Rational, t: &CommTerm) {
    let (i, j) = t.head;
    if let Some(di) = delta_index(i) {
        push_comm(out, coeff.clone(), t.exps.clone(), di, j, t.tail.clone());
    }
    if let Some(dj) = delta_index(j) {
        push_comm(out, coeff.clone(), t.exps.clone(), i, dj, t.tail.clone());
    }
    for (k, &e) in t.exps.exponents().iter().enumerate() {
        if let (Some(dk), true) = (delta_index(k), e > 0) {
            let exps = add_var(&t.exps.with_exp(k, e - 1), dk);
            let c = coeff * Rational::from_integer(e.into());
            push_comm(out, c, exps, i, j, t.tail.clone());
        }
    }
    for (p, &k) in t.tail.iter().enumerate() {
        if let Some(dk) = delta_index(k) {
            let mut tail = t.tail.clone();
            tail[p] = dk;
            push_comm(out, coeff.clone(), t.exps.clone(), i, j, tail);
        }
    }
}

pub fn meta_derive(f: &MetaElement) -> MetaElement {
    let d = f.d;
    let size = 2 * d;
    let mut out = LinComb::new();
    for (m, c) in f.iter() {
        match m {
            MetaMonomial::Comm(t) => derive_comm(&mut out, c, t),
            MetaMonomial::Pure(xi) => {
                let e = xi.exponents();
                for k in 0..size {
                    let Some(dk) = delta_index(k) else { continue };
                    // Replace each copy of x_k in the sorted word by x_{k-1}.
                    for a in 0..e[k] {
                        let mut left = xi.clone();
                        let mut right = CommMonomial::one(size);
                        left = left.with_exp(k, a);
                        right = right.with_exp(k, e[k] - 1 - a);
                        for (l, &n) in e.iter().enumerate().skip(k + 1) {
                            left = left.with_exp(l, 0);
                            right = right.with_exp(l, n);
                        }
                        let mut cur = times_letter(&LinComb::monomial(MetaMonomial::Pure(left)), dk);
                        cur = mul_monomials_lin(&cur, &MetaMonomial::Pure(right), size);
                        out.add_assign_scaled(&cur, c);
                    }
                }
            }
        }
    }
    MetaElement { d, terms: out }
}

fn mul_monomials_lin(f: &LinComb<MetaMonomial>, b: &MetaMonomial, size: usize) -> LinComb<MetaMonomial> {
    let mut out = LinComb::new();
    for (a, c) in f {
        out.add_assign_scaled(&mul_monomials(a, b, size), c);
    }
    out
}

/// Applies a `K[U,V]` monomial (alphabet `UV` of size 4d) to an element of F'.
pub fn act_uv(c: &MetaElement, m: &CommMonomial) -> Result<MetaElement> {
    let d = c.d;
    if m.size() != 4 * d {
        return Err(Error::DimensionMismatch {
            expected: 4 * d,
            found: m.size(),
        });
    }
    if !c.is_commutator() {
        return Err(Error::NotInCommutatorIdeal(c.render()));
    }
    let e = m.exponents();
    let u = CommMonomial::from_exponents(e[..2 * d].to_vec());
    let mut vs = Vec::new();
    for (k, &n) in e[2 * d..].iter().enumerate() {
        vs.extend(std::iter::repeat_n(k, n as usize));
    }
    let mut out = LinComb::new();
    for (mono, coeff) in c.iter() {
        let MetaMonomial::Comm(t) = mono else { unreachable!() };
        let mut tail = t.tail.clone();
        tail.extend(&vs);
        push_comm(&mut out, coeff.clone(), t.exps.mul(&u), t.head.0, t.head.1, tail);
    }
    Ok(MetaElement { d, terms: out })
}

/// Module-form view of a commutator term: head plus a monomial over `UV`.
pub fn comm_term_as_module(t: &CommTerm, d: usize) -> ((usize, usize), CommMonomial) {
    let mut e = t.exps.exponents().to_vec();
    e.resize(4 * d, 0);
    for &k in &t.tail {
        e[2 * d + k] += 1;
    }
    (t.head, CommMonomial::from_exponents(e))
}

pub fn uv_alphabet(d: usize) -> VarAlphabet {
    VarAlphabet::new(AlphabetName::UV, 4 * d)
}

/// 1-based convenience constructors used by examples and tests.
pub fn x(d: usize, k: usize) -> MetaElement {
    MetaElement::var(d, k - 1)
}

pub fn comm(d: usize, letters: &[usize]) -> MetaElement {
    let ls: Vec<usize> = letters.iter().map(|k| k - 1).collect();
    MetaElement::commutator(d, &ls).expect("valid commutator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use proptest::prelude::*;

    fn mul(a: &MetaElement, b: &MetaElement) -> MetaElement {
        meta_mul(a, b).unwrap()
    }

    #[test]
    fn swap_produces_commutator() {
        let p = mul(&x(2, 2), &x(2, 1));
        assert_eq!(p, mul(&x(2, 1), &x(2, 2)).add(&comm(2, &[2, 1])));
        assert_eq!(p.render(), "x1*x2 - [x1,x2]");
    }

    #[test]
    fn metabelian_identity() {
        assert!(mul(&comm(2, &[2, 1]), &comm(2, &[4, 3])).is_zero());
        assert!(mul(&comm(2, &[2, 1]), &comm(2, &[2, 1])).is_zero());
    }

    #[test]
    fn commutator_times_letter() {
        let lhs = mul(&comm(2, &[2, 1]), &x(2, 3));
        let rhs = mul(&x(2, 3), &comm(2, &[2, 1])).add(&comm(2, &[2, 1, 3]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalize_examples() {
        let raw = vec![(int(1), vec![WordFactor::Letter(1), WordFactor::Letter(0)])];
        assert_eq!(meta_normalize(2, &raw).unwrap(), mul(&x(2, 2), &x(2, 1)));
        let bad = vec![(int(1), vec![WordFactor::Commutator(vec![0])])];
        assert!(matches!(meta_normalize(2, &bad), Err(Error::MalformedCommutator(_))));
    }

    #[test]
    fn jacobi_normal_form() {
        // [x3,x2,x1] has tail below the head's small index.
        let c = comm(2, &[3, 2, 1]);
        let expect = comm(2, &[3, 1, 2]).sub(&comm(2, &[2, 1, 3]));
        assert_eq!(c, expect);
    }

    #[test]
    fn derivation_examples() {
        assert!(meta_derive(&comm(2, &[1, 2])).is_zero());
        assert_eq!(
            meta_derive(&comm(2, &[4, 2])),
            comm(2, &[3, 2]).add(&comm(2, &[4, 1]))
        );
        let f = mul(&x(2, 2), &comm(2, &[2, 1]));
        assert_eq!(meta_derive(&f), mul(&x(2, 1), &comm(2, &[2, 1])));
    }

    #[test]
    fn module_action_examples() {
        let a = uv_alphabet(2);
        let u = |k| CommMonomial::var(8, a.u_slot(k));
        let v = |k| CommMonomial::var(8, a.v_slot(k));
        let c = comm(2, &[2, 1]);
        assert_eq!(act_uv(&c, &u(3)).unwrap(), mul(&x(2, 3), &c));
        assert_eq!(act_uv(&c, &v(3)).unwrap(), comm(2, &[2, 1, 3]));
        let uv = u(1).mul(&v(2));
        assert_eq!(act_uv(&c, &uv).unwrap(), mul(&x(2, 1), &comm(2, &[2, 1, 2])));
        assert!(act_uv(&x(2, 1), &uv).is_err());
    }

    #[test]
    fn rewritings_agree() {
        let a = mul(&mul(&x(2, 2), &x(2, 1)), &x(2, 3));
        let b = mul(&x(2, 2), &mul(&x(2, 1), &x(2, 3)));
        assert_eq!(a, b);
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
        fn associativity(f in element(2), g in element(2), h in element(2)) {
            prop_assert_eq!(mul(&mul(&f, &g), &h), mul(&f, &mul(&g, &h)));
        }

        #[test]
        fn leibniz(f in element(2), g in element(2)) {
            let lhs = meta_derive(&mul(&f, &g));
            let rhs = mul(&meta_derive(&f), &g).add(&mul(&f, &meta_derive(&g)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn commutators_annihilate(f in element(2), g in element(2)) {
            prop_assert!(mul(&f.comm_part(), &g.comm_part()).is_zero());
        }

        #[test]
        fn action_composes(f in element(2), e1 in proptest::collection::vec(0u32..2, 8), e2 in proptest::collection::vec(0u32..2, 8)) {
            let c = f.comm_part();
            let m1 = CommMonomial::from_exponents(e1);
            let m2 = CommMonomial::from_exponents(e2);
            let once = act_uv(&c, &m1.mul(&m2)).unwrap();
            let twice = act_uv(&act_uv(&c, &m1).unwrap(), &m2).unwrap();
            let swapped = act_uv(&act_uv(&c, &m2).unwrap(), &m1).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert_eq!(&once, &swapped);
        }
    }
}

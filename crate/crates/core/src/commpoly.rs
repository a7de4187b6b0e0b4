//! Commutative polynomials over the rationals and the Weitzenböck derivation.
//!
//! Variables are indexed from 0. The derivation pairs them as (0,1), (2,3), ...
//! and sends the odd (0-based) member of each pair to the even one, i.e.
//! `x2 -> x1`, `x4 -> x3` in 1-based names. For the `UV` alphabet of size 4d
//! the first 2d slots are `u1..u2d` and the rest `v1..v2d`; the same rule
//! applies uniformly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lincomb::{render_terms, LinComb};
use crate::linalg::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlphabetName {
    X,
    Y,
    U,
    V,
    UV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarAlphabet {
    pub name: AlphabetName,
    pub size: usize,
}

impl VarAlphabet {
    pub fn new(name: AlphabetName, size: usize) -> Self {
        VarAlphabet { name, size }
    }

    pub fn x(size: usize) -> Self {
        Self::new(AlphabetName::X, size)
    }

    pub fn y(size: usize) -> Self {
        Self::new(AlphabetName::Y, size)
    }

    /// `u1..u2d, v1..v2d`.
    pub fn uv(d: usize) -> Self {
        Self::new(AlphabetName::UV, 4 * d)
    }

    pub fn is_paired(&self) -> bool {
        self.size.is_multiple_of(2)
    }

    pub fn pairs(&self) -> usize {
        self.size / 2
    }

    /// 1-based display name of variable `i`.
    pub fn var_name(&self, i: usize) -> String {
        match self.name {
            AlphabetName::X => format!("x{}", i + 1),
            AlphabetName::Y => format!("y{}", i + 1),
            AlphabetName::U => format!("u{}", i + 1),
            AlphabetName::V => format!("v{}", i + 1),
            AlphabetName::UV => {
                let half = self.size / 2;
                if i < half {
                    format!("u{}", i + 1)
                } else {
                    format!("v{}", i - half + 1)
                }
            }
        }
    }

    /// Slot of `u_k` (1-based) in the `UV` alphabet.
    pub fn u_slot(&self, k: usize) -> usize {
        k - 1
    }

    /// Slot of `v_k` (1-based) in the `UV` alphabet.
    pub fn v_slot(&self, k: usize) -> usize {
        self.size / 2 + k - 1
    }
}

impl fmt::Display for VarAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.name, self.size)
    }
}

/// Image of a variable under the derivation, if it is not killed.
pub fn delta_index(i: usize) -> Option<usize> {
    (i % 2 == 1).then(|| i - 1)
}

/// Exponent vector. Ordered by total degree, then so that higher powers of
/// earlier variables come first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommMonomial {
    exps: Vec<u32>,
}

impl Ord for CommMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for CommMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CommMonomial {
    pub fn one(size: usize) -> Self {
        CommMonomial { exps: vec![0; size] }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        CommMonomial { exps }
    }

    pub fn var(size: usize, i: usize) -> Self {
        let mut m = Self::one(size);
        m.exps[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn size(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        CommMonomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(CommMonomial { exps })
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Self {
        let mut m = self.clone();
        m.exps[i] = e;
        m
    }

    /// Joint degree in each derivation pair.
    pub fn pair_degrees(&self) -> Vec<u32> {
        self.exps.chunks(2).map(|c| c.iter().sum()).collect()
    }

    /// Degree in the variables that the derivation does not kill.
    pub fn weight(&self) -> u32 {
        self.exps.iter().skip(1).step_by(2).sum()
    }

    pub fn derive(&self) -> Vec<(u32, CommMonomial)> {
        let mut out = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            if let (Some(t), true) = (delta_index(i), e > 0) {
                let mut m = self.clone();
                m.exps[i] -= 1;
                m.exps[t] += 1;
                out.push((e, m));
            }
        }
        out
    }

    pub fn render(&self, alphabet: &VarAlphabet) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let v = alphabet.var_name(i);
                if e == 1 {
                    v
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }
}

/// All exponent vectors with the given pair degrees and weight.
pub fn monomials_with(pair_degrees: &[u32], weight: u32) -> Vec<CommMonomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; 2 * pair_degrees.len()];
    fill_pairs(pair_degrees, 0, weight, &mut exps, &mut out);
    out.sort();
    out
}

fn fill_pairs(pd: &[u32], p: usize, weight_left: u32, exps: &mut Vec<u32>, out: &mut Vec<CommMonomial>) {
    if p == pd.len() {
        if weight_left == 0 {
            out.push(CommMonomial::from_exponents(exps.clone()));
        }
        return;
    }
    let rest: u32 = pd[p + 1..].iter().sum();
    for w in 0..=pd[p].min(weight_left) {
        if weight_left - w > rest {
            continue;
        }
        exps[2 * p] = pd[p] - w;
        exps[2 * p + 1] = w;
        fill_pairs(pd, p + 1, weight_left - w, exps, out);
    }
}

/// All exponent vectors of `size` variables of total degree `n`.
pub fn monomials_of_degree(size: usize, n: u32) -> Vec<CommMonomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; size];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<CommMonomial>) {
        if i + 1 == exps.len() {
            exps[i] = left;
            out.push(CommMonomial::from_exponents(exps.clone()));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    if size == 0 {
        if n == 0 {
            out.push(CommMonomial::one(0));
        }
        return out;
    }
    rec(0, n, &mut exps, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommPoly {
    alphabet: VarAlphabet,
    terms: LinComb<CommMonomial>,
}

impl CommPoly {
    pub fn zero(alphabet: VarAlphabet) -> Self {
        CommPoly {
            alphabet,
            terms: LinComb::new(),
        }
    }

    pub fn constant(alphabet: VarAlphabet, c: Rational) -> Self {
        CommPoly {
            alphabet,
            terms: LinComb::from_term(CommMonomial::one(alphabet.size), c),
        }
    }

    pub fn one(alphabet: VarAlphabet) -> Self {
        Self::constant(alphabet, Rational::one())
    }

    /// The variable with 0-based index `i`.
    pub fn var(alphabet: VarAlphabet, i: usize) -> Self {
        assert!(i < alphabet.size, "variable index out of range");
        Self::monomial(alphabet, CommMonomial::var(alphabet.size, i), Rational::one())
    }

    pub fn monomial(alphabet: VarAlphabet, m: CommMonomial, c: Rational) -> Self {
        assert_eq!(m.size(), alphabet.size, "monomial length");
        CommPoly {
            alphabet,
            terms: LinComb::from_term(m, c),
        }
    }

    pub fn from_lincomb(alphabet: VarAlphabet, terms: LinComb<CommMonomial>) -> Self {
        debug_assert!(terms.monomials().all(|m| m.size() == alphabet.size));
        CommPoly { alphabet, terms }
    }

    pub fn alphabet(&self) -> VarAlphabet {
        self.alphabet
    }

    pub fn terms(&self) -> &LinComb<CommMonomial> {
        &self.terms
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

    pub fn coefficient(&self, m: &CommMonomial) -> Rational {
        self.terms.coefficient(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CommMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.monomials().map(CommMonomial::degree).max()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.to_string(),
                right: other.alphabet.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut t = self.terms.clone();
        t.add_assign(&other.terms);
        Ok(Self::from_lincomb(self.alphabet, t))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut t = LinComb::new();
        for (a, x) in self.iter() {
            for (b, y) in other.iter() {
                t.add_term(a.mul(b), x * y);
            }
        }
        Ok(Self::from_lincomb(self.alphabet, t))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_lincomb(self.alphabet, self.terms.scaled(c))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.alphabet), |acc, _| &acc * self)
    }

    pub fn weitz_derive(&self) -> Result<Self> {
        if !self.alphabet.is_paired() {
            return Err(Error::OddAlphabet(self.alphabet.size));
        }
        let mut t = LinComb::new();
        for (m, c) in self.iter() {
            for (e, dm) in m.derive() {
                t.add_term(dm, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        Ok(Self::from_lincomb(self.alphabet, t))
    }

    /// `sum_k delta^k(p) / k!`; finite since the derivation is locally nilpotent.
    pub fn exp_delta(&self) -> Result<Self> {
        let mut out = self.clone();
        let mut cur = self.clone();
        let mut k = 1i64;
        loop {
            cur = cur.weitz_derive()?.scale(&Rational::new(BigInt::one(), BigInt::from(k)));
            if cur.is_zero() {
                return Ok(out);
            }
            out = &out + &cur;
            k += 1;
        }
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn substitute(&self, images: &[CommPoly]) -> Result<CommPoly> {
        if images.len() != self.alphabet.size {
            return Err(Error::DimensionMismatch {
                expected: self.alphabet.size,
                found: images.len(),
            });
        }
        let target = images
            .first()
            .map(CommPoly::alphabet)
            .ok_or_else(|| Error::InvalidArgument("empty substitution".into()))?;
        let mut out = CommPoly::zero(target);
        for (m, c) in self.iter() {
            let mut term = CommPoly::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.try_mul(&images[i].pow(e))?;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Whether every term has the same pair degrees and weight.
    pub fn grading(&self) -> Option<(Vec<u32>, u32)> {
        let mut it = self.terms.monomials();
        let first = it.next()?;
        let key = (first.pair_degrees(), first.weight());
        it.all(|m| m.pair_degrees() == key.0 && m.weight() == key.1)
            .then_some(key)
    }

    pub fn render(&self) -> String {
        render_terms(
            self.iter()
                .map(|(m, c)| (c.clone(), m.render(&self.alphabet))),
        )
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Checked product.
pub fn poly_mul(p: &CommPoly, q: &CommPoly) -> Result<CommPoly> {
    p.try_mul(q)
}

pub fn weitz_derive(p: &CommPoly) -> Result<CommPoly> {
    p.weitz_derive()
}

pub fn exp_delta(p: &CommPoly) -> Result<CommPoly> {
    p.exp_delta()
}

// Operator forms panic on alphabet mismatch; use the `try_` methods on
// untrusted input.
impl Add for &CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &CommPoly) -> CommPoly {
        self.try_add(rhs).expect("alphabet mismatch")
    }
}

impl Sub for &CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &CommPoly) -> CommPoly {
        self.try_add(&-rhs).expect("alphabet mismatch")
    }
}

impl Mul for &CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &CommPoly) -> CommPoly {
        self.try_mul(rhs).expect("alphabet mismatch")
    }
}

impl Neg for &CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        CommPoly::from_lincomb(self.alphabet, self.terms.negated())
    }
}

/// `x1, x3, ..., x_{2d-1}` followed by `x_{2i-1} x_{2j} - x_{2i} x_{2j-1}` for
/// `i < j`.
pub fn nowicki_generators(d: usize) -> Vec<CommPoly> {
    let a = VarAlphabet::x(2 * d);
    let mut out: Vec<CommPoly> = (0..d).map(|i| CommPoly::var(a, 2 * i)).collect();
    for i in 0..d {
        for j in i + 1..d {
            out.push(determinant(a, 2 * i, 2 * j));
        }
    }
    out
}

/// `z_p z_{q+1} - z_{p+1} z_q` for 0-based odd-partner slots `p`, `q`.
pub fn determinant(a: VarAlphabet, p: usize, q: usize) -> CommPoly {
    let l = &CommPoly::var(a, p) * &CommPoly::var(a, q + 1);
    let r = &CommPoly::var(a, p + 1) * &CommPoly::var(a, q);
    &l - &r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use proptest::prelude::*;

    fn x(i: usize) -> CommPoly {
        CommPoly::var(VarAlphabet::x(4), i - 1)
    }

    #[test]
    fn products() {
        assert_eq!((&x(1) * &x(2)).render(), "x1*x2");
        let s = &x(1) + &x(2);
        assert_eq!((&s * &s).render(), "x1^2 + 2*x1*x2 + x2^2");
        let p = &s * &x(3);
        assert_eq!(&p * &CommPoly::one(VarAlphabet::x(4)), p);
        assert!(poly_mul(&x(1), &CommPoly::var(VarAlphabet::y(4), 0)).is_err());
    }

    #[test]
    fn derivation_examples() {
        assert_eq!(x(2).weitz_derive().unwrap(), x(1));
        assert!(x(1).weitz_derive().unwrap().is_zero());
        let det = &(&x(1) * &x(4)) - &(&x(2) * &x(3));
        assert_eq!(det.render(), "x1*x4 - x2*x3");
        assert!(det.weitz_derive().unwrap().is_zero());
        let odd = CommPoly::var(VarAlphabet::x(3), 0);
        assert_eq!(odd.weitz_derive(), Err(Error::OddAlphabet(3)));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(x(1).exp_delta().unwrap(), x(1));
        assert_eq!(x(2).exp_delta().unwrap(), &x(2) + &x(1));
        let det = &(&x(1) * &x(4)) - &(&x(2) * &x(3));
        assert_eq!(det.exp_delta().unwrap(), det);
    }

    #[test]
    fn nowicki_lists() {
        let g1: Vec<String> = nowicki_generators(1).iter().map(CommPoly::render).collect();
        assert_eq!(g1, ["x1"]);
        let g2: Vec<String> = nowicki_generators(2).iter().map(CommPoly::render).collect();
        assert_eq!(g2, ["x1", "x3", "x1*x4 - x2*x3"]);
        for d in 1..=4 {
            let gens = nowicki_generators(d);
            assert_eq!(gens.len(), d + d * (d - 1) / 2);
            assert!(gens.iter().all(|g| g.weitz_derive().unwrap().is_zero()));
        }
    }

    #[test]
    fn uv_names_and_derivation() {
        let a = VarAlphabet::uv(2);
        assert_eq!(a.var_name(a.u_slot(4)), "u4");
        assert_eq!(a.var_name(a.v_slot(2)), "v2");
        let v2 = CommPoly::var(a, a.v_slot(2));
        assert_eq!(v2.weitz_derive().unwrap(), CommPoly::var(a, a.v_slot(1)));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(monomials_of_degree(4, 2).len(), 10);
        let all: usize = (0..=3).map(|w| monomials_with(&[2, 1], w).len()).sum();
        assert_eq!(all, 3 * 2);
        for m in monomials_with(&[2, 1], 1) {
            assert_eq!(m.pair_degrees(), vec![2, 1]);
            assert_eq!(m.weight(), 1);
        }
    }

    #[test]
    fn substitution() {
        let a = VarAlphabet::x(2);
        let p = &CommPoly::var(a, 0) * &CommPoly::var(a, 1);
        let imgs = vec![
            &CommPoly::var(a, 0) + &CommPoly::var(a, 1),
            CommPoly::constant(a, int(2)),
        ];
        assert_eq!(p.substitute(&imgs).unwrap().render(), "2*x1 + 2*x2");
    }

    fn poly(size: usize) -> impl Strategy<Value = CommPoly> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, size), -3i64..4), 0..5).prop_map(
            move |ts| {
                let a = VarAlphabet::x(size);
                let t = ts
                    .into_iter()
                    .map(|(e, c)| (CommMonomial::from_exponents(e), int(c)))
                    .collect();
                CommPoly::from_lincomb(a, t)
            },
        )
    }

    proptest! {
        #[test]
        fn leibniz(p in poly(4), q in poly(4)) {
            let lhs = (&p * &q).weitz_derive().unwrap();
            let rhs = &(&p.weitz_derive().unwrap() * &q) + &(&p * &q.weitz_derive().unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn local_nilpotence(p in poly(4)) {
            let w = p.iter().map(|(m, _)| m.weight()).max().unwrap_or(0);
            let mut cur = p.clone();
            for _ in 0..=w {
                cur = cur.weitz_derive().unwrap();
            }
            prop_assert!(cur.is_zero());
        }

        #[test]
        fn exp_is_multiplicative(p in poly(4), q in poly(4)) {
            let lhs = (&p * &q).exp_delta().unwrap();
            let rhs = &p.exp_delta().unwrap() * &q.exp_delta().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fixed_points_are_constants(p in poly(4)) {
            // Restrict to the homogeneous piece of the lead term.
            if let Some((m, _)) = p.iter().next() {
                let key = (m.pair_degrees(), m.weight());
                let h = CommPoly::from_lincomb(
                    p.alphabet(),
                    p.iter()
                        .filter(|(n, _)| (n.pair_degrees(), n.weight()) == key)
                        .map(|(n, c)| (n.clone(), c.clone()))
                        .collect(),
                );
                let is_const = h.weitz_derive().unwrap().is_zero();
                prop_assert_eq!(is_const, h.exp_delta().unwrap() == h);
            }
        }
    }
}

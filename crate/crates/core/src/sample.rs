//! Seeded random elements for property runs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commpoly::{CommMonomial, CommPoly, VarAlphabet};
use crate::exprio::{AlgebraKind, AnyElement};
use crate::grassmann::{grass_mul, GrassElement};
use crate::linalg::Rational;
use crate::metabelian::{meta_normalize, MetaElement, WordFactor};
use crate::wreath::{ModuleElement, WreathElement};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits for random elements.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub terms: usize,
    pub degree: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { terms: 4, degree: 3 }
    }
}

pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = rng.gen_range(1..=4);
    Rational::new(n.into(), d.into())
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = rational(rng);
        if r != Rational::from_integer(0.into()) {
            return r;
        }
    }
}

fn monomial<R: Rng>(rng: &mut R, size: usize, degree: usize) -> CommMonomial {
    let mut e = vec![0u32; size];
    for _ in 0..rng.gen_range(0..=degree) {
        e[rng.gen_range(0..size)] += 1;
    }
    CommMonomial::from_exponents(e)
}

pub fn poly<R: Rng>(rng: &mut R, alphabet: VarAlphabet, shape: Shape) -> CommPoly {
    let mut out = CommPoly::zero(alphabet);
    for _ in 0..rng.gen_range(0..=shape.terms) {
        let m = CommPoly::monomial(alphabet, monomial(rng, alphabet.size, shape.degree), rational(rng));
        out = out.try_add(&m).expect("same alphabet");
    }
    out
}

pub fn meta<R: Rng>(rng: &mut R, d: usize, shape: Shape) -> MetaElement {
    let n = 2 * d;
    let raw: Vec<(Rational, Vec<WordFactor>)> = (0..rng.gen_range(0..=shape.terms))
        .map(|_| {
            let len = rng.gen_range(0..=shape.degree);
            let word = (0..len)
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        let k = rng.gen_range(2..=3);
                        WordFactor::Commutator((0..k).map(|_| rng.gen_range(0..n)).collect())
                    } else {
                        WordFactor::Letter(rng.gen_range(0..n))
                    }
                })
                .collect();
            (rational(rng), word)
        })
        .collect();
    meta_normalize(d, &raw).expect("letters in range")
}

pub fn grass<R: Rng>(rng: &mut R, d: usize, shape: Shape) -> GrassElement {
    let mut out = GrassElement::zero(d);
    for _ in 0..rng.gen_range(0..=shape.terms) {
        let mut t = GrassElement::one(d).scale(&rational(rng));
        for _ in 0..rng.gen_range(0..=shape.degree) {
            t = grass_mul(&t, &GrassElement::letter(d, rng.gen_range(0..2 * d))).expect("same rank");
        }
        out = out.add(&t);
    }
    out
}

pub fn module<R: Rng>(rng: &mut R, d: usize, shape: Shape) -> ModuleElement {
    let coeffs: Vec<CommPoly> = (0..2 * d)
        .map(|_| {
            if rng.gen_bool(0.5) {
                poly(rng, VarAlphabet::uv(d), Shape { terms: 2, ..shape })
            } else {
                CommPoly::zero(VarAlphabet::uv(d))
            }
        })
        .collect();
    ModuleElement::from_coefficients(d, &coeffs)
}

pub fn wreath<R: Rng>(rng: &mut R, d: usize, shape: Shape) -> WreathElement {
    let p = poly(rng, VarAlphabet::y(2 * d), shape);
    WreathElement::from_poly(d, p).add(&WreathElement::from_module(module(rng, d, shape)))
}

pub fn any<R: Rng>(rng: &mut R, kind: AlgebraKind, d: usize, shape: Shape) -> AnyElement {
    match kind {
        AlgebraKind::Comm => AnyElement::Comm(poly(rng, VarAlphabet::x(2 * d), shape)),
        AlgebraKind::Uv => AnyElement::Uv(poly(rng, VarAlphabet::uv(d), shape)),
        AlgebraKind::Meta => AnyElement::Meta(meta(rng, d, shape)),
        AlgebraKind::Grass => AnyElement::Grass(grass(rng, d, shape)),
        AlgebraKind::Wreath => AnyElement::Wreath(wreath(rng, d, shape)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_runs_repeat() {
        let a: Vec<String> = (0..5).map(|_| meta(&mut rng(7), 2, Shape::default()).render()).collect();
        let b: Vec<String> = (0..5).map(|_| meta(&mut rng(7), 2, Shape::default()).render()).collect();
        assert_eq!(a, b);
        let mut r = rng(1);
        let kinds = AlgebraKind::ALL.map(|k| any(&mut r, k, 2, Shape::default()).kind());
        assert_eq!(kinds, AlgebraKind::ALL);
    }
}

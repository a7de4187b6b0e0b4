//! Text and JSON exchange formats for elements of every algebra.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := [rational ['*']] factor ('*' factor)* | rational
//! factor := var ['^' nat] | '[' var (',' var)+ ']'
//! var    := ('x'|'y'|'u'|'v'|'a') nat
//! ```
//!
//! Indices are 1-based everywhere. In the wreath algebra `u`/`v` letters are
//! module coefficients and must follow an `a` letter in the same term.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::commpoly::{CommMonomial, CommPoly, VarAlphabet};
use crate::constants::ConstGen;
use crate::error::{Error, Result};
use crate::grassmann::{grass_commutator, grass_mul, GrassElement, GrassMonomial};
use crate::lincomb::LinComb;
use crate::linalg::Rational;
use crate::metabelian::{meta_normalize, CommTerm, MetaElement, MetaMonomial, WordFactor};
use crate::wreath::{wreath_mul, ModMono, ModuleElement, WreathElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Comm,
    Uv,
    Meta,
    Grass,
    Wreath,
}

impl AlgebraKind {
    pub const ALL: [AlgebraKind; 5] = [
        AlgebraKind::Comm,
        AlgebraKind::Uv,
        AlgebraKind::Meta,
        AlgebraKind::Grass,
        AlgebraKind::Wreath,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            AlgebraKind::Comm => "comm",
            AlgebraKind::Uv => "uv",
            AlgebraKind::Meta => "meta",
            AlgebraKind::Grass => "grass",
            AlgebraKind::Wreath => "wreath",
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgebraKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algebra {s:?}")))
    }
}

/// An element of any supported algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyElement {
    Comm(CommPoly),
    Uv(CommPoly),
    Meta(MetaElement),
    Grass(GrassElement),
    Wreath(WreathElement),
}

impl AnyElement {
    pub fn kind(&self) -> AlgebraKind {
        match self {
            AnyElement::Comm(_) => AlgebraKind::Comm,
            AnyElement::Uv(_) => AlgebraKind::Uv,
            AnyElement::Meta(_) => AlgebraKind::Meta,
            AnyElement::Grass(_) => AlgebraKind::Grass,
            AnyElement::Wreath(_) => AlgebraKind::Wreath,
        }
    }

    pub fn render(&self) -> String {
        match self {
            AnyElement::Comm(p) | AnyElement::Uv(p) => p.render(),
            AnyElement::Meta(e) => e.render(),
            AnyElement::Grass(e) => e.render(),
            AnyElement::Wreath(e) => e.render(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AnyElement::Comm(p) | AnyElement::Uv(p) => p.is_zero(),
            AnyElement::Meta(e) => e.is_zero(),
            AnyElement::Grass(e) => e.is_zero(),
            AnyElement::Wreath(e) => e.is_zero(),
        }
    }
}

impl fmt::Display for AnyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// ---------------------------------------------------------------- lexing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(char, usize),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            out.push((start, t));
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse::<BigInt>().map_err(|e| parse_err(start, e.to_string()))?;
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word = &text[start..i];
            let digits = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if word.len() == 1 && i > digits && "xyuva".contains(word) {
                let idx: usize = text[digits..i].parse().map_err(|_| parse_err(digits, "index too large"))?;
                if idx == 0 {
                    return Err(parse_err(digits, "indices start at 1"));
                }
                out.push((start, Tok::Var(word.chars().next().unwrap(), idx)));
            } else if i > digits {
                return Err(parse_err(start, format!("unknown variable {:?}", &text[start..i])));
            } else {
                out.push((start, Tok::Ident(word.to_string())));
            }
        } else {
            let ch = text[i..].chars().next().unwrap();
            return Err(parse_err(start, format!("unexpected character {ch:?}")));
        }
    }
    Ok(out)
}

fn parse_err(pos: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        message: message.into(),
    }
}

// ---------------------------------------------------------------- syntax

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Var { letter: char, index: usize, exp: u32, pos: usize },
    Commutator { vars: Vec<(char, usize)>, pos: usize },
}

/// A parsed, not yet normalized, term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub factors: Vec<Factor>,
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(parse_err(self.pos(), format!("expected {what}")))
        }
    }

    fn nat(&mut self, what: &str) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.at += 1;
                Ok(n)
            }
            _ => Err(parse_err(self.pos(), format!("expected {what}"))),
        }
    }

    fn small(&mut self, what: &str) -> Result<usize> {
        let p = self.pos();
        let n = self.nat(what)?;
        usize::try_from(n).map_err(|_| parse_err(p, format!("{what} too large")))
    }

    fn rational(&mut self) -> Result<Option<Rational>> {
        let Some(Tok::Int(_)) = self.peek() else { return Ok(None) };
        let n = self.nat("integer")?;
        if self.eat(&Tok::Slash) {
            let p = self.pos();
            let den = self.nat("denominator")?;
            if den.is_zero() {
                return Err(parse_err(p, "zero denominator"));
            }
            Ok(Some(Rational::new(n, den)))
        } else {
            Ok(Some(Rational::from_integer(n)))
        }
    }

    fn var(&mut self) -> Result<(char, usize)> {
        match self.peek() {
            Some(&Tok::Var(c, k)) => {
                self.at += 1;
                Ok((c, k))
            }
            _ => Err(parse_err(self.pos(), "expected a variable")),
        }
    }

    fn factor(&mut self) -> Result<Factor> {
        let pos = self.pos();
        if self.eat(&Tok::LBracket) {
            let mut vars = vec![self.var()?];
            while self.eat(&Tok::Comma) {
                vars.push(self.var()?);
            }
            self.expect(&Tok::RBracket, "']'")?;
            if vars.len() < 2 {
                return Err(parse_err(pos, "commutator needs at least two entries"));
            }
            return Ok(Factor::Commutator { vars, pos });
        }
        let (letter, index) = self.var()?;
        let exp = if self.eat(&Tok::Caret) {
            let p = self.pos();
            let e = self.nat("exponent")?;
            u32::try_from(e).map_err(|_| parse_err(p, "exponent too large"))?
        } else {
            1
        };
        Ok(Factor::Var { letter, index, exp, pos })
    }

    fn term(&mut self, sign: bool) -> Result<Term> {
        let mut coeff = match self.rational()? {
            Some(c) => {
                if !self.eat(&Tok::Star) && !matches!(self.peek(), Some(Tok::Var(..)) | Some(Tok::LBracket)) {
                    let c = if sign { -c } else { c };
                    return Ok(Term { coeff: c, factors: vec![] });
                }
                c
            }
            None => Rational::one(),
        };
        if sign {
            coeff = -coeff;
        }
        let mut factors = vec![self.factor()?];
        while self.eat(&Tok::Star) {
            factors.push(self.factor()?);
        }
        Ok(Term { coeff, factors })
    }

    fn expr(&mut self) -> Result<Vec<Term>> {
        let mut sign = self.eat(&Tok::Minus);
        if !sign {
            self.eat(&Tok::Plus);
        }
        let mut out = vec![self.term(sign)?];
        loop {
            if self.eat(&Tok::Plus) {
                sign = false;
            } else if self.eat(&Tok::Minus) {
                sign = true;
            } else {
                break;
            }
            out.push(self.term(sign)?);
        }
        if self.at < self.toks.len() {
            return Err(parse_err(self.pos(), "unexpected input"));
        }
        Ok(out)
    }
}

/// Parses the surface syntax without interpreting it in any algebra.
pub fn parse_terms(text: &str) -> Result<Vec<Term>> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(parse_err(0, "empty expression"));
    }
    Parser {
        toks: &toks,
        at: 0,
        end: text.len(),
    }
    .expr()
}

// ---------------------------------------------------------------- evaluation

fn check_letter(letter: char, index: usize, allowed: &[(char, usize)], pos: usize) -> Result<()> {
    match allowed.iter().find(|(c, _)| *c == letter) {
        None => Err(parse_err(pos, format!("variable {letter}{index} is not allowed here"))),
        Some(&(_, n)) if index > n => Err(Error::IndexOutOfRange(format!(
            "{letter}{index} at byte {pos}: at most {letter}{n}"
        ))),
        _ => Ok(()),
    }
}

fn no_commutator(f: &Factor, kind: AlgebraKind) -> Result<()> {
    if let Factor::Commutator { pos, .. } = f {
        return Err(parse_err(*pos, format!("commutators are not defined in {kind}")));
    }
    Ok(())
}

fn eval_comm(terms: &[Term], alphabet: VarAlphabet, kind: AlgebraKind, d: usize) -> Result<CommPoly> {
    let mut out = CommPoly::zero(alphabet);
    for t in terms {
        let mut e = vec![0u32; alphabet.size];
        for f in &t.factors {
            no_commutator(f, kind)?;
            let Factor::Var { letter, index, exp, pos } = *f else { unreachable!() };
            let slot = match kind {
                AlgebraKind::Comm => {
                    check_letter(letter, index, &[('x', 2 * d)], pos)?;
                    index - 1
                }
                _ => {
                    check_letter(letter, index, &[('u', 2 * d), ('v', 2 * d)], pos)?;
                    if letter == 'u' {
                        alphabet.u_slot(index)
                    } else {
                        alphabet.v_slot(index)
                    }
                }
            };
            e[slot] += exp;
        }
        let m = CommPoly::monomial(alphabet, CommMonomial::from_exponents(e), t.coeff.clone());
        out = out.try_add(&m)?;
    }
    Ok(out)
}

fn eval_meta(terms: &[Term], d: usize) -> Result<MetaElement> {
    let allowed = [('x', 2 * d)];
    let mut raw = Vec::new();
    for t in terms {
        let mut word = Vec::new();
        for f in &t.factors {
            match f {
                Factor::Var { letter, index, exp, pos } => {
                    check_letter(*letter, *index, &allowed, *pos)?;
                    word.extend(std::iter::repeat_n(WordFactor::Letter(index - 1), *exp as usize));
                }
                Factor::Commutator { vars, pos } => {
                    for &(c, k) in vars {
                        check_letter(c, k, &allowed, *pos)?;
                    }
                    word.push(WordFactor::Commutator(vars.iter().map(|&(_, k)| k - 1).collect()));
                }
            }
        }
        raw.push((t.coeff.clone(), word));
    }
    meta_normalize(d, &raw)
}

fn grass_position(letter: char, index: usize) -> usize {
    2 * (index - 1) + usize::from(letter == 'y')
}

fn eval_grass(terms: &[Term], d: usize) -> Result<GrassElement> {
    let allowed = [('x', d), ('y', d)];
    let mut out = GrassElement::zero(d);
    for t in terms {
        let mut acc = GrassElement::one(d).scale(&t.coeff);
        for f in &t.factors {
            let g = match f {
                Factor::Var { letter, index, exp, pos } => {
                    check_letter(*letter, *index, &allowed, *pos)?;
                    let l = GrassElement::letter(d, grass_position(*letter, *index));
                    let mut p = GrassElement::one(d);
                    for _ in 0..*exp {
                        p = grass_mul(&p, &l)?;
                    }
                    p
                }
                Factor::Commutator { vars, pos } => {
                    for &(c, k) in vars {
                        check_letter(c, k, &allowed, *pos)?;
                    }
                    let mut c = GrassElement::letter(d, grass_position(vars[0].0, vars[0].1));
                    for &(l, k) in &vars[1..] {
                        c = grass_commutator(&c, &GrassElement::letter(d, grass_position(l, k)))?;
                    }
                    c
                }
            };
            acc = grass_mul(&acc, &g)?;
        }
        out = out.add(&acc);
    }
    Ok(out)
}

fn eval_wreath(terms: &[Term], d: usize) -> Result<WreathElement> {
    let n = 2 * d;
    let uv = VarAlphabet::uv(d);
    let mut out = WreathElement::zero(d);
    for t in terms {
        let mut acc = WreathElement::one(d).scale(&t.coeff);
        for f in &t.factors {
            no_commutator(f, AlgebraKind::Wreath)?;
            let Factor::Var { letter, index, exp, pos } = *f else { unreachable!() };
            check_letter(letter, index, &[('y', n), ('a', n), ('u', n), ('v', n)], pos)?;
            match letter {
                'y' | 'a' => {
                    let g = if letter == 'y' {
                        WreathElement::y(d, index - 1)
                    } else {
                        WreathElement::a(d, index - 1)
                    };
                    for _ in 0..exp {
                        acc = wreath_mul(&acc, &g)?;
                    }
                }
                _ => {
                    if !acc.poly.is_zero() {
                        return Err(parse_err(pos, "u/v coefficients must follow an a letter"));
                    }
                    let slot = if letter == 'u' { uv.u_slot(index) } else { uv.v_slot(index) };
                    let mut p = CommPoly::one(uv);
                    for _ in 0..exp {
                        p = p.try_mul(&CommPoly::var(uv, slot))?;
                    }
                    acc = WreathElement::from_module(acc.module.times(&p));
                }
            }
        }
        out = out.add(&acc);
    }
    Ok(out)
}

/// Parses `text` and normalizes it in the given algebra of rank `d`.
pub fn parse(text: &str, kind: AlgebraKind, d: usize) -> Result<AnyElement> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let terms = parse_terms(text)?;
    Ok(match kind {
        AlgebraKind::Comm => AnyElement::Comm(eval_comm(&terms, VarAlphabet::x(2 * d), kind, d)?),
        AlgebraKind::Uv => AnyElement::Uv(eval_comm(&terms, VarAlphabet::uv(d), kind, d)?),
        AlgebraKind::Meta => AnyElement::Meta(eval_meta(&terms, d)?),
        AlgebraKind::Grass => AnyElement::Grass(eval_grass(&terms, d)?),
        AlgebraKind::Wreath => AnyElement::Wreath(eval_wreath(&terms, d)?),
    })
}

pub fn render(e: &AnyElement) -> String {
    e.render()
}

/// Parses a product of constant generators such as `alpha(1,3)*u(2)`.
pub fn parse_constgen_product(text: &str, d: usize) -> Result<Vec<ConstGen>> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        at: 0,
        end: text.len(),
    };
    let mut out = Vec::new();
    if toks.len() == 1 && toks[0].1 == Tok::Int(BigInt::one()) {
        return Ok(out);
    }
    loop {
        let pos = p.pos();
        let g = match p.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                p.at += 1;
                p.expect(&Tok::LParen, "'('")?;
                let a = p.small("index")?;
                let g = match name.as_str() {
                    "u" | "v" => {
                        p.expect(&Tok::RParen, "')'")?;
                        if name == "u" {
                            ConstGen::Uodd(a)
                        } else {
                            ConstGen::Vodd(a)
                        }
                    }
                    "alpha" | "beta" | "gamma" => {
                        p.expect(&Tok::Comma, "','")?;
                        let b = p.small("index")?;
                        p.expect(&Tok::RParen, "')'")?;
                        match name.as_str() {
                            "alpha" => ConstGen::Alpha(a, b),
                            "beta" => ConstGen::Beta(a, b),
                            _ => ConstGen::Gamma(a, b),
                        }
                    }
                    _ => return Err(parse_err(pos, format!("unknown generator {name:?}"))),
                };
                g.check(d)?;
                g
            }
            _ => return Err(parse_err(pos, "expected u, v, alpha, beta or gamma")),
        };
        out.push(g);
        if p.at == toks.len() {
            return Ok(out);
        }
        p.expect(&Tok::Star, "'*'")?;
    }
}

// ---------------------------------------------------------------- JSON

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub exponents: Vec<u32>,
    #[serde(default)]
    pub comm: Vec<Vec<usize>>,
    /// Module generator index, wreath module terms only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonElement {
    pub algebra: AlgebraKind,
    pub d: usize,
    pub terms: Vec<JsonTerm>,
}

fn jt(c: &Rational, exponents: &[u32], comm: Vec<Vec<usize>>, a: Option<usize>) -> JsonTerm {
    JsonTerm {
        coeff: c.to_string(),
        exponents: exponents.to_vec(),
        comm,
        a,
    }
}

pub fn to_json_value(e: &AnyElement) -> JsonElement {
    let (d, terms) = match e {
        AnyElement::Comm(p) => (p.alphabet().size / 2, p.iter().map(|(m, c)| jt(c, m.exponents(), vec![], None)).collect()),
        AnyElement::Uv(p) => (p.alphabet().size / 4, p.iter().map(|(m, c)| jt(c, m.exponents(), vec![], None)).collect()),
        AnyElement::Meta(f) => (
            f.d(),
            f.iter()
                .map(|(m, c)| match m {
                    MetaMonomial::Pure(w) => jt(c, w.exponents(), vec![], None),
                    MetaMonomial::Comm(t) => {
                        let mut letters = vec![t.head.0 + 1, t.head.1 + 1];
                        letters.extend(t.tail.iter().map(|k| k + 1));
                        jt(c, t.exps.exponents(), vec![letters], None)
                    }
                })
                .collect(),
        ),
        AnyElement::Grass(f) => (
            f.d(),
            f.iter()
                .map(|(m, c)| {
                    let comm = m.block.chunks(2).map(|p| vec![p[0] + 1, p[1] + 1]).collect();
                    jt(c, m.word.exponents(), comm, None)
                })
                .collect(),
        ),
        AnyElement::Wreath(w) => {
            let mut terms: Vec<JsonTerm> = w.poly.iter().map(|(m, c)| jt(c, m.exponents(), vec![], None)).collect();
            terms.extend(w.module.iter().map(|(m, c)| jt(c, m.mono.exponents(), vec![], Some(m.a + 1))));
            (w.d(), terms)
        }
    };
    JsonElement {
        algebra: e.kind(),
        d,
        terms,
    }
}

pub fn to_json(e: &AnyElement) -> String {
    serde_json::to_string(&to_json_value(e)).expect("plain data serializes")
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

fn parse_coeff(s: &str, pointer: &str) -> Result<Rational> {
    let (n, den) = match s.split_once('/') {
        Some((n, den)) => (n.trim(), den.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| schema(pointer, format!("bad numerator in {s:?}")))?;
    let den: BigInt = den.parse().map_err(|_| schema(pointer, format!("bad denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(schema(pointer, "zero denominator"));
    }
    Ok(Rational::new(n, den))
}

fn exps_len(pointer: &str, e: &[u32], n: usize) -> Result<CommMonomial> {
    if e.len() != n {
        return Err(schema(pointer, format!("expected {n} exponents, found {}", e.len())));
    }
    Ok(CommMonomial::from_exponents(e.to_vec()))
}

fn no_comm(pointer: &str, t: &JsonTerm) -> Result<()> {
    if t.comm.is_empty() {
        Ok(())
    } else {
        Err(schema(format!("{pointer}/comm"), "commutators are not allowed here"))
    }
}

fn letters_in(pointer: &str, ls: &[usize], n: usize) -> Result<Vec<usize>> {
    ls.iter()
        .enumerate()
        .map(|(k, &l)| {
            if (1..=n).contains(&l) {
                Ok(l - 1)
            } else {
                Err(schema(format!("{pointer}/{k}"), format!("index {l} outside 1..={n}")))
            }
        })
        .collect()
}

/// Rebuilds an element; every term must already be in normal form.
pub fn from_json_value(doc: &JsonElement) -> Result<AnyElement> {
    let d = doc.d;
    if d == 0 {
        return Err(schema("/d", "d must be at least 1"));
    }
    let n = 2 * d;
    let mut comm_terms = LinComb::new();
    let mut meta_terms = LinComb::new();
    let mut grass_terms = LinComb::new();
    let mut mod_terms = LinComb::new();
    for (k, t) in doc.terms.iter().enumerate() {
        let ptr = format!("/terms/{k}");
        let c = parse_coeff(&t.coeff, &format!("{ptr}/coeff"))?;
        if c.is_zero() {
            return Err(schema(format!("{ptr}/coeff"), "zero coefficient"));
        }
        let eptr = format!("{ptr}/exponents");
        if t.a.is_some() && doc.algebra != AlgebraKind::Wreath {
            return Err(schema(format!("{ptr}/a"), "only wreath terms carry a module index"));
        }
        match doc.algebra {
            AlgebraKind::Comm => {
                no_comm(&ptr, t)?;
                comm_terms.add_term(exps_len(&eptr, &t.exponents, n)?, c);
            }
            AlgebraKind::Uv => {
                no_comm(&ptr, t)?;
                comm_terms.add_term(exps_len(&eptr, &t.exponents, 2 * n)?, c);
            }
            AlgebraKind::Meta => {
                let exps = exps_len(&eptr, &t.exponents, n)?;
                let m = match t.comm.as_slice() {
                    [] => MetaMonomial::Pure(exps),
                    [ls] => {
                        let cptr = format!("{ptr}/comm/0");
                        let ls = letters_in(&cptr, ls, n)?;
                        if ls.len() < 2 || ls[0] <= ls[1] || ls[2..].iter().any(|&x| x < ls[1]) || ls[2..].windows(2).any(|w| w[0] > w[1]) {
                            return Err(schema(cptr, "commutator is not in normal form"));
                        }
                        MetaMonomial::Comm(CommTerm {
                            exps,
                            head: (ls[0], ls[1]),
                            tail: ls[2..].to_vec(),
                        })
                    }
                    _ => return Err(schema(format!("{ptr}/comm"), "at most one commutator per term")),
                };
                meta_terms.add_term(m, c);
            }
            AlgebraKind::Grass => {
                let word = exps_len(&eptr, &t.exponents, n)?;
                let mut block = Vec::new();
                for (b, pair) in t.comm.iter().enumerate() {
                    let cptr = format!("{ptr}/comm/{b}");
                    if pair.len() != 2 {
                        return Err(schema(cptr, "expected a pair"));
                    }
                    block.extend(letters_in(&cptr, pair, n)?);
                }
                if block.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(schema(format!("{ptr}/comm"), "block is not strictly increasing"));
                }
                grass_terms.add_term(GrassMonomial { word, block }, c);
            }
            AlgebraKind::Wreath => {
                no_comm(&ptr, t)?;
                match t.a {
                    None => comm_terms.add_term(exps_len(&eptr, &t.exponents, n)?, c),
                    Some(a) => {
                        if !(1..=n).contains(&a) {
                            return Err(schema(format!("{ptr}/a"), format!("index {a} outside 1..={n}")));
                        }
                        let mono = exps_len(&eptr, &t.exponents, 2 * n)?;
                        mod_terms.add_term(ModMono { a: a - 1, mono }, c);
                    }
                }
            }
        }
    }
    Ok(match doc.algebra {
        AlgebraKind::Comm => AnyElement::Comm(CommPoly::from_lincomb(VarAlphabet::x(n), comm_terms)),
        AlgebraKind::Uv => AnyElement::Uv(CommPoly::from_lincomb(VarAlphabet::uv(d), comm_terms)),
        AlgebraKind::Meta => AnyElement::Meta(MetaElement::from_lincomb(d, meta_terms)),
        AlgebraKind::Grass => AnyElement::Grass(GrassElement::from_lincomb(d, grass_terms)),
        AlgebraKind::Wreath => {
            let poly = CommPoly::from_lincomb(VarAlphabet::y(n), comm_terms);
            let module = ModuleElement::from_lincomb(d, mod_terms);
            AnyElement::Wreath(WreathElement::from_poly(d, poly).add(&WreathElement::from_module(module)))
        }
    })
}

pub fn from_json(text: &str) -> Result<AnyElement> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema("", e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| schema("", "expected an object"))?;
    for key in ["algebra", "d", "terms"] {
        if !obj.contains_key(key) {
            return Err(schema(format!("/{key}"), "missing field"));
        }
    }
    if let Some(terms) = obj["terms"].as_array() {
        for (k, t) in terms.iter().enumerate() {
            if let Some(c) = t.get("coeff") {
                if !c.is_string() {
                    return Err(schema(format!("/terms/{k}/coeff"), "expected a string \"p/q\""));
                }
            }
        }
    }
    let doc: JsonElement = serde_json::from_value(v).map_err(|e| schema("", e.to_string()))?;
    from_json_value(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::metabelian::comm;

    fn p(text: &str, kind: AlgebraKind, d: usize) -> AnyElement {
        parse(text, kind, d).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("x1*x4 - x2*x3", AlgebraKind::Comm, 2).render(), "x1*x4 - x2*x3");
        let AnyElement::Meta(m) = p("[x2,x1,x3]", AlgebraKind::Meta, 2) else { panic!() };
        assert_eq!(m, comm(2, &[2, 1, 3]));
        assert_eq!(m.len(), 1);
        let AnyElement::Grass(g) = p("3/2*y1^2", AlgebraKind::Grass, 1) else { panic!() };
        assert_eq!(g.len(), 1);
        assert_eq!(g.iter().next().unwrap().1, &rat(3, 2));
        assert_eq!(p("2x1 - 1/3 x2", AlgebraKind::Comm, 1).render(), "2*x1 - 1/3*x2");
        assert_eq!(p("y1*x1", AlgebraKind::Grass, 1).render(), "x1*y1 - [x1,y1]");
        assert_eq!(p("a1*v2 - a2*v1 + y1", AlgebraKind::Wreath, 1).render(), "y1 + a1*v2 - a2*v1");
        assert_eq!(p("x1 - x1", AlgebraKind::Comm, 1).render(), "0");
        assert_eq!(p("5", AlgebraKind::Meta, 1).render(), "5");
    }

    #[test]
    fn render_examples() {
        assert_eq!(p("[x1,x2]", AlgebraKind::Meta, 1).render(), "[x1,x2]");
        assert_eq!(p("x2*x1", AlgebraKind::Meta, 1).render(), "x1*x2 - [x1,x2]");
    }

    #[test]
    fn parse_errors() {
        let pos = |t: &str, k| match parse(t, k, 2) {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("{t}: {other:?}"),
        };
        assert_eq!(pos("x1 + * x2", AlgebraKind::Comm), 5);
        assert_eq!(pos("[x1]", AlgebraKind::Meta), 0);
        assert_eq!(pos("x1 x2", AlgebraKind::Comm), 3);
        assert_eq!(pos("1/0*x1", AlgebraKind::Comm), 2);
        assert_eq!(pos("[x1,x2]", AlgebraKind::Comm), 0);
        assert_eq!(pos("u1*a1", AlgebraKind::Wreath), 0);
        assert!(matches!(parse("x5", AlgebraKind::Comm, 2), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(parse("y1", AlgebraKind::Comm, 2), Err(Error::Parse { .. })));
        assert!(parse("", AlgebraKind::Comm, 2).is_err());
    }

    #[test]
    fn json_examples() {
        let e = p("2*x1*[x2,x1] - 1/3*x2", AlgebraKind::Meta, 1);
        let s = to_json(&e);
        assert_eq!(from_json(&s).unwrap(), e);
        assert!(s.contains("\"algebra\":\"meta\""));
        let bad = r#"{"algebra":"comm","d":1,"terms":[{"coeff":"1/0","exponents":[1,0]}]}"#;
        match from_json(bad) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/terms/0/coeff"),
            other => panic!("{other:?}"),
        }
        let short = r#"{"algebra":"comm","d":1,"terms":[{"coeff":"1","exponents":[1]}]}"#;
        match from_json(short) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/terms/0/exponents"),
            other => panic!("{other:?}"),
        }
        assert!(from_json(r#"{"algebra":"comm","d":1}"#).is_err());
    }

    #[test]
    fn constgen_products() {
        let g = parse_constgen_product("alpha(1,3)*alpha(2,4)", 4).unwrap();
        assert_eq!(g, vec![ConstGen::Alpha(1, 3), ConstGen::Alpha(2, 4)]);
        assert_eq!(parse_constgen_product("u(2) * v(1)", 3).unwrap().len(), 2);
        assert!(parse_constgen_product("alpha(1,5)", 4).is_err());
        assert!(parse_constgen_product("delta(1,2)", 4).is_err());
        assert!(parse_constgen_product("1", 2).unwrap().is_empty());
    }
}

//! Finite formal linear combinations over the rationals.
//!
//! Every element type in the crate stores its terms in a [`LinComb`] keyed by
//! its monomial type. Zero coefficients are never stored.

use std::collections::btree_map::{self, BTreeMap};

use num_traits::{One, Zero};

use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinComb<M: Ord> {
    terms: BTreeMap<M, Rational>,
}

impl<M: Ord> Default for LinComb<M> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<M: Ord + Clone> LinComb<M> {
    pub fn new() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(m: M, c: Rational) -> Self {
        let mut out = Self::new();
        out.add_term(m, c);
        out
    }

    pub fn monomial(m: M) -> Self {
        Self::from_term(m, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, m: &M) -> Option<&Rational> {
        self.terms.get(m)
    }

    pub fn coefficient(&self, m: &M) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, M, Rational> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> btree_map::Keys<'_, M, Rational> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, m: M, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &LinComb<M>, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (m, c) in other.iter() {
            self.add_term(m.clone(), c * scale);
        }
    }

    pub fn add_assign(&mut self, other: &LinComb<M>) {
        for (m, c) in other.iter() {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &LinComb<M>) {
        for (m, c) in other.iter() {
            self.add_term(m.clone(), -c.clone());
        }
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::new();
        }
        LinComb {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        LinComb {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    /// Applies a linear map given on monomials.
    pub fn map_linear<N: Ord + Clone, F>(&self, mut f: F) -> LinComb<N>
    where
        F: FnMut(&M) -> LinComb<N>,
    {
        let mut out = LinComb::new();
        for (m, c) in self.iter() {
            out.add_assign_scaled(&f(m), c);
        }
        out
    }

    /// Fallible variant of [`LinComb::map_linear`].
    pub fn try_map_linear<N: Ord + Clone, E, F>(&self, mut f: F) -> Result<LinComb<N>, E>
    where
        F: FnMut(&M) -> Result<LinComb<N>, E>,
    {
        let mut out = LinComb::new();
        for (m, c) in self.iter() {
            out.add_assign_scaled(&f(m)?, c);
        }
        Ok(out)
    }

    pub fn into_terms(self) -> BTreeMap<M, Rational> {
        self.terms
    }
}

impl<M: Ord + Clone> FromIterator<(M, Rational)> for LinComb<M> {
    fn from_iter<I: IntoIterator<Item = (M, Rational)>>(iter: I) -> Self {
        let mut out = LinComb::new();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }
}

impl<'a, M: Ord> IntoIterator for &'a LinComb<M> {
    type Item = (&'a M, &'a Rational);
    type IntoIter = btree_map::Iter<'a, M, Rational>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

/// Joins `(coefficient, monomial text)` pairs into a signed sum. An empty
/// monomial text stands for the unit; unit coefficients are suppressed.
pub fn render_terms<I>(terms: I) -> String
where
    I: IntoIterator<Item = (Rational, String)>,
{
    let mut out = String::new();
    for (c, m) in terms {
        let neg = c < Rational::zero();
        let abs = if neg { -c } else { c };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&m);
        } else {
            out.push_str(&format!("{abs}*{m}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

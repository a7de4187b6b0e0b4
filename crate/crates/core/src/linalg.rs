//! Exact linear algebra over the rationals.
//!
//! Matrices are stored sparsely by rows. Row reduction runs a fraction-free
//! forward elimination over the integers (each row is cleared of denominators
//! and kept primitive) followed by rational back-substitution, which yields the
//! reduced row echelon form. The pivot in each column is the first remaining
//! row with a nonzero entry there, so results are deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Sparse vector: column index to nonzero entry.
pub type SparseVec = BTreeMap<usize, Rational>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sparse rational matrix; absent entries are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![SparseVec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_dense(&dense)
    }

    /// Builds a matrix whose `k`-th column is `columns[k]`.
    pub fn from_sparse_columns(rows: usize, columns: &[SparseVec]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (&r, v) in col {
                if r >= rows {
                    return Err(Error::IndexOutOfRange(format!("row {r} >= {rows}")));
                }
                m.set(r, c, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r].get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (&c, v) in row {
                t.data[c].insert(r, v.clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (&k, a) in row {
                for (&c, b) in &other.data[k] {
                    add_entry(&mut acc, c, a * b);
                }
            }
            out.data[r] = acc;
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Rational::zero(), |acc, (&c, a)| acc + a * &v[c])
            })
            .collect())
    }
}

fn add_entry(v: &mut SparseVec, c: usize, x: Rational) {
    if x.is_zero() {
        return;
    }
    let e = v.entry(c).or_insert_with(Rational::zero);
    *e += x;
    if e.is_zero() {
        v.remove(&c);
    }
}

type IntRow = BTreeMap<usize, BigInt>;

fn to_primitive_int_row(row: &SparseVec) -> IntRow {
    let lcm = row
        .values()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut out: IntRow = row
        .iter()
        .map(|(&c, v)| (c, v.numer() * (&lcm / v.denom())))
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    let g = row.values().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
}

/// `p * target - a * pivot`, where `p` is the pivot entry and `a` the entry of
/// `target` in the pivot column.
fn eliminate(target: &IntRow, pivot: &IntRow, p: &BigInt, a: &BigInt) -> IntRow {
    let mut out: IntRow = target.iter().map(|(&c, v)| (c, v * p)).collect();
    for (&c, v) in pivot {
        let e = out.entry(c).or_insert_with(BigInt::zero);
        *e -= v * a;
        if e.is_zero() {
            out.remove(&c);
        }
    }
    make_primitive(&mut out);
    out
}

/// Reduced row echelon form and the strictly increasing list of pivot columns.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut rows: Vec<IntRow> = m.data.iter().map(to_primitive_int_row).collect();
    let mut pivots = Vec::new();
    let mut pr = 0;
    while pr < rows.len() {
        let col = match rows[pr..]
            .iter()
            .filter_map(|r| r.keys().next().copied())
            .min()
        {
            Some(c) => c,
            None => break,
        };
        let src = pr + rows[pr..]
            .iter()
            .position(|r| r.contains_key(&col))
            .expect("pivot row exists");
        rows.swap(pr, src);
        let p = rows[pr][&col].clone();
        for r in pr + 1..rows.len() {
            if let Some(a) = rows[r].get(&col).cloned() {
                rows[r] = eliminate(&rows[r], &rows[pr], &p, &a);
            }
        }
        pivots.push(col);
        pr += 1;
    }

    // Back-substitution over Q.
    let mut qrows: Vec<SparseVec> = rows[..pivots.len()]
        .iter()
        .zip(&pivots)
        .map(|(row, col)| {
            let p = &row[col];
            row.iter()
                .map(|(&c, v)| (c, Rational::new(v.clone(), p.clone())))
                .collect()
        })
        .collect();
    for i in (0..qrows.len()).rev() {
        let col = pivots[i];
        let (upper, lower) = qrows.split_at_mut(i);
        let pivot_row = &lower[0];
        for row in upper.iter_mut() {
            if let Some(f) = row.get(&col).cloned() {
                for (&c, v) in pivot_row {
                    add_entry(row, c, -(&f * v));
                }
            }
        }
    }
    let mut out = QMatrix::zeros(m.rows, m.cols);
    for (r, row) in qrows.into_iter().enumerate() {
        out.data[r] = row;
    }
    (out, pivots)
}

pub fn rank(m: &QMatrix) -> usize {
    rref(m).1.len()
}

/// Basis of `{v : m v = 0}`, one vector per free column.
pub fn nullspace(m: &QMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            if let Some(x) = r.data[i].get(&free) {
                v[p] = -x.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Coefficients expressing `target` in terms of `basis`, or `None` if
/// `target` lies outside the span. Free coefficients are set to zero.
pub fn span_membership(basis: &[Vec<Rational>], target: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let n = target.len();
    for b in basis {
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
    }
    let k = basis.len();
    // Augmented system [B | t] with the basis vectors as columns.
    let mut aug = QMatrix::zeros(n, k + 1);
    for (c, b) in basis.iter().enumerate() {
        for (r, v) in b.iter().enumerate() {
            aug.set(r, c, v.clone());
        }
    }
    for (r, v) in target.iter().enumerate() {
        aug.set(r, k, v.clone());
    }
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&k) {
        return Ok(None);
    }
    let mut coeffs = vec![Rational::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        coeffs[p] = red.get(i, k);
    }
    Ok(Some(coeffs))
}

pub fn to_sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(v: &SparseVec, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (&i, x) in v {
        out[i] = x.clone();
    }
    out
}

/// Incrementally maintained row space in echelon form.
///
/// Each stored row is monic at its pivot and pivots are distinct. When
/// tracking is enabled every stored row also remembers how it was obtained
/// from the inserted vectors, so that a vector reducing to zero yields an
/// explicit linear dependency among the inputs.
#[derive(Debug, Clone, Default)]
pub struct RowSpace {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
    tracking: bool,
    inserted: usize,
}

impl RowSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_tracking() -> Self {
        RowSpace {
            tracking: true,
            ..Self::default()
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    fn reduce_with(&self, mut v: SparseVec, mut combo: SparseVec) -> (SparseVec, SparseVec) {
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).map(|(&c, _)| c).find(|c| self.rows.contains_key(c));
            let Some(col) = next else { break };
            let f = v[&col].clone();
            let (row, rcombo) = &self.rows[&col];
            for (&c, x) in row {
                add_entry(&mut v, c, -(&f * x));
            }
            if self.tracking {
                for (&c, x) in rcombo {
                    add_entry(&mut combo, c, -(&f * x));
                }
            }
            cursor = col + 1;
        }
        (v, combo)
    }

    /// Residual of `v` after reduction by the stored rows; zero iff `v` is in
    /// the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_with(v.clone(), SparseVec::new()).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`. Returns `Ok(())` if it enlarged the span, otherwise the
    /// dependency `sum c_i v_i = 0` over the inserted vectors (empty when
    /// tracking is off).
    pub fn insert(&mut self, v: &SparseVec) -> std::result::Result<(), SparseVec> {
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo = SparseVec::new();
        if self.tracking {
            combo.insert(idx, Rational::one());
        }
        let (mut r, mut combo) = self.reduce_with(v.clone(), combo);
        let Some((&pivot, lead)) = r.iter().next() else {
            return Err(combo);
        };
        let inv = lead.recip();
        for x in r.values_mut() {
            *x *= &inv;
        }
        for x in combo.values_mut() {
            *x *= &inv;
        }
        // Keep earlier rows free of the new pivot so reduction stays one pass.
        for (row, rcombo) in self.rows.values_mut() {
            if let Some(f) = row.get(&pivot).cloned() {
                for (&c, x) in &r {
                    add_entry(row, c, -(&f * x));
                }
                for (&c, x) in &combo {
                    add_entry(rcombo, c, -(&f * x));
                }
            }
        }
        self.rows.insert(pivot, (std::mem::take(&mut r), combo));
        Ok(())
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> + '_ {
        self.rows.values().map(|(r, _)| r)
    }
}

pub fn is_negative(x: &Rational) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_i64(rows).unwrap()
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rref_identity() {
        let (r, p) = rref(&QMatrix::identity(2));
        assert_eq!(r, QMatrix::identity(2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = rref(&m(&[&[2, 4], &[1, 2]]));
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_zero() {
        let z = QMatrix::zeros(2, 3);
        let (r, p) = rref(&z);
        assert_eq!(r, z);
        assert!(p.is_empty());
    }

    #[test]
    fn rref_with_fractions() {
        let a = QMatrix::from_dense(&[vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 6)]]).unwrap();
        let (r, p) = rref(&a);
        assert_eq!(p, vec![0]);
        assert_eq!(r.get(0, 1), rat(2, 3));
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&QMatrix::identity(3)).is_empty());
        assert_eq!(nullspace(&m(&[&[1, -1]])), vec![v(&[1, 1])]);
        let ns = nullspace(&QMatrix::zeros(1, 3));
        assert_eq!(ns, vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]);
    }

    #[test]
    fn span_membership_examples() {
        let e1 = v(&[1, 0]);
        let e2 = v(&[0, 1]);
        assert_eq!(
            span_membership(&[e1.clone(), e2.clone()], &v(&[1, 1])).unwrap(),
            Some(v(&[1, 1]))
        );
        assert_eq!(span_membership(&[e1], &e2).unwrap(), None);
        assert_eq!(
            span_membership(&[v(&[1, 2]), v(&[0, 1])], &v(&[2, 5])).unwrap(),
            Some(v(&[2, 1]))
        );
    }

    #[test]
    fn span_membership_dimension_mismatch() {
        assert!(matches!(
            span_membership(&[v(&[1, 2, 3])], &v(&[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn row_space_tracks_dependencies() {
        let mut rs = RowSpace::with_tracking();
        assert!(rs.insert(&to_sparse(&v(&[1, 2, 0]))).is_ok());
        assert!(rs.insert(&to_sparse(&v(&[0, 1, 1]))).is_ok());
        let dep = rs.insert(&to_sparse(&v(&[2, 5, 1]))).unwrap_err();
        // 2*r0 + 1*r1 - r2 = 0
        assert_eq!(dep, to_sparse(&v(&[-2, -1, 1])));
        assert_eq!(rs.dim(), 2);
        assert!(rs.contains(&to_sparse(&v(&[1, 3, 1]))));
        assert!(!rs.contains(&to_sparse(&v(&[0, 0, 1]))));
    }

    #[test]
    fn matrix_product() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[3], &[4]]);
        assert_eq!(a.mul(&b).unwrap(), m(&[&[11], &[4]]));
        assert!(b.mul(&a).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix() -> impl Strategy<Value = QMatrix> {
            (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r).prop_map(|rows| {
                    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
                    QMatrix::from_i64(&refs).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn nullspace_is_annihilated(a in small_matrix()) {
                for v in nullspace(&a) {
                    prop_assert!(a.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
                }
            }

            #[test]
            fn rank_nullity(a in small_matrix()) {
                prop_assert_eq!(rank(&a) + nullspace(&a).len(), a.cols());
            }

            #[test]
            fn rref_idempotent(a in small_matrix()) {
                let (r, p) = rref(&a);
                let (r2, p2) = rref(&r);
                prop_assert_eq!(r, r2);
                prop_assert_eq!(p, p2);
            }

            #[test]
            fn rank_of_transpose(a in small_matrix()) {
                prop_assert_eq!(rank(&a), rank(&a.transpose()));
            }

            #[test]
            fn row_space_matches_rank(a in small_matrix()) {
                let mut rs = RowSpace::with_tracking();
                for r in 0..a.rows() {
                    if let Err(dep) = rs.insert(a.row(r)) {
                        let mut sum = SparseVec::new();
                        for (&i, c) in &dep {
                            for (&k, x) in a.row(i) {
                                add_entry(&mut sum, k, c * x);
                            }
                        }
                        prop_assert!(sum.is_empty());
                    }
                }
                prop_assert_eq!(rs.dim(), rank(&a));
            }
        }
    }
}

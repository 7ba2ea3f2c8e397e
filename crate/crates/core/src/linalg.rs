//! Exact sparse linear algebra over the rationals.
//!
//! Rows are cleared of denominators on entry and then eliminated
//! fraction-free: every stored pivot row is a primitive integer vector
//! (content 1, positive leading entry). Rationals only reappear when a
//! kernel basis is read off the reduced echelon form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// Sparse vector: strictly increasing column indices, no zero entries.
pub type SparseVec = Vec<(usize, Q)>;

/// Dense row-major matrix.
pub type Matrix = Vec<Vec<Q>>;

type IntRow = Vec<(usize, BigInt)>;

/// Incrementally built row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns `true` when it was independent of the rows so far.
    pub fn insert(&mut self, row: &[(usize, Q)]) -> bool {
        let reduced = self.reduce(to_int_row(row));
        match reduced.first() {
            None => false,
            Some(&(lead, _)) => {
                debug_assert!(lead < self.ncols);
                self.pivots.insert(lead, reduced);
                true
            }
        }
    }

    /// Whether `row` lies in the span of the inserted rows.
    pub fn contains(&self, row: &[(usize, Q)]) -> bool {
        self.reduce(to_int_row(row)).is_empty()
    }

    fn reduce(&self, mut r: IntRow) -> IntRow {
        while let Some(&(lead, _)) = r.first() {
            match self.pivots.get(&lead) {
                Some(p) => r = eliminate(&r, p, lead),
                None => break,
            }
        }
        r
    }

    /// Basis of the null space `{x : A x = 0}` of the inserted rows.
    ///
    /// One vector per free column `f`, with `x_f = 1` and zeros on every
    /// other free column; the result is therefore independent of insertion
    /// order.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let reduced = self.reduced_rows();
        let mut by_free: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
        for (&c, row) in &reduced {
            let lead = &row[0].1;
            for (j, v) in &row[1..] {
                by_free
                    .entry(*j)
                    .or_default()
                    .push((c, -Q::new(v.clone(), lead.clone())));
            }
        }
        (0..self.ncols)
            .filter(|f| !self.pivots.contains_key(f))
            .map(|f| {
                let mut v = by_free.remove(&f).unwrap_or_default();
                v.push((f, Q::one()));
                v.sort_by_key(|e| e.0);
                v
            })
            .collect()
    }

    /// Reduced row echelon form: each pivot row has zeros in every other
    /// pivot column.
    fn reduced_rows(&self) -> BTreeMap<usize, IntRow> {
        let mut out: BTreeMap<usize, IntRow> = BTreeMap::new();
        for (&c, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            loop {
                let hit = r[1..].iter().map(|e| e.0).find(|j| out.contains_key(j));
                match hit {
                    Some(j) => r = eliminate(&r, &out[&j], j),
                    None => break,
                }
            }
            out.insert(c, r);
        }
        out
    }
}

fn to_int_row(row: &[(usize, Q)]) -> IntRow {
    let mut den = BigInt::one();
    for (_, v) in row {
        den = den.lcm(v.denom());
    }
    let mut r: IntRow = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, v)| (*j, v.numer() * (&den / v.denom())))
        .collect();
    r.sort_by_key(|e| e.0);
    make_primitive(&mut r);
    r
}

fn make_primitive(r: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in r.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    if r[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in r.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `pc·r − rc·p` scaled so the column `col` cancels, then made primitive.
fn eliminate(r: &IntRow, p: &IntRow, col: usize) -> IntRow {
    let rc = lookup(r, col).expect("entry present");
    let pc = lookup(p, col).expect("pivot present");
    let g = rc.gcd(pc);
    let mr = pc / &g;
    let mp = rc / &g;
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut k) = (0, 0);
    while i < r.len() || k < p.len() {
        let take_r = k >= p.len() || (i < r.len() && r[i].0 < p[k].0);
        let take_p = i >= r.len() || (k < p.len() && p[k].0 < r[i].0);
        if take_r {
            out.push((r[i].0, &r[i].1 * &mr));
            i += 1;
        } else if take_p {
            out.push((p[k].0, -(&p[k].1 * &mp)));
            k += 1;
        } else {
            let v = &r[i].1 * &mr - &p[k].1 * &mp;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            k += 1;
        }
    }
    make_primitive(&mut out);
    out
}

fn lookup(r: &IntRow, col: usize) -> Option<&BigInt> {
    r.binary_search_by_key(&col, |e| e.0).ok().map(|i| &r[i].1)
}

pub fn rank(rows: &[SparseVec], ncols: usize) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub fn kernel(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.kernel()
}

/// Dense rows to sparse rows.
pub fn sparsify(rows: &[Vec<Q>]) -> Vec<SparseVec> {
    rows.iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect()
        })
        .collect()
}

pub fn dense_rank(m: &[Vec<Q>]) -> usize {
    let ncols = m.first().map_or(0, |r| r.len());
    rank(&sparsify(m), ncols)
}

/// Gauss-Jordan inverse of a square matrix, `None` when singular.
pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            assert_eq!(r.len(), n, "inverse of a non-square matrix");
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, piv);
        let inv = Q::one() / &a[col][col];
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let t = &a[col][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Q::zero(), |acc, k| {
                        if row[k].is_zero() {
                            acc
                        } else {
                            acc + &row[k] * &b[k][j]
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= &a[col][col];
        for i in col + 1..n {
            if !a[i][col].is_zero() {
                let f = &a[i][col] / &a[col][col];
                for j in col..n {
                    let t = &a[col][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};
    use proptest::prelude::*;

    fn dense(v: &SparseVec, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (j, x) in v {
            out[*j] = x.clone();
        }
        out
    }

    fn apply(rows: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
        rows.iter()
            .map(|r| r.iter().zip(x).fold(Q::zero(), |a, (u, v)| a + u * v))
            .collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        let m = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), frac(1, 2)],
        ];
        assert_eq!(dense_rank(&m), 2);
        assert_eq!(dense_rank(&identity(4)), 4);
        assert_eq!(rank(&[], 3), 0);
    }

    #[test]
    fn kernel_is_canonical_and_annihilated() {
        let m = vec![vec![q(1), q(1), q(0), q(-1)], vec![q(0), q(0), q(1), q(2)]];
        let k = kernel(&sparsify(&m), 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&m, &dense(v, 4)).iter().all(|x| x.is_zero()));
        }
        // free columns 1 and 3
        assert_eq!(dense(&k[0], 4), vec![q(-1), q(1), q(0), q(0)]);
        assert_eq!(dense(&k[1], 4), vec![q(1), q(0), q(-2), q(1)]);
    }

    #[test]
    fn inverse_and_determinant() {
        let m = vec![vec![q(2), q(1)], vec![q(5), q(3)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert_eq!(determinant(&m), q(1));
        assert!(inverse(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..4, 20)) {
            let m: Vec<Vec<Q>> = entries.chunks(5).map(|c| c.iter().map(|&x| q(x)).collect()).collect();
            let r = dense_rank(&m);
            let k = kernel(&sparsify(&m), 5);
            prop_assert_eq!(r + k.len(), 5);
            for v in &k {
                prop_assert!(apply(&m, &dense(v, 5)).iter().all(|x| x.is_zero()));
            }
            // kernel vectors are independent
            prop_assert_eq!(rank(&k, 5), k.len());
        }

        #[test]
        fn rank_invariant_under_row_order(entries in proptest::collection::vec(-2i64..3, 16)) {
            let m: Vec<Vec<Q>> = entries.chunks(4).map(|c| c.iter().map(|&x| q(x)).collect()).collect();
            let mut rev = m.clone();
            rev.reverse();
            prop_assert_eq!(dense_rank(&m), dense_rank(&rev));
            prop_assert_eq!(kernel(&sparsify(&m), 4), kernel(&sparsify(&rev), 4));
        }
    }
}

//! Monomial bases of `Sym^d`, `Λ^d` and `⊗^d` and the linear maps they induce.
//!
//! `Sym^d V` has basis the sorted multisets of basis indices, `Λ^d V` the
//! strictly increasing tuples, `⊗^d V` all tuples.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Q;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum FunctorKind {
    Sym,
    Ext,
    Tensor,
}

/// A reduced homogeneous functor `Sym^d`, `Λ^d` or `⊗^d`, `d ≥ 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct FunctorSpec {
    pub kind: FunctorKind,
    pub degree: usize,
}

pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..n).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Sorts `t` in place, returning the sign of the sorting permutation, or
/// `None` if an index repeats.
pub fn sort_alternating(t: &mut [usize]) -> Option<bool> {
    let mut neg = false;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(neg)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

impl FunctorKind {
    /// Canonical basis word for `t` and its sign, or `None` when it vanishes.
    pub fn canonical(self, mut t: Vec<usize>) -> Option<(bool, Vec<usize>)> {
        match self {
            FunctorKind::Tensor => Some((false, t)),
            FunctorKind::Sym => {
                t.sort_unstable();
                Some((false, t))
            }
            FunctorKind::Ext => sort_alternating(&mut t).map(|neg| (neg, t)),
        }
    }

    pub fn basis(self, n: usize, k: usize) -> Vec<Vec<usize>> {
        match self {
            FunctorKind::Tensor => tuples(n, k),
            FunctorKind::Sym => multisets(n, k),
            FunctorKind::Ext => subsets(n, k),
        }
    }

    pub fn dim(self, n: usize, k: usize) -> usize {
        match self {
            FunctorKind::Tensor => n.pow(k as u32),
            FunctorKind::Sym if k == 0 => 1,
            FunctorKind::Sym => binomial(n + k - 1, k),
            FunctorKind::Ext => binomial(n, k),
        }
    }
}

impl FunctorSpec {
    pub fn new(kind: FunctorKind, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Precondition("functor degree must be at least 1".into()));
        }
        Ok(FunctorSpec { kind, degree })
    }

    pub fn basis(&self, n: usize) -> Vec<Vec<usize>> {
        self.kind.basis(n, self.degree)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.kind.dim(n, self.degree)
    }

    /// `F(A)` for `A: ℝ^{cols} → ℝ^{rows}`, in the monomial bases.
    pub fn apply(&self, a: &Matrix, source_dim: usize) -> Matrix {
        let target_dim = a.len();
        let src = self.basis(source_dim);
        let tgt = self.basis(target_dim);
        let index: HashMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut out = vec![vec![Q::zero(); src.len()]; tgt.len()];
        // nonzero entries of each column of A
        let cols: Vec<Vec<(usize, &Q)>> =
            (0..source_dim).map(|j| (0..target_dim).filter(|&i| !a[i][j].is_zero()).map(|i| (i, &a[i][j])).collect()).collect();
        for (c, s) in src.iter().enumerate() {
            let mut partial: Vec<(Vec<usize>, Q)> = vec![(Vec::with_capacity(self.degree), Q::from_integer(1.into()))];
            for &j in s {
                partial = partial
                    .into_iter()
                    .flat_map(|(word, coef)| {
                        cols[j].iter().map(move |&(i, x)| {
                            let mut w = word.clone();
                            w.push(i);
                            (w, &coef * x)
                        })
                    })
                    .collect();
            }
            for (word, coef) in partial {
                if let Some((neg, canon)) = self.kind.canonical(word) {
                    let r = index[&canon];
                    if neg {
                        out[r][c] -= coef;
                    } else {
                        out[r][c] += coef;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for FunctorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            FunctorKind::Sym => "Sym",
            FunctorKind::Ext => "Ext",
            FunctorKind::Tensor => "Tensor",
        };
        write!(f, "{name}^{}", self.degree)
    }
}

impl FromStr for FunctorSpec {
    type Err = Error;

    /// Accepts `Sym^2`, `Ext2`, `Lambda^3`, `Λ^2`, `Tensor^1`, `T2`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let split = t.find(|c: char| c.is_ascii_digit()).ok_or_else(|| Error::Parse(format!("functor {t:?} has no degree")))?;
        let (name, deg) = t.split_at(split);
        let name = name.trim_end_matches('^').to_lowercase();
        let kind = match name.as_str() {
            "sym" | "s" => FunctorKind::Sym,
            "ext" | "lambda" | "λ" | "wedge" => FunctorKind::Ext,
            "tensor" | "t" => FunctorKind::Tensor,
            _ => return Err(Error::Parse(format!("unknown functor {name:?}"))),
        };
        let degree: usize = deg.parse().map_err(|_| Error::Parse(format!("bad functor degree {deg:?}")))?;
        FunctorSpec::new(kind, degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, mat_mul};
    use crate::rational::q;
    use proptest::prelude::*;

    #[test]
    fn basis_sizes() {
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(tuples(2, 3).len(), 8);
        for n in 0..5 {
            for k in 0..4 {
                for kind in [FunctorKind::Sym, FunctorKind::Ext, FunctorKind::Tensor] {
                    assert_eq!(kind.basis(n, k).len(), kind.dim(n, k), "{kind:?} {n} {k}");
                }
            }
        }
    }

    #[test]
    fn parses_names() {
        assert_eq!("Sym^2".parse::<FunctorSpec>().unwrap(), FunctorSpec { kind: FunctorKind::Sym, degree: 2 });
        assert_eq!("Λ^3".parse::<FunctorSpec>().unwrap().kind, FunctorKind::Ext);
        assert_eq!("Tensor1".parse::<FunctorSpec>().unwrap().degree, 1);
        assert!("Sym^0".parse::<FunctorSpec>().is_err());
        assert!("Foo^2".parse::<FunctorSpec>().is_err());
    }

    #[test]
    fn top_exterior_power_is_the_determinant() {
        let a = vec![vec![q(2), q(1), q(0)], vec![q(1), q(3), q(1)], vec![q(0), q(1), q(4)]];
        let f = FunctorSpec::new(FunctorKind::Ext, 3).unwrap();
        assert_eq!(f.apply(&a, 3), vec![vec![crate::linalg::determinant(&a)]]);
    }

    fn arb_matrix(r: usize, c: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(proptest::collection::vec(-2i64..3, c), r)
            .prop_map(|m| m.into_iter().map(|row| row.into_iter().map(q).collect()).collect())
    }

    proptest! {
        #[test]
        fn functoriality(a in arb_matrix(3, 2), b in arb_matrix(2, 3), k in 1usize..4, kind in 0usize..3) {
            let kind = [FunctorKind::Sym, FunctorKind::Ext, FunctorKind::Tensor][kind];
            // keep every intermediate space nonzero
            let k = if kind == FunctorKind::Ext { k.min(2) } else { k };
            let f = FunctorSpec::new(kind, k).unwrap();
            let ab = mat_mul(&a, &b);
            prop_assert_eq!(f.apply(&ab, 3), mat_mul(&f.apply(&a, 2), &f.apply(&b, 3)));
            prop_assert_eq!(f.apply(&identity(3), 3), identity(f.dim(3)));
        }
    }
}

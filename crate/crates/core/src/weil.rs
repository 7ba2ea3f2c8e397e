//! The Weil algebra `Λ•g* ⊗ Sym•g*` and its Cartan calculus.
//!
//! Generators: exterior `λ^i` (degree 1) and symmetric `λ̃^i` (degree 2).
//! Only exterior generators anticommute. A monomial is stored as an
//! exterior bitmask plus a symmetric exponent vector; monomials are ordered
//! by (total degree, bitmask, exponent vector), which fixes every echelon
//! form and every serialized output.
//!
//! Conventions:
//! * `d_K λ^i = λ̃^i`, `d_K λ̃^i = 0`, extended as an odd derivation.
//! * `ι_ξ λ^i = ξ^i` and `ι_ξ λ̃^i` is the 1-form `η ↦ −λ^i([ξ, η])`, which
//!   is `ad*_ξ λ^i` in the coadjoint convention of [`LieAlgebra::coadjoint`].
//!   This is the sign for which `ι_ℓ Ω^i = 0` and `[L_ξ, ι_η] = ι_{[ξ,η]}`.
//! * `L_ξ = d_K ι_ξ + ι_ξ d_K`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{AlgebraVector, LieAlgebra};
use crate::linalg::{Echelon, SparseVec};
use crate::rational::{frac, serde_q, sign, Q};

/// Largest supported generator count (exterior part is a `u32` mask).
pub const MAX_DIM: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeilMonomial {
    pub ext: u32,
    pub sym: Vec<u32>,
}

impl WeilMonomial {
    pub fn one(n: usize) -> Self {
        WeilMonomial { ext: 0, sym: vec![0; n] }
    }

    pub fn ext_degree(&self) -> usize {
        self.ext.count_ones() as usize
    }

    pub fn sym_degree(&self) -> usize {
        self.sym.iter().map(|&e| e as usize).sum()
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.ext_degree(), self.sym_degree())
    }

    pub fn total_degree(&self) -> usize {
        self.ext_degree() + 2 * self.sym_degree()
    }

    /// Exterior indices in increasing order.
    pub fn ext_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(move |i| self.ext & (1 << i) != 0)
    }
}

impl Ord for WeilMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then(self.ext.cmp(&other.ext))
            .then_with(|| self.sym.cmp(&other.sym))
    }
}

impl PartialOrd for WeilMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sign and mask of `λ^A ∧ λ^B`, or `None` when they share an index.
pub(crate) fn ext_product(a: u32, b: u32) -> Option<(bool, u32)> {
    if a & b != 0 {
        return None;
    }
    // count pairs (i in a, j in b) with i > j
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (a >> j).count_ones();
        bb &= bb - 1;
    }
    Some((swaps % 2 == 1, a | b))
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeilElement {
    n: usize,
    terms: BTreeMap<WeilMonomial, Q>,
}

impl WeilElement {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "at most {MAX_DIM} generators are supported");
        WeilElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(WeilMonomial::one(n), Q::one())
    }

    pub fn constant(n: usize, c: Q) -> Self {
        Self::monomial(WeilMonomial::one(n), c)
    }

    pub fn monomial(m: WeilMonomial, c: Q) -> Self {
        let mut e = Self::zero(m.sym.len());
        e.add_term(m, c);
        e
    }

    /// Exterior generator `λ^i` (zero-based).
    pub fn lambda(n: usize, i: usize) -> Self {
        assert!(i < n);
        Self::monomial(WeilMonomial { ext: 1 << i, sym: vec![0; n] }, Q::one())
    }

    /// Symmetric generator `λ̃^i` (zero-based).
    pub fn lambda_tilde(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut sym = vec![0; n];
        sym[i] = 1;
        Self::monomial(WeilMonomial { ext: 0, sym }, Q::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (WeilMonomial, Q)>) -> Self {
        let mut e = Self::zero(n);
        for (m, c) in terms {
            assert_eq!(m.sym.len(), n, "monomial of the wrong dimension");
            e.add_term(m, c);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeilMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &WeilMonomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: WeilMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `(p, q)` when every term shares it.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(WeilMonomial::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn total_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(WeilMonomial::total_degree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        WeilElement { n: self.n, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "adding elements of different dimension");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    /// Graded-commutative product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, ext)) = ext_product(ma.ext, mb.ext) {
                    let sym = ma.sym.iter().zip(&mb.sym).map(|(a, b)| a + b).collect();
                    let c = ca * cb;
                    out.add_term(WeilMonomial { ext, sym }, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Keeps only the terms of the given total degree.
    pub fn degree_part(&self, d: usize) -> Self {
        WeilElement {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.total_degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    fn map_monomials(&self, mut f: impl FnMut(&WeilMonomial, &Q, &mut WeilElement)) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            f(m, c, &mut out);
        }
        out
    }

    /// Coordinates against a basis index map; panics on a monomial outside it.
    pub fn coordinates(&self, index: &HashMap<WeilMonomial, usize>) -> SparseVec {
        let mut v: SparseVec = self.terms.iter().map(|(m, c)| (index[m], c.clone())).collect();
        v.sort_by_key(|e| e.0);
        v
    }
}

impl fmt::Debug for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Human-readable form: `l2^l3` for `λ²∧λ³`, `L1^2` for `(λ̃¹)²`.
impl fmt::Display for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            let ext: Vec<String> = m.ext_indices().map(|i| format!("l{}", i + 1)).collect();
            if !ext.is_empty() {
                factors.push(ext.join("^"));
            }
            for (i, &e) in m.sym.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("L{}", i + 1)),
                    _ => factors.push(format!("L{}^{}", i + 1, e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "({c})*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Koszul differential.
pub fn d_k(a: &WeilElement) -> WeilElement {
    a.map_monomials(|m, c, out| {
        for (t, i) in m.ext_indices().enumerate() {
            let mut sym = m.sym.clone();
            sym[i] += 1;
            out.add_term(WeilMonomial { ext: m.ext & !(1 << i), sym }, sign(t) * c);
        }
    })
}

fn check_dims(l: &LieAlgebra, xi: &AlgebraVector, a: &WeilElement) -> Result<()> {
    if xi.dim() != l.dim() {
        return Err(Error::DimensionMismatch { expected: l.dim(), got: xi.dim() });
    }
    if a.dim() != l.dim() {
        return Err(Error::DimensionMismatch { expected: l.dim(), got: a.dim() });
    }
    Ok(())
}

/// Images of the symmetric generators under `ι_ξ`: row `j` lists the
/// exterior coefficients of `ι_ξ λ̃^j`.
fn tilde_contractions(l: &LieAlgebra, xi: &AlgebraVector) -> Result<Vec<Vec<(usize, Q)>>> {
    let m = l.coadjoint(xi)?;
    let n = l.dim();
    Ok((0..n)
        .map(|j| (0..n).filter(|&k| !m[k][j].is_zero()).map(|k| (k, m[k][j].clone())).collect())
        .collect())
}

/// Contraction `ι_ξ`, an odd derivation of degree −1.
pub fn contract(l: &LieAlgebra, xi: &AlgebraVector, a: &WeilElement) -> Result<WeilElement> {
    check_dims(l, xi, a)?;
    let tilde = tilde_contractions(l, xi)?;
    Ok(a.map_monomials(|m, c, out| {
        let p = m.ext_degree();
        for (t, i) in m.ext_indices().enumerate() {
            if !xi.0[i].is_zero() {
                out.add_term(WeilMonomial { ext: m.ext & !(1 << i), sym: m.sym.clone() }, sign(t) * &xi.0[i] * c);
            }
        }
        let base = sign(p) * c;
        for (j, &e) in m.sym.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut sym = m.sym.clone();
            sym[j] -= 1;
            for (k, v) in &tilde[j] {
                if let Some((neg, ext)) = ext_product(m.ext, 1 << k) {
                    let coef = &base * Q::from_integer(e.into()) * v;
                    out.add_term(WeilMonomial { ext, sym: sym.clone() }, if neg { -coef } else { coef });
                }
            }
        }
    }))
}

/// Lie derivative through Cartan's formula `L_ξ = d_K ι_ξ + ι_ξ d_K`.
pub fn lie_derivative(l: &LieAlgebra, xi: &AlgebraVector, a: &WeilElement) -> Result<WeilElement> {
    let di = d_k(&contract(l, xi, a)?);
    let id = contract(l, xi, &d_k(a))?;
    Ok(di.add(&id))
}

/// `Ω^i = λ̃^i + ½ Σ_{j,k} f^i_{jk} λ^j ∧ λ^k`.
pub fn curvature_generator(l: &LieAlgebra, i: usize) -> Result<WeilElement> {
    let n = l.dim();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    let mut out = WeilElement::lambda_tilde(n, i);
    let half = frac(1, 2);
    for j in 0..n {
        for k in 0..n {
            let f = l.f(j, k, i);
            if j != k && !f.is_zero() {
                let jk = WeilElement::lambda(n, j).multiply(&WeilElement::lambda(n, k))?;
                out = out.add(&jk.scale(&(&half * f)));
            }
        }
    }
    Ok(out)
}

/// `∏_i (1 − λ^i ι_{e_i})`, the projector onto horizontal elements.
pub fn horizontal_project(l: &LieAlgebra, a: &WeilElement) -> Result<WeilElement> {
    let n = l.dim();
    if a.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.dim() });
    }
    let mut cur = a.clone();
    for i in 0..n {
        let c = contract(l, &AlgebraVector::basis(n, i), &cur)?;
        cur = cur.sub(&WeilElement::lambda(n, i).multiply(&c)?);
    }
    Ok(cur)
}

/// Algebra homomorphism fixed by the images of `λ^i` and `λ̃^i`.
pub fn substitute(a: &WeilElement, ext_images: &[WeilElement], sym_images: &[WeilElement]) -> Result<WeilElement> {
    let n = a.dim();
    if ext_images.len() != n || sym_images.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: ext_images.len().min(sym_images.len()) });
    }
    let target = ext_images.first().or(sym_images.first()).map_or(n, WeilElement::dim);
    let mut powers: HashMap<(usize, u32), WeilElement> = HashMap::new();
    let mut out = WeilElement::zero(target);
    for (m, c) in a.terms() {
        let mut acc = WeilElement::constant(target, c.clone());
        for i in m.ext_indices() {
            acc = acc.multiply(&ext_images[i])?;
        }
        for (j, &e) in m.sym.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !powers.contains_key(&(j, e)) {
                let mut p = WeilElement::one(target);
                for _ in 0..e {
                    p = p.multiply(&sym_images[j])?;
                }
                powers.insert((j, e), p);
            }
            acc = acc.multiply(&powers[&(j, e)])?;
        }
        out = out.add(&acc);
    }
    Ok(out)
}

/// The change of generators `λ̃^i ↦ Ω^i` (exterior generators fixed).
pub fn to_curvature_generators(l: &LieAlgebra, a: &WeilElement) -> Result<WeilElement> {
    let n = l.dim();
    let ext: Vec<_> = (0..n).map(|i| WeilElement::lambda(n, i)).collect();
    let sym = (0..n).map(|i| curvature_generator(l, i)).collect::<Result<Vec<_>>>()?;
    substitute(a, &ext, &sym)
}

/// Inverse change of generators `λ̃^i ↦ λ̃^i − ½ f^i_{jk} λ^j ∧ λ^k`.
pub fn from_curvature_generators(l: &LieAlgebra, a: &WeilElement) -> Result<WeilElement> {
    let n = l.dim();
    let ext: Vec<_> = (0..n).map(|i| WeilElement::lambda(n, i)).collect();
    let sym = (0..n)
        .map(|i| {
            let om = curvature_generator(l, i)?;
            let tilde = WeilElement::lambda_tilde(n, i);
            // Ω^i − λ̃^i is the quadratic exterior part
            Ok(tilde.sub(&om.sub(&tilde)))
        })
        .collect::<Result<Vec<_>>>()?;
    substitute(a, &ext, &sym)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(n,p)·C(n+q−1,q)`.
pub fn bidegree_dim(n: usize, p: usize, q: usize) -> usize {
    if q == 0 {
        return binomial(n, p);
    }
    binomial(n, p) * binomial(n + q - 1, q)
}

/// `Σ_{p+2q=d} C(n,p)·C(n+q−1,q)` for `d = 0..=max_degree`.
pub fn graded_dims(n: usize, max_degree: usize) -> Vec<usize> {
    (0..=max_degree)
        .map(|d| (0..=d.min(n)).filter(|p| (d - p) % 2 == 0).map(|p| bidegree_dim(n, p, (d - p) / 2)).sum())
        .collect()
}

fn compositions(n: usize, q: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    if n == 0 {
        return if q == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(0, q as u32, &mut vec![0; n], &mut out);
    out
}

fn subsets(n: usize, p: usize) -> Vec<u32> {
    (0u64..(1u64 << n)).filter(|m| m.count_ones() as usize == p).map(|m| m as u32).collect()
}

/// Monomials of bidegree `(p, q)`, sorted.
pub fn bidegree_basis(n: usize, p: usize, q: usize) -> Vec<WeilMonomial> {
    let mut out: Vec<WeilMonomial> = subsets(n, p)
        .into_iter()
        .flat_map(|ext| compositions(n, q).into_iter().map(move |sym| WeilMonomial { ext, sym }))
        .collect();
    out.sort();
    out
}

/// Monomials of total degree `d`, sorted.
pub fn degree_basis(n: usize, d: usize) -> Vec<WeilMonomial> {
    let mut out: Vec<WeilMonomial> = (0..=d.min(n))
        .filter(|p| (d - p) % 2 == 0)
        .flat_map(|p| bidegree_basis(n, p, (d - p) / 2))
        .collect();
    out.sort();
    out
}

pub fn index_of(basis: &[WeilMonomial]) -> HashMap<WeilMonomial, usize> {
    basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Rank of a linear operator restricted to the span of `domain`.
pub fn operator_rank(domain: &[WeilMonomial], op: impl Fn(&WeilElement) -> Result<WeilElement>) -> Result<usize> {
    let mut cols: HashMap<WeilMonomial, usize> = HashMap::new();
    let mut rows = Vec::with_capacity(domain.len());
    for m in domain {
        let img = op(&WeilElement::monomial(m.clone(), Q::one()))?;
        let mut row: SparseVec = img
            .terms()
            .map(|(t, c)| {
                let next = cols.len();
                (*cols.entry(t.clone()).or_insert(next), c.clone())
            })
            .collect();
        row.sort_by_key(|e| e.0);
        rows.push(row);
    }
    let mut ech = Echelon::new(cols.len());
    for r in &rows {
        ech.insert(r);
    }
    Ok(ech.rank())
}

/// Common kernel, within the span of `domain`, of a family of operators.
pub fn joint_kernel(
    domain: &[WeilMonomial],
    ops: &[&dyn Fn(&WeilElement) -> Result<WeilElement>],
) -> Result<Vec<WeilElement>> {
    let n = domain.first().map_or(0, |m| m.sym.len());
    let mut rows: BTreeMap<(usize, WeilMonomial), SparseVec> = BTreeMap::new();
    for (col, m) in domain.iter().enumerate() {
        let e = WeilElement::monomial(m.clone(), Q::one());
        for (k, op) in ops.iter().enumerate() {
            for (t, c) in op(&e)?.terms() {
                rows.entry((k, t.clone())).or_default().push((col, c.clone()));
            }
        }
    }
    let mut ech = Echelon::new(domain.len());
    for r in rows.values() {
        ech.insert(r);
    }
    Ok(ech
        .kernel()
        .into_iter()
        .map(|v| WeilElement::from_terms(n, v.into_iter().map(|(j, c)| (domain[j].clone(), c))))
        .collect())
}

/// Basis of the basic elements of total degree `d`: those killed by every
/// `ι_{e_i}` and every `L_{e_i}`.
pub fn basic_subspace(l: &LieAlgebra, d: usize) -> Result<Vec<WeilElement>> {
    let n = l.dim();
    let domain = degree_basis(n, d);
    if domain.is_empty() {
        return Ok(Vec::new());
    }
    let basis: Vec<AlgebraVector> = (0..n).map(|i| AlgebraVector::basis(n, i)).collect();
    let contractions: Vec<Box<dyn Fn(&WeilElement) -> Result<WeilElement>>> = basis
        .iter()
        .map(|e| {
            let e = e.clone();
            Box::new(move |a: &WeilElement| contract(l, &e, a)) as Box<dyn Fn(&WeilElement) -> Result<WeilElement>>
        })
        .chain(basis.iter().map(|e| {
            let e = e.clone();
            Box::new(move |a: &WeilElement| lie_derivative(l, &e, a)) as Box<dyn Fn(&WeilElement) -> Result<WeilElement>>
        }))
        .collect();
    let refs: Vec<&dyn Fn(&WeilElement) -> Result<WeilElement>> = contractions.iter().map(|b| b.as_ref()).collect();
    joint_kernel(&domain, &refs)
}

/// `dim H^d(Koss, d_K)` for `d = 0..=max_degree`.
///
/// `d_K` maps bidegree `(p, q)` into `(p−1, q+1)`, so its rank is summed
/// over bidegree blocks.
pub fn koszul_cohomology_dims(n: usize, max_degree: usize) -> Vec<usize> {
    let d_rank = |d: usize| -> usize {
        (0..=d.min(n))
            .filter(|p| (d - p) % 2 == 0)
            .map(|p| operator_rank(&bidegree_basis(n, p, (d - p) / 2), |a| Ok(d_k(a))).expect("d_K is total"))
            .sum()
    };
    let dims = graded_dims(n, max_degree);
    let ranks: Vec<usize> = (0..=max_degree).map(d_rank).collect();
    (0..=max_degree)
        .map(|d| {
            let incoming = if d == 0 { 0 } else { ranks[d - 1] };
            dims[d] - ranks[d] - incoming
        })
        .collect()
}

/// `(dim, rank)` of the change of generators `λ̃^i ↦ Ω^i` on each degree.
pub fn change_of_basis_ranks(l: &LieAlgebra, max_degree: usize) -> Result<Vec<(usize, usize)>> {
    (0..=max_degree)
        .map(|d| {
            let basis = degree_basis(l.dim(), d);
            let r = operator_rank(&basis, |a| to_curvature_generators(l, a))?;
            Ok((basis.len(), r))
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct WeilTermJson {
    ext: Vec<usize>,
    sym: Vec<u32>,
    #[serde(with = "serde_q")]
    c: Q,
}

impl Serialize for WeilElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<WeilTermJson> = self
            .terms
            .iter()
            .map(|(m, c)| WeilTermJson { ext: m.ext_indices().map(|i| i + 1).collect(), sym: m.sym.clone(), c: c.clone() })
            .collect();
        terms.serialize(s)
    }
}

impl WeilElement {
    /// Parses the term-list JSON form; `n` is needed for the empty list.
    pub fn from_json(value: &serde_json::Value, n: usize) -> Result<Self> {
        let raw: Vec<WeilTermJson> = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = WeilElement::zero(n);
        for t in raw {
            if t.sym.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: t.sym.len() });
            }
            let mut ext = 0u32;
            let mut sorted = t.ext.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != t.ext.len() {
                return Err(Error::Parse("repeated exterior index".into()));
            }
            for &i in &t.ext {
                if i == 0 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, dim: n });
                }
                ext |= 1 << (i - 1);
            }
            // listed order may differ from the canonical increasing one
            let mut c = t.c;
            let mut acc = 0u32;
            for &i in &t.ext {
                let bit = 1u32 << (i - 1);
                if let Some((neg, m)) = ext_product(acc, bit) {
                    if neg {
                        c = -c;
                    }
                    acc = m;
                }
            }
            debug_assert_eq!(acc, ext);
            out.add_term(WeilMonomial { ext, sym: t.sym }, c);
        }
        Ok(out)
    }
}

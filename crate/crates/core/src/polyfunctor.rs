//! Homogeneous decomposition and polynomiality sampling for black-box maps,
//! and the restriction-injectivity check for `Sym^d`, `Λ^d`, `⊗^d`.
//!
//! [`is_polynomial`] is a falsifier: it interpolates on a grid and probes
//! off the grid. A `Consistent` verdict is evidence, not a proof.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::forms::PolyMap;
use crate::functor::{binomial, multisets, subsets, FunctorSpec};
use crate::linalg::{inverse, sparsify, Echelon, Matrix};
use crate::rational::{fmt_q, frac, pow, q, Q};
use crate::sampling::small_q;

/// A deterministic map `ℚ^source → ℚ^target` observed only through evaluation.
pub trait BlackBoxMap: Sync {
    fn source_dim(&self) -> usize;
    fn target_dim(&self) -> usize;
    fn eval(&self, v: &[Q]) -> Result<Vec<Q>>;
}

/// Componentwise arithmetic expressions.
#[derive(Clone, Debug)]
pub struct ExprMap {
    source_dim: usize,
    exprs: Vec<Expr>,
}

impl ExprMap {
    pub fn new(source_dim: usize, exprs: Vec<Expr>) -> Result<Self> {
        if let Some(e) = exprs.iter().find(|e| e.arity() > source_dim) {
            return Err(Error::DimensionMismatch { expected: source_dim, got: e.arity() });
        }
        Ok(ExprMap { source_dim, exprs })
    }

    pub fn parse(source_dim: usize, s: &str) -> Result<Self> {
        ExprMap::new(source_dim, Expr::parse_list(s)?)
    }
}

impl BlackBoxMap for ExprMap {
    fn source_dim(&self) -> usize {
        self.source_dim
    }

    fn target_dim(&self) -> usize {
        self.exprs.len()
    }

    fn eval(&self, v: &[Q]) -> Result<Vec<Q>> {
        self.exprs.iter().map(|e| e.eval(v)).collect()
    }
}

impl BlackBoxMap for PolyMap {
    fn source_dim(&self) -> usize {
        PolyMap::source_dim(self)
    }

    fn target_dim(&self) -> usize {
        PolyMap::target_dim(self)
    }

    fn eval(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != PolyMap::source_dim(self) {
            return Err(Error::DimensionMismatch { expected: PolyMap::source_dim(self), got: v.len() });
        }
        Ok(PolyMap::eval(self, v))
    }
}

/// A closure with declared dimensions.
pub struct FnMap<F> {
    pub source_dim: usize,
    pub target_dim: usize,
    pub f: F,
}

impl<F: Fn(&[Q]) -> Vec<Q> + Sync> BlackBoxMap for FnMap<F> {
    fn source_dim(&self) -> usize {
        self.source_dim
    }

    fn target_dim(&self) -> usize {
        self.target_dim
    }

    fn eval(&self, v: &[Q]) -> Result<Vec<Q>> {
        Ok((self.f)(v))
    }
}

/// `Sym^k V → Sym^{2k} V`, `x ↦ x·x`, in monomial coordinates.
#[derive(Clone, Debug)]
pub struct SymSquare {
    basis: Vec<Vec<usize>>,
    products: Vec<(usize, usize, usize)>,
    target_dim: usize,
}

impl SymSquare {
    pub fn new(dim_v: usize, k: usize) -> Self {
        let basis = multisets(dim_v, k);
        let target = multisets(dim_v, 2 * k);
        let index: HashMap<&Vec<usize>, usize> = target.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut products = Vec::new();
        for (a, ma) in basis.iter().enumerate() {
            for (b, mb) in basis.iter().enumerate() {
                let mut m = [ma.clone(), mb.clone()].concat();
                m.sort_unstable();
                products.push((a, b, index[&m]));
            }
        }
        SymSquare { basis, products, target_dim: target.len() }
    }
}

impl BlackBoxMap for SymSquare {
    fn source_dim(&self) -> usize {
        self.basis.len()
    }

    fn target_dim(&self) -> usize {
        self.target_dim
    }

    fn eval(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.basis.len() {
            return Err(Error::DimensionMismatch { expected: self.basis.len(), got: v.len() });
        }
        let mut out = vec![Q::zero(); self.target_dim];
        for &(a, b, t) in &self.products {
            out[t] += &v[a] * &v[b];
        }
        Ok(out)
    }
}

fn scaled(v: &[Q], s: &Q) -> Vec<Q> {
    v.iter().map(|x| x * s).collect()
}

/// Inverse of the Vandermonde matrix `V[r][i] = node_r^i`.
fn vandermonde_inverse(nodes: &[Q]) -> Matrix {
    let n = nodes.len();
    let v: Matrix = nodes.iter().map(|x| (0..n).map(|i| pow(x, i as u32)).collect()).collect();
    inverse(&v).expect("distinct nodes give an invertible Vandermonde matrix")
}

/// Components `f_0(v), …, f_d(v)` from `f(λv)` at `λ = 1, …, d+1`.
fn components_at(f: &dyn BlackBoxMap, d: usize, vinv: &Matrix, v: &[Q]) -> Result<Vec<Vec<Q>>> {
    let samples: Vec<Vec<Q>> = (1..=d + 1).map(|l| f.eval(&scaled(v, &q(l as i64)))).collect::<Result<_>>()?;
    let t = f.target_dim();
    Ok((0..=d)
        .map(|i| (0..t).map(|c| (0..=d).fold(Q::zero(), |acc, r| acc + &vinv[i][r] * &samples[r][c])).collect())
        .collect())
}

/// Homogeneous components tabulated on the probes.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub degree: usize,
    pub probes: Vec<Vec<Q>>,
    /// `components[i][p]` is `f_i` at probe `p`.
    pub components: Vec<Vec<Vec<Q>>>,
}

impl Decomposition {
    pub fn to_json(&self) -> Value {
        let vec = |v: &Vec<Q>| -> Vec<String> { v.iter().map(fmt_q).collect() };
        json!({
            "degree": self.degree,
            "probes": self.probes.iter().map(vec).collect::<Vec<_>>(),
            "components": self.components.iter().map(|c| c.iter().map(vec).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

pub fn homogeneous_decompose(f: &dyn BlackBoxMap, d: usize, probes: &[Vec<Q>]) -> Result<Decomposition> {
    for p in probes {
        if p.len() != f.source_dim() {
            return Err(Error::DimensionMismatch { expected: f.source_dim(), got: p.len() });
        }
    }
    let nodes: Vec<Q> = (1..=d + 1).map(|l| q(l as i64)).collect();
    let vinv = vandermonde_inverse(&nodes);
    let per_probe: Vec<Vec<Vec<Q>>> = probes.iter().map(|v| components_at(f, d, &vinv, v)).collect::<Result<_>>()?;
    let components = (0..=d).map(|i| per_probe.iter().map(|c| c[i].clone()).collect()).collect();
    Ok(Decomposition { degree: d, probes: probes.to_vec(), components })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecompositionCheck {
    /// `Σ f_i(v) = f(v)` at every probe.
    pub reconstructs: bool,
    /// `f_i(μv) = μ^i f_i(v)` for `μ ∈ {2, 3}`.
    pub homogeneous: bool,
}

pub fn check_decomposition(f: &dyn BlackBoxMap, dec: &Decomposition) -> Result<DecompositionCheck> {
    let d = dec.degree;
    let t = f.target_dim();
    let mut reconstructs = true;
    for (p, v) in dec.probes.iter().enumerate() {
        let sum: Vec<Q> = (0..t).map(|c| (0..=d).fold(Q::zero(), |acc, i| acc + &dec.components[i][p][c])).collect();
        reconstructs &= sum == f.eval(v)?;
    }
    let mut homogeneous = true;
    for mu in [2i64, 3] {
        let scaled_probes: Vec<Vec<Q>> = dec.probes.iter().map(|v| scaled(v, &q(mu))).collect();
        let again = homogeneous_decompose(f, d, &scaled_probes)?;
        for i in 0..=d {
            let factor = pow(&q(mu), i as u32);
            for p in 0..dec.probes.len() {
                homogeneous &= again.components[i][p] == scaled(&dec.components[i][p], &factor);
            }
        }
    }
    Ok(DecompositionCheck { reconstructs, homogeneous })
}

/// `v ↦ f_i(v)`, the `i`-th homogeneous component as a black box.
pub struct ComponentMap<'a> {
    pub f: &'a dyn BlackBoxMap,
    pub degree: usize,
    pub index: usize,
}

impl BlackBoxMap for ComponentMap<'_> {
    fn source_dim(&self) -> usize {
        self.f.source_dim()
    }

    fn target_dim(&self) -> usize {
        self.f.target_dim()
    }

    fn eval(&self, v: &[Q]) -> Result<Vec<Q>> {
        let nodes: Vec<Q> = (1..=self.degree + 1).map(|l| q(l as i64)).collect();
        let vinv = vandermonde_inverse(&nodes);
        Ok(components_at(self.f, self.degree, &vinv, v)?.swap_remove(self.index))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PolynomialVerdict {
    Consistent { degree: usize, trial_sets: usize, evaluations: usize },
    /// The grid interpolant disagrees with `f` at an off-grid point.
    Mismatch { trial_set: usize, lambdas: Vec<Q>, expected: Vec<Q>, interpolated: Vec<Q> },
    /// The grid interpolant has a monomial of total degree above `d`.
    DegreeExceeded { trial_set: usize, exponents: Vec<u32>, component: usize },
}

impl PolynomialVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, PolynomialVerdict::Consistent { .. })
    }

    pub fn to_json(&self) -> Value {
        let vec = |v: &Vec<Q>| -> Vec<String> { v.iter().map(fmt_q).collect() };
        match self {
            PolynomialVerdict::Consistent { degree, trial_sets, evaluations } => json!({
                "verdict": "consistent-with-polynomial",
                "degree": degree,
                "trial_sets": trial_sets,
                "evaluations": evaluations,
            }),
            PolynomialVerdict::Mismatch { trial_set, lambdas, expected, interpolated } => json!({
                "verdict": "witness",
                "kind": "off-grid-mismatch",
                "trial_set": trial_set,
                "lambdas": vec(lambdas),
                "expected": vec(expected),
                "interpolated": vec(interpolated),
            }),
            PolynomialVerdict::DegreeExceeded { trial_set, exponents, component } => json!({
                "verdict": "witness",
                "kind": "degree-exceeded",
                "trial_set": trial_set,
                "exponents": exponents,
                "component": component,
            }),
        }
    }
}

/// Multi-indices of `{0..=d}^k`, last coordinate fastest.
fn grid(k: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t: Vec<u32>| (0..=d as u32).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

/// Off-grid probe values; both signs and non-integers.
fn check_values(d: usize) -> Vec<Q> {
    vec![q(-1), frac(1, 2), frac(-3, 2), q(d as i64 + 1)]
}

/// Samples `f(Σ λ_t v_t)` on each trial set and tests it against a
/// polynomial of total degree `≤ d` in the `λ_t`.
pub fn is_polynomial(f: &dyn BlackBoxMap, d: usize, trial_sets: &[Vec<Vec<Q>>]) -> Result<PolynomialVerdict> {
    let n = f.source_dim();
    let t = f.target_dim();
    let nodes: Vec<Q> = (0..=d).map(|i| q(i as i64)).collect();
    let vinv = vandermonde_inverse(&nodes);
    let mut evaluations = 0usize;
    for (s, vs) in trial_sets.iter().enumerate() {
        if let Some(v) = vs.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        let k = vs.len();
        let combo = |lambdas: &[Q]| -> Vec<Q> {
            (0..n).map(|c| vs.iter().zip(lambdas).fold(Q::zero(), |acc, (v, l)| acc + &v[c] * l)).collect()
        };
        let points = grid(k, d);
        let stride = d + 1;
        let mut coeffs: Vec<Vec<Q>> = Vec::with_capacity(points.len());
        for p in &points {
            let lambdas: Vec<Q> = p.iter().map(|&i| q(i as i64)).collect();
            coeffs.push(f.eval(&combo(&lambdas))?);
            evaluations += 1;
        }
        // values → coefficients, one axis at a time
        for axis in 0..k {
            let step = stride.pow((k - 1 - axis) as u32);
            let mut next = coeffs.clone();
            for (idx, p) in points.iter().enumerate() {
                let base = idx - p[axis] as usize * step;
                let e = p[axis] as usize;
                for c in 0..t {
                    next[idx][c] = (0..stride).fold(Q::zero(), |acc, r| acc + &vinv[e][r] * &coeffs[base + r * step][c]);
                }
            }
            coeffs = next;
        }
        for (p, c) in points.iter().zip(&coeffs) {
            if p.iter().sum::<u32>() as usize > d {
                if let Some(comp) = c.iter().position(|x| !x.is_zero()) {
                    return Ok(PolynomialVerdict::DegreeExceeded { trial_set: s, exponents: p.clone(), component: comp });
                }
            }
        }
        let values = check_values(d);
        for choice in grid(k, values.len() - 1) {
            let lambdas: Vec<Q> = choice.iter().map(|&i| values[i as usize].clone()).collect();
            let expected = f.eval(&combo(&lambdas))?;
            evaluations += 1;
            let interpolated: Vec<Q> = (0..t)
                .map(|c| {
                    points.iter().zip(&coeffs).fold(Q::zero(), |acc, (e, co)| {
                        if co[c].is_zero() {
                            return acc;
                        }
                        acc + e.iter().zip(&lambdas).fold(co[c].clone(), |m, (&ei, l)| m * pow(l, ei))
                    })
                })
                .collect();
            if interpolated != expected {
                return Ok(PolynomialVerdict::Mismatch { trial_set: s, lambdas, expected, interpolated });
            }
        }
    }
    Ok(PolynomialVerdict::Consistent { degree: d, trial_sets: trial_sets.len(), evaluations })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionReport {
    pub functor: FunctorSpec,
    pub copies: usize,
    pub base_dim: usize,
    /// `dim F(V^n)`.
    pub dim: usize,
    pub restrictions: usize,
    pub rank: usize,
    pub injective: bool,
}

impl RestrictionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "functor": self.functor.to_string(),
            "copies": self.copies,
            "base_dim": self.base_dim,
            "dim": self.dim,
            "restrictions": self.restrictions,
            "rank": self.rank,
            "injective": self.injective,
        })
    }
}

/// Largest `dim F(V^n)` the restriction check will build.
pub const MAX_FUNCTOR_DIM: usize = 10_000;

/// Rank of `F(V^n) → Π_{|I|=d} F(V^n)`, `x ↦ (F(ε_I)x)_I`, where `ε_I`
/// projects onto the copies indexed by `I`.
pub fn restriction_injectivity(f: FunctorSpec, copies: usize, base_dim: usize) -> Result<RestrictionReport> {
    if copies <= f.degree {
        return Err(Error::Precondition(format!("need more copies than the degree ({copies} ≤ {})", f.degree)));
    }
    let total = copies * base_dim;
    let dim = f.dim(total);
    if dim > MAX_FUNCTOR_DIM {
        return Err(Error::ResourceCap { what: format!("dim {f}(V^{copies})"), needed: dim, cap: MAX_FUNCTOR_DIM });
    }
    let subsets_i = subsets(copies, f.degree);
    let mut ech = Echelon::new(dim);
    for set in &subsets_i {
        let mut eps = vec![vec![Q::zero(); total]; total];
        for &c in set {
            for b in 0..base_dim {
                let i = c * base_dim + b;
                eps[i][i] = Q::one();
            }
        }
        for row in sparsify(&f.apply(&eps, total)) {
            ech.insert(&row);
            if ech.rank() == dim {
                break;
            }
        }
    }
    debug_assert_eq!(subsets_i.len(), binomial(copies, f.degree));
    let rank = ech.rank();
    Ok(RestrictionReport {
        functor: f,
        copies,
        base_dim,
        dim,
        restrictions: subsets_i.len(),
        rank,
        injective: rank == dim,
    })
}

/// Random probes with small nonzero rational coordinates.
pub fn random_probes<R: Rng>(rng: &mut R, dim: usize, count: usize) -> Vec<Vec<Q>> {
    (0..count).map(|_| (0..dim).map(|_| small_q(rng)).collect()).collect()
}

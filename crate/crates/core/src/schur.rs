//! Brute-force dimensions of `GL(W)`-equivariant linear maps between
//! functors of `W*` and a multiplicity space `V`.
//!
//! `GL(W)` is realised as `gl(W)` plus the reflection `diag(-1, 1, …, 1)`.
//! The diagonal of `gl(W)` and the reflection act diagonally on monomial
//! bases, so unknowns are restricted to matching weights and signs; the
//! off-diagonal `E_ab` give the linear equations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::functor::FunctorKind;
use crate::linalg::Echelon;
use crate::rational::Q;

/// Largest module dimension the oracle will build.
pub const MAX_MODULE_DIM: usize = 10_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FunctorExpr {
    WDual,
    V,
    Tensor(Box<FunctorExpr>, Box<FunctorExpr>),
    TensorPower(Box<FunctorExpr>, usize),
    Sym(Box<FunctorExpr>, usize),
    Ext(Box<FunctorExpr>, usize),
}

fn checked_binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    Some(acc as usize)
}

impl FunctorExpr {
    pub fn tensor(a: FunctorExpr, b: FunctorExpr) -> Self {
        FunctorExpr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn tensor_power(a: FunctorExpr, n: usize) -> Self {
        FunctorExpr::TensorPower(Box::new(a), n)
    }

    pub fn sym(a: FunctorExpr, k: usize) -> Self {
        FunctorExpr::Sym(Box::new(a), k)
    }

    pub fn ext(a: FunctorExpr, k: usize) -> Self {
        FunctorExpr::Ext(Box::new(a), k)
    }

    /// `Sym^p(W*⊗V) ⊗ Sym^q(Λ²W*⊗V)`.
    pub fn bidegree_domain(p: usize, q: usize) -> Self {
        use FunctorExpr::{V, WDual};
        FunctorExpr::tensor(
            FunctorExpr::sym(FunctorExpr::tensor(WDual, V), p),
            FunctorExpr::sym(FunctorExpr::tensor(FunctorExpr::ext(WDual, 2), V), q),
        )
    }

    /// Polynomial degree in `W*`; scalars `t·1` act by `t^{-degree}`.
    pub fn w_degree(&self) -> usize {
        match self {
            FunctorExpr::WDual => 1,
            FunctorExpr::V => 0,
            FunctorExpr::Tensor(a, b) => a.w_degree() + b.w_degree(),
            FunctorExpr::TensorPower(a, k) | FunctorExpr::Sym(a, k) | FunctorExpr::Ext(a, k) => k * a.w_degree(),
        }
    }

    /// Dimension, or `None` on overflow.
    pub fn dim(&self, dim_w: usize, dim_v: usize) -> Option<usize> {
        match self {
            FunctorExpr::WDual => Some(dim_w),
            FunctorExpr::V => Some(dim_v),
            FunctorExpr::Tensor(a, b) => a.dim(dim_w, dim_v)?.checked_mul(b.dim(dim_w, dim_v)?),
            FunctorExpr::TensorPower(a, k) => a.dim(dim_w, dim_v)?.checked_pow(*k as u32),
            FunctorExpr::Sym(a, k) => match (a.dim(dim_w, dim_v)?, *k) {
                (_, 0) => Some(1),
                (0, _) => Some(0),
                (n, k) => checked_binomial(n + k - 1, k),
            },
            FunctorExpr::Ext(a, k) => checked_binomial(a.dim(dim_w, dim_v)?, *k),
        }
    }
}

impl fmt::Display for FunctorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorExpr::WDual => write!(f, "W*"),
            FunctorExpr::V => write!(f, "V"),
            FunctorExpr::Tensor(a, b) => write!(f, "{a} ⊗ {b}"),
            FunctorExpr::TensorPower(a, k) => write!(f, "⊗^{k}({a})"),
            FunctorExpr::Sym(a, k) => write!(f, "Sym^{k}({a})"),
            FunctorExpr::Ext(a, k) => write!(f, "Λ^{k}({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    Sym(char),
}

fn superscript_digit(c: char) -> Option<u32> {
    "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|s| s == c).map(|p| p as u32)
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || superscript_digit(c).is_some() {
            let sup = superscript_digit(c).is_some();
            let mut n = 0usize;
            while i < cs.len() {
                let d = if sup { superscript_digit(cs[i]) } else { cs[i].to_digit(10) };
                match d {
                    Some(d) => n = n.checked_mul(10).and_then(|n| n.checked_add(d as usize)).ok_or_else(|| Error::Parse("exponent too large".into()))?,
                    None => break,
                }
                i += 1;
            }
            if sup {
                out.push(Tok::Sym('^'));
            }
            out.push(Tok::Num(n));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if c == 'Λ' {
            out.push(Tok::Ident("Lambda".into()));
            i += 1;
        } else if "⊗*^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in functor expression")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn product(&mut self) -> Result<FunctorExpr> {
        let mut lhs = self.factor()?;
        while self.eat(&Tok::Sym('⊗')) || self.eat(&Tok::Ident("x".into())) {
            lhs = FunctorExpr::tensor(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn exponent(&mut self) -> Result<usize> {
        self.eat(&Tok::Sym('^'));
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(Error::Parse("expected an exponent".into())),
        }
    }

    fn argument(&mut self) -> Result<FunctorExpr> {
        if self.eat(&Tok::Sym('(')) {
            let e = self.product()?;
            if !self.eat(&Tok::Sym(')')) {
                return Err(Error::Parse("expected ')'".into()));
            }
            Ok(e)
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<FunctorExpr> {
        match self.peek().cloned() {
            Some(Tok::Sym('(')) => self.argument(),
            Some(Tok::Sym('⊗')) => {
                self.pos += 1;
                let k = self.exponent()?;
                Ok(FunctorExpr::tensor_power(self.argument()?, k))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.to_ascii_lowercase().as_str() {
                    "w" => {
                        if self.eat(&Tok::Sym('*')) {
                            Ok(FunctorExpr::WDual)
                        } else {
                            Err(Error::Parse("only the dual W* is supported".into()))
                        }
                    }
                    "v" => Ok(FunctorExpr::V),
                    "sym" | "s" => {
                        let k = self.exponent()?;
                        Ok(FunctorExpr::sym(self.argument()?, k))
                    }
                    "lambda" | "ext" | "wedge" => {
                        let k = self.exponent()?;
                        Ok(FunctorExpr::ext(self.argument()?, k))
                    }
                    "tensor" | "t" => {
                        let k = self.exponent()?;
                        Ok(FunctorExpr::tensor_power(self.argument()?, k))
                    }
                    _ => Err(Error::Parse(format!("unknown functor {id:?}"))),
                }
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?} in functor expression"))),
            None => Err(Error::Parse("unexpected end of functor expression".into())),
        }
    }
}

impl FromStr for FunctorExpr {
    type Err = Error;

    /// Accepts e.g. `Sym^2(W*⊗V) ⊗ Sym^1(Λ²W* ⊗ V)`, `⊗^3 W*`, `T^2(W*) x V`.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { toks: tokenize(s)?, pos: 0 };
        let e = p.product()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in functor expression {s:?}")));
        }
        Ok(e)
    }
}

type IntVec = Vec<(usize, i64)>;

/// A finite-dimensional `gl(W) ⋊ ⟨reflection⟩`-module with a monomial basis.
#[derive(Clone, Debug)]
pub struct Module {
    dim_w: usize,
    weights: Vec<Vec<i32>>,
    /// Reflection eigenvalue is `-1`.
    negative: Vec<bool>,
    /// `actions[g][i]` is `E_g e_i` for the generators of [`generators`].
    actions: Vec<Vec<IntVec>>,
}

/// Off-diagonal `E_ab`, `a ≠ b`, as `(a, b)`.
pub fn generators(dim_w: usize) -> Vec<(usize, usize)> {
    (0..dim_w).flat_map(|a| (0..dim_w).filter(move |&b| b != a).map(move |b| (a, b))).collect()
}

fn collect(acc: BTreeMap<usize, i64>) -> IntVec {
    acc.into_iter().filter(|(_, c)| *c != 0).collect()
}

impl Module {
    fn trivial(dim_w: usize) -> Self {
        Module { dim_w, weights: vec![vec![0; dim_w]], negative: vec![false], actions: vec![vec![vec![]]; generators(dim_w).len()] }
    }

    /// `W*` with dual basis `ε^c`: `E_ab ε^c = -δ_ac ε^b`.
    fn w_dual(dim_w: usize) -> Self {
        let weights = (0..dim_w).map(|c| (0..dim_w).map(|i| if i == c { -1 } else { 0 }).collect()).collect();
        let negative = (0..dim_w).map(|c| c == 0).collect();
        let actions = generators(dim_w)
            .into_iter()
            .map(|(a, b)| (0..dim_w).map(|c| if c == a { vec![(b, -1)] } else { vec![] }).collect())
            .collect();
        Module { dim_w, weights, negative, actions }
    }

    fn v(dim_w: usize, dim_v: usize) -> Self {
        Module {
            dim_w,
            weights: vec![vec![0; dim_w]; dim_v],
            negative: vec![false; dim_v],
            actions: vec![vec![vec![]; dim_v]; generators(dim_w).len()],
        }
    }

    fn tensor(a: &Module, b: &Module) -> Self {
        let (na, nb) = (a.dim(), b.dim());
        let mut weights = Vec::with_capacity(na * nb);
        let mut negative = Vec::with_capacity(na * nb);
        for i in 0..na {
            for j in 0..nb {
                weights.push(a.weights[i].iter().zip(&b.weights[j]).map(|(x, y)| x + y).collect());
                negative.push(a.negative[i] ^ b.negative[j]);
            }
        }
        let actions = (0..a.actions.len())
            .map(|g| {
                let mut cols = Vec::with_capacity(na * nb);
                for i in 0..na {
                    for j in 0..nb {
                        let mut col: IntVec = a.actions[g][i].iter().map(|&(t, c)| (t * nb + j, c)).collect();
                        col.extend(b.actions[g][j].iter().map(|&(t, c)| (i * nb + t, c)));
                        col.sort_unstable();
                        cols.push(col);
                    }
                }
                cols
            })
            .collect();
        Module { dim_w: a.dim_w, weights, negative, actions }
    }

    /// `Sym^k`, `Λ^k` or `⊗^k` of `a`; generators act as derivations.
    fn power(a: &Module, kind: FunctorKind, k: usize) -> Self {
        let basis = kind.basis(a.dim(), k);
        let index: HashMap<&Vec<usize>, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let weights = basis
            .iter()
            .map(|word| word.iter().fold(vec![0; a.dim_w], |acc, &i| acc.iter().zip(&a.weights[i]).map(|(x, y)| x + y).collect()))
            .collect();
        let negative = basis.iter().map(|word| word.iter().fold(false, |acc, &i| acc ^ a.negative[i])).collect();
        let actions = (0..a.actions.len())
            .map(|g| {
                basis
                    .iter()
                    .map(|word| {
                        let mut acc = BTreeMap::new();
                        for j in 0..word.len() {
                            for &(t, c) in &a.actions[g][word[j]] {
                                let mut w = word.clone();
                                w[j] = t;
                                if let Some((neg, canon)) = kind.canonical(w) {
                                    *acc.entry(index[&canon]).or_insert(0) += if neg { -c } else { c };
                                }
                            }
                        }
                        collect(acc)
                    })
                    .collect()
            })
            .collect();
        Module { dim_w: a.dim_w, weights, negative, actions }
    }

    /// Builds the module, refusing anything above [`MAX_MODULE_DIM`].
    pub fn build(expr: &FunctorExpr, dim_w: usize, dim_v: usize) -> Result<Self> {
        let needed = expr.dim(dim_w, dim_v).unwrap_or(usize::MAX);
        if needed > MAX_MODULE_DIM {
            return Err(Error::ResourceCap { what: format!("dim {expr}"), needed, cap: MAX_MODULE_DIM });
        }
        Ok(match expr {
            FunctorExpr::WDual => Module::w_dual(dim_w),
            FunctorExpr::V => Module::v(dim_w, dim_v),
            FunctorExpr::Tensor(a, b) => Module::tensor(&Module::build(a, dim_w, dim_v)?, &Module::build(b, dim_w, dim_v)?),
            FunctorExpr::TensorPower(a, k) => {
                let base = Module::build(a, dim_w, dim_v)?;
                (0..*k).fold(Module::trivial(dim_w), |acc, _| Module::tensor(&acc, &base))
            }
            FunctorExpr::Sym(a, k) => Module::power(&Module::build(a, dim_w, dim_v)?, FunctorKind::Sym, *k),
            FunctorExpr::Ext(a, k) => Module::power(&Module::build(a, dim_w, dim_v)?, FunctorKind::Ext, *k),
        })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn dim_w(&self) -> usize {
        self.dim_w
    }

    /// Eigenvalues of `E_11, …, E_nn` on basis vector `i`.
    pub fn weight(&self, i: usize) -> &[i32] {
        &self.weights[i]
    }

    pub fn reflection_sign(&self, i: usize) -> i32 {
        if self.negative[i] {
            -1
        } else {
            1
        }
    }

    /// `E_ab e_i` for `a ≠ b`.
    pub fn act(&self, a: usize, b: usize, i: usize) -> &[(usize, i64)] {
        let g = a * (self.dim_w - 1) + if b > a { b - 1 } else { b };
        &self.actions[g][i]
    }
}

/// `dim Hom(domain, codomain)` of maps commuting with `gl(W)` and the reflection.
pub fn module_hom_dim(domain: &Module, codomain: &Module) -> Result<usize> {
    if domain.dim_w != codomain.dim_w {
        return Err(Error::DimensionMismatch { expected: domain.dim_w, got: codomain.dim_w });
    }
    let dim_w = domain.dim_w;
    let mut by_weight: HashMap<&[i32], Vec<usize>> = HashMap::new();
    for c in 0..codomain.dim() {
        by_weight.entry(codomain.weight(c)).or_default().push(c);
    }
    // unknown T[c][d] for matching weight and reflection sign
    let mut unknowns: HashMap<(usize, usize), usize> = HashMap::new();
    for d in 0..domain.dim() {
        for &c in by_weight.get(domain.weight(d)).map(Vec::as_slice).unwrap_or(&[]) {
            if codomain.negative[c] == domain.negative[d] {
                let n = unknowns.len();
                unknowns.insert((c, d), n);
            }
        }
    }
    if unknowns.is_empty() {
        return Ok(0);
    }
    let mut ech = Echelon::new(unknowns.len());
    for (g, (a, b)) in generators(dim_w).into_iter().enumerate() {
        // rows of E_g on the codomain
        let mut rows: Vec<IntVec> = vec![vec![]; codomain.dim()];
        for j in 0..codomain.dim() {
            for &(c, y) in &codomain.actions[g][j] {
                rows[c].push((j, y));
            }
        }
        for d in 0..domain.dim() {
            let mut target = domain.weight(d).to_vec();
            target[a] += 1;
            target[b] -= 1;
            for &c in by_weight.get(target.as_slice()).map(Vec::as_slice).unwrap_or(&[]) {
                // (T E - E T)[c][d]
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(k, x) in &domain.actions[g][d] {
                    if let Some(&u) = unknowns.get(&(c, k)) {
                        *acc.entry(u).or_insert(0) += x;
                    }
                }
                for &(j, y) in &rows[c] {
                    if let Some(&u) = unknowns.get(&(j, d)) {
                        *acc.entry(u).or_insert(0) -= y;
                    }
                }
                let row: Vec<(usize, Q)> = collect(acc).into_iter().map(|(u, x)| (u, Q::from_integer(x.into()))).collect();
                if !row.is_empty() {
                    ech.insert(&row);
                }
            }
        }
    }
    Ok(unknowns.len() - ech.rank())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivHomProblem {
    pub dim_w: usize,
    pub dim_v: usize,
    pub domain: FunctorExpr,
    pub codomain: FunctorExpr,
}

impl EquivHomProblem {
    /// `A^{p,q}(W)` with the given dimensions.
    pub fn bidegree(p: usize, q: usize, dim_w: usize, dim_v: usize) -> Self {
        EquivHomProblem {
            dim_w,
            dim_v,
            domain: FunctorExpr::bidegree_domain(p, q),
            codomain: FunctorExpr::ext(FunctorExpr::WDual, p + 2 * q),
        }
    }

    /// Whether the `W*`-degrees of domain and codomain agree; otherwise
    /// scaling forces every equivariant map to vanish.
    pub fn weights_match(&self) -> bool {
        self.domain.w_degree() == self.codomain.w_degree()
    }
}

pub fn equivariant_hom_dim(p: &EquivHomProblem) -> Result<usize> {
    let domain = Module::build(&p.domain, p.dim_w, p.dim_v)?;
    let codomain = Module::build(&p.codomain, p.dim_w, p.dim_v)?;
    module_hom_dim(&domain, &codomain)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BidegreeReport {
    pub p: usize,
    pub q: usize,
    pub dim_v: usize,
    pub dim_w: usize,
    /// `dim Λ^p V* ⊗ Sym^q V*`.
    pub expected: usize,
    pub computed: usize,
}

impl BidegreeReport {
    pub fn matches(&self) -> bool {
        self.expected == self.computed
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "q": self.q,
            "dimV": self.dim_v,
            "dimW": self.dim_w,
            "expected": self.expected,
            "computed": self.computed,
            "match": self.matches(),
        })
    }
}

/// Computes `dim A^{p,q}(W)` at `dim W = p + 2q` and compares it with
/// `dim Λ^p V* ⊗ Sym^q V*`.
pub fn verify_bidegree(p: usize, q: usize, dim_v: usize) -> Result<BidegreeReport> {
    let dim_w = p + 2 * q;
    let computed = equivariant_hom_dim(&EquivHomProblem::bidegree(p, q, dim_w, dim_v))?;
    let expected = FunctorKind::Ext.dim(dim_v, p) * FunctorKind::Sym.dim(dim_v, q);
    Ok(BidegreeReport { p, q, dim_v, dim_w, expected, computed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use FunctorExpr::{V, WDual};

    fn problem(dim_w: usize, dim_v: usize, domain: &str, codomain: &str) -> EquivHomProblem {
        EquivHomProblem { dim_w, dim_v, domain: domain.parse().unwrap(), codomain: codomain.parse().unwrap() }
    }

    #[test]
    fn parses_and_prints() {
        let e: FunctorExpr = "Sym^1(W*⊗V) ⊗ Sym¹(Λ²W* ⊗ V)".parse().unwrap();
        assert_eq!(e, FunctorExpr::bidegree_domain(1, 1));
        assert_eq!(e.to_string().parse::<FunctorExpr>().unwrap(), e);
        assert_eq!("⊗^3 W*".parse::<FunctorExpr>().unwrap(), FunctorExpr::tensor_power(WDual, 3));
        assert_eq!("T2(W*) x V".parse::<FunctorExpr>().unwrap(), FunctorExpr::tensor(FunctorExpr::tensor_power(WDual, 2), V));
        for bad in ["W", "Sym(W*)", "W* ⊗", "Foo^2(V)", "(W*"] {
            assert!(bad.parse::<FunctorExpr>().is_err(), "{bad}");
        }
    }

    #[test]
    fn dimensions_agree_with_the_built_modules() {
        for s in ["Sym^2(W*⊗V) ⊗ Sym^1(Λ^2 W* ⊗ V)", "⊗^3 W*", "Λ^2(Sym^2 W*)", "Sym^0(W*)", "Λ^4 W*"] {
            let e: FunctorExpr = s.parse().unwrap();
            for (w, v) in [(0, 1), (2, 2), (3, 1)] {
                assert_eq!(Module::build(&e, w, v).unwrap().dim(), e.dim(w, v).unwrap(), "{s} {w} {v}");
            }
        }
    }

    #[test]
    fn modules_are_representations() {
        // [E_ab, E_cd] = δ_bc E_ad - δ_da E_cb, with diagonal terms read off the weights
        let dim_w = 3;
        for s in ["Sym^2(W* ⊗ V)", "Λ^2(W*) ⊗ W*", "Λ^2(Λ^2 W*)", "⊗^2 W*"] {
            let m = Module::build(&s.parse().unwrap(), dim_w, 2).unwrap();
            let apply = |a: usize, b: usize, v: &BTreeMap<usize, i64>| -> BTreeMap<usize, i64> {
                let mut out = BTreeMap::new();
                for (&i, &x) in v {
                    if a == b {
                        *out.entry(i).or_insert(0) += x * m.weight(i)[a] as i64;
                    } else {
                        for &(t, c) in m.act(a, b, i) {
                            *out.entry(t).or_insert(0) += x * c;
                        }
                    }
                }
                out.retain(|_, c| *c != 0);
                out
            };
            let gens: Vec<(usize, usize)> = (0..dim_w).flat_map(|a| (0..dim_w).map(move |b| (a, b))).collect();
            for i in 0..m.dim() {
                let e: BTreeMap<usize, i64> = [(i, 1)].into();
                for &(a, b) in &gens {
                    for &(c, d) in &gens {
                        let mut lhs = apply(a, b, &apply(c, d, &e));
                        for (k, x) in apply(c, d, &apply(a, b, &e)) {
                            *lhs.entry(k).or_insert(0) -= x;
                        }
                        let mut rhs = BTreeMap::new();
                        if b == c {
                            for (k, x) in apply(a, d, &e) {
                                *rhs.entry(k).or_insert(0) += x;
                            }
                        }
                        if d == a {
                            for (k, x) in apply(c, b, &e) {
                                *rhs.entry(k).or_insert(0) -= x;
                            }
                        }
                        lhs.retain(|_, x| *x != 0);
                        rhs.retain(|_, x| *x != 0);
                        assert_eq!(lhs, rhs, "{s} basis {i} [E{a}{b}, E{c}{d}]");
                    }
                }
            }
        }
    }

    #[test]
    fn reflection_commutes_with_the_action() {
        // R E_ab R = ±E_ab, with a minus sign iff exactly one of a, b is the reflected axis
        let m = Module::build(&"Sym^2(W*) ⊗ Λ^2(W*)".parse().unwrap(), 3, 1).unwrap();
        for (a, b) in generators(3) {
            let flip = (a == 0) ^ (b == 0);
            for i in 0..m.dim() {
                for &(t, _) in m.act(a, b, i) {
                    assert_eq!(m.reflection_sign(t) * m.reflection_sign(i) == -1, flip);
                }
            }
        }
    }

    #[test]
    fn examples() {
        assert_eq!(equivariant_hom_dim(&problem(3, 1, "⊗^2 W*", "Λ^2 W*")).unwrap(), 1);
        assert_eq!(equivariant_hom_dim(&problem(3, 1, "⊗^1 W*", "Λ^2 W*")).unwrap(), 0);
        assert_eq!(equivariant_hom_dim(&EquivHomProblem::bidegree(1, 1, 3, 2)).unwrap(), 4);
        let r = verify_bidegree(1, 0, 1).unwrap();
        assert_eq!((r.expected, r.computed), (1, 1));
        let r = verify_bidegree(0, 1, 1).unwrap();
        assert_eq!((r.expected, r.computed), (1, 1));
        let r = verify_bidegree(2, 0, 2).unwrap();
        assert_eq!((r.expected, r.computed, r.dim_w), (1, 1, 2));
        assert_eq!(
            verify_bidegree(1, 1, 2).unwrap().to_json(),
            json!({"p":1,"q":1,"dimV":2,"dimW":3,"expected":4,"computed":4,"match":true})
        );
    }

    #[test]
    fn symmetric_maps_do_not_reach_exterior_powers() {
        assert_eq!(equivariant_hom_dim(&problem(3, 1, "Sym^2 W*", "Λ^2 W*")).unwrap(), 0);
        assert_eq!(equivariant_hom_dim(&problem(3, 1, "Sym^2 W*", "Sym^2 W*")).unwrap(), 1);
        assert_eq!(equivariant_hom_dim(&problem(3, 1, "⊗^2 W*", "⊗^2 W*")).unwrap(), 2);
    }

    #[test]
    fn resource_cap_is_explicit() {
        let p = problem(6, 2, "⊗^6 W*", "Λ^6 W*");
        assert!(matches!(equivariant_hom_dim(&p), Err(Error::ResourceCap { .. })));
    }
}

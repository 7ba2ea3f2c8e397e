//! Polynomial-coefficient differential forms on affine charts `ℝ^m`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{Mono, Poly};
use crate::rational::{fmt_q, parse_q, Q};

/// Largest supported chart dimension (form indices live in a `u32` mask).
pub const MAX_CHART_DIM: usize = 32;

/// Sign and mask of `dx_A ∧ dx_B`, `None` when they share an index.
fn wedge_masks(a: u32, b: u32) -> Option<(bool, u32)> {
    if a & b != 0 {
        return None;
    }
    // Each index of `a` passes over every smaller index of `b`.
    let mut swaps = 0u32;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        swaps += (b & ((1u32 << i) - 1)).count_ones();
        rest &= rest - 1;
    }
    Some((swaps % 2 == 1, a | b))
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChartForm {
    dim: usize,
    parts: BTreeMap<u32, Poly>,
}

impl ChartForm {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_CHART_DIM, "chart dimension exceeds {MAX_CHART_DIM}");
        ChartForm { dim, parts: BTreeMap::new() }
    }

    /// The 0-form `f`.
    pub fn function(f: Poly) -> Self {
        let mut out = Self::zero(f.nvars());
        out.add_part(0, f);
        out
    }

    pub fn constant(dim: usize, c: Q) -> Self {
        Self::function(Poly::constant(dim, c))
    }

    /// `dx_i` (zero-based).
    pub fn dx(dim: usize, i: usize) -> Self {
        assert!(i < dim, "form index out of range");
        let mut out = Self::zero(dim);
        out.add_part(1 << i, Poly::one(dim));
        out
    }

    /// `f dx_I` for a sorted-or-not index list; repeated indices give zero.
    pub fn basic(f: Poly, indices: &[usize]) -> Self {
        let dim = f.nvars();
        indices.iter().fold(Self::function(f), |acc, &i| acc.wedge(&Self::dx(dim, i)).expect("same chart"))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(mask, coefficient)` pairs; bit `i` of the mask is `dx_{i+1}`.
    pub fn parts(&self) -> impl Iterator<Item = (u32, &Poly)> {
        self.parts.iter().map(|(m, p)| (*m, p))
    }

    pub fn part(&self, mask: u32) -> Poly {
        self.parts.get(&mask).cloned().unwrap_or_else(|| Poly::zero(self.dim))
    }

    /// Flattened `(mask, monomial, coefficient)` terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Mono, &Q)> {
        self.parts.iter().flat_map(|(m, p)| p.terms().map(move |(mono, c)| (*m, mono, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Form degree, when homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.parts.keys().map(|m| m.count_ones() as usize);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.parts.keys().all(|m| m.count_ones() as usize == k)
    }

    /// Largest coefficient degree.
    pub fn poly_degree(&self) -> Option<u32> {
        self.parts.values().filter_map(Poly::degree).max()
    }

    pub fn add_part(&mut self, mask: u32, f: Poly) {
        assert_eq!(f.nvars(), self.dim, "coefficient in a different chart");
        assert!(self.dim == 32 || mask >> self.dim == 0, "form index out of range");
        if f.is_zero() {
            return;
        }
        let sum = match self.parts.remove(&mask) {
            Some(old) => old.add(&f),
            None => f,
        };
        if !sum.is_zero() {
            self.parts.insert(mask, sum);
        }
    }

    fn check(&self, other: &ChartForm) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &ChartForm) -> ChartForm {
        assert_eq!(self.dim, other.dim, "forms on different charts");
        let mut out = self.clone();
        for (m, p) in &other.parts {
            out.add_part(*m, p.clone());
        }
        out
    }

    pub fn try_add(&self, other: &ChartForm) -> Result<ChartForm> {
        self.check(other)?;
        Ok(self.add(other))
    }

    pub fn sub(&self, other: &ChartForm) -> ChartForm {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> ChartForm {
        if c.is_zero() {
            return ChartForm::zero(self.dim);
        }
        ChartForm { dim: self.dim, parts: self.parts.iter().map(|(m, p)| (*m, p.scale(c))).collect() }
    }

    /// Multiplication by a 0-form.
    pub fn mul_function(&self, f: &Poly) -> ChartForm {
        let mut out = ChartForm::zero(self.dim);
        for (m, p) in &self.parts {
            out.add_part(*m, p.mul(f));
        }
        out
    }

    pub fn wedge(&self, other: &ChartForm) -> Result<ChartForm> {
        self.check(other)?;
        let mut out = ChartForm::zero(self.dim);
        for (ma, pa) in &self.parts {
            for (mb, pb) in &other.parts {
                if let Some((neg, m)) = wedge_masks(*ma, *mb) {
                    let p = pa.mul(pb);
                    out.add_part(m, if neg { p.neg() } else { p });
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> ChartForm {
        let mut out = ChartForm::zero(self.dim);
        for (m, p) in &self.parts {
            for i in 0..self.dim {
                let bit = 1u32 << i;
                if m & bit != 0 {
                    continue;
                }
                let dp = p.derivative(i);
                if dp.is_zero() {
                    continue;
                }
                let (neg, mask) = wedge_masks(bit, *m).expect("disjoint");
                out.add_part(mask, if neg { dp.neg() } else { dp });
            }
        }
        out
    }

    /// `φ*` along a polynomial map whose target is this chart.
    pub fn pullback(&self, phi: &PolyMap) -> Result<ChartForm> {
        if phi.target_dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: phi.target_dim() });
        }
        let src = phi.source_dim();
        let dphi: Vec<ChartForm> = phi.components.iter().map(|c| ChartForm::function(c.clone()).d()).collect();
        let mut out = ChartForm::zero(src);
        for (m, p) in &self.parts {
            let mut form = ChartForm::function(p.compose(&phi.components));
            for i in mask_indices(*m) {
                form = form.wedge(&dphi[i])?;
                if form.is_zero() {
                    break;
                }
            }
            out = out.add(&form);
        }
        Ok(out)
    }

    /// Interior product with the vector field `Σ_a X^a ∂_a`.
    pub fn contract(&self, field: &[Poly]) -> Result<ChartForm> {
        if field.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: field.len() });
        }
        let mut out = ChartForm::zero(self.dim);
        for (m, p) in &self.parts {
            for (t, i) in mask_indices(*m).into_iter().enumerate() {
                let c = p.mul(&field[i]);
                out.add_part(m & !(1u32 << i), if t % 2 == 1 { c.neg() } else { c });
            }
        }
        Ok(out)
    }

    /// Lie derivative along `Σ_a X^a ∂_a` from its coordinate formula.
    pub fn lie_derivative(&self, field: &[Poly]) -> Result<ChartForm> {
        if field.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: field.len() });
        }
        let dim = self.dim;
        let mut out = ChartForm::zero(dim);
        for (m, p) in &self.parts {
            let idx = mask_indices(*m);
            let xf = (0..dim).fold(Poly::zero(dim), |acc, a| acc.add(&field[a].mul(&p.derivative(a))));
            out.add_part(*m, xf);
            for t in 0..idx.len() {
                let mut form = ChartForm::function(p.clone());
                for (s, &i) in idx.iter().enumerate() {
                    let factor = if s == t { ChartForm::function(field[i].clone()).d() } else { ChartForm::dx(dim, i) };
                    form = form.wedge(&factor)?;
                }
                out = out.add(&form);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(m, mono, c)| {
                let dx: Vec<usize> = mask_indices(m).into_iter().map(|i| i + 1).collect();
                json!({ "dx": dx, "mono": mono.0, "c": fmt_q(c) })
            })
            .collect();
        json!({ "dim": self.dim, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<ChartForm> {
        let bad = |s: &str| Error::Parse(format!("chart form: {s}"));
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing \"dim\""))? as usize;
        if dim > MAX_CHART_DIM {
            return Err(bad("dimension too large"));
        }
        let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing \"terms\""))?;
        let mut out = ChartForm::zero(dim);
        for t in terms {
            let dx: Vec<usize> = match t.get("dx") {
                None => vec![],
                Some(x) => serde_json::from_value(x.clone()).map_err(|e| bad(&e.to_string()))?,
            };
            let mono: Vec<u32> = match t.get("mono") {
                None => vec![0; dim],
                Some(x) => serde_json::from_value(x.clone()).map_err(|e| bad(&e.to_string()))?,
            };
            if mono.len() != dim {
                return Err(bad("monomial length differs from dim"));
            }
            let c = match t.get("c") {
                Some(Value::String(s)) => parse_q(s)?,
                Some(Value::Number(n)) => parse_q(&n.to_string())?,
                _ => return Err(bad("missing coefficient \"c\"")),
            };
            let mut mask = 0u32;
            let mut neg = false;
            for &i in &dx {
                if i == 0 || i > dim {
                    return Err(Error::IndexOutOfRange { index: i, dim });
                }
                let bit = 1u32 << (i - 1);
                let (n, m) = wedge_masks(mask, bit).ok_or_else(|| bad("repeated form index"))?;
                neg ^= n;
                mask = m;
            }
            let p = Poly::monomial(Mono(mono), if neg { -c } else { c });
            out.add_part(mask, p);
        }
        Ok(out)
    }
}

impl Serialize for ChartForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChartForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        ChartForm::from_json(&v).map_err(D::Error::custom)
    }
}

impl fmt::Debug for ChartForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ChartForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(m, p)| {
                let dx: Vec<String> = mask_indices(*m).into_iter().map(|i| format!("dx{}", i + 1)).collect();
                if dx.is_empty() {
                    format!("({p})")
                } else {
                    format!("({p}) {}", dx.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Polynomial map `ℝ^{source} → ℝ^{target}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMap {
    source_dim: usize,
    components: Vec<Poly>,
}

impl PolyMap {
    pub fn new(source_dim: usize, components: Vec<Poly>) -> Result<Self> {
        for c in &components {
            if c.nvars() != source_dim {
                return Err(Error::DimensionMismatch { expected: source_dim, got: c.nvars() });
            }
        }
        Ok(PolyMap { source_dim, components })
    }

    pub fn identity(dim: usize) -> Self {
        PolyMap { source_dim: dim, components: (0..dim).map(|i| Poly::var(dim, i)).collect() }
    }

    pub fn constant(source_dim: usize, point: &[Q]) -> Self {
        PolyMap { source_dim, components: point.iter().map(|c| Poly::constant(source_dim, c.clone())).collect() }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if inner.target_dim() != self.source_dim {
            return Err(Error::DimensionMismatch { expected: self.source_dim, got: inner.target_dim() });
        }
        Ok(PolyMap {
            source_dim: inner.source_dim,
            components: self.components.iter().map(|c| c.compose(&inner.components)).collect(),
        })
    }

    pub fn eval(&self, point: &[Q]) -> Vec<Q> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};
    use proptest::prelude::*;

    fn x(m: usize, i: usize) -> Poly {
        Poly::var(m, i)
    }

    #[test]
    fn wedge_examples() {
        let dx = ChartForm::dx(3, 0);
        let dy = ChartForm::dx(3, 1);
        let dz = ChartForm::dx(3, 2);
        assert!(dx.wedge(&dx).unwrap().is_zero());
        let xdy = ChartForm::basic(x(3, 0), &[1]);
        assert_eq!(xdy.wedge(&dz).unwrap(), ChartForm::basic(x(3, 0), &[1, 2]));
        assert_eq!(dy.wedge(&dx).unwrap(), dx.wedge(&dy).unwrap().scale(&q(-1)));
        assert!(dx.wedge(&ChartForm::dx(2, 0)).is_err());
    }

    #[test]
    fn d_examples() {
        let xdy = ChartForm::basic(x(3, 0), &[1]);
        assert_eq!(xdy.d(), ChartForm::basic(Poly::one(3), &[0, 1]));
        assert!(ChartForm::dx(3, 0).d().is_zero());
        let f = x(3, 0).pow(2).mul(&x(3, 1));
        let got = ChartForm::basic(f, &[2]).d();
        let expected = ChartForm::basic(x(3, 0).mul(&x(3, 1)).scale(&q(2)), &[0, 2])
            .add(&ChartForm::basic(x(3, 0).pow(2), &[1, 2]));
        assert_eq!(got, expected);
    }

    #[test]
    fn pullback_examples() {
        let t = Poly::var(1, 0);
        let phi = PolyMap::new(1, vec![t.clone(), t.pow(2)]).unwrap();
        let a = ChartForm::basic(x(2, 0), &[1]);
        assert_eq!(a.pullback(&phi).unwrap(), ChartForm::basic(t.pow(2).scale(&q(2)), &[0]));
        assert_eq!(a.pullback(&PolyMap::identity(2)).unwrap(), a);
        let c = PolyMap::constant(3, &[q(1), frac(2, 3)]);
        assert!(a.pullback(&c).unwrap().is_zero());
        assert!(a.pullback(&PolyMap::identity(3)).is_err());
    }

    #[test]
    fn rotation_contraction() {
        let field = vec![x(2, 1).neg(), x(2, 0)];
        let c = ChartForm::dx(2, 0).contract(&field).unwrap();
        assert_eq!(c, ChartForm::function(x(2, 1).neg()));
        let r2 = x(2, 0).pow(2).add(&x(2, 1).pow(2));
        assert!(ChartForm::function(r2).lie_derivative(&field).unwrap().is_zero());
    }

    #[test]
    fn json_round_trip_and_sign() {
        let v = serde_json::json!({"dim": 3, "terms": [{"dx": [2, 1], "mono": [1, 0, 0], "c": "2/3"}]});
        let f = ChartForm::from_json(&v).unwrap();
        assert_eq!(f, ChartForm::basic(x(3, 0).scale(&frac(-2, 3)), &[0, 1]));
        assert_eq!(ChartForm::from_json(&f.to_json()).unwrap(), f);
        let dup = serde_json::json!({"dim": 2, "terms": [{"dx": [1, 1], "mono": [0, 0], "c": "1"}]});
        assert!(ChartForm::from_json(&dup).is_err());
    }

    fn arb_poly(m: usize, deg: u32) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((proptest::collection::vec(0..=deg, m), -3i64..4), 0..4).prop_map(move |ts| {
            Poly::from_terms(
                m,
                ts.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= deg).map(|(e, c)| (Mono(e), q(c))),
            )
        })
    }

    fn arb_form(m: usize) -> impl Strategy<Value = ChartForm> {
        proptest::collection::vec((0u32..(1 << m), arb_poly(m, 3)), 0..4).prop_map(move |ps| {
            let mut f = ChartForm::zero(m);
            for (mask, p) in ps {
                f.add_part(mask, p);
            }
            f
        })
    }

    fn arb_map(src: usize, tgt: usize) -> impl Strategy<Value = PolyMap> {
        proptest::collection::vec(arb_poly(src, 2), tgt).prop_map(move |cs| PolyMap::new(src, cs).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn d_squared_vanishes(f in (1usize..=5).prop_flat_map(arb_form)) {
            prop_assert!(f.d().d().is_zero());
        }

        #[test]
        fn leibniz(a in arb_form(3), b in arb_form(3)) {
            let lhs = a.wedge(&b).unwrap().d();
            let mut rhs = a.d().wedge(&b).unwrap();
            for (mask, p) in a.parts() {
                let mut part = ChartForm::zero(3);
                part.add_part(mask, p.clone());
                let s = if mask.count_ones() % 2 == 0 { q(1) } else { q(-1) };
                rhs = rhs.add(&part.wedge(&b.d()).unwrap().scale(&s));
            }
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn graded_commutativity(a in arb_form(3), b in arb_form(3)) {
            let mut rhs = ChartForm::zero(3);
            for (ma, pa) in a.parts() {
                for (mb, pb) in b.parts() {
                    let mut fa = ChartForm::zero(3);
                    fa.add_part(ma, pa.clone());
                    let mut fb = ChartForm::zero(3);
                    fb.add_part(mb, pb.clone());
                    let s = if (ma.count_ones() * mb.count_ones()) % 2 == 0 { q(1) } else { q(-1) };
                    rhs = rhs.add(&fb.wedge(&fa).unwrap().scale(&s));
                }
            }
            prop_assert_eq!(a.wedge(&b).unwrap(), rhs);
        }

        #[test]
        fn pullback_commutes_with_d(a in arb_form(3), phi in arb_map(2, 3)) {
            prop_assert_eq!(a.d().pullback(&phi).unwrap(), a.pullback(&phi).unwrap().d());
        }

        #[test]
        fn pullback_is_multiplicative(a in arb_form(3), b in arb_form(3), phi in arb_map(4, 3)) {
            let lhs = a.wedge(&b).unwrap().pullback(&phi).unwrap();
            let rhs = a.pullback(&phi).unwrap().wedge(&b.pullback(&phi).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pullback_is_contravariant(a in arb_form(3), phi in arb_map(2, 3), psi in arb_map(2, 2)) {
            let composite = phi.compose(&psi).unwrap();
            prop_assert_eq!(
                a.pullback(&composite).unwrap(),
                a.pullback(&phi).unwrap().pullback(&psi).unwrap()
            );
        }

        #[test]
        fn cartan_formula_for_vector_fields(a in arb_form(3), field in proptest::collection::vec(arb_poly(3, 2), 3)) {
            let cartan = a.contract(&field).unwrap().d().add(&a.d().contract(&field).unwrap());
            prop_assert_eq!(a.lie_derivative(&field).unwrap(), cartan);
        }
    }
}

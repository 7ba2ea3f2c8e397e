//! The Weil model `Ω(X) ⊗ Koss g*` of a linear action on a chart `X = ℝ^m`.
//!
//! `ξ ∈ g` acts on `X` through the linear vector field `ξ̂(x) = ρ(ξ)x`.
//! Because `[X_A, X_B] = X_{−[A,B]}` for linear fields, `ξ ↦ ξ̂` is a Lie
//! algebra map exactly when `[ρ(e_i), ρ(e_j)] = −Σ_k f^k_{ij} ρ(e_k)`; this
//! is the condition enforced on actions. [`WeilModel::from_left_representation`]
//! accepts a representation instead and negates it.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::ChartForm;
use crate::liealg::{AlgebraVector, LieAlgebra};
use crate::linalg::{mat_mul, Echelon, Matrix, SparseVec};
use crate::poly::{monomials, Mono, Poly};
use crate::rational::{fmt_q, q, sign, Q};
use crate::weil::{contract, d_k, degree_basis, WeilElement, WeilMonomial};

/// `(dx mask, coefficient monomial, Weil monomial)`.
pub type ModelKey = (u32, Mono, WeilMonomial);

/// Largest truncated basis `basic_dims` will build.
pub const MAX_MODEL_BASIS: usize = 200_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeilModelElement {
    chart_dim: usize,
    algebra_dim: usize,
    terms: BTreeMap<ModelKey, Q>,
}

impl WeilModelElement {
    pub fn zero(chart_dim: usize, algebra_dim: usize) -> Self {
        WeilModelElement { chart_dim, algebra_dim, terms: BTreeMap::new() }
    }

    /// `ω ⊗ a`.
    pub fn tensor(omega: &ChartForm, a: &WeilElement) -> Self {
        let mut out = Self::zero(omega.dim(), a.dim());
        for (mask, mono, c) in omega.terms() {
            for (wm, c2) in a.terms() {
                out.add_term((mask, mono.clone(), wm.clone()), c * c2);
            }
        }
        out
    }

    pub fn basis_element(chart_dim: usize, algebra_dim: usize, key: ModelKey) -> Self {
        let mut out = Self::zero(chart_dim, algebra_dim);
        out.add_term(key, Q::one());
        out
    }

    pub fn chart_dim(&self) -> usize {
        self.chart_dim
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ModelKey, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &ModelKey) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    /// Total degree, when homogeneous and nonzero.
    pub fn total_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|(mask, _, wm)| mask.count_ones() as usize + wm.total_degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add_term(&mut self, key: ModelKey, c: Q) {
        if c.is_zero() {
            return;
        }
        let sum = self.terms.remove(&key).map_or(c.clone(), |old| old + &c);
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.chart_dim, self.algebra_dim);
        }
        WeilModelElement {
            chart_dim: self.chart_dim,
            algebra_dim: self.algebra_dim,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let idx = |mask: u32| -> Vec<usize> { (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect() };
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((mask, mono, wm), c)| {
                json!({ "dx": idx(*mask), "mono": mono.0, "ext": idx(wm.ext), "sym": wm.sym, "c": fmt_q(c) })
            })
            .collect();
        json!(terms)
    }
}

/// A Lie algebra acting linearly on `ℝ^m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeilModel {
    algebra: LieAlgebra,
    chart_dim: usize,
    action: Vec<Matrix>,
}

impl WeilModel {
    pub fn new(algebra: LieAlgebra, chart_dim: usize, action: Vec<Matrix>) -> Result<Self> {
        let n = algebra.dim();
        if action.len() != n {
            return Err(Error::InvalidAction(format!("expected {n} matrices, got {}", action.len())));
        }
        for (i, a) in action.iter().enumerate() {
            if a.len() != chart_dim || a.iter().any(|r| r.len() != chart_dim) {
                return Err(Error::InvalidAction(format!("matrix {} is not {chart_dim}×{chart_dim}", i + 1)));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let ab = mat_mul(&action[i], &action[j]);
                let ba = mat_mul(&action[j], &action[i]);
                for r in 0..chart_dim {
                    for s in 0..chart_dim {
                        let lhs = &ab[r][s] - &ba[r][s];
                        let rhs: Q = (0..n).map(|k| -(algebra.f(i, j, k) * &action[k][r][s])).sum();
                        if lhs != rhs {
                            return Err(Error::InvalidAction(format!(
                                "[ρ(e{}), ρ(e{})] ≠ −ρ([e{}, e{}])",
                                i + 1,
                                j + 1,
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(WeilModel { algebra, chart_dim, action })
    }

    /// The zero action on `ℝ^m`.
    pub fn trivial(algebra: LieAlgebra, chart_dim: usize) -> Self {
        let action = vec![vec![vec![Q::zero(); chart_dim]; chart_dim]; algebra.dim()];
        WeilModel { algebra, chart_dim, action }
    }

    /// Accepts `[R_i, R_j] = Σ f^k_{ij} R_k` and uses `ρ = −R`.
    pub fn from_left_representation(algebra: LieAlgebra, chart_dim: usize, rep: &[Matrix]) -> Result<Self> {
        let neg: Vec<Matrix> = rep.iter().map(|m| m.iter().map(|r| r.iter().map(|x| -x).collect()).collect()).collect();
        WeilModel::new(algebra, chart_dim, neg)
    }

    /// Named actions: `rot2` (abelian(1) on ℝ²), `rot3` (su2/so3 on ℝ³),
    /// `trivial` (zero action on ℝ^m).
    pub fn builtin(algebra: LieAlgebra, name: &str, chart_dim: Option<usize>) -> Result<Self> {
        match name {
            "rot2" => {
                let m = vec![vec![q(0), q(-1)], vec![q(1), q(0)]];
                WeilModel::new(algebra, 2, vec![m])
            }
            "rot3" => {
                // ρ(e_i) = −L_i with (L_i)_{jk} = −ε_{ijk}
                let gens: Vec<Matrix> = (0..3)
                    .map(|i| {
                        let mut m = vec![vec![Q::zero(); 3]; 3];
                        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                        m[j][k] = q(-1);
                        m[k][j] = q(1);
                        m
                    })
                    .collect();
                WeilModel::from_left_representation(algebra, 3, &gens)
            }
            "trivial" => Ok(WeilModel::trivial(algebra, chart_dim.unwrap_or(0))),
            other => Err(Error::InvalidAction(format!("unknown action {other:?}"))),
        }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn chart_dim(&self) -> usize {
        self.chart_dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Components of `ξ̂(x) = ρ(ξ)x`.
    pub fn vector_field(&self, xi: &AlgebraVector) -> Result<Vec<Poly>> {
        let n = self.algebra.dim();
        if xi.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: xi.dim() });
        }
        let m = self.chart_dim;
        Ok((0..m)
            .map(|a| {
                let mut p = Poly::zero(m);
                for b in 0..m {
                    let c: Q = (0..n).map(|i| &xi.0[i] * &self.action[i][a][b]).sum();
                    if !c.is_zero() {
                        p = p.add(&Poly::var(m, b).scale(&c));
                    }
                }
                p
            })
            .collect())
    }

    fn check(&self, w: &WeilModelElement) -> Result<()> {
        if w.chart_dim != self.chart_dim {
            return Err(Error::DimensionMismatch { expected: self.chart_dim, got: w.chart_dim });
        }
        if w.algebra_dim != self.algebra.dim() {
            return Err(Error::DimensionMismatch { expected: self.algebra.dim(), got: w.algebra_dim });
        }
        Ok(())
    }

    fn split(&self, key: &ModelKey, c: &Q) -> (ChartForm, WeilElement) {
        let mut omega = ChartForm::zero(self.chart_dim);
        omega.add_part(key.0, Poly::monomial(key.1.clone(), Q::one()));
        (omega, WeilElement::monomial(key.2.clone(), c.clone()))
    }

    /// `D(ω⊗a) = dω⊗a + (−1)^{|ω|} ω⊗d_K a`.
    pub fn total_d(&self, w: &WeilModelElement) -> Result<WeilModelElement> {
        self.check(w)?;
        let mut out = WeilModelElement::zero(self.chart_dim, self.algebra.dim());
        for (key, c) in &w.terms {
            let (omega, a) = self.split(key, c);
            let s = sign(key.0.count_ones() as usize);
            out = out.add(&WeilModelElement::tensor(&omega.d(), &a));
            out = out.add(&WeilModelElement::tensor(&omega, &d_k(&a)).scale(&s));
        }
        Ok(out)
    }

    /// `ι(ω⊗a) = ι_ξ̂ω⊗a + (−1)^{|ω|} ω⊗ι_ξ a`.
    pub fn total_contract(&self, xi: &AlgebraVector, w: &WeilModelElement) -> Result<WeilModelElement> {
        self.check(w)?;
        let field = self.vector_field(xi)?;
        let mut out = WeilModelElement::zero(self.chart_dim, self.algebra.dim());
        for (key, c) in &w.terms {
            let (omega, a) = self.split(key, c);
            let s = sign(key.0.count_ones() as usize);
            out = out.add(&WeilModelElement::tensor(&omega.contract(&field)?, &a));
            out = out.add(&WeilModelElement::tensor(&omega, &contract(&self.algebra, xi, &a)?).scale(&s));
        }
        Ok(out)
    }

    /// `L_ξ = Dι_ξ + ι_ξD`.
    pub fn total_lie(&self, xi: &AlgebraVector, w: &WeilModelElement) -> Result<WeilModelElement> {
        let a = self.total_d(&self.total_contract(xi, w)?)?;
        let b = self.total_contract(xi, &self.total_d(w)?)?;
        Ok(a.add(&b))
    }

    /// Basis keys of total degree `d` with coefficient degree at most `cap`.
    pub fn truncated_basis(&self, d: usize, cap: u32) -> Vec<ModelKey> {
        let m = self.chart_dim;
        let n = self.algebra.dim();
        let monos: Vec<Mono> = (0..=cap).flat_map(|e| monomials(m, e)).collect();
        let mut out = Vec::new();
        for k in 0..=m.min(d) {
            let weil = degree_basis(n, d - k);
            if weil.is_empty() {
                continue;
            }
            let masks: Vec<u32> = (0u32..(1u32 << m)).filter(|x| x.count_ones() as usize == k).collect();
            for &mask in &masks {
                for mono in &monos {
                    for wm in &weil {
                        out.push((mask, mono.clone(), wm.clone()));
                    }
                }
            }
        }
        out
    }

    /// Basis of the truncated basic subspace: killed by all `ι_{e_i}` and `L_{e_i}`.
    pub fn basic_basis(&self, d: usize, cap: u32) -> Result<Vec<WeilModelElement>> {
        let domain = self.truncated_basis(d, cap);
        if domain.len() > MAX_MODEL_BASIS {
            return Err(Error::ResourceCap { what: "truncated Weil model basis".into(), needed: domain.len(), cap: MAX_MODEL_BASIS });
        }
        let (m, n) = (self.chart_dim, self.algebra.dim());
        let mut rows: BTreeMap<(usize, ModelKey), SparseVec> = BTreeMap::new();
        for (col, key) in domain.iter().enumerate() {
            let e = WeilModelElement::basis_element(m, n, key.clone());
            for i in 0..n {
                let xi = AlgebraVector::basis(n, i);
                for (op, img) in [(2 * i, self.total_contract(&xi, &e)?), (2 * i + 1, self.total_lie(&xi, &e)?)] {
                    for (t, c) in img.terms {
                        rows.entry((op, t)).or_default().push((col, c));
                    }
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
            .map(|v| {
                let mut w = WeilModelElement::zero(m, n);
                for (j, c) in v {
                    w.add_term(domain[j].clone(), c);
                }
                w
            })
            .collect())
    }

    pub fn basic_dims(&self, d: usize, cap: u32) -> Result<usize> {
        self.basic_basis(d, cap).map(|b| b.len())
    }
}

/// Whether `w` lies in the span of `basis`.
pub fn in_span(basis: &[WeilModelElement], w: &WeilModelElement) -> bool {
    let mut index: HashMap<ModelKey, usize> = HashMap::new();
    let mut coords = |e: &WeilModelElement| -> SparseVec {
        let mut v: SparseVec = e
            .terms
            .iter()
            .map(|(k, c)| {
                let next = index.len();
                (*index.entry(k.clone()).or_insert(next), c.clone())
            })
            .collect();
        v.sort_by_key(|x| x.0);
        v
    };
    let rows: Vec<SparseVec> = basis.iter().map(&mut coords).collect();
    let target = coords(w);
    let mut ech = Echelon::new(index.len());
    for r in &rows {
        ech.insert(r);
    }
    ech.contains(&target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::basic_subspace;
    use proptest::prelude::*;

    fn abelian1() -> LieAlgebra {
        LieAlgebra::builtin("abelian(1)").unwrap()
    }

    #[test]
    fn total_d_examples() {
        let model = WeilModel::trivial(abelian1(), 2);
        let one = ChartForm::constant(2, q(1));
        let l1 = WeilElement::lambda(1, 0);
        let lt1 = WeilElement::lambda_tilde(1, 0);
        let w = WeilModelElement::tensor(&one, &l1);
        assert_eq!(model.total_d(&w).unwrap(), WeilModelElement::tensor(&one, &lt1));
        let x = WeilModelElement::tensor(&ChartForm::function(Poly::var(2, 0)), &WeilElement::one(1));
        assert_eq!(model.total_d(&x).unwrap(), WeilModelElement::tensor(&ChartForm::dx(2, 0), &WeilElement::one(1)));
        let dxl = WeilModelElement::tensor(&ChartForm::dx(2, 0), &l1);
        assert_eq!(model.total_d(&dxl).unwrap(), WeilModelElement::tensor(&ChartForm::dx(2, 0), &lt1).scale(&q(-1)));
    }

    #[test]
    fn total_contract_examples() {
        let model = WeilModel::builtin(abelian1(), "rot2", None).unwrap();
        let xi = AlgebraVector::basis(1, 0);
        let w = WeilModelElement::tensor(&ChartForm::dx(2, 0), &WeilElement::one(1));
        let expected = WeilModelElement::tensor(&ChartForm::function(Poly::var(2, 1).neg()), &WeilElement::one(1));
        assert_eq!(model.total_contract(&xi, &w).unwrap(), expected);

        let l1 = WeilModelElement::tensor(&ChartForm::constant(2, q(1)), &WeilElement::lambda(1, 0));
        let xi = AlgebraVector(vec![q(5)]);
        assert_eq!(
            model.total_contract(&xi, &l1).unwrap(),
            WeilModelElement::tensor(&ChartForm::constant(2, q(5)), &WeilElement::one(1))
        );
    }

    #[test]
    fn trivial_action_reduces_to_the_weil_algebra() {
        let su2 = LieAlgebra::builtin("su2").unwrap();
        let model = WeilModel::trivial(su2.clone(), 0);
        for d in 0..=6 {
            assert_eq!(model.basic_dims(d, 0).unwrap(), basic_subspace(&su2, d).unwrap().len(), "d={d}");
        }
        let model = WeilModel::trivial(su2.clone(), 2);
        assert_eq!(model.basic_dims(4, 0).unwrap(), 1);
        let xi = AlgebraVector(vec![q(1), q(2), q(-1)]);
        let a = crate::weil::curvature_generator(&su2, 1).unwrap();
        let w = WeilModelElement::tensor(&ChartForm::dx(2, 1), &a);
        let expected = WeilModelElement::tensor(&ChartForm::dx(2, 1), &contract(&su2, &xi, &a).unwrap()).scale(&q(-1));
        assert_eq!(model.total_contract(&xi, &w).unwrap(), expected);
    }

    #[test]
    fn constants_are_basic_in_degree_zero() {
        for (alg, act) in [("abelian(1)", "rot2"), ("su2", "rot3")] {
            let model = WeilModel::builtin(LieAlgebra::builtin(alg).unwrap(), act, None).unwrap();
            assert_eq!(model.basic_dims(0, 0).unwrap(), 1);
        }
    }

    #[test]
    fn rotation_invariants_contain_the_radius() {
        let model = WeilModel::builtin(abelian1(), "rot2", None).unwrap();
        let basic = model.basic_basis(0, 2).unwrap();
        assert_eq!(basic.len(), 2);
        let r2 = Poly::var(2, 0).pow(2).add(&Poly::var(2, 1).pow(2));
        let w = WeilModelElement::tensor(&ChartForm::function(r2), &WeilElement::one(1));
        assert!(in_span(&basic, &w));
        let x = WeilModelElement::tensor(&ChartForm::function(Poly::var(2, 0)), &WeilElement::one(1));
        assert!(!in_span(&basic, &x));
        let dims: Vec<usize> = (0..=3).map(|c| model.basic_dims(2, c).unwrap()).collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]), "{dims:?}");
    }

    #[test]
    fn differential_of_basic_is_basic() {
        let model = WeilModel::builtin(LieAlgebra::builtin("su2").unwrap(), "rot3", None).unwrap();
        for d in 0..=2 {
            let lower = model.basic_basis(d, 2).unwrap();
            let upper = model.basic_basis(d + 1, 2).unwrap();
            for b in &lower {
                assert!(in_span(&upper, &model.total_d(b).unwrap()));
            }
        }
    }

    #[test]
    fn rejects_representations_of_the_wrong_sign() {
        let su2 = LieAlgebra::builtin("su2").unwrap();
        let gens: Vec<Matrix> = (0..3)
            .map(|i| {
                let mut m = vec![vec![Q::zero(); 3]; 3];
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                m[j][k] = q(-1);
                m[k][j] = q(1);
                m
            })
            .collect();
        assert!(matches!(WeilModel::new(su2.clone(), 3, gens.clone()), Err(Error::InvalidAction(_))));
        assert!(WeilModel::from_left_representation(su2, 3, &gens).is_ok());
        assert!(WeilModel::new(abelian1(), 3, vec![]).is_err());
    }

    fn arb_element(model: WeilModel, d: usize) -> impl Strategy<Value = WeilModelElement> {
        let basis = model.truncated_basis(d, 2);
        let (m, n) = (model.chart_dim(), model.algebra().dim());
        proptest::collection::vec((0..basis.len(), -3i64..4), 1..5).prop_map(move |ts| {
            let mut w = WeilModelElement::zero(m, n);
            for (i, c) in ts {
                w.add_term(basis[i].clone(), q(c));
            }
            w
        })
    }

    fn rot3() -> WeilModel {
        WeilModel::builtin(LieAlgebra::builtin("su2").unwrap(), "rot3", None).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn total_d_squares_to_zero(w in (0usize..5).prop_flat_map(|d| arb_element(rot3(), d))) {
            let model = rot3();
            prop_assert!(model.total_d(&model.total_d(&w).unwrap()).unwrap().is_zero());
        }

        #[test]
        fn cartan_relations(
            w in (0usize..5).prop_flat_map(|d| arb_element(rot3(), d)),
            a in proptest::collection::vec(-2i64..3, 3),
            b in proptest::collection::vec(-2i64..3, 3),
        ) {
            let model = rot3();
            let l = model.algebra().clone();
            let xi = AlgebraVector(a.into_iter().map(q).collect());
            let eta = AlgebraVector(b.into_iter().map(q).collect());
            let bracket = l.bracket(&xi, &eta).unwrap();
            let ixi = |v: &WeilModelElement| model.total_contract(&xi, v).unwrap();
            let ieta = |v: &WeilModelElement| model.total_contract(&eta, v).unwrap();
            let lxi = |v: &WeilModelElement| model.total_lie(&xi, v).unwrap();
            let leta = |v: &WeilModelElement| model.total_lie(&eta, v).unwrap();
            prop_assert!(ixi(&ieta(&w)).add(&ieta(&ixi(&w))).is_zero());
            prop_assert_eq!(lxi(&ieta(&w)).sub(&ieta(&lxi(&w))), model.total_contract(&bracket, &w).unwrap());
            prop_assert_eq!(lxi(&leta(&w)).sub(&leta(&lxi(&w))), model.total_lie(&bracket, &w).unwrap());
            let dw = model.total_d(&w).unwrap();
            prop_assert_eq!(model.total_d(&lxi(&w)).unwrap(), lxi(&dw));
        }
    }
}

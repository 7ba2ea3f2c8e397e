//! Ad-invariant polynomials `(Sym^k g*)^g`.
//!
//! The coadjoint action extends to `Sym•g*` as a derivation; on bidegree
//! `(0, k)` of the Weil algebra this is exactly the Lie derivative, so the
//! invariants are computed as the joint kernel of `L_{e_i}` there.

use std::fmt;

use crate::error::{Error, Result};
use crate::liealg::{AlgebraVector, LieAlgebra};
use crate::weil::{bidegree_basis, joint_kernel, lie_derivative, to_curvature_generators, WeilElement};

/// A Weil element with no exterior part.
#[derive(Clone, PartialEq, Eq)]
pub struct SymElement(WeilElement);

impl SymElement {
    pub fn new(e: WeilElement) -> Result<Self> {
        if e.terms().any(|(m, _)| m.ext != 0) {
            return Err(Error::DegreeMismatch("symmetric element has an exterior factor".into()));
        }
        Ok(SymElement(e))
    }

    pub fn as_weil(&self) -> &WeilElement {
        &self.0
    }

    pub fn into_weil(self) -> WeilElement {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Polynomial degree `k`, when homogeneous.
    pub fn degree(&self) -> Option<usize> {
        self.0.bidegree().map(|(_, k)| k)
    }

    /// `Σ_i (λ̃^i)²`.
    pub fn sum_of_squares(n: usize) -> Self {
        let e = (0..n).fold(WeilElement::zero(n), |acc, i| {
            let t = WeilElement::lambda_tilde(n, i);
            acc.add(&t.multiply(&t).expect("same dimension"))
        });
        SymElement(e)
    }
}

impl fmt::Debug for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Echelon basis of `(Sym^k g*)^g`.
pub fn invariant_basis(l: &LieAlgebra, k: usize) -> Result<Vec<SymElement>> {
    let n = l.dim();
    let domain = bidegree_basis(n, 0, k);
    let gens: Vec<AlgebraVector> = (0..n).map(|i| AlgebraVector::basis(n, i)).collect();
    let ops: Vec<Box<dyn Fn(&WeilElement) -> Result<WeilElement> + '_>> = gens
        .into_iter()
        .map(|e| Box::new(move |a: &WeilElement| lie_derivative(l, &e, a)) as Box<dyn Fn(&WeilElement) -> Result<WeilElement>>)
        .collect();
    let refs: Vec<&dyn Fn(&WeilElement) -> Result<WeilElement>> = ops.iter().map(|b| b.as_ref()).collect();
    Ok(joint_kernel(&domain, &refs)?.into_iter().map(SymElement).collect())
}

/// `dim (Sym^k g*)^g` for `k = 0..=max_k`.
pub fn invariant_dims(l: &LieAlgebra, max_k: usize) -> Result<Vec<usize>> {
    (0..=max_k).map(|k| invariant_basis(l, k).map(|b| b.len())).collect()
}

/// Whether `p` is killed by every infinitesimal coadjoint derivation.
pub fn is_invariant(l: &LieAlgebra, p: &SymElement) -> Result<bool> {
    let n = l.dim();
    for i in 0..n {
        if !lie_derivative(l, &AlgebraVector::basis(n, i), p.as_weil())?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `P(λ̃) ↦ P(Ω)`: the image of an invariant polynomial in the Weil algebra.
pub fn to_weil_basic(l: &LieAlgebra, p: &SymElement) -> Result<WeilElement> {
    to_curvature_generators(l, p.as_weil())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Echelon;
    use crate::rational::q;
    use crate::weil::{basic_subspace, degree_basis, index_of, WeilMonomial};

    #[test]
    fn abelian_everything_is_invariant() {
        let ab = LieAlgebra::builtin("abelian(2)").unwrap();
        assert_eq!(invariant_dims(&ab, 3).unwrap()[3], 4);
        let a1 = LieAlgebra::builtin("abelian(1)").unwrap();
        let b = invariant_basis(&a1, 5).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].as_weil(), &WeilElement::monomial(WeilMonomial { ext: 0, sym: vec![5] }, q(1)));
    }

    #[test]
    fn su2_invariants() {
        let s = LieAlgebra::builtin("su2").unwrap();
        assert_eq!(invariant_dims(&s, 4).unwrap(), vec![1, 0, 1, 0, 1]);
        assert!(invariant_basis(&s, 1).unwrap().is_empty());
        let b2 = invariant_basis(&s, 2).unwrap();
        assert_eq!(b2.len(), 1);
        let cas = SymElement::sum_of_squares(3);
        assert!(is_invariant(&s, &cas).unwrap());
        let basis = degree_basis(3, 4);
        let idx = index_of(&basis);
        let mut e = Echelon::new(basis.len());
        e.insert(&b2[0].as_weil().coordinates(&idx));
        assert!(e.contains(&cas.as_weil().coordinates(&idx)));
    }

    #[test]
    fn heisenberg_linear_invariants_annihilate_the_derived_algebra() {
        // [g, g] = span(e3), so the invariant linear forms are λ̃¹ and λ̃².
        let h = LieAlgebra::builtin("heisenberg3").unwrap();
        let b = invariant_basis(&h, 1).unwrap();
        let got: Vec<WeilElement> = b.into_iter().map(SymElement::into_weil).collect();
        assert_eq!(got, vec![WeilElement::lambda_tilde(3, 1), WeilElement::lambda_tilde(3, 0)]);
        let centre = SymElement::new(WeilElement::lambda_tilde(3, 2)).unwrap();
        assert!(!is_invariant(&h, &centre).unwrap());
    }

    #[test]
    fn weil_bridge_matches_basic_subspace() {
        for name in ["abelian(1)", "abelian(2)", "su2", "so3", "sl2", "heisenberg3"] {
            let l = LieAlgebra::builtin(name).unwrap();
            let dims = invariant_dims(&l, 4).unwrap();
            for k in 0..=4 {
                let basic = basic_subspace(&l, 2 * k).unwrap();
                assert_eq!(basic.len(), dims[k], "{name} k={k}");
                let basis = degree_basis(l.dim(), 2 * k);
                let idx = index_of(&basis);
                let mut span = Echelon::new(basis.len());
                for b in &basic {
                    span.insert(&b.coordinates(&idx));
                }
                let mut images = Echelon::new(basis.len());
                for p in invariant_basis(&l, k).unwrap() {
                    let w = to_weil_basic(&l, &p).unwrap();
                    assert!(span.contains(&w.coordinates(&idx)), "{name} k={k}");
                    images.insert(&w.coordinates(&idx));
                }
                assert_eq!(images.rank(), dims[k]);
            }
        }
    }

    #[test]
    fn invariant_ring_is_closed_under_products() {
        for name in ["su2", "heisenberg3", "sl2"] {
            let l = LieAlgebra::builtin(name).unwrap();
            for a in 1..=2 {
                for b in 1..=2 {
                    let target = invariant_basis(&l, a + b).unwrap();
                    let basis = degree_basis(3, 2 * (a + b));
                    let idx = index_of(&basis);
                    let mut span = Echelon::new(basis.len());
                    for t in &target {
                        span.insert(&t.as_weil().coordinates(&idx));
                    }
                    for x in invariant_basis(&l, a).unwrap() {
                        for y in invariant_basis(&l, b).unwrap() {
                            let p = x.as_weil().multiply(y.as_weil()).unwrap();
                            assert!(span.contains(&p.coordinates(&idx)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_exterior_parts() {
        assert!(SymElement::new(WeilElement::lambda(2, 0)).is_err());
    }
}

use rand::Rng;
use weil_core::chern_weil::{curvature, cw_form, gauge_transform, universal_substitution, LieValuedForm, Representation};
use weil_core::forms::ChartForm;
use weil_core::invariants::{invariant_basis, to_weil_basic, SymElement};
use weil_core::sampling::{random_connection, random_constant_gauge, random_polymap, random_unipotent_gauge, rng};
use weil_core::weil::curvature_generator;
use weil_core::LieAlgebra;

fn invariants(l: &LieAlgebra) -> Vec<SymElement> {
    (1..=2).flat_map(|k| invariant_basis(l, k).unwrap()).collect()
}

/// Direct substitution `λ̃^i ↦ F^i` monomial by monomial.
fn substituted(p: &SymElement, f: &LieValuedForm) -> ChartForm {
    let m = f.chart_dim();
    let mut out = ChartForm::zero(m);
    for (mono, c) in p.as_weil().terms() {
        let mut term = ChartForm::constant(m, c.clone());
        for (i, &e) in mono.sym.iter().enumerate() {
            for _ in 0..e {
                term = term.wedge(f.component(i)).unwrap();
            }
        }
        out = out.add(&term);
    }
    out
}

#[test]
fn chern_weil_forms_are_closed_and_match_substitution() {
    let mut r = rng(11);
    for name in ["abelian(1)", "su2", "heisenberg3", "sl2"] {
        let l = LieAlgebra::builtin(name).unwrap();
        let ps = invariants(&l);
        for _ in 0..6 {
            let m = r.gen_range(3..=5);
            let a = random_connection(&mut r, &l, m, 2);
            let f = curvature(&a).unwrap();
            for p in &ps {
                let cw = cw_form(p, &a).unwrap();
                assert!(cw.d().is_zero(), "{name}: d P(F) ≠ 0 for {p}");
                assert_eq!(cw, substituted(p, &f));
                let bridge = universal_substitution(&to_weil_basic(&l, p).unwrap(), &a).unwrap();
                assert_eq!(cw, bridge);
            }
        }
    }
}

#[test]
fn curvature_is_the_image_of_the_curvature_generators() {
    let mut r = rng(12);
    let l = LieAlgebra::builtin("su2").unwrap();
    for _ in 0..10 {
        let a = random_connection(&mut r, &l, 4, 2);
        let f = curvature(&a).unwrap();
        for i in 0..3 {
            let omega = curvature_generator(&l, i).unwrap();
            assert_eq!(&universal_substitution(&omega, &a).unwrap(), f.component(i));
        }
    }
}

#[test]
fn bianchi_identity() {
    let mut r = rng(13);
    for name in ["su2", "heisenberg3", "sl2"] {
        let l = LieAlgebra::builtin(name).unwrap();
        for _ in 0..5 {
            let a = random_connection(&mut r, &l, 4, 2);
            let f = curvature(&a).unwrap();
            let df = f.d();
            let af = a.bracket(&f).unwrap();
            for i in 0..3 {
                // dF + [A, F] = 0
                assert!(df.component(i).add(af.component(i)).is_zero(), "{name}");
            }
        }
    }
}

#[test]
fn naturality_under_pullback() {
    let mut r = rng(14);
    for name in ["abelian(1)", "su2", "heisenberg3"] {
        let l = LieAlgebra::builtin(name).unwrap();
        let ps = invariants(&l);
        for _ in 0..3 {
            let m = r.gen_range(3..=4);
            let a = random_connection(&mut r, &l, m, 2);
            let src = r.gen_range(2..=4);
            let phi = random_polymap(&mut r, src, m, 2);
            let pulled = a.pullback(&phi).unwrap();
            assert_eq!(curvature(&pulled).unwrap(), curvature(&a).unwrap().pullback(&phi).unwrap());
            for p in &ps {
                assert_eq!(cw_form(p, &a).unwrap().pullback(&phi).unwrap(), cw_form(p, &pulled).unwrap());
            }
        }
    }
}

#[test]
fn gauge_invariance_and_covariance() {
    let mut r = rng(15);
    for name in ["abelian(1)", "su2", "heisenberg3", "sl2"] {
        let l = LieAlgebra::builtin(name).unwrap();
        let rep = Representation::builtin(&l).unwrap();
        let ps = invariants(&l);
        for _ in 0..3 {
            let m = r.gen_range(3..=4);
            let a = random_connection(&mut r, &l, m, 2);
            let f = curvature(&a).unwrap();
            let mut gauges = vec![random_constant_gauge(&mut r, &rep, m).unwrap()];
            if let Ok(u) = random_unipotent_gauge(&mut r, &rep, m, 2) {
                gauges.push(u);
            }
            for g in &gauges {
                let b = gauge_transform(&a, g).unwrap();
                assert_eq!(curvature(&b).unwrap(), g.adjoint_inverse(&f).unwrap(), "{name} {:?}", g.kind());
                for p in &ps {
                    assert_eq!(cw_form(p, &b).unwrap(), cw_form(p, &a).unwrap(), "{name} {:?}", g.kind());
                }
            }
        }
    }
}

#[test]
fn compact_groups_have_no_unipotent_gauges() {
    let l = LieAlgebra::builtin("su2").unwrap();
    let rep = Representation::builtin(&l).unwrap();
    assert!(random_unipotent_gauge(&mut rng(0), &rep, 3, 2).is_err());
}

#[test]
fn non_invariant_polynomials_can_fail_closedness() {
    // λ̃³ is not heisenberg-invariant; P(F) need not be closed.
    let l = LieAlgebra::builtin("heisenberg3").unwrap();
    let p = SymElement::new(weil_core::WeilElement::lambda_tilde(3, 2)).unwrap();
    let mut r = rng(16);
    let found = (0..20).any(|_| {
        let a = random_connection(&mut r, &l, 4, 2);
        !cw_form(&p, &a).unwrap().d().is_zero()
    });
    assert!(found);
}

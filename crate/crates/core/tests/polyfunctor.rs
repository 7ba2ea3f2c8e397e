use weil_core::forms::PolyMap;
use weil_core::functor::{FunctorKind, FunctorSpec};
use weil_core::polyfunctor::{
    check_decomposition, homogeneous_decompose, is_polynomial, random_probes, restriction_injectivity, BlackBoxMap, ComponentMap,
    ExprMap, FnMap, SymSquare,
};
use weil_core::rational::{frac, q};
use weil_core::sampling::{random_polymap, rng};
use weil_core::Q;

#[test]
fn polynomial_maps_decompose_and_pass() {
    let mut r = rng(21);
    for _ in 0..10 {
        let f: PolyMap = random_polymap(&mut r, 3, 2, 3);
        let probes = random_probes(&mut r, 3, 3);
        let dec = homogeneous_decompose(&f, 3, &probes).unwrap();
        let check = check_decomposition(&f, &dec).unwrap();
        assert!(check.reconstructs && check.homogeneous);
        let sets = vec![random_probes(&mut r, 3, 1), random_probes(&mut r, 3, 2)];
        assert!(is_polynomial(&f, 3, &sets).unwrap().is_consistent());
    }
}

#[test]
fn underestimated_degree_breaks_reconstruction() {
    let f = ExprMap::parse(2, "x^3 + y").unwrap();
    let probes = vec![vec![q(1), q(1)], vec![q(2), frac(1, 3)]];
    let dec = homogeneous_decompose(&f, 2, &probes).unwrap();
    assert!(!check_decomposition(&f, &dec).unwrap().homogeneous);
}

#[test]
fn non_polynomial_maps_are_caught() {
    let cases = ["abs(x)", "abs(x) * y", "x^2 + abs(x - y)"];
    for s in cases {
        let f = ExprMap::parse(2, s).unwrap();
        let sets = vec![vec![vec![q(1), q(0)], vec![q(0), q(1)]], vec![vec![q(1), q(-2)]]];
        assert!(!is_polynomial(&f, 2, &sets).unwrap().is_consistent(), "{s}");
    }
    // 1/(1 + x²) is smooth but not polynomial
    let bump = FnMap { source_dim: 1, target_dim: 1, f: |v: &[Q]| vec![Q::from(q(1)) / (q(1) + &v[0] * &v[0])] };
    assert!(!is_polynomial(&bump, 3, &[vec![vec![q(1)]]]).unwrap().is_consistent());
}

#[test]
fn components_of_polynomial_maps_are_polynomial() {
    let f = ExprMap::parse(3, "x*y*z + x^2 - 3; y - z^2").unwrap();
    let mut r = rng(22);
    let sets = vec![random_probes(&mut r, 3, 2)];
    for i in 0..=3 {
        let fi = ComponentMap { f: &f, degree: 3, index: i };
        assert!(is_polynomial(&fi, i, &sets).unwrap().is_consistent(), "f_{i}");
    }
}

#[test]
fn squaring_is_a_degree_two_map_between_symmetric_powers() {
    let sq = SymSquare::new(2, 2);
    assert_eq!((sq.source_dim(), sq.target_dim()), (3, 5));
    let mut r = rng(23);
    let probes = random_probes(&mut r, 3, 4);
    let dec = homogeneous_decompose(&sq, 2, &probes).unwrap();
    for (p, v) in probes.iter().enumerate() {
        assert_eq!(dec.components[2][p], sq.eval(v).unwrap());
    }
    // (a x² + b xy + c y²)² coefficients
    let out = sq.eval(&[q(1), q(2), q(3)]).unwrap();
    assert_eq!(out, vec![q(1), q(4), q(10), q(12), q(9)]);
}

#[test]
fn restrictions_are_injective_beyond_the_degree() {
    for kind in [FunctorKind::Sym, FunctorKind::Ext, FunctorKind::Tensor] {
        for d in 1..=3 {
            let f = FunctorSpec::new(kind, d).unwrap();
            for base in 1..=2 {
                let r = restriction_injectivity(f, d + 1, base).unwrap();
                assert!(r.injective, "{f} on V^{} with dim V = {base}", d + 1);
                assert_eq!(r.rank, r.dim);
            }
        }
    }
}

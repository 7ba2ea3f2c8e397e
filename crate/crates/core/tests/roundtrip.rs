use rand::Rng;
use weil_core::chern_weil::LieValuedForm;
use weil_core::forms::ChartForm;
use weil_core::sampling::{random_connection, random_form, random_weil_element, rng};
use weil_core::{LieAlgebra, WeilElement};

#[test]
fn algebras_round_trip() {
    for name in ["abelian(2)", "su2", "so3", "sl2", "heisenberg3"] {
        let l = LieAlgebra::builtin(name).unwrap();
        let v = serde_json::to_value(&l).unwrap();
        let back: LieAlgebra = serde_json::from_value(v).unwrap();
        assert_eq!(back, l);
    }
}

#[test]
fn forms_elements_and_connections_round_trip() {
    let mut r = rng(31);
    let l = LieAlgebra::builtin("sl2").unwrap();
    for _ in 0..30 {
        let m = r.gen_range(1..=4);
        let k = r.gen_range(0..=m);
        let f = random_form(&mut r, m, k, 3, 4);
        assert_eq!(ChartForm::from_json(&f.to_json()).unwrap(), f);
        let d = r.gen_range(0..=5);
        let w = random_weil_element(&mut r, 3, d, 4);
        assert_eq!(WeilElement::from_json(&serde_json::to_value(&w).unwrap(), 3).unwrap(), w);
        let a = random_connection(&mut r, &l, m, 2);
        assert_eq!(LieValuedForm::from_json(&a.to_json()).unwrap(), a);
    }
}

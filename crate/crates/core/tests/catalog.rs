use num_rational::Rational64;

use hklat::forms::{forms_isomorphic, FiniteQuadraticForm};
use hklat::lattice::{hk_lattice, realize, Lattice, CATALOG};

fn lat(s: &str) -> Lattice {
    realize(&s.parse().unwrap()).unwrap()
}

fn cyc(n: u64, a: i64, b: i64) -> FiniteQuadraticForm {
    FiniteQuadraticForm::cyclic(n, Rational64::new(a, b)).unwrap()
}

#[test]
fn milgram_on_catalog() {
    for name in CATALOG {
        let l = lat(name);
        let (sp, sm) = l.signature();
        let form = l.discriminant_form().unwrap();
        assert_eq!(form.gauss_signature().unwrap() as i64, (sp as i64 - sm as i64).rem_euclid(8), "{name}");
    }
}

#[test]
fn golden_discriminant_forms() {
    let l = hk_lattice().discriminant_form().unwrap();
    assert!(forms_isomorphic(&l, &cyc(2, 3, 2)).unwrap());
    let e6 = lat("E6*(3)").discriminant_form().unwrap();
    let five = (0..5).fold(FiniteQuadraticForm::trivial(), |f, _| f.orthogonal_sum(&cyc(3, 2, 3)));
    assert!(forms_isomorphic(&e6, &five).unwrap());
    let a2 = lat("A2").discriminant_form().unwrap();
    assert!(forms_isomorphic(&a2, &cyc(3, 4, 3)).unwrap());
    assert!(!forms_isomorphic(&a2, &cyc(3, 2, 3)).unwrap());
}

#[test]
fn p_elementary_reports() {
    assert_eq!(lat("U(3)").is_p_elementary(3).unwrap(), (true, 2));
    assert_eq!(lat("E6*(3)").is_p_elementary(3).unwrap(), (true, 5));
    assert_eq!(lat("<6>").is_p_elementary(3).unwrap().0, false);
    assert_eq!(lat("H5 + A4*(5) + <-2>").rank(), 7);
}

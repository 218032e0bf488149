use std::collections::BTreeSet;

use hklat::classification::LatticeInvariants;
use hklat::forms::{even_lattice_exists, small_rank_witness};
use hklat::involutions::{
    classify_involution_embeddings, computed_figure_points, figure_points, is_k3_triple, natural_involution_shift, two_elementary_exists,
    EmbeddingCase, FigurePoint, Marker, PointSet, TwoElemInvariants,
};
use hklat::lattice::realize;

const F: Marker = Marker::Filled;
const S: Marker = Marker::Star;
const H: Marker = Marker::Hollow;

fn set(points: &[(usize, usize, &[Marker])]) -> PointSet {
    points.iter().flat_map(|&(r, a, ms)| ms.iter().map(move |&marker| FigurePoint { r, a, marker })).collect()
}

/// First diagram as published.
fn published_one() -> PointSet {
    set(&[
        (1, 1, &[F]), (2, 0, &[S]), (2, 2, &[F, S]), (3, 1, &[F]), (3, 3, &[F]), (4, 2, &[F]), (4, 4, &[F]),
        (5, 3, &[F]), (5, 5, &[F]), (6, 2, &[S]), (6, 4, &[F, S]), (6, 6, &[F]), (7, 3, &[F]), (7, 5, &[F]),
        (7, 7, &[F]), (8, 2, &[F]), (8, 4, &[F]), (8, 6, &[F]), (8, 8, &[F]), (9, 1, &[F]), (9, 3, &[F]),
        (9, 5, &[F]), (9, 7, &[F]), (9, 9, &[F]), (10, 0, &[S]), (10, 2, &[F, S]), (10, 4, &[F, S]),
        (10, 6, &[F, S]), (10, 8, &[F, S]), (10, 10, &[F, S]), (11, 1, &[F]), (11, 3, &[F]), (11, 5, &[F]),
        (11, 7, &[F]), (11, 9, &[F]), (11, 11, &[F]), (12, 2, &[F]), (12, 4, &[F]), (12, 6, &[F]),
        (12, 8, &[F]), (12, 10, &[F]), (13, 3, &[F]), (13, 5, &[F]), (13, 7, &[F]), (13, 9, &[F]),
        (14, 2, &[S]), (14, 4, &[F, S]), (14, 6, &[F, S]), (14, 8, &[F]), (15, 3, &[F]), (15, 5, &[F]),
        (15, 7, &[F]), (16, 2, &[F]), (16, 4, &[F]), (16, 6, &[F]), (17, 1, &[F]), (17, 3, &[F]),
        (17, 5, &[F]), (18, 0, &[S]), (18, 2, &[F, S]), (18, 4, &[F, S]), (19, 1, &[F]), (19, 3, &[F]),
        (20, 2, &[F]),
    ])
}

/// Second diagram as published.
fn published_two() -> PointSet {
    set(&[
        (2, 2, &[F]), (3, 1, &[H]), (3, 3, &[F, H]), (4, 2, &[F]), (4, 4, &[F]), (5, 3, &[F]), (5, 5, &[F]),
        (6, 4, &[F]), (6, 6, &[F]), (7, 3, &[H]), (7, 5, &[F, H]), (7, 7, &[F, H]), (8, 4, &[F]), (8, 6, &[F]),
        (8, 8, &[F]), (9, 3, &[F]), (9, 5, &[F]), (9, 7, &[F]), (9, 9, &[F]), (10, 2, &[F]), (10, 4, &[F]),
        (10, 6, &[F]), (10, 8, &[F]), (10, 10, &[F]), (11, 1, &[H]), (11, 3, &[F, H]), (11, 5, &[F, H]),
        (11, 7, &[F, H]), (11, 9, &[F, H]), (11, 11, &[F, H]), (12, 2, &[F]), (12, 4, &[F]), (12, 6, &[F]),
        (12, 8, &[F]), (12, 10, &[F]), (12, 12, &[F]), (13, 3, &[F]), (13, 5, &[F]), (13, 7, &[F]),
        (13, 9, &[F]), (13, 11, &[F]), (14, 4, &[F]), (14, 6, &[F]), (14, 8, &[F]), (14, 10, &[F]),
        (15, 3, &[H]), (15, 5, &[F, H]), (15, 7, &[F, H]), (15, 9, &[F]), (16, 4, &[F]), (16, 6, &[F]),
        (16, 8, &[F]), (17, 3, &[F]), (17, 5, &[F]), (17, 7, &[F]), (18, 2, &[F]), (18, 4, &[F]),
        (18, 6, &[F]), (19, 1, &[H]), (19, 3, &[F, H]), (19, 5, &[F, H]), (20, 2, &[F]), (20, 4, &[F]),
        (21, 3, &[F]),
    ])
}

#[test]
fn diagrams_match_publication() {
    assert_eq!(figure_points(1), published_one());
    assert_eq!(figure_points(2), published_two());
    for (r, a, m) in [(1, 1, F), (2, 0, S), (20, 2, F)] {
        assert!(figure_points(1).contains(&FigurePoint { r, a, marker: m }));
    }
    for (r, a, m) in [(2, 2, F), (3, 1, H), (21, 3, F)] {
        assert!(figure_points(2).contains(&FigurePoint { r, a, marker: m }));
    }
}

#[test]
fn only_withheld_point_differs() {
    let extra: Vec<_> = computed_figure_points(1).difference(&published_one()).copied().collect();
    assert_eq!(extra, vec![FigurePoint { r: 14, a: 8, marker: S }]);
    assert!(published_one().is_subset(&computed_figure_points(1)));
    assert_eq!(computed_figure_points(2), published_two());
}

fn two_elementary_of(expr: &str) -> TwoElemInvariants {
    let inv = LatticeInvariants::of_lattice(&realize(&expr.parse().unwrap()).unwrap()).unwrap();
    assert!(inv.form.is_p_elementary(2) || inv.form.is_trivial(), "{expr}");
    TwoElemInvariants::new(inv.s_plus, inv.s_minus, inv.a, inv.form.delta().unwrap())
}

#[test]
fn withheld_point_has_explicit_lattices() {
    let t = two_elementary_of("U(2) + D4^3");
    let s = two_elementary_of("<2>^2 + <-2>^7");
    assert_eq!(t, TwoElemInvariants::hyperbolic(14, 8, 0));
    assert_eq!(s, TwoElemInvariants::new(2, 7, 9, 1));
    let classes = classify_involution_embeddings(t);
    assert!(classes.iter().any(|c| c.case == EmbeddingCase::I && c.s_invariants == s));
}

#[test]
fn worked_examples() {
    let one = classify_involution_embeddings(two_elementary_of("<2>"));
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].s_invariants, two_elementary_of("U^2 + E8^2 + <-2>^2"));

    let two = classify_involution_embeddings(two_elementary_of("<2> + <-2>"));
    let got: Vec<_> = two.iter().map(|c| (c.case, c.s_invariants)).collect();
    assert_eq!(
        got,
        vec![
            (EmbeddingCase::I, two_elementary_of("U^2 + E8 + E7 + <-2>^2")),
            (EmbeddingCase::II, two_elementary_of("U^2 + E8^2 + <-2>")),
        ]
    );
}

#[test]
fn structural_properties() {
    for p in figure_points(1) {
        if p.marker == S {
            assert_eq!(p.r % 4, 2, "{p:?}");
        }
    }
    for r in 1..=21 {
        for a in 0..=r {
            for d in [0, 1] {
                assert!(classify_involution_embeddings(TwoElemInvariants::hyperbolic(r, a, d)).len() <= 3);
            }
        }
    }
    assert!(figure_points(2).iter().all(|p| p.a > 0));
}

/// Positions in the second diagram come from natural involutions: each is
/// the shift of some K3 invariant triple. Matching the marker too (δ of S
/// equals δ of the K3 triple) fails at exactly one published point.
#[test]
fn second_diagram_is_shifted_k3_data() {
    let mut unmatched = BTreeSet::new();
    for p in figure_points(2) {
        let deltas: Vec<u8> = [0, 1].into_iter().filter(|&d| is_k3_triple(p.r - 1, p.a - 1, d)).collect();
        assert!(!deltas.is_empty(), "{p:?}");
        let k3 = TwoElemInvariants::hyperbolic(p.r - 1, p.a - 1, deltas[0]);
        assert_eq!(natural_involution_shift(k3), TwoElemInvariants::hyperbolic(p.r, p.a, 1));
        let want = if p.marker == F { 1 } else { 0 };
        if !deltas.contains(&want) {
            unmatched.insert((p.r, p.a, p.marker));
        }
    }
    assert_eq!(unmatched, BTreeSet::from([(7, 7, H)]));
}

/// Where the rank exceeds the length, existence is equivalent to the
/// existence of the discriminant form with the right signature; in rank ≤ 2
/// an explicit Gram matrix decides.
#[test]
fn existence_agrees_with_form_route() {
    for sp in 0..=3 {
        for sm in 0..=12 {
            let r = sp + sm;
            for a in 0..=r {
                for delta in [0, 1] {
                    let inv = TwoElemInvariants::new(sp, sm, a, delta);
                    let Some(q) = inv.discriminant_form() else {
                        if r > a {
                            assert!(!two_elementary_exists(inv), "{inv:?}");
                        }
                        continue;
                    };
                    let other = if r <= 2 {
                        small_rank_witness(sp, sm, &q).unwrap().is_some()
                    } else if r > a {
                        even_lattice_exists(sp, sm, &q).unwrap().exists()
                    } else {
                        continue;
                    };
                    assert_eq!(two_elementary_exists(inv), other, "{inv:?}");
                }
            }
        }
    }
}

//! Involutions: 2-elementary lattices (r, a, δ), the embeddings of an
//! invariant lattice T of signature (1, r−1) into `U^3 + E8^2 + <-2>`, and
//! the two point diagrams in the (r, a)-plane these embeddings produce.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_rational::Rational64;
use serde::Serialize;

use crate::forms::FiniteQuadraticForm;

/// Rank, length, parity and signature of an even 2-elementary lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TwoElemInvariants {
    pub r: usize,
    pub a: usize,
    pub delta: u8,
    pub s_plus: usize,
    pub s_minus: usize,
}

impl TwoElemInvariants {
    pub fn new(s_plus: usize, s_minus: usize, a: usize, delta: u8) -> Self {
        TwoElemInvariants { r: s_plus + s_minus, a, delta, s_plus, s_minus }
    }

    /// Signature (1, r−1).
    pub fn hyperbolic(r: usize, a: usize, delta: u8) -> Self {
        Self::new(1, r.saturating_sub(1), a, delta)
    }

    fn sig(&self) -> i64 {
        self.s_plus as i64 - self.s_minus as i64
    }

    /// The discriminant form forced by the invariants, when one exists.
    pub fn discriminant_form(&self) -> Option<FiniteQuadraticForm> {
        FiniteQuadraticForm::two_elementary_normal_form(self.a, self.delta, self.sig())
    }
}

/// Existence of an even 2-elementary lattice with the given invariants.
pub fn two_elementary_exists(inv: TwoElemInvariants) -> bool {
    let TwoElemInvariants { r, a, delta, .. } = inv;
    let s = inv.sig().rem_euclid(8);
    let conditions = [
        r == inv.s_plus + inv.s_minus,
        delta <= 1,
        a <= r,
        (r + a) % 2 == 0,
        delta == 1 || s % 4 == 0,
        a != 0 || (delta == 0 && s == 0),
        a != 1 || s == 1 || s == 7,
        !(a == 2 && s == 4) || delta == 0,
        !(delta == 0 && a == r) || s == 0,
    ];
    conditions.iter().all(|&c| c)
}

/// Whether the form has an element of square 3/2. Scans the group when it
/// is small; otherwise uses that a δ = 1 form of length ≥ 3 always has one
/// (three orthogonal ⟨1/2⟩, or u ⊕ ⟨1/2⟩, or a ⟨3/2⟩ summand).
fn has_three_halves(inv: &TwoElemInvariants, form: &FiniteQuadraticForm) -> bool {
    if inv.delta == 0 {
        return false;
    }
    if inv.a > 12 {
        return true;
    }
    let target = Rational64::new(3, 2);
    form.elements().any(|x| form.value(&x) == target)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EmbeddingCase {
    /// The complement has one more generator and δ = 1.
    I,
    /// The complement has one fewer generator.
    II,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionEmbeddingClass {
    pub case: EmbeddingCase,
    pub s_invariants: TwoElemInvariants,
}

/// All primitive embeddings of T (signature (1, r−1)) into L, up to
/// isomorphism, listed by the invariants of the orthogonal complement S.
pub fn classify_involution_embeddings(t: TwoElemInvariants) -> Vec<InvolutionEmbeddingClass> {
    let mut out = Vec::new();
    if t.s_plus != 1 || t.r > 21 || !two_elementary_exists(t) {
        return out;
    }
    let Some(q_t) = t.discriminant_form() else {
        return out;
    };
    let (sp, sm) = (2, 21 - t.r);
    let case_one = TwoElemInvariants::new(sp, sm, t.a + 1, 1);
    if two_elementary_exists(case_one) {
        out.push(InvolutionEmbeddingClass { case: EmbeddingCase::I, s_invariants: case_one });
    }
    if t.a >= 1 && has_three_halves(&t, &q_t) {
        for delta in [1, 0] {
            let s = TwoElemInvariants::new(sp, sm, t.a - 1, delta);
            if two_elementary_exists(s) {
                out.push(InvolutionEmbeddingClass { case: EmbeddingCase::II, s_invariants: s });
            }
        }
    }
    out
}

/// Invariants of T for the natural involution induced by a K3 involution
/// whose invariant lattice has invariants `k3`.
pub fn natural_involution_shift(k3: TwoElemInvariants) -> TwoElemInvariants {
    TwoElemInvariants::hyperbolic(k3.r + 1, k3.a + 1, 1)
}

/// Whether (r, a, δ) are the invariants of the invariant lattice of some
/// non-symplectic involution on a K3 surface: T of signature (1, r−1) and
/// its complement of signature (2, 20−r) in the K3 lattice both exist.
pub fn is_k3_triple(r: usize, a: usize, delta: u8) -> bool {
    (1..=20).contains(&r)
        && two_elementary_exists(TwoElemInvariants::hyperbolic(r, a, delta))
        && two_elementary_exists(TwoElemInvariants::new(2, 20 - r, a, delta))
}

/// Marker of a plotted point: δ of T in the first diagram, δ of S in the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Marker {
    /// δ = 1 (filled dot).
    Filled,
    /// δ_T = 0.
    Star,
    /// δ_S = 0.
    Hollow,
}

impl Marker {
    pub fn symbol(self) -> char {
        match self {
            Marker::Filled => '•',
            Marker::Star => '*',
            Marker::Hollow => '◦',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FigurePoint {
    pub r: usize,
    pub a: usize,
    pub marker: Marker,
}

pub type PointSet = BTreeSet<FigurePoint>;

/// Point admitted by the classification but absent from the first diagram
/// as published. T = U(2) ⊕ D4^3 with S = ⟨2⟩^2 ⊕ ⟨-2⟩^7 realizes it.
/// The published diagram is treated as authoritative.
pub const WITHHELD_POINTS: &[(u8, FigurePoint)] = &[(1, FigurePoint { r: 14, a: 8, marker: Marker::Star })];

/// Sweep all T of signature (1, r−1), 1 ≤ r ≤ 21, and collect (r, a)
/// with a case-I (`which = 1`) or case-II (`which = 2`) embedding.
pub fn computed_figure_points(which: u8) -> PointSet {
    let mut out = PointSet::new();
    for r in 1..=21 {
        for a in 0..=r {
            for delta in [1, 0] {
                let t = TwoElemInvariants::hyperbolic(r, a, delta);
                for class in classify_involution_embeddings(t) {
                    let marker = match (which, class.case) {
                        (1, EmbeddingCase::I) => if delta == 1 { Marker::Filled } else { Marker::Star },
                        (2, EmbeddingCase::II) => if class.s_invariants.delta == 1 { Marker::Filled } else { Marker::Hollow },
                        _ => continue,
                    };
                    out.insert(FigurePoint { r, a, marker });
                }
            }
        }
    }
    out
}

/// The diagram as published: the computed set without [`WITHHELD_POINTS`].
pub fn figure_points(which: u8) -> PointSet {
    let mut pts = computed_figure_points(which);
    for (w, p) in WITHHELD_POINTS {
        if *w == which {
            pts.remove(p);
        }
    }
    pts
}

/// Plain-text scatter: a on the vertical axis (top = 12), r horizontally;
/// a cell holds the markers present at that point.
pub fn render_scatter(points: &PointSet) -> String {
    let max_a = points.iter().map(|p| p.a).max().unwrap_or(0).max(12);
    let mut out = String::new();
    for a in (0..=max_a).rev() {
        let _ = write!(out, "{a:>2} |");
        for r in 0..=21 {
            let cell: String = points.iter().filter(|p| p.r == r && p.a == a).map(|p| p.marker.symbol()).collect();
            let _ = write!(out, "{cell:<3}");
        }
        out.truncate(out.trim_end().len());
        out.push('\n');
    }
    out.push_str("   +");
    out.push_str(&"---".repeat(22));
    out.push_str("\n    ");
    for r in 0..=21 {
        let _ = write!(out, "{r:<3}");
    }
    out.truncate(out.trim_end().len());
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn existence_examples() {
        assert!(two_elementary_exists(TwoElemInvariants::new(1, 0, 1, 1)));
        assert!(two_elementary_exists(TwoElemInvariants::new(1, 1, 2, 1)));
        assert!(!two_elementary_exists(TwoElemInvariants::new(1, 0, 1, 0)));
        assert!(two_elementary_exists(TwoElemInvariants::new(1, 1, 0, 0))); // U
        assert!(two_elementary_exists(TwoElemInvariants::new(1, 1, 2, 0))); // U(2)
        assert!(two_elementary_exists(TwoElemInvariants::new(0, 8, 0, 0))); // E8
        assert!(!two_elementary_exists(TwoElemInvariants::new(0, 4, 0, 0)));
    }

    #[test]
    fn rank_one_t() {
        let classes = classify_involution_embeddings(TwoElemInvariants::hyperbolic(1, 1, 1));
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].case, EmbeddingCase::I);
        let s = classes[0].s_invariants;
        assert_eq!((s.r, s.a, s.delta), (22, 2, 1));
    }

    #[test]
    fn rank_two_t() {
        let classes = classify_involution_embeddings(TwoElemInvariants::hyperbolic(2, 2, 1));
        let got: Vec<_> = classes.iter().map(|c| (c.case, c.s_invariants.r, c.s_invariants.a, c.s_invariants.delta)).collect();
        assert_eq!(got, vec![(EmbeddingCase::I, 21, 3, 1), (EmbeddingCase::II, 21, 1, 1)]);
    }

    #[test]
    fn even_t_only_case_one() {
        for r in 1..=21 {
            for a in 0..=r {
                let t = TwoElemInvariants::hyperbolic(r, a, 0);
                assert!(classify_involution_embeddings(t).iter().all(|c| c.case == EmbeddingCase::I));
            }
        }
    }

    #[test]
    fn shift() {
        let k = TwoElemInvariants::hyperbolic(20, 2, 1);
        assert_eq!(natural_involution_shift(k), TwoElemInvariants::hyperbolic(21, 3, 1));
        assert_eq!(natural_involution_shift(TwoElemInvariants::hyperbolic(1, 1, 1)), TwoElemInvariants::hyperbolic(2, 2, 1));
        assert_eq!(natural_involution_shift(TwoElemInvariants::hyperbolic(10, 10, 0)), TwoElemInvariants::hyperbolic(11, 11, 1));
    }

    #[test]
    fn scatter_has_axis() {
        let pts = PointSet::from([FigurePoint { r: 1, a: 1, marker: Marker::Filled }]);
        let text = render_scatter(&pts);
        assert!(text.lines().any(|l| l.starts_with(" 1 |   •")));
        assert!(text.ends_with("21\n"));
    }
}

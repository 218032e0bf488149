//! Existence and uniqueness of p-elementary lattices, primitive embeddings
//! into `L = U^3 + E8^2 + <-2>`, and recognition of invariants as catalog sums.

mod recognize;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Pow;
use serde::Serialize;
use thiserror::Error;

use crate::arith::is_square;
use crate::forms::{
    even_lattice_exists, forms_isomorphic, orthogonal_group_order, small_rank_witness, ExistenceVerdict, FiniteQuadraticForm, FormError,
};
use crate::lattice::{Lattice, LatticeError, LatticeExpr};

pub use recognize::{recognize, SearchBudget};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassificationError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("lattice is not p-elementary for an odd prime")]
    NotPElementary,
    #[error("recognition budget exceeded after {0} search nodes")]
    BudgetExceeded(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Which elementary type the discriminant group has.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Elementary {
    /// Trivial group: p-elementary for every p.
    Unimodular,
    Prime(u64),
    Mixed,
}

/// Genus-level invariants: signature and discriminant form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeInvariants {
    pub s_plus: usize,
    pub s_minus: usize,
    pub elementary: Elementary,
    /// Length of the discriminant group.
    pub a: usize,
    #[serde(serialize_with = "serialize_form")]
    pub form: FiniteQuadraticForm,
}

fn serialize_form<S: serde::Serializer>(f: &FiniteQuadraticForm, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(f)
}

impl LatticeInvariants {
    pub fn new(s_plus: usize, s_minus: usize, form: FiniteQuadraticForm) -> Self {
        let primes = form.primes();
        let elementary = match primes.as_slice() {
            [] => Elementary::Unimodular,
            [p] if form.is_p_elementary(*p) => Elementary::Prime(*p),
            _ => Elementary::Mixed,
        };
        let a = form.length();
        LatticeInvariants { s_plus, s_minus, elementary, a, form }
    }

    pub fn of_lattice(l: &Lattice) -> Result<Self, LatticeError> {
        let (sp, sm) = l.signature();
        Ok(Self::new(sp, sm, l.discriminant_form()?))
    }

    /// The p-elementary invariants (s₊, s₋, a) with the unique form of
    /// matching signature, if such a form exists (odd p).
    pub fn p_elementary(p: u64, s_plus: usize, s_minus: usize, a: usize) -> Option<Self> {
        let sig = s_plus as i64 - s_minus as i64;
        FiniteQuadraticForm::p_elementary_normal_form(p, a, sig).map(|f| Self::new(s_plus, s_minus, f))
    }

    pub fn rank(&self) -> usize {
        self.s_plus + self.s_minus
    }

    pub fn is_p_elementary(&self, p: u64) -> bool {
        matches!(self.elementary, Elementary::Unimodular) || self.elementary == Elementary::Prime(p)
    }

    pub fn isomorphic(&self, other: &Self) -> Result<bool, FormError> {
        Ok(self.s_plus == other.s_plus && self.s_minus == other.s_minus && forms_isomorphic(&self.form, &other.form)?)
    }
}

/// Existence of a hyperbolic (signature (1, r-1)) p-elementary even
/// lattice of rank r and length a, odd p.
pub fn hyperbolic_p_elementary_exists(p: u64, r: usize, a: usize) -> bool {
    if p % 2 == 0 || r == 0 || a > r || r % 2 == 1 {
        return false;
    }
    if a % 2 == 0 {
        if r % 4 != 2 {
            return false;
        }
    } else {
        // p ≡ (-1)^{r/2 - 1} mod 4
        let want = if (r / 2 - 1) % 2 == 0 { 1 } else { 3 };
        if p % 4 != want {
            return false;
        }
    }
    if r % 8 != 2 && !(r > a && a > 0) {
        return false;
    }
    true
}

/// Whether an indefinite lattice with these invariants splits off a copy of U.
pub fn split_off_u(s_plus: usize, s_minus: usize, a: usize) -> bool {
    s_plus > 0 && s_minus > 0 && s_plus + s_minus >= 3 + a
}

/// Existence of an even p-elementary lattice of signature (s₊, s₋) and
/// length a for odd p, s₊ ∈ {1, 2}.
pub fn indefinite_p_elementary_exists(p: u64, s_plus: usize, s_minus: usize, a: usize) -> Result<bool, ClassificationError> {
    if !(1..=2).contains(&s_plus) {
        return Err(ClassificationError::UnsupportedRegime(format!("s+ = {s_plus}")));
    }
    let rank = s_plus + s_minus;
    if a > rank || rank % 2 == 1 {
        return Ok(false);
    }
    if s_plus == 1 {
        return Ok(hyperbolic_p_elementary_exists(p, rank, a));
    }
    if split_off_u(s_plus, s_minus, a) {
        return Ok(hyperbolic_p_elementary_exists(p, rank - 2, a));
    }
    // no copy of U to split: decide on the unique candidate form
    let Some(inv) = LatticeInvariants::p_elementary(p, s_plus, s_minus, a) else {
        return Ok(false);
    };
    if rank <= 2 {
        return Ok(small_rank_witness(s_plus, s_minus, &inv.form)?.is_some());
    }
    Ok(even_lattice_exists(s_plus, s_minus, &inv.form)?.exists())
}

/// Conway–Sloane sufficient test for a genus with a single class: true
/// when no nonsquare k ≡ 0, 1 mod 4 has k^C(n,2) dividing 4^⌊n/2⌋·d.
pub fn genus_unique(rank: usize, det: u64) -> Result<bool, ClassificationError> {
    if rank < 2 {
        return Err(ClassificationError::InvalidParameter(format!("genus test needs rank ≥ 2, got {rank}")));
    }
    let e = (rank * (rank - 1) / 2) as u32;
    let bound = BigInt::from(4u32).pow((rank / 2) as u32) * BigInt::from(det);
    let mut k: u64 = 2;
    loop {
        let kk = BigInt::from(k).pow(e);
        if kk > bound {
            return Ok(true);
        }
        if (k % 4 == 0 || k % 4 == 1) && !is_square(k) && (&bound % &kk) == BigInt::from(0) {
            return Ok(false);
        }
        k += 1;
    }
}

/// Primitive embedding of S into L and its orthogonal complement.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub embeds: bool,
    pub verdict: Option<ExistenceVerdict>,
    /// Uniqueness of S ↪ L, from the length clause or the O(q_T) ≤ 2 rescue.
    pub unique_embedding: bool,
    pub orthogonal_invariants: LatticeInvariants,
    pub orthogonal_expr: Option<LatticeExpr>,
    /// Embedding exists but uniqueness is not settled by the criteria above.
    pub exception_flag: bool,
    /// One class in the genus of the complement (rank ≥ 2 only).
    pub orthogonal_genus_unique: Option<bool>,
    /// The complement itself has a unique primitive embedding into L.
    pub orthogonal_unique_embedding: bool,
}

/// Embed S (odd-p-elementary or unimodular) into L.
pub fn embed_in_l(s: &LatticeInvariants) -> Result<EmbeddingReport, ClassificationError> {
    embed_in_l_with(s, Some(SearchBudget::default()))
}

/// As [`embed_in_l`]; `budget = None` skips recognition of the complement.
pub fn embed_in_l_with(s: &LatticeInvariants, budget: Option<SearchBudget>) -> Result<EmbeddingReport, ClassificationError> {
    let p = match s.elementary {
        Elementary::Prime(p) if p % 2 == 1 => Some(p),
        Elementary::Unimodular => None,
        _ => return Err(ClassificationError::NotPElementary),
    };
    let q_l = FiniteQuadraticForm::cyclic(2, Rational64::new(3, 2))?;
    let t_form = s.form.negate().orthogonal_sum(&q_l);
    let fits = s.s_plus <= 3 && s.s_minus <= 20;
    let (tp, tm) = (3usize.saturating_sub(s.s_plus), 20usize.saturating_sub(s.s_minus));
    let t = LatticeInvariants::new(tp, tm, t_form);
    let verdict = if fits { Some(even_lattice_exists(tp, tm, &t.form)?) } else { None };
    let embeds = verdict.is_some_and(|v| v.exists());

    let clause = s.s_plus < 3 && s.s_minus < 20 && s.a + s.rank() <= 21;
    let t_rank = t.rank();
    let t_det = t.form.order();
    let orthogonal_genus_unique = (embeds && t_rank >= 2).then(|| genus_unique(t_rank, t_det)).transpose()?;
    let rescue = embeds && t_rank <= 1 && orthogonal_group_order(&t.form, 3)? <= 2;
    let unique_embedding = embeds && (clause || rescue);
    let exception_flag = embeds && !unique_embedding;

    let s_len = p.map_or(0, |p| s.form.length_at(p));
    let orthogonal_unique_embedding = embeds && (s.rank() >= s_len + 2 || orthogonal_group_order(&s.form, 3)? <= 2);

    let orthogonal_expr = match (embeds, budget) {
        (true, Some(b)) => recognize(&t, b)?,
        _ => None,
    };
    Ok(EmbeddingReport {
        embeds,
        verdict,
        unique_embedding,
        orthogonal_invariants: t,
        orthogonal_expr,
        exception_flag,
        orthogonal_genus_unique,
        orthogonal_unique_embedding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::realize;

    fn inv(s: &str) -> LatticeInvariants {
        LatticeInvariants::of_lattice(&realize(&s.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn hyperbolic_conditions() {
        assert!(hyperbolic_p_elementary_exists(3, 16, 1));
        assert!(!hyperbolic_p_elementary_exists(3, 4, 0));
        assert!(hyperbolic_p_elementary_exists(3, 2, 2));
        assert!(hyperbolic_p_elementary_exists(3, 2, 0)); // U
        assert!(!hyperbolic_p_elementary_exists(3, 3, 1));
        assert!(hyperbolic_p_elementary_exists(5, 2, 1)); // H5
        assert!(!hyperbolic_p_elementary_exists(7, 2, 1)); // no hyperbolic binary 7-elementary of length 1
    }

    #[test]
    fn splitting() {
        assert!(split_off_u(2, 16, 1));
        assert!(!split_off_u(1, 1, 2));
        assert!(split_off_u(2, 2, 1));
    }

    #[test]
    fn indefinite_existence() {
        assert_eq!(indefinite_p_elementary_exists(3, 2, 16, 1), Ok(true));
        assert_eq!(indefinite_p_elementary_exists(3, 2, 0, 1), Ok(true));
        assert_eq!(indefinite_p_elementary_exists(3, 2, 0, 0), Ok(false));
        assert_eq!(indefinite_p_elementary_exists(3, 2, 16, 18), Ok(false));
        assert_eq!(indefinite_p_elementary_exists(3, 2, 2, 2), Ok(true)); // U + U(3)
        assert!(indefinite_p_elementary_exists(3, 3, 2, 1).is_err());
    }

    #[test]
    fn genus_test_examples() {
        assert_eq!(genus_unique(3, 18), Ok(true));
        assert_eq!(genus_unique(3, 1), Ok(true));
        assert_eq!(genus_unique(22, 3), Ok(true));
        // k = 5: 5^3 | 4·125·... fails
        assert_eq!(genus_unique(3, 125), Ok(false));
        assert!(genus_unique(1, 6).is_err());
    }

    #[test]
    fn embedding_of_rank_twenty_s() {
        let rep = embed_in_l(&inv("U^2 + E8^2 + A2")).unwrap();
        assert!(rep.embeds && rep.unique_embedding && !rep.exception_flag);
        assert_eq!((rep.orthogonal_invariants.s_plus, rep.orthogonal_invariants.s_minus), (1, 0));
        let six = FiniteQuadraticForm::cyclic(6, Rational64::new(1, 6)).unwrap();
        assert!(forms_isomorphic(&rep.orthogonal_invariants.form, &six).unwrap());
        assert_eq!(rep.orthogonal_expr.unwrap().to_string(), "<6>");
    }

    #[test]
    fn excluded_case_does_not_embed() {
        let rep = embed_in_l(&inv("U^2 + E8 + E6*(3)")).unwrap();
        assert!(!rep.embeds);
        assert_eq!(rep.verdict, Some(ExistenceVerdict::Fails(crate::forms::ExistenceCondition::SquareClass(3))));
    }

    #[test]
    fn exception_rows_flagged() {
        for s in ["U + U(3) + E8^2", "U^2 + A2^6", "U + U(11) + E8^2"] {
            let rep = embed_in_l(&inv(s)).unwrap();
            assert!(rep.embeds && rep.exception_flag, "{s}");
            assert_eq!(rep.orthogonal_genus_unique, Some(true), "{s}");
        }
    }

    #[test]
    fn unimodular_s() {
        let rep = embed_in_l(&inv("U^2")).unwrap();
        assert!(rep.embeds);
        assert_eq!((rep.orthogonal_invariants.s_plus, rep.orthogonal_invariants.s_minus), (1, 18));
    }

    #[test]
    fn not_p_elementary() {
        assert_eq!(embed_in_l(&inv("<6> + U")).unwrap_err(), ClassificationError::NotPElementary);
        assert_eq!(embed_in_l(&inv("U(2)")).unwrap_err(), ClassificationError::NotPElementary);
    }
}

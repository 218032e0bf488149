//! Existence of an even lattice with prescribed signature and discriminant form.

use serde::Serialize;

use super::{forms_isomorphic, FiniteQuadraticForm, FormError};
use crate::arith::legendre;
use crate::lattice::discriminant_form_of_gram;
use crate::matrix::IntMatrix;

/// Largest |A| for which the rank-≤2 witness search runs.
const WITNESS_SEARCH_LIMIT: u64 = 5_000;

/// The individual conditions checked, in evaluation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExistenceCondition {
    /// ℓ(A) ≤ rank.
    Length,
    /// s₊ − s₋ ≡ Gauss signature mod 8.
    Signature,
    /// Square-class test at an odd prime whose part has full length.
    SquareClass(u64),
    /// Full-length 2-part settled by witness search.
    TwoAdic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExistenceVerdict {
    Exists,
    Fails(ExistenceCondition),
}

impl ExistenceVerdict {
    pub fn exists(self) -> bool {
        self == ExistenceVerdict::Exists
    }

    /// The condition that failed, if any.
    pub fn failed(self) -> Option<ExistenceCondition> {
        match self {
            ExistenceVerdict::Exists => None,
            ExistenceVerdict::Fails(c) => Some(c),
        }
    }
}

/// Decide whether an even lattice of signature (s₊, s₋) with discriminant
/// form `q` exists.
pub fn even_lattice_exists(s_plus: usize, s_minus: usize, q: &FiniteQuadraticForm) -> Result<ExistenceVerdict, FormError> {
    let rank = s_plus + s_minus;
    if q.length() > rank {
        return Ok(ExistenceVerdict::Fails(ExistenceCondition::Length));
    }
    let sig = (s_plus as i64 - s_minus as i64).rem_euclid(8) as u8;
    if q.gauss_signature()? != sig {
        return Ok(ExistenceVerdict::Fails(ExistenceCondition::Signature));
    }
    let order = q.order();
    for p in q.primes().into_iter().filter(|&p| p != 2) {
        if q.length_at(p) != rank {
            continue;
        }
        let Some(class) = q.disc_class(p) else {
            return Err(FormError::UnsupportedRegime(format!("full-length non-elementary {p}-part")));
        };
        // det = (-1)^{s-} |A| must match p^a · 2^a · det W up to Z_p^* squares
        let a = rank as u32;
        let cofactor = (order / p.pow(a)) as i128;
        let sign = if s_minus % 2 == 0 { 1 } else { -1 };
        let pow2 = crate::arith::pow_mod(2, a as u64, p) as i128;
        if legendre(sign * cofactor * pow2, p) * class != 1 {
            return Ok(ExistenceVerdict::Fails(ExistenceCondition::SquareClass(p)));
        }
    }
    if q.length_at(2) == rank && rank > 0 {
        if rank > 2 {
            return Err(FormError::UnsupportedRegime(format!("full-length 2-part in rank {rank}")));
        }
        return Ok(match small_rank_witness(s_plus, s_minus, q)? {
            Some(_) => ExistenceVerdict::Exists,
            None => ExistenceVerdict::Fails(ExistenceCondition::TwoAdic),
        });
    }
    Ok(ExistenceVerdict::Exists)
}

/// Exhaustive search for an even Gram matrix of rank ≤ 2 with the given
/// signature and discriminant form (entries bounded by 2|A|).
pub fn small_rank_witness(s_plus: usize, s_minus: usize, q: &FiniteQuadraticForm) -> Result<Option<IntMatrix>, FormError> {
    let order = q.order();
    if order > WITNESS_SEARCH_LIMIT {
        return Err(FormError::GroupTooLarge { size: order, limit: WITNESS_SEARCH_LIMIT });
    }
    let det = if s_minus % 2 == 0 { order as i64 } else { -(order as i64) };
    let matches = |g: IntMatrix| -> Result<Option<IntMatrix>, FormError> {
        let form = discriminant_form_of_gram(&g).map_err(|e| FormError::Invalid(e.to_string()))?;
        Ok(forms_isomorphic(&form, q)?.then_some(g))
    };
    match s_plus + s_minus {
        0 => Ok((order == 1).then(|| IntMatrix::zeros(0, 0))),
        1 => {
            if det % 2 != 0 {
                return Ok(None);
            }
            matches(IntMatrix::diagonal(&[det]))
        }
        2 => {
            let bound = 2 * order as i64;
            for x in -(order as i64)..=order as i64 {
                for y in -bound..=bound {
                    // det [[2x, y], [y, 2z]] = 4xz - y²
                    let zs: Vec<i64> = if x == 0 {
                        if -y * y != det {
                            continue;
                        }
                        (-(order as i64)..=order as i64).collect()
                    } else {
                        let num = det + y * y;
                        if num % (4 * x) != 0 {
                            continue;
                        }
                        vec![num / (4 * x)]
                    };
                    for z in zs {
                        if det > 0 && (x > 0) != (s_plus == 2) {
                            continue;
                        }
                        let g = IntMatrix::from_rows(&[vec![2 * x, y], vec![y, 2 * z]]).expect("square");
                        if let Some(w) = matches(g)? {
                            return Ok(Some(w));
                        }
                    }
                }
            }
            Ok(None)
        }
        r => Err(FormError::UnsupportedRegime(format!("witness search in rank {r}"))),
    }
}

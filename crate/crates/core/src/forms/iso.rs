use super::{FiniteQuadraticForm, FormError, BRUTE_FORCE_LIMIT};

fn same_group(f: &FiniteQuadraticForm, g: &FiniteQuadraticForm) -> bool {
    let ps = f.primes();
    ps == g.primes() && ps.iter().all(|&p| f.primary_orders(p) == g.primary_orders(p))
}

fn check_nondegenerate(f: &FiniteQuadraticForm) -> Result<(), FormError> {
    if f.is_nondegenerate() {
        Ok(())
    } else {
        Err(FormError::DegenerateForm)
    }
}

/// Isomorphism of nondegenerate forms, prime by prime.
///
/// Elementary odd parts compare the discriminant square class, elementary
/// 2-parts compare (δ, signature); everything else is settled by an
/// explicit generator-matching search.
pub fn forms_isomorphic(f: &FiniteQuadraticForm, g: &FiniteQuadraticForm) -> Result<bool, FormError> {
    check_nondegenerate(f)?;
    check_nondegenerate(g)?;
    if !same_group(f, g) {
        return Ok(false);
    }
    for p in f.primes() {
        let fp = f.primary_part(p);
        let gp = g.primary_part(p);
        let equal = if fp.is_p_elementary(p) && p != 2 {
            f.disc_class(p) == g.disc_class(p)
        } else if fp.is_p_elementary(2) {
            fp.delta()? == gp.delta()? && fp.gauss_signature()? == gp.gauss_signature()?
        } else {
            search(&fp, &gp, 1)? > 0
        };
        if !equal {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of isometries f → g, counted up to `limit`.
pub fn count_isometries(f: &FiniteQuadraticForm, g: &FiniteQuadraticForm, limit: u64) -> Result<u64, FormError> {
    check_nondegenerate(f)?;
    if !same_group(f, g) {
        return Ok(0);
    }
    let mut total: u64 = 1;
    for p in f.primes() {
        let n = search(&f.primary_part(p), &g.primary_part(p), limit)?;
        total = total.saturating_mul(n).min(limit);
        if total == 0 {
            break;
        }
    }
    Ok(total)
}

/// |O(q)|, counted up to `limit`.
pub fn orthogonal_group_order(f: &FiniteQuadraticForm, limit: u64) -> Result<u64, FormError> {
    count_isometries(f, f, limit)
}

/// Count value-preserving homomorphisms from the generators of `f` into
/// `g` (both p-groups of equal structure); for nondegenerate `f` these are
/// exactly the isometries.
fn search(f: &FiniteQuadraticForm, g: &FiniteQuadraticForm, limit: u64) -> Result<u64, FormError> {
    let size = g.order();
    if size > BRUTE_FORCE_LIMIT {
        return Err(FormError::GroupTooLarge { size, limit: BRUTE_FORCE_LIMIT });
    }
    debug_assert_eq!(f.denom, g.denom);
    let elems: Vec<(Vec<u64>, u64)> = g.elements().map(|y| {
        let q = g.q_num(&y);
        (y, q)
    }).collect();
    let candidates: Vec<Vec<usize>> = (0..f.num_generators())
        .map(|i| {
            let n = f.orders[i];
            elems
                .iter()
                .enumerate()
                .filter(|(_, (y, q))| *q == f.q[i] && y.iter().zip(&g.orders).all(|(&c, &d)| (c * n) % d == 0))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    let mut chosen = Vec::with_capacity(f.num_generators());
    let mut count = 0;
    backtrack(f, g, &elems, &candidates, &mut chosen, &mut count, limit);
    Ok(count)
}

fn backtrack(
    f: &FiniteQuadraticForm,
    g: &FiniteQuadraticForm,
    elems: &[(Vec<u64>, u64)],
    candidates: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    count: &mut u64,
    limit: u64,
) {
    let i = chosen.len();
    if i == candidates.len() {
        *count += 1;
        return;
    }
    for &k in &candidates[i] {
        let y = &elems[k].0;
        let ok = chosen.iter().enumerate().all(|(j, &kj)| g.b_num(y, &elems[kj].0) == f.b[i][j]);
        if ok {
            chosen.push(k);
            backtrack(f, g, elems, candidates, chosen, count, limit);
            chosen.pop();
            if *count >= limit {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn cyc(n: u64, v: Rational64) -> FiniteQuadraticForm {
        FiniteQuadraticForm::cyclic(n, v).unwrap()
    }

    #[test]
    fn odd_elementary_classes() {
        let a2 = cyc(3, r(4, 3));
        let twice = a2.orthogonal_sum(&a2);
        let mixed = cyc(3, r(2, 3)).orthogonal_sum(&a2);
        assert!(forms_isomorphic(&twice, &twice).unwrap());
        // 4/3 ⊕ 4/3 has det 4 = square, 2/3 ⊕ 4/3 det 2 = non-square
        assert!(!forms_isomorphic(&twice, &mixed).unwrap());
        assert!(forms_isomorphic(&cyc(3, r(2, 3)).orthogonal_sum(&cyc(3, r(2, 3))), &twice).unwrap());
    }

    #[test]
    fn brute_force_agrees_with_class_rule_on_elementary_parts() {
        let forms = [
            cyc(3, r(4, 3)).orthogonal_sum(&cyc(3, r(4, 3))),
            cyc(3, r(2, 3)).orthogonal_sum(&cyc(3, r(4, 3))),
            cyc(3, r(2, 3)).orthogonal_sum(&cyc(3, r(2, 3))),
        ];
        for f in &forms {
            for g in &forms {
                let rule = forms_isomorphic(f, g).unwrap();
                let brute = search(&f.primary_part(3), &g.primary_part(3), 1).unwrap() > 0;
                assert_eq!(rule, brute, "{f} vs {g}");
            }
        }
    }

    #[test]
    fn two_elementary_relations() {
        let half = cyc(2, r(1, 2));
        let three_half = cyc(2, r(3, 2));
        // ⟨1/2⟩ ⊕ ⟨3/2⟩ vs ⟨1/2⟩² differ in signature
        assert!(!forms_isomorphic(&half.orthogonal_sum(&three_half), &half.orthogonal_sum(&half)).unwrap());
        // v ⊕ v ≅ u ⊕ u
        let plane = |v: Rational64| {
            FiniteQuadraticForm::new(vec![2, 2], vec![v, v], vec![vec![v, r(1, 2)], vec![r(1, 2), v]]).unwrap()
        };
        let (u, v) = (plane(r(0, 1)), plane(r(1, 1)));
        assert!(forms_isomorphic(&u.orthogonal_sum(&u), &v.orthogonal_sum(&v)).unwrap());
        assert_eq!(search(&u.orthogonal_sum(&u), &v.orthogonal_sum(&v), 1).unwrap(), 1);
    }

    #[test]
    fn cyclic_four_by_search() {
        assert!(forms_isomorphic(&cyc(4, r(1, 4)), &cyc(4, r(9, 4))).unwrap());
        assert!(!forms_isomorphic(&cyc(4, r(1, 4)), &cyc(4, r(3, 4))).unwrap());
        assert!(!forms_isomorphic(&cyc(4, r(1, 4)), &cyc(2, r(1, 2)).orthogonal_sum(&cyc(2, r(1, 2)))).unwrap());
    }

    #[test]
    fn orthogonal_group_orders() {
        assert_eq!(orthogonal_group_order(&cyc(3, r(4, 3)), 100).unwrap(), 2);
        assert_eq!(orthogonal_group_order(&cyc(2, r(3, 2)), 100).unwrap(), 1);
        assert_eq!(orthogonal_group_order(&cyc(6, r(1, 6)), 100).unwrap(), 2);
        assert_eq!(orthogonal_group_order(&FiniteQuadraticForm::trivial(), 100).unwrap(), 1);
    }
}

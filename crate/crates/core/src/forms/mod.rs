//! Finite quadratic forms (discriminant forms) and their invariants.
//!
//! A form is stored on independent cyclic generators `g_i` of order `d_i`,
//! so the group is exactly `⊕ Z/d_i`. Values are kept as integer
//! numerators over a common denominator `D` (the group exponent):
//! `q(g_i) = q[i] / D mod 2` and `b(g_i, g_j) = b[i][j] / D mod 1`.

mod existence;
mod iso;

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{factorize, legendre, least_nonresidue};

pub use existence::{even_lattice_exists, small_rank_witness, ExistenceCondition, ExistenceVerdict};
pub use iso::{count_isometries, forms_isomorphic, orthogonal_group_order};

/// Largest group (or primary part) enumerated element by element.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;
/// Largest primary part handed to the brute-force isomorphism search.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000;

const GAUSS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("inconsistent form data: {0}")]
    Invalid(String),
    #[error("degenerate form: the bilinear form has a nontrivial radical")]
    DegenerateForm,
    #[error("Gauss sum is not an eighth root of unity")]
    AmbiguousGaussSum,
    #[error("group of order {size} exceeds the enumeration limit {limit}")]
    GroupTooLarge { size: u64, limit: u64 },
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    denom: u64,
    q: Vec<u64>,
    b: Vec<Vec<u64>>,
}

/// Summary invariants of a form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormInvariants {
    pub order: u64,
    pub lengths_per_prime: BTreeMap<u64, usize>,
    pub signature_mod_8: u8,
    pub delta: u8,
    /// Legendre symbol of the discriminant of each odd elementary part.
    pub odd_prime_disc_class: BTreeMap<u64, i32>,
}

fn lcm_all(xs: impl IntoIterator<Item = u64>) -> u64 {
    xs.into_iter().fold(1, |acc, x| acc.lcm(&x))
}

fn rat_mod(x: Rational64, m: i64) -> Rational64 {
    let m = Rational64::from_integer(m);
    let k = (x / m).floor();
    x - k * m
}

impl FiniteQuadraticForm {
    pub fn trivial() -> Self {
        FiniteQuadraticForm { orders: vec![], denom: 1, q: vec![], b: vec![] }
    }

    /// Build from generator orders and exact values; `q` is read mod 2,
    /// `b` mod 1. Generators of order 1 are dropped.
    pub fn new(orders: Vec<u64>, q: Vec<Rational64>, b: Vec<Vec<Rational64>>) -> Result<Self, FormError> {
        let n = orders.len();
        if q.len() != n || b.len() != n || b.iter().any(|r| r.len() != n) {
            return Err(FormError::Invalid("dimension mismatch".into()));
        }
        if orders.iter().any(|&d| d == 0) {
            return Err(FormError::Invalid("generator of infinite order".into()));
        }
        let q: Vec<Rational64> = q.into_iter().map(|x| rat_mod(x, 2)).collect();
        let b: Vec<Vec<Rational64>> = b.into_iter().map(|r| r.into_iter().map(|x| rat_mod(x, 1)).collect()).collect();
        for i in 0..n {
            let d = Rational64::from_integer(orders[i] as i64);
            if !(d * d * q[i] / 2).is_integer() {
                return Err(FormError::Invalid(format!("q(g{i}) = {} incompatible with order {}", q[i], orders[i])));
            }
            if rat_mod(q[i], 1) != b[i][i] {
                return Err(FormError::Invalid(format!("b(g{i}, g{i}) disagrees with q(g{i}) mod 1")));
            }
            for j in 0..n {
                if b[i][j] != b[j][i] {
                    return Err(FormError::Invalid("bilinear form not symmetric".into()));
                }
                if !(d * b[i][j]).is_integer() {
                    return Err(FormError::Invalid(format!("b(g{i}, g{j}) incompatible with order {}", orders[i])));
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| orders[i] > 1).collect();
        let denom = lcm_all(keep.iter().map(|&i| orders[i]));
        let dq = Rational64::from_integer(denom as i64);
        let num = |x: Rational64| -> u64 {
            let y = x * dq;
            debug_assert!(y.is_integer());
            y.to_integer() as u64
        };
        Ok(FiniteQuadraticForm {
            orders: keep.iter().map(|&i| orders[i]).collect(),
            denom,
            q: keep.iter().map(|&i| num(q[i])).collect(),
            b: keep.iter().map(|&i| keep.iter().map(|&j| num(b[i][j])).collect()).collect(),
        })
    }

    /// Cyclic form Z/n(value).
    pub fn cyclic(n: u64, value: Rational64) -> Result<Self, FormError> {
        Self::new(vec![n], vec![value], vec![vec![value]])
    }

    /// Orthogonal sum of cyclic forms Z/n_i(v_i).
    pub fn diagonal(parts: &[(u64, Rational64)]) -> Result<Self, FormError> {
        parts.iter().try_fold(Self::trivial(), |acc, &(n, v)| Ok(acc.orthogonal_sum(&Self::cyclic(n, v)?)))
    }

    /// Rebuild with a new common denominator (a multiple of the exponent
    /// dividing the numerators' scale).
    fn with_denom(&self, denom: u64) -> Self {
        let mut out = self.clone();
        if denom >= self.denom {
            let f = denom / self.denom;
            out.q.iter_mut().for_each(|x| *x *= f);
            out.b.iter_mut().flatten().for_each(|x| *x *= f);
        } else {
            let f = self.denom / denom;
            debug_assert!(self.q.iter().chain(self.b.iter().flatten()).all(|x| x % f == 0));
            out.q.iter_mut().for_each(|x| *x /= f);
            out.b.iter_mut().flatten().for_each(|x| *x /= f);
        }
        out.denom = denom;
        out
    }

    fn normalized(self) -> Self {
        let e = lcm_all(self.orders.iter().copied());
        self.with_denom(e)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.denom
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn q_value(&self, i: usize) -> Rational64 {
        Rational64::new(self.q[i] as i64, self.denom as i64)
    }

    pub fn b_value(&self, i: usize, j: usize) -> Rational64 {
        Rational64::new(self.b[i][j] as i64, self.denom as i64)
    }

    /// Numerator of q(x) over the common denominator, reduced mod 2D.
    pub(crate) fn q_num(&self, x: &[u64]) -> u64 {
        let m = 2 * self.denom as u128;
        let mut acc: u128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as u128;
            acc = (acc + xi * xi % m * self.q[i] as u128) % m;
            for j in i + 1..x.len() {
                if x[j] != 0 {
                    acc = (acc + 2 * (xi * x[j] as u128 % m) * self.b[i][j] as u128) % m;
                }
            }
        }
        acc as u64
    }

    /// Numerator of b(x, y) over the common denominator, reduced mod D.
    pub(crate) fn b_num(&self, x: &[u64], y: &[u64]) -> u64 {
        let m = self.denom as u128;
        let mut acc: u128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                if y[j] != 0 {
                    acc = (acc + (x[i] as u128 * y[j] as u128 % m) * self.b[i][j] as u128) % m;
                }
            }
        }
        acc as u64
    }

    pub fn value(&self, x: &[u64]) -> Rational64 {
        Rational64::new(self.q_num(x) as i64, self.denom as i64)
    }

    pub fn bilinear(&self, x: &[u64], y: &[u64]) -> Rational64 {
        Rational64::new(self.b_num(x, y) as i64, self.denom as i64)
    }

    pub fn elements(&self) -> Elements<'_> {
        Elements { orders: &self.orders, next: Some(vec![0; self.orders.len()]) }
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Self {
        let denom = self.denom.lcm(&other.denom);
        let a = self.with_denom(denom);
        let c = other.with_denom(denom);
        let n = a.orders.len();
        let m = c.orders.len();
        let mut b = vec![vec![0; n + m]; n + m];
        for i in 0..n {
            b[i][..n].copy_from_slice(&a.b[i]);
        }
        for i in 0..m {
            b[n + i][n..].copy_from_slice(&c.b[i]);
        }
        FiniteQuadraticForm {
            orders: a.orders.iter().chain(&c.orders).copied().collect(),
            denom,
            q: a.q.iter().chain(&c.q).copied().collect(),
            b,
        }
    }

    /// The form -q.
    pub fn negate(&self) -> Self {
        let d = self.denom;
        FiniteQuadraticForm {
            orders: self.orders.clone(),
            denom: d,
            q: self.q.iter().map(|&x| (2 * d - x) % (2 * d)).collect(),
            b: self.b.iter().map(|r| r.iter().map(|&x| (d - x) % d).collect()).collect(),
        }
    }

    /// Primes dividing the group order, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.orders.iter().flat_map(|&d| factorize(d).into_iter().map(|(p, _)| p)).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// The p-primary part, on generators (d_i / p^e_i) g_i.
    pub fn primary_part(&self, p: u64) -> Self {
        let mut idx = Vec::new();
        let mut mult = Vec::new();
        let mut orders = Vec::new();
        for (i, &d) in self.orders.iter().enumerate() {
            let mut pe = 1;
            while d % (pe * p) == 0 {
                pe *= p;
            }
            if pe > 1 {
                idx.push(i);
                mult.push((d / pe) as u128);
                orders.push(pe);
            }
        }
        let m2 = 2 * self.denom as u128;
        let m1 = self.denom as u128;
        let q = idx.iter().zip(&mult).map(|(&i, &c)| (c * c % m2 * self.q[i] as u128 % m2) as u64).collect();
        let b = idx
            .iter()
            .zip(&mult)
            .map(|(&i, &ci)| idx.iter().zip(&mult).map(|(&j, &cj)| (ci * cj % m1 * self.b[i][j] as u128 % m1) as u64).collect())
            .collect();
        FiniteQuadraticForm { orders, denom: self.denom, q, b }.normalized()
    }

    /// Number of cyclic factors of the p-part (its minimal number of generators).
    pub fn length_at(&self, p: u64) -> usize {
        self.orders.iter().filter(|&&d| d % p == 0).count()
    }

    /// Minimal number of generators of the whole group.
    pub fn length(&self) -> usize {
        self.primes().into_iter().map(|p| self.primary_part(p).num_generators()).max().unwrap_or(0)
    }

    /// Invariant-factor multiset of the p-part (sorted prime powers).
    pub fn primary_orders(&self, p: u64) -> Vec<u64> {
        let mut v = self.primary_part(p).orders;
        v.sort_unstable();
        v
    }

    /// True iff the group is (Z/p)^a for some a ≥ 0.
    pub fn is_p_elementary(&self, p: u64) -> bool {
        self.orders.iter().all(|&d| d == p)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.primes().into_iter().all(|p| self.primary_part(p).socle_pairing_rank(p) == Some(true))
    }

    /// Nondegeneracy of the p-part (self must be a p-group) via the F_p
    /// matrix of b(p^{e_i-1} g_i, g_j).
    fn socle_pairing_rank(&self, p: u64) -> Option<bool> {
        let n = self.orders.len();
        let mut t = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let num = self.orders[i] as u128 * self.b[i][j] as u128;
                if num % self.denom as u128 != 0 {
                    return None;
                }
                t[i][j] = ((num / self.denom as u128) % p as u128) as u64;
            }
        }
        Some(det_mod_p(t, p) != 0)
    }

    fn check_enumerable(&self) -> Result<(), FormError> {
        let size = self.order();
        if size > ENUMERATION_LIMIT {
            return Err(FormError::GroupTooLarge { size, limit: ENUMERATION_LIMIT });
        }
        Ok(())
    }

    /// Signature mod 8 from the Gauss sum, part by part.
    pub fn gauss_signature(&self) -> Result<u8, FormError> {
        let mut total = 0u8;
        for p in self.primes() {
            let part = self.primary_part(p);
            if part.socle_pairing_rank(p) != Some(true) {
                return Err(FormError::DegenerateForm);
            }
            total = (total + part.gauss_signature_of_part()?) % 8;
        }
        Ok(total)
    }

    fn gauss_signature_of_part(&self) -> Result<u8, FormError> {
        self.check_enumerable()?;
        let d = self.denom as f64;
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for x in self.elements() {
            let theta = std::f64::consts::PI * self.q_num(&x) as f64 / d;
            re += theta.cos();
            im += theta.sin();
        }
        let norm = (self.order() as f64).sqrt();
        let (re, im) = (re / norm, im / norm);
        (0..8u8)
            .find(|&k| {
                let phi = std::f64::consts::PI * k as f64 / 4.0;
                (re - phi.cos()).hypot(im - phi.sin()) < GAUSS_TOLERANCE
            })
            .ok_or(FormError::AmbiguousGaussSum)
    }

    /// δ of the 2-part: 1 iff some element has a non-integral value.
    pub fn delta(&self) -> Result<u8, FormError> {
        let two = self.primary_part(2);
        if two.is_p_elementary(2) {
            // q(x + y) = q(x) + q(y) + 2b(x, y) with 2b integral
            return Ok(u8::from(two.q.iter().any(|&x| x % two.denom != 0)));
        }
        two.check_enumerable()?;
        Ok(u8::from(two.elements().any(|x| two.q_num(&x) % two.denom != 0)))
    }

    /// Legendre symbol of det W for an odd p-elementary part, where
    /// b(g_i, g_j) = 2 W_ij / p. None if the part is not elementary.
    pub fn disc_class(&self, p: u64) -> Option<i32> {
        let part = self.primary_part(p);
        if p == 2 || !part.is_p_elementary(p) {
            return None;
        }
        if part.is_trivial() {
            return Some(1);
        }
        let inv2 = (p + 1) / 2;
        let w: Vec<Vec<u64>> = part.b.iter().map(|r| r.iter().map(|&x| x * inv2 % p).collect()).collect();
        Some(legendre(det_mod_p(w, p) as i128, p))
    }

    pub fn invariants(&self) -> Result<FormInvariants, FormError> {
        let primes = self.primes();
        Ok(FormInvariants {
            order: self.order(),
            lengths_per_prime: primes.iter().map(|&p| (p, self.length_at(p))).collect(),
            signature_mod_8: self.gauss_signature()?,
            delta: self.delta()?,
            odd_prime_disc_class: primes.iter().filter_map(|&p| self.disc_class(p).map(|c| (p, c))).collect(),
        })
    }

    /// Off-diagonal bilinear values all vanish.
    pub fn is_diagonal(&self) -> bool {
        let n = self.orders.len();
        (0..n).all(|i| (0..n).all(|j| i == j || self.b[i][j] == 0))
    }

    /// Z/p(2/p)^{a-1} ⊕ Z/p(2u/p) with Gauss signature ≡ `sig` mod 8 (odd p).
    pub fn p_elementary_normal_form(p: u64, a: usize, sig: i64) -> Option<Self> {
        let target = sig.rem_euclid(8) as u8;
        if a == 0 {
            return (target == 0).then(Self::trivial);
        }
        let base = Rational64::new(2, p as i64);
        let n = least_nonresidue(p) as i64;
        [1, n].into_iter().find_map(|u| {
            let mut parts = vec![(p, base); a - 1];
            parts.push((p, Rational64::new(2 * u, p as i64)));
            let f = Self::diagonal(&parts).ok()?;
            (f.gauss_signature().ok()? == target).then_some(f)
        })
    }

    /// The 2-elementary form with invariants (a, δ, σ), if one exists:
    /// u^k ⊕ v^{0|1} when δ = 0, ⟨1/2⟩^x ⊕ ⟨3/2⟩^y when δ = 1.
    pub fn two_elementary_normal_form(a: usize, delta: u8, sig: i64) -> Option<Self> {
        let s = sig.rem_euclid(8);
        let half = |k: i64| Rational64::new(k, 2);
        let zero = Rational64::zero();
        let plane = |v: Rational64| {
            Self::new(vec![2, 2], vec![v, v], vec![vec![v, half(1)], vec![half(1), v]]).expect("valid plane")
        };
        match delta {
            0 => {
                if a % 2 == 1 {
                    return None;
                }
                let k = a / 2;
                match s {
                    0 => Some((0..k).fold(Self::trivial(), |f, _| f.orthogonal_sum(&plane(zero)))),
                    4 if k >= 1 => Some(
                        (0..k - 1).fold(plane(Rational64::one()), |f, _| f.orthogonal_sum(&plane(zero))),
                    ),
                    _ => None,
                }
            }
            1 => {
                let a = a as i64;
                (0..=a).find(|&x| (2 * x - a - s).rem_euclid(8) == 0).map(|x| {
                    let mut parts = vec![(2, half(1)); x as usize];
                    parts.extend(vec![(2, half(3)); (a - x) as usize]);
                    Self::diagonal(&parts).expect("valid diagonal form")
                })
                .filter(|_| a > 0)
            }
            _ => None,
        }
    }
}

pub struct Elements<'a> {
    orders: &'a [u64],
    next: Option<Vec<u64>>,
}

impl Iterator for Elements<'_> {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.orders[i] {
                self.next = Some(succ);
                return Some(cur);
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

pub(crate) fn det_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| a[r][c] % p != 0) else {
            return 0;
        };
        if r != c {
            a.swap(r, c);
            det = (p - det) % p;
        }
        let piv = a[c][c] % p;
        det = det * piv % p;
        let inv = crate::arith::pow_mod(piv, p - 2, p);
        for r in c + 1..n {
            let f = a[r][c] % p * inv % p;
            if f == 0 {
                continue;
            }
            for j in c..n {
                a[r][j] = (a[r][j] % p + p * p - f * (a[c][j] % p) % p) % p;
            }
        }
    }
    det
}

impl fmt::Display for FiniteQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        if self.is_diagonal() {
            let parts: Vec<String> = (0..self.orders.len()).map(|i| format!("Z/{}({})", self.orders[i], self.q_value(i))).collect();
            return write!(f, "{}", parts.join(" + "));
        }
        let groups: Vec<String> = self.orders.iter().map(|d| format!("Z/{d}")).collect();
        let qs: Vec<String> = (0..self.orders.len()).map(|i| self.q_value(i).to_string()).collect();
        let bs: Vec<String> = (0..self.orders.len())
            .map(|i| {
                let row: Vec<String> = (0..self.orders.len()).map(|j| self.b_value(i, j).to_string()).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        write!(f, "{} with q = [{}], b = [{}]", groups.join(" x "), qs.join(", "), bs.join(", "))
    }
}

impl fmt::Debug for FiniteQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn gauss_signatures_of_small_forms() {
        assert_eq!(FiniteQuadraticForm::trivial().gauss_signature(), Ok(0));
        assert_eq!(FiniteQuadraticForm::cyclic(3, r(4, 3)).unwrap().gauss_signature(), Ok(6));
        assert_eq!(FiniteQuadraticForm::cyclic(2, r(3, 2)).unwrap().gauss_signature(), Ok(7));
        assert_eq!(FiniteQuadraticForm::cyclic(2, r(1, 2)).unwrap().gauss_signature(), Ok(1));
        assert_eq!(FiniteQuadraticForm::cyclic(3, r(2, 3)).unwrap().gauss_signature(), Ok(2));
    }

    #[test]
    fn gauss_sum_by_hand() {
        // Z/3(4/3): 1 + 2 exp(4πi/3) = -i√3, i.e. exp(2πi·6/8)·√3
        let (re, im) = (1.0 + 2.0 * (4.0 * std::f64::consts::PI / 3.0).cos(), 2.0 * (4.0 * std::f64::consts::PI / 3.0).sin());
        assert!(re.abs() < 1e-12 && (im + 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn delta_values() {
        let u2 = FiniteQuadraticForm::new(vec![2, 2], vec![r(0, 1), r(0, 1)], vec![vec![r(0, 1), r(1, 2)], vec![r(1, 2), r(0, 1)]]).unwrap();
        assert_eq!(u2.delta(), Ok(0));
        assert_eq!(FiniteQuadraticForm::cyclic(2, r(3, 2)).unwrap().delta(), Ok(1));
        assert_eq!(FiniteQuadraticForm::trivial().delta(), Ok(0));
        // Z/4(1/4) has 2-part values 1/4, 1, 9/4, 0: δ = 1
        assert_eq!(FiniteQuadraticForm::cyclic(4, r(1, 4)).unwrap().delta(), Ok(1));
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(FiniteQuadraticForm::cyclic(2, r(1, 3)).is_err());
        assert!(FiniteQuadraticForm::cyclic(2, r(1, 4)).is_err());
    }

    #[test]
    fn degeneracy_detected() {
        let deg = FiniteQuadraticForm::cyclic(2, r(0, 1)).unwrap();
        assert!(!deg.is_nondegenerate());
        assert_eq!(deg.gauss_signature(), Err(FormError::DegenerateForm));
        assert!(FiniteQuadraticForm::cyclic(6, r(1, 6)).unwrap().is_nondegenerate());
    }

    #[test]
    fn primary_parts_of_cyclic_six() {
        let f = FiniteQuadraticForm::cyclic(6, r(1, 6)).unwrap();
        assert_eq!(f.primes(), vec![2, 3]);
        // 3·(1/6) has q = 9/6 = 3/2; 2·(1/6) has q = 4/6 = 2/3
        assert_eq!(f.primary_part(2).q_value(0), r(3, 2));
        assert_eq!(f.primary_part(3).q_value(0), r(2, 3));
        assert_eq!(f.length(), 1);
        assert_eq!(f.gauss_signature(), Ok(1)); // 7 + 2
    }

    #[test]
    fn negation_flips_signature() {
        let f = FiniteQuadraticForm::cyclic(3, r(4, 3)).unwrap();
        assert_eq!(f.negate().gauss_signature(), Ok(2));
        assert_eq!(f.negate().q_value(0), r(2, 3));
    }

    #[test]
    fn normal_forms() {
        for a in 1..6 {
            for sig in 0..8 {
                if let Some(f) = FiniteQuadraticForm::p_elementary_normal_form(3, a, sig) {
                    assert_eq!(f.gauss_signature(), Ok(sig as u8));
                    assert_eq!(f.num_generators(), a);
                }
            }
        }
        // p ≡ 3 mod 4: exactly the residues ±2 + 2a... two of them per length
        let hits = (0..8).filter(|&s| FiniteQuadraticForm::p_elementary_normal_form(7, 3, s).is_some()).count();
        assert_eq!(hits, 2);
        for a in 0..8 {
            for delta in 0..2 {
                for sig in 0..8 {
                    if let Some(f) = FiniteQuadraticForm::two_elementary_normal_form(a, delta, sig) {
                        assert_eq!(f.gauss_signature(), Ok(sig as u8));
                        assert_eq!(f.delta(), Ok(delta));
                        assert_eq!(f.num_generators(), a);
                    }
                }
            }
        }
        assert!(FiniteQuadraticForm::two_elementary_normal_form(2, 1, 4).is_none());
        assert!(FiniteQuadraticForm::two_elementary_normal_form(2, 0, 4).is_some());
    }

    #[test]
    fn disc_class_of_e6_dual_form() {
        // Z/3(2/3)^5: W = I, det 1
        let f = FiniteQuadraticForm::diagonal(&vec![(3, r(2, 3)); 5]).unwrap();
        assert_eq!(f.disc_class(3), Some(1));
        let g = FiniteQuadraticForm::diagonal(&vec![(3, r(4, 3)); 5]).unwrap();
        assert_eq!(g.disc_class(3), Some(-1)); // 2^5 is a non-square mod 3
    }

    #[test]
    fn display() {
        let f = FiniteQuadraticForm::diagonal(&[(3, r(4, 3)), (2, r(3, 2))]).unwrap();
        assert_eq!(f.to_string(), "Z/3(4/3) + Z/2(3/2)");
    }

    #[test]
    fn det_mod_p_matches_integer_det() {
        assert_eq!(det_mod_p(vec![vec![1, 2], vec![3, 4]], 7), 5); // -2 mod 7
        assert_eq!(det_mod_p(vec![vec![0, 1], vec![1, 0]], 5), 4);
    }
}

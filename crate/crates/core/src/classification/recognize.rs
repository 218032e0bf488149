//! Name a genus by a sum of catalog lattices.
//!
//! Search order: fewest summands first, then lexicographic in the candidate
//! list built by [`candidates`] (hyperbolic planes, then E/D/A, then
//! prime-specific atoms, duals, cyclic ⟨n⟩, and finally positive-definite
//! negations). The first expression whose realized signature and
//! discriminant form match the target is returned.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, ToPrimitive};

use super::{ClassificationError, LatticeInvariants};
use crate::arith::{factorize, is_prime};
use crate::forms::{forms_isomorphic, FiniteQuadraticForm};
use crate::lattice::{dual_twist, realize_summand, Atom, LatticeExpr, RootType, Summand};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_summands: u32,
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_summands: 12, max_nodes: 5_000_000 }
    }
}

struct Candidate {
    summand: Summand,
    rank: usize,
    s_plus: usize,
    s_minus: usize,
    det: u64,
    form: FiniteQuadraticForm,
}

type AtomCache = Mutex<HashMap<(Atom, i64), Option<Arc<Candidate>>>>;

/// Realized atoms are shared across searches; realizing the large root
/// lattices dominates the cost of a single recognition otherwise.
fn realized(atom: Atom, twist: i64) -> Option<Arc<Candidate>> {
    static CACHE: OnceLock<AtomCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(atom, twist)) {
        return hit.clone();
    }
    let build = || -> Option<Candidate> {
        let summand = Summand::new(atom, twist, 1);
        let lat = realize_summand(&summand).ok()?;
        let (s_plus, s_minus) = lat.signature();
        let det = lat.det().abs().to_u64()?;
        let form = lat.discriminant_form().ok()?;
        Some(Candidate { summand, rank: lat.rank(), s_plus, s_minus, det, form })
    };
    let value = build().map(Arc::new);
    cache.lock().expect("cache lock").insert((atom, twist), value.clone());
    value
}

fn primary_profile(f: &FiniteQuadraticForm, p: u64) -> (usize, u64) {
    let orders = f.primary_orders(p);
    (orders.len(), orders.last().copied().unwrap_or(1))
}

fn cached_dual_twist(kind: RootType, n: u32) -> Option<i64> {
    static CACHE: OnceLock<Mutex<HashMap<(RootType, u32), Option<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    *cache.lock().expect("cache lock").entry((kind, n)).or_insert_with(|| dual_twist(kind, n).ok())
}

fn candidate(target: &LatticeInvariants, atom: Atom, twist: i64) -> Option<Arc<Candidate>> {
    let c = realized(atom, twist)?;
    if c.rank > target.rank() || c.s_plus > target.s_plus || c.s_minus > target.s_minus {
        return None;
    }
    if target.form.order() % c.det != 0 {
        return None;
    }
    for p in c.form.primes() {
        let (len, exp) = primary_profile(&c.form, p);
        let (tlen, texp) = primary_profile(&target.form, p);
        if len > tlen || exp > texp {
            return None;
        }
    }
    Some(c)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=((n as f64).sqrt() as u64 + 1)).filter(|&k| k * k <= n && n % k == 0).flat_map(|k| [k, n / k]).collect();
    d.sort_unstable();
    d.dedup();
    d
}

/// Candidate atoms for a target, in search preference order.
fn candidates(target: &LatticeInvariants) -> Vec<Arc<Candidate>> {
    let order = target.form.order();
    let n = target.rank() as u32;
    let primes: Vec<u64> = factorize(order).into_iter().map(|(p, _)| p).collect();
    let mut atoms: Vec<(Atom, i64)> = vec![(Atom::U, 1)];
    atoms.extend(divisors(order).into_iter().filter(|&t| t > 1 && order % (t * t) == 0).map(|t| (Atom::U, t as i64)));
    atoms.extend(primes.iter().filter(|&&p| p % 4 == 1).map(|&p| (Atom::H(p), 1)));
    let mut definite: Vec<(Atom, i64)> = vec![
        (Atom::Root(RootType::E, 8), 1),
        (Atom::Root(RootType::E, 7), 1),
        (Atom::Root(RootType::E, 6), 1),
    ];
    definite.extend((4..=n.max(4)).rev().map(|k| (Atom::Root(RootType::D, k), 1)));
    definite.extend((2..=n.max(2)).rev().map(|k| (Atom::Root(RootType::A, k), 1)));
    definite.extend(primes.iter().filter(|&&p| p % 4 == 3 && p != 3 && is_prime(p)).map(|&p| (Atom::K(p), 1)));
    if primes.contains(&17) {
        definite.push((Atom::L17, 1));
    }
    let duals = [(RootType::E, 6), (RootType::E, 7)]
        .into_iter()
        .chain((4..=n.max(4)).rev().map(|k| (RootType::D, k)))
        .chain((3..=n.max(3)).rev().map(|k| (RootType::A, k)));
    definite.extend(duals.filter_map(|(kind, k)| Some((Atom::Dual(kind, k), cached_dual_twist(kind, k)?))));
    atoms.extend(definite.iter().copied());
    for d in divisors(order).into_iter().filter(|d| d % 2 == 0) {
        atoms.push((Atom::Cyclic(-(d as i64)), 1));
        atoms.push((Atom::Cyclic(d as i64), 1));
    }
    if target.s_plus > 0 {
        atoms.extend(definite.iter().map(|&(a, t)| (a, -t)));
    }
    atoms.into_iter().filter_map(|(a, t)| candidate(target, a, t)).collect()
}

struct Search<'a> {
    target: &'a LatticeInvariants,
    cands: Vec<Arc<Candidate>>,
    /// max rank among candidates[i..]
    suffix_max_rank: Vec<usize>,
    nodes: u64,
    budget: SearchBudget,
}

impl Search<'_> {
    fn dfs(&mut self, start: usize, remaining: u32, chosen: &mut Vec<usize>, rank: usize, sp: usize, sm: usize, det: u64) -> Result<bool, ClassificationError> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(ClassificationError::BudgetExceeded(self.nodes));
        }
        let t = self.target;
        if remaining == 0 {
            if rank != t.rank() || sp != t.s_plus || sm != t.s_minus || det != t.form.order() {
                return Ok(false);
            }
            let form = chosen.iter().fold(FiniteQuadraticForm::trivial(), |f, &i| f.orthogonal_sum(&self.cands[i].form));
            return Ok(forms_isomorphic(&form, &t.form)?);
        }
        for i in start..self.cands.len() {
            let c = &self.cands[i];
            let (r2, sp2, sm2) = (rank + c.rank, sp + c.s_plus, sm + c.s_minus);
            if sp2 > t.s_plus || sm2 > t.s_minus || r2 + (remaining as usize - 1) > t.rank() {
                continue;
            }
            if r2 + (remaining as usize - 1) * self.suffix_max_rank[i] < t.rank() {
                // later candidates are no larger: nothing further can fill the rank
                continue;
            }
            let d2 = det * c.det;
            if t.form.order() % d2 != 0 {
                continue;
            }
            chosen.push(i);
            if self.dfs(i, remaining - 1, chosen, r2, sp2, sm2, d2)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

fn collect(cands: &[Arc<Candidate>], chosen: &[usize]) -> LatticeExpr {
    let mut summands: Vec<Summand> = Vec::new();
    for &i in chosen {
        let s = cands[i].summand;
        match summands.last_mut() {
            Some(last) if last.atom == s.atom && last.twist == s.twist => last.mult += 1,
            _ => summands.push(s),
        }
    }
    LatticeExpr::new(summands)
}

/// Find a catalog sum with the target's signature and discriminant form.
pub fn recognize(target: &LatticeInvariants, budget: SearchBudget) -> Result<Option<LatticeExpr>, ClassificationError> {
    if target.rank() == 0 {
        return Ok(target.form.is_trivial().then(LatticeExpr::default));
    }
    let cands = candidates(target);
    let mut suffix_max_rank = vec![0; cands.len() + 1];
    for i in (0..cands.len()).rev() {
        suffix_max_rank[i] = suffix_max_rank[i + 1].max(cands[i].rank);
    }
    let mut search = Search { target, cands, suffix_max_rank, nodes: 0, budget };
    for count in 1..=budget.max_summands {
        let mut chosen = Vec::new();
        if search.dfs(0, count, &mut chosen, 0, 0, 0, 1)? {
            return Ok(Some(collect(&search.cands, &chosen)));
        }
    }
    Ok(None)
}

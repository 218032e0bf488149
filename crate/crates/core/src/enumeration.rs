//! Admissible triples (p, m, a) for odd-prime-order non-symplectic
//! automorphisms, with fixed-locus invariants and the lattices S, T, and
//! their rendering as tables.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classification::{
    embed_in_l, indefinite_p_elementary_exists, recognize, ClassificationError, LatticeInvariants, SearchBudget,
};
use crate::fixed_locus::natural_census_witness;
use crate::lattice::{realize, LatticeExpr};

pub const SUPPORTED_PRIMES: [u64; 7] = [3, 5, 7, 11, 13, 17, 19];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("prime {0} is outside the supported set 3, 5, 7, 11, 13, 17, 19")]
    UnsupportedPrime(u64),
    #[error("{what} is not an integer for these parameters")]
    NonIntegerResult { what: &'static str },
    #[error(transparent)]
    Classification(#[from] ClassificationError),
    #[error("presentation {name} does not match the computed {which} for ({p},{m},{a})")]
    PresentationMismatch { p: u64, m: u64, a: u64, which: &'static str, name: String },
    #[error("no catalog presentation found for the {which} of ({p},{m},{a})")]
    Unrecognized { p: u64, m: u64, a: u64, which: &'static str },
}

fn halve(twice: i64, what: &'static str) -> Result<i64, EnumerationError> {
    if twice % 2 == 0 {
        Ok(twice / 2)
    } else {
        Err(EnumerationError::NonIntegerResult { what })
    }
}

/// Total mod-p Betti number of the fixed locus.
pub fn h_star(p: u64, m: u64, a: u64) -> Result<i64, EnumerationError> {
    let (p, m, a) = (p as i64, m as i64, a as i64);
    let twice = 2 * (324 - 2 * a * (25 - a) - (p - 2) * m * (25 - 2 * a)) + m * ((p - 2) * (p - 2) * m - p);
    halve(twice, "h*")
}

/// Euler characteristic of the fixed locus (holomorphic Lefschetz).
pub fn lefschetz_chi(p: u64, m: u64) -> Result<i64, EnumerationError> {
    let mp = (m * p) as i64;
    halve(648 - 51 * mp + mp * mp, "chi")
}

/// Trace of the action on H^4 in terms of m and the rank r of T.
pub fn h4_trace(m: i64, r: i64) -> i64 {
    (m - r) * (m - r - 1) / 2
}

/// Dimension of the moduli of pairs with the given action.
pub fn moduli_dimension(p: u64, m: u64) -> i64 {
    if p == 2 {
        m as i64 - 2
    } else {
        m as i64 - 1
    }
}

/// Known geometric realizations of a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Realization {
    /// Natural automorphism of a Hilbert square of a K3 surface.
    Natural,
    /// Automorphism of the Fano variety of lines of a cubic fourfold.
    Fano,
}

impl Realization {
    pub fn symbol(self) -> &'static str {
        match self {
            Realization::Natural => "♣",
            Realization::Fano => "♦",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleTriple {
    pub p: u64,
    pub m: u64,
    pub a: u64,
    pub chi: i64,
    pub h_star: i64,
    /// Presentation of the coinvariant lattice S.
    pub s_expr: LatticeExpr,
    /// Presentation of the invariant lattice T.
    pub t_expr: LatticeExpr,
    /// First catalog sums found by the recognizer.
    pub s_witness: LatticeExpr,
    pub t_witness: LatticeExpr,
    pub s_unique_embedding: bool,
    pub t_unique_embedding: bool,
    pub t_rank: u64,
    pub moduli_dim: i64,
    pub natural_only: bool,
    pub tags: Vec<Realization>,
    pub no_known_realization: bool,
    /// Uniqueness of T ↪ L not settled by the standard criteria.
    pub exception_flag: bool,
}

struct Presentation {
    p: u64,
    m: u64,
    a: u64,
    s: &'static str,
    t: &'static str,
    tags: &'static [Realization],
}

const N: &[Realization] = &[Realization::Natural];
const F: &[Realization] = &[Realization::Fano];
const FN: &[Realization] = &[Realization::Fano, Realization::Natural];
const NONE: &[Realization] = &[];

const fn row(p: u64, m: u64, a: u64, s: &'static str, t: &'static str, tags: &'static [Realization]) -> Presentation {
    Presentation { p, m, a, s, t, tags }
}

/// Conventional names for S and T in each row, and known realizations.
/// Every name is checked against the computed genus before it is emitted.
const PRESENTATIONS: &[Presentation] = &[
    row(3, 11, 1, "U^2 + E8^2 + A2", "<6>", F),
    row(3, 10, 0, "U^2 + E8^2", "U + <-2>", N),
    row(3, 10, 2, "U + U(3) + E8^2", "U(3) + <-2>", N),
    row(3, 9, 1, "U^2 + E6 + E8", "U + A2 + <-2>", N),
    row(3, 9, 3, "U + U(3) + E6 + E8", "U(3) + A2 + <-2>", N),
    row(3, 8, 2, "U^2 + E6^2", "U + A2^2 + <-2>", N),
    row(3, 8, 4, "U + U(3) + E6^2", "U(3) + A2^2 + <-2>", N),
    row(3, 8, 6, "U^2 + A2^6", "<6> + E6*(3)", F),
    row(3, 7, 1, "U^2 + A2 + E8", "U + E6 + <-2>", N),
    row(3, 7, 3, "U + U(3) + A2 + E8", "U + A2^3 + <-2>", N),
    row(3, 7, 5, "U^2 + A2^5", "U(3) + A2^3 + <-2>", N),
    row(3, 7, 7, "U + U(3) + A2^5", "U(3) + E6*(3) + <-2>", FN),
    row(3, 6, 0, "U^2 + E8", "U + E8 + <-2>", N),
    row(3, 6, 2, "U + U(3) + E8", "U + E6 + A2 + <-2>", N),
    row(3, 6, 4, "U^2 + A2^4", "U + A2^4 + <-2>", N),
    row(3, 6, 6, "U + U(3) + A2^4", "U(3) + A2^4 + <-2>", N),
    row(3, 5, 1, "U^2 + E6", "U + E8 + A2 + <-2>", N),
    row(3, 5, 3, "U + U(3) + E6", "U + A2^2 + E6 + <-2>", N),
    row(3, 5, 5, "U + U(3) + A2^3", "U + A2^5 + <-2>", FN),
    row(3, 4, 2, "U^2 + A2^2", "U + E6^2 + <-2>", N),
    row(3, 4, 4, "U + U(3) + A2^2", "U + E6 + A2^3 + <-2>", N),
    row(3, 3, 1, "U^2 + A2", "U + E6 + E8 + <-2>", N),
    row(3, 3, 3, "U + U(3) + A2", "U + E6^2 + A2 + <-2>", N),
    row(3, 2, 0, "U^2", "U + E8^2 + <-2>", N),
    row(3, 2, 2, "U + U(3)", "U + E6 + E8 + A2 + <-2>", N),
    row(3, 1, 1, "A2(-1)", "U + E8^2 + A2 + <-2>", N),
    row(5, 5, 1, "U + E8^2 + H5", "H5 + <-2>", NONE),
    row(5, 4, 2, "U + H5 + E8 + A4", "H5 + A4 + <-2>", NONE),
    row(5, 4, 4, "U(5) + H5 + E8 + A4", "H5 + A4*(5) + <-2>", NONE),
    row(5, 3, 1, "U + H5 + E8", "H5 + E8 + <-2>", NONE),
    row(5, 3, 3, "U + H5 + A4^2", "H5 + A4^2 + <-2>", NONE),
    row(5, 2, 2, "U + H5 + A4", "H5 + A4 + E8 + <-2>", NONE),
    row(5, 1, 1, "U + H5", "H5 + E8^2 + <-2>", NONE),
    row(7, 3, 1, "U^2 + E8 + A6", "U + K7 + <-2>", N),
    row(7, 3, 3, "U + U(7) + E8 + A6", "U(7) + K7 + <-2>", N),
    row(7, 2, 0, "U^2 + E8", "U + E8 + <-2>", N),
    row(7, 2, 2, "U + U(7) + E8", "U(7) + E8 + <-2>", N),
    row(7, 1, 1, "U^2 + K7", "U + E8 + A6 + <-2>", N),
    row(11, 2, 0, "U^2 + E8^2", "U + <-2>", N),
    row(11, 2, 2, "U + U(11) + E8^2", "U(11) + <-2>", N),
    row(11, 1, 1, "K11(-1) + E8", "U + A10 + <-2>", N),
    row(13, 1, 0, "U^2 + E8", "U + E8 + <-2>", NONE),
    row(13, 1, 1, "U + E8 + H13", "E8 + H13 + <-2>", N),
    row(17, 1, 1, "U^2 + E8 + L17", "U + L17 + <-2>", N),
    row(19, 1, 1, "K19(-1) + E8^2", "U + K19 + <-2>", N),
];

/// The row for which no geometric realization is known.
pub const NO_KNOWN_REALIZATION: (u64, u64, u64) = (13, 1, 0);

fn presentation(p: u64, m: u64, a: u64) -> Option<&'static Presentation> {
    PRESENTATIONS.iter().find(|r| (r.p, r.m, r.a) == (p, m, a))
}

/// Candidate (m, a) pairs passing the rank and length inequalities, in
/// table order (m descending, a ascending).
pub fn admissible_pairs(p: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for m in (1..=22 / (p - 1)).rev() {
        let rs = (p - 1) * m;
        if !(2..23).contains(&rs) {
            continue;
        }
        let a_max = rs.min(23 - rs).min(m);
        out.extend((0..=a_max).map(|a| (m, a)));
    }
    out
}

/// Invariants of S for the row, when an even p-elementary lattice of
/// signature (2, (p−1)m − 2) and length a exists.
pub fn coinvariant_invariants(p: u64, m: u64, a: u64) -> Result<Option<LatticeInvariants>, ClassificationError> {
    let rs = ((p - 1) * m) as usize;
    if !indefinite_p_elementary_exists(p, 2, rs - 2, a as usize)? {
        return Ok(None);
    }
    Ok(LatticeInvariants::p_elementary(p, 2, rs - 2, a as usize))
}

fn checked_name(name: &str, target: &LatticeInvariants, (p, m, a): (u64, u64, u64), which: &'static str) -> Result<LatticeExpr, EnumerationError> {
    let mismatch = || EnumerationError::PresentationMismatch { p, m, a, which, name: name.to_string() };
    let expr: LatticeExpr = name.parse().map_err(|_| mismatch())?;
    let lat = realize(&expr).map_err(ClassificationError::from)?;
    let inv = LatticeInvariants::of_lattice(&lat).map_err(ClassificationError::from)?;
    if inv.isomorphic(target).map_err(ClassificationError::from)? {
        Ok(expr)
    } else {
        Err(mismatch())
    }
}

fn build_row(p: u64, m: u64, a: u64) -> Result<Option<AdmissibleTriple>, EnumerationError> {
    let Some(s) = coinvariant_invariants(p, m, a)? else {
        return Ok(None);
    };
    let report = embed_in_l(&s)?;
    if !report.embeds {
        return Ok(None);
    }
    let chi = lefschetz_chi(p, m)?;
    let h = h_star(p, m, a)?;
    let natural_only = p == 5;
    if natural_only && natural_census_witness(p, chi, h).is_none() {
        return Ok(None);
    }
    let key = (p, m, a);
    let t = &report.orthogonal_invariants;
    let s_witness = recognize(&s, SearchBudget::default())?.ok_or(EnumerationError::Unrecognized { p, m, a, which: "S" })?;
    let t_witness = report.orthogonal_expr.clone().ok_or(EnumerationError::Unrecognized { p, m, a, which: "T" })?;
    let (s_expr, t_expr, tags) = match presentation(p, m, a) {
        Some(pr) => (checked_name(pr.s, &s, key, "S")?, checked_name(pr.t, t, key, "T")?, pr.tags.to_vec()),
        None => (s_witness.clone(), t_witness.clone(), Vec::new()),
    };
    Ok(Some(AdmissibleTriple {
        p,
        m,
        a,
        chi,
        h_star: h,
        s_expr,
        t_expr,
        s_witness,
        t_witness,
        s_unique_embedding: report.orthogonal_unique_embedding,
        t_unique_embedding: report.unique_embedding,
        t_rank: t.rank() as u64,
        moduli_dim: moduli_dimension(p, m),
        natural_only,
        tags,
        no_known_realization: key == NO_KNOWN_REALIZATION,
        exception_flag: report.exception_flag,
    }))
}

/// All rows for an odd prime, in table order. For p = 5 only rows whose
/// fixed-locus invariants are realized by some natural automorphism are kept.
pub fn enumerate_triples(p: u64) -> Result<Vec<AdmissibleTriple>, EnumerationError> {
    if !SUPPORTED_PRIMES.contains(&p) {
        return Err(EnumerationError::UnsupportedPrime(p));
    }
    let rows: Vec<Option<AdmissibleTriple>> =
        admissible_pairs(p).into_par_iter().map(|(m, a)| build_row(p, m, a)).collect::<Result<_, _>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn table_title(p: u64) -> String {
    format!("Order {p}")
}

const NATURAL_ONLY_BANNER: &str = "Natural automorphisms only: for order 5 the fixed-locus formula is established only for natural automorphisms.";

fn tag_symbols(r: &AdmissibleTriple) -> String {
    r.tags.iter().map(|t| t.symbol()).collect::<Vec<_>>().join("")
}

fn flags(r: &AdmissibleTriple) -> Vec<&'static str> {
    let mut f = Vec::new();
    if r.exception_flag {
        f.push("embedding uniqueness not settled");
    }
    if r.no_known_realization {
        f.push("no known realization");
    }
    f
}

/// Markdown table for one prime.
pub fn to_markdown(p: u64, rows: &[AdmissibleTriple]) -> String {
    let mut out = format!("## {}\n\n", table_title(p));
    if rows.iter().any(|r| r.natural_only) {
        let _ = writeln!(out, "> {NATURAL_ONLY_BANNER}\n");
    }
    out.push_str("| | p | m | a | χ | h* | S | T | notes |\n|---|---|---|---|---|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            tag_symbols(r),
            r.p,
            r.m,
            r.a,
            r.chi,
            r.h_star,
            r.s_expr,
            r.t_expr,
            flags(r).join("; ")
        );
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CSV_HEADER: &str = "p,m,a,chi,h_star,S,T,tags,natural_only,exception,no_known_realization";

/// CSV rows (with header) for one prime.
pub fn to_csv(rows: &[AdmissibleTriple]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        let tags: Vec<String> = r.tags.iter().map(|t| format!("{t:?}").to_lowercase()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.p,
            r.m,
            r.a,
            r.chi,
            r.h_star,
            csv_field(&r.s_expr.to_string()),
            csv_field(&r.t_expr.to_string()),
            tags.join(";"),
            r.natural_only,
            r.exception_flag,
            r.no_known_realization
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas() {
        assert_eq!(h_star(3, 11, 1).unwrap(), 67);
        assert_eq!(h_star(7, 2, 0).unwrap(), 117);
        assert_eq!(h_star(5, 5, 1).unwrap(), 31);
        assert_eq!(lefschetz_chi(3, 11).unwrap(), 27);
        assert_eq!(lefschetz_chi(11, 1).unwrap(), 104);
        assert_eq!(lefschetz_chi(3, 1).unwrap(), 252);
        assert!(matches!(lefschetz_chi(3, 3), Ok(135)));
    }

    #[test]
    fn trace_assembles_to_chi() {
        assert_eq!(h4_trace(11, 1), 45);
        assert_eq!(2 + 2 * (1 - 11) + h4_trace(11, 1), 27);
        assert_eq!(h4_trace(4, 4), 0);
        assert_eq!(2 + 2 * (13 - 1) + h4_trace(1, 13), 104);
    }

    #[test]
    fn moduli() {
        assert_eq!(moduli_dimension(3, 11), 10);
        assert_eq!(moduli_dimension(3, 5), 4);
        assert_eq!(moduli_dimension(2, 2), 0);
    }

    #[test]
    fn order_19() {
        let rows = enumerate_triples(19).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!((r.m, r.a, r.chi, r.h_star), (1, 1, 20, 20));
        assert_eq!(r.s_expr.to_string(), "K19(-1) + E8^2");
        assert_eq!(r.t_expr.to_string(), "U + K19 + <-2>");
        assert_eq!(to_csv(&rows).lines().nth(1).unwrap(), "19,1,1,20,20,K19(-1) + E8^2,U + K19 + <-2>,natural,false,false,false");
    }

    #[test]
    fn order_13() {
        let rows = enumerate_triples(13).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.m, r.a, r.no_known_realization)).collect();
        assert_eq!(keys, vec![(1, 0, true), (1, 1, false)]);
    }

    #[test]
    fn unsupported() {
        assert_eq!(enumerate_triples(23), Err(EnumerationError::UnsupportedPrime(23)));
        assert_eq!(enumerate_triples(2), Err(EnumerationError::UnsupportedPrime(2)));
    }
}

//! Fixed loci of natural automorphisms on the Hilbert square of a K3
//! surface, computed from the fixed locus on the K3 side, and the local
//! eigenvalue patterns allowed at a fixed point of a non-symplectic action.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::is_prime;
use crate::enumeration::{h_star, lefschetz_chi};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixedLocusError {
    #[error("expected an odd prime, got {0}")]
    NotOddPrime(u64),
    #[error("expected {expected} isolated-point counts for p = {p}, got {got}")]
    PointTypes { p: u64, expected: usize, got: usize },
}

/// Fixed locus of an order-p non-symplectic automorphism of a K3 surface:
/// at most one curve of genus g, k rational curves, and isolated points
/// counted by local type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K3FixedLocus {
    pub p: u64,
    #[serde(default)]
    pub genus_curve: Option<u32>,
    pub k: u64,
    /// Isolated points of each local type t = 0, …, p−2.
    pub n: Vec<u64>,
}

impl K3FixedLocus {
    pub fn validate(&self) -> Result<(), FixedLocusError> {
        if self.p % 2 == 0 || !is_prime(self.p) {
            return Err(FixedLocusError::NotOddPrime(self.p));
        }
        if self.n.len() > self.p as usize - 1 {
            return Err(FixedLocusError::PointTypes { p: self.p, expected: self.p as usize - 1, got: self.n.len() });
        }
        Ok(())
    }

    /// Total number of isolated points.
    pub fn points(&self) -> u64 {
        self.n.iter().sum()
    }

    /// Points of the middle type (p−1)/2; each contributes a fixed curve
    /// rather than two points on the Hilbert square.
    pub fn middle_points(&self) -> u64 {
        self.n.get((self.p as usize - 1) / 2).copied().unwrap_or(0)
    }
}

/// Counts of each kind of fixed surface.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FixedSurfaces {
    pub p1_x_p1: u64,
    pub p1_x_curve: u64,
    pub p2: u64,
    pub sym2_curve: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Hilb2FixedLocus {
    pub isolated_points: u64,
    pub rational_curves: u64,
    pub genus_g_curves: u64,
    pub genus: Option<u32>,
    pub surfaces: FixedSurfaces,
    pub chi: i64,
    pub h_star: i64,
}

/// Componentwise inventory of the fixed locus on the Hilbert square.
pub fn hilb2_census(f: &K3FixedLocus) -> Result<Hilb2FixedLocus, FixedLocusError> {
    f.validate()?;
    let n = f.points();
    let mid = f.middle_points();
    let k = f.k;
    let isolated_points = n * n.saturating_sub(1) / 2 + 2 * (n - mid);
    let rational_curves = mid + n * k + k;
    let mut out = Hilb2FixedLocus {
        isolated_points,
        rational_curves,
        genus: f.genus_curve,
        surfaces: FixedSurfaces { p1_x_p1: k * k.saturating_sub(1) / 2, p2: k, ..Default::default() },
        ..Default::default()
    };
    // points: 1 each; rational curves: 2 each; P1×P1: 4; P2: 3
    let plain = (isolated_points + 2 * rational_curves + 4 * out.surfaces.p1_x_p1 + 3 * k) as i64;
    out.chi = plain;
    out.h_star = plain;
    if let Some(g) = f.genus_curve {
        let g = g as i64;
        out.genus_g_curves = n + 1;
        out.surfaces.p1_x_curve = k;
        out.surfaces.sym2_curve = 1;
        let (curves, ki) = ((n + 1) as i64, k as i64);
        out.chi += curves * (2 - 2 * g) + ki * (4 - 4 * g) + (3 + 2 * g * g - 5 * g);
        out.h_star += curves * (2 + 2 * g) + ki * (4 + 4 * g) + (3 + 2 * g * g + 3 * g);
    }
    Ok(out)
}

/// Closed forms for χ and h* when a genus-g curve is present, in terms of
/// g, the number N of isolated points and the number k of rational curves.
pub fn census_closed_form(g: i64, n: i64, k: i64) -> (i64, i64) {
    let chi = (2 * g - 2 - n - 2 * k) * (2 * g - 5 - n - 2 * k) / 2;
    let h = (n * n + 7 * n) / 2 + 2 * n * k + 7 * k + 2 * n * g + 5 + 5 * g + 2 * k * k + 4 * k * g + 2 * g * g;
    (chi, h)
}

/// Whether a census agrees with the closed forms for the triple (p, m, a).
pub fn cross_check_against_table(f: &K3FixedLocus, p: u64, m: u64, a: u64) -> Result<bool, FixedLocusError> {
    let c = hilb2_census(f)?;
    Ok(totals_match(c.chi, c.h_star, p, m, a))
}

pub(crate) fn totals_match(chi: i64, h: i64, p: u64, m: u64, a: u64) -> bool {
    matches!((lefschetz_chi(p, m), h_star(p, m, a)), (Ok(x), Ok(y)) if x == chi && y == h)
}

/// Search for a K3 fixed locus whose Hilbert-square census has the given
/// totals. Total Betti number on the K3 side is bounded by 24.
pub fn natural_census_witness(p: u64, chi: i64, h: i64) -> Option<K3FixedLocus> {
    let make = |genus_curve, k, n: u64, mid: u64| {
        // only N and the middle count matter; park the rest on type 0
        let mut counts = vec![0; p as usize - 1];
        counts[(p as usize - 1) / 2] = mid;
        counts[0] += n - mid;
        K3FixedLocus { p, genus_curve, k, n: counts }
    };
    let genera = std::iter::once(None).chain((0..=11).map(Some));
    for genus_curve in genera {
        let curve_betti = genus_curve.map_or(0, |g| 2 + 2 * g as u64);
        for k in 0..=12u64 {
            for n in 0..=24u64 {
                if n + 2 * k + curve_betti > 24 {
                    break;
                }
                for mid in 0..=n {
                    let f = make(genus_curve, k, n, mid);
                    let c = hilb2_census(&f).ok()?;
                    if c.chi == chi && c.h_star == h {
                        return Some(f);
                    }
                }
            }
        }
    }
    None
}

/// A fixed component given directly by its Betti numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub name: &'static str,
    pub count: u64,
    pub betti: &'static [i64],
}

/// A fixed-locus inventory reported for an automorphism of the Fano
/// variety of lines of a cubic fourfold, with the triple it should match.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoFixture {
    pub label: &'static str,
    pub components: Vec<Component>,
    pub triple: (u64, u64, u64),
}

impl FanoFixture {
    pub fn chi(&self) -> i64 {
        self.components
            .iter()
            .map(|c| c.count as i64 * c.betti.iter().enumerate().map(|(i, b)| if i % 2 == 0 { *b } else { -b }).sum::<i64>())
            .sum()
    }

    pub fn h_star(&self) -> i64 {
        self.components.iter().map(|c| c.count as i64 * c.betti.iter().sum::<i64>()).sum()
    }

    pub fn matches(&self) -> bool {
        let (p, m, a) = self.triple;
        totals_match(self.chi(), self.h_star(), p, m, a)
    }
}

const POINT: &[i64] = &[1];
const RATIONAL_CURVE: &[i64] = &[1, 0, 1];
const ELLIPTIC_CURVE: &[i64] = &[1, 2, 1];
const CUBIC_SURFACE: &[i64] = &[1, 0, 7, 0, 1];
/// Fano surface of lines of a smooth cubic threefold.
const FANO_SURFACE: &[i64] = &[1, 10, 45, 10, 1];

/// The four order-3 fixtures on Fano varieties of lines.
pub fn fano_fixtures() -> Vec<FanoFixture> {
    let c = |name, count, betti| Component { name, count, betti };
    vec![
        FanoFixture { label: "fano-surface", components: vec![c("Fano surface of a cubic threefold", 1, FANO_SURFACE)], triple: (3, 11, 1) },
        FanoFixture {
            label: "cubic-surfaces",
            components: vec![c("cubic surface", 3, CUBIC_SURFACE), c("point", 27, POINT)],
            triple: (3, 5, 5),
        },
        FanoFixture { label: "elliptic-curves", components: vec![c("elliptic curve", 3, ELLIPTIC_CURVE)], triple: (3, 8, 6) },
        FanoFixture {
            label: "points-and-lines",
            components: vec![c("point", 3, POINT), c("rational curve", 3, RATIONAL_CURVE)],
            triple: (3, 7, 7),
        },
    ]
}

/// Eigenvalue exponents e (eigenvalue ξ^e) with their multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalAction {
    pub family: u8,
    pub exponents: Vec<u64>,
    pub multiplicities: Vec<u64>,
}

impl LocalAction {
    /// Dimension of the fixed component through the point.
    pub fn fixed_dimension(&self) -> u64 {
        self.exponents.iter().zip(&self.multiplicities).filter(|(e, _)| **e == 0).map(|(_, m)| m).sum()
    }

    /// The sum of exponents weighted by multiplicity; the symplectic form
    /// scales by ξ, so this must be ≡ 2 mod p.
    pub fn pfaffian_ok(&self, p: u64) -> bool {
        self.exponents.iter().zip(&self.multiplicities).map(|(e, m)| e * m).sum::<u64>() % p == 2 % p
    }
}

/// All linearized actions at a fixed point of an order-p non-symplectic
/// automorphism of a holomorphic symplectic fourfold.
pub fn enumerate_local_actions(p: u64) -> Result<Vec<LocalAction>, FixedLocusError> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(FixedLocusError::NotOddPrime(p));
    }
    let mut out = Vec::new();
    for a in 0..=2 {
        let b = 4 - 2 * a;
        out.push(LocalAction { family: 1, exponents: vec![0, 1, (p + 1) / 2], multiplicities: vec![a, a, b] });
    }
    // ξ^i paired with ξ^(1-i); each unordered pair listed once, and b = 0
    // reproduces the first family.
    for i in 2..p {
        let j = (p + 1 - i) % p;
        if (2 * i) % p == 1 || j < i {
            continue;
        }
        for a in 0..=1 {
            out.push(LocalAction { family: 2, exponents: vec![0, 1, i, j], multiplicities: vec![a, a, 2 - a, 2 - a] });
        }
    }
    out.retain(|x| x.pfaffian_ok(p));
    Ok(out)
}

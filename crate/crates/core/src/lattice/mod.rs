//! Even lattices, the named catalog, and discriminant groups.

mod expr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::forms::{FiniteQuadraticForm, FormError};
use crate::matrix::{det_exact, signature_of_symmetric, smith_normal_form, IntMatrix, MatrixError};

pub use expr::{Atom, LatticeExpr, RootType, Summand};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("Gram matrix is not even (diagonal entry {index} is odd)")]
    NotEven { index: usize },
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("invalid catalog parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse lattice expression: {0}")]
    Parse(String),
    #[error("discriminant group too large (invariant factor {0})")]
    GroupTooLarge(String),
}

/// An even nondegenerate lattice given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    expr: Option<LatticeExpr>,
}

/// The discriminant group L^∨/L with generators in the ambient basis.
#[derive(Clone, Debug)]
pub struct DiscriminantData {
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<Vec<BigRational>>,
    pub form: FiniteQuadraticForm,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(MatrixError::NotSquare { rows: gram.rows(), cols: gram.cols() }.into());
        }
        if !gram.is_symmetric() {
            return Err(MatrixError::NotSymmetric.into());
        }
        if let Some(index) = (0..gram.rows()).find(|&i| gram.get(i, i).is_odd()) {
            return Err(LatticeError::NotEven { index });
        }
        if det_exact(&gram)?.is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(Lattice { gram, expr: None })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    pub fn with_expr(mut self, expr: LatticeExpr) -> Self {
        self.expr = Some(expr);
        self
    }

    /// The rank-0 lattice.
    pub fn zero() -> Self {
        Lattice { gram: IntMatrix::zeros(0, 0), expr: None }
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn expr(&self) -> Option<&LatticeExpr> {
        self.expr.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn signature(&self) -> (usize, usize) {
        signature_of_symmetric(&self.gram).expect("validated nondegenerate")
    }

    pub fn det(&self) -> BigInt {
        det_exact(&self.gram).expect("square")
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice { gram: self.gram.block_diag(&other.gram), expr: None }
    }

    /// L(t): the form multiplied by t.
    pub fn twist(&self, t: i64) -> Result<Lattice, LatticeError> {
        if t == 0 {
            return Err(LatticeError::InvalidParameter("twist by zero".into()));
        }
        Ok(Lattice { gram: self.gram.scale(&BigInt::from(t)), expr: None })
    }

    pub fn discriminant_data(&self) -> Result<DiscriminantData, LatticeError> {
        discriminant_data_of_gram(&self.gram)
    }

    pub fn discriminant_form(&self) -> Result<FiniteQuadraticForm, LatticeError> {
        Ok(self.discriminant_data()?.form)
    }

    /// (is p-elementary, length of A_L). The trivial group counts as
    /// p-elementary for every p.
    pub fn is_p_elementary(&self, p: u64) -> Result<(bool, usize), LatticeError> {
        let f = self.discriminant_data()?.invariant_factors;
        Ok((f.iter().all(|&d| d == p), f.len()))
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).is_even())
    }
}

/// Discriminant data from a symmetric nondegenerate integer Gram matrix.
pub fn discriminant_data_of_gram(gram: &IntMatrix) -> Result<DiscriminantData, LatticeError> {
    let n = gram.rows();
    let smith = smith_normal_form(gram);
    let mut invariant_factors = Vec::new();
    let mut generators = Vec::new();
    for (i, d) in smith.invariant_factors().into_iter().enumerate() {
        if d.is_zero() {
            return Err(LatticeError::Degenerate);
        }
        if d.is_one() {
            continue;
        }
        let dd = d.to_u64().ok_or_else(|| LatticeError::GroupTooLarge(d.to_string()))?;
        invariant_factors.push(dd);
        // column i of V scaled by 1/d_i, reduced into [0, 1)
        let g: Vec<BigRational> = (0..n)
            .map(|r| {
                let x = BigRational::new(smith.right.get(r, i).clone(), d.clone());
                &x - x.floor()
            })
            .collect();
        generators.push(g);
    }
    let pair = |x: &[BigRational], y: &[BigRational]| -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !y[j].is_zero() && !gram.get(i, j).is_zero() {
                    acc += &x[i] * &y[j] * BigRational::from_integer(gram.get(i, j).clone());
                }
            }
        }
        acc
    };
    let to_small = |x: BigRational, m: i64| -> Result<Rational64, LatticeError> {
        let m = BigRational::from_integer(BigInt::from(m));
        let r = &x - (&x / &m).floor() * &m;
        let (num, den) = (r.numer().to_i64(), r.denom().to_i64());
        match (num, den) {
            (Some(a), Some(b)) => Ok(Rational64::new(a, b)),
            _ => Err(LatticeError::GroupTooLarge(r.to_string())),
        }
    };
    let k = generators.len();
    let mut q = Vec::with_capacity(k);
    let mut b = vec![vec![Rational64::zero(); k]; k];
    for i in 0..k {
        q.push(to_small(pair(&generators[i], &generators[i]), 2)?);
        for j in i..k {
            let v = to_small(pair(&generators[i], &generators[j]), 1)?;
            b[i][j] = v;
            b[j][i] = v;
        }
    }
    let form = FiniteQuadraticForm::new(invariant_factors.clone(), q, b)?;
    Ok(DiscriminantData { invariant_factors, generators, form })
}

pub fn discriminant_form_of_gram(gram: &IntMatrix) -> Result<FiniteQuadraticForm, LatticeError> {
    Ok(discriminant_data_of_gram(gram)?.form)
}

fn cartan_neg(n: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g.set(i, i, BigInt::from(-2));
    }
    for &(i, j) in edges {
        g.set(i, j, BigInt::one());
        g.set(j, i, BigInt::one());
    }
    g
}

/// Gram matrix of a root lattice (negative definite).
pub fn root_gram(kind: RootType, n: u32) -> Result<IntMatrix, LatticeError> {
    let k = n as usize;
    let chain = |len: usize| (0..len.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    match kind {
        RootType::A if k >= 1 => Ok(cartan_neg(k, &chain(k))),
        RootType::D if k >= 4 => {
            let mut e = chain(k - 1);
            e.push((k - 3, k - 1));
            Ok(cartan_neg(k, &e))
        }
        RootType::E if (6..=8).contains(&k) => {
            // branch node attached to the third node of the long chain
            let mut e = chain(k - 1);
            e.push((2, k - 1));
            Ok(cartan_neg(k, &e))
        }
        _ => Err(LatticeError::InvalidParameter(format!("{kind:?}{n}"))),
    }
}

/// Untwisted Gram matrix of a catalog atom.
pub fn catalog(atom: &Atom) -> Result<IntMatrix, LatticeError> {
    use crate::arith::is_prime;
    let rows = |r: &[Vec<i64>]| IntMatrix::from_rows(r).map_err(LatticeError::from);
    match *atom {
        Atom::U => rows(&[vec![0, 1], vec![1, 0]]),
        Atom::Root(kind, n) => root_gram(kind, n),
        Atom::Cyclic(n) => {
            if n == 0 || n % 2 != 0 {
                return Err(LatticeError::InvalidParameter(format!("<{n}> is not even and nonzero")));
            }
            rows(&[vec![n]])
        }
        Atom::K(p) => {
            if !is_prime(p) || p % 4 != 3 {
                return Err(LatticeError::InvalidParameter(format!("K{p} needs a prime p ≡ 3 mod 4")));
            }
            rows(&[vec![-((p as i64 + 1) / 2), 1], vec![1, -2]])
        }
        Atom::H(p) => {
            if !is_prime(p) || p % 4 != 1 {
                return Err(LatticeError::InvalidParameter(format!("H{p} needs a prime p ≡ 1 mod 4")));
            }
            rows(&[vec![(p as i64 - 1) / 2, 1], vec![1, -2]])
        }
        Atom::L17 => rows(&[vec![-2, 1, 0, 1], vec![1, -2, 0, 0], vec![0, 0, -2, 1], vec![1, 0, 1, -4]]),
        Atom::Dual(kind, n) => {
            // t·G^{-1} is integral for t = |det G|; the twist rescales from there
            let g = root_gram(kind, n)?;
            let det = det_exact(&g)?.abs();
            let inv = g.to_rational().inverse()?;
            inv.scale(&BigRational::from_integer(det))
                .to_integer()
                .ok_or_else(|| LatticeError::InvalidParameter("dual not integral".into()))
        }
    }
}

/// Smallest positive t for which t·G^{-1} of a root lattice is even.
pub fn dual_twist(kind: RootType, n: u32) -> Result<i64, LatticeError> {
    let inv = root_gram(kind, n)?.to_rational().inverse()?;
    (1..=64)
        .find(|&t| {
            inv.scale(&BigRational::from_integer(BigInt::from(t)))
                .to_integer()
                .is_some_and(|m| (0..m.rows()).all(|i| m.get(i, i).is_even()))
        })
        .ok_or_else(|| LatticeError::InvalidParameter(format!("{kind}{n}* has no even rescaling")))
}

/// Realize one summand with its twist (dual atoms are scaled from G^{-1}).
pub fn realize_summand(s: &Summand) -> Result<Lattice, LatticeError> {
    let gram = match s.atom {
        Atom::Dual(kind, n) => {
            let g = root_gram(kind, n)?;
            let inv = g.to_rational().inverse()?;
            inv.scale(&BigRational::from_integer(BigInt::from(s.twist)))
                .to_integer()
                .ok_or_else(|| LatticeError::InvalidParameter(format!("{} is not integral", s)))?
        }
        _ => catalog(&s.atom)?.scale(&BigInt::from(s.twist)),
    };
    let one = Lattice::new(gram).map_err(|e| match e {
        LatticeError::NotEven { .. } => LatticeError::InvalidParameter(format!("{s} is not even")),
        other => other,
    })?;
    let mut out = Lattice::zero();
    for _ in 0..s.mult {
        out = out.direct_sum(&one);
    }
    Ok(out)
}

/// Realize an expression as a lattice, tagged with the expression.
pub fn realize(e: &LatticeExpr) -> Result<Lattice, LatticeError> {
    let mut out = Lattice::zero();
    for s in &e.summands {
        out = out.direct_sum(&realize_summand(s)?);
    }
    Ok(out.with_expr(e.clone()))
}

/// Named building blocks exercised by the invariant sweeps.
pub const CATALOG: &[&str] = &[
    "U", "U(2)", "U(3)", "U(5)", "U(7)", "U(11)", "U(13)",
    "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10",
    "D4", "D5", "D6", "D7", "D8", "E6", "E7", "E8",
    "A2*(3)", "A4*(5)", "E6*(3)", "E7*(4)", "D4*(2)",
    "K7", "K11", "K19", "H5", "H13", "L17",
    "<2>", "<-2>", "<6>", "<-6>", "<10>", "<-10>", "<14>",
    "A2(-1)", "K11(-1)", "K19(-1)",
    "U^3 + E8^2 + <-2>",
];

/// The K3^[2]-type lattice U^3 ⊕ E8^2 ⊕ ⟨-2⟩.
pub fn hk_lattice() -> Lattice {
    realize(&"U^3 + E8^2 + <-2>".parse().expect("valid expression")).expect("valid lattice")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(s: &str) -> Lattice {
        realize(&s.parse().unwrap()).unwrap()
    }

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn catalog_determinants() {
        for (name, det) in [("A2", 3), ("A4", 5), ("D4", 4), ("E6", 3), ("E7", -2), ("E8", 1), ("K7", 7), ("H13", -13), ("L17", 17), ("U", -1)] {
            assert_eq!(lat(name).det(), BigInt::from(det), "{name}");
        }
        assert_eq!(catalog(&Atom::K(3)).unwrap(), root_gram(RootType::A, 2).unwrap());
        assert_eq!(catalog(&Atom::H(13)).unwrap(), IntMatrix::from_rows(&[vec![6, 1], vec![1, -2]]).unwrap());
    }

    #[test]
    fn even_dual_twists() {
        assert_eq!(dual_twist(RootType::A, 2).unwrap(), 3);
        assert_eq!(dual_twist(RootType::A, 3).unwrap(), 8);
        assert_eq!(dual_twist(RootType::A, 4).unwrap(), 5);
        assert_eq!(dual_twist(RootType::D, 4).unwrap(), 2);
        assert_eq!(dual_twist(RootType::D, 5).unwrap(), 8);
        assert_eq!(dual_twist(RootType::E, 6).unwrap(), 3);
        assert_eq!(dual_twist(RootType::E, 7).unwrap(), 4);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(catalog(&Atom::K(5)), Err(LatticeError::InvalidParameter(_))));
        assert!(matches!(catalog(&Atom::H(7)), Err(LatticeError::InvalidParameter(_))));
        assert!(catalog(&Atom::Root(RootType::D, 3)).is_err());
        assert!(catalog(&Atom::Root(RootType::E, 9)).is_err());
        assert!(Lattice::from_rows(&[vec![1]]).is_err());
        assert!(Lattice::from_rows(&[vec![2, 1], vec![1, 0]]).is_ok());
        assert_eq!(Lattice::from_rows(&[vec![2, 2], vec![2, 2]]), Err(LatticeError::Degenerate));
    }

    #[test]
    fn e6_dual_three() {
        let l = lat("E6*(3)");
        assert_eq!(l.rank(), 6);
        assert_eq!(l.signature(), (0, 6));
        assert_eq!(l.det(), BigInt::from(243));
        let q = l.discriminant_form().unwrap();
        let target = FiniteQuadraticForm::diagonal(&vec![(3, r(2, 3)); 5]).unwrap();
        assert!(crate::forms::forms_isomorphic(&q, &target).unwrap());
    }

    #[test]
    fn a2_generator_and_value() {
        let d = lat("A2").discriminant_data().unwrap();
        assert_eq!(d.invariant_factors, vec![3]);
        assert_eq!(d.form.q_value(0), r(4, 3));
        // oracle: the generator pairs integrally with the basis
        let g = &d.generators[0];
        let gram = lat("A2").gram().clone();
        for j in 0..2 {
            let s: BigRational = (0..2).map(|i| &g[i] * BigRational::from_integer(gram.get(i, j).clone())).sum();
            assert!(s.is_integer());
        }
    }

    #[test]
    fn minus_two_and_hk_lattice() {
        let q = lat("<-2>").discriminant_form().unwrap();
        assert_eq!(q, FiniteQuadraticForm::cyclic(2, r(3, 2)).unwrap());
        let l = hk_lattice();
        assert_eq!(l.signature(), (3, 20));
        assert_eq!(l.det().abs(), BigInt::from(2));
        assert_eq!(l.discriminant_form().unwrap(), FiniteQuadraticForm::cyclic(2, r(3, 2)).unwrap());
    }

    #[test]
    fn p_elementary_reports() {
        assert_eq!(lat("U(3)").is_p_elementary(3).unwrap(), (true, 2));
        assert_eq!(lat("L17").is_p_elementary(17).unwrap(), (true, 1));
        assert_eq!(lat("<6>").is_p_elementary(3).unwrap(), (false, 1));
        assert_eq!(lat("U").is_p_elementary(7).unwrap(), (true, 0));
        assert_eq!(lat("A2 + A2").is_p_elementary(3).unwrap(), (true, 2));
    }

    #[test]
    fn twists() {
        assert_eq!(lat("U(3)").det(), BigInt::from(-9));
        assert_eq!(lat("A2(-1)").signature(), (2, 0));
        assert_eq!(lat("-A2").gram(), lat("A2(-1)").gram());
        assert_eq!(lat("U(1)").gram(), lat("U").gram());
    }

    #[test]
    fn a4_dual_five() {
        let l = lat("A4*(5)");
        assert_eq!(l.is_p_elementary(5).unwrap(), (true, 3));
        assert!(l.is_even());
        assert!(realize(&"A4*(2)".parse().unwrap()).is_err());
    }
}

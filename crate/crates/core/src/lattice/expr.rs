//! Symbolic lattice expressions such as `U^2 + E8 + A2(-1)`.
//!
//! Grammar: summands joined by `+`, each `ATOM['(' INT ')']['^' INT]`;
//! an optional leading `-` negates the whole expression. Atoms are `U`,
//! `A<k>`, `D<k>`, `E6|E7|E8`, `<n>`, `K<p>`, `H<p>`, `L17`, and dual
//! root lattices `A<k>*`, `D<k>*`, `E<k>*` (twist mandatory, e.g.
//! `E6*(3)`; `E6dual3` is accepted as an alias).

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::LatticeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootType {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    U,
    Root(RootType, u32),
    /// ⟨n⟩ for even nonzero n.
    Cyclic(i64),
    K(u64),
    H(u64),
    L17,
    /// Dual of a root lattice; the twist rescales the inverse Gram matrix.
    Dual(RootType, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Summand {
    pub atom: Atom,
    pub twist: i64,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LatticeExpr {
    pub summands: Vec<Summand>,
}

impl Summand {
    pub fn new(atom: Atom, twist: i64, mult: u32) -> Self {
        Summand { atom, twist, mult }
    }
}

impl LatticeExpr {
    pub fn new(summands: Vec<Summand>) -> Self {
        LatticeExpr { summands }
    }

    /// Total number of summands counting multiplicity.
    pub fn count(&self) -> u32 {
        self.summands.iter().map(|s| s.mult).sum()
    }

    pub fn negate(&self) -> Self {
        LatticeExpr { summands: self.summands.iter().map(|s| Summand { twist: -s.twist, ..*s }).collect() }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            RootType::A => "A",
            RootType::D => "D",
            RootType::E => "E",
        };
        f.write_str(c)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::U => write!(f, "U"),
            Atom::Root(k, n) => write!(f, "{k}{n}"),
            Atom::Cyclic(n) => write!(f, "<{n}>"),
            Atom::K(p) => write!(f, "K{p}"),
            Atom::H(p) => write!(f, "H{p}"),
            Atom::L17 => write!(f, "L17"),
            Atom::Dual(k, n) => write!(f, "{k}{n}*"),
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.atom)?;
        if self.twist != 1 {
            write!(f, "({})", self.twist)?;
        }
        if self.mult != 1 {
            write!(f, "^{}", self.mult)?;
        }
        Ok(())
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for LatticeExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn err(msg: impl Into<String>) -> LatticeError {
    LatticeError::Parse(msg.into())
}

fn parse_int<T: FromStr>(s: &str, what: &str) -> Result<T, LatticeError> {
    s.parse().map_err(|_| err(format!("bad {what} '{s}'")))
}

fn parse_summand(text: &str) -> Result<Summand, LatticeError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty summand"));
    }
    if s == "E6dual3" {
        return Ok(Summand::new(Atom::Dual(RootType::E, 6), 3, 1));
    }
    // split off multiplicity, then twist
    let (body, mult) = match s.rsplit_once('^') {
        Some((b, m)) => (b, parse_int::<u32>(m, "multiplicity")?),
        None => (s.as_str(), 1),
    };
    if mult == 0 {
        return Err(err("multiplicity must be positive"));
    }
    let (name, twist) = if body.ends_with(')') {
        let open = body.rfind('(').ok_or_else(|| err(format!("unbalanced parenthesis in '{body}'")))?;
        (&body[..open], parse_int::<i64>(&body[open + 1..body.len() - 1], "twist")?)
    } else {
        (body, 1)
    };
    if twist == 0 {
        return Err(err("twist must be nonzero"));
    }
    let atom = parse_atom(name)?;
    Ok(Summand::new(atom, twist, mult))
}

fn parse_atom(name: &str) -> Result<Atom, LatticeError> {
    if let Some(inner) = name.strip_prefix('<') {
        let n = inner.strip_suffix('>').ok_or_else(|| err(format!("unterminated '{name}'")))?;
        return Ok(Atom::Cyclic(parse_int(n, "cyclic entry")?));
    }
    if name == "U" {
        return Ok(Atom::U);
    }
    if name == "L17" {
        return Ok(Atom::L17);
    }
    let (name, dual) = match name.strip_suffix('*') {
        Some(n) => (n, true),
        None => (name, false),
    };
    let mut chars = name.chars();
    let head = chars.next().ok_or_else(|| err("empty atom"))?;
    let rest = chars.as_str();
    if rest.is_empty() {
        return Err(err(format!("missing index in '{name}'")));
    }
    let root = match head {
        'A' => Some(RootType::A),
        'D' => Some(RootType::D),
        'E' => Some(RootType::E),
        _ => None,
    };
    match (head, root, dual) {
        (_, Some(k), false) => Ok(Atom::Root(k, parse_int(rest, "index")?)),
        (_, Some(k), true) => Ok(Atom::Dual(k, parse_int(rest, "index")?)),
        ('K', None, false) => Ok(Atom::K(parse_int(rest, "prime")?)),
        ('H', None, false) => Ok(Atom::H(parse_int(rest, "prime")?)),
        _ => Err(err(format!("unknown atom '{name}'"))),
    }
}

impl FromStr for LatticeExpr {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, LatticeError> {
        let t = s.trim();
        let (negate, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, t),
        };
        let body = match (negate, body.strip_prefix('(').and_then(|b| b.strip_suffix(')'))) {
            (true, Some(inner)) => inner,
            _ => body,
        };
        if body.is_empty() {
            return Err(err("empty expression"));
        }
        let summands = split_top_level(body)
            .into_iter()
            .map(parse_summand)
            .collect::<Result<Vec<_>, _>>()?;
        let e = LatticeExpr { summands };
        Ok(if negate { e.negate() } else { e })
    }
}

/// Split on '+' outside parentheses/brackets (`<+2>` never occurs but `(+3)` might).
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '<' => depth += 1,
            ')' | '>' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        for s in ["U^2 + E8^2 + A2", "U + U(3) + E6 + E8", "<6> + E6*(3)", "K19(-1) + E8^2", "U + A10 + <-2>", "H5 + A4*(5) + <-2>", "A2(-1)", "L17"] {
            let e: LatticeExpr = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
    }

    #[test]
    fn aliases_and_negation() {
        let e: LatticeExpr = "E6dual3".parse().unwrap();
        assert_eq!(e.to_string(), "E6*(3)");
        let n: LatticeExpr = "-A2".parse().unwrap();
        assert_eq!(n.to_string(), "A2(-1)");
        let n: LatticeExpr = "-(A2 + U)".parse().unwrap();
        assert_eq!(n.to_string(), "A2(-1) + U(-1)");
        let e: LatticeExpr = "U^2+E8+A2(1)".parse().unwrap();
        assert_eq!(e.to_string(), "U^2 + E8 + A2");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "X3", "A", "U^0", "U(0)", "A2(", "<3", "K"] {
            assert!(s.parse::<LatticeExpr>().is_err(), "{s}");
        }
    }
}

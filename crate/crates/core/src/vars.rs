//! Variables, subsets and atom indices.
//!
//! Subsets of `{X,Y,Z,U}` are 4-bit masks with `X` = bit 0, `Y` = bit 1,
//! `Z` = bit 2, `U` = bit 3. Atoms are indexed by the bit-string `ijkl`
//! read as a binary number, with `X` the leftmost (most significant) bit,
//! so atom `0110` has index 6.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
    U = 3,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::Z, Var::U];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn letter(self) -> char {
        ['X', 'Y', 'Z', 'U'][self.index()]
    }

    pub fn from_letter(c: char) -> Option<Var> {
        match c {
            'X' => Some(Var::X),
            'Y' => Some(Var::Y),
            'Z' => Some(Var::Z),
            'U' => Some(Var::U),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A subset of `{X,Y,Z,U}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u8);

impl Subset {
    pub const EMPTY: Subset = Subset(0);
    pub const FULL: Subset = Subset(0b1111);

    pub fn from_bits(bits: u8) -> Subset {
        assert!(bits < 16, "subset mask out of range: {bits}");
        Subset(bits)
    }

    pub fn of(vars: &[Var]) -> Subset {
        Subset(vars.iter().fold(0, |m, v| m | (1 << v.index())))
    }

    pub fn singleton(v: Var) -> Subset {
        Subset(1 << v.index())
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 & (1 << v.index()) != 0
    }

    pub fn with(self, v: Var) -> Subset {
        Subset(self.0 | (1 << v.index()))
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn complement(self) -> Subset {
        Subset(!self.0 & 0b1111)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Members in variable order.
    pub fn vars(self) -> impl Iterator<Item = Var> {
        Var::ALL.into_iter().filter(move |v| self.contains(*v))
    }

    /// All 16 subsets in mask order.
    pub fn all() -> impl Iterator<Item = Subset> {
        (0..16u8).map(Subset)
    }

    /// All subsets of `self`, including `∅` and `self`.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        Subset::all().filter(move |s| s.is_subset_of(self))
    }

    pub fn map(self, perm: &VarPerm) -> Subset {
        Subset::of(&self.vars().map(|v| perm.apply(v)).collect::<Vec<_>>())
    }
}

impl fmt::Display for Subset {
    /// Letters in variable order, e.g. `XZU`; the empty set prints as nothing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.vars() {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Subset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Subset> {
        let mut out = Subset::EMPTY;
        for c in s.chars().filter(|c| !c.is_whitespace() && *c != ',' && *c != '∅') {
            let v = Var::from_letter(c).ok_or_else(|| Error::Parse(format!("unknown variable {c:?} in {s:?}")))?;
            out = out.with(v);
        }
        Ok(out)
    }
}

/// Number of atoms of a joint table of four binary variables.
pub const NUM_ATOMS: usize = 16;

/// State (0 or 1) of `v` in atom `atom`.
pub fn atom_state(atom: usize, v: Var) -> usize {
    (atom >> (3 - v.index())) & 1
}

/// Four-character bit-string of an atom, e.g. `"0110"`.
pub fn atom_name(atom: usize) -> String {
    format!("{atom:04b}")
}

pub fn parse_atom_name(s: &str) -> Result<usize> {
    if s.len() != 4 || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::Parse(format!("atom name must be a 4-character bit-string, got {s:?}")));
    }
    Ok(usize::from_str_radix(s, 2).expect("validated bit-string"))
}

/// Atom index from the states of `X, Y, Z, U`.
pub fn atom_index(states: [usize; 4]) -> usize {
    states.iter().fold(0, |acc, s| (acc << 1) | (s & 1))
}

/// A permutation of the four variables; `map[v]` is the image of `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarPerm {
    map: [Var; 4],
}

impl VarPerm {
    pub fn identity() -> VarPerm {
        VarPerm { map: Var::ALL }
    }

    /// Panics unless `map` is a permutation.
    pub fn new(map: [Var; 4]) -> VarPerm {
        let mut seen = [false; 4];
        for v in map {
            assert!(!seen[v.index()], "not a permutation: {map:?}");
            seen[v.index()] = true;
        }
        VarPerm { map }
    }

    pub fn swap(a: Var, b: Var) -> VarPerm {
        let mut map = Var::ALL;
        map.swap(a.index(), b.index());
        VarPerm { map }
    }

    pub fn apply(&self, v: Var) -> Var {
        self.map[v.index()]
    }

    pub fn compose(&self, then: &VarPerm) -> VarPerm {
        VarPerm { map: self.map.map(|v| then.apply(v)) }
    }

    /// Image of an atom index when variable `v` is renamed to `apply(v)`.
    pub fn apply_atom(&self, atom: usize) -> usize {
        let mut states = [0; 4];
        for v in Var::ALL {
            states[self.apply(v).index()] = atom_state(atom, v);
        }
        atom_index(states)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_bits_follow_xyzu_order() {
        assert_eq!(parse_atom_name("0110").unwrap(), 6);
        assert_eq!(atom_state(6, Var::X), 0);
        assert_eq!(atom_state(6, Var::Y), 1);
        assert_eq!(atom_state(6, Var::Z), 1);
        assert_eq!(atom_state(6, Var::U), 0);
        assert_eq!(atom_name(11), "1011");
        assert_eq!(atom_index([1, 0, 1, 1]), 11);
        assert!(parse_atom_name("012").is_err());
    }

    #[test]
    fn subset_masks() {
        let zu = Subset::of(&[Var::Z, Var::U]);
        assert_eq!(zu.bits(), 0b1100);
        assert_eq!(zu.to_string(), "ZU");
        assert_eq!("UZ".parse::<Subset>().unwrap(), zu);
        assert_eq!(Subset::FULL.subsets().count(), 16);
        assert_eq!(zu.complement(), Subset::of(&[Var::X, Var::Y]));
    }

    #[test]
    fn swap_moves_atoms() {
        let xy = VarPerm::swap(Var::X, Var::Y);
        // 1011 -> 0111
        assert_eq!(xy.apply_atom(0b1011), 0b0111);
        assert_eq!(xy.compose(&xy), VarPerm::identity());
    }
}

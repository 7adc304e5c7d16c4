//! Exact rational joint distributions of four binary random variables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vars::{atom_name, atom_state, parse_atom_name, Subset, Var, VarPerm, NUM_ATOMS};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"num/den"` or `"num"`; non-canonical input is normalized.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => {
            (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?)
        }
        None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A validated 2×2×2×2 table of atomic probabilities `p_ijkl`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JointTable {
    atoms: [Rational; NUM_ATOMS],
}

impl JointTable {
    /// Validates non-negativity and exact normalization.
    pub fn new(atoms: [Rational; NUM_ATOMS]) -> Result<JointTable> {
        for (i, p) in atoms.iter().enumerate() {
            if p.is_negative() {
                return Err(Error::NegativeAtom { atom: atom_name(i), value: p.to_string() });
            }
        }
        let sum: Rational = atoms.iter().sum();
        if !sum.is_one() {
            return Err(Error::NotNormalized { sum: sum.to_string() });
        }
        Ok(JointTable { atoms })
    }

    pub fn from_slice(atoms: &[Rational]) -> Result<JointTable> {
        let arr: [Rational; NUM_ATOMS] =
            atoms.to_vec().try_into().map_err(|v: Vec<_>| Error::WrongAtomCount(v.len()))?;
        JointTable::new(arr)
    }

    pub fn uniform() -> JointTable {
        JointTable { atoms: std::array::from_fn(|_| rat(1, 16)) }
    }

    pub fn atoms(&self) -> &[Rational; NUM_ATOMS] {
        &self.atoms
    }

    pub fn atom(&self, index: usize) -> &Rational {
        &self.atoms[index]
    }

    /// `P(X=i, Y=j, Z=k, U=l)`.
    pub fn p(&self, i: usize, j: usize, k: usize, l: usize) -> &Rational {
        &self.atoms[crate::vars::atom_index([i, j, k, l])]
    }

    pub fn support_size(&self) -> usize {
        self.atoms.iter().filter(|p| !p.is_zero()).count()
    }

    /// Least common denominator of all atoms.
    pub fn common_denominator(&self) -> BigInt {
        self.atoms.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()))
    }

    pub fn marginal(&self, vars: Subset) -> MarginalTable {
        let mut cells = vec![Rational::zero(); 1 << vars.len()];
        for (atom, p) in self.atoms.iter().enumerate() {
            cells[cell_of_atom(atom, vars)] += p;
        }
        MarginalTable { vars, cells }
    }

    /// Renames variable `v` to `perm.apply(v)`.
    pub fn permute_vars(&self, perm: &VarPerm) -> JointTable {
        let mut atoms: [Rational; NUM_ATOMS] = std::array::from_fn(|_| Rational::zero());
        for (i, p) in self.atoms.iter().enumerate() {
            atoms[perm.apply_atom(i)] = p.clone();
        }
        JointTable { atoms }
    }

    /// Exchanges the two states of `v`.
    pub fn flip_states(&self, v: Var) -> JointTable {
        let bit = 1 << (3 - v.index());
        JointTable { atoms: std::array::from_fn(|i| self.atoms[i ^ bit].clone()) }
    }

    pub fn to_f64(&self) -> [f64; NUM_ATOMS] {
        use num_traits::ToPrimitive;
        self.atoms.each_ref().map(|p| p.to_f64().expect("finite probability"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DistFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<JointTable> {
        let file: DistFile = serde_json::from_str(text)?;
        JointTable::try_from(file)
    }
}

impl fmt::Display for JointTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(if i % 4 == 0 { "\n" } else { "  " })?;
            }
            write!(f, "p{} = {}", atom_name(i), p)?;
        }
        Ok(())
    }
}

/// Position of `atom` among the cells of the marginal on `vars`: bit `k`
/// of the cell index is the state of the `k`-th member of `vars`.
pub(crate) fn cell_of_atom(atom: usize, vars: Subset) -> usize {
    vars.vars().enumerate().fold(0, |acc, (k, v)| acc | (atom_state(atom, v) << k))
}

/// Marginal distribution of the subvector `X_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalTable {
    vars: Subset,
    cells: Vec<Rational>,
}

impl MarginalTable {
    pub fn vars(&self) -> Subset {
        self.vars
    }

    /// Cells indexed so that bit `k` holds the state of the `k`-th variable of [`Self::vars`].
    pub fn cells(&self) -> &[Rational] {
        &self.cells
    }

    /// Cell for the given states of the member variables, in variable order.
    pub fn cell(&self, states: &[usize]) -> &Rational {
        assert_eq!(states.len(), self.vars.len());
        let idx = states.iter().enumerate().fold(0, |acc, (k, s)| acc | ((s & 1) << k));
        &self.cells[idx]
    }

    /// Further marginalization onto `sub ⊆ vars`.
    pub fn marginal(&self, sub: Subset) -> MarginalTable {
        assert!(sub.is_subset_of(self.vars), "{sub} is not a subset of {}", self.vars);
        let members: Vec<Var> = self.vars.vars().collect();
        let mut cells = vec![Rational::zero(); 1 << sub.len()];
        for (idx, p) in self.cells.iter().enumerate() {
            let target = sub.vars().enumerate().fold(0, |acc, (k, v)| {
                let pos = members.iter().position(|m| *m == v).expect("member");
                acc | (((idx >> pos) & 1) << k)
            });
            cells[target] += p;
        }
        MarginalTable { vars: sub, cells }
    }
}

/// On-disk form: `{"atoms": {"0000": "20/77", ...}}`, omitted atoms are 0.
#[derive(Debug, Serialize, Deserialize)]
pub struct DistFile {
    pub atoms: BTreeMap<String, String>,
}

impl From<&JointTable> for DistFile {
    fn from(t: &JointTable) -> DistFile {
        let atoms = t.atoms.iter().enumerate().map(|(i, p)| (atom_name(i), format_rational(p))).collect();
        DistFile { atoms }
    }
}

impl TryFrom<DistFile> for JointTable {
    type Error = Error;

    fn try_from(file: DistFile) -> Result<JointTable> {
        let mut atoms: [Rational; NUM_ATOMS] = std::array::from_fn(|_| Rational::zero());
        for (name, value) in &file.atoms {
            atoms[parse_atom_name(name)?] = parse_rational(value)?;
        }
        JointTable::new(atoms)
    }
}

/// The rational distribution satisfying exactly `⊥(X,Y)`, `⊥(X,Z|U)`,
/// `⊥(Y,U|Z)` and `⊥(Z,U|XY)` whose entropy vector violates Ingleton.
pub fn paper_example() -> JointTable {
    #[rustfmt::skip]
    let atoms = [
        rat(20, 77),  rat(0, 1),   rat(0, 1),    rat(0, 1),
        rat(20, 693), rat(4, 99),  rat(10, 693), rat(2, 99),
        rat(20, 693), rat(40, 99), rat(1, 693),  rat(2, 99),
        rat(0, 1),    rat(0, 1),   rat(0, 1),    rat(2, 11),
    ];
    JointTable::new(atoms).expect("reference distribution is valid")
}

/// Alias for [`JointTable::new`].
pub fn make_table(atoms: [Rational; NUM_ATOMS]) -> Result<JointTable> {
    JointTable::new(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_atoms() {
        let t = paper_example();
        assert_eq!(*t.p(0, 0, 0, 0), rat(20, 77));
        assert_eq!(*t.p(0, 1, 1, 0), rat(10, 693));
        assert_eq!(*t.p(1, 1, 0, 0), rat(0, 1));
        assert_eq!(*t.p(1, 1, 1, 1), rat(2, 11));
        assert_eq!(t.support_size(), 10);
        assert_eq!(t.common_denominator(), BigInt::from(693));
    }

    #[test]
    fn make_table_errors() {
        let zeros: [Rational; 16] = std::array::from_fn(|_| rat(0, 1));
        assert!(matches!(make_table(zeros), Err(Error::NotNormalized { .. })));

        let mut atoms: [Rational; 16] = std::array::from_fn(|_| rat(1, 16));
        atoms[0] = rat(3, 16);
        atoms[1] = rat(-1, 16);
        assert!(matches!(make_table(atoms), Err(Error::NegativeAtom { .. })));

        assert!(matches!(JointTable::from_slice(&[rat(1, 1)]), Err(Error::WrongAtomCount(1))));
        assert!(make_table(std::array::from_fn(|_| rat(1, 16))).is_ok());
    }

    #[test]
    fn marginals_of_reference_table() {
        let t = paper_example();
        let x = t.marginal(Subset::of(&[Var::X]));
        assert_eq!(*x.cell(&[0]), rat(4, 11));
        assert_eq!(*x.cell(&[1]), rat(7, 11));
        let zu = t.marginal(Subset::of(&[Var::Z, Var::U]));
        assert_eq!(*zu.cell(&[0, 0]), rat(20, 63));
        let empty = t.marginal(Subset::EMPTY);
        assert_eq!(empty.cells(), &[rat(1, 1)]);
        assert_eq!(t.marginal(Subset::FULL).cells().len(), 16);
    }

    #[test]
    fn full_marginal_reorders_to_subset_bits() {
        let t = paper_example();
        let full = t.marginal(Subset::FULL);
        // cell bit 0 = X, ..., bit 3 = U
        assert_eq!(*full.cell(&[1, 0, 1, 1]), rat(2, 99));
        assert_eq!(*full.cell(&[0, 1, 1, 0]), rat(10, 693));
    }

    #[test]
    fn uniform_marginal() {
        let y = JointTable::uniform().marginal(Subset::singleton(Var::Y));
        assert_eq!(y.cells(), &[rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn json_normalizes_and_defaults_to_zero() {
        let text = r#"{"atoms": {"0000": "2/4", "1111": "-3/-6"}}"#;
        let t = JointTable::from_json(text).unwrap();
        assert_eq!(*t.atom(0), rat(1, 2));
        assert_eq!(*t.atom(15), rat(1, 2));
        assert_eq!(t.support_size(), 2);
        assert!(JointTable::from_json(r#"{"atoms": {"000": "1"}}"#).is_err());
        assert!(JointTable::from_json(r#"{"atoms": {"0000": "1/0"}}"#).is_err());
    }

    #[test]
    fn json_round_trip_of_reference_table() {
        let t = paper_example();
        assert_eq!(JointTable::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn permutation_and_flip() {
        let t = paper_example();
        let swapped = t.permute_vars(&VarPerm::swap(Var::X, Var::Y));
        assert_eq!(swapped.p(0, 1, 1, 1), t.p(1, 0, 1, 1));
        let flipped = t.flip_states(Var::Z);
        assert_eq!(flipped.p(0, 0, 1, 0), t.p(0, 0, 0, 0));
    }
}

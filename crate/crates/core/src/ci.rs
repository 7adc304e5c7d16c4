//! Elementary conditional independence statements `⊥(i,j|K)`.
//!
//! CI is decided algebraically: for binary variables `⊥(i,j|K)` holds iff for
//! every assignment `k` of `K` the 2×2 matrix `P(x_i, x_j, K=k)` is singular.
//! No logarithms are involved; the entropy route (`exact_sign` of the
//! difference functional) is an independent characterization used in tests.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dist::JointTable;
use crate::entropy::LinFunctional;
use crate::error::{Error, Result};
use crate::vars::{Subset, Var, VarPerm};

/// `⊥(i,j|K)` with `i < j` and `K ∩ {i,j} = ∅`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CIStatement {
    i: Var,
    j: Var,
    k: Subset,
}

impl CIStatement {
    /// Canonicalizes the order of `i` and `j`.
    pub fn new(i: Var, j: Var, k: Subset) -> Result<CIStatement> {
        if i == j {
            return Err(Error::Parse(format!("CI statement needs distinct variables, got {i} twice")));
        }
        if k.contains(i) || k.contains(j) {
            return Err(Error::Parse(format!("conditioning set {k} overlaps {{{i},{j}}}")));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        Ok(CIStatement { i, j, k })
    }

    /// Panicking constructor for statically known statements.
    pub fn of(i: Var, j: Var, k: &[Var]) -> CIStatement {
        CIStatement::new(i, j, Subset::of(k)).expect("valid CI statement")
    }

    pub fn i(&self) -> Var {
        self.i
    }

    pub fn j(&self) -> Var {
        self.j
    }

    pub fn k(&self) -> Subset {
        self.k
    }

    /// Position in [`enumerate_elementary`].
    pub fn index(&self) -> usize {
        enumerate_elementary().iter().position(|s| s == self).expect("canonical statement")
    }

    /// `+h(iK) + h(jK) − h(ijK) − h(K)`.
    pub fn delta_functional(&self) -> LinFunctional {
        let k = self.k;
        LinFunctional::from_terms(&[
            (1, k.with(self.i)),
            (1, k.with(self.j)),
            (-1, k.with(self.i).with(self.j)),
            (-1, k),
        ])
    }

    pub fn map(&self, perm: &VarPerm) -> CIStatement {
        CIStatement::new(perm.apply(self.i), perm.apply(self.j), self.k.map(perm))
            .expect("permutation preserves validity")
    }
}

impl fmt::Display for CIStatement {
    /// `X⊥Z|U`; an empty conditioning set leaves nothing after the bar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊥{}|{}", self.i, self.j, self.k)
    }
}

impl FromStr for CIStatement {
    type Err = Error;

    /// Accepts `X⊥Z|U`, `X⊥Y|`, `X⊥Y` and the ASCII spelling `X_|_Z|U`.
    fn from_str(s: &str) -> Result<CIStatement> {
        let norm = s.trim().replace("_|_", "⊥");
        let (pair, cond) = match norm.split_once('|') {
            Some((p, c)) => (p.to_string(), c.to_string()),
            None => (norm.clone(), String::new()),
        };
        let (a, b) = pair.split_once('⊥').ok_or_else(|| Error::Parse(format!("missing ⊥ in {s:?}")))?;
        let var = |t: &str| -> Result<Var> {
            let mut cs = t.trim().chars();
            match (cs.next().and_then(Var::from_letter), cs.next()) {
                (Some(v), None) => Ok(v),
                _ => Err(Error::Parse(format!("expected a single variable, got {t:?} in {s:?}"))),
            }
        };
        CIStatement::new(var(a)?, var(b)?, cond.parse()?)
    }
}

impl Serialize for CIStatement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CIStatement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The 24 elementary statements sorted by `(i, j, K-mask)`.
pub fn enumerate_elementary() -> &'static [CIStatement; 24] {
    static ALL: OnceLock<[CIStatement; 24]> = OnceLock::new();
    ALL.get_or_init(|| {
        let mut out = Vec::with_capacity(24);
        for i in Var::ALL {
            for j in Var::ALL.into_iter().filter(|j| *j > i) {
                let rest = Subset::FULL.difference(Subset::of(&[i, j]));
                for k in rest.subsets() {
                    out.push(CIStatement { i, j, k });
                }
            }
        }
        out.try_into().expect("24 statements")
    })
}

pub fn delta_functional(s: &CIStatement) -> LinFunctional {
    s.delta_functional()
}

/// Exact CI test by vanishing 2×2 minors, one per cell of `K`.
pub fn holds_exact(t: &JointTable, s: &CIStatement) -> bool {
    let vars = s.k.with(s.i).with(s.j);
    let m = t.marginal(vars);
    let members: Vec<Var> = vars.vars().collect();
    let bit = |v: Var| 1usize << members.iter().position(|m| *m == v).expect("member");
    let (bi, bj) = (bit(s.i), bit(s.j));
    let cells = m.cells();
    (0..cells.len()).filter(|idx| idx & (bi | bj) == 0).all(|base| {
        let det = &cells[base] * &cells[base | bi | bj] - &cells[base | bi] * &cells[base | bj];
        det.is_zero()
    })
}

/// A set of elementary statements as a 24-bit mask over [`enumerate_elementary`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CIStructure(u32);

impl CIStructure {
    pub const EMPTY: CIStructure = CIStructure(0);
    pub const FULL: CIStructure = CIStructure((1 << 24) - 1);

    pub fn from_bits(bits: u32) -> CIStructure {
        assert!(bits < 1 << 24, "CI structure mask out of range");
        CIStructure(bits)
    }

    pub fn from_statements<'a>(stmts: impl IntoIterator<Item = &'a CIStatement>) -> CIStructure {
        CIStructure(stmts.into_iter().fold(0, |m, s| m | (1 << s.index())))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, s: &CIStatement) -> bool {
        self.0 & (1 << s.index()) != 0
    }

    pub fn with(self, s: &CIStatement) -> CIStructure {
        CIStructure(self.0 | (1 << s.index()))
    }

    pub fn union(self, o: CIStructure) -> CIStructure {
        CIStructure(self.0 | o.0)
    }

    pub fn is_subset_of(self, o: CIStructure) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in canonical order.
    pub fn statements(self) -> impl Iterator<Item = CIStatement> {
        enumerate_elementary().iter().enumerate().filter(move |(b, _)| self.0 & (1 << b) != 0).map(|(_, s)| *s)
    }

    pub fn map(self, perm: &VarPerm) -> CIStructure {
        CIStructure::from_statements(self.statements().map(|s| s.map(perm)).collect::<Vec<_>>().iter())
    }

    /// Parses a comma-separated statement list, e.g. `X⊥Z|U, Y⊥U|Z`.
    pub fn parse_list(text: &str) -> Result<CIStructure> {
        let stmts = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<CIStatement>>>()?;
        Ok(CIStructure::from_statements(stmts.iter()))
    }
}

impl fmt::Display for CIStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.statements().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for CIStructure {
    /// Sorted list of statement strings, in canonical statement order.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.statements())
    }
}

impl<'de> Deserialize<'de> for CIStructure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let stmts = Vec::<CIStatement>::deserialize(deserializer)?;
        Ok(CIStructure::from_statements(stmts.iter()))
    }
}

/// All statements satisfied by `t`.
pub fn ci_structure(t: &JointTable) -> CIStructure {
    CIStructure::from_statements(enumerate_elementary().iter().filter(|s| holds_exact(t, s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{paper_example, rat, Rational};
    use crate::vars::Var::{U, X, Y, Z};

    #[test]
    fn enumeration_order() {
        let all = enumerate_elementary();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0].to_string(), "X⊥Y|");
        assert_eq!(all[3].to_string(), "X⊥Y|ZU");
        assert!(all.contains(&CIStatement::of(Z, U, &[X, Y])));
        assert!(all.windows(2).all(|w| (w[0].i, w[0].j, w[0].k.bits()) < (w[1].i, w[1].j, w[1].k.bits())));
        for (b, s) in all.iter().enumerate() {
            assert_eq!(s.index(), b);
        }
    }

    #[test]
    fn delta_functionals() {
        let f = CIStatement::of(X, Y, &[]).delta_functional();
        assert_eq!(f.coeff(Subset::of(&[X])), 1);
        assert_eq!(f.coeff(Subset::of(&[Y])), 1);
        assert_eq!(f.coeff(Subset::of(&[X, Y])), -1);
        assert_eq!(f.coeff(Subset::EMPTY), -1);

        let g = CIStatement::of(X, Z, &[U]).delta_functional();
        assert_eq!(g.coeff(Subset::of(&[X, U])), 1);
        assert_eq!(g.coeff(Subset::of(&[Z, U])), 1);
        assert_eq!(g.coeff(Subset::of(&[X, Z, U])), -1);
        assert_eq!(g.coeff(Subset::of(&[U])), -1);

        for s in enumerate_elementary() {
            let f = s.delta_functional();
            assert_eq!(f.terms().count(), 4);
            assert_eq!(f.coefficients().iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn parse_and_display() {
        let s: CIStatement = "Z⊥X|U".parse().unwrap();
        assert_eq!(s, CIStatement::of(X, Z, &[U]));
        assert_eq!(s.to_string(), "X⊥Z|U");
        assert_eq!("X_|_Y".parse::<CIStatement>().unwrap().to_string(), "X⊥Y|");
        assert!("X⊥X|".parse::<CIStatement>().is_err());
        assert!("X⊥Z|Z".parse::<CIStatement>().is_err());
        assert!("XY⊥Z".parse::<CIStatement>().is_err());
    }

    #[test]
    fn reference_table_structure() {
        let t = paper_example();
        assert!(holds_exact(&t, &CIStatement::of(Z, U, &[X, Y])));
        assert!(!holds_exact(&t, &CIStatement::of(X, U, &[])));
        let got: Vec<String> = ci_structure(&t).statements().map(|s| s.to_string()).collect();
        assert_eq!(got, ["X⊥Y|", "X⊥Z|U", "Y⊥U|Z", "Z⊥U|XY"]);
    }

    #[test]
    fn product_tables_satisfy_everything() {
        // X, Y independent uniform bits; Z = U = 0 constant
        let mut atoms: [Rational; 16] = std::array::from_fn(|_| rat(0, 1));
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            atoms[crate::vars::atom_index([i, j, 0, 0])] = rat(1, 4);
        }
        let t = JointTable::new(atoms).unwrap();
        assert_eq!(ci_structure(&t), CIStructure::FULL);
        assert_eq!(ci_structure(&JointTable::uniform()), CIStructure::FULL);
    }

    #[test]
    fn structure_serializes_as_statement_list() {
        let s = ci_structure(&paper_example());
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"["X⊥Y|","X⊥Z|U","Y⊥U|Z","Z⊥U|XY"]"#);
        let back: CIStructure = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(CIStructure::parse_list("Y⊥U|Z, X⊥Z|U").unwrap().len(), 2);
    }
}

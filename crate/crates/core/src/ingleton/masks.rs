use std::fmt;

use crate::ci::{enumerate_elementary, CIStatement};
use crate::entropy::LinFunctional;
use crate::error::{Error, Result};
use crate::vars::Var::{U, X, Y, Z};
use crate::vars::VarPerm;

use super::circuits::{Circuit, INGLETON_COLUMN};
use super::ingleton_xy_zu;

/// A signed integer combination `Σ k·△(i,j|K)`, terms sorted by statement order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaCombination(Vec<(CIStatement, i64)>);

impl DeltaCombination {
    /// Merges repeated statements and drops zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (i64, CIStatement)>) -> DeltaCombination {
        let mut acc = [0i64; 24];
        for (k, s) in terms {
            acc[s.index()] += k;
        }
        let all = enumerate_elementary();
        DeltaCombination(acc.iter().enumerate().filter(|(_, k)| **k != 0).map(|(b, k)| (all[b], *k)).collect())
    }

    pub fn terms(&self) -> &[(CIStatement, i64)] {
        &self.0
    }

    pub fn expand(&self) -> LinFunctional {
        self.0.iter().fold(LinFunctional::zero(), |acc, (s, k)| acc + *k * s.delta_functional())
    }

    pub fn map(&self, perm: &VarPerm) -> DeltaCombination {
        DeltaCombination::new(self.0.iter().map(|(s, k)| (*k, s.map(perm))))
    }

    pub fn positive_terms(&self) -> usize {
        self.0.iter().filter(|(_, k)| *k > 0).count()
    }

    pub fn negative_terms(&self) -> usize {
        self.0.iter().filter(|(_, k)| *k < 0).count()
    }
}

fn delta_name(s: &CIStatement) -> String {
    if s.k().is_empty() {
        format!("△({},{})", s.i(), s.j())
    } else {
        format!("△({},{}|{})", s.i(), s.j(), s.k())
    }
}

impl fmt::Display for DeltaCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (n, (s, k)) in self.0.iter().enumerate() {
            let name = delta_name(s);
            let mag = if k.abs() == 1 { String::new() } else { format!("{}·", k.abs()) };
            match (n, *k < 0) {
                (0, false) => write!(f, "{mag}{name}")?,
                (0, true) => write!(f, "−{mag}{name}")?,
                (_, false) => write!(f, " + {mag}{name}")?,
                (_, true) => write!(f, " − {mag}{name}")?,
            }
        }
        Ok(())
    }
}

/// `left = right` as an identity of linear functionals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskIdentity {
    pub name: String,
    pub left: LinFunctional,
    pub left_label: String,
    pub right: DeltaCombination,
}

impl MaskIdentity {
    /// An identity `◻(XY|ZU) = right`.
    pub fn ingleton(name: &str, right: DeltaCombination) -> MaskIdentity {
        MaskIdentity { name: name.to_string(), left: ingleton_xy_zu(), left_label: "◻(XY|ZU)".into(), right }
    }

    pub fn verify(&self) -> bool {
        verify_identity(&self.left, &self.right)
    }

    /// Images under a variable permutation fixing the left-hand side.
    pub fn map(&self, perm: &VarPerm) -> MaskIdentity {
        debug_assert_eq!(self.left.map(perm), self.left);
        MaskIdentity { right: self.right.map(perm), ..self.clone() }
    }
}

impl fmt::Display for MaskIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.left_label, self.right)
    }
}

/// True iff `lhs` and the expanded combination have identical coefficients.
pub fn verify_identity(lhs: &LinFunctional, rhs: &DeltaCombination) -> bool {
    *lhs == rhs.expand()
}

fn st(i: crate::vars::Var, j: crate::vars::Var, k: &[crate::vars::Var]) -> CIStatement {
    CIStatement::of(i, j, k)
}

/// The five shortest masks followed by the masks for `𝓛₁` and `𝓛₂`.
pub fn known_masks() -> Vec<MaskIdentity> {
    let m = |name: &str, terms: Vec<(i64, CIStatement)>| MaskIdentity::ingleton(name, DeltaCombination::new(terms));
    vec![
        m("mask1", vec![(1, st(Z, U, &[X])), (1, st(Z, U, &[Y])), (1, st(X, Y, &[])), (-1, st(Z, U, &[]))]),
        m("mask2", vec![(1, st(Z, U, &[Y])), (1, st(X, Z, &[U])), (1, st(X, Y, &[])), (-1, st(X, Z, &[]))]),
        m("mask3", vec![(1, st(X, Y, &[Z])), (1, st(X, Z, &[U])), (1, st(Z, U, &[Y])), (-1, st(X, Z, &[Y]))]),
        m("mask4", vec![(1, st(X, Y, &[Z])), (1, st(X, Y, &[U])), (1, st(Z, U, &[X, Y])), (-1, st(X, Y, &[Z, U]))]),
        m("mask5", vec![(1, st(X, Y, &[Z])), (1, st(X, Z, &[U])), (1, st(Z, U, &[X, Y])), (-1, st(X, Z, &[Y, U]))]),
        m(
            "L1-mask",
            vec![
                (1, st(X, Y, &[Z, U])),
                (1, st(X, Z, &[U])),
                (-1, st(X, Z, &[Y, U])),
                (1, st(Y, U, &[Z])),
                (-1, st(Y, U, &[X, Z])),
                (1, st(Z, U, &[X, Y])),
            ],
        ),
        m(
            "L2-mask",
            vec![
                (1, st(X, Y, &[])),
                (-1, st(X, Z, &[])),
                (1, st(X, Z, &[U])),
                (-1, st(Y, U, &[])),
                (1, st(Y, U, &[Z])),
                (1, st(Z, U, &[])),
            ],
        ),
    ]
}

/// The score rearrangements: `◻ + (the negated terms) = (the terms killed by the model)`.
///
/// `rho1-form`: `◻ + △(X,Z|YU) + △(Y,U|XZ) − △(X,Y|ZU) = △(X,Z|U) + △(Y,U|Z) + △(Z,U|XY)`;
/// `rho2-form`: `◻ + △(X,Z) + △(Y,U) − △(Z,U) = △(X,Y) + △(X,Z|U) + △(Y,U|Z)`.
pub fn rearranged_identities() -> Vec<MaskIdentity> {
    let score1 = DeltaCombination::new([(1, st(X, Z, &[Y, U])), (1, st(Y, U, &[X, Z])), (-1, st(X, Y, &[Z, U]))]);
    let score2 = DeltaCombination::new([(1, st(X, Z, &[])), (1, st(Y, U, &[])), (-1, st(Z, U, &[]))]);
    vec![
        MaskIdentity {
            name: "rho1-form".into(),
            left: ingleton_xy_zu() + score1.expand(),
            left_label: format!("◻(XY|ZU) + {score1}"),
            right: DeltaCombination::new([(1, st(X, Z, &[U])), (1, st(Y, U, &[Z])), (1, st(Z, U, &[X, Y]))]),
        },
        MaskIdentity {
            name: "rho2-form".into(),
            left: ingleton_xy_zu() + score2.expand(),
            left_label: format!("◻(XY|ZU) + {score2}"),
            right: DeltaCombination::new([(1, st(X, Y, &[])), (1, st(X, Z, &[U])), (1, st(Y, U, &[Z]))]),
        },
    ]
}

/// Turns every support-5 circuit through the Ingleton column into an
/// identity `◻(XY|ZU) = Σ ±△`, verified before returning.
pub fn shortest_masks(cs: &[Circuit]) -> Result<Vec<MaskIdentity>> {
    let through: Vec<&Circuit> = cs.iter().filter(|c| c.coefficient(INGLETON_COLUMN) != 0).collect();
    if through.is_empty() {
        return Err(Error::NoIngletonColumn);
    }
    let min_support = through.iter().map(|c| c.support_size()).min().expect("nonempty");
    let all = enumerate_elementary();
    let mut out = Vec::new();
    for c in through.into_iter().filter(|c| c.support_size() == min_support) {
        let lead = c.coefficient(INGLETON_COLUMN);
        // lead·◻ + Σ a·△ = 0  ⇒  ◻ = Σ (−a/lead)·△
        let terms = c.entries().iter().filter(|(col, _)| *col != INGLETON_COLUMN).map(|(col, a)| {
            assert_eq!(a % lead, 0, "circuit coefficient {a} not divisible by {lead}");
            (-a / lead, all[*col])
        });
        let mask = MaskIdentity::ingleton(&format!("shortest#{}", out.len() + 1), DeltaCombination::new(terms));
        assert!(mask.verify(), "circuit does not yield a valid identity: {mask}");
        out.push(mask);
    }
    Ok(out)
}

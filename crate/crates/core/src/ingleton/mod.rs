//! Ingleton expressions, mask identities and the circuits of the 16×25
//! matrix whose columns are the 24 difference functionals and `◻(XY|ZU)`.

mod circuits;
mod masks;

pub use circuits::{circuits, column_names, functional_matrix, matrix_rank, Circuit, IntMatrix, INGLETON_COLUMN};
pub use masks::{known_masks, rearranged_identities, shortest_masks, verify_identity, DeltaCombination, MaskIdentity};

use std::collections::BTreeSet;
use std::fmt;

use crate::entropy::LinFunctional;
use crate::vars::{Subset, Var, VarPerm};

/// Labels `((A,B),(C,D))` of `◻(AB|CD)`, a permutation of `(X,Y,Z,U)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IngletonLabels {
    pub a: Var,
    pub b: Var,
    pub c: Var,
    pub d: Var,
}

impl IngletonLabels {
    /// Panics unless the four labels are distinct.
    pub fn new(a: Var, b: Var, c: Var, d: Var) -> IngletonLabels {
        VarPerm::new([a, b, c, d]);
        IngletonLabels { a, b, c, d }
    }

    pub fn xy_zu() -> IngletonLabels {
        IngletonLabels::new(Var::X, Var::Y, Var::Z, Var::U)
    }

    /// Sorts within each pair. The two pairs play different roles and are not swapped.
    pub fn canonical(self) -> IngletonLabels {
        let (a, b) = if self.a < self.b { (self.a, self.b) } else { (self.b, self.a) };
        let (c, d) = if self.c < self.d { (self.c, self.d) } else { (self.d, self.c) };
        IngletonLabels { a, b, c, d }
    }

    /// All 24 orderings of the four variables.
    pub fn all() -> Vec<IngletonLabels> {
        let mut out = Vec::new();
        for a in Var::ALL {
            for b in Var::ALL {
                for c in Var::ALL {
                    for d in Var::ALL {
                        if BTreeSet::from([a, b, c, d]).len() == 4 {
                            out.push(IngletonLabels { a, b, c, d });
                        }
                    }
                }
            }
        }
        out
    }

    /// One canonical label per distinct functional; there are six.
    pub fn distinct() -> Vec<IngletonLabels> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for l in IngletonLabels::all() {
            if seen.insert(ingleton_functional(l)) {
                out.push(l.canonical());
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for IngletonLabels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "◻({}{}|{}{})", self.a, self.b, self.c, self.d)
    }
}

/// `◻(AB|CD) = h(AC)+h(AD)+h(BC)+h(BD)+h(CD) − h(AB)−h(C)−h(D)−h(ACD)−h(BCD)`.
pub fn ingleton_functional(l: IngletonLabels) -> LinFunctional {
    let s = Subset::of;
    let IngletonLabels { a, b, c, d } = l;
    LinFunctional::from_terms(&[
        (1, s(&[a, c])),
        (1, s(&[a, d])),
        (1, s(&[b, c])),
        (1, s(&[b, d])),
        (1, s(&[c, d])),
        (-1, s(&[a, b])),
        (-1, s(&[c])),
        (-1, s(&[d])),
        (-1, s(&[a, c, d])),
        (-1, s(&[b, c, d])),
    ])
}

/// `◻(XY|ZU)`.
pub fn ingleton_xy_zu() -> LinFunctional {
    ingleton_functional(IngletonLabels::xy_zu())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Var::{U, X, Y, Z};

    #[test]
    fn xy_zu_coefficients() {
        let f = ingleton_xy_zu();
        for plus in [&[X, Z][..], &[X, U], &[Y, Z], &[Y, U], &[Z, U]] {
            assert_eq!(f.coeff(Subset::of(plus)), 1, "{plus:?}");
        }
        for minus in [&[X, Y][..], &[Z], &[U], &[X, Z, U], &[Y, Z, U]] {
            assert_eq!(f.coeff(Subset::of(minus)), -1, "{minus:?}");
        }
        assert_eq!(f.terms().count(), 10);
    }

    #[test]
    fn pair_swaps_fix_the_functional() {
        assert_eq!(ingleton_functional(IngletonLabels::new(Y, X, U, Z)), ingleton_xy_zu());
        assert_eq!(ingleton_functional(IngletonLabels::new(X, Y, U, Z)), ingleton_xy_zu());
    }

    #[test]
    fn six_distinct_functionals() {
        let set: BTreeSet<_> = IngletonLabels::all().into_iter().map(ingleton_functional).collect();
        assert_eq!(set.len(), 6);
        assert_eq!(IngletonLabels::distinct().len(), 6);
        assert_eq!(IngletonLabels::new(Y, X, U, Z).canonical(), IngletonLabels::xy_zu());
    }
}

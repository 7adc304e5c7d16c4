//! The support-constrained model of `{⊥(X,Z|U), ⊥(Y,U|Z), ⊥(Z,U|XY)}`.
//!
//! With `p0001 = p0010 = p0011 = p1100 = p1101 = p1110 = 0` the CI equations
//! resolve into a rational parametrization by `(p0110, p1011, p1111)`. Adding
//! `⊥(X,Y)` imposes one polynomial equation, quadratic in `p0110`; rational
//! solutions need its discriminant to be a rational square.

mod discriminant;
mod heatmap;
mod optimize;
mod search;

pub use discriminant::{discriminant_numerator, discriminant_polynomial, Poly2};
pub use heatmap::{heatmap, heatmap_csv, CellStatus, HeatCell, HeatmapConfig};
pub use optimize::{nelder_mead, optimize_score, NelderMeadConfig, OptimizeMode, Region};
pub use search::{is_square, search_rational, Counterexample, SearchBounds};

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dist::{JointTable, Rational};
use crate::entropy::{entropy_vector, EntropyVector, LinFunctional};
use crate::error::{Error, Result};
use crate::vars::{Subset, Var, NUM_ATOMS};

/// Minimal commutative ring interface so the model polynomials are written once
/// and evaluated over floats, exact rationals and symbolic polynomials.
pub trait Ring: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn from_int(n: i64) -> Self;
}

impl Ring for f64 {
    fn from_int(n: i64) -> f64 {
        n as f64
    }
}

impl Ring for Rational {
    fn from_int(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }
}

/// Division plus an exact zero test, needed for the parametrization itself.
pub trait Field: Ring + PartialOrd {
    fn div(self, o: Self) -> Self;
    fn is_zero_value(&self) -> bool;
}

impl Field for f64 {
    fn div(self, o: f64) -> f64 {
        self / o
    }
    fn is_zero_value(&self) -> bool {
        *self == 0.0
    }
}

impl Field for Rational {
    fn div(self, o: Rational) -> Rational {
        self / o
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

/// Parameters `(p0110, p1011, p1111)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoint<T> {
    pub p0110: T,
    pub p1011: T,
    pub p1111: T,
}

impl<T> ParamPoint<T> {
    pub fn new(p0110: T, p1011: T, p1111: T) -> ParamPoint<T> {
        ParamPoint { p0110, p1011, p1111 }
    }
}

impl ParamPoint<Rational> {
    pub fn to_f64(&self) -> ParamPoint<f64> {
        let f = |r: &Rational| r.to_f64().expect("finite");
        ParamPoint::new(f(&self.p0110), f(&self.p1011), f(&self.p1111))
    }
}

impl ParamPoint<f64> {
    pub fn as_array(&self) -> [f64; 3] {
        [self.p0110, self.p1011, self.p1111]
    }

    pub fn from_array(a: [f64; 3]) -> ParamPoint<f64> {
        ParamPoint::new(a[0], a[1], a[2])
    }
}

/// Atoms that are zero throughout the model.
pub const ZERO_ATOMS: [usize; 6] = [0b0001, 0b0010, 0b0011, 0b1100, 0b1101, 0b1110];

/// Evaluates the parametrization in dependency order
/// `p1001 → p0101, p1010 → p0000, p0111 → p0100, p1000`.
/// Returns `None` when a denominator vanishes.
pub fn support_atoms<T: Field>(pt: &ParamPoint<T>) -> Option<[T; NUM_ATOMS]> {
    let one = T::from_int(1);
    let two = T::from_int(2);
    let three = T::from_int(3);
    let (s, r, t) = (pt.p0110.clone(), pt.p1011.clone(), pt.p1111.clone());
    let checked = |num: T, den: T| if den.is_zero_value() { None } else { Some(num.div(den)) };

    let r_plus_t = r.clone() + t.clone();
    let p1001 = checked(
        r.clone() * r.clone() * (one.clone() - two.clone() * s.clone() - two.clone() * r.clone())
            + r.clone() * t.clone() * (one - s.clone() - three * r.clone() - t.clone()),
        (s.clone() + r.clone()) * (two * r.clone() + t.clone()),
    )?;
    let p0101 = checked(p1001.clone() * r.clone(), r_plus_t.clone())?;
    let p1010 = checked(s.clone() * r.clone(), r_plus_t.clone())?;
    let p0000 = checked(s.clone() * p1001.clone() * t.clone(), r.clone() * r_plus_t.clone())?;
    // from ⊥(X,Z|U) at U=1: p0101·(p1011 + p1111) = p0111·p1001
    let p0111 = checked(p0101.clone() * r_plus_t, p1001.clone())?;
    let p0100 = checked(p0101.clone() * s.clone(), p0111.clone())?;
    let p1000 = checked(p1001.clone() * p1010.clone(), r.clone())?;

    let zero = T::from_int(0);
    let mut atoms: [T; NUM_ATOMS] = std::array::from_fn(|_| zero.clone());
    atoms[0b0000] = p0000;
    atoms[0b0100] = p0100;
    atoms[0b0101] = p0101;
    atoms[0b0110] = s;
    atoms[0b0111] = p0111;
    atoms[0b1000] = p1000;
    atoms[0b1001] = p1001;
    atoms[0b1010] = p1010;
    atoms[0b1011] = r;
    atoms[0b1111] = t;
    Some(atoms)
}

fn support_positive<T: Field>(atoms: &[T; NUM_ATOMS]) -> bool {
    let zero = T::from_int(0);
    (0..NUM_ATOMS).filter(|i| !ZERO_ATOMS.contains(i)).all(|i| atoms[i] > zero)
}

/// The full table at a rational point of the model.
pub fn param_to_table(pt: &ParamPoint<Rational>) -> Result<JointTable> {
    let atoms = support_atoms(pt).ok_or_else(|| Error::OutsideModel("vanishing denominator".into()))?;
    if !support_positive(&atoms) {
        return Err(Error::OutsideModel("a support atom is not positive".into()));
    }
    let sum: Rational = atoms.iter().sum();
    if !sum.is_one() {
        return Err(Error::OutsideModel(format!("atoms sum to {sum}")));
    }
    JointTable::new(atoms)
}

/// Float atoms at a point, `None` outside `T₁`.
pub fn param_to_probs(pt: &ParamPoint<f64>) -> Option<[f64; NUM_ATOMS]> {
    let atoms = support_atoms(pt)?;
    (support_positive(&atoms) && atoms.iter().all(|p| p.is_finite())).then_some(atoms)
}

/// Membership in the semialgebraic set `T₁`: all ten support atoms positive.
pub fn membership_t1<T: Field>(pt: &ParamPoint<T>) -> bool {
    let zero = T::from_int(0);
    let one = T::from_int(1);
    let coords = [&pt.p0110, &pt.p1011, &pt.p1111];
    if coords.iter().any(|c| **c <= zero || **c >= one) {
        return false;
    }
    support_atoms(pt).is_some_and(|a| support_positive(&a))
}

/// Coefficients `(A, B, C)` of the `⊥(X,Y)` constraint `A·s² + B·s + C = 0`
/// in `s = p0110`, for `r = p1011`, `t = p1111`.
pub fn xy_quadratic<T: Ring>(r: &T, t: &T) -> (T, T, T) {
    let n = |k: i64| T::from_int(k);
    let (r, t) = (r.clone(), t.clone());
    let r2 = r.clone() * r.clone();
    let r3 = r2.clone() * r.clone();
    let t2 = t.clone() * t.clone();
    let t3 = t2.clone() * t.clone();
    let t4 = t3.clone() * t.clone();
    let rt = r.clone() + t.clone();
    // t·(2r² + 3rt + t²), common to both sides
    let g = t.clone() * (n(2) * r2.clone() + n(3) * r.clone() * t.clone() + t2.clone());

    let quad = t.clone()
        * (n(2) * r3.clone()
            + t4.clone()
            + r.clone() * t2.clone() * (n(1) + n(4) * t.clone())
            + r2.clone() * t.clone() * (n(3) + n(4) * t.clone()));
    let lin_lhs = r2.clone() * r2.clone()
        + n(5) * r.clone() * t4.clone() * t.clone()
        + t3.clone() * t3.clone()
        + n(2) * r3.clone() * (t.clone() + n(2) * t3.clone())
        + r2.clone() * (t2.clone() + n(8) * t4);
    let lin = lin_lhs - g.clone() * t2;
    let constant = r2.clone() * rt.clone() * rt.clone() * rt - g * (r3 + r2 * t);
    (quad, lin, constant)
}

/// Left minus right side of the `⊥(X,Y)` constraint at `pt`, in expanded form:
///
/// ```text
/// r²(r+t)³ + s²t(2r³ + t⁴ + rt²(1+4t) + r²t(3+4t))
///   + s(r⁴ + 5rt⁵ + t⁶ + 2r³(t+2t³) + r²(t²+8t⁴))
///   − t(2r² + 3rt + t²)(r³ + r²t + st²)
/// ```
pub fn xy_constraint_residual<T: Ring>(pt: &ParamPoint<T>) -> T {
    let n = |k: i64| T::from_int(k);
    let (s, r, t) = (pt.p0110.clone(), pt.p1011.clone(), pt.p1111.clone());
    let pow = |x: &T, e: u32| (0..e).fold(n(1), |acc, _| acc * x.clone());
    let lhs = pow(&r, 2) * pow(&(r.clone() + t.clone()), 3)
        + pow(&s, 2)
            * t.clone()
            * (n(2) * pow(&r, 3)
                + pow(&t, 4)
                + r.clone() * pow(&t, 2) * (n(1) + n(4) * t.clone())
                + pow(&r, 2) * t.clone() * (n(3) + n(4) * t.clone()))
        + s.clone()
            * (pow(&r, 4)
                + n(5) * r.clone() * pow(&t, 5)
                + pow(&t, 6)
                + n(2) * pow(&r, 3) * (t.clone() + n(2) * pow(&t, 3))
                + pow(&r, 2) * (pow(&t, 2) + n(8) * pow(&t, 4)));
    let rhs = t.clone()
        * (n(2) * pow(&r, 2) + n(3) * r.clone() * t.clone() + pow(&t, 2))
        * (pow(&r, 3) + pow(&r, 2) * t.clone() + s * pow(&t, 2));
    lhs - rhs
}

/// A root of the constraint quadratic: exact, or `rational + coeff·√radicand`.
#[derive(Clone, Debug, PartialEq)]
pub enum Root {
    Exact(Rational),
    Surd { rational: Rational, coeff: Rational, radicand: Rational },
}

impl Root {
    pub fn to_f64(&self) -> f64 {
        match self {
            Root::Exact(r) => r.to_f64().expect("finite"),
            Root::Surd { rational, coeff, radicand } => {
                rational.to_f64().expect("finite")
                    + coeff.to_f64().expect("finite") * radicand.to_f64().expect("finite").sqrt()
            }
        }
    }
}

/// Real roots of the constraint in `p0110`; `branch` marks the root taken as `f(p1011, p1111)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticRoots {
    pub discriminant: Rational,
    pub roots: Vec<Root>,
    pub branch: Option<usize>,
}

impl QuadraticRoots {
    pub fn branch_root(&self) -> Option<&Root> {
        self.branch.map(|i| &self.roots[i])
    }
}

/// Exact square root of a non-negative rational, if it is a rational square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// Solves the `⊥(X,Y)` constraint for `p0110`.
///
/// The branch is the root lying in `(0,1)` whose point belongs to `T₁`; if both
/// qualify the smaller is taken.
pub fn solve_p0110(p1011: &Rational, p1111: &Rational) -> Result<QuadraticRoots> {
    let (a, b, c) = xy_quadratic(p1011, p1111);
    if a.is_zero() {
        return Err(Error::DegenerateQuadratic);
    }
    let disc = &b * &b - Rational::from_int(4) * &a * &c;
    if disc.is_negative() {
        return Err(Error::NegativeDiscriminant);
    }
    let two_a = Rational::from_int(2) * &a;
    let center = -&b / &two_a;
    let mut roots = match rational_sqrt(&disc) {
        Some(sq) => {
            let mut v = vec![Root::Exact(&center - &sq / &two_a), Root::Exact(&center + &sq / &two_a)];
            v.dedup();
            v
        }
        None => vec![
            Root::Surd { rational: center.clone(), coeff: -Rational::one() / &two_a, radicand: disc.clone() },
            Root::Surd { rational: center, coeff: Rational::one() / &two_a, radicand: disc.clone() },
        ],
    };
    roots.sort_by(|x, y| x.to_f64().total_cmp(&y.to_f64()));

    let in_model = |root: &Root| match root {
        Root::Exact(s) => membership_t1(&ParamPoint::new(s.clone(), p1011.clone(), p1111.clone())),
        Root::Surd { .. } => {
            let pt = ParamPoint::new(root.to_f64(), p1011.to_f64().expect("finite"), p1111.to_f64().expect("finite"));
            membership_t1(&pt)
        }
    };
    let branch = roots.iter().position(in_model);
    Ok(QuadraticRoots { discriminant: disc, roots, branch })
}

/// Non-Ingleton scores: `ρ₁ = −◻` under `⊥(Z,U|XY)` and `ρ₂ = −◻` under `⊥(X,Y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Score {
    Rho1,
    Rho2,
}

impl Score {
    /// `ρ₁ = h(XYZ) − h(XZ) + h(XYU) − h(YU) − h(XYZU) + h(ZU)`;
    /// `ρ₂ = h(ZU) − h(XZ) + h(X) − h(YU) + h(Y)`.
    pub fn functional(self) -> LinFunctional {
        let s = Subset::of;
        use Var::{U, X, Y, Z};
        match self {
            Score::Rho1 => LinFunctional::from_terms(&[
                (1, s(&[X, Y, Z])),
                (-1, s(&[X, Z])),
                (1, s(&[X, Y, U])),
                (-1, s(&[Y, U])),
                (-1, Subset::FULL),
                (1, s(&[Z, U])),
            ]),
            Score::Rho2 => LinFunctional::from_terms(&[
                (1, s(&[Z, U])),
                (-1, s(&[X, Z])),
                (1, s(&[X])),
                (-1, s(&[Y, U])),
                (1, s(&[Y])),
            ]),
        }
    }

    pub fn of_table(self, t: &JointTable) -> f64 {
        self.functional().eval(&entropy_vector(t))
    }

    pub fn of_probs(self, atoms: &[f64; NUM_ATOMS]) -> f64 {
        self.functional().eval(&EntropyVector::from_probabilities(atoms))
    }

    /// Score at a float parameter point, `None` outside `T₁`.
    pub fn of_point(self, pt: &ParamPoint<f64>) -> Option<f64> {
        param_to_probs(pt).map(|a| self.of_probs(&a))
    }
}

/// Score of a table.
pub fn score(t: &JointTable, which: Score) -> f64 {
    which.of_table(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{paper_example, rat};
    use crate::ingleton::{ingleton_xy_zu, rearranged_identities};

    fn reference_point() -> ParamPoint<Rational> {
        ParamPoint::new(rat(10, 693), rat(2, 99), rat(2, 11))
    }

    #[test]
    fn reference_point_reproduces_table() {
        let atoms = support_atoms(&reference_point()).unwrap();
        assert_eq!(atoms[0b1001], rat(40, 99));
        assert_eq!(atoms[0b0101], rat(4, 99));
        assert_eq!(param_to_table(&reference_point()).unwrap(), paper_example());
    }

    #[test]
    fn membership() {
        assert!(membership_t1(&reference_point()));
        assert!(!membership_t1(&ParamPoint::new(rat(1, 2), rat(1, 2), rat(1, 2))));
        assert!(!membership_t1(&ParamPoint::new(rat(1, 1), rat(1, 99), rat(1, 11))));
        assert!(!membership_t1(&ParamPoint::new(rat(1, 10), rat(0, 1), rat(1, 11))));
        assert!(matches!(
            param_to_table(&ParamPoint::new(rat(1, 2), rat(1, 2), rat(1, 2))),
            Err(Error::OutsideModel(_))
        ));
    }

    #[test]
    fn half_point_has_nonpositive_p1001() {
        let atoms = support_atoms(&ParamPoint::new(rat(1, 2), rat(1, 2), rat(1, 2))).unwrap();
        assert!(atoms[0b1001] <= rat(0, 1));
    }

    #[test]
    fn residual_vanishes_on_reference_point() {
        assert!(xy_constraint_residual(&reference_point()).is_zero());
        let corner = ParamPoint::new(rat(1, 6), rat(1, 160), rat(1, 8));
        assert!(!xy_constraint_residual(&corner).is_zero());
    }

    #[test]
    fn quadratic_matches_expanded_residual() {
        for (s, r, t) in [
            (rat(1, 6), rat(1, 160), rat(1, 8)),
            (rat(3, 7), rat(2, 5), rat(1, 9)),
            (rat(10, 693), rat(2, 99), rat(2, 11)),
        ] {
            let (a, b, c) = xy_quadratic(&r, &t);
            let via_quadratic = &a * &s * &s + &b * &s + c;
            assert_eq!(via_quadratic, xy_constraint_residual(&ParamPoint::new(s, r, t)));
        }
    }

    #[test]
    fn solve_reference_parameters() {
        let roots = solve_p0110(&rat(2, 99), &rat(2, 11)).unwrap();
        assert_eq!(roots.branch_root(), Some(&Root::Exact(rat(10, 693))));
        for root in &roots.roots {
            let Root::Exact(s) = root else { panic!("expected rational roots") };
            assert!(xy_constraint_residual(&ParamPoint::new(s.clone(), rat(2, 99), rat(2, 11))).is_zero());
        }
        // discriminant = N / (b⁸ d¹²) with the expected numerator
        let scale = Rational::from_integer(BigInt::from(99).pow(8) * BigInt::from(11).pow(12));
        assert_eq!(roots.discriminant * scale, Rational::from_integer("937129691803487846400".parse().unwrap()));
    }

    #[test]
    fn surd_roots_satisfy_constraint_numerically() {
        let roots = solve_p0110(&rat(1, 60), &rat(1, 4)).unwrap();
        assert!(roots.roots.iter().all(|r| matches!(r, Root::Surd { .. })));
        for r in &roots.roots {
            let pt = ParamPoint::new(r.to_f64(), 1.0 / 60.0, 0.25);
            assert!(xy_constraint_residual(&pt).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_quadratic() {
        assert!(matches!(solve_p0110(&rat(1, 2), &rat(0, 1)), Err(Error::DegenerateQuadratic)));
    }

    #[test]
    fn scores_on_reference_table() {
        let t = paper_example();
        let rho1 = score(&t, Score::Rho1);
        let rho2 = score(&t, Score::Rho2);
        assert!((rho2 - 0.00757).abs() < 1e-5, "{rho2}");
        assert!((rho1 - rho2).abs() < 1e-12);
        let ingleton = ingleton_xy_zu().eval(&entropy_vector(&t));
        assert!((ingleton + rho2).abs() < 1e-12);
    }

    #[test]
    fn score_functionals_match_rearranged_identities() {
        // ρ = (left side of the rearranged form) − ◻, up to the h(∅) coefficient
        let ids = rearranged_identities();
        let drop_empty = |mut f: LinFunctional| {
            f.0[0] = 0;
            f
        };
        assert_eq!(Score::Rho1.functional(), drop_empty(ids[0].left - ingleton_xy_zu()));
        assert_eq!(Score::Rho2.functional(), drop_empty(ids[1].left - ingleton_xy_zu()));
    }

    #[test]
    fn literature_local_maximum() {
        let v = Score::Rho1.of_point(&ParamPoint::new(0.36179, 0.01463, 0.27455)).unwrap();
        assert!((v - 0.0198).abs() < 1e-4, "{v}");
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{format_rational, rat, JointTable, Rational};
use crate::entropy::{exact_sign, SignCertificate};
use crate::error::{Error, Result};
use crate::ingleton::ingleton_xy_zu;

use super::{
    discriminant_numerator, membership_t1, param_to_table, solve_p0110, xy_constraint_residual, ParamPoint, Root,
};

/// Parameter rectangles and the denominator limits `B` (for `p1011`) and `D` (for `p1111`).
#[derive(Clone, Debug, PartialEq)]
pub struct SearchBounds {
    pub p0110: (Rational, Rational),
    pub p1011: (Rational, Rational),
    pub p1111: (Rational, Rational),
    pub max_b: u64,
    pub max_d: u64,
}

impl SearchBounds {
    pub fn new(
        p0110: (Rational, Rational),
        p1011: (Rational, Rational),
        p1111: (Rational, Rational),
        max_b: u64,
        max_d: u64,
    ) -> Result<SearchBounds> {
        for (name, (lo, hi)) in [("p0110", &p0110), ("p1011", &p1011), ("p1111", &p1111)] {
            if lo >= hi {
                return Err(Error::Parse(format!("empty {name} range [{lo}, {hi}]")));
            }
        }
        if max_b == 0 || max_d == 0 {
            return Err(Error::Parse("denominator limits must be at least 1".into()));
        }
        Ok(SearchBounds { p0110, p1011, p1111, max_b, max_d })
    }

    /// `1/6 ≤ p0110 ≤ 3/6`, `1/160 ≤ p1011 ≤ 3/160`, `1/8 ≤ p1111 ≤ 3/8`.
    pub fn default_box(max_b: u64, max_d: u64) -> SearchBounds {
        SearchBounds::new((rat(1, 6), rat(3, 6)), (rat(1, 160), rat(3, 160)), (rat(1, 8), rat(3, 8)), max_b, max_d)
            .expect("valid box")
    }

    /// Scales every lower end by `1 − pct/100` and every upper end by `1 + pct/100`.
    pub fn inflate(&self, pct: u32) -> SearchBounds {
        let lo = rat(100 - i64::from(pct.min(100)), 100);
        let hi = rat(100 + i64::from(pct), 100);
        let widen = |(a, b): &(Rational, Rational)| (a * &lo, b * &hi);
        SearchBounds { p0110: widen(&self.p0110), p1011: widen(&self.p1011), p1111: widen(&self.p1111), ..self.clone() }
    }
}

/// A verified rational counterexample found by [`search_rational`].
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub p0110: Rational,
    pub table: JointTable,
    pub certificate: SignCertificate,
}

impl Serialize for Counterexample {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Counterexample", 6)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("p0110", &format_rational(&self.p0110))?;
        st.serialize_field("certificate", &self.certificate)?;
        st.end()
    }
}

/// Exact perfect-square test via the integer square root.
pub fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let s = n.sqrt();
        &s * &s == *n
    }
}

/// Reduced numerators `a` with `a/den` in `[lo, hi]` and `0 < a < den`.
fn numerators(den: u64, (lo, hi): &(Rational, Rational)) -> Vec<u64> {
    let d = Rational::from_integer(BigInt::from(den));
    let first = (lo * &d).ceil().to_integer().to_u64().unwrap_or(0).max(1);
    let last = (hi * &d).floor().to_integer().to_u64().unwrap_or(0).min(den.saturating_sub(1));
    (first..=last).filter(|a| a.gcd(&den) == 1).collect()
}

/// Enumerates `p1011 = a/b`, `p1111 = c/d` in lowest terms with `b ≤ B`, `d ≤ D`
/// inside the rectangles and keeps the points whose discriminant numerator is a
/// perfect square, whose rational root lies in `T₁`, and whose table violates
/// `◻(XY|ZU) ≥ 0` exactly. Sorted by `(b, d, a, c)`.
pub fn search_rational(bounds: &SearchBounds) -> Vec<Counterexample> {
    let mut found: Vec<Counterexample> = (1..=bounds.max_b)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut out = Vec::new();
            for a in numerators(b, &bounds.p1011) {
                for d in 1..=bounds.max_d {
                    for c in numerators(d, &bounds.p1111) {
                        out.extend(check_candidate(a, b, c, d));
                    }
                }
            }
            out
        })
        .collect();
    found.sort_by(|x, y| (x.b, x.d, x.a, x.c, &x.p0110).cmp(&(y.b, y.d, y.a, y.c, &y.p0110)));
    found
}

fn check_candidate(a: u64, b: u64, c: u64, d: u64) -> Vec<Counterexample> {
    if !is_square(&discriminant_numerator(a, b, c, d)) {
        return Vec::new();
    }
    let (p1011, p1111) = (rat(a as i64, b as i64), rat(c as i64, d as i64));
    let Ok(roots) = solve_p0110(&p1011, &p1111) else {
        return Vec::new();
    };
    let ingleton = ingleton_xy_zu();
    roots
        .roots
        .iter()
        .filter_map(|root| match root {
            Root::Exact(s) => Some(s.clone()),
            Root::Surd { .. } => None,
        })
        .filter_map(|s| {
            let pt = ParamPoint::new(s.clone(), p1011.clone(), p1111.clone());
            if !membership_t1(&pt) {
                return None;
            }
            debug_assert!(num_traits::Zero::is_zero(&xy_constraint_residual(&pt)));
            let table = param_to_table(&pt).ok()?;
            let certificate = exact_sign(&ingleton, &table);
            (certificate.sign == -1).then_some(Counterexample { a, b, c, d, p0110: s, table, certificate })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares() {
        assert!(!is_square(&BigInt::from(2)));
        assert!(is_square(&BigInt::from(0)));
        assert!(!is_square(&BigInt::from(-4)));
        assert!(is_square(&"937129691803487846400".parse().unwrap()));
    }

    #[test]
    fn inflated_box_contains_the_reference_parameters() {
        let b = SearchBounds::default_box(99, 11).inflate(10);
        assert!(b.p1011.0 <= rat(2, 99) && rat(2, 99) <= b.p1011.1);
        assert!(b.p1111.0 <= rat(2, 11) && rat(2, 11) <= b.p1111.1);
        assert!(rat(2, 99) > SearchBounds::default_box(99, 11).p1011.1);
    }

    #[test]
    fn bounds_validation() {
        assert!(
            SearchBounds::new((rat(1, 2), rat(1, 3)), (rat(0, 1), rat(1, 1)), (rat(0, 1), rat(1, 1)), 1, 1).is_err()
        );
        assert!(
            SearchBounds::new((rat(0, 1), rat(1, 1)), (rat(0, 1), rat(1, 1)), (rat(0, 1), rat(1, 1)), 0, 1).is_err()
        );
    }

    #[test]
    fn numerator_ranges_are_reduced() {
        assert_eq!(numerators(99, &(rat(1, 200), rat(1, 40))), vec![1, 2]);
        assert_eq!(numerators(10, &(rat(0, 1), rat(1, 1))), vec![1, 3, 7, 9]);
    }

    #[test]
    fn reference_candidate_verifies() {
        // both roots 10/693 and 40/99 land in T₁ and violate the inequality
        let found = check_candidate(2, 99, 2, 11);
        let roots: Vec<Rational> = found.iter().map(|c| c.p0110.clone()).collect();
        assert_eq!(roots, vec![rat(10, 693), rat(40, 99)]);
        assert_eq!(found[0].table, crate::dist::paper_example());
        assert!(found.iter().all(|c| c.certificate.sign == -1));
    }
}

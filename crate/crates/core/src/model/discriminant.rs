//! Symbolic discriminant of the `⊥(X,Y)` constraint.
//!
//! The quadratic's coefficients are polynomials in `r = p1011` and
//! `t = p1111`. Expanding `B² − 4AC` symbolically gives a polynomial of
//! degree 8 in `r` and 12 in `t`; substituting `r = a/b`, `t = c/d` and
//! clearing `b⁸d¹²` yields the integer whose squareness decides rationality.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{xy_quadratic, Ring};

/// Polynomial in `r, t` with integer coefficients; keys are `(deg_r, deg_t)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2(BTreeMap<(u32, u32), BigInt>);

impl Poly2 {
    pub fn r() -> Poly2 {
        Poly2(BTreeMap::from([((1, 0), BigInt::one())]))
    }

    pub fn t() -> Poly2 {
        Poly2(BTreeMap::from([((0, 1), BigInt::one())]))
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), BigInt> {
        &self.0
    }

    pub fn degree_r(&self) -> u32 {
        self.0.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_t(&self) -> u32 {
        self.0.keys().map(|k| k.1).max().unwrap_or(0)
    }

    fn add_term(&mut self, key: (u32, u32), c: BigInt) {
        let e = self.0.entry(key).or_default();
        *e += c;
        if e.is_zero() {
            self.0.remove(&key);
        }
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(mut self, o: Poly2) -> Poly2 {
        for (k, c) in o.0 {
            self.add_term(k, c);
        }
        self
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(mut self, o: Poly2) -> Poly2 {
        for (k, c) in o.0 {
            self.add_term(k, -c);
        }
        self
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, o: Poly2) -> Poly2 {
        let mut out = Poly2::default();
        for ((i1, j1), c1) in &self.0 {
            for ((i2, j2), c2) in &o.0 {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

impl Ring for Poly2 {
    fn from_int(n: i64) -> Poly2 {
        let mut p = Poly2::default();
        p.add_term((0, 0), BigInt::from(n));
        p
    }
}

/// `B² − 4AC` as a polynomial in `(r, t)`, derived from [`xy_quadratic`].
pub fn discriminant_polynomial() -> &'static Poly2 {
    static DISC: OnceLock<Poly2> = OnceLock::new();
    DISC.get_or_init(|| {
        let (a, b, c) = xy_quadratic(&Poly2::r(), &Poly2::t());
        b.clone() * b - Poly2::from_int(4) * a * c
    })
}

/// `b⁸d¹² · disc(a/b, c/d)`, an integer.
pub fn discriminant_numerator(a: u64, b: u64, c: u64, d: u64) -> BigInt {
    let disc = discriminant_polynomial();
    let (dr, dt) = (disc.degree_r(), disc.degree_t());
    let pows = |x: u64, n: u32| -> Vec<BigInt> {
        let x = BigInt::from(x);
        let mut v = vec![BigInt::one()];
        for _ in 0..n {
            let next = v.last().expect("nonempty") * &x;
            v.push(next);
        }
        v
    };
    let (pa, pb, pc, pd) = (pows(a, dr), pows(b, dr), pows(c, dt), pows(d, dt));
    disc.terms()
        .iter()
        .map(|((i, j), k)| k * &pa[*i as usize] * &pb[(dr - i) as usize] * &pc[*j as usize] * &pd[(dt - j) as usize])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        let d = discriminant_polynomial();
        assert_eq!((d.degree_r(), d.degree_t()), (8, 12));
        assert_eq!(d.terms().len(), 36);
    }

    #[test]
    fn reference_value_and_root() {
        let n = discriminant_numerator(2, 99, 2, 11);
        assert_eq!(n, "937129691803487846400".parse::<BigInt>().unwrap());
        assert_eq!(n.sqrt(), BigInt::from(30_612_574_080u64));
        assert_eq!(n.sqrt().pow(2), n);
    }

    #[test]
    fn ring_arithmetic() {
        let p = (Poly2::r() + Poly2::t()) * (Poly2::r() - Poly2::t());
        assert_eq!(p, Poly2::r() * Poly2::r() - Poly2::t() * Poly2::t());
        assert!((Poly2::r() - Poly2::r()).terms().is_empty());
    }
}

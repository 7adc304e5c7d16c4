//! Entropy vectors, linear entropy functionals and exact sign certificates.
//!
//! Float entropies use the natural logarithm. [`exact_sign`] never takes a
//! logarithm: with `D` the common denominator of all atoms, every marginal
//! cell is `m/D` for an integer `m`, and
//!
//! ```text
//! D · (f·h) = (Σ_I c_I)·D·log D − Σ_I c_I Σ_cells m·log m
//! ```
//!
//! so `exp(D · f·h)` is a ratio of two products of integer powers. The sign
//! of `f·h` is the outcome of comparing those two big integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dist::JointTable;
use crate::vars::{atom_state, Subset, NUM_ATOMS};

/// Entropies `h(I)` of all 16 subvectors, natural-log units, indexed by subset mask.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyVector(pub [f64; 16]);

impl EntropyVector {
    pub fn zero() -> EntropyVector {
        EntropyVector([0.0; 16])
    }

    pub fn h(&self, s: Subset) -> f64 {
        self.0[s.index()]
    }

    /// Entropy vector of float atomic probabilities (same indexing as [`JointTable`]).
    pub fn from_probabilities(atoms: &[f64; NUM_ATOMS]) -> EntropyVector {
        let mut h = [0.0; 16];
        for s in Subset::all() {
            let mut cells = vec![0.0f64; 1 << s.len()];
            for (atom, p) in atoms.iter().enumerate() {
                let idx = s.vars().enumerate().fold(0, |acc, (k, v)| acc | (atom_state(atom, v) << k));
                cells[idx] += p;
            }
            h[s.index()] = cells.iter().filter(|p| **p > 0.0).map(|p| -p * p.ln()).sum();
        }
        EntropyVector(h)
    }
}

pub fn entropy_vector(t: &JointTable) -> EntropyVector {
    let mut h = [0.0; 16];
    for s in Subset::all() {
        h[s.index()] = t
            .marginal(s)
            .cells()
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| {
                let p = p.to_f64().expect("finite probability");
                -p * p.ln()
            })
            .sum();
    }
    EntropyVector(h)
}

/// `h(∅) = 0`, monotone and submodular up to `tol`.
pub fn is_polymatroid(v: &EntropyVector, tol: f64) -> bool {
    if v.h(Subset::EMPTY) != 0.0 {
        return false;
    }
    for i in Subset::all() {
        for j in Subset::all() {
            if i.is_subset_of(j) && v.h(i) > v.h(j) + tol {
                return false;
            }
            if v.h(i) + v.h(j) < v.h(i.union(j)) + v.h(i.intersection(j)) - tol {
                return false;
            }
        }
    }
    true
}

/// Integer linear functional on `R^16`, indexed by subset mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinFunctional(pub [i64; 16]);

impl LinFunctional {
    pub fn zero() -> LinFunctional {
        LinFunctional([0; 16])
    }

    /// Builds a functional from `(coefficient, subset)` terms; repeated subsets add up.
    pub fn from_terms(terms: &[(i64, Subset)]) -> LinFunctional {
        let mut c = [0; 16];
        for (k, s) in terms {
            c[s.index()] += k;
        }
        LinFunctional(c)
    }

    pub fn coeff(&self, s: Subset) -> i64 {
        self.0[s.index()]
    }

    pub fn coefficients(&self) -> &[i64; 16] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0)
    }

    /// Nonzero `(subset, coefficient)` pairs in mask order.
    pub fn terms(&self) -> impl Iterator<Item = (Subset, i64)> + '_ {
        Subset::all().map(|s| (s, self.coeff(s))).filter(|(_, c)| *c != 0)
    }

    pub fn eval(&self, v: &EntropyVector) -> f64 {
        self.0.iter().zip(v.0.iter()).map(|(c, h)| *c as f64 * h).sum()
    }

    pub fn map(&self, perm: &crate::vars::VarPerm) -> LinFunctional {
        let mut c = [0; 16];
        for (s, k) in self.terms() {
            c[s.map(perm).index()] += k;
        }
        LinFunctional(c)
    }
}

impl Add for LinFunctional {
    type Output = LinFunctional;
    fn add(self, o: LinFunctional) -> LinFunctional {
        LinFunctional(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for LinFunctional {
    type Output = LinFunctional;
    fn sub(self, o: LinFunctional) -> LinFunctional {
        LinFunctional(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for LinFunctional {
    type Output = LinFunctional;
    fn neg(self) -> LinFunctional {
        LinFunctional(self.0.map(|c| -c))
    }
}

impl Mul<LinFunctional> for i64 {
    type Output = LinFunctional;
    fn mul(self, f: LinFunctional) -> LinFunctional {
        LinFunctional(f.0.map(|c| self * c))
    }
}

impl fmt::Display for LinFunctional {
    /// `h(XZ) + h(XU) - h(Z) ...`, zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in self.terms() {
            let name = if s.is_empty() { "∅".to_string() } else { s.to_string() };
            let sign = if c < 0 { "-" } else { "+" };
            match (first, c.abs()) {
                (true, 1) if c < 0 => write!(f, "-h({name})")?,
                (true, 1) => write!(f, "h({name})")?,
                (true, a) if c < 0 => write!(f, "-{a}·h({name})")?,
                (true, a) => write!(f, "{a}·h({name})")?,
                (false, 1) => write!(f, " {sign} h({name})")?,
                (false, a) => write!(f, " {sign} {a}·h({name})")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact witness for the sign of `f·h(t)`: `exp(scale · f·h(t)) = numerator / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCertificate {
    pub sign: i8,
    pub scale: BigUint,
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl SignCertificate {
    /// Approximate `scale · f·h(t) = log(numerator) − log(denominator)`.
    pub fn scaled_log_ratio(&self) -> f64 {
        big_ln(&self.numerator) - big_ln(&self.denominator)
    }
}

fn big_ln(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

impl Serialize for SignCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let num = self.numerator.to_string();
        let den = self.denominator.to_string();
        let mut st = serializer.serialize_struct("SignCertificate", 6)?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("scale", &self.scale.to_string())?;
        st.serialize_field("num_digits", &num.len())?;
        st.serialize_field("den_digits", &den.len())?;
        st.serialize_field("num", &num)?;
        st.serialize_field("den", &den)?;
        st.end()
    }
}

/// Exact sign of `f·h(t)` by big-integer comparison.
///
/// # Panics
///
/// If an exponent `scale · |c_I| · m` exceeds `u32::MAX`; such a certificate
/// would have billions of digits.
pub fn exact_sign(f: &LinFunctional, t: &JointTable) -> SignCertificate {
    let scale = t.common_denominator();
    let counts: Vec<BigInt> = t.atoms().iter().map(|p| p.numer() * (&scale / p.denom())).collect();

    // exponent of each integer base in exp(D · f·h)
    let mut exponents: BTreeMap<BigUint, BigInt> = BTreeMap::new();
    let total: i64 = f.0.iter().sum();
    if total != 0 {
        *exponents.entry(scale.to_biguint().expect("positive")).or_default() += BigInt::from(total) * &scale;
    }
    for (s, c) in f.terms() {
        let mut cells = vec![BigInt::zero(); 1 << s.len()];
        for (atom, m) in counts.iter().enumerate() {
            let idx = s.vars().enumerate().fold(0, |acc, (k, v)| acc | (atom_state(atom, v) << k));
            cells[idx] += m;
        }
        for m in cells.into_iter().filter(|m| !m.is_zero()) {
            let e = -BigInt::from(c) * &m;
            *exponents.entry(m.to_biguint().expect("non-negative count")).or_default() += e;
        }
    }

    let mut numerator = BigUint::one();
    let mut denominator = BigUint::one();
    for (base, e) in exponents {
        if base.is_one() || e.is_zero() {
            continue;
        }
        let power = base.pow(e.abs().to_u32().expect("certificate exponent exceeds u32"));
        if e.is_positive() {
            numerator *= power;
        } else {
            denominator *= power;
        }
    }
    let g = numerator.gcd(&denominator);
    if !g.is_one() {
        numerator /= &g;
        denominator /= &g;
    }
    let sign = match numerator.cmp(&denominator) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    };
    SignCertificate { sign, scale: scale.to_biguint().expect("positive"), numerator, denominator }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{paper_example, rat, Rational};
    use crate::vars::Var;

    fn independent_uniform() -> JointTable {
        JointTable::uniform()
    }

    #[test]
    fn uniform_bits_have_additive_entropy() {
        let h = entropy_vector(&independent_uniform());
        for s in Subset::all() {
            assert!((h.h(s) - s.len() as f64 * std::f64::consts::LN_2).abs() < 1e-12);
        }
        assert_eq!(h.h(Subset::EMPTY), 0.0);
    }

    #[test]
    fn reference_single_variable_entropy() {
        let h = entropy_vector(&paper_example());
        let (a, b) = (4.0f64 / 11.0, 7.0f64 / 11.0);
        let expected = -a * a.ln() - b * b.ln();
        assert!((h.h(Subset::singleton(Var::X)) - expected).abs() < 1e-14);
        assert!((expected - 0.6555).abs() < 1e-4);
    }

    #[test]
    fn polymatroid_checks() {
        assert!(is_polymatroid(&entropy_vector(&paper_example()), 1e-12));
        assert!(is_polymatroid(&EntropyVector::zero(), 0.0));
        let mut bad = entropy_vector(&independent_uniform());
        let xy = Subset::of(&[Var::X, Var::Y]);
        bad.0[xy.index()] = bad.h(Subset::singleton(Var::X)) + bad.h(Subset::singleton(Var::Y)) + 1.5;
        assert!(!is_polymatroid(&bad, 1e-9));
        let mut nonzero_empty = EntropyVector::zero();
        nonzero_empty.0[0] = 1e-3;
        assert!(!is_polymatroid(&nonzero_empty, 1e-2));
    }

    #[test]
    fn functional_display() {
        let f = LinFunctional::from_terms(&[(1, Subset::of(&[Var::X])), (-2, Subset::EMPTY)]);
        assert_eq!(f.to_string(), "-2·h(∅) + h(X)");
        assert_eq!(LinFunctional::zero().to_string(), "0");
    }

    #[test]
    fn certificate_of_zero_functional_is_one() {
        let c = exact_sign(&LinFunctional::zero(), &paper_example());
        assert_eq!(c.sign, 0);
        assert!(c.numerator.is_one() && c.denominator.is_one());
        assert_eq!(c.scale, BigUint::from(693u32));
    }

    #[test]
    fn single_entropy_certificate() {
        // H(X) for P(X=0) = 1/4: exp(4·H) = 4^4 / (1^1 · 3^3) = 256/27
        let mut atoms: [Rational; 16] = std::array::from_fn(|_| rat(0, 1));
        atoms[0] = rat(1, 4);
        atoms[8] = rat(3, 4);
        let t = JointTable::new(atoms).unwrap();
        let c = exact_sign(&LinFunctional::from_terms(&[(1, Subset::singleton(Var::X))]), &t);
        assert_eq!(c.sign, 1);
        assert_eq!(c.numerator, BigUint::from(256u32));
        assert_eq!(c.denominator, BigUint::from(27u32));
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["num"], "256");
        assert_eq!(json["den_digits"], 2);
    }
}

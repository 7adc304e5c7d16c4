use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dist::{format_rational, parse_rational, Rational};

/// `constant + Σ q_p·log p` over primes `p`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogLin {
    constant: Rational,
    logs: BTreeMap<u64, Rational>,
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl LogLin {
    pub fn zero() -> LogLin {
        LogLin::default()
    }

    pub fn from_rational(q: Rational) -> LogLin {
        LogLin { constant: q, logs: BTreeMap::new() }
    }

    /// `log q` for a positive rational, expanded over the primes of `q`.
    pub fn log_of(q: &Rational) -> LogLin {
        assert!(q.is_positive(), "log of non-positive {q}");
        let as_u64 = |n: &BigInt| n.to_u64().expect("log argument fits in 64 bits");
        let mut out = LogLin::zero();
        for (p, e) in factorize(as_u64(q.numer())) {
            out.add_log(p, Rational::from_integer(BigInt::from(e)));
        }
        for (p, e) in factorize(as_u64(q.denom())) {
            out.add_log(p, -Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn logs(&self) -> &BTreeMap<u64, Rational> {
        &self.logs
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.logs.is_empty()
    }

    fn add_log(&mut self, p: u64, q: Rational) {
        let e = self.logs.entry(p).or_insert_with(Rational::zero);
        *e += q;
        if e.is_zero() {
            self.logs.remove(&p);
        }
    }

    pub fn scale(&self, k: &Rational) -> LogLin {
        if k.is_zero() {
            return LogLin::zero();
        }
        LogLin { constant: &self.constant * k, logs: self.logs.iter().map(|(p, q)| (*p, q * k)).collect() }
    }

    pub fn to_f64(&self) -> f64 {
        let f = |q: &Rational| q.to_f64().expect("finite");
        f(&self.constant) + self.logs.iter().map(|(p, q)| f(q) * (*p as f64).ln()).sum::<f64>()
    }

    /// Exact sign; see [`loglin_sign`].
    pub fn sign(&self) -> i8 {
        loglin_sign(self)
    }
}

impl Add for LogLin {
    type Output = LogLin;
    fn add(mut self, o: LogLin) -> LogLin {
        self.constant += o.constant;
        for (p, q) in o.logs {
            self.add_log(p, q);
        }
        self
    }
}

impl Sub for LogLin {
    type Output = LogLin;
    fn sub(self, o: LogLin) -> LogLin {
        self + (-o)
    }
}

impl Neg for LogLin {
    type Output = LogLin;
    fn neg(self) -> LogLin {
        LogLin { constant: -self.constant, logs: self.logs.into_iter().map(|(p, q)| (p, -q)).collect() }
    }
}

impl fmt::Display for LogLin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        if !self.constant.is_zero() || self.logs.is_empty() {
            parts.push((self.constant.is_negative(), self.constant.abs().to_string()));
        }
        for (p, q) in &self.logs {
            let mag = q.abs();
            let body = if mag.is_one() { format!("log({p})") } else { format!("{mag}·log({p})") };
            parts.push((q.is_negative(), body));
        }
        for (n, (neg, body)) in parts.iter().enumerate() {
            match (n, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "−{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " − {body}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct LogLinJson {
    #[serde(rename = "const")]
    constant: String,
    logs: BTreeMap<String, String>,
}

impl Serialize for LogLin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LogLinJson {
            constant: format_rational(&self.constant),
            logs: self.logs.iter().map(|(p, q)| (p.to_string(), format_rational(q))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LogLin {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<LogLin, D::Error> {
        use serde::de::Error as _;
        let raw = LogLinJson::deserialize(d)?;
        let mut out = LogLin::from_rational(parse_rational(&raw.constant).map_err(D::Error::custom)?);
        for (p, q) in raw.logs {
            let p: u64 = p.parse().map_err(D::Error::custom)?;
            if p < 2 || factorize(p) != [(p, 1)] {
                return Err(D::Error::custom(format!("{p} is not a prime")));
            }
            out.add_log(p, parse_rational(&q).map_err(D::Error::custom)?);
        }
        Ok(out)
    }
}

/// Lower and upper rational bounds on `atanh(y)` for `0 ≤ y < 1` from `n` series terms.
fn atanh_bounds(y: &Rational, n: usize) -> (Rational, Rational) {
    let y2 = y * y;
    let mut pow = y.clone();
    let mut sum = Rational::zero();
    for k in 0..n {
        sum += &pow / Rational::from_integer(BigInt::from(2 * k + 1));
        pow *= &y2;
    }
    // tail Σ_{k≥n} y^{2k+1}/(2k+1) ≤ y^{2n+1} / ((2n+1)(1 − y²))
    let tail = pow / (Rational::from_integer(BigInt::from(2 * n + 1)) * (Rational::one() - y2));
    let upper = &sum + tail;
    (sum, upper)
}

/// Bounds on `ln p` via `ln p = k·ln 2 + ln(p/2^k)` with `1 ≤ p/2^k < 2`.
fn ln_bounds(p: u64, n: usize) -> (Rational, Rational) {
    let two = Rational::from_integer(BigInt::from(2));
    let (l2_lo, l2_hi) = atanh_bounds(&Rational::new(BigInt::one(), BigInt::from(3)), n);
    let (l2_lo, l2_hi) = (&two * l2_lo, &two * l2_hi);
    let k = 63 - p.leading_zeros();
    let base = BigInt::one() << k;
    let y = Rational::new(BigInt::from(p) - &base, BigInt::from(p) + &base);
    let (r_lo, r_hi) = atanh_bounds(&y, n);
    let kk = Rational::from_integer(BigInt::from(k));
    (&kk * l2_lo + &two * r_lo, &kk * l2_hi + &two * r_hi)
}

/// Exact sign of a [`LogLin`].
///
/// Zero is decided structurally, as `1` and the logs of distinct primes are
/// linearly independent over the rationals. A pure log part compares two
/// prime power products; otherwise interval bounds are refined with doubling
/// precision, starting at 64 bits, until they exclude zero.
pub fn loglin_sign(x: &LogLin) -> i8 {
    if x.is_zero() {
        return 0;
    }
    if x.constant.is_zero() {
        let l = x.logs.values().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let (mut num, mut den) = (BigUint::one(), BigUint::one());
        for (p, q) in &x.logs {
            let e = (q * Rational::from_integer(l.clone())).to_integer();
            let e = e.abs().to_u32().expect("exponent fits in 32 bits");
            let power = BigUint::from(*p).pow(e);
            if q.is_positive() {
                num *= power;
            } else {
                den *= power;
            }
        }
        return if num > den { 1 } else { -1 };
    }
    let mut bits = 64usize;
    loop {
        // each atanh term gains at least log2(9) > 3 bits
        let n = bits / 3 + 1;
        let (mut lo, mut hi) = (x.constant.clone(), x.constant.clone());
        for (p, q) in &x.logs {
            let (a, b) = ln_bounds(*p, n);
            if q.is_positive() {
                lo += q * a;
                hi += q * b;
            } else {
                lo += q * b;
                hi += q * a;
            }
        }
        if lo.is_positive() {
            return 1;
        }
        if hi.is_negative() {
            return -1;
        }
        bits *= 2;
    }
}

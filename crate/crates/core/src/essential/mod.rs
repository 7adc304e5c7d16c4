//! Curves of distributions `ε ↦ P(ε)` with atoms affine in `ε`, exact
//! expansions of entropy functionals in `ε^k` and `ε^k·log ε`, and the
//! order-domination test showing that no unconditional multiple of the
//! assumptions rescues the Ingleton inequality.

mod loglin;

pub use loglin::{factorize, loglin_sign, LogLin};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ci::{holds_exact, CIStatement};
use crate::dist::{cell_of_atom, format_rational, parse_rational, rat, JointTable, Rational};
use crate::entropy::{EntropyVector, LinFunctional};
use crate::error::{Error, Result};
use crate::ingleton::ingleton_xy_zu;
use crate::vars::{atom_name, parse_atom_name, Subset, Var, NUM_ATOMS};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 4;

/// `alpha + beta·ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub alpha: Rational,
    pub beta: Rational,
}

impl AffineForm {
    pub fn new(alpha: Rational, beta: Rational) -> AffineForm {
        AffineForm { alpha, beta }
    }

    pub fn zero() -> AffineForm {
        AffineForm::new(Rational::zero(), Rational::zero())
    }

    pub fn eval(&self, eps: f64) -> f64 {
        self.alpha.to_f64().expect("finite") + self.beta.to_f64().expect("finite") * eps
    }
}

impl std::ops::AddAssign<&AffineForm> for AffineForm {
    fn add_assign(&mut self, o: &AffineForm) {
        self.alpha += &o.alpha;
        self.beta += &o.beta;
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.alpha.is_zero(), self.beta.is_zero()) {
            (_, true) => write!(f, "{}", self.alpha),
            (true, false) => write!(f, "{}·ε", self.beta),
            (false, false) if self.beta.is_negative() => write!(f, "{} − {}·ε", self.alpha, -&self.beta),
            (false, false) => write!(f, "{} + {}·ε", self.alpha, self.beta),
        }
    }
}

/// A partition of the 16 atoms into the classes `A, B, C, D` of the curve recipe:
/// `A ↦ 1/(|A|+|B|)`, `B ↦ 1/(|A|+|B|) − ε`, `C ↦ (|B|/|C|)·ε`, `D ↦ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveFamily {
    classes: [Vec<usize>; 4],
}

impl CurveFamily {
    /// Atoms missing from all four lists are put into `D`.
    pub fn new(a: &[usize], b: &[usize], c: &[usize], d: &[usize]) -> Result<CurveFamily> {
        let mut seen = [false; NUM_ATOMS];
        let mut classes: [Vec<usize>; 4] = Default::default();
        for (class, atoms) in [a, b, c, d].into_iter().enumerate() {
            for &atom in atoms {
                if atom >= NUM_ATOMS {
                    return Err(Error::BadPartition(format!("atom index {atom} out of range")));
                }
                if std::mem::replace(&mut seen[atom], true) {
                    return Err(Error::BadPartition(format!("atom {} listed twice", atom_name(atom))));
                }
                classes[class].push(atom);
            }
        }
        classes[3].extend((0..NUM_ATOMS).filter(|i| !seen[*i]));
        classes.iter_mut().for_each(|c| c.sort_unstable());
        if classes[0].len() + classes[1].len() == 0 {
            return Err(Error::BadPartition("A ∪ B is empty".into()));
        }
        if classes[2].is_empty() {
            return Err(Error::BadPartition("C is empty".into()));
        }
        Ok(CurveFamily { classes })
    }

    pub fn a(&self) -> &[usize] {
        &self.classes[0]
    }

    pub fn b(&self) -> &[usize] {
        &self.classes[1]
    }

    pub fn c(&self) -> &[usize] {
        &self.classes[2]
    }

    pub fn d(&self) -> &[usize] {
        &self.classes[3]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<CurveFamily> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    #[serde(rename = "A")]
    a: Vec<String>,
    #[serde(rename = "B")]
    b: Vec<String>,
    #[serde(rename = "C")]
    c: Vec<String>,
    #[serde(rename = "D", default)]
    d: Vec<String>,
}

impl Serialize for CurveFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let names = |v: &[usize]| v.iter().map(|i| atom_name(*i)).collect();
        FamilyJson { a: names(self.a()), b: names(self.b()), c: names(self.c()), d: names(self.d()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurveFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<CurveFamily, D::Error> {
        use serde::de::Error as _;
        let raw = FamilyJson::deserialize(d)?;
        let parse = |v: &[String]| v.iter().map(|s| parse_atom_name(s)).collect::<Result<Vec<usize>>>();
        let (a, b, c, dd) = (parse(&raw.a), parse(&raw.b), parse(&raw.c), parse(&raw.d));
        let (a, b, c, dd) = (
            a.map_err(D::Error::custom)?,
            b.map_err(D::Error::custom)?,
            c.map_err(D::Error::custom)?,
            dd.map_err(D::Error::custom)?,
        );
        CurveFamily::new(&a, &b, &c, &dd).map_err(D::Error::custom)
    }
}

/// The sparse family with `p0010 = 1/5 − ε`, `p1100 = ε` and
/// `p0110 = p1010 = p1101 = p1111 = 1/5`.
pub fn reference_family() -> CurveFamily {
    CurveFamily::new(&[0b0110, 0b1010, 0b1101, 0b1111], &[0b0010], &[0b1100], &[]).expect("valid partition")
}

/// The assumptions `⊥(X,Z|U)` and `⊥(Y,Z|U)` of the conditional inequality handled here.
pub fn xz_yz_given_u() -> Vec<CIStatement> {
    vec![CIStatement::of(Var::X, Var::Z, &[Var::U]), CIStatement::of(Var::Y, Var::Z, &[Var::U])]
}

/// A table whose atoms are affine forms in `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicTable {
    atoms: [AffineForm; NUM_ATOMS],
}

impl SymbolicTable {
    pub fn new(atoms: [AffineForm; NUM_ATOMS]) -> SymbolicTable {
        SymbolicTable { atoms }
    }

    pub fn atoms(&self) -> &[AffineForm; NUM_ATOMS] {
        &self.atoms
    }

    pub fn sum(&self) -> AffineForm {
        let mut s = AffineForm::zero();
        self.atoms.iter().for_each(|a| s += a);
        s
    }

    /// The `ε = 0` limit.
    pub fn at_zero(&self) -> Result<JointTable> {
        JointTable::new(std::array::from_fn(|i| self.atoms[i].alpha.clone()))
    }

    pub fn eval(&self, eps: f64) -> [f64; NUM_ATOMS] {
        std::array::from_fn(|i| self.atoms[i].eval(eps))
    }

    /// Marginal cells, indexed as in [`crate::dist::MarginalTable`].
    pub fn marginal_cells(&self, vars: Subset) -> Vec<AffineForm> {
        let mut cells = vec![AffineForm::zero(); 1 << vars.len()];
        for (atom, m) in self.atoms.iter().enumerate() {
            cells[cell_of_atom(atom, vars)] += m;
        }
        cells
    }
}

pub fn family_table(f: &CurveFamily) -> SymbolicTable {
    let ab = (f.a().len() + f.b().len()) as i64;
    let base = rat(1, ab);
    let slope_c = rat(f.b().len() as i64, f.c().len() as i64);
    let mut atoms: [AffineForm; NUM_ATOMS] = std::array::from_fn(|_| AffineForm::zero());
    for &i in f.a() {
        atoms[i] = AffineForm::new(base.clone(), Rational::zero());
    }
    for &i in f.b() {
        atoms[i] = AffineForm::new(base.clone(), -Rational::one());
    }
    for &i in f.c() {
        atoms[i] = AffineForm::new(Rational::zero(), slope_c.clone());
    }
    SymbolicTable::new(atoms)
}

/// `Σ_k (c_k + d_k·log ε)·ε^k` truncated after order `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsSeries {
    c: Vec<LogLin>,
    d: Vec<Rational>,
}

impl EpsSeries {
    pub fn zero(order: usize) -> EpsSeries {
        EpsSeries { c: vec![LogLin::zero(); order + 1], d: vec![Rational::zero(); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    /// Analytic coefficient of `ε^k`.
    pub fn c(&self, k: usize) -> &LogLin {
        &self.c[k]
    }

    /// Coefficient of `ε^k·log ε`.
    pub fn d(&self, k: usize) -> &Rational {
        &self.d[k]
    }

    pub fn term_is_zero(&self, k: usize) -> bool {
        self.c[k].is_zero() && self.d[k].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        (0..=self.order()).all(|k| self.term_is_zero(k))
    }

    /// Smallest order with a nonzero term.
    pub fn leading_order(&self) -> Option<usize> {
        (0..=self.order()).find(|k| !self.term_is_zero(*k))
    }

    pub fn eval(&self, eps: f64) -> f64 {
        (0..=self.order())
            .map(|k| (self.c[k].to_f64() + self.d[k].to_f64().expect("finite") * eps.ln()) * eps.powi(k as i32))
            .sum()
    }

    fn add_scaled(&mut self, o: &EpsSeries, k: i64) {
        let k = Rational::from_integer(BigInt::from(k));
        for j in 0..=self.order() {
            self.c[j] = std::mem::take(&mut self.c[j]) + o.c[j].scale(&k);
            self.d[j] += &o.d[j] * &k;
        }
    }
}

impl fmt::Display for EpsSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eps = |k: usize| match k {
            0 => String::new(),
            1 => "·ε".to_string(),
            _ => format!("·ε^{k}"),
        };
        let eps_log = |k: usize| match k {
            0 => "·log ε".to_string(),
            1 => "·ε·log ε".to_string(),
            _ => format!("·ε^{k}·log ε"),
        };
        let mut parts = Vec::new();
        for k in 0..=self.order() {
            if !self.c[k].is_zero() {
                parts.push(format!("({}){}", self.c[k], eps(k)));
            }
            if !self.d[k].is_zero() {
                parts.push(format!("({}){}", self.d[k], eps_log(k)));
            }
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(ε^{})", parts.join(" + "), self.order() + 1)
    }
}

/// Expansion of `−m·log m` for a cell `m = α + β·ε`.
fn cell_series(m: &AffineForm, order: usize) -> Result<EpsSeries> {
    let mut s = EpsSeries::zero(order);
    let (alpha, beta) = (&m.alpha, &m.beta);
    if alpha.is_negative() || (alpha.is_zero() && beta.is_negative()) {
        return Err(Error::NonAffineAtom(format!("cell {m} is negative for small ε")));
    }
    if alpha.is_zero() {
        if !beta.is_zero() && order >= 1 {
            s.c[1] = -LogLin::log_of(beta).scale(beta);
            s.d[1] = -beta.clone();
        }
        return Ok(s);
    }
    // −(α + βε)(log α + Σ_j (−1)^{j+1} u^j ε^j / j),  u = β/α
    let log_alpha = LogLin::log_of(alpha);
    s.c[0] = -log_alpha.scale(alpha);
    let u = beta / alpha;
    let a = |j: usize| -> Rational {
        let sign = if j % 2 == 1 { Rational::one() } else { -Rational::one() };
        sign * num_traits::pow(u.clone(), j) / Rational::from_integer(BigInt::from(j))
    };
    for k in 1..=order {
        let mut coeff = -(alpha * a(k));
        if k >= 2 {
            coeff -= beta * a(k - 1);
        }
        s.c[k] = LogLin::from_rational(coeff);
        if k == 1 {
            s.c[k] = std::mem::take(&mut s.c[k]) - log_alpha.scale(beta);
        }
    }
    Ok(s)
}

/// Series of the entropy `h(vars)` along a symbolic table.
pub fn entropy_series(t: &SymbolicTable, vars: Subset, order: usize) -> Result<EpsSeries> {
    let mut s = EpsSeries::zero(order);
    for cell in t.marginal_cells(vars) {
        s.add_scaled(&cell_series(&cell, order)?, 1);
    }
    Ok(s)
}

/// Series of a linear entropy functional along the family's curve.
pub fn functional_series(f: &LinFunctional, fam: &CurveFamily, order: usize) -> Result<EpsSeries> {
    assert!(order >= 1, "truncation order must be at least 1");
    let t = family_table(fam);
    let mut s = EpsSeries::zero(order);
    for (sub, k) in f.terms() {
        s.add_scaled(&entropy_series(&t, sub, order)?, k);
    }
    Ok(s)
}

/// Float value of a functional on the curve at `eps`.
pub fn functional_at(f: &LinFunctional, fam: &CurveFamily, eps: f64) -> f64 {
    f.eval(&EntropyVector::from_probabilities(&family_table(fam).eval(eps)))
}

/// Witness that `◻(XY|ZU) + λ·Σ △` is negative for small `ε`, whatever `λ ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialCertificate {
    pub family: CurveFamily,
    pub order: usize,
    /// `d_k` of the Ingleton expression, positive.
    pub conclusion_logeps: Rational,
    /// `c_k` of the Ingleton expression.
    pub conclusion_analytic: LogLin,
    /// `c_k` of every assumption's difference functional.
    pub assumptions: Vec<(CIStatement, LogLin)>,
}

impl Serialize for EssentialCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Assumption<'a> {
            statement: &'a CIStatement,
            analytic: &'a LogLin,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            family: &'a CurveFamily,
            order: usize,
            conclusion_logeps: String,
            conclusion_analytic: &'a LogLin,
            assumptions: Vec<Assumption<'a>>,
        }
        Out {
            family: &self.family,
            order: self.order,
            conclusion_logeps: format_rational(&self.conclusion_logeps),
            conclusion_analytic: &self.conclusion_analytic,
            assumptions: self
                .assumptions
                .iter()
                .map(|(statement, analytic)| Assumption { statement, analytic })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EssentialCertificate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<EssentialCertificate, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Assumption {
            statement: CIStatement,
            analytic: LogLin,
        }
        #[derive(Deserialize)]
        struct In {
            family: CurveFamily,
            order: usize,
            conclusion_logeps: String,
            conclusion_analytic: LogLin,
            assumptions: Vec<Assumption>,
        }
        let raw = In::deserialize(d)?;
        Ok(EssentialCertificate {
            family: raw.family,
            order: raw.order,
            conclusion_logeps: parse_rational(&raw.conclusion_logeps).map_err(D::Error::custom)?,
            conclusion_analytic: raw.conclusion_analytic,
            assumptions: raw.assumptions.into_iter().map(|a| (a.statement, a.analytic)).collect(),
        })
    }
}

/// Applies the domination criterion at the leading order `k` of `◻(XY|ZU)`:
/// every series vanishes below `k`, the Ingleton `ε^k·log ε` coefficient is
/// positive, and no assumption has an `ε^k·log ε` term.
pub fn prove_essential(assumptions: &[CIStatement], fam: &CurveFamily, order: usize) -> Result<EssentialCertificate> {
    let limit = family_table(fam).at_zero()?;
    let violated: Vec<String> = assumptions.iter().filter(|s| !holds_exact(&limit, s)).map(|s| s.to_string()).collect();
    if !violated.is_empty() {
        return Err(Error::LimitViolatesAssumptions(violated));
    }
    let conclusion = functional_series(&ingleton_xy_zu(), fam, order)?;
    let k = conclusion.leading_order().ok_or(Error::Inconclusive(order))?;
    let series: Vec<EpsSeries> =
        assumptions.iter().map(|s| functional_series(&s.delta_functional(), fam, order)).collect::<Result<_>>()?;
    let dominated =
        conclusion.d(k).is_positive() && series.iter().all(|s| (0..k).all(|j| s.term_is_zero(j)) && s.d(k).is_zero());
    if !dominated {
        return Err(Error::Inconclusive(order));
    }
    Ok(EssentialCertificate {
        family: fam.clone(),
        order: k,
        conclusion_logeps: conclusion.d(k).clone(),
        conclusion_analytic: conclusion.c(k).clone(),
        assumptions: assumptions.iter().zip(&series).map(|(s, ser)| (*s, ser.c(k).clone())).collect(),
    })
}

/// Class weights `A, B, C, D` for [`sample_families`].
pub const SAMPLING_WEIGHTS: [f64; 4] = [0.25, 0.075, 0.075, 0.6];

/// Reproducible stream of valid recipe partitions.
pub fn sample_families(seed: u64, count: usize) -> Vec<CurveFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = WeightedIndex::new(SAMPLING_WEIGHTS).expect("positive weights");
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut classes: [Vec<usize>; 4] = Default::default();
        for atom in 0..NUM_ATOMS {
            classes[dist.sample(&mut rng)].push(atom);
        }
        if let Ok(f) = CurveFamily::new(&classes[0], &classes[1], &classes[2], &classes[3]) {
            out.push(f);
        }
    }
    out
}

/// First family of the list, in order, admitting a certificate.
pub fn find_certificate(
    assumptions: &[CIStatement],
    families: &[CurveFamily],
    order: usize,
) -> Option<EssentialCertificate> {
    families.par_iter().find_map_first(|f| prove_essential(assumptions, f, order).ok())
}

/// Numerical value of a certificate's leading coefficient for a given `λ`:
/// `c_k(◻) + λ·Σ c_k(△) + d_k·log ε`.
pub fn leading_coefficient(cert: &EssentialCertificate, lambda: f64, eps: f64) -> f64 {
    cert.conclusion_analytic.to_f64()
        + lambda * cert.assumptions.iter().map(|(_, c)| c.to_f64()).sum::<f64>()
        + cert.conclusion_logeps.to_f64().expect("finite") * eps.ln()
}

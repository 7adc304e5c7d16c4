//! Coverage of the CI-structure lattice by antecedents (sets implying
//! `◻(XY|ZU) ≥ 0`) and counterexamples (sets admitting a violation).
//!
//! A structure containing an antecedent implies the inequality; a structure
//! contained in a counterexample's CI set is refuted by it. Structures that
//! are neither are the open cases. The scan is exhaustive over the 2²⁴ masks
//! or over an interval of the lattice.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ci::{ci_structure, CIStatement, CIStructure};
use crate::dist::{paper_example, DistFile, JointTable};
use crate::entropy::exact_sign;
use crate::error::{Error, Result};
use crate::ingleton::ingleton_xy_zu;
use crate::vars::Var::{U, X, Y, Z};
use crate::vars::VarPerm;

/// `{id, X↔Y, Z↔U, both}`, the stabilizer of `◻(XY|ZU)` used throughout.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    elements: [VarPerm; 4],
}

impl SymmetryGroup {
    pub fn new() -> SymmetryGroup {
        let xy = VarPerm::swap(X, Y);
        let zu = VarPerm::swap(Z, U);
        let both = xy.compose(&zu);
        SymmetryGroup { elements: [VarPerm::identity(), xy, zu, both] }
    }

    pub fn elements(&self) -> &[VarPerm; 4] {
        &self.elements
    }
}

impl Default for SymmetryGroup {
    fn default() -> SymmetryGroup {
        SymmetryGroup::new()
    }
}

/// Distinct images of `s`, sorted.
pub fn symmetry_orbit(s: CIStructure) -> Vec<CIStructure> {
    let mut orbit: Vec<CIStructure> = SymmetryGroup::new().elements().iter().map(|g| s.map(g)).collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

/// Smallest mask in the orbit.
pub fn orbit_representative(s: CIStructure) -> CIStructure {
    symmetry_orbit(s)[0]
}

fn structure(stmts: &[CIStatement]) -> CIStructure {
    CIStructure::from_statements(stmts.iter())
}

fn st(i: crate::vars::Var, j: crate::vars::Var, k: &[crate::vars::Var]) -> CIStatement {
    CIStatement::of(i, j, k)
}

/// The ten inclusion-minimal antecedents, one per symmetry class:
/// five single statements followed by five pairs.
pub fn theorem_generators() -> Vec<CIStructure> {
    vec![
        structure(&[st(Z, U, &[])]),
        structure(&[st(X, Z, &[])]),
        structure(&[st(X, Z, &[Y])]),
        structure(&[st(X, Y, &[Z, U])]),
        structure(&[st(X, Z, &[Y, U])]),
        structure(&[st(X, Y, &[]), st(X, Y, &[Z])]),
        structure(&[st(X, Y, &[Z]), st(Y, U, &[Z])]),
        structure(&[st(X, Z, &[U]), st(X, U, &[Z])]),
        structure(&[st(X, Z, &[U]), st(Z, U, &[X])]),
        structure(&[st(X, Z, &[U]), st(Y, Z, &[U])]),
    ]
}

/// Union of the generators' orbits, sorted: 14 single statements and 14 pairs.
pub fn theorem_antecedents() -> Vec<CIStructure> {
    close_under_symmetry(&theorem_generators())
}

fn close_under_symmetry(sets: &[CIStructure]) -> Vec<CIStructure> {
    let mut out: Vec<CIStructure> = sets.iter().flat_map(|s| symmetry_orbit(*s)).collect();
    out.sort();
    out.dedup();
    out
}

/// `𝓛₀ = {⊥(X,Z|U), ⊥(Y,U|Z)}`.
pub fn l0() -> CIStructure {
    structure(&[st(X, Z, &[U]), st(Y, U, &[Z])])
}

/// `𝓛₁ = 𝓛₀ ∪ {⊥(Z,U|XY)}`.
pub fn l1() -> CIStructure {
    l0().with(&st(Z, U, &[X, Y]))
}

/// `𝓛₂ = 𝓛₀ ∪ {⊥(X,Y)}`.
pub fn l2() -> CIStructure {
    l0().with(&st(X, Y, &[]))
}

/// `𝓛 = 𝓛₁ ∪ 𝓛₂`.
pub fn l_full() -> CIStructure {
    l1().union(l2())
}

/// Resolves `L0`, `L1`, `L2`, `L`, or a comma-separated statement list.
pub fn named_structure(name: &str) -> Result<CIStructure> {
    match name.trim() {
        "L0" | "𝓛₀" => Ok(l0()),
        "L1" | "𝓛₁" => Ok(l1()),
        "L2" | "𝓛₂" => Ok(l2()),
        "L" | "𝓛" => Ok(l_full()),
        other => CIStructure::parse_list(other),
    }
}

/// Whether a counterexample was known before the reference distribution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    #[default]
    Prior,
    New,
}

/// A CI set admitting an Ingleton violation. With a table the claim is
/// checked; without one it is trusted and reported as external.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleRecord {
    pub ci_set: CIStructure,
    pub source: String,
    pub table: Option<JointTable>,
    pub stage: Stage,
}

impl CounterexampleRecord {
    pub fn is_external(&self) -> bool {
        self.table.is_none()
    }

    /// `ci_structure(table) = ci_set` and `◻(XY|ZU) < 0` on the table.
    pub fn verify(&self) -> Result<()> {
        let Some(t) = &self.table else { return Ok(()) };
        let actual = ci_structure(t);
        if actual != self.ci_set {
            return Err(Error::InvalidRecord(format!(
                "{}: table has CI structure {actual}, record claims {}",
                self.source, self.ci_set
            )));
        }
        if exact_sign(&ingleton_xy_zu(), t).sign != -1 {
            return Err(Error::InvalidRecord(format!(
                "{}: table does not violate the Ingleton inequality",
                self.source
            )));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    ci_set: CIStructure,
    source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    atoms: Option<BTreeMap<String, String>>,
    #[serde(default)]
    stage: Stage,
}

/// Antecedents and counterexamples, plus free-text notes on records still to be transcribed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AntecedentDB {
    pub antecedents: Vec<CIStructure>,
    pub counterexamples: Vec<CounterexampleRecord>,
    pub pending: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct DbJson {
    antecedents: Vec<CIStructure>,
    counterexamples: Vec<RecordJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pending: Vec<String>,
}

impl AntecedentDB {
    /// Parses and verifies every record that carries a table.
    pub fn from_json(text: &str) -> Result<AntecedentDB> {
        let raw: DbJson = serde_json::from_str(text)?;
        let counterexamples = raw
            .counterexamples
            .into_iter()
            .map(|r| {
                let table = r.atoms.map(|atoms| JointTable::try_from(DistFile { atoms })).transpose()?;
                let rec = CounterexampleRecord { ci_set: r.ci_set, source: r.source, table, stage: r.stage };
                rec.verify()?;
                Ok(rec)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AntecedentDB { antecedents: raw.antecedents, counterexamples, pending: raw.pending })
    }

    pub fn to_json(&self) -> String {
        let raw = DbJson {
            antecedents: self.antecedents.clone(),
            counterexamples: self
                .counterexamples
                .iter()
                .map(|r| RecordJson {
                    ci_set: r.ci_set,
                    source: r.source.clone(),
                    atoms: r.table.as_ref().map(|t| DistFile::from(t).atoms),
                    stage: r.stage,
                })
                .collect(),
            pending: self.pending.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }

    /// Adds every symmetric image of every antecedent and counterexample.
    pub fn closed(&self) -> AntecedentDB {
        let mut counterexamples: Vec<CounterexampleRecord> = Vec::new();
        for r in &self.counterexamples {
            for g in SymmetryGroup::new().elements() {
                let image = CounterexampleRecord {
                    ci_set: r.ci_set.map(g),
                    table: r.table.as_ref().map(|t| t.permute_vars(g)),
                    ..r.clone()
                };
                if !counterexamples.iter().any(|c| c.ci_set == image.ci_set && c.stage == image.stage) {
                    counterexamples.push(image);
                }
            }
        }
        AntecedentDB {
            antecedents: close_under_symmetry(&self.antecedents),
            counterexamples,
            pending: self.pending.clone(),
        }
    }

    /// The database as it stood before records of `Stage::New`.
    pub fn prior(&self) -> AntecedentDB {
        AntecedentDB {
            counterexamples: self.counterexamples.iter().filter(|r| r.stage == Stage::Prior).cloned().collect(),
            ..self.clone()
        }
    }

    pub fn with_record(mut self, r: CounterexampleRecord) -> AntecedentDB {
        self.counterexamples.push(r);
        self
    }
}

/// `𝓛₀` refuted by an external counterexample known beforehand.
pub fn l0_record() -> CounterexampleRecord {
    CounterexampleRecord {
        ci_set: l0(),
        source: "external counterexample known beforehand".into(),
        table: None,
        stage: Stage::Prior,
    }
}

/// The reference distribution, refuting `𝓛`.
pub fn reference_record() -> CounterexampleRecord {
    CounterexampleRecord {
        ci_set: l_full(),
        source: "rational distribution with p1011 = 2/99, p1111 = 2/11".into(),
        table: Some(paper_example()),
        stage: Stage::New,
    }
}

/// Known antecedents, the external `𝓛₀` record and the reference distribution.
pub fn default_db() -> AntecedentDB {
    AntecedentDB {
        antecedents: theorem_generators(),
        counterexamples: vec![l0_record(), reference_record()],
        pending: Vec::new(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Implies,
    Refuted,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Implies => "IMPLIES",
            Verdict::Refuted => "REFUTED",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

/// Bitmask view of a database for the scans.
struct Masks {
    antecedents: Vec<u32>,
    refuting: Vec<u32>,
}

impl Masks {
    fn new(db: &AntecedentDB) -> Masks {
        Masks {
            antecedents: db.antecedents.iter().map(|s| s.bits()).collect(),
            refuting: db.counterexamples.iter().map(|r| r.ci_set.bits()).collect(),
        }
    }

    fn verdict(&self, s: u32) -> Result<Verdict> {
        let implies = self.antecedents.iter().any(|a| a & !s == 0);
        let refuted = self.refuting.iter().any(|c| s & !c == 0);
        match (implies, refuted) {
            (true, true) => {
                Err(Error::InconsistentDb(format!("{} both implies and is refuted", CIStructure::from_bits(s))))
            }
            (true, false) => Ok(Verdict::Implies),
            (false, true) => Ok(Verdict::Refuted),
            (false, false) => Ok(Verdict::Unknown),
        }
    }
}

/// Classifies `s` against the database as given (no symmetric closure is added).
pub fn covered(s: CIStructure, db: &AntecedentDB) -> Result<Verdict> {
    Masks::new(db).verdict(s.bits())
}

/// All `UNKNOWN` structures, sorted by mask. With `restrict = (lo, hi)` only
/// structures `lo ⊆ s ⊆ hi` are scanned.
pub fn enumerate_uncovered(
    db: &AntecedentDB,
    restrict: Option<(CIStructure, CIStructure)>,
) -> Result<Vec<CIStructure>> {
    let masks = Masks::new(db);
    let keep = |s: u32| -> Option<Result<CIStructure>> {
        match masks.verdict(s) {
            Ok(Verdict::Unknown) => Some(Ok(CIStructure::from_bits(s))),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        }
    };
    let mut out: Vec<CIStructure> = match restrict {
        Some((lo, hi)) => {
            if !lo.is_subset_of(hi) {
                return Ok(Vec::new());
            }
            let free = hi.bits() & !lo.bits();
            // all submasks of `free`
            let mut subs = Vec::with_capacity(1 << free.count_ones());
            let mut sub = free;
            loop {
                subs.push(lo.bits() | sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
            subs.into_par_iter().filter_map(keep).collect::<Result<_>>()?
        }
        None => {
            const CHUNK: u32 = 1 << 16;
            (0..(1u32 << 24) / CHUNK)
                .into_par_iter()
                .flat_map_iter(|c| (c * CHUNK..(c + 1) * CHUNK).filter_map(keep))
                .collect::<Result<_>>()?
        }
    };
    out.sort();
    Ok(out)
}

/// One representative (the smallest mask) per symmetry class.
pub fn dedup_by_symmetry(list: &[CIStructure]) -> Vec<CIStructure> {
    let mut reps: Vec<CIStructure> = list.iter().map(|s| orbit_representative(*s)).collect();
    reps.sort();
    reps.dedup();
    reps
}

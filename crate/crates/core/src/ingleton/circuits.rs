//! Circuits of an integer matrix: kernel vectors with inclusion-minimal
//! support and coprime entries.
//!
//! Enumeration walks independent column sets `S` in increasing column order.
//! Every remaining column `c > max(S)` is kept reduced against `S` together
//! with the integer combination that produced it, so the reduced vector is
//! `λ·col_c − Σ_{s∈S} β_s·col_s`. When the row part vanishes, the
//! combination is the unique dependency of `S ∪ {c}`, and it is a circuit
//! iff its support is all of `S ∪ {c}`. Each circuit `C` is met exactly once,
//! at `S = C \ {max C}`.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;

use crate::ci::enumerate_elementary;
use crate::vars::Subset;

use super::ingleton_xy_zu;

/// Column index of `◻(XY|ZU)` in [`functional_matrix`].
pub const INGLETON_COLUMN: usize = 24;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {c} has wrong length");
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, *x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: i64) {
        self.data[r * self.cols + c] = x;
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// `M·v` for a sparse vector given as `(column, coefficient)` pairs.
    pub fn apply(&self, entries: &[(usize, i64)]) -> Vec<i64> {
        (0..self.rows).map(|r| entries.iter().map(|(c, k)| self.get(r, *c) * k).sum()).collect()
    }
}

/// 16 × 25: the 24 difference functionals in enumeration order, then `◻(XY|ZU)`.
/// Row `r` holds the coefficient of `h(S)` for the subset with mask `r`.
pub fn functional_matrix() -> IntMatrix {
    let mut columns: Vec<Vec<i64>> = enumerate_elementary().iter().map(|s| s.delta_functional().0.to_vec()).collect();
    columns.push(ingleton_xy_zu().0.to_vec());
    let m = IntMatrix::from_columns(16, &columns);
    debug_assert!(Subset::all().count() == m.rows());
    m
}

/// Names of the 25 columns of [`functional_matrix`].
pub fn column_names() -> Vec<String> {
    let mut names: Vec<String> = enumerate_elementary().iter().map(|s| s.to_string()).collect();
    names.push("◻(XY|ZU)".to_string());
    names
}

/// Rank by fraction-free elimination.
pub fn matrix_rank(m: &IntMatrix) -> usize {
    let mut cols: Vec<Vec<i64>> = (0..m.cols()).map(|c| m.column(c)).collect();
    let mut rank = 0;
    while let Some(pos) = cols.iter().position(|c| c.iter().any(|x| *x != 0)) {
        let pivot = cols.swap_remove(pos);
        let row = pivot.iter().position(|x| *x != 0).expect("nonzero");
        for c in cols.iter_mut() {
            eliminate(c, &pivot, row);
        }
        rank += 1;
    }
    rank
}

/// `q ← p[row]·q − q[row]·p`, then divide out the content.
fn eliminate(q: &mut [i64], p: &[i64], row: usize) {
    let (a, b) = (p[row], q[row]);
    if b == 0 {
        return;
    }
    let mut g = 0i64;
    for (x, y) in q.iter_mut().zip(p) {
        *x = a * *x - b * y;
        g = g.gcd(x);
    }
    if g > 1 {
        q.iter_mut().for_each(|x| *x /= g);
    }
}

/// A circuit as sparse `(column, coefficient)` pairs sorted by column;
/// entries are coprime and the first is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circuit(Vec<(usize, i64)>);

impl Circuit {
    /// Canonicalizes an arbitrary nonzero kernel vector given densely.
    pub fn from_dense(v: &[i64]) -> Circuit {
        let mut entries: Vec<(usize, i64)> =
            v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(c, x)| (c, *x)).collect();
        assert!(!entries.is_empty(), "zero vector is not a circuit");
        let mut g = entries.iter().fold(0i64, |g, (_, x)| g.gcd(x));
        if entries[0].1 < 0 {
            g = -g;
        }
        entries.iter_mut().for_each(|(_, x)| *x /= g);
        Circuit(entries)
    }

    pub fn entries(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn support_size(&self) -> usize {
        self.0.len()
    }

    /// Bitmask of supporting columns.
    pub fn support(&self) -> u64 {
        self.0.iter().fold(0, |m, (c, _)| m | (1 << c))
    }

    pub fn coefficient(&self, col: usize) -> i64 {
        self.0.iter().find(|(c, _)| *c == col).map_or(0, |(_, k)| *k)
    }

    /// `name:coefficient` pairs joined by commas.
    pub fn to_csv_line(&self, names: &[String]) -> String {
        self.0.iter().map(|(c, k)| format!("{}:{}", names[*c], k)).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(c, k)| format!("{k}·c{c}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

type Reduced = (usize, Vec<i64>);

/// All circuits of `m`, sorted canonically.
pub fn circuits(m: &IntMatrix) -> Vec<Circuit> {
    let (rows, n) = (m.rows(), m.cols());
    assert!(n <= 64, "at most 64 columns are supported");
    let mut out = Vec::new();
    let mut live = Vec::new();
    for c in 0..n {
        let mut v = m.column(c);
        v.resize(rows + n, 0);
        v[rows + c] = 1;
        if v[..rows].iter().all(|x| *x == 0) {
            out.push(Circuit::from_dense(&v[rows..]));
        } else {
            live.push((c, v));
        }
    }
    out.extend(explore(&live, 0, rows));
    out.sort();
    out.dedup();
    out
}

/// `cands` are the columns after `max(S)` that are independent of `S`, reduced against it.
fn explore(cands: &[Reduced], depth: usize, rows: usize) -> Vec<Circuit> {
    let branch = |idx: usize| -> Vec<Circuit> {
        let (_, pivot) = &cands[idx];
        let row = pivot[..rows].iter().position(|x| *x != 0).expect("independent column");
        let mut found = Vec::new();
        let mut next = Vec::with_capacity(cands.len() - idx - 1);
        for (c, v) in &cands[idx + 1..] {
            let mut r = v.clone();
            eliminate(&mut r, pivot, row);
            if r[..rows].iter().all(|x| *x == 0) {
                // dependency on S ∪ {pivot} ∪ {c}; a circuit iff fully supported
                let combo = &r[rows..];
                if combo.iter().filter(|x| **x != 0).count() == depth + 2 {
                    found.push(Circuit::from_dense(combo));
                }
            } else {
                next.push((*c, r));
            }
        }
        if !next.is_empty() {
            found.extend(explore(&next, depth + 1, rows));
        }
        found
    };
    if depth < 2 {
        (0..cands.len()).into_par_iter().flat_map_iter(branch).collect()
    } else {
        (0..cands.len()).flat_map(branch).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all column subsets: minimal dependent sets.
    fn brute_force(m: &IntMatrix) -> Vec<Circuit> {
        let n = m.cols();
        let sub = |mask: u32| -> IntMatrix {
            let cols: Vec<Vec<i64>> = (0..n).filter(|c| mask & (1 << c) != 0).map(|c| m.column(c)).collect();
            IntMatrix::from_columns(m.rows(), &cols)
        };
        let dependent = |mask: u32| matrix_rank(&sub(mask)) < mask.count_ones() as usize;
        let mut minimal = Vec::new();
        for mask in 1u32..(1 << n) {
            if dependent(mask) && (0..n).filter(|c| mask & (1 << c) != 0).all(|c| !dependent(mask & !(1 << c))) {
                minimal.push(mask);
            }
        }
        // kernel of a circuit's columns is one-dimensional: run the enumerator on it
        let mut out: Vec<Circuit> = minimal
            .into_iter()
            .map(|mask| {
                let cols: Vec<usize> = (0..n).filter(|c| mask & (1 << c) != 0).collect();
                let local = circuits(&sub(mask));
                let full = local.iter().find(|c| c.support_size() == cols.len()).expect("circuit kernel");
                let mut dense = vec![0; n];
                for (k, x) in full.entries() {
                    dense[cols[*k]] = *x;
                }
                Circuit::from_dense(&dense)
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn small_matrix_against_brute_force() {
        let m = IntMatrix::from_columns(
            3,
            &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 2], vec![2, 0, 4], vec![0, 0, 0], vec![1, -1, 1]],
        );
        let got = circuits(&m);
        assert_eq!(got, brute_force(&m));
        for c in &got {
            assert!(m.apply(c.entries()).iter().all(|x| *x == 0));
        }
        assert!(got.contains(&Circuit(vec![(5, 1)])));
        assert!(got.contains(&Circuit(vec![(0, 1), (1, 1), (2, -1)])));
    }

    #[test]
    fn rank_of_functional_matrix() {
        let m = functional_matrix();
        assert_eq!((m.rows(), m.cols()), (16, 25));
        assert_eq!(matrix_rank(&m), 11);
        assert_eq!(m.column(INGLETON_COLUMN), ingleton_xy_zu().0.to_vec());
        assert!((0..16).all(|r| (0..25).all(|c| m.get(r, c).abs() <= 1)));
    }

    #[test]
    fn canonical_sign_and_content() {
        let c = Circuit::from_dense(&[0, -4, 6, 0, 2]);
        assert_eq!(c.entries(), &[(1, 2), (2, -3), (4, -1)]);
        assert_eq!(c.to_csv_line(&["a", "b", "c", "d", "e"].map(String::from)), "b:2,c:-3,e:-1");
    }
}

#![allow(dead_code)]

use ingleton_core::dist::rat;
use ingleton_core::vars::{atom_state, Var, NUM_ATOMS};
use ingleton_core::{JointTable, Rational};
use rand::Rng;

/// Normalizes non-negative integer weights into a table; all-zero weights give the point mass on `0000`.
pub fn table_from_weights(w: &[u32; NUM_ATOMS]) -> JointTable {
    let total: i64 = w.iter().map(|x| i64::from(*x)).sum();
    if total == 0 {
        let mut atoms: [Rational; NUM_ATOMS] = std::array::from_fn(|_| rat(0, 1));
        atoms[0] = rat(1, 1);
        return JointTable::new(atoms).unwrap();
    }
    JointTable::new(std::array::from_fn(|i| rat(i64::from(w[i]), total))).unwrap()
}

/// `P(X,Y,Z,U) = P(first) · P(rest)` where `first` is a single variable
/// distributed as `(a, b)` and the rest follow `w` on the other three bits.
pub fn split_table(first: Var, (a, b): (u32, u32), w: &[u32; 8]) -> JointTable {
    let others: Vec<Var> = Var::ALL.into_iter().filter(|v| *v != first).collect();
    let weights: [u32; NUM_ATOMS] = std::array::from_fn(|atom| {
        let head = if atom_state(atom, first) == 0 { a } else { b };
        let idx = others.iter().enumerate().fold(0, |acc, (k, v)| acc | (atom_state(atom, *v) << k));
        head * w[idx]
    });
    table_from_weights(&weights)
}

/// Mixture of generic tables, sparse tables and tables with an independent variable.
pub fn random_table<R: Rng>(rng: &mut R) -> JointTable {
    match rng.gen_range(0..4) {
        0 => table_from_weights(&std::array::from_fn(|_| rng.gen_range(0..=12))),
        1 => table_from_weights(&std::array::from_fn(|_| if rng.gen_bool(0.6) { 0 } else { rng.gen_range(1..=6) })),
        _ => {
            let v = Var::from_index(rng.gen_range(0..4));
            split_table(v, (rng.gen_range(0..=4), rng.gen_range(1..=4)), &std::array::from_fn(|_| rng.gen_range(0..=5)))
        }
    }
}

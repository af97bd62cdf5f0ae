//! Independent oracles shared by the integration tests. Nothing here calls
//! into the chain or compete modules.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

/// mini10 rules written out by hand: reflect past 10, then 3 -> 7, 8 -> 2.
pub fn mini10_step(pos: usize, roll: usize) -> usize {
    let raw = pos + roll;
    let landed = if raw > 10 { 20 - raw } else { raw };
    match landed {
        3 => 7,
        8 => 2,
        s => s,
    }
}

pub const MINI10_STATES: [usize; 9] = [0, 1, 2, 4, 5, 6, 7, 9, 10];

/// P(finished within `s` moves from `start`) by walking all 6^s roll
/// sequences.
pub fn enumerate_g(step: impl Fn(usize, usize) -> usize + Copy, finish: usize, start: usize, s: u32) -> f64 {
    fn walk(step: impl Fn(usize, usize) -> usize + Copy, finish: usize, pos: usize, left: u32) -> u64 {
        if pos == finish {
            return 6u64.pow(left);
        }
        if left == 0 {
            return 0;
        }
        (1..=6).map(|r| walk(step, finish, step(pos, r), left - 1)).sum()
    }
    walk(step, finish, start, s) as f64 / 6f64.powi(s as i32)
}

/// Finish-time mass `f[s]` for `s = 0..=s_max` by pushing a distribution
/// forward one move at a time. The last entry of the result is the mass
/// still unfinished after `s_max` moves.
pub fn forward_profile(
    step: impl Fn(usize, usize) -> usize,
    finish: usize,
    start: usize,
    s_max: usize,
) -> (Vec<f64>, f64) {
    let mut dist: BTreeMap<usize, f64> = BTreeMap::new();
    dist.insert(start, 1.0);
    let mut f = vec![0.0; s_max + 1];
    if start == finish {
        f[0] = 1.0;
        return (f, 0.0);
    }
    for s in 1..=s_max {
        let mut next: BTreeMap<usize, f64> = BTreeMap::new();
        for (&pos, &m) in &dist {
            for r in 1..=6 {
                *next.entry(step(pos, r)).or_default() += m / 6.0;
            }
        }
        f[s] = next.remove(&finish).unwrap_or(0.0);
        dist = next;
    }
    (f, dist.values().sum())
}

/// Q[i][j] as the explicit double sum over finishing rounds, unfinished
/// games counting as finishing after every counted round.
pub fn brute_q(fi: &[f64], fj: &[f64], tail_j: f64) -> f64 {
    let mut q = 0.0;
    for s in 0..fi.len() {
        let mut later = tail_j;
        for t in (s + 1)..fj.len() {
            later += fj[t];
        }
        q += fi[s] * later;
    }
    q
}

/// Expected moves to finish on mini10 by Gaussian elimination on
/// `E[s] = 1 + mean_r E[step(s, r)]`, written independently of nalgebra.
pub fn mini10_expectations() -> BTreeMap<usize, f64> {
    let transient: Vec<usize> = MINI10_STATES.iter().copied().filter(|&s| s != 10).collect();
    let n = transient.len();
    let idx = |s: usize| transient.iter().position(|&t| t == s);
    let mut a = vec![vec![0.0f64; n + 1]; n];
    for (r, &s) in transient.iter().enumerate() {
        a[r][r] += 1.0;
        a[r][n] = 1.0;
        for roll in 1..=6 {
            if let Some(c) = idx(mini10_step(s, roll)) {
                a[r][c] -= 1.0 / 6.0;
            }
        }
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let k = a[r][col] / a[col][col];
                for c in col..=n {
                    a[r][c] -= k * a[col][c];
                }
            }
        }
    }
    let mut out: BTreeMap<usize, f64> = transient
        .iter()
        .enumerate()
        .map(|(r, &s)| (s, a[r][n] / a[r][r]))
        .collect();
    out.insert(10, 0.0);
    out
}

/// Edge of i over j from duration samples, by comparing every pair of
/// samples directly.
pub fn raw_pair_edge(a: &[u64], b: &[u64]) -> f64 {
    let (mut w, mut l) = (0u64, 0u64);
    for &x in a {
        for &y in b {
            if x < y {
                w += 1;
            } else if x > y {
                l += 1;
            }
        }
    }
    (w as f64 - l as f64) / (a.len() * b.len()) as f64
}

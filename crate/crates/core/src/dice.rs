//! Intransitive dice with exact rational probabilities.
//!
//! A die is a list of integer faces with positive probabilities summing to
//! one. By default the higher value wins a duel; [`WinRule::Lower`] flips
//! that, as when faces stand for game durations. A list of dice forms a
//! cycle when each die beats the next one, the last beating the first.
//!
//! Dice files are TOML:
//!
//! ```toml
//! wins = "higher"                  # optional, "higher" or "lower"
//!
//! [[dice]]
//! label = "A"
//! faces = [2, 6, 7]                # fair
//!
//! [[dice]]
//! label = "B"
//! faces = [[1, "1/3"], [3, "2/3"]] # weighted
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};

pub type Prob = BigRational;

fn ratio(num: i64, den: i64) -> Prob {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Die {
    label: String,
    faces: Vec<(i64, Prob)>,
}

impl Die {
    pub fn new(label: impl Into<String>, faces: Vec<(i64, Prob)>) -> Result<Self> {
        let label = label.into();
        let invalid = |reason: &str| Error::InvalidDie {
            label: label.clone(),
            reason: reason.to_string(),
        };
        if faces.is_empty() {
            return Err(invalid("no faces"));
        }
        if faces.iter().any(|(_, p)| !p.is_positive()) {
            return Err(invalid("face probabilities must be positive"));
        }
        let total: Prob = faces.iter().map(|(_, p)| p).sum();
        if !total.is_one() {
            return Err(invalid(&format!("probabilities sum to {total}, not 1")));
        }
        Ok(Die { label, faces })
    }

    /// Equally likely faces; repeated values are allowed.
    pub fn fair(label: impl Into<String>, values: &[i64]) -> Result<Self> {
        let n = values.len() as i64;
        let faces = values.iter().map(|&v| (v, ratio(1, n.max(1)))).collect();
        Die::new(label, faces)
    }

    /// Faces given as `(value, numerator, denominator)`.
    pub fn weighted(label: impl Into<String>, faces: &[(i64, i64, i64)]) -> Result<Self> {
        let label = label.into();
        if faces.iter().any(|&(_, _, d)| d == 0) {
            return Err(Error::InvalidDie {
                label,
                reason: "zero denominator".into(),
            });
        }
        let faces = faces.iter().map(|&(v, n, d)| (v, ratio(n, d))).collect();
        Die::new(label, faces)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn faces(&self) -> &[(i64, Prob)] {
        &self.faces
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

impl fmt::Display for Die {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}=(", self.label)?;
        let fair = self.faces.iter().all(|(_, p)| *p == self.faces[0].1);
        for (n, (v, p)) in self.faces.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            if fair {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}:{p}")?;
            }
        }
        f.write_str(")")
    }
}

/// Which face value wins a duel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WinRule {
    #[default]
    Higher,
    Lower,
}

impl WinRule {
    pub fn as_str(self) -> &'static str {
        match self {
            WinRule::Higher => "higher",
            WinRule::Lower => "lower",
        }
    }
}

/// Exact outcome probabilities of one die against another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuelResult {
    pub win: Prob,
    pub draw: Prob,
    pub loss: Prob,
}

impl DuelResult {
    pub fn edge(&self) -> Prob {
        &self.win - &self.loss
    }
}

pub fn duel(a: &Die, b: &Die, rule: WinRule) -> DuelResult {
    let mut win = Prob::zero();
    let mut draw = Prob::zero();
    let mut loss = Prob::zero();
    for (va, pa) in &a.faces {
        for (vb, pb) in &b.faces {
            let p = pa * pb;
            let order = match rule {
                WinRule::Higher => va.cmp(vb),
                WinRule::Lower => vb.cmp(va),
            };
            match order {
                std::cmp::Ordering::Greater => win += p,
                std::cmp::Ordering::Equal => draw += p,
                std::cmp::Ordering::Less => loss += p,
            }
        }
    }
    DuelResult { win, draw, loss }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleMode {
    /// Every die wins against the next with probability above 1/2.
    StrictMajority,
    /// Every die wins against the next more often than it loses.
    PositiveEdge,
}

impl CycleMode {
    fn accepts(self, d: &DuelResult) -> bool {
        match self {
            CycleMode::StrictMajority => d.win > ratio(1, 2),
            CycleMode::PositiveEdge => d.win > d.loss,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCheck {
    /// `duels[t]` is die `t` against die `t + 1` (wrapping).
    pub duels: Vec<DuelResult>,
    pub holds: bool,
}

pub fn verify_cycle(dice: &[Die], mode: CycleMode, rule: WinRule) -> Result<CycleCheck> {
    if dice.len() < 3 {
        return Err(Error::TooFewDice(dice.len()));
    }
    let duels: Vec<DuelResult> = (0..dice.len())
        .map(|t| duel(&dice[t], &dice[(t + 1) % dice.len()], rule))
        .collect();
    let holds = duels.iter().all(|d| mode.accepts(d));
    Ok(CycleCheck { duels, holds })
}

/// Maps every face value `v` to `c - v`, which reverses who wins.
pub fn complement(die: &Die, c: i64) -> Die {
    Die {
        label: die.label.clone(),
        faces: die.faces.iter().map(|(v, p)| (c - v, p.clone())).collect(),
    }
}

/// Probability vectors of length `k` with positive entries whose reduced
/// denominators are all at most `max_den`, in a fixed order.
fn probability_vectors(k: usize, max_den: u64) -> Vec<Vec<Prob>> {
    fn compositions(parts: usize, total: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=total.saturating_sub(parts as u64 - 1) {
            prefix.push(first);
            compositions(parts - 1, total - first, prefix, out);
            prefix.pop();
        }
    }
    let mut seen = BTreeSet::new();
    for d in k as u64..=max_den.max(1) {
        let mut comps = Vec::new();
        compositions(k, d, &mut Vec::new(), &mut comps);
        for c in comps {
            let v: Vec<Prob> = c.iter().map(|&a| ratio(a as i64, d as i64)).collect();
            seen.insert(v);
        }
    }
    seen.into_iter().collect()
}

/// Strictly increasing `k`-tuples from `values`.
fn value_tuples(k: usize, values: &RangeInclusive<i64>) -> Vec<Vec<i64>> {
    fn rec(k: usize, from: i64, hi: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in from..=hi {
            prefix.push(v);
            rec(k - 1, v + 1, hi, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, *values.start(), *values.end(), &mut Vec::new(), &mut out);
    out
}

/// Every die with `k` distinct face values from `values` and face
/// probabilities with denominators at most `max_den`.
pub fn candidate_dice(k: usize, values: &RangeInclusive<i64>, max_den: u64) -> Vec<Die> {
    if k == 0 {
        return Vec::new();
    }
    let probs = probability_vectors(k, max_den);
    let mut out = Vec::new();
    for vs in value_tuples(k, values) {
        for ps in &probs {
            let faces = vs.iter().copied().zip(ps.iter().cloned()).collect();
            out.push(Die { label: String::new(), faces });
        }
    }
    out
}

/// Exhaustive search for PositiveEdge cycles of dice with the given face
/// counts, in order, higher value winning. Results come back in
/// lexicographic order of the candidate indices and are labelled A, B, C, ...
///
/// Complementing every die maps lower-wins cycles onto higher-wins ones, so
/// one rule covers both.
pub fn search_cycles(face_counts: &[usize], values: RangeInclusive<i64>, max_den: u64) -> Vec<Vec<Die>> {
    if face_counts.len() < 3 || values.is_empty() {
        return Vec::new();
    }
    let pools: Vec<Vec<Die>> = face_counts
        .iter()
        .map(|&k| candidate_dice(k, &values, max_den))
        .collect();
    if pools.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let label = |t: usize| char::from(b'A' + (t % 26) as u8).to_string();

    // Split on the first die; each worker walks the rest in odometer order.
    (0..pools[0].len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut found = Vec::new();
            let mut idx = vec![0usize; pools.len()];
            idx[0] = first;
            loop {
                let dice: Vec<&Die> = idx.iter().zip(&pools).map(|(&i, p)| &p[i]).collect();
                let n = dice.len();
                let ok = (0..n).all(|t| {
                    let d = duel(dice[t], dice[(t + 1) % n], WinRule::Higher);
                    d.win > d.loss
                });
                if ok {
                    found.push(
                        dice.iter()
                            .enumerate()
                            .map(|(t, d)| (*d).clone().with_label(label(t)))
                            .collect(),
                    );
                }
                // Advance positions 1.. as an odometer, last fastest.
                let mut pos = n - 1;
                loop {
                    if pos == 0 {
                        return found;
                    }
                    idx[pos] += 1;
                    if idx[pos] < pools[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos -= 1;
                }
            }
        })
        .collect()
}

/// Cycles made of two one-faced dice and one two-faced die.
pub fn search_112(values: RangeInclusive<i64>, max_den: u64) -> Vec<Vec<Die>> {
    search_cycles(&[1, 1, 2], values, max_den)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiceDocument {
    #[serde(default)]
    wins: WinRule,
    dice: Vec<DieDocument>,
}

/// Dice read from a file, with the win rule they are meant to be played by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiceSet {
    pub wins: WinRule,
    pub dice: Vec<Die>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DieDocument {
    label: String,
    faces: Vec<FaceDocument>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FaceDocument {
    Fair(i64),
    Weighted(i64, String),
}

fn parse_prob(label: &str, text: &str) -> Result<Prob> {
    let bad = || Error::MalformedDice(format!("die {label:?}: bad probability {text:?}"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad())?;
    let d: i64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(ratio(n, d))
}

pub fn parse_dice(text: &str) -> Result<DiceSet> {
    let doc: DiceDocument =
        toml::from_str(text).map_err(|e| Error::MalformedDice(e.to_string()))?;
    let dice = doc
        .dice
        .into_iter()
        .map(|d| {
            let fair = d.faces.iter().all(|f| matches!(f, FaceDocument::Fair(_)));
            let weighted = d.faces.iter().all(|f| matches!(f, FaceDocument::Weighted(..)));
            if fair {
                let values: Vec<i64> = d
                    .faces
                    .iter()
                    .map(|f| match f {
                        FaceDocument::Fair(v) => *v,
                        FaceDocument::Weighted(v, _) => *v,
                    })
                    .collect();
                Die::fair(d.label, &values)
            } else if weighted {
                let faces = d
                    .faces
                    .iter()
                    .map(|f| match f {
                        FaceDocument::Weighted(v, p) => Ok((*v, parse_prob(&d.label, p)?)),
                        FaceDocument::Fair(_) => unreachable!(),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Die::new(d.label, faces)
            } else {
                Err(Error::MalformedDice(format!(
                    "die {:?} mixes bare values and weighted faces",
                    d.label
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiceSet {
        wins: doc.wins,
        dice,
    })
}

pub fn load_dice(path: impl AsRef<Path>) -> Result<DiceSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_dice(&text)
}

/// Decimal approximation for display.
pub fn approx(p: &Prob) -> f64 {
    p.to_f64().unwrap_or(f64::NAN)
}

//! Monte Carlo engines used to cross-check the exact chain results.
//!
//! Each game reads its rolls from its own stream (see [`crate::rng`]), so a
//! run is a pure function of the board, its parameters and the seed, and
//! splitting the games across threads cannot change the merged counts.
//! Streams are numbered `tag << 56 | square << 32 | game`, with one tag per
//! sampling scheme so different schemes never share rolls.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::board::{Board, Square, DIE_FACES};
use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// Steps after which a game is abandoned as a malformed board.
pub const STEP_CAP: u64 = 1_000_000;

const TAG_PER_START: u64 = 1;
const TAG_TRAJECTORY: u64 = 2;
const TAG_PAIRED_FIRST: u64 = 3;
const TAG_PAIRED_SECOND: u64 = 4;
const TAG_VISITS_PER_START: u64 = 5;
const TAG_VISITS_TRAJECTORY: u64 = 6;

const MAX_GAMES: u64 = 1 << 32;
const MAX_STREAM_SQUARE: usize = 1 << 24;

fn stream(tag: u64, square: Square, game: u64) -> u64 {
    (tag << 56) | ((square as u64) << 32) | game
}

fn check_games(games: u64, min: u64) -> Result<()> {
    if games < min || games > MAX_GAMES {
        return Err(Error::InvalidArgument(format!(
            "game count {games} outside {min}..={MAX_GAMES}"
        )));
    }
    Ok(())
}

/// Precomputed landing for every `(square, roll)`.
struct MoveTable {
    finish: Square,
    next: Vec<[Square; DIE_FACES]>,
}

impl MoveTable {
    fn new(board: &Board) -> Self {
        let next = (0..board.size())
            .map(|s| std::array::from_fn(|r| board.landing(s, r + 1)))
            .collect();
        MoveTable {
            finish: board.finish(),
            next,
        }
    }

    /// Plays from `start`, calling `visit` on every square occupied,
    /// including `start` and the finish. Returns the number of rolls.
    fn play(&self, start: Square, seed: RngSeed, mut visit: impl FnMut(Square)) -> Result<u64> {
        let mut rng = seed.rng();
        let mut at = start;
        let mut steps = 0;
        visit(at);
        while at != self.finish {
            if steps == STEP_CAP {
                return Err(Error::StepCapExceeded {
                    start,
                    cap: STEP_CAP,
                });
            }
            at = self.next[at][rng.roll(DIE_FACES as u64) as usize - 1];
            steps += 1;
            visit(at);
        }
        Ok(steps)
    }
}

fn check_start(board: &Board, start: Square) -> Result<()> {
    if start > board.size() {
        return Err(Error::SquareOutOfRange {
            square: start,
            size: board.size(),
        });
    }
    if start >= MAX_STREAM_SQUARE {
        return Err(Error::InvalidArgument(format!("square {start} too large")));
    }
    if board.is_redirect_source(start) {
        return Err(Error::NotResting(start));
    }
    Ok(())
}

/// Plays one game and returns every square occupied, from `start` to the
/// finish inclusive. Its duration is `path.len() - 1`.
pub fn play_game(board: &Board, start: Square, seed: RngSeed) -> Result<Vec<Square>> {
    check_start(board, start)?;
    let mut path = Vec::new();
    MoveTable::new(board).play(start, seed, |s| path.push(s))?;
    Ok(path)
}

/// Counts of remaining-duration samples per square.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DurationHistogram {
    counts: BTreeMap<Square, Vec<u64>>,
}

impl DurationHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, square: Square, duration: u64) {
        self.add_count(square, duration, 1);
    }

    pub fn add_count(&mut self, square: Square, duration: u64, count: u64) {
        let row = self.counts.entry(square).or_default();
        let d = duration as usize;
        if row.len() <= d {
            row.resize(d + 1, 0);
        }
        row[d] += count;
    }

    pub fn merge(&mut self, other: &DurationHistogram) {
        for (&sq, row) in &other.counts {
            for (d, &c) in row.iter().enumerate() {
                if c > 0 {
                    self.add_count(sq, d as u64, c);
                }
            }
        }
    }

    /// Squares with at least one sample, ascending.
    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        self.counts
            .iter()
            .filter(|(_, row)| row.iter().any(|&c| c > 0))
            .map(|(&s, _)| s)
    }

    /// `counts[d]` = samples of duration `d` for `square`.
    pub fn counts(&self, square: Square) -> &[u64] {
        self.counts.get(&square).map_or(&[], Vec::as_slice)
    }

    pub fn total(&self, square: Square) -> u64 {
        self.counts(square).iter().sum()
    }

    pub fn total_samples(&self) -> u64 {
        self.counts.values().flatten().sum()
    }

    pub fn max_duration(&self) -> Option<u64> {
        self.counts
            .values()
            .filter_map(|row| row.iter().rposition(|&c| c > 0))
            .max()
            .map(|d| d as u64)
    }

    pub fn mean(&self, square: Square) -> Option<f64> {
        let n = self.total(square);
        (n > 0).then(|| {
            let sum: f64 = self
                .counts(square)
                .iter()
                .enumerate()
                .map(|(d, &c)| d as f64 * c as f64)
                .sum();
            sum / n as f64
        })
    }

    /// Sample variance of the durations for `square`.
    pub fn variance(&self, square: Square) -> Option<f64> {
        let n = self.total(square);
        let mean = self.mean(square)?;
        (n > 1).then(|| {
            let ss: f64 = self
                .counts(square)
                .iter()
                .enumerate()
                .map(|(d, &c)| c as f64 * (d as f64 - mean).powi(2))
                .sum();
            ss / (n - 1) as f64
        })
    }
}

/// `games_per_start` independent games from each of `starts`, one duration
/// sample per game.
pub fn simulate_per_start(
    board: &Board,
    starts: &[Square],
    games_per_start: u64,
    seed: u64,
) -> Result<DurationHistogram> {
    check_games(games_per_start, 1)?;
    let table = MoveTable::new(board);
    let mut out = DurationHistogram::new();
    for &start in starts {
        check_start(board, start)?;
        let h = (0..games_per_start)
            .into_par_iter()
            .try_fold(DurationHistogram::new, |mut h, g| {
                let rs = RngSeed::new(seed, stream(TAG_PER_START, start, g));
                let d = table.play(start, rs, |_| {})?;
                h.add(start, d);
                Ok::<_, Error>(h)
            })
            .try_reduce(DurationHistogram::new, |mut a, b| {
                a.merge(&b);
                Ok(a)
            })?;
        out.merge(&h);
    }
    Ok(out)
}

/// `games` games from square 0; a game occupying `v_0 = 0, ..., v_n = finish`
/// contributes the sample `(v_t, n - t)` for every `t < n`.
pub fn simulate_trajectory_reuse(board: &Board, games: u64, seed: u64) -> Result<DurationHistogram> {
    check_games(games, 1)?;
    let table = MoveTable::new(board);
    (0..games)
        .into_par_iter()
        .try_fold(
            || (DurationHistogram::new(), Vec::new()),
            |(mut h, mut path), g| {
                path.clear();
                let rs = RngSeed::new(seed, stream(TAG_TRAJECTORY, 0, g));
                let n = table.play(0, rs, |s| path.push(s))?;
                for (t, &sq) in path[..n as usize].iter().enumerate() {
                    h.add(sq, n - t as u64);
                }
                Ok::<_, Error>((h, path))
            },
        )
        .map(|r| r.map(|(h, _)| h))
        .try_reduce(DurationHistogram::new, |mut a, b| {
            a.merge(&b);
            Ok(a)
        })
}

/// Win/draw/loss frequencies of `i` against `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeEstimate {
    pub win: f64,
    pub loss: f64,
    pub draw: f64,
    pub edge: f64,
    /// Only set when every comparison is independent.
    pub stderr: Option<f64>,
}

/// Compares every sample for `i` with every sample for `j` through their
/// histograms, without pairing raw samples.
pub fn edge_from_histograms(h: &DurationHistogram, i: Square, j: Square) -> Result<EdgeEstimate> {
    let (hi, hj) = (h.counts(i), h.counts(j));
    let ni: u64 = hi.iter().sum();
    let nj: u64 = hj.iter().sum();
    if ni == 0 {
        return Err(Error::EmptyHistogram(i));
    }
    if nj == 0 {
        return Err(Error::EmptyHistogram(j));
    }
    // at_least[d] = samples of j lasting d moves or more.
    let mut at_least = vec![0u128; hj.len() + 1];
    for d in (0..hj.len()).rev() {
        at_least[d] = at_least[d + 1] + u128::from(hj[d]);
    }
    let mut wins = 0u128;
    let mut draws = 0u128;
    for (d, &c) in hi.iter().enumerate() {
        let c = u128::from(c);
        wins += c * at_least.get(d + 1).copied().unwrap_or(0);
        draws += c * u128::from(hj.get(d).copied().unwrap_or(0));
    }
    let total = u128::from(ni) * u128::from(nj);
    let losses = total - wins - draws;
    let t = total as f64;
    Ok(EdgeEstimate {
        win: wins as f64 / t,
        loss: losses as f64 / t,
        draw: draws as f64 / t,
        edge: (wins as f64 - losses as f64) / t,
        stderr: None,
    })
}

/// `games` independent races, one fresh game from each side per race.
pub fn edge_paired_games(
    board: &Board,
    i: Square,
    j: Square,
    games: u64,
    seed: u64,
) -> Result<EdgeEstimate> {
    check_games(games, 2)?;
    check_start(board, i)?;
    check_start(board, j)?;
    let table = MoveTable::new(board);
    let (wins, losses) = (0..games)
        .into_par_iter()
        .map(|g| {
            let a = table.play(i, RngSeed::new(seed, stream(TAG_PAIRED_FIRST, i, g)), |_| {})?;
            let b = table.play(j, RngSeed::new(seed, stream(TAG_PAIRED_SECOND, j, g)), |_| {})?;
            Ok(((a < b) as u64, (a > b) as u64))
        })
        .try_reduce(|| (0, 0), |x, y| Ok::<_, Error>((x.0 + y.0, x.1 + y.1)))?;
    let n = games as f64;
    let draws = games - wins - losses;
    let edge = (wins as f64 - losses as f64) / n;
    // Per-race outcome is +1, 0 or -1; second moment is the decisive fraction.
    let second = (wins + losses) as f64 / n;
    let var = (second - edge * edge) * n / (n - 1.0);
    Ok(EdgeEstimate {
        win: wins as f64 / n,
        loss: losses as f64 / n,
        draw: draws as f64 / n,
        edge,
        stderr: Some((var.max(0.0) / n).sqrt()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VisitSampling {
    /// Each game starts on the state; one sample per game.
    PerStart,
    /// Games start at 0; one sample per visit to the state.
    TrajectoryReuse,
}

/// Empirical distribution of `K`, the number of visits to a state from a
/// given visit onward (that visit included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitCounts {
    pub square: Square,
    pub games: u64,
    /// `counts[k]` samples with `K = k`; `counts[0]` is always 0.
    pub counts: Vec<u64>,
}

impl VisitCounts {
    pub fn samples(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// True when no game ever visited the state.
    pub fn is_empty(&self) -> bool {
        self.samples() == 0
    }

    pub fn mean(&self) -> Option<f64> {
        let n = self.samples();
        (n > 0).then(|| {
            self.counts
                .iter()
                .enumerate()
                .map(|(k, &c)| k as f64 * c as f64)
                .sum::<f64>()
                / n as f64
        })
    }

    fn add(&mut self, k: usize, count: u64) {
        if self.counts.len() <= k {
            self.counts.resize(k + 1, 0);
        }
        self.counts[k] += count;
    }

    fn merge(mut self, other: VisitCounts) -> VisitCounts {
        self.games += other.games;
        for (k, &c) in other.counts.iter().enumerate() {
            if c > 0 {
                self.add(k, c);
            }
        }
        self
    }
}

pub fn visit_count_samples(
    board: &Board,
    square: Square,
    games: u64,
    seed: u64,
    method: VisitSampling,
) -> Result<VisitCounts> {
    check_games(games, 1)?;
    check_start(board, square)?;
    if square == board.finish() {
        return Err(Error::FinishState(square));
    }
    let table = MoveTable::new(board);
    let empty = || VisitCounts {
        square,
        games: 0,
        counts: vec![0],
    };
    let counts = (0..games)
        .into_par_iter()
        .try_fold(empty, |mut acc, g| {
            let (start, tag) = match method {
                VisitSampling::PerStart => (square, TAG_VISITS_PER_START),
                VisitSampling::TrajectoryReuse => (0, TAG_VISITS_TRAJECTORY),
            };
            let mut visits = 0usize;
            table.play(start, RngSeed::new(seed, stream(tag, square, g)), |s| {
                visits += (s == square) as usize;
            })?;
            match method {
                VisitSampling::PerStart => acc.add(visits, 1),
                VisitSampling::TrajectoryReuse => {
                    for k in 1..=visits {
                        acc.add(k, 1);
                    }
                }
            }
            acc.games += 1;
            Ok::<_, Error>(acc)
        })
        .try_reduce(empty, |a, b| Ok(a.merge(b)))?;
    Ok(counts)
}

/// Both sides of the size-biased sampling identity for visit counts:
/// the fraction of all visits that are `k`-th from last,
/// `sum_{t>=k} p^(t-1)(1-p) / sum_{t>=1} t p^(t-1)(1-p)`, in closed form
/// `p^(k-1) / (1/(1-p))`, against the geometric law `p^(k-1)(1-p)`.
pub fn geometric_identity(p: f64, k: u32) -> Result<(f64, f64)> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("p = {p} outside (0, 1)")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let at_least_k = p.powi(k as i32 - 1);
    let mean_visits = 1.0 / (1.0 - p);
    Ok((at_least_k / mean_visits, p.powi(k as i32 - 1) * (1.0 - p)))
}

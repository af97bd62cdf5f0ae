//! The absorbing Markov chain of a single player on a board, and the exact
//! finish-time distributions derived from it.

use std::collections::VecDeque;

use log::warn;
use nalgebra::{DMatrix, DVector};

use crate::board::{Board, Square, DIE_FACES};
use crate::error::{Error, Result};

/// Default truncation horizon for finish-time distributions.
pub const DEFAULT_S_MAX: usize = 1000;

/// Profiles with more unfinished mass than this give biased expectations.
pub const TAIL_WARN: f64 = 1e-9;

const ROLL_PROB: f64 = 1.0 / DIE_FACES as f64;

/// States and transition matrix of one player's walk on a board.
#[derive(Debug, Clone)]
pub struct GameChain {
    states: Vec<Square>,
    index_of: Vec<Option<usize>>,
    transition: DMatrix<f64>,
    /// Nonzero entries of each row, `(column, probability)`.
    rows: Vec<Vec<(usize, f64)>>,
    absorbing: usize,
}

impl GameChain {
    pub fn build(board: &Board) -> Self {
        let states: Vec<Square> = board.resting_squares().collect();
        let mut index_of = vec![None; board.size() + 1];
        for (i, &s) in states.iter().enumerate() {
            index_of[s] = Some(i);
        }
        let n = states.len();
        let absorbing = index_of[board.finish()].expect("finish square is always resting");

        let mut transition = DMatrix::zeros(n, n);
        for (i, &s) in states.iter().enumerate() {
            if i == absorbing {
                transition[(i, i)] = 1.0;
                continue;
            }
            for roll in 1..=DIE_FACES {
                let to = board.landing(s, roll);
                let j = index_of[to].expect("landings are resting squares");
                transition[(i, j)] += ROLL_PROB;
            }
        }

        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| transition[(i, j)] != 0.0)
                    .map(|j| (j, transition[(i, j)]))
                    .collect()
            })
            .collect();

        GameChain {
            states,
            index_of,
            transition,
            rows,
            absorbing,
        }
    }

    pub fn states(&self) -> &[Square] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Dense index of a resting square.
    pub fn index_of(&self, square: Square) -> Option<usize> {
        self.index_of.get(square).copied().flatten()
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    /// Transition probability between two squares (0 if either is not a state).
    pub fn probability(&self, from: Square, to: Square) -> f64 {
        match (self.index_of(from), self.index_of(to)) {
            (Some(i), Some(j)) => self.transition[(i, j)],
            _ => 0.0,
        }
    }

    pub fn absorbing_index(&self) -> usize {
        self.absorbing
    }

    pub fn finish(&self) -> Square {
        self.states[self.absorbing]
    }

    /// Nonzero `(column, probability)` entries of row `i`.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// Finish-time distributions for every state up to `s_max` steps.
    ///
    /// Runs `g(s) = A g(s-1)` from the finish indicator, so `g[i][s]` equals
    /// `(A^s)[i][finish]` without forming matrix powers.
    pub fn absorption_profile(&self, s_max: usize) -> Result<DurationProfile> {
        if s_max < 1 {
            return Err(Error::InvalidArgument("s_max must be at least 1".into()));
        }
        let n = self.len();
        let mut g = vec![vec![0.0; s_max + 1]; n];
        let mut f = vec![vec![0.0; s_max + 1]; n];
        g[self.absorbing][0] = 1.0;
        f[self.absorbing][0] = 1.0;

        let mut prev: Vec<f64> = (0..n).map(|i| g[i][0]).collect();
        let mut next = vec![0.0; n];
        for s in 1..=s_max {
            for (i, out) in next.iter_mut().enumerate() {
                *out = self.rows[i].iter().map(|&(j, p)| p * prev[j]).sum();
            }
            for i in 0..n {
                g[i][s] = next[i];
                f[i][s] = next[i] - prev[i];
            }
            std::mem::swap(&mut prev, &mut next);
        }
        let tail = g.iter().map(|row| 1.0 - row[s_max]).collect();

        Ok(DurationProfile {
            s_max,
            states: self.states.clone(),
            index_of: self.index_of.clone(),
            f,
            g,
            tail,
        })
    }

    /// States from which the finish cannot be reached, ascending.
    pub fn unreachable_states(&self) -> Vec<Square> {
        let n = self.len();
        let mut reaches = vec![false; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            for &(j, _) in &self.rows[i] {
                preds[j].push(i);
            }
        }
        let mut queue = VecDeque::from([self.absorbing]);
        reaches[self.absorbing] = true;
        while let Some(j) = queue.pop_front() {
            for &i in &preds[j] {
                if !reaches[i] {
                    reaches[i] = true;
                    queue.push_back(i);
                }
            }
        }
        (0..n)
            .filter(|&i| !reaches[i])
            .map(|i| self.states[i])
            .collect()
    }

    fn transient_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| i != self.absorbing).collect()
    }

    /// `I - Q_t` over transient states, after checking the finish is reachable.
    fn transient_system(&self) -> Result<(Vec<usize>, DMatrix<f64>)> {
        if let Some(&bad) = self.unreachable_states().first() {
            return Err(Error::Unreachable(bad));
        }
        let transient = self.transient_indices();
        let m = transient.len();
        let system = DMatrix::from_fn(m, m, |a, b| {
            let id = if a == b { 1.0 } else { 0.0 };
            id - self.transition[(transient[a], transient[b])]
        });
        Ok((transient, system))
    }

    /// Expected moves to finish from each state, by solving
    /// `(I - Q_t) E = 1` directly. Indexed like [`GameChain::states`].
    pub fn expected_durations_exact(&self) -> Result<Vec<f64>> {
        let (transient, system) = self.transient_system()?;
        let ones = DVector::from_element(transient.len(), 1.0);
        let solved = system
            .lu()
            .solve(&ones)
            .ok_or_else(|| Error::InvalidArgument("singular transient system".into()))?;
        let mut out = vec![0.0; self.len()];
        for (a, &i) in transient.iter().enumerate() {
            out[i] = solved[a];
        }
        Ok(out)
    }

    /// `N = (I - Q_t)^{-1}`; entry `(a, b)` is the expected number of visits
    /// to transient state `b` starting from transient state `a`.
    pub fn fundamental_matrix(&self) -> Result<FundamentalMatrix> {
        let (transient, system) = self.transient_system()?;
        let inverse = system
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("singular transient system".into()))?;
        let mut position = vec![None; self.len()];
        for (a, &i) in transient.iter().enumerate() {
            position[i] = Some(a);
        }
        Ok(FundamentalMatrix {
            states: transient.iter().map(|&i| self.states[i]).collect(),
            position,
            index_of: self.index_of.clone(),
            inverse,
        })
    }

    /// Probability that a player on `square` visits it again before finishing.
    pub fn return_probability(&self, square: Square) -> Result<f64> {
        self.fundamental_matrix()?.return_probability(square)
    }
}

/// Fundamental matrix of the transient part of a [`GameChain`].
#[derive(Debug, Clone)]
pub struct FundamentalMatrix {
    states: Vec<Square>,
    position: Vec<Option<usize>>,
    index_of: Vec<Option<usize>>,
    inverse: DMatrix<f64>,
}

impl FundamentalMatrix {
    /// Transient squares, in matrix order.
    pub fn states(&self) -> &[Square] {
        &self.states
    }

    fn transient_position(&self, square: Square) -> Result<usize> {
        let i = self
            .index_of
            .get(square)
            .copied()
            .flatten()
            .ok_or(Error::NotResting(square))?;
        self.position[i].ok_or(Error::FinishState(square))
    }

    /// Expected visits to `to` (counting the start) for a player on `from`.
    pub fn expected_visits(&self, from: Square, to: Square) -> Result<f64> {
        let a = self.transient_position(from)?;
        let b = self.transient_position(to)?;
        Ok(self.inverse[(a, b)])
    }

    /// `1 - 1/N[i][i]`: the visit count from `i` is geometric with this
    /// continuation probability.
    pub fn return_probability(&self, square: Square) -> Result<f64> {
        let a = self.transient_position(square)?;
        Ok(1.0 - 1.0 / self.inverse[(a, a)])
    }
}

/// Per-state finish-time distributions truncated at `s_max` steps.
#[derive(Debug, Clone)]
pub struct DurationProfile {
    s_max: usize,
    states: Vec<Square>,
    index_of: Vec<Option<usize>>,
    f: Vec<Vec<f64>>,
    g: Vec<Vec<f64>>,
    tail: Vec<f64>,
}

impl DurationProfile {
    pub fn s_max(&self) -> usize {
        self.s_max
    }

    pub fn states(&self) -> &[Square] {
        &self.states
    }

    pub fn index_of(&self, square: Square) -> Option<usize> {
        self.index_of.get(square).copied().flatten()
    }

    /// `f[i][s]`: probability of finishing at exactly step `s`, by dense index.
    pub fn f(&self, i: usize) -> &[f64] {
        &self.f[i]
    }

    /// `g[i][s]`: probability of having finished within `s` steps.
    pub fn g(&self, i: usize) -> &[f64] {
        &self.g[i]
    }

    pub fn tail(&self, i: usize) -> f64 {
        self.tail[i]
    }

    pub fn tails(&self) -> &[f64] {
        &self.tail
    }

    pub fn max_tail(&self) -> f64 {
        self.tail.iter().copied().fold(0.0, f64::max)
    }

    pub fn f_of(&self, square: Square) -> Option<&[f64]> {
        self.index_of(square).map(|i| self.f(i))
    }

    pub fn g_of(&self, square: Square) -> Option<&[f64]> {
        self.index_of(square).map(|i| self.g(i))
    }

    /// Truncated `sum_s s * f[i][s]` per state.
    pub fn expected_durations(&self) -> Vec<f64> {
        let worst = self.max_tail();
        if worst > TAIL_WARN {
            warn!(
                "unfinished mass {worst:.3e} at s_max = {}; expectations are underestimated",
                self.s_max
            );
        }
        self.f
            .iter()
            .map(|row| row.iter().enumerate().map(|(s, &p)| s as f64 * p).sum())
            .collect()
    }
}

//! Head-to-head races between two players on independent copies of a board,
//! scored by the fair-round rule: finishing in a strictly earlier round
//! wins, finishing in the same round is a draw.

use log::warn;
use serde::Serialize;

use crate::board::Square;
use crate::chain::{DurationProfile, TAIL_WARN};
use crate::error::{Error, Result};

/// Pairwise win, excess and draw probabilities between all states.
#[derive(Debug, Clone)]
pub struct WinMatrix {
    states: Vec<Square>,
    index_of: Vec<Option<usize>>,
    /// Dense indices sorted by square.
    order: Vec<usize>,
    s_max: usize,
    q: Vec<Vec<f64>>,
    x: Vec<Vec<f64>>,
    draw: Vec<Vec<f64>>,
}

impl WinMatrix {
    /// `Q[i][j] = sum_s f_i(s) (1 - g_j(s))`, accumulated one step at a time
    /// as a rank-1 update over all pairs.
    pub fn from_profile(profile: &DurationProfile) -> Self {
        let worst = profile.max_tail();
        if worst > TAIL_WARN {
            warn!("unfinished mass {worst:.3e}: win probabilities are underestimated");
        }
        let n = profile.states().len();
        let mut q = vec![vec![0.0; n]; n];
        let mut survive = vec![0.0; n];
        for s in 0..=profile.s_max() {
            for (j, out) in survive.iter_mut().enumerate() {
                *out = 1.0 - profile.g(j)[s];
            }
            for (i, row) in q.iter_mut().enumerate() {
                let fi = profile.f(i)[s];
                if fi == 0.0 {
                    continue;
                }
                for (cell, &sj) in row.iter_mut().zip(&survive) {
                    *cell += fi * sj;
                }
            }
        }
        WinMatrix::from_q(
            profile.states().to_vec(),
            profile.s_max(),
            q,
        )
    }

    /// Builds the derived matrices from a raw win-probability matrix whose
    /// rows and columns follow `states`.
    pub fn from_q(states: Vec<Square>, s_max: usize, q: Vec<Vec<f64>>) -> Self {
        let n = states.len();
        assert!(q.len() == n && q.iter().all(|r| r.len() == n), "Q must be square");
        let mut x = vec![vec![0.0; n]; n];
        let mut draw = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                // Computed once per unordered pair so X is exactly antisymmetric.
                if i < j {
                    let d = q[i][j] - q[j][i];
                    x[i][j] = d;
                    x[j][i] = -d;
                }
                draw[i][j] = 1.0 - q[i][j] - q[j][i];
            }
        }
        let top = states.iter().copied().max().unwrap_or(0);
        let mut index_of = vec![None; top + 1];
        for (i, &s) in states.iter().enumerate() {
            index_of[s] = Some(i);
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| states[i]);
        WinMatrix {
            states,
            index_of,
            order,
            s_max,
            q,
            x,
            draw,
        }
    }

    pub fn states(&self) -> &[Square] {
        &self.states
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }

    pub fn index_of(&self, square: Square) -> Option<usize> {
        self.index_of.get(square).copied().flatten()
    }

    fn pair(&self, i: Square, j: Square) -> Result<(usize, usize)> {
        let a = self.index_of(i).ok_or(Error::NotResting(i))?;
        let b = self.index_of(j).ok_or(Error::NotResting(j))?;
        Ok((a, b))
    }

    /// Probability that a player on `i` finishes in a strictly earlier round
    /// than one on `j`.
    pub fn q(&self, i: Square, j: Square) -> Result<f64> {
        let (a, b) = self.pair(i, j)?;
        Ok(self.q[a][b])
    }

    /// Winning edge `Q[i][j] - Q[j][i]`.
    pub fn x(&self, i: Square, j: Square) -> Result<f64> {
        let (a, b) = self.pair(i, j)?;
        Ok(self.x[a][b])
    }

    pub fn draw(&self, i: Square, j: Square) -> Result<f64> {
        let (a, b) = self.pair(i, j)?;
        Ok(self.draw[a][b])
    }

    /// Dense-index views, rows and columns in [`WinMatrix::states`] order.
    pub fn q_matrix(&self) -> &[Vec<f64>] {
        &self.q
    }

    pub fn x_matrix(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn draw_matrix(&self) -> &[Vec<f64>] {
        &self.draw
    }

    fn triangle(&self, i: usize, j: usize, k: usize) -> Triangle {
        let (eij, ejk, eki) = (self.x[i][j], self.x[j][k], self.x[k][i]);
        Triangle {
            i: self.states[i],
            j: self.states[j],
            k: self.states[k],
            edge_ij: eij,
            edge_jk: ejk,
            edge_ki: eki,
            c: eij.min(ejk).min(eki),
        }
    }

    /// Every directed 3-cycle once: the smallest square first, then both
    /// orientations of the remaining pair. Yields dense indices.
    fn cycles(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let order = &self.order;
        let n = order.len();
        (0..n).flat_map(move |a| {
            (a + 1..n).flat_map(move |b| {
                (a + 1..n)
                    .filter(move |&c| c != b)
                    .map(move |c| (order[a], order[b], order[c]))
            })
        })
    }

    /// The triangle maximising its smallest edge over all directed 3-cycles.
    /// Ties go to the lexicographically smallest `(i, j, k)`. The result may
    /// have `c <= 0`, meaning no intransitive triangle exists.
    pub fn best_triangle(&self) -> Result<Triangle> {
        if self.states.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "triangle search needs at least 3 states, got {}",
                self.states.len()
            )));
        }
        let mut best: Option<Triangle> = None;
        for (i, j, k) in self.cycles() {
            let t = self.triangle(i, j, k);
            if best.as_ref().is_none_or(|b| t.c > b.c) {
                best = Some(t);
            }
        }
        Ok(best.expect("at least one cycle exists"))
    }

    /// All triangles with `c >= c_min`, each cycle once, strongest first
    /// (ties in lexicographic order).
    pub fn triangles_above(&self, c_min: f64) -> Vec<Triangle> {
        let mut out: Vec<Triangle> = self
            .cycles()
            .filter(|&(i, j, k)| {
                self.x[i][j] >= c_min && self.x[j][k] >= c_min && self.x[k][i] >= c_min
            })
            .map(|(i, j, k)| self.triangle(i, j, k))
            .collect();
        out.sort_by(|a, b| {
            b.c.total_cmp(&a.c)
                .then_with(|| (a.i, a.j, a.k).cmp(&(b.i, b.j, b.k)))
        });
        out
    }
}

/// A directed cycle `i > j > k > i` with its three winning edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Triangle {
    pub i: Square,
    pub j: Square,
    pub k: Square,
    pub edge_ij: f64,
    pub edge_jk: f64,
    pub edge_ki: f64,
    pub c: f64,
}

impl Triangle {
    /// Squares in cycle order.
    pub fn squares(&self) -> [Square; 3] {
        [self.i, self.j, self.k]
    }

    /// Whether this is the same directed cycle as `a -> b -> c -> a`,
    /// regardless of which square is listed first.
    pub fn is_cycle(&self, a: Square, b: Square, c: Square) -> bool {
        let me = self.squares();
        (0..3).any(|r| me[r] == a && me[(r + 1) % 3] == b && me[(r + 2) % 3] == c)
    }
}

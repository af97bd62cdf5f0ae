//! CSV and JSON renderings of analysis results.
//!
//! | report        | columns                                                   |
//! |---------------|-----------------------------------------------------------|
//! | expectations  | `state,expected_moves,expected_moves_exact`               |
//! | profile       | `state,s,f,g`                                             |
//! | matrix        | `state,<square>,<square>,...`                             |
//! | triangles     | `i,j,k,edge_ij,edge_jk,edge_ki,c`                         |
//! | histogram     | `state,duration,count` (nonzero counts only)              |
//! | edges         | `i,j,win,loss,draw,edge,stderr,method,games,seed`         |

use serde::Serialize;

use crate::board::Square;
use crate::chain::DurationProfile;
use crate::compete::Triangle;
use crate::error::Result;
use crate::simulate::{DurationHistogram, EdgeEstimate};

fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_err(e: csv::Error) -> crate::Error {
    crate::Error::InvalidArgument(format!("csv: {e}"))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectationRow {
    pub state: Square,
    pub expected_moves: f64,
    pub expected_moves_exact: f64,
}

pub fn expectation_rows(states: &[Square], truncated: &[f64], exact: &[f64]) -> Vec<ExpectationRow> {
    states
        .iter()
        .zip(truncated.iter().zip(exact))
        .map(|(&state, (&t, &e))| ExpectationRow {
            state,
            expected_moves: t,
            expected_moves_exact: e,
        })
        .collect()
}

pub fn expectations_csv(rows: &[ExpectationRow]) -> Result<String> {
    if rows.is_empty() {
        return Ok("state,expected_moves,expected_moves_exact\n".into());
    }
    to_csv(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileRow {
    pub state: Square,
    pub s: usize,
    pub f: f64,
    pub g: f64,
}

pub fn profile_rows(profile: &DurationProfile, cap: usize) -> Vec<ProfileRow> {
    let cap = cap.min(profile.s_max());
    profile
        .states()
        .iter()
        .enumerate()
        .flat_map(|(i, &state)| {
            (0..=cap).map(move |s| ProfileRow {
                state,
                s,
                f: profile.f(i)[s],
                g: profile.g(i)[s],
            })
        })
        .collect()
}

pub fn profile_csv(rows: &[ProfileRow]) -> Result<String> {
    to_csv(rows)
}

/// Square matrix with state-number headers on both axes.
pub fn matrix_csv(states: &[Square], matrix: &[Vec<f64>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["state".to_string()];
    header.extend(states.iter().map(|s| s.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for (s, row) in states.iter().zip(matrix) {
        let mut rec = vec![s.to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(csv_err)?;
    }
    finish(w)
}

pub fn triangles_csv(triangles: &[Triangle]) -> Result<String> {
    if triangles.is_empty() {
        return Ok("i,j,k,edge_ij,edge_jk,edge_ki,c\n".into());
    }
    to_csv(triangles)
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramRow {
    pub state: Square,
    pub duration: u64,
    pub count: u64,
}

pub fn histogram_rows(h: &DurationHistogram) -> Vec<HistogramRow> {
    h.squares()
        .flat_map(|state| {
            h.counts(state)
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(move |(d, &count)| HistogramRow {
                    state,
                    duration: d as u64,
                    count,
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn histogram_csv(h: &DurationHistogram) -> Result<String> {
    let rows = histogram_rows(h);
    if rows.is_empty() {
        return Ok("state,duration,count\n".into());
    }
    to_csv(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeRow {
    pub i: Square,
    pub j: Square,
    pub win: f64,
    pub loss: f64,
    pub draw: f64,
    pub edge: f64,
    pub stderr: Option<f64>,
    pub method: String,
    pub games: u64,
    pub seed: u64,
}

impl EdgeRow {
    pub fn new(i: Square, j: Square, e: &EdgeEstimate, method: &str, games: u64, seed: u64) -> Self {
        EdgeRow {
            i,
            j,
            win: e.win,
            loss: e.loss,
            draw: e.draw,
            edge: e.edge,
            stderr: e.stderr,
            method: method.to_string(),
            games,
            seed,
        }
    }
}

pub fn edges_csv(rows: &[EdgeRow]) -> Result<String> {
    if rows.is_empty() {
        return Ok("i,j,win,loss,draw,edge,stderr,method,games,seed\n".into());
    }
    to_csv(rows)
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| crate::Error::InvalidArgument(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

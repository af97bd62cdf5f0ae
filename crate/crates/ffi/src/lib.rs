//! C ABI over the `snakeladder` library.
//!
//! # Conventions
//!
//! Every fallible function returns an [`SlStatus`]; `SL_STATUS_OK` (0) means
//! success and anything else failure, with a message retrievable through
//! [`sl_last_error_message`] on the same thread. Results are written through
//! out-pointers, which are left untouched on failure.
//!
//! Boards and analyses are opaque handles created by `*_new`/`*_load`
//! functions and released with the matching `*_free`. Handles are immutable
//! once created and may be shared between threads for reading.
//!
//! Squares are board square numbers (`0..=size`), not dense state indices.
//!
//! # Safety
//!
//! Pointers passed in must be null or valid for the access described on
//! each function. Strings are NUL-terminated UTF-8.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use snakeladder::board::{Board, Square};
use snakeladder::chain::{DurationProfile, FundamentalMatrix, GameChain};
use snakeladder::compete::WinMatrix;
use snakeladder::dice::{self, Die, Prob, WinRule};
use snakeladder::simulate::{self, EdgeEstimate};
use snakeladder::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    Io = 3,
    MalformedDocument = 4,
    InvalidBoard = 5,
    NotAState = 6,
    Unreachable = 7,
    SimulationFailed = 8,
    Overflow = 9,
    Panic = 10,
}

impl From<&Error> for SlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Io { .. } => SlStatus::Io,
            Error::MalformedBoard(_) | Error::MalformedDice(_) => SlStatus::MalformedDocument,
            Error::BoardTooSmall { .. }
            | Error::RedirectOutOfRange { .. }
            | Error::SelfRedirect(_)
            | Error::DuplicateRedirect(_)
            | Error::RedirectCycle(_)
            | Error::OvershootMismatch { .. }
            | Error::UnknownBundledBoard(_) => SlStatus::InvalidBoard,
            Error::SquareOutOfRange { .. } | Error::NotResting(_) | Error::FinishState(_) => {
                SlStatus::NotAState
            }
            Error::Unreachable(_) => SlStatus::Unreachable,
            Error::StepCapExceeded { .. } | Error::EmptyHistogram(_) => SlStatus::SimulationFailed,
            Error::InvalidArgument(_) | Error::InvalidDie { .. } | Error::TooFewDice(_) => {
                SlStatus::InvalidArgument
            }
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: impl std::fmt::Display) {
    LAST_ERROR.with(|e| {
        let mut buf = e.borrow_mut();
        buf.clear();
        buf.extend_from_slice(msg.to_string().as_bytes());
    });
}

fn fail(status: SlStatus, msg: impl std::fmt::Display) -> SlStatus {
    set_error(msg);
    status
}

fn from_err(e: Error) -> SlStatus {
    let status = SlStatus::from(&e);
    let mut msg = e.to_string();
    let mut cause = std::error::Error::source(&e);
    while let Some(c) = cause {
        msg.push_str(": ");
        msg.push_str(&c.to_string());
        cause = c.source();
    }
    fail(status, msg)
}

/// Runs `f`, turning panics into `SL_STATUS_PANIC`.
fn guard(f: impl FnOnce() -> SlStatus) -> SlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            fail(SlStatus::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, SlStatus> {
    if s.is_null() {
        return Err(fail(SlStatus::NullArgument, "null string"));
    }
    // SAFETY: caller passes a NUL-terminated string.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| fail(SlStatus::InvalidArgument, "string is not UTF-8"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> SlStatus {
    if out.is_null() {
        return fail(SlStatus::NullArgument, "null output pointer");
    }
    // SAFETY: non-null and valid for writes per the function contracts.
    unsafe { out.write(value) };
    SlStatus::Ok
}

macro_rules! handle {
    ($ptr:expr) => {
        // SAFETY: handles come from this library and are not yet freed.
        match unsafe { $ptr.as_ref() } {
            Some(h) => h,
            None => return fail(SlStatus::NullArgument, "null handle"),
        }
    };
}

/// Length in bytes of the last error message on this thread (no NUL).
#[no_mangle]
pub extern "C" fn sl_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().len())
}

/// Copies the last error message into `buf`, truncated to `len - 1` bytes
/// and NUL-terminated. Returns the number of bytes written, without the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn sl_last_error_message(buf: *mut c_char, len: usize) -> usize {
    if buf.is_null() || len == 0 {
        return 0;
    }
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let n = msg.len().min(len - 1);
        // SAFETY: buf is valid for len bytes and n < len.
        unsafe {
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        n
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Opaque board handle.
pub struct SlBoard(Board);

fn new_board(result: snakeladder::Result<Board>, out: *mut *mut SlBoard) -> SlStatus {
    if out.is_null() {
        return fail(SlStatus::NullArgument, "null output pointer");
    }
    match result {
        // SAFETY: out checked non-null above.
        Ok(b) => unsafe { write_out(out, Box::into_raw(Box::new(SlBoard(b)))) },
        Err(e) => from_err(e),
    }
}

/// Loads one of the bundled boards ("paper-figure2", "mini10").
///
/// # Safety
/// `name` must be a valid C string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_board_bundled(name: *const c_char, out: *mut *mut SlBoard) -> SlStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let name = match unsafe { read_str(name) } {
            Ok(s) => s,
            Err(status) => return status,
        };
        new_board(Board::bundled(name), out)
    })
}

/// Loads a board file in canonical TOML or flat-track format.
///
/// # Safety
/// `path` must be a valid C string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_board_load(path: *const c_char, out: *mut *mut SlBoard) -> SlStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let path = match unsafe { read_str(path) } {
            Ok(s) => s,
            Err(status) => return status,
        };
        new_board(Board::load_path(path), out)
    })
}

/// Parses a board document held in memory.
///
/// # Safety
/// `text` and `name` must be valid C strings; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_board_parse(
    name: *const c_char,
    text: *const c_char,
    out: *mut *mut SlBoard,
) -> SlStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (name, text) = match unsafe { (read_str(name), read_str(text)) } {
            (Ok(n), Ok(t)) => (n, t),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        new_board(Board::load_str(name, text), out)
    })
}

/// # Safety
/// `board` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_board_free(board: *mut SlBoard) {
    if !board.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(board) });
    }
}

/// Number of the finish square, or 0 for a null handle.
///
/// # Safety
/// `board` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sl_board_size(board: *const SlBoard) -> usize {
    // SAFETY: caller contract.
    unsafe { board.as_ref() }.map_or(0, |b| b.0.size())
}

/// # Safety
/// `board` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_board_resting_square(
    board: *const SlBoard,
    square: usize,
    out: *mut usize,
) -> SlStatus {
    guard(|| {
        let b = handle!(board);
        match b.0.resting_square(square) {
            // SAFETY: caller contract.
            Ok(s) => unsafe { write_out(out, s) },
            Err(e) => from_err(e),
        }
    })
}

/// Square reached from resting square `state` with die roll `roll` (1..=6).
///
/// # Safety
/// `board` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_board_resolve_move(
    board: *const SlBoard,
    state: usize,
    roll: c_int,
    out: *mut usize,
) -> SlStatus {
    guard(|| {
        let b = handle!(board);
        let Ok(roll) = usize::try_from(roll) else {
            return fail(SlStatus::InvalidArgument, format!("roll {roll} is negative"));
        };
        match b.0.resolve_move(state, roll) {
            // SAFETY: caller contract.
            Ok(s) => unsafe { write_out(out, s) },
            Err(e) => from_err(e),
        }
    })
}

/// Opaque handle holding the chain, finish-time profile, win matrix and
/// expectations of one board.
pub struct SlAnalysis {
    chain: GameChain,
    profile: DurationProfile,
    win: WinMatrix,
    expected: Vec<f64>,
    exact: Vec<f64>,
    fundamental: FundamentalMatrix,
}

/// Runs the exact analysis of `board` with horizon `s_max` (1000 is the
/// usual choice).
///
/// # Safety
/// `board` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_new(
    board: *const SlBoard,
    s_max: usize,
    out: *mut *mut SlAnalysis,
) -> SlStatus {
    guard(|| {
        let b = handle!(board);
        if out.is_null() {
            return fail(SlStatus::NullArgument, "null output pointer");
        }
        let chain = GameChain::build(&b.0);
        let build = || -> snakeladder::Result<SlAnalysis> {
            let profile = chain.absorption_profile(s_max)?;
            let win = WinMatrix::from_profile(&profile);
            let expected = profile.expected_durations();
            let exact = chain.expected_durations_exact()?;
            let fundamental = chain.fundamental_matrix()?;
            Ok(SlAnalysis {
                chain: chain.clone(),
                profile,
                win,
                expected,
                exact,
                fundamental,
            })
        };
        match build() {
            // SAFETY: out checked non-null.
            Ok(a) => unsafe { write_out(out, Box::into_raw(Box::new(a))) },
            Err(e) => from_err(e),
        }
    })
}

/// # Safety
/// `analysis` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_free(analysis: *mut SlAnalysis) {
    if !analysis.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(analysis) });
    }
}

/// Number of chain states, or 0 for a null handle.
///
/// # Safety
/// `analysis` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_state_count(analysis: *const SlAnalysis) -> usize {
    // SAFETY: caller contract.
    unsafe { analysis.as_ref() }.map_or(0, |a| a.chain.len())
}

/// Copies up to `len` state square numbers (ascending) into `buf` and
/// stores the number copied in `written`.
///
/// # Safety
/// `buf` must be valid for `len` writes; `written` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_states(
    analysis: *const SlAnalysis,
    buf: *mut usize,
    len: usize,
    written: *mut usize,
) -> SlStatus {
    guard(|| {
        let a = handle!(analysis);
        if buf.is_null() && len > 0 {
            return fail(SlStatus::NullArgument, "null buffer");
        }
        let n = a.chain.len().min(len);
        // SAFETY: buf valid for len >= n writes.
        unsafe { ptr::copy_nonoverlapping(a.chain.states().as_ptr(), buf, n) };
        // SAFETY: caller contract.
        unsafe { write_out(written, n) }
    })
}

fn state_index(a: &SlAnalysis, square: Square) -> Result<usize, SlStatus> {
    a.chain
        .index_of(square)
        .ok_or_else(|| from_err(Error::NotResting(square)))
}

/// Expected moves to finish from `square`: truncated sum and direct solve.
///
/// # Safety
/// `analysis` must be a live handle; out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_expected_moves(
    analysis: *const SlAnalysis,
    square: usize,
    truncated: *mut f64,
    exact: *mut f64,
) -> SlStatus {
    guard(|| {
        let a = handle!(analysis);
        if truncated.is_null() || exact.is_null() {
            return fail(SlStatus::NullArgument, "null output pointer");
        }
        let i = match state_index(a, square) {
            Ok(i) => i,
            Err(s) => return s,
        };
        // SAFETY: both checked non-null.
        unsafe {
            write_out(truncated, a.expected[i]);
            write_out(exact, a.exact[i])
        }
    })
}

/// `f` = P(finish at exactly step `s`), `g` = P(finished within `s` steps).
///
/// # Safety
/// `analysis` must be a live handle; out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_finish_probability(
    analysis: *const SlAnalysis,
    square: usize,
    s: usize,
    f: *mut f64,
    g: *mut f64,
) -> SlStatus {
    guard(|| {
        let a = handle!(analysis);
        if f.is_null() || g.is_null() {
            return fail(SlStatus::NullArgument, "null output pointer");
        }
        let i = match state_index(a, square) {
            Ok(i) => i,
            Err(st) => return st,
        };
        if s > a.profile.s_max() {
            return fail(
                SlStatus::InvalidArgument,
                format!("step {s} beyond horizon {}", a.profile.s_max()),
            );
        }
        // SAFETY: both checked non-null.
        unsafe {
            write_out(f, a.profile.f(i)[s]);
            write_out(g, a.profile.g(i)[s])
        }
    })
}

/// Probability of not having finished within the horizon.
///
/// # Safety
/// `analysis` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_tail(
    analysis: *const SlAnalysis,
    square: usize,
    out: *mut f64,
) -> SlStatus {
    guard(|| {
        let a = handle!(analysis);
        match state_index(a, square) {
            // SAFETY: caller contract.
            Ok(i) => unsafe { write_out(out, a.profile.tail(i)) },
            Err(s) => s,
        }
    })
}

/// Probability that a player on `square` returns to it before finishing.
///
/// # Safety
/// `analysis` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_return_probability(
    analysis: *const SlAnalysis,
    square: usize,
    out: *mut f64,
) -> SlStatus {
    guard(|| {
        let a = handle!(analysis);
        match a.fundamental.return_probability(square) {
            // SAFETY: caller contract.
            Ok(p) => unsafe { write_out(out, p) },
            Err(e) => from_err(e),
        }
    })
}

fn pair_value(
    analysis: *const SlAnalysis,
    i: usize,
    j: usize,
    out: *mut f64,
    pick: fn(&WinMatrix, Square, Square) -> snakeladder::Result<f64>,
) -> SlStatus {
    guard(|| {
        let a = handle!(analysis);
        match pick(&a.win, i, j) {
            // SAFETY: caller contract.
            Ok(v) => unsafe { write_out(out, v) },
            Err(e) => from_err(e),
        }
    })
}

/// Probability that `i` finishes in a strictly earlier round than `j`.
///
/// # Safety
/// `analysis` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_q(
    analysis: *const SlAnalysis,
    i: usize,
    j: usize,
    out: *mut f64,
) -> SlStatus {
    pair_value(analysis, i, j, out, WinMatrix::q)
}

/// Winning edge `Q[i][j] - Q[j][i]`.
///
/// # Safety
/// `analysis` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_x(
    analysis: *const SlAnalysis,
    i: usize,
    j: usize,
    out: *mut f64,
) -> SlStatus {
    pair_value(analysis, i, j, out, WinMatrix::x)
}

/// Probability that `i` and `j` finish in the same round.
///
/// # Safety
/// `analysis` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_draw(
    analysis: *const SlAnalysis,
    i: usize,
    j: usize,
    out: *mut f64,
) -> SlStatus {
    pair_value(analysis, i, j, out, WinMatrix::draw)
}

/// Directed cycle `i > j > k > i` and its edges.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SlTriangle {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub edge_ij: f64,
    pub edge_jk: f64,
    pub edge_ki: f64,
    pub c: f64,
}

/// Triangle maximising its smallest edge. `c <= 0` means none is intransitive.
///
/// # Safety
/// `analysis` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_analysis_best_triangle(
    analysis: *const SlAnalysis,
    out: *mut SlTriangle,
) -> SlStatus {
    guard(|| {
        let a = handle!(analysis);
        match a.win.best_triangle() {
            Ok(t) => {
                let t = SlTriangle {
                    i: t.i,
                    j: t.j,
                    k: t.k,
                    edge_ij: t.edge_ij,
                    edge_jk: t.edge_jk,
                    edge_ki: t.edge_ki,
                    c: t.c,
                };
                // SAFETY: caller contract.
                unsafe { write_out(out, t) }
            }
            Err(e) => from_err(e),
        }
    })
}

/// Simulated win/draw/loss of `i` against `j`. `stderr` is negative when
/// the estimator provides none.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SlEdge {
    pub win: f64,
    pub loss: f64,
    pub draw: f64,
    pub edge: f64,
    pub stderr: f64,
}

impl From<EdgeEstimate> for SlEdge {
    fn from(e: EdgeEstimate) -> Self {
        SlEdge {
            win: e.win,
            loss: e.loss,
            draw: e.draw,
            edge: e.edge,
            stderr: e.stderr.unwrap_or(-1.0),
        }
    }
}

/// `games` independent head-to-head races between squares `i` and `j`.
///
/// # Safety
/// `board` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_simulate_paired(
    board: *const SlBoard,
    i: usize,
    j: usize,
    games: u64,
    seed: u64,
    out: *mut SlEdge,
) -> SlStatus {
    guard(|| {
        let b = handle!(board);
        match simulate::edge_paired_games(&b.0, i, j, games, seed) {
            // SAFETY: caller contract.
            Ok(e) => unsafe { write_out(out, e.into()) },
            Err(e) => from_err(e),
        }
    })
}

/// `games` independent games from each of `i` and `j`, every duration of
/// one compared with every duration of the other.
///
/// # Safety
/// `board` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sl_simulate_per_start(
    board: *const SlBoard,
    i: usize,
    j: usize,
    games: u64,
    seed: u64,
    out: *mut SlEdge,
) -> SlStatus {
    guard(|| {
        let b = handle!(board);
        let run = || {
            let h = simulate::simulate_per_start(&b.0, &[i, j], games, seed)?;
            simulate::edge_from_histograms(&h, i, j)
        };
        match run() {
            // SAFETY: caller contract.
            Ok(e) => unsafe { write_out(out, e.into()) },
            Err(e) => from_err(e),
        }
    })
}

/// Exact duel outcome as reduced fractions.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SlDuel {
    pub win_num: i64,
    pub win_den: i64,
    pub draw_num: i64,
    pub draw_den: i64,
    pub loss_num: i64,
    pub loss_den: i64,
}

unsafe fn read_die(
    label: &str,
    values: *const i64,
    nums: *const i64,
    dens: *const i64,
    len: usize,
) -> Result<Die, SlStatus> {
    if values.is_null() || len == 0 {
        return Err(fail(SlStatus::NullArgument, format!("die {label} has no faces")));
    }
    // SAFETY: values valid for len reads per contract.
    let values = unsafe { std::slice::from_raw_parts(values, len) };
    let die = if nums.is_null() || dens.is_null() {
        Die::fair(label, values)
    } else {
        // SAFETY: nums and dens valid for len reads per contract.
        let (nums, dens) = unsafe {
            (
                std::slice::from_raw_parts(nums, len),
                std::slice::from_raw_parts(dens, len),
            )
        };
        let faces: Vec<(i64, i64, i64)> = (0..len).map(|t| (values[t], nums[t], dens[t])).collect();
        Die::weighted(label, &faces)
    };
    die.map_err(from_err)
}

fn fraction(p: &Prob) -> Option<(i64, i64)> {
    Some((p.numer().to_i64()?, p.denom().to_i64()?))
}

/// Exact duel of die A against die B. Each die is `len` face values with
/// probabilities `nums[t] / dens[t]`; pass null `nums` and `dens` for a
/// fair die. A nonzero `lower_wins` makes the lower value win.
///
/// # Safety
/// Each non-null array must be valid for its `len` reads; `out` valid for
/// a write.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn sl_dice_duel(
    values_a: *const i64,
    nums_a: *const i64,
    dens_a: *const i64,
    len_a: usize,
    values_b: *const i64,
    nums_b: *const i64,
    dens_b: *const i64,
    len_b: usize,
    lower_wins: c_int,
    out: *mut SlDuel,
) -> SlStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let a = match unsafe { read_die("A", values_a, nums_a, dens_a, len_a) } {
            Ok(d) => d,
            Err(s) => return s,
        };
        // SAFETY: forwarded caller contract.
        let b = match unsafe { read_die("B", values_b, nums_b, dens_b, len_b) } {
            Ok(d) => d,
            Err(s) => return s,
        };
        let rule = if lower_wins != 0 {
            WinRule::Lower
        } else {
            WinRule::Higher
        };
        let d = dice::duel(&a, &b, rule);
        match (fraction(&d.win), fraction(&d.draw), fraction(&d.loss)) {
            (Some(w), Some(dr), Some(l)) => {
                let res = SlDuel {
                    win_num: w.0,
                    win_den: w.1,
                    draw_num: dr.0,
                    draw_den: dr.1,
                    loss_num: l.0,
                    loss_den: l.1,
                };
                // SAFETY: caller contract.
                unsafe { write_out(out, res) }
            }
            _ => fail(SlStatus::Overflow, "duel fractions do not fit in 64 bits"),
        }
    })
}

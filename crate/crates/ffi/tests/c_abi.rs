use std::ffi::{c_char, CStr, CString};
use std::ptr;

use snakeladder_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; sl_last_error_length() + 1];
    unsafe { sl_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

fn bundled(name: &str) -> *mut SlBoard {
    let name = CString::new(name).unwrap();
    let mut board = ptr::null_mut();
    assert_eq!(unsafe { sl_board_bundled(name.as_ptr(), &mut board) }, SlStatus::Ok);
    assert!(!board.is_null());
    board
}

#[test]
fn board_queries() {
    let board = bundled("mini10");
    assert_eq!(unsafe { sl_board_size(board) }, 10);

    let mut sq = 0;
    assert_eq!(unsafe { sl_board_resting_square(board, 3, &mut sq) }, SlStatus::Ok);
    assert_eq!(sq, 7);
    // 9 + 4 reflects to 7
    assert_eq!(unsafe { sl_board_resolve_move(board, 9, 4, &mut sq) }, SlStatus::Ok);
    assert_eq!(sq, 7);

    assert_eq!(
        unsafe { sl_board_resolve_move(board, 3, 1, &mut sq) },
        SlStatus::NotAState
    );
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { sl_board_resolve_move(board, 0, 7, &mut sq) },
        SlStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { sl_board_resolve_move(board, 0, -1, &mut sq) },
        SlStatus::InvalidArgument
    );
    unsafe { sl_board_free(board) };
}

#[test]
fn load_errors_report_codes() {
    let mut board = ptr::null_mut();
    let name = CString::new("no-such-board").unwrap();
    assert_eq!(
        unsafe { sl_board_bundled(name.as_ptr(), &mut board) },
        SlStatus::InvalidBoard
    );
    assert!(board.is_null());

    let path = CString::new("/nonexistent/board.toml").unwrap();
    assert_eq!(unsafe { sl_board_load(path.as_ptr(), &mut board) }, SlStatus::Io);
    assert!(last_error().contains("/nonexistent/board.toml"));

    assert_eq!(
        unsafe { sl_board_load(ptr::null(), &mut board) },
        SlStatus::NullArgument
    );

    let text = CString::new("size = 10\nredirects = [[3, 3]]\n").unwrap();
    let nm = CString::new("bad").unwrap();
    assert_eq!(
        unsafe { sl_board_parse(nm.as_ptr(), text.as_ptr(), &mut board) },
        SlStatus::InvalidBoard
    );

    let text = CString::new("size = ").unwrap();
    assert_eq!(
        unsafe { sl_board_parse(nm.as_ptr(), text.as_ptr(), &mut board) },
        SlStatus::MalformedDocument
    );
}

#[test]
fn parse_board_from_memory() {
    let text = CString::new("size = 10\novershoot = \"reflect\"\nredirects = [[3, 7], [8, 2]]\n").unwrap();
    let nm = CString::new("inline").unwrap();
    let mut board = ptr::null_mut();
    assert_eq!(
        unsafe { sl_board_parse(nm.as_ptr(), text.as_ptr(), &mut board) },
        SlStatus::Ok
    );
    let mut analysis = ptr::null_mut();
    assert_eq!(unsafe { sl_analysis_new(board, 1000, &mut analysis) }, SlStatus::Ok);
    // 0,1,2,4,5,6,7,9 plus finish
    assert_eq!(unsafe { sl_analysis_state_count(analysis) }, 9);
    let mut states = [0usize; 16];
    let mut n = 0;
    assert_eq!(
        unsafe { sl_analysis_states(analysis, states.as_mut_ptr(), states.len(), &mut n) },
        SlStatus::Ok
    );
    assert_eq!(&states[..n], &[0, 1, 2, 4, 5, 6, 7, 9, 10]);

    let (mut f, mut g) = (0.0, 0.0);
    assert_eq!(
        unsafe { sl_analysis_finish_probability(analysis, 9, 1, &mut f, &mut g) },
        SlStatus::Ok
    );
    assert!((f - 1.0 / 6.0).abs() < 1e-15);
    assert!((g - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(
        unsafe { sl_analysis_finish_probability(analysis, 9, 1001, &mut f, &mut g) },
        SlStatus::InvalidArgument
    );
    unsafe {
        sl_analysis_free(analysis);
        sl_board_free(board);
    }
}

#[test]
fn full_board_analysis() {
    let board = bundled("paper-figure2");
    let mut analysis = ptr::null_mut();
    assert_eq!(unsafe { sl_analysis_new(board, 1000, &mut analysis) }, SlStatus::Ok);
    assert_eq!(unsafe { sl_analysis_state_count(analysis) }, 82);

    let (mut t, mut e) = (0.0, 0.0);
    assert_eq!(
        unsafe { sl_analysis_expected_moves(analysis, 0, &mut t, &mut e) },
        SlStatus::Ok
    );
    assert!((t - e).abs() < 1e-9);
    assert_eq!(
        unsafe { sl_analysis_expected_moves(analysis, 100, &mut t, &mut e) },
        SlStatus::Ok
    );
    assert_eq!(t, 0.0);

    let mut x = 0.0;
    assert_eq!(unsafe { sl_analysis_x(analysis, 69, 79, &mut x) }, SlStatus::Ok);
    assert!((x - 0.007714).abs() < 5e-4);
    let (mut q_ij, mut q_ji, mut d) = (0.0, 0.0, 0.0);
    unsafe {
        sl_analysis_q(analysis, 69, 79, &mut q_ij);
        sl_analysis_q(analysis, 79, 69, &mut q_ji);
        sl_analysis_draw(analysis, 69, 79, &mut d);
    }
    assert!((q_ij + q_ji + d - 1.0).abs() < 1e-12);
    assert_eq!(x, q_ij - q_ji);

    // 16 is redirected, not a state
    assert_eq!(
        unsafe { sl_analysis_x(analysis, 16, 79, &mut x) },
        SlStatus::NotAState
    );

    let mut tail = 1.0;
    assert_eq!(unsafe { sl_analysis_tail(analysis, 0, &mut tail) }, SlStatus::Ok);
    assert!(tail < 1e-14);

    let mut p = 0.0;
    assert_eq!(
        unsafe { sl_analysis_return_probability(analysis, 69, &mut p) },
        SlStatus::Ok
    );
    assert!(p > 0.0 && p < 1.0);

    let mut tri = SlTriangle::default();
    assert_eq!(
        unsafe { sl_analysis_best_triangle(analysis, &mut tri) },
        SlStatus::Ok
    );
    assert_eq!((tri.i, tri.j, tri.k), (69, 79, 73));
    assert!(tri.c >= 0.005);

    unsafe {
        sl_analysis_free(analysis);
        sl_board_free(board);
    }
}

#[test]
fn simulation_is_seeded() {
    let board = bundled("mini10");
    let mut a = SlEdge::default();
    let mut b = SlEdge::default();
    unsafe {
        assert_eq!(sl_simulate_paired(board, 0, 9, 2000, 7, &mut a), SlStatus::Ok);
        assert_eq!(sl_simulate_paired(board, 0, 9, 2000, 7, &mut b), SlStatus::Ok);
    }
    assert_eq!(a.edge, b.edge);
    assert!(a.stderr > 0.0);
    assert!((a.win + a.loss + a.draw - 1.0).abs() < 1e-12);

    let mut h = SlEdge::default();
    assert_eq!(
        unsafe { sl_simulate_per_start(board, 0, 9, 2000, 7, &mut h) },
        SlStatus::Ok
    );
    assert!(h.stderr < 0.0);
    assert!(h.edge < 0.0, "square 9 should beat square 0");

    assert_eq!(
        unsafe { sl_simulate_paired(board, 0, 3, 100, 7, &mut a) },
        SlStatus::NotAState
    );
    unsafe { sl_board_free(board) };
}

#[test]
fn dice_duels() {
    let a = [2i64, 6, 7];
    let b = [1i64, 5, 9];
    let mut d = SlDuel::default();
    let st = unsafe {
        sl_dice_duel(
            a.as_ptr(),
            ptr::null(),
            ptr::null(),
            3,
            b.as_ptr(),
            ptr::null(),
            ptr::null(),
            3,
            0,
            &mut d,
        )
    };
    assert_eq!(st, SlStatus::Ok);
    assert_eq!((d.win_num, d.win_den), (5, 9));
    assert_eq!((d.loss_num, d.loss_den), (4, 9));
    assert_eq!(d.draw_num, 0);

    // weighted die against a constant, lower value wins
    let c = [2i64];
    let one = [1i64];
    let w = [1i64, 3];
    let wn = [1i64, 2];
    let wd = [3i64, 3];
    let st = unsafe {
        sl_dice_duel(
            c.as_ptr(),
            one.as_ptr(),
            one.as_ptr(),
            1,
            w.as_ptr(),
            wn.as_ptr(),
            wd.as_ptr(),
            2,
            1,
            &mut d,
        )
    };
    assert_eq!(st, SlStatus::Ok);
    assert_eq!((d.win_num, d.win_den), (2, 3));

    // probabilities summing to 2/3
    let bad = [1i64, 1];
    let st = unsafe {
        sl_dice_duel(
            c.as_ptr(),
            ptr::null(),
            ptr::null(),
            1,
            w.as_ptr(),
            bad.as_ptr(),
            wd.as_ptr(),
            2,
            1,
            &mut d,
        )
    };
    assert_eq!(st, SlStatus::InvalidArgument);

    let st = unsafe {
        sl_dice_duel(
            ptr::null(),
            ptr::null(),
            ptr::null(),
            0,
            b.as_ptr(),
            ptr::null(),
            ptr::null(),
            3,
            0,
            &mut d,
        )
    };
    assert_eq!(st, SlStatus::NullArgument);
}

#[test]
fn null_handles_and_buffers() {
    let mut x = 0.0;
    assert_eq!(
        unsafe { sl_analysis_x(ptr::null(), 0, 0, &mut x) },
        SlStatus::NullArgument
    );
    assert_eq!(unsafe { sl_board_size(ptr::null()) }, 0);
    unsafe {
        sl_board_free(ptr::null_mut());
        sl_analysis_free(ptr::null_mut());
    }
    assert_eq!(unsafe { sl_last_error_message(ptr::null_mut(), 4) }, 0);

    let board = bundled("mini10");
    assert_eq!(
        unsafe { sl_board_resting_square(board, 3, ptr::null_mut()) },
        SlStatus::NullArgument
    );
    unsafe { sl_board_free(board) };

    // truncation keeps the terminator
    let mut small = [1 as c_char; 4];
    let n = unsafe { sl_last_error_message(small.as_mut_ptr(), small.len()) };
    assert_eq!(n, 3);
    assert_eq!(small[3], 0);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(sl_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/snakeladder.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() > 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

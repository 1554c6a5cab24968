//! C ABI over the `dirac-ham` engine.
//!
//! Objects are opaque handles created by `dh_*_new`/`dh_graph_*` and
//! released with the matching `*_free`. Every fallible call returns a
//! status code (`DH_OK` on success) and writes results through out
//! pointers. The message of the last failure on the calling thread is
//! available from [`dh_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dirac_ham::classify::{classify, Case, ClassifierParams, SearchMode};
use dirac_ham::game::{Bias, GameState, Player};
use dirac_ham::graph::{is_dirac, verify_hamilton_cycle};
use dirac_ham::rotation::{find_hamilton_cycle, Budget};
use dirac_ham::{Error, Graph};

pub const DH_OK: i32 = 0;
pub const DH_ERR_NULL: i32 = 1;
pub const DH_ERR_INVALID_SET: i32 = 2;
pub const DH_ERR_DOMAIN: i32 = 3;
pub const DH_ERR_PARSE: i32 = 4;
pub const DH_ERR_BUDGET: i32 = 5;
pub const DH_ERR_PRECONDITION: i32 = 6;
pub const DH_ERR_CLASSIFICATION: i32 = 7;
pub const DH_ERR_ROTATION: i32 = 8;
pub const DH_ERR_HALL: i32 = 9;
pub const DH_ERR_FRAME: i32 = 10;
pub const DH_ERR_ILLEGAL_MOVE: i32 = 11;
pub const DH_ERR_IO: i32 = 12;
pub const DH_ERR_PANIC: i32 = 13;
pub const DH_ERR_BUFFER: i32 = 14;
pub const DH_ERR_UTF8: i32 = 15;

pub const DH_CASE_DENSE_CROSSING: i32 = 0;
pub const DH_CASE_NEAR_DISCONNECTED: i32 = 1;
pub const DH_CASE_NEAR_BIPARTITE: i32 = 2;

pub const DH_PLAYER_MAKER: i32 = 0;
pub const DH_PLAYER_BREAKER: i32 = 1;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (i32, String)>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DH_OK,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside dirac-ham".into());
            DH_ERR_PANIC
        }
    }
}

fn engine(e: Error) -> (i32, String) {
    (e.code(), e.to_string())
}

fn null(what: &str) -> (i32, String) {
    (DH_ERR_NULL, format!("{what} is null"))
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (i32, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn as_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (i32, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Opaque graph handle.
pub struct DhGraph(Graph);

/// Opaque game handle: a position of a graph-board Maker-Breaker game.
pub struct DhGame {
    state: GameState,
    hash: CString,
}

/// Message of the last failure on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a graph on `n` vertices from `m` edges given as `2m` endpoints.
///
/// # Safety
/// `edges` must point to `2 * m` readable values (or be null when `m == 0`),
/// and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dh_graph_from_edges(n: usize, edges: *const usize, m: usize, out: *mut *mut DhGraph) -> i32 {
    guard(|| {
        let out = as_mut(out, "out")?;
        let flat: &[usize] = if m == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(as_ref(edges, "edges")?, 2 * m)
        };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let g = Graph::from_edges(n, &pairs).map_err(engine)?;
        *out = Box::into_raw(Box::new(DhGraph(g)));
        Ok(())
    })
}

/// Parses the text edge-list format or graph JSON.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dh_graph_parse(text: *const c_char, out: *mut *mut DhGraph) -> i32 {
    guard(|| {
        let out = as_mut(out, "out")?;
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (DH_ERR_UTF8, e.to_string()))?;
        let g = Graph::parse(s).map_err(engine)?;
        *out = Box::into_raw(Box::new(DhGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from a `dh_graph_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dh_graph_free(g: *mut DhGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dh_graph_n(g: *const DhGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dh_graph_m(g: *const DhGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.m())
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dh_is_dirac(g: *const DhGraph, out: *mut bool) -> i32 {
    guard(|| {
        let g = as_ref(g, "graph")?;
        *as_mut(out, "out")? = is_dirac(&g.0).map_err(engine)?;
        Ok(())
    })
}

/// Checks that `seq[0..len]` is a Hamilton cycle of `g`.
///
/// # Safety
/// `g` must be a live handle, `seq` must point to `len` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dh_verify_hamilton_cycle(
    g: *const DhGraph,
    seq: *const usize,
    len: usize,
    out: *mut bool,
) -> i32 {
    guard(|| {
        let g = as_ref(g, "graph")?;
        let s: &[usize] = if len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(as_ref(seq, "seq")?, len)
        };
        *as_mut(out, "out")? = verify_hamilton_cycle(&g.0, s);
        Ok(())
    })
}

/// Randomized rotation search. On success with `*found` true, the cycle's
/// `n` vertices are written to `out_seq`, which must have room for `cap`
/// values (`cap >= n`).
///
/// # Safety
/// `g` must be a live handle; `out_seq` must point to `cap` writable values;
/// `found` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dh_find_hamilton_cycle(
    g: *const DhGraph,
    restarts: usize,
    max_steps: usize,
    seed: u64,
    out_seq: *mut usize,
    cap: usize,
    found: *mut bool,
) -> i32 {
    guard(|| {
        let g = as_ref(g, "graph")?;
        let found = as_mut(found, "found")?;
        if cap < g.0.n() {
            return Err((DH_ERR_BUFFER, format!("buffer holds {cap} values, need {}", g.0.n())));
        }
        let buf = std::slice::from_raw_parts_mut(as_mut(out_seq, "out_seq")?, cap);
        let report = find_hamilton_cycle(&g.0, Budget { restarts, max_steps }, seed).map_err(engine)?;
        *found = report.found.is_some();
        if let Some(c) = report.found {
            buf[..c.seq.len()].copy_from_slice(&c.seq);
        }
        Ok(())
    })
}

/// Structural case of a Dirac graph, one of the `DH_CASE_*` values.
/// `exact` selects exhaustive half-set search instead of local search.
///
/// # Safety
/// `g` must be a live handle and `out_case` writable.
#[no_mangle]
pub unsafe extern "C" fn dh_classify(
    g: *const DhGraph,
    alpha: f64,
    gamma: f64,
    exact: bool,
    seed: u64,
    out_case: *mut i32,
) -> i32 {
    guard(|| {
        let g = as_ref(g, "graph")?;
        let out = as_mut(out_case, "out_case")?;
        let params = ClassifierParams::new(alpha, gamma).map_err(engine)?;
        let mode = if exact { SearchMode::Exact } else { SearchMode::Local };
        let cls = classify(&g.0, params, mode, seed).map_err(engine)?;
        *out = match cls.case {
            Case::DenseCrossing => DH_CASE_DENSE_CROSSING,
            Case::NearDisconnected => DH_CASE_NEAR_DISCONNECTED,
            Case::NearBipartite => DH_CASE_NEAR_BIPARTITE,
        };
        Ok(())
    })
}

fn player(code: i32) -> Result<Player, (i32, String)> {
    match code {
        DH_PLAYER_MAKER => Ok(Player::Maker),
        DH_PLAYER_BREAKER => Ok(Player::Breaker),
        _ => Err((DH_ERR_DOMAIN, format!("unknown player code {code}"))),
    }
}

fn player_code(p: Player) -> i32 {
    match p {
        Player::Maker => DH_PLAYER_MAKER,
        Player::Breaker => DH_PLAYER_BREAKER,
    }
}

/// Starts an `(a:b)` game on the edges of `g`.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dh_game_new(g: *const DhGraph, a: usize, b: usize, first: i32, out: *mut *mut DhGame) -> i32 {
    guard(|| {
        let g = as_ref(g, "graph")?;
        let out = as_mut(out, "out")?;
        let bias = Bias::new(a, b).map_err(engine)?;
        let state = GameState::new(g.0.m(), bias, player(first)?);
        *out = Box::into_raw(Box::new(DhGame {
            state,
            hash: CString::default(),
        }));
        Ok(())
    })
}

/// # Safety
/// `game` must come from [`dh_game_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dh_game_free(game: *mut DhGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Claims `element` for the player to move.
///
/// # Safety
/// `game` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dh_game_claim(game: *mut DhGame, element: usize) -> i32 {
    guard(|| {
        let game = as_mut(game, "game")?;
        game.state.claim(element).map_err(engine)
    })
}

/// Player to move (`DH_PLAYER_*`), or -1 once the board is exhausted.
///
/// # Safety
/// `game` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dh_game_to_move(game: *const DhGame) -> i32 {
    match game.as_ref() {
        Some(g) if !g.state.is_over() => player_code(g.state.to_move()),
        _ => -1,
    }
}

/// Owner of `element`: `DH_PLAYER_*`, or -1 when unclaimed or out of range.
///
/// # Safety
/// `game` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dh_game_owner(game: *const DhGame, element: usize) -> i32 {
    match game.as_ref() {
        Some(g) if element < g.state.size() => g.state.owner(element).map_or(-1, player_code),
        _ => -1,
    }
}

/// Hex SHA-256 of the canonical position. The string is owned by the game
/// and valid until the next call on it.
///
/// # Safety
/// `game` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dh_game_state_hash(game: *mut DhGame) -> *const c_char {
    match game.as_mut() {
        Some(g) => {
            g.hash = CString::new(g.state.state_hash()).unwrap_or_default();
            g.hash.as_ptr()
        }
        None => ptr::null(),
    }
}

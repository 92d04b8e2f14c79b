//! C ABI over `dilemma-core`.
//!
//! Every function returns a [`DilemmaStatus`]; outputs go through pointer
//! arguments. Handles are opaque and must be released with the matching
//! `*_free` function. On failure, `dilemma_last_error` returns a message for
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dilemma_core::game::{self, Action, ActionProfile, DilemmaKind, NormalFormGame};
use dilemma_core::games::{self, BaseGameParams, FunctionalParams};
use dilemma_core::self_interest::{self, GeneralOptions, SelfInterestResult};
use dilemma_core::transfer::{self, TransferMatrix};
use dilemma_core::{examples, io, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DilemmaStatus {
    Ok = 0,
    NotADilemma = 1,
    Infeasible = 2,
    InvalidInput = 3,
    NullPointer = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DilemmaKindCode {
    Strict = 0,
    Partial = 1,
    NotDilemma = 2,
}

pub struct DilemmaGame(NormalFormGame);
pub struct DilemmaMatrix(TransferMatrix);
pub struct DilemmaResult(SelfInterestResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> DilemmaStatus {
    match err {
        Error::InvalidInput(_) | Error::NotAvailable(_) => DilemmaStatus::InvalidInput,
        Error::NotADilemma(_) => DilemmaStatus::NotADilemma,
        Error::NotResolvable(_) => DilemmaStatus::Infeasible,
        Error::Internal(_) => DilemmaStatus::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

type FfiResult = Result<(), Fail>;

fn guard(f: impl FnOnce() -> FfiResult) -> DilemmaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DilemmaStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer passed as {what}"));
            DilemmaStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            DilemmaStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Core(Error::InvalidInput(format!("{what} is not valid UTF-8"))))
}

unsafe fn target_arg(p: *const c_char, game: &NormalFormGame) -> Result<Option<ActionProfile>, Fail> {
    if p.is_null() {
        return Ok(None);
    }
    let p = ActionProfile::parse(str_arg(p, "target")?)?;
    if p.players() != game.players() {
        return Err(Fail::Core(Error::InvalidInput(format!(
            "target {p} does not match a {}-player game",
            game.players()
        ))));
    }
    Ok(Some(p))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no nul bytes").into_raw()
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dilemma_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by a `*_to_json` function.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dilemma_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_game_from_json(json: *const c_char, out: *mut *mut DilemmaGame) -> DilemmaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let g = io::parse_game(str_arg(json, "json")?)?;
        *out = boxed(DilemmaGame(g));
        Ok(())
    })
}

/// # Safety
/// `game` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_game_to_json(game: *const DilemmaGame, out: *mut *mut c_char) -> DilemmaStatus {
    guard(|| {
        let g = deref(game, "game")?;
        *out_ptr(out, "out")? = c_string(io::write_game(&g.0));
        Ok(())
    })
}

/// Builds a game from a flat payoff array of `2^n * n` values, profile index
/// major, where bit `k` of the index is player `k + 1`'s action (1 = defect).
///
/// # Safety
/// `payoffs` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_game_from_payoffs(
    n: usize,
    payoffs: *const f64,
    len: usize,
    out: *mut *mut DilemmaGame,
) -> DilemmaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if payoffs.is_null() {
            return Err(Fail::Null("payoffs"));
        }
        let values = std::slice::from_raw_parts(payoffs, len).to_vec();
        *out = boxed(DilemmaGame(NormalFormGame::from_flat(n, values)?));
        Ok(())
    })
}

/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_game_example(name: *const c_char, epsilon: f64, out: *mut *mut DilemmaGame) -> DilemmaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let name = str_arg(name, "name")?;
        let g = examples::by_name(name, epsilon)
            .ok_or_else(|| Error::InvalidInput(format!("unknown example \"{name}\"")))?;
        *out = boxed(DilemmaGame(g));
        Ok(())
    })
}

/// `graph` is one of cyclical, symmetrical, circular, tycoon; `base` one of
/// pd, chicken, stag-hunt.
///
/// # Safety
/// String arguments must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_game_graphical(
    graph: *const c_char,
    base: *const c_char,
    n: usize,
    c: f64,
    d: f64,
    out: *mut *mut DilemmaGame,
) -> DilemmaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let graph = str_arg(graph, "graph")?.parse()?;
        let base = str_arg(base, "base")?.parse()?;
        let g = games::build_graphical(graph, BaseGameParams::new(base, c, d)?, n)?;
        *out = boxed(DilemmaGame(g));
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_game_functional(n: usize, c: f64, out: *mut *mut DilemmaGame) -> DilemmaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(DilemmaGame(games::build_functional(FunctionalParams::new(n, c)?)?));
        Ok(())
    })
}

/// Number of players, or 0 for a null handle.
///
/// # Safety
/// `game` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dilemma_game_players(game: *const DilemmaGame) -> usize {
    game.as_ref().map_or(0, |g| g.0.players())
}

/// Reward of `player` (0-based) at profile index `profile`.
///
/// # Safety
/// `game` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_game_reward(
    game: *const DilemmaGame,
    profile: usize,
    player: usize,
    out: *mut f64,
) -> DilemmaStatus {
    guard(|| {
        let g = &deref(game, "game")?.0;
        let p = g.profile(profile)?;
        if player >= g.players() {
            return Err(Error::InvalidInput(format!("player index {player} out of range")).into());
        }
        *out_ptr(out, "out")? = g.reward(p, player);
        Ok(())
    })
}

/// # Safety
/// `game` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dilemma_game_free(game: *mut DilemmaGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// # Safety
/// `game` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_classify(game: *const DilemmaGame, out: *mut DilemmaKindCode) -> DilemmaStatus {
    guard(|| {
        let g = deref(game, "game")?;
        *out_ptr(out, "out")? = match game::classify_dilemma(&g.0).kind {
            DilemmaKind::Strict => DilemmaKindCode::Strict,
            DilemmaKind::Partial => DilemmaKindCode::Partial,
            DilemmaKind::NotDilemma => DilemmaKindCode::NotDilemma,
        };
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_matrix_exchange(n: usize, s: f64, out: *mut *mut DilemmaMatrix) -> DilemmaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(DilemmaMatrix(transfer::exchange_matrix(n, s)?));
        Ok(())
    })
}

/// # Safety
/// `json` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_matrix_from_json(json: *const c_char, out: *mut *mut DilemmaMatrix) -> DilemmaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(DilemmaMatrix(io::parse_matrix(str_arg(json, "json")?)?));
        Ok(())
    })
}

/// # Safety
/// `matrix` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_matrix_to_json(matrix: *const DilemmaMatrix, out: *mut *mut c_char) -> DilemmaStatus {
    guard(|| {
        let m = deref(matrix, "matrix")?;
        *out_ptr(out, "out")? = c_string(io::write_matrix(&m.0));
        Ok(())
    })
}

/// Size of the matrix, or 0 for a null handle.
///
/// # Safety
/// `matrix` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dilemma_matrix_size(matrix: *const DilemmaMatrix) -> usize {
    matrix.as_ref().map_or(0, |m| m.0.size())
}

/// Share of player `from`'s reward sent to player `to` (both 0-based).
///
/// # Safety
/// `matrix` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_matrix_get(
    matrix: *const DilemmaMatrix,
    from: usize,
    to: usize,
    out: *mut f64,
) -> DilemmaStatus {
    guard(|| {
        let m = &deref(matrix, "matrix")?.0;
        if from >= m.size() || to >= m.size() {
            return Err(Error::InvalidInput(format!("index ({from}, {to}) out of range")).into());
        }
        *out_ptr(out, "out")? = m.get(from, to);
        Ok(())
    })
}

/// # Safety
/// `matrix` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dilemma_matrix_free(matrix: *mut DilemmaMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// Writes a new game with the transfers applied.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_apply_transfers(
    game: *const DilemmaGame,
    matrix: *const DilemmaMatrix,
    out: *mut *mut DilemmaGame,
) -> DilemmaStatus {
    guard(|| {
        let g = deref(game, "game")?;
        let m = deref(matrix, "matrix")?;
        let out = out_ptr(out, "out")?;
        *out = boxed(DilemmaGame(transfer::apply_transfers(&g.0, &m.0)?));
        Ok(())
    })
}

/// Sets `*weakly_dominant` to whether `target` (null = all-C) is weakly
/// dominant for every player after transfers.
///
/// # Safety
/// Handles must be live; `target` null or nul-terminated; `weakly_dominant` writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_verify(
    game: *const DilemmaGame,
    matrix: *const DilemmaMatrix,
    target: *const c_char,
    tolerance: f64,
    weakly_dominant: *mut bool,
) -> DilemmaStatus {
    guard(|| {
        let g = &deref(game, "game")?.0;
        let m = &deref(matrix, "matrix")?.0;
        let out = out_ptr(weakly_dominant, "weakly_dominant")?;
        let target = target_arg(target, g)?.unwrap_or_else(|| ActionProfile::all(Action::C, g.players()));
        *out = transfer::verify_resolution(g, m, target, tolerance)?.weakly_dominant;
        Ok(())
    })
}

/// # Safety
/// `game` must be live; `target` null (all-C) or nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_symmetrical_level(
    game: *const DilemmaGame,
    target: *const c_char,
    out: *mut *mut DilemmaResult,
) -> DilemmaStatus {
    guard(|| {
        let g = &deref(game, "game")?.0;
        let out = out_ptr(out, "out")?;
        let target = target_arg(target, g)?;
        *out = boxed(DilemmaResult(self_interest::symmetrical_level(g, target)?));
        Ok(())
    })
}

/// # Safety
/// `game` must be live; `target` null (all-C) or nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_general_level(
    game: *const DilemmaGame,
    target: *const c_char,
    allow_excess: bool,
    force: bool,
    out: *mut *mut DilemmaResult,
) -> DilemmaStatus {
    guard(|| {
        let g = &deref(game, "game")?.0;
        let out = out_ptr(out, "out")?;
        let mut opts = GeneralOptions::default().with_excess(allow_excess).forced(force);
        opts.target = target_arg(target, g)?;
        *out = boxed(DilemmaResult(self_interest::general_level(g, &opts)?));
        Ok(())
    })
}

/// The level, or NaN for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dilemma_result_level(result: *const DilemmaResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.0.level)
}

/// Copies the result's transfer matrix into a new handle.
///
/// # Safety
/// `result` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_result_matrix(result: *const DilemmaResult, out: *mut *mut DilemmaMatrix) -> DilemmaStatus {
    guard(|| {
        let r = deref(result, "result")?;
        *out_ptr(out, "out")? = boxed(DilemmaMatrix(r.0.matrix.clone()));
        Ok(())
    })
}

/// # Safety
/// `result` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dilemma_result_to_json(result: *const DilemmaResult, out: *mut *mut c_char) -> DilemmaStatus {
    guard(|| {
        let r = deref(result, "result")?;
        *out_ptr(out, "out")? = c_string(io::write_result(&r.0));
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dilemma_result_free(result: *mut DilemmaResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

//! C ABI over `delta_nash`.
//!
//! Games are opaque `DnGame` handles created by `dn_game_*` constructors and
//! released with `dn_game_free`. Every fallible call returns a `DnStatus`;
//! on failure `dn_last_error_message` describes the most recent error on the
//! calling thread. Panics are caught at the boundary and reported as
//! `DN_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use delta_nash::demand::demands_compatible;
use delta_nash::geometry::bargaining_area;
use delta_nash::model::GameSpec;
use delta_nash::scenario::Scenario;
use delta_nash::solver::{closed_form_example, solve, Solution, SolverError, SolverOptions, Status};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Input failed validation: scenario text, delta range, budget, options.
    InvalidInput = 3,
    SolverFailure = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DnOutcome {
    Agreement = 0,
    Disagreement = 1,
    Degenerate = 2,
}

/// Solution of one game. `s_star` and `u_star` are meaningful only when
/// `has_allocation` is true.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DnSolution {
    pub deltas: [f64; 2],
    pub disagreement: [f64; 2],
    pub has_allocation: bool,
    pub s_star: [f64; 2],
    pub p_star: [f64; 2],
    pub u_star: [f64; 2],
    pub nash_product: f64,
    pub outcome: DnOutcome,
    pub boundary_claim_mismatch: bool,
}

/// Opaque game handle.
pub struct DnGame {
    game: GameSpec,
    options: SolverOptions,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("nul bytes removed"));
}

struct Fail(DnStatus, String);

impl From<SolverError> for Fail {
    fn from(e: SolverError) -> Self {
        let status = match e {
            SolverError::Domain(_) | SolverError::InvalidOptions(_) => DnStatus::InvalidInput,
            _ => DnStatus::SolverFailure,
        };
        Fail(status, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> DnStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            DnStatus::Ok
        }
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DnStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(DnStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

fn to_c(sol: &Solution) -> DnSolution {
    DnSolution {
        deltas: sol.deltas,
        disagreement: sol.disagreement,
        has_allocation: sol.s_star.is_some(),
        s_star: sol.s_star.unwrap_or([f64::NAN; 2]),
        p_star: sol.p_star,
        u_star: sol.u_star.unwrap_or([f64::NAN; 2]),
        nash_product: sol.nash_product,
        outcome: match sol.status {
            Status::Agreement => DnOutcome::Agreement,
            Status::Disagreement => DnOutcome::Disagreement,
            Status::Degenerate => DnOutcome::Degenerate,
        },
        boundary_claim_mismatch: sol.diagnostics.boundary_claim_mismatch,
    }
}

fn boxed(game: GameSpec, options: SolverOptions) -> *mut DnGame {
    Box::into_raw(Box::new(DnGame { game, options }))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `dn_*` call on the same thread.
#[no_mangle]
pub extern "C" fn dn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a game from scenario text (TOML). Both deltas must be fixed numbers.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must point to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dn_game_from_scenario(text: *const c_char, out: *mut *mut DnGame) -> DnStatus {
    guard(|| {
        non_null(text, "text")?;
        non_null(out, "out")?;
        let text = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|e| Fail(DnStatus::InvalidUtf8, e.to_string()))?;
        let invalid = |e: delta_nash::scenario::ScenarioError| Fail(DnStatus::InvalidInput, e.to_string());
        let scenario = Scenario::parse(text).map_err(invalid)?;
        let game = scenario.game().map_err(invalid)?;
        unsafe { *out = boxed(game, scenario.solver) };
        Ok(())
    })
}

/// The profit split over `budget`: `U_i = s_i`, `D_i = s_i - s_j`,
/// disagreement payoffs `(0, 0)`.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dn_game_profit_split(budget: f64, delta1: f64, delta2: f64, out: *mut *mut DnGame) -> DnStatus {
    guard(|| {
        non_null(out, "out")?;
        let game = GameSpec::profit_split(budget, delta1, delta2).map_err(|e| Fail(DnStatus::InvalidInput, e.to_string()))?;
        unsafe { *out = boxed(game, SolverOptions::default()) };
        Ok(())
    })
}

/// Copy of `game` with new deltas.
///
/// # Safety
/// `game` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn dn_game_with_deltas(
    game: *const DnGame,
    delta1: f64,
    delta2: f64,
    out: *mut *mut DnGame,
) -> DnStatus {
    guard(|| {
        non_null(game, "game")?;
        non_null(out, "out")?;
        let handle = unsafe { &*game };
        let next = handle
            .game
            .with_deltas(delta1, delta2)
            .map_err(|e| Fail(DnStatus::InvalidInput, e.to_string()))?;
        unsafe { *out = boxed(next, handle.options.clone()) };
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `game` must be null or a handle from a `dn_game_*` constructor that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn dn_game_free(game: *mut DnGame) {
    if !game.is_null() {
        drop(unsafe { Box::from_raw(game) });
    }
}

/// Solves the game with its scenario's solver options.
///
/// # Safety
/// `game` must be a live handle; `out` must point to a writable `DnSolution`.
#[no_mangle]
pub unsafe extern "C" fn dn_solve(game: *const DnGame, out: *mut DnSolution) -> DnStatus {
    guard(|| {
        non_null(game, "game")?;
        non_null(out, "out")?;
        let handle = unsafe { &*game };
        let sol = solve(&handle.game, &handle.options)?;
        unsafe { *out = to_c(&sol) };
        Ok(())
    })
}

/// Closed-form profit-split solution, defined for `0 < delta <= 1`.
///
/// # Safety
/// `out` must point to a writable `DnSolution`.
#[no_mangle]
pub unsafe extern "C" fn dn_closed_form(delta1: f64, delta2: f64, budget: f64, out: *mut DnSolution) -> DnStatus {
    guard(|| {
        non_null(out, "out")?;
        let sol = closed_form_example(delta1, delta2, budget)?;
        unsafe { *out = to_c(&sol) };
        Ok(())
    })
}

/// Payoff-space area of the bargaining set. Exact for affine payoffs,
/// otherwise estimated on a `resolution`² raster.
///
/// # Safety
/// `game` must be a live handle; `area` and `degenerate` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dn_bargaining_area(
    game: *const DnGame,
    resolution: usize,
    area: *mut f64,
    degenerate: *mut bool,
) -> DnStatus {
    guard(|| {
        non_null(game, "game")?;
        non_null(area, "area")?;
        non_null(degenerate, "degenerate")?;
        let (a, d) = bargaining_area(unsafe { &(*game).game }, resolution).map_err(|e| {
            let status = match e {
                delta_nash::geometry::ImageError::Resolution(_) => DnStatus::InvalidInput,
                _ => DnStatus::SolverFailure,
            };
            Fail(status, e.to_string())
        })?;
        unsafe {
            *area = a;
            *degenerate = d;
        }
        Ok(())
    })
}

/// Whether some feasible allocation meets both payoff demands.
///
/// # Safety
/// `game` must be a live handle; `compatible` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dn_demands_compatible(
    game: *const DnGame,
    demand1: f64,
    demand2: f64,
    compatible: *mut bool,
) -> DnStatus {
    guard(|| {
        non_null(game, "game")?;
        non_null(compatible, "compatible")?;
        let handle = unsafe { &*game };
        let check = demands_compatible(&handle.game, demand1, demand2, handle.options.grid_resolution)
            .map_err(|e| Fail(DnStatus::SolverFailure, e.to_string()))?;
        unsafe { *compatible = check.compatible };
        Ok(())
    })
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn dn_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}


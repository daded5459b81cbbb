use std::ffi::{CStr, CString};
use std::ptr;

use delta_nash_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dn_last_error_message()) }.to_string_lossy().into_owned()
}

fn split(d1: f64, d2: f64) -> *mut DnGame {
    let mut game = ptr::null_mut();
    assert_eq!(unsafe { dn_game_profit_split(100.0, d1, d2, &mut game) }, DnStatus::Ok);
    assert!(!game.is_null());
    game
}

fn empty_solution() -> DnSolution {
    DnSolution {
        deltas: [0.0; 2],
        disagreement: [0.0; 2],
        has_allocation: false,
        s_star: [0.0; 2],
        p_star: [0.0; 2],
        u_star: [0.0; 2],
        nash_product: 0.0,
        outcome: DnOutcome::Disagreement,
        boundary_claim_mismatch: false,
    }
}

#[test]
fn solve_through_handles() {
    let game = split(1.0, 1.0);
    let mut sol = empty_solution();
    assert_eq!(unsafe { dn_solve(game, &mut sol) }, DnStatus::Ok);
    assert!(sol.has_allocation);
    assert_eq!(sol.outcome, DnOutcome::Agreement);
    assert!((sol.s_star[0] - 50.0).abs() < 1e-9 && (sol.p_star[1] - 50.0).abs() < 1e-9);
    assert_eq!(last_error(), "");

    let mut one_sided = ptr::null_mut();
    assert_eq!(unsafe { dn_game_with_deltas(game, 0.0, 1.0, &mut one_sided) }, DnStatus::Ok);
    assert_eq!(unsafe { dn_solve(one_sided, &mut sol) }, DnStatus::Ok);
    assert!((sol.p_star[0] - 50.0).abs() < 1e-9 && (sol.p_star[1] - 25.0).abs() < 1e-9);
    assert!(sol.boundary_claim_mismatch);

    let (mut area, mut degenerate) = (0.0, true);
    assert_eq!(unsafe { dn_bargaining_area(game, 400, &mut area, &mut degenerate) }, DnStatus::Ok);
    assert!((area - 5000.0).abs() < 1e-6 && !degenerate);

    let mut ok = false;
    assert_eq!(unsafe { dn_demands_compatible(game, 50.0, 50.0, &mut ok) }, DnStatus::Ok);
    assert!(ok);
    assert_eq!(unsafe { dn_demands_compatible(game, 60.0, 60.0, &mut ok) }, DnStatus::Ok);
    assert!(!ok);

    unsafe {
        dn_game_free(one_sided);
        dn_game_free(game);
        dn_game_free(ptr::null_mut());
    }
}

#[test]
fn scenario_text_and_errors() {
    let text = CString::new(
        "budget = 100\n[player1]\nutility = \"s1\"\ndistortion = \"s1 - s2\"\ndelta = 0\n\
         [player2]\nutility = \"s2\"\ndistortion = \"s2 - s1\"\ndelta = 0\n",
    )
    .unwrap();
    let mut game = ptr::null_mut();
    assert_eq!(unsafe { dn_game_from_scenario(text.as_ptr(), &mut game) }, DnStatus::Ok);
    let mut sol = empty_solution();
    assert_eq!(unsafe { dn_solve(game, &mut sol) }, DnStatus::Ok);
    assert_eq!(sol.outcome, DnOutcome::Degenerate);
    assert_eq!(sol.p_star, [0.0, 0.0]);
    unsafe { dn_game_free(game) };

    let bad = CString::new("budget = 100\nbudget2 = 1\n").unwrap();
    let mut game = ptr::null_mut();
    assert_eq!(unsafe { dn_game_from_scenario(bad.as_ptr(), &mut game) }, DnStatus::InvalidInput);
    assert!(game.is_null());
    assert!(last_error().contains("budget2"), "{}", last_error());

    assert_eq!(unsafe { dn_game_from_scenario(ptr::null(), &mut game) }, DnStatus::NullPointer);
    let invalid_utf8 = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { dn_game_from_scenario(invalid_utf8.as_ptr().cast(), &mut game) },
        DnStatus::InvalidUtf8
    );
    assert_eq!(unsafe { dn_game_profit_split(100.0, 1.5, 1.0, &mut game) }, DnStatus::InvalidInput);
    assert_eq!(unsafe { dn_solve(ptr::null(), &mut sol) }, DnStatus::NullPointer);
}

#[test]
fn closed_form_domain() {
    let mut sol = empty_solution();
    assert_eq!(unsafe { dn_closed_form(0.25, 0.75, 100.0, &mut sol) }, DnStatus::Ok);
    assert!((sol.p_star[0] - 32.5).abs() < 1e-9);
    assert_eq!(unsafe { dn_closed_form(0.0, 1.0, 100.0, &mut sol) }, DnStatus::InvalidInput);
    assert!(last_error().contains("delta1"));
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(dn_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

//! Symmetrical (`s*`) and general (`g*`) self-interest levels.
//!
//! Both levels are suprema over weak deviation constraints: at the returned
//! level some player may be indifferent between the target action and its
//! alternative, and any smaller level makes the target strictly dominant.

use std::fmt;

use crate::error::{Error, Result};
use crate::game::{
    self, Action, ActionProfile, CoPlayerProfile, DilemmaKind, NormalFormGame,
};
use crate::lp::{self, LinearProgram, LpStatus, SolverOptions};
use crate::transfer::{self, exchange_matrix, ExcessReport, TransferMatrix};

/// Deviation constraints with slack below this are reported as binding.
pub const BINDING_TOL: f64 = 1e-7;

/// Base tolerance for verifying a witness; scaled by the game's payoff magnitude.
pub const VERIFY_TOL: f64 = 1e-9;

/// Tolerance used when snapping solver output onto `[0, 1]`.
const ENTRY_CLAMP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Symmetric,
    General,
    GeneralWithExcess,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Symmetric => "symmetric",
            Mode::General => "general",
            Mode::GeneralWithExcess => "general-with-excess",
        })
    }
}

/// Tie-break among optimal transfer matrices, run with `z` held at `g*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondStage {
    None,
    /// Maximize the sum of the diagonal.
    MaxDiagonalSum,
    /// Minimize the total share sent to other players.
    MinTransfers,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfInterestResult {
    pub mode: Mode,
    pub level: f64,
    pub matrix: TransferMatrix,
    pub target: ActionProfile,
    pub binding: Vec<CoPlayerProfile>,
    pub excess: ExcessReport,
    pub strictly_dominant: bool,
    pub lp_iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralOptions {
    pub target: Option<ActionProfile>,
    pub allow_excess: bool,
    pub force: bool,
    /// Defaults to `MinTransfers` with excess allowed, `None` otherwise.
    pub second_stage: Option<SecondStage>,
    pub verify_tol: f64,
    pub binding_tol: f64,
    pub solver: SolverOptions,
}

impl Default for GeneralOptions {
    fn default() -> Self {
        GeneralOptions {
            target: None,
            allow_excess: false,
            force: false,
            second_stage: None,
            verify_tol: VERIFY_TOL,
            binding_tol: BINDING_TOL,
            solver: SolverOptions {
                feas_tol: 1e-10,
                opt_tol: 1e-10,
                ..SolverOptions::default()
            },
        }
    }
}

impl GeneralOptions {
    pub fn with_target(mut self, target: ActionProfile) -> Self {
        self.target = Some(target);
        self
    }

    pub fn with_excess(mut self, allow: bool) -> Self {
        self.allow_excess = allow;
        self
    }

    pub fn forced(mut self, force: bool) -> Self {
        self.force = force;
        self
    }

    pub fn with_second_stage(mut self, stage: SecondStage) -> Self {
        self.second_stage = Some(stage);
        self
    }
}

fn resolve_target(game: &NormalFormGame, target: Option<ActionProfile>) -> Result<ActionProfile> {
    let target = target.unwrap_or_else(|| ActionProfile::all(Action::C, game.players()));
    game.check_profile(target)?;
    Ok(target)
}

fn warn_if_not_optimum(game: &NormalFormGame, target: ActionProfile) {
    if !game::social_optima(game, game::DEFAULT_TOL).contains(&target) {
        log::warn!("target {target} is not a social welfare optimum");
    }
}

fn payoff_scale(game: &NormalFormGame) -> f64 {
    game.flat_payoffs().iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

/// The largest `s` for which reward exchange at `s` makes `target` (all-C by
/// default) weakly dominant.
///
/// Each (player, co-player profile) pair contributes the linear condition
/// `s * own_gain + (1 - s) / (n - 1) * others_gain <= 0`, where the gains are
/// measured when the player switches away from its target action.
pub fn symmetrical_level(game: &NormalFormGame, target: Option<ActionProfile>) -> Result<SelfInterestResult> {
    let target = resolve_target(game, target)?;
    warn_if_not_optimum(game, target);
    let n = game.players();
    let share = 1.0 / (n - 1) as f64;
    let eps = 1e-12 * payoff_scale(game);

    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for player in 0..n {
        let own = target.action(player);
        for co in CoPlayerProfile::enumerate(player, n) {
            let tgt = game.rewards(co.with_action(own));
            let alt = game.rewards(co.with_action(own.other()));
            let own_gain = alt[player] - tgt[player];
            let others_gain: f64 = (0..n)
                .filter(|&j| j != player)
                .map(|j| alt[j] - tgt[j])
                .sum::<f64>()
                * share;
            // slope * s + others_gain <= 0
            let slope = own_gain - others_gain;
            if slope > eps {
                hi = hi.min(-others_gain / slope);
            } else if slope < -eps {
                lo = lo.max(-others_gain / slope);
            } else if others_gain > eps {
                return Err(Error::NotResolvable(format!(
                    "reward exchange cannot stop player {} deviating against co-players {co}",
                    player + 1
                )));
            }
        }
    }
    if lo > hi + 1e-12 {
        return Err(Error::NotResolvable(format!(
            "no exchange level resolves the game (needs s >= {lo:.6} and s <= {hi:.6})"
        )));
    }
    let level = hi.clamp(0.0, 1.0);
    let matrix = exchange_matrix(n, level)?;
    finish(game, Mode::Symmetric, level, matrix, target, BINDING_TOL, 0)
}

/// Variable index of `t[from][to]`; variable 0 is the auxiliary `z`.
pub fn transfer_var(n: usize, from: usize, to: usize) -> usize {
    1 + from * n + to
}

/// The transfer-matrix LP: maximize `z` subject to `t_ii >= z`,
/// `0 <= t_ij <= 1`, row sums equal to one (at most one with excess), and one
/// weak deviation constraint per player and co-player profile.
///
/// Rows are emitted auxiliary constraints first, then deviation constraints
/// with players outer and co-player profiles inner in ascending bit order,
/// then (with excess) the row-sum inequalities.
pub fn build_transfer_lp(game: &NormalFormGame, target: ActionProfile, allow_excess: bool) -> Result<LinearProgram> {
    game.check_profile(target)?;
    let n = game.players();
    let mut lp = LinearProgram::new(1 + n * n);
    lp.set_objective_coef(0, 1.0)?;
    for v in 0..1 + n * n {
        lp.set_bounds(v, 0.0, 1.0)?;
    }
    for i in 0..n {
        lp.add_le_terms(&[(0, 1.0), (transfer_var(n, i, i), -1.0)], 0.0)?;
    }
    let mut terms = Vec::with_capacity(n);
    for player in 0..n {
        let own = target.action(player);
        for co in CoPlayerProfile::enumerate(player, n) {
            let tgt = game.rewards(co.with_action(own));
            let alt = game.rewards(co.with_action(own.other()));
            terms.clear();
            terms.extend((0..n).map(|j| (transfer_var(n, j, player), alt[j] - tgt[j])));
            lp.add_le_terms(&terms, 0.0)?;
        }
    }
    for i in 0..n {
        let row: Vec<(usize, f64)> = (0..n).map(|j| (transfer_var(n, i, j), 1.0)).collect();
        if allow_excess {
            lp.add_le_terms(&row, 1.0)?;
        } else {
            lp.add_eq_terms(&row, 1.0)?;
        }
    }
    Ok(lp)
}

fn refuse_non_dilemma(game: &NormalFormGame, force: bool) -> Result<()> {
    if force {
        return Ok(());
    }
    let class = game::classify_dilemma(game);
    if class.kind == DilemmaKind::NotDilemma {
        return Err(Error::NotADilemma(class));
    }
    Ok(())
}

fn solve_or_explain(lp: &LinearProgram, opts: &SolverOptions, target: ActionProfile) -> Result<lp::LpSolution> {
    let sol = lp::solve_lp_with(lp, opts)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol),
        LpStatus::Infeasible => Err(Error::NotResolvable(format!(
            "no transfer matrix makes {target} dominant"
        ))),
        LpStatus::Unbounded => Err(Error::Internal("transfer LP reported unbounded".into())),
    }
}

/// The general self-interest level `g*` and a minimal transfer matrix.
pub fn general_level(game: &NormalFormGame, opts: &GeneralOptions) -> Result<SelfInterestResult> {
    refuse_non_dilemma(game, opts.force)?;
    let target = resolve_target(game, opts.target)?;
    warn_if_not_optimum(game, target);
    let n = game.players();

    let lp = build_transfer_lp(game, target, opts.allow_excess)?;
    let first = solve_or_explain(&lp, &opts.solver, target)?;
    let z = first.x[0];
    let mut iterations = first.iterations;
    let mut x = first.x;

    let stage = opts.second_stage.unwrap_or(if opts.allow_excess {
        SecondStage::MinTransfers
    } else {
        SecondStage::None
    });
    if stage != SecondStage::None {
        let mut second = lp.clone();
        second.set_bounds(0, (z - opts.solver.feas_tol).max(0.0), 1.0)?;
        let mut c = vec![0.0; 1 + n * n];
        for i in 0..n {
            for j in 0..n {
                let v = transfer_var(n, i, j);
                c[v] = match stage {
                    SecondStage::MaxDiagonalSum if i == j => 1.0,
                    SecondStage::MinTransfers if i != j => -1.0,
                    _ => 0.0,
                };
            }
        }
        second.maximize(c)?;
        let sol = lp::solve_lp_with(&second, &opts.solver)?;
        iterations += sol.iterations;
        if sol.status == LpStatus::Optimal {
            x = sol.x;
        } else {
            log::warn!("second-stage LP ended {}; keeping the first-stage matrix", sol.status);
        }
    }

    let mut entries = x[1..].to_vec();
    if !opts.allow_excess {
        for row in entries.chunks_exact_mut(n) {
            let s: f64 = row.iter().map(|v| v.max(0.0)).sum();
            row.iter_mut().for_each(|v| *v = v.max(0.0) / s);
        }
    }
    let matrix = TransferMatrix::from_flat_with_clamp(n, entries, ENTRY_CLAMP)?;
    let mode = if opts.allow_excess {
        Mode::GeneralWithExcess
    } else {
        Mode::General
    };
    let result = finish(game, mode, z.clamp(0.0, 1.0), matrix, target, opts.binding_tol, iterations)?;
    check_witness(game, &result, opts.verify_tol)?;
    Ok(result)
}

/// Checks that `generator` is a single `n`-cycle under which the game is invariant.
pub fn check_cyclic_symmetry(game: &NormalFormGame, generator: &[usize], tol: f64) -> Result<()> {
    let n = game.players();
    if generator.len() != n {
        return Err(Error::invalid(format!(
            "generator has {} entries for {n} players",
            generator.len()
        )));
    }
    let mut seen = vec![false; n];
    for &g in generator {
        if g >= n || seen[g] {
            return Err(Error::invalid("generator is not a permutation of the players"));
        }
        seen[g] = true;
    }
    let mut p = 0;
    for step in 1..=n {
        p = generator[p];
        if p == 0 && step < n {
            return Err(Error::invalid("generator must be a single cycle through every player"));
        }
    }
    for prof in game.profiles() {
        let moved = permute_profile(prof, generator);
        for (i, &image) in generator.iter().enumerate() {
            if (game.reward(moved, image) - game.reward(prof, i)).abs() > tol {
                return Err(Error::invalid(format!(
                    "game is not invariant under the generator at profile {prof}, player {}",
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

fn permute_profile(p: ActionProfile, generator: &[usize]) -> ActionProfile {
    let mut bits = 0usize;
    for (k, &g) in generator.iter().enumerate() {
        bits |= p.action(k).bit() << g;
    }
    ActionProfile::new(bits, p.players()).expect("permutation keeps the width")
}

/// `g*` for games invariant under a cyclic relabelling of the players,
/// solving only for the first row; the other rows are its images under the
/// generator.
pub fn general_level_symmetric_fastpath(
    game: &NormalFormGame,
    generator: &[usize],
    opts: &GeneralOptions,
) -> Result<SelfInterestResult> {
    check_cyclic_symmetry(game, generator, 1e-12 * payoff_scale(game))?;
    refuse_non_dilemma(game, opts.force)?;
    let target = resolve_target(game, opts.target)?;
    if permute_profile(target, generator) != target {
        return Err(Error::invalid(format!("target {target} is not invariant under the generator")));
    }
    let n = game.players();

    // orbit[m] = generator^m(0); power[m][j] = generator^m(j)
    let mut power = vec![(0..n).collect::<Vec<_>>()];
    for m in 1..n {
        let prev = &power[m - 1];
        power.push(prev.iter().map(|&j| generator[j]).collect());
    }

    // t[g^m(0)][g^m(j)] = x_j, so column 0 entry of row g^m(0) is x_{g^-m(0)}
    let mut lp = LinearProgram::new(n);
    lp.set_objective_coef(0, 1.0)?;
    for j in 0..n {
        lp.set_bounds(j, 0.0, 1.0)?;
    }
    let own = target.action(0);
    for co in CoPlayerProfile::enumerate(0, n) {
        let tgt = game.rewards(co.with_action(own));
        let alt = game.rewards(co.with_action(own.other()));
        let mut row = vec![0.0; n];
        for pm in &power {
            let giver = pm[0];
            let j = pm.iter().position(|&v| v == 0).expect("permutation");
            row[j] += alt[giver] - tgt[giver];
        }
        lp.add_le(row, 0.0)?;
    }
    if opts.allow_excess {
        lp.add_le(vec![1.0; n], 1.0)?;
    } else {
        lp.add_eq(vec![1.0; n], 1.0)?;
    }
    let sol = solve_or_explain(&lp, &opts.solver, target)?;

    let mut first = sol.x.clone();
    if !opts.allow_excess {
        let s: f64 = first.iter().sum();
        first.iter_mut().for_each(|v| *v /= s);
    }
    let mut entries = vec![0.0; n * n];
    for pm in &power {
        for j in 0..n {
            entries[pm[0] * n + pm[j]] = first[j];
        }
    }
    let matrix = TransferMatrix::from_flat_with_clamp(n, entries, ENTRY_CLAMP)?;
    let mode = if opts.allow_excess {
        Mode::GeneralWithExcess
    } else {
        Mode::General
    };
    let result = finish(game, mode, sol.x[0].clamp(0.0, 1.0), matrix, target, opts.binding_tol, sol.iterations)?;
    check_witness(game, &result, opts.verify_tol)?;
    Ok(result)
}

fn finish(
    game: &NormalFormGame,
    mode: Mode,
    level: f64,
    matrix: TransferMatrix,
    target: ActionProfile,
    binding_tol: f64,
    lp_iterations: usize,
) -> Result<SelfInterestResult> {
    let transformed = transfer::apply_transfers(game, &matrix)?;
    let report = game::check_dominance(&transformed, target, binding_tol * payoff_scale(game))?;
    let mut result = SelfInterestResult {
        mode,
        level,
        excess: transfer::excess_report(&matrix),
        matrix,
        target,
        binding: Vec::new(),
        strictly_dominant: report.strictly_dominant,
        lp_iterations,
    };
    result.binding = binding_constraints(game, &result, binding_tol)?;
    Ok(result)
}

fn check_witness(game: &NormalFormGame, result: &SelfInterestResult, tol: f64) -> Result<()> {
    let report = transfer::verify_resolution(game, &result.matrix, result.target, tol * payoff_scale(game))?;
    if !report.weakly_dominant {
        let worst = report.max_gap().unwrap_or(0.0);
        return Err(Error::Internal(format!(
            "solver witness leaves a deviation gain of {worst:e}"
        )));
    }
    Ok(())
}

/// Deviation constraints that hold with equality (within `tolerance`) under
/// the result's matrix.
pub fn binding_constraints(
    game: &NormalFormGame,
    result: &SelfInterestResult,
    tolerance: f64,
) -> Result<Vec<CoPlayerProfile>> {
    game.check_profile(result.target)?;
    let transformed = transfer::apply_transfers(game, &result.matrix)?;
    let n = game.players();
    let mut out = Vec::new();
    for player in 0..n {
        let own = result.target.action(player);
        for co in CoPlayerProfile::enumerate(player, n) {
            let gap = transformed.reward(co.with_action(own.other()), player)
                - transformed.reward(co.with_action(own), player);
            if gap.abs() <= tolerance {
                out.push(co);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn cc(n: usize) -> ActionProfile {
        ActionProfile::all(Action::C, n)
    }

    #[test]
    fn symmetric_base_games() {
        let pd = symmetrical_level(&examples::prisoners_dilemma(), None).unwrap();
        assert!((pd.level - 0.75).abs() < 1e-12);
        assert!(!pd.strictly_dominant);
        for g in [examples::chicken(), examples::stag_hunt()] {
            let r = symmetrical_level(&g, None).unwrap();
            assert!((r.level - 2.0 / 3.0).abs() < 1e-12);
        }
        for g in [examples::symmetrical_3pd(), examples::cyclical_3pd()] {
            let r = symmetrical_level(&g, None).unwrap();
            assert!((r.level - 0.6).abs() < 1e-12);
        }
    }

    #[test]
    fn pd_binding_at_supremum() {
        let pd = examples::prisoners_dilemma();
        let r = symmetrical_level(&pd, None).unwrap();
        for player in 0..2 {
            let all_c = cc(2).coplayers(player);
            assert!(r.binding.contains(&all_c), "player {player} not bound");
        }
        let mut slack = r.clone();
        slack.matrix = exchange_matrix(2, 0.6).unwrap();
        assert!(binding_constraints(&pd, &slack, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn constraint_counts() {
        let g = examples::arbitrary_dilemma();
        let lp = build_transfer_lp(&g, cc(3), false).unwrap();
        assert_eq!(lp.num_vars(), 10);
        assert_eq!(lp.num_inequalities(), 3 + 3 * 4);
        assert_eq!(lp.num_equalities(), 3);
        let lp = build_transfer_lp(&g, cc(3), true).unwrap();
        assert_eq!(lp.num_inequalities(), 3 + 3 * 4 + 3);
        assert_eq!(lp.num_equalities(), 0);
    }

    #[test]
    fn cyclical_general() {
        let r = general_level(&examples::cyclical_3pd(), &GeneralOptions::default()).unwrap();
        assert!((r.level - 0.75).abs() < 1e-9, "{}", r.level);
        let fast = general_level_symmetric_fastpath(&examples::cyclical_3pd(), &[1, 2, 0], &GeneralOptions::default()).unwrap();
        assert!((fast.level - 0.75).abs() < 1e-9);
    }

    #[test]
    fn refuses_non_dilemma_without_force() {
        let g = examples::too_many_cooks();
        let t = ActionProfile::parse("DCC").unwrap();
        let err = general_level(&g, &GeneralOptions::default().with_target(t)).unwrap_err();
        assert!(matches!(err, Error::NotADilemma(_)));
        let r = general_level(&g, &GeneralOptions::default().with_target(t).forced(true)).unwrap();
        assert!((r.level - 3.0 / 11.0).abs() < 1e-9);
    }

    #[test]
    fn exchange_cannot_fix_too_many_cooks() {
        let t = ActionProfile::parse("DCC").unwrap();
        assert!(matches!(
            symmetrical_level(&examples::too_many_cooks(), Some(t)),
            Err(Error::NotResolvable(_))
        ));
    }

    #[test]
    fn dominant_target_needs_no_transfers() {
        let t = ActionProfile::parse("DD").unwrap();
        let r = general_level(&examples::prisoners_dilemma(), &GeneralOptions::default().with_target(t)).unwrap();
        assert!((r.level - 1.0).abs() < 1e-9);
        assert!(r.matrix.max_abs_diff(&TransferMatrix::identity(2)).unwrap() < 1e-9);
    }

    #[test]
    fn fastpath_rejects_bad_generators() {
        let g = examples::cyclical_3pd();
        let o = GeneralOptions::default();
        assert!(general_level_symmetric_fastpath(&g, &[0, 1, 2], &o).is_err());
        assert!(general_level_symmetric_fastpath(&g, &[1, 1, 0], &o).is_err());
        assert!(general_level_symmetric_fastpath(&examples::arbitrary_dilemma(), &[1, 2, 0], &o).is_err());
    }
}
